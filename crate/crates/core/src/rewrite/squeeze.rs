//! Identities that move `SH` syllables out of the first four blocks.

use std::sync::OnceLock;

use crate::clifford::Clifford;
use crate::error::Error;
use crate::psu2::ExactUnitary;
use crate::rewrite::word::GateWord;

/// `pattern = G[left] · core · G[right]`, where `pattern·H` spells the
/// blocks in `bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Squeeze {
    pub pattern: &'static str,
    pub bits: &'static [bool],
    pub left: u8,
    pub core: &'static str,
    pub right: u8,
}

const F: bool = false;
const S: bool = true;

pub const SQUEEZES: [Squeeze; 11] = [
    Squeeze { pattern: "THSHT", bits: &[F, S], left: 2, core: "THT", right: 4 },
    Squeeze { pattern: "THTHSHT", bits: &[F, F, S], left: 3, core: "THTHT", right: 4 },
    Squeeze { pattern: "THSHTHT", bits: &[F, S, F], left: 10, core: "THTHT", right: 11 },
    Squeeze { pattern: "THSHTHSHT", bits: &[F, S, S], left: 2, core: "THTHT", right: 5 },
    Squeeze { pattern: "THTHTHSHT", bits: &[F, F, F, S], left: 11, core: "THTHTHT", right: 4 },
    Squeeze { pattern: "THTHSHTHT", bits: &[F, F, S, F], left: 12, core: "THTHTHT", right: 11 },
    Squeeze { pattern: "THSHTHTHT", bits: &[F, S, F, F], left: 4, core: "THTHTHT", right: 12 },
    Squeeze { pattern: "THTHSHTHSHT", bits: &[F, F, S, S], left: 3, core: "THTHTHT", right: 5 },
    Squeeze { pattern: "THSHTHSHTHT", bits: &[F, S, S, F], left: 5, core: "THTHTHT", right: 3 },
    Squeeze { pattern: "THSHTHTHSHT", bits: &[F, S, F, S], left: 10, core: "THTHTHT", right: 10 },
    Squeeze { pattern: "THSHTHSHTHSHT", bits: &[F, S, S, S], left: 2, core: "THTHTHT", right: 2 },
];

/// Two rows as they are usually printed; both differ from [`SQUEEZES`] in
/// one Clifford index and do not hold.
pub const MISPRINTED: [Squeeze; 2] = [
    Squeeze { pattern: "THTHSHT", bits: &[F, F, S], left: 3, core: "THTHT", right: 2 },
    Squeeze { pattern: "THTHSHTHT", bits: &[F, F, S, F], left: 5, core: "THTHTHT", right: 11 },
];

fn exact(w: &str) -> ExactUnitary<i64> {
    GateWord::parse(w).expect("static word").to_unitary()
}

impl Squeeze {
    pub fn left(&self) -> Clifford {
        Clifford::new(self.left as usize).expect("index < 24")
    }

    pub fn right(&self) -> Clifford {
        Clifford::new(self.right as usize).expect("index < 24")
    }

    /// Exact check of the identity and of the block encoding.
    pub fn holds(&self) -> bool {
        let rhs = self.left().matrix().mul(&exact(self.core)).mul(self.right().matrix());
        let spelled: String = self.bits.iter().map(|&b| if b { "SHTH" } else { "TH" }).collect();
        exact(self.pattern).psu2_eq(&rhs) && spelled == format!("{}H", self.pattern)
    }
}

/// `SHTH = HSHT·HSS`.
pub fn lemma1_holds() -> bool {
    exact("SHTH").psu2_eq(&exact("HSHT").mul(&exact("HSS")))
}

pub fn verify_squeezes() -> Result<(), Error> {
    for s in &SQUEEZES {
        if !s.holds() {
            return Err(Error::Table(format!("squeeze {} ≠ G{}·{}·G{}", s.pattern, s.left, s.core, s.right)));
        }
    }
    if !lemma1_holds() {
        return Err(Error::Table("SHTH ≠ HSHT·HSS".into()));
    }
    Ok(())
}

fn table() -> &'static [Squeeze; 11] {
    static CHECKED: OnceLock<()> = OnceLock::new();
    CHECKED.get_or_init(|| {
        if let Err(e) = verify_squeezes() {
            panic!("{e}");
        }
    });
    &SQUEEZES
}

/// The identity for a prefix of 2..=4 blocks, if it carries an `SH`.
pub fn lookup(bits: &[bool]) -> Option<&'static Squeeze> {
    table().iter().find(|s| s.bits == bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_rows_and_lemma_hold() {
        verify_squeezes().unwrap();
        for s in &SQUEEZES {
            assert!(s.holds(), "{}", s.pattern);
        }
        assert!(lemma1_holds());
    }

    #[test]
    fn misprinted_rows_fail() {
        for s in &MISPRINTED {
            assert!(!s.holds(), "{}", s.pattern);
        }
    }

    #[test]
    fn table_covers_every_sh_prefix() {
        for k in 2..=4usize {
            for v in 0..(1u32 << (k - 1)) {
                let bits: Vec<bool> = std::iter::once(false).chain((0..k - 1).map(|i| v >> i & 1 == 1)).collect();
                assert_eq!(lookup(&bits).is_some(), v != 0, "{bits:?}");
            }
        }
    }

    #[test]
    fn related_identities() {
        assert!(exact("THSHSHTH").psu2_eq(&exact("H")));
        assert!(exact("THTHSHSHTH").psu2_eq(&exact("T")));
        assert!(exact("SHSHSH").psu2_eq(&ExactUnitary::identity()));
    }
}
