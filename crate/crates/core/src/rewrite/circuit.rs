use std::fmt;
use std::ops::Deref;

use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use serde::{Deserialize, Serialize};

use crate::clifford::Clifford;
use crate::error::Error;
use crate::psu2::{ExactUnitary, GateSymbol, Quat};
use crate::rewrite::word::{gate_quats, GateWord};
use crate::scalar::RingInt;

const TH: [GateSymbol; 2] = [GateSymbol::T, GateSymbol::H];
const SHTH: [GateSymbol; 4] = [GateSymbol::S, GateSymbol::H, GateSymbol::T, GateSymbol::H];

/// Product of `TH` / `SH·TH` blocks; bit `i` is set when block `i` is `SH·TH`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalizedCircuit {
    blocks: Vec<bool>,
}

impl NormalizedCircuit {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_blocks(blocks: Vec<bool>) -> Self {
        Self { blocks }
    }

    /// Read the syllable form `"THSHTH…"` (whitespace ignored).
    pub fn parse_syllables(text: &str) -> Result<Self, Error> {
        let chars: Vec<(usize, char)> =
            text.chars().enumerate().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut blocks = Vec::new();
        let mut i = 0;
        let expect = |i: usize, want: char| -> Result<(), Error> {
            match chars.get(i) {
                Some(&(_, c)) if c.to_ascii_uppercase() == want => Ok(()),
                Some(&(pos, ch)) => Err(Error::Parse { pos, ch }),
                None => Err(Error::Parse { pos: text.chars().count(), ch: '\0' }),
            }
        };
        while i < chars.len() {
            let sh = chars[i].1.eq_ignore_ascii_case(&'S');
            if sh {
                expect(i + 1, 'H')?;
                i += 2;
            }
            expect(i, 'T')?;
            expect(i + 1, 'H')?;
            i += 2;
            blocks.push(sh);
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[bool] {
        &self.blocks
    }

    pub fn t_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// No `SH` among the first four blocks.
    pub fn is_canonical(&self) -> bool {
        !self.blocks.iter().take(4).any(|&b| b)
    }

    pub fn gates(&self) -> impl Iterator<Item = GateSymbol> + '_ {
        self.blocks.iter().flat_map(|&sh| if sh { &SHTH[..] } else { &TH[..] }).copied()
    }

    pub fn word(&self) -> GateWord {
        self.gates().collect()
    }

    pub fn to_unitary<I: RingInt>(&self) -> ExactUnitary<I> {
        ExactUnitary::from_gates(self.gates())
    }

    pub fn to_quat(&self) -> Quat<f64> {
        let [th, shth] = block_quats();
        self.blocks.iter().fold(Quat::identity(), |acc, &b| acc.mul(if b { shth } else { th }))
    }

    /// Bits packed least-significant first, `ceil(t/8)` bytes.
    pub fn to_packed(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.blocks.len().div_ceil(8)];
        for (i, &b) in self.blocks.iter().enumerate() {
            if b {
                out[i / 8] |= 1 << (i % 8);
            }
        }
        out
    }

    pub fn from_packed(bytes: &[u8], t: usize) -> Result<Self, Error> {
        if bytes.len() != t.div_ceil(8) {
            return Err(Error::Format(format!("{} block bytes for t = {t}", bytes.len())));
        }
        if t % 8 != 0 && bytes[t / 8] >> (t % 8) != 0 {
            return Err(Error::Format("padding bits set".into()));
        }
        Ok(Self { blocks: (0..t).map(|i| bytes[i / 8] >> (i % 8) & 1 == 1).collect() })
    }
}

impl fmt::Display for NormalizedCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.blocks {
            f.write_str(if b { "SHTH" } else { "TH" })?;
        }
        Ok(())
    }
}

fn block_quats() -> &'static [Quat<f64>; 2] {
    use std::sync::OnceLock;
    static Q: OnceLock<[Quat<f64>; 2]> = OnceLock::new();
    Q.get_or_init(|| {
        let [h, t, s] = gate_quats();
        let th = t.mul(h);
        [th, s.mul(h).mul(&th)]
    })
}

/// A normalized circuit with no `SH` before the fifth block.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCircuit(NormalizedCircuit);

impl CanonicalCircuit {
    pub fn new(c: NormalizedCircuit) -> Option<Self> {
        c.is_canonical().then_some(Self(c))
    }

    pub fn into_inner(self) -> NormalizedCircuit {
        self.0
    }
}

impl Deref for CanonicalCircuit {
    type Target = NormalizedCircuit;
    fn deref(&self) -> &NormalizedCircuit {
        &self.0
    }
}

impl fmt::Display for CanonicalCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `[H·] body · tail`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub h_prefix: bool,
    pub body: NormalizedCircuit,
    pub tail: Clifford,
}

impl NormalForm {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn t_count(&self) -> usize {
        self.body.t_count()
    }

    pub fn gates(&self) -> impl Iterator<Item = GateSymbol> + '_ {
        let head = self.h_prefix.then_some(GateSymbol::H);
        head.into_iter().chain(self.body.gates()).chain(self.tail.gates())
    }

    pub fn word(&self) -> GateWord {
        self.gates().collect()
    }

    pub fn to_unitary<I: RingInt>(&self) -> ExactUnitary<I> {
        let mut u = if self.h_prefix {
            ExactUnitary::gate(GateSymbol::H)
        } else {
            ExactUnitary::identity()
        };
        u = u.mul(&self.body.to_unitary());
        u.mul(&self.tail.matrix().cast().expect("widening cast"))
    }

    pub fn to_quat(&self) -> Quat<f64> {
        let [h, _, _] = gate_quats();
        let head = if self.h_prefix { *h } else { Quat::identity() };
        head.mul(&self.body.to_quat()).mul(&self.tail.matrix().to_quat())
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.h_prefix {
            f.write_str("H.")?;
        }
        if self.body.is_empty() {
            f.write_str("Id")?;
        } else {
            write!(f, "{}", self.body)?;
        }
        write!(f, ".{}", self.tail)
    }
}

/// `g1 · body · g2` with a canonical body.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CosetFormJson", into = "CosetFormJson")]
pub struct CosetForm {
    pub g1: Clifford,
    pub body: CanonicalCircuit,
    pub g2: Clifford,
}

impl CosetForm {
    pub fn t_count(&self) -> usize {
        self.body.t_count()
    }

    pub fn gates(&self) -> impl Iterator<Item = GateSymbol> + '_ {
        self.g1.gates().chain(self.body.gates()).chain(self.g2.gates())
    }

    pub fn word(&self) -> GateWord {
        self.gates().collect()
    }

    pub fn to_unitary<I: RingInt>(&self) -> ExactUnitary<I> {
        let g1: ExactUnitary<I> = self.g1.matrix().cast().expect("widening cast");
        let g2: ExactUnitary<I> = self.g2.matrix().cast().expect("widening cast");
        g1.mul(&self.body.to_unitary()).mul(&g2)
    }

    pub fn to_quat(&self) -> Quat<f64> {
        self.g1.matrix().to_quat().mul(&self.body.to_quat()).mul(&self.g2.matrix().to_quat())
    }
}

impl fmt::Display for CosetForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = if self.body.is_empty() { "Id".to_string() } else { self.body.to_string() };
        write!(f, "{}.{}.{}", self.g1, body, self.g2)
    }
}

#[derive(Serialize, Deserialize)]
struct CosetFormJson {
    g1: u8,
    blocks: String,
    t_count: usize,
    g2: u8,
}

impl From<CosetForm> for CosetFormJson {
    fn from(c: CosetForm) -> Self {
        Self {
            g1: c.g1.idx() as u8,
            blocks: B64.encode(c.body.to_packed()),
            t_count: c.t_count(),
            g2: c.g2.idx() as u8,
        }
    }
}

impl TryFrom<CosetFormJson> for CosetForm {
    type Error = Error;
    fn try_from(j: CosetFormJson) -> Result<Self, Error> {
        let cl = |i: u8| Clifford::new(i as usize).ok_or_else(|| Error::Format(format!("G{i}")));
        let bytes = B64.decode(&j.blocks).map_err(|e| Error::Format(e.to_string()))?;
        let body = NormalizedCircuit::from_packed(&bytes, j.t_count)?;
        let body = CanonicalCircuit::new(body).ok_or_else(|| Error::Format("body not canonical".into()))?;
        Ok(Self { g1: cl(j.g1)?, body, g2: cl(j.g2)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn serialize_syllables() {
        let c = NormalizedCircuit::from_blocks(vec![false, true]);
        assert_eq!(c.to_string(), "THSHTH");
        assert_eq!(c.word().to_string(), "THSHTH");
        assert_eq!(NormalizedCircuit::parse_syllables("th shth").unwrap(), c);
        assert!(NormalizedCircuit::parse_syllables("THSH").is_err());
        assert!(NormalizedCircuit::parse_syllables("HT").is_err());
    }

    #[test]
    fn canonical_shape() {
        let c = NormalizedCircuit::from_blocks(vec![false, false, false, false, true]);
        assert!(CanonicalCircuit::new(c).is_some());
        let c = NormalizedCircuit::from_blocks(vec![false, false, false, true, false]);
        assert!(CanonicalCircuit::new(c).is_none());
    }

    #[test]
    fn no_sh_squared_in_decoded_words() {
        let c = NormalizedCircuit::from_blocks(vec![true, true, false, true]);
        let w = c.word().to_string();
        assert!(!w.contains("SHSH") && w.ends_with("TH"));
        assert_eq!(c.word().t_gates(), c.t_count());
    }

    #[test]
    fn coset_json() {
        let body = NormalizedCircuit::from_blocks(vec![false, false, false, false, true, true, false, false, true]);
        let c = CosetForm { g1: Clifford::new(7).unwrap(), body: CanonicalCircuit::new(body).unwrap(), g2: Clifford::H };
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"t_count\":9") && s.contains("\"g1\":7"));
        let back: CosetForm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        let bad = s.replace("\"g2\":1", "\"g2\":24");
        assert!(serde_json::from_str::<CosetForm>(&bad).is_err());
    }

    proptest! {
        #[test]
        fn packed_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..70)) {
            let c = NormalizedCircuit::from_blocks(bits);
            let back = NormalizedCircuit::from_packed(&c.to_packed(), c.t_count()).unwrap();
            prop_assert_eq!(back, c.clone());
            prop_assert_eq!(NormalizedCircuit::parse_syllables(&c.to_string()).unwrap(), c);
        }

        #[test]
        fn numeric_and_exact_agree(bits in proptest::collection::vec(any::<bool>(), 0..40)) {
            let c = NormalizedCircuit::from_blocks(bits);
            prop_assert!(c.to_quat().dist(&c.to_unitary::<BigInt>().to_quat()) < 1e-10);
        }
    }
}
