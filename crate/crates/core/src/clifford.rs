//! The 24-element group ⟨H, S⟩ in PSU(2) and its commutation relations with T.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::Error;
use crate::psu2::{ExactUnitary, GateSymbol};
use crate::scalar::RingInt;

/// Defining words, indexed as G0..G23.
pub const WORDS: [&str; 24] = [
    "", "H", "HSSH", "SS", "S", "SSS", "HSS", "SSH", "SH", "SSSH", "SSHSSH", "SHSSH", "SSSHSSH", "HS",
    "HSSS", "SSHSS", "SHSS", "SSSHSS", "HSH", "HSSSH", "HSHSSH", "HSSSHSSH", "SSSHS", "SHSSS",
];

/// How `g·T` is rewritten.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CommKind {
    /// `g·T = T·r`
    Plain,
    /// `g·T = H·T·r`
    HPrefix,
    /// `g·T = HSH·T·r`
    HshPrefix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CommutationRule {
    pub kind: CommKind,
    pub residual: Clifford,
}

/// Element of the Clifford group, by table index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clifford(u8);

pub type CliffordElement = Clifford;

impl Clifford {
    pub const ID: Self = Self(0);
    pub const H: Self = Self(1);
    pub const SS: Self = Self(3);
    pub const S: Self = Self(4);
    pub const S3: Self = Self(5);
    pub const HSS: Self = Self(6);
    pub const SH: Self = Self(8);
    pub const HS3: Self = Self(14);
    pub const HSH: Self = Self(18);

    pub fn new(idx: usize) -> Option<Self> {
        (idx < 24).then_some(Self(idx as u8))
    }

    pub fn all() -> impl Iterator<Item = Self> + Clone {
        (0..24u8).map(Self)
    }

    pub fn idx(self) -> usize {
        self.0 as usize
    }

    pub fn word(self) -> &'static str {
        WORDS[self.idx()]
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    pub fn matrix(self) -> &'static ExactUnitary<i64> {
        &tables().matrices[self.idx()]
    }

    pub fn mul(self, o: Self) -> Self {
        Self(tables().mult[self.idx()][o.idx()])
    }

    pub fn inv(self) -> Self {
        Self(tables().inv[self.idx()])
    }

    pub fn commute_through_t(self) -> Result<CommutationRule, Error> {
        tables().comm[self.idx()].ok_or(Error::IdentityCommutation)
    }

    /// Signed permutation matrix of `v ↦ g·v·g†` on Pauli coordinates.
    pub fn rotation(self) -> &'static [[i8; 3]; 3] {
        &tables().rotations[self.idx()]
    }

    pub fn gates(self) -> impl Iterator<Item = GateSymbol> {
        self.word().chars().filter_map(GateSymbol::from_char)
    }
}

impl fmt::Display for Clifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}", self.0)
    }
}

pub struct CliffordTables {
    pub matrices: Vec<ExactUnitary<i64>>,
    pub mult: [[u8; 24]; 24],
    pub inv: [u8; 24],
    pub comm: [Option<CommutationRule>; 24],
    pub rotations: [[[i8; 3]; 3]; 24],
    keys: HashMap<ExactUnitary<i64>, u8>,
}

/// Commutation relations as tabulated for G1..G23: (prefix, residual).
pub const PRINTED_COMMUTATIONS: [(&str, u8); 23] = [
    ("H", 0),
    ("", 12),
    ("", 3),
    ("", 4),
    ("", 5),
    ("H", 3),
    ("H", 12),
    ("HSH", 2),
    ("HSH", 4),
    ("", 11),
    ("", 2),
    ("", 10),
    ("H", 4),
    ("H", 5),
    ("H", 11),
    ("HSH", 10),
    ("HSH", 5),
    ("HSH", 0),
    ("HSH", 12),
    ("H", 2),
    ("H", 10),
    ("HSH", 3),
    ("HSH", 11),
];

fn word_matrix(w: &str) -> ExactUnitary<i64> {
    ExactUnitary::from_gates(w.chars().filter_map(GateSymbol::from_char))
}

impl CliffordTables {
    fn lookup(&self, u: &ExactUnitary<i64>) -> Option<u8> {
        self.keys.get(&u.psu2_key()).copied()
    }
}

/// Build every table from exact products of [`WORDS`] and check the
/// tabulated commutation relations against them.
pub fn build_tables() -> Result<CliffordTables, Error> {
    let matrices: Vec<_> = WORDS.iter().map(|w| word_matrix(w)).collect();
    let mut keys = HashMap::new();
    for (i, m) in matrices.iter().enumerate() {
        if let Some(j) = keys.insert(m.psu2_key(), i as u8) {
            return Err(Error::Table(format!("G{i} and G{j} coincide")));
        }
    }
    let mut t = CliffordTables {
        matrices,
        mult: [[0; 24]; 24],
        inv: [0; 24],
        comm: [None; 24],
        rotations: [[[0; 3]; 3]; 24],
        keys,
    };
    for i in 0..24 {
        for j in 0..24 {
            let p = t.matrices[i].mul(&t.matrices[j]);
            t.mult[i][j] = t.lookup(&p).ok_or_else(|| Error::Table(format!("G{i}·G{j} not closed")))?;
        }
        t.inv[i] = (0..24u8)
            .find(|&j| t.mult[i][j as usize] == 0)
            .ok_or_else(|| Error::Table(format!("G{i} has no inverse")))?;
    }

    let tg = ExactUnitary::<i64>::gate(GateSymbol::T);
    let t_inv = tg.adjoint();
    let prefixes = [(CommKind::Plain, ""), (CommKind::HPrefix, "H"), (CommKind::HshPrefix, "HSH")];
    for g in 1..24 {
        let gt = t.matrices[g].mul(&tg);
        let mut found = None;
        for (kind, pre) in prefixes {
            // prefix·T·r = g·T  ⇔  r = T⁻¹·prefix⁻¹·g·T
            let r = t_inv.mul(&word_matrix(pre).adjoint()).mul(&gt);
            if let Some(r) = t.lookup(&r) {
                found = Some(CommutationRule { kind, residual: Clifford(r) });
                break;
            }
        }
        let rule = found.ok_or_else(|| Error::Table(format!("G{g}·T has no relation")))?;
        let (pre, res) = PRINTED_COMMUTATIONS[g - 1];
        let kind = match pre {
            "" => CommKind::Plain,
            "H" => CommKind::HPrefix,
            _ => CommKind::HshPrefix,
        };
        if rule != (CommutationRule { kind, residual: Clifford(res) }) {
            return Err(Error::Table(format!(
                "row G{g}: printed ({pre}, G{res}) but exact arithmetic gives {rule:?}"
            )));
        }
        t.comm[g] = Some(rule);
    }

    for (i, m) in t.matrices.iter().enumerate() {
        let q = m.to_quat();
        for col in 0..3 {
            let mut e = [0.0; 3];
            e[col] = 1.0;
            let img = q.rotate(e);
            for row in 0..3 {
                t.rotations[i][row][col] = img[row].round() as i8;
            }
        }
    }
    Ok(t)
}

pub fn tables() -> &'static CliffordTables {
    static TABLES: OnceLock<CliffordTables> = OnceLock::new();
    TABLES.get_or_init(|| match build_tables() {
        Ok(t) => t,
        Err(e) => panic!("clifford tables: {e}"),
    })
}

/// The Clifford element equal to `u` in PSU(2), if any.
pub fn classify<I: RingInt>(u: &ExactUnitary<I>) -> Option<Clifford> {
    if u.denom_exp() > 1 {
        return None;
    }
    let small: ExactUnitary<i64> = u.cast()?;
    tables().lookup(&small).map(Clifford)
}

pub fn commute_through_t(g: Clifford) -> Result<CommutationRule, Error> {
    g.commute_through_t()
}

/// Apply a signed permutation matrix to a vector.
pub fn rotate_vec(r: &[[i8; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (o, row) in out.iter_mut().zip(r) {
        *o = row[0] as f64 * v[0] + row[1] as f64 * v[1] + row[2] as f64 * v[2];
    }
    out
}

/// Transpose, which is the inverse for these matrices.
pub fn transpose(r: &[[i8; 3]; 3]) -> [[i8; 3]; 3] {
    let mut t = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = r[j][i];
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn tables_build_and_examples() {
        let t = build_tables().unwrap();
        assert_eq!(t.mult[1][1], 0);
        assert_eq!(t.mult[4][4], 3);
        assert_eq!(
            t.comm[8],
            Some(CommutationRule { kind: CommKind::HshPrefix, residual: Clifford(2) })
        );
        assert_eq!(Clifford(3).commute_through_t().unwrap(), CommutationRule {
            kind: CommKind::Plain,
            residual: Clifford(3)
        });
        assert_eq!(Clifford::H.commute_through_t().unwrap().kind, CommKind::HPrefix);
        assert_eq!(Clifford::HSH.commute_through_t().unwrap().residual, Clifford::ID);
        assert!(matches!(Clifford::ID.commute_through_t(), Err(Error::IdentityCommutation)));
    }

    #[test]
    fn named_constants_match_words() {
        for (c, w) in [
            (Clifford::H, "H"),
            (Clifford::S, "S"),
            (Clifford::SS, "SS"),
            (Clifford::S3, "SSS"),
            (Clifford::HSS, "HSS"),
            (Clifford::SH, "SH"),
            (Clifford::HS3, "HSSS"),
            (Clifford::HSH, "HSH"),
        ] {
            assert_eq!(classify(&word_matrix(w)), Some(c), "{w}");
        }
    }

    #[test]
    fn group_axioms() {
        for a in Clifford::all() {
            assert_eq!(a.mul(a.inv()), Clifford::ID);
            assert_eq!(a.inv().mul(a), Clifford::ID);
            assert_eq!(Clifford::ID.mul(a), a);
            for b in Clifford::all() {
                for c in Clifford::all() {
                    assert_eq!(a.mul(b).mul(c), a.mul(b.mul(c)));
                }
            }
        }
    }

    #[test]
    fn every_commutation_row_holds() {
        let tg = ExactUnitary::<i64>::gate(GateSymbol::T);
        for g in Clifford::all().skip(1) {
            let rule = g.commute_through_t().unwrap();
            let pre = match rule.kind {
                CommKind::Plain => "",
                CommKind::HPrefix => "H",
                CommKind::HshPrefix => "HSH",
            };
            let lhs = g.matrix().mul(&tg);
            let rhs = word_matrix(pre).mul(&tg).mul(rule.residual.matrix());
            assert!(lhs.psu2_eq(&rhs), "{g}");
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(Clifford(7).matrix()), Some(Clifford(7)));
        assert_eq!(classify(&ExactUnitary::<i64>::gate(GateSymbol::T)), None);
        let sh2 = word_matrix("SHSH");
        let c = classify(&sh2).unwrap();
        assert!(c.matrix().psu2_eq(&sh2));
        // SHSH is the inverse of SH in PSU(2)
        assert_eq!(c, Clifford::SH.inv());
        for k in 0..8 {
            assert_eq!(classify(&Clifford(13).matrix().phase(k)), Some(Clifford(13)));
        }
    }

    #[test]
    fn octahedral_action_is_faithful() {
        let rots: HashSet<_> = Clifford::all().map(|g| *g.rotation()).collect();
        assert_eq!(rots.len(), 24);
        for g in Clifford::all() {
            let r = g.rotation();
            for row in r {
                assert_eq!(row.iter().filter(|&&x| x != 0).count(), 1);
            }
            for h in Clifford::all() {
                let rh = h.rotation();
                let mut prod = [[0i8; 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        prod[i][j] = (0..3).map(|k| r[i][k] * rh[k][j]).sum();
                    }
                }
                assert_eq!(&prod, g.mul(h).rotation());
            }
        }
    }

    #[test]
    fn corrupted_row_is_reported() {
        // exact arithmetic rejects a wrong residual for G8
        let tg = ExactUnitary::<i64>::gate(GateSymbol::T);
        let lhs = Clifford::SH.matrix().mul(&tg);
        let wrong = word_matrix("HSH").mul(&tg).mul(Clifford(4).matrix());
        assert!(!lhs.psu2_eq(&wrong));
    }
}
