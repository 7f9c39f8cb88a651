use std::fmt;

use crate::error::Error;
use crate::psu2::{ExactUnitary, GateSymbol, Quat};
use crate::scalar::RingInt;

/// A plain sequence of H, T and S gates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GateWord {
    gates: Vec<GateSymbol>,
}

impl GateWord {
    pub fn new(gates: Vec<GateSymbol>) -> Self {
        Self { gates }
    }

    /// Case-insensitive; whitespace and `.`/`·` separators are skipped.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut gates = Vec::with_capacity(text.len());
        for (pos, ch) in text.chars().enumerate() {
            if ch.is_whitespace() || ch == '.' || ch == '·' {
                continue;
            }
            gates.push(GateSymbol::from_char(ch).ok_or(Error::Parse { pos, ch })?);
        }
        Ok(Self { gates })
    }

    pub fn gates(&self) -> &[GateSymbol] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: GateSymbol) {
        self.gates.push(g);
    }

    pub fn extend<It: IntoIterator<Item = GateSymbol>>(&mut self, it: It) {
        self.gates.extend(it);
    }

    /// Number of T gates, counting each S as none.
    pub fn t_gates(&self) -> usize {
        self.gates.iter().filter(|&&g| g == GateSymbol::T).count()
    }

    pub fn to_unitary<I: RingInt>(&self) -> ExactUnitary<I> {
        ExactUnitary::from_gates(self.gates.iter().copied())
    }

    pub fn to_quat(&self) -> Quat<f64> {
        let [h, t, s] = gate_quats();
        self.gates.iter().fold(Quat::identity(), |acc, g| {
            acc.mul(match g {
                GateSymbol::H => h,
                GateSymbol::T => t,
                GateSymbol::S => s,
            })
        })
    }
}

impl fmt::Display for GateWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            write!(f, "{}", g.as_char())?;
        }
        Ok(())
    }
}

impl FromIterator<GateSymbol> for GateWord {
    fn from_iter<It: IntoIterator<Item = GateSymbol>>(iter: It) -> Self {
        Self { gates: iter.into_iter().collect() }
    }
}

pub(crate) fn gate_quats() -> &'static [Quat<f64>; 3] {
    use std::sync::OnceLock;
    static Q: OnceLock<[Quat<f64>; 3]> = OnceLock::new();
    Q.get_or_init(|| {
        [GateSymbol::H, GateSymbol::T, GateSymbol::S].map(|g| ExactUnitary::<i64>::gate(g).to_quat())
    })
}
