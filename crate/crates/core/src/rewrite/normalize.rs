use crate::clifford::{Clifford, CommKind};
use crate::psu2::GateSymbol;
use crate::rewrite::circuit::{NormalForm, NormalizedCircuit};
use crate::rewrite::word::GateWord;

/// Left-to-right normalizer.
///
/// Holds `c0·T·c1·T·…·T·ck`: every `ci` with `0 < i < k` is `H` or `HSH`,
/// `c0` is `Id`, `H`, `HSH` or `SH` once a T has been placed, and `ck` is
/// the pending Clifford factor.
#[derive(Clone, Debug)]
pub struct Spine {
    cl: Vec<Clifford>,
    rewrites: usize,
}

impl Default for Spine {
    fn default() -> Self {
        Self::new()
    }
}

fn is_interior(g: Clifford) -> bool {
    g == Clifford::H || g == Clifford::HSH
}

impl Spine {
    pub fn new() -> Self {
        Self { cl: vec![Clifford::ID], rewrites: 0 }
    }

    /// Resume from a finished normal form without re-deriving it.
    pub fn from_normal_form(nf: &NormalForm) -> Self {
        let bits = nf.body.blocks();
        if bits.is_empty() {
            let c0 = if nf.h_prefix { Clifford::H.mul(nf.tail) } else { nf.tail };
            return Self { cl: vec![c0], rewrites: 0 };
        }
        let c0 = match (nf.h_prefix, bits[0]) {
            (false, false) => Clifford::ID,
            (false, true) => Clifford::SH,
            (true, false) => Clifford::H,
            (true, true) => Clifford::HSH,
        };
        let mut cl = Vec::with_capacity(bits.len() + 1);
        cl.push(c0);
        cl.extend(bits[1..].iter().map(|&b| if b { Clifford::HSH } else { Clifford::H }));
        cl.push(Clifford::H.mul(nf.tail));
        Self { cl, rewrites: 0 }
    }

    pub fn t_count(&self) -> usize {
        self.cl.len() - 1
    }

    pub fn rewrites(&self) -> usize {
        self.rewrites
    }

    fn last_mut(&mut self) -> &mut Clifford {
        self.cl.last_mut().expect("spine is never empty")
    }

    pub fn push_clifford(&mut self, g: Clifford) {
        if !g.is_identity() {
            let last = self.last_mut();
            *last = last.mul(g);
            self.rewrites += 1;
        }
    }

    pub fn push_t(&mut self) {
        let k = self.t_count();
        let last = self.cl[k];
        if k >= 1 && last.is_identity() {
            // T·T = S
            self.cl.pop();
            self.push_clifford(Clifford::S);
            return;
        }
        if is_interior(last) || (k == 0 && last.is_identity()) {
            self.cl.push(Clifford::ID);
            self.rewrites += 1;
            return;
        }
        let rule = last.commute_through_t().expect("identity handled above");
        self.rewrites += 1;
        match rule.kind {
            CommKind::Plain if k >= 1 => {
                self.cl.pop();
                self.push_clifford(Clifford::S.mul(rule.residual));
            }
            CommKind::Plain => {
                self.cl[0] = Clifford::ID;
                self.cl.push(rule.residual);
            }
            CommKind::HPrefix => {
                self.cl[k] = Clifford::H;
                self.cl.push(rule.residual);
            }
            CommKind::HshPrefix => {
                self.cl[k] = Clifford::HSH;
                self.cl.push(rule.residual);
            }
        }
    }

    pub fn push_gate(&mut self, g: GateSymbol) {
        match g {
            GateSymbol::T => self.push_t(),
            GateSymbol::H => self.push_clifford(Clifford::H),
            GateSymbol::S => self.push_clifford(Clifford::S),
        }
    }

    pub fn push_gates<It: IntoIterator<Item = GateSymbol>>(&mut self, gates: It) {
        for g in gates {
            self.push_gate(g);
        }
    }

    pub fn push_blocks(&mut self, bits: &[bool]) {
        for &b in bits {
            if b {
                self.push_clifford(Clifford::SH);
            }
            self.push_t();
            self.push_clifford(Clifford::H);
        }
    }

    pub fn push_normal_form(&mut self, nf: &NormalForm) {
        if nf.h_prefix {
            self.push_clifford(Clifford::H);
        }
        self.push_blocks(nf.body.blocks());
        self.push_clifford(nf.tail);
    }

    /// Interior Cliffords between consecutive T gates.
    pub fn interior(&self) -> &[Clifford] {
        let k = self.t_count();
        if k == 0 {
            &[]
        } else {
            &self.cl[1..k]
        }
    }

    pub fn finish(&self) -> NormalForm {
        let k = self.t_count();
        if k == 0 {
            return NormalForm { h_prefix: false, body: NormalizedCircuit::identity(), tail: self.cl[0] };
        }
        let c0 = self.cl[0];
        debug_assert!([Clifford::ID, Clifford::H, Clifford::HSH, Clifford::SH].contains(&c0));
        let mut bits = Vec::with_capacity(k);
        bits.push(c0 == Clifford::HSH || c0 == Clifford::SH);
        for &c in self.interior() {
            debug_assert!(is_interior(c));
            bits.push(c == Clifford::HSH);
        }
        NormalForm {
            h_prefix: c0 == Clifford::H || c0 == Clifford::HSH,
            body: NormalizedCircuit::from_blocks(bits),
            tail: Clifford::H.mul(self.cl[k]),
        }
    }
}

/// Normal form of a word together with the number of elementary rewrites.
pub fn normalize_counted(w: &GateWord) -> (NormalForm, usize) {
    let mut s = Spine::new();
    s.push_gates(w.gates().iter().copied());
    (s.finish(), s.rewrites())
}

pub fn normalize(w: &GateWord) -> NormalForm {
    normalize_counted(w).0
}
