use std::fmt;

use crate::clifford::Clifford;
use crate::rewrite::circuit::{CosetForm, NormalForm};
use crate::rewrite::normalize::Spine;

/// How the junction of `g1·V·TH·g2` and `[H·]W·g3` resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CompositionCase {
    /// Left factor has no T gates.
    Trivial,
    /// `H·g2·[H·]W·g3` normalizes to something starting with `H`, `SH`,
    /// or to a bare Clifford; the trailing T survives.
    NoCancel,
    /// It starts with `TH` and `V` does not end in `SH`: one `T·T = S` merge.
    Cancel,
    /// As above with `V = V2·SH` and the remainder starting with `SH`.
    CancelShSh,
    /// As above with `V = V2·SH` and the remainder starting with `TH`
    /// (or empty): the `TH·(SH)²·TH = H` cascade.
    Cascade,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CompositionStats {
    pub trivial: usize,
    pub no_cancel: usize,
    pub cancel: usize,
    pub cancel_sh_sh: usize,
    pub cascade: usize,
    /// Total T gates removed across all compositions.
    pub t_saved: usize,
}

impl CompositionStats {
    pub fn record(&mut self, case: CompositionCase, t_saved: usize) {
        match case {
            CompositionCase::Trivial => self.trivial += 1,
            CompositionCase::NoCancel => self.no_cancel += 1,
            CompositionCase::Cancel => self.cancel += 1,
            CompositionCase::CancelShSh => self.cancel_sh_sh += 1,
            CompositionCase::Cascade => self.cascade += 1,
        }
        self.t_saved += t_saved;
    }

    pub fn merge(&mut self, o: &Self) {
        self.trivial += o.trivial;
        self.no_cancel += o.no_cancel;
        self.cancel += o.cancel;
        self.cancel_sh_sh += o.cancel_sh_sh;
        self.cascade += o.cascade;
        self.t_saved += o.t_saved;
    }

    pub fn total(&self) -> usize {
        self.trivial + self.no_cancel + self.cancel + self.cancel_sh_sh + self.cascade
    }
}

impl fmt::Display for CompositionStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trivial={} no_cancel={} cancel={} cancel_sh_sh={} cascade={} t_saved={}",
            self.trivial, self.no_cancel, self.cancel, self.cancel_sh_sh, self.cascade, self.t_saved
        )
    }
}

fn classify_junction(a: &CosetForm, b: &NormalForm) -> CompositionCase {
    let Some(&v_ends_sh) = a.body.blocks().last() else {
        return CompositionCase::Trivial;
    };
    let mut s = Spine::new();
    s.push_clifford(Clifford::H.mul(a.g2));
    s.push_normal_form(b);
    let w = s.finish();
    match w.body.blocks().first() {
        None => CompositionCase::NoCancel,
        Some(&sh) if w.h_prefix || sh => CompositionCase::NoCancel,
        Some(_) if !v_ends_sh => CompositionCase::Cancel,
        Some(_) => match w.body.blocks().get(1) {
            Some(true) => CompositionCase::CancelShSh,
            _ => CompositionCase::Cascade,
        },
    }
}

/// Normal form of `a·b`, streaming `b` onto the normalized `a`.
pub fn compose_reduce(a: &CosetForm, b: &NormalForm) -> NormalForm {
    let mut s = Spine::new();
    s.push_clifford(a.g1);
    s.push_blocks(a.body.blocks());
    s.push_clifford(a.g2);
    s.push_normal_form(b);
    s.finish()
}

/// [`compose_reduce`] plus the junction case it hit.
pub fn compose_reduce_traced(a: &CosetForm, b: &NormalForm) -> (NormalForm, CompositionCase) {
    (compose_reduce(a, b), classify_junction(a, b))
}
