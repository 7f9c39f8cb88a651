//! Brute-force verifiers: breadth-first enumeration of PSU(2) by T-count,
//! meet-in-the-middle minimum T-count, double-coset counting, pairwise
//! disjointness of canonical double cosets, and the adjoint parity audit.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::enumerate_canonical;
use crate::clifford::Clifford;
use crate::error::{Error, Result};
use crate::psu2::{adjoint_z, ExactUnitary, GateSymbol, Quat};
use crate::rewrite::{GateWord, NormalizedCircuit};

type U = ExactUnitary<i64>;

/// Largest T-count the oracles accept.
pub const DESK_LIMIT: usize = 16;

#[derive(Clone, Debug)]
pub struct Element {
    pub unitary: U,
    pub word: GateWord,
    pub quat: Quat<f64>,
}

/// Every PSU(2) element of T-count exactly `t`, for `t = 0..layers.len()`.
#[derive(Clone, Debug)]
pub struct Layers {
    pub layers: Vec<Vec<Element>>,
}

impl Layers {
    pub fn build(t_max: usize) -> Self {
        let mut seen: HashSet<U> = HashSet::new();
        let mut first = Vec::new();
        for g in Clifford::all() {
            let u = g.matrix().clone();
            if seen.insert(u.psu2_key()) {
                first.push(Element { quat: u.to_quat(), unitary: u, word: g.gates().collect() });
            }
        }
        let mut layers = vec![first];
        let t_gate = U::gate(GateSymbol::T);
        for _ in 0..t_max {
            let prev = layers.last().expect("layer 0 exists");
            let mut next = Vec::new();
            for e in prev {
                let ut = e.unitary.mul(&t_gate);
                for g in Clifford::all() {
                    let u = ut.mul(g.matrix());
                    if seen.insert(u.psu2_key()) {
                        let mut word = e.word.clone();
                        word.push(GateSymbol::T);
                        word.extend(g.gates());
                        next.push(Element { quat: u.to_quat(), unitary: u, word });
                    }
                }
            }
            layers.push(next);
        }
        Self { layers }
    }

    pub fn t_max(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn up_to(&self, t: usize) -> impl Iterator<Item = (usize, &Element)> {
        self.layers[..=t].iter().enumerate().flat_map(|(k, l)| l.iter().map(move |e| (k, e)))
    }
}

/// A 4D grid over unit quaternions (both signs) with cells of side `√2·ε`.
struct Grid<'a> {
    cell: f64,
    map: HashMap<[i32; 4], Vec<(usize, &'a Element)>>,
}

impl<'a> Grid<'a> {
    fn new(eps: f64, items: impl Iterator<Item = (usize, &'a Element)>) -> Self {
        let cell = std::f64::consts::SQRT_2 * eps;
        let mut map: HashMap<[i32; 4], Vec<(usize, &Element)>> = HashMap::new();
        for (t, e) in items {
            for q in [e.quat, e.quat.neg()] {
                map.entry(Self::cell_of(cell, &q)).or_default().push((t, e));
            }
        }
        Self { cell, map }
    }

    fn cell_of(cell: f64, q: &Quat<f64>) -> [i32; 4] {
        [q.w, q.x, q.y, q.z].map(|c| (c / cell).floor() as i32)
    }

    /// Some stored element within ε of `q`.
    fn hit(&self, q: &Quat<f64>, eps: f64) -> Option<&'a Element> {
        let c = Self::cell_of(self.cell, q);
        for d in 0..81 {
            let off = [d % 3, d / 3 % 3, d / 9 % 3, d / 27].map(|o| o as i32 - 1);
            let key = [c[0] + off[0], c[1] + off[1], c[2] + off[2], c[3] + off[3]];
            if let Some(v) = self.map.get(&key) {
                if let Some((_, e)) = v.iter().find(|(_, e)| e.quat.dist(q) < eps) {
                    return Some(e);
                }
            }
        }
        None
    }
}

/// Minimum T-count of an {H, T} circuit within ε of the target, with a
/// witness word, by meeting halves of T-count `⌊t/2⌋` and `⌈t/2⌉`.
pub fn brute_min_tcount_witness(target: &Quat<f64>, epsilon: f64, t_max: usize) -> Result<Option<(usize, GateWord)>> {
    if t_max > DESK_LIMIT {
        return Err(Error::Budget { requested: t_max as u32, budget: DESK_LIMIT as u32 });
    }
    let layers = Layers::build(t_max.div_ceil(2));
    Ok(meet_in_the_middle(&layers, target, epsilon, t_max))
}

pub fn brute_min_tcount(target: &Quat<f64>, epsilon: f64, t_max: usize) -> Result<Option<usize>> {
    Ok(brute_min_tcount_witness(target, epsilon, t_max)?.map(|(t, _)| t))
}

/// As [`brute_min_tcount`] over prebuilt layers (covering `⌈t_max/2⌉`).
pub fn meet_in_the_middle(layers: &Layers, target: &Quat<f64>, epsilon: f64, t_max: usize) -> Option<(usize, GateWord)> {
    assert!(layers.t_max() >= t_max.div_ceil(2), "layers too shallow");
    let mut grid_for = None;
    for t in 0..=t_max {
        let (a, b) = (t / 2, t.div_ceil(2));
        if grid_for.as_ref().is_none_or(|(bt, _)| *bt != b) {
            grid_for = Some((b, Grid::new(epsilon, layers.up_to(b))));
        }
        let grid = &grid_for.as_ref().expect("set above").1;
        // dist(a·b, U) = dist(b, a⁻¹·U)
        let found = layers.up_to(a).par_bridge().find_map_any(|(_, x)| {
            let want = x.quat.conj().mul(target);
            grid.hit(&want, epsilon).map(|y| (x.word.clone(), y.word.clone()))
        });
        if let Some((wa, wb)) = found {
            let mut w = wa;
            w.extend(wb.gates().iter().copied());
            return Some((t, w));
        }
    }
    None
}

/// Second opinion by scanning every element of T-count `≤ t_max ≤ 10`.
pub fn bfs_min_tcount(target: &Quat<f64>, epsilon: f64, t_max: usize) -> Result<Option<usize>> {
    if t_max > 10 {
        return Err(Error::Budget { requested: t_max as u32, budget: 10 });
    }
    let layers = Layers::build(t_max);
    let hit = layers.up_to(t_max).find(|(_, e)| e.quat.dist(target) < epsilon).map(|(t, _)| t);
    Ok(hit)
}

/// Number of Clifford double cosets among elements of T-count `≤ t_max`.
pub fn coset_count(t_max: usize) -> Result<usize> {
    if t_max > 10 {
        return Err(Error::Budget { requested: t_max as u32, budget: 10 });
    }
    let layers = Layers::build(t_max);
    let gens = [U::gate(GateSymbol::H), U::gate(GateSymbol::S)];
    let mut visited: HashSet<U> = HashSet::new();
    let mut cosets = 0;
    for (_, e) in layers.up_to(t_max) {
        if !visited.insert(e.unitary.psu2_key()) {
            continue;
        }
        cosets += 1;
        let mut stack = vec![e.unitary.clone()];
        while let Some(u) = stack.pop() {
            for g in &gens {
                for v in [g.mul(&u), u.mul(g)] {
                    if visited.insert(v.psu2_key()) {
                        stack.push(v);
                    }
                }
            }
        }
    }
    Ok(cosets)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem1Report {
    pub circuits: usize,
    pub pairs: usize,
    pub translates_checked: usize,
}

/// Exhaustive pairwise check that no Clifford translate `g1·c1·g2` of one
/// listed circuit equals another.
pub fn theorem1_audit_list(circuits: &[NormalizedCircuit]) -> Result<Theorem1Report> {
    let us: Vec<U> = circuits.iter().map(|c| c.to_unitary()).collect();
    let cl: Vec<&U> = Clifford::all().map(Clifford::matrix).collect();
    let pairs: Vec<(usize, usize)> =
        (0..us.len()).flat_map(|i| (i + 1..us.len()).map(move |j| (i, j))).collect();
    let witness = pairs.par_iter().find_map_any(|&(i, j)| {
        for (a, g1) in cl.iter().enumerate() {
            let left = g1.mul(&us[i]);
            for (b, g2) in cl.iter().enumerate() {
                if left.mul(g2).psu2_eq(&us[j]) {
                    return Some((i, j, a, b));
                }
            }
        }
        None
    });
    if let Some((i, j, a, b)) = witness {
        return Err(Error::Audit(format!(
            "G{a}·[{}]·G{b} equals [{}]",
            circuits[i],
            circuits[j]
        )));
    }
    Ok(Theorem1Report { circuits: us.len(), pairs: pairs.len(), translates_checked: pairs.len() * 576 })
}

pub fn theorem1_audit(t_max: usize) -> Result<Theorem1Report> {
    if t_max > 10 {
        return Err(Error::Budget { requested: t_max as u32, budget: 10 });
    }
    let cs: Vec<NormalizedCircuit> = enumerate_canonical(t_max as u32).map(|c| c.into_inner()).collect();
    theorem1_audit_list(&cs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityReport {
    pub samples: usize,
    pub seed: u64,
    pub max_t_count: usize,
}

/// Random normalized circuit opening with `TH`, T-count uniform in [1, 40].
pub fn random_th_circuit<R: Rng>(rng: &mut R) -> NormalizedCircuit {
    let t = rng.gen_range(1..=40);
    NormalizedCircuit::from_blocks((0..t).map(|i| i > 0 && rng.gen()).collect())
}

/// Exact check that the adjoint image of Z under random circuits opening
/// with `TH` has odd `x` and `y`, `z` of opposite parity at the top level,
/// cross-checked against the floating-point rotation.
pub fn parity_audit(samples: usize, seed: u64) -> Result<ParityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let circuits: Vec<NormalizedCircuit> = (0..samples).map(|_| random_th_circuit(&mut rng)).collect();
    let bad = circuits.par_iter().find_map_any(|c| {
        let v = adjoint_z::<num_bigint::BigInt>(c);
        if !v.parity_holds() || v.level() as usize != c.t_count() {
            return Some(format!("parity fails for {c}"));
        }
        let r = c.to_quat().rotate([0.0, 0.0, 1.0]);
        let f = v.to_f64();
        let err = (0..3).map(|i| (r[i] - f[i]).abs()).fold(0.0, f64::max);
        (err > 1e-9).then(|| format!("adjoint image of {c} disagrees with the rotation by {err:.2e}"))
    });
    if let Some(msg) = bad {
        return Err(Error::Audit(msg));
    }
    Ok(ParityReport { samples, seed, max_t_count: circuits.iter().map(|c| c.t_count()).max().unwrap_or(0) })
}
