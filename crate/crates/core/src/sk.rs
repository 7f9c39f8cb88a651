//! Solovay-Kitaev recursion with catalog lookups at level 0 and normalized
//! composition at every step.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::psu2::{cross3, dot3, norm3, GateSymbol, Quat};
use crate::rewrite::{compose_reduce_traced, normalize, CompositionStats, NormalForm};
use crate::search::nearest;

/// Depth beyond which double precision no longer supports the recursion.
pub const DEPTH_LIMIT: u32 = 4;
/// Numeric tracking tolerance before an exact re-evaluation.
pub const TRACK_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug)]
pub struct SkConfig<'a> {
    pub db: &'a Catalog,
    pub max_depth: u32,
    /// Starting radius of the level-0 nearest-neighbour lookup.
    pub level0_epsilon: f64,
    /// Lift the depth cap.
    pub allow_deep: bool,
}

impl<'a> SkConfig<'a> {
    pub fn new(db: &'a Catalog) -> Self {
        Self { db, max_depth: 3, level0_epsilon: 1e-3, allow_deep: false }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LevelRecord {
    pub depth: u32,
    pub dist: f64,
    pub t_count: usize,
}

#[derive(Clone, Debug)]
pub struct SkResult {
    pub circuit: NormalForm,
    /// Distance of `U_0, …, U_n` to the target.
    pub dist_per_level: Vec<f64>,
    pub t_count_per_level: Vec<usize>,
    pub t_count: usize,
    pub stats: CompositionStats,
    /// Tracked products that drifted past [`TRACK_TOL`] and were recomputed.
    pub reevaluations: usize,
    /// Every level-`k` approximation built along the way, with its depth.
    pub intermediates: Vec<(u32, NormalForm)>,
}

impl SkResult {
    pub fn levels(&self) -> Vec<LevelRecord> {
        self.dist_per_level
            .iter()
            .zip(&self.t_count_per_level)
            .enumerate()
            .map(|(d, (&dist, &t_count))| LevelRecord { depth: d as u32, dist, t_count })
            .collect()
    }

    /// `depth,dist,t_count` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("depth,dist,t_count\n");
        for l in self.levels() {
            writeln!(s, "{},{:.6e},{}", l.depth, l.dist, l.t_count).expect("string write");
        }
        s
    }
}

fn rotation_between(m: [f64; 3], n: [f64; 3]) -> Quat<f64> {
    let c = cross3(m, n);
    let s = norm3(c);
    let d = dot3(m, n);
    if s < 1e-12 {
        if d > 0.0 {
            return Quat::identity();
        }
        let p = if m[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        return Quat::from_axis_angle(cross3(m, p), std::f64::consts::PI);
    }
    Quat::from_axis_angle(c, s.atan2(d))
}

fn commutator(v: &Quat<f64>, w: &Quat<f64>) -> Quat<f64> {
    v.mul(w).mul(&v.conj()).mul(&w.conj())
}

/// Balanced group commutator: `V`, `W` rotations by the same angle about
/// perpendicular axes with `V·W·V†·W† = Δ`.
pub fn gc_decompose(delta: &Quat<f64>) -> Result<(Quat<f64>, Quat<f64>)> {
    let id = Quat::identity();
    let d = delta.dist(&id);
    if d >= 0.5 {
        return Err(Error::TooFarFromIdentity(d));
    }
    let q = delta.canonical_sign();
    let v = [q.x, q.y, q.z];
    let sv = norm3(v);
    if sv < 1e-300 {
        return Ok((id, id));
    }
    let cos_half = q.w.clamp(-1.0, 1.0);
    // sin²(φ/2) = √((1 − cos(θ/2))/2); 1 − cos computed stably
    let one_minus = sv * sv / (1.0 + cos_half);
    let s = (one_minus / 2.0).sqrt();
    let phi = 2.0 * s.sqrt().asin();
    let v0 = Quat::from_axis_angle([1.0, 0.0, 0.0], phi);
    let w0 = Quat::from_axis_angle([0.0, 1.0, 0.0], phi);
    let c0 = commutator(&v0, &w0).canonical_sign();
    let m = [c0.x, c0.y, c0.z];
    let r = rotation_between([m[0] / norm3(m), m[1] / norm3(m), m[2] / norm3(m)], [v[0] / sv, v[1] / sv, v[2] / sv]);
    Ok((r.mul(&v0).mul(&r.conj()), r.mul(&w0).mul(&r.conj())))
}

/// Reconstruction error of the commutator when `V` and `W` are replaced by
/// approximations at distance proportional to the input angle, as the
/// recursion supplies them.
pub fn gc_perturbed_error(theta: f64, kappa: f64) -> Result<f64> {
    let axis = [0.36, -0.48, 0.8];
    let delta = Quat::from_axis_angle(axis, theta);
    let (v, w) = gc_decompose(&delta)?;
    let e = kappa * theta;
    let pv = Quat::from_axis_angle([0.6, 0.0, 0.8], e);
    let pw = Quat::from_axis_angle([0.0, 0.8, -0.6], e);
    Ok(commutator(&v.mul(&pv), &w.mul(&pw)).dist(&delta))
}

/// Least-squares slope of `log err` against `log θ` over `count` angles
/// spaced geometrically in `[lo, hi]`.
pub fn gc_error_slope(lo: f64, hi: f64, count: usize, kappa: f64) -> Result<f64> {
    let mut xs = Vec::with_capacity(count);
    let mut ys = Vec::with_capacity(count);
    for i in 0..count {
        let theta = lo * (hi / lo).powf(i as f64 / (count - 1) as f64);
        xs.push(theta.ln());
        ys.push(gc_perturbed_error(theta, kappa)?.ln());
    }
    let n = count as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

/// Checks a normal form is a fixed point of normalization and that every
/// Clifford between consecutive T gates is `H` or `HSH`.
pub fn check_shape(nf: &NormalForm) -> Result<()> {
    let word = nf.word();
    if normalize(&word) != *nf {
        return Err(Error::Audit(format!("{nf} is not a normalization fixed point")));
    }
    let gates = word.gates();
    let ts: Vec<usize> = (0..gates.len()).filter(|&i| gates[i] == GateSymbol::T).collect();
    for w in ts.windows(2) {
        let mid: String = gates[w[0] + 1..w[1]].iter().map(|g| g.as_char()).collect();
        if mid != "H" && mid != "HSH" {
            return Err(Error::Audit(format!("interior gate {mid:?} in {nf}")));
        }
    }
    Ok(())
}

struct Level {
    nf: NormalForm,
    quat: Quat<f64>,
}

struct Run<'a, 'b> {
    cfg: &'b SkConfig<'a>,
    stats: CompositionStats,
    reevaluations: usize,
    intermediates: Vec<(u32, NormalForm)>,
}

impl Run<'_, '_> {
    fn base(&mut self, u: &Quat<f64>) -> Result<Level> {
        let r = nearest(u, self.cfg.db, self.cfg.level0_epsilon).map_err(|_| Error::LevelZeroMiss)?;
        let c = r.circuit.ok_or(Error::LevelZeroMiss)?;
        let quat = c.to_quat();
        Ok(Level { nf: c.normal_form(), quat })
    }

    fn compose(&mut self, left: &NormalForm, left_q: Quat<f64>, right: Level) -> Result<Level> {
        let a = left.canonical();
        let (nf, case) = compose_reduce_traced(&a, &right.nf);
        self.stats.record(case, (a.t_count() + right.nf.t_count()).saturating_sub(nf.t_count()));
        let mut quat = left_q.mul(&right.quat);
        let direct = nf.to_quat();
        if direct.dist(&quat) > TRACK_TOL {
            self.reevaluations += 1;
            quat = nf.to_unitary::<BigInt>().to_quat();
            if direct.dist(&quat) > TRACK_TOL {
                return Err(Error::Audit(format!("block evaluation of {nf} drifted from the exact value")));
            }
        }
        Ok(Level { nf, quat })
    }

    /// `U_0, …, U_n` for the target.
    fn chain(&mut self, u: &Quat<f64>, n: u32) -> Result<Vec<Level>> {
        let mut levels = vec![self.base(u)?];
        self.intermediates.push((0, levels[0].nf.clone()));
        for k in 1..=n {
            let prev = levels.last().expect("level 0 present");
            let delta = u.mul(&prev.quat.conj());
            let (v, w) = gc_decompose(&delta)?;
            let vl = self.top(&v, k - 1)?;
            let wl = self.top(&w, k - 1)?;
            let prev = Level { nf: prev.nf.clone(), quat: prev.quat };
            let (vd, wd) = (vl.nf.inverse(), wl.nf.inverse());
            let acc = self.compose(&wd, wl.quat.conj(), prev)?;
            let acc = self.compose(&vd, vl.quat.conj(), acc)?;
            let acc = self.compose(&wl.nf, wl.quat, acc)?;
            let acc = self.compose(&vl.nf, vl.quat, acc)?;
            self.intermediates.push((k, acc.nf.clone()));
            levels.push(acc);
        }
        Ok(levels)
    }

    fn top(&mut self, u: &Quat<f64>, n: u32) -> Result<Level> {
        Ok(self.chain(u, n)?.pop().expect("non-empty chain"))
    }
}

/// Depth-`n` approximation of `u`.
pub fn sk_approximate(u: &Quat<f64>, n: u32, cfg: &SkConfig) -> Result<SkResult> {
    let cap = if cfg.allow_deep { cfg.max_depth } else { cfg.max_depth.min(DEPTH_LIMIT) };
    if n > cap {
        return Err(Error::Depth { requested: n, max: cap });
    }
    let mut run = Run { cfg, stats: CompositionStats::default(), reevaluations: 0, intermediates: Vec::new() };
    let levels = run.chain(u, n)?;
    let circuit = levels.last().expect("non-empty chain").nf.clone();
    Ok(SkResult {
        t_count: circuit.t_count(),
        dist_per_level: levels.iter().map(|l| l.nf.to_quat().dist(u)).collect(),
        t_count_per_level: levels.iter().map(|l| l.nf.t_count()).collect(),
        circuit,
        stats: run.stats,
        reevaluations: run.reevaluations,
        intermediates: run.intermediates,
    })
}
