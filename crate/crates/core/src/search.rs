//! Minimum-T-count ε-approximation against a [`Catalog`].
//!
//! A target `U` is expanded into its conjugated coset translates
//! `X = g·U·h·g⁻¹`; a canonical entry `c` within ε of `X` gives
//! `U ≈ g⁻¹·c·(g·h⁻¹)`. For each translate only the trace levels within
//! `4ε` and, inside a level, only the tiles near the translate's axis are
//! scanned.

use std::collections::HashSet;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{tiling, Catalog, CatalogEntry, LevelKind, TraceLevelBucket, DELTA_BUCKET};
use crate::clifford::Clifford;
use crate::error::{Error, Result};
use crate::psu2::{ExactUnitary, Quat};
use crate::rewrite::CosetForm;
use crate::scalar::RingInt;

/// Slack added to angular radii so boundary round-off never drops a candidate.
const ANGLE_MARGIN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxQuery {
    pub target: Quat<f64>,
    pub epsilon: f64,
}

impl ApproxQuery {
    pub fn new(target: Quat<f64>, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::Query(format!("epsilon {epsilon} outside (0, 1]")));
        }
        let n = target.norm();
        if !n.is_finite() || (n - 1.0).abs() > 1e-8 {
            return Err(Error::Query(format!("target quaternion has norm {n}")));
        }
        Ok(Self { target: target.normalized(), epsilon })
    }

    pub fn from_exact<I: RingInt>(u: &ExactUnitary<I>, epsilon: f64) -> Result<Self> {
        Self::new(u.to_quat(), epsilon)
    }

    /// Row-major complex entries; must be unitary to 1e−8, any global phase.
    pub fn from_matrix(m: [(f64, f64); 4], epsilon: f64) -> Result<Self> {
        let q = Quat::from_u2(m);
        let back = q.normalized().to_matrix();
        // recover the phase from the largest entry and compare entrywise
        let k = (0..4)
            .max_by(|&a, &b| (m[a].0.hypot(m[a].1)).total_cmp(&m[b].0.hypot(m[b].1)))
            .expect("four entries");
        let (br, bi) = back[k];
        let (mr, mi) = m[k];
        let d = br * br + bi * bi;
        if d < 1e-12 {
            return Err(Error::Query("matrix is not unitary".into()));
        }
        let (pr, pi) = ((mr * br + mi * bi) / d, (mi * br - mr * bi) / d);
        let err = (0..4)
            .map(|i| {
                let (r, im) = back[i];
                ((r * pr - im * pi) - m[i].0).hypot((r * pi + im * pr) - m[i].1)
            })
            .fold(0.0, f64::max);
        if err > 1e-8 || (pr.hypot(pi) - 1.0).abs() > 1e-8 {
            return Err(Error::Query(format!("matrix is not unitary (deviation {err:.2e})")));
        }
        Self::new(q.normalized(), epsilon)
    }

    pub fn from_axis_angle(axis: [f64; 3], angle: f64, epsilon: f64) -> Result<Self> {
        let n = crate::psu2::norm3(axis);
        if !(n > 1e-12) {
            return Err(Error::Query("zero rotation axis".into()));
        }
        Self::new(Quat::from_axis_angle([axis[0] / n, axis[1] / n, axis[2] / n], angle), epsilon)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxResult {
    pub found: bool,
    pub circuit: Option<CosetForm>,
    pub t_count: usize,
    pub achieved_dist: f64,
}

impl ApproxResult {
    fn miss() -> Self {
        Self { found: false, circuit: None, t_count: 0, achieved_dist: f64::INFINITY }
    }
}

/// Work counters of one query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub targets: usize,
    pub levels: usize,
    pub examined: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Select {
    MinTCount,
    MinDist,
}

fn clifford_quats() -> &'static [Quat<f64>; 24] {
    static Q: OnceLock<[Quat<f64>; 24]> = OnceLock::new();
    Q.get_or_init(|| std::array::from_fn(|i| Clifford::new(i).expect("index < 24").matrix().to_quat()))
}

/// A translate `g·U·h·g⁻¹` of the target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CosetTarget {
    pub g: Clifford,
    pub h: Clifford,
    pub quat: Quat<f64>,
}

impl CosetTarget {
    /// `U ≈ g⁻¹·c·(g·h⁻¹)` for the body `c` matched against this translate.
    pub fn reassemble(&self, e: &CatalogEntry) -> CosetForm {
        CosetForm { g1: self.g.inv(), body: e.circuit(), g2: self.g.mul(self.h.inv()) }
    }
}

/// The at most 576 translates, deduplicated up to sign and rounding.
pub fn coset_targets(u: &Quat<f64>) -> Vec<CosetTarget> {
    let cq = clifford_quats();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for h in Clifford::all() {
        let uh = u.mul(&cq[h.idx()]);
        for g in Clifford::all() {
            let x = cq[g.idx()].mul(&uh).mul(&cq[g.idx()].conj()).canonical_sign();
            let c = [x.w, x.x, x.y, x.z];
            let sign = c.iter().find(|v| v.abs() > 1e-7).map_or(1.0, |v| v.signum());
            let key = c.map(|v| (v * sign * 1e6).round() as i64);
            if seen.insert(key) {
                out.push(CosetTarget { g, h, quat: x });
            }
        }
    }
    out
}

/// Buckets with `|key − target_trace| < 4ε + δ`.
pub fn candidate_levels(target_trace: f64, epsilon: f64, db: &Catalog) -> std::ops::Range<usize> {
    let w = 4.0 * epsilon + DELTA_BUCKET;
    let lo = db.buckets.partition_point(|b| b.key <= target_trace - w);
    let hi = db.buckets.partition_point(|b| b.key < target_trace + w);
    lo..hi.max(lo)
}

/// Great-circle radii around `n` and `−n` (the target's axis) outside which
/// no entry of a level with half-trace `w2` can be within ε. `None` means
/// the cap is empty, `Some(π)` the whole sphere.
pub fn angular_radii(target: &Quat<f64>, w2: f64, epsilon: f64) -> (Option<f64>, Option<f64>) {
    let w1 = target.w.abs();
    let s1 = (1.0 - w1 * w1).max(0.0).sqrt();
    let s2 = (1.0 - w2 * w2).max(0.0).sqrt();
    let thr = 1.0 - epsilon * epsilon;
    if s1 * s2 < 1e-12 {
        return (Some(std::f64::consts::PI), None);
    }
    let slack = 1e-12 / (s1 * s2);
    let radius = |c: f64| {
        let c = c - slack;
        if c >= 1.0 {
            None
        } else {
            Some((c.max(-1.0).acos() + ANGLE_MARGIN).min(std::f64::consts::PI))
        }
    };
    (radius((thr - w1 * w2) / (s1 * s2)), radius((thr + w1 * w2) / (s1 * s2)))
}

fn target_axis(q: &Quat<f64>) -> [f64; 3] {
    let q = q.canonical_sign();
    let s = (q.x * q.x + q.y * q.y + q.z * q.z).sqrt();
    if s < 1e-300 {
        [0.0, 0.0, 1.0]
    } else {
        [q.x / s, q.y / s, q.z / s]
    }
}

/// Candidate entry indexes of one level for a target: face lists of every
/// tile meeting the ε-caps, plus the edge and vertex lists of the axis
/// when it sits within the cap radius of a boundary.
pub fn scan_tile(bucket: &TraceLevelBucket, target: &Quat<f64>, epsilon: f64) -> Vec<u32> {
    let n = target_axis(target);
    let tile_d: [f64; 24] = std::array::from_fn(|t| tiling().tile_distance(t, n));
    let neg = [-n[0], -n[1], -n[2]];
    let tile_dn: [f64; 24] = std::array::from_fn(|t| tiling().tile_distance(t, neg));
    scan_with(bucket, target, epsilon, n, &tile_d, &tile_dn)
}

fn scan_with(
    bucket: &TraceLevelBucket,
    target: &Quat<f64>,
    epsilon: f64,
    n: [f64; 3],
    tile_d: &[f64; 24],
    tile_dn: &[f64; 24],
) -> Vec<u32> {
    if bucket.kind == LevelKind::Identity {
        return (0..bucket.entries.len() as u32).collect();
    }
    let (rp, rn) = angular_radii(target, bucket.key / 2.0, epsilon);
    let mut tiles = [false; 24];
    for (r, d) in [(rp, tile_d), (rn, tile_dn)] {
        if let Some(r) = r {
            for t in 0..24 {
                tiles[t] |= d[t] <= r;
            }
        }
    }
    let mut out: Vec<u32> =
        (0..24).filter(|&t| tiles[t]).flat_map(|t| bucket.face_idx[t].iter().copied()).collect();
    if let Some(r) = rp {
        let info = tiling().tile_of(n);
        if info.boundary_dist < r {
            out.extend_from_slice(&bucket.edge_idx[info.edge]);
            out.extend_from_slice(&bucket.vertex_idx[info.vertex]);
            out.sort_unstable();
            out.dedup();
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
struct Hit<'a> {
    entry: &'a CatalogEntry,
    target: CosetTarget,
    dist: f64,
}

fn better(a: &Hit, b: &Hit, sel: Select) -> bool {
    let ka = (a.entry.t_count, a.dist, a.entry.block_order());
    let kb = (b.entry.t_count, b.dist, b.entry.block_order());
    match sel {
        Select::MinTCount => ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1)).then(ka.2.cmp(&kb.2)).is_lt(),
        Select::MinDist => ka.1.total_cmp(&kb.1).then(ka.0.cmp(&kb.0)).then(ka.2.cmp(&kb.2)).is_lt(),
    }
}

fn finish(q: &ApproxQuery, mut hits: Vec<Hit>, sel: Select) -> ApproxResult {
    hits.sort_by(|a, b| {
        if better(a, b, sel) {
            std::cmp::Ordering::Less
        } else if better(b, a, sel) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });
    for h in hits {
        let circuit = h.target.reassemble(h.entry);
        let d = circuit.to_quat().dist(&q.target);
        if d < q.epsilon {
            return ApproxResult { found: true, t_count: circuit.t_count(), circuit: Some(circuit), achieved_dist: d };
        }
    }
    ApproxResult::miss()
}

fn indexed(q: &ApproxQuery, db: &Catalog, sel: Select) -> (ApproxResult, SearchStats) {
    let targets = coset_targets(&q.target);
    let per: Vec<(Option<Hit>, usize, usize)> = targets
        .par_iter()
        .map(|ct| {
            let x = &ct.quat;
            let levels = candidate_levels(x.abs_trace(), q.epsilon, db);
            if levels.is_empty() {
                return (None, 0, 0);
            }
            let n = target_axis(x);
            let neg = [-n[0], -n[1], -n[2]];
            let tile_d: [f64; 24] = std::array::from_fn(|t| tiling().tile_distance(t, n));
            let tile_dn: [f64; 24] = std::array::from_fn(|t| tiling().tile_distance(t, neg));
            let mut best: Option<Hit> = None;
            let mut examined = 0;
            for b in &db.buckets[levels.clone()] {
                for i in scan_with(b, x, q.epsilon, n, &tile_d, &tile_dn) {
                    examined += 1;
                    let e = &b.entries[i as usize];
                    let dist = e.quat().dist(x);
                    if dist < q.epsilon {
                        let h = Hit { entry: e, target: *ct, dist };
                        if best.as_ref().is_none_or(|b| better(&h, b, sel)) {
                            best = Some(h);
                        }
                    }
                }
            }
            (best, levels.len(), examined)
        })
        .collect();
    let stats = SearchStats {
        targets: targets.len(),
        levels: per.iter().map(|p| p.1).sum(),
        examined: per.iter().map(|p| p.2).sum(),
    };
    (finish(q, per.into_iter().filter_map(|p| p.0).collect(), sel), stats)
}

/// Minimum-T-count circuit within ε of the target, if the catalog holds one.
pub fn approximate(q: &ApproxQuery, db: &Catalog) -> ApproxResult {
    indexed(q, db, Select::MinTCount).0
}

pub fn approximate_with_stats(q: &ApproxQuery, db: &Catalog) -> (ApproxResult, SearchStats) {
    indexed(q, db, Select::MinTCount)
}

/// Reference answer: all 576 raw translates against every catalog entry.
pub fn approximate_linear(q: &ApproxQuery, db: &Catalog) -> ApproxResult {
    let cq = clifford_quats();
    let mut hits = Vec::new();
    for h in Clifford::all() {
        for g in Clifford::all() {
            let x = cq[g.idx()].mul(&q.target).mul(&cq[h.idx()]).mul(&cq[g.idx()].conj());
            let ct = CosetTarget { g, h, quat: x };
            let best = db
                .entries()
                .filter_map(|e| {
                    let dist = e.quat().dist(&x);
                    (dist < q.epsilon).then_some(Hit { entry: e, target: ct, dist })
                })
                .reduce(|a, b| if better(&b, &a, Select::MinTCount) { b } else { a });
            hits.extend(best);
        }
    }
    finish(q, hits, Select::MinTCount)
}

/// Closest catalog circuit to the target regardless of T-count.
/// The radius starts at `eps0` and doubles until something is in reach.
pub fn nearest(target: &Quat<f64>, db: &Catalog, eps0: f64) -> Result<ApproxResult> {
    let mut eps = eps0.clamp(f64::MIN_POSITIVE, 1.0);
    loop {
        let q = ApproxQuery::new(*target, eps)?;
        let (r, _) = indexed(&q, db, Select::MinDist);
        if r.found {
            return Ok(r);
        }
        if eps >= 1.0 {
            return Err(Error::LevelZeroMiss);
        }
        eps = (eps * 2.0).min(1.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build;
    use crate::rewrite::GateWord;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn db() -> &'static Catalog {
        static DB: OnceLock<Catalog> = OnceLock::new();
        DB.get_or_init(|| build(10).unwrap())
    }

    fn random_target(rng: &mut ChaCha8Rng) -> Quat<f64> {
        let q = Quat::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        q.normalized()
    }

    #[test]
    fn member_lookup() {
        let db = db();
        for e in db.entries().step_by(7) {
            let c = e.circuit();
            let q = ApproxQuery::from_exact(&c.to_unitary::<BigInt>(), 1e-9).unwrap();
            let r = approximate(&q, db);
            assert!(r.found);
            assert_eq!(r.t_count, c.t_count());
            assert_eq!(r.circuit.unwrap().body, c);
            assert!(r.achieved_dist < 1e-9);
        }
    }

    #[test]
    fn clifford_translates_keep_t_count() {
        let db = db();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let entries: Vec<_> = db.entries().collect();
        for _ in 0..50 {
            let e = entries[rng.gen_range(0..entries.len())];
            let g1 = Clifford::new(rng.gen_range(0..24)).unwrap();
            let g2 = Clifford::new(rng.gen_range(0..24)).unwrap();
            let u = g1.matrix().mul(&e.circuit().to_unitary()).mul(g2.matrix());
            let r = approximate(&ApproxQuery::from_exact(&u, 1e-9).unwrap(), db);
            assert_eq!(r.t_count, e.t_count as usize);
            assert!(r.circuit.unwrap().to_unitary::<i64>().psu2_eq(&u));
        }
    }

    #[test]
    fn coset_target_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = coset_targets(&random_target(&mut rng));
        assert!(t.len() <= 576);
        assert_eq!(t.len(), 576);
        assert_eq!(coset_targets(&Quat::identity()).len(), 24);
    }

    #[test]
    fn level_window() {
        let db = db();
        let k = db.buckets[5].key;
        assert!(candidate_levels(k, 1e-6, db).contains(&5));
        let gap = db.buckets.windows(2).map(|w| w[1].key - w[0].key).fold(0.0, f64::max);
        let mid = db.buckets.windows(2).find(|w| w[1].key - w[0].key == gap).map(|w| (w[0].key + w[1].key) / 2.0).unwrap();
        assert!(candidate_levels(mid, gap / 16.0, db).is_empty());
    }

    #[test]
    fn level_window_is_tight() {
        // two unitaries at trace gap just under 4ε, with ε their distance bound
        let eps = 0.05;
        let mut cat = db().clone();
        let key = 1.0;
        let probe = key + 4.0 * eps * (1.0 - 1e-6);
        cat.buckets = vec![cat.buckets.iter().find(|b| b.kind == LevelKind::Regular).unwrap().clone()];
        cat.buckets[0].key = key;
        assert_eq!(candidate_levels(probe, eps, &cat), 0..1);
        assert!(candidate_levels(key + 4.0 * eps + 2.0 * DELTA_BUCKET, eps, &cat).is_empty());
    }

    #[test]
    fn indexed_matches_linear_scan() {
        let db = db();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..200 {
            let eps = [0.3, 0.15, 0.1][i % 3];
            let q = ApproxQuery::new(random_target(&mut rng), eps).unwrap();
            let a = approximate(&q, db);
            let b = approximate_linear(&q, db);
            assert_eq!(a.found, b.found);
            if a.found {
                assert_eq!(a.t_count, b.t_count);
                assert!((a.achieved_dist - b.achieved_dist).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn scan_tile_covers_every_match() {
        let db = db();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..1000 {
            let x = random_target(&mut rng);
            let eps = rng.gen_range(0.02..0.4);
            for b in &db.buckets[candidate_levels(x.abs_trace(), eps, db)] {
                let got: HashSet<u32> = scan_tile(b, &x, eps).into_iter().collect();
                for (i, e) in b.entries.iter().enumerate() {
                    if e.quat().dist(&x) < eps {
                        assert!(got.contains(&(i as u32)));
                    }
                }
            }
        }
    }

    #[test]
    fn deep_axis_scans_one_face() {
        let db = db();
        let b = db.buckets.iter().filter(|b| b.kind == LevelKind::Regular).max_by_key(|b| b.entries.len()).unwrap();
        let w = b.key / 2.0;
        let s = (1.0 - w * w).sqrt();
        let n = crate::psu2::normalize3([0.45, 0.1, 0.55]);
        let x = Quat::new(w, s * n[0], s * n[1], s * n[2]);
        let got = scan_tile(b, &x, 1e-3);
        let face: HashSet<u32> = b.face_idx[0].iter().copied().collect();
        assert!(got.iter().all(|i| face.contains(i)));
    }

    #[test]
    fn monotone_in_epsilon() {
        let db = db();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..40 {
            let x = random_target(&mut rng);
            let mut last = usize::MAX;
            for eps in [0.1, 0.15, 0.2, 0.3, 0.5] {
                let r = approximate(&ApproxQuery::new(x, eps).unwrap(), db);
                if r.found {
                    assert!(r.t_count <= last);
                    last = r.t_count;
                }
            }
        }
    }

    #[test]
    fn nearest_is_the_minimum() {
        let db = db();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..20 {
            let x = random_target(&mut rng);
            let r = nearest(&x, db, 1e-3).unwrap();
            let brute = db
                .entries()
                .flat_map(|e| coset_targets(&x).into_iter().map(move |t| e.quat().dist(&t.quat)))
                .fold(f64::INFINITY, f64::min);
            assert!((r.achieved_dist - brute).abs() < 1e-12);
        }
    }

    #[test]
    fn query_validation() {
        assert!(ApproxQuery::new(Quat::identity(), 0.0).is_err());
        assert!(ApproxQuery::new(Quat::new(2.0, 0.0, 0.0, 0.0), 0.1).is_err());
        let t = GateWord::parse("T").unwrap().to_unitary::<i64>().to_complex();
        let phased = t.map(|(r, i)| (r * 0.6 - i * 0.8, r * 0.8 + i * 0.6));
        let q = ApproxQuery::from_matrix(phased, 0.1).unwrap();
        assert!(q.target.dist(&GateWord::parse("T").unwrap().to_quat()) < 1e-12);
        assert!(ApproxQuery::from_matrix([(1.0, 0.0), (0.1, 0.0), (0.0, 0.0), (1.0, 0.0)], 0.1).is_err());
    }
}
