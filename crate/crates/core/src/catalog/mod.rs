//! Enumeration, trace-level bucketing, tile indexes and persistence of
//! canonical circuits.

mod io;
pub mod tiling;

use std::fmt;

use rayon::prelude::*;

use crate::error::Error;
use crate::psu2::{BlochAxis, ExactUnitary, GateSymbol, Quat, Real2};
use crate::rewrite::{CanonicalCircuit, NormalizedCircuit};
pub use io::{load, load_bytes, save, save_bytes, FORMAT_VERSION, MAGIC};
pub use tiling::{tile_of, tiling, TileInfo};

/// Trace keys closer than this are candidates for the same bucket.
pub const DELTA_BUCKET: f64 = 1e-10;
/// Default ceiling on `t_max` for [`build`].
pub const DEFAULT_BUDGET: u32 = 26;
/// Longest body a packed entry can hold.
pub const MAX_BLOCKS: u32 = 64;

/// Canonical circuits of T-count `≤ t_max` in (T-count, block sequence) order.
pub fn enumerate_canonical(t_max: u32) -> impl Iterator<Item = CanonicalCircuit> {
    (0..=t_max as usize).flat_map(|t| {
        let free = t.saturating_sub(4);
        (0..1u64 << free).map(move |v| {
            let bits = (0..t).map(|i| i >= 4 && v >> (t - 1 - i) & 1 == 1).collect();
            CanonicalCircuit::new(NormalizedCircuit::from_blocks(bits)).expect("first four blocks are TH")
        })
    })
}

/// Number of canonical circuits with T-count `≤ t` by the block grammar.
pub fn grammar_count(t: u32) -> u64 {
    if t < 4 {
        t as u64 + 1
    } else {
        (1u64 << (t - 3)) + 3
    }
}

/// The closed formula `2^(t−3) + 4` as usually quoted.
pub fn quoted_count(t: u32) -> i64 {
    2f64.powi(t as i32 - 3) as i64 + 4
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatalogEntry {
    /// Block `i` at bit `i`.
    pub bits: u64,
    pub t_count: u8,
    pub trace_key: f64,
    /// Unit axis; zero for the identity.
    pub axis: [f64; 3],
}

impl CatalogEntry {
    pub fn circuit(&self) -> CanonicalCircuit {
        let bits = (0..self.t_count as usize).map(|i| self.bits >> i & 1 == 1).collect();
        CanonicalCircuit::new(NormalizedCircuit::from_blocks(bits)).expect("stored bodies are canonical")
    }

    /// Rotation angle in [0, π], from the trace.
    pub fn theta(&self) -> f64 {
        2.0 * (self.trace_key / 2.0).clamp(-1.0, 1.0).acos()
    }

    pub fn bloch_axis(&self) -> BlochAxis<f64> {
        BlochAxis { n: self.axis, theta: self.theta() }
    }

    /// Sign-canonical quaternion (for half turns, up to the axis sign).
    pub fn quat(&self) -> Quat<f64> {
        let w = self.trace_key / 2.0;
        let s = (1.0 - w * w).max(0.0).sqrt();
        Quat::new(w, s * self.axis[0], s * self.axis[1], s * self.axis[2])
    }

    /// Bits in block order, for lexicographic tie-breaks.
    pub fn block_order(&self) -> u64 {
        self.bits.reverse_bits() >> (64 - self.t_count.max(1) as u32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelKind {
    /// `|tr| = 2`: the identity coset.
    Identity,
    /// `|tr| = 0`: half turns, axes identified with their antipodes.
    HalfTurn,
    Regular,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceLevelBucket {
    pub key: f64,
    pub kind: LevelKind,
    pub entries: Vec<CatalogEntry>,
    pub face_idx: Vec<Vec<u32>>,
    pub edge_idx: Vec<Vec<u32>>,
    pub vertex_idx: Vec<Vec<u32>>,
}

impl TraceLevelBucket {
    fn new(key: f64, kind: LevelKind, entries: Vec<CatalogEntry>) -> Self {
        let mut b = Self {
            key,
            kind,
            entries,
            face_idx: vec![Vec::new(); 24],
            edge_idx: vec![Vec::new(); 36],
            vertex_idx: vec![Vec::new(); 14],
        };
        if kind != LevelKind::Identity {
            let t = tiling();
            for (i, e) in b.entries.iter().enumerate() {
                let info = t.tile_of(e.axis);
                b.face_idx[info.face].push(i as u32);
                b.edge_idx[info.edge].push(i as u32);
                b.vertex_idx[info.vertex].push(i as u32);
            }
        }
        b
    }

    pub fn t_counts(&self) -> impl Iterator<Item = u8> + '_ {
        self.entries.iter().map(|e| e.t_count)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].t_count == w[1].t_count)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Catalog {
    pub max_tcount: u32,
    pub version: u32,
    pub buckets: Vec<TraceLevelBucket>,
}

/// Summary figures for reports.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogStats {
    pub entries: usize,
    pub distinct_keys: usize,
    /// Smallest gap between consecutive bucket keys.
    pub min_key_gap: f64,
    pub heterogeneous_buckets: usize,
}

impl fmt::Display for CatalogStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "entries={} distinct_keys={} min_key_gap={:.3e} heterogeneous_buckets={}",
            self.entries, self.distinct_keys, self.min_key_gap, self.heterogeneous_buckets
        )
    }
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.buckets.iter().map(|b| b.entries.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.buckets.iter().flat_map(|b| b.entries.iter())
    }

    /// Distinct trace keys among entries of T-count `≤ k`.
    pub fn distinct_keys_up_to(&self, k: u32) -> usize {
        self.buckets.iter().filter(|b| b.entries.iter().any(|e| e.t_count as u32 <= k)).count()
    }

    /// Buckets holding more than one T-count.
    pub fn heterogeneous(&self) -> Vec<&TraceLevelBucket> {
        self.buckets.iter().filter(|b| !b.is_homogeneous()).collect()
    }

    pub fn stats(&self) -> CatalogStats {
        let min_key_gap =
            self.buckets.windows(2).map(|w| w[1].key - w[0].key).fold(f64::INFINITY, f64::min);
        CatalogStats {
            entries: self.len(),
            distinct_keys: self.buckets.len(),
            min_key_gap,
            heterogeneous_buckets: self.heterogeneous().len(),
        }
    }

    /// Largest bucket size at T-count exactly `k`, relative to `2^(k/2)`.
    pub fn level_constant(&self, k: u32) -> f64 {
        let most = self
            .buckets
            .iter()
            .map(|b| b.entries.iter().filter(|e| e.t_count as u32 == k).count())
            .max()
            .unwrap_or(0);
        most as f64 / 2f64.powf(k as f64 / 2.0)
    }
}

struct Computed {
    entry: CatalogEntry,
    exact: Real2<i64>,
}

fn block_unitary(sh: bool) -> ExactUnitary<i64> {
    let g = if sh {
        vec![GateSymbol::S, GateSymbol::H, GateSymbol::T, GateSymbol::H]
    } else {
        vec![GateSymbol::T, GateSymbol::H]
    };
    ExactUnitary::from_gates(g)
}

fn compute_entry(c: &NormalizedCircuit, chunks: &[ExactUnitary<i64>]) -> Computed {
    let bits = c.blocks();
    let th = block_unitary(false);
    let mut u = ExactUnitary::identity();
    let mut i = 0;
    while i + 4 <= bits.len() {
        let idx = (0..4).fold(0usize, |acc, j| acc << 1 | bits[i + j] as usize);
        u = u.mul(&chunks[idx]);
        i += 4;
    }
    for &b in &bits[i..] {
        u = if b { u.mul(&block_unitary(true)) } else { u.mul(&th) };
    }
    let exact = u.abs_trace_sq().reduced();
    let trace_key = exact.to_f64().max(0.0).sqrt().min(2.0);
    let axis = if bits.is_empty() {
        [0.0; 3]
    } else {
        BlochAxis::from_quat_exact(&u.to_quat(), exact.is_zero()).map(|a| a.n).unwrap_or([0.0; 3])
    };
    let packed = bits.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | (b as u64) << i);
    Computed { entry: CatalogEntry { bits: packed, t_count: bits.len() as u8, trace_key, axis }, exact }
}

/// Enumerate, evaluate and index every canonical circuit up to `t_max`.
pub fn build(t_max: u32) -> Result<Catalog, Error> {
    build_with_budget(t_max, DEFAULT_BUDGET)
}

pub fn build_with_budget(t_max: u32, budget: u32) -> Result<Catalog, Error> {
    if t_max > budget.min(MAX_BLOCKS) {
        return Err(Error::Budget { requested: t_max, budget: budget.min(MAX_BLOCKS) });
    }
    let chunks: Vec<ExactUnitary<i64>> = (0..16)
        .map(|v: usize| (0..4).fold(ExactUnitary::identity(), |u, j| u.mul(&block_unitary(v >> (3 - j) & 1 == 1))))
        .collect();
    let circuits: Vec<CanonicalCircuit> = enumerate_canonical(t_max).collect();
    let mut computed: Vec<(usize, Computed)> =
        circuits.par_iter().enumerate().map(|(i, c)| (i, compute_entry(c, &chunks))).collect();
    drop(circuits);
    computed.par_sort_by(|(ia, a), (ib, b)| {
        a.entry
            .trace_key
            .total_cmp(&b.entry.trace_key)
            .then_with(|| (a.exact.p, a.exact.q, a.exact.l).cmp(&(b.exact.p, b.exact.q, b.exact.l)))
            .then(ia.cmp(ib))
    });
    let mut groups: Vec<(f64, Vec<CatalogEntry>, bool, bool)> = Vec::new();
    let mut last: Option<Real2<i64>> = None;
    for (_, c) in computed {
        if last.as_ref() != Some(&c.exact) {
            let is_id = c.exact == Real2::from_int(4);
            groups.push((c.entry.trace_key, Vec::new(), c.exact.is_zero(), is_id));
            last = Some(c.exact.clone());
        }
        groups.last_mut().expect("pushed above").1.push(c.entry);
    }
    let buckets = groups
        .into_par_iter()
        .map(|(key, entries, half, id)| {
            let kind = if id {
                LevelKind::Identity
            } else if half {
                LevelKind::HalfTurn
            } else {
                LevelKind::Regular
            };
            TraceLevelBucket::new(key, kind, entries)
        })
        .collect();
    Ok(Catalog { max_tcount: t_max, version: FORMAT_VERSION, buckets })
}

pub(crate) fn rebuild_bucket(key: f64, entries: Vec<CatalogEntry>) -> TraceLevelBucket {
    let kind = if entries.iter().any(|e| e.t_count == 0) {
        LevelKind::Identity
    } else if key == 0.0 {
        LevelKind::HalfTurn
    } else {
        LevelKind::Regular
    };
    TraceLevelBucket::new(key, kind, entries)
}
