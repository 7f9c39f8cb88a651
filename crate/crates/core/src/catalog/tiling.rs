//! Octahedral tiling of a trace level: 24 triangles, 36 edges, 14 vertices.

use std::sync::OnceLock;

use crate::clifford::Clifford;
use crate::psu2::{cross3, dot3, norm3, normalize3};

/// Base triangle: `0 ≤ y ≤ x` and `y ≤ z`.
pub fn in_f0(v: [f64; 3], tol: f64) -> bool {
    v[1] >= -tol && v[1] <= v[0] + tol && v[1] <= v[2] + tol
}

fn f0_violation(v: [f64; 3]) -> f64 {
    (-v[1]).max(v[1] - v[0]).max(v[1] - v[2]).max(0.0)
}

/// Great-circle angle between unit vectors.
pub fn angle(a: [f64; 3], b: [f64; 3]) -> f64 {
    norm3(cross3(a, b)).atan2(dot3(a, b))
}

/// Great-circle distance from `p` to the short arc `a`–`b`.
pub fn arc_distance(p: [f64; 3], a: [f64; 3], b: [f64; 3]) -> f64 {
    let n = normalize3(cross3(a, b));
    let h = dot3(p, n);
    let foot = [p[0] - h * n[0], p[1] - h * n[1], p[2] - h * n[2]];
    let fl = norm3(foot);
    if fl > 1e-15 {
        let f = [foot[0] / fl, foot[1] / fl, foot[2] / fl];
        // the foot lies on the arc iff it is on the inner side of both end planes
        if dot3(cross3(a, f), n) >= 0.0 && dot3(cross3(f, b), n) >= 0.0 {
            return h.abs().atan2(fl);
        }
    }
    angle(p, a).min(angle(p, b))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TileInfo {
    pub face: usize,
    pub edge: usize,
    pub vertex: usize,
    pub boundary_dist: f64,
}

pub struct Tiling {
    /// `R_g` as float matrices.
    pub rot: [[[f64; 3]; 3]; 24],
    pub vertices: [[f64; 3]; 14],
    /// Vertex ids of each tile.
    pub tile_vertices: [[usize; 3]; 24],
    /// Vertex id pairs, sorted.
    pub edges: Vec<(usize, usize)>,
    /// The two tiles sharing each edge.
    pub edge_tiles: Vec<(usize, usize)>,
    pub tile_edges: [[usize; 3]; 24],
}

fn build() -> Tiling {
    let s = 1.0 / 3f64.sqrt();
    let mut vertices = [[0.0; 3]; 14];
    for i in 0..3 {
        vertices[2 * i][i] = 1.0;
        vertices[2 * i + 1][i] = -1.0;
    }
    for k in 0..8 {
        let sg = |b: usize| if k >> b & 1 == 0 { s } else { -s };
        vertices[6 + k] = [sg(0), sg(1), sg(2)];
    }
    let vid = |v: [f64; 3]| -> usize {
        (0..14).find(|&i| angle(vertices[i], v) < 1e-9).expect("tile corner is a vertex")
    };
    let f0 = [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [s, s, s]];
    let mut rot = [[[0.0; 3]; 3]; 24];
    let mut tile_vertices = [[0; 3]; 24];
    for g in Clifford::all() {
        let r = g.rotation();
        for i in 0..3 {
            for j in 0..3 {
                rot[g.idx()][i][j] = r[i][j] as f64;
            }
        }
        for (k, v) in f0.iter().enumerate() {
            tile_vertices[g.idx()][k] = vid(apply(&rot[g.idx()], *v));
        }
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for tv in &tile_vertices {
        for (a, b) in [(tv[0], tv[1]), (tv[1], tv[2]), (tv[2], tv[0])] {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let mut tile_edges = [[0; 3]; 24];
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
    for (t, tv) in tile_vertices.iter().enumerate() {
        for (k, (a, b)) in [(tv[0], tv[1]), (tv[1], tv[2]), (tv[2], tv[0])].into_iter().enumerate() {
            let e = edges.binary_search(&(a.min(b), a.max(b))).expect("edge listed");
            tile_edges[t][k] = e;
            owners[e].push(t);
        }
    }
    let edge_tiles = owners.iter().map(|o| (o[0], o[1])).collect();
    Tiling { rot, vertices, tile_vertices, edges, edge_tiles, tile_edges }
}

pub fn apply(r: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [dot3(r[0], v), dot3(r[1], v), dot3(r[2], v)]
}

fn apply_transpose(r: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    let mut o = [0.0; 3];
    for (i, ri) in r.iter().enumerate() {
        for j in 0..3 {
            o[j] += ri[j] * v[i];
        }
    }
    o
}

pub fn tiling() -> &'static Tiling {
    static T: OnceLock<Tiling> = OnceLock::new();
    T.get_or_init(build)
}

impl Tiling {
    pub fn contains(&self, tile: usize, v: [f64; 3], tol: f64) -> bool {
        in_f0(apply_transpose(&self.rot[tile], v), tol)
    }

    /// Smallest tile index whose closed triangle holds `v`.
    pub fn face_of(&self, v: [f64; 3]) -> usize {
        (0..24).find(|&g| self.contains(g, v, 1e-12)).unwrap_or_else(|| {
            (0..24)
                .min_by(|&a, &b| {
                    let va = f0_violation(apply_transpose(&self.rot[a], v));
                    let vb = f0_violation(apply_transpose(&self.rot[b], v));
                    va.total_cmp(&vb)
                })
                .expect("24 tiles")
        })
    }

    pub fn edge_distance(&self, e: usize, v: [f64; 3]) -> f64 {
        let (a, b) = self.edges[e];
        arc_distance(v, self.vertices[a], self.vertices[b])
    }

    /// Distance from `v` to the closed tile (zero inside).
    pub fn tile_distance(&self, tile: usize, v: [f64; 3]) -> f64 {
        if self.contains(tile, v, 0.0) {
            return 0.0;
        }
        self.tile_edges[tile].iter().map(|&e| self.edge_distance(e, v)).fold(f64::INFINITY, f64::min)
    }

    pub fn tile_of(&self, v: [f64; 3]) -> TileInfo {
        let face = self.face_of(v);
        let (edge, boundary_dist) = self.tile_edges[face]
            .iter()
            .map(|&e| (e, self.edge_distance(e, v)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("three edges");
        let vertex = (0..14)
            .min_by(|&a, &b| angle(self.vertices[a], v).total_cmp(&angle(self.vertices[b], v)))
            .expect("14 vertices");
        TileInfo { face, edge, vertex, boundary_dist }
    }

    /// Tiles whose closure comes within `radius` of `v`.
    pub fn tiles_within(&self, v: [f64; 3], radius: f64) -> Vec<usize> {
        (0..24).filter(|&t| self.tile_distance(t, v) <= radius).collect()
    }
}

/// Tile data for a unit axis.
pub fn tile_of(axis: [f64; 3]) -> TileInfo {
    tiling().tile_of(axis)
}
