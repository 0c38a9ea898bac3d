//! Triangulations of the three benchmark domains.
//!
//! Each domain starts from a fixed coarse mesh (a fan for the square and the
//! disk, three split unit squares for the L-shape) and is refined uniformly:
//! every triangle splits into four via edge midpoints. On the disk, midpoints
//! of boundary edges are projected radially onto the unit circle, so the
//! polygonal boundary converges to the circle at second order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SteklovError};

/// Refinement cap; level 12 on the disk is ~400M triangles, far beyond need.
pub const MAX_LEVEL: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Disk,
    Square,
    LShape,
}

impl Domain {
    pub fn tag(&self) -> &'static str {
        match self {
            Domain::Disk => "disk",
            Domain::Square => "square",
            Domain::LShape => "lshape",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Domain {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "disk" => Ok(Domain::Disk),
            "square" => Ok(Domain::Square),
            "lshape" => Ok(Domain::LShape),
            other => Err(format!("unknown domain tag `{other}` (expected disk|square|lshape)")),
        }
    }
}

/// A conforming triangulation with a single closed boundary loop.
///
/// Triangles are counterclockwise. `boundary_vertices` walks the boundary
/// loop in counterclockwise order and `boundary_edges[i]` connects
/// `boundary_vertices[i]` to its successor.
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<[usize; 2]>,
    pub boundary_vertices: Vec<usize>,
    pub domain: Domain,
    pub level: u32,
}

#[derive(Debug, Clone, Copy)]
pub struct MeshStats {
    /// Maximum edge length over all triangles.
    pub h: f64,
    pub vertex_count: usize,
    /// Number of vertices on the boundary loop.
    pub boundary_count: usize,
    /// Sum of signed triangle areas.
    pub area: f64,
}

impl TriMesh {
    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        let p = self.vertices[a];
        let q = self.vertices[b];
        let r = self.vertices[c];
        0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]))
    }

    /// All undirected edges, deduplicated.
    pub fn edge_count(&self) -> usize {
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(3 * self.triangles.len());
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                edges.push((a.min(b), a.max(b)));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges.len()
    }
}

/// Build the coarse mesh of `domain` and refine it `level` times.
pub fn make_mesh(domain: Domain, level: u32) -> Result<TriMesh> {
    if level > MAX_LEVEL {
        return Err(SteklovError::LevelTooLarge(level));
    }
    let mut mesh = coarse_mesh(domain);
    for _ in 0..level {
        mesh = refine_uniform(&mesh);
    }
    Ok(mesh)
}

fn coarse_mesh(domain: Domain) -> TriMesh {
    match domain {
        Domain::Square => {
            // Fan from the center to the rotated square (0,-1),(1,0),(0,1),(-1,0).
            let vertices = vec![[0.0, 0.0], [0.0, -1.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]];
            let triangles = vec![[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 1]];
            let boundary_vertices = vec![1, 2, 3, 4];
            TriMesh {
                vertices,
                triangles,
                boundary_edges: loop_edges(&boundary_vertices),
                boundary_vertices,
                domain,
                level: 0,
            }
        }
        Domain::Disk => {
            // Fan from the origin to 8 equispaced points on the unit circle.
            let mut vertices = vec![[0.0, 0.0]];
            for j in 0..8 {
                let th = 2.0 * std::f64::consts::PI * j as f64 / 8.0;
                vertices.push([th.cos(), th.sin()]);
            }
            let triangles = (0..8).map(|j| [0, 1 + j, 1 + (j + 1) % 8]).collect();
            let boundary_vertices: Vec<usize> = (1..=8).collect();
            TriMesh {
                vertices,
                triangles,
                boundary_edges: loop_edges(&boundary_vertices),
                boundary_vertices,
                domain,
                level: 0,
            }
        }
        Domain::LShape => {
            // (-0.9,1.1)x(-1.1,0.9) minus [0.1,1.1]x[-1.1,-0.1]: three unit
            // squares, each split along the diagonal away from the reentrant
            // corner at (0.1,-0.1).
            let vertices = vec![
                [-0.9, -1.1], // 0
                [0.1, -1.1],  // 1
                [-0.9, -0.1], // 2
                [0.1, -0.1],  // 3  reentrant corner
                [1.1, -0.1],  // 4
                [-0.9, 0.9],  // 5
                [0.1, 0.9],   // 6
                [1.1, 0.9],   // 7
            ];
            let triangles = vec![
                [0, 1, 3],
                [0, 3, 2],
                [2, 3, 6],
                [2, 6, 5],
                [3, 4, 7],
                [3, 7, 6],
            ];
            let boundary_vertices = vec![0, 1, 3, 4, 7, 6, 5, 2];
            TriMesh {
                vertices,
                triangles,
                boundary_edges: loop_edges(&boundary_vertices),
                boundary_vertices,
                domain,
                level: 0,
            }
        }
    }
}

fn loop_edges(loop_vertices: &[usize]) -> Vec<[usize; 2]> {
    (0..loop_vertices.len())
        .map(|i| [loop_vertices[i], loop_vertices[(i + 1) % loop_vertices.len()]])
        .collect()
}

/// Split every triangle into four via edge midpoints.
///
/// New vertices are deduplicated by parent edge (index arithmetic, not
/// coordinate hashing). On the disk, midpoints of boundary edges are
/// projected onto the unit circle.
pub fn refine_uniform(mesh: &TriMesh) -> TriMesh {
    let mut vertices = mesh.vertices.clone();
    let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();

    let boundary_set: std::collections::HashSet<(usize, usize)> = mesh
        .boundary_edges
        .iter()
        .map(|e| (e[0].min(e[1]), e[0].max(e[1])))
        .collect();

    let mut mid_of = |a: usize, b: usize, vertices: &mut Vec<[f64; 2]>| -> usize {
        let key = (a.min(b), a.max(b));
        if let Some(&m) = midpoint.get(&key) {
            return m;
        }
        let pa = vertices[a];
        let pb = vertices[b];
        let mut p = [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])];
        if mesh.domain == Domain::Disk && boundary_set.contains(&key) {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            p = [p[0] / r, p[1] / r];
        }
        let idx = vertices.len();
        vertices.push(p);
        midpoint.insert(key, idx);
        idx
    };

    let mut triangles = Vec::with_capacity(4 * mesh.triangles.len());
    for &[a, b, c] in &mesh.triangles {
        let mab = mid_of(a, b, &mut vertices);
        let mbc = mid_of(b, c, &mut vertices);
        let mca = mid_of(c, a, &mut vertices);
        triangles.push([a, mab, mca]);
        triangles.push([mab, b, mbc]);
        triangles.push([mca, mbc, c]);
        triangles.push([mab, mbc, mca]);
    }

    // Walk the parent loop, interleaving the new edge midpoints.
    let m = mesh.boundary_vertices.len();
    let mut boundary_vertices = Vec::with_capacity(2 * m);
    for i in 0..m {
        let a = mesh.boundary_vertices[i];
        let b = mesh.boundary_vertices[(i + 1) % m];
        let key = (a.min(b), a.max(b));
        boundary_vertices.push(a);
        boundary_vertices.push(midpoint[&key]);
    }

    TriMesh {
        vertices,
        triangles,
        boundary_edges: loop_edges(&boundary_vertices),
        boundary_vertices,
        domain: mesh.domain,
        level: mesh.level + 1,
    }
}

pub fn mesh_stats(mesh: &TriMesh) -> MeshStats {
    let mut h: f64 = 0.0;
    let mut area = 0.0;
    for t in 0..mesh.triangles.len() {
        let [a, b, c] = mesh.triangles[t];
        for (i, j) in [(a, b), (b, c), (c, a)] {
            let p = mesh.vertices[i];
            let q = mesh.vertices[j];
            h = h.max(((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt());
        }
        area += mesh.signed_area(t);
    }
    MeshStats {
        h,
        vertex_count: mesh.vertices.len(),
        boundary_count: mesh.boundary_vertices.len(),
        area,
    }
}
