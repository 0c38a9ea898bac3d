//! P1 Lagrange assembly of the stiffness matrix G, the coefficient mass
//! matrix M_n, and the boundary mass matrix on the domain boundary.
//!
//! All three matrices are stored at full size N (the boundary mass matrix is
//! sparse-embedded with nonzeros only in boundary rows/columns), so the
//! generalized eigenvalue problem `(G - k^2 M_n) u = -lambda M_b u` is
//! represented literally. Assembly runs in triangle index order and is
//! bit-reproducible.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Result, SteklovError};
use crate::mesh::TriMesh;

/// Complex square sparse matrix in compressed-row form.
#[derive(Debug, Clone)]
pub struct SparseComplexMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseComplexMatrix {
    /// Accumulate triplets into CSR; duplicate entries are summed and exact
    /// zeros are dropped.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, Complex64)]) -> Self {
        let mut sorted: Vec<(usize, usize, Complex64)> = triplets.to_vec();
        sorted.sort_by_key(|&(i, j, _)| (i, j));

        let mut merged: Vec<(usize, usize, Complex64)> = Vec::with_capacity(sorted.len());
        for (i, j, v) in sorted {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        merged.retain(|&(_, _, v)| v != Complex64::new(0.0, 0.0));

        let mut row_ptr = vec![0usize; n + 1];
        for &(i, _, _) in &merged {
            row_ptr[i + 1] += 1;
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            n,
            row_ptr,
            col_idx: merged.iter().map(|t| t.1).collect(),
            values: merged.iter().map(|t| t.2).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (self.col_idx[k], self.values[k]))
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.row(i)
            .find(|&(c, _)| c == j)
            .map(|(_, v)| v)
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        for i in 0..self.n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            y[i] = acc;
        }
        y
    }

    /// `self + alpha * other`, merging sparsity patterns.
    pub fn add_scaled(&self, other: &SparseComplexMatrix, alpha: Complex64) -> Result<SparseComplexMatrix> {
        if self.n != other.n {
            return Err(SteklovError::DimensionMismatch(self.n, other.n));
        }
        let mut triplets = Vec::with_capacity(self.nnz() + other.nnz());
        triplets.extend(self.triplets());
        triplets.extend(other.triplets().map(|(i, j, v)| (i, j, alpha * v)));
        Ok(SparseComplexMatrix::from_triplets(self.n, &triplets))
    }

    /// Induced 1-norm (max column sum of moduli).
    pub fn one_norm(&self) -> f64 {
        let mut col_sums = vec![0.0f64; self.n];
        for (_, j, v) in self.triplets() {
            col_sums[j] += v.norm();
        }
        col_sums.into_iter().fold(0.0, f64::max)
    }

    /// Sum of all entries (used for area/perimeter identities).
    pub fn entry_sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    #[cfg(test)]
    pub fn is_structurally_symmetric(&self) -> bool {
        let mut set = std::collections::HashSet::new();
        for (i, j, _) in self.triplets() {
            set.insert((i, j));
        }
        set.iter().all(|&(i, j)| set.contains(&(j, i)))
    }
}

/// Index of refraction n(x) = n1(x) + i n2(x)/k with n1 > 0, n2 >= 0.
#[derive(Clone)]
pub enum RefractionIndex {
    Constant(Complex64),
    Variable(Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>),
}

impl RefractionIndex {
    pub fn constant(n: Complex64) -> Self {
        RefractionIndex::Constant(n)
    }

    pub fn from_fn<F: Fn(f64, f64) -> Complex64 + Send + Sync + 'static>(f: F) -> Self {
        RefractionIndex::Variable(Arc::new(f))
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        match self {
            RefractionIndex::Constant(c) => *c,
            RefractionIndex::Variable(f) => f(x, y),
        }
    }
}

impl std::fmt::Debug for RefractionIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RefractionIndex::Constant(c) => write!(f, "RefractionIndex::Constant({c})"),
            RefractionIndex::Variable(_) => write!(f, "RefractionIndex::Variable(..)"),
        }
    }
}

/// G[i][j] = integral of grad(phi_j) . grad(phi_i); exact for P1 elements.
pub fn assemble_stiffness(mesh: &TriMesh) -> Result<SparseComplexMatrix> {
    let n = mesh.vertices.len();
    let mut triplets = Vec::with_capacity(9 * mesh.triangles.len());
    for (t, &[a, b, c]) in mesh.triangles.iter().enumerate() {
        let area = mesh.signed_area(t);
        if area <= 0.0 {
            return Err(SteklovError::DegenerateTriangle(t));
        }
        let p = [mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]];
        // grad(phi_i) = g_i / (2 area) with g_i the rotated opposite edge.
        let g = [
            [p[1][1] - p[2][1], p[2][0] - p[1][0]],
            [p[2][1] - p[0][1], p[0][0] - p[2][0]],
            [p[0][1] - p[1][1], p[1][0] - p[0][0]],
        ];
        let scale = 1.0 / (4.0 * area);
        let idx = [a, b, c];
        for i in 0..3 {
            for j in 0..3 {
                let v = scale * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
                triplets.push((idx[i], idx[j], Complex64::new(v, 0.0)));
            }
        }
    }
    Ok(SparseComplexMatrix::from_triplets(n, &triplets))
}

/// M_n[i][j] = integral of n(x) phi_j phi_i, by the 3-point edge-midpoint
/// rule (exact for quadratic integrands, hence exact for constant n).
pub fn assemble_mass(mesh: &TriMesh, n: &RefractionIndex) -> Result<SparseComplexMatrix> {
    let dim = mesh.vertices.len();
    let mut triplets = Vec::with_capacity(9 * mesh.triangles.len());
    // P1 hats at the three edge midpoints m01, m12, m20.
    const HAT: [[f64; 3]; 3] = [[0.5, 0.0, 0.5], [0.5, 0.5, 0.0], [0.0, 0.5, 0.5]];
    for (t, &[a, b, c]) in mesh.triangles.iter().enumerate() {
        let area = mesh.signed_area(t);
        if area <= 0.0 {
            return Err(SteklovError::DegenerateTriangle(t));
        }
        let p = [mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]];
        let mids = [
            [0.5 * (p[0][0] + p[1][0]), 0.5 * (p[0][1] + p[1][1])],
            [0.5 * (p[1][0] + p[2][0]), 0.5 * (p[1][1] + p[2][1])],
            [0.5 * (p[2][0] + p[0][0]), 0.5 * (p[2][1] + p[0][1])],
        ];
        let mut nq = [Complex64::new(0.0, 0.0); 3];
        for (q, mid) in mids.iter().enumerate() {
            let val = n.eval(mid[0], mid[1]);
            if !(val.re > 0.0) || val.im < 0.0 {
                return Err(SteklovError::InvalidRefraction(mid[0], mid[1]));
            }
            nq[q] = val;
        }
        let w = area / 3.0;
        let idx = [a, b, c];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Complex64::new(0.0, 0.0);
                for q in 0..3 {
                    acc += nq[q] * (HAT[q][i] * HAT[q][j]);
                }
                triplets.push((idx[i], idx[j], w * acc));
            }
        }
    }
    Ok(SparseComplexMatrix::from_triplets(dim, &triplets))
}

/// Boundary mass matrix: each boundary edge of length L contributes
/// (L/6) [[2,1],[1,2]] to its two endpoint rows/columns.
pub fn assemble_boundary_mass(mesh: &TriMesh) -> SparseComplexMatrix {
    let n = mesh.vertices.len();
    let mut triplets = Vec::with_capacity(4 * mesh.boundary_edges.len());
    for e in &mesh.boundary_edges {
        let p = mesh.vertices[e[0]];
        let q = mesh.vertices[e[1]];
        let len = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
        let d = Complex64::new(len / 3.0, 0.0);
        let o = Complex64::new(len / 6.0, 0.0);
        triplets.push((e[0], e[0], d));
        triplets.push((e[1], e[1], d));
        triplets.push((e[0], e[1], o));
        triplets.push((e[1], e[0], o));
    }
    SparseComplexMatrix::from_triplets(n, &triplets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{make_mesh, mesh_stats, Domain};

    fn unit_triangle() -> TriMesh {
        TriMesh {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            triangles: vec![[0, 1, 2]],
            boundary_edges: vec![[0, 1], [1, 2], [2, 0]],
            boundary_vertices: vec![0, 1, 2],
            domain: Domain::Square,
            level: 0,
        }
    }

    #[test]
    fn stiffness_single_triangle() {
        let g = assemble_stiffness(&unit_triangle()).unwrap();
        let expect = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
        for i in 0..3 {
            for j in 0..3 {
                let v = g.get(i, j);
                assert!((v.re - expect[i][j]).abs() <= 1e-14, "G[{i}][{j}] = {v}");
                assert_eq!(v.im, 0.0);
            }
        }
    }

    #[test]
    fn mass_single_triangle() {
        let m = assemble_mass(&unit_triangle(), &RefractionIndex::constant(Complex64::new(1.0, 0.0))).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 2.0 / 24.0 } else { 1.0 / 24.0 };
                assert!((m.get(i, j).re - expect).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn boundary_mass_single_edge() {
        let mut mesh = unit_triangle();
        mesh.boundary_edges = vec![[0, 1]];
        mesh.boundary_vertices = vec![0, 1];
        let m = assemble_boundary_mass(&mesh);
        assert!((m.get(0, 0).re - 2.0 / 6.0).abs() <= 1e-14);
        assert!((m.get(0, 1).re - 1.0 / 6.0).abs() <= 1e-14);
        assert!((m.get(1, 1).re - 2.0 / 6.0).abs() <= 1e-14);
        assert_eq!(m.get(2, 2), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn stiffness_rows_sum_to_zero() {
        for domain in [Domain::Disk, Domain::Square, Domain::LShape] {
            let mesh = make_mesh(domain, 2).unwrap();
            let g = assemble_stiffness(&mesh).unwrap();
            for i in 0..g.dim() {
                let s: Complex64 = g.row(i).map(|(_, v)| v).sum();
                assert!(s.norm() <= 1e-12, "{domain}: row {i} sums to {s}");
            }
            // exact symmetry
            for (i, j, v) in g.triplets() {
                assert_eq!(g.get(j, i), v);
            }
            assert!(g.is_structurally_symmetric());
        }
    }

    #[test]
    fn mass_sum_equals_area() {
        for (domain, area) in [(Domain::Square, 2.0), (Domain::LShape, 3.0)] {
            let mesh = make_mesh(domain, 3).unwrap();
            let m = assemble_mass(&mesh, &RefractionIndex::constant(Complex64::new(1.0, 0.0))).unwrap();
            let s = m.entry_sum();
            assert!((s.re - area).abs() <= 1e-12 * area, "{domain}: sum {s}");
        }
    }

    #[test]
    fn mass_linear_in_constant_n() {
        let mesh = make_mesh(Domain::Square, 2).unwrap();
        let one = assemble_mass(&mesh, &RefractionIndex::constant(Complex64::new(1.0, 0.0))).unwrap();
        let n = Complex64::new(4.0, 4.0);
        let mn = assemble_mass(&mesh, &RefractionIndex::constant(n)).unwrap();
        for (i, j, v) in mn.triplets() {
            assert!((v - n * one.get(i, j)).norm() <= 1e-14);
        }
    }

    #[test]
    fn boundary_mass_sum_equals_perimeter() {
        for domain in [Domain::Disk, Domain::Square, Domain::LShape] {
            let mesh = make_mesh(domain, 3).unwrap();
            let perimeter: f64 = mesh
                .boundary_edges
                .iter()
                .map(|e| {
                    let p = mesh.vertices[e[0]];
                    let q = mesh.vertices[e[1]];
                    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
                })
                .sum();
            let mb = assemble_boundary_mass(&mesh);
            assert!((mb.entry_sum().re - perimeter).abs() <= 1e-12 * perimeter);
            // interior rows identically zero
            let on_boundary: std::collections::HashSet<usize> =
                mesh.boundary_vertices.iter().copied().collect();
            for i in 0..mb.dim() {
                if !on_boundary.contains(&i) {
                    assert_eq!(mb.row(i).count(), 0);
                }
            }
        }
    }

    #[test]
    fn patch_test() {
        let mesh = make_mesh(Domain::LShape, 3).unwrap();
        let g = assemble_stiffness(&mesh).unwrap();
        let mb = assemble_boundary_mass(&mesh);
        let ones = vec![Complex64::new(1.0, 0.0); g.dim()];
        let g1 = g.matvec(&ones);
        let scale = g.one_norm();
        for v in &g1 {
            assert!(v.norm() <= 1e-12 * scale);
        }
        let m1 = mb.matvec(&ones);
        let total: Complex64 = m1.iter().sum();
        let perimeter = mb.entry_sum().re;
        assert!((total.re - perimeter).abs() <= 1e-12 * perimeter);
    }

    #[test]
    fn mass_positive_definite_on_random_vectors() {
        use rand::{Rng, SeedableRng};
        let mesh = make_mesh(Domain::Disk, 2).unwrap();
        let m = assemble_mass(&mesh, &RefractionIndex::constant(Complex64::new(1.0, 0.0))).unwrap();
        let mb = assemble_boundary_mass(&mesh);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let x: Vec<Complex64> = (0..m.dim())
                .map(|_| Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, 0.0))
                .collect();
            let mx = m.matvec(&x);
            let quad: Complex64 = x.iter().zip(&mx).map(|(a, b)| a.conj() * b).sum();
            assert!(quad.re > 0.0);
            // boundary mass: semidefinite, positive on boundary-supported vectors
            let mbx = mb.matvec(&x);
            let quad_b: Complex64 = x.iter().zip(&mbx).map(|(a, b)| a.conj() * b).sum();
            assert!(quad_b.re >= -1e-14);
        }
        // positive definite on the boundary block
        for _ in 0..10 {
            let mut x = vec![Complex64::new(0.0, 0.0); m.dim()];
            for &b in &mesh.boundary_vertices {
                x[b] = Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
            }
            let mbx = mb.matvec(&x);
            let quad: Complex64 = x.iter().zip(&mbx).map(|(a, b)| a.conj() * b).sum();
            assert!(quad.re > 0.0);
        }
    }

    #[test]
    fn variable_n_quadrature_exact_for_quadratics() {
        // The 3-point midpoint rule has polynomial degree 2, so the entry sum
        // (= quadrature of integral n dx) is exact for quadratic n.
        let nfun = RefractionIndex::from_fn(|x, y| Complex64::new(1.0 + x * x + y * y, 0.0));
        let mesh = make_mesh(Domain::Square, 3).unwrap();
        let m = assemble_mass(&mesh, &nfun).unwrap();
        let exact = 2.0 + 2.0 / 3.0;
        assert!((m.entry_sum().re - exact).abs() <= 1e-12);
    }

    #[test]
    fn variable_n_quadrature_converges() {
        // Quartic n is beyond the rule's degree; the composite error must
        // shrink by at least 4x per refinement (second order or better).
        let nfun = RefractionIndex::from_fn(|x, _| Complex64::new(1.0 + x.powi(4), 0.0));
        let mut errs = Vec::new();
        for level in 2..=5 {
            let mesh = make_mesh(Domain::Square, level).unwrap();
            let m = assemble_mass(&mesh, &nfun).unwrap();
            let exact = 2.0 + 2.0 / 15.0;
            errs.push((m.entry_sum().re - exact).abs());
        }
        for w in errs.windows(2) {
            assert!(w[1] < w[0] / 3.5, "quadrature below second order: {errs:?}");
        }
    }

    #[test]
    fn invalid_refraction_rejected() {
        let mesh = make_mesh(Domain::Square, 1).unwrap();
        let bad_re = RefractionIndex::constant(Complex64::new(-1.0, 0.0));
        assert!(matches!(
            assemble_mass(&mesh, &bad_re),
            Err(SteklovError::InvalidRefraction(_, _))
        ));
        let bad_im = RefractionIndex::constant(Complex64::new(1.0, -0.5));
        assert!(matches!(
            assemble_mass(&mesh, &bad_im),
            Err(SteklovError::InvalidRefraction(_, _))
        ));
    }

    #[test]
    fn mass_area_consistent_across_levels() {
        // square/lshape: exact area at every level; disk: monotone to pi
        let mut prev = 0.0;
        for level in 0..=4 {
            let mesh = make_mesh(Domain::Disk, level).unwrap();
            let m = assemble_mass(&mesh, &RefractionIndex::constant(Complex64::new(1.0, 0.0))).unwrap();
            let area = m.entry_sum().re;
            let stats = mesh_stats(&mesh);
            assert!((area - stats.area).abs() <= 1e-12);
            assert!(area > prev);
            prev = area;
        }
    }
}
