//! Lattice polytopes, faces, primitive vectors and unimodular coordinate
//! changes.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cone::HCone;
use crate::linalg::{self, det_big, dot, gcd_slice, rank, sub};
use crate::polycore::{ExponentVector, Polynomial, PolynomialSystem, Ring};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("zero polynomial has no Newton polytope")]
    ZeroPolynomial,
    #[error("zero vector has no primitive normalization")]
    ZeroVector,
    #[error("vector {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polynomial {index} has negative exponents after substitution")]
    NegativeExponent { index: usize },
}

/// Integer vector with gcd of entries equal to one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PrimitiveVector(Vec<i64>);

impl PrimitiveVector {
    pub fn new(v: Vec<i64>) -> Result<Self, GeometryError> {
        if linalg::is_zero(&v) || v.is_empty() {
            return Err(GeometryError::ZeroVector);
        }
        if gcd_slice(&v) != 1 {
            return Err(GeometryError::NotPrimitive(v));
        }
        Ok(PrimitiveVector(v))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> i64 {
        self.0[0]
    }

    pub fn neg(&self) -> PrimitiveVector {
        PrimitiveVector(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for PrimitiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Divide by the gcd of the entries, keeping the sign.
pub fn primitive(v: &[i64]) -> Result<PrimitiveVector, GeometryError> {
    if v.is_empty() || linalg::is_zero(v) {
        return Err(GeometryError::ZeroVector);
    }
    Ok(PrimitiveVector(linalg::make_primitive(v)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

/// Convex hull of a finite set of lattice points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    nvars: usize,
    points: Vec<Vec<i64>>,
    vertices: Vec<Vec<i64>>,
    dim: usize,
}

impl LatticePolytope {
    /// Build from points (duplicates removed). Vertices are the points whose
    /// normal cone is full-dimensional, decided exactly.
    pub fn from_points(nvars: usize, pts: &[Vec<i64>]) -> Result<Self, GeometryError> {
        if pts.is_empty() {
            return Err(GeometryError::ZeroPolynomial);
        }
        let mut points: Vec<Vec<i64>> = pts.to_vec();
        for p in &points {
            if p.len() != nvars {
                return Err(GeometryError::DimensionMismatch { expected: nvars, found: p.len() });
            }
        }
        points.sort();
        points.dedup();
        let diffs: Vec<Vec<i64>> = points.iter().skip(1).map(|p| sub(p, &points[0])).collect();
        let dim = rank(&diffs);
        let vertices = extreme_points(nvars, &points, dim);
        Ok(LatticePolytope { nvars, points, vertices, dim })
    }

    fn from_parts(nvars: usize, points: Vec<Vec<i64>>, vertices: Vec<Vec<i64>>) -> Self {
        let diffs: Vec<Vec<i64>> = points.iter().skip(1).map(|p| sub(p, &points[0])).collect();
        let dim = rank(&diffs);
        LatticePolytope { nvars, points, vertices, dim }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    /// Extreme value of ⟨a, v⟩ over the polytope.
    pub fn extreme(&self, v: &[i64], sense: Sense) -> i64 {
        let vals = self.vertices.iter().map(|a| dot(a, v));
        match sense {
            Sense::Min => vals.min().expect("nonempty"),
            Sense::Max => vals.max().expect("nonempty"),
        }
    }

    /// Support function h(v) = max ⟨a, v⟩.
    pub fn support_function(&self, v: &[i64]) -> i64 {
        self.extreme(v, Sense::Max)
    }

    /// Pairs of vertices spanning edges, with the half-space form of their
    /// (min-convention) normal cones.
    pub fn edges(&self) -> Vec<(Vec<i64>, Vec<i64>, HCone)> {
        let n = self.nvars;
        let mut out = Vec::new();
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                let (a, b) = (&self.vertices[i], &self.vertices[j]);
                let h = edge_cone(n, &self.points, a, b);
                if h.to_v().dim() + 1 == n {
                    out.push((a.clone(), b.clone(), h));
                }
            }
        }
        out
    }

    /// Image under the exponent map a ↦ M a.
    pub fn transform(&self, m: &UnimodularMatrix) -> LatticePolytope {
        let pts: Vec<Vec<i64>> = self.points.iter().map(|p| m.apply(p)).collect();
        LatticePolytope::from_points(self.nvars, &pts).expect("nonempty")
    }

    /// Drop the first coordinate (assumed constant over the polytope).
    pub fn drop_first(&self) -> LatticePolytope {
        let pts: Vec<Vec<i64>> = self.points.iter().map(|p| p[1..].to_vec()).collect();
        LatticePolytope::from_points(self.nvars - 1, &pts).expect("nonempty")
    }
}

/// {v : ⟨a−b, v⟩ = 0, ⟨c−a, v⟩ ≥ 0 for all c}.
fn edge_cone(n: usize, points: &[Vec<i64>], a: &[i64], b: &[i64]) -> HCone {
    let ineqs: Vec<Vec<i64>> =
        points.iter().filter(|c| c.as_slice() != a && c.as_slice() != b).map(|c| sub(c, a)).collect();
    HCone { n, eqs: vec![sub(a, b)], ineqs }
}

fn extreme_points(n: usize, points: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    if points.len() <= 2 {
        return points.to_vec();
    }
    if dim == 1 {
        // collinear: the two extreme points along the line
        let d = sub(&points[1], &points[0]);
        let lo = points.iter().min_by_key(|p| dot(p, &d)).unwrap().clone();
        let hi = points.iter().max_by_key(|p| dot(p, &d)).unwrap().clone();
        let mut v = vec![lo, hi];
        v.sort();
        return v;
    }
    points
        .iter()
        .filter(|p| {
            let ineqs: Vec<Vec<i64>> = points.iter().filter(|q| q != p).map(|q| sub(q, p)).collect();
            HCone { n, eqs: vec![], ineqs }.to_v().dim() == n
        })
        .cloned()
        .collect()
}

/// Newton polytope of a nonzero polynomial.
pub fn newton_polytope<C: Ring>(p: &Polynomial<C>) -> Result<LatticePolytope, GeometryError> {
    let supp = p.support().map_err(|_| GeometryError::ZeroPolynomial)?;
    let pts: Vec<Vec<i64>> = supp.iter().map(|e| e.as_i64()).collect();
    LatticePolytope::from_points(p.nvars(), &pts)
}

/// Points of P attaining the extreme inner product with v.
pub fn face_for(p: &LatticePolytope, v: &[i64], sense: Sense) -> LatticePolytope {
    let m = p.extreme(v, sense);
    let pts: Vec<Vec<i64>> = p.points.iter().filter(|a| dot(a, v) == m).cloned().collect();
    let verts: Vec<Vec<i64>> = p.vertices.iter().filter(|a| dot(a, v) == m).cloned().collect();
    LatticePolytope::from_parts(p.nvars, pts, verts)
}

/// Square integer matrix with determinant ±1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularMatrix {
    rows: Vec<Vec<i64>>,
}

impl UnimodularMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, GeometryError> {
        let n = rows.len();
        for r in &rows {
            if r.len() != n {
                return Err(GeometryError::DimensionMismatch { expected: n, found: r.len() });
            }
        }
        let d = det_big(&rows);
        if !linalg::big_is_unit(&d) {
            return Err(GeometryError::NotUnimodular(d.to_string()));
        }
        Ok(UnimodularMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![0; n];
                r[i] = 1;
                r
            })
            .collect();
        UnimodularMatrix { rows }
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn det(&self) -> i64 {
        if det_big(&self.rows) > num_bigint::BigInt::from(0) {
            1
        } else {
            -1
        }
    }

    /// a ↦ U a.
    pub fn apply(&self, a: &[i64]) -> Vec<i64> {
        self.rows.iter().map(|r| dot(r, a)).collect()
    }
}

/// Unimodular U whose first row is v, by extended-gcd column reduction of v
/// to e1 (v W = e1, U = W⁻¹).
pub fn unimodular_extend(v: &PrimitiveVector) -> Result<UnimodularMatrix, GeometryError> {
    let n = v.len();
    let mut r: Vec<i64> = v.entries().to_vec();
    if gcd_slice(&r) != 1 {
        return Err(GeometryError::NotPrimitive(r));
    }
    // inverse of the accumulated column operations, updated by row operations
    let mut inv = UnimodularMatrix::identity(n).rows;
    loop {
        let nz: Vec<usize> = (0..n).filter(|&i| r[i] != 0).collect();
        if nz.len() == 1 {
            break;
        }
        let p = *nz.iter().min_by_key(|&&i| (r[i].abs(), i)).unwrap();
        for &j in &nz {
            if j == p {
                continue;
            }
            let q = r[j].div_euclid(r[p]);
            if q == 0 {
                continue;
            }
            // column op: col_j -= q col_p  ⇒  inverse row op: row_p += q row_j
            r[j] -= q * r[p];
            for c in 0..n {
                inv[p][c] += q * inv[j][c];
            }
        }
    }
    let k = (0..n).find(|&i| r[i] != 0).unwrap();
    if k != 0 {
        // column swap ⇒ row swap of the inverse
        r.swap(0, k);
        inv.swap(0, k);
    }
    if r[0] < 0 {
        // column negation ⇒ row negation of the inverse
        for c in 0..n {
            inv[0][c] = -inv[0][c];
        }
    }
    debug_assert_eq!(inv[0], v.entries());
    UnimodularMatrix::new(inv)
}

/// Result of the monomial substitution x = y^U.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformedSystem<C> {
    pub system: PolynomialSystem<C>,
    /// Laurent monomial (exponent vector in y) removed from each polynomial.
    pub factors: Vec<Vec<i64>>,
}

/// Substitute x_j = Π_i y_i^{U_ij} (exponent a ↦ U a) and divide each
/// polynomial by its common monomial factor.
pub fn transform_system<C: Ring>(
    s: &PolynomialSystem<C>,
    u: &UnimodularMatrix,
) -> Result<TransformedSystem<C>, GeometryError> {
    let n = s.nvars();
    if u.n() != n {
        return Err(GeometryError::DimensionMismatch { expected: n, found: u.n() });
    }
    let mut polys = Vec::new();
    let mut factors = Vec::new();
    for (idx, p) in s.polys().iter().enumerate() {
        if p.is_zero() {
            return Err(GeometryError::ZeroPolynomial);
        }
        let images: Vec<(Vec<i64>, C)> = p.terms().map(|(e, c)| (u.apply(&e.as_i64()), c.clone())).collect();
        let mut low = images[0].0.clone();
        for (e, _) in &images {
            for i in 0..n {
                low[i] = low[i].min(e[i]);
            }
        }
        let mut q = Polynomial::zero(n);
        for (e, c) in images {
            let shifted: Vec<i64> = e.iter().zip(&low).map(|(a, b)| a - b).collect();
            if shifted.iter().any(|&x| x < 0) {
                return Err(GeometryError::NegativeExponent { index: idx });
            }
            q.add_term(ExponentVector(shifted.iter().map(|&x| x as u32).collect()), c);
        }
        polys.push(q);
        factors.push(low);
    }
    Ok(TransformedSystem {
        system: PolynomialSystem::new(polys, n).map_err(|_| GeometryError::DimensionMismatch { expected: n, found: n })?,
        factors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_hull_drops_interior_point() {
        let p = LatticePolytope::from_points(1, &[vec![2], vec![1], vec![0]]).unwrap();
        assert_eq!(p.vertices(), &[vec![0], vec![2]]);
        assert_eq!(p.dim(), 1);
    }

    #[test]
    fn square_with_center() {
        let pts = vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2], vec![1, 1], vec![1, 0]];
        let p = LatticePolytope::from_points(2, &pts).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.edges().len(), 4);
    }

    #[test]
    fn extension_has_first_row_v() {
        for v in [vec![2, 1, 1], vec![3, 1, 1], vec![0, -1, 2], vec![6, 10, 15], vec![-4, 3]] {
            let pv = PrimitiveVector::new(v.clone()).unwrap();
            let u = unimodular_extend(&pv).unwrap();
            assert_eq!(u.rows()[0], v);
        }
    }

    #[test]
    fn extension_of_e1_is_identity() {
        let u = unimodular_extend(&PrimitiveVector::new(vec![1, 0, 0, 0]).unwrap()).unwrap();
        assert_eq!(u, UnimodularMatrix::identity(4));
    }
}
