//! Lattice mixed volumes: the face recursion, a polarization oracle, and the
//! degree bound of a space curve with its split over pretropisms.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cone::HCone;
use crate::geometry::{face_for, unimodular_extend, GeometryError, LatticePolytope, PrimitiveVector, Sense};
use crate::linalg::{det_big, rank, sub};
use crate::polycore::{PolynomialSystem, Ring};
use crate::tropical::{prevariety, system_polytopes, TropicalError};

/// Largest dimension the polarization oracle accepts.
pub const ORACLE_MAX_DIM: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MixedVolumeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty polytope tuple")]
    Empty,
    #[error("oracle input too large: n = {0} (limit {ORACLE_MAX_DIM})")]
    Oversize(usize),
    #[error("system has {polys} polynomials in {nvars} variables; a curve needs at least n-1")]
    WrongShape { polys: usize, nvars: usize },
    #[error("ray {0} has nonpositive first coordinate")]
    NotPretropism(PrimitiveVector),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
}

fn check_tuple(polytopes: &[LatticePolytope]) -> Result<usize, MixedVolumeError> {
    let n = polytopes.len();
    if n == 0 {
        return Err(MixedVolumeError::Empty);
    }
    for p in polytopes {
        if p.nvars() != n {
            return Err(MixedVolumeError::DimensionMismatch { expected: n, found: p.nvars() });
        }
    }
    Ok(n)
}

/// Min-faces at `w`, carried into the lattice w^⊥ by a unimodular change of
/// coordinates whose first row is w.
fn projected_faces(polytopes: &[LatticePolytope], w: &PrimitiveVector) -> Result<Vec<LatticePolytope>, GeometryError> {
    let u = unimodular_extend(w)?;
    Ok(polytopes.iter().map(|p| face_for(p, w.entries(), Sense::Min).transform(&u).drop_first()).collect())
}

/// Mixed volume of n polytopes in n-space, normalized so that n unit axis
/// segments give 1.
///
/// The last polytope is distinguished: MV = Σ_w (−min_{P_n}⟨·,w⟩) MV_{n−1}(in_w P_1..in_w P_{n−1}),
/// w over the rays of the prevariety of the first n−1 polytopes. Rays whose
/// faces span less than a hyperplane contribute zero through the recursion.
pub fn mixed_volume(polytopes: &[LatticePolytope]) -> Result<i64, MixedVolumeError> {
    let n = check_tuple(polytopes)?;
    if n == 1 {
        let p = &polytopes[0];
        return Ok(p.extreme(&[1], Sense::Max) - p.extreme(&[1], Sense::Min));
    }
    if polytopes.iter().any(|p| p.is_point()) {
        return Ok(0);
    }
    let (head, last) = polytopes.split_at(n - 1);
    let fan = prevariety(head)?;
    let mut total = 0i64;
    for w in &fan.rays {
        let weight = -last[0].extreme(w.entries(), Sense::Min);
        if weight == 0 {
            continue;
        }
        let faces = projected_faces(head, w)?;
        total += weight * mixed_volume(&faces)?;
    }
    Ok(total)
}

/// Polarization Σ_S (−1)^{n−|S|} Vol(Σ_{i∈S} P_i) with exact volumes from a
/// pulling triangulation. Independent of the recursion; exponential in n.
pub fn mixed_volume_oracle(polytopes: &[LatticePolytope]) -> Result<i64, MixedVolumeError> {
    let n = check_tuple(polytopes)?;
    if n > ORACLE_MAX_DIM {
        return Err(MixedVolumeError::Oversize(n));
    }
    let mut acc = BigInt::zero();
    for mask in 1u32..(1 << n) {
        let members: Vec<&LatticePolytope> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &polytopes[i]).collect();
        let v = scaled_volume(n, &minkowski_sum(n, &members));
        if (n - members.len()) % 2 == 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    let fact: BigInt = (1..=n as u64).product::<u64>().into();
    debug_assert!((&acc % &fact).is_zero(), "polarization not divisible by n!");
    Ok((acc / fact).to_i64().expect("mixed volume fits in i64"))
}

/// Vertices and facet incidences of a full-dimensional point set, from one
/// double description of the dual of the homogenized cone: the extreme rays
/// (b, a) are the facets b + ⟨a, x⟩ ≥ 0, and a point is a vertex when the
/// facet normals tight at it have full rank.
fn hull(n: usize, points: &[Vec<i64>]) -> (Vec<Vec<i64>>, Vec<Vec<usize>>) {
    let ineqs: Vec<Vec<i64>> = points
        .iter()
        .map(|v| {
            let mut r = vec![1];
            r.extend_from_slice(v);
            r
        })
        .collect();
    let dual = HCone { n: n + 1, eqs: vec![], ineqs }.to_v();
    let value = |f: &[i64], x: &[i64]| f[0] + f[1..].iter().zip(x).map(|(a, b)| a * b).sum::<i64>();
    let verts: Vec<Vec<i64>> = points
        .iter()
        .filter(|p| {
            let normals: Vec<Vec<i64>> = dual.rays.iter().filter(|f| value(f, p) == 0).map(|f| f[1..].to_vec()).collect();
            rank(&normals) == n
        })
        .cloned()
        .collect();
    let facets = dual
        .rays
        .iter()
        .map(|f| (0..verts.len()).filter(|&i| value(f, &verts[i]) == 0).collect())
        .collect();
    (verts, facets)
}

fn affine_rank(points: &[Vec<i64>]) -> usize {
    let rows: Vec<Vec<i64>> = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    rank(&rows)
}

/// Candidate points of the Minkowski sum, pruned to vertices after each
/// summand when the partial sum is full-dimensional.
fn minkowski_sum(n: usize, ps: &[&LatticePolytope]) -> Vec<Vec<i64>> {
    let mut acc: Vec<Vec<i64>> = vec![vec![0; n]];
    for p in ps {
        let mut next = Vec::with_capacity(acc.len() * p.vertices().len());
        for a in &acc {
            for b in p.vertices() {
                next.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        next.sort();
        next.dedup();
        acc = if affine_rank(&next) == n { hull(n, &next).0 } else { next };
    }
    acc
}

/// n! times the Euclidean volume of the hull; zero when not full-dimensional.
fn scaled_volume(n: usize, points: &[Vec<i64>]) -> BigInt {
    if affine_rank(points) < n {
        return BigInt::zero();
    }
    let (verts, facets) = hull(n, points);
    let all: Vec<usize> = (0..verts.len()).collect();
    let mut memo = HashMap::new();
    let mut vol = BigInt::zero();
    for simplex in pull(&all, n, &facets, &verts, &mut memo) {
        let base = &verts[simplex[0]];
        let m: Vec<Vec<i64>> = simplex[1..].iter().map(|&i| sub(&verts[i], base)).collect();
        let d = det_big(&m);
        vol += if d < BigInt::zero() { -d } else { d };
    }
    vol
}

fn affine_dim(idx: &[usize], verts: &[Vec<i64>]) -> usize {
    let rows: Vec<Vec<i64>> = idx[1..].iter().map(|&i| sub(&verts[i], &verts[idx[0]])).collect();
    rank(&rows)
}

type Simplices = Vec<Vec<usize>>;

/// Pulling triangulation of the face with vertex set `face` (dimension d):
/// cone the smallest vertex over the triangulated facets of the face that
/// miss it.
fn pull(
    face: &[usize],
    d: usize,
    facets: &[Vec<usize>],
    verts: &[Vec<i64>],
    memo: &mut HashMap<Vec<usize>, Simplices>,
) -> Simplices {
    if d == 0 {
        return vec![vec![face[0]]];
    }
    if let Some(t) = memo.get(face) {
        return t.clone();
    }
    let v0 = face[0];
    let mut subfaces: Vec<Vec<usize>> = Vec::new();
    for g in facets {
        let s: Vec<usize> = face.iter().copied().filter(|i| g.contains(i)).collect();
        if s.is_empty() || s.len() == face.len() || s.contains(&v0) || subfaces.contains(&s) {
            continue;
        }
        if affine_dim(&s, verts) + 1 == d {
            subfaces.push(s);
        }
    }
    let mut out = Vec::new();
    for s in &subfaces {
        for mut simplex in pull(s, d - 1, facets, verts, memo) {
            simplex.insert(0, v0);
            out.push(simplex);
        }
    }
    memo.insert(face.to_vec(), out.clone());
    out
}

/// One pretropism's share of the degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionTerm {
    pub ray: PrimitiveVector,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDecomposition {
    pub total: i64,
    pub terms: Vec<DecompositionTerm>,
}

impl DegreeDecomposition {
    pub fn weight_of(&self, ray: &[i64]) -> Option<i64> {
        self.terms.iter().find(|t| t.ray.entries() == ray).map(|t| t.weight)
    }
}

/// The segment from the origin to e1.
pub fn edge_segment(n: usize) -> LatticePolytope {
    let mut e = vec![0; n];
    e[0] = 1;
    LatticePolytope::from_points(n, &[vec![0; n], e]).expect("segment")
}

fn curve_shape<C: Ring>(s: &PolynomialSystem<C>) -> Result<(), MixedVolumeError> {
    let n = s.nvars();
    if n < 2 || s.len() + 1 < n {
        return Err(MixedVolumeError::WrongShape { polys: s.len(), nvars: n });
    }
    Ok(())
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The (n−1)-subset of the polynomials giving the smallest bound, first in
/// lexicographic order on ties, and that bound. Square-up of overdetermined
/// input: every subset's curve contains the solution curve.
pub fn bounding_subset<C: Ring>(s: &PolynomialSystem<C>) -> Result<(Vec<usize>, i64), MixedVolumeError> {
    curve_shape(s)?;
    let n = s.nvars();
    let polys = system_polytopes(s)?;
    let mut best: Option<(Vec<usize>, i64)> = None;
    for sub in subsets(s.len(), n - 1) {
        let mut tuple: Vec<LatticePolytope> = sub.iter().map(|&i| polys[i].clone()).collect();
        tuple.push(edge_segment(n));
        let mv = mixed_volume(&tuple)?;
        if best.as_ref().is_none_or(|(_, b)| mv < *b) {
            best = Some((sub, mv));
        }
    }
    Ok(best.expect("at least one subset"))
}

/// Mixed volume of the Newton polytopes together with [0, e1].
pub fn degree_bound<C: Ring>(s: &PolynomialSystem<C>) -> Result<i64, MixedVolumeError> {
    Ok(bounding_subset(s)?.1)
}

/// Weight v1 · MV_{n−1}(in_v P) for each ray, on the same polynomial subset
/// as the degree bound. Zero weights are dropped; terms keep the ray order.
pub fn degree_decomposition<C: Ring>(
    s: &PolynomialSystem<C>,
    rays: &[PrimitiveVector],
) -> Result<DegreeDecomposition, MixedVolumeError> {
    let (sub, _) = bounding_subset(s)?;
    let n = s.nvars();
    let all = system_polytopes(s)?;
    let polys: Vec<LatticePolytope> = sub.iter().map(|&i| all[i].clone()).collect();
    for r in rays {
        if r.len() != n {
            return Err(MixedVolumeError::DimensionMismatch { expected: n, found: r.len() });
        }
        if r.first() <= 0 {
            return Err(MixedVolumeError::NotPretropism(r.clone()));
        }
    }
    let weights = rays
        .par_iter()
        .map(|r| -> Result<i64, MixedVolumeError> {
            let faces = projected_faces(&polys, r)?;
            Ok(r.first() * mixed_volume(&faces)?)
        })
        .collect::<Result<Vec<i64>, _>>()?;
    let terms: Vec<DecompositionTerm> = rays
        .iter()
        .zip(weights)
        .filter(|(_, w)| *w != 0)
        .map(|(r, w)| DecompositionTerm { ray: r.clone(), weight: w })
        .collect();
    Ok(DegreeDecomposition { total: terms.iter().map(|t| t.weight).sum(), terms })
}
