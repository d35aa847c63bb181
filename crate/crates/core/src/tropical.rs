//! Initial forms and the tropical prevariety of a polynomial system.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cone::{minimize, HCone, VCone};
use crate::geometry::{newton_polytope, GeometryError, LatticePolytope, PrimitiveVector};
use crate::linalg::{dot, dot_i128};
use crate::polycore::{Polynomial, PolynomialSystem, Ring};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TropicalError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no polytopes given")]
    Empty,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Sum of the terms of `p` whose exponents minimize ⟨a, v⟩.
pub fn initial_form<C: Ring>(p: &Polynomial<C>, v: &[i64]) -> Result<Polynomial<C>, TropicalError> {
    if p.is_zero() {
        return Err(TropicalError::ZeroPolynomial);
    }
    if v.len() != p.nvars() {
        return Err(TropicalError::DimensionMismatch { expected: p.nvars(), found: v.len() });
    }
    let m = p.terms().map(|(e, _)| e.dot(v)).min().unwrap();
    Ok(p.filter(|e| e.dot(v) == m))
}

/// Componentwise initial form.
pub fn initial_system<C: Ring>(s: &PolynomialSystem<C>, v: &[i64]) -> Result<PolynomialSystem<C>, TropicalError> {
    let polys = s.polys().iter().map(|p| initial_form(p, v)).collect::<Result<Vec<_>, _>>()?;
    PolynomialSystem::new(polys, s.nvars())
        .map_err(|_| TropicalError::DimensionMismatch { expected: s.nvars(), found: s.nvars() })
}

/// Lowest v-weighted degree min ⟨a, v⟩ over the support.
pub fn lowest_weight<C: Ring>(p: &Polynomial<C>, v: &[i64]) -> i64 {
    p.terms().map(|(e, _)| e.dot(v)).min().unwrap_or(0)
}

/// Polyhedral cone of the prevariety, kept in both descriptions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    /// Generators in lexicographic order; lineality directions appear with
    /// both signs.
    pub rays: Vec<PrimitiveVector>,
    pub lineality_dim: usize,
    pub dim: usize,
    pub(crate) h: HCone,
    pub(crate) v: VCone,
}

impl Cone {
    fn from_h(h: HCone) -> Option<Cone> {
        let v = h.to_v();
        let dim = v.dim();
        if dim == 0 {
            return None;
        }
        let h = minimize(&h, &v);
        let rays = v.generators().into_iter().map(|g| PrimitiveVector::new(g).expect("primitive")).collect();
        Some(Cone { rays, lineality_dim: v.lineality.len(), dim, h, v })
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.h.contains(x)
    }

    fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains(r.entries()))
    }

    /// Generators of the smallest face containing x (x must lie in the cone).
    fn face_of(&self, x: &[i64]) -> (Vec<PrimitiveVector>, usize) {
        let tight: Vec<&Vec<i64>> = self.h.ineqs.iter().filter(|a| dot_i128(a, x) == 0).collect();
        let gens: Vec<PrimitiveVector> =
            self.rays.iter().filter(|g| tight.iter().all(|a| dot_i128(a, g.entries()) == 0)).cloned().collect();
        let rows: Vec<Vec<i64>> = gens.iter().map(|g| g.entries().to_vec()).collect();
        let dim = crate::linalg::rank(&rows);
        (gens, dim)
    }
}

/// The tropical prevariety as a list of maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrevarietyFan {
    pub nvars: usize,
    pub cones: Vec<Cone>,
    pub rays: Vec<PrimitiveVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    pub nvars: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<ConeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeJson {
    pub rays: Vec<usize>,
    pub dim: usize,
}

impl PrevarietyFan {
    pub fn empty(nvars: usize) -> Self {
        PrevarietyFan { nvars, cones: Vec::new(), rays: Vec::new() }
    }

    pub fn to_json(&self) -> FanJson {
        let rays: Vec<Vec<i64>> = self.rays.iter().map(|r| r.entries().to_vec()).collect();
        let cones = self
            .cones
            .iter()
            .map(|c| ConeJson {
                rays: c.rays.iter().map(|r| self.rays.iter().position(|x| x == r).expect("ray listed")).collect(),
                dim: c.dim,
            })
            .collect();
        FanJson { nvars: self.nvars, rays, cones }
    }

    /// Cones containing v.
    pub fn cones_containing(&self, v: &[i64]) -> Vec<&Cone> {
        self.cones.iter().filter(|c| c.contains(v)).collect()
    }
}

/// Prevariety of the Newton polytopes of a system.
pub fn system_polytopes<C: Ring>(s: &PolynomialSystem<C>) -> Result<Vec<LatticePolytope>, TropicalError> {
    Ok(s.polys().iter().map(newton_polytope).collect::<Result<Vec<_>, _>>()?)
}

/// All v whose min-face has at least two points in every polytope, by
/// intersecting edge normal cones polytope after polytope.
pub fn prevariety(polytopes: &[LatticePolytope]) -> Result<PrevarietyFan, TropicalError> {
    let first = polytopes.first().ok_or(TropicalError::Empty)?;
    let n = first.nvars();
    for p in polytopes {
        if p.nvars() != n {
            return Err(TropicalError::DimensionMismatch { expected: n, found: p.nvars() });
        }
    }
    let mut current: Vec<Cone> = first.edges().into_iter().filter_map(|(_, _, h)| Cone::from_h(h)).collect();
    current = maximal(dedup(current));
    for p in &polytopes[1..] {
        let edges: Vec<HCone> = p.edges().into_iter().map(|(_, _, h)| h).collect();
        let mut next = Vec::new();
        for c in &current {
            for e in &edges {
                if let Some(k) = Cone::from_h(c.h.intersect(e)) {
                    next.push(k);
                }
            }
        }
        current = maximal(dedup(next));
    }
    current.sort_by(|a, b| (a.dim, &a.rays).cmp(&(b.dim, &b.rays)));
    let rays: BTreeSet<PrimitiveVector> = current.iter().flat_map(|c| c.rays.iter().cloned()).collect();
    Ok(PrevarietyFan { nvars: n, cones: current, rays: rays.into_iter().collect() })
}

fn dedup(mut cones: Vec<Cone>) -> Vec<Cone> {
    cones.sort_by(|a, b| a.v.cmp(&b.v));
    cones.dedup_by(|a, b| a.v == b.v);
    cones
}

fn maximal(cones: Vec<Cone>) -> Vec<Cone> {
    let keep: Vec<bool> = (0..cones.len())
        .map(|i| !(0..cones.len()).any(|j| j != i && cones[j].dim > cones[i].dim && cones[j].contains_cone(&cones[i])))
        .collect();
    cones.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect()
}

/// Generators with positive first coordinate, sorted lexicographically.
pub fn pretropism_rays(fan: &PrevarietyFan) -> Vec<PrimitiveVector> {
    let mut r: Vec<PrimitiveVector> = fan.rays.iter().filter(|r| r.first() > 0).cloned().collect();
    r.sort();
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "rays", rename_all = "snake_case")]
pub enum Membership {
    RayGenerator,
    /// v lies in the relative interior of the face spanned by these rays.
    InteriorOfCone(Vec<PrimitiveVector>),
    Outside,
}

/// Classify v against the fan: a generator, strictly inside some face of
/// dimension at least two, or not in the prevariety.
pub fn interior_membership(fan: &PrevarietyFan, v: &PrimitiveVector) -> Membership {
    for c in &fan.cones {
        if !c.contains(v.entries()) {
            continue;
        }
        let (gens, dim) = c.face_of(v.entries());
        if dim == 1 {
            return Membership::RayGenerator;
        }
        return Membership::InteriorOfCone(gens);
    }
    Membership::Outside
}

/// Check of the defining property at one direction.
pub fn two_point_condition(polytopes: &[LatticePolytope], v: &[i64]) -> bool {
    polytopes.iter().all(|p| {
        let m = p.points().iter().map(|a| dot(a, v)).min().unwrap();
        p.points().iter().filter(|a| dot(a, v) == m).count() >= 2
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_system;

    #[test]
    fn single_segment_gives_a_line() {
        let s = parse_system("x1 + x2").unwrap();
        let fan = prevariety(&system_polytopes(&s).unwrap()).unwrap();
        assert_eq!(fan.cones.len(), 1);
        assert_eq!(fan.cones[0].lineality_dim, 1);
        let pre: Vec<Vec<i64>> = pretropism_rays(&fan).iter().map(|r| r.entries().to_vec()).collect();
        assert_eq!(pre, vec![vec![1, 1]]);
    }

    #[test]
    fn initial_form_at_zero_is_identity() {
        let s = parse_system("x1^2 + x2 - 3").unwrap();
        let p = &s.polys()[0];
        assert_eq!(&initial_form(p, &[0, 0]).unwrap(), p);
    }
}
