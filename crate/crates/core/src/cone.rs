//! Exact double description for polyhedral cones {x : E x = 0, A x >= 0}.
//!
//! Integer rays throughout; combinations are formed in i128 and reduced to
//! primitive i64 vectors. Adjacency is decided by the rank test on common
//! tight constraints.

use crate::linalg::{
    canonical_row_basis, dot, dot_i128, is_zero, make_primitive, nullspace, primitive_i128, project_out, rank,
};

/// Half-space form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HCone {
    pub n: usize,
    pub eqs: Vec<Vec<i64>>,
    pub ineqs: Vec<Vec<i64>>,
}

/// Generator form: lineality basis plus extreme rays modulo lineality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VCone {
    pub n: usize,
    pub lineality: Vec<Vec<i64>>,
    pub rays: Vec<Vec<i64>>,
}

impl VCone {
    pub fn dim(&self) -> usize {
        let mut all = self.lineality.clone();
        all.extend(self.rays.iter().cloned());
        rank(&all)
    }

    /// Every generator, lineality taken with both signs, sorted.
    pub fn generators(&self) -> Vec<Vec<i64>> {
        let mut g: Vec<Vec<i64>> = Vec::new();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(l.iter().map(|x| -x).collect());
        }
        g.extend(self.rays.iter().cloned());
        g.sort();
        g.dedup();
        g
    }

    /// Canonical representative: echelon lineality basis and rays projected
    /// onto its orthogonal complement.
    pub fn canonical(&self) -> VCone {
        let lineality = canonical_row_basis(&self.lineality, self.n);
        let mut rays: Vec<Vec<i64>> = self
            .rays
            .iter()
            .map(|r| project_out(r, &lineality))
            .filter(|r| !is_zero(r))
            .collect();
        rays.sort();
        rays.dedup();
        VCone { n: self.n, lineality, rays }
    }
}

impl HCone {
    pub fn new(n: usize) -> Self {
        HCone { n, eqs: Vec::new(), ineqs: Vec::new() }
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.eqs.iter().all(|a| dot_i128(a, v) == 0) && self.ineqs.iter().all(|a| dot_i128(a, v) >= 0)
    }

    pub fn intersect(&self, other: &HCone) -> HCone {
        let mut eqs = self.eqs.clone();
        eqs.extend(other.eqs.iter().cloned());
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        HCone { n: self.n, eqs, ineqs }
    }

    /// Convert to generators.
    pub fn to_v(&self) -> VCone {
        let n = self.n;
        let mut lin: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            })
            .collect();
        let mut rays: Vec<Vec<i64>> = Vec::new();
        let mut done_eqs: Vec<Vec<i64>> = Vec::new();
        let mut done_ineqs: Vec<Vec<i64>> = Vec::new();

        let constraints = self.eqs.iter().map(|a| (a, true)).chain(self.ineqs.iter().map(|a| (a, false)));
        for (a, is_eq) in constraints {
            if is_zero(a) {
                continue;
            }
            let pivot = lin.iter().position(|l| dot(a, l) != 0);
            if let Some(p) = pivot {
                let l0 = lin.remove(p);
                let a0 = dot_i128(a, &l0);
                for l in lin.iter_mut() {
                    let b = dot_i128(a, l);
                    if b != 0 {
                        let comb: Vec<i128> =
                            l.iter().zip(&l0).map(|(&x, &y)| a0 * x as i128 - b * y as i128).collect();
                        *l = primitive_i128(&comb).expect("lineality vector overflow");
                    }
                }
                for r in rays.iter_mut() {
                    let b = dot_i128(a, r);
                    if b != 0 {
                        let comb: Vec<i128> =
                            r.iter().zip(&l0).map(|(&x, &y)| a0.abs() * x as i128 - a0.signum() * b * y as i128).collect();
                        *r = primitive_i128(&comb).expect("ray overflow");
                    }
                }
                if is_eq {
                    done_eqs.push(a.clone());
                } else {
                    let oriented = if a0 > 0 { l0 } else { l0.iter().map(|x| -x).collect() };
                    rays.push(make_primitive(&oriented));
                    done_ineqs.push(a.clone());
                }
                continue;
            }
            let vals: Vec<i128> = rays.iter().map(|r| dot_i128(a, r)).collect();
            let mut next: Vec<Vec<i64>> = Vec::new();
            for (r, &b) in rays.iter().zip(&vals) {
                if b == 0 || (b > 0 && !is_eq) {
                    next.push(r.clone());
                }
            }
            let mut tight_rows: Vec<Vec<i64>> = Vec::new();
            for (i, p) in rays.iter().enumerate() {
                if vals[i] <= 0 {
                    continue;
                }
                for (j, q) in rays.iter().enumerate() {
                    if vals[j] >= 0 {
                        continue;
                    }
                    tight_rows.clear();
                    tight_rows.extend(done_eqs.iter().cloned());
                    let mut common = 0usize;
                    for c in &done_ineqs {
                        if dot_i128(c, p) == 0 && dot_i128(c, q) == 0 {
                            tight_rows.push(c.clone());
                            common += 1;
                        }
                    }
                    let Some(need) = n.checked_sub(lin.len() + 2) else { continue };
                    if common + done_eqs.len() < need {
                        continue;
                    }
                    if n - rank(&tight_rows) != lin.len() + 2 {
                        continue;
                    }
                    let (bp, bq) = (vals[i], vals[j]);
                    let comb: Vec<i128> = p.iter().zip(q).map(|(&x, &y)| bp * y as i128 - bq * x as i128).collect();
                    next.push(primitive_i128(&comb).expect("ray overflow"));
                }
            }
            next.sort();
            next.dedup();
            rays = next;
            if is_eq {
                done_eqs.push(a.clone());
            } else {
                done_ineqs.push(a.clone());
            }
        }
        VCone { n, lineality: lin, rays }.canonical()
    }
}

/// Irredundant half-space form of the cone generated by `v`: equations span
/// the orthogonal complement of its linear hull; inequalities are the
/// candidate constraints that define facets, one per facet.
pub fn minimize(h: &HCone, v: &VCone) -> HCone {
    let n = h.n;
    let gens = v.generators();
    let dim = v.dim();
    let eqs = if gens.is_empty() {
        (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            })
            .collect()
    } else {
        nullspace(&gens, n)
    };
    let eqs = canonical_row_basis(&eqs, n);
    let mut ineqs: Vec<Vec<i64>> = Vec::new();
    let mut seen: Vec<Vec<bool>> = Vec::new();
    for a in &h.ineqs {
        let tight: Vec<bool> = gens.iter().map(|g| dot_i128(a, g) == 0).collect();
        if tight.iter().all(|&t| t) {
            continue;
        }
        let rows: Vec<Vec<i64>> = gens.iter().zip(&tight).filter(|(_, &t)| t).map(|(g, _)| g.clone()).collect();
        if rank(&rows) + 1 != dim {
            continue;
        }
        if seen.contains(&tight) {
            continue;
        }
        seen.push(tight);
        ineqs.push(make_primitive(a));
    }
    ineqs.sort();
    HCone { n, eqs, ineqs }
}
