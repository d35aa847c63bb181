//! Sparse polynomials over an open-ended set of unknowns, used as series
//! coefficients while some of them are still undetermined.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::polycore::{Field, Ring};

/// Keys are sorted multisets of unknown ids; the empty key is the constant.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Sym<C> {
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Field> Sym<C> {
    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![], c);
        }
        Sym { terms }
    }

    pub fn unknown(id: u32) -> Self {
        Sym { terms: BTreeMap::from([(vec![id], C::one())]) }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> C {
        self.terms.get(&vec![]).cloned().unwrap_or_else(C::zero)
    }

    /// The value when no unknowns remain.
    pub fn as_constant(&self) -> Option<C> {
        self.terms.keys().all(|k| k.is_empty()).then(|| self.constant_term())
    }

    pub fn mentions(&self, id: u32) -> bool {
        self.terms.keys().any(|k| k.contains(&id))
    }

    pub fn substitute(&self, id: u32, value: &C) -> Self {
        if !self.mentions(id) {
            return self.clone();
        }
        let mut out = Sym::zero();
        for (k, c) in &self.terms {
            let mut c = c.clone();
            let rest: Vec<u32> = k.iter().copied().filter(|&x| x != id).collect();
            for _ in 0..k.len() - rest.len() {
                c = c * value.clone();
            }
            out.add_term(rest, c);
        }
        out
    }

    /// Drop terms that are negligible against the largest one.
    pub fn clean(&mut self) {
        let scale = self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max);
        self.terms.retain(|_, c| !c.is_negligible(scale) && !c.is_zero());
    }

    fn add_term(&mut self, k: Vec<u32>, c: C) {
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                if !c.is_zero() {
                    self.terms.insert(k, c);
                }
            }
        }
    }
}

impl<C: Field> Add for Sym<C> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (k, c) in o.terms {
            self.add_term(k, c);
        }
        self
    }
}

impl<C: Field> Sub for Sym<C> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<C: Field> Neg for Sym<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Sym { terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl<C: Field> Mul for Sym<C> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = Sym::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let mut k = a.clone();
                k.extend_from_slice(b);
                k.sort_unstable();
                out.add_term(k, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Field> Zero for Sym<C> {
    fn zero() -> Self {
        Sym { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Field> One for Sym<C> {
    fn one() -> Self {
        Sym::constant(C::one())
    }
}

impl<C: Field> Ring for Sym<C> {
    fn from_i64(v: i64) -> Self {
        Sym::constant(C::from_i64(v))
    }
}
