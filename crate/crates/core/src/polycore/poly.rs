use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::coeff::{Exact, Ring};
use super::PolyError;

/// Exponent vector of a monomial. Ordered graded-lexicographically:
/// total degree first, then lexicographic with x1 most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        ExponentVector(e)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&e| e as i64).collect()
    }

    pub fn dot(&self, v: &[i64]) -> i64 {
        self.0.iter().zip(v).map(|(&a, &b)| a as i64 * b).sum()
    }

    fn plus(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial in x1..xn. Zero coefficients are never
/// stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<C> {
    nvars: usize,
    terms: BTreeMap<ExponentVector, C>,
}

impl<C: Ring> Polynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(ExponentVector::zero(nvars), c);
        p
    }

    /// The variable x_{i+1} (0-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(ExponentVector::unit(nvars, i), C::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (ExponentVector, C)>>(nvars: usize, it: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in it {
            assert_eq!(e.len(), nvars, "exponent length must equal nvars");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (descending graded-lex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &C)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, e: &ExponentVector) -> Option<&C> {
        self.terms.get(e)
    }

    pub fn add_term(&mut self, e: ExponentVector, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn degree(&self) -> u64 {
        self.terms.keys().map(|e| e.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e.0[i]).max().unwrap_or(0)
    }

    pub fn support(&self) -> Result<Vec<ExponentVector>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(self.terms().map(|(e, _)| e.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                r.add_term(e1.plus(e2), c1.clone() * c2.clone());
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::constant(self.nvars, C::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// Apply `f` to every coefficient, dropping results that vanish.
    pub fn map<D: Ring, F: Fn(&C) -> D>(&self, f: F) -> Polynomial<D> {
        let mut r = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), f(c));
        }
        r
    }

    /// Keep only the terms selected by `keep`.
    pub fn filter<F: Fn(&ExponentVector) -> bool>(&self, keep: F) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Partial derivative with respect to x_{j+1}.
    pub fn derivative(&self, j: usize) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.0[j];
            if k == 0 {
                continue;
            }
            let mut d = e.clone();
            d.0[j] -= 1;
            r.add_term(d, c.clone() * C::from_i64(k as i64));
        }
        r
    }

    /// Direct sparse evaluation; powers of each coordinate are cached.
    pub fn eval(&self, point: &[C]) -> Result<C, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        let powers = power_table(point, |i| self.degree_in(i));
        Ok(self.eval_with(&powers))
    }

    pub(crate) fn eval_with(&self, powers: &[Vec<C>]) -> C {
        let mut acc = C::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    m = m * powers[i][k as usize].clone();
                }
            }
            acc = acc + m;
        }
        acc
    }

    /// Substitute a constant for x_{i+1}; the variable count is unchanged.
    pub fn substitute(&self, i: usize, value: &C) -> Self {
        let mut r = Self::zero(self.nvars);
        let maxd = self.degree_in(i) as usize;
        let mut pw = vec![C::one()];
        for k in 1..=maxd {
            pw.push(pw[k - 1].clone() * value.clone());
        }
        for (e, c) in &self.terms {
            let mut d = e.clone();
            let k = d.0[i] as usize;
            d.0[i] = 0;
            r.add_term(d, c.clone() * pw[k].clone());
        }
        r
    }

    /// Remove variable x_{i+1} (which must not occur) from the ambient space.
    pub fn drop_var(&self, i: usize) -> Self {
        let mut r = Self::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            debug_assert_eq!(e.0[i], 0);
            let mut d = e.0.clone();
            d.remove(i);
            r.add_term(ExponentVector(d), c.clone());
        }
        r
    }

    /// Embed into a larger ambient space by inserting fresh variables.
    pub fn with_nvars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        let mut r = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut d = e.0.clone();
            d.resize(nvars, 0);
            r.add_term(ExponentVector(d), c.clone());
        }
        r
    }

    /// Variables that actually occur.
    pub fn occurring_vars(&self) -> Vec<bool> {
        let mut occ = vec![false; self.nvars];
        for e in self.terms.keys() {
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    occ[i] = true;
                }
            }
        }
        occ
    }
}

pub(crate) fn power_table<C: Ring, F: Fn(usize) -> u32>(point: &[C], deg: F) -> Vec<Vec<C>> {
    point
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let d = deg(i) as usize;
            let mut v = Vec::with_capacity(d + 1);
            v.push(C::one());
            for k in 1..=d {
                v.push(v[k - 1].clone() * x.clone());
            }
            v
        })
        .collect()
}

/// Ordered list of polynomials sharing one ambient space.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialSystem<C> {
    polys: Vec<Polynomial<C>>,
    nvars: usize,
}

impl<C: Ring> PolynomialSystem<C> {
    pub fn new(polys: Vec<Polynomial<C>>, nvars: usize) -> Result<Self, PolyError> {
        for p in &polys {
            if p.nvars() != nvars {
                return Err(PolyError::DimensionMismatch { expected: nvars, found: p.nvars() });
            }
        }
        Ok(PolynomialSystem { polys, nvars })
    }

    pub fn polys(&self) -> &[Polynomial<C>] {
        &self.polys
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn map<D: Ring, F: Fn(&C) -> D>(&self, f: F) -> PolynomialSystem<D> {
        PolynomialSystem { polys: self.polys.iter().map(|p| p.map(&f)).collect(), nvars: self.nvars }
    }

    pub fn eval(&self, point: &[C]) -> Result<Vec<C>, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        let powers = power_table(point, |i| self.polys.iter().map(|p| p.degree_in(i)).max().unwrap_or(0));
        Ok(self.polys.iter().map(|p| p.eval_with(&powers)).collect())
    }

    /// Entry (i, j) is the derivative of polynomial i with respect to x_{j+1}.
    pub fn jacobian(&self) -> Vec<Vec<Polynomial<C>>> {
        self.polys.iter().map(|p| (0..self.nvars).map(|j| p.derivative(j)).collect()).collect()
    }

    /// True when this is a curve system: n−1 polynomials in n unknowns.
    pub fn is_curve_shaped(&self) -> bool {
        self.nvars >= 2 && self.polys.len() + 1 == self.nvars
    }
}

// ---------------------------------------------------------------------------
// canonical text form (exact coefficients)

fn fmt_rat(q: &num_rational::BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Canonical text of an exact coefficient: the sign, plus the magnitude
/// (empty when the magnitude is 1 and a monomial follows).
fn coeff_parts(c: &Exact, has_mono: bool) -> (bool, String) {
    if c.im.is_zero() {
        let neg = c.re.is_negative();
        let a = c.re.abs();
        if has_mono && a.is_one() {
            return (neg, String::new());
        }
        return (neg, fmt_rat(&a));
    }
    if c.re.is_zero() {
        let neg = c.im.is_negative();
        let a = c.im.abs();
        if a.is_one() {
            return (neg, "i".to_string());
        }
        return (neg, format!("{}*i", fmt_rat(&a)));
    }
    let im_sign = if c.im.is_negative() { "-" } else { "+" };
    let im_abs = c.im.abs();
    let im_txt = if im_abs.is_one() { "i".to_string() } else { format!("{}*i", fmt_rat(&im_abs)) };
    (false, format!("({}{}{})", fmt_rat(&c.re), im_sign, im_txt))
}

fn fmt_mono(e: &ExponentVector) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.0.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            _ => parts.push(format!("x{}^{}", i + 1, k)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Polynomial<Exact> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let mono = fmt_mono(e);
            let (neg, mag) = coeff_parts(c, !mono.is_empty());
            let body = match (mag.is_empty(), mono.is_empty()) {
                (true, _) => mono,
                (false, true) => mag,
                (false, false) => format!("{mag}*{mono}"),
            };
            if first {
                write!(f, "{}{}", if neg { "-" } else { "" }, body)?;
                first = false;
            } else {
                write!(f, " {} {}", if neg { "-" } else { "+" }, body)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for PolynomialSystem<Exact> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.polys {
            writeln!(f, "{p};")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::coeff::exact;

    fn x(n: usize, i: usize) -> Polynomial<Exact> {
        Polynomial::var(n, i)
    }

    #[test]
    fn graded_lex_puts_high_degree_first() {
        let p = x(2, 1).add(&x(2, 0).pow(2)).add(&Polynomial::constant(2, exact(3, 1)));
        assert_eq!(p.to_string(), "x1^2 + x2 + 3");
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = x(1, 0).sub(&x(1, 0));
        assert!(p.is_zero());
        assert!(p.support().is_err());
    }

    #[test]
    fn derivative_of_square() {
        let p = x(1, 0).pow(2);
        assert_eq!(p.derivative(0).to_string(), "2*x1");
    }
}
