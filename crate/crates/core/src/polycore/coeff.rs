use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact complex rational coefficient.
pub type Exact = Complex<BigRational>;

/// Anything polynomials can be built over.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_i64(v: i64) -> Self;
}

/// Rings with division; `is_negligible` is exact zero-testing for exact
/// types and a magnitude cut for floating ones.
pub trait Field: Ring + Div<Output = Self> {
    fn magnitude(&self) -> f64;

    fn is_negligible(&self, scale: f64) -> bool;

    fn is_exact() -> bool;
}

impl Ring for Exact {
    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }
}

impl Field for Exact {
    fn magnitude(&self) -> f64 {
        to_c64(self).norm()
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn is_exact() -> bool {
        true
    }
}

impl Ring for Complex64 {
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
}

/// Relative cut used when a floating value is treated as zero.
pub const FLOAT_ZERO_TOL: f64 = 1e-9;

impl Field for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.norm() <= FLOAT_ZERO_TOL * scale.max(1.0)
    }

    fn is_exact() -> bool {
        false
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn exact(n: i64, d: i64) -> Exact {
    Complex::new(rat(n, d), BigRational::zero())
}

pub fn exact_re_im(re: BigRational, im: BigRational) -> Exact {
    Complex::new(re, im)
}

pub fn to_c64(z: &Exact) -> Complex64 {
    Complex64::new(rat_to_f64(&z.re), rat_to_f64(&z.im))
}

pub fn rat_to_f64(q: &BigRational) -> f64 {
    match q.to_f64() {
        Some(v) if v.is_finite() => v,
        _ => {
            // very large numerator/denominator: scale through bit shifts
            let nb = q.numer().bits() as i64;
            let db = q.denom().bits() as i64;
            let shift = nb - db;
            let scaled = if shift > 0 {
                BigRational::new(q.numer().clone(), q.denom().clone() << (shift as usize))
            } else {
                BigRational::new(q.numer().clone() << ((-shift) as usize), q.denom().clone())
            };
            scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
        }
    }
}

/// Best rational approximation with denominator at most `max_den`
/// (continued fractions). Returns `None` if the approximation misses by
/// more than `tol`.
pub fn rational_approx(x: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let sign = if x < 0.0 { -1i64 } else { 1 };
    let mut y = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..64 {
        let a = y.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i64;
        let p2 = a.checked_mul(p1)?.checked_add(p0)?;
        let q2 = a.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = y - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        y = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let approx = sign as f64 * p1 as f64 / q1 as f64;
    if (approx - x).abs() <= tol * x.abs().max(1.0) {
        Some(rat(sign * p1, q1))
    } else {
        None
    }
}

/// Gaussian-rational reconstruction of a floating complex number.
pub fn exact_from_c64(z: Complex64, max_den: i64, tol: f64) -> Option<Exact> {
    let re = rational_approx(z.re, max_den, tol)?;
    let im = rational_approx(z.im, max_den, tol)?;
    Some(Complex::new(re, im))
}

/// The exact dyadic rational value of a double-precision complex number.
pub fn exact_of_c64(z: Complex64) -> Exact {
    let f = |x: f64| BigRational::from_float(x).unwrap_or_else(BigRational::zero);
    Complex::new(f(z.re), f(z.im))
}

pub fn exact_is_real(z: &Exact) -> bool {
    z.im.is_zero()
}

pub fn exact_abs_is_one(z: &Exact) -> bool {
    z.im.is_zero() && z.re.abs().is_one()
}

// ---------------------------------------------------------------------------
// multiprecision complex numbers

pub type MpFloat = FBig<HalfEven, 2>;

/// Complex number over binary floats of a fixed working precision.
#[derive(Clone, Debug)]
pub struct MpComplex {
    pub re: MpFloat,
    pub im: MpFloat,
    pub prec: usize,
}

fn round_to(x: MpFloat, prec: usize) -> MpFloat {
    if prec == 0 {
        x
    } else {
        x.with_precision(prec).value()
    }
}

fn joint(a: usize, b: usize) -> usize {
    a.max(b)
}

impl MpComplex {
    pub fn from_c64(z: Complex64, prec: usize) -> Self {
        MpComplex {
            re: round_to(MpFloat::try_from(z.re).unwrap_or(MpFloat::ZERO), prec),
            im: round_to(MpFloat::try_from(z.im).unwrap_or(MpFloat::ZERO), prec),
            prec,
        }
    }

    pub fn from_exact(z: &Exact, prec: usize) -> Self {
        MpComplex { re: rat_to_mp(&z.re, prec), im: rat_to_mp(&z.im, prec), prec }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().value(), self.im.to_f64().value())
    }

    pub fn with_prec(mut self, prec: usize) -> Self {
        self.re = round_to(self.re, prec);
        self.im = round_to(self.im, prec);
        self.prec = prec;
        self
    }

    fn working(&self, other: &Self) -> usize {
        let p = joint(self.prec, other.prec);
        if p == 0 {
            128
        } else {
            p
        }
    }
}

fn ibig_from(n: &BigInt) -> IBig {
    let (sign, bytes) = n.to_bytes_le();
    let mag = IBig::from_le_bytes(&bytes);
    if sign == num_bigint::Sign::Minus {
        -mag
    } else {
        mag
    }
}

pub fn rat_to_mp(q: &BigRational, prec: usize) -> MpFloat {
    let prec = if prec == 0 { 128 } else { prec };
    let n = MpFloat::from(ibig_from(q.numer())).with_precision(prec).value();
    let d = MpFloat::from(ibig_from(q.denom())).with_precision(prec).value();
    round_to(n / d, prec)
}

impl PartialEq for MpComplex {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.im == other.im
    }
}

impl Add for MpComplex {
    type Output = MpComplex;
    fn add(self, o: MpComplex) -> MpComplex {
        let p = self.working(&o);
        MpComplex { re: round_to(self.re + o.re, p), im: round_to(self.im + o.im, p), prec: p }
    }
}

impl Sub for MpComplex {
    type Output = MpComplex;
    fn sub(self, o: MpComplex) -> MpComplex {
        let p = self.working(&o);
        MpComplex { re: round_to(self.re - o.re, p), im: round_to(self.im - o.im, p), prec: p }
    }
}

impl Mul for MpComplex {
    type Output = MpComplex;
    fn mul(self, o: MpComplex) -> MpComplex {
        let p = self.working(&o);
        let a = round_to(self.re.clone(), p);
        let b = round_to(self.im.clone(), p);
        let c = round_to(o.re.clone(), p);
        let d = round_to(o.im.clone(), p);
        let re = round_to(&a * &c - &b * &d, p);
        let im = round_to(&a * &d + &b * &c, p);
        MpComplex { re, im, prec: p }
    }
}

impl Div for MpComplex {
    type Output = MpComplex;
    fn div(self, o: MpComplex) -> MpComplex {
        let p = self.working(&o);
        let a = round_to(self.re.clone(), p);
        let b = round_to(self.im.clone(), p);
        let c = round_to(o.re.clone(), p);
        let d = round_to(o.im.clone(), p);
        let den = round_to(&c * &c + &d * &d, p);
        let re = round_to((&a * &c + &b * &d) / &den, p);
        let im = round_to((&b * &c - &a * &d) / &den, p);
        MpComplex { re, im, prec: p }
    }
}

impl Neg for MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        MpComplex { re: -self.re, im: -self.im, prec: self.prec }
    }
}

impl Zero for MpComplex {
    fn zero() -> Self {
        MpComplex { re: MpFloat::ZERO, im: MpFloat::ZERO, prec: 0 }
    }
    fn is_zero(&self) -> bool {
        self.re == MpFloat::ZERO && self.im == MpFloat::ZERO
    }
}

impl One for MpComplex {
    fn one() -> Self {
        MpComplex { re: MpFloat::ONE, im: MpFloat::ZERO, prec: 0 }
    }
}

impl Ring for MpComplex {
    fn from_i64(v: i64) -> Self {
        MpComplex { re: MpFloat::from(v), im: MpFloat::ZERO, prec: 0 }
    }
}

impl Field for MpComplex {
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }

    fn is_negligible(&self, scale: f64) -> bool {
        let eps = 2f64.powi(-(self.prec.max(53) as i32) + 8);
        self.magnitude() <= eps * scale.max(1.0)
    }

    fn is_exact() -> bool {
        false
    }
}

/// Numeric scalar types usable by the path tracker (double and
/// multiprecision complex).
pub trait NumScalar: Field {
    fn lift(z: Complex64, prec: usize) -> Self;
    fn lift_exact(z: &Exact, prec: usize) -> Self;
    fn lower(&self) -> Complex64;
    fn bits(&self) -> usize;
}

impl NumScalar for Complex64 {
    fn lift(z: Complex64, _prec: usize) -> Self {
        z
    }
    fn lift_exact(z: &Exact, _prec: usize) -> Self {
        to_c64(z)
    }
    fn lower(&self) -> Complex64 {
        *self
    }
    fn bits(&self) -> usize {
        53
    }
}

impl NumScalar for MpComplex {
    fn lift(z: Complex64, prec: usize) -> Self {
        MpComplex::from_c64(z, prec)
    }
    fn lift_exact(z: &Exact, prec: usize) -> Self {
        MpComplex::from_exact(z, prec)
    }
    fn lower(&self) -> Complex64 {
        self.to_c64()
    }
    fn bits(&self) -> usize {
        self.prec
    }
}
