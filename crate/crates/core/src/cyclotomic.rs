//! Exact arithmetic in ℚ(ζ_n) in the power basis modulo Φ_n, plus the group
//! μ_8 of eighth roots of unity that carries Weil indices.
//!
//! An element of order `n` is stored as `num / den` where `num` holds
//! `φ(n)` integer coefficients of `1, ζ_n, …, ζ_n^{φ(n)-1}` and `den > 0` is a
//! common denominator coprime to their content. Because Φ_n is the minimal
//! polynomial of ζ_n this representation is canonical, so equality is plain
//! coefficient comparison.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::iter::Product;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Largest order accepted by [`cyclotomic_polynomial`] and the constructors.
pub const DEFAULT_ORDER_BOUND: u64 = 10_000;

type Poly = Arc<[i64]>;

fn phi_cache() -> &'static RwLock<HashMap<u64, Poly>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Poly>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Φ_n as ascending integer coefficients (monic, degree φ(n)).
///
/// Computed by exact division of `x^n − 1` by Φ_d for every proper divisor `d`
/// of `n`; results are memoized process-wide.
pub fn cyclotomic_polynomial(n: u64) -> Result<Poly> {
    cyclotomic_polynomial_bounded(n, DEFAULT_ORDER_BOUND)
}

pub fn cyclotomic_polynomial_bounded(n: u64, bound: u64) -> Result<Poly> {
    if n == 0 || n > bound {
        return Err(Error::OrderOutOfBounds { order: n, bound });
    }
    Ok(phi(n))
}

fn phi(n: u64) -> Poly {
    if let Some(p) = phi_cache().read().expect("phi cache poisoned").get(&n) {
        return p.clone();
    }
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        poly = div_exact_monic(&poly, &phi(d));
    }
    let poly: Poly = poly.into();
    phi_cache()
        .write()
        .expect("phi cache poisoned")
        .entry(n)
        .or_insert(poly)
        .clone()
}

fn div_exact_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

fn check_order(n: u64) -> Result<()> {
    if n == 0 || n > DEFAULT_ORDER_BOUND {
        Err(Error::OrderOutOfBounds { order: n, bound: DEFAULT_ORDER_BOUND })
    } else {
        Ok(())
    }
}

/// Reduces a coefficient vector of any length modulo Φ_n.
fn reduce(mut raw: Vec<BigInt>, phi: &[i64]) -> Vec<BigInt> {
    let deg = phi.len() - 1;
    let low: Vec<(usize, BigInt)> = phi[..deg]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(j, &c)| (j, BigInt::from(c)))
        .collect();
    for d in (deg..raw.len()).rev() {
        if raw[d].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut raw[d]);
        for (j, pj) in &low {
            raw[d - deg + j] -= &c * pj;
        }
    }
    raw.resize(deg, BigInt::zero());
    raw
}

/// An element of ℚ(ζ_n), canonically reduced modulo Φ_n.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclotomic {
    fn from_raw(order: u64, raw: Vec<BigInt>, den: BigInt) -> Self {
        let num = reduce(raw, &phi(order));
        let mut x = Cyclotomic { order, num, den };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            self.num.iter_mut().for_each(|c| *c = -&*c);
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        let g = self.num.iter().fold(self.den.clone(), |g, c| g.gcd(c));
        if !g.is_one() {
            self.num.iter_mut().for_each(|c| *c /= &g);
            self.den /= &g;
        }
    }

    pub fn zero(order: u64) -> Result<Self> {
        check_order(order)?;
        let deg = phi(order).len() - 1;
        Ok(Cyclotomic { order, num: vec![BigInt::zero(); deg], den: BigInt::one() })
    }

    pub fn one(order: u64) -> Result<Self> {
        Self::from_integer(order, 1)
    }

    pub fn from_integer(order: u64, value: i64) -> Result<Self> {
        Self::from_rational(order, &Rational::from_integer(value.into()))
    }

    pub fn from_rational(order: u64, value: &Rational) -> Result<Self> {
        let mut x = Self::zero(order)?;
        x.num[0] = value.numer().clone();
        x.den = value.denom().clone();
        Ok(x)
    }

    /// `ζ_n^k`, with `k` taken modulo `n`.
    pub fn root_of_unity(n: u64, k: i64) -> Result<Self> {
        Self::from_powers(n, [(k, BigInt::one())])
    }

    /// `Σ c · ζ_n^k` over the given `(k, c)` pairs.
    pub fn from_powers<I>(order: u64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, BigInt)>,
    {
        check_order(order)?;
        let mut raw = vec![BigInt::zero(); order as usize];
        for (k, c) in terms {
            raw[k.rem_euclid(order as i64) as usize] += c;
        }
        Ok(Self::from_raw(order, raw, BigInt::one()))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// φ(n), the number of stored coefficients.
    pub fn degree(&self) -> usize {
        self.num.len()
    }

    pub fn coefficients(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// Coefficients when every one of them is an integer.
    pub fn integer_coefficients(&self) -> Option<&[BigInt]> {
        self.den.is_one().then_some(self.num.as_slice())
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<Rational> {
        self.num[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| Rational::new(self.num[0].clone(), self.den.clone()))
    }

    /// Ring embedding ℚ(ζ_n) → ℚ(ζ_m) sending ζ_n to ζ_m^{m/n}.
    pub fn embed(&self, m: u64) -> Result<Self> {
        if m == 0 || m % self.order != 0 {
            return Err(Error::IncompatibleOrder { from: self.order, to: m });
        }
        check_order(m)?;
        Ok(self.embed_unchecked(m))
    }

    fn embed_unchecked(&self, m: u64) -> Self {
        if m == self.order {
            return self.clone();
        }
        let step = (m / self.order) as usize;
        let mut raw = vec![BigInt::zero(); m as usize];
        for (j, c) in self.num.iter().enumerate() {
            raw[j * step] = c.clone();
        }
        Self::from_raw(m, raw, self.den.clone())
    }

    /// The automorphism ζ_n ↦ ζ_n^{-1} (complex conjugation).
    pub fn conjugate(&self) -> Self {
        let n = self.order as usize;
        let mut raw = vec![BigInt::zero(); n];
        for (j, c) in self.num.iter().enumerate() {
            raw[(n - j) % n] = c.clone();
        }
        Self::from_raw(self.order, raw, self.den.clone())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut x = Cyclotomic {
            order: self.order,
            num: self.num.iter().map(|c| c * r.numer()).collect(),
            den: &self.den * r.denom(),
        };
        x.normalize();
        x
    }

    /// Floating-point value with ζ_n = e^{2πi/n}. Diagnostics only.
    pub fn approx_complex(&self) -> Complex64 {
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let n = self.order as f64;
        self.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| {
                let theta = 2.0 * PI * j as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), theta)
            })
            .sum::<Complex64>()
            / den
    }

    /// `Σ xᵢ·yᵢ` over same-order pairs, accumulated modulo `x^n − 1` and
    /// reduced once. Used for matrix products where most terms are sparse.
    pub(crate) fn sum_of_products<'a, I>(order: u64, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a Cyclotomic, &'a Cyclotomic)>,
    {
        check_order(order)?;
        let n = order as usize;
        let mut raw = vec![BigInt::zero(); n];
        let mut rest: Option<Cyclotomic> = None;
        for (x, y) in pairs {
            if x.order != order || y.order != order {
                return Err(Error::IncompatibleOrder { from: x.order.max(y.order), to: order });
            }
            if !x.den.is_one() || !y.den.is_one() {
                let t = x.mul_same(y);
                rest = Some(match rest {
                    Some(r) => r.add_same(&t),
                    None => t,
                });
                continue;
            }
            for (i, a) in x.num.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                for (j, b) in y.num.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                    raw[(i + j) % n] += a * b;
                }
            }
        }
        let sum = Self::from_raw(order, raw, BigInt::one());
        Ok(match rest {
            Some(r) => sum.add_same(&r),
            None => sum,
        })
    }

    fn common_order(&self, other: &Self) -> u64 {
        self.order.lcm(&other.order)
    }

    fn mul_same(&self, other: &Self) -> Self {
        let deg = self.num.len();
        let mut raw = vec![BigInt::zero(); 2 * deg - 1];
        for (i, x) in self.num.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in other.num.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                raw[i + j] += x * y;
            }
        }
        Self::from_raw(self.order, raw, &self.den * &other.den)
    }

    fn add_same(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let l = self.den.lcm(&other.den);
        let (fa, fb) = (&l / &self.den, &l / &other.den);
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &fa + b * &fb)
            .collect();
        let mut x = Cyclotomic { order: self.order, num, den: l };
        x.normalize();
        x
    }

    /// Mixed orders are embedded into ℚ(ζ_lcm) first.
    fn lift_pair(&self, other: &Self) -> (Self, Self) {
        let m = self.common_order(other);
        (self.embed_unchecked(m), other.embed_unchecked(m))
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.den == other.den && self.num == other.num;
        }
        let (a, b) = self.lift_pair(other);
        a == b
    }
}

impl Eq for Cyclotomic {}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $same:ident) => {
        impl $trait<&Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                if self.order == rhs.order {
                    self.$same(rhs)
                } else {
                    let (a, b) = self.lift_pair(rhs);
                    a.$same(&b)
                }
            }
        }
        impl $trait<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_same);
forward_binop!(Mul, mul, mul_same);

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl Sub<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Sub<Cyclotomic> for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coefficients().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "] (order {})", self.order)
    }
}

/// An eighth root of unity `ζ_8^k`, stored by its exponent mod 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mu8(u8);

impl Mu8 {
    pub const ONE: Mu8 = Mu8(0);
    pub const MINUS_ONE: Mu8 = Mu8(4);

    pub fn new(exponent: i64) -> Self {
        Mu8(exponent.rem_euclid(8) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    /// `+1 ↦ ζ_8^0`, `-1 ↦ ζ_8^4`.
    pub fn from_sign(sign: i8) -> Self {
        match sign {
            1 => Mu8::ONE,
            -1 => Mu8::MINUS_ONE,
            s => panic!("{s} is not a sign"),
        }
    }

    /// `Some(±1)` when the value is real.
    pub fn as_sign(self) -> Option<i8> {
        match self.0 {
            0 => Some(1),
            4 => Some(-1),
            _ => None,
        }
    }

    pub fn inverse(self) -> Self {
        Mu8::new(-(self.0 as i64))
    }

    pub fn pow(self, e: i64) -> Self {
        Mu8::new(self.0 as i64 * e.rem_euclid(8))
    }

    pub fn all() -> impl Iterator<Item = Mu8> {
        (0..8).map(Mu8)
    }

    pub fn to_cyclotomic(self) -> Cyclotomic {
        Cyclotomic::root_of_unity(8, self.0 as i64).expect("order 8 is in range")
    }

    pub fn approx_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, PI * self.0 as f64 / 4.0)
    }

    /// Nearest eighth root to the phase of `z`, with the distance between
    /// `z/|z|` and that root.
    pub fn nearest(z: Complex64) -> (Mu8, f64) {
        let unit = z / z.norm();
        let k = (unit.arg() / (PI / 4.0)).round() as i64;
        let root = Mu8::new(k);
        (root, (unit - root.approx_complex()).norm())
    }
}

impl Mul for Mu8 {
    type Output = Mu8;
    fn mul(self, rhs: Mu8) -> Mu8 {
        Mu8::new(self.0 as i64 + rhs.0 as i64)
    }
}

impl Div for Mu8 {
    type Output = Mu8;
    fn div(self, rhs: Mu8) -> Mu8 {
        self * rhs.inverse()
    }
}

impl Product for Mu8 {
    fn product<I: Iterator<Item = Mu8>>(iter: I) -> Mu8 {
        iter.fold(Mu8::ONE, Mul::mul)
    }
}

impl fmt::Display for Mu8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta8^{}", self.0)
    }
}
