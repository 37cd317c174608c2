//! Integer and rational arithmetic: primality, valuations, square classes of
//! ℚ_v, and the Legendre/Jacobi symbols.
//!
//! Everything here is a pure function of its inputs. The Legendre symbol is
//! computed by Euler's criterion and the Jacobi symbol as a product of Legendre
//! symbols over the factorization of the modulus, so no reciprocity law is
//! used anywhere in this module.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Builds `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `n` or `n/d` (optional leading sign, decimal digits only).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("'{s}' is not a rational number (expected n or n/d)"));
    let parse_int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::InvalidInput(format!("'{s}' has zero denominator")));
            }
            Ok(Rational::new(n, d))
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial-division factorization, ascending primes with multiplicities.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    let mut p = 3u64;
    while p.saturating_mul(p) <= n {
        push(p, &mut n);
        p += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime divisors of `|n|`, ascending.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<u64>> {
    let m = n
        .magnitude()
        .to_u64()
        .ok_or_else(|| Error::TooLarge(n.to_string()))?;
    Ok(factorize(m).into_iter().map(|(p, _)| p).collect())
}

/// Sign-preserving squarefree part of a nonzero integer.
pub fn squarefree_part(n: i64) -> i64 {
    assert!(n != 0, "squarefree part of zero");
    let core: u64 = factorize(n.unsigned_abs())
        .into_iter()
        .filter(|&(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .product();
    n.signum() * core as i64
}

/// A certified prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A place of ℚ. Orders the real place first, then primes ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Finite(Prime),
}

impl Place {
    pub fn finite(p: u64) -> Result<Self> {
        Prime::new(p).map(Place::Finite)
    }

    pub fn prime(self) -> Option<u64> {
        match self {
            Place::Infinity => None,
            Place::Finite(p) => Some(p.get()),
        }
    }

    /// ∞ followed by every prime `≤ bound`.
    pub fn up_to(bound: u64) -> Vec<Place> {
        std::iter::once(Place::Infinity)
            .chain((2..=bound).filter(|&n| is_prime(n)).map(|p| Place::Finite(Prime(p))))
            .collect()
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Place::Infinity),
            t => {
                let p: u64 = t
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("'{t}' is not a place (use inf or a prime)")))?;
                Place::finite(p)
            }
        }
    }
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn int_valuation(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// The p-adic valuation `v_p(a)`.
pub fn valuation(a: &Rational, p: u64) -> Result<i64> {
    check_prime(p)?;
    if a.is_zero() {
        return Err(Error::UndefinedValuation);
    }
    Ok(int_valuation(a.numer(), p) - int_valuation(a.denom(), p))
}

/// Splits `a = p^v · u` with `u` a p-adic unit.
pub fn split_valuation(a: &Rational, p: u64) -> Result<(i64, Rational)> {
    let v = valuation(a, p)?;
    let pv = Rational::from_integer(BigInt::from(p).pow(v.unsigned_abs() as u32));
    let unit = if v >= 0 { a / pv } else { a * pv };
    Ok((v, unit))
}

/// Residue of a p-adic unit rational modulo `m` (a power of p).
pub(crate) fn unit_residue(unit: &Rational, m: &BigUint) -> BigUint {
    let m = BigInt::from(m.clone());
    let num = unit.numer().mod_floor(&m);
    let den = unit.denom().mod_floor(&m);
    let inv = den
        .modinv(&m)
        .expect("denominator of a p-adic unit is invertible modulo p^k");
    ((num * inv).mod_floor(&m))
        .to_biguint()
        .expect("mod_floor is non-negative")
}

fn residue_u64(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits in u64")
}

/// Euler's criterion on a residue already reduced modulo the odd prime `p`.
fn euler_criterion(r: u64, p: u64) -> i8 {
    if r % p == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    legendre_big(&BigInt::from(a), p)
}

pub fn legendre_big(a: &BigInt, p: u64) -> Result<i8> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::InvalidModulus {
            modulus: p.to_string(),
            reason: "Legendre symbol needs an odd prime",
        });
    }
    Ok(euler_criterion(residue_u64(a, p), p))
}

/// Jacobi symbol `(a/c)` for odd `c ≥ 1`, as the product of Legendre symbols
/// over the prime factorization of `c`.
pub fn jacobi(a: i64, c: u64) -> Result<i8> {
    if c % 2 == 0 {
        return Err(Error::InvalidModulus {
            modulus: c.to_string(),
            reason: "Jacobi symbol needs an odd positive modulus",
        });
    }
    let a = BigInt::from(a);
    let mut acc = 1i8;
    for (p, e) in factorize(c) {
        let l = legendre_big(&a, p)?;
        if e % 2 == 1 {
            acc *= l;
        } else if l == 0 {
            acc = 0;
        }
    }
    Ok(acc)
}

/// Least positive quadratic nonresidue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    debug_assert!(p % 2 == 1 && is_prime(p));
    (2..p)
        .find(|&n| euler_criterion(n, p) == -1)
        .expect("every odd prime has a nonresidue")
}

/// Canonical representative of a class in ℚ_v^× / (ℚ_v^×)².
///
/// * real place: `valuation_parity = 0`, `unit = ±1`;
/// * odd p: `unit` is 1 or the least positive nonresidue mod p;
/// * p = 2: `unit ∈ {1, 3, 5, 7}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    pub place: Place,
    pub valuation_parity: u8,
    pub unit: i64,
}

impl SquareClass {
    /// Every square class at `place`: 2 at ∞, 4 at odd p, 8 at 2.
    pub fn all(place: Place) -> Vec<SquareClass> {
        let units: Vec<i64> = match place {
            Place::Infinity => {
                return [1, -1]
                    .into_iter()
                    .map(|unit| SquareClass { place, valuation_parity: 0, unit })
                    .collect()
            }
            Place::Finite(p) if p.get() == 2 => vec![1, 3, 5, 7],
            Place::Finite(p) => vec![1, least_nonresidue(p.get()) as i64],
        };
        (0..2u8)
            .flat_map(|parity| {
                units.iter().map(move |&unit| SquareClass { place, valuation_parity: parity, unit })
            })
            .collect()
    }

    /// The rational `p^parity · unit` (or `±1` at ∞).
    pub fn representative(&self) -> Rational {
        Rational::from_integer(self.representative_int())
    }

    pub fn representative_int(&self) -> BigInt {
        let base = BigInt::from(self.unit);
        match self.place {
            Place::Finite(p) if self.valuation_parity == 1 => base * BigInt::from(p.get()),
            _ => base,
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self.representative_int(), self.place)
    }
}

/// Square class of a nonzero rational at `place`.
pub fn square_class(a: &Rational, place: Place) -> Result<SquareClass> {
    if a.is_zero() {
        return Err(Error::ZeroArgument);
    }
    match place {
        Place::Infinity => Ok(SquareClass {
            place,
            valuation_parity: 0,
            unit: if a.is_negative() { -1 } else { 1 },
        }),
        Place::Finite(p) => {
            let p = p.get();
            let (v, u) = split_valuation(a, p)?;
            let valuation_parity = v.rem_euclid(2) as u8;
            let unit = if p == 2 {
                // d⁻¹ ≡ d (mod 8) for odd d
                (residue_u64(u.numer(), 8) * residue_u64(u.denom(), 8) % 8) as i64
            } else {
                let r = mul_mod(residue_u64(u.numer(), p), residue_u64(u.denom(), p), p);
                if euler_criterion(r, p) == 1 {
                    1
                } else {
                    least_nonresidue(p) as i64
                }
            };
            Ok(SquareClass { place, valuation_parity, unit })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_legendre(a: i64, p: u64) -> i8 {
        let r = a.rem_euclid(p as i64) as u64;
        if r == 0 {
            0
        } else if (1..p).any(|x| x * x % p == r) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&int(12), 2).unwrap(), 2);
        assert_eq!(valuation(&ratio(3, 50), 5).unwrap(), -2);
        assert_eq!(valuation(&int(7), 3).unwrap(), 0);
        assert_eq!(valuation(&int(0), 3), Err(Error::UndefinedValuation));
        assert_eq!(valuation(&int(9), 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn square_class_examples() {
        let two = Place::finite(2).unwrap();
        let c = square_class(&int(18), two).unwrap();
        assert_eq!((c.valuation_parity, c.unit), (1, 1));

        let c = square_class(&int(-4), Place::Infinity).unwrap();
        assert_eq!(c.unit, -1);

        // 50 = 2·5²: parity 0, unit 2 which is a nonresidue mod 5
        let five = Place::finite(5).unwrap();
        let c = square_class(&int(50), five).unwrap();
        assert_eq!(c.valuation_parity, 0);
        assert_eq!(c.unit, least_nonresidue(5) as i64);
        assert_eq!(c.unit, 2);

        assert_eq!(square_class(&int(0), five), Err(Error::ZeroArgument));
    }

    #[test]
    fn square_class_canonicalization_is_idempotent() {
        for place in Place::up_to(50) {
            for c in SquareClass::all(place) {
                assert_eq!(square_class(&c.representative(), place).unwrap(), c);
            }
        }
    }

    #[test]
    fn square_class_counts() {
        assert_eq!(SquareClass::all(Place::Infinity).len(), 2);
        assert_eq!(SquareClass::all(Place::finite(2).unwrap()).len(), 8);
        assert_eq!(SquareClass::all(Place::finite(13).unwrap()).len(), 4);
    }

    #[test]
    fn square_class_ignores_square_factors() {
        for place in Place::up_to(13) {
            for a in -30i64..=30 {
                for c in -30i64..=30 {
                    if a == 0 || c == 0 {
                        continue;
                    }
                    let lhs = square_class(&int(a * c * c), place).unwrap();
                    assert_eq!(lhs, square_class(&int(a), place).unwrap(), "a={a} c={c} v={place}");
                    let frac = ratio(a, c * c);
                    assert_eq!(square_class(&frac, place).unwrap(), lhs);
                }
            }
        }
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(3, 5).unwrap(), -1);
        assert_eq!(legendre(1, 13).unwrap(), 1);
        assert_eq!(legendre(2, 7).unwrap(), 1);
        assert_eq!(legendre(14, 7).unwrap(), 0);
        assert!(matches!(legendre(3, 2), Err(Error::InvalidModulus { .. })));
        assert!(matches!(legendre(3, 15), Err(Error::InvalidModulus { .. })));
    }

    #[test]
    fn legendre_matches_brute_force() {
        for p in (3..200).filter(|&n| is_prime(n)) {
            for a in -60..60 {
                assert_eq!(legendre(a, p).unwrap(), brute_legendre(a, p), "({a}/{p})");
            }
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(2, 15).unwrap(), 1);
        assert_eq!(jacobi(5, 1).unwrap(), 1);
        assert_eq!(jacobi(3, 5).unwrap(), -1);
        assert_eq!(jacobi(3, 9).unwrap(), 0);
        assert!(matches!(jacobi(3, 10), Err(Error::InvalidModulus { .. })));
    }

    #[test]
    fn primality_and_factorization() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(squarefree_part(-50), -2);
        assert_eq!(squarefree_part(18), 2);
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("-3/6").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn place_parsing() {
        assert_eq!("inf".parse::<Place>().unwrap(), Place::Infinity);
        assert_eq!("7".parse::<Place>().unwrap(), Place::finite(7).unwrap());
        assert!("8".parse::<Place>().is_err());
        assert!(Place::Infinity < Place::finite(2).unwrap());
    }
}
