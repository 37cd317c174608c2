//! The Hilbert symbol ⟨a,b⟩_v at every place of ℚ.
//!
//! Two independent evaluators are provided behind [`HilbertSymbol`]:
//! [`ClosedFormula`] dispatches on square classes to the explicit local
//! formulas, and [`ConicOracle`] decides solvability of `z² = ax² + by²` by a
//! Hensel-bounded search for primitive solutions modulo `p^K`.

use std::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::arith::{prime_divisors, square_class, squarefree_part, Place, Rational, SquareClass};
use crate::error::{Error, Result};

/// A way of evaluating the local Hilbert symbol, selectable by name.
pub trait HilbertSymbol: Send + Sync {
    fn name(&self) -> &'static str;

    fn symbol(&self, a: &Rational, b: &Rational, place: Place) -> Result<i8>;
}

impl fmt::Debug for dyn HilbertSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HilbertSymbol({})", self.name())
    }
}

/// Closed formulas on square-class representatives.
#[derive(Debug, Default, Clone, Copy)]
pub struct ClosedFormula;

/// Exhaustive conic-solvability search.
#[derive(Debug, Default, Clone, Copy)]
pub struct ConicOracle;

impl HilbertSymbol for ClosedFormula {
    fn name(&self) -> &'static str {
        "formula"
    }

    fn symbol(&self, a: &Rational, b: &Rational, place: Place) -> Result<i8> {
        hilbert(a, b, place)
    }
}

impl HilbertSymbol for ConicOracle {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn symbol(&self, a: &Rational, b: &Rational, place: Place) -> Result<i8> {
        let rep = |x: &Rational| -> Result<i64> {
            let c = square_class(x, place)?;
            let r = c.representative_int();
            r.to_i64().ok_or_else(|| Error::TooLarge(r.to_string()))
        };
        hilbert_oracle(rep(a)?, rep(b)?, place)
    }
}

/// Registered evaluators, in a fixed order.
pub fn hilbert_methods() -> Vec<Box<dyn HilbertSymbol>> {
    vec![Box::new(ClosedFormula), Box::new(ConicOracle)]
}

pub fn hilbert_method(name: &str) -> Option<Box<dyn HilbertSymbol>> {
    hilbert_methods().into_iter().find(|m| m.name() == name)
}

/// ⟨a,b⟩_v by the closed local formulas.
pub fn hilbert(a: &Rational, b: &Rational, place: Place) -> Result<i8> {
    let sa = square_class(a, place)?;
    let sb = square_class(b, place)?;
    Ok(hilbert_on_classes(sa, sb))
}

/// ⟨a,b⟩_v for two square classes at the same place.
pub fn hilbert_on_classes(sa: SquareClass, sb: SquareClass) -> i8 {
    assert_eq!(sa.place, sb.place, "square classes at different places");
    let (alpha, beta) = (sa.valuation_parity as u64, sb.valuation_parity as u64);
    let odd_exponent = match sa.place {
        Place::Infinity => u64::from(sa.unit < 0 && sb.unit < 0),
        Place::Finite(p) if p.get() == 2 => {
            let eps = |u: i64| ((u - 1) / 2) as u64 & 1;
            let omega = |u: i64| ((u * u - 1) / 8) as u64 & 1;
            eps(sa.unit) * eps(sb.unit) + alpha * omega(sb.unit) + beta * omega(sa.unit)
        }
        Place::Finite(p) => {
            // unit class 1 is a residue, the stored nonresidue is not
            let nonres = |u: i64| u64::from(u != 1);
            alpha * beta * ((p.get() - 1) / 2) + beta * nonres(sa.unit) + alpha * nonres(sb.unit)
        }
    };
    if odd_exponent % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Decides whether `z² = ax² + by²` has a nonzero solution over ℚ_v.
///
/// At a prime p the arguments are first reduced to their squarefree parts;
/// then a primitive solution modulo `p^K`, `K = v_p(4ab) + 3`, exists iff one
/// lifts to ℤ_p (every primitive solution has a partial derivative of
/// valuation at most `v_p(2) + 1`, so Hensel's lemma applies at that depth).
pub fn hilbert_oracle(a: i64, b: i64, place: Place) -> Result<i8> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroArgument);
    }
    let p = match place {
        Place::Infinity => return Ok(if a < 0 && b < 0 { -1 } else { 1 }),
        Place::Finite(p) => p.get(),
    };
    let (a, b) = (squarefree_part(a), squarefree_part(b));
    let v = |n: i64| {
        let mut n = n.unsigned_abs();
        let mut k = 0u32;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        k
    };
    let depth = 2 * v(2) + v(a) + v(b) + 3;
    let modulus = p
        .checked_pow(depth)
        .filter(|m| *m < 1 << 62)
        .ok_or_else(|| Error::TooLarge(format!("{p}^{depth} exceeds the conic search range")))?;
    let search = ConicSearch {
        a: (a as i128).rem_euclid(modulus as i128) as u128,
        b: (b as i128).rem_euclid(modulus as i128) as u128,
        p: p as u128,
        depth,
    };
    Ok(if search.has_primitive_solution() { 1 } else { -1 })
}

struct ConicSearch {
    a: u128,
    b: u128,
    p: u128,
    depth: u32,
}

impl ConicSearch {
    fn vanishes(&self, t: [u128; 3], m: u128) -> bool {
        let [x, y, z] = t.map(|c| c % m);
        let rhs = (self.a % m * (x * x % m) + self.b % m * (y * y % m)) % m;
        z * z % m == rhs
    }

    /// Depth-first search over primitive solutions normalized so that the
    /// first coordinate that is a unit equals exactly 1.
    fn has_primitive_solution(&self) -> bool {
        let p = self.p;
        let mut stack: Vec<([u128; 3], usize, u32)> = Vec::new();
        for pivot in 0..3 {
            let free: Vec<usize> = (pivot + 1..3).collect();
            let count = p.pow(free.len() as u32);
            for idx in 0..count {
                let mut t = [0u128; 3];
                t[pivot] = 1;
                let mut rest = idx;
                for &f in &free {
                    t[f] = rest % p;
                    rest /= p;
                }
                if self.vanishes(t, p) {
                    stack.push((t, pivot, 1));
                }
            }
        }
        while let Some((t, pivot, level)) = stack.pop() {
            if level == self.depth {
                return true;
            }
            let step = p.pow(level);
            let next = step * p;
            let free: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
            for d0 in 0..p {
                for d1 in 0..p {
                    let mut c = t;
                    c[free[0]] += d0 * step;
                    c[free[1]] += d1 * step;
                    if self.vanishes(c, next) {
                        stack.push((c, pivot, level + 1));
                    }
                }
            }
        }
        false
    }
}

/// Places where ⟨a,b⟩_v can differ from +1: ∞, 2 and the primes dividing a
/// numerator or denominator of `a` or `b`. Ascending, ∞ first.
pub fn support(a: &Rational, b: &Rational) -> Result<Vec<Place>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let mut primes = vec![2u64];
    for n in [a.numer(), a.denom(), b.numer(), b.denom()] {
        primes.extend(prime_divisors(n)?);
    }
    primes.sort_unstable();
    primes.dedup();
    let mut places = vec![Place::Infinity];
    for p in primes {
        places.push(Place::finite(p)?);
    }
    Ok(places)
}
