//! Lagrangian lines in the symplectic plane, their Kashiwara forms, the real
//! cyclic-order sign κ, and the triple phase.
//!
//! Lines are parametrized by slope: `L_t = ℚ·(1, t)` and `L_∞ = ℚ·(0, 1)`,
//! with `ω((x, y), (x', y')) = xy' − yx'`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::arith::{parse_rational, Place, Rational};
use crate::cyclotomic::Mu8;
use crate::error::{Error, Result};
use crate::weil::weil_index;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Slope {
    Finite(Rational),
    Infinity,
}

impl Slope {
    pub fn int(t: i64) -> Self {
        Slope::Finite(Rational::from_integer(t.into()))
    }

    /// The spanning vector `e_t`.
    pub fn direction(&self) -> (Rational, Rational) {
        match self {
            Slope::Finite(t) => (Rational::one(), t.clone()),
            Slope::Infinity => (Rational::zero(), Rational::one()),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Slope::Infinity)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(t) => write!(f, "{t}"),
            Slope::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Slope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Slope::Infinity),
            t => parse_rational(t).map(Slope::Finite),
        }
    }
}

/// ω(e_s, e_t).
pub fn symplectic_pairing(s: &Slope, t: &Slope) -> Rational {
    let (x, y) = s.direction();
    let (x2, y2) = t.direction();
    x * y2 - y * x2
}

/// Three pairwise distinct (hence pairwise transverse) slopes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LagrangianTriple([Slope; 3]);

impl LagrangianTriple {
    pub fn new(first: Slope, second: Slope, third: Slope) -> Result<Self> {
        if first == second || second == third || first == third {
            return Err(Error::NonTransverse);
        }
        Ok(LagrangianTriple([first, second, third]))
    }

    pub fn slopes(&self) -> &[Slope; 3] {
        &self.0
    }

    /// The triple with slopes `i` and `j` exchanged.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut s = self.0.clone();
        s.swap(i, j);
        LagrangianTriple(s)
    }

    /// `(second, third, first)`.
    pub fn rotated(&self) -> Self {
        let mut s = self.0.clone();
        s.rotate_left(1);
        LagrangianTriple(s)
    }
}

impl fmt::Display for LagrangianTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.0;
        write!(f, "({a}, {b}, {c})")
    }
}

/// Coefficient of the one-dimensional Kashiwara form of the triple.
///
/// Finite slopes give `−(a−b)(b−c)(c−a)`; `(∞, a, b)` gives `a − b`. With ∞ in
/// another position the triple is transposed to put ∞ first, negating the
/// coefficient once per transposition.
pub fn kashiwara_form(triple: &LagrangianTriple) -> Rational {
    match triple.slopes() {
        [Slope::Finite(a), Slope::Finite(b), Slope::Finite(c)] => -((a - b) * (b - c) * (c - a)),
        [Slope::Infinity, Slope::Finite(a), Slope::Finite(b)] => a - b,
        [_, Slope::Infinity, _] => -kashiwara_form(&triple.swapped(0, 1)),
        [_, _, Slope::Infinity] => -kashiwara_form(&triple.swapped(0, 2)),
    }
}

/// κ = sgn(ω(v₁,v₂) ω(v₂,v₃) ω(v₃,v₁)) for finite slopes.
pub fn kappa(triple: &LagrangianTriple) -> Result<i8> {
    let s = triple.slopes();
    if s.iter().any(Slope::is_infinite) {
        return Err(Error::OutOfDomain("kappa is defined for finite slopes only"));
    }
    let prod = symplectic_pairing(&s[0], &s[1])
        * symplectic_pairing(&s[1], &s[2])
        * symplectic_pairing(&s[2], &s[0]);
    Ok(if prod.is_positive() { 1 } else { -1 })
}

/// Weil index of the Kashiwara form: the phase of the triple at `place`.
pub fn triple_phase(triple: &LagrangianTriple, place: Place) -> Result<Mu8> {
    weil_index(&kashiwara_form(triple), place)
}
