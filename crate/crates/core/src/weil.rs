//! One-dimensional Weil indices γ_v(a) for the standard characters
//! ψ_∞(x) = e^{2πix} and ψ_p(x) = e^{−2πi{x}_p}, the multiplicativity defect
//! μ_v(a,b), and the Hasse formula for diagonal forms.
//!
//! Table values are never hand-entered. Each [`WeilTable`] is built from
//! [`weil_oracle`] on the canonical square-class representatives and every
//! entry must agree at two consecutive stabilization levels.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{split_valuation, square_class, unit_residue, valuation, Place, Rational, SquareClass};
use crate::cyclotomic::Mu8;
use crate::error::{Error, Result};
use crate::hilbert::hilbert;

/// Maximum distance from the snapped eighth root of unity.
pub const SNAP_TOLERANCE: f64 = 1e-6;
/// Below this magnitude the finite sum carries no usable phase.
pub const MIN_MAGNITUDE: f64 = 1e-9;

/// Smallest admissible oracle level for `a` at `place`.
///
/// `|v_p(a)|/2 + 3` at odd p, `|v_2(a)|/2 + 5` at 2, and 3 at ∞ (where the
/// level halves the quadrature step).
pub fn stabilization_floor(a: &Rational, place: Place) -> Result<u32> {
    match place {
        Place::Infinity => Ok(3),
        Place::Finite(p) => {
            let v = valuation(a, p.get())?.unsigned_abs() as u32;
            Ok(v / 2 + if p.get() == 2 { 5 } else { 3 })
        }
    }
}

/// A snapped oracle evaluation with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSample {
    pub root: Mu8,
    /// Distance between the normalized sum and `root`.
    pub distance: f64,
    pub magnitude: f64,
}

/// γ_v(a) computed from its defining Fourier identity at the given level.
pub fn weil_oracle(a: &Rational, place: Place, level: u32) -> Result<Mu8> {
    weil_oracle_sample(a, place, level).map(|s| s.root)
}

pub fn weil_oracle_sample(a: &Rational, place: Place, level: u32) -> Result<OracleSample> {
    if a.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let floor = stabilization_floor(a, place)?;
    if level < floor {
        return Err(Error::BelowStabilizationFloor { level, floor });
    }
    let z = match place {
        Place::Infinity => real_ratio(a, level),
        Place::Finite(p) => padic_sum(a, p.get(), level)?,
    };
    let magnitude = z.norm();
    if !(magnitude >= MIN_MAGNITUDE) {
        return Err(Error::StabilizationFailure(format!(
            "|S| = {magnitude:e} for a = {a} at {place}, level {level}"
        )));
    }
    let (root, distance) = Mu8::nearest(z);
    if distance > SNAP_TOLERANCE {
        return Err(Error::StabilizationFailure(format!(
            "phase of a = {a} at {place}, level {level} is {distance:e} away from {root}"
        )));
    }
    Ok(OracleSample { root, distance, magnitude })
}

/// `∫ φ̂ ψ(ax²) / (|2a|^{-1/2} ∫ φ ψ(−x²/4a))` for the Gaussian `φ = e^{−πx²}`,
/// which is its own Fourier transform. Both integrands are Gaussians, so the
/// trapezoid rule converges geometrically; the step is scaled to the faster
/// of the two oscillations and halved per level.
fn real_ratio(a: &Rational, level: u32) -> Complex64 {
    let a = a.to_f64().expect("rational converts to f64");
    let s = 1.0 + 2.0 * a.abs() + 1.0 / (2.0 * a.abs());
    let h = 0.5f64.powi(level as i32) / s;
    let half_width = 7.0;
    let n = (half_width / h).ceil() as i64;
    let trapezoid = |coef: f64| -> Complex64 {
        (-n..=n)
            .map(|k| {
                let x = k as f64 * h;
                let x2 = x * x;
                Complex64::from_polar((-PI * x2).exp(), 2.0 * PI * coef * x2)
            })
            .sum::<Complex64>()
            * h
    };
    let lhs = trapezoid(a);
    let rhs = trapezoid(-1.0 / (4.0 * a)) / (2.0 * a.abs()).sqrt();
    lhs / rhs
}

/// The finite sum `Σ_{y mod p^M} ψ_p(a p^{-2N} y²)`, `M = 2N − v_p(a)` (+1 at 2),
/// whose phase is γ_p(a) once `N` clears the floor.
///
/// Writing `y = y₀ + p^k t` with `k = ⌈M/2⌉`, the sum over `t` is a complete
/// character sum that equals `p^{M−k}` when `p^{M−k} | 2u·y₀` and vanishes
/// otherwise, so only those `y₀` are visited (the common factor is dropped).
fn padic_sum(a: &Rational, p: u64, level: u32) -> Result<Complex64> {
    let (v, unit) = split_valuation(a, p)?;
    let extra = i64::from(p == 2);
    let m = 2 * level as i64 - v + extra;
    if m < 1 {
        return Err(Error::StabilizationFailure(format!("empty sum at level {level}")));
    }
    let m = m as u32;
    let modulus = BigUint::from(p).pow(m);
    let u = unit_residue(&unit, &modulus);
    let k = m.div_ceil(2);
    let stride_exp = (m - k).saturating_sub(u32::from(p == 2));
    let stride = BigUint::from(p).pow(stride_exp);
    let count = BigUint::from(p).pow(k - stride_exp);
    let count = count
        .to_u64()
        .filter(|&c| c <= 1 << 26)
        .ok_or_else(|| Error::TooLarge(format!("oracle sum over {p}^{} terms", k - stride_exp)))?;
    Ok(phase_sum(&u, &modulus, &stride, count))
}

fn phase_sum(u: &BigUint, modulus: &BigUint, stride: &BigUint, count: u64) -> Complex64 {
    let denom = modulus.to_f64().expect("modulus converts to f64");
    (0..count)
        .map(|s| {
            let y = stride * s;
            let r = (u * &y * &y) % modulus;
            let frac = r.to_f64().expect("residue converts to f64") / denom;
            Complex64::from_polar(1.0, -2.0 * PI * frac)
        })
        .sum()
}

/// γ_v on every square class at one place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilTable {
    place: Place,
    entries: BTreeMap<SquareClass, Mu8>,
}

impl WeilTable {
    /// Evaluates the oracle at levels `floor` and `floor + 1` on each class
    /// representative and fails unless both agree.
    pub fn build(place: Place) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for class in SquareClass::all(place) {
            let a = class.representative();
            let floor = stabilization_floor(&a, place)?;
            let lo = weil_oracle(&a, place, floor)?;
            let hi = weil_oracle(&a, place, floor + 1)?;
            if lo != hi {
                return Err(Error::StabilizationFailure(format!(
                    "{class}: level {floor} gives {lo}, level {} gives {hi}",
                    floor + 1
                )));
            }
            entries.insert(class, lo);
        }
        Ok(WeilTable { place, entries })
    }

    pub fn place(&self) -> Place {
        self.place
    }

    pub fn get(&self, class: &SquareClass) -> Mu8 {
        self.entries[class]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SquareClass, &Mu8)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for WeilTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (class, g) in &self.entries {
            writeln!(f, "{class}\t{g}")?;
        }
        Ok(())
    }
}

/// Shared table for `place`, built on first use.
pub fn weil_table(place: Place) -> Result<Arc<WeilTable>> {
    static TABLES: OnceLock<RwLock<HashMap<Place, Arc<WeilTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    if let Some(t) = tables.read().expect("weil table cache poisoned").get(&place) {
        return Ok(t.clone());
    }
    // Concurrent first use may build twice; the builds are identical.
    let built = Arc::new(WeilTable::build(place)?);
    Ok(tables
        .write()
        .expect("weil table cache poisoned")
        .entry(place)
        .or_insert(built)
        .clone())
}

/// γ_v(a) by table lookup through the square class of `a`.
pub fn weil_index(a: &Rational, place: Place) -> Result<Mu8> {
    let class = square_class(a, place)?;
    Ok(weil_table(place)?.get(&class))
}

/// A way of evaluating γ_v, selectable by name.
pub trait WeilEvaluator: Send + Sync {
    fn name(&self) -> &'static str;

    fn weil(&self, a: &Rational, place: Place) -> Result<Mu8>;
}

/// Lookup in the stabilized per-place table.
#[derive(Debug, Default, Clone, Copy)]
pub struct TableLookup;

/// Direct oracle evaluation at a fixed level, or at the floor for `a`.
#[derive(Debug, Default, Clone, Copy)]
pub struct DirectOracle {
    pub level: Option<u32>,
}

impl WeilEvaluator for TableLookup {
    fn name(&self) -> &'static str {
        "table"
    }

    fn weil(&self, a: &Rational, place: Place) -> Result<Mu8> {
        weil_index(a, place)
    }
}

impl WeilEvaluator for DirectOracle {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn weil(&self, a: &Rational, place: Place) -> Result<Mu8> {
        if a.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let level = match self.level {
            Some(level) => level,
            None => stabilization_floor(a, place)?,
        };
        weil_oracle(a, place, level)
    }
}

pub fn weil_methods(level: Option<u32>) -> Vec<Box<dyn WeilEvaluator>> {
    vec![Box::new(TableLookup), Box::new(DirectOracle { level })]
}

/// μ_v(a,b) = γ_v(a)γ_v(b) / (γ_v(1)γ_v(ab)).
pub fn defect(a: &Rational, b: &Rational, place: Place) -> Result<Mu8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let g = |x: &Rational| weil_index(x, place);
    Ok(g(a)? * g(b)? / (g(&Rational::from_integer(1.into()))? * g(&(a * b))?))
}

/// A diagonal quadratic form ⟨a_1, …, a_n⟩ with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalForm {
    coefficients: Vec<Rational>,
}

impl DiagonalForm {
    pub fn new(coefficients: Vec<Rational>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidInput("a diagonal form needs at least one coefficient".into()));
        }
        if coefficients.iter().any(Zero::is_zero) {
            return Err(Error::ZeroArgument);
        }
        Ok(DiagonalForm { coefficients })
    }

    pub fn from_integers(coefficients: &[i64]) -> Result<Self> {
        Self::new(coefficients.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn dimension(&self) -> usize {
        self.coefficients.len()
    }

    pub fn determinant(&self) -> Rational {
        self.coefficients.iter().product()
    }

    /// Π_i γ_v(a_i), the Weil index of the orthogonal sum of the lines.
    pub fn weil_product(&self, place: Place) -> Result<Mu8> {
        self.coefficients.iter().map(|a| weil_index(a, place)).product()
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients.iter().map(ToString::to_string).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

/// h(q) = Π_{i<j} ⟨a_i, a_j⟩_v.
pub fn hasse_invariant(q: &DiagonalForm, place: Place) -> i8 {
    let c = q.coefficients();
    let mut h = 1;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            h *= hilbert(&c[i], &c[j], place).expect("diagonal coefficients are nonzero");
        }
    }
    h
}

/// γ(q) = γ(1)^{n−1} γ(det q) h(q).
pub fn weil_index_of_form(q: &DiagonalForm, place: Place) -> Result<Mu8> {
    let n = q.dimension() as i64;
    let g1 = weil_index(&Rational::from_integer(1.into()), place)?;
    let gdet = weil_index(&q.determinant(), place)?;
    Ok(g1.pow(n - 1) * gdet * Mu8::from_sign(hasse_invariant(q, place)))
}
