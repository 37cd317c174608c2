use std::collections::HashMap;

use num_integer::Integer;
use num_traits::Signed;
use rayon::prelude::*;

use super::{
    global_defect_product, local_defects, odd_primes_below, places_up_to, quadratic_reciprocity, sweep, Failure,
    Law,
};
use crate::arith::{is_prime, square_class, Place, Rational, SquareClass};
use crate::cyclotomic::{Cyclotomic, Mu8};
use crate::error::Result;
use crate::finite::{gauss_sum, numerator_law_holds, transport_coefficient, verify_crt_factorization, verify_gauss_evaluation};
use crate::hilbert::{hilbert, hilbert_on_classes, hilbert_oracle, support};
use crate::maslov::{kappa, kashiwara_form, LagrangianTriple, Slope};
use crate::weil::{defect, stabilization_floor, weil_oracle_sample, weil_table, SNAP_TOLERANCE};

/// Conic-oracle cross-checks are limited to primes up to this bound.
const ORACLE_PRIME_BOUND: u64 = 50;

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn class_pairs(places: &[Place]) -> Vec<(SquareClass, SquareClass)> {
    places
        .iter()
        .flat_map(|&v| {
            let classes = SquareClass::all(v);
            let mut pairs = Vec::with_capacity(classes.len() * classes.len());
            for &a in &classes {
                for &b in &classes {
                    pairs.push((a, b));
                }
            }
            pairs
        })
        .collect()
}

fn nonzero_grid(max: i64) -> Vec<(i64, i64)> {
    let range = || (-max..=max).filter(|&x| x != 0);
    range().flat_map(|a| range().map(move |b| (a, b))).collect()
}

fn sign(s: i8) -> Mu8 {
    Mu8::from_sign(s)
}

/// defect(a,b,v) == ⟨a,b⟩_v on every square-class pair at ∞, 2 and odd p ≤ max,
/// and on integer pairs with |a|,|b| ≤ min(max, 30) at every support place.
pub struct Bridge;

impl Law for Bridge {
    fn name(&self) -> &'static str {
        "bridge"
    }

    fn summary(&self) -> &'static str {
        "local defect equals the Hilbert symbol"
    }

    fn default_max(&self) -> i64 {
        50
    }

    fn check(&self, max: i64) -> Result<(u64, Vec<Failure>)> {
        let mut cases: Vec<(Place, Rational, Rational)> = class_pairs(&places_up_to(max))
            .into_iter()
            .map(|(a, b)| (a.place, a.representative(), b.representative()))
            .collect();
        for (a, b) in nonzero_grid(max.min(30)) {
            let (a, b) = (int(a), int(b));
            for v in support(&a, &b)? {
                cases.push((v, a.clone(), b.clone()));
            }
        }
        Ok(sweep(&cases, |(v, a, b)| {
            let d = defect(a, b, *v)?;
            let h = sign(hilbert(a, b, *v)?);
            Ok((d != h).then(|| Failure::new(format!("({a}, {b}) at {v}"), h, d)))
        }))
    }
}

/// Π_v μ_v(a,b) = 1 on the nonzero grid, each factor equal to ⟨a,b⟩_v.
pub struct DefectProduct;

impl Law for DefectProduct {
    fn name(&self) -> &'static str {
        "defect-product"
    }

    fn summary(&self) -> &'static str {
        "product of local defects over all places is trivial"
    }

    fn default_max(&self) -> i64 {
        50
    }

    fn check(&self, max: i64) -> Result<(u64, Vec<Failure>)> {
        Ok(sweep(&nonzero_grid(max), |&(a, b)| {
            let (a, b) = (int(a), int(b));
            let product = global_defect_product(&a, &b)?;
            if product != Mu8::ONE {
                return Ok(Some(Failure::new(format!("({a}, {b})"), Mu8::ONE, product)));
            }
            for (v, d) in local_defects(&a, &b)? {
                let h = sign(hilbert(&a, &b, v)?);
                if d != h {
                    return Ok(Some(Failure::new(format!("({a}, {b}) factor at {v}"), h, d)));
                }
            }
            Ok(None)
        }))
    }
}

/// Π_v ⟨a,b⟩_v = 1 on the nonzero grid; factors at p ≤ 50 agree with the
/// conic oracle, and two places outside the support give +1.
pub struct HilbertReciprocity;

impl HilbertReciprocity {
    fn oracle_table() -> Result<HashMap<(SquareClass, SquareClass), i8>> {
        let pairs = class_pairs(&places_up_to(ORACLE_PRIME_BOUND as i64));
        pairs
            .par_iter()
            .map(|&(a, b)| Ok(((a, b), oracle_on_classes(a, b)?)))
            .collect()
    }
}

fn oracle_on_classes(a: SquareClass, b: SquareClass) -> Result<i8> {
    let rep = |c: SquareClass| i64::try_from(c.representative_int()).expect("class representatives are small");
    hilbert_oracle(rep(a), rep(b), a.place)
}

fn places_outside(support: &[Place], count: usize) -> Vec<Place> {
    (3u64..)
        .filter(|&p| is_prime(p))
        .map(|p| Place::finite(p).expect("prime"))
        .filter(|v| !support.contains(v))
        .take(count)
        .collect()
}

impl Law for HilbertReciprocity {
    fn name(&self) -> &'static str {
        "hilbert-reciprocity"
    }

    fn summary(&self) -> &'static str {
        "product of Hilbert symbols over all places is +1"
    }

    fn default_max(&self) -> i64 {
        50
    }

    fn check(&self, max: i64) -> Result<(u64, Vec<Failure>)> {
        let oracle = Self::oracle_table()?;
        Ok(sweep(&nonzero_grid(max), |&(a, b)| {
            let (a, b) = (int(a), int(b));
            let places = support(&a, &b)?;
            let mut product = 1i8;
            for &v in &places {
                let h = hilbert(&a, &b, v)?;
                product *= h;
                let key = (square_class(&a, v)?, square_class(&b, v)?);
                if let Some(&o) = oracle.get(&key) {
                    if o != h {
                        return Ok(Some(Failure::new(format!("({a}, {b}) oracle at {v}"), o, h)));
                    }
                }
            }
            if product != 1 {
                return Ok(Some(Failure::new(format!("({a}, {b})"), 1, product)));
            }
            for v in places_outside(&places, 2) {
                let h = hilbert(&a, &b, v)?;
                if h != 1 {
                    return Ok(Some(Failure::new(format!("({a}, {b}) outside support at {v}"), 1, h)));
                }
            }
            Ok(None)
        }))
    }
}

/// (p/q)(q/p) = (−1)^{(p−1)(q−1)/4} for ordered pairs of distinct odd primes
/// below max, with the local symbols matching and ⟨p,q⟩_ℓ = +1 at three
/// primes ℓ ∤ 2pq.
pub struct QrLaw;

impl Law for QrLaw {
    fn name(&self) -> &'static str {
        "qr"
    }

    fn summary(&self) -> &'static str {
        "quadratic reciprocity from brute-force Legendre symbols"
    }

    fn default_max(&self) -> i64 {
        200
    }

    fn check(&self, max: i64) -> Result<(u64, Vec<Failure>)> {
        let primes = odd_primes_below(max);
        let pairs: Vec<(u64, u64)> =
            primes.iter().flat_map(|&p| primes.iter().filter(move |&&q| q != p).map(move |&q| (p, q))).collect();
        Ok(sweep(&pairs, |&(p, q)| {
            let r = quadratic_reciprocity(p, q)?;
            if !r.consistent() {
                let local: Vec<String> = r.local.iter().map(|(v, s)| format!("{v}:{s}")).collect();
                return Ok(Some(Failure::new(
                    format!("({p}, {q})"),
                    format!("lhs = rhs = {}", r.rhs),
                    format!("lhs {} [{}]", r.lhs, local.join(" ")),
                )));
            }
            let (a, b) = (int(p as i64), int(q as i64));
            for v in places_outside(&support(&a, &b)?, 3) {
                let h = hilbert(&a, &b, v)?;
                if h != 1 {
                    return Ok(Some(Failure::new(format!("({p}, {q}) at {v}"), 1, h)));
                }
            }
            Ok(None)
        }))
    }
}

#[derive(Debug)]
enum GaussCase {
    Evaluation(u64),
    Numerator { a: i64, c: u64 },
}

/// 𝒢(a,c) = (a/c)𝒢(1,c), |𝒢(a,c)|² = c, 𝒢(1,c)² = ε_c²c and the numeric sign
/// of ε_c, for odd c ≤ max and a coprime to c.
pub struct GaussLaw;

impl Law for GaussLaw {
    fn name(&self) -> &'static str {
        "gauss-law"
    }

    fn summary(&self) -> &'static str {
        "numerator law, norm and evaluation of quadratic Gauss sums"
    }

    fn default_max(&self) -> i64 {
        99
    }

    fn check(&self, max: i64) -> Result<(u64, Vec<Failure>)> {
        let mut cases = Vec::new();
        for c in (1..=max.max(0) as u64).step_by(2) {
            cases.push(GaussCase::Evaluation(c));
            for a in (0..c as i64).filter(|a| a.unsigned_abs().gcd(&c) == 1) {
                cases.push(GaussCase::Numerator { a, c });
            }
        }
        Ok(sweep(&cases, |case| match *case {
            GaussCase::Evaluation(c) => {
                let r = verify_gauss_evaluation(c)?;
                Ok((!r.passed()).then(|| {
                    Failure::new(
                        format!("G(1, {c})"),
                        "square = eps^2 c, norm = c, numeric sign = eps",
                        format!(
                            "square_ok={} norm_ok={} numeric_error={:.3e}",
                            r.square_ok, r.norm_ok, r.numeric_error
                        ),
                    )
                }))
            }
            GaussCase::Numerator { a, c } => {
                if !numerator_law_holds(a, c)? {
                    return Ok(Some(Failure::new(format!("G({a}, {c})"), "(a/c) G(1, c)", gauss_sum(a, c)?)));
                }
                let g = gauss_sum(a, c)?;
                let norm = &g.conjugate() * &g;
                let expected = Cyclotomic::from_integer(c, c as i64)?;
                Ok((norm != expected).then(|| Failure::new(format!("|G({a}, {c})|^2"), expected, norm)))
            }
        }))
    }
}

/// The matrix-path transport coefficient equals the directly summed 𝒢(a,c).
pub struct TransportLaw;

impl Law for TransportLaw {
    fn name(&self) -> &'static str {
        "transport"
    }

    fn summary(&self) -> &'static str {
        "finite transport coefficient equals the Gauss sum"
    }

    fn default_max(&self) -> i64 {
        49
    }

    fn check(&self, max: i64) -> Result<(u64, Vec<Failure>)> {
        let cases: Vec<(i64, u64)> = (1..=max.max(0) as u64)
            .step_by(2)
            .flat_map(|c| (0..c as i64).filter(move |a| a.unsigned_abs().gcd(&c) == 1).map(move |a| (a, c)))
            .collect();
        Ok(sweep(&cases, |&(a, c)| {
            let t = transport_coefficient(a, c)?;
            let g = gauss_sum(a, c)?;
            Ok((t != g).then(|| Failure::new(format!("({a}, {c})"), g, t)))
        }))
    }
}

/// 𝒢(1,pq) = 𝒢(q,p)𝒢(p,q) and (p/q)(q/p) = ε_{pq}/(ε_p ε_q) for ordered
/// pairs of distinct odd primes with pq ≤ max.
pub struct CrtLaw;

impl Law for CrtLaw {
    fn name(&self) -> &'static str {
        "crt"
    }

    fn summary(&self) -> &'static str {
        "CRT factorization of Gauss sums and the sign it implies"
    }

    fn default_max(&self) -> i64 {
        200
    }

    fn check(&self, max: i64) -> Result<(u64, Vec<Failure>)> {
        let primes = odd_primes_below(max / 3 + 1);
        let pairs: Vec<(u64, u64)> = primes
            .iter()
            .flat_map(|&p| primes.iter().map(move |&q| (p, q)))
            .filter(|&(p, q)| p != q && (p * q) as i64 <= max)
            .collect();
        Ok(sweep(&pairs, |&(p, q)| {
            let r = verify_crt_factorization(p, q)?;
            Ok((!r.passed()).then(|| {
                Failure::new(
                    format!("({p}, {q})"),
                    format!("factorization and sign {}", sign(r.legendre_sign)),
                    format!("factorization_ok={} quotient {}", r.factorization_ok, r.epsilon_quotient),
                )
            }))
        }))
    }
}

#[derive(Debug)]
enum CocycleCase {
    Triple([Slope; 3]),
    Quadruple([Slope; 4]),
}

fn coefficient_sign(t: &LagrangianTriple) -> i8 {
    if kashiwara_form(t).is_positive() {
        1
    } else {
        -1
    }
}

/// On slopes ∞ and [−max, max]: κ equals the sign of the Kashiwara
/// coefficient, which is cyclically invariant and antisymmetric. On 4-tuples
/// from {∞} ∪ [−2, max − 2] the sign cocycle identity holds.
pub struct Cocycle;

impl Cocycle {
    fn check_triple(s: &[Slope; 3]) -> Result<Option<Failure>> {
        let t = LagrangianTriple::new(s[0].clone(), s[1].clone(), s[2].clone())?;
        let q = kashiwara_form(&t);
        let rotated = kashiwara_form(&t.rotated());
        if rotated != q {
            return Ok(Some(Failure::new(format!("rotation of {t}"), &q, rotated)));
        }
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            let swapped = kashiwara_form(&t.swapped(i, j));
            if swapped != -&q {
                return Ok(Some(Failure::new(format!("swap {i}{j} of {t}"), -&q, swapped)));
            }
        }
        if s.iter().all(|x| !x.is_infinite()) {
            let k = kappa(&t)?;
            let expected = coefficient_sign(&t);
            if k != expected {
                return Ok(Some(Failure::new(format!("kappa{t}"), expected, k)));
            }
        }
        Ok(None)
    }

    fn check_quadruple(s: &[Slope; 4]) -> Result<Option<Failure>> {
        let tau = |i: usize, j: usize, k: usize| -> Result<i64> {
            let t = LagrangianTriple::new(s[i].clone(), s[j].clone(), s[k].clone())?;
            Ok(coefficient_sign(&t) as i64)
        };
        let total = tau(0, 1, 2)? - tau(0, 1, 3)? + tau(0, 2, 3)? - tau(1, 2, 3)?;
        let label = format!("({}, {}, {}, {})", s[0], s[1], s[2], s[3]);
        Ok((total != 0).then(|| Failure::new(label, 0, total)))
    }
}

impl Law for Cocycle {
    fn name(&self) -> &'static str {
        "cocycle"
    }

    fn summary(&self) -> &'static str {
        "Kashiwara sign: kappa agreement, symmetries and the cocycle identity"
    }

    fn default_max(&self) -> i64 {
        5
    }

    fn check(&self, max: i64) -> Result<(u64, Vec<Failure>)> {
        let max = max.max(0);
        let with_inf = |lo: i64, hi: i64| -> Vec<Slope> {
            std::iter::once(Slope::Infinity).chain((lo..=hi).map(Slope::int)).collect()
        };
        let grid = with_inf(-max, max);
        let mut cases = Vec::new();
        for (i, a) in grid.iter().enumerate() {
            for (j, b) in grid.iter().enumerate().filter(|&(j, _)| j != i) {
                for (_, c) in grid.iter().enumerate().filter(|&(k, _)| k != i && k != j) {
                    cases.push(CocycleCase::Triple([a.clone(), b.clone(), c.clone()]));
                }
            }
        }
        let small = with_inf(-2, max - 2);
        let n = small.len();
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                for k in (0..n).filter(|&k| k != i && k != j) {
                    for l in (0..n).filter(|&l| l != i && l != j && l != k) {
                        cases.push(CocycleCase::Quadruple([
                            small[i].clone(),
                            small[j].clone(),
                            small[k].clone(),
                            small[l].clone(),
                        ]));
                    }
                }
            }
        }
        Ok(sweep(&cases, |case| match case {
            CocycleCase::Triple(s) => Self::check_triple(s),
            CocycleCase::Quadruple(s) => Self::check_quadruple(s),
        }))
    }
}

/// ⟨2a,2b⟩_v = ⟨2,2ab⟩_v ⟨a,b⟩_v on every square-class pair at places ≤ max.
pub struct FactorTwo;

impl Law for FactorTwo {
    fn name(&self) -> &'static str {
        "factor-two"
    }

    fn summary(&self) -> &'static str {
        "factor-two reduction of the Hilbert symbol"
    }

    fn default_max(&self) -> i64 {
        50
    }

    fn check(&self, max: i64) -> Result<(u64, Vec<Failure>)> {
        let cases = class_pairs(&places_up_to(max));
        Ok(sweep(&cases, |&(ca, cb)| {
            let v = ca.place;
            let (a, b) = (ca.representative(), cb.representative());
            let two = int(2);
            let lhs = hilbert(&(&two * &a), &(&two * &b), v)?;
            let rhs = hilbert(&two, &(&two * &a * &b), v)? * hilbert(&a, &b, v)?;
            Ok((lhs != rhs).then(|| Failure::new(format!("({a}, {b}) at {v}"), rhs, lhs)))
        }))
    }
}

#[derive(Debug)]
enum OracleCase {
    Hilbert(SquareClass, SquareClass),
    Weil(SquareClass),
}

/// Closed Hilbert formulas agree with the conic oracle on all class pairs, and
/// the Weil table agrees with the oracle at two consecutive levels, with snaps
/// within tolerance and fourth roots at odd p.
pub struct OracleAgreement;

impl OracleAgreement {
    fn check_weil(class: SquareClass) -> Result<Option<Failure>> {
        let v = class.place;
        let a = class.representative();
        let table = weil_table(v)?.get(&class);
        let floor = stabilization_floor(&a, v)?;
        for level in [floor, floor + 1] {
            let s = weil_oracle_sample(&a, v, level)?;
            if s.root != table {
                return Ok(Some(Failure::new(format!("gamma {class} level {level}"), table, s.root)));
            }
            if s.distance >= SNAP_TOLERANCE {
                return Ok(Some(Failure::new(
                    format!("gamma {class} level {level} snap"),
                    format!("< {SNAP_TOLERANCE:e}"),
                    format!("{:.3e}", s.distance),
                )));
            }
        }
        let odd = matches!(v, Place::Finite(p) if p.get() != 2);
        Ok((odd && table.exponent() % 2 != 0).then(|| Failure::new(format!("gamma {class}"), "a fourth root", table)))
    }
}

impl Law for OracleAgreement {
    fn name(&self) -> &'static str {
        "oracle-agreement"
    }

    fn summary(&self) -> &'static str {
        "closed formulas agree with the Hilbert and Weil oracles"
    }

    fn default_max(&self) -> i64 {
        50
    }

    fn check(&self, max: i64) -> Result<(u64, Vec<Failure>)> {
        let places = places_up_to(max);
        let mut cases: Vec<OracleCase> =
            class_pairs(&places).into_iter().map(|(a, b)| OracleCase::Hilbert(a, b)).collect();
        cases.extend(places.iter().flat_map(|&v| SquareClass::all(v)).map(OracleCase::Weil));
        Ok(sweep(&cases, |case| match *case {
            OracleCase::Hilbert(a, b) => {
                let formula = hilbert_on_classes(a, b);
                let oracle = oracle_on_classes(a, b)?;
                Ok((formula != oracle).then(|| Failure::new(format!("<{a}, {b}>"), oracle, formula)))
            }
            OracleCase::Weil(class) => Self::check_weil(class),
        }))
    }
}
