//! Global products of local invariants and the verification sweeps.
//!
//! Laws are registered by name in a [`LawRegistry`] and run through
//! [`LawRegistry::run`], which produces one [`VerificationReport`] per law.

mod laws;

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::arith::{is_prime, Place, Rational};
use crate::cyclotomic::Mu8;
use crate::error::{Error, Result};
use crate::hilbert::{hilbert, support};
use crate::weil::defect;

pub use laws::{
    Bridge, Cocycle, CrtLaw, DefectProduct, FactorTwo, GaussLaw, HilbertReciprocity, OracleAgreement, QrLaw,
    TransportLaw,
};

/// One disagreement found by a sweep.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    pub inputs: String,
    pub expected: String,
    pub got: String,
}

impl Failure {
    pub fn new(inputs: impl fmt::Display, expected: impl fmt::Display, got: impl fmt::Display) -> Self {
        Failure { inputs: inputs.to_string(), expected: expected.to_string(), got: got.to_string() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: expected {}, got {}", self.inputs, self.expected, self.got)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub law: String,
    pub instances: u64,
    /// Sorted by inputs.
    pub failures: Vec<Failure>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn new(law: impl Into<String>) -> Self {
        VerificationReport { law: law.into(), instances: 0, failures: Vec::new(), elapsed: Duration::ZERO }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Associative and commutative combination of two partial reports.
    pub fn merge(mut self, other: VerificationReport) -> Self {
        self.instances += other.instances;
        self.failures.extend(other.failures);
        self.failures.sort();
        self.elapsed += other.elapsed;
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {}: {} instances, {} failures ({:.3}s)",
            self.law,
            self.instances,
            self.failures.len(),
            self.elapsed.as_secs_f64()
        )?;
        for failure in &self.failures {
            write!(f, "\n  {failure}")?;
        }
        Ok(())
    }
}

/// Sweep bounds; `max` overrides the law's own default range.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepConfig {
    pub max: Option<i64>,
    pub jobs: Option<usize>,
}

/// A verifiable identity, checked exhaustively on a bounded range.
pub trait Law: Send + Sync {
    fn name(&self) -> &'static str;

    fn summary(&self) -> &'static str;

    fn default_max(&self) -> i64;

    /// Checks every instance up to `max`, returning the instance count and
    /// the failures found.
    fn check(&self, max: i64) -> Result<(u64, Vec<Failure>)>;
}

/// Runs `check` over `cases` in parallel. Errors become failures.
pub fn sweep<T, F>(cases: &[T], check: F) -> (u64, Vec<Failure>)
where
    T: Sync + fmt::Debug,
    F: Fn(&T) -> Result<Option<Failure>> + Sync,
{
    let mut failures: Vec<Failure> = cases
        .par_iter()
        .filter_map(|case| match check(case) {
            Ok(f) => f,
            Err(e) => Some(Failure::new(format!("{case:?}"), "a value", format!("error: {e}"))),
        })
        .collect();
    failures.sort();
    (cases.len() as u64, failures)
}

/// Laws selectable by name; `all` runs every registered law in order.
pub struct LawRegistry {
    laws: Vec<Box<dyn Law>>,
}

impl Default for LawRegistry {
    fn default() -> Self {
        LawRegistry {
            laws: vec![
                Box::new(Bridge),
                Box::new(DefectProduct),
                Box::new(HilbertReciprocity),
                Box::new(QrLaw),
                Box::new(GaussLaw),
                Box::new(TransportLaw),
                Box::new(CrtLaw),
                Box::new(Cocycle),
                Box::new(FactorTwo),
                Box::new(OracleAgreement),
            ],
        }
    }
}

impl LawRegistry {
    pub fn empty() -> Self {
        LawRegistry { laws: Vec::new() }
    }

    /// Adds a law, replacing any registered under the same name.
    pub fn register(&mut self, law: Box<dyn Law>) {
        self.laws.retain(|l| l.name() != law.name());
        self.laws.push(law);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.laws.iter().map(|l| l.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn Law> {
        self.laws.iter().find(|l| l.name() == name).map(|l| l.as_ref())
    }

    pub fn laws(&self) -> impl Iterator<Item = &dyn Law> {
        self.laws.iter().map(|l| l.as_ref())
    }

    /// Runs one law, or all of them for `"all"`.
    pub fn run(&self, name: &str, config: SweepConfig) -> Result<Vec<VerificationReport>> {
        let selected: Vec<&dyn Law> = if name == "all" {
            self.laws().collect()
        } else {
            vec![self.get(name).ok_or_else(|| Error::UnknownLaw(name.to_string()))?]
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs.unwrap_or(0))
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
        pool.install(|| selected.into_iter().map(|law| run_law(law, config.max)).collect())
    }
}

fn run_law(law: &dyn Law, max: Option<i64>) -> Result<VerificationReport> {
    let start = Instant::now();
    let (instances, failures) = law.check(max.unwrap_or_else(|| law.default_max()))?;
    Ok(VerificationReport { law: law.name().to_string(), instances, failures, elapsed: start.elapsed() })
}

/// Runs a single named law with the default registry.
pub fn run_suite(name: &str, config: SweepConfig) -> Result<VerificationReport> {
    let reports = LawRegistry::default().run(name, config)?;
    Ok(reports.into_iter().reduce(VerificationReport::merge).unwrap_or_else(|| VerificationReport::new(name)))
}

/// μ_v(a,b) at every place of `support(a, b)`.
pub fn local_defects(a: &Rational, b: &Rational) -> Result<Vec<(Place, Mu8)>> {
    support(a, b)?.into_iter().map(|v| Ok((v, defect(a, b, v)?))).collect()
}

/// Π_v μ_v(a,b) over the support.
pub fn global_defect_product(a: &Rational, b: &Rational) -> Result<Mu8> {
    Ok(local_defects(a, b)?.into_iter().map(|(_, m)| m).product())
}

/// ⟨a,b⟩_v at every place of `support(a, b)`.
pub fn local_symbols(a: &Rational, b: &Rational) -> Result<Vec<(Place, i8)>> {
    support(a, b)?.into_iter().map(|v| Ok((v, hilbert(a, b, v)?))).collect()
}

/// Π_v ⟨a,b⟩_v over the support.
pub fn hilbert_product(a: &Rational, b: &Rational) -> Result<i8> {
    Ok(local_symbols(a, b)?.into_iter().map(|(_, s)| s).product())
}

/// `(a/p)` by listing the squares modulo `p`.
pub fn legendre_by_squares(a: i64, p: u64) -> i8 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        0
    } else if (1..p).any(|x| x * x % p == r) {
        1
    } else {
        -1
    }
}

/// Both sides of quadratic reciprocity for one ordered pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QrRecord {
    pub p: u64,
    pub q: u64,
    /// `(p/q)(q/p)` from squares lists.
    pub lhs: i8,
    /// `(−1)^{(p−1)(q−1)/4}`.
    pub rhs: i8,
    /// ⟨p,q⟩_v at ∞, 2, p and q, in that order.
    pub local: Vec<(Place, i8)>,
}

impl QrRecord {
    pub fn consistent(&self) -> bool {
        let at = |v: Place| self.local.iter().find(|(w, _)| *w == v).map(|(_, s)| *s);
        self.lhs == self.rhs
            && at(Place::Infinity) == Some(1)
            && at(Place::finite(2).expect("2 is prime")) == Some(self.rhs)
            && self.local.iter().map(|(_, s)| s).product::<i8>() == 1
    }
}

pub fn quadratic_reciprocity(p: u64, q: u64) -> Result<QrRecord> {
    for r in [p, q] {
        if r == 2 || !is_prime(r) {
            return Err(Error::InvalidInput(format!("{r} is not an odd prime")));
        }
    }
    if p == q {
        return Err(Error::InvalidInput(format!("primes must be distinct, got {p} twice")));
    }
    let lhs = legendre_by_squares(p as i64, q) * legendre_by_squares(q as i64, p);
    let rhs = if (p - 1) * (q - 1) / 4 % 2 == 0 { 1 } else { -1 };
    let (a, b) = (Rational::from_integer(p.into()), Rational::from_integer(q.into()));
    let mut local = Vec::with_capacity(4);
    for v in [Place::Infinity, Place::finite(2)?, Place::finite(p)?, Place::finite(q)?] {
        local.push((v, hilbert(&a, &b, v)?));
    }
    Ok(QrRecord { p, q, lhs, rhs, local })
}

/// Odd primes below `bound`.
pub fn odd_primes_below(bound: i64) -> Vec<u64> {
    (3..bound.max(3) as u64).filter(|&n| is_prime(n)).collect()
}

/// `{∞, 2}` and the odd primes up to `max`.
pub fn places_up_to(max: i64) -> Vec<Place> {
    Place::up_to(max.max(2) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn defect_product_examples() {
        assert_eq!(global_defect_product(&int(1), &int(7)).unwrap(), Mu8::ONE);
        let local = local_defects(&int(3), &int(5)).unwrap();
        let signs: Vec<_> = local.iter().map(|(v, m)| (v.to_string(), m.as_sign().unwrap())).collect();
        assert_eq!(signs, [("inf".into(), 1), ("2".into(), 1), ("3".into(), -1), ("5".into(), -1)]);
        assert_eq!(global_defect_product(&int(3), &int(5)).unwrap(), Mu8::ONE);
        let local = local_defects(&int(-1), &int(-1)).unwrap();
        assert_eq!(local.iter().map(|(_, m)| m.as_sign().unwrap()).collect::<Vec<_>>(), [-1, -1]);
        assert_eq!(global_defect_product(&int(0), &int(1)), Err(Error::ZeroArgument));
    }

    #[test]
    fn hilbert_product_examples() {
        let signs: Vec<i8> = local_symbols(&int(3), &int(5)).unwrap().into_iter().map(|(_, s)| s).collect();
        assert_eq!(signs, [1, 1, -1, -1]);
        assert_eq!(hilbert_product(&int(3), &int(5)).unwrap(), 1);
        assert_eq!(hilbert_product(&int(1), &int(-13)).unwrap(), 1);
    }

    #[test]
    fn qr_examples() {
        let r = quadratic_reciprocity(3, 7).unwrap();
        assert_eq!((r.lhs, r.rhs), (-1, -1));
        assert!(r.consistent());
        let r = quadratic_reciprocity(13, 17).unwrap();
        assert_eq!((r.lhs, r.rhs), (1, 1));
        assert!(quadratic_reciprocity(5, 5).is_err());
        assert!(quadratic_reciprocity(2, 5).is_err());
        assert!(quadratic_reciprocity(9, 5).is_err());
    }

    #[test]
    fn legendre_by_squares_examples() {
        assert_eq!(legendre_by_squares(2, 7), 1);
        assert_eq!(legendre_by_squares(3, 7), -1);
        assert_eq!(legendre_by_squares(14, 7), 0);
        assert_eq!(legendre_by_squares(-1, 5), 1);
    }

    #[test]
    fn registry_lookup() {
        let reg = LawRegistry::default();
        assert_eq!(
            reg.names(),
            [
                "bridge",
                "defect-product",
                "hilbert-reciprocity",
                "qr",
                "gauss-law",
                "transport",
                "crt",
                "cocycle",
                "factor-two",
                "oracle-agreement"
            ]
        );
        assert!(matches!(reg.run("bogus", SweepConfig::default()), Err(Error::UnknownLaw(_))));
    }

    #[test]
    fn merge_is_order_independent() {
        let a = VerificationReport {
            law: "x".into(),
            instances: 3,
            failures: vec![Failure::new("b", 1, 2)],
            elapsed: Duration::from_millis(5),
        };
        let b = VerificationReport {
            law: "x".into(),
            instances: 4,
            failures: vec![Failure::new("a", 1, 2)],
            elapsed: Duration::from_millis(7),
        };
        let ab = a.clone().merge(b.clone());
        assert_eq!(ab, b.merge(a));
        assert_eq!(ab.instances, 7);
        assert_eq!(ab.failures[0].inputs, "a");
    }
}
