//! The finite Schrödinger model on the residue sector of odd modulus `c`:
//! combs `E_r`, the unnormalized Fourier matrix, quadratic phases, Gauss sums
//! and the transport coefficient.
//!
//! Operators carry unnormalized entries in ℤ[ζ_c] together with a symbolic
//! power of `√c`, so every identity is checked exactly.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::One;

use crate::arith::{is_prime, jacobi, legendre};
use crate::cyclotomic::{Cyclotomic, Mu8};
use crate::error::{Error, Result};

/// The `c`-dimensional span of the residue combs `E_r`, `r mod c`, for odd `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueSector {
    modulus: u64,
}

impl ResidueSector {
    pub fn new(c: u64) -> Result<Self> {
        if c == 0 || c % 2 == 0 {
            return Err(Error::InvalidModulus {
                modulus: c.to_string(),
                reason: "residue sectors need an odd positive modulus",
            });
        }
        Ok(ResidueSector { modulus: c })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dimension(&self) -> usize {
        self.modulus as usize
    }

    /// Image of the lattice theta state `Σ_n δ_n`: every comb with weight 1.
    pub fn theta(&self) -> Vec<Cyclotomic> {
        vec![self.root(0); self.dimension()]
    }

    fn root(&self, k: i128) -> Cyclotomic {
        let c = self.modulus as i128;
        Cyclotomic::root_of_unity(self.modulus, k.rem_euclid(c) as i64)
            .expect("sector modulus is a valid cyclotomic order")
    }
}

/// A `c × c` matrix over ℤ[ζ_c] times `c^{scale_half / 2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteOperator {
    sector: ResidueSector,
    entries: Vec<Cyclotomic>,
    scale_half: i32,
}

impl FiniteOperator {
    fn from_fn(sector: ResidueSector, scale_half: i32, f: impl Fn(usize, usize) -> Cyclotomic) -> Self {
        let n = sector.dimension();
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        FiniteOperator { sector, entries, scale_half }
    }

    pub fn identity(sector: ResidueSector) -> Self {
        Self::permutation(sector, |r| r)
    }

    /// The parity permutation `E_r ↦ E_{−r}`.
    pub fn parity(sector: ResidueSector) -> Self {
        let c = sector.dimension();
        Self::permutation(sector, move |r| (c - r) % c)
    }

    fn permutation(sector: ResidueSector, sigma: impl Fn(usize) -> usize) -> Self {
        let zero = Cyclotomic::zero(sector.modulus).expect("valid order");
        let one = sector.root(0);
        Self::from_fn(sector, 0, |i, j| if sigma(j) == i { one.clone() } else { zero.clone() })
    }

    pub fn sector(&self) -> ResidueSector {
        self.sector
    }

    pub fn modulus(&self) -> u64 {
        self.sector.modulus
    }

    pub fn entry(&self, row: usize, col: usize) -> &Cyclotomic {
        &self.entries[row * self.sector.dimension() + col]
    }

    /// Row-major unnormalized entries.
    pub fn entries(&self) -> &[Cyclotomic] {
        &self.entries
    }

    /// Twice the exponent of `c` multiplying the entries.
    pub fn scale_half(&self) -> i32 {
        self.scale_half
    }

    /// Multiplies the unnormalized entries by an integer, keeping the scale.
    pub fn times(&self, k: i64) -> Self {
        let k = crate::arith::int(k);
        FiniteOperator {
            sector: self.sector,
            entries: self.entries.iter().map(|x| x.scale(&k)).collect(),
            scale_half: self.scale_half,
        }
    }

    /// `self ∘ other`: matrix product, scale exponents add.
    pub fn compose(&self, other: &FiniteOperator) -> Result<FiniteOperator> {
        self.check_sector(other.sector)?;
        let n = self.sector.dimension();
        let c = self.sector.modulus;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            let row = &self.entries[i * n..(i + 1) * n];
            for j in 0..n {
                let pairs = row
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(k, x)| (x, &other.entries[k * n + j]))
                    .filter(|(_, y)| !y.is_zero());
                entries.push(Cyclotomic::sum_of_products(c, pairs)?);
            }
        }
        Ok(FiniteOperator { sector: self.sector, entries, scale_half: self.scale_half + other.scale_half })
    }

    pub fn conjugate_transpose(&self) -> FiniteOperator {
        Self::from_fn(self.sector, self.scale_half, |i, j| self.entry(j, i).conjugate())
    }

    /// Unnormalized action on a coordinate vector in the comb basis.
    pub fn apply(&self, v: &[Cyclotomic]) -> Result<Vec<Cyclotomic>> {
        let n = self.sector.dimension();
        if v.len() != n {
            return Err(Error::InvalidInput(format!("vector of length {} in a sector of dimension {n}", v.len())));
        }
        (0..n)
            .map(|i| {
                let pairs = self.entries[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .filter(|(x, y)| !x.is_zero() && !y.is_zero());
                Cyclotomic::sum_of_products(self.sector.modulus, pairs)
            })
            .collect()
    }

    fn check_sector(&self, other: ResidueSector) -> Result<()> {
        if self.sector != other {
            return Err(Error::InvalidInput(format!(
                "operators on sectors of modulus {} and {}",
                self.sector.modulus, other.modulus
            )));
        }
        Ok(())
    }
}

impl fmt::Display for FiniteOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "c^({}/2) *", self.scale_half)?;
        let n = self.sector.dimension();
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "  {}", row.join("  "))?;
        }
        Ok(())
    }
}

/// `𝒢(a, c) = Σ_{x mod c} ζ_c^{a x²}`.
pub fn gauss_sum(a: i64, c: u64) -> Result<Cyclotomic> {
    let sector = ResidueSector::new(c)?;
    let m = c as i128;
    let terms = (0..m).map(|x| ((a as i128 * (x * x % m)).rem_euclid(m) as i64, BigInt::one()));
    Cyclotomic::from_powers(sector.modulus, terms)
}

/// Diagonal operator `E_r ↦ ζ_c^{a r²} E_r`.
pub fn quadratic_phase_operator(a: i64, sector: ResidueSector) -> FiniteOperator {
    let zero = Cyclotomic::zero(sector.modulus).expect("valid order");
    FiniteOperator::from_fn(sector, 0, |i, j| {
        if i == j {
            let r = i as i128;
            sector.root(a as i128 * r * r)
        } else {
            zero.clone()
        }
    })
}

/// Unnormalized Fourier matrix `(ζ_c^{rm})_{m,r}` at scale `c^{−1/2}`.
pub fn finite_fourier(sector: ResidueSector) -> FiniteOperator {
    FiniteOperator::from_fn(sector, -1, |m, r| sector.root(m as i128 * r as i128))
}

/// The unnormalized coefficient of the unshifted residue class after the
/// quadratic phase and the Fourier matrix act on the theta state.
pub fn transport_coefficient(a: i64, c: u64) -> Result<Cyclotomic> {
    let sector = ResidueSector::new(c)?;
    let g = a.unsigned_abs().gcd(&c);
    if g != 1 {
        return Err(Error::NonCoprime { a, c, gcd: g });
    }
    let word = finite_fourier(sector).compose(&quadratic_phase_operator(a, sector))?;
    let image = word.apply(&sector.theta())?;
    Ok(image.into_iter().next().expect("sector is nonempty"))
}

/// `ε_c`: 1 for `c ≡ 1 (mod 4)`, `i` for `c ≡ 3 (mod 4)`.
pub fn epsilon(c: u64) -> Result<Mu8> {
    ResidueSector::new(c)?;
    Ok(if c % 4 == 1 { Mu8::ONE } else { Mu8::new(2) })
}

/// Outcome of checking `𝒢(1, c) = ε_c √c`.
#[derive(Debug, Clone)]
pub struct GaussEvaluation {
    pub modulus: u64,
    pub square: Cyclotomic,
    pub square_ok: bool,
    pub norm_ok: bool,
    pub numeric: Complex64,
    pub numeric_error: f64,
}

/// Numeric tolerance for the sign of `𝒢(1, c)`.
pub const GAUSS_NUMERIC_TOLERANCE: f64 = 1e-6;

impl GaussEvaluation {
    pub fn passed(&self) -> bool {
        self.square_ok && self.norm_ok && self.numeric_error < GAUSS_NUMERIC_TOLERANCE
    }
}

pub fn verify_gauss_evaluation(c: u64) -> Result<GaussEvaluation> {
    let g = gauss_sum(1, c)?;
    let eps = epsilon(c)?;
    let eps_sq = eps.pow(2).as_sign().expect("ε² is ±1") as i64;
    let square = &g * &g;
    let square_ok = square == Cyclotomic::from_integer(c, eps_sq * c as i64)?;
    let norm_ok = &g.conjugate() * &g == Cyclotomic::from_integer(c, c as i64)?;
    let numeric = g.approx_complex();
    let numeric_error = (numeric - eps.approx_complex() * (c as f64).sqrt()).norm();
    Ok(GaussEvaluation { modulus: c, square, square_ok, norm_ok, numeric, numeric_error })
}

/// Outcome of checking `𝒢(1, pq) = 𝒢(q, p) 𝒢(p, q)` and the sign it implies.
#[derive(Debug, Clone)]
pub struct CrtFactorization {
    pub p: u64,
    pub q: u64,
    pub factorization_ok: bool,
    /// `(p/q)(q/p)`.
    pub legendre_sign: i8,
    /// `ε_{pq} / (ε_p ε_q)`.
    pub epsilon_quotient: Mu8,
}

impl CrtFactorization {
    pub fn passed(&self) -> bool {
        self.factorization_ok && Mu8::from_sign(self.legendre_sign) == self.epsilon_quotient
    }
}

pub fn verify_crt_factorization(p: u64, q: u64) -> Result<CrtFactorization> {
    for r in [p, q] {
        if r == 2 || !is_prime(r) {
            return Err(Error::InvalidInput(format!("{r} is not an odd prime")));
        }
    }
    if p == q {
        return Err(Error::InvalidInput(format!("primes must be distinct, got {p} twice")));
    }
    let pq = p * q;
    let whole = gauss_sum(1, pq)?;
    let split = gauss_sum(q as i64, p)?.embed(pq)? * gauss_sum(p as i64, q)?.embed(pq)?;
    Ok(CrtFactorization {
        p,
        q,
        factorization_ok: whole == split,
        legendre_sign: legendre(p as i64, q)? * legendre(q as i64, p)?,
        epsilon_quotient: epsilon(pq)? / (epsilon(p)? * epsilon(q)?),
    })
}

/// `𝒢(a, c) = (a/c) 𝒢(1, c)` for `gcd(a, c) = 1`.
pub fn numerator_law_holds(a: i64, c: u64) -> Result<bool> {
    let j = jacobi(a, c)?;
    Ok(gauss_sum(a, c)? == gauss_sum(1, c)?.scale(&crate::arith::int(j as i64)))
}
