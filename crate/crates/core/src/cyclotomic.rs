//! Roots of unity and exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! Scalars produced by braidings are always roots of unity, so they are kept
//! as `(order, exponent)` pairs ([`RootOfUnity`]). Field elements
//! ([`CyclotomicNumber`]) are only materialised when linear algebra needs
//! sums. Elements are stored in the power basis `1, ζ, …, ζ^{φ(N)-1}` modulo
//! the `N`-th cyclotomic polynomial.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclotomicError {
    #[error("root of unity of order {order} does not embed into conductor {conductor}")]
    ConductorMismatch { order: u64, conductor: u64 },
    #[error("mixed conductors {0} and {1}")]
    MixedConductors(u64, u64),
    #[error("division by zero in Q(ζ_{0})")]
    DivisionByZero(u64),
    #[error("invalid modular specification: {0}")]
    InvalidModularSpec(String),
    #[error("prime {0} divides a denominator of the matrix")]
    BadPrime(u64),
}

/// `ζ_order^exponent` for a fixed primitive `order`-th root of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity {
    order: u64,
    exponent: u64,
}

impl RootOfUnity {
    pub fn new(order: u64, exponent: i64) -> Self {
        assert!(order >= 1, "root of unity needs a positive order");
        let exponent = exponent.rem_euclid(order as i64) as u64;
        Self { order, exponent }
    }

    pub fn one(order: u64) -> Self {
        Self::new(order, 0)
    }

    /// `-1`, living at order 2.
    pub fn minus_one() -> Self {
        Self::new(2, 1)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_one(&self) -> bool {
        self.exponent == 0
    }

    /// Exact multiplicative order of the value.
    pub fn multiplicative_order(&self) -> u64 {
        self.order / self.order.gcd(&self.exponent)
    }

    /// Same value with the smallest possible order.
    pub fn normalized(&self) -> Self {
        let g = self.order.gcd(&self.exponent);
        Self {
            order: self.order / g,
            exponent: self.exponent / g,
        }
    }

    /// Equality of the underlying complex numbers.
    pub fn value_eq(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }

    /// Re-expresses the value at an order that is a multiple of the current one.
    pub fn at_order(&self, order: u64) -> Result<Self, CyclotomicError> {
        if order % self.order != 0 {
            return Err(CyclotomicError::ConductorMismatch {
                order: self.order,
                conductor: order,
            });
        }
        Ok(Self {
            order,
            exponent: self.exponent * (order / self.order),
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.lcm(&other.order);
        let a = self.exponent * (order / self.order);
        let b = other.exponent * (order / other.order);
        Self {
            order,
            exponent: (a + b) % order,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            order: self.order,
            exponent: (self.order - self.exponent) % self.order,
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        let exp = (self.exponent as i128 * e as i128).rem_euclid(self.order as i128) as u64;
        Self {
            order: self.order,
            exponent: exp,
        }
    }

    pub fn neg(&self) -> Self {
        self.mul(&Self::minus_one())
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.exponent, self.order) {
            (0, _) => write!(f, "1"),
            (e, o) if 2 * e == o => write!(f, "-1"),
            (e, o) => write!(f, "ζ{o}^{e}"),
        }
    }
}

/// The cyclotomic polynomial `Φ_N` as integer coefficients, lowest degree first.
///
/// Computed by dividing `x^N - 1` by `Φ_d` for every proper divisor `d` of `N`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic polynomial needs N >= 1");
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

/// Exact quotient of `num` by the monic polynomial `den`.
fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "division is not exact");
    q
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub fn prime_factors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

/// Shared data for `Q(ζ_N)`: the modulus and reduced powers of `ζ`.
#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u64,
    degree: usize,
    modulus: Vec<i64>,
    /// `powers[k]` is `x^k mod Φ_N` for `k < max(N, 2φ(N) - 1)`.
    powers: Vec<Vec<i64>>,
}

impl CyclotomicField {
    /// Cached field for conductor `n`.
    pub fn get(n: u64) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("field cache poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(Self::build(n)))
            .clone()
    }

    fn build(n: u64) -> Self {
        let modulus = cyclotomic_polynomial(n);
        let degree = modulus.len() - 1;
        let count = (n as usize).max(2 * degree);
        let mut powers = Vec::with_capacity(count);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..count {
            powers.push(cur.clone());
            // multiply by x and reduce
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..degree {
                    cur[i] -= top * modulus[i];
                }
            }
        }
        Self {
            conductor: n,
            degree,
            modulus,
            powers,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    /// Coefficients of `ζ^k` in the power basis.
    pub fn power(&self, k: u64) -> &[i64] {
        &self.powers[(k % self.conductor) as usize]
    }

    fn reduce_slice(&self, prod: &mut Vec<BigRational>) {
        let d = self.degree;
        for k in (d..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[k], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            // x^k = x^{k-d} * x^d and x^d = -(modulus[0..d])
            for i in 0..d {
                let m = self.modulus[i];
                if m != 0 {
                    prod[k - d + i] -= &c * BigRational::from_integer(BigInt::from(m));
                }
            }
        }
        prod.truncate(d);
    }
}

/// An element of `Q(ζ_N)` in the power basis modulo `Φ_N`.
#[derive(Clone)]
pub struct CyclotomicNumber {
    field: Arc<CyclotomicField>,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(ζ_{})[", self.conductor())?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.conductor() == other.conductor() && self.coeffs == other.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl CyclotomicNumber {
    pub fn zero(conductor: u64) -> Self {
        let field = CyclotomicField::get(conductor);
        let coeffs = vec![BigRational::zero(); field.degree];
        Self { field, coeffs }
    }

    pub fn one(conductor: u64) -> Self {
        Self::from_rational(conductor, BigRational::one())
    }

    pub fn from_rational(conductor: u64, q: BigRational) -> Self {
        let mut z = Self::zero(conductor);
        z.coeffs[0] = q;
        z
    }

    pub fn from_integer(conductor: u64, k: i64) -> Self {
        Self::from_rational(conductor, BigRational::from_integer(BigInt::from(k)))
    }

    /// Builds an element from coefficients in the power basis; longer inputs are reduced.
    pub fn from_coefficients(conductor: u64, coeffs: Vec<BigRational>) -> Self {
        let field = CyclotomicField::get(conductor);
        let mut c = coeffs;
        if c.len() < field.degree {
            c.resize(field.degree, BigRational::zero());
        } else {
            field.reduce_slice(&mut c);
        }
        Self { field, coeffs: c }
    }

    /// `Σ count · ζ_N^exponent`.
    pub fn from_root_counts(conductor: u64, terms: &[(u64, i64)]) -> Self {
        let field = CyclotomicField::get(conductor);
        let mut acc = vec![0i64; field.degree];
        for &(e, c) in terms {
            if c == 0 {
                continue;
            }
            for (a, &p) in acc.iter_mut().zip(field.power(e)) {
                *a += c * p;
            }
        }
        let coeffs = acc
            .into_iter()
            .map(|a| BigRational::from_integer(BigInt::from(a)))
            .collect();
        Self { field, coeffs }
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.conductor(),
            other.conductor(),
            "arithmetic across different cyclotomic fields"
        );
    }

    pub fn inverse(&self) -> Result<Self, CyclotomicError> {
        if self.is_zero() {
            return Err(CyclotomicError::DivisionByZero(self.conductor()));
        }
        // extended Euclid: s * a + t * Φ = g, g a nonzero constant
        let modulus: Vec<BigRational> = self
            .field
            .modulus
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        let mut r0 = trim(modulus);
        let mut r1 = trim(self.coeffs.clone());
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        // r1 is a nonzero constant since Φ_N is irreducible
        let c = r1[0].clone();
        let coeffs = s1.into_iter().map(|x| x / &c).collect();
        Ok(Self::from_coefficients(self.conductor(), coeffs))
    }

    /// Non-negative integer power.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.conductor());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (vec![], trim(rem));
    }
    let lead = &b[db];
    let mut q = vec![BigRational::zero(); rem.len() - db];
    for k in (0..q.len()).rev() {
        let c = &rem[k + db] / lead;
        if !c.is_zero() {
            for (i, y) in b.iter().enumerate() {
                rem[k + i] -= &c * y;
            }
        }
        q[k] = c;
    }
    rem.truncate(db);
    (trim(q), trim(rem))
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: Self) -> CyclotomicNumber {
        self.check(rhs);
        CyclotomicNumber {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: Self) -> CyclotomicNumber {
        self.check(rhs);
        CyclotomicNumber {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: Self) -> CyclotomicNumber {
        self.check(rhs);
        let d = self.field.degree;
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        self.field.reduce_slice(&mut prod);
        CyclotomicNumber {
            field: self.field.clone(),
            coeffs: prod,
        }
    }
}

/// The field element `ζ_N^{(N/order)·exponent}`.
pub fn embed(a: &RootOfUnity, conductor: u64) -> Result<CyclotomicNumber, CyclotomicError> {
    let lifted = a.at_order(conductor)?;
    Ok(CyclotomicNumber::from_root_counts(
        conductor,
        &[(lifted.exponent(), 1)],
    ))
}

/// A prime `q ≡ 1 mod N` together with an element of exact order `N` in `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularSpec {
    pub conductor: u64,
    pub prime: u64,
    pub zeta_image: u64,
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1u64 % q;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, q);
        }
        b = mul_mod(b, b, q);
        e >>= 1;
    }
    acc
}

pub(crate) fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

impl ModularSpec {
    /// The `index`-th prime `q ≡ 1 mod N` above `2^30`, with a chosen primitive `N`-th root.
    pub fn find(conductor: u64, index: usize) -> Self {
        let mut q = (1u64 << 30) / conductor * conductor + 1;
        let mut seen = 0;
        loop {
            if is_prime(q) {
                if seen == index {
                    break;
                }
                seen += 1;
            }
            q += conductor;
        }
        let primes = prime_factors(conductor);
        let cofactor = (q - 1) / conductor;
        let zeta_image = (2..q)
            .map(|g| pow_mod(g, cofactor, q))
            .find(|&z| primes.iter().all(|&l| pow_mod(z, conductor / l, q) != 1))
            .expect("F_q^* is cyclic");
        Self {
            conductor,
            prime: q,
            zeta_image,
        }
    }

    pub fn validate(&self) -> Result<(), CyclotomicError> {
        let q = self.prime;
        let n = self.conductor;
        if !is_prime(q) || q >= 1 << 62 {
            return Err(CyclotomicError::InvalidModularSpec(format!(
                "{q} is not a usable prime"
            )));
        }
        if (q - 1) % n != 0 {
            return Err(CyclotomicError::InvalidModularSpec(format!(
                "{q} is not 1 mod {n}"
            )));
        }
        if pow_mod(self.zeta_image, n, q) != 1 {
            return Err(CyclotomicError::InvalidModularSpec(format!(
                "zeta image does not satisfy z^{n} = 1"
            )));
        }
        for l in prime_factors(n) {
            if pow_mod(self.zeta_image, n / l, q) == 1 {
                return Err(CyclotomicError::InvalidModularSpec(format!(
                    "zeta image has order dividing {}",
                    n / l
                )));
            }
        }
        Ok(())
    }

    fn reduce_rational(&self, r: &BigRational) -> Result<u64, CyclotomicError> {
        let q = BigInt::from(self.prime);
        let num = r.numer().mod_floor(&q).to_u64().expect("reduced");
        let den = r.denom().mod_floor(&q).to_u64().expect("reduced");
        if den == 0 {
            return Err(CyclotomicError::BadPrime(self.prime));
        }
        Ok(mul_mod(num, pow_mod(den, self.prime - 2, self.prime), self.prime))
    }

    /// Image of a field element under `ζ ↦ zeta_image`.
    pub fn reduce(&self, x: &CyclotomicNumber) -> Result<u64, CyclotomicError> {
        if x.conductor() != self.conductor {
            return Err(CyclotomicError::MixedConductors(x.conductor(), self.conductor));
        }
        let mut acc = 0u64;
        let mut zpow = 1u64;
        for c in x.coefficients() {
            if !c.is_zero() {
                let v = self.reduce_rational(c)?;
                acc = (acc + mul_mod(v, zpow, self.prime)) % self.prime;
            }
            zpow = mul_mod(zpow, self.zeta_image, self.prime);
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMode {
    Exact,
    Modular(ModularSpec),
}

/// A dense matrix over a single cyclotomic field.
#[derive(Debug, Clone)]
pub struct CycloMatrix {
    conductor: u64,
    cols: usize,
    rows: Vec<Vec<CyclotomicNumber>>,
}

impl CycloMatrix {
    pub fn new(
        conductor: u64,
        cols: usize,
        rows: Vec<Vec<CyclotomicNumber>>,
    ) -> Result<Self, CyclotomicError> {
        for row in &rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            if let Some(x) = row.iter().find(|x| x.conductor() != conductor) {
                return Err(CyclotomicError::MixedConductors(conductor, x.conductor()));
            }
        }
        Ok(Self {
            conductor,
            cols,
            rows,
        })
    }

    pub fn zeros(conductor: u64, rows: usize, cols: usize) -> Self {
        let z = CyclotomicNumber::zero(conductor);
        Self {
            conductor,
            cols,
            rows: vec![vec![z; cols]; rows],
        }
    }

    pub fn identity(conductor: u64, n: usize) -> Self {
        let mut m = Self::zeros(conductor, n, n);
        for i in 0..n {
            m.rows[i][i] = CyclotomicNumber::one(conductor);
        }
        m
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<CyclotomicNumber>] {
        &self.rows
    }
}

/// Rank of a matrix over `Q(ζ_N)`.
///
/// Exact mode runs fraction-free elimination over `Z[ζ_N]`; modular mode
/// eliminates over `F_q`, which gives a lower bound that is tight for all
/// but finitely many primes.
pub fn rank(matrix: &CycloMatrix, mode: RankMode) -> Result<usize, CyclotomicError> {
    match mode {
        RankMode::Exact => Ok(exact_rank(matrix)),
        RankMode::Modular(spec) => {
            spec.validate()?;
            if spec.conductor != matrix.conductor {
                return Err(CyclotomicError::MixedConductors(
                    matrix.conductor,
                    spec.conductor,
                ));
            }
            let mut rows = Vec::with_capacity(matrix.nrows());
            for row in matrix.rows() {
                rows.push(row.iter().map(|x| spec.reduce(x)).collect::<Result<Vec<_>, _>>()?);
            }
            Ok(modular_rank(rows, spec.prime))
        }
    }
}

/// Rank over `F_q` of a matrix with entries already reduced mod `q`.
pub fn modular_rank(mut rows: Vec<Vec<u64>>, q: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = pow_mod(rows[rank][col], q - 2, q);
        let pivot_row: Vec<u64> = rows[rank].iter().map(|&x| mul_mod(x, inv, q)).collect();
        for r in rank + 1..rows.len() {
            let f = rows[r][col];
            if f == 0 {
                continue;
            }
            for c in col..ncols {
                let sub = mul_mod(f, pivot_row[c], q);
                rows[r][c] = (rows[r][c] + q - sub) % q;
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// Element of `Z[ζ_N]` in the power basis.
type IntElem = Vec<BigInt>;

fn int_is_zero(x: &IntElem) -> bool {
    x.iter().all(Zero::is_zero)
}

fn int_size(x: &IntElem) -> u64 {
    x.iter().map(|c| c.bits() + u64::from(!c.is_zero())).sum()
}

fn int_mul(field: &CyclotomicField, a: &IntElem, b: &IntElem) -> IntElem {
    let d = field.degree;
    let mut prod = vec![BigInt::zero(); 2 * d - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] += x * y;
            }
        }
    }
    for k in (d..prod.len()).rev() {
        let c = std::mem::take(&mut prod[k]);
        if c.is_zero() {
            continue;
        }
        for i in 0..d {
            let m = field.modulus[i];
            if m != 0 {
                prod[k - d + i] -= &c * m;
            }
        }
    }
    prod.truncate(d);
    prod
}

/// Clears denominators row by row and runs cross-multiplying elimination,
/// dividing every updated row by the integer content of its coefficients.
fn exact_rank(matrix: &CycloMatrix) -> usize {
    let field = CyclotomicField::get(matrix.conductor);
    let ncols = matrix.cols;
    let mut rows: Vec<Vec<IntElem>> = matrix
        .rows
        .iter()
        .map(|row| {
            let den = row
                .iter()
                .flat_map(|x| x.coeffs.iter())
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            row.iter()
                .map(|x| {
                    x.coeffs
                        .iter()
                        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..ncols {
        // smallest nonzero pivot keeps coefficient growth down
        let pivot = (rank..rows.len())
            .filter(|&r| !int_is_zero(&rows[r][col]))
            .min_by_key(|&r| int_size(&rows[r][col]));
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let prow = &head[rank];
        let pv = &prow[col];
        for row in tail.iter_mut() {
            if int_is_zero(&row[col]) {
                continue;
            }
            let f = row[col].clone();
            for c in col..ncols {
                let a = int_mul(&field, pv, &row[c]);
                let b = if int_is_zero(&prow[c]) {
                    None
                } else {
                    Some(int_mul(&field, &f, &prow[c]))
                };
                row[c] = match b {
                    Some(b) => a.iter().zip(&b).map(|(x, y)| x - y).collect(),
                    None => a,
                };
            }
            remove_content(row);
        }
        rank += 1;
    }
    rank
}

fn remove_content(row: &mut [IntElem]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        for c in x {
            if !c.is_zero() {
                g = g.gcd(c);
                if g.is_one() {
                    return;
                }
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        for c in x.iter_mut() {
            if !c.is_zero() {
                *c = &*c / &g;
            }
        }
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => write!(f, "ζ^{i}")?,
                _ => write!(f, "{a}·ζ^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
