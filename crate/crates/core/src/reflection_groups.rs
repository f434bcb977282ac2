//! The imprimitive reflection groups `G(m,p,n)`, their reflections, the
//! character `λ`, and the Yetter–Drinfeld module spanned by the reflections.
//!
//! An element `θ^ν σ` acts by `x_i ↦ θ^{ν_i} x_{σ(i)}` with `θ` a primitive
//! `m`-th root of unity. Indices are 0-based internally and printed 1-based.
//! Scalars of `λ` live at order `L = lcm(2, m)` so that `-θ^k` is a power of
//! one root of unity.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{euler_phi, CyclotomicNumber, RootOfUnity};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid parameters G({m},{p},{n}): need m >= 1, n >= 1 and p | m")]
    InvalidParams { m: u64, p: u64, n: usize },
    #[error("element is not a reflection")]
    NotAReflection,
    #[error("reflection {0} does not belong to the group")]
    NotInGroup(String),
    #[error("coroot image is not proportional to the target coroot")]
    NotProportional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupParams {
    pub m: u64,
    pub p: u64,
    pub n: usize,
}

impl GroupParams {
    pub fn new(m: u64, p: u64, n: usize) -> Result<Self, GroupError> {
        if m == 0 || p == 0 || n == 0 || m % p != 0 {
            return Err(GroupError::InvalidParams { m, p, n });
        }
        Ok(Self { m, p, n })
    }

    /// `m^n n! / p`.
    pub fn order(&self) -> u128 {
        let fact: u128 = (1..=self.n as u128).product();
        (self.m as u128).pow(self.n as u32) * fact / self.p as u128
    }

    /// `L = lcm(2, m)`.
    pub fn scalar_order(&self) -> u64 {
        self.m.lcm(&2)
    }

    /// `n (m (n-1)/2 + m/p - 1)`.
    pub fn yd_dimension(&self) -> u64 {
        let n = self.n as u64;
        self.m * n * (n - 1) / 2 + n * (self.m / self.p - 1)
    }

    /// Number of simple summands predicted for `Y_G`: `m/p`, plus one when
    /// `n = 2` and `p` is even.
    pub fn expected_rank(&self) -> u64 {
        if self.n == 2 && self.p % 2 == 0 {
            self.m / self.p + 1
        } else if self.n == 1 {
            self.m / self.p - 1
        } else {
            self.m / self.p
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.m == self.m
            && g.nu.len() == self.n
            && g.nu.iter().sum::<u64>() % self.p == 0
    }
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{},{})", self.m, self.p, self.n)
    }
}

/// `θ^ν σ`: `x_i ↦ θ^{ν_i} x_{σ(i)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    m: u64,
    nu: Vec<u64>,
    sigma: Vec<usize>,
}

impl GroupElement {
    pub fn new(m: u64, nu: Vec<i64>, sigma: Vec<usize>) -> Self {
        assert_eq!(nu.len(), sigma.len());
        let mut seen = vec![false; sigma.len()];
        for &s in &sigma {
            assert!(s < sigma.len() && !seen[s], "sigma is not a permutation");
            seen[s] = true;
        }
        let nu = nu.into_iter().map(|x| x.rem_euclid(m as i64) as u64).collect();
        Self { m, nu, sigma }
    }

    pub fn identity(m: u64, n: usize) -> Self {
        Self {
            m,
            nu: vec![0; n],
            sigma: (0..n).collect(),
        }
    }

    pub fn nu(&self) -> &[u64] {
        &self.nu
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn is_identity(&self) -> bool {
        self.nu.iter().all(|&x| x == 0) && self.sigma.iter().enumerate().all(|(i, &s)| i == s)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.nu.len();
        let nu = (0..n)
            .map(|i| (other.nu[i] + self.nu[other.sigma[i]]) % self.m)
            .collect();
        let sigma = (0..n).map(|i| self.sigma[other.sigma[i]]).collect();
        Self { m: self.m, nu, sigma }
    }

    pub fn inverse(&self) -> Self {
        let n = self.nu.len();
        let mut nu = vec![0; n];
        let mut sigma = vec![0; n];
        for i in 0..n {
            nu[self.sigma[i]] = (self.m - self.nu[i]) % self.m;
            sigma[self.sigma[i]] = i;
        }
        Self { m: self.m, nu, sigma }
    }

    pub fn conjugate(&self, h: &Self) -> Self {
        self.mul(h).mul(&self.inverse())
    }

    /// Image of `x_i`: `(coefficient exponent of θ, index)`.
    pub fn apply(&self, i: usize) -> (u64, usize) {
        (self.nu[i], self.sigma[i])
    }

    /// Recognizes the element as a reflection, if it is one.
    pub fn as_reflection(&self) -> Option<Reflection> {
        let n = self.nu.len();
        let moved: Vec<usize> = (0..n).filter(|&i| self.sigma[i] != i).collect();
        match moved.as_slice() {
            [] => {
                let nz: Vec<usize> = (0..n).filter(|&i| self.nu[i] != 0).collect();
                match nz.as_slice() {
                    [i] => Some(Reflection::Diagonal { i: *i, k: self.nu[*i] }),
                    _ => None,
                }
            }
            [i, j] => {
                let others_zero = (0..n).all(|t| t == *i || t == *j || self.nu[t] == 0);
                if others_zero && (self.nu[*i] + self.nu[*j]) % self.m == 0 {
                    Some(Reflection::Transposition {
                        i: *i,
                        j: *j,
                        k: self.nu[*i],
                    })
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

/// `s_i^k` (`x_i ↦ θ^k x_i`) or `θ^k(ij)` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Reflection {
    Transposition { i: usize, j: usize, k: u64 },
    Diagonal { i: usize, k: u64 },
}

impl Reflection {
    pub fn diagonal(m: u64, i: usize, k: i64) -> Self {
        Reflection::Diagonal {
            i,
            k: k.rem_euclid(m as i64) as u64,
        }
    }

    /// `θ^k(ab)` for any distinct `a, b`; `θ^k(ba) = θ^{-k}(ab)`.
    pub fn transposition(m: u64, a: usize, b: usize, k: i64) -> Self {
        assert_ne!(a, b);
        let (i, j, k) = if a < b { (a, b, k) } else { (b, a, -k) };
        Reflection::Transposition {
            i,
            j,
            k: k.rem_euclid(m as i64) as u64,
        }
    }

    pub fn element(&self, params: &GroupParams) -> GroupElement {
        let n = params.n;
        let m = params.m;
        let mut nu = vec![0u64; n];
        let mut sigma: Vec<usize> = (0..n).collect();
        match *self {
            Reflection::Diagonal { i, k } => nu[i] = k % m,
            Reflection::Transposition { i, j, k } => {
                nu[i] = k % m;
                nu[j] = (m - k % m) % m;
                sigma.swap(i, j);
            }
        }
        GroupElement { m, nu, sigma }
    }

    pub fn belongs_to(&self, params: &GroupParams) -> bool {
        match *self {
            Reflection::Diagonal { i, k } => i < params.n && k % params.m != 0 && k % params.p == 0,
            Reflection::Transposition { i, j, k } => i < j && j < params.n && k < params.m,
        }
    }

    /// Multiplicative order as a group element.
    pub fn order(&self, m: u64) -> u64 {
        match *self {
            Reflection::Diagonal { k, .. } => m / k.gcd(&m),
            Reflection::Transposition { .. } => 2,
        }
    }
}

impl fmt::Display for Reflection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Reflection::Diagonal { i, k } => write!(f, "s{}^{}", i + 1, k),
            Reflection::Transposition { i, j, k } => write!(f, "θ^{}({}{})", k, i + 1, j + 1),
        }
    }
}

/// All reflections: transposition type first (by `i`, `j`, `k`), then diagonal type.
pub fn enumerate_reflections(params: &GroupParams) -> Vec<Reflection> {
    let mut out = Vec::new();
    for i in 0..params.n {
        for j in i + 1..params.n {
            for k in 0..params.m {
                out.push(Reflection::Transposition { i, j, k });
            }
        }
    }
    for i in 0..params.n {
        for k in (params.p..params.m).step_by(params.p as usize) {
            out.push(Reflection::Diagonal { i, k });
        }
    }
    out
}

/// Reflection counts per order `d`.
pub fn reflection_census(params: &GroupParams) -> BTreeMap<u64, usize> {
    let mut census = BTreeMap::new();
    for r in enumerate_reflections(params) {
        *census.entry(r.order(params.m)).or_insert(0) += 1;
    }
    census
}

/// `g s g^{-1}`, recognized again as a reflection.
pub fn conjugate_reflection(params: &GroupParams, g: &GroupElement, s: &Reflection) -> Reflection {
    g.conjugate(&s.element(params))
        .as_reflection()
        .expect("conjugates of reflections are reflections")
}

/// Root `α_s` and coroot `α_s^*` in `Q(ζ_L)`, with `s x = x - (α_s^*, x) α_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootCorootPair {
    pub root: Vec<CyclotomicNumber>,
    pub coroot: Vec<CyclotomicNumber>,
}

fn theta(params: &GroupParams, k: i64) -> RootOfUnity {
    let l = params.scalar_order();
    RootOfUnity::new(l, k * (l / params.m) as i64)
}

fn embed_l(params: &GroupParams, r: &RootOfUnity) -> CyclotomicNumber {
    crate::cyclotomic::embed(r, params.scalar_order()).expect("order divides L")
}

/// `α^*_{s_i^k} = y_i`, `α_{s_i^k} = (1 - θ^k) x_i`;
/// `α^*_{θ^k(ij)} = y_i - θ^{-k} y_j`, `α_{θ^k(ij)} = x_i - θ^k x_j`.
pub fn root_coroot(params: &GroupParams, s: &Reflection) -> RootCorootPair {
    let l = params.scalar_order();
    let zero = CyclotomicNumber::zero(l);
    let one = CyclotomicNumber::one(l);
    let mut root = vec![zero.clone(); params.n];
    let mut coroot = vec![zero; params.n];
    match *s {
        Reflection::Diagonal { i, k } => {
            coroot[i] = one.clone();
            root[i] = &one - &embed_l(params, &theta(params, k as i64));
        }
        Reflection::Transposition { i, j, k } => {
            coroot[i] = one.clone();
            coroot[j] = -&embed_l(params, &theta(params, -(k as i64)));
            root[i] = one;
            root[j] = -&embed_l(params, &theta(params, k as i64));
        }
    }
    RootCorootPair { root, coroot }
}

/// Monomial functional: entries are zero or powers of `ζ_L`.
type Functional = Vec<Option<u64>>;

fn coroot_monomial(params: &GroupParams, s: &Reflection) -> Functional {
    let l = params.scalar_order();
    let mut f = vec![None; params.n];
    match *s {
        Reflection::Diagonal { i, .. } => f[i] = Some(0),
        Reflection::Transposition { i, j, k } => {
            f[i] = Some(0);
            // -θ^{-k}
            let e = (l / 2 + l - (k * (l / params.m)) % l) % l;
            f[j] = Some(e);
        }
    }
    f
}

/// Dual action `(g·f)(x) = f(g^{-1} x)`, i.e. `g·y_i = θ^{-ν_i} y_{σ(i)}`.
fn act_on_functional(params: &GroupParams, g: &GroupElement, f: &Functional) -> Functional {
    let l = params.scalar_order();
    let step = l / params.m;
    let mut out = vec![None; params.n];
    for (i, c) in f.iter().enumerate() {
        if let Some(e) = c {
            let shift = (l - (g.nu[i] * step) % l) % l;
            out[g.sigma[i]] = Some((e + shift) % l);
        }
    }
    out
}

/// `λ(g, s)` with `g ▷ α_s^* = λ(g, s) α^*_{g s g^{-1}}`, as a root of unity of order dividing `L`.
pub fn lambda(params: &GroupParams, g: &GroupElement, s: &Reflection) -> Result<RootOfUnity, GroupError> {
    let l = params.scalar_order();
    let target = conjugate_reflection(params, g, s);
    let image = act_on_functional(params, g, &coroot_monomial(params, s));
    let want = coroot_monomial(params, &target);
    let mut ratio: Option<u64> = None;
    for (a, b) in image.iter().zip(&want) {
        match (a, b) {
            (None, None) => {}
            (Some(x), Some(y)) => {
                let r = (x + l - y) % l;
                if ratio.is_some_and(|q| q != r) {
                    return Err(GroupError::NotProportional);
                }
                ratio = Some(r);
            }
            _ => return Err(GroupError::NotProportional),
        }
    }
    let r = ratio.ok_or(GroupError::NotProportional)?;
    Ok(RootOfUnity::new(l, r as i64))
}

/// Monomial braiding on `Y ⊗ Y`: `Ψ(r_a ⊗ r_b) = scalar · r_target ⊗ r_a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupBraiding {
    dim: usize,
    scalar_order: u64,
    target: Vec<usize>,
    scalar: Vec<u64>,
}

impl GroupBraiding {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scalar_order(&self) -> u64 {
        self.scalar_order
    }

    /// `Ψ(r_a ⊗ r_b) = ζ_L^e r_c ⊗ r_a`, returned as `(c, a, e)`.
    pub fn apply(&self, a: usize, b: usize) -> (usize, usize, u64) {
        let idx = a * self.dim + b;
        (self.target[idx], a, self.scalar[idx])
    }

    pub fn scalar(&self, a: usize, b: usize) -> RootOfUnity {
        RootOfUnity::new(self.scalar_order, self.scalar[a * self.dim + b] as i64)
    }

    /// `Ψ²(r_a ⊗ r_b)` as `(c, d, e)`.
    pub fn apply_squared(&self, a: usize, b: usize) -> (usize, usize, u64) {
        let (c, d, e1) = self.apply(a, b);
        let (x, y, e2) = self.apply(c, d);
        (x, y, (e1 + e2) % self.scalar_order)
    }

    /// `(Ψ⊗Id)(Id⊗Ψ)(Ψ⊗Id) = (Id⊗Ψ)(Ψ⊗Id)(Id⊗Ψ)` on every basis triple.
    pub fn satisfies_yang_baxter(&self) -> bool {
        let n = self.dim;
        let l = self.scalar_order;
        let left = |t: [usize; 3], e: u64, first: bool| -> ([usize; 3], u64) {
            let (x, y, s) = if first { self.apply(t[0], t[1]) } else { self.apply(t[1], t[2]) };
            if first {
                ([x, y, t[2]], (e + s) % l)
            } else {
                ([t[0], x, y], (e + s) % l)
            }
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let t = [a, b, c];
                    let (t1, e1) = left(t, 0, true);
                    let (t1, e1) = left(t1, e1, false);
                    let (t1, e1) = left(t1, e1, true);
                    let (t2, e2) = left(t, 0, false);
                    let (t2, e2) = left(t2, e2, true);
                    let (t2, e2) = left(t2, e2, false);
                    if t1 != t2 || e1 != e2 {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// `Y_G` with basis `{r_s}` indexed by the reflections.
#[derive(Debug, Clone)]
pub struct YDModule {
    pub params: GroupParams,
    pub basis: Vec<Reflection>,
    index: HashMap<Reflection, usize>,
    pub braiding: GroupBraiding,
}

impl YDModule {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn index_of(&self, s: &Reflection) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn scalar_order(&self) -> u64 {
        self.braiding.scalar_order
    }
}

/// Builds `Y_G` and its braiding `Ψ(r_s ⊗ r_t) = λ(s,t) r_{sts^{-1}} ⊗ r_s`.
pub fn yd_module(params: &GroupParams) -> Result<YDModule, GroupError> {
    let basis = enumerate_reflections(params);
    let index: HashMap<Reflection, usize> = basis.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let dim = basis.len();
    let elements: Vec<GroupElement> = basis.iter().map(|s| s.element(params)).collect();
    let mut target = vec![0; dim * dim];
    let mut scalar = vec![0; dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            let c = conjugate_reflection(params, &elements[a], &basis[b]);
            target[a * dim + b] = index[&c];
            scalar[a * dim + b] = lambda(params, &elements[a], &basis[b])?.exponent();
        }
    }
    Ok(YDModule {
        params: *params,
        basis,
        index,
        braiding: GroupBraiding {
            dim,
            scalar_order: params.scalar_order(),
            target,
            scalar,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SummandLabel {
    /// All transposition-type reflections.
    V0,
    /// Diagonal reflections `s_i^k` for one `k`.
    V(u64),
    /// `θ^k(12)` with `k` odd (`n = 2`, `p` even).
    Odd,
    /// `θ^k(12)` with `k` even (`n = 2`, `p` even).
    Even,
}

impl fmt::Display for SummandLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SummandLabel::V0 => write!(f, "V0"),
            SummandLabel::V(k) => write!(f, "V{k}"),
            SummandLabel::Odd => write!(f, "Vodd"),
            SummandLabel::Even => write!(f, "Veven"),
        }
    }
}

impl Serialize for SummandLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct YDSummand {
    pub label: SummandLabel,
    /// Basis positions in the module.
    pub support: Vec<usize>,
}

impl YDSummand {
    pub fn dim(&self) -> usize {
        self.support.len()
    }
}

/// Orbits of the conjugation action on the basis (reflections generate `G`).
pub fn decompose_yd(module: &YDModule) -> Vec<YDSummand> {
    let dim = module.dim();
    let mut orbit_of = vec![usize::MAX; dim];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..dim {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = vec![start];
        orbit_of[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(b) = queue.pop_front() {
            for a in 0..dim {
                let (c, _, _) = module.braiding.apply(a, b);
                if orbit_of[c] == usize::MAX {
                    orbit_of[c] = id;
                    orbit.push(c);
                    queue.push_back(c);
                }
            }
        }
        orbit.sort();
        orbits.push(orbit);
    }
    let split = orbits
        .iter()
        .filter(|o| matches!(module.basis[o[0]], Reflection::Transposition { .. }))
        .count()
        > 1;
    orbits
        .into_iter()
        .map(|support| {
            let label = match module.basis[support[0]] {
                Reflection::Diagonal { k, .. } => SummandLabel::V(k),
                Reflection::Transposition { .. } if !split => SummandLabel::V0,
                Reflection::Transposition { .. } => {
                    let odd = support.iter().any(|&s| {
                        matches!(module.basis[s], Reflection::Transposition { k, .. } if k % 2 == 1)
                    });
                    if odd {
                        SummandLabel::Odd
                    } else {
                        SummandLabel::Even
                    }
                }
            };
            YDSummand { label, support }
        })
        .collect()
}

/// Whether `Id - Ψ²` is nonzero on `a ⊗ b`.
pub fn adjoint_link(module: &YDModule, a: &YDSummand, b: &YDSummand) -> bool {
    a.support.iter().any(|&x| {
        b.support
            .iter()
            .any(|&y| module.braiding.apply_squared(x, y) != (x, y, 0))
    })
}

/// Connectivity of the summand graph with edges from [`adjoint_link`].
pub fn is_braid_indecomposable(module: &YDModule) -> bool {
    let summands = decompose_yd(module);
    if summands.len() <= 1 {
        return true;
    }
    let k = summands.len();
    let mut seen = vec![false; k];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        for v in 0..k {
            if !seen[v]
                && (adjoint_link(module, &summands[u], &summands[v])
                    || adjoint_link(module, &summands[v], &summands[u]))
            {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Number of simple summands expected from the orbit structure, per divisor.
pub fn expected_summand_dims(params: &GroupParams) -> Vec<usize> {
    let mut dims = Vec::new();
    let n = params.n;
    let m = params.m as usize;
    if n >= 2 {
        let total = m * n * (n - 1) / 2;
        if n == 2 && params.p % 2 == 0 {
            dims.extend([total / 2, total / 2]);
        } else {
            dims.push(total);
        }
    }
    let q = params.m / params.p;
    for d in (2..=q).filter(|d| q % d == 0) {
        for _ in 0..euler_phi(d) {
            dims.push(n);
        }
    }
    dims
}
