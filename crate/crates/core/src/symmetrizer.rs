//! Graded dimensions of Nichols algebras and of their quadratic covers.
//!
//! Both kinds of braidings used here (diagonal and reflection-group) are
//! monomial on tensor bases: `Ψ(e_a ⊗ e_b) = ζ_L^k e_c ⊗ e_d`. Words of a
//! fixed degree therefore split into orbits under the `Ψ_i`, and every
//! operator below preserves the span of each orbit.
//!
//! The degree-`d` symmetrizer factors as `S_d = (S_{d-1} ⊗ id) T_d` with
//! `T_d = Σ_k Ψ_{d-1} ⋯ Ψ_k`. Only a row basis of `S_{d-1}` is kept between
//! degrees; its rank and row space are enough to get those of `S_d`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{mul_mod, pow_mod, CyclotomicNumber, ModularSpec, RootOfUnity};
use crate::diagonal::DiagonalBraiding;
use crate::reflection_groups::{decompose_yd, YDModule};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetrizerError {
    #[error("{what} needs {required} entries, over the limit of {limit}")]
    Resource {
        what: &'static str,
        required: u128,
        limit: u128,
    },
    #[error("braided space has dimension 0")]
    Empty,
}

/// Exact arithmetic in `Q(ζ_L)` or arithmetic in `F_q` under `ζ_L ↦ z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    /// Uses the `seed`-th suitable prime above `2^30`.
    Modular { seed: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest orbit (block) of words handled by one elimination.
    pub max_block: usize,
    /// Largest number of words in one degree.
    pub max_words: u128,
}

impl Budget {
    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Self {
                max_block: 20_000,
                max_words: 1 << 22,
            },
            Mode::Modular { .. } => Self {
                max_block: 40_000,
                max_words: 1 << 23,
            },
        }
    }
}

/// A monomial operator: column `u` goes to `ζ_L^{scalar[u]} e_{target[u]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMatrix {
    pub order: u64,
    pub target: Vec<usize>,
    pub scalar: Vec<u64>,
}

impl MonomialMatrix {
    pub fn identity(order: u64, dim: usize) -> Self {
        Self {
            order,
            target: (0..dim).collect(),
            scalar: vec![0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let target = other.target.iter().map(|&t| self.target[t]).collect();
        let scalar = other
            .target
            .iter()
            .zip(&other.scalar)
            .map(|(&t, &s)| (s + self.scalar[t]) % self.order)
            .collect();
        Self {
            order: self.order,
            target,
            scalar,
        }
    }
}

/// A braided vector space with a monomial braiding and a grading of the basis.
#[derive(Debug, Clone)]
pub struct BraidedSpace {
    dim: usize,
    order: u64,
    /// `psi[a * dim + b] = (c, d, k)`: `Ψ(e_a ⊗ e_b) = ζ_L^k e_c ⊗ e_d`.
    psi: Vec<(usize, usize, u64)>,
    labels: Vec<usize>,
    label_names: Vec<String>,
}

impl BraidedSpace {
    /// `order` must be even so that `-1` is a power of `ζ_L`.
    pub fn new(
        order: u64,
        psi: Vec<(usize, usize, u64)>,
        labels: Vec<usize>,
        label_names: Vec<String>,
    ) -> Result<Self, SymmetrizerError> {
        let dim = labels.len();
        if dim == 0 {
            return Err(SymmetrizerError::Empty);
        }
        assert_eq!(psi.len(), dim * dim);
        assert!(order % 2 == 0, "scalar order must be even");
        assert!(labels.iter().all(|&l| l < label_names.len()));
        Ok(Self {
            dim,
            order,
            psi,
            labels,
            label_names,
        })
    }

    /// `Ψ(e_i ⊗ e_j) = q_ij e_j ⊗ e_i`, graded by vertex.
    pub fn from_diagonal(b: &DiagonalBraiding) -> Self {
        let r = b.rank();
        let n = b.order();
        let order = if n % 2 == 0 { n } else { 2 * n };
        let scale = order / n;
        let psi = (0..r)
            .flat_map(|i| (0..r).map(move |j| (i, j)))
            .map(|(i, j)| (j, i, b.exponent(i, j) * scale % order))
            .collect();
        Self {
            dim: r,
            order,
            psi,
            labels: (0..r).collect(),
            label_names: (1..=r).map(|i| format!("t{i}")).collect(),
        }
    }

    /// `Ψ(r_s ⊗ r_t) = λ(s,t) r_{sts^{-1}} ⊗ r_s`, graded by the simple summands.
    pub fn from_yd(module: &YDModule) -> Result<Self, SymmetrizerError> {
        let summands = decompose_yd(module);
        let mut labels = vec![0; module.dim()];
        for (k, s) in summands.iter().enumerate() {
            for &i in &s.support {
                labels[i] = k;
            }
        }
        let dim = module.dim();
        let psi = (0..dim)
            .flat_map(|a| (0..dim).map(move |b| (a, b)))
            .map(|(a, b)| module.braiding.apply(a, b))
            .collect();
        Self::new(
            module.scalar_order(),
            psi,
            labels,
            summands.iter().map(|s| s.label.to_string()).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn psi(&self, a: usize, b: usize) -> (usize, usize, u64) {
        self.psi[a * self.dim + b]
    }

    /// The braiding as a monomial matrix on `V ⊗ V` (index `a * dim + b`).
    pub fn braiding_matrix(&self) -> MonomialMatrix {
        let target = self.psi.iter().map(|&(c, d, _)| c * self.dim + d).collect();
        let scalar = self.psi.iter().map(|&(_, _, k)| k).collect();
        MonomialMatrix {
            order: self.order,
            target,
            scalar,
        }
    }

    pub fn satisfies_yang_baxter(&self) -> bool {
        let w = Words::new(self.dim, 3);
        let p0 = w.psi_matrix(self, 0);
        let p1 = w.psi_matrix(self, 1);
        p0.compose(&p1).compose(&p0) == p1.compose(&p0).compose(&p1)
    }
}

/// Words of one degree, encoded with the first letter most significant.
struct Words {
    base: usize,
    degree: usize,
    count: usize,
}

impl Words {
    fn new(base: usize, degree: usize) -> Self {
        Self {
            base,
            degree,
            count: base.pow(degree as u32),
        }
    }

    fn letters(&self, mut w: usize) -> Vec<usize> {
        let mut out = vec![0; self.degree];
        for i in (0..self.degree).rev() {
            out[i] = w % self.base;
            w /= self.base;
        }
        out
    }

    fn encode(&self, letters: &[usize]) -> usize {
        letters.iter().fold(0, |acc, &x| acc * self.base + x)
    }

    /// `Ψ` at letters `i, i+1` applied in place; returns the scalar exponent.
    fn psi_at(space: &BraidedSpace, letters: &mut [usize], i: usize) -> u64 {
        let (c, d, k) = space.psi(letters[i], letters[i + 1]);
        letters[i] = c;
        letters[i + 1] = d;
        k
    }

    fn psi_matrix(&self, space: &BraidedSpace, i: usize) -> MonomialMatrix {
        let mut target = Vec::with_capacity(self.count);
        let mut scalar = Vec::with_capacity(self.count);
        for w in 0..self.count {
            let mut l = self.letters(w);
            scalar.push(Self::psi_at(space, &mut l, i));
            target.push(self.encode(&l));
        }
        MonomialMatrix {
            order: space.order,
            target,
            scalar,
        }
    }

    /// Orbits of words under all `Ψ_i`, numbered by smallest member.
    fn blocks(&self, space: &BraidedSpace) -> (Vec<u32>, Vec<Vec<usize>>) {
        let mut parent: Vec<u32> = (0..self.count as u32).collect();
        fn find(p: &mut [u32], x: u32) -> u32 {
            let mut r = x;
            while p[r as usize] != r {
                p[r as usize] = p[p[r as usize] as usize];
                r = p[r as usize];
            }
            r
        }
        for w in 0..self.count {
            let l = self.letters(w);
            for i in 0..self.degree.saturating_sub(1) {
                let mut m = l.clone();
                Self::psi_at(space, &mut m, i);
                let a = find(&mut parent, w as u32);
                let b = find(&mut parent, self.encode(&m) as u32);
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }
        let mut id_of: HashMap<u32, u32> = HashMap::new();
        let mut block_of = vec![0u32; self.count];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for w in 0..self.count {
            let root = find(&mut parent, w as u32);
            let id = *id_of.entry(root).or_insert_with(|| {
                members.push(Vec::new());
                (members.len() - 1) as u32
            });
            block_of[w] = id;
            members[id as usize].push(w);
        }
        (block_of, members)
    }
}

/// Field operations used by the eliminations.
trait Arith: Sync {
    type E: Clone + Send + Sync;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, x: &Self::E) -> bool;
    fn root(&self, k: u64) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub_mul(&self, a: &Self::E, c: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

struct ExactArith {
    roots: Vec<CyclotomicNumber>,
    zero: CyclotomicNumber,
}

impl ExactArith {
    fn new(order: u64) -> Self {
        let roots = (0..order)
            .map(|k| CyclotomicNumber::from_root_counts(order, &[(k, 1)]))
            .collect();
        Self {
            roots,
            zero: CyclotomicNumber::zero(order),
        }
    }
}

impl Arith for ExactArith {
    type E = CyclotomicNumber;
    fn zero(&self) -> Self::E {
        self.zero.clone()
    }
    fn is_zero(&self, x: &Self::E) -> bool {
        x.is_zero()
    }
    fn root(&self, k: u64) -> Self::E {
        self.roots[(k % self.roots.len() as u64) as usize].clone()
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a + b
    }
    fn sub_mul(&self, a: &Self::E, c: &Self::E, b: &Self::E) -> Self::E {
        a - &(c * b)
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a * b
    }
    fn inv(&self, a: &Self::E) -> Self::E {
        a.inverse().expect("pivot is nonzero")
    }
}

struct ModArith {
    q: u64,
    roots: Vec<u64>,
}

impl ModArith {
    fn new(order: u64, seed: usize) -> Self {
        let spec = ModularSpec::find(order, seed);
        let roots = (0..order).map(|k| pow_mod(spec.zeta_image, k, spec.prime)).collect();
        Self { q: spec.prime, roots }
    }
}

impl Arith for ModArith {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    fn root(&self, k: u64) -> u64 {
        self.roots[(k % self.roots.len() as u64) as usize]
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.q
    }
    fn sub_mul(&self, a: &u64, c: &u64, b: &u64) -> u64 {
        (a + self.q - mul_mod(*c, *b, self.q)) % self.q
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.q)
    }
    fn inv(&self, a: &u64) -> u64 {
        pow_mod(*a, self.q - 2, self.q)
    }
}

/// Incremental row echelon basis over `ncols` columns; stored rows are sparse
/// with pivot entry 1.
struct Echelon<'a, A: Arith> {
    arith: &'a A,
    ncols: usize,
    rows: Vec<(usize, Vec<(usize, A::E)>)>,
}

impl<'a, A: Arith> Echelon<'a, A> {
    fn new(arith: &'a A, ncols: usize) -> Self {
        Self {
            arith,
            ncols,
            rows: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a dense vector; returns whether it was independent.
    fn insert(&mut self, mut v: Vec<A::E>) -> bool {
        debug_assert_eq!(v.len(), self.ncols);
        let ar = self.arith;
        for (pivot, row) in &self.rows {
            if ar.is_zero(&v[*pivot]) {
                continue;
            }
            let c = v[*pivot].clone();
            for (j, x) in row {
                v[*j] = ar.sub_mul(&v[*j], &c, x);
            }
        }
        let Some(pivot) = v.iter().position(|x| !ar.is_zero(x)) else {
            return false;
        };
        let inv = ar.inv(&v[pivot]);
        let row: Vec<(usize, A::E)> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !ar.is_zero(x))
            .map(|(j, x)| (j, ar.mul(x, &inv)))
            .collect();
        self.rows.push((pivot, row));
        true
    }
}

/// Graded dimensions, also split by multidegree over the summand labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HilbertData {
    pub max_degree: usize,
    pub labels: Vec<String>,
    pub per_degree: Vec<u64>,
    /// Multidegree (count of each label) to dimension, zero entries omitted.
    #[serde(serialize_with = "serialize_multi")]
    pub per_multidegree: BTreeMap<Vec<u32>, u64>,
}

fn serialize_multi<S: serde::Serializer>(m: &BTreeMap<Vec<u32>, u64>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    #[derive(Serialize)]
    struct Entry<'a> {
        degree: &'a [u32],
        dim: u64,
    }
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for (k, v) in m {
        seq.serialize_element(&Entry { degree: k, dim: *v })?;
    }
    seq.end()
}

impl HilbertData {
    fn new(space: &BraidedSpace, max_degree: usize) -> Self {
        Self {
            max_degree,
            labels: space.label_names.clone(),
            per_degree: Vec::new(),
            per_multidegree: BTreeMap::new(),
        }
    }

    fn record(&mut self, degree: usize, multi: BTreeMap<Vec<u32>, u64>) {
        debug_assert_eq!(self.per_degree.len(), degree);
        self.per_degree.push(multi.values().sum());
        for (k, v) in multi {
            if v > 0 {
                self.per_multidegree.insert(k, v);
            }
        }
    }

    pub fn total(&self) -> u64 {
        self.per_degree.iter().sum()
    }

    /// Multidegree data with labels renamed through `rename`, for comparing
    /// spaces whose summands correspond.
    pub fn relabelled(&self, order: &[usize]) -> BTreeMap<Vec<u32>, u64> {
        self.per_multidegree
            .iter()
            .map(|(k, &v)| (order.iter().map(|&i| k[i]).collect(), v))
            .collect()
    }
}

fn multidegree(space: &BraidedSpace, letters: &[usize]) -> Vec<u32> {
    let mut m = vec![0u32; space.label_names.len()];
    for &x in letters {
        m[space.labels[x]] += 1;
    }
    m
}

fn check_words(space: &BraidedSpace, degree: usize, budget: &Budget) -> Result<(), SymmetrizerError> {
    let required = (space.dim as u128).saturating_pow(degree as u32);
    if required > budget.max_words {
        return Err(SymmetrizerError::Resource {
            what: "degree",
            required,
            limit: budget.max_words,
        });
    }
    Ok(())
}

fn check_blocks(members: &[Vec<usize>], budget: &Budget) -> Result<(), SymmetrizerError> {
    let largest = members.iter().map(Vec::len).max().unwrap_or(0);
    if largest > budget.max_block {
        return Err(SymmetrizerError::Resource {
            what: "block",
            required: largest as u128,
            limit: budget.max_block as u128,
        });
    }
    Ok(())
}

/// Graded dimensions of `B(V)` in degrees `0..=max_degree`.
pub fn nichols_hilbert(
    space: &BraidedSpace,
    max_degree: usize,
    mode: Mode,
    budget: &Budget,
) -> Result<HilbertData, SymmetrizerError> {
    match mode {
        Mode::Exact => nichols_with(&ExactArith::new(space.order), space, max_degree, budget),
        Mode::Modular { seed } => nichols_with(&ModArith::new(space.order, seed), space, max_degree, budget),
    }
}

pub fn nichols_graded_dim(space: &BraidedSpace, degree: usize, mode: Mode) -> Result<u64, SymmetrizerError> {
    let h = nichols_hilbert(space, degree, mode, &Budget::for_mode(mode))?;
    Ok(h.per_degree[degree])
}

/// Row basis of the symmetrizer in one degree, per block, with rows indexed
/// by word (global word index, value).
struct Level<E> {
    block_of: Vec<u32>,
    rows: Vec<Vec<Vec<(usize, E)>>>,
}

fn nichols_with<A: Arith>(
    arith: &A,
    space: &BraidedSpace,
    max_degree: usize,
    budget: &Budget,
) -> Result<HilbertData, SymmetrizerError> {
    let n = space.dim;
    let mut data = HilbertData::new(space, max_degree);
    let mut zero_multi = BTreeMap::new();
    zero_multi.insert(vec![0u32; space.label_names.len()], 1);
    data.record(0, zero_multi);
    if max_degree == 0 {
        return Ok(data);
    }
    let mut multi1 = BTreeMap::new();
    for x in 0..n {
        *multi1.entry(multidegree(space, &[x])).or_insert(0) += 1;
    }
    data.record(1, multi1);
    let mut level = Level {
        block_of: (0..n as u32).collect(),
        rows: (0..n).map(|x| vec![vec![(x, arith.root(0))]]).collect(),
    };
    for d in 2..=max_degree {
        if data.per_degree[d - 1] == 0 {
            data.record(d, BTreeMap::new());
            continue;
        }
        check_words(space, d, budget)?;
        let words = Words::new(n, d);
        let (block_of, members) = words.blocks(space);
        check_blocks(&members, budget)?;
        let prev = &level;
        let results: Vec<(Vec<u32>, Vec<Vec<(usize, A::E)>>)> = members
            .par_iter()
            .map(|block| nichols_block(arith, space, &words, prev, block))
            .collect();
        let mut multi = BTreeMap::new();
        let mut rows = Vec::with_capacity(results.len());
        for (md, r) in results {
            *multi.entry(md).or_insert(0) += r.len() as u64;
            rows.push(r);
        }
        data.record(d, multi);
        level = Level { block_of, rows };
    }
    Ok(data)
}

/// Rows of `(P_{d-1} ⊗ id) T_d` restricted to one block, reduced to a basis.
fn nichols_block<A: Arith>(
    arith: &A,
    space: &BraidedSpace,
    words: &Words,
    prev: &Level<A::E>,
    block: &[usize],
) -> (Vec<u32>, Vec<Vec<(usize, A::E)>>) {
    let d = words.degree;
    let n = space.dim;
    let md = multidegree(space, &words.letters(block[0]));

    // Inverted images: word v of T_d(w) to the columns w reaching it.
    let mut hits: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    let mut row_keys: Vec<(u32, usize)> = Vec::new();
    let mut key_seen = std::collections::HashSet::new();
    for (col, &w) in block.iter().enumerate() {
        let letters = words.letters(w);
        for k in (0..d).rev() {
            let mut l = letters.clone();
            let mut s = 0;
            for i in k..d - 1 {
                s += Words::psi_at(space, &mut l, i);
            }
            let v = words.encode(&l);
            let key = (prev.block_of[v / n], v % n);
            if key_seen.insert(key) {
                row_keys.push(key);
            }
            hits.entry(v).or_default().push((col, s % space.order));
        }
    }

    let mut ech = Echelon::new(arith, block.len());
    for &(beta, x) in &row_keys {
        for rho in &prev.rows[beta as usize] {
            if ech.rank() == block.len() {
                break;
            }
            let mut v = vec![arith.zero(); block.len()];
            let mut any = false;
            for (u, e) in rho {
                if let Some(cols) = hits.get(&(u * n + x)) {
                    for &(col, s) in cols {
                        let term = arith.mul(e, &arith.root(s));
                        v[col] = arith.add(&v[col], &term);
                        any = true;
                    }
                }
            }
            if any {
                ech.insert(v);
            }
        }
    }
    let rows = ech
        .rows
        .into_iter()
        .map(|(_, row)| row.into_iter().map(|(j, e)| (block[j], e)).collect())
        .collect();
    (md, rows)
}

/// A relation vector on `V ⊗ V`: `Σ ζ_L^k e_a ⊗ e_b` over `(a * dim + b, k)`.
pub type Relation = Vec<(usize, u64)>;

/// Basis of `ker(Ψ + Id)` on `V ⊗ V`.
///
/// On a cycle `t_0 → t_1 → … → t_{c-1} → t_0` of `Ψ` with `Ψ t_j = μ_j t_{j+1}`,
/// a kernel vector has `x_{j+1} = -μ_j x_j` and exists iff `(-1)^c ∏ μ_j = 1`.
pub fn quadratic_relations(space: &BraidedSpace) -> Vec<Relation> {
    let m = space.braiding_matrix();
    let l = space.order;
    let half = l / 2;
    let mut seen = vec![false; m.dim()];
    let mut out = Vec::new();
    for start in 0..m.dim() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut t = start;
        let mut coeff = 0u64;
        let mut total = 0u64;
        while !seen[t] {
            seen[t] = true;
            cycle.push((t, coeff));
            coeff = (coeff + half + m.scalar[t]) % l;
            total = (total + half + m.scalar[t]) % l;
            t = m.target[t];
        }
        if total == 0 {
            out.push(cycle);
        }
    }
    out
}

/// Graded dimensions of `T(V)/⟨ker(Ψ + Id)⟩` in degrees `0..=max_degree`.
pub fn quadratic_hilbert(
    space: &BraidedSpace,
    max_degree: usize,
    mode: Mode,
    budget: &Budget,
) -> Result<HilbertData, SymmetrizerError> {
    match mode {
        Mode::Exact => quadratic_with(&ExactArith::new(space.order), space, max_degree, budget),
        Mode::Modular { seed } => quadratic_with(&ModArith::new(space.order, seed), space, max_degree, budget),
    }
}

pub fn quadratic_graded_dim(space: &BraidedSpace, degree: usize, mode: Mode) -> Result<u64, SymmetrizerError> {
    let h = quadratic_hilbert(space, degree, mode, &Budget::for_mode(mode))?;
    Ok(h.per_degree[degree])
}

fn quadratic_with<A: Arith>(
    arith: &A,
    space: &BraidedSpace,
    max_degree: usize,
    budget: &Budget,
) -> Result<HilbertData, SymmetrizerError> {
    let n = space.dim;
    let relations = quadratic_relations(space);
    let mut data = HilbertData::new(space, max_degree);
    for d in 0..=max_degree {
        check_words(space, d, budget)?;
        let words = Words::new(n, d);
        if d < 2 {
            let mut multi = BTreeMap::new();
            for w in 0..words.count {
                *multi.entry(multidegree(space, &words.letters(w))).or_insert(0) += 1;
            }
            data.record(d, multi);
            continue;
        }
        let (block_of, members) = words.blocks(space);
        check_blocks(&members, budget)?;
        // generators x ⊗ ρ ⊗ y, grouped by block
        let mut gens: Vec<Vec<Vec<(usize, u64)>>> = vec![Vec::new(); members.len()];
        let pre_words = |i: usize| n.pow(i as u32);
        for i in 0..d - 1 {
            let suffix_len = d - 2 - i;
            let shift = n.pow(suffix_len as u32);
            for pre in 0..pre_words(i) {
                for suf in 0..pre_words(suffix_len) {
                    for rel in &relations {
                        let vec: Vec<(usize, u64)> = rel
                            .iter()
                            .map(|&(pair, k)| ((pre * n * n + pair) * shift + suf, k))
                            .collect();
                        let b = block_of[vec[0].0] as usize;
                        gens[b].push(vec);
                    }
                }
            }
        }
        let results: Vec<(Vec<u32>, u64)> = members
            .par_iter()
            .zip(gens.par_iter())
            .map(|(block, g)| {
                let local: HashMap<usize, usize> = block.iter().enumerate().map(|(i, &w)| (w, i)).collect();
                let mut ech = Echelon::new(arith, block.len());
                for v in g {
                    if ech.rank() == block.len() {
                        break;
                    }
                    let mut dense = vec![arith.zero(); block.len()];
                    for &(w, k) in v {
                        let j = local[&w];
                        dense[j] = arith.add(&dense[j], &arith.root(k));
                    }
                    ech.insert(dense);
                }
                let md = multidegree(space, &words.letters(block[0]));
                (md, (block.len() - ech.rank()) as u64)
            })
            .collect();
        let mut multi = BTreeMap::new();
        for (md, v) in results {
            *multi.entry(md).or_insert(0) += v;
        }
        data.record(d, multi);
    }
    Ok(data)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HilbertComparison {
    pub nichols: HilbertData,
    pub quadratic: HilbertData,
    pub first_divergence: Option<usize>,
}

pub fn hilbert_compare(
    space: &BraidedSpace,
    max_degree: usize,
    mode: Mode,
    budget: &Budget,
) -> Result<HilbertComparison, SymmetrizerError> {
    let nichols = nichols_hilbert(space, max_degree, mode, budget)?;
    let quadratic = quadratic_hilbert(space, max_degree, mode, budget)?;
    let first_divergence = (0..=max_degree).find(|&d| nichols.per_degree[d] != quadratic.per_degree[d]);
    Ok(HilbertComparison {
        nichols,
        quadratic,
        first_divergence,
    })
}

/// A reduced word for `perm` (one-line, `perm[i]` the image of `i`), chosen
/// by repeatedly removing the leftmost descent.
pub fn bubble_word(perm: &[usize]) -> Vec<usize> {
    let mut v = perm.to_vec();
    let mut word = Vec::new();
    while let Some(i) = (0..v.len().saturating_sub(1)).find(|&i| v[i] > v[i + 1]) {
        v.swap(i, i + 1);
        word.push(i);
    }
    word.reverse();
    word
}

/// `Ψ_{i_1} ∘ ⋯ ∘ Ψ_{i_l}` on degree-`d` words for the word `i_1 … i_l`.
pub fn lift_word(space: &BraidedSpace, degree: usize, word: &[usize]) -> MonomialMatrix {
    let words = Words::new(space.dim, degree);
    let mut acc = MonomialMatrix::identity(space.order, words.count);
    for &i in word.iter().rev() {
        acc = words.psi_matrix(space, i).compose(&acc);
    }
    acc
}

/// Matsumoto lift of a permutation through its bubble-sort reduced word.
pub fn braid_lift(space: &BraidedSpace, degree: usize, perm: &[usize]) -> MonomialMatrix {
    lift_word(space, degree, &bubble_word(perm))
}

/// `rank Σ_{w ∈ S_d} braid_lift(w)` computed from the full matrix; only for small cases.
pub fn direct_symmetrizer_rank(space: &BraidedSpace, degree: usize, mode: Mode) -> usize {
    fn perms(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(k - 1) {
            for pos in 0..k {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }
    let lifts: Vec<MonomialMatrix> = perms(degree).iter().map(|p| braid_lift(space, degree, p)).collect();
    fn run<A: Arith>(arith: &A, lifts: &[MonomialMatrix], size: usize) -> usize {
        // rows of S: row r = Σ_w (coefficient of e_r in T_w e_c) over columns c
        let mut mat = vec![vec![arith.zero(); size]; size];
        for m in lifts {
            for c in 0..size {
                let r = m.target[c];
                mat[r][c] = arith.add(&mat[r][c], &arith.root(m.scalar[c]));
            }
        }
        let mut ech = Echelon::new(arith, size);
        for row in mat {
            ech.insert(row);
        }
        ech.rank()
    }
    let size = space.dim.pow(degree as u32);
    match mode {
        Mode::Exact => run(&ExactArith::new(space.order), &lifts, size),
        Mode::Modular { seed } => run(&ModArith::new(space.order, seed), &lifts, size),
    }
}

/// Scalars of `Ψ` as roots of unity, for display.
pub fn braiding_scalar(space: &BraidedSpace, a: usize, b: usize) -> RootOfUnity {
    RootOfUnity::new(space.order, space.psi(a, b).2 as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagonal::cyclic_braiding;
    use crate::reflection_groups::{yd_module, GroupParams};

    fn cyc(n: u64) -> BraidedSpace {
        BraidedSpace::from_diagonal(&cyclic_braiding(n, &(1..n).collect::<Vec<_>>()).unwrap())
    }

    fn group(m: u64, p: u64, n: usize) -> BraidedSpace {
        BraidedSpace::from_yd(&yd_module(&GroupParams::new(m, p, n).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn c2_series() {
        let h = nichols_hilbert(&cyc(2), 4, Mode::Exact, &Budget::for_mode(Mode::Exact)).unwrap();
        assert_eq!(h.per_degree, vec![1, 1, 0, 0, 0]);
        assert_eq!(h.total(), 2);
    }

    #[test]
    fn c3_total() {
        let h = nichols_hilbert(&cyc(3), 6, Mode::Exact, &Budget::for_mode(Mode::Exact)).unwrap();
        assert_eq!(h.total(), 9);
    }

    #[test]
    fn recursion_matches_direct_symmetrizer() {
        for space in [cyc(3), cyc(4), group(2, 1, 2), group(3, 3, 2)] {
            for d in 1..=4 {
                if space.dim().pow(d as u32) > 300 {
                    continue;
                }
                let fast = nichols_graded_dim(&space, d, Mode::Exact).unwrap();
                let slow = direct_symmetrizer_rank(&space, d, Mode::Exact) as u64;
                assert_eq!(fast, slow, "degree {d}");
            }
        }
    }

    #[test]
    fn lift_examples() {
        let s = group(2, 1, 2);
        assert_eq!(braid_lift(&s, 3, &[0, 1, 2]), MonomialMatrix::identity(s.order(), 64));
        assert_eq!(braid_lift(&s, 2, &[1, 0]), s.braiding_matrix());
        assert_eq!(lift_word(&s, 3, &[0, 1, 0]), lift_word(&s, 3, &[1, 0, 1]));
    }

    #[test]
    fn relation_counts() {
        let s2 = group(1, 1, 2);
        assert_eq!(quadratic_relations(&s2).len(), 1);
        assert_eq!(quadratic_relations(&group(2, 1, 2)).len(), 8);
        assert_eq!(quadratic_relations(&group(5, 5, 2)).len(), 9);
    }

    #[test]
    fn b2_series() {
        let s = group(2, 1, 2);
        let b = Budget::for_mode(Mode::Exact);
        let c = hilbert_compare(&s, 4, Mode::Exact, &b).unwrap();
        assert_eq!(c.nichols.per_degree, vec![1, 4, 8, 12, 14]);
        assert_eq!(c.quadratic.per_degree, vec![1, 4, 8, 12, 16]);
        assert_eq!(c.first_divergence, Some(4));
    }

    #[test]
    fn resource_error() {
        let s = group(4, 1, 3);
        let tight = Budget {
            max_block: 10,
            max_words: 1000,
        };
        assert!(matches!(
            nichols_hilbert(&s, 3, Mode::Exact, &tight),
            Err(SymmetrizerError::Resource { .. })
        ));
    }

    #[test]
    fn b2_top_degree() {
        let h = nichols_hilbert(&group(2, 1, 2), 8, Mode::Exact, &Budget::for_mode(Mode::Exact)).unwrap();
        assert_eq!(h.per_degree, vec![1, 4, 8, 12, 14, 12, 8, 4, 1]);
        assert_eq!(h.total(), 64);
        assert_eq!(h.per_multidegree[&vec![1, 1]], 6);
    }

    #[test]
    fn dihedral_quadratic() {
        let b = Budget::for_mode(Mode::Exact);
        let h = quadratic_hilbert(&group(5, 5, 2), 4, Mode::Exact, &b).unwrap();
        assert_eq!(h.per_degree, vec![1, 5, 16, 45, 121]);
        let h = quadratic_hilbert(&group(7, 7, 2), 3, Mode::Modular { seed: 0 }, &b).unwrap();
        assert_eq!(h.per_degree, vec![1, 7, 36, 175]);
    }

    #[test]
    fn c4_against_pbw() {
        use crate::diagonal::pbw_hilbert_series;
        let b = cyclic_braiding(4, &[1, 2, 3]).unwrap();
        let h = nichols_hilbert(&BraidedSpace::from_diagonal(&b), 6, Mode::Exact, &Budget::for_mode(Mode::Exact)).unwrap();
        let pbw: Vec<u64> = pbw_hilbert_series(&b, 6, 1000).unwrap().into_iter().map(|x| x as u64).collect();
        assert_eq!(h.per_degree, pbw);
    }

    #[test]
    fn bubble_words_are_reduced() {
        assert_eq!(bubble_word(&[0, 1, 2]), Vec::<usize>::new());
        assert_eq!(bubble_word(&[1, 0]), vec![0]);
        assert_eq!(bubble_word(&[2, 1, 0]).len(), 3);
        assert_eq!(bubble_word(&[3, 2, 1, 0]).len(), 6);
    }
}
