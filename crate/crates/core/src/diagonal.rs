//! Diagonal braidings `q_ij = ξ^{b_ij}`, their generalized Dynkin diagrams,
//! Cartan entries, Weyl groupoid reflections, root systems and PBW data.
//!
//! All scalars are powers of one fixed primitive `N`-th root of unity `ξ`, so
//! every computation here is arithmetic in `Z/N`. Vertex indices are 0-based.

use std::collections::{HashMap, HashSet, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::RootOfUnity;

pub const DEFAULT_MAX_OBJECTS: usize = 100_000;
pub const DEFAULT_MAX_ROOTS: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagonalError {
    #[error("subset element {element} outside 1..{order}")]
    OutOfRange { element: i64, order: u64 },
    #[error("braiding must have rank >= 1 and order >= 1")]
    Empty,
    #[error("exponent matrix is not square")]
    NotSquare,
    #[error("root system undefined: {0}")]
    RootSystemUndefined(ReflectionFailure),
    #[error("positive root {root:?} has label 1; dimension undefined")]
    UndefinedDimension { root: Vec<i64> },
    #[error("root {0:?} is neither positive nor negative")]
    MixedSignRoot(Vec<i64>),
    #[error("root system exceeds the enumeration bound")]
    NotFinite,
}

/// Rank-`r` diagonal braiding stored as an exponent matrix over `Z/N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalBraiding {
    order: u64,
    rank: usize,
    exponents: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct BraidingRepr {
    order: u64,
    exponents: Vec<Vec<u64>>,
}

impl Serialize for DiagonalBraiding {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BraidingRepr {
            order: self.order,
            exponents: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiagonalBraiding {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = BraidingRepr::deserialize(d)?;
        let rows = repr
            .exponents
            .into_iter()
            .map(|r| r.into_iter().map(|x| x as i64).collect())
            .collect();
        DiagonalBraiding::new(repr.order, rows).map_err(serde::de::Error::custom)
    }
}

impl DiagonalBraiding {
    pub fn new(order: u64, rows: Vec<Vec<i64>>) -> Result<Self, DiagonalError> {
        let rank = rows.len();
        if order == 0 || rank == 0 {
            return Err(DiagonalError::Empty);
        }
        if rows.iter().any(|r| r.len() != rank) {
            return Err(DiagonalError::NotSquare);
        }
        let exponents = rows
            .into_iter()
            .flatten()
            .map(|x| x.rem_euclid(order as i64) as u64)
            .collect();
        Ok(Self {
            order,
            rank,
            exponents,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn exponent(&self, i: usize, j: usize) -> u64 {
        self.exponents[i * self.rank + j]
    }

    pub fn q(&self, i: usize, j: usize) -> RootOfUnity {
        RootOfUnity::new(self.order, self.exponent(i, j) as i64)
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.exponents.chunks(self.rank).map(<[u64]>::to_vec).collect()
    }

    /// `B(a, b) = Σ a_j b_k b_jk mod N`.
    pub fn bilinear(&self, a: &[i64], b: &[i64]) -> u64 {
        let n = self.order as i128;
        let mut acc: i128 = 0;
        for (j, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (k, &y) in b.iter().enumerate() {
                acc = (acc + x as i128 * y as i128 * self.exponent(j, k) as i128).rem_euclid(n);
            }
        }
        acc as u64
    }

    /// Sub-braiding on the given vertices, in the given order.
    pub fn restrict(&self, vertices: &[usize]) -> Self {
        let exponents = vertices
            .iter()
            .flat_map(|&i| vertices.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.exponent(i, j))
            .collect();
        Self {
            order: self.order,
            rank: vertices.len(),
            exponents,
        }
    }

    pub fn object(&self) -> GroupoidObject {
        GroupoidObject::from_braiding(self)
    }
}

/// The braiding `q_ij = ξ^{I[i]}` of the cyclic Fomin–Kirillov construction.
pub fn cyclic_braiding(n: u64, subset: &[u64]) -> Result<DiagonalBraiding, DiagonalError> {
    if n < 2 || subset.is_empty() {
        return Err(DiagonalError::Empty);
    }
    if let Some(&bad) = subset.iter().find(|&&x| x == 0 || x >= n) {
        return Err(DiagonalError::OutOfRange {
            element: bad as i64,
            order: n - 1,
        });
    }
    let rows = subset
        .iter()
        .map(|&x| vec![x as i64; subset.len()])
        .collect();
    DiagonalBraiding::new(n, rows)
}

/// Labelled edge `{i, j}` with `i < j` carrying `q_ij q_ji`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiagramEdge {
    pub i: usize,
    pub j: usize,
    pub label: u64,
}

/// Vertex and edge labels as exponents of `ξ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneralizedDynkinDiagram {
    pub order: u64,
    pub vertices: Vec<u64>,
    pub edges: Vec<DiagramEdge>,
}

impl GeneralizedDynkinDiagram {
    pub fn vertex_label(&self, i: usize) -> RootOfUnity {
        RootOfUnity::new(self.order, self.vertices[i] as i64)
    }

    pub fn edge_label(&self, i: usize, j: usize) -> Option<RootOfUnity> {
        let (i, j) = (i.min(j), i.max(j));
        self.edges
            .iter()
            .find(|e| e.i == i && e.j == j)
            .map(|e| RootOfUnity::new(self.order, e.label as i64))
    }

    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for e in &self.edges {
            let a = find(&mut parent, e.i);
            let b = find(&mut parent, e.j);
            parent[a] = b;
        }
        (0..self.vertices.len())
            .filter(|&x| find(&mut parent, x) == x)
            .count()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }
}

pub fn dynkin_diagram(braiding: &DiagonalBraiding) -> GeneralizedDynkinDiagram {
    braiding.object().diagram()
}

/// `-a_ij` for `q_ii = ξ^a` and `q_ij q_ji = ξ^e`, or `None` when undefined.
///
/// Least `m ≥ 0` with `(m+1)_{q_ii} (q_ii^m q_ij q_ji - 1) = 0`.
pub fn neg_cartan(order: u64, a: u64, e: u64) -> Option<u64> {
    let (a, e) = (a % order, e % order);
    if e == 0 {
        return Some(0);
    }
    if a == 0 {
        return None;
    }
    let g = a.gcd(&order);
    let ord = order / g;
    let target = order - e;
    if target % g == 0 {
        let inv = mod_inverse(a / g, ord);
        Some(((target / g) as u128 * inv as u128 % ord as u128) as u64)
    } else {
        Some(ord - 1)
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let ext = (a as i64).extended_gcd(&(m as i64));
    ext.x.rem_euclid(m as i64) as u64
}

/// Twist-equivalence class of a diagonal braiding: `c_ii = b_ii` and
/// `c_ij = c_ji = b_ij + b_ji` for `i ≠ j`, all mod `N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupoidObject {
    order: u64,
    rank: usize,
    data: Vec<u64>,
}

/// A reflection that does not exist: `q_ii = 1` at a vertex with an edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectionFailure {
    pub vertex: usize,
    pub neighbor: usize,
    /// Exponent of `q_ij q_ji` at the offending edge.
    pub edge_label: u64,
}

impl std::fmt::Display for ReflectionFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "vertex {} has label 1 and an edge to {} labelled ξ^{}",
            self.vertex, self.neighbor, self.edge_label
        )
    }
}

impl GroupoidObject {
    pub fn from_braiding(b: &DiagonalBraiding) -> Self {
        let r = b.rank;
        let n = b.order;
        let mut data = vec![0; r * r];
        for i in 0..r {
            for j in 0..r {
                data[i * r + j] = if i == j {
                    b.exponent(i, i)
                } else {
                    (b.exponent(i, j) + b.exponent(j, i)) % n
                };
            }
        }
        Self { order: n, rank: r, data }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.rank + j]
    }

    pub fn vertex_exponent(&self, i: usize) -> u64 {
        self.entry(i, i)
    }

    /// Representative braiding with `b_ij = c_ij` for `i < j` and `b_ji = 0`.
    pub fn to_braiding(&self) -> DiagonalBraiding {
        let r = self.rank;
        let mut exponents = vec![0; r * r];
        for i in 0..r {
            for j in i..r {
                exponents[i * r + j] = self.entry(i, j);
            }
        }
        DiagonalBraiding {
            order: self.order,
            rank: r,
            exponents,
        }
    }

    pub fn diagram(&self) -> GeneralizedDynkinDiagram {
        let r = self.rank;
        let vertices = (0..r).map(|i| self.entry(i, i)).collect();
        let mut edges = Vec::new();
        for i in 0..r {
            for j in i + 1..r {
                let label = self.entry(i, j);
                if label != 0 {
                    edges.push(DiagramEdge { i, j, label });
                }
            }
        }
        GeneralizedDynkinDiagram {
            order: self.order,
            vertices,
            edges,
        }
    }

    /// `-a_ij`, `None` when undefined.
    pub fn neg_cartan(&self, i: usize, j: usize) -> Option<u64> {
        if i == j {
            return None;
        }
        neg_cartan(self.order, self.entry(i, i), self.entry(i, j))
    }

    /// Row `i` of `-A` (with 0 on the diagonal).
    pub fn cartan_row(&self, i: usize) -> Result<Vec<u64>, ReflectionFailure> {
        (0..self.rank)
            .map(|j| {
                if j == i {
                    Ok(0)
                } else {
                    self.neg_cartan(i, j).ok_or(ReflectionFailure {
                        vertex: i,
                        neighbor: j,
                        edge_label: self.entry(i, j),
                    })
                }
            })
            .collect()
    }

    /// First vertex whose reflection is undefined.
    pub fn failing_vertex(&self) -> Option<ReflectionFailure> {
        (0..self.rank).find_map(|i| self.cartan_row(i).err())
    }

    pub fn reflect(&self, i: usize) -> Result<Self, ReflectionFailure> {
        let m = self.cartan_row(i)?;
        Ok(self.reflect_with(i, &m))
    }

    pub(crate) fn reflect_with(&self, i: usize, m: &[u64]) -> Self {
        if m.iter().all(|&x| x == 0) {
            return self.clone();
        }
        let r = self.rank;
        let n = self.order as u128;
        let cii = self.entry(i, i) as u128;
        let mut data = self.data.clone();
        for j in 0..r {
            if j == i {
                continue;
            }
            let mj = m[j] as u128;
            let cij = self.entry(i, j) as u128;
            // s_i(e_i) = -e_i, s_i(e_j) = e_j + m_j e_i
            let new_ij = ((n - cij) + (n - (2 * mj * cii) % n)) % n;
            data[i * r + j] = new_ij as u64;
            data[j * r + i] = new_ij as u64;
            let cjj = self.entry(j, j) as u128;
            data[j * r + j] = ((cjj + mj * cij + mj * mj % n * cii) % n) as u64;
            for k in j + 1..r {
                if k == i {
                    continue;
                }
                let mk = m[k] as u128;
                let cjk = self.entry(j, k) as u128;
                let cik = self.entry(i, k) as u128;
                let v = (cjk + mj * cik + mk * cij + 2 * (mj * mk % n) * cii) % n;
                data[j * r + k] = v as u64;
                data[k * r + j] = v as u64;
            }
        }
        Self {
            order: self.order,
            rank: r,
            data,
        }
    }

    /// Applies the reflections of `word` left to right (first letter first).
    pub fn replay(&self, word: &[usize]) -> Result<Self, (usize, ReflectionFailure)> {
        let mut cur = self.clone();
        for (step, &i) in word.iter().enumerate() {
            cur = cur.reflect(i).map_err(|f| (step, f))?;
        }
        Ok(cur)
    }

    /// `q_α = ξ^{B(α,α)}` as an exponent.
    pub fn root_exponent(&self, alpha: &[i64]) -> u64 {
        let n = self.order as i128;
        let mut acc: i128 = 0;
        for j in 0..self.rank {
            let aj = alpha[j] as i128;
            if aj == 0 {
                continue;
            }
            acc += aj * aj * self.entry(j, j) as i128;
            for k in j + 1..self.rank {
                acc += aj * alpha[k] as i128 * self.entry(j, k) as i128;
            }
            acc = acc.rem_euclid(n);
        }
        acc as u64
    }
}

/// Entry `a_ij` of the generalized Cartan matrix; `None` when undefined.
pub fn cartan_entry(braiding: &DiagonalBraiding, i: usize, j: usize) -> Option<i64> {
    if i == j {
        return Some(2);
    }
    let e = (braiding.exponent(i, j) + braiding.exponent(j, i)) % braiding.order;
    neg_cartan(braiding.order, braiding.exponent(i, i), e).map(|m| -(m as i64))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanData {
    pub entries: Vec<Vec<i64>>,
    pub defined: Vec<Vec<bool>>,
}

impl CartanData {
    pub fn is_fully_defined(&self) -> bool {
        self.defined.iter().flatten().all(|&d| d)
    }
}

pub fn cartan_matrix(braiding: &DiagonalBraiding) -> CartanData {
    let r = braiding.rank;
    let mut entries = vec![vec![0; r]; r];
    let mut defined = vec![vec![true; r]; r];
    for i in 0..r {
        for j in 0..r {
            match cartan_entry(braiding, i, j) {
                Some(a) => entries[i][j] = a,
                None => defined[i][j] = false,
            }
        }
    }
    CartanData { entries, defined }
}

/// Cartan type: every `q_ii ≠ 1` and `q_ii^{m} q_ij q_ji = 1` for `m = -a_ij < ord q_ii`.
pub fn is_cartan_type(braiding: &DiagonalBraiding) -> bool {
    let n = braiding.order;
    let r = braiding.rank;
    (0..r).all(|i| {
        let a = braiding.exponent(i, i);
        a != 0
            && (0..r).filter(|&j| j != i).all(|j| {
                let e = (braiding.exponent(i, j) + braiding.exponent(j, i)) % n;
                match neg_cartan(n, a, e) {
                    Some(m) => (a as u128 * m as u128 + e as u128) % n as u128 == 0,
                    None => false,
                }
            })
    })
}

/// Weyl groupoid reflection of the full exponent matrix:
/// `b'_jk = B(s_i e_j, s_i e_k)` with `s_i e_j = e_j - a_ij e_i`.
pub fn reflect(braiding: &DiagonalBraiding, i: usize) -> Result<DiagonalBraiding, ReflectionFailure> {
    let obj = braiding.object();
    let m = obj.cartan_row(i)?;
    let r = braiding.rank;
    let images: Vec<Vec<i64>> = (0..r)
        .map(|j| {
            let mut v = vec![0i64; r];
            if j == i {
                v[i] = -1;
            } else {
                v[j] = 1;
                v[i] = m[j] as i64;
            }
            v
        })
        .collect();
    let mut exponents = vec![0; r * r];
    for j in 0..r {
        for k in 0..r {
            exponents[j * r + k] = braiding.bilinear(&images[j], &images[k]);
        }
    }
    Ok(DiagonalBraiding {
        order: braiding.order,
        rank: r,
        exponents,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "camelCase")]
pub enum ExplorationStatus {
    Exists,
    #[serde(rename_all = "camelCase")]
    FailsAt {
        witness: Vec<usize>,
        vertex: usize,
        neighbor: usize,
        edge_label: u64,
    },
    BoundExceeded,
}

#[derive(Debug, Clone)]
pub struct ExplorationResult {
    pub status: ExplorationStatus,
    pub objects: Vec<GroupoidObject>,
    /// Generating arrows `a → r_i(a)` with `r_i(a) ≠ a`.
    pub morphism_count: usize,
}

impl ExplorationResult {
    pub fn exists(&self) -> bool {
        self.status == ExplorationStatus::Exists
    }
}

/// Breadth-first exploration of the Weyl groupoid from `braiding`.
///
/// Objects are deduplicated by their diagram. Failure witnesses are shortest
/// words, ties broken by the lowest vertex index.
pub fn explore_groupoid(braiding: &DiagonalBraiding, max_objects: usize) -> ExplorationResult {
    explore_object(&braiding.object(), max_objects)
}

pub fn explore_object(start: &GroupoidObject, max_objects: usize) -> ExplorationResult {
    let mut index: HashMap<GroupoidObject, usize> = HashMap::new();
    let mut objects = vec![start.clone()];
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    index.insert(start.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut morphisms = 0;
    while let Some(id) = queue.pop_front() {
        let obj = objects[id].clone();
        for i in 0..obj.rank {
            let next = match obj.reflect(i) {
                Ok(next) => next,
                Err(f) => {
                    return ExplorationResult {
                        status: ExplorationStatus::FailsAt {
                            witness: words[id].clone(),
                            vertex: f.vertex,
                            neighbor: f.neighbor,
                            edge_label: f.edge_label,
                        },
                        objects,
                        morphism_count: morphisms,
                    }
                }
            };
            if next == obj {
                continue;
            }
            morphisms += 1;
            if !index.contains_key(&next) {
                if objects.len() >= max_objects {
                    return ExplorationResult {
                        status: ExplorationStatus::BoundExceeded,
                        objects,
                        morphism_count: morphisms,
                    };
                }
                let mut w = words[id].clone();
                w.push(i);
                index.insert(next.clone(), objects.len());
                queue.push_back(objects.len());
                objects.push(next);
                words.push(w);
            }
        }
    }
    ExplorationResult {
        status: ExplorationStatus::Exists,
        objects,
        morphism_count: morphisms,
    }
}

/// Coordinates of a root in the basis of simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Self(v)
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.0.iter().all(|&c| c <= 0) && self.0.iter().any(|&c| c < 0)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootEnumeration {
    Finite(Vec<RootVector>),
    BoundExceeded,
}

/// Positive roots at the object of `braiding`, collected as `w(α_j) > 0`
/// along all reduced paths `w` of the Weyl groupoid ending there.
pub fn enumerate_positive_roots(
    braiding: &DiagonalBraiding,
    max_roots: usize,
) -> Result<RootEnumeration, DiagonalError> {
    positive_roots_of(&braiding.object(), max_roots)
}

pub fn positive_roots_of(
    start: &GroupoidObject,
    max_roots: usize,
) -> Result<RootEnumeration, DiagonalError> {
    let r = start.rank;
    let max_states = max_roots.saturating_mul(100).max(1 << 16);
    let mut obj_index: HashMap<GroupoidObject, usize> = HashMap::new();
    let mut objs: Vec<GroupoidObject> = vec![start.clone()];
    obj_index.insert(start.clone(), 0);
    // per object and vertex: (-a row, target object)
    let mut arrows: Vec<Vec<Option<(Vec<u64>, usize)>>> = vec![vec![None; r]];

    let identity: Vec<i64> = (0..r * r).map(|x| i64::from(x % (r + 1) == 0)).collect();
    let mut seen: HashSet<(usize, Vec<i64>)> = HashSet::new();
    seen.insert((0, identity.clone()));
    let mut queue = VecDeque::from([(0usize, identity)]);
    let mut roots: HashSet<RootVector> = HashSet::new();

    while let Some((obj, w)) = queue.pop_front() {
        for j in 0..r {
            // column j of w is w(α_j)
            let beta: Vec<i64> = (0..r).map(|row| w[row * r + j]).collect();
            let root = RootVector(beta);
            if root.is_negative() {
                continue;
            }
            if !root.is_positive() {
                return Err(DiagonalError::MixedSignRoot(root.0));
            }
            if arrows[obj][j].is_none() {
                let row = objs[obj]
                    .cartan_row(j)
                    .map_err(DiagonalError::RootSystemUndefined)?;
                let next = objs[obj].reflect_with(j, &row);
                let target = match obj_index.get(&next) {
                    Some(&t) => t,
                    None => {
                        let t = objs.len();
                        obj_index.insert(next.clone(), t);
                        objs.push(next);
                        arrows.push(vec![None; r]);
                        t
                    }
                };
                arrows[obj][j] = Some((row, target));
            }
            let (row, target) = arrows[obj][j].clone().expect("filled above");
            // w' = w ∘ s_j: column k becomes w(α_k) + m_k w(α_j), column j negates
            let mut w2 = w.clone();
            for k in 0..r {
                for (rr, &b) in root.0.iter().enumerate() {
                    let idx = rr * r + k;
                    if k == j {
                        w2[idx] = -b;
                    } else if row[k] != 0 {
                        let step = (row[k] as i64).checked_mul(b);
                        match step.and_then(|x| w2[idx].checked_add(x)) {
                            Some(v) => w2[idx] = v,
                            None => return Ok(RootEnumeration::BoundExceeded),
                        }
                    }
                }
            }
            roots.insert(root);
            if roots.len() > max_roots {
                return Ok(RootEnumeration::BoundExceeded);
            }
            let key = (target, w2);
            if !seen.contains(&key) {
                if seen.len() >= max_states {
                    return Ok(RootEnumeration::BoundExceeded);
                }
                seen.insert(key.clone());
                queue.push_back(key);
            }
        }
    }
    let mut out: Vec<RootVector> = roots.into_iter().collect();
    out.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.0.cmp(&a.0)));
    Ok(RootEnumeration::Finite(out))
}

/// `q_α = ξ^{B(α, α)}`.
pub fn root_label(braiding: &DiagonalBraiding, alpha: &RootVector) -> RootOfUnity {
    RootOfUnity::new(braiding.order, braiding.bilinear(&alpha.0, &alpha.0) as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Dimension {
    Finite(u128),
    Infinite,
}

impl Dimension {
    pub fn finite(&self) -> Option<u128> {
        match self {
            Dimension::Finite(d) => Some(*d),
            Dimension::Infinite => None,
        }
    }
}

/// Positive roots with the orders `N_α` of their labels.
pub fn root_orders(
    braiding: &DiagonalBraiding,
    max_roots: usize,
) -> Result<Option<Vec<(RootVector, u64)>>, DiagonalError> {
    let obj = braiding.object();
    match positive_roots_of(&obj, max_roots)? {
        RootEnumeration::BoundExceeded => Ok(None),
        RootEnumeration::Finite(roots) => roots
            .into_iter()
            .map(|alpha| {
                let label = RootOfUnity::new(obj.order, obj.root_exponent(&alpha.0) as i64);
                if label.is_one() {
                    Err(DiagonalError::UndefinedDimension { root: alpha.0 })
                } else {
                    Ok((alpha, label.multiplicative_order()))
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some),
    }
}

/// `∏_α ord(q_α)` over the positive roots.
pub fn pbw_dimension(braiding: &DiagonalBraiding, max_roots: usize) -> Result<Dimension, DiagonalError> {
    match root_orders(braiding, max_roots)? {
        None => Ok(Dimension::Infinite),
        Some(orders) => Ok(Dimension::Finite(
            orders.iter().map(|&(_, n)| n as u128).product(),
        )),
    }
}

/// Coefficients of `∏_α (1 + t^{ht α} + … + t^{(N_α - 1) ht α})` through `max_degree`.
pub fn pbw_hilbert_series(
    braiding: &DiagonalBraiding,
    max_degree: usize,
    max_roots: usize,
) -> Result<Vec<u128>, DiagonalError> {
    let orders = root_orders(braiding, max_roots)?.ok_or(DiagonalError::NotFinite)?;
    let mut series = vec![0u128; max_degree + 1];
    series[0] = 1;
    for (alpha, n) in orders {
        let h = alpha.height() as usize;
        let mut next = vec![0u128; max_degree + 1];
        for (d, &c) in series.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for k in 0..n as usize {
                let deg = d + k * h;
                if deg > max_degree {
                    break;
                }
                next[deg] += c;
            }
        }
        series = next;
    }
    Ok(series)
}

/// Degree of the top PBW monomial, `Σ (N_α - 1) ht α`.
pub fn pbw_top_degree(braiding: &DiagonalBraiding, max_roots: usize) -> Result<usize, DiagonalError> {
    let orders = root_orders(braiding, max_roots)?.ok_or(DiagonalError::NotFinite)?;
    Ok(orders
        .iter()
        .map(|(a, n)| (*n as usize - 1) * a.height() as usize)
        .sum())
}
