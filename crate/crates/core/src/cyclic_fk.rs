//! Pipelines for the cyclic-group braidings `q_ij = ξ^i`: the Weyl groupoid
//! existence sweep, the `pr | n` counterexample family and the enumeration of
//! finite indecomposable subsystems.
//!
//! Public vertex numbering follows the labels: vertex `i` of `C_n` carries
//! `ξ^i`, so witnesses are reported as lists of labels in `1..n`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{is_prime, prime_factors};
use crate::diagonal::{
    cyclic_braiding, explore_object, is_cartan_type, positive_roots_of, root_orders,
    DiagonalBraiding, ExplorationStatus, GeneralizedDynkinDiagram, GroupoidObject,
    ReflectionFailure, RootEnumeration, DEFAULT_MAX_OBJECTS,
};

pub const DEFAULT_HEURISTIC_CAP: usize = 200;

/// The full braiding of `C_n` on the labels `1..n`.
pub fn full_braiding(n: u64) -> DiagonalBraiding {
    cyclic_braiding(n, &(1..n).collect::<Vec<_>>()).expect("n >= 2")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Method {
    Prime,
    Inherited,
    Heuristic,
    Subdiagram,
    Exploration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "camelCase")]
pub enum SweepStatus {
    Exists,
    #[serde(rename_all = "camelCase")]
    FailsAt {
        /// Reflection labels, applied first to last.
        witness: Vec<u64>,
        /// Label of the vertex whose reflection is undefined after the witness.
        vertex: u64,
        neighbor: u64,
        /// Exponent of `q_ij q_ji` at the offending edge.
        edge_label: u64,
    },
    BoundExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepEntry {
    pub n: u64,
    #[serde(flatten)]
    pub status: SweepStatus,
    pub method: Method,
    /// For inherited failures, the divisor whose failure was lifted.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub divisor: Option<u64>,
    pub heuristic_used: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub objects: Option<usize>,
    pub elapsed_ms: u64,
}

impl SweepEntry {
    pub fn exists(&self) -> bool {
        self.status == SweepStatus::Exists
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepReport {
    pub range: [u64; 2],
    pub entries: BTreeMap<u64, SweepEntry>,
}

impl SweepReport {
    /// Values of `n` where the groupoid was found to exist.
    pub fn existing(&self) -> Vec<u64> {
        self.entries.values().filter(|e| e.exists()).map(|e| e.n).collect()
    }

    /// Whether every status agrees with "prime or 4".
    pub fn matches_prime_or_four(&self) -> bool {
        self.entries
            .values()
            .all(|e| e.exists() == (is_prime(e.n) || e.n == 4))
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub max_n: u64,
    pub heuristic_first: bool,
    /// Recompute every `n` directly instead of lifting failures from divisors.
    pub verify: bool,
    pub heuristic_cap: usize,
    pub max_objects: usize,
}

impl SweepConfig {
    pub fn new(max_n: u64) -> Self {
        Self {
            max_n,
            heuristic_first: true,
            verify: false,
            heuristic_cap: DEFAULT_HEURISTIC_CAP,
            max_objects: DEFAULT_MAX_OBJECTS,
        }
    }
}

pub fn sweep_groupoid_existence(max_n: u64, heuristic_first: bool) -> SweepReport {
    let config = SweepConfig {
        heuristic_first,
        ..SweepConfig::new(max_n)
    };
    sweep_with(&config, BTreeMap::new(), |_| {})
}

/// Runs the sweep on the current rayon pool.
///
/// Entries already present in `done` are reused; `on_entry` sees every newly
/// computed entry. Values of `n` are processed in waves by their number of
/// prime factors so that divisors are always settled first.
pub fn sweep_with<F>(config: &SweepConfig, mut done: BTreeMap<u64, SweepEntry>, on_entry: F) -> SweepReport
where
    F: Fn(&SweepEntry) + Sync,
{
    done.retain(|&n, _| (2..=config.max_n).contains(&n));
    let mut waves: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for n in 2..=config.max_n {
        if !done.contains_key(&n) {
            let omega = omega(n);
            waves.entry(omega).or_default().push(n);
        }
    }
    for (_, wave) in waves {
        let known = &done;
        let results: Vec<SweepEntry> = wave
            .par_iter()
            .map(|&n| {
                let entry = check_n(n, config, known);
                on_entry(&entry);
                entry
            })
            .collect();
        for e in results {
            done.insert(e.n, e);
        }
    }
    SweepReport {
        range: [2, config.max_n],
        entries: done,
    }
}

fn omega(n: u64) -> usize {
    let mut m = n;
    let mut count = 0;
    for p in prime_factors(n) {
        while m % p == 0 {
            m /= p;
            count += 1;
        }
    }
    count
}

/// Status of the groupoid of `C_n`, computed without divisor information.
pub fn check_groupoid(n: u64) -> SweepEntry {
    let config = SweepConfig {
        verify: true,
        ..SweepConfig::new(n)
    };
    check_n(n, &config, &BTreeMap::new())
}

fn check_n(n: u64, config: &SweepConfig, known: &BTreeMap<u64, SweepEntry>) -> SweepEntry {
    let start = Instant::now();
    let elapsed = |start: Instant| start.elapsed().as_millis() as u64;
    let full = full_braiding(n);
    let obj = full.object();
    let mk = |status, method, divisor, heuristic_used, objects| SweepEntry {
        n,
        status,
        method,
        divisor,
        heuristic_used,
        objects,
        elapsed_ms: elapsed(start),
    };

    if n != 4 && is_cartan_type(&full) {
        return mk(SweepStatus::Exists, Method::Prime, None, false, None);
    }

    if !config.verify {
        let inherited = n
            .to_u64_divisors()
            .into_iter()
            .filter(|&d| d >= 2 && d < n)
            .find_map(|d| match known.get(&d).map(|e| &e.status) {
                Some(SweepStatus::FailsAt { witness, vertex, .. }) => {
                    let scale = n / d;
                    let word: Vec<usize> = witness.iter().map(|&l| (l * scale - 1) as usize).collect();
                    let v = (vertex * scale - 1) as usize;
                    Some((d, settle(&obj, &word, Some(v))))
                }
                _ => None,
            });
        if let Some((d, Some(status))) = inherited {
            return mk(status, Method::Inherited, Some(d), false, None);
        }
    }

    if config.heuristic_first {
        if let Some(status) = heuristic_search(n, &obj, config.heuristic_cap) {
            return mk(status, Method::Heuristic, None, true, None);
        }
        if let Some(status) = subdiagram_search(n, &obj, 2) {
            return mk(status, Method::Subdiagram, None, true, None);
        }
    }

    let res = explore_object(&obj, config.max_objects);
    let status = match res.status {
        ExplorationStatus::Exists => SweepStatus::Exists,
        ExplorationStatus::BoundExceeded => SweepStatus::BoundExceeded,
        ExplorationStatus::FailsAt {
            witness,
            vertex,
            neighbor,
            edge_label,
        } => SweepStatus::FailsAt {
            witness: witness.iter().map(|&v| v as u64 + 1).collect(),
            vertex: vertex as u64 + 1,
            neighbor: neighbor as u64 + 1,
            edge_label,
        },
    };
    mk(
        status,
        Method::Exploration,
        None,
        config.heuristic_first,
        Some(res.objects.len()),
    )
}

trait Divisors {
    fn to_u64_divisors(self) -> Vec<u64>;
}

impl Divisors for u64 {
    fn to_u64_divisors(self) -> Vec<u64> {
        (1..=self).filter(|d| self % d == 0).collect()
    }
}

fn failure_status(word: &[usize], f: &ReflectionFailure) -> SweepStatus {
    SweepStatus::FailsAt {
        witness: word.iter().map(|&v| v as u64 + 1).collect(),
        vertex: f.vertex as u64 + 1,
        neighbor: f.neighbor as u64 + 1,
        edge_label: f.edge_label,
    }
}

/// Replays `word` on `obj` and returns the first genuine failure, if any:
/// either a letter of the word, or `last` (or any vertex when `None`) at the end.
fn settle(obj: &GroupoidObject, word: &[usize], last: Option<usize>) -> Option<SweepStatus> {
    let mut cur = obj.clone();
    for (k, &i) in word.iter().enumerate() {
        match cur.reflect(i) {
            Ok(next) => cur = next,
            Err(f) => return Some(failure_status(&word[..k], &f)),
        }
    }
    let f = match last {
        Some(v) => cur.cartan_row(v).err(),
        None => cur.failing_vertex(),
    }?;
    Some(failure_status(word, &f))
}

/// Pairs `(i, j)` of labels, `i ≠ j`, ordered by `max(i, j)` then lexicographically.
fn heuristic_pairs(n: u64) -> impl Iterator<Item = (u64, u64)> {
    (2..n).flat_map(|hi| {
        (1..hi)
            .map(move |lo| (lo, hi))
            .chain((1..hi).map(move |lo| (hi, lo)))
            .collect::<Vec<_>>()
    })
}

/// Tries the words `s_j s_i s_p` (applied `s_p` first), `p` the smallest
/// prime factor of `n`, checking for an undefined reflection after every
/// prefix. All two-letter prefixes `s_i s_p` are scanned before the first
/// `cap` three-letter words.
pub fn heuristic_search(n: u64, obj: &GroupoidObject, cap: usize) -> Option<SweepStatus> {
    let p = *prime_factors(n).first()?;
    let vp = (p - 1) as usize;
    let after_p = match obj.reflect(vp) {
        Ok(o) => o,
        Err(f) => return Some(failure_status(&[], &f)),
    };
    if let Some(f) = after_p.failing_vertex() {
        return Some(failure_status(&[vp], &f));
    }
    let mut after_i: Vec<Option<GroupoidObject>> = vec![None; obj.rank()];
    for vi in (0..obj.rank()).filter(|&v| v != vp) {
        let second = match after_p.reflect(vi) {
            Ok(o) => o,
            Err(f) => return Some(failure_status(&[vp], &f)),
        };
        if let Some(f) = second.failing_vertex() {
            return Some(failure_status(&[vp, vi], &f));
        }
        after_i[vi] = Some(second);
    }
    for (i, j) in heuristic_pairs(n).take(cap) {
        let (vi, vj) = ((i - 1) as usize, (j - 1) as usize);
        let second = match &after_i[vi] {
            Some(o) => o,
            None => &after_p,
        };
        let word: &[usize] = if vi == vp { &[vp, vj] } else { &[vp, vi, vj] };
        match second.reflect(vj) {
            Ok(third) => {
                if let Some(f) = third.failing_vertex() {
                    return Some(failure_status(word, &f));
                }
            }
            Err(f) => return Some(failure_status(&word[..word.len() - 1], &f)),
        }
    }
    None
}

/// Explores the groupoids of all connected sub-diagrams of rank `≤ max_rank`.
/// A failure there replays on the full diagram, since reflections at vertices
/// of a sub-diagram commute with restriction to it.
pub fn subdiagram_search(n: u64, obj: &GroupoidObject, max_rank: usize) -> Option<SweepStatus> {
    let b = full_braiding(n);
    for rank in 2..=max_rank {
        let found = combinations(n as usize - 1, rank)
            .into_par_iter()
            .find_map_first(|verts| {
                let sub = b.restrict(&verts).object();
                if !sub.diagram().is_connected() {
                    return None;
                }
                match explore_object(&sub, 10_000).status {
                    ExplorationStatus::FailsAt { witness, vertex, .. } => {
                        let word: Vec<usize> = witness.iter().map(|&w| verts[w]).collect();
                        settle(obj, &word, Some(verts[vertex]))
                    }
                    _ => None,
                }
            });
        if found.is_some() {
            return found;
        }
    }
    None
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Checks that a failure entry replays to an undefined reflection on `C_n`.
pub fn replay_witness(n: u64, status: &SweepStatus) -> bool {
    let SweepStatus::FailsAt { witness, vertex, .. } = status else {
        return false;
    };
    if witness.iter().chain([vertex]).any(|&l| l == 0 || l >= n) {
        return false;
    }
    let word: Vec<usize> = witness.iter().map(|&l| (l - 1) as usize).collect();
    match full_braiding(n).object().replay(&word) {
        Ok(end) => end.reflect((*vertex - 1) as usize).is_err(),
        Err(_) => false,
    }
}

/// Pairs `(p, r)` with `p` prime, `r ≥ 2`, `pr | n` and `p | 2r - 1`, plus
/// `(2, 3)` whenever `6 | n`.
pub fn counterexample_family(n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for p in prime_factors(n) {
        for r in 2..=n / p {
            if (n % (p * r) == 0) && (2 * r - 1) % p == 0 {
                out.push((p, r));
            }
        }
    }
    if n % 6 == 0 {
        out.push((2, 3));
    }
    out.sort();
    out.dedup();
    out
}

/// Dimension quoted in the standard table of finite rank-2 and rank-3
/// subsystems, keyed by `n` and one member subset.
const REFERENCE_DIMENSIONS: &[(u64, &[u64], u128)] = &[
    (4, &[1, 2], 16),
    (4, &[1, 2, 3], 256),
    (5, &[1, 2], 625),
    (6, &[1, 3], 72),
    (6, &[1, 4], 108),
    (6, &[2, 3], 36),
    (7, &[1, 3], 117_649),
    (8, &[2, 7], 256),
    (10, &[7, 5], 40_000),
];

/// The quoted factorization where it disagrees with the quoted value.
const REFERENCE_NOTES: &[(u64, &[u64], &str)] = &[(6, &[2, 3], "quoted as 2²·3³=36, but 2²·3³ = 108")];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReferenceCheck {
    pub quoted: u128,
    pub agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SubsystemRecord {
    pub n: u64,
    pub subset: Vec<u64>,
    /// Every subset whose diagram lies in the same Weyl groupoid, up to
    /// vertex relabelling and `ξ ↦ ξ^k`.
    pub members: Vec<Vec<u64>>,
    pub diagram: GeneralizedDynkinDiagram,
    pub cartan_type: bool,
    pub finite: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub positive_root_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dimension: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reference: Option<ReferenceCheck>,
}

#[derive(Debug, Clone)]
pub struct SubsystemOptions {
    pub max_rank: usize,
    /// Also report classes with `gcd(I ∪ {n}) > 1`, which already live in `C_d` for `d | n`.
    pub include_inherited: bool,
    /// Also report connected subsets whose root system is not finite.
    pub include_infinite: bool,
    pub max_roots: usize,
}

impl SubsystemOptions {
    pub fn new(max_rank: usize) -> Self {
        Self {
            max_rank,
            include_inherited: false,
            include_infinite: false,
            max_roots: 1000,
        }
    }
}

pub fn enumerate_finite_subsystems(n: u64, max_rank: usize) -> Vec<SubsystemRecord> {
    enumerate_subsystems(n, &SubsystemOptions::new(max_rank))
}

/// Smallest [`class_key`] over the Weyl groupoid component of `obj`, or the
/// key of `obj` alone when the component does not close within `bound` objects.
pub fn groupoid_key(obj: &GroupoidObject, bound: usize) -> Vec<u64> {
    let res = explore_object(obj, bound);
    if res.status == ExplorationStatus::BoundExceeded {
        return class_key(obj);
    }
    res.objects.iter().map(class_key).min().unwrap_or_default()
}

/// Canonical key of a diagram under simultaneous vertex permutation and
/// Galois action `ξ ↦ ξ^k`, `gcd(k, n) = 1`.
pub fn class_key(obj: &GroupoidObject) -> Vec<u64> {
    let n = obj.order();
    let r = obj.rank();
    let units: Vec<u64> = (1..n.max(2)).filter(|k| k.gcd(&n) == 1).collect();
    let mut best: Option<Vec<u64>> = None;
    let mut perm: Vec<usize> = (0..r).collect();
    let mut perms = Vec::new();
    permutations(&mut perm, 0, &mut perms);
    for k in units {
        for p in &perms {
            let key: Vec<u64> = (0..r)
                .flat_map(|i| (0..r).map(move |j| (i, j)))
                .map(|(i, j)| obj.entry(p[i], p[j]) * k % n)
                .collect();
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
    }
    best.unwrap_or_default()
}

fn permutations(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, out);
        p.swap(k, i);
    }
}

enum Finiteness {
    Finite { roots: usize, dimension: u128 },
    Infinite,
}

fn finiteness(b: &DiagonalBraiding, max_roots: usize) -> Finiteness {
    match positive_roots_of(&b.object(), max_roots) {
        Ok(RootEnumeration::Finite(_)) => match root_orders(b, max_roots) {
            Ok(Some(orders)) => Finiteness::Finite {
                roots: orders.len(),
                dimension: orders.iter().map(|&(_, o)| o as u128).product(),
            },
            _ => Finiteness::Infinite,
        },
        _ => Finiteness::Infinite,
    }
}

/// Connected subsets of `{1..n-1}` up to `max_rank`, grouped into classes.
///
/// A subset can only be finite if all its connected proper subsets are, so
/// larger subsets are examined only when every smaller connected piece passed.
pub fn enumerate_subsystems(n: u64, opts: &SubsystemOptions) -> Vec<SubsystemRecord> {
    let full = full_braiding(n);
    let labels: Vec<u64> = (1..n).collect();
    let mut finite_sets: HashSet<Vec<usize>> = HashSet::new();
    let mut records: Vec<SubsystemRecord> = Vec::new();
    let mut class_index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut class_finite: HashMap<Vec<u64>, bool> = HashMap::new();

    for rank in 1..=opts.max_rank.min(labels.len()) {
        for verts in combinations(labels.len(), rank) {
            let sub = full.restrict(&verts);
            let obj = sub.object();
            let diagram = obj.diagram();
            if !diagram.is_connected() {
                continue;
            }
            let pieces_finite = (0..rank).all(|drop| {
                let rest: Vec<usize> = verts
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != drop)
                    .map(|(_, &v)| v)
                    .collect();
                rest.is_empty() || connected_pieces_finite(&full, &rest, &finite_sets)
            });
            if !pieces_finite && !opts.include_infinite {
                continue;
            }
            let finite = pieces_finite && {
                let key = class_key(&obj);
                match class_finite.get(&key) {
                    Some(&f) => f,
                    None => {
                        let f = matches!(finiteness(&sub, opts.max_roots), Finiteness::Finite { .. });
                        class_finite.insert(key, f);
                        f
                    }
                }
            };
            if finite {
                finite_sets.insert(verts.clone());
            }
            if rank == 1 {
                continue;
            }
            let subset: Vec<u64> = verts.iter().map(|&v| labels[v]).collect();
            let primitive = subset.iter().fold(n, |g, &x| g.gcd(&x)) == 1;
            if (!primitive && !opts.include_inherited) || (!finite && !opts.include_infinite) {
                continue;
            }
            let key = groupoid_key(&obj, 200);
            if let Some(&idx) = class_index.get(&key) {
                records[idx].members.push(subset);
                continue;
            }
            let (positive_root_count, dimension) = match finite.then(|| finiteness(&sub, opts.max_roots)) {
                Some(Finiteness::Finite { roots, dimension }) => (Some(roots), Some(dimension)),
                _ => (None, None),
            };
            class_index.insert(key, records.len());
            records.push(SubsystemRecord {
                n,
                subset: subset.clone(),
                members: vec![subset],
                diagram,
                cartan_type: is_cartan_type(&sub),
                finite,
                positive_root_count,
                dimension,
                reference: None,
            });
        }
    }
    for rec in &mut records {
        rec.reference = reference_for(rec);
    }
    records
}

fn connected_pieces_finite(full: &DiagonalBraiding, verts: &[usize], finite_sets: &HashSet<Vec<usize>>) -> bool {
    let d = full.restrict(verts).object().diagram();
    let mut comp: Vec<usize> = (0..verts.len()).collect();
    for e in &d.edges {
        let (a, b) = (comp[e.i], comp[e.j]);
        for c in comp.iter_mut() {
            if *c == b {
                *c = a;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, &c) in comp.iter().enumerate() {
        groups.entry(c).or_default().push(verts[k]);
    }
    groups.values().all(|g| finite_sets.contains(g))
}

fn reference_for(rec: &SubsystemRecord) -> Option<ReferenceCheck> {
    let (_, set, quoted) = REFERENCE_DIMENSIONS
        .iter()
        .find(|(n, set, _)| *n == rec.n && rec.members.iter().any(|m| same_set(m, set)))?;
    let note = REFERENCE_NOTES
        .iter()
        .find(|(n, s, _)| *n == rec.n && same_set(s, set))
        .map(|(_, _, note)| note.to_string());
    Some(ReferenceCheck {
        quoted: *quoted,
        agrees: rec.dimension == Some(*quoted),
        note,
    })
}

fn same_set(a: &[u64], b: &[u64]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort();
    b.sort();
    a == b
}
