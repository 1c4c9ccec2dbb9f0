//! Exhaustive search for TPP triples up to permutation of the triple.
//!
//! `S`, `T` and `U` are grown depth first as strictly increasing id
//! sequences, so subsets are visited in lexicographic order. Only canonical
//! triples (`S <= T <= U`) are generated, which gives one representative per
//! permutation class without remembering visited triples.
//!
//! Pruning rules. Each one only removes subtrees in which every triple
//! fails the TPP (or, for the incumbent cut, cannot beat the best triple
//! found so far), so switching them off never changes the result:
//!
//! * `disjointness`: two subsets already share two elements.
//! * `injectivity`: two index pairs already collide under `x^-1 y`.
//! * `partial_tpp`: the quotient condition already fails on the chosen
//!   elements. A sub-triple of a TPP triple is a TPP triple, so this is exact.
//! * `mult_upper`: capacity bounds on `mpq`; in maximal mode also the cut
//!   against the incumbent.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{check_tpp_quotient, classify, CaseLabel, DisjointnessReport, Subset, TppTriple};
use crate::group::{Elem, Group};

/// Order above which exhaustive search refuses to run unless forced.
pub const DEFAULT_SEARCH_ORDER_LIMIT: usize = 12;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("group order {order} exceeds the search limit of {limit}; pass the override to run anyway")]
    ResourceGuard { order: usize, limit: usize },
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("failed to build worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Enumerate,
    Maximal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PruneFlags {
    pub disjointness: bool,
    pub injectivity: bool,
    pub partial_tpp: bool,
    pub mult_upper: bool,
}

impl PruneFlags {
    pub const ALL: PruneFlags = PruneFlags {
        disjointness: true,
        injectivity: true,
        partial_tpp: true,
        mult_upper: true,
    };
    pub const NONE: PruneFlags = PruneFlags {
        disjointness: false,
        injectivity: false,
        partial_tpp: false,
        mult_upper: false,
    };
}

impl Default for PruneFlags {
    fn default() -> Self {
        PruneFlags::ALL
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Minimum size of each of `S`, `T`, `U`. Use 2 for proper triples.
    pub min_size: usize,
    pub max_results: Option<usize>,
    pub mode: SearchMode,
    pub prune: PruneFlags,
    /// Worker threads; 1 runs on the calling thread.
    pub workers: usize,
    pub order_limit: usize,
    /// Run even when the group order exceeds `order_limit`.
    pub force: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            min_size: 1,
            max_results: None,
            mode: SearchMode::Enumerate,
            prune: PruneFlags::ALL,
            workers: 1,
            order_limit: DEFAULT_SEARCH_ORDER_LIMIT,
            force: false,
        }
    }
}

impl SearchConfig {
    pub fn enumerate(min_size: usize) -> Self {
        SearchConfig {
            min_size,
            ..Default::default()
        }
    }

    pub fn maximal(min_size: usize) -> Self {
        SearchConfig {
            min_size,
            mode: SearchMode::Maximal,
            ..Default::default()
        }
    }

    pub fn with_prune(mut self, prune: PruneFlags) -> Self {
        self.prune = prune;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    fn validate(&self, g: &Group) -> Result<(), SearchError> {
        if self.min_size == 0 {
            return Err(SearchError::InvalidConfig("min_size must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(SearchError::InvalidConfig("workers must be at least 1".into()));
        }
        if g.order() > self.order_limit && !self.force {
            return Err(SearchError::ResourceGuard {
                order: g.order(),
                limit: self.order_limit,
            });
        }
        Ok(())
    }
}

/// One TPP triple found by the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub triple: TppTriple,
    pub mpq: u64,
    pub sum: usize,
    pub report: DisjointnessReport,
    pub canonical: bool,
}

impl SearchResult {
    fn new(g: &Group, triple: TppTriple) -> SearchResult {
        let report = classify(g, &triple).expect("search only builds in-range triples");
        SearchResult {
            mpq: triple.mpq(),
            sum: triple.m() + triple.p() + triple.q(),
            canonical: crate::analysis::is_canonical(&triple),
            triple,
            report,
        }
    }

    /// JSON-lines record. The `group`, `S`, `T`, `U` fields form a valid
    /// triple file.
    pub fn to_record(&self, group_spec: &str) -> SearchRecord {
        SearchRecord {
            group: group_spec.to_string(),
            s: self.triple.s.elements().to_vec(),
            t: self.triple.t.elements().to_vec(),
            u: self.triple.u.elements().to_vec(),
            m: self.triple.m(),
            p: self.triple.p(),
            q: self.triple.q(),
            mpq: self.mpq,
            sum: self.sum,
            case: self.report.case_label,
            w: self.report.w,
            r: self.report.r,
            a_st: self.report.a_st,
            a_tu: self.report.a_tu,
            a_su: self.report.a_su,
            canonical: self.canonical,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchRecord {
    pub group: String,
    #[serde(rename = "S")]
    pub s: Vec<Elem>,
    #[serde(rename = "T")]
    pub t: Vec<Elem>,
    #[serde(rename = "U")]
    pub u: Vec<Elem>,
    pub m: usize,
    pub p: usize,
    pub q: usize,
    pub mpq: u64,
    pub sum: usize,
    pub case: CaseLabel,
    pub w: usize,
    pub r: usize,
    pub a_st: usize,
    pub a_tu: usize,
    pub a_su: usize,
    pub canonical: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    pub total: usize,
    pub max_mpq: Option<u64>,
    pub by_case: BTreeMap<String, usize>,
}

impl SearchSummary {
    fn record(&mut self, r: &SearchResult) {
        self.total += 1;
        self.max_mpq = Some(self.max_mpq.map_or(r.mpq, |m| m.max(r.mpq)));
        *self.by_case.entry(r.report.case_label.to_string()).or_default() += 1;
    }
}

/// Returns every TPP triple with all sizes `>= cfg.min_size`, one per
/// permutation class, in lexicographic order of `(S, T, U)`.
pub fn enumerate_tpp(g: &Group, cfg: &SearchConfig) -> Result<Vec<SearchResult>, SearchError> {
    let mut out = Vec::new();
    enumerate_tpp_with(g, cfg, |r| out.push(r))?;
    Ok(out)
}

/// Streaming form of [`enumerate_tpp`]. With one worker results reach `sink`
/// as they are found; with more, each top-level branch is searched in
/// parallel and flushed in order, so the stream is identical either way.
pub fn enumerate_tpp_with<F: FnMut(SearchResult)>(
    g: &Group,
    cfg: &SearchConfig,
    mut sink: F,
) -> Result<SearchSummary, SearchError> {
    cfg.validate(g)?;
    let mut summary = SearchSummary::default();
    let limit = cfg.max_results.unwrap_or(usize::MAX);
    if limit == 0 {
        return Ok(summary);
    }
    let shared = Shared::new(g, cfg);
    let mut emit = |r: SearchResult| {
        summary.record(&r);
        sink(r);
    };
    if cfg.workers == 1 {
        let mut emitted = 0;
        for first in g.elements() {
            let mut w = Worker::new(&shared, limit - emitted);
            w.run_branch(first, &mut |r| emit(r));
            emitted += w.found;
            if emitted >= limit {
                break;
            }
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build()?;
        let branches: Vec<Vec<SearchResult>> = pool.install(|| {
            g.elements()
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|first| {
                    let mut found = Vec::new();
                    let mut w = Worker::new(&shared, limit);
                    w.run_branch(first, &mut |r| found.push(r));
                    found
                })
                .collect()
        });
        for r in branches.into_iter().flatten().take(limit) {
            emit(r);
        }
    }
    Ok(summary)
}

/// Outcome of [`find_maximal`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MaximalOutcome {
    Found(SearchResult),
    /// No TPP triple meets the minimum subset size.
    Empty,
}

impl MaximalOutcome {
    pub fn result(&self) -> Option<&SearchResult> {
        match self {
            MaximalOutcome::Found(r) => Some(r),
            MaximalOutcome::Empty => None,
        }
    }

    pub fn into_result(self) -> Option<SearchResult> {
        match self {
            MaximalOutcome::Found(r) => Some(r),
            MaximalOutcome::Empty => None,
        }
    }
}

/// A TPP triple maximizing `mpq` among triples with all sizes `>= cfg.min_size`.
/// Ties go to the first triple in enumeration order.
pub fn find_maximal(g: &Group, cfg: &SearchConfig) -> Result<MaximalOutcome, SearchError> {
    let cfg = SearchConfig {
        mode: SearchMode::Maximal,
        ..cfg.clone()
    };
    cfg.validate(g)?;
    let shared = Shared::new(g, &cfg);
    let run = |first: Elem| {
        let mut best: Option<SearchResult> = None;
        let mut w = Worker::new(&shared, usize::MAX);
        w.run_branch(first, &mut |r| best = Some(r));
        best
    };
    let per_branch: Vec<Option<SearchResult>> = if cfg.workers == 1 {
        g.elements().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build()?;
        pool.install(|| g.elements().collect::<Vec<_>>().into_par_iter().map(run).collect())
    };
    let mut best: Option<SearchResult> = None;
    for r in per_branch.into_iter().flatten() {
        if best.as_ref().is_none_or(|b| r.mpq > b.mpq) {
            best = Some(r);
        }
    }
    Ok(best.map_or(MaximalOutcome::Empty, MaximalOutcome::Found))
}

/// Read-only state shared by all workers.
struct Shared<'g> {
    g: &'g Group,
    n: usize,
    min_size: usize,
    maximal: bool,
    prune: PruneFlags,
    /// Best `mpq` seen by any worker (maximal mode).
    global_best: AtomicU64,
}

impl<'g> Shared<'g> {
    fn new(g: &'g Group, cfg: &SearchConfig) -> Self {
        Shared {
            g,
            n: g.order(),
            min_size: cfg.min_size,
            maximal: cfg.mode == SearchMode::Maximal,
            prune: cfg.prune,
            global_best: AtomicU64::new(0),
        }
    }
}

/// Could some extension of the strictly increasing `prefix` compare `>= bound`?
fn can_reach_geq(prefix: &[Elem], bound: &[Elem]) -> bool {
    match prefix.iter().zip(bound).find(|(a, b)| a != b) {
        Some((a, b)) => a > b,
        None => true,
    }
}

/// Largest `m*p*q` with `m` in `m_range`, `p`, `q` in the given ranges and the
/// pairwise products capped by `n` (each embedding map is injective on a TPP
/// triple, so `mp, pq, mq <= n`).
fn capacity_bound(n: usize, m_range: (usize, usize), p_range: (usize, usize), q_max: usize) -> u64 {
    let mut best = 0u64;
    for m in m_range.0..=m_range.1.min(n) {
        let cap = n / m;
        for p in p_range.0..=p_range.1.min(cap) {
            let q = q_max.min(cap).min(n / p);
            best = best.max((m * p * q) as u64);
        }
    }
    best
}

struct Worker<'s, 'g> {
    sh: &'s Shared<'g>,
    remaining: usize,
    found: usize,
    local_best: u64,
    s: Vec<Elem>,
    t: Vec<Elem>,
    u: Vec<Elem>,
    in_s: Vec<bool>,
    in_t: Vec<bool>,
    rq_s: Vec<bool>,
    /// multiplicities, so removing an element can undo its quotients
    rq_t: Vec<u32>,
    rq_u: Vec<u32>,
    forbidden_u: Vec<bool>,
    img_st: Vec<bool>,
    img_tu: Vec<bool>,
    img_su: Vec<bool>,
    st_shared: usize,
    tu_shared: usize,
    su_shared: usize,
}

impl<'s, 'g> Worker<'s, 'g> {
    fn new(sh: &'s Shared<'g>, remaining: usize) -> Self {
        let n = sh.n;
        Worker {
            sh,
            remaining,
            found: 0,
            local_best: 0,
            s: Vec::new(),
            t: Vec::new(),
            u: Vec::new(),
            in_s: vec![false; n],
            in_t: vec![false; n],
            rq_s: vec![false; n],
            rq_t: vec![0; n],
            rq_u: vec![0; n],
            forbidden_u: vec![false; n],
            img_st: vec![false; n],
            img_tu: vec![false; n],
            img_su: vec![false; n],
            st_shared: 0,
            tu_shared: 0,
            su_shared: 0,
        }
    }

    fn done(&self) -> bool {
        self.found >= self.remaining
    }

    /// Incumbent cut: in maximal mode a branch whose best possible `mpq` is
    /// no better than what is already known is skipped. Only this worker's
    /// own incumbent may be matched; another worker's must be beaten, so
    /// the earliest maximizer survives regardless of scheduling.
    fn cut(&self, bound: u64) -> bool {
        self.sh.maximal
            && self.sh.prune.mult_upper
            && (bound <= self.local_best || bound < self.sh.global_best.load(Ordering::Relaxed))
    }

    fn run_branch(&mut self, first: Elem, sink: &mut dyn FnMut(SearchResult)) {
        self.push_s(first);
        self.grow_s(sink);
        self.pop_s();
    }

    fn push_s(&mut self, x: Elem) {
        self.s.push(x);
        self.in_s[x as usize] = true;
    }

    fn pop_s(&mut self) {
        let x = self.s.pop().expect("nonempty");
        self.in_s[x as usize] = false;
    }

    fn grow_s(&mut self, sink: &mut dyn FnMut(SearchResult)) {
        let n = self.sh.n;
        let last = *self.s.last().expect("nonempty") as usize;
        let m_max = self.s.len() + (n - 1 - last);
        if self.cut(capacity_bound(n, (self.s.len(), m_max), (1, n), n)) {
            return;
        }
        if self.s.len() >= self.sh.min_size {
            self.search_t(sink);
        }
        for x in (last + 1)..n {
            if self.done() {
                return;
            }
            self.push_s(x as Elem);
            self.grow_s(sink);
            self.pop_s();
        }
    }

    fn search_t(&mut self, sink: &mut dyn FnMut(SearchResult)) {
        let g = self.sh.g;
        self.rq_s.iter_mut().for_each(|b| *b = false);
        for &a in &self.s {
            for &b in &self.s {
                self.rq_s[g.mul(a, g.inv(b)) as usize] = true;
            }
        }
        let start = self.s[0];
        for x in start..self.sh.n as Elem {
            if self.done() {
                return;
            }
            if let Some(undo) = self.push_t(x) {
                if can_reach_geq(&self.t, &self.s) {
                    self.grow_t(sink);
                }
                self.pop_t(undo);
            }
        }
    }

    /// Adds `x` to `T`. Returns `None` (with nothing changed) when a prune
    /// rule rejects every extension.
    fn push_t(&mut self, x: Elem) -> Option<Undo> {
        let g = self.sh.g;
        let pr = self.sh.prune;
        let shared = self.in_s[x as usize];
        if pr.disjointness && shared && self.st_shared >= 1 {
            return None;
        }
        let mut undo = Undo::default();
        if pr.injectivity {
            for &s in &self.s {
                let v = g.mul(g.inv(s), x) as usize;
                if self.img_st[v] || undo.img_a.contains(&v) {
                    return None;
                }
                undo.img_a.push(v);
            }
        }
        if pr.partial_tpp {
            for &y in self.t.iter().chain(std::iter::once(&x)) {
                for v in [g.mul(x, g.inv(y)), g.mul(y, g.inv(x))] {
                    if v != 0 && self.rq_s[v as usize] {
                        return None;
                    }
                    undo.rq.push(v as usize);
                }
            }
        }
        for &v in &undo.img_a {
            self.img_st[v] = true;
        }
        for &v in &undo.rq {
            self.rq_t[v] += 1;
        }
        self.st_shared += shared as usize;
        self.in_t[x as usize] = true;
        self.t.push(x);
        Some(undo)
    }

    fn pop_t(&mut self, undo: Undo) {
        let x = self.t.pop().expect("nonempty");
        self.in_t[x as usize] = false;
        self.st_shared -= self.in_s[x as usize] as usize;
        for v in undo.img_a {
            self.img_st[v] = false;
        }
        for v in undo.rq {
            self.rq_t[v] -= 1;
        }
    }

    fn grow_t(&mut self, sink: &mut dyn FnMut(SearchResult)) {
        let n = self.sh.n;
        let last = *self.t.last().expect("nonempty") as usize;
        let (m, p) = (self.s.len(), self.t.len());
        let p_max = p + (n - 1 - last);
        if self.cut(capacity_bound(n, (m, m), (p, p_max), n)) {
            return;
        }
        if self.sh.prune.mult_upper && m * p > n {
            return;
        }
        if p >= self.sh.min_size && self.t.as_slice() >= self.s.as_slice() {
            self.search_u(sink);
        }
        for x in (last + 1)..n {
            if self.done() {
                return;
            }
            if let Some(undo) = self.push_t(x as Elem) {
                if can_reach_geq(&self.t, &self.s) {
                    self.grow_t(sink);
                }
                self.pop_t(undo);
            }
        }
    }

    fn search_u(&mut self, sink: &mut dyn FnMut(SearchResult)) {
        let g = self.sh.g;
        if self.sh.prune.partial_tpp {
            // q3 = (q1 q2)^-1 closes a forbidden product
            self.forbidden_u.iter_mut().for_each(|b| *b = false);
            let rs: Vec<Elem> = g.elements().filter(|&e| self.rq_s[e as usize]).collect();
            let rt: Vec<Elem> = g.elements().filter(|&e| self.rq_t[e as usize] > 0).collect();
            for &q1 in &rs {
                for &q2 in &rt {
                    if q1 != 0 || q2 != 0 {
                        self.forbidden_u[g.inv(g.mul(q1, q2)) as usize] = true;
                    }
                }
            }
        }
        let start = self.t[0];
        for x in start..self.sh.n as Elem {
            if self.done() {
                return;
            }
            if let Some(undo) = self.push_u(x) {
                if can_reach_geq(&self.u, &self.t) {
                    self.grow_u(sink);
                }
                self.pop_u(undo);
            }
        }
    }

    fn push_u(&mut self, x: Elem) -> Option<Undo> {
        let g = self.sh.g;
        let pr = self.sh.prune;
        let in_s = self.in_s[x as usize];
        let in_t = self.in_t[x as usize];
        if pr.disjointness && ((in_s && self.su_shared >= 1) || (in_t && self.tu_shared >= 1)) {
            return None;
        }
        let mut undo = Undo::default();
        if pr.injectivity {
            for &t in &self.t {
                let v = g.mul(g.inv(t), x) as usize;
                if self.img_tu[v] || undo.img_a.contains(&v) {
                    return None;
                }
                undo.img_a.push(v);
            }
            for &s in &self.s {
                let v = g.mul(g.inv(s), x) as usize;
                if self.img_su[v] || undo.img_b.contains(&v) {
                    return None;
                }
                undo.img_b.push(v);
            }
        }
        if pr.partial_tpp {
            for &y in self.u.iter().chain(std::iter::once(&x)) {
                for v in [g.mul(x, g.inv(y)), g.mul(y, g.inv(x))] {
                    if self.forbidden_u[v as usize] {
                        return None;
                    }
                    undo.rq.push(v as usize);
                }
            }
        }
        for &v in &undo.img_a {
            self.img_tu[v] = true;
        }
        for &v in &undo.img_b {
            self.img_su[v] = true;
        }
        for &v in &undo.rq {
            self.rq_u[v] += 1;
        }
        self.su_shared += in_s as usize;
        self.tu_shared += in_t as usize;
        self.u.push(x);
        Some(undo)
    }

    fn pop_u(&mut self, undo: Undo) {
        let x = self.u.pop().expect("nonempty");
        self.su_shared -= self.in_s[x as usize] as usize;
        self.tu_shared -= self.in_t[x as usize] as usize;
        for v in undo.img_a {
            self.img_tu[v] = false;
        }
        for v in undo.img_b {
            self.img_su[v] = false;
        }
        for v in undo.rq {
            self.rq_u[v] -= 1;
        }
    }

    fn grow_u(&mut self, sink: &mut dyn FnMut(SearchResult)) {
        let n = self.sh.n;
        let last = *self.u.last().expect("nonempty") as usize;
        let (m, p, q) = (self.s.len(), self.t.len(), self.u.len());
        let q_max = q + (n - 1 - last);
        if self.cut(capacity_bound(n, (m, m), (p, p), q_max)) {
            return;
        }
        if self.sh.prune.mult_upper && (m * q > n || p * q > n) {
            return;
        }
        if q >= self.sh.min_size && self.u.as_slice() >= self.t.as_slice() {
            let mpq = (m * p * q) as u64;
            if !self.sh.maximal || mpq > self.local_best {
                self.leaf(sink);
            }
        }
        for x in (last + 1)..n {
            if self.done() {
                return;
            }
            if let Some(undo) = self.push_u(x as Elem) {
                if can_reach_geq(&self.u, &self.t) {
                    self.grow_u(sink);
                }
                self.pop_u(undo);
            }
        }
    }

    fn leaf(&mut self, sink: &mut dyn FnMut(SearchResult)) {
        let g = self.sh.g;
        let triple = TppTriple::new(
            Subset::from_sorted(self.s.clone()),
            Subset::from_sorted(self.t.clone()),
            Subset::from_sorted(self.u.clone()),
        );
        if !check_tpp_quotient(g, &triple).expect("in range") {
            return;
        }
        let result = SearchResult::new(g, triple);
        if self.sh.maximal {
            self.local_best = result.mpq;
            self.sh.global_best.fetch_max(result.mpq, Ordering::Relaxed);
        } else {
            self.found += 1;
        }
        sink(result);
    }
}

#[derive(Default)]
struct Undo {
    img_a: Vec<usize>,
    img_b: Vec<usize>,
    rq: Vec<usize>,
}
