//! Coloring families `V(G) → [t]` that hit every ordered window.
//!
//! A family is *permuting* when, for every ordered vertex sequence `W` with
//! `|W| ≤ t` and every label window `[i, i+|W|-1]`, some member maps `W_a` to
//! `i+a-1` for all `a`. Families are indexed lazily: member `i` is computed on
//! demand, so even multi-million element families cost no memory.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest family any backend will enumerate unless configured otherwise.
pub const DEFAULT_FAMILY_BUDGET: u64 = 1 << 24;
pub const DEFAULT_DELTA: f64 = 1e-3;

/// Monte Carlo members are drawn in blocks sharing one RNG stream.
const MC_BLOCK: u64 = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PermuterError {
    #[error("{backend} family would need {needed} functions, budget is {budget}; use the montecarlo backend")]
    OverBudget { backend: &'static str, needed: String, budget: u64 },
    #[error("label range must be at least 1")]
    EmptyRange,
    #[error("label range {0} exceeds the supported maximum of 65535")]
    RangeTooLarge(usize),
    #[error("delta must lie in (0, 1), got {0}")]
    BadDelta(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Backend {
    Deterministic,
    Exhaustive,
    MonteCarlo { seed: u64, samples: Option<u64> },
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Deterministic => "deterministic",
            Backend::Exhaustive => "exhaustive",
            Backend::MonteCarlo { .. } => "montecarlo",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PermuterOptions {
    pub budget: u64,
    pub delta: f64,
}

impl Default for PermuterOptions {
    fn default() -> Self {
        PermuterOptions { budget: DEFAULT_FAMILY_BUDGET, delta: DEFAULT_DELTA }
    }
}

/// A family of maps `[n] → [t]` given by index, each injective on every set
/// of at most `target()` elements it is responsible for.
pub trait InjectiveFamily: Send + Sync {
    fn len(&self) -> u64;
    fn target(&self) -> u16;
    fn domain(&self) -> usize;
    /// Writes member `index` as labels in `1..=target()`.
    fn fill(&self, index: u64, out: &mut [u16]);
}

/// Vertex `j` gets label `j+1`; injective on everything, needs `n ≤ t`.
#[derive(Clone, Debug)]
pub struct IdentitySplitter {
    n: usize,
    t: u16,
}

impl IdentitySplitter {
    pub fn new(n: usize, t: u16) -> Option<IdentitySplitter> {
        (n <= t as usize).then_some(IdentitySplitter { n, t })
    }
}

impl InjectiveFamily for IdentitySplitter {
    fn len(&self) -> u64 {
        1
    }
    fn target(&self) -> u16 {
        self.t
    }
    fn domain(&self) -> usize {
        self.n
    }
    fn fill(&self, _index: u64, out: &mut [u16]) {
        for (j, o) in out.iter_mut().enumerate() {
            *o = j as u16 + 1;
        }
    }
}

/// All `t^n` maps, member `i` reading `i` as base-`t` digits (vertex 0 least significant).
#[derive(Clone, Debug)]
pub struct AllFunctions {
    n: usize,
    t: u16,
    len: u64,
}

impl AllFunctions {
    pub fn new(n: usize, t: u16) -> Option<AllFunctions> {
        let len = (t as u64).checked_pow(n as u32)?;
        Some(AllFunctions { n, t, len })
    }
}

impl InjectiveFamily for AllFunctions {
    fn len(&self) -> u64 {
        self.len
    }
    fn target(&self) -> u16 {
        self.t
    }
    fn domain(&self) -> usize {
        self.n
    }
    fn fill(&self, mut index: u64, out: &mut [u16]) {
        for o in out.iter_mut() {
            *o = (index % self.t as u64) as u16 + 1;
            index /= self.t as u64;
        }
    }
}

enum Kind {
    Exhaustive,
    /// Member `i` is `perm(i mod t!) ∘ splitter(i div t!)`.
    Composed { splitter: Box<dyn InjectiveFamily>, perms: u64 },
    MonteCarlo { seed: u64 },
}

pub struct PermuterFamily {
    n: usize,
    t: u16,
    len: u64,
    kind: Kind,
    backend: Backend,
    note: Option<&'static str>,
}

impl std::fmt::Debug for PermuterFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermuterFamily")
            .field("n", &self.n)
            .field("t", &self.t)
            .field("len", &self.len)
            .field("backend", &self.backend)
            .finish()
    }
}

fn factorial(t: u16) -> Option<u64> {
    (1..=t as u64).try_fold(1u64, |acc, x| acc.checked_mul(x))
}

/// Default Monte Carlo sample count `⌈t^t · ln(1/δ)⌉`, before the budget cap.
pub fn default_samples(t: u16, delta: f64) -> f64 {
    ((t as f64).powi(t as i32) * (1.0 / delta).ln()).ceil()
}

/// Builds a family over `n` vertices with labels `1..=t`.
pub fn build_permuter(n: usize, t: usize, backend: Backend, opts: &PermuterOptions) -> Result<PermuterFamily, PermuterError> {
    if t == 0 {
        return Err(PermuterError::EmptyRange);
    }
    let t: u16 = t.try_into().map_err(|_| PermuterError::RangeTooLarge(t))?;
    let over = |backend: &'static str, needed: String| PermuterError::OverBudget { backend, needed, budget: opts.budget };
    let exhaustive_len = AllFunctions::new(n, t).map(|a| a.len);
    let (kind, len, note) = match backend {
        Backend::Exhaustive => {
            let len = exhaustive_len.filter(|&l| l <= opts.budget).ok_or_else(|| over("exhaustive", format!("{t}^{n}")))?;
            (Kind::Exhaustive, len, None)
        }
        Backend::Deterministic => match IdentitySplitter::new(n, t) {
            Some(id) => {
                let perms = factorial(t).filter(|&p| p <= opts.budget).ok_or_else(|| over("deterministic", format!("{t}!")))?;
                (Kind::Composed { splitter: Box::new(id), perms }, perms, None)
            }
            None => {
                let len = exhaustive_len
                    .filter(|&l| l <= opts.budget)
                    .ok_or_else(|| over("deterministic", format!("{t}^{n}")))?;
                (Kind::Exhaustive, len, Some("more vertices than labels; using all functions"))
            }
        },
        Backend::MonteCarlo { seed, samples } => {
            if !(opts.delta > 0.0 && opts.delta < 1.0) {
                return Err(PermuterError::BadDelta(opts.delta));
            }
            let len = samples.unwrap_or_else(|| default_samples(t, opts.delta).min(opts.budget as f64) as u64);
            (Kind::MonteCarlo { seed }, len, None)
        }
    };
    Ok(PermuterFamily { n, t, len, kind, backend, note })
}

/// Composes an arbitrary injective family with every permutation of its labels.
pub fn compose_with_permutations(splitter: Box<dyn InjectiveFamily>, budget: u64) -> Result<PermuterFamily, PermuterError> {
    let t = splitter.target();
    let n = splitter.domain();
    let needed = || format!("{}*{t}!", splitter.len());
    let perms = factorial(t).ok_or_else(|| PermuterError::OverBudget { backend: "composed", needed: needed(), budget })?;
    let len = splitter
        .len()
        .checked_mul(perms)
        .filter(|&l| l <= budget)
        .ok_or_else(|| PermuterError::OverBudget { backend: "composed", needed: needed(), budget })?;
    Ok(PermuterFamily { n, t, len, kind: Kind::Composed { splitter, perms }, backend: Backend::Deterministic, note: None })
}

/// Writes the `rank`-th permutation of `1..=t` in lexicographic order.
fn unrank_permutation(mut rank: u64, t: u16, out: &mut Vec<u16>) {
    out.clear();
    let mut pool: Vec<u16> = (1..=t).collect();
    for remaining in (1..=t as u64).rev() {
        let f = factorial((remaining - 1) as u16).expect("fits: t! already fits");
        let pick = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(pick));
    }
}

fn next_permutation(p: &mut [u16]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        p.reverse();
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn mc_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

impl PermuterFamily {
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn t(&self) -> u16 {
        self.t
    }

    pub fn domain(&self) -> usize {
        self.n
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// Explanation when the family differs from the backend's usual construction.
    pub fn note(&self) -> Option<&'static str> {
        self.note
    }

    /// Probability that one fixed ordered window assignment is hit by no member.
    pub fn miss_probability(&self) -> f64 {
        match self.kind {
            Kind::MonteCarlo { .. } => {
                let p = (self.t as f64).powi(-(self.t as i32));
                ((self.len as f64) * (-p).ln_1p()).exp()
            }
            _ => 0.0,
        }
    }

    /// Alignment that keeps chunked iteration cheap for every backend.
    pub fn chunk_size(&self) -> u64 {
        MC_BLOCK
    }

    pub fn function(&self, index: u64) -> Vec<u16> {
        assert!(index < self.len, "member {index} out of range");
        let mut out = Vec::new();
        self.for_each(index..index + 1, |_, labels| out = labels.to_vec());
        out
    }

    /// Calls `f(i, labels)` for every member `i` in `range`, in order.
    pub fn for_each<F: FnMut(u64, &[u16])>(&self, range: std::ops::Range<u64>, mut f: F) {
        let end = range.end.min(self.len);
        let start = range.start;
        if start >= end {
            return;
        }
        let n = self.n;
        let t = self.t;
        let mut labels = vec![0u16; n];
        match &self.kind {
            Kind::Exhaustive => {
                let mut digits = vec![0u16; n];
                AllFunctions { n, t, len: self.len }.fill(start, &mut digits);
                for i in start..end {
                    f(i, &digits);
                    for d in digits.iter_mut() {
                        if *d < t {
                            *d += 1;
                            break;
                        }
                        *d = 1;
                    }
                }
            }
            Kind::Composed { splitter, perms } => {
                let mut base = vec![0u16; n];
                let mut s = start / perms;
                splitter.fill(s, &mut base);
                let mut perm = Vec::with_capacity(t as usize);
                unrank_permutation(start % perms, t, &mut perm);
                for i in start..end {
                    for (l, &b) in labels.iter_mut().zip(&base) {
                        *l = perm[b as usize - 1];
                    }
                    f(i, &labels);
                    if !next_permutation(&mut perm) && i + 1 < end {
                        s += 1;
                        splitter.fill(s, &mut base);
                    }
                }
            }
            Kind::MonteCarlo { seed } => {
                let mut i = start - start % MC_BLOCK;
                while i < end {
                    let block = i / MC_BLOCK;
                    let mut rng = mc_rng(*seed, block);
                    let block_end = ((block + 1) * MC_BLOCK).min(end);
                    while i < block_end {
                        for l in labels.iter_mut() {
                            *l = rng.random_range(1..=t);
                        }
                        if i >= start {
                            f(i, &labels);
                        }
                        i += 1;
                    }
                }
            }
        }
    }
}

/// Result of checking the ordered-window property exhaustively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub targets: u64,
    pub violations: u64,
    /// First missed `(W, window start)`, if any.
    pub first_violation: Option<(Vec<usize>, u16)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("property check table would need {0} entries")]
pub struct CheckTooLarge(pub u128);

/// Checks the property for every ordered `W` with `|W| ≤ t` and every window.
///
/// Each member marks every target it hits by enumerating one preimage per
/// label of each window, so the cost is proportional to the hits rather than
/// to the number of targets times the family size.
pub fn check_permuter_property(fam: &PermuterFamily) -> Result<PropertyReport, CheckTooLarge> {
    let n = fam.domain();
    let t = fam.t() as usize;
    let max_m = t.min(n);
    // offsets[m] = start of the table for |W| = m; entries (code, window start).
    let mut offsets = vec![0u128; max_m + 2];
    for m in 1..=max_m {
        offsets[m + 1] = offsets[m] + (n as u128).pow(m as u32) * (t - m + 1) as u128;
    }
    let total = offsets[max_m + 1];
    if total > (1u128 << 28) {
        return Err(CheckTooLarge(total));
    }
    let mut hit = vec![false; total as usize];
    let mut pre: Vec<Vec<usize>> = vec![Vec::new(); t + 1];
    fam.for_each(0..fam.len(), |_, labels| {
        for p in pre.iter_mut() {
            p.clear();
        }
        for (v, &l) in labels.iter().enumerate() {
            pre[l as usize].push(v);
        }
        for m in 1..=max_m {
            for i in 1..=t - m + 1 {
                if (i..i + m).any(|l| pre[l].is_empty()) {
                    continue;
                }
                mark_products(&pre[i..i + m], 0, 0, &mut |code| {
                    let idx = offsets[m] + code as u128 * (t - m + 1) as u128 + (i - 1) as u128;
                    hit[idx as usize] = true;
                }, n);
            }
        }
    });
    let mut targets = 0u64;
    let mut violations = 0u64;
    let mut first = None;
    for m in 1..=max_m {
        let mut w = vec![0usize; m];
        for code in 0..(n as u64).pow(m as u32) {
            let mut c = code;
            for slot in w.iter_mut().rev() {
                *slot = (c % n as u64) as usize;
                c /= n as u64;
            }
            if (1..m).any(|a| w[..a].contains(&w[a])) {
                continue;
            }
            for i in 0..t - m + 1 {
                targets += 1;
                let idx = offsets[m] + code as u128 * (t - m + 1) as u128 + i as u128;
                if !hit[idx as usize] {
                    violations += 1;
                    if first.is_none() {
                        first = Some((w.clone(), i as u16 + 1));
                    }
                }
            }
        }
    }
    Ok(PropertyReport { targets, violations, first_violation: first })
}

fn mark_products(lists: &[Vec<usize>], depth: usize, code: u64, mark: &mut dyn FnMut(u64), n: usize) {
    if depth == lists.len() {
        mark(code);
        return;
    }
    for &v in &lists[depth] {
        mark_products(lists, depth + 1, code * n as u64 + v as u64, mark, n);
    }
}
