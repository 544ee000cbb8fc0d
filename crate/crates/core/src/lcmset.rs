//! The set Λ_k(N) of integers `lcm(q_1, ..., q_k)` with `1 ≤ q_i ≤ N`.
//!
//! Λ_k(N) is exactly the set of least common denominators of sums
//! `a_1/q_1 + ... + a_k/q_k`. For fixed `q`'s the sums range over
//! `(1/L)·Z` with `L = lcm(q)`, because `gcd_i(L/q_i) = 1`; and Λ is closed
//! under taking divisors (shrink each `q_i` by `p^{v_p(q_i) - v_p(d)}`), so
//! every member is attained as a reduced denominator and every reduced
//! denominator `L' | L` is again a member.
//!
//! Each entry keeps a witness tuple of minimal product, ties broken by the
//! lexicographically smallest tuple.

use std::collections::HashMap;

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numtheory::lcm_u128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DenominatorMode {
    /// Any tuple in `[1, N]^k`.
    #[default]
    All,
    /// Only tuples with `gcd(q_i, q_j) = 1` for `i < j`; then `lcm = Π q_i`.
    PairwiseCoprime,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcmBuildOptions {
    pub mode: DenominatorMode,
    /// Refuse once the working map would exceed this many entries.
    pub max_entries: usize,
    /// Refuse before doing more than this many `lcm(L', q)` relaxations.
    pub max_relaxations: u64,
    pub threads: usize,
}

impl Default for LcmBuildOptions {
    fn default() -> Self {
        Self {
            mode: DenominatorMode::All,
            max_entries: 50_000_000,
            max_relaxations: 10_000_000_000,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcmSet {
    n: u64,
    k: usize,
    mode: DenominatorMode,
    lcms: Vec<u128>,
    products: Vec<u128>,
    // k components per entry, flattened
    witnesses: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LcmEntry<'a> {
    pub lcm: u128,
    pub min_product: u128,
    pub witness: &'a [u64],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density {
    pub n: u64,
    pub k: usize,
    pub size: usize,
    /// |Λ_k(N)| / N^k.
    pub ratio: f64,
}

type Best = (u128, Vec<u64>);

fn better(a: &Best, b: &Best) -> bool {
    (a.0, &a.1) < (b.0, &b.1)
}

fn merge_into(map: &mut HashMap<u128, Best>, lcm: u128, cand: Best) {
    match map.get_mut(&lcm) {
        Some(cur) => {
            if better(&cand, cur) {
                *cur = cand;
            }
        }
        None => {
            map.insert(lcm, cand);
        }
    }
}

impl LcmSet {
    pub fn build(n: u64, k: usize) -> Result<Self> {
        Self::build_with(n, k, &LcmBuildOptions::default())
    }

    /// Iterated closure: start from `{q ≤ N}` and relax `lcm(L', q)` for every
    /// current entry `L'` and `q ≤ N`, `k − 1` times, keeping the best
    /// (product, witness) per resulting `L`.
    ///
    /// Because a minimal witness for `L` has a minimal (and lexicographically
    /// least) witness of its own prefix lcm as prefix, keeping only the best
    /// record per `L` at each level loses nothing.
    pub fn build_with(n: u64, k: usize, opts: &LcmBuildOptions) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::invalid("N and k must be positive"));
        }
        if (n as u128).checked_pow(k as u32).is_none() {
            return Err(Error::refusal(
                format!("N^k = {n}^{k} overflows 128-bit integers"),
                None,
            ));
        }
        let mut current: Vec<(u128, Best)> = (1..=n).map(|q| (q as u128, (q as u128, vec![q]))).collect();
        let mut relaxations = 0u64;

        for _ in 1..k {
            relaxations = relaxations.saturating_add((current.len() as u64).saturating_mul(n));
            if relaxations > opts.max_relaxations {
                return Err(Error::refusal(
                    format!(
                        "lcm closure needs more than {} relaxations",
                        opts.max_relaxations
                    ),
                    Some(current.len() as u64),
                ));
            }
            let map = relax_level(&current, n, opts)?;
            if map.len() > opts.max_entries {
                return Err(Error::refusal(
                    format!("lcm set exceeds {} entries", opts.max_entries),
                    Some(map.len() as u64),
                ));
            }
            current = map.into_iter().collect();
            current.sort_unstable_by_key(|(l, _)| *l);
        }

        if opts.mode == DenominatorMode::PairwiseCoprime {
            debug_assert!(current.iter().all(|(l, (p, _))| l == p));
        }
        let mut set = LcmSet {
            n,
            k,
            mode: opts.mode,
            lcms: Vec::with_capacity(current.len()),
            products: Vec::with_capacity(current.len()),
            witnesses: Vec::with_capacity(current.len() * k),
        };
        for (l, (p, w)) in current {
            set.lcms.push(l);
            set.products.push(p);
            set.witnesses.extend_from_slice(&w);
        }
        Ok(set)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> DenominatorMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.lcms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lcms.is_empty()
    }

    /// Sorted `L` values.
    pub fn lcm_values(&self) -> &[u128] {
        &self.lcms
    }

    pub fn entry(&self, i: usize) -> LcmEntry<'_> {
        LcmEntry {
            lcm: self.lcms[i],
            min_product: self.products[i],
            witness: &self.witnesses[i * self.k..(i + 1) * self.k],
        }
    }

    pub fn entries(&self) -> impl ExactSizeIterator<Item = LcmEntry<'_>> + '_ {
        (0..self.len()).map(move |i| self.entry(i))
    }

    pub fn get(&self, lcm: u128) -> Option<LcmEntry<'_>> {
        self.lcms.binary_search(&lcm).ok().map(|i| self.entry(i))
    }

    pub fn contains(&self, lcm: u128) -> bool {
        self.lcms.binary_search(&lcm).is_ok()
    }

    pub fn density(&self) -> Density {
        let total = (self.n as f64).powi(self.k as i32);
        Density {
            n: self.n,
            k: self.k,
            size: self.len(),
            ratio: self.len() as f64 / total,
        }
    }
}

fn relax_level(current: &[(u128, Best)], n: u64, opts: &LcmBuildOptions) -> Result<HashMap<u128, Best>> {
    let relax_chunk = |chunk: &[(u128, Best)]| -> HashMap<u128, Best> {
        let mut local: HashMap<u128, Best> = HashMap::new();
        for (l, (p, w)) in chunk {
            for q in 1..=n {
                let qq = q as u128;
                let lcm = match opts.mode {
                    DenominatorMode::All => lcm_u128(*l, qq).expect("bounded by N^k"),
                    DenominatorMode::PairwiseCoprime => {
                        if l.gcd(&qq) != 1 {
                            continue;
                        }
                        l * qq
                    }
                };
                let prod = p * qq;
                if let Some(cur) = local.get(&lcm) {
                    if (prod, w.as_slice(), q) >= (cur.0, &cur.1[..w.len()], cur.1[w.len()]) {
                        continue;
                    }
                }
                let mut wit = Vec::with_capacity(w.len() + 1);
                wit.extend_from_slice(w);
                wit.push(q);
                local.insert(lcm, (prod, wit));
            }
        }
        local
    };

    if opts.threads <= 1 {
        return Ok(relax_chunk(current));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let chunk = current.len().div_ceil(opts.threads * 4).max(1);
    let parts: Vec<HashMap<u128, Best>> = pool.install(|| current.par_chunks(chunk).map(relax_chunk).collect());
    let mut merged: HashMap<u128, Best> = HashMap::new();
    for part in parts {
        for (l, best) in part {
            merge_into(&mut merged, l, best);
        }
    }
    Ok(merged)
}

pub fn density(n: u64, k: usize) -> Result<Density> {
    Ok(LcmSet::build(n, k)?.density())
}
