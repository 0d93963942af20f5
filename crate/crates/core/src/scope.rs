//! Which subspaces an analysis inspects, and how that was decided.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::subspace::{self, Subspace};

/// Default number of random subspaces used when an exhaustive scope is over budget.
pub const FALLBACK_SAMPLE: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// Every subspace of the ambient space.
    All,
    /// Every subspace of dimension at most `D`.
    UpToDim(usize),
    /// `N` random subspaces (uniform dimension, then uniform subspace).
    Sample(u64),
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(Scope::All);
        }
        let parse = |v: &str| -> Result<u64> {
            v.parse()
                .map_err(|_| Error::invalid(format!("bad scope value in {s:?}")))
        };
        if let Some(d) = s.strip_prefix("dims=") {
            return Ok(Scope::UpToDim(parse(d)? as usize));
        }
        if let Some(n) = s.strip_prefix("sample=") {
            return Ok(Scope::Sample(parse(n)?));
        }
        Err(Error::invalid(format!(
            "unknown scope {s:?}; expected all, dims=D or sample=N"
        )))
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::All => write!(f, "all"),
            Scope::UpToDim(d) => write!(f, "dims={d}"),
            Scope::Sample(n) => write!(f, "sample={n}"),
        }
    }
}

/// What was actually inspected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub requested: String,
    /// `true` when the requested set was enumerated completely.
    pub exhaustive: bool,
    /// Present when the result rests on random sampling.
    pub sample_size: Option<u64>,
    pub inspected: u64,
}

/// Uniform random subspaces with dimensions drawn uniformly from `dims`.
pub fn sample_subspaces(
    f: &Field,
    n: usize,
    count: u64,
    dims: std::ops::RangeInclusive<usize>,
    seed: u64,
) -> Vec<Subspace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d = rng.gen_range(dims.clone());
            Subspace::random(f, n, d, &mut rng)
        })
        .collect()
}

/// Resolves a scope into a concrete list of subspaces. An exhaustive request
/// over budget degrades to a labeled sample rather than failing.
pub fn resolve(f: &Field, n: usize, scope: Scope, budget: u64, seed: u64) -> (Vec<Subspace>, Coverage) {
    let requested = scope.to_string();
    let exhaustive = |dims: Option<usize>| -> Option<Vec<Subspace>> {
        match dims {
            None => subspace::enumerate(f, n, None, budget).ok(),
            Some(d) => {
                let mut all = Vec::new();
                for k in 0..=d.min(n) {
                    all.extend(subspace::enumerate(f, n, Some(k), budget).ok()?);
                    if all.len() as u64 > budget {
                        return None;
                    }
                }
                Some(all)
            }
        }
    };
    let (list, max_dim) = match scope {
        Scope::All => (exhaustive(None), n),
        Scope::UpToDim(d) => (exhaustive(Some(d)), d.min(n)),
        Scope::Sample(count) => {
            let v = sample_subspaces(f, n, count, 0..=n, seed);
            let inspected = v.len() as u64;
            return (
                v,
                Coverage {
                    requested,
                    exhaustive: false,
                    sample_size: Some(count),
                    inspected,
                },
            );
        }
    };
    match list {
        Some(v) => {
            let inspected = v.len() as u64;
            (
                v,
                Coverage {
                    requested,
                    exhaustive: true,
                    sample_size: None,
                    inspected,
                },
            )
        }
        None => {
            let count = FALLBACK_SAMPLE.min(budget);
            let v = sample_subspaces(f, n, count, 0..=max_dim, seed);
            (
                v,
                Coverage {
                    requested,
                    exhaustive: false,
                    sample_size: Some(count),
                    inspected: count,
                },
            )
        }
    }
}
