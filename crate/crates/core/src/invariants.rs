//! Rank-count tables, weight and dual distance distributions, generalized
//! weights and minimal codewords.
//!
//! All distribution arithmetic is exact. The weight distribution of an almost
//! affine code is obtained from its q-matroid by q-binomial inversion of
//!
//! ```text
//! Σ_j [n−j, n−i]_q A_j = Σ_u q^{m(k−u)} R^u_{n−i},   i = 0, …, n,
//! ```
//!
//! and the dual distance distribution solves the MacWilliams system
//! `Σ_j [n−j, n−i]_q A_j = q^{m(k+i−n)} Σ_j [n−j, i]_q B_j`.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::code::{self, Code, Storage, Word};
use crate::error::{Error, Result};
use crate::qmatroid::QMatroid;
use crate::subspace::{self, Subspace};

/// `R^u_v`: number of `v`-dimensional spaces of rank `u`, indexed `[v][u]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCounts {
    pub n: usize,
    pub q: u32,
    pub counts: Vec<Vec<BigUint>>,
}

impl RankCounts {
    pub fn get(&self, v: usize, u: usize) -> &BigUint {
        &self.counts[v][u]
    }

    /// Rows as decimal strings, for reports.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.counts
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect())
            .collect()
    }
}

pub fn rank_counts(m: &QMatroid, budget: u64) -> Result<RankCounts> {
    let n = m.n();
    let mut counts = vec![vec![BigUint::zero(); n + 1]; n + 1];
    for v in m.subspaces(budget)? {
        let r = m.try_rank(&v)? as usize;
        counts[v.dim()][r] += 1u32;
    }
    Ok(RankCounts { n, q: m.q(), counts })
}

/// `R*`, the rank counts of the dual q-matroid.
pub fn dual_rank_counts(m: &QMatroid, budget: u64) -> Result<RankCounts> {
    rank_counts(&m.dual(), budget)
}

fn qbin(n: i64, k: i64, q: u64) -> BigInt {
    BigInt::from(subspace::gaussian_binomial(n, k, q))
}

fn qpow(q: u64, e: u64) -> BigInt {
    BigInt::from(q).pow(e as u32)
}

/// `S_i = Σ_j [n−j, n−i]_q a_j`.
pub fn forward_system(a: &[BigInt], q: u64) -> Vec<BigInt> {
    let n = a.len() as i64 - 1;
    (0..=n)
        .map(|i| {
            a.iter()
                .enumerate()
                .map(|(j, aj)| qbin(n - j as i64, n - i, q) * aj)
                .sum()
        })
        .collect()
}

/// Inverts [`forward_system`]:
/// `a_j = Σ_{i ≤ j} (−1)^{j−i} q^{binom(j−i, 2)} [n−i, n−j]_q S_i`.
pub fn qbinomial_inversion(s: &[BigInt], q: u64) -> Vec<BigInt> {
    let n = s.len() as i64 - 1;
    (0..=n)
        .map(|j| {
            (0..=j)
                .map(|i| {
                    let d = (j - i) as u64;
                    let term = qpow(q, d * d.saturating_sub(1) / 2) * qbin(n - i, n - j, q) * &s[i as usize];
                    if d % 2 == 0 { term } else { -term }
                })
                .sum()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightDistribution {
    /// `A_0, …, A_n` as decimal strings in reports.
    #[serde(serialize_with = "ser_ints")]
    pub a: Vec<BigInt>,
    /// Codeword used by the brute-force path; the formula path has none.
    pub anchor: Option<Word>,
}

impl WeightDistribution {
    pub fn nonneg(&self) -> bool {
        self.a.iter().all(|x| !x.is_negative())
    }

    pub fn total(&self) -> BigInt {
        self.a.iter().sum()
    }
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_rats<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Right-hand side `Σ_u q^{m·(k−u)} R^u_{n−i}` for every `i`, exact
/// because `u ≤ k` whenever `R^u_v ≠ 0`.
fn counted_side(counts: &RankCounts, mdeg: u32, k: u32) -> Result<Vec<BigInt>> {
    let n = counts.n;
    let q = counts.q as u64;
    (0..=n)
        .map(|i| {
            let mut acc = BigInt::zero();
            for (u, c) in counts.counts[n - i].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if u as u32 > k {
                    return Err(Error::Internal(format!("rank {u} exceeds the full rank {k}")));
                }
                acc += qpow(q, mdeg as u64 * (k as u64 - u as u64)) * BigInt::from(c.clone());
            }
            Ok(acc)
        })
        .collect()
}

/// `A_j` from a rank-count table of a rank-`k` q-matroid and extension degree `m`.
pub fn distribution_from_counts(counts: &RankCounts, mdeg: u32, k: u32) -> Result<Vec<BigInt>> {
    Ok(qbinomial_inversion(&counted_side(counts, mdeg, k)?, counts.q as u64))
}

/// Weight distribution determined by the q-matroid alone (`k = ρ(E)`).
/// Negative entries are kept: they certify that no code realizes the table.
pub fn weight_distribution_formula(m: &QMatroid, mdeg: u32, budget: u64) -> Result<WeightDistribution> {
    let counts = rank_counts(m, budget)?;
    Ok(WeightDistribution {
        a: distribution_from_counts(&counts, mdeg, m.full_rank())?,
        anchor: None,
    })
}

/// Histogram of `rk(c − x)` over `c ∈ C`.
pub fn weight_distribution_bruteforce(c: &Code, x: &[u32], budget: u64) -> Result<WeightDistribution> {
    if !c.contains(x) {
        return Err(Error::invalid("anchor is not a codeword"));
    }
    let t = c.tower();
    let n = c.n();
    let mut hist = vec![0u64; n + 1];
    match c.storage() {
        Storage::Explicit(words) => {
            for w in words {
                hist[code::rank_weight(t, &code::vsub(t, w, x))] += 1;
            }
        }
        Storage::Additive { generators, offset } => {
            let size = c.size();
            if size > BigUint::from(budget) {
                return Err(Error::Budget {
                    needed: size.to_string(),
                    budget,
                });
            }
            let shift = code::vsub(t, offset, x);
            code::for_each_span_element(t, generators, &shift, |w, _| {
                hist[code::rank_weight(t, w)] += 1;
            });
        }
    }
    Ok(WeightDistribution {
        a: hist.into_iter().map(BigInt::from).collect(),
        anchor: Some(x.to_vec()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualDistribution {
    #[serde(serialize_with = "ser_rats")]
    pub b: Vec<BigRational>,
    pub integral: bool,
    pub nonneg: bool,
}

impl DualDistribution {
    fn new(b: Vec<BigRational>) -> Self {
        let integral = b.iter().all(|x| x.is_integer());
        let nonneg = b.iter().all(|x| !x.is_negative());
        DualDistribution { b, integral, nonneg }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MacWilliamsPath {
    /// Back-substitution in the MacWilliams system, from `i = n` down.
    Solve,
    /// Inversion formula on the dual rank counts.
    DualFormula,
}

/// Solves the MacWilliams system for `B` given `A`. Equation `i` involves
/// `B_0, …, B_{n−i}` with unit coefficient on `B_{n−i}`.
pub fn macwilliams_solve(a: &[BigInt], k: u32, mdeg: u32, q: u64) -> DualDistribution {
    let n = a.len() as i64 - 1;
    let lhs = forward_system(a, q);
    let qm = BigRational::from_integer(qpow(q, mdeg as u64));
    let mut b: Vec<BigRational> = vec![BigRational::zero(); n as usize + 1];
    for i in (0..=n).rev() {
        let e = k as i64 + i - n;
        let factor = if e >= 0 { num_traits::pow(qm.clone(), e as usize) } else { num_traits::pow(qm.recip(), (-e) as usize) };
        let mut rhs = BigRational::from_integer(lhs[i as usize].clone()) / factor;
        for (j, bj) in b.iter().enumerate().take((n - i) as usize) {
            rhs -= BigRational::from_integer(qbin(n - j as i64, i, q)) * bj;
        }
        b[(n - i) as usize] = rhs;
    }
    DualDistribution::new(b)
}

/// `B_j` from the dual rank counts: inversion of `Σ_u q^{m(n−k−u)} R*^u_{n−i}`.
pub fn macwilliams_dual_formula(dual_counts: &RankCounts, k: u32, mdeg: u32) -> Result<DualDistribution> {
    let n = dual_counts.n as u32;
    if k > n {
        return Err(Error::invalid("rank exceeds length"));
    }
    let b = distribution_from_counts(dual_counts, mdeg, n - k)?;
    Ok(DualDistribution::new(b.into_iter().map(BigRational::from_integer).collect()))
}

pub fn macwilliams(m: &QMatroid, a: &[BigInt], mdeg: u32, path: MacWilliamsPath, budget: u64) -> Result<DualDistribution> {
    let k = m.full_rank();
    match path {
        MacWilliamsPath::Solve => Ok(macwilliams_solve(a, k, mdeg, m.q() as u64)),
        MacWilliamsPath::DualFormula => macwilliams_dual_formula(&dual_rank_counts(m, budget)?, k, mdeg),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GwPath {
    /// `min{dim V : ρ*(V) = dim V − i}`.
    DualNullity,
    /// `min{dim V : ρ(V^⊥) = k − i}`.
    PerpRank,
    /// `n − max{dim V : ρ(V) = k − i}`.
    RankDrop,
    /// `n − max{dim V : |C(V, x)| = q^{mi}}`, counted on a code.
    FlatSize,
}

/// `d_1, …, d_k` along one characterization. `FlatSize` needs the code.
pub fn generalized_weights(m: &QMatroid, path: GwPath, code: Option<&Code>, budget: u64) -> Result<Vec<usize>> {
    let n = m.n();
    let k = m.full_rank() as usize;
    let f = m.field().clone();
    let spaces = m.subspaces(budget)?;
    let dual = m.dual();
    let qm = code.map(|c| BigUint::from(c.qm()));
    let anchor = match (path, code) {
        (GwPath::FlatSize, Some(c)) => Some(c.default_anchor(budget)?),
        (GwPath::FlatSize, None) => return Err(Error::invalid("the flat-size characterization needs a code")),
        _ => None,
    };
    let mut out = Vec::with_capacity(k);
    for i in 1..=k {
        let mut best: Option<usize> = None;
        for v in &spaces {
            let dv = v.dim();
            let cand = match path {
                GwPath::DualNullity => (dual.try_rank(v)? as usize + i == dv).then_some(dv),
                GwPath::PerpRank => (m.try_rank(&v.perp(&f))? as usize + i == k).then_some(dv),
                GwPath::RankDrop => (m.try_rank(v)? as usize + i == k).then_some(n - dv),
                GwPath::FlatSize => {
                    let c = code.expect("checked above");
                    let size = c.subcode(v, anchor.as_ref().expect("anchor"))?.size();
                    (size == qm.as_ref().expect("code").pow(i as u32)).then_some(n - dv)
                }
            };
            if let Some(c) = cand {
                best = Some(best.map_or(c, |b| b.min(c)));
            }
        }
        out.push(best.ok_or_else(|| Error::Internal(format!("no space realizes d_{i}")))?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralizedWeights {
    pub d: Vec<usize>,
    pub paths: Vec<GwPath>,
}

/// Computes every available characterization and insists they agree.
pub fn generalized_weights_checked(m: &QMatroid, code: Option<&Code>, budget: u64) -> Result<GeneralizedWeights> {
    let mut paths = vec![GwPath::DualNullity, GwPath::PerpRank, GwPath::RankDrop];
    if code.is_some() {
        paths.push(GwPath::FlatSize);
    }
    let mut first: Option<Vec<usize>> = None;
    for &p in &paths {
        let d = generalized_weights(m, p, code, budget)?;
        match &first {
            None => first = Some(d),
            Some(d0) if *d0 != d => {
                return Err(Error::Internal(format!(
                    "generalized weights disagree: {:?} gives {d0:?}, {p:?} gives {d:?}",
                    paths[0]
                )))
            }
            _ => {}
        }
    }
    let d = first.unwrap_or_default();
    if d.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Internal(format!("generalized weights decrease: {d:?}")));
    }
    Ok(GeneralizedWeights { d, paths })
}

/// `min dim supp D` over flats `D = C(W, x)` of dimension `i`, for each
/// `i = 1, …, k`, with supports taken relative to `x`.
pub fn generalized_weights_by_subcodes(c: &Code, x: &[u32], budget: u64) -> Result<Vec<usize>> {
    let f = c.tower().base();
    let k = c
        .integral_dimension()
        .ok_or_else(|| Error::NotAlmostAffine("code size is not a power of q^m".into()))? as usize;
    let mut best = vec![usize::MAX; k + 1];
    for w in subspace::enumerate(f, c.n(), None, budget)? {
        let d = c.subcode(&w, x)?;
        let Some(i) = d.integral_dimension() else {
            return Err(Error::NotAlmostAffine("flat size is not a power of q^m".into()));
        };
        let i = i as usize;
        if i == 0 {
            continue;
        }
        let s = d.code_support(x, budget)?.dim();
        best[i] = best[i].min(s);
    }
    best.remove(0);
    if best.contains(&usize::MAX) {
        return Err(Error::Internal("some subcode dimension is never attained by a flat".into()));
    }
    Ok(best)
}

/// Codewords `c ≠ x` whose relative support `supp(c − x)` contains no other
/// relative support properly, in codeword order.
pub fn minimal_codewords(c: &Code, x: &[u32], budget: u64) -> Result<Vec<(Word, Subspace)>> {
    if !c.contains(x) {
        return Err(Error::invalid("anchor is not a codeword"));
    }
    let t = c.tower();
    let f = t.base();
    let words = c.codewords(budget)?;
    let with_support: Vec<(Word, Subspace)> = words
        .into_iter()
        .filter(|w| w.as_slice() != x)
        .map(|w| {
            let s = code::support(t, &code::vsub(t, &w, x));
            (w, s)
        })
        .collect();
    let distinct: HashSet<&Subspace> = with_support.iter().map(|(_, s)| s).collect();
    let distinct: Vec<&Subspace> = distinct.into_iter().collect();
    let minimal: HashSet<&Subspace> = distinct
        .iter()
        .filter(|s| {
            !distinct
                .iter()
                .any(|o| o.dim() < s.dim() && o.is_subspace_of(f, s))
        })
        .copied()
        .collect();
    Ok(with_support
        .iter()
        .filter(|(_, s)| minimal.contains(s))
        .cloned()
        .collect())
}

/// Everything the weights report carries.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantsReport {
    #[serde(rename = "A", serialize_with = "ser_ints")]
    pub a: Vec<BigInt>,
    #[serde(rename = "B", serialize_with = "ser_rats")]
    pub b: Vec<BigRational>,
    #[serde(rename = "R")]
    pub r: Vec<Vec<String>>,
    #[serde(rename = "Rstar")]
    pub rstar: Vec<Vec<String>>,
    pub d: Vec<usize>,
    pub nonneg: bool,
    pub integral: bool,
}

/// Formula-path invariants of a rank-`k` q-matroid viewed over `F_{q^m}`.
pub fn invariants_report(m: &QMatroid, mdeg: u32, budget: u64) -> Result<InvariantsReport> {
    let r = rank_counts(m, budget)?;
    let rs = dual_rank_counts(m, budget)?;
    let k = m.full_rank();
    let a = distribution_from_counts(&r, mdeg, k)?;
    let b = macwilliams_dual_formula(&rs, k, mdeg)?;
    let d = if k == 0 {
        Vec::new()
    } else {
        generalized_weights_checked(m, None, budget)?.d
    };
    let nonneg = a.iter().all(|x| !x.is_negative()) && b.nonneg;
    Ok(InvariantsReport {
        a,
        integral: b.integral,
        b: b.b,
        r: r.to_strings(),
        rstar: rs.to_strings(),
        d,
        nonneg,
    })
}

/// `A_j` of the whole space `F_{q^m}^n`: `[n, j]_q ∏_{i<j} (q^m − q^i)`.
pub fn full_space_distribution(n: usize, q: u64, mdeg: u32) -> Vec<BigInt> {
    (0..=n)
        .map(|j| {
            let mut acc = qbin(n as i64, j as i64, q);
            for i in 0..j {
                acc *= qpow(q, mdeg as u64) - qpow(q, i as u64);
            }
            acc
        })
        .collect()
}

/// Convenience: `B` must equal `A` of a concrete code as integers.
pub fn matches_integers(b: &DualDistribution, a: &[BigInt]) -> bool {
    b.b.len() == a.len()
        && b
            .b
            .iter()
            .zip(a)
            .all(|(x, y)| x.is_integer() && x.to_integer() == *y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use std::sync::Arc;

    use crate::field::Field;

    #[test]
    fn uniform_rank_counts() {
        let f = Arc::new(Field::make(2, 1, None).unwrap());
        let m = QMatroid::uniform(f, 4, 2).unwrap();
        let r = rank_counts(&m, 1 << 20).unwrap();
        for v in 0..=4 {
            for u in 0..=4 {
                let expected = if (v == u && u <= 2) || (u == 2 && v > 2) {
                    subspace::gaussian_binomial(4, v as i64, 2)
                } else {
                    BigUint::zero()
                };
                assert_eq!(r.get(v, u), &expected, "R^{u}_{v}");
            }
        }
    }

    #[test]
    fn uniform_weight_distribution() {
        let f = Arc::new(Field::make(2, 1, None).unwrap());
        let m = QMatroid::uniform(f, 4, 2).unwrap();
        let a = weight_distribution_formula(&m, 4, 1 << 20).unwrap().a;
        assert_eq!(a[0], BigInt::one());
        assert!(a[1].is_zero() && a[2].is_zero());
        // [4,1]_2 · (2^4 − 1)
        assert_eq!(a[3], BigInt::from(225));
        assert_eq!(a.iter().sum::<BigInt>(), BigInt::from(256));
    }

    #[test]
    fn inversion_roundtrip_small() {
        let a: Vec<BigInt> = [3, 0, 7, 1, 12].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(qbinomial_inversion(&forward_system(&a, 3), 3), a);
    }

    #[test]
    fn full_space_has_trivial_dual() {
        let a = full_space_distribution(3, 2, 2);
        let b = macwilliams_solve(&a, 3, 2, 2);
        assert_eq!(b.b[0], BigRational::one());
        assert!(b.b[1..].iter().all(|x| x.is_zero()));
    }
}
