//! Rank-metric codes: finite subsets of `F_{q^m}^n`.
//!
//! A code is stored either as an explicit list of distinct codewords or in
//! additive form, `offset + span_{F_p}(generators)`. Projection sizes use
//! hashing in the first case and `F_p` rank computations in the second.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{self, Matrix};
use crate::qmatroid::{Origin, QMatroid};
use crate::scope::{self, Coverage, Scope};
use crate::subspace::{self, Subspace};
use crate::tower::{Tower, TowerSpec};

/// A vector over the top field.
pub type Word = Vec<Elem>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Storage {
    /// Distinct codewords in lexicographic order.
    Explicit(Vec<Word>),
    /// `offset + span_{F_p}(generators)` with `F_p`-independent generators.
    Additive { generators: Vec<Word>, offset: Word },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    tower: Arc<Tower>,
    n: usize,
    storage: Storage,
}

/// Serialized code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub tower: TowerSpec,
    pub n: usize,
    pub storage: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codewords: Option<Vec<Word>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Word>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<Word>,
}

/// Outcome of an almost-affine test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AaVerdict {
    pub coverage: Coverage,
    pub almost_affine: bool,
    /// Set when the requested scope could not be covered exhaustively.
    pub partial: bool,
    /// First subspace whose projection size is not a power of `q^m`.
    pub violation: Option<Matrix>,
    pub violation_size: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Linearity {
    pub contains_zero: bool,
    pub p_linear: bool,
    pub q_linear: bool,
    pub qm_linear: bool,
}

pub fn vadd(t: &Tower, a: &[Elem], b: &[Elem]) -> Word {
    a.iter().zip(b).map(|(&x, &y)| t.top().add(x, y)).collect()
}

pub fn vsub(t: &Tower, a: &[Elem], b: &[Elem]) -> Word {
    a.iter().zip(b).map(|(&x, &y)| t.top().sub(x, y)).collect()
}

pub fn vscale(t: &Tower, s: Elem, a: &[Elem]) -> Word {
    a.iter().map(|&x| t.top().mul(s, x)).collect()
}

/// `n × m` matrix over `F_q` whose row `i` holds the Π-coordinates of `v_i`.
pub fn coordinate_matrix(t: &Tower, v: &[Elem]) -> Matrix {
    v.iter().map(|&x| t.coords(x)).collect()
}

/// Column space of the coordinate matrix.
pub fn support(t: &Tower, v: &[Elem]) -> Subspace {
    let n = v.len();
    let cols: Matrix = (0..t.m())
        .map(|j| v.iter().map(|&x| t.coord(x, j)).collect())
        .collect();
    Subspace::span(t.base(), n, &cols)
}

pub fn rank_weight(t: &Tower, v: &[Elem]) -> usize {
    linalg::rank(t.base(), &coordinate_matrix(t, v))
}

/// `G_V · v` where `G_V` is the canonical basis of `V`.
pub fn project(t: &Tower, g: &Matrix, v: &[Elem]) -> Word {
    let top = t.top();
    g.iter()
        .map(|row| {
            row.iter().zip(v).fold(0, |acc, (&a, &x)| {
                if a == 0 {
                    acc
                } else {
                    top.add(acc, t.scale(a, x))
                }
            })
        })
        .collect()
}

/// The three equivalent descriptions of `ker G_V`, evaluated independently:
/// `G_V v = 0`, `supp(v) ≤ V^⊥`, and `v ∈ V^⊥ ⊗ F_{q^m}`.
pub fn kernel_conditions(t: &Tower, v: &[Elem], space: &Subspace) -> [bool; 3] {
    let f = t.base();
    let by_projection = project(t, space.rows(), v).iter().all(|&x| x == 0);
    let perp = space.perp(f);
    let by_support = support(t, v).is_subspace_of(f, &perp);
    // span over the top field of the embedded basis of V^⊥
    let top = t.top();
    let embedded: Matrix = perp
        .rows()
        .iter()
        .map(|r| r.iter().map(|&a| t.embed(a)).collect())
        .collect();
    let mut with_v = embedded.clone();
    with_v.push(v.to_vec());
    let by_tensor = linalg::rank(top, &with_v) == linalg::rank(top, &embedded);
    [by_projection, by_support, by_tensor]
}

/// Digits of a word over the prime field, concatenated.
fn prime_digits(t: &Tower, w: &[Elem]) -> Vec<u32> {
    w.iter().flat_map(|&x| t.top().digits(x)).collect()
}

/// Integer `r` with `size = base^r`, if any.
fn exact_log(size: &BigUint, base: u64) -> Option<u32> {
    let base = BigUint::from(base);
    let mut acc = BigUint::one();
    let mut r = 0;
    while &acc < size {
        acc *= &base;
        r += 1;
    }
    (&acc == size).then_some(r)
}

impl Code {
    pub fn explicit(tower: Arc<Tower>, n: usize, words: Vec<Word>) -> Result<Self> {
        let mut words = words;
        for w in &words {
            Self::check_word(&tower, n, w)?;
        }
        words.sort();
        let before = words.len();
        words.dedup();
        if words.len() != before {
            return Err(Error::invalid("explicit code lists a codeword twice"));
        }
        if words.is_empty() {
            return Err(Error::invalid("a code must contain at least one codeword"));
        }
        Ok(Code {
            tower,
            n,
            storage: Storage::Explicit(words),
        })
    }

    /// `offset + span_{F_p}(generators)`; dependent generators are dropped.
    pub fn additive(tower: Arc<Tower>, n: usize, generators: Vec<Word>, offset: Word) -> Result<Self> {
        for w in generators.iter().chain(std::iter::once(&offset)) {
            Self::check_word(&tower, n, w)?;
        }
        let generators = independent_subset(&tower, generators);
        Ok(Code {
            tower,
            n,
            storage: Storage::Additive { generators, offset },
        })
    }

    /// `F_{q^m}`-row space of `g` (rows of length `n`).
    pub fn linear_span(tower: Arc<Tower>, n: usize, g: &Matrix) -> Result<Self> {
        let top = tower.top().clone();
        let mut gens = Vec::new();
        for row in g {
            for d in 0..top.e() {
                let s = top.pow(top.generator(), d as u64);
                gens.push(row.iter().map(|&x| top.mul(s, x)).collect());
            }
        }
        Self::additive(tower, n, gens, vec![0; n])
    }

    fn check_word(t: &Tower, n: usize, w: &[Elem]) -> Result<()> {
        if w.len() != n {
            return Err(Error::dim(format!("codeword of length {} in a length-{n} code", w.len())));
        }
        if w.iter().any(|&x| x >= t.top().order()) {
            return Err(Error::invalid("codeword entry is not a field element"));
        }
        Ok(())
    }

    pub fn from_spec(spec: &CodeSpec) -> Result<Self> {
        let tower = Arc::new(Tower::from_spec(&spec.tower)?);
        match spec.storage.as_str() {
            "explicit" => {
                let words = spec
                    .codewords
                    .clone()
                    .ok_or_else(|| Error::invalid("explicit code without codewords"))?;
                Self::explicit(tower, spec.n, words)
            }
            "additive" => {
                let gens = spec
                    .generators
                    .clone()
                    .ok_or_else(|| Error::invalid("additive code without generators"))?;
                let offset = spec.offset.clone().unwrap_or_else(|| vec![0; spec.n]);
                Self::additive(tower, spec.n, gens, offset)
            }
            other => Err(Error::invalid(format!("unknown storage {other:?}"))),
        }
    }

    pub fn spec(&self) -> CodeSpec {
        let tower = self.tower.spec();
        match &self.storage {
            Storage::Explicit(words) => CodeSpec {
                tower,
                n: self.n,
                storage: "explicit".into(),
                codewords: Some(words.clone()),
                generators: None,
                offset: None,
            },
            Storage::Additive { generators, offset } => CodeSpec {
                tower,
                n: self.n,
                storage: "additive".into(),
                codewords: None,
                generators: Some(generators.clone()),
                offset: Some(offset.clone()),
            },
        }
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    /// `q^m`.
    pub fn qm(&self) -> u64 {
        self.tower.top().order() as u64
    }

    pub fn size(&self) -> BigUint {
        match &self.storage {
            Storage::Explicit(w) => BigUint::from(w.len()),
            Storage::Additive { generators, .. } => {
                BigUint::from(self.tower.p()).pow(generators.len() as u32)
            }
        }
    }

    /// `log_{q^m} |C|` when it is rational (i.e. `|C|` is a power of `p`).
    pub fn dimension(&self) -> Option<Ratio<u64>> {
        let a = exact_log(&self.size(), self.tower.p() as u64)?;
        Some(Ratio::new(a as u64, self.tower.top().e() as u64))
    }

    /// Integral dimension, if `|C|` is a power of `q^m`.
    pub fn integral_dimension(&self) -> Option<u32> {
        self.dimension().filter(|d| d.is_integer()).map(|d| d.to_integer() as u32)
    }

    /// Every codeword, up to `budget` of them.
    pub fn codewords(&self, budget: u64) -> Result<Vec<Word>> {
        match &self.storage {
            Storage::Explicit(w) => Ok(w.clone()),
            Storage::Additive { generators, offset } => {
                let size = self.size();
                if size.to_u64().is_none_or(|s| s > budget) {
                    return Err(Error::Budget {
                        needed: size.to_string(),
                        budget,
                    });
                }
                Ok(span_elements(&self.tower, generators, offset))
            }
        }
    }

    pub fn contains(&self, x: &[Elem]) -> bool {
        if x.len() != self.n {
            return false;
        }
        match &self.storage {
            Storage::Explicit(w) => w.binary_search(&x.to_vec()).is_ok(),
            Storage::Additive { generators, offset } => {
                let t = &self.tower;
                let diff = vsub(t, x, offset);
                let mut rows: Matrix = generators.iter().map(|g| prime_digits(t, g)).collect();
                let r = linalg::prime_rank(t.prime(), &rows);
                rows.push(prime_digits(t, &diff));
                linalg::prime_rank(t.prime(), &rows) == r
            }
        }
    }

    /// The codeword with the smallest encoding.
    pub fn default_anchor(&self, budget: u64) -> Result<Word> {
        match &self.storage {
            Storage::Explicit(w) => Ok(w[0].clone()),
            Storage::Additive { .. } => {
                let zero = vec![0; self.n];
                if self.contains(&zero) {
                    return Ok(zero);
                }
                Ok(self
                    .codewords(budget)?
                    .into_iter()
                    .min()
                    .expect("codes are nonempty"))
            }
        }
    }

    /// `|π_V(C)|` as the number of distinct values `G_V c`.
    pub fn projection_size(&self, v: &Subspace) -> BigUint {
        match &self.storage {
            Storage::Explicit(words) => {
                let set: HashSet<Word> = words.iter().map(|c| project(&self.tower, v.rows(), c)).collect();
                BigUint::from(set.len())
            }
            Storage::Additive { .. } => {
                BigUint::from(self.tower.p()).pow(self.projection_log_p(v).expect("additive"))
            }
        }
    }

    /// For additive storage, `log_p |π_V(C)| = rank_{F_p}(G_V g_1, …, G_V g_r)`.
    fn projection_log_p(&self, v: &Subspace) -> Option<u32> {
        let Storage::Additive { generators, .. } = &self.storage else {
            return None;
        };
        let t = &self.tower;
        if v.is_zero() || generators.is_empty() {
            return Some(0);
        }
        let images: Matrix = generators
            .iter()
            .map(|g| prime_digits(t, &project(t, v.rows(), g)))
            .collect();
        Some(linalg::prime_rank(t.prime(), &images) as u32)
    }

    /// `ρ_C(V) = log_{q^m} |π_V(C)|`; fails when the logarithm is not integral.
    pub fn rank_of(&self, v: &Subspace) -> Result<u32> {
        if v.n() != self.n {
            return Err(Error::dim("subspace ambient does not match code length"));
        }
        let e = self.tower.top().e();
        let r = match self.projection_log_p(v) {
            Some(a) if a % e == 0 => Some(a / e),
            Some(_) => None,
            None => exact_log(&self.projection_size(v), self.qm()),
        };
        r.ok_or_else(|| {
            Error::NotAlmostAffine(format!(
                "|π_V(C)| = {} for V = {:?}",
                self.projection_size(v),
                v.rows()
            ))
        })
    }

    pub fn check_almost_affine_on(&self, spaces: &[Subspace], coverage: Coverage) -> AaVerdict {
        for v in spaces {
            if self.rank_of(v).is_err() {
                return AaVerdict {
                    partial: !coverage.exhaustive,
                    coverage,
                    almost_affine: false,
                    violation: Some(v.rows().clone()),
                    violation_size: Some(self.projection_size(v).to_string()),
                };
            }
        }
        AaVerdict {
            partial: !coverage.exhaustive,
            coverage,
            almost_affine: true,
            violation: None,
            violation_size: None,
        }
    }

    pub fn is_almost_affine(&self, scope: Scope, budget: u64, seed: u64) -> AaVerdict {
        let (spaces, coverage) = scope::resolve(self.tower.base(), self.n, scope, budget, seed);
        self.check_almost_affine_on(&spaces, coverage)
    }

    /// Induced q-matroid. Builds a full table when the lattice fits the
    /// budget (failing on the first non-integral rank), else a lazy oracle.
    pub fn qmatroid(&self, budget: u64) -> Result<QMatroid> {
        let f = Arc::new(self.tower.base().clone());
        match subspace::enumerate(&f, self.n, None, budget) {
            Ok(all) => {
                let mut map = HashMap::with_capacity(all.len());
                for v in all {
                    let r = self.rank_of(&v)?;
                    map.insert(v, r);
                }
                QMatroid::from_map(f, self.n, Origin::InducedFromCode, map)
            }
            Err(Error::Budget { .. }) => {
                let code = self.clone();
                Ok(QMatroid::from_fn(f, self.n, Origin::InducedFromCode, move |v| {
                    code.rank_of(v)
                }))
            }
            Err(e) => Err(e),
        }
    }

    /// Concrete puncturing `{G_Z c}` of length `dim Z`.
    pub fn puncture(&self, z: &Subspace) -> Result<Code> {
        if z.n() != self.n {
            return Err(Error::dim("puncturing space has the wrong ambient"));
        }
        let t = &self.tower;
        let g = z.rows();
        match &self.storage {
            Storage::Explicit(words) => {
                let set: HashSet<Word> = words.iter().map(|c| project(t, g, c)).collect();
                Code::explicit(t.clone(), z.dim(), set.into_iter().collect())
            }
            Storage::Additive { generators, offset } => Code::additive(
                t.clone(),
                z.dim(),
                generators.iter().map(|c| project(t, g, c)).collect(),
                project(t, g, offset),
            ),
        }
    }

    /// `C(Z, x) = {c ∈ C : π_Z(c) = π_Z(x)}`.
    pub fn subcode(&self, z: &Subspace, x: &[Elem]) -> Result<Code> {
        if z.n() != self.n {
            return Err(Error::dim("subcode space has the wrong ambient"));
        }
        if !self.contains(x) {
            return Err(Error::invalid("anchor is not a codeword"));
        }
        let t = &self.tower;
        let g = z.rows();
        let px = project(t, g, x);
        match &self.storage {
            Storage::Explicit(words) => Code::explicit(
                t.clone(),
                self.n,
                words.iter().filter(|c| project(t, g, c) == px).cloned().collect(),
            ),
            Storage::Additive { generators, .. } => {
                // kernel of a ↦ Σ a_l G_Z g_l over F_p
                let fp = t.prime();
                let images: Matrix = generators
                    .iter()
                    .map(|c| prime_digits(t, &project(t, g, c)))
                    .collect();
                let len = images.first().map_or(0, |r| r.len());
                let cols = linalg::transpose(&images, len);
                let ker = linalg::kernel(fp, &cols, generators.len());
                let gens: Vec<Word> = ker
                    .iter()
                    .map(|a| {
                        let mut acc = vec![0; self.n];
                        for (&c, gl) in a.iter().zip(generators) {
                            for _ in 0..c {
                                acc = vadd(t, &acc, gl);
                            }
                        }
                        acc
                    })
                    .collect();
                Code::additive(t.clone(), self.n, gens, x.to_vec())
            }
        }
    }

    /// `C(Z, x)` punctured on a complement of `Z` (default: the greedy
    /// standard-vector complement).
    pub fn shorten(&self, z: &Subspace, x: &[Elem], complement: Option<&Subspace>) -> Result<Code> {
        let f = self.tower.base();
        let c = match complement {
            Some(c) => {
                if c.n() != self.n
                    || c.dim() + z.dim() != self.n
                    || !z.sum(f, c).is_full()
                {
                    return Err(Error::invalid("complement is not a direct complement of Z"));
                }
                c.clone()
            }
            None => z.direct_complement(f),
        };
        self.subcode(z, x)?.puncture(&c)
    }

    /// Image under `x ↦ A x + t` with `A ∈ GL_n(F_q)`.
    pub fn apply_equivalence(&self, a: &Matrix, shift: &[Elem]) -> Result<Code> {
        let t = &self.tower;
        if a.len() != self.n || a.iter().any(|r| r.len() != self.n) {
            return Err(Error::dim("equivalence matrix has the wrong shape"));
        }
        linalg::inverse(t.base(), a)?;
        Self::check_word(t, self.n, shift)?;
        let map = |c: &Word| project(t, a, c);
        match &self.storage {
            Storage::Explicit(words) => Code::explicit(
                t.clone(),
                self.n,
                words.iter().map(|c| vadd(t, &map(c), shift)).collect(),
            ),
            Storage::Additive { generators, offset } => Code::additive(
                t.clone(),
                self.n,
                generators.iter().map(map).collect(),
                vadd(t, &map(offset), shift),
            ),
        }
    }

    /// The same codeword set described over a different basis Π. Coordinates
    /// are unchanged; only the tower's basis is replaced.
    pub fn with_tower(&self, tower: Arc<Tower>) -> Result<Code> {
        if tower.top() != self.tower.top() || tower.base() != self.tower.base() {
            return Err(Error::invalid("replacement tower has different fields"));
        }
        Ok(Code {
            tower,
            n: self.n,
            storage: self.storage.clone(),
        })
    }

    /// Same code converted to explicit storage.
    pub fn to_explicit(&self, budget: u64) -> Result<Code> {
        Code::explicit(self.tower.clone(), self.n, self.codewords(budget)?)
    }

    pub fn classify_linearity(&self, budget: u64) -> Result<Linearity> {
        let t = &self.tower;
        let zero = vec![0; self.n];
        let contains_zero = self.contains(&zero);
        let q_gen = t.embed(t.base().generator());
        let qm_gen = t.top().generator();
        match &self.storage {
            Storage::Additive { generators, .. } => {
                let closed_under = |s: Elem| generators.iter().all(|g| self.contains_diff(&vscale(t, s, g)));
                let p_linear = contains_zero;
                let q_linear = p_linear && closed_under(q_gen);
                let qm_linear = q_linear && closed_under(qm_gen);
                Ok(Linearity {
                    contains_zero,
                    p_linear,
                    q_linear,
                    qm_linear,
                })
            }
            Storage::Explicit(words) => {
                let size = words.len() as u64;
                if size.saturating_mul(size) > budget {
                    return Err(Error::Budget {
                        needed: format!("{}", size as u128 * size as u128),
                        budget,
                    });
                }
                let p_linear = contains_zero
                    && words
                        .iter()
                        .all(|a| words.iter().all(|b| self.contains(&vadd(t, a, b))));
                let closed = |s: Elem| words.iter().all(|c| self.contains(&vscale(t, s, c)));
                let q_linear = p_linear && closed(q_gen);
                let qm_linear = q_linear && closed(qm_gen);
                Ok(Linearity {
                    contains_zero,
                    p_linear,
                    q_linear,
                    qm_linear,
                })
            }
        }
    }

    /// Whether `d` lies in the difference space `span_{F_p}(generators)`.
    fn contains_diff(&self, d: &[Elem]) -> bool {
        match &self.storage {
            Storage::Additive { offset, .. } => self.contains(&vadd(&self.tower, offset, d)),
            Storage::Explicit(_) => unreachable!("difference space only exists in additive form"),
        }
    }

    /// `supp_x(C) = Σ_c supp(c − x)`.
    pub fn code_support(&self, x: &[Elem], budget: u64) -> Result<Subspace> {
        let f = self.tower.base();
        let mut acc = Subspace::zero(f.order(), self.n);
        match &self.storage {
            Storage::Additive { generators, offset } => {
                // c − x ranges over the span shifted by offset − x
                let shift = vsub(&self.tower, offset, x);
                acc = acc.sum(f, &support(&self.tower, &shift));
                for g in generators {
                    acc = acc.sum(f, &support(&self.tower, g));
                }
            }
            Storage::Explicit(_) => {
                for c in self.codewords(budget)? {
                    acc = acc.sum(f, &support(&self.tower, &vsub(&self.tower, &c, x)));
                }
            }
        }
        Ok(acc)
    }

    /// Exact minimum rank distance.
    pub fn min_distance(&self, budget: u64) -> Result<usize> {
        let t = &self.tower;
        match &self.storage {
            Storage::Explicit(words) => {
                if words.len() < 2 {
                    return Err(Error::invalid("minimum distance needs at least two codewords"));
                }
                let mut best = usize::MAX;
                for (i, a) in words.iter().enumerate() {
                    for b in &words[i + 1..] {
                        best = best.min(rank_weight(t, &vsub(t, a, b)));
                    }
                }
                Ok(best)
            }
            Storage::Additive { generators, .. } => {
                if generators.is_empty() {
                    return Err(Error::invalid("minimum distance needs at least two codewords"));
                }
                let size = self.size();
                if size.to_u64().is_none_or(|s| s > budget) {
                    return Err(Error::Budget {
                        needed: size.to_string(),
                        budget,
                    });
                }
                let mut best = usize::MAX;
                for_each_span_element(t, generators, &vec![0; self.n], |w, nonzero| {
                    if nonzero {
                        best = best.min(rank_weight(t, w));
                    }
                });
                Ok(best)
            }
        }
    }
}

/// Keeps the generators that increase the `F_p`-rank, in order.
fn independent_subset(t: &Tower, generators: Vec<Word>) -> Vec<Word> {
    let fp = t.prime();
    let mut kept: Vec<Word> = Vec::new();
    let mut rows: Matrix = Vec::new();
    for g in generators {
        rows.push(prime_digits(t, &g));
        if linalg::prime_rank(fp, &rows) > kept.len() {
            kept.push(g);
        } else {
            rows.pop();
        }
    }
    kept
}

/// Visits every element `offset + Σ a_l g_l` once (odometer order over the
/// coefficients); the flag says whether some coefficient is nonzero.
pub fn for_each_span_element(t: &Tower, generators: &[Word], offset: &[Elem], mut visit: impl FnMut(&Word, bool)) {
    let p = t.p();
    let r = generators.len();
    let mut coeffs = vec![0u32; r];
    let mut cur: Word = offset.to_vec();
    visit(&cur, false);
    loop {
        // increment the odometer, updating the word incrementally
        let mut k = 0;
        while k < r {
            coeffs[k] += 1;
            if coeffs[k] < p {
                cur = vadd(t, &cur, &generators[k]);
                break;
            }
            coeffs[k] = 0;
            // wrapped: adding g once more returns the digit to zero
            cur = vadd(t, &cur, &generators[k]);
            k += 1;
        }
        if k == r {
            return;
        }
        visit(&cur, true);
    }
}

fn span_elements(t: &Tower, generators: &[Word], offset: &[Elem]) -> Vec<Word> {
    let mut out = Vec::new();
    for_each_span_element(t, generators, offset, |w, _| out.push(w.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::DEFAULT_BUDGET;

    fn f4_over_f2() -> Arc<Tower> {
        Arc::new(Tower::make(2, 1, 2, None, None).unwrap())
    }

    #[test]
    fn coordinate_matrix_and_support() {
        let t = f4_over_f2();
        let alpha = 2;
        let v = vec![alpha, 1, 0];
        assert_eq!(coordinate_matrix(&t, &v), vec![vec![0, 1], vec![1, 0], vec![0, 0]]);
        let s = support(&t, &v);
        assert_eq!(s, Subspace::span(t.base(), 3, &[vec![1, 0, 0], vec![0, 1, 0]]));
        assert_eq!(rank_weight(&t, &v), 2);
        assert_eq!(rank_weight(&t, &[0, 0, 0]), 0);
        assert_eq!(rank_weight(&t, &[3, 3, 3]), 1);
    }

    #[test]
    fn two_word_code_is_not_almost_affine() {
        let t = f4_over_f2();
        let c = Code::explicit(t.clone(), 2, vec![vec![0, 0], vec![1, 2]]).unwrap();
        let v = c.is_almost_affine(Scope::All, DEFAULT_BUDGET, 0);
        assert!(!v.almost_affine);
        assert_eq!(v.violation_size.as_deref(), Some("2"));
        assert_eq!(c.min_distance(DEFAULT_BUDGET).unwrap(), 2);
    }

    #[test]
    fn linear_span_is_fully_linear() {
        let t = f4_over_f2();
        let c = Code::linear_span(t.clone(), 3, &vec![vec![1, 2, 0]]).unwrap();
        assert_eq!(c.size(), BigUint::from(4u32));
        let l = c.classify_linearity(DEFAULT_BUDGET).unwrap();
        assert!(l.contains_zero && l.p_linear && l.q_linear && l.qm_linear);
        let e = c.to_explicit(DEFAULT_BUDGET).unwrap();
        assert_eq!(e.classify_linearity(DEFAULT_BUDGET).unwrap(), l);
        assert!(c.is_almost_affine(Scope::All, DEFAULT_BUDGET, 0).almost_affine);
    }

    #[test]
    fn additive_and_explicit_projection_sizes_agree() {
        let t = Arc::new(Tower::make(2, 1, 3, None, None).unwrap());
        let c = Code::additive(
            t.clone(),
            3,
            vec![vec![1, 2, 3], vec![4, 0, 1], vec![2, 2, 2], vec![6, 5, 4]],
            vec![1, 1, 0],
        )
        .unwrap();
        let e = c.to_explicit(DEFAULT_BUDGET).unwrap();
        for v in subspace::enumerate(t.base(), 3, None, DEFAULT_BUDGET).unwrap() {
            assert_eq!(c.projection_size(&v), e.projection_size(&v));
        }
        let x = e.codewords(DEFAULT_BUDGET).unwrap()[5].clone();
        for z in subspace::enumerate(t.base(), 3, None, DEFAULT_BUDGET).unwrap() {
            let a = c.subcode(&z, &x).unwrap().to_explicit(DEFAULT_BUDGET).unwrap();
            let b = e.subcode(&z, &x).unwrap();
            assert_eq!(a, b);
        }
        assert!(c.subcode(&Subspace::zero(2, 3), &[7, 7, 7]).is_err());
    }

    #[test]
    fn span_enumeration_visits_each_element_once() {
        let t = Arc::new(Tower::make(3, 1, 2, None, None).unwrap());
        let gens = vec![vec![1, 0], vec![3, 4]];
        let all = span_elements(&t, &gens, &[0, 0]);
        assert_eq!(all.len(), 9);
        let set: HashSet<Word> = all.into_iter().collect();
        assert_eq!(set.len(), 9);
    }
}
