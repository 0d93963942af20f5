//! q-matroids as rank oracles on the subspace lattice of `F_q^n`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Matrix};
use crate::scope::{self, Coverage, Scope};
use crate::subspace::{self, Subspace, DEFAULT_BUDGET};

/// Where a q-matroid came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    InducedFromCode,
    Uniform,
    Vamos,
    Derived,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Origin::InducedFromCode => "induced-from-code",
            Origin::Uniform => "uniform",
            Origin::Vamos => "vamos",
            Origin::Derived => "derived",
        };
        f.write_str(s)
    }
}

type RankFn = dyn Fn(&Subspace) -> Result<u32> + Send + Sync;

#[derive(Clone)]
enum Source {
    Table(Arc<HashMap<Subspace, u32>>),
    Uniform(u32),
    /// The five rank-deficient 4-spaces.
    Vamos(Arc<Vec<Subspace>>),
    Oracle {
        f: Arc<RankFn>,
        memo: Arc<Mutex<HashMap<Subspace, u32>>>,
    },
}

/// A q-matroid on `F_q^n`. Cloning is cheap; lazy oracles share their memo.
#[derive(Clone)]
pub struct QMatroid {
    field: Arc<Field>,
    n: usize,
    origin: Origin,
    source: Source,
}

impl fmt::Debug for QMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QMatroid")
            .field("q", &self.field.order())
            .field("n", &self.n)
            .field("origin", &self.origin)
            .finish()
    }
}

/// One entry of a serialized rank table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub subspace: Matrix,
    pub rank: u32,
}

/// Serialized rank table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankTable {
    pub q: u32,
    pub n: usize,
    pub origin: Origin,
    pub entries: Vec<RankEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomMode {
    /// (R1)-(R3) over pairs of subspaces.
    Global,
    /// (R1')-(R3') over a subspace and one or two lines.
    Local,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomVerdict {
    pub mode: AxiomMode,
    pub coverage: Coverage,
    /// Number of individual axiom instances evaluated.
    pub checks: u64,
    pub passed: bool,
    pub counterexample: Option<String>,
}

fn rows_str(v: &Subspace) -> String {
    format!("{:?}", v.rows())
}

impl QMatroid {
    pub fn from_fn(
        field: Arc<Field>,
        n: usize,
        origin: Origin,
        f: impl Fn(&Subspace) -> Result<u32> + Send + Sync + 'static,
    ) -> Self {
        QMatroid {
            field,
            n,
            origin,
            source: Source::Oracle {
                f: Arc::new(f),
                memo: Arc::new(Mutex::new(HashMap::new())),
            },
        }
    }

    /// Table-backed q-matroid; the table must cover every subspace.
    pub fn from_map(field: Arc<Field>, n: usize, origin: Origin, table: HashMap<Subspace, u32>) -> Result<Self> {
        let expected = subspace::subspace_count(field.order(), n, None);
        if num_bigint::BigUint::from(table.len()) != expected {
            return Err(Error::invalid(format!(
                "rank table has {} entries, expected {expected}",
                table.len()
            )));
        }
        Ok(QMatroid {
            field,
            n,
            origin,
            source: Source::Table(Arc::new(table)),
        })
    }

    pub fn from_table(field: Arc<Field>, table: &RankTable) -> Result<Self> {
        if table.q != field.order() {
            return Err(Error::dim("rank table field order mismatch"));
        }
        let mut map = HashMap::new();
        for e in &table.entries {
            let v = Subspace::from_rows(&field, table.n, &e.subspace)?;
            if map.insert(v, e.rank).is_some() {
                return Err(Error::invalid("duplicate subspace in rank table"));
            }
        }
        Self::from_map(field, table.n, table.origin, map)
    }

    /// `U_{n,k}`: rank `min(dim V, k)`.
    pub fn uniform(field: Arc<Field>, n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::invalid(format!("uniform rank {k} exceeds {n}")));
        }
        Ok(QMatroid {
            field,
            n,
            origin: Origin::Uniform,
            source: Source::Uniform(k as u32),
        })
    }

    /// The Vámos q-matroid on `F_q^8` with `ξ(i) = e_i`.
    pub fn vamos(field: Arc<Field>) -> Self {
        const Y: [[usize; 4]; 5] = [
            [1, 2, 3, 4],
            [1, 4, 5, 6],
            [2, 3, 5, 6],
            [1, 4, 7, 8],
            [2, 3, 7, 8],
        ];
        let spans = Y
            .iter()
            .map(|ys| {
                let gens: Matrix = ys.iter().map(|&i| Subspace::unit(8, i - 1)).collect();
                Subspace::span(&field, 8, &gens)
            })
            .collect();
        QMatroid {
            field,
            n: 8,
            origin: Origin::Vamos,
            source: Source::Vamos(Arc::new(spans)),
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = origin;
        self
    }

    pub fn try_rank(&self, v: &Subspace) -> Result<u32> {
        if v.n() != self.n || v.q() != self.q() {
            return Err(Error::dim(format!(
                "subspace of F_{}^{} given to a q-matroid on F_{}^{}",
                v.q(),
                v.n(),
                self.q(),
                self.n
            )));
        }
        match &self.source {
            Source::Table(t) => t
                .get(v)
                .copied()
                .ok_or_else(|| Error::Internal("subspace missing from rank table".into())),
            Source::Uniform(k) => Ok((v.dim() as u32).min(*k)),
            Source::Vamos(spans) => Ok(if spans.contains(v) {
                3
            } else {
                (v.dim() as u32).min(4)
            }),
            Source::Oracle { f, memo } => {
                if let Some(&r) = memo.lock().expect("memo lock").get(v) {
                    return Ok(r);
                }
                let r = f(v)?;
                memo.lock().expect("memo lock").insert(v.clone(), r);
                Ok(r)
            }
        }
    }

    /// Rank of `v`. Panics if `v` lives in another ambient space or a lazy
    /// oracle fails; use [`QMatroid::try_rank`] to handle those cases.
    pub fn rank(&self, v: &Subspace) -> u32 {
        self.try_rank(v).unwrap_or_else(|e| panic!("rank evaluation failed: {e}"))
    }

    pub fn full(&self) -> Subspace {
        Subspace::full(&self.field, self.n)
    }

    pub fn zero(&self) -> Subspace {
        Subspace::zero(self.q(), self.n)
    }

    /// `ρ(E)`.
    pub fn full_rank(&self) -> u32 {
        self.rank(&self.full())
    }

    pub fn is_independent(&self, v: &Subspace) -> bool {
        self.rank(v) as usize == v.dim()
    }

    pub fn subspaces(&self, budget: u64) -> Result<Vec<Subspace>> {
        subspace::enumerate(&self.field, self.n, None, budget)
    }

    /// Full rank table in enumeration order.
    pub fn table(&self, budget: u64) -> Result<RankTable> {
        let entries = self
            .subspaces(budget)?
            .into_iter()
            .map(|v| {
                let rank = self.try_rank(&v)?;
                Ok(RankEntry {
                    subspace: v.rows().clone(),
                    rank,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RankTable {
            q: self.q(),
            n: self.n,
            origin: self.origin,
            entries,
        })
    }

    /// Evaluates every rank once and replaces the source by a table.
    pub fn materialize(&self, budget: u64) -> Result<QMatroid> {
        let mut map = HashMap::new();
        for v in self.subspaces(budget)? {
            let r = self.try_rank(&v)?;
            map.insert(v, r);
        }
        Ok(QMatroid {
            field: self.field.clone(),
            n: self.n,
            origin: self.origin,
            source: Source::Table(Arc::new(map)),
        })
    }

    /// Pointwise comparison of two q-matroids on the same ambient space.
    pub fn same_ranks(&self, other: &QMatroid, budget: u64) -> Result<bool> {
        if self.n != other.n || self.q() != other.q() {
            return Ok(false);
        }
        for v in self.subspaces(budget)? {
            if self.try_rank(&v)? != other.try_rank(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn verify_axioms(&self, mode: AxiomMode, scope: Scope, budget: u64, seed: u64) -> Result<AxiomVerdict> {
        match mode {
            AxiomMode::Global => self.verify_global(scope, budget, seed),
            AxiomMode::Local => self.verify_local(scope, budget, seed),
        }
    }

    fn verify_global(&self, scope: Scope, budget: u64, seed: u64) -> Result<AxiomVerdict> {
        let f = &*self.field;
        let (spaces, mut coverage) = scope::resolve(f, self.n, scope, budget, seed);
        let ranks: Vec<u32> = spaces
            .iter()
            .map(|v| self.try_rank(v))
            .collect::<Result<_>>()?;
        let mut checks = 0u64;
        let fail = |msg: String, checks: u64, coverage: Coverage| AxiomVerdict {
            mode: AxiomMode::Global,
            coverage,
            checks,
            passed: false,
            counterexample: Some(msg),
        };
        for (v, &r) in spaces.iter().zip(&ranks) {
            checks += 1;
            if r as usize > v.dim() {
                return Ok(fail(format!("R1: rank {r} exceeds dim of {}", rows_str(v)), checks, coverage));
            }
        }
        // pairs: exhaustive when the scope list is small enough, else seeded sample
        let nspaces = spaces.len() as u64;
        let pairs: Box<dyn Iterator<Item = (usize, usize)>> = if nspaces * nspaces <= budget {
            Box::new((0..spaces.len()).flat_map(move |i| (0..nspaces as usize).map(move |j| (i, j))))
        } else {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let count = scope::FALLBACK_SAMPLE.min(budget);
            coverage.exhaustive = false;
            coverage.sample_size = Some(count);
            let len = spaces.len();
            let v: Vec<(usize, usize)> = (0..count)
                .map(|_| (rng.gen_range(0..len), rng.gen_range(0..len)))
                .collect();
            Box::new(v.into_iter())
        };
        for (i, j) in pairs {
            let (a, b) = (&spaces[i], &spaces[j]);
            let (ra, rb) = (ranks[i], ranks[j]);
            checks += 1;
            if a.is_subspace_of(f, b) && ra > rb {
                return Ok(fail(
                    format!("R2: {} ≤ {} but rank {ra} > {rb}", rows_str(a), rows_str(b)),
                    checks,
                    coverage,
                ));
            }
            let s = self.try_rank(&a.sum(f, b))?;
            let t = self.try_rank(&a.intersect(f, b))?;
            if s + t > ra + rb {
                return Ok(fail(
                    format!(
                        "R3: V={} W={}: rank(V+W)+rank(V∩W) = {} > {}",
                        rows_str(a),
                        rows_str(b),
                        s + t,
                        ra + rb
                    ),
                    checks,
                    coverage,
                ));
            }
        }
        Ok(AxiomVerdict {
            mode: AxiomMode::Global,
            coverage,
            checks,
            passed: true,
            counterexample: None,
        })
    }

    fn verify_local(&self, scope: Scope, budget: u64, seed: u64) -> Result<AxiomVerdict> {
        let f = &*self.field;
        let (spaces, coverage) = scope::resolve(f, self.n, scope, budget, seed);
        let lines = subspace::projective_points(self.q(), self.n);
        let mut checks = 1u64;
        let fail = |msg: String, checks: u64, coverage: Coverage| AxiomVerdict {
            mode: AxiomMode::Local,
            coverage,
            checks,
            passed: false,
            counterexample: Some(msg),
        };
        let r0 = self.try_rank(&self.zero())?;
        if r0 != 0 {
            return Ok(fail(format!("R1': rank of the zero space is {r0}"), checks, coverage));
        }
        for v in &spaces {
            let rv = self.try_rank(v)?;
            let mut same = Vec::new();
            for x in &lines {
                if v.contains_vector(f, x) {
                    continue;
                }
                checks += 1;
                let vx = v.add_vector(f, x);
                let rx = self.try_rank(&vx)?;
                if rx < rv || rx > rv + 1 {
                    return Ok(fail(
                        format!("R2': V={} x={x:?}: ranks {rv} -> {rx}", rows_str(v)),
                        checks,
                        coverage,
                    ));
                }
                if rx == rv {
                    same.push(vx);
                }
            }
            for i in 0..same.len() {
                for j in i + 1..same.len() {
                    checks += 1;
                    let vxy = same[i].sum(f, &same[j]);
                    let r = self.try_rank(&vxy)?;
                    if r != rv {
                        return Ok(fail(
                            format!(
                                "R3': V={} with V+x={} and V+y={} of equal rank, but rank(V+x+y)={r}",
                                rows_str(v),
                                rows_str(&same[i]),
                                rows_str(&same[j])
                            ),
                            checks,
                            coverage,
                        ));
                    }
                }
            }
        }
        Ok(AxiomVerdict {
            mode: AxiomMode::Local,
            coverage,
            checks,
            passed: true,
            counterexample: None,
        })
    }

    /// `ρ*(V) = dim V − ρ(E) + ρ(V^⊥)`.
    pub fn dual(&self) -> QMatroid {
        let parent = self.clone();
        let field = self.field.clone();
        let re = OnceRank::new();
        QMatroid::from_fn(self.field.clone(), self.n, Origin::Derived, move |v| {
            let full = re.get(|| parent.try_rank(&parent.full()))?;
            let rp = parent.try_rank(&v.perp(&field))?;
            Ok(v.dim() as u32 + rp - full)
        })
    }

    /// Restriction to `z`, re-indexed on `F_q^{dim z}` through the canonical
    /// basis of `z`: `V' ↦ V'·B_Z`.
    pub fn restrict(&self, z: &Subspace) -> QMatroid {
        let parent = self.clone();
        let field = self.field.clone();
        let basis = z.rows().clone();
        let n = self.n;
        QMatroid::from_fn(self.field.clone(), z.dim(), Origin::Derived, move |v| {
            parent.try_rank(&v.map_rows(&field, &basis, n))
        })
    }

    /// Contraction by `z`, re-indexed on `F_q^{n − dim z}` through the canonical
    /// basis of `direct_complement(z)`: `V' ↦ ρ(Z + V'·B_C) − ρ(Z)`.
    pub fn contract(&self, z: &Subspace) -> QMatroid {
        let complement = z.direct_complement(&self.field);
        self.contract_along(z, &complement)
    }

    /// Contraction by `z` indexed through an explicit complement of `z`.
    pub fn contract_along(&self, z: &Subspace, complement: &Subspace) -> QMatroid {
        let parent = self.clone();
        let field = self.field.clone();
        let basis = complement.rows().clone();
        let z = z.clone();
        let n = self.n;
        let rz = OnceRank::new();
        QMatroid::from_fn(self.field.clone(), complement.dim(), Origin::Derived, move |v| {
            let base = rz.get(|| parent.try_rank(&z))?;
            let lifted = z.sum(&field, &v.map_rows(&field, &basis, n));
            Ok(parent.try_rank(&lifted)? - base)
        })
    }

    /// Circuits of dimension at most `max_dim` (all when `None`).
    pub fn circuits(&self, max_dim: Option<usize>, budget: u64) -> Result<Vec<Subspace>> {
        let f = &*self.field;
        let top = max_dim.unwrap_or(self.n).min(self.n);
        let mut out = Vec::new();
        for d in 1..=top {
            for v in subspace::enumerate(f, self.n, Some(d), budget)? {
                if self.try_rank(&v)? as usize == d {
                    continue;
                }
                let mut minimal = true;
                for h in subspace::enumerate_within(f, &v, Some(d - 1), budget)? {
                    if self.try_rank(&h)? as usize != d - 1 {
                        minimal = false;
                        break;
                    }
                }
                if minimal {
                    out.push(v);
                }
            }
        }
        Ok(out)
    }

    pub fn loops(&self, budget: u64) -> Result<Vec<Subspace>> {
        self.circuits(Some(1), budget)
    }

    /// No circuits of dimension 1 or 2, i.e. every space of dimension ≤ 2 is
    /// independent.
    pub fn is_simple(&self, budget: u64) -> Result<bool> {
        for d in 1..=2.min(self.n) {
            for v in subspace::enumerate(&self.field, self.n, Some(d), budget)? {
                if self.try_rank(&v)? as usize != d {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `cl(V) = V + Σ{x : dim x = 1, ρ(V+x) = ρ(V)}`.
    pub fn closure(&self, v: &Subspace) -> Result<Subspace> {
        let f = &*self.field;
        let rv = self.try_rank(v)?;
        let mut cl = v.clone();
        for x in subspace::projective_points(self.q(), self.n) {
            if cl.contains_vector(f, &x) {
                continue;
            }
            if self.try_rank(&v.add_vector(f, &x))? == rv {
                cl = cl.add_vector(f, &x);
            }
        }
        let rc = self.try_rank(&cl)?;
        if rc != rv {
            return Err(Error::Internal(format!(
                "closure changed the rank from {rv} to {rc}"
            )));
        }
        Ok(cl)
    }

    pub fn is_flat(&self, v: &Subspace) -> Result<bool> {
        Ok(&self.closure(v)? == v)
    }

    pub fn flats(&self, budget: u64) -> Result<Vec<Subspace>> {
        let mut out = Vec::new();
        for v in self.subspaces(budget)? {
            if self.is_flat(&v)? {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// Checks `ρ_2(φ(V)) = ρ_1(V)` for all `V`, where `φ(v) = iso · v` on
    /// column vectors.
    pub fn equivalent_under(&self, other: &QMatroid, iso: &Matrix, budget: u64) -> Result<bool> {
        if self.n != other.n || self.q() != other.q() {
            return Err(Error::dim("q-matroids live on different ambient spaces"));
        }
        if iso.len() != self.n || iso.iter().any(|r| r.len() != self.n) {
            return Err(Error::dim("isomorphism has the wrong shape"));
        }
        let f = &*self.field;
        linalg::inverse(f, iso)?;
        let on_rows = linalg::transpose(iso, self.n);
        for v in self.subspaces(budget)? {
            if other.try_rank(&v.map_rows(f, &on_rows, self.n))? != self.try_rank(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Lazily computed shared rank value.
#[derive(Clone)]
struct OnceRank(Arc<std::sync::OnceLock<u32>>);

impl OnceRank {
    fn new() -> Self {
        OnceRank(Arc::new(std::sync::OnceLock::new()))
    }

    fn get(&self, f: impl FnOnce() -> Result<u32>) -> Result<u32> {
        if let Some(&r) = self.0.get() {
            return Ok(r);
        }
        let r = f()?;
        Ok(*self.0.get_or_init(|| r))
    }
}

/// Default budget re-exported for callers that do not care.
pub const BUDGET: u64 = DEFAULT_BUDGET;

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Arc<Field> {
        Arc::new(Field::make(2, 1, None).unwrap())
    }

    #[test]
    fn uniform_passes_axioms_and_dualizes() {
        let f = f2();
        let u = QMatroid::uniform(f.clone(), 4, 2).unwrap();
        for mode in [AxiomMode::Global, AxiomMode::Local] {
            let v = u.verify_axioms(mode, Scope::All, BUDGET, 0).unwrap();
            assert!(v.passed, "{v:?}");
            assert!(v.coverage.exhaustive);
        }
        let d = u.dual();
        assert!(d.same_ranks(&QMatroid::uniform(f.clone(), 4, 2).unwrap(), BUDGET).unwrap());
        let u31 = QMatroid::uniform(f.clone(), 3, 1).unwrap();
        assert!(u31.dual().same_ranks(&QMatroid::uniform(f.clone(), 3, 2).unwrap(), BUDGET).unwrap());
        assert!(u31.dual().dual().same_ranks(&u31, BUDGET).unwrap());
    }

    #[test]
    fn mutated_table_fails_submodularity() {
        let f = f2();
        let u = QMatroid::uniform(f.clone(), 4, 2).unwrap();
        let mut map: HashMap<Subspace, u32> = u
            .subspaces(BUDGET)
            .unwrap()
            .into_iter()
            .map(|v| {
                let r = u.rank(&v);
                (v, r)
            })
            .collect();
        *map.get_mut(&u.full()).unwrap() += 1;
        let m = QMatroid::from_map(f, 4, Origin::Derived, map).unwrap();
        let v = m.verify_axioms(AxiomMode::Global, Scope::All, BUDGET, 0).unwrap();
        assert!(!v.passed);
        assert!(v.counterexample.unwrap().starts_with("R3"));
    }

    #[test]
    fn restriction_and_contraction_of_uniform() {
        let f = f2();
        let u = QMatroid::uniform(f.clone(), 4, 2).unwrap();
        let z = Subspace::span(&f, 4, &[vec![1, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 1, 0, 1]]);
        let r = u.restrict(&z);
        assert_eq!(r.n(), 3);
        assert!(r.same_ranks(&QMatroid::uniform(f.clone(), 3, 2).unwrap(), BUDGET).unwrap());
        assert!(u.restrict(&u.full()).same_ranks(&u, BUDGET).unwrap());
        assert!(u.contract(&u.zero()).same_ranks(&u, BUDGET).unwrap());
    }

    #[test]
    fn circuits_loops_flats_of_uniform() {
        let f = f2();
        let u = QMatroid::uniform(f.clone(), 4, 2).unwrap();
        let c = u.circuits(None, BUDGET).unwrap();
        assert_eq!(c.len(), 15);
        assert!(c.iter().all(|v| v.dim() == 3));
        assert!(u.loops(BUDGET).unwrap().is_empty());
        assert!(u.is_simple(BUDGET).unwrap());
        let free = QMatroid::uniform(f.clone(), 3, 3).unwrap();
        assert!(free.circuits(None, BUDGET).unwrap().is_empty());
        let flats = u.flats(BUDGET).unwrap();
        assert_eq!(flats.len(), 1 + 15 + 1);
        assert!(flats.iter().all(|v| v.dim() < 2 || v.is_full()));
        assert_eq!(u.closure(&u.full()).unwrap(), u.full());
    }

    #[test]
    fn vamos_ranks() {
        let f = f2();
        let v = QMatroid::vamos(f.clone());
        let span = |ids: &[usize]| {
            Subspace::span(&f, 8, &ids.iter().map(|&i| Subspace::unit(8, i - 1)).collect::<Vec<_>>())
        };
        assert_eq!(v.rank(&span(&[1, 2, 3, 4])), 3);
        assert_eq!(v.rank(&span(&[1, 2, 3, 5])), 4);
        assert_eq!(v.full_rank(), 4);
    }

    #[test]
    fn uniform_is_invariant_under_permutations() {
        let f = f2();
        let u = QMatroid::uniform(f.clone(), 4, 2).unwrap();
        let perm = vec![vec![0, 1, 0, 0], vec![0, 0, 0, 1], vec![1, 0, 0, 0], vec![0, 0, 1, 0]];
        assert!(u.equivalent_under(&u, &perm, BUDGET).unwrap());
        assert!(u.equivalent_under(&u, &linalg::identity(4), BUDGET).unwrap());
        assert!(u.equivalent_under(&u, &vec![vec![0; 4]; 4], BUDGET).is_err());
    }

    #[test]
    fn table_roundtrip() {
        let f = f2();
        let u = QMatroid::uniform(f.clone(), 3, 2).unwrap();
        let t = u.table(BUDGET).unwrap();
        assert_eq!(t.entries.len(), 16);
        let back = QMatroid::from_table(f, &t).unwrap();
        assert!(back.same_ranks(&u, BUDGET).unwrap());
        assert_eq!(back.origin(), Origin::Uniform);
    }
}
