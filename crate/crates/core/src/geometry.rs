//! Partial affine q-geometries: hyperplane classes `H_{v,α}`, the four
//! incidence properties, the correspondence with simple almost affine codes,
//! and operations on flats `C(V, x)`.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::code::{project, Code, Word};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{self, Matrix};
use crate::scope::{Coverage, Scope};
use crate::subspace::{self, Subspace};
use crate::tower::{Tower, TowerSpec};

/// Marks a point lying in no hyperplane of a class.
const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneRecord {
    pub direction: Vec<Elem>,
    pub alpha: Elem,
    pub members: Vec<usize>,
}

/// Serialized geometry. Without `hyperplanes` the incidence is given by the
/// pairing `⟨c, v⟩ = Σ c_i v_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometrySpec {
    pub tower: TowerSpec,
    pub n: usize,
    pub points: Vec<Word>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperplanes: Option<Vec<HyperplaneRecord>>,
}

#[derive(Clone, Debug)]
enum Incidence {
    Pairing,
    /// Per projective direction, the hyperplanes as `(α, members)` plus the
    /// first label found for every point.
    Table {
        records: Vec<Vec<(Elem, Vec<usize>)>>,
        labels: Vec<Vec<u32>>,
    },
}

#[derive(Clone, Debug)]
pub struct Geometry {
    tower: Arc<Tower>,
    n: usize,
    /// Point coordinates, row-major.
    flat: Vec<Elem>,
    /// The same coordinates, one column per position.
    coords: Vec<Vec<Elem>>,
    /// `mul_tabs[λ][x] = λ·x` for `λ ∈ F_q`, when the table is small.
    mul_tabs: Option<Vec<Vec<Elem>>>,
    len: usize,
    directions: Vec<Vec<Elem>>,
    dir_index: HashMap<Vec<Elem>, usize>,
    incidence: Incidence,
}

/// `⟨c, v⟩ = Σ c_i · v_i` with `v` embedded coordinatewise.
pub fn pairing(t: &Tower, c: &[Elem], v: &[Elem]) -> Elem {
    project(t, &vec![v.to_vec()], c)[0]
}

/// Scalar `λ` and projective representative `v / λ` of a nonzero vector.
fn normalize(t: &Tower, v: &[Elem]) -> Option<(Elem, Vec<Elem>)> {
    let f = t.base();
    let lead = *v.iter().find(|&&x| x != 0)?;
    let inv = f.inv(lead).ok()?;
    Some((lead, v.iter().map(|&x| f.mul(inv, x)).collect()))
}

impl Geometry {
    fn with_incidence(tower: Arc<Tower>, n: usize, points: Vec<Word>, incidence: Incidence) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("a geometry needs at least one point"));
        }
        let top = tower.top().order();
        let mut flat = Vec::with_capacity(points.len() * n);
        for p in &points {
            if p.len() != n || p.iter().any(|&x| x >= top) {
                return Err(Error::invalid("point is not a vector over the top field"));
            }
            flat.extend_from_slice(p);
        }
        let directions = subspace::projective_points(tower.base().order(), n);
        let dir_index = directions.iter().enumerate().map(|(i, d)| (d.clone(), i)).collect();
        let coords = (0..n).map(|i| points.iter().map(|p| p[i]).collect()).collect();
        let q = tower.base().order() as u64;
        let mul_tabs = (q * top as u64 <= 1 << 24).then(|| {
            (0..q as Elem)
                .map(|l| (0..top).map(|x| tower.scale(l, x)).collect())
                .collect()
        });
        Ok(Geometry {
            tower,
            n,
            flat,
            coords,
            mul_tabs,
            len: points.len(),
            directions,
            dir_index,
            incidence,
        })
    }

    /// Geometry read off a code through the pairing. The code must induce a
    /// simple q-matroid: `ρ(V) = dim V` whenever `dim V ≤ 2`.
    pub fn from_code(c: &Code, budget: u64) -> Result<Self> {
        let f = c.tower().base();
        for d in 1..=2.min(c.n()) {
            for v in subspace::enumerate(f, c.n(), Some(d), budget)? {
                let r = c.rank_of(&v).map_err(|e| match e {
                    Error::NotAlmostAffine(msg) => Error::Invalid(format!("code is not simple: {msg}")),
                    other => other,
                })?;
                if r as usize != d {
                    return Err(Error::Invalid(format!(
                        "code is not simple: ρ(V) = {r} for V = {:?}",
                        v.rows()
                    )));
                }
            }
        }
        Self::with_incidence(c.tower().clone(), c.n(), c.codewords(budget)?, Incidence::Pairing)
    }

    /// Geometry with explicit hyperplanes. Records may use any nonzero
    /// direction `u = λv`; they are stored as `H_{v, αλ^{-1}}`.
    pub fn from_records(tower: Arc<Tower>, n: usize, points: Vec<Word>, records: &[HyperplaneRecord]) -> Result<Self> {
        let mut g = Self::with_incidence(tower, n, points, Incidence::Pairing)?;
        let t = g.tower.clone();
        let mut table: Vec<Vec<(Elem, Vec<usize>)>> = vec![Vec::new(); g.directions.len()];
        for r in records {
            if r.direction.len() != n || r.direction.iter().any(|&x| x >= t.base().order()) {
                return Err(Error::invalid("hyperplane direction is not a vector over the base field"));
            }
            if r.alpha >= t.top().order() {
                return Err(Error::invalid("hyperplane label is not a field element"));
            }
            if r.members.iter().any(|&i| i >= g.len) {
                return Err(Error::invalid("hyperplane member out of range"));
            }
            let (lambda, rep) =
                normalize(&t, &r.direction).ok_or_else(|| Error::invalid("hyperplane direction is zero"))?;
            let alpha = t.top().div(r.alpha, t.embed(lambda))?;
            let d = g.dir_index[&rep];
            let mut members = r.members.clone();
            members.sort_unstable();
            members.dedup();
            match table[d].iter_mut().find(|(a, _)| *a == alpha) {
                Some((_, m)) => {
                    m.extend(members);
                    m.sort_unstable();
                    m.dedup();
                }
                None => table[d].push((alpha, members)),
            }
        }
        let labels = table
            .iter()
            .map(|recs| {
                let mut col = vec![NONE; g.len];
                for (alpha, members) in recs {
                    for &i in members {
                        if col[i] == NONE {
                            col[i] = *alpha;
                        }
                    }
                }
                col
            })
            .collect();
        g.incidence = Incidence::Table {
            records: table,
            labels,
        };
        Ok(g)
    }

    pub fn from_spec(spec: &GeometrySpec) -> Result<Self> {
        let tower = Arc::new(Tower::from_spec(&spec.tower)?);
        match &spec.hyperplanes {
            Some(records) => Self::from_records(tower, spec.n, spec.points.clone(), records),
            None => Self::with_incidence(tower, spec.n, spec.points.clone(), Incidence::Pairing),
        }
    }

    /// Serialized form; pairing-based incidence is written out as records.
    pub fn spec(&self, with_records: bool) -> GeometrySpec {
        let hyperplanes = match (&self.incidence, with_records) {
            (Incidence::Pairing, false) => None,
            _ => {
                let mut out = Vec::new();
                for (d, dir) in self.directions.iter().enumerate() {
                    for (alpha, members) in self.class(d) {
                        out.push(HyperplaneRecord {
                            direction: dir.clone(),
                            alpha,
                            members,
                        });
                    }
                }
                Some(out)
            }
        };
        GeometrySpec {
            tower: self.tower.spec(),
            n: self.n,
            points: self.points(),
            hyperplanes,
        }
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn point(&self, i: usize) -> &[Elem] {
        &self.flat[i * self.n..(i + 1) * self.n]
    }

    pub fn points(&self) -> Vec<Word> {
        (0..self.len).map(|i| self.point(i).to_vec()).collect()
    }

    pub fn directions(&self) -> &[Vec<Elem>] {
        &self.directions
    }

    /// Nonempty hyperplanes of the class of direction index `d`, by label.
    pub fn class(&self, d: usize) -> Vec<(Elem, Vec<usize>)> {
        match &self.incidence {
            Incidence::Table { records, .. } => {
                let mut recs: Vec<_> = records[d].iter().filter(|(_, m)| !m.is_empty()).cloned().collect();
                recs.sort();
                recs
            }
            Incidence::Pairing => {
                let mut by_label: std::collections::BTreeMap<Elem, Vec<usize>> = Default::default();
                for (i, a) in self.column(&self.directions[d]).into_iter().enumerate() {
                    by_label.entry(a).or_default().push(i);
                }
                by_label.into_iter().collect()
            }
        }
    }

    /// Label of every point in the class of the nonzero vector `v`
    /// ([`NONE`] when a point lies in no hyperplane of that class).
    pub fn column(&self, v: &[Elem]) -> Vec<u32> {
        let t = &self.tower;
        match &self.incidence {
            Incidence::Pairing => {
                let top = t.top();
                let mut acc = vec![0; self.len];
                for (i, &x) in v.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    let col = &self.coords[i];
                    match &self.mul_tabs {
                        Some(tabs) => {
                            let tab = &tabs[x as usize];
                            for (a, &c) in acc.iter_mut().zip(col) {
                                *a = top.add(*a, tab[c as usize]);
                            }
                        }
                        None => {
                            let s = t.embed(x);
                            for (a, &c) in acc.iter_mut().zip(col) {
                                *a = top.add(*a, top.mul(s, c));
                            }
                        }
                    }
                }
                acc
            }
            Incidence::Table { labels, .. } => {
                let Some((lambda, rep)) = normalize(t, v) else {
                    return vec![NONE; self.len];
                };
                let l = t.embed(lambda);
                labels[self.dir_index[&rep]]
                    .iter()
                    .map(|&a| if a == NONE { NONE } else { t.top().mul(l, a) })
                    .collect()
            }
        }
    }

    fn label(&self, i: usize, v: &[Elem]) -> u32 {
        let t = &self.tower;
        match &self.incidence {
            Incidence::Pairing => pairing(t, self.point(i), v),
            Incidence::Table { labels, .. } => {
                let Some((lambda, rep)) = normalize(t, v) else {
                    return NONE;
                };
                let a = labels[self.dir_index[&rep]][i];
                if a == NONE {
                    NONE
                } else {
                    t.scale(lambda, a)
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub holds: bool,
    pub coverage: Coverage,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl PropertyVerdict {
    fn pass(coverage: Coverage) -> Self {
        PropertyVerdict {
            holds: true,
            coverage,
            witness: None,
        }
    }

    fn fail(coverage: Coverage, witness: String) -> Self {
        PropertyVerdict {
            holds: false,
            coverage,
            witness: Some(witness),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometryVerdict {
    pub property1: PropertyVerdict,
    /// Every hyperplane has exactly `|A| / q^m` points.
    pub balanced: bool,
    /// Distinct directions induce distinct partitions.
    pub distinct_classes: PropertyVerdict,
    pub property2: PropertyVerdict,
    pub property3: PropertyVerdict,
    pub property4: PropertyVerdict,
}

impl GeometryVerdict {
    /// Properties 1–4.
    pub fn holds(&self) -> bool {
        self.property1.holds && self.property2.holds && self.property3.holds && self.property4.holds
    }

    /// Properties 1–4 and no two non-parallel directions with the same
    /// partition.
    pub fn proper(&self) -> bool {
        self.holds() && self.distinct_classes.holds
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Random bases tried for Property 2 besides the standard one.
    pub random_bases: u64,
    /// Every ordered basis for Property 2 (subject to the budget).
    pub all_bases: bool,
    /// Points sampled for Property 3.
    pub sample_points: u64,
    /// Subspaces for Property 4.
    pub scope: Scope,
    pub budget: u64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            random_bases: 256,
            all_bases: false,
            sample_points: 64,
            scope: Scope::All,
            budget: subspace::DEFAULT_BUDGET,
            seed: 0,
        }
    }
}

fn exhaustive(requested: &str, inspected: u64) -> Coverage {
    Coverage {
        requested: requested.into(),
        exhaustive: true,
        sample_size: None,
        inspected,
    }
}

fn sampled(requested: String, inspected: u64) -> Coverage {
    Coverage {
        requested,
        exhaustive: false,
        sample_size: Some(inspected),
        inspected,
    }
}

pub fn verify(g: &Geometry, opts: &VerifyOptions) -> Result<GeometryVerdict> {
    let (property1, balanced) = property1(g);
    Ok(GeometryVerdict {
        property1,
        balanced,
        distinct_classes: distinct_classes(g),
        property2: property2(g, opts)?,
        property3: property3(g, opts),
        property4: property4(g, opts)?,
    })
}

/// Each class partitions the points: every point carries exactly one label.
pub fn property1(g: &Geometry) -> (PropertyVerdict, bool) {
    let dirs = g.directions.len() as u64;
    let cov = exhaustive("all directions", dirs);
    let qm = g.tower.top().order() as usize;
    let mut balanced = g.len % qm == 0;
    for (d, dir) in g.directions.iter().enumerate() {
        let mut sizes = vec![0usize; qm];
        match &g.incidence {
            Incidence::Pairing => {
                // the pairing is a function, so each point has one label
                for a in g.column(dir) {
                    sizes[a as usize] += 1;
                }
            }
            Incidence::Table { records, .. } => {
                let mut seen = vec![0u32; g.len];
                for (alpha, members) in &records[d] {
                    sizes[*alpha as usize] += members.len();
                    for &i in members {
                        seen[i] += 1;
                    }
                }
                if let Some(i) = seen.iter().position(|&s| s != 1) {
                    return (
                        PropertyVerdict::fail(
                            cov,
                            format!("point {i} lies in {} hyperplanes of direction {dir:?}", seen[i]),
                        ),
                        false,
                    );
                }
            }
        }
        if balanced && sizes.iter().any(|&s| s != g.len / qm) {
            balanced = false;
        }
    }
    (PropertyVerdict::pass(cov), balanced)
}

/// Canonical form of a partition: labels renumbered by first occurrence.
fn canonical(col: &[u32], qm: usize) -> Vec<u32> {
    let mut map = vec![NONE; qm];
    let mut next = 0;
    col.iter()
        .map(|&a| {
            if a == NONE {
                return NONE;
            }
            if map[a as usize] == NONE {
                map[a as usize] = next;
                next += 1;
            }
            map[a as usize]
        })
        .collect()
}

pub fn distinct_classes(g: &Geometry) -> PropertyVerdict {
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};
    let cov = exhaustive("all direction pairs", g.directions.len() as u64);
    let qm = g.tower.top().order() as usize;
    let mut by_hash: HashMap<u64, Vec<usize>> = HashMap::new();
    for (d, dir) in g.directions.iter().enumerate() {
        let canon = canonical(&g.column(dir), qm);
        let mut h = DefaultHasher::new();
        canon.hash(&mut h);
        let bucket = by_hash.entry(h.finish()).or_default();
        for &e in bucket.iter() {
            if canonical(&g.column(&g.directions[e]), qm) == canon {
                return PropertyVerdict::fail(
                    cov,
                    format!(
                        "directions {:?} and {:?} induce the same partition",
                        g.directions[e], dir
                    ),
                );
            }
        }
        bucket.push(d);
    }
    PropertyVerdict::pass(cov)
}

fn random_invertible(f: &crate::field::Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let m: Matrix = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..f.order())).collect())
            .collect();
        if linalg::rank(f, &m) == n {
            return m;
        }
    }
}

/// All ordered bases of `F_q^n`, as rows.
fn all_ordered_bases(f: &crate::field::Field, n: usize) -> Vec<Matrix> {
    let q = f.order() as u64;
    let vectors: Vec<Vec<Elem>> = (1..q.pow(n as u32))
        .map(|k| {
            let mut v = vec![0; n];
            let mut t = k;
            for x in v.iter_mut() {
                *x = (t % q) as Elem;
                t /= q;
            }
            v
        })
        .collect();
    let mut out = Vec::new();
    let mut cur: Matrix = Vec::new();
    fn extend(f: &crate::field::Field, n: usize, vectors: &[Vec<Elem>], cur: &mut Matrix, out: &mut Vec<Matrix>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in vectors {
            cur.push(v.clone());
            if linalg::rank(f, cur) == cur.len() {
                extend(f, n, vectors, cur, out);
            }
            cur.pop();
        }
    }
    extend(f, n, &vectors, &mut cur, &mut out);
    out
}

/// `|GL_n(q)|`, saturating.
fn gl_order(q: u64, n: usize) -> u128 {
    let qn = (q as u128).saturating_pow(n as u32);
    (0..n).fold(1u128, |acc, i| acc.saturating_mul(qn - (q as u128).pow(i as u32)))
}

/// LSD radix sort of keys below `2^bits`.
fn radix_sort(keys: &mut Vec<u64>, bits: u32) {
    const DIGIT: u32 = 16;
    let mut buf = vec![0u64; keys.len()];
    let mut shift = 0;
    while shift < bits {
        let mut count = vec![0usize; (1 << DIGIT) + 1];
        for &k in keys.iter() {
            count[((k >> shift) & 0xFFFF) as usize + 1] += 1;
        }
        for d in 0..1 << DIGIT {
            count[d + 1] += count[d];
        }
        for &k in keys.iter() {
            let d = ((k >> shift) & 0xFFFF) as usize;
            buf[count[d]] = k;
            count[d] += 1;
        }
        std::mem::swap(keys, &mut buf);
        shift += DIGIT;
    }
}

/// First two points sharing all labels under `basis`, if any.
fn collision(g: &Geometry, basis: &Matrix) -> Option<(usize, usize)> {
    let bits = 32 - (g.tower.top().order() - 1).leading_zeros().max(1);
    if (bits as usize) * basis.len() <= 64 {
        let mut keys = vec![0u64; g.len];
        let mut live = vec![true; g.len];
        for v in basis {
            for ((k, l), a) in keys.iter_mut().zip(live.iter_mut()).zip(g.column(v)) {
                *l &= a != NONE;
                *k = (*k << bits) | (a as u64 & ((1 << bits) - 1));
            }
        }
        let mut sorted: Vec<u64> = keys.iter().zip(&live).filter(|(_, &l)| l).map(|(&k, _)| k).collect();
        radix_sort(&mut sorted, bits * basis.len() as u32);
        let dup = sorted.windows(2).find(|w| w[0] == w[1])?[0];
        let mut hits = (0..g.len).filter(|&i| live[i] && keys[i] == dup);
        Some((hits.next()?, hits.next()?))
    } else {
        let cols: Vec<Vec<u32>> = basis.iter().map(|v| g.column(v)).collect();
        let mut keys: Vec<(Vec<u32>, usize)> = (0..g.len)
            .filter(|&i| cols.iter().all(|c| c[i] != NONE))
            .map(|i| (cols.iter().map(|c| c[i]).collect(), i))
            .collect();
        keys.sort_unstable();
        keys.windows(2).find(|w| w[0].0 == w[1].0).map(|w| (w[0].1, w[1].1))
    }
}

/// A basis intersection `⋂ H_{γ_i, α_i}` holds at most one point.
pub fn property2(g: &Geometry, opts: &VerifyOptions) -> Result<PropertyVerdict> {
    let f = g.tower.base();
    let n = g.n;
    let (bases, cov) = if opts.all_bases {
        let count = gl_order(f.order() as u64, n);
        if count > opts.budget as u128 {
            return Err(Error::Budget {
                needed: count.to_string(),
                budget: opts.budget,
            });
        }
        let b = all_ordered_bases(f, n);
        let len = b.len() as u64;
        (b, exhaustive("all ordered bases", len))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut b = vec![linalg::identity(n)];
        for _ in 0..opts.random_bases {
            b.push(random_invertible(f, n, &mut rng));
        }
        let len = b.len() as u64;
        (b, sampled(format!("standard basis + {} random", opts.random_bases), len))
    };
    for basis in &bases {
        if let Some((i, j)) = collision(g, basis) {
            return Ok(PropertyVerdict::fail(
                cov,
                format!("points {i} and {j} share every hyperplane of basis {basis:?}"),
            ));
        }
    }
    Ok(PropertyVerdict::pass(cov))
}

/// `P ∈ H_{u,α} ∩ H_{v,β}` implies `P ∈ H_{u+v, α+β}`; `u` ranges over
/// projective representatives, `v` over all nonzero vectors.
pub fn property3(g: &Geometry, opts: &VerifyOptions) -> PropertyVerdict {
    let f = g.tower.base();
    let top = g.tower.top();
    let n = g.n;
    let q = f.order() as u64;
    let pts: Vec<usize> = if (g.len as u64) <= opts.sample_points {
        (0..g.len).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
        rand::seq::index::sample(&mut rng, g.len, opts.sample_points as usize).into_vec()
    };
    let all: Vec<Vec<Elem>> = (1..q.pow(n as u32))
        .map(|k| {
            let mut v = vec![0; n];
            let mut t = k;
            for x in v.iter_mut().rev() {
                *x = (t % q) as Elem;
                t /= q;
            }
            v
        })
        .collect();
    let cov = if pts.len() == g.len {
        exhaustive("all points", pts.len() as u64)
    } else {
        sampled(format!("sample={}", opts.sample_points), pts.len() as u64)
    };
    let index = |v: &[Elem]| v.iter().fold(0usize, |k, &x| k * q as usize + x as usize);
    let mut labels = vec![NONE; all.len() + 1];
    for &i in &pts {
        for v in &all {
            labels[index(v)] = g.label(i, v);
        }
        for u in &g.directions {
            let a = labels[index(u)];
            if a == NONE {
                continue;
            }
            for v in &all {
                let w: Vec<Elem> = u.iter().zip(v).map(|(&x, &y)| f.add(x, y)).collect();
                let wi = index(&w);
                let b = labels[index(v)];
                if wi == 0 || b == NONE {
                    continue;
                }
                let c = labels[wi];
                if c != top.add(a, b) {
                    return PropertyVerdict::fail(
                        cov,
                        format!("point {i} with u = {u:?}, v = {v:?}: labels {a} + {b} but u+v carries {c}"),
                    );
                }
            }
        }
    }
    PropertyVerdict::pass(cov)
}

/// Point partition by a fixed set of labels; [`NONE`] marks excluded points.
struct Fibers {
    id: Vec<u32>,
    count: u32,
}

/// Refines `parent` by `col`. Returns the refinement and, when nonempty
/// fibers differ in size, two of the sizes.
fn refine(parent: &Fibers, col: &[u32], qm: u64, scratch: &mut Vec<u32>) -> (Fibers, Option<(u32, u32)>) {
    let slots = parent.count as u64 * qm;
    let mut id = vec![NONE; col.len()];
    let mut sizes: Vec<u32> = Vec::new();
    let key = |i: usize| parent.id[i] as u64 * qm + col[i] as u64;
    let live = |i: usize| parent.id[i] != NONE && col[i] != NONE;
    if slots <= 1 << 24 {
        if (scratch.len() as u64) < slots {
            scratch.resize(slots as usize, NONE);
        }
        for i in 0..col.len() {
            if !live(i) {
                continue;
            }
            let k = key(i) as usize;
            if scratch[k] == NONE {
                scratch[k] = sizes.len() as u32;
                sizes.push(0);
            }
            id[i] = scratch[k];
            sizes[scratch[k] as usize] += 1;
        }
        for i in 0..col.len() {
            if live(i) {
                scratch[key(i) as usize] = NONE;
            }
        }
    } else {
        let mut map: HashMap<u64, u32> = HashMap::new();
        for i in 0..col.len() {
            if !live(i) {
                continue;
            }
            let next = sizes.len() as u32;
            let f = *map.entry(key(i)).or_insert_with(|| {
                sizes.push(0);
                next
            });
            id[i] = f;
            sizes[f as usize] += 1;
        }
    }
    let bad = sizes.iter().find(|&&s| s != sizes[0]).map(|&s| (sizes[0], s));
    (
        Fibers {
            id,
            count: sizes.len() as u32,
        },
        bad,
    )
}

/// Nonempty intersections over a basis of each `V` have equal sizes.
/// Subspaces are visited along the RREF tree (a subspace's parent is the
/// span of its first `d − 1` RREF rows) so fibers refine incrementally;
/// below a node whose fibers are singletons every intersection is a point.
pub fn property4(g: &Geometry, opts: &VerifyOptions) -> Result<PropertyVerdict> {
    let f = g.tower.base();
    let n = g.n;
    let qm = g.tower.top().order() as u64;
    let mut scratch = Vec::new();
    let root = Fibers {
        id: vec![0; g.len],
        count: 1,
    };
    match opts.scope {
        Scope::Sample(count) => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x4);
            for s in 0..count {
                let d = rng.gen_range(1..=n);
                let v = Subspace::random(f, n, d, &mut rng);
                let mut fib = Fibers {
                    id: root.id.clone(),
                    count: 1,
                };
                for row in v.rows() {
                    let (next, bad) = refine(&fib, &g.column(row), qm, &mut scratch);
                    if let Some((a, b)) = bad {
                        return Ok(PropertyVerdict::fail(
                            sampled(format!("sample={count}"), s + 1),
                            format!("V = {:?}: intersections of sizes {a} and {b}", v.rows()),
                        ));
                    }
                    fib = next;
                }
            }
            Ok(PropertyVerdict::pass(sampled(format!("sample={count}"), count)))
        }
        Scope::All | Scope::UpToDim(_) => {
            let max_dim = match opts.scope {
                Scope::UpToDim(d) => d.min(n),
                _ => n,
            };
            let total: num_bigint::BigUint = (0..=max_dim)
                .map(|d| subspace::subspace_count(f.order(), n, Some(d)))
                .sum();
            if total > num_bigint::BigUint::from(opts.budget) {
                return Err(Error::Budget {
                    needed: total.to_string(),
                    budget: opts.budget,
                });
            }
            let requested = opts.scope.to_string();
            let mut visited = 1u64;
            let mut fail = None;
            let mut rows: Matrix = Vec::new();
            descend(g, &root, &mut rows, max_dim, qm, &mut scratch, &mut visited, &mut fail);
            let cov = exhaustive(&requested, visited);
            Ok(match fail {
                Some(w) => PropertyVerdict::fail(cov, w),
                None => PropertyVerdict::pass(cov),
            })
        }
    }
}

/// Children of the RREF node `rows`: a new last row with pivot `c` beyond
/// the current pivots, where every existing row vanishes in column `c`.
fn children(q: u32, n: usize, rows: &Matrix) -> Vec<Vec<Elem>> {
    let pivots: Vec<usize> = rows
        .iter()
        .map(|r| r.iter().position(|&x| x != 0).expect("RREF rows are nonzero"))
        .collect();
    let start = pivots.last().map_or(0, |&p| p + 1);
    let mut out = Vec::new();
    for c in start..n {
        if rows.iter().any(|r| r[c] != 0) {
            continue;
        }
        let free: Vec<usize> = (c + 1..n).filter(|j| !pivots.contains(j)).collect();
        let count = (q as u64).pow(free.len() as u32);
        for k in 0..count {
            let mut v = vec![0; n];
            v[c] = 1;
            let mut t = k;
            for &j in free.iter().rev() {
                v[j] = (t % q as u64) as Elem;
                t /= q as u64;
            }
            out.push(v);
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn descend(
    g: &Geometry,
    fib: &Fibers,
    rows: &mut Matrix,
    max_dim: usize,
    qm: u64,
    scratch: &mut Vec<u32>,
    visited: &mut u64,
    fail: &mut Option<String>,
) {
    if rows.len() == max_dim || fail.is_some() {
        return;
    }
    let q = g.tower.base().order();
    let singletons = fib.count as usize == fib.id.iter().filter(|&&i| i != NONE).count();
    for row in children(q, g.n, rows) {
        if fail.is_some() {
            return;
        }
        *visited += 1;
        rows.push(row);
        if singletons {
            // every refinement of singleton fibers has singleton fibers
            count_subtree(q, g.n, rows, max_dim, visited);
        } else {
            let (next, bad) = refine(fib, &g.column(rows.last().unwrap()), qm, scratch);
            if let Some((a, b)) = bad {
                *fail = Some(format!("V = {rows:?}: intersections of sizes {a} and {b}"));
            } else {
                descend(g, &next, rows, max_dim, qm, scratch, visited, fail);
            }
        }
        rows.pop();
    }
}

fn count_subtree(q: u32, n: usize, rows: &mut Matrix, max_dim: usize, visited: &mut u64) {
    if rows.len() == max_dim {
        return;
    }
    for row in children(q, n, rows) {
        *visited += 1;
        rows.push(row);
        count_subtree(q, n, rows, max_dim, visited);
        rows.pop();
    }
}

/// `φ_E(P) = (α_1, …, α_n)` with `P ∈ H_{γ_i, α_i}` for the rows `γ_i` of
/// `basis`.
pub fn code_from_geometry(g: &Geometry, basis: &Matrix) -> Result<Code> {
    let f = g.tower.base();
    let n = g.n;
    if basis.len() != n || basis.iter().any(|r| r.len() != n) || linalg::rank(f, basis) != n {
        return Err(Error::invalid("coordinatization needs a basis of F_q^n"));
    }
    let cols: Vec<Vec<u32>> = basis.iter().map(|v| g.column(v)).collect();
    let mut words: Vec<Word> = Vec::with_capacity(g.len);
    for i in 0..g.len {
        let w: Word = cols.iter().map(|c| c[i]).collect();
        if w.contains(&NONE) {
            return Err(Error::Invalid(format!("point {i} lies in no hyperplane of some basis direction")));
        }
        words.push(w);
    }
    if let Some((i, j)) = collision(g, basis) {
        return Err(Error::Invalid(format!("coordinatization collision between points {i} and {j}")));
    }
    Code::explicit(g.tower.clone(), n, words)
}

/// The flat `C(V, x) = {c ∈ C : π_V(c) = π_V(x)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flat {
    pub space: Subspace,
    pub anchor: Word,
}

impl Flat {
    pub fn new(space: Subspace, anchor: Word) -> Self {
        Flat { space, anchor }
    }

    pub fn members(&self, c: &Code, budget: u64) -> Result<BTreeSet<Word>> {
        Ok(c.subcode(&self.space, &self.anchor)?.codewords(budget)?.into_iter().collect())
    }

    /// `dim C − ρ(V)`.
    pub fn dim(&self, c: &Code) -> Result<u32> {
        let k = c
            .integral_dimension()
            .ok_or_else(|| Error::NotAlmostAffine("code size is not a power of q^m".into()))?;
        Ok(k - c.rank_of(&self.space)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatReport {
    pub result: Option<Flat>,
    pub dim: Option<u32>,
    /// The predicted set agrees with the brute-force one.
    pub agrees: bool,
    /// The dimension statement attached to the task holds.
    pub bound_holds: bool,
}

fn shared_point(a: &BTreeSet<Word>, b: &BTreeSet<Word>) -> Result<Word> {
    a.intersection(b)
        .next()
        .cloned()
        .ok_or_else(|| Error::invalid("the flats are disjoint"))
}

/// `L1 ∩ L2 = C(V + W, z)` for any shared point `z`.
pub fn flat_intersect(c: &Code, l1: &Flat, l2: &Flat, budget: u64) -> Result<FlatReport> {
    let f = c.tower().base();
    let (a, b) = (l1.members(c, budget)?, l2.members(c, budget)?);
    let z = shared_point(&a, &b)?;
    let flat = Flat::new(l1.space.sum(f, &l2.space), z);
    let want: BTreeSet<Word> = a.intersection(&b).cloned().collect();
    let dim = flat.dim(c)?;
    let (d1, d2) = (l1.dim(c)?, l2.dim(c)?);
    let k = c.integral_dimension().unwrap_or(0);
    let bound_holds = dim + k >= d1 + d2;
    Ok(FlatReport {
        agrees: flat.members(c, budget)? == want,
        dim: Some(dim),
        result: Some(flat),
        bound_holds,
    })
}

/// `L1 ∨ L2 = C(cl V ∩ cl W, z)`, with
/// `dim(L1 ∩ L2) ≥ dim L1 + dim L2 − dim(L1 ∨ L2) ≥ dim L1 + dim L2 − dim C`.
/// The defining spaces are replaced by their closures first; with arbitrary
/// defining spaces `C(V ∩ W, z)` can be strictly larger than the join.
pub fn flat_join(c: &Code, l1: &Flat, l2: &Flat, budget: u64) -> Result<FlatReport> {
    let f = c.tower().base();
    let (a, b) = (l1.members(c, budget)?, l2.members(c, budget)?);
    let z = shared_point(&a, &b)?;
    let m = c.qmatroid(budget)?;
    let (cv, cw) = (m.closure(&l1.space)?, m.closure(&l2.space)?);
    let join = Flat::new(cv.intersect(f, &cw), z.clone());
    let members = join.members(c, budget)?;
    // the join contains both and is the smallest flat through z doing so
    let mut agrees = a.is_subset(&members) && b.is_subset(&members);
    for u in subspace::enumerate(f, c.n(), None, budget)? {
        let other = Flat::new(u, z.clone()).members(c, budget)?;
        if a.is_subset(&other) && b.is_subset(&other) && !members.is_subset(&other) {
            agrees = false;
            break;
        }
    }
    let meet = Flat::new(l1.space.sum(f, &l2.space), z).dim(c)?;
    let (d1, d2, dj) = (l1.dim(c)?, l2.dim(c)?, join.dim(c)?);
    let k = c.integral_dimension().unwrap_or(0);
    let bound_holds = meet + dj >= d1 + d2 && dj <= k;
    Ok(FlatReport {
        result: Some(join),
        dim: Some(dj),
        agrees,
        bound_holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParallelReport {
    pub blocks: usize,
    pub block_size: usize,
    pub expected_blocks: String,
    pub expected_size: String,
    pub partition: bool,
}

/// The flats `{C(V, x)}` partition `C` into `|π_V(C)|` blocks of size
/// `q^{m(k − ρ(V))}`.
pub fn parallel_check(c: &Code, v: &Subspace, budget: u64) -> Result<ParallelReport> {
    let t = c.tower();
    let mut blocks: HashMap<Word, usize> = HashMap::new();
    let words = c.codewords(budget)?;
    for w in &words {
        *blocks.entry(project(t, v.rows(), w)).or_default() += 1;
    }
    let sizes: BTreeSet<usize> = blocks.values().copied().collect();
    let k = c
        .integral_dimension()
        .ok_or_else(|| Error::NotAlmostAffine("code size is not a power of q^m".into()))?;
    let r = c.rank_of(v)?;
    let expected_blocks = num_bigint::BigUint::from(c.qm()).pow(r);
    let expected_size = num_bigint::BigUint::from(c.qm()).pow(k - r);
    let block_size = *sizes.iter().next().expect("codes are nonempty");
    Ok(ParallelReport {
        blocks: blocks.len(),
        block_size,
        partition: sizes.len() == 1
            && num_bigint::BigUint::from(blocks.len()) == expected_blocks
            && num_bigint::BigUint::from(block_size) == expected_size,
        expected_blocks: expected_blocks.to_string(),
        expected_size: expected_size.to_string(),
    })
}

/// Two distinct hyperplanes (flats of rank-1 spaces) either miss each other
/// or meet in a flat of dimension `dim C − 2`.
pub fn hyperplane_pair(c: &Code, h1: &Flat, h2: &Flat, budget: u64) -> Result<FlatReport> {
    for h in [h1, h2] {
        if c.rank_of(&h.space)? != 1 {
            return Err(Error::invalid("hyperplanes are flats of rank-1 spaces"));
        }
    }
    let (a, b) = (h1.members(c, budget)?, h2.members(c, budget)?);
    if a == b {
        return Err(Error::invalid("the hyperplanes coincide"));
    }
    let Ok(z) = shared_point(&a, &b) else {
        return Ok(FlatReport {
            result: None,
            dim: None,
            agrees: true,
            bound_holds: true,
        });
    };
    let f = c.tower().base();
    let flat = Flat::new(h1.space.sum(f, &h2.space), z);
    let want: BTreeSet<Word> = a.intersection(&b).cloned().collect();
    let dim = flat.dim(c)?;
    let k = c.integral_dimension().unwrap_or(0);
    Ok(FlatReport {
        agrees: flat.members(c, budget)? == want,
        bound_holds: dim + 2 == k,
        dim: Some(dim),
        result: Some(flat),
    })
}

/// Checks that `V ↦ C(V, z)` is an order-reversing bijection from the flats
/// of `M_C` onto the code flats through `z`.
pub fn local_lattice_check(c: &Code, z: &[Elem], budget: u64) -> Result<bool> {
    let m = c.qmatroid(budget)?;
    let f = c.tower().base();
    let flats = m.flats(budget)?;
    let all = subspace::enumerate(f, c.n(), None, budget)?;
    let mut images: Vec<BTreeSet<Word>> = Vec::with_capacity(flats.len());
    for v in &flats {
        images.push(Flat::new(v.clone(), z.to_vec()).members(c, budget)?);
    }
    // every code flat through z arises from a q-matroid flat
    let through_z: BTreeSet<BTreeSet<Word>> = all
        .iter()
        .map(|v| Flat::new(v.clone(), z.to_vec()).members(c, budget))
        .collect::<Result<_>>()?;
    let distinct: BTreeSet<&BTreeSet<Word>> = images.iter().collect();
    if distinct.len() != flats.len() || through_z.len() != flats.len() {
        return Ok(false);
    }
    for (i, v) in flats.iter().enumerate() {
        for (j, w) in flats.iter().enumerate() {
            if v.is_subspace_of(f, w) != images[j].is_subset(&images[i]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
