//! Subspaces of `F_q^n` in canonical reduced row echelon form.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{self, Matrix};

/// Default cap on the number of subspaces a single enumeration may produce.
pub const DEFAULT_BUDGET: u64 = 1 << 22;

/// A subspace of `F_q^n`, stored as its RREF basis. Equality and hashing are
/// on the canonical rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SubspaceSpec")]
pub struct Subspace {
    q: u32,
    n: usize,
    rows: Matrix,
}

/// Wire form; rows need not be canonical.
#[derive(Deserialize)]
struct SubspaceSpec {
    q: u32,
    n: usize,
    rows: Matrix,
}

impl TryFrom<SubspaceSpec> for Subspace {
    type Error = Error;

    fn try_from(s: SubspaceSpec) -> Result<Self> {
        let (p, e) = crate::field::prime_power(s.q)?;
        let f = Field::make(p, e, None)?;
        Subspace::from_rows(&f, s.n, &s.rows)
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.n, self.rows.len(), &self.rows).cmp(&(
            other.q,
            other.n,
            other.rows.len(),
            &other.rows,
        ))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Result of [`lattice_op`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeValue {
    Space(Subspace),
    Bool(bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeOp {
    Sum,
    Intersect,
    /// Whether the first operand is contained in the second.
    Contains,
}

/// Checked lattice operation; fails on mismatched ambients.
pub fn lattice_op(f: &Field, a: &Subspace, b: &Subspace, op: LatticeOp) -> Result<LatticeValue> {
    if a.q != b.q || a.n != b.n || a.q != f.order() {
        return Err(Error::dim(format!(
            "ambient F_{}^{} vs F_{}^{}",
            a.q, a.n, b.q, b.n
        )));
    }
    Ok(match op {
        LatticeOp::Sum => LatticeValue::Space(a.sum(f, b)),
        LatticeOp::Intersect => LatticeValue::Space(a.intersect(f, b)),
        LatticeOp::Contains => LatticeValue::Bool(a.is_subspace_of(f, b)),
    })
}

impl Subspace {
    pub fn zero(q: u32, n: usize) -> Self {
        Subspace { q, n, rows: Vec::new() }
    }

    pub fn full(f: &Field, n: usize) -> Self {
        Subspace {
            q: f.order(),
            n,
            rows: linalg::identity(n),
        }
    }

    /// Span of `generators`. Entries are assumed to be valid encodings.
    pub fn span(f: &Field, n: usize, generators: &[Vec<Elem>]) -> Self {
        let mut rows: Matrix = generators.to_vec();
        linalg::rref(f, &mut rows);
        Subspace { q: f.order(), n, rows }
    }

    /// Validating constructor for external input.
    pub fn from_rows(f: &Field, n: usize, generators: &[Vec<Elem>]) -> Result<Self> {
        for r in generators {
            if r.len() != n {
                return Err(Error::dim(format!("row of length {} in F_q^{n}", r.len())));
            }
            if r.iter().any(|&x| x >= f.order()) {
                return Err(Error::invalid("subspace entry is not a field element"));
            }
        }
        Ok(Self::span(f, n, generators))
    }

    /// Standard basis vector `e_i` (0-based).
    pub fn unit(n: usize, i: usize) -> Vec<Elem> {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("rows are nonzero"))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.n
    }

    /// Panics if the ambients differ.
    pub fn sum(&self, f: &Field, other: &Subspace) -> Subspace {
        assert_eq!((self.q, self.n), (other.q, other.n), "ambient mismatch");
        let mut gens = self.rows.clone();
        gens.extend(other.rows.iter().cloned());
        Subspace::span(f, self.n, &gens)
    }

    pub fn add_vector(&self, f: &Field, v: &[Elem]) -> Subspace {
        let mut gens = self.rows.clone();
        gens.push(v.to_vec());
        Subspace::span(f, self.n, &gens)
    }

    /// Panics if the ambients differ.
    pub fn intersect(&self, f: &Field, other: &Subspace) -> Subspace {
        self.perp(f).sum(f, &other.perp(f)).perp(f)
    }

    /// Orthogonal complement under the standard dot product.
    pub fn perp(&self, f: &Field) -> Subspace {
        Subspace::span(f, self.n, &linalg::kernel(f, &self.rows, self.n))
    }

    pub fn contains_vector(&self, f: &Field, v: &[Elem]) -> bool {
        let mut r = v.to_vec();
        for (row, pc) in self.rows.iter().zip(self.pivots()) {
            let c = r[pc];
            if c != 0 {
                for (x, &y) in r.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        r.iter().all(|&x| x == 0)
    }

    /// `self ≤ other`.
    pub fn is_subspace_of(&self, f: &Field, other: &Subspace) -> bool {
        self.dim() <= other.dim() && self.rows.iter().all(|r| other.contains_vector(f, r))
    }

    /// Complement obtained by greedily adjoining standard basis vectors in
    /// index order.
    pub fn direct_complement(&self, f: &Field) -> Subspace {
        let mut acc = self.clone();
        let mut chosen = Vec::new();
        for i in 0..self.n {
            if acc.is_full() {
                break;
            }
            let e = Subspace::unit(self.n, i);
            if !acc.contains_vector(f, &e) {
                acc = acc.add_vector(f, &e);
                chosen.push(e);
            }
        }
        Subspace::span(f, self.n, &chosen)
    }

    /// Image under `v ↦ v·M` for an `n × n'` matrix `M`.
    pub fn map_rows(&self, f: &Field, m: &Matrix, n_out: usize) -> Subspace {
        let gens: Matrix = self
            .rows
            .iter()
            .map(|r| linalg::vec_mat(f, r, m, n_out))
            .collect();
        Subspace::span(f, n_out, &gens)
    }

    /// Coordinates of `v ∈ self` with respect to the canonical rows.
    pub fn coordinates_of(&self, v: &[Elem]) -> Vec<Elem> {
        // in RREF the coefficient of row i is the entry at its pivot
        self.pivots().iter().map(|&pc| v[pc]).collect()
    }

    /// A uniformly random subspace of the given dimension.
    pub fn random<R: Rng>(f: &Field, n: usize, dim: usize, rng: &mut R) -> Subspace {
        assert!(dim <= n);
        loop {
            let gens: Matrix = (0..dim)
                .map(|_| (0..n).map(|_| rng.gen_range(0..f.order())).collect())
                .collect();
            let s = Subspace::span(f, n, &gens);
            if s.dim() == dim {
                return s;
            }
        }
    }
}

/// Gaussian binomial coefficient `[n, k]_q`; zero outside `0 ≤ k ≤ n`.
pub fn gaussian_binomial(n: i64, k: i64, q: u64) -> BigUint {
    if k < 0 || n < 0 || k > n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k as u32 {
        num *= q.pow(n as u32) - q.pow(i);
        den *= q.pow(k as u32) - q.pow(i);
    }
    num / den
}

/// Number of subspaces that an enumeration with the given filter would emit.
pub fn subspace_count(q: u32, n: usize, dim: Option<usize>) -> BigUint {
    match dim {
        Some(d) => gaussian_binomial(n as i64, d as i64, q as u64),
        None => (0..=n)
            .map(|d| gaussian_binomial(n as i64, d as i64, q as u64))
            .sum(),
    }
}

fn check_budget(count: &BigUint, budget: u64) -> Result<()> {
    match count.to_u64() {
        Some(c) if c <= budget => Ok(()),
        _ => Err(Error::Budget {
            needed: count.to_string(),
            budget,
        }),
    }
}

/// All subspaces of `F_q^n` (optionally of one dimension), ordered by
/// dimension and then lexicographically by canonical rows.
pub fn enumerate(f: &Field, n: usize, dim: Option<usize>, budget: u64) -> Result<Vec<Subspace>> {
    check_budget(&subspace_count(f.order(), n, dim), budget)?;
    let dims: Vec<usize> = match dim {
        Some(d) if d > n => Vec::new(),
        Some(d) => vec![d],
        None => (0..=n).collect(),
    };
    let mut out = Vec::new();
    for d in dims {
        let mut level = Vec::new();
        enumerate_dim(f, n, d, &mut level);
        level.sort();
        out.extend(level);
    }
    Ok(out)
}

fn enumerate_dim(f: &Field, n: usize, d: usize, out: &mut Vec<Subspace>) {
    let q = f.order();
    let mut pivots: Vec<usize> = (0..d).collect();
    loop {
        // free positions: row i, column c > pivot_i with c not a pivot
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|i| {
                let pv = &pivots;
                (pv[i] + 1..n)
                    .filter(move |c| !pv.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        let mut base: Matrix = vec![vec![0; n]; d];
        for (i, &pc) in pivots.iter().enumerate() {
            base[i][pc] = 1;
        }
        let mut digits = vec![0u32; free.len()];
        loop {
            let mut rows = base.clone();
            for (&(i, c), &v) in free.iter().zip(&digits) {
                rows[i][c] = v;
            }
            out.push(Subspace { q, n, rows });
            let mut k = 0;
            while k < digits.len() {
                digits[k] += 1;
                if digits[k] < q {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == digits.len() {
                break;
            }
        }
        // next combination of pivot columns
        let mut i = d;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if pivots[i] < n - d + i {
                pivots[i] += 1;
                for j in i + 1..d {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All subspaces of `z`, as subspaces of the ambient space, in canonical order.
pub fn enumerate_within(f: &Field, z: &Subspace, dim: Option<usize>, budget: u64) -> Result<Vec<Subspace>> {
    let local = enumerate(f, z.dim(), dim, budget)?;
    let mut out: Vec<Subspace> = local
        .iter()
        .map(|v| v.map_rows(f, z.rows(), z.n()))
        .collect();
    out.sort();
    Ok(out)
}

/// Projective representatives of the 1-dimensional subspaces of `F_q^n`:
/// vectors whose first nonzero entry is 1, in lexicographic order.
pub fn projective_points(q: u32, n: usize) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    for lead in (0..n).rev() {
        let tail = n - lead - 1;
        let count = (q as u64).pow(tail as u32);
        for k in 0..count {
            let mut v = vec![0; n];
            v[lead] = 1;
            let mut t = k;
            for j in (lead + 1..n).rev() {
                v[j] = (t % q as u64) as Elem;
                t /= q as u64;
            }
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Field {
        Field::make(2, 1, None).unwrap()
    }

    #[test]
    fn canonical_form_is_basis_independent() {
        let f = f2();
        let a = Subspace::span(&f, 3, &[vec![1, 1, 0], vec![0, 1, 1]]);
        let b = Subspace::span(&f, 3, &[vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert!(Subspace::span(&f, 3, &[]).is_zero());
        assert_eq!(Subspace::span(&f, 2, &[vec![1, 0], vec![1, 0]]).dim(), 1);
    }

    #[test]
    fn lattice_examples() {
        let f = f2();
        let e1 = Subspace::span(&f, 3, &[vec![1, 0, 0]]);
        let e2 = Subspace::span(&f, 3, &[vec![0, 1, 0]]);
        assert_eq!(e1.sum(&f, &e2), Subspace::span(&f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]));
        let a = Subspace::span(&f, 3, &[vec![1, 1, 0], vec![0, 1, 1]]);
        let b = Subspace::span(&f, 3, &[vec![1, 0, 1]]);
        assert_eq!(a.intersect(&f, &b), b);
        assert_eq!(
            lattice_op(&f, &b, &a, LatticeOp::Contains).unwrap(),
            LatticeValue::Bool(true)
        );
        let other = Subspace::zero(2, 4);
        assert!(lattice_op(&f, &a, &other, LatticeOp::Sum).is_err());
    }

    #[test]
    fn complements() {
        let f = f2();
        let e1 = Subspace::span(&f, 3, &[vec![1, 0, 0]]);
        assert_eq!(e1.perp(&f), Subspace::span(&f, 3, &[vec![0, 1, 0], vec![0, 0, 1]]));
        assert_eq!(Subspace::zero(2, 3).perp(&f), Subspace::full(&f, 3));
        let d = Subspace::span(&f, 2, &[vec![1, 1]]);
        assert_eq!(d.perp(&f), d);
        assert_eq!(e1.direct_complement(&f), e1.perp(&f));
        assert_eq!(Subspace::zero(2, 3).direct_complement(&f), Subspace::full(&f, 3));
        assert_eq!(d.direct_complement(&f), Subspace::span(&f, 2, &[vec![1, 0]]));
    }

    #[test]
    fn enumeration_counts() {
        let f = f2();
        assert_eq!(enumerate(&f, 3, None, DEFAULT_BUDGET).unwrap().len(), 16);
        assert_eq!(enumerate(&f, 4, None, DEFAULT_BUDGET).unwrap().len(), 67);
        assert_eq!(enumerate(&f, 3, Some(1), DEFAULT_BUDGET).unwrap().len(), 7);
        assert!(matches!(enumerate(&f, 4, None, 10), Err(Error::Budget { .. })));
        for (q, e) in [(2u32, 1u32), (3, 1), (4, 2)] {
            let p = if q == 4 { 2 } else { q };
            let f = Field::make(p, if q == 4 { 2 } else { e }, None).unwrap();
            for n in 1..=5 {
                let all = enumerate(&f, n, None, DEFAULT_BUDGET).unwrap();
                let mut sorted = all.clone();
                sorted.dedup();
                assert_eq!(sorted.len(), all.len());
                assert_eq!(BigUint::from(all.len()), subspace_count(q, n, None));
                for w in all.windows(2) {
                    assert!(w[0] < w[1]);
                }
            }
        }
    }

    #[test]
    fn gaussian_binomial_values() {
        assert_eq!(gaussian_binomial(7, 0, 3), BigUint::one());
        assert_eq!(gaussian_binomial(4, 2, 2), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(5, 2, 2), BigUint::from(155u32));
        assert_eq!(gaussian_binomial(3, 4, 2), BigUint::zero());
        assert_eq!(gaussian_binomial(3, -1, 2), BigUint::zero());
        let f = f2();
        assert_eq!(enumerate(&f, 5, Some(2), DEFAULT_BUDGET).unwrap().len(), 155);
    }

    #[test]
    fn projective_points_cover_lines() {
        let f = Field::make(3, 1, None).unwrap();
        let pts = projective_points(3, 3);
        assert_eq!(pts.len(), 13);
        let lines: Vec<Subspace> = pts.iter().map(|v| Subspace::span(&f, 3, &[v.clone()])).collect();
        let mut sorted = lines.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 13);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn random_subspace_has_requested_dimension() {
        let f = Field::make(2, 2, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 0..=4 {
            assert_eq!(Subspace::random(&f, 4, d, &mut rng).dim(), d);
        }
    }
}
