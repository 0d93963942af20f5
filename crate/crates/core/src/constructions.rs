//! Explicit code families: the two bundled examples, additive generalized
//! twisted Gabidulin codes, semifields found by spread-set search, and the
//! codes built from a semifield's line equations.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::code::{Code, Word};
use crate::error::{Error, Result};
use crate::field::{prime_power, Elem, Field};
use crate::linalg::{self, Matrix};
use crate::tower::Tower;

/// Names accepted by [`bundled`].
pub const BUNDLED: [&str; 2] = ["additive-len3", "split-len4"];

/// Basis of the 8-dimensional `F_2`-space of `3 × 4` binary matrices whose
/// image under the coordinate map is the strictly almost affine code in `F_16^3`.
const ADDITIVE_LEN3_BASIS: [[[u32; 4]; 3]; 8] = [
    [[1, 0, 0, 0], [0, 0, 0, 0], [0, 1, 1, 0]],
    [[0, 1, 0, 0], [0, 0, 0, 0], [0, 1, 1, 1]],
    [[0, 0, 1, 0], [0, 0, 0, 0], [1, 0, 0, 1]],
    [[0, 0, 0, 1], [0, 0, 0, 0], [1, 1, 0, 1]],
    [[0, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 0]],
    [[0, 0, 0, 0], [0, 1, 0, 0], [0, 1, 0, 0]],
    [[0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 1, 0]],
    [[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 1]],
];

/// The additive code in `F_16^3` spanned by the images of [`ADDITIVE_LEN3_BASIS`].
pub fn additive_len3() -> Code {
    let t = Arc::new(Tower::make(2, 1, 4, None, None).expect("F_2 ⊆ F_16"));
    let gens: Vec<Word> = ADDITIVE_LEN3_BASIS
        .iter()
        .map(|m| m.iter().map(|row| t.from_coords(row)).collect())
        .collect();
    Code::additive(t, 3, gens, vec![0; 3]).expect("well-formed generators")
}

/// Row space over `F_4` of `[1 α 0 0; 0 0 1 α]`.
pub fn split_len4() -> Code {
    let t = Arc::new(Tower::make(2, 1, 2, None, None).expect("F_2 ⊆ F_4"));
    let a = t.top().generator();
    let g = vec![vec![1, a, 0, 0], vec![0, 0, 1, a]];
    Code::linear_span(t, 4, &g).expect("well-formed generator matrix")
}

pub fn bundled(name: &str) -> Result<Code> {
    match name {
        "additive-len3" => Ok(additive_len3()),
        "split-len4" => Ok(split_len4()),
        other => Err(Error::invalid(format!(
            "unknown example {other:?}; expected one of {BUNDLED:?}"
        ))),
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Parameters of `α_0 x + α_1 x^{q^s} + … + α_{k−1} x^{q^{s(k−1)}} + η α_0^{q_0^h} x^{q^{sk}}`
/// with `q = q_0^u` and coefficients in `F_{q^n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgtgParams {
    pub q0: u32,
    pub u: u32,
    pub n: u32,
    pub k: u32,
    pub s: u32,
    pub h: u32,
    /// Twist, as an element of `F_{q^n}` (the top field of [`agtg_tower`]).
    pub eta: Elem,
}

/// `F_q ⊆ F_{q^n}` used for coefficients and evaluation.
pub fn agtg_tower(q0: u32, u: u32, n: u32) -> Result<Tower> {
    let (p, a) = prime_power(q0)?;
    Tower::make(p, a * u, n, None, None)
}

/// The relative norm of `η` from `F_{q^{sn}}` down to `F_{q_0^s}`, computed as
/// a conjugate product and as a single power, plus the forbidden value
/// `(−1)^{nku}`; all three live in `F_{q^{sn}}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NormCheck {
    pub by_product: Elem,
    pub by_exponent: Elem,
    pub forbidden: Elem,
}

impl NormCheck {
    pub fn holds(&self) -> bool {
        self.by_product == self.by_exponent && self.by_product != self.forbidden
    }
}

pub fn agtg_norm(params: &AgtgParams) -> Result<NormCheck> {
    let (p, a) = prime_power(params.q0)?;
    let small = agtg_tower(params.q0, params.u, params.n)?;
    let big = Tower::make(p, a * params.u * params.n, params.s, None, None)?;
    if big.base().spec() != small.top().spec() {
        return Err(Error::Internal("norm tower does not extend the code field".into()));
    }
    if params.eta >= small.top().order() {
        return Err(Error::invalid("η is not an element of F_{q^n}"));
    }
    let f = big.top();
    let eta = big.embed(params.eta);
    let d = a * params.s;
    let sign = (params.n as u64 * params.k as u64 * params.u as u64) % 2;
    Ok(NormCheck {
        by_product: f.norm(eta, d)?,
        by_exponent: f.norm_by_exponent(eta, d)?,
        forbidden: if sign == 0 { f.one() } else { f.neg(f.one()) },
    })
}

/// Smallest nonzero `η` (by encoding) satisfying the norm condition.
pub fn agtg_smallest_eta(q0: u32, u: u32, n: u32, k: u32, s: u32, h: u32) -> Result<Elem> {
    let order = agtg_tower(q0, u, n)?.top().order();
    for eta in 1..order {
        let c = agtg_norm(&AgtgParams { q0, u, n, k, s, h, eta })?;
        if c.holds() {
            return Ok(eta);
        }
    }
    Err(Error::invalid("no nonzero η satisfies the norm condition"))
}

/// Evaluates each polynomial on the tower's basis Π of `F_{q^n}` over `F_q`,
/// giving an `F_{q_0}`-linear code in `F_{q^n}^n` of size `q^{nk}`.
/// `η = 0` gives a generalized Gabidulin code.
pub fn agtg_make(params: &AgtgParams) -> Result<Code> {
    let AgtgParams { q0, u, n, k, s, h, eta } = *params;
    if u == 0 || n == 0 || k == 0 || s == 0 {
        return Err(Error::invalid("AGTG parameters must be positive"));
    }
    if k >= n {
        return Err(Error::invalid(format!("need k < n, got k={k}, n={n}")));
    }
    if gcd(n, s) != 1 {
        return Err(Error::invalid(format!("need gcd(n, s) = 1, got n={n}, s={s}")));
    }
    let (_, a) = prime_power(q0)?;
    let t = Arc::new(agtg_tower(q0, u, n)?);
    if eta >= t.top().order() {
        return Err(Error::invalid("η is not an element of F_{q^n}"));
    }
    if eta != 0 {
        let check = agtg_norm(params)?;
        if check.by_product != check.by_exponent {
            return Err(Error::Internal("norm computations disagree".into()));
        }
        if !check.holds() {
            return Err(Error::invalid(format!(
                "η = {eta} violates the norm condition N(η) ≠ (−1)^(nku)"
            )));
        }
    }
    let f = t.top();
    let qs = a * u * s; // x ↦ x^{q^s} as a power of the prime Frobenius
    let eval = |coeffs: &[Elem], x: Elem| -> Elem {
        let mut acc = 0;
        let mut xp = x;
        for &c in coeffs {
            acc = f.add(acc, f.mul(c, xp));
            xp = f.frobenius(xp, qs);
        }
        // xp is now x^{q^{sk}}
        let twist = f.mul(eta, f.frobenius(coeffs[0], a * h));
        f.add(acc, f.mul(twist, xp))
    };
    // F_p-basis of F_{q^n}: powers of the generator
    let prime_basis: Vec<Elem> = (0..f.e() as u64).map(|i| f.pow(f.generator(), i)).collect();
    let mut gens = Vec::with_capacity(k as usize * prime_basis.len());
    for slot in 0..k as usize {
        for &b in &prime_basis {
            let mut coeffs = vec![0; k as usize];
            coeffs[slot] = b;
            gens.push(t.pi().iter().map(|&x| eval(&coeffs, x)).collect());
        }
    }
    Code::additive(t, n as usize, gens, vec![0; n as usize])
}

/// Generalized Gabidulin code `{Σ_{i<k} α_i x^{q^{si}}}` evaluated on Π.
pub fn gabidulin(q: u32, n: u32, k: u32, s: u32) -> Result<Code> {
    agtg_make(&AgtgParams {
        q0: q,
        u: 1,
        n,
        k,
        s,
        h: 0,
        eta: 0,
    })
}

/// An `F_q`-bilinear product on `F_q^m` given by structure constants: the
/// matrices `L_{e_i}` with `x ∘ y = (Σ x_i L_{e_i}) y`. Elements are encoded
/// as `Σ c_i q^i`.
#[derive(Clone, Debug)]
pub struct Semifield {
    field: Field,
    m: usize,
    basis_mats: Vec<Matrix>,
    identity: Elem,
    table: Option<Vec<Elem>>,
}

/// Serialized semifield; `left_mult[i]` is `L_{e_i}` in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemifieldSpec {
    pub q: u32,
    pub m: usize,
    pub left_mult: Vec<Vec<Elem>>,
    pub identity: Elem,
    pub proper_witness: Option<[Elem; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemifieldCertificate {
    pub identity: Option<Elem>,
    pub left_invertible: bool,
    pub right_invertible: bool,
    /// First `(x, y, z)` in encoding order with `(x∘y)∘z ≠ x∘(y∘z)`.
    pub proper_witness: Option<[Elem; 3]>,
    pub valid: bool,
    pub proper: bool,
}

const PRODUCT_TABLE_LIMIT: u64 = 1 << 20;

impl Semifield {
    /// Builds the product from `L_{e_i}`; `identity` is only recorded here,
    /// [`Semifield::validate`] checks it.
    pub fn from_parts(q: u32, m: usize, basis_mats: Vec<Matrix>, identity: Elem) -> Result<Self> {
        let (p, a) = prime_power(q)?;
        let field = Field::make(p, a, None)?;
        if m == 0 {
            return Err(Error::invalid("semifield dimension must be positive"));
        }
        if basis_mats.len() != m
            || basis_mats
                .iter()
                .any(|mat| mat.len() != m || mat.iter().any(|r| r.len() != m || r.iter().any(|&c| c >= q)))
        {
            return Err(Error::invalid(format!("expected {m} matrices of size {m}×{m} over F_{q}")));
        }
        let order = (q as u64).checked_pow(m as u32).filter(|&o| o <= u32::MAX as u64);
        let Some(order) = order else {
            return Err(Error::invalid("semifield order does not fit an element encoding"));
        };
        if identity as u64 >= order {
            return Err(Error::invalid("identity is not an element"));
        }
        let mut s = Semifield {
            field,
            m,
            basis_mats,
            identity,
            table: None,
        };
        if order * order <= PRODUCT_TABLE_LIMIT {
            let mut table = Vec::with_capacity((order * order) as usize);
            for x in 0..order as Elem {
                for y in 0..order as Elem {
                    table.push(s.mul_slow(x, y));
                }
            }
            s.table = Some(table);
        }
        Ok(s)
    }

    /// The field `F_{q^m}` as a (non-proper) semifield, via the tower's Π.
    pub fn from_tower(t: &Tower) -> Result<Self> {
        let m = t.m();
        let s_of = |y: Elem| t.coords(y);
        let basis_mats = t
            .pi()
            .iter()
            .map(|&g| {
                // column j of L_g holds the coordinates of g·π_j
                let cols: Matrix = t.pi().iter().map(|&pj| s_of(t.top().mul(g, pj))).collect();
                linalg::transpose(&cols, m)
            })
            .collect();
        let one = t.coords(t.top().one());
        let q = t.q();
        let identity = one.iter().rev().fold(0, |acc, &c| acc * q + c);
        Self::from_parts(q, m, basis_mats, identity)
    }

    pub fn from_spec(spec: &SemifieldSpec) -> Result<Self> {
        let m = spec.m;
        let mats = spec
            .left_mult
            .iter()
            .map(|flat| {
                if flat.len() != m * m {
                    return Err(Error::invalid("left_mult entries must have m² values"));
                }
                Ok(flat.chunks(m).map(|r| r.to_vec()).collect())
            })
            .collect::<Result<Vec<Matrix>>>()?;
        let s = Self::from_parts(spec.q, m, mats, spec.identity)?;
        let cert = s.validate();
        if !cert.valid {
            return Err(Error::invalid("table is not a semifield"));
        }
        if cert.identity != Some(spec.identity) {
            return Err(Error::invalid("recorded identity is not the identity"));
        }
        match spec.proper_witness {
            Some([x, y, z]) => {
                if x.max(y).max(z) >= s.order() || s.mul(s.mul(x, y), z) == s.mul(x, s.mul(y, z)) {
                    return Err(Error::invalid("recorded proper witness associates"));
                }
            }
            None if cert.proper => {
                return Err(Error::invalid("table is proper but no witness is recorded"));
            }
            None => {}
        }
        Ok(s)
    }

    pub fn spec(&self) -> SemifieldSpec {
        SemifieldSpec {
            q: self.q(),
            m: self.m,
            left_mult: self
                .basis_mats
                .iter()
                .map(|mat| mat.iter().flatten().copied().collect())
                .collect(),
            identity: self.identity,
            proper_witness: self.proper_witness(),
        }
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> Elem {
        self.q().pow(self.m as u32)
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    /// The central field `F_q`.
    pub fn scalars(&self) -> &Field {
        &self.field
    }

    pub fn to_vec(&self, x: Elem) -> Vec<Elem> {
        let q = self.q();
        let mut x = x;
        (0..self.m)
            .map(|_| {
                let c = x % q;
                x /= q;
                c
            })
            .collect()
    }

    pub fn from_vec(&self, v: &[Elem]) -> Elem {
        let q = self.q();
        v.iter().rev().fold(0, |acc, &c| acc * q + c)
    }

    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        let f = &self.field;
        let v: Vec<Elem> = self
            .to_vec(x)
            .iter()
            .zip(self.to_vec(y))
            .map(|(&a, b)| f.add(a, b))
            .collect();
        self.from_vec(&v)
    }

    pub fn neg(&self, x: Elem) -> Elem {
        let v: Vec<Elem> = self.to_vec(x).iter().map(|&a| self.field.neg(a)).collect();
        self.from_vec(&v)
    }

    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    /// Central scalar times `x`.
    pub fn scale(&self, c: Elem, x: Elem) -> Elem {
        let v: Vec<Elem> = self.to_vec(x).iter().map(|&a| self.field.mul(c, a)).collect();
        self.from_vec(&v)
    }

    /// `L_x = Σ x_i L_{e_i}`.
    pub fn left_matrix(&self, x: Elem) -> Matrix {
        let f = &self.field;
        let mut out = vec![vec![0; self.m]; self.m];
        for (c, mat) in self.to_vec(x).into_iter().zip(&self.basis_mats) {
            if c == 0 {
                continue;
            }
            for (orow, mrow) in out.iter_mut().zip(mat) {
                for (o, &v) in orow.iter_mut().zip(mrow) {
                    *o = f.add(*o, f.mul(c, v));
                }
            }
        }
        out
    }

    /// `R_y`, the matrix of `x ↦ x ∘ y`.
    pub fn right_matrix(&self, y: Elem) -> Matrix {
        let yv = self.to_vec(y);
        let cols: Matrix = self
            .basis_mats
            .iter()
            .map(|mat| linalg::mat_vec(&self.field, mat, &yv))
            .collect();
        linalg::transpose(&cols, self.m)
    }

    fn mul_slow(&self, x: Elem, y: Elem) -> Elem {
        let v = linalg::mat_vec(&self.field, &self.left_matrix(x), &self.to_vec(y));
        self.from_vec(&v)
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        match &self.table {
            Some(t) => t[x as usize * self.order() as usize + y as usize],
            None => self.mul_slow(x, y),
        }
    }

    /// Two-sided identity, if any.
    pub fn find_identity(&self) -> Option<Elem> {
        (0..self.order()).find(|&e| (0..self.order()).all(|y| self.mul(e, y) == y && self.mul(y, e) == y))
    }

    pub fn proper_witness(&self) -> Option<[Elem; 3]> {
        let n = self.order();
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul(x, y);
                for z in 0..n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    pub fn validate(&self) -> SemifieldCertificate {
        let m = self.m;
        let full = |mat: &Matrix| linalg::rank(&self.field, mat) == m;
        let left_invertible = (1..self.order()).all(|x| full(&self.left_matrix(x)));
        let right_invertible = (1..self.order()).all(|y| full(&self.right_matrix(y)));
        let identity = self.find_identity();
        let valid = left_invertible && right_invertible && identity.is_some();
        let proper_witness = if valid { self.proper_witness() } else { None };
        SemifieldCertificate {
            identity,
            left_invertible,
            right_invertible,
            proper_witness,
            valid,
            proper: proper_witness.is_some(),
        }
    }

    /// Exhaustive scan for `γ, x` with `γ∘(x∘p) ≠ (γ∘x)∘p`.
    pub fn nonassociating_pair(&self, p: Elem) -> Option<(Elem, Elem)> {
        let n = self.order();
        for g in 0..n {
            for x in 0..n {
                if self.mul(g, self.mul(x, p)) != self.mul(self.mul(g, x), p) {
                    return Some((g, x));
                }
            }
        }
        None
    }
}

/// Matrices over `F_q` of size `m × m` encoded as integers, `q^{m²}` of them.
struct MatrixCodec<'a> {
    field: &'a Field,
    m: usize,
}

impl MatrixCodec<'_> {
    fn decode(&self, mut enc: u64) -> Matrix {
        let q = self.field.order() as u64;
        let mut out = vec![vec![0; self.m]; self.m];
        for row in out.iter_mut() {
            for c in row.iter_mut() {
                *c = (enc % q) as Elem;
                enc /= q;
            }
        }
        out
    }

    fn encode(&self, mat: &Matrix) -> u64 {
        let q = self.field.order() as u64;
        mat.iter().flatten().rev().fold(0, |acc, &c| acc * q + c as u64)
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        if self.field.p() == 2 && self.field.e() == 1 {
            return a ^ b;
        }
        let (a, b) = (self.decode(a), self.decode(b));
        let sum: Matrix = a
            .iter()
            .zip(&b)
            .map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| self.field.add(x, y)).collect())
            .collect();
        self.encode(&sum)
    }

    fn scale(&self, c: Elem, a: u64) -> u64 {
        let m: Matrix = self
            .decode(a)
            .into_iter()
            .map(|r| r.into_iter().map(|x| self.field.mul(c, x)).collect())
            .collect();
        self.encode(&m)
    }
}

/// Largest matrix space the spread-set search will walk.
pub const SEARCH_LIMIT: u64 = 1 << 24;

/// Depth-first search for spread sets `{I = M_1, M_2, …, M_m}` (every nonzero
/// `F_q`-combination invertible) with `M_2 < M_3 < …` in encoding order. Each
/// spread set is normalized to a two-sided identity; the first proper
/// semifield in search order is returned, or `None` when the search space
/// is exhausted.
pub fn semifield_search(q: u32, m: usize) -> Result<Option<Semifield>> {
    let (p, a) = prime_power(q)?;
    let field = Field::make(p, a, None)?;
    if m == 0 {
        return Err(Error::invalid("semifield dimension must be positive"));
    }
    let space = (q as u64)
        .checked_pow((m * m) as u32)
        .filter(|&s| s <= SEARCH_LIMIT)
        .ok_or(Error::Budget {
            needed: format!("{q}^{}", m * m),
            budget: SEARCH_LIMIT,
        })?;
    let codec = MatrixCodec { field: &field, m };
    let invertible: Vec<bool> = (0..space)
        .map(|e| linalg::rank(&field, &codec.decode(e)) == m)
        .collect();
    let identity = codec.encode(&linalg::identity(m));
    let nonzero_scalars: Vec<Elem> = (1..q).collect();
    let mut chosen = vec![identity];
    // span of chosen matrices, as encodings
    let mut spans: Vec<Vec<u64>> = vec![std::iter::once(0)
        .chain(nonzero_scalars.iter().map(|&c| codec.scale(c, identity)))
        .collect()];
    let mut result = None;
    search_level(
        &codec,
        &invertible,
        &nonzero_scalars,
        space,
        &mut chosen,
        &mut spans,
        &mut |mats: &[u64]| {
            let s = normalize(&field, q, m, mats.iter().map(|&e| codec.decode(e)).collect());
            match s {
                Ok(s) if s.proper_witness().is_some() => {
                    result = Some(s);
                    true
                }
                _ => false,
            }
        },
    );
    Ok(result)
}

/// Returns `true` once `found` accepts a complete spread set.
fn search_level(
    codec: &MatrixCodec,
    invertible: &[bool],
    scalars: &[Elem],
    space: u64,
    chosen: &mut Vec<u64>,
    spans: &mut Vec<Vec<u64>>,
    found: &mut dyn FnMut(&[u64]) -> bool,
) -> bool {
    if chosen.len() == codec.m {
        return found(chosen);
    }
    let start = if chosen.len() == 1 { 0 } else { chosen[chosen.len() - 1] + 1 };
    let span = spans.last().expect("span of the identity").clone();
    for cand in start..space {
        if !span.iter().all(|&s| invertible[codec.add(cand, s) as usize]) {
            continue;
        }
        let mut next = span.clone();
        for &c in scalars {
            let sc = codec.scale(c, cand);
            next.extend(span.iter().map(|&s| codec.add(sc, s)));
        }
        chosen.push(cand);
        spans.push(next);
        if search_level(codec, invertible, scalars, space, chosen, spans, found) {
            return true;
        }
        chosen.pop();
        spans.pop();
    }
    false
}

/// Turns a spread set containing `I` into a semifield with identity `e_1`:
/// with `L_x = Σ x_i M_i` and `K x = L_x e_1`, the product
/// `x ∘ y = L_{K^{-1} x} y` has `e_1` as a two-sided identity.
fn normalize(field: &Field, q: u32, m: usize, mats: Vec<Matrix>) -> Result<Semifield> {
    // column i of K is M_i e_1
    let k_cols: Matrix = mats.iter().map(|mat| mat.iter().map(|r| r[0]).collect()).collect();
    let k = linalg::transpose(&k_cols, m);
    let t = linalg::inverse(field, &k)?;
    let basis_mats = (0..m)
        .map(|i| {
            let mut out = vec![vec![0; m]; m];
            for (j, mat) in mats.iter().enumerate() {
                let c = t[j][i];
                if c == 0 {
                    continue;
                }
                for (orow, mrow) in out.iter_mut().zip(mat) {
                    for (o, &v) in orow.iter_mut().zip(mrow) {
                        *o = field.add(*o, field.mul(c, v));
                    }
                }
            }
            out
        })
        .collect();
    Semifield::from_parts(q, m, basis_mats, 1)
}

/// The tower `F_q ⊆ F_{q^m}` whose basis Π identifies `S` with `F_{q^m}`.
pub fn semifield_tower(s: &Semifield) -> Result<Tower> {
    let f = s.scalars();
    Tower::make(f.p(), f.e(), s.m() as u32, None, None)
}

/// `F_p`-basis of `S`, as encodings.
fn prime_basis(s: &Semifield) -> Vec<Elem> {
    let f = s.scalars();
    let mut out = Vec::new();
    for i in 0..s.m() {
        for d in 0..f.e() {
            let mut v = vec![0; s.m()];
            v[i] = if d == 0 { f.one() } else { f.pow(f.generator(), d as u64) };
            out.push(s.from_vec(&v));
        }
    }
    out
}

/// `C_S = {(x, (y − x∘a)_{a ∈ S})}` with coordinates `∞, 0, 1, …, q^m − 1`.
pub fn semifield_code_2dim(s: &Semifield) -> Result<Code> {
    if s.proper_witness().is_none() {
        return Err(Error::invalid("semifield code needs a proper semifield"));
    }
    let t = Arc::new(semifield_tower(s)?);
    let emb = |x: Elem| t.from_coords(&s.to_vec(x));
    let word = |x: Elem, y: Elem| -> Word {
        std::iter::once(emb(x))
            .chain((0..s.order()).map(|a| emb(s.sub(y, s.mul(x, a)))))
            .collect()
    };
    let basis = prime_basis(s);
    let gens = basis
        .iter()
        .map(|&b| word(b, 0))
        .chain(basis.iter().map(|&b| word(0, b)))
        .collect();
    Code::additive(t, s.order() as usize + 1, gens, vec![0; s.order() as usize + 1])
}

/// First `p ∈ S^{k−1}` (odometer order, last slot fastest) with a
/// non-associating pair for some slot.
pub fn semifield_witness_point(s: &Semifield, k: usize) -> Option<Vec<Elem>> {
    if k < 2 {
        return None;
    }
    let n = s.order();
    let mut p = vec![0; k - 1];
    loop {
        if p.iter().any(|&pj| s.nonassociating_pair(pj).is_some()) {
            return Some(p);
        }
        let mut i = k - 1;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            p[i] += 1;
            if p[i] < n {
                break;
            }
            p[i] = 0;
        }
    }
}

/// `C_{S,k}(p) = {(x_1, …, x_{k−1}, (y − Σ x_i ∘ (λ p_i))_{λ ∈ F_q})}`.
pub fn semifield_code_kdim(s: &Semifield, k: usize, p: &[Elem]) -> Result<Code> {
    if k < 2 || p.len() != k - 1 {
        return Err(Error::invalid("need k ≥ 2 and a point with k − 1 entries"));
    }
    if p.iter().any(|&pj| pj >= s.order()) {
        return Err(Error::invalid("point entry is not a semifield element"));
    }
    if p.iter().all(|&pj| s.nonassociating_pair(pj).is_none()) {
        return Err(Error::invalid("point admits no γ, x with γ∘(x∘p_j) ≠ (γ∘x)∘p_j"));
    }
    let t = Arc::new(semifield_tower(s)?);
    let emb = |x: Elem| t.from_coords(&s.to_vec(x));
    let q = s.q();
    let n = k - 1 + q as usize;
    let word = |xs: &[Elem], y: Elem| -> Word {
        let mut w: Word = xs.iter().map(|&x| emb(x)).collect();
        for lambda in 0..q {
            let mut v = y;
            for (&x, &pi) in xs.iter().zip(p) {
                v = s.sub(v, s.mul(x, s.scale(lambda, pi)));
            }
            w.push(emb(v));
        }
        w
    };
    let basis = prime_basis(s);
    let mut gens = Vec::new();
    for slot in 0..k {
        for &b in &basis {
            let mut xs = vec![0; k - 1];
            let y = if slot < k - 1 {
                xs[slot] = b;
                0
            } else {
                b
            };
            gens.push(word(&xs, y));
        }
    }
    Code::additive(t, n, gens, vec![0; n])
}
