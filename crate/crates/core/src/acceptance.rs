//! The acceptance suite: thirteen end-to-end checks, each with a pinned time
//! limit. A criterion passes only when its check holds and it finishes in time.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::code::{self, Code};
use crate::constructions::{self, AgtgParams};
use crate::error::{Error, Result};
use crate::field::{self, Elem, Field};
use crate::geometry::{self, Geometry, VerifyOptions};
use crate::invariants::{self, MacWilliamsPath};
use crate::linalg::{self, Matrix};
use crate::ports::{self, Port, SeparationMode};
use crate::qmatroid::{AxiomMode, QMatroid};
use crate::scope::{self, Scope};
use crate::subspace::{self, Subspace, DEFAULT_BUDGET};
use crate::tower::Tower;

const B: u64 = DEFAULT_BUDGET;

/// Criteria known to fail; see [`agtg_instance`].
pub const EXPECTED_FAILURES: [u32; 2] = [9, 11];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    /// Whether the check itself held, regardless of timing.
    pub check: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
    pub limit_secs: u64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {} [{:.2}s, limit {}s] {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.limit_secs,
            self.detail
        )
    }
}

type Check = fn(u64) -> Result<(bool, String)>;

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub limit_secs: u64,
    check: Check,
}

pub const CRITERIA: [Criterion; 13] = [
    Criterion { id: 1, title: "additive length-3 code", limit_secs: 1, check: additive_example },
    Criterion { id: 2, title: "induced q-matroid axioms", limit_secs: 5, check: induced_axioms },
    Criterion { id: 3, title: "puncture/shorten vs restrict/contract", limit_secs: 10, check: minors },
    Criterion { id: 4, title: "weight distribution formula vs brute force", limit_secs: 30, check: weight_formula },
    Criterion { id: 5, title: "MacWilliams consistency", limit_secs: 10, check: macwilliams_paths },
    Criterion { id: 6, title: "MRD bound as non-negativity", limit_secs: 5, check: mrd_bound },
    Criterion { id: 7, title: "port of a disconnected q-matroid", limit_secs: 5, check: port_example },
    Criterion { id: 8, title: "dual circuits vs minimal codewords", limit_secs: 30, check: dual_circuits },
    Criterion { id: 9, title: "AGTG instance", limit_secs: 600, check: agtg_instance },
    Criterion { id: 10, title: "semifield pipeline", limit_secs: 600, check: semifield_pipeline },
    Criterion { id: 11, title: "geometry correspondence", limit_secs: 600, check: geometry_correspondence },
    Criterion { id: 12, title: "generalized weights", limit_secs: 30, check: generalized_weights },
    Criterion { id: 13, title: "property suites", limit_secs: 120, check: property_suites },
];

pub fn run(c: &Criterion, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let outcome = (c.check)(seed);
    let elapsed = start.elapsed();
    let (check, detail) = match outcome {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = elapsed <= Duration::from_secs(c.limit_secs);
    let detail = if check && !in_time {
        format!("{detail}; over the time limit")
    } else {
        detail
    };
    CriterionResult {
        id: c.id,
        title: c.title,
        pass: check && in_time,
        check,
        detail,
        elapsed,
        limit_secs: c.limit_secs,
    }
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| run(c, seed)).collect()
}

pub fn find(id: u32) -> Option<&'static Criterion> {
    CRITERIA.iter().find(|c| c.id == id)
}

/// Collects named sub-checks into one verdict and a compact detail string.
struct Tally {
    ok: bool,
    parts: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { ok: true, parts: Vec::new() }
    }

    fn check(&mut self, cond: bool, what: impl Into<String>) {
        let what = what.into();
        self.ok &= cond;
        self.parts.push(if cond { what } else { format!("NOT {what}") });
    }

    fn note(&mut self, what: impl Into<String>) {
        self.parts.push(what.into());
    }

    fn done(self) -> Result<(bool, String)> {
        Ok((self.ok, self.parts.join("; ")))
    }
}

fn bundled() -> [(&'static str, Code); 2] {
    [
        ("additive-len3", constructions::additive_len3()),
        ("split-len4", constructions::split_len4()),
    ]
}

fn additive_example(seed: u64) -> Result<(bool, String)> {
    let c = constructions::additive_len3();
    let mut t = Tally::new();
    t.check(c.size() == BigUint::from(256u32), format!("|C| = {}", c.size()));
    let aa = c.is_almost_affine(Scope::All, B, seed);
    t.check(
        aa.almost_affine && aa.coverage.exhaustive && aa.coverage.inspected == 16,
        format!("almost affine on {} subspaces", aa.coverage.inspected),
    );
    let lin = c.classify_linearity(B)?;
    t.check(lin.contains_zero, "contains 0");
    t.check(!lin.qm_linear, "not F_16-linear");
    t.done()
}

fn induced_axioms(seed: u64) -> Result<(bool, String)> {
    let mut t = Tally::new();
    for (name, c) in bundled() {
        let m = c.qmatroid(B)?;
        let count = m.subspaces(B)?.len();
        for mode in [AxiomMode::Global, AxiomMode::Local] {
            let v = m.verify_axioms(mode, Scope::All, B, seed)?;
            t.check(
                v.passed && v.coverage.exhaustive,
                format!("{name} {mode:?} over {count} subspaces ({} checks)", v.checks),
            );
        }
    }
    t.done()
}

fn minors(_seed: u64) -> Result<(bool, String)> {
    let mut t = Tally::new();
    for (name, c) in bundled() {
        let f = c.tower().base().clone();
        let m = c.qmatroid(B)?;
        let x = c.default_anchor(B)?;
        let spaces = subspace::enumerate(&f, c.n(), None, B)?;
        let (mut punct, mut short) = (0, 0);
        for z in &spaces {
            if c.puncture(z)?.qmatroid(B)?.same_ranks(&m.restrict(z), B)? {
                punct += 1;
            }
            let comp = z.direct_complement(&f);
            if c.shorten(z, &x, None)?.qmatroid(B)?.same_ranks(&m.contract_along(z, &comp), B)? {
                short += 1;
            }
        }
        let total = spaces.len();
        t.check(punct == total, format!("{name}: puncture = restriction for {punct}/{total} Z"));
        t.check(short == total, format!("{name}: shortening = contraction for {short}/{total} Z"));
    }
    t.done()
}

fn weight_formula(_seed: u64) -> Result<(bool, String)> {
    let mut t = Tally::new();
    for (name, c) in bundled() {
        let m = c.qmatroid(B)?;
        let formula = invariants::weight_distribution_formula(&m, c.tower().m() as u32, B)?;
        let words = c.codewords(B)?;
        let agree = words
            .iter()
            .map(|x| invariants::weight_distribution_bruteforce(&c, x, B))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .filter(|w| w.a == formula.a)
            .count();
        t.check(
            agree == words.len(),
            format!("{name}: A = {} for {agree}/{} anchors", ints(&formula.a), words.len()),
        );
    }
    t.done()
}

fn ints(a: &[BigInt]) -> String {
    let s: Vec<String> = a.iter().map(|x| x.to_string()).collect();
    format!("[{}]", s.join(","))
}

/// Orthogonal dual of a linear code over the top field, from a generator matrix.
pub fn orthogonal_dual(t: Arc<Tower>, n: usize, g: &Matrix) -> Result<Code> {
    let h = linalg::kernel(t.top(), g, n);
    if h.is_empty() {
        return Code::explicit(t, n, vec![vec![0; n]]);
    }
    Code::linear_span(t, n, &h)
}

fn macwilliams_paths(_seed: u64) -> Result<(bool, String)> {
    let mut t = Tally::new();
    for (name, c) in bundled() {
        let m = c.qmatroid(B)?;
        let mdeg = c.tower().m() as u32;
        let a = invariants::weight_distribution_formula(&m, mdeg, B)?.a;
        let solve = invariants::macwilliams(&m, &a, mdeg, MacWilliamsPath::Solve, B)?;
        let formula = invariants::macwilliams(&m, &a, mdeg, MacWilliamsPath::DualFormula, B)?;
        let b: Vec<String> = solve.b.iter().map(|x| x.to_string()).collect();
        t.check(solve.b == formula.b, format!("{name}: B = [{}] on both paths", b.join(",")));
    }
    let c = constructions::split_len4();
    let tw = c.tower().clone();
    let alpha = tw.top().generator();
    let g = vec![vec![1, alpha, 0, 0], vec![0, 0, 1, alpha]];
    let dual = orthogonal_dual(tw, 4, &g)?;
    let bf = invariants::weight_distribution_bruteforce(&dual, &[0; 4], B)?;
    let m = c.qmatroid(B)?;
    let a = invariants::weight_distribution_formula(&m, 2, B)?.a;
    let solve = invariants::macwilliams(&m, &a, 2, MacWilliamsPath::Solve, B)?;
    t.check(
        invariants::matches_integers(&solve, &bf.a),
        format!("split-len4: B = brute-force A of the orthogonal dual {}", ints(&bf.a)),
    );
    t.done()
}

fn mrd_bound(_seed: u64) -> Result<(bool, String)> {
    let f = Arc::new(Field::make(2, 1, None)?);
    let u = QMatroid::uniform(f, 4, 2)?;
    let mut t = Tally::new();
    for mdeg in 1..=4u32 {
        let r = invariants::invariants_report(&u, mdeg, B)?;
        let a_neg = r.a.iter().any(|x| x < &BigInt::from(0));
        let b_neg = r.b.iter().any(|x| x < &num_rational::BigRational::from_integer(0.into()));
        if mdeg < 4 {
            t.check(a_neg || b_neg, format!("m={mdeg}: negative coefficient, A = {}", ints(&r.a)));
        } else {
            t.check(r.nonneg, format!("m={mdeg}: A = {} and B non-negative", ints(&r.a)));
        }
    }
    t.done()
}

/// The port on the split length-4 code with dealer `⟨(1,0,1,0)⟩`.
pub fn example_port() -> Result<Port> {
    let m = constructions::split_len4().qmatroid(B)?;
    let f = m.field().clone();
    let p0 = Subspace::span(&f, 4, &[vec![1, 0, 1, 0]]);
    let p = Subspace::span(&f, 4, &[vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
    Port::new(m, p0, p)
}

fn port_example(_seed: u64) -> Result<(bool, String)> {
    let port = example_port()?;
    let m = port.qmatroid();
    let f = m.field().clone();
    let span = |rows: &[[u32; 4]]| {
        let rows: Vec<Vec<Elem>> = rows.iter().map(|r| r.to_vec()).collect();
        Subspace::span(&f, 4, &rows)
    };
    let expected: BTreeSet<Subspace> = [
        span(&[[0, 1, 0, 1]]),
        span(&[[0, 1, 0, 0], [0, 0, 1, 0]]),
        span(&[[0, 1, 1, 0], [0, 0, 0, 1]]),
        span(&[[0, 1, 0, 0], [0, 0, 1, 1]]),
    ]
    .into_iter()
    .collect();
    let got: BTreeSet<Subspace> = port.gamma_min(B)?.into_iter().collect();
    let mut t = Tally::new();
    t.check(got == expected, format!("Γ_min has the {} listed spaces", got.len()));
    let pr = port.predicates(B)?;
    t.check(pr.perfect, "perfect");
    t.check(pr.ideal, "ideal");
    t.check(pr.connected, "connected");
    let a = span(&[[1, 0, 0, 0], [0, 1, 0, 0]]);
    let b = span(&[[0, 0, 1, 0], [0, 0, 0, 1]]);
    let seps = ports::vertical_separations(m, 1, SeparationMode::Exhaustive, B)?;
    let found = seps.separations.iter().any(|s| {
        (&s.a == a.rows() && &s.b == b.rows()) || (&s.a == b.rows() && &s.b == a.rows())
    });
    t.check(found, "vertical 1-separation (⟨e1,e2⟩, ⟨e3,e4⟩)");
    t.done()
}

fn dual_circuits(_seed: u64) -> Result<(bool, String)> {
    let c = constructions::additive_len3();
    let m = c.qmatroid(B)?;
    let circuits: BTreeSet<Subspace> = m.dual().circuits(None, B)?.into_iter().collect();
    let words = c.codewords(B)?;
    let mut t = Tally::new();
    for x in [&words[0], &words[words.len() / 2 + 1]] {
        let supports: BTreeSet<Subspace> = invariants::minimal_codewords(&c, x, B)?
            .into_iter()
            .map(|(_, s)| s)
            .collect();
        t.check(
            supports == circuits,
            format!("anchor {x:?}: {} minimal supports vs {} dual circuits", supports.len(), circuits.len()),
        );
    }
    t.done()
}

/// `(q0, u, n, k, s, h) = (2, 2, 5, 2, 2, 1)`.
pub const AGTG: (u32, u32, u32, u32, u32, u32) = (2, 2, 5, 2, 2, 1);

/// Smaller twisted code used to exercise the same pipeline when the main
/// instance fails: `(3, 2, 3, 2, 1, 1)`.
pub const AGTG_SUBSTITUTE: (u32, u32, u32, u32, u32, u32) = (3, 2, 3, 2, 1, 1);

pub fn agtg_code(p: (u32, u32, u32, u32, u32, u32)) -> Result<(AgtgParams, Code)> {
    let (q0, u, n, k, s, h) = p;
    let eta = constructions::agtg_smallest_eta(q0, u, n, k, s, h)?;
    let params = AgtgParams { q0, u, n, k, s, h, eta };
    Ok((params, constructions::agtg_make(&params)?))
}

/// The instance is expected to fail: every valid η gives minimum distance 3
/// and a code that is not almost affine.
fn agtg_instance(_seed: u64) -> Result<(bool, String)> {
    let (params, c) = agtg_code(AGTG)?;
    let mut t = Tally::new();
    t.note(format!("η = {}", params.eta));
    let (q0, u, n, k) = (params.q0, params.u, params.n, params.k);
    let q = BigUint::from(q0).pow(u);
    t.check(c.size() == q.pow(n * k), format!("|C| = {}", c.size()));
    let lin = c.classify_linearity(B)?;
    t.check(lin.p_linear, format!("F_{q0}-linear"));
    t.check(!lin.qm_linear, format!("not F_{{{}^{n}}}-linear", q));
    let d = c.min_distance(B)?;
    t.check(d >= 3, "no nonzero difference of rank 1 or 2");
    t.check(d as u32 == n - k + 1, format!("minimum rank distance {d} (MRD needs {})", n - k + 1));
    let f = c.tower().base();
    let spaces = subspace::enumerate(f, n as usize, None, B)?;
    let bad = spaces.iter().filter(|v| c.rank_of(v).is_err()).count();
    t.check(
        bad == 0,
        format!("almost affine over all {} subspaces ({bad} non-integral projections)", spaces.len()),
    );
    t.done()
}

fn semifield_pipeline(seed: u64) -> Result<(bool, String)> {
    let mut t = Tally::new();
    let s = constructions::semifield_search(2, 4)?
        .ok_or_else(|| Error::Internal("no proper semifield of order 16 found".into()))?;
    let cert = s.validate();
    t.check(cert.valid && cert.proper, "semifield valid and proper");
    let cs = constructions::semifield_code_2dim(&s)?;
    t.check(cs.n() == 17, format!("C_S: n = {}", cs.n()));
    t.check(cs.integral_dimension() == Some(2), "dim 2");
    t.check(cs.min_distance(B)? == 1, "d = 1");
    let lin = cs.classify_linearity(B)?;
    t.check(lin.p_linear && !lin.qm_linear, "F_2-linear, not F_16-linear");
    let f = cs.tower().base();
    let lines = cs.is_almost_affine(Scope::UpToDim(1), B, seed);
    t.check(
        lines.almost_affine && lines.coverage.exhaustive,
        format!("almost affine on all {} subspaces of dim ≤ 1", lines.coverage.inspected),
    );
    let sample = scope::sample_subspaces(f, 17, 10_000, 2..=17, seed);
    let cov = scope::Coverage {
        requested: "sample=10000".into(),
        exhaustive: false,
        sample_size: Some(10_000),
        inspected: 10_000,
    };
    let higher = cs.check_almost_affine_on(&sample, cov);
    t.check(higher.almost_affine, "almost affine on 10^4 sampled subspaces of dim 2..17");

    let p = constructions::semifield_witness_point(&s, 3)
        .ok_or_else(|| Error::Internal("no witness point for k = 3".into()))?;
    let c3 = constructions::semifield_code_kdim(&s, 3, &p)?;
    t.note(format!("C_S,3(p) with p = {p:?}"));
    t.check(c3.n() == 4, format!("n = {}", c3.n()));
    t.check(c3.integral_dimension() == Some(3), "dim 3");
    t.check(c3.min_distance(B)? == 1, "d = 1");
    let aa = c3.is_almost_affine(Scope::All, B, seed);
    t.check(
        aa.almost_affine && aa.coverage.exhaustive && aa.coverage.inspected == 67,
        format!("almost affine on {} subspaces", aa.coverage.inspected),
    );
    let m = c3.qmatroid(B)?;
    t.check(m.loops(B)?.is_empty(), "loopless");
    t.check(!m.is_simple(B)?, "not simple");
    t.done()
}

fn random_basis(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let m: Matrix = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..f.order())).collect())
            .collect();
        if linalg::rank(f, &m) == n {
            return m;
        }
    }
}

/// Builds the geometry, verifies it and round-trips it through coordinates.
fn geometry_pipeline(c: &Code, seed: u64, t: &mut Tally, label: &str) -> Result<()> {
    let g = match Geometry::from_code(c, B) {
        Ok(g) => g,
        Err(e) => {
            t.check(false, format!("{label}: geometry built ({e})"));
            return Ok(());
        }
    };
    let opts = VerifyOptions { seed, ..VerifyOptions::default() };
    let v = geometry::verify(&g, &opts)?;
    t.check(v.holds(), format!("{label}: Properties 1-4 on {} points", g.len()));
    let n = c.n();
    let words: BTreeSet<Vec<Elem>> = c.codewords(B)?.into_iter().collect();
    let back: BTreeSet<Vec<Elem>> = geometry::code_from_geometry(&g, &linalg::identity(n))?
        .codewords(B)?
        .into_iter()
        .collect();
    t.check(back == words, format!("{label}: standard basis recovers C"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = random_basis(c.tower().base(), n, &mut rng);
    let moved: BTreeSet<Vec<Elem>> = geometry::code_from_geometry(&g, &basis)?
        .codewords(B)?
        .into_iter()
        .collect();
    let expected: BTreeSet<Vec<Elem>> = c
        .apply_equivalence(&basis, &vec![0; n])?
        .codewords(B)?
        .into_iter()
        .collect();
    t.check(moved == expected, format!("{label}: random basis gives the equivalent code"));
    Ok(())
}

fn geometry_correspondence(seed: u64) -> Result<(bool, String)> {
    let (_, c) = agtg_code(AGTG)?;
    let mut t = Tally::new();
    geometry_pipeline(&c, seed, &mut t, "AGTG")?;
    let ok = t.ok;
    if !ok {
        let (params, sub) = agtg_code(AGTG_SUBSTITUTE)?;
        let mut s = Tally::new();
        geometry_pipeline(&sub, seed, &mut s, &format!("substitute q0=3 u=2 n=3 k=2 s=1 h=1 η={}", params.eta))?;
        t.note(format!("[not counted] {}", s.parts.join("; ")));
    }
    Ok((ok, t.parts.join("; ")))
}

fn generalized_weights(_seed: u64) -> Result<(bool, String)> {
    let mut t = Tally::new();
    for (name, c) in bundled() {
        let m = c.qmatroid(B)?;
        let gw = invariants::generalized_weights_checked(&m, Some(&c), B)?;
        let x = c.default_anchor(B)?;
        let by_sub = invariants::generalized_weights_by_subcodes(&c, &x, B)?;
        t.check(
            by_sub == gw.d,
            format!("{name}: d = {:?} on {} paths and by subcode supports", gw.d, gw.paths.len()),
        );
    }
    let f = Arc::new(Field::make(2, 1, None)?);
    let mut uniform = 0;
    for n in 1..=5usize {
        for k in 1..=n {
            let u = QMatroid::uniform(f.clone(), n, k)?;
            let d = invariants::generalized_weights_checked(&u, None, B)?.d;
            let want: Vec<usize> = (1..=k).map(|i| n - k + i).collect();
            if d != want {
                t.check(false, format!("U({n},{k}) d = {d:?}"));
            }
            uniform += 1;
        }
    }
    t.note(format!("{uniform} uniform tables give d_i = n − k + i"));
    t.done()
}

fn property_suites(seed: u64) -> Result<(bool, String)> {
    let mut t = Tally::new();
    let (ok, msg) = inversion_suite(seed);
    t.check(ok, msg);
    let (ok, msg) = field_suite(4096)?;
    t.check(ok, msg);
    let (ok, msg) = kernel_suite(seed, 10_000)?;
    t.check(ok, msg);
    let (ok, msg) = vamos_suite(seed, 10_000)?;
    t.check(ok, msg);
    t.done()
}

/// Forward system followed by inversion on random integer sequences.
pub fn inversion_suite(seed: u64) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut good = 0;
    for _ in 0..100 {
        let n = rng.gen_range(0..8usize);
        let q = [2u64, 3, 4, 5, 7, 8, 9][rng.gen_range(0..7)];
        let a: Vec<BigInt> = (0..=n).map(|_| BigInt::from(rng.gen_range(-1000i64..=1000))).collect();
        let back = invariants::qbinomial_inversion(&invariants::forward_system(&a, q), q);
        if back == a {
            good += 1;
        }
    }
    (good == 100, format!("inversion roundtrip {good}/100"))
}

fn primes_upto(n: u32) -> Vec<u32> {
    let mut sieve = vec![true; n as usize + 1];
    let mut out = Vec::new();
    for i in 2..=n as usize {
        if sieve[i] {
            out.push(i as u32);
            for j in (i * i..=n as usize).step_by(i) {
                sieve[j] = false;
            }
        }
    }
    out
}

/// Compares `add` and `mul` on every pair with the arithmetic of
/// `F_p[x]/(f)` computed independently, then checks every nonzero element
/// has an inverse. Together these certify the field axioms for all triples.
pub fn field_certificate(f: &Field) -> std::result::Result<u64, String> {
    let p = f.p();
    let e = f.e() as usize;
    let q = f.order();
    let modulus = f.spec().modulus.clone();
    if modulus.len() != e + 1 || modulus[e] != 1 {
        return Err(format!("F_{q}: modulus {modulus:?} is not monic of degree {e}"));
    }
    let mut pairs = 0u64;
    if e == 1 {
        for a in 0..p {
            let (mut sum, mut prod) = (a, 0u32);
            for b in 0..p {
                if f.add(a, b) != sum || f.mul(a, b) != prod {
                    return Err(format!("F_{p}: mismatch at ({a}, {b})"));
                }
                sum += 1;
                if sum == p {
                    sum = 0;
                }
                prod += a;
                if prod >= p {
                    prod -= p;
                }
            }
            pairs += p as u64;
        }
    } else if p == 2 {
        let red: u32 = modulus.iter().enumerate().map(|(i, &c)| c << i).sum();
        let clmul = |a: u32, b: u32| -> u32 {
            let mut acc = 0u32;
            let mut x = a;
            for i in 0..e {
                if (b >> i) & 1 == 1 {
                    acc ^= x;
                }
                x <<= 1;
                if (x >> e) & 1 == 1 {
                    x ^= red;
                }
            }
            acc
        };
        for a in 0..q {
            for b in 0..q {
                if f.add(a, b) != a ^ b || f.mul(a, b) != clmul(a, b) {
                    return Err(format!("F_{q}: mismatch at ({a}, {b})"));
                }
            }
            pairs += q as u64;
        }
    } else {
        let digits: Vec<Vec<u32>> = (0..q)
            .map(|a| {
                let mut v = Vec::with_capacity(e);
                let mut r = a;
                for _ in 0..e {
                    v.push(r % p);
                    r /= p;
                }
                v
            })
            .collect();
        let encode = |v: &[u32]| v.iter().rev().fold(0u32, |acc, &d| acc * p + d);
        // x · v reduced by the monic modulus
        let shift = |v: &[u32]| -> Vec<u32> {
            let top = v[e - 1];
            let mut out = vec![0u32; e];
            for i in (1..e).rev() {
                out[i] = v[i - 1];
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o = (*o + (p - (top * modulus[i]) % p)) % p;
            }
            out
        };
        for a in 0..q {
            // table[j][d] = d · x^j · a
            let mut xa = digits[a as usize].clone();
            let mut table = vec![vec![vec![0u32; e]; p as usize]; e];
            for row in table.iter_mut() {
                for d in 1..p as usize {
                    for i in 0..e {
                        row[d][i] = (row[d - 1][i] + xa[i]) % p;
                    }
                }
                xa = shift(&xa);
            }
            let da = &digits[a as usize];
            for b in 0..q {
                let db = &digits[b as usize];
                let sum: Vec<u32> = da.iter().zip(db).map(|(&x, &y)| (x + y) % p).collect();
                let mut prod = vec![0u32; e];
                for (j, &bj) in db.iter().enumerate() {
                    for (pi, &ti) in prod.iter_mut().zip(&table[j][bj as usize]) {
                        *pi = (*pi + ti) % p;
                    }
                }
                if f.add(a, b) != encode(&sum) || f.mul(a, b) != encode(&prod) {
                    return Err(format!("F_{q}: mismatch at ({a}, {b})"));
                }
            }
            pairs += q as u64;
        }
    }
    for a in 1..q {
        let inv = f.inv(a).map_err(|err| format!("F_{q}: {err}"))?;
        if f.mul(a, inv) != 1 || f.add(a, f.neg(a)) != 0 {
            return Err(format!("F_{q}: inverse failure at {a}"));
        }
    }
    Ok(pairs)
}

/// [`field_certificate`] for every field of order at most `max_order`.
pub fn field_suite(max_order: u32) -> Result<(bool, String)> {
    let mut fields = 0;
    let mut pairs = 0u64;
    for p in primes_upto(max_order) {
        let mut e = 1;
        while (p as u64).pow(e) <= max_order as u64 {
            let f = Field::make(p, e, None)?;
            if !field::is_irreducible(p, &f.spec().modulus) {
                return Ok((false, format!("F_{p}^{e}: modulus reducible")));
            }
            match field_certificate(&f) {
                Ok(n) => pairs += n,
                Err(msg) => return Ok((false, msg)),
            }
            fields += 1;
            e += 1;
        }
    }
    Ok((true, format!("field axioms on {fields} fields of order ≤ {max_order} ({pairs} pairs)")))
}

/// `G_V v = 0`, `supp(v) ≤ V^⊥` and `v ∈ V^⊥ ⊗ F_{q^m}` agree on random
/// `(v, V)`; half the vectors are drawn from `V^⊥ ⊗ F_{q^m}`.
pub fn kernel_suite(seed: u64, count: u64) -> Result<(bool, String)> {
    let towers = [
        (Arc::new(Tower::make(2, 1, 4, None, None)?), 4usize),
        (Arc::new(Tower::make(3, 1, 2, None, None)?), 3),
        (Arc::new(Tower::make(2, 2, 2, None, None)?), 3),
        (Arc::new(Tower::make(2, 1, 3, None, None)?), 5),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut agree, mut inside) = (0u64, 0u64);
    for i in 0..count {
        let (t, n) = &towers[i as usize % towers.len()];
        let f = t.base();
        let top = t.top();
        let dim = rng.gen_range(0..=*n);
        let v_space = Subspace::random(f, *n, dim, &mut rng);
        let v: Vec<Elem> = if rng.gen_bool(0.5) {
            let perp = v_space.perp(f);
            let mut acc = vec![0; *n];
            for row in perp.rows() {
                let lambda = rng.gen_range(0..top.order());
                let scaled: Vec<Elem> = row.iter().map(|&a| top.mul(lambda, t.embed(a))).collect();
                acc = code::vadd(t, &acc, &scaled);
            }
            acc
        } else {
            (0..*n).map(|_| rng.gen_range(0..top.order())).collect()
        };
        let r = code::kernel_conditions(t, &v, &v_space);
        if r[0] == r[1] && r[1] == r[2] {
            agree += 1;
        }
        if r[0] {
            inside += 1;
        }
    }
    Ok((
        agree == count,
        format!("kernel conditions agree on {agree}/{count} pairs ({inside} in the kernel)"),
    ))
}

/// The Vámos oracle against an independent membership test: a space is one
/// of the five designated spans when it has dimension 4 and contains the four
/// listed unit vectors.
pub fn vamos_suite(seed: u64, count: u64) -> Result<(bool, String)> {
    const Y: [[usize; 4]; 5] = [[1, 2, 3, 4], [1, 4, 5, 6], [2, 3, 5, 6], [1, 4, 7, 8], [2, 3, 7, 8]];
    let f = Field::make(2, 1, None)?;
    let m = QMatroid::vamos(Arc::new(f.clone()));
    let expected = |v: &Subspace| -> u32 {
        let designated = v.dim() == 4
            && Y.iter().any(|ys| ys.iter().all(|&i| v.contains_vector(&f, &Subspace::unit(8, i - 1))));
        if designated { 3 } else { (v.dim() as u32).min(4) }
    };
    let mut spaces = scope::sample_subspaces(&f, 8, count, 0..=8, seed);
    // every coordinate 4-span, so the designated ones are certainly hit
    let mut coord = 0;
    for mask in 0u32..256 {
        if mask.count_ones() == 4 {
            let gens: Vec<Vec<Elem>> = (0..8).filter(|i| mask >> i & 1 == 1).map(|i| Subspace::unit(8, i)).collect();
            spaces.push(Subspace::span(&f, 8, &gens));
            coord += 1;
        }
    }
    let mut threes = HashSet::new();
    let mut good = 0u64;
    for v in &spaces {
        let r = m.rank(v);
        if r == expected(v) {
            good += 1;
        }
        if r == 3 && v.dim() == 4 {
            threes.insert(v.clone());
        }
    }
    let total = spaces.len() as u64;
    Ok((
        good == total && threes.len() == 5,
        format!(
            "Vámos oracle on {count} random + {coord} coordinate subspaces: {good}/{total} agree, {} spans of rank 3",
            threes.len()
        ),
    ))
}

/// Renders the full report.
pub fn render(results: &[CriterionResult]) -> String {
    let mut out = String::new();
    for r in results {
        let _ = writeln!(out, "{}", r.line());
    }
    let failed: Vec<u32> = results.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    let _ = writeln!(out, "{} of {} criteria pass; failing: {failed:?}", results.len() - failed.len(), results.len());
    out
}
