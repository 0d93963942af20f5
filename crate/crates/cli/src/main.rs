use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use qrank::acceptance;
use qrank::code::CodeSpec;
use qrank::constructions::{self, AgtgParams, Semifield, SemifieldSpec};
use qrank::geometry::{self, Geometry, GeometrySpec, VerifyOptions};
use qrank::invariants::{self, MacWilliamsPath};
use qrank::linalg::{self, Matrix};
use qrank::ports::{self, Port, SeparationMode, EXHAUSTIVE_MAX_N, EXHAUSTIVE_MAX_Q};
use qrank::qmatroid::{AxiomMode, RankTable};
use qrank::subspace::DEFAULT_BUDGET;
use qrank::{Code, Elem, Error, Field, QMatroid, Scope, Subspace};

const EXIT_USAGE: u8 = 2;
const EXIT_DATA: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_VERDICT: u8 = 5;

#[derive(Parser)]
#[command(name = "qrank", version, about = "Almost affine rank-metric codes and their q-matroids")]
struct Cli {
    /// Subspaces to inspect: all, dims=D or sample=N.
    #[arg(long, global = true, default_value = "all")]
    scope: Scope,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Maximum number of subspaces or codewords to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Check Property 2 on every ordered basis.
    #[arg(long, global = true)]
    all_bases: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a code file.
    Code {
        #[arg(value_enum)]
        action: CodeAction,
        file: PathBuf,
        /// Subspace for puncture/shorten, e.g. "1,0,0;0,1,0" or a JSON file.
        #[arg(long)]
        z: Option<String>,
        /// Anchor codeword for shorten, e.g. "0,3,7".
        #[arg(long)]
        x: Option<String>,
    },
    /// Rank table, axioms, dual or simplicity of a q-matroid.
    Qmatroid {
        #[arg(value_enum)]
        action: QmAction,
        /// Code file, rank-table file, uniform:Q:N:K or vamos:Q.
        source: String,
        #[arg(long, value_enum, default_value = "global")]
        mode: Mode,
    },
    /// Weight distribution from the q-matroid, checked against brute force.
    Weights {
        source: String,
        /// Extension degree, required when the source is not a code.
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        anchor: Option<String>,
    },
    /// Dual distance distribution by both MacWilliams paths.
    DualWeights {
        source: String,
        #[arg(long)]
        m: Option<u32>,
    },
    /// Generalized weights along every characterization.
    GenWeights { source: String },
    /// Circuits of the q-matroid or its dual.
    Circuits {
        source: String,
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        max_dim: Option<usize>,
        /// Compare dual circuits with supports of minimal codewords.
        #[arg(long)]
        compare_minimal: bool,
    },
    /// Access structure of a q-matroid port.
    Port {
        #[arg(long)]
        code: String,
        #[arg(long)]
        p0: String,
        #[arg(long)]
        p: String,
    },
    /// Vertical separations and connectivity.
    Connectivity {
        #[arg(long)]
        code: String,
        #[arg(long)]
        t: Option<u32>,
        /// Random complementary pairs when exhaustive search is out of range.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Build a code or semifield.
    Construct {
        /// Write the bare code or semifield JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(subcommand)]
        what: Construct,
    },
    /// Partial affine geometry of a code.
    Geometry {
        #[arg(value_enum)]
        action: GeoAction,
        file: PathBuf,
    },
    /// Run the acceptance suite.
    VerifyPaper {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CodeAction {
    Info,
    CheckAa,
    Qmatroid,
    Puncture,
    Shorten,
    Mindist,
}

#[derive(Clone, Copy, ValueEnum)]
enum QmAction {
    Table,
    Axioms,
    Dual,
    Simple,
    Flats,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Global,
    Local,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeoAction {
    Build,
    Verify,
    Roundtrip,
}

#[derive(Subcommand)]
enum Construct {
    /// Twisted Gabidulin-type additive code over F_{q0^u}.
    Agtg(AgtgArgs),
    /// Generalized Gabidulin code with m = n.
    Gabidulin {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
    /// First proper semifield of order q^m found by spread-set search.
    SemifieldSearch {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: usize,
    },
    /// Code C_S (k = 2) or C_{S,k}(p) from a semifield file.
    SemifieldCode {
        /// Semifield JSON file.
        semifield: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Point p for k > 2, e.g. "0,2"; defaults to the first witness point.
        #[arg(long)]
        point: Option<String>,
    },
    /// Bundled code: additive-len3 or split-len4.
    Example { name: String },
}

#[derive(Args)]
struct AgtgArgs {
    #[arg(long)]
    q0: u32,
    #[arg(long)]
    u: u32,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    s: u32,
    #[arg(long)]
    h: u32,
    /// Twist; defaults to the smallest valid nonzero value.
    #[arg(long)]
    eta: Option<Elem>,
}

/// Failure with its exit status.
struct Fail {
    code: u8,
    msg: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget { .. } => EXIT_BUDGET,
            Error::Internal(_) => 1,
            _ => EXIT_DATA,
        };
        Fail { code, msg: e.to_string() }
    }
}

fn data_err(msg: impl Into<String>) -> Fail {
    Fail { code: EXIT_DATA, msg: msg.into() }
}

type Res<T> = std::result::Result<T, Fail>;

struct Report {
    tower: Option<Value>,
    coverage: Vec<Value>,
    result: Value,
    verdicts: Map<String, Value>,
}

impl Report {
    fn new(result: Value) -> Self {
        Report { tower: None, coverage: Vec::new(), result, verdicts: Map::new() }
    }

    fn tower_of(mut self, c: &Code) -> Self {
        self.tower = Some(json!(c.tower().spec()));
        self
    }

    fn verdict(mut self, name: &str, ok: bool) -> Self {
        self.verdicts.insert(name.into(), Value::Bool(ok));
        self
    }

    fn coverage(mut self, c: Value) -> Self {
        self.coverage.push(c);
        self
    }

    fn passed(&self) -> bool {
        self.verdicts.values().all(|v| v.as_bool() != Some(false))
    }
}

fn read(path: &Path) -> Res<String> {
    let s = std::fs::read_to_string(path).map_err(|e| data_err(format!("{}: {e}", path.display())))?;
    if s.trim().is_empty() {
        return Err(data_err(format!("{}: empty file", path.display())));
    }
    Ok(s)
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Res<T> {
    serde_json::from_str(&read(path)?).map_err(|e| data_err(format!("{}: {e}", path.display())))
}

fn load_code(path: &Path) -> Res<Code> {
    let spec: CodeSpec = parse_json(path)?;
    Ok(Code::from_spec(&spec)?)
}

fn field_of_order(q: u32) -> Res<Arc<Field>> {
    let (p, e) = qrank::field::prime_power(q)?;
    Ok(Arc::new(Field::make(p, e, None)?))
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Res<T> {
    s.trim().parse().map_err(|_| data_err(format!("bad {what}: {s:?}")))
}

enum Source {
    Code(Code),
    Matroid(QMatroid),
}

impl Source {
    fn qmatroid(&self, budget: u64) -> Res<QMatroid> {
        match self {
            Source::Code(c) => Ok(c.qmatroid(budget)?),
            Source::Matroid(m) => Ok(m.clone()),
        }
    }

    fn code(&self) -> Option<&Code> {
        match self {
            Source::Code(c) => Some(c),
            Source::Matroid(_) => None,
        }
    }
}

fn load_source(s: &str) -> Res<Source> {
    if let Some(rest) = s.strip_prefix("uniform:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(data_err("expected uniform:Q:N:K"));
        }
        let f = field_of_order(parse_num(parts[0], "q")?)?;
        let n: usize = parse_num(parts[1], "n")?;
        let k: usize = parse_num(parts[2], "k")?;
        return Ok(Source::Matroid(QMatroid::uniform(f, n, k)?));
    }
    if let Some(rest) = s.strip_prefix("vamos:") {
        let f = field_of_order(parse_num(rest, "q")?)?;
        return Ok(Source::Matroid(QMatroid::vamos(f)));
    }
    let path = Path::new(s);
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| data_err(format!("{s}: {e}")))?;
    if v.get("entries").is_some() {
        let table: RankTable = serde_json::from_value(v).map_err(|e| data_err(format!("{s}: {e}")))?;
        let f = field_of_order(table.q)?;
        return Ok(Source::Matroid(QMatroid::from_table(f, &table)?));
    }
    let spec: CodeSpec = serde_json::from_value(v).map_err(|e| data_err(format!("{s}: {e}")))?;
    Ok(Source::Code(Code::from_spec(&spec)?))
}

fn parse_word(s: &str) -> Res<Vec<Elem>> {
    s.split(',').map(|x| parse_num(x, "entry")).collect()
}

/// Inline rows `a,b,c;d,e,f` or a subspace JSON file.
fn parse_subspace(s: &str, f: &Field, n: usize) -> Res<Subspace> {
    let path = Path::new(s);
    if path.exists() {
        let v: Subspace = parse_json(path)?;
        if v.q() != f.order() || v.n() != n {
            return Err(data_err(format!("{s}: subspace lives in another space")));
        }
        return Ok(v);
    }
    let rows: Matrix = if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(';').map(parse_word).collect::<Res<_>>()?
    };
    Ok(Subspace::from_rows(f, n, &rows)?)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn rows(v: &Subspace) -> Value {
    json!(v.rows())
}

fn run(cli: &Cli) -> Res<Report> {
    let budget = cli.budget;
    let seed = cli.seed;
    match &cli.command {
        Command::Code { action, file, z, x } => {
            let c = load_code(file)?;
            let f = c.tower().base().clone();
            let need_z = || -> Res<Subspace> {
                let z = z.as_deref().ok_or_else(|| Fail { code: EXIT_USAGE, msg: "--z is required".into() })?;
                parse_subspace(z, &f, c.n())
            };
            let r = match action {
                CodeAction::Info => {
                    let lin = c.classify_linearity(budget)?;
                    Report::new(json!({
                        "n": c.n(),
                        "storage": c.spec().storage,
                        "size": c.size().to_string(),
                        "dimension": c.dimension().map(|d| d.to_string()),
                        "linearity": to_value(&lin),
                    }))
                }
                CodeAction::CheckAa => {
                    let v = c.is_almost_affine(cli.scope, budget, seed);
                    let ok = v.almost_affine;
                    Report::new(to_value(&v))
                        .coverage(to_value(&v.coverage))
                        .verdict("almost_affine", ok)
                }
                CodeAction::Qmatroid => Report::new(to_value(&c.qmatroid(budget)?.table(budget)?)),
                CodeAction::Puncture => Report::new(to_value(&c.puncture(&need_z()?)?.spec())),
                CodeAction::Shorten => {
                    let z = need_z()?;
                    let x = match x {
                        Some(x) => parse_word(x)?,
                        None => c.default_anchor(budget)?,
                    };
                    Report::new(to_value(&c.shorten(&z, &x, None)?.spec()))
                }
                CodeAction::Mindist => Report::new(json!({ "min_distance": c.min_distance(budget)? })),
            };
            Ok(r.tower_of(&c))
        }
        Command::Qmatroid { action, source, mode } => {
            let src = load_source(source)?;
            let m = src.qmatroid(budget)?;
            let r = match action {
                QmAction::Table => Report::new(to_value(&m.table(budget)?)),
                QmAction::Dual => Report::new(to_value(&m.dual().table(budget)?)),
                QmAction::Axioms => {
                    let mode = match mode {
                        Mode::Global => AxiomMode::Global,
                        Mode::Local => AxiomMode::Local,
                    };
                    let v = m.verify_axioms(mode, cli.scope, budget, seed)?;
                    let ok = v.passed;
                    Report::new(to_value(&v)).coverage(to_value(&v.coverage)).verdict("axioms", ok)
                }
                QmAction::Simple => {
                    let loops: Vec<Value> = m.loops(budget)?.iter().map(rows).collect();
                    Report::new(json!({
                        "full_rank": m.full_rank(),
                        "loops": loops,
                        "simple": m.is_simple(budget)?,
                    }))
                }
                QmAction::Flats => {
                    let flats: Vec<Value> = m.flats(budget)?.iter().map(rows).collect();
                    Report::new(json!({ "flats": flats }))
                }
            };
            Ok(with_code_tower(r, &src))
        }
        Command::Weights { source, m, anchor } => {
            let src = load_source(source)?;
            let qm = src.qmatroid(budget)?;
            let mdeg = extension_degree(&src, *m)?;
            let rep = invariants::invariants_report(&qm, mdeg, budget)?;
            let mut r = Report::new(to_value(&rep));
            if let Some(c) = src.code() {
                let x = match anchor {
                    Some(a) => parse_word(a)?,
                    None => c.default_anchor(budget)?,
                };
                let bf = invariants::weight_distribution_bruteforce(c, &x, budget)?;
                let ok = bf.a == rep.a;
                if let Value::Object(o) = &mut r.result {
                    o.insert("bruteforce".into(), to_value(&bf));
                }
                r = r.verdict("formula_matches_bruteforce", ok);
            }
            Ok(with_code_tower(r, &src))
        }
        Command::DualWeights { source, m } => {
            let src = load_source(source)?;
            let qm = src.qmatroid(budget)?;
            let mdeg = extension_degree(&src, *m)?;
            let a = invariants::weight_distribution_formula(&qm, mdeg, budget)?.a;
            let solve = invariants::macwilliams(&qm, &a, mdeg, MacWilliamsPath::Solve, budget)?;
            let formula = invariants::macwilliams(&qm, &a, mdeg, MacWilliamsPath::DualFormula, budget)?;
            let ok = solve.b == formula.b;
            let r = Report::new(json!({
                "A": a.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "solve": to_value(&solve),
                "dual_formula": to_value(&formula),
            }))
            .verdict("paths_agree", ok);
            Ok(with_code_tower(r, &src))
        }
        Command::GenWeights { source } => {
            let src = load_source(source)?;
            let qm = src.qmatroid(budget)?;
            let gw = invariants::generalized_weights_checked(&qm, src.code(), budget)?;
            let mut r = Report::new(to_value(&gw));
            if let Some(c) = src.code() {
                let x = c.default_anchor(budget)?;
                let by_sub = invariants::generalized_weights_by_subcodes(c, &x, budget)?;
                let ok = by_sub == gw.d;
                if let Value::Object(o) = &mut r.result {
                    o.insert("by_subcodes".into(), json!(by_sub));
                }
                r = r.verdict("subcode_supports_agree", ok);
            }
            Ok(with_code_tower(r, &src))
        }
        Command::Circuits { source, dual, max_dim, compare_minimal } => {
            let src = load_source(source)?;
            let qm = src.qmatroid(budget)?;
            let target = if *dual || *compare_minimal { qm.dual() } else { qm };
            let mut circuits = target.circuits(*max_dim, budget)?;
            circuits.sort();
            let mut r = Report::new(json!({
                "dual": *dual || *compare_minimal,
                "circuits": circuits.iter().map(rows).collect::<Vec<_>>(),
            }));
            if *compare_minimal {
                let c = src
                    .code()
                    .ok_or_else(|| data_err("--compare-minimal needs a code file"))?;
                let x = c.default_anchor(budget)?;
                let mut supports: Vec<Subspace> =
                    invariants::minimal_codewords(c, &x, budget)?.into_iter().map(|(_, s)| s).collect();
                supports.sort();
                supports.dedup();
                r = r.verdict("minimal_supports_are_dual_circuits", supports == circuits);
            }
            Ok(with_code_tower(r, &src))
        }
        Command::Port { code, p0, p } => {
            let src = load_source(code)?;
            let m = src.qmatroid(budget)?;
            let f = m.field().clone();
            let p0 = parse_subspace(p0, &f, m.n())?;
            let p = parse_subspace(p, &f, m.n())?;
            let port = Port::new(m, p0, p)?;
            let gamma: Vec<Value> = port.gamma_min(budget)?.iter().map(rows).collect();
            let pr = port.predicates(budget)?;
            let r = Report::new(json!({
                "gamma_min": gamma,
                "perfect": pr.perfect,
                "ideal": pr.ideal,
                "connected": pr.connected,
            }));
            Ok(with_code_tower(r, &src))
        }
        Command::Connectivity { code, t, samples } => {
            let src = load_source(code)?;
            let m = src.qmatroid(budget)?;
            let mode = if m.n() <= EXHAUSTIVE_MAX_N && m.q() <= EXHAUSTIVE_MAX_Q {
                SeparationMode::Exhaustive
            } else {
                SeparationMode::Random { count: *samples, seed }
            };
            let r = match t {
                Some(t) => {
                    let rep = ports::vertical_separations(&m, *t, mode, budget)?;
                    Report::new(to_value(&rep)).coverage(to_value(&rep.coverage))
                }
                None => {
                    let rep = ports::connectivity(&m, mode, budget)?;
                    Report::new(to_value(&rep)).coverage(to_value(&rep.coverage))
                }
            };
            Ok(with_code_tower(r, &src))
        }
        Command::Construct { what, out } => {
            let r = construct(what)?;
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&r.result).expect("specs serialize");
                std::fs::write(path, format!("{text}\n")).map_err(|e| data_err(format!("{}: {e}", path.display())))?;
            }
            Ok(r)
        }
        Command::Geometry { action, file } => geometry_cmd(cli, *action, file),
        Command::VerifyPaper { only } => {
            let chosen: Vec<&acceptance::Criterion> = if only.is_empty() {
                acceptance::CRITERIA.iter().collect()
            } else {
                only.iter()
                    .map(|&id| {
                        acceptance::find(id).ok_or_else(|| Fail { code: EXIT_USAGE, msg: format!("no criterion {id}") })
                    })
                    .collect::<Res<_>>()?
            };
            let mut results = Vec::new();
            for c in chosen {
                let r = acceptance::run(c, seed);
                out(&r.line());
                results.push(r);
            }
            let failing: Vec<u32> = results.iter().filter(|r| !r.pass).map(|r| r.id).collect();
            let mut r = Report::new(json!({
                "criteria": to_value(&results),
                "failing": failing,
                "expected_failures": acceptance::EXPECTED_FAILURES,
            }));
            for c in &results {
                r = r.verdict(&format!("criterion_{}", c.id), c.pass);
            }
            Ok(r)
        }
    }
}

fn with_code_tower(r: Report, src: &Source) -> Report {
    match src.code() {
        Some(c) => r.tower_of(c),
        None => r,
    }
}

fn extension_degree(src: &Source, m: Option<u32>) -> Res<u32> {
    match (src.code(), m) {
        (Some(c), None) => Ok(c.tower().m() as u32),
        (Some(c), Some(m)) if m as usize == c.tower().m() => Ok(m),
        (Some(_), Some(_)) => Err(data_err("--m disagrees with the code's tower")),
        (None, Some(m)) => Ok(m),
        (None, None) => Err(Fail { code: EXIT_USAGE, msg: "--m is required for a q-matroid source".into() }),
    }
}

fn construct(what: &Construct) -> Res<Report> {
    match what {
        Construct::Agtg(a) => {
            let eta = match a.eta {
                Some(e) => e,
                None => constructions::agtg_smallest_eta(a.q0, a.u, a.n, a.k, a.s, a.h)?,
            };
            let params = AgtgParams { q0: a.q0, u: a.u, n: a.n, k: a.k, s: a.s, h: a.h, eta };
            let norm = constructions::agtg_norm(&params)?;
            let c = constructions::agtg_make(&params)?;
            Ok(Report::new(to_value(&c.spec()))
                .tower_of(&c)
                .coverage(json!({ "params": to_value(&params), "norm": to_value(&norm) }))
                .verdict("norm_condition", norm.holds()))
        }
        Construct::Gabidulin { q, n, k, s } => {
            let c = constructions::gabidulin(*q, *n, *k, *s)?;
            Ok(Report::new(to_value(&c.spec())).tower_of(&c))
        }
        Construct::SemifieldSearch { q, m } => {
            let s = constructions::semifield_search(*q, *m)?
                .ok_or_else(|| data_err(format!("no proper semifield of order {q}^{m} found")))?;
            let cert = s.validate();
            let ok = cert.valid && cert.proper;
            Ok(Report::new(to_value(&s.spec()))
                .coverage(json!({ "certificate": to_value(&cert) }))
                .verdict("valid_proper", ok))
        }
        Construct::SemifieldCode { semifield, k, point } => {
            let spec: SemifieldSpec = parse_json(semifield)?;
            let s = Semifield::from_spec(&spec)?;
            let cert = s.validate();
            if !cert.valid {
                return Err(data_err("semifield table fails validation"));
            }
            let c = if *k == 2 {
                constructions::semifield_code_2dim(&s)?
            } else {
                let p = match point {
                    Some(p) => parse_word(p)?,
                    None => constructions::semifield_witness_point(&s, *k)
                        .ok_or_else(|| data_err("no witness point"))?,
                };
                constructions::semifield_code_kdim(&s, *k, &p)?
            };
            Ok(Report::new(to_value(&c.spec())).tower_of(&c))
        }
        Construct::Example { name } => {
            let c = constructions::bundled(name)?;
            Ok(Report::new(to_value(&c.spec())).tower_of(&c))
        }
    }
}

fn load_geometry(file: &Path, budget: u64) -> Res<(Geometry, Option<Code>)> {
    let text = read(file)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| data_err(format!("{}: {e}", file.display())))?;
    if v.get("points").is_some() {
        let spec: GeometrySpec = serde_json::from_value(v).map_err(|e| data_err(e.to_string()))?;
        return Ok((Geometry::from_spec(&spec)?, None));
    }
    let spec: CodeSpec = serde_json::from_value(v).map_err(|e| data_err(e.to_string()))?;
    let c = Code::from_spec(&spec)?;
    Ok((Geometry::from_code(&c, budget)?, Some(c)))
}

fn geometry_cmd(cli: &Cli, action: GeoAction, file: &Path) -> Res<Report> {
    let budget = cli.budget;
    let (g, code) = load_geometry(file, budget)?;
    let opts = VerifyOptions {
        all_bases: cli.all_bases,
        scope: cli.scope,
        budget,
        seed: cli.seed,
        ..VerifyOptions::default()
    };
    let tower = json!(g.tower().spec());
    let mut r = match action {
        GeoAction::Build => Report::new(to_value(&g.spec(true))),
        GeoAction::Verify => {
            let v = geometry::verify(&g, &opts)?;
            Report::new(to_value(&v))
                .verdict("properties", v.holds())
                .verdict("distinct_classes", v.distinct_classes.holds)
        }
        GeoAction::Roundtrip => {
            let n = g.n();
            let back = geometry::code_from_geometry(&g, &linalg::identity(n))?;
            let mut words = g.points();
            words.sort();
            let standard = back.codewords(budget)? == words;
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(cli.seed);
            let basis = random_basis(g.tower().base(), n, &mut rng);
            let moved = geometry::code_from_geometry(&g, &basis)?;
            let expected = back.apply_equivalence(&basis, &vec![0; n])?.to_explicit(budget)?;
            let random = moved.codewords(budget)? == expected.codewords(budget)?;
            let mut r = Report::new(json!({
                "points": g.len(),
                "random_basis": basis,
                "source_is_code": code.is_some(),
            }))
            .verdict("standard_basis_recovers_points", standard)
            .verdict("random_basis_gives_equivalent_code", random);
            if let Some(c) = &code {
                let same = c.to_explicit(budget)?.codewords(budget)? == words;
                r = r.verdict("points_are_the_code", same);
            }
            r
        }
    };
    r.tower = Some(tower);
    Ok(r)
}

fn random_basis(f: &Field, n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Matrix {
    use rand::Rng;
    loop {
        let m: Matrix = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..f.order())).collect())
            .collect();
        if linalg::rank(f, &m) == n {
            return m;
        }
    }
}

/// Prints a line, ignoring a closed pipe.
fn out(line: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{line}");
}

/// argv without the program name and the `--json` destination.
fn command_echo() -> Vec<String> {
    let mut out = Vec::new();
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        if a == "--json" {
            args.next();
        } else if !a.starts_with("--json=") {
            out.push(a);
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(r) => {
            let passed = r.passed();
            let mut doc = Map::new();
            doc.insert("command".into(), json!(command_echo()));
            if let Some(t) = &r.tower {
                doc.insert("tower".into(), t.clone());
            }
            doc.insert("scope".into(), json!({ "requested": cli.scope.to_string(), "seed": cli.seed, "budget": cli.budget }));
            if !r.coverage.is_empty() {
                doc.insert("coverage".into(), Value::Array(r.coverage));
            }
            doc.insert("result".into(), r.result);
            doc.insert("verdicts".into(), Value::Object(r.verdicts));
            let text = serde_json::to_string_pretty(&Value::Object(doc)).expect("report serializes");
            if let Some(path) = &cli.json {
                if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(EXIT_DATA);
                }
            }
            if !matches!(cli.command, Command::VerifyPaper { .. }) {
                out(&text);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERDICT)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
