//! Command-line front end: argument model, verification suites and report
//! rendering. `main` only parses arguments and forwards to [`run`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::build::{self, trial_rng};
use crate::complex::{Complex, Vertex};
use crate::error::{Error, Result};
use crate::geom::{self, fmt_rational, Geometry, Recognizer};
use crate::graph::Graph;
use crate::io;
use crate::spectra::{self, Operator};
use crate::{conn, hodge, refine};

/// Largest `n` accepted by the `random` command.
pub const RANDOM_MAX_N: usize = 10;
/// Automorphism search is attempted up to this many vertices.
pub const AUTOMORPHISM_MAX_VERTICES: usize = 16;
/// At most this many automorphisms are checked by the Lefschetz suite.
pub const AUTOMORPHISM_LIMIT: usize = 48;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "simplexion", version, about = "Finite simplicial complexes and their calculus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Input complex file (JSON).
    #[arg(short, long, global = true)]
    pub input: Option<PathBuf>,

    /// Write output here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Number of random trials.
    #[arg(long, global = true)]
    pub trials: Option<u64>,

    /// Simplex cap for refinements and inputs; defaults to SIMPLEXION_CAP or the built-in cap.
    #[arg(long = "cap-simplices", global = true)]
    pub cap_simplices: Option<u64>,

    /// Omit timings and other run metadata.
    #[arg(long, global = true)]
    pub no_meta: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a named, random or derived complex.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Barycentric refinement of the input complex.
    Refine {
        #[arg(value_name = "INPUT")]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        levels: usize,
    },
    /// Invariants of one complex.
    Analyze(AnalyzeArgs),
    /// Run theorem checks.
    Verify {
        #[arg(value_name = "INPUT")]
        file: Option<PathBuf>,
        /// Comma-separated suite names or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Eigenvalues of an operator.
    Spectra(SpectraArgs),
    /// Monte Carlo statistics of Erdős–Rényi Whitney complexes.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenerateKind {
    Complete {
        #[arg(long)]
        n: usize,
    },
    Cycle {
        #[arg(long)]
        n: usize,
    },
    Path {
        #[arg(long)]
        n: usize,
    },
    Points {
        #[arg(long)]
        n: usize,
    },
    CrossPolytope {
        #[arg(long)]
        dim: usize,
    },
    Icosahedron,
    /// Whitney complex of a graph file `{"n", "edges"}`.
    Whitney {
        #[arg(long)]
        graph: PathBuf,
    },
    ErdosRenyi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    Join {
        left: PathBuf,
        right: PathBuf,
    },
    Union {
        left: PathBuf,
        right: PathBuf,
    },
    /// Order complex of the strong-ring product.
    Product {
        left: PathBuf,
        right: PathBuf,
    },
    Refine {
        #[arg(value_name = "INPUT")]
        file: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(value_name = "INPUT")]
    pub file: Option<PathBuf>,
    /// Levitt curvature; with `--function` also Poincaré–Hopf indices.
    #[arg(long)]
    pub curvature: bool,
    /// Morse classification of the points of `--function`.
    #[arg(long)]
    pub morse: bool,
    /// Vertex function file `{"values": {"id": number}}`.
    #[arg(long)]
    pub function: Option<PathBuf>,
    /// Level surface `{f = c}` for a function file and a value.
    #[arg(long, num_args = 2, value_names = ["FUNCTION", "VALUE"])]
    pub level: Option<Vec<String>>,
    #[arg(long)]
    pub betti: bool,
    #[arg(long)]
    pub wu: bool,
    #[arg(long)]
    pub interaction: bool,
}

#[derive(Debug, Args)]
pub struct SpectraArgs {
    #[arg(value_name = "INPUT")]
    pub file: Option<PathBuf>,
    #[arg(long, default_value = "connection")]
    pub operator: Operator,
    /// Include zeta values of `L^2`.
    #[arg(long)]
    pub zeta: bool,
    /// Kirchhoff spectra of this many successive refinements.
    #[arg(long)]
    pub limit_levels: Option<usize>,
    /// Also write `index,eigenvalue` rows to this file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
}

impl Serialize for Status {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Status::Pass => f.write_str("pass"),
            Status::Fail => f.write_str("fail"),
            Status::Skipped(r) => write!(f, "skipped:{r}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub theorem: String,
    pub status: Status,
    pub witness: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
    /// Skipped because a cap was hit.
    #[serde(skip)]
    pub resource_limited: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub complex: String,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<Value>,
}

impl VerificationReport {
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            EXIT_FAIL
        } else if self.checks.iter().any(|c| c.resource_limited) {
            EXIT_RESOURCE
        } else {
            EXIT_PASS
        }
    }

    pub fn check(&self, theorem: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.theorem == theorem)
    }
}

pub const SUITES: [&str; 19] = [
    "unimodularity",
    "energy",
    "inertia",
    "hydrogen",
    "dual-product",
    "gauss-bonnet",
    "poincare-hopf",
    "dehn-sommerville",
    "euler-poincare",
    "mckean-singer",
    "wu",
    "boundary",
    "sard",
    "lefschetz",
    "kuenneth",
    "zeta-symmetry",
    "trees",
    "stokes",
    "alexander",
];

/// Parse `all` or a comma-separated list, keeping suite order.
pub fn parse_suites(spec: &str) -> Result<Vec<&'static str>> {
    let wanted: Vec<&str> = spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if wanted.is_empty() {
        return Err(Error::invalid("empty suite list"));
    }
    if wanted.contains(&"all") {
        return Ok(SUITES.to_vec());
    }
    if let Some(bad) = wanted.iter().find(|w| !SUITES.contains(w)) {
        return Err(Error::invalid(format!("unknown suite {bad:?}; expected one of {} or all", SUITES.join(", "))));
    }
    Ok(SUITES.iter().copied().filter(|s| wanted.contains(s)).collect())
}

/// Parameters shared by the verification suites.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub trials: u64,
    pub cap: u64,
    pub meta: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, trials: 100, cap: refine::default_cap(), meta: false }
    }
}

/// Stable identifier: the complex's name, or a hash of its canonical JSON.
pub fn complex_id(c: &Complex) -> String {
    if let Some(n) = c.name() {
        return n.to_owned();
    }
    // FNV-1a, fixed across platforms and releases
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in io::complex_to_string(c).bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    format!("fnv1a:{h:016x}")
}

/// Run the selected suites. Checks execute concurrently and are reported in
/// suite order.
pub fn verify(c: &Complex, suites: &[&str], opts: &VerifyOptions) -> VerificationReport {
    let start = Instant::now();
    let checks: Vec<CheckResult> = suites
        .par_iter()
        .map(|&name| {
            let t = Instant::now();
            let mut r = run_suite(c, name, opts);
            if opts.meta {
                r.wall_ms = Some(t.elapsed().as_secs_f64() * 1e3);
            }
            r
        })
        .collect();
    let count = |f: fn(&Status) -> bool| checks.iter().filter(|c| f(&c.status)).count();
    let summary = Summary {
        pass: count(|s| *s == Status::Pass),
        fail: count(|s| *s == Status::Fail),
        skipped: count(|s| matches!(s, Status::Skipped(_))),
    };
    let meta = opts.meta.then(|| {
        json!({
            "version": env!("CARGO_PKG_VERSION"),
            "wall_ms": start.elapsed().as_secs_f64() * 1e3,
        })
    });
    VerificationReport { complex: complex_id(c), checks, summary, meta }
}

enum Outcome {
    Done(bool, Value),
    Skip(String),
}

fn outcome<T: Serialize>(holds: bool, w: &T) -> Result<Outcome> {
    Ok(Outcome::Done(holds, serde_json::to_value(w)?))
}

fn run_suite(c: &Complex, name: &str, opts: &VerifyOptions) -> CheckResult {
    let res = if c.is_empty() {
        Ok(Outcome::Skip("empty complex".into()))
    } else {
        suite(c, name, opts)
    };
    let (status, witness, resource_limited) = match res {
        Ok(Outcome::Done(true, w)) => (Status::Pass, w, false),
        Ok(Outcome::Done(false, w)) => (Status::Fail, w, false),
        Ok(Outcome::Skip(r)) => (Status::Skipped(r), Value::Null, false),
        Err(Error::Resource(m)) => (Status::Skipped(format!("resource limit: {m}")), Value::Null, true),
        Err(e @ (Error::InvalidInput(_) | Error::NotFound(_))) => (Status::Skipped(e.to_string()), Value::Null, false),
        Err(e) => (Status::Fail, json!({ "error": e.to_string() }), false),
    };
    CheckResult { theorem: name.to_owned(), status, witness, wall_ms: None, resource_limited }
}

fn suite(c: &Complex, name: &str, opts: &VerifyOptions) -> Result<Outcome> {
    let dim = c.dim();
    match name {
        "unimodularity" => {
            let r = conn::unimodularity_check(c)?;
            outcome(r.holds, &r)
        }
        "energy" => {
            let r = conn::energy_check(c)?;
            outcome(r.holds, &r)
        }
        "inertia" => {
            let r = conn::inertia_check(c)?;
            outcome(r.holds, &r)
        }
        "hydrogen" => {
            if dim != 1 {
                return Ok(Outcome::Skip("dim≠1".into()));
            }
            let r = conn::hydrogen_check(c)?;
            outcome(r.holds, &r)
        }
        "dual-product" => {
            let r = conn::dual_product_check(c)?;
            outcome(r.determinant_holds && r.spectrum_holds, &r)
        }
        "gauss-bonnet" => {
            let sum: BigRational = geom::levitt_curvatures(c).into_iter().map(|(_, k)| k).sum();
            let chi = c.euler_characteristic();
            let holds = sum == BigRational::from_integer(chi.into());
            outcome(holds, &json!({ "curvature_sum": fmt_rational(&sum), "euler_characteristic": chi }))
        }
        "poincare-hopf" => poincare_hopf(c, opts),
        "dehn-sommerville" => {
            if !geom::is_d_graph(c, dim)? {
                return Ok(Outcome::Skip(format!("not a {dim}-graph")));
            }
            let r = geom::ds_curvature_check(c)?;
            outcome(r.holds, &r)
        }
        "euler-poincare" => {
            let r = hodge::betti(c)?;
            outcome(r.euler_characteristic == c.euler_characteristic(), &r)
        }
        "mckean-singer" => {
            let r = hodge::mckean_singer_check(c, &[0.1, 1.0, 10.0])?;
            outcome(r.holds, &r)
        }
        "wu" => wu(c),
        "boundary" => boundary_formula(c),
        "sard" => sard(c, opts),
        "lefschetz" => {
            if c.vertices().len() > AUTOMORPHISM_MAX_VERTICES {
                return Ok(Outcome::Skip(format!("vertices>{AUTOMORPHISM_MAX_VERTICES}")));
            }
            lefschetz(c)
        }
        "kuenneth" => {
            let r = hodge::kuenneth_check(c, &build::path(2)?, opts.cap.min(usize::MAX as u64) as usize)?;
            outcome(r.holds, &r)
        }
        "zeta-symmetry" => {
            if dim != 1 {
                return Ok(Outcome::Skip("dim≠1".into()));
            }
            let r = spectra::zeta_symmetry_check(c, &[0.5, 1.0, 2.0, 5.0], 1e-8)?;
            outcome(r.holds, &r)
        }
        "trees" => {
            let (g, _) = Graph::skeleton(c);
            if g.order() > spectra::BRUTE_FOREST_MAX {
                return Ok(Outcome::Skip(format!("order>{}", spectra::BRUTE_FOREST_MAX)));
            }
            let exact = spectra::tree_forest_numbers(&g)?;
            let brute = spectra::brute_tree_forest(&g)?;
            outcome(
                exact == brute,
                &json!({
                    "tree": exact.0.to_string(),
                    "forest": exact.1.to_string(),
                    "enumerated_tree": brute.0.to_string(),
                    "enumerated_forest": brute.1.to_string(),
                }),
            )
        }
        "stokes" => stokes(c, opts),
        "alexander" => {
            if c.vertices().len() > hodge::ALEXANDER_MAX_GROUND {
                return Ok(Outcome::Skip(format!("vertices>{}", hodge::ALEXANDER_MAX_GROUND)));
            }
            let r = hodge::alexander_check(c, c.vertices())?;
            outcome(r.holds, &r)
        }
        other => Err(Error::invalid(format!("unknown suite {other:?}"))),
    }
}

fn poincare_hopf(c: &Complex, opts: &VerifyOptions) -> Result<Outcome> {
    let geo = Geometry::of(c);
    let chi = c.euler_characteristic();
    let n = geo.len();
    let bad = (0..opts.trials).find_map(|t| {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut trial_rng(opts.seed, t));
        let mut f = vec![0.0; n];
        for (rank, &p) in order.iter().enumerate() {
            f[p] = rank as f64;
        }
        let sum: i64 = (0..n).map(|v| geom::graph_index(&geo.graph, &f, v)).sum();
        (sum != chi).then_some((t, sum, f))
    });
    match bad {
        None => outcome(true, &json!({ "functions": opts.trials, "euler_characteristic": chi })),
        Some((t, sum, f)) => outcome(false, &json!({ "trial": t, "index_sum": sum, "function": f, "euler_characteristic": chi })),
    }
}

fn wu(c: &Complex) -> Result<Outcome> {
    let omega = c.wu();
    let curvature: BigRational = hodge::wu_gauss_bonnet(c).into_iter().map(|(_, k)| k).sum();
    let gb = curvature == BigRational::from_integer(omega.into());
    let inter = hodge::interaction_cohomology(c)?;
    let holds = gb && inter.euler_characteristic == omega;
    outcome(
        holds,
        &json!({
            "wu": omega,
            "curvature_sum": fmt_rational(&curvature),
            "interaction_betti": inter.betti,
            "interaction_euler": inter.euler_characteristic,
        }),
    )
}

/// Every unit sphere in the refinement graph is a `(d-1)`-sphere or ball.
fn is_d_complex_with_boundary(c: &Complex, d: isize) -> Result<bool> {
    let gamma = Graph::containment(c);
    let mut rec = Recognizer::new(&gamma);
    for i in 0..gamma.order() {
        let s = gamma.neighbors(i);
        if !(rec.sphere(s, d - 1)? || rec.ball(s, d - 1)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn boundary_formula(c: &Complex) -> Result<Outcome> {
    let d = c.dim();
    if !is_d_complex_with_boundary(c, d)? {
        return Ok(Outcome::Skip(format!("not a {d}-complex")));
    }
    let b = geom::boundary(c, d)?;
    let (chi, omega, chi_b) = (c.euler_characteristic(), c.wu(), b.euler_characteristic());
    outcome(
        chi - omega == chi_b,
        &json!({ "euler_characteristic": chi, "wu": omega, "boundary_euler": chi_b, "boundary_simplices": b.len() }),
    )
}

/// Level surfaces of random vertex functions on a `d`-graph are `(d-1)`-graphs.
fn sard(c: &Complex, opts: &VerifyOptions) -> Result<Outcome> {
    let d = c.dim();
    if d < 1 || !geom::is_d_graph(c, d)? {
        return Ok(Outcome::Skip(format!("not a {d}-graph with d≥1")));
    }
    let verts = c.vertices();
    let functions = opts.trials.min(20);
    let mut surfaces = 0usize;
    for t in 0..functions {
        let mut ranks: Vec<usize> = (0..verts.len()).collect();
        ranks.shuffle(&mut trial_rng(opts.seed, t));
        let f: BTreeMap<Vertex, f64> = verts.iter().zip(&ranks).map(|(&v, &r)| (v, r as f64)).collect();
        for k in 0..verts.len().saturating_sub(1) {
            let level = k as f64 + 0.5;
            let s = geom::level_surface(c, &f, level)?;
            surfaces += 1;
            if !geom::is_d_graph(&s, d - 1)? {
                let f: BTreeMap<String, f64> = f.iter().map(|(k, v)| (k.to_string(), *v)).collect();
                return outcome(false, &json!({ "function": f, "level": level, "surface": io::ComplexJson::of(&s) }));
            }
        }
    }
    outcome(true, &json!({ "functions": functions, "surfaces": surfaces }))
}

/// Vertex permutations preserving the complex, identity first.
pub fn automorphisms(c: &Complex, limit: usize) -> Result<Vec<BTreeMap<Vertex, Vertex>>> {
    let verts = c.vertices();
    let n = verts.len();
    if n > AUTOMORPHISM_MAX_VERTICES {
        return Err(Error::resource(format!("automorphism search limited to {AUTOMORPHISM_MAX_VERTICES} vertices")));
    }
    let (g, _) = Graph::skeleton(c);
    let facets = c.facets();
    let mut out = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        i: usize,
        g: &Graph,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        found: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let n = g.order();
        if i == n {
            return found(image);
        }
        for w in 0..n {
            if used[w] || g.degree(w) != g.degree(i) {
                continue;
            }
            if (0..i).any(|j| g.has_edge(i, j) != g.has_edge(w, image[j])) {
                continue;
            }
            image[i] = w;
            used[w] = true;
            let stop = extend(i + 1, g, image, used, found);
            used[w] = false;
            if stop {
                return true;
            }
        }
        false
    }
    let mut found = |img: &[usize]| {
        let map: BTreeMap<Vertex, Vertex> = (0..n).map(|i| (verts[i], verts[img[i]])).collect();
        let preserves = facets.iter().all(|f| {
            let s = crate::complex::Simplex::new(f.vertices().iter().map(|v| map[v]));
            s.is_ok_and(|s| c.contains(&s))
        });
        if preserves {
            out.push(map);
        }
        out.len() >= limit
    };
    extend(0, &g, &mut image, &mut used, &mut found);
    Ok(out)
}

fn lefschetz(c: &Complex) -> Result<Outcome> {
    let maps = automorphisms(c, AUTOMORPHISM_LIMIT)?;
    let mut numbers = Vec::with_capacity(maps.len());
    for (i, t) in maps.iter().enumerate() {
        let r = hodge::lefschetz(c, t)?;
        if !r.agree {
            let map: BTreeMap<String, Vertex> = t.iter().map(|(k, v)| (k.to_string(), *v)).collect();
            return outcome(false, &json!({ "map": map, "report": r, "index": i }));
        }
        numbers.push(r.fixed_point_sum);
    }
    outcome(true, &json!({ "automorphisms": maps.len(), "lefschetz_numbers": numbers }))
}

fn stokes(c: &Complex, opts: &VerifyOptions) -> Result<Outcome> {
    let f = c.f_vector();
    let mut pairs = Vec::new();
    for k in 0..c.dim().max(0) as usize {
        let mut rng = trial_rng(opts.seed, k as u64);
        let mut draw = |len: u64| -> Vec<BigInt> { (0..len).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect() };
        let form = draw(f.get(k));
        let chain = draw(f.get(k + 1));
        let (lhs, rhs) = hodge::stokes_pairing(c, k, &form, &chain)?;
        if lhs != rhs {
            return outcome(false, &json!({ "degree": k, "dF(A)": lhs.to_string(), "F(dA)": rhs.to_string() }));
        }
        pairs.push(json!({ "degree": k, "value": lhs.to_string() }));
    }
    if pairs.is_empty() {
        return Ok(Outcome::Skip("dim=0".into()));
    }
    outcome(true, &json!({ "pairings": pairs }))
}

/// Monte Carlo report of the `random` command.
#[derive(Clone, Debug, Serialize)]
pub struct RandomReport {
    pub n: usize,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
    pub dimension: Column,
    pub euler: Column,
    pub wu: Column,
}

#[derive(Clone, Debug, Serialize)]
pub struct Column {
    pub mean: f64,
    pub std_err: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
}

pub fn random_report(n: usize, p: f64, trials: u64, seed: u64) -> Result<RandomReport> {
    if n > RANDOM_MAX_N {
        return Err(Error::resource(format!("random model limited to n <= {RANDOM_MAX_N}")));
    }
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    let mc = build::monte_carlo(n, p, trials, seed)?;
    let col = |e: build::Estimate, formula: Option<f64>| Column {
        mean: e.mean,
        std_err: e.std_err,
        formula,
        z: formula.map(|f| e.z_score(f)),
    };
    Ok(RandomReport {
        n,
        p,
        trials,
        seed,
        dimension: col(mc.dimension, Some(build::expected_dimension(n).eval(p))),
        euler: col(mc.euler, Some(build::expected_euler(n).eval(p))),
        wu: col(mc.wu, None),
    })
}

/// Parse, run and map errors to exit codes, writing to stdout/stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match run(&cli) {
        Ok((code, text)) => match emit(&cli.global.output, &text) {
            Ok(()) => code,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    }
}

pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Numeric(_) | Error::Invariant(_) => EXIT_FAIL,
        Error::InvalidInput(_) | Error::NotFound(_) | Error::Io(_) | Error::Json(_) => EXIT_USAGE,
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn pretty<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn input_path<'a>(pos: &'a Option<PathBuf>, g: &'a GlobalOpts) -> Result<&'a Path> {
    pos.as_deref()
        .or(g.input.as_deref())
        .ok_or_else(|| Error::invalid("an input complex is required (positional or --input)"))
}

fn load(pos: &Option<PathBuf>, g: &GlobalOpts) -> Result<Complex> {
    let c = io::read_complex(input_path(pos, g)?)?;
    let cap = cap(g);
    if c.len() as u64 > cap {
        return Err(Error::resource(format!("input has {} simplices, cap is {cap}", c.len())));
    }
    Ok(c)
}

fn cap(g: &GlobalOpts) -> u64 {
    g.cap_simplices.unwrap_or_else(refine::default_cap)
}

/// Execute a parsed command; returns the exit code and the text to emit.
pub fn run(cli: &Cli) -> Result<(i32, String)> {
    let g = &cli.global;
    match &cli.command {
        Command::Generate { kind } => Ok((EXIT_PASS, io::complex_to_string(&generate(kind, g)?))),
        Command::Refine { file, levels } => {
            let mut c = load(file, g)?;
            for _ in 0..*levels {
                c = refine::barycentric_capped(&c, cap(g))?;
            }
            Ok((EXIT_PASS, io::complex_to_string(&c)))
        }
        Command::Analyze(a) => Ok((EXIT_PASS, pretty(&analyze(a, g)?)?)),
        Command::Verify { file, suite } => {
            let suites = parse_suites(suite)?;
            let c = load(file, g)?;
            let opts = VerifyOptions { seed: g.seed, trials: g.trials.unwrap_or(100), cap: cap(g), meta: !g.no_meta };
            let report = verify(&c, &suites, &opts);
            let text = match g.format {
                Format::Json => pretty(&report)?,
                Format::Table => report_table(&report),
                Format::Csv => report_csv(&report),
            };
            Ok((report.exit_code(), text))
        }
        Command::Spectra(s) => spectra_cmd(s, g),
        Command::Random { n, p } => {
            let r = random_report(*n, *p, g.trials.unwrap_or(1000), g.seed)?;
            let text = match g.format {
                Format::Json => pretty(&r)?,
                Format::Table | Format::Csv => random_rows(&r, g.format),
            };
            Ok((EXIT_PASS, text))
        }
    }
}

fn generate(kind: &GenerateKind, g: &GlobalOpts) -> Result<Complex> {
    let read = |p: &PathBuf| io::read_complex(p);
    Ok(match kind {
        GenerateKind::Complete { n } => build::complete(*n)?,
        GenerateKind::Cycle { n } => build::cycle(*n)?,
        GenerateKind::Path { n } => build::path(*n)?,
        GenerateKind::Points { n } => build::points(*n)?,
        GenerateKind::CrossPolytope { dim } => build::cross_polytope(*dim)?,
        GenerateKind::Icosahedron => build::icosahedron(),
        GenerateKind::Whitney { graph } => io::graph_from_str(&std::fs::read_to_string(graph)?)?.whitney_complex(),
        GenerateKind::ErdosRenyi { n, p } => build::erdos_renyi(&build::RandomModel::new(*n, *p, g.seed)?),
        GenerateKind::Join { left, right } => read(left)?.join(&read(right)?).0,
        GenerateKind::Union { left, right } => read(left)?.disjoint_union(&read(right)?).0,
        GenerateKind::Product { left, right } => {
            let p = build::ring_product(&read(left)?, &read(right)?);
            let predicted = p.above.len() as u64;
            if predicted > cap(g) {
                return Err(Error::resource(format!("product has {predicted} cells, cap is {}", cap(g))));
            }
            p.order_complex()
        }
        GenerateKind::Refine { file } => refine::barycentric_capped(&load(file, g)?, cap(g))?,
    })
}

fn analyze(a: &AnalyzeArgs, g: &GlobalOpts) -> Result<Value> {
    let c = load(&a.file, g)?;
    let mut out = serde_json::Map::new();
    out.insert("complex".into(), json!(complex_id(&c)));
    out.insert("simplices".into(), json!(c.len()));
    out.insert("dimension".into(), json!(c.dim()));
    out.insert("f_vector".into(), json!(c.f_vector().counts()));
    out.insert("euler_characteristic".into(), json!(c.euler_characteristic()));
    let function = a.function.as_ref().map(|p| io::function_from_str(&std::fs::read_to_string(p)?)).transpose()?;
    let geo = Geometry::of(&c);
    // vertex functions live on the geometry graph only when it is the 1-skeleton
    let on_points = |f: &BTreeMap<Vertex, f64>| -> Result<Vec<f64>> {
        if !c.is_flag() {
            return Err(Error::invalid("vertex functions need a flag complex; refine first"));
        }
        io::function_on(&c, f)
    };
    if a.curvature {
        let ks = geom::levitt_curvatures(&c);
        let sum: BigRational = ks.iter().map(|(_, k)| k.clone()).sum();
        let mut cur = json!({
            "points": ks.iter().map(|(s, k)| json!({ "simplex": s.vertices(), "curvature": fmt_rational(k) })).collect::<Vec<_>>(),
            "sum": fmt_rational(&sum),
        });
        if let Some(f) = &function {
            let vals = on_points(f)?;
            let idx = (0..geo.len()).map(|v| geom::graph_index(&geo.graph, &vals, v)).collect::<Vec<_>>();
            cur["poincare_hopf"] = json!({ "indices": idx, "sum": idx.iter().sum::<i64>() });
        }
        out.insert("curvature".into(), cur);
    }
    if a.morse {
        let f = function.as_ref().ok_or_else(|| Error::invalid("--morse needs --function"))?;
        out.insert("morse".into(), serde_json::to_value(geom::morse_analysis(&c, &on_points(f)?)?)?);
    }
    if let Some(level) = &a.level {
        let f = io::function_from_str(&std::fs::read_to_string(&level[0])?)?;
        let value: f64 = level[1].parse().map_err(|_| Error::invalid(format!("bad level {:?}", level[1])))?;
        let s = geom::level_surface(&c, &f, value)?;
        let d = c.dim();
        out.insert(
            "level_surface".into(),
            json!({
                "level": value,
                "f_vector": s.f_vector().counts(),
                "euler_characteristic": s.euler_characteristic(),
                "is_codim_one_graph": geom::is_d_graph(&s, d - 1).ok(),
                "complex": io::ComplexJson::of(&s),
            }),
        );
    }
    if a.betti {
        out.insert("cohomology".into(), serde_json::to_value(hodge::betti(&c)?)?);
    }
    if a.wu {
        let k: BigRational = hodge::wu_gauss_bonnet(&c).into_iter().map(|(_, k)| k).sum();
        out.insert("wu".into(), json!({ "omega": c.wu(), "curvature_sum": fmt_rational(&k) }));
    }
    if a.interaction {
        out.insert("interaction_cohomology".into(), serde_json::to_value(hodge::interaction_cohomology(&c)?)?);
    }
    Ok(Value::Object(out))
}

fn spectra_cmd(s: &SpectraArgs, g: &GlobalOpts) -> Result<(i32, String)> {
    let c = load(&s.file, g)?;
    let spec = spectra::spectrum(&c, s.operator)?;
    let csv = spectrum_csv(&spec.values);
    if let Some(p) = &s.csv {
        std::fs::write(p, &csv)?;
    }
    if g.format == Format::Csv {
        return Ok((EXIT_PASS, csv));
    }
    let mut out = serde_json::to_value(&spec)?;
    if s.zeta {
        let points = [
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
        ];
        let vals = spectra::zeta(&c, &points)?;
        out["zeta"] = json!(points
            .iter()
            .zip(&vals)
            .map(|(s, z)| json!({ "s": [s.re, s.im], "value": [z.re, z.im] }))
            .collect::<Vec<_>>());
    }
    if let Some(k) = s.limit_levels {
        out["limit"] = serde_json::to_value(spectra::barycentric_limit(&c, k, cap(g))?)?;
    }
    let text = match g.format {
        Format::Table => {
            let mut t = format!("{:>6}  {:>22}\n", "index", "eigenvalue");
            for (i, v) in spec.values.iter().enumerate() {
                let _ = writeln!(t, "{i:>6}  {v:>22.12}");
            }
            t
        }
        _ => pretty(&out)?,
    };
    Ok((EXIT_PASS, text))
}

pub fn spectrum_csv(values: &[f64]) -> String {
    let mut s = String::from("index,eigenvalue\n");
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(s, "{i},{v}");
    }
    s
}

pub fn report_table(r: &VerificationReport) -> String {
    let width = r.checks.iter().map(|c| c.theorem.len()).max().unwrap_or(0).max("theorem".len());
    let mut s = format!("complex: {}\n{:<width$}  status\n", r.complex, "theorem");
    for c in &r.checks {
        let _ = writeln!(s, "{:<width$}  {}", c.theorem, c.status);
    }
    let _ = writeln!(s, "pass {}  fail {}  skipped {}", r.summary.pass, r.summary.fail, r.summary.skipped);
    s
}

pub fn report_csv(r: &VerificationReport) -> String {
    let mut s = String::from("theorem,status\n");
    for c in &r.checks {
        let _ = writeln!(s, "{},\"{}\"", c.theorem, c.status.to_string().replace('"', "\"\""));
    }
    s
}

fn random_rows(r: &RandomReport, format: Format) -> String {
    let rows = [("dimension", &r.dimension), ("euler", &r.euler), ("wu", &r.wu)];
    let opt = |x: Option<f64>| x.map_or_else(String::new, |v| v.to_string());
    let mut s = String::new();
    if format == Format::Csv {
        s.push_str("quantity,mean,std_err,formula,z\n");
        for (name, c) in rows {
            let _ = writeln!(s, "{name},{},{},{},{}", c.mean, c.std_err, opt(c.formula), opt(c.z));
        }
    } else {
        let _ = writeln!(s, "n={} p={} trials={} seed={}", r.n, r.p, r.trials, r.seed);
        let _ = writeln!(s, "{:<10} {:>12} {:>12} {:>12} {:>8}", "quantity", "mean", "std_err", "formula", "z");
        for (name, c) in rows {
            let fmt = |x: Option<f64>, p: usize| x.map_or_else(|| "-".to_owned(), |v| format!("{v:.p$}"));
            let _ = writeln!(
                s,
                "{name:<10} {:>12.6} {:>12.6} {:>12} {:>8}",
                c.mean,
                c.std_err,
                fmt(c.formula, 6),
                fmt(c.z, 3)
            );
        }
    }
    s
}
