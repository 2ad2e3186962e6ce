//! The `talbot` command line front end.
//!
//! Every subcommand reads its parameters from `--key value` flags, optionally
//! layered over a `key=value` file given with `--config`. Tables go to stdout
//! or `--out` as CSV whose first line is `# manifest=<sha256>`; the manifest
//! itself (version, parameters, cached-table hashes) goes to stderr.
//!
//! Exit codes: `0` success, `1` internal error, `2` invalid parameters,
//! `64` usage error.

mod cache;
mod config;

pub use cache::{cache_path, cache_roundtrip, decode_table, encode_table, read_table, write_table, CACHE_VERSION};
pub use config::RunConfig;

use std::io::Write;
use std::path::PathBuf;

use clap::{Arg, ArgAction, Command};
use num_rational::Ratio;

use crate::csvout::{fmt_f64, sha256_hex, CsvTable};
use crate::error::{Error, Result};
use crate::fieldsum::{
    block_sum_verify, build_sum_table, compute_gq, exp_sum, plancherel_verify, weil_bound, weil_verify, GaussianWeight,
    IntPoly, LatticeWeight, OddBumpWeight, SplineWeight, SumTable, DEFAULT_BUDGET, DEFAULT_C1,
};
use crate::mtp::{jarnik_dim, mtp_lower_bound, ExponentPair};
use crate::propagator::{
    build_comb_datum, build_saddle_datum, datum_norm, evolve_at, evolve_slab_point, saddle_evolve, saddle_points,
    Cutoffs, SaddleKind, SaddleParams, Symbol,
};
use crate::regions::{critical_dilation, curve_emit, dilation_segment, EmitKind, ParamPoint};
use crate::slabgeo::{
    admissible_family, covering_count, dilated_unit_cell, dim_slope_estimate, omega_family, overlap_pair_count,
    union_measure, CoverStrategy, DilationExponents, GqTables, MeasureMethod, SlabParams,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Keys that change where output goes but not what it is.
const UNHASHED: [&str; 3] = ["cache_dir", "out", "config"];

type CommandDef = (&'static str, &'static str, &'static [(&'static str, &'static str)]);

const SUBCOMMANDS: &[CommandDef] = &[
    (
        "expsum",
        "Complete sums Š(p) modulo a prime",
        &[
            ("poly", "homogeneous part W_k, e.g. x^3+y^3"),
            ("q", "prime modulus"),
            ("p", "frequency p1,p2,...; omit for a full-table summary"),
            ("budget", "operation budget for a full table"),
            ("force", "ignore the budget (true/false)"),
        ],
    ),
    (
        "gq",
        "Large-sum sets G(q)",
        &[
            ("poly", "homogeneous part W_k"),
            ("q", "prime moduli, comma list or a..b"),
            ("c1", "threshold constant"),
            ("budget", "operation budget per table"),
            ("force", "ignore the budget (true/false)"),
            ("members", "list the members of a single G(q) (true/false)"),
        ],
    ),
    (
        "blocksum",
        "Weighted lattice sums against their complete-sum main term",
        &[
            ("poly", "phase polynomial f"),
            ("q", "prime modulus"),
            ("l", "support radii L, comma list"),
            ("order", "decay order N"),
            ("weight", "spline, gaussian or odd"),
            ("spline_order", "B-spline order of the weight"),
            ("sigma", "Gaussian width as a fraction of L"),
        ],
    ),
    (
        "evolve",
        "Evolution of a comb datum at a slab or at a given point",
        &[
            ("w", "lower-variable part W of the symbol"),
            ("k", "degree k"),
            ("r", "scale R, a power of two"),
            ("u1", "exponent u1"),
            ("u2", "exponent u2"),
            ("p", "slab label p1,p2,..."),
            ("q", "modulus of the slab (default: the datum's q)"),
            ("offset", "offset from the slab center"),
            ("x", "evaluation point, instead of a slab"),
            ("t", "time for --x"),
        ],
    ),
    (
        "saddle",
        "Evolution of the saddle constructions",
        &[
            ("n", "dimension"),
            ("m", "saddle index"),
            ("kind", "sharp, talbot or no-talbot"),
            ("r", "scale R, a power of two"),
            ("a", "lattice exponent a for sharp and no-talbot"),
            ("u1", "exponent u1 for talbot"),
            ("u2", "exponent u2 for talbot"),
            ("p", "labels, ';'-separated comma lists"),
            ("q", "modulus (default: the datum's q, or 1 for sharp)"),
        ],
    ),
    (
        "slabs",
        "Admissible slab family F_R in [-1,1]^n",
        &[
            ("k", "degree k"),
            ("n", "dimension"),
            ("r", "scale R"),
            ("u1", "exponent u1"),
            ("u2", "exponent u2"),
            ("poly", "W_k (default: the power sum)"),
            ("c1", "threshold constant"),
        ],
    ),
    (
        "measure",
        "Union measure and overlap count of a dilated unit cell",
        &[
            ("k", "degree k"),
            ("n", "dimension"),
            ("r", "scale R"),
            ("u1", "exponent u1"),
            ("u2", "exponent u2"),
            ("poly", "W_k (default: the power sum)"),
            ("c1", "threshold constant"),
            ("eps", "epsilon of the dilation line"),
            ("a1", "dilation exponent a1 (default: critical point)"),
            ("a2", "dilation exponent a2"),
            ("h1", "explicit first radius, with --h2 instead of exponents"),
            ("h2", "explicit remaining radius"),
            ("method", "exact or mc"),
            ("samples", "Monte Carlo samples"),
            ("seed", "Monte Carlo seed"),
        ],
    ),
    (
        "cover",
        "Covering counts across dyadic scales and their log-log slope",
        &[
            ("k", "degree k"),
            ("n", "dimension"),
            ("u1", "exponent u1"),
            ("u2", "exponent u2"),
            ("exps", "scale exponents, e.g. 8..14"),
            ("strategy", "fine-balls or sheets"),
            ("poly", "W_k (default: the power sum)"),
            ("c1", "threshold constant"),
        ],
    ),
    (
        "mtp",
        "Mass Transference Principle lower bound",
        &[("b", "original exponents, comma list"), ("a", "dilated exponents, comma list")],
    ),
    ("jarnik", "Dimension of the tau-well-approximable numbers", &[("tau", "exponent tau >= 2")]),
    (
        "regions",
        "Region polygons and Sobolev-exponent curves",
        &[
            ("k", "degree k"),
            ("n", "dimension"),
            ("what", "thm14, thm16, regions or dimension-surface"),
            ("m", "saddle index for thm16"),
        ],
    ),
];

fn command() -> Command {
    let mut cmd = Command::new("talbot")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Exponential sums, Talbot-effect data and slab geometry")
        .subcommand_required(true)
        .arg(Arg::new("config").long("config").global(true).value_name("FILE").help("key=value parameter file"))
        .arg(
            Arg::new("cache_dir")
                .long("cache-dir")
                .global(true)
                .value_name("DIR")
                .help("table cache directory (default: $TALBOT_CACHE_DIR)"),
        )
        .arg(Arg::new("out").long("out").global(true).value_name("FILE").help("write the CSV here instead of stdout"));
    for (name, about, keys) in SUBCOMMANDS {
        let mut sub = Command::new(*name).about(*about);
        for (key, help) in *keys {
            sub = sub.arg(Arg::new(*key).long(&*Box::leak(key.replace('_', "-").into_boxed_str())).value_name("VALUE").help(*help).action(ArgAction::Set));
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

/// Parameters and provenance of one run.
struct Run {
    name: String,
    cfg: RunConfig,
    cache_dir: Option<PathBuf>,
    fixtures: Vec<(String, String)>,
}

impl Run {
    fn manifest(&self) -> String {
        let mut s = format!("talbot {}\ncommand={}\n", env!("CARGO_PKG_VERSION"), self.name);
        for (k, v) in self.cfg.iter() {
            if !UNHASHED.contains(&k) {
                s.push_str(&format!("{k}={v}\n"));
            }
        }
        for (k, h) in &self.fixtures {
            s.push_str(&format!("table {k} sha256={h}\n"));
        }
        s
    }

    /// `Š` table for `(poly, q)`, through the cache when one is configured.
    fn table(&mut self, poly: &IntPoly, q: u64, c1: f64, budget: f64, force: bool) -> Result<SumTable> {
        let table = match &self.cache_dir {
            Some(dir) => {
                let path = cache_path(dir, poly, q);
                if path.exists() {
                    let mut t = read_table(&path, poly)?;
                    t.c1 = c1;
                    t
                } else {
                    let t = build_sum_table(poly, q, c1, budget, force)?;
                    write_table(&path, &t)?;
                    t
                }
            }
            None => build_sum_table(poly, q, c1, budget, force)?,
        };
        let mut enc = encode_table(&table);
        enc.truncate(enc.len() - 32);
        self.fixtures.push((format!("{poly} q={q}"), sha256_hex(&String::from_utf8_lossy(&enc))));
        Ok(table)
    }

    fn gq_tables(&mut self, poly: &IntPoly, primes: &[u64], c1: f64) -> Result<GqTables> {
        let mut sets = Vec::new();
        for &q in primes {
            if q == 1 {
                sets.push(crate::fieldsum::GqSet::trivial(poly.num_vars()));
            } else {
                sets.push(compute_gq(&self.table(poly, q, c1, DEFAULT_BUDGET, false)?));
            }
        }
        Ok(GqTables::from_sets(poly.num_vars(), sets))
    }

    fn poly_or_power_sum(&self, k: u32, n: u32) -> Result<IntPoly> {
        match self.cfg.get("poly") {
            Some(s) => IntPoly::parse(s, Some(n as usize - 1)),
            None => Ok(IntPoly::power_sum(n as usize - 1, k)),
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let result = (|| -> Result<(Run, Output)> {
        let mut cfg = match matches.get_one::<String>("config").or_else(|| sub.get_one::<String>("config")) {
            Some(path) => RunConfig::parse(&std::fs::read_to_string(path)?)?,
            None => RunConfig::new(),
        };
        if let Some(c) = cfg.remove("command") {
            if c != name {
                return Err(Error::Precondition(format!("config is for '{c}', not '{name}'")));
            }
        }
        let def = SUBCOMMANDS.iter().find(|s| s.0 == name).expect("registered subcommand");
        for (key, _) in def.2 {
            if let Some(v) = sub.get_one::<String>(key) {
                cfg.set(key, v.clone());
            }
        }
        for key in UNHASHED {
            if let Some(v) = sub.get_one::<String>(key).or_else(|| matches.get_one::<String>(key)) {
                cfg.set(key, v.clone());
            }
        }
        let cache_dir = cfg
            .get("cache_dir")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("TALBOT_CACHE_DIR").map(PathBuf::from));
        let mut run = Run { name: name.to_string(), cfg, cache_dir, fixtures: Vec::new() };
        let output = dispatch(&mut run)?;
        Ok((run, output))
    })();
    match result.and_then(|(run, output)| emit(&run, output, out, err)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_precondition() {
                EXIT_PRECONDITION
            } else {
                EXIT_INTERNAL
            }
        }
    }
}

enum Output {
    Scalar(String),
    Table(CsvTable),
}

fn emit(run: &Run, output: Output, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let manifest = run.manifest();
    let hash = sha256_hex(&manifest);
    for line in manifest.lines() {
        writeln!(err, "# {line}")?;
    }
    writeln!(err, "# manifest={hash}")?;
    match output {
        Output::Scalar(s) => writeln!(out, "{s}")?,
        Output::Table(t) => match run.cfg.get("out") {
            Some(path) => {
                let mut f = std::fs::File::create(path)?;
                t.write_with_manifest(&mut f, &hash)?;
            }
            None => t.write_with_manifest(out, &hash)?,
        },
    }
    Ok(())
}

fn dispatch(run: &mut Run) -> Result<Output> {
    match run.name.as_str() {
        "expsum" => cmd_expsum(run),
        "gq" => cmd_gq(run),
        "blocksum" => cmd_blocksum(run),
        "evolve" => cmd_evolve(run),
        "saddle" => cmd_saddle(run),
        "slabs" => cmd_slabs(run),
        "measure" => cmd_measure(run),
        "cover" => cmd_cover(run),
        "mtp" => cmd_mtp(run),
        "jarnik" => cmd_jarnik(run),
        "regions" => cmd_regions(run),
        other => Err(Error::Precondition(format!("unknown subcommand '{other}'"))),
    }
}

fn headers(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn cmd_expsum(run: &mut Run) -> Result<Output> {
    let poly = IntPoly::parse(&run.cfg.required::<String>("poly")?, None)?;
    let q: u64 = run.cfg.required("q")?;
    let k = poly.degree();
    let d = poly.num_vars();
    match run.cfg.list::<i64>("p")? {
        Some(p) => {
            let v = exp_sum(&poly, &p, q)?;
            let mut h = headers("p", p.len());
            h.extend(["re", "im", "abs", "weil_ratio"].map(String::from));
            let mut t = CsvTable::new(h);
            let mut row: Vec<String> = p.iter().map(i64::to_string).collect();
            row.extend([fmt_f64(v.re), fmt_f64(v.im), fmt_f64(v.norm()), fmt_f64(v.norm() / weil_bound(k, d, q))]);
            t.push(row);
            Ok(Output::Table(t))
        }
        None => {
            let budget = run.cfg.or("budget", DEFAULT_BUDGET)?;
            let force = run.cfg.flag("force")?;
            let table = run.table(&poly, q, DEFAULT_C1, budget, force)?;
            let weil = weil_verify(&table, k)?;
            let mut t = CsvTable::new(["q", "entries", "max_weil_ratio", "weil_violations", "plancherel_rel_error"]);
            t.push(vec![
                q.to_string(),
                table.len().to_string(),
                fmt_f64(weil.max_ratio),
                weil.violations.len().to_string(),
                fmt_f64(plancherel_verify(&table)),
            ]);
            Ok(Output::Table(t))
        }
    }
}

fn cmd_gq(run: &mut Run) -> Result<Output> {
    let poly = IntPoly::parse(&run.cfg.required::<String>("poly")?, None)?;
    let qs: Vec<u64> = run.cfg.list("q")?.ok_or_else(|| Error::Precondition("missing parameter 'q'".into()))?;
    let c1 = run.cfg.or("c1", DEFAULT_C1)?;
    let budget = run.cfg.or("budget", DEFAULT_BUDGET)?;
    let force = run.cfg.flag("force")?;
    if run.cfg.flag("members")? {
        if qs.len() != 1 {
            return Err(Error::Precondition("--members needs a single q".into()));
        }
        let set = compute_gq(&run.table(&poly, qs[0], c1, budget, force)?);
        let mut t = CsvTable::new(headers("p", poly.num_vars() + 1));
        for m in set.members() {
            t.push(m.iter().map(u64::to_string).collect());
        }
        return Ok(Output::Table(t));
    }
    let mut t = CsvTable::new(["q", "c1", "count", "size", "density"]);
    for q in qs {
        let set = compute_gq(&run.table(&poly, q, c1, budget, force)?);
        let size = (q as f64).powi(poly.num_vars() as i32 + 1);
        t.push(vec![q.to_string(), fmt_f64(c1), set.count().to_string(), fmt_f64(size), fmt_f64(set.density())]);
    }
    Ok(Output::Table(t))
}

fn cmd_blocksum(run: &mut Run) -> Result<Output> {
    let poly = IntPoly::parse(&run.cfg.required::<String>("poly")?, None)?;
    let q: u64 = run.cfg.required("q")?;
    let ls: Vec<f64> = run.cfg.list("l")?.ok_or_else(|| Error::Precondition("missing parameter 'l'".into()))?;
    let order: u32 = run.cfg.or("order", 2)?;
    let kind = run.cfg.or("weight", "spline".to_string())?;
    let spline_order: usize = run.cfg.or("spline_order", 8)?;
    let sigma: f64 = run.cfg.or("sigma", 0.25)?;
    let dim = poly.num_vars();
    let mut t = CsvTable::new(["l", "l_over_q", "lhs_re", "lhs_im", "main_re", "main_im", "error", "bound", "ratio"]);
    for l in ls {
        let weight: Box<dyn LatticeWeight> = match kind.as_str() {
            "spline" => Box::new(SplineWeight { dim, l, order: spline_order }),
            "gaussian" => Box::new(GaussianWeight { dim, l, sigma: sigma * l }),
            "odd" => Box::new(OddBumpWeight { dim, l, order: spline_order }),
            other => return Err(Error::Parse(format!("unknown weight '{other}'"))),
        };
        let rep = block_sum_verify(weight.as_ref(), &poly, q, order)?;
        t.push(vec![
            fmt_f64(l),
            fmt_f64(l / q as f64),
            fmt_f64(rep.lhs.re),
            fmt_f64(rep.lhs.im),
            fmt_f64(rep.main_term.re),
            fmt_f64(rep.main_term.im),
            fmt_f64(rep.error),
            fmt_f64(rep.bound),
            fmt_f64(rep.ratio),
        ]);
    }
    Ok(Output::Table(t))
}

fn cmd_evolve(run: &mut Run) -> Result<Output> {
    let k: u32 = run.cfg.required("k")?;
    let w = IntPoly::parse(&run.cfg.required::<String>("w")?, None)?;
    let r: f64 = run.cfg.required("r")?;
    let (u1, u2): (f64, f64) = (run.cfg.required("u1")?, run.cfg.required("u2")?);
    let datum = build_comb_datum(&Symbol::power(k, w)?, r, u1, u2, Cutoffs::default())?;
    let n = datum.n() as usize;
    let mut h = headers("x", n);
    h.extend(["t", "re", "im", "abs", "normalized", "ratio"].map(String::from));
    let mut t = CsvTable::new(h);
    if let Some(x) = run.cfg.list::<f64>("x")? {
        let time: f64 = run.cfg.required("t")?;
        let s = evolve_at(&datum, &[(x.clone(), time)])?;
        let v = s.values[0];
        let normalized = v.norm() / datum_norm(&datum);
        let mut row: Vec<String> = x.iter().map(|&v| fmt_f64(v)).collect();
        row.extend([time, v.re, v.im, v.norm(), normalized, normalized / datum.predicted_ratio()].map(fmt_f64));
        t.push(row);
        return Ok(Output::Table(t));
    }
    let p: Vec<i64> = run.cfg.list("p")?.ok_or_else(|| Error::Precondition("give --p or --x".into()))?;
    let q: u64 = run.cfg.or("q", datum.q())?;
    let offset: Vec<f64> = run.cfg.list("offset")?.unwrap_or_else(|| vec![0.0; n]);
    let e = evolve_slab_point(&datum, &p, q, &offset)?;
    let mut row: Vec<String> = e.x.iter().map(|&v| fmt_f64(v)).collect();
    row.extend([e.t, e.value.re, e.value.im, e.value.norm(), e.normalized, e.ratio].map(fmt_f64));
    t.push(row);
    Ok(Output::Table(t))
}

fn cmd_saddle(run: &mut Run) -> Result<Output> {
    let n: u32 = run.cfg.required("n")?;
    let m: u32 = run.cfg.required("m")?;
    let kind = SaddleKind::parse(&run.cfg.required::<String>("kind")?)?;
    let r: f64 = run.cfg.required("r")?;
    let params = match kind {
        SaddleKind::Talbot => SaddleParams::U(run.cfg.required("u1")?, run.cfg.required("u2")?),
        _ => SaddleParams::Exponent(run.cfg.required("a")?),
    };
    let cut = Cutoffs::default();
    let datum = build_saddle_datum(n, m, kind, r, params, cut.phi1, cut.psi)?;
    let default_q = if kind == SaddleKind::Sharp { 1 } else { datum.q() };
    let q: u64 = run.cfg.or("q", default_q)?;
    let labels: Vec<Vec<i64>> = run
        .cfg
        .required::<String>("p")?
        .split(';')
        .map(|s| s.split(',').map(|v| v.trim().parse().map_err(|_| Error::Parse(format!("bad label '{s}'")))).collect())
        .collect::<Result<_>>()?;
    let points = saddle_points(&datum, &labels, q)?;
    let sample = saddle_evolve(&datum, &points)?;
    let mut h = headers("x", n as usize);
    h.extend(["t", "re", "im", "abs", "normalized", "predicted", "ratio"].map(String::from));
    let mut t = CsvTable::new(h);
    for ((x, time), v) in sample.points.iter().zip(&sample.values) {
        let normalized = v.norm() / datum.norm();
        let mut row: Vec<String> = x.iter().map(|&v| fmt_f64(v)).collect();
        row.extend([*time, v.re, v.im, v.norm(), normalized, datum.predicted(), normalized / datum.predicted()].map(fmt_f64));
        t.push(row);
    }
    Ok(Output::Table(t))
}

fn slab_setup(run: &mut Run, r: f64) -> Result<(SlabParams, GqTables)> {
    let k: u32 = run.cfg.required("k")?;
    let n: u32 = run.cfg.required("n")?;
    let (u1, u2): (f64, f64) = (run.cfg.required("u1")?, run.cfg.required("u2")?);
    let c1 = run.cfg.or("c1", DEFAULT_C1)?;
    let params = SlabParams::new(k, n, r, u1, u2)?;
    let poly = run.poly_or_power_sum(k, n)?;
    let gq = run.gq_tables(&poly, &params.primes, c1)?;
    Ok((params, gq))
}

fn cmd_slabs(run: &mut Run) -> Result<Output> {
    let r: f64 = run.cfg.required("r")?;
    let (p, gq) = slab_setup(run, r)?;
    let fam = admissible_family(p.k, p.n, r, p.u1, p.u2, &gq)?;
    let n = p.n as usize;
    let mut h = vec!["q".to_string()];
    h.extend(headers("p", n));
    h.extend(headers("c", n));
    h.extend(headers("r", n));
    let mut t = CsvTable::new(h);
    for s in &fam.slabs {
        let mut row = vec![s.q.to_string()];
        row.extend(s.p.iter().map(i64::to_string));
        row.extend(s.center.iter().map(|&v| fmt_f64(v)));
        row.extend(s.radii.iter().map(|&v| fmt_f64(v)));
        t.push(row);
    }
    Ok(Output::Table(t))
}

fn cmd_measure(run: &mut Run) -> Result<Output> {
    let r: f64 = run.cfg.required("r")?;
    let (p, gq) = slab_setup(run, r)?;
    let fam = match (run.cfg.optional::<f64>("h1")?, run.cfg.optional::<f64>("h2")?) {
        (Some(h1), Some(h2)) => omega_family(&p, &gq, h1, h2)?,
        (None, None) => {
            let eps = run.cfg.or("eps", 0.05)?;
            let point = ParamPoint::new(p.u1, p.u2, p.k, p.n);
            let (a1, a2) = match (run.cfg.optional("a1")?, run.cfg.optional("a2")?) {
                (Some(a1), Some(a2)) => (a1, a2),
                _ => match dilation_segment(&point, eps)? {
                    Some(seg) => seg.critical_point(),
                    None => critical_dilation(&point, eps),
                },
            };
            dilated_unit_cell(&p, &gq, DilationExponents { a1, a2, eps })?
        }
        _ => return Err(Error::Precondition("give both --h1 and --h2".into())),
    };
    let method = match run.cfg.or("method", "exact".to_string())?.as_str() {
        "exact" => MeasureMethod::ExactSweep,
        "mc" => MeasureMethod::MonteCarlo {
            samples: run.cfg.or("samples", 1u64 << 20)?,
            seed: run.cfg.or("seed", 0)?,
            max_error: None,
        },
        other => return Err(Error::Parse(format!("unknown method '{other}'"))),
    };
    let m = union_measure(&fam, method)?;
    let o = overlap_pair_count(&fam);
    let mut t = CsvTable::new(["boxes", "measure", "error", "samples", "box_measure_sum", "pairs", "ratio"]);
    t.push(vec![
        fam.len().to_string(),
        fmt_f64(m.measure),
        fmt_f64(m.error),
        m.samples.to_string(),
        fmt_f64(fam.total_measure()),
        o.pairs.to_string(),
        fmt_f64(o.ratio),
    ]);
    Ok(Output::Table(t))
}

fn cmd_cover(run: &mut Run) -> Result<Output> {
    let exps: Vec<u32> = run.cfg.list("exps")?.ok_or_else(|| Error::Precondition("missing parameter 'exps'".into()))?;
    let strategy = CoverStrategy::parse(&run.cfg.or("strategy", "fine-balls".to_string())?)?;
    let mut rows = Vec::new();
    for e in exps {
        let r = 2f64.powi(e as i32);
        let (p, gq) = slab_setup(run, r)?;
        let fam = admissible_family(p.k, p.n, r, p.u1, p.u2, &gq)?;
        let radius = strategy.radius(r);
        rows.push((r, radius, covering_count(&fam, radius, strategy)?));
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|&(_, rad, c)| (rad, c as f64)).collect();
    let fit = dim_slope_estimate(&pts)?;
    let mut t = CsvTable::new(["r", "radius", "count", "slope", "stderr"]);
    for (r, rad, c) in rows {
        t.push(vec![fmt_f64(r), fmt_f64(rad), c.to_string(), fmt_f64(fit.slope), fmt_f64(fit.stderr)]);
    }
    Ok(Output::Table(t))
}

/// Exact rational value of a decimal literal such as `0.75` or `3/4`.
fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let bad = || Error::Parse(format!("'{s}' is not a decimal or fraction"));
    if let Some((a, b)) = s.split_once('/') {
        let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if b == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(a, b));
    }
    let s = s.trim();
    let (neg, body) = s.strip_prefix('-').map_or((false, s), |b| (true, b));
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || frac.len() > 15 {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: i64 = digits.parse().map_err(|_| bad())?;
    let r = Ratio::new(num, 10i64.pow(frac.len() as u32));
    Ok(if neg { -r } else { r })
}

/// Decimal form when the denominator divides a power of ten, else a fraction.
fn format_ratio(r: Ratio<i64>) -> String {
    let mut d = *r.denom();
    let mut scale = 0;
    for p in [2, 5] {
        while d % p == 0 {
            d /= p;
            scale += 1;
        }
    }
    if d != 1 {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let x = *r.numer() as f64 / *r.denom() as f64;
    let s = format!("{x:.scale$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn cmd_mtp(run: &mut Run) -> Result<Output> {
    let parse = |key: &str| -> Result<Vec<Ratio<i64>>> {
        run.cfg
            .get(key)
            .ok_or_else(|| Error::Precondition(format!("missing parameter '{key}'")))?
            .split(',')
            .map(parse_ratio)
            .collect()
    };
    let e = ExponentPair::new(parse("b")?, parse("a")?)?;
    Ok(Output::Scalar(format_ratio(mtp_lower_bound(&e))))
}

fn cmd_jarnik(run: &mut Run) -> Result<Output> {
    Ok(Output::Scalar(jarnik_dim(run.cfg.required("tau")?)?.to_string()))
}

fn cmd_regions(run: &mut Run) -> Result<Output> {
    let what = EmitKind::parse(&run.cfg.required::<String>("what")?, run.cfg.optional("m")?)?;
    let k: u32 = if matches!(what, EmitKind::Thm16 { .. }) { run.cfg.or("k", 2)? } else { run.cfg.required("k")? };
    let n: u32 = run.cfg.required("n")?;
    Ok(Output::Table(curve_emit(k, n, what)?))
}
