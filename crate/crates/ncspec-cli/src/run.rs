//! Command definitions and their execution.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use ncspec::gallery::{self, Example};
use ncspec::linalg::{AntilinearOp, Closeness, Tolerance};
use ncspec::{
    check_multiplicativity, classify_ko, extend, n11_product, verify_n1, verify_n11, verify_real_structure, Check,
    Connection, HermitianModule, HodgeChoice, MultiplicativityError, N11Data, N1Data, RealStructure,
    SpectralError, StarAlgebra, Variant,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::input::{write_n11, ExampleSpec};
use crate::report::{ExampleRow, Relation, Report, VariantRow};

/// Residual above which two operators count as witnessed different.
pub const WITNESS: f64 = 1e-6;

/// Built-in N=(1,1) data sets, next to the geometries of the gallery.
pub const N11_NAMES: [&str; 2] = ["n11-scalar", "n11-pauli"];

#[derive(Debug, Parser)]
#[command(name = "ncspec", version, about = "Verify finite spectral data and the N=(1,1) extension")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Equality threshold in operator norm.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Singular values at or below this count as zero.
    #[arg(long, global = true)]
    pub rank_tol: Option<f64>,
    /// Seed for random connection terms.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the axioms of an even real spectral triple.
    VerifyN1 { input: String },
    /// Check the axioms of N=(1,1) data. Geometry inputs are extended first.
    VerifyN11 { input: String },
    /// Extend a triple with a connection to N=(1,1) data on `E ⊗_A E`.
    Extend {
        input: String,
        #[command(flatten)]
        conn: ConnectionArgs,
        #[arg(long, value_enum, default_value_t = HodgeArg::OneTensorGamma)]
        hodge: HodgeArg,
        /// Write the resulting N=(1,1) data here, in the input format.
        #[arg(long)]
        candidate: Option<PathBuf>,
    },
    /// Compare the extension of a product with every product of extensions.
    CheckMult {
        first: String,
        second: String,
        #[command(flatten)]
        conn: ConnectionArgs,
        /// `all`, or a comma-separated list of main, v1..v5.
        #[arg(long, default_value = "all")]
        variants: String,
    },
    /// List the built-in examples.
    ListGallery,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HodgeArg {
    #[value(name = "one-tensor-gamma", alias = "1-tensor-gamma")]
    OneTensorGamma,
    #[value(name = "gamma-tensor-one", alias = "gamma-tensor-1")]
    GammaTensorOne,
}

impl From<HodgeArg> for HodgeChoice {
    fn from(h: HodgeArg) -> Self {
        match h {
            HodgeArg::OneTensorGamma => HodgeChoice::OneTensorGamma,
            HodgeArg::GammaTensorOne => HodgeChoice::GammaTensorOne,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConnectionArg {
    /// The connection shipped with the example (Grassmann for files).
    Example,
    Grassmann,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ConnectionArgs {
    #[arg(long, value_enum, default_value_t = ConnectionArg::Example)]
    pub connection: ConnectionArg,
    /// Add a random compatible term of this size (overrides the file).
    #[arg(long)]
    pub perturbation: Option<f64>,
}

/// A resolved input: a gallery entry or a parsed file.
enum Source {
    Geometry(Box<Example>),
    N11(String, N11Data),
    File(PathBuf, ExampleSpec),
}

impl Source {
    fn resolve(arg: &str, tol: Tolerance) -> Result<Self> {
        if gallery::NAMES.contains(&arg) {
            let ex = gallery::by_name(arg, tol).with_context(|| format!("building gallery example {arg}"))?;
            return Ok(Source::Geometry(Box::new(ex)));
        }
        match arg {
            "n11-scalar" => return Ok(Source::N11(arg.into(), gallery::n11_scalar())),
            "n11-pauli" => return Ok(Source::N11(arg.into(), gallery::n11_pauli())),
            _ => {}
        }
        let path = Path::new(arg);
        if !path.exists() {
            bail!("{arg:?} is neither a file nor a gallery example (see list-gallery)");
        }
        let text = fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        let spec = ExampleSpec::parse(&text).with_context(|| format!("parsing {arg}"))?;
        Ok(Source::File(path.to_path_buf(), spec))
    }

    fn descriptor(&self) -> String {
        match self {
            Source::Geometry(ex) => format!("gallery {}", ex.name),
            Source::N11(name, _) => format!("gallery {name}"),
            Source::File(path, _) => format!("file {}", path.display()),
        }
    }
}

fn tolerance(cli: &Cli, spec: Option<&ExampleSpec>) -> Result<Tolerance> {
    let base = spec.and_then(|s| s.tolerance).map_or_else(Tolerance::default, |(e, r)| Tolerance {
        eq_tol: e,
        rank_tol: r,
    });
    Tolerance::new(cli.tol.unwrap_or(base.eq_tol), cli.rank_tol.unwrap_or(base.rank_tol))
        .map_err(|e| anyhow!("{e}"))
}

/// Resolves an input with the command-line tolerance, re-reading file
/// overrides when no flag is given.
fn load(cli: &Cli, arg: &str) -> Result<(Source, Tolerance)> {
    let tol = tolerance(cli, None)?;
    let source = Source::resolve(arg, tol)?;
    let tol = match &source {
        Source::File(_, spec) => tolerance(cli, Some(spec))?,
        _ => tol,
    };
    Ok((source, tol))
}

fn file_algebra(spec: &ExampleSpec, tol: Tolerance) -> Result<StarAlgebra> {
    if spec.generators.is_empty() {
        Ok(StarAlgebra::scalars(spec.dim))
    } else {
        StarAlgebra::generate(spec.dim, &spec.generators, tol).context("generating the algebra")
    }
}

fn file_n1(spec: &ExampleSpec, tol: Tolerance) -> Result<N1Data> {
    let algebra = file_algebra(spec, tol)?;
    Ok(N1Data::new(algebra, spec.require("dirac")?.clone(), spec.require("gamma")?.clone())?)
}

/// Verifies a triple and, when `j` is given, its real structure. A `j`
/// with no consistent signs becomes a failing entry.
fn verify_triple(data: &N1Data, j: Option<AntilinearOp>, tol: Tolerance, report: &mut Report) -> Option<RealStructure> {
    report.checks.extend(verify_n1(data, tol));
    let j = j?;
    match RealStructure::measure(j, data, tol) {
        Ok(rs) => {
            report.checks.extend(verify_real_structure(data, &rs, tol));
            match classify_ko(rs.signs, true) {
                Ok(ko) => {
                    let dims: Vec<String> = ko.iter().map(u8::to_string).collect();
                    report.note(format!("signs {} give KO-dimension {}", rs.signs, dims.join(",")));
                }
                Err(e) => report.note(e.to_string()),
            }
            Some(rs)
        }
        Err(SpectralError::InconsistentSign { relation, plus, minus }) => {
            report.checks.push(Check::new(
                "real.signs",
                format!("a sign fits {relation}"),
                Closeness::new(plus.min(minus), tol.eq_tol),
            ));
            None
        }
        Err(e) => {
            report.note(e.to_string());
            report.extra_failure = true;
            None
        }
    }
}

fn verify_n1_cmd(cli: &Cli, arg: &str) -> Result<Report> {
    let (source, tol) = load(cli, arg)?;
    let mut report = Report::new("verify-n1", source.descriptor());
    report.option("tol", format!("{:e}", tol.eq_tol));
    match &source {
        Source::Geometry(ex) => {
            let g = &ex.geometry;
            verify_triple(&g.data, Some(g.real.j.clone()), tol, &mut report);
        }
        Source::N11(_, d) => {
            verify_triple(&d.to_n1(), None, tol, &mut report);
        }
        Source::File(_, spec) => {
            let data = file_n1(spec, tol)?;
            verify_triple(&data, spec.j.clone().map(AntilinearOp::new), tol, &mut report);
        }
    }
    Ok(report)
}

fn verify_n11_cmd(cli: &Cli, arg: &str) -> Result<Report> {
    let (source, tol) = load(cli, arg)?;
    let mut report = Report::new("verify-n11", source.descriptor());
    report.option("tol", format!("{:e}", tol.eq_tol));
    let data = match &source {
        Source::Geometry(ex) => {
            report.note(format!("data: extension of {} with its gallery connection", ex.name));
            extend(&ex.geometry, &ex.connection, HodgeChoice::default()).candidate
        }
        Source::N11(_, d) => d.clone(),
        Source::File(_, spec) => {
            let algebra = file_algebra(spec, tol)?;
            N11Data::from_pair(
                algebra,
                spec.require("dirac")?.clone(),
                spec.require("dirac_bar")?.clone(),
                spec.require("gamma")?.clone(),
                spec.require("hodge")?.clone(),
            )?
        }
    };
    report.checks.extend(verify_n11(&data, tol));
    Ok(report)
}

/// The geometry of an input with the requested connection, after checking
/// that it is a real even triple. `None` means the precondition failed and
/// `report` says why.
fn prepare(
    source: &Source,
    conn: &ConnectionArgs,
    rng: &mut ChaCha8Rng,
    tol: Tolerance,
    report: &mut Report,
    label: &str,
) -> Result<Option<Example>> {
    let mut pre = Report::new("", "");
    let (mut ex, alpha) = match source {
        Source::N11(name, _) => bail!("{name} is N=(1,1) data, not a triple to extend"),
        Source::Geometry(ex) => {
            verify_triple(&ex.geometry.data, Some(ex.geometry.real.j.clone()), tol, &mut pre);
            let mut ex = (**ex).clone();
            if conn.connection == ConnectionArg::Grassmann {
                ex.connection = Connection::grassmann();
            }
            (Some(ex), None)
        }
        Source::File(path, spec) => {
            let data = file_n1(spec, tol)?;
            let Some(j) = spec.j.clone() else {
                bail!("{}: extension needs a real structure (`j` block)", path.display());
            };
            let rs = verify_triple(&data, Some(AntilinearOp::new(j)), tol, &mut pre);
            let ex = match rs {
                Some(rs) if pre.passed() => {
                    let module = HermitianModule::canonical(data.algebra.clone(), &data.gamma, tol)
                        .context("building the module")?;
                    Some(
                        Example::new(
                            &path.display().to_string(),
                            "from file",
                            data,
                            rs.j,
                            module,
                            Connection::grassmann(),
                            tol,
                        )
                        .context("building the geometry")?,
                    )
                }
                _ => None,
            };
            (ex, spec.perturbation)
        }
    };
    let failed: Vec<String> = pre.checks.failures().map(|c| c.id.clone()).collect();
    if !pre.passed() || ex.is_none() {
        report.checks.extend_prefixed(label, pre.checks);
        report.notes.extend(pre.notes);
        report.extra_failure = true;
        report.note(format!(
            "{label}: precondition failed ({}); extension not attempted",
            if failed.is_empty() { "real structure".to_string() } else { failed.join(", ") }
        ));
        return Ok(None);
    }
    if let Some(ex) = ex.as_mut() {
        if let Some(alpha) = conn.perturbation.or(alpha).filter(|&a| a != 0.0) {
            let extra = Connection::random_compatible(&ex.geometry, alpha, rng);
            ex.connection = ex.connection.plus(&extra);
        }
    }
    Ok(ex)
}

fn connection_options(report: &mut Report, cli: &Cli, conn: &ConnectionArgs) {
    let name = match conn.connection {
        ConnectionArg::Example => "example",
        ConnectionArg::Grassmann => "grassmann",
    };
    report.option("connection", name);
    if let Some(a) = conn.perturbation {
        report.option("perturbation", format!("{a:e}"));
    }
    report.option("seed", cli.seed);
}

fn extend_cmd(
    cli: &Cli,
    arg: &str,
    conn: &ConnectionArgs,
    hodge: HodgeArg,
    candidate: Option<&Path>,
) -> Result<Report> {
    let (source, tol) = load(cli, arg)?;
    let mut report = Report::new("extend", source.descriptor());
    report.option("tol", format!("{:e}", tol.eq_tol));
    connection_options(&mut report, cli, conn);
    report.option("hodge", hodge.to_possible_value().expect("no skipped values").get_name());
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let Some(ex) = prepare(&source, conn, &mut rng, tol, &mut report, "input")? else {
        return Ok(report);
    };
    let ext = extend(&ex.geometry, &ex.connection, hodge.into());
    report.note(format!(
        "E (x)_A E has dimension {} inside {}; form kernel {}",
        ext.candidate.dim(),
        ext.spaces.n * ext.spaces.n,
        ext.gram_kernel
    ));
    report.checks.extend(ext.checks);
    if let Some(path) = candidate {
        fs::write(path, write_n11(&ext.candidate)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report)
}

pub fn parse_variants(s: &str) -> Result<Vec<Variant>> {
    if s == "all" {
        return Ok(Variant::ALL.to_vec());
    }
    let mut out: Vec<Variant> = Vec::new();
    for part in s.split(',') {
        let v: Variant = part.trim().parse().map_err(|e: String| anyhow!(e))?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out.sort();
    Ok(out)
}

fn check_mult_cmd(cli: &Cli, first: &str, second: &str, conn: &ConnectionArgs, variants: &str) -> Result<Report> {
    let requested = parse_variants(variants)?;
    let (s1, tol1) = load(cli, first)?;
    let (s2, tol2) = load(cli, second)?;
    let tol = Tolerance {
        eq_tol: tol1.eq_tol.max(tol2.eq_tol),
        rank_tol: tol1.rank_tol.max(tol2.rank_tol),
    };
    let mut report = Report::new("check-mult", format!("{} and {}", s1.descriptor(), s2.descriptor()));
    report.option("tol", format!("{:e}", tol.eq_tol));
    connection_options(&mut report, cli, conn);
    let names: Vec<&str> = requested.iter().map(|v| v.name()).collect();
    report.option("variants", names.join(","));
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let e1 = prepare(&s1, conn, &mut rng, tol, &mut report, "first")?;
    let e2 = prepare(&s2, conn, &mut rng, tol, &mut report, "second")?;
    let (Some(e1), Some(e2)) = (e1, e2) else {
        return Ok(report);
    };
    let product = e1.product(&e2, tol).context("building the product geometry")?;
    let mult = match check_multiplicativity(&e1, &e2, &product, tol) {
        Ok(m) => m,
        Err(MultiplicativityError::Degenerate { which, kernel }) => {
            report.checks.push(Check::new(
                "mult.form-nondegenerate",
                format!("the form on the {which} extension is nondegenerate"),
                Closeness::new(kernel as f64, 0.0),
            ));
            return Ok(report);
        }
    };
    for (label, ext) in [("first", &mult.first), ("second", &mult.second), ("product", &mult.product)] {
        let failing = ext.checks.failures().count();
        if failing > 0 {
            report.note(format!("{label} extension fails {failing} of {} checks", ext.checks.len()));
        }
    }
    report.checks.extend(mult.checks.clone());
    let (c1, c2) = (&mult.first.candidate, &mult.second.candidate);
    let mut degenerate = Vec::new();
    for cmp in mult.variants.iter().filter(|c| requested.contains(&c.variant)) {
        let relation = Relation::classify(cmp.residual(), tol.eq_tol, WITNESS);
        let valid = verify_n11(&n11_product(c1, c2, cmp.variant), tol).all_pass();
        if cmp.variant != Variant::Main && relation != Relation::Unequal {
            degenerate.push(cmp.variant.name());
        }
        report.variants.push(VariantRow {
            variant: cmp.variant,
            dirac: cmp.dirac,
            dirac_bar: cmp.dirac_bar,
            relation,
            valid,
        });
    }
    if !degenerate.is_empty() {
        report.extra_failure = true;
        report.note(format!(
            "degenerate equality: {} not witnessed unequal (residual <= {WITNESS:e}) on this pair",
            degenerate.join(",")
        ));
    }
    Ok(report)
}

fn list_gallery(cli: &Cli) -> Result<Report> {
    let tol = tolerance(cli, None)?;
    let mut report = Report::new("list-gallery", "gallery");
    for ex in gallery::all(tol)? {
        report.examples.push(ExampleRow {
            name: ex.name.clone(),
            dim: ex.geometry.dim(),
            summary: ex.summary.clone(),
        });
    }
    for name in N11_NAMES {
        let Source::N11(_, d) = Source::resolve(name, tol)? else { unreachable!() };
        report.examples.push(ExampleRow {
            name: name.to_string(),
            dim: d.dim(),
            summary: "N=(1,1) data over C".to_string(),
        });
    }
    let pairs: Vec<String> = gallery::product_pairs().iter().map(|(a, b)| format!("{a}*{b}")).collect();
    report.note(format!("product pairs: {}", pairs.join(" ")));
    Ok(report)
}

/// Runs a command. Errors are input errors; failing checks are part of the
/// report.
pub fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::VerifyN1 { input } => verify_n1_cmd(cli, input),
        Command::VerifyN11 { input } => verify_n11_cmd(cli, input),
        Command::Extend {
            input,
            conn,
            hodge,
            candidate,
        } => extend_cmd(cli, input, conn, *hodge, candidate.as_deref()),
        Command::CheckMult {
            first,
            second,
            conn,
            variants,
        } => check_mult_cmd(cli, first, second, conn, variants),
        Command::ListGallery => list_gallery(cli),
    }
}

/// Runs a command and writes its report; returns the exit code.
pub fn execute(cli: &Cli) -> Result<i32> {
    let report = run(cli)?;
    let text = report.render();
    match &cli.output {
        Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(report.exit_code())
}
