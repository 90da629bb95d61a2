mod codec;
mod report;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use hainfty::error::Error as LibError;
use hainfty::fixtures;
use hainfty::graded::BasisElement;
use hainfty::hainf::{HAInfStructure, VerifyReport};
use hainfty::hlinf::{self, HLInfStructure};
use hainfty::hochschild::{self, DeformationSeries};
use hainfty::multiop::{Budget, SparseVec};
use hainfty::transfer::{self, Contraction};
use hainfty::twoterm;

use report::Report;

/// Exact-arithmetic toolkit for strongly homotopy hom-associative and
/// hom-Lie algebras: verification, cohomology, transfer, deformations,
/// and two-term structures, over files of exact rationals.
#[derive(Parser)]
#[command(name = "hainfty", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Evaluation budget in basis-tuple evaluations.
    #[arg(long, default_value_t = Budget::DEFAULT_LIMIT)]
    budget: u64,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, ValueEnum)]
enum VerifyFlavor {
    Auto,
    Ha,
    Hl,
    Twoterm,
    Crossed,
    Homass2,
    Contraction,
}

#[derive(Copy, Clone, ValueEnum)]
enum GenerateKind {
    /// Truncated polynomial algebra with its product twisted along x ↦ qx.
    YauTwist,
    /// Two-degree DG algebra with differential and scaling twist.
    Dg,
    /// Contraction of the DG fixture onto its homology.
    Contraction,
    /// Two-term structure with zero differential and a cocycle ternary map.
    Skeletal,
    /// Two-term structure with identity differential and no ternary map.
    Strict,
}

#[derive(Copy, Clone, ValueEnum)]
enum TwotermAction {
    Verify,
    Classify,
    Equiv,
    Crossed,
    To2alg,
    From2alg,
}

#[derive(Subcommand)]
enum Command {
    /// Check the defining identities of a structure file.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = VerifyFlavor::Auto)]
        flavor: VerifyFlavor,
        /// Largest identity (number of inputs) to evaluate.
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Emit a fixture structure file; it is re-verified before writing.
    Generate {
        kind: GenerateKind,
        /// Scaling parameter of the twisting map.
        #[arg(long, default_value_t = 2)]
        q: i64,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
        /// For `contraction`: the identity contraction instead of the
        /// homology retract.
        #[arg(long)]
        identity: bool,
        #[arg(short, long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Move a hom-associative structure between its two degree conventions.
    Shift {
        file: PathBuf,
        /// Shift down (suspended, degree −1 ops → operadic degrees k−2).
        #[arg(long)]
        down: bool,
        #[arg(short, long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Cohomology dimensions with a rank audit; Hochschild-type complex for
    /// "ha" files, Chevalley–Eilenberg for "hl" files.
    Cohomology {
        file: PathBuf,
        /// Inclusive cochain-degree range, e.g. 1..3.
        #[arg(long, default_value = "1..3")]
        n: String,
        #[command(flatten)]
        common: Common,
    },
    /// Verify a formal deformation order-by-order and judge its obstruction.
    Deform {
        file: PathBuf,
        /// Series file with the higher-order terms; omitted = trivial series.
        #[arg(long)]
        terms: Option<PathBuf>,
        /// Target order when extending.
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Solve for the next term while the obstruction class vanishes.
        #[arg(long)]
        extend: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Transfer a structure along a contraction and verify the result.
    Transfer {
        file: PathBuf,
        #[arg(long)]
        contraction: PathBuf,
        /// Use the all-arity correction formula instead of the tree formula
        /// for differential graded inputs.
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = 4)]
        verify_arity: usize,
        #[arg(short, long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Skew-symmetrize a hom-associative structure into a hom-Lie one.
    Skewsym {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        verify_arity: usize,
        #[arg(short, long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Two-term structures: verify, classify, compare, and convert.
    Twoterm {
        action: TwotermAction,
        files: Vec<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Verify a crossed module; with -o, convert it to a strict two-term
    /// structure.
    Crossed {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<LibError> for Failure {
    fn from(e: LibError) -> Self {
        let code = match e {
            LibError::BudgetExceeded { .. } => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Failure { code: 2, message }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((report, format)) => {
            print!("{}", report.render(matches!(format, Format::Json)));
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })?;
    serde_json::from_str(&text)
        .map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })
}

/// Every emitted file must pass its own verify command before it is written.
fn write_value(path: &Path, v: &Value) -> Result<(), Failure> {
    fs::write(path, codec::canonical(v))?;
    Ok(())
}

fn tuple_str(t: &[BasisElement]) -> String {
    let parts: Vec<String> = t.iter().map(|e| format!("({},{})", e.degree, e.index)).collect();
    parts.join("⊗")
}

fn vec_str(v: &SparseVec) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = v
        .iter()
        .map(|(e, c)| format!("{}·({},{})", codec::rat_str(c), e.degree, e.index))
        .collect();
    parts.join(" + ")
}

fn identity_checks(report: &mut Report, vr: &VerifyReport, n_max: usize) {
    let mut by_n: BTreeMap<usize, String> = BTreeMap::new();
    for f in &vr.failures {
        by_n.entry(f.n).or_insert_with(|| {
            format!("inputs {} leave residual {}", tuple_str(&f.inputs), vec_str(&f.residual))
        });
    }
    for n in 1..=n_max {
        match by_n.get(&n) {
            Some(w) => report.check(&format!("identity n={n}"), false, Some(w.clone())),
            None => report.check(&format!("identity n={n}"), true, None),
        }
    }
}

fn string_checks(report: &mut Report, name: &str, failures: &[String]) {
    if failures.is_empty() {
        report.check(name, true, None);
    } else {
        for f in failures {
            report.check(name, false, Some(f.clone()));
        }
    }
}

fn run(cmd: Command) -> Result<(Report, Format), Failure> {
    match cmd {
        Command::Verify { file, flavor, max_arity, common } => {
            cmd_verify(&file, flavor, max_arity, common)
        }
        Command::Generate { kind, q, max_arity, identity, out, common } => {
            cmd_generate(kind, q, max_arity, identity, &out, common)
        }
        Command::Shift { file, down, out, common } => cmd_shift(&file, down, &out, common),
        Command::Cohomology { file, n, common } => cmd_cohomology(&file, &n, common),
        Command::Deform { file, terms, order, extend, out, common } => {
            cmd_deform(&file, terms.as_deref(), order, extend, out.as_deref(), common)
        }
        Command::Transfer { file, contraction, full, verify_arity, out, common } => {
            cmd_transfer(&file, &contraction, full, verify_arity, &out, common)
        }
        Command::Skewsym { file, verify_arity, out, common } => {
            cmd_skewsym(&file, verify_arity, &out, common)
        }
        Command::Twoterm { action, files, out, common } => {
            cmd_twoterm(action, &files, out.as_deref(), common)
        }
        Command::Crossed { file, out, common } => cmd_crossed(&file, out.as_deref(), common),
    }
}

fn structure_summary(report: &mut Report, space: &hainfty::graded::GradedSpace, max_arity: usize) {
    let dims: Vec<String> =
        space.dims().iter().map(|(deg, dim)| format!("{deg}:{dim}")).collect();
    report.note("dims", dims.join(" "));
    report.note("total_dim", space.total_dim());
    report.note("max_arity", max_arity);
}

fn cmd_verify(
    file: &Path,
    flavor: VerifyFlavor,
    max_arity: usize,
    common: Common,
) -> Result<(Report, Format), Failure> {
    let v = load(file)?;
    let kind = match flavor {
        VerifyFlavor::Auto => codec::kind_of(&v)?,
        VerifyFlavor::Ha => "ha".into(),
        VerifyFlavor::Hl => "hl".into(),
        VerifyFlavor::Twoterm => "twoterm".into(),
        VerifyFlavor::Crossed => "crossed".into(),
        VerifyFlavor::Homass2 => "homass2".into(),
        VerifyFlavor::Contraction => "contraction".into(),
    };
    let mut report = Report::new(&format!("verify {} ({kind})", file.display()));
    let mut budget = Budget::new(common.budget);
    match kind.as_str() {
        "ha" => {
            let s = codec::ha_from_json(&v)?;
            structure_summary(&mut report, s.space(), s.max_arity());
            report.note("shifted", s.is_shifted());
            let vr = s.verify(max_arity, &mut budget)?;
            identity_checks(&mut report, &vr, max_arity);
        }
        "hl" => {
            let s = codec::hl_from_json(&v)?;
            structure_summary(&mut report, s.space(), s.max_arity());
            let vr = s.verify(max_arity, &mut budget)?;
            identity_checks(&mut report, &vr, max_arity);
        }
        "twoterm" => {
            let t = codec::twoterm_from_json(&v)?;
            report.note("dims", format!("A0:{} A1:{}", t.dim0(), t.dim1()));
            report.note("shape", if t.is_skeletal() { "skeletal" } else if t.is_strict() { "strict" } else { "general" });
            string_checks(&mut report, "two-term axioms", &twoterm::verify_twoterm(&t).failures);
        }
        "crossed" => {
            let c = codec::crossed_from_json(&v)?;
            string_checks(&mut report, "crossed-module axioms", &twoterm::verify_crossed(&c)?.failures);
        }
        "homass2" => {
            let c = codec::homass2_from_json(&v)?;
            string_checks(&mut report, "2-algebra axioms", &twoterm::verify_homass2(&c)?.failures);
        }
        "contraction" => {
            let c = codec::contraction_from_json(&v)?;
            string_checks(
                &mut report,
                "contraction identities",
                &transfer::verify_contraction(&c, &mut budget)?.failures,
            );
        }
        other => return Err(format!("unknown structure kind {other:?}").into()),
    }
    report.finish(budget.used());
    Ok((report, common.format))
}

fn cmd_generate(
    kind: GenerateKind,
    q: i64,
    max_arity: usize,
    identity: bool,
    out: &Path,
    common: Common,
) -> Result<(Report, Format), Failure> {
    let mut report = Report::new(&format!("generate → {}", out.display()));
    let mut budget = Budget::new(common.budget);
    let value = match kind {
        GenerateKind::YauTwist | GenerateKind::Dg => {
            let s = match kind {
                GenerateKind::YauTwist => fixtures::yau_poly(q, max_arity),
                _ => fixtures::dg_twisted(q, max_arity),
            };
            structure_summary(&mut report, s.space(), s.max_arity());
            let vr = s.verify(max_arity + 1, &mut budget)?;
            report.check("generated structure verifies", vr.passed(), None);
            codec::ha_to_json(&s)
        }
        GenerateKind::Contraction => {
            let c = if identity {
                let d = fixtures::dg_assoc(2).op(1).cloned().expect("fixture differential");
                Contraction::identity(d, fixtures::dg_alpha(q))?
            } else {
                fixtures::dg_contraction(q)
            };
            let cr = transfer::verify_contraction(&c, &mut budget)?;
            report.check("generated contraction verifies", cr.passed(), None);
            codec::contraction_to_json(&c)
        }
        GenerateKind::Skeletal | GenerateKind::Strict => {
            let t = match kind {
                GenerateKind::Skeletal => fixtures::skeletal_twoterm(q),
                _ => fixtures::strict_twoterm(q),
            };
            let ar = twoterm::verify_twoterm(&t);
            report.check("generated structure verifies", ar.passed(), None);
            codec::twoterm_to_json(&t)
        }
    };
    if report.passed() {
        write_value(out, &value)?;
        report.note("wrote", out.display());
    }
    report.finish(budget.used());
    Ok((report, common.format))
}

fn cmd_shift(
    file: &Path,
    down: bool,
    out: &Path,
    common: Common,
) -> Result<(Report, Format), Failure> {
    let v = load(file)?;
    let s = codec::ha_from_json(&v)?;
    let mut report = Report::new(&format!("shift {}", file.display()));
    let mut budget = Budget::new(common.budget);
    let shifted = if down { s.to_unshifted()? } else { s.to_shifted()? };
    structure_summary(&mut report, shifted.space(), shifted.max_arity());
    report.note("shifted", shifted.is_shifted());
    let vr = shifted.verify(shifted.max_arity() + 1, &mut budget)?;
    identity_checks(&mut report, &vr, shifted.max_arity() + 1);
    // the shift must be invertible on the nose
    let back = if down { shifted.to_shifted()? } else { shifted.to_unshifted()? };
    report.check("shift is invertible", back == s, None);
    if report.passed() {
        write_value(out, &codec::ha_to_json(&shifted))?;
        report.note("wrote", out.display());
    }
    report.finish(budget.used());
    Ok((report, common.format))
}

fn parse_range(n: &str) -> Result<(usize, usize), Failure> {
    let (a, b) = n
        .split_once("..")
        .ok_or_else(|| format!("range must look like 1..3, got {n:?}"))?;
    let a: usize = a.parse().map_err(|e| format!("bad range start: {e}"))?;
    let b: usize = b.parse().map_err(|e| format!("bad range end: {e}"))?;
    if a == 0 || b < a {
        return Err("range must be 1-based and nondecreasing".to_string().into());
    }
    Ok((a, b))
}

fn cmd_cohomology(file: &Path, n: &str, common: Common) -> Result<(Report, Format), Failure> {
    let v = load(file)?;
    let kind = codec::kind_of(&v)?;
    let (a, b) = parse_range(n)?;
    let mut report = Report::new(&format!("cohomology {} n={a}..{b}", file.display()));
    let mut budget = Budget::new(common.budget);
    match kind.as_str() {
        "ha" => {
            let s = codec::ha_from_json(&v)?;
            structure_summary(&mut report, s.space(), s.max_arity());
            report.note("complex", "hochschild");
            // one basis per degree and one differential per consecutive
            // pair; dims, ranks, and δ² audits all come from those
            let mut bases = Vec::new();
            for deg in a..=b + 1 {
                bases.push(hochschild::cochain_basis(&s, deg, &mut budget)?);
            }
            let mut diffs = Vec::new();
            for w in bases.windows(2) {
                diffs.push(hochschild::differential_in_bases(&s, &w[0], &w[1], &mut budget)?);
            }
            let rank_below = if a >= 2 {
                let bp = hochschild::cochain_basis(&s, a - 1, &mut budget)?;
                hochschild::differential_in_bases(&s, &bp, &bases[0], &mut budget)?.rank()
            } else {
                0
            };
            audit_complex(&mut report, a, rank_below, &bases.iter().map(|x| x.len()).collect::<Vec<_>>(), &diffs)?;
        }
        "hl" => {
            let s = codec::hl_from_json(&v)?;
            structure_summary(&mut report, s.space(), s.max_arity());
            report.note("complex", "chevalley-eilenberg");
            let mut bases = Vec::new();
            for deg in a..=b + 1 {
                bases.push(hlinf::ce_cochain_basis(&s, deg, &mut budget)?);
            }
            let mut diffs = Vec::new();
            for w in bases.windows(2) {
                diffs.push(hlinf::ce_differential_in_bases(&s, &w[0], &w[1], &mut budget)?);
            }
            let rank_below = if a >= 2 {
                let bp = hlinf::ce_cochain_basis(&s, a - 1, &mut budget)?;
                hlinf::ce_differential_in_bases(&s, &bp, &bases[0], &mut budget)?.rank()
            } else {
                0
            };
            audit_complex(&mut report, a, rank_below, &bases.iter().map(|x| x.len()).collect::<Vec<_>>(), &diffs)?;
        }
        other => return Err(format!("cohomology expects an ha or hl file, got {other:?}").into()),
    }
    report.finish(budget.used());
    Ok((report, common.format))
}

/// Report Hⁿ dimensions and check δ² = 0 given the cochain dimensions for
/// degrees a..=a+k and the differentials between them.
fn audit_complex(
    report: &mut Report,
    a: usize,
    rank_below: usize,
    dims: &[usize],
    diffs: &[hainfty::linalg::Matrix],
) -> Result<(), Failure> {
    let mut rank_in = rank_below;
    for (i, d) in diffs.iter().enumerate() {
        let deg = a + i;
        let rank_out = d.rank();
        report.note(
            &format!("H^{deg}"),
            format!(
                "dim {} (cochains {}, rank in {}, rank out {})",
                dims[i] - rank_in - rank_out,
                dims[i],
                rank_in,
                rank_out
            ),
        );
        if i + 1 < diffs.len() {
            report.check(
                &format!("delta^2 vanishes on C^{deg}"),
                diffs[i + 1].mat_mul(d)?.is_zero(),
                None,
            );
        }
        rank_in = rank_out;
    }
    Ok(())
}

enum EitherStructure {
    Ha(HAInfStructure),
    Hl(HLInfStructure),
}

fn cmd_deform(
    file: &Path,
    terms: Option<&Path>,
    order: usize,
    extend: bool,
    out: Option<&Path>,
    common: Common,
) -> Result<(Report, Format), Failure> {
    let v = load(file)?;
    let kind = codec::kind_of(&v)?;
    let mut report = Report::new(&format!("deform {}", file.display()));
    let mut budget = Budget::new(common.budget);
    let s = match kind.as_str() {
        "ha" => EitherStructure::Ha(codec::ha_from_json(&v)?),
        "hl" => EitherStructure::Hl(codec::hl_from_json(&v)?),
        other => return Err(format!("deform expects an ha or hl file, got {other:?}").into()),
    };
    let base = match &s {
        EitherStructure::Ha(s) => s.to_coderivation()?,
        EitherStructure::Hl(s) => s.to_sym_coderivation()?,
    };
    let term_list = match terms {
        Some(path) => codec::series_from_json(&load(path)?)?,
        None => Vec::new(),
    };
    let mut ds = DeformationSeries::new(base, term_list)?;
    report.note("order", ds.order());

    let dr = hochschild::verify_deformation(&ds, &mut budget)?;
    for oc in &dr.orders {
        report.check(&format!("series vanishes at order {}", oc.order), oc.passed, None);
    }
    let cocycle = match &s {
        EitherStructure::Ha(s) => hochschild::obstruction(&ds, s, &mut budget)?.1,
        EitherStructure::Hl(s) => hlinf::hl_obstruction(&ds, s, &mut budget)?.1,
    };
    report.check("obstruction is a cocycle", cocycle, None);

    if extend && report.passed() {
        while ds.order() < order {
            let next = match &s {
                EitherStructure::Ha(s) => hochschild::extend_deformation(&ds, s, &mut budget)?,
                EitherStructure::Hl(s) => hlinf::hl_extend_deformation(&ds, s, &mut budget)?,
            };
            match next {
                Some(ext) => {
                    report.check(&format!("extended to order {}", ext.order()), true, None);
                    ds = ext;
                }
                None => {
                    report.check(
                        &format!("extended to order {}", ds.order() + 1),
                        false,
                        Some("the obstruction class is nonzero".into()),
                    );
                    break;
                }
            }
        }
        if report.passed() {
            let dr = hochschild::verify_deformation(&ds, &mut budget)?;
            report.check("extended series verifies", dr.passed(), None);
        }
    }
    if let Some(path) = out {
        if report.passed() {
            write_value(path, &codec::series_to_json(ds.terms()))?;
            report.note("wrote", path.display());
        }
    }
    report.finish(budget.used());
    Ok((report, common.format))
}

fn cmd_transfer(
    file: &Path,
    contraction: &Path,
    full: bool,
    verify_arity: usize,
    out: &Path,
    common: Common,
) -> Result<(Report, Format), Failure> {
    let s = codec::ha_from_json(&load(file)?)?;
    let c = codec::contraction_from_json(&load(contraction)?)?;
    let mut report = Report::new(&format!("transfer {}", file.display()));
    let mut budget = Budget::new(common.budget);
    let cr = transfer::verify_contraction(&c, &mut budget)?;
    string_checks(&mut report, "contraction identities", &cr.failures);
    if report.passed() {
        let t = if full {
            transfer::transfer_from_hainf(&s, &c, s.max_arity(), &mut budget)?
        } else {
            transfer::transfer_from_dga(&s, &c, s.max_arity(), &mut budget)?
        };
        structure_summary(&mut report, t.space(), t.max_arity());
        let vr = t.verify(verify_arity, &mut budget)?;
        identity_checks(&mut report, &vr, verify_arity);
        if report.passed() {
            write_value(out, &codec::ha_to_json(&t))?;
            report.note("wrote", out.display());
        }
    }
    report.finish(budget.used());
    Ok((report, common.format))
}

fn cmd_skewsym(
    file: &Path,
    verify_arity: usize,
    out: &Path,
    common: Common,
) -> Result<(Report, Format), Failure> {
    let s = codec::ha_from_json(&load(file)?)?;
    let mut report = Report::new(&format!("skewsym {}", file.display()));
    let mut budget = Budget::new(common.budget);
    let hl = hlinf::skew_symmetrize(&s, &mut budget)?;
    structure_summary(&mut report, hl.space(), hl.max_arity());
    let vr = hl.verify(verify_arity, &mut budget)?;
    identity_checks(&mut report, &vr, verify_arity);
    if report.passed() {
        write_value(out, &codec::hl_to_json(&hl))?;
        report.note("wrote", out.display());
    }
    report.finish(budget.used());
    Ok((report, common.format))
}

fn one_file(files: &[PathBuf], action: &str) -> Result<PathBuf, Failure> {
    match files {
        [f] => Ok(f.clone()),
        _ => Err(format!("twoterm {action} takes exactly one file").into()),
    }
}

fn cmd_twoterm(
    action: TwotermAction,
    files: &[PathBuf],
    out: Option<&Path>,
    common: Common,
) -> Result<(Report, Format), Failure> {
    let mut report;
    match action {
        TwotermAction::Verify => {
            let file = one_file(files, "verify")?;
            let t = codec::twoterm_from_json(&load(&file)?)?;
            report = Report::new(&format!("twoterm verify {}", file.display()));
            string_checks(&mut report, "two-term axioms", &twoterm::verify_twoterm(&t).failures);
        }
        TwotermAction::Classify => {
            let file = one_file(files, "classify")?;
            let t = codec::twoterm_from_json(&load(&file)?)?;
            report = Report::new(&format!("twoterm classify {}", file.display()));
            let c = twoterm::skeletal_to_cocycle(&t)
                .map_err(|e| Failure { code: 2, message: e.to_string() })?;
            report.note("cochain_degree", c.degree);
            report.note("algebra_dim", c.algebra.dim());
            report.note("bimodule_dim", c.bimodule.dim());
            report.check("ternary map is a cocycle", c.is_cocycle, None);
            if let Some(path) = out {
                if report.passed() {
                    let v = serde_json::json!({
                        "kind": "classification",
                        "degree": c.degree,
                        "algebra": {
                            "dim": c.algebra.dim(),
                            "mu": codec::matrix_to_json(c.algebra.mu()),
                            "alpha": codec::matrix_to_json(c.algebra.alpha()),
                        },
                        "bimodule": {
                            "dim": c.bimodule.dim(),
                            "beta": codec::matrix_to_json(c.bimodule.beta()),
                            "left": codec::matrix_to_json(c.bimodule.left()),
                            "right": codec::matrix_to_json(c.bimodule.right()),
                        },
                        "theta": codec::matrix_to_json(&c.theta),
                    });
                    write_value(path, &v)?;
                    report.note("wrote", path.display());
                }
            }
        }
        TwotermAction::Equiv => {
            let (f1, f2) = match files {
                [a, b] => (a, b),
                _ => return Err("twoterm equiv takes exactly two files".to_string().into()),
            };
            let t1 = codec::twoterm_from_json(&load(f1)?)?;
            let t2 = codec::twoterm_from_json(&load(f2)?)?;
            report =
                Report::new(&format!("twoterm equiv {} {}", f1.display(), f2.display()));
            match twoterm::skeletal_equivalence(&t1, &t2)? {
                Some(iso) => {
                    let w = serde_json::to_string(&codec::matrix_to_json(&iso))
                        .expect("matrix serializes");
                    report.check("structures are equivalent", true, Some(format!("sigma = {w}")));
                }
                None => report.check(
                    "structures are equivalent",
                    false,
                    Some("the ternary maps are not cohomologous".into()),
                ),
            }
        }
        TwotermAction::Crossed => {
            let file = one_file(files, "crossed")?;
            let t = codec::twoterm_from_json(&load(&file)?)?;
            report = Report::new(&format!("twoterm crossed {}", file.display()));
            let c = twoterm::strict_to_crossed(&t)?;
            string_checks(
                &mut report,
                "crossed-module axioms",
                &twoterm::verify_crossed(&c)?.failures,
            );
            report.check(
                "conversion round-trips",
                twoterm::crossed_to_strict(&c)? == t,
                None,
            );
            if let Some(path) = out {
                if report.passed() {
                    write_value(path, &codec::crossed_to_json(&c))?;
                    report.note("wrote", path.display());
                }
            }
        }
        TwotermAction::To2alg => {
            let file = one_file(files, "to2alg")?;
            let t = codec::twoterm_from_json(&load(&file)?)?;
            report = Report::new(&format!("twoterm to2alg {}", file.display()));
            let c = twoterm::t_functor(&t)?;
            string_checks(&mut report, "2-algebra axioms", &twoterm::verify_homass2(&c)?.failures);
            report.check("conversion round-trips", twoterm::s_functor(&c)? == t, None);
            if let Some(path) = out {
                if report.passed() {
                    write_value(path, &codec::homass2_to_json(&c))?;
                    report.note("wrote", path.display());
                }
            }
        }
        TwotermAction::From2alg => {
            let file = one_file(files, "from2alg")?;
            let c = codec::homass2_from_json(&load(&file)?)?;
            report = Report::new(&format!("twoterm from2alg {}", file.display()));
            let t = twoterm::s_functor(&c)?;
            string_checks(&mut report, "two-term axioms", &twoterm::verify_twoterm(&t).failures);
            if let Some(path) = out {
                if report.passed() {
                    write_value(path, &codec::twoterm_to_json(&t))?;
                    report.note("wrote", path.display());
                }
            }
        }
    }
    report.finish(0);
    Ok((report, common.format))
}

fn cmd_crossed(
    file: &Path,
    out: Option<&Path>,
    common: Common,
) -> Result<(Report, Format), Failure> {
    let c = codec::crossed_from_json(&load(file)?)?;
    let mut report = Report::new(&format!("crossed {}", file.display()));
    string_checks(&mut report, "crossed-module axioms", &twoterm::verify_crossed(&c)?.failures);
    if let Some(path) = out {
        let t = twoterm::crossed_to_strict(&c)?;
        string_checks(&mut report, "strict image axioms", &twoterm::verify_twoterm(&t).failures);
        if report.passed() {
            write_value(path, &codec::twoterm_to_json(&t))?;
            report.note("wrote", path.display());
        }
    }
    report.finish(0);
    Ok((report, common.format))
}
