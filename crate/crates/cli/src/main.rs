use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gt_super::patterns::{
    enumerate_basis_with, BasisIndex, BranchingRule, EnumerateOptions, GTPattern,
};
use gt_super::repmat::{generator_matrix, SparseRepMatrix};
use gt_super::verify::{default_suites, run_suite, Module, Suite, SuiteOptions};
use gt_super::weights::{
    classify_type1, classify_type2, decompose_unitary, HighestWeight, UnitaryClass,
};
use gt_super::Error;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "gtsuper",
    version,
    about = "Gelfand-Tsetlin bases and generator matrices for gl(m|n)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Type 1 / type 2 unitarity of a highest weight.
    Classify(ModuleArgs),
    /// The decomposition Λ = Λ₀ + γε + ωδ.
    Decompose(ModuleArgs),
    /// Enumerate the basis patterns.
    Basis(ModuleArgs),
    /// One generator matrix E_pq.
    Matrix {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// Every generator matrix, one per line.
    AllMatrices(ModuleArgs),
    /// Run verification suites and print one JSON report per suite.
    Verify {
        #[command(flatten)]
        module: ModuleArgs,
        /// Comma-separated suite names, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 100)]
        fixture_count: usize,
        #[arg(long, default_value = "7/3")]
        omega: String,
        /// Add elapsed milliseconds to each report.
        #[arg(long)]
        timing: bool,
    },
    /// Write the basis and all generator matrices into a directory.
    Export {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Args, Clone)]
struct ModuleArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Highest weight, e.g. "3,1|-1,-1".
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    max_dim: usize,
    #[arg(long, value_enum, default_value_t = Branching::Refined)]
    branching: Branching,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Mtx,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Branching {
    Literal,
    Refined,
}

enum Failure {
    Input(String),
    Verification,
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::Shape(_)
            | Error::NotDominant(_)
            | Error::NotUnitary(_)
            | Error::InvalidPattern(_)
            | Error::TooLarge(_)
            | Error::Precondition(_) => Failure::Input(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type Res<T> = Result<T, Failure>;

impl ModuleArgs {
    fn rule(&self) -> BranchingRule {
        match self.branching {
            Branching::Literal => BranchingRule::Literal,
            Branching::Refined => BranchingRule::Refined,
        }
    }

    fn highest_weight(&self) -> Res<HighestWeight> {
        let cleaned: String = self.weight.chars().filter(|c| !c.is_whitespace()).collect();
        let hw = HighestWeight::parse(&cleaned)?;
        if hw.m() != self.m || hw.n() != self.n {
            return Err(Failure::Input(format!(
                "weight {hw} has shape ({}|{}), expected ({}|{})",
                hw.m(),
                hw.n(),
                self.m,
                self.n
            )));
        }
        if self.format == Format::Mtx && self.mode != Mode::Float {
            return Err(Failure::Input("mtx output requires --mode float".into()));
        }
        Ok(hw)
    }

    fn basis(&self) -> Res<BasisIndex> {
        let hw = self.highest_weight()?;
        Ok(enumerate_basis_with(
            &hw,
            EnumerateOptions {
                rule: self.rule(),
                max_dim: Some(self.max_dim),
            },
        )?)
    }
}

fn class_json(c: UnitaryClass) -> serde_json::Value {
    match c {
        UnitaryClass::TypicalType1 => json!({"class": "TypicalType1"}),
        UnitaryClass::AtypicalType1 { mu } => json!({"class": "AtypicalType1", "witness": mu}),
        UnitaryClass::NotType1 => json!({"class": "NotType1"}),
    }
}

fn classify(a: &ModuleArgs, out: &mut impl Write) -> Res<()> {
    let hw = a.highest_weight()?;
    let t1 = classify_type1(&hw);
    let t2 = classify_type2(&hw);
    let dec = decompose_unitary(&hw).ok();
    match a.format {
        Format::Json => {
            let v =
                json!({"weight": hw, "type1": class_json(t1), "type2": t2, "decomposition": dec});
            writeln!(out, "{v}")?;
        }
        _ => {
            writeln!(out, "weight {hw}")?;
            writeln!(out, "type 1: {t1}")?;
            match t2.witness {
                Some(k) => writeln!(out, "type 2: unitary={} (witness k={k})", t2.unitary)?,
                None => writeln!(out, "type 2: unitary={}", t2.unitary)?,
            }
            if let Some(d) = dec {
                writeln!(
                    out,
                    "lambda0 {} gamma {} omega {}",
                    d.lambda0, d.gamma, d.omega
                )?;
            }
        }
    }
    Ok(())
}

fn decompose(a: &ModuleArgs, out: &mut impl Write) -> Res<()> {
    let hw = a.highest_weight()?;
    let d = decompose_unitary(&hw)?;
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&d).expect("serializable"))?,
        _ => writeln!(
            out,
            "lambda0 {} gamma {} omega {}",
            d.lambda0, d.gamma, d.omega
        )?,
    }
    Ok(())
}

fn basis(a: &ModuleArgs, out: &mut impl Write) -> Res<()> {
    let b = a.basis()?;
    match a.format {
        Format::Json => {
            for (i, p) in b.iter().enumerate() {
                writeln!(out, "{}", pattern_line(i, p))?;
            }
        }
        _ => {
            for (i, p) in b.iter().enumerate() {
                writeln!(out, "{i}\t{p}")?;
            }
        }
    }
    Ok(())
}

fn pattern_line(i: usize, p: &GTPattern) -> serde_json::Value {
    let mut v = serde_json::to_value(p).expect("pattern serializes");
    v["index"] = json!(i);
    v
}

fn write_matrix(mat: &SparseRepMatrix, a: &ModuleArgs, out: &mut impl Write) -> Res<()> {
    match (a.format, a.mode) {
        (Format::Mtx, _) => mat.write_matrix_market(out)?,
        (Format::Json, Mode::Exact) => writeln!(out, "{}", mat.to_json())?,
        (Format::Json, Mode::Float) => {
            let entries: Vec<_> = mat
                .entries
                .iter()
                .map(|(&(r, c), v)| json!({"row": r, "col": c, "value": v.to_f64()}))
                .collect();
            writeln!(
                out,
                "{}",
                json!({"dim": mat.dim, "p": mat.p, "q": mat.q, "entries": entries})
            )?;
        }
        (Format::Text, mode) => {
            writeln!(
                out,
                "E_{},{} dim {} nnz {}",
                mat.p,
                mat.q,
                mat.dim,
                mat.nnz()
            )?;
            for (&(r, c), v) in &mat.entries {
                match mode {
                    Mode::Exact => writeln!(out, "{r}\t{c}\t{v}")?,
                    Mode::Float => writeln!(out, "{r}\t{c}\t{}", v.to_f64())?,
                }
            }
        }
    }
    Ok(())
}

fn check_generator(b: &BasisIndex, p: usize, q: usize) -> Res<()> {
    let big = b.m() + b.n();
    if p == 0 || q == 0 || p > big || q > big {
        return Err(Failure::Input(format!(
            "generator E_{p},{q} outside 1..={big}"
        )));
    }
    Ok(())
}

fn matrix(a: &ModuleArgs, p: usize, q: usize, out: &mut impl Write) -> Res<()> {
    let b = a.basis()?;
    check_generator(&b, p, q)?;
    let mat = generator_matrix(&b, p, q)?;
    write_matrix(&mat, a, out)
}

fn all_matrices(a: &ModuleArgs, out: &mut impl Write) -> Res<()> {
    if a.format == Format::Mtx {
        return Err(Failure::Input(
            "all-matrices writes one stream; use export for Matrix Market files".into(),
        ));
    }
    let b = a.basis()?;
    let big = b.m() + b.n();
    for p in 1..=big {
        for q in 1..=big {
            write_matrix(&generator_matrix(&b, p, q)?, a, out)?;
        }
    }
    Ok(())
}

fn verify(
    a: &ModuleArgs,
    suites: &str,
    opts: SuiteOptions,
    timing: bool,
    out: &mut impl Write,
) -> Res<bool> {
    let hw = a.highest_weight()?;
    let list: Vec<Suite> = if suites == "all" {
        default_suites(&hw)
    } else {
        suites
            .split(',')
            .map(|s| Suite::parse(s.trim()))
            .collect::<Result<_, _>>()?
    };
    let b = a.basis()?;
    let md = Module::build(&hw, b.rule())?;
    let mut ok = true;
    for s in list {
        let r = run_suite(s, &md, &opts)?;
        ok &= r.pass;
        writeln!(out, "{}", r.to_json_line(timing))?;
        out.flush()?;
        if !timing {
            eprintln!(
                "{}: {} in {} ms",
                r.suite,
                if r.pass { "pass" } else { "FAIL" },
                r.elapsed.as_millis()
            );
        }
    }
    Ok(ok)
}

fn export(a: &ModuleArgs, dir: &Path) -> Res<()> {
    let b = a.basis()?;
    fs::create_dir_all(dir)?;
    let mut basis_out = BufWriter::new(fs::File::create(dir.join("basis.jsonl"))?);
    for (i, p) in b.iter().enumerate() {
        writeln!(basis_out, "{}", pattern_line(i, p))?;
    }
    basis_out.flush()?;
    let ext = match (a.format, a.mode) {
        (Format::Mtx, _) => "mtx",
        (Format::Json, _) => "json",
        (Format::Text, _) => "txt",
    };
    let big = b.m() + b.n();
    let mut files = Vec::new();
    for p in 1..=big {
        for q in 1..=big {
            let name = format!("E_{p}_{q}.{ext}");
            let mut f = BufWriter::new(fs::File::create(dir.join(&name))?);
            write_matrix(&generator_matrix(&b, p, q)?, a, &mut f)?;
            f.flush()?;
            files.push(name);
        }
    }
    let hw = b.highest_weight();
    let manifest = json!({
        "m": hw.m(),
        "n": hw.n(),
        "weight": hw,
        "dim": b.len(),
        "mode": if a.mode == Mode::Exact { "exact" } else { "float" },
        "matrices": files,
    });
    fs::write(dir.join("manifest.json"), format!("{manifest}\n"))?;
    Ok(())
}

fn configure_threads() -> Res<()> {
    let Ok(v) = std::env::var("GTSUPER_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Failure::Input(format!("GTSUPER_THREADS={v} is not a count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn run(cli: Cli) -> Res<()> {
    configure_threads()?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match &cli.command {
        Command::Classify(a) => classify(a, &mut out)?,
        Command::Decompose(a) => decompose(a, &mut out)?,
        Command::Basis(a) => basis(a, &mut out)?,
        Command::Matrix { module, p, q } => matrix(module, *p, *q, &mut out)?,
        Command::AllMatrices(a) => all_matrices(a, &mut out)?,
        Command::Verify {
            module,
            suite,
            samples,
            fixture_count,
            omega,
            timing,
        } => {
            let omega = gt_super::exactnum::parse_rational(omega)?;
            let opts = SuiteOptions {
                seed: module.seed,
                samples: *samples,
                fixture_count: *fixture_count,
                omega,
            };
            let ok = verify(module, suite, opts, *timing, &mut out)?;
            out.flush()?;
            if !ok {
                return Err(Failure::Verification);
            }
        }
        Command::Export { module, out_dir } => export(module, out_dir)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("invalid input: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
