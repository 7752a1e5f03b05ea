use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use obembed_core::embed::{
    check_certificate, synth_corollary, synth_thm1_with, synth_type1_with, EmbeddingCertificate, SynthParams,
    B2_CAVEAT,
};
use obembed_core::mcg::{
    blue_curves, default_humphries_system, is_torelli, normalize, open_book_homology, uses_only, CurveSystem, Homology,
    TwistWord,
};
use obembed_core::openbook::{catalog, CatalogEntry, OpenBook};
use obembed_core::verifier::VerifyConfig;
use obembed_core::{Error, Report};
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Semantic(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Semantic(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotType1(_)
            | Error::UsesNonBlueCurve(_)
            | Error::PatternNotFound(_)
            | Error::UnknownChain(_)
            | Error::Geometry(_) => Failure::Semantic(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// `println!` that ignores a closed stdout.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

type CliResult<T> = std::result::Result<T, Failure>;

#[derive(Parser, Debug)]
#[command(name = "obembed", version, about = "Contact open book embeddings: synthesis and numeric verification")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Master seed for all sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Samples per numeric obligation.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Tolerance override: `VALUE` (pullback) or `pullback|exactness|equality=VALUE`; repeatable.
    #[arg(long, global = true, value_name = "TOL")]
    tol: Vec<String>,
    /// Print JSON instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a surface monodromy word.
    Classify {
        /// Surface genus.
        #[arg(long)]
        genus: Option<usize>,
        /// Twist word such as `a1 b1^-1 e1^2`.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Curve system JSON (defaults to the Humphries system of `--genus`).
        #[arg(long)]
        system: Option<PathBuf>,
    },
    /// Synthesize an embedding certificate.
    Embed {
        #[command(subcommand)]
        kind: EmbedKind,
    },
    /// Check a certificate and write its report.
    Verify {
        /// Certificate JSON.
        cert: PathBuf,
        /// Report path (default: `<cert>.report.json`).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Full numeric configuration as JSON; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print a catalog open book as JSON.
    Catalog {
        #[command(subcommand)]
        entry: CatalogCmd,
    },
}

#[derive(Args, Debug)]
struct EmbedOpts {
    /// Write the certificate JSON here.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Isotopy parameter eps in (0, 1].
    #[arg(long, default_value_t = 0.2)]
    eps: f64,
    /// Isotopy parameter delta in (0, 1].
    #[arg(long, default_value_t = 0.2)]
    delta: f64,
}

#[derive(Subcommand, Debug)]
enum EmbedKind {
    /// Single sphere page: DT*S^n with twist power k into DT*S^{n+1} with power l.
    #[command(allow_negative_numbers = true)]
    Thm1 {
        /// Sphere dimension of the source page.
        #[arg(long)]
        n: usize,
        /// Source twist power.
        #[arg(long)]
        k: i64,
        /// Target twist power.
        #[arg(long)]
        l: i64,
        #[command(flatten)]
        opts: EmbedOpts,
    },
    /// Type-1 open book read from JSON (`-` for stdin).
    Type1 {
        /// Open book JSON path.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        opts: EmbedOpts,
    },
    /// Surface open book over the blue curves.
    Surface {
        /// Surface genus.
        #[arg(long)]
        genus: usize,
        /// Twist word such as `a1 b1^-1 e1^2`.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Write the certificate JSON here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
#[command(rename_all = "kebab-case")]
enum CatalogCmd {
    /// n plumbed copies of DT*S^1, each with a negative twist
    XiN {
        #[arg(long)]
        n: usize,
    },
    /// DT*S^1 with the squared twist
    Rp3,
    /// DT*S^{2m} with the k-th power twist, k odd
    #[command(allow_negative_numbers = true)]
    Ustilovsky {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: i64,
    },
    /// DT*S^n with a single positive twist
    StdSphere {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Serialize)]
struct Classification {
    genus: usize,
    word: String,
    normalized: String,
    type1: bool,
    torelli: bool,
    h1: Homology,
    #[serde(skip_serializing_if = "Option::is_none")]
    caveat: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn read_input(path: &Path) -> CliResult<String> {
    if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Usage(format!("stdin: {e}")))
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}

fn write_output(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_word(sys: &CurveSystem, text: &str) -> CliResult<TwistWord> {
    let w: TwistWord = text.parse()?;
    for name in w.mentioned_names() {
        sys.curve(&name)?;
    }
    Ok(w)
}

fn apply_globals(mut config: VerifyConfig, g: &Global) -> CliResult<VerifyConfig> {
    config.seed = g.seed;
    if let Some(s) = g.samples {
        config.samples = s;
    }
    for t in &g.tol {
        let (key, value) = t.split_once('=').unwrap_or(("pullback", t));
        let v: f64 = value.parse().map_err(|_| Failure::Usage(format!("bad tolerance `{t}`")))?;
        match key {
            "pullback" => config.tolerances.pullback = v,
            "exactness" => config.tolerances.exactness = v,
            "equality" => config.tolerances.equality = v,
            _ => return Err(Failure::Usage(format!("unknown tolerance `{key}`"))),
        }
    }
    config.validate()?;
    Ok(config)
}

fn classify(g: &Global, genus: Option<usize>, word: &str, system: Option<&Path>) -> CliResult<()> {
    let sys = match (system, genus) {
        (Some(p), _) => {
            let sys = CurveSystem::from_json(&read_input(p)?)?;
            if genus.is_some_and(|gn| gn != sys.genus()) {
                return Err(Failure::Usage(format!("--genus disagrees with system genus {}", sys.genus())));
            }
            sys
        }
        (None, Some(gn)) => default_humphries_system(gn)?,
        (None, None) => return Err(Failure::Usage("classify needs --genus or --system".into())),
    };
    let w = parse_word(&sys, word)?;
    let type1 = uses_only(&w, &blue_curves(sys.genus()));
    let caveat = w.mentioned_names().iter().any(|c| c == "b2").then(|| B2_CAVEAT.to_string());
    let torelli = is_torelli(&sys, &w)?;
    let note = torelli.then(|| {
        format!(
            "Torelli monodromy acts trivially on H1, so H1 of the open book is Z^{}; it is not a homology sphere",
            2 * sys.genus()
        )
    });
    let c = Classification {
        genus: sys.genus(),
        word: w.to_string(),
        normalized: normalize(&sys, &w).to_string(),
        type1,
        torelli,
        h1: open_book_homology(&sys, &w)?,
        caveat,
        note,
    };
    if g.json {
        out!("{}", serde_json::to_string_pretty(&c).expect("serializable"));
    } else {
        let yn = |b: bool| if b { "yes" } else { "no" };
        out!("genus: {}", c.genus);
        out!("word: {}", c.word);
        out!("normalized: {}", c.normalized);
        out!("type1: {}", yn(c.type1));
        out!("torelli: {}", yn(c.torelli));
        out!("H1: {} (free rank {})", c.h1, c.h1.free_rank);
        if let Some(caveat) = &c.caveat {
            out!("caveat: {caveat}");
        }
        if let Some(note) = &c.note {
            out!("note: {note}");
        }
    }
    Ok(())
}

fn embed(g: &Global, kind: &EmbedKind) -> CliResult<()> {
    let params = |o: &EmbedOpts| SynthParams { eps: o.eps, delta: o.delta, ..Default::default() };
    let (cert, emit) = match kind {
        EmbedKind::Thm1 { n, k, l, opts } => (synth_thm1_with(*n, *k, *l, &params(opts))?, &opts.emit),
        EmbedKind::Type1 { input, opts } => {
            let ob = OpenBook::from_json(&read_input(input)?)?;
            (synth_type1_with(&ob, &params(opts))?, &opts.emit)
        }
        EmbedKind::Surface { genus, word, emit } => {
            let sys = default_humphries_system(*genus)?;
            (synth_corollary(*genus, &parse_word(&sys, word)?)?, emit)
        }
    };
    let json = cert.to_json();
    if let Some(path) = emit {
        write_output(path, &json)?;
    }
    if g.json {
        out!("{json}");
    } else {
        out!("{}", cert.to_string().trim_end());
        if let Some(path) = emit {
            out!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn verify(g: &Global, cert_path: &Path, report: Option<&Path>, config: Option<&Path>) -> CliResult<Report> {
    let base = match config {
        Some(p) => serde_json::from_str(&read_input(p)?).map_err(|e| Failure::Usage(format!("config: {e}")))?,
        None => VerifyConfig::default(),
    };
    let config = apply_globals(base, g)?;
    let cert = EmbeddingCertificate::from_json(&read_input(cert_path)?)?;
    let r = check_certificate(&cert, &config)?;
    let report_path = report.map(Path::to_path_buf).unwrap_or_else(|| {
        let mut p = cert_path.as_os_str().to_owned();
        p.push(".report.json");
        PathBuf::from(p)
    });
    write_output(&report_path, &serde_json::to_string_pretty(&r).expect("serializable"))?;
    if g.json {
        out!("{}", serde_json::to_string_pretty(&r).expect("serializable"));
    } else {
        out!("{r}");
        out!("report: {}", report_path.display());
    }
    Ok(r)
}

fn run(cli: &Cli) -> CliResult<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Classify { genus, word, system } => classify(g, *genus, word, system.as_deref()),
        Command::Embed { kind } => embed(g, kind),
        Command::Verify { cert, report, config } => {
            let r = verify(g, cert, report.as_deref(), config.as_deref())?;
            if r.passed() {
                Ok(())
            } else {
                let names: Vec<&str> = r.failures().map(|o| o.name.as_str()).collect();
                Err(Failure::Semantic(format!("failed obligations: {}", names.join(", "))))
            }
        }
        Command::Catalog { entry } => {
            let entry = match *entry {
                CatalogCmd::XiN { n } => CatalogEntry::XiN { n },
                CatalogCmd::Rp3 => CatalogEntry::Rp3,
                CatalogCmd::Ustilovsky { m, k } => CatalogEntry::Ustilovsky { m, k },
                CatalogCmd::StdSphere { n } => CatalogEntry::StdSphere { n },
            };
            out!("{}", catalog(&entry)?.to_json());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
