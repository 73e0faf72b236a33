use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qs_core::braiding::{build_braiding, build_fusion, BraidMatrix};
use qs_core::skein::{
    braid_to_pd, kauffman_poly_with, parse_pd, OracleConfig, PlanarDiagram, SkeinError, SkeinParams,
    DEFAULT_RECURSION_LIMIT,
};
use qs_core::tangle::{parse_braid, writhe, BraidWord, Model, Tape};
use qs_core::thimble::{locate_wall, stokes_scan, ScanRow};
use qs_core::verify::{run_suite, run_suite_with, VerifyReport};
use qs_core::{make_spec, AlgebraSpec, Family, RingElement};

mod tabulate;

#[derive(Parser, Debug)]
#[command(name = "qs", version, about = "Braiding matrices, link invariants and Stokes scans")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Jsonl,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the exact identity suite over a range of ranks.
    Verify {
        #[arg(long)]
        family: Family,
        /// `n`, `a..b` or `a..=b`, inclusive either way.
        #[arg(long, value_parser = parse_ranks)]
        ranks: RangeInclusive<u32>,
        /// Perturb one critical-block entry before checking.
        #[arg(long, hide = true)]
        tamper: bool,
    },
    /// Tensor-contraction value of a braid closure or a tape file.
    Invariant {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        input: DiagramInput,
    },
    /// Tensor value against the skein oracle on the same diagram.
    Compare {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        braid: BraidArgs,
    },
    /// Skein-oracle value of a PD code file or a braid closure.
    Oracle {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, conflicts_with_all = ["braid", "strands"], required_unless_present = "braid")]
        pd: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true, requires = "strands")]
        braid: Option<String>,
        #[arg(long, requires = "braid")]
        strands: Option<usize>,
    },
    /// Append invariants of named braids to a JSONL store given by --out.
    Tabulate {
        #[command(flatten)]
        spec: SpecArgs,
        /// Lines of `name<TAB>strands<TAB>word`.
        #[arg(long)]
        input: PathBuf,
    },
    /// Thimble endpoints of the cubic model across a range of `a`, as CSV.
    Thimble {
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        b: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = -1.0)]
        from: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        to: f64,
        #[arg(long, default_value_t = 21, value_parser = clap::value_parser!(u32).range(1..=100_000))]
        steps: u32,
        /// Also bisect for the Stokes wall inside [from, to].
        #[arg(long)]
        wall: bool,
    },
}

#[derive(Args, Debug)]
struct SpecArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    rank: u32,
}

#[derive(Args, Debug)]
struct BraidArgs {
    /// Space-separated generators, `-j` for an inverse; empty for the unknot.
    #[arg(long, allow_hyphen_values = true)]
    braid: String,
    #[arg(long)]
    strands: usize,
}

#[derive(Args, Debug)]
struct DiagramInput {
    #[arg(long, allow_hyphen_values = true, conflicts_with = "tape", requires = "strands")]
    braid: Option<String>,
    #[arg(long, requires = "braid")]
    strands: Option<usize>,
    #[arg(long, required_unless_present = "braid")]
    tape: Option<PathBuf>,
}

/// Failure classes, each with its exit code.
#[derive(Debug)]
enum Failure {
    Verify(String),
    Usage(String),
    Parse(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify(_) | Failure::Runtime(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Parse(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verify(m) | Failure::Usage(m) | Failure::Parse(m) | Failure::Runtime(m) => m,
        }
    }
}

type Res<T> = Result<T, Failure>;

fn parse_ranks(s: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad rank {t:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = num(s)?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(lo..=hi)
}

fn spec_of(family: Family, rank: u32) -> Res<AlgebraSpec> {
    make_spec(family, rank).map_err(|e| Failure::Usage(e.to_string()))
}

fn model_of(args: &SpecArgs) -> Res<Model> {
    Model::new(spec_of(args.family, args.rank)?).map_err(|e| Failure::Runtime(e.to_string()))
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn braid(word: &str, strands: usize) -> Res<BraidWord> {
    parse_braid(word, strands).map_err(|e| Failure::Parse(format!("braid {word:?}: {e}")))
}

fn oracle_config() -> Res<OracleConfig> {
    let recursion_limit = match std::env::var("QS_RECURSION_LIMIT") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("QS_RECURSION_LIMIT must be a crossing count, got {v:?}")))?,
        Err(_) => DEFAULT_RECURSION_LIMIT,
    };
    Ok(OracleConfig {
        recursion_limit,
        ..OracleConfig::default()
    })
}

fn oracle(diagram: &PlanarDiagram, spec: &AlgebraSpec) -> Res<RingElement> {
    kauffman_poly_with(diagram, &SkeinParams::from_spec(spec), oracle_config()?).map_err(|e| match e {
        SkeinError::RecursionLimit { .. } => Failure::Runtime(format!("{e}; raise QS_RECURSION_LIMIT to allow it")),
        e => Failure::Parse(e.to_string()),
    })
}

/// Where primary output goes; stdout unless --out was given.
struct Sink {
    format: Format,
    out: Option<PathBuf>,
}

impl Sink {
    fn emit(&self, text: &str) -> Res<()> {
        match &self.out {
            Some(p) => fs::write(p, text).map_err(|e| Failure::Runtime(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    /// Records as pretty JSON (a lone record unwrapped unless `list`), JSONL,
    /// or the given text.
    fn records(&self, records: &[Value], list: bool, text: impl FnOnce() -> String) -> Res<()> {
        let body = match self.format {
            Format::Text => text(),
            Format::Json if records.len() == 1 && !list => pretty(&records[0]),
            Format::Json => pretty(&Value::Array(records.to_vec())),
            Format::Jsonl => records.iter().map(|r| format!("{r}\n")).collect(),
        };
        self.emit(&body)
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn tampered(spec: &AlgebraSpec, b: &BraidMatrix) -> BraidMatrix {
    let m = spec.m;
    let (src, skew) = (b.pair(0, m), b.pair(m, 0));
    let dst = b.row(src).iter().map(|(d, _)| *d).find(|&d| d != skew && b.split(d).0 + b.split(d).1 == m).unwrap_or(skew);
    b.with_entry(src, dst, &b.get(src, dst) + &RingElement::one())
}

fn cmd_verify(sink: &Sink, family: Family, ranks: RangeInclusive<u32>, tamper: bool) -> Res<()> {
    let mut reports: Vec<VerifyReport> = Vec::new();
    for n in ranks {
        let spec = spec_of(family, n)?;
        let report = if tamper {
            let fusion = build_fusion(&spec);
            let b = build_braiding(&spec, &fusion).map_err(|e| Failure::Runtime(e.to_string()))?;
            run_suite_with(&spec, &fusion, &tampered(&spec, &b))
        } else {
            run_suite(&spec)
        };
        reports.push(report);
    }
    let summary = || {
        let mut s = String::new();
        for r in &reports {
            let failed: Vec<&str> = r.failed().map(|c| c.name.as_str()).collect();
            if failed.is_empty() {
                s += &format!("{}: PASS ({} checks)\n", r.spec, r.checks.len());
            } else {
                s += &format!("{}: FAIL {}\n", r.spec, failed.join(", "));
                for c in r.failed() {
                    if let Some(ce) = &c.counterexample {
                        s += &format!("  {}: {ce}\n", c.name);
                    }
                }
            }
        }
        s
    };
    let json: Vec<Value> = reports.iter().map(VerifyReport::to_json).collect();
    if sink.out.is_some() {
        let file = Sink {
            format: if sink.format == Format::Jsonl { Format::Jsonl } else { Format::Json },
            out: sink.out.clone(),
        };
        file.records(&json, true, String::new)?;
        print!("{}", summary());
    } else {
        sink.records(&json, true, summary)?;
    }
    let bad: Vec<String> = reports
        .iter()
        .flat_map(|r| r.failed().map(move |c| format!("{}:{}", r.spec, c.name)))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verify(format!("failed checks: {}", bad.join(", "))))
    }
}

fn cmd_invariant(sink: &Sink, spec: &SpecArgs, input: &DiagramInput) -> Res<()> {
    let md = model_of(spec)?;
    let mut rec = json!({ "family": spec.family.to_string(), "rank": spec.rank });
    let text;
    if let Some(path) = &input.tape {
        let tape = Tape::parse(&read(path)?).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
        let raw = md.evaluate(&tape);
        text = format!("raw: {raw}\n");
        rec["raw"] = raw.to_json();
    } else {
        let word = input.braid.as_deref().unwrap_or_default();
        let b = braid(word, input.strands.unwrap_or(1))?;
        let raw = md.evaluate_braid(&b);
        let normalized = md.normalized_invariant(&b);
        text = format!("raw: {raw}\nnormalized: {normalized}\n");
        rec["braid"] = json!(word);
        rec["strands"] = json!(b.strands);
        rec["writhe"] = json!(writhe(&b));
        rec["raw"] = raw.to_json();
        rec["normalized"] = normalized.to_json();
    }
    sink.records(&[rec], false, || text)
}

fn cmd_compare(sink: &Sink, spec: &SpecArgs, args: &BraidArgs) -> Res<()> {
    let md = model_of(spec)?;
    let b = braid(&args.braid, args.strands)?;
    let tensor = md.evaluate_braid(&b);
    let skein = oracle(&braid_to_pd(&b), &md.spec)?;
    let equal = tensor == skein;
    let rec = json!({
        "family": spec.family.to_string(),
        "rank": spec.rank,
        "braid": args.braid,
        "strands": args.strands,
        "tensor": tensor.to_json(),
        "oracle": skein.to_json(),
        "equal": equal,
    });
    sink.records(&[rec], false, || {
        format!("tensor: {tensor}\noracle: {skein}\n{}\n", if equal { "equal" } else { "differ" })
    })?;
    if equal {
        Ok(())
    } else {
        Err(Failure::Verify(format!("tensor and oracle differ on {}", md.spec.id())))
    }
}

fn cmd_oracle(sink: &Sink, spec: &SpecArgs, pd: Option<&Path>, word: Option<&str>, strands: Option<usize>) -> Res<()> {
    let s = spec_of(spec.family, spec.rank)?;
    let diagram = match pd {
        Some(path) => parse_pd(&read(path)?).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?,
        None => braid_to_pd(&braid(word.unwrap_or_default(), strands.unwrap_or(1))?),
    };
    let value = oracle(&diagram, &s)?;
    let rec = json!({
        "family": spec.family.to_string(),
        "rank": spec.rank,
        "crossings": diagram.crossing_count(),
        "value": value.to_json(),
    });
    sink.records(&[rec], false, || format!("{value}\n"))
}

fn fmt_sectors(s: &[Option<usize>; 2]) -> String {
    s.iter().map(|x| x.map_or("-".to_string(), |v| v.to_string())).collect::<Vec<_>>().join(";")
}

fn row_json(r: &ScanRow) -> Value {
    json!({
        "a": r.a,
        "connected": r.connected,
        "j_plus": r.j_plus,
        "j_minus": r.j_minus,
        "max_im_drift": r.max_im_drift,
    })
}

fn cmd_thimble(sink: &Sink, b: f64, from: f64, to: f64, steps: u32, wall: bool) -> Res<()> {
    let grid: Vec<f64> = if steps == 1 {
        vec![from]
    } else {
        (0..steps).map(|k| from + (to - from) * k as f64 / (steps - 1) as f64).collect()
    };
    let rows = stokes_scan(&grid, b).map_err(|e| Failure::Usage(e.to_string()))?;
    let wall = if wall {
        locate_wall(b, from, to, 1e-6).map_err(|e| Failure::Runtime(e.to_string()))?
    } else {
        None
    };
    if let Some(w) = &wall {
        eprintln!("wall at a = {:.3e} (bracket {:e}..{:e})", w.a, w.bracket.0, w.bracket.1);
    }
    let recs: Vec<Value> = rows.iter().map(row_json).collect();
    let body = match sink.format {
        Format::Text => {
            let mut s = String::from("a,connected,j_plus,j_minus,max_im_drift\n");
            for r in &rows {
                s += &format!(
                    "{},{},{},{},{:.3e}\n",
                    r.a,
                    r.connected,
                    fmt_sectors(&r.j_plus),
                    fmt_sectors(&r.j_minus),
                    r.max_im_drift
                );
            }
            s
        }
        Format::Json => pretty(&json!({
            "b": b,
            "rows": recs,
            "wall": wall.map(|w| w.a),
        })),
        Format::Jsonl => recs.iter().map(|r| format!("{r}\n")).collect(),
    };
    sink.emit(&body)
}

fn run(cli: Cli) -> Res<()> {
    let sink = Sink {
        format: cli.format,
        out: cli.out.clone(),
    };
    match &cli.command {
        Command::Verify { family, ranks, tamper } => cmd_verify(&sink, *family, ranks.clone(), *tamper),
        Command::Invariant { spec, input } => cmd_invariant(&sink, spec, input),
        Command::Compare { spec, braid } => cmd_compare(&sink, spec, braid),
        Command::Oracle { spec, pd, braid, strands } => {
            cmd_oracle(&sink, spec, pd.as_deref(), braid.as_deref(), *strands)
        }
        Command::Tabulate { spec, input } => {
            let store = cli.out.as_deref().ok_or_else(|| Failure::Usage("tabulate needs --out STORE.jsonl".into()))?;
            let md = model_of(spec)?;
            let stats = tabulate::run(&md, &read(input)?, store).map_err(|e| Failure::Runtime(e.to_string()))?;
            println!("appended {}, already present {}, skipped {}", stats.appended, stats.present, stats.skipped);
            Ok(())
        }
        Command::Thimble { b, from, to, steps, wall } => cmd_thimble(&sink, *b, *from, *to, *steps, *wall),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = std::io::stdout().flush();
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
