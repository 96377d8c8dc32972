//! Command-line front end for `fibsub`.
//!
//! Everything goes through [`run`], which takes its argument list and I/O
//! handles explicitly so the commands can be driven from tests.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use fibsub::fibzeck::zeckendorf_encode;
use fibsub::grundy::{attained_values, grundy_sieve, period_scan, xor_closure, SubtractionSet};
use fibsub::theorem::{
    classify, verify_equivalence, verify_partition, PositionClass, VerificationReport,
};

mod play;

pub use play::play;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(io::Error),
    Invariant(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
            Failure::Invariant(_) => EXIT_INVARIANT,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Io(e) => write!(f, "I/O error: {e}"),
            Failure::Invariant(m) => write!(f, "invariant violation: {m}"),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<fibsub::Error> for Failure {
    fn from(e: fibsub::Error) -> Self {
        use fibsub::Error as E;
        match e {
            E::ValueOverflow { .. } | E::Unclassified(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<i32, Failure>;

#[derive(Debug, Parser)]
#[command(
    name = "fibsub",
    version,
    about = "Sprague-Grundy toolkit for the subtraction game {F(2n+1) - 1}"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sieve Grundy values for positions 0..=max and emit one record per position
    Sieve {
        #[arg(long, default_value_t = 100)]
        max: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Classify positions with the closed form (no sieve)
    Classify {
        #[arg(required = true)]
        positions: Vec<String>,
    },
    /// Compare closed form, sieve and set enumeration on 0..=max
    Verify {
        #[arg(long, default_value_t = 1_000_000)]
        max: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Check that B, B+1 and AB+1 partition 1..=max
    Partition {
        #[arg(long, default_value_t = 1_000_000)]
        max: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Search the sieved table for an eventual period
    Period {
        #[arg(long, default_value_t = 100_000)]
        max: u64,
        #[arg(long, default_value_t = 10_000)]
        max_period: u64,
        #[arg(long, default_value_t = 50_000)]
        max_preperiod: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Report the XOR group generated by the attained Grundy values
    Group {
        #[arg(long, default_value_t = 100)]
        max: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Play against the engine from one or more starting positions
    Play {
        #[arg(required = true)]
        positions: Vec<u64>,
        /// Let the engine make the first move
        #[arg(long)]
        engine_first: bool,
    },
    /// Measure sieve and closed-form throughput
    Bench {
        #[arg(long, default_value_t = 1_000_000)]
        max: u64,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { &mut *out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Sieve {
            max,
            format,
            out: path,
        } => match path {
            Some(path) => File::create(&path)
                .map_err(Failure::Io)
                .and_then(|f| cmd_sieve(max, format, &mut BufWriter::new(f))),
            None => cmd_sieve(max, format, out),
        },
        Command::Classify { positions } => cmd_classify(&positions, out),
        Command::Verify { max, format } => cmd_verify(max, format, out),
        Command::Partition { max, format } => cmd_partition(max, format, out),
        Command::Period {
            max,
            max_period,
            max_preperiod,
            format,
        } => cmd_period(max, max_period, max_preperiod, format, out),
        Command::Group { max, format } => cmd_group(max, format, out),
        Command::Play {
            positions,
            engine_first,
        } => play(&positions, engine_first, input, out),
        Command::Bench { max } => cmd_bench(max, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{f}");
            f.exit_code()
        }
    }
}

/// One row of `sieve` and `classify` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub x: u64,
    pub grundy: u8,
    #[serde(with = "class_tag")]
    pub class: PositionClass,
    pub z1: u32,
    pub z2: u32,
}

impl OutputRecord {
    pub fn new(x: u64, grundy: u8, class: PositionClass) -> Self {
        let rep = zeckendorf_encode(x);
        Self {
            x,
            grundy,
            class,
            z1: rep.z1().unwrap_or(0),
            z2: rep.z2().unwrap_or(0),
        }
    }
}

mod class_tag {
    use fibsub::PositionClass;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &PositionClass, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(c.tag())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<PositionClass, D::Error> {
        let tag = String::deserialize(d)?;
        PositionClass::from_tag(&tag)
            .ok_or_else(|| D::Error::custom(format!("unknown class tag {tag:?}")))
    }
}

fn cmd_sieve(max: u64, format: TableFormat, out: &mut dyn Write) -> CmdResult {
    let table = grundy_sieve(&SubtractionSet::odd_fibonacci_minus_one(), max)?;
    let records = (0..=max).map(|x| {
        let class = classify(x)?;
        let g = table.value(x);
        if class.grundy() != g {
            return Err(Failure::Invariant(format!(
                "position {x}: sieve gives {g}, closed form {class}"
            )));
        }
        Ok(OutputRecord::new(x, g, class))
    });
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for r in records {
                w.serialize(r?)?;
            }
            w.flush()?;
        }
        TableFormat::Json => {
            let mut w = BufWriter::new(&mut *out);
            w.write_all(b"[")?;
            for (i, r) in records.enumerate() {
                w.write_all(if i == 0 { b"\n" } else { b",\n" })?;
                serde_json::to_writer(&mut w, &r?)?;
            }
            w.write_all(b"\n]\n")?;
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn cmd_classify(positions: &[String], out: &mut dyn Write) -> CmdResult {
    let parsed = positions
        .iter()
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|e| Failure::Usage(format!("{p:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut w = csv::Writer::from_writer(&mut *out);
    for x in parsed {
        let class = classify(x)?;
        w.serialize(OutputRecord::new(x, class.grundy(), class))?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

/// Machine-readable report shared by the checking commands.
#[derive(Debug, Serialize)]
struct JsonReport {
    command: &'static str,
    range: [u64; 2],
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<serde_json::Value>,
    counts: serde_json::Value,
    elapsed_ms: u128,
}

fn emit_json(report: &JsonReport, out: &mut dyn Write) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, report)?;
    writeln!(out)
}

fn verification_json(
    command: &'static str,
    r: &VerificationReport,
    elapsed_ms: u128,
) -> JsonReport {
    let mut counts = serde_json::to_value(r.class_counts).expect("plain struct");
    counts["mismatches"] = json!(r.mismatches);
    JsonReport {
        command,
        range: r.range,
        passed: r.passed,
        counterexample: r.first_counterexample.as_ref().map(|c| json!(c)),
        counts,
        elapsed_ms,
    }
}

fn exit_for(passed: bool) -> i32 {
    if passed {
        EXIT_OK
    } else {
        EXIT_INVARIANT
    }
}

fn print_counterexample(r: &VerificationReport, out: &mut dyn Write) -> io::Result<()> {
    if let Some(c) = &r.first_counterexample {
        writeln!(
            out,
            "first counterexample: x = {}: {}",
            c.position, c.detail
        )?;
    }
    Ok(())
}

fn cmd_verify(max: u64, format: ReportFormat, out: &mut dyn Write) -> CmdResult {
    let start = Instant::now();
    let r = verify_equivalence(max)?;
    let elapsed = start.elapsed().as_millis();
    match format {
        ReportFormat::Json => emit_json(&verification_json("verify", &r, elapsed), out)?,
        ReportFormat::Text => {
            let verdict = if r.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{verdict}, {} mismatches in [0, {max}]", r.mismatches)?;
            let c = &r.class_counts;
            writeln!(
                out,
                "classes: T {} / B {} / B+1 {} / AB+1 {}",
                c.terminal, c.b, c.b1, c.ab1
            )?;
            print_counterexample(&r, out)?;
        }
    }
    Ok(exit_for(r.passed))
}

fn cmd_partition(max: u64, format: ReportFormat, out: &mut dyn Write) -> CmdResult {
    if max == 0 {
        return Err(Failure::Usage("partition needs --max >= 1".into()));
    }
    let start = Instant::now();
    let r = verify_partition(max)?;
    let elapsed = start.elapsed().as_millis();
    match format {
        ReportFormat::Json => emit_json(&verification_json("partition", &r, elapsed), out)?,
        ReportFormat::Text => {
            let verdict = if r.passed { "PASS" } else { "FAIL" };
            let c = &r.class_counts;
            writeln!(
                out,
                "{verdict}, counts {}/{}/{} (B/B+1/AB+1) in [1, {max}]",
                c.b, c.b1, c.ab1
            )?;
            print_counterexample(&r, out)?;
        }
    }
    Ok(exit_for(r.passed))
}

fn cmd_period(
    max: u64,
    max_period: u64,
    max_preperiod: u64,
    format: ReportFormat,
    out: &mut dyn Write,
) -> CmdResult {
    let start = Instant::now();
    let table = grundy_sieve(&SubtractionSet::odd_fibonacci_minus_one(), max)?;
    let report = period_scan(&table, max_period, max_preperiod)?;
    let elapsed = start.elapsed().as_millis();
    let passed = report.found.is_none();
    match format {
        ReportFormat::Json => emit_json(
            &JsonReport {
                command: "period",
                range: [0, max],
                passed,
                counterexample: report
                    .found
                    .map(|(t, p)| json!({ "preperiod": t, "period": p })),
                counts: json!({ "max_period": max_period, "max_preperiod": max_preperiod }),
                elapsed_ms: elapsed,
            },
            out,
        )?,
        ReportFormat::Text => match report.found {
            None => writeln!(
                out,
                "PASS, no period <= {max_period} with preperiod <= {max_preperiod} in [0, {max}]"
            )?,
            Some((t, p)) => writeln!(out, "FAIL, period {p} from preperiod {t} in [0, {max}]")?,
        },
    }
    Ok(exit_for(passed))
}

fn braces(values: &std::collections::BTreeSet<u8>) -> String {
    let inner: Vec<String> = values.iter().map(u8::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn cmd_group(max: u64, format: ReportFormat, out: &mut dyn Write) -> CmdResult {
    let start = Instant::now();
    let table = grundy_sieve(&SubtractionSet::odd_fibonacci_minus_one(), max)?;
    let values = attained_values(&table);
    let closure = xor_closure(&values);
    let elapsed = start.elapsed().as_millis();
    let order = closure.len();
    // the group's order is a power of two
    let dimension = order.trailing_zeros();
    let passed = values.iter().all(|&v| v <= 2);
    match format {
        ReportFormat::Json => emit_json(
            &JsonReport {
                command: "group",
                range: [0, max],
                passed,
                counterexample: None,
                counts: json!({ "values": values, "closure": closure, "order": order, "dimension": dimension }),
                elapsed_ms: elapsed,
            },
            out,
        )?,
        ReportFormat::Text => writeln!(
            out,
            "values {}, closure {}, order {order}, dimension {dimension}",
            braces(&values),
            braces(&closure)
        )?,
    }
    Ok(exit_for(passed))
}

fn per_second(count: u64, secs: f64) -> f64 {
    if secs > 0.0 {
        count as f64 / secs
    } else {
        f64::INFINITY
    }
}

fn cmd_bench(max: u64, out: &mut dyn Write) -> CmdResult {
    let positions = max + 1;
    let start = Instant::now();
    let table = grundy_sieve(&SubtractionSet::odd_fibonacci_minus_one(), max)?;
    let sieve_secs = start.elapsed().as_secs_f64();
    writeln!(
        out,
        "sieve: {positions} positions in {:.3} s ({:.0} positions/s), table {} bytes",
        sieve_secs,
        per_second(positions, sieve_secs),
        table.storage_bytes()
    )?;
    let start = Instant::now();
    let mut checksum = 0u64;
    for x in 0..=max {
        checksum += classify(x)?.grundy() as u64;
    }
    let classify_secs = start.elapsed().as_secs_f64();
    writeln!(
        out,
        "classify: {positions} positions in {:.3} s ({:.0} positions/s), grundy sum {checksum}",
        classify_secs,
        per_second(positions, classify_secs)
    )?;
    Ok(EXIT_OK)
}
