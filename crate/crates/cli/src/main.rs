use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use oddgirth::bounds::{self, certify, CertificateReport};
use oddgirth::gamma5prime::{export_extremal, maximize_objective};
use oddgirth::graph6::parse_graph6;
use oddgirth::scan::{self, ScanSummary};
use oddgirth::Error;

#[derive(Parser)]
#[command(
    name = "oddgirth",
    version,
    about = "Spectral bipartiteness (λ₁+λₙ)/n versus odd girth"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Certify one graph6 literal, or every graph in a graph6 file.
    Analyze {
        /// graph6 string or path to a file with one graph per line
        input: String,
        /// required odd girth (odd, >= 3)
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Maximum measure over a corpus of graphs with odd girth >= k.
    Scan {
        /// graph6 file (omit with --enumerate)
        path: Option<PathBuf>,
        /// scan every labeled graph on this many vertices (<= 8)
        #[arg(long, conflicts_with = "path")]
        enumerate: Option<usize>,
        /// required odd girth (odd, >= 3)
        #[arg(long)]
        k: usize,
        /// worker threads; output does not depend on this
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Tabulate the cycle lower bound and the main upper bound.
    Bounds {
        /// smallest odd k
        #[arg(long)]
        k_min: usize,
        /// largest odd k
        #[arg(long)]
        k_max: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Upper and lower bounds for the relaxed triangle-free supremum.
    Gamma5 {
        /// comma-separated epsilons for the extremal construction
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.01,0.001")]
        eps: Vec<f64>,
        /// upper end of the objective search interval (>= 15)
        #[arg(long, default_value_t = 100.0)]
        s_max: f64,
        /// grid samples per unit interval before refinement
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// write the extremal sequences (with metadata) as JSON to this path
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

/// Process exit status, ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Ok = 0,
    CheckFailed = 1,
    Input = 2,
    Precondition = 3,
    Numeric = 4,
}

fn status_of(e: &Error) -> Status {
    match e {
        Error::Parse { .. }
        | Error::UnsupportedSize { .. }
        | Error::SizeLimit { .. }
        | Error::InvalidArgument(_) => Status::Input,
        Error::GirthViolation { .. }
        | Error::Precondition(_)
        | Error::Infeasible(_)
        | Error::SizeTooSmall { .. } => Status::Precondition,
        Error::NoConvergence { .. } | Error::Overflow { .. } => Status::Numeric,
    }
}

struct Failure {
    status: Status,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            status: status_of(&e),
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            status: Status::Input,
            message: e.to_string(),
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure {
        status: Status::Input,
        message,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = match cli.command {
        Command::Analyze { input, k, format } => analyze(&input, k, format, &mut out),
        Command::Scan {
            path,
            enumerate,
            k,
            jobs,
            format,
        } => run_scan(path.as_deref(), enumerate, k, jobs, format, &mut out),
        Command::Bounds {
            k_min,
            k_max,
            format,
        } => bounds_table(k_min, k_max, format, &mut out),
        Command::Gamma5 {
            eps,
            s_max,
            samples,
            format,
            export,
        } => gamma5(&eps, s_max, samples, format, export.as_deref(), &mut out),
    };
    let flushed = out.flush();
    match result {
        Ok(status) => {
            if let Err(e) = flushed {
                eprintln!("error: {e}");
                return ExitCode::from(Status::Input as u8);
            }
            ExitCode::from(status as u8)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.status as u8)
        }
    }
}

fn read_graph_lines(input: &str) -> Result<Vec<(usize, String)>, Failure> {
    let path = Path::new(input);
    if path.is_file() {
        let text = fs::read_to_string(path)?;
        Ok(text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r').to_string()))
            .filter(|(_, l)| !l.trim().is_empty())
            .collect())
    } else {
        Ok(vec![(1, input.to_string())])
    }
}

/// Reports are written as each graph is processed. A graph that fails to
/// parse or certify is reported on stderr and skipped; the exit status is
/// the most severe one seen.
fn analyze(input: &str, k: usize, format: Format, out: &mut impl Write) -> Result<Status, Failure> {
    if k.is_multiple_of(2) || k < 3 {
        return Err(input_error(format!("k must be odd and >= 3, got {k}")));
    }
    let lines = read_graph_lines(input)?;
    if format == Format::Csv {
        writeln!(out, "{}", bounds::CSV_HEADER)?;
    }
    let mut status = Status::Ok;
    for (line_no, line) in &lines {
        let text = line.strip_prefix(">>graph6<<").unwrap_or(line);
        let report = match parse_graph6(text).and_then(|g| certify(&g, k, text)) {
            Ok(r) => r,
            Err(e) => {
                out.flush()?;
                eprintln!("error: line {line_no} ({text}): {e}");
                status = status.max(status_of(&e));
                continue;
            }
        };
        match format {
            Format::Json => writeln!(
                out,
                "{}",
                serde_json::to_string(&report).expect("report serializes")
            )?,
            Format::Csv => writeln!(out, "{}", report.csv_row())?,
            Format::Text => write_report_text(&report, out)?,
        }
        if !report.passed {
            status = status.max(Status::CheckFailed);
        }
    }
    Ok(status)
}

fn write_report_text(r: &CertificateReport, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "graph {} (n = {}, k = {})", r.graph_id, r.n, r.k)?;
    writeln!(out, "  odd girth      {}", r.odd_girth)?;
    writeln!(out, "  lambda1        {:.12}", r.lambda1)?;
    writeln!(out, "  lambda_n       {:.12}", r.lambda_n)?;
    writeln!(out, "  measure        {:.12}", r.measure)?;
    if let Some(case) = r.main_case {
        writeln!(
            out,
            "  main case      {}",
            serde_json::to_value(case)
                .expect("case serializes")
                .as_str()
                .unwrap_or("")
        )?;
    }
    for b in &r.applicable_bounds {
        writeln!(
            out,
            "  bound {:<20} {:.12}  slack {:.3e}  {}",
            b.name,
            b.value,
            b.slack,
            if b.satisfied { "ok" } else { "VIOLATED" }
        )?;
    }
    for c in &r.chain_checks {
        writeln!(
            out,
            "  check {}: {:.6e} {} {:.6e}  {}",
            c.description,
            c.left,
            c.relation,
            c.right,
            if c.satisfied { "ok" } else { "FAILED" }
        )?;
    }
    for note in &r.notes {
        writeln!(out, "  note  {note}")?;
    }
    writeln!(
        out,
        "  result         {}",
        if r.passed { "PASS" } else { "FAIL" }
    )
}

fn run_scan(
    path: Option<&Path>,
    enumerate: Option<usize>,
    k: usize,
    jobs: usize,
    format: Format,
    out: &mut impl Write,
) -> Result<Status, Failure> {
    let summary = match (path, enumerate) {
        (_, Some(n)) => scan::scan_enumerated(n, k, jobs)?,
        (Some(p), None) => {
            let text = fs::read_to_string(p)?;
            let lines: Vec<String> = text.lines().map(str::to_string).collect();
            scan::scan_lines(&lines, k, jobs)?
        }
        (None, None) => {
            return Err(input_error(
                "scan needs a graph6 file or --enumerate <n>".into(),
            ))
        }
    };
    write_scan(&summary, format, out)?;
    for m in &summary.malformed {
        eprintln!("skipped line {}: {}", m.index, m.reason);
    }
    Ok(if !summary.numeric_failures.is_empty() {
        Status::Numeric
    } else if summary.total_violations() > 0 {
        Status::CheckFailed
    } else {
        Status::Ok
    })
}

fn write_scan(summary: &ScanSummary, format: Format, out: &mut impl Write) -> io::Result<()> {
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(summary).expect("summary serializes")
        ),
        Format::Csv => {
            writeln!(out, "{}", scan::CSV_HEADER)?;
            for row in &summary.rows {
                writeln!(out, "{}", row.csv_row())?;
            }
            Ok(())
        }
        Format::Text => {
            writeln!(out, "scan with k = {}", summary.k)?;
            for row in &summary.rows {
                write!(
                    out,
                    "  n = {:<3} scanned {:<10} eligible {:<10}",
                    row.n, row.graphs_scanned, row.eligible
                )?;
                match (row.max_measure, &row.argmax_graph6) {
                    (Some(m), Some(g6)) => write!(out, " max measure {m:.12} ({g6})")?,
                    (Some(m), None) => write!(out, " max measure {m:.12}")?,
                    _ => write!(out, " no eligible graphs")?,
                }
                if let (Some(name), Some(slack)) = (&row.tightest_bound, row.min_slack) {
                    write!(out, "  tightest {name}, min slack {slack:.6e}")?;
                }
                writeln!(out, "  violations {}", row.violations)?;
            }
            writeln!(out, "  malformed lines {}", summary.malformed.len())
        }
    }
}

fn bounds_table(
    k_min: usize,
    k_max: usize,
    format: Format,
    out: &mut impl Write,
) -> Result<Status, Failure> {
    if k_min.is_multiple_of(2) || k_max.is_multiple_of(2) || k_min < 3 {
        return Err(input_error(format!(
            "k-min and k-max must be odd and >= 3, got {k_min}, {k_max}"
        )));
    }
    if k_min > k_max {
        return Err(input_error(format!("k-min {k_min} exceeds k-max {k_max}")));
    }
    let mut rows = Vec::new();
    for k in (k_min..=k_max).step_by(2) {
        let lower = bounds::cycle_lower_bound(k)?;
        let main = bounds::main_bound(k).ok();
        rows.push((k, lower, main, main.map(|m| m / lower)));
    }
    match format {
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(k, lower, main, ratio)| {
                    json!({"k": k, "cycle_lower_bound": lower, "main_bound": main, "ratio": ratio})
                })
                .collect();
            writeln!(out, "{}", serde_json::Value::Array(items))?;
        }
        Format::Csv => {
            writeln!(out, "k,cycle_lower_bound,main_bound,ratio")?;
            for (k, lower, main, ratio) in &rows {
                let opt = |v: &Option<f64>| {
                    v.map(|x| format!("{x:.17e}"))
                        .unwrap_or_else(|| "n/a".into())
                };
                writeln!(out, "{k},{lower:.17e},{},{}", opt(main), opt(ratio))?;
            }
        }
        Format::Text => {
            writeln!(
                out,
                "{:>5}  {:>22}  {:>22}  {:>14}",
                "k", "cycle lower bound", "main bound", "ratio"
            )?;
            for (k, lower, main, ratio) in &rows {
                let opt = |v: &Option<f64>, prec: usize| {
                    v.map(|x| format!("{x:.prec$e}"))
                        .unwrap_or_else(|| "n/a".into())
                };
                writeln!(
                    out,
                    "{k:>5}  {lower:>22.15e}  {:>22}  {:>14}",
                    opt(main, 15),
                    opt(ratio, 6)
                )?;
            }
        }
    }
    Ok(Status::Ok)
}

fn gamma5(
    eps: &[f64],
    s_max: f64,
    samples: usize,
    format: Format,
    export: Option<&Path>,
    out: &mut impl Write,
) -> Result<Status, Failure> {
    let upper = maximize_objective(s_max, samples)?;
    let target = bounds::gamma5_prime_value();
    let csikvari = bounds::csikvari_bound();
    let mut exports = Vec::with_capacity(eps.len());
    for &e in eps {
        exports.push(export_extremal(e, None)?);
    }
    let all_ok = exports.iter().all(|x| x.constraints_satisfied);

    match format {
        Format::Json | Format::Csv => {
            let lower: Vec<_> = exports
                .iter()
                .map(|x| {
                    json!({
                        "epsilon": x.epsilon,
                        "n": x.n,
                        "measure": x.measure,
                        "expected_measure": x.expected_measure,
                        "gap_to_gamma5_prime": x.gap_to_gamma5_prime,
                        "constraints_satisfied": x.constraints_satisfied,
                        "residuals": x.residuals,
                    })
                })
                .collect();
            let doc = json!({
                "s_star": upper.s_star,
                "upper_value": upper.value,
                "gamma5_prime": target,
                "csikvari": csikvari,
                "balogh_constant": bounds::balogh_constant(),
                "lower_bounds": lower,
            });
            writeln!(out, "{doc}")?;
        }
        Format::Text => {
            writeln!(
                out,
                "objective maximum      s* = {:.10}  value = {:.15}",
                upper.s_star, upper.value
            )?;
            writeln!(out, "gamma5' (closed form)  {target:.15}")?;
            writeln!(out, "3 - 2 sqrt 2           {csikvari:.15}")?;
            writeln!(out, "upper - gamma5'        {:.3e}", upper.value - target)?;
            for x in &exports {
                writeln!(
                    out,
                    "eps = {:<8} n = {:<6} measure = {:.15}  gap = {:.3e}  residuals (sum1 {:.2e}, sum3 {:.2e}, sum2-budget {:.2e})  {}",
                    x.epsilon,
                    x.n,
                    x.measure,
                    x.gap_to_gamma5_prime,
                    x.residuals.sum1,
                    x.residuals.sum3,
                    x.residuals.sum2_minus_budget,
                    if x.constraints_satisfied { "ok" } else { "FAILED" }
                )?;
            }
        }
    }
    if let Some(path) = export {
        let text = serde_json::to_string_pretty(&exports).expect("exports serialize");
        fs::write(path, text + "\n")?;
    }
    Ok(if all_ok {
        Status::Ok
    } else {
        Status::CheckFailed
    })
}
