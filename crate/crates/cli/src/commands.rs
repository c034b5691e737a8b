use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use lcs_threshold::bench::{
    advisory_trend, default_suite, emit_report, run_bench, BenchBackend, BenchCase, BenchError,
    BenchOptions, ReportFormat,
};
use lcs_threshold::lcs::{
    dp_oracle, is_common_subsequence, lcs_vector_scan_profiled, reconstruct_with, shadow_run_on,
    DpTable, SHADOW_LIMIT,
};
use lcs_threshold::threshold_set::VebBackend;
use lcs_threshold::{
    count_matches, lcs_length, lcs_reconstruct, Backend, LcsError, LcsResult, OpCounters,
    PositionLists, ReconstructOptions, Sequence, ThresholdSet, TokenMode, Tokenizer,
};
use serde::Serialize;
use serde_json::json;

use crate::args::{BackendChoice, BenchArgs, Command, InputArgs, Mode, Output, VerifyArgs};

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Mismatch(String),
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Io(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(s) | CliError::Mismatch(s) | CliError::Cap(s) => f.write_str(s),
        }
    }
}

impl From<LcsError> for CliError {
    fn from(e: LcsError) -> Self {
        CliError::Cap(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Length(a) => length(&a),
        Command::Subseq(a) => subseq(&a),
        Command::Stats(a) => stats(&a),
        Command::Verify(a) => verify(&a),
        Command::Bench(a) => bench(&a),
    }
}

struct Inputs {
    x: Sequence,
    y: Sequence,
    tokenizer: Tokenizer,
}

fn read_input(path: &Path, inline: bool, allow_stdin: bool) -> Result<Vec<u8>, CliError> {
    if inline {
        return Ok(path.to_string_lossy().into_owned().into_bytes());
    }
    if allow_stdin && path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| CliError::Io(format!("standard input: {e}")))?;
        return Ok(buf);
    }
    fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load(args: &InputArgs) -> Result<Inputs, CliError> {
    let first = read_input(&args.first, args.inline, true)?;
    let second = read_input(&args.second, args.inline, false)?;
    let mode = match args.mode {
        Mode::Bytes => TokenMode::Bytes,
        Mode::Lines => TokenMode::Lines,
    };
    let mut tokenizer = Tokenizer::new(mode);
    let x = tokenizer.tokenize(&first);
    let y = tokenizer.tokenize(&second);
    Ok(Inputs { x, y, tokenizer })
}

/// Picks the sorted-vector scan when its worst case `m * min(m, n)` is no
/// more than the successor-tree estimate `R * ceil(log2 log2 n)`, which
/// happens when matches are dense compared with the possible LCS length.
pub fn auto_backend(m: usize, n: usize, matches: u64) -> Backend {
    let loglog = (n.max(4) as f64).log2().log2().ceil().max(1.0);
    let array_cost = m as f64 * m.min(n) as f64;
    if array_cost <= matches as f64 * loglog {
        Backend::Array
    } else {
        Backend::Veb
    }
}

fn resolve(choice: BackendChoice, x: &Sequence, y: &Sequence) -> Backend {
    match choice {
        BackendChoice::Veb => Backend::Veb,
        BackendChoice::Tree => Backend::Tree,
        BackendChoice::Array => Backend::Array,
        BackendChoice::Auto => {
            let r = count_matches(x, &PositionLists::build(y)).matches;
            auto_backend(x.len(), y.len(), r)
        }
    }
}

fn print_json(value: &serde_json::Value) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct Summary {
    m: usize,
    n: usize,
    #[serde(rename = "R")]
    matches: u64,
    #[serde(rename = "L")]
    lcs_len: usize,
    backend: &'static str,
}

impl Summary {
    fn new(result: &LcsResult, backend: Backend) -> Self {
        Summary {
            m: result.stats.m,
            n: result.stats.n,
            matches: result.stats.matches,
            lcs_len: result.length,
            backend: backend.name(),
        }
    }

    fn text(&self) -> String {
        format!(
            "m: {}\nn: {}\nR: {}\nL: {}\nbackend: {}\n",
            self.m, self.n, self.matches, self.lcs_len, self.backend
        )
    }
}

fn length(args: &InputArgs) -> Result<(), CliError> {
    let inputs = load(args)?;
    let backend = resolve(args.backend, &inputs.x, &inputs.y);
    let result = lcs_length(&inputs.x, &inputs.y, backend);
    let summary = Summary::new(&result, backend);
    match args.output {
        Output::Text => print!("{}", summary.text()),
        Output::Json => print_json(&json!(summary))?,
    }
    Ok(())
}

fn subseq(args: &InputArgs) -> Result<(), CliError> {
    let inputs = load(args)?;
    let backend = resolve(args.backend, &inputs.x, &inputs.y);
    let result = lcs_reconstruct(
        &inputs.x,
        &inputs.y,
        ReconstructOptions {
            backend,
            memory_cap: args.memory_cap,
        },
    )?;
    let sub = result.subsequence.clone().unwrap_or_default();
    if sub.len() != result.length
        || !is_common_subsequence(&sub, inputs.x.symbols(), inputs.y.symbols())
    {
        return Err(CliError::Mismatch(format!(
            "reconstructed sequence of length {} is not a common subsequence of length {}",
            sub.len(),
            result.length
        )));
    }
    let rendered = inputs.tokenizer.render(&sub);
    match args.output {
        Output::Text => {
            let mut out = io::stdout().lock();
            write!(out, "{}", Summary::new(&result, backend).text())?;
            out.write_all(&rendered)?;
            if inputs.tokenizer.mode() == TokenMode::Bytes && !rendered.is_empty() {
                writeln!(out)?;
            }
        }
        Output::Json => {
            let mut value = json!(Summary::new(&result, backend));
            value["subsequence"] = json!(String::from_utf8_lossy(&rendered));
            value["tokens"] = json!(sub);
            print_json(&value)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct BackendStats {
    backend: &'static str,
    #[serde(rename = "L")]
    lcs_len: usize,
    #[serde(flatten)]
    counters: OpCounters,
}

fn stats(args: &InputArgs) -> Result<(), CliError> {
    let inputs = load(args)?;
    let lists = PositionLists::build(&inputs.y);
    let r = count_matches(&inputs.x, &lists).matches;
    let chosen = resolve(args.backend, &inputs.x, &inputs.y);
    let mut rows = Vec::new();
    for backend in Backend::ALL {
        let result = if backend == Backend::Array {
            lcs_vector_scan_profiled(&inputs.x, &inputs.y).0
        } else {
            lcs_length(&inputs.x, &inputs.y, backend)
        };
        rows.push(BackendStats {
            backend: backend.name(),
            lcs_len: result.length,
            counters: result.counters,
        });
    }
    let lcs_len = rows[0].lcs_len;
    if let Some(bad) = rows.iter().find(|row| row.lcs_len != lcs_len) {
        return Err(CliError::Mismatch(format!(
            "{} reports L = {}, veb reports {lcs_len}",
            bad.backend, bad.lcs_len
        )));
    }
    let summary = Summary {
        m: inputs.x.len(),
        n: inputs.y.len(),
        matches: r,
        lcs_len,
        backend: chosen.name(),
    };
    match args.output {
        Output::Text => {
            let mut out = io::stdout().lock();
            write!(out, "{}", summary.text())?;
            writeln!(
                out,
                "distinct symbols in second input: {}",
                lists.distinct_symbols()
            )?;
            writeln!(
                out,
                "backend  succ  pred  insert  delete  update  comparisons  max_depth"
            )?;
            for row in &rows {
                let c = &row.counters;
                writeln!(
                    out,
                    "{}  {}  {}  {}  {}  {}  {}  {}",
                    row.backend,
                    c.succ,
                    c.pred,
                    c.insert,
                    c.delete,
                    c.update,
                    c.comparisons,
                    c.max_depth
                )?;
            }
        }
        Output::Json => {
            let mut value = json!(summary);
            value["distinct_symbols"] = json!(lists.distinct_symbols());
            value["backends"] = json!(rows);
            print_json(&value)?;
        }
    }
    Ok(())
}

/// One comparison made by `verify`.
#[derive(Debug, Serialize)]
struct Check {
    name: String,
    expected: String,
    actual: String,
    ok: bool,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn eq<T: PartialEq + fmt::Display>(&mut self, name: impl Into<String>, expected: T, actual: T) {
        let ok = expected == actual;
        self.0.push(Check {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            ok,
        });
    }

    fn holds(
        &mut self,
        name: impl Into<String>,
        expected: impl Into<String>,
        actual: impl Into<String>,
        ok: bool,
    ) {
        self.0.push(Check {
            name: name.into(),
            expected: expected.into(),
            actual: actual.into(),
            ok,
        });
    }

    fn failures(&self) -> impl Iterator<Item = &Check> {
        self.0.iter().filter(|c| !c.ok)
    }
}

fn veb_set(capacity: u32, faulty: bool) -> VebBackend {
    if faulty {
        VebBackend::with_literal_max_guard(capacity)
    } else {
        VebBackend::new(capacity)
    }
}

fn check_tracing<T: ThresholdSet + ?Sized>(
    checks: &mut Checks,
    name: &str,
    x: &Sequence,
    y: &Sequence,
    lists: &PositionLists,
    set: &mut T,
    dp: &DpTable,
) {
    let (result, _) = reconstruct_with(x, y, lists, set);
    let r = result.stats.matches;
    let sub = result.subsequence.unwrap_or_default();
    checks.eq(format!("{name} reconstruct L"), dp.length(), result.length);
    checks.holds(
        format!("{name} reconstruction is a common subsequence of length L"),
        format!("length {}", dp.length()),
        format!(
            "length {}, common: {}",
            sub.len(),
            is_common_subsequence(&sub, x.symbols(), y.symbols())
        ),
        sub.len() == dp.length() && is_common_subsequence(&sub, x.symbols(), y.symbols()),
    );
    let c = result.counters;
    checks.holds(
        format!("{name} primitive operations <= 4R"),
        format!("<= {}", 4 * r),
        c.primitive_total().to_string(),
        c.primitive_total() <= 4 * r,
    );
    checks.holds(
        format!("{name} deletes <= inserts"),
        format!("<= {}", c.insert),
        c.delete.to_string(),
        c.delete <= c.insert,
    );
}

fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let inputs = load(&args.input)?;
    let (x, y) = (&inputs.x, &inputs.y);
    let faulty = args.simulate_max_guard_bug;
    let cap = args.input.memory_cap;
    let dp = dp_oracle(x, y, cap)?;
    let lists = PositionLists::build(y);
    let r = count_matches(x, &lists).matches;
    if r > cap {
        return Err(LcsError::MemoryCap {
            what: "reconstruction trace",
            required: r,
            cap,
        }
        .into());
    }
    let capacity = y.len().max(1) as u32;
    let mut checks = Checks::default();
    let l = dp.length();
    checks.holds(
        "DP traceback is a common subsequence",
        format!("length {l}"),
        "",
        {
            let tb = dp.traceback();
            tb.len() == l && is_common_subsequence(&tb, x.symbols(), y.symbols())
        },
    );

    for backend in Backend::ALL {
        let got = if backend == Backend::Veb {
            let mut set = veb_set(capacity, faulty);
            lcs_threshold::lcs::run_updates(x, &lists, &mut set);
            set.size()
        } else {
            lcs_length(x, y, backend).length
        };
        checks.eq(format!("{backend} length"), l, got);
    }

    let (scan, rows) = lcs_vector_scan_profiled(x, y);
    checks.eq("vector scan length", l, scan.length);
    if let Some((i, row)) = rows
        .iter()
        .enumerate()
        .find(|(_, row)| row.comparisons > row.budget())
    {
        checks.holds(
            format!("vector scan row {} comparisons", i + 1),
            format!("<= {}", row.budget()),
            row.comparisons.to_string(),
            false,
        );
    }
    let longest = x.len().max(y.len()) as u64;
    let bound = longest * scan.length as u64 + r + longest;
    checks.holds(
        "vector scan comparisons <= nL + R + n",
        format!("<= {bound}"),
        scan.counters.comparisons.to_string(),
        scan.counters.comparisons <= bound,
    );

    check_tracing(
        &mut checks,
        "veb",
        x,
        y,
        &lists,
        &mut veb_set(capacity, faulty),
        &dp,
    );
    let mut tree = lcs_threshold::new_threshold_set(capacity, Backend::Tree);
    check_tracing(&mut checks, "tree", x, y, &lists, &mut tree, &dp);

    if x.len() <= SHADOW_LIMIT && y.len() <= SHADOW_LIMIT {
        for backend in Backend::ALL {
            let outcome = if backend == Backend::Veb {
                shadow_run_on(x, y, &mut veb_set(capacity, faulty))
            } else {
                shadow_run_on(
                    x,
                    y,
                    &mut lcs_threshold::new_threshold_set(capacity, backend),
                )
            };
            match outcome {
                Ok(_) => checks.holds(format!("{backend} shadow invariants"), "hold", "hold", true),
                Err(e) => checks.holds(
                    format!("{backend} shadow invariants"),
                    "hold",
                    e.to_string(),
                    false,
                ),
            }
        }
    }

    let total = checks.0.len();
    let failed = checks.failures().count();
    match args.input.output {
        Output::Text => {
            let mut out = io::stdout().lock();
            for c in checks.failures() {
                writeln!(
                    out,
                    "MISMATCH {}: expected {}, actual {}",
                    c.name, c.expected, c.actual
                )?;
            }
            if failed == 0 {
                writeln!(out, "verify: ok, {total} checks, L = {l}")?;
            } else {
                writeln!(out, "verify: FAILED, {failed} of {total} checks")?;
            }
        }
        Output::Json => print_json(&json!({
            "ok": failed == 0,
            "m": x.len(),
            "n": y.len(),
            "R": r,
            "L": l,
            "checks": checks.0,
        }))?,
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Mismatch(format!(
            "{failed} of {total} checks failed"
        )))
    }
}

fn bench(args: &BenchArgs) -> Result<(), CliError> {
    let backends = if args.backend.is_empty() {
        BenchBackend::ALL.to_vec()
    } else {
        args.backend.clone()
    };
    let cases = match args.n {
        Some(n) => vec![BenchCase {
            id: 0,
            n,
            m: args.m.unwrap_or(n),
            sigma: args.sigma.max(1),
            seed: args.seed,
            structure: args.structure,
            backends,
        }],
        None => default_suite(args.seed)
            .into_iter()
            .map(|c| BenchCase {
                backends: backends.clone(),
                ..c
            })
            .collect(),
    };
    let options = BenchOptions {
        repeats: args.repeats.max(1),
        memory_cap: args.memory_cap,
    };
    let report = run_bench(&cases, &options).map_err(|e| match e {
        BenchError::Resource { .. } => CliError::Cap(e.to_string()),
        _ => CliError::Mismatch(e.to_string()),
    })?;
    for warning in advisory_trend(&report) {
        eprintln!("warning: {warning}");
    }
    let format = if args.json || args.output == Output::Json {
        ReportFormat::Json
    } else {
        ReportFormat::Csv
    };
    let mut out = io::stdout().lock();
    out.write_all(&emit_report(&report, format))?;
    Ok(())
}
