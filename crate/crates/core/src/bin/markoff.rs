use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use markoff::bgs::{BgsError, PathFinder};
use markoff::experiments::{
    cage_stats_range, histogram, level_bound, level_log_sizes, primes_in, table111, write_cage_csv,
    write_histogram_csv,
};
use markoff::field::{FieldError, Prime};
use markoff::graph::{
    spectral_gap_lower_bound, write_dot, write_vertex_csv, GraphError, GraphIndex, SpectralOptions,
    DEFAULT_ENUM_CAP, DEFAULT_SPECTRAL_CAP,
};
use markoff::lift::{
    middlegame_bound, minimal_lift_search, replay_integer, thm1_bound, BoundReport, Dominance,
    LiftError, ReplayOptions, DEFAULT_DIGIT_CAP, DEFAULT_SEARCH_DEPTH,
};
use markoff::point::{Axis, ModPoint, PathWord, PointError, Surface};

/// Markoff triples modulo p.
///
/// Exit codes: 0 success, 1 I/O failure, 2 domain error (bad prime, point or
/// option), 3 constructive failure, 4 disconnected graph.
#[derive(Parser, Debug)]
#[command(name = "markoff", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Single prime.
    #[arg(short = 'p', long = "prime", global = true)]
    p: Option<u64>,
    /// Inclusive prime range `A..B`; 2 and 3 are skipped.
    #[arg(long, global = true, value_parser = parse_range)]
    primes: Option<(u64, u64)>,
    /// Target point `x1,x2,x3`.
    #[arg(long, global = true)]
    to: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Method::Bgs)]
    method: Method,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized steps (spectral start vector).
    #[arg(long, global = true, default_value_t = SpectralOptions::default().seed)]
    seed: u64,
    /// Largest p for which the whole graph is enumerated.
    #[arg(long = "cap-enum", global = true, default_value_t = DEFAULT_ENUM_CAP)]
    cap_enum: u64,
    /// Largest p for spectral estimates.
    #[arg(long = "cap-spectral", global = true, default_value_t = DEFAULT_SPECTRAL_CAP)]
    cap_spectral: u64,
    /// Decimal digits kept exactly during integer replay.
    #[arg(long = "cap-digits", global = true, default_value_t = DEFAULT_DIGIT_CAP)]
    cap_digits: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Least `rot_1^n (1,1,1)` landing in the cage, per prime (default 5..199).
    Table111,
    /// Cage percentage per prime as CSV (default 5..300).
    CageStats,
    /// Histogram of ln sizes at one level of the Markoff tree, as CSV.
    LevelDist {
        #[arg(long, default_value_t = 14)]
        level: u32,
        #[arg(long, default_value_t = 40)]
        bins: usize,
    },
    /// Path word from (1,1,1) to `--to`.
    Path,
    /// Integer lift of `--to`.
    Lift,
    /// Coordinate classes of a point.
    Classify {
        /// Point `x1,x2,x3`; `--to` works too.
        point: Option<String>,
    },
    /// Whether BFS from (1,1,1) reaches every vertex.
    Connectivity,
    /// Vertex CSV or DOT edge list.
    Export,
    /// Evaluated lift bounds as CSV (default 5..199).
    Bounds,
    /// Second eigenvalue and expansion lower bound as CSV.
    Spectral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Bfs,
    Bgs,
    /// Best-first search of the integer tree (lift only).
    Search,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Dot,
    Text,
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Domain(String),
    Constructive(String),
    Disconnected(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Domain(_) => 2,
            Failure::Constructive(_) => 3,
            Failure::Disconnected(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m)
            | Failure::Domain(m)
            | Failure::Constructive(m)
            | Failure::Disconnected(m) => m,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<PointError> for Failure {
    fn from(e: PointError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        let m = e.to_string();
        match e {
            GraphError::Field(_)
            | GraphError::CapExceeded { .. }
            | GraphError::UnknownVertex(_) => Failure::Domain(m),
            GraphError::Unreachable { .. } | GraphError::Disconnected { .. } => {
                Failure::Disconnected(m)
            }
            GraphError::NonConvergence { .. } => Failure::Constructive(m),
        }
    }
}

impl From<BgsError> for Failure {
    fn from(e: BgsError) -> Self {
        match e {
            BgsError::Graph(g) => g.into(),
            BgsError::Precondition(m) => Failure::Domain(m),
            other => Failure::Constructive(other.to_string()),
        }
    }
}

impl From<LiftError> for Failure {
    fn from(e: LiftError) -> Self {
        let m = e.to_string();
        match e {
            LiftError::Field(_) | LiftError::Point(_) | LiftError::NonPositiveExpansion(_) => {
                Failure::Domain(m)
            }
            LiftError::DigitCapExceeded { .. } | LiftError::NotFound { .. } => {
                Failure::Constructive(m)
            }
        }
    }
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: u64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

impl Cli {
    fn prime(&self) -> Result<Prime, Failure> {
        let p = self
            .p
            .ok_or_else(|| Failure::Domain("this command needs -p P".into()))?;
        Ok(Prime::new(p)?)
    }

    /// `-p` as a one-prime range, else `--primes`, else `default`.
    fn prime_list(&self, default: (u64, u64)) -> Result<Vec<Prime>, Failure> {
        if let Some(p) = self.p {
            return Ok(vec![Prime::new(p)?]);
        }
        let (lo, hi) = self.primes.unwrap_or(default);
        let list = primes_in(lo, hi);
        if list.is_empty() {
            return Err(Failure::Domain(format!("no primes p > 3 in {lo}..{hi}")));
        }
        Ok(list)
    }

    fn target(&self, prime: Prime) -> Result<ModPoint, Failure> {
        let lit = self
            .to
            .as_deref()
            .ok_or_else(|| Failure::Domain("this command needs --to x1,x2,x3".into()))?;
        Ok(ModPoint::parse(prime, lit)?)
    }

    fn format(&self, allowed: &[Format], default: Format) -> Result<Format, Failure> {
        let f = self.format.unwrap_or(default);
        if !allowed.contains(&f) {
            return Err(Failure::Domain(
                format!("--format {f:?} is not supported here").to_lowercase(),
            ));
        }
        Ok(f)
    }

    fn sink(&self) -> Result<Box<dyn Write>, Failure> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn spectral_options(&self) -> SpectralOptions {
        SpectralOptions {
            cap: self.cap_spectral,
            seed: self.seed,
            ..SpectralOptions::default()
        }
    }
}

fn word_text(w: &PathWord) -> String {
    if w.is_empty() {
        "id".to_string()
    } else {
        w.to_string()
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    for (name, v) in [
        ("--cap-enum", cli.cap_enum),
        ("--cap-spectral", cli.cap_spectral),
        ("--cap-digits", cli.cap_digits),
    ] {
        if v == 0 {
            return Err(Failure::Domain(format!("{name} must be positive")));
        }
    }
    match &cli.command {
        Command::Table111 => table111_cmd(cli),
        Command::CageStats => cage_stats_cmd(cli),
        Command::LevelDist { level, bins } => level_dist_cmd(cli, *level, *bins),
        Command::Path => path_cmd(cli),
        Command::Lift => lift_cmd(cli),
        Command::Classify { point } => classify_cmd(cli, point.as_deref()),
        Command::Connectivity => connectivity_cmd(cli),
        Command::Export => export_cmd(cli),
        Command::Bounds => bounds_cmd(cli),
        Command::Spectral => spectral_cmd(cli),
    }
}

fn table111_cmd(cli: &Cli) -> Result<(), Failure> {
    cli.format(&[Format::Text], Format::Text)?;
    let primes = cli.prime_list((5, 199))?;
    let mut out = cli.sink()?;
    for row in table111(&primes) {
        writeln!(out, "{}", row.line())?;
    }
    writeln!(
        out,
        "# p = 2, 3 are not listed: the surface is only studied for p > 3"
    )?;
    out.flush()?;
    Ok(())
}

fn cage_stats_cmd(cli: &Cli) -> Result<(), Failure> {
    cli.format(&[Format::Csv], Format::Csv)?;
    let primes = cli.prime_list((5, 300))?;
    let rows = cage_stats_range(&primes, cli.cap_enum)?;
    let mut out = cli.sink()?;
    write_cage_csv(&rows, &mut out)?;
    out.flush()?;
    let mean = rows.iter().map(|r| r.percentage).sum::<f64>() / rows.len() as f64;
    eprintln!("mean percentage over {} primes: {mean:.2}", rows.len());
    Ok(())
}

fn level_dist_cmd(cli: &Cli, level: u32, bins: usize) -> Result<(), Failure> {
    cli.format(&[Format::Csv], Format::Csv)?;
    if level == 0 || level > 30 || bins == 0 {
        return Err(Failure::Domain(
            "need 1 <= --level <= 30 and --bins >= 1".into(),
        ));
    }
    let sizes = level_log_sizes(level);
    let expected = 3usize << (level - 1);
    if sizes.len() != expected {
        return Err(Failure::Constructive(format!(
            "level {level} has {} nodes, expected {expected}",
            sizes.len()
        )));
    }
    let max = sizes.iter().copied().fold(0.0, f64::max);
    let bound = level_bound(level);
    if bound.dominates(max) == Dominance::Violated {
        return Err(Failure::Constructive(format!(
            "max ln size {max} exceeds the growth bound {}",
            bound.ln_size()
        )));
    }
    let mut out = cli.sink()?;
    write_histogram_csv(&histogram(&sizes, bins), &mut out)?;
    out.flush()?;
    eprintln!(
        "nodes: {}, max ln size: {max:.6}, bound ln size: {:.6}",
        sizes.len(),
        bound.ln_size()
    );
    Ok(())
}

struct Route {
    word: PathWord,
    /// `(stage, word, end)` per segment.
    segments: Vec<(String, PathWord, ModPoint)>,
}

fn route(cli: &Cli, prime: Prime, target: &ModPoint) -> Result<Route, Failure> {
    match cli.method {
        Method::Bgs => {
            let finder = PathFinder::with_enum_cap(prime, cli.cap_enum);
            let path = finder.full_path(target)?;
            if let Some(reason) = &path.fallback_reason {
                eprintln!("note: constructive route failed ({reason}); used BFS");
            }
            Ok(Route {
                word: path.word(),
                segments: path
                    .segments
                    .iter()
                    .map(|s| (s.stage.to_string(), s.word.clone(), s.end))
                    .collect(),
            })
        }
        Method::Bfs => {
            let g = GraphIndex::build(prime, cli.cap_enum)?;
            let word = g.shortest_path(&ModPoint::origin(prime), target)?;
            Ok(Route {
                segments: vec![("bfs".into(), word.clone(), *target)],
                word,
            })
        }
        Method::Search => Err(Failure::Domain(
            "--method search only applies to lift".into(),
        )),
    }
}

fn path_cmd(cli: &Cli) -> Result<(), Failure> {
    let prime = cli.prime()?;
    let target = cli.target(prime)?;
    let format = cli.format(&[Format::Text, Format::Csv], Format::Text)?;
    let r = route(cli, prime, &target)?;
    let mut out = cli.sink()?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["stage", "word", "end"])?;
            for (stage, word, end) in &r.segments {
                w.write_record([stage.as_str(), &word_text(word), &end.to_string()])?;
            }
            w.flush()?;
        }
        _ => writeln!(out, "{}", word_text(&r.word))?,
    }
    out.flush()?;
    Ok(())
}

fn lift_cmd(cli: &Cli) -> Result<(), Failure> {
    cli.format(&[Format::Text], Format::Text)?;
    let prime = cli.prime()?;
    let target = cli.target(prime)?;
    let mut out = cli.sink()?;
    let mut climbed = false;
    let lift = if cli.method == Method::Search {
        minimal_lift_search(&target, DEFAULT_SEARCH_DEPTH)?
    } else {
        let r = route(cli, prime, &target)?;
        climbed = r.segments.iter().any(|(stage, _, _)| stage == "middlegame");
        writeln!(out, "word: {}", word_text(&r.word))?;
        let opts = ReplayOptions {
            digit_cap: cli.cap_digits,
            require_exact: false,
        };
        replay_integer(&r.word, &opts)?
    };
    writeln!(out, "lift: {lift}")?;
    writeln!(out, "log10 size: {:.6}", lift.log10_size())?;
    if cli.method == Method::Bgs {
        let (name, bound) = if climbed {
            ("middlegame", middlegame_bound(prime.get())?.0)
        } else {
            ("cage-route", thm1_bound(prime.get()))
        };
        writeln!(
            out,
            "{name} bound log10 size: {}",
            bound.log10_size_string()
        )?;
        if bound.dominates(lift.log_size()) == Dominance::Violated {
            out.flush()?;
            return Err(Failure::Constructive(format!(
                "lift exceeds the {name} bound"
            )));
        }
    }
    out.flush()?;
    Ok(())
}

fn classify_cmd(cli: &Cli, point: Option<&str>) -> Result<(), Failure> {
    cli.format(&[Format::Text], Format::Text)?;
    let prime = cli.prime()?;
    let x = match point {
        Some(lit) => ModPoint::parse(prime, lit)?,
        None => cli.target(prime)?,
    };
    let surface = Surface::new(prime);
    let mut out = cli.sink()?;
    for axis in Axis::ALL {
        let v = x.coord(axis);
        let c = surface.classify(v);
        let yn = |b: bool| if b { "yes" } else { "no" };
        write!(
            out,
            "x{axis}={v}: {}, ord {}, maximal: {}",
            c.kind,
            c.order,
            yn(surface.is_maximal_order(c.order))
        )?;
        if axis == Axis::X3 {
            write!(out, "; point in cage: {}", yn(x.is_maximal(&surface)))?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

fn connectivity_cmd(cli: &Cli) -> Result<(), Failure> {
    cli.format(&[Format::Text], Format::Text)?;
    let single = cli.p.is_some();
    let primes = cli.prime_list((5, 199))?;
    let results: Vec<_> = primes
        .par_iter()
        .map(|&p| GraphIndex::build(p, cli.cap_enum).map(|g| (p, g.len(), g.components())))
        .collect::<Result<_, _>>()?;
    let mut out = cli.sink()?;
    let mut disconnected = Vec::new();
    for (p, n, c) in &results {
        let line = if c.connected {
            format!("connected, {n} vertices")
        } else {
            disconnected.push(p.get());
            format!(
                "disconnected, {} components, {n} vertices",
                c.component_sizes.len()
            )
        };
        if single {
            writeln!(out, "{line}")?;
        } else {
            writeln!(out, "p={}: {line}", p.get())?;
        }
    }
    out.flush()?;
    if disconnected.is_empty() {
        Ok(())
    } else {
        Err(Failure::Disconnected(format!(
            "disconnected at p = {disconnected:?}"
        )))
    }
}

fn export_cmd(cli: &Cli) -> Result<(), Failure> {
    let format = cli.format(&[Format::Csv, Format::Dot], Format::Csv)?;
    let prime = cli.prime()?;
    let g = GraphIndex::build(prime, cli.cap_enum)?;
    let mut out = cli.sink()?;
    match format {
        Format::Dot => write_dot(&g, &mut out)?,
        _ => write_vertex_csv(&g, &Surface::new(prime), &mut out)?,
    }
    out.flush()?;
    Ok(())
}

/// `h_lower` when `p` is within the spectral cap.
fn h_lower(cli: &Cli, prime: Prime) -> Result<Option<f64>, Failure> {
    if prime.get() > cli.cap_spectral {
        return Ok(None);
    }
    let g = GraphIndex::build(prime, cli.cap_enum)?;
    Ok(Some(
        spectral_gap_lower_bound(&g, &cli.spectral_options())?.h_lower,
    ))
}

fn bounds_cmd(cli: &Cli) -> Result<(), Failure> {
    cli.format(&[Format::Csv], Format::Csv)?;
    let primes = cli.prime_list((5, 199))?;
    let reports: Vec<BoundReport> = primes
        .par_iter()
        .map(|&p| -> Result<BoundReport, Failure> { Ok(BoundReport::new(p, h_lower(cli, p)?)?) })
        .collect::<Result<_, _>>()?;
    let mut out = cli.sink()?;
    BoundReport::write_csv(&reports, &mut out)?;
    out.flush()?;
    Ok(())
}

fn spectral_cmd(cli: &Cli) -> Result<(), Failure> {
    cli.format(&[Format::Csv], Format::Csv)?;
    let primes = cli.prime_list((5, 199))?;
    let opts = cli.spectral_options();
    let rows: Vec<_> = primes
        .par_iter()
        .map(|&p| -> Result<_, Failure> {
            let g = GraphIndex::build(p, cli.cap_enum)?;
            Ok((p.get(), g.len(), spectral_gap_lower_bound(&g, &opts)?))
        })
        .collect::<Result<_, _>>()?;
    let mut out = cli.sink()?;
    writeln!(
        out,
        "p,vertices,lambda2,rayleigh,residual,h_lower,iterations"
    )?;
    for (p, n, e) in rows {
        writeln!(
            out,
            "{p},{n},{:.9},{:.9},{:.3e},{:.9},{}",
            e.lambda2, e.rayleigh, e.residual, e.h_lower, e.iterations
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Worker count from `MARKOFF_THREADS`, if set.
fn thread_count(var: Option<&str>) -> Result<Option<usize>, Failure> {
    let Some(v) = var else {
        return Ok(None);
    };
    v.parse()
        .ok()
        .filter(|&n| n > 0)
        .map(Some)
        .ok_or_else(|| Failure::Domain(format!("MARKOFF_THREADS={v:?} is not a positive integer")))
}

fn init_threads() -> Result<(), Failure> {
    let var = std::env::var("MARKOFF_THREADS").ok();
    if let Some(n) = thread_count(var.as_deref())? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Io(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|()| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Runs the CLI with `--out` pointed at a temp file; returns the result
    /// and whatever was written.
    fn invoke(args: &[&str]) -> (Result<(), Failure>, String) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out");
        let mut argv = vec!["markoff"];
        argv.extend_from_slice(args);
        argv.extend_from_slice(&["--out", path.to_str().unwrap()]);
        let cli = Cli::try_parse_from(argv).expect("valid arguments");
        let r = run(&cli);
        let text = std::fs::read_to_string(&path).unwrap_or_default();
        (r, text)
    }

    fn output(args: &[&str]) -> String {
        let (r, text) = invoke(args);
        if let Err(f) = r {
            panic!("{args:?} failed: {}", f.message());
        }
        text
    }

    fn code(args: &[&str]) -> u8 {
        invoke(args).0.err().map_or(0, |f| f.code())
    }

    #[test]
    fn classify_point() {
        let s = output(&["classify", "1,1,2", "-p", "11"]);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "x1=1: hyperbolic, ord 5, maximal: no");
        assert_eq!(
            lines[2],
            "x3=2: elliptic, ord 12, maximal: yes; point in cage: yes"
        );
        assert_eq!(output(&["classify", "-p", "11", "--to", "1,1,2"]), s);
    }

    #[test]
    fn path_word() {
        assert_eq!(
            output(&["path", "-p", "29", "--to", "1,2,5", "--method", "bgs"]),
            "r1^2\n"
        );
        assert_eq!(
            output(&["path", "-p", "29", "--to", "1,1,1", "--method", "bfs"]),
            "id\n"
        );
        let csv = output(&["path", "-p", "31", "--to", "1,1,2", "--format", "csv"]);
        let mut r = csv::Reader::from_reader(csv.as_bytes());
        assert_eq!(r.headers().unwrap(), vec!["stage", "word", "end"]);
        let last = r.records().last().unwrap().unwrap();
        assert_eq!(&last[2], "1,1,2");
    }

    #[test]
    fn connectivity_line() {
        assert_eq!(
            output(&["connectivity", "-p", "31"]),
            "connected, 868 vertices\n"
        );
        let range = output(&["connectivity", "--primes", "2..13"]);
        assert_eq!(range.lines().count(), 4);
        assert!(range.starts_with("p=5: connected, 40 vertices\n"));
    }

    #[test]
    fn lift_lines() {
        let s = output(&["lift", "-p", "59", "--to", "1,34,30"]);
        assert!(s.starts_with("word: r1^5\nlift: 1,34,89\n"), "{s}");
        let s = output(&["lift", "-p", "59", "--to", "1,34,30", "--method", "search"]);
        assert!(s.starts_with("lift: 1,34,89\n"), "{s}");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(code(&["path", "-p", "8", "--to", "1,1,1"]), 2);
        assert_eq!(code(&["path", "-p", "7", "--to", "1,2,3"]), 2);
        assert_eq!(code(&["path", "-p", "7"]), 2);
        assert_eq!(code(&["table111", "--format", "dot"]), 2);
        assert_eq!(code(&["bounds", "-p", "31", "--cap-enum", "0"]), 2);
        assert_eq!(code(&["export", "-p", "31", "--cap-enum", "10"]), 2);
        assert_eq!(
            code(&["lift", "-p", "59", "--to", "1,34,30", "--cap-digits", "1"]),
            0
        );
        assert_eq!(Failure::Disconnected(String::new()).code(), 4);
        assert_eq!(
            Failure::from(GraphError::Disconnected { components: 2 }).code(),
            4
        );
        assert_eq!(
            Failure::from(BgsError::EndgameExhausted(String::new())).code(),
            3
        );
        assert!(Cli::try_parse_from(["markoff", "table111", "--primes", "9..5"]).is_err());
    }

    #[test]
    fn threads_variable() {
        assert_eq!(thread_count(None).unwrap(), None);
        assert_eq!(thread_count(Some("3")).unwrap(), Some(3));
        assert_eq!(thread_count(Some("0")).unwrap_err().code(), 2);
        assert_eq!(thread_count(Some("zero")).unwrap_err().code(), 2);
    }

    #[test]
    fn table_footnote() {
        let s = output(&["table111", "--primes", "2..7"]);
        assert_eq!(s.lines().next(), Some("5\trot₁¹ : (1,1,1),(1,1,2)"));
        assert!(s.lines().last().unwrap().starts_with("# p = 2, 3"));
    }

    #[test]
    fn cage_stats_csv_round_trips() {
        let text = output(&["cage-stats", "--primes", "5..60"]);
        let rows: Vec<markoff::experiments::CageStats> = csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(rows.len(), 15);
        let mut again = Vec::new();
        write_cage_csv(&rows, &mut again).unwrap();
        assert_eq!(String::from_utf8(again).unwrap(), text);
    }

    #[test]
    fn level_dist_csv() {
        let s = output(&["level-dist", "--level", "8", "--bins", "5"]);
        let mut r = csv::Reader::from_reader(s.as_bytes());
        assert_eq!(r.headers().unwrap(), vec!["bin", "lo", "hi", "count"]);
        let total: usize = r
            .records()
            .map(|rec| rec.unwrap()[3].parse::<usize>().unwrap())
            .sum();
        assert_eq!(total, 3 << 7);
    }

    #[test]
    fn export_formats() {
        let csv = output(&["export", "-p", "7"]);
        let mut r = csv::Reader::from_reader(csv.as_bytes());
        assert_eq!(
            r.headers().unwrap(),
            vec!["id", "x1", "x2", "x3", "class1", "class2", "class3", "ord", "in_cage"]
        );
        assert_eq!(r.records().count(), 28);
        let dot = output(&["export", "-p", "7", "--format", "dot"]);
        assert!(dot.starts_with("graph G_7 {"));
        assert!(dot
            .lines()
            .filter(|l| l.contains(" -- "))
            .all(|l| l.contains("[label=rot_")));
    }

    #[test]
    fn identical_config_identical_bytes() {
        for args in [
            &["bounds", "--primes", "5..40", "--seed", "7"][..],
            &["spectral", "-p", "31", "--seed", "7"][..],
            &["cage-stats", "--primes", "5..100"][..],
            &["export", "-p", "13", "--format", "dot"][..],
            &["table111"][..],
        ] {
            assert_eq!(output(args), output(args), "{args:?}");
        }
    }

    #[test]
    fn bounds_csv_columns() {
        let s = output(&["bounds", "--primes", "5..11"]);
        let mut r = csv::Reader::from_reader(s.as_bytes());
        assert_eq!(r.headers().unwrap().len(), 7);
        let first = r.records().next().unwrap().unwrap();
        assert_eq!(&first[0], "5");
        assert!(first[5].parse::<f64>().unwrap() > 0.0);
    }
}
