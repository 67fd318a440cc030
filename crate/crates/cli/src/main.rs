//! `qtangle`: evaluate coloured tangle invariants and run the verification
//! suites from the command line.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qtangle::grasscoh::{build_cohomology, poincare_matches_gaussian, wolffhardt_complex};
use qtangle::intertwiner::{
    charjw_check, is_intertwiner, jones_wenzl, jones_wenzl_divided, slide_identity_checks,
    IntertwinerJson,
};
use qtangle::invariant::{
    normalized_invariant_with, run_trial, verify_invariance, InvarianceParams, TrialOutcome,
};
use qtangle::qseries::{bigraded_expand_homofunknot, DEFAULT_PRECISION};
use qtangle::quiverkat::{
    euler_characteristic_gl2, ext_self_l1, gamma_algebra, gamma_algebra_listed, gl2_algebra,
    gl3_algebra, gor_homology, gor_report, projector_complexes, standard_modules_gl4,
    verify_repaired_p12, ComplexCheck,
};
use qtangle::tangle::{parse, GammaConvention};
use qtangle::{Error, LaurentSeries, Mode, MoveKind};

const PRECISION_ENV: &str = "QTANGLE_PRECISION";
const MIN_PRECISION: usize = 8;

const EXIT_FAILED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "qtangle",
    version,
    about = "Coloured U_q(sl2) tangle invariants and their categorified checks"
)]
struct Cli {
    /// Coefficients kept per series, at least 8 [default: $QTANGLE_PRECISION or 64]
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Seed for randomized runs
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print a JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalized invariant of a tangle file
    Eval {
        /// Tangle file in the line-oriented diagram format
        file: PathBuf,
        /// Cable the whole diagram, or project after every slice
        #[arg(long, value_enum, default_value_t = ModeArg::Global)]
        mode: ModeArg,
    },
    /// Run a verification suite
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Cohomology of Gr(k, n) and its bimodule resolution
    Grassmann {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Also build the resolution and check it
        #[arg(long)]
        check_complex: bool,
        /// Lowest homological degree of the resolution
        #[arg(long, default_value_t = -6, allow_negative_numbers = true)]
        hbound: i64,
    },
    /// Quiver algebras and projector complexes
    QuiverCheck {
        /// Run only this example; all of them when omitted
        #[arg(long, value_enum)]
        which: Option<Which>,
    },
    /// Ext of the simple module L(1) over A(Γ)
    UnknotHomology {
        /// Largest homological degree, counted downwards
        #[arg(long, default_value_t = 8)]
        hmax: i64,
    },
    /// Homology of the GOR complex B_n
    Gor {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Lowest homological degree
        #[arg(long, default_value_t = -8, allow_negative_numbers = true)]
        hbound: i64,
        /// Largest internal degree kept
        #[arg(long, default_value_t = 24)]
        qbound: i64,
    },
}

#[derive(Subcommand, Debug)]
enum Suite {
    /// Random diagrams, random moves, exact comparison of invariants
    Invariance {
        /// Comma-separated move names: r1, r2, r3, cr4, cr5, cr6, kink-pair
        #[arg(long, value_delimiter = ',', value_parser = parse_move, default_value = "r2")]
        moves: Vec<MoveKind>,
        /// Largest colour
        #[arg(long, default_value_t = 1)]
        colours: u32,
        /// Number of random trials
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Run only this trial
        #[arg(long)]
        trial: Option<usize>,
        /// Slices per random diagram
        #[arg(long, default_value_t = 8)]
        slices: usize,
        /// Largest cabled width of a random diagram
        #[arg(long, default_value_t = 6)]
        max_cabled: u32,
        /// Evaluation mode; Global unless the cabling is too wide
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Use the opposite sign of γ
        #[arg(long)]
        flipped_gamma: bool,
    },
    /// Projector identities for n = 1..N
    JonesWenzl {
        #[arg(long, default_value_t = 4)]
        n: u32,
    },
    /// Slides along nested cups for n = 1..N and all k <= n
    Slides {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Global,
    Sliced,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Global => Mode::Global,
            ModeArg::Sliced => Mode::Sliced,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Which {
    Gl2,
    Gl3,
    Gl4,
}

fn parse_move(s: &str) -> Result<MoveKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A finished command: text or JSON output and whether every check passed.
struct Report {
    ok: bool,
    text: String,
    json: Value,
}

/// Pass/fail lines of a verification suite.
#[derive(Default)]
struct Checks {
    lines: Vec<(bool, String)>,
    notes: Vec<String>,
}

impl Checks {
    fn push(&mut self, ok: bool, line: impl Into<String>) {
        self.lines.push((ok, line.into()));
    }

    fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    fn ok(&self) -> bool {
        self.lines.iter().all(|(ok, _)| *ok)
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for (ok, line) in &self.lines {
            let _ = writeln!(out, "{} {line}", if *ok { "PASS" } else { "FAIL" });
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => EXIT_PARSE,
            Error::Validation { .. } | Error::InvalidMove(_) => EXIT_VALIDATION,
            Error::Domain(_) | Error::IndexOutOfRange(_) => EXIT_USAGE,
            _ => EXIT_FAILED,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn precision(cli: &Cli) -> Result<usize, CliError> {
    let p = match cli.precision {
        Some(p) => p,
        None => match std::env::var(PRECISION_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| usage(format!("{PRECISION_ENV} must be an integer, got `{v}`")))?,
            Err(_) => DEFAULT_PRECISION,
        },
    };
    if p < MIN_PRECISION {
        return Err(usage(format!(
            "precision must be at least {MIN_PRECISION}, got {p}"
        )));
    }
    Ok(p)
}

fn move_list(moves: &[MoveKind]) -> String {
    moves.iter().map(|m| m.name()).collect::<Vec<_>>().join(",")
}

fn eval(file: &PathBuf, mode: ModeArg, precision: usize) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| usage(format!("cannot read {}: {e}", file.display())))?;
    let d = parse(&text)?;
    d.validate()?;
    let r = normalized_invariant_with(&d, precision, mode.into(), GammaConvention::Standard)?;
    let mut json = json!({
        "diagram": d.name,
        "mode": format!("{mode:?}").to_lowercase(),
        "gamma": r.gamma,
        "precision": r.precision,
    });
    let body = match r.scalar() {
        Some(v) => {
            json["value"] = serde_json::to_value(v.to_json()).expect("series serializes");
            format!("{v}\n")
        }
        None => {
            let m = r.value.to_json();
            json["map"] = serde_json::to_value(&m).expect("map serializes");
            block_text(&m)
        }
    };
    let window = match r.precision.achieved {
        Some(a) => format!("{a} coefficients from the leading term"),
        None => "exact".into(),
    };
    let text = format!("γ = {}, window: {window}\n{body}", r.gamma);
    Ok(Report {
        ok: r.precision.meets_request(),
        text,
        json,
    })
}

/// Each weight block as a matrix with rows and columns labelled by basis indices.
fn block_text(m: &IntertwinerJson) -> String {
    let label = |idx: &[u32]| idx.iter().map(u32::to_string).collect::<String>();
    let mut out = format!("{:?} -> {:?}\n", m.source, m.target);
    for b in &m.blocks {
        let _ = writeln!(out, "weight {}:", b.weight);
        for (row, entries) in b.rows.iter().zip(&b.entries) {
            let cells: Vec<String> = b
                .cols
                .iter()
                .zip(entries)
                .map(|(col, e)| {
                    let v = LaurentSeries::from_json(e).expect("series from the engine");
                    format!("{} <- {}: {v}", label(row), label(col))
                })
                .collect();
            let _ = writeln!(out, "  {}", cells.join("; "));
        }
    }
    out
}

fn reproduce(o: &TrialOutcome, params: &InvarianceParams, flipped: bool) -> String {
    let mut cmd = format!(
        "qtangle verify invariance --moves {} --colours {} --trials {} --trial {} --slices {} --max-cabled {} --seed {} --precision {}",
        move_list(&params.moves),
        params.max_colour,
        params.trials,
        o.trial,
        params.n_slices,
        params.max_cabled,
        params.seed,
        params.precision
    );
    if let Some(m) = params.mode {
        cmd.push_str(&format!(" --mode {}", format!("{m:?}").to_lowercase()));
    }
    if flipped {
        cmd.push_str(" --flipped-gamma");
    }
    cmd
}

#[allow(clippy::too_many_arguments)]
fn verify_invariance_cmd(
    moves: Vec<MoveKind>,
    colours: u32,
    trials: usize,
    trial: Option<usize>,
    slices: usize,
    max_cabled: u32,
    mode: Option<ModeArg>,
    flipped: bool,
    seed: u64,
    precision: usize,
) -> Result<Report, CliError> {
    if colours == 0 {
        return Err(usage("--colours must be positive"));
    }
    let params = InvarianceParams {
        max_colour: colours,
        trials,
        moves,
        precision,
        seed,
        n_slices: slices,
        max_cabled: max_cabled.max(colours),
        convention: if flipped {
            GammaConvention::Flipped
        } else {
            GammaConvention::Standard
        },
        mode: mode.map(Mode::from),
        ..Default::default()
    };
    let outcomes = match trial {
        Some(t) => vec![run_trial(&params, t)],
        None => verify_invariance(&params).outcomes,
    };
    let mut checks = Checks::default();
    let mut records = Vec::new();
    for o in &outcomes {
        let mut line = format!("trial {} {}", o.trial, o.kind);
        if let Some(w) = o.window {
            line.push_str(&format!(" window {w}"));
        }
        let mut record = serde_json::to_value(o).expect("outcome serializes");
        if !o.passed {
            let cmd = reproduce(o, &params, flipped);
            if let Some(e) = &o.error {
                line.push_str(&format!(" error: {e}"));
            }
            line.push_str(&format!(" (reproduce: {cmd})"));
            record["reproduce"] = json!(cmd);
        }
        checks.push(o.passed, line);
        records.push(record);
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let json = json!({
        "suite": "invariance",
        "params": params,
        "passed": passed,
        "failed": outcomes.len() - passed,
        "outcomes": records,
    });
    Ok(finish(checks, json))
}

fn finish(checks: Checks, mut json: Value) -> Report {
    let ok = checks.ok();
    json["ok"] = json!(ok);
    if !checks.notes.is_empty() {
        json["notes"] = json!(checks.notes);
    }
    let text = format!(
        "{}{}\n",
        checks.text(),
        serde_json::to_string(&json).expect("summary serializes")
    );
    Report { ok, text, json }
}

fn verify_jones_wenzl(n: u32, precision: usize) -> Report {
    let mut checks = Checks::default();
    let mut rows = Vec::new();
    for m in 1..=n {
        let p = jones_wenzl(m, precision);
        let characterized = charjw_check(&p);
        let divided = p.eq_upto(&jones_wenzl_divided(m, precision));
        let intertwines = is_intertwiner(&p);
        checks.push(
            characterized,
            format!("p_{m} is idempotent and killed by every turnback"),
        );
        checks.push(divided, format!("p_{m} equals the divided power formula"));
        checks.push(intertwines, format!("p_{m} commutes with E, F, K"));
        rows.push(json!({"n": m, "characterized": characterized, "divided_powers": divided, "intertwiner": intertwines}));
    }
    finish(
        checks,
        json!({"suite": "jones-wenzl", "precision": precision, "results": rows}),
    )
}

fn verify_slides(n: usize, precision: usize) -> Report {
    let mut checks = Checks::default();
    let mut rows = Vec::new();
    for m in 1..=n {
        for k in 0..=m as u32 {
            let r = slide_identity_checks(m, k, precision);
            checks.push(r.all(), format!("slides along {m} nested cups, k = {k}"));
            rows.push(r);
        }
    }
    finish(
        checks,
        json!({"suite": "slides", "precision": precision, "results": rows}),
    )
}

fn grassmann(k: usize, n: usize, check_complex: bool, hbound: i64) -> Result<Report, CliError> {
    let coh = build_cohomology(k, n)?;
    let mut checks = Checks::default();
    let gaussian = poincare_matches_gaussian(&coh)?;
    checks.push(
        gaussian,
        format!("graded dimensions of H(Gr({k},{n})) are the Gaussian binomial"),
    );
    let mut json = json!({
        "k": k,
        "n": n,
        "dim": coh.dim(),
        "graded_dims": coh.graded_dims(),
    });
    if check_complex {
        let r = wolffhardt_complex(k, n, hbound)?.check_resolution();
        checks.push(r.d_squared_zero, format!("d² = 0 down to h = {hbound}"));
        checks.push(r.acyclic_below_zero, "no homology below degree 0");
        checks.push(
            r.degree_zero_matches,
            "homology in degree 0 is the cohomology ring",
        );
        json["resolution"] = serde_json::to_value(&r).expect("report serializes");
    }
    let mut report = finish(checks, json);
    report.text = format!(
        "dim H(Gr({k},{n})) = {}, graded {:?}\n{}",
        coh.dim(),
        coh.graded_dims(),
        report.text
    );
    Ok(report)
}

fn complex_line(c: &ComplexCheck) -> String {
    match c.failures.first() {
        Some(f) => format!("{} has d² = 0 through length {} ({f})", c.name, c.length),
        None => format!("{} has d² = 0 through length {}", c.name, c.length),
    }
}

const COMPLEX_LENGTH: usize = 8;

fn quiver_check(which: Option<Which>) -> Result<Report, CliError> {
    let wanted = |w| which.is_none_or(|x| x == w);
    let mut checks = Checks::default();
    let mut json = json!({});
    let complexes = projector_complexes(COMPLEX_LENGTH)?;
    if wanted(Which::Gl2) {
        let a = gl2_algebra()?;
        checks.push(a.dim() == 5, format!("dim A(gl2) = {}", a.dim()));
        let (alg, c) = &complexes[0];
        let check = c.verify(alg);
        checks.push(check.ok(), complex_line(&check));
        let euler = euler_characteristic_gl2(12)?;
        let line = match euler.shift {
            Some(s) => format!("Euler characteristic is q^{s} times the weight-zero block of p_2"),
            None => "Euler characteristic does not match p_2 up to a power of q".into(),
        };
        checks.push(euler.shift.is_some(), line);
        json["gl2"] = json!({"dim": a.dim(), "graded_dims": a.graded_dims(), "complex": check, "euler": euler});
    }
    if wanted(Which::Gl3) {
        let a = gl3_algebra()?;
        let end3 = a.idempotent_subalgebra(&[3]).graded_dims();
        checks.push(
            end3 == [1, 0, 1, 0, 1],
            format!("End((3)A) has graded dimensions {end3:?}"),
        );
        let mut results = Vec::new();
        for (alg, c) in &complexes[1..] {
            let check = c.verify(alg);
            checks.push(check.ok(), complex_line(&check));
            results.push(check);
        }
        let repaired = verify_repaired_p12(COMPLEX_LENGTH)?;
        checks.note(format!(
            "{} with three signs of f_3 repaired: d² = 0 {}",
            repaired.name,
            repaired.ok()
        ));
        json["gl3"] = json!({"dim": a.dim(), "graded_dims": a.graded_dims(), "complexes": results, "repaired_p12": repaired});
    }
    if wanted(Which::Gl4) {
        let a = gamma_algebra()?;
        let listed = gamma_algebra_listed()?;
        checks.push(
            a.dim() == 97,
            format!(
                "dim A(Γ) = {} (listed relations alone give {})",
                a.dim(),
                listed.dim()
            ),
        );
        let s = standard_modules_gl4()?;
        checks.push(
            s.ok(),
            format!(
                "standard modules {:?}, proper standard of dimension {}",
                s.delta_dims, s.bar_delta5_dim
            ),
        );
        json["gl4"] = json!({"dim": a.dim(), "graded_dims": a.graded_dims(), "listed_dim": listed.dim(), "standard_modules": s});
    }
    Ok(finish(checks, json))
}

fn unknot_homology(hmax: i64) -> Result<Report, CliError> {
    if hmax < 1 {
        return Err(usage(format!("--hmax must be positive, got {hmax}")));
    }
    let r = ext_self_l1(-hmax)?;
    let mut checks = Checks::default();
    checks.push(
        r.resolution.ok(),
        format!(
            "minimal projective resolution of L(1) down to h = {}",
            -hmax
        ),
    );
    checks.push(r.ext_matches, "Ext table");
    checks.push(
        r.poincare_matches,
        "shifted Poincaré series equals the closed form",
    );
    let mut table = String::new();
    for (h, row) in &r.ext {
        let entries: Vec<String> = row
            .iter()
            .map(|(s, m)| {
                if *m == 1 {
                    format!("C<{s}>")
                } else {
                    format!("C<{s}>^{m}")
                }
            })
            .collect();
        let _ = writeln!(
            table,
            "Ext^{h} = {}",
            if entries.is_empty() {
                "0".into()
            } else {
                entries.join(" + ")
            }
        );
    }
    let mut report = finish(checks, serde_json::to_value(&r).expect("report serializes"));
    report.text = table + &report.text;
    Ok(report)
}

fn gor(n: usize, hbound: i64, qbound: i64) -> Result<Report, CliError> {
    let (h, d2) = gor_homology(n, hbound, qbound)?;
    let r = gor_report(n, hbound, qbound)?;
    let mut checks = Checks::default();
    checks.push(d2, format!("d² = 0 on B_{n}"));
    let text = format!(
        "homology: {h}\nclosed form: {}\nregradings matching the closed form: {:?}\n",
        bigraded_expand_homofunknot(hbound),
        r.dictionaries
    );
    let mut report = finish(checks, serde_json::to_value(&r).expect("report serializes"));
    report.text = text + &report.text;
    Ok(report)
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let p = precision(&cli)?;
    match cli.command {
        Command::Eval { file, mode } => eval(&file, mode, p),
        Command::Verify { suite } => match suite {
            Suite::Invariance {
                moves,
                colours,
                trials,
                trial,
                slices,
                max_cabled,
                mode,
                flipped_gamma,
            } => verify_invariance_cmd(
                moves,
                colours,
                trials,
                trial,
                slices,
                max_cabled,
                mode,
                flipped_gamma,
                cli.seed,
                p,
            ),
            Suite::JonesWenzl { n } => Ok(verify_jones_wenzl(n, p)),
            Suite::Slides { n } => Ok(verify_slides(n, p)),
        },
        Command::Grassmann {
            k,
            n,
            check_complex,
            hbound,
        } => grassmann(k, n, check_complex, hbound),
        Command::QuiverCheck { which } => quiver_check(which),
        Command::UnknotHomology { hmax } => unknot_homology(hmax),
        Command::Gor { n, hbound, qbound } => gor(n, hbound, qbound),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(r) => {
            let out = if json {
                serde_json::to_string_pretty(&r.json).expect("report serializes") + "\n"
            } else {
                r.text
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
