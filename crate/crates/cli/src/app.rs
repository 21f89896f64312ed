use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::thread;

use serde_json::{json, Value};

use rankgain_core::gaincert::{check_certificate, required_d};
use rankgain_core::search::{candidate_params, density_scan, DensityReport};
use rankgain_core::selftest::{run_all, SuiteReport};
use rankgain_core::{
    make_certificate, verify_certificate, Behavior, Curve, Error, PrimeIdeal, QuadElem, QuadFieldDesc,
    RankGainCertificate, SplitConstraint, Verdicts,
};

use crate::args::{Cli, Command, CurveArgs, DensityArgs, Format, GainArgs, SearchArgs, SelftestArgs, VerifyArgs};

/// Why a command did not succeed, with its exit code.
#[derive(Debug)]
pub enum Failure {
    NoResult(String),
    InvalidInput(String),
    Rejected(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::NoResult(_) => 1,
            Failure::InvalidInput(_) => 2,
            Failure::Rejected(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::NoResult(m) => write!(f, "no result: {m}"),
            Failure::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Failure::Rejected(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotFound(_) | Error::Unsatisfiable(_) => Failure::NoResult(e.to_string()),
            Error::Malformed(_) => Failure::Rejected(e.to_string()),
            Error::InvalidInput(m) => Failure::InvalidInput(m),
            _ => Failure::InvalidInput(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::InvalidInput(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs one command, writing results to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match cli.command {
        Command::Gain(a) => gain(a, out),
        Command::Search(a) => search(a, out),
        Command::Density(a) => density(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Selftest(a) => selftest(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "rankgain: {f}");
            f.exit_code()
        }
    }
}

struct Setup {
    field: QuadFieldDesc,
    curve: Curve<QuadElem>,
    n: u32,
    format: Format,
}

fn setup(args: &CurveArgs) -> std::result::Result<Setup, Failure> {
    if !matches!(args.d, -1 | -3) {
        return Err(Failure::InvalidInput(format!("d must be -1 or -3, got {}", args.d)));
    }
    if !matches!(args.n, 2 | 3 | 4 | 6) {
        return Err(Failure::InvalidInput(format!("n must be 2, 3, 4 or 6, got {}", args.n)));
    }
    if let Some(d) = required_d(args.n) {
        if d != args.d {
            return Err(Failure::InvalidInput(format!("n={} requires d={d}", args.n)));
        }
    }
    let field = QuadFieldDesc::new(args.d)?;
    let a = field.parse_elem(&args.a)?;
    let b = field.parse_elem(&args.b)?;
    let curve = Curve::new(a, b).map_err(|e| Failure::InvalidInput(e.to_string()))?;
    Ok(Setup {
        field,
        curve,
        n: args.n,
        format: args.format,
    })
}

fn parse_constraint(d: i64, s: &str) -> std::result::Result<SplitConstraint, Failure> {
    let (prime, behavior) = s
        .rsplit_once(':')
        .ok_or_else(|| Failure::InvalidInput(format!("constraint {s:?} is not PRIME:BEHAVIOR")))?;
    let behavior = match behavior {
        "irreducible" | "inert" => Behavior::Irreducible,
        "split" => Behavior::Split,
        other => return Err(Failure::InvalidInput(format!("unknown behavior {other:?}"))),
    };
    Ok(SplitConstraint::new(PrimeIdeal::parse(d, prime)?, behavior))
}

fn verdict_lines(v: &Verdicts) -> String {
    let fields = [
        ("lift rational", v.lift_rational),
        ("irreducible", v.irreducible),
        ("degree", v.degree_ok),
        ("cyclic", v.cyclic_ok),
        ("on curve", v.on_curve),
        ("partner", v.partner_ok),
        ("transitive", v.transitive_ok),
        ("conjugate sum zero", v.conjugate_sum_zero),
        ("non-torsion", v.non_torsion),
    ];
    fields
        .iter()
        .map(|(name, ok)| format!("  {:<20}{}\n", name, if *ok { "ok" } else { "FAILED" }))
        .collect()
}

fn certificate_text(cert: &RankGainCertificate) -> String {
    let mut s = format!(
        "curve      y^2 = x^3 + ({})x + ({}) over Q(sqrt({}))\n",
        quad_text(cert, &cert.a),
        quad_text(cert, &cert.b),
        cert.field_d
    );
    s += &format!("degree     {}\n", cert.n);
    s += &format!("{:<11}{}\n", cert.param_name, quad_text(cert, &cert.param));
    if let Some(t) = cert.torsion_bound {
        s += &format!("torsion    T = {t} from primes {}\n", cert.torsion_primes.join(", "));
    }
    if let Some(w) = &cert.non_torsion_witness {
        s += &format!("witness    T*P reduces to a non-zero point at {w}\n");
    }
    s += "verdicts\n";
    s += &verdict_lines(&cert.verdicts);
    match &cert.failure {
        Some(f) => s += &format!("result     no rank gain certified: {f}\n"),
        None => s += "result     rank gain certified\n",
    }
    s
}

fn quad_text(cert: &RankGainCertificate, v: &Value) -> String {
    cert.field()
        .and_then(|k| rankgain_core::gaincert::quad_from_json(k, v))
        .map(|x| x.to_string())
        .unwrap_or_else(|_| v.to_string())
}

fn emit_certificate(cert: &RankGainCertificate, format: Format, output: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let text = cert.to_json_string();
    if let Some(path) = output {
        fs::write(path, format!("{text}\n"))?;
    }
    match format {
        Format::Json => writeln!(out, "{text}")?,
        Format::Text => write!(out, "{}", certificate_text(cert))?,
    }
    match &cert.failure {
        None => Ok(()),
        Some(f) => Err(Failure::NoResult(f.clone())),
    }
}

fn gain(args: GainArgs, out: &mut dyn Write) -> Outcome {
    let s = setup(&args.curve)?;
    let param = s.field.parse_elem(&args.param)?;
    let cert = make_certificate(&s.curve, s.n, &param)?;
    emit_certificate(&cert, s.format, args.output.as_deref(), out)
}

fn search(args: SearchArgs, out: &mut dyn Write) -> Outcome {
    let s = setup(&args.curve)?;
    let constraints = args
        .constraints
        .iter()
        .map(|c| parse_constraint(s.field.d(), c))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut candidates = candidate_params(&s.curve, s.n, &constraints, args.bound)?.peekable();
    let workers = args.workers.clamp(1, 64);
    while candidates.peek().is_some() {
        let batch: Vec<QuadElem> = candidates.by_ref().take(workers).collect();
        let certs = thread::scope(|scope| {
            let handles: Vec<_> = batch
                .iter()
                .map(|param| scope.spawn(|| make_certificate(&s.curve, s.n, param)))
                .collect();
            handles
                .into_iter()
                .map(|h| {
                    h.join()
                        .unwrap_or_else(|_| Err(Error::Internal("worker panicked".into())))
                })
                .collect::<Vec<_>>()
        });
        if let Some(cert) = certs.into_iter().flatten().find(RankGainCertificate::is_valid) {
            return emit_certificate(&cert, s.format, args.output.as_deref(), out);
        }
    }
    Err(Failure::NoResult(format!(
        "no certifiable parameter in [1, {}] meets the constraints",
        args.bound
    )))
}

fn density_text(r: &DensityReport) -> String {
    format!(
        "{:<28} q={:<8} n={} irreducible {}/{} = {:.4}, degenerate {}\n",
        r.prime,
        r.q,
        r.n,
        r.irreducible_count,
        r.total,
        r.fraction_f64(),
        r.degenerate_count
    )
}

fn density(args: DensityArgs, out: &mut dyn Write) -> Outcome {
    let s = setup(&args.curve)?;
    let mut reports = Vec::new();
    for p in &args.primes {
        let prime = PrimeIdeal::parse(s.field.d(), p)?;
        reports.push(density_scan(&s.curve, s.n, &prime, args.workers)?);
    }
    match s.format {
        Format::Json => {
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&reports).expect("reports serialize")
            )?;
        }
        Format::Text => {
            for r in &reports {
                write!(out, "{}", density_text(r))?;
            }
        }
    }
    Ok(())
}

fn read_input(path: &Path) -> io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
    }
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> Outcome {
    let text = read_input(&args.file)?;
    let cert = RankGainCertificate::from_json_str(&text)?;
    let checked = check_certificate(&cert);
    let valid = verify_certificate(&cert);
    match args.format {
        Format::Json => {
            let v = json!({
                "valid": valid,
                "verdicts": checked.as_ref().ok(),
                "error": checked.as_ref().err().map(|e| e.to_string()),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json value"))?;
        }
        Format::Text => {
            if let Ok(v) = &checked {
                write!(out, "{}", verdict_lines(v))?;
            }
            writeln!(out, "{}", if valid { "valid" } else { "INVALID" })?;
        }
    }
    match (valid, checked) {
        (true, _) => Ok(()),
        (false, Err(e)) => Err(Failure::Rejected(e.to_string())),
        (false, Ok(v)) => Err(Failure::Rejected(match v.first_failure() {
            Some(stage) => format!("stage {stage} does not hold"),
            None => "recorded verdicts differ from the recomputed ones".into(),
        })),
    }
}

fn selftest(args: SelftestArgs, out: &mut dyn Write) -> Outcome {
    if args.samples == 0 {
        return Err(Failure::InvalidInput("samples must be positive".into()));
    }
    let reports = run_all(args.seed, args.samples);
    let passed = reports.iter().all(SuiteReport::passed);
    match args.format {
        Format::Json => {
            let v = json!({
                "seed": args.seed,
                "samples": args.samples,
                "passed": passed,
                "suites": reports,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json value"))?;
        }
        Format::Text => {
            for r in &reports {
                let tag = if r.passed() { "PASS" } else { "FAIL" };
                writeln!(out, "{tag} {:<36} {} checks", r.name, r.checked)?;
                for f in r.failures.iter().take(5) {
                    writeln!(out, "     {f}")?;
                }
            }
        }
    }
    if passed {
        Ok(())
    } else {
        let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
        Err(Failure::Rejected(format!("suites failed: {}", failed.join(", "))))
    }
}
