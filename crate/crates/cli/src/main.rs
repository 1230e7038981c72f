use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{ArgGroup, Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use modp_irred::bounds::{
    b_of_q_report, c1_report, c2_report, c_k_report, c_of_n_report, delta_report, jk_bound_report, torsion_report,
};
use modp_irred::criteria::{certify, check_class_coverage, jk_set, scan_places, CertifyOptions};
use modp_irred::ellcurve::PlaceType;
use modp_irred::localchar::{candidate_cases, case_row, exponent_table, verify_case_identity, CaseName};
use modp_irred::parse::{parse_curve, parse_field, parse_rational};
use modp_irred::{Error, FieldDescriptor, DEFAULT_PRECISION};

#[derive(Parser)]
#[command(name = "modp-irred", version, about = "Irreducibility bounds for mod-p isogeny representations")]
struct Cli {
    /// Working precision in bits for interval arithmetic.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Compact single-line JSON instead of pretty-printed output.
    #[arg(long, global = true)]
    json: bool,
    /// Omit the timestamp so identical invocations give identical bytes.
    #[arg(long, global = true)]
    reproducible: bool,
    /// Worker threads for the witness scan.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree, discriminant, class number, regulator and unit rank.
    Invariants { field: String },
    /// One certified bound.
    Bounds(BoundsArgs),
    /// Reduction type, Frobenius data and compatible cases at split places.
    Classify(ClassifyArgs),
    /// Search for witnesses up to a prime and emit a certificate.
    Certify {
        field: String,
        curve: String,
        #[arg(long)]
        max_prime: u64,
    },
    /// Split-ideal set up to 2|disc|^(A h) and its class coverage.
    Jk {
        field: String,
        #[arg(long = "A")]
        a: String,
    },
    /// Local exponent table and the case rows available over a field.
    CaseTable {
        #[arg(default_value = "Q")]
        field: String,
    },
    /// Check the norm identity of one case at one place.
    VerifyCase {
        field: String,
        curve: String,
        #[arg(long)]
        prime: u64,
        /// Image of sqrt(m) selecting the place above the prime.
        #[arg(long)]
        root: Option<u64>,
        #[arg(long)]
        case: String,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("which").required(true).args(["n", "q", "torsion", "c_k", "jk", "c1", "c2", "delta"])))]
struct BoundsArgs {
    field: String,
    /// C(K, n).
    #[arg(long)]
    n: Option<String>,
    /// B(K; q) for a totally split prime q.
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    torsion: bool,
    /// C_K, needs --A.
    #[arg(long = "cK", requires = "a")]
    c_k: bool,
    /// 2|disc|^(A h), needs --A.
    #[arg(long, requires = "a")]
    jk: bool,
    #[arg(long)]
    c1: bool,
    #[arg(long)]
    c2: bool,
    #[arg(long)]
    delta: bool,
    #[arg(long = "A")]
    a: Option<String>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("range").required(true).args(["prime", "max_prime"])))]
struct ClassifyArgs {
    field: String,
    curve: String,
    /// Every place above this split prime.
    #[arg(long)]
    prime: Option<u64>,
    /// Every place above the split primes 5..=M.
    #[arg(long)]
    max_prime: Option<u64>,
}

#[derive(Serialize)]
struct CommandResult {
    status: &'static str,
    command: &'static str,
    payload: Value,
    diagnostics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_at: Option<String>,
}

struct Failure {
    error: Error,
    internal: bool,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let internal = matches!(error, Error::Overflow(_) | Error::Domain(_));
        Failure { error, internal }
    }
}

type Outcome = Result<(Value, Vec<String>), Failure>;

fn to_value<T: Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure { error: Error::Domain(e.to_string()), internal: true })
}

/// JSON numbers become decimal strings.
fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify_numbers(v))).collect()),
        other => other,
    }
}

fn cmd_invariants(field: &str, prec: u32) -> Outcome {
    let f = parse_field(field)?;
    let inv = f.invariants(prec)?;
    let payload = json!({
        "field": f.to_string(),
        "d": inv.degree,
        "disc": inv.discriminant.to_string(),
        "h": inv.class_number,
        "r": inv.unit_rank,
        "R": to_value(&inv.regulator)?,
        "provenance": to_value(&inv.provenance)?,
    });
    Ok((payload, vec![]))
}

fn cmd_bounds(args: &BoundsArgs, prec: u32) -> Outcome {
    let f = parse_field(&args.field)?;
    let a = args.a.as_deref().map(parse_rational).transpose()?;
    let report = if let Some(n) = &args.n {
        let n = BigInt::from_str(n).map_err(|_| Error::Parse(format!("bad integer '{n}'")))?;
        c_of_n_report(&f, &n, prec)?
    } else if let Some(q) = args.q {
        b_of_q_report(&f, q, prec)?
    } else if args.torsion {
        torsion_report(&f, prec)?
    } else if args.c_k {
        c_k_report(&f, a.as_ref().expect("clap requires A"), prec)?
    } else if args.jk {
        jk_bound_report(&f, a.as_ref().expect("clap requires A"), prec)?
    } else if args.c1 {
        c1_report(&f, prec)?
    } else if args.c2 {
        c2_report(&f, prec)?
    } else {
        delta_report(&f, prec)?
    };
    Ok((to_value(&report)?, vec![]))
}

fn place_entry(
    curve: &modp_irred::ellcurve::WeierstrassModel,
    f: &FieldDescriptor,
    place: &modp_irred::DegreeOnePlace,
    t: PlaceType,
) -> Outcome {
    let fd = if t.is_good() { Some(curve.trace_of_frobenius(f, place)?) } else { None };
    let (cases, diags) = candidate_cases(f, t, fd.as_ref())?;
    let names: Vec<&str> = cases.iter().map(|c| c.case.as_str()).collect();
    let v = json!({
        "place": to_value(place)?,
        "label": place.label(),
        "type": t.name(),
        "frobenius": to_value(&fd)?,
        "cases": names,
    });
    Ok((v, diags))
}

fn cmd_classify(args: &ClassifyArgs, jobs: usize) -> Outcome {
    let f = parse_field(&args.field)?;
    let e = parse_curve(&args.curve, &f)?;
    let (lo, hi) = match (args.prime, args.max_prime) {
        (Some(q), _) => {
            if !f.totally_split(q)? {
                return Err(Error::NotSplit { q }.into());
            }
            (q, q)
        }
        (None, Some(m)) => (5, m),
        _ => unreachable!("clap group"),
    };
    let scan = scan_places(&e, &f, hi.max(5), jobs)?;
    let mut diagnostics = scan.diagnostics.clone();
    let mut places = Vec::new();
    for c in scan.classifications.iter().filter(|c| c.place.q >= lo) {
        match c.place_type {
            Some(t) => {
                let (v, d) = place_entry(&e, &f, &c.place, t)?;
                places.push(v);
                diagnostics.extend(d);
            }
            None => places.push(to_value(c)?),
        }
    }
    if lo == hi && lo < 5 {
        diagnostics.push(format!("residue characteristic {lo} is not classified"));
    }
    let payload = json!({
        "field": f.to_string(),
        "curve": e.to_string(),
        "j": e.j_invariant().to_string(),
        "places": places,
    });
    Ok((payload, diagnostics))
}

fn cmd_certify(field: &str, curve: &str, m: u64, prec: u32, jobs: usize) -> Outcome {
    let f = parse_field(field)?;
    let e = parse_curve(curve, &f)?;
    let (outcome, diags) = certify(&e, &f, m, CertifyOptions { precision: prec, jobs })?;
    Ok((to_value(&outcome)?, diags))
}

fn cmd_jk(field: &str, a: &str) -> Outcome {
    let f = parse_field(field)?;
    let a = parse_rational(a)?;
    let set = jk_set(&f, &a)?;
    let mut payload = to_value(&set)?;
    let obj = payload.as_object_mut().expect("struct serializes to an object");
    obj.insert("primes".into(), to_value(&set.primes())?);
    let mut diagnostics = vec![];
    if f.is_imaginary_quadratic() {
        let cov = check_class_coverage(&f, &set)?;
        obj.insert("coverage".into(), Value::Bool(cov.covered));
        obj.insert("class_number".into(), to_value(&cov.class_number)?);
        obj.insert("class_witnesses".into(), to_value(&cov.witnesses)?);
    } else {
        obj.insert("coverage".into(), Value::String("unverified".into()));
        diagnostics.push("class coverage is only checked for imaginary quadratic fields".into());
    }
    if !set.complete {
        diagnostics.push(format!("places listed up to norm {}; the rest is enumerated on demand", set.listed_up_to));
    }
    Ok((payload, diagnostics))
}

fn cmd_case_table(field: &str) -> Outcome {
    let f = parse_field(field)?;
    let mut cases = Vec::new();
    let mut diagnostics = Vec::new();
    for c in CaseName::ALL {
        match case_row(c, &f) {
            Ok(row) => cases.push(to_value(&row)?),
            Err(e) => diagnostics.push(format!("{}: {e}", c.as_str())),
        }
    }
    let payload = json!({
        "field": f.to_string(),
        "exponent_table": to_value(&exponent_table())?,
        "cases": cases,
    });
    Ok((payload, diagnostics))
}

fn cmd_verify_case(field: &str, curve: &str, q: u64, root: Option<u64>, case: &str, prec: u32) -> Outcome {
    let f = parse_field(field)?;
    let e = parse_curve(curve, &f)?;
    let case = CaseName::from_str(case)?;
    let place = f.place(q, root)?;
    let row = case_row(case, &f)?;
    let t = e.classify_place(&f, &place)?;
    let holds = verify_case_identity(&e, &f, &place, &row, prec)?;
    let payload = json!({
        "field": f.to_string(),
        "curve": e.to_string(),
        "place": to_value(&place)?,
        "label": place.label(),
        "type": t.name(),
        "case": case.as_str(),
        "holds": holds,
    });
    Ok((payload, vec![]))
}

fn run(cli: &Cli) -> (&'static str, Outcome) {
    let prec = cli.precision;
    match &cli.command {
        Command::Invariants { field } => ("invariants", cmd_invariants(field, prec)),
        Command::Bounds(a) => ("bounds", cmd_bounds(a, prec)),
        Command::Classify(a) => ("classify", cmd_classify(a, cli.jobs)),
        Command::Certify { field, curve, max_prime } => {
            ("certify", cmd_certify(field, curve, *max_prime, prec, cli.jobs))
        }
        Command::Jk { field, a } => ("jk", cmd_jk(field, a)),
        Command::CaseTable { field } => ("case-table", cmd_case_table(field)),
        Command::VerifyCase { field, curve, prime, root, case } => {
            ("verify-case", cmd_verify_case(field, curve, *prime, *root, case, prec))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (command, outcome) = run(&cli);
    let generated_at = (!cli.reproducible).then(|| {
        SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0).to_string()
    });
    let (result, code) = match outcome {
        Ok((payload, diagnostics)) => (
            CommandResult { status: "ok", command, payload: stringify_numbers(payload), diagnostics, generated_at },
            0,
        ),
        Err(fail) => {
            eprintln!("error: {}", fail.error);
            let payload = json!({ "error": fail.error.to_string() });
            (CommandResult { status: "error", command, payload, diagnostics: vec![], generated_at }, if fail.internal { 3 } else { 2 })
        }
    };
    let text = if cli.json { serde_json::to_string(&result) } else { serde_json::to_string_pretty(&result) };
    let _ = writeln!(std::io::stdout().lock(), "{}", text.expect("serializable result"));
    ExitCode::from(code)
}
