//! `opchain` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 numerical breakdown.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use opchain::chainseq::{
    chain_at, complementary, gamma_from_system, minimal_parameters, system_from_gamma, GammaSeq,
};
use opchain::families::{e_family_system, laguerre_assoc1, laguerre_system, RRParams};
use opchain::jacobi::{lu_factor, truncate, zeros};
use opchain::perturbations::{
    hat_system, kernel_base_system, q_system, tilde_kernel_system, tilde_system, u_system,
};
use opchain::recurrence::{
    convergent, kernel_system, laurent_expand, moments, monic_sequence, ThreeTermSystem,
};
use opchain::suites::{run_suite, Suite, VerifyOptions};
use opchain::wire::{parse_list, texts, zeros_csv, InputDoc, LuDoc, SystemDoc};
use opchain::{Error, Rational, Result, Scalar};

const DEFAULT_TOL: f64 = 1e-12;

#[derive(Parser, Debug)]
#[command(name = "opchain", version, about = "Orthogonal polynomial recurrences via chain sequences")]
struct Cli {
    /// Use f64 instead of exact rationals.
    #[arg(long, global = true)]
    float: bool,

    #[arg(long, global = true, value_enum)]
    output: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    #[value(name = "laguerre")]
    Laguerre,
    #[value(name = "e_family")]
    EFamily,
    #[value(name = "laguerre_assoc1")]
    LaguerreAssoc1,
    #[value(name = "routh_romanovski")]
    RouthRomanovski,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Variant {
    #[value(name = "tilde")]
    Tilde,
    #[value(name = "hat")]
    Hat,
    #[value(name = "tilde_kernel")]
    TildeKernel,
    #[value(name = "kernel")]
    Kernel,
    #[value(name = "q")]
    Q,
    #[value(name = "u")]
    U,
    #[value(name = "base")]
    Base,
}

#[derive(Args, Debug, Clone, Default)]
struct Params {
    /// Family parameter α (rational string).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,

    /// Routh–Romanovski parameter p.
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,

    /// γ₁ used to split b₁ = γ₁ + γ₂.
    #[arg(long, allow_hyphen_values = true)]
    gamma1: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
struct Source {
    #[arg(long, value_enum, conflicts_with_all = ["input", "gamma"])]
    family: Option<FamilyName>,

    /// JSON file holding {"gamma": [...]} or {"b": [...], "a2": [...]}.
    #[arg(long, conflicts_with = "gamma")]
    input: Option<PathBuf>,

    /// Inline γ list, e.g. "1,2,3,4".
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,

    #[command(flatten)]
    params: Params,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recurrence data, γ, chain and parameter sequences of a named family.
    Family {
        #[arg(value_enum)]
        name: FamilyName,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[command(flatten)]
        params: Params,
    },
    /// Perturbed systems built from a γ-sequence.
    Perturb {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        variant: Variant,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Seeded identity suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        /// Feed each suite a deliberately wrong input (negative control).
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Zeros of P_n by Sturm bisection.
    Zeros {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// LU factors of the leading n×n block of J − γ₁E₁₁.
    Lu {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
    },
    /// Moments μ_0..μ_k (μ_0 = 1).
    Moments {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: usize,
    },
    /// n-th J-fraction convergent and its Laurent expansion.
    Convergent {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
    },
}

struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("documents serialize") + "\n"
}

fn csv_unsupported(what: &str) -> Error {
    Error::InvalidArgument(format!("csv output is not available for {what}"))
}

fn parse_scalar<S: Scalar>(flag: &str, v: &Option<String>) -> Result<Option<S>> {
    v.as_deref()
        .map(|s| S::parse(s).map_err(|e| Error::InvalidArgument(format!("--{flag}: {e}"))))
        .transpose()
}

fn family_system<S: Scalar>(name: FamilyName, params: &Params) -> Result<ThreeTermSystem<S>> {
    let alpha = || -> Result<S> { Ok(parse_scalar("alpha", &params.alpha)?.unwrap_or_else(S::zero)) };
    match name {
        FamilyName::Laguerre => laguerre_system(&alpha()?),
        FamilyName::EFamily => e_family_system(&alpha()?),
        FamilyName::LaguerreAssoc1 => laguerre_assoc1(&alpha()?),
        FamilyName::RouthRomanovski => {
            let p: S = parse_scalar("p", &params.p)?
                .ok_or_else(|| Error::InvalidArgument("routh_romanovski needs --p".into()))?;
            let rr = RRParams::new(p);
            if rr.n_max == 0 {
                return Err(Error::DegreeBeyondFamily { n: 0, n_max: 0 });
            }
            rr.system()
        }
    }
}

enum Loaded<S> {
    System(ThreeTermSystem<S>),
    Gamma(GammaSeq<S>),
}

fn load<S: Scalar>(src: &Source) -> Result<Loaded<S>> {
    if let Some(name) = src.family {
        return Ok(Loaded::System(family_system(name, &src.params)?));
    }
    if let Some(g) = &src.gamma {
        return Ok(Loaded::Gamma(GammaSeq::from_vec(parse_list(g)?)));
    }
    if let Some(path) = &src.input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        return Ok(match InputDoc::parse(&text)? {
            InputDoc::Gamma(g) => Loaded::Gamma(g.to_gamma()?),
            InputDoc::System(s) => Loaded::System(s.to_system()?),
        });
    }
    Err(Error::InvalidArgument("one of --family, --input, --gamma is required".into()))
}

impl<S: Scalar> Loaded<S> {
    fn system(&self) -> Result<ThreeTermSystem<S>> {
        match self {
            Loaded::System(s) => Ok(s.clone()),
            Loaded::Gamma(g) => system_from_gamma(g),
        }
    }

    /// γ₁ given by the data itself, or by `--gamma1` (default 0) for systems.
    fn gamma1(&self, params: &Params) -> Result<S> {
        match self {
            Loaded::Gamma(g) => g.get(1),
            Loaded::System(_) => Ok(parse_scalar("gamma1", &params.gamma1)?.unwrap_or_else(S::zero)),
        }
    }

    fn gamma(&self, params: &Params, n: usize) -> Result<GammaSeq<S>> {
        match self {
            Loaded::Gamma(g) => Ok(g.clone()),
            Loaded::System(s) => {
                // finite input: recover as far as b and a2 reach
                let n = s.depth().map_or(n, |d| n.min(d.saturating_sub(1)));
                gamma_from_system(s, &self.gamma1(params)?, n)
            }
        }
    }
}

fn require_depth<S: Scalar>(sys: &ThreeTermSystem<S>, n: usize) -> Result<()> {
    match sys.depth() {
        Some(d) if d < n => Err(Error::DegreeBeyondFamily { n, n_max: d }),
        _ => Ok(()),
    }
}

/// Soft failure of a derived field: numerical breakdowns are reported in
/// place, input errors abort.
fn soft<T: Serialize>(r: Result<T>, notes: &mut Vec<String>, what: &str) -> Result<Value> {
    match r {
        Ok(v) => Ok(serde_json::to_value(v).expect("serializable")),
        Err(e) if e.is_numerical() => {
            notes.push(format!("{what}: {e}"));
            Ok(Value::Null)
        }
        Err(e) => Err(e),
    }
}

fn cmd_family<S: Scalar>(name: FamilyName, n: usize, params: &Params) -> Result<Value> {
    let sys = family_system::<S>(name, params)?;
    require_depth(&sys, n)?;
    let doc = SystemDoc::from_system(&sys, n)?;
    let gamma1: S = parse_scalar("gamma1", &params.gamma1)?.unwrap_or_else(S::zero);
    // the derived sequences need b_{depth+1}
    let depth = sys.depth().map_or(n, |d| n.min(d.saturating_sub(1)));
    let mut notes = Vec::new();
    let gamma = soft(
        gamma_from_system(&sys, &gamma1, depth).and_then(|g| Ok(texts(&g.take(2 * depth + 1)?))),
        &mut notes,
        "gamma",
    )?;
    let chain = chain_at(&sys, &S::zero(), depth);
    let minimal = chain.as_ref().map_err(Clone::clone).and_then(|d| minimal_parameters(d, depth));
    let comp = minimal.as_ref().map_err(Clone::clone).and_then(complementary);
    let chain_d = soft(chain.and_then(|d| d.take(depth)).map(|v| texts(&v)), &mut notes, "chain_d")?;
    let minimal_m = soft(minimal.map(|m| texts(m.values())), &mut notes, "minimal_m")?;
    let complementary_k = soft(
        comp.map(|c| texts(c.parameters.values())),
        &mut notes,
        "complementary_k",
    )?;
    let mut out = json!({
        "family": sys.closed_form(),
        "n": n,
        "gamma1": gamma1.to_text(),
        "b": doc.b,
        "a2": doc.a2,
        "gamma": gamma,
        "chain_d": chain_d,
        "minimal_m": minimal_m,
        "complementary_k": complementary_k,
    });
    if !notes.is_empty() {
        out["notes"] = json!(notes);
    }
    Ok(out)
}

fn cmd_perturb<S: Scalar>(src: &Source, variant: Variant, n: usize) -> Result<Value> {
    let loaded = load::<S>(src)?;
    let gamma = loaded.gamma(&src.params, n + 1)?;
    let sys = match variant {
        Variant::Tilde => tilde_system(&gamma)?,
        Variant::Hat => hat_system(&gamma)?,
        Variant::TildeKernel => tilde_kernel_system(&gamma)?,
        Variant::Kernel => kernel_system(&gamma)?,
        Variant::Q => q_system(&gamma)?,
        Variant::U => u_system(&gamma)?,
        Variant::Base => kernel_base_system(&gamma)?,
    };
    let doc = SystemDoc::from_system(&sys, n)?;
    let polys = monic_sequence(&sys, n)?;
    Ok(json!({
        "variant": format!("{variant:?}").to_lowercase(),
        "n": n,
        "b": doc.b,
        "a2": doc.a2,
        "polynomials": polys,
    }))
}

fn tolerance(flag: Option<f64>) -> Result<f64> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var("OPCHAIN_PRECISION") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("OPCHAIN_PRECISION: cannot parse {v:?}"))),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn execute<S: Scalar>(cli: &Cli) -> Result<Outcome> {
    let fmt = cli.output;
    match &cli.command {
        Command::Family { name, n, params } => {
            if fmt == Some(Format::Csv) {
                return Err(csv_unsupported("family"));
            }
            Ok(Outcome::ok(to_json(&cmd_family::<S>(*name, *n, params)?)))
        }
        Command::Perturb { source, variant, n } => {
            if fmt == Some(Format::Csv) {
                return Err(csv_unsupported("perturb"));
            }
            Ok(Outcome::ok(to_json(&cmd_perturb::<S>(source, *variant, *n)?)))
        }
        Command::Verify {
            suite,
            n,
            seed,
            samples,
            corrupt,
        } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(
                suite,
                &VerifyOptions {
                    n: *n,
                    seed: *seed,
                    samples: *samples,
                    corrupt: *corrupt,
                },
            );
            let text = if fmt == Some(Format::Csv) {
                let mut s = String::from("name,n_lo,n_hi,status,witness\n");
                for c in &report.checks {
                    let w = c.witness.as_deref().unwrap_or("").replace('"', "'");
                    let status = if c.passed() { "pass" } else { "fail" };
                    writeln!(s, "\"{}\",{},{},{},\"{}\"", c.name, c.n_range[0], c.n_range[1], status, w)
                        .unwrap();
                }
                s
            } else {
                to_json(&report)
            };
            Ok(Outcome {
                text,
                code: if report.passed { 0 } else { 1 },
            })
        }
        Command::Zeros { source, n, tol } => {
            let sys = load::<S>(source)?.system()?;
            let zs = zeros(&sys, *n, tolerance(*tol)?)?;
            Ok(Outcome::ok(match fmt.unwrap_or(Format::Csv) {
                Format::Csv => zeros_csv(&zs),
                Format::Json => to_json(
                    &zs.iter()
                        .enumerate()
                        .map(|(i, z)| json!({"index": i + 1, "value": z.value, "bracket_width": z.bracket_width}))
                        .collect::<Vec<_>>(),
                ),
            }))
        }
        Command::Lu { source, n } => {
            let loaded = load::<S>(source)?;
            let sys = loaded.system()?;
            let f = lu_factor(&truncate(&sys, *n)?, &loaded.gamma1(&source.params)?)?;
            let doc = LuDoc::from(&f);
            Ok(Outcome::ok(match fmt.unwrap_or(Format::Json) {
                Format::Json => to_json(&doc),
                Format::Csv => {
                    let mut s = String::from("index,U_diag,L_sub\n");
                    for (i, u) in doc.u_diag.iter().enumerate() {
                        let l = doc.l_sub.get(i).map_or("", String::as_str);
                        writeln!(s, "{},{u},{l}", i + 1).unwrap();
                    }
                    s
                }
            }))
        }
        Command::Moments { source, k } => {
            let sys = load::<S>(source)?.system()?;
            let all = (0..=*k).map(|j| moments(&sys, j)).collect::<Result<Vec<S>>>()?;
            Ok(Outcome::ok(match fmt.unwrap_or(Format::Json) {
                Format::Json => to_json(&json!({
                    "k": k,
                    "moment": all[*k].to_text(),
                    "moments": texts(&all),
                })),
                Format::Csv => {
                    let mut s = String::from("k,moment\n");
                    for (j, m) in all.iter().enumerate() {
                        writeln!(s, "{j},{}", m.to_text()).unwrap();
                    }
                    s
                }
            }))
        }
        Command::Convergent { source, n } => {
            if fmt == Some(Format::Csv) {
                return Err(csv_unsupported("convergent"));
            }
            let sys = load::<S>(source)?.system()?;
            let (num, den) = convergent(&sys, *n)?;
            let laurent = laurent_expand(&num, &den, 2 * n)?;
            Ok(Outcome::ok(to_json(&json!({
                "n": n,
                "numerator": num,
                "denominator": den,
                "laurent": texts(&laurent.coeffs),
            }))))
        }
    }
}

fn variant_name(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(['(', ' ', '{']).next().unwrap_or("").to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = if cli.float {
        execute::<f64>(&cli)
    } else {
        execute::<Rational>(&cli)
    };
    match result {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {}: {e}", variant_name(&e));
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
