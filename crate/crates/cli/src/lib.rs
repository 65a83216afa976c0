//! Batch front end for `heisenberg-core`.
//!
//! [`run`] takes the argument vector and returns the exit code together with
//! everything destined for stdout and stderr, so the binary is a thin shell
//! and tests can drive the full pipeline in-process.

pub mod expr;

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use heisenberg_core::morphisms::{
    automorphism_group, check_derivation, classify_locally_finite, derivation_homogeneous_parts,
    DerivationSpec,
};
use heisenberg_core::structure::{
    admissible_generator_gradings, center_membership, classify, noetherian_witness, zh_membership,
    CenterDescription,
};
use heisenberg_core::{AlgebraElement, Context, FieldDesc, FieldElement, Poly, DEFAULT_DEGREE_CAP};
use serde_json::{json, Value};

use crate::expr::{evaluate, evaluate_poly, parse, ParseError, PolyError};

#[derive(Parser, Debug)]
#[command(
    name = "heisenberg",
    version,
    about = "Exact computation in generalized Heisenberg algebras H(f)"
)]
struct Cli {
    /// The defining polynomial f, in the variable h.
    #[arg(long = "f", value_name = "POLY", allow_hyphen_values = true)]
    f: String,

    /// Coefficient field: Q or Q(zeta_m).
    #[arg(long, default_value = "Q")]
    field: String,

    /// Print results as JSON.
    #[arg(long)]
    json: bool,

    /// Largest polynomial degree any intermediate result may reach.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of an expression.
    Nf {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// The commutator [e1, e2] = e1 e2 - e2 e1.
    Commutator {
        #[arg(allow_hyphen_values = true)]
        e1: String,
        #[arg(allow_hyphen_values = true)]
        e2: String,
    },
    /// Domain, Noetherian, down-up and center flags.
    Classify,
    /// Decide whether an element is a polynomial in z.
    Center {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Decide whether a degree-0 element lies in C[z, h].
    ZhMember {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Membership of h y^(n+1) in sum_{i<=n} H h y^i for n = 0..=N.
    Noetherian {
        #[arg(long, value_name = "N")]
        max_n: usize,
    },
    /// Degrees on x, y, h that make the relations homogeneous.
    Gradings,
    /// The automorphism group.
    Aut,
    /// Check that generator images define a derivation.
    DerivationCheck(DerivationArgs),
    /// Decide whether a derivation is locally finite.
    DerivationClassify(DerivationArgs),
    /// Apply sigma to a degree-0 element.
    Sigma {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

#[derive(Args, Debug)]
struct DerivationArgs {
    /// Image of x.
    #[arg(long, allow_hyphen_values = true)]
    dx: String,
    /// Image of y.
    #[arg(long, allow_hyphen_values = true)]
    dy: String,
    /// Image of h.
    #[arg(long, allow_hyphen_values = true)]
    dh: String,
}

/// Exit status plus captured output streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Syntax(String),
    Domain(String),
}

impl From<heisenberg_core::Error> for Failure {
    fn from(e: heisenberg_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn syntax(what: &str, input: &str, e: ParseError) -> Failure {
    let caret = format!("{}^", " ".repeat(e.offset));
    Failure::Syntax(format!("{what}: {e}\n  {input}\n  {caret}"))
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok(mut stdout) => {
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Outcome {
                code: 0,
                stdout,
                stderr: String::new(),
            }
        }
        Err(Failure::Syntax(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Domain(msg)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn build_context(cli: &Cli) -> Result<Context, Failure> {
    let field: FieldDesc = cli
        .field
        .parse()
        .map_err(|e: heisenberg_core::Error| Failure::Syntax(e.to_string()))?;
    let parsed = parse(&cli.f).map_err(|e| syntax("--f", &cli.f, e))?;
    let f = evaluate_poly(&parsed, field, cli.degree_cap).map_err(|e| match e {
        PolyError::NotInH(_) => Failure::Syntax(format!(
            "--f: `{}` must be a polynomial in h (x, y and z are not allowed)",
            cli.f
        )),
        PolyError::Core(e) => e.into(),
    })?;
    Ok(Context::new(f).with_degree_cap(cli.degree_cap))
}

fn element(ctx: &Context, what: &str, input: &str) -> Result<AlgebraElement, Failure> {
    let e = parse(input).map_err(|e| syntax(what, input, e))?;
    Ok(evaluate(&e, ctx)?)
}

fn coeff_strings(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(ToString::to_string).collect()
}

fn header(ctx: &Context) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("f".into(), json!(coeff_strings(ctx.f())));
    m.insert("field".into(), json!(ctx.field().to_string()));
    m
}

fn with_header(ctx: &Context, body: Value) -> Value {
    let mut m = header(ctx);
    if let Value::Object(extra) = body {
        m.extend(extra);
    }
    Value::Object(m)
}

/// `{"f": [...], "field": "...", "terms": [{"i", "k", "poly"}]}` with
/// coefficients listed from the constant term up.
pub fn element_json(a: &AlgebraElement) -> Value {
    let terms: Vec<Value> = a
        .terms()
        .iter()
        .map(|(&(i, k), g)| json!({"i": i, "k": k, "poly": coeff_strings(g)}))
        .collect();
    with_header(a.ctx(), json!({ "terms": terms }))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render(cli: &Cli, value: Value, text: String) -> String {
    if cli.json {
        serde_json::to_string_pretty(&value).expect("json values serialize")
    } else {
        text
    }
}

fn derivation(ctx: &Context, args: &DerivationArgs) -> Result<DerivationSpec, Failure> {
    Ok(DerivationSpec::new(
        element(ctx, "--dx", &args.dx)?,
        element(ctx, "--dy", &args.dy)?,
        element(ctx, "--dh", &args.dh)?,
    )?)
}

fn zh_text(coeffs: &[Poly]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(k, p)| match k {
            0 => format!("({p})"),
            _ => format!("({p}) * z^{k}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let ctx = build_context(cli)?;
    let out = match &cli.command {
        Command::Nf { expr } => {
            let a = element(&ctx, "expression", expr)?;
            render(cli, element_json(&a), a.to_string())
        }
        Command::Commutator { e1, e2 } => {
            let a = element(&ctx, "first expression", e1)?;
            let b = element(&ctx, "second expression", e2)?;
            let c = a.commutator(&b)?;
            render(cli, element_json(&c), c.to_string())
        }
        Command::Sigma { expr } => {
            let a = element(&ctx, "expression", expr)?.sigma_h0()?;
            render(cli, element_json(&a), a.to_string())
        }
        Command::Classify => {
            let c = classify(&ctx);
            let center = match c.center_description {
                CenterDescription::PolynomialInZ => "C[z]",
                CenterDescription::NotComputedDegOne => "not computed (deg f = 1)",
            };
            let deg = c
                .deg_f
                .map_or("-inf (f = 0)".to_string(), |d| d.to_string());
            let text = format!(
                "deg f: {deg}\ndomain: {}\nnoetherian: {}\ngeneralized down-up: {}\ncenter: {center}",
                yes_no(c.is_domain),
                yes_no(c.is_noetherian),
                yes_no(c.is_generalized_down_up),
            );
            let value = json!({
                "deg_f": c.deg_f,
                "is_domain": c.is_domain,
                "is_noetherian": c.is_noetherian,
                "is_generalized_down_up": c.is_generalized_down_up,
                "center": center,
            });
            render(cli, with_header(&ctx, value), text)
        }
        Command::Center { expr } => {
            let a = element(&ctx, "expression", expr)?;
            let p = center_membership(&a)?;
            let text = match &p {
                Some(p) => format!("in center: {}", p.display_in("z")),
                None => "not in center C[z]".to_string(),
            };
            let value = json!({
                "member": p.is_some(),
                "polynomial_in_z": p.as_ref().map(coeff_strings),
            });
            render(cli, with_header(&ctx, value), text)
        }
        Command::ZhMember { expr } => {
            let a = element(&ctx, "expression", expr)?;
            let rep = zh_membership(&a)?;
            let text = match &rep {
                Some(r) => format!("in C[z, h]: {}", zh_text(&r.coeffs)),
                None => "not in C[z, h]".to_string(),
            };
            let value = json!({
                "member": rep.is_some(),
                "coefficients": rep.as_ref().map(|r| r.coeffs.iter().map(coeff_strings).collect::<Vec<_>>()),
            });
            render(cli, with_header(&ctx, value), text)
        }
        Command::Noetherian { max_n } => {
            let reports = noetherian_witness(&ctx, *max_n)?;
            let mut text = String::new();
            for r in &reports {
                let _ = writeln!(
                    text,
                    "n={}: gcd = {}, h*y^{} in I_{}: {}",
                    r.n,
                    r.generator_gcd,
                    r.n + 1,
                    r.n,
                    yes_no(r.is_member)
                );
            }
            let value = json!({
                "reports": reports
                    .iter()
                    .map(|r| json!({
                        "n": r.n,
                        "gcd": coeff_strings(&r.generator_gcd),
                        "is_member": r.is_member,
                    }))
                    .collect::<Vec<_>>(),
            });
            render(cli, with_header(&ctx, value), text)
        }
        Command::Gradings => {
            let g = admissible_generator_gradings(&ctx)?;
            let fmt_vec = |v: &[i64; 3]| format!("({}, {}, {})", v[0], v[1], v[2]);
            let basis: Vec<String> = g.basis.iter().map(fmt_vec).collect();
            let text = format!(
                "gradings (deg x, deg y, deg h) spanned by: {}\nonly (l, -l, 0): {}",
                if basis.is_empty() {
                    "nothing".to_string()
                } else {
                    basis.join(", ")
                },
                yes_no(g.is_standard_family()),
            );
            let value = json!({
                "constraints": g.constraints,
                "basis": g.basis,
                "standard_family": g.is_standard_family(),
            });
            render(cli, with_header(&ctx, value), text)
        }
        Command::Aut => {
            let g = automorphism_group(&ctx)?;
            let (a, b) = &g.generator;
            let mut text = format!(
                "Aut(H(f)) ≅ C* x Z_{}; generator: a={a}, b={b}",
                g.cyclic_order
            );
            if g.field != FieldDesc::Rationals {
                let _ = write!(text, " (in {})", g.field);
            }
            let value = json!({
                "n": g.n,
                "cyclic_order": g.cyclic_order,
                "generator": {"a": a.to_string(), "b": b.to_string()},
                "generator_field": g.field.to_string(),
                "working_divisors": g.working_divisors,
            });
            render(cli, with_header(&ctx, value), text)
        }
        Command::DerivationCheck(args) => {
            let d = derivation(&ctx, args)?;
            let ok = check_derivation(&d)?;
            let value = json!({ "is_derivation": ok });
            render(
                cli,
                with_header(&ctx, value),
                format!("derivation: {}", yes_no(ok)),
            )
        }
        Command::DerivationClassify(args) => {
            let d = derivation(&ctx, args)?;
            let lambda = classify_locally_finite(&d)?;
            let degrees: Vec<i64> = derivation_homogeneous_parts(&d).into_keys().collect();
            let degree_text: Vec<String> = degrees.iter().map(ToString::to_string).collect();
            let text = format!(
                "homogeneous degrees: {}\nlocally finite: {}",
                if degree_text.is_empty() {
                    "none".to_string()
                } else {
                    degree_text.join(", ")
                },
                match &lambda {
                    Some(l) => format!("yes, lambda = {l}"),
                    None => "no".to_string(),
                }
            );
            let value = json!({
                "is_derivation": true,
                "homogeneous_degrees": degrees,
                "locally_finite": lambda.is_some(),
                "lambda": lambda.as_ref().map(FieldElement::to_string),
            });
            render(cli, with_header(&ctx, value), text)
        }
    };
    Ok(out)
}
