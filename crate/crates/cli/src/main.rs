mod checks;
mod input;
mod output;
mod random;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use quantstar::algebra::CATALOG_NAMES;
use quantstar::group::coeff::CoeffFnJson;
use quantstar::group::{
    catalog_rep, cauchy_check, complex_extension_eval, complex_extension_eval_split, entire_seminorm, lie_taylor_eval,
    majorant_coeffs, CauchyConfig,
};
use quantstar::gutt::{classical_limit, gutt_star, hbar_coefficient, kks_bracket, poisson_bracket};
use quantstar::parse::{format_abelian, format_poly, format_sym_tensor, parse_abelian, Poly};
use quantstar::std_star::{operator_consistency_check, std_star, std_star_abelian, PhaseSpacePoly};
use quantstar::sym::SymTensorJson;
use quantstar::{validate_algebra, Enveloping, HbarScalar, LieAlgebraSpec, SymTensor};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use checks::{CheckReport, Ctx, Suite};
use input::{usage, Usage};
use output::{complex, Format, Output, Table};

/// Exact Gutt and standard-ordered star products on Lie algebras and their
/// cotangent bundles, with numeric group-function tools and check suites.
#[derive(Parser, Debug, Clone)]
#[command(name = "quantstar", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Catalog name (abelian(n), heisenberg, sl2, so3, axb) or a JSON file.
    /// Check suites accept a comma-separated list.
    #[arg(long, global = true)]
    algebra: Option<String>,
    /// Numeric value of ħ as `re,im`; defaults to 1 where a value is needed.
    #[arg(long, global = true, allow_hyphen_values = true)]
    hbar: Option<String>,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Overrides the primary numeric tolerance of a check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Include wall-clock runtimes in check reports.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Built-in algebras and validation of structure constants.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Gutt star product on Sym(g).
    #[command(subcommand)]
    Gutt(GuttCmd),
    /// Standard-ordered star product on T*G.
    #[command(subcommand)]
    Std(StdCmd),
    /// Partial sums of the Lie-Taylor series at `g exp(x)`.
    Taylor(TaylorArgs),
    /// Lie-Taylor majorant coefficients, optionally with the entire seminorm.
    Majorant(MajorantArgs),
    /// Sampled Lie-theoretic Cauchy estimates for one matrix element.
    CauchyCheck(CauchyArgs),
    /// Holomorphic extension at `g exp(χ + iξ)`.
    Extend(ExtendArgs),
    /// Property-check suites.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Subcommand, Debug, Clone)]
enum AlgebraCmd {
    /// Lists the catalog with bases, brackets and representations.
    Catalog,
    /// Checks antisymmetry and the Jacobi identity of `--algebra`.
    Validate,
}

#[derive(Args, Debug, Clone)]
struct Pair {
    /// First factor: mini-language expression, SymTensor JSON or @file.
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    /// Second factor.
    #[arg(long, allow_hyphen_values = true)]
    q: String,
}

#[derive(Subcommand, Debug, Clone)]
enum GuttCmd {
    /// `p ⋆ q`.
    Star(Pair),
    /// The linear Poisson bracket `{p, q}`, compared with the KKS formula.
    Poisson(Pair),
    /// Classical and semiclassical limits of `p ⋆ q`.
    Limits(Pair),
}

#[derive(Args, Debug, Clone)]
struct PhasePair {
    /// `fn: expr; fn: expr; ...` or PhaseSpacePoly JSON. `fn` is `1`, an
    /// entry `i,j` of the catalog representation, or CoeffFn JSON.
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
}

#[derive(Subcommand, Debug, Clone)]
enum StdCmd {
    /// `P ⋆ Q`, optionally evaluated at `(--point, --mu)`.
    Star {
        #[command(flatten)]
        pair: PhasePair,
        /// Group element: real coordinates or GroupElementExpr JSON.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Point of g*, real coordinates.
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
    },
    /// Closed form on `T*ℝⁿ` in the variables `q, p` (n = 1) or `q1.., p1..`.
    Abelian {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        /// Deformation parameter λ in `Σ λ^k/k! ∂_p^k f ∂_q^k g`.
        #[arg(long, default_value = "I*hbar", allow_hyphen_values = true)]
        lambda: String,
        /// Compute through the group factorization instead (λ = ħ/i).
        #[arg(long)]
        via_group: bool,
    },
    /// Compares `ϱ(P⋆Q)ψ` with `ϱ(P)ϱ(Q)ψ` at random group elements.
    CheckOperator {
        #[command(flatten)]
        pair: PhasePair,
        /// ψ as for the coefficient functions of `--p`.
        #[arg(long, default_value = "1,1")]
        psi: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Args, Debug, Clone)]
struct FnArgs {
    /// Entry `i,j` of the catalog representation, or CoeffFn JSON / @file.
    #[arg(long = "fn", default_value = "1,1")]
    function: String,
    /// Base point: real coordinates or GroupElementExpr JSON.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct TaylorArgs {
    #[command(flatten)]
    f: FnArgs,
    /// Real coordinates of the expansion variable x.
    #[arg(long, allow_hyphen_values = true)]
    direction: String,
    #[arg(long, default_value_t = 20)]
    order: usize,
}

#[derive(Args, Debug, Clone)]
struct MajorantArgs {
    #[command(flatten)]
    f: FnArgs,
    #[arg(long, default_value_t = 20)]
    order: usize,
    /// Also evaluate the entire seminorm `q_{0,c}` with a rigorous tail bound.
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct CauchyArgs {
    #[command(flatten)]
    f: FnArgs,
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = 6)]
    max_k: usize,
    #[arg(long, default_value = "1,2,4")]
    radii: String,
}

#[derive(Args, Debug, Clone)]
struct ExtendArgs {
    #[command(flatten)]
    f: FnArgs,
    #[arg(long, allow_hyphen_values = true)]
    chi: String,
    #[arg(long, allow_hyphen_values = true)]
    xi: String,
    /// Order of the comparison Lie-Taylor sum.
    #[arg(long, default_value_t = 24)]
    order: usize,
}

#[derive(Subcommand, Debug, Clone)]
enum CheckCmd {
    /// Exact associativity of the Gutt product on random homogeneous triples.
    Associativity {
        #[arg(long, default_value_t = 9)]
        max_degree: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// First-order structure, classical limit, Poisson bracket, ħ-degree bound.
    Limits {
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// PBW symmetrization followed by desymmetrization is the identity.
    PbwRoundtrip {
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Group factorization against the closed form on `T*ℝ` and `T*ℝ²`.
    Abelian {
        #[arg(long, default_value_t = 5)]
        max_degree: u32,
        #[arg(long, default_value_t = 30)]
        trials: usize,
    },
    /// `ϱ(P⋆Q) = ϱ(P)ϱ(Q)` at sampled group elements.
    Operator {
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Lie-Taylor convergence on sl2 matrix elements.
    Taylor {
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Sampled Cauchy estimates and the factorial bound.
    Cauchy {
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 6)]
        max_k: usize,
        #[arg(long, default_value = "1,2,4")]
        radii: String,
    },
    /// Holomorphic extension against Lie-Taylor sums and real restriction.
    Extension {
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Monomial norms, submultiplicativity, and the continuity ratio table.
    Seminorm {
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Polarization identity and estimate.
    Polarization {
        #[arg(long, default_value_t = 5)]
        max_degree: usize,
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
    /// Every suite with default parameters.
    All,
}

enum Failure {
    Usage(String),
    Check(Output),
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Usage(e)
    }
}

type Run = Result<Output, Failure>;

struct State {
    global: Global,
    digest: String,
    started: Instant,
}

impl State {
    fn hbar(&self) -> Usage<Complex64> {
        self.global.hbar.as_deref().map_or(Ok(Complex64::new(1.0, 0.0)), input::complex)
    }

    fn algebra_name(&self) -> Usage<&str> {
        self.global.algebra.as_deref().ok_or_else(|| "this command needs --algebra".to_string())
    }

    fn algebra(&self) -> Usage<(String, LieAlgebraSpec)> {
        let name = self.algebra_name()?;
        Ok((name.to_string(), input::algebra(name)?))
    }

    fn algebra_list(&self, default: &[&str]) -> Vec<String> {
        match &self.global.algebra {
            Some(list) => list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
            None => default.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn ctx(&self) -> Usage<Ctx> {
        Ok(Ctx { seed: self.global.seed, hbar: self.hbar()?, tol: self.global.tol })
    }

    fn report(&self, check: &str, suite: Suite) -> CheckReport {
        suite.into_report(check, &self.digest, self.global.timing.then_some(self.started))
    }
}

fn report_output(report: &CheckReport) -> Run {
    let out = Output::json(serde_json::to_value(report).map_err(usage)?);
    if report.pass {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn sym_arg(spec: &LieAlgebraSpec, s: &str) -> Usage<SymTensor> {
    let s = input::text_arg(s)?;
    if s.trim_start().starts_with('{') {
        let json: SymTensorJson = serde_json::from_str(&s).map_err(usage)?;
        return SymTensor::from_json(spec.dim(), &json).map_err(usage);
    }
    quantstar::parse::parse_sym_tensor(spec, &s).map_err(usage)
}

fn scalar_text(c: &HbarScalar) -> String {
    let poly: Poly = [(Vec::new(), c.clone())].into_iter().collect();
    format_poly(&poly, &[])
}

/// Text, JSON and an optional evaluation at ħ of a tensor.
fn sym_value(spec: &LieAlgebraSpec, p: &SymTensor, hbar: Option<Complex64>) -> Value {
    let mut v = json!({"text": format_sym_tensor(spec, p), "json": p.to_json()});
    if let Some(h) = hbar {
        v["evaluated"] = p
            .terms()
            .iter()
            .map(|(m, c)| json!({"exponents": m.0, "value": complex(c.eval(h))}))
            .collect::<Vec<_>>()
            .into();
    }
    v
}

fn sym_table(spec: &LieAlgebraSpec, p: &SymTensor, hbar: Option<Complex64>) -> Table {
    let mut header: Vec<String> = spec.names().to_vec();
    header.push("coefficient".into());
    if hbar.is_some() {
        header.extend(["value_re".into(), "value_im".into()]);
    }
    let rows = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut row: Vec<String> = m.0.iter().map(u32::to_string).collect();
            row.push(scalar_text(c));
            if let Some(h) = hbar {
                let z = c.eval(h);
                row.extend([z.re.to_string(), z.im.to_string()]);
            }
            row
        })
        .collect();
    Table { header, rows }
}

fn gutt(state: &State, cmd: &GuttCmd) -> Run {
    let (name, spec) = state.algebra()?;
    let hbar = state.global.hbar.as_deref().map(input::complex).transpose()?;
    let env = Enveloping::new(std::sync::Arc::new(spec.clone()));
    let pair = match cmd {
        GuttCmd::Star(p) | GuttCmd::Poisson(p) | GuttCmd::Limits(p) => p,
    };
    let (p, q) = (sym_arg(&spec, &pair.p)?, sym_arg(&spec, &pair.q)?);
    let inputs = json!({"algebra": name, "p": format_sym_tensor(&spec, &p), "q": format_sym_tensor(&spec, &q)});
    match cmd {
        GuttCmd::Star(_) => {
            let star = gutt_star(&env, &p, &q).map_err(usage)?;
            let mut v = inputs;
            v["result"] = sym_value(&spec, &star, hbar);
            Ok(Output::with_table(v, sym_table(&spec, &star, hbar)))
        }
        GuttCmd::Poisson(_) => {
            let pb = poisson_bracket(&env, &p, &q).map_err(usage)?;
            let kks = kks_bracket(&env, &p, &q).map_err(usage)?;
            let mut v = inputs;
            v["result"] = sym_value(&spec, &pb, hbar);
            v["matches_kks"] = (pb == kks).into();
            Ok(Output::with_table(v, sym_table(&spec, &pb, hbar)))
        }
        GuttCmd::Limits(_) => {
            let (p0, q0) = (hbar_coefficient(&p, 0), hbar_coefficient(&q, 0));
            let star = gutt_star(&env, &p0, &q0).map_err(usage)?;
            let classical = classical_limit(&star);
            let product = quantstar::sym::sym_product(&p0, &q0).map_err(usage)?;
            // [p, q]_⋆ = (ħ/i){p, q} + O(ħ²)
            let reverse = gutt_star(&env, &q0, &p0).map_err(usage)?;
            let first = hbar_coefficient(&star.sub(&reverse).map_err(usage)?, 1)
                .scale(&HbarScalar::constant(quantstar::GaussianRational::i()));
            let pb = poisson_bracket(&env, &p0, &q0).map_err(usage)?;
            let mut v = inputs;
            v["classical_limit"] = sym_value(&spec, &classical, None);
            v["classical_matches_product"] = (classical == product).into();
            v["bracket_from_commutator"] = sym_value(&spec, &first, None);
            v["poisson_bracket"] = sym_value(&spec, &pb, None);
            v["semiclassical_matches_bracket"] = (first == pb).into();
            Ok(Output::json(v))
        }
    }
}

fn phase_value(spec: &LieAlgebraSpec, p: &PhaseSpacePoly) -> Usage<Value> {
    let terms = p
        .terms()
        .iter()
        .map(|(phi, s)| {
            Ok(json!({"fn": CoeffFnJson::from_coeff_fn(phi).map_err(usage)?, "sym": format_sym_tensor(spec, s)}))
        })
        .collect::<Usage<Vec<_>>>()?;
    Ok(json!({"terms": terms, "json": p.to_json().map_err(usage)?}))
}

fn std_cmd(state: &State, cmd: &StdCmd) -> Run {
    match cmd {
        StdCmd::Abelian { n, f, g, lambda, via_group } => {
            if *n == 0 {
                return Err(Failure::Usage("--n must be positive".into()));
            }
            let (f, g) = (parse_abelian(*n, f).map_err(usage)?, parse_abelian(*n, g).map_err(usage)?);
            let (result, lambda_text) = if *via_group {
                let env = Enveloping::new(quantstar::catalog_arc(&format!("abelian({n})")).map_err(usage)?);
                let star = std_star(&env, &f.to_phase_space().map_err(usage)?, &g.to_phase_space().map_err(usage)?)
                    .map_err(usage)?;
                (star.to_abelian().map_err(usage)?, scalar_text(&HbarScalar::hbar_over_i()))
            } else {
                let lam = input::hbar_scalar(lambda)?;
                (std_star_abelian(&f, &g, &lam).map_err(usage)?, scalar_text(&lam))
            };
            let terms: Vec<Value> =
                result.terms().iter().map(|((q, p), c)| json!({"q": q.0, "p": p.0, "coeff": c})).collect();
            let v = json!({"n": n, "f": format_abelian(&f), "g": format_abelian(&g), "lambda": lambda_text,
                "result": {"text": format_abelian(&result), "terms": terms}});
            let header = ["q", "p", "coefficient"].map(String::from).to_vec();
            let rows = result
                .terms()
                .iter()
                .map(|((q, p), c)| vec![format!("{:?}", q.0), format!("{:?}", p.0), scalar_text(c)])
                .collect();
            Ok(Output::with_table(v, Table { header, rows }))
        }
        StdCmd::Star { pair, point, mu } => {
            let (name, spec) = state.algebra()?;
            let env = Enveloping::new(std::sync::Arc::new(spec.clone()));
            let p = input::phase_poly(&pair.p, &name, &spec)?;
            let q = input::phase_poly(&pair.q, &name, &spec)?;
            let star = std_star(&env, &p, &q).map_err(usage)?;
            let mut v = json!({"algebra": name, "result": phase_value(&spec, &star)?});
            if let Some(mu) = mu {
                let g = input::point(point.as_deref(), spec.dim())?;
                let mu: Vec<Complex64> =
                    input::reals(mu, spec.dim())?.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
                let hbar = state.hbar()?;
                v["evaluated"] = json!({"point": g, "mu": mu, "hbar": complex(hbar),
                    "value": complex(star.eval(&g, &mu, hbar).map_err(usage)?)});
            } else if point.is_some() {
                return Err(Failure::Usage("--point needs --mu".into()));
            }
            Ok(Output::json(v))
        }
        StdCmd::CheckOperator { pair, psi, samples } => {
            let (name, spec) = state.algebra()?;
            let env = Enveloping::new(std::sync::Arc::new(spec.clone()));
            let p = input::phase_poly(&pair.p, &name, &spec)?;
            let q = input::phase_poly(&pair.q, &name, &spec)?;
            let psi = input::coeff_fn(psi, &name, spec.dim())?;
            let mut rng = random::stream(state.global.seed, "check-operator", 0);
            let points: Vec<_> = (0..*samples).map(|_| random::group_element(&mut rng, spec.dim(), 0.8)).collect();
            let hbar = state.hbar()?;
            let r = operator_consistency_check(&env, &p, &q, &psi, &points, hbar).map_err(usage)?;
            let tol = state.global.tol.unwrap_or(1e-9);
            let mut suite = Suite::default();
            let cex = json!({"sample": r.worst_sample, "point": points.get(r.worst_sample)});
            suite.subchecks.push(checks::SubCheck {
                name: "consistency".into(),
                deviation: r.max_rel_deviation,
                tolerance: tol,
                samples: *samples,
            });
            if r.max_rel_deviation > tol {
                suite.counterexample = Some(cex);
            }
            suite.details = json!({"algebra": name, "hbar": complex(hbar)});
            report_output(&state.report("std check-operator", suite))
        }
    }
}

fn function_args(
    state: &State,
    f: &FnArgs,
) -> Usage<(LieAlgebraSpec, quantstar::group::CoeffFn, quantstar::group::GroupElementExpr)> {
    let (name, spec) = state.algebra()?;
    let phi = input::coeff_fn(&f.function, &name, spec.dim())?;
    let g = input::point(f.point.as_deref(), spec.dim())?;
    Ok((spec, phi, g))
}

fn taylor(state: &State, a: &TaylorArgs) -> Run {
    let (spec, phi, g) = function_args(state, &a.f)?;
    let x: Vec<Complex64> =
        input::reals(&a.direction, spec.dim())?.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    let direct = phi.eval(&g.then(x.clone())).map_err(usage)?;
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for n in 0..=a.order {
        let s = lie_taylor_eval(&phi, &g, &x, n).map_err(usage)?;
        let err = (s - direct).norm();
        rows.push(vec![n.to_string(), s.re.to_string(), s.im.to_string(), err.to_string()]);
        values.push(json!({"order": n, "value": complex(s), "abs_error": err}));
    }
    let v = json!({"point": g, "direction": x.iter().map(|z| z.re).collect::<Vec<_>>(), "direct": complex(direct), "partial_sums": values});
    let header = ["order", "re", "im", "abs_error"].map(String::from).to_vec();
    Ok(Output::with_table(v, Table { header, rows }))
}

fn majorant(state: &State, a: &MajorantArgs) -> Run {
    let (_, phi, g) = function_args(state, &a.f)?;
    let c = majorant_coeffs(&phi, &g, a.order).map_err(usage)?;
    let mut v = json!({"point": g, "order": a.order, "coefficients": c});
    if let Some(cval) = a.c {
        let quantstar::group::CoeffFn::Matrix(elems) = &phi else {
            return Err(Failure::Usage("--c needs a matrix-element function".into()));
        };
        let [elem] = elems.as_slice() else {
            return Err(Failure::Usage("--c needs a single matrix element".into()));
        };
        let elem = elem.clone().with_base(&g).map_err(usage)?;
        v["entire_seminorm"] =
            serde_json::to_value(entire_seminorm(&elem, cval, a.order).map_err(usage)?).map_err(usage)?;
        v["c"] = cval.into();
    }
    let header = ["k", "c_k"].map(String::from).to_vec();
    let rows = c.iter().enumerate().map(|(k, x)| vec![k.to_string(), x.to_string()]).collect();
    Ok(Output::with_table(v, Table { header, rows }))
}

fn radii(s: &str) -> Usage<Vec<f64>> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| format!("not a radius: {t:?}"))).collect()
}

fn cauchy_cmd(state: &State, a: &CauchyArgs) -> Run {
    let (name, spec) = state.algebra()?;
    let phi = input::matrix_element(&a.f.function, &name, spec.dim())?;
    let g = input::point(a.f.point.as_deref(), spec.dim())?;
    let tol = state.global.tol.unwrap_or(1e-9);
    let cfg = CauchyConfig {
        instances: a.instances,
        max_k: a.max_k,
        radii: radii(&a.radii)?,
        seed: state.global.seed,
        tol,
        ..CauchyConfig::default()
    };
    let report = cauchy_check(&phi, &g, &cfg).map_err(usage)?;
    let excess = |i: &quantstar::group::cauchy::CauchyInstance| ((i.lhs - i.rhs) / (i.rhs + 1.0)).max(0.0);
    let worst = report.instances.iter().enumerate().max_by(|x, y| excess(x.1).total_cmp(&excess(y.1)));
    let deviation = worst.map_or(0.0, |w| excess(w.1));
    let mut suite = Suite::default();
    suite.subchecks.push(checks::SubCheck {
        name: "cauchy-estimate".into(),
        deviation,
        tolerance: tol,
        samples: a.instances,
    });
    if deviation > tol {
        suite.counterexample =
            worst.map(|(idx, i)| json!({"instance": idx, "k": i.k, "r": i.r, "lhs": i.lhs, "rhs": i.rhs}));
    }
    suite.details = json!({"algebra": name, "violations": report.violations, "worst_ratio": report.worst_ratio});
    report_output(&state.report("cauchy-check", suite))
}

fn extend(state: &State, a: &ExtendArgs) -> Run {
    let (name, spec) = state.algebra()?;
    let phi = input::matrix_element(&a.f.function, &name, spec.dim())?;
    let g = input::point(a.f.point.as_deref(), spec.dim())?;
    let chi = input::reals(&a.chi, spec.dim())?;
    let xi = input::reals(&a.xi, spec.dim())?;
    let value = complex_extension_eval(&phi, &g, &chi, &xi).map_err(usage)?;
    let split = complex_extension_eval_split(&phi, &g, &chi, &xi).map_err(usage)?;
    let z: Vec<Complex64> = chi.iter().zip(&xi).map(|(a, b)| Complex64::new(*a, *b)).collect();
    let taylor = lie_taylor_eval(&quantstar::group::CoeffFn::Matrix(vec![phi]), &g, &z, a.order).map_err(usage)?;
    Ok(Output::json(json!({
        "point": g, "chi": chi, "xi": xi,
        "value": complex(value),
        "split_value": complex(split),
        "taylor": {"order": a.order, "value": complex(taylor), "abs_difference": (taylor - value).norm()},
    })))
}

fn algebra_cmd(state: &State, cmd: &AlgebraCmd) -> Run {
    match cmd {
        AlgebraCmd::Catalog => {
            let entries = ["abelian(2)", "heisenberg", "sl2", "so3", "axb"]
                .iter()
                .map(|name| {
                    let spec = quantstar::catalog(name).map_err(usage)?;
                    let rep = catalog_rep(name).map_err(usage)?;
                    Ok(json!({"name": name, "algebra": spec.to_json(), "representation": rep.to_json()}))
                })
                .collect::<Usage<Vec<_>>>()?;
            Ok(Output::json(json!({"names": CATALOG_NAMES, "examples": entries})))
        }
        AlgebraCmd::Validate => {
            let name = state.algebra_name()?;
            let spec = input::algebra_unchecked(name)?;
            let mut suite = Suite::default();
            let result = validate_algebra(spec.clone());
            suite.subchecks.push(checks::SubCheck {
                name: "antisymmetry-and-jacobi".into(),
                deviation: if result.is_ok() { 0.0 } else { 1.0 },
                tolerance: 0.0,
                samples: spec.dim().pow(4),
            });
            suite.counterexample = result.as_ref().err().map(|e| json!({"violation": e.to_string()}));
            suite.details = json!({"algebra": spec.to_json()});
            report_output(&state.report("algebra validate", suite))
        }
    }
}

fn run_check(state: &State, cmd: &CheckCmd) -> Usage<Vec<CheckReport>> {
    let ctx = state.ctx()?;
    let nonabelian = || state.algebra_list(&checks::NONABELIAN);
    let all = || state.algebra_list(&checks::ALL);
    let one = |name: &str, suite: Suite| vec![state.report(name, suite)];
    Ok(match cmd {
        CheckCmd::Associativity { max_degree, trials } => {
            one("associativity", checks::associativity(&ctx, &nonabelian(), *max_degree, *trials)?)
        }
        CheckCmd::Limits { trials } => one("limits", checks::limits(&ctx, &nonabelian(), *trials)?),
        CheckCmd::PbwRoundtrip { max_degree, trials } => {
            one("pbw-roundtrip", checks::pbw_roundtrip(&ctx, &all(), *max_degree, *trials)?)
        }
        CheckCmd::Abelian { max_degree, trials } => one("abelian", checks::abelian(&ctx, *max_degree, *trials)?),
        CheckCmd::Operator { samples } => one("operator", checks::operator(&ctx, &all(), *samples)?),
        CheckCmd::Taylor { trials } => one("taylor", checks::taylor(&ctx, *trials)?),
        CheckCmd::Cauchy { instances, max_k, radii: r } => {
            one("cauchy", checks::cauchy(&ctx, *instances, *max_k, &radii(r)?)?)
        }
        CheckCmd::Extension { trials } => one("extension", checks::extension(&ctx, *trials)?),
        CheckCmd::Seminorm { trials } => one("seminorm", checks::seminorm(&ctx, *trials)?),
        CheckCmd::Polarization { max_degree, trials } => {
            one("polarization", checks::polarization(&ctx, *max_degree, *trials)?)
        }
        CheckCmd::All => {
            let suites = [
                CheckCmd::Associativity { max_degree: 9, trials: 50 },
                CheckCmd::Limits { trials: 50 },
                CheckCmd::PbwRoundtrip { max_degree: 8, trials: 100 },
                CheckCmd::Abelian { max_degree: 5, trials: 30 },
                CheckCmd::Operator { samples: 20 },
                CheckCmd::Taylor { trials: 20 },
                CheckCmd::Cauchy { instances: 100, max_k: 6, radii: "1,2,4".into() },
                CheckCmd::Extension { trials: 50 },
                CheckCmd::Seminorm { trials: 200 },
                CheckCmd::Polarization { max_degree: 5, trials: 5 },
            ];
            let mut reports = Vec::new();
            for s in &suites {
                reports.extend(run_check(state, s)?);
            }
            reports
        }
    })
}

fn check(state: &State, cmd: &CheckCmd) -> Run {
    let reports = run_check(state, cmd)?;
    if let [report] = reports.as_slice() {
        return report_output(report);
    }
    let pass = reports.iter().all(|r| r.pass);
    let header = ["check", "pass", "deviation", "tolerance", "samples"].map(String::from).to_vec();
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.check.clone(),
                r.pass.to_string(),
                r.deviation.to_string(),
                r.tolerance.to_string(),
                r.samples.to_string(),
            ]
        })
        .collect();
    let out = Output::with_table(json!({"pass": pass, "reports": reports}), Table { header, rows });
    if pass {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn digest(cli: &Cli) -> String {
    let mut canonical = cli.clone();
    canonical.global.out = None;
    canonical.global.format = Format::Json;
    canonical.global.timing = false;
    let hash = Sha256::digest(format!("{canonical:?}").as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

fn emit(out: &Output, global: &Global) -> Result<(), String> {
    let text = output::render(out, global.format)?;
    match &global.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let state = State { digest: digest(&cli), global: cli.global.clone(), started: Instant::now() };
    let result = match &cli.command {
        Command::Algebra(c) => algebra_cmd(&state, c),
        Command::Gutt(c) => gutt(&state, c),
        Command::Std(c) => std_cmd(&state, c),
        Command::Taylor(a) => taylor(&state, a),
        Command::Majorant(a) => majorant(&state, a),
        Command::CauchyCheck(a) => cauchy_cmd(&state, a),
        Command::Extend(a) => extend(&state, a),
        Command::Check(c) => check(&state, c),
    };
    let (out, code) = match result {
        Ok(out) => (out, 0),
        Err(Failure::Check(out)) => (out, 1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(msg) = emit(&out, &state.global) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
