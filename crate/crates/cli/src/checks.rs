//! Property-check suites behind `quantstar check ...`.
//!
//! A suite is a list of sub-checks, each with its own deviation and
//! tolerance. The report carries the sub-check with the largest
//! deviation-to-tolerance ratio, so `pass` holds iff `deviation <= tolerance`.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use quantstar::group::cauchy::factorial_estimate_check;
use quantstar::group::{
    catalog_rep, cauchy_check, complex_extension_eval, lie_taylor_eval, CauchyConfig, CoeffFn, GroupElementExpr,
    MatrixRep,
};
use quantstar::gutt::{
    classical_limit, eval_on_dual, gutt_star, hbar_coefficient, kks_bracket, poisson_bracket, seminorm_ratio_table,
    DualPoint,
};
use quantstar::parse::{format_abelian, format_sym_tensor};
use quantstar::scalar::{int, rat};
use quantstar::std_star::{operator_consistency_check, std_star, std_star_abelian, AbelianPhasePoly, PhaseSpacePoly};
use quantstar::sym::{binomial, factorial, l1_proj_norm, polarize, seminorm_rc, sym_product};
use quantstar::{
    catalog_arc, pbw_desymmetrize, pbw_symmetrize, Enveloping, GaussianRational, HbarScalar, LieAlgebraSpec, Monomial,
    SymTensor,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::random;

pub const NONABELIAN: [&str; 4] = ["heisenberg", "sl2", "so3", "axb"];
pub const ALL: [&str; 6] = ["abelian(1)", "abelian(3)", "heisenberg", "sl2", "so3", "axb"];

#[derive(Clone, Debug, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub samples: usize,
}

impl SubCheck {
    fn exact(name: &str, failed: bool, samples: usize) -> Self {
        Self { name: name.into(), deviation: if failed { 1.0 } else { 0.0 }, tolerance: 0.0, samples }
    }

    fn numeric(name: &str, deviation: f64, tolerance: f64, samples: usize) -> Self {
        Self { name: name.into(), deviation, tolerance, samples }
    }

    pub fn pass(&self) -> bool {
        self.deviation <= self.tolerance
    }

    fn severity(&self) -> f64 {
        match (self.deviation, self.tolerance) {
            (d, _) if d.is_nan() => f64::INFINITY,
            (d, t) if d <= t => {
                if t > 0.0 {
                    d / t
                } else {
                    0.0
                }
            }
            (d, t) if t > 0.0 => d / t,
            _ => f64::INFINITY,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub inputs_digest: String,
    pub pass: bool,
    pub deviation: f64,
    pub tolerance: f64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_seconds: Option<f64>,
    pub counterexample: Option<Value>,
    pub subchecks: Vec<SubCheck>,
    pub details: Value,
}

/// Outcome of a suite before it is wrapped into a [`CheckReport`].
#[derive(Default)]
pub struct Suite {
    pub subchecks: Vec<SubCheck>,
    pub counterexample: Option<Value>,
    pub details: Value,
}

impl Suite {
    fn push(&mut self, sub: SubCheck, counterexample: Option<Value>) {
        if self.counterexample.is_none() && !sub.pass() {
            self.counterexample = counterexample;
        }
        self.subchecks.push(sub);
    }

    pub fn into_report(self, check: &str, digest: &str, started: Option<Instant>) -> CheckReport {
        let worst = self
            .subchecks
            .iter()
            .max_by(|a, b| a.severity().total_cmp(&b.severity()))
            .cloned()
            .unwrap_or_else(|| SubCheck::exact("empty", false, 0));
        CheckReport {
            check: check.into(),
            inputs_digest: digest.into(),
            pass: self.subchecks.iter().all(SubCheck::pass),
            deviation: worst.deviation,
            tolerance: worst.tolerance,
            samples: self.subchecks.iter().map(|s| s.samples).sum(),
            runtime_seconds: started.map(|t| t.elapsed().as_secs_f64()),
            counterexample: self.counterexample,
            subchecks: self.subchecks,
            details: self.details,
        }
    }
}

/// Shared parameters of all suites.
pub struct Ctx {
    pub seed: u64,
    pub hbar: Complex64,
    /// Overrides the primary numeric tolerance of a suite.
    pub tol: Option<f64>,
}

impl Ctx {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

type R<T> = Result<T, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn env(name: &str) -> R<Enveloping> {
    catalog_arc(name).map(Enveloping::new).map_err(err)
}

fn rep(name: &str) -> R<Arc<MatrixRep>> {
    catalog_rep(name).map(Arc::new).map_err(err)
}

fn text(spec: &LieAlgebraSpec, p: &SymTensor) -> Value {
    Value::String(format_sym_tensor(spec, p))
}

fn rel_dev(a: Complex64, b: Complex64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).norm() / a.norm().max(b.norm())
}

/// Exact associativity `(p⋆q)⋆r = p⋆(q⋆r)` on random homogeneous triples.
pub fn associativity(ctx: &Ctx, algebras: &[String], max_degree: usize, trials: usize) -> R<Suite> {
    if max_degree < 3 {
        return Err("--max-degree must be at least 3".into());
    }
    let mut suite = Suite::default();
    for name in algebras {
        let e = env(name)?;
        let n = e.dim();
        let triples: Vec<[SymTensor; 3]> = (0..trials)
            .map(|t| {
                let mut rng = random::stream(ctx.seed, &format!("associativity/{name}"), t as u64);
                // every fifth triple has the maximal total degree
                let total = if t % 5 == 0 { max_degree } else { rng.gen_range(3..=max_degree) };
                let d1 = rng.gen_range(1..=total - 2);
                let d2 = rng.gen_range(1..=total - d1 - 1);
                [d1, d2, total - d1 - d2].map(|d| random::homogeneous(&mut rng, n, d, 3, true))
            })
            .collect();
        let results = triples
            .par_iter()
            .map(|[p, q, r]| -> R<Option<(SymTensor, SymTensor)>> {
                let left = gutt_star(&e, &gutt_star(&e, p, q).map_err(err)?, r).map_err(err)?;
                let right = gutt_star(&e, p, &gutt_star(&e, q, r).map_err(err)?).map_err(err)?;
                Ok((left != right).then_some((left, right)))
            })
            .collect::<R<Vec<_>>>()?;
        let bad = results.iter().position(Option::is_some);
        let counterexample = bad.map(|i| {
            let [p, q, r] = &triples[i];
            let (left, right) = results[i].clone().unwrap();
            let s = e.algebra();
            json!({"algebra": name, "trial": i, "p": text(s, p), "q": text(s, q), "r": text(s, r),
                   "left": text(s, &left), "right": text(s, &right)})
        });
        suite.push(SubCheck::exact(&format!("associativity/{name}"), bad.is_some(), trials), counterexample);
    }
    suite.details = json!({"algebras": algebras, "max_degree": max_degree, "trials_per_algebra": trials});
    Ok(suite)
}

/// First-order structure, classical limit, Poisson bracket properties and
/// the `ħ`-degree bound.
pub fn limits(ctx: &Ctx, algebras: &[String], trials: usize) -> R<Suite> {
    let mut suite = Suite::default();
    let half_over_i = HbarScalar::hbar_over_i().scale_rational(&rat(1, 2));
    for name in algebras {
        let e = env(name)?;
        let spec = e.algebra().clone();
        let n = e.dim();
        let gen = |i: usize| SymTensor::generator(n, i);
        let lie = |i: usize, j: usize| {
            SymTensor::from_terms(
                n,
                spec.bracket_basis(i, j)
                    .iter()
                    .map(|(k, c)| (Monomial::generator(n, *k), HbarScalar::rational(c.clone()))),
            )
        };
        let mut rng = random::stream(ctx.seed, &format!("limits/{name}"), 0);

        let mut bad = None;
        'first: for i in 0..n {
            for j in 0..n {
                let star = gutt_star(&e, &gen(i), &gen(j)).map_err(err)?;
                let expected =
                    sym_product(&gen(i), &gen(j)).map_err(err)?.add(&lie(i, j).scale(&half_over_i)).map_err(err)?;
                if star != expected {
                    bad = Some(json!({"algebra": name, "i": i + 1, "j": j + 1,
                        "star": text(&spec, &star), "expected": text(&spec, &expected)}));
                    break 'first;
                }
            }
        }
        suite.push(SubCheck::exact(&format!("first-order/{name}"), bad.is_some(), n * n), bad);

        let mut bad = None;
        let mut degree_bad = None;
        for _ in 0..trials {
            let p = random::sym(&mut rng, n, 4, 3, true);
            let q = random::sym(&mut rng, n, 4, 3, true);
            let star = gutt_star(&e, &p, &q).map_err(err)?;
            let classical = sym_product(&hbar_coefficient(&p, 0), &hbar_coefficient(&q, 0)).map_err(err)?;
            if bad.is_none() && classical_limit(&star) != classical {
                bad = Some(json!({"algebra": name, "p": text(&spec, &p), "q": text(&spec, &q)}));
            }
            let bound = p.degree().unwrap_or(0)
                + q.degree().unwrap_or(0)
                + p.hbar_degree().unwrap_or(0)
                + q.hbar_degree().unwrap_or(0);
            if degree_bad.is_none() && star.hbar_degree().unwrap_or(0) > bound {
                degree_bad = Some(json!({"algebra": name, "p": text(&spec, &p), "q": text(&spec, &q), "bound": bound}));
            }
        }
        suite.push(SubCheck::exact(&format!("classical-limit/{name}"), bad.is_some(), trials), bad);
        suite.push(SubCheck::exact(&format!("hbar-degree/{name}"), degree_bad.is_some(), trials), degree_bad);

        let mut bad = None;
        'gens: for i in 0..n {
            for j in 0..n {
                let pb = poisson_bracket(&e, &gen(i), &gen(j)).map_err(err)?;
                if pb != lie(i, j) {
                    bad = Some(json!({"algebra": name, "i": i + 1, "j": j + 1, "bracket": text(&spec, &pb)}));
                    break 'gens;
                }
            }
        }
        suite.push(SubCheck::exact(&format!("bracket-on-generators/{name}"), bad.is_some(), n * n), bad);

        let pb = |a: &SymTensor, b: &SymTensor| poisson_bracket(&e, a, b).map_err(err);
        let (mut jacobi, mut leibniz, mut kks) = (None, None, None);
        let triples = trials.div_ceil(5);
        for _ in 0..triples {
            let [f, g, h] = [0; 3].map(|_| random::sym(&mut rng, n, 4, 2, false));
            let inputs = || json!({"algebra": name, "f": text(&spec, &f), "g": text(&spec, &g), "h": text(&spec, &h)});
            let jac = pb(&f, &pb(&g, &h)?)?
                .add(&pb(&g, &pb(&h, &f)?)?)
                .map_err(err)?
                .add(&pb(&h, &pb(&f, &g)?)?)
                .map_err(err)?;
            if jacobi.is_none() && !jac.is_zero() {
                jacobi = Some(inputs());
            }
            let lhs = pb(&f, &sym_product(&g, &h).map_err(err)?)?;
            let rhs = sym_product(&pb(&f, &g)?, &h)
                .map_err(err)?
                .add(&sym_product(&g, &pb(&f, &h)?).map_err(err)?)
                .map_err(err)?;
            if leibniz.is_none() && lhs != rhs {
                leibniz = Some(inputs());
            }
            if kks.is_none() && pb(&f, &g)? != kks_bracket(&e, &f, &g).map_err(err)? {
                kks = Some(inputs());
            }
        }
        suite.push(SubCheck::exact(&format!("jacobi/{name}"), jacobi.is_some(), triples), jacobi);
        suite.push(SubCheck::exact(&format!("leibniz/{name}"), leibniz.is_some(), triples), leibniz);
        suite.push(SubCheck::exact(&format!("kks/{name}"), kks.is_some(), triples), kks);

        if let Ok(r) = rep(name) {
            let mut bad = None;
            let count = trials.div_ceil(10);
            for _ in 0..count {
                let strip =
                    |rng: &mut ChaCha8Rng| random::phase_poly(rng, &r, 3, 2).map_sym(|s| hbar_coefficient(s, 0));
                let p = strip(&mut rng).map_err(err)?;
                let q = strip(&mut rng).map_err(err)?;
                let deg = |x: &PhaseSpacePoly| x.terms().iter().filter_map(|(_, s)| s.degree()).max().unwrap_or(0);
                let bound = deg(&p) + deg(&q);
                let star = std_star(&e, &p, &q).map_err(err)?;
                if bad.is_none() && star.hbar_degree().unwrap_or(0) > bound {
                    bad = Some(json!({"algebra": name, "bound": bound, "found": star.hbar_degree()}));
                }
            }
            suite.push(SubCheck::exact(&format!("std-hbar-degree/{name}"), bad.is_some(), count), bad);
        }
    }
    suite.details = json!({"algebras": algebras, "trials_per_algebra": trials});
    Ok(suite)
}

/// `ω⁻¹(ω(p)) = p` on random tensors.
pub fn pbw_roundtrip(ctx: &Ctx, algebras: &[String], max_degree: usize, trials: usize) -> R<Suite> {
    let mut suite = Suite::default();
    for name in algebras {
        let e = env(name)?;
        let spec = e.algebra().clone();
        let mut rng = random::stream(ctx.seed, &format!("pbw/{name}"), 0);
        let mut bad = None;
        for _ in 0..trials {
            let p = random::sym(&mut rng, e.dim(), max_degree, 4, true);
            let back = pbw_desymmetrize(&e, &pbw_symmetrize(&e, &p).map_err(err)?).map_err(err)?;
            if back != p {
                bad = Some(json!({"algebra": name, "p": text(&spec, &p), "back": text(&spec, &back)}));
                break;
            }
        }
        suite.push(SubCheck::exact(&format!("roundtrip/{name}"), bad.is_some(), trials), bad);
    }
    suite.details = json!({"algebras": algebras, "max_degree": max_degree, "trials_per_algebra": trials});
    Ok(suite)
}

/// `(φ pⁿ) ⋆ (ψ pᵐ) = Σ_k λ^k C(n,k) φ ψ^{(k)} p^{n+m-k}` for dense 1-d
/// coefficient lists.
fn one_dim_identity(
    phi: &[GaussianRational],
    n: u32,
    psi: &[GaussianRational],
    m: u32,
    lambda: &HbarScalar,
) -> AbelianPhasePoly {
    let mut out = AbelianPhasePoly::zero(1);
    let mut dpsi = psi.to_vec();
    let mut lam = HbarScalar::from_int(1);
    for k in 0..=n {
        let binom = binomial(n, k);
        for (i, a) in phi.iter().enumerate() {
            for (j, b) in dpsi.iter().enumerate() {
                let c = HbarScalar::constant(a * b).scale_rational(&binom);
                out.add_term(Monomial(vec![(i + j) as u32]), Monomial(vec![n + m - k]), &(&c * &lam));
            }
        }
        dpsi = dpsi.iter().enumerate().skip(1).map(|(j, c)| c.scale(&int(j as i64))).collect();
        lam = &lam * lambda;
    }
    out
}

fn phase_term(phi: &[GaussianRational], n: u32) -> AbelianPhasePoly {
    let mut out = AbelianPhasePoly::zero(1);
    for (i, c) in phi.iter().enumerate() {
        out.add_term(Monomial(vec![i as u32]), Monomial(vec![n]), &HbarScalar::constant(c.clone()));
    }
    out
}

fn group_path(e: &Enveloping, f: &AbelianPhasePoly, g: &AbelianPhasePoly) -> R<AbelianPhasePoly> {
    std_star(e, &f.to_phase_space().map_err(err)?, &g.to_phase_space().map_err(err)?)
        .map_err(err)?
        .to_abelian()
        .map_err(err)
}

/// The factorization through unipotent matrix elements against the closed
/// form on `T*ℝ` and `T*ℝ²`.
pub fn abelian(ctx: &Ctx, max_degree: u32, trials: usize) -> R<Suite> {
    let mut suite = Suite::default();
    let lam = HbarScalar::hbar_over_i();
    let mono = |a: u32, b: u32| AbelianPhasePoly::term(Monomial(vec![a]), Monomial(vec![b]), HbarScalar::from_int(1));
    let e1 = env("abelian(1)")?;
    let monomials: Vec<(u32, u32)> = (0..=max_degree).flat_map(|d| (0..=d).map(move |a| (a, d - a))).collect();
    let mut bad = None;
    'pairs: for &(a, b) in &monomials {
        for &(c, d) in &monomials {
            let (f, g) = (mono(a, b), mono(c, d));
            let closed = std_star_abelian(&f, &g, &lam).map_err(err)?;
            let group = group_path(&e1, &f, &g)?;
            if group != closed {
                bad = Some(json!({"f": format_abelian(&f), "g": format_abelian(&g),
                    "group": format_abelian(&group), "closed_form": format_abelian(&closed)}));
                break 'pairs;
            }
        }
    }
    suite.push(SubCheck::exact("monomials/T*R", bad.is_some(), monomials.len().pow(2)), bad);

    let e2 = env("abelian(2)")?;
    let mut rng = random::stream(ctx.seed, "abelian", 0);
    let mut bad = None;
    for _ in 0..trials {
        let poly = |rng: &mut ChaCha8Rng| {
            let mut f = AbelianPhasePoly::zero(2);
            for _ in 0..3 {
                let d = rng.gen_range(0..=max_degree as usize);
                let m = random::monomial(rng, 4, d);
                f.add_term(Monomial(m.0[..2].to_vec()), Monomial(m.0[2..].to_vec()), &random::scalar(rng, true));
            }
            f
        };
        let (f, g) = (poly(&mut rng), poly(&mut rng));
        let (group, closed) = (group_path(&e2, &f, &g)?, std_star_abelian(&f, &g, &lam).map_err(err)?);
        if group != closed {
            bad = Some(json!({"f": format_abelian(&f), "g": format_abelian(&g),
                "group": format_abelian(&group), "closed_form": format_abelian(&closed)}));
            break;
        }
    }
    suite.push(SubCheck::exact("random/T*R2", bad.is_some(), trials), bad);

    let i_hbar = HbarScalar::monomial(GaussianRational::i(), 1);
    let mut bad = None;
    let poly_1d =
        |rng: &mut ChaCha8Rng| (0..=3).map(|_| GaussianRational::from_int(rng.gen_range(-4..=4))).collect::<Vec<_>>();
    for n in 0..=3 {
        for m in 0..=3 {
            let (phi, psi) = (poly_1d(&mut rng), poly_1d(&mut rng));
            let (f, g) = (phase_term(&phi, n), phase_term(&psi, m));
            let group_ok = group_path(&e1, &f, &g)? == one_dim_identity(&phi, n, &psi, m, &lam);
            let closed_ok =
                std_star_abelian(&f, &g, &i_hbar).map_err(err)? == one_dim_identity(&phi, n, &psi, m, &i_hbar);
            if bad.is_none() && !(group_ok && closed_ok) {
                bad = Some(json!({"n": n, "m": m, "f": format_abelian(&f), "g": format_abelian(&g),
                    "group_path_ok": group_ok, "closed_form_ok": closed_ok}));
            }
        }
    }
    suite.push(SubCheck::exact("binomial-identity", bad.is_some(), 16), bad);
    suite.details = json!({"max_degree": max_degree, "random_pairs": trials});
    Ok(suite)
}

/// `ϱ(P⋆Q)ψ = ϱ(P)ϱ(Q)ψ` at sampled group elements.
pub fn operator(ctx: &Ctx, algebras: &[String], samples: usize) -> R<Suite> {
    let tol = ctx.tol(1e-9);
    let mut suite = Suite::default();
    let mut worst = serde_json::Map::new();
    for name in algebras {
        let e = env(name)?;
        let r = rep(name)?;
        let mut rng = random::stream(ctx.seed, &format!("operator/{name}"), 0);
        let p = random::phase_poly(&mut rng, &r, 2, 2);
        let q = random::phase_poly(&mut rng, &r, 2, 2);
        let psi = CoeffFn::Matrix(vec![random::matrix_element(&mut rng, &r)]);
        let points: Vec<GroupElementExpr> =
            (0..samples).map(|_| random::group_element(&mut rng, e.dim(), 0.8)).collect();
        let report = operator_consistency_check(&e, &p, &q, &psi, &points, ctx.hbar).map_err(err)?;
        let counterexample = json!({"algebra": name, "sample": report.worst_sample,
            "point": points.get(report.worst_sample), "relative_deviation": report.max_rel_deviation});
        worst.insert(name.clone(), report.max_rel_deviation.into());
        suite.push(
            SubCheck::numeric(&format!("consistency/{name}"), report.max_rel_deviation, tol, samples),
            Some(counterexample),
        );
    }
    suite.details = json!({"hbar": crate::output::complex(ctx.hbar), "max_relative_deviation": worst});
    Ok(suite)
}

/// Convergence of the Lie-Taylor series of `sl2` matrix elements.
pub fn taylor(ctx: &Ctx, trials: usize) -> R<Suite> {
    let tol = ctx.tol(1e-10);
    let floor = 64.0 * f64::EPSILON;
    let r = rep("sl2")?;
    let orders = [5usize, 10, 15, 20];
    let rows = (0..trials)
        .into_par_iter()
        .map(|t| -> R<(Vec<f64>, Value)> {
            let mut rng = random::stream(ctx.seed, "taylor", t as u64);
            let phi = random::matrix_element(&mut rng, &r);
            let g = random::group_element(&mut rng, 3, 1.0);
            let x: Vec<Complex64> =
                random::reals(&mut rng, 3, 0.3).into_iter().map(|v| Complex64::new(v, 0.0)).collect();
            let direct = phi.eval(&g.then(x.clone())).map_err(err)?;
            let f = CoeffFn::Matrix(vec![phi]);
            let errs = orders
                .iter()
                .map(|&n| Ok(rel_dev(lie_taylor_eval(&f, &g, &x, n).map_err(err)?, direct)))
                .collect::<R<Vec<f64>>>()?;
            Ok((errs, json!({"trial": t, "point": g, "x": x.iter().map(|z| z.re).collect::<Vec<_>>()})))
        })
        .collect::<R<Vec<_>>>()?;
    let mut suite = Suite::default();
    let (accuracy, worst_trial) =
        rows.iter().enumerate().fold((0.0f64, 0), |acc, (i, (e, _))| if e[3] > acc.0 { (e[3], i) } else { acc });
    let mut cex = rows[worst_trial].1.clone();
    cex["errors"] = json!(rows[worst_trial].0);
    suite.push(SubCheck::numeric("order-20-accuracy", accuracy, tol, trials), Some(cex));
    // an increase counts only once both errors are above rounding level
    let increase = rows
        .iter()
        .enumerate()
        .flat_map(|(i, (e, _))| e.windows(2).map(move |w| (if w[1] > floor { (w[1] - w[0]).max(0.0) } else { 0.0 }, i)))
        .fold((0.0f64, 0), |acc, x| if x.0 > acc.0 { x } else { acc });
    let mut cex = rows[increase.1].1.clone();
    cex["errors"] = json!(rows[increase.1].0);
    suite.push(SubCheck::numeric("monotone-decrease", increase.0, 0.0, trials), Some(cex));
    suite.details = json!({"orders": orders, "rounding_floor": floor,
        "worst_errors": orders.iter().enumerate().map(|(k, _)| rows.iter().map(|r| r.0[k]).fold(0.0, f64::max)).collect::<Vec<_>>()});
    Ok(suite)
}

/// Sampled Lie-theoretic Cauchy estimates plus the exact factorial bound.
pub fn cauchy(ctx: &Ctx, instances: usize, max_k: usize, radii: &[f64]) -> R<Suite> {
    let tol = ctx.tol(1e-9);
    let mut rng = random::stream(ctx.seed, "cauchy", 0);
    let r = rep("sl2")?;
    let phi = random::matrix_element(&mut rng, &r);
    let g = random::group_element(&mut rng, 3, 0.5);
    let cfg = CauchyConfig { instances, max_k, radii: radii.to_vec(), seed: ctx.seed, tol, ..CauchyConfig::default() };
    let report = cauchy_check(&phi, &g, &cfg).map_err(err)?;
    let excess = |i: &quantstar::group::cauchy::CauchyInstance| ((i.lhs - i.rhs) / (i.rhs + 1.0)).max(0.0);
    let worst = report.instances.iter().enumerate().max_by(|a, b| excess(a.1).total_cmp(&excess(b.1)));
    let mut suite = Suite::default();
    let cex = worst.map(|(idx, i)| json!({"instance": idx, "k": i.k, "r": i.r, "lhs": i.lhs, "sampled_sup": i.sampled_sup, "rhs": i.rhs}));
    suite.push(SubCheck::numeric("cauchy-estimate", worst.map_or(0.0, |w| excess(w.1)), tol, instances), cex);
    let first_bad = factorial_estimate_check(20);
    suite.push(SubCheck::exact("factorial-bound", first_bad.is_some(), 20), first_bad.map(|n| json!({"n": n})));
    suite.details =
        json!({"violations": report.violations, "worst_ratio": report.worst_ratio, "max_k": max_k, "radii": radii});
    Ok(suite)
}

/// Holomorphic extension against the Lie-Taylor series and its restriction
/// to the real group.
pub fn extension(ctx: &Ctx, trials: usize) -> R<Suite> {
    let tol = ctx.tol(1e-8);
    let r = rep("sl2")?;
    let rows = (0..trials)
        .into_par_iter()
        .map(|t| -> R<(f64, f64, Value)> {
            let mut rng = random::stream(ctx.seed, "extension", t as u64);
            let phi = random::matrix_element(&mut rng, &r);
            let g = random::group_element(&mut rng, 3, 0.5);
            let chi = random::reals(&mut rng, 3, 0.2);
            let xi = random::reals(&mut rng, 3, 0.2);
            let z: Vec<Complex64> = chi.iter().zip(&xi).map(|(a, b)| Complex64::new(*a, *b)).collect();
            let f = CoeffFn::Matrix(vec![phi.clone()]);
            let ext = complex_extension_eval(&phi, &g, &chi, &xi).map_err(err)?;
            let taylor = lie_taylor_eval(&f, &g, &z, 24).map_err(err)?;
            let restricted = complex_extension_eval(&phi, &g, &chi, &[0.0; 3]).map_err(err)?;
            let chi_c: Vec<Complex64> = chi.iter().map(|a| Complex64::new(*a, 0.0)).collect();
            let direct = phi.eval(&g.then(chi_c.clone())).map_err(err)?;
            let series = lie_taylor_eval(&f, &g, &chi_c, 30).map_err(err)?;
            let dr = rel_dev(restricted, direct).max(rel_dev(restricted, series));
            Ok((rel_dev(ext, taylor), dr, json!({"trial": t, "point": g, "chi": chi, "xi": xi})))
        })
        .collect::<R<Vec<_>>>()?;
    let argmax = |f: fn(&(f64, f64, Value)) -> f64| {
        rows.iter().enumerate().fold((0.0f64, 0), |acc, (i, r)| if f(r) > acc.0 { (f(r), i) } else { acc })
    };
    let mut suite = Suite::default();
    let (d, i) = argmax(|r| r.0);
    suite.push(SubCheck::numeric("taylor-agreement", d, tol, trials), Some(rows[i].2.clone()));
    let (d, i) = argmax(|r| r.1);
    suite.push(SubCheck::numeric("restriction", d, 1e-12, trials), Some(rows[i].2.clone()));
    suite.details = json!({"taylor_order": 24, "coordinate_bound": 0.2});
    Ok(suite)
}

/// Monomial norms, submultiplicativity of `p_{0,c}` and the empirical
/// continuity table of the Gutt product at `R = 1`.
pub fn seminorm(ctx: &Ctx, trials: usize) -> R<Suite> {
    let one = Complex64::new(1.0, 0.0);
    let mut suite = Suite::default();
    let mut rng = random::stream(ctx.seed, "seminorm", 0);
    let mut bad = None;
    let mut count = 0;
    for n in 1..=4 {
        for d in 0..=6 {
            let m = random::monomial(&mut rng, n, d);
            let norms = l1_proj_norm(&SymTensor::term(m.clone(), HbarScalar::from_int(1)), one);
            let expected: Vec<f64> = (0..=d).map(|k| if k == d { 1.0 } else { 0.0 }).collect();
            if bad.is_none() && norms != expected {
                bad = Some(json!({"monomial": m.0, "norms": norms}));
            }
            count += 1;
        }
    }
    suite.push(SubCheck::exact("monomial-norm", bad.is_some(), count), bad);

    let mut worst = (0.0f64, None);
    for t in 0..trials {
        let p = random::sym(&mut rng, 3, 4, 4, false);
        let q = random::sym(&mut rng, 3, 4, 4, false);
        let c = [0.5, 1.0, 2.0][t % 3];
        let lhs = seminorm_rc(&sym_product(&p, &q).map_err(err)?, 0.0, c, one);
        let rhs = seminorm_rc(&p, 0.0, c, one) * seminorm_rc(&q, 0.0, c, one);
        let excess = if rhs > 0.0 { (lhs / rhs - 1.0).max(0.0) } else { 0.0 };
        if excess > worst.0 || worst.1.is_none() {
            let spec = quantstar::catalog("abelian(3)").map_err(err)?;
            worst = (excess, Some(json!({"p": text(&spec, &p), "q": text(&spec, &q), "c": c, "lhs": lhs, "rhs": rhs})));
        }
    }
    suite.push(SubCheck::numeric("submultiplicative", worst.0, 1e-12, trials), worst.1);

    let e = env("sl2")?;
    let p = SymTensor::from_terms(3, [(Monomial(vec![1, 1, 0]), HbarScalar::from_int(1))]);
    let q = SymTensor::from_terms(3, [(Monomial(vec![0, 1, 2]), HbarScalar::from_int(2))]);
    let table = seminorm_ratio_table(&e, &p, &q, &[0.5, 1.0, 2.0], &[0.5, 1.0, 2.0, 4.0], ctx.hbar).map_err(err)?;
    suite.details = json!({"ratio_table": {"algebra": "sl2", "p": "h*e", "q": "2*e*f^2", "hbar": crate::output::complex(ctx.hbar), "rows": table}});
    Ok(suite)
}

/// Polarization reconstructs symmetric forms exactly and obeys the estimate
/// with constant `k^k/k!` against a sampled sup over the unit ℓ¹ ball.
pub fn polarization(ctx: &Ctx, max_degree: usize, trials: usize) -> R<Suite> {
    let mut suite = Suite::default();
    let mut rng = random::stream(ctx.seed, "polarization", 0);
    let zero = GaussianRational::from_int(0);
    let (mut exact_bad, mut exact_count) = (None, 0);
    let mut worst = (0.0f64, None);
    let spec = quantstar::catalog("abelian(3)").map_err(err)?;
    for k in 1..=max_degree {
        for _ in 0..trials {
            let p = random::homogeneous(&mut rng, 3, k, 4, false);
            let poly = |v: &[GaussianRational]| p.eval_exact(v, &zero);
            let mut tuple = vec![0usize; k];
            loop {
                let vectors: Vec<Vec<GaussianRational>> = tuple
                    .iter()
                    .map(|&j| (0..3).map(|i| GaussianRational::from_int((i == j) as i64)).collect())
                    .collect();
                let m = Monomial::from_word(3, &tuple);
                let expected = p.coeff(&m).coeff(0).scale(&(m.factorial_product() / factorial(k)));
                if exact_bad.is_none() && polarize(poly, &vectors) != expected {
                    exact_bad = Some(
                        json!({"p": text(&spec, &p), "basis_indices": tuple.iter().map(|j| j + 1).collect::<Vec<_>>()}),
                    );
                }
                exact_count += 1;
                let Some(pos) = tuple.iter().rposition(|&j| j < 2) else { break };
                tuple[pos] += 1;
                tuple[pos + 1..].iter_mut().for_each(|x| *x = 0);
            }

            let pc = |v: &[Complex64]| eval_on_dual(&p, &DualPoint { coords: v.to_vec() }, Complex64::new(0.0, 0.0));
            let unit_l1 = |rng: &mut ChaCha8Rng| {
                let v: Vec<Complex64> =
                    (0..3).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                let s: f64 = v.iter().map(|x| x.norm()).sum();
                v.into_iter().map(|x| x / s).collect::<Vec<_>>()
            };
            let vs: Vec<Vec<Complex64>> = (0..k).map(|_| unit_l1(&mut rng)).collect();
            let lhs = polarize(|v: &[Complex64]| pc(v).unwrap_or_default(), &vs).norm();
            let mut sup: f64 = 0.0;
            for signs in 0u32..(1 << k) {
                let point: Vec<Complex64> = (0..3)
                    .map(|i| {
                        vs.iter()
                            .enumerate()
                            .map(|(j, v)| if signs >> j & 1 == 1 { -v[i] } else { v[i] })
                            .sum::<Complex64>()
                            / k as f64
                    })
                    .collect();
                sup = sup.max(pc(&point).map_err(err)?.norm());
            }
            for _ in 0..200 {
                let r: f64 = rng.gen_range(0.0..1.0);
                let point: Vec<Complex64> = unit_l1(&mut rng).into_iter().map(|x| x * r).collect();
                sup = sup.max(pc(&point).map_err(err)?.norm());
            }
            let bound = (k as f64).powi(k as i32) / (1..=k).map(|j| j as f64).product::<f64>() * sup;
            let excess = if bound > 0.0 { (lhs / bound - 1.0).max(0.0) } else { lhs };
            if excess > worst.0 || worst.1.is_none() {
                worst = (excess, Some(json!({"p": text(&spec, &p), "degree": k, "lhs": lhs, "bound": bound})));
            }
        }
    }
    suite.push(SubCheck::exact("exact-reconstruction", exact_bad.is_some(), exact_count), exact_bad);
    suite.push(SubCheck::numeric("estimate", worst.0, 1e-12, max_degree * trials), worst.1);
    suite.details = json!({"max_degree": max_degree, "forms_per_degree": trials});
    Ok(suite)
}
