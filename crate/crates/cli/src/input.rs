//! Parsing of command-line values into library objects.

use std::sync::Arc;

use num_complex::Complex64;
use quantstar::algebra::AlgebraJson;
use quantstar::group::coeff::CoeffFnJson;
use quantstar::group::rep::{basis_vector, catalog_rep};
use quantstar::group::{CoeffFn, GroupElementExpr, MatrixElementFunction, MatrixRep};
use quantstar::parse::{parse_poly, parse_sym_tensor};
use quantstar::std_star::{PhaseSpacePoly, PhaseSpacePolyJson};
use quantstar::{catalog, validate_algebra, HbarScalar, LieAlgebraSpec};

pub type Usage<T> = Result<T, String>;

pub fn usage<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// `@path` reads a file; anything else is taken literally.
pub fn text_arg(s: &str) -> Usage<String> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}")),
        None => Ok(s.to_string()),
    }
}

/// A catalog name, or a path to a JSON file `{"dim", "names", "brackets"}`.
/// The structure constants are not validated here.
pub fn algebra_unchecked(name: &str) -> Usage<LieAlgebraSpec> {
    match catalog(name) {
        Ok(spec) => Ok(spec),
        Err(e) if !std::path::Path::new(name).is_file() => Err(usage(e)),
        Err(_) => {
            let text = std::fs::read_to_string(name).map_err(|e| format!("{name}: {e}"))?;
            let json: AlgebraJson = serde_json::from_str(&text).map_err(|e| format!("{name}: {e}"))?;
            LieAlgebraSpec::from_json(&json).map_err(usage)
        }
    }
}

pub fn algebra(name: &str) -> Usage<LieAlgebraSpec> {
    validate_algebra(algebra_unchecked(name)?).map_err(usage)
}

/// `"re,im"` or `"re"`.
pub fn complex(s: &str) -> Usage<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected re,im but got {s:?}")),
    }
}

pub fn reals(s: &str, n: usize) -> Usage<Vec<f64>> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}")))
        .collect::<Usage<Vec<_>>>()?;
    if v.len() != n {
        return Err(format!("expected {n} coordinates, got {}", v.len()));
    }
    Ok(v)
}

/// A JSON group element `{"factors": [[[re, im], ...], ...]}` or real
/// coordinates `x1,...,xn` meaning `exp(Σ x_i e_i)`.
pub fn point(s: Option<&str>, n: usize) -> Usage<GroupElementExpr> {
    let Some(s) = s else { return Ok(GroupElementExpr::identity()) };
    let s = text_arg(s)?;
    if s.trim_start().starts_with('{') {
        let g: GroupElementExpr = serde_json::from_str(&s).map_err(usage)?;
        if g.factors.iter().any(|f| f.len() != n) {
            return Err(format!("group element factors must have {n} coordinates"));
        }
        return Ok(g);
    }
    Ok(GroupElementExpr::exp_real(&reals(&s, n)?))
}

pub fn catalog_representation(name: &str) -> Usage<Arc<MatrixRep>> {
    catalog_rep(name)
        .map(Arc::new)
        .map_err(|e| format!("{e}; pass --fn as JSON for algebras without a catalog representation"))
}

/// `"i,j"` is the matrix entry `⟨e_i, π(g) e_j⟩` (1-based) of the catalog
/// representation; `"1"` the constant; anything else JSON (or `@file`).
pub fn coeff_fn(s: &str, algebra_name: &str, n: usize) -> Usage<CoeffFn> {
    let s = text_arg(s)?;
    let t = s.trim();
    if t == "1" {
        return Ok(CoeffFn::one(n));
    }
    if let Some((i, j)) = t.split_once(',').filter(|_| !t.starts_with('{')) {
        let rep = catalog_representation(algebra_name)?;
        let d = rep.d();
        let idx = |x: &str| {
            x.trim()
                .parse::<usize>()
                .ok()
                .filter(|k| (1..=d).contains(k))
                .ok_or_else(|| format!("entry index {x:?} outside 1..={d}"))
        };
        let (i, j) = (idx(i)?, idx(j)?);
        let phi = MatrixElementFunction::new(rep, basis_vector(d, i - 1), basis_vector(d, j - 1)).map_err(usage)?;
        return Ok(CoeffFn::Matrix(vec![phi]));
    }
    let json: CoeffFnJson = serde_json::from_str(t).map_err(usage)?;
    json.resolve(n).map_err(usage)
}

pub fn matrix_element(s: &str, algebra_name: &str, n: usize) -> Usage<MatrixElementFunction> {
    match coeff_fn(s, algebra_name, n)? {
        CoeffFn::Matrix(mut v) if v.len() == 1 => Ok(v.remove(0)),
        _ => Err("this command needs a single matrix element".into()),
    }
}

/// JSON `{"terms": [...]}`, or `fn: expr; fn: expr; ...` where `fn` is as in
/// [`coeff_fn`] (default `1`) and `expr` a tensor in the basis names.
pub fn phase_poly(s: &str, algebra_name: &str, spec: &LieAlgebraSpec) -> Usage<PhaseSpacePoly> {
    let n = spec.dim();
    let s = text_arg(s)?;
    if s.trim_start().starts_with('{') {
        let json: PhaseSpacePolyJson = serde_json::from_str(&s).map_err(usage)?;
        return PhaseSpacePoly::from_json(n, &json).map_err(usage);
    }
    let mut out = PhaseSpacePoly::zero(n);
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (f, expr) = part.split_once(':').unwrap_or(("1", part));
        let phi = coeff_fn(f, algebra_name, n)?;
        let sym = parse_sym_tensor(spec, expr).map_err(usage)?;
        out.push(phi, sym).map_err(usage)?;
    }
    Ok(out)
}

/// A constant of the mini-language, e.g. `I*hbar` or `-3/2*hbar^2`.
pub fn hbar_scalar(s: &str) -> Usage<HbarScalar> {
    let poly = parse_poly(s, &[]).map_err(usage)?;
    Ok(poly.get(&Vec::new()).cloned().unwrap_or_else(|| HbarScalar::from_int(0)))
}
