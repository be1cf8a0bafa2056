//! Finite-dimensional Lie algebras given by rational structure constants in a
//! fixed basis, plus a small catalog of standard examples.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, parse_rational, GaussianRational, Rational};

/// `(i, j, [(k, c_ij^k), ...])` with 0-based indices.
pub type SparseBracket<'a> = (usize, usize, &'a [(usize, Rational)]);

/// Structure constants `[e_i, e_j] = sum_k c[i][j][k] e_k` (0-based storage).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraSpec {
    names: Vec<String>,
    c: Vec<Rational>,
    /// Nonzero entries of `[e_i, e_j]`, indexed by `i * dim + j`.
    sparse: Vec<Vec<(usize, Rational)>>,
}

impl LieAlgebraSpec {
    /// Builds a spec from a dense `n × n × n` array without checking the
    /// Lie algebra axioms; see [`validate_algebra`].
    pub fn from_dense(names: Vec<String>, c: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if c.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: c.len() });
        }
        let mut flat = Vec::with_capacity(n * n * n);
        for row in &c {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            for v in row {
                if v.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: v.len() });
                }
                flat.extend(v.iter().cloned());
            }
        }
        Ok(Self::from_flat(names, flat))
    }

    fn from_flat(names: Vec<String>, c: Vec<Rational>) -> Self {
        let n = names.len();
        let sparse = (0..n * n)
            .map(|ij| {
                (0..n)
                    .filter_map(|k| {
                        let v = &c[ij * n + k];
                        (!v.is_zero()).then(|| (k, v.clone()))
                    })
                    .collect()
            })
            .collect();
        Self { names, c, sparse }
    }

    /// Builds a spec from the nonzero brackets with `i < j` (0-based),
    /// completing antisymmetrically.
    pub fn from_brackets(names: &[&str], brackets: &[SparseBracket]) -> Self {
        let n = names.len();
        let mut c = vec![Rational::zero(); n * n * n];
        for (i, j, coeffs) in brackets {
            for (k, v) in coeffs.iter() {
                c[(i * n + j) * n + k] = v.clone();
                c[(j * n + i) * n + k] = -v.clone();
            }
        }
        Self::from_flat(names.iter().map(|s| s.to_string()).collect(), c)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Structure constant `c[i][j][k]`, 0-based.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Rational {
        let n = self.dim();
        &self.c[(i * n + j) * n + k]
    }

    /// Nonzero terms of `[e_i, e_j]`, 0-based.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.sparse[i * self.dim() + j]
    }

    pub fn is_abelian(&self) -> bool {
        self.sparse.iter().all(Vec::is_empty)
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        let mut coords = vec![GaussianRational::zero(); self.dim()];
        coords[i] = GaussianRational::from_int(1);
        AlgebraElement { coords }
    }

    pub fn to_json(&self) -> AlgebraJson {
        let n = self.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let coeffs: BTreeMap<String, String> =
                    self.bracket_basis(i, j).iter().map(|(k, v)| ((k + 1).to_string(), format_rational(v))).collect();
                if !coeffs.is_empty() {
                    brackets.push(BracketJson { i: i + 1, j: j + 1, coeffs });
                }
            }
        }
        AlgebraJson { dim: n, names: self.names.clone(), brackets }
    }

    /// Reads the JSON schema. Listed pairs may come in either order; a pair
    /// `(j, i)` that is not listed explicitly is completed antisymmetrically.
    pub fn from_json(json: &AlgebraJson) -> Result<Self> {
        let n = json.dim;
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if json.names.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: json.names.len() });
        }
        let mut c = vec![Rational::zero(); n * n * n];
        let mut listed = vec![false; n * n];
        for b in &json.brackets {
            if b.i == 0 || b.j == 0 || b.i > n || b.j > n {
                return Err(Error::Parse(format!("bracket index ({}, {}) out of range 1..={n}", b.i, b.j)));
            }
            listed[(b.i - 1) * n + (b.j - 1)] = true;
        }
        for b in &json.brackets {
            let (i, j) = (b.i - 1, b.j - 1);
            for (k, v) in &b.coeffs {
                let k: usize = k.trim().parse().map_err(|_| Error::Parse(format!("bad index {k:?}")))?;
                if k == 0 || k > n {
                    return Err(Error::Parse(format!("coefficient index {k} out of range 1..={n}")));
                }
                let v = parse_rational(v)?;
                c[(i * n + j) * n + k - 1] = v.clone();
                if !listed[j * n + i] {
                    c[(j * n + i) * n + k - 1] = -v;
                }
            }
        }
        Ok(Self::from_flat(json.names.clone(), c))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraJson {
    pub dim: usize,
    pub names: Vec<String>,
    pub brackets: Vec<BracketJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<String, String>,
}

/// Checks antisymmetry and the Jacobi identity, reporting the first failing
/// index tuple in lexicographic order.
pub fn validate_algebra(spec: LieAlgebraSpec) -> Result<LieAlgebraSpec> {
    let n = spec.dim();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if spec.c(i, j, k) != &-spec.c(j, i, k).clone() {
                    return Err(Error::AntisymmetryViolation(i + 1, j + 1, k + 1));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = Rational::zero();
                    for m in 0..n {
                        s += spec.c(i, j, m) * spec.c(m, k, l)
                            + spec.c(j, k, m) * spec.c(m, i, l)
                            + spec.c(k, i, m) * spec.c(m, j, l);
                    }
                    if !s.is_zero() {
                        return Err(Error::JacobiViolation(i + 1, j + 1, k + 1, l + 1));
                    }
                }
            }
        }
    }
    Ok(spec)
}

/// Element of the complexified Lie algebra in the fixed basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    pub coords: Vec<GaussianRational>,
}

impl AlgebraElement {
    pub fn new(coords: Vec<GaussianRational>) -> Self {
        Self { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Self { coords: vec![GaussianRational::zero(); dim] }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// Lie bracket `[x, y]` by contraction with the structure constants.
pub fn bracket(spec: &LieAlgebraSpec, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    let n = spec.dim();
    for v in [x, y] {
        if v.coords.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.coords.len() });
        }
    }
    let mut out = AlgebraElement::zero(n);
    for (i, xi) in x.coords.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        for (j, yj) in y.coords.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            let xy = xi * yj;
            for (k, ck) in spec.bracket_basis(i, j) {
                out.coords[*k] += &xy.scale(ck);
            }
        }
    }
    Ok(out)
}

/// Names accepted by [`catalog`].
pub const CATALOG_NAMES: [&str; 5] = ["abelian(n)", "heisenberg", "sl2", "so3", "axb"];

/// Built-in algebras:
///
/// * `abelian(n)`: basis `e1..en`, all brackets zero.
/// * `heisenberg`: basis `(q, p, c)`, `[q, p] = c`.
/// * `sl2`: basis `(h, e, f)`, `[h, e] = 2e`, `[h, f] = -2f`, `[e, f] = h`.
/// * `so3`: basis `(x, y, z)`, `[x, y] = z`, `[y, z] = x`, `[z, x] = y`.
/// * `axb`: basis `(a, b)`, `[a, b] = b` (affine group of the line).
pub fn catalog(name: &str) -> Result<LieAlgebraSpec> {
    let name = name.trim();
    let spec = match name {
        "heisenberg" => LieAlgebraSpec::from_brackets(&["q", "p", "c"], &[(0, 1, &[(2, int(1))])]),
        "sl2" => LieAlgebraSpec::from_brackets(
            &["h", "e", "f"],
            &[(0, 1, &[(1, int(2))]), (0, 2, &[(2, int(-2))]), (1, 2, &[(0, int(1))])],
        ),
        "so3" => LieAlgebraSpec::from_brackets(
            &["x", "y", "z"],
            &[(0, 1, &[(2, int(1))]), (1, 2, &[(0, int(1))]), (0, 2, &[(1, int(-1))])],
        ),
        "axb" => LieAlgebraSpec::from_brackets(&["a", "b"], &[(0, 1, &[(1, int(1))])]),
        _ => {
            let n = name
                .strip_prefix("abelian(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|d| d.trim().parse::<usize>().ok())
                .filter(|&d| d >= 1)
                .ok_or_else(|| Error::UnknownAlgebra(name.to_string()))?;
            let names: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            LieAlgebraSpec::from_brackets(&refs, &[])
        }
    };
    validate_algebra(spec)
}

/// [`catalog`] wrapped for sharing.
pub fn catalog_arc(name: &str) -> Result<Arc<LieAlgebraSpec>> {
    catalog(name).map(Arc::new)
}

/// Names of the non-abelian catalog entries used by the batch checks.
pub const NONABELIAN_CATALOG: [&str; 4] = ["heisenberg", "sl2", "so3", "axb"];
