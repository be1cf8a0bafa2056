//! Exact finite-dimensional representations `ρ_i = dπ(e_i)`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{catalog, LieAlgebraSpec};
use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Rational};
use crate::sym::factorial;

pub type ExactVec = Vec<GaussianRational>;

/// Representation of an `n`-dimensional Lie algebra on `C^d` with exact
/// Gaussian-rational matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRep {
    d: usize,
    /// Nonzero entries `(row, col, value)` of each `ρ_i`.
    entries: Vec<Vec<(usize, usize, GaussianRational)>>,
    numeric: Vec<DMatrix<Complex64>>,
}

impl MatrixRep {
    /// Builds a representation from dense row-major exact matrices.
    pub fn from_dense(d: usize, rho: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let mut entries = Vec::with_capacity(rho.len());
        for m in &rho {
            if m.len() != d * d {
                return Err(Error::DimensionMismatch { expected: d * d, found: m.len() });
            }
            entries.push(
                m.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(idx, v)| (idx / d, idx % d, v.clone()))
                    .collect(),
            );
        }
        Ok(Self::from_entries(d, entries))
    }

    fn from_entries(d: usize, entries: Vec<Vec<(usize, usize, GaussianRational)>>) -> Self {
        let numeric = entries
            .iter()
            .map(|es| {
                let mut m = DMatrix::zeros(d, d);
                for (r, c, v) in es {
                    m[(*r, *c)] = v.to_complex();
                }
                m
            })
            .collect();
        Self { d, entries, numeric }
    }

    /// Number of generators `n`.
    pub fn algebra_dim(&self) -> usize {
        self.entries.len()
    }

    /// Dimension `d` of the representation space.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn numeric(&self) -> &[DMatrix<Complex64>] {
        &self.numeric
    }

    pub fn entries(&self, i: usize) -> &[(usize, usize, GaussianRational)] {
        &self.entries[i]
    }

    pub fn is_zero_generator(&self, i: usize) -> bool {
        self.entries[i].is_empty()
    }

    /// `ρ_i v`.
    pub fn apply(&self, i: usize, v: &[GaussianRational]) -> ExactVec {
        let mut out = vec![GaussianRational::zero(); self.d];
        for (r, c, x) in &self.entries[i] {
            if !v[*c].is_zero() {
                out[*r] += &(x * &v[*c]);
            }
        }
        out
    }

    /// `ρ(X) = Σ x^i ρ_i` as a complex matrix.
    pub fn numeric_combination(&self, x: &[Complex64]) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.d, self.d);
        for (xi, r) in x.iter().zip(&self.numeric) {
            if *xi != Complex64::zero() {
                m += r * *xi;
            }
        }
        m
    }

    /// Checks `[ρ_i, ρ_j] = Σ_k c_ij^k ρ_k` to relative Frobenius tolerance.
    pub fn check_homomorphism(&self, spec: &LieAlgebraSpec, tol: f64) -> Result<()> {
        if spec.dim() != self.algebra_dim() {
            return Err(Error::DimensionMismatch { expected: spec.dim(), found: self.algebra_dim() });
        }
        for i in 0..spec.dim() {
            for j in 0..spec.dim() {
                let (a, b) = (&self.numeric[i], &self.numeric[j]);
                let lhs = a * b - b * a;
                let mut rhs = DMatrix::zeros(self.d, self.d);
                for (k, c) in spec.bracket_basis(i, j) {
                    rhs += &self.numeric[*k] * Complex64::new(crate::scalar::rational_to_f64(c), 0.0);
                }
                let scale = (a.norm() * b.norm()).max(1.0);
                if (lhs - rhs).norm() > tol * scale {
                    return Err(Error::InvalidRepresentation(format!(
                        "[rho_{}, rho_{}] does not match the structure constants",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Representation of the same algebra in the basis `e'_i = Σ_j A[j][i] e_j`.
    pub fn change_basis(&self, a: &[Vec<Rational>]) -> Result<Self> {
        let n = self.algebra_dim();
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: a.len() });
        }
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc: BTreeMap<(usize, usize), GaussianRational> = BTreeMap::new();
            for (j, row) in a.iter().enumerate() {
                let s = &row[i];
                if s.is_zero() {
                    continue;
                }
                for (r, c, v) in &self.entries[j] {
                    *acc.entry((*r, *c)).or_insert_with(GaussianRational::zero) += &v.scale(s);
                }
            }
            entries.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|((r, c), v)| (r, c, v)).collect());
        }
        Ok(Self::from_entries(self.d, entries))
    }

    pub fn to_json(&self) -> MatrixRepJson {
        let rho = (0..self.algebra_dim())
            .map(|i| {
                let mut dense = vec![GaussianRational::zero(); self.d * self.d];
                for (r, c, v) in &self.entries[i] {
                    dense[r * self.d + c] = v.clone();
                }
                dense
            })
            .collect();
        MatrixRepJson { d: self.d, rho }
    }

    pub fn from_json(json: &MatrixRepJson) -> Result<Self> {
        Self::from_dense(json.d, json.rho.clone())
    }
}

/// `{"d": d, "rho": [[["re","im"], …row-major…], …]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixRepJson {
    pub d: usize,
    pub rho: Vec<Vec<GaussianRational>>,
}

fn unit(d: usize, pairs: &[(usize, usize, i64)]) -> Vec<(usize, usize, GaussianRational)> {
    debug_assert!(pairs.iter().all(|(r, c, _)| *r < d && *c < d));
    pairs.iter().map(|&(r, c, v)| (r, c, GaussianRational::from_int(v))).collect()
}

/// A faithful representation of each catalog algebra.
///
/// * `heisenberg`: `3×3`, `q = E12`, `p = E23`, `c = E13`.
/// * `sl2`: the fundamental representation.
/// * `so3`: `(L_i)_{jk} = -ε_ijk`.
/// * `axb`: `a = E11`, `b = E12`.
/// * `abelian(n)`: `(n+1)×(n+1)`, `ρ_j = E_{0,j}`.
pub fn catalog_rep(name: &str) -> Result<MatrixRep> {
    let spec = catalog(name)?;
    let (d, entries) = match name.trim() {
        "heisenberg" => (3, vec![unit(3, &[(0, 1, 1)]), unit(3, &[(1, 2, 1)]), unit(3, &[(0, 2, 1)])]),
        "sl2" => (2, vec![unit(2, &[(0, 0, 1), (1, 1, -1)]), unit(2, &[(0, 1, 1)]), unit(2, &[(1, 0, 1)])]),
        "so3" => (
            3,
            vec![
                unit(3, &[(1, 2, -1), (2, 1, 1)]),
                unit(3, &[(0, 2, 1), (2, 0, -1)]),
                unit(3, &[(0, 1, -1), (1, 0, 1)]),
            ],
        ),
        "axb" => (2, vec![unit(2, &[(0, 0, 1)]), unit(2, &[(0, 1, 1)])]),
        _ => {
            let n = spec.dim();
            (n + 1, (1..=n).map(|j| unit(n + 1, &[(0, j, 1)])).collect())
        }
    };
    let rep = MatrixRep::from_entries(d, entries);
    rep.check_homomorphism(&spec, 1e-12)?;
    Ok(rep)
}

/// The realification `g_C` of a complex algebra spanned by the given real
/// basis: generators `e_1..e_n, i e_1..i e_n`, with
/// `[i X, Y] = i [X, Y]` and `[i X, i Y] = -[X, Y]`.
pub fn realify_algebra(spec: &LieAlgebraSpec) -> Result<LieAlgebraSpec> {
    let n = spec.dim();
    let mut names: Vec<String> = spec.names().to_vec();
    names.extend(spec.names().iter().map(|s| format!("i{s}")));
    let mut c = vec![vec![vec![Rational::zero(); 2 * n]; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            for (k, v) in spec.bracket_basis(i, j) {
                c[i][j][*k] = v.clone();
                c[i + n][j][k + n] = v.clone();
                c[i][j + n][k + n] = v.clone();
                c[i + n][j + n][*k] = -v.clone();
            }
        }
    }
    crate::algebra::validate_algebra(LieAlgebraSpec::from_dense(names, c)?)
}

/// The representation of the realification with `ρ(i e_j) = i ρ(e_j)`.
pub fn realify_rep(rep: &MatrixRep) -> MatrixRep {
    let mut entries = rep.entries.clone();
    let i = GaussianRational::i();
    entries.extend(rep.entries.iter().map(|es| es.iter().map(|(r, c, v)| (*r, *c, v * &i)).collect()));
    MatrixRep::from_entries(rep.d, entries)
}

/// The one-dimensional trivial representation of an `n`-dimensional algebra.
pub fn trivial_rep(n: usize) -> MatrixRep {
    MatrixRep::from_entries(1, vec![Vec::new(); n])
}

/// Nilpotent Jordan block of size `m + 1` for generator `i` of `abelian(n)`:
/// `ρ_i e_k = e_{k-1}`, all other generators zero. With `v = e_m`,
/// `exp(t ρ_i) v = Σ_j t^j/j! e_{m-j}`.
pub fn jordan_rep(n: usize, i: usize, m: usize) -> MatrixRep {
    let mut entries = vec![Vec::new(); n];
    entries[i] = (1..=m).map(|k| (k - 1, k, GaussianRational::one())).collect();
    MatrixRep::from_entries(m + 1, entries)
}

/// Left vector realizing `t ↦ Σ c_j t^j` against `v = e_m` in [`jordan_rep`].
pub fn jordan_left_vector(coeffs: &[GaussianRational], m: usize) -> ExactVec {
    let mut w = vec![GaussianRational::zero(); m + 1];
    for (j, c) in coeffs.iter().enumerate().take(m + 1) {
        w[m - j] = c.scale(&factorial(j));
    }
    w
}

/// Exact `Σ_j a_j b_j` (bilinear, no conjugation).
pub fn dot(a: &[GaussianRational], b: &[GaussianRational]) -> GaussianRational {
    let mut s = GaussianRational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += &(x * y);
        }
    }
    s
}

pub fn to_numeric(v: &[GaussianRational]) -> Vec<Complex64> {
    v.iter().map(GaussianRational::to_complex).collect()
}

pub fn basis_vector(d: usize, k: usize) -> ExactVec {
    let mut v = vec![GaussianRational::zero(); d];
    v[k] = GaussianRational::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, NONABELIAN_CATALOG};
    use crate::scalar::int;

    #[test]
    fn catalog_reps_are_homomorphisms() {
        for name in NONABELIAN_CATALOG.iter().copied().chain(["abelian(3)"]) {
            let rep = catalog_rep(name).unwrap();
            rep.check_homomorphism(&catalog(name).unwrap(), 1e-12).unwrap();
        }
    }

    #[test]
    fn broken_rep_is_rejected() {
        let spec = catalog("sl2").unwrap();
        let mut rho = catalog_rep("sl2").unwrap().to_json();
        rho.rho[0][3] = GaussianRational::from_int(1);
        let bad = MatrixRep::from_json(&rho).unwrap();
        assert!(matches!(bad.check_homomorphism(&spec, 1e-12), Err(Error::InvalidRepresentation(_))));
    }

    #[test]
    fn realified_sl2_is_a_representation() {
        let spec = catalog("sl2").unwrap();
        let real = realify_algebra(&spec).unwrap();
        assert_eq!(real.dim(), 6);
        realify_rep(&catalog_rep("sl2").unwrap()).check_homomorphism(&real, 1e-12).unwrap();
    }

    #[test]
    fn json_roundtrip() {
        let rep = catalog_rep("so3").unwrap();
        let s = serde_json::to_string(&rep.to_json()).unwrap();
        let back = MatrixRep::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn change_basis_rescales() {
        let rep = catalog_rep("sl2").unwrap();
        let a = vec![vec![int(2), int(0), int(0)], vec![int(0), int(1), int(1)], vec![int(0), int(0), int(1)]];
        let b = rep.change_basis(&a).unwrap();
        let e = basis_vector(2, 0);
        assert_eq!(b.apply(0, &e), rep.apply(0, &e).iter().map(|x| x.scale(&int(2))).collect::<Vec<_>>());
        // e'_2 = e + ... only picks ρ_e since A[1][1] = 1, A[2][1] = 0
        assert_eq!(b.apply(1, &basis_vector(2, 1)), rep.apply(1, &basis_vector(2, 1)));
        // e'_3 = e + f
        let sum: Vec<_> = rep.apply(1, &e).iter().zip(rep.apply(2, &e)).map(|(x, y)| x + &y).collect();
        assert_eq!(b.apply(2, &e), sum);
    }

    #[test]
    fn jordan_realizes_polynomial() {
        let coeffs = vec![GaussianRational::from_int(1), GaussianRational::from_int(0), GaussianRational::from_int(3)];
        let w = jordan_left_vector(&coeffs, 2);
        assert_eq!(w[0], GaussianRational::from_int(6));
        let rep = jordan_rep(1, 0, 2);
        let v = basis_vector(3, 2);
        assert_eq!(dot(&w, &rep.apply(0, &rep.apply(0, &v))), GaussianRational::from_int(6));
    }
}
