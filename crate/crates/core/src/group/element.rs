//! Group elements written as products of exponentials.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rep::MatrixRep;
use crate::error::{Error, Result};

/// Matrix exponential (Padé approximation with scaling and squaring).
pub fn expm(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    m.clone().exp()
}

/// `exp(ξ_1) exp(ξ_2) ··· exp(ξ_k)`, each `ξ_j` given by complex coordinates
/// in the algebra basis. Real coordinates stay in `G`; complex ones land in
/// the complexification.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GroupElementExpr {
    pub factors: Vec<Vec<Complex64>>,
}

impl GroupElementExpr {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn exp(xi: Vec<Complex64>) -> Self {
        Self { factors: vec![xi] }
    }

    pub fn exp_real(xi: &[f64]) -> Self {
        Self::exp(xi.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// `self · exp(ξ)`.
    pub fn then(&self, xi: Vec<Complex64>) -> Self {
        let mut out = self.clone();
        out.factors.push(xi);
        out
    }

    /// `self · other`.
    pub fn compose(&self, other: &GroupElementExpr) -> Self {
        let mut out = self.clone();
        out.factors.extend(other.factors.iter().cloned());
        out
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(|f| f.iter().all(|x| *x == Complex64::new(0.0, 0.0)))
    }

    /// `π(g)` in the given representation.
    pub fn eval(&self, rep: &MatrixRep) -> Result<DMatrix<Complex64>> {
        let mut acc = DMatrix::identity(rep.d(), rep.d());
        for f in &self.factors {
            if f.len() != rep.algebra_dim() {
                return Err(Error::DimensionMismatch { expected: rep.algebra_dim(), found: f.len() });
            }
            if f.iter().all(|x| *x == Complex64::new(0.0, 0.0)) {
                continue;
            }
            acc *= expm(&rep.numeric_combination(f));
        }
        Ok(acc)
    }
}

/// Spectral norm.
pub fn op_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::rep::catalog_rep;

    /// Independent oracle: Taylor series after scaling by `2^-s`, then squaring.
    fn expm_taylor(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let norm = m.norm();
        let s = if norm > 0.25 { (norm / 0.25).log2().ceil() as i32 } else { 0 };
        let a = m / Complex64::new(2f64.powi(s), 0.0);
        let n = m.nrows();
        let mut term = DMatrix::<Complex64>::identity(n, n);
        let mut sum = term.clone();
        for k in 1..40 {
            term = &term * &a / Complex64::new(k as f64, 0.0);
            sum += &term;
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        sum
    }

    fn rel(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn matches_taylor_oracle() {
        let rep = catalog_rep("sl2").unwrap();
        for (x, y, z) in [(0.3, -1.2, 0.7), (4.0, 2.0, -3.0), (-6.0, 5.5, 1.0)] {
            let xi = vec![Complex64::new(x, 0.1), Complex64::new(y, 0.0), Complex64::new(z, -0.4)];
            let m = rep.numeric_combination(&xi);
            assert!(rel(&expm(&m), &expm_taylor(&m)) < 1e-12);
        }
    }

    #[test]
    fn so3_matches_eigendecomposition() {
        // X real antisymmetric, so iX is Hermitian: iX = V Λ V*, exp(X) = V e^{-iΛ} V*
        let rep = catalog_rep("so3").unwrap();
        for xi in [[1.0, 2.0, -0.5], [-3.0, 4.0, 5.0], [0.1, 0.0, 9.0]] {
            let x = rep.numeric_combination(&xi.map(|v| Complex64::new(v, 0.0)));
            let h = &x * Complex64::new(0.0, 1.0);
            let eig = h.symmetric_eigen();
            let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(0.0, -l).exp()));
            let oracle = &eig.eigenvectors * d * eig.eigenvectors.adjoint();
            assert!(rel(&expm(&x), &oracle) < 1e-12);
        }
    }

    #[test]
    fn unipotent_exponential_is_polynomial() {
        let rep = catalog_rep("abelian(1)").unwrap();
        let g = GroupElementExpr::exp_real(&[3.0]).eval(&rep).unwrap();
        assert_eq!(g[(0, 1)], Complex64::new(3.0, 0.0));
        assert_eq!(g[(0, 0)], Complex64::new(1.0, 0.0));
    }
}
