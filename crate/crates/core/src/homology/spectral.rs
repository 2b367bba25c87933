use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{int, Scalar};

/// Coefficients from the constant term upwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial(pub Vec<Scalar>);

impl Polynomial {
    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
        .trim()
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        let mut r = self.0.clone();
        let dl = d.0.last().expect("division by zero polynomial").clone();
        let mut q = vec![Scalar::zero(); self.0.len().saturating_sub(d.0.len()) + 1];
        while r.len() >= d.0.len() && !r.is_empty() {
            let shift = r.len() - d.0.len();
            let c = r.last().unwrap() / &dl;
            for (k, dc) in d.0.iter().enumerate() {
                r[shift + k] -= &c * dc;
            }
            q[shift] = c;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Polynomial(q).trim(), Polynomial(r).trim())
    }

    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        let lead = a.0.last().cloned().unwrap_or_else(Scalar::one);
        Polynomial(a.0.iter().map(|c| c / &lead).collect())
    }

    /// Same roots, each with multiplicity one.
    pub fn squarefree(&self) -> Polynomial {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    fn eval_f64(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN))
    }

    /// `|p(z)|` evaluated exactly at the binary rational `z`.
    fn abs_exact(&self, z: Complex64) -> f64 {
        let re = Scalar::from_float(z.re).unwrap_or_else(Scalar::zero);
        let im = Scalar::from_float(z.im).unwrap_or_else(Scalar::zero);
        let (mut ar, mut ai) = (Scalar::zero(), Scalar::zero());
        for c in self.0.iter().rev() {
            let nr = &ar * &re - &ai * &im + c;
            let ni = &ar * &im + &ai * &re;
            ar = nr;
            ai = ni;
        }
        let sq = &ar * &ar + &ai * &ai;
        sq.to_f64().unwrap_or(f64::INFINITY).sqrt()
    }
}

/// `det(λI - A)` by the Faddeev-LeVerrier recursion in exact arithmetic.
pub fn characteristic_polynomial(a: &Matrix) -> Polynomial {
    let n = a.rows;
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&m);
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        m = next;
        let am = a.mul(&m);
        let trace: Scalar = (0..n).map(|i| am[(i, i)].clone()).sum();
        coeffs[n - k] = -trace / int(k as i64);
    }
    Polynomial(coeffs).trim()
}

/// Largest root modulus with a rigorous radius for the enclosure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralRadius {
    pub value: f64,
    pub error: f64,
}

/// All complex roots of a squarefree polynomial by Aberth iteration, each
/// with an error radius `deg·|p(z)/p'(z)|` (a disk that contains a root).
fn roots(p: &Polynomial) -> Result<Vec<(Complex64, f64)>> {
    let n = p.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = p.0[n].to_f64().unwrap_or(1.0);
    let monic: Vec<f64> = p.0.iter().map(|c| c.to_f64().unwrap_or(f64::NAN) / lead).collect();
    let cauchy = 1.0 + monic[..n].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let dp = p.derivative();
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(cauchy * 0.5, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    let mut converged = false;
    for _ in 0..2000 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let ratio = p.eval_f64(z[i]) / dp.eval_f64(z[i]);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm());
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged && z.iter().any(|w| !w.is_finite()) {
        return Err(Error::Numerical("root iteration diverged".into()));
    }
    Ok(z
        .into_iter()
        .map(|w| {
            let num = p.abs_exact(w);
            let den = dp.eval_f64(w).norm();
            let err = if num == 0.0 { 0.0 } else { n as f64 * num / den * (1.0 + 1e-12) };
            (w, err)
        })
        .collect())
}

pub fn spectral_radius(entries: &[Vec<i64>]) -> Result<SpectralRadius> {
    let n = entries.len();
    let m = Matrix::from_fn(n, n, |r, c| int(entries[r][c]));
    let p = characteristic_polynomial(&m).squarefree();
    let rs = roots(&p)?;
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    for (z, e) in &rs {
        lo = lo.max(z.norm() - e);
        hi = hi.max(z.norm() + e);
    }
    if !(hi - lo).is_finite() {
        return Err(Error::Numerical("no enclosure for the spectral radius".into()));
    }
    Ok(SpectralRadius {
        value: (lo.max(0.0) + hi) / 2.0,
        error: (hi - lo.max(0.0)) / 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_of_small_matrix() {
        let m = Matrix::from_fn(2, 2, |r, c| int([[2, 1], [1, 2]][r][c]));
        let p = characteristic_polynomial(&m);
        assert_eq!(p.0, vec![int(3), int(-4), int(1)]);
    }

    #[test]
    fn squarefree_part() {
        // (x-1)^2 (x+2)
        let p = Polynomial(vec![int(2), int(-3), int(0), int(1)]);
        assert_eq!(p.squarefree().0, vec![int(-2), int(1), int(1)]);
    }

    #[test]
    fn golden_ratio_square() {
        let r = spectral_radius(&[vec![3, -1], vec![1, 0]]).unwrap();
        let exact = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((r.value - exact).abs() <= r.error + 1e-12);
        assert!(r.error < 1e-9);
    }

    #[test]
    fn rotation_has_radius_one() {
        let r = spectral_radius(&[vec![0, -1], vec![1, 0]]).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }
}
