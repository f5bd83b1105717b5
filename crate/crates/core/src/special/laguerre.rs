//! Gauss-Laguerre quadrature: nodes are the roots of the Laguerre polynomial
//! L_N, weights are x_i / ((N+1)^2 L_{N+1}(x_i)^2).
//!
//! Nodes and weights come from the Golub-Welsch eigenproblem of the Jacobi
//! matrix of the Laguerre recurrence (diagonal 2k+1, off-diagonal k): the
//! eigenvalues are the roots of L_N and the squared first eigenvector
//! components are exactly the x/((N+1) L_{N+1}(x))^2 weights. A Newton
//! iteration on the three-term recurrence reaches the same points but its
//! evaluation noise caps node accuracy near 1e-12 for orders in the
//! hundreds, which leaks into the weight-sum invariant; the eigensolve
//! stays at machine precision for every supported order.

use crate::error::{Error, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // unused when std f64 methods shadow the trait
use num_traits::Float;

/// Largest supported rule order. Outage evaluation needs orders well past
/// the few hundred a first guess would allow: fractional powers of the
/// integration variable slow the rule's convergence to ~N^-3, so the order
/// ladder must climb this far before successive values settle to 1e-8.
pub const MAX_ORDER: usize = 6400;

/// Nodes and weights of a quadrature rule on [0, inf) with weight e^-x.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Quadrature of e^-x * f(x) over [0, inf).
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Build the N-point Gauss-Laguerre rule, 1 <= N <= [`MAX_ORDER`].
pub fn gauss_laguerre(n: usize) -> Result<QuadratureRule> {
    if n < 1 || n > MAX_ORDER {
        return Err(Error::Domain {
            param: "N",
            value: n as f64,
        });
    }
    // Jacobi matrix of the Laguerre recurrence
    let mut diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + 1.0).collect();
    let mut off: Vec<f64> = (0..n).map(|k| k as f64).collect(); // off[0] unused
    let mut first_row = vec![0.0f64; n];
    first_row[0] = 1.0;
    tridiag_ql(&mut diag, &mut off, &mut first_row)?;
    let mut pairs: Vec<(f64, f64)> = diag
        .iter()
        .zip(&first_row)
        .map(|(&x, &z)| (x, z * z)) // total mass mu_0 = 1
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for i in 0..n {
        if !(pairs[i].0 > if i == 0 { 0.0 } else { pairs[i - 1].0 }) {
            return Err(Error::NonConvergence {
                what: "Laguerre node ordering",
                detail: format!("N={n}: node {i} out of order"),
            });
        }
    }
    Ok(QuadratureRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

/// QL with implicit shifts for a symmetric tridiagonal matrix, carrying one
/// row vector through the rotations (enough for Golub-Welsch weights).
/// `diag` becomes the eigenvalues; `off[1..]` are the sub-diagonal entries.
fn tridiag_ql(diag: &mut [f64], off: &mut [f64], row: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n == 1 {
        return Ok(());
    }
    off.rotate_left(1); // off[i] = coupling of i and i+1
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            // find a negligible off-diagonal to split at
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::NonConvergence {
                    what: "tridiagonal QL",
                    detail: format!("row {l} after {iter} sweeps"),
                });
            }
            // Wilkinson shift
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = (g * g + 1.0).sqrt();
            let sign_r = if g >= 0.0 { r } else { -r };
            g = diag[m] - diag[l] + off[l] / (g + sign_r);
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            for i in (l..m).rev() {
                let mut f = s * off[i];
                let b = c * off[i];
                r = (f * f + g * g).sqrt();
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                // rotate the carried row
                f = row[i + 1];
                row[i + 1] = s * row[i] + c * f;
                row[i] = c * row[i] - s * f;
            }
            if r == 0.0 && m > l + 1 {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn one_point_rule() {
        let r = gauss_laguerre(1).unwrap();
        assert_relative_eq!(r.nodes()[0], 1.0, max_relative = 1e-14);
        assert_relative_eq!(r.weights()[0], 1.0, max_relative = 1e-14);
    }

    #[test]
    fn two_point_rule() {
        // roots of L_2 = (x^2 - 4x + 2)/2 are 2 -/+ sqrt(2)
        let r = gauss_laguerre(2).unwrap();
        let s2 = 2.0f64.sqrt();
        assert_relative_eq!(r.nodes()[0], 2.0 - s2, max_relative = 1e-12);
        assert_relative_eq!(r.nodes()[1], 2.0 + s2, max_relative = 1e-12);
        assert_relative_eq!(r.weights()[0], 0.853553390593274, max_relative = 1e-10);
        assert_relative_eq!(r.weights()[1], 0.146446609406726, max_relative = 1e-10);
    }

    #[test]
    fn weights_sum_to_one() {
        for n in [1, 2, 5, 10, 30, 64, 128, 200, 400, 800] {
            let r = gauss_laguerre(n).unwrap();
            let s: f64 = r.weights().iter().sum();
            assert_relative_eq!(s, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn polynomial_exactness() {
        // N-point rule integrates x^j against e^-x exactly for j <= 2N-1
        for n in [2usize, 5, 10, 30] {
            let r = gauss_laguerre(n).unwrap();
            let mut factorial = 1.0f64;
            for j in 0..=(2 * n - 1) {
                if j > 0 {
                    factorial *= j as f64;
                }
                let got = r.integrate(|x| x.powi(j as i32));
                assert_relative_eq!(got, factorial, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn nodes_positive_increasing() {
        for n in [3, 17, 100, 800] {
            let r = gauss_laguerre(n).unwrap();
            assert!(r.nodes()[0] > 0.0);
            for i in 1..n {
                assert!(r.nodes()[i] > r.nodes()[i - 1]);
            }
            assert!(r.weights().iter().all(|&w| w >= 0.0));
        }
    }

    #[test]
    fn order_bounds() {
        assert!(gauss_laguerre(0).is_err());
        assert!(gauss_laguerre(MAX_ORDER + 1).is_err());
    }
}
