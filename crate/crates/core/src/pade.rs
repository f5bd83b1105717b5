//! Sub-diagonal Pade approximants to the MGF of the end-to-end SNR.
//!
//! The MGF is taken as `M(s) = E[e^(-s gamma_end)]`, so its Maclaurin series
//! is the alternating moment series `sum_n mu_n (-s)^n / n!`. With this
//! convention every downstream formula is direct: differential BPSK error is
//! `0.5 M(1)`, coherent binary error integrates `M(psi / sin^2 theta)`, and
//! the outage probability is the inverse Laplace transform of `M(s)/s`,
//! which for a strictly proper rational approximant with simple poles p_i
//! and residues lambda_i is `1 + sum_i (lambda_i / p_i) e^(p_i t)`. Poles of
//! a valid approximant sit in the left half-plane.
//!
//! The [A/A+1] approximant is built from the first 2A+1 moments. The linear
//! (Hankel) system is solved with full pivoting in a scaled variable
//! `u = s * mu_1` to keep the coefficients O(1); near-singular systems are
//! deflated when the defining equations still hold (a rational function of
//! lower order reproduced exactly, e.g. exponential moments) and rejected
//! otherwise with the pivot-growth estimate attached.

use crate::error::{Error, Result};
use crate::relay::{self, RelaySystem};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // unused when std f64 methods shadow the trait
use num_traits::Float;

/// Default numerator order of the approximant; B = A + 1.
pub const DEFAULT_ORDER: usize = 7;

/// Hard cap on A. Above this the Hankel conditioning routinely exceeds the
/// refusal threshold and results would be noise.
pub const MAX_ORDER: usize = 10;

/// Pivot-growth threshold beyond which a full-rank but unresolvable system
/// is refused.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Poles closer than this (in the scaled variable) count as repeated.
pub const POLE_CLUSTER_TOL: f64 = 1e-7;

/// A right-half-plane pole whose partial-fraction weight |lambda/p| stays
/// below this fraction of the total is a spurious defect pole and is
/// dropped (with the kept residues renormalized so the pole sum still
/// represents a unit-mass MGF). A true MGF is completely monotone and has
/// no right-half-plane poles at all, so such poles carry no information --
/// they are the classic pole-zero doublets of moment-based Pade builds --
/// but their exploding exponentials would poison the residue-inversion
/// outage formula if kept. Observed defect weights reach ~9e-4 in exact
/// arithmetic on dual-hop moment sequences (worst ~1e-2 on heavy-tailed
/// parameter corners); substantial weight beyond this
/// threshold means the moment data itself is inconsistent, which is an
/// error.
pub const DOUBLET_DROP_TOL: f64 = 2e-2;

/// Where the raw moments came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentSource {
    ClosedForm,
    Oracle,
    MonteCarlo,
}

/// Ordered raw moments `E[gamma_end^n]`, n = 1..len.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    values: Vec<f64>,
    source: MomentSource,
}

impl MomentSequence {
    pub fn new(values: Vec<f64>, source: MomentSource) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain { param: "moments.len", value: 0.0 });
        }
        for &v in &values {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain { param: "moment", value: v });
            }
        }
        if values.len() >= 2 && values[1] < values[0] * values[0] * (1.0 - 1e-9) {
            return Err(Error::Domain {
                param: "moments (Jensen: mu_2 >= mu_1^2)",
                value: values[1],
            });
        }
        Ok(Self { values, source })
    }

    /// First `count` moments from the quadrature oracle (the default feed
    /// for the metrics pipeline; immune to any closed-form issue).
    pub fn from_oracle(sys: &RelaySystem, count: usize) -> Result<Self> {
        let values = (1..=count)
            .map(|n| relay::end_to_end_moment_oracle(sys, n as f64))
            .collect::<Result<Vec<f64>>>()?;
        Self::new(values, MomentSource::Oracle)
    }

    /// First `count` moments from the Meijer-G closed form.
    pub fn from_closed_form(sys: &RelaySystem, count: usize) -> Result<Self> {
        let values = (1..=count)
            .map(|n| relay::end_to_end_moment(sys, n as u32))
            .collect::<Result<Vec<f64>>>()?;
        Self::new(values, MomentSource::ClosedForm)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source(&self) -> MomentSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Scaled alternating series coefficients g_j = (-1)^j mu_j / (sigma^j j!)
    /// for j = 0..=order, with g_0 = 1 and sigma the scale.
    fn series_coefficients(&self, order: usize, sigma: f64) -> Vec<f64> {
        let mut g = Vec::with_capacity(order + 1);
        g.push(1.0);
        let mut prev_mu = 1.0;
        let mut coeff = 1.0;
        for j in 1..=order {
            let mu = self.values[j - 1];
            coeff *= -mu / (prev_mu * sigma * j as f64);
            prev_mu = mu;
            g.push(coeff);
        }
        g
    }

    /// Geometric scale max_n (mu_n / n!)^(1/n) of the series: roughly the
    /// reciprocal of the nearest MGF pole. Scaling s by it keeps every
    /// series coefficient O(1) or below, which the Hankel solve needs; the
    /// first moment alone underestimates the scale badly for systems whose
    /// end-to-end SNR is usually small but heavy right-tailed.
    fn scale(&self, order: usize) -> f64 {
        let mut ln_fact = 0.0;
        let mut best = f64::MIN_POSITIVE;
        for j in 1..=order.min(self.values.len()) {
            ln_fact += (j as f64).ln();
            let s = ((self.values[j - 1].ln() - ln_fact) / j as f64).exp();
            best = best.max(s);
        }
        best
    }
}

/// Rational approximant of the MGF with its pole-residue form.
#[derive(Debug, Clone, PartialEq)]
pub struct PadeMGF {
    order_a: usize,
    order_b: usize,
    scale: f64,
    num_u: Vec<f64>,
    den_u: Vec<f64>,
    poles: Vec<Complex64>,
    residues: Vec<Complex64>,
    spurious_weight: f64,
}

impl PadeMGF {
    /// Requested orders (A, B) with B = A + 1.
    pub fn orders(&self) -> (usize, usize) {
        (self.order_a, self.order_b)
    }

    /// Poles of the approximant in the s-domain, all in the left half-plane.
    /// Spurious pole-zero doublets (see [`DOUBLET_DROP_TOL`]) are excluded.
    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    /// Residues paired with [`poles`](Self::poles).
    pub fn residues(&self) -> &[Complex64] {
        &self.residues
    }

    /// Total relative partial-fraction weight of dropped spurious doublets
    /// (0 for a clean build). The pole-residue representation reproduces
    /// the rational function up to roughly this relative level.
    pub fn spurious_weight(&self) -> f64 {
        self.spurious_weight
    }

    /// Numerator coefficients c_0..c_A of the s-domain rational function.
    /// Trailing coefficients may have been deflated to zero.
    pub fn numerator(&self) -> Vec<f64> {
        let mut c = Vec::with_capacity(self.order_a + 1);
        let mut pw = 1.0;
        for i in 0..=self.order_a {
            c.push(self.num_u.get(i).copied().unwrap_or(0.0) * pw);
            pw *= self.scale;
        }
        c
    }

    /// Denominator coefficients b_0 = 1, b_1..b_B of the s-domain rational
    /// function.
    pub fn denominator(&self) -> Vec<f64> {
        let mut b = Vec::with_capacity(self.order_b + 1);
        let mut pw = 1.0;
        for i in 0..=self.order_b {
            b.push(self.den_u.get(i).copied().unwrap_or(0.0) * pw);
            pw *= self.scale;
        }
        b
    }

    /// Maclaurin coefficients of the approximant in the scaled variable,
    /// compared against the input moments: returns the largest relative
    /// mismatch over orders 0..=A+B. Diagnostic for the series-match
    /// invariant.
    pub fn taylor_residual(&self, moments: &MomentSequence) -> f64 {
        let order = self.order_a + self.order_b;
        let g = moments.series_coefficients(order, self.scale);
        let mine = self.series_u(order);
        let scale = g.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        let mut worst = 0.0f64;
        for j in 0..=order {
            worst = worst.max((mine[j] - g[j]).abs() / scale);
        }
        worst
    }

    // series of num/den in u through `order`
    fn series_u(&self, order: usize) -> Vec<f64> {
        let mut out = vec![0.0; order + 1];
        for j in 0..=order {
            let mut acc = self.num_u.get(j).copied().unwrap_or(0.0);
            for i in 1..=j {
                acc -= self.den_u.get(i).copied().unwrap_or(0.0) * out[j - i];
            }
            out[j] = acc; // den_u[0] = 1
        }
        out
    }

    /// Rational-function value `M(s)`; `s` must stay 1e-9 away from poles.
    pub fn eval(&self, s: f64) -> Result<f64> {
        let su = Complex64::new(s, 0.0);
        for p in &self.poles {
            if (su - p).norm() < 1e-9 {
                return Err(Error::NearPole { s });
            }
        }
        let u = s * self.scale;
        Ok(horner(&self.num_u, u) / horner(&self.den_u, u))
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn horner_c(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Build the [A/A+1] approximant from the first 2A+1 moments.
pub fn build_pade(moments: &MomentSequence, a: usize) -> Result<PadeMGF> {
    let b = a + 1;
    if a > MAX_ORDER {
        return Err(Error::Domain { param: "A", value: a as f64 });
    }
    let need = a + b;
    if moments.len() < need {
        return Err(Error::Domain {
            param: "moments.len",
            value: moments.len() as f64,
        });
    }
    let sigma = moments.scale(need);
    let g = moments.series_coefficients(need, sigma);

    // Hankel system for q_1..q_B: sum_i q_i g_{j-i} = -g_j, j = A+1..A+B
    let mut mat = vec![vec![0.0f64; b]; b];
    let mut rhs = vec![0.0f64; b];
    for (r, row) in mat.iter_mut().enumerate() {
        let j = a + 1 + r;
        for (cidx, cell) in row.iter_mut().enumerate() {
            let idx = j as i64 - (cidx as i64 + 1);
            *cell = if idx >= 0 { g[idx as usize] } else { 0.0 };
        }
        rhs[r] = -g[j];
    }
    let g_scale = g.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let (q_tail, condition) = solve_full_pivot(mat, rhs, g_scale);

    let mut den_u = Vec::with_capacity(b + 1);
    den_u.push(1.0);
    den_u.extend_from_slice(&q_tail);
    let mut num_u = Vec::with_capacity(a + 1);
    for j in 0..=a {
        let mut p = 0.0;
        for i in 0..=j.min(b) {
            p += den_u[i] * g[j - i];
        }
        num_u.push(p);
    }

    // residual of the defining equations; the solve itself never refuses,
    // because a Hankel system with huge pivot growth can still be solved to
    // a tiny residual (structured systems routinely are) and that residual
    // is what actually certifies the approximant
    let mut residual = 0.0f64;
    for j in (a + 1)..=(a + b) {
        let mut r = g[j];
        for i in 1..=b.min(j) {
            r += den_u[i] * g[j - i];
        }
        residual = residual.max(r.abs());
    }
    if residual > 1e-10 * g_scale.max(1.0) {
        if condition > CONDITION_LIMIT {
            return Err(Error::IllConditioned { condition });
        }
        return Err(Error::NonConvergence {
            what: "Pade defining equations",
            detail: format!("residual {residual:.3e} vs scale {g_scale:.3e}"),
        });
    }

    trim_trailing(&mut den_u);
    trim_trailing(&mut num_u);
    if den_u.len() < 2 {
        return Err(Error::NonConvergence {
            what: "Pade build",
            detail: "denominator degenerated to a constant".into(),
        });
    }
    if num_u.len() >= den_u.len() {
        return Err(Error::NonConvergence {
            what: "Pade build",
            detail: format!(
                "not strictly proper after deflation: deg P = {}, deg Q = {}",
                num_u.len() - 1,
                den_u.len() - 1
            ),
        });
    }

    // poles: roots of the denominator in u
    let mut roots = aberth_roots(&den_u)?;
    symmetrize_conjugates(&mut roots);
    let dq: Vec<f64> = den_u
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| i as f64 * c)
        .collect();
    let lambdas: Vec<Complex64> = roots
        .iter()
        .map(|&r| horner_c(&num_u, r) / horner_c(&dq, r))
        .collect();
    // weight of each pole in the partial-fraction value at the origin;
    // negligible-weight poles are spurious doublets and get dropped
    let weights: Vec<f64> = roots
        .iter()
        .zip(&lambdas)
        .map(|(r, l)| (l / r).norm())
        .collect();
    let total_weight: f64 = weights.iter().sum();
    let mut poles = Vec::with_capacity(roots.len());
    let mut residues = Vec::with_capacity(roots.len());
    let mut spurious_weight = 0.0;
    for ((&r, &lam), &w) in roots.iter().zip(&lambdas).zip(&weights) {
        let pole = r / sigma;
        if pole.re >= 0.0 {
            if w <= DOUBLET_DROP_TOL * total_weight {
                spurious_weight += w / total_weight;
                continue;
            }
            return Err(Error::UnstablePole { re: pole.re, im: pole.im });
        }
        poles.push(pole);
        residues.push(lam / sigma);
    }
    if poles.is_empty() {
        return Err(Error::NonConvergence {
            what: "Pade build",
            detail: "every pole was classified as a spurious doublet".into(),
        });
    }
    if spurious_weight > 0.0 {
        // restore sum lambda_i / p_i = -M(0) = -1 over the kept poles
        let sum: Complex64 = poles
            .iter()
            .zip(&residues)
            .map(|(p, l)| l / p)
            .sum();
        if sum.re < -0.5 {
            let rescale = -1.0 / sum.re;
            for l in residues.iter_mut() {
                *l *= rescale;
            }
        }
    }
    for i in 0..poles.len() {
        for j in (i + 1)..poles.len() {
            if (poles[i] - poles[j]).norm() * sigma < POLE_CLUSTER_TOL {
                return Err(Error::RepeatedPole {
                    re: poles[i].re,
                    im: poles[i].im,
                });
            }
        }
    }

    Ok(PadeMGF {
        order_a: a,
        order_b: b,
        scale: sigma,
        num_u,
        den_u,
        poles,
        residues,
        spurious_weight,
    })
}

fn trim_trailing(v: &mut Vec<f64>) {
    let scale = v.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    while v.len() > 1 && v.last().map_or(false, |&c| c.abs() <= 1e-12 * scale) {
        v.pop();
    }
}

/// Gaussian elimination with full pivoting, returning the solution and the
/// pivot-growth condition estimate. Near-zero pivots deflate the
/// corresponding unknowns to zero instead of dividing by noise; the caller
/// judges the result by its residual.
fn solve_full_pivot(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>, scale: f64) -> (Vec<f64>, f64) {
    let n = rhs.len();
    let mut col_of = (0..n).collect::<Vec<usize>>(); // col_of[position] = unknown index
    let mut first_pivot = 0.0f64;
    let mut last_pivot = 0.0f64;
    let mut rank = n;
    for step in 0..n {
        // largest remaining entry
        let (mut pr, mut pc, mut pv) = (step, step, 0.0f64);
        for r in step..n {
            for c in step..n {
                if m[r][c].abs() > pv {
                    pv = m[r][c].abs();
                    pr = r;
                    pc = c;
                }
            }
        }
        if step == 0 {
            first_pivot = pv;
        }
        if pv <= 1e-13 * first_pivot.max(scale) {
            rank = step;
            break;
        }
        last_pivot = pv;
        m.swap(step, pr);
        rhs.swap(step, pr);
        if pc != step {
            for row in m.iter_mut() {
                row.swap(step, pc);
            }
            col_of.swap(step, pc);
        }
        for r in (step + 1)..n {
            let f = m[r][step] / m[step][step];
            if f != 0.0 {
                for c in step..n {
                    m[r][c] -= f * m[step][c];
                }
                rhs[r] -= f * rhs[step];
            }
        }
    }
    let condition = if rank > 0 { first_pivot / last_pivot } else { 1.0 };
    // back substitution; unknowns beyond `rank` stay zero
    let mut x = vec![0.0f64; n];
    for step in (0..rank).rev() {
        let mut v = rhs[step];
        for c in (step + 1)..n {
            v -= m[step][c] * x[c];
        }
        x[step] = v / m[step][step];
    }
    let mut out = vec![0.0f64; n];
    for (pos, &unknown) in col_of.iter().enumerate() {
        out[unknown] = x[pos];
    }
    (out, condition)
}

/// Aberth-Ehrlich simultaneous root refinement for a real polynomial given
/// by ascending coefficients (degree >= 1, leading coefficient nonzero).
fn aberth_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    // Fujiwara root bound: 2 max_k |c_{d-k}/c_d|^(1/k). Unlike the Cauchy
    // bound it stays tight when the leading coefficient is small, which is
    // the normal situation for near-degenerate denominators.
    let radius = 2.0
        * (1..=deg).fold(1e-3f64, |acc, k| {
            let c = (coeffs[deg - k] / lead).abs().powf(1.0 / k as f64);
            acc.max(c)
        });
    let dq: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| i as f64 * c)
        .collect();
    let mut z: Vec<Complex64> = (0..deg)
        .map(|j| {
            let th = 2.0 * core::f64::consts::PI * (j as f64 + 0.35) / deg as f64 + 0.4;
            0.7 * radius * Complex64::new(th.cos(), th.sin())
        })
        .collect();
    let mut best_step = f64::INFINITY;
    let mut stalled = 0u32;
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for j in 0..deg {
            let pj = horner_c(coeffs, z[j]);
            let dj = horner_c(&dq, z[j]);
            if pj.norm() == 0.0 {
                continue;
            }
            let w = pj / dj;
            let mut s = Complex64::new(0.0, 0.0);
            for (k, zk) in z.iter().enumerate() {
                if k != j {
                    s += (z[j] - zk).inv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let step = if denom.norm() > 1e-300 { w / denom } else { w };
            z[j] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[j].norm()));
        }
        // tightly converged, or rattling at the noise floor clustered
        // roots impose on f64 coefficients
        if max_step >= 0.7 * best_step {
            stalled += 1;
        } else {
            stalled = 0;
        }
        best_step = best_step.min(max_step);
        if max_step < 1e-13 || (stalled >= 4 && best_step < 1e-9) {
            // Newton polish
            for zj in z.iter_mut() {
                for _ in 0..3 {
                    let p = horner_c(coeffs, *zj);
                    let d = horner_c(&dq, *zj);
                    if d.norm() > 1e-300 {
                        *zj -= p / d;
                    }
                }
            }
            return Ok(z);
        }
    }
    Err(Error::NonConvergence {
        what: "denominator root finding",
        detail: format!("degree {deg}, best step {best_step:.3e}"),
    })
}

/// Force exact conjugate pairing: real-axis roots get a zero imaginary
/// part, off-axis roots are averaged with their nearest conjugate partner.
fn symmetrize_conjugates(roots: &mut [Complex64]) {
    let n = roots.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        if roots[i].im.abs() <= 1e-12 * (1.0 + roots[i].norm()) {
            roots[i].im = 0.0;
            used[i] = true;
            continue;
        }
        let want = roots[i].conj();
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (j, r) in roots.iter().enumerate() {
            if j != i && !used[j] {
                let d = (r - want).norm();
                if d < best_d {
                    best_d = d;
                    best = j;
                }
            }
        }
        if best != usize::MAX {
            let avg = 0.5 * (roots[i] + roots[best].conj());
            roots[i] = avg;
            roots[best] = avg.conj();
            used[i] = true;
            used[best] = true;
        }
    }
}
