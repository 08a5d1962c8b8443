//! Derivative-free minimization by linear interpolation on a simplex with a
//! shrinking trust region (the unconstrained form of Powell's COBYLA).
//!
//! The simplex holds `n + 1` evaluated points. Its best vertex is the base
//! `x_b`; the other vertices are stored as offsets `D_j = x_j − x_b`. The
//! linear model `f(x_b + d) ≈ f_b + g·d` interpolates all vertices, so
//! `g = D⁻¹(f − f_b)`. Each iteration either takes the model's steepest step
//! of length `Δ` or, when the simplex has degenerated, moves one vertex to
//! restore its shape. The trust radius `Δ` grows and shrinks with the
//! model's success but never drops below the resolution `ρ`, which only
//! ever shrinks.

use serde::{Deserialize, Serialize};

use crate::error::{QgaaError, Result};

/// Acceptable simplex: every vertex at least `ALPHA·Δ` from its opposite face.
const ALPHA: f64 = 0.25;
/// Acceptable simplex: every edge from the base at most `BETA·Δ` long.
const BETA: f64 = 2.1;
/// Geometry steps have length `GAMMA·Δ`.
const GAMMA: f64 = 0.5;
/// Steps with a worse reduction ratio count as failures.
const POOR_RATIO: f64 = 0.1;
/// Steps with a better reduction ratio double the trust radius.
const GOOD_RATIO: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CobylaConfig {
    pub rho_begin: f64,
    pub rho_end: f64,
    pub budget: usize,
}

impl Default for CobylaConfig {
    fn default() -> Self {
        Self { rho_begin: 0.5, rho_end: 1e-6, budget: 5000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CobylaStatus {
    /// The trust radius reached `rho_end`.
    Converged,
    /// The evaluation budget ran out first.
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CobylaResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evaluations: usize,
    pub rho: f64,
    pub status: CobylaStatus,
}

/// Minimizes `f` from `x0`. The returned point is the best one evaluated, so
/// `f(x*) ≤ f(x0)` always.
pub fn cobyla_minimize<F>(mut f: F, x0: &[f64], budget: usize, rho_begin: f64, rho_end: f64) -> Result<CobylaResult>
where
    F: FnMut(&[f64]) -> f64,
{
    try_cobyla_minimize(|x| Ok(f(x)), x0, &CobylaConfig { rho_begin, rho_end, budget })
}

struct Evaluator<F> {
    f: F,
    count: usize,
    budget: usize,
}

impl<F: FnMut(&[f64]) -> Result<f64>> Evaluator<F> {
    fn eval(&mut self, x: &[f64]) -> Result<Option<f64>> {
        if self.count >= self.budget {
            return Ok(None);
        }
        self.count += 1;
        let v = (self.f)(x)?;
        if v.is_nan() {
            return Err(QgaaError::NanObjective { evaluations: self.count });
        }
        Ok(Some(v))
    }
}

pub fn try_cobyla_minimize<F>(f: F, x0: &[f64], cfg: &CobylaConfig) -> Result<CobylaResult>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    if !(cfg.rho_begin > 0.0 && cfg.rho_end > 0.0 && cfg.rho_end <= cfg.rho_begin) {
        return Err(QgaaError::Config(format!(
            "need 0 < rho_end ≤ rho_begin, got {} / {}",
            cfg.rho_end, cfg.rho_begin
        )));
    }
    let n = x0.len();
    let mut ev = Evaluator { f, count: 0, budget: cfg.budget.max(1) };
    let f0 = ev.eval(x0)?.expect("budget ≥ 1");
    let mut rho = cfg.rho_begin;
    let mut base = x0.to_vec();
    let mut fb = f0;
    let done = |base: Vec<f64>, fb: f64, ev: &Evaluator<_>, rho: f64, status| CobylaResult {
        x: base,
        f: fb,
        evaluations: ev.count,
        rho,
        status,
    };
    if n == 0 {
        return Ok(done(base, fb, &ev, rho, CobylaStatus::Converged));
    }

    // offsets[j] = x_j − x_b, fv[j] = f(x_j)
    let mut offsets: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut fv: Vec<f64> = Vec::with_capacity(n);
    for j in 0..n {
        let mut d = vec![0.0; n];
        d[j] = rho;
        let x: Vec<f64> = base.iter().zip(&d).map(|(a, b)| a + b).collect();
        let Some(v) = ev.eval(&x)? else {
            return Ok(done(base, fb, &ev, rho, CobylaStatus::BudgetExhausted));
        };
        offsets.push(d);
        fv.push(v);
    }

    // Δ is the trust radius; ρ is the resolution and a floor for Δ. A failed
    // step at Δ = ρ defers the cut of ρ until the simplex is acceptable.
    let mut delta = rho;
    let mut pending_cut = false;
    loop {
        promote_best(&mut base, &mut fb, &mut offsets, &mut fv);

        let inv = invert(&offsets);
        let geometry = inv.as_ref().map(|w| geometry_defect(&offsets, w, delta)).unwrap_or(Some(0));
        if let Some(j) = geometry {
            // move vertex j to restore the simplex shape
            let dir = match &inv {
                Some(w) => column(w, j),
                None => fallback_direction(&offsets, j),
            };
            let g = inv.as_ref().map(|w| model_gradient(w, &fv, fb));
            let nrm = norm(&dir).max(f64::MIN_POSITIVE);
            let mut d: Vec<f64> = dir.iter().map(|v| GAMMA * delta * v / nrm).collect();
            if let Some(g) = g {
                if dot(&g, &d) > 0.0 {
                    d.iter_mut().for_each(|v| *v = -*v);
                }
            }
            let x: Vec<f64> = base.iter().zip(&d).map(|(a, b)| a + b).collect();
            let Some(v) = ev.eval(&x)? else {
                return Ok(done(base, fb, &ev, rho, CobylaStatus::BudgetExhausted));
            };
            offsets[j] = d;
            fv[j] = v;
            continue;
        }
        if pending_cut {
            if rho <= cfg.rho_end {
                return Ok(done(base, fb, &ev, rho, CobylaStatus::Converged));
            }
            let old = rho;
            rho *= 0.5;
            if rho <= 1.5 * cfg.rho_end {
                rho = cfg.rho_end;
            }
            delta = (0.5 * old).max(rho);
            pending_cut = false;
            continue;
        }
        let w = inv.expect("acceptable geometry implies an inverse");
        let g = model_gradient(&w, &fv, fb);
        let gn = norm(&g);
        if !(gn > 0.0 && gn.is_finite()) {
            pending_cut = true;
            continue;
        }
        let d: Vec<f64> = g.iter().map(|v| -delta * v / gn).collect();
        let x: Vec<f64> = base.iter().zip(&d).map(|(a, b)| a + b).collect();
        let Some(v) = ev.eval(&x)? else {
            return Ok(done(base, fb, &ev, rho, CobylaStatus::BudgetExhausted));
        };
        let reduction = fb - v;
        let ratio = reduction / (delta * gn);
        let step_delta = delta;
        delta = if ratio <= POOR_RATIO {
            0.5 * delta
        } else if ratio <= GOOD_RATIO {
            delta
        } else {
            2.0 * delta
        };
        if delta <= 1.5 * rho {
            delta = rho;
        }
        pending_cut = ratio <= POOR_RATIO && step_delta <= rho;
        if let Some(j) = vertex_to_drop(&offsets, &w, &d, step_delta, reduction > 0.0) {
            offsets[j] = d;
            fv[j] = v;
        }
    }
}

/// Vertex replaced by the trial offset `d`, if any.
///
/// `τ = D⁻ᵀd` gives the new point in edge coordinates; swapping out vertex
/// `j` scales its face distance by `|τ_j|`. Among swaps that keep that
/// distance acceptable, the vertex farthest from the trial point (or from
/// the base after a failed step) is preferred once beyond `1.1·Δ`;
/// otherwise the largest `|τ_j|` wins, which must exceed 1 after a failure.
fn vertex_to_drop(offsets: &[Vec<f64>], w: &[Vec<f64>], d: &[f64], delta: f64, improved: bool) -> Option<usize> {
    let n = offsets.len();
    let mut pick = None;
    let mut best_tau = if improved { 0.0 } else { 1.0 };
    let mut far = None;
    let mut edge_max = 1.1 * delta;
    for j in 0..n {
        let col = column(w, j);
        let tau = dot(&col, d).abs();
        if tau > best_tau {
            best_tau = tau;
            pick = Some(j);
        }
        let sigma = 1.0 / norm(&col).max(f64::MIN_POSITIVE);
        let sigma_new = tau * sigma;
        if sigma_new >= ALPHA * delta || sigma_new >= sigma {
            let dist = if improved {
                offsets[j].iter().zip(d).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
            } else {
                norm(&offsets[j])
            };
            if dist > edge_max {
                edge_max = dist;
                far = Some(j);
            }
        }
    }
    far.or(pick)
}

/// Makes the lowest vertex the base, re-expressing all offsets.
fn promote_best(base: &mut Vec<f64>, fb: &mut f64, offsets: &mut [Vec<f64>], fv: &mut [f64]) {
    let Some((j, &v)) = fv.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)) else {
        return;
    };
    if v >= *fb {
        return;
    }
    let shift = offsets[j].clone();
    for (k, off) in offsets.iter_mut().enumerate() {
        if k == j {
            off.iter_mut().for_each(|x| *x = -*x);
        } else {
            off.iter_mut().zip(&shift).for_each(|(x, s)| *x -= s);
        }
    }
    base.iter_mut().zip(&shift).for_each(|(x, s)| *x += s);
    fv[j] = *fb;
    *fb = v;
}

/// `g = D⁻¹(f − f_b)` with `D` holding the offsets as rows.
fn model_gradient(w: &[Vec<f64>], fv: &[f64], fb: f64) -> Vec<f64> {
    let n = fv.len();
    (0..n).map(|i| (0..n).map(|j| w[i][j] * (fv[j] - fb)).sum()).collect()
}

/// Index of a vertex that violates the shape bounds: the longest edge
/// beyond `BETA·Δ` first, else the vertex closest to its opposite face when
/// that distance is below `ALPHA·Δ`.
fn geometry_defect(offsets: &[Vec<f64>], w: &[Vec<f64>], delta: f64) -> Option<usize> {
    let n = offsets.len();
    let (far, far_len) =
        (0..n).map(|j| (j, norm(&offsets[j]))).max_by(|a, b| a.1.total_cmp(&b.1)).expect("n ≥ 1");
    if far_len > BETA * delta {
        return Some(far);
    }
    // the distance from vertex j to the opposite face is 1/‖column j of D⁻¹‖
    let (near, sigma) = (0..n)
        .map(|j| (j, 1.0 / norm(&column(w, j)).max(f64::MIN_POSITIVE)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("n ≥ 1");
    (sigma < ALPHA * delta).then_some(near)
}

fn column(w: &[Vec<f64>], j: usize) -> Vec<f64> {
    w.iter().map(|row| row[j]).collect()
}

/// A direction orthogonal to all offsets but `j`, used when `D` is singular.
fn fallback_direction(offsets: &[Vec<f64>], j: usize) -> Vec<f64> {
    let n = offsets.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for k in 0..n {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        // Gram–Schmidt against the remaining edges
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for (i, off) in offsets.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut u = off.clone();
            for b in &basis {
                let p = dot(&u, b);
                u.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
            let un = norm(&u);
            if un > 1e-12 {
                u.iter_mut().for_each(|x| *x /= un);
                basis.push(u);
            }
        }
        for b in &basis {
            let p = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
        let vn = norm(&v);
        if best.as_ref().is_none_or(|(bn, _)| vn > *bn) {
            best = Some((vn, v));
        }
    }
    best.map(|(_, v)| v).unwrap_or_else(|| vec![1.0; n])
}

/// Inverse of the matrix with the offsets as rows, by Gauss–Jordan with
/// partial pivoting. `None` when numerically singular.
fn invert(rows: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = rows.len();
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let scale = rows.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for c in 0..n {
        let p = (c..n).max_by(|&i, &k| a[i][c].abs().total_cmp(&a[k][c].abs()))?;
        if a[p][c].abs() <= 1e-13 * scale {
            return None;
        }
        a.swap(c, p);
        inv.swap(c, p);
        let piv = a[c][c];
        for j in 0..n {
            a[c][j] /= piv;
            inv[c][j] /= piv;
        }
        for i in 0..n {
            if i != c {
                let factor = a[i][c];
                if factor != 0.0 {
                    for j in 0..n {
                        a[i][j] -= factor * a[c][j];
                        inv[i][j] -= factor * inv[c][j];
                    }
                }
            }
        }
    }
    Some(inv)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
