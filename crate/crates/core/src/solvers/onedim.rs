//! Shared one-dimensional maximizer.

use crate::error::{Error, Result};
use crate::objectives::{sigmoid, Analytic1d, Restriction1d};

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2
const GRID_POINTS: usize = 10_001;

/// Maximizes the restriction over [lo, hi] (a subinterval of the handle's
/// range).
///
/// Dispatch: entropy-regularized coordinates take the exact sigmoid solution;
/// analytic quadratics compare the vertex and the endpoints; unimodal handles
/// run golden-section to width `tol`; everything else scans a dense grid and
/// refines the best cell. Endpoints are always candidates, so boundary maxima
/// are returned exactly.
pub fn maximize_1d(handle: &Restriction1d<'_>, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    if lo > hi {
        return Err(Error::EmptyInterval);
    }
    if lo == hi {
        return Ok((lo, handle.eval(lo)?));
    }
    match handle.analytic {
        Analytic1d::SigmoidArg(arg) => {
            let u = sigmoid(arg).clamp(lo, hi);
            Ok((u, handle.eval(u)?))
        }
        Analytic1d::Quadratic { a2, a1 } => {
            let mut candidates = vec![lo, hi];
            if a2 < 0.0 {
                let vertex = -a1 / (2.0 * a2);
                if vertex > lo && vertex < hi {
                    candidates.push(vertex);
                }
            }
            best_of(handle, &candidates)
        }
        Analytic1d::Opaque if handle.unimodal => {
            let (u, f) = golden_max(|u| handle.eval(u), lo, hi, tol)?;
            best_of_with(handle, &[lo, hi], (u, f))
        }
        Analytic1d::Opaque => {
            let step = (hi - lo) / (GRID_POINTS - 1) as f64;
            let mut best = (lo, handle.eval(lo)?);
            let mut best_idx = 0usize;
            for idx in 1..GRID_POINTS {
                let u = if idx == GRID_POINTS - 1 {
                    hi
                } else {
                    lo + idx as f64 * step
                };
                let f = handle.eval(u)?;
                if f > best.1 {
                    best = (u, f);
                    best_idx = idx;
                }
            }
            let cell_lo = lo + best_idx.saturating_sub(1) as f64 * step;
            let cell_hi = (lo + (best_idx + 1) as f64 * step).min(hi);
            let refined = golden_max(|u| handle.eval(u), cell_lo, cell_hi, tol)?;
            if refined.1 > best.1 {
                best = refined;
            }
            Ok(best)
        }
    }
}

fn best_of(handle: &Restriction1d<'_>, candidates: &[f64]) -> Result<(f64, f64)> {
    let mut best = (candidates[0], handle.eval(candidates[0])?);
    for &u in &candidates[1..] {
        let f = handle.eval(u)?;
        if f > best.1 {
            best = (u, f);
        }
    }
    Ok(best)
}

fn best_of_with(
    handle: &Restriction1d<'_>,
    candidates: &[f64],
    mut best: (f64, f64),
) -> Result<(f64, f64)> {
    for &u in candidates {
        let f = handle.eval(u)?;
        if f > best.1 {
            best = (u, f);
        }
    }
    Ok(best)
}

/// Golden-section maximization; shrinks the bracket to width `tol` and
/// returns the best point evaluated.
pub(crate) fn golden_max<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    let tol = tol.max(f64::EPSILON);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
            if fc > best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
            if fd > best.1 {
                best = (d, fd);
            }
        }
    }
    let mid = 0.5 * (a + b);
    let fmid = f(mid)?;
    if fmid > best.1 {
        best = (mid, fmid);
    }
    Ok(best)
}
