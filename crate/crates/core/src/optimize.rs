//! Nelder–Mead downhill simplex.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Stop once every vertex is within this distance of the best one.
    pub diameter_tol: f64,
    pub max_iter: usize,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions { diameter_tol: 1e-9, max_iter: 5000, initial_step: 0.5 }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn eval(f: &mut impl FnMut(&[f64]) -> f64, x: &[f64], count: &mut usize) -> Result<f64> {
    *count += 1;
    let v = f(x);
    if v.is_nan() {
        return Err(Error::NanObjective(x.to_vec()));
    }
    Ok(v)
}

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(&ai, &bi)| ai + t * (bi - ai)).collect()
}

/// Minimizes `f` starting from `x0`. Deterministic for a given `x0`.
pub fn simplex_minimize(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    opts: &SimplexOptions,
) -> Result<SimplexResult> {
    let n = x0.len();
    let mut evaluations = 0;
    let f0 = eval(&mut f, x0, &mut evaluations)?;
    if n == 0 {
        return Ok(SimplexResult { x: vec![], f: f0, iterations: 0, evaluations, converged: true });
    }
    let mut pts: Vec<Vec<f64>> = vec![x0.to_vec()];
    let mut vals = vec![f0];
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += opts.initial_step;
        vals.push(eval(&mut f, &p, &mut evaluations)?);
        pts.push(p);
    }

    let mut iterations = 0;
    let mut converged = false;
    loop {
        // Stable sort keeps earlier vertices ahead on ties.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let diameter = pts[1..]
            .iter()
            .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        if diameter < opts.diameter_tol {
            converged = true;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for p in &pts[..n] {
            for (c, &x) in centroid.iter_mut().zip(p) {
                *c += x / n as f64;
            }
        }
        let worst = pts[n].clone();
        let xr = lerp(&centroid, &worst, -REFLECT);
        let fr = eval(&mut f, &xr, &mut evaluations)?;
        if fr < vals[0] {
            let xe = lerp(&centroid, &worst, -EXPAND);
            let fe = eval(&mut f, &xe, &mut evaluations)?;
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[n] {
            let xc = lerp(&centroid, &xr, CONTRACT);
            let fc = eval(&mut f, &xc, &mut evaluations)?;
            (xc, fc)
        } else {
            let xc = lerp(&centroid, &worst, CONTRACT);
            let fc = eval(&mut f, &xc, &mut evaluations)?;
            (xc, fc)
        };
        if fc < vals[n].min(fr) {
            pts[n] = xc;
            vals[n] = fc;
            continue;
        }
        let best = pts[0].clone();
        for k in 1..=n {
            pts[k] = lerp(&best, &pts[k], SHRINK);
            vals[k] = eval(&mut f, &pts[k], &mut evaluations)?;
        }
    }
    Ok(SimplexResult { x: pts[0].clone(), f: vals[0], iterations, evaluations, converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_quadratic() {
        let r = simplex_minimize(|x| (x[0] - 3.0).powi(2), &[0.0], &SimplexOptions::default()).unwrap();
        assert!((r.x[0] - 3.0).abs() < 1e-6);
        assert!(r.converged);
    }

    #[test]
    fn nan_aborts() {
        let r = simplex_minimize(|_| f64::NAN, &[0.0, 1.0], &SimplexOptions::default());
        assert!(matches!(r, Err(Error::NanObjective(_))));
    }
}
