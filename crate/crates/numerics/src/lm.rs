//! Damped Gauss-Newton (Levenberg-Marquardt) nonlinear least squares.
//!
//! The Jacobian is taken by central finite differences with per-parameter
//! steps, and the damped normal equations use Marquardt's diagonal
//! scaling so wildly different parameter magnitudes (GHz centres next to
//! fractional contrasts) stay well conditioned.

use crate::NumericsError;

#[derive(Clone, Debug)]
pub struct LmOptions {
    pub max_iterations: usize,
    /// Converged when the relative cost decrease per accepted step falls below this.
    pub cost_rel_tol: f64,
    pub lambda_init: f64,
    /// Typical magnitude per parameter; finite-difference steps are
    /// `6e-6 * max(|p|, scale)`. Empty means unit scales.
    pub scales: Vec<f64>,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            cost_rel_tol: 1e-10,
            lambda_init: 1e-3,
            scales: Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LmFit {
    pub params: Vec<f64>,
    /// Sum of squared residuals at the solution.
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
    /// 1-sigma parameter uncertainties from the fit covariance, when the
    /// normal matrix is invertible and there are spare degrees of freedom.
    pub uncertainties: Option<Vec<f64>>,
    pub residual_rms: f64,
}

/// Minimise `sum(r_i^2)` over parameters, `residuals(p)` returning the residual vector.
pub fn levenberg_marquardt<F>(
    mut residuals: F,
    initial: &[f64],
    opts: &LmOptions,
) -> Result<LmFit, NumericsError>
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    let n = initial.len();
    if n == 0 {
        return Err(NumericsError::InvalidInput("no parameters".into()));
    }
    let mut p = initial.to_vec();
    let mut r = residuals(&p);
    let m = r.len();
    if m < n {
        return Err(NumericsError::InvalidInput(format!(
            "{m} residuals cannot constrain {n} parameters"
        )));
    }
    let mut cost = sumsq(&r);
    let mut lambda = opts.lambda_init;
    let mut converged = false;
    let mut iterations = 0;
    let mut jac = vec![vec![0.0; n]; m];

    while iterations < opts.max_iterations {
        iterations += 1;
        fill_jacobian(&mut residuals, &p, &opts.scales, &mut jac);

        // normal matrix and gradient
        let mut jtj = vec![vec![0.0; n]; n];
        let mut jtr = vec![0.0; n];
        for i in 0..m {
            for a in 0..n {
                jtr[a] += jac[i][a] * r[i];
                for b in a..n {
                    jtj[a][b] += jac[i][a] * jac[i][b];
                }
            }
        }
        for a in 0..n {
            for b in 0..a {
                jtj[a][b] = jtj[b][a];
            }
        }

        let mut accepted = false;
        for _ in 0..25 {
            let mut damped = jtj.clone();
            for a in 0..n {
                damped[a][a] += lambda * jtj[a][a].max(1e-300);
            }
            let rhs: Vec<f64> = jtr.iter().map(|&g| -g).collect();
            let Some(step) = solve(&damped, &rhs) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = p.iter().zip(&step).map(|(&a, &d)| a + d).collect();
            let tr = residuals(&trial);
            let tc = sumsq(&tr);
            if tc.is_finite() && tc < cost {
                let rel_drop = (cost - tc) / cost.max(f64::MIN_POSITIVE);
                p = trial;
                r = tr;
                cost = tc;
                lambda = (lambda / 3.0).max(1e-14);
                accepted = true;
                if rel_drop < opts.cost_rel_tol {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e14 {
                break;
            }
        }
        if converged {
            break;
        }
        if !accepted {
            // no downhill step at any damping: stationary to working precision
            converged = true;
            break;
        }
    }

    if !converged {
        return Err(NumericsError::FitNotConverged { iterations });
    }

    fill_jacobian(&mut residuals, &p, &opts.scales, &mut jac);
    let uncertainties = covariance_diag(&jac, cost, m, n);
    Ok(LmFit {
        params: p,
        cost,
        iterations,
        converged,
        uncertainties,
        residual_rms: (cost / m as f64).sqrt(),
    })
}

fn fill_jacobian<F>(residuals: &mut F, p: &[f64], scales: &[f64], jac: &mut [Vec<f64>])
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    let n = p.len();
    let mut work = p.to_vec();
    for a in 0..n {
        let scale = scales.get(a).copied().unwrap_or(1.0);
        let h = 6e-6 * p[a].abs().max(scale.abs()).max(1e-300);
        work[a] = p[a] + h;
        let rp = residuals(&work);
        work[a] = p[a] - h;
        let rm = residuals(&work);
        work[a] = p[a];
        for (row, (&hi, &lo)) in jac.iter_mut().zip(rp.iter().zip(&rm)) {
            row[a] = (hi - lo) / (2.0 * h);
        }
    }
}

fn covariance_diag(jac: &[Vec<f64>], cost: f64, m: usize, n: usize) -> Option<Vec<f64>> {
    if m <= n {
        return None;
    }
    let mut jtj = vec![vec![0.0; n]; n];
    for row in jac {
        for a in 0..n {
            for b in 0..n {
                jtj[a][b] += row[a] * row[b];
            }
        }
    }
    let inv = invert(&jtj)?;
    let sigma2 = cost / (m - n) as f64;
    Some((0..n).map(|a| (inv[a][a] * sigma2).max(0.0).sqrt()).collect())
}

/// Gaussian elimination with partial pivoting.
fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            m[i][col]
                .abs()
                .partial_cmp(&m[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        for row in (col + 1)..n {
            let factor = m[row][col] / m[col][col];
            for k in col..=n {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = m[row][n];
        for k in (row + 1)..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cols.push(solve(a, &e)?);
    }
    let mut inv = vec![vec![0.0; n]; n];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            inv[i][j] = col[i];
        }
    }
    Some(inv)
}

fn sumsq(r: &[f64]) -> f64 {
    r.iter().map(|&x| x * x).sum()
}
