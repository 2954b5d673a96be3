//! Nelder-Mead downhill simplex minimisation.
//!
//! Standard reflection/expansion/contraction/shrink moves with the
//! classical coefficients (1, 2, 0.5, 0.5). Termination is on simplex
//! diameter and spread of function values, both of which the caller
//! chooses to match the physical scales of the problem.

#[derive(Clone, Debug)]
pub struct NelderMeadOptions {
    /// Initial displacement per coordinate used to build the simplex.
    pub initial_step: f64,
    /// Converged when the largest vertex-to-vertex distance drops below this.
    pub x_tol: f64,
    /// Converged when max(f) - min(f) over the simplex drops below this.
    pub f_tol: f64,
    pub max_iterations: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 1e-4,
            x_tol: 1e-9,
            f_tol: 1e-24,
            max_iterations: 2000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimise `f` starting from `x0`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let mut fv: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iterations {
        iterations += 1;
        // order best..worst
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| fv[a].partial_cmp(&fv[b]).unwrap_or(std::cmp::Ordering::Equal));
        let best = idx[0];
        let worst = idx[n];
        let second_worst = idx[n - 1];

        if diameter(&simplex) < opts.x_tol && (fv[worst] - fv[best]).abs() < opts.f_tol {
            converged = true;
            break;
        }

        // centroid excluding worst
        let mut centroid = vec![0.0; n];
        for (k, v) in simplex.iter().enumerate() {
            if k == worst {
                continue;
            }
            for (c, &x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }

        let reflect = blend(&centroid, &simplex[worst], 2.0, -1.0);
        let fr = f(&reflect);
        if fr < fv[best] {
            let expand = blend(&centroid, &simplex[worst], 3.0, -2.0);
            let fe = f(&expand);
            if fe < fr {
                simplex[worst] = expand;
                fv[worst] = fe;
            } else {
                simplex[worst] = reflect;
                fv[worst] = fr;
            }
        } else if fr < fv[second_worst] {
            simplex[worst] = reflect;
            fv[worst] = fr;
        } else {
            let contract = if fr < fv[worst] {
                blend(&centroid, &simplex[worst], 1.5, -0.5)
            } else {
                blend(&centroid, &simplex[worst], 0.5, 0.5)
            };
            let fc = f(&contract);
            if fc < fv[worst].min(fr) {
                simplex[worst] = contract;
                fv[worst] = fc;
            } else {
                // shrink toward best
                let anchor = simplex[best].clone();
                for (k, v) in simplex.iter_mut().enumerate() {
                    if k == best {
                        continue;
                    }
                    for (x, &a) in v.iter_mut().zip(&anchor) {
                        *x = 0.5 * (*x + a);
                    }
                    fv[k] = f(v);
                }
            }
        }
    }

    let (mut bi, mut bf) = (0, fv[0]);
    for (k, &v) in fv.iter().enumerate() {
        if v < bf {
            bi = k;
            bf = v;
        }
    }
    NelderMeadResult {
        x: simplex[bi].clone(),
        f: bf,
        iterations,
        converged,
    }
}

fn blend(a: &[f64], b: &[f64], wa: f64, wb: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(&x, &y)| wa * x + wb * y).collect()
}

fn diameter(simplex: &[Vec<f64>]) -> f64 {
    let mut d = 0.0_f64;
    for i in 0..simplex.len() {
        for j in (i + 1)..simplex.len() {
            let dist: f64 = simplex[i]
                .iter()
                .zip(&simplex[j])
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            d = d.max(dist);
        }
    }
    d
}
