//! Nelder-Mead direct search on an unconstrained domain.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    pub max_iterations: usize,
    /// Relative spread of function values across the simplex at which the
    /// search stops: `2|f_worst - f_best| <= f_tol (|f_worst| + |f_best|)`.
    pub f_tol: f64,
    /// Offset along each axis used to build the initial simplex.
    pub initial_step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_iterations: 2_000,
            f_tol: 1e-8,
            initial_step: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

impl NelderMead {
    /// Minimizes `f` from `x0`. Non-finite objective values count as +inf,
    /// so the search retreats from regions where `f` is undefined.
    pub fn minimize<F>(&self, mut f: F, x0: &[f64]) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let dim = x0.len();
        let mut eval = |x: &[f64]| {
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        simplex.push((x0.to_vec(), eval(x0)));
        for i in 0..dim {
            let mut x = x0.to_vec();
            x[i] += self.initial_step;
            let v = eval(&x);
            simplex.push((x, v));
        }

        let mut iterations = 0;
        let mut converged = false;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].1;
            let worst = simplex[dim].1;
            if best.is_finite()
                && worst.is_finite()
                && 2.0 * (worst - best).abs() <= self.f_tol * (worst.abs() + best.abs()) + 1e-300
            {
                converged = true;
                break;
            }
            if iterations >= self.max_iterations {
                break;
            }
            iterations += 1;

            let centroid: Vec<f64> = (0..dim)
                .map(|j| simplex[..dim].iter().map(|(x, _)| x[j]).sum::<f64>() / dim as f64)
                .collect();
            let along = |coef: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[dim].0)
                    .map(|(c, w)| c + coef * (c - w))
                    .collect()
            };

            let reflected = along(REFLECT);
            let f_reflected = eval(&reflected);
            if f_reflected < best {
                let expanded = along(EXPAND);
                let f_expanded = eval(&expanded);
                simplex[dim] = if f_expanded < f_reflected {
                    (expanded, f_expanded)
                } else {
                    (reflected, f_reflected)
                };
                continue;
            }
            if f_reflected < simplex[dim - 1].1 {
                simplex[dim] = (reflected, f_reflected);
                continue;
            }

            // contraction: outside if the reflection improved on the worst point
            let (contracted, f_contracted) = if f_reflected < worst {
                let x = along(REFLECT * CONTRACT);
                let v = eval(&x);
                (x, v)
            } else {
                let x = along(-CONTRACT);
                let v = eval(&x);
                (x, v)
            };
            if f_contracted < worst.min(f_reflected) {
                simplex[dim] = (contracted, f_contracted);
                continue;
            }

            let anchor = simplex[0].0.clone();
            for (x, v) in simplex.iter_mut().skip(1) {
                for (xj, aj) in x.iter_mut().zip(&anchor) {
                    *xj = aj + SHRINK * (*xj - aj);
                }
                *v = eval(x);
            }
        }

        let (x, value) = simplex.swap_remove(0);
        Minimum {
            x,
            value,
            iterations,
            converged,
        }
    }
}
