//! Small dense quasi-Newton (BFGS) optimizer shared by the product-state,
//! proxy and subspace searches, plus start-point generators.

use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentOptions {
    pub max_iters: usize,
    /// Converged once the gradient norm drops below this.
    pub grad_tol: f64,
    /// Converged once an accepted step changes the objective by less than
    /// `ftol * max(1, |f|)`. Zero disables the test.
    pub ftol: f64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self {
            max_iters: 500,
            grad_tol: 1e-10,
            ftol: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AscentOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub grad_norm: f64,
    pub iters: usize,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Maximizes `f` from `x0`. `f` returns the value and its gradient;
/// non-finite values are treated as infeasible. `project` runs after every
/// accepted step and must leave the objective unchanged (gauge fixing,
/// rescaling of scale-invariant objectives).
pub fn maximize<F, P>(f: F, x0: Vec<f64>, opts: &AscentOptions, project: P) -> AscentOutcome
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
    P: Fn(&mut [f64]),
{
    // internally minimize h = -f
    let eval = |x: &[f64]| {
        let (v, g) = f(x);
        (-v, g.into_iter().map(|gi| -gi).collect::<Vec<_>>())
    };
    let n = x0.len();
    let mut x = x0;
    project(&mut x);
    let (mut h, mut g) = eval(&x);
    let mut inv_hess = identity(n);
    let mut fresh = true;
    let mut iters = 0;
    let mut converged = false;

    while iters < opts.max_iters {
        if !h.is_finite() {
            break;
        }
        if norm(&g) < opts.grad_tol {
            converged = true;
            break;
        }
        iters += 1;
        let mut p = mat_vec(&inv_hess, &g);
        p.iter_mut().for_each(|v| *v = -*v);
        let mut slope = dot(&g, &p);
        if slope.is_nan() || slope >= 0.0 {
            inv_hess = identity(n);
            fresh = true;
            p = g.iter().map(|v| -v).collect();
            slope = dot(&g, &p);
        }

        let Some((x_new, h_new, g_new)) = line_search(&eval, &x, h, &g, &p, slope) else {
            if fresh {
                // steepest descent made no progress: at the optimum to
                // working precision
                converged = norm(&g) < opts.grad_tol.max(1e-7);
                break;
            }
            inv_hess = identity(n);
            fresh = true;
            continue;
        };

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        let dh = (h - h_new).abs();
        let mut x_next = x_new.clone();
        project(&mut x_next);
        let (h_next, g_next) = if x_next != x_new {
            eval(&x_next)
        } else {
            (h_new, g_new)
        };
        if sy > 1e-12 * norm(&s) * norm(&y) && sy > 0.0 {
            if fresh {
                let scale = sy / dot(&y, &y);
                inv_hess.iter_mut().flatten().for_each(|v| *v *= scale);
            }
            bfgs_update(&mut inv_hess, &s, &y, sy);
            fresh = false;
        }
        x = x_next;
        h = h_next;
        g = g_next;

        if opts.ftol > 0.0 && dh <= opts.ftol * h.abs().max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged && h.is_finite() && norm(&g) < opts.grad_tol {
        converged = true;
    }
    AscentOutcome {
        grad_norm: norm(&g),
        x,
        value: -h,
        iters,
        converged,
    }
}

type Eval<'a> = dyn Fn(&[f64]) -> (f64, Vec<f64>) + 'a;

fn line_search(
    eval: &Eval<'_>,
    x: &[f64],
    h: f64,
    g: &[f64],
    p: &[f64],
    slope: f64,
) -> Option<(Vec<f64>, f64, Vec<f64>)> {
    const C1: f64 = 1e-4;
    let g_norm = norm(g);
    let mut alpha = 1.0;
    for _ in 0..60 {
        let trial: Vec<f64> = x.iter().zip(p).map(|(xi, pi)| xi + alpha * pi).collect();
        let (h_t, g_t) = eval(&trial);
        if h_t.is_finite() {
            if h_t <= h + C1 * alpha * slope {
                return Some((trial, h_t, g_t));
            }
            // objective flat to rounding: accept if the gradient shrinks
            let flat = (h_t - h).abs() <= 8.0 * f64::EPSILON * h.abs().max(1e-300);
            if flat && norm(&g_t) < g_norm {
                return Some((trial, h_t, g_t));
            }
        }
        alpha *= 0.5;
    }
    None
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn bfgs_update(h: &mut [Vec<f64>], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let hy = mat_vec(h, y);
    let yhy = dot(y, &hy);
    let rho = 1.0 / sy;
    for i in 0..n {
        for j in 0..n {
            h[i][j] += (1.0 + yhy * rho) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
    }
}

/// Central-difference gradient.
pub fn central_gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], step: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = probe[i];
            probe[i] = orig + step;
            let up = f(&probe);
            probe[i] = orig - step;
            let down = f(&probe);
            probe[i] = orig;
            (up - down) / (2.0 * step)
        })
        .collect()
}

/// `n` points of a Fibonacci lattice on the sphere as `(theta, phi)`.
pub fn fibonacci_sphere(n: usize) -> Vec<(f64, f64)> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let phi = (golden * i as f64).rem_euclid(2.0 * std::f64::consts::PI);
            (z.clamp(-1.0, 1.0).acos(), phi)
        })
        .collect()
}

/// Uniformly distributed point on the sphere as `(theta, phi)`.
pub fn random_sphere_point<R: Rng>(rng: &mut R) -> (f64, f64) {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi = rng.random_range(0.0..2.0 * std::f64::consts::PI);
    (z.acos(), phi)
}

/// Standard normal vector.
pub fn gaussian_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximizes_concave_quadratic() {
        let f = |x: &[f64]| {
            let v = -(x[0] - 1.0).powi(2) - 3.0 * (x[1] + 2.0).powi(2) - 0.5 * x[0] * x[1];
            let g = vec![
                -2.0 * (x[0] - 1.0) - 0.5 * x[1],
                -6.0 * (x[1] + 2.0) - 0.5 * x[0],
            ];
            (v, g)
        };
        let out = maximize(f, vec![5.0, 5.0], &AscentOptions::default(), |_| {});
        assert!(out.converged, "{out:?}");
        let g = f(&out.x).1;
        assert!(norm(&g) < 1e-10);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| {
            let v = (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
            let g = vec![
                -2.0 * (1.0 - x[0]) - 400.0 * x[0] * (x[1] - x[0] * x[0]),
                200.0 * (x[1] - x[0] * x[0]),
            ];
            (-v, g.into_iter().map(|v| -v).collect())
        };
        let opts = AscentOptions {
            max_iters: 2000,
            ..Default::default()
        };
        let out = maximize(f, vec![-1.2, 1.0], &opts, |_| {});
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-8 && (out.x[1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn central_gradient_of_cubic() {
        let f = |x: &[f64]| x[0].powi(3) + x[0] * x[1];
        let g = central_gradient(&f, &[2.0, 3.0], 1e-6);
        assert!((g[0] - 15.0).abs() < 1e-6 && (g[1] - 2.0).abs() < 1e-6);
    }

    #[test]
    fn fibonacci_points_cover_both_hemispheres() {
        let pts = fibonacci_sphere(64);
        assert_eq!(pts.len(), 64);
        assert!(pts
            .iter()
            .all(|&(t, p)| (0.0..=std::f64::consts::PI).contains(&t)
                && (0.0..2.0 * std::f64::consts::PI).contains(&p)));
        let mean_z: f64 = pts.iter().map(|(t, _)| t.cos()).sum::<f64>() / 64.0;
        assert!(mean_z.abs() < 1e-12);
    }
}
