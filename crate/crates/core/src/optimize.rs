//! Local minimisers used by the circumcenter solver: Nelder-Mead simplex
//! descent with restarts, and a finite-difference Levenberg-Marquardt
//! polish for least-squares residual vectors.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy)]
pub(crate) struct NelderMeadConfig {
    pub initial_step: f64,
    /// Stop when the spread of function values falls below this.
    pub f_tol: f64,
    /// Stop when the simplex diameter falls below this.
    pub x_tol: f64,
    pub max_evals: usize,
    pub restarts: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Minimum {
    pub x: DVector<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Nelder-Mead with dimension-adaptive coefficients (Gao & Han), restarted
/// from the best vertex with a shrinking initial simplex.
pub(crate) fn nelder_mead(
    f: &dyn Fn(&DVector<f64>) -> f64,
    x0: &DVector<f64>,
    cfg: &NelderMeadConfig,
) -> Minimum {
    let mut best = Minimum {
        x: x0.clone(),
        value: f(x0),
        evals: 1,
    };
    let mut step = cfg.initial_step;
    for _ in 0..=cfg.restarts {
        if best.evals >= cfg.max_evals {
            break;
        }
        let budget = cfg.max_evals - best.evals;
        let run = nelder_mead_once(f, &best.x, step, cfg.f_tol, cfg.x_tol, budget);
        let improved = run.value < best.value;
        best.evals += run.evals;
        if improved {
            let moved = (&run.x - &best.x).norm();
            best.x = run.x;
            best.value = run.value;
            step = (moved * 0.5).max(cfg.x_tol * 10.0).min(step);
        } else {
            step *= 0.1;
        }
        if best.value <= cfg.f_tol || step < cfg.x_tol {
            break;
        }
    }
    best
}

fn nelder_mead_once(
    f: &dyn Fn(&DVector<f64>) -> f64,
    x0: &DVector<f64>,
    step: f64,
    f_tol: f64,
    x_tol: f64,
    max_evals: usize,
) -> Minimum {
    let n = x0.len();
    let nf = n as f64;
    let alpha = 1.0;
    let beta = 1.0 + 2.0 / nf;
    let gamma = 0.75 - 1.0 / (2.0 * nf);
    let delta = 1.0 - 1.0 / nf;

    let mut simplex: Vec<(DVector<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.clone(), f(x0)));
    for i in 0..n {
        let mut x = x0.clone();
        x[i] += step;
        let v = f(&x);
        simplex.push((x, v));
    }
    let mut evals = n + 1;

    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let f_best = simplex[0].1;
        let f_worst = simplex[n].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| (x - &simplex[0].0).amax())
            .fold(0.0, f64::max);
        if (f_worst - f_best) <= f_tol * f_best.abs().max(f_tol) || diameter <= x_tol {
            break;
        }

        let centroid = simplex[..n]
            .iter()
            .fold(DVector::zeros(n), |acc, (x, _)| acc + x)
            / nf;
        let worst = simplex[n].0.clone();
        let reflected = &centroid + (&centroid - &worst) * alpha;
        let fr = f(&reflected);
        evals += 1;

        if fr < simplex[0].1 {
            let expanded = &centroid + (&reflected - &centroid) * beta;
            let fe = f(&expanded);
            evals += 1;
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < simplex[n].1 {
            let c = &centroid + (&reflected - &centroid) * gamma;
            let v = f(&c);
            (c, v)
        } else {
            let c = &centroid + (&worst - &centroid) * gamma;
            let v = f(&c);
            (c, v)
        };
        evals += 1;
        if fc < simplex[n].1.min(fr) {
            simplex[n] = (contracted, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for entry in simplex.iter_mut().skip(1) {
            let x = &best + (&entry.0 - &best) * delta;
            let v = f(&x);
            *entry = (x, v);
        }
        evals += n;
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, evals }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PolishConfig {
    /// Finite-difference step relative to the problem scale.
    pub fd_step: f64,
    pub scale: f64,
    pub max_iters: usize,
    /// Stop once `||r||` drops below this.
    pub target: f64,
}

/// Levenberg-Marquardt on `r(x)` with a central-difference Jacobian.
///
/// The damping starts small, so on a locally linear residual the first step
/// is close to the minimum-norm Gauss-Newton step: it lands on the nearest
/// point of the zero set.
pub(crate) fn levenberg_marquardt(
    r: &dyn Fn(&DVector<f64>) -> DVector<f64>,
    x0: &DVector<f64>,
    cfg: &PolishConfig,
) -> Minimum {
    let mut x = x0.clone();
    let mut res = r(&x);
    let mut cost = res.norm_squared();
    let mut evals = 1;
    let mut lambda = 1e-10;
    let h = cfg.fd_step * cfg.scale.max(f64::MIN_POSITIVE);
    let n = x.len();

    for _ in 0..cfg.max_iters {
        if cost.sqrt() <= cfg.target {
            break;
        }
        let mut jac = DMatrix::zeros(res.len(), n);
        for j in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let col = (r(&xp) - r(&xm)) / (2.0 * h);
            jac.set_column(j, &col);
        }
        evals += 2 * n;
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let grad = &jt * &res;
        let diag_scale = jtj.diagonal().max().max(f64::MIN_POSITIVE);

        let mut accepted = false;
        for _ in 0..30 {
            let mut damped = jtj.clone();
            for k in 0..n {
                damped[(k, k)] += lambda * diag_scale;
            }
            let Some(step) = damped.lu().solve(&(-&grad)) else {
                lambda *= 10.0;
                continue;
            };
            let trial = &x + &step;
            let trial_res = r(&trial);
            evals += 1;
            let trial_cost = trial_res.norm_squared();
            if trial.iter().all(|v| v.is_finite()) && trial_cost.is_finite() && trial_cost < cost {
                x = trial;
                res = trial_res;
                cost = trial_cost;
                lambda = (lambda * 0.1).max(1e-14);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    Minimum {
        x,
        value: cost,
        evals,
    }
}
