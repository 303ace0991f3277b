//! Nelder–Mead simplex search with dimension-adaptive coefficients.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub initial_step: f64,
    pub max_evals: usize,
    /// Stop once `f_max − f_min` over the simplex falls below this.
    pub f_tol: f64,
    /// Stop once every vertex is within this distance of the best one.
    pub x_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.25,
            max_evals: 20_000,
            f_tol: 1e-14,
            x_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Minimize `f` from `x0`. Coefficients follow Gao & Han so that expansion
/// and contraction do not stall as the dimension grows.
pub fn nelder_mead<F>(f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    if n == 0 {
        return SimplexResult {
            x: Vec::new(),
            value: f(x0),
            evals: 1,
        };
    }
    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let v = eval(&x);
        simplex.push((x, v));
    }

    let point = |c: &[f64], d: &[f64], t: f64| -> Vec<f64> {
        c.iter().zip(d).map(|(a, b)| a + t * (b - a)).collect()
    };

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        let size = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if evals.get() >= opts.max_evals || (spread <= opts.f_tol && size <= opts.x_tol) || size == 0.0 {
            break;
        }

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / nf;
            }
        }
        let worst = simplex[n].clone();

        // reflection through the centroid: c + α(c − x_worst)
        let xr = point(&centroid, &worst.0, -alpha);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = point(&centroid, &worst.0, -alpha * gamma);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = point(&centroid, &xr, rho);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = point(&centroid, &worst.0, rho);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < fr.min(worst.1) {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = point(&best, &vertex.0, sigma);
            let v = eval(&x);
            *vertex = (x, v);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    SimplexResult {
        x,
        value,
        evals: evals.get(),
    }
}
