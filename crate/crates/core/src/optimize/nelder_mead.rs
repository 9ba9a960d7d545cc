//! Nelder–Mead simplex search with dimension-adaptive coefficients
//! (Gao & Han): reflection 1, expansion `1 + 2/n`, contraction
//! `0.75 − 1/(2n)`, shrink `1 − 1/n`.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iters: usize,
    /// Stop once every vertex is within `xtol` (max-norm) of the best one.
    pub xtol: f64,
    /// Stop once the objective spread over the simplex is below `ftol`.
    pub ftol: f64,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
}

#[derive(Debug, Clone)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn eval<F: FnMut(&[f64]) -> f64>(f: &mut F, x: &[f64]) -> f64 {
    let v = f(x);
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

pub fn minimize<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexOutcome {
    let n = x0.len();
    assert!(n >= 1, "empty search space");
    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = if n >= 2 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += opts.initial_step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| eval(&mut f, p)).collect();
    let mut order: Vec<usize> = (0..=n).collect();

    let mut iterations = 0;
    let mut converged = false;
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    loop {
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        let best = order[0];
        let worst = order[n];
        let spread = vals[worst] - vals[best];
        let diameter = order[1..]
            .iter()
            .map(|&i| {
                pts[i]
                    .iter()
                    .zip(&pts[best])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < opts.xtol || spread < opts.ftol {
            converged = true;
            break;
        }
        if iterations >= opts.max_iters {
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &i in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&pts[i]) {
                *c += x / nf;
            }
        }
        let second_worst = vals[order[n - 1]];

        for k in 0..n {
            trial[k] = centroid[k] + alpha * (centroid[k] - pts[worst][k]);
        }
        let fr = eval(&mut f, &trial);

        if fr < vals[best] {
            for k in 0..n {
                trial2[k] = centroid[k] + gamma * (trial[k] - centroid[k]);
            }
            let fe = eval(&mut f, &trial2);
            if fe < fr {
                pts[worst].copy_from_slice(&trial2);
                vals[worst] = fe;
            } else {
                pts[worst].copy_from_slice(&trial);
                vals[worst] = fr;
            }
            continue;
        }
        if fr < second_worst {
            pts[worst].copy_from_slice(&trial);
            vals[worst] = fr;
            continue;
        }
        // Contraction: outside if the reflection improved on the worst vertex.
        let outside = fr < vals[worst];
        for k in 0..n {
            trial2[k] = if outside {
                centroid[k] + rho * (trial[k] - centroid[k])
            } else {
                centroid[k] + rho * (pts[worst][k] - centroid[k])
            };
        }
        let fc = eval(&mut f, &trial2);
        if (outside && fc <= fr) || (!outside && fc < vals[worst]) {
            pts[worst].copy_from_slice(&trial2);
            vals[worst] = fc;
            continue;
        }
        // Shrink towards the best vertex.
        let anchor = pts[best].clone();
        for &i in &order[1..] {
            for (x, a) in pts[i].iter_mut().zip(&anchor) {
                *x = a + sigma * (*x - a);
            }
            vals[i] = eval(&mut f, &pts[i]);
        }
    }

    let best = order[0];
    SimplexOutcome {
        x: pts[best].clone(),
        fx: vals[best],
        iterations,
        converged,
    }
}
