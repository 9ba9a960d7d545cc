//! Closed-form fidelity and linear-entropy estimates for symmetric Pauli
//! channels, comparing the maximally entangled input with `|00⟩`.

use crate::error::{Error, Result};
use crate::tolerances;

/// Number of grid cells scanned for a sign change before bisection.
const CROSSING_SCAN_CELLS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticEstimates {
    /// `C_{mn} = Σ_i p_{m+i} p_{n+i}`, row-major `d × d`.
    pub c_matrix: Vec<f64>,
    pub f_me: f64,
    pub f_s: f64,
    pub r_me: f64,
    pub r_s: f64,
    pub mu_cross: Option<f64>,
}

fn validate_column(d: usize, p: &[f64]) -> Result<()> {
    if d < 2 || p.len() != d {
        return Err(Error::InvalidArgument(format!(
            "need d ≥ 2 and {d} probabilities, got {}",
            p.len()
        )));
    }
    if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::BadProbabilities("negative or non-finite entry".into()));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0 / d as f64).abs() > tolerances::PROBABILITY_SUM {
        return Err(Error::BadProbabilities(format!("column sums to {sum}, expected 1/{d}")));
    }
    Ok(())
}

pub fn c_matrix(p: &[f64]) -> Vec<f64> {
    let d = p.len();
    let mut c = vec![0.0; d * d];
    for m in 0..d {
        for n in 0..d {
            c[m * d + n] = (0..d).map(|i| p[(m + i) % d] * p[(n + i) % d]).sum();
        }
    }
    c
}

struct Coefficients {
    d: f64,
    p0: f64,
    sum_p2: f64,
    sum_p3: f64,
    sum_c2: f64,
    c00: f64,
}

impl Coefficients {
    fn new(d: usize, p: &[f64]) -> (Self, Vec<f64>) {
        let c = c_matrix(p);
        let coeffs = Self {
            d: d as f64,
            p0: p[0],
            sum_p2: p.iter().map(|x| x * x).sum(),
            sum_p3: p.iter().map(|x| x * x * x).sum(),
            sum_c2: c.iter().map(|x| x * x).sum(),
            c00: c[0],
        };
        (coeffs, c)
    }

    fn f_me(&self, mu: f64) -> f64 {
        mu + (1.0 - mu) * self.d * self.sum_p2
    }

    fn f_s(&self, mu: f64) -> f64 {
        (1.0 - mu) * self.d * self.d * self.p0 * self.p0 + mu * self.d * self.p0
    }

    fn r_me(&self, mu: f64) -> f64 {
        let d = self.d;
        1.0 - ((1.0 - mu).powi(2) * d * d * self.sum_c2 + mu * mu + 2.0 * mu * (1.0 - mu) * d * self.c00)
    }

    fn r_s(&self, mu: f64) -> f64 {
        let d = self.d;
        1.0 - ((1.0 - mu).powi(2) * d.powi(4) * self.c00 * self.c00
            + mu * mu * d * d * self.c00
            + 2.0 * mu * (1.0 - mu) * d.powi(3) * self.sum_p3)
    }

    fn r_gap(&self, mu: f64) -> f64 {
        self.r_me(mu) - self.r_s(mu)
    }

    fn crossing(&self) -> Option<f64> {
        let n = CROSSING_SCAN_CELLS;
        let mut prev_mu = 0.0;
        let mut prev = self.r_gap(0.0);
        for k in 1..=n {
            let mu = k as f64 / n as f64;
            let cur = self.r_gap(mu);
            if prev != 0.0 && cur != 0.0 && (prev < 0.0) != (cur < 0.0) {
                return Some(self.bisect(prev_mu, mu, prev < 0.0));
            }
            if cur == 0.0 && k < n {
                let next = self.r_gap((k + 1) as f64 / n as f64);
                if prev != 0.0 && next != 0.0 && (prev < 0.0) != (next < 0.0) {
                    return Some(mu);
                }
            }
            prev_mu = mu;
            prev = cur;
        }
        None
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, lo_negative: bool) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let g = self.r_gap(mid);
            if g == 0.0 {
                return mid;
            }
            if (g < 0.0) == lo_negative {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Fidelities and linear entropies at `mu` for the column `p` (`Σ p = 1/d`).
pub fn analytic_estimates(d: usize, p: &[f64], mu: f64) -> Result<AnalyticEstimates> {
    validate_column(d, p)?;
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::InvalidArgument(format!("mu = {mu} outside [0, 1]")));
    }
    let (k, c) = Coefficients::new(d, p);
    Ok(AnalyticEstimates {
        c_matrix: c,
        f_me: k.f_me(mu),
        f_s: k.f_s(mu),
        r_me: k.r_me(mu),
        r_s: k.r_s(mu),
        mu_cross: k.crossing(),
    })
}

/// Value of `mu` strictly inside `(0, 1)` where the linear entropies of the
/// two inputs cross, or `None` if they never change order there.
pub fn estimate_mu_c_crossing(d: usize, p: &[f64]) -> Result<Option<f64>> {
    validate_column(d, p)?;
    Ok(Coefficients::new(d, p).0.crossing())
}
