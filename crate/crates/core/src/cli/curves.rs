//! Data series for plotting.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

use serde::{Deserialize, Serialize};

use crate::angle_sets::{beta_of, beta_pair, gamma0, proj_diam, sphere_cap_diam};
use crate::closure::functions::{case2_recursion, case4_gamma, case5_recursion};
use crate::error::{domain, Result};
use crate::linalg::Angle;

pub const SERIES: [&str; 8] = ["beta", "h", "gamma0", "proj-diam", "case4-gamma", "beta-pair", "case2", "case5"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// `n` points; an explicit range includes its endpoints, the default range is
/// the function's open domain sampled at interior points.
fn nodes(range: Option<(f64, f64)>, default: (f64, f64), n: usize) -> Result<Vec<f64>> {
    match range {
        Some((lo, hi)) => {
            if !(lo < hi) {
                return Err(domain("curves", format!("empty range [{lo}, {hi}]")));
            }
            Ok((0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect())
        }
        None => {
            let (lo, hi) = default;
            Ok((0..n).map(|k| lo + (hi - lo) * (k + 1) as f64 / (n + 1) as f64).collect())
        }
    }
}

/// `None` for an unknown name. `alpha` fixes the cap radius for `h` and `proj-diam`.
pub fn series(which: &str, range: Option<(f64, f64)>, n: usize, alpha: Option<f64>) -> Result<Option<Series>> {
    let mk = |cols: &[&str], rows: Vec<Vec<f64>>| Series {
        name: which.to_string(),
        columns: cols.iter().map(|c| c.to_string()).collect(),
        rows,
    };
    let s = match which {
        "beta" => {
            let xs = nodes(range, (0.0, FRAC_PI_2), n)?;
            mk(&["alpha", "beta"], xs.into_iter().map(|a| vec![a, beta_of(a)]).collect())
        }
        "h" => {
            let a = alpha.unwrap_or(FRAC_PI_6);
            let rows = nodes(range, (0.0, 2.0 * a), n)?
                .into_iter()
                .map(|g| Ok(vec![g, sphere_cap_diam(Angle(a), Angle(g))?.0]))
                .collect::<Result<_>>()?;
            mk(&["gamma", "h"], rows)
        }
        "gamma0" => {
            let rows = nodes(range, (0.0, FRAC_PI_2), n)?
                .into_iter()
                .map(|a| Ok(vec![a, gamma0(Angle(a))?.0]))
                .collect::<Result<_>>()?;
            mk(&["alpha", "gamma0"], rows)
        }
        "proj-diam" => {
            let a = alpha.unwrap_or(FRAC_PI_6);
            if !(a > 0.0 && a < FRAC_PI_4) {
                return Err(domain("curves", "proj-diam needs --alpha in (0, pi/4)"));
            }
            let rows = nodes(range, (0.0, 2.0 * a), n)?
                .into_iter()
                .map(|g| Ok(vec![g, proj_diam(Angle(a), Angle(g))?.0]))
                .collect::<Result<_>>()?;
            mk(&["gamma", "diam"], rows)
        }
        "case4-gamma" => {
            let rows = nodes(range, (0.0, FRAC_PI_3), n)?
                .into_iter()
                .map(|a| Ok(vec![a, case4_gamma(Angle(a))?.0]))
                .collect::<Result<_>>()?;
            mk(&["alpha", "gamma"], rows)
        }
        "beta-pair" => {
            let rows = nodes(range, (FRAC_PI_3, FRAC_PI_2), n)?
                .into_iter()
                .map(|a| {
                    let (b1, b2) = beta_pair(Angle(a))?;
                    Ok(vec![a, b1.0, b2.0])
                })
                .collect::<Result<_>>()?;
            mk(&["alpha", "beta1", "beta2"], rows)
        }
        "case2" => {
            let rows = case2_recursion(n).into_iter().enumerate().map(|(k, a)| vec![(k + 1) as f64, a.0]).collect();
            mk(&["n", "alpha"], rows)
        }
        "case5" => {
            let rows = case5_recursion(n).into_iter().enumerate().map(|(k, a)| vec![(k + 1) as f64, a.0]).collect();
            mk(&["n", "alpha"], rows)
        }
        _ => return Ok(None),
    };
    Ok(Some(s))
}
