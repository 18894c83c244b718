//! Recursions, transcendental roots and the closed forms the engine leans on.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::angle_sets::{beta_of, beta_pair, proj_diam};
use crate::error::{domain, Result};
use crate::linalg::Angle;
use crate::oracle::{bisect, BISECT_TOL};

/// Ties between ordering quantities closer than this count as equal.
pub const ORDER_TIE_TOL: f64 = 1e-10;

/// `α₁ = π/4`, then `β(αₙ) − αₙ = αₙ₋₁` on `(π/4, π/2)`.
pub fn case2_recursion(n_max: usize) -> Vec<Angle> {
    let mut out = Vec::with_capacity(n_max);
    if n_max == 0 {
        return out;
    }
    let mut prev = FRAC_PI_4;
    out.push(Angle(prev));
    for _ in 1..n_max {
        let target = prev;
        let next = bisect(|a| beta_of(a) - a - target, prev, FRAC_PI_2, BISECT_TOL).unwrap_or(FRAC_PI_2);
        out.push(Angle(next));
        prev = next;
    }
    out
}

/// `α₁ = 5π/8`, `αₙ = π − αₙ₋₁/2`.
pub fn case5_recursion(n_max: usize) -> Vec<Angle> {
    let mut out = Vec::with_capacity(n_max);
    let mut a = 5.0 * PI / 8.0;
    for _ in 0..n_max {
        out.push(Angle(a));
        a = PI - a / 2.0;
    }
    out
}

/// Closed form of the same sequence, `n ≥ 1`.
pub fn case5_explicit(n: usize) -> Angle {
    assert!(n >= 1, "sequence starts at n = 1");
    let a1 = 5.0 * PI / 8.0;
    let sign = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 };
    let mut s = sign * a1 / 2f64.powi(n as i32 - 1);
    for j in 0..n.saturating_sub(1) {
        let sj = if j % 2 == 0 { 1.0 } else { -1.0 };
        s += sj * PI / 2f64.powi(j as i32);
    }
    Angle(s)
}

/// `2π − β(α) − α`, the larger member of the pair produced when `α + β(α) > π`.
pub fn wrap_companion(alpha: f64) -> f64 {
    TAU - beta_of(alpha) - alpha
}

/// The root of `2π − β(α) − α = 2α` on `[0, π/2]`.
pub fn solve_alpha_check() -> Angle {
    let r = bisect(|a| wrap_companion(a) - 2.0 * a, 0.0, FRAC_PI_2, BISECT_TOL).expect("sign change on [0, pi/2]");
    Angle(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialConstants {
    pub alpha_sqrt5: Angle,
    pub alpha_sqrt17: Angle,
}

/// Roots of `3β₁ = 2π − β₂` and of `case4_gamma(α) = π/2`, found by bisection.
pub fn special_constants() -> SpecialConstants {
    let f = |a: f64| {
        let (b1, b2) = beta_pair(Angle(a)).expect("inside (pi/3, pi/2)");
        3.0 * b1.0 - (TAU - b2.0)
    };
    let a5 = bisect(f, FRAC_PI_3 + 1e-9, 1.3, BISECT_TOL).expect("sign change");
    // the unsigned gamma only touches pi/2, so bisect the signed one
    let a17 = bisect(|a| case4_gamma_signed(a) - FRAC_PI_2, 1e-6, FRAC_PI_3, BISECT_TOL).expect("sign change");
    SpecialConstants { alpha_sqrt5: Angle(a5), alpha_sqrt17: Angle(a17) }
}

/// `4c + 4/(c+1) − 5` with `c = cos α`.
pub fn case4_quantity(c: f64) -> f64 {
    4.0 * c + 4.0 / (c + 1.0) - 5.0
}

/// `arccos(4c + 4/(c+1) − 5)`, continuous through `π/2`.
pub fn case4_gamma_signed(alpha: f64) -> f64 {
    case4_quantity(alpha.cos()).clamp(-1.0, 1.0).acos()
}

/// Line angle induced by doubling the section angle in a three-dimensional real space.
pub fn case4_gamma(alpha: Angle) -> Result<Angle> {
    let a = alpha.0;
    if !(a > 0.0 && a < FRAC_PI_3) {
        return Err(domain("case4_gamma", format!("alpha {a} outside (0, pi/3)")));
    }
    Ok(Angle(case4_quantity(a.cos()).abs().min(1.0).acos()))
}

/// `2c² − 1 < |4c + 4/(c+1) − 5| < c`.
pub fn case4_chain_holds(c: f64) -> bool {
    let q = case4_quantity(c).abs();
    2.0 * c * c - 1.0 < q && q < c
}

/// Sphere angle in `[v]^⊥` matching line angle `α` on `[v]^α`.
pub fn section_beta(alpha: f64) -> f64 {
    let c = alpha.cos();
    (c / (1.0 + c)).clamp(-1.0, 1.0).acos()
}

/// Line angle between `[cos α v + sin α u₁]` and `[cos α v + sin α u₂]` when `∢(u₁, u₂) = δ`.
pub fn section_lift(alpha: f64, delta: f64) -> f64 {
    let (s, c) = alpha.sin_cos();
    (c * c + delta.cos() * s * s).abs().min(1.0).acos()
}

/// The `γ ∈ (α, 2α)` where the complex cap intersection has diameter exactly `α`.
pub fn proj_gamma0(alpha: Angle) -> Result<Angle> {
    let a = alpha.0;
    if !(a > 0.0 && a < FRAC_PI_4) {
        return Err(domain("proj_gamma0", format!("alpha {a} outside (0, pi/4)")));
    }
    let f = |g: f64| match proj_diam(Angle(a), Angle(g)) {
        Ok(d) => d.0 - a,
        Err(_) => -a,
    };
    Ok(Angle(bisect(f, a, 2.0 * a, BISECT_TOL)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ordering {
    O1,
    O2,
    O3,
    O4,
    O5,
    O6,
}

impl Ordering {
    pub const ALL: [Ordering; 6] = [Ordering::O1, Ordering::O2, Ordering::O3, Ordering::O4, Ordering::O5, Ordering::O6];

    /// Size of the union-intersection that singles out the preserved angle.
    pub fn witness_card(self) -> usize {
        match self {
            Ordering::O1 => 3,
            Ordering::O2 | Ordering::O5 => 1,
            Ordering::O3 => 5,
            Ordering::O4 | Ordering::O6 => 2,
        }
    }

    /// `true` when the singled-out angle is `2β₁`, otherwise it is `2π − β₁ − β₂`.
    pub fn picks_double(self) -> bool {
        matches!(self, Ordering::O1 | Ordering::O2 | Ordering::O3 | Ordering::O5)
    }
}

/// `[2β₁, 2π − β₁ − β₂, β₂ − β₁, 2π − 2β₂]`.
pub fn ordering_quantities(alpha: Angle) -> Result<[f64; 4]> {
    let (b1, b2) = beta_pair(alpha)?;
    let (b1, b2) = (b1.0, b2.0);
    Ok([2.0 * b1, TAU - b1 - b2, b2 - b1, TAU - 2.0 * b2])
}

/// `dim` is the dimension of the whole space; it only separates O3 from O4.
pub fn ordering_classify(alpha: Angle, dim: usize) -> Result<Ordering> {
    let [q1, q2, q3, q4] = ordering_quantities(alpha)?;
    if (q1 - q2).abs() <= ORDER_TIE_TOL || (q3 - q4).abs() <= ORDER_TIE_TOL {
        return Ok(Ordering::O1);
    }
    Ok(match (q1 > q2, q3 > q4) {
        (true, true) => Ordering::O2,
        (true, false) => Ordering::O5,
        (false, true) if dim == 4 => Ordering::O3,
        (false, true) => Ordering::O4,
        (false, false) => Ordering::O6,
    })
}

/// Sphere angle singled out by the ordering.
pub fn ordering_angle(alpha: Angle, ordering: Ordering) -> Result<f64> {
    let [q1, q2, _, _] = ordering_quantities(alpha)?;
    Ok(if ordering.picks_double() { q1 } else { q2 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub grid_n: usize,
    /// Smallest forward-difference slope of `β(α) − α`.
    pub min_slope: f64,
    /// Smallest central-difference `dβ/dα` at interior points.
    pub min_derivative: f64,
    /// Largest value of `β(α) − 2α` at interior points.
    pub max_excess: f64,
    pub ok: bool,
}

pub fn verify_beta_monotonicity(grid_n: usize) -> Result<MonotonicityReport> {
    if grid_n < 10 {
        return Err(domain("verify_beta_monotonicity", "grid_n must be at least 10"));
    }
    let step = FRAC_PI_2 / grid_n as f64;
    let h = step * 1e-3;
    let xs: Vec<f64> = (0..=grid_n).map(|i| i as f64 * step).collect();
    let mut min_slope = f64::INFINITY;
    for w in xs.windows(2) {
        let d = (beta_of(w[1]) - w[1]) - (beta_of(w[0]) - w[0]);
        min_slope = min_slope.min(d / step);
    }
    let mut min_derivative = f64::INFINITY;
    let mut max_excess = f64::NEG_INFINITY;
    for &a in &xs[1..grid_n] {
        min_derivative = min_derivative.min((beta_of(a + h) - beta_of(a - h)) / (2.0 * h));
        max_excess = max_excess.max(beta_of(a) - 2.0 * a);
    }
    let ok = min_slope > 0.0 && min_derivative > 1.0 - 1e-6 && max_excess < 0.0;
    Ok(MonotonicityReport { grid_n, min_slope, min_derivative, max_excess, ok })
}
