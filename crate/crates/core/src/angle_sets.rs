//! Level sets `x^(α)` on the sphere and `[v]^α` in projective space: how two of
//! them intersect, explicit parametrizations of the intersections, and diameters.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{
    dot, line_angle_raw, orthonormal_extend_in, sphere_angle_raw, Angle, Field, Line, UnitVector, C64,
};

/// Absolute tolerance used when choosing a branch of a case table.
pub const BRANCH_TOL: f64 = 1e-9;
/// Lines closer than this are merged in `dim3_real_intersection`.
pub const MERGE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cardinality {
    Empty,
    One,
    Finite(usize),
    Infinite,
}

impl Cardinality {
    pub fn finite(n: usize) -> Cardinality {
        match n {
            0 => Cardinality::Empty,
            1 => Cardinality::One,
            n => Cardinality::Finite(n),
        }
    }

    pub fn class(self) -> CardClass {
        match self {
            Cardinality::Empty => CardClass::Empty,
            Cardinality::One => CardClass::One,
            _ => CardClass::Many,
        }
    }
}

/// Coarse cardinality, the resolution at which sampling can corroborate a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CardClass {
    Empty,
    One,
    Many,
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= BRANCH_TOL
}

fn in_open(x: f64, lo: f64, hi: f64) -> bool {
    x > lo && x < hi && x.is_finite()
}

/// Cardinality of `x^(α) ∩ y^(β)` on the unit sphere, where `γ = ∢(x, y)`.
pub fn sphere_card(alpha: Angle, beta: Angle, gamma: Angle, dim: usize) -> Result<Cardinality> {
    let (a, b, g) = (alpha.0, beta.0, gamma.0);
    if !(in_open(a, 0.0, PI) && in_open(b, 0.0, PI) && a <= b + BRANCH_TOL) {
        return Err(domain("sphere_card", format!("need 0 < alpha <= beta < pi, got {a}, {b}")));
    }
    if !(g > 0.0 && g <= PI + BRANCH_TOL) {
        return Err(domain("sphere_card", format!("gamma {g} outside (0, pi]")));
    }
    if dim < 3 {
        return Err(domain("sphere_card", "dim must be at least 3"));
    }
    let (empty, one) = if near(a, b) {
        if near(a, FRAC_PI_2) {
            (false, false)
        } else if a < FRAC_PI_2 {
            (g > 2.0 * a + BRANCH_TOL, near(g, 2.0 * a))
        } else {
            let m = 2.0 * PI - 2.0 * a;
            (g > m + BRANCH_TOL, near(g, m))
        }
    } else {
        let (s, d) = (a + b, b - a);
        if near(s, PI) {
            (g < d - BRANCH_TOL, near(g, d))
        } else {
            let upper = if s < PI { s } else { 2.0 * PI - s };
            (g > upper + BRANCH_TOL || g < d - BRANCH_TOL, near(g, upper) || near(g, d))
        }
    };
    Ok(if one {
        Cardinality::One
    } else if empty {
        Cardinality::Empty
    } else if dim > 3 || near(g, PI) {
        Cardinality::Infinite
    } else {
        // two circles on the 2-sphere meet in at most two points
        Cardinality::Finite(2)
    })
}

/// Cardinality of `[v]^α ∩ [w]^β` in projective space, where `γ = ∡([v], [w])`.
pub fn proj_card(alpha: Angle, beta: Angle, gamma: Angle, dim: usize, field: Field) -> Result<Cardinality> {
    let (a, b, g) = (alpha.0, beta.0, gamma.0);
    if !(a > 0.0 && a <= b + BRANCH_TOL && b <= FRAC_PI_2 + BRANCH_TOL) {
        return Err(domain("proj_card", format!("need 0 < alpha <= beta <= pi/2, got {a}, {b}")));
    }
    if !(g > 0.0 && g <= FRAC_PI_2 + BRANCH_TOL) {
        return Err(domain("proj_card", format!("gamma {g} outside (0, pi/2]")));
    }
    if dim < 3 {
        return Err(domain("proj_card", "dim must be at least 3"));
    }
    if near(a, FRAC_PI_2) {
        return Ok(if dim == 3 { Cardinality::One } else { Cardinality::Infinite });
    }
    if g < b - a - BRANCH_TOL || g > a + b + BRANCH_TOL {
        return Ok(Cardinality::Empty);
    }
    if near(g, b - a) || (near(g, a + b) && a + b < FRAC_PI_2 - BRANCH_TOL) {
        return Ok(Cardinality::One);
    }
    if near(g, FRAC_PI_2) && near(a + b, FRAC_PI_2) {
        return Ok(match field {
            Field::Complex => Cardinality::Infinite,
            Field::Real => Cardinality::Finite(2),
        });
    }
    if field == Field::Complex || dim > 3 {
        return Ok(Cardinality::Infinite);
    }
    Ok(Cardinality::finite(real_dim3_count(a, b, g).max(2)))
}

/// Lines `[cos α e1 + sin α (s e2 ± √(1−s²) e3)]` with `|A + B s| = cos β`.
fn real_dim3_count(a: f64, b: f64, g: f64) -> usize {
    let (ca, cb) = (a.cos(), b.cos());
    let big_a = ca * g.cos();
    let big_b = a.sin() * g.sin();
    let mut roots: Vec<f64> = Vec::new();
    for s in [(cb - big_a) / big_b, (-cb - big_a) / big_b] {
        if s.abs() <= 1.0 + BRANCH_TOL && !roots.iter().any(|r| (r - s).abs() <= BRANCH_TOL) {
            roots.push(s.clamp(-1.0, 1.0));
        }
    }
    roots.iter().map(|s| if s.abs() >= 1.0 - BRANCH_TOL { 1 } else { 2 }).sum()
}

/// `arccos(4cos²α/(cos α + 1) − 1)` on `[0, π/2]`, evaluated in half-angle form.
pub fn beta_of(alpha: f64) -> f64 {
    let c = alpha.cos();
    let s = (alpha / 2.0).sin();
    let y = (2.0 * s * s * (1.0 + 2.0 * c) / (1.0 + c)).max(0.0).sqrt();
    let x = c * (2.0 / (1.0 + c)).sqrt();
    2.0 * y.atan2(x)
}

/// The unique `γ₀ ∈ (0, 2α)` at which the cap intersection has diameter `α`.
pub fn gamma0(alpha: Angle) -> Result<Angle> {
    if !in_open(alpha.0, 0.0, FRAC_PI_2) {
        return Err(domain("gamma0", format!("alpha {} outside (0, pi/2)", alpha.0)));
    }
    Ok(Angle(beta_of(alpha.0)))
}

/// Diameter of `x^(α) ∩ y^(α)` when `∢(x, y) = γ`.
pub fn sphere_cap_diam(alpha: Angle, gamma: Angle) -> Result<Angle> {
    let (a, g) = (alpha.0, gamma.0);
    if !in_open(a, 0.0, FRAC_PI_2) || !in_open(g, 0.0, 2.0 * a) {
        return Err(domain("sphere_cap_diam", format!("need 0 < gamma < 2 alpha < pi, got {a}, {g}")));
    }
    let h = g / 2.0;
    let y = ((a + h).sin() * (a - h).sin()).max(0.0).sqrt();
    let x = a.cos();
    // cos(h) cancels between the two atan2 arguments
    Ok(Angle(2.0 * y.atan2(x)))
}

/// Diameter of `[v]^α ∩ [w]^α` over the complex field when `∡([v], [w]) = γ`.
pub fn proj_diam(alpha: Angle, gamma: Angle) -> Result<Angle> {
    let (a, g) = (alpha.0, gamma.0);
    if !in_open(a, 0.0, FRAC_PI_4) {
        return Err(domain("proj_diam", format!("alpha {a} outside (0, pi/4)")));
    }
    if !in_open(g, 0.0, 2.0 * a) {
        return Err(domain("proj_diam", format!("gamma {g} outside (0, 2 alpha)")));
    }
    let h = g / 2.0;
    let y = ((a + h).sin() * (a - h).sin()).max(0.0).sqrt();
    let x = ((a + h).cos() * (a - h).cos()).max(0.0).sqrt();
    Ok(Angle(2.0 * y.atan2(x)))
}

/// Representatives `v, w` of two distinct lines with `<v, w>` real and non-negative.
fn aligned_pair(a: &UnitVector, b: &UnitVector) -> (UnitVector, UnitVector) {
    let p = dot(b.comps(), a.comps());
    let ph = if p.norm() > 1e-300 { p.conj() / p.norm() } else { C64::new(1.0, 0.0) };
    let w = UnitVector::from_parts_normalized(b.field(), b.comps().iter().map(|z| z * ph).collect());
    (a.clone(), w)
}

/// Bisector frame: `x = cos(γ/2) e1 + sin(γ/2) e2`, `y = cos(γ/2) e1 − sin(γ/2) e2`.
fn bisector_frame(x: &UnitVector, y: &UnitVector) -> Result<(UnitVector, UnitVector, Vec<UnitVector>)> {
    let field = x.field();
    let sum: Vec<C64> = x.comps().iter().zip(y.comps()).map(|(a, b)| a + b).collect();
    let diff: Vec<C64> = x.comps().iter().zip(y.comps()).map(|(a, b)| a - b).collect();
    let e1 = crate::linalg::Vector::from_parts(field, sum).normalize()?;
    let e2 = crate::linalg::Vector::from_parts(field, diff).normalize()?;
    let rest = orthonormal_extend_in(field, &[e1.clone(), e2.clone()], x.dim())?;
    Ok((e1, e2, rest))
}

fn combine(field: Field, terms: &[(C64, &UnitVector)]) -> UnitVector {
    let dim = terms[0].1.dim();
    let mut comps = vec![C64::new(0.0, 0.0); dim];
    for (c, u) in terms {
        for (z, w) in comps.iter_mut().zip(u.comps()) {
            *z += c * w;
        }
    }
    UnitVector::from_parts_normalized(field, comps)
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub enum CapKind {
    /// `x^(α) ∩ y^(α)` on the sphere.
    Sphere,
    /// `[v]^α ∩ [w]^α` over C for `α < π/4`, parametrized by `(ε, λ = ±i, e3)`.
    Projective,
    /// The circle `{[cos α v + λ sin α w] : |λ| = 1}` for orthogonal `v, w`.
    OrthogonalCircle,
}

/// An intersection of two equal-radius level sets, kept as a frame plus the
/// closed-form coordinates of its points.
#[derive(Clone, Debug)]
pub struct CapIntersection {
    pub kind: CapKind,
    pub alpha: f64,
    pub gamma: f64,
    pub centers: (UnitVector, UnitVector),
    pub e1: UnitVector,
    pub e2: UnitVector,
    pub complement: Vec<UnitVector>,
}

impl CapIntersection {
    pub fn field(&self) -> Field {
        self.e1.field()
    }

    pub fn dim(&self) -> usize {
        self.e1.dim()
    }

    /// Distance of `u` from each defining level set, whichever is larger.
    pub fn residual(&self, u: &UnitVector) -> f64 {
        let (x, y) = &self.centers;
        let ang = |a: &UnitVector, b: &UnitVector| match self.kind {
            CapKind::Sphere => sphere_angle_raw(a.comps(), b.comps()),
            _ => line_angle_raw(a.comps(), b.comps()),
        };
        (ang(u, x) - self.alpha).abs().max((ang(u, y) - self.alpha).abs())
    }

    /// Diameter predicted by the closed forms.
    pub fn closed_form_diameter(&self) -> Result<Angle> {
        match self.kind {
            CapKind::Sphere => sphere_cap_diam(Angle(self.alpha), Angle(self.gamma)),
            CapKind::Projective => proj_diam(Angle(self.alpha), Angle(self.gamma)),
            CapKind::OrthogonalCircle => Ok(Angle(FRAC_PI_2)),
        }
    }

    /// Sphere point for a unit `e3` orthogonal to `e1, e2`.
    pub fn sphere_point(&self, e3: &UnitVector) -> UnitVector {
        let a = self.alpha.cos() / (self.gamma / 2.0).cos();
        let r = (1.0 - a * a).max(0.0).sqrt();
        combine(self.field(), &[(re(a), &self.e1), (re(r), e3)])
    }

    /// Projective point for parameters `ε ∈ [0, π/2]`, `λ = ±i` and unit `e3 ⊥ e1, e2`.
    pub fn projective_point(&self, eps: f64, lambda: C64, e3: &UnitVector) -> UnitVector {
        let (s, c) = (self.gamma / 2.0).sin_cos();
        let ca = self.alpha.cos();
        let den = c * c - s * s * eps.cos().powi(2);
        let first = ((ca * ca - s * s * eps.cos().powi(2)) / den).max(0.0).sqrt();
        let rest = ((c * c - ca * ca) / den).max(0.0).sqrt();
        combine(
            self.field(),
            &[(re(first), &self.e1), (lambda * rest * eps.cos(), &self.e2), (re(rest * eps.sin()), e3)],
        )
    }

    /// Roughly `n` points of the set, from the closed-form parametrization.
    pub fn materialize(&self, n: usize) -> Vec<UnitVector> {
        let n = n.max(4);
        match self.kind {
            CapKind::Sphere => {
                if self.complement.len() == 1 {
                    let f3 = &self.complement[0];
                    vec![self.sphere_point(f3), self.sphere_point(&f3.neg())]
                } else {
                    let (f3, f4) = (&self.complement[0], &self.complement[1]);
                    (0..n)
                        .map(|k| {
                            let t = 2.0 * PI * k as f64 / n as f64;
                            let e3 = combine(self.field(), &[(re(t.cos()), f3), (re(t.sin()), f4)]);
                            self.sphere_point(&e3)
                        })
                        .collect()
                }
            }
            CapKind::Projective => {
                let f3 = &self.complement[0];
                let per = (n / 8).max(2);
                let mut out = Vec::with_capacity(8 * per);
                for lambda in [C64::new(0.0, 1.0), C64::new(0.0, -1.0)] {
                    for ph in 0..4 {
                        let rot = C64::from_polar(1.0, ph as f64 * FRAC_PI_2);
                        let e3 = UnitVector::from_parts_normalized(
                            self.field(),
                            f3.comps().iter().map(|z| z * rot).collect(),
                        );
                        for k in 0..per {
                            let eps = FRAC_PI_2 * k as f64 / (per - 1) as f64;
                            out.push(self.projective_point(eps, lambda, &e3));
                        }
                    }
                }
                out
            }
            CapKind::OrthogonalCircle => {
                let (v, w) = &self.centers;
                let (s, c) = self.alpha.sin_cos();
                (0..n)
                    .map(|k| {
                        let lam = C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
                        combine(self.field(), &[(re(c), v), (lam * s, w)])
                    })
                    .collect()
            }
        }
    }
}

/// `x^(α) ∩ y^(α)` for real unit vectors with `0 < ∢(x, y) < 2α`, `α < π/2`.
pub fn sphere_cap_pair_set(x: &UnitVector, y: &UnitVector, alpha: Angle) -> Result<CapIntersection> {
    if x.field() != Field::Real || y.field() != Field::Real {
        return Err(Error::WrongField { op: "sphere_cap_pair_set", expected: "real" });
    }
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { left: x.dim(), right: y.dim() });
    }
    if x.dim() < 3 {
        return Err(domain("sphere_cap_pair_set", "dim must be at least 3"));
    }
    let a = alpha.0;
    let g = sphere_angle_raw(x.comps(), y.comps());
    if !in_open(a, 0.0, FRAC_PI_2) || !in_open(g, 0.0, 2.0 * a) {
        return Err(domain("sphere_cap_pair_set", format!("gamma {g} outside (0, 2 alpha), alpha {a}")));
    }
    let (e1, e2, complement) = bisector_frame(x, y)?;
    Ok(CapIntersection { kind: CapKind::Sphere, alpha: a, gamma: g, centers: (x.clone(), y.clone()), e1, e2, complement })
}

/// `[v]^α ∩ [w]^α` over C. Either `α < π/4` and `0 < γ < 2α`, or `α = π/4` with
/// orthogonal lines (the circle case).
pub fn proj_cap_pair_set(v: &Line, w: &Line, alpha: Angle) -> Result<CapIntersection> {
    if v.field() != Field::Complex || w.field() != Field::Complex {
        return Err(Error::WrongField { op: "proj_cap_pair_set", expected: "complex" });
    }
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch { left: v.dim(), right: w.dim() });
    }
    if v.dim() < 3 {
        return Err(domain("proj_cap_pair_set", "dim must be at least 3"));
    }
    let a = alpha.0;
    let g = line_angle_raw(v.rep().comps(), w.rep().comps());
    let (x, y) = aligned_pair(v.rep(), w.rep());
    if near(a, FRAC_PI_4) && near(g, FRAC_PI_2) {
        let rest = orthonormal_extend_in(Field::Complex, &[x.clone(), y.clone()], x.dim())?;
        return Ok(CapIntersection {
            kind: CapKind::OrthogonalCircle,
            alpha: FRAC_PI_4,
            gamma: g,
            centers: (x.clone(), y.clone()),
            e1: x,
            e2: y,
            complement: rest,
        });
    }
    if !in_open(a, 0.0, FRAC_PI_4) || !in_open(g, 0.0, 2.0 * a) {
        return Err(domain("proj_cap_pair_set", format!("need alpha < pi/4, 0 < gamma < 2 alpha; got {a}, {g}")));
    }
    let (e1, e2, complement) = bisector_frame(&x, &y)?;
    Ok(CapIntersection { kind: CapKind::Projective, alpha: a, gamma: g, centers: (x, y), e1, e2, complement })
}

/// The two lines of `[v]^α ∩ [w]^α` realizing its diameter.
pub fn proj_extremal_pair(v: &Line, w: &Line, alpha: Angle) -> Result<(Line, Line)> {
    let set = proj_cap_pair_set(v, w, alpha)?;
    if set.kind != CapKind::Projective {
        return Err(domain("proj_extremal_pair", "alpha must be below pi/4"));
    }
    let f3 = &set.complement[0];
    let u1 = set.projective_point(0.0, C64::new(0.0, 1.0), f3);
    let u2 = set.projective_point(0.0, C64::new(0.0, -1.0), f3);
    Ok((u1.line(), u2.line()))
}

/// All lines of real 3-space at angle `α` from both `[x]` and `[y]`, for `π/3 < α < π/2`.
/// The first family exists only when `γ ≥ π − 2α` and collapses to one line at equality.
pub fn dim3_real_intersection(x: &Line, y: &Line, alpha: Angle) -> Result<Vec<Line>> {
    if x.field() != Field::Real || y.field() != Field::Real {
        return Err(Error::WrongField { op: "dim3_real_intersection", expected: "real" });
    }
    if x.dim() != 3 || y.dim() != 3 {
        return Err(domain("dim3_real_intersection", "lines must live in real 3-space"));
    }
    let a = alpha.0;
    if !in_open(a, FRAC_PI_3, FRAC_PI_2) {
        return Err(domain("dim3_real_intersection", format!("alpha {a} outside (pi/3, pi/2)")));
    }
    let g = line_angle_raw(x.rep().comps(), y.rep().comps());
    if g <= 0.0 {
        return Err(domain("dim3_real_intersection", "lines coincide"));
    }
    let (xv, yv) = aligned_pair(x.rep(), y.rep());
    let (e1, e2, rest) = bisector_frame(&xv, &yv)?;
    let e3 = &rest[0];
    let f = Field::Real;
    let mut out: Vec<Line> = Vec::with_capacity(4);
    let mut push = |u: UnitVector| {
        let l = u.line();
        if !out.iter().any(|m| m.rep_distance(&l).map_or(false, |d| d <= MERGE_TOL)) {
            out.push(l);
        }
    };
    let threshold = PI - 2.0 * a;
    if near(g, threshold) {
        push(e2.clone());
    } else if g > threshold {
        let p = a.cos() / (g / 2.0).sin();
        let q = (1.0 - p * p).max(0.0).sqrt();
        push(combine(f, &[(re(p), &e2), (re(q), e3)]));
        push(combine(f, &[(re(p), &e2), (re(-q), e3)]));
    }
    let p = a.cos() / (g / 2.0).cos();
    let q = (1.0 - p * p).max(0.0).sqrt();
    push(combine(f, &[(re(p), &e1), (re(q), e3)]));
    push(combine(f, &[(re(p), &e1), (re(-q), e3)]));
    Ok(out)
}

/// Inner product between the two outer solution lines in the `α = π/3`, dim-3 configuration.
pub fn dim3_pi3_cross_angles(gamma: Angle) -> Result<f64> {
    let g = gamma.0;
    if !(g > FRAC_PI_3 && g <= FRAC_PI_2 + BRANCH_TOL) {
        return Err(domain("dim3_pi3_cross_angles", format!("gamma {g} outside (pi/3, pi/2]")));
    }
    let (s, c) = (g / 2.0).sin_cos();
    let f1 = (1.0 - 0.25 / (s * s)).max(0.0).sqrt();
    let f2 = (1.0 - 0.25 / (c * c)).max(0.0).sqrt();
    Ok(f1 * f2)
}

/// The `γ ∈ (π/3, 2π/3)` where the outer lines of the `α = π/3` configuration
/// meet at `π/3`. With `u = sin²(γ/2)` the squared cross product
/// `(1 − 1/4u)(1 − 1/4(1−u))` only touches `1/4` there, so the root is taken
/// on its derivative, which does change sign.
pub fn dim3_pi3_touch_root() -> Angle {
    let dg = |u: f64| {
        let (p, q) = (1.0 - 0.25 / u, 1.0 - 0.25 / (1.0 - u));
        0.25 / (u * u) * q - p * 0.25 / ((1.0 - u) * (1.0 - u))
    };
    let u = crate::oracle::bisect(dg, 0.3, 0.7, crate::oracle::BISECT_TOL).expect("derivative changes sign");
    Angle(2.0 * u.sqrt().asin())
}

/// Reflection of `u` through the axis `x`; the unique point at `2π/3` from both.
pub fn tilde_point(x: &UnitVector, u: &UnitVector) -> Result<UnitVector> {
    if x.field() != Field::Real || u.field() != Field::Real {
        return Err(Error::WrongField { op: "tilde_point", expected: "real" });
    }
    if x.dim() != u.dim() {
        return Err(Error::DimensionMismatch { left: x.dim(), right: u.dim() });
    }
    let g = sphere_angle_raw(x.comps(), u.comps());
    if !near(g, 2.0 * PI / 3.0) {
        return Err(domain("tilde_point", format!("angle {g} is not 2pi/3")));
    }
    let p = dot(u.comps(), x.comps());
    let comps = x.comps().iter().zip(u.comps()).map(|(xk, uk)| 2.0 * p * xk - uk).collect();
    Ok(UnitVector::from_parts_normalized(Field::Real, comps))
}

/// Angle between `[√½ v + λ √½ w]` and `[√½ v + μ √½ w]` for orthonormal `v, w`.
pub fn ortho_circle_angles(lambda: C64, mu: C64) -> Angle {
    let l = lambda / lambda.norm();
    let m = mu / mu.norm();
    Angle(((1.0 + l * m.conj()).norm() / 2.0).clamp(0.0, 1.0).acos())
}

/// The two sphere angles `β₁ < π/2 < β₂` induced inside `[v]^⊥` for `π/3 < α < π/2`.
pub fn beta_pair(alpha: Angle) -> Result<(Angle, Angle)> {
    let a = alpha.0;
    if !in_open(a, FRAC_PI_3, FRAC_PI_2) {
        return Err(domain("beta_pair", format!("alpha {a} outside (pi/3, pi/2)")));
    }
    let c = a.cos();
    let b1 = (1.0 - 1.0 / (1.0 + c)).clamp(-1.0, 1.0).acos();
    let b2 = (1.0 - 1.0 / (1.0 - c)).clamp(-1.0, 1.0).acos();
    Ok((Angle(b1), Angle(b2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_unit, seeded_rng};

    #[test]
    fn sphere_table_examples() {
        let t = |a: f64, b: f64, g: f64| sphere_card(Angle(a), Angle(b), Angle(g), 3).unwrap();
        assert_eq!(t(PI / 3.0, PI / 3.0, 2.0 * PI / 3.0), Cardinality::One);
        assert_eq!(t(PI / 6.0, PI / 4.0, PI / 2.0), Cardinality::Empty);
        assert_eq!(t(PI / 6.0, PI / 4.0, PI / 12.0), Cardinality::One);
        assert_eq!(t(PI / 4.0, PI / 4.0, PI / 4.0), Cardinality::Finite(2));
        assert_eq!(t(PI / 3.0, 2.0 * PI / 3.0, PI), Cardinality::Infinite);
        assert_eq!(
            sphere_card(Angle(PI / 4.0), Angle(PI / 4.0), Angle(PI / 4.0), 4).unwrap(),
            Cardinality::Infinite
        );
        assert!(sphere_card(Angle(1.0), Angle(0.5), Angle(0.3), 3).is_err());
    }

    #[test]
    fn proj_table_examples() {
        let p = |a: f64, b: f64, g: f64, f| proj_card(Angle(a), Angle(b), Angle(g), 3, f).unwrap();
        assert_eq!(p(FRAC_PI_2, FRAC_PI_2, 0.3, Field::Complex), Cardinality::One);
        assert_eq!(p(PI / 6.0, PI / 4.0, PI / 2.0, Field::Real), Cardinality::Empty);
        assert_eq!(p(FRAC_PI_4, FRAC_PI_4, FRAC_PI_2, Field::Complex), Cardinality::Infinite);
        assert_eq!(p(FRAC_PI_4, FRAC_PI_4, FRAC_PI_2, Field::Real), Cardinality::Finite(2));
        let a = 2.0 * PI / 5.0;
        assert_eq!(p(a, a, PI - 2.0 * a, Field::Real), Cardinality::Finite(3));
        assert_eq!(p(a, a, PI - 2.0 * a + 0.05, Field::Real), Cardinality::Finite(4));
    }

    #[test]
    fn gamma0_matches_direct_formula() {
        for k in 1..100 {
            let a = FRAC_PI_2 * k as f64 / 100.0;
            let c = a.cos();
            let direct = (4.0 * c * c / (c + 1.0) - 1.0).acos();
            assert!((beta_of(a) - direct).abs() < 1e-9, "{a}");
        }
        assert!((gamma0(Angle(PI / 3.0)).unwrap().0 - (-1.0f64 / 3.0).acos()).abs() < 1e-15);
        assert_eq!(beta_of(0.0), 0.0);
        assert!((beta_of(FRAC_PI_2) - PI).abs() < 1e-15);
    }

    #[test]
    fn cap_points_lie_in_both_level_sets() {
        let mut rng = seeded_rng(5);
        let x = random_unit(4, Field::Real, &mut rng).unwrap();
        let mut y = random_unit(4, Field::Real, &mut rng).unwrap();
        while sphere_angle_raw(x.comps(), y.comps()) > 1.9 {
            y = random_unit(4, Field::Real, &mut rng).unwrap();
        }
        let set = sphere_cap_pair_set(&x, &y, Angle(1.0)).unwrap();
        for u in set.materialize(50) {
            assert!(set.residual(&u) < 1e-9);
        }
    }

    #[test]
    fn extremal_pair_realizes_diameter() {
        let mut rng = seeded_rng(8);
        let v = random_unit(3, Field::Complex, &mut rng).unwrap().line();
        let f = orthonormal_extend_in(Field::Complex, &[v.rep().clone()], 3).unwrap();
        let g = 0.5f64;
        let w = combine(Field::Complex, &[(re(g.cos()), v.rep()), (C64::new(0.0, g.sin()), &f[0])]).line();
        let a = Angle(0.6);
        let (u1, u2) = proj_extremal_pair(&v, &w, a).unwrap();
        let set = proj_cap_pair_set(&v, &w, a).unwrap();
        assert!(set.residual(u1.rep()) < 1e-9 && set.residual(u2.rep()) < 1e-9);
        let d = line_angle_raw(u1.rep().comps(), u2.rep().comps());
        assert!((d - proj_diam(a, Angle(g)).unwrap().0).abs() < 1e-9);
        for u in set.materialize(400) {
            assert!(set.residual(&u) < 1e-9);
        }
    }

    #[test]
    fn tilde_point_example() {
        let x = UnitVector::real(&[1.0, 0.0, 0.0]).unwrap();
        let u = UnitVector::real(&[-0.5, -(3.0f64.sqrt()) / 2.0, 0.0]).unwrap();
        let t = tilde_point(&x, &u).unwrap();
        assert!((t.comps()[0].re + 0.5).abs() < 1e-15);
        assert!((t.comps()[1].re - 3.0f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(tilde_point(&x, &x).is_err());
    }

    #[test]
    fn circle_angles() {
        let one = C64::new(1.0, 0.0);
        assert_eq!(ortho_circle_angles(one, one).0, 0.0);
        assert!((ortho_circle_angles(one, -one).0 - FRAC_PI_2).abs() < 1e-15);
        assert!((ortho_circle_angles(one, C64::new(0.0, 1.0)).0 - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn proj_diam_domain() {
        assert!(proj_diam(Angle(0.7), Angle(0.3)).is_ok());
        assert!(proj_diam(Angle(0.8), Angle(0.3)).is_err());
    }
}
