//! Lemma checks behind `verify`: each compares a closed form against an
//! independent computation and records every point it looked at.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI, TAU};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::angle_sets::{
    beta_of, beta_pair, dim3_pi3_cross_angles, dim3_pi3_touch_root, dim3_real_intersection, gamma0,
    proj_card, proj_cap_pair_set, proj_diam, sphere_cap_diam, sphere_cap_pair_set, sphere_card, tilde_point,
    CardClass,
};
use crate::bloch::{from_bloch, to_bloch};
use crate::closure::functions::{
    case2_recursion, case4_chain_holds, case5_explicit, case5_recursion, ordering_classify, solve_alpha_check,
    special_constants, verify_beta_monotonicity, wrap_companion, Ordering,
};
use crate::error::Result;
use crate::linalg::{
    line_angle, random_line, random_unit, seeded_rng, Angle, Field, Line, UnitVector, C64,
};
use crate::oracle::{mc_diam, mc_proj_card, mc_sphere_card, GridSpec};
use crate::symmetry_fit::double_perp;

pub const LEMMAS: [&str; 15] = [
    "sphere-card",
    "proj-card",
    "gamma0",
    "proj-diam",
    "dim3-three",
    "dim3-pi3",
    "tilde",
    "bloch-doubling",
    "metric",
    "double-perp",
    "beta-mono",
    "ceq-chain",
    "orderings",
    "recursions",
    "constants",
];

/// Oracle tolerance when none is given.
pub const DEFAULT_ORACLE_TOL: f64 = 0.015;
pub const DEFAULT_RESOLUTION: usize = 400;
/// Diameter agreement between closed forms and the sampled oracle.
pub const DIAM_TOL: f64 = 2e-3;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub grid: Option<usize>,
    pub seed: u64,
    pub tol: Option<f64>,
    pub resolution: usize,
    pub field: Option<Field>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { grid: None, seed: 0, tol: None, resolution: DEFAULT_RESOLUTION, field: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub params: BTreeMap<String, f64>,
    pub expected: String,
    pub observed: String,
    pub agree: bool,
    /// Within twice the tolerance of a case boundary; reported, not counted.
    pub boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub lemma: String,
    pub seed: u64,
    pub grid: usize,
    pub tolerance: f64,
    pub checks: Vec<CheckRecord>,
    pub disagreements: usize,
    pub boundary_points: usize,
    pub passed: bool,
}

struct Builder {
    lemma: &'static str,
    seed: u64,
    grid: usize,
    tol: f64,
    checks: Vec<CheckRecord>,
}

impl Builder {
    fn push(&mut self, params: &[(&str, f64)], expected: impl ToString, observed: impl ToString, agree: bool, boundary: bool) {
        self.checks.push(CheckRecord {
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            agree,
            boundary,
        });
    }

    fn ok(&mut self, params: &[(&str, f64)], expected: impl ToString, observed: impl ToString, agree: bool) {
        self.push(params, expected, observed, agree, false);
    }

    fn finish(self) -> VerifyReport {
        let disagreements = self.checks.iter().filter(|c| !c.agree && !c.boundary).count();
        let boundary_points = self.checks.iter().filter(|c| c.boundary).count();
        VerifyReport {
            lemma: self.lemma.to_string(),
            seed: self.seed,
            grid: self.grid,
            tolerance: self.tol,
            passed: disagreements == 0 && !self.checks.is_empty(),
            checks: self.checks,
            disagreements,
            boundary_points,
        }
    }
}

/// `None` for an id outside [`LEMMAS`].
pub fn run_lemma(id: &str, cfg: &VerifyConfig) -> Option<Result<VerifyReport>> {
    let lemma = *LEMMAS.iter().find(|l| **l == id)?;
    let grid = |d: usize| cfg.grid.unwrap_or(d).max(2);
    let mut b = Builder { lemma, seed: cfg.seed, grid: 0, tol: 0.0, checks: Vec::new() };
    let r = match lemma {
        "sphere-card" => {
            b.grid = grid(6);
            b.tol = cfg.tol.unwrap_or(DEFAULT_ORACLE_TOL);
            sphere_card_grid(&mut b, cfg.resolution)
        }
        "proj-card" => {
            b.grid = grid(6);
            b.tol = cfg.tol.unwrap_or(DEFAULT_ORACLE_TOL);
            let fields = cfg.field.map_or(vec![Field::Real, Field::Complex], |f| vec![f]);
            fields.into_iter().try_for_each(|f| proj_card_grid(&mut b, f, cfg.resolution))
        }
        "gamma0" => {
            b.grid = grid(200);
            b.tol = cfg.tol.unwrap_or(1e-12);
            gamma0_check(&mut b)
        }
        "proj-diam" => {
            b.grid = grid(5);
            b.tol = cfg.tol.unwrap_or(DIAM_TOL);
            proj_diam_check(&mut b, cfg.resolution.max(500))
        }
        "dim3-three" => {
            b.grid = grid(20);
            b.tol = cfg.tol.unwrap_or(1e-10);
            dim3_three_check(&mut b)
        }
        "dim3-pi3" => {
            b.grid = grid(50);
            b.tol = cfg.tol.unwrap_or(1e-10);
            dim3_pi3_check(&mut b)
        }
        "tilde" => {
            b.grid = grid(10);
            b.tol = cfg.tol.unwrap_or(DEFAULT_ORACLE_TOL);
            tilde_check(&mut b, cfg.resolution)
        }
        "bloch-doubling" => {
            b.grid = grid(1000);
            b.tol = cfg.tol.unwrap_or(1e-10);
            bloch_check(&mut b)
        }
        "metric" => {
            b.grid = grid(1000);
            b.tol = cfg.tol.unwrap_or(1e-10);
            metric_check(&mut b)
        }
        "double-perp" => {
            b.grid = grid(50);
            b.tol = cfg.tol.unwrap_or(1e-9);
            double_perp_check(&mut b)
        }
        "beta-mono" => {
            b.grid = grid(1000);
            b.tol = 0.0;
            beta_mono_check(&mut b)
        }
        "ceq-chain" => {
            b.grid = grid(10_000);
            b.tol = 0.0;
            ceq_check(&mut b);
            Ok(())
        }
        "orderings" => {
            b.grid = grid(200);
            b.tol = cfg.tol.unwrap_or(1e-10);
            orderings_check(&mut b)
        }
        "recursions" => {
            b.grid = grid(60);
            b.tol = cfg.tol.unwrap_or(1e-9);
            recursions_check(&mut b);
            Ok(())
        }
        "constants" => {
            b.grid = 0;
            b.tol = cfg.tol.unwrap_or(1e-10);
            constants_check(&mut b);
            Ok(())
        }
        _ => unreachable!("registry and dispatch agree"),
    };
    Some(r.map(|_| b.finish()))
}

fn real3(xs: [f64; 3]) -> UnitVector {
    UnitVector::real(&xs).expect("unit")
}

/// `x = e1`, `y = cos γ e1 + sin γ e2`.
fn sphere_pair(g: f64) -> (UnitVector, UnitVector) {
    (real3([1.0, 0.0, 0.0]), real3([g.cos(), g.sin(), 0.0]))
}

fn line_pair(g: f64, field: Field) -> (Line, Line) {
    let (x, y) = sphere_pair(g);
    match field {
        Field::Real => (x.line(), y.line()),
        Field::Complex => {
            let lift = |u: &UnitVector| Line::complex(u.comps().to_vec()).expect("unit");
            (lift(&x), lift(&y))
        }
    }
}

/// Whether the classification moves when any parameter shifts by `d`.
fn near_boundary(class: impl Fn(f64, f64, f64) -> Option<CardClass>, a: f64, b: f64, g: f64, d: f64) -> bool {
    let Some(c0) = class(a, b, g) else { return true };
    let shifts = [(d, 0.0, 0.0), (-d, 0.0, 0.0), (0.0, d, 0.0), (0.0, -d, 0.0), (0.0, 0.0, d), (0.0, 0.0, -d)];
    shifts.iter().any(|(da, db, dg)| class(a + da, b + db, g + dg).is_some_and(|c| c != c0))
}

fn sorted(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn sphere_class(a: f64, b: f64, g: f64) -> Option<CardClass> {
    let (a, b) = sorted(a, b);
    sphere_card(Angle(a), Angle(b), Angle(g), 3).ok().map(|c| c.class())
}

fn proj_class(field: Field) -> impl Fn(f64, f64, f64) -> Option<CardClass> {
    move |a, b, g| {
        let (a, b) = sorted(a, b);
        proj_card(Angle(a), Angle(b), Angle(g), 3, field).ok().map(|c| c.class())
    }
}

/// `α, β ∈ {(i+1)π/(n+1)}`, `γ ∈ {(k+1)π/n}`.
pub fn sphere_card_grid_points(n: usize) -> Vec<(f64, f64, f64)> {
    let s = |i: usize| (i + 1) as f64 * PI / (n + 1) as f64;
    let t = |k: usize| (k + 1) as f64 * PI / n as f64;
    (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (s(i), s(j), t(k))))).collect()
}

/// The same grid scaled into `(0, π/2]`.
pub fn proj_card_grid_points(n: usize) -> Vec<(f64, f64, f64)> {
    sphere_card_grid_points(n).into_iter().map(|(a, b, g)| (a / 2.0, b / 2.0, g / 2.0)).collect()
}

/// Closed form, oracle and boundary flag for one sphere configuration.
pub fn sphere_card_point(a: f64, b: f64, g: f64, spec: &GridSpec) -> Result<(CardClass, CardClass, bool)> {
    let (x, y) = sphere_pair(g);
    let expected = sphere_class(a, b, g).expect("grid inside the domain");
    let observed = mc_sphere_card(&x, &y, a, b, spec)?.class().expect("class estimate");
    Ok((expected, observed, near_boundary(sphere_class, a, b, g, 2.0 * spec.tolerance)))
}

pub fn proj_card_point(a: f64, b: f64, g: f64, field: Field, spec: &GridSpec) -> Result<(CardClass, CardClass, bool)> {
    let (v, w) = line_pair(g, field);
    let expected = proj_class(field)(a, b, g).expect("grid inside the domain");
    let observed = mc_proj_card(&v, &w, a, b, spec)?.class().expect("class estimate");
    Ok((expected, observed, near_boundary(proj_class(field), a, b, g, 2.0 * spec.tolerance)))
}

fn sphere_card_grid(b: &mut Builder, resolution: usize) -> Result<()> {
    let spec = GridSpec::new(resolution, b.seed, b.tol)?;
    for (a, be, g) in sphere_card_grid_points(b.grid) {
        let (e, o, edge) = sphere_card_point(a, be, g, &spec)?;
        b.push(&[("alpha", a), ("beta", be), ("gamma", g)], format!("{e:?}"), format!("{o:?}"), e == o, edge);
    }
    Ok(())
}

fn proj_card_grid(b: &mut Builder, field: Field, resolution: usize) -> Result<()> {
    let spec = GridSpec::new(resolution, b.seed, b.tol)?;
    let fl = if field == Field::Real { 0.0 } else { 1.0 };
    for (a, be, g) in proj_card_grid_points(b.grid) {
        let (e, o, edge) = proj_card_point(a, be, g, field, &spec)?;
        b.push(
            &[("alpha", a), ("beta", be), ("gamma", g), ("complex", fl)],
            format!("{e:?}"),
            format!("{o:?}"),
            e == o,
            edge,
        );
    }
    Ok(())
}

/// Sphere-cap diameter from the law of cosines, independent of `sphere_cap_diam`:
/// the two points of `x^(α) ∩ y^(α)` sit at height `±h` over the bisecting plane.
fn cap_diam_direct(a: f64, g: f64) -> f64 {
    let p = a.cos() / (g / 2.0).cos();
    let h = (1.0 - p * p).max(0.0).sqrt();
    2.0 * h.atan2(p)
}

fn gamma0_check(b: &mut Builder) -> Result<()> {
    let n = b.grid;
    let spots = n.min(20);
    let spec = GridSpec::new(500, b.seed, DEFAULT_ORACLE_TOL)?;
    for i in 0..n {
        let a = (i + 1) as f64 * FRAC_PI_2 / (n + 1) as f64;
        let g = gamma0(Angle(a))?.0;
        let h = sphere_cap_diam(Angle(a), Angle(g))?.0;
        let direct = cap_diam_direct(a, g);
        let fixed = (h - a).abs() <= b.tol && (direct - a).abs() <= 1e-9;
        b.ok(&[("alpha", a), ("gamma0", g)], "alpha < gamma0 < 2 alpha, h(gamma0) = alpha", format!("h = {h:.17e}"), g > a && g < 2.0 * a && fixed);
        if i % (n / spots).max(1) == 0 {
            let (x, y) = sphere_pair(g);
            let set = sphere_cap_pair_set(&x, &y, Angle(a))?;
            let d = mc_diam(&set, &spec)?.diameter().expect("diameter");
            b.ok(&[("alpha", a), ("gamma0", g), ("oracle", 1.0)], format!("{a:.17e}"), format!("{d:.17e}"), (d - a).abs() <= DIAM_TOL);
        }
    }
    Ok(())
}

fn proj_diam_check(b: &mut Builder, resolution: usize) -> Result<()> {
    let spec = GridSpec::new(resolution, b.seed, DEFAULT_ORACLE_TOL)?;
    let n = b.grid;
    for i in 0..n {
        let a = (i + 1) as f64 * FRAC_PI_4 / (n + 1) as f64;
        for j in 0..4 {
            let g = 2.0 * a * (j + 1) as f64 / 5.0;
            let (v, w) = line_pair(g, Field::Complex);
            let d = mc_diam(&proj_cap_pair_set(&v, &w, Angle(a))?, &spec)?.diameter().expect("diameter");
            let e = proj_diam(Angle(a), Angle(g))?.0;
            b.ok(&[("alpha", a), ("gamma", g)], format!("{e:.17e}"), format!("{d:.17e}"), (d - e).abs() <= b.tol);
        }
    }
    let (v, w) = line_pair(FRAC_PI_2, Field::Complex);
    let d = mc_diam(&proj_cap_pair_set(&v, &w, Angle(FRAC_PI_4))?, &spec)?.diameter().expect("diameter");
    b.ok(&[("alpha", FRAC_PI_4), ("gamma", FRAC_PI_2)], format!(">= {:.17e}", FRAC_PI_2 - b.tol), format!("{d:.17e}"), d >= FRAC_PI_2 - b.tol);
    Ok(())
}

fn dim3_three_check(b: &mut Builder) -> Result<()> {
    let n = b.grid;
    for i in 0..n {
        let a = FRAC_PI_3 + (i + 1) as f64 * (FRAC_PI_2 - FRAC_PI_3) / (n + 1) as f64;
        let t = PI - 2.0 * a;
        for (g, want_three) in [(t, true), (t + 0.05, false), (t - 0.05, false)] {
            if !(g > 0.0 && g <= FRAC_PI_2) {
                continue;
            }
            let (x, y) = line_pair(g, Field::Real);
            let lines = dim3_real_intersection(&x, &y, Angle(a))?;
            let on_both = lines.iter().all(|l| {
                let da = line_angle(l, &x).map_or(f64::INFINITY, |t| (t.0 - a).abs());
                let db = line_angle(l, &y).map_or(f64::INFINITY, |t| (t.0 - a).abs());
                da.max(db) <= b.tol
            });
            let expected = if want_three { "3" } else { "not 3" };
            let agree = on_both && (lines.len() == 3) == want_three;
            b.ok(&[("alpha", a), ("gamma", g)], expected, lines.len(), agree);
        }
    }
    Ok(())
}

/// Inner product of the two outer lines, from explicit coordinates in the frame
/// `x = (cos γ/2, sin γ/2, 0)`, `y = (cos γ/2, −sin γ/2, 0)`.
fn pi3_cross_direct(g: f64) -> f64 {
    let (s, c) = (g / 2.0).sin_cos();
    let a = 0.5 / c;
    let bb = 0.5 / s;
    let u = [a, 0.0, (1.0 - a * a).max(0.0).sqrt()];
    let v = [0.0, bb, (1.0 - bb * bb).max(0.0).sqrt()];
    (u[0] * v[0] + u[1] * v[1] + u[2] * v[2]).abs()
}

fn dim3_pi3_check(b: &mut Builder) -> Result<()> {
    let n = b.grid;
    for i in 0..n {
        let g = FRAC_PI_3 + (i + 1) as f64 * (FRAC_PI_2 - FRAC_PI_3) / n as f64;
        let c = dim3_pi3_cross_angles(Angle(g))?;
        let d = pi3_cross_direct(g);
        let below = if i + 1 < n { c < 0.5 } else { (c - 0.5).abs() <= 1e-12 };
        b.ok(&[("gamma", g)], format!("{d:.17e}"), format!("{c:.17e}"), (c - d).abs() <= 1e-12 && below);
    }
    let r = dim3_pi3_touch_root().0;
    b.ok(&[("root", r)], format!("{FRAC_PI_2:.17e}"), format!("{r:.17e}"), (r - FRAC_PI_2).abs() <= b.tol);
    Ok(())
}

fn tilde_check(b: &mut Builder, resolution: usize) -> Result<()> {
    let mut rng = seeded_rng(b.seed);
    let spec = GridSpec::new(resolution, b.seed, b.tol)?;
    for k in 0..b.grid {
        let dim = 3 + k % 3;
        let x = random_unit(dim, Field::Real, &mut rng)?;
        let h = loop {
            let r = random_unit(dim, Field::Real, &mut rng)?;
            let p: f64 = r.comps().iter().zip(x.comps()).map(|(a, c)| (a * c).re).sum();
            let perp: Vec<f64> = r.comps().iter().zip(x.comps()).map(|(a, c)| (a - p * c).re).collect();
            if let Ok(h) = UnitVector::real(&normalized(&perp)) {
                break h;
            }
        };
        let t = 2.0 * PI / 3.0;
        let u: Vec<f64> = (0..dim).map(|i| t.cos() * x.comps()[i].re + t.sin() * h.comps()[i].re).collect();
        let u = UnitVector::real(&u)?;
        let got = tilde_point(&x, &u)?;
        // x-component kept, orthogonal part flipped
        let want: Vec<f64> = (0..dim).map(|i| t.cos() * x.comps()[i].re - t.sin() * h.comps()[i].re).collect();
        let err = got.comps().iter().zip(&want).map(|(a, w)| (a.re - w).abs()).fold(0.0, f64::max);
        b.ok(&[("sample", k as f64), ("dim", dim as f64)], "reflection", format!("max error {err:.3e}"), err <= 1e-12);
        if dim == 3 {
            let rep = mc_sphere_card(&x, &u, t, t, &spec)?;
            let close = rep.points.iter().any(|p| {
                let d: f64 = p.iter().zip(got.comps()).map(|(a, c)| (a - c.re).powi(2)).sum::<f64>().sqrt();
                d <= 2.0 * b.tol
            });
            let agree = rep.class() == Some(CardClass::One) && close;
            b.ok(&[("sample", k as f64), ("oracle", 1.0)], "One near tilde point", format!("{:?}, {} clusters", rep.class(), rep.clusters), agree);
        }
    }
    Ok(())
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

fn bloch_angle(p: &[f64; 3], q: &[f64; 3]) -> f64 {
    let d: f64 = (0..3).map(|i| (p[i] - q[i]).powi(2)).sum::<f64>().sqrt();
    let s: f64 = (0..3).map(|i| (p[i] + q[i]).powi(2)).sum::<f64>().sqrt();
    2.0 * d.atan2(s)
}

fn bloch_check(b: &mut Builder) -> Result<()> {
    let mut rng = seeded_rng(b.seed);
    let mut worst_double = 0.0f64;
    let mut worst_trip = 0.0f64;
    for _ in 0..b.grid {
        let u = random_line(2, Field::Complex, &mut rng)?;
        let v = random_line(2, Field::Complex, &mut rng)?;
        let (pu, pv) = (to_bloch(&u)?, to_bloch(&v)?);
        worst_double = worst_double.max((bloch_angle(&pu.0, &pv.0) - 2.0 * line_angle(&u, &v)?.0).abs());
        worst_trip = worst_trip.max(line_angle(&from_bloch(&pu), &u)?.0);
    }
    let tol = b.tol;
    b.ok(&[("pairs", b.grid as f64)], format!("doubling error <= {tol:e}"), format!("{worst_double:.3e}"), worst_double <= tol);
    b.ok(&[("pairs", b.grid as f64)], format!("round trip error <= {tol:e}"), format!("{worst_trip:.3e}"), worst_trip <= tol);
    Ok(())
}

fn metric_check(b: &mut Builder) -> Result<()> {
    let mut rng = seeded_rng(b.seed);
    for field in [Field::Real, Field::Complex] {
        for dim in 2..=5 {
            let mut slack = f64::INFINITY;
            for _ in 0..b.grid {
                let p = random_line(dim, field, &mut rng)?;
                let q = random_line(dim, field, &mut rng)?;
                let r = random_line(dim, field, &mut rng)?;
                let s = line_angle(&p, &q)?.0 + line_angle(&q, &r)?.0 - line_angle(&p, &r)?.0;
                slack = slack.min(s);
            }
            let fl = if field == Field::Real { 0.0 } else { 1.0 };
            let tol = b.tol;
            b.ok(&[("dim", dim as f64), ("complex", fl)], format!("slack >= -{tol:e}"), format!("{slack:.3e}"), slack >= -tol);
        }
    }
    Ok(())
}

/// Orthogonal projector onto the span of the given vectors, by Gram–Schmidt.
fn span_projector(dim: usize, vs: &[Vec<C64>]) -> DMatrix<C64> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for e in &basis {
                let p: C64 = e.iter().zip(&w).map(|(a, c)| a.conj() * c).sum();
                w.iter_mut().zip(e).for_each(|(x, a)| *x -= p * a);
            }
        }
        let n = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            basis.push(w.iter().map(|z| z / n).collect());
        }
    }
    DMatrix::from_fn(dim, dim, |i, j| basis.iter().map(|e| e[i] * e[j].conj()).sum())
}

fn double_perp_check(b: &mut Builder) -> Result<()> {
    let mut rng = seeded_rng(b.seed);
    for k in 0..b.grid {
        let field = if k % 2 == 0 { Field::Real } else { Field::Complex };
        let dim = 2 + k % 4;
        let count = 1 + k % (dim + 1);
        let lines: Vec<Line> = (0..count).map(|_| random_line(dim, field, &mut rng)).collect::<Result<_>>()?;
        let out = double_perp(&lines)?;
        let reps = |ls: &[Line]| ls.iter().map(|l| l.rep().comps().to_vec()).collect::<Vec<_>>();
        let want = span_projector(dim, &reps(&lines));
        let got = span_projector(dim, &reps(&out));
        let err = (want - got).iter().map(|z| z.norm()).fold(0.0, f64::max);
        b.ok(&[("dim", dim as f64), ("lines", count as f64)], "same span", format!("projector error {err:.3e}"), err <= b.tol);
    }
    Ok(())
}

fn beta_mono_check(b: &mut Builder) -> Result<()> {
    let r = verify_beta_monotonicity(b.grid)?;
    b.ok(&[("grid", b.grid as f64)], "slope of beta - alpha > 0", format!("{:.6e}", r.min_slope), r.min_slope > 0.0);
    b.ok(&[("grid", b.grid as f64)], "d beta / d alpha > 1", format!("{:.6e}", r.min_derivative), r.min_derivative > 1.0);
    b.ok(&[("grid", b.grid as f64)], "beta < 2 alpha", format!("{:.6e}", r.max_excess), r.max_excess < 0.0);
    Ok(())
}

fn ceq_check(b: &mut Builder) {
    let n = b.grid;
    let hi = 1.0 - 1e-6;
    let mut failures = Vec::new();
    for k in 0..n {
        let c = 0.5 + (hi - 0.5) * k as f64 / (n - 1) as f64;
        let q = (4.0 * c + 4.0 / (c + 1.0) - 5.0).abs();
        let direct = 2.0 * c * c - 1.0 < q && q < c;
        if !(direct && case4_chain_holds(c)) {
            failures.push(c);
        }
    }
    b.ok(&[("points", n as f64), ("lo", 0.5), ("hi", hi)], "strict chain at every point", format!("{} failures", failures.len()), failures.is_empty());
    for c in failures.into_iter().take(20) {
        b.ok(&[("c", c)], "strict chain", "violated", false);
    }
}

fn orderings_check(b: &mut Builder) -> Result<()> {
    let n = b.grid;
    let a5 = (1.0 / 5f64.sqrt()).acos();
    for i in 0..n {
        let a = FRAC_PI_3 + (i + 1) as f64 * (FRAC_PI_2 - FRAC_PI_3) / (n + 1) as f64;
        // arccos forms, independent of the stable ones used by `beta_pair`
        let c = a.cos();
        let b1 = (c / (1.0 + c)).acos();
        let b2 = (-c / (1.0 - c)).acos();
        let (q1, q2, q3, q4) = (2.0 * b1, TAU - b1 - b2, b2 - b1, TAU - 2.0 * b2);
        let (p1, p2) = beta_pair(Angle(a))?;
        let pair_ok = (p1.0 - b1).abs() <= 1e-9 && (p2.0 - b2).abs() <= 1e-9;
        for dim in [4usize, 5] {
            let got = ordering_classify(Angle(a), dim)?;
            let want = match (q1 > q2, q3 > q4) {
                (true, true) => Ordering::O2,
                (true, false) => Ordering::O5,
                (false, true) if dim == 4 => Ordering::O3,
                (false, true) => Ordering::O4,
                (false, false) => Ordering::O6,
            };
            let side = if (a - a5).abs() <= b.tol { Ordering::O1 } else { want };
            let edge = (a - a5).abs() <= 1e-6;
            b.push(&[("alpha", a), ("dim", dim as f64)], format!("{side:?}"), format!("{got:?}"), pair_ok && got == side, edge);
        }
    }
    let tie = ordering_classify(Angle(a5), 4)?;
    b.ok(&[("alpha", a5)], "O1", format!("{tie:?}"), tie == Ordering::O1);
    Ok(())
}

fn recursions_check(b: &mut Builder) {
    let n = b.grid;
    let c2 = case2_recursion(n);
    let c5 = case5_recursion(n);
    let e2 = (c2[n - 1].0 - FRAC_PI_2).abs();
    let e5 = (c5[n - 1].0 - 2.0 * PI / 3.0).abs();
    let tol = b.tol;
    b.ok(&[("n", n as f64)], format!("case2 -> pi/2 within {tol:e}"), format!("{e2:.3e}"), e2 < tol);
    b.ok(&[("n", n as f64)], format!("case5 -> 2pi/3 within {tol:e}"), format!("{e5:.3e}"), e5 < tol);
    let mono = c2.windows(2).all(|w| w[1].0 >= w[0].0);
    b.ok(&[("n", n as f64)], "case2 increasing", mono, mono);
    for k in 1..=n.min(50) {
        let (r, e) = (c5[k - 1].0, case5_explicit(k).0);
        b.ok(&[("n", k as f64)], format!("{r:.17e}"), format!("{e:.17e}"), (r - e).abs() <= 1e-12);
    }
}

fn constants_check(b: &mut Builder) {
    let a = solve_alpha_check().0;
    b.ok(&[("alpha_check", a)], "in (1.28, 1.29)", format!("{a:.17e}"), a > 1.28 && a < 1.29);
    let (g1, g2) = (wrap_companion(1.28), wrap_companion(1.29));
    b.ok(&[("alpha", 1.28)], "> 2.59", format!("{g1:.17e}"), g1 > 2.59);
    b.ok(&[("alpha", 1.29)], "< 2.57", format!("{g2:.17e}"), g2 < 2.57);
    let direct = |t: f64| TAU - beta_of(t) - t;
    b.ok(&[("alpha", 1.28)], "companion formula", format!("{:.17e}", direct(1.28)), (direct(1.28) - g1).abs() <= 1e-15);
    let k = special_constants();
    let w5 = (1.0 / 5f64.sqrt()).acos();
    let w17 = ((1.0 + 17f64.sqrt()) / 8.0).acos();
    let tol = b.tol;
    b.ok(&[("root", k.alpha_sqrt5.0)], format!("{w5:.17e}"), format!("{:.17e}", k.alpha_sqrt5.0), (k.alpha_sqrt5.0 - w5).abs() <= tol);
    b.ok(&[("root", k.alpha_sqrt17.0)], format!("{w17:.17e}"), format!("{:.17e}", k.alpha_sqrt17.0), (k.alpha_sqrt17.0 - w17).abs() <= tol);
}
