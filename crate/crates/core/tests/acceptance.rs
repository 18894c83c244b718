//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI, TAU};
use std::time::Instant;

use angleforge::angle_sets::{
    beta_of, dim3_pi3_touch_root, dim3_real_intersection, gamma0, proj_cap_pair_set, proj_card, proj_diam,
    sphere_cap_diam, sphere_cap_pair_set, sphere_card, tilde_point, CardClass,
};
use angleforge::bloch::{from_bloch, to_bloch};
use angleforge::closure::functions::{
    case2_recursion, case4_chain_holds, case5_explicit, case5_recursion, solve_alpha_check, special_constants,
};
use angleforge::closure::{closure, replay, Context, Verdict, DEFAULT_MAX_STEPS, DEFAULT_TERMINAL_THRESHOLD};
use angleforge::linalg::{line_angle, random_line, random_unit, seeded_rng, Angle, Field, Line, UnitVector};
use angleforge::oracle::{mc_diam, mc_proj_card, mc_sphere_card, GridSpec};
use angleforge::symmetry_fit::{fit_isometry, is_angle_preserver};
use common::{complement_perturbed, other_angles, Generator};

const ROOT_TOL: f64 = 1e-10;
const RECURSION_TOL: f64 = 1e-9;
const EXPLICIT_TOL: f64 = 1e-12;
const FIXED_POINT_TOL: f64 = 1e-12;
const DIAM_TOL: f64 = 2e-3;
const GRID_TOL: f64 = 0.015;
const GRID_RES: usize = 400;
const DIAM_RES: usize = 500;
const BLOCH_TOL: f64 = 1e-10;
const METRIC_SLACK: f64 = -1e-10;
const FIT_TOL: f64 = 1e-8;
const PRESERVER_TOL: f64 = 1e-9;
const TOUCH_TOL: f64 = 1e-10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// `arccos(4c²/(c+1) − 1)`, the textbook form.
fn beta_acos(a: f64) -> f64 {
    let c = a.cos();
    (4.0 * c * c / (c + 1.0) - 1.0).clamp(-1.0, 1.0).acos()
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn real3(v: [f64; 3]) -> UnitVector {
    UnitVector::real(&v).unwrap()
}

fn pair_at(g: f64) -> (UnitVector, UnitVector) {
    (real3([1.0, 0.0, 0.0]), real3([g.cos(), g.sin(), 0.0]))
}

fn lines_at(g: f64, field: Field) -> (Line, Line) {
    let (x, y) = pair_at(g);
    match field {
        Field::Real => (x.line(), y.line()),
        Field::Complex => (
            Line::complex(x.comps().to_vec()).unwrap(),
            Line::complex(y.comps().to_vec()).unwrap(),
        ),
    }
}

fn c1_alpha_check() -> Outcome {
    let root = solve_alpha_check().rad();
    let own = bisect(|a| TAU - beta_acos(a) - 3.0 * a, 0.5, FRAC_PI_2);
    let g = |a: f64| TAU - beta_of(a) - a;
    let ok = root > 1.28 && root < 1.29 && (root - own).abs() < 1e-9 && g(1.28) > 2.59 && g(1.29) < 2.57;
    outcome(ok, format!("root {root:.12}, g(1.28) {:.5}, g(1.29) {:.5}", g(1.28), g(1.29)))
}

fn c2_constants() -> Outcome {
    let k = special_constants();
    let e5 = (k.alpha_sqrt5.rad() - (1.0 / 5f64.sqrt()).acos()).abs();
    let e17 = (k.alpha_sqrt17.rad() - ((1.0 + 17f64.sqrt()) / 8.0).acos()).abs();
    outcome(e5 < ROOT_TOL && e17 < ROOT_TOL, format!("errors {e5:.2e}, {e17:.2e}"))
}

fn c3_recursions() -> Outcome {
    let c2 = case2_recursion(60);
    let c5 = case5_recursion(60);
    // independent case-2 sequence on the arccos form
    let mut own = FRAC_PI_4;
    for _ in 1..60 {
        let prev = own;
        own = bisect(|a| beta_acos(a) - a - prev, prev, FRAC_PI_2);
    }
    let e2 = (c2[59].rad() - FRAC_PI_2).abs();
    let e5 = (c5[59].rad() - 2.0 * PI / 3.0).abs();
    let ex = (1..=50).map(|n| (c5[n - 1].rad() - case5_explicit(n).rad()).abs()).fold(0.0, f64::max);
    let ok = e2 < RECURSION_TOL && e5 < RECURSION_TOL && ex <= EXPLICIT_TOL && (own - c2[59].rad()).abs() < 1e-6;
    outcome(ok, format!("case2 {e2:.2e}, case5 {e5:.2e}, explicit {ex:.2e}"))
}

fn c4_gamma0() -> Outcome {
    let mut worst = 0.0f64;
    let mut bracket = true;
    for k in 0..1000 {
        let a = FRAC_PI_2 * (k as f64 + 0.5) / 1000.0;
        let g = gamma0(Angle(a)).unwrap().rad();
        bracket &= g > a && g < 2.0 * a;
        worst = worst.max((sphere_cap_diam(Angle(a), Angle(g)).unwrap().rad() - a).abs());
    }
    let spec = GridSpec::new(DIAM_RES, 0, GRID_TOL).unwrap();
    let mut mc_worst = 0.0f64;
    for k in 0..20 {
        let a = FRAC_PI_2 * (k as f64 + 0.5) / 20.0;
        let g = gamma0(Angle(a)).unwrap().rad();
        let (x, y) = pair_at(g);
        let d = mc_diam(&sphere_cap_pair_set(&x, &y, Angle(a)).unwrap(), &spec).unwrap().diameter().unwrap();
        mc_worst = mc_worst.max((d - a).abs());
    }
    let ok = bracket && worst <= FIXED_POINT_TOL && mc_worst <= DIAM_TOL;
    outcome(ok, format!("bracket {bracket}, fixed point {worst:.2e}, oracle {mc_worst:.2e}"))
}

/// Whether the tabulated class moves when a parameter shifts by `d`.
fn near_edge(class: &dyn Fn(f64, f64, f64) -> Option<CardClass>, a: f64, b: f64, g: f64, d: f64) -> bool {
    let Some(c0) = class(a, b, g) else { return true };
    [(d, 0.0, 0.0), (-d, 0.0, 0.0), (0.0, d, 0.0), (0.0, -d, 0.0), (0.0, 0.0, d), (0.0, 0.0, -d)]
        .iter()
        .any(|(x, y, z)| class(a + x, b + y, g + z).is_some_and(|c| c != c0))
}

fn ordered(a: f64, b: f64) -> (f64, f64) {
    (a.min(b), a.max(b))
}

fn c5_card_tables() -> Outcome {
    let n = 20;
    let spec = GridSpec::new(GRID_RES, 0, GRID_TOL).unwrap();
    let s = |i: usize| (i + 1) as f64 * PI / (n + 1) as f64;
    let t = |k: usize| (k + 1) as f64 * PI / n as f64;
    let mut details = Vec::new();
    let mut pass = true;

    let sphere = |a: f64, b: f64, g: f64| {
        let (a, b) = ordered(a, b);
        sphere_card(Angle(a), Angle(b), Angle(g), 3).ok().map(|c| c.class())
    };
    let (mut bad, mut edge, mut edge_bad) = (0, 0, 0);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (a, b, g) = (s(i), s(j), t(k));
                let (x, y) = pair_at(g);
                let seen = mc_sphere_card(&x, &y, a, b, &spec).unwrap().class().unwrap();
                let agree = sphere(a, b, g) == Some(seen);
                if near_edge(&sphere, a, b, g, 2.0 * GRID_TOL) {
                    edge += 1;
                    edge_bad += usize::from(!agree);
                } else {
                    bad += usize::from(!agree);
                }
            }
        }
    }
    pass &= bad == 0;
    details.push(format!("sphere {bad} off ({edge} boundary, {edge_bad} differ there)"));

    for field in [Field::Real, Field::Complex] {
        let proj = move |a: f64, b: f64, g: f64| {
            let (a, b) = ordered(a, b);
            proj_card(Angle(a), Angle(b), Angle(g), 3, field).ok().map(|c| c.class())
        };
        let (mut bad, mut edge, mut edge_bad) = (0, 0, 0);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (a, b, g) = (s(i) / 2.0, s(j) / 2.0, t(k) / 2.0);
                    let (v, w) = lines_at(g, field);
                    let seen = mc_proj_card(&v, &w, a, b, &spec).unwrap().class().unwrap();
                    let agree = proj(a, b, g) == Some(seen);
                    if near_edge(&proj, a, b, g, 2.0 * GRID_TOL) {
                        edge += 1;
                        edge_bad += usize::from(!agree);
                    } else {
                        bad += usize::from(!agree);
                    }
                }
            }
        }
        pass &= bad == 0;
        details.push(format!("{field:?} lines {bad} off ({edge} boundary, {edge_bad} differ there)"));
    }
    outcome(pass, details.join("; "))
}

fn c6_proj_diam() -> Outcome {
    let spec = GridSpec::new(DIAM_RES, 0, GRID_TOL).unwrap();
    let mut worst = 0.0f64;
    for k in 0..20 {
        let a = FRAC_PI_4 * (k / 4 + 1) as f64 / 6.0;
        let g = 2.0 * a * (k % 4 + 1) as f64 / 5.0;
        let (v, w) = lines_at(g, Field::Complex);
        let d = mc_diam(&proj_cap_pair_set(&v, &w, Angle(a)).unwrap(), &spec).unwrap().diameter().unwrap();
        worst = worst.max((d - proj_diam(Angle(a), Angle(g)).unwrap().rad()).abs());
    }
    let (v, w) = lines_at(FRAC_PI_2, Field::Complex);
    let d = mc_diam(&proj_cap_pair_set(&v, &w, Angle(FRAC_PI_4)).unwrap(), &spec).unwrap().diameter().unwrap();
    outcome(worst <= DIAM_TOL && d >= FRAC_PI_2 - DIAM_TOL, format!("worst {worst:.2e}; orthogonal quarter reaches {d:.6}"))
}

fn c7_bloch() -> Outcome {
    let mut rng = seeded_rng(7);
    let (mut dbl, mut trip) = (0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let u = random_line(2, Field::Complex, &mut rng).unwrap();
        let v = random_line(2, Field::Complex, &mut rng).unwrap();
        let (p, q) = (to_bloch(&u).unwrap().0, to_bloch(&v).unwrap().0);
        let diff = (0..3).map(|i| (p[i] - q[i]).powi(2)).sum::<f64>().sqrt();
        let sum = (0..3).map(|i| (p[i] + q[i]).powi(2)).sum::<f64>().sqrt();
        dbl = dbl.max((2.0 * diff.atan2(sum) - 2.0 * line_angle(&u, &v).unwrap().rad()).abs());
        trip = trip.max(line_angle(&from_bloch(&to_bloch(&u).unwrap()), &u).unwrap().rad());
    }
    outcome(dbl < BLOCH_TOL && trip < BLOCH_TOL, format!("doubling {dbl:.2e}, round trip {trip:.2e}"))
}

fn c8_metric() -> Outcome {
    let mut rng = seeded_rng(8);
    let mut slack = f64::INFINITY;
    let mut count = 0;
    for field in [Field::Real, Field::Complex] {
        for dim in 2..=5 {
            for _ in 0..12_500 {
                let p = random_line(dim, field, &mut rng).unwrap();
                let q = random_line(dim, field, &mut rng).unwrap();
                let r = random_line(dim, field, &mut rng).unwrap();
                let s = line_angle(&p, &q).unwrap().rad() + line_angle(&q, &r).unwrap().rad()
                    - line_angle(&p, &r).unwrap().rad();
                slack = slack.min(s);
                count += 1;
            }
        }
    }
    outcome(slack >= METRIC_SLACK, format!("{count} triples, min slack {slack:.2e}"))
}

fn c9_chain() -> Outcome {
    let hi = 1.0 - 1e-6;
    let mut chain = true;
    for k in 0..10_000 {
        let c = 0.5 + (hi - 0.5) * k as f64 / 9_999.0;
        let q = (4.0 * c + 4.0 / (c + 1.0) - 5.0).abs();
        chain &= 2.0 * c * c - 1.0 < q && q < c && case4_chain_holds(c);
    }
    let step = FRAC_PI_2 / 1001.0;
    let h = 1e-6;
    let min_d = (1..=1000)
        .map(|k| {
            let a = step * k as f64;
            (beta_acos(a + h) - beta_acos(a - h)) / (2.0 * h)
        })
        .fold(f64::INFINITY, f64::min);
    outcome(chain && min_d > 1.0, format!("chain {chain}, min d beta/d alpha {min_d:.6}"))
}

fn c10_fit() -> Outcome {
    let mut rng = seeded_rng(10);
    let mut good = 0;
    let mut worst = 0.0f64;
    for k in 0..50 {
        let g = Generator::random(k, &mut rng);
        if let Ok(f) = fit_isometry(&g.sample(2 * g.dim + 3, &mut rng)) {
            worst = worst.max(f.residual);
            good += usize::from(f.residual < FIT_TOL && f.kind == g.kind);
        }
    }
    let mut angles = vec![FRAC_PI_4];
    angles.extend(other_angles());
    let s = complement_perturbed(&angles, &mut rng);
    let quarter = is_angle_preserver(&s, FRAC_PI_4, PRESERVER_TOL).passes();
    let others = other_angles();
    let failing = others.iter().filter(|&&a| !is_angle_preserver(&s, a, PRESERVER_TOL).passes()).count();
    let ok = good == 50 && quarter && failing == others.len() && others.len() == 20;
    outcome(ok, format!("{good}/50 fits (worst residual {worst:.2e}); quarter passes {quarter}; {failing}/20 others fail"))
}

fn c11_closure() -> Outcome {
    let run = |s: f64, ctx: Context, dim: usize| closure(Angle(s), ctx, dim, DEFAULT_MAX_STEPS, DEFAULT_TERMINAL_THRESHOLD);
    let seeds = |lo: f64, hi: f64| (0..100).map(move |k| lo + (hi - lo) * (k as f64 + 0.5) / 100.0);
    let mut bad = Vec::new();
    let mut check = |s: f64, ctx: Context, dim: usize, want: &dyn Fn(Verdict) -> bool| {
        let c = run(s, ctx, dim);
        if !want(c.verdict) || replay(&c).is_err() {
            bad.push(format!("{ctx}/{dim}@{s:.4}"));
        }
    };
    for s in seeds(0.0, PI).filter(|s| (s - FRAC_PI_2).abs() > 1e-9) {
        check(s, Context::SphereReal, 3, &|v| v == Verdict::IsometryViaSmallAngles);
    }
    for dim in [3, 5] {
        for s in seeds(0.0, FRAC_PI_2) {
            check(s, Context::ProjReal, dim, &|v| v.is_rigid());
        }
    }
    for s in seeds(0.0, FRAC_PI_4) {
        check(s, Context::ProjComplex, 3, &|v| v == Verdict::IsometryViaSmallAngles);
    }
    check(FRAC_PI_4, Context::ProjComplex, 3, &|v| v == Verdict::IsometryViaOrthogonality);
    check(FRAC_PI_3, Context::ProjReal, 3, &|v| v == Verdict::IsometryViaOrthogonality);
    for s in seeds(0.0, FRAC_PI_2).filter(|s| (s - FRAC_PI_4).abs() > 1e-9) {
        check(s, Context::ProjComplexDim2, 2, &|v| v == Verdict::IsometryViaSmallAngles);
    }
    check(FRAC_PI_4, Context::ProjComplexDim2, 2, &|v| v == Verdict::QubitAntipodalAmbiguity);
    let inconclusive = |v: Verdict| v == Verdict::Inconclusive;
    for s in seeds(FRAC_PI_4, FRAC_PI_2).skip(1) {
        check(s, Context::ProjComplex, 3, &inconclusive);
    }
    for (s, ctx, dim) in [
        (0.0, Context::SphereReal, 3),
        (PI, Context::SphereReal, 3),
        (1.0, Context::SphereReal, 2),
        (FRAC_PI_2, Context::ProjReal, 3),
        (2.0, Context::ProjReal, 4),
        (FRAC_PI_2, Context::ProjComplexDim2, 2),
    ] {
        check(s, ctx, dim, &inconclusive);
    }
    let n = bad.len();
    outcome(n == 0, if n == 0 { "all verdicts match, all replay".to_string() } else { bad.join(", ") })
}

fn c12_dim3() -> Outcome {
    let mut three = true;
    for k in 0..20 {
        let a = FRAC_PI_3 + (FRAC_PI_2 - FRAC_PI_3) * (k as f64 + 0.5) / 20.0;
        let t = PI - 2.0 * a;
        let count = |g: f64| {
            let (x, y) = lines_at(g, Field::Real);
            dim3_real_intersection(&x, &y, Angle(a)).unwrap().len()
        };
        three &= count(t) == 3 && count(t + 0.02) != 3 && (t - 0.02 <= 0.0 || count(t - 0.02) != 3);
    }
    let root = dim3_pi3_touch_root().rad();
    let spec = GridSpec::new(GRID_RES, 0, GRID_TOL).unwrap();
    let mut rng = seeded_rng(12);
    let mut tilde = true;
    for _ in 0..10 {
        let x = random_unit(3, Field::Real, &mut rng).unwrap();
        let r = random_unit(3, Field::Real, &mut rng).unwrap();
        let p = x.comps().iter().zip(r.comps()).map(|(a, b)| (a * b).re).sum::<f64>();
        let h: Vec<f64> = (0..3).map(|i| (r.comps()[i] - p * x.comps()[i]).re).collect();
        let hn = h.iter().map(|z| z * z).sum::<f64>().sqrt();
        let t = 2.0 * PI / 3.0;
        let u = real3([0, 1, 2].map(|i| t.cos() * x.comps()[i].re + t.sin() * h[i] / hn));
        let want = [0, 1, 2].map(|i| t.cos() * x.comps()[i].re - t.sin() * h[i] / hn);
        let got = tilde_point(&x, &u).unwrap();
        let err = (0..3).map(|i| (got.comps()[i].re - want[i]).abs()).fold(0.0, f64::max);
        let rep = mc_sphere_card(&x, &u, t, t, &spec).unwrap();
        let near = rep.points.iter().any(|q| (0..3).map(|i| (q[i] - want[i]).powi(2)).sum::<f64>().sqrt() < 2.0 * GRID_TOL);
        tilde &= err < 1e-12 && rep.class() == Some(CardClass::One) && near;
    }
    let ok = three && (root - FRAC_PI_2).abs() <= TOUCH_TOL && tilde;
    outcome(ok, format!("three-line boundary {three}; touch root off by {:.2e}; tilde {tilde}", (root - FRAC_PI_2).abs()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("1 alpha-check bracket", c1_alpha_check),
        ("2 special constants", c2_constants),
        ("3 recursions", c3_recursions),
        ("4 gamma0 bracket and fixed point", c4_gamma0),
        ("5 cardinality tables vs grid oracles", c5_card_tables),
        ("6 projective diameter", c6_proj_diam),
        ("7 bloch doubling", c7_bloch),
        ("8 metric", c8_metric),
        ("9 inequality chain and slope", c9_chain),
        ("10 fit round trip", c10_fit),
        ("11 closure certificates", c11_closure),
        ("12 dim-3 structures", c12_dim3),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.starts_with(&format!("{o} "))) {
            continue;
        }
        let t0 = Instant::now();
        let o = f();
        failed += usize::from(!o.pass);
        println!(
            "{} criterion {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t0.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
