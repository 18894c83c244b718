use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

use angleforge::closure::{
    closure, replay, Context, RigidityCertificate, Verdict, DEFAULT_MAX_STEPS, DEFAULT_TERMINAL_THRESHOLD,
};
use angleforge::linalg::Angle;

fn run(seed: f64, ctx: Context, dim: usize) -> RigidityCertificate {
    closure(Angle(seed), ctx, dim, DEFAULT_MAX_STEPS, DEFAULT_TERMINAL_THRESHOLD)
}

fn seeds(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| lo + (hi - lo) * (k as f64 + 0.5) / n as f64)
}

#[test]
fn sphere_seeds_are_rigid_and_replay() {
    for s in seeds(0.0, PI, 100) {
        let c = run(s, Context::SphereReal, 3);
        assert_eq!(c.verdict, Verdict::IsometryViaSmallAngles, "seed {s}");
        replay(&c).unwrap_or_else(|e| panic!("seed {s}: {e}"));
    }
    for s in [PI / 7.0, 2.0 * PI / 3.0, 0.75 * PI, 1.4, 2.9] {
        let c = run(s, Context::SphereReal, 5);
        assert_eq!(c.verdict, Verdict::IsometryViaSmallAngles, "seed {s}");
        replay(&c).unwrap();
    }
}

#[test]
fn right_angle_on_the_sphere_is_up_to_sign() {
    let c = run(FRAC_PI_2, Context::SphereReal, 3);
    assert_eq!(c.verdict, Verdict::IsometryUpToSign);
    assert!(!c.verdict.is_rigid());
    replay(&c).unwrap();
}

#[test]
fn real_projective_seeds() {
    for dim in [3, 4, 6] {
        for s in seeds(0.0, FRAC_PI_2, 100) {
            let c = run(s, Context::ProjReal, dim);
            assert!(c.verdict.is_rigid(), "dim {dim} seed {s}: {}", c.verdict);
            replay(&c).unwrap_or_else(|e| panic!("dim {dim} seed {s}: {e}"));
        }
    }
    let c = run(FRAC_PI_3, Context::ProjReal, 3);
    assert_eq!(c.verdict, Verdict::IsometryViaOrthogonality);
    replay(&c).unwrap();
}

#[test]
fn complex_projective_seeds() {
    for s in seeds(0.0, FRAC_PI_4, 100) {
        let c = run(s, Context::ProjComplex, 3);
        assert_eq!(c.verdict, Verdict::IsometryViaSmallAngles, "seed {s}");
        replay(&c).unwrap();
    }
    let c = run(FRAC_PI_4, Context::ProjComplex, 4);
    assert_eq!(c.verdict, Verdict::IsometryViaOrthogonality);
    replay(&c).unwrap();
    for s in seeds(FRAC_PI_4, FRAC_PI_2, 40) {
        let c = run(s, Context::ProjComplex, 3);
        assert_eq!(c.verdict, Verdict::Inconclusive, "seed {s}");
        replay(&c).unwrap();
    }
}

#[test]
fn qubit_seeds() {
    for s in seeds(0.0, FRAC_PI_2, 100) {
        let c = run(s, Context::ProjComplexDim2, 2);
        replay(&c).unwrap();
        if (s - FRAC_PI_4).abs() > 1e-9 {
            assert_eq!(c.verdict, Verdict::IsometryViaSmallAngles, "seed {s}");
        }
    }
    let c = run(FRAC_PI_4, Context::ProjComplexDim2, 2);
    assert_eq!(c.verdict, Verdict::QubitAntipodalAmbiguity);
    replay(&c).unwrap();
}

#[test]
fn out_of_range_seeds_are_inconclusive() {
    let cases = [
        (0.0, Context::SphereReal, 3),
        (PI, Context::SphereReal, 3),
        (-0.3, Context::SphereReal, 3),
        (1.0, Context::SphereReal, 2),
        (FRAC_PI_2, Context::ProjReal, 3),
        (1.7, Context::ProjReal, 3),
        (1.0, Context::ProjReal, 2),
        (FRAC_PI_2, Context::ProjComplex, 3),
        (FRAC_PI_2, Context::ProjComplexDim2, 2),
        (f64::NAN, Context::ProjComplex, 3),
    ];
    for (s, ctx, dim) in cases {
        let c = run(s, ctx, dim);
        assert_eq!(c.verdict, Verdict::Inconclusive, "{ctx} dim {dim} seed {s}");
        replay(&c).unwrap();
    }
}

#[test]
fn json_round_trip_and_tampering() {
    let c = run(PI / 7.0, Context::SphereReal, 3);
    let back = RigidityCertificate::from_json(&c.to_json()).unwrap();
    assert_eq!(back, c);

    let mut bad = c.clone();
    bad.steps[1].outputs[0] += 1e-6;
    assert!(replay(&bad).is_err());

    let mut promoted = run(1.0, Context::ProjComplex, 3);
    promoted.verdict = Verdict::IsometryViaSmallAngles;
    assert!(replay(&promoted).is_err());

    let mut truncated = c.clone();
    truncated.steps.truncate(3);
    assert!(replay(&truncated).is_err());

    assert!(RigidityCertificate::from_json("{\"seed\": 1.0,").is_err());
}

#[test]
fn step_budget_is_respected() {
    let c = closure(Angle(0.01), Context::SphereReal, 3, 4, 1e-12);
    assert!(c.steps.len() <= 4);
    assert_eq!(c.verdict, Verdict::Inconclusive);
    replay(&c).unwrap();
}
