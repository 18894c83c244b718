mod common;

use std::f64::consts::FRAC_PI_4;

use angleforge::error::Error;
use angleforge::linalg::{line_angle, random_line, seeded_rng, Field, Line};
use angleforge::symmetry_fit::{apply_wigner, fit_isometry, is_angle_preserver, LineMapSample};
use common::{complement_perturbed, other_angles, Generator};

const FIT_TOL: f64 = 1e-8;

#[test]
fn generators_are_recovered() {
    let mut rng = seeded_rng(2024);
    for k in 0..50 {
        let g = Generator::random(k, &mut rng);
        let s = g.sample(2 * g.dim + 3, &mut rng);
        let fit = fit_isometry(&s).unwrap();
        assert!(fit.residual < FIT_TOL, "generator {k}: residual {}", fit.residual);
        assert_eq!(fit.kind, g.kind, "generator {k}");
        assert!(fit.orthonormality_defect() < 1e-10);
        let probe = random_line(g.dim, g.field, &mut rng).unwrap();
        assert!(line_angle(&apply_wigner(&fit, &probe).unwrap(), &g.apply(&probe)).unwrap().rad() < FIT_TOL);
    }
}

#[test]
fn permuted_outputs_are_rejected() {
    let mut rng = seeded_rng(9);
    let lines: Vec<Line> = (0..8).map(|_| random_line(3, Field::Complex, &mut rng).unwrap()).collect();
    let pairs = (0..8).map(|i| (lines[i].clone(), lines[(i * 3 + 1) % 8].clone())).collect();
    let s = LineMapSample::new(Field::Complex, 3, pairs).unwrap();
    assert!(matches!(fit_isometry(&s), Err(Error::AngleInconsistent { .. })));
}

#[test]
fn complement_perturbation_only_preserves_the_quarter() {
    let mut rng = seeded_rng(77);
    let mut angles = vec![FRAC_PI_4];
    angles.extend(other_angles());
    let s = complement_perturbed(&angles, &mut rng);
    assert!(is_angle_preserver(&s, FRAC_PI_4, 1e-9).passes());
    for a in other_angles() {
        assert!(!is_angle_preserver(&s, a, 1e-9).passes(), "angle {a}");
    }
}

#[test]
fn too_few_lines() {
    let mut rng = seeded_rng(1);
    let g = Generator::random(1, &mut rng);
    let s = g.sample(1, &mut rng);
    assert!(fit_isometry(&s).is_err());
}
