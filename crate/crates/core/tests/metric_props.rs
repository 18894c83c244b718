use angleforge::linalg::{
    gap_distance, line_angle, orthonormal_extend, projection, random_line, random_unit, seeded_rng,
    sphere_angle, transition_probability, Field, Line, UnitVector, C64,
};
use proptest::prelude::*;

const EPS: f64 = 1e-10;

fn field(complex: bool) -> Field {
    if complex {
        Field::Complex
    } else {
        Field::Real
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn line_angle_is_a_metric(seed in any::<u64>(), dim in 2usize..6, complex in any::<bool>()) {
        let mut rng = seeded_rng(seed);
        let f = field(complex);
        let p = random_line(dim, f, &mut rng).unwrap();
        let q = random_line(dim, f, &mut rng).unwrap();
        let r = random_line(dim, f, &mut rng).unwrap();
        let pq = line_angle(&p, &q).unwrap().rad();
        prop_assert!((pq - line_angle(&q, &p).unwrap().rad()).abs() < 1e-15);
        prop_assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&pq));
        prop_assert!(line_angle(&p, &p).unwrap().rad() < 1e-7);
        let slack = pq + line_angle(&q, &r).unwrap().rad() - line_angle(&p, &r).unwrap().rad();
        prop_assert!(slack >= -EPS, "slack {}", slack);
    }

    #[test]
    fn sphere_angle_triangle(seed in any::<u64>(), dim in 2usize..6) {
        let mut rng = seeded_rng(seed);
        let x = random_unit(dim, Field::Real, &mut rng).unwrap();
        let y = random_unit(dim, Field::Real, &mut rng).unwrap();
        let z = random_unit(dim, Field::Real, &mut rng).unwrap();
        let s = |a: &UnitVector, b: &UnitVector| sphere_angle(a, b).unwrap().rad();
        prop_assert!(s(&x, &y) + s(&y, &z) - s(&x, &z) >= -EPS);
        prop_assert!((s(&x, &y) + s(&x, &y.neg()) - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn angle_ignores_representative(seed in any::<u64>(), dim in 2usize..6, phase in 0.0..std::f64::consts::TAU, scale in 0.1f64..10.0) {
        let mut rng = seeded_rng(seed);
        let p = random_line(dim, Field::Complex, &mut rng).unwrap();
        let q = random_line(dim, Field::Complex, &mut rng).unwrap();
        let w = C64::from_polar(scale, phase);
        let moved = Line::complex(p.rep().comps().iter().map(|z| z * w).collect()).unwrap();
        prop_assert!(moved.approx_eq(&p));
        let d = line_angle(&moved, &q).unwrap().rad() - line_angle(&p, &q).unwrap().rad();
        prop_assert!(d.abs() < 1e-12);
    }

    #[test]
    fn gap_is_spectral_norm(seed in any::<u64>(), dim in 2usize..5, complex in any::<bool>()) {
        let mut rng = seeded_rng(seed);
        let f = field(complex);
        let p = random_line(dim, f, &mut rng).unwrap();
        let q = random_line(dim, f, &mut rng).unwrap();
        let diff = projection(&p) - projection(&q);
        let norm = diff.singular_values().max();
        prop_assert!((gap_distance(&p, &q).unwrap() - norm).abs() < 1e-10);
        let tr = (projection(&p) * projection(&q)).trace().re;
        prop_assert!((transition_probability(&p, &q).unwrap() - tr).abs() < 1e-12);
    }

    #[test]
    fn extension_is_orthonormal(seed in any::<u64>(), dim in 2usize..6, complex in any::<bool>()) {
        let mut rng = seeded_rng(seed);
        let f = field(complex);
        let first = random_unit(dim, f, &mut rng).unwrap();
        let mut all = vec![first.clone()];
        all.extend(orthonormal_extend(&[first], dim).unwrap());
        prop_assert_eq!(all.len(), dim);
        for i in 0..dim {
            for j in 0..dim {
                let ip: C64 = all[i].comps().iter().zip(all[j].comps()).map(|(a, b)| a.conj() * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((ip - C64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }
}
