use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use angleforge::angle_sets::{
    beta_of, dim3_pi3_cross_angles, dim3_real_intersection, gamma0, proj_cap_pair_set, proj_card, proj_diam,
    proj_extremal_pair, sphere_cap_diam, sphere_card, tilde_point,
};
use angleforge::linalg::{line_angle, sphere_angle, Angle, Field, Line, UnitVector, C64};

fn main() -> angleforge::error::Result<()> {
    println!("sphere x^(a) ∩ y^(b), dim 3:");
    for (a, b, g) in [(PI / 3.0, PI / 3.0, 2.0 * PI / 3.0), (0.4, 0.7, 0.2), (0.4, 0.7, 1.5), (1.0, 1.0, 1.0)] {
        println!("  a {a:.4} b {b:.4} g {g:.4}: {:?}", sphere_card(Angle(a), Angle(b), Angle(g), 3)?);
    }
    println!("lines [v]^a ∩ [w]^b, dim 3:");
    for field in [Field::Real, Field::Complex] {
        for (a, b, g) in [(0.3, 0.5, 0.2), (0.3, 0.5, 0.8), (1.2, 1.2, PI - 2.4)] {
            println!("  {field:?} a {a:.4} b {b:.4} g {g:.4}: {:?}", proj_card(Angle(a), Angle(b), Angle(g), 3, field)?);
        }
    }

    let a = 0.5;
    let g0 = gamma0(Angle(a))?.rad();
    println!("\nbeta({a}) = {:.12}, gamma0({a}) = {g0:.12}", beta_of(a));
    println!("cap diameter at gamma0: {:.12}", sphere_cap_diam(Angle(a), Angle(g0))?.rad());
    println!("cap diameter at 0.3:    {:.12}", sphere_cap_diam(Angle(a), Angle(0.3))?.rad());

    let x = UnitVector::real(&[1.0, 0.0, 0.0])?;
    let t = 2.0 * PI / 3.0;
    let u = UnitVector::real(&[t.cos(), t.sin(), 0.0])?;
    let v = tilde_point(&x, &u)?;
    println!("\ntilde point {:?}: angles {:.12} {:.12}", v.vector().to_interleaved(), sphere_angle(&x, &v)?.rad(), sphere_angle(&u, &v)?.rad());

    let c = |re: f64| C64::new(re, 0.0);
    let g: f64 = 0.4;
    let v = Line::complex(vec![c(1.0), c(0.0), c(0.0)])?;
    let w = Line::complex(vec![c(g.cos()), c(g.sin()), c(0.0)])?;
    let alpha = 0.35;
    let (p, q) = proj_extremal_pair(&v, &w, Angle(alpha))?;
    println!("\ncomplex caps a {alpha} g {g}: diameter {:.12}", proj_diam(Angle(alpha), Angle(g))?.rad());
    println!("extremal pair angle {:.12}", line_angle(&p, &q)?.rad());
    let set = proj_cap_pair_set(&v, &w, Angle(alpha))?;
    let worst = set.materialize(64).iter().map(|u| set.residual(u)).fold(0.0, f64::max);
    println!("64 sampled points, worst residual {worst:.2e}");

    let a = 1.2;
    let x = Line::real(&[1.0, 0.0, 0.0])?;
    for g in [PI - 2.0 * a - 0.05, PI - 2.0 * a, PI - 2.0 * a + 0.05] {
        let y = Line::real(&[g.cos(), g.sin(), 0.0])?;
        println!("real dim 3, a {a} g {g:.4}: {} lines", dim3_real_intersection(&x, &y, Angle(a))?.len());
    }
    for g in [FRAC_PI_3 + 0.1, 1.4, FRAC_PI_2] {
        println!("pi/3 configuration, g {g:.4}: cross |<.,.>| = {:.12}", dim3_pi3_cross_angles(Angle(g))?);
    }
    Ok(())
}
