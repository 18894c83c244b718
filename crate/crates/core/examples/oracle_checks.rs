use std::f64::consts::PI;

use angleforge::angle_sets::{proj_cap_pair_set, proj_card, proj_diam, sphere_card};
use angleforge::linalg::{Angle, Field, Line, UnitVector, C64};
use angleforge::oracle::{mc_diam, mc_proj_card, mc_sphere_card, GridSpec};

fn main() -> angleforge::error::Result<()> {
    let spec = GridSpec::new(400, 0, 0.015)?;
    let x = UnitVector::real(&[1.0, 0.0, 0.0])?;
    for (a, b, g) in [(PI / 3.0, PI / 3.0, 2.0 * PI / 3.0), (0.5, 0.9, 1.0), (0.5, 0.9, 2.0)] {
        let y = UnitVector::real(&[g.cos(), g.sin(), 0.0])?;
        let rep = mc_sphere_card(&x, &y, a, b, &spec)?;
        println!(
            "sphere a {a:.3} b {b:.3} g {g:.3}: table {:?}, grid {:?} ({} clusters)",
            sphere_card(Angle(a), Angle(b), Angle(g), 3)?,
            rep.class().expect("class"),
            rep.clusters
        );
    }
    let c = |re: f64| C64::new(re, 0.0);
    for (a, b, g) in [(0.3, 0.5, 0.4f64), (0.3, 0.5, 1.0)] {
        let v = Line::complex(vec![c(1.0), c(0.0), c(0.0)])?;
        let w = Line::complex(vec![c(g.cos()), c(g.sin()), c(0.0)])?;
        let rep = mc_proj_card(&v, &w, a, b, &spec)?;
        println!(
            "complex lines a {a} b {b} g {g}: table {:?}, grid {:?}",
            proj_card(Angle(a), Angle(b), Angle(g), 3, Field::Complex)?,
            rep.class().expect("class")
        );
    }
    let (a, g): (f64, f64) = (0.5, 0.7);
    let v = Line::complex(vec![c(1.0), c(0.0), c(0.0)])?;
    let w = Line::complex(vec![c(g.cos()), c(g.sin()), c(0.0)])?;
    let d = mc_diam(&proj_cap_pair_set(&v, &w, Angle(a))?, &GridSpec::new(500, 0, 0.015)?)?;
    println!(
        "complex cap diameter a {a} g {g}: closed form {:.9}, sampled {:.9} from {} points",
        proj_diam(Angle(a), Angle(g))?.rad(),
        d.diameter().expect("diameter"),
        d.samples_used
    );
    Ok(())
}
