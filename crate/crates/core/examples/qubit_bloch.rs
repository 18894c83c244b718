use angleforge::bloch::{from_bloch, orthocomplement, polar_params, to_bloch};
use angleforge::linalg::{line_angle, random_line, seeded_rng, sphere_angle, Field};

fn main() -> angleforge::error::Result<()> {
    let mut rng = seeded_rng(11);
    for _ in 0..4 {
        let u = random_line(2, Field::Complex, &mut rng)?;
        let v = random_line(2, Field::Complex, &mut rng)?;
        let (pu, pv) = (to_bloch(&u)?, to_bloch(&v)?);
        let (theta, nu) = polar_params(&u)?;
        println!(
            "theta {theta:.4} nu {nu:.4} -> ({:+.4}, {:+.4}, {:+.4});  line angle {:.6}, bloch angle {:.6}",
            pu.0[0],
            pu.0[1],
            pu.0[2],
            line_angle(&u, &v)?.rad(),
            sphere_angle(&pu.unit(), &pv.unit())?.rad()
        );
        let back = from_bloch(&pu);
        let perp = orthocomplement(&u)?;
        let pp = to_bloch(&perp)?;
        println!(
            "  round trip error {:.2e}; complement sits at ({:+.4}, {:+.4}, {:+.4})",
            line_angle(&back, &u)?.rad(),
            pp.0[0],
            pp.0[1],
            pp.0[2]
        );
    }
    Ok(())
}
