use angleforge::linalg::{
    gap_distance, line_angle, random_line, seeded_rng, sphere_angle, transition_probability, Field, Line, UnitVector,
};

fn main() -> angleforge::error::Result<()> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let x = UnitVector::real(&[1.0, 0.0, 0.0])?;
    let y = UnitVector::real(&[h, h, 0.0])?;
    println!("sphere angle x,y       {:.12}", sphere_angle(&x, &y)?.rad());
    println!("sphere angle x,-y      {:.12}", sphere_angle(&x, &y.neg())?.rad());
    // both signs give the same line
    println!("line angle [x],[-y]    {:.12}", line_angle(&x.line(), &y.neg().line())?.rad());

    let mut rng = seeded_rng(7);
    for _ in 0..3 {
        let a = random_line(3, Field::Complex, &mut rng)?;
        let b = random_line(3, Field::Complex, &mut rng)?;
        let t = line_angle(&a, &b)?.rad();
        println!(
            "angle {t:.6}  Tr PQ {:.6} (cos^2 {:.6})  gap {:.6} (sin {:.6})",
            transition_probability(&a, &b)?,
            t.cos().powi(2),
            gap_distance(&a, &b)?,
            t.sin()
        );
    }

    let l = Line::real(&[0.0, -3.0, 4.0])?;
    println!("canonical representative of [(0,-3,4)]: {:?}", l.rep().vector().to_interleaved());
    Ok(())
}
