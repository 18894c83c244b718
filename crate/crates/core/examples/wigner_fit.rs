use std::f64::consts::{FRAC_PI_4, PI};

use angleforge::bloch::orthocomplement;
use angleforge::linalg::{apply_matrix, conj, random_line, random_unitary, seeded_rng, Field, Line, C64};
use angleforge::symmetry_fit::{apply_wigner, double_perp, fit_isometry, is_angle_preserver, LineMapSample};

fn main() -> angleforge::error::Result<()> {
    let mut rng = seeded_rng(5);
    let u = random_unitary(3, Field::Complex, &mut rng)?;
    let lines: Vec<Line> = (0..10).map(|_| random_line(3, Field::Complex, &mut rng)).collect::<Result<_, _>>()?;

    // an antiunitary map: conjugate, then rotate
    let anti = |l: &Line| apply_matrix(&u, &conj(l.rep())).expect("dims match").line();
    let sample = LineMapSample::from_map(Field::Complex, 3, &lines, anti)?;
    let fit = fit_isometry(&sample)?;
    println!("kind {:?}, residual {:.2e}, |M*M - I| {:.2e}", fit.kind, fit.residual, fit.orthonormality_defect());
    let probe = random_line(3, Field::Complex, &mut rng)?;
    let err = angleforge::linalg::line_angle(&apply_wigner(&fit, &probe)?, &anti(&probe))?.rad();
    println!("fitted map on a fresh line: off by {err:.2e}");

    // qubit: pairs of lines at chosen angles, the second of each sent to the
    // orthocomplement of its image
    let v = random_unitary(2, Field::Complex, &mut rng)?;
    let mut pairs = Vec::new();
    for (k, t) in [FRAC_PI_4, PI / 7.0, PI / 5.0].into_iter().enumerate() {
        let a = random_line(2, Field::Complex, &mut rng)?;
        let z = a.rep().comps();
        let perp = Line::complex(vec![-z[1].conj(), z[0].conj()])?;
        let ph = C64::from_polar(1.0, 0.3 * k as f64);
        let b = Line::complex((0..2).map(|i| z[i] * t.cos() + ph * perp.rep().comps()[i] * t.sin()).collect())?;
        let img = |l: &Line| apply_matrix(&v, l.rep()).expect("dims match").line();
        pairs.push((a.clone(), img(&a)));
        pairs.push((b.clone(), orthocomplement(&img(&b))?));
    }
    let sample = LineMapSample::new(Field::Complex, 2, pairs)?;
    for alpha in [FRAC_PI_4, PI / 7.0, PI / 5.0] {
        let r = is_angle_preserver(&sample, alpha, 1e-9);
        println!("preserves {alpha:.6}? {} ({} pairs, {} violations)", r.passes(), r.pairs_checked, r.violations.len());
    }

    let span = double_perp(&lines[..2])?;
    println!("double perp of two lines in C^3 has {} lines", span.len());
    Ok(())
}
