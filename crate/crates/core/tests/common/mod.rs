#![allow(dead_code)]

use std::f64::consts::FRAC_PI_4;

use angleforge::bloch::orthocomplement;
use angleforge::linalg::{apply_matrix, conj, random_line, random_unitary, Field, Line, C64};
use angleforge::symmetry_fit::{Kind, LineMapSample};
use nalgebra::DMatrix;
use rand::Rng;

/// A line at angle `t` from `a` in C², with a chosen relative phase.
pub fn qubit_partner(a: &Line, t: f64, phase: f64) -> Line {
    let z = a.rep().comps();
    let perp = [-z[1].conj(), z[0].conj()];
    let ph = C64::from_polar(1.0, phase);
    Line::complex((0..2).map(|i| z[i] * t.cos() + ph * perp[i] * t.sin()).collect()).expect("unit")
}

/// For each angle, a pair of qubit lines at that angle; the first goes to `[U a]`,
/// the second to `[U b]^⊥`.
pub fn complement_perturbed<R: Rng>(angles: &[f64], rng: &mut R) -> LineMapSample {
    let u = random_unitary(2, Field::Complex, rng).expect("unitary");
    let img = |l: &Line| apply_matrix(&u, l.rep()).expect("dims").line();
    let mut pairs = Vec::new();
    for (k, &t) in angles.iter().enumerate() {
        let a = random_line(2, Field::Complex, rng).expect("line");
        let b = qubit_partner(&a, t, 0.37 * k as f64);
        pairs.push((a.clone(), img(&a)));
        pairs.push((b.clone(), orthocomplement(&img(&b)).expect("qubit")));
    }
    LineMapSample::new(Field::Complex, 2, pairs).expect("distinct inputs")
}

/// The 20 angles `kπ/42`, none of them `π/4`.
pub fn other_angles() -> Vec<f64> {
    (1..=20).map(|k| k as f64 * std::f64::consts::PI / 42.0).filter(|a| (a - FRAC_PI_4).abs() > 1e-3).collect()
}

pub struct Generator {
    pub field: Field,
    pub dim: usize,
    pub kind: Kind,
    pub matrix: DMatrix<C64>,
}

impl Generator {
    pub fn random<R: Rng>(k: usize, rng: &mut R) -> Generator {
        let dim = 2 + k % 3;
        let (field, kind) = match k % 3 {
            0 => (Field::Real, Kind::Linear),
            1 => (Field::Complex, Kind::Linear),
            _ => (Field::Complex, Kind::ConjugateLinear),
        };
        let matrix = random_unitary(dim, field, rng).expect("unitary");
        Generator { field, dim, kind, matrix }
    }

    pub fn apply(&self, l: &Line) -> Line {
        let v = match self.kind {
            Kind::Linear => l.rep().clone(),
            Kind::ConjugateLinear => conj(l.rep()),
        };
        apply_matrix(&self.matrix, &v).expect("dims").line()
    }

    pub fn sample<R: Rng>(&self, n: usize, rng: &mut R) -> LineMapSample {
        let lines: Vec<Line> = (0..n).map(|_| random_line(self.dim, self.field, rng).expect("line")).collect();
        LineMapSample::from_map(self.field, self.dim, &lines, |l| self.apply(l)).expect("sample")
    }
}
