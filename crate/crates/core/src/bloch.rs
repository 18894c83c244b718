//! Qubit lines as points of the unit 2-sphere.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{Field, Line, UnitVector, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint(pub [f64; 3]);

impl BlochPoint {
    pub fn new(p: [f64; 3]) -> Result<Self> {
        let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnit(n));
        }
        Ok(BlochPoint(p))
    }

    pub fn unit(&self) -> UnitVector {
        UnitVector::real(&self.0).expect("bloch point is unit")
    }
}

fn check_qubit(l: &Line, op: &'static str) -> Result<()> {
    if l.field() != Field::Complex {
        return Err(Error::WrongField { op, expected: "complex" });
    }
    if l.dim() != 2 {
        return Err(domain(op, format!("expected a qubit line, got dim {}", l.dim())));
    }
    Ok(())
}

/// `(θ, ν)` with `[(cos θ, e^{iν} sin θ)] = L`, `θ ∈ [0, π/2]`, `ν ∈ [0, 2π)`.
pub fn polar_params(l: &Line) -> Result<(f64, f64)> {
    check_qubit(l, "polar_params")?;
    let z = l.rep().comps();
    let theta = z[1].norm().atan2(z[0].norm());
    let nu = if z[0].norm() > 1e-15 && z[1].norm() > 1e-15 {
        (z[1] * z[0].conj()).arg().rem_euclid(std::f64::consts::TAU)
    } else {
        0.0
    };
    Ok((theta, nu))
}

pub fn to_bloch(l: &Line) -> Result<BlochPoint> {
    let (theta, nu) = polar_params(l)?;
    let (s2, c2) = (2.0 * theta).sin_cos();
    Ok(BlochPoint([s2 * nu.cos(), s2 * nu.sin(), c2]))
}

pub fn from_bloch(p: &BlochPoint) -> Line {
    let [x, y, z] = p.0;
    let theta = 0.5 * x.hypot(y).atan2(z);
    let nu = if x.hypot(y) > 0.0 { y.atan2(x) } else { 0.0 };
    let (s, c) = theta.sin_cos();
    Line::complex(vec![C64::new(c, 0.0), C64::from_polar(s, nu)]).expect("unit by construction")
}

/// The unique qubit line orthogonal to `l`.
pub fn orthocomplement(l: &Line) -> Result<Line> {
    check_qubit(l, "orthocomplement")?;
    let z = l.rep().comps();
    Line::complex(vec![-z[1].conj(), z[0].conj()])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(p: BlochPoint, q: [f64; 3]) -> bool {
        p.0.iter().zip(q).all(|(a, b)| (a - b).abs() < 1e-15)
    }

    #[test]
    fn poles_and_equator() {
        let l = |a: f64, b: f64| Line::complex(vec![C64::new(a, 0.0), C64::new(b, 0.0)]).unwrap();
        assert!(close(to_bloch(&l(1.0, 0.0)).unwrap(), [0.0, 0.0, 1.0]));
        assert!(close(to_bloch(&l(0.0, 1.0)).unwrap(), [0.0, 0.0, -1.0]));
        assert!(close(to_bloch(&l(1.0, 1.0)).unwrap(), [1.0, 0.0, 0.0]));
        assert!(from_bloch(&BlochPoint([0.0, 0.0, -1.0])).approx_eq(&l(0.0, 1.0)));
        assert!(orthocomplement(&l(1.0, 0.0)).unwrap().approx_eq(&l(0.0, 1.0)));
    }

    #[test]
    fn rejects_non_qubits() {
        let l = Line::real(&[1.0, 0.0]).unwrap();
        assert!(to_bloch(&l).is_err());
    }
}
