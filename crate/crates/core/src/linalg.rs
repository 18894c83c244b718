//! Vectors, unit vectors and lines over R or C, and the angle functions on them.
//!
//! Components are always stored as `Complex64`; a real vector simply keeps every
//! imaginary part at zero. Inner products are linear in the first argument.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const MAX_DIM: usize = 64;
/// How far from 1 the norm of a `UnitVector` may drift.
pub const UNIT_TOL: f64 = 1e-12;
/// Two lines are equal when their best phase-aligned representatives are this close.
pub const LINE_EQ_TOL: f64 = 1e-10;
/// Residual below which Gram-Schmidt declares a vector dependent.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

/// An angle in radians.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(pub f64);

impl Angle {
    pub const RIGHT: Angle = Angle(std::f64::consts::FRAC_PI_2);
    pub const STRAIGHT: Angle = Angle(std::f64::consts::PI);

    pub fn rad(self) -> f64 {
        self.0
    }

    pub fn approx_eq(self, other: Angle, tol: f64) -> bool {
        (self.0 - other.0).abs() <= tol
    }
}

impl From<f64> for Angle {
    fn from(x: f64) -> Self {
        Angle(x)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::DimensionOutOfRange(dim));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    field: Field,
    comps: Vec<C64>,
}

impl Vector {
    pub fn real(xs: &[f64]) -> Result<Self> {
        check_dim(xs.len())?;
        if xs.iter().any(|x| !x.is_finite()) {
            return Err(crate::error::domain("Vector::real", "non-finite component"));
        }
        Ok(Vector { field: Field::Real, comps: xs.iter().map(|&x| C64::new(x, 0.0)).collect() })
    }

    pub fn complex(zs: Vec<C64>) -> Result<Self> {
        check_dim(zs.len())?;
        if zs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(crate::error::domain("Vector::complex", "non-finite component"));
        }
        Ok(Vector { field: Field::Complex, comps: zs })
    }

    /// Real vectors take one number per component, complex vectors take re/im pairs.
    pub fn from_interleaved(field: Field, xs: &[f64]) -> Result<Self> {
        match field {
            Field::Real => Vector::real(xs),
            Field::Complex => {
                if xs.len() % 2 != 0 {
                    return Err(crate::error::domain(
                        "Vector::from_interleaved",
                        "odd number of entries for a complex vector",
                    ));
                }
                Vector::complex(xs.chunks(2).map(|p| C64::new(p[0], p[1])).collect())
            }
        }
    }

    pub fn to_interleaved(&self) -> Vec<f64> {
        match self.field {
            Field::Real => self.comps.iter().map(|z| z.re).collect(),
            Field::Complex => self.comps.iter().flat_map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn basis(field: Field, dim: usize, k: usize) -> Result<Self> {
        check_dim(dim)?;
        if k >= dim {
            return Err(crate::error::domain("Vector::basis", format!("index {k} >= dim {dim}")));
        }
        let mut comps = vec![C64::new(0.0, 0.0); dim];
        comps[k] = C64::new(1.0, 0.0);
        Ok(Vector { field, comps })
    }

    pub(crate) fn from_parts(field: Field, comps: Vec<C64>) -> Self {
        Vector { field, comps }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[C64] {
        &self.comps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.comps)
    }

    pub fn normalize(&self) -> Result<UnitVector> {
        let n = self.norm();
        if n < 1e-300 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        let comps = self.comps.iter().map(|z| z / n).collect();
        Ok(UnitVector(Vector { field: self.field, comps }))
    }
}

/// A vector whose norm is 1 up to `UNIT_TOL`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector(Vector);

impl UnitVector {
    pub fn new(v: Vector) -> Result<Self> {
        let n = v.norm();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit(n));
        }
        Ok(UnitVector(v))
    }

    pub fn real(xs: &[f64]) -> Result<Self> {
        Vector::real(xs)?.normalize()
    }

    pub fn complex(zs: Vec<C64>) -> Result<Self> {
        Vector::complex(zs)?.normalize()
    }

    pub(crate) fn from_parts_normalized(field: Field, comps: Vec<C64>) -> Self {
        let n = norm(&comps);
        UnitVector(Vector { field, comps: comps.into_iter().map(|z| z / n).collect() })
    }

    pub fn vector(&self) -> &Vector {
        &self.0
    }

    pub fn comps(&self) -> &[C64] {
        &self.0.comps
    }

    pub fn field(&self) -> Field {
        self.0.field
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn neg(&self) -> UnitVector {
        UnitVector(Vector { field: self.0.field, comps: self.0.comps.iter().map(|z| -z).collect() })
    }

    pub fn line(&self) -> Line {
        Line::from_unit(self.clone())
    }
}

/// A one-dimensional subspace, stored through its canonical representative:
/// the first component of modulus above 1e-12 is real and positive.
#[derive(Clone, Debug)]
pub struct Line {
    rep: UnitVector,
}

impl Line {
    pub fn from_unit(u: UnitVector) -> Line {
        let field = u.field();
        let mut comps = u.0.comps;
        if let Some(first) = comps.iter().find(|z| z.norm() > 1e-12).copied() {
            let phase = first.conj() / first.norm();
            for z in comps.iter_mut() {
                *z *= phase;
            }
        }
        Line { rep: UnitVector(Vector { field, comps }) }
    }

    pub fn from_vector(v: &Vector) -> Result<Line> {
        Ok(Line::from_unit(v.normalize()?))
    }

    pub fn real(xs: &[f64]) -> Result<Line> {
        Ok(Line::from_unit(UnitVector::real(xs)?))
    }

    pub fn complex(zs: Vec<C64>) -> Result<Line> {
        Ok(Line::from_unit(UnitVector::complex(zs)?))
    }

    pub fn rep(&self) -> &UnitVector {
        &self.rep
    }

    pub fn field(&self) -> Field {
        self.rep.field()
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// Distance between phase-aligned representatives.
    pub fn rep_distance(&self, other: &Line) -> Result<f64> {
        check_pair(self.rep.vector(), other.rep.vector())?;
        Ok(aligned_distance(self.rep.comps(), other.rep.comps()))
    }

    pub fn approx_eq(&self, other: &Line) -> bool {
        matches!(self.rep_distance(other), Ok(d) if d <= LINE_EQ_TOL)
    }
}

fn check_pair(a: &Vector, b: &Vector) -> Result<()> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(())
}

pub(crate) fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub(crate) fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Norm of the part of unit `a` orthogonal to unit `b`, given `p = <a, b>`.
fn perp_norm(a: &[C64], b: &[C64], p: C64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - p * y).norm_sqr()).sum::<f64>().sqrt()
}

/// Line angle between unit vectors. The atan2 form keeps full accuracy near 0 and pi/2.
pub(crate) fn line_angle_raw(a: &[C64], b: &[C64]) -> f64 {
    let p = dot(a, b);
    perp_norm(a, b, p).atan2(p.norm())
}

/// Sphere angle between real unit vectors.
pub(crate) fn sphere_angle_raw(a: &[C64], b: &[C64]) -> f64 {
    let p = dot(a, b);
    perp_norm(a, b, p).atan2(p.re)
}

fn aligned_distance(a: &[C64], b: &[C64]) -> f64 {
    let p = dot(a, b);
    let phase = if p.norm() > 1e-300 { p / p.norm() } else { C64::new(1.0, 0.0) };
    a.iter().zip(b).map(|(x, y)| (x - phase * y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn inner(x: &Vector, y: &Vector) -> Result<C64> {
    check_pair(x, y)?;
    Ok(dot(&x.comps, &y.comps))
}

/// Angle in [0, pi] between real unit vectors.
pub fn sphere_angle(x: &UnitVector, y: &UnitVector) -> Result<Angle> {
    check_pair(x.vector(), y.vector())?;
    if x.field() != Field::Real {
        return Err(Error::WrongField { op: "sphere_angle", expected: "real" });
    }
    Ok(Angle(sphere_angle_raw(x.comps(), y.comps())))
}

/// Angle in [0, pi/2] between lines.
pub fn line_angle(a: &Line, b: &Line) -> Result<Angle> {
    check_pair(a.rep.vector(), b.rep.vector())?;
    Ok(Angle(line_angle_raw(a.rep.comps(), b.rep.comps())))
}

/// Tr(PQ) for the rank-one projections onto `a` and `b`.
pub fn transition_probability(a: &Line, b: &Line) -> Result<f64> {
    check_pair(a.rep.vector(), b.rep.vector())?;
    Ok(dot(a.rep.comps(), b.rep.comps()).norm_sqr().clamp(0.0, 1.0))
}

/// Operator-norm distance between the projections onto `a` and `b`.
pub fn gap_distance(a: &Line, b: &Line) -> Result<f64> {
    Ok(line_angle(a, b)?.0.sin())
}

/// Rank-one projection matrix onto a line.
pub fn projection(a: &Line) -> DMatrix<C64> {
    let u = a.rep.comps();
    DMatrix::from_fn(u.len(), u.len(), |i, j| u[i] * u[j].conj())
}

/// Orthonormal vectors completing `partial` to a basis of the `dim`-space.
/// Only the new vectors are returned.
pub fn orthonormal_extend(partial: &[UnitVector], dim: usize) -> Result<Vec<UnitVector>> {
    check_dim(dim)?;
    let field = partial.first().map(|u| u.field()).unwrap_or(Field::Real);
    orthonormal_extend_in(field, partial, dim)
}

pub fn orthonormal_extend_in(field: Field, partial: &[UnitVector], dim: usize) -> Result<Vec<UnitVector>> {
    check_dim(dim)?;
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for u in partial {
        if u.field() != field {
            return Err(Error::FieldMismatch);
        }
        if u.dim() != dim {
            return Err(Error::DimensionMismatch { left: u.dim(), right: dim });
        }
        let (r, res) = orthogonalize(u.comps(), &basis);
        if res < RANK_TOL {
            return Err(Error::RankDeficient { residual: res });
        }
        basis.push(r);
    }
    let given = basis.len();
    while basis.len() < dim {
        // largest residual among the standard basis vectors
        let mut best: Option<(Vec<C64>, f64)> = None;
        for k in 0..dim {
            let mut e = vec![C64::new(0.0, 0.0); dim];
            e[k] = C64::new(1.0, 0.0);
            let (r, res) = orthogonalize(&e, &basis);
            if best.as_ref().map_or(true, |b| res > b.1) {
                best = Some((r, res));
            }
        }
        let (r, _) = best.expect("dim >= 1");
        basis.push(r);
    }
    Ok(basis.into_iter().skip(given).map(|c| UnitVector(Vector { field, comps: c })).collect())
}

/// Two passes of modified Gram-Schmidt; returns the normalized residual and its norm.
fn orthogonalize(v: &[C64], basis: &[Vec<C64>]) -> (Vec<C64>, f64) {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let p = dot(&r, b);
            for (x, y) in r.iter_mut().zip(b) {
                *x -= p * y;
            }
        }
    }
    let n = norm(&r);
    if n > 0.0 {
        for x in r.iter_mut() {
            *x /= n;
        }
    }
    (r, n)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly distributed unit vector (normalized Gaussian).
pub fn random_unit<R: Rng + ?Sized>(dim: usize, field: Field, rng: &mut R) -> Result<UnitVector> {
    check_dim(dim)?;
    loop {
        let comps: Vec<C64> = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = if field == Field::Complex { rng.sample(StandardNormal) } else { 0.0 };
                C64::new(re, im)
            })
            .collect();
        if norm(&comps) > 1e-8 {
            return Ok(UnitVector::from_parts_normalized(field, comps));
        }
    }
}

pub fn random_line<R: Rng + ?Sized>(dim: usize, field: Field, rng: &mut R) -> Result<Line> {
    Ok(random_unit(dim, field, rng)?.line())
}

/// Haar-distributed unitary (orthogonal for the real field).
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, field: Field, rng: &mut R) -> Result<DMatrix<C64>> {
    check_dim(dim)?;
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = if field == Field::Complex { rng.sample(StandardNormal) } else { 0.0 };
        C64::new(re, im)
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= ph;
        }
    }
    Ok(q)
}

/// `m * u` for a unit vector, renormalized against rounding.
pub fn apply_matrix(m: &DMatrix<C64>, u: &UnitVector) -> Result<UnitVector> {
    if m.ncols() != u.dim() || m.nrows() != u.dim() {
        return Err(Error::DimensionMismatch { left: m.ncols(), right: u.dim() });
    }
    let comps: Vec<C64> =
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)] * u.comps()[j]).sum()).collect();
    Vector::from_parts(u.field(), comps).normalize()
}

pub fn conj(u: &UnitVector) -> UnitVector {
    UnitVector(Vector { field: u.field(), comps: u.comps().iter().map(|z| z.conj()).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn sphere_angles_of_basis_vectors() {
        let e1 = UnitVector::real(&[1.0, 0.0, 0.0]).unwrap();
        let e2 = UnitVector::real(&[0.0, 1.0, 0.0]).unwrap();
        assert!((sphere_angle(&e1, &e2).unwrap().0 - FRAC_PI_2).abs() < 1e-15);
        assert!((sphere_angle(&e1, &e1.neg()).unwrap().0 - PI).abs() < 1e-15);
        assert_eq!(sphere_angle(&e1, &e1).unwrap().0, 0.0);
    }

    #[test]
    fn complex_line_angle_ignores_phase() {
        let s = 0.5f64.sqrt();
        let a = Line::complex(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let b = Line::complex(vec![C64::new(s, 0.0), C64::new(0.0, s)]).unwrap();
        assert!((line_angle(&a, &b).unwrap().0 - FRAC_PI_4).abs() < 1e-15);
        let c = Line::complex(vec![C64::new(0.0, s), C64::new(-s, 0.0)]).unwrap();
        assert!(b.approx_eq(&c));
    }

    #[test]
    fn canonical_rep_has_positive_leading_entry() {
        let l = Line::complex(vec![C64::new(0.0, 0.0), C64::new(0.0, -2.0), C64::new(1.0, 1.0)]).unwrap();
        let z = l.rep().comps()[1];
        assert!(z.im.abs() < 1e-15 && z.re > 0.0);
    }

    #[test]
    fn mismatches_are_errors() {
        let a = Line::real(&[1.0, 0.0]).unwrap();
        let b = Line::real(&[1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(line_angle(&a, &b), Err(Error::DimensionMismatch { .. })));
        let c = Line::complex(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        assert_eq!(line_angle(&a, &c).unwrap_err(), Error::FieldMismatch);
        assert!(matches!(Vector::real(&[0.0; 65]), Err(Error::DimensionOutOfRange(65))));
        assert_eq!(Vector::real(&[0.0, 0.0]).unwrap().normalize().unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn extend_rejects_dependent_input() {
        let a = UnitVector::real(&[1.0, 1.0, 0.0]).unwrap();
        let b = UnitVector::real(&[-1.0, -1.0, 0.0]).unwrap();
        assert!(matches!(orthonormal_extend(&[a, b], 3), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn extend_completes_basis() {
        let mut rng = seeded_rng(3);
        let a = random_unit(5, Field::Complex, &mut rng).unwrap();
        let b = random_unit(5, Field::Complex, &mut rng).unwrap();
        let rest = orthonormal_extend(&[a.clone(), b.clone()], 5).unwrap();
        assert_eq!(rest.len(), 3);
        let b_perp = orthonormal_extend(&[a.clone()], 5).unwrap();
        for u in &rest {
            assert!(dot(u.comps(), a.comps()).norm() < 1e-12);
            assert!(dot(u.comps(), b.comps()).norm() < 1e-12);
        }
        assert_eq!(b_perp.len(), 4);
    }

    #[test]
    fn interleaved_round_trip() {
        let v = Vector::from_interleaved(Field::Complex, &[1.0, 2.0, 3.0, -4.0]).unwrap();
        assert_eq!(v.comps()[1], C64::new(3.0, -4.0));
        assert_eq!(v.to_interleaved(), vec![1.0, 2.0, 3.0, -4.0]);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = seeded_rng(11);
        let u = random_unitary(4, Field::Complex, &mut rng).unwrap();
        let id = u.adjoint() * &u;
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((id[(i, j)] - C64::new(e, 0.0)).norm() < 1e-12);
            }
        }
    }
}
