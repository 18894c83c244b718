//! Reconstruct the (conjugate-)linear isometry behind a sampled line map.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{conj, line_angle, Field, Line, UnitVector, Vector, C64};

/// Largest pairwise angle defect a sample may carry and still be fitted.
pub const CONSISTENCY_TOL: f64 = 1e-6;
/// A triple product with smaller imaginary part does not decide linearity.
pub const TRIPLE_TOL: f64 = 1e-9;
/// Eigenvalues below this (relative to the largest) count as zero.
pub const NULL_TOL: f64 = 1e-10;
/// Only the first lines of a sample are searched for a deciding triple.
const TRIPLE_SCAN: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Linear,
    ConjugateLinear,
}

#[derive(Clone, Debug)]
pub struct LineMapSample {
    field: Field,
    dim: usize,
    pairs: Vec<(Line, Line)>,
}

impl LineMapSample {
    pub fn new(field: Field, dim: usize, pairs: Vec<(Line, Line)>) -> Result<Self> {
        for (a, b) in &pairs {
            for l in [a, b] {
                if l.field() != field {
                    return Err(Error::FieldMismatch);
                }
                if l.dim() != dim {
                    return Err(Error::DimensionMismatch { left: l.dim(), right: dim });
                }
            }
        }
        for i in 0..pairs.len() {
            for j in 0..i {
                if pairs[i].0.approx_eq(&pairs[j].0) {
                    return Err(domain("LineMapSample", format!("input lines {j} and {i} coincide")));
                }
            }
        }
        Ok(LineMapSample { field, dim, pairs })
    }

    /// Sample of `l ↦ map(l)` over the given inputs.
    pub fn from_map(field: Field, dim: usize, inputs: &[Line], map: impl Fn(&Line) -> Line) -> Result<Self> {
        let pairs = inputs.iter().map(|l| (l.clone(), map(l))).collect();
        LineMapSample::new(field, dim, pairs)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pairs(&self) -> &[(Line, Line)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Largest `|∡(in_i, in_j) − ∡(out_i, out_j)|` and the pair attaining it.
    pub fn angle_defect(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for i in 0..self.pairs.len() {
            for j in 0..i {
                let a = line_angle(&self.pairs[i].0, &self.pairs[j].0).expect("checked").0;
                let b = line_angle(&self.pairs[i].1, &self.pairs[j].1).expect("checked").0;
                let d = (a - b).abs();
                if d > worst.0 {
                    worst = (d, j, i);
                }
            }
        }
        worst
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FittedIsometry {
    pub field: Field,
    pub matrix: DMatrix<C64>,
    pub kind: Kind,
    pub residual: f64,
}

impl FittedIsometry {
    pub fn identity(field: Field, dim: usize) -> Self {
        FittedIsometry { field, matrix: DMatrix::identity(dim, dim), kind: Kind::Linear, residual: 0.0 }
    }

    /// Largest deviation of `MᴴM` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.matrix.adjoint() * &self.matrix;
        let n = g.nrows();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| {
            let e = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            (g[(i, j)] - e).norm()
        }).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.matrix.nrows())
            .map(|i| (0..self.matrix.ncols()).map(|j| [self.matrix[(i, j)].re, self.matrix[(i, j)].im]).collect())
            .collect();
        serde_json::json!({
            "field": self.field,
            "kind": self.kind,
            "residual": self.residual,
            "matrix": rows,
        })
    }
}

fn mat_vec(m: &DMatrix<C64>, z: &[C64]) -> Vec<C64> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)] * z[j]).sum()).collect()
}

/// `[M v]` or `[M v̄]` depending on the kind.
pub fn apply_wigner(f: &FittedIsometry, l: &Line) -> Result<Line> {
    if l.dim() != f.matrix.ncols() {
        return Err(Error::DimensionMismatch { left: l.dim(), right: f.matrix.ncols() });
    }
    if l.field() != f.field {
        return Err(Error::FieldMismatch);
    }
    let v = match f.kind {
        Kind::Linear => l.rep().clone(),
        Kind::ConjugateLinear => conj(l.rep()),
    };
    let mut out = mat_vec(&f.matrix, v.comps());
    if f.field == Field::Real {
        out.iter_mut().for_each(|z| z.im = 0.0);
    }
    let vec = match f.field {
        Field::Real => Vector::real(&out.iter().map(|z| z.re).collect::<Vec<_>>())?,
        Field::Complex => Vector::complex(out)?,
    };
    Line::from_vector(&vec)
}

fn triple(a: &Line, b: &Line, c: &Line) -> C64 {
    let ip = |x: &Line, y: &Line| -> C64 { x.rep().comps().iter().zip(y.rep().comps()).map(|(p, q)| p * q.conj()).sum() };
    ip(a, b) * ip(b, c) * ip(c, a)
}

/// Decide linearity from the sign of `Im ⟨u,v⟩⟨v,w⟩⟨w,u⟩` before and after the map.
pub fn classify_antilinearity(s: &LineMapSample) -> Result<Kind> {
    if s.field != Field::Complex {
        return Err(Error::Undecidable("real field has no conjugation".into()));
    }
    let m = s.len().min(TRIPLE_SCAN);
    let mut best: Option<(f64, usize, usize, usize)> = None;
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let t = triple(&s.pairs[i].0, &s.pairs[j].0, &s.pairs[k].0).im.abs();
                if best.map_or(true, |b| t > b.0) {
                    best = Some((t, i, j, k));
                }
            }
        }
    }
    match best {
        Some((t, i, j, k)) if t > TRIPLE_TOL => {
            let tin = triple(&s.pairs[i].0, &s.pairs[j].0, &s.pairs[k].0).im;
            let tout = triple(&s.pairs[i].1, &s.pairs[j].1, &s.pairs[k].1).im;
            if tout.abs() <= TRIPLE_TOL {
                return Err(Error::Undecidable(format!("image of triple ({i}, {j}, {k}) has real triple product")));
            }
            Ok(if tin.signum() == tout.signum() { Kind::Linear } else { Kind::ConjugateLinear })
        }
        _ => Err(Error::Undecidable("every sampled triple product is real".into())),
    }
}

/// Indices of `dim` inputs chosen greedily by largest Gram-Schmidt residual.
fn greedy_basis(vs: &[Vec<C64>], dim: usize) -> Result<Vec<usize>> {
    let mut chosen = Vec::with_capacity(dim);
    let mut ortho: Vec<Vec<C64>> = Vec::with_capacity(dim);
    let mut residuals: Vec<Vec<C64>> = vs.to_vec();
    for _ in 0..dim {
        let (idx, nrm) = residuals
            .iter()
            .enumerate()
            .filter(|(i, _)| !chosen.contains(i))
            .map(|(i, r)| (i, r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()))
            .fold((usize::MAX, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if idx == usize::MAX || nrm < 1e-8 {
            return Err(Error::RankDeficient { residual: nrm.max(0.0) });
        }
        let q: Vec<C64> = residuals[idx].iter().map(|z| z / nrm).collect();
        for r in residuals.iter_mut() {
            let p: C64 = r.iter().zip(&q).map(|(x, y)| x * y.conj()).sum();
            r.iter_mut().zip(&q).for_each(|(x, y)| *x -= p * y);
        }
        chosen.push(idx);
        ortho.push(q);
    }
    Ok(chosen)
}

/// Eigenvector of the smallest eigenvalue of a Hermitian matrix.
fn smallest_eigvec(g: DMatrix<C64>) -> DVector<C64> {
    let eig = g.symmetric_eigen();
    let (k, _) = eig.eigenvalues.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    eig.eigenvectors.column(k).into_owned()
}

/// Nearest unitary (orthogonal) matrix in Frobenius norm.
fn polar_factor(m: DMatrix<C64>) -> DMatrix<C64> {
    let svd = m.svd(true, true);
    svd.u.expect("u requested") * svd.v_t.expect("v requested")
}

/// Reconstruct the isometry implementing the sampled map.
pub fn fit_isometry(s: &LineMapSample) -> Result<FittedIsometry> {
    let n = s.dim;
    if s.len() < n {
        return Err(Error::RankDeficient { residual: 0.0 });
    }
    let (defect, i, j) = s.angle_defect();
    if defect > CONSISTENCY_TOL {
        return Err(Error::AngleInconsistent { i, j, defect });
    }
    let kind = match s.field {
        Field::Real => Kind::Linear,
        Field::Complex => classify_antilinearity(s).unwrap_or(Kind::Linear),
    };
    let inputs: Vec<Vec<C64>> = s
        .pairs
        .iter()
        .map(|(a, _)| match kind {
            Kind::Linear => a.rep().comps().to_vec(),
            Kind::ConjugateLinear => conj(a.rep()).comps().to_vec(),
        })
        .collect();
    let outputs: Vec<Vec<C64>> = s.pairs.iter().map(|(_, b)| b.rep().comps().to_vec()).collect();

    let basis = greedy_basis(&inputs, n)?;
    let a = DMatrix::from_fn(n, n, |r, c| inputs[basis[c]][r]);
    let b = DMatrix::from_fn(n, n, |r, c| outputs[basis[c]][r]);
    let a_inv = a.clone().try_inverse().ok_or(Error::RankDeficient { residual: 0.0 })?;

    // phases λ with M = B diag(λ) A⁻¹ mapping every sampled input onto its output line
    let mut g = DMatrix::<C64>::zeros(n, n);
    for (x, d) in inputs.iter().zip(&outputs) {
        let coeff = mat_vec(&a_inv, x);
        let dv = DVector::from_column_slice(d);
        let mut k = DMatrix::from_fn(n, n, |r, c| b[(r, c)] * coeff[c]);
        let proj = &dv * (dv.adjoint() * &k);
        k -= proj;
        g += k.adjoint() * k;
    }
    let mut lambda = smallest_eigvec(g);
    let anchor = lambda.iter().copied().max_by(|p, q| p.norm().total_cmp(&q.norm())).unwrap_or(C64::new(1.0, 0.0));
    let rot = if anchor.norm() > 0.0 { anchor.conj() / anchor.norm() } else { C64::new(1.0, 0.0) };
    for z in lambda.iter_mut() {
        let w = *z * rot;
        *z = match s.field {
            Field::Real => C64::new(if w.re < 0.0 { -1.0 } else { 1.0 }, 0.0),
            Field::Complex => if w.norm() > 1e-300 { w / w.norm() } else { C64::new(1.0, 0.0) },
        };
    }
    let m = DMatrix::from_fn(n, n, |r, c| b[(r, c)] * lambda[c]) * a_inv;
    let mut u = polar_factor(m);
    if s.field == Field::Real {
        u.iter_mut().for_each(|z| z.im = 0.0);
    }
    let mut fit = FittedIsometry { field: s.field, matrix: u, kind, residual: 0.0 };
    let mut residual: f64 = 0.0;
    for (x, y) in &s.pairs {
        residual = residual.max(line_angle(&apply_wigner(&fit, x)?, y)?.0);
    }
    fit.residual = residual;
    Ok(fit)
}

/// Orthonormal basis of the null space of the Hermitian matrix `Σ v vᴴ` built from `vs`.
fn null_space(field: Field, dim: usize, vs: &[Vec<C64>]) -> Vec<UnitVector> {
    let mut g = DMatrix::<C64>::zeros(dim, dim);
    for v in vs {
        let col = DVector::from_column_slice(v);
        g += &col * col.adjoint();
    }
    let scale = g.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let eig = g.symmetric_eigen();
    let mut out = Vec::new();
    for (k, &ev) in eig.eigenvalues.iter().enumerate() {
        if ev.abs() <= NULL_TOL * scale {
            let col: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
            let col = match field {
                Field::Real => real_rotate(col),
                Field::Complex => col,
            };
            if let Ok(u) = Vector::from_parts(field, col).normalize() {
                out.push(u);
            }
        }
    }
    out
}

/// Eigenvectors of a real symmetric matrix may come back with a global complex phase.
fn real_rotate(mut col: Vec<C64>) -> Vec<C64> {
    let anchor = col.iter().copied().max_by(|p, q| p.norm().total_cmp(&q.norm())).unwrap_or(C64::new(1.0, 0.0));
    let rot = if anchor.norm() > 0.0 { anchor.conj() / anchor.norm() } else { C64::new(1.0, 0.0) };
    col.iter_mut().for_each(|z| *z = C64::new((*z * rot).re, 0.0));
    col
}

/// Lines spanning `(lines^⊥)^⊥`.
pub fn double_perp(lines: &[Line]) -> Result<Vec<Line>> {
    let first = lines.first().ok_or_else(|| domain("double_perp", "empty input"))?;
    let (field, dim) = (first.field(), first.dim());
    for l in lines {
        if l.field() != field {
            return Err(Error::FieldMismatch);
        }
        if l.dim() != dim {
            return Err(Error::DimensionMismatch { left: l.dim(), right: dim });
        }
    }
    let vs: Vec<Vec<C64>> = lines.iter().map(|l| l.rep().comps().to_vec()).collect();
    let perp: Vec<Vec<C64>> = null_space(field, dim, &vs).iter().map(|u| u.comps().to_vec()).collect();
    Ok(null_space(field, dim, &perp).into_iter().map(|u| u.line()).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub input_angle: f64,
    pub output_angle: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreserverReport {
    pub alpha: f64,
    pub tolerance: f64,
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
}

impl PreserverReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Pairs on which exactly one side of `∡(a, b) = α ⇔ ∡(φa, φb) = α` holds.
pub fn is_angle_preserver(s: &LineMapSample, alpha: f64, tol: f64) -> PreserverReport {
    let mut violations = Vec::new();
    let mut pairs_checked = 0;
    for i in 0..s.len() {
        for j in 0..i {
            pairs_checked += 1;
            let a = line_angle(&s.pairs[j].0, &s.pairs[i].0).expect("checked").0;
            let b = line_angle(&s.pairs[j].1, &s.pairs[i].1).expect("checked").0;
            if ((a - alpha).abs() <= tol) != ((b - alpha).abs() <= tol) {
                violations.push(Violation { i: j, j: i, input_angle: a, output_angle: b });
            }
        }
    }
    PreserverReport { alpha, tolerance: tol, pairs_checked, violations }
}

/// For a real vector-level map known to act as `x ↦ ±Rx`, the sign attached to each pair.
pub fn sign_pattern(fit: &FittedIsometry, pairs: &[(UnitVector, UnitVector)]) -> Result<Vec<i8>> {
    if fit.field != Field::Real || fit.kind != Kind::Linear {
        return Err(Error::WrongField { op: "sign_pattern", expected: "real" });
    }
    pairs
        .iter()
        .map(|(x, y)| {
            let rx = mat_vec(&fit.matrix, x.comps());
            let p: f64 = rx.iter().zip(y.comps()).map(|(a, b)| (a * b.conj()).re).sum();
            Ok(if p >= 0.0 { 1 } else { -1 })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_line, seeded_rng};

    #[test]
    fn identity_sample_fits_identity() {
        let mut rng = seeded_rng(3);
        let lines: Vec<Line> = (0..8).map(|_| random_line(3, Field::Complex, &mut rng).unwrap()).collect();
        let s = LineMapSample::from_map(Field::Complex, 3, &lines, |l| l.clone()).unwrap();
        let f = fit_isometry(&s).unwrap();
        assert!(f.residual < 1e-12);
        assert_eq!(f.kind, Kind::Linear);
        assert!(f.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn conjugation_example() {
        let f = FittedIsometry { kind: Kind::ConjugateLinear, ..FittedIsometry::identity(Field::Complex, 2) };
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let l = Line::complex(vec![C64::new(h, 0.0), C64::new(0.0, h)]).unwrap();
        let want = Line::complex(vec![C64::new(h, 0.0), C64::new(0.0, -h)]).unwrap();
        assert!(apply_wigner(&f, &l).unwrap().approx_eq(&want));
    }

    #[test]
    fn real_input_is_undecidable() {
        let l = Line::real(&[1.0, 0.0]).unwrap();
        let s = LineMapSample::new(Field::Real, 2, vec![(l.clone(), l)]).unwrap();
        assert!(matches!(classify_antilinearity(&s), Err(Error::Undecidable(_))));
    }
}
