//! Brute-force grid oracles. They build actual vectors, measure angles numerically
//! and never consult the case tables they are used to check.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle_sets::{CapIntersection, CapKind, CardClass};
use crate::error::{domain, Error, Result};
use crate::linalg::{
    dot, line_angle_raw, orthonormal_extend_in, sphere_angle_raw, Field, Line, UnitVector, Vector, C64,
};

pub const BISECT_TOL: f64 = 1e-13;
pub const BISECT_MAX_ITER: usize = 200;
pub const THREADS_ENV: &str = "ANGLEFORGE_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub resolution: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl GridSpec {
    pub fn new(resolution: usize, seed: u64, tolerance: f64) -> Result<Self> {
        let g = GridSpec { resolution, seed, tolerance };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution < 16 {
            return Err(domain("GridSpec", format!("resolution {} below 16", self.resolution)));
        }
        if !(self.tolerance > 0.0) {
            return Err(domain("GridSpec", "tolerance must be positive"));
        }
        Ok(())
    }

    /// Angular radius within which grid hits are merged into one cluster.
    pub fn merge_radius(&self) -> f64 {
        3.0 / self.resolution as f64
    }

    /// Hits spread wider than this are a continuum, not a point.
    pub fn point_spread(&self) -> f64 {
        20.0 / self.resolution as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Estimate {
    Class(CardClass),
    Diameter(f64),
    Root { lo: f64, hi: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub estimate: Estimate,
    pub tolerance: f64,
    pub samples_used: usize,
    pub max_residual: f64,
    /// Number of solution clusters found, when the oracle counts them.
    pub clusters: usize,
    /// One representative per cluster (interleaved components).
    pub points: Vec<Vec<f64>>,
}

impl OracleReport {
    pub fn class(&self) -> Option<CardClass> {
        match self.estimate {
            Estimate::Class(c) => Some(c),
            _ => None,
        }
    }

    pub fn diameter(&self) -> Option<f64> {
        match self.estimate {
            Estimate::Diameter(d) => Some(d),
            _ => None,
        }
    }
}

/// Run `f` on a pool capped by `ANGLEFORGE_THREADS` when that is set.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

/// Root of a function with a sign change on `[lo, hi]`; stops once the bracket is below `tol`.
pub fn bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa * fb < 0.0) {
        return Err(Error::NoSignChange { lo, hi });
    }
    for _ in 0..BISECT_MAX_ITER {
        let m = 0.5 * (a + b);
        if b - a <= tol || m <= a || m >= b {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    if b - a <= tol {
        Ok(0.5 * (a + b))
    } else {
        Err(Error::NoConvergence(BISECT_MAX_ITER))
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut k = i;
        while self.0[k] != r {
            let next = self.0[k];
            self.0[k] = r;
            k = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A grid hit: node index, residual and the point it stands for.
struct Hit {
    node: (usize, usize),
    residual: f64,
    point: Vec<C64>,
}

/// Local minima of `r` (8-neighbourhood, wrapping in the second index) below `tol`.
fn local_minima(r: &[Vec<f64>], wrap_rows: bool, tol: f64) -> Vec<(usize, usize)> {
    let rows = r.len();
    let cols = r[0].len();
    let mut out = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let v = r[i][j];
            if !(v < tol) {
                continue;
            }
            let mut is_min = true;
            'nb: for di in [-1i64, 0, 1] {
                let ii = i as i64 + di;
                let ii = if wrap_rows {
                    ii.rem_euclid(rows as i64) as usize
                } else if ii < 0 || ii >= rows as i64 {
                    continue;
                } else {
                    ii as usize
                };
                for dj in [-1i64, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let jj = (j as i64 + dj).rem_euclid(cols as i64) as usize;
                    if r[ii][jj] < v {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if is_min {
                out.push((i, j));
            }
        }
    }
    out
}

/// Classify hits: nothing, one tight cluster, or anything else.
fn classify(hits: &[Hit], spec: &GridSpec, angle: impl Fn(&[C64], &[C64]) -> f64) -> (CardClass, usize, Vec<usize>) {
    if hits.is_empty() {
        return (CardClass::Empty, 0, Vec::new());
    }
    // farthest-point sweep bounds the spread within a factor of two
    let far = |from: usize| {
        let mut best = (from, 0.0);
        for (k, h) in hits.iter().enumerate() {
            let d = angle(&hits[from].point, &h.point);
            if d > best.1 {
                best = (k, d);
            }
        }
        best
    };
    let (a, _) = far(0);
    let (_, spread) = far(a);
    if spread > spec.point_spread() {
        let reps = cluster_reps(hits, spec, &angle, 64);
        let n = reps.len().max(2);
        return (CardClass::Many, n, reps);
    }
    let reps = cluster_reps(hits, spec, &angle, usize::MAX);
    let class = if reps.len() == 1 { CardClass::One } else { CardClass::Many };
    (class, reps.len(), reps)
}

/// Union-find over grid adjacency and the merge radius; returns the best hit of each cluster.
/// Large hit sets are thinned to `cap` evenly spaced samples first.
fn cluster_reps(hits: &[Hit], spec: &GridSpec, angle: &impl Fn(&[C64], &[C64]) -> f64, cap: usize) -> Vec<usize> {
    let idx: Vec<usize> = if hits.len() > cap {
        (0..cap).map(|k| k * hits.len() / cap).collect()
    } else {
        (0..hits.len()).collect()
    };
    let n = idx.len();
    let mut dsu = Dsu::new(n);
    for a in 0..n {
        for b in (a + 1)..n {
            let (ha, hb) = (&hits[idx[a]], &hits[idx[b]]);
            let adjacent = ha.node.0.abs_diff(hb.node.0) <= 1 && ha.node.1.abs_diff(hb.node.1) <= 1;
            if adjacent || angle(&ha.point, &hb.point) < spec.merge_radius() {
                dsu.union(a, b);
            }
        }
    }
    let mut best: Vec<(usize, usize)> = Vec::new();
    for k in 0..n {
        let root = dsu.find(k);
        match best.iter_mut().find(|(r, _)| *r == root) {
            Some(slot) => {
                if hits[idx[k]].residual < hits[slot.1].residual {
                    slot.1 = idx[k];
                }
            }
            None => best.push((root, idx[k])),
        }
    }
    best.into_iter().map(|(_, h)| h).collect()
}

fn interleave(p: &[C64], field: Field) -> Vec<f64> {
    Vector::from_parts(field, p.to_vec()).to_interleaved()
}

/// Solution clusters of `x^(α) ∩ y^(β)` on the 2-sphere, from a polar grid about `x`.
pub fn mc_sphere_card(x: &UnitVector, y: &UnitVector, alpha: f64, beta: f64, spec: &GridSpec) -> Result<OracleReport> {
    spec.validate()?;
    if x.field() != Field::Real || y.field() != Field::Real {
        return Err(Error::WrongField { op: "mc_sphere_card", expected: "real" });
    }
    if x.dim() != 3 || y.dim() != 3 {
        return Err(domain("mc_sphere_card", "oracle works on the 2-sphere (dim 3)"));
    }
    let res = spec.resolution;
    let (dt, dc) = (PI / (res - 1) as f64, TAU / res as f64);
    let bound = std::f64::consts::SQRT_2 * 0.5 * (dt * dt + dc * dc).sqrt();
    if bound > spec.tolerance {
        return Err(Error::ResolutionTooCoarse { resolution: res, tolerance: spec.tolerance });
    }
    let frame = orthonormal_extend_in(Field::Real, &[x.clone()], 3)?;
    let (p, q) = (frame[0].comps(), frame[1].comps());
    let xc = x.comps();
    let trig: Vec<(f64, f64)> = (0..res).map(|j| (dc * j as f64).sin_cos()).collect();
    let point = |i: usize, j: usize| -> Vec<C64> {
        let (st, ct) = (dt * i as f64).sin_cos();
        let (sc, cc) = trig[j];
        (0..3).map(|k| xc[k] * ct + (p[k] * cc + q[k] * sc) * st).collect()
    };
    let r: Vec<Vec<f64>> = with_pool(|| {
        (0..res)
            .into_par_iter()
            .map(|i| {
                (0..res)
                    .map(|j| {
                        let u = point(i, j);
                        let f = sphere_angle_raw(&u, xc) - alpha;
                        let g = sphere_angle_raw(&u, y.comps()) - beta;
                        f.hypot(g)
                    })
                    .collect()
            })
            .collect()
    });
    let hits: Vec<Hit> = local_minima(&r, false, spec.tolerance)
        .into_iter()
        .map(|(i, j)| Hit { node: (i, j), residual: r[i][j], point: point(i, j) })
        .collect();
    let (class, clusters, reps) = classify(&hits, spec, sphere_angle_raw);
    Ok(OracleReport {
        estimate: Estimate::Class(class),
        tolerance: spec.tolerance,
        samples_used: res * res,
        max_residual: hits.iter().map(|h| h.residual).fold(0.0, f64::max),
        clusters,
        points: reps.iter().map(|&k| interleave(&hits[k].point, Field::Real)).collect(),
    })
}

/// `(e1, e2, e3)` with `e1 = v` and `w = cos γ e1 + sin γ e2`.
fn law_frame(v: &UnitVector, w: &UnitVector) -> Result<(Vec<C64>, Vec<C64>, Vec<C64>, f64)> {
    let field = v.field();
    let p = dot(w.comps(), v.comps());
    let cg = p.norm();
    let ph = if cg > 1e-300 { p.conj() / cg } else { C64::new(1.0, 0.0) };
    let wa: Vec<C64> = w.comps().iter().map(|z| z * ph).collect();
    let perp: Vec<C64> = wa.iter().zip(v.comps()).map(|(a, b)| a - cg * b).collect();
    let e2 = Vector::from_parts(field, perp).normalize()?;
    let e3 = orthonormal_extend_in(field, &[v.clone(), e2.clone()], v.dim())?.remove(0);
    Ok((v.comps().to_vec(), e2.comps().to_vec(), e3.comps().to_vec(), cg.min(1.0).acos()))
}

fn mix(terms: &[(C64, &[C64])]) -> Vec<C64> {
    let dim = terms[0].1.len();
    (0..dim).map(|k| terms.iter().map(|(c, u)| c * u[k]).sum()).collect()
}

/// Solution clusters of `[v]^α ∩ [w]^β` in 3-space, scanning `[v]^α` through
/// `[cos α e1 + sin α (λ cos δ e2 + μ sin δ e3)]`.
pub fn mc_proj_card(v: &Line, w: &Line, alpha: f64, beta: f64, spec: &GridSpec) -> Result<OracleReport> {
    spec.validate()?;
    if v.field() != w.field() {
        return Err(Error::FieldMismatch);
    }
    if v.dim() != 3 || w.dim() != 3 {
        return Err(domain("mc_proj_card", "oracle works in 3-space"));
    }
    let field = v.field();
    let res = spec.resolution;
    let (e1, e2, e3, _) = law_frame(v.rep(), w.rep())?;
    let wc = w.rep().comps().to_vec();
    let (sa, ca) = alpha.sin_cos();
    let c = |x: f64| C64::new(x, 0.0);
    match field {
        Field::Real => {
            let dt = TAU / res as f64;
            if 0.5 * dt > spec.tolerance {
                return Err(Error::ResolutionTooCoarse { resolution: res, tolerance: spec.tolerance });
            }
            let point = |j: usize| {
                let (s, co) = (dt * j as f64).sin_cos();
                mix(&[(c(ca), &e1), (c(sa * co), &e2), (c(sa * s), &e3)])
            };
            let r: Vec<f64> = (0..res).map(|j| (line_angle_raw(&point(j), &wc) - beta).abs()).collect();
            let grid = vec![r.clone()];
            // single row: wrap the column index only
            let mins: Vec<usize> = local_minima(&grid, true, spec.tolerance).into_iter().map(|(_, j)| j).collect();
            let hits: Vec<Hit> =
                mins.into_iter().map(|j| Hit { node: (0, j), residual: r[j], point: point(j) }).collect();
            let (class, clusters, reps) = classify(&hits, spec, line_angle_raw);
            Ok(OracleReport {
                estimate: Estimate::Class(class),
                tolerance: spec.tolerance,
                samples_used: res,
                max_residual: hits.iter().map(|h| h.residual).fold(0.0, f64::max),
                clusters,
                points: reps.iter().map(|&k| interleave(&hits[k].point, field)).collect(),
            })
        }
        Field::Complex => {
            let (dd, dp) = (FRAC_PI_2 / (res - 1) as f64, TAU / res as f64);
            if 0.5 * (dd * dd + dp * dp).sqrt() > spec.tolerance {
                return Err(Error::ResolutionTooCoarse { resolution: res, tolerance: spec.tolerance });
            }
            let phases: Vec<C64> = (0..res).map(|j| C64::from_polar(1.0, dp * j as f64)).collect();
            let point = |i: usize, j: usize, mu: f64| {
                let (s, co) = (dd * i as f64).sin_cos();
                mix(&[(c(ca), &e1), (phases[j] * (sa * co), &e2), (c(mu * sa * s), &e3)])
            };
            let r: Vec<Vec<f64>> = with_pool(|| {
                (0..res)
                    .into_par_iter()
                    .map(|i| (0..res).map(|j| (line_angle_raw(&point(i, j, 1.0), &wc) - beta).abs()).collect())
                    .collect()
            });
            let mut hits = Vec::new();
            for (i, j) in local_minima(&r, false, spec.tolerance) {
                for mu in [1.0, -1.0] {
                    // the two signs of mu sit on separate sheets; keep their nodes apart
                    let sheet = if mu > 0.0 { 0 } else { 2 * res };
                    hits.push(Hit { node: (i + sheet, j), residual: r[i][j], point: point(i, j, mu) });
                }
            }
            let (class, clusters, reps) = classify(&hits, spec, line_angle_raw);
            Ok(OracleReport {
                estimate: Estimate::Class(class),
                tolerance: spec.tolerance,
                samples_used: res * res,
                max_residual: hits.iter().map(|h| h.residual).fold(0.0, f64::max),
                clusters,
                points: reps.iter().map(|&k| interleave(&hits[k].point, field)).collect(),
            })
        }
    }
}

/// Roots of `g` on `[lo, hi]`: sign changes on an `n`-node scan refined by bisection,
/// plus nodes where `g` vanishes to 1e-12.
fn scan_roots(g: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let xs: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let mut roots = Vec::new();
    for k in 0..n {
        if vals[k].abs() < 1e-12 {
            roots.push(xs[k]);
        } else if k + 1 < n && vals[k + 1].abs() >= 1e-12 && vals[k] * vals[k + 1] < 0.0 {
            if let Ok(x) = bisect(&g, xs[k], xs[k + 1], 1e-15) {
                roots.push(x);
            }
        }
    }
    roots
}

/// Largest pairwise angle among points found by scanning the first level set and
/// solving for the second; independent of the descriptor's closed-form coordinates.
pub fn mc_diam(set: &CapIntersection, spec: &GridSpec) -> Result<OracleReport> {
    spec.validate()?;
    let res = spec.resolution;
    let alpha = set.alpha;
    let (x, y) = &set.centers;
    let (sa, ca) = alpha.sin_cos();
    let c = |t: f64| C64::new(t, 0.0);
    let points: Vec<Vec<C64>> = match set.kind {
        CapKind::Sphere => {
            let (e1, e2, _, _) = law_frame(x, y)?;
            let e3 = set.complement[0].comps();
            let yc = y.comps();
            let g = |t: f64| {
                let (s, co) = t.sin_cos();
                let u = mix(&[(c(ca), &e1), (c(sa * co), &e2), (c(sa * s), e3)]);
                sphere_angle_raw(&u, yc) - alpha
            };
            scan_roots(g, 0.0, TAU, res)
                .into_iter()
                .map(|t| {
                    let (s, co) = t.sin_cos();
                    mix(&[(c(ca), &e1), (c(sa * co), &e2), (c(sa * s), e3)])
                })
                .collect()
        }
        CapKind::Projective | CapKind::OrthogonalCircle => {
            let (e1, e2, e3, _) = law_frame(x, y)?;
            let yc = y.comps().to_vec();
            let per_phase: Vec<Vec<Vec<C64>>> = with_pool(|| {
                (0..res)
                    .into_par_iter()
                    .map(|j| {
                        let lam = C64::from_polar(1.0, TAU * j as f64 / res as f64);
                        let mut pts = Vec::new();
                        for k in 0..4 {
                            let mu = C64::from_polar(1.0, FRAC_PI_2 * k as f64);
                            let u = |d: f64| {
                                let (s, co) = d.sin_cos();
                                mix(&[(c(ca), &e1), (lam * (sa * co), &e2), (mu * (sa * s), &e3)])
                            };
                            for d in scan_roots(|d| line_angle_raw(&u(d), &yc) - alpha, 0.0, FRAC_PI_2, 64) {
                                pts.push(u(d));
                            }
                        }
                        // sweep the other way too: near the extremes the curve is steep in the phase
                        let d = FRAC_PI_2 * j as f64 / (res - 1) as f64;
                        let (s, co) = d.sin_cos();
                        for k in 0..4 {
                            let mu = C64::from_polar(1.0, FRAC_PI_2 * k as f64);
                            let u = |t: f64| {
                                let lam = C64::from_polar(1.0, t);
                                mix(&[(c(ca), &e1), (lam * (sa * co), &e2), (mu * (sa * s), &e3)])
                            };
                            for t in scan_roots(|t| line_angle_raw(&u(t), &yc) - alpha, 0.0, TAU, 128) {
                                pts.push(u(t));
                            }
                        }
                        pts
                    })
                    .collect()
            });
            per_phase.into_iter().flatten().collect()
        }
    };
    if points.is_empty() {
        return Err(domain("mc_diam", "no points found; the set looks empty"));
    }
    let sphere = set.kind == CapKind::Sphere;
    let field = set.field();
    let units: Vec<UnitVector> =
        points.iter().map(|p| UnitVector::from_parts_normalized(field, p.clone())).collect();
    let max_residual = units.iter().map(|u| set.residual(u)).fold(0.0, f64::max);
    let diam = with_pool(|| {
        (0..points.len())
            .into_par_iter()
            .map(|a| {
                let mut m: f64 = 0.0;
                for b in (a + 1)..points.len() {
                    let d = if sphere {
                        sphere_angle_raw(&points[a], &points[b])
                    } else {
                        line_angle_raw(&points[a], &points[b])
                    };
                    m = m.max(d);
                }
                m
            })
            .reduce(|| 0.0, f64::max)
    });
    Ok(OracleReport {
        estimate: Estimate::Diameter(diam),
        tolerance: spec.tolerance,
        samples_used: points.len(),
        max_residual,
        clusters: 0,
        points: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_cos() {
        let r = bisect(f64::cos, 1.0, 2.0, BISECT_TOL).unwrap();
        assert!((r - FRAC_PI_2).abs() < 1e-13);
        assert!(matches!(bisect(f64::cos, 2.0, 3.0, 1e-13), Err(Error::NoSignChange { .. })));
    }

    #[test]
    fn grid_spec_limits() {
        assert!(GridSpec::new(8, 0, 0.01).is_err());
        assert!(GridSpec::new(64, 0, 0.0).is_err());
    }

    fn sphere_pair(g: f64) -> (UnitVector, UnitVector) {
        (UnitVector::real(&[0.0, 0.0, 1.0]).unwrap(), UnitVector::real(&[g.sin(), 0.0, g.cos()]).unwrap())
    }

    #[test]
    fn sphere_oracle_examples() {
        let spec = GridSpec::new(400, 0, 0.015).unwrap();
        let a = PI / 3.0;
        let (x, y) = sphere_pair(2.0 * PI / 3.0);
        assert_eq!(mc_sphere_card(&x, &y, a, a, &spec).unwrap().class(), Some(CardClass::One));
        let (x, y) = sphere_pair(2.2);
        assert_eq!(mc_sphere_card(&x, &y, a, a, &spec).unwrap().class(), Some(CardClass::Empty));
        let (x, y) = sphere_pair(PI / 4.0);
        let rep = mc_sphere_card(&x, &y, PI / 4.0, PI / 4.0, &spec).unwrap();
        assert_eq!(rep.class(), Some(CardClass::Many));
        assert_eq!(rep.clusters, 2);
        assert!(mc_sphere_card(&x, &y, 0.3, 0.3, &GridSpec::new(40, 0, 0.015).unwrap()).is_err());
    }
}
