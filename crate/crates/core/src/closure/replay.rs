//! Independent certificate checker. Recomputes every step from its inputs with its own
//! formulas and side conditions; shares only the data types with the engine.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI, TAU};

use super::{Context, Relation, RigidityCertificate, Rule, Space, Step, Verdict, Witness, ANGLE_EQ_TOL};
use super::Ordering;

/// Recomputed outputs must agree with the recorded ones to this tolerance.
pub const REPLAY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("replay failed at {}: {msg}", step.map(|s| format!("step {s}")).unwrap_or_else(|| "verdict".into()))]
pub struct ReplayError {
    pub step: Option<usize>,
    pub msg: String,
}

struct Fact {
    space: Space,
    rel: Relation,
    values: Vec<f64>,
}

struct State<'a> {
    cert: &'a RigidityCertificate,
    facts: Vec<Fact>,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= ANGLE_EQ_TOL
}

impl State<'_> {
    fn has(&self, space: Space, rel: Relation, x: f64) -> bool {
        self.facts.iter().any(|f| f.space.same(space) && f.rel == rel && f.values.iter().any(|v| close(*v, x)))
    }

    fn has_pair(&self, space: Space, x: f64, y: f64) -> bool {
        self.facts.iter().any(|f| {
            f.space.same(space)
                && f.rel == Relation::EitherOf
                && f.values.len() == 2
                && ((close(f.values[0], x) && close(f.values[1], y)) || (close(f.values[0], y) && close(f.values[1], x)))
        })
    }

    fn sphere_dim(&self, space: Space) -> usize {
        match (space, self.cert.context) {
            (Space::Sphere, Context::ProjComplexDim2) => 3,
            (Space::Section(_), _) => self.cert.dim.saturating_sub(1),
            _ => self.cert.dim,
        }
    }

    fn complex(&self) -> bool {
        matches!(self.cert.context, Context::ProjComplex | Context::ProjComplexDim2)
    }
}

fn err(step: usize, msg: impl Into<String>) -> ReplayError {
    ReplayError { step: Some(step), msg: msg.into() }
}

type Checked = (Vec<f64>, Vec<(&'static str, bool)>);

fn need(ok: bool, what: &str) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(format!("input not preserved: {what}"))
    }
}

fn arity(s: &Step, n: usize) -> Result<(), String> {
    if s.inputs.len() == n {
        Ok(())
    } else {
        Err(format!("expected {n} inputs, found {}", s.inputs.len()))
    }
}

fn is_sphere_like(space: Space) -> bool {
    matches!(space, Space::Sphere | Space::Section(_))
}

fn check_step(st: &State, s: &Step) -> Result<Checked, String> {
    let sp = s.space;
    let eq = Relation::Equal;
    match s.rule {
        Rule::Multiple(j) | Rule::LeqMultiple(j) => {
            arity(s, 1)?;
            let a = s.inputs[0];
            need(st.has(sp, eq, a), "multiple base")?;
            let want = if matches!(s.rule, Rule::Multiple(_)) { eq } else { Relation::AtMost };
            if s.relation != want {
                return Err("wrong relation".into());
            }
            let jf = j as f64;
            if is_sphere_like(sp) {
                let min_dim = if j == 2 { 2 } else { 3 };
                Ok((vec![jf * a], vec![
                    ("base in (0, pi/2)", a > 0.0 && a < FRAC_PI_2),
                    ("j in [2, pi/a)", j >= 2 && jf < PI / a),
                    ("sphere dimension", st.sphere_dim(sp) >= min_dim),
                ]))
            } else {
                Ok((vec![jf * a], vec![
                    ("base in (0, pi/4)", a > 0.0 && a < FRAC_PI_4),
                    ("j in [2, pi/(2a))", j >= 2 && jf < PI / (2.0 * a)),
                    ("dimension", st.cert.dim >= 3),
                ]))
            }
        }
        Rule::Gamma0 => {
            arity(s, 1)?;
            let a = s.inputs[0];
            need(st.has(sp, eq, a), "gamma0 base")?;
            let c = a.cos();
            let g = (4.0 * c * c / (c + 1.0) - 1.0).clamp(-1.0, 1.0).acos();
            Ok((vec![g], vec![
                ("base in (0, pi/2)", a > 0.0 && a < FRAC_PI_2),
                ("result in (a, 2a)", g > a && g < 2.0 * a),
                ("sphere dimension", st.sphere_dim(sp) >= 3),
            ]))
        }
        Rule::Sum | Rule::Diff => {
            arity(s, 2)?;
            let (a, b) = (s.inputs[0], s.inputs[1]);
            need(st.has(sp, eq, a) && st.has(sp, eq, b), "sum/diff operands")?;
            let mut conds = vec![("0 < a < b < pi", 0.0 < a && a < b && b < PI), ("sphere dimension", st.sphere_dim(sp) >= 3)];
            if s.rule == Rule::Sum {
                conds.push(("a + b < pi", a + b < PI));
                return Ok((vec![a + b], conds));
            }
            match s.witness {
                None => conds.push(("a + b <= pi", a + b <= PI)),
                Some(Witness::Separator(t)) => {
                    let other = TAU - a - b;
                    conds.push(("pair branch", a + b > PI));
                    conds.push(("separator between pair members", b - a < t && t <= other));
                    conds.push(("separator preserved", st.has(sp, eq, t) && st.has(sp, Relation::AtMost, t)));
                }
                Some(Witness::Companion(t)) => {
                    conds.push(("pair branch", a + b > PI));
                    conds.push(("companion is the other member", close(t, TAU - a - b)));
                    conds.push(("companion preserved", st.has(sp, eq, t)));
                }
            }
            Ok((vec![b - a], conds))
        }
        Rule::Reflect2Pi2Alpha => {
            arity(s, 1)?;
            let a = s.inputs[0];
            need(st.has(sp, eq, a), "reflect base")?;
            Ok((vec![TAU - 2.0 * a], vec![
                ("base in (pi/2, pi)", a > FRAC_PI_2 && a < PI),
                ("sphere dimension", st.sphere_dim(sp) >= 3),
            ]))
        }
        Rule::Reflect2Pi4Alpha => {
            arity(s, 1)?;
            let a = s.inputs[0];
            need(st.has(sp, eq, a), "reflect base")?;
            Ok((vec![TAU - 4.0 * a], vec![
                ("base in (pi/4, pi/2)", a > FRAC_PI_4 && a < FRAC_PI_2),
                ("double preserved", st.has(sp, eq, 2.0 * a)),
                ("sphere dimension", st.sphere_dim(sp) >= 3),
            ]))
        }
        Rule::DoubleAngle => {
            arity(s, 1)?;
            let a = s.inputs[0];
            need(st.has(sp, Relation::AtMost, a), "at-most base")?;
            Ok((vec![2.0 * a], vec![
                ("base in (0, pi/2)", a > 0.0 && a < FRAC_PI_2),
                ("sphere dimension", st.sphere_dim(sp) >= 3),
            ]))
        }
        Rule::TildeAntipode => {
            arity(s, 1)?;
            let a = s.inputs[0];
            need(st.has(sp, eq, a), "two-thirds angle")?;
            Ok((vec![PI], vec![("base is 2pi/3", (a - TAU / 3.0).abs() <= 1e-12), ("sphere dimension", st.sphere_dim(sp) >= 3)]))
        }
        Rule::Supplement => {
            arity(s, 2)?;
            let (a, p) = (s.inputs[0], s.inputs[1]);
            need(st.has(sp, eq, a) && st.has(sp, eq, p), "supplement operands")?;
            Ok((vec![PI - a], vec![
                ("base in (0, pi)", a > 0.0 && a < PI),
                ("second operand is pi", close(p, PI)),
                ("sphere dimension", st.sphere_dim(sp) >= 3),
            ]))
        }
        Rule::ProjSum | Rule::ProjDiff => {
            arity(s, 2)?;
            let (a, b) = (s.inputs[0], s.inputs[1]);
            need(st.has(Space::Line, eq, a) && st.has(Space::Line, eq, b), "line operands")?;
            let mut conds = vec![("0 < a < b < pi/2", 0.0 < a && a < b && b < FRAC_PI_2), ("dimension", st.cert.dim >= 3)];
            if s.rule == Rule::ProjSum {
                conds.push(("a + b < pi/2", a + b < FRAC_PI_2));
                Ok((vec![a + b], conds))
            } else {
                Ok((vec![b - a], conds))
            }
        }
        Rule::ProjGamma0 => {
            arity(s, 1)?;
            let a = s.inputs[0];
            need(st.has(Space::Line, eq, a), "line base")?;
            let g = s.outputs.first().copied().unwrap_or(f64::NAN);
            let (sh, ch) = (g / 2.0).sin_cos();
            let ratio = (a.cos().powi(2) - sh * sh) / (ch * ch - sh * sh);
            let diam = 2.0 * ratio.clamp(0.0, 1.0).sqrt().acos();
            Ok((vec![g], vec![
                ("base in (0, pi/4)", a > 0.0 && a < FRAC_PI_4),
                ("complex field, dim >= 3", st.complex() && st.cert.dim >= 3),
                ("result in (a, 2a)", g > a && g < 2.0 * a),
                ("diameter equals base", (diam - a).abs() <= REPLAY_TOL),
            ]))
        }
        Rule::BlochDouble => {
            arity(s, 1)?;
            let a = s.inputs[0];
            need(st.has(Space::Line, eq, a), "line base")?;
            Ok((vec![2.0 * a], vec![
                ("qubit context", st.cert.context == Context::ProjComplexDim2 && st.cert.dim == 2),
                ("output on the Bloch sphere", sp == Space::Sphere),
            ]))
        }
        Rule::BlochHalve => {
            arity(s, 1)?;
            let d = s.inputs[0];
            need(st.has(Space::Sphere, eq, d), "Bloch angle")?;
            Ok((vec![d / 2.0], vec![
                ("qubit context", st.cert.context == Context::ProjComplexDim2 && st.cert.dim == 2),
                ("output is a line angle", sp == Space::Line),
            ]))
        }
        Rule::Section => {
            arity(s, 1)?;
            let a = s.inputs[0];
            need(st.has(Space::Line, eq, a), "line base")?;
            let c = a.cos();
            Ok((vec![(c / (1.0 + c)).acos()], vec![
                ("real field", st.cert.context == Context::ProjReal),
                ("base in (0, pi/3)", a > 0.0 && a < FRAC_PI_3),
                ("output on the section of the base", sp.same(Space::Section(a))),
            ]))
        }
        Rule::SectionPair => {
            arity(s, 1)?;
            let a = s.inputs[0];
            need(st.has(Space::Line, eq, a), "line base")?;
            let c = a.cos();
            let b1 = (1.0 - 1.0 / (1.0 + c)).clamp(-1.0, 1.0).acos();
            let b2 = (1.0 - 1.0 / (1.0 - c)).clamp(-1.0, 1.0).acos();
            Ok((vec![b1, b2], vec![
                ("real field", st.cert.context == Context::ProjReal),
                ("base in [pi/3, pi/2)", a >= FRAC_PI_3 - 1e-12 && a < FRAC_PI_2),
                ("pair relation", s.relation == Relation::EitherOf),
                ("output on the section of the base", sp.same(Space::Section(a))),
            ]))
        }
        Rule::PairAntipode => {
            arity(s, 2)?;
            let (x, p) = (s.inputs[0], s.inputs[1]);
            need(st.has_pair(sp, x, p), "pair")?;
            Ok((vec![PI], vec![
                ("pair contains pi", close(p, PI)),
                ("other member in (0, pi/2)", x > 0.0 && x < FRAC_PI_2),
                ("sphere dimension", st.sphere_dim(sp) >= 3),
            ]))
        }
        Rule::PairExclusion => {
            arity(s, 2)?;
            let (x, y) = (s.inputs[0], s.inputs[1]);
            need(st.has_pair(sp, x, y), "pair")?;
            let ok = matches!(s.witness, Some(Witness::Companion(t)) if close(t, y) && st.has(sp, eq, t));
            Ok((vec![x], vec![("companion preserved", ok)]))
        }
        Rule::PairOrdering(o) => {
            arity(s, 2)?;
            let (b1, b2) = (s.inputs[0], s.inputs[1]);
            need(st.has_pair(sp, b1, b2), "pair")?;
            let q = [2.0 * b1, TAU - b1 - b2, b2 - b1, TAU - 2.0 * b2];
            let gt = |i: usize, j: usize| q[i] > q[j] + 1e-10;
            let tie = |i: usize, j: usize| (q[i] - q[j]).abs() <= 1e-10;
            let base = gt(0, 2) && gt(0, 3) && gt(1, 2) && gt(1, 3);
            let pattern = match o {
                Ordering::O1 => tie(0, 1) || tie(2, 3),
                Ordering::O2 => gt(0, 1) && gt(2, 3),
                Ordering::O3 => gt(1, 0) && gt(2, 3) && st.cert.dim == 4,
                Ordering::O4 => gt(1, 0) && gt(2, 3) && st.cert.dim >= 5,
                Ordering::O5 => gt(0, 1) && gt(3, 2),
                Ordering::O6 => gt(1, 0) && gt(3, 2),
            };
            let out = if matches!(o, Ordering::O4 | Ordering::O6) { q[1] } else { q[0] };
            Ok((vec![out], vec![
                ("base inequalities", base),
                ("ordering pattern", pattern),
                ("picked angle is not right", (out - FRAC_PI_2).abs() > 1e-9),
                ("sphere dimension", st.sphere_dim(sp) >= 3),
            ]))
        }
        Rule::SectionLift => {
            arity(s, 2)?;
            let (a, d) = (s.inputs[0], s.inputs[1]);
            need(st.has(Space::Line, eq, a) && st.has(Space::Section(a), eq, d), "section angle")?;
            let (sa, ca) = a.sin_cos();
            let g = (ca * ca + d.cos() * sa * sa).abs().min(1.0).acos();
            Ok((vec![g], vec![
                ("real field", st.cert.context == Context::ProjReal),
                ("base in (0, pi/3)", a > 0.0 && a < FRAC_PI_3),
                ("output is a line angle", sp == Space::Line),
            ]))
        }
        Rule::ThreeLines => {
            arity(s, 1)?;
            let a = s.inputs[0];
            need(st.has(Space::Line, eq, a), "line base")?;
            Ok((vec![PI - 2.0 * a], vec![
                ("real dim 3", st.cert.context == Context::ProjReal && st.cert.dim == 3),
                ("base in (pi/3, pi/2)", a > FRAC_PI_3 && a < FRAC_PI_2),
            ]))
        }
        Rule::FourLines => {
            arity(s, 1)?;
            let a = s.inputs[0];
            need(st.has(Space::Line, eq, a), "line base")?;
            Ok((vec![FRAC_PI_2], vec![
                ("real dim 3", st.cert.context == Context::ProjReal && st.cert.dim == 3),
                ("base is pi/3", (a - FRAC_PI_3).abs() <= 1e-12),
            ]))
        }
        Rule::OrthoCircle => {
            arity(s, 1)?;
            let a = s.inputs[0];
            need(st.has(Space::Line, eq, a), "line base")?;
            Ok((vec![FRAC_PI_2], vec![
                ("complex dim >= 3", st.cert.context == Context::ProjComplex && st.cert.dim >= 3),
                ("base is pi/4", (a - FRAC_PI_4).abs() <= 1e-12),
            ]))
        }
    }
}

fn in_scope(cert: &RigidityCertificate) -> bool {
    let a = cert.seed;
    match cert.context {
        Context::SphereReal => cert.dim >= 3 && a > 0.0 && a < PI,
        Context::ProjReal => cert.dim >= 3 && a > 0.0 && a < FRAC_PI_2,
        Context::ProjComplex => cert.dim >= 3 && a > 0.0 && a <= FRAC_PI_4 + 1e-12,
        Context::ProjComplexDim2 => cert.dim == 2 && a > 0.0 && a < FRAC_PI_2,
    }
}

/// Re-derive every step of `cert` and check its verdict against the derived facts.
pub fn replay(cert: &RigidityCertificate) -> Result<(), ReplayError> {
    let seed_space = if cert.context == Context::SphereReal { Space::Sphere } else { Space::Line };
    let mut st = State { cert, facts: vec![Fact { space: seed_space, rel: Relation::Equal, values: vec![cert.seed] }] };
    if cert.steps.len() > cert.max_steps {
        return Err(ReplayError { step: None, msg: "more steps than the budget allows".into() });
    }
    for (i, s) in cert.steps.iter().enumerate() {
        let (outs, conds) = check_step(&st, s).map_err(|m| err(i, m))?;
        if let Some((name, _)) = conds.iter().find(|(_, ok)| !ok) {
            return Err(err(i, format!("side condition fails: {name}")));
        }
        if let Some(c) = s.conditions.iter().find(|c| !c.holds) {
            return Err(err(i, format!("recorded condition is false: {}", c.name)));
        }
        if outs.len() != s.outputs.len() || outs.iter().zip(&s.outputs).any(|(a, b)| !((a - b).abs() <= REPLAY_TOL)) {
            return Err(err(i, format!("output mismatch: recomputed {outs:?}, recorded {:?}", s.outputs)));
        }
        st.facts.push(Fact { space: s.space, rel: s.relation, values: s.outputs.clone() });
    }
    let verdict_err = |m: &str| Err(ReplayError { step: None, msg: m.into() });
    if cert.verdict != Verdict::Inconclusive && !in_scope(cert) {
        return verdict_err("non-inconclusive verdict for a seed outside the covered range");
    }
    match cert.verdict {
        Verdict::Inconclusive => Ok(()),
        Verdict::IsometryViaSmallAngles => {
            let last = cert.steps.last().filter(|s| s.relation == Relation::Equal);
            match last {
                Some(s) if s.outputs[0] > 0.0 && s.outputs[0] < cert.terminal_threshold => Ok(()),
                _ => verdict_err("last step does not derive an angle below the threshold"),
            }
        }
        Verdict::IsometryViaOrthogonality => {
            if st.has(Space::Line, Relation::Equal, FRAC_PI_2) {
                Ok(())
            } else {
                verdict_err("orthogonality was never derived")
            }
        }
        Verdict::QubitAntipodalAmbiguity => {
            if cert.context == Context::ProjComplexDim2 && (cert.seed - FRAC_PI_4).abs() <= 1e-12 {
                Ok(())
            } else {
                verdict_err("ambiguity verdict needs the qubit context and seed pi/4")
            }
        }
        Verdict::IsometryUpToSign => {
            if cert.context == Context::SphereReal && (cert.seed - FRAC_PI_2).abs() <= 1e-12 {
                Ok(())
            } else {
                verdict_err("sign verdict needs a right-angle sphere seed")
            }
        }
    }
}
