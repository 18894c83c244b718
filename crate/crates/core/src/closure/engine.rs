use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI, TAU};

use super::functions::{ordering_angle, ordering_classify, proj_gamma0, section_beta, section_lift, wrap_companion};
use super::{
    CaseLabel, Condition, Context, Relation, RigidityCertificate, Rule, Space, Step, Verdict, Witness, ANGLE_EQ_TOL,
};
use crate::angle_sets::{beta_of, beta_pair, proj_diam};
use crate::linalg::Angle;

pub const DEFAULT_MAX_STEPS: usize = 10_000;
pub const DEFAULT_TERMINAL_THRESHOLD: f64 = 1e-3;

/// A seed within this distance of a special angle is treated as that angle.
const SPECIAL_TOL: f64 = 1e-12;

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= SPECIAL_TOL
}

enum Stop {
    Budget,
    Unsupported(String),
}

struct Builder {
    seed: f64,
    seed_space: Space,
    steps: Vec<Step>,
    max_steps: usize,
    threshold: f64,
}

struct Draft {
    case: CaseLabel,
    rule: Rule,
    space: Space,
    inputs: Vec<f64>,
    witness: Option<Witness>,
    relation: Relation,
    outputs: Vec<f64>,
    conditions: Vec<Condition>,
}

fn c(name: &str, holds: bool) -> Condition {
    Condition::new(name, holds)
}

impl Builder {
    fn push(&mut self, d: Draft) -> Result<f64, Stop> {
        if self.steps.len() >= self.max_steps {
            return Err(Stop::Budget);
        }
        if let Some(bad) = d.conditions.iter().find(|c| !c.holds) {
            return Err(Stop::Unsupported(format!("{}: side condition '{}' fails", d.rule, bad.name)));
        }
        let out = d.outputs[0];
        self.steps.push(Step {
            case: d.case,
            rule: d.rule,
            space: d.space,
            inputs: d.inputs,
            witness: d.witness,
            relation: d.relation,
            outputs: d.outputs,
            conditions: d.conditions,
        });
        Ok(out)
    }

    fn eq(&mut self, case: CaseLabel, rule: Rule, space: Space, inputs: Vec<f64>, out: f64, conds: Vec<Condition>) -> Result<f64, Stop> {
        self.push(Draft { case, rule, space, inputs, witness: None, relation: Relation::Equal, outputs: vec![out], conditions: conds })
    }

    fn is_preserved(&self, space: Space, rel: Relation, x: f64) -> bool {
        let seed = rel == Relation::Equal && self.seed_space.same(space) && (self.seed - x).abs() <= ANGLE_EQ_TOL;
        seed || self.steps.iter().any(|s| {
            s.space.same(space) && s.relation == rel && s.outputs.iter().any(|o| (o - x).abs() <= ANGLE_EQ_TOL)
        })
    }

    // sphere rules

    fn multiple(&mut self, case: CaseLabel, space: Space, sdim: usize, a: f64, j: u32, rel: Relation) -> Result<f64, Stop> {
        let rule = if rel == Relation::Equal { Rule::Multiple(j) } else { Rule::LeqMultiple(j) };
        let need = if j == 2 { 2 } else { 3 };
        let conds = vec![
            c("0 < a < pi/2", a > 0.0 && a < FRAC_PI_2),
            c("2 <= j < pi/a", j >= 2 && (j as f64) * a < PI),
            c(if need == 2 { "sphere dim >= 2" } else { "sphere dim >= 3" }, sdim >= need),
        ];
        let out = j as f64 * a;
        self.push(Draft { case, rule, space, inputs: vec![a], witness: None, relation: rel, outputs: vec![out], conditions: conds })
    }

    fn gamma0(&mut self, case: CaseLabel, space: Space, sdim: usize, a: f64) -> Result<f64, Stop> {
        let b = beta_of(a);
        let conds = vec![
            c("0 < a < pi/2", a > 0.0 && a < FRAC_PI_2),
            c("a < out < 2a", a < b && b < 2.0 * a),
            c("sphere dim >= 3", sdim >= 3),
        ];
        self.eq(case, Rule::Gamma0, space, vec![a], b, conds)
    }

    fn diff(&mut self, case: CaseLabel, space: Space, sdim: usize, a: f64, b: f64, w: Option<Witness>) -> Result<f64, Stop> {
        let mut conds = vec![c("0 < a < b < pi", 0.0 < a && a < b && b < PI), c("sphere dim >= 3", sdim >= 3)];
        match w {
            None => conds.push(c("a + b <= pi", a + b <= PI)),
            Some(Witness::Separator(t)) => {
                conds.push(c("a + b > pi", a + b > PI));
                conds.push(c("b - a < t <= 2pi - a - b", b - a < t && t <= TAU - a - b));
                conds.push(c(
                    "separator preserved",
                    self.is_preserved(space, Relation::Equal, t) && self.is_preserved(space, Relation::AtMost, t),
                ));
            }
            Some(Witness::Companion(t)) => {
                conds.push(c("a + b > pi", a + b > PI));
                conds.push(c("companion = 2pi - a - b", (t - (TAU - a - b)).abs() <= ANGLE_EQ_TOL));
                conds.push(c("companion preserved", self.is_preserved(space, Relation::Equal, t)));
            }
        }
        self.push(Draft {
            case,
            rule: Rule::Diff,
            space,
            inputs: vec![a, b],
            witness: w,
            relation: Relation::Equal,
            outputs: vec![b - a],
            conditions: conds,
        })
    }

    fn reflect2(&mut self, case: CaseLabel, space: Space, sdim: usize, a: f64) -> Result<f64, Stop> {
        let conds = vec![c("pi/2 < a < pi", a > FRAC_PI_2 && a < PI), c("sphere dim >= 3", sdim >= 3)];
        self.eq(case, Rule::Reflect2Pi2Alpha, space, vec![a], TAU - 2.0 * a, conds)
    }

    fn reflect4(&mut self, case: CaseLabel, space: Space, sdim: usize, a: f64) -> Result<f64, Stop> {
        let conds = vec![
            c("pi/4 < a < pi/2", a > FRAC_PI_4 && a < FRAC_PI_2),
            c("2a preserved", self.is_preserved(space, Relation::Equal, 2.0 * a)),
            c("sphere dim >= 3", sdim >= 3),
        ];
        self.eq(case, Rule::Reflect2Pi4Alpha, space, vec![a], TAU - 4.0 * a, conds)
    }

    /// Runs the sphere procedure on `a` until an angle below the threshold is preserved; returns it.
    fn sphere_close(&mut self, space: Space, sdim: usize, mut a: f64) -> Result<f64, Stop> {
        loop {
            if a < self.threshold {
                return Ok(a);
            }
            if a <= FRAC_PI_4 + SPECIAL_TOL {
                let k = CaseLabel::SphereSmall;
                let two = self.multiple(k, space, sdim, a, 2, Relation::Equal)?;
                let b = self.gamma0(k, space, sdim, a)?;
                let d1 = self.diff(k, space, sdim, a, b, None)?;
                let d2 = self.diff(k, space, sdim, b, two, None)?;
                a = d1.min(d2);
            } else if a < FRAC_PI_2 - SPECIAL_TOL {
                let k = CaseLabel::SphereAcute;
                let b = self.gamma0(k, space, sdim, a)?;
                if a + b <= PI {
                    a = self.diff(k, space, sdim, a, b, None)?;
                } else if wrap_companion(a) >= 2.0 * a {
                    let two = self.multiple(k, space, sdim, a, 2, Relation::Equal)?;
                    self.multiple(k, space, sdim, a, 2, Relation::AtMost)?;
                    a = self.diff(k, space, sdim, a, b, Some(Witness::Separator(two)))?;
                } else {
                    self.multiple(k, space, sdim, a, 2, Relation::Equal)?;
                    a = self.reflect4(k, space, sdim, a)?;
                }
            } else if a <= FRAC_PI_2 + SPECIAL_TOL {
                return Err(Stop::Unsupported("right angle reached inside a derivation".into()));
            } else if near(a, 0.75 * PI) {
                let k = CaseLabel::SphereThreeQuarters;
                let r = self.reflect2(k, space, sdim, a)?;
                a = self.diff(k, space, sdim, r, a, Some(Witness::Companion(a)))?;
            } else if near(a, 2.0 * PI / 3.0) {
                let k = CaseLabel::SphereTwoThirds;
                let conds = vec![c("a = 2pi/3", near(a, 2.0 * PI / 3.0)), c("sphere dim >= 3", sdim >= 3)];
                let p = self.eq(k, Rule::TildeAntipode, space, vec![a], PI, conds)?;
                let conds = vec![
                    c("0 < a < pi", a > 0.0 && a < PI),
                    c("pi preserved", self.is_preserved(space, Relation::Equal, p)),
                    c("sphere dim >= 3", sdim >= 3),
                ];
                a = self.eq(k, Rule::Supplement, space, vec![a, p], PI - a, conds)?;
            } else if a < 0.75 * PI {
                a = self.reflect2(CaseLabel::SphereNearRight, space, sdim, a)?;
            } else if a < PI {
                a = self.reflect2(CaseLabel::SphereObtuse, space, sdim, a)?;
            } else {
                return Err(Stop::Unsupported("straight angle reached inside a derivation".into()));
            }
        }
    }

    // line rules

    fn line_double(&mut self, case: CaseLabel, dim: usize, a: f64) -> Result<f64, Stop> {
        let conds = vec![
            c("0 < a < pi/4", a > 0.0 && a < FRAC_PI_4),
            c("2 <= j < pi/(2a)", 4.0 * a < PI),
            c("dim >= 3", dim >= 3),
        ];
        self.eq(case, Rule::Multiple(2), Space::Line, vec![a], 2.0 * a, conds)
    }

    fn proj_diff(&mut self, case: CaseLabel, dim: usize, a: f64, b: f64) -> Result<f64, Stop> {
        let conds = vec![c("0 < a < b < pi/2", 0.0 < a && a < b && b < FRAC_PI_2), c("dim >= 3", dim >= 3)];
        self.eq(case, Rule::ProjDiff, Space::Line, vec![a, b], b - a, conds)
    }

    /// Three-dimensional real procedure for `0 < a < π/3`.
    fn plane_close(&mut self, mut a: f64) -> Result<Verdict, Stop> {
        let k = CaseLabel::PlaneSmall;
        loop {
            if a < self.threshold {
                return Ok(Verdict::IsometryViaSmallAngles);
            }
            let sp = Space::Section(a);
            let conds = vec![c("real field", true), c("0 < a < pi/3", a > 0.0 && a < FRAC_PI_3)];
            let b = self.eq(k, Rule::Section, Space::Line, vec![a], section_beta(a), conds)?;
            let b = self.relabel_last(sp, b);
            let two = self.multiple(k, sp, 2, b, 2, Relation::Equal)?;
            let conds = vec![c("0 < a < pi/3", a > 0.0 && a < FRAC_PI_3), c("0 < delta <= pi", two > 0.0 && two <= PI)];
            let g = self.eq(k, Rule::SectionLift, sp, vec![a, two], section_lift(a, two), conds)?;
            let g = self.relabel_last(Space::Line, g);
            if (g - FRAC_PI_2).abs() <= ANGLE_EQ_TOL {
                return Ok(Verdict::IsometryViaOrthogonality);
            }
            if a < FRAC_PI_4 {
                let two = self.line_double(k, 3, a)?;
                let d1 = self.proj_diff(k, 3, a, g)?;
                let d2 = self.proj_diff(k, 3, g, two)?;
                a = d1.min(d2);
            } else {
                a = self.proj_diff(k, 3, a, g)?;
            }
        }
    }

    /// Cross-space rules record the space of their output; inputs live in the source space.
    fn relabel_last(&mut self, out_space: Space, x: f64) -> f64 {
        if let Some(s) = self.steps.last_mut() {
            s.space = out_space;
        }
        x
    }
}

/// Derive preserved angles from `seed` in `context` and `dim` until a rigidity terminal
/// is reached. Seeds outside the covered ranges come back `Inconclusive`.
pub fn closure(seed: Angle, context: Context, dim: usize, max_steps: usize, terminal_threshold: f64) -> RigidityCertificate {
    let a = seed.0;
    let seed_space = if context == Context::SphereReal { Space::Sphere } else { Space::Line };
    let mut b = Builder { seed: a, seed_space, steps: Vec::new(), max_steps, threshold: terminal_threshold };
    let result = run(&mut b, a, context, dim);
    let (verdict, reason) = match result {
        Ok(v) => (v, None),
        Err(Stop::Budget) => (Verdict::Inconclusive, Some(format!("step budget {max_steps} exhausted"))),
        Err(Stop::Unsupported(r)) => (Verdict::Inconclusive, Some(r)),
    };
    RigidityCertificate { seed: a, context, dim, terminal_threshold, max_steps, steps: b.steps, verdict, reason }
}

fn out_of_scope(msg: impl Into<String>) -> Result<Verdict, Stop> {
    Err(Stop::Unsupported(msg.into()))
}

fn run(b: &mut Builder, a: f64, context: Context, dim: usize) -> Result<Verdict, Stop> {
    if !a.is_finite() || !(b.threshold > 0.0) {
        return out_of_scope("seed and threshold must be finite and positive");
    }
    match context {
        Context::SphereReal => {
            if dim < 3 {
                return out_of_scope("sphere rigidity needs dim >= 3");
            }
            if !(a > 0.0 && a < PI) {
                return out_of_scope("sphere seed outside (0, pi)");
            }
            if near(a, FRAC_PI_2) {
                return Ok(Verdict::IsometryUpToSign);
            }
            b.sphere_close(Space::Sphere, dim, a)?;
            Ok(Verdict::IsometryViaSmallAngles)
        }
        Context::ProjReal => {
            if dim < 3 {
                return out_of_scope("real projective rigidity needs dim >= 3");
            }
            if !(a > 0.0 && a < FRAC_PI_2 - SPECIAL_TOL) {
                return out_of_scope("line seed outside (0, pi/2)");
            }
            if dim == 3 {
                proj_real_dim3(b, a)
            } else {
                proj_real_high(b, a, dim)
            }
        }
        Context::ProjComplex => {
            if dim < 3 {
                return out_of_scope("complex projective rigidity needs dim >= 3; use the qubit context for dim 2");
            }
            if !(a > 0.0 && a <= FRAC_PI_4 + SPECIAL_TOL) {
                return out_of_scope("complex seeds above pi/4 are not covered");
            }
            if near(a, FRAC_PI_4) {
                let conds = vec![c("complex dim >= 3", dim >= 3), c("a = pi/4", near(a, FRAC_PI_4))];
                b.eq(CaseLabel::ComplexQuarter, Rule::OrthoCircle, Space::Line, vec![a], FRAC_PI_2, conds)?;
                return Ok(Verdict::IsometryViaOrthogonality);
            }
            complex_close(b, a, dim)
        }
        Context::ProjComplexDim2 => {
            if dim != 2 {
                return out_of_scope("qubit context needs dim 2");
            }
            if !(a > 0.0 && a < FRAC_PI_2 - SPECIAL_TOL) {
                return out_of_scope("line seed outside (0, pi/2)");
            }
            let quarter = near(a, FRAC_PI_4);
            let k = if quarter { CaseLabel::QubitQuarter } else { CaseLabel::Qubit };
            let conds = vec![c("complex dim 2", true), c("0 < a < pi/2", a > 0.0 && a < FRAC_PI_2)];
            let s = b.eq(k, Rule::BlochDouble, Space::Line, vec![a], 2.0 * a, conds)?;
            let s = b.relabel_last(Space::Sphere, s);
            if quarter {
                return Ok(Verdict::QubitAntipodalAmbiguity);
            }
            let small = b.sphere_close(Space::Sphere, 3, s)?;
            let conds = vec![c("complex dim 2", true), c("0 < delta <= pi", small > 0.0 && small <= PI)];
            let l = b.eq(k, Rule::BlochHalve, Space::Sphere, vec![small], small / 2.0, conds)?;
            b.relabel_last(Space::Line, l);
            Ok(Verdict::IsometryViaSmallAngles)
        }
    }
}

fn proj_real_dim3(b: &mut Builder, a: f64) -> Result<Verdict, Stop> {
    if near(a, FRAC_PI_3) {
        let conds = vec![c("real dim 3", true), c("a = pi/3", near(a, FRAC_PI_3))];
        b.eq(CaseLabel::PlaneThird, Rule::FourLines, Space::Line, vec![a], FRAC_PI_2, conds)?;
        return Ok(Verdict::IsometryViaOrthogonality);
    }
    if a < FRAC_PI_3 {
        return b.plane_close(a);
    }
    let conds = vec![c("real dim 3", true), c("pi/3 < a < pi/2", a > FRAC_PI_3 && a < FRAC_PI_2)];
    let next = b.eq(CaseLabel::PlaneLarge, Rule::ThreeLines, Space::Line, vec![a], PI - 2.0 * a, conds)?;
    b.plane_close(next)
}

fn proj_real_high(b: &mut Builder, a: f64, dim: usize) -> Result<Verdict, Stop> {
    let sp = Space::Section(a);
    let sdim = dim - 1;
    if near(a, FRAC_PI_3) {
        let k = CaseLabel::SectionThird;
        let third = (1.0f64 / 3.0).acos();
        let conds = vec![c("real field", true), c("pi/3 <= a < pi/2", a >= FRAC_PI_3 - SPECIAL_TOL && a < FRAC_PI_2)];
        b.push(Draft {
            case: k,
            rule: Rule::SectionPair,
            space: Space::Line,
            inputs: vec![a],
            witness: None,
            relation: Relation::EitherOf,
            outputs: vec![third, PI],
            conditions: conds,
        })?;
        b.relabel_last(sp, 0.0);
        let conds = vec![
            c("pair preserved", b.is_preserved(sp, Relation::EitherOf, PI)),
            c("pair contains pi", true),
            c("other member in (0, pi/2)", third > 0.0 && third < FRAC_PI_2),
            c("sphere dim >= 3", sdim >= 3),
        ];
        let p = b.eq(k, Rule::PairAntipode, sp, vec![third, PI], PI, conds)?;
        let conds = vec![
            c("pair preserved", b.is_preserved(sp, Relation::EitherOf, third)),
            c("companion preserved", b.is_preserved(sp, Relation::Equal, p)),
        ];
        let t = b.push(Draft {
            case: k,
            rule: Rule::PairExclusion,
            space: sp,
            inputs: vec![third, PI],
            witness: Some(Witness::Companion(p)),
            relation: Relation::Equal,
            outputs: vec![third],
            conditions: conds,
        })?;
        b.sphere_close(sp, sdim, t)?;
        return Ok(Verdict::IsometryViaSmallAngles);
    }
    if a < FRAC_PI_3 {
        let conds = vec![c("real field", true), c("0 < a < pi/3", a > 0.0 && a < FRAC_PI_3)];
        let s = b.eq(CaseLabel::SectionSmall, Rule::Section, Space::Line, vec![a], section_beta(a), conds)?;
        b.relabel_last(sp, s);
        b.sphere_close(sp, sdim, s)?;
        return Ok(Verdict::IsometryViaSmallAngles);
    }
    let k = CaseLabel::SectionPair;
    let (b1, b2) = match beta_pair(Angle(a)) {
        Ok((x, y)) => (x.0, y.0),
        Err(e) => return out_of_scope(e.to_string()),
    };
    let conds = vec![c("real field", true), c("pi/3 <= a < pi/2", a >= FRAC_PI_3 && a < FRAC_PI_2)];
    b.push(Draft {
        case: k,
        rule: Rule::SectionPair,
        space: Space::Line,
        inputs: vec![a],
        witness: None,
        relation: Relation::EitherOf,
        outputs: vec![b1, b2],
        conditions: conds,
    })?;
    b.relabel_last(sp, 0.0);
    let ord = match ordering_classify(Angle(a), dim) {
        Ok(o) => o,
        Err(e) => return out_of_scope(e.to_string()),
    };
    let s = ordering_angle(Angle(a), ord).map_err(|e| Stop::Unsupported(e.to_string()))?;
    let conds = vec![
        c("pair preserved", b.is_preserved(sp, Relation::EitherOf, b1) && b.is_preserved(sp, Relation::EitherOf, b2)),
        c("ordering matches", true),
        c("sphere dim >= 3", sdim >= 3),
    ];
    let s = b.eq(k, Rule::PairOrdering(ord), sp, vec![b1, b2], s, conds)?;
    b.sphere_close(sp, sdim, s)?;
    Ok(Verdict::IsometryViaSmallAngles)
}

fn complex_close(b: &mut Builder, mut a: f64, dim: usize) -> Result<Verdict, Stop> {
    let k = CaseLabel::ComplexSmall;
    loop {
        if a < b.threshold {
            return Ok(Verdict::IsometryViaSmallAngles);
        }
        let g = proj_gamma0(Angle(a)).map_err(|e| Stop::Unsupported(e.to_string()))?.0;
        let diam = proj_diam(Angle(a), Angle(g)).map(|d| d.0).unwrap_or(f64::NAN);
        let conds = vec![
            c("0 < a < pi/4", a > 0.0 && a < FRAC_PI_4),
            c("complex dim >= 3", dim >= 3),
            c("a < out < 2a", a < g && g < 2.0 * a),
            c("cap diameter at out = a", (diam - a).abs() <= 1e-10),
        ];
        b.eq(k, Rule::ProjGamma0, Space::Line, vec![a], g, conds)?;
        let two = b.line_double(k, dim, a)?;
        let d1 = b.proj_diff(k, dim, a, g)?;
        let d2 = b.proj_diff(k, dim, g, two)?;
        a = d1.min(d2);
    }
}
