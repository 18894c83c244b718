//! Angle-derivation calculus: from one preserved seed angle, derive further preserved
//! angles until a rigidity terminal is reached, recording a replayable certificate.

pub mod engine;
pub mod functions;
pub mod replay;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use engine::{closure, DEFAULT_MAX_STEPS, DEFAULT_TERMINAL_THRESHOLD};
pub use functions::Ordering;
pub use replay::{replay, ReplayError};

/// Derived angles closer than this are the same angle.
pub const ANGLE_EQ_TOL: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Context {
    SphereReal,
    ProjReal,
    ProjComplex,
    ProjComplexDim2,
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Context::SphereReal => "sphere-real",
            Context::ProjReal => "proj-real",
            Context::ProjComplex => "proj-complex",
            Context::ProjComplexDim2 => "proj-complex-dim2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    IsometryViaSmallAngles,
    IsometryViaOrthogonality,
    QubitAntipodalAmbiguity,
    /// Right-angle seed on the sphere: an isometry up to a pointwise sign.
    IsometryUpToSign,
    Inconclusive,
}

impl Verdict {
    pub fn is_rigid(self) -> bool {
        matches!(self, Verdict::IsometryViaSmallAngles | Verdict::IsometryViaOrthogonality)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::IsometryViaSmallAngles => "isometry-via-small-angles",
            Verdict::IsometryViaOrthogonality => "isometry-via-orthogonality",
            Verdict::QubitAntipodalAmbiguity => "qubit-antipodal-ambiguity",
            Verdict::IsometryUpToSign => "isometry-up-to-sign",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Where a derived angle lives. `Section(α)` is the unit sphere of `[v]^⊥`
/// parametrising the lines at angle `α` from a fixed line `[v]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    Sphere,
    Line,
    Section(f64),
}

impl Space {
    pub fn same(self, other: Space) -> bool {
        match (self, other) {
            (Space::Sphere, Space::Sphere) | (Space::Line, Space::Line) => true,
            (Space::Section(a), Space::Section(b)) => (a - b).abs() <= ANGLE_EQ_TOL,
            _ => false,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Sphere => f.write_str("sphere"),
            Space::Line => f.write_str("line"),
            Space::Section(a) => write!(f, "section({a:.12})"),
        }
    }
}

/// `Equal`: the angle itself is preserved. `AtMost`: "angle ≤ value" is preserved.
/// `EitherOf`: membership in the listed set is preserved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Equal,
    AtMost,
    EitherOf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Multiple(u32),
    LeqMultiple(u32),
    Sum,
    Diff,
    Gamma0,
    Reflect2Pi2Alpha,
    Reflect2Pi4Alpha,
    DoubleAngle,
    ProjSum,
    ProjDiff,
    ProjGamma0,
    /// `2π/3` on the sphere forces `π`.
    TildeAntipode,
    /// With `π` preserved, `δ` gives `π − δ`.
    Supplement,
    /// Line angle to sphere angle on the Bloch sphere.
    BlochDouble,
    BlochHalve,
    /// Line angle `α` to the sphere angle it induces on `[v]^⊥`.
    Section,
    /// The two sphere angles induced on `[v]^⊥` when `π/3 ≤ α < π/2`.
    SectionPair,
    /// Pick one angle of a preserved pair via the cardinality ordering.
    PairOrdering(Ordering),
    /// A preserved pair containing `π` preserves `π` alone.
    PairAntipode,
    /// A preserved pair with one member already preserved preserves the other.
    PairExclusion,
    /// Sphere angle on `[v]^⊥` back to a line angle.
    SectionLift,
    /// Three-element intersections single out `π − 2α` in real dimension 3.
    ThreeLines,
    /// Four-element intersections single out `π/2` at `α = π/3` in real dimension 3.
    FourLines,
    /// At `α = π/4` the orthogonal pairs are exactly those with a circle of common neighbours.
    OrthoCircle,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Multiple(j) => write!(f, "Multiple({j})"),
            Rule::LeqMultiple(j) => write!(f, "LeqMultiple({j})"),
            Rule::PairOrdering(o) => write!(f, "PairOrdering({o:?})"),
            other => write!(f, "{other:?}"),
        }
    }
}

/// Extra data a rule needs beyond its inputs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    /// A preserved bound strictly between the two members of a pair.
    Separator(f64),
    /// The other member of a pair, already preserved.
    Companion(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
}

impl Condition {
    pub fn new(name: impl Into<String>, holds: bool) -> Self {
        Condition { name: name.into(), holds }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseLabel {
    SphereSmall,
    SphereAcute,
    SphereRight,
    SphereObtuse,
    SphereThreeQuarters,
    SphereNearRight,
    SphereTwoThirds,
    SphereStraight,
    SectionSmall,
    SectionPair,
    SectionThird,
    PlaneSmall,
    PlaneLarge,
    PlaneThird,
    ComplexSmall,
    ComplexQuarter,
    Qubit,
    QubitQuarter,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
        f.write_str(&s)
    }
}

impl CaseLabel {
    pub fn describe(self) -> &'static str {
        match self {
            CaseLabel::SphereSmall => "sphere, angle at most pi/4",
            CaseLabel::SphereAcute => "sphere, angle in (pi/4, pi/2)",
            CaseLabel::SphereRight => "sphere, right angle",
            CaseLabel::SphereObtuse => "sphere, angle in (3pi/4, pi)",
            CaseLabel::SphereThreeQuarters => "sphere, angle 3pi/4",
            CaseLabel::SphereNearRight => "sphere, angle in (pi/2, 3pi/4) other than 2pi/3",
            CaseLabel::SphereTwoThirds => "sphere, angle 2pi/3",
            CaseLabel::SphereStraight => "sphere, straight angle",
            CaseLabel::SectionSmall => "real lines, dim >= 4, angle below pi/3",
            CaseLabel::SectionPair => "real lines, dim >= 4, angle in (pi/3, pi/2)",
            CaseLabel::SectionThird => "real lines, dim >= 4, angle pi/3",
            CaseLabel::PlaneSmall => "real lines, dim 3, angle below pi/3",
            CaseLabel::PlaneLarge => "real lines, dim 3, angle in (pi/3, pi/2)",
            CaseLabel::PlaneThird => "real lines, dim 3, angle pi/3",
            CaseLabel::ComplexSmall => "complex lines, dim >= 3, angle below pi/4",
            CaseLabel::ComplexQuarter => "complex lines, dim >= 3, angle pi/4",
            CaseLabel::Qubit => "qubit lines via the Bloch sphere",
            CaseLabel::QubitQuarter => "qubit lines, angle pi/4",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub case: CaseLabel,
    pub rule: Rule,
    pub space: Space,
    pub inputs: Vec<f64>,
    pub witness: Option<Witness>,
    pub relation: Relation,
    pub outputs: Vec<f64>,
    pub conditions: Vec<Condition>,
}

impl Step {
    /// The derived angle for `Equal`/`AtMost` steps, the smaller member otherwise.
    pub fn derived(&self) -> f64 {
        self.outputs.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidityCertificate {
    pub seed: f64,
    pub context: Context,
    pub dim: usize,
    pub terminal_threshold: f64,
    pub max_steps: usize,
    pub steps: Vec<Step>,
    pub verdict: Verdict,
    pub reason: Option<String>,
}

impl RigidityCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> crate::error::Result<Self> {
        serde_json::from_str(s).map_err(|e| crate::error::Error::Parse {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })
    }

    /// Smallest angle derived in any space.
    pub fn smallest_derived(&self) -> Option<f64> {
        self.steps.iter().filter(|s| s.relation == Relation::Equal).map(Step::derived).reduce(f64::min)
    }

    /// One record per step: rule, inputs, output and side conditions.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("seed {:.17e}\ncontext {}\ndim {}\n", self.seed, self.context, self.dim));
        out.push_str(&format!("terminal_threshold {:e}\nmax_steps {}\n", self.terminal_threshold, self.max_steps));
        for (i, s) in self.steps.iter().enumerate() {
            let fmt_list = |xs: &[f64]| xs.iter().map(|x| format!("{x:.17e}")).collect::<Vec<_>>().join(", ");
            out.push_str(&format!("step {i}\n  case {}\n  rule {}\n  space {}\n", s.case, s.rule, s.space));
            out.push_str(&format!("  inputs [{}]\n", fmt_list(&s.inputs)));
            match s.witness {
                Some(Witness::Separator(t)) => out.push_str(&format!("  separator {t:.17e}\n")),
                Some(Witness::Companion(t)) => out.push_str(&format!("  companion {t:.17e}\n")),
                None => {}
            }
            let rel = match s.relation {
                Relation::Equal => "=",
                Relation::AtMost => "<=",
                Relation::EitherOf => "in",
            };
            out.push_str(&format!("  output {rel} [{}]\n", fmt_list(&s.outputs)));
            for c in &s.conditions {
                out.push_str(&format!("  check {} {}\n", c.name, c.holds));
            }
        }
        out.push_str(&format!("verdict {}\n", self.verdict));
        if let Some(r) = &self.reason {
            out.push_str(&format!("reason {r}\n"));
        }
        out
    }
}
