//! Bound expressions for every inequality checked by the engine.
//!
//! Each theorem maps an [`Instance`] (field, dimension and set sizes) to the
//! right-hand side of its inequality with the implied constant set to 1, the
//! case of the statement that applied, and flags for instances outside the
//! stated hypotheses. Bounds stated with an explicit constant are tier
//! [`Tier::Exact`] and are asserted; the rest are [`Tier::Estimated`] and only
//! have their observed constants reported.

use std::fmt;

use crate::field::FieldContext;
use crate::motions::orthogonal_group_order;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    Exact,
    Estimated,
}

/// What the observed value of a theorem row measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    /// `sum_{||m|| = ||m'||} |A^(m)|^2 |B^(m')|^2` (zero pair removed where stated).
    SpectralSum,
    /// A per-radius spectral energy such as `M*(A)`.
    SphereEnergy,
    /// `|N(P) - |P|^2 / q|` or a related deviation of `N(P)`.
    QuadrupleDeviation,
    /// `|E|` for an exceptional set of group elements.
    ExceptionalCount,
    /// `|I(P, R) - |P||R| / q^d|`.
    IncidenceDeviation,
    /// `I(P, R)` itself (upper-bound-only statements).
    IncidenceCount,
    /// Number of subspaces with a small projection.
    ProjectionCount,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flag {
    /// Set sizes fall outside the range where the bound says anything.
    ValidityRange,
    /// The field or dimension violates a hypothesis of the statement.
    Hypothesis,
    /// A case the statement leaves open; run for information only.
    Exploratory,
    /// No case of a range-split statement covers the sizes.
    NoCase,
}

impl Flag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Flag::ValidityRange => "VALIDITY_RANGE",
            Flag::Hypothesis => "HYPOTHESIS",
            Flag::Exploratory => "EXPLORATORY",
            Flag::NoCase => "NO_CASE",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sizes and field data a bound may depend on. Unused fields stay at zero.
#[derive(Clone, Debug, Default)]
pub struct Instance {
    pub p: u32,
    pub ell: u32,
    pub q: f64,
    pub d: u32,
    /// `q mod 4`.
    pub q_mod4: u32,
    /// `|O(d-1, q)|`.
    pub o_dm1: f64,
    pub a: f64,
    pub b: f64,
    pub p_size: f64,
    pub r: f64,
    pub eps: f64,
    /// Projection dimension.
    pub m: u32,
    /// Threshold `N` in projection counts.
    pub n: f64,
}

impl Instance {
    pub fn new(field: &FieldContext, d: usize) -> Instance {
        let o_dm1 = if d >= 2 { orthogonal_group_order(field, d - 1) as f64 } else { 1.0 };
        Instance {
            p: field.p(),
            ell: field.ell(),
            q: field.q() as f64,
            d: d as u32,
            q_mod4: field.q() % 4,
            o_dm1,
            ..Default::default()
        }
    }

    pub fn sets(mut self, a: usize, b: usize) -> Self {
        self.a = a as f64;
        self.b = b as f64;
        self.p_size = (a * b) as f64;
        self
    }

    pub fn pairs(mut self, p_size: usize) -> Self {
        self.p_size = p_size as f64;
        self
    }

    pub fn motions(mut self, r: usize) -> Self {
        self.r = r as f64;
        self
    }

    pub fn eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn projection(mut self, m: usize, n: usize, e: usize) -> Self {
        self.m = m as u32;
        self.n = n as f64;
        self.a = e as f64;
        self
    }

    fn qd(&self) -> f64 {
        self.q.powi(self.d as i32)
    }

    /// `(small, large)` of `|A|, |B|`.
    fn ordered(&self) -> (f64, f64) {
        (self.a.min(self.b), self.a.max(self.b))
    }

    fn restricted_case(&self) -> bool {
        let d = self.d;
        (d >= 3 && d % 2 == 1) || (d % 4 == 2 && self.q_mod4 == 3)
    }

    fn prime_plane(&self) -> bool {
        self.d == 2 && self.ell == 1 && self.p % 4 == 3
    }
}

/// A bound evaluated on one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    /// `None` when no case of the statement applies.
    pub bound: Option<f64>,
    pub case: &'static str,
    pub flags: Vec<Flag>,
}

impl Evaluation {
    fn of(bound: f64, case: &'static str) -> Self {
        Evaluation { bound: Some(bound), case, flags: Vec::new() }
    }

    fn none(flag: Flag) -> Self {
        Evaluation { bound: None, case: "", flags: vec![flag] }
    }

    fn flag_if(mut self, cond: bool, flag: Flag) -> Self {
        if cond && !self.flags.contains(&flag) {
            self.flags.push(flag);
            self.flags.sort();
        }
        self
    }

    /// Observed constant `observed / bound`; `0/0` counts as 0.
    pub fn constant(&self, observed: f64) -> Option<f64> {
        let b = self.bound?;
        if observed == 0.0 {
            Some(0.0)
        } else if b > 0.0 {
            Some(observed / b)
        } else {
            None
        }
    }

    /// Flags that keep a row out of constant estimation.
    pub fn is_clean(&self) -> bool {
        self.bound.is_some() && self.flags.is_empty()
    }
}

macro_rules! theorems {
    ($($variant:ident => $id:literal, $tier:ident, $quantity:ident;)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Theorem { $($variant),* }

        impl Theorem {
            pub const ALL: &'static [Theorem] = &[$(Theorem::$variant),*];

            pub fn id(&self) -> &'static str {
                match self { $(Theorem::$variant => $id),* }
            }

            pub fn tier(&self) -> Tier {
                match self { $(Theorem::$variant => Tier::$tier),* }
            }

            pub fn quantity(&self) -> Quantity {
                match self { $(Theorem::$variant => Quantity::$quantity),* }
            }
        }
    };
}

theorems! {
    SpectralPlancherel => "spectral-plancherel", Exact, SpectralSum;
    SpectralRestricted => "spectral-restricted", Estimated, SpectralSum;
    SphereEnergy => "sphere-energy", Estimated, SphereEnergy;
    ZeroSphereEnergy => "zero-sphere-energy", Estimated, SphereEnergy;
    SpectralPlane => "spectral-plane", Estimated, SpectralSum;
    SpectralPrimePlane => "spectral-prime-plane", Estimated, SpectralSum;
    Quadruple => "quadruple", Estimated, QuadrupleDeviation;
    SpectralGeneral => "spectral-general", Estimated, SpectralSum;
    Isosceles => "isosceles", Estimated, QuadrupleDeviation;
    Intersection => "intersection", Estimated, ExceptionalCount;
    IntersectionRestricted => "intersection-restricted", Estimated, ExceptionalCount;
    IntersectionPlane => "intersection-plane", Estimated, ExceptionalCount;
    IntersectionPrimeMedium => "intersection-prime-medium", Estimated, ExceptionalCount;
    IntersectionPrimeLarge => "intersection-prime-large", Estimated, ExceptionalCount;
    Image => "image", Estimated, ExceptionalCount;
    Incidence => "incidence", Estimated, IncidenceDeviation;
    IncidenceRestricted => "incidence-restricted", Estimated, IncidenceDeviation;
    IncidencePlane => "incidence-plane", Estimated, IncidenceDeviation;
    IncidencePrimeSmall => "incidence-prime-small", Estimated, IncidenceDeviation;
    IncidencePrimeMedium => "incidence-prime-medium", Estimated, IncidenceDeviation;
    IncidencePrimeLarge => "incidence-prime-large", Estimated, IncidenceDeviation;
    IncidenceCauchySchwarz => "incidence-cauchy-schwarz", Estimated, IncidenceCount;
    IncidenceTrivial => "incidence-trivial", Estimated, IncidenceCount;
    IncidencePrimeSmallSets => "incidence-prime-small-sets", Estimated, IncidenceCount;
    Growth => "growth", Estimated, ExceptionalCount;
    GrowthRestricted => "growth-restricted", Estimated, ExceptionalCount;
    GrowthPlane => "growth-plane", Estimated, ExceptionalCount;
    GrowthPrimeSmall => "growth-prime-small", Estimated, ExceptionalCount;
    GrowthPrimeMedium => "growth-prime-medium", Estimated, ExceptionalCount;
    GrowthPrimeLarge => "growth-prime-large", Estimated, ExceptionalCount;
    ProjectionCount => "projection-count", Exact, ProjectionCount;
    ProjectionDensity => "projection-density", Exact, ProjectionCount;
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Theorem::ALL.iter().copied().find(|t| t.id() == s).ok_or_else(|| format!("unknown theorem id `{s}`"))
    }
}

fn between(x: f64, lo: f64, hi: f64) -> bool {
    lo <= x && x <= hi
}

impl Theorem {
    pub fn evaluate(&self, s: &Instance) -> Evaluation {
        let q = s.q;
        let d = s.d as f64;
        let di = s.d as i32;
        let p = s.p as f64;
        let (small, large) = s.ordered();
        let pw = |e: f64| p.powf(e);
        let qw = |e: f64| q.powf(e);
        let prime_plane_flags = |e: Evaluation| e.flag_if(!s.prime_plane(), Flag::Hypothesis);
        match self {
            Theorem::SpectralPlancherel => Evaluation::of(s.a * s.b / qw(2.0 * d), "all"),
            Theorem::SpectralRestricted => {
                let a = s.a;
                let e = if a <= qw((d - 1.0) / 2.0) {
                    Evaluation::of(a * s.b / qw(2.0 * d + 1.0), "small A")
                } else if a <= qw((d + 1.0) / 2.0) {
                    Evaluation::of(a * a * s.b / qw((5.0 * d + 1.0) / 2.0), "medium A")
                } else {
                    Evaluation::none(Flag::NoCase)
                };
                e.flag_if(!s.restricted_case(), Flag::Hypothesis)
            }
            Theorem::SphereEnergy => {
                let a = s.a;
                if s.d == 2 {
                    Evaluation::of(a.powf(1.5) / q.powi(3), "plane, nonzero radii")
                } else if s.d >= 3 {
                    let v = (a / q.powi(di)).min(a / q.powi(di + 1) + a * a / qw((3.0 * d + 1.0) / 2.0));
                    Evaluation::of(v, if s.d.is_multiple_of(2) { "even, nonzero radii" } else { "odd, all radii" })
                } else {
                    Evaluation::none(Flag::NoCase)
                }
            }
            Theorem::ZeroSphereEnergy => {
                let a = s.a;
                let v = a / q.powi(di + 1) + a * a / qw((3.0 * d + 2.0) / 2.0);
                Evaluation::of(v, "radius zero").flag_if(!(s.d % 4 == 2 && s.q_mod4 == 3), Flag::Hypothesis)
            }
            Theorem::SpectralPlane => Evaluation::of(s.a * s.b * small.sqrt() / q.powi(5), "zero pair excluded")
                .flag_if(!(s.d == 2 && s.q_mod4 == 3), Flag::Hypothesis),
            Theorem::SpectralPrimePlane => {
                // Bound on p^6 times the spectral sum, |A| <= |B|.
                let (a, b) = (small, large);
                let fa = (p * a * a + a.powf(10.0 / 3.0)).sqrt();
                let e = if a <= p && between(b, pw(1.25), pw(4.0 / 3.0)) {
                    Evaluation::of(pw(0.125) * fa * b.powf(1.5), "A <= p, p^(5/4) <= B <= p^(4/3)")
                } else if a <= p && between(b, p, pw(1.25)) {
                    Evaluation::of(fa * pw(1.0 / 3.0) * b.powf(4.0 / 3.0), "A <= p, p <= B <= p^(5/4)")
                } else if a <= p && b <= p {
                    Evaluation::of(fa * (p * b * b + b.powf(10.0 / 3.0)).sqrt(), "A, B <= p")
                } else {
                    Evaluation::none(Flag::NoCase)
                };
                prime_plane_flags(e)
            }
            Theorem::Quadruple => Evaluation::of(s.qd() * s.p_size, "all"),
            Theorem::SpectralGeneral => Evaluation::of(s.qd() * s.p_size, "all"),
            Theorem::Isosceles => {
                let a = s.a;
                let v = (pw(2.0 / 3.0) * a.powf(8.0 / 3.0) + pw(0.25) * a.powi(3)).min(a.powf(10.0 / 3.0));
                prime_plane_flags(Evaluation::of(v, "A x A")).flag_if(a > pw(4.0 / 3.0), Flag::ValidityRange)
            }
            Theorem::Intersection => Evaluation::of(s.o_dm1 * q.powi(2 * di) / (s.a * s.b), "all")
                .flag_if(s.a * s.b < q.powi(di + 1), Flag::ValidityRange),
            Theorem::IntersectionRestricted => {
                let e = if small < qw((d - 1.0) / 2.0) {
                    Evaluation::of(qw((d * d + d) / 2.0) / (s.a * s.b), "small A")
                } else if small <= qw((d + 1.0) / 2.0) {
                    Evaluation::of(qw((d * d + 1.0) / 2.0) / large, "medium A")
                } else {
                    Evaluation::none(Flag::NoCase)
                };
                let open = s.d % 4 == 2 && s.q_mod4 == 1;
                e.flag_if(open, Flag::Exploratory).flag_if(!open && !s.restricted_case(), Flag::Hypothesis)
            }
            Theorem::IntersectionPlane => Evaluation::of(q.powi(3) / (small.sqrt() * large), "|A| <= |B|")
                .flag_if(!(s.d == 2 && s.q_mod4 == 3), Flag::Hypothesis),
            Theorem::IntersectionPrimeMedium => {
                let (a, b) = (small, large);
                let mid = (pw(1.25), pw(4.0 / 3.0));
                let e = if between(a, p, pw(1.25)) && between(b, mid.0, mid.1) {
                    Evaluation::of(pw(59.0 / 24.0) / (a.powf(2.0 / 3.0) * b.sqrt()), "p <= A <= p^(5/4), p^(5/4) <= B <= p^(4/3)")
                } else if between(a, mid.0, mid.1) && between(b, mid.0, mid.1) {
                    Evaluation::of(pw(2.25) / (a * b).sqrt(), "p^(5/4) <= A, B <= p^(4/3)")
                } else if unknown_cell(a, b, p) {
                    Evaluation::none(Flag::Exploratory)
                } else {
                    Evaluation::none(Flag::NoCase)
                };
                prime_plane_flags(e)
            }
            Theorem::IntersectionPrimeLarge => {
                let (a, b) = (small, large);
                let e = if between(a, p, pw(1.25)) && b > pw(4.0 / 3.0) {
                    Evaluation::of(pw(17.0 / 6.0) / (a.powf(2.0 / 3.0) * b.powf(0.75)), "p <= A <= p^(5/4), B > p^(4/3)")
                } else if between(a, pw(1.25), pw(4.0 / 3.0)) && b > pw(4.0 / 3.0) {
                    Evaluation::of(pw(21.0 / 8.0) / (a.sqrt() * b.powf(0.75)), "p^(5/4) <= A <= p^(4/3), B > p^(4/3)")
                } else {
                    Evaluation::none(Flag::NoCase)
                };
                prime_plane_flags(e)
            }
            Theorem::Image => Evaluation::of(q.powi(2 * di) * s.o_dm1 / s.p_size, "all"),
            Theorem::Incidence => Evaluation::of(qw((d * d - d + 2.0) / 4.0) * (s.p_size * s.r).sqrt(), "all"),
            Theorem::IncidenceRestricted => {
                let pr = s.p_size * s.r;
                let e = if s.a < qw((d - 1.0) / 2.0) {
                    Evaluation::of(qw((d * d - d) / 4.0) * pr.sqrt(), "small A")
                } else if s.a <= qw((d + 1.0) / 2.0) {
                    Evaluation::of(qw((d * d - 2.0 * d + 1.0) / 4.0) * (pr * s.a).sqrt(), "medium A")
                } else {
                    Evaluation::none(Flag::NoCase)
                };
                e.flag_if(!s.restricted_case(), Flag::Hypothesis)
            }
            Theorem::IncidencePlane => Evaluation::of(q.sqrt() * (s.p_size * s.r).sqrt() * small.powf(0.25), "all")
                .flag_if(!(s.d == 2 && s.q_mod4 == 3), Flag::Hypothesis),
            Theorem::IncidencePrimeSmall => {
                let (a, b) = (small, large);
                let (pp, r) = (s.p_size, s.r);
                let e = if between(a, pw(0.75), p) && between(b, pw(1.25), pw(4.0 / 3.0)) {
                    Evaluation::of(pw(1.0 / 16.0) * pp.powf(0.75) * r.sqrt() * a.powf(1.0 / 12.0), "p^(3/4) <= A <= p, p^(5/4) <= B <= p^(4/3)")
                } else if a <= p && between(b, p, pw(1.25)) {
                    let inner = 1.0 / pw(5.0) + pp.powf(1.0 / 3.0) * a.powf(1.0 / 3.0) / pw(17.0 / 3.0);
                    Evaluation::of(p.powi(3) * (pp * r).sqrt() * inner.sqrt(), "A <= p, p <= B <= p^(5/4)")
                } else if a <= p && b <= p {
                    let inner = 1.0 / pw(5.0) + pp.powf(2.0 / 3.0) / pw(6.0);
                    Evaluation::of(p.powi(3) * (pp * r).sqrt() * inner.sqrt(), "A, B <= p")
                } else {
                    Evaluation::none(Flag::NoCase)
                };
                prime_plane_flags(e)
            }
            Theorem::IncidencePrimeMedium => {
                let (a, b) = (small, large);
                let (pp, r) = (s.p_size, s.r);
                let mid = (pw(1.25), pw(4.0 / 3.0));
                let e = if between(a, p, mid.0) && between(b, p, mid.0) {
                    Evaluation::of(pw(1.0 / 3.0) * pp.powf(2.0 / 3.0) * r.sqrt(), "p <= A, B <= p^(5/4)")
                } else if between(a, p, mid.0) && between(b, mid.0, mid.1) {
                    Evaluation::of(pw(11.0 / 48.0) * pp.powf(2.0 / 3.0) * r.sqrt() * b.powf(1.0 / 12.0), "p <= A <= p^(5/4) <= B <= p^(4/3)")
                } else if between(a, mid.0, mid.1) && between(b, mid.0, mid.1) {
                    Evaluation::of(pw(0.125) * pp.powf(0.75) * r.sqrt(), "p^(5/4) <= A, B <= p^(4/3)")
                } else {
                    Evaluation::none(Flag::NoCase)
                };
                prime_plane_flags(e)
            }
            Theorem::IncidencePrimeLarge => {
                let (a, b) = (small, large);
                let (pp, r) = (s.p_size, s.r);
                let e = if between(a, p, pw(1.25)) && b > pw(4.0 / 3.0) {
                    Evaluation::of(pw(5.0 / 12.0) * pp.powf(5.0 / 8.0) * r.sqrt() * a.powf(1.0 / 24.0), "p <= A <= p^(5/4), B > p^(4/3)")
                } else if between(a, pw(1.25), pw(4.0 / 3.0)) && b > pw(4.0 / 3.0) {
                    Evaluation::of(pw(5.0 / 16.0) * pp.powf(5.0 / 8.0) * r.sqrt() * a.powf(0.125), "p^(5/4) <= A <= p^(4/3), B > p^(4/3)")
                } else {
                    Evaluation::none(Flag::NoCase)
                };
                prime_plane_flags(e)
            }
            Theorem::IncidenceCauchySchwarz => {
                let n = s.p_size * s.p_size / q + s.qd() * s.p_size;
                Evaluation::of((s.r * s.o_dm1 * n).sqrt() + s.r, "all")
            }
            Theorem::IncidenceTrivial => Evaluation::of(s.p_size * (s.r * s.o_dm1).sqrt() + s.r, "all"),
            Theorem::IncidencePrimeSmallSets => {
                let e = Evaluation::of(s.p_size.powf(5.0 / 6.0) * s.r.sqrt() + s.r, "A, B <= p");
                prime_plane_flags(e).flag_if(large > p, Flag::ValidityRange)
            }
            Theorem::Growth => Evaluation::of(s.o_dm1 * s.qd() * s.b.powf(s.eps) / s.a, "all")
                .flag_if(growth_out_of_range(s), Flag::ValidityRange),
            Theorem::GrowthRestricted => {
                let be = s.b.powf(s.eps);
                let e = if s.a < qw((d - 1.0) / 2.0) {
                    Evaluation::of(qw((d * d - d) / 2.0) * be / s.a, "small A")
                } else if s.a <= qw((d + 1.0) / 2.0) {
                    Evaluation::of(qw((d * d - 2.0 * d + 1.0) / 2.0) * be, "medium A")
                } else {
                    Evaluation::none(Flag::NoCase)
                };
                e.flag_if(!s.restricted_case(), Flag::Hypothesis).flag_if(growth_out_of_range(s), Flag::ValidityRange)
            }
            Theorem::GrowthPlane => Evaluation::of(q * s.b.powf(s.eps) / s.a.sqrt(), "all")
                .flag_if(!(s.d == 2 && s.q_mod4 == 3), Flag::Hypothesis)
                .flag_if(growth_out_of_range(s), Flag::ValidityRange),
            Theorem::GrowthPrimeSmall => {
                let (a, b) = (s.a, s.b);
                let be = b.powf(s.eps);
                let e = if between(a, pw(0.75), p) && between(b, pw(1.25), pw(4.0 / 3.0)) {
                    Evaluation::of(pw(0.125) * b.powf(0.5 + s.eps) / a.powf(1.0 / 3.0), "p^(3/4) <= A <= p, p^(5/4) <= B <= p^(4/3)")
                } else if a <= p && between(b, p, pw(1.25)) {
                    Evaluation::of((p * be + pw(1.0 / 3.0) * be * s.p_size.powf(1.0 / 3.0) * a.powf(1.0 / 3.0)) / a, "A <= p, p <= B <= p^(5/4)")
                } else if a <= p && b <= p {
                    Evaluation::of(be * s.p_size.powf(2.0 / 3.0) / a, "A, B <= p")
                } else {
                    Evaluation::none(Flag::NoCase)
                };
                prime_plane_flags(e).flag_if(growth_out_of_range(s), Flag::ValidityRange)
            }
            Theorem::GrowthPrimeMedium => {
                let (a, b) = (s.a, s.b);
                let mid = (pw(1.25), pw(4.0 / 3.0));
                let e = if between(a, p, mid.0) && between(b, p, mid.0) {
                    Evaluation::of(pw(2.0 / 3.0) * b.powf(1.0 / 3.0 + s.eps) / a.powf(2.0 / 3.0), "p <= A, B <= p^(5/4)")
                } else if between(a, p, mid.0) && between(b, mid.0, mid.1) {
                    Evaluation::of(pw(11.0 / 24.0) * b.powf(0.5 + s.eps) / a.powf(2.0 / 3.0), "p <= A <= p^(5/4) <= B <= p^(4/3)")
                } else if between(a, mid.0, mid.1) && between(b, mid.0, mid.1) {
                    Evaluation::of(pw(0.25) * b.powf(0.5 + s.eps) / a.sqrt(), "p^(5/4) <= A, B <= p^(4/3)")
                } else {
                    Evaluation::none(Flag::NoCase)
                };
                prime_plane_flags(e).flag_if(growth_out_of_range(s), Flag::ValidityRange)
            }
            Theorem::GrowthPrimeLarge => {
                let (a, b) = (s.a, s.b);
                let e = if between(a, p, pw(1.25)) && b > pw(4.0 / 3.0) {
                    Evaluation::of(pw(5.0 / 6.0) * b.powf(0.25 + s.eps) / a.powf(2.0 / 3.0), "p <= A <= p^(5/4), B > p^(4/3)")
                } else if between(a, pw(1.25), pw(4.0 / 3.0)) && b > pw(4.0 / 3.0) {
                    Evaluation::of(pw(5.0 / 8.0) * b.powf(0.25 + s.eps) / a.sqrt(), "p^(5/4) <= A <= p^(4/3), B > p^(4/3)")
                } else {
                    Evaluation::none(Flag::NoCase)
                };
                prime_plane_flags(e).flag_if(growth_out_of_range(s), Flag::ValidityRange)
            }
            Theorem::ProjectionCount => {
                let (m, dd) = (s.m as i32, s.d as i32);
                Evaluation::of(4.0 * q.powi((dd - m) * m - m) * s.n, "N < |E|/2")
                    .flag_if(s.n >= s.a / 2.0, Flag::ValidityRange)
            }
            Theorem::ProjectionDensity => {
                // `n` carries delta here.
                let (m, dd) = (s.m as i32, s.d as i32);
                let delta = s.n;
                Evaluation::of(2.0 * delta / (1.0 - delta) * q.powi(m * (dd - m) + m) / s.a, "0 < delta < 1")
                    .flag_if(!(delta > 0.0 && delta < 1.0), Flag::ValidityRange)
            }
        }
    }
}

fn growth_out_of_range(s: &Instance) -> bool {
    s.a > s.b || s.b.powf(1.0 + s.eps) >= s.q.powi(s.d as i32) / 2.0
}

/// Size cells of the prime-plane intersection table with no known result.
fn unknown_cell(a: f64, b: f64, p: f64) -> bool {
    let pw = |e: f64| p.powf(e);
    (a > pw(0.75) && a <= p && b > p && b <= pw(1.25))
        || (a > pw(0.5) && a <= p && b > pw(1.25) && b <= pw(4.0 / 3.0))
}
