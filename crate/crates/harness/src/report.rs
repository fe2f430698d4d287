//! Report rows, identity-check results and their JSON / CSV serialisation.

use serde::Serialize;

pub const SCHEMA: u32 = 1;

/// One theorem instance.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Row {
    pub schema: u32,
    pub theorem_id: String,
    pub p: u32,
    pub ell: u32,
    pub q: u32,
    pub d: usize,
    pub size_a: usize,
    pub size_b: usize,
    pub size_p: usize,
    pub size_r: usize,
    pub observed: f64,
    pub bound: Option<f64>,
    pub constant: Option<f64>,
    pub flags: Vec<String>,
    pub case: String,
    pub family: String,
    pub instance: usize,
}

impl Row {
    /// Rows with a bound and no flags feed constant estimation.
    pub fn is_clean(&self) -> bool {
        self.bound.is_some() && self.flags.is_empty()
    }
}

/// Outcome of one exact identity over every instance of one field and dimension.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub p: u32,
    pub ell: u32,
    pub d: usize,
    pub instances: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Serialised offending instance, for the first failure.
    pub repro: Option<String>,
}

/// Summary of an estimated constant over a sweep.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ConstantSummary {
    pub theorem_id: String,
    pub rows: usize,
    pub max_constant: f64,
    pub median_constant: f64,
    /// `(q, max constant at q)`, increasing in `q`.
    pub per_q: Vec<(u32, f64)>,
    /// Largest-`q` maximum over smallest-`q` maximum exceeds 2.
    pub grows_with_q: bool,
    /// Ratio of the maxima at the two largest `q` (larger over smaller),
    /// 1 when both are zero.
    pub stability_ratio: f64,
}

/// An asserted bound that failed in a sweep.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Violation {
    pub theorem_id: String,
    pub q: u32,
    pub d: usize,
    pub instance: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct Report {
    pub schema: u32,
    pub rows: Vec<Row>,
    pub identities: Vec<IdentityCheck>,
    pub summary: Vec<ConstantSummary>,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Report {
        Report { schema: SCHEMA, ..Default::default() }
    }

    /// Puts rows and checks into their canonical order.
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            (&a.theorem_id, a.q, a.d, a.instance).cmp(&(&b.theorem_id, b.q, b.d, b.instance))
        });
        self.identities.sort_by(|a, b| (a.p, a.ell, a.d, &a.name).cmp(&(b.p, b.ell, b.d, &b.name)));
        self.summary.sort_by(|a, b| a.theorem_id.cmp(&b.theorem_id));
        self.violations.sort_by(|a, b| (&a.theorem_id, a.q, a.d, a.instance).cmp(&(&b.theorem_id, b.q, b.d, b.instance)));
    }

    pub fn merge(&mut self, other: Report) {
        self.rows.extend(other.rows);
        self.identities.extend(other.identities);
        self.summary.extend(other.summary);
        self.violations.extend(other.violations);
        self.sort();
    }

    /// All identities passed and no asserted bound failed.
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|c| c.passed) && self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// Theorem rows as CSV, followed by identity checks when present.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:e}"));
        let mut s = String::from(
            "theorem_id,p,ell,q,d,size_a,size_b,size_p,size_r,observed,bound,constant,flags,case,family,instance\n",
        );
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{:e},{},{},{},\"{}\",{},{}\n",
                r.theorem_id,
                r.p,
                r.ell,
                r.q,
                r.d,
                r.size_a,
                r.size_b,
                r.size_p,
                r.size_r,
                r.observed,
                opt(r.bound),
                opt(r.constant),
                r.flags.join("|"),
                r.case,
                r.family,
                r.instance
            ));
        }
        if !self.identities.is_empty() {
            s.push_str("\nidentity,p,ell,d,instances,max_error,tolerance,passed\n");
            for c in &self.identities {
                s.push_str(&format!(
                    "{},{},{},{},{},{:e},{:e},{}\n",
                    c.name, c.p, c.ell, c.d, c.instances, c.max_error, c.tolerance, c.passed
                ));
            }
        }
        s
    }
}
