//! Machine-readable verification reports.
//!
//! Premises (assumed facts) and computed facts live in physically separate
//! lists so a report can never overstate what was verified: the overall
//! verdict requires every computed fact to pass and every premise to have
//! been granted, and premises are never counted as computations. All numeric
//! values are serialized as decimal strings; no floating point appears in
//! the schema.

use std::fmt;

use serde::Serialize;

/// Version of the report JSON schema.
pub const SCHEMA_VERSION: u32 = 1;

/// Echo of the scenario a report was produced from.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScenarioEcho {
    pub h3: String,
    pub points: usize,
    pub r: String,
    pub mult_d: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_override: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_scale: Option<String>,
}

/// An assumed fact, granted (or not) as input.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Premise {
    pub id: String,
    pub statement: String,
    pub granted: bool,
}

/// A fact established (or refuted) by exact computation.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComputedFact {
    pub id: String,
    pub statement: String,
    pub pass: bool,
    pub detail: String,
}

/// Where an invariant value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Computed,
    Reference,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Computed => write!(f, "computed"),
            Provenance::Reference => write!(f, "reference"),
        }
    }
}

/// One invariant value with its provenance.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantEntry {
    pub value: String,
    pub provenance: Provenance,
}

/// The invariant triple of the double cover: the cube of the ample generator
/// (always computed through the certificate chain), and the second-Chern and
/// Euler numbers where known.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantRecord {
    pub hx3: InvariantEntry,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2_hx: Option<InvariantEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler_x: Option<InvariantEntry>,
}

impl fmt::Display for InvariantRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H_X^3 = {} ({})", self.hx3.value, self.hx3.provenance)?;
        if let Some(c2) = &self.c2_hx {
            write!(f, ", c2(X).H_X = {} ({})", c2.value, c2.provenance)?;
        }
        if let Some(e) = &self.euler_x {
            write!(f, ", e(X) = {} ({})", e.value, e.provenance)?;
        }
        Ok(())
    }
}

/// The full record of one verification run.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub schema_version: u32,
    pub scenario: ScenarioEcho,
    pub premises: Vec<Premise>,
    pub computed_facts: Vec<ComputedFact>,
    pub conclusions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantRecord>,
    pub overall_pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    /// Human-readable rendering, one line per premise/fact/conclusion.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!(
            "scenario: h^3 = {}, N = {}, r = {}, mult(D) = [{}]",
            self.scenario.h3,
            self.scenario.points,
            self.scenario.r,
            self.scenario.mult_d.join(", ")
        ));
        if let Some(d) = &self.scenario.d_override {
            line(format!("override: d = {d}"));
        }
        if let Some(m) = &self.scenario.b_scale {
            line(format!("override: b-class scaled by {m}"));
        }
        line("premises (assumed, not computed):".to_string());
        for p in &self.premises {
            let mark = if p.granted { "granted" } else { "NOT GRANTED" };
            line(format!("  [{mark}] {}: {}", p.id, p.statement));
        }
        line("computed facts:".to_string());
        for fact in &self.computed_facts {
            let mark = if fact.pass { "PASS" } else { "FAIL" };
            line(format!("  [{mark}] {}: {} ({})", fact.id, fact.statement, fact.detail));
        }
        line("conclusions:".to_string());
        for c in &self.conclusions {
            line(format!("  - {c}"));
        }
        if let Some(inv) = &self.invariants {
            line(format!("invariants: {inv}"));
        }
        line(format!(
            "overall: {}",
            if self.overall_pass { "PASS" } else { "FAIL" }
        ));
        out
    }
}
