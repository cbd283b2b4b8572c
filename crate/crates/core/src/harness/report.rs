//! Verification reports: one record per checked instance, PASS or FAIL.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::field::FiniteField;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub tag: String,
    pub inputs: Value,
    pub expected: Value,
    pub computed: Value,
    pub verdict: Verdict,
}

impl CaseRecord {
    pub fn new(tag: &str, inputs: Value, expected: Value, computed: Value, ok: bool) -> Self {
        CaseRecord { tag: tag.to_string(), inputs, expected, computed, verdict: Verdict::from_bool(ok) }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    /// Per-tag `[passed, total]`.
    pub by_tag: BTreeMap<String, [usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldProvenance {
    pub descriptor: String,
    pub modulus: String,
    pub generator: u32,
}

impl From<&FiniteField> for FieldProvenance {
    fn from(f: &FiniteField) -> Self {
        FieldProvenance { descriptor: f.descriptor(), modulus: f.modulus_string(), generator: f.generator().index() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub toolkit_version: String,
    pub suite: String,
    pub parameters: Value,
    pub cases: Vec<CaseRecord>,
    pub totals: Totals,
    pub provenance: Vec<FieldProvenance>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(suite: &str, parameters: Value) -> Self {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            toolkit_version: TOOLKIT_VERSION.to_string(),
            suite: suite.to_string(),
            parameters,
            cases: Vec::new(),
            totals: Totals::default(),
            provenance: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, case: CaseRecord) {
        self.cases.push(case);
    }

    pub fn extend(&mut self, cases: impl IntoIterator<Item = CaseRecord>) {
        self.cases.extend(cases);
    }

    pub fn add_field(&mut self, field: &FiniteField) {
        let p = FieldProvenance::from(field);
        if !self.provenance.contains(&p) {
            self.provenance.push(p);
        }
    }

    /// Recomputes totals and sorts provenance; call once all cases are in.
    pub fn finish(mut self) -> Self {
        let mut totals = Totals { cases: self.cases.len(), ..Totals::default() };
        for c in &self.cases {
            let slot = totals.by_tag.entry(c.tag.clone()).or_insert([0, 0]);
            slot[1] += 1;
            if c.passed() {
                slot[0] += 1;
                totals.passed += 1;
            } else {
                totals.failed += 1;
            }
        }
        self.totals = totals;
        self.provenance.sort();
        self
    }

    pub fn passed(&self) -> bool {
        self.cases.iter().all(CaseRecord::passed)
    }

    pub fn cases_tagged<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = &'a CaseRecord> + 'a {
        self.cases.iter().filter(move |c| c.tag == tag)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_json()?.as_bytes())?;
        f.write_all(b"\n")?;
        Ok(())
    }

    /// One CSV row per case; structured cells are compact JSON.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["tag", "inputs", "expected", "computed", "verdict"])?;
        for c in &self.cases {
            let verdict = if c.passed() { "PASS" } else { "FAIL" };
            out.write_record([
                c.tag.as_str(),
                &c.inputs.to_string(),
                &c.expected.to_string(),
                &c.computed.to_string(),
                verdict,
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    /// `suite: passed/total` plus failing tags.
    pub fn summary(&self) -> String {
        let mut s = format!("{}: {}/{} passed", self.suite, self.totals.passed, self.totals.cases);
        let failing: Vec<&str> = self
            .totals
            .by_tag
            .iter()
            .filter(|(_, v)| v[0] != v[1])
            .map(|(k, _)| k.as_str())
            .collect();
        if !failing.is_empty() {
            s.push_str(&format!(" (failing: {})", failing.join(", ")));
        }
        s
    }
}
