use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Value,
}

/// A named nonzero quantity: a structure-equation residual or a note.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Named {
    pub name: String,
    pub value: String,
}

impl Named {
    pub fn new(name: impl Into<String>, value: impl ToString) -> Self {
        Named {
            name: name.into(),
            value: value.to_string(),
        }
    }
}

/// The single JSON document a command prints. Field order is fixed, so
/// identical inputs give byte-identical output unless timing is requested.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub kind: String,
    pub verdict: Verdict,
    pub residuals: Vec<Named>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<Named>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cochain_dims: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler_characteristic: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    pub engine_version: String,
}

pub const ENGINE_VERSION: &str = concat!("diolic ", env!("CARGO_PKG_VERSION"));

impl Report {
    fn base(kind: &str, verdict: Verdict) -> Self {
        Report {
            kind: kind.to_string(),
            verdict,
            residuals: Vec::new(),
            notes: Vec::new(),
            value: None,
            betti: None,
            cochain_dims: None,
            euler_characteristic: None,
            timing_ms: None,
            engine_version: ENGINE_VERSION.to_string(),
        }
    }

    /// Pass iff there are no residuals.
    pub fn checked(kind: &str, residuals: Vec<Named>) -> Self {
        let verdict = if residuals.is_empty() { Verdict::Pass } else { Verdict::Fail };
        Report {
            residuals,
            ..Report::base(kind, verdict)
        }
    }

    pub fn value(kind: &str, value: impl ToString) -> Self {
        Report {
            value: Some(value.to_string()),
            ..Report::base(kind, Verdict::Value)
        }
    }

    pub fn cohomology(kind: &str, betti: Vec<usize>, dims: Vec<usize>, euler: i64) -> Self {
        Report {
            betti: Some(betti),
            cochain_dims: Some(dims),
            euler_characteristic: Some(euler),
            ..Report::base(kind, Verdict::Value)
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass | Verdict::Value => 0,
            Verdict::Fail => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    /// Plain-text rendering for `--pretty`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = match self.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Value => "value",
        };
        let _ = writeln!(out, "{}: {verdict}", self.kind);
        if let Some(v) = &self.value {
            let _ = writeln!(out, "  value: {v}");
        }
        let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(", ");
        if let Some(b) = &self.betti {
            let _ = writeln!(out, "  betti: [{}]", list(b));
        }
        if let Some(d) = &self.cochain_dims {
            let _ = writeln!(out, "  cochain dims: [{}]", list(d));
        }
        if let Some(e) = self.euler_characteristic {
            let _ = writeln!(out, "  euler characteristic: {e}");
        }
        for (title, items) in [("residuals", &self.residuals), ("notes", &self.notes)] {
            if !items.is_empty() {
                let _ = writeln!(out, "  {title}:");
                for r in items {
                    let _ = writeln!(out, "    {}: {}", r.name, r.value);
                }
            }
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(out, "  time: {t} ms");
        }
        let _ = writeln!(out, "  engine: {}", self.engine_version);
        out
    }
}
