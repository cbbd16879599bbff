//! Structured command output.
//!
//! Every command produces a `Report`: the echoed inputs, a list of named
//! yes/no verdicts, and a list of named canonical objects. The report
//! renders either as plain text or as JSON (`--json`), and a saved JSON
//! report can be re-checked against a fresh run (`--verify-report`),
//! which compares the full structure.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<String>,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportObject {
    pub name: String,
    pub canonical: String,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub verdicts: Vec<Verdict>,
    pub objects: Vec<ReportObject>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            verdicts: Vec::new(),
            objects: Vec::new(),
        }
    }

    pub fn input(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.inputs.insert(name.to_string(), value.to_string());
        self
    }

    pub fn verdict(&mut self, name: &str, holds: bool) -> &mut Self {
        self.verdicts.push(Verdict {
            name: name.to_string(),
            holds,
            details: None,
        });
        self
    }

    pub fn verdict_with(&mut self, name: &str, holds: bool, details: impl ToString) -> &mut Self {
        self.verdicts.push(Verdict {
            name: name.to_string(),
            holds,
            details: Some(details.to_string()),
        });
        self
    }

    pub fn object(&mut self, name: &str, canonical: impl ToString) -> &mut Self {
        self.objects.push(ReportObject {
            name: name.to_string(),
            canonical: canonical.to_string(),
        });
        self
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for (k, v) in &self.inputs {
            out.push_str(&format!("input {k}: {v}\n"));
        }
        for v in &self.verdicts {
            let answer = if v.holds { "yes" } else { "no" };
            match &v.details {
                Some(d) => out.push_str(&format!("check {}: {answer} ({d})\n", v.name)),
                None => out.push_str(&format!("check {}: {answer}\n", v.name)),
            }
        }
        for o in &self.objects {
            out.push_str(&format!("{} = {}\n", o.name, o.canonical));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_text_in_section_order() {
        let mut r = Report::new("demo");
        r.input("f", "x + y");
        r.verdict("identity", true);
        r.verdict_with("unit", false, "missing");
        r.object("g", "2*x");
        assert_eq!(
            r.render_text(),
            "command: demo\ninput f: x + y\ncheck identity: yes\ncheck unit: no (missing)\ng = 2*x\n"
        );
        assert!(!r.all_hold());
    }

    #[test]
    fn json_round_trips() {
        let mut r = Report::new("demo");
        r.input("f", "x");
        r.verdict("ok", true);
        r.object("out", "1 + x");
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
