//! Machine-readable run reports with a stable schema.
//!
//! Reports are plain text, one record per line, deterministic for a given
//! configuration (no timestamps, no environment data), so golden files can
//! be byte-compared.

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub params: Vec<(String, String)>,
    pub checks: Vec<ReportCheck>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            params: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<String>) {
        self.params.push((key.to_string(), value.into()));
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(ReportCheck {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("liepseudo-report schema={SCHEMA_VERSION}\n"));
        out.push_str(&format!("command = {}\n", self.command));
        for (k, v) in &self.params {
            out.push_str(&format!("param {k} = {v}\n"));
        }
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                out.push_str(&format!("check {verdict} {}\n", c.name));
            } else {
                out.push_str(&format!("check {verdict} {} | {}\n", c.name, c.detail));
            }
        }
        let verdict = if self.all_pass() { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "summary = {verdict} ({}/{} checks)\n",
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len()
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_is_stable() {
        let mut r = Report::new("validate");
        r.param("spec", "x.alg");
        r.check("trace form", true, "");
        r.check("omega skew", false, "witness (1,2)");
        let text = r.render();
        assert!(text.contains("command = validate"));
        assert!(text.contains("check PASS trace form"));
        assert!(text.contains("check FAIL omega skew | witness (1,2)"));
        assert!(text.contains("summary = FAIL (1/2 checks)"));
        assert_eq!(text, r.render());
    }
}
