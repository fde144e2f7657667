//! Deterministic text and key=value reports.

use std::fmt::Write;

use descent_core::Certified;

/// Exit status of a command: 0 holds, 1 fails with a certificate, 2
/// undecided within the search bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Undecided,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Undecided => 2,
        }
    }

    pub fn of(c: &Certified) -> Status {
        if c.holds {
            Status::Holds
        } else {
            Status::Fails
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub subject: String,
    pub verdict: String,
    /// further labelled results, in display order
    pub fields: Vec<(String, String)>,
    pub status: Status,
}

impl Report {
    pub fn new(command: &str, subject: &str, verdict: impl Into<String>, status: Status) -> Self {
        Report {
            command: command.into(),
            subject: subject.into(),
            verdict: verdict.into(),
            fields: Vec::new(),
            status,
        }
    }

    pub fn field(mut self, key: &str, value: impl ToString) -> Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Machine => self.machine(),
        }
    }

    fn text(&self) -> String {
        let mut out = format!("{} {}: {}\n", self.command, self.subject, self.verdict);
        let width = self.fields.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        for (k, v) in &self.fields {
            let mut lines = v.lines();
            let first = lines.next().unwrap_or("");
            writeln!(out, "  {k:width$}  {first}").unwrap();
            for line in lines {
                writeln!(out, "  {:width$}  {line}", "").unwrap();
            }
        }
        writeln!(out, "  {:width$}  {}", "exit", self.status.code()).unwrap();
        out
    }

    /// One `key=value` per line; newlines and backslashes in values are
    /// escaped so every record stays on one line.
    fn machine(&self) -> String {
        let escape = |s: &str| s.replace('\\', "\\\\").replace('\n', "\\n");
        let mut out = String::new();
        writeln!(out, "command={}", self.command).unwrap();
        writeln!(out, "subject={}", escape(&self.subject)).unwrap();
        writeln!(out, "verdict={}", escape(&self.verdict)).unwrap();
        for (k, v) in &self.fields {
            writeln!(out, "{k}={}", escape(v)).unwrap();
        }
        writeln!(out, "exit={}", self.status.code()).unwrap();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_lines_escape_newlines() {
        let r = Report::new("chains", "C", "3 chains", Status::Holds).field("list", "a\nb");
        assert_eq!(
            r.render(Format::Machine),
            "command=chains\nsubject=C\nverdict=3 chains\nlist=a\\nb\nexit=0\n"
        );
    }

    #[test]
    fn text_aligns_fields() {
        let r = Report::new("classify-fn", "p", "Effective", Status::Holds).field("certificate", "surjective");
        assert_eq!(
            r.render(Format::Text),
            "classify-fn p: Effective\n  certificate  surjective\n  exit         0\n"
        );
    }
}
