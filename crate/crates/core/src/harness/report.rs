use std::fmt;
use std::time::Duration;

/// Counterexamples kept per report; the rest are only counted.
pub const KEPT_COUNTEREXAMPLES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// The failing input in concrete syntax.
    pub input: String,
    pub expected: String,
    pub actual: String,
}

impl Counterexample {
    pub fn new(
        input: impl Into<String>,
        expected: impl Into<String>,
        actual: impl Into<String>,
    ) -> Self {
        Counterexample {
            input: input.into(),
            expected: expected.into(),
            actual: actual.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub name: String,
    pub instances: u64,
    pub failures: u64,
    pub counterexamples: Vec<Counterexample>,
    /// Observations that are not failures.
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl PropertyReport {
    pub fn new(name: impl Into<String>) -> Self {
        PropertyReport {
            name: name.into(),
            instances: 0,
            failures: 0,
            counterexamples: Vec::new(),
            notes: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Count one instance, failing it with the counterexample built by
    /// `cex` unless `ok`.
    pub fn record(&mut self, ok: bool, cex: impl FnOnce() -> Counterexample) {
        self.instances += 1;
        if !ok {
            self.fail(cex());
        }
    }

    /// Count a failure without counting a new instance.
    pub fn fail(&mut self, cex: Counterexample) {
        self.failures += 1;
        if self.counterexamples.len() < KEPT_COUNTEREXAMPLES {
            self.counterexamples.push(cex);
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// `PROP <name> PASS|FAIL n=<count> cex=<count>`
    pub fn line(&self) -> String {
        format!(
            "PROP {} {} n={} cex={}",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.instances,
            self.failures
        )
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.line())?;
        for cex in &self.counterexamples {
            writeln!(f, "  input:    {}", cex.input)?;
            writeln!(f, "  expected: {}", cex.expected)?;
            writeln!(f, "  actual:   {}", cex.actual)?;
        }
        if self.failures > self.counterexamples.len() as u64 {
            writeln!(
                f,
                "  ... {} more",
                self.failures - self.counterexamples.len() as u64
            )?;
        }
        for note in &self.notes {
            writeln!(f, "  note: {note}")?;
        }
        writeln!(f, "  time: {:.2?}", self.elapsed)
    }
}
