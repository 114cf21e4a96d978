//! Named pass/fail checks with measured margins.

use serde::Serialize;

/// One named condition. `margin` is positive when the condition holds with room to spare.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub margin: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, margin: f64) -> Self {
        Check {
            name: name.into(),
            passed: margin >= 0.0,
            margin,
            detail: String::new(),
        }
    }

    /// Passes when `value <= tolerance`; the margin is `tolerance - value`.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        let mut c = Check::new(name, tolerance - value);
        c.passed = value <= tolerance;
        c
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// Ordered collection of checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CheckList {
    pub checks: Vec<Check>,
}

impl CheckList {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}
