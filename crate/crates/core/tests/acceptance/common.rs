use surface_deform::deform::{EngineConfig, Machine};
use surface_deform::{build_code, LatticeSpec, SurfaceCode};

pub enum Verdict {
    Pass(String),
    Fail(String),
    /// Unattainable as stated; `detail` says what does hold.
    ExpectedFail { reason: String, detail: String },
}

/// Collects named sub-checks; the first failure is kept.
#[derive(Default)]
pub struct Checks {
    passed: Vec<String>,
    failed: Vec<String>,
}

impl Checks {
    pub fn check(&mut self, name: &str, ok: bool) -> bool {
        if ok {
            self.passed.push(name.to_string());
        } else {
            self.failed.push(name.to_string());
        }
        ok
    }

    pub fn ok(&self) -> bool {
        self.failed.is_empty()
    }

    pub fn verdict(self) -> Verdict {
        if self.failed.is_empty() {
            Verdict::Pass(self.passed.join("; "))
        } else {
            Verdict::Fail(format!("failed: {}", self.failed.join("; ")))
        }
    }

    pub fn summary(&self) -> String {
        self.passed.join("; ")
    }

    pub fn failures(&self) -> String {
        self.failed.join("; ")
    }
}

pub fn code(spec: &LatticeSpec) -> SurfaceCode {
    build_code(spec, (spec.rows * spec.cols) as usize).unwrap()
}

pub fn recording(spec: &LatticeSpec, seed: u64, correct: bool) -> Machine {
    Machine::seeded_with(code(spec), EngineConfig { record: true, correct }, seed).unwrap()
}
