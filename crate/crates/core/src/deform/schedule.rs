//! Ordered deformation steps, their execution, and the transcript of what
//! each step measured.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::engine::{EngineConfig, Machine, StepReport};
use super::frame::FrameMatrices;
use super::macros::{Disconnected, InitState};
use super::ops::{BorderRef, Dir};
use crate::error::{Error, Result};
use crate::lattice::{Color, HoleSpec, Site, StringPath, SurfaceCode};
use crate::pauli::Letter;
use crate::tableau::OutcomeSource;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    X,
    Z,
}

impl Basis {
    pub fn letter(self) -> Letter {
        match self {
            Basis::X => Letter::X,
            Basis::Z => Letter::Z,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeformationStep {
    RemoveSite {
        site: Site,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        color: Option<Color>,
    },
    AddSite {
        site: Site,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        color: Option<Color>,
    },
    CutAlongString {
        path: StringPath,
    },
    PasteJunction {
        junction: Vec<Site>,
        color: Color,
    },
    Puncture {
        hole: HoleSpec,
    },
    ContractHole {
        hole: usize,
    },
    /// Turns a border to `color`, contracting the runs of the other color.
    ContractBorder {
        border: BorderRef,
        color: Color,
    },
    MoveHole {
        hole: usize,
        path: Vec<Dir>,
    },
    /// Measures a logical qubit, named by frame id or by the hole qubit
    /// that holds it.
    ShrinkMeasure {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        qubit: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hole: Option<usize>,
        basis: Basis,
    },
    MacroInitQubit {
        hole: HoleSpec,
        state: InitState,
    },
    MacroCnot {
        source: usize,
        target: usize,
    },
    MacroDisconnect {
        hole: usize,
    },
    MacroReconnect {
        hole: usize,
    },
    MeasureStabilizers {
        rounds: usize,
    },
}

impl DeformationStep {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::RemoveSite { .. } => "remove_site",
            Self::AddSite { .. } => "add_site",
            Self::CutAlongString { .. } => "cut_along_string",
            Self::PasteJunction { .. } => "paste_junction",
            Self::Puncture { .. } => "puncture",
            Self::ContractHole { .. } => "contract_hole",
            Self::ContractBorder { .. } => "contract_border",
            Self::MoveHole { .. } => "move_hole",
            Self::ShrinkMeasure { .. } => "shrink_measure",
            Self::MacroInitQubit { .. } => "macro_init_qubit",
            Self::MacroCnot { .. } => "macro_cnot",
            Self::MacroDisconnect { .. } => "macro_disconnect",
            Self::MacroReconnect { .. } => "macro_reconnect",
            Self::MeasureStabilizers { .. } => "measure_stabilizers",
        }
    }

    /// All step kinds accepted in documents.
    pub const KINDS: [&'static str; 14] = [
        "remove_site",
        "add_site",
        "cut_along_string",
        "paste_junction",
        "puncture",
        "contract_hole",
        "contract_border",
        "move_hole",
        "shrink_measure",
        "macro_init_qubit",
        "macro_cnot",
        "macro_disconnect",
        "macro_reconnect",
        "measure_stabilizers",
    ];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalRecord {
    pub qubit: usize,
    pub outcome: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub index: usize,
    pub kind: String,
    /// Number of elementary deformations the step expanded to.
    pub elementary_steps: usize,
    pub k_before: usize,
    pub k_after: usize,
    /// Generator readings, `+1`/`-1`, in measurement order.
    pub generator_outcomes: Vec<i8>,
    /// Logical operators that became stabilizers.
    pub measured: Vec<LogicalRecord>,
    pub initialized: Vec<usize>,
    /// Outcome of a shrink measurement.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub readout: Option<i8>,
    /// Outcomes of the auxiliary qubits measured by a CNOT.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux_outcomes: Vec<i8>,
    pub corrected: bool,
    pub frame_ids: Vec<usize>,
    pub matrices: FrameMatrices,
    pub code: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub records: Vec<StepRecord>,
    /// Data qubit held by each initialized hole.
    pub hole_qubits: BTreeMap<usize, usize>,
    /// Every random measurement bit drawn, in order (`true` is `-1`).
    pub random_bits: Vec<bool>,
}

impl Transcript {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }
}

/// Stable identifier of a code: counts plus an FNV-1a hash of the layout.
pub fn snapshot_id(code: &SurfaceCode) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |v: i64| {
        for b in v.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    for s in &code.layout().active {
        eat(i64::from(s.r));
        eat(i64::from(s.c));
    }
    eat(-1);
    for p in &code.layout().present {
        eat(i64::from(p.r));
        eat(i64::from(p.c));
    }
    eat(-2);
    for s in code.x_fixed() {
        eat(i64::from(s.r));
        eat(i64::from(s.c));
    }
    format!("k{}-a{}-{:016x}", code.k(), code.layout().active.len(), h)
}

/// Outcome source that remembers every bit it hands out.
pub struct Recording<S> {
    inner: S,
    bits: Arc<Mutex<Vec<bool>>>,
}

impl<S: OutcomeSource> Recording<S> {
    pub fn new(inner: S) -> (Self, Arc<Mutex<Vec<bool>>>) {
        let bits = Arc::new(Mutex::new(Vec::new()));
        (Self { inner, bits: bits.clone() }, bits)
    }
}

impl<S: OutcomeSource> OutcomeSource for Recording<S> {
    fn random_bit(&mut self) -> bool {
        let b = self.inner.random_bit();
        self.bits.lock().expect("bit log").push(b);
        b
    }
}

/// Hook run for `measure_stabilizers` steps; the noiseless default reads
/// every generator once per round.
pub trait RoundRunner {
    fn rounds(&mut self, machine: &mut Machine, rounds: usize) -> Result<StepReport>;
}

pub struct Noiseless;

impl RoundRunner for Noiseless {
    fn rounds(&mut self, machine: &mut Machine, rounds: usize) -> Result<StepReport> {
        let gens = super::engine::labelled_generators(machine.code());
        let k = machine.code().k();
        let mut report = StepReport { k_before: k, k_after: k, ..Default::default() };
        for _ in 0..rounds {
            for (label, g) in &gens {
                let m = machine.measure(g)?;
                report.measured.push(super::engine::GenOutcome {
                    generator: *label,
                    outcome: m.outcome,
                    deterministic: m.deterministic,
                });
            }
        }
        Ok(report)
    }
}

/// Executes steps on a machine, tracking hole qubits and disconnected
/// patches between steps.
pub struct Runner<'r> {
    pub machine: Machine,
    hole_qubits: BTreeMap<usize, usize>,
    disconnected: BTreeMap<usize, Disconnected>,
    bits: Arc<Mutex<Vec<bool>>>,
    rounds: Box<dyn RoundRunner + 'r>,
}

impl<'r> Runner<'r> {
    /// Machine on `code` with randomness from a seeded ChaCha stream.
    pub fn seeded(code: SurfaceCode, config: EngineConfig, seed: u64) -> Result<Self> {
        use rand::SeedableRng;
        let (source, bits) = Recording::new(rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        Self::with_source(code, config, Box::new(source), bits)
    }

    /// Machine replaying `bits` as its random outcomes.
    pub fn scripted(code: SurfaceCode, config: EngineConfig, bits: Vec<bool>) -> Result<Self> {
        let (source, log) = Recording::new(crate::tableau::ScriptedOutcomes::new(bits));
        Self::with_source(code, config, Box::new(source), log)
    }

    fn with_source(
        code: SurfaceCode,
        config: EngineConfig,
        source: Box<dyn OutcomeSource + Send>,
        bits: Arc<Mutex<Vec<bool>>>,
    ) -> Result<Self> {
        let machine = Machine::new(code, config, source)?;
        Ok(Self { machine, hole_qubits: BTreeMap::new(), disconnected: BTreeMap::new(), bits, rounds: Box::new(Noiseless) })
    }

    pub fn set_round_runner(&mut self, rounds: Box<dyn RoundRunner + 'r>) {
        self.rounds = rounds;
    }

    pub fn hole_qubits(&self) -> &BTreeMap<usize, usize> {
        &self.hole_qubits
    }

    fn qubit(&self, qubit: Option<usize>, hole: Option<usize>) -> Result<usize> {
        match (qubit, hole) {
            (Some(q), None) => Ok(q),
            (None, Some(h)) => self.hole_qubits.get(&h).copied().ok_or(Error::NoSuchHole(h)),
            _ => Err(Error::Document("shrink_measure needs exactly one of qubit, hole".into())),
        }
    }

    fn execute(&mut self, step: &DeformationStep) -> Result<(Vec<StepReport>, Option<i8>, Vec<i8>, bool)> {
        let m = &mut self.machine;
        let one = |r: StepReport| (vec![r], None, Vec::new(), false);
        Ok(match step {
            DeformationStep::RemoveSite { site, color } => one(m.remove_site(*site, *color)?),
            DeformationStep::AddSite { site, color } => one(m.add_site(*site, *color)?),
            DeformationStep::CutAlongString { path } => one(m.cut(path)?),
            DeformationStep::PasteJunction { junction, color } => one(m.paste(junction, *color)?),
            DeformationStep::Puncture { hole } => one(m.puncture_hole(*hole)?),
            DeformationStep::ContractHole { hole } => one(m.contract_hole(*hole)?),
            DeformationStep::ContractBorder { border, color } => one(m.recolor_border(*border, *color)?),
            DeformationStep::MoveHole { hole, path } => (m.move_hole(*hole, path)?, None, Vec::new(), false),
            DeformationStep::ShrinkMeasure { qubit, hole, basis } => {
                let q = self.qubit(*qubit, *hole)?;
                let (outcome, reports) = self.machine.shrink_measure(q, basis.letter())?;
                (reports, Some(outcome), Vec::new(), false)
            }
            DeformationStep::MacroInitQubit { hole, state } => {
                let (q, reports) = m.macro_init_qubit(*hole, *state)?;
                self.hole_qubits.insert(hole.id, q);
                (reports, None, Vec::new(), false)
            }
            DeformationStep::MacroCnot { source, target } => {
                let r = m.macro_cnot(*source, *target)?;
                let reports = r.split.into_iter().chain(r.braid).chain(r.merge).collect();
                (reports, None, r.aux_outcomes, r.byproduct_applied)
            }
            DeformationStep::MacroDisconnect { hole } => {
                let d = m.macro_disconnect(*hole)?;
                let reports = vec![d.ring_cut.clone(), d.stem_cut.clone()];
                self.disconnected.insert(*hole, d);
                (reports, None, Vec::new(), false)
            }
            DeformationStep::MacroReconnect { hole } => {
                let d = self.disconnected.remove(hole).ok_or(Error::NoSuchHole(*hole))?;
                one(m.macro_reconnect(&d)?)
            }
            DeformationStep::MeasureStabilizers { rounds } => one(self.rounds.rounds(m, *rounds)?),
        })
    }

    /// Runs `steps` in order. The first failing step aborts the run with
    /// its index.
    pub fn apply_schedule(&mut self, steps: &[DeformationStep]) -> Result<Transcript> {
        let mut records = Vec::with_capacity(steps.len());
        for (index, step) in steps.iter().enumerate() {
            let k_before = self.machine.code().k();
            let (reports, readout, aux_outcomes, corrected) =
                self.execute(step).map_err(|e| Error::Step { index, cause: Box::new(e) })?;
            let frame = self.machine.frame();
            records.push(StepRecord {
                index,
                kind: step.kind().to_string(),
                elementary_steps: reports.len(),
                k_before,
                k_after: self.machine.code().k(),
                generator_outcomes: reports.iter().flat_map(|r| r.measured.iter().map(|g| g.outcome)).collect(),
                measured: reports
                    .iter()
                    .flat_map(|r| r.logical.iter().map(|l| LogicalRecord { qubit: l.qubit, outcome: l.outcome }))
                    .collect(),
                initialized: reports.iter().flat_map(|r| r.initialized.iter().copied()).collect(),
                readout,
                aux_outcomes,
                corrected: corrected || reports.iter().any(|r| r.correction.is_some()),
                frame_ids: frame.ids(),
                matrices: frame.matrices(),
                code: snapshot_id(self.machine.code()),
            });
        }
        Ok(Transcript {
            records,
            hole_qubits: self.hole_qubits.clone(),
            random_bits: self.bits.lock().expect("bit log").clone(),
        })
    }
}

impl<T: RoundRunner + ?Sized> RoundRunner for &mut T {
    fn rounds(&mut self, machine: &mut Machine, rounds: usize) -> Result<StepReport> {
        (**self).rounds(machine, rounds)
    }
}
