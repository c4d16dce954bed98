//! Schedule documents (JSON, versioned) and running them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::decoder::{NoiseModel, NoisyRounds};
use crate::deform::engine::EngineConfig;
use crate::deform::frame::FrameMatrices;
use crate::deform::macros::InitState;
use crate::deform::schedule::{DeformationStep, Runner, Transcript};
use crate::error::{Error, Result};
use crate::lattice::{build_code, LatticeSpec, SurfaceCode};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderOptions {
    /// With noise, a `measure_stabilizers` epoch of this many rounds runs
    /// after every step.
    #[serde(default)]
    pub epoch_rounds: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDocument {
    pub version: u32,
    pub lattice: LatticeSpec,
    /// Hardware register size; defaults to one qubit per grid site.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hardware: Option<usize>,
    /// Starting states of the lattice's own logical qubits, by frame id.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub initial: BTreeMap<usize, InitState>,
    #[serde(default)]
    pub steps: Vec<DeformationStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseModel>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub decoder: DecoderOptions,
    #[serde(default)]
    pub seed: u64,
}

fn is_default(d: &DecoderOptions) -> bool {
    *d == DecoderOptions::default()
}

/// Parses and validates a document. Errors carry the JSON path of the
/// offending field and its line and column.
pub fn parse_schedule(text: &str) -> Result<ScheduleDocument> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ScheduleDocument = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Document(format!("line {} column {}: field `{path}`: {inner}", inner.line(), inner.column()))
    })?;
    validate(&doc)?;
    Ok(doc)
}

/// Pretty JSON with a trailing newline; `parse_schedule` reads it back to
/// an equal document.
pub fn emit_schedule(doc: &ScheduleDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
    s.push('\n');
    s
}

/// Version check and declared-before-use check for holes.
pub fn validate(doc: &ScheduleDocument) -> Result<()> {
    if doc.version != SCHEMA_VERSION {
        return Err(Error::Document(format!("schema version {} is not {SCHEMA_VERSION}", doc.version)));
    }
    if let Some(n) = &doc.noise {
        n.validate()?;
    }
    let mut holes: BTreeSet<usize> = doc.lattice.holes.iter().map(|h| h.id).collect();
    let mut qubits: BTreeSet<usize> = BTreeSet::new();
    let mut cut_off: BTreeSet<usize> = BTreeSet::new();
    let undeclared = |i: usize, what: &str, id: usize| Err(Error::Document(format!("steps[{i}]: undeclared {what} {id}")));
    for (i, step) in doc.steps.iter().enumerate() {
        match step {
            DeformationStep::Puncture { hole } => {
                holes.insert(hole.id);
            }
            DeformationStep::MacroInitQubit { hole, .. } => {
                holes.insert(hole.id);
                qubits.insert(hole.id);
            }
            DeformationStep::ContractHole { hole } => {
                if !holes.remove(hole) {
                    return undeclared(i, "hole", *hole);
                }
                qubits.remove(hole);
            }
            DeformationStep::MoveHole { hole, .. } if !holes.contains(hole) => return undeclared(i, "hole", *hole),
            DeformationStep::MacroCnot { source, target } => {
                for h in [source, target] {
                    if !qubits.contains(h) {
                        return undeclared(i, "hole qubit", *h);
                    }
                }
            }
            DeformationStep::MacroDisconnect { hole } => {
                if !qubits.contains(hole) {
                    return undeclared(i, "hole qubit", *hole);
                }
                cut_off.insert(*hole);
            }
            DeformationStep::MacroReconnect { hole } => {
                if !cut_off.remove(hole) {
                    return undeclared(i, "disconnected hole", *hole);
                }
            }
            DeformationStep::ShrinkMeasure { hole: Some(h), .. } if !qubits.contains(h) => {
                return undeclared(i, "hole qubit", *h);
            }
            _ => {}
        }
    }
    Ok(())
}

impl ScheduleDocument {
    pub fn build(&self) -> Result<SurfaceCode> {
        let n = self.hardware.unwrap_or((self.lattice.rows * self.lattice.cols) as usize);
        build_code(&self.lattice, n)
    }
}

/// Knobs that override the document at run time.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub noise: Option<NoiseModel>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub k_history: Vec<usize>,
    pub final_matrices: FrameMatrices,
    /// `(step index, qubit, outcome)` for every logical measurement.
    pub logical_outcomes: Vec<(usize, usize, i8)>,
    /// Shrink-measurement readouts by step index.
    pub readouts: Vec<(usize, i8)>,
    pub defects: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub transcript: Transcript,
    pub summary: RunSummary,
}

/// Executes a document. With noise and a nonzero epoch, every step is
/// followed by noisy, decoded stabilizer rounds.
pub fn run(doc: &ScheduleDocument, overrides: Overrides) -> Result<RunOutput> {
    let code = doc.build()?;
    let seed = overrides.seed.unwrap_or(doc.seed);
    let noise = overrides.noise.or(doc.noise);
    let mut steps = Vec::new();
    for s in &doc.steps {
        steps.push(s.clone());
        if noise.is_some() && doc.decoder.epoch_rounds > 0 {
            steps.push(DeformationStep::MeasureStabilizers { rounds: doc.decoder.epoch_rounds });
        }
    }
    let mut noisy = noise.map(|m| NoisyRounds::new(m, seed.wrapping_add(0x9e37_79b9_7f4a_7c15)));
    let (transcript, final_matrices) = {
        let mut runner = Runner::seeded(code, EngineConfig::default(), seed)?;
        for (&id, state) in &doc.initial {
            runner.machine.prepare_logical(id, state.label())?;
        }
        if let Some(n) = noisy.as_mut() {
            runner.set_round_runner(Box::new(n));
        }
        let t = runner.apply_schedule(&steps)?;
        (t, runner.machine.frame().matrices())
    };
    let mut k_history = vec![transcript.records.first().map_or(final_matrices.rows.len(), |r| r.k_before)];
    k_history.extend(transcript.records.iter().map(|r| r.k_after));
    let summary = RunSummary {
        k_history,
        final_matrices,
        logical_outcomes: transcript
            .records
            .iter()
            .flat_map(|r| r.measured.iter().map(move |l| (r.index, l.qubit, l.outcome)))
            .collect(),
        readouts: transcript.records.iter().filter_map(|r| r.readout.map(|o| (r.index, o))).collect(),
        defects: noisy.map_or(0, |n| n.defects),
    };
    Ok(RunOutput { transcript, summary })
}

/// Code reached after the first `steps` steps, run noiselessly.
pub fn code_after(doc: &ScheduleDocument, steps: usize, seed: Option<u64>) -> Result<SurfaceCode> {
    let mut runner = Runner::seeded(doc.build()?, EngineConfig::default(), seed.unwrap_or(doc.seed))?;
    for (&id, state) in &doc.initial {
        runner.machine.prepare_logical(id, state.label())?;
    }
    let upto = steps.min(doc.steps.len());
    runner.apply_schedule(&doc.steps[..upto])?;
    Ok(runner.machine.code().clone())
}
