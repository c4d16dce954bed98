//! Monte Carlo memory runs with phenomenological noise, and the noisy
//! round runner used by schedules.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{build_defect_graph, correction, decode, NoiseModel, Sector, SectorGraph, SyndromeHistory};
use crate::deform::engine::{labelled_generators, GenOutcome, Machine, StepReport};
use crate::deform::schedule::RoundRunner;
use crate::error::Result;
use crate::lattice::SurfaceCode;
use crate::pauli::{Letter, PauliOperator};

/// Error tracking on a fixed code: Pauli errors are kept as bit flags,
/// which is exact for Pauli noise on a stabilizer state.
pub struct MemoryExperiment {
    n: usize,
    active: Vec<usize>,
    sectors: [SectorGraph; 2],
    /// Logical operators each sector's residual must commute with:
    /// X residuals against logical Z supports, Z residuals against X.
    checks: [Vec<Vec<usize>>; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub distance: usize,
    pub p: f64,
    pub rounds: usize,
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub stderr: f64,
}

impl BenchRow {
    pub const HEADER: &'static str = "distance\tp\trounds\ttrials\tfailures\trate\tstderr";

    pub fn tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{:.6e}\t{:.6e}",
            self.distance, self.p, self.rounds, self.trials, self.failures, self.rate, self.stderr
        )
    }
}

impl MemoryExperiment {
    pub fn new(code: &SurfaceCode) -> Result<Self> {
        let basis = code.group().logical_basis()?;
        let active = code.layout().active.iter().map(|s| code.qubit(*s)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n: code.n(),
            active,
            sectors: [SectorGraph::new(code, Sector::X), SectorGraph::new(code, Sector::Z)],
            checks: [
                basis.zops.iter().map(PauliOperator::support).collect(),
                basis.xops.iter().map(PauliOperator::support).collect(),
            ],
        })
    }

    pub fn sector(&self, s: Sector) -> &SectorGraph {
        &self.sectors[s as usize]
    }

    /// Decodes `error` (flags per qubit) from `rounds` noisy readings and a
    /// final perfect one. Returns `true` on a logical failure.
    fn run_sector(&self, s: usize, error: &mut [bool], flips: &[Vec<bool>], meas: &[Vec<bool>]) -> bool {
        let g = &self.sectors[s];
        let mut history = SyndromeHistory::default();
        for (f, m) in flips.iter().zip(meas) {
            for (e, &b) in error.iter_mut().zip(f) {
                *e ^= b;
            }
            let mut syn = g.syndrome(error);
            for (x, &b) in syn.iter_mut().zip(m) {
                *x ^= b;
            }
            history.push(syn);
        }
        history.push(g.syndrome(error));
        let mg = build_defect_graph(g, &history.defects());
        let (_, qubits) = decode(g, &mg);
        for q in qubits {
            error[q] ^= true;
        }
        self.checks[s].iter().any(|sup| sup.iter().filter(|&&q| error[q]).count() % 2 == 1)
    }

    /// One trial of `rounds` noisy rounds; `true` on a logical failure in
    /// either sector.
    pub fn trial(&self, model: &NoiseModel, rounds: usize, rng: &mut impl Rng) -> bool {
        let mut failed = false;
        for (s, p) in [(0, model.p_flip_x), (1, model.p_flip_z)] {
            let mut flips = Vec::with_capacity(rounds);
            let mut meas = Vec::with_capacity(rounds);
            for _ in 0..rounds {
                let mut f = vec![false; self.n];
                for &q in &self.active {
                    f[q] = rng.gen::<f64>() < p;
                }
                flips.push(f);
                meas.push((0..self.sectors[s].len()).map(|_| rng.gen::<f64>() < model.p_meas).collect());
            }
            let mut error = vec![false; self.n];
            failed |= self.run_sector(s, &mut error, &flips, &meas);
        }
        failed
    }

    /// Decodes a given error with perfect measurements. `true` when the
    /// residual is a stabilizer.
    pub fn decodes(&self, error: &PauliOperator) -> bool {
        [(0, Letter::X), (1, Letter::Z)].into_iter().all(|(s, l)| {
            let mut e: Vec<bool> = (0..self.n)
                .map(|q| {
                    let x = error.letter(q);
                    x == l || x == Letter::Y
                })
                .collect();
            !self.run_sector(s, &mut e, &[], &[])
        })
    }

    /// Independent trials in parallel; trial `i` draws from stream `i` of
    /// a ChaCha generator seeded with `seed`.
    pub fn monte_carlo(&self, model: &NoiseModel, rounds: usize, trials: u64, seed: u64, distance: usize) -> BenchRow {
        let failures: u64 = (0..trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i);
                u64::from(self.trial(model, rounds, &mut rng))
            })
            .sum();
        let rate = failures as f64 / trials as f64;
        let stderr = (rate * (1.0 - rate) / trials as f64).sqrt();
        BenchRow { distance, p: model.p_flip_x, rounds, trials, failures, rate, stderr }
    }
}

/// Round runner for noisy schedules. Each `measure_stabilizers` step
/// applies fresh noise before every round, reads all generators through
/// the tableau with measurement flips, adds a perfect round, decodes and
/// applies the inferred correction. The accumulated correction is kept.
pub struct NoisyRounds {
    pub model: NoiseModel,
    pub rng: ChaCha8Rng,
    pub frame: Option<PauliOperator>,
    pub defects: usize,
}

impl NoisyRounds {
    pub fn new(model: NoiseModel, seed: u64) -> Self {
        Self { model, rng: ChaCha8Rng::seed_from_u64(seed), frame: None, defects: 0 }
    }
}

impl RoundRunner for NoisyRounds {
    fn rounds(&mut self, machine: &mut Machine, rounds: usize) -> Result<StepReport> {
        let code = machine.code().clone();
        let gens = labelled_generators(&code);
        let index: Vec<usize> = (0..gens.len()).collect();
        let graphs = [SectorGraph::new(&code, Sector::X), SectorGraph::new(&code, Sector::Z)];
        let mut histories = [SyndromeHistory::default(), SyndromeHistory::default()];
        let mut report = StepReport { k_before: code.k(), k_after: code.k(), ..Default::default() };
        for r in 0..=rounds {
            let noisy = r < rounds;
            if noisy {
                let e = super::sample_noise(&code, &self.model, &mut self.rng);
                machine.apply(&e)?;
            }
            let mut readings = vec![false; gens.len()];
            for &i in &index {
                let m = machine.measure(&gens[i].1)?;
                let flip = noisy && self.rng.gen::<f64>() < self.model.p_meas;
                readings[i] = (m.outcome < 0) ^ flip;
                report.measured.push(GenOutcome {
                    generator: gens[i].0,
                    outcome: if readings[i] { -1 } else { 1 },
                    deterministic: m.deterministic,
                });
            }
            for (g, h) in graphs.iter().zip(&mut histories) {
                h.push(g.generators.iter().map(|&i| readings[i]).collect());
            }
        }
        let n = code.n();
        let mut total = PauliOperator::identity(n);
        for (g, h) in graphs.iter().zip(&histories) {
            let defects = h.defects();
            self.defects += defects.len();
            let (_, qubits) = decode(g, &build_defect_graph(g, &defects));
            total.mul_assign_unchecked(&correction(n, g.sector, &qubits));
        }
        machine.apply(&total)?;
        let frame = self.frame.get_or_insert_with(|| PauliOperator::identity(n));
        if frame.n() == n {
            frame.mul_assign_unchecked(&total);
        }
        Ok(report)
    }
}
