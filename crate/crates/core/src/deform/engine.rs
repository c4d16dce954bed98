//! Deformation by measurement: move a (code, state, frame) triple to a new
//! code by measuring the generators that changed.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::frame::{FrameQubit, LogicalFrame};
use crate::error::{Error, Result};
use crate::gf2::{left_nullspace, solve_combination, BitVec, RowBasis};
use crate::lattice::{Pos, SurfaceCode};
use crate::pauli::{Letter, PauliOperator};
use crate::tableau::{OutcomeSource, TableauState};

/// Eigenvalue of the Z representative recorded for a qubit initialized in
/// `|1⟩`: the initialized dark string has eigenvalue `+1`, and the frame's
/// Z representative is this sign times that string.
pub const ONE_Z_SIGN: i8 = -1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Apply Pauli corrections after every step so that all generators
    /// read `+1`. Off in noisy runs, where the decoder's frame takes over.
    pub correct: bool,
    /// Keep a log of every measurement and Pauli application.
    pub record: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self { correct: true, record: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LoggedOp {
    Measure { op: PauliOperator, outcome: i8 },
    Apply { op: PauliOperator },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenLabel {
    Plaquette(Pos),
    Spectator(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenOutcome {
    pub generator: GenLabel,
    pub outcome: i8,
    pub deterministic: bool,
}

/// A logical operator that became a stabilizer and was thereby measured.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalOutcome {
    pub qubit: usize,
    pub operator: PauliOperator,
    pub outcome: i8,
    /// New generators whose product equals the measured operator up to old
    /// stabilizers.
    pub region: Vec<GenLabel>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub k_before: usize,
    pub k_after: usize,
    pub measured: Vec<GenOutcome>,
    pub logical: Vec<LogicalOutcome>,
    pub initialized: Vec<usize>,
    /// Eigenvalue of each initialized operator at creation.
    pub init_signs: Vec<i8>,
    pub correction: Option<PauliOperator>,
}

/// The simulated device: current code, hardware state and logical frame.
pub struct Machine {
    code: SurfaceCode,
    state: TableauState,
    frame: LogicalFrame,
    config: EngineConfig,
    source: Box<dyn OutcomeSource + Send>,
    log: Vec<LoggedOp>,
}

pub(crate) fn hermitize(mut p: PauliOperator) -> PauliOperator {
    if p.phase() % 2 == 1 {
        let ph = (p.phase() + 1) % 4;
        p = p.with_phase(ph);
    }
    p
}

/// A logical operator scheduled for measurement within one step.
struct Eliminated {
    idx: Vec<usize>,
    logical: PauliOperator,
    partner: PauliOperator,
    sigma: i8,
    id: usize,
    deps: Vec<usize>,
}

fn product<'a>(n: usize, ops: impl IntoIterator<Item = &'a PauliOperator>) -> PauliOperator {
    let mut acc = PauliOperator::identity(n);
    for op in ops {
        acc.mul_assign_unchecked(op);
    }
    acc
}

fn comm_row(op: &PauliOperator, against: &[PauliOperator]) -> BitVec {
    BitVec::from_bools(&against.iter().map(|a| op.anticommutes_unchecked(a)).collect::<Vec<_>>())
}

fn pure_letter(p: &PauliOperator) -> Option<Letter> {
    if p.is_x_type() {
        Some(Letter::X)
    } else if p.is_z_type() {
        Some(Letter::Z)
    } else {
        None
    }
}

/// Generators of `code` with their labels, in generator order.
pub fn labelled_generators(code: &SurfaceCode) -> Vec<(GenLabel, PauliOperator)> {
    let labels = code
        .plaquettes()
        .iter()
        .map(|&p| GenLabel::Plaquette(p))
        .chain(code.spectators().iter().map(|&q| GenLabel::Spectator(q)));
    labels.zip(code.group().generators().iter().cloned()).collect()
}

impl Machine {
    /// Encodes the code's `+1` eigenspace starting from `|0…0⟩`. Every
    /// logical qubit starts with its Z representative at `+1`.
    pub fn new(code: SurfaceCode, config: EngineConfig, source: Box<dyn OutcomeSource + Send>) -> Result<Self> {
        let n = code.n();
        let frame = LogicalFrame::from_code(&code)?;
        let mut m = Self { state: TableauState::zero(n), code, frame, config, source, log: Vec::new() };
        let gens: Vec<PauliOperator> = m.code.group().generators().to_vec();
        for g in &gens {
            m.measure(g)?;
        }
        let negatives: Vec<bool> = gens.iter().map(|g| m.state.expectation(g).ok().flatten() == Some(-1)).collect();
        if negatives.iter().any(|&b| b) {
            let mut constraints = gens.clone();
            constraints.extend(m.frame.qubits().iter().map(|q| q.z.clone()));
            let mut target = negatives;
            target.resize(constraints.len(), false);
            let c = m.solve_correction(&constraints, &BitVec::from_bools(&target))?;
            m.apply(&c)?;
        }
        m.clean_frame()?;
        m.frame.rebase();
        Ok(m)
    }

    /// Seeded machine with default configuration.
    pub fn seeded(code: SurfaceCode, seed: u64) -> Result<Self> {
        Self::seeded_with(code, EngineConfig::default(), seed)
    }

    pub fn seeded_with(code: SurfaceCode, config: EngineConfig, seed: u64) -> Result<Self> {
        use rand::SeedableRng;
        Self::new(code, config, Box::new(rand_chacha::ChaCha8Rng::seed_from_u64(seed)))
    }

    pub fn code(&self) -> &SurfaceCode {
        &self.code
    }

    pub fn state(&self) -> &TableauState {
        &self.state
    }

    pub fn frame(&self) -> &LogicalFrame {
        &self.frame
    }

    pub fn frame_mut(&mut self) -> &mut LogicalFrame {
        &mut self.frame
    }

    pub fn config(&self) -> EngineConfig {
        self.config
    }

    pub fn set_config(&mut self, config: EngineConfig) {
        self.config = config;
    }

    pub fn log(&self) -> &[LoggedOp] {
        &self.log
    }

    pub fn take_log(&mut self) -> Vec<LoggedOp> {
        std::mem::take(&mut self.log)
    }

    pub fn measure(&mut self, p: &PauliOperator) -> Result<crate::tableau::Measurement> {
        let m = self.state.measure_pauli(p, self.source.as_mut())?;
        if self.config.record {
            self.log.push(LoggedOp::Measure { op: p.clone(), outcome: m.outcome });
        }
        Ok(m)
    }

    pub fn apply(&mut self, p: &PauliOperator) -> Result<()> {
        self.state.apply_pauli(p)?;
        if self.config.record {
            self.log.push(LoggedOp::Apply { op: p.clone() });
        }
        Ok(())
    }

    /// Value of a frame representative, `None` when not determined.
    pub fn logical_value(&self, id: usize, letter: Letter) -> Result<Option<i8>> {
        let q = self.frame.get(id)?;
        let rep = if letter == Letter::X { &q.x } else { &q.z };
        self.state.expectation(rep)
    }

    /// Prepares logical qubit `id` as `|0⟩`, `|1⟩`, `|+⟩` or `|-⟩`.
    pub fn prepare_logical(&mut self, id: usize, label: &str) -> Result<()> {
        let q = self.frame.get(id)?.clone();
        let (measured, flip, want) = match label {
            "zero" => (&q.z, &q.x, 1),
            "one" => (&q.z, &q.x, -1),
            "plus" => (&q.x, &q.z, 1),
            "minus" => (&q.x, &q.z, -1),
            other => return Err(Error::Document(format!("unknown logical state {other:?}"))),
        };
        let m = self.measure(measured)?;
        if m.outcome != want {
            self.apply(flip)?;
        }
        Ok(())
    }

    /// Multiplies spectator generators into frame representatives so that
    /// no representative acts on a qubit outside the software lattice.
    fn clean_frame(&mut self) -> Result<()> {
        let n = self.code.n();
        let spectators: Vec<usize> = self.code.spectators().to_vec();
        let x_fixed = self.code.x_fixed().clone();
        let hw = self.code.hardware();
        for &q in &spectators {
            let letter = if hw.site(q).is_some_and(|s| x_fixed.contains(&s)) { Letter::X } else { Letter::Z };
            let f = PauliOperator::single(n, q, letter);
            let sign = self.state.expectation(&f)?.ok_or(Error::InconsistentSigns)?;
            strip(&mut self.frame, q, &f, sign);
        }
        Ok(())
    }

    fn solve_correction(&self, constraints: &[PauliOperator], target: &BitVec) -> Result<PauliOperator> {
        let n = self.code.n();
        let active: Vec<usize> = self.code.layout().active.iter().map(|&s| self.code.hardware().index(s).expect("active")).collect();
        let mut rows = Vec::with_capacity(2 * active.len());
        let mut ops = Vec::with_capacity(2 * active.len());
        for &letter in &[Letter::Z, Letter::X] {
            for &q in &active {
                let bits: Vec<bool> = constraints
                    .iter()
                    .map(|c| if letter == Letter::Z { c.x_bits().get(q) } else { c.z_bits().get(q) })
                    .collect();
                rows.push(BitVec::from_bools(&bits));
                ops.push(PauliOperator::single(n, q, letter));
            }
        }
        let combo = solve_combination(constraints.len(), &rows, target).ok_or(Error::InconsistentSigns)?;
        Ok(hermitize(product(n, combo.ones().map(|i| &ops[i]))))
    }

    /// Makes the logical `g` a representative of one of the `candidates`
    /// by a symplectic change of frame basis. Every other representative
    /// keeps its commutation relations; those anticommuting with the old
    /// partner pick up `g`, those anticommuting with `g` pick up the partner.
    /// Returns the chosen qubit, or `None` when `g` is a stabilizer or has no
    /// component on any candidate.
    pub fn fix_gauge(&mut self, g: &PauliOperator, candidates: &[usize]) -> Result<Option<usize>> {
        let v = self.coords(g);
        let pivot = (0..self.frame.k())
            .filter(|&i| v.get(2 * i) || v.get(2 * i + 1))
            .filter(|&i| candidates.contains(&self.frame.qubits()[i].id))
            .max_by_key(|&i| self.frame.qubits()[i].id);
        let Some(pivot) = pivot else { return Ok(None) };
        let g = hermitize(g.clone());
        let pq = self.frame.qubits()[pivot].clone();
        let as_x = v.get(2 * pivot);
        let partner = if as_x { pq.z.clone() } else { pq.x.clone() };
        for (i, q) in self.frame.qubits_mut().iter_mut().enumerate() {
            if i == pivot {
                if as_x {
                    q.x = g.clone();
                } else {
                    q.z = g.clone();
                }
                continue;
            }
            for rep in [&mut q.x, &mut q.z] {
                let fg = rep.anticommutes_unchecked(&g);
                let fp = rep.anticommutes_unchecked(&partner);
                if fg {
                    rep.mul_assign_unchecked(&partner);
                }
                if fp {
                    rep.mul_assign_unchecked(&g);
                }
                *rep = hermitize(rep.clone());
            }
        }
        Ok(Some(pq.id))
    }

    /// Logical coordinates of a normalizer element: bit `2i` is its
    /// X̄ᵢ component, bit `2i+1` its Z̄ᵢ component.
    fn coords(&self, op: &PauliOperator) -> BitVec {
        let k = self.frame.k();
        let mut v = BitVec::zeros(2 * k);
        for (i, q) in self.frame.qubits().iter().enumerate() {
            v.set(2 * i, op.anticommutes_unchecked(&q.z));
            v.set(2 * i + 1, op.anticommutes_unchecked(&q.x));
        }
        v
    }
}

fn strip(frame: &mut LogicalFrame, q: usize, f: &PauliOperator, sign: i8) {
    let signed = if sign < 0 { f.clone().negated() } else { f.clone() };
    for fq in frame.qubits_mut() {
        for rep in [&mut fq.x, &mut fq.z] {
            if rep.letter(q) != Letter::I {
                rep.mul_assign_unchecked(&signed);
            }
        }
    }
}

impl Machine {
    /// Moves to `target` by measuring every generator that changed, then
    /// resetting newly idle qubits. Logical operators that become
    /// stabilizers are reported as measured; stabilizer elements that
    /// become logical operators start new frame qubits.
    pub fn deform_to(&mut self, target: SurfaceCode) -> Result<StepReport> {
        let n = self.code.n();
        if target.n() != n {
            return Err(Error::LengthMismatch(target.n(), n));
        }
        let old_set: BTreeSet<BitVec> = self.code.group().generators().iter().map(|g| g.symplectic()).collect();
        let new_set: BTreeSet<BitVec> = target.group().generators().iter().map(|g| g.symplectic()).collect();
        let added: Vec<(GenLabel, PauliOperator)> =
            labelled_generators(&target).into_iter().filter(|(_, g)| !old_set.contains(&g.symplectic())).collect();
        let removed: Vec<PauliOperator> =
            self.code.group().generators().iter().filter(|g| !new_set.contains(&g.symplectic())).cloned().collect();
        let added_ops: Vec<PauliOperator> = added.iter().map(|(_, g)| g.clone()).collect();
        let mut report = StepReport { k_before: self.code.k(), k_after: target.k(), ..Default::default() };

        // Logical operators that the new generators measure.
        let rows: Vec<BitVec> = added_ops.iter().map(|a| comm_row(a, &removed)).collect();
        let mut measured: Vec<(Vec<usize>, PauliOperator)> = Vec::new();
        let mut coord_basis = RowBasis::new(2 * self.frame.k());
        for combo in left_nullspace(removed.len(), &rows) {
            let idx: Vec<usize> = combo.ones().collect();
            let m = product(n, idx.iter().map(|&i| &added_ops[i]));
            let v = self.coords(&m);
            if !v.is_zero() && coord_basis.insert(v).is_ok() {
                measured.push((idx, m));
            }
        }
        let mut pending: Vec<Eliminated> = Vec::new();
        for (idx, m) in measured {
            let e = self.eliminate(idx, m, &pending)?;
            pending.push(e);
        }

        // Reroute the surviving representatives off the changed generators.
        for i in 0..self.frame.k() {
            for which in 0..2 {
                let rep = {
                    let q = &self.frame.qubits()[i];
                    if which == 0 { q.x.clone() } else { q.z.clone() }
                };
                let rerouted = self.reroute(&rep, &removed, &added_ops)?;
                let q = &mut self.frame.qubits_mut()[i];
                if which == 0 {
                    q.x = rerouted;
                } else {
                    q.z = rerouted;
                }
            }
        }

        // Stabilizer elements that become logical operators.
        let survivors = self.frame.k();
        let fresh = (target.k() + pending.len()).checked_sub(self.code.k()).ok_or(Error::TopologyChange {
            before: self.code.k(),
            after: target.k(),
        })?;
        if fresh > 0 {
            self.initialize(&target, &removed, &added_ops, fresh, &mut report)?;
        }
        if self.frame.k() != target.k() || survivors + fresh != target.k() {
            return Err(Error::TopologyChange { before: self.code.k(), after: target.k() });
        }

        // Measure the new generators and reset idle qubits.
        let mut outcomes = Vec::with_capacity(added.len());
        for (label, g) in &added {
            let m = self.measure(g)?;
            outcomes.push(m.outcome);
            report.measured.push(GenOutcome { generator: *label, outcome: m.outcome, deterministic: m.deterministic });
            if let GenLabel::Spectator(q) = *label {
                strip(&mut self.frame, q, g, m.outcome);
                if m.outcome < 0 {
                    let flip_letter = if g.is_z_type() { Letter::X } else { Letter::Z };
                    self.apply(&PauliOperator::single(n, q, flip_letter))?;
                }
            }
        }
        for e in pending {
            let raw: i8 = e.idx.iter().map(|&i| outcomes[i]).product();
            let earlier: i8 = e.deps.iter().map(|&j| report.logical[j].outcome).product();
            report.logical.push(LogicalOutcome {
                qubit: e.id,
                operator: e.logical,
                outcome: e.sigma * raw * earlier,
                region: e.idx.iter().map(|&i| added[i].0).collect(),
            });
        }
        self.code = target;
        self.clean_frame()?;

        if self.config.correct {
            let gens: Vec<PauliOperator> = self.code.group().generators().to_vec();
            let mut target_bits = Vec::with_capacity(gens.len());
            for g in &gens {
                target_bits.push(self.state.expectation(g)?.ok_or(Error::InconsistentSigns)? < 0);
            }
            if target_bits.iter().any(|&b| b) {
                let mut constraints = gens;
                for q in self.frame.qubits() {
                    constraints.push(q.x.clone());
                    constraints.push(q.z.clone());
                }
                target_bits.resize(constraints.len(), false);
                let c = self.solve_correction(&constraints, &BitVec::from_bools(&target_bits))?;
                self.apply(&c)?;
                report.correction = Some(c);
            }
        }
        Ok(report)
    }

    /// Changes the frame basis so that the logical class of `m` is carried
    /// by a single qubit, then removes that qubit. The sign relating the
    /// frame operator to the generator product may involve logicals
    /// eliminated earlier in the same step; those are listed in `deps`.
    fn eliminate(&mut self, idx: Vec<usize>, m: PauliOperator, earlier: &[Eliminated]) -> Result<Eliminated> {
        let n = m.n();
        let v = self.coords(&m);
        let k = self.frame.k();
        let pivot = (0..k)
            .filter(|&i| v.get(2 * i) || v.get(2 * i + 1))
            .max_by_key(|&i| self.frame.qubits()[i].id)
            .ok_or(Error::RerouteFailed)?;
        let mut l = PauliOperator::identity(n);
        for (i, q) in self.frame.qubits().iter().enumerate() {
            if v.get(2 * i) {
                l.mul_assign_unchecked(&q.x);
            }
            if v.get(2 * i + 1) {
                l.mul_assign_unchecked(&q.z);
            }
        }
        let l = hermitize(l);
        let pq = self.frame.qubits()[pivot].clone();
        let partner = if v.get(2 * pivot) { pq.z.clone() } else { pq.x.clone() };
        for (i, q) in self.frame.qubits_mut().iter_mut().enumerate() {
            if i == pivot {
                continue;
            }
            for rep in [&mut q.x, &mut q.z] {
                let fl = rep.anticommutes_unchecked(&l);
                let fp = rep.anticommutes_unchecked(&partner);
                if fl {
                    rep.mul_assign_unchecked(&partner);
                }
                if fp {
                    rep.mul_assign_unchecked(&l);
                }
                *rep = hermitize(rep.clone());
            }
        }
        let mut rel = l.mul(&m)?;
        let mut deps = Vec::new();
        for (j, e) in earlier.iter().enumerate() {
            if rel.anticommutes_unchecked(&e.partner) {
                rel.mul_assign_unchecked(&e.logical);
                deps.push(j);
            }
        }
        let sigma = self.state.expectation(&hermitize(rel))?.ok_or(Error::InconsistentSigns)?;
        self.frame.qubits_mut().remove(pivot);
        Ok(Eliminated { idx, logical: l, partner, sigma, id: pq.id, deps })
    }

    /// Multiplies `rep` by old stabilizer elements (with their current
    /// signs) until it commutes with every added generator. Removed
    /// generators are tried first, then the whole old group.
    fn reroute(&self, rep: &PauliOperator, removed: &[PauliOperator], added: &[PauliOperator]) -> Result<PauliOperator> {
        let target = comm_row(rep, added);
        if target.is_zero() {
            return Ok(rep.clone());
        }
        let old = self.code.group().generators();
        let mut pools: Vec<Vec<&PauliOperator>> = Vec::new();
        for set in [removed, old] {
            if let Some(letter) = pure_letter(rep) {
                pools.push(set.iter().filter(|g| pure_letter(g) == Some(letter)).collect());
            }
            pools.push(set.iter().collect());
        }
        for pool in pools {
            let rows: Vec<BitVec> = pool.iter().map(|g| comm_row(g, added)).collect();
            if let Some(combo) = solve_combination(added.len(), &rows, &target) {
                let s = product(rep.n(), combo.ones().map(|i| pool[i]));
                let sign = self.state.expectation(&s)?.ok_or(Error::RerouteFailed)?;
                let s = if sign < 0 { s.negated() } else { s };
                return Ok(hermitize(rep.mul(&s)?));
            }
        }
        Err(Error::RerouteFailed)
    }

    fn initialize(
        &mut self,
        target: &SurfaceCode,
        removed: &[PauliOperator],
        added: &[PauliOperator],
        fresh: usize,
        report: &mut StepReport,
    ) -> Result<()> {
        let n = target.n();
        let width = 2 * n;
        let mut span = RowBasis::from_rows(width, &target.group().generators().iter().map(|g| g.symplectic()).collect::<Vec<_>>());
        let rows: Vec<BitVec> = removed.iter().map(|r| comm_row(r, added)).collect();
        let mut created: Vec<PauliOperator> = Vec::new();
        for combo in left_nullspace(added.len(), &rows) {
            if created.len() == fresh {
                break;
            }
            let t = product(n, combo.ones().map(|i| &removed[i]));
            if span.insert(t.symplectic()).is_ok() {
                created.push(hermitize(t));
            }
        }
        if created.len() != fresh {
            return Err(Error::TopologyChange { before: self.code.k(), after: target.k() });
        }
        let basis = target.homology_basis()?;
        let pool: Vec<PauliOperator> = basis.xops.iter().chain(&basis.zops).cloned().collect();
        let mut fixed: Vec<PauliOperator> = Vec::new();
        for q in self.frame.qubits() {
            fixed.push(q.x.clone());
            fixed.push(q.z.clone());
        }
        fixed.extend(created.iter().cloned());
        let mut partners: Vec<PauliOperator> = Vec::new();
        for (j, t) in created.iter().enumerate() {
            let mut constraints = fixed.clone();
            constraints.extend(partners.iter().cloned());
            let t_index = fixed.len() - created.len() + j;
            let goal = BitVec::unit(constraints.len(), t_index);
            let wanted = match pure_letter(t) {
                Some(Letter::Z) => Some(Letter::X),
                Some(_) => Some(Letter::Z),
                None => None,
            };
            let candidates: Vec<&PauliOperator> = pool.iter().filter(|p| wanted.is_none() || pure_letter(p) == wanted).collect();
            let crows: Vec<BitVec> = candidates.iter().map(|p| comm_row(p, &constraints)).collect();
            let combo = solve_combination(constraints.len(), &crows, &goal).ok_or(Error::RerouteFailed)?;
            partners.push(hermitize(product(n, combo.ones().map(|i| candidates[i]))));
        }
        for (t, p) in created.into_iter().zip(partners) {
            let sign = self.state.expectation(&t)?.ok_or(Error::InconsistentSigns)?;
            let id = self.frame.fresh_id();
            let fq = if t.is_x_type() && !t.is_z_type() {
                FrameQubit { id, x: t, z: p }
            } else {
                FrameQubit { id, x: p, z: t }
            };
            self.frame.qubits_mut().push(fq);
            report.initialized.push(id);
            report.init_signs.push(sign);
        }
        Ok(())
    }
}
