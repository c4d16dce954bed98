//! Sign-tracking stabilizer/destabilizer tableau with Pauli measurement.

use crate::error::{Error, Result};
use crate::gf2::RowBasis;
use crate::pauli::PauliOperator;

/// Source of measurement randomness. Every random outcome drawn by the
/// simulator goes through one of these.
pub trait OutcomeSource {
    /// `true` selects the `-1` outcome.
    fn random_bit(&mut self) -> bool;
}

impl<R: rand::RngCore> OutcomeSource for R {
    fn random_bit(&mut self) -> bool {
        self.next_u32() & 1 == 1
    }
}

/// Replays a fixed list of outcome bits, then falls back to `+1`.
#[derive(Clone, Debug, Default)]
pub struct ScriptedOutcomes {
    bits: Vec<bool>,
    pos: usize,
}

impl ScriptedOutcomes {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits, pos: 0 }
    }
}

impl OutcomeSource for ScriptedOutcomes {
    fn random_bit(&mut self) -> bool {
        let b = self.bits.get(self.pos).copied().unwrap_or(false);
        self.pos += 1;
        b
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Measurement {
    /// `+1` or `-1`.
    pub outcome: i8,
    pub deterministic: bool,
}

impl Measurement {
    pub fn is_negative(&self) -> bool {
        self.outcome < 0
    }
}

/// Stabilizer state of an `n`-qubit register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableauState {
    n: usize,
    stabilizers: Vec<PauliOperator>,
    destabilizers: Vec<PauliOperator>,
}

impl TableauState {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            stabilizers: (0..n).map(|q| PauliOperator::z_type(n, [q])).collect(),
            destabilizers: (0..n).map(|q| PauliOperator::x_type(n, [q])).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliOperator] {
        &self.stabilizers
    }

    pub fn destabilizers(&self) -> &[PauliOperator] {
        &self.destabilizers
    }

    fn check_operand(&self, p: &PauliOperator) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::LengthMismatch(p.n(), self.n));
        }
        if !p.is_hermitian() {
            return Err(Error::NonHermitian(p.phase()));
        }
        Ok(())
    }

    /// `Some(±1)` when `±p` is in the stabilizer group, `None` when a
    /// measurement of `p` would be random. Does not change the state.
    pub fn expectation(&self, p: &PauliOperator) -> Result<Option<i8>> {
        self.check_operand(p)?;
        if self.stabilizers.iter().any(|s| s.anticommutes_unchecked(p)) {
            return Ok(None);
        }
        let mut acc = PauliOperator::identity(self.n);
        for (d, s) in self.destabilizers.iter().zip(&self.stabilizers) {
            if d.anticommutes_unchecked(p) {
                acc.mul_assign_unchecked(s);
            }
        }
        debug_assert_eq!(acc.x_bits(), p.x_bits());
        debug_assert_eq!(acc.z_bits(), p.z_bits());
        Ok(Some(if acc.phase() == p.phase() { 1 } else { -1 }))
    }

    /// Projective measurement of a Hermitian Pauli operator.
    pub fn measure_pauli(&mut self, p: &PauliOperator, source: &mut dyn OutcomeSource) -> Result<Measurement> {
        self.check_operand(p)?;
        let Some(pivot) = self.stabilizers.iter().position(|s| s.anticommutes_unchecked(p)) else {
            let outcome = self.expectation(p)?.expect("commutes with every stabilizer");
            return Ok(Measurement { outcome, deterministic: true });
        };
        let row = self.stabilizers[pivot].clone();
        for j in 0..self.n {
            if j != pivot && self.stabilizers[j].anticommutes_unchecked(p) {
                self.stabilizers[j].mul_assign_unchecked(&row);
            }
            if j != pivot && self.destabilizers[j].anticommutes_unchecked(p) {
                self.destabilizers[j].mul_assign_unchecked(&row);
            }
        }
        let negative = source.random_bit();
        self.destabilizers[pivot] = row;
        let mut new_row = p.clone();
        if negative {
            new_row = new_row.negated();
        }
        self.stabilizers[pivot] = new_row;
        Ok(Measurement { outcome: if negative { -1 } else { 1 }, deterministic: false })
    }

    /// Conjugates the state by `p`: stabilizer signs flip where they
    /// anticommute with `p`.
    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::LengthMismatch(p.n(), self.n));
        }
        for s in &mut self.stabilizers {
            if s.anticommutes_unchecked(p) {
                *s = s.clone().negated();
            }
        }
        Ok(())
    }

    /// Adds `extra` qubits in `|0⟩`.
    pub fn extend_register(&self, extra: usize) -> Self {
        let n = self.n + extra;
        let idx: Vec<usize> = (0..self.n).collect();
        let lift = |p: &PauliOperator| p.embed(n, &idx).expect("indices in range");
        let mut out = Self {
            n,
            stabilizers: self.stabilizers.iter().map(lift).collect(),
            destabilizers: self.destabilizers.iter().map(lift).collect(),
        };
        for q in self.n..n {
            out.stabilizers.push(PauliOperator::z_type(n, [q]));
            out.destabilizers.push(PauliOperator::x_type(n, [q]));
        }
        out
    }

    /// Verifies the tableau structure; used by tests after every update.
    pub fn check_invariants(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            if !self.stabilizers[i].is_hermitian() {
                return false;
            }
            for j in 0..n {
                if self.stabilizers[i].anticommutes_unchecked(&self.stabilizers[j]) {
                    return false;
                }
                if self.destabilizers[i].anticommutes_unchecked(&self.stabilizers[j]) != (i == j) {
                    return false;
                }
            }
        }
        let rows: Vec<_> = self.stabilizers.iter().chain(&self.destabilizers).map(|p| p.symplectic()).collect();
        RowBasis::from_rows(2 * n, &rows).rank() == 2 * n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn deterministic_z() {
        let mut s = TableauState::zero(1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = s.measure_pauli(&p("Z"), &mut rng).unwrap();
        assert_eq!(m, Measurement { outcome: 1, deterministic: true });
        assert_eq!(s.measure_pauli(&p("-Z"), &mut rng).unwrap().outcome, -1);
    }

    #[test]
    fn random_x_then_repeat() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen = [false; 2];
        for _ in 0..40 {
            let mut s = TableauState::zero(1);
            let m = s.measure_pauli(&p("X"), &mut rng).unwrap();
            assert!(!m.deterministic);
            seen[(m.outcome < 0) as usize] = true;
            assert_eq!(s.expectation(&p("X")).unwrap(), Some(m.outcome));
            let again = s.measure_pauli(&p("X"), &mut rng).unwrap();
            assert_eq!(again, Measurement { outcome: m.outcome, deterministic: true });
            assert!(s.check_invariants());
        }
        assert_eq!(seen, [true, true]);
    }

    #[test]
    fn apply_flips_signs() {
        let mut s = TableauState::zero(2);
        s.apply_pauli(&p("ZZ")).unwrap();
        assert_eq!(s.expectation(&p("ZI")).unwrap(), Some(1));
        s.apply_pauli(&p("XI")).unwrap();
        assert_eq!(s.expectation(&p("ZI")).unwrap(), Some(-1));
        assert_eq!(s.expectation(&p("IZ")).unwrap(), Some(1));
    }

    #[test]
    fn errors() {
        let mut s = TableauState::zero(2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(s.measure_pauli(&p("X"), &mut rng), Err(Error::LengthMismatch(1, 2))));
        assert!(matches!(s.measure_pauli(&p("iXX"), &mut rng), Err(Error::NonHermitian(1))));
    }

    #[test]
    fn bell_pair_signs() {
        let mut s = TableauState::zero(2);
        let mut forced = ScriptedOutcomes::new(vec![true]);
        let m = s.measure_pauli(&p("XX"), &mut forced).unwrap();
        assert_eq!(m.outcome, -1);
        assert_eq!(s.expectation(&p("ZZ")).unwrap(), Some(1));
        assert_eq!(s.expectation(&p("YY")).unwrap(), Some(1));
        assert_eq!(s.expectation(&p("-XX")).unwrap(), Some(1));
        let e = s.extend_register(1);
        assert!(e.check_invariants());
        assert_eq!(e.expectation(&p("IIZ")).unwrap(), Some(1));
    }
}
