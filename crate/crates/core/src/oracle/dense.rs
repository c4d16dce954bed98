//! Dense statevector over at most 14 qubits. Qubit `q` is bit `q` of the
//! basis index.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliOperator};

pub const MAX_QUBITS: usize = 14;

#[derive(Clone, Debug)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl DenseState {
    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooLarge { n, limit: MAX_QUBITS });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check(&self, p: &PauliOperator) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::LengthMismatch(p.n(), self.n));
        }
        Ok(())
    }

    /// `P|ψ⟩`, letter by letter.
    pub fn applied(&self, p: &PauliOperator) -> Result<Self> {
        self.check(p)?;
        let mut flip = 0usize;
        let mut zmask = 0usize;
        let mut ys = 0u8;
        for q in 0..self.n {
            match p.letter(q) {
                Letter::I => {}
                Letter::X => flip |= 1 << q,
                Letter::Z => zmask |= 1 << q,
                Letter::Y => {
                    flip |= 1 << q;
                    zmask |= 1 << q;
                    ys += 1;
                }
            }
        }
        // Y = iXZ: Z acts first, then X.
        let global = i_pow(p.phase() + ys);
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            let sign = if (b & zmask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[b ^ flip] = a * sign * global;
        }
        Ok(Self { n: self.n, amps: out })
    }

    pub fn apply(&mut self, p: &PauliOperator) -> Result<()> {
        *self = self.applied(p)?;
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩`, real for Hermitian `P`.
    pub fn expectation(&self, p: &PauliOperator) -> Result<f64> {
        let pp = self.applied(p)?;
        let v: Complex64 = self.amps.iter().zip(&pp.amps).map(|(a, b)| a.conj() * b).sum();
        Ok(v.re)
    }

    /// Probability of outcome `+1` when measuring `p`.
    pub fn probability_plus(&self, p: &PauliOperator) -> Result<f64> {
        Ok(((1.0 + self.expectation(p)?) / 2.0).clamp(0.0, 1.0))
    }

    /// Projects onto the `outcome` eigenspace of `p` and renormalizes.
    pub fn project(&mut self, p: &PauliOperator, outcome: i8) -> Result<()> {
        if !p.is_hermitian() {
            return Err(Error::NonHermitian(p.phase()));
        }
        let pp = self.applied(p)?;
        let s = f64::from(outcome);
        for (a, b) in self.amps.iter_mut().zip(&pp.amps) {
            *a = (*a + b * s) * 0.5;
        }
        let norm = self.norm();
        if norm < 1e-12 {
            return Err(Error::NormZero);
        }
        for a in &mut self.amps {
            *a /= norm;
        }
        Ok(())
    }

    /// Born-rule measurement of `p`; never selects an empty branch.
    pub fn project_measure(&mut self, p: &PauliOperator, rng: &mut impl Rng) -> Result<i8> {
        let plus = self.probability_plus(p)?;
        let outcome = if rng.gen::<f64>() < plus { 1 } else { -1 };
        let outcome = match outcome {
            1 if plus < 1e-12 => -1,
            -1 if plus > 1.0 - 1e-12 => 1,
            o => o,
        };
        self.project(p, outcome)?;
        Ok(outcome)
    }

    /// `|⟨φ|ψ⟩|²`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        let v: Complex64 = self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum();
        v.norm_sqr()
    }
}

/// The state fixed by every signed operator in `ops` (generators followed
/// by logical representatives), built by projecting basis states.
pub fn stabilizer_to_dense(n: usize, ops: &[PauliOperator]) -> Result<DenseState> {
    for start in 0..1usize << n.min(MAX_QUBITS) {
        let mut s = DenseState::basis(n, start)?;
        if ops.iter().all(|p| s.project(p, 1).is_ok()) {
            return Ok(s);
        }
    }
    Err(Error::InconsistentSigns)
}
