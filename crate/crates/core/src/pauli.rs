//! n-qubit Pauli operators in symplectic form with exact phase.
//!
//! An operator is `i^phase · P_0 ⊗ … ⊗ P_{n-1}` where each letter is
//! encoded by its `(x, z)` bits: `(1,0) = X`, `(0,1) = Z`, `(1,1) = Y`.
//! Products follow `XZ = -iY`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::BitVec;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self { x: BitVec::zeros(n), z: BitVec::zeros(n), phase: 0 }
    }

    pub fn from_bits(x: BitVec, z: BitVec, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch(x.len(), z.len()));
        }
        Ok(Self { x, z, phase: phase % 4 })
    }

    pub fn single(n: usize, qubit: usize, letter: Letter) -> Self {
        let mut p = Self::identity(n);
        p.set_letter(qubit, letter);
        p
    }

    /// Tensor product of `letter` on each listed qubit, phase +1.
    pub fn uniform(n: usize, qubits: impl IntoIterator<Item = usize>, letter: Letter) -> Self {
        let mut p = Self::identity(n);
        for q in qubits {
            p.set_letter(q, letter);
        }
        p
    }

    pub fn x_type(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        Self::uniform(n, qubits, Letter::X)
    }

    pub fn z_type(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        Self::uniform(n, qubits, Letter::Z)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x.get(q), self.z.get(q))
    }

    /// Overwrites one tensor factor. The phase prefix is untouched.
    pub fn set_letter(&mut self, q: usize, letter: Letter) {
        let (x, z) = letter.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    pub fn negated(mut self) -> Self {
        self.phase = (self.phase + 2) % 4;
        self
    }

    /// Hermitian operators carry a real sign (`±1`).
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    /// `true` for `-P`, `false` for `+P`; `None` when the phase is imaginary.
    pub fn sign_bit(&self) -> Option<bool> {
        match self.phase {
            0 => Some(false),
            2 => Some(true),
            _ => None,
        }
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.is_identity_up_to_phase() && self.phase == 0
    }

    pub fn is_x_type(&self) -> bool {
        self.z.is_zero()
    }

    pub fn is_z_type(&self) -> bool {
        self.x.is_zero()
    }

    pub fn weight(&self) -> usize {
        let mut s = self.x.clone();
        s.or_assign(&self.z);
        s.count_ones()
    }

    pub fn support(&self) -> Vec<usize> {
        let mut s = self.x.clone();
        s.or_assign(&self.z);
        s.ones().collect()
    }

    /// Exponent of `i` produced by reordering when computing `self · other`.
    fn product_phase(&self, other: &Self) -> u8 {
        let mut plus = 0i64;
        let mut minus = 0i64;
        for k in 0..self.x.words().len() {
            let (x1, z1) = (self.x.words()[k], self.z.words()[k]);
            let (x2, z2) = (other.x.words()[k], other.z.words()[k]);
            let (ax, ay, az) = (x1 & !z1, x1 & z1, !x1 & z1);
            let (bx, by, bz) = (x2 & !z2, x2 & z2, !x2 & z2);
            plus += ((ax & by) | (ay & bz) | (az & bx)).count_ones() as i64;
            minus += ((ax & bz) | (ay & bx) | (az & by)).count_ones() as i64;
        }
        ((self.phase as i64 + other.phase as i64 + plus - minus).rem_euclid(4)) as u8
    }

    /// Group product `self · other` with exact phase.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::LengthMismatch(self.n(), other.n()));
        }
        let mut out = self.clone();
        out.mul_assign_unchecked(other);
        Ok(out)
    }

    /// `self ← self · other`. Lengths must agree.
    pub fn mul_assign_unchecked(&mut self, other: &Self) {
        debug_assert_eq!(self.n(), other.n());
        self.phase = self.product_phase(other);
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Symplectic product: `true` iff the operators anticommute.
    pub fn anticommutes_unchecked(&self, other: &Self) -> bool {
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        if self.n() != other.n() {
            return Err(Error::LengthMismatch(self.n(), other.n()));
        }
        Ok(!self.anticommutes_unchecked(other))
    }

    /// Places this operator on `sites` of an `n_total`-qubit register.
    pub fn embed(&self, n_total: usize, sites: &[usize]) -> Result<Self> {
        if sites.len() != self.n() {
            return Err(Error::LengthMismatch(sites.len(), self.n()));
        }
        let mut seen = BitVec::zeros(n_total);
        let mut out = Self::identity(n_total).with_phase(self.phase);
        for (j, &s) in sites.iter().enumerate() {
            if s >= n_total || seen.get(s) {
                return Err(Error::BadEmbedding { index: s, n_total });
            }
            seen.set(s, true);
            out.set_letter(s, self.letter(j));
        }
        Ok(out)
    }

    /// The `2n`-bit symplectic vector `(x | z)`.
    pub fn symplectic(&self) -> BitVec {
        let n = self.n();
        let mut v = BitVec::zeros(2 * n);
        for i in self.x.ones() {
            v.set(i, true);
        }
        for i in self.z.ones() {
            v.set(n + i, true);
        }
        v
    }

    /// The vector whose dot product with `other.symplectic()` is the
    /// commutation bit, i.e. `(z | x)`.
    pub fn symplectic_dual(&self) -> BitVec {
        let n = self.n();
        let mut v = BitVec::zeros(2 * n);
        for i in self.z.ones() {
            v.set(i, true);
        }
        for i in self.x.ones() {
            v.set(n + i, true);
        }
        v
    }

    /// Rebuilds an operator from `(x | z)` with phase 0.
    pub fn from_symplectic(v: &BitVec) -> Self {
        let n = v.len() / 2;
        let mut p = Self::identity(n);
        for i in v.ones() {
            if i < n {
                p.x.set(i, true);
            } else {
                p.z.set(i - n, true);
            }
        }
        p
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })?;
        for q in 0..self.n() {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::PauliParse(s.to_string());
        let mut rest = s.trim();
        let mut phase = 0u8;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            rest = r;
            phase = 2;
        }
        if let Some(r) = rest.strip_prefix('i') {
            rest = r;
            phase += 1;
        }
        let mut p = Self::identity(rest.chars().count());
        for (q, c) in rest.chars().enumerate() {
            let letter = match c {
                'I' | '_' => Letter::I,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                _ => return Err(bad()),
            };
            p.set_letter(q, letter);
        }
        Ok(p.with_phase(phase))
    }
}

impl serde::Serialize for PauliOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for PauliOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
