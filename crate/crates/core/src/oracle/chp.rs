//! Stabilizer tableau in the Aaronson–Gottesman layout: `2n` boolean rows
//! (destabilizers then stabilizers) with signs combined by the `g` phase
//! function. Kept separate from the production tableau so it can replay
//! an engine log as an independent check.

use crate::deform::LoggedOp;
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliOperator};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Row {
    x: Vec<bool>,
    z: Vec<bool>,
    r: bool,
}

impl Row {
    fn identity(n: usize) -> Self {
        Self { x: vec![false; n], z: vec![false; n], r: false }
    }

    fn from_pauli(p: &PauliOperator) -> Result<Self> {
        if !p.is_hermitian() {
            return Err(Error::NonHermitian(p.phase()));
        }
        let mut row = Self::identity(p.n());
        for q in 0..p.n() {
            let (x, z) = match p.letter(q) {
                Letter::I => (false, false),
                Letter::X => (true, false),
                Letter::Y => (true, true),
                Letter::Z => (false, true),
            };
            row.x[q] = x;
            row.z[q] = z;
        }
        row.r = p.phase() == 2;
        Ok(row)
    }

    fn anticommutes(&self, other: &Row) -> bool {
        let mut s = false;
        for q in 0..self.x.len() {
            s ^= (self.x[q] & other.z[q]) ^ (self.z[q] & other.x[q]);
        }
        s
    }
}

fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (i32::from(x2), i32::from(z2));
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

/// `h ← i · h` with the sign of the product.
fn rowsum(h: &mut Row, i: &Row) {
    let mut sum = 2 * i32::from(h.r) + 2 * i32::from(i.r);
    for q in 0..h.x.len() {
        sum += g(i.x[q], i.z[q], h.x[q], h.z[q]);
        h.x[q] ^= i.x[q];
        h.z[q] ^= i.z[q];
    }
    h.r = sum.rem_euclid(4) == 2;
}

#[derive(Clone, Debug)]
pub struct ChpTableau {
    n: usize,
    rows: Vec<Row>,
}

impl ChpTableau {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Self {
        let mut rows = Vec::with_capacity(2 * n);
        for q in 0..n {
            let mut d = Row::identity(n);
            d.x[q] = true;
            rows.push(d);
        }
        for q in 0..n {
            let mut s = Row::identity(n);
            s.z[q] = true;
            rows.push(s);
        }
        Self { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn deterministic(&self, p: &Row) -> i8 {
        let mut scratch = Row::identity(self.n);
        for i in 0..self.n {
            if self.rows[i].anticommutes(p) {
                rowsum(&mut scratch, &self.rows[i + self.n]);
            }
        }
        if scratch.r == p.r {
            1
        } else {
            -1
        }
    }

    /// `Some(±1)` when `p` or `-p` stabilizes the state.
    pub fn expectation(&self, p: &PauliOperator) -> Result<Option<i8>> {
        let row = Row::from_pauli(p)?;
        if self.rows[self.n..].iter().any(|s| s.anticommutes(&row)) {
            return Ok(None);
        }
        Ok(Some(self.deterministic(&row)))
    }

    /// Measures `p`. A random outcome is set to `forced`; a determined
    /// outcome that disagrees with `forced` is an error.
    pub fn measure_forced(&mut self, p: &PauliOperator, forced: i8) -> Result<()> {
        let row = Row::from_pauli(p)?;
        let n = self.n;
        let Some(pivot) = (n..2 * n).find(|&i| self.rows[i].anticommutes(&row)) else {
            return if self.deterministic(&row) == forced { Ok(()) } else { Err(Error::InconsistentSigns) };
        };
        let prow = self.rows[pivot].clone();
        for i in 0..2 * n {
            if i != pivot && self.rows[i].anticommutes(&row) {
                rowsum(&mut self.rows[i], &prow);
            }
        }
        self.rows[pivot - n] = prow;
        let mut new = row;
        new.r ^= forced < 0;
        self.rows[pivot] = new;
        Ok(())
    }

    pub fn apply(&mut self, p: &PauliOperator) -> Result<()> {
        let row = Row::from_pauli(&p.clone().with_phase(0))?;
        for s in &mut self.rows[self.n..] {
            if s.anticommutes(&row) {
                s.r ^= true;
            }
        }
        Ok(())
    }

    /// Replays a measurement log from `|0…0⟩`.
    pub fn replay(n: usize, log: &[LoggedOp]) -> Result<Self> {
        let mut t = Self::zero(n);
        for op in log {
            match op {
                LoggedOp::Measure { op, outcome } => t.measure_forced(op, *outcome)?,
                LoggedOp::Apply { op } => t.apply(op)?,
            }
        }
        Ok(t)
    }
}
