//! Logical frame: the current representatives of every encoded qubit and
//! their relation to a reference basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SurfaceCode;
use crate::pauli::PauliOperator;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameQubit {
    pub id: usize,
    pub x: PauliOperator,
    pub z: PauliOperator,
}

/// Binary matrices relating current representatives to the reference
/// basis: `X̄ᵢ ~ Πⱼ Xⱼ^aᵢⱼ Zⱼ^bᵢⱼ`, `Z̄ᵢ ~ Πⱼ Xⱼ^cᵢⱼ Zⱼ^dᵢⱼ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameMatrices {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub a: Vec<Vec<u8>>,
    pub b: Vec<Vec<u8>>,
    pub c: Vec<Vec<u8>>,
    pub d: Vec<Vec<u8>>,
}

impl FrameMatrices {
    pub fn mixing_free(&self) -> bool {
        self.b.iter().chain(&self.c).all(|r| r.iter().all(|&v| v == 0))
    }

    /// Row of `a` for qubit `id`, restricted to the listed reference ids.
    pub fn a_row(&self, id: usize, cols: &[usize]) -> Option<Vec<u8>> {
        Self::pick(&self.a, &self.rows, &self.cols, id, cols)
    }

    pub fn d_row(&self, id: usize, cols: &[usize]) -> Option<Vec<u8>> {
        Self::pick(&self.d, &self.rows, &self.cols, id, cols)
    }

    fn pick(m: &[Vec<u8>], rows: &[usize], all: &[usize], id: usize, cols: &[usize]) -> Option<Vec<u8>> {
        let i = rows.iter().position(|&r| r == id)?;
        cols.iter().map(|c| all.iter().position(|x| x == c).map(|j| m[i][j])).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalFrame {
    qubits: Vec<FrameQubit>,
    reference: Vec<FrameQubit>,
    next_id: usize,
}

impl LogicalFrame {
    /// Frame built from the code's deterministic logical basis; the
    /// reference equals the initial representatives.
    pub fn from_code(code: &SurfaceCode) -> Result<Self> {
        let basis = code.homology_basis()?;
        let qubits: Vec<FrameQubit> = basis
            .xops
            .into_iter()
            .zip(basis.zops)
            .enumerate()
            .map(|(id, (x, z))| FrameQubit { id, x, z })
            .collect();
        let next_id = qubits.len();
        Ok(Self { reference: qubits.clone(), qubits, next_id })
    }

    pub fn from_qubits(qubits: Vec<FrameQubit>) -> Self {
        let next_id = qubits.iter().map(|q| q.id + 1).max().unwrap_or(0);
        Self { reference: qubits.clone(), qubits, next_id }
    }

    pub fn qubits(&self) -> &[FrameQubit] {
        &self.qubits
    }

    pub fn reference(&self) -> &[FrameQubit] {
        &self.reference
    }

    pub fn k(&self) -> usize {
        self.qubits.len()
    }

    pub fn ids(&self) -> Vec<usize> {
        self.qubits.iter().map(|q| q.id).collect()
    }

    pub fn get(&self, id: usize) -> Result<&FrameQubit> {
        self.qubits.iter().find(|q| q.id == id).ok_or(Error::NoSuchQubit(id))
    }

    pub fn get_mut(&mut self, id: usize) -> Result<&mut FrameQubit> {
        self.qubits.iter_mut().find(|q| q.id == id).ok_or(Error::NoSuchQubit(id))
    }

    pub(crate) fn qubits_mut(&mut self) -> &mut Vec<FrameQubit> {
        &mut self.qubits
    }

    pub(crate) fn fresh_id(&mut self) -> usize {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    /// Makes the current representatives the new reference basis.
    pub fn rebase(&mut self) {
        self.reference = self.qubits.clone();
    }

    /// Relabels a qubit; used to give macro-created qubits stable ids.
    pub fn relabel(&mut self, from: usize, to: usize) -> Result<()> {
        if from != to && self.qubits.iter().any(|q| q.id == to) {
            return Err(Error::QubitsOverlap(from, to));
        }
        self.get_mut(from)?.id = to;
        self.next_id = self.next_id.max(to + 1);
        Ok(())
    }

    /// Commutation-derived matrices against the reference basis.
    pub fn matrices(&self) -> FrameMatrices {
        let bit = |p: &PauliOperator, q: &PauliOperator| u8::from(p.anticommutes_unchecked(q));
        let mut m = FrameMatrices {
            rows: self.ids(),
            cols: self.reference.iter().map(|q| q.id).collect(),
            a: Vec::new(),
            b: Vec::new(),
            c: Vec::new(),
            d: Vec::new(),
        };
        for q in &self.qubits {
            m.a.push(self.reference.iter().map(|r| bit(&q.x, &r.z)).collect());
            m.b.push(self.reference.iter().map(|r| bit(&q.x, &r.x)).collect());
            m.c.push(self.reference.iter().map(|r| bit(&q.z, &r.z)).collect());
            m.d.push(self.reference.iter().map(|r| bit(&q.z, &r.x)).collect());
        }
        m
    }

    /// True when every representative lies in the code's normalizer and
    /// the representatives satisfy the canonical commutation relations.
    pub fn is_valid_for(&self, code: &SurfaceCode) -> bool {
        let g = code.group();
        let in_n = self.qubits.iter().all(|q| {
            q.x.is_hermitian()
                && q.z.is_hermitian()
                && g.in_normalizer(&q.x).unwrap_or(false)
                && g.in_normalizer(&q.z).unwrap_or(false)
        });
        let rel = self.qubits.iter().enumerate().all(|(i, a)| {
            self.qubits.iter().enumerate().all(|(j, b)| {
                a.x.anticommutes_unchecked(&b.z) == (i == j)
                    && !a.x.anticommutes_unchecked(&b.x)
                    && !a.z.anticommutes_unchecked(&b.z)
            })
        });
        in_n && rel && self.qubits.len() == code.k()
    }
}
