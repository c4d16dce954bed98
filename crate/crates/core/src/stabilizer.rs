//! Stabilizer groups, code parameters, and encoded Pauli bases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{left_nullspace, transpose, BitVec, RowBasis};
use crate::pauli::PauliOperator;

/// Default qubit limit for exhaustive distance search.
pub const DISTANCE_SEARCH_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliOperator>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParameters {
    pub n: usize,
    pub k: usize,
    pub d: Option<usize>,
}

/// `k` pairs of encoded operators with `X_i Z_j = (-1)^{δ_ij} Z_j X_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalBasis {
    pub xops: Vec<PauliOperator>,
    pub zops: Vec<PauliOperator>,
}

impl LogicalBasis {
    pub fn k(&self) -> usize {
        self.xops.len()
    }

    /// Checks every pairwise relation of the encoded Pauli algebra.
    pub fn satisfies_relations(&self) -> bool {
        let k = self.k();
        if self.zops.len() != k {
            return false;
        }
        for i in 0..k {
            for j in 0..k {
                if self.xops[i].anticommutes_unchecked(&self.xops[j])
                    || self.zops[i].anticommutes_unchecked(&self.zops[j])
                    || self.xops[i].anticommutes_unchecked(&self.zops[j]) != (i == j)
                {
                    return false;
                }
            }
        }
        true
    }
}

impl StabilizerGroup {
    pub fn new(n: usize, generators: Vec<PauliOperator>) -> Result<Self> {
        for g in &generators {
            if g.n() != n {
                return Err(Error::LengthMismatch(g.n(), n));
            }
        }
        Ok(Self { n, generators })
    }

    pub fn from_literals<S: AsRef<str>>(literals: &[S]) -> Result<Self> {
        let gens: Vec<PauliOperator> =
            literals.iter().map(|s| s.as_ref().parse()).collect::<Result<_>>()?;
        let n = gens.first().map(PauliOperator::n).unwrap_or(0);
        Self::new(n, gens)
    }

    pub fn to_literals(&self) -> Vec<String> {
        self.generators.iter().map(ToString::to_string).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn is_css(&self) -> bool {
        self.generators.iter().all(|g| g.is_x_type() || g.is_z_type())
    }

    fn symplectic_rows(&self) -> Vec<BitVec> {
        self.generators.iter().map(PauliOperator::symplectic).collect()
    }

    pub fn rank(&self) -> usize {
        RowBasis::from_rows(2 * self.n, &self.symplectic_rows()).rank()
    }

    /// Product of the selected generators, in index order.
    pub fn product(&self, select: &BitVec) -> PauliOperator {
        let mut p = PauliOperator::identity(self.n);
        for i in select.ones() {
            p.mul_assign_unchecked(&self.generators[i]);
        }
        p
    }

    /// Checks commutation and `-1 ∉ S`; returns `(n, k)`.
    pub fn validate(&self) -> Result<CodeParameters> {
        for i in 0..self.generators.len() {
            if !self.generators[i].is_hermitian() {
                return Err(Error::NonHermitian(self.generators[i].phase()));
            }
            for j in (i + 1)..self.generators.len() {
                if self.generators[i].anticommutes_unchecked(&self.generators[j]) {
                    return Err(Error::AnticommutingGenerators(i, j));
                }
            }
        }
        for dep in left_nullspace(2 * self.n, &self.symplectic_rows()) {
            if !self.product(&dep).is_identity() {
                return Err(Error::MinusOneInGroup);
            }
        }
        Ok(CodeParameters { n: self.n, k: self.n - self.rank(), d: None })
    }

    /// `Some(false)` if `p ∈ S`, `Some(true)` if `-p ∈ S`, `None` otherwise.
    pub fn membership(&self, p: &PauliOperator) -> Result<Option<bool>> {
        if p.n() != self.n {
            return Err(Error::LengthMismatch(p.n(), self.n));
        }
        let basis = RowBasis::from_rows(2 * self.n, &self.symplectic_rows());
        Ok(basis.express(&p.symplectic()).map(|mut combo| {
            combo.resize(self.generators.len());
            let prod = self.product(&combo);
            prod.phase() != p.phase()
        }))
    }

    /// `p ∈ ⟨generators⟩` with exactly matching sign.
    pub fn in_group(&self, p: &PauliOperator) -> Result<bool> {
        Ok(self.membership(p)? == Some(false))
    }

    pub fn in_normalizer(&self, p: &PauliOperator) -> Result<bool> {
        if p.n() != self.n {
            return Err(Error::LengthMismatch(p.n(), self.n));
        }
        Ok(self.generators.iter().all(|g| !g.anticommutes_unchecked(p)))
    }

    /// Basis of the normalizer, as operators with phase 0.
    fn normalizer_basis(&self) -> Vec<PauliOperator> {
        let n = self.n;
        if self.is_css() {
            // X-type part must commute with the Z generators and vice versa.
            let zgens: Vec<BitVec> =
                self.generators.iter().filter(|g| !g.is_x_type()).map(|g| g.z_bits().clone()).collect();
            let xgens: Vec<BitVec> =
                self.generators.iter().filter(|g| !g.is_z_type()).map(|g| g.x_bits().clone()).collect();
            let mut out = Vec::new();
            for x in kernel(n, &zgens) {
                out.push(PauliOperator::from_bits(x, BitVec::zeros(n), 0).expect("lengths match"));
            }
            for z in kernel(n, &xgens) {
                out.push(PauliOperator::from_bits(BitVec::zeros(n), z, 0).expect("lengths match"));
            }
            out
        } else {
            let duals: Vec<BitVec> = self.generators.iter().map(PauliOperator::symplectic_dual).collect();
            kernel(2 * n, &duals).iter().map(PauliOperator::from_symplectic).collect()
        }
    }

    /// Deterministic encoded Pauli basis by symplectic Gram–Schmidt over
    /// the normalizer; the first unpaired candidate always pivots.
    pub fn logical_basis(&self) -> Result<LogicalBasis> {
        let params = self.validate()?;
        let mut pool = self.normalizer_basis();
        let mut xops = Vec::new();
        let mut zops = Vec::new();
        while !pool.is_empty() {
            let a = pool.remove(0);
            let Some(pos) = pool.iter().position(|c| c.anticommutes_unchecked(&a)) else {
                continue;
            };
            let b = pool.remove(pos);
            for c in pool.iter_mut() {
                let with_b = c.anticommutes_unchecked(&b);
                let with_a = c.anticommutes_unchecked(&a);
                if with_b {
                    c.mul_assign_unchecked(&a);
                }
                if with_a {
                    c.mul_assign_unchecked(&b);
                }
                *c = c.clone().with_phase(0);
            }
            if a.is_z_type() && b.is_x_type() && !a.is_identity_up_to_phase() {
                xops.push(b);
                zops.push(a);
            } else {
                xops.push(a);
                zops.push(b);
            }
        }
        debug_assert_eq!(xops.len(), params.k);
        Ok(LogicalBasis { xops, zops })
    }

    /// Exact code distance: minimum weight over `N − S`, by enumerating
    /// operators in order of increasing weight.
    pub fn distance(&self, n_max: usize) -> Result<usize> {
        let params = self.validate()?;
        if params.k == 0 {
            return Err(Error::NoLogicals);
        }
        if self.n > n_max {
            return Err(Error::TooLarge { n: self.n, limit: n_max });
        }
        let stab = RowBasis::from_rows(2 * self.n, &self.symplectic_rows());
        let is_logical = |p: &PauliOperator| {
            self.generators.iter().all(|g| !g.anticommutes_unchecked(p)) && !stab.contains(&p.symplectic())
        };
        let letters: &[&[crate::pauli::Letter]] = if self.is_css() {
            &[&[crate::pauli::Letter::X], &[crate::pauli::Letter::Z]]
        } else {
            &[&[crate::pauli::Letter::X, crate::pauli::Letter::Y, crate::pauli::Letter::Z]]
        };
        for w in 1..=self.n {
            for alphabet in letters {
                if search_weight(self.n, w, alphabet, &is_logical) {
                    return Ok(w);
                }
            }
        }
        Err(Error::NoLogicals)
    }

    /// Appends `extra` qubits, each fixed by a single-qubit `Z`.
    pub fn extend_register(&self, extra: usize) -> Self {
        let n = self.n + extra;
        let mut gens: Vec<PauliOperator> = self
            .generators
            .iter()
            .map(|g| {
                let idx: Vec<usize> = (0..self.n).collect();
                g.embed(n, &idx).expect("indices in range")
            })
            .collect();
        for q in self.n..n {
            gens.push(PauliOperator::z_type(n, [q]));
        }
        Self { n, generators: gens }
    }
}

/// Vectors `v` of length `width` with `row · v = 0` for every row.
fn kernel(width: usize, rows: &[BitVec]) -> Vec<BitVec> {
    let cols = transpose(width, rows);
    left_nullspace(rows.len(), &cols)
}

/// Visits every operator of exactly weight `w` over `alphabet`, stopping
/// at the first one accepted by `hit`.
fn search_weight(
    n: usize,
    w: usize,
    alphabet: &[crate::pauli::Letter],
    hit: &dyn Fn(&PauliOperator) -> bool,
) -> bool {
    let mut support: Vec<usize> = (0..w).collect();
    loop {
        let mut choice = vec![0usize; w];
        loop {
            let mut p = PauliOperator::identity(n);
            for (s, &c) in support.iter().zip(&choice) {
                p.set_letter(*s, alphabet[c]);
            }
            if hit(&p) {
                return true;
            }
            let mut i = 0;
            while i < w {
                choice[i] += 1;
                if choice[i] < alphabet.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == w {
                break;
            }
        }
        // next combination
        let mut i = w;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if support[i] < n - w + i {
                support[i] += 1;
                for j in (i + 1)..w {
                    support[j] = support[j - 1] + 1;
                }
                break;
            }
        }
    }
}
