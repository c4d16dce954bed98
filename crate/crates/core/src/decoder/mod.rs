//! Pauli noise, repeated syndrome extraction, and decoding by matching
//! defects in space-time.
//!
//! X errors are seen by the Z-type (light) generators and corrected with
//! X; Z errors by the X-type (dark) generators. Each of the two sectors
//! is decoded on its own graph.

pub mod matching;
pub mod memory;

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SurfaceCode;
use crate::pauli::{Letter, PauliOperator};

pub use matching::{match_defects, Pairing};
pub use memory::{BenchRow, MemoryExperiment, NoisyRounds};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p_flip_x: f64,
    pub p_flip_z: f64,
    pub p_meas: f64,
}

impl NoiseModel {
    pub fn uniform(p: f64) -> Self {
        Self { p_flip_x: p, p_flip_z: p, p_meas: p }
    }

    pub fn validate(&self) -> Result<()> {
        for p in [self.p_flip_x, self.p_flip_z, self.p_meas] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Document(format!("probability {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Independent X and Z flips on every active qubit.
pub fn sample_noise(code: &SurfaceCode, model: &NoiseModel, rng: &mut impl Rng) -> PauliOperator {
    let n = code.n();
    let mut p = PauliOperator::identity(n);
    for s in &code.layout().active {
        let q = code.qubit(*s).expect("active site has a qubit");
        let x = rng.gen::<f64>() < model.p_flip_x;
        let z = rng.gen::<f64>() < model.p_flip_z;
        let letter = match (x, z) {
            (false, false) => continue,
            (true, false) => Letter::X,
            (false, true) => Letter::Z,
            (true, true) => Letter::Y,
        };
        p.set_letter(q, letter);
    }
    p
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    /// X errors, detected by Z-type generators.
    X,
    /// Z errors, detected by X-type generators.
    Z,
}

impl Sector {
    /// Letter of the generators that detect this sector.
    pub fn detector(self) -> Letter {
        match self {
            Sector::X => Letter::Z,
            Sector::Z => Letter::X,
        }
    }

    pub fn error(self) -> Letter {
        match self {
            Sector::X => Letter::X,
            Sector::Z => Letter::Z,
        }
    }
}

/// Detecting generators of one sector and shortest error chains between
/// them. Node `len()` stands for every border where such chains end.
#[derive(Clone, Debug)]
pub struct SectorGraph {
    pub sector: Sector,
    /// Index of each detector in the code's generator list.
    pub generators: Vec<usize>,
    /// Qubit support of each detector.
    pub supports: Vec<Vec<usize>>,
    dist: Vec<Vec<u32>>,
    /// `parent[s][v]`: qubit on the last edge of a shortest path `s → v`
    /// and the previous node.
    parent: Vec<Vec<Option<(usize, usize)>>>,
}

impl SectorGraph {
    pub fn new(code: &SurfaceCode, sector: Sector) -> Self {
        let want = sector.detector();
        let n = code.n();
        let mut generators = Vec::new();
        let mut supports = Vec::new();
        for (i, g) in code.group().generators().iter().enumerate() {
            let sup = g.support();
            if code.spectators().iter().any(|&s| sup == [s]) {
                continue;
            }
            if !sup.is_empty() && sup.iter().all(|&q| g.letter(q) == want) {
                generators.push(i);
                supports.push(sup);
            }
        }
        let m = generators.len();
        let mut touching: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (j, sup) in supports.iter().enumerate() {
            for &q in sup {
                touching[q].push(j);
            }
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m + 1];
        for s in &code.layout().active {
            let q = code.qubit(*s).expect("active site has a qubit");
            match *touching[q].as_slice() {
                [a] => {
                    adj[a].push((m, q));
                    adj[m].push((a, q));
                }
                [a, b] => {
                    adj[a].push((b, q));
                    adj[b].push((a, q));
                }
                _ => {}
            }
        }
        let mut dist = Vec::with_capacity(m + 1);
        let mut parent = Vec::with_capacity(m + 1);
        for src in 0..=m {
            let mut d = vec![matching::UNREACHABLE; m + 1];
            let mut par = vec![None; m + 1];
            d[src] = 0;
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                if u == m && src != m {
                    continue;
                }
                for &(v, q) in &adj[u] {
                    if d[v] == matching::UNREACHABLE {
                        d[v] = d[u] + 1;
                        par[v] = Some((q, u));
                        queue.push_back(v);
                    }
                }
            }
            dist.push(d);
            parent.push(par);
        }
        Self { sector, generators, supports, dist, parent }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn boundary(&self) -> usize {
        self.len()
    }

    /// Spatial distance between detectors (or the boundary node).
    pub fn distance(&self, a: usize, b: usize) -> u32 {
        self.dist[a][b]
    }

    /// Qubits on a shortest chain from `a` to `b`.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut v = b;
        while v != a {
            let Some((q, u)) = self.parent[a][v] else { break };
            out.push(q);
            v = u;
        }
        out
    }

    /// Syndrome bits of an error given as per-qubit flags of this sector.
    pub fn syndrome(&self, error: &[bool]) -> Vec<bool> {
        self.supports.iter().map(|sup| sup.iter().filter(|&&q| error[q]).count() % 2 == 1).collect()
    }
}

/// Per-round syndrome readings of one sector (`true` is `-1`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyndromeHistory {
    pub rounds: Vec<Vec<bool>>,
}

/// A change of a detector's reading between consecutive rounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Defect {
    pub round: usize,
    pub detector: usize,
}

impl SyndromeHistory {
    pub fn push(&mut self, round: Vec<bool>) {
        self.rounds.push(round);
    }

    /// Defects against an all-`+1` reference before the first round.
    pub fn defects(&self) -> Vec<Defect> {
        let mut out = Vec::new();
        let mut prev: Option<&Vec<bool>> = None;
        for (t, r) in self.rounds.iter().enumerate() {
            for (j, &b) in r.iter().enumerate() {
                let before = prev.is_some_and(|p| p[j]);
                if b != before {
                    out.push(Defect { round: t, detector: j });
                }
            }
            prev = Some(r);
        }
        out
    }
}

/// Defects with their pairwise space-time distances and distances to the
/// boundary (unit cost per qubit and per round).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingGraph {
    pub defects: Vec<Defect>,
    pub dist: Vec<Vec<u32>>,
    pub boundary: Vec<u32>,
}

pub fn build_defect_graph(graph: &SectorGraph, defects: &[Defect]) -> MatchingGraph {
    let b = graph.boundary();
    let dist = defects
        .iter()
        .map(|x| {
            defects
                .iter()
                .map(|y| graph.distance(x.detector, y.detector).saturating_add(x.round.abs_diff(y.round) as u32))
                .collect()
        })
        .collect();
    let boundary = defects.iter().map(|x| graph.distance(x.detector, b)).collect();
    MatchingGraph { defects: defects.to_vec(), dist, boundary }
}

/// Matches the defects and returns the qubits to flip.
pub fn decode(graph: &SectorGraph, mg: &MatchingGraph) -> (Pairing, Vec<usize>) {
    let pairing = match_defects(&mg.dist, &mg.boundary);
    let mut flips = vec![false; graph.supports.iter().flatten().copied().max().map_or(0, |q| q + 1)];
    let mut toggle = |qs: Vec<usize>| {
        for q in qs {
            if q >= flips.len() {
                flips.resize(q + 1, false);
            }
            flips[q] ^= true;
        }
    };
    for (i, p) in pairing.iter().enumerate() {
        let a = mg.defects[i].detector;
        match *p {
            Some(j) if j > i => toggle(graph.path(a, mg.defects[j].detector)),
            Some(_) => {}
            None => toggle(graph.path(a, graph.boundary())),
        }
    }
    let qubits = flips.iter().enumerate().filter(|(_, &f)| f).map(|(q, _)| q).collect();
    (pairing, qubits)
}

/// Correction operator for one sector's flipped qubits.
pub fn correction(n: usize, sector: Sector, qubits: &[usize]) -> PauliOperator {
    PauliOperator::uniform(n, qubits.iter().copied(), sector.error())
}

/// Raw outcome of a measurement of `measured`, reinterpreted through the
/// accumulated frame: flipped when the frame anticommutes with it.
pub fn interpret_measurement(raw: i8, frame: &PauliOperator, measured: &PauliOperator) -> i8 {
    if frame.anticommutes_unchecked(measured) {
        -raw
    } else {
        raw
    }
}
