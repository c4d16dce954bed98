//! Exhaustive searches over all `4^n` Paulis. Operators are plain
//! `(x, z)` bit masks here so nothing is shared with the GF(2) solver.

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliOperator};
use crate::stabilizer::{LogicalBasis, StabilizerGroup};

pub const MAX_BRUTE: usize = 12;

type Masks = (u32, u32);

fn masks(p: &PauliOperator) -> Masks {
    let (mut x, mut z) = (0, 0);
    for q in 0..p.n() {
        match p.letter(q) {
            Letter::X => x |= 1 << q,
            Letter::Z => z |= 1 << q,
            Letter::Y => {
                x |= 1 << q;
                z |= 1 << q;
            }
            Letter::I => {}
        }
    }
    (x, z)
}

fn anticommute(a: Masks, b: Masks) -> bool {
    ((a.0 & b.1).count_ones() + (a.1 & b.0).count_ones()) % 2 == 1
}

fn weight(a: Masks) -> u32 {
    (a.0 | a.1).count_ones()
}

/// Every group element as a mask, by enumerating generator subsets.
fn group_elements(g: &StabilizerGroup) -> Result<Vec<Masks>> {
    let gens: Vec<Masks> = g.generators().iter().map(masks).collect();
    if gens.len() > 2 * MAX_BRUTE {
        return Err(Error::TooLarge { n: g.n(), limit: MAX_BRUTE });
    }
    let mut out = vec![(0, 0)];
    for m in gens {
        let extra: Vec<Masks> = out.iter().map(|e| (e.0 ^ m.0, e.1 ^ m.1)).collect();
        out.extend(extra);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Normalizer and group sizes, and the minimum weight over `𝒩 − 𝒮`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteSummary {
    pub normalizer_size: u64,
    pub group_size: u64,
    pub k: usize,
    pub distance: Option<u32>,
}

pub fn brute_force_summary(g: &StabilizerGroup) -> Result<BruteSummary> {
    let n = g.n();
    if n > MAX_BRUTE {
        return Err(Error::TooLarge { n, limit: MAX_BRUTE });
    }
    let gens: Vec<Masks> = g.generators().iter().map(masks).collect();
    let group = group_elements(g)?;
    let mut normalizer = 0u64;
    let mut distance: Option<u32> = None;
    for x in 0..1u32 << n {
        for z in 0..1u32 << n {
            let p = (x, z);
            if gens.iter().any(|&s| anticommute(p, s)) {
                continue;
            }
            normalizer += 1;
            if group.binary_search(&p).is_err() {
                let w = weight(p);
                distance = Some(distance.map_or(w, |d| d.min(w)));
            }
        }
    }
    let ratio = normalizer / group.len() as u64;
    let k = (ratio.trailing_zeros() / 2) as usize;
    Ok(BruteSummary { normalizer_size: normalizer, group_size: group.len() as u64, k, distance })
}

pub fn brute_force_distance(g: &StabilizerGroup) -> Result<u32> {
    brute_force_summary(g)?.distance.ok_or(Error::NoLogicals)
}

/// Checks a proposed basis against enumeration: `k` pairs, each element
/// in `𝒩 − 𝒮`, with the pairing relations holding bit by bit.
pub fn brute_force_logical_pairs(g: &StabilizerGroup, basis: &LogicalBasis) -> Result<bool> {
    let summary = brute_force_summary(g)?;
    if summary.k == 0 {
        return Err(Error::NoLogicals);
    }
    let group = group_elements(g)?;
    let gens: Vec<Masks> = g.generators().iter().map(masks).collect();
    let xs: Vec<Masks> = basis.xops.iter().map(masks).collect();
    let zs: Vec<Masks> = basis.zops.iter().map(masks).collect();
    if xs.len() != summary.k || zs.len() != summary.k {
        return Ok(false);
    }
    let logical = |p: Masks| !gens.iter().any(|&s| anticommute(p, s)) && group.binary_search(&p).is_err();
    if !xs.iter().chain(&zs).all(|&p| logical(p)) {
        return Ok(false);
    }
    for i in 0..xs.len() {
        for j in 0..xs.len() {
            if anticommute(xs[i], xs[j]) || anticommute(zs[i], zs[j]) || anticommute(xs[i], zs[j]) != (i == j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
