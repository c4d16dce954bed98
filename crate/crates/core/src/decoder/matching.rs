//! Minimum-weight perfect matching of defects, each of which may instead
//! be matched to the boundary.

use mwmatching::{Matching, SENTINEL};

/// Largest defect count solved by exhaustive search.
pub const EXACT_LIMIT: usize = 20;

/// Cost used for a missing boundary.
pub const UNREACHABLE: u32 = 1 << 20;

/// `pair[i] = Some(j)` for a defect pair, `None` for a boundary match.
pub type Pairing = Vec<Option<usize>>;

pub fn total_weight(dist: &[Vec<u32>], boundary: &[u32], pairing: &Pairing) -> u64 {
    let mut w = 0u64;
    for (i, p) in pairing.iter().enumerate() {
        match *p {
            Some(j) if j > i => w += u64::from(dist[i][j]),
            Some(_) => {}
            None => w += u64::from(boundary[i]),
        }
    }
    w
}

/// Exact search over subsets. The lowest unmatched defect is paired with
/// the boundary first, then with each higher defect in order; the first
/// minimum found wins.
pub fn match_exact(dist: &[Vec<u32>], boundary: &[u32]) -> Pairing {
    let m = boundary.len();
    assert!(m <= EXACT_LIMIT, "exact matching limited to {EXACT_LIMIT} defects");
    let full = (1usize << m) - 1;
    let mut best = vec![u64::MAX; 1 << m];
    let mut choice = vec![usize::MAX; 1 << m];
    best[full] = 0;
    for mask in (0..full).rev() {
        let i = (!mask).trailing_zeros() as usize;
        let with_i = mask | 1 << i;
        let mut b = best[with_i].saturating_add(u64::from(boundary[i]));
        let mut c = i;
        for j in i + 1..m {
            if mask & 1 << j == 0 {
                let w = best[with_i | 1 << j].saturating_add(u64::from(dist[i][j]));
                if w < b {
                    b = w;
                    c = j;
                }
            }
        }
        best[mask] = b;
        choice[mask] = c;
    }
    let mut out = vec![None; m];
    let mut mask = 0usize;
    while mask != full {
        let i = (!mask).trailing_zeros() as usize;
        let j = choice[mask];
        if j == i {
            mask |= 1 << i;
        } else {
            out[i] = Some(j);
            out[j] = Some(i);
            mask |= 1 << i | 1 << j;
        }
    }
    out
}

/// Blossom matching on the defects plus one boundary copy per defect.
pub fn match_blossom(dist: &[Vec<u32>], boundary: &[u32]) -> Pairing {
    let m = boundary.len();
    let cap = dist.iter().flatten().chain(boundary).copied().max().unwrap_or(0).min(UNREACHABLE) as i32 + 1;
    let mut edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            edges.push((i, j, cap - dist[i][j].min(UNREACHABLE) as i32));
            edges.push((m + i, m + j, cap));
        }
        edges.push((i, m + i, cap - boundary[i].min(UNREACHABLE) as i32));
    }
    let mate = Matching::new(edges).max_cardinality().solve();
    (0..m)
        .map(|i| match mate.get(i).copied() {
            Some(j) if j < m && j != SENTINEL => Some(j),
            _ => None,
        })
        .collect()
}

pub fn match_defects(dist: &[Vec<u32>], boundary: &[u32]) -> Pairing {
    if boundary.len() <= EXACT_LIMIT {
        match_exact(dist, boundary)
    } else {
        match_blossom(dist, boundary)
    }
}
