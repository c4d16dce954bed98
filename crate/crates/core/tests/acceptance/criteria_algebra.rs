use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use surface_deform::oracle::{brute_force_distance, brute_force_logical_pairs};
use surface_deform::{LatticeSpec, Letter, PauliOperator, StabilizerGroup};

use crate::common::{code, Checks, Verdict};

/// Symplectic mask: bit `q` for X on `q`, bit `n + q` for Z.
fn mask(p: &PauliOperator) -> u64 {
    let n = p.n();
    (0..n).fold(0, |m, q| match p.letter(q) {
        Letter::I => m,
        Letter::X => m | 1 << q,
        Letter::Z => m | 1 << (n + q),
        Letter::Y => m | 1 << q | 1 << (n + q),
    })
}

fn rank(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

fn anticommute(a: u64, b: u64, n: usize) -> bool {
    let lo = (1u64 << n) - 1;
    ((a & lo & (b >> n)).count_ones() + ((a >> n) & b & lo).count_ones()) % 2 == 1
}

fn random_group(rng: &mut ChaCha8Rng) -> StabilizerGroup {
    let n = rng.gen_range(1..=10);
    let r = rng.gen_range(0..n);
    let mut gens: Vec<PauliOperator> = Vec::new();
    let mut masks: Vec<u64> = Vec::new();
    let letters = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    while gens.len() < r {
        let mut p = PauliOperator::identity(n);
        for q in 0..n {
            p.set_letter(q, letters[rng.gen_range(0..4)]);
        }
        if rng.gen() {
            p = p.negated();
        }
        let m = mask(&p);
        if masks.iter().any(|&g| anticommute(g, m, n)) {
            continue;
        }
        masks.push(m);
        if rank(&masks) < masks.len() {
            masks.pop();
            continue;
        }
        gens.push(p);
    }
    StabilizerGroup::new(n, gens).unwrap()
}

pub fn logical_basis_relations() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut relations, mut counts, mut brute, mut brute_checked) = (true, true, true, 0);
    for _ in 0..50 {
        let g = random_group(&mut rng);
        let n = g.n();
        let basis = g.logical_basis().unwrap();
        let k = n - g.generators().len();
        counts &= basis.k() == k;
        let gm: Vec<u64> = g.generators().iter().map(mask).collect();
        let xs: Vec<u64> = basis.xops.iter().map(mask).collect();
        let zs: Vec<u64> = basis.zops.iter().map(mask).collect();
        for i in 0..k {
            relations &= gm.iter().all(|&s| !anticommute(s, xs[i], n) && !anticommute(s, zs[i], n));
            for j in 0..k {
                relations &= !anticommute(xs[i], xs[j], n)
                    && !anticommute(zs[i], zs[j], n)
                    && anticommute(xs[i], zs[j], n) == (i == j);
            }
        }
        let mut all = gm.clone();
        all.extend(&xs);
        all.extend(&zs);
        relations &= rank(&all) == n + k;
        if n <= 8 {
            brute &= brute_force_logical_pairs(&g, &basis).unwrap();
            brute_checked += 1;
        }
    }
    let mut c = Checks::default();
    c.check("50 random groups: k = n - rank", counts);
    c.check("commutation relations and independence from the group", relations);
    c.check(&format!("exhaustive cross-check on {brute_checked} groups with n <= 8"), brute && brute_checked > 0);
    c.verdict()
}

/// Minimum weight of a logical of one type in a CSS code: an `X` on
/// `e` that commutes with every Z check and is not a product of X checks.
fn css_distance(g: &StabilizerGroup) -> usize {
    let n = g.n();
    let mut best = usize::MAX;
    for (letter, other) in [(Letter::X, Letter::Z), (Letter::Z, Letter::X)] {
        let part = |p: &PauliOperator, l: Letter| (0..n).filter(|&q| p.letter(q) == l).fold(0u64, |m, q| m | 1 << q);
        let same: Vec<u64> = g.generators().iter().map(|p| part(p, letter)).filter(|&m| m != 0).collect();
        let checks: Vec<u64> = g.generators().iter().map(|p| part(p, other)).filter(|&m| m != 0).collect();
        let base = rank(&same);
        'weights: for w in 1..=n.min(best) {
            // all n-bit masks of weight w in increasing order
            let mut e: u64 = (1 << w) - 1;
            while e < 1 << n {
                if checks.iter().all(|&c| (c & e).count_ones().is_multiple_of(2)) {
                    let mut rows = same.clone();
                    rows.push(e);
                    if rank(&rows) > base {
                        best = best.min(w);
                        break 'weights;
                    }
                }
                let c = e & e.wrapping_neg();
                let r = e + c;
                e = (((r ^ e) >> 2) / c) | r;
            }
        }
    }
    best
}

pub fn patch_distance() -> Verdict {
    let mut c = Checks::default();
    let small = code(&LatticeSpec::standard_patch(3, 3));
    c.check("3x3: k = 1", small.k() == 1);
    c.check("3x3: distance 3 by exhaustive Pauli search", brute_force_distance(small.group()).unwrap() == 3);
    let d = |r, cl| css_distance(code(&LatticeSpec::standard_patch(r, cl)).group());
    let (d33, d35, d53, d55) = (d(3, 3), d(3, 5), d(5, 3), d(5, 5));
    c.check(&format!("3x3 {d33} < 5x5 {d55}"), d33 == 3 && d55 > d33);
    c.check(&format!("5x5 exceeds 3x5 ({d35}) and 5x3 ({d53})"), d55 > d35 && d55 > d53);
    let big = code(&LatticeSpec::standard_patch(5, 5));
    c.check("library distance agrees on 5x5", big.group().distance(big.n()).unwrap() == d55);
    c.verdict()
}
