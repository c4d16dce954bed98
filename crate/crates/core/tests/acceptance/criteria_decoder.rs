use surface_deform::decoder::{build_defect_graph, correction, decode, MemoryExperiment, NoiseModel, Sector, SyndromeHistory};
use surface_deform::{LatticeSpec, Letter, PauliOperator, SurfaceCode, TableauState};

use crate::common::{code, recording, Checks, Verdict};

/// Perfect-measurement correction for `error`, both sectors.
fn correct(exp: &MemoryExperiment, n: usize, error: &PauliOperator) -> PauliOperator {
    let mut total = PauliOperator::identity(n);
    for sector in [Sector::X, Sector::Z] {
        let g = exp.sector(sector);
        let flags: Vec<bool> = (0..n).map(|q| [sector.error(), Letter::Y].contains(&error.letter(q))).collect();
        let mut history = SyndromeHistory::default();
        history.push(g.syndrome(&flags));
        let (_, qubits) = decode(g, &build_defect_graph(g, &history.defects()));
        total.mul_assign_unchecked(&correction(n, sector, &qubits));
    }
    total
}

/// Stabilizer states of the code with logical Z and logical X fixed. A
/// Pauli acts trivially on the code space iff both states are its
/// eigenstates.
fn code_states(spec: &LatticeSpec) -> [TableauState; 2] {
    ["zero", "plus"].map(|label| {
        let mut m = recording(spec, 5, true);
        m.prepare_logical(0, label).unwrap();
        m.state().clone()
    })
}

fn trivial(states: &[TableauState; 2], p: &PauliOperator) -> bool {
    let p = if p.is_hermitian() { p.clone() } else { p.clone().with_phase((p.phase() + 1) % 4) };
    states.iter().all(|s| s.expectation(&p).unwrap().is_some())
}

fn errors(code: &SurfaceCode, weight: usize) -> Vec<PauliOperator> {
    let n = code.n();
    let qubits: Vec<usize> = code.layout().active.iter().map(|&s| code.qubit(s).unwrap()).collect();
    let letters = [Letter::X, Letter::Y, Letter::Z];
    let mut out = Vec::new();
    for (i, &a) in qubits.iter().enumerate() {
        if weight == 1 {
            out.extend(letters.map(|l| PauliOperator::single(n, a, l)));
            continue;
        }
        for &b in &qubits[i + 1..] {
            for la in letters {
                for lb in letters {
                    let mut p = PauliOperator::single(n, a, la);
                    p.set_letter(b, lb);
                    out.push(p);
                }
            }
        }
    }
    out
}

struct Exhaustive {
    weight1: (usize, usize),
    weight2: (usize, usize),
    agree: bool,
    /// Weight-1 and weight-2 errors with equal syndromes whose product
    /// is a nontrivial logical.
    conflicts: usize,
}

fn exhaustive() -> Exhaustive {
    let spec = LatticeSpec::standard_patch(3, 3);
    let code = code(&spec);
    let n = code.n();
    let exp = MemoryExperiment::new(&code).unwrap();
    let states = code_states(&spec);
    let mut agree = true;
    let mut tally = |errs: &[PauliOperator]| {
        let mut ok = 0;
        for e in errs {
            let residual = e.mul(&correct(&exp, n, e)).unwrap();
            let good = trivial(&states, &residual);
            agree &= good == exp.decodes(e);
            ok += usize::from(good);
        }
        (ok, errs.len())
    };
    let (w1, w2) = (errors(&code, 1), errors(&code, 2));
    let weight1 = tally(&w1);
    let weight2 = tally(&w2);
    let gens = code.group().generators();
    let mut conflicts = 0;
    for e in &w1 {
        for f in &w2 {
            let prod = e.mul(f).unwrap();
            if gens.iter().all(|g| !g.anticommutes_unchecked(&prod)) && !trivial(&states, &prod) {
                conflicts += 1;
            }
        }
    }
    Exhaustive { weight1, weight2, agree, conflicts }
}

pub fn decoder_suite() -> Verdict {
    let mut c = Checks::default();
    let ex = exhaustive();
    c.check(&format!("d=3: {}/{} weight-1 errors decode", ex.weight1.0, ex.weight1.1), ex.weight1.0 == ex.weight1.1);
    c.check("residual test agrees with the library on every error", ex.agree);
    let w2_fail = ex.weight2.1 - ex.weight2.0;

    let model = NoiseModel::uniform(0.003);
    let rows: Vec<_> = [3, 5, 7]
        .map(|d: i32| {
            let exp = MemoryExperiment::new(&code(&LatticeSpec::standard_patch(d, d))).unwrap();
            exp.monte_carlo(&model, d as usize, 100_000, 7, d as usize)
        })
        .to_vec();
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let sigma = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        let z = (a.rate - b.rate) / sigma;
        c.check(
            &format!("d={} {}/{} > d={} {}/{} by {z:.1} sigma", a.distance, a.failures, a.trials, b.distance, b.failures, b.trials),
            a.rate > b.rate && z >= 3.0,
        );
    }
    if !c.ok() {
        return Verdict::Fail(format!("failed: {}", c.failures()));
    }
    // A weight-1 error e and a weight-2 error f with the same syndrome and
    // e f logical get the same correction, so one of them must fail.
    if ex.conflicts > 0 && w2_fail > 0 {
        return Verdict::ExpectedFail {
            reason: format!(
                "distance 3 corrects one error: {} weight-1/weight-2 pairs share a syndrome and differ by a logical; {w2_fail}/{} weight-2 errors fail",
                ex.conflicts, ex.weight2.1
            ),
            detail: c.summary(),
        };
    }
    let mut all = Checks::default();
    all.check(&format!("{}/{} weight-2 errors decode", ex.weight2.0, ex.weight2.1), w2_fail == 0);
    if all.ok() { Verdict::Pass(c.summary()) } else { Verdict::Fail(format!("{}; {}", c.summary(), all.failures())) }
}
