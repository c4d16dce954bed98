use std::collections::HashMap;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use surface_deform::deform::{EngineConfig, LoggedOp, Machine};
use surface_deform::oracle::DenseState;
use surface_deform::{Color, LatticeSpec, Letter, PauliOperator, Site, StringPath, TableauState};

use crate::common::{recording, Checks, Verdict};

const LABELS: [&str; 4] = ["zero", "one", "plus", "minus"];
const TOL: f64 = 1e-9;


/// Dense register fed from a machine's log, entry by entry.
struct Replay {
    dense: DenseState,
    seen: usize,
}

impl Replay {
    fn new(n: usize) -> Self {
        Self { dense: DenseState::zero(n).unwrap(), seen: 0 }
    }

    /// Err if a recorded outcome had zero probability.
    fn catch_up(&mut self, log: &[LoggedOp]) -> Result<(), String> {
        for entry in &log[self.seen..] {
            match entry {
                LoggedOp::Measure { op, outcome } => {
                    let plus = self.dense.probability_plus(op).unwrap();
                    let p = if *outcome > 0 { plus } else { 1.0 - plus };
                    if p < TOL {
                        return Err(format!("outcome {outcome} of {op} has probability {p}"));
                    }
                    self.dense.project(op, *outcome).unwrap();
                }
                LoggedOp::Apply { op } => self.dense.apply(op).unwrap(),
            }
        }
        self.seen = log.len();
        Ok(())
    }
}

fn masks(p: &PauliOperator) -> (usize, usize) {
    (0..p.n()).fold((0, 0), |(x, z), q| match p.letter(q) {
        Letter::I => (x, z),
        Letter::X => (x | 1 << q, z),
        Letter::Z => (x, z | 1 << q),
        Letter::Y => (x | 1 << q, z | 1 << q),
    })
}

fn i_pow(k: u32) -> Complex64 {
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)]
        [(k % 4) as usize]
}

fn walsh_hadamard(v: &mut [Complex64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Largest deviation over all `4^n` Pauli expectations. The tableau
/// predicts `±1` on its stabilizer group (enumerated with signs) and `0`
/// everywhere else; the dense side computes every `⟨X^x Z^z⟩` through
/// one Walsh-Hadamard transform per X pattern.
fn max_deviation(state: &TableauState, dense: &DenseState) -> f64 {
    let n = state.n();
    let gens = state.stabilizers();
    assert_eq!(gens.len(), n, "tableau is not a pure state");
    let mut group: HashMap<usize, Vec<(usize, u8)>> = HashMap::new();
    let mut acc = PauliOperator::identity(n);
    group.entry(0).or_default().push((0, 0));
    for g in 1usize..1 << n {
        acc.mul_assign_unchecked(&gens[g.trailing_zeros() as usize]);
        let (x, z) = masks(&acc);
        group.entry(x).or_default().push((z, acc.phase()));
    }
    let amps = dense.amplitudes();
    let mut worst: f64 = 0.0;
    let mut row = vec![Complex64::new(0.0, 0.0); amps.len()];
    for x in 0..amps.len() {
        for (i, r) in row.iter_mut().enumerate() {
            *r = amps[i ^ x].conj() * amps[i];
        }
        walsh_hadamard(&mut row);
        let fixed = group.get(&x).map(Vec::as_slice).unwrap_or(&[]);
        let mut hit = vec![false; amps.len()];
        for &(z, phase) in fixed {
            // operator = i^phase ⊗ letters, and Y = iXZ per qubit
            let v = i_pow(u32::from(phase) + (x & z).count_ones()) * row[z];
            worst = worst.max((v - 1.0).norm());
            hit[z] = true;
        }
        for (z, r) in row.iter().enumerate() {
            if !hit[z] {
                worst = worst.max(r.norm());
            }
        }
    }
    worst
}

/// Two sequential measurements with random first outcome, sampled from
/// the tableau and compared with dense Born probabilities.
fn chi_square(m: &Machine, dense: &DenseState, rng: &mut ChaCha8Rng, shots: usize) -> Result<(f64, usize), String> {
    let state = m.state();
    let n = state.n();
    let mut candidates: Vec<PauliOperator> = Vec::new();
    for &site in &m.code().layout().active {
        let s = m.code().qubit(site).unwrap();
        for l in [Letter::X, Letter::Y, Letter::Z] {
            candidates.push(PauliOperator::single(n, s, l));
        }
    }
    for q in m.frame().qubits() {
        candidates.push(q.x.clone());
        candidates.push(q.z.clone());
    }
    candidates.shuffle(rng);
    let first = candidates
        .iter()
        .find(|p| state.expectation(p).unwrap().is_none())
        .ok_or("no random measurement available")?
        .clone();
    let second = candidates.iter().find(|p| **p != first).unwrap().clone();

    let mut probs = [0.0; 4];
    for (i, o1) in [1i8, -1].into_iter().enumerate() {
        let plus = dense.probability_plus(&first).unwrap();
        let p1 = if o1 > 0 { plus } else { 1.0 - plus };
        if p1 < TOL {
            continue;
        }
        let mut after = dense.clone();
        after.project(&first, o1).unwrap();
        let plus2 = after.probability_plus(&second).unwrap();
        probs[2 * i] = p1 * plus2;
        probs[2 * i + 1] = p1 * (1.0 - plus2);
    }
    let mut counts = [0usize; 4];
    for _ in 0..shots {
        let mut t = state.clone();
        let a = t.measure_pauli(&first, rng).unwrap().outcome;
        let b = t.measure_pauli(&second, rng).unwrap().outcome;
        counts[2 * usize::from(a < 0) + usize::from(b < 0)] += 1;
    }
    let mut stat = 0.0;
    let mut cells = 0;
    for (p, &k) in probs.iter().zip(&counts) {
        let expected = p * shots as f64;
        if *p < TOL {
            if k > 0 {
                return Err(format!("{k} shots in a zero-probability cell"));
            }
            continue;
        }
        cells += 1;
        stat += (k as f64 - expected).powi(2) / expected;
    }
    Ok((stat, cells - 1))
}

type Step = Box<dyn Fn(&mut Machine)>;

struct Scenario {
    name: String,
    machine: Machine,
    steps: Vec<Step>,
}

fn cut(path: StringPath) -> Step {
    Box::new(move |m| {
        m.cut(&path).unwrap();
    })
}

fn paste(path: StringPath) -> Step {
    Box::new(move |m| {
        m.paste(&path.sites, path.color).unwrap();
    })
}

fn prepare(label: &'static str) -> Step {
    Box::new(move |m| m.prepare_logical(0, label).unwrap())
}

fn scenarios(rng: &mut ChaCha8Rng) -> Vec<Scenario> {
    let patch = |r, c, seed| recording(&LatticeSpec::standard_patch(r, c), seed, true);
    let light = StringPath::row(Color::Light, 1, 0, 2);
    let dark = StringPath::column(Color::Dark, 1, 0, 2);
    let corner = Site::new(0, 0);
    let mut out = vec![
        Scenario {
            name: "3x3 code state, each logical preparation".into(),
            machine: patch(3, 3, rng.gen()),
            steps: LABELS.iter().map(|&l| prepare(l)).collect(),
        },
        Scenario {
            name: "3x3 light cut, paste, cut".into(),
            machine: patch(3, 3, rng.gen()),
            steps: vec![cut(light.clone()), paste(light.clone()), cut(light.clone())],
        },
        Scenario {
            name: "3x3 dark cut, paste, cut".into(),
            machine: patch(3, 3, rng.gen()),
            steps: vec![cut(dark.clone()), paste(dark.clone()), cut(dark)],
        },
        Scenario {
            name: "3x3 paste, corner deformation, cut".into(),
            machine: patch(3, 3, rng.gen()),
            steps: vec![
                cut(light.clone()),
                paste(light.clone()),
                Box::new(move |m| {
                    m.remove_site(corner, Some(Color::Dark)).unwrap();
                }),
                Box::new(move |m| {
                    m.add_site(corner, Some(Color::Dark)).unwrap();
                }),
                cut(light),
            ],
        },
    ];
    for (r, c) in [(3, 3), (3, 4), (4, 3)] {
        for light_cut in [true, false] {
            let mut m = patch(r, c, rng.gen());
            m.set_config(EngineConfig { correct: false, ..m.config() });
            let path = if light_cut {
                StringPath::row(Color::Light, rng.gen_range(1..r), 0, c - 1)
            } else {
                StringPath::column(Color::Dark, rng.gen_range(1..c), 0, r - 1)
            };
            out.push(Scenario {
                name: format!("{r}x{c} uncorrected {} cut", if light_cut { "light" } else { "dark" }),
                machine: m,
                steps: vec![prepare(LABELS[rng.gen_range(0..4)]), cut(path)],
            });
        }
    }
    out
}

pub fn tableau_matches_dense() -> Verdict {
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let shots = 10_000;
    let (mut states, mut worst, mut largest) = (0, 0.0f64, 0);
    let (mut pooled, mut dofs, mut sampled) = (0.0, 0, 0);
    for mut sc in scenarios(&mut rng) {
        let n = sc.machine.state().n();
        largest = largest.max(n);
        let mut replay = Replay::new(n);
        let mut ok = true;
        for k in 0..=sc.steps.len() {
            if k > 0 {
                (sc.steps[k - 1])(&mut sc.machine);
            }
            if let Err(e) = replay.catch_up(sc.machine.log()) {
                c.check(&format!("{}: {e}", sc.name), false);
                ok = false;
                break;
            }
            worst = worst.max(max_deviation(sc.machine.state(), &replay.dense));
            states += 1;
        }
        if !ok {
            continue;
        }
        match chi_square(&sc.machine, &replay.dense, &mut rng, shots) {
            Ok((stat, dof)) => {
                pooled += stat;
                dofs += dof;
                sampled += 1;
            }
            Err(e) => {
                c.check(&format!("{}: {e}", sc.name), false);
            }
        }
    }
    // one test over all distributions: the sum of independent statistics
    // is chi-square with the summed degrees of freedom
    let critical = ChiSquared::new(dofs as f64).unwrap().inverse_cdf(0.99);
    let mut summary = Checks::default();
    summary.check(
        &format!("{states} states up to {largest} qubits: all 4^n expectations within {worst:.1e}"),
        worst < TOL,
    );
    summary.check(
        &format!(
            "{sampled} sampled outcome distributions ({shots} shots each): chi-square {pooled:.1} < {critical:.1} on {dofs} dof"
        ),
        pooled < critical,
    );
    if !c.ok() {
        return Verdict::Fail(format!("failed: {}", c.failures()));
    }
    summary.verdict()
}
