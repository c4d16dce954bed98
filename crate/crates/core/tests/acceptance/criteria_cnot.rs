use surface_deform::deform::{cnot_layout, CnotReport, InitState, Machine, ONE_Z_SIGN};
use surface_deform::oracle::{dense, ChpTableau};
use surface_deform::PauliOperator;

use crate::common::{recording, Checks, Verdict};

struct Braided {
    machine: Machine,
    report: CnotReport,
    data: [usize; 2],
}

fn braid(scale: i32, a: bool, b: bool, seed: u64) -> Braided {
    let (spec, s, t) = cnot_layout(scale);
    let mut m = recording(&spec, seed, true);
    let state = |bit: bool| if bit { InitState::One } else { InitState::Zero };
    let (q1, _) = m.macro_init_qubit(s, state(a)).unwrap();
    let (q2, _) = m.macro_init_qubit(t, state(b)).unwrap();
    let report = m.macro_cnot(s.id, t.id).unwrap();
    Braided { machine: m, report, data: [q1, q2] }
}

fn reference_z(m: &Machine, id: usize) -> PauliOperator {
    m.frame().reference().iter().find(|q| q.id == id).unwrap().z.clone()
}

/// Logical bit of a ±1 Z value.
fn bit(v: Option<i8>) -> Option<bool> {
    v.map(|v| v == ONE_Z_SIGN)
}

/// Rows of `a` and `d` on the data qubits: `[a(q1), a(q2), d(q1), d(q2)]`.
fn data_rows(b: &Braided) -> Option<[Vec<u8>; 4]> {
    let [q1, q2] = b.data;
    let m = &b.report.matrices;
    Some([m.a_row(q1, &b.data)?, m.a_row(q2, &b.data)?, m.d_row(q1, &b.data)?, m.d_row(q2, &b.data)?])
}

pub fn braided_cnot() -> Verdict {
    let mut c = Checks::default();
    // X1 -> X1 X2, X2 -> X2, Z1 -> Z1, Z2 -> Z1 Z2
    let physical = [vec![1, 1], vec![0, 1], vec![1, 0], vec![1, 1]];
    // X1 -> X1, X2 -> X1 X2, Z1 -> Z1 Z2, Z2 -> Z2
    let printed = [vec![1, 0], vec![1, 1], vec![1, 1], vec![0, 1]];
    let mut printed_seen = false;
    for scale in [1, 2] {
        let mut frame_ok = true;
        let mut table_ok = true;
        for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
            let run = braid(scale, a, b, 40 + u64::from(a) * 2 + u64::from(b));
            let rows = data_rows(&run);
            frame_ok &= run.report.matrices.mixing_free() && rows.as_ref() == Some(&physical);
            printed_seen |= rows.as_ref() == Some(&printed);
            let [q1, q2] = run.data;
            let (z1, z2) = (reference_z(&run.machine, q1), reference_z(&run.machine, q2));
            let want = (Some(a), Some(a ^ b));
            let replay = ChpTableau::replay(run.machine.code().n(), run.machine.log()).unwrap();
            let oracle = (bit(replay.expectation(&z1).unwrap()), bit(replay.expectation(&z2).unwrap()));
            table_ok &= oracle == want;
            if scale == 1 {
                let st = run.machine.state();
                let engine = (bit(st.expectation(&z1).unwrap()), bit(st.expectation(&z2).unwrap()));
                table_ok &= engine == want;
            }
        }
        c.check(&format!("scale {scale}: frame is CNOT 1->2 with b = c = 0"), frame_ok);
        let how = if scale == 1 { "engine and independent tableau" } else { "independent tableau" };
        c.check(&format!("scale {scale}: truth table on 4 inputs ({how})"), table_ok);
    }
    let (spec, _, _) = cnot_layout(1);
    let minimal = (spec.rows * spec.cols) as usize;
    let dense_fits = minimal <= dense::MAX_QUBITS;
    if !c.ok() {
        return Verdict::Fail(format!("failed: {}", c.failures()));
    }
    let mut reasons = Vec::new();
    if !printed_seen {
        reasons.push("the printed frame is the transpose of the CNOT 1->2 that the braid performs".to_string());
    }
    if !dense_fits {
        reasons.push(format!(
            "dense check needs <= {} qubits, the smallest braid geometry has {minimal}",
            dense::MAX_QUBITS
        ));
    }
    if reasons.is_empty() {
        return Verdict::Pass(c.summary());
    }
    Verdict::ExpectedFail { reason: reasons.join("; "), detail: c.summary() }
}
