use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use surface_deform::deform::{EngineConfig, Machine};
use surface_deform::lattice::{HoleSpec, Sides};
use surface_deform::{Color, LatticeSpec, PauliOperator, Site, StringPath};

use crate::common::{recording, Checks, Verdict};

const LABELS: [&str; 4] = ["zero", "one", "plus", "minus"];

fn class_bits(v: &surface_deform::gf2::BitVec) -> Vec<u8> {
    (0..v.len()).map(|i| u8::from(v.get(i))).collect()
}

fn two_holes() -> LatticeSpec {
    let hole = |id, left| HoleSpec { id, top: 3, left, height: 1, width: 1, sides: Sides::uniform(Color::Dark) };
    LatticeSpec::rectangle(7, 9, Sides::uniform(Color::Dark)).with_hole(hole(0, 2)).with_hole(hole(1, 6))
}

/// Removes random sites of single-colored borders, then returns them in
/// reverse order with the same colors.
/// `None` if no site could be removed or the shape was not restored.
fn smooth_round_trip(m: &mut Machine, rng: &mut ChaCha8Rng) -> Option<usize> {
    let original = m.code().layout().clone();
    let mut removed = Vec::new();
    for _ in 0..6 {
        let layout = m.code().layout();
        let border: Vec<(Site, Color)> = layout
            .active
            .iter()
            .filter_map(|&s| {
                let missing = layout.missing_colors(s);
                (missing.len() == 1).then(|| (s, *missing.iter().next().unwrap()))
            })
            .collect();
        let &(site, color) = border.choose(rng)?;
        if m.remove_site(site, Some(color)).is_ok() {
            removed.push((site, color));
        }
    }
    for &(site, color) in removed.iter().rev() {
        m.add_site(site, Some(color)).ok()?;
    }
    (!removed.is_empty() && *m.code().layout() == original).then_some(removed.len())
}

pub fn smooth_round_trips() -> Verdict {
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let specs = [LatticeSpec::standard_patch(4, 5), two_holes()];
    let (mut done, mut attempts, mut moved) = (0, 0, 0);
    let (mut mixing, mut homology, mut strings) = (true, true, true);
    while done < 20 && attempts < 200 {
        attempts += 1;
        let spec = &specs[done % 2];
        let mut m = recording(spec, rng.gen(), true);
        for id in m.frame().ids() {
            m.prepare_logical(id, LABELS[rng.gen_range(0..4)]).unwrap();
        }
        if smooth_round_trip(&mut m, &mut rng).is_none() {
            continue;
        }
        done += 1;
        let code = m.code();
        let f = m.frame().matrices();
        mixing &= f.mixing_free();
        for (i, q) in m.frame().qubits().iter().enumerate() {
            let x = class_bits(&code.operator_class(&q.x).unwrap());
            let z = class_bits(&code.operator_class(&q.z).unwrap());
            homology &= x == [f.a[i].clone(), f.b[i].clone()].concat();
            homology &= z == [f.c[i].clone(), f.d[i].clone()].concat();
            let r = &m.frame().reference()[i];
            moved += usize::from(q.x != r.x || q.z != r.z);
        }
        if done % 2 == 1 {
            // the patch's geometric strings keep their classes
            let light = code.homology_class(&StringPath::row(Color::Light, 1, 0, 4)).unwrap();
            let dark = code.homology_class(&StringPath::column(Color::Dark, 1, 0, 3)).unwrap();
            let xr = code.operator_class(&m.frame().reference()[0].x).unwrap();
            let zr = code.operator_class(&m.frame().reference()[0].z).unwrap();
            strings &= light == xr && dark == zr;
        }
    }
    c.check(&format!("{done} of {attempts} random sequences returned to the original shape"), done == 20);
    c.check("b = c = 0", mixing);
    c.check(&format!("operator classes match a/d ({moved} representatives moved)"), homology && moved > 0);
    c.check("string classes match the reference", strings);
    c.verdict()
}

fn patch(seed: u64) -> Machine {
    recording(&LatticeSpec::standard_patch(3, 3), seed, true)
}

pub fn initialized_read_plus_one() -> Verdict {
    let mut c = Checks::default();
    let runs = 100u64;
    let light = StringPath::row(Color::Light, 1, 0, 2);
    let dark = StringPath::column(Color::Dark, 1, 0, 2);
    let read = |r: surface_deform::deform::StepReport| r.logical.first().map(|l| l.outcome);
    let mut paste_ok = 0;
    let mut puncture_ok = 0;
    let mut smooth_ok = 0;
    for seed in 0..runs {
        let path = if seed % 2 == 0 { &light } else { &dark };
        let mut m = patch(seed);
        m.cut(path).unwrap();
        m.paste(&path.sites, path.color).unwrap();
        paste_ok += usize::from(read(m.cut(path).unwrap()) == Some(1));

        let color = if seed % 2 == 0 { Color::Dark } else { Color::Light };
        let mut m = recording(&LatticeSpec::standard_patch(5, 5), seed, true);
        m.prepare_logical(0, LABELS[(seed % 4) as usize]).unwrap();
        m.puncture(&[Site::new(2, 2)], color).unwrap();
        puncture_ok += usize::from(read(m.fill_region(&[Site::new(2, 2)]).unwrap()) == Some(1));

        let mut m = patch(seed);
        m.cut(&light).unwrap();
        m.paste(&light.sites, Color::Light).unwrap();
        let corner = Site::new(0, 0);
        m.remove_site(corner, Some(Color::Dark)).unwrap();
        m.add_site(corner, Some(Color::Dark)).unwrap();
        smooth_ok += usize::from(read(m.cut(&light).unwrap()) == Some(1));
    }
    c.check(&format!("paste then cut: {paste_ok}/{runs}"), paste_ok == runs as usize);
    c.check(&format!("puncture then fill: {puncture_ok}/{runs}"), puncture_ok == runs as usize);
    c.check(&format!("paste, smooth deformation, cut: {smooth_ok}/{runs}"), smooth_ok == runs as usize);
    c.verdict()
}

/// Product of the signs of `color` generators lying strictly on one
/// side of the cut, read from the post-cut state.
fn side_parity(m: &Machine, color: Color, side: impl Fn(Site) -> bool) -> i8 {
    let code = m.code();
    let mut sign = 1;
    for &p in code.plaquettes() {
        let corners = code.layout().plaquette_sites(p);
        if p.color() != color || !corners.iter().all(|&s| side(s)) {
            continue;
        }
        let op: PauliOperator = code.plaquette_operator(p).unwrap();
        sign *= m.state().expectation(&op).unwrap().expect("generator is fixed");
    }
    sign
}

pub fn cut_outcome_parity() -> Verdict {
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut agree, mut violated, total) = (0, 0, 200);
    for _ in 0..total {
        let (rows, cols) = (rng.gen_range(3..=6), rng.gen_range(3..=6));
        let mut m = recording(&LatticeSpec::standard_patch(rows, cols), rng.gen(), true);
        m.prepare_logical(0, LABELS[rng.gen_range(0..4)]).unwrap();
        m.set_config(EngineConfig { correct: false, ..m.config() });
        let (path, parity) = if rng.gen() {
            let r = rng.gen_range(1..rows);
            let path = StringPath::row(Color::Light, r, 0, cols - 1);
            let out = m.cut(&path).unwrap();
            (out, side_parity(&m, Color::Dark, |s| s.r < r))
        } else {
            let cl = rng.gen_range(1..cols);
            let path = StringPath::column(Color::Dark, cl, 0, rows - 1);
            let out = m.cut(&path).unwrap();
            (out, side_parity(&m, Color::Light, |s| s.c < cl))
        };
        let outcome = path.logical.first().map(|l| l.outcome);
        agree += usize::from(outcome == Some(parity));
        violated += usize::from(parity < 0);
    }
    c.check(&format!("{agree}/{total} outcomes equal the side parity ({violated} odd)"), agree == total && violated > 0);
    c.verdict()
}
