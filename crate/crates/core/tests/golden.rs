//! Fixture round-trips and byte-stable outputs. Run with `BLESS=1` to
//! rewrite the stored files.

use std::fs;
use std::path::PathBuf;

use surface_deform::deform::{cnot_layout, cnot_split_spec};
use surface_deform::doc::{emit_schedule, parse_schedule, run, Overrides};
use surface_deform::render::{render_ascii, render_svg};
use surface_deform::{build_code, Color, LatticeSpec, StringPath, SurfaceCode};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn golden(name: &str, actual: &str) {
    let path = fixture(name);
    if std::env::var_os("BLESS").is_some() {
        fs::write(&path, actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{} differs from the stored copy", path.display());
}

fn documents() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = fs::read_dir(fixture(""))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json") && !p.to_string_lossy().contains(".transcript"))
        .collect();
    out.sort();
    out
}

#[test]
fn fixtures_round_trip() {
    let docs = documents();
    assert!(!docs.is_empty());
    for p in docs {
        let text = fs::read_to_string(&p).unwrap();
        let doc = parse_schedule(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        let emitted = emit_schedule(&doc);
        assert_eq!(parse_schedule(&emitted).unwrap(), doc);
        assert_eq!(emitted, text, "{} is not in normal form", p.display());
    }
}

#[test]
fn cnot_demo_transcript_is_stable() {
    let doc = parse_schedule(&fs::read_to_string(fixture("cnot_demo.json")).unwrap()).unwrap();
    let a = run(&doc, Overrides::default()).unwrap();
    let b = run(&doc, Overrides::default()).unwrap();
    assert_eq!(a.transcript.to_json(), b.transcript.to_json());
    golden("cnot_demo.transcript.json", &a.transcript.to_json());
    // source stays |1⟩, target flips from |1⟩ to |0⟩
    let reads: Vec<i8> = a.summary.readouts.iter().map(|r| r.1).collect();
    assert_eq!(reads, vec![-1, 1]);
}

#[test]
fn noisy_transcript_is_stable() {
    let doc = parse_schedule(&fs::read_to_string(fixture("patch_noisy.json")).unwrap()).unwrap();
    let a = run(&doc, Overrides::default()).unwrap();
    assert!(a.summary.defects > 0);
    golden("patch_noisy.transcript.json", &a.transcript.to_json());
    // a prepared |0⟩ survives the noise: both cuts read +1
    let outs: Vec<i8> = a.summary.logical_outcomes.iter().map(|o| o.2).collect();
    assert_eq!(outs, vec![1, 1]);
}

fn patch_strings(code: &SurfaceCode) -> Vec<StringPath> {
    let strings = vec![StringPath::column(Color::Dark, 1, 0, 2), StringPath::row(Color::Light, 1, 0, 2)];
    let n = code.n();
    for s in &strings {
        let qs: Vec<usize> = s.support().into_iter().map(|x| code.qubit(x).unwrap()).collect();
        let op = surface_deform::PauliOperator::uniform(n, qs, s.color.string_letter());
        let g = code.group();
        assert!(g.in_normalizer(&op).unwrap() && !g.in_group(&op).unwrap());
    }
    strings
}

#[test]
fn patch_renders_are_stable() {
    let code = build_code(&LatticeSpec::standard_patch(3, 3), 9).unwrap();
    let strings = patch_strings(&code);
    golden("patch3.txt", &render_ascii(&code, &strings));
    golden("patch3.svg", &render_svg(&code, &strings));
}

#[test]
fn cnot_split_render_is_stable() {
    let (spec, s, t) = cnot_layout(1);
    let spec = spec.with_hole(s).with_hole(t);
    let split = cnot_split_spec(&spec, s.id, t.id).unwrap();
    assert_eq!(split.holes.len(), 4);
    let code = build_code(&split, (split.rows * split.cols) as usize).unwrap();
    golden("cnot_split.txt", &render_ascii(&code, &[]));
}

#[test]
fn empty_lattice_renders_a_frame() {
    let code = build_code(&LatticeSpec::standard_patch(1, 1), 1).unwrap();
    let text = render_ascii(&code, &[]);
    assert_eq!(text.lines().count(), 4);
    assert_eq!(render_svg(&code, &[]).matches("<circle").count(), 1);
}
