use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use surface_deform::deform::{cnot_layout, cnot_split_spec};
use surface_deform::doc::{emit_schedule, parse_schedule, run, Overrides};
use surface_deform::render::{render_ascii, render_svg};
use surface_deform::{build_code, Color, LatticeSpec, StringPath};

use crate::common::{Checks, Verdict};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn documents() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = fs::read_dir(fixtures())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json") && !p.to_string_lossy().contains(".transcript"))
        .collect();
    out.sort();
    out
}

/// Runs the CLI into a fresh directory and returns the transcript bytes.
fn cli_transcript(doc: &Path, tag: &str) -> Vec<u8> {
    let out = std::env::temp_dir().join(format!("surface-deform-acceptance-{}-{tag}", std::process::id()));
    let _ = fs::remove_dir_all(&out);
    let status = Command::new(env!("CARGO_BIN_EXE_surface-deform"))
        .arg("run")
        .arg(doc)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let bytes = fs::read(out.join("transcript.json")).unwrap();
    fs::remove_dir_all(&out).unwrap();
    bytes
}

pub fn determinism_and_formats() -> Verdict {
    let mut c = Checks::default();
    let docs = documents();

    let (mut identical, mut stored, mut cli, mut reseeded) = (true, true, true, false);
    let mut noisy = 0;
    for (i, path) in docs.iter().enumerate() {
        let doc = parse_schedule(&read(path)).unwrap();
        let a = run(&doc, Overrides::default()).unwrap().transcript.to_json();
        let b = run(&doc, Overrides::default()).unwrap().transcript.to_json();
        identical &= a == b;
        let golden = path.with_extension("transcript.json");
        stored &= a == read(&golden);
        let (x, y) = (cli_transcript(path, &format!("{i}a")), cli_transcript(path, &format!("{i}b")));
        cli &= x == y && x == a.as_bytes();
        if doc.noise.is_some() {
            noisy += 1;
            let other = run(&doc, Overrides { seed: Some(doc.seed + 1), noise: None }).unwrap().transcript.to_json();
            reseeded |= other != a;
        }
    }
    c.check(&format!("{} schedules ({noisy} noisy): repeated runs are byte-identical", docs.len()), identical);
    c.check("transcripts equal the stored copies", stored);
    c.check("CLI transcripts are byte-identical to the library's", cli);
    c.check("a different seed changes the noisy transcript", noisy > 0 && reseeded);

    let mut round_trip = true;
    for path in &docs {
        let text = read(path);
        let doc = parse_schedule(&text).unwrap();
        let emitted = emit_schedule(&doc);
        round_trip &= emitted == text && parse_schedule(&emitted).unwrap() == doc;
    }
    c.check(&format!("parse/emit round-trip on {} fixtures", docs.len()), round_trip && !docs.is_empty());

    let patch = build_code(&LatticeSpec::standard_patch(3, 3), 9).unwrap();
    let strings = [StringPath::column(Color::Dark, 1, 0, 2), StringPath::row(Color::Light, 1, 0, 2)];
    let (spec, s, t) = cnot_layout(1);
    let split = cnot_split_spec(&spec.with_hole(s).with_hole(t), s.id, t.id).unwrap();
    let split = build_code(&split, (split.rows * split.cols) as usize).unwrap();
    let renders = [
        ("patch3.txt", render_ascii(&patch, &strings)),
        ("patch3.svg", render_svg(&patch, &strings)),
        ("cnot_split.txt", render_ascii(&split, &[])),
    ];
    let mut stable = true;
    for (name, text) in &renders {
        stable &= *text == read(&fixtures().join(name));
    }
    stable &= render_svg(&patch, &strings) == renders[1].1;
    c.check(&format!("{} renders are byte-stable", renders.len()), stable);
    c.verdict()
}
