//! Text and SVG pictures of a lattice.
//!
//! Both views lay sites and plaquettes on one interleaved grid: a site at
//! `(r, c)` sits at cell `(2r+1, 2c+1)`, plaquette `(r, c)` at
//! `(2r+2, 2c+2)`. In text every cell is two characters wide.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::lattice::{Color, Pos, Site, StringPath, SurfaceCode};
use crate::pauli::Letter;

const DARK_FILL: &str = "#4a4a4a";
const LIGHT_FILL: &str = "#e3e3e3";
const DARK_STROKE: &str = "#1f4fbf";
const LIGHT_STROKE: &str = "#c2401f";
const UNIT: i32 = 20;

/// Letter each site carries across the given strings: dark strings act
/// with Z, light strings with X.
fn string_letters(strings: &[StringPath]) -> BTreeMap<Site, Letter> {
    let mut out: BTreeMap<Site, Letter> = BTreeMap::new();
    for s in strings {
        let l = match s.color {
            Color::Dark => Letter::Z,
            Color::Light => Letter::X,
        };
        for site in s.support() {
            let e = out.entry(site).or_insert(Letter::I);
            *e = match (*e, l) {
                (Letter::I, l) => l,
                (a, b) if a == b => Letter::I,
                _ => Letter::Y,
            };
        }
    }
    out.retain(|_, l| *l != Letter::I);
    out
}

/// Text picture. `##` dark plaquette, `..` light, `o` active site, `X`,
/// `Z` or `Y` a site on a string, `x` a removed site prepared in X.
pub fn render_ascii(code: &SurfaceCode, strings: &[StringPath]) -> String {
    let hw = code.hardware();
    let layout = code.layout();
    let letters = string_letters(strings);
    let mut out = String::new();
    let _ = writeln!(out, "# {}x{} n={} k={}", hw.rows, hw.cols, layout.active.len(), code.k());
    for i in 0..=2 * hw.rows {
        let mut line = String::new();
        for j in 0..=2 * hw.cols {
            let cell = match (i % 2, j % 2) {
                (1, 1) => {
                    let s = Site::new((i - 1) / 2, (j - 1) / 2);
                    match letters.get(&s) {
                        Some(Letter::X) => "X ",
                        Some(Letter::Z) => "Z ",
                        Some(_) => "Y ",
                        None if layout.active.contains(&s) => "o ",
                        None if code.x_fixed().contains(&s) => "x ",
                        None => "  ",
                    }
                }
                (0, 0) => {
                    let p = Pos::new(i / 2 - 1, j / 2 - 1);
                    match (layout.present.contains(&p), p.color()) {
                        (false, _) => "  ",
                        (true, Color::Dark) => "##",
                        (true, Color::Light) => "..",
                    }
                }
                _ => "  ",
            };
            line.push_str(cell);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn centre(s: Site) -> (i32, i32) {
    (UNIT * (s.c + 1), UNIT * (s.r + 1))
}

/// SVG picture in integer coordinates, one `UNIT` between sites.
pub fn render_svg(code: &SurfaceCode, strings: &[StringPath]) -> String {
    let hw = code.hardware();
    let layout = code.layout();
    let (w, h) = (UNIT * (hw.cols + 1), UNIT * (hw.rows + 1));
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    for &p in &layout.present {
        let corners = layout.plaquette_sites(p);
        if corners.is_empty() {
            continue;
        }
        // corners in cyclic order: top-left, top-right, bottom-right, bottom-left
        let [a, b, c, d] = p.corners();
        let mut pts: Vec<(i32, i32)> =
            [a, b, d, c].into_iter().filter(|s| corners.contains(s)).map(centre).collect();
        if pts.len() <= 2 {
            // boundary plaquettes bulge outward, away from the lattice
            let (mx, my) = (UNIT * p.c + 3 * UNIT / 2, UNIT * p.r + 3 * UNIT / 2);
            let (sx, sy) = pts.iter().fold((0, 0), |(x, y), &(px, py)| (x + px, y + py));
            let k = pts.len() as i32;
            pts.push((2 * mx - sx / k, 2 * my - sy / k));
        }
        let fill = match p.color() {
            Color::Dark => DARK_FILL,
            Color::Light => LIGHT_FILL,
        };
        let list: Vec<String> = pts.iter().map(|(x, y)| format!("{x},{y}")).collect();
        let _ = writeln!(out, r#"<polygon points="{}" fill="{fill}" stroke="black" stroke-width="1"/>"#, list.join(" "));
    }
    for s in strings {
        let stroke = match s.color {
            Color::Dark => DARK_STROKE,
            Color::Light => LIGHT_STROKE,
        };
        let list: Vec<String> = s.sites.iter().map(|&x| centre(x)).map(|(x, y)| format!("{x},{y}")).collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="4" stroke-linecap="round"/>"#,
            list.join(" ")
        );
    }
    for &s in &layout.active {
        let (x, y) = centre(s);
        let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="3" fill="black"/>"#);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_code, LatticeSpec};

    #[test]
    fn patch_ascii_has_two_chars_per_cell() {
        let code = build_code(&LatticeSpec::standard_patch(3, 3), 9).unwrap();
        let text = render_ascii(&code, &[]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# 3x3 n=9 k=1");
        assert_eq!(lines.len(), 1 + 7);
        assert!(lines.iter().skip(1).all(|l| l.len() <= 14));
        assert_eq!(text.matches('o').count(), 9);
        let dark = code.plaquettes().iter().filter(|p| p.color() == Color::Dark).count();
        assert_eq!(text.matches("##").count(), dark);
    }

    #[test]
    fn crossing_strings_show_y() {
        let code = build_code(&LatticeSpec::standard_patch(3, 3), 9).unwrap();
        let strings = [StringPath::row(Color::Dark, 1, 0, 2), StringPath::column(Color::Light, 1, 0, 2)];
        let text = render_ascii(&code, &strings);
        assert_eq!(text.matches('Y').count(), 1);
        assert_eq!(text.matches('Z').count(), 2);
        assert_eq!(text.matches('X').count(), 2);
    }

    #[test]
    fn svg_is_stable_and_complete() {
        let code = build_code(&LatticeSpec::standard_patch(3, 3), 9).unwrap();
        let a = render_svg(&code, &[]);
        assert_eq!(a, render_svg(&code.clone(), &[]));
        assert_eq!(a.matches("<circle").count(), 9);
        assert_eq!(a.matches("<polygon").count(), code.plaquettes().len());
        assert!(a.ends_with("</svg>\n"));
    }
}
