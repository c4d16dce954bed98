//! Geometric deformation steps. Each step computes a target code and hands
//! it to the measurement engine.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::engine::{Machine, StepReport};
use crate::error::{Error, Result};
use crate::gf2::{left_nullspace, BitVec};
use crate::lattice::{Color, HoleSpec, LatticeSpec, Layout, Pos, Site, StringPath, SurfaceCode};
use crate::pauli::{Letter, PauliOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Top,
    Right,
    Bottom,
    Left,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Top, Side::Right, Side::Bottom, Side::Left];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    Up,
    Down,
    Left,
    Right,
}

impl Dir {
    pub fn delta(self) -> (i32, i32) {
        match self {
            Dir::Up => (-1, 0),
            Dir::Down => (1, 0),
            Dir::Left => (0, -1),
            Dir::Right => (0, 1),
        }
    }
}

/// A border addressed by side: of the outer rectangle or of a hole.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BorderRef {
    Outer(Side),
    Hole(usize, Side),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SmoothStep {
    Remove(Site, Option<Color>),
    Add(Site, Option<Color>),
}

fn side_color(sides: &mut crate::lattice::Sides, side: Side) -> &mut Color {
    match side {
        Side::Top => &mut sides.top,
        Side::Right => &mut sides.right,
        Side::Bottom => &mut sides.bottom,
        Side::Left => &mut sides.left,
    }
}

impl Machine {
    fn regular_spec(&self) -> Result<LatticeSpec> {
        self.code().spec().ok_or_else(|| Error::InvalidColoring("lattice was edited site by site".into()))
    }

    fn guarded(&mut self, target: SurfaceCode, expect_dk: i64) -> Result<StepReport> {
        let before = self.code().k();
        let after = target.k();
        if after as i64 - before as i64 != expect_dk {
            return Err(Error::TopologyChange { before, after });
        }
        self.deform_to(target)
    }

    /// Removes a site next to a border. The plaquettes of the border's color
    /// around the site are deleted; the others lose the site.
    pub fn remove_site(&mut self, site: Site, color: Option<Color>) -> Result<StepReport> {
        let code = self.code();
        if !code.is_active(site) {
            return Err(Error::InactiveSite(site));
        }
        let missing = code.layout().missing_colors(site);
        let color = match (color, missing.len()) {
            (Some(c), _) => c,
            (None, 1) => *missing.iter().next().expect("one color"),
            (None, 0) => return Err(Error::InteriorSite(site)),
            (None, _) => return Err(Error::ColorMismatch),
        };
        let mut layout = code.layout().clone();
        layout.active.remove(&site);
        for p in site.incident() {
            if p.color() == color {
                layout.present.remove(&p);
            }
        }
        let target = code.with_layout(layout)?;
        self.guarded(target, 0)
    }

    /// Returns an idle site to the lattice. Plaquettes of `color` around it
    /// with at least three active corners are restored (or exactly the
    /// listed ones); the others gain the site.
    pub fn add_site(&mut self, site: Site, color: Option<Color>) -> Result<StepReport> {
        let code = self.code();
        if code.is_active(site) {
            return Err(Error::ActiveSite(site));
        }
        if !code.hardware().contains(site) {
            return Err(Error::HardwareTooSmall { needed: code.n() + 1, available: code.n() });
        }
        let mut layout = code.layout().clone();
        layout.active.insert(site);
        let missing: BTreeSet<Color> =
            site.incident().into_iter().filter(|p| !layout.present.contains(p)).map(Pos::color).collect();
        let color = match (color, missing.len()) {
            (Some(c), _) => c,
            (None, 1) => *missing.iter().next().expect("one color"),
            (None, 0) => return Err(Error::ActiveSite(site)),
            (None, _) => return Err(Error::ColorMismatch),
        };
        for p in site.incident() {
            // skip if it would share an odd number of sites with a present
            // plaquette of the other color
            let mine = layout.plaquette_sites(p);
            let blocked = p.corners().iter().flat_map(|s| s.incident()).any(|o| {
                o.color() != color
                    && layout.present.contains(&o)
                    && layout.plaquette_sites(o).iter().filter(|s| mine.contains(s)).count() % 2 == 1
            });
            if p.color() == color && layout.plaquette_sites(p).len() >= 3 && !blocked {
                layout.present.insert(p);
            }
        }
        let target = code.with_layout(layout)?;
        self.guarded(target, 0)
    }

    pub fn smooth_deform(&mut self, steps: &[SmoothStep]) -> Result<Vec<StepReport>> {
        let mut out = Vec::with_capacity(steps.len());
        for (index, step) in steps.iter().enumerate() {
            let r = match *step {
                SmoothStep::Remove(s, c) => self.remove_site(s, c),
                SmoothStep::Add(s, c) => self.add_site(s, c),
            };
            out.push(r.map_err(|e| Error::Step { index, cause: Box::new(e) })?);
        }
        Ok(out)
    }

    /// Removes every site of a closed, nontrivial string. The string's
    /// operator is measured; its value is the violation parity of the new
    /// plaquettes on one side of the cut.
    pub fn cut(&mut self, path: &StringPath) -> Result<StepReport> {
        let code = self.code();
        let op = code.string_operator(path)?;
        if !code.group().in_normalizer(&op)? || code.group().in_group(&op)? {
            return Err(Error::NotBorderToBorder);
        }
        let mut layout = code.layout().clone();
        for s in path.support() {
            layout.active.remove(&s);
            for p in s.incident() {
                if p.color() == path.color {
                    layout.present.remove(&p);
                }
            }
        }
        let target = code.with_layout(layout)?;
        self.deform_to(target)
    }

    /// Joins two borders of `color` by returning the junction sites to the
    /// lattice. The string along the junction is initialized to `+1`.
    pub fn paste(&mut self, junction: &[Site], color: Color) -> Result<StepReport> {
        for &s in junction {
            if self.code().is_active(s) {
                return Err(Error::ActiveSite(s));
            }
        }
        let mut prep = if color == Color::Light { Some(self.prepare_x(junction)?) } else { None };
        let code = self.code();
        let mut layout = code.layout().clone();
        layout.active.extend(junction.iter().copied());
        for &s in junction {
            for p in s.incident() {
                if p.color() == color && layout.plaquette_sites(p).len() == 4 {
                    layout.present.insert(p);
                }
            }
        }
        let target = code.with_layout(layout)?;
        if target.k() <= code.k() {
            return Err(Error::ColorMismatch);
        }
        let mut report = self.deform_to(target)?;
        if let Some(p) = prep.as_mut() {
            p.measured.append(&mut report.measured);
            report.measured = std::mem::take(&mut p.measured);
        }
        Ok(report)
    }

    /// Re-fixes idle sites in the X basis.
    pub fn prepare_x(&mut self, sites: &[Site]) -> Result<StepReport> {
        self.prepare_idle(sites, Letter::X)
    }

    /// Re-fixes idle sites in the given basis (X or Z).
    pub fn prepare_idle(&mut self, sites: &[Site], basis: Letter) -> Result<StepReport> {
        let target = match basis {
            Letter::X => self.code().with_x_fixed(sites.iter().copied())?,
            _ => self.code().with_z_fixed(sites.iter().copied())?,
        };
        self.deform_to(target)
    }

    /// Removes an interior region, creating a hole bordered by `color`. A
    /// new qubit is initialized with the loop around the hole at `+1`.
    pub fn puncture(&mut self, region: &[Site], color: Color) -> Result<StepReport> {
        let code = self.code();
        for &s in region {
            if !code.is_active(s) {
                return Err(Error::InactiveSite(s));
            }
            if !code.layout().missing_colors(s).is_empty() {
                return Err(Error::RegionOnBorder);
            }
        }
        let mut layout = code.layout().clone();
        for &s in region {
            layout.active.remove(&s);
            for p in s.incident() {
                if p.color() == color {
                    layout.present.remove(&p);
                }
            }
        }
        let target = code.with_layout(layout)?;
        self.guarded(target, 1)
    }

    /// Returns a region to the lattice and restores every plaquette around
    /// it with all corners active. Inverse of `puncture`.
    pub fn fill_region(&mut self, region: &[Site]) -> Result<StepReport> {
        let code = self.code();
        let mut layout = code.layout().clone();
        for &s in region {
            if layout.active.contains(&s) {
                return Err(Error::ActiveSite(s));
            }
            layout.active.insert(s);
        }
        for &s in region {
            for p in s.incident() {
                if layout.plaquette_sites(p).len() == 4 {
                    layout.present.insert(p);
                }
            }
        }
        let target = code.with_layout(layout)?;
        self.deform_to(target)
    }

    /// Adds a rectangular hole with one color on every side.
    pub fn puncture_hole(&mut self, hole: HoleSpec) -> Result<StepReport> {
        let mut spec = self.regular_spec()?;
        if spec.holes.iter().any(|h| h.id == hole.id) {
            return Err(Error::QubitsOverlap(hole.id, hole.id));
        }
        spec.holes.push(hole);
        let target = self.code().with_spec(&spec).map_err(|e| match e {
            Error::InvalidColoring(_) => Error::RegionOnBorder,
            other => other,
        })?;
        self.deform_to(target)
    }

    /// Removes a hole from the lattice, measuring the loop around it.
    pub fn contract_hole(&mut self, id: usize) -> Result<StepReport> {
        let mut spec = self.regular_spec()?;
        let before = spec.holes.len();
        spec.holes.retain(|h| h.id != id);
        if spec.holes.len() == before {
            return Err(Error::NoSuchHole(id));
        }
        let target = self.code().with_spec(&spec)?;
        self.deform_to(target)
    }

    /// Changes the color of one side of the outer border or of a hole.
    /// Turning a border into the opposite color contracts it.
    pub fn recolor_border(&mut self, border: BorderRef, color: Color) -> Result<StepReport> {
        let spec = self.recolored_spec(border, color)?;
        let target = self.code().with_spec(&spec)?;
        self.deform_to(target)
    }

    fn recolored_spec(&self, border: BorderRef, color: Color) -> Result<LatticeSpec> {
        let mut spec = self.regular_spec()?;
        match border {
            BorderRef::Outer(side) => *side_color(&mut spec.border, side) = color,
            BorderRef::Hole(id, side) => {
                let h = spec.holes.iter_mut().find(|h| h.id == id).ok_or(Error::NoSuchHole(id))?;
                *side_color(&mut h.sides, side) = color;
            }
        }
        Ok(spec)
    }

    /// Replaces the hole list of the current lattice.
    pub fn reshape_holes(&mut self, holes: Vec<HoleSpec>) -> Result<StepReport> {
        let mut spec = self.regular_spec()?;
        spec.holes = holes;
        let target = self.code().with_spec(&spec)?;
        self.deform_to(target)
    }

    /// Moves a hole one site per step: each step first extends the hole in
    /// the direction of motion, then releases its trailing edge. Sites
    /// crossing a light border are held in the X basis, so that strings
    /// running along that border are carried over rather than measured.
    pub fn move_hole(&mut self, id: usize, path: &[Dir]) -> Result<Vec<StepReport>> {
        let mut out = Vec::with_capacity(2 * path.len());
        for (index, &dir) in path.iter().enumerate() {
            let spec = self.regular_spec()?;
            let h = *spec.holes.iter().find(|h| h.id == id).ok_or(Error::NoSuchHole(id))?;
            let grown = match dir {
                Dir::Up => HoleSpec { top: h.top - 1, height: h.height + 1, ..h },
                Dir::Down => HoleSpec { height: h.height + 1, ..h },
                Dir::Left => HoleSpec { left: h.left - 1, width: h.width + 1, ..h },
                Dir::Right => HoleSpec { width: h.width + 1, ..h },
            };
            let (dr, dc) = dir.delta();
            let moved = h.translated(dr, dc);
            let (leading, trailing) = match dir {
                Dir::Up => (h.sides.top, h.sides.bottom),
                Dir::Down => (h.sides.bottom, h.sides.top),
                Dir::Left => (h.sides.left, h.sides.right),
                Dir::Right => (h.sides.right, h.sides.left),
            };
            let blocked = |_| Error::PathBlocked(index);
            let mut s = spec.clone();
            for hole in s.holes.iter_mut().filter(|x| x.id == id) {
                *hole = grown;
            }
            let mut target = self.code().with_spec(&s).map_err(blocked)?;
            if leading == Color::Light {
                target = target.with_x_fixed(grown.sites().filter(|v| !h.contains_site(*v)))?;
            }
            out.push(self.smooth_step(target, index)?);
            let released: Vec<Site> = grown.sites().filter(|v| !moved.contains_site(*v)).collect();
            let want_x = trailing == Color::Light;
            let wrong: Vec<Site> =
                released.iter().copied().filter(|v| self.code().x_fixed().contains(v) != want_x).collect();
            if !wrong.is_empty() {
                out.push(self.prepare_idle(&wrong, trailing.string_letter())?);
            }
            for hole in s.holes.iter_mut().filter(|x| x.id == id) {
                *hole = moved;
            }
            let target = self.code().with_spec(&s).map_err(blocked)?;
            out.push(self.smooth_step(target, index)?);
        }
        Ok(out)
    }

    fn smooth_step(&mut self, target: SurfaceCode, index: usize) -> Result<StepReport> {
        if target.k() != self.code().k() || !self.measured_classes(&target).is_empty() {
            return Err(Error::PathBlocked(index));
        }
        self.deform_to(target)
    }

    /// Logical classes (in frame coordinates) that moving to `target`
    /// would measure.
    pub fn measured_classes(&self, target: &SurfaceCode) -> Vec<BitVec> {
        self.measured_logicals(target).into_iter().map(|(v, _)| v).collect()
    }

    /// Independent logical operators that `target` would measure, with
    /// their frame coordinates.
    pub fn measured_logicals(&self, target: &SurfaceCode) -> Vec<(BitVec, PauliOperator)> {
        let old: BTreeSet<BitVec> = self.code().group().generators().iter().map(PauliOperator::symplectic).collect();
        let new: BTreeSet<BitVec> = target.group().generators().iter().map(PauliOperator::symplectic).collect();
        let added: Vec<&PauliOperator> = target.group().generators().iter().filter(|g| !old.contains(&g.symplectic())).collect();
        let removed: Vec<&PauliOperator> =
            self.code().group().generators().iter().filter(|g| !new.contains(&g.symplectic())).collect();
        let rows: Vec<BitVec> = added
            .iter()
            .map(|a| BitVec::from_bools(&removed.iter().map(|r| a.anticommutes_unchecked(r)).collect::<Vec<_>>()))
            .collect();
        let frame = self.frame().qubits();
        let mut out = Vec::new();
        let mut basis = crate::gf2::RowBasis::new(2 * frame.len());
        for combo in left_nullspace(removed.len(), &rows) {
            let mut m = PauliOperator::identity(self.code().n());
            for i in combo.ones() {
                m.mul_assign_unchecked(added[i]);
            }
            let mut v = BitVec::zeros(2 * frame.len());
            for (i, q) in frame.iter().enumerate() {
                v.set(2 * i, m.anticommutes_unchecked(&q.z));
                v.set(2 * i + 1, m.anticommutes_unchecked(&q.x));
            }
            if !v.is_zero() && basis.insert(v.clone()).is_ok() {
                out.push((v, m));
            }
        }
        out
    }

    /// Non-destructive measurement of one logical Pauli: a border of the
    /// opposite color is contracted so the logical becomes a stabilizer,
    /// then regrown. The regrown qubit keeps its id and its representative
    /// carries the measured sign.
    pub fn shrink_measure(&mut self, qubit: usize, basis: Letter) -> Result<(i8, Vec<StepReport>)> {
        let pos = self.frame().qubits().iter().position(|q| q.id == qubit).ok_or(Error::NoSuchQubit(qubit))?;
        let bit = if basis == Letter::X { 2 * pos } else { 2 * pos + 1 };
        let want = BitVec::unit(2 * self.frame().k(), bit);
        let spec = self.regular_spec().map_err(|_| Error::NoShrinkPath(qubit))?;
        // A light (X) string is measured by turning a dark border light.
        let from = if basis == Letter::X { Color::Dark } else { Color::Light };
        let mut candidates: Vec<BorderRef> = Side::ALL.iter().map(|&s| BorderRef::Outer(s)).collect();
        for h in &spec.holes {
            candidates.extend(Side::ALL.iter().map(|&s| BorderRef::Hole(h.id, s)));
        }
        let original = self.code().clone();
        // A border measuring the qubit's letter mixed with the same letter
        // of other qubits is accepted second, after re-anchoring the
        // qubit's representative on the measured string.
        let same_letter = |v: &BitVec| (0..v.len()).all(|i| !v.get(i) || (i % 2 == bit % 2));
        let mut chosen = None;
        'search: for relaxed in [false, true] {
            for &border in &candidates {
                let mut probe = spec.clone();
                let current = match border {
                    BorderRef::Outer(s) => *side_color(&mut probe.border, s),
                    BorderRef::Hole(id, s) => {
                        *side_color(&mut probe.holes.iter_mut().find(|h| h.id == id).expect("listed").sides, s)
                    }
                };
                if current != from {
                    continue;
                }
                let Ok(spec2) = self.recolored_spec(border, from.opposite()) else { continue };
                let Ok(target) = original.with_spec(&spec2) else { continue };
                if target.k() + 1 != original.k() {
                    continue;
                }
                let mut ms = self.measured_logicals(&target);
                if ms.len() != 1 {
                    continue;
                }
                let (v, m) = ms.remove(0);
                if v == want {
                    chosen = Some((target, None));
                    break 'search;
                }
                if relaxed && v.get(bit) && same_letter(&v) {
                    chosen = Some((target, Some(m)));
                    break 'search;
                }
            }
        }
        if let Some((target, anchor)) = chosen {
            if let Some(mut m) = anchor {
                // keep the sign convention of the qubit's reference string
                let reference = self.frame().reference().iter().find(|q| q.id == qubit);
                if let Some(r) = reference.map(|q| if basis == Letter::X { &q.x } else { &q.z }) {
                    let prod = m.mul(r)?.with_phase(0);
                    if self.code().group().in_group(&prod)? && self.state().expectation(&m.mul(r)?)? == Some(-1) {
                        m = m.negated();
                    }
                }
                self.fix_gauge(&m, &[qubit])?;
            }
            let first = self.deform_to(target)?;
            let outcome = first.logical.first().map(|l| l.outcome).ok_or(Error::NoShrinkPath(qubit))?;
            let second = self.deform_to(original)?;
            let &new_id = second.initialized.first().ok_or(Error::NoShrinkPath(qubit))?;
            let sign = second.init_signs[0] * outcome;
            let frame = self.frame_mut();
            frame.relabel(new_id, qubit)?;
            let qs = frame.qubits_mut();
            let at = qs.iter().position(|q| q.id == qubit).expect("relabelled");
            let mut fq = qs.remove(at);
            let rep = if basis == Letter::X { &mut fq.x } else { &mut fq.z };
            if sign < 0 {
                *rep = rep.clone().negated();
            }
            qs.insert(pos, fq);
            return Ok((outcome, vec![first, second]));
        }
        Err(Error::NoShrinkPath(qubit))
    }
}

/// Closed string of `color` around `hole` at distance one to two sites,
/// formed as the product of the opposite-color plaquettes covering the
/// hole and its ring. `None` if the loop leaves the active region.
pub fn surrounding_loop(code: &SurfaceCode, hole: &HoleSpec, color: Color) -> Option<PauliOperator> {
    let mut sites = BTreeSet::new();
    for r in hole.top - 2..=hole.top + hole.height {
        for c in hole.left - 2..=hole.left + hole.width {
            let p = Pos::new(r, c);
            if p.color() != color.opposite() {
                continue;
            }
            for s in p.corners() {
                if !sites.remove(&s) {
                    sites.insert(s);
                }
            }
        }
    }
    let qubits: Option<Vec<usize>> =
        sites.into_iter().map(|s| if code.is_active(s) { code.qubit(s).ok() } else { None }).collect();
    Some(PauliOperator::uniform(code.n(), qubits?, color.string_letter()))
}


/// Active sites strictly inside the closed loop of sites `ring`, found by
/// flood fill from the region outside the loop's bounding box.
pub fn enclosed_sites(layout: &Layout, ring: &[Site]) -> BTreeSet<Site> {
    let wall: BTreeSet<Site> = ring.iter().copied().collect();
    let (r0, r1) = (ring.iter().map(|s| s.r).min().unwrap_or(0) - 1, ring.iter().map(|s| s.r).max().unwrap_or(0) + 1);
    let (c0, c1) = (ring.iter().map(|s| s.c).min().unwrap_or(0) - 1, ring.iter().map(|s| s.c).max().unwrap_or(0) + 1);
    let mut outside = BTreeSet::new();
    let mut stack = vec![Site::new(r0, c0)];
    while let Some(s) = stack.pop() {
        if s.r < r0 || s.r > r1 || s.c < c0 || s.c > c1 || wall.contains(&s) || !outside.insert(s) {
            continue;
        }
        for (dr, dc) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
            stack.push(Site::new(s.r + dr, s.c + dc));
        }
    }
    layout
        .active
        .iter()
        .copied()
        .filter(|s| s.r > r0 && s.r < r1 && s.c > c0 && s.c < c1 && !wall.contains(s) && !outside.contains(s))
        .collect()
}
