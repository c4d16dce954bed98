//! Composite deformations on hole qubits: initialization, the braided
//! CNOT, and disconnection from the surrounding code.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::engine::{hermitize, Machine, StepReport, ONE_Z_SIGN};
use super::frame::FrameMatrices;
use super::ops::{BorderRef, Dir, Side};
use crate::error::{Error, Result};
use crate::lattice::{Color, HoleSpec, LatticeSpec, Sides, Site, StringPath, SurfaceCode};
use crate::pauli::{Letter, PauliOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitState {
    Zero,
    One,
    Plus,
    Minus,
}

impl InitState {
    pub fn label(self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::One => "one",
            Self::Plus => "plus",
            Self::Minus => "minus",
        }
    }

    fn is_z(self) -> bool {
        matches!(self, Self::Zero | Self::One)
    }
}

/// Border layout of a hole qubit: light top and bottom, dark left and right.
pub const HOLE_QUBIT_SIDES: Sides = Sides { top: Color::Light, right: Color::Dark, bottom: Color::Light, left: Color::Dark };

fn no_room(e: Error) -> Error {
    match e {
        Error::InvalidColoring(_) | Error::RegionOnBorder | Error::QubitsOverlap(..) => Error::NoRoom,
        other => other,
    }
}

impl Machine {
    /// Creates a hole qubit at `hole` in a Z or X eigenstate. The hole is first
    /// punctured with a single color, then the borders of the other color
    /// are grown along it. Returns the new qubit's id and the step reports.
    pub fn macro_init_qubit(&mut self, hole: HoleSpec, state: InitState) -> Result<(usize, Vec<StepReport>)> {
        let sides = hole.sides;
        if sides.top != sides.bottom || sides.left != sides.right || sides.top == sides.left {
            return Err(Error::InvalidColoring(format!("hole {} is not a hole qubit", hole.id)));
        }
        let first = if state.is_z() { Color::Dark } else { Color::Light };
        let mut reports = vec![self
            .puncture_hole(HoleSpec { sides: Sides::uniform(first), ..hole })
            .map_err(no_room)?];
        let regrow: Vec<Side> = [Side::Top, Side::Right, Side::Bottom, Side::Left]
            .into_iter()
            .filter(|&s| side_of(&sides, s) != first)
            .collect();
        if state.is_z() {
            let mut spec = self.code().spec().ok_or(Error::NoRoom)?;
            for h in spec.holes.iter_mut().filter(|h| h.id == hole.id) {
                h.sides = sides;
            }
            let target = self.code().with_spec(&spec)?;
            reports.push(self.deform_to(target)?);
        } else {
            for s in regrow {
                reports.push(self.recolor_border(BorderRef::Hole(hole.id, s), first.opposite())?);
            }
        }
        let mut created: Vec<usize> = reports.iter().flat_map(|r| r.initialized.iter().copied()).collect();
        let placed = *self.code().hole(hole.id)?;
        for color in [Color::Light, Color::Dark] {
            let Some(g) = super::ops::surrounding_loop(self.code(), &placed, color) else { continue };
            if !self.code().group().in_normalizer(&g)? {
                continue;
            }
            if let Some(q) = self.fix_gauge(&g, &created)? {
                created.retain(|&c| c != q);
            }
        }
        let &[id] = created.as_slice() else {
            let last = reports.last().expect("at least one step");
            return Err(Error::TopologyChange { before: last.k_before, after: last.k_after });
        };
        let (letter, want) = match state {
            InitState::Zero => (Letter::Z, -ONE_Z_SIGN),
            InitState::One => (Letter::Z, ONE_Z_SIGN),
            InitState::Plus => (Letter::X, 1),
            InitState::Minus => (Letter::X, -1),
        };
        let sign = self.logical_value(id, letter)?.ok_or(Error::InconsistentSigns)?;
        if sign != want {
            let q = self.frame_mut().get_mut(id)?;
            match letter {
                Letter::Z => q.z = q.z.clone().negated(),
                _ => q.x = q.x.clone().negated(),
            }
        }
        Ok((id, reports))
    }
}

/// Outcome of a braided CNOT between two hole qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnotReport {
    /// Pasting across both holes, each split in two.
    pub split: Vec<StepReport>,
    /// One hole of the source winding around one hole of the target.
    pub braid: Vec<StepReport>,
    /// Cuts restoring the original holes, measuring the auxiliary qubits.
    pub merge: Vec<StepReport>,
    pub aux_outcomes: Vec<i8>,
    /// Pauli that brings every representative to the sign of its ideal
    /// image; applied when the machine corrects, recorded otherwise.
    pub byproduct: PauliOperator,
    pub byproduct_applied: bool,
    /// Frame relative to the representatives held before the gate.
    pub matrices: FrameMatrices,
}

/// Halves of the source (top, bottom) and target (left, right) holes
/// used while braiding. New halves take fresh hole ids.
fn split_holes(spec: &LatticeSpec, hs: &HoleSpec, ht: &HoleSpec) -> Result<[HoleSpec; 4]> {
    let half = (hs.height - 1) / 2;
    let t_width = (ht.width - hs.width - 4) / 2;
    if t_width < 1 {
        return Err(Error::NoRoom);
    }
    let next_id = spec.holes.iter().map(|h| h.id + 1).max().unwrap_or(0);
    let s_top = HoleSpec { height: half, ..*hs };
    let s_bot = HoleSpec { id: next_id, top: hs.top + half + 1, height: half, ..*hs };
    let t_left = HoleSpec { width: t_width, ..*ht };
    let t_right = HoleSpec { id: next_id + 1, left: ht.left + ht.width - t_width, width: t_width, ..*ht };
    if t_left.top < s_top.top + half + 2 || t_left.left < s_top.left + 2 * hs.width + 4 {
        return Err(Error::NoRoom);
    }
    Ok([s_top, s_bot, t_left, t_right])
}

fn replace(spec: &LatticeSpec, id: usize, with: &[HoleSpec]) -> LatticeSpec {
    let mut out = spec.clone();
    out.holes.retain(|h| h.id != id);
    out.holes.extend_from_slice(with);
    out
}

/// Lattice during a CNOT once both holes are pasted into two-holed qubits.
pub fn cnot_split_spec(spec: &LatticeSpec, source: usize, target: usize) -> Result<LatticeSpec> {
    let find = |id| spec.holes.iter().find(|h| h.id == id).copied().ok_or(Error::NoSuchHole(id));
    let (hs, ht) = (find(source)?, find(target)?);
    let [s_top, s_bot, t_left, t_right] = split_holes(spec, &hs, &ht)?;
    Ok(replace(&replace(spec, source, &[s_top, s_bot]), target, &[t_left, t_right]))
}

/// Lattice and hole pair sized for a CNOT at `scale`: a tall source hole
/// left of a wide target hole in a sea with a dark border. The target is
/// wide enough for a source hole to pass between its two halves.
pub fn cnot_layout(scale: i32) -> (LatticeSpec, HoleSpec, HoleSpec) {
    let a = 2 * scale.max(1);
    let source = HoleSpec { id: 0, top: 2, left: 2, height: 2 * a + 1, width: a, sides: HOLE_QUBIT_SIDES };
    let target = HoleSpec { id: 1, top: a + 4, left: 2 * a + 6, height: a, width: 3 * a + 4, sides: HOLE_QUBIT_SIDES };
    let spec = LatticeSpec::rectangle(3 * a + 8, 5 * a + 12, Sides::uniform(Color::Dark));
    (spec, source, target)
}

impl Machine {
    /// CNOT from the qubit of hole `source` to the qubit of hole `target`.
    /// Both holes are split by pastes, the top half of the source winds
    /// around the left half of the target, and cuts restore both holes.
    pub fn macro_cnot(&mut self, source: usize, target: usize) -> Result<CnotReport> {
        if source == target {
            return Err(Error::QubitsOverlap(source, target));
        }
        let original = self.code().spec().ok_or(Error::NoRoom)?;
        let hs = *self.code().hole(source)?;
        let ht = *self.code().hole(target)?;
        if hs.sides != HOLE_QUBIT_SIDES || ht.sides != HOLE_QUBIT_SIDES || hs.height < 3 || hs.height % 2 == 0 {
            return Err(Error::NoRoom);
        }
        let [s_top, s_bot, t_left, t_right] = split_holes(&original, &hs, &ht)?;
        let t_width = t_left.width;
        let bridge: Vec<_> = ht.sites().filter(|s| !t_left.contains_site(*s) && !t_right.contains_site(*s)).collect();

        self.frame_mut().rebase();
        let mut split = Vec::new();
        let source_split = replace(&original, source, &[s_top, s_bot]);
        split.push(self.deform_to(self.code().with_spec(&source_split).map_err(no_room)?)?);
        split.push(self.prepare_x(&bridge)?);
        let both_split = replace(&source_split, target, &[t_left, t_right]);
        split.push(self.deform_to(self.code().with_spec(&both_split).map_err(no_room)?)?);

        let corridor = t_left.left + t_width + 2;
        let below = t_left.top + t_left.height + 2;
        let column = t_left.left - 2 - hs.width;
        let mut path = Vec::new();
        for (dir, count) in [
            (Dir::Right, corridor - s_top.left),
            (Dir::Down, below - s_top.top),
            (Dir::Left, corridor - column),
            (Dir::Up, below - s_top.top),
            (Dir::Left, column - s_top.left),
        ] {
            path.extend(std::iter::repeat_n(dir, count as usize));
        }
        let braid = self.move_hole(source, &path)?;

        let mut merge = Vec::new();
        let mut source_merged = replace(&both_split, source, &[hs]);
        source_merged.holes.retain(|h| h.id != s_bot.id);
        merge.push(self.deform_to(self.code().with_spec(&source_merged)?)?);
        merge.push(self.deform_to(self.code().with_spec(&original)?)?);
        let aux_outcomes = merge.iter().flat_map(|r| r.logical.iter().map(|l| l.outcome)).collect();

        let matrices = self.frame().matrices();
        let (byproduct, byproduct_applied) = self.normalize_signs()?;
        Ok(CnotReport { split, braid, merge, aux_outcomes, byproduct, byproduct_applied, matrices })
    }

    /// Compares every representative with the product of reference
    /// representatives picked out by the frame matrices. Returns the Pauli
    /// that flips exactly the representatives of opposite sign; when the
    /// machine corrects, it is applied and those signs are reset.
    pub fn normalize_signs(&mut self) -> Result<(PauliOperator, bool)> {
        let n = self.code().n();
        let m = self.frame().matrices();
        let reference = self.frame().reference().to_vec();
        let ideal = |xs: &[u8], zs: &[u8]| {
            let mut p = PauliOperator::identity(n);
            for (j, r) in reference.iter().enumerate() {
                if xs[j] == 1 {
                    p.mul_assign_unchecked(&r.x);
                }
                if zs[j] == 1 {
                    p.mul_assign_unchecked(&r.z);
                }
            }
            hermitize(p)
        };
        let mut flips = Vec::new();
        for (i, q) in self.frame().qubits().iter().enumerate() {
            let ix = ideal(&m.a[i], &m.b[i]);
            let iz = ideal(&m.c[i], &m.d[i]);
            let sx = self.state().expectation(&q.x.mul(&ix)?)?.ok_or(Error::InconsistentSigns)?;
            let sz = self.state().expectation(&q.z.mul(&iz)?)?.ok_or(Error::InconsistentSigns)?;
            flips.push((sx < 0, sz < 0));
        }
        let mut b = PauliOperator::identity(n);
        for (q, &(fx, fz)) in self.frame().qubits().iter().zip(&flips) {
            if fx {
                b.mul_assign_unchecked(&q.z);
            }
            if fz {
                b.mul_assign_unchecked(&q.x);
            }
        }
        let b = hermitize(b);
        let apply = self.config().correct;
        if apply {
            self.apply(&b)?;
            for (q, &(fx, fz)) in self.frame_mut().qubits_mut().iter_mut().zip(&flips) {
                if fx {
                    q.x = q.x.clone().negated();
                }
                if fz {
                    q.z = q.z.clone().negated();
                }
            }
        }
        Ok((b, apply))
    }
}

/// A hole qubit cut out of the surrounding code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disconnected {
    pub hole: usize,
    /// Cut of the ring, which measures the light loop around the hole.
    pub ring_cut: StepReport,
    /// Cut of the stem joining the ring to the hole, which measures the
    /// gauge qubit the ring cut created.
    pub stem_cut: StepReport,
    /// Frame id of the measured loop's qubit.
    pub loop_qubit: usize,
    pub ring: Vec<Site>,
    pub stem: Vec<Site>,
    /// Everything outside the ring.
    pub outer: SurfaceCode,
    /// The patch holding the hole qubit.
    pub inner: SurfaceCode,
}

fn restricted(code: &SurfaceCode, keep: &BTreeSet<Site>) -> Result<SurfaceCode> {
    let mut layout = code.layout().clone();
    layout.active.retain(|s| keep.contains(s));
    layout.present.retain(|p| p.corners().iter().all(|s| !code.is_active(*s) || keep.contains(s)));
    layout.prune();
    code.with_layout(layout)
}

fn single(report: &StepReport, ids: &[usize]) -> Result<usize> {
    match ids {
        &[id] => Ok(id),
        _ => Err(Error::TopologyChange { before: report.k_before, after: report.k_after }),
    }
}

impl Machine {
    /// Separates the qubit of `hole` from the rest of the code. The ring
    /// carrying the light loop around the hole is cut (the loop must read
    /// `+1`), then a stem from the ring to the hole's top side, leaving the
    /// qubit on a patch with light, dark, light, dark border runs.
    pub fn macro_disconnect(&mut self, hole: usize) -> Result<Disconnected> {
        let h = *self.code().hole(hole)?;
        if h.sides != HOLE_QUBIT_SIDES {
            return Err(Error::InvalidColoring(format!("hole {hole} is not a hole qubit")));
        }
        let g = super::ops::surrounding_loop(self.code(), &h, Color::Light).ok_or(Error::NoRoom)?;
        if self.state().expectation(&g)? != Some(1) {
            return Err(Error::EigenvalueNotFixed);
        }
        let ring: Vec<Site> = g.support().into_iter().filter_map(|q| self.code().hardware().site(q)).collect();
        let top = ring.iter().map(|s| s.r).min().ok_or(Error::NoRoom)?;
        let stem_path = StringPath::column(Color::Light, h.left, top + 1, h.top - 1);
        let stem = stem_path.sites.clone();

        let mut layout = self.code().layout().clone();
        for s in &ring {
            layout.active.remove(s);
            for p in s.incident() {
                if p.color() == Color::Light {
                    layout.present.remove(&p);
                }
            }
        }
        let inside = super::ops::enclosed_sites(&layout, &ring);
        let ring_cut = self.deform_to(self.code().with_layout(layout)?)?;
        let loop_qubit = single(&ring_cut, &ring_cut.logical.iter().map(|l| l.qubit).collect::<Vec<_>>())?;
        let gauge = single(&ring_cut, &ring_cut.initialized)?;

        let stem_op = self.code().string_operator(&stem_path)?;
        self.fix_gauge(&stem_op, &[gauge])?;
        let stem_cut = self.cut(&stem_path)?;
        if stem_cut.logical.iter().map(|l| l.qubit).ne([gauge]) {
            return Err(Error::TopologyChange { before: stem_cut.k_before, after: stem_cut.k_after });
        }
        let inside: BTreeSet<Site> = inside.into_iter().filter(|s| !stem.contains(s)).collect();
        let outside: BTreeSet<Site> = self.code().layout().active.iter().filter(|s| !inside.contains(s)).copied().collect();
        let outer = restricted(self.code(), &outside)?;
        let inner = restricted(self.code(), &inside)?;
        Ok(Disconnected { hole, ring_cut, stem_cut, loop_qubit, ring, stem, outer, inner })
    }

    /// Returns the ring and stem to the lattice in one step. The light
    /// loop is reinitialized to `+1` under its old frame id.
    pub fn macro_reconnect(&mut self, d: &Disconnected) -> Result<StepReport> {
        let sites: Vec<Site> = d.ring.iter().chain(&d.stem).copied().collect();
        let mut report = self.prepare_x(&sites)?;
        let mut layout = self.code().layout().clone();
        layout.active.extend(sites.iter().copied());
        for s in &sites {
            for p in s.incident() {
                if layout.plaquette_sites(p).len() == 4 {
                    layout.present.insert(p);
                }
            }
        }
        let step = self.deform_to(self.code().with_layout(layout)?)?;
        let id = single(&step, &step.initialized)?;
        self.frame_mut().relabel(id, d.loop_qubit)?;
        report.measured.extend(step.measured);
        Ok(StepReport { measured: report.measured, ..step })
    }
}

fn side_of(sides: &Sides, s: Side) -> Color {
    match s {
        Side::Top => sides.top,
        Side::Right => sides.right,
        Side::Bottom => sides.bottom,
        Side::Left => sides.left,
    }
}
