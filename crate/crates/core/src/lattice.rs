//! Chessboard surface-code geometry: sites, two-colored plaquettes,
//! colored borders, holes, strings, and compilation to stabilizer groups.
//!
//! Sites sit at integer points `(r, c)`. The plaquette at position `(r, c)`
//! covers the four sites `(r, c)`, `(r, c+1)`, `(r+1, c)`, `(r+1, c+1)` and is
//! dark when `r + c` is even. Dark plaquettes carry X operators, light ones Z.
//! Dark strings carry Z operators, light strings X.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitVec, RowBasis};
use crate::pauli::{Letter, PauliOperator};
use crate::stabilizer::{CodeParameters, LogicalBasis, StabilizerGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Dark,
    Light,
}

impl Color {
    pub fn opposite(self) -> Self {
        match self {
            Color::Dark => Color::Light,
            Color::Light => Color::Dark,
        }
    }

    /// Letter of a plaquette operator of this color.
    pub fn plaquette_letter(self) -> Letter {
        match self {
            Color::Dark => Letter::X,
            Color::Light => Letter::Z,
        }
    }

    /// Letter of a string operator of this color.
    pub fn string_letter(self) -> Letter {
        match self {
            Color::Dark => Letter::Z,
            Color::Light => Letter::X,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Dark => "dark",
            Color::Light => "light",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub r: i32,
    pub c: i32,
}

impl Site {
    pub const fn new(r: i32, c: i32) -> Self {
        Self { r, c }
    }

    /// The four plaquette positions having this site as a corner.
    pub fn incident(self) -> [Pos; 4] {
        let Site { r, c } = self;
        [Pos::new(r - 1, c - 1), Pos::new(r - 1, c), Pos::new(r, c - 1), Pos::new(r, c)]
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r, self.c)
    }
}

/// A plaquette position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pos {
    pub r: i32,
    pub c: i32,
}

impl Pos {
    pub const fn new(r: i32, c: i32) -> Self {
        Self { r, c }
    }

    pub fn color(self) -> Color {
        if (self.r + self.c).rem_euclid(2) == 0 {
            Color::Dark
        } else {
            Color::Light
        }
    }

    pub fn corners(self) -> [Site; 4] {
        let Pos { r, c } = self;
        [Site::new(r, c), Site::new(r, c + 1), Site::new(r + 1, c), Site::new(r + 1, c + 1)]
    }

    pub fn contains(self, s: Site) -> bool {
        (s.r == self.r || s.r == self.r + 1) && (s.c == self.c || s.c == self.c + 1)
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.r, self.c)
    }
}

/// Side colors, clockwise from the top.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sides {
    pub top: Color,
    pub right: Color,
    pub bottom: Color,
    pub left: Color,
}

impl Sides {
    pub const fn uniform(c: Color) -> Self {
        Self { top: c, right: c, bottom: c, left: c }
    }

    /// Dark top and bottom, light left and right.
    pub const fn alternating(top: Color) -> Self {
        let other = match top {
            Color::Dark => Color::Light,
            Color::Light => Color::Dark,
        };
        Self { top, right: other, bottom: top, left: other }
    }

    pub fn as_array(&self) -> [Color; 4] {
        [self.top, self.right, self.bottom, self.left]
    }
}

/// Rectangular hole: the block of removed sites `top..top+height`,
/// `left..left+width`, with one border color per side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleSpec {
    pub id: usize,
    pub top: i32,
    pub left: i32,
    pub height: i32,
    pub width: i32,
    pub sides: Sides,
}

impl HoleSpec {
    pub fn contains_site(&self, s: Site) -> bool {
        s.r >= self.top && s.r < self.top + self.height && s.c >= self.left && s.c < self.left + self.width
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (self.top..self.top + self.height).flat_map(move |r| (self.left..self.left + self.width).map(move |c| Site::new(r, c)))
    }

    /// Border colors of the hole that `p` touches (empty when `p` is not in
    /// the hole's ring or interior).
    fn touching(&self, p: Pos) -> Option<Vec<Color>> {
        let (r0, r1) = (self.top - 1, self.top + self.height - 1);
        let (c0, c1) = (self.left - 1, self.left + self.width - 1);
        if p.r < r0 || p.r > r1 || p.c < c0 || p.c > c1 {
            return None;
        }
        let mut out = Vec::new();
        if p.r == r0 {
            out.push(self.sides.top);
        }
        if p.r == r1 {
            out.push(self.sides.bottom);
        }
        if p.c == c0 {
            out.push(self.sides.left);
        }
        if p.c == c1 {
            out.push(self.sides.right);
        }
        Some(out)
    }

    pub fn translated(&self, dr: i32, dc: i32) -> Self {
        Self { top: self.top + dr, left: self.left + dc, ..*self }
    }
}

/// Declarative description of a rectangular patch with optional holes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    /// Site rows of the outer rectangle.
    pub rows: i32,
    /// Site columns of the outer rectangle.
    pub cols: i32,
    pub border: Sides,
    #[serde(default)]
    pub holes: Vec<HoleSpec>,
}

impl LatticeSpec {
    pub fn rectangle(rows: i32, cols: i32, border: Sides) -> Self {
        Self { rows, cols, border, holes: Vec::new() }
    }

    /// The one-qubit patch with dark top/bottom and light left/right borders.
    pub fn standard_patch(rows: i32, cols: i32) -> Self {
        Self::rectangle(rows, cols, Sides::alternating(Color::Dark))
    }

    pub fn with_hole(mut self, hole: HoleSpec) -> Self {
        self.holes.push(hole);
        self
    }

    fn check(&self) -> Result<()> {
        if self.rows < 1 || self.cols < 1 {
            return Err(Error::InvalidColoring("empty lattice".into()));
        }
        for (i, h) in self.holes.iter().enumerate() {
            if h.height < 1 || h.width < 1 {
                return Err(Error::InvalidColoring(format!("hole {} is empty", h.id)));
            }
            if h.top < 1 || h.left < 1 || h.top + h.height > self.rows - 1 || h.left + h.width > self.cols - 1 {
                return Err(Error::InvalidColoring(format!("hole {} touches the outer border", h.id)));
            }
            for g in &self.holes[..i] {
                let apart = h.top + h.height < g.top
                    || g.top + g.height < h.top
                    || h.left + h.width < g.left
                    || g.left + g.width < h.left;
                if !apart {
                    return Err(Error::InvalidColoring(format!("holes {} and {} are too close", g.id, h.id)));
                }
            }
        }
        Ok(())
    }

    fn outer_touching(&self, p: Pos) -> Vec<Color> {
        let mut out = Vec::new();
        if p.r == -1 {
            out.push(self.border.top);
        }
        if p.r == self.rows - 1 {
            out.push(self.border.bottom);
        }
        if p.c == -1 {
            out.push(self.border.left);
        }
        if p.c == self.cols - 1 {
            out.push(self.border.right);
        }
        out
    }

    /// Compiles the declarative description into explicit site and
    /// plaquette sets.
    pub fn layout(&self) -> Result<Layout> {
        self.check()?;
        let mut active = BTreeSet::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let s = Site::new(r, c);
                if !self.holes.iter().any(|h| h.contains_site(s)) {
                    active.insert(s);
                }
            }
        }
        let mut present = BTreeSet::new();
        for r in -1..self.rows {
            for c in -1..self.cols {
                let p = Pos::new(r, c);
                if !p.corners().iter().any(|s| active.contains(s)) {
                    continue;
                }
                let mut touching = self.outer_touching(p);
                for h in &self.holes {
                    if let Some(t) = h.touching(p) {
                        touching.extend(t);
                    }
                }
                if touching.iter().all(|&col| col != p.color()) {
                    present.insert(p);
                }
            }
        }
        Ok(Layout { active, present })
    }
}

/// Explicit software lattice: active sites and present plaquettes. A
/// plaquette acts on its active corners.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub active: BTreeSet<Site>,
    pub present: BTreeSet<Pos>,
}

impl Layout {
    pub fn plaquette_sites(&self, p: Pos) -> Vec<Site> {
        p.corners().into_iter().filter(|s| self.active.contains(s)).collect()
    }

    /// Colors of the missing plaquette positions around an active site.
    pub fn missing_colors(&self, s: Site) -> BTreeSet<Color> {
        s.incident().into_iter().filter(|p| !self.present.contains(p)).map(Pos::color).collect()
    }

    /// Drops present plaquettes that no longer touch any active site.
    pub fn prune(&mut self) {
        let active = &self.active;
        self.present.retain(|p| p.corners().iter().any(|s| active.contains(s)));
    }
}

/// Fixed hardware register: a grid of sites plus optional padding qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hardware {
    pub rows: i32,
    pub cols: i32,
    pub n: usize,
}

impl Hardware {
    pub fn grid(rows: i32, cols: i32) -> Self {
        Self { rows, cols, n: (rows * cols) as usize }
    }

    pub fn contains(&self, s: Site) -> bool {
        s.r >= 0 && s.c >= 0 && s.r < self.rows && s.c < self.cols
    }

    pub fn index(&self, s: Site) -> Option<usize> {
        self.contains(s).then(|| (s.r * self.cols + s.c) as usize)
    }

    pub fn site(&self, q: usize) -> Option<Site> {
        let grid = (self.rows * self.cols) as usize;
        (q < grid).then(|| Site::new(q as i32 / self.cols, q as i32 % self.cols))
    }
}

/// A surface code bound to a hardware register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceCode {
    hardware: Hardware,
    layout: Layout,
    x_fixed: BTreeSet<Site>,
    holes: Vec<HoleSpec>,
    border: Option<Sides>,
    regular: bool,
    plaquettes: Vec<Pos>,
    spectators: Vec<usize>,
    group: StabilizerGroup,
    params: CodeParameters,
}

impl SurfaceCode {
    pub fn from_layout(hardware: Hardware, mut layout: Layout) -> Result<Self> {
        layout.prune();
        Self::assemble(hardware, layout, BTreeSet::new(), Vec::new(), None, false)
    }

    fn assemble(
        hardware: Hardware,
        layout: Layout,
        x_fixed: BTreeSet<Site>,
        holes: Vec<HoleSpec>,
        border: Option<Sides>,
        regular: bool,
    ) -> Result<Self> {
        let grid = (hardware.rows.max(0) * hardware.cols.max(0)) as usize;
        if hardware.n < grid {
            return Err(Error::HardwareTooSmall { needed: grid, available: hardware.n });
        }
        for &s in &layout.active {
            if !hardware.contains(s) {
                let needed = ((s.r + 1).max(hardware.rows) * (s.c + 1).max(hardware.cols)) as usize;
                return Err(Error::HardwareTooSmall { needed, available: hardware.n });
            }
        }
        let n = hardware.n;
        let mut generators = Vec::new();
        let mut plaquettes = Vec::new();
        for &p in &layout.present {
            let sites = layout.plaquette_sites(p);
            if sites.is_empty() {
                continue;
            }
            let idx = sites.iter().map(|&s| hardware.index(s).expect("checked above"));
            generators.push(PauliOperator::uniform(n, idx, p.color().plaquette_letter()));
            plaquettes.push(p);
        }
        for i in 0..generators.len() {
            for j in 0..i {
                if generators[i].anticommutes_unchecked(&generators[j]) {
                    return Err(Error::InvalidColoring(format!(
                        "plaquettes {} and {} anticommute",
                        plaquettes[j], plaquettes[i]
                    )));
                }
            }
        }
        let mut spectators = Vec::new();
        for q in 0..n {
            let site = hardware.site(q);
            if site.is_some_and(|s| layout.active.contains(&s)) {
                continue;
            }
            let letter = if site.is_some_and(|s| x_fixed.contains(&s)) { Letter::X } else { Letter::Z };
            generators.push(PauliOperator::single(n, q, letter));
            spectators.push(q);
        }
        let group = StabilizerGroup::new(n, generators)?;
        let params = group.validate()?;
        Ok(Self { hardware, layout, x_fixed, holes, border, regular, plaquettes, spectators, group, params })
    }

    /// Copy of this code with a different software lattice. Hole and border
    /// bookkeeping is carried over unchanged.
    pub fn with_layout(&self, mut layout: Layout) -> Result<Self> {
        layout.prune();
        let x_fixed = self.x_fixed.iter().copied().filter(|s| !layout.active.contains(s)).collect();
        Self::assemble(self.hardware, layout, x_fixed, self.holes.clone(), self.border, false)
    }

    /// Copy of this code recompiled from a declarative description on the
    /// same hardware grid.
    pub fn with_spec(&self, spec: &LatticeSpec) -> Result<Self> {
        if spec.rows != self.hardware.rows || spec.cols != self.hardware.cols {
            return Err(Error::InvalidColoring("spec does not match the hardware grid".into()));
        }
        let layout = spec.layout()?;
        let x_fixed = self.x_fixed.iter().copied().filter(|s| !layout.active.contains(s)).collect();
        Self::assemble(self.hardware, layout, x_fixed, spec.holes.clone(), Some(spec.border), true)
    }

    /// The declarative description this code was compiled from, if its
    /// lattice has not been edited site by site since.
    pub fn spec(&self) -> Option<LatticeSpec> {
        let border = self.border?;
        self.regular.then(|| LatticeSpec {
            rows: self.hardware.rows,
            cols: self.hardware.cols,
            border,
            holes: self.holes.clone(),
        })
    }

    /// Copy of this code where the given inactive sites are fixed by X
    /// instead of Z.
    pub fn with_x_fixed(&self, sites: impl IntoIterator<Item = Site>) -> Result<Self> {
        let mut x_fixed = self.x_fixed.clone();
        for s in sites {
            if self.layout.active.contains(&s) {
                return Err(Error::ActiveSite(s));
            }
            x_fixed.insert(s);
        }
        Self::assemble(self.hardware, self.layout.clone(), x_fixed, self.holes.clone(), self.border, self.regular)
    }

    /// Copy of this code where the given inactive sites are fixed by Z.
    pub fn with_z_fixed(&self, sites: impl IntoIterator<Item = Site>) -> Result<Self> {
        let mut x_fixed = self.x_fixed.clone();
        for s in sites {
            if self.layout.active.contains(&s) {
                return Err(Error::ActiveSite(s));
            }
            x_fixed.remove(&s);
        }
        Self::assemble(self.hardware, self.layout.clone(), x_fixed, self.holes.clone(), self.border, self.regular)
    }

    pub fn hardware(&self) -> Hardware {
        self.hardware
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn x_fixed(&self) -> &BTreeSet<Site> {
        &self.x_fixed
    }

    pub fn holes(&self) -> &[HoleSpec] {
        &self.holes
    }

    pub fn hole(&self, id: usize) -> Result<&HoleSpec> {
        self.holes.iter().find(|h| h.id == id).ok_or(Error::NoSuchHole(id))
    }

    pub fn border(&self) -> Option<Sides> {
        self.border
    }

    pub fn group(&self) -> &StabilizerGroup {
        &self.group
    }

    pub fn params(&self) -> CodeParameters {
        self.params
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    pub fn n(&self) -> usize {
        self.hardware.n
    }

    /// Present plaquettes, in generator order.
    pub fn plaquettes(&self) -> &[Pos] {
        &self.plaquettes
    }

    /// Hardware qubits outside the software lattice, in generator order
    /// after the plaquettes.
    pub fn spectators(&self) -> &[usize] {
        &self.spectators
    }

    pub fn qubit(&self, s: Site) -> Result<usize> {
        match self.hardware.index(s) {
            Some(q) if self.layout.active.contains(&s) => Ok(q),
            _ => Err(Error::InactiveSite(s)),
        }
    }

    pub fn is_active(&self, s: Site) -> bool {
        self.layout.active.contains(&s)
    }

    pub fn plaquette_operator(&self, p: Pos) -> Result<PauliOperator> {
        if !self.plaquettes.contains(&p) {
            return Err(Error::MissingPlaquette(p.r, p.c));
        }
        let idx = self.layout.plaquette_sites(p).into_iter().map(|s| self.hardware.index(s).expect("active site"));
        Ok(PauliOperator::uniform(self.n(), idx, p.color().plaquette_letter()))
    }

    pub fn string_operator(&self, s: &StringPath) -> Result<PauliOperator> {
        s.check()?;
        let mut op = PauliOperator::identity(self.n());
        let single = |q| PauliOperator::single(self.n(), q, s.color.string_letter());
        for &site in &s.sites {
            let q = self.qubit(site).map_err(|_| Error::MalformedPath(format!("site {site} is not active")))?;
            op.mul_assign_unchecked(&single(q));
        }
        Ok(op)
    }

    /// True iff the string operator commutes with every generator.
    pub fn is_closed(&self, s: &StringPath) -> Result<bool> {
        self.group.in_normalizer(&self.string_operator(s)?)
    }

    pub fn is_boundary(&self, s: &StringPath) -> Result<bool> {
        let op = self.string_operator(s)?;
        if !self.group.in_normalizer(&op)? {
            return Err(Error::OpenString);
        }
        self.group.in_group(&op)
    }

    /// Homology data of the code: the deterministic logical basis, light
    /// classes first.
    pub fn homology_basis(&self) -> Result<LogicalBasis> {
        match self.group.logical_basis() {
            Err(Error::NoLogicals) => Ok(LogicalBasis { xops: Vec::new(), zops: Vec::new() }),
            other => other,
        }
    }

    pub fn homology_class(&self, s: &StringPath) -> Result<BitVec> {
        let op = self.string_operator(s)?;
        self.operator_class(&op)
    }

    /// Coordinates of a normalizer element in the class basis: one bit per
    /// light class, then one per dark class. Stabilizer elements map to zero.
    pub fn operator_class(&self, op: &PauliOperator) -> Result<BitVec> {
        if !self.group.in_normalizer(op)? {
            return Err(Error::OpenString);
        }
        let basis = self.homology_basis()?;
        let k = basis.k();
        let width = 2 * self.n();
        let mut rows: Vec<BitVec> = basis.xops.iter().chain(&basis.zops).map(PauliOperator::symplectic).collect();
        rows.extend(self.group.generators().iter().map(PauliOperator::symplectic));
        let rb = RowBasis::from_rows(width, &rows);
        let combo = rb.express(&op.symplectic()).ok_or(Error::OpenString)?;
        Ok(BitVec::from_indices(2 * k, (0..2 * k).filter(|&i| combo.get(i))))
    }
}

/// Builds the code described by `spec` on a register of `hardware_n`
/// qubits. The site grid is the spec's outer rectangle; qubits beyond it
/// are padding fixed in `|0⟩`.
pub fn build_code(spec: &LatticeSpec, hardware_n: usize) -> Result<SurfaceCode> {
    let needed = (spec.rows.max(0) * spec.cols.max(0)) as usize;
    if hardware_n < needed {
        return Err(Error::HardwareTooSmall { needed, available: hardware_n });
    }
    let layout = spec.layout()?;
    let hardware = Hardware { rows: spec.rows, cols: spec.cols, n: hardware_n };
    SurfaceCode::assemble(hardware, layout, BTreeSet::new(), spec.holes.clone(), Some(spec.border), true)
}

/// A string of sites. Consecutive sites must share a plaquette of the
/// string's color.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringPath {
    pub color: Color,
    pub sites: Vec<Site>,
}

impl StringPath {
    pub fn new(color: Color, sites: Vec<Site>) -> Self {
        Self { color, sites }
    }

    /// Straight run of sites along row `r` from column `c0` to `c1` inclusive.
    pub fn row(color: Color, r: i32, c0: i32, c1: i32) -> Self {
        let step = if c1 >= c0 { 1 } else { -1 };
        let mut sites = vec![Site::new(r, c0)];
        let mut c = c0;
        while c != c1 {
            c += step;
            sites.push(Site::new(r, c));
        }
        Self::new(color, sites)
    }

    /// Straight run of sites along column `c` from row `r0` to `r1` inclusive.
    pub fn column(color: Color, c: i32, r0: i32, r1: i32) -> Self {
        let row = Self::row(color, c, r0, r1);
        Self::new(color, row.sites.into_iter().map(|s| Site::new(s.c, s.r)).collect())
    }

    pub fn check(&self) -> Result<()> {
        for w in self.sites.windows(2) {
            let (a, b) = (w[0], w[1]);
            let shares = a.incident().iter().any(|p| p.color() == self.color && p.contains(b));
            if a == b || !shares {
                return Err(Error::MalformedPath(format!("{a} and {b} share no {} plaquette", self.color)));
            }
        }
        Ok(())
    }

    /// Sites visited an odd number of times.
    pub fn support(&self) -> BTreeSet<Site> {
        let mut counts: BTreeMap<Site, usize> = BTreeMap::new();
        for &s in &self.sites {
            *counts.entry(s).or_default() += 1;
        }
        counts.into_iter().filter(|(_, k)| k % 2 == 1).map(|(s, _)| s).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Parity of the number of sites shared by a dark and a light string.
pub fn crossing_parity(dark: &StringPath, light: &StringPath) -> Result<Parity> {
    if dark.color == light.color {
        return Err(Error::SameColor);
    }
    let shared = dark.support().intersection(&light.support()).count();
    Ok(if shared.is_multiple_of(2) { Parity::Even } else { Parity::Odd })
}
