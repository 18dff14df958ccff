//! Finite carpet approximations embedded in the square lattice.
//!
//! Level `n` lives in the absolute frame `[0, 3^(n-1)]^2`. A unit cell
//! `(i, j)` survives exactly when no ternary digit position carries a 1 in
//! both coordinates; vertices are the corners of surviving cells and edges
//! the cell sides. The tracked root accumulates one grid offset per word
//! letter, so the same absolute graph carries a different root for every
//! word.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::word::{Letter, RootLetter, WordSpec};

/// Default guard against accidentally huge builds (level 8 is ~2.7M vertices).
pub const DEFAULT_LEVEL_CAP: u32 = 8;

/// A lattice point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord {
    pub x: i64,
    pub y: i64,
}

impl Coord {
    pub const fn new(x: i64, y: i64) -> Self {
        Coord { x, y }
    }

    pub fn offset(self, dx: i64, dy: i64) -> Self {
        Coord::new(self.x + dx, self.y + dy)
    }

    pub fn l1(self, other: Coord) -> i64 {
        (self.x - other.x).abs() + (self.y - other.y).abs()
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Serialize for Coord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (self.x, self.y).serialize(serializer)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("level must be at least 1, got {0}")]
    LevelTooSmall(u32),
    #[error("level {level} exceeds the cap {cap}; raise the cap explicitly to build this size")]
    LevelCapExceeded { level: u32, cap: u32 },
    #[error("cell index ({i},{j}) out of range for level {level}")]
    CellOutOfRange { i: i64, j: i64, level: u32 },
}

/// Grid cell occupied by position `p` of the gluing pattern, counterclockwise
/// from bottom-left: the eight cells of the 3x3 block minus the center.
pub const POSITION_OFFSETS: [(i64, i64); 8] = [
    (0, 0),
    (1, 0),
    (2, 0),
    (2, 1),
    (2, 2),
    (1, 2),
    (0, 2),
    (0, 1),
];

/// Corner of the unit square carrying each root letter, counterclockwise from
/// bottom-left.
pub const ROOT_CORNERS: [(i64, i64); 4] = [(0, 0), (1, 0), (1, 1), (0, 1)];

pub fn position_offset(letter: Letter) -> Coord {
    let (x, y) = POSITION_OFFSETS[letter.value() as usize];
    Coord::new(x, y)
}

pub fn root_corner(root: RootLetter) -> Coord {
    let (x, y) = ROOT_CORNERS[root as usize];
    Coord::new(x, y)
}

pub fn side_for_level(level: u32) -> i64 {
    assert!(level >= 1, "levels start at 1");
    3i64.pow(level - 1)
}

/// Whether cell `(i, j)` of the level-`n` grid survives every subdivision:
/// true iff no ternary digit position below `n-1` has digit 1 in both `i`
/// and `j`.
pub fn cell_included(i: i64, j: i64, level: u32) -> Result<bool, BuildError> {
    if level < 1 {
        return Err(BuildError::LevelTooSmall(level));
    }
    let side = side_for_level(level);
    if i < 0 || j < 0 || i >= side || j >= side {
        return Err(BuildError::CellOutOfRange { i, j, level });
    }
    let (mut i, mut j) = (i, j);
    for _ in 0..level - 1 {
        if i % 3 == 1 && j % 3 == 1 {
            return Ok(false);
        }
        i /= 3;
        j /= 3;
    }
    Ok(true)
}

/// Root of the level-`n` approximation in the absolute frame:
/// the base corner plus one scaled grid offset per consumed letter.
pub fn root_coordinate(w: &WordSpec, level: u32) -> Coord {
    let mut c = root_corner(w.root());
    let mut scale = 1i64;
    for i in 1..level as usize {
        let off = position_offset(w.letter_at(i));
        c = c.offset(off.x * scale, off.y * scale);
        scale *= 3;
    }
    c
}

/// A built level-`n` approximation.
#[derive(Debug, Clone)]
pub struct FiniteCarpet {
    level: u32,
    side: i64,
    root_abs: Coord,
    root_letter: RootLetter,
    prefix_letters: Vec<Letter>,
    vertices: Vec<Coord>,
}

impl FiniteCarpet {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Edge length of the bounding square, `3^(n-1)`.
    pub fn side(&self) -> i64 {
        self.side
    }

    pub fn root_abs(&self) -> Coord {
        self.root_abs
    }

    pub fn root_letter(&self) -> RootLetter {
        self.root_letter
    }

    /// The word prefix consumed by the construction (`n-1` letters).
    pub fn word_prefix(&self) -> &[Letter] {
        &self.prefix_letters
    }

    /// All vertices in the absolute frame, sorted by `(x, y)`.
    pub fn vertices(&self) -> &[Coord] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn cell_included_unchecked(&self, i: i64, j: i64) -> bool {
        if i < 0 || j < 0 || i >= self.side || j >= self.side {
            return false;
        }
        let (mut i, mut j) = (i, j);
        for _ in 0..self.level - 1 {
            if i % 3 == 1 && j % 3 == 1 {
                return false;
            }
            i /= 3;
            j /= 3;
        }
        true
    }

    /// O(level) membership test: a point is a vertex iff it is the corner of
    /// some surviving cell.
    pub fn contains(&self, c: Coord) -> bool {
        is_vertex(c, self.level)
    }

    /// Whether the unit edge from `p` toward `(dx,dy)` exists: at least one
    /// of the two flanking cells must survive.
    pub fn has_edge(&self, p: Coord, dx: i64, dy: i64) -> bool {
        debug_assert!((dx.abs() == 1) ^ (dy.abs() == 1));
        let q = p.offset(dx, dy);
        let (a, b) = edge_flanking_cells(p, q);
        self.cell_included_unchecked(a.x, a.y) || self.cell_included_unchecked(b.x, b.y)
    }

    pub fn neighbors(&self, p: Coord) -> impl Iterator<Item = Coord> + '_ {
        const DIRS: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
        DIRS.iter()
            .filter(move |&&(dx, dy)| self.has_edge(p, dx, dy))
            .map(move |&(dx, dy)| p.offset(dx, dy))
    }

    /// All edges as normalized pairs, sorted.
    pub fn edges(&self) -> Vec<(Coord, Coord)> {
        let mut out = Vec::new();
        for &v in &self.vertices {
            if self.has_edge(v, 1, 0) {
                out.push((v, v.offset(1, 0)));
            }
            if self.has_edge(v, 0, 1) {
                out.push((v, v.offset(0, 1)));
            }
        }
        out
    }

    pub fn to_relative(&self, p: Coord) -> Coord {
        Coord::new(p.x - self.root_abs.x, p.y - self.root_abs.y)
    }

    pub fn to_absolute(&self, p: Coord) -> Coord {
        Coord::new(p.x + self.root_abs.x, p.y + self.root_abs.y)
    }

    /// The whole carpet as a root-relative fragment.
    pub fn as_fragment(&self) -> BallFragment {
        let vertices: BTreeSet<Coord> =
            self.vertices.iter().map(|&v| self.to_relative(v)).collect();
        let edges = self
            .edges()
            .into_iter()
            .map(|(a, b)| (self.to_relative(a), self.to_relative(b)))
            .collect();
        BallFragment {
            radius: None,
            vertices,
            edges,
        }
    }
}

/// Whether `c` is a vertex of the level-`n` approximation (absolute frame).
pub fn is_vertex(c: Coord, level: u32) -> bool {
    if level < 1 {
        return false;
    }
    let side = side_for_level(level);
    if c.x < 0 || c.y < 0 || c.x > side || c.y > side {
        return false;
    }
    let cell = |i: i64, j: i64| -> bool {
        if i < 0 || j < 0 || i >= side || j >= side {
            return false;
        }
        cell_included(i, j, level).unwrap_or(false)
    };
    cell(c.x - 1, c.y - 1) || cell(c.x - 1, c.y) || cell(c.x, c.y - 1) || cell(c.x, c.y)
}

fn edge_flanking_cells(p: Coord, q: Coord) -> (Coord, Coord) {
    if p.y == q.y {
        // horizontal edge between x and x+1
        let x = p.x.min(q.x);
        (Coord::new(x, p.y - 1), Coord::new(x, p.y))
    } else {
        let y = p.y.min(q.y);
        (Coord::new(p.x - 1, y), Coord::new(p.x, y))
    }
}

/// Builds the level-`n` approximation with the default level cap.
pub fn build_level(w: &WordSpec, level: u32) -> Result<FiniteCarpet, BuildError> {
    build_level_with_cap(w, level, DEFAULT_LEVEL_CAP)
}

pub fn build_level_with_cap(
    w: &WordSpec,
    level: u32,
    cap: u32,
) -> Result<FiniteCarpet, BuildError> {
    if level < 1 {
        return Err(BuildError::LevelTooSmall(level));
    }
    if level > cap {
        return Err(BuildError::LevelCapExceeded { level, cap });
    }
    let side = side_for_level(level);
    let mut carpet = FiniteCarpet {
        level,
        side,
        root_abs: root_coordinate(w, level),
        root_letter: w.root(),
        prefix_letters: (1..level as usize).map(|i| w.letter_at(i)).collect(),
        vertices: Vec::new(),
    };
    let mut vertices = Vec::new();
    for x in 0..=side {
        for y in 0..=side {
            let c = Coord::new(x, y);
            if carpet.contains(c) {
                vertices.push(c);
            }
        }
    }
    carpet.vertices = vertices;
    debug_assert!(carpet.contains(carpet.root_abs));
    Ok(carpet)
}

/// Closed-form vertex count of the level-`n` approximation.
pub fn vertex_count_formula(level: u32) -> u128 {
    // (11/70)*8^n + (8/15)*3^n + 8/7, cleared to denominator 210
    let n = level;
    let total = 33 * 8u128.pow(n) + 112 * 3u128.pow(n) + 240;
    assert_eq!(total % 210, 0);
    total / 210
}

/// One of the four sides of a hole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HoleSide {
    /// `s1`
    Top,
    /// `s3`
    Left,
    /// `s5`
    Bottom,
    /// `s7`
    Right,
}

/// A square hole: a maximal excluded block of `3^(m-2) x 3^(m-2)` cells.
/// Corners run counterclockwise from bottom-left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Hole {
    pub hole_level: u32,
    pub a: Coord,
    pub b: Coord,
    pub c: Coord,
    pub d: Coord,
}

impl Hole {
    fn from_corner(a: Coord, hole_level: u32) -> Self {
        let s = 3i64.pow(hole_level - 2);
        Hole {
            hole_level,
            a,
            b: a.offset(s, 0),
            c: a.offset(s, s),
            d: a.offset(0, s),
        }
    }

    /// Edge length of the hole square.
    pub fn side_len(&self) -> i64 {
        3i64.pow(self.hole_level - 2)
    }

    /// Vertices of one side, in increasing coordinate order; each side has
    /// `3^(m-2)+1` of them.
    pub fn side(&self, which: HoleSide) -> Vec<Coord> {
        let s = self.side_len();
        match which {
            HoleSide::Top => (0..=s).map(|i| self.d.offset(i, 0)).collect(),
            HoleSide::Left => (0..=s).map(|i| self.a.offset(0, i)).collect(),
            HoleSide::Bottom => (0..=s).map(|i| self.a.offset(i, 0)).collect(),
            HoleSide::Right => (0..=s).map(|i| self.b.offset(0, i)).collect(),
        }
    }

    /// All boundary vertices (corners not repeated): `4*3^(m-2)` of them.
    pub fn boundary(&self) -> Vec<Coord> {
        let s = self.side_len();
        let mut out = Vec::with_capacity(4 * s as usize);
        out.extend((0..s).map(|i| self.a.offset(i, 0)));
        out.extend((0..s).map(|i| self.b.offset(0, i)));
        out.extend((0..s).map(|i| self.c.offset(-i, 0)));
        out.extend((0..s).map(|i| self.d.offset(0, -i)));
        out
    }

    /// Whether a point lies strictly inside the hole square.
    pub fn strictly_inside(&self, p: Coord) -> bool {
        p.x > self.a.x && p.x < self.b.x && p.y > self.a.y && p.y < self.d.y
    }
}

/// All holes of level at least `min_level` in the built carpet. A hole of
/// level `m` sits at the center of each surviving `3^(m-1)`-cell block, so
/// there are `8^(n-m)` of them; they are keyed by the block grid.
pub fn enumerate_holes(g: &FiniteCarpet, min_level: u32) -> Vec<Hole> {
    holes_for_level(g.level(), min_level)
}

/// Same as [`enumerate_holes`], from the level alone.
pub fn holes_for_level(n: u32, min_level: u32) -> Vec<Hole> {
    assert!(min_level >= 2, "holes start at level 2");
    let mut out = Vec::new();
    for m in min_level..=n {
        let s = 3i64.pow(m - 2);
        let blocks = 3i64.pow(n - m); // block grid side at scale m
        for a in 0..blocks {
            for b in 0..blocks {
                if cell_included(a, b, n - m + 1).unwrap() {
                    let corner = Coord::new((3 * a + 1) * s, (3 * b + 1) * s);
                    out.push(Hole::from_corner(corner, m));
                }
            }
        }
    }
    out.sort_by_key(|h| (std::cmp::Reverse(h.hole_level), h.a));
    out
}

/// The central hole of the level-`n` square in the absolute frame.
pub fn central_hole(level: u32) -> Hole {
    let s = 3i64.pow(level - 2);
    Hole::from_corner(Coord::new(s, s), level)
}

/// Root-relative induced subgraph on a geodesic ball, used for comparing
/// neighborhoods of the root across construction levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallFragment {
    pub radius: Option<u32>,
    /// Root-relative coordinates; the root itself is `(0,0)`.
    pub vertices: BTreeSet<Coord>,
    pub edges: BTreeSet<(Coord, Coord)>,
}

/// Induced subgraph on vertices at geodesic distance at most `r` from the
/// root, in root-relative coordinates.
pub fn rooted_ball(g: &FiniteCarpet, r: u32) -> BallFragment {
    let mut dist: BTreeMap<Coord, u32> = BTreeMap::new();
    let mut queue = VecDeque::new();
    dist.insert(g.root_abs(), 0);
    queue.push_back(g.root_abs());
    while let Some(p) = queue.pop_front() {
        let d = dist[&p];
        if d == r {
            continue;
        }
        for q in g.neighbors(p) {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(q) {
                e.insert(d + 1);
                queue.push_back(q);
            }
        }
    }
    let vertices: BTreeSet<Coord> = dist.keys().map(|&p| g.to_relative(p)).collect();
    let mut edges = BTreeSet::new();
    for &p in dist.keys() {
        for q in g.neighbors(p) {
            if dist.contains_key(&q) {
                let (a, b) = (g.to_relative(p), g.to_relative(q));
                edges.insert(if a <= b { (a, b) } else { (b, a) });
            }
        }
    }
    BallFragment {
        radius: Some(r),
        vertices,
        edges,
    }
}

/// Root-preserving identification of two fragments: equality of the
/// root-relative vertex and edge sets. Two finite words name the same rooted
/// graph exactly when their roots land on the same lattice point, so no
/// symmetry quotient is applied.
pub fn rooted_isomorphic(f1: &BallFragment, f2: &BallFragment) -> bool {
    f1.vertices == f2.vertices && f1.edges == f2.edges
}
