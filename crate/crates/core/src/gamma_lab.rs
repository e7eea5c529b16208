//! Discrete-to-continuum experiments: recovery sequences for a target shape,
//! their rescaled excess, missing-bond densities along each side, and the
//! compactness and lower-bound diagnostics.
//!
//! Large configurations never go through the face complex: a subset of the
//! lattice has all its unit squares crystallized, so bonds, squares and the
//! perimeter of their union are read off a hash set of cells.

use std::collections::{HashSet, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};

use geo::{Area, BooleanOps, LineString, MultiPolygon, Polygon};
use rayon::prelude::*;
use serde::Serialize;

use crate::anisotropy::{aniso_perimeter, phi_raw, region_aniso_perimeter, wulff_octagon, PolygonalSet};
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::face_complex::{comb_perimeter_region, FaceComplex, FaceId, FaceKind, SelectionRule};
use crate::geometry::{signed_area2, Point, Vector};
use crate::ground_state::{Cell, KING};

/// Area-one test shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shape {
    Square,
    Diamond,
    Octagon,
    LShape,
    Hexagon,
}

impl Shape {
    pub const ALL: [Shape; 5] = [Shape::Square, Shape::Diamond, Shape::Octagon, Shape::LShape, Shape::Hexagon];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Square => "square",
            Shape::Diamond => "diamond",
            Shape::Octagon => "octagon",
            Shape::LShape => "lshape",
            Shape::Hexagon => "hexagon",
        }
    }

    pub fn from_name(name: &str) -> Option<Shape> {
        Shape::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn polygon(self) -> PolygonalSet {
        let pts = |v: &[(f64, f64)]| v.iter().map(|&(x, y)| Point::new(x, y)).collect::<Vec<_>>();
        let set = match self {
            Shape::Square => PolygonalSet::polygon(pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])),
            Shape::Diamond => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                PolygonalSet::polygon(pts(&[(r, 0.0), (0.0, r), (-r, 0.0), (0.0, -r)]))
            }
            Shape::Octagon => wulff_octagon(1.0 / 7f64.sqrt()),
            Shape::LShape => {
                let s = 1.0 / 3f64.sqrt();
                PolygonalSet::polygon(pts(&[
                    (0.0, 0.0),
                    (2.0 * s, 0.0),
                    (2.0 * s, s),
                    (s, s),
                    (s, 2.0 * s),
                    (0.0, 2.0 * s),
                ]))
            }
            Shape::Hexagon => {
                // regular hexagon of area (3 sqrt 3 / 2) r^2 = 1
                let r = (2.0 / (3.0 * 3f64.sqrt())).sqrt();
                PolygonalSet::polygon(
                    (0..6)
                        .map(|k| {
                            let t = std::f64::consts::PI / 3.0 * k as f64;
                            Point::new(r * t.cos(), r * t.sin())
                        })
                        .collect(),
                )
            }
        };
        set.expect("built-in shapes are non-degenerate")
    }
}

/// PNPOLY crossing test. For axis-parallel sides it includes the lower and
/// left boundary and excludes the upper and right one, which makes lattice
/// cardinalities deterministic.
pub fn half_open_contains(set: &PolygonalSet, p: &Point) -> bool {
    let mut inside = false;
    for c in &set.curves {
        let m = c.len();
        let mut j = m - 1;
        for i in 0..m {
            let (a, b) = (c[i], c[j]);
            if (a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x {
                inside = !inside;
            }
            j = i;
        }
    }
    inside
}

/// A finite subset of the square lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSet {
    cells: HashSet<Cell>,
}

impl LatticeSet {
    pub fn new(cells: impl IntoIterator<Item = Cell>) -> Self {
        LatticeSet { cells: cells.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: &Cell) -> bool {
        self.cells.contains(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter()
    }

    /// Points in raster order (by row, then column).
    pub fn sorted(&self) -> Vec<Cell> {
        let mut v: Vec<Cell> = self.cells.iter().copied().collect();
        v.sort_unstable_by_key(|&(x, y)| (y, x));
        v
    }

    pub fn edge_count(&self) -> usize {
        self.cells
            .iter()
            .map(|&(x, y)| KING[..4].iter().filter(|(dx, dy)| self.cells.contains(&(x + dx, y + dy))).count())
            .sum()
    }

    /// `F = 8N - 2E`.
    pub fn excess(&self) -> i64 {
        8 * self.len() as i64 - 2 * self.edge_count() as i64
    }

    /// Lower-left corners of the crystallized unit squares.
    pub fn boxtimes_cells(&self) -> Vec<Cell> {
        let mut out: Vec<Cell> = self
            .cells
            .iter()
            .copied()
            .filter(|&(x, y)| [(1, 0), (0, 1), (1, 1)].iter().all(|(dx, dy)| self.cells.contains(&(x + dx, y + dy))))
            .collect();
        out.sort_unstable();
        out
    }

    /// Unit lattice edges adjacent to exactly one crystallized square.
    pub fn boxtimes_perimeter(&self) -> usize {
        let sq: HashSet<Cell> = self.boxtimes_cells().into_iter().collect();
        sq.iter()
            .map(|&(x, y)| {
                [(0, -1), (0, 1), (-1, 0), (1, 0)].iter().filter(|(dx, dy)| !sq.contains(&(x + dx, y + dy))).count()
            })
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.cells.iter().next() else {
            return true;
        };
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some((x, y)) = queue.pop_front() {
            for (dx, dy) in KING {
                let c = (x + dx, y + dy);
                if self.cells.contains(&c) && seen.insert(c) {
                    queue.push_back(c);
                }
            }
        }
        seen.len() == self.cells.len()
    }

    pub fn to_configuration(&self) -> Configuration {
        Configuration::lattice(self.sorted()).expect("distinct lattice cells")
    }
}

/// `F(X) / sqrt(#X)` for any feasible configuration.
pub fn rescaled_excess(config: &Configuration) -> Result<f64> {
    if config.is_empty() {
        return Err(Error::InvalidArgument("empty configuration".into()));
    }
    let f = crate::bond_graph::BondGraph::build(config.clone())?.energy().1;
    Ok(f as f64 / (config.len() as f64).sqrt())
}

/// Lattice points of `sqrt(n) E`, half-open on the boundary.
pub fn lattice_points_in(e: &PolygonalSet, n: usize) -> LatticeSet {
    let scaled = e.scaled((n as f64).sqrt());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in scaled.vertices() {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    let mut cells = Vec::new();
    for y in y0.floor() as i64..=y1.ceil() as i64 {
        for x in x0.floor() as i64..=x1.ceil() as i64 {
            if half_open_contains(&scaled, &Point::new(x as f64, y as f64)) {
                cells.push((x, y));
            }
        }
    }
    LatticeSet::new(cells)
}

/// `sqrt(n) E` intersected with the lattice, then corrected to exactly `n`
/// points along the boundary: a deficit is filled one point at a time into
/// the empty cell with the most occupied neighbours, a surplus is removed one
/// point at a time from those with the fewest (ties broken in raster order).
/// Each step changes the excess by `8 - 2k` for a cell with `k` neighbours,
/// so the correction stays flush with the boundary and costs `O(1)` per
/// completed run instead of the `O(sqrt d)` of a free-standing patch.
pub fn recovery_lattice(e: &PolygonalSet, n: usize) -> Result<LatticeSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let area = e.area();
    if (area - 1.0).abs() > 1e-9 {
        return Err(Error::DegenerateTarget(format!("target area {area} is not 1")));
    }
    let mut set = lattice_points_in(e, n);
    if 2 * set.len() < n {
        return Err(Error::DegenerateTarget(format!(
            "only {} lattice points inside the scaled target for n = {n}",
            set.len()
        )));
    }
    let have = set.len();
    if have < n {
        grow_flush(&mut set, n - have);
    } else if have > n {
        shrink_flush(&mut set, have - n);
    }
    if !set.is_connected() {
        return Err(Error::DegenerateTarget(format!("recovery configuration for n = {n} is disconnected")));
    }
    Ok(set)
}

fn occupied_count(set: &HashSet<Cell>, (x, y): Cell) -> usize {
    KING.iter().filter(|(dx, dy)| set.contains(&(x + dx, y + dy))).count()
}

fn grow_flush(set: &mut LatticeSet, d: usize) {
    let mut frontier: std::collections::HashMap<Cell, usize> = std::collections::HashMap::new();
    for &(x, y) in &set.cells {
        for (dx, dy) in KING {
            let c = (x + dx, y + dy);
            if !set.cells.contains(&c) {
                frontier.insert(c, 0);
            }
        }
    }
    for (c, k) in frontier.iter_mut() {
        *k = occupied_count(&set.cells, *c);
    }
    for _ in 0..d {
        let (&c, _) = frontier
            .iter()
            .max_by(|(a, ka), (b, kb)| ka.cmp(kb).then_with(|| (b.1, b.0).cmp(&(a.1, a.0))))
            .expect("non-empty frontier");
        frontier.remove(&c);
        set.cells.insert(c);
        for (dx, dy) in KING {
            let nb = (c.0 + dx, c.1 + dy);
            if !set.cells.contains(&nb) {
                *frontier.entry(nb).or_insert(0) += 1;
            }
        }
    }
}

fn shrink_flush(set: &mut LatticeSet, d: usize) {
    // only boundary points can have fewer than eight neighbours
    let mut boundary: std::collections::HashMap<Cell, usize> = set
        .cells
        .iter()
        .map(|&c| (c, occupied_count(&set.cells, c)))
        .filter(|&(_, k)| k < 8)
        .collect();
    for _ in 0..d {
        let (&c, _) = boundary
            .iter()
            .min_by(|(a, ka), (b, kb)| ka.cmp(kb).then_with(|| (b.1, b.0).cmp(&(a.1, a.0))))
            .expect("non-empty set");
        boundary.remove(&c);
        set.cells.remove(&c);
        for (dx, dy) in KING {
            let nb = (c.0 + dx, c.1 + dy);
            if set.cells.contains(&nb) {
                *boundary.entry(nb).or_insert(8) -= 1;
            }
        }
    }
}

/// The recovery configuration as a lattice [`Configuration`].
pub fn recovery_sequence(e: &PolygonalSet, n: usize) -> Result<Configuration> {
    Ok(recovery_lattice(e, n)?.to_configuration())
}

fn to_multipolygon(set: &PolygonalSet) -> MultiPolygon<f64> {
    let ring = |c: &Vec<Point>| LineString::from(c.iter().map(|p| (p.x, p.y)).collect::<Vec<_>>());
    let mut polys: Vec<(Vec<Point>, Vec<LineString<f64>>)> = Vec::new();
    let mut holes = Vec::new();
    for c in &set.curves {
        if signed_area2(c) > 0.0 {
            polys.push((c.clone(), Vec::new()));
        } else {
            holes.push(c);
        }
    }
    for h in holes {
        if let Some(p) = polys.iter_mut().find(|(outer, _)| crate::geometry::winding_number(outer, &h[0]) != 0) {
            p.1.push(ring(h));
        }
    }
    MultiPolygon::new(polys.into_iter().map(|(outer, hs)| Polygon::new(ring(&outer), hs)).collect())
}

/// Area of the symmetric difference of two polygonal sets.
pub fn symdiff_area(a: &PolygonalSet, b: &PolygonalSet) -> f64 {
    to_multipolygon(a).xor(&to_multipolygon(b)).unsigned_area()
}

/// Clips `subject` against the axis-parallel box `[x0, x1] x [y0, y1]`.
fn clip_to_box(subject: &[Point], x0: f64, x1: f64, y0: f64, y1: f64) -> Vec<Point> {
    type Side = (fn(&Point, f64) -> f64, f64);
    // signed distance inside each half-plane (positive = inside)
    let sides: [Side; 4] = [(|p, v| p.x - v, x0), (|p, v| v - p.x, x1), (|p, v| p.y - v, y0), (|p, v| v - p.y, y1)];
    let mut out = subject.to_vec();
    for (dist, v) in sides {
        if out.is_empty() {
            break;
        }
        let input = std::mem::take(&mut out);
        for i in 0..input.len() {
            let (p, q) = (input[i], input[(i + 1) % input.len()]);
            let (dp, dq) = (dist(&p, v), dist(&q, v));
            if dp >= 0.0 {
                out.push(p);
            }
            if (dp >= 0.0) != (dq >= 0.0) {
                let t = dp / (dp - dq);
                out.push(Point::new(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)));
            }
        }
    }
    out
}

/// Area of `A △ E` where `A` is the union of the unit squares with lower-left
/// corners `cells`, scaled by `scale`.
pub fn cells_symdiff_area(cells: &[Cell], scale: f64, e: &PolygonalSet) -> f64 {
    let cell_area = scale * scale;
    let mut inter = 0.0;
    for &(x, y) in cells {
        let (x0, y0) = (x as f64 * scale, y as f64 * scale);
        let (x1, y1) = (x0 + scale, y0 + scale);
        let corners = [Point::new(x0, y0), Point::new(x1, y0), Point::new(x1, y1), Point::new(x0, y1)];
        let vertex_inside = e.vertices().any(|p| p.x > x0 && p.x < x1 && p.y > y0 && p.y < y1);
        let inside = corners.iter().filter(|c| e.contains(c)).count();
        if !vertex_inside && inside == 4 && !crosses_box(e, x0, x1, y0, y1) {
            inter += cell_area;
        } else if !vertex_inside && inside == 0 && !crosses_box(e, x0, x1, y0, y1) {
            continue;
        } else {
            inter += e.curves.iter().map(|c| signed_area2(&clip_to_box(c, x0, x1, y0, y1))).sum::<f64>() / 2.0;
        }
    }
    cells.len() as f64 * cell_area + e.area() - 2.0 * inter
}

fn crosses_box(e: &PolygonalSet, x0: f64, x1: f64, y0: f64, y1: f64) -> bool {
    e.segments().any(|s| {
        let (ax, bx) = (s.a.x.min(s.b.x), s.a.x.max(s.b.x));
        let (ay, by) = (s.a.y.min(s.b.y), s.a.y.max(s.b.y));
        if bx < x0 || ax > x1 || by < y0 || ay > y1 {
            return false;
        }
        // the segment's line separates some pair of box corners
        let d = s.direction();
        let side = |x: f64, y: f64| d.x * (y - s.a.y) - d.y * (x - s.a.x);
        let v = [side(x0, y0), side(x1, y0), side(x1, y1), side(x0, y1)];
        v.iter().any(|&t| t > 0.0) && v.iter().any(|&t| t < 0.0)
    })
}

/// Outward normal of the side from `a` to `b` of a counterclockwise curve.
fn outward_normal(a: &Point, b: &Point) -> Vector {
    let d = b.sub(a);
    let n = d.norm();
    Vector::new(d.y / n, -d.x / n)
}

/// Predicted missing-bond densities per unit length of a side with outward
/// normal `nu`: horizontal, vertical, `(1,1)`-diagonal, `(1,-1)`-diagonal.
pub fn predicted_densities(nu: Vector) -> [f64; 4] {
    [nu.x.abs(), nu.y.abs(), (nu.x + nu.y).abs(), (nu.x - nu.y).abs()]
}

#[derive(Debug, Clone, Serialize)]
pub struct SideDensity {
    pub side: usize,
    pub normal: Vector,
    pub length: f64,
    /// Missing bonds per unit length: horizontal, vertical, `(1,1)`, `(1,-1)`.
    pub measured: [f64; 4],
    pub predicted: [f64; 4],
    pub phi: f64,
}

impl SideDensity {
    pub fn max_abs_deviation(&self) -> f64 {
        (0..4).map(|k| (self.measured[k] - self.predicted[k]).abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityTable {
    pub n: usize,
    pub sides: Vec<SideDensity>,
}

impl DensityTable {
    pub fn max_abs_deviation(&self) -> f64 {
        self.sides.iter().map(SideDensity::max_abs_deviation).fold(0.0, f64::max)
    }

    /// Largest deviation measured in units of `phi` of the side's normal.
    pub fn max_relative_deviation(&self) -> f64 {
        self.sides.iter().map(|s| s.max_abs_deviation() / s.phi).fold(0.0, f64::max)
    }
}

fn direction_class((dx, dy): Cell) -> usize {
    match (dx, dy) {
        (_, 0) => 0,
        (0, _) => 1,
        (a, b) if a == b => 2,
        _ => 3,
    }
}

fn point_segment_dist2(p: &Point, a: &Point, b: &Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    let (cx, cy) = (a.x + t * dx - p.x, a.y + t * dy - p.y);
    cx * cx + cy * cy
}

/// Missing bonds of the recovery configuration, sorted by direction and
/// attributed to the side of `sqrt(n) E` nearest to the bond's midpoint.
pub fn directional_density(e: &PolygonalSet, n: usize) -> Result<DensityTable> {
    // measured on the uncorrected set: the cardinality fix-up is a local
    // O(sqrt n) perturbation parked on one side and would bias that side alone
    let set = lattice_points_in(e, n);
    if set.is_empty() {
        return Err(Error::DegenerateTarget(format!("no lattice points inside the scaled target for n = {n}")));
    }
    let root = (n as f64).sqrt();
    let scaled = e.scaled(root);
    let sides: Vec<(Point, Point)> = scaled.segments().map(|s| (s.a, s.b)).collect();
    let mut counts = vec![[0usize; 4]; sides.len()];
    for &(x, y) in set.iter() {
        for d in KING {
            if set.contains(&(x + d.0, y + d.1)) {
                continue;
            }
            let mid = Point::new(x as f64 + d.0 as f64 / 2.0, y as f64 + d.1 as f64 / 2.0);
            let side = (0..sides.len())
                .min_by(|&i, &j| {
                    point_segment_dist2(&mid, &sides[i].0, &sides[i].1)
                        .total_cmp(&point_segment_dist2(&mid, &sides[j].0, &sides[j].1))
                })
                .expect("polygon has sides");
            counts[side][direction_class(d)] += 1;
        }
    }
    let sides = sides
        .iter()
        .zip(counts)
        .enumerate()
        .map(|(k, ((a, b), c))| {
            let normal = outward_normal(a, b);
            let length = b.sub(a).norm() / root;
            SideDensity {
                side: k,
                normal,
                length,
                measured: c.map(|v| v as f64 / (length * root)),
                predicted: predicted_densities(normal),
                phi: phi_raw(normal),
            }
        })
        .collect();
    Ok(DensityTable { n, sides })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CompactnessReport {
    pub n: usize,
    pub excess: i64,
    pub boxtimes: usize,
    pub boxtimes_perimeter: usize,
    /// `#F_boxtimes >= N - F`.
    pub count_bound_ok: bool,
    /// `P_comb(A_boxtimes) <= 7 F`.
    pub perimeter_bound_ok: bool,
}

impl CompactnessReport {
    fn new(n: usize, excess: i64, boxtimes: usize, boxtimes_perimeter: usize) -> Self {
        CompactnessReport {
            n,
            excess,
            boxtimes,
            boxtimes_perimeter,
            count_bound_ok: boxtimes as i64 >= n as i64 - excess,
            perimeter_bound_ok: boxtimes_perimeter as i64 <= 7 * excess,
        }
    }

    pub fn holds(&self) -> bool {
        self.count_bound_ok && self.perimeter_bound_ok
    }
}

/// Compactness bounds on any admissible configuration.
pub fn compactness_diagnostics(fc: &FaceComplex) -> Result<CompactnessReport> {
    let sel = fc.select_region(&fc.selection(SelectionRule::Boxtimes))?;
    let g = fc.graph();
    Ok(CompactnessReport::new(
        g.vertex_count(),
        g.energy().1,
        fc.boxtimes_faces().len(),
        comb_perimeter_region(&sel),
    ))
}

/// Same bounds, read directly off a lattice set.
pub fn lattice_compactness(set: &LatticeSet) -> CompactnessReport {
    let r = CompactnessReport::new(set.len(), set.excess(), set.boxtimes_cells().len(), set.boxtimes_perimeter());
    record(&r);
    r
}

static COMPACTNESS_CHECKED: AtomicU64 = AtomicU64::new(0);
static COMPACTNESS_VIOLATED: AtomicU64 = AtomicU64::new(0);

/// Configurations seen by the compactness hook in this process, and how many
/// of them violated a bound. With debug assertions on, every sup-norm face
/// complex and every recovery lattice set is checked as it is built.
pub fn compactness_hook_stats() -> (u64, u64) {
    (COMPACTNESS_CHECKED.load(Ordering::Relaxed), COMPACTNESS_VIOLATED.load(Ordering::Relaxed))
}

pub(crate) fn observe_compactness(fc: &FaceComplex) {
    if let Ok(r) = compactness_diagnostics(fc) {
        record(&r);
    }
}

fn record(r: &CompactnessReport) {
    COMPACTNESS_CHECKED.fetch_add(1, Ordering::Relaxed);
    if !r.holds() {
        COMPACTNESS_VIOLATED.fetch_add(1, Ordering::Relaxed);
        debug_assert!(false, "compactness bound violated: {r:?}");
    }
}

pub const LIMINF_BETA: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiminfReport {
    pub n: usize,
    pub beta: f64,
    /// `F / sqrt(N)`.
    pub c: f64,
    /// `P_phi(N^{-1/2} A_S)`.
    pub rescaled_aniso_perimeter: f64,
    /// `N^{-1/2} F + 64 C N^{-beta}`.
    pub perimeter_allowance: f64,
    pub large_faces: usize,
    /// `8 C N^{1/2 - beta}`.
    pub large_face_allowance: f64,
    pub perimeter_ok: bool,
    pub face_count_ok: bool,
}

impl LiminfReport {
    pub fn holds(&self) -> bool {
        self.perimeter_ok && self.face_count_ok
    }
}

/// The lower-bound inequalities with `S` = crystallized squares plus bounded
/// faces of combinatorial perimeter at most `N^beta`.
pub fn liminf_check(fc: &FaceComplex, beta: f64) -> Result<LiminfReport> {
    let g = fc.graph();
    let n = g.vertex_count();
    let root = (n as f64).sqrt();
    let f = g.energy().1 as f64;
    let c = f / root;
    let cutoff = (n as f64).powf(beta);
    let selection: Vec<FaceId> = fc
        .bounded_faces()
        .filter(|&k| fc.face(k).kind == FaceKind::Boxtimes || fc.face(k).comb_perimeter() as f64 <= cutoff)
        .collect();
    let sel = fc.select_region(&selection)?;
    let p = region_aniso_perimeter(fc, &sel) / root;
    let allowance = f / root + 64.0 * c * (n as f64).powf(-beta);
    let large = fc
        .bounded_faces()
        .filter(|&k| fc.face(k).kind == FaceKind::Planar && fc.face(k).comb_perimeter() as f64 > cutoff)
        .count();
    let face_allowance = 8.0 * c * (n as f64).powf(0.5 - beta);
    Ok(LiminfReport {
        n,
        beta,
        c,
        rescaled_aniso_perimeter: p,
        perimeter_allowance: allowance,
        large_faces: large,
        large_face_allowance: face_allowance,
        perimeter_ok: p <= allowance + 1e-9,
        face_count_ok: large as f64 <= face_allowance,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaRecord {
    pub n: usize,
    pub cardinality: usize,
    pub excess: i64,
    pub rescaled_excess: f64,
    pub symdiff: f64,
    pub compactness: CompactnessReport,
    /// Only evaluated up to [`LIMINF_MAX_N`] points.
    pub liminf: Option<LiminfReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaExperiment {
    pub target_area: f64,
    pub target_aniso_perimeter: f64,
    pub records: Vec<GammaRecord>,
}

/// Largest configuration on which the face complex is built in a sweep.
pub const LIMINF_MAX_N: usize = 20_000;

pub fn gamma_record(e: &PolygonalSet, n: usize) -> Result<GammaRecord> {
    let set = recovery_lattice(e, n)?;
    let root = (n as f64).sqrt();
    let excess = set.excess();
    let liminf = if n <= LIMINF_MAX_N {
        let fc = FaceComplex::from_config(set.to_configuration())?;
        Some(liminf_check(&fc, LIMINF_BETA)?)
    } else {
        None
    };
    Ok(GammaRecord {
        n,
        cardinality: set.len(),
        excess,
        rescaled_excess: excess as f64 / root,
        symdiff: cells_symdiff_area(&set.boxtimes_cells(), 1.0 / root, e),
        compactness: lattice_compactness(&set),
        liminf,
    })
}

/// Recovery configurations of `e` for each `n`, evaluated in parallel.
pub fn gamma_sweep(e: &PolygonalSet, n_values: &[usize]) -> Result<GammaExperiment> {
    let records = n_values.par_iter().map(|&n| gamma_record(e, n)).collect::<Result<Vec<_>>>()?;
    Ok(GammaExperiment { target_area: e.area(), target_aniso_perimeter: aniso_perimeter(e), records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_have_unit_area() {
        for s in Shape::ALL {
            assert!((s.polygon().area() - 1.0).abs() < 1e-12, "{s:?}");
        }
        assert!((aniso_perimeter(&Shape::Square.polygon()) - 12.0).abs() < 1e-12);
        let n = Vector::new(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);
        assert!((predicted_densities(n).iter().sum::<f64>() - phi_raw(n)).abs() < 1e-15);
        assert_eq!(outward_normal(&Point::new(0.0, 0.0), &Point::new(1.0, 0.0)), Vector::new(0.0, -1.0));
    }

    #[test]
    fn half_open_square() {
        let set = lattice_points_in(&Shape::Square.polygon(), 4);
        assert_eq!(set.sorted(), vec![(0, 0), (1, 0), (0, 1), (1, 1)]);
        let r = recovery_lattice(&Shape::Square.polygon(), 4).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r.excess(), 20);
    }

    #[test]
    fn recovery_has_exact_cardinality() {
        for s in [Shape::Square, Shape::Diamond, Shape::Octagon, Shape::LShape] {
            for n in [5, 17, 50, 99, 100, 101, 1000, 1234] {
                let r = recovery_lattice(&s.polygon(), n).unwrap();
                assert_eq!(r.len(), n, "{s:?} {n}");
                assert!(r.is_connected());
            }
        }
    }

    #[test]
    fn block_statistics() {
        let block = LatticeSet::new((0..10).flat_map(|x| (0..10).map(move |y| (x, y))));
        assert_eq!(block.excess(), 12 * 10 - 4);
        assert_eq!(block.boxtimes_cells().len(), 81);
        assert_eq!(block.boxtimes_perimeter(), 36);
        let g = crate::bond_graph::BondGraph::build(block.to_configuration()).unwrap();
        assert_eq!(g.edge_count(), block.edge_count());
    }

    #[test]
    fn symdiff_examples() {
        let sq = Shape::Square.polygon();
        assert!(symdiff_area(&sq, &sq).abs() < 1e-12);
        let shifted = PolygonalSet::polygon(
            [(1.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0)].iter().map(|&(x, y)| Point::new(x, y)).collect(),
        )
        .unwrap();
        assert!((symdiff_area(&sq, &shifted) - 2.0).abs() < 1e-12);
        assert!(cells_symdiff_area(&[(0, 0)], 1.0, &sq).abs() < 1e-12);
        assert!((cells_symdiff_area(&[(1, 0)], 1.0, &sq) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cell_clipping_matches_polygon_boolean_ops() {
        for s in [Shape::Diamond, Shape::Octagon, Shape::LShape, Shape::Hexagon] {
            let e = s.polygon();
            let n = 400;
            let set = recovery_lattice(&e, n).unwrap();
            let cells = set.boxtimes_cells();
            let scale = 1.0 / (n as f64).sqrt();
            let fast = cells_symdiff_area(&cells, scale, &e);
            let union = cells.iter().fold(MultiPolygon::<f64>::new(vec![]), |acc, &(x, y)| {
                let (x0, y0) = (x as f64 * scale, y as f64 * scale);
                let sq = Polygon::new(
                    LineString::from(vec![(x0, y0), (x0 + scale, y0), (x0 + scale, y0 + scale), (x0, y0 + scale)]),
                    vec![],
                );
                acc.union(&MultiPolygon::new(vec![sq]))
            });
            let slow = union.xor(&to_multipolygon(&e)).unsigned_area();
            assert!((fast - slow).abs() < 1e-9, "{s:?}: {fast} vs {slow}");
        }
    }

    #[test]
    fn single_point_and_pair_diagnostics() {
        let one = rescaled_excess(&Configuration::lattice(vec![(0, 0)]).unwrap()).unwrap();
        assert_eq!(one, 8.0);
        let pair = FaceComplex::from_config(Configuration::lattice(vec![(0, 0), (1, 0)]).unwrap()).unwrap();
        let r = compactness_diagnostics(&pair).unwrap();
        assert_eq!((r.excess, r.boxtimes, r.boxtimes_perimeter), (14, 0, 0));
        assert!(r.count_bound_ok && r.perimeter_bound_ok);
    }

    #[test]
    fn densities_track_the_normal() {
        for s in [Shape::Square, Shape::Diamond] {
            let t = directional_density(&s.polygon(), 2_500).unwrap();
            assert!(t.max_relative_deviation() <= 0.02, "{s:?}: {}", t.max_relative_deviation());
            for side in &t.sides {
                assert!((side.predicted.iter().sum::<f64>() - side.phi).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn recovery_excess_approaches_aniso_perimeter() {
        let e = Shape::Octagon.polygon();
        let r = gamma_record(&e, 10_000).unwrap();
        assert_eq!(r.cardinality, 10_000);
        assert!((r.rescaled_excess / aniso_perimeter(&e) - 1.0).abs() < 0.05);
        assert!(r.symdiff < 0.05);
        assert!(r.compactness.holds());
        assert!(r.liminf.unwrap().holds());
    }
}
