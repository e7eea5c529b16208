//! Exhaustive lattice ground states and the structural checks run on them.
//!
//! The search grows king-connected fixed animals from a root cell
//! (Redelmeier's scheme: cells below the root row, and left of the root on
//! its row, are never used, so every animal is produced exactly once with its
//! lowest-then-leftmost cell at the origin). A branch is cut when even the
//! best completion cannot reach the best count found so far; the bound is
//! the current edge count, plus the largest possible number of bonds between
//! the remaining points and the current ones (the top occupied-neighbour
//! counts of the frontier), plus the exact maximum for the remaining points
//! taken alone.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bond_graph::BondGraph;
use crate::config::Configuration;
use crate::defects::face_defect;
use crate::error::{Error, Result};
use crate::face_complex::{EdgeClass, FaceComplex, FaceKind};
use crate::geometry::orient;

pub type Cell = (i64, i64);

pub const KING: [Cell; 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];

const MAX_N: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 20_000_000_000 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub n: usize,
    pub max_edges: usize,
    pub min_excess: i64,
    /// Canonical representatives, one per class under translations and the
    /// eight symmetries of the square, sorted.
    pub minimizers: Vec<Vec<Cell>>,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn configurations(&self) -> Vec<Configuration> {
        self.minimizers
            .iter()
            .map(|m| Configuration::lattice(m.iter().copied()).expect("distinct lattice cells"))
            .collect()
    }
}

/// Number of king-adjacent pairs.
pub fn lattice_edge_count(cells: &[Cell]) -> usize {
    let set: HashSet<Cell> = cells.iter().copied().collect();
    cells
        .iter()
        .map(|&(x, y)| KING[..4].iter().filter(|(dx, dy)| set.contains(&(x + dx, y + dy))).count())
        .sum()
}

/// Lexicographically smallest translate-normalized image under the dihedral group.
pub fn canonical_form(cells: &[Cell]) -> Vec<Cell> {
    const MAPS: [fn(Cell) -> Cell; 8] = [
        |(x, y)| (x, y),
        |(x, y)| (-y, x),
        |(x, y)| (-x, -y),
        |(x, y)| (y, -x),
        |(x, y)| (-x, y),
        |(x, y)| (x, -y),
        |(x, y)| (y, x),
        |(x, y)| (-y, -x),
    ];
    MAPS.iter()
        .map(|f| {
            let mut img: Vec<Cell> = cells.iter().map(|&c| f(c)).collect();
            let mx = img.iter().map(|c| c.0).min().unwrap_or(0);
            let my = img.iter().map(|c| c.1).min().unwrap_or(0);
            for c in &mut img {
                *c = (c.0 - mx, c.1 - my);
            }
            img.sort_unstable();
            img
        })
        .min()
        .unwrap_or_default()
}

struct Shared<'a> {
    n: usize,
    /// exact maxima for fewer points
    table: &'a [usize],
    best: AtomicUsize,
    nodes: AtomicU64,
    max_nodes: u64,
    aborted: AtomicBool,
}

#[derive(Clone)]
struct Branch {
    width: i64,
    height: i64,
    origin_x: i64,
    occupied: Vec<bool>,
    reached: Vec<bool>,
    cells: Vec<Cell>,
    edges: usize,
}

#[derive(Default)]
struct Found {
    best: usize,
    forms: HashSet<Vec<Cell>>,
}

impl Found {
    fn merge(mut self, other: Found) -> Found {
        if other.best > self.best {
            return other;
        }
        if other.best == self.best {
            self.forms.extend(other.forms);
        }
        self
    }
}

struct Task {
    branch: Branch,
    untried: Vec<Cell>,
}

impl Branch {
    fn new(n: usize) -> Self {
        let width = 2 * n as i64 + 3;
        let height = n as i64 + 2;
        let size = (width * height) as usize;
        Branch {
            width,
            height,
            origin_x: n as i64 + 1,
            occupied: vec![false; size],
            reached: vec![false; size],
            cells: Vec::with_capacity(n),
            edges: 0,
        }
    }

    fn idx(&self, (x, y): Cell) -> usize {
        (y * self.width + x + self.origin_x) as usize
    }

    fn in_grid(&self, (x, y): Cell) -> bool {
        y >= 0 && y < self.height && x + self.origin_x >= 0 && x + self.origin_x < self.width
    }

    fn allowed(&self, c: Cell) -> bool {
        (c.1 > 0 || (c.1 == 0 && c.0 >= 0)) && self.in_grid(c)
    }

    fn occupied_neighbours(&self, (x, y): Cell) -> usize {
        KING.iter()
            .filter(|(dx, dy)| {
                let c = (x + dx, y + dy);
                self.in_grid(c) && self.occupied[self.idx(c)]
            })
            .count()
    }

    fn place(&mut self, c: Cell) {
        self.edges += self.occupied_neighbours(c);
        let i = self.idx(c);
        self.occupied[i] = true;
        self.cells.push(c);
    }

    fn remove(&mut self, c: Cell) {
        let i = self.idx(c);
        self.occupied[i] = false;
        self.cells.pop();
        self.edges -= self.occupied_neighbours(c);
    }

    /// Frontier cells not yet reached; marks them reached.
    fn extend_frontier(&mut self, c: Cell, frontier: &mut Vec<Cell>) -> usize {
        let mut added = 0;
        for (dx, dy) in KING {
            let nb = (c.0 + dx, c.1 + dy);
            if self.allowed(nb) {
                let i = self.idx(nb);
                if !self.reached[i] {
                    self.reached[i] = true;
                    frontier.push(nb);
                    added += 1;
                }
            }
        }
        added
    }

    fn bound(&self, frontier: &[Cell], shared: &Shared) -> usize {
        let k = shared.n - self.cells.len();
        let mut counts: Vec<usize> = frontier.iter().map(|&c| self.occupied_neighbours(c)).collect();
        counts.sort_unstable_by(|a, b| b.cmp(a));
        self.edges + counts.iter().take(k).sum::<usize>() + shared.table[k]
    }

    fn grow(&mut self, mut untried: Vec<Cell>, shared: &Shared, found: &mut Found, split: Option<(usize, &mut Vec<Task>)>) {
        let mut split = split;
        while let Some(c) = untried.pop() {
            if shared.aborted.load(Ordering::Relaxed) {
                return;
            }
            if shared.nodes.fetch_add(1, Ordering::Relaxed) >= shared.max_nodes {
                shared.aborted.store(true, Ordering::Relaxed);
                return;
            }
            self.place(c);
            if self.cells.len() == shared.n {
                self.emit(shared, found);
            } else {
                let mut next = untried.clone();
                let added = self.extend_frontier(c, &mut next);
                if self.bound(&next, shared) >= shared.best.load(Ordering::Relaxed) {
                    match split.as_mut() {
                        Some((depth, tasks)) if self.cells.len() == *depth => {
                            tasks.push(Task { branch: self.clone(), untried: next.clone() });
                        }
                        Some((depth, tasks)) => {
                            let depth = *depth;
                            self.grow(next.clone(), shared, found, Some((depth, &mut **tasks)));
                        }
                        None => self.grow(next.clone(), shared, found, None),
                    }
                }
                for nb in &next[next.len() - added..] {
                    let i = self.idx(*nb);
                    self.reached[i] = false;
                }
            }
            self.remove(c);
        }
    }

    fn emit(&self, shared: &Shared, found: &mut Found) {
        let global = shared.best.load(Ordering::Relaxed);
        if self.edges < global || self.edges < found.best {
            return;
        }
        if self.edges > found.best {
            found.best = self.edges;
            found.forms.clear();
        }
        found.forms.insert(canonical_form(&self.cells));
        shared.best.fetch_max(self.edges, Ordering::Relaxed);
    }
}

fn search_one(n: usize, table: &[usize], budget: SearchBudget) -> Result<SearchResult> {
    let start = Instant::now();
    let shared = Shared {
        n,
        table,
        // adding a point next to an (n-1)-minimizer gains at least one bond
        best: AtomicUsize::new(if n >= 2 { table[n - 1] + 1 } else { 0 }),
        nodes: AtomicU64::new(0),
        max_nodes: budget.max_nodes,
        aborted: AtomicBool::new(false),
    };
    let mut root = Branch::new(n);
    let r = root.idx((0, 0));
    root.reached[r] = true;

    let split_depth = if n >= 7 { 4 } else { n };
    let mut tasks = Vec::new();
    let mut found = Found::default();
    root.grow(vec![(0, 0)], &shared, &mut found, Some((split_depth, &mut tasks)));
    let found = tasks
        .into_par_iter()
        .map(|mut t| {
            let mut local = Found::default();
            t.branch.grow(t.untried, &shared, &mut local, None);
            local
        })
        .reduce(Found::default, Found::merge)
        .merge(found);

    let nodes = shared.nodes.load(Ordering::Relaxed);
    if shared.aborted.load(Ordering::Relaxed) {
        return Err(Error::BudgetExceeded { nodes });
    }
    if found.forms.is_empty() {
        return Err(Error::IdentityViolated(format!("no configuration of {n} points reached the seed bound")));
    }
    let mut minimizers: Vec<Vec<Cell>> = found.forms.into_iter().collect();
    minimizers.sort();
    Ok(SearchResult {
        n,
        max_edges: found.best,
        min_excess: 8 * n as i64 - 2 * found.best as i64,
        minimizers,
        stats: SearchStats { nodes, elapsed: start.elapsed() },
    })
}

/// Results for every size `1..=n_max`; each size uses the exact maxima of
/// the smaller ones in its bound.
pub fn search_table(n_max: usize, budget: SearchBudget) -> Result<Vec<SearchResult>> {
    if n_max == 0 || n_max > MAX_N {
        return Err(Error::InvalidArgument(format!("particle count {n_max} outside 1..={MAX_N}")));
    }
    let mut table = vec![0usize];
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let r = search_one(n, &table, budget)?;
        table.push(r.max_edges);
        out.push(r);
    }
    Ok(out)
}

/// Maximal bond count and all maximizers among lattice configurations of `n` points.
pub fn brute_force_min(n: usize, budget: SearchBudget) -> Result<SearchResult> {
    Ok(search_table(n, budget)?.pop().expect("non-empty table"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrystallizationReport {
    pub connected: bool,
    pub no_wire_edges: bool,
    /// Every bounded face is a triangle or a crystallized square.
    pub faces_ok: bool,
    /// One boundary walk visiting no vertex twice, and no holes.
    pub simple_boundary: bool,
    pub min_degree: usize,
    /// Every bounded face has defect 0 or 1.
    pub face_defects_ok: bool,
    pub triangle_rigidity_ok: bool,
}

impl CrystallizationReport {
    pub fn all_ok(&self) -> bool {
        self.connected
            && self.no_wire_edges
            && self.faces_ok
            && self.simple_boundary
            && self.face_defects_ok
            && self.triangle_rigidity_ok
            && self.min_degree >= 3
    }
}

pub fn verify_crystallization(config: &Configuration) -> Result<CrystallizationReport> {
    let fc = FaceComplex::from_config(config.clone())?;
    let g = fc.graph();
    let ub = fc.face(fc.unbounded());
    let simple_boundary = ub.components.len() == 1 && {
        let walk = &ub.components[0].walk;
        walk.iter().collect::<HashSet<_>>().len() == walk.len()
    } && fc.bounded_faces().all(|f| fc.face(f).interior_count() == 0);
    let report = CrystallizationReport {
        connected: g.is_connected(),
        no_wire_edges: fc.classify_edges().iter().all(|c| !matches!(c, EdgeClass::WireExt | EdgeClass::WireInt)),
        faces_ok: fc
            .bounded_faces()
            .all(|f| fc.face(f).kind == FaceKind::Boxtimes || fc.face(f).is_triangle()),
        simple_boundary,
        min_degree: (0..g.vertex_count()).map(|v| g.degree(v)).min().unwrap_or(0),
        face_defects_ok: fc.bounded_faces().all(|f| face_defect(&fc, f) <= 1),
        triangle_rigidity_ok: triangles_rigid(&fc)?,
    };
    Ok(report)
}

/// Every horizontal or vertical side of a triangular face borders either a
/// crystallized square or a triangle whose union with it is again a triangle.
fn triangles_rigid(fc: &FaceComplex) -> Result<bool> {
    let g = fc.graph();
    let mode = g.mode();
    for t in fc.bounded_faces().filter(|&f| fc.face(f).is_triangle()) {
        let face = fc.face(t);
        let walk = &face.components[0].walk;
        for (i, &e) in face.components[0].walk_edges.iter().enumerate() {
            let (u, v) = (walk[i], walk[(i + 1) % 3]);
            let d = g.point(v).sub(&g.point(u));
            if d.x != 0.0 && d.y != 0.0 {
                continue;
            }
            let [s1, s2] = fc.edge_sides(e);
            let other = if s1 == t { s2 } else { s1 };
            let of = fc.face(other);
            let ok = match of.kind {
                FaceKind::Boxtimes => true,
                FaceKind::Planar if of.is_triangle() => {
                    let apex = walk[(i + 2) % 3];
                    let opp = *of.components[0].walk.iter().find(|&&w| w != u && w != v).expect("triangle apex");
                    let (p, q) = (g.point(apex), g.point(opp));
                    [u, v].iter().any(|&w| {
                        let x = g.point(w);
                        orient(&p, &q, &x, mode).map(|o| o == std::cmp::Ordering::Equal).unwrap_or(false)
                            && (p.x - x.x) * (q.x - x.x) + (p.y - x.y) * (q.y - x.y) < 0.0
                    })
                }
                _ => false,
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Occurrences of a concave right angle: `x` in the set, `x + u` missing,
/// and both `x + u + v` and `x + u - v` present (`u`, `v` orthogonal unit
/// axis steps). Returns `(x, u)` pairs.
pub fn concave_corners(cells: &[Cell]) -> Vec<(Cell, Cell)> {
    let set: HashSet<Cell> = cells.iter().copied().collect();
    let mut out = Vec::new();
    for &(x, y) in cells {
        for (ux, uy) in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
            let (vx, vy) = (-uy, ux);
            let up = (x + ux, y + uy);
            if !set.contains(&up)
                && set.contains(&(up.0 + vx, up.1 + vy))
                && set.contains(&(up.0 - vx, up.1 - vy))
            {
                out.push(((x, y), (ux, uy)));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityRow {
    pub n: usize,
    pub max_edges: usize,
    pub min_excess: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityTable {
    pub rows: Vec<MonotonicityRow>,
    pub excess_non_decreasing: bool,
    /// `max_edges(n + 1) - max_edges(n) <= 4` throughout.
    pub increments_ok: bool,
}

impl MonotonicityTable {
    pub fn from_results(results: &[SearchResult]) -> Self {
        let rows: Vec<MonotonicityRow> = results
            .iter()
            .map(|r| MonotonicityRow { n: r.n, max_edges: r.max_edges, min_excess: r.min_excess })
            .collect();
        let pairs = || rows.windows(2);
        MonotonicityTable {
            excess_non_decreasing: pairs().all(|w| w[0].min_excess <= w[1].min_excess),
            increments_ok: pairs().all(|w| w[1].max_edges <= w[0].max_edges + 4),
            rows,
        }
    }

    pub fn holds(&self) -> bool {
        self.excess_non_decreasing && self.increments_ok
    }
}

pub fn monotonicity_check(n_max: usize, budget: SearchBudget) -> Result<MonotonicityTable> {
    Ok(MonotonicityTable::from_results(&search_table(n_max, budget)?))
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbationReport {
    pub seed: u64,
    pub samples: usize,
    /// Infeasible or ambiguous draws that were thrown away.
    pub resampled: usize,
    /// Smallest `E(perturbed) - E(original)` over all samples.
    pub worst_delta: i64,
    pub decreasing: usize,
}

impl PerturbationReport {
    pub fn holds(&self) -> bool {
        self.decreasing == 0
    }
}

/// Random continuous perturbations of `config`: single-point moves and rigid
/// slides of everything beyond an axis-parallel cut, each by at most
/// `magnitude` in sup norm. Energies are recomputed in continuous mode.
pub fn perturbation_test(config: &Configuration, samples: usize, magnitude: f64, seed: u64) -> Result<PerturbationReport> {
    if !(magnitude >= 0.0 && magnitude.is_finite()) {
        return Err(Error::InvalidArgument(format!("perturbation magnitude {magnitude}")));
    }
    let base = BondGraph::build(config.to_continuous())?.edge_count() as i64;
    let pts = config.points();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = PerturbationReport { seed, samples: 0, resampled: 0, worst_delta: 0, decreasing: 0 };
    if pts.is_empty() {
        report.samples = samples;
        return Ok(report);
    }
    let max_attempts = 200 * samples + 1000;
    let mut attempts = 0;
    while report.samples < samples && attempts < max_attempts {
        attempts += 1;
        let mut moved: Vec<(f64, f64)> = pts.iter().map(|p| (p.x, p.y)).collect();
        let draw = |rng: &mut ChaCha8Rng| if magnitude > 0.0 { rng.gen_range(-magnitude..=magnitude) } else { 0.0 };
        if report.samples.is_multiple_of(2) {
            let i = rng.gen_range(0..moved.len());
            let (dx, dy) = (draw(&mut rng), draw(&mut rng));
            moved[i] = (moved[i].0 + dx, moved[i].1 + dy);
        } else {
            let pivot = moved[rng.gen_range(0..moved.len())];
            let vertical_cut = rng.gen_bool(0.5);
            let along = draw(&mut rng);
            let apart = draw(&mut rng).abs();
            for p in &mut moved {
                if vertical_cut && p.0 > pivot.0 + 0.5 {
                    *p = (p.0 + apart, p.1 + along);
                } else if !vertical_cut && p.1 > pivot.1 + 0.5 {
                    *p = (p.0 + along, p.1 + apart);
                }
            }
        }
        let graph = Configuration::continuous(moved).and_then(BondGraph::build);
        match graph {
            Ok(g) => {
                let delta = base - g.edge_count() as i64;
                if report.samples == 0 || delta < report.worst_delta {
                    report.worst_delta = delta;
                }
                if delta < 0 {
                    report.decreasing += 1;
                }
                report.samples += 1;
            }
            Err(Error::AmbiguousPredicate(_) | Error::Infeasible { .. } | Error::DuplicatePoint { .. }) => {
                report.resampled += 1;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}
