//! The bond graph of a configuration: vertices are particles, edges join
//! particles at sup distance exactly one.

use std::collections::{HashMap, HashSet};
use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::geometry::{
    ccw_angle, classify_crossing, cmp_direction, sup_dist, CrossKind, Mode, Point, Segment,
    ANGLE_TAU, EXACT_EPS, GUARD_TAU,
};

/// How the edge set was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BondRule {
    /// Edges between all pairs at sup distance one.
    SupNorm,
    /// Edges supplied by the caller (used for triangular-lattice graphs).
    Explicit,
}

#[derive(Debug, Clone)]
pub struct BondGraph {
    config: Configuration,
    rule: BondRule,
    edges: Vec<[usize; 2]>,
    edge_index: HashMap<(usize, usize), usize>,
    /// Neighbours of each vertex sorted counterclockwise by direction.
    fans: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct AdmissibilityReport {
    pub feasible: bool,
    /// Vertices of degree above eight.
    pub md_violations: Vec<usize>,
    /// Pairs of edges that meet in a way other than a crystallized square.
    pub ce_violations: Vec<(usize, usize)>,
    /// Vertices with two consecutive edges closer than a quarter of a right angle.
    pub angle_violations: Vec<(usize, f64)>,
    /// Crystallized squares, vertices listed counterclockwise.
    pub boxtimes_quads: Vec<[usize; 4]>,
    /// The two crossing diagonals of each crystallized square.
    pub boxtimes_diagonals: Vec<[usize; 2]>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.feasible
            && self.md_violations.is_empty()
            && self.ce_violations.is_empty()
            && self.angle_violations.is_empty()
    }
}

/// Union-find over `0..n`.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSet { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub(crate) fn count_roots(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}

fn cell_of(p: &Point, size: f64) -> (i64, i64) {
    ((p.x / size).floor() as i64, (p.y / size).floor() as i64)
}

impl BondGraph {
    /// Builds the sup-norm bond graph. Fails if two points are closer than one.
    pub fn build(config: Configuration) -> Result<Self> {
        let edges = match config.mode() {
            Mode::Lattice => lattice_bonds(&config),
            Mode::Continuous => continuous_bonds(&config)?,
        };
        Self::assemble(config, BondRule::SupNorm, edges)
    }

    /// A straight-line graph with caller-supplied edges.
    pub fn from_edges(config: Configuration, edges: &[(usize, usize)]) -> Result<Self> {
        let n = config.len();
        let mut list = Vec::with_capacity(edges.len());
        let mut seen = HashSet::new();
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidEdge(format!("({a}, {b}) references a missing vertex")));
            }
            if a == b {
                return Err(Error::InvalidEdge(format!("self loop at {a}")));
            }
            let e = [a.min(b), a.max(b)];
            if !seen.insert(e) {
                return Err(Error::InvalidEdge(format!("duplicate edge ({a}, {b})")));
            }
            list.push(e);
        }
        Self::assemble(config, BondRule::Explicit, list)
    }

    fn assemble(config: Configuration, rule: BondRule, mut edges: Vec<[usize; 2]>) -> Result<Self> {
        edges.sort_unstable();
        let edge_index = edges.iter().enumerate().map(|(i, e)| ((e[0], e[1]), i)).collect();
        let mut fans = vec![Vec::new(); config.len()];
        for e in &edges {
            fans[e[0]].push(e[1]);
            fans[e[1]].push(e[0]);
        }
        for (v, fan) in fans.iter_mut().enumerate() {
            let p = config.point(v);
            fan.sort_by(|&a, &b| cmp_direction(&config.point(a).sub(&p), &config.point(b).sub(&p)));
            for w in fan.windows(2) {
                let (da, db) = (config.point(w[0]).sub(&p), config.point(w[1]).sub(&p));
                if da.cross(&db) == 0.0 && da.x * db.x + da.y * db.y > 0.0 {
                    // Cannot happen for sup-norm bonds of a feasible configuration.
                    return Err(Error::InvalidEdge(format!(
                        "edges {v}-{} and {v}-{} leave in the same direction",
                        w[0], w[1]
                    )));
                }
            }
        }
        Ok(BondGraph { config, rule, edges, edge_index, fans })
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn mode(&self) -> Mode {
        self.config.mode()
    }

    pub fn rule(&self) -> BondRule {
        self.rule
    }

    pub fn vertex_count(&self) -> usize {
        self.config.len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_id(a, b).is_some()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.fans[v].len()
    }

    /// Neighbours of `v` in counterclockwise order.
    pub fn fan(&self, v: usize) -> &[usize] {
        &self.fans[v]
    }

    pub fn point(&self, v: usize) -> Point {
        self.config.point(v)
    }

    pub fn segment(&self, e: usize) -> Segment {
        let [a, b] = self.edges[e];
        Segment::new(self.point(a), self.point(b))
    }

    /// Angles between consecutive edges at `v`, counterclockwise, starting
    /// from the first fan edge.
    pub fn fan_angles(&self, v: usize) -> Result<Vec<f64>> {
        let p = self.point(v);
        let fan = &self.fans[v];
        let k = fan.len();
        (0..k)
            .map(|i| ccw_angle(self.point(fan[i]).sub(&p), self.point(fan[(i + 1) % k]).sub(&p)))
            .collect()
    }

    /// Returns `(E, F)`: the energy `-#edges` and the excess `sum (8 - deg)`.
    pub fn energy(&self) -> (i64, i64) {
        let m = self.edges.len() as i64;
        (-m, 8 * self.vertex_count() as i64 - 2 * m)
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut ds = DisjointSet::new(n);
        for e in &self.edges {
            ds.union(e[0], e[1]);
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for v in 0..n {
            groups.entry(ds.find(v)).or_default().push(v);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Every pair of edges that meets other than at a shared endpoint.
    pub fn crossing_pairs(&self) -> Result<Vec<(usize, usize, CrossKind)>> {
        let mode = self.mode();
        let size = self
            .edges
            .iter()
            .map(|&[a, b]| sup_dist(&self.point(a), &self.point(b)))
            .fold(1.0f64, f64::max);
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            let (pa, pb) = (cell_of(&self.point(a), size), cell_of(&self.point(b), size));
            for cx in pa.0.min(pb.0)..=pa.0.max(pb.0) {
                for cy in pa.1.min(pb.1)..=pa.1.max(pb.1) {
                    buckets.entry((cx, cy)).or_default().push(e);
                }
            }
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut keys: Vec<_> = buckets.keys().copied().collect();
        keys.sort_unstable();
        for key in keys {
            let list = &buckets[&key];
            for (i, &e1) in list.iter().enumerate() {
                for &e2 in &list[i + 1..] {
                    let pair = (e1.min(e2), e1.max(e2));
                    if !seen.insert(pair) {
                        continue;
                    }
                    let kind = classify_crossing(&self.segment(pair.0), &self.segment(pair.1), mode)?;
                    if !matches!(kind, CrossKind::Disjoint | CrossKind::SharedEndpoint) {
                        out.push((pair.0, pair.1, kind));
                    }
                }
            }
        }
        out.sort_by_key(|&(a, b, _)| (a, b));
        Ok(out)
    }

    fn is_axis_unit_square(&self, quad: &[usize; 4]) -> bool {
        let pts: Vec<Point> = quad.iter().map(|&v| self.point(v)).collect();
        let (minx, maxx) = pts.iter().fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p.x), hi.max(p.x)));
        let (miny, maxy) = pts.iter().fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p.y), hi.max(p.y)));
        let near = |a: f64, b: f64| (a - b).abs() <= EXACT_EPS;
        near(maxx - minx, 1.0)
            && near(maxy - miny, 1.0)
            && pts.iter().all(|p| (near(p.x, minx) || near(p.x, maxx)) && (near(p.y, miny) || near(p.y, maxy)))
    }

    /// Checks the maximum-degree and crossing-edge properties and the minimal angle.
    pub fn check_admissibility(&self) -> Result<AdmissibilityReport> {
        let mut report = AdmissibilityReport { feasible: true, ..Default::default() };
        report.md_violations = (0..self.vertex_count()).filter(|&v| self.degree(v) > 8).collect();

        for (e1, e2, kind) in self.crossing_pairs()? {
            if kind != CrossKind::ProperCross {
                report.ce_violations.push((e1, e2));
                continue;
            }
            let [a, c] = self.edges[e1];
            let [b, d] = self.edges[e2];
            let quad = if crate::geometry::orient(&self.point(a), &self.point(b), &self.point(c), self.mode())?
                == std::cmp::Ordering::Greater
            {
                [a, b, c, d]
            } else {
                [a, d, c, b]
            };
            let complete = (0..4).all(|i| (i + 1..4).all(|j| self.has_edge(quad[i], quad[j])));
            let square_ok = self.rule == BondRule::Explicit || self.is_axis_unit_square(&quad);
            if complete && square_ok {
                report.boxtimes_quads.push(quad);
                report.boxtimes_diagonals.push([e1, e2]);
            } else {
                report.ce_violations.push((e1, e2));
            }
        }

        if self.rule == BondRule::SupNorm {
            let tol = if self.mode() == Mode::Lattice { 0.0 } else { ANGLE_TAU };
            for v in 0..self.vertex_count() {
                if self.degree(v) < 2 {
                    continue;
                }
                let smallest = self.fan_angles(v)?.into_iter().fold(f64::MAX, f64::min);
                if smallest < FRAC_PI_4 - tol {
                    report.angle_violations.push((v, smallest));
                }
            }
        }
        Ok(report)
    }
}

fn lattice_bonds(config: &Configuration) -> Vec<[usize; 2]> {
    let pts: Vec<(i64, i64)> = config.points().iter().map(Point::ix).collect();
    let index: HashMap<(i64, i64), usize> = pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut edges = Vec::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        // forward half of the king stencil
        for (dx, dy) in [(1, 0), (1, 1), (0, 1), (-1, 1)] {
            if let Some(&j) = index.get(&(x + dx, y + dy)) {
                edges.push([i.min(j), i.max(j)]);
            }
        }
    }
    edges
}

fn continuous_bonds(config: &Configuration) -> Result<Vec<[usize; 2]>> {
    let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, p) in config.points().iter().enumerate() {
        cells.entry(cell_of(p, 1.0)).or_default().push(i);
    }
    let mut edges = Vec::new();
    for (i, p) in config.points().iter().enumerate() {
        let (cx, cy) = cell_of(p, 1.0);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(list) = cells.get(&(cx + dx, cy + dy)) else { continue };
                for &j in list {
                    if j <= i {
                        continue;
                    }
                    let d = sup_dist(p, &config.point(j));
                    let gap = d - 1.0;
                    if gap.abs() <= EXACT_EPS {
                        edges.push([i, j]);
                    } else if gap.abs() <= GUARD_TAU {
                        return Err(Error::AmbiguousPredicate(format!(
                            "sup distance between {i} and {j} is {d:.15}"
                        )));
                    } else if gap < 0.0 {
                        return Err(Error::Infeasible { i, j, dist: d });
                    }
                }
            }
        }
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> BondGraph {
        BondGraph::build(Configuration::lattice([(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap()).unwrap()
    }

    #[test]
    fn build_examples() {
        assert_eq!(unit_square().edge_count(), 6);
        let g = BondGraph::build(Configuration::lattice([(0, 0), (2, 0)]).unwrap()).unwrap();
        assert_eq!(g.edge_count(), 0);
        let bad = BondGraph::build(Configuration::continuous([(0.0, 0.0), (0.5, 0.5)]).unwrap());
        assert!(matches!(bad, Err(Error::Infeasible { i: 0, j: 1, .. })));
    }

    #[test]
    fn continuous_guard_band() {
        let g = BondGraph::build(Configuration::continuous([(0.0, 0.0), (0.1 + 0.2 + 0.7, 0.3)]).unwrap());
        assert_eq!(g.unwrap().edge_count(), 1);
        let g = BondGraph::build(Configuration::continuous([(0.0, 0.0), (1.0 + 1e-10, 0.3)]).unwrap());
        assert!(matches!(g, Err(Error::AmbiguousPredicate(_))));
        let g = BondGraph::build(Configuration::continuous([(0.0, 0.0), (1.0 + 1e-6, 0.3)]).unwrap());
        assert_eq!(g.unwrap().edge_count(), 0);
    }

    #[test]
    fn admissibility_of_unit_square() {
        let r = unit_square().check_admissibility().unwrap();
        assert!(r.is_admissible());
        assert_eq!(r.boxtimes_quads.len(), 1);
    }

    #[test]
    fn crystallized_center_has_full_fan() {
        let pts: Vec<(i64, i64)> = (-1..=1).flat_map(|x| (-1..=1).map(move |y| (x, y))).collect();
        let g = BondGraph::build(Configuration::lattice(pts.clone()).unwrap()).unwrap();
        let c = pts.iter().position(|&p| p == (0, 0)).unwrap();
        assert_eq!(g.degree(c), 8);
        for a in g.fan_angles(c).unwrap() {
            assert_eq!(a, FRAC_PI_4);
        }
    }

    #[test]
    fn components_and_energy() {
        let g = BondGraph::build(Configuration::lattice([(0, 0), (1, 0)]).unwrap()).unwrap();
        assert_eq!(g.connected_components().len(), 1);
        assert_eq!(g.energy(), (-1, 14));
        let g = BondGraph::build(Configuration::lattice([(0, 0), (5, 5)]).unwrap()).unwrap();
        assert_eq!(g.connected_components().len(), 2);
        let g = BondGraph::build(Configuration::lattice([(0, 0), (1, 0), (1, 1), (0, 1), (9, 9)]).unwrap())
            .unwrap();
        assert_eq!(g.connected_components().len(), 2);
        assert_eq!(unit_square().energy(), (-6, 20));
        let g = BondGraph::build(Configuration::lattice([(3, 4)]).unwrap()).unwrap();
        assert_eq!(g.energy(), (0, 8));
    }

    #[test]
    fn explicit_graph_rejects_bad_edges() {
        let c = Configuration::lattice([(0, 0), (1, 0)]).unwrap();
        assert!(BondGraph::from_edges(c.clone(), &[(0, 0)]).is_err());
        assert!(BondGraph::from_edges(c.clone(), &[(0, 1), (1, 0)]).is_err());
        assert!(BondGraph::from_edges(c, &[(0, 2)]).is_err());
    }

    #[test]
    fn non_square_crossing_is_reported() {
        // two long crossing edges that are not the diagonals of a unit square
        let c = Configuration::lattice([(0, 0), (2, 2), (2, 0), (0, 2)]).unwrap();
        let g = BondGraph::from_edges(c, &[(0, 1), (2, 3)]).unwrap();
        let r = g.check_admissibility().unwrap();
        assert_eq!(r.ce_violations, vec![(0, 1)]);
        assert!(!r.is_admissible());
    }
}
