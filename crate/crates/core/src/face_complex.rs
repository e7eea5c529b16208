//! Faces of an admissible bond graph.
//!
//! Crystallized squares (unit squares carrying both diagonals) are faces on
//! their own; every other face is a face of the planar graph obtained by
//! dropping those diagonals. Planar faces are traced with a half-edge walk:
//! the successor of `u -> v` is the outgoing edge of `v` immediately
//! clockwise of `v -> u`, so every walk keeps its face on the left. Walks of
//! positive area are exterior boundaries of bounded faces; the remaining walk
//! of each connected component (and each isolated vertex) is an interior
//! boundary component of the face that encloses it.

use std::collections::HashMap;

use serde::Serialize;

use crate::bond_graph::{BondGraph, BondRule, DisjointSet};
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::geometry::{ccw_angle, signed_area2, winding_number, Mode, Point};

pub type FaceId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FaceKind {
    Boxtimes,
    Planar,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ComponentRole {
    Exterior,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeClass {
    /// On the boundary of two distinct bounded faces (or a square diagonal).
    Interior,
    /// A wire in the unbounded face.
    WireExt,
    /// A wire inside a bounded face.
    WireInt,
    /// Between a bounded face and the unbounded face.
    Boundary,
}

/// One connected component of the boundary of a face, as a closed walk
/// keeping the face on its left.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryComponent {
    pub role: ComponentRole,
    /// Vertices of the walk; a single vertex for an isolated point.
    pub walk: Vec<usize>,
    /// Edges traversed, in walk order; wire edges appear twice.
    pub walk_edges: Vec<usize>,
}

impl BoundaryComponent {
    /// Boundary edges plus twice the wire edges.
    pub fn graph_length(&self) -> usize {
        self.walk_edges.len()
    }

    /// -1 for the exterior component, +1 for interior ones.
    pub fn orientation(&self) -> i64 {
        match self.role {
            ComponentRole::Exterior => -1,
            ComponentRole::Interior => 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Face {
    pub kind: FaceKind,
    pub components: Vec<BoundaryComponent>,
    /// Corners of a crystallized square, counterclockwise.
    pub quad: Option<[usize; 4]>,
    edges: Vec<usize>,
    area2: f64,
}

impl Face {
    pub fn is_bounded(&self) -> bool {
        self.kind != FaceKind::Unbounded
    }

    pub fn exterior(&self) -> Option<&BoundaryComponent> {
        self.components.iter().find(|c| c.role == ComponentRole::Exterior)
    }

    pub fn interior_count(&self) -> usize {
        self.components.iter().filter(|c| c.role == ComponentRole::Interior).count()
    }

    /// `#Ed^boundary(F) + 2 #Ed^wire,int(F)`.
    pub fn comb_perimeter(&self) -> usize {
        self.components.iter().map(BoundaryComponent::graph_length).sum()
    }

    /// Edges whose segment lies in the closure of the face, diagonals included.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// Edges on the boundary of the face's closure: walk edges traversed once.
    pub fn boundary_edges(&self) -> Vec<usize> {
        let mut count: HashMap<usize, usize> = HashMap::new();
        for c in &self.components {
            for &e in &c.walk_edges {
                *count.entry(e).or_default() += 1;
            }
        }
        let mut out: Vec<usize> = count.into_iter().filter(|&(_, k)| k == 1).map(|(e, _)| e).collect();
        out.sort_unstable();
        out
    }

    /// Area enclosed by the exterior walk (zero for the unbounded face).
    pub fn outer_area(&self) -> f64 {
        self.area2 / 2.0
    }

    /// A triangle: planar, one exterior walk of three edges, no holes.
    pub fn is_triangle(&self) -> bool {
        self.kind == FaceKind::Planar && self.components.len() == 1 && self.comb_perimeter() == 3
    }
}

#[derive(Debug, Clone)]
pub struct FaceComplex {
    graph: BondGraph,
    faces: Vec<Face>,
    unbounded: FaceId,
    edge_class: Vec<EdgeClass>,
    edge_sides: Vec<[FaceId; 2]>,
    diagonal: Vec<bool>,
}

/// A family `S` of bounded faces containing every crystallized square,
/// together with the combinatorial data of `A_S`, the union of their closures.
#[derive(Debug, Clone, Serialize)]
pub struct RegionSelection {
    pub selected: Vec<FaceId>,
    pub mask: Vec<bool>,
    /// Edges on the topological boundary of `A_S`.
    pub boundary_edges: Vec<usize>,
    /// Edges not contained in `A_S`.
    pub exterior_edges: Vec<usize>,
    /// Connected components of `A_S` together with all edges and vertices.
    pub component_count: usize,
    /// Interior boundary components summed over the unselected faces.
    pub unselected_interior_components: usize,
    pub unselected_bounded: usize,
}

impl RegionSelection {
    pub fn contains(&self, f: FaceId) -> bool {
        self.mask[f]
    }
}

/// Selections used by the decomposition arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionRule {
    Boxtimes,
    AllBounded,
    /// Crystallized squares plus bounded faces with combinatorial perimeter at most `k`.
    PerimeterAtMost(usize),
}

impl FaceComplex {
    pub fn from_config(config: Configuration) -> Result<Self> {
        Self::enumerate(BondGraph::build(config)?)
    }

    /// Enumerates all faces of an admissible graph.
    pub fn enumerate(graph: BondGraph) -> Result<Self> {
        let report = graph.check_admissibility()?;
        if !report.is_admissible() {
            return Err(Error::NotAdmissible(format!(
                "{} degree violations, {} crossing violations, {} angle violations",
                report.md_violations.len(),
                report.ce_violations.len(),
                report.angle_violations.len()
            )));
        }
        let m = graph.edge_count();
        let n = graph.vertex_count();
        let mut diagonal = vec![false; m];
        for d in &report.boxtimes_diagonals {
            diagonal[d[0]] = true;
            diagonal[d[1]] = true;
        }

        // half-edges of the planar part: 2k is a -> b, 2k + 1 is b -> a
        let planar: Vec<usize> = (0..m).filter(|&e| !diagonal[e]).collect();
        let mut planar_index = vec![usize::MAX; m];
        for (k, &e) in planar.iter().enumerate() {
            planar_index[e] = k;
        }
        let he_count = 2 * planar.len();
        let origin = |h: usize| {
            let [a, b] = graph.edges()[planar[h / 2]];
            if h.is_multiple_of(2) {
                a
            } else {
                b
            }
        };
        let mut out_fans: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut pos = vec![0usize; he_count];
        for (v, fan) in out_fans.iter_mut().enumerate() {
            for &w in graph.fan(v) {
                let e = graph.edge_id(v, w).expect("fan edge");
                if diagonal[e] {
                    continue;
                }
                let k = planar_index[e];
                let h = if graph.edges()[e][0] == v { 2 * k } else { 2 * k + 1 };
                pos[h] = fan.len();
                fan.push(h);
            }
        }
        let next = |h: usize| {
            let twin = h ^ 1;
            let v = origin(twin);
            let fan = &out_fans[v];
            fan[(pos[twin] + fan.len() - 1) % fan.len()]
        };

        let mut cycle_of = vec![usize::MAX; he_count];
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for start in 0..he_count {
            if cycle_of[start] != usize::MAX {
                continue;
            }
            let id = cycles.len();
            let mut cyc = Vec::new();
            let mut h = start;
            loop {
                cycle_of[h] = id;
                cyc.push(h);
                h = next(h);
                if h == start {
                    break;
                }
            }
            cycles.push(cyc);
        }

        let area_eps = match graph.mode() {
            Mode::Lattice => 0.0,
            Mode::Continuous => 1e-9,
        };
        let cycle_points =
            |cyc: &[usize]| -> Vec<Point> { cyc.iter().map(|&h| graph.point(origin(h))).collect() };
        let areas: Vec<f64> = cycles.iter().map(|c| signed_area2(&cycle_points(c))).collect();

        let mut ds = DisjointSet::new(n);
        for e in graph.edges() {
            ds.union(e[0], e[1]);
        }
        let component_of: Vec<usize> = (0..n).map(|v| ds.find(v)).collect();

        let quad_lookup: HashMap<[usize; 4], usize> = report
            .boxtimes_quads
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let mut key = *q;
                key.sort_unstable();
                (key, i)
            })
            .collect();

        let make_component = |role: ComponentRole, cyc: &[usize]| BoundaryComponent {
            role,
            walk: cyc.iter().map(|&h| origin(h)).collect(),
            walk_edges: cyc.iter().map(|&h| planar[h / 2]).collect(),
        };

        let mut faces = vec![Face {
            kind: FaceKind::Unbounded,
            components: Vec::new(),
            quad: None,
            edges: Vec::new(),
            area2: 0.0,
        }];
        let unbounded = 0;
        let mut face_of_cycle = vec![usize::MAX; cycles.len()];
        // (face, cycle) of every bounded planar face, for containment queries
        let mut bounded_cycles: Vec<(FaceId, usize)> = Vec::new();
        for (ci, cyc) in cycles.iter().enumerate() {
            if areas[ci] <= area_eps {
                continue;
            }
            let mut key: Vec<usize> = cyc.iter().map(|&h| origin(h)).collect();
            key.sort_unstable();
            let quad = (key.len() == 4)
                .then(|| quad_lookup.get(&[key[0], key[1], key[2], key[3]]))
                .flatten()
                .map(|&i| report.boxtimes_quads[i]);
            let id = faces.len();
            faces.push(Face {
                kind: if quad.is_some() { FaceKind::Boxtimes } else { FaceKind::Planar },
                components: vec![make_component(ComponentRole::Exterior, cyc)],
                quad,
                edges: Vec::new(),
                area2: areas[ci],
            });
            face_of_cycle[ci] = id;
            if quad.is_none() {
                bounded_cycles.push((id, ci));
            }
        }
        let boxtimes_found = faces.iter().filter(|f| f.kind == FaceKind::Boxtimes).count();
        if boxtimes_found != report.boxtimes_quads.len() {
            return Err(Error::IdentityViolated(format!(
                "{} crystallized squares but {boxtimes_found} square faces traced",
                report.boxtimes_quads.len()
            )));
        }

        // Outer walks of components and isolated vertices become interior
        // components of the innermost enclosing face.
        let mut holes: Vec<(usize, BoundaryComponent, Option<usize>)> = Vec::new();
        let mut outer_seen: HashMap<usize, usize> = HashMap::new();
        for (ci, cyc) in cycles.iter().enumerate() {
            if areas[ci] > area_eps {
                continue;
            }
            let comp = component_of[origin(cyc[0])];
            if let Some(prev) = outer_seen.insert(comp, ci) {
                return Err(Error::IdentityViolated(format!(
                    "component {comp} has two outer walks ({prev} and {ci})"
                )));
            }
            holes.push((comp, make_component(ComponentRole::Interior, cyc), Some(ci)));
        }
        for (v, &comp) in component_of.iter().enumerate().take(n) {
            if graph.degree(v) == 0 {
                holes.push((
                    comp,
                    BoundaryComponent { role: ComponentRole::Interior, walk: vec![v], walk_edges: vec![] },
                    None,
                ));
            }
        }
        let several_components = component_of.iter().any(|&c| c != component_of[0]);
        let cycle_polys: Vec<Vec<Point>> = if several_components {
            cycles.iter().map(|c| cycle_points(c)).collect()
        } else {
            Vec::new()
        };
        for (comp, hole, cycle) in holes {
            let mut host = unbounded;
            if several_components {
                let p = graph.point(hole.walk[0]);
                let mut best = f64::INFINITY;
                for &(fid, ci) in &bounded_cycles {
                    if component_of[origin(cycles[ci][0])] == comp || areas[ci] >= best {
                        continue;
                    }
                    if winding_number(&cycle_polys[ci], &p) != 0 {
                        best = areas[ci];
                        host = fid;
                    }
                }
            }
            if let Some(ci) = cycle {
                face_of_cycle[ci] = host;
            }
            faces[host].components.push(hole);
        }

        let mut edge_sides = vec![[usize::MAX; 2]; m];
        for (k, &e) in planar.iter().enumerate() {
            edge_sides[e] = [face_of_cycle[cycle_of[2 * k]], face_of_cycle[cycle_of[2 * k + 1]]];
        }
        for (fid, face) in faces.iter().enumerate() {
            if let Some(q) = face.quad {
                for (a, b) in [(q[0], q[2]), (q[1], q[3])] {
                    edge_sides[graph.edge_id(a, b).expect("diagonal")] = [fid, fid];
                }
            }
        }
        let edge_class: Vec<EdgeClass> = (0..m)
            .map(|e| {
                let [s, t] = edge_sides[e];
                if diagonal[e] {
                    EdgeClass::Interior
                } else if s == t {
                    if s == unbounded {
                        EdgeClass::WireExt
                    } else {
                        EdgeClass::WireInt
                    }
                } else if s == unbounded || t == unbounded {
                    EdgeClass::Boundary
                } else {
                    EdgeClass::Interior
                }
            })
            .collect();

        for face in faces.iter_mut() {
            let mut edges: Vec<usize> = face.components.iter().flat_map(|c| c.walk_edges.iter().copied()).collect();
            if let Some(q) = face.quad {
                edges.push(graph.edge_id(q[0], q[2]).expect("diagonal"));
                edges.push(graph.edge_id(q[1], q[3]).expect("diagonal"));
            }
            edges.sort_unstable();
            edges.dedup();
            face.edges = edges;
        }

        let fc = FaceComplex { graph, faces, unbounded, edge_class, edge_sides, diagonal };
        if cfg!(debug_assertions) && fc.graph.rule() == BondRule::SupNorm {
            crate::gamma_lab::observe_compactness(&fc);
        }
        Ok(fc)
    }

    pub fn graph(&self) -> &BondGraph {
        &self.graph
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f]
    }

    pub fn unbounded(&self) -> FaceId {
        self.unbounded
    }

    pub fn bounded_faces(&self) -> impl Iterator<Item = FaceId> + '_ {
        (0..self.faces.len()).filter(move |&f| f != self.unbounded)
    }

    pub fn boxtimes_faces(&self) -> Vec<FaceId> {
        (0..self.faces.len()).filter(|&f| self.faces[f].kind == FaceKind::Boxtimes).collect()
    }

    pub fn planar_faces(&self) -> Vec<FaceId> {
        (0..self.faces.len()).filter(|&f| self.faces[f].kind == FaceKind::Planar).collect()
    }

    pub fn classify_edges(&self) -> &[EdgeClass] {
        &self.edge_class
    }

    pub fn edge_class(&self, e: usize) -> EdgeClass {
        self.edge_class[e]
    }

    /// The faces on the two sides of an edge (equal for wires and diagonals).
    pub fn edge_sides(&self, e: usize) -> [FaceId; 2] {
        self.edge_sides[e]
    }

    pub fn is_diagonal(&self, e: usize) -> bool {
        self.diagonal[e]
    }

    pub fn boundary_components(&self, f: FaceId) -> &[BoundaryComponent] {
        &self.faces[f].components
    }

    /// `#X - #Ed + #F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.graph.vertex_count() as i64 - self.graph.edge_count() as i64 + self.faces.len() as i64
    }

    /// `#Ed^boundary + 2 #Ed^wire,ext` of the whole graph.
    pub fn comb_perimeter_graph(&self) -> usize {
        self.edge_class
            .iter()
            .map(|c| match c {
                EdgeClass::Boundary => 1,
                EdgeClass::WireExt => 2,
                _ => 0,
            })
            .sum()
    }

    /// Angles of the face at its vertices, measured inside the face.
    pub fn face_angles(&self, f: FaceId) -> Result<Vec<(usize, f64)>> {
        let g = &self.graph;
        let face = &self.faces[f];
        let mut out = Vec::new();
        if let Some(q) = face.quad {
            for i in 0..4 {
                let v = q[i];
                let p = g.point(v);
                let next = g.point(q[(i + 1) % 4]).sub(&p);
                let opp = g.point(q[(i + 2) % 4]).sub(&p);
                let prev = g.point(q[(i + 3) % 4]).sub(&p);
                out.push((v, ccw_angle(next, opp)?));
                out.push((v, ccw_angle(opp, prev)?));
            }
            return Ok(out);
        }
        for c in &face.components {
            let k = c.walk.len();
            if c.walk_edges.is_empty() {
                continue;
            }
            for i in 0..k {
                let u = c.walk[(i + k - 1) % k];
                let v = c.walk[i];
                let w = c.walk[(i + 1) % k];
                let p = g.point(v);
                out.push((v, ccw_angle(g.point(w).sub(&p), g.point(u).sub(&p))?));
            }
        }
        Ok(out)
    }

    pub fn selection(&self, rule: SelectionRule) -> Vec<FaceId> {
        self.bounded_faces()
            .filter(|&f| {
                let face = &self.faces[f];
                match rule {
                    SelectionRule::Boxtimes => face.kind == FaceKind::Boxtimes,
                    SelectionRule::AllBounded => true,
                    SelectionRule::PerimeterAtMost(k) => {
                        face.kind == FaceKind::Boxtimes || face.comb_perimeter() <= k
                    }
                }
            })
            .collect()
    }

    /// Validates `S` and computes the data of `A_S`; also checks that the
    /// interior components of unselected faces are in bijection with the
    /// connected components of `A_S` together with all edges and vertices.
    pub fn select_region(&self, selection: &[FaceId]) -> Result<RegionSelection> {
        self.select_region_inner(selection, true)
    }

    /// Same as [`select_region`](Self::select_region) without requiring the
    /// crystallized squares to be selected (planar graphs only).
    pub(crate) fn select_region_inner(&self, selection: &[FaceId], need_boxtimes: bool) -> Result<RegionSelection> {
        let mut mask = vec![false; self.faces.len()];
        for &f in selection {
            if f >= self.faces.len() {
                return Err(Error::InvalidSelection(format!("face {f} does not exist")));
            }
            if f == self.unbounded {
                return Err(Error::InvalidSelection("the unbounded face cannot be selected".into()));
            }
            mask[f] = true;
        }
        if need_boxtimes {
            if let Some(f) = self.boxtimes_faces().into_iter().find(|&f| !mask[f]) {
                return Err(Error::InvalidSelection(format!("crystallized square {f} is not selected")));
            }
        }
        let selected: Vec<FaceId> = (0..mask.len()).filter(|&f| mask[f]).collect();

        let mut boundary_edges = Vec::new();
        let mut exterior_edges = Vec::new();
        for e in 0..self.graph.edge_count() {
            let [s, t] = self.edge_sides[e];
            match (mask[s], mask[t]) {
                (true, false) | (false, true) => boundary_edges.push(e),
                (false, false) => exterior_edges.push(e),
                (true, true) => {}
            }
        }

        let mut ds = DisjointSet::new(self.graph.vertex_count());
        for e in self.graph.edges() {
            ds.union(e[0], e[1]);
        }
        for &f in &selected {
            let mut verts = self.faces[f].components.iter().flat_map(|c| c.walk.iter().copied());
            if let Some(first) = verts.next() {
                for v in verts {
                    ds.union(first, v);
                }
            }
        }
        let component_count = ds.count_roots();
        let unselected_interior_components: usize =
            (0..self.faces.len()).filter(|&f| !mask[f]).map(|f| self.faces[f].interior_count()).sum();
        if unselected_interior_components != component_count {
            return Err(Error::IdentityViolated(format!(
                "{unselected_interior_components} interior components of unselected faces but \
                 {component_count} components of the selected region"
            )));
        }
        let unselected_bounded = self.bounded_faces().filter(|&f| !mask[f]).count();
        Ok(RegionSelection {
            selected,
            mask,
            boundary_edges,
            exterior_edges,
            component_count,
            unselected_interior_components,
            unselected_bounded,
        })
    }
}

/// Number of edges on the boundary of `A_S`.
pub fn comb_perimeter_region(sel: &RegionSelection) -> usize {
    sel.boundary_edges.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fc(pts: &[(i64, i64)]) -> FaceComplex {
        FaceComplex::from_config(Configuration::lattice(pts.iter().copied()).unwrap()).unwrap()
    }

    fn block(w: i64, h: i64) -> Vec<(i64, i64)> {
        (0..w).flat_map(|x| (0..h).map(move |y| (x, y))).collect()
    }

    fn count(fc: &FaceComplex, kind: FaceKind) -> usize {
        fc.faces().iter().filter(|f| f.kind == kind).count()
    }

    #[test]
    fn unit_square_faces() {
        let c = fc(&block(2, 2));
        assert_eq!(count(&c, FaceKind::Boxtimes), 1);
        assert_eq!(count(&c, FaceKind::Planar), 0);
        assert_eq!(count(&c, FaceKind::Unbounded), 1);
        let classes = c.classify_edges();
        assert_eq!(classes.iter().filter(|&&k| k == EdgeClass::Boundary).count(), 4);
        assert_eq!(classes.iter().filter(|&&k| k == EdgeClass::Interior).count(), 2);
        let sq = c.boxtimes_faces()[0];
        assert_eq!(c.face(sq).comb_perimeter(), 4);
    }

    #[test]
    fn sup_triangle_is_planar_face() {
        let c = fc(&[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(count(&c, FaceKind::Planar), 1);
        let t = c.planar_faces()[0];
        assert!(c.face(t).is_triangle());
        assert!(c.classify_edges().iter().all(|&k| k == EdgeClass::Boundary));
    }

    #[test]
    fn block_face_count_matches_euler() {
        let c = fc(&block(3, 3));
        assert_eq!(count(&c, FaceKind::Boxtimes), 4);
        assert_eq!(count(&c, FaceKind::Planar), 0);
        // one component, four squares whose diagonals are not planar edges
        assert_eq!(c.euler_characteristic(), 1 + 1 - 2 * 4);
    }

    #[test]
    fn isolated_and_wire_components() {
        let c = fc(&[(0, 0)]);
        let ub = c.boundary_components(c.unbounded());
        assert_eq!(ub.len(), 1);
        assert_eq!(ub[0].graph_length(), 0);

        let c = fc(&[(0, 0), (1, 0)]);
        assert_eq!(c.classify_edges(), &[EdgeClass::WireExt]);
        let ub = c.boundary_components(c.unbounded());
        assert_eq!(ub.len(), 1);
        assert_eq!(ub[0].graph_length(), 2);
        assert_eq!(ub[0].role, ComponentRole::Interior);
    }

    #[test]
    fn ring_face_has_one_hole() {
        // 7x7 ring of thickness two with an isolated point in the middle
        let mut pts: Vec<(i64, i64)> =
            block(7, 7).into_iter().filter(|&(x, y)| x <= 1 || x >= 5 || y <= 1 || y >= 5).collect();
        pts.push((3, 3));
        let c = fc(&pts);
        let holes: Vec<FaceId> = c.planar_faces().into_iter().filter(|&f| c.face(f).interior_count() > 0).collect();
        assert_eq!(holes.len(), 1);
        let face = c.face(holes[0]);
        assert!(face.exterior().is_some());
        assert_eq!(face.interior_count(), 1);
        assert_eq!(face.components[1].walk, vec![pts.len() - 1]);
        // inner boundary of the ring: a 4x4 square of 12 unit edges
        assert_eq!(face.exterior().unwrap().graph_length(), 12);
    }

    #[test]
    fn selection_examples() {
        let c = fc(&block(3, 3));
        let all = c.select_region(&c.selection(SelectionRule::AllBounded)).unwrap();
        assert_eq!(all.component_count, 1);
        assert!(all.exterior_edges.is_empty());
        assert_eq!(comb_perimeter_region(&all), 8);

        let c = fc(&[(0, 0), (1, 0)]);
        let none = c.select_region(&[]).unwrap();
        assert_eq!(none.component_count, 1);
        assert_eq!(none.exterior_edges.len(), 1);
        assert_eq!(comb_perimeter_region(&none), 0);

        let c = fc(&block(2, 2));
        assert!(matches!(c.select_region(&[]), Err(Error::InvalidSelection(_))));
        let sel = c.select_region(&c.selection(SelectionRule::Boxtimes)).unwrap();
        assert_eq!(comb_perimeter_region(&sel), 4);
    }

    #[test]
    fn selection_without_triangle_keeps_its_hypotenuse_outside() {
        // a square with a triangle attached on its right side
        let c = fc(&[(0, 0), (1, 0), (1, 1), (0, 1), (2, 0)]);
        let tri = c.planar_faces()[0];
        let sel = c.select_region(&c.selection(SelectionRule::Boxtimes)).unwrap();
        let hyp = c.graph().edge_id(2, 4).unwrap();
        let base = c.graph().edge_id(1, 4).unwrap();
        let shared = c.graph().edge_id(1, 2).unwrap();
        assert!(sel.exterior_edges.contains(&hyp));
        assert!(sel.exterior_edges.contains(&base));
        assert!(sel.boundary_edges.contains(&shared));
        assert!(!sel.contains(tri));
        assert_eq!(comb_perimeter_region(&sel), 4);
    }
}
