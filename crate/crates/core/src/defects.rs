//! Angular defects and the energy decompositions.
//!
//! Every quantity entering the decompositions is a count, so the terms are
//! integers in both coordinate modes; the floating-point angle route
//! ([`face_defect_from_angles`]) is kept as an independent cross-check.

use std::f64::consts::{FRAC_PI_3, PI};

use serde::Serialize;

use crate::bond_graph::BondGraph;
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::face_complex::{comb_perimeter_region, FaceComplex, FaceId, FaceKind, RegionSelection};

const ANGLE_SLACK: f64 = 1e-9;

/// Which neighbourhood the decomposition is written for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Neighbourhood {
    /// Eight neighbours, minimal angle pi/4.
    Square,
    /// Six neighbours, minimal angle pi/3.
    Triangular,
}

impl Neighbourhood {
    pub fn max_degree(self) -> i64 {
        match self {
            Neighbourhood::Square => 8,
            Neighbourhood::Triangular => 6,
        }
    }

    /// Weight of the combinatorial perimeter in the face defect.
    pub fn perimeter_weight(self) -> i64 {
        self.max_degree() / 2 - 1
    }

    fn min_angle(self) -> f64 {
        2.0 * PI / self.max_degree() as f64
    }
}

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-12 * r.abs().max(1.0) {
        r
    } else {
        x
    }
}

fn defect_in_units(alpha: f64, nb: Neighbourhood) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 2.0 * PI + ANGLE_SLACK) {
        return Err(Error::OutOfRange(alpha));
    }
    Ok(snap(alpha / nb.min_angle()) - 1.0)
}

/// `(4/pi) alpha - 1`: excess of an angle over pi/4, in units of pi/4.
pub fn angular_defect(alpha: f64) -> Result<f64> {
    defect_in_units(alpha, Neighbourhood::Square)
}

/// `(3/pi) alpha - 1`.
pub fn triangular_angular_defect(alpha: f64) -> Result<f64> {
    debug_assert!((Neighbourhood::Triangular.min_angle() - FRAC_PI_3).abs() < 1e-15);
    defect_in_units(alpha, Neighbourhood::Triangular)
}

/// `8 - deg(x)`. For non-isolated vertices the angle sum is checked against it;
/// an isolated vertex has no angles and its 8 is accounted for by the point
/// component it forms in the surrounding face.
pub fn vertex_excess(g: &BondGraph, x: usize) -> Result<i64> {
    let excess = 8 - g.degree(x) as i64;
    if g.degree(x) > 0 {
        let mut sum = 0.0;
        for a in g.fan_angles(x)? {
            sum += angular_defect(a)?;
        }
        if (sum - excess as f64).abs() > 1e-6 {
            return Err(Error::IdentityViolated(format!(
                "vertex {x}: angular defects sum to {sum}, expected {excess}"
            )));
        }
    }
    Ok(excess)
}

/// `sum_x (max_degree - deg x)`.
pub fn excess(g: &BondGraph, nb: Neighbourhood) -> i64 {
    (0..g.vertex_count()).map(|v| nb.max_degree() - g.degree(v) as i64).sum()
}

fn defect_formula(fc: &FaceComplex, f: FaceId, nb: Neighbourhood) -> i64 {
    let face = fc.face(f);
    let p = face.comb_perimeter() as i64;
    let holes = face.interior_count() as i64;
    let k = nb.max_degree();
    match face.kind {
        FaceKind::Boxtimes => 0,
        FaceKind::Planar => nb.perimeter_weight() * p + k * (holes - 1),
        FaceKind::Unbounded => nb.perimeter_weight() * p + k * holes,
    }
}

/// Face defect for the eight-neighbour model.
pub fn face_defect(fc: &FaceComplex, f: FaceId) -> i64 {
    defect_formula(fc, f, Neighbourhood::Square)
}

/// Face defect for the six-neighbour model.
pub fn triangular_face_defect(fc: &FaceComplex, f: FaceId) -> i64 {
    defect_formula(fc, f, Neighbourhood::Triangular)
}

/// The face defect as a sum of angular defects of the angles inside the face.
/// Isolated vertices inside the face count 8 (resp. 6) each.
pub fn face_defect_from_angles(fc: &FaceComplex, f: FaceId, nb: Neighbourhood) -> Result<f64> {
    let points = fc.face(f).components.iter().filter(|c| c.walk_edges.is_empty()).count();
    let mut sum = (points as i64 * nb.max_degree()) as f64;
    for (_, a) in fc.face_angles(f)? {
        sum += defect_in_units(a, nb)?;
    }
    Ok(sum)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub neighbourhood: Neighbourhood,
    pub perimeter_term: i64,
    pub component_term: i64,
    pub unselected_term: i64,
    pub defect_sum: i64,
    pub exterior_edge_term: i64,
    pub total: i64,
    pub excess: i64,
    pub residual: i64,
}

impl DecompositionReport {
    pub fn holds(&self) -> bool {
        self.residual == 0
    }
}

fn assemble(
    fc: &FaceComplex,
    sel: &RegionSelection,
    nb: Neighbourhood,
    defect: impl Fn(FaceId) -> i64,
) -> DecompositionReport {
    let k = nb.max_degree();
    let perimeter_term = nb.perimeter_weight() * comb_perimeter_region(sel) as i64;
    let component_term = k * sel.component_count as i64;
    let unselected_term = -k * sel.unselected_bounded as i64;
    let defect_sum: i64 = sel.selected.iter().map(|&f| defect(f)).sum();
    let exterior_edge_term = (k - 2) * sel.exterior_edges.len() as i64;
    let total = perimeter_term + component_term + unselected_term + defect_sum + exterior_edge_term;
    let excess = excess(fc.graph(), nb);
    DecompositionReport {
        neighbourhood: nb,
        perimeter_term,
        component_term,
        unselected_term,
        defect_sum,
        exterior_edge_term,
        total,
        excess,
        residual: total - excess,
    }
}

/// Decomposition of the excess energy for a selection containing every
/// crystallized square.
pub fn decompose_square(fc: &FaceComplex, selection: &[FaceId]) -> Result<DecompositionReport> {
    let sel = fc.select_region(selection)?;
    Ok(assemble(fc, &sel, Neighbourhood::Square, |f| face_defect(fc, f)))
}

/// Six-neighbour decomposition; the graph must be planar with degrees at most 6.
pub fn decompose_triangular(fc: &FaceComplex, selection: &[FaceId]) -> Result<DecompositionReport> {
    let g = fc.graph();
    if let Some(&(e1, e2, _)) = g.crossing_pairs()?.first() {
        return Err(Error::NotPlanar(e1, e2));
    }
    if let Some(v) = (0..g.vertex_count()).find(|&v| g.degree(v) > 6) {
        return Err(Error::DegreeExceeded { vertex: v, degree: g.degree(v), max: 6 });
    }
    let sel = fc.select_region(selection)?;
    Ok(assemble(fc, &sel, Neighbourhood::Triangular, |f| triangular_face_defect(fc, f)))
}

/// Bond graph of a subset of the unit triangular lattice, given in the
/// basis `(1, 0)`, `(1/2, sqrt(3)/2)`.
pub fn triangular_lattice_graph(coords: &[(i64, i64)]) -> Result<BondGraph> {
    let h = 3f64.sqrt() / 2.0;
    let config = Configuration::continuous(coords.iter().map(|&(a, b)| (a as f64 + b as f64 / 2.0, b as f64 * h)))?;
    let index: std::collections::HashMap<(i64, i64), usize> =
        coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut edges = Vec::new();
    for (i, &(a, b)) in coords.iter().enumerate() {
        for (da, db) in [(1, 0), (0, 1), (-1, 1)] {
            if let Some(&j) = index.get(&(a + da, b + db)) {
                edges.push((i, j));
            }
        }
    }
    BondGraph::from_edges(config, &edges)
}
