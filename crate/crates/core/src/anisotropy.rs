//! The crystalline surface tension and anisotropic perimeters.

use serde::Serialize;

use crate::defects::face_defect;
use crate::error::{Error, Result};
use crate::face_complex::{FaceComplex, FaceId, RegionSelection};
use crate::geometry::{signed_area2, Point, Segment, Vector};

/// `|v1| + |v2| + |v1 + v2| + |v1 - v2|` without normalization; 1-homogeneous.
pub fn phi_raw(v: Vector) -> f64 {
    v.x.abs() + v.y.abs() + (v.x + v.y).abs() + (v.x - v.y).abs()
}

/// The surface tension on Euclidean unit vectors.
pub fn phi(nu: Vector) -> Result<f64> {
    let n = nu.norm();
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnit(n));
    }
    Ok(phi_raw(nu))
}

/// Euclidean length times `phi` of the unit normal. Since `phi` is
/// homogeneous this is `phi` of the rotated direction vector, which keeps
/// lattice segments exact (3 for axis-parallel, 4 for diagonal bonds).
pub fn phi_length(s: &Segment) -> f64 {
    let d = s.direction();
    phi_raw(Vector::new(-d.y, d.x))
}

/// A finite union of polygons bounded by closed curves: exterior curves are
/// counterclockwise and holes clockwise, so the outward normal of every side
/// is its direction rotated clockwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolygonalSet {
    pub curves: Vec<Vec<Point>>,
}

impl PolygonalSet {
    /// A simple polygon given in either orientation.
    pub fn polygon(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::DegenerateTarget(format!("polygon with {} vertices", vertices.len())));
        }
        let a = signed_area2(&vertices);
        if a.abs() <= 1e-15 {
            return Err(Error::DegenerateTarget("polygon has zero area".into()));
        }
        if a < 0.0 {
            vertices.reverse();
        }
        Ok(PolygonalSet { curves: vec![vertices] })
    }

    /// Exterior curve plus holes; orientations are normalized.
    pub fn with_holes(outer: Vec<Point>, holes: Vec<Vec<Point>>) -> Result<Self> {
        let mut set = Self::polygon(outer)?;
        for mut h in holes {
            if signed_area2(&h) > 0.0 {
                h.reverse();
            }
            set.curves.push(h);
        }
        Ok(set)
    }

    pub fn area(&self) -> f64 {
        self.curves.iter().map(|c| signed_area2(c)).sum::<f64>() / 2.0
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.curves
            .iter()
            .flat_map(|c| (0..c.len()).map(move |i| Segment::new(c[i], c[(i + 1) % c.len()])))
    }

    /// Outward Euclidean unit normals, one per side.
    pub fn normals(&self) -> Vec<Vector> {
        self.segments()
            .map(|s| {
                let d = s.direction();
                let n = d.norm();
                Vector::new(d.y / n, -d.x / n)
            })
            .collect()
    }

    pub fn scaled(&self, factor: f64) -> PolygonalSet {
        PolygonalSet {
            curves: self
                .curves
                .iter()
                .map(|c| c.iter().map(|p| Point::new(p.x * factor, p.y * factor)).collect())
                .collect(),
        }
    }

    /// Every vertex of every curve.
    pub fn vertices(&self) -> impl Iterator<Item = &Point> {
        self.curves.iter().flatten()
    }

    /// Winding-number membership (boundary points may go either way).
    pub fn contains(&self, p: &Point) -> bool {
        self.curves.iter().map(|c| crate::geometry::winding_number(c, p)).sum::<i32>() != 0
    }
}

/// `P_phi`: the sum of `phi_length` over all sides of all curves.
pub fn aniso_perimeter(set: &PolygonalSet) -> f64 {
    set.segments().map(|s| phi_length(&s)).sum()
}

/// Minkowski sum of the segments `[0, g]`, centred at the origin.
pub fn zonotope(generators: &[Vector]) -> Result<PolygonalSet> {
    let mut edges: Vec<Vector> = Vec::with_capacity(2 * generators.len());
    for g in generators {
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        edges.push(*g);
        edges.push(Vector::new(-g.x, -g.y));
    }
    edges.sort_by(|a, b| a.y.atan2(a.x).total_cmp(&b.y.atan2(b.x)));
    let mut verts = Vec::with_capacity(edges.len());
    let mut p = Point::new(0.0, 0.0);
    for e in &edges {
        verts.push(p);
        p = Point::new(p.x + e.x, p.y + e.y);
    }
    // the walk closes; move its vertex centroid (the centre of symmetry) to the origin
    let (cx, cy) = verts.iter().fold((0.0, 0.0), |(sx, sy), v| (sx + v.x, sy + v.y));
    let (cx, cy) = (cx / verts.len() as f64, cy / verts.len() as f64);
    PolygonalSet::polygon(verts.into_iter().map(|v| Point::new(v.x - cx, v.y - cy)).collect())
}

/// The Wulff shape of `phi`: the zonotope of `(1,0), (0,1), (1,1), (1,-1)`
/// scaled by `scale`; area `7 scale^2`, `P_phi = 28 scale`.
pub fn wulff_octagon(scale: f64) -> Result<PolygonalSet> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::DegenerateTarget(format!("octagon scale {scale}")));
    }
    zonotope(&[
        Vector::new(scale, 0.0),
        Vector::new(0.0, scale),
        Vector::new(scale, scale),
        Vector::new(scale, -scale),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

impl BoundCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        let slack = lhs - rhs;
        BoundCheck { lhs, rhs, slack, holds: slack >= -1e-9 }
    }
}

/// `3M + delta(F) >= sum of phi-lengths` for `M` distinct edges on the boundary of `F`.
pub fn check_face_bound(fc: &FaceComplex, f: FaceId, edges: &[usize]) -> Result<BoundCheck> {
    if edges.is_empty() {
        return Err(Error::InvalidSelection("empty edge set".into()));
    }
    let walk: std::collections::HashSet<usize> =
        fc.face(f).components.iter().flat_map(|c| c.walk_edges.iter().copied()).collect();
    let mut seen = std::collections::HashSet::new();
    for &e in edges {
        if !walk.contains(&e) || !seen.insert(e) {
            return Err(Error::InvalidSelection(format!("edge {e} is not a distinct boundary edge of face {f}")));
        }
    }
    let rhs: f64 = edges.iter().map(|&e| phi_length(&fc.graph().segment(e))).sum();
    Ok(BoundCheck::new((3 * edges.len() as i64 + face_defect(fc, f)) as f64, rhs))
}

/// `P_phi` of `A_S`, summed edgewise over its boundary edges.
pub fn region_aniso_perimeter(fc: &FaceComplex, sel: &RegionSelection) -> f64 {
    sel.boundary_edges.iter().map(|&e| phi_length(&fc.graph().segment(e))).sum()
}

/// `3 P_comb(A_S) + sum_{F in S} delta(F) >= P_phi(A_S)`.
pub fn check_region_bound(fc: &FaceComplex, sel: &RegionSelection) -> BoundCheck {
    let defects: i64 = sel.selected.iter().map(|&f| face_defect(fc, f)).sum();
    let lhs = (3 * sel.boundary_edges.len() as i64 + defects) as f64;
    BoundCheck::new(lhs, region_aniso_perimeter(fc, sel))
}
