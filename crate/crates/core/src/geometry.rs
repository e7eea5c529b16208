//! Planar primitives: the sup norm, orientation and segment-crossing
//! predicates, and counterclockwise angles.
//!
//! Every predicate takes a [`Mode`]. In [`Mode::Lattice`] coordinates are
//! integers and the predicates are evaluated in `i64`, so they are exact. In
//! [`Mode::Continuous`] they are evaluated in `f64` with a guard band: a
//! deciding quantity that is neither clearly zero (within [`EXACT_EPS`]) nor
//! clearly away from zero (beyond [`GUARD_TAU`]) yields
//! [`Error::AmbiguousPredicate`].

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Guard band for continuous-mode predicates.
pub const GUARD_TAU: f64 = 1e-9;
/// Below this magnitude a continuous-mode quantity is treated as exactly zero.
pub const EXACT_EPS: f64 = 1e-12;
/// Tolerance on the minimal-angle check in continuous mode.
pub const ANGLE_TAU: f64 = 1e-7;
/// Lattice coordinates are bounded so that all `i64` products stay exact.
pub const LATTICE_COORD_LIMIT: f64 = (1u64 << 30) as f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Lattice,
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn lattice(x: i64, y: i64) -> Self {
        Point { x: x as f64, y: y as f64 }
    }

    /// Integer coordinates; only meaningful for lattice points.
    pub fn ix(&self) -> (i64, i64) {
        (self.x as i64, self.y as i64)
    }

    pub fn sub(&self, other: &Point) -> Vector {
        Vector::new(self.x - other.x, self.y - other.y)
    }

    pub fn translate(&self, v: Vector) -> Point {
        Point::new(self.x + v.x, self.y + v.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vector {
    pub x: f64,
    pub y: f64,
}

impl Vector {
    pub const fn new(x: f64, y: f64) -> Self {
        Vector { x, y }
    }

    pub fn sup_norm(&self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn cross(&self, other: &Vector) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0.0 && self.y == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn direction(&self) -> Vector {
        self.b.sub(&self.a)
    }
}

/// How two closed segments meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CrossKind {
    Disjoint,
    /// The segments meet only at an endpoint common to both.
    SharedEndpoint,
    /// The open segments meet in exactly one point.
    ProperCross,
    /// The segments share a sub-segment of positive length.
    Overlap,
    /// An endpoint of one segment lies in the relative interior of the other.
    Touch,
}

pub fn sup_dist(p: &Point, q: &Point) -> f64 {
    p.sub(q).sup_norm()
}

/// Sign of the orientation determinant of `(a, b, c)`: positive for a left turn.
pub fn orient(a: &Point, b: &Point, c: &Point, mode: Mode) -> Result<Ordering> {
    match mode {
        Mode::Lattice => {
            let (ax, ay) = a.ix();
            let (bx, by) = b.ix();
            let (cx, cy) = c.ix();
            let det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
            Ok(det.cmp(&0))
        }
        Mode::Continuous => {
            let det = b.sub(a).cross(&c.sub(a));
            guarded_sign(det, "orientation determinant")
        }
    }
}

/// Sign of a continuous-mode quantity with the guard band applied.
pub fn guarded_sign(value: f64, what: &str) -> Result<Ordering> {
    let mag = value.abs();
    if mag <= EXACT_EPS {
        Ok(Ordering::Equal)
    } else if mag <= GUARD_TAU {
        Err(Error::AmbiguousPredicate(format!("{what} = {value:e}")))
    } else if value > 0.0 {
        Ok(Ordering::Greater)
    } else {
        Ok(Ordering::Less)
    }
}

fn same_point(p: &Point, q: &Point, mode: Mode) -> bool {
    match mode {
        Mode::Lattice => p.ix() == q.ix(),
        Mode::Continuous => p.sub(q).sup_norm() <= EXACT_EPS,
    }
}

/// Position of `p` along the segment `[a, b]`, assuming collinearity.
fn along(a: &Point, b: &Point, p: &Point) -> f64 {
    let d = b.sub(a);
    if d.x.abs() >= d.y.abs() {
        (p.x - a.x) / d.x
    } else {
        (p.y - a.y) / d.y
    }
}

pub fn classify_crossing(s1: &Segment, s2: &Segment, mode: Mode) -> Result<CrossKind> {
    let o1 = orient(&s1.a, &s1.b, &s2.a, mode)?;
    let o2 = orient(&s1.a, &s1.b, &s2.b, mode)?;
    let o3 = orient(&s2.a, &s2.b, &s1.a, mode)?;
    let o4 = orient(&s2.a, &s2.b, &s1.b, mode)?;

    let shared = [(&s1.a, &s2.a), (&s1.a, &s2.b), (&s1.b, &s2.a), (&s1.b, &s2.b)]
        .iter()
        .filter(|(p, q)| same_point(p, q, mode))
        .count();

    if o1 == Ordering::Equal && o2 == Ordering::Equal {
        // Collinear: compare parameter intervals along s1.
        let t0 = along(&s1.a, &s1.b, &s2.a);
        let t1 = along(&s1.a, &s1.b, &s2.b);
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let lo = lo.max(0.0);
        let hi = hi.min(1.0);
        let overlap = hi - lo;
        return Ok(if shared >= 2 || overlap > EXACT_EPS {
            CrossKind::Overlap
        } else if shared == 1 {
            CrossKind::SharedEndpoint
        } else if overlap.abs() <= EXACT_EPS {
            CrossKind::Touch
        } else {
            CrossKind::Disjoint
        });
    }

    if shared >= 1 {
        return Ok(CrossKind::SharedEndpoint);
    }
    let opposite = |a: Ordering, b: Ordering| a != Ordering::Equal && b != Ordering::Equal && a != b;
    if opposite(o1, o2) && opposite(o3, o4) {
        return Ok(CrossKind::ProperCross);
    }
    // One endpoint on the other segment's line, within its span.
    let touches = (o1 == Ordering::Equal && o3 != o4)
        || (o2 == Ordering::Equal && o3 != o4)
        || (o3 == Ordering::Equal && o1 != o2)
        || (o4 == Ordering::Equal && o1 != o2);
    if touches {
        return Ok(CrossKind::Touch);
    }
    Ok(CrossKind::Disjoint)
}

/// Counterclockwise angle from `u` to `v` in `(0, 2pi]`; parallel vectors give `2pi`.
pub fn ccw_angle(u: Vector, v: Vector) -> Result<f64> {
    if u.is_zero() || v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if let Some(k) = lattice_quarter_turns(u, v) {
        return Ok(k as f64 * FRAC_PI_4);
    }
    let mut a = v.y.atan2(v.x) - u.y.atan2(u.x);
    while a <= 0.0 {
        a += 2.0 * PI;
    }
    while a > 2.0 * PI {
        a -= 2.0 * PI;
    }
    Ok(a)
}

/// Index `0..8` of a king-move direction, counterclockwise from `(1, 0)`.
pub fn king_octant(v: Vector) -> Option<u8> {
    const DIRS: [(f64, f64); 8] = [
        (1.0, 0.0),
        (1.0, 1.0),
        (0.0, 1.0),
        (-1.0, 1.0),
        (-1.0, 0.0),
        (-1.0, -1.0),
        (0.0, -1.0),
        (1.0, -1.0),
    ];
    DIRS.iter().position(|&(x, y)| v.x == x && v.y == y).map(|i| i as u8)
}

/// Counterclockwise angle from `u` to `v` in multiples of `pi/4`, when both are
/// king moves. Returns a value in `1..=8`.
pub fn lattice_quarter_turns(u: Vector, v: Vector) -> Option<u8> {
    let a = king_octant(u)?;
    let b = king_octant(v)?;
    let k = (b + 8 - a) % 8;
    Some(if k == 0 { 8 } else { k })
}

fn half_plane(v: &Vector) -> u8 {
    if v.y > 0.0 || (v.y == 0.0 && v.x > 0.0) {
        0
    } else {
        1
    }
}

/// Total order of directions by polar angle in `[0, 2pi)`.
pub fn cmp_direction(u: &Vector, v: &Vector) -> Ordering {
    half_plane(u).cmp(&half_plane(v)).then_with(|| {
        let c = u.cross(v);
        if c > 0.0 {
            Ordering::Less
        } else if c < 0.0 {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Twice the signed area of a closed polygon.
pub fn signed_area2(points: &[Point]) -> f64 {
    let n = points.len();
    let mut acc = 0.0;
    for i in 0..n {
        let p = &points[i];
        let q = &points[(i + 1) % n];
        acc += p.x * q.y - q.x * p.y;
    }
    acc
}

/// Winding number of a closed walk around `p`; `p` must not lie on the walk.
pub fn winding_number(walk: &[Point], p: &Point) -> i32 {
    let n = walk.len();
    let mut w = 0;
    for i in 0..n {
        let a = &walk[i];
        let b = &walk[(i + 1) % n];
        let side = b.sub(a).cross(&p.sub(a));
        if a.y <= p.y {
            if b.y > p.y && side > 0.0 {
                w += 1;
            }
        } else if b.y <= p.y && side < 0.0 {
            w -= 1;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seg(a: (f64, f64), b: (f64, f64)) -> Segment {
        Segment::new(Point::new(a.0, a.1), Point::new(b.0, b.1))
    }

    #[test]
    fn sup_dist_examples() {
        let o = Point::new(0.0, 0.0);
        assert_eq!(sup_dist(&o, &Point::new(1.0, 1.0)), 1.0);
        assert_eq!(sup_dist(&o, &o), 0.0);
        assert_eq!(sup_dist(&o, &Point::new(0.3, 1.0)), 1.0);
    }

    #[test]
    fn crossing_examples() {
        for mode in [Mode::Lattice, Mode::Continuous] {
            let k = classify_crossing(&seg((0., 0.), (1., 1.)), &seg((1., 0.), (0., 1.)), mode);
            assert_eq!(k.unwrap(), CrossKind::ProperCross);
            let k = classify_crossing(&seg((0., 0.), (1., 0.)), &seg((1., 0.), (2., 0.)), mode);
            assert_eq!(k.unwrap(), CrossKind::SharedEndpoint);
            let k = classify_crossing(&seg((0., 0.), (1., 0.)), &seg((0., 1.), (1., 1.)), mode);
            assert_eq!(k.unwrap(), CrossKind::Disjoint);
            let k = classify_crossing(&seg((0., 0.), (2., 0.)), &seg((1., 0.), (3., 0.)), mode);
            assert_eq!(k.unwrap(), CrossKind::Overlap);
            let k = classify_crossing(&seg((0., 0.), (2., 0.)), &seg((1., 0.), (1., 1.)), mode);
            assert_eq!(k.unwrap(), CrossKind::Touch);
            let k = classify_crossing(&seg((0., 0.), (1., 0.)), &seg((0., 0.), (0., 1.)), mode);
            assert_eq!(k.unwrap(), CrossKind::SharedEndpoint);
        }
    }

    #[test]
    fn crossing_guard_band() {
        let s1 = seg((0.0, 0.0), (1.0, 0.0));
        let s2 = seg((0.5, 1e-10), (0.5, 1.0));
        assert!(matches!(
            classify_crossing(&s1, &s2, Mode::Continuous),
            Err(Error::AmbiguousPredicate(_))
        ));
    }

    #[test]
    fn angle_examples() {
        let e1 = Vector::new(1.0, 0.0);
        assert!((ccw_angle(e1, Vector::new(0.0, 1.0)).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((ccw_angle(e1, Vector::new(1.0, 1.0)).unwrap() - PI / 4.0).abs() < 1e-15);
        assert_eq!(ccw_angle(e1, e1).unwrap(), 2.0 * PI);
        assert!((ccw_angle(Vector::new(0.0, 1.0), e1).unwrap() - 1.5 * PI).abs() < 1e-15);
        assert!((ccw_angle(Vector::new(2.0, 0.0), Vector::new(0.5, 3.0)).unwrap()
            - 3.0f64.atan2(0.5))
        .abs()
            < 1e-12);
        assert_eq!(ccw_angle(Vector::new(0.0, 0.0), e1), Err(Error::ZeroVector));
    }

    proptest! {
        #[test]
        fn sup_dist_is_a_metric(ax in -5.0..5.0f64, ay in -5.0..5.0f64,
                                bx in -5.0..5.0f64, by in -5.0..5.0f64,
                                cx in -5.0..5.0f64, cy in -5.0..5.0f64) {
            let (a, b, c) = (Point::new(ax, ay), Point::new(bx, by), Point::new(cx, cy));
            prop_assert_eq!(sup_dist(&a, &b), sup_dist(&b, &a));
            prop_assert!(sup_dist(&a, &c) <= sup_dist(&a, &b) + sup_dist(&b, &c) + 1e-12);
            prop_assert_eq!(sup_dist(&a, &a), 0.0);
            if a != b { prop_assert!(sup_dist(&a, &b) > 0.0); }
        }

        #[test]
        fn norm_equivalence(x in -5.0..5.0f64, y in -5.0..5.0f64) {
            let v = Vector::new(x, y);
            prop_assert!(v.sup_norm() <= v.norm() + 1e-12);
            prop_assert!(v.norm() <= 2f64.sqrt() * v.sup_norm() + 1e-12);
            if x != 0.0 && y != 0.0 {
                prop_assert!(v.sup_norm() < v.norm());
            }
            let axis = Vector::new(x, 0.0);
            prop_assert_eq!(axis.sup_norm(), axis.norm());
        }

        #[test]
        fn crossing_is_symmetric(c in proptest::collection::vec(-3i64..4, 8)) {
            let p = |i: usize| Point::lattice(c[i], c[i + 1]);
            let (s1, s2) = (Segment::new(p(0), p(2)), Segment::new(p(4), p(6)));
            prop_assume!(s1.a != s1.b && s2.a != s2.b);
            prop_assert_eq!(
                classify_crossing(&s1, &s2, Mode::Lattice).unwrap(),
                classify_crossing(&s2, &s1, Mode::Lattice).unwrap()
            );
            prop_assert_eq!(
                classify_crossing(&s1, &s2, Mode::Lattice).unwrap(),
                classify_crossing(&Segment::new(s2.b, s2.a), &s1, Mode::Lattice).unwrap()
            );
        }

        #[test]
        fn fan_angles_sum_to_full_turn(angles in proptest::collection::btree_set(0u32..3600, 1..9)) {
            let dirs: Vec<Vector> = angles.iter()
                .map(|&a| { let t = a as f64 * PI / 1800.0; Vector::new(t.cos(), t.sin()) })
                .collect();
            let mut sorted = dirs.clone();
            sorted.sort_by(cmp_direction);
            let n = sorted.len();
            let total: f64 = (0..n).map(|i| ccw_angle(sorted[i], sorted[(i + 1) % n]).unwrap()).sum();
            prop_assert!((total - 2.0 * PI).abs() < 1e-9);
        }
    }
}
