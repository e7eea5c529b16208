//! Particle configurations.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::geometry::{Mode, Point, LATTICE_COORD_LIMIT};

/// A finite set of distinct planar points with a coordinate mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    points: Vec<Point>,
    mode: Mode,
}

impl Configuration {
    pub fn new(points: Vec<Point>, mode: Mode) -> Result<Self> {
        let mut seen: HashSet<(u64, u64)> = HashSet::with_capacity(points.len());
        for (index, p) in points.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if mode == Mode::Lattice
                && (p.x.fract() != 0.0
                    || p.y.fract() != 0.0
                    || p.x.abs() > LATTICE_COORD_LIMIT
                    || p.y.abs() > LATTICE_COORD_LIMIT)
            {
                return Err(Error::NotLattice { index });
            }
            // -0.0 and 0.0 are the same point
            let key = ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits());
            if !seen.insert(key) {
                return Err(Error::DuplicatePoint { index, x: p.x, y: p.y });
            }
        }
        Ok(Configuration { points, mode })
    }

    pub fn lattice<I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, i64)>,
    {
        Self::new(
            points.into_iter().map(|(x, y)| Point::lattice(x, y)).collect(),
            Mode::Lattice,
        )
    }

    pub fn continuous<I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        Self::new(
            points.into_iter().map(|(x, y)| Point::new(x, y)).collect(),
            Mode::Continuous,
        )
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integer coordinates of a lattice configuration.
    pub fn lattice_points(&self) -> Option<Vec<(i64, i64)>> {
        (self.mode == Mode::Lattice).then(|| self.points.iter().map(Point::ix).collect())
    }

    /// The same points re-tagged as continuous coordinates.
    pub fn to_continuous(&self) -> Configuration {
        Configuration { points: self.points.clone(), mode: Mode::Continuous }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_non_finite() {
        assert!(matches!(
            Configuration::lattice([(0, 0), (1, 0), (0, 0)]),
            Err(Error::DuplicatePoint { index: 2, .. })
        ));
        assert!(matches!(
            Configuration::continuous([(0.0, f64::NAN)]),
            Err(Error::NonFinite { index: 0 })
        ));
        assert!(matches!(
            Configuration::new(vec![Point::new(0.5, 0.0)], Mode::Lattice),
            Err(Error::NotLattice { index: 0 })
        ));
        assert!(matches!(
            Configuration::continuous([(0.0, 0.0), (-0.0, 0.0)]),
            Err(Error::DuplicatePoint { .. })
        ));
    }
}
