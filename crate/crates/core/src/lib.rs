//! Sup-norm sticky disks: bond graphs, faces, defect decompositions,
//! ground states and rescaled-energy diagnostics.

pub mod anisotropy;
pub mod bond_graph;
pub mod config;
pub mod defects;
pub mod error;
pub mod face_complex;
pub mod gamma_lab;
pub mod geometry;
pub mod io;
pub mod svg;
pub mod ground_state;

pub use bond_graph::{AdmissibilityReport, BondGraph, BondRule};
pub use config::Configuration;
pub use error::{Error, Result};
pub use face_complex::{
    comb_perimeter_region, BoundaryComponent, ComponentRole, EdgeClass, Face, FaceComplex, FaceId, FaceKind,
    RegionSelection, SelectionRule,
};
pub use geometry::{Mode, Point, Segment, Vector};
pub use io::{parse_config, write_config, Report};
pub use svg::{render_svg, Drawable, SvgOptions};
pub use defects::{
    angular_defect, decompose_square, decompose_triangular, face_defect, face_defect_from_angles, vertex_excess,
    DecompositionReport, Neighbourhood,
};
pub use anisotropy::{aniso_perimeter, phi, phi_length, wulff_octagon, BoundCheck, PolygonalSet};
pub use ground_state::{
    brute_force_min, monotonicity_check, perturbation_test, verify_crystallization, CrystallizationReport,
    SearchBudget, SearchResult,
};
pub use gamma_lab::{
    compactness_diagnostics, directional_density, gamma_record, gamma_sweep, liminf_check, recovery_lattice,
    recovery_sequence, rescaled_excess, symdiff_area, CompactnessReport, DensityTable, GammaExperiment, GammaRecord,
    LatticeSet, LiminfReport, Shape, SideDensity,
};
