//! Exact polyhedral cones, the stratification of their boundaries by the face
//! dimensions of the dual cone, the associated augmented cellular complex, the
//! truncated Hausdorff metric on cones, Lorentz and Siegel cones, and a
//! classical Toeplitz index checker.

pub mod classicwh;
pub mod cli;
pub mod conemetric;
pub mod curvedcones;
pub mod document;
pub mod indexcomplex;
pub mod polycone;
pub mod ratlin;
pub mod report;
pub mod strata;
