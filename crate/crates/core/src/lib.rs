//! Newton–Okounkov polygons, infinitesimal bodies and local positivity on
//! smooth projective surfaces given by lattice data.

pub mod error;
pub mod germ;
pub mod infinitesimal;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod param;
pub mod polygon;
pub mod positivity;
pub mod rational;
pub mod registry;
pub mod zariski;

pub use error::{Error, Result};
pub use lattice::{DivisorClass, PointProfile, SurfaceModel};
pub use rational::Q;
