//! Fan-extension recognition, wheel gluing and fragility certification for
//! small matroids.

pub mod bits;
pub mod catalog;
pub mod certifier;
pub mod error;
pub mod fans;
pub mod fragility;
pub mod field;
pub mod glue;
pub mod io;
pub mod iso;
pub mod lemmas;
pub mod matroid;
pub mod recognizer;
pub mod repr;
pub mod wheels;

pub use error::{Error, Result};
pub use matroid::{Matroid, MinorView, RankFn, Structure};
