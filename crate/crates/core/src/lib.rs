//! Two-source network error-correction codes built from Gabidulin codes over
//! a double field extension, with a random-linear-network-coding simulator.

pub mod codec;
pub mod error;
pub mod experiment;
pub mod field;
pub mod fold;
pub mod gabidulin;
pub mod matrix;
pub mod netsim;

pub use error::{Error, Result};
pub use field::{Elem, Field, FieldTower};
pub use fold::FoldSpec;
pub use gabidulin::{DecodeDiagnostics, GabidulinCode, SideInfo};
pub use matrix::{row_space_distance, Mat, RreResult};
