pub mod decay;
pub mod duhamel;
pub mod error;
pub mod initial_data;
pub mod io;
pub mod littlewood_paley;
pub mod norms;
pub mod solver;
pub mod spectral;
pub mod testing;

pub use error::{Error, Result};
