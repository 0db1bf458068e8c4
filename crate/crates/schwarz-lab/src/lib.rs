//! Circle-and-cardioid Schwarz reflections, the ideal triangle reflection map and the Tricorn.

pub mod cardioid;
pub mod coding;
pub mod cycle;
pub mod error;
pub mod export;
pub mod index;
pub mod lamination;
pub mod point;
pub mod portrait;
pub mod render;
pub mod schwarz;
pub mod straightening;
pub mod tolerances;
pub mod triangle;
pub mod tricorn;
pub mod wirtinger;

mod newton;

pub use error::{Error, Result};
pub use point::ComplexValue;
