pub mod closure;
pub mod construction;
pub mod dual;
pub mod error;
pub mod forms;
pub mod geom;
pub mod lab;
pub mod linalg;
pub mod membership;
pub mod random;
pub mod roots;
pub mod scalar;
pub mod selftest;

pub use error::{Error, Result};
