pub mod bisection;
pub mod config_model;
pub mod critical_points;
pub mod error;
pub mod exact_math;
pub mod moments;
pub mod orientation;
pub mod second_moment;

pub use error::{Error, Result};
