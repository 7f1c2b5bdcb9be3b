//! Tight frame scaling for unit-norm frames in `R^n` and `C^n`.
//!
//! A unit-norm frame `{f_i}` is *scalable* when positive `c_i` make
//! `{c_i f_i}` a tight frame. This crate decides scalability with
//! verifiable certificates and exposes the machinery underneath:
//!
//! * [`frame`]: frames, frame operator, Gramian, tightness checks;
//! * [`diagram`]: diagram vectors and the diagram Gramian;
//! * [`kernel`]: Jacobi eigensolver, null spaces, convex-hull membership
//!   and the perceptron;
//! * [`scaling`]: the decision pipeline and independent verification;
//! * [`cones`]: the cone-intersection necessary condition;
//! * [`planar`]: the constructive pair/triple algorithm for `R^2`;
//! * [`io`]: frame files and result documents.

pub mod cones;
pub mod config;
pub mod diagram;
pub mod error;
pub mod frame;
pub mod io;
pub mod kernel;
pub mod planar;
pub mod samples;
pub mod scaling;

pub use config::Config;
pub use error::{Error, Result};
pub use frame::{check_tight, frame_operator, gramian, scale_frame, Field, Frame, TightnessReport};
pub use scaling::{decide_scaling, verify_scaling, Certificate, ScalingResult, Verdict};

pub use num_complex::Complex64;
