//! Core algorithms for a desk-scale model of positive-energy loop-group
//! representations: an exact Fock/spinor calculus with an algebraic Dirac
//! operator, a one-dimensional oscillator model on quadrature grids, a
//! twisted convolution algebra, and partition-growth spectral probes.

pub mod dirac;
pub mod error;
pub mod fock;
pub mod index;
pub mod linalg;
pub mod modes;
pub mod operator;
pub mod oscillator;
pub mod quad;
pub mod scalar;
pub mod spectral;
pub mod spinor;
pub mod twistalg;

pub use dirac::{DiracSpace, TensorState};
pub use error::{CoreError, Result};
pub use fock::{BosonState, FockSpace, Side};
pub use index::IndexClass;
pub use modes::{ComplexKind, ComplexMode, ModeSpace, RealModeVector};
pub use operator::{Graded, GradedOperator, StateVector};
pub use oscillator::{
    HermiteState, IsometryTable, OscillatorModel, PlaneLabel, RankOneReport, U1Label,
};
pub use scalar::{GaussianRational, RadicalScalar, Scalar};
pub use spectral::{Normalization, PartitionTable};
pub use spinor::{SpinorSpace, SpinorState};
pub use twistalg::{LevelData, TwistedElement, WeightWindow};
