//! Latent-symmetry analysis of tight-binding networks.
//!
//! Exact spectral tools (cospectrality, walk equivalence, isospectral reduction, parity
//! polynomials) decide whether two sites are latently symmetric and whether they support
//! pretty good state transfer; a double-precision quantum-walk engine and a few-photon
//! permanent calculator supply the matching dynamics.

pub mod automorphism;
pub mod cli;
pub mod error;
pub mod factor;
pub mod intensity;
pub mod network;
pub mod photon;
pub mod ninesite;
pub mod pgst;
pub mod poly;
pub mod rational;
pub mod spectral;
pub mod walk;

pub use error::{Error, Result};
pub use network::{Network, VertexPair};
pub use poly::{RationalFunction, RationalPoly};
pub use rational::Rational;
