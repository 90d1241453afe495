//! The nine-site latent-symmetric network with uniform coupling.
//!
//! ```text
//!   1 - 2 - 3 - 4 - 5 - 6 - 7 - 8 - 9
//!           \___________________/
//! ```
//!
//! Sites 2 and 6 are cospectral without any permutation symmetry between them;
//! 4, 8 and 9 are their singlet sites. The tunable on-site potential sits on 4 and 9.

use num_traits::Zero;

use crate::network::{parse_network, Network, VertexPair};
use crate::pgst::ParameterPoint;
use crate::rational::{ratio, Rational};

pub const DOCUMENT: &str = include_str!("../../../networks/ninesite.json");

pub const U: usize = 2;
pub const V: usize = 6;
pub const SINGLETS: [usize; 3] = [4, 8, 9];
pub const POTENTIAL_SITES: [usize; 2] = [4, 9];

const EDGES: [(usize, usize); 9] = [(1, 2), (2, 3), (3, 4), (3, 8), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9)];

pub fn pair() -> VertexPair {
    VertexPair { u: U, v: V }
}

/// Default uniform coupling, 27/50.
pub fn default_coupling() -> Rational {
    ratio(27, 50)
}

/// The shipped network file, parsed.
pub fn shipped() -> Network {
    parse_network(DOCUMENT).expect("shipped network document is valid")
}

/// Nine-site network with coupling `k` everywhere and potential `E` on sites 4 and 9.
pub fn with_parameters(point: &ParameterPoint) -> Network {
    let mut net = Network::uniform(9, &EDGES, &point.k).expect("static edge list is valid");
    if !point.e.is_zero() {
        for site in POTENTIAL_SITES {
            net.set_onsite(site, point.e.clone()).expect("site in range");
        }
    }
    net
}
