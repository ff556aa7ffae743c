//! Shared fixtures for unit tests.

use crate::division::Ring;
use crate::jordan::Algebra;

pub use crate::random::random_element;

pub const ALL_TEST_ALGEBRAS: [Algebra; 7] = [
    Algebra::Spin(3),
    Algebra::Spin(5),
    Algebra::Herm(Ring::R, 3),
    Algebra::Herm(Ring::C, 3),
    Algebra::Herm(Ring::H, 2),
    Algebra::Herm(Ring::H, 3),
    Algebra::Albert,
];
