//! Exact computation in the quantized hyperalgebra `U_zeta(sl2)` at an odd
//! root of unity: q-binomial combinatorics, the weight group with carrying,
//! a divided-power PBW normal-form engine, the quantum Frobenius map and
//! finite-dimensional representations.

pub mod exactnum;
pub mod qcomb;
pub mod weights;
pub mod uzero;
pub mod pbw;
pub mod repn;
