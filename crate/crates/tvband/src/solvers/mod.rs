//! Root finding, ODE integration, quadrature and the Hermitian eigensolver.

pub mod brent;
pub mod jacobi;
pub mod quadrature;
pub mod rk45;
