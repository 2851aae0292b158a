//! Exact Hochschild homology and cohomology of finite-dimensional algebras,
//! chain-level cup and cap products, and transport of both along derived
//! equivalences given by explicit bimodule data.

pub mod linalg;
pub mod algebra;
pub mod cli;
pub mod complexes;
pub mod hochschild;
pub mod io;
pub mod products;
pub mod derived;
pub mod transport;
