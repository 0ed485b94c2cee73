//! Tropical skeletons, wrapped Floer generator combinatorics and
//! Novikov-coefficient mirror checks for Laurent polynomials on `(ℂ*)²`.

pub mod exactnum;
pub mod tropical;
pub mod hamiltonian;
pub mod energy;
pub mod mirror_ring;
