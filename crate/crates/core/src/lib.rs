//! Exact-arithmetic computer algebra for Hamiltonian Lie pseudoalgebras.
//!
//! The library constructs, over a finite-dimensional Lie algebra `d` with a
//! trace form `chi` and a conformally symplectic form `omega`:
//!
//! - the universal enveloping algebra `H = U(d)` in the divided-power PBW
//!   basis, with its full Hopf structure, and its dual `X = H*` as finite jets;
//! - the Lie pseudoalgebras `Cur g`, `W(d)` and `H(d, chi, omega)` with
//!   executable skew-symmetry and Jacobi checkers;
//! - tensor modules, the twisting functor, the (twisted) conformally
//!   symplectic pseudo de Rham complex and its second-order connecting map;
//! - annihilation-algebra jets and their Fourier-coefficient actions;
//! - a singular-vector solver with isotypic decomposition, submodule
//!   generation, and lattice/exactness verdicts.
//!
//! All arithmetic is exact over arbitrary-precision rationals.

pub mod algebra;
pub mod annihilation;
pub mod battery;
pub mod forms;
pub mod hopf;
pub mod jets;
pub mod linalg;
pub mod multiindex;
pub mod pseudo;
pub mod rat;
pub mod report;
pub mod singular;
pub mod specfile;
pub mod tensor;

pub use algebra::{Algebra, DPrimeModule, DerivedData, LieAlgebraSpec, ValidationReport};
pub use forms::{FormElement, SpRepresentation};
pub use hopf::{HElement, Hopf};
pub use jets::JetElement;
pub use linalg::Mat;
pub use multiindex::MultiIndex;
pub use rat::Rat;
pub use report::Report;
pub use tensor::{Complex, ModuleElement, ModuleMap, TensorModule};
