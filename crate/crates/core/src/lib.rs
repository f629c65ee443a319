//! Cohomological Hall algebras of Dynkin quivers: the shuffle product,
//! equivariant classes of quiver strata, and the quantum dilogarithm
//! identities they categorify.

pub mod coha;
pub mod io;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod quantum;
pub mod quiver;
pub mod roots;
pub mod strata;

pub use coha::{
    choose_marker, element, graded_dim, mul2, muln, one, psi, subalgebra_element, CohaElement,
    CohaError,
};
pub use par::Exec;
pub use poly::{
    monomial_symmetric, parse_poly, partitions, schur, MPoly, Monomial, PolyError, Rational, VarId,
};
pub use quantum::{
    codim, dilog, normal_form, qmul, verify_factorization, QElement, QScalar, QuantumError,
};
pub use quiver::{DimVector, DynkinType, PartitionError, Quiver, QuiverError, SubquiverPartition};
pub use roots::{
    enumerate_partitions, positive_roots, reineke_order, KostantPartition, RootError, RootList,
};
pub use strata::{
    euler_class, factored_restriction_check, stratum_class, verify_structure_iso, y_system,
    DegreeReport, StrataError, YSystem,
};
