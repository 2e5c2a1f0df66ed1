//! Charts on the upper hyperboloid sheet, maps between them, area elements,
//! the Beltrami map and the symbolic generator algebra.

mod algebra;
mod charts;

pub use algebra::{
    beltrami_generators, casimir_apply, commutator_identities, contract_generators, e2_generators,
    so21_generators, CommutatorCheck, DiffOperator, GeneratorContraction, Poly,
};
pub use charts::{
    area_weight, beltrami, eq_from_ho, eq_from_ps, from_ambient, ho_from_eq, ho_from_ps, laplace_beltrami_fd,
    ps_from_eq, ps_from_ho, to_ambient, AmbientPoint, Chart, ChartPoint, EquidistantPoint, HorocyclicPoint,
    PseudoSphericalPoint,
};
