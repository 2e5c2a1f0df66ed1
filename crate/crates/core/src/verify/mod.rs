//! Quadrature engines and the identity suite.

pub mod identities;
pub mod quad;

pub use quad::{
    integrate, integrate_decay, integrate_osc, integrate_periodic, integrate_pieces, integrate_tanh_sinh, wynn_epsilon,
    QuadratureResult, Tolerance,
};
pub use identities::{
    check_legendre_fourier, check_legendre_measure, check_macdonald_product, check_mellin_barnes, check_smeared_delta,
    check_sum_rule, check_u_orthogonality, check_v_orthogonality, check_w_completeness, check_w_orthogonality,
    check_wilson_orthogonality, check_ho_in_eq_expansion, check_ho_in_eq_part, reports_table, reports_to_jsonl, run_suite,
    IdentityReport, ParamValue,
};
