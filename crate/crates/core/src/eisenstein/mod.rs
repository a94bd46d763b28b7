pub mod checks;
pub mod phi;
pub mod qexp;
pub mod series;

pub use checks::{
    dirichlet_factorization_check, eigen_table_check, eigen_table_check_at,
    eigen_table_check_within, oldform_quadratic_check, oldform_square_check, DirichletSeries,
    EigenEntry, EigenReport,
};
pub use phi::{distribution_check, phi_expansion, PhiPoint, PhiTerm, PhiVector};
pub use qexp::{degeneracy, gamma_p, hecke, op_minus, op_plus, u_operator, QExpansion};
pub use series::{
    build_e_chi, build_e_mlchi, e_chi_closed, e_chi_phi, sigma_chi, EigenCase, EisensteinSeries,
};
