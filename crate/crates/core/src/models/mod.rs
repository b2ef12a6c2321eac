//! Model Lie algebras: the flat model, su(k+1, l+1) with its depth-two grading,
//! the type-A Lorentzian algebras, Cahen–Wallach pairs, `M(λ, ω, A)` and the
//! parabolic bounds on the isotropy.

pub mod cw;
pub mod m;
pub mod parabolic;
pub mod so_conformal;
pub mod su;
pub mod type_a;

pub use cw::{build_cahen_wallach, CahenWallachData, CahenWallachModel};
pub use m::{build_m, curvature_m_formula, m_curvature_oracle, MData, MModel, MOracleReport};
pub use parabolic::{build_parabolic_bounds, grading_endomorphism, is_t_of_gp, ParabolicBounds};
pub use so_conformal::{build_so_conformal, FlatElement, SoConformal};
pub use su::{build_su_graded, fefferman_flatness_check, fefferman_isotropy, FeffermanFlatness, FeffermanIsotropy, SuGraded};
pub use type_a::{
    assemble_type_a, build_type_a_lorentz, closed_form_k, flat_embedding_is_homomorphism, solve_k, su_killing_signature,
    SolveKReport, TypeALorentzData, TypeAModel,
};
