use clap::{Args, ValueEnum};
use serde_json::json;

use conflab_core::io::{to_pretty, TensorFile};
use conflab_core::models::{
    build_type_a_lorentz, fefferman_flatness_check, m_curvature_oracle, su_killing_signature, TypeALorentzData,
};
use conflab_core::scalar::ScalarText;

use crate::build::{m_data, param_json};
use crate::manifest::Manifest;
use crate::{CmdResult, Ctx, Failure, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    /// Koszul curvature of M(λ, ω, A) against the closed-form readings.
    #[value(name = "M-curvature")]
    MCurvature,
    /// Weyl tensor of the Fefferman-type Lorentzian metric on su(1, m+1)/…
    #[value(name = "fefferman-flatness")]
    FeffermanFlatness,
    /// Killing signature of the Hermitian type-A algebra against su(1, m+1).
    #[value(name = "typeA-su-isomorphism")]
    TypeASuIsomorphism,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(value_enum)]
    pub name: Oracle,
    /// Complex dimension of E (fefferman-flatness, typeA-su-isomorphism).
    #[arg(long)]
    pub m: Option<usize>,
    /// M parameters as JSON or @path: {"e_gram", "omega", "a", "lambda"?}.
    #[arg(long)]
    pub params: Option<String>,
}

pub fn run(a: &OracleArgs, _ctx: &Ctx, man: &mut Manifest) -> CmdResult {
    match a.name {
        Oracle::MCurvature => {
            let p = a.params.as_deref().map(|t| param_json(t, "params", man)).transpose()?;
            let data = m_data(p.as_ref())?;
            let r = m_curvature_oracle(&data)?;
            let structural = r.r_pq_zero && r.r_qx_zero && r.r_xy_zero && r.oracle_b.is_some();
            let report = json!({
                "oracle": "M-curvature",
                "lambda": r.lambda.to_text(),
                "r_pq_zero": r.r_pq_zero,
                "r_qx_zero": r.r_qx_zero,
                "r_xy_zero": r.r_xy_zero,
                "oracle_b": r.oracle_b.as_ref().map(|b| b.to_rows().iter().map(|row| row.iter().map(ScalarText::to_text).collect::<Vec<_>>()).collect::<Vec<_>>()),
                "readings": r.readings.iter().map(|(t, ok)| json!({"tag": t, "matches": ok})).collect::<Vec<_>>(),
                "matched": r.matched,
                "fitted_form_matches": r.fitted_form_matches,
            });
            if !structural {
                return Err(Failure::invariant("Koszul curvature is not of the form R_px = (Bx)∧q", report));
            }
            Ok(Outcome {
                summary: vec![
                    format!("M-curvature (λ = {}): R_pq = R_qx = R_xy = 0, R_px = (Bx)∧q", r.lambda),
                    format!("closed-form readings matching: {}/{}", r.matched.len(), r.readings.len()),
                    format!("fitted form S² + [S,K] + [J,S] + J² − λS matches: {}", r.fitted_form_matches),
                ],
                files: vec![
                    ("report.json".into(), to_pretty(&report)? + "\n"),
                    ("tensor.json".into(), to_pretty(&TensorFile::from_tensor(&r.oracle))? + "\n"),
                ],
                report,
            })
        }
        Oracle::FeffermanFlatness => {
            let m = a.m.unwrap_or(1);
            let f = fefferman_flatness_check(m)?;
            let report = json!({
                "oracle": "fefferman-flatness",
                "m": m,
                "weyl_zero": f.weyl_zero,
                "scalar_curvature": f.scalar_curvature.to_text(),
                "cahen_wallach_lambda": f.cw_lambda.as_ref().map(ScalarText::to_text),
            });
            if !f.weyl_zero {
                return Err(Failure::invariant("Weyl tensor does not vanish", report));
            }
            Ok(Outcome {
                summary: vec![format!(
                    "fefferman-flatness m = {m}: Weyl = 0, scalar curvature {}, equals Cahen–Wallach R_(λ·id) with λ = {}",
                    f.scalar_curvature,
                    f.cw_lambda.as_ref().map_or("none".into(), ScalarText::to_text)
                )],
                files: vec![
                    ("report.json".into(), to_pretty(&report)? + "\n"),
                    ("tensor.json".into(), to_pretty(&TensorFile::from_tensor(&f.curvature))? + "\n"),
                ],
                report,
            })
        }
        Oracle::TypeASuIsomorphism => {
            let m = a.m.unwrap_or(1);
            let model = build_type_a_lorentz(&TypeALorentzData::hermitian(m)?)?;
            let (neg, zero, pos) = model.algebra.killing_form().inertia()?;
            let want = su_killing_signature(1, m + 1);
            let dim = model.algebra.dim();
            let want_dim = (m + 2) * (m + 2) - 1;
            let report = json!({
                "oracle": "typeA-su-isomorphism",
                "m": m,
                "dim": dim,
                "su_dim": want_dim,
                "killing_inertia": [neg, zero, pos],
                "su_killing_signature": [want.0, want.1],
            });
            if dim != want_dim || zero != 0 || (neg, pos) != want {
                return Err(Failure::invariant(format!("type-A algebra does not match su(1, {})", m + 1), report));
            }
            Ok(Outcome {
                summary: vec![format!(
                    "typeA-su-isomorphism m = {m}: dim {dim}, Killing form non-degenerate of signature ({neg}, {pos}) as su(1, {})",
                    m + 1
                )],
                files: vec![("report.json".into(), to_pretty(&report)? + "\n")],
                report,
            })
        }
    }
}
