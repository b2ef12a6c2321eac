use std::path::PathBuf;

use clap::ValueEnum;
use serde_json::{json, Value};

use conflab_core::curvature::{is_weyl_member, CurvatureTensor};
use conflab_core::io::{from_str, AlgebraFile, SpaceFile, TensorFile};
use conflab_core::lie::{first_prolongation, transitivity_check, FiniteLieAlgebra, GradedStructure, LinearLieSubalgebra};
use conflab_core::linalg::unit;
use conflab_core::scalar::{Field, Gauss, Rational, RealField, ScalarText, C64};

use crate::build::{grading_dims, parabolic_report};
use crate::manifest::Manifest;
use crate::{read_input, CmdResult, Ctx, Failure, Mode, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// algebra.json: Jacobi identity on all basis triples.
    Jacobi,
    /// algebra.json: the declared degrees are compatible with the bracket.
    Grading,
    /// algebra.json: no non-negative element centralizes the negative part.
    Transitivity,
    /// space.json: first prolongations of co, so and the parabolic bounds.
    Prolongation,
    /// tensor.json: antisymmetry, skewness, first Bianchi, pair exchange.
    CurvatureSymmetries,
    /// tensor.json: curvature symmetries and vanishing traces.
    WeylMembership,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Jacobi => "jacobi",
            Suite::Grading => "grading",
            Suite::Transitivity => "transitivity",
            Suite::Prolongation => "prolongation",
            Suite::CurvatureSymmetries => "curvature-symmetries",
            Suite::WeylMembership => "weyl-membership",
        }
    }
}

fn decode<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, Failure> {
    from_str(text).map_err(|e| Failure::Input(format!("not a valid {what}: {e}")))
}

pub fn run(file: &PathBuf, suite: Suite, ctx: &Ctx, m: &mut Manifest) -> CmdResult {
    let text = read_input(file, m)?;
    let (summary, report) = match suite {
        Suite::Jacobi | Suite::Grading | Suite::Transitivity => {
            let f: AlgebraFile = decode(&text, "algebra file")?;
            match (ctx.mode(), f.complex) {
                (Mode::Exact, false) => algebra_suite::<Rational>(&f, suite, ctx)?,
                (Mode::Exact, true) => algebra_suite::<Gauss>(&f, suite, ctx)?,
                (Mode::Float, false) => algebra_suite::<f64>(&f, suite, ctx)?,
                (Mode::Float, true) => algebra_suite::<C64>(&f, suite, ctx)?,
            }
        }
        Suite::Prolongation => {
            let f: SpaceFile = decode(&text, "space file")?;
            match ctx.mode() {
                Mode::Exact => prolongation_suite::<Rational>(&f)?,
                Mode::Float => prolongation_suite::<f64>(&f)?,
            }
        }
        Suite::CurvatureSymmetries | Suite::WeylMembership => {
            let f: TensorFile = decode(&text, "tensor file")?;
            match ctx.mode() {
                Mode::Exact => tensor_suite(&f.to_tensor::<Rational>()?, suite)?,
                Mode::Float => tensor_suite(&f.to_tensor::<f64>()?, suite)?,
            }
        }
    };
    Ok(Outcome { summary: vec![summary], report, files: vec![] })
}

fn algebra_suite<F: ScalarText>(f: &AlgebraFile, suite: Suite, ctx: &Ctx) -> Result<(String, Value), Failure> {
    let l: FiniteLieAlgebra<F> = f.to_algebra()?;
    let degrees = || {
        f.grading
            .as_ref()
            .map(|g| g.degrees.clone())
            .ok_or_else(|| Failure::Input("algebra file has no grading.degrees".into()))
    };
    match suite {
        Suite::Jacobi => {
            let (checked, witness) = jacobi_witness(&l, ctx.tol);
            if let Some((t, v)) = witness {
                let labels: Vec<&str> = t.iter().map(|&i| l.labels()[i].as_str()).collect();
                return Err(Failure::invariant(
                    format!("Jacobi identity fails on ({}, {}, {})", labels[0], labels[1], labels[2]),
                    json!({"triple": t, "labels": labels, "value": l.describe(&v)}),
                ));
            }
            Ok((
                format!("jacobi: pass ({checked} triples, dim {})", l.dim()),
                json!({"suite": "jacobi", "pass": true, "dim": l.dim(), "triples_checked": checked}),
            ))
        }
        Suite::Grading => {
            let g = GradedStructure::from_basis_degrees(&l, degrees()?, None)
                .map_err(|e| Failure::invariant(e.to_string(), json!({"suite": "grading"})))?;
            Ok((
                format!("grading: pass, dims {}", grading_dims(&g)),
                json!({"suite": "grading", "pass": true, "dims": grading_dims(&g)}),
            ))
        }
        Suite::Transitivity => {
            let g = GradedStructure::from_basis_degrees(&l, degrees()?, None)?;
            let t = transitivity_check(&l, &g)?;
            if let Some(w) = t.witness {
                return Err(Failure::invariant(
                    "a non-negative element centralizes the negative part",
                    json!({"element": l.describe(&w)}),
                ));
            }
            Ok(("transitivity: pass".into(), json!({"suite": "transitivity", "pass": true, "dims": grading_dims(&g)})))
        }
        _ => unreachable!("dispatched by file kind"),
    }
}

/// Exact: the first triple with a nonzero jacobiator.  Float: the first whose
/// jacobiator has a component above `tol`.
type Witness<F> = Option<([usize; 3], Vec<F>)>;

fn jacobi_witness<F: Field>(l: &FiniteLieAlgebra<F>, tol: f64) -> (usize, Witness<F>) {
    if F::EXACT {
        let r = l.jacobi_check();
        return (r.triples_checked, r.witness);
    }
    let d = l.dim();
    let mut checked = 0;
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                checked += 1;
                let v = l.jacobiator(&unit(d, i), &unit(d, j), &unit(d, k)).expect("basis vectors");
                if v.iter().any(|x| !x.is_negligible(tol)) {
                    return (checked, Some(([i, j, k], v)));
                }
            }
        }
    }
    (checked, None)
}

fn prolongation_suite<F: RealField + ScalarText>(f: &SpaceFile) -> Result<(String, Value), Failure> {
    let (space, dec) = f.to_space::<F>()?;
    let co = first_prolongation(&LinearLieSubalgebra::co(&space)).dim();
    let so = first_prolongation(&LinearLieSubalgebra::so(&space)).dim();
    let n = space.n();
    let mut report = json!({"suite": "prolongation", "n": n, "co_prolongation_dim": co, "so_prolongation_dim": so});
    if co != n || so != 0 {
        return Err(Failure::invariant(format!("dim co^(1) = {co} (want {n}), dim so^(1) = {so} (want 0)"), report));
    }
    let mut summary = format!("prolongation: pass, dim co^(1) = {co}, dim so^(1) = 0");
    if let Some(dec) = dec.filter(|d| d.k() > 0) {
        let (bounds, ok) = parabolic_report(&dec)?;
        report["bounds"] = bounds.clone();
        if !ok {
            return Err(Failure::invariant("prolongation of a parabolic bound is not T^(g∘P)", report));
        }
        summary.push_str(&format!("; bounds min/max have prolongation T^(g∘P) of dim {}", dec.k()));
    }
    report["pass"] = json!(true);
    Ok((summary, report))
}

fn tensor_suite<F: RealField + ScalarText>(t: &CurvatureTensor<F>, suite: Suite) -> Result<(String, Value), Failure> {
    let s = t.symmetry();
    let sym = json!({
        "antisymmetric_pair": s.antisymmetric_pair,
        "skew_endomorphism": s.skew_endomorphism,
        "first_bianchi": s.first_bianchi,
        "pair_exchange": s.pair_exchange,
    });
    if !s.all() {
        return Err(Failure::invariant(
            format!("{}: tensor lacks curvature symmetries", suite.name()),
            json!({"symmetries": sym, "first_failure": s.first_failure}),
        ));
    }
    if suite == Suite::WeylMembership && !is_weyl_member(t) {
        let ric = t.ricci();
        let n = t.n();
        let (i, j) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| !ric[(i, j)].is_zero())
            .expect("a nonzero trace");
        return Err(Failure::invariant(
            "weyl-membership: the Ricci contraction does not vanish",
            json!({"ricci_entry": [i, j], "value": ric[(i, j)].to_text()}),
        ));
    }
    Ok((
        format!("{}: pass (n = {})", suite.name(), t.n()),
        json!({"suite": suite.name(), "pass": true, "n": t.n(), "symmetries": sym}),
    ))
}
