use std::path::PathBuf;

use serde_json::{json, Value};

use conflab_core::curvature::{is_weyl_member, weyl, CurvatureTensor};
use conflab_core::io::{to_pretty, ClassificationFile, QuarticFile, TensorFile};
use conflab_core::scalar::{Rational, RealField, ScalarText};
use conflab_core::spinor::{petrov_classify, stabilizers, typeb_analyze, PetrovOptions, PetrovType, QuarticForm, SpinorFrame};

use crate::manifest::Manifest;
use crate::{parse_json, read_input, CmdResult, Ctx, Failure, Mode, Outcome};

// Exact work uses ν = 2 so that the spinor frame is rational; ν = 1 needs √2.
const EXACT_NU: i64 = 2;
const FLOAT_NU: i64 = 1;

pub fn run(file: &PathBuf, ctx: &Ctx, m: &mut Manifest) -> CmdResult {
    let text = read_input(file, m)?;
    let v = parse_json(&text, "classify input")?;
    let is = |k: &str| v.as_object().is_some_and(|o| o.contains_key(k));
    if is("coeffs") {
        let f: QuarticFile = serde_json::from_value(v).map_err(|e| Failure::Input(format!("not a quartic file: {e}")))?;
        let mode = ctx.mode.unwrap_or(if f.mode == "float" { Mode::Float } else { Mode::Exact });
        m.mode = mode;
        match mode {
            Mode::Exact => classify::<Rational>(f.to_quartic()?, EXACT_NU, vec![], ctx),
            Mode::Float => classify::<f64>(f.to_quartic()?, FLOAT_NU, vec![], ctx),
        }
    } else if is("components") {
        let f: TensorFile = serde_json::from_value(v).map_err(|e| Failure::Input(format!("not a tensor file: {e}")))?;
        if f.n != 4 {
            return Err(Failure::Input(format!("classification needs a 4-dimensional tensor, got n = {}", f.n)));
        }
        match ctx.mode() {
            Mode::Exact => from_tensor::<Rational>(&f, EXACT_NU, ctx),
            Mode::Float => from_tensor::<f64>(&f, FLOAT_NU, ctx),
        }
    } else {
        Err(Failure::Input("expected a quartic file (\"coeffs\") or a tensor file (\"components\")".into()))
    }
}

fn from_tensor<R: RealField + ScalarText>(f: &TensorFile, nu: i64, ctx: &Ctx) -> CmdResult {
    let t: CurvatureTensor<R> = f.to_tensor()?;
    if t.is_raw() {
        let s = t.symmetry();
        return Err(Failure::invariant(
            "tensor lacks curvature symmetries",
            json!({"first_failure": s.first_failure}),
        ));
    }
    let mut notes = Vec::new();
    let w = if is_weyl_member(&t) {
        t
    } else {
        notes.push("input is a full curvature tensor; its Weyl part was classified".to_string());
        weyl(&t)?
    };
    let frame = SpinorFrame::<R>::new(nu)?;
    let ws = frame.from_null_frame(&w)?;
    let phi = frame
        .quartic_from_weyl(&ws)
        .map_err(|e| Failure::invariant(e.to_string(), json!({"stage": "quartic extraction"})))?;
    classify(phi, nu, notes, ctx)
}

fn classify<R: RealField + ScalarText>(phi: QuarticForm<R>, nu: i64, notes: Vec<String>, ctx: &Ctx) -> CmdResult {
    let frame = SpinorFrame::<R>::new(nu)?;
    let opts = PetrovOptions { tol: ctx.tol, seed: ctx.seed, ..Default::default() };
    let p = petrov_classify(&phi, &opts);
    let s = stabilizers(&phi, ctx.tol);
    let mut warnings = notes;
    let b = if p.petrov == PetrovType::O {
        None
    } else {
        match typeb_analyze(&frame, &phi, ctx.tol) {
            Ok(b) => Some(b),
            Err(e) => {
                warnings.push(format!("homothety analysis unavailable: {e}"));
                None
            }
        }
    };
    let mut file = ClassificationFile::new(&p, Some(&s), b.as_ref());
    file.warnings.extend(warnings);
    let mut summary = vec![format!(
        "type {}: conf dim {}, aut dim {}, {}",
        file.petrov,
        file.conf_dim,
        file.aut_dim,
        file.type_b.as_deref().unwrap_or("homothety analysis not applicable")
    )];
    if let Some(f) = b.as_ref().and_then(|b| b.homothety.as_ref()).and_then(|h| h.p_wedge_q_factor(&frame)) {
        summary.push(format!("skew part of the homothety along p∧q: {} (frame ν = {nu})", f.to_text()));
    }
    summary.extend(file.warnings.iter().map(|w| format!("warning: {w}")));
    let report: Value = serde_json::to_value(&file).map_err(conflab_core::Error::from)?;
    Ok(Outcome { summary, report, files: vec![("classification.json".into(), to_pretty(&file)? + "\n")] })
}
