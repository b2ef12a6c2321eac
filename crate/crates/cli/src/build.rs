use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use conflab_core::curvature::{weyl, CurvatureTensor};
use conflab_core::io::{to_pretty, AlgebraFile, SpaceFile, TensorFile};
use conflab_core::lie::{prolongation_isotropy_audit, FiniteLieAlgebra, GradedStructure};
use conflab_core::linalg::Mat;
use conflab_core::models::*;
use conflab_core::pseudo::StandardDecomposition;
use conflab_core::scalar::{parse_rational, Rational, RealField, ScalarText};

use crate::manifest::Manifest;
use crate::{parse_json, read_input, CmdResult, Ctx, Failure, Mode, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    #[value(name = "so-conformal")]
    SoConformal,
    #[value(name = "su-graded")]
    SuGraded,
    #[value(name = "typeA-lorentz")]
    TypeALorentz,
    #[value(name = "cahen-wallach")]
    CahenWallach,
    #[value(name = "M")]
    M,
    #[value(name = "parabolic-bounds")]
    ParabolicBounds,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(value_enum)]
    pub model: Model,
    /// Index of the first block (so-conformal, su-graded, parabolic-bounds).
    #[arg(long)]
    pub k: Option<usize>,
    /// Index of the second block (so-conformal, su-graded, parabolic-bounds).
    #[arg(long)]
    pub l: Option<usize>,
    /// Complex dimension of E for the Hermitian type-A family.
    #[arg(long)]
    pub m: Option<usize>,
    /// Total dimension, checked against S (cahen-wallach).
    #[arg(long)]
    pub n: Option<usize>,
    /// Symmetric matrix S as JSON, e.g. "[[1,0],[0,1]]" (cahen-wallach).
    #[arg(long = "S")]
    pub s: Option<String>,
    /// Scale of g(p, q) (parabolic-bounds).
    #[arg(long)]
    pub nu: Option<i64>,
    /// Model parameters as JSON, or @path to a JSON file (typeA-lorentz, M).
    #[arg(long)]
    pub params: Option<String>,
}

/// Inline JSON is digested as-is; `@path` reads and digests the file.
pub fn param_json(text: &str, name: &str, m: &mut Manifest) -> Result<Value, Failure> {
    match text.strip_prefix('@') {
        Some(path) => {
            let body = read_input(&PathBuf::from(path), m)?;
            parse_json(&body, name)
        }
        None => {
            m.add_input(name, text.as_bytes());
            parse_json(text, name)
        }
    }
}

fn rational_of(v: &Value, what: &str) -> Result<Rational, Failure> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        other => return Err(Failure::Input(format!("{what}: {other} is not an integer or \"n/d\" string"))),
    };
    parse_rational(&text).map_err(|e| Failure::Input(format!("{what}: {e}")))
}

pub fn mat_of(v: &Value, what: &str) -> Result<Mat<Rational>, Failure> {
    let rows = v.as_array().ok_or_else(|| Failure::Input(format!("{what} must be an array of rows")))?;
    let rows: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Failure::Input(format!("{what} must be an array of rows")))?
                .iter()
                .map(|x| rational_of(x, what))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if rows.is_empty() {
        return Err(Failure::Input(format!("{what} is empty")));
    }
    Ok(Mat::from_rows(rows)?)
}

fn field<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.as_object().and_then(|o| o.get(key))
}

/// `{"e_gram", "omega", "a", "lambda"?}`; defaults to `E = R²`, standard `ω`, `A = 0`.
pub fn m_data(params: Option<&Value>) -> Result<MData, Failure> {
    let default = json!({"e_gram": [[1, 0], [0, 1]], "omega": [[0, 1], [-1, 0]], "a": [[0, 0], [0, 0]]});
    let p = params.unwrap_or(&default);
    let get = |k: &str| field(p, k).ok_or_else(|| Failure::Input(format!("M parameters need {k:?}")));
    let lambda = field(p, "lambda").map(|v| rational_of(v, "lambda")).transpose()?;
    Ok(MData::new(mat_of(get("e_gram")?, "e_gram")?, mat_of(get("omega")?, "omega")?, mat_of(get("a")?, "a")?, lambda)?)
}

fn type_a_data(params: &Value) -> Result<TypeALorentzData, Failure> {
    let get = |k: &str| field(params, k).ok_or_else(|| Failure::Input(format!("typeA parameters need {k:?}")));
    let k_basis = match field(params, "k_basis") {
        None => Vec::new(),
        Some(v) => v
            .as_array()
            .ok_or_else(|| Failure::Input("k_basis must be an array of matrices".into()))?
            .iter()
            .map(|x| mat_of(x, "k_basis"))
            .collect::<Result<_, _>>()?,
    };
    Ok(TypeALorentzData::new(mat_of(get("e_gram")?, "e_gram")?, mat_of(get("j")?, "j")?, mat_of(get("a")?, "a")?, k_basis)?)
}

fn to_float_text(s: &str) -> String {
    parse_rational(s).map_or_else(|_| s.to_string(), |q| RealField::to_f64(&q).to_text())
}

fn float_rows(rows: &mut [Vec<String>]) {
    for r in rows {
        for x in r.iter_mut() {
            *x = to_float_text(x);
        }
    }
}

fn mat_text<F: ScalarText>(m: &Mat<F>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(ScalarText::to_text).collect()).collect()
}

pub fn grading_dims<F: conflab_core::scalar::Field>(g: &GradedStructure<F>) -> Value {
    let m: BTreeMap<String, usize> = g.dims().into_iter().map(|(a, d)| (a.to_string(), d)).collect();
    json!(m)
}

fn algebra_file(
    l: &FiniteLieAlgebra<Rational>,
    g: Option<&GradedStructure<Rational>>,
    provenance: Value,
    ctx: &Ctx,
) -> conflab_core::Result<String> {
    let mut f = AlgebraFile::from_algebra(l, g, Some(provenance));
    if ctx.mode() == Mode::Float {
        for e in &mut f.sc {
            e.c = to_float_text(&e.c);
        }
    }
    Ok(to_pretty(&f)? + "\n")
}

fn space_file(dec: &StandardDecomposition<Rational>, ctx: &Ctx) -> conflab_core::Result<String> {
    let mut f = SpaceFile::from_space(&dec.space, Some(dec));
    if ctx.mode() == Mode::Float {
        float_rows(&mut f.gram);
    }
    Ok(to_pretty(&f)? + "\n")
}

fn tensor_file(t: &CurvatureTensor<Rational>, ctx: &Ctx) -> conflab_core::Result<String> {
    let mut f = TensorFile::from_tensor(t);
    if ctx.mode() == Mode::Float {
        float_rows(&mut f.gram);
        for c in &mut f.components {
            c.c = to_float_text(&c.c);
        }
    }
    Ok(to_pretty(&f)? + "\n")
}

fn provenance(model: &str, params: Value) -> Value {
    json!({"model": model, "params": params, "tool": concat!("conflab ", env!("CARGO_PKG_VERSION"))})
}

pub fn run(a: &BuildArgs, ctx: &Ctx, m: &mut Manifest) -> CmdResult {
    match a.model {
        Model::SoConformal => {
            let (k, l) = (a.k.unwrap_or(1), a.l.unwrap_or(3));
            let s = build_so_conformal(k, l)?;
            let prov = provenance("so-conformal", json!({"k": k, "l": l}));
            let mut files = vec![("algebra.json".to_string(), algebra_file(&s.algebra, Some(&s.grading), prov, ctx)?)];
            if let Some(dec) = &s.decomposition {
                files.push(("space.json".into(), space_file(dec, ctx)?));
            }
            Ok(Outcome {
                summary: vec![format!("so-conformal R^({k},{l}): dim {}, grading {}", s.algebra.dim(), grading_dims(&s.grading))],
                report: json!({"model": "so-conformal", "dim": s.algebra.dim(), "grading": grading_dims(&s.grading)}),
                files,
            })
        }
        Model::SuGraded => {
            let (k, l) = (a.k.unwrap_or(0), a.l.unwrap_or(1));
            let s = build_su_graded(k, l)?;
            let prov = provenance("su-graded", json!({"k": k, "l": l}));
            Ok(Outcome {
                summary: vec![format!("su({}, {}): dim {}, grading {}", k + 1, l + 1, s.algebra.dim(), grading_dims(&s.grading))],
                report: json!({"model": "su-graded", "dim": s.algebra.dim(), "grading": grading_dims(&s.grading)}),
                files: vec![("algebra.json".into(), algebra_file(&s.algebra, Some(&s.grading), prov, ctx)?)],
            })
        }
        Model::TypeALorentz => {
            let (data, params) = match &a.params {
                Some(t) => {
                    let p = param_json(t, "params", m)?;
                    (type_a_data(&p)?, p)
                }
                None => {
                    let mm = a.m.unwrap_or(1);
                    (TypeALorentzData::hermitian(mm)?, json!({"hermitian": mm}))
                }
            };
            let model = build_type_a_lorentz(&data)?;
            let prov = provenance("typeA-lorentz", params);
            let d = model.algebra.dim();
            Ok(Outcome {
                summary: vec![format!("typeA Lorentzian, dim E = {}: dim {d}, Jacobi holds", data.dim_e())],
                report: json!({"model": "typeA-lorentz", "dim": d, "dim_e": data.dim_e(), "grading": grading_dims(&model.grading)}),
                files: vec![("algebra.json".into(), algebra_file(&model.algebra, Some(&model.grading), prov, ctx)?)],
            })
        }
        Model::CahenWallach => {
            let text = a.s.as_deref().ok_or_else(|| Failure::Input("cahen-wallach needs --S".into()))?;
            let sv = param_json(text, "S", m)?;
            let data = CahenWallachData::new(mat_of(&sv, "S")?)?;
            if let Some(n) = a.n {
                if n != data.n() {
                    return Err(Failure::Input(format!("--n {n} disagrees with S, which gives n = {}", data.n())));
                }
            }
            let model = build_cahen_wallach(&data)?;
            let wz = weyl(&model.curvature)?.is_zero();
            let prov = provenance("cahen-wallach", json!({"S": mat_text(&data.s)}));
            Ok(Outcome {
                summary: vec![format!(
                    "Cahen–Wallach n = {}: dim {}, scalar curvature {}, conformally flat {wz}",
                    data.n(),
                    model.algebra.dim(),
                    model.curvature.scalar_curvature()
                )],
                report: json!({
                    "model": "cahen-wallach",
                    "n": data.n(),
                    "dim": model.algebra.dim(),
                    "weyl_zero": wz,
                    "scalar_curvature": model.curvature.scalar_curvature().to_text(),
                }),
                files: vec![
                    ("algebra.json".into(), algebra_file(&model.algebra, None, prov, ctx)?),
                    ("tensor.json".into(), tensor_file(&model.curvature, ctx)?),
                    ("space.json".into(), space_file(&model.decomposition, ctx)?),
                ],
            })
        }
        Model::M => {
            let p = a.params.as_deref().map(|t| param_json(t, "params", m)).transpose()?;
            let data = m_data(p.as_ref())?;
            let model = build_m(&data)?;
            let prov = provenance(
                "M",
                json!({"e_gram": mat_text(&data.e_gram), "omega": mat_text(&data.omega), "a": mat_text(&data.a), "lambda": data.lambda.to_text()}),
            );
            Ok(Outcome {
                summary: vec![format!("M(λ = {}, ω, A): dim {}, grading {}", data.lambda, model.algebra.dim(), grading_dims(&model.grading))],
                report: json!({"model": "M", "dim": model.algebra.dim(), "lambda": data.lambda.to_text(), "grading": grading_dims(&model.grading)}),
                files: vec![
                    ("algebra.json".into(), algebra_file(&model.algebra, Some(&model.grading), prov, ctx)?),
                    ("space.json".into(), space_file(&model.decomposition, ctx)?),
                ],
            })
        }
        Model::ParabolicBounds => {
            let (k, l, nu) = (a.k.unwrap_or(1), a.l.unwrap_or(3), a.nu.unwrap_or(1));
            match ctx.mode() {
                Mode::Exact => parabolic::<Rational>(k, l, nu),
                Mode::Float => parabolic::<f64>(k, l, nu),
            }
        }
    }
}

/// Bounds and their prolongations; both must be `T^(g∘P)` with isotropic covectors.
pub fn parabolic_report<F: RealField + ScalarText>(dec: &StandardDecomposition<F>) -> Result<(Value, bool), Failure> {
    let b = build_parabolic_bounds(dec)?;
    let k = dec.k();
    let mut ok = true;
    let mut out = serde_json::Map::new();
    for (name, g0, pr) in [("min", &b.min, b.min_prolongation()), ("max", &b.max, b.max_prolongation())] {
        let audit = prolongation_isotropy_audit(g0);
        let t = is_t_of_gp(dec, &pr);
        let good = pr.dim() == k && t && audit.passes && audit.span_isotropic;
        ok &= good;
        out.insert(
            name.into(),
            json!({
                "dim": g0.dim(),
                "basis": g0.basis.iter().map(mat_text).collect::<Vec<_>>(),
                "prolongation_dim": pr.dim(),
                "is_t_of_gp": t,
                "isotropic": audit.span_isotropic,
                "passes": good,
            }),
        );
    }
    out.insert("k".into(), json!(k));
    Ok((Value::Object(out), ok))
}

fn parabolic<F: RealField + ScalarText>(k: usize, l: usize, nu: i64) -> CmdResult {
    let dec = StandardDecomposition::<F>::standard(k, l, nu)?;
    let (report, ok) = parabolic_report(&dec)?;
    if !ok {
        return Err(Failure::invariant("prolongation of a parabolic bound is not T^(g∘P)", report));
    }
    let space = to_pretty(&SpaceFile::from_space(&dec.space, Some(&dec)))? + "\n";
    let bounds = to_pretty(&report)? + "\n";
    Ok(Outcome {
        summary: vec![format!(
            "parabolic bounds k={k} l={l} ν={nu}: dim g⁰_min {}, dim g⁰_max {}, prolongations T^(g∘P) of dim {k}",
            report["min"]["dim"], report["max"]["dim"]
        )],
        report,
        files: vec![("space.json".into(), space), ("bounds.json".into(), bounds)],
    })
}
