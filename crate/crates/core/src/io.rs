//! JSON file formats.  Scalars travel as strings (`"n/d"`, `"a/b+c/d*i"`,
//! floats in shortest round-trip exponent form) so files diff cleanly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curvature::CurvatureTensor;
use crate::error::{Error, Result};
use crate::lie::{FiniteLieAlgebra, GradedStructure};
use crate::linalg::Mat;
use crate::pseudo::{PseudoEuclideanSpace, StandardDecomposition};
use crate::scalar::{Cx, RealField, ScalarText};
use crate::spinor::{PetrovResult, QuarticForm, StabilizerResult, TypeBAnalysis};

pub fn to_pretty<T: Serialize>(x: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(x)?)
}

pub fn from_str<T: serde::de::DeserializeOwned>(s: &str) -> Result<T> {
    Ok(serde_json::from_str(s)?)
}

fn mat_text<F: ScalarText>(m: &Mat<F>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(ScalarText::to_text).collect()).collect()
}

fn mat_parse<F: ScalarText>(rows: &[Vec<String>]) -> Result<Mat<F>> {
    let rows: Vec<Vec<F>> =
        rows.iter().map(|r| r.iter().map(|s| F::parse_text(s)).collect::<Result<_>>()).collect::<Result<_>>()?;
    Mat::from_rows(rows)
}

// ---------------------------------------------------------------- space.json

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionFile {
    #[serde(rename = "P")]
    pub p: Vec<usize>,
    #[serde(rename = "E")]
    pub e: Vec<usize>,
    #[serde(rename = "Q")]
    pub q: Vec<usize>,
    pub nu: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub gram: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionFile>,
}

impl SpaceFile {
    pub fn from_space<F: RealField + ScalarText>(
        space: &PseudoEuclideanSpace<F>,
        dec: Option<&StandardDecomposition<F>>,
    ) -> Self {
        let (k, l) = space.signature();
        SpaceFile {
            n: space.n(),
            k,
            l,
            gram: mat_text(space.gram()),
            decomposition: dec.map(|d| DecompositionFile { p: d.p.clone(), e: d.e.clone(), q: d.q.clone(), nu: d.nu }),
        }
    }

    /// Rebuilds the space, checking the declared signature and decomposition.
    pub fn to_space<F: RealField + ScalarText>(
        &self,
    ) -> Result<(PseudoEuclideanSpace<F>, Option<StandardDecomposition<F>>)> {
        let gram: Mat<F> = mat_parse(&self.gram)?;
        if gram.rows() != self.n || gram.cols() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: gram.rows() });
        }
        let space = PseudoEuclideanSpace::with_signature(gram, self.k, self.l)?;
        let dec = match &self.decomposition {
            None => None,
            Some(d) => Some(StandardDecomposition::new(space.clone(), d.p.clone(), d.e.clone(), d.q.clone(), d.nu)?),
        };
        Ok((space, dec))
    }
}

// ---------------------------------------------------------------- algebra.json

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureConstant {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradingFile {
    pub degrees: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    pub labels: Vec<String>,
    pub complex: bool,
    pub sc: Vec<StructureConstant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<GradingFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

impl AlgebraFile {
    pub fn from_algebra<F: ScalarText>(
        l: &FiniteLieAlgebra<F>,
        grading: Option<&GradedStructure<F>>,
        provenance: Option<serde_json::Value>,
    ) -> Self {
        AlgebraFile {
            dim: l.dim(),
            labels: l.labels().to_vec(),
            complex: F::COMPLEX,
            sc: l.entries().map(|(i, j, k, c)| StructureConstant { i, j, k, c: c.to_text() }).collect(),
            grading: grading.and_then(|g| g.basis_degrees.clone()).map(|degrees| GradingFile { degrees }),
            provenance,
        }
    }

    /// Structure constants with `i > j` are read through antisymmetry; repeated pairs are an error.
    pub fn to_algebra<F: ScalarText>(&self) -> Result<FiniteLieAlgebra<F>> {
        if self.labels.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: self.labels.len() });
        }
        if self.complex && !F::COMPLEX {
            return Err(Error::Parse("complex structure constants need a complex scalar field".into()));
        }
        let d = self.dim;
        let mut table: BTreeMap<(usize, usize), Vec<F>> = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.sc {
            if e.i >= d || e.j >= d || e.k >= d {
                return Err(Error::Parse(format!("index out of range in ({}, {}, {})", e.i, e.j, e.k)));
            }
            if e.i == e.j {
                return Err(Error::Parse(format!("diagonal entry ({0}, {0}, {1})", e.i, e.k)));
            }
            let (a, b) = (e.i.min(e.j), e.i.max(e.j));
            if !seen.insert((a, b, e.k)) {
                return Err(Error::Parse(format!("repeated entry ({a}, {b}, {})", e.k)));
            }
            let c = F::parse_text(&e.c)?;
            let v = table.entry((a, b)).or_insert_with(|| vec![F::zero(); d]);
            v[e.k] = if e.i < e.j { c } else { -c };
        }
        let mut l = FiniteLieAlgebra::new(self.labels.clone());
        for ((i, j), v) in table {
            l.set_bracket(i, j, &v)?;
        }
        Ok(l)
    }
}

// ---------------------------------------------------------------- tensor.json

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorComponent {
    pub idx: [usize; 4],
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorFile {
    pub n: usize,
    pub gram: Vec<Vec<String>>,
    /// `"(0,4)"` or `"(1,3)"`.
    #[serde(rename = "type")]
    pub kind: String,
    pub components: Vec<TensorComponent>,
}

impl TensorFile {
    /// Sparse `(0,4)` components `R_ijkl = g(R(e_i, e_j)e_k, e_l)`.
    pub fn from_tensor<F: RealField + ScalarText>(t: &CurvatureTensor<F>) -> Self {
        let n = t.n();
        let components = t
            .low_components()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(x, c)| TensorComponent { idx: [x / (n * n * n), (x / (n * n)) % n, (x / n) % n, x % n], c: c.to_text() })
            .collect();
        TensorFile { n, gram: mat_text(t.space().gram()), kind: "(0,4)".into(), components }
    }

    pub fn to_tensor<F: RealField + ScalarText>(&self) -> Result<CurvatureTensor<F>> {
        let gram: Mat<F> = mat_parse(&self.gram)?;
        if gram.rows() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: gram.rows() });
        }
        let space = PseudoEuclideanSpace::new(gram, 1)?;
        let n = self.n;
        let mut comps = vec![F::zero(); n.pow(4)];
        for c in &self.components {
            if c.idx.iter().any(|&i| i >= n) {
                return Err(Error::Parse(format!("component index {:?} out of range", c.idx)));
            }
            let [i, j, k, l] = c.idx;
            comps[((i * n + j) * n + k) * n + l] = F::parse_text(&c.c)?;
        }
        match self.kind.as_str() {
            "(0,4)" => CurvatureTensor::from_low(space, comps),
            "(1,3)" => CurvatureTensor::from_up(space, comps),
            other => Err(Error::Parse(format!("tensor type {other:?} is neither \"(0,4)\" nor \"(1,3)\""))),
        }
    }
}

// ---------------------------------------------------------------- quartic.json

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarticFile {
    pub coeffs: Vec<String>,
    pub mode: String,
}

impl QuarticFile {
    pub fn from_quartic<R: RealField + ScalarText>(q: &QuarticForm<R>) -> Self {
        QuarticFile {
            coeffs: q.c.iter().map(ScalarText::to_text).collect(),
            mode: if R::EXACT { "exact" } else { "float" }.into(),
        }
    }

    pub fn to_quartic<R: RealField + ScalarText>(&self) -> Result<QuarticForm<R>> {
        if self.coeffs.len() != 5 {
            return Err(Error::DimensionMismatch { expected: 5, found: self.coeffs.len() });
        }
        if !matches!(self.mode.as_str(), "exact" | "float") {
            return Err(Error::Parse(format!("mode {:?} is neither \"exact\" nor \"float\"", self.mode)));
        }
        Ok(QuarticForm::from_vec(self.coeffs.iter().map(|s| Cx::<R>::parse_text(s)).collect::<Result<_>>()?))
    }
}

// ---------------------------------------------------------------- classification output

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub a: String,
    pub b: String,
    pub mult: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomothetyRecord {
    pub mu: String,
    pub c: Vec<Vec<String>>,
    pub basis_change: Vec<Vec<String>>,
    pub normalized_c: Vec<Vec<String>>,
    pub normalized_quartic: Vec<String>,
    /// Skew part of `D = id + φ(C)` in the frame `p, e1, ei, q`.
    pub skew: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationFile {
    #[serde(rename = "type")]
    pub petrov: String,
    pub roots: Vec<RootRecord>,
    pub conf_dim: usize,
    pub aut_dim: usize,
    pub exact: bool,
    pub residual: String,
    /// Float path: other types the input cannot be separated from at its precision.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alternatives: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    /// `"essential homothety: …"` or `"no essential homothety"`; absent for type O.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub type_b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homothety: Option<HomothetyRecord>,
}

impl ClassificationFile {
    pub fn new<R: RealField + ScalarText>(
        p: &PetrovResult,
        s: Option<&StabilizerResult<R>>,
        b: Option<&TypeBAnalysis<R>>,
    ) -> Self {
        ClassificationFile {
            petrov: p.petrov.label().into(),
            roots: p.roots.iter().map(|r| RootRecord { a: r.a.to_text(), b: r.b.to_text(), mult: r.mult }).collect(),
            conf_dim: s.map_or(0, StabilizerResult::conf_dim),
            aut_dim: s.map_or(0, StabilizerResult::aut_dim),
            exact: p.exact,
            residual: p.residual.to_text(),
            alternatives: p.alternatives.iter().map(|t| t.label().to_string()).collect(),
            warnings: p.warnings.clone(),
            type_b: b.map(TypeBAnalysis::message),
            homothety: b.and_then(|b| b.homothety.as_ref()).map(|h| HomothetyRecord {
                mu: h.mu.to_text(),
                c: mat_text(&h.c),
                basis_change: mat_text(&h.basis_change),
                normalized_c: mat_text(&h.normalized_c),
                normalized_quartic: h.normalized_phi.c.iter().map(ScalarText::to_text).collect(),
                skew: mat_text(&h.skew),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::curvature_cw;
    use crate::models::build_su_graded;
    use crate::scalar::{int, Rational};
    use crate::spinor::{model_quartics, petrov_classify, stabilizers, typeb_analyze, PetrovOptions, SpinorFrame};

    #[test]
    fn algebra_round_trip() {
        let s = build_su_graded(0, 1).unwrap();
        let f = AlgebraFile::from_algebra(&s.algebra, Some(&s.grading), Some(serde_json::json!({"model": "su-graded"})));
        let text = to_pretty(&f).unwrap();
        let back: AlgebraFile = from_str(&text).unwrap();
        assert_eq!(back, f);
        let l: FiniteLieAlgebra<Rational> = back.to_algebra().unwrap();
        assert_eq!(AlgebraFile::from_algebra(&l, Some(&s.grading), f.provenance.clone()), f);
    }

    #[test]
    fn reversed_and_repeated_entries() {
        let mut f = AlgebraFile {
            dim: 3,
            labels: vec!["x".into(), "y".into(), "z".into()],
            complex: false,
            sc: vec![StructureConstant { i: 1, j: 0, k: 2, c: "1/1".into() }],
            grading: None,
            provenance: None,
        };
        let l: FiniteLieAlgebra<Rational> = f.to_algebra().unwrap();
        assert_eq!(l.basis_bracket(0, 1), vec![int(0), int(0), int(-1)]);
        f.sc.push(StructureConstant { i: 0, j: 1, k: 2, c: "1/1".into() });
        assert!(f.to_algebra::<Rational>().is_err());
    }

    #[test]
    fn space_and_tensor_round_trip() {
        let dec = StandardDecomposition::<Rational>::standard(1, 3, 1).unwrap();
        let f = SpaceFile::from_space(&dec.space, Some(&dec));
        let (sp, d2) = from_str::<SpaceFile>(&to_pretty(&f).unwrap()).unwrap().to_space::<Rational>().unwrap();
        assert_eq!(sp, dec.space);
        assert_eq!(d2.unwrap(), dec);
        let r = curvature_cw::<Rational>(&Mat::diag(&[int(1), int(2)])).unwrap();
        let tf = TensorFile::from_tensor(&r);
        let back: TensorFile = from_str(&to_pretty(&tf).unwrap()).unwrap();
        assert_eq!(back.to_tensor::<Rational>().unwrap(), r);
    }

    #[test]
    fn quartic_and_classification_round_trip() {
        let frame = SpinorFrame::<Rational>::new(2).unwrap();
        for (_, q) in model_quartics::<Rational>() {
            let qf = QuarticFile::from_quartic(&q);
            assert_eq!(from_str::<QuarticFile>(&to_pretty(&qf).unwrap()).unwrap().to_quartic::<Rational>().unwrap(), q);
            let p = petrov_classify(&q, &PetrovOptions::default());
            let s = stabilizers(&q, 1e-10);
            let b = typeb_analyze(&frame, &q, 1e-10).unwrap();
            let c = ClassificationFile::new(&p, Some(&s), Some(&b));
            assert_eq!(from_str::<ClassificationFile>(&to_pretty(&c).unwrap()).unwrap(), c);
        }
        let fq = QuarticFile::from_quartic(&model_quartics::<f64>()[4].1);
        assert_eq!(fq.mode, "float");
        assert_eq!(fq.to_quartic::<f64>().unwrap(), model_quartics::<f64>()[4].1);
    }
}
