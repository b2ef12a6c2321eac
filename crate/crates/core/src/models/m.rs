//! The algebras `M(λ, ω, A) = RD + Rp + heis(E)` and their left-invariant curvature.
//!
//! Basis `p, e_1.., q, D` with `g(p, q) = 1`, `[p, q] = λq`, `[p, e] = Ae`,
//! `[e, e'] = ω(e, e')q`, and `D = id + q∧p` acting by `0, 1, 2` on `p, E, q`.

use crate::curvature::{koszul_curvature, CurvatureTensor};
use crate::error::{Error, Result};
use crate::lie::{FiniteLieAlgebra, GradedStructure};
use crate::linalg::{unit, vzero, Mat};
use crate::pseudo::StandardDecomposition;
use crate::scalar::{fmt_rational, Field, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct MData {
    /// Gram matrix of `E`.
    pub e_gram: Mat<Rational>,
    /// `omega[(i, j)] = ω(e_i, e_j)`.
    pub omega: Mat<Rational>,
    pub a: Mat<Rational>,
    pub lambda: Rational,
}

impl MData {
    /// `λ` is read off from `ω` when not given; the derivation identity
    /// `ω(Ax, y) + ω(x, Ay) = λ ω(x, y)` is checked entrywise.
    pub fn new(e_gram: Mat<Rational>, omega: Mat<Rational>, a: Mat<Rational>, lambda: Option<Rational>) -> Result<Self> {
        let m = e_gram.rows();
        for x in [&e_gram, &omega, &a] {
            if x.rows() != m || x.cols() != m {
                return Err(Error::DimensionMismatch { expected: m, found: x.rows().max(x.cols()) });
            }
        }
        if !e_gram.is_symmetric() || e_gram.det().is_zero() {
            return Err(Error::Invalid("E Gram matrix must be symmetric and non-degenerate".into()));
        }
        if !omega.add(&omega.transpose()).is_zero() {
            return Err(Error::Invalid("ω must be antisymmetric".into()));
        }
        if omega.det().is_zero() {
            return Err(Error::Invalid("ω is degenerate".into()));
        }
        let aw = a.transpose().mul(&omega).add(&omega.mul(&a));
        let lambda = match lambda {
            Some(l) => l,
            None => {
                let (i, j) = (0..m)
                    .flat_map(|i| (0..m).map(move |j| (i, j)))
                    .find(|&(i, j)| !omega[(i, j)].is_zero())
                    .expect("ω non-degenerate");
                aw[(i, j)].clone() / omega[(i, j)].clone()
            }
        };
        for i in 0..m {
            for j in 0..m {
                let want = omega[(i, j)].clone() * lambda.clone();
                if aw[(i, j)] != want {
                    return Err(Error::Derivation(
                        i + 1,
                        j + 1,
                        format!(
                            "ω(Ae{0}, e{1}) + ω(e{0}, Ae{1}) = {2} but λ·ω(e{0}, e{1}) = {3}",
                            i + 1,
                            j + 1,
                            fmt_rational(&aw[(i, j)]),
                            fmt_rational(&want)
                        ),
                    ));
                }
            }
        }
        Ok(MData { e_gram, omega, a, lambda })
    }

    pub fn dim_e(&self) -> usize {
        self.e_gram.rows()
    }

    /// `J` with `g⁻¹∘ω = 2J`, i.e. `g(Jx, y) = ½ω(x, y)`.
    pub fn j(&self) -> Mat<Rational> {
        self.e_gram.inverse().expect("non-degenerate").mul(&self.omega.transpose()).scale(&Rational::ratio(1, 2))
    }
}

#[derive(Clone, Debug)]
pub struct MModel {
    pub data: MData,
    pub decomposition: StandardDecomposition<Rational>,
    pub algebra: FiniteLieAlgebra<Rational>,
    pub grading: GradedStructure<Rational>,
}

impl MModel {
    /// The subalgebra `V = Rp + E + Rq`.
    pub fn v_algebra(&self) -> FiniteLieAlgebra<Rational> {
        let n = self.decomposition.n();
        self.algebra.restrict(&(0..n).collect::<Vec<_>>()).expect("V is an ideal")
    }
}

pub fn build_m(data: &MData) -> Result<MModel> {
    let m = data.dim_e();
    let dec = StandardDecomposition::<Rational>::build(1, &data.e_gram, 1)?;
    let n = m + 2;
    let (p, q, dd) = (0, n - 1, n);
    let mut labels = dec.labels();
    labels.push("D".into());
    let mut l = FiniteLieAlgebra::new(labels);
    let d = n + 1;
    l.set_bracket(p, q, &unit::<Rational>(d, q).into_iter().map(|x| x * data.lambda.clone()).collect::<Vec<_>>())?;
    for a in 0..m {
        let mut v = vzero(d);
        for b in 0..m {
            v[1 + b] = data.a[(b, a)].clone();
        }
        l.set_bracket(p, 1 + a, &v)?;
        for b in a + 1..m {
            let mut v = vzero(d);
            v[q] = data.omega[(a, b)].clone();
            l.set_bracket(1 + a, 1 + b, &v)?;
        }
        let mut v = vzero(d);
        v[1 + a] = Rational::one();
        l.set_bracket(dd, 1 + a, &v)?;
    }
    let mut v = vzero(d);
    v[q] = Rational::from_i64(2);
    l.set_bracket(dd, q, &v)?;
    let mut degrees = vec![0];
    degrees.extend(std::iter::repeat_n(1, m));
    degrees.extend([2, 0]);
    let grading = GradedStructure::from_basis_degrees(&l, degrees, Some(unit(d, dd)))?;
    Ok(MModel { data: data.clone(), decomposition: dec, algebra: l, grading })
}

/// One transcription of the closed-form curvature `R_px = ±(Bx)∧q`, `R_pq = R_qx = R_xy = 0`.
#[derive(Clone, Debug)]
pub struct MReading {
    pub tag: String,
    pub b: Mat<Rational>,
    pub sign: i64,
    pub tensor: CurvatureTensor<Rational>,
}

/// All eight readings: which of `½(A ± A*)` is called `A^a`, which product is meant,
/// and the global sign.
pub fn curvature_m_formula(data: &MData) -> Result<Vec<MReading>> {
    let g = &data.e_gram;
    let adj = g.inverse().expect("non-degenerate").mul(&data.a.transpose()).mul(g);
    let half = Rational::ratio(1, 2);
    let sym = data.a.add(&adj).scale(&half);
    let skw = data.a.sub(&adj).scale(&half);
    let j = data.j();
    let a = &data.a;
    let mut out = Vec::new();
    for (labels, aa, as_) in [("literal", &sym, &skw), ("verbal", &skw, &sym)] {
        let forms = [
            ("AaAs-AsA-JAs", aa.mul(as_).sub(&as_.mul(a)).sub(&j.mul(as_))),
            ("AaAs-AsAa-JAs", aa.mul(as_).sub(&as_.mul(aa)).sub(&j.mul(as_))),
        ];
        for (name, b) in forms {
            for sign in [1i64, -1] {
                let tensor = m_tensor(data, &b.scale(&Rational::from_i64(sign)))?;
                let tag = format!("{labels}:{name}:{}", if sign > 0 { "+" } else { "-" });
                out.push(MReading { tag, b: b.clone(), sign, tensor });
            }
        }
    }
    Ok(out)
}

/// `R(p, x) = (Bx)∧q = −R(x, p)`, all other basis operators zero.
pub fn m_tensor(data: &MData, b: &Mat<Rational>) -> Result<CurvatureTensor<Rational>> {
    let dec = StandardDecomposition::<Rational>::build(1, &data.e_gram, 1)?;
    let n = dec.n();
    let q = dec.q_vec(0);
    let embed = |x: Vec<Rational>| -> Vec<Rational> {
        let mut v = vzero(n);
        v[1..n - 1].clone_from_slice(&x);
        v
    };
    let ops: Vec<Mat<Rational>> = (0..n)
        .map(|x| {
            if (1..n - 1).contains(&x) {
                dec.space.wedge_vv(&embed(b.col(x - 1)), &q).expect("same space")
            } else {
                Mat::zeros(n, n)
            }
        })
        .collect();
    CurvatureTensor::from_operators(dec.space.clone(), |i, j| {
        if i == 0 {
            ops[j].clone()
        } else if j == 0 {
            ops[i].neg()
        } else {
            Mat::zeros(n, n)
        }
    })
}

#[derive(Clone, Debug)]
pub struct MOracleReport {
    pub lambda: Rational,
    pub r_pq_zero: bool,
    pub r_qx_zero: bool,
    pub r_xy_zero: bool,
    /// `R_px = (Bx)∧q` for some `B`, which is then returned.
    pub oracle_b: Option<Mat<Rational>>,
    pub readings: Vec<(String, bool)>,
    pub matched: Vec<String>,
    /// Whether the oracle equals `B = S² + [S,K] + [J,S] + J² − λS`
    /// (`S`, `K` the symmetric and skew parts of `A`), a form fitted in dim E = 2.
    pub fitted_form_matches: bool,
    pub oracle: CurvatureTensor<Rational>,
}

/// `S² + [S,K] + [J,S] + J² − λS`.
pub fn fitted_b(data: &MData) -> Mat<Rational> {
    let g = &data.e_gram;
    let adj = g.inverse().expect("non-degenerate").mul(&data.a.transpose()).mul(g);
    let half = Rational::ratio(1, 2);
    let s = data.a.add(&adj).scale(&half);
    let k = data.a.sub(&adj).scale(&half);
    let j = data.j();
    s.mul(&s).add(&s.commutator(&k)).add(&j.commutator(&s)).add(&j.mul(&j)).sub(&s.scale(&data.lambda))
}

/// Compares the Koszul curvature of `(V, g)` with every closed-form reading.
pub fn m_curvature_oracle(data: &MData) -> Result<MOracleReport> {
    let model = build_m(data)?;
    let v = model.v_algebra();
    let dec = &model.decomposition;
    let n = dec.n();
    let r = koszul_curvature(&v, dec.space.gram())?;
    let zero_op = |i: usize, j: usize| r.operator(i, j).is_zero();
    let r_pq_zero = zero_op(0, n - 1);
    let r_qx_zero = (1..n - 1).all(|x| zero_op(n - 1, x));
    let r_xy_zero = (1..n - 1).all(|x| (1..n - 1).all(|y| zero_op(x, y)));
    let m = n - 2;
    let b = Mat::from_fn(m, m, |i, j| r.operator(0, 1 + j)[(1 + i, 0)].clone());
    let oracle_b = m_tensor(data, &b).ok().filter(|t| t.up_components() == r.up_components()).map(|_| b);
    let readings: Vec<(String, bool)> = curvature_m_formula(data)?
        .into_iter()
        .map(|c| {
            let ok = c.tensor.up_components() == r.up_components();
            (c.tag, ok)
        })
        .collect();
    let matched = readings.iter().filter(|(_, ok)| *ok).map(|(t, _)| t.clone()).collect();
    let fitted_form_matches = m_tensor(data, &fitted_b(data))?.up_components() == r.up_components();
    Ok(MOracleReport {
        lambda: data.lambda.clone(),
        r_pq_zero,
        r_qx_zero,
        r_xy_zero,
        oracle_b,
        readings,
        matched,
        fitted_form_matches,
        oracle: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn std_omega() -> Mat<Rational> {
        Mat::from_rows(vec![vec![int(0), int(1)], vec![int(-1), int(0)]]).unwrap()
    }

    #[test]
    fn lambda_is_trace_in_dim_two() {
        let d = MData::new(Mat::identity(2), std_omega(), Mat::diag(&[int(2), int(5)]), None).unwrap();
        assert_eq!(d.lambda, int(7));
        let m = build_m(&d).unwrap();
        assert!(m.algebra.jacobi_check().passed());
        assert_eq!(m.algebra.basis_bracket(1, 2), unit(5, 3));
    }

    #[test]
    fn derivation_violation_names_pair() {
        let o = Mat::from_fn(4, 4, |i, j| match (i, j) {
            (0, 1) | (2, 3) => int(1),
            (1, 0) | (3, 2) => int(-1),
            _ => int(0),
        });
        let err = MData::new(Mat::identity(4), o, Mat::diag(&[int(1), int(0), int(0), int(0)]), None).unwrap_err();
        assert!(matches!(err, Error::Derivation(3, 4, _)), "{err}");
    }

    #[test]
    fn zero_a_readings_vanish_but_heisenberg_part_does_not() {
        let d = MData::new(Mat::identity(2), std_omega(), Mat::zeros(2, 2), None).unwrap();
        let m = build_m(&d).unwrap();
        assert!(m.v_algebra().jacobi_check().passed());
        assert!(curvature_m_formula(&d).unwrap().iter().all(|c| c.tensor.is_zero()));
        let rep = m_curvature_oracle(&d).unwrap();
        assert!(rep.r_pq_zero && rep.r_qx_zero && rep.r_xy_zero);
        // the ω-part alone already curves: B = J² = −¼ id
        assert_eq!(rep.oracle_b.unwrap(), Mat::identity(2).scale(&Rational::ratio(-1, 4)));
        assert!(rep.matched.is_empty() && rep.fitted_form_matches);
    }

    #[test]
    fn generic_a_oracle_has_closed_shape() {
        let a = Mat::from_rows(vec![vec![int(1), int(2)], vec![int(3), int(4)]]).unwrap();
        let d = MData::new(Mat::identity(2), std_omega(), a, None).unwrap();
        let rep = m_curvature_oracle(&d).unwrap();
        assert!(rep.r_pq_zero && rep.r_qx_zero);
        let b = rep.oracle_b.expect("R_px = (Bx)∧q");
        assert!(b.is_symmetric());
        assert!(rep.fitted_form_matches);
    }
}
