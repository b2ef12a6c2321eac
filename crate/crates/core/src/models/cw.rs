//! Cahen–Wallach symmetric pairs `g = q∧E + V` with `[x, y] = −R_S(x, y)`.

use crate::curvature::{curvature_cw, CurvatureTensor};
use crate::error::{Error, Result};
use crate::lie::FiniteLieAlgebra;
use crate::linalg::{Coords, Mat, DEFAULT_TOL};
use crate::pseudo::StandardDecomposition;
use crate::scalar::{Field, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct CahenWallachData {
    /// Symmetric operator on `E = R^{n−2}`.
    pub s: Mat<Rational>,
}

impl CahenWallachData {
    pub fn new(s: Mat<Rational>) -> Result<Self> {
        if !s.is_square() || !s.is_symmetric() {
            return Err(Error::Invalid("S must be symmetric".into()));
        }
        Ok(CahenWallachData { s })
    }
    pub fn n(&self) -> usize {
        self.s.rows() + 2
    }
}

#[derive(Clone, Debug)]
pub struct CahenWallachModel {
    pub data: CahenWallachData,
    pub decomposition: StandardDecomposition<Rational>,
    pub curvature: CurvatureTensor<Rational>,
    /// Basis `q∧e_1, …` of the isotropy, then `p, e_1.., q`.
    pub algebra: FiniteLieAlgebra<Rational>,
}

pub fn build_cahen_wallach(data: &CahenWallachData) -> Result<CahenWallachModel> {
    let n = data.n();
    let m = n - 2;
    let dec = StandardDecomposition::<Rational>::standard(1, n - 1, 1)?;
    let r = curvature_cw(&data.s)?;
    let sp = &dec.space;
    let h: Vec<Mat<Rational>> = (0..m).map(|a| sp.wedge_vv(&dec.q_vec(0), &dec.e_vec(a))).collect::<Result<_>>()?;
    for (a, x) in h.iter().enumerate() {
        for (b, y) in h.iter().enumerate().skip(a + 1) {
            if !x.commutator(y).is_zero() {
                return Err(Error::Invalid(format!("[q∧e{}, q∧e{}] ≠ 0", a + 1, b + 1)));
            }
        }
    }
    let hc = Coords::new(n * n, &h.iter().map(Mat::flatten).collect::<Vec<_>>(), DEFAULT_TOL)?;
    let mut labels: Vec<String> = (1..=m).map(|a| format!("q^e{a}")).collect();
    labels.extend(dec.labels());
    let mut l = FiniteLieAlgebra::new(labels);
    let d = m + n;
    for a in 0..m {
        for x in 0..n {
            let mut v = vec![Rational::zero(); d];
            for (i, c) in h[a].col(x).into_iter().enumerate() {
                v[m + i] = c;
            }
            l.set_bracket(a, m + x, &v)?;
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            let op = r.operator(x, y).neg();
            let c = hc
                .coords(&op.flatten())
                .ok_or_else(|| Error::NotInSpan(format!("R(b{x}, b{y}) outside q∧E")))?;
            let mut v = vec![Rational::zero(); d];
            v[..m].clone_from_slice(&c);
            l.set_bracket(m + x, m + y, &v)?;
        }
    }
    Ok(CahenWallachModel { data: data.clone(), decomposition: dec, curvature: r, algebra: l })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn jacobi_for_several_operators() {
        for s in [Mat::identity(2), Mat::diag(&[int(1), int(2)]), Mat::zeros(2, 2), Mat::diag(&[int(1), int(-1), int(3)])] {
            let m = build_cahen_wallach(&CahenWallachData::new(s).unwrap()).unwrap();
            assert!(m.algebra.jacobi_check().passed());
        }
    }

    #[test]
    fn flat_pair_is_abelian_on_v() {
        let m = build_cahen_wallach(&CahenWallachData::new(Mat::zeros(2, 2)).unwrap()).unwrap();
        for x in 2..6 {
            for y in 2..6 {
                assert!(m.algebra.basis_bracket(x, y).iter().all(Field::is_zero));
            }
        }
        let s = CahenWallachData::new(Mat::from_rows(vec![vec![int(1), int(1)], vec![int(1), int(0)]]).unwrap()).unwrap();
        assert!(build_cahen_wallach(&s).unwrap().algebra.jacobi_check().passed());
    }
}
