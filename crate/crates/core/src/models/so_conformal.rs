//! The flat model `V + co(V) + V*` graded in degrees −1, 0, 1.

use crate::error::{Error, Result};
use crate::lie::{FiniteLieAlgebra, GradedStructure};
use crate::linalg::{unit, vzero, Coords, Mat, DEFAULT_TOL};
use crate::pseudo::{PseudoEuclideanSpace, StandardDecomposition};
use crate::scalar::{int, Field, Rational};

#[derive(Clone, Debug)]
pub struct SoConformal {
    pub algebra: FiniteLieAlgebra<Rational>,
    pub grading: GradedStructure<Rational>,
    pub space: PseudoEuclideanSpace<Rational>,
    /// Present when `k ≤ l` (basis `p.., e.., q..` with ν = 1).
    pub decomposition: Option<StandardDecomposition<Rational>>,
    /// `id` followed by `b_i ∧ b_j` for `i < j`.
    pub co_basis: Vec<Mat<Rational>>,
    co_coords: Coords<Rational>,
}

/// An element `(X, A, ξ)` of `V ⊕ co(V) ⊕ V*`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatElement {
    pub v: Vec<Rational>,
    pub co: Mat<Rational>,
    pub cov: Vec<Rational>,
}

impl SoConformal {
    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn v_index(&self, i: usize) -> usize {
        i
    }
    pub fn co_index(&self, r: usize) -> usize {
        self.n() + r
    }
    /// Index of `T^{g∘b_i}`.
    pub fn t_index(&self, i: usize) -> usize {
        self.n() + self.co_basis.len() + i
    }

    pub fn realize(&self, x: &[Rational]) -> FlatElement {
        let n = self.n();
        let c = self.co_basis.len();
        let v = x[..n].to_vec();
        let co = (0..c).fold(Mat::zeros(n, n), |acc, r| {
            if x[n + r].is_zero() {
                acc
            } else {
                acc.add(&self.co_basis[r].scale(&x[n + r]))
            }
        });
        // coefficient c_b multiplies g∘b_b
        let cov = self.space.lower(&x[n + c..]).expect("length n");
        FlatElement { v, co, cov }
    }

    pub fn coordinates(&self, e: &FlatElement) -> Result<Vec<Rational>> {
        let mut out = e.v.clone();
        let co = self
            .co_coords
            .coords(&e.co.flatten())
            .ok_or_else(|| Error::NotConformal("degree-0 part outside co(V)".into()))?;
        out.extend(co);
        out.extend(self.space.raise(&e.cov)?);
        Ok(out)
    }

    /// Bracket computed from the realization (used to fill the table and as an oracle).
    pub fn realized_bracket(&self, a: &FlatElement, b: &FlatElement) -> Result<FlatElement> {
        let sp = &self.space;
        let v = crate::linalg::vsub(&a.co.mul_vec(&b.v), &b.co.mul_vec(&a.v));
        let t1 = sp.t_xi_action(&a.cov, &b.v)?.matrix();
        let t2 = sp.t_xi_action(&b.cov, &a.v)?.matrix();
        let co = a.co.commutator(&b.co).add(&t1).sub(&t2);
        // A·ξ = −ξ∘A
        let act = |m: &Mat<Rational>, xi: &[Rational]| m.transpose().mul_vec(xi).into_iter().map(|x| -x).collect::<Vec<_>>();
        let cov = crate::linalg::vsub(&act(&a.co, &b.cov), &act(&b.co, &a.cov));
        Ok(FlatElement { v, co, cov })
    }

    /// `−id`, whose adjoint action is the grading.
    pub fn grading_element(&self) -> Vec<Rational> {
        let mut x = vzero(self.algebra.dim());
        x[self.co_index(0)] = int(-1);
        x
    }
}

pub fn build_so_conformal(k: usize, l: usize) -> Result<SoConformal> {
    if k + l < 2 {
        return Err(Error::Invalid(format!("need k + l ≥ 2, got ({k}, {l})")));
    }
    let n = k + l;
    let (space, decomposition, vlabels) = if k <= l {
        let d = StandardDecomposition::standard(k, l, 1)?;
        let labels = d.labels();
        (d.space.clone(), Some(d), labels)
    } else {
        let diag: Vec<Rational> = (0..n).map(|i| if i < k { int(-1) } else { int(1) }).collect();
        let sp = PseudoEuclideanSpace::new(Mat::diag(&diag), 1)?;
        (sp, None, (1..=n).map(|i| format!("b{i}")).collect())
    };
    let mut co_basis = vec![Mat::identity(n)];
    let mut labels = vlabels.clone();
    labels.push("id".into());
    for i in 0..n {
        for j in i + 1..n {
            co_basis.push(space.wedge_vv(&unit(n, i), &unit(n, j))?);
            labels.push(format!("{}^{}", vlabels[i], vlabels[j]));
        }
    }
    for v in &vlabels {
        labels.push(format!("T[{v}]"));
    }
    let flat: Vec<Vec<Rational>> = co_basis.iter().map(Mat::flatten).collect();
    let co_coords = Coords::new(n * n, &flat, DEFAULT_TOL)?;
    let mut m = SoConformal {
        algebra: FiniteLieAlgebra::new(labels),
        grading: GradedStructure { spaces: Default::default(), basis_degrees: None, grading_element: None },
        space,
        decomposition,
        co_basis,
        co_coords,
    };
    let d = m.algebra.dim();
    let elems: Vec<FlatElement> = (0..d).map(|i| m.realize(&unit(d, i))).collect();
    for i in 0..d {
        for j in i + 1..d {
            let b = m.realized_bracket(&elems[i], &elems[j])?;
            let c = m.coordinates(&b)?;
            m.algebra.set_bracket(i, j, &c)?;
        }
    }
    let c = m.co_basis.len();
    let degrees: Vec<i64> = (0..d).map(|i| if i < n { -1 } else if i < n + c { 0 } else { 1 }).collect();
    m.grading = GradedStructure::from_basis_degrees(&m.algebra, degrees, Some(m.grading_element()))?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::grade_by;

    #[test]
    fn dims_and_jacobi() {
        let m = build_so_conformal(1, 3).unwrap();
        assert_eq!(m.algebra.dim(), 15);
        assert!(m.algebra.jacobi_check().passed());
        let dims: Vec<_> = m.grading.dims().into_iter().collect();
        assert_eq!(dims, vec![(-1, 4), (0, 7), (1, 4)]);
        // so(2,4): compact part so(2)+so(4) has dimension 7
        assert_eq!(m.algebra.killing_form().inertia().unwrap(), (7, 0, 8));
    }

    #[test]
    fn t_gp_on_q_is_minus_dbar() {
        let m = build_so_conformal(1, 3).unwrap();
        let dec = m.decomposition.as_ref().unwrap();
        let d = m.algebra.dim();
        let t = unit(d, m.t_index(dec.p[0]));
        let q = unit(d, m.v_index(dec.q[0]));
        let br = m.realize(&m.algebra.bracket(&t, &q).unwrap());
        let dbar = Mat::identity(4).neg().add(&m.space.wedge_vv(&dec.p_vec(0), &dec.q_vec(0)).unwrap());
        assert_eq!(br.co, dbar.neg());
        assert!(br.v.iter().all(Field::is_zero) && br.cov.iter().all(Field::is_zero));
    }

    #[test]
    fn grade_by_minus_id() {
        let m = build_so_conformal(2, 2).unwrap();
        let g = grade_by(&m.algebra, &m.grading_element()).unwrap();
        assert_eq!(g.dims(), m.grading.dims());
        let e = build_so_conformal(3, 1).unwrap();
        assert!(e.decomposition.is_none());
        assert!(e.algebra.jacobi_check().passed());
    }
}
