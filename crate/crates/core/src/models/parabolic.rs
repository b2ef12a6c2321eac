//! Lower and upper bounds `g⁰_min ⊆ g⁰ ⊆ g⁰_max` for isotropy algebras with
//! non-trivial first prolongation, attached to a standard decomposition.

use crate::error::{Error, Result};
use crate::lie::{as_t_xi, first_prolongation, LinearLieSubalgebra, ProlongationSpace};
use crate::linalg::{Coords, Mat, DEFAULT_TOL};
use crate::pseudo::StandardDecomposition;
use crate::scalar::RealField;

#[derive(Clone, Debug)]
pub struct ParabolicBounds<F> {
    pub decomposition: StandardDecomposition<F>,
    pub min: LinearLieSubalgebra<F>,
    pub max: LinearLieSubalgebra<F>,
}

/// `I = k·id − (1/ν) Σ p_i∧q_i`, acting by `k−1, k, k+1` on `P, E, Q`.
pub fn grading_endomorphism<F: RealField>(dec: &StandardDecomposition<F>) -> Result<Mat<F>> {
    let k = dec.k();
    let inv_nu = F::from_i64(dec.nu).inv().expect("ν ≠ 0");
    let mut m = Mat::identity(dec.n()).scale(&F::from_i64(k as i64));
    for a in 0..k {
        let w = dec.space.wedge_vv(&dec.p_vec(a), &dec.q_vec(a))?;
        m = m.sub(&w.scale(&inv_nu));
    }
    Ok(m)
}

pub fn build_parabolic_bounds<F: RealField>(dec: &StandardDecomposition<F>) -> Result<ParabolicBounds<F>> {
    let k = dec.k();
    if k == 0 {
        return Err(Error::Invalid("the decomposition needs dim P ≥ 1".into()));
    }
    let sp = &dec.space;
    let mut min = vec![grading_endomorphism(dec)?];
    // (P∧Q)⁰ ≅ sl(P): p_i∧q_j for i ≠ j and differences of the diagonal ones
    for i in 0..k {
        for j in 0..k {
            if i != j {
                min.push(sp.wedge_vv(&dec.p_vec(i), &dec.q_vec(j))?);
            }
        }
    }
    for i in 0..k.saturating_sub(1) {
        let a = sp.wedge_vv(&dec.p_vec(i), &dec.q_vec(i))?;
        let b = sp.wedge_vv(&dec.p_vec(i + 1), &dec.q_vec(i + 1))?;
        min.push(a.sub(&b));
    }
    for i in 0..k {
        for j in i + 1..k {
            min.push(sp.wedge_vv(&dec.p_vec(i), &dec.p_vec(j))?);
        }
        for a in 0..dec.e.len() {
            min.push(sp.wedge_vv(&dec.p_vec(i), &dec.e_vec(a))?);
        }
    }
    let mut max = min.clone();
    for a in 0..dec.e.len() {
        for b in a + 1..dec.e.len() {
            max.push(sp.wedge_vv(&dec.e_vec(a), &dec.e_vec(b))?);
        }
    }
    Ok(ParabolicBounds {
        decomposition: dec.clone(),
        min: LinearLieSubalgebra::new(sp.clone(), min)?,
        max: LinearLieSubalgebra::new(sp.clone(), max)?,
    })
}

/// Whether a prolongation space is exactly `{T^ξ : ξ ∈ g∘P}`.
pub fn is_t_of_gp<F: RealField>(dec: &StandardDecomposition<F>, pr: &ProlongationSpace<F>) -> bool {
    let k = dec.k();
    if pr.dim() != k {
        return false;
    }
    let gp: Vec<Vec<F>> = (0..k).map(|a| dec.space.lower(&dec.p_vec(a)).expect("length n")).collect();
    let Ok(span) = Coords::new(dec.n(), &gp, DEFAULT_TOL) else { return false };
    pr.basis.iter().all(|s| as_t_xi(&dec.space, s).is_some_and(|xi| span.contains(&xi)))
}

impl<F: RealField> ParabolicBounds<F> {
    pub fn min_prolongation(&self) -> ProlongationSpace<F> {
        first_prolongation(&self.min)
    }
    pub fn max_prolongation(&self) -> ProlongationSpace<F> {
        first_prolongation(&self.max)
    }
    pub fn contains_min(&self, g: &LinearLieSubalgebra<F>) -> bool {
        self.min.basis.iter().all(|b| g.contains(b))
    }
    pub fn within_max(&self, g: &LinearLieSubalgebra<F>) -> bool {
        g.basis.iter().all(|b| self.max.contains(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn lorentz_bounds() {
        let dec = StandardDecomposition::<Rational>::standard(1, 3, 1).unwrap();
        let b = build_parabolic_bounds(&dec).unwrap();
        assert_eq!((b.min.dim(), b.max.dim()), (3, 4));
        assert!(is_t_of_gp(&dec, &b.min_prolongation()));
        assert!(is_t_of_gp(&dec, &b.max_prolongation()));
    }

    #[test]
    fn split_bounds_and_nu_two() {
        let dec = StandardDecomposition::<Rational>::standard(2, 4, 1).unwrap();
        let b = build_parabolic_bounds(&dec).unwrap();
        assert_eq!((b.min.dim(), b.max.dim()), (9, 10));
        assert!(is_t_of_gp(&dec, &b.max_prolongation()));
        let dec2 = StandardDecomposition::<Rational>::standard(1, 2, 2).unwrap();
        let b2 = build_parabolic_bounds(&dec2).unwrap();
        assert!(is_t_of_gp(&dec2, &b2.min_prolongation()));
    }
}
