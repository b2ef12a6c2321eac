//! `su(k+1, l+1)` with its depth-two grading by `D = diag(1, 0, −1)`, the isotropy
//! representation on `l = RQ + E + RP`, and the Fefferman curvature check.
//!
//! The Hermitian form is `h(Z, Z) = ūv + v̄u + h⁰(z, z)` on `C ⊕ C^{k,l} ⊕ C`, with
//! `h⁰ = diag(−1 (k times), +1 (l times))`. With `m = k + l`:
//! `Q = iE_{N1}`, `E_z` has `z` in column 1 and `−z*h⁰` in row `N`,
//! `P = i·diag(1, −2/m, …, −2/m, 1)`, `D = diag(1, 0, …, 0, −1)`,
//! `Ê_w` has `w` in column `N` and `−w*h⁰` in row 1, and `T = iE_{1N}`.

use crate::curvature::{curvature_cw, is_conformally_flat, koszul_curvature, weyl, CurvatureTensor};
use crate::error::{Error, Result};
use crate::lie::{grade_by, FiniteLieAlgebra, GradedStructure};
use crate::linalg::{unit, vzero, Coords, Mat, DEFAULT_TOL};
use crate::pseudo::PseudoEuclideanSpace;
use crate::scalar::{fmt_rational, int, Field, Gauss, Rational};

#[derive(Clone, Debug)]
pub struct SuGraded {
    pub k: usize,
    pub l: usize,
    pub algebra: FiniteLieAlgebra<Rational>,
    pub grading: GradedStructure<Rational>,
    /// Complex matrix of each basis element.
    pub matrices: Vec<Mat<Gauss>>,
    /// Gram matrix of the Hermitian form.
    pub hermitian: Mat<Gauss>,
    coords: Coords<Rational>,
}

fn gi(re: i64, im: i64) -> Gauss {
    Gauss::new(int(re), int(im))
}

impl SuGraded {
    pub fn m(&self) -> usize {
        self.k + self.l
    }
    fn n_mat(&self) -> usize {
        self.m() + 2
    }
    /// `h⁰` signs.
    pub fn signs(&self) -> Vec<i64> {
        (0..self.m()).map(|a| if a < self.k { -1 } else { 1 }).collect()
    }

    pub fn q(&self) -> usize {
        0
    }
    /// Index of `E_{e_a}` (`imag = false`) or `E_{i e_a}`.
    pub fn e(&self, a: usize, imag: bool) -> usize {
        1 + 2 * a + imag as usize
    }
    pub fn p(&self) -> usize {
        1 + 2 * self.m()
    }
    pub fn d(&self) -> usize {
        self.p() + 1
    }
    pub fn b_range(&self) -> std::ops::Range<usize> {
        self.d() + 1..self.d() + self.m() * self.m()
    }
    pub fn eh(&self, a: usize, imag: bool) -> usize {
        self.b_range().end + 2 * a + imag as usize
    }
    pub fn t(&self) -> usize {
        self.algebra.dim() - 1
    }
    /// Indices of `l = RQ + E + RP`, in basis order.
    pub fn l_indices(&self) -> Vec<usize> {
        (0..=self.p()).collect()
    }

    /// Coefficient vector of `E_z`.
    pub fn e_of(&self, z: &[Gauss]) -> Vec<Rational> {
        let mut v = vzero(self.algebra.dim());
        for (a, za) in z.iter().enumerate() {
            v[self.e(a, false)] = za.re.clone();
            v[self.e(a, true)] = za.im.clone();
        }
        v
    }
    pub fn eh_of(&self, w: &[Gauss]) -> Vec<Rational> {
        let mut v = vzero(self.algebra.dim());
        for (a, wa) in w.iter().enumerate() {
            v[self.eh(a, false)] = wa.re.clone();
            v[self.eh(a, true)] = wa.im.clone();
        }
        v
    }

    pub fn matrix_of(&self, x: &[Rational]) -> Mat<Gauss> {
        let n = self.n_mat();
        x.iter().enumerate().filter(|(_, c)| !c.is_zero()).fold(Mat::zeros(n, n), |acc, (i, c)| {
            acc.add(&self.matrices[i].scale(&Gauss::real(c.clone())))
        })
    }

    pub fn coordinates(&self, x: &Mat<Gauss>) -> Option<Vec<Rational>> {
        self.coords.coords(&realify(x))
    }

    /// `ρ(w, z) = −Im(w*z)` with `w*z = Σ w̄_a h⁰_a z_a`.
    pub fn rho(&self, w: &[Gauss], z: &[Gauss]) -> Rational {
        let s = self.signs();
        let wz = (0..self.m()).fold(Gauss::zero(), |acc, a| acc + w[a].conj() * z[a].clone() * Gauss::from_i64(s[a]));
        -wz.im
    }
}

fn realify(x: &Mat<Gauss>) -> Vec<Rational> {
    x.data().iter().flat_map(|z| [z.re.clone(), z.im.clone()]).collect()
}

pub fn build_su_graded(k: usize, l: usize) -> Result<SuGraded> {
    let m = k + l;
    if m == 0 {
        return Err(Error::Invalid("su(k+1, l+1) needs k + l ≥ 1".into()));
    }
    let n = m + 2;
    let sg: Vec<i64> = (0..m).map(|a| if a < k { -1 } else { 1 }).collect();
    let z = || Mat::<Gauss>::zeros(n, n);
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    let mut x = z();
    x[(n - 1, 0)] = gi(0, 1);
    mats.push(x);
    labels.push("Q".to_string());
    let ez = |a: usize, c: Gauss, hat: bool| {
        let mut x = z();
        let (col, row) = if hat { (n - 1, 0) } else { (0, n - 1) };
        x[(1 + a, col)] = c.clone();
        x[(row, 1 + a)] = -(c.conj() * Gauss::from_i64(sg[a]));
        x
    };
    for a in 0..m {
        mats.push(ez(a, gi(1, 0), false));
        labels.push(format!("E[r{}]", a + 1));
        mats.push(ez(a, gi(0, 1), false));
        labels.push(format!("E[i{}]", a + 1));
    }
    let mut p = z();
    p[(0, 0)] = gi(0, 1);
    p[(n - 1, n - 1)] = gi(0, 1);
    for a in 0..m {
        p[(1 + a, 1 + a)] = Gauss::new(int(0), Rational::ratio(-2, m as i64));
    }
    mats.push(p);
    labels.push("P".into());
    let mut d = z();
    d[(0, 0)] = gi(1, 0);
    d[(n - 1, n - 1)] = gi(-1, 0);
    mats.push(d);
    labels.push("D".into());
    // su(k, l) = h⁰·(anti-Hermitian, trace-free)
    let emb = |f: &Mat<Gauss>| {
        let mut x = z();
        for i in 0..m {
            for j in 0..m {
                x[(1 + i, 1 + j)] = f[(i, j)].clone();
            }
        }
        x
    };
    let h0 = Mat::diag(&sg.iter().map(|&s| Gauss::from_i64(s)).collect::<Vec<_>>());
    for a in 0..m.saturating_sub(1) {
        let mut f = Mat::zeros(m, m);
        f[(a, a)] = gi(0, 1);
        f[(a + 1, a + 1)] = gi(0, -1);
        mats.push(emb(&f));
        labels.push(format!("B[d{}]", a + 1));
    }
    for a in 0..m {
        for b in a + 1..m {
            let mut f = Mat::zeros(m, m);
            f[(a, b)] = gi(1, 0);
            f[(b, a)] = gi(-1, 0);
            mats.push(emb(&h0.mul(&f)));
            labels.push(format!("B[r{}{}]", a + 1, b + 1));
            let mut f = Mat::zeros(m, m);
            f[(a, b)] = gi(0, 1);
            f[(b, a)] = gi(0, 1);
            mats.push(emb(&h0.mul(&f)));
            labels.push(format!("B[i{}{}]", a + 1, b + 1));
        }
    }
    for a in 0..m {
        mats.push(ez(a, gi(1, 0), true));
        labels.push(format!("Eh[r{}]", a + 1));
        mats.push(ez(a, gi(0, 1), true));
        labels.push(format!("Eh[i{}]", a + 1));
    }
    let mut t = z();
    t[(0, n - 1)] = gi(0, 1);
    mats.push(t);
    labels.push("T".into());

    let mut herm = z();
    herm[(0, n - 1)] = Gauss::one();
    herm[(n - 1, 0)] = Gauss::one();
    for a in 0..m {
        herm[(1 + a, 1 + a)] = Gauss::from_i64(sg[a]);
    }
    for (x, lab) in mats.iter().zip(&labels) {
        let xh = x.transpose().map(Gauss::conj);
        if !xh.mul(&herm).add(&herm.mul(x)).is_zero() || !x.trace().is_zero() {
            return Err(Error::Invalid(format!("{lab} is not in su(h)")));
        }
    }
    let coords = Coords::new(2 * n * n, &mats.iter().map(realify).collect::<Vec<_>>(), DEFAULT_TOL)?;
    let dim = mats.len();
    let mut s = SuGraded {
        k,
        l,
        algebra: FiniteLieAlgebra::new(labels),
        grading: GradedStructure { spaces: Default::default(), basis_degrees: None, grading_element: None },
        matrices: mats,
        hermitian: herm,
        coords,
    };
    for i in 0..dim {
        for j in i + 1..dim {
            let c = s.matrices[i].commutator(&s.matrices[j]);
            let v = s
                .coordinates(&c)
                .ok_or_else(|| Error::NotInSpan(format!("[{}, {}]", s.algebra.labels()[i], s.algebra.labels()[j])))?;
            s.algebra.set_bracket(i, j, &v)?;
        }
    }
    // [D, Q] = −2Q, [D, E_z] = −E_z, [D, Ê_w] = Ê_w, [D, T] = 2T
    s.grading = grade_by(&s.algebra, &unit(dim, s.d()))?;
    Ok(s)
}

/// One isotropy formula checked against the realization on `l`.
#[derive(Clone, Debug)]
pub struct IsotropyRow {
    pub name: String,
    pub expected: Mat<Rational>,
    pub actual: Mat<Rational>,
    /// `(row label, column label, expected, actual)` for each disagreeing entry.
    pub diff: Vec<(String, String, String, String)>,
}

impl IsotropyRow {
    pub fn holds(&self) -> bool {
        self.diff.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct FeffermanIsotropy {
    pub rows: Vec<IsotropyRow>,
    pub relations: Vec<RelationCheck>,
}

impl FeffermanIsotropy {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(IsotropyRow::holds) && self.relations.iter().all(|r| r.holds)
    }
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in self.rows.iter().filter(|r| !r.holds()) {
            for (i, j, e, a) in &r.diff {
                out.push(format!("{}: entry ({i}, {j}) expected {e}, realized {a}", r.name));
            }
        }
        for r in self.relations.iter().filter(|r| !r.holds) {
            out.push(format!("{}: expected {}, realized {}", r.name, r.expected, r.actual));
        }
        out
    }
}

/// The isotropy action `j(X) y = [X, y] mod h` on `l = RQ + E + RP`, compared with
///
/// - `j(D): αQ + E_z + μP ↦ 2αQ − E_z`,
/// - `j(C): αQ + E_z + μP ↦ E_{Cz}` for `C ∈ su(k, l)`,
/// - `j(Ê_w): αQ + E_z + μP ↦ αE_{iw} + ρ(w, z)P`,
///
/// and the relations `[T, Q] = −D`, `[T, P] = 0`, `[T, E_z] = Ê_{iz}`.
pub fn fefferman_isotropy(s: &SuGraded) -> Result<FeffermanIsotropy> {
    let li = s.l_indices();
    let nl = li.len();
    let m = s.m();
    let dim = s.algebra.dim();
    let lab = |i: usize| s.algebra.labels()[li[i]].clone();
    let j_of = |x: &[Rational]| -> Result<Mat<Rational>> {
        let cols: Vec<Vec<Rational>> = li
            .iter()
            .map(|&c| Ok(s.algebra.bracket(x, &unit(dim, c))?.into_iter().take(nl).collect()))
            .collect::<Result<_>>()?;
        Ok(Mat::from_cols(nl, &cols))
    };
    let make_row = |name: String, expected: Mat<Rational>, actual: Mat<Rational>| {
        let mut diff = Vec::new();
        for i in 0..nl {
            for j in 0..nl {
                if expected[(i, j)] != actual[(i, j)] {
                    diff.push((lab(i), lab(j), fmt_rational(&expected[(i, j)]), fmt_rational(&actual[(i, j)])));
                }
            }
        }
        IsotropyRow { name, expected, actual, diff }
    };
    let z_basis = |c: usize| -> Vec<Gauss> {
        let mut z = vec![Gauss::zero(); m];
        z[c / 2] = if c.is_multiple_of(2) { Gauss::one() } else { Gauss::i() };
        z
    };
    let l_coords = |v: Vec<Rational>| v.into_iter().take(nl).collect::<Vec<_>>();
    let mut rows = Vec::new();

    let mut exp_d = Mat::zeros(nl, nl);
    exp_d[(0, 0)] = int(2);
    for c in 1..nl - 1 {
        exp_d[(c, c)] = int(-1);
    }
    rows.push(make_row("j(D)".into(), exp_d, j_of(&unit(dim, s.d()))?));

    for b in s.b_range() {
        let mat = &s.matrices[b];
        let cblk = Mat::from_fn(m, m, |i, j| mat[(1 + i, 1 + j)].clone());
        let cols: Vec<Vec<Rational>> = (0..nl)
            .map(|c| {
                if c == 0 || c == nl - 1 {
                    vzero(nl)
                } else {
                    l_coords(s.e_of(&cblk.mul_vec(&z_basis(c - 1))))
                }
            })
            .collect();
        rows.push(make_row(format!("j({})", s.algebra.labels()[b]), Mat::from_cols(nl, &cols), j_of(&unit(dim, b))?));
    }

    for c in 0..2 * m {
        let w = z_basis(c);
        let iw: Vec<Gauss> = w.iter().map(|x| x.clone() * Gauss::i()).collect();
        let mut cols = vec![l_coords(s.e_of(&iw))];
        for zc in 0..2 * m {
            let mut v = vzero(nl);
            v[nl - 1] = s.rho(&w, &z_basis(zc));
            cols.push(v);
        }
        cols.push(vzero(nl));
        let idx = s.eh(c / 2, c % 2 == 1);
        rows.push(make_row(format!("j({})", s.algebra.labels()[idx]), Mat::from_cols(nl, &cols), j_of(&unit(dim, idx))?));
    }

    let t = unit(dim, s.t());
    let mut relations = Vec::new();
    let mut rel = |name: String, expected: Vec<Rational>, actual: Vec<Rational>| {
        relations.push(RelationCheck {
            name,
            holds: expected == actual,
            expected: s.algebra.describe(&expected),
            actual: s.algebra.describe(&actual),
        });
    };
    rel("[T, Q] = −D".into(), unit::<Rational>(dim, s.d()).into_iter().map(|x| -x).collect(), s.algebra.bracket(&t, &unit(dim, s.q()))?);
    rel("[T, P] = 0".into(), vzero(dim), s.algebra.bracket(&t, &unit(dim, s.p()))?);
    for c in 0..2 * m {
        let z = z_basis(c);
        let iz: Vec<Gauss> = z.iter().map(|x| x.clone() * Gauss::i()).collect();
        let name = format!("[T, {}] = Ê_(i·{})", s.algebra.labels()[1 + c], &s.algebra.labels()[1 + c][1..]);
        rel(name, s.eh_of(&iz), s.algebra.bracket(&t, &s.e_of(&z))?);
    }
    Ok(FeffermanIsotropy { rows, relations })
}

#[derive(Clone, Debug)]
pub struct FeffermanFlatness {
    pub m: usize,
    pub curvature: CurvatureTensor<Rational>,
    pub weyl_zero: bool,
    pub scalar_curvature: Rational,
    /// `λ` such that the curvature equals the Cahen–Wallach tensor `R_{λ·id}` under
    /// `p ↦ P`, `e ↦ E`, `q ↦ Q`, if any.
    pub cw_lambda: Option<Rational>,
}

/// Koszul curvature of `l = RQ + E + RP ⊂ su(1, m+1)` with `g(Q, P) = 1` and
/// `g = Re h⁰` on `E`, compared with conformally flat Cahen–Wallach curvature.
pub fn fefferman_flatness_check(m: usize) -> Result<FeffermanFlatness> {
    let s = build_su_graded(0, m)?;
    let li = s.l_indices();
    let nl = li.len();
    let l = s.algebra.restrict(&li)?;
    let g = Mat::from_fn(nl, nl, |i, j| {
        if (i, j) == (0, nl - 1) || (i, j) == (nl - 1, 0) || (i == j && i > 0 && i < nl - 1) {
            int(1)
        } else {
            int(0)
        }
    });
    let r = koszul_curvature(&l, &g)?;
    let weyl_zero = weyl(&r)?.is_zero();
    let scalar_curvature = r.scalar_curvature();
    // CW basis (p, e.., q) → (Q, E.., P) reversed ends
    let perm = Mat::from_fn(nl, nl, |i, j| {
        let target = if j == 0 { nl - 1 } else if j == nl - 1 { 0 } else { j };
        if i == target { int(1) } else { int(0) }
    });
    let unit_cw = curvature_cw(&Mat::<Rational>::identity(2 * m))?;
    let space = PseudoEuclideanSpace::new(g, 1)?;
    let unit_t = unit_cw.transport(space, &perm)?;
    let pp = (nl - 1, nl - 1);
    let cw_lambda = if unit_t.ricci()[pp].is_zero() {
        None
    } else {
        let lam = r.ricci()[pp].clone() / unit_t.ricci()[pp].clone();
        (unit_t.scale(&lam).up_components() == r.up_components()).then_some(lam)
    };
    debug_assert_eq!(is_conformally_flat(&r).ok(), Some(weyl_zero));
    Ok(FeffermanFlatness { m, curvature: r, weyl_zero, scalar_curvature, cw_lambda })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::transitivity_check;

    #[test]
    fn su12_table() {
        let s = build_su_graded(0, 1).unwrap();
        assert_eq!(s.algebra.dim(), 8);
        assert!(s.algebra.jacobi_check().passed());
        let dims: Vec<_> = s.grading.dims().into_iter().collect();
        assert_eq!(dims, vec![(-2, 1), (-1, 2), (0, 2), (1, 2), (2, 1)]);
        assert_eq!(s.grading.basis_degrees.as_deref(), Some(&[-2, -1, -1, 0, 0, 1, 1, 2][..]));
        let t = unit(8, s.t());
        let d = s.algebra.bracket(&t, &unit(8, s.q())).unwrap();
        assert_eq!(s.algebra.describe(&d), s.algebra.describe(&unit::<Rational>(8, s.d()).into_iter().map(|x| -x).collect::<Vec<_>>()));
        assert!(transitivity_check(&s.algebra, &s.grading).unwrap().transitive);
    }

    #[test]
    fn su22_dims_and_killing() {
        let s = build_su_graded(1, 1).unwrap();
        assert_eq!(s.algebra.dim(), 15);
        assert!(s.algebra.jacobi_check().passed());
        let dims: Vec<usize> = s.grading.dims().into_values().collect();
        assert_eq!(dims, vec![1, 4, 5, 4, 1]);
        // su(2,2): compact part s(u(2)+u(2)) has dimension 7
        assert_eq!(s.algebra.killing_form().inertia().unwrap(), (7, 0, 8));
    }

    #[test]
    fn isotropy_rows_that_hold_and_those_that_do_not() {
        let s = build_su_graded(0, 2).unwrap();
        let f = fefferman_isotropy(&s).unwrap();
        for r in &f.rows {
            assert_eq!(r.holds(), r.name != "j(D)", "{}: {:?}", r.name, r.diff);
        }
        // j(D) disagrees only on Q: the realization gives −2, not 2
        let jd = &f.rows[0];
        assert_eq!(jd.diff, vec![("Q".into(), "Q".into(), "2/1".into(), "-2/1".into())]);
        let holds: Vec<bool> = f.relations.iter().map(|r| r.holds).collect();
        assert_eq!(&holds[..2], &[true, true]);
        assert!(holds[2..].iter().all(|h| !h));
    }

    #[test]
    fn printed_t_e_relation_contradicts_jacobi() {
        // [T,E_z] = Ê_{iz}, [Ê_w,Q] = E_{iw}, [T,Q] = −D, [D,Q] = −2Q, [D,E] = −E
        // force Jac(T, Q, E_z) = −2E_z ≠ 0; the realization instead has [T,E_z] = −Ê_{iz}.
        let s = build_su_graded(0, 1).unwrap();
        let dim = s.algebra.dim();
        let z = vec![Gauss::one()];
        let iz = vec![Gauss::i()];
        let t = unit(dim, s.t());
        assert_eq!(s.algebra.bracket(&t, &s.e_of(&z)).unwrap(), s.eh_of(&iz).into_iter().map(|x| -x).collect::<Vec<_>>());
        let eh_iz = s.eh_of(&iz);
        let q = unit(dim, s.q());
        let ez = s.e_of(&z);
        let d_q = s.algebra.bracket(&unit(dim, s.d()), &q).unwrap();
        // with the printed sign: [T,[Q,E]] + [Q,[E,T]] + [E,[T,Q]]
        let a = s.algebra.bracket(&t, &s.algebra.bracket(&q, &ez).unwrap()).unwrap();
        let b = s.algebra.bracket(&q, &eh_iz.iter().map(|x| -x.clone()).collect::<Vec<_>>()).unwrap();
        let c = s.algebra.bracket(&ez, &unit::<Rational>(dim, s.d()).into_iter().map(|x| -x).collect::<Vec<_>>()).unwrap();
        let jac: Vec<Rational> = (0..dim).map(|i| a[i].clone() + b[i].clone() + c[i].clone()).collect();
        assert_eq!(jac, ez.iter().map(|x| x.clone() * int(-2)).collect::<Vec<_>>());
        assert_eq!(d_q, q.iter().map(|x| x.clone() * int(-2)).collect::<Vec<_>>());
    }

    #[test]
    fn fefferman_spaces_are_weyl_flat() {
        for m in [1, 2] {
            let f = fefferman_flatness_check(m).unwrap();
            assert!(f.weyl_zero);
            assert!(f.scalar_curvature.is_zero());
            assert!(f.cw_lambda.is_some(), "m = {m}");
        }
    }
}
