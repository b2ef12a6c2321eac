//! Four-dimensional Lorentzian spinors.
//!
//! `S = C²` with basis `e₊, e₋` and `ω(e₊, e₋) = 1`; `V` is the real space of
//! Hermitian 2×2 matrices with `g(X, X) = det X`.  A spinor `s = u e₊ + v e₋`
//! is written in the coordinates `(u, v)`, so the dual of `e₋` under
//! `s ↦ ω(s, ·)` is `−u`.  Binary quartics `φ(u, v) = Σ binom(4,i) c_i u^i v^{4−i}`
//! stand for Weyl tensors through the Penrose form
//! `W = 2 Re[φ_{ABCD} ω_{A'B'} ω_{C'D'}]`.

use num::complex::Complex64;
use rand::Rng;

use crate::curvature::{is_weyl_member, CurvatureTensor};
use crate::error::{Error, Result};
use crate::linalg::{Mat, DEFAULT_TOL};
use crate::pseudo::{ConformalElement, PseudoEuclideanSpace};
use crate::scalar::{Cx, Field, Gauss, RealField, C64};

pub type Mat2<R> = Mat<Cx<R>>;

fn cx<R: RealField>(re: i64, im: i64) -> Cx<R> {
    Cx::new(R::from_i64(re), R::from_i64(im))
}

fn mat2<R: RealField>(a: Cx<R>, b: Cx<R>, c: Cx<R>, d: Cx<R>) -> Mat2<R> {
    Mat::from_rows(vec![vec![a, b], vec![c, d]]).expect("2×2")
}

/// `E₀ = diag(1, −1)`.
pub fn e0<R: RealField>() -> Mat2<R> {
    mat2(cx(1, 0), cx(0, 0), cx(0, 0), cx(-1, 0))
}

/// `E₊ = E₁₂`, raising `e₋` to `e₊`.
pub fn e_plus<R: RealField>() -> Mat2<R> {
    mat2(cx(0, 0), cx(1, 0), cx(0, 0), cx(0, 0))
}

/// `E₋ = E₂₁`.
pub fn e_minus<R: RealField>() -> Mat2<R> {
    mat2(cx(0, 0), cx(0, 0), cx(1, 0), cx(0, 0))
}

/// Complex basis `E₀, E₊, E₋` of `sl₂(C)`.
pub fn sl2_basis<R: RealField>() -> [Mat2<R>; 3] {
    [e0(), e_plus(), e_minus()]
}

/// Real basis `E₀, iE₀, E₊, iE₊, E₋, iE₋` with labels.
pub fn sl2_real_basis<R: RealField>() -> Vec<(&'static str, Mat2<R>)> {
    let i = Mat::identity(2).scale(&Cx::i());
    vec![
        ("E0", e0()),
        ("iE0", i.mul(&e0())),
        ("E+", e_plus()),
        ("iE+", i.mul(&e_plus())),
        ("E-", e_minus()),
        ("iE-", i.mul(&e_minus())),
    ]
}

/// Coordinates of a trace-free matrix in `E₀, E₊, E₋`.
pub fn sl2_coords<R: RealField>(c: &Mat2<R>) -> [Cx<R>; 3] {
    [c[(0, 0)].clone(), c[(0, 1)].clone(), c[(1, 0)].clone()]
}

pub fn sl2_from_coords<R: RealField>(x: &[Cx<R>]) -> Mat2<R> {
    mat2(x[0].clone(), x[1].clone(), x[2].clone(), -x[0].clone())
}

fn adjoint<R: RealField>(m: &Mat2<R>) -> Mat2<R> {
    Mat::from_fn(2, 2, |i, j| m[(j, i)].conj())
}

fn det2<R: RealField>(m: &Mat2<R>) -> Cx<R> {
    m[(0, 0)].clone() * m[(1, 1)].clone() - m[(0, 1)].clone() * m[(1, 0)].clone()
}

fn binom4(i: usize) -> i64 {
    [1, 4, 6, 4, 1][i]
}

// ---------------------------------------------------------------- frame

/// The frame `p = √(2ν) E₁₁, e₁, e_i, q = √(2ν) E₂₂` of `V`, with
/// `g(p, q) = ν`, `g(e₁, e₁) = g(e_i, e_i) = −1` and `X_z = z E₁₂ + z̄ E₂₁`.
#[derive(Clone, Debug)]
pub struct SpinorFrame<R> {
    nu: i64,
    c: R,
    basis: Vec<Mat2<R>>,
    space: PseudoEuclideanSpace<R>,
}

#[derive(Clone, Debug)]
pub struct TableRow<R> {
    pub name: &'static str,
    pub expected: Mat<R>,
    pub actual: Mat<R>,
    pub holds: bool,
}

impl<R: RealField> SpinorFrame<R> {
    pub fn new(nu: i64) -> Result<Self> {
        if nu <= 0 {
            return Err(Error::Invalid(format!("ν = {nu} must be positive")));
        }
        let c = R::from_i64(2 * nu)
            .sqrt_exact()
            .ok_or_else(|| Error::Invalid(format!("√{} is not in the scalar field", 2 * nu)))?;
        let z = Cx::<R>::zero();
        let cc = Cx::real(c.clone());
        let basis = vec![
            mat2(cc.clone(), z.clone(), z.clone(), z.clone()),
            mat2(z.clone(), cx(1, 0), cx(1, 0), z.clone()),
            mat2(z.clone(), cx(0, 1), cx(0, -1), z.clone()),
            mat2(z.clone(), z.clone(), z, cc),
        ];
        let n = R::from_i64(nu);
        let m1 = R::from_i64(-1);
        let o = R::zero();
        let gram = Mat::from_rows(vec![
            vec![o.clone(), o.clone(), o.clone(), n.clone()],
            vec![o.clone(), m1.clone(), o.clone(), o.clone()],
            vec![o.clone(), o.clone(), m1, o.clone()],
            vec![n, o.clone(), o.clone(), o],
        ])?;
        let space = PseudoEuclideanSpace::new(gram, 1)?;
        Ok(SpinorFrame { nu, c, basis, space })
    }

    pub fn nu(&self) -> i64 {
        self.nu
    }
    pub fn space(&self) -> &PseudoEuclideanSpace<R> {
        &self.space
    }
    pub fn labels() -> [&'static str; 4] {
        ["p", "e1", "ei", "q"]
    }
    pub fn basis(&self) -> &[Mat2<R>] {
        &self.basis
    }

    pub fn hermitian(&self, x: &[R]) -> Result<Mat2<R>> {
        if x.len() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: x.len() });
        }
        let mut m = Mat::zeros(2, 2);
        for (b, xi) in self.basis.iter().zip(x) {
            m = m.add(&b.map(|z| z.scale(xi)));
        }
        Ok(m)
    }

    /// Frame coordinates of a Hermitian matrix.
    pub fn coords(&self, m: &Mat2<R>) -> Result<Vec<R>> {
        let defect = m.sub(&adjoint(m));
        let scale = 1.0f64.max(m.max_abs());
        if !defect.is_negligible(1e-9 * scale) {
            return Err(Error::Invalid("matrix is not Hermitian".into()));
        }
        let ci = self.c.inv().expect("c ≠ 0");
        Ok(vec![
            m[(0, 0)].re.clone() * ci.clone(),
            m[(0, 1)].re.clone(),
            m[(0, 1)].im.clone(),
            m[(1, 1)].re.clone() * ci,
        ])
    }

    /// `X ↦ CX + XC*` in the frame; column `k` is the image of basis vector `k`.
    pub fn phi_matrix(&self, c: &Mat2<R>) -> Result<Mat<R>> {
        if c.rows() != 2 || c.cols() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: c.rows() });
        }
        if !c.trace().is_negligible(DEFAULT_TOL) {
            return Err(Error::Invalid(format!("tr C = {} ≠ 0", c.trace())));
        }
        let cs = adjoint(c);
        let cols: Vec<Vec<R>> = self
            .basis
            .iter()
            .map(|b| self.coords(&c.mul(b).add(&b.mul(&cs))))
            .collect::<Result<_>>()?;
        Ok(Mat::from_cols(4, &cols))
    }

    /// The isomorphism `sl₂(C) → so(V)`, derivative of `X ↦ AXA*`.
    pub fn phi_iso(&self, c: &Mat2<R>) -> Result<ConformalElement<R>> {
        let m = self.phi_matrix(c)?;
        let el = ConformalElement::decompose(&self.space, &m)?;
        if !el.scalar.is_negligible(DEFAULT_TOL) {
            return Err(Error::NotConformal("image has a trace part".into()));
        }
        Ok(el)
    }

    fn check_unimodular(a: &Mat2<R>) -> Result<()> {
        if a.rows() != 2 || a.cols() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: a.rows() });
        }
        let d = det2(a) - Cx::one();
        if !d.is_negligible(1e-9) {
            return Err(Error::Invalid(format!("det A − 1 = {d}")));
        }
        Ok(())
    }

    /// `X ↦ AXA*` for unimodular `A`.
    pub fn group_action(&self, a: &Mat2<R>, x: &[R]) -> Result<Vec<R>> {
        Self::check_unimodular(a)?;
        self.coords(&a.mul(&self.hermitian(x)?).mul(&adjoint(a)))
    }

    /// Matrix of `X ↦ AXA*` in the frame.
    pub fn group_matrix(&self, a: &Mat2<R>) -> Result<Mat<R>> {
        Self::check_unimodular(a)?;
        let cols: Vec<Vec<R>> =
            self.basis.iter().map(|b| self.coords(&a.mul(b).mul(&adjoint(a)))).collect::<Result<_>>()?;
        Ok(Mat::from_cols(4, &cols))
    }

    fn wedge(&self, x: usize, y: usize) -> Mat<R> {
        let u = |i: usize| (0..4).map(|k| if k == i { R::one() } else { R::zero() }).collect::<Vec<_>>();
        self.space.wedge_vv(&u(x), &u(y)).expect("length 4")
    }

    /// The printed correspondence, row by row:
    /// `E₀ → 2p∧q`, `iE₀ → 2e₁∧e_i`, `E₊ → √2 e₁∧p`, `iE₊ → −√2 e_i∧p`,
    /// `E₋ → √2 e₁∧q`, `iE₋ → −√2 e_i∧q`.
    pub fn table_rows(&self) -> Result<Vec<TableRow<R>>> {
        let s2 = R::from_i64(2).sqrt_exact().ok_or_else(|| Error::Invalid("√2 is not in the scalar field".into()))?;
        let two = R::from_i64(2);
        let (p, e1, ei, q) = (0, 1, 2, 3);
        let expected = [
            self.wedge(p, q).scale(&two),
            self.wedge(e1, ei).scale(&two),
            self.wedge(e1, p).scale(&s2),
            self.wedge(ei, p).scale(&-s2.clone()),
            self.wedge(e1, q).scale(&s2),
            self.wedge(ei, q).scale(&-s2),
        ];
        sl2_real_basis::<R>()
            .into_iter()
            .zip(expected)
            .map(|((name, c), expected)| {
                let actual = self.phi_matrix(&c)?;
                let holds = actual.sub(&expected).is_negligible(DEFAULT_TOL);
                Ok(TableRow { name, expected, actual, holds })
            })
            .collect()
    }

    /// `[φ(A), φ(B)] − φ([A, B])` over the fifteen pairs of the real basis.
    pub fn bracket_defects(&self) -> Result<Vec<(String, Mat<R>)>> {
        let b = sl2_real_basis::<R>();
        let mut out = Vec::new();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                let lhs = self.phi_matrix(&b[i].1.commutator(&b[j].1))?;
                let rhs = self.phi_matrix(&b[i].1)?.commutator(&self.phi_matrix(&b[j].1)?);
                out.push((format!("[{}, {}]", b[i].0, b[j].0), lhs.sub(&rhs)));
            }
        }
        Ok(out)
    }

    /// `Y_ab^{AB} = X_a^{AA'} X_b^{BB'} ω_{A'B'}`.
    fn soldering(&self) -> Vec<Vec<[[Cx<R>; 2]; 2]>> {
        let x = &self.basis;
        (0..4)
            .map(|a| {
                (0..4)
                    .map(|b| {
                        let y = |i: usize, j: usize| {
                            x[a][(i, 0)].clone() * x[b][(j, 1)].clone() - x[a][(i, 1)].clone() * x[b][(j, 0)].clone()
                        };
                        [[y(0, 0), y(0, 1)], [y(1, 0), y(1, 1)]]
                    })
                    .collect()
            })
            .collect()
    }

    /// `W_φ = φ ⊗ ω̄² + ω² ⊗ φ̄` as a real tensor on `V`.
    pub fn weyl_from_quartic(&self, phi: &QuarticForm<R>) -> Result<CurvatureTensor<R>> {
        let y = self.soldering();
        let spinor = |a: usize, b: usize, c: usize, d: usize| phi.c[4 - (a + b + c + d)].clone();
        let two = R::from_i64(2);
        let mut low = vec![R::zero(); 256];
        for (i, slot) in low.iter_mut().enumerate() {
            let (a, b, c, d) = (i >> 6, (i >> 4) & 3, (i >> 2) & 3, i & 3);
            let mut s = Cx::<R>::zero();
            for aa in 0..2 {
                for bb in 0..2 {
                    let left = &y[a][b][aa][bb];
                    if left.is_zero() {
                        continue;
                    }
                    for cc in 0..2 {
                        for dd in 0..2 {
                            let right = &y[c][d][cc][dd];
                            if right.is_zero() {
                                continue;
                            }
                            s = s + spinor(aa, bb, cc, dd) * left.clone() * right.clone();
                        }
                    }
                }
            }
            *slot = s.re * two.clone();
        }
        CurvatureTensor::from_low(self.space.clone(), low)
    }

    /// Inverse of [`weyl_from_quartic`](Self::weyl_from_quartic) on Weyl-type tensors.
    pub fn quartic_from_weyl(&self, w: &CurvatureTensor<R>) -> Result<QuarticForm<R>> {
        if w.n() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: w.n() });
        }
        let tol = 1e-9 * 1.0f64.max(w.max_abs());
        let member = if R::EXACT { is_weyl_member(w) } else { !w.is_raw() && w.ricci().is_negligible(tol) };
        if !member {
            return Err(Error::NotWeyl("tensor fails the curvature symmetries or is not trace-free".into()));
        }
        // the map R¹⁰ → R²⁵⁶ is injective; solve the normal equations and verify
        let cols: Vec<Vec<R>> = (0..10)
            .map(|k| {
                let mut c = vec![Cx::<R>::zero(); 5];
                c[k / 2] = if k % 2 == 0 { Cx::one() } else { Cx::i() };
                self.weyl_from_quartic(&QuarticForm::from_vec(c)).map(|t| t.low_components().to_vec())
            })
            .collect::<Result<_>>()?;
        let m = Mat::from_cols(256, &cols);
        let mt = m.transpose();
        let x = mt
            .mul(&m)
            .solve(&mt.mul_vec(w.low_components()), DEFAULT_TOL)
            .ok_or_else(|| Error::Singular("quartic extraction".into()))?;
        let phi = QuarticForm::from_vec((0..5).map(|k| Cx::new(x[2 * k].clone(), x[2 * k + 1].clone())).collect());
        let back = self.weyl_from_quartic(&phi)?;
        if !back.sub(w).is_negligible(tol) {
            return Err(Error::NotWeyl("tensor is not in the image of the quartics".into()));
        }
        Ok(phi)
    }

    /// Transport a Weyl tensor given in a null frame `p, e₁, e₂, q` with
    /// `g(p,q) = a`, `g(e_i,e_j) = b δ_ij` into this frame along
    /// `p ↦ p, e_i ↦ e_i, q ↦ −a/(bν) q`, which rescales the metric by `−1/b`.
    /// The Weyl `(1,3)` tensor is invariant under such rescaling.
    pub fn from_null_frame(&self, w: &CurvatureTensor<R>) -> Result<CurvatureTensor<R>> {
        if w.n() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: w.n() });
        }
        let g = w.space().gram();
        let (a, b) = (g[(0, 3)].clone(), g[(1, 1)].clone());
        let shape = Mat::from_fn(4, 4, |i, j| match (i, j) {
            (0, 3) | (3, 0) => a.clone(),
            (1, 1) | (2, 2) => b.clone(),
            _ => R::zero(),
        });
        if a.is_zero() || b.is_zero() || !shape.sub(g).is_zero() {
            return Err(Error::Invalid(
                "metric is not of null-frame form [[0,0,0,a],[0,b,0,0],[0,0,b,0],[a,0,0,0]]".into(),
            ));
        }
        let t = -(a * (b.clone() * R::from_i64(self.nu)).inv().expect("b ≠ 0"));
        let l = Mat::diag(&[R::one(), R::one(), R::one(), t]);
        let c = -b.inv().expect("b ≠ 0");
        let pulled = l.transpose().mul(self.space.gram()).mul(&l);
        debug_assert!(pulled.sub(&g.scale(&c)).is_zero());
        w.transport(self.space.clone(), &l)
    }

    /// Cahen–Wallach metric on `p, e₁, e₂, q` (`g(p,q) = 1`, `E` positive); the
    /// map is `q ↦ −q/ν`, an anti-isometry.
    pub fn from_cahen_wallach(&self, w: &CurvatureTensor<R>) -> Result<CurvatureTensor<R>> {
        let g = w.space().gram();
        if !((g[(0, 3)].clone() - R::one()).is_zero() && (g[(1, 1)].clone() - R::one()).is_zero()) {
            return Err(Error::Invalid("source metric is not the Cahen–Wallach metric on p, e1, e2, q".into()));
        }
        self.from_null_frame(w)
    }

    /// Central difference of `t ↦ exp(tC) X exp(tC)*` at `t = 0` minus `φ(C)X`.
    pub fn finite_difference_defect(&self, c: &Mat2<R>, x: &[R], h: f64) -> Result<f64> {
        let fl = SpinorFrame::<f64>::new(self.nu)?;
        let cf = c.map(Cx::to_c64);
        let xf: Vec<f64> = x.iter().map(RealField::to_f64).collect();
        let plus = fl.group_action(&expm2(&cf.scale(&Cx::real(h))), &xf)?;
        let minus = fl.group_action(&expm2(&cf.scale(&Cx::real(-h))), &xf)?;
        let exact = fl.phi_matrix(&cf)?.mul_vec(&xf);
        Ok((0..4).map(|k| ((plus[k] - minus[k]) / (2.0 * h) - exact[k]).abs()).fold(0.0, f64::max))
    }
}

fn expm2(m: &Mat2<f64>) -> Mat2<f64> {
    let mut out = Mat::identity(2);
    let mut term = Mat::identity(2);
    for k in 1..30 {
        term = term.mul(m).scale(&Cx::real(1.0 / k as f64));
        out = out.add(&term);
    }
    // renormalise the determinant against truncation error
    let d = det2(&out).to_num().sqrt();
    out.scale(&C64::from_num(d.inv()))
}

// ---------------------------------------------------------------- quartics

/// `φ(u, v) = Σ binom(4,i) c_i u^i v^{4−i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuarticForm<R> {
    pub c: Vec<Cx<R>>,
}

/// Coefficients of `u^i v^{deg−i}`, indexed by `i`.
fn hom_mul<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let mut out = vec![F::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

impl<R: RealField> QuarticForm<R> {
    pub fn from_vec(c: Vec<Cx<R>>) -> Self {
        assert_eq!(c.len(), 5, "a binary quartic has five coefficients");
        QuarticForm { c }
    }
    pub fn zero() -> Self {
        Self::from_vec(vec![Cx::zero(); 5])
    }
    /// `u^i v^{4−i}`.
    pub fn monomial(i: usize) -> Self {
        let mut m = Self::zero();
        m.c[i] = Cx::from_rational(&crate::scalar::rat(1, binom4(i)));
        m
    }
    /// From the plain coefficients `a_i` of `u^i v^{4−i}`.
    pub fn from_poly(a: &[Cx<R>]) -> Self {
        Self::from_vec(a.iter().enumerate().map(|(i, x)| x.clone() * Cx::from_rational(&crate::scalar::rat(1, binom4(i)))).collect())
    }
    pub fn poly(&self) -> Vec<Cx<R>> {
        self.c.iter().enumerate().map(|(i, x)| x.clone() * Cx::from_i64(binom4(i))).collect()
    }
    /// Product of the linear forms `b u − a v`, each vanishing at `[a : b]`.
    pub fn from_roots(roots: &[(Cx<R>, Cx<R>)]) -> Self {
        assert_eq!(roots.len(), 4);
        let mut p = vec![Cx::<R>::one()];
        for (a, b) in roots {
            p = hom_mul(&p, &[-a.clone(), b.clone()]);
        }
        Self::from_poly(&p)
    }
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Field::is_zero)
    }
    pub fn is_negligible(&self, tol: f64) -> bool {
        self.c.iter().all(|x| x.is_negligible(tol))
    }
    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(Field::magnitude).fold(0.0, f64::max)
    }
    pub fn add(&self, o: &Self) -> Self {
        Self::from_vec(self.c.iter().zip(&o.c).map(|(a, b)| a.clone() + b.clone()).collect())
    }
    pub fn sub(&self, o: &Self) -> Self {
        Self::from_vec(self.c.iter().zip(&o.c).map(|(a, b)| a.clone() - b.clone()).collect())
    }
    pub fn scale(&self, s: &Cx<R>) -> Self {
        Self::from_vec(self.c.iter().map(|a| a.clone() * s.clone()).collect())
    }
    pub fn eval(&self, u: &Cx<R>, v: &Cx<R>) -> Cx<R> {
        let mut s = Cx::zero();
        for (i, a) in self.poly().into_iter().enumerate() {
            let mut t = a;
            for _ in 0..i {
                t = t * u.clone();
            }
            for _ in i..4 {
                t = t * v.clone();
            }
            s = s + t;
        }
        s
    }
    pub fn to_c64(&self) -> QuarticForm<f64> {
        QuarticForm::from_vec(self.c.iter().map(Cx::to_c64).collect())
    }

    /// Group action `(A·φ)(s) = φ(A⁻¹ s)`.
    pub fn transform(&self, a: &Mat2<R>) -> Result<Self> {
        SpinorFrame::<R>::check_unimodular(a)?;
        // A⁻¹ = [[d, −b], [−c, a]]
        let u_new = [-a[(0, 1)].clone(), a[(1, 1)].clone()];
        let v_new = [a[(0, 0)].clone(), -a[(1, 0)].clone()];
        let mut out = vec![Cx::<R>::zero(); 5];
        for (i, coef) in self.poly().into_iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let mut t = vec![coef];
            for _ in 0..i {
                t = hom_mul(&t, &u_new);
            }
            for _ in i..4 {
                t = hom_mul(&t, &v_new);
            }
            for (k, x) in t.into_iter().enumerate() {
                out[k] = out[k].clone() + x;
            }
        }
        Ok(Self::from_poly(&out))
    }
}

/// Derived action `(C·φ)(s) = −dφ_s(Cs)`; `−½E₀` acts on `u⁴` by `+2`.
pub fn act_quartic<R: RealField>(c: &Mat2<R>, phi: &QuarticForm<R>) -> QuarticForm<R> {
    let a = phi.poly();
    let mut b = vec![Cx::<R>::zero(); 5];
    let ci = |x: usize| Cx::<R>::from_i64(x as i64);
    for k in 0..5 {
        if a[k].is_zero() {
            continue;
        }
        // ∂_u φ · (C₀₀u + C₀₁v) + ∂_v φ · (C₁₀u + C₁₁v)
        let du = a[k].clone() * ci(k);
        let dv = a[k].clone() * ci(4 - k);
        b[k] = b[k].clone() + du.clone() * c[(0, 0)].clone() + dv.clone() * c[(1, 1)].clone();
        if k > 0 {
            b[k - 1] = b[k - 1].clone() + du * c[(0, 1)].clone();
        }
        if k < 4 {
            b[k + 1] = b[k + 1].clone() + dv * c[(1, 0)].clone();
        }
    }
    QuarticForm::from_poly(&b.into_iter().map(|x| -x).collect::<Vec<_>>())
}

// ---------------------------------------------------------------- Petrov types

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PetrovType {
    I,
    II,
    D,
    III,
    N,
    O,
}

impl PetrovType {
    pub fn label(self) -> &'static str {
        match self {
            PetrovType::I => "I",
            PetrovType::II => "II",
            PetrovType::D => "D",
            PetrovType::III => "III",
            PetrovType::N => "N",
            PetrovType::O => "O",
        }
    }
    pub fn parse(s: &str) -> Option<Self> {
        [PetrovType::I, PetrovType::II, PetrovType::D, PetrovType::III, PetrovType::N, PetrovType::O]
            .into_iter()
            .find(|t| t.label() == s)
    }
    /// Multiplicity partition in decreasing order.
    pub fn partition(self) -> &'static [usize] {
        match self {
            PetrovType::I => &[1, 1, 1, 1],
            PetrovType::II => &[2, 1, 1],
            PetrovType::D => &[2, 2],
            PetrovType::III => &[3, 1],
            PetrovType::N => &[4],
            PetrovType::O => &[],
        }
    }
    pub fn from_partition(mults: &[usize]) -> Option<Self> {
        let mut m = mults.to_vec();
        m.sort_unstable_by(|a, b| b.cmp(a));
        [PetrovType::I, PetrovType::II, PetrovType::D, PetrovType::III, PetrovType::N, PetrovType::O]
            .into_iter()
            .find(|t| t.partition() == m.as_slice())
    }
}

impl std::fmt::Display for PetrovType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A point `[a : b] = [u : v]` of the projective line, scaled so the larger entry is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveRoot {
    pub a: C64,
    pub b: C64,
    pub mult: usize,
}

#[derive(Clone, Debug)]
pub struct PetrovResult {
    pub petrov: PetrovType,
    pub roots: Vec<ProjectiveRoot>,
    /// Largest `|φ(root)|` relative to the coefficient size.
    pub residual: f64,
    /// Multiplicities were decided by exact square-free decomposition.
    pub exact: bool,
    /// Float path: further types the input is consistent with once its own
    /// rounding is accounted for.  Empty when the decision is resolved.
    pub alternatives: Vec<PetrovType>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct PetrovOptions {
    /// Zero test for the invariants of the normalised quartic (float path).
    pub tol: f64,
    /// Relative radius beyond which a root cluster draws a conditioning warning.
    pub cluster_radius: f64,
    pub seed: u64,
}

impl Default for PetrovOptions {
    fn default() -> Self {
        PetrovOptions { tol: 1e-8, cluster_radius: 1e-6, seed: 0 }
    }
}

mod poly {
    use crate::scalar::Field;

    pub fn trim<F: Field>(mut p: Vec<F>) -> Vec<F> {
        while p.last().is_some_and(Field::is_zero) {
            p.pop();
        }
        p
    }

    pub fn deg<F: Field>(p: &[F]) -> usize {
        p.len().saturating_sub(1)
    }

    pub fn derivative<F: Field>(p: &[F]) -> Vec<F> {
        trim(p.iter().enumerate().skip(1).map(|(i, a)| a.clone() * F::from_i64(i as i64)).collect())
    }

    pub fn sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
        let n = a.len().max(b.len());
        trim((0..n)
            .map(|i| a.get(i).cloned().unwrap_or_else(F::zero) - b.get(i).cloned().unwrap_or_else(F::zero))
            .collect())
    }

    pub fn divrem<F: Field>(a: &[F], b: &[F]) -> (Vec<F>, Vec<F>) {
        let b = trim(b.to_vec());
        let lead = b.last().expect("nonzero divisor").inv().expect("unit");
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (vec![], r);
        }
        let mut q = vec![F::zero(); r.len() - b.len() + 1];
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let f = r.last().unwrap().clone() * lead.clone();
            for (i, bi) in b.iter().enumerate() {
                r[shift + i] = r[shift + i].clone() - f.clone() * bi.clone();
            }
            q[shift] = f;
            r.pop();
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn monic<F: Field>(p: Vec<F>) -> Vec<F> {
        let p = trim(p);
        match p.last().and_then(Field::inv) {
            Some(l) => p.into_iter().map(|x| x * l.clone()).collect(),
            None => p,
        }
    }

    pub fn gcd<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = divrem(&a, &b).1;
            a = b;
            b = r;
        }
        monic(a)
    }

    /// Yun's square-free decomposition: `(factor, multiplicity)` with nonconstant factors.
    pub fn square_free<F: Field>(p: &[F]) -> Vec<(Vec<F>, usize)> {
        let a = trim(p.to_vec());
        if deg(&a) == 0 {
            return vec![];
        }
        let da = derivative(&a);
        let c = gcd(&a, &da);
        let mut w = divrem(&a, &c).0;
        let mut y = divrem(&da, &c).0;
        let mut z = sub(&y, &derivative(&w));
        let mut out = Vec::new();
        let mut i = 1;
        while deg(&w) > 0 {
            let g = gcd(&w, &z);
            if deg(&g) > 0 {
                out.push((g.clone(), i));
            }
            w = divrem(&w, &g).0;
            y = divrem(&z, &g).0;
            z = sub(&y, &derivative(&w));
            i += 1;
        }
        out
    }
}

/// Roots of `Σ a_k t^k` by Aberth–Ehrlich iteration.
fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut a = coeffs.to_vec();
    while a.last().is_some_and(|x| x.norm() == 0.0) {
        a.pop();
    }
    let d = a.len().saturating_sub(1);
    if d == 0 {
        return vec![];
    }
    let lead = a[d];
    let a: Vec<Complex64> = a.iter().map(|x| x / lead).collect();
    if d == 1 {
        return vec![-a[0]];
    }
    let radius = 1.0 + a[..d].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let eval = |z: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in a.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius * 0.5, 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4))
        .collect();
    for _ in 0..1000 {
        let mut worst: f64 = 0.0;
        for k in 0..d {
            let (p, dp) = eval(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = if dp.norm() == 0.0 { Complex64::new(1e-3, 0.0) } else { p / dp };
            let s: Complex64 = (0..d).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * s;
            let step = if denom.norm() == 0.0 { ratio } else { ratio / denom };
            z[k] -= step;
            worst = worst.max(step.norm() / (1.0 + z[k].norm()));
        }
        if worst < 1e-16 {
            break;
        }
    }
    z
}

fn normalise_point(a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    if b.norm() >= a.norm() {
        (a / b, Complex64::new(1.0, 0.0))
    } else {
        (Complex64::new(1.0, 0.0), b / a)
    }
}

fn chordal(x: (Complex64, Complex64), y: (Complex64, Complex64)) -> f64 {
    let n = |p: (Complex64, Complex64)| (p.0.norm_sqr() + p.1.norm_sqr()).sqrt();
    (x.0 * y.1 - x.1 * y.0).norm() / (n(x) * n(y))
}

fn residual(phi: &QuarticForm<f64>, roots: &[ProjectiveRoot]) -> f64 {
    let scale = phi.max_abs().max(f64::MIN_POSITIVE);
    roots.iter().map(|r| phi.eval(&r.a, &r.b).abs() / scale).fold(0.0, f64::max)
}

/// Petrov type from the root multiplicities of `φ`.
pub fn petrov_classify<R: RealField>(phi: &QuarticForm<R>, opts: &PetrovOptions) -> PetrovResult {
    if R::EXACT {
        classify_exact(phi)
    } else {
        classify_float(&phi.to_c64(), opts)
    }
}

fn classify_exact<R: RealField>(phi: &QuarticForm<R>) -> PetrovResult {
    if phi.is_zero() {
        return PetrovResult { petrov: PetrovType::O, roots: vec![], residual: 0.0, exact: true, alternatives: vec![], warnings: vec![] };
    }
    // dehomogenise at v = 1: p(t) = Σ a_k t^k, t = u/v
    let p = poly::trim(phi.poly());
    let at_infinity = 4 - poly::deg(&p);
    let mut roots = Vec::new();
    if at_infinity > 0 {
        roots.push(ProjectiveRoot { a: Cx::new(1.0, 0.0), b: Cx::new(0.0, 0.0), mult: at_infinity });
    }
    for (factor, mult) in poly::square_free(&p) {
        let c: Vec<Complex64> = factor.iter().map(|x| x.to_c64().to_num()).collect();
        for t in aberth(&c) {
            let (a, b) = normalise_point(t, Complex64::new(1.0, 0.0));
            roots.push(ProjectiveRoot { a: C64::from_num(a), b: C64::from_num(b), mult });
        }
    }
    let mults: Vec<usize> = roots.iter().map(|r| r.mult).collect();
    let petrov = PetrovType::from_partition(&mults).expect("multiplicities of a quartic");
    let res = residual(&phi.to_c64(), &roots);
    PetrovResult { petrov, roots, residual: res, exact: true, alternatives: vec![], warnings: vec![] }
}

/// `I`, `J` and the plain coefficients of the Hessian covariant of `Σ binom(4,i) a_i x^{4−i} y^i`.
fn invariants(a: &[Complex64]) -> (Complex64, Complex64, [Complex64; 5]) {
    let i = a[0] * a[4] - 4.0 * a[1] * a[3] + 3.0 * a[2] * a[2];
    let j = a[0] * a[2] * a[4] + 2.0 * a[1] * a[2] * a[3] - a[2] * a[2] * a[2] - a[0] * a[3] * a[3] - a[1] * a[1] * a[4];
    let h = [
        a[0] * a[2] - a[1] * a[1],
        2.0 * (a[0] * a[3] - a[1] * a[2]),
        a[0] * a[4] + 2.0 * a[1] * a[3] - 3.0 * a[2] * a[2],
        2.0 * (a[1] * a[4] - a[2] * a[3]),
        a[2] * a[4] - a[3] * a[3],
    ];
    (i, j, h)
}

/// A representative of the `GL₂`-orbit with roots of unit size around the
/// origin: a seeded rotation moves roots away from `∞`, `t ↦ t + m` centres
/// them and `t ↦ σt` rescales them.  Binary floats are exact rationals, so the
/// change is carried out exactly and rounded once at the end; the invariant
/// tests on the result are far better conditioned than on the input chart.
struct Balanced {
    form: QuarticForm<f64>,
    /// Per-coefficient bound on what rounding the input to doubles can move
    /// the representative by (the change of chart applied to `ε|c_j| e_j`).
    err: [f64; 5],
}

fn balanced(phi: &QuarticForm<f64>, seed: u64) -> Balanced {
    use crate::scalar::Rational;
    let to_q = |x: f64| Rational::from_float(x).expect("finite coefficient");
    let exact: QuarticForm<Rational> =
        QuarticForm::from_vec(phi.c.iter().map(|z| Cx::new(to_q(z.re), to_q(z.im))).collect());
    let input_err: Vec<f64> = phi.c.iter().map(|z| 2.0 * f64::EPSILON * z.abs()).collect();
    let mut rng = crate::rng(seed ^ 0x5eed_ba1a);
    // rational unitary [[c, −s̄], [s, c]], c = (1−τ²)/(1+τ²), |s| = 2τ/(1+τ²)
    let phases = [(3, 4), (4, -3), (-3, -4), (5, 12), (12, -5), (8, 15)];
    // keep the rotation that pulls the roots furthest from ∞
    let mut best: Option<(f64, Mat2<Rational>, Vec<Gauss>)> = None;
    for _ in 0..16 {
        let tau = crate::scalar::rat(rng.gen_range(1..8), 8);
        let den = Rational::one() + tau.clone() * tau.clone();
        let c = Cx::real((Rational::one() - tau.clone() * tau.clone()) / den.clone());
        let (x, y) = phases[rng.gen_range(0..phases.len())];
        let h = ((x * x + y * y) as f64).sqrt() as i64;
        let sn = Cx::new(crate::scalar::rat(x, h), crate::scalar::rat(y, h)) * Cx::real(int2(2) * tau / den);
        let rot = mat2(c.clone(), -sn.conj(), sn, c);
        let p = exact.transform(&rot).expect("unitary").poly();
        let big = p.iter().map(Cx::magnitude).fold(0.0, f64::max);
        let lead = p[4].magnitude() / big;
        if best.as_ref().is_none_or(|b| lead > b.0) {
            best = Some((lead, rot, p));
        }
    }
    let (_, rot, p) = best.expect("sixteen candidates");
    if p[4].is_zero() {
        let mut err = [0.0; 5];
        err.copy_from_slice(&input_err);
        return Balanced { form: phi.clone(), err };
    }
    let pf: Vec<Complex64> = p.iter().map(|z| z.to_c64().to_num()).collect();
    // centre on the mean root −P₃/(4P₄), rounded to a short dyadic
    let mf = -pf[3] / (4.0 * pf[4]);
    let dy = |x: f64| to_q((x * 1048576.0).round() / 1048576.0);
    let m = Cx::new(dy(mf.re), dy(mf.im));
    let shift = |p: &[Gauss]| {
        let mut q = vec![Gauss::zero(); 5];
        let mut terms = [0.0f64; 5];
        for (j, pj) in p.iter().enumerate() {
            let mut mp = Gauss::one();
            for k in (0..=j).rev() {
                let t = pj.clone() * mp.clone() * Gauss::from_i64(binomial(j, k) as i64);
                terms[k] += t.magnitude();
                q[k] = q[k].clone() + t;
                mp = mp * m.clone();
            }
        }
        (q, terms)
    };
    let (q, terms) = shift(&p);
    // coefficients at the input's rounding level carry no scale; zooming on
    // them would only amplify noise (e.g. around a fourfold root)
    let cutoff = 1e3 * 64.0 * f64::EPSILON;
    let q4 = q[4].magnitude();
    let sigma = (0..4)
        .filter(|&k| q[k].magnitude() > cutoff * terms[k])
        .map(|k| (q[k].magnitude() / q4).powf(1.0 / (4 - k) as f64))
        .fold(0.0, f64::max);
    let sq = if sigma > 0.0 && sigma.is_finite() {
        let e = sigma.log2().round() as i32;
        let two = Rational::from_i64(2);
        if e >= 0 { pow_q(&two, e as u32) } else { pow_q(&two, (-e) as u32).inv().expect("nonzero") }
    } else {
        Rational::one()
    };
    let scale = |mut q: Vec<Gauss>| {
        let mut f = Gauss::one();
        for x in q.iter_mut() {
            *x = x.clone() * f.clone();
            f = f.clone() * Cx::real(sq.clone());
        }
        QuarticForm::from_poly(&q).to_c64()
    };
    let form = scale(q);
    // the change of chart is linear in φ: push each basis vector through it
    let mut err = [0.0; 5];
    for (j, e) in input_err.iter().enumerate() {
        if *e == 0.0 {
            continue;
        }
        let mut basis = vec![Gauss::zero(); 5];
        basis[j] = Gauss::one();
        let moved = QuarticForm::from_vec(basis).transform(&rot).expect("unitary").poly();
        let col = scale(shift(&moved).0);
        for (k, x) in col.c.iter().enumerate() {
            err[k] += e * x.abs();
        }
    }
    Balanced { form, err }
}

fn int2(n: i64) -> crate::scalar::Rational {
    crate::scalar::Rational::from_i64(n)
}

fn pow_q(x: &crate::scalar::Rational, e: u32) -> crate::scalar::Rational {
    (0..e).fold(crate::scalar::Rational::one(), |acc, _| acc * x.clone())
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Outcome of a zero test `v ≤ t` on a value known to within `± e`.
#[derive(Clone, Copy)]
struct Vanishing {
    may_vanish: bool,
    may_not: bool,
}

impl Vanishing {
    fn test(v: f64, t: f64, e: f64) -> Self {
        Vanishing { may_vanish: v <= t + e, may_not: v + e > t }
    }
    /// Both quantities vanish.
    fn and(self, o: Self) -> Self {
        Vanishing { may_vanish: self.may_vanish && o.may_vanish, may_not: self.may_not || o.may_not }
    }
}

fn classify_float(phi: &QuarticForm<f64>, opts: &PetrovOptions) -> PetrovResult {
    let scale = phi.max_abs();
    if scale <= crate::scalar::FLOAT_ZERO {
        return PetrovResult { petrov: PetrovType::O, roots: vec![], residual: 0.0, exact: false, alternatives: vec![], warnings: vec![] };
    }
    let bal = balanced(phi, opts.seed);
    let bal_scale = bal.form.max_abs();
    let a: Vec<Complex64> = bal.form.c.iter().map(|x| x.to_num() / bal_scale).collect();
    let (i, j, h) = invariants(&a);
    let tol = opts.tol;
    let h_scale = h.iter().map(|x| x.norm()).fold(0.0, f64::max);
    // I and J are compared with the matching power of |H|, which moves with
    // them along an SL₂ orbit (nearby roots shrink all of them together).
    // On top of that comes what they cannot resolve: the input's own rounding,
    // carried to first order through the gradients, and the rounding of the
    // products they are assembled from.
    let n: Vec<f64> = a.iter().map(|x| x.norm()).collect();
    let da: Vec<f64> = bal.err.iter().map(|e| 4.0 * e / bal_scale + 4.0 * f64::EPSILON).collect();
    let grad_i = [a[4], -4.0 * a[3], 6.0 * a[2], -4.0 * a[1], a[0]];
    let grad_j = [h[4], -h[3], h[2], -h[1], h[0]];
    let spread = |g: &[Complex64]| g.iter().zip(&da).map(|(g, d)| g.norm() * d).sum::<f64>();
    let i_terms = n[0] * n[4] + 4.0 * n[1] * n[3] + 3.0 * n[2] * n[2];
    let j_terms = n[0] * n[2] * n[4] + 2.0 * n[1] * n[2] * n[3] + n[2].powi(3) + n[0] * n[3] * n[3] + n[1] * n[1] * n[4];
    let floor = 64.0 * f64::EPSILON;
    let i_err = spread(&grad_i) + floor * i_terms;
    let j_err = spread(&grad_j) + floor * j_terms;
    let da_max = da.iter().copied().fold(0.0, f64::max);
    let disc = i * i * i - 27.0 * j * j;
    let disc_err = 3.0 * i.norm_sqr() * i_err + 54.0 * j.norm() * j_err + floor * (i_terms.powi(3) + 27.0 * j_terms * j_terms);
    // type D iff the Hessian is proportional to φ
    let hb: Vec<Complex64> = h.iter().enumerate().map(|(k, x)| x / binom4(k) as f64).collect();
    let mut cross: f64 = 0.0;
    for x in 0..5 {
        for y in 0..5 {
            cross = cross.max((hb[x] * a[y] - hb[y] * a[x]).norm());
        }
    }
    // each Hessian coefficient is a quadratic with gradient of size ≤ 12 at |a| ≤ 1
    let null = Vanishing::test(h_scale, tol, 12.0 * da_max);
    let iii = Vanishing::test(i.norm(), tol * h_scale.powi(2), i_err).and(Vanishing::test(j.norm(), tol * h_scale.powi(3), j_err));
    // Δ/(|I|³ + 27|J|²) is an absolute invariant, so this test does not care
    // how badly the chart squeezes the roots together
    let degenerate = Vanishing::test(disc.norm(), tol * (i.norm().powi(3) + 27.0 * j.norm_sqr()), disc_err);
    let d = Vanishing::test(cross, tol * h_scale, 8.0 * da_max * (1.0 + h_scale));
    // walk the decision tree along every branch the error bars leave open;
    // the most special type reached is the answer
    let mut reached = Vec::new();
    if null.may_vanish {
        reached.push(PetrovType::N);
    }
    if null.may_not {
        if iii.may_vanish {
            reached.push(PetrovType::III);
        }
        if iii.may_not {
            if degenerate.may_vanish {
                if d.may_vanish {
                    reached.push(PetrovType::D);
                }
                if d.may_not {
                    reached.push(PetrovType::II);
                }
            }
            if degenerate.may_not {
                reached.push(PetrovType::I);
            }
        }
    }
    let petrov = reached[0];
    let alternatives = reached[1..].to_vec();
    let (roots, mut warnings) = float_roots(phi, petrov, opts);
    if !alternatives.is_empty() {
        let alt: Vec<&str> = alternatives.iter().map(|t| t.label()).collect();
        warnings.push(format!(
            "input precision does not separate type {} from {}; the more special type is reported",
            petrov.label(),
            alt.join(", ")
        ));
    }
    let res = residual(phi, &roots);
    PetrovResult { petrov, roots, residual: res, exact: false, alternatives, warnings }
}

/// Roots in a random Möbius chart, clustered according to the partition of `petrov`.
fn float_roots(phi: &QuarticForm<f64>, petrov: PetrovType, opts: &PetrovOptions) -> (Vec<ProjectiveRoot>, Vec<String>) {
    let mut rng = crate::rng(opts.seed);
    let one = Complex64::new(1.0, 0.0);
    let mut warnings = Vec::new();
    let (m, psi) = loop {
        let m = random_unimodular(&mut rng);
        let psi = phi.transform(&m).expect("unimodular");
        let p = psi.poly();
        let big = p.iter().map(C64::abs).fold(0.0, f64::max);
        if p[4].abs() > 1e-3 * big {
            break (m, psi);
        }
    };
    let coeffs: Vec<Complex64> = psi.poly().iter().map(|x| x.to_num()).collect();
    let mi = m.inverse().expect("unimodular");
    // root t of ψ(t, 1) pulls back to M⁻¹ (t, 1)
    let pull = |t: Complex64| {
        let a = mi[(0, 0)].to_num() * t + mi[(0, 1)].to_num();
        let b = mi[(1, 0)].to_num() * t + mi[(1, 1)].to_num();
        normalise_point(a, b)
    };
    let ts = aberth(&coeffs);
    let pts: Vec<(Complex64, Complex64)> = ts.iter().map(|&t| pull(t)).collect();
    let parts = petrov.partition();
    let blocks = best_clustering(&pts, parts);
    let mut roots = Vec::new();
    for block in blocks {
        let mult = block.len();
        let diam = block
            .iter()
            .flat_map(|&x| block.iter().map(move |&y| (x, y)))
            .map(|(x, y)| chordal(pts[x], pts[y]))
            .fold(0.0, f64::max);
        if diam > opts.cluster_radius {
            warnings.push(format!(
                "root of multiplicity {mult} is ill-conditioned: cluster spread {diam:.1e} exceeds {:.0e}",
                opts.cluster_radius
            ));
        }
        // refine as a simple root of the (mult−1)-th derivative in the ψ chart
        let mut t = block.iter().map(|&k| ts[k]).sum::<Complex64>() / mult as f64;
        let mut d = coeffs.clone();
        for _ in 1..mult {
            d = d.iter().enumerate().skip(1).map(|(k, x)| x * k as f64).collect();
        }
        let dd: Vec<Complex64> = d.iter().enumerate().skip(1).map(|(k, x)| x * k as f64).collect();
        let ev = |c: &[Complex64], z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, x| acc * z + x);
        for _ in 0..50 {
            let den = ev(&dd, t);
            if den.norm() == 0.0 {
                break;
            }
            let step = ev(&d, t) / den;
            t -= step;
            if step.norm() <= 1e-17 * (1.0 + t.norm()) {
                break;
            }
        }
        let (a, b) = pull(t);
        let _ = one;
        roots.push(ProjectiveRoot { a: C64::from_num(a), b: C64::from_num(b), mult });
    }
    (roots, warnings)
}

/// Assignment of the points to blocks of the given sizes minimising the largest block diameter.
fn best_clustering(pts: &[(Complex64, Complex64)], sizes: &[usize]) -> Vec<Vec<usize>> {
    let n = pts.len();
    let mut best: Option<(f64, Vec<Vec<usize>>)> = None;
    // every labelling of the points by block index, filtered by block sizes
    let k = sizes.len();
    let total = k.pow(n as u32);
    for code in 0..total {
        let mut blocks = vec![Vec::new(); k];
        let mut c = code;
        for p in 0..n {
            blocks[c % k].push(p);
            c /= k;
        }
        if blocks.iter().zip(sizes).any(|(b, &s)| b.len() != s) {
            continue;
        }
        let diam = blocks
            .iter()
            .flat_map(|b| b.iter().flat_map(move |&x| b.iter().map(move |&y| (x, y))))
            .map(|(x, y)| chordal(pts[x], pts[y]))
            .fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(d, _)| diam < *d) {
            best = Some((diam, blocks));
        }
    }
    best.map(|b| b.1).unwrap_or_default()
}

// ---------------------------------------------------------------- stabilisers

#[derive(Clone, Debug)]
pub struct StabilizerResult<R> {
    pub aut: Vec<Mat2<R>>,
    pub conf: Vec<Mat2<R>>,
    /// Both spans are closed under the bracket.
    pub closed: bool,
}

impl<R: RealField> StabilizerResult<R> {
    pub fn aut_dim(&self) -> usize {
        self.aut.len()
    }
    pub fn conf_dim(&self) -> usize {
        self.conf.len()
    }
}

fn action_matrix<R: RealField>(phi: &QuarticForm<R>) -> Mat<Cx<R>> {
    let cols: Vec<Vec<Cx<R>>> = sl2_basis::<R>().iter().map(|b| act_quartic(b, phi).c).collect();
    Mat::from_cols(5, &cols)
}

fn normalised<R: RealField>(phi: &QuarticForm<R>) -> QuarticForm<R> {
    if R::EXACT || phi.is_zero() {
        return phi.clone();
    }
    let s = R::from_f64(1.0 / phi.max_abs()).expect("finite");
    phi.scale(&Cx::real(s))
}

fn span_basis<R: RealField>(vs: Vec<Vec<Cx<R>>>, tol: f64) -> Vec<Vec<Cx<R>>> {
    if vs.is_empty() {
        return vs;
    }
    let m = Mat::from_rows(vs).expect("rectangular");
    let (r, piv) = m.rref(tol);
    (0..piv.len()).map(|i| r.row(i)).collect()
}

fn in_span<R: RealField>(basis: &[Vec<Cx<R>>], v: &[Cx<R>], tol: f64) -> bool {
    let mut rows = basis.to_vec();
    let before = if rows.is_empty() { 0 } else { Mat::from_rows(rows.clone()).expect("rect").rank(tol) };
    rows.push(v.to_vec());
    Mat::from_rows(rows).expect("rect").rank(tol) == before
}

/// `aut(φ) = {C : C·φ = 0}` and `conf(φ) = {C : C·φ ∈ Cφ}` inside `sl₂(C)`.
pub fn stabilizers<R: RealField>(phi: &QuarticForm<R>, tol: f64) -> StabilizerResult<R> {
    let phi = normalised(phi);
    let m = action_matrix(&phi);
    let aut = span_basis(m.kernel(tol), tol);
    let aug = Mat::from_fn(5, 4, |i, j| if j < 3 { m[(i, j)].clone() } else { -phi.c[i].clone() });
    let conf = span_basis(aug.kernel(tol).into_iter().map(|v| v[..3].to_vec()).collect(), tol);
    let closed = [&aut, &conf].iter().all(|b| {
        b.iter().all(|x| {
            b.iter().all(|y| {
                let br = sl2_from_coords(x).commutator(&sl2_from_coords(y));
                in_span(b, &sl2_coords(&br), tol)
            })
        })
    });
    StabilizerResult {
        aut: aut.iter().map(|v| sl2_from_coords(v)).collect(),
        conf: conf.iter().map(|v| sl2_from_coords(v)).collect(),
        closed,
    }
}

// ---------------------------------------------------------------- type B

#[derive(Clone, Debug)]
pub struct TypeBAnalysis<R> {
    pub petrov: PetrovType,
    /// `None` when `C·φ = 2φ` has no solution.
    pub homothety: Option<Homothety<R>>,
}

#[derive(Clone, Debug)]
pub struct Homothety<R> {
    /// A solution of `C·φ = 2φ`.
    pub c: Mat2<R>,
    /// Eigenvalues of `C` are `±μ`.
    pub mu: R,
    /// Unimodular `A` with `A C A⁻¹ = −μE₀`.
    pub basis_change: Mat2<R>,
    pub normalized_c: Mat2<R>,
    pub normalized_phi: QuarticForm<R>,
    /// `φ(−μE₀)` in `so(V)`; the homothety is `id + skew`.
    pub skew: Mat<R>,
}

impl<R: RealField> TypeBAnalysis<R> {
    pub fn message(&self) -> String {
        match &self.homothety {
            None => "no essential homothety".into(),
            Some(h) => format!("essential homothety: C ~ -{}·E0, D = id + φ(C)", h.mu),
        }
    }
}

impl<R: RealField> Homothety<R> {
    /// `κ` with `skew = κ·(p∧q)`, if the skew part is aligned with `p∧q`.
    pub fn p_wedge_q_factor(&self, frame: &SpinorFrame<R>) -> Option<R> {
        let pq = frame.wedge(0, 3);
        let k = self.skew[(0, 0)].div(&pq[(0, 0)])?;
        self.skew.sub(&pq.scale(&k)).is_negligible(DEFAULT_TOL).then_some(k)
    }
}

fn eigenvector<R: RealField>(c: &Mat2<R>, lambda: &Cx<R>) -> Vec<Cx<R>> {
    let v = vec![c[(0, 1)].clone(), lambda.clone() - c[(0, 0)].clone()];
    if v.iter().all(|x| x.is_negligible(DEFAULT_TOL)) {
        vec![lambda.clone() - c[(1, 1)].clone(), c[(1, 0)].clone()]
    } else {
        v
    }
}

/// Solve `C·φ = 2φ`; when solvable normalise `C` to `−μE₀` by an `SL₂` change of basis.
pub fn typeb_analyze<R: RealField>(frame: &SpinorFrame<R>, phi: &QuarticForm<R>, tol: f64) -> Result<TypeBAnalysis<R>> {
    if phi.is_negligible(tol) {
        return Err(Error::Invalid("φ = 0".into()));
    }
    let petrov = petrov_classify(phi, &PetrovOptions { tol: tol.max(1e-8), ..Default::default() }).petrov;
    let m = action_matrix(phi);
    let two = Cx::<R>::from_i64(2);
    let rhs: Vec<Cx<R>> = phi.c.iter().map(|x| x.clone() * two.clone()).collect();
    let Some(x) = m.solve(&rhs, tol) else {
        return Ok(TypeBAnalysis { petrov, homothety: None });
    };
    if !matches!(petrov, PetrovType::N | PetrovType::III) {
        return Err(Error::Invalid(format!("C·φ = 2φ is solvable for a form of type {petrov}")));
    }
    let c = sl2_from_coords(&x);
    let mu2 = -det2(&c);
    if !mu2.im.is_negligible(tol) || mu2.re.signum() <= 0 {
        return Err(Error::Invalid(format!("eigenvalues of C are not real: μ² = {mu2}")));
    }
    let mu = mu2.re.sqrt_exact().ok_or_else(|| Error::Invalid(format!("√{} is not in the field", mu2.re)))?;
    let lm = Cx::real(-mu.clone());
    let v1 = eigenvector(&c, &lm);
    let v2 = eigenvector(&c, &-lm.clone());
    let ainv0 = Mat::from_cols(2, &[v1, v2]);
    let d = det2(&ainv0).inv().ok_or_else(|| Error::Singular("eigenvectors".into()))?;
    let ainv = Mat::from_fn(2, 2, |i, j| if j == 1 { ainv0[(i, j)].clone() * d.clone() } else { ainv0[(i, j)].clone() });
    let a = ainv.inverse().expect("unimodular");
    let normalized_c = a.mul(&c).mul(&ainv);
    let normalized_phi = phi.transform(&a)?;
    let skew = frame.phi_matrix(&normalized_c)?;
    Ok(TypeBAnalysis { petrov, homothety: Some(Homothety { c, mu, basis_change: a, normalized_c, normalized_phi, skew }) })
}

// ---------------------------------------------------------------- sampling

/// Unimodular matrix with entries drawn from the unit square.
pub fn random_unimodular(rng: &mut impl Rng) -> Mat2<f64> {
    loop {
        let mut z = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (a, b, c, d) = (z(), z(), z(), z());
        let det = a * d - b * c;
        if det.norm() < 0.1 {
            continue;
        }
        let s = det.sqrt().inv();
        return Mat::from_fn(2, 2, |i, j| C64::from_num([[a, b], [c, d]][i][j] * s));
    }
}

fn small_gauss(rng: &mut impl Rng, r: i64) -> Gauss {
    Cx::new(crate::scalar::int(rng.gen_range(-r..=r)), crate::scalar::int(rng.gen_range(-r..=r)))
}

/// Product of elementary unimodular Gaussian matrices.
pub fn random_gauss_unimodular(rng: &mut impl Rng) -> Mat2<crate::scalar::Rational> {
    let z = Gauss::zero();
    let o = Gauss::one();
    let upper = mat2(o.clone(), small_gauss(rng, 2), z.clone(), o.clone());
    let lower = mat2(o.clone(), z.clone(), small_gauss(rng, 2), o);
    let rot = mat2(z.clone(), Cx::i(), Cx::i(), z);
    if rng.gen_bool(0.5) {
        upper.mul(&lower)
    } else {
        lower.mul(&upper).mul(&rot)
    }
}

/// Quartic with Gaussian-rational coefficients `(a + bi)/d`, `|a|, |b| ≤ 5`, `d ≤ 3`.
pub fn random_gauss_quartic(rng: &mut impl Rng) -> QuarticForm<crate::scalar::Rational> {
    QuarticForm::from_vec(
        (0..5)
            .map(|_| {
                let d = rng.gen_range(1..=3);
                Cx::new(crate::scalar::rat(rng.gen_range(-5..=5), d), crate::scalar::rat(rng.gen_range(-5..=5), d))
            })
            .collect(),
    )
}

/// The five model quartics `α⁴, α³β, α²β², α²βγ, αβγδ` with `α = −u`, `β = v`,
/// the last with roots `0, 1, −1, 2` in the chart `t = u/v`.
pub fn model_quartics<R: RealField>() -> Vec<(PetrovType, QuarticForm<R>)> {
    let pt = |a: i64, b: i64| (cx::<R>(a, 0), cx::<R>(b, 0));
    vec![
        (PetrovType::N, QuarticForm::from_roots(&[pt(0, 1), pt(0, 1), pt(0, 1), pt(0, 1)])),
        (PetrovType::III, QuarticForm::from_roots(&[pt(0, 1), pt(0, 1), pt(0, 1), pt(1, 0)])),
        (PetrovType::D, QuarticForm::from_roots(&[pt(0, 1), pt(0, 1), pt(1, 0), pt(1, 0)])),
        (PetrovType::II, QuarticForm::from_roots(&[pt(0, 1), pt(0, 1), pt(1, 1), pt(-1, 1)])),
        (PetrovType::I, QuarticForm::from_roots(&[pt(0, 1), pt(1, 1), pt(-1, 1), pt(2, 1)])),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{curvature_cw, ricci_decompose, weyl};
    use crate::scalar::{int, Cyc8, QSqrt2, Rational};

    type Q2 = QSqrt2;

    #[test]
    fn frame_metric_is_det() {
        let f = SpinorFrame::<Rational>::new(2).unwrap();
        let x = vec![int(1), int(2), int(-3), int(5)];
        let m = f.hermitian(&x).unwrap();
        assert_eq!(det2(&m).re, f.space().inner(&x, &x).unwrap());
        assert_eq!(f.coords(&m).unwrap(), x);
        assert!(SpinorFrame::<Rational>::new(1).is_err());
    }

    #[test]
    fn table_holds_except_ie_plus() {
        let f = SpinorFrame::<Q2>::new(1).unwrap();
        let rows = f.table_rows().unwrap();
        let failing: Vec<&str> = rows.iter().filter(|r| !r.holds).map(|r| r.name).collect();
        assert_eq!(failing, vec!["iE+"]);
        // the printed row is off by a sign
        let r = &rows[3];
        assert_eq!(r.actual, r.expected.neg());
        assert!(f.bracket_defects().unwrap().iter().all(|(_, d)| d.is_zero()));
    }

    #[test]
    fn anchor_and_stabilised_directions() {
        let u4 = QuarticForm::<Rational>::monomial(4);
        let c = e0::<Rational>().scale(&Cx::from_rational(&crate::scalar::rat(-1, 2)));
        assert_eq!(act_quartic(&c, &u4), u4.scale(&Cx::from_i64(2)));
        assert!(act_quartic(&e_minus(), &u4).is_zero());
        let v4 = QuarticForm::<Rational>::monomial(0);
        assert!(act_quartic(&e_plus(), &v4).is_zero());
        let f = SpinorFrame::<Q2>::new(1).unwrap();
        let cq = e0::<Q2>().scale(&Cx::from_rational(&crate::scalar::rat(-1, 2)));
        assert_eq!(f.phi_matrix(&cq).unwrap(), f.wedge(3, 0));
    }

    #[test]
    fn action_is_a_lie_action() {
        let mut rng = crate::rng(3);
        let phi = random_gauss_quartic(&mut rng);
        let b = sl2_real_basis::<Rational>();
        for (_, x) in &b {
            for (_, y) in &b {
                let lhs = act_quartic(&x.commutator(y), &phi);
                let rhs = act_quartic(x, &act_quartic(y, &phi)).sub(&act_quartic(y, &act_quartic(x, &phi)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn weyl_is_equivariant() {
        let f = SpinorFrame::<Rational>::new(2).unwrap();
        let mut rng = crate::rng(5);
        for _ in 0..3 {
            let phi = random_gauss_quartic(&mut rng);
            let w = f.weyl_from_quartic(&phi).unwrap();
            assert!(is_weyl_member(&w));
            for (_, c) in sl2_real_basis::<Rational>() {
                let lhs = f.weyl_from_quartic(&act_quartic(&c, &phi)).unwrap();
                assert_eq!(lhs, w.act(&f.phi_matrix(&c).unwrap()));
            }
            let a = random_gauss_unimodular(&mut rng);
            let moved = f.weyl_from_quartic(&phi.transform(&a).unwrap()).unwrap();
            let pushed = w.transport(f.space().clone(), &f.group_matrix(&a).unwrap()).unwrap();
            assert_eq!(moved, pushed);
            assert_eq!(f.quartic_from_weyl(&w).unwrap(), phi);
        }
        // id acts as −2 on (1,3) tensors, so C·W = 2W for the anchor
        let w = f.weyl_from_quartic(&QuarticForm::monomial(4)).unwrap();
        assert_eq!(w.act(&Mat::identity(4)), w.scale(&int(-2)));
    }

    #[test]
    fn model_quartics_classify_exactly() {
        let expect = [(2, 1), (1, 0), (1, 1), (0, 0), (0, 0)];
        for ((t, phi), dims) in model_quartics::<Rational>().into_iter().zip(expect) {
            let r = petrov_classify(&phi, &PetrovOptions::default());
            assert_eq!(r.petrov, t);
            assert!(r.residual < 1e-9, "{t}: {}", r.residual);
            let s = stabilizers(&phi, DEFAULT_TOL);
            assert_eq!((s.conf_dim(), s.aut_dim()), dims, "{t}");
            assert!(s.closed);
            let fl = petrov_classify(&phi.to_c64(), &PetrovOptions::default());
            assert_eq!(fl.petrov, t);
            let sf = stabilizers(&phi.to_c64(), 1e-9);
            assert_eq!((sf.conf_dim(), sf.aut_dim()), dims, "{t} float");
        }
        assert_eq!(petrov_classify(&QuarticForm::<Rational>::zero(), &PetrovOptions::default()).petrov, PetrovType::O);
    }

    #[test]
    fn float_classification_is_invariant() {
        let mut rng = crate::rng(11);
        for (t, phi) in model_quartics::<Rational>() {
            let phi = phi.to_c64();
            for k in 0..20 {
                let a = random_unimodular(&mut rng);
                let r = petrov_classify(&phi.transform(&a).unwrap(), &PetrovOptions { seed: k, ..Default::default() });
                assert_eq!(r.petrov, t);
                assert!(r.residual < 1e-6, "{t}: {}", r.residual);
            }
        }
    }

    #[test]
    fn exact_classification_survives_gaussian_changes() {
        let mut rng = crate::rng(13);
        for (t, phi) in model_quartics::<Rational>() {
            let a = random_gauss_unimodular(&mut rng);
            let moved = phi.transform(&a).unwrap();
            assert_eq!(petrov_classify(&moved, &PetrovOptions::default()).petrov, t);
            let s0 = stabilizers(&phi, DEFAULT_TOL);
            let s1 = stabilizers(&moved, DEFAULT_TOL);
            assert_eq!((s0.conf_dim(), s0.aut_dim()), (s1.conf_dim(), s1.aut_dim()));
        }
    }

    #[test]
    fn type_b() {
        let f = SpinorFrame::<Q2>::new(1).unwrap();
        let u4 = QuarticForm::<Q2>::monomial(4);
        let r = typeb_analyze(&f, &u4, DEFAULT_TOL).unwrap();
        let h = r.homothety.as_ref().unwrap();
        let half = Cx::from_rational(&crate::scalar::rat(-1, 2));
        assert_eq!(h.normalized_c, e0::<Q2>().scale(&half));
        // φ(−½E₀) = q∧p = −p∧q
        assert_eq!(h.p_wedge_q_factor(&f), Some(Q2::from_i64(-1)));
        for (t, phi) in model_quartics::<Q2>() {
            let r = typeb_analyze(&f, &phi, DEFAULT_TOL).unwrap();
            assert_eq!(r.homothety.is_some(), matches!(t, PetrovType::N | PetrovType::III), "{t}");
            if let Some(h) = r.homothety {
                assert_eq!(act_quartic(&h.normalized_c, &h.normalized_phi), h.normalized_phi.scale(&Cx::from_i64(2)));
                assert!(h.p_wedge_q_factor(&f).is_some());
            }
        }
        // a type N form in a non-adapted basis
        let mut rng = crate::rng(2);
        let a = random_gauss_unimodular(&mut rng).map(|z| Cyc8::new(Q2::from_rational(&z.re), Q2::from_rational(&z.im)));
        let r = typeb_analyze(&f, &u4.transform(&a).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!(r.homothety.unwrap().normalized_c, e0::<Q2>().scale(&half));
    }

    #[test]
    fn cahen_wallach_weyl_is_type_n() {
        let s = Mat::diag(&[int(1), int(2)]);
        let w = weyl(&curvature_cw::<Rational>(&s).unwrap()).unwrap();
        let f = SpinorFrame::<Rational>::new(2).unwrap();
        let ws = f.from_cahen_wallach(&w).unwrap();
        let rd = ricci_decompose(&ws).unwrap();
        assert!(rd.weyl.sub(&ws).is_zero());
        let phi = f.quartic_from_weyl(&ws).unwrap();
        assert!(!phi.is_zero());
        assert_eq!(petrov_classify(&phi, &PetrovOptions::default()).petrov, PetrovType::N);
        assert_eq!(f.weyl_from_quartic(&phi).unwrap(), ws);
    }

    #[test]
    fn finite_differences() {
        let f = SpinorFrame::<f64>::new(1).unwrap();
        for (_, c) in sl2_real_basis::<f64>() {
            assert!(f.finite_difference_defect(&c, &[0.3, -1.0, 2.0, 0.7], 1e-4).unwrap() < 1e-6);
        }
    }
}

