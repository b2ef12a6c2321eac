//! Pseudo-Euclidean vector spaces, standard decompositions and `co(V)`.
//!
//! Signatures count minus signs first: `(k, l)` has `k` negative and `l`
//! positive directions. Vectors and covectors are plain coefficient slices in
//! the space's basis; a covector `ξ` acts by `ξ(X) = Σ ξ_i X_i`.

use crate::error::{check_dim, Error, Result};
use crate::linalg::{dot, Mat};
use crate::scalar::{Field, RealField};

#[derive(Clone, Debug, PartialEq)]
pub struct PseudoEuclideanSpace<F> {
    gram: Mat<F>,
    gram_inv: Mat<F>,
    k: usize,
    l: usize,
    orientation: i8,
}

impl<F: RealField> PseudoEuclideanSpace<F> {
    pub fn new(gram: Mat<F>, orientation: i8) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::Invalid("Gram matrix is not symmetric".into()));
        }
        if orientation != 1 && orientation != -1 {
            return Err(Error::Invalid("orientation must be +1 or -1".into()));
        }
        let gram_inv = gram
            .inverse()
            .ok_or_else(|| Error::Singular("Gram matrix is degenerate".into()))?;
        let (k, zero, l) = gram.inertia()?;
        if zero != 0 {
            return Err(Error::Singular("Gram matrix is degenerate".into()));
        }
        Ok(PseudoEuclideanSpace { gram, gram_inv, k, l, orientation })
    }

    /// Like [`new`](Self::new) but additionally insists on a signature.
    pub fn with_signature(gram: Mat<F>, k: usize, l: usize) -> Result<Self> {
        let s = Self::new(gram, 1)?;
        if (s.k, s.l) != (k, l) {
            return Err(Error::Invalid(format!(
                "Gram matrix has signature ({}, {}), expected ({k}, {l})",
                s.k, s.l
            )));
        }
        Ok(s)
    }

    /// Sylvester inertia recomputed from the Gram matrix.
    pub fn signature_check(&self) -> bool {
        self.gram.inertia().map(|(k, z, l)| (k, z, l) == (self.k, 0, self.l)).unwrap_or(false)
    }
}

impl<F: Field> PseudoEuclideanSpace<F> {
    pub fn n(&self) -> usize {
        self.gram.rows()
    }
    pub fn signature(&self) -> (usize, usize) {
        (self.k, self.l)
    }
    pub fn gram(&self) -> &Mat<F> {
        &self.gram
    }
    pub fn gram_inv(&self) -> &Mat<F> {
        &self.gram_inv
    }
    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    fn check(&self, v: &[F]) -> Result<()> {
        check_dim(self.n(), v.len())
    }

    /// `Xᵗ G Y`.
    pub fn inner(&self, x: &[F], y: &[F]) -> Result<F> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.gram.bilinear(x, y))
    }

    /// The covector `g∘X`.
    pub fn lower(&self, x: &[F]) -> Result<Vec<F>> {
        self.check(x)?;
        Ok(self.gram.mul_vec(x))
    }

    /// The vector `g⁻¹ξ`.
    pub fn raise(&self, xi: &[F]) -> Result<Vec<F>> {
        self.check(xi)?;
        Ok(self.gram_inv.mul_vec(xi))
    }

    /// `g⁻¹(ξ, η)`.
    pub fn inner_cov(&self, xi: &[F], eta: &[F]) -> Result<F> {
        self.check(xi)?;
        self.check(eta)?;
        Ok(self.gram_inv.bilinear(xi, eta))
    }

    /// `X ∧ Y : Z ↦ g(Y,Z)X − g(X,Z)Y`.
    pub fn wedge_vv(&self, x: &[F], y: &[F]) -> Result<Mat<F>> {
        let gx = self.lower(x)?;
        let gy = self.lower(y)?;
        Ok(outer(x, &gy).sub(&outer(y, &gx)))
    }

    /// `X ∧ ξ = X ⊗ ξ − g⁻¹ξ ⊗ gX`.
    pub fn wedge_vcov(&self, x: &[F], xi: &[F]) -> Result<ConformalElement<F>> {
        let gx = self.lower(x)?;
        let sharp = self.raise(xi)?;
        Ok(ConformalElement::skew_only(outer(x, xi).sub(&outer(&sharp, &gx))))
    }

    /// `T^ξ_X = ξ(X)·id + X ∧ ξ`.
    pub fn t_xi_action(&self, xi: &[F], x: &[F]) -> Result<ConformalElement<F>> {
        let w = self.wedge_vcov(x, xi)?;
        Ok(ConformalElement { scalar: dot(xi, x), skew: w.skew })
    }

    /// Whether `G A + Aᵗ G = 0`.
    pub fn is_skew(&self, a: &Mat<F>) -> bool {
        a.rows() == self.n() && a.cols() == self.n() && self.skew_defect(a).is_zero()
    }

    pub fn skew_defect(&self, a: &Mat<F>) -> Mat<F> {
        self.gram.mul(a).add(&a.transpose().mul(&self.gram))
    }

    /// Whether `A ∈ co(V) = R·id ⊕ so(V)`.
    pub fn is_conformal(&self, a: &Mat<F>) -> bool {
        ConformalElement::decompose(self, a).is_ok()
    }

    /// The skew maps `e_i ∧ e_j`, `i < j`: a basis of `so(V)`.
    pub fn so_basis(&self) -> Vec<Mat<F>> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                out.push(
                    self.wedge_vv(&crate::linalg::unit(n, i), &crate::linalg::unit(n, j))
                        .expect("basis vectors have the right length"),
                );
            }
        }
        out
    }
}

pub fn outer<F: Field>(x: &[F], y: &[F]) -> Mat<F> {
    Mat::from_fn(x.len(), y.len(), |i, j| x[i].clone() * y[j].clone())
}

/// An element `λ·id + C` of `co(V)` with `C` skew.
#[derive(Clone, Debug, PartialEq)]
pub struct ConformalElement<F> {
    pub scalar: F,
    pub skew: Mat<F>,
}

impl<F: Field> ConformalElement<F> {
    pub fn skew_only(skew: Mat<F>) -> Self {
        ConformalElement { scalar: F::zero(), skew }
    }

    pub fn scalar_only(n: usize, scalar: F) -> Self {
        ConformalElement { scalar, skew: Mat::zeros(n, n) }
    }

    /// Splits an endomorphism as `tr(A)/n · id + C`, insisting `C` be skew.
    pub fn decompose(space: &PseudoEuclideanSpace<F>, a: &Mat<F>) -> Result<Self> {
        let n = space.n();
        check_dim(n, a.rows())?;
        check_dim(n, a.cols())?;
        let inv_n = F::from_i64(n as i64).inv().expect("n > 0");
        let scalar = a.trace() * inv_n;
        let skew = a.sub(&Mat::identity(n).scale(&scalar));
        let defect = space.skew_defect(&skew);
        if let Some((i, j)) = first_nonzero(&defect) {
            return Err(Error::NotConformal(format!(
                "(gC + Cᵗg)[{i},{j}] = {} after removing the trace part",
                defect[(i, j)]
            )));
        }
        Ok(ConformalElement { scalar, skew })
    }

    pub fn matrix(&self) -> Mat<F> {
        let n = self.skew.rows();
        self.skew.add(&Mat::identity(n).scale(&self.scalar))
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() && self.skew.is_zero()
    }

    pub fn neg(&self) -> Self {
        ConformalElement { scalar: -self.scalar.clone(), skew: self.skew.neg() }
    }
}

fn first_nonzero<F: Field>(m: &Mat<F>) -> Option<(usize, usize)> {
    (0..m.rows()).flat_map(|i| (0..m.cols()).map(move |j| (i, j))).find(|&(i, j)| !m[(i, j)].is_zero())
}

/// `V = P + E + Q` with `P`, `Q` isotropic, `g(p_i, q_j) = ν δ_ij` and `E = (P+Q)^⊥`.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardDecomposition<F> {
    pub space: PseudoEuclideanSpace<F>,
    pub p: Vec<usize>,
    pub e: Vec<usize>,
    pub q: Vec<usize>,
    pub nu: i64,
}

impl<F: RealField> StandardDecomposition<F> {
    /// Validates a partition of the basis; the error carries the first failing identity.
    pub fn new(
        space: PseudoEuclideanSpace<F>,
        p: Vec<usize>,
        e: Vec<usize>,
        q: Vec<usize>,
        nu: i64,
    ) -> Result<Self> {
        let n = space.n();
        if nu != 1 && nu != 2 {
            return Err(Error::Invalid(format!("pairing normalization must be 1 or 2, got {nu}")));
        }
        if p.len() != q.len() {
            return Err(Error::NotStandard(format!("dim P = {} but dim Q = {}", p.len(), q.len())));
        }
        let mut seen = vec![false; n];
        for &i in p.iter().chain(&e).chain(&q) {
            if i >= n || seen[i] {
                return Err(Error::NotStandard(format!("index {i} out of range or repeated")));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::NotStandard("parts do not cover the basis".into()));
        }
        let g = space.gram();
        let nu_f = F::from_i64(nu);
        let bad = |what: &str, i: usize, j: usize, v: &F| {
            Err(Error::NotStandard(format!("{what}: g(b{i}, b{j}) = {v}")))
        };
        for (a, &i) in p.iter().enumerate() {
            for (b, &j) in p.iter().enumerate() {
                if !g[(i, j)].is_zero() {
                    return bad("P not isotropic", i, j, &g[(i, j)]);
                }
                let (qi, qj) = (q[a], q[b]);
                if !g[(qi, qj)].is_zero() {
                    return bad("Q not isotropic", qi, qj, &g[(qi, qj)]);
                }
                let want = if a == b { nu_f.clone() } else { F::zero() };
                if g[(i, q[b])] != want {
                    return bad("pairing P×Q", i, q[b], &g[(i, q[b])]);
                }
            }
            for &j in &e {
                for &x in [i, q[a]].iter() {
                    if !g[(x, j)].is_zero() {
                        return bad("E not orthogonal to P+Q", x, j, &g[(x, j)]);
                    }
                }
            }
        }
        let ge = Mat::from_fn(e.len(), e.len(), |a, b| g[(e[a], e[b])].clone());
        if !e.is_empty() && ge.det().is_zero() {
            return Err(Error::NotStandard("g restricted to E is degenerate".into()));
        }
        Ok(StandardDecomposition { space, p, e, q, nu })
    }

    /// Builds the space with basis `(p_1..p_k, e_1..e_m, q_1..q_k)` and the given Gram block on `E`.
    pub fn build(k: usize, e_gram: &Mat<F>, nu: i64) -> Result<Self> {
        let m = e_gram.rows();
        let n = 2 * k + m;
        let nu_f = F::from_i64(nu);
        let gram = Mat::from_fn(n, n, |i, j| {
            if i < k && j == i + k + m || j < k && i == j + k + m {
                nu_f.clone()
            } else if (k..k + m).contains(&i) && (k..k + m).contains(&j) {
                e_gram[(i - k, j - k)].clone()
            } else {
                F::zero()
            }
        });
        let space = PseudoEuclideanSpace::new(gram, 1)?;
        Self::new(space, (0..k).collect(), (k..k + m).collect(), (k + m..n).collect(), nu)
    }

    /// Signature `(k, l)` with `E` positive definite (identity Gram), requiring `k ≤ l`.
    pub fn standard(k: usize, l: usize, nu: i64) -> Result<Self> {
        if k > l {
            return Err(Error::Invalid(format!("standard form needs k ≤ l, got ({k}, {l})")));
        }
        Self::build(k, &Mat::identity(l - k), nu)
    }
}

impl<F: Field> StandardDecomposition<F> {
    pub fn n(&self) -> usize {
        self.space.n()
    }
    pub fn k(&self) -> usize {
        self.p.len()
    }
    pub fn basis_vector(&self, i: usize) -> Vec<F> {
        crate::linalg::unit(self.n(), i)
    }
    pub fn p_vec(&self, a: usize) -> Vec<F> {
        self.basis_vector(self.p[a])
    }
    pub fn q_vec(&self, a: usize) -> Vec<F> {
        self.basis_vector(self.q[a])
    }
    pub fn e_vec(&self, a: usize) -> Vec<F> {
        self.basis_vector(self.e[a])
    }
    /// Labels `p1.., e1.., q1..` (without indices when a part is one-dimensional).
    pub fn labels(&self) -> Vec<String> {
        let mut out = vec![String::new(); self.n()];
        let name = |c: &str, a: usize, len: usize| if len == 1 { c.to_string() } else { format!("{c}{}", a + 1) };
        for (a, &i) in self.p.iter().enumerate() {
            out[i] = name("p", a, self.p.len());
        }
        for (a, &i) in self.e.iter().enumerate() {
            out[i] = format!("e{}", a + 1);
        }
        for (a, &i) in self.q.iter().enumerate() {
            out[i] = name("q", a, self.q.len());
        }
        out
    }
}
