//! Algebraic curvature tensors, the Ricci decomposition, and a Koszul-formula
//! curvature for left-invariant metrics on Lie algebras.
//!
//! Conventions, used everywhere:
//! `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]`,
//! `R_ijkl = g(R(e_i,e_j)e_k, e_l)`,
//! `Ric(Y,Z) = tr(X ↦ R(X,Y)Z)`.

use crate::error::{check_dim, Error, Result};
use crate::lie::FiniteLieAlgebra;
use crate::linalg::{unit, Mat};
use crate::pseudo::{PseudoEuclideanSpace, StandardDecomposition};
use crate::scalar::{Field, RealField};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymmetryReport {
    /// `R(X,Y) = −R(Y,X)`.
    pub antisymmetric_pair: bool,
    /// `g(R(X,Y)Z, W) = −g(R(X,Y)W, Z)`.
    pub skew_endomorphism: bool,
    /// `R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0`.
    pub first_bianchi: bool,
    /// `R_ijkl = R_klij` (implied by the other three).
    pub pair_exchange: bool,
    pub first_failure: Option<String>,
}

impl SymmetryReport {
    pub fn all(&self) -> bool {
        self.antisymmetric_pair && self.skew_endomorphism && self.first_bianchi && self.pair_exchange
    }
}

/// A `(1,3)` tensor `R^l_ijk` together with its lowering `R_ijkl`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor<F> {
    space: PseudoEuclideanSpace<F>,
    up: Vec<F>,
    low: Vec<F>,
    symmetry: SymmetryReport,
}

fn idx(n: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * n + j) * n + k) * n + l
}

fn quads(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n).flat_map(move |i| {
        (0..n).flat_map(move |j| (0..n).flat_map(move |k| (0..n).map(move |l| (i, j, k, l))))
    })
}

impl<F: Field> CurvatureTensor<F> {
    /// From `(0,4)` components `R_ijkl`; symmetries are checked and recorded.
    pub fn from_low(space: PseudoEuclideanSpace<F>, low: Vec<F>) -> Result<Self> {
        let n = space.n();
        check_dim(n.pow(4), low.len())?;
        let ginv = space.gram_inv().clone();
        let mut up = vec![F::zero(); n.pow(4)];
        for (i, j, k, l) in quads(n) {
            let mut acc = F::zero();
            for m in 0..n {
                let v = &low[idx(n, i, j, k, m)];
                if !v.is_zero() && !ginv[(l, m)].is_zero() {
                    acc = acc + ginv[(l, m)].clone() * v.clone();
                }
            }
            up[idx(n, i, j, k, l)] = acc;
        }
        Ok(Self::assemble(space, up, low))
    }

    /// From `(1,3)` components, index order `[i][j][k][l] = R^l_ijk`.
    pub fn from_up(space: PseudoEuclideanSpace<F>, up: Vec<F>) -> Result<Self> {
        let n = space.n();
        check_dim(n.pow(4), up.len())?;
        let g = space.gram().clone();
        let mut low = vec![F::zero(); n.pow(4)];
        for (i, j, k, l) in quads(n) {
            let mut acc = F::zero();
            for m in 0..n {
                let v = &up[idx(n, i, j, k, m)];
                if !v.is_zero() && !g[(m, l)].is_zero() {
                    acc = acc + g[(m, l)].clone() * v.clone();
                }
            }
            low[idx(n, i, j, k, l)] = acc;
        }
        Ok(Self::assemble(space, up, low))
    }

    /// From the endomorphisms `R(e_i, e_j)`.
    pub fn from_operators(space: PseudoEuclideanSpace<F>, op: impl Fn(usize, usize) -> Mat<F>) -> Result<Self> {
        let n = space.n();
        let mut up = vec![F::zero(); n.pow(4)];
        for i in 0..n {
            for j in 0..n {
                let m = op(i, j);
                check_dim(n, m.rows())?;
                for k in 0..n {
                    for l in 0..n {
                        up[idx(n, i, j, k, l)] = m[(l, k)].clone();
                    }
                }
            }
        }
        Self::from_up(space, up)
    }

    pub fn zero(space: PseudoEuclideanSpace<F>) -> Self {
        let n = space.n();
        Self::assemble(space, vec![F::zero(); n.pow(4)], vec![F::zero(); n.pow(4)])
    }

    fn assemble(space: PseudoEuclideanSpace<F>, up: Vec<F>, low: Vec<F>) -> Self {
        let mut t = CurvatureTensor { space, up, low, symmetry: SymmetryReport::default() };
        t.symmetry = t.check_symmetries();
        t
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }
    pub fn space(&self) -> &PseudoEuclideanSpace<F> {
        &self.space
    }
    pub fn symmetry(&self) -> &SymmetryReport {
        &self.symmetry
    }
    pub fn is_raw(&self) -> bool {
        !self.symmetry.all()
    }
    pub fn low(&self, i: usize, j: usize, k: usize, l: usize) -> &F {
        &self.low[idx(self.n(), i, j, k, l)]
    }
    pub fn up(&self, i: usize, j: usize, k: usize, l: usize) -> &F {
        &self.up[idx(self.n(), i, j, k, l)]
    }
    pub fn low_components(&self) -> &[F] {
        &self.low
    }
    pub fn up_components(&self) -> &[F] {
        &self.up
    }

    /// The endomorphism `R(e_i, e_j)`.
    pub fn operator(&self, i: usize, j: usize) -> Mat<F> {
        let n = self.n();
        Mat::from_fn(n, n, |l, k| self.up(i, j, k, l).clone())
    }

    /// `R(X, Y)` for arbitrary vectors.
    pub fn operator_on(&self, x: &[F], y: &[F]) -> Mat<F> {
        let n = self.n();
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                m = m.add(&self.operator(i, j).scale(&(x[i].clone() * y[j].clone())));
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.low.iter().all(Field::is_zero)
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    pub fn max_abs(&self) -> f64 {
        self.low.iter().map(Field::magnitude).fold(0.0, f64::max)
    }

    fn check_symmetries(&self) -> SymmetryReport {
        let n = self.n();
        let mut rep = SymmetryReport {
            antisymmetric_pair: true,
            skew_endomorphism: true,
            first_bianchi: true,
            pair_exchange: true,
            first_failure: None,
        };
        let tol = 1e-9 * self.max_abs().max(1.0);
        let nz = |v: F| !v.is_negligible(tol);
        for (i, j, k, l) in quads(n) {
            let r = self.low(i, j, k, l).clone();
            if nz(r.clone() + self.low(j, i, k, l).clone()) && rep.antisymmetric_pair {
                rep.antisymmetric_pair = false;
                rep.first_failure.get_or_insert(format!("R{:?} ≠ −R{:?}", [i, j, k, l], [j, i, k, l]));
            }
            if nz(r.clone() + self.low(i, j, l, k).clone()) && rep.skew_endomorphism {
                rep.skew_endomorphism = false;
                rep.first_failure.get_or_insert(format!("R{:?} ≠ −R{:?}", [i, j, k, l], [i, j, l, k]));
            }
            if nz(r.clone() - self.low(k, l, i, j).clone()) && rep.pair_exchange {
                rep.pair_exchange = false;
                rep.first_failure.get_or_insert(format!("R{:?} ≠ R{:?}", [i, j, k, l], [k, l, i, j]));
            }
            let cyc = r + self.low(j, k, i, l).clone() + self.low(k, i, j, l).clone();
            if nz(cyc) && rep.first_bianchi {
                rep.first_bianchi = false;
                rep.first_failure.get_or_insert(format!("Bianchi fails at {:?}", [i, j, k, l]));
            }
        }
        rep
    }

    /// `Ric(Y,Z) = Σ g^{ae} R_{aYZe}`.
    pub fn ricci(&self) -> Mat<F> {
        let n = self.n();
        Mat::from_fn(n, n, |y, z| (0..n).fold(F::zero(), |acc, a| acc + self.up(a, y, z, a).clone()))
    }

    pub fn scalar_curvature(&self) -> F {
        let ric = self.ricci();
        self.space.gram_inv().mul(&ric).trace()
    }

    pub fn scale(&self, c: &F) -> Self {
        CurvatureTensor {
            space: self.space.clone(),
            up: self.up.iter().map(|x| x.clone() * c.clone()).collect(),
            low: self.low.iter().map(|x| x.clone() * c.clone()).collect(),
            symmetry: self.symmetry.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let low = self.low.iter().zip(&o.low).map(|(a, b)| a.clone() - b.clone()).collect();
        Self::from_low(self.space.clone(), low).expect("same shape")
    }

    pub fn add(&self, o: &Self) -> Self {
        let low = self.low.iter().zip(&o.low).map(|(a, b)| a.clone() + b.clone()).collect();
        Self::from_low(self.space.clone(), low).expect("same shape")
    }

    /// Same `(1,3)` tensor with a new metric on the same basis.
    pub fn with_space(&self, space: PseudoEuclideanSpace<F>) -> Result<Self> {
        Self::from_up(space, self.up.clone())
    }

    /// Push forward the `(1,3)` tensor along `L: V → V'`, lowering with the target metric.
    pub fn transport(&self, target: PseudoEuclideanSpace<F>, l: &Mat<F>) -> Result<Self> {
        let n = self.n();
        check_dim(n, target.n())?;
        let linv = l.inverse().ok_or_else(|| Error::Singular("transport map".into()))?;
        // T'(e_i, e_j) = L R(L⁻¹e_i, L⁻¹e_j) L⁻¹
        let ops: Vec<Vec<Mat<F>>> = (0..n).map(|a| (0..n).map(|b| self.operator(a, b)).collect()).collect();
        CurvatureTensor::from_operators(target, |i, j| {
            let mut m = Mat::zeros(n, n);
            for a in 0..n {
                if linv[(a, i)].is_zero() {
                    continue;
                }
                for b in 0..n {
                    if linv[(b, j)].is_zero() {
                        continue;
                    }
                    m = m.add(&ops[a][b].scale(&(linv[(a, i)].clone() * linv[(b, j)].clone())));
                }
            }
            l.mul(&m).mul(&linv)
        })
    }

    /// Derivation action `(M·R)(X,Y)Z = M R(X,Y)Z − R(MX,Y)Z − R(X,MY)Z − R(X,Y)MZ`.
    pub fn act(&self, m: &Mat<F>) -> Self {
        let n = self.n();
        let ops: Vec<Vec<Mat<F>>> = (0..n).map(|a| (0..n).map(|b| self.operator(a, b)).collect()).collect();
        CurvatureTensor::from_operators(self.space.clone(), |i, j| {
            let mut out = m.commutator(&ops[i][j]);
            for a in 0..n {
                if !m[(a, i)].is_zero() {
                    out = out.sub(&ops[a][j].scale(&m[(a, i)]));
                }
                if !m[(a, j)].is_zero() {
                    out = out.sub(&ops[i][a].scale(&m[(a, j)]));
                }
            }
            out
        })
        .expect("same shape")
    }
}

/// `(h⊙k)(x,y,z,w) = h(x,w)k(y,z) + h(y,z)k(x,w) − h(x,z)k(y,w) − h(y,w)k(x,z)`.
pub fn kulkarni_nomizu<F: Field>(h: &Mat<F>, k: &Mat<F>) -> Vec<F> {
    let n = h.rows();
    let mut out = vec![F::zero(); n.pow(4)];
    for (x, y, z, w) in quads(n) {
        out[idx(n, x, y, z, w)] = h[(x, w)].clone() * k[(y, z)].clone() + h[(y, z)].clone() * k[(x, w)].clone()
            - h[(x, z)].clone() * k[(y, w)].clone()
            - h[(y, w)].clone() * k[(x, z)].clone();
    }
    out
}

#[derive(Clone, Debug)]
pub struct RicciDecomposition<F> {
    pub scalar_part: CurvatureTensor<F>,
    pub traceless_ricci_part: CurvatureTensor<F>,
    pub weyl: CurvatureTensor<F>,
}

/// `R = s/(2n(n−1)) g⊙g + Ric₀⊙g/(n−2) + W`.
pub fn ricci_decompose<F: Field>(r: &CurvatureTensor<F>) -> Result<RicciDecomposition<F>> {
    if r.is_raw() {
        return Err(Error::RawTensor(
            r.symmetry.first_failure.clone().unwrap_or_else(|| "symmetry check failed".into()),
        ));
    }
    let n = r.n();
    if n < 3 {
        return Err(Error::Invalid(format!("Ricci decomposition needs n ≥ 3, got {n}")));
    }
    let g = r.space.gram().clone();
    let nf = F::from_i64(n as i64);
    let s = r.scalar_curvature();
    let ric0 = r.ricci().sub(&g.scale(&(s.clone() * nf.inv().expect("n > 0"))));
    let c_scalar = s * F::from_i64((2 * n * (n - 1)) as i64).inv().expect("n > 1");
    let gg = kulkarni_nomizu(&g, &g);
    let scalar_low: Vec<F> = gg.into_iter().map(|x| x * c_scalar.clone()).collect();
    let c_tl = F::from_i64((n - 2) as i64).inv().expect("n > 2");
    let tl_low: Vec<F> = kulkarni_nomizu(&ric0, &g).into_iter().map(|x| x * c_tl.clone()).collect();
    let scalar_part = CurvatureTensor::from_low(r.space.clone(), scalar_low)?;
    let traceless_ricci_part = CurvatureTensor::from_low(r.space.clone(), tl_low)?;
    let weyl = r.sub(&scalar_part).sub(&traceless_ricci_part);
    Ok(RicciDecomposition { scalar_part, traceless_ricci_part, weyl })
}

pub fn weyl<F: Field>(r: &CurvatureTensor<F>) -> Result<CurvatureTensor<F>> {
    Ok(ricci_decompose(r)?.weyl)
}

/// Membership in the space of Weyl-type tensors: curvature symmetries and all traces zero.
pub fn is_weyl_member<F: Field>(w: &CurvatureTensor<F>) -> bool {
    !w.is_raw() && w.ricci().is_zero()
}

/// Weyl part vanishes; defined for `n ≥ 4`.
pub fn is_conformally_flat<F: Field>(r: &CurvatureTensor<F>) -> Result<bool> {
    if r.n() < 4 {
        return Err(Error::Invalid(format!("conformal flatness via Weyl needs n ≥ 4, got {}", r.n())));
    }
    Ok(weyl(r)?.is_zero())
}

/// Cahen–Wallach curvature `R_S = Σ_i (q∧Se_i) ∨ (q∧e_i)` on `R^{1,n−1}` with
/// basis `(p, e_1.., q)`, `g(p,q) = 1`, `E` Euclidean; `a∨b = a⊗b + b⊗a`.
pub fn curvature_cw<F: RealField>(s: &Mat<F>) -> Result<CurvatureTensor<F>> {
    if !s.is_square() || !s.is_symmetric() {
        return Err(Error::Invalid("S must be a symmetric square matrix".into()));
    }
    let dec = StandardDecomposition::<F>::standard(1, s.rows() + 1, 1)?;
    let sp = dec.space.clone();
    let n = sp.n();
    let q = dec.q_vec(0);
    let mut b1 = Vec::new();
    let mut b2 = Vec::new();
    for i in 0..s.rows() {
        let se: Vec<F> = (0..n)
            .map(|r| if (1..=s.rows()).contains(&r) { s[(r - 1, i)].clone() } else { F::zero() })
            .collect();
        b1.push(sp.wedge_vv(&q, &se)?);
        b2.push(sp.wedge_vv(&q, &dec.e_vec(i))?);
    }
    let g = sp.gram().clone();
    // a bivector B acts as the 2-form (x, y) ↦ g(Bx, y)
    let form = |b: &Mat<F>, x: usize, y: usize| g.bilinear(&b.col(x), &unit(n, y));
    let r = CurvatureTensor::from_operators(sp, |x, y| {
        let mut m = Mat::zeros(n, n);
        for i in 0..b1.len() {
            m = m.add(&b2[i].scale(&form(&b1[i], x, y))).add(&b1[i].scale(&form(&b2[i], x, y)));
        }
        m
    })?;
    if r.is_raw() {
        return Err(Error::RawTensor(r.symmetry().first_failure.clone().unwrap_or_default()));
    }
    Ok(r)
}

/// Levi-Civita curvature of the left-invariant metric `⟨·,·⟩ = metric` on a Lie algebra.
pub fn koszul_curvature<F: RealField>(l: &FiniteLieAlgebra<F>, metric: &Mat<F>) -> Result<CurvatureTensor<F>> {
    let space = PseudoEuclideanSpace::new(metric.clone(), 1)?;
    let n = l.dim();
    check_dim(n, space.n())?;
    let gam = levi_civita(l, &space);
    CurvatureTensor::from_operators(space, |i, j| {
        let c = l.basis_bracket(i, j);
        let mut r = gam[i].commutator(&gam[j]);
        for (k, ck) in c.iter().enumerate() {
            if !ck.is_zero() {
                r = r.sub(&gam[k].scale(ck));
            }
        }
        r
    })
}

/// `Γ_i` with `Γ_i e_j = ∇_{e_i} e_j`, from
/// `2⟨∇_x y, z⟩ = ⟨[x,y],z⟩ − ⟨[y,z],x⟩ + ⟨[z,x],y⟩`.
pub fn levi_civita<F: Field>(l: &FiniteLieAlgebra<F>, space: &PseudoEuclideanSpace<F>) -> Vec<Mat<F>> {
    let n = l.dim();
    let g = space.gram();
    let half = F::ratio(1, 2);
    let br: Vec<Vec<Vec<F>>> = (0..n).map(|i| (0..n).map(|j| l.basis_bracket(i, j)).collect()).collect();
    let ip = |v: &[F], k: usize| g.bilinear(v, &unit(n, k));
    (0..n)
        .map(|i| {
            let cols: Vec<Vec<F>> = (0..n)
                .map(|j| {
                    let lowered: Vec<F> = (0..n)
                        .map(|k| (ip(&br[i][j], k) - ip(&br[j][k], i) + ip(&br[k][i], j)) * half.clone())
                        .collect();
                    space.gram_inv().mul_vec(&lowered)
                })
                .collect();
            Mat::from_cols(n, &cols)
        })
        .collect()
}
