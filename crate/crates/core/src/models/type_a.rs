//! Type-A Lorentzian algebras `g = Rq + E + Rp + RD + k + p∧E + RT`, graded by `D`
//! in degrees `−2, −1, 0, 0, 0, 1, 2`.
//!
//! Brackets (with `f_e = p∧e`):
//! `[e, e'] = 2⟨Je, e'⟩q`, `[p, e] = Ae`, `[p, f_e] = f_{Ae}`, `[C, e] = Ce`, `[C, f_e] = f_{Ce}`,
//! `[T, q] = −D`, `[T, e] = −f_e`, `[f_e, q] = −e`,
//! `[f_e, e'] = ⟨e, e'⟩p + ⟨Je, e'⟩D + K_{e,e'}`, `[f_e, f_e'] = 2⟨Je, e'⟩T`.

use crate::error::{Error, Result};
use crate::lie::{FiniteLieAlgebra, GradedStructure};
use crate::linalg::{unit, vzero, Coords, Mat, DEFAULT_TOL};
use crate::models::so_conformal::build_so_conformal;
use crate::pseudo::PseudoEuclideanSpace;
use crate::scalar::{int, Field, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct TypeALorentzData {
    /// Positive definite Gram matrix of `E`.
    pub e_gram: Mat<Rational>,
    pub j: Mat<Rational>,
    pub a: Mat<Rational>,
    /// Basis of `k ⊆ so(E)`.
    pub k_basis: Vec<Mat<Rational>>,
}

/// `J` with `J e_{2a} = e_{2a+1}` on `R^{2m}`.
pub fn standard_complex_structure(m: usize) -> Mat<Rational> {
    let mut j = Mat::zeros(2 * m, 2 * m);
    for a in 0..m {
        j[(2 * a + 1, 2 * a)] = int(1);
        j[(2 * a, 2 * a + 1)] = int(-1);
    }
    j
}

/// `su(E, J)`: trace-free complex-linear skew maps, realified.
pub fn su_of_complex_structure(m: usize) -> Vec<Mat<Rational>> {
    let n = 2 * m;
    // complex entry z at (a, b) realified as [[x, −y], [y, x]]
    let put = |mat: &mut Mat<Rational>, a: usize, b: usize, x: i64, y: i64| {
        mat[(2 * a, 2 * b)] = int(x);
        mat[(2 * a, 2 * b + 1)] = int(-y);
        mat[(2 * a + 1, 2 * b)] = int(y);
        mat[(2 * a + 1, 2 * b + 1)] = int(x);
    };
    let mut out = Vec::new();
    for a in 0..m.saturating_sub(1) {
        let mut x = Mat::zeros(n, n);
        put(&mut x, a, a, 0, 1);
        put(&mut x, a + 1, a + 1, 0, -1);
        out.push(x);
    }
    for a in 0..m {
        for b in a + 1..m {
            let mut x = Mat::zeros(n, n);
            put(&mut x, a, b, 1, 0);
            put(&mut x, b, a, -1, 0);
            out.push(x);
            let mut x = Mat::zeros(n, n);
            put(&mut x, a, b, 0, 1);
            put(&mut x, b, a, 0, 1);
            out.push(x);
        }
    }
    out
}

impl TypeALorentzData {
    pub fn new(e_gram: Mat<Rational>, j: Mat<Rational>, a: Mat<Rational>, k_basis: Vec<Mat<Rational>>) -> Result<Self> {
        let n = e_gram.rows();
        let sp = PseudoEuclideanSpace::new(e_gram.clone(), 1)?;
        if sp.signature().0 != 0 {
            return Err(Error::Invalid("E must be positive definite".into()));
        }
        if j.rows() != n || a.rows() != n || k_basis.iter().any(|c| c.rows() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: j.rows() });
        }
        if !sp.is_skew(&j) {
            return Err(Error::Invalid("J must be skew".into()));
        }
        if !j.is_zero() && !j.mul(&j).add(&Mat::identity(n)).is_zero() {
            return Err(Error::Invalid("J must satisfy J² = −id (or vanish)".into()));
        }
        for (i, c) in k_basis.iter().enumerate() {
            if !sp.is_skew(c) {
                return Err(Error::Invalid(format!("k basis element {i} is not skew")));
            }
        }
        Ok(TypeALorentzData { e_gram, j, a, k_basis })
    }

    /// `J` standard on `R^{2m}`, `A = λJ` with `λ = 1 + 2/m`, `k = su(E, J)`.
    pub fn hermitian(m: usize) -> Result<Self> {
        let j = standard_complex_structure(m);
        let lam = Rational::ratio(m as i64 + 2, m as i64);
        Self::new(Mat::identity(2 * m), j.clone(), j.scale(&lam), su_of_complex_structure(m))
    }

    /// `J = 0`, `A = 0`, `k = 0` on Euclidean `R^n`.
    pub fn flat(n: usize) -> Result<Self> {
        Self::new(Mat::identity(n), Mat::zeros(n, n), Mat::zeros(n, n), Vec::new())
    }

    pub fn dim_e(&self) -> usize {
        self.e_gram.rows()
    }

    fn space(&self) -> PseudoEuclideanSpace<Rational> {
        PseudoEuclideanSpace::new(self.e_gram.clone(), 1).expect("validated")
    }

    fn ip(&self, x: &[Rational], y: &[Rational]) -> Rational {
        self.e_gram.bilinear(x, y)
    }

    /// Right-hand side of `K_{e,e'}e'' − K_{e,e''}e' = −2⟨Je',e''⟩e + ⟨Je,e'⟩e'' − ⟨Je,e''⟩e'
    /// − ⟨e,e'⟩Ae'' + ⟨e,e''⟩Ae'`.
    pub fn star_rhs(&self, e: &[Rational], e1: &[Rational], e2: &[Rational]) -> Vec<Rational> {
        let j = &self.j;
        let a = &self.a;
        let n = e.len();
        let terms = [
            (self.ip(&j.mul_vec(e1), e2) * int(-2), e.to_vec()),
            (self.ip(&j.mul_vec(e), e1), e2.to_vec()),
            (-self.ip(&j.mul_vec(e), e2), e1.to_vec()),
            (-self.ip(e, e1), a.mul_vec(e2)),
            (self.ip(e, e2), a.mul_vec(e1)),
        ];
        terms.iter().fold(vzero(n), |acc, (c, v)| (0..n).map(|i| acc[i].clone() + c.clone() * v[i].clone()).collect())
    }
}

/// Table `K[i][j] = K_{e_i, e_j}` as endomorphisms of `E`.
pub type KTable = Vec<Vec<Mat<Rational>>>;

/// `K_{e,e'} = Je∧e' − e∧Je' + ⟨e,e'⟩(J − A)`.
pub fn closed_form_k(data: &TypeALorentzData) -> KTable {
    let n = data.dim_e();
    let sp = data.space();
    let ja = data.j.sub(&data.a);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|l| {
                    let (e, f) = (unit(n, i), unit(n, l));
                    let w1 = sp.wedge_vv(&data.j.mul_vec(&e), &f).expect("dimension n");
                    let w2 = sp.wedge_vv(&e, &data.j.mul_vec(&f)).expect("dimension n");
                    w1.sub(&w2).add(&ja.scale(&data.ip(&e, &f)))
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SolveKReport {
    pub closed_form: KTable,
    /// Dimension of the affine solution space of `(*)` over symmetric `so(E)`-valued `K`;
    /// `None` when `(*)` has no solution.
    pub solution_dim: Option<usize>,
    pub brute_force: Option<KTable>,
    pub closed_form_satisfies_star: bool,
    /// `K_{Ae,e'} + K_{e,Ae'} = 0` for the closed form.
    pub closed_form_satisfies_double_star: bool,
    /// Unique solution equal to the closed form.
    pub unique_and_equal: bool,
}

/// Whether a table satisfies `(*)` on all basis triples.
pub fn satisfies_star(data: &TypeALorentzData, k: &KTable) -> bool {
    let n = data.dim_e();
    (0..n).all(|i| {
        (0..n).all(|j| {
            (0..n).all(|l| {
                let lhs: Vec<Rational> = {
                    let a = k[i][j].mul_vec(&unit(n, l));
                    let b = k[i][l].mul_vec(&unit(n, j));
                    (0..n).map(|c| a[c].clone() - b[c].clone()).collect()
                };
                lhs == data.star_rhs(&unit(n, i), &unit(n, j), &unit(n, l))
            })
        })
    })
}

/// Closed-form `K` plus a brute-force solve of `(*)` for symmetric `K: E × E → so(E)`.
pub fn solve_k(data: &TypeALorentzData) -> Result<SolveKReport> {
    let n = data.dim_e();
    let so = data.space().so_basis();
    let r = so.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let pidx = |i: usize, j: usize| pairs.iter().position(|&p| p == (i.min(j), i.max(j))).expect("pair");
    let unknowns = pairs.len() * r;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                if j == l {
                    continue;
                }
                let b = data.star_rhs(&unit(n, i), &unit(n, j), &unit(n, l));
                for c in 0..n {
                    let mut row: Vec<Rational> = vzero(unknowns);
                    for s in 0..r {
                        row[pidx(i, j) * r + s] = row[pidx(i, j) * r + s].clone() + so[s][(c, l)].clone();
                        row[pidx(i, l) * r + s] = row[pidx(i, l) * r + s].clone() - so[s][(c, j)].clone();
                    }
                    rows.push(row);
                    rhs.push(b[c].clone());
                }
            }
        }
    }
    let m = Mat::from_rows(rows)?;
    let rank = m.rank(DEFAULT_TOL);
    let table_of = |x: &[Rational]| -> KTable {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..r).fold(Mat::zeros(n, n), |acc, s| acc.add(&so[s].scale(&x[pidx(i, j) * r + s]))))
                    .collect()
            })
            .collect()
    };
    let brute_force = m.solve(&rhs, DEFAULT_TOL).map(|x: Vec<Rational>| table_of(&x));
    let solution_dim = brute_force.as_ref().map(|_| unknowns - rank);
    let closed_form = closed_form_k(data);
    let closed_form_satisfies_star = satisfies_star(data, &closed_form);
    let closed_form_satisfies_double_star = (0..n).all(|i| {
        (0..n).all(|j| {
            let (e, f) = (unit(n, i), unit(n, j));
            let lhs = apply_k(&closed_form, &data.a.mul_vec(&e), &f).add(&apply_k(&closed_form, &e, &data.a.mul_vec(&f)));
            lhs.is_zero()
        })
    });
    let unique_and_equal = solution_dim == Some(0) && brute_force.as_ref() == Some(&closed_form);
    Ok(SolveKReport {
        closed_form,
        solution_dim,
        brute_force,
        closed_form_satisfies_star,
        closed_form_satisfies_double_star,
        unique_and_equal,
    })
}

/// `K_{x,y}` by bilinearity.
pub fn apply_k(k: &KTable, x: &[Rational], y: &[Rational]) -> Mat<Rational> {
    let n = x.len();
    let mut out = Mat::zeros(n, n);
    for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            out = out.add(&k[i][j].scale(&(xi.clone() * yj.clone())));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct TypeAModel {
    pub data: TypeALorentzData,
    pub k: KTable,
    pub algebra: FiniteLieAlgebra<Rational>,
    pub grading: GradedStructure<Rational>,
}

impl TypeAModel {
    pub fn q(&self) -> usize {
        0
    }
    pub fn e(&self, i: usize) -> usize {
        1 + i
    }
    pub fn p(&self) -> usize {
        1 + self.data.dim_e()
    }
    pub fn d(&self) -> usize {
        self.p() + 1
    }
    pub fn kk(&self, c: usize) -> usize {
        self.d() + 1 + c
    }
    pub fn f(&self, i: usize) -> usize {
        self.d() + 1 + self.data.k_basis.len() + i
    }
    pub fn t(&self) -> usize {
        self.algebra.dim() - 1
    }
}

/// Assembles the bracket table for a given `K` without checking Jacobi.
pub fn assemble_type_a(data: &TypeALorentzData, k: &KTable) -> Result<TypeAModel> {
    let n = data.dim_e();
    let r = data.k_basis.len();
    let mut labels = vec!["q".to_string()];
    labels.extend((1..=n).map(|i| format!("e{i}")));
    labels.extend(["p".to_string(), "D".to_string()]);
    labels.extend((1..=r).map(|c| format!("k{c}")));
    labels.extend((1..=n).map(|i| format!("p^e{i}")));
    labels.push("T".into());
    let dim = labels.len();
    let mut model = TypeAModel {
        data: data.clone(),
        k: k.clone(),
        algebra: FiniteLieAlgebra::new(labels),
        grading: GradedStructure { spaces: Default::default(), basis_degrees: None, grading_element: None },
    };
    let kc = if r > 0 {
        Some(Coords::new(n * n, &data.k_basis.iter().map(Mat::flatten).collect::<Vec<_>>(), DEFAULT_TOL)?)
    } else {
        None
    };
    let in_k = |x: &Mat<Rational>, what: &str| -> Result<Vec<Rational>> {
        match &kc {
            Some(c) => c.coords(&x.flatten()).ok_or_else(|| Error::NotInSpan(format!("{what} is not in k"))),
            None if x.is_zero() => Ok(Vec::new()),
            None => Err(Error::NotInSpan(format!("{what} ≠ 0 but k = 0"))),
        }
    };
    let (q, p, d, t) = (model.q(), model.p(), model.d(), model.t());
    let idx_e: Vec<usize> = (0..n).map(|i| model.e(i)).collect();
    let idx_f: Vec<usize> = (0..n).map(|i| model.f(i)).collect();
    let idx_k: Vec<usize> = (0..r).map(|c| model.kk(c)).collect();
    let spread = |v: &[Rational], at: &[usize]| {
        let mut out = vzero(dim);
        for (x, &i) in v.iter().zip(at) {
            out[i] = x.clone();
        }
        out
    };
    let sc = |c: Rational, i: usize| {
        let mut v = vzero(dim);
        v[i] = c;
        v
    };
    let mut degrees = vec![0i64; dim];
    degrees[q] = -2;
    for i in 0..n {
        degrees[idx_e[i]] = -1;
        degrees[idx_f[i]] = 1;
    }
    degrees[t] = 2;
    let alg = &mut model.algebra;
    for x in (0..dim).filter(|&x| x != d && degrees[x] != 0) {
        alg.set_bracket(d, x, &sc(int(degrees[x]), x))?;
    }
    let jm = &data.j;
    for i in 0..n {
        let ei = unit(n, i);
        let jei = jm.mul_vec(&ei);
        for j in i + 1..n {
            alg.set_bracket(idx_e[i], idx_e[j], &sc(data.ip(&jei, &unit(n, j)) * int(2), q))?;
            alg.set_bracket(idx_f[i], idx_f[j], &sc(data.ip(&jei, &unit(n, j)) * int(2), t))?;
        }
        let aei = data.a.mul_vec(&ei);
        alg.set_bracket(p, idx_e[i], &spread(&aei, &idx_e))?;
        alg.set_bracket(p, idx_f[i], &spread(&aei, &idx_f))?;
        for (c, kb) in data.k_basis.iter().enumerate() {
            let kei = kb.mul_vec(&ei);
            alg.set_bracket(idx_k[c], idx_e[i], &spread(&kei, &idx_e))?;
            alg.set_bracket(idx_k[c], idx_f[i], &spread(&kei, &idx_f))?;
        }
        alg.set_bracket(t, idx_e[i], &sc(int(-1), idx_f[i]))?;
        alg.set_bracket(idx_f[i], q, &sc(int(-1), idx_e[i]))?;
        for j in 0..n {
            let ej = unit(n, j);
            let mut v = vzero(dim);
            v[p] = data.ip(&ei, &ej);
            v[d] = data.ip(&jei, &ej);
            for (c, x) in in_k(&k[i][j], &format!("K(e{}, e{})", i + 1, j + 1))?.into_iter().enumerate() {
                v[idx_k[c]] = x;
            }
            alg.set_bracket(idx_f[i], idx_e[j], &v)?;
        }
    }
    alg.set_bracket(t, q, &sc(int(-1), d))?;
    for a in 0..r {
        for b in a + 1..r {
            let c = data.k_basis[a].commutator(&data.k_basis[b]);
            let co = in_k(&c, &format!("[k{}, k{}]", a + 1, b + 1))?;
            alg.set_bracket(idx_k[a], idx_k[b], &spread(&co, &idx_k))?;
        }
    }
    let mut de = vzero(dim);
    de[d] = int(1);
    model.grading = GradedStructure::from_basis_degrees(&model.algebra, degrees, Some(de))?;
    Ok(model)
}

/// Builds with the closed-form `K` and requires the Jacobi identity.
pub fn build_type_a_lorentz(data: &TypeALorentzData) -> Result<TypeAModel> {
    let model = assemble_type_a(data, &closed_form_k(data))?;
    model.algebra.require_jacobi()?;
    Ok(model)
}

/// `(neg, pos)` inertia of the Killing form of `su(p, q)`.
pub fn su_killing_signature(p: usize, q: usize) -> (usize, usize) {
    (p * p + q * q - 1, 2 * p * q)
}

/// For `J = A = 0`, `k = 0`: the map `q ↦ q, e ↦ e, p ↦ p, D ↦ −id + p∧q, p^e ↦ p∧e,
/// T ↦ T^{g∘p}` into the flat model is a Lie algebra homomorphism.
pub fn flat_embedding_is_homomorphism(n: usize) -> Result<bool> {
    let model = build_type_a_lorentz(&TypeALorentzData::flat(n)?)?;
    let flat = build_so_conformal(1, n + 1)?;
    let dec = flat.decomposition.as_ref().expect("k ≤ l");
    let fd = flat.algebra.dim();
    let sp = &flat.space;
    let co_vec = |m: &Mat<Rational>| -> Result<Vec<Rational>> {
        let el = crate::models::so_conformal::FlatElement { v: vzero(flat.n()), co: m.clone(), cov: vzero(flat.n()) };
        flat.coordinates(&el)
    };
    let pv = dec.p_vec(0);
    let mut images = vec![vzero::<Rational>(fd); model.algebra.dim()];
    images[model.q()] = unit(fd, flat.v_index(dec.q[0]));
    images[model.p()] = unit(fd, flat.v_index(dec.p[0]));
    for i in 0..n {
        images[model.e(i)] = unit(fd, flat.v_index(dec.e[i]));
        images[model.f(i)] = co_vec(&sp.wedge_vv(&pv, &dec.e_vec(i))?)?;
    }
    images[model.d()] = co_vec(&Mat::identity(flat.n()).neg().add(&sp.wedge_vv(&pv, &dec.q_vec(0))?))?;
    images[model.t()] = unit(fd, flat.t_index(dec.p[0]));
    let dim = model.algebra.dim();
    for i in 0..dim {
        for j in i + 1..dim {
            let lhs = model.algebra.basis_bracket(i, j);
            let mapped = lhs
                .iter()
                .enumerate()
                .fold(vzero::<Rational>(fd), |acc, (k, c)| (0..fd).map(|t| acc[t].clone() + c.clone() * images[k][t].clone()).collect());
            if mapped != flat.algebra.bracket(&images[i], &images[j])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::su::build_su_graded;

    #[test]
    fn hermitian_family_is_su() {
        for m in [1, 2] {
            let data = TypeALorentzData::hermitian(m).unwrap();
            let model = build_type_a_lorentz(&data).unwrap();
            assert_eq!(model.algebra.dim(), (m + 2) * (m + 2) - 1);
            let (neg, _, pos) = model.algebra.killing_form().inertia().unwrap();
            assert_eq!((neg, pos), su_killing_signature(1, m + 1));
            let su = build_su_graded(0, m).unwrap();
            assert_eq!(su.algebra.killing_form().inertia().unwrap(), (neg, 0, pos));
        }
    }

    #[test]
    fn k_is_unique_and_closed_form() {
        for m in [1, 2] {
            let rep = solve_k(&TypeALorentzData::hermitian(m).unwrap()).unwrap();
            assert!(rep.closed_form_satisfies_star && rep.closed_form_satisfies_double_star);
            assert_eq!(rep.solution_dim, Some(0));
            assert!(rep.unique_and_equal);
        }
        let rep = solve_k(&TypeALorentzData::flat(3).unwrap()).unwrap();
        assert!(rep.unique_and_equal && rep.closed_form.iter().flatten().all(Mat::is_zero));
    }

    #[test]
    fn diagonal_k_formula() {
        // K_{e,e} = 2 Je∧e + |e|²(J − A)
        let data = TypeALorentzData::hermitian(2).unwrap();
        let k = closed_form_k(&data);
        let sp = data.space();
        let e = unit::<Rational>(4, 1);
        let want = sp.wedge_vv(&data.j.mul_vec(&e), &e).unwrap().scale(&int(2)).add(&data.j.sub(&data.a));
        assert_eq!(k[1][1], want);
    }

    #[test]
    fn perturbed_k_breaks_jacobi() {
        let data = TypeALorentzData::hermitian(2).unwrap();
        let mut k = closed_form_k(&data);
        k[0][0] = k[0][0].add(&data.k_basis[0]);
        let model = assemble_type_a(&data, &k).unwrap();
        let rep = model.algebra.jacobi_check();
        assert!(!rep.passed());
        assert!(rep.witness.is_some());
    }

    #[test]
    fn non_invariant_k_gives_witness() {
        // all of so(E) instead of su(E, J): (***) and J-equivariance fail
        let data = TypeALorentzData::hermitian(2).unwrap();
        let sp = data.space();
        let bad = TypeALorentzData::new(data.e_gram.clone(), data.j.clone(), data.a.clone(), sp.so_basis()).unwrap();
        let err = build_type_a_lorentz(&bad).unwrap_err();
        assert!(matches!(err, Error::Jacobi { .. }), "{err}");
    }

    #[test]
    fn flat_case_is_graded_and_embeds() {
        let model = build_type_a_lorentz(&TypeALorentzData::flat(2).unwrap()).unwrap();
        assert_eq!(model.grading.dims().into_values().collect::<Vec<_>>(), vec![1, 2, 2, 2, 1]);
        assert!(flat_embedding_is_homomorphism(2).unwrap());
        assert!(flat_embedding_is_homomorphism(3).unwrap());
    }
}
