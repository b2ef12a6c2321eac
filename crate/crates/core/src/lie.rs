//! Finite-dimensional Lie algebras given by structure constants, gradings,
//! transitivity, and first prolongations of linear Lie algebras in `co(V)`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{unit, vis_zero, vmax_abs, vzero, Coords, Mat, DEFAULT_TOL};
use crate::pseudo::{ConformalElement, PseudoEuclideanSpace};
use crate::scalar::{Field, RealField};

/// Structure constants stored once per unordered pair `i < j`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteLieAlgebra<F> {
    labels: Vec<String>,
    table: BTreeMap<(usize, usize), Vec<(usize, F)>>,
}

impl<F: Field> FiniteLieAlgebra<F> {
    pub fn new(labels: Vec<String>) -> Self {
        FiniteLieAlgebra { labels, table: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Sets `[e_i, e_j] = v`; the value for `(j, i)` follows by antisymmetry.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: &[F]) -> Result<()> {
        check_dim(self.dim(), v.len())?;
        if i >= self.dim() || j >= self.dim() {
            return Err(Error::Invalid(format!("basis index out of range: ({i}, {j})")));
        }
        if i == j {
            if vis_zero(v) {
                return Ok(());
            }
            return Err(Error::Invalid(format!("[{0}, {0}] must vanish", self.labels[i])));
        }
        let (key, sign) = if i < j { ((i, j), false) } else { ((j, i), true) };
        let sparse: Vec<(usize, F)> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, if sign { -c.clone() } else { c.clone() }))
            .collect();
        if sparse.is_empty() {
            self.table.remove(&key);
        } else {
            self.table.insert(key, sparse);
        }
        Ok(())
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<F> {
        let mut out = vzero(self.dim());
        self.add_basis_bracket(i, j, &F::one(), &mut out);
        out
    }

    fn add_basis_bracket(&self, i: usize, j: usize, c: &F, out: &mut [F]) {
        if i == j {
            return;
        }
        let (key, sign) = if i < j { ((i, j), false) } else { ((j, i), true) };
        if let Some(entries) = self.table.get(&key) {
            for (k, v) in entries {
                let term = c.clone() * v.clone();
                let cur = std::mem::replace(&mut out[*k], F::zero());
                out[*k] = if sign { cur - term } else { cur + term };
            }
        }
    }

    pub fn bracket(&self, x: &[F], y: &[F]) -> Result<Vec<F>> {
        check_dim(self.dim(), x.len())?;
        check_dim(self.dim(), y.len())?;
        let mut out = vzero(self.dim());
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                self.add_basis_bracket(i, j, &(xi.clone() * yj.clone()), &mut out);
            }
        }
        Ok(out)
    }

    /// Nonzero structure constants `(i, j, k, c)` with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &F)> {
        self.table
            .iter()
            .flat_map(|(&(i, j), v)| v.iter().map(move |(k, c)| (i, j, *k, c)))
    }

    /// Matrix of `ad_x` in the basis.
    pub fn ad(&self, x: &[F]) -> Result<Mat<F>> {
        let cols: Result<Vec<Vec<F>>> =
            (0..self.dim()).map(|j| self.bracket(x, &unit(self.dim(), j))).collect();
        Ok(Mat::from_cols(self.dim(), &cols?))
    }

    pub fn jacobiator(&self, x: &[F], y: &[F], z: &[F]) -> Result<Vec<F>> {
        let a = self.bracket(x, &self.bracket(y, z)?)?;
        let b = self.bracket(y, &self.bracket(z, x)?)?;
        let c = self.bracket(z, &self.bracket(x, y)?)?;
        Ok(a.into_iter().zip(b).zip(c).map(|((a, b), c)| a + b + c).collect())
    }

    /// Sweeps all basis triples `i < j < k`.
    ///
    /// Work is split by the first index; the witness is the lexicographically
    /// first failing triple whatever the split.
    pub fn jacobi_check(&self) -> JacobiReport<F> {
        let d = self.dim();
        // (largest entry, first failure, triples checked) per first index
        type Row<F> = (f64, Option<([usize; 3], Vec<F>)>, usize);
        let per_first: Vec<Row<F>> = (0..d)
            .into_par_iter()
            .map(|i| {
                let mut max = 0.0f64;
                let mut first = None;
                let mut count = 0;
                for j in i + 1..d {
                    for k in j + 1..d {
                        count += 1;
                        let v = self
                            .jacobiator(&unit(d, i), &unit(d, j), &unit(d, k))
                            .expect("basis vectors have the right length");
                        if !vis_zero(&v) {
                            max = max.max(vmax_abs(&v));
                            if first.is_none() {
                                first = Some(([i, j, k], v));
                            }
                        }
                    }
                }
                (max, first, count)
            })
            .collect();
        let max_violation = per_first.iter().map(|r| r.0).fold(0.0, f64::max);
        let triples_checked = per_first.iter().map(|r| r.2).sum();
        let witness = per_first.into_iter().find_map(|r| r.1);
        JacobiReport { max_violation, triples_checked, witness }
    }

    /// Errors with the first failing triple if the Jacobi identity does not hold.
    pub fn require_jacobi(&self) -> Result<()> {
        match self.jacobi_check().witness {
            None => Ok(()),
            Some((t, v)) => Err(Error::Jacobi {
                triple: t,
                labels: [self.labels[t[0]].clone(), self.labels[t[1]].clone(), self.labels[t[2]].clone()],
                value: self.describe(&v),
            }),
        }
    }

    /// `B(x, y) = tr(ad_x ad_y)` on the basis.
    pub fn killing_form(&self) -> Mat<F> {
        let d = self.dim();
        let ads: Vec<Mat<F>> = (0..d).map(|i| self.ad(&unit(d, i)).expect("basis")).collect();
        Mat::from_fn(d, d, |i, j| ads[i].mul(&ads[j]).trace())
    }

    /// Human-readable linear combination, e.g. `-1/1*D + 2/1*Q`.
    pub fn describe(&self, v: &[F]) -> String {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c})*{}", self.labels[k]))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// The subalgebra spanned by the listed basis vectors, relabelled in that order.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        let d = self.dim();
        let mut sub = FiniteLieAlgebra::new(indices.iter().map(|&i| self.labels[i].clone()).collect());
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate().skip(a + 1) {
                let v = self.basis_bracket(i, j);
                let mut w = vzero(indices.len());
                for k in 0..d {
                    if v[k].is_zero() {
                        continue;
                    }
                    let pos = indices.iter().position(|&x| x == k).ok_or_else(|| {
                        Error::NotInSpan(format!(
                            "[{}, {}] has a component along {}",
                            self.labels[i], self.labels[j], self.labels[k]
                        ))
                    })?;
                    w[pos] = v[k].clone();
                }
                sub.set_bracket(a, b, &w)?;
            }
        }
        Ok(sub)
    }

    /// Coordinates of `e_i` with `i` given by label.
    pub fn basis_by_label(&self, label: &str) -> Option<Vec<F>> {
        self.index_of(label).map(|i| unit(self.dim(), i))
    }
}

#[derive(Clone, Debug)]
pub struct JacobiReport<F> {
    /// Largest component of any jacobiator on basis triples (`0.0` when exact zero).
    pub max_violation: f64,
    pub triples_checked: usize,
    /// Lexicographically first triple with nonzero jacobiator.
    pub witness: Option<([usize; 3], Vec<F>)>,
}

impl<F> JacobiReport<F> {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

// ---------------------------------------------------------------- gradings

#[derive(Clone, Debug)]
pub struct GradedStructure<F> {
    /// Eigenspace bases indexed by degree.
    pub spaces: BTreeMap<i64, Vec<Vec<F>>>,
    /// Degree of each basis vector when the basis is homogeneous.
    pub basis_degrees: Option<Vec<i64>>,
    pub grading_element: Option<Vec<F>>,
}

impl<F: Field> GradedStructure<F> {
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.spaces.iter().map(|(&a, v)| (a, v.len())).collect()
    }

    pub fn negative_part(&self) -> Vec<Vec<F>> {
        self.spaces.range(..0).flat_map(|(_, v)| v.iter().cloned()).collect()
    }

    pub fn nonnegative_part(&self) -> Vec<Vec<F>> {
        self.spaces.range(0..).flat_map(|(_, v)| v.iter().cloned()).collect()
    }

    /// Grading read off from a degree per basis vector; compatibility is verified.
    pub fn from_basis_degrees(
        l: &FiniteLieAlgebra<F>,
        degrees: Vec<i64>,
        grading_element: Option<Vec<F>>,
    ) -> Result<Self> {
        check_dim(l.dim(), degrees.len())?;
        let d = l.dim();
        for i in 0..d {
            for j in i + 1..d {
                let v = l.basis_bracket(i, j);
                let want = degrees[i] + degrees[j];
                if let Some(k) = (0..d).find(|&k| !v[k].is_zero() && degrees[k] != want) {
                    return Err(Error::Grading(format!(
                        "[{}, {}] has a component along {} of degree {} ≠ {want}",
                        l.labels[i], l.labels[j], l.labels[k], degrees[k]
                    )));
                }
            }
        }
        if let Some(el) = &grading_element {
            for i in 0..d {
                let v = l.bracket(el, &unit(d, i))?;
                let want: Vec<F> = unit::<F>(d, i).into_iter().map(|x| x * F::from_i64(degrees[i])).collect();
                if v != want {
                    return Err(Error::Grading(format!(
                        "ad of the grading element does not act on {} by {}",
                        l.labels[i], degrees[i]
                    )));
                }
            }
        }
        let mut spaces: BTreeMap<i64, Vec<Vec<F>>> = BTreeMap::new();
        for (i, &a) in degrees.iter().enumerate() {
            spaces.entry(a).or_default().push(unit(d, i));
        }
        Ok(GradedStructure { spaces, basis_degrees: Some(degrees), grading_element })
    }
}

/// Eigenspace decomposition of `ad_D`, which must be diagonalizable with integer spectrum.
pub fn grade_by<F: Field>(l: &FiniteLieAlgebra<F>, d_elem: &[F]) -> Result<GradedStructure<F>> {
    let dim = l.dim();
    let ad = l.ad(d_elem)?;
    let minpoly = ad.minimal_polynomial();
    let spectrum_error = || Error::Spectrum { minimal_polynomial: minpoly.iter().map(|c| c.to_string()).collect() };
    // Gershgorin disc radius bounds every eigenvalue.
    let bound = (0..dim)
        .map(|i| (0..dim).map(|j| ad[(i, j)].magnitude()).sum::<f64>())
        .fold(0.0, f64::max)
        .ceil() as i64;
    let eval = |a: i64| {
        let x = F::from_i64(a);
        minpoly.iter().rev().fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    };
    let mut spaces = BTreeMap::new();
    let mut total = 0;
    for a in -bound..=bound {
        if !eval(a).is_negligible(DEFAULT_TOL) {
            continue;
        }
        let shifted = ad.sub(&Mat::identity(dim).scale(&F::from_i64(a)));
        let ker = shifted.kernel(DEFAULT_TOL);
        total += ker.len();
        if !ker.is_empty() {
            spaces.insert(a, ker);
        }
    }
    if total != dim {
        return Err(spectrum_error());
    }
    // compatibility [g^a, g^b] ⊆ g^{a+b}
    let keys: Vec<i64> = spaces.keys().copied().collect();
    for &a in &keys {
        for &b in &keys {
            for u in &spaces[&a] {
                for v in &spaces[&b] {
                    let w = l.bracket(u, v)?;
                    let lhs = ad.mul_vec(&w);
                    let rhs: Vec<F> = w.iter().map(|x| x.clone() * F::from_i64(a + b)).collect();
                    if lhs.iter().zip(&rhs).any(|(x, y)| !(x.clone() - y.clone()).is_negligible(DEFAULT_TOL)) {
                        return Err(Error::Grading(format!(
                            "bracket of degree-{a} and degree-{b} vectors leaves degree {}",
                            a + b
                        )));
                    }
                }
            }
        }
    }
    let basis_degrees = (0..dim)
        .map(|i| {
            let col = ad.col(i);
            let a = ad[(i, i)].clone();
            let homogeneous = col.iter().enumerate().all(|(k, c)| k == i || c.is_zero());
            if !homogeneous {
                return None;
            }
            keys.iter().copied().find(|&deg| (F::from_i64(deg) - a.clone()).is_zero())
        })
        .collect::<Option<Vec<i64>>>();
    Ok(GradedStructure { spaces, basis_degrees, grading_element: Some(d_elem.to_vec()) })
}

#[derive(Clone, Debug)]
pub struct TransitivityReport<F> {
    pub transitive: bool,
    /// A nonzero non-negative-degree element centralizing the negative part.
    pub witness: Option<Vec<F>>,
}

pub fn transitivity_check<F: Field>(l: &FiniteLieAlgebra<F>, g: &GradedStructure<F>) -> Result<TransitivityReport<F>> {
    let neg = g.negative_part();
    let nonneg = g.nonnegative_part();
    let d = l.dim();
    // column r stacks [n_r, m_j] over all negative basis vectors m_j
    let mut cols = Vec::with_capacity(nonneg.len());
    for x in &nonneg {
        let mut col = Vec::with_capacity(d * neg.len());
        for m in &neg {
            col.extend(l.bracket(x, m)?);
        }
        cols.push(col);
    }
    let rows = d * neg.len();
    let ker = if nonneg.is_empty() {
        Vec::new()
    } else if rows == 0 {
        (0..nonneg.len()).map(|i| unit(nonneg.len(), i)).collect()
    } else {
        Mat::from_cols(rows, &cols).kernel(DEFAULT_TOL)
    };
    let witness = ker.first().map(|c| {
        let mut w: Vec<F> = vzero(d);
        for (ci, x) in c.iter().zip(&nonneg) {
            for (wk, xk) in w.iter_mut().zip(x) {
                *wk = wk.clone() + ci.clone() * xk.clone();
            }
        }
        w
    });
    Ok(TransitivityReport { transitive: witness.is_none(), witness })
}

// ---------------------------------------------------------------- linear subalgebras of co(V)

#[derive(Clone, Debug)]
pub struct LinearLieSubalgebra<F> {
    pub space: PseudoEuclideanSpace<F>,
    pub basis: Vec<Mat<F>>,
    /// `[b_i, b_j]` in basis coordinates, for `i < j`.
    pub closure: Vec<((usize, usize), Vec<F>)>,
    coords: Coords<F>,
}

impl<F: RealField> LinearLieSubalgebra<F> {
    pub fn new(space: PseudoEuclideanSpace<F>, basis: Vec<Mat<F>>) -> Result<Self> {
        let n = space.n();
        for (i, b) in basis.iter().enumerate() {
            ConformalElement::decompose(&space, b)
                .map_err(|e| Error::NotConformal(format!("basis element {i}: {e}")))?;
        }
        let flat: Vec<Vec<F>> = basis.iter().map(Mat::flatten).collect();
        let coords = Coords::new(n * n, &flat, DEFAULT_TOL)?;
        let mut closure = Vec::new();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let c = basis[i].commutator(&basis[j]);
                let k = coords
                    .coords(&c.flatten())
                    .ok_or_else(|| Error::NotInSpan(format!("[b{i}, b{j}] leaves the span")))?;
                closure.push(((i, j), k));
            }
        }
        Ok(LinearLieSubalgebra { space, basis, closure, coords })
    }

    /// The full conformal algebra `R·id ⊕ so(V)`.
    pub fn co(space: &PseudoEuclideanSpace<F>) -> Self {
        let mut basis = vec![Mat::identity(space.n())];
        basis.extend(space.so_basis());
        Self::new(space.clone(), basis).expect("co(V) is a subalgebra")
    }

    pub fn so(space: &PseudoEuclideanSpace<F>) -> Self {
        Self::new(space.clone(), space.so_basis()).expect("so(V) is a subalgebra")
    }
}

impl<F: Field> LinearLieSubalgebra<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, a: &Mat<F>) -> bool {
        self.coords.contains(&a.flatten())
    }

    pub fn coords_of(&self, a: &Mat<F>) -> Option<Vec<F>> {
        self.coords.coords(&a.flatten())
    }

    pub fn is_full_co(&self) -> bool {
        let n = self.space.n();
        self.dim() == 1 + n * (n - 1) / 2
    }
}

/// Symmetric maps `S: V → g⁰`, each stored as the list `S(e_0), …, S(e_{n−1})`.
#[derive(Clone, Debug)]
pub struct ProlongationSpace<F> {
    pub n: usize,
    pub basis: Vec<Vec<Mat<F>>>,
}

impl<F: Field> ProlongationSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `S(X)Y`.
    pub fn apply(s: &[Mat<F>], x: &[F], y: &[F]) -> Vec<F> {
        let n = y.len();
        let mut m = Mat::zeros(n, n);
        for (a, xa) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            m = m.add(&s[a].scale(xa));
        }
        m.mul_vec(y)
    }

    pub fn contains(&self, s: &[Mat<F>]) -> bool {
        let flat = |s: &[Mat<F>]| s.iter().flat_map(|m| m.flatten()).collect::<Vec<F>>();
        if self.basis.is_empty() {
            return s.iter().all(Mat::is_zero);
        }
        let b: Vec<Vec<F>> = self.basis.iter().map(|x| flat(x)).collect();
        Coords::new(self.n * self.n * self.n, &b, DEFAULT_TOL)
            .map(|c| c.contains(&flat(s)))
            .unwrap_or(false)
    }

    /// `(A·S)(X) = [A, S(X)] − S(AX)`.
    pub fn act(a: &Mat<F>, s: &[Mat<F>]) -> Vec<Mat<F>> {
        let n = a.rows();
        (0..n)
            .map(|i| {
                let ax = a.col(i);
                let mut s_ax = Mat::zeros(n, n);
                for (b, c) in ax.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    s_ax = s_ax.add(&s[b].scale(c));
                }
                a.commutator(&s[i]).sub(&s_ax)
            })
            .collect()
    }
}

/// The map `X ↦ T^ξ_X` as a prolongation element.
pub fn t_xi_map<F: Field>(space: &PseudoEuclideanSpace<F>, xi: &[F]) -> Result<Vec<Mat<F>>> {
    (0..space.n()).map(|a| Ok(space.t_xi_action(xi, &unit(space.n(), a))?.matrix())).collect()
}

/// Recovers `ξ` from `S = T^ξ` via `ξ(X) = tr S(X) / n`, checking the form.
pub fn as_t_xi<F: Field>(space: &PseudoEuclideanSpace<F>, s: &[Mat<F>]) -> Option<Vec<F>> {
    let n = space.n();
    let inv_n = F::from_i64(n as i64).inv()?;
    let xi: Vec<F> = s.iter().map(|m| m.trace() * inv_n.clone()).collect();
    let t = t_xi_map(space, &xi).ok()?;
    t.iter().zip(s).all(|(a, b)| a.sub(b).is_zero()).then_some(xi)
}

/// Solves `S(X)Y = S(Y)X` for `S ∈ V* ⊗ g⁰` by an exact kernel computation.
pub fn first_prolongation<F: Field>(g0: &LinearLieSubalgebra<F>) -> ProlongationSpace<F> {
    let n = g0.space.n();
    let r = g0.dim();
    // unknown s[a][t] at column a*r + t; S(e_a) = Σ_t s[a][t] B_t
    let mut rows: Vec<Vec<F>> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for comp in 0..n {
                let mut row = vzero(n * r);
                for t in 0..r {
                    row[a * r + t] = g0.basis[t][(comp, b)].clone();
                    row[b * r + t] = -g0.basis[t][(comp, a)].clone();
                }
                if !vis_zero(&row) {
                    rows.push(row);
                }
            }
        }
    }
    let ker = if rows.is_empty() {
        (0..n * r).map(|i| unit(n * r, i)).collect()
    } else {
        Mat::from_rows(rows).expect("rows have equal length").kernel(DEFAULT_TOL)
    };
    let basis = ker
        .into_iter()
        .map(|v| {
            (0..n)
                .map(|a| {
                    (0..r).fold(Mat::zeros(n, n), |acc, t| {
                        if v[a * r + t].is_zero() {
                            acc
                        } else {
                            acc.add(&g0.basis[t].scale(&v[a * r + t]))
                        }
                    })
                })
                .collect()
        })
        .collect();
    ProlongationSpace { n, basis }
}

#[derive(Clone, Debug)]
pub struct AuditEntry<F> {
    pub xi: Option<Vec<F>>,
    /// `g⁻¹(ξ, ξ)` when the element is of the form `T^ξ`.
    pub norm: Option<F>,
}

#[derive(Clone, Debug)]
pub struct IsotropyAudit<F> {
    pub entries: Vec<AuditEntry<F>>,
    pub is_full_co: bool,
    /// `g⁻¹` vanishes on the whole span of recovered covectors.
    pub span_isotropic: bool,
    pub passes: bool,
}

/// For a proper `g⁰ ⊂ co(V)`, every prolongation element must be `T^ξ` with isotropic `ξ`.
pub fn prolongation_isotropy_audit<F: Field>(g0: &LinearLieSubalgebra<F>) -> IsotropyAudit<F> {
    let pr = first_prolongation(g0);
    let entries: Vec<AuditEntry<F>> = pr
        .basis
        .iter()
        .map(|s| {
            let xi = as_t_xi(&g0.space, s);
            let norm = xi.as_ref().map(|x| g0.space.inner_cov(x, x).expect("dimensions agree"));
            AuditEntry { xi, norm }
        })
        .collect();
    let xis: Vec<&Vec<F>> = entries.iter().filter_map(|e| e.xi.as_ref()).collect();
    let span_isotropic = xis.iter().all(|a| {
        xis.iter().all(|b| g0.space.inner_cov(a, b).map(|v| v.is_zero()).unwrap_or(false))
    });
    let all_t = entries.iter().all(|e| e.xi.is_some());
    let is_full_co = g0.is_full_co();
    let passes = is_full_co || (all_t && span_isotropic);
    IsotropyAudit { entries, is_full_co, span_isotropic, passes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudo::StandardDecomposition;
    use crate::scalar::{int, Rational};

    fn sl2() -> FiniteLieAlgebra<Rational> {
        // h, e, f with [h,e]=2e, [h,f]=−2f, [e,f]=h
        let mut l = FiniteLieAlgebra::new(vec!["h".into(), "e".into(), "f".into()]);
        l.set_bracket(0, 1, &[int(0), int(2), int(0)]).unwrap();
        l.set_bracket(0, 2, &[int(0), int(0), int(-2)]).unwrap();
        l.set_bracket(1, 2, &[int(1), int(0), int(0)]).unwrap();
        l
    }

    #[test]
    fn antisymmetry_is_enforced() {
        let l = sl2();
        assert_eq!(l.basis_bracket(1, 0), vec![int(0), int(-2), int(0)]);
        let x = vec![int(1), int(2), int(3)];
        assert!(vis_zero(&l.bracket(&x, &x).unwrap()));
        let mut bad = l.clone();
        assert!(bad.set_bracket(1, 1, &[int(1), int(0), int(0)]).is_err());
    }

    #[test]
    fn sl2_jacobi_and_killing() {
        let l = sl2();
        assert!(l.jacobi_check().passed());
        assert_eq!(l.killing_form().inertia().unwrap(), (1, 0, 2));
    }

    #[test]
    fn jacobi_witness_is_first_triple() {
        let mut l = FiniteLieAlgebra::<Rational>::new((0..4).map(|i| format!("x{i}")).collect());
        // [x0,x1]=x1, [x1,x2]=x3, others zero: Jacobi fails on (0,1,2)
        l.set_bracket(0, 1, &[int(0), int(1), int(0), int(0)]).unwrap();
        l.set_bracket(1, 2, &[int(0), int(0), int(0), int(1)]).unwrap();
        let rep = l.jacobi_check();
        assert_eq!(rep.witness.as_ref().unwrap().0, [0, 1, 2]);
        assert!(matches!(l.require_jacobi(), Err(Error::Jacobi { triple: [0, 1, 2], .. })));
    }

    #[test]
    fn grade_sl2_by_h() {
        let l = sl2();
        let g = grade_by(&l, &[int(1), int(0), int(0)]).unwrap();
        assert_eq!(g.basis_degrees, Some(vec![0, 2, -2]));
        assert_eq!(g.dims().into_iter().collect::<Vec<_>>(), vec![(-2, 1), (0, 1), (2, 1)]);
        // grading by e is nilpotent, not diagonalizable
        let err = grade_by(&l, &[int(0), int(1), int(0)]).unwrap_err();
        assert!(matches!(err, Error::Spectrum { .. }));
    }

    #[test]
    fn abelian_zero_grading() {
        let l = FiniteLieAlgebra::<Rational>::new(vec!["a".into(), "b".into()]);
        let g = grade_by(&l, &[int(0), int(0)]).unwrap();
        assert_eq!(g.dims().into_iter().collect::<Vec<_>>(), vec![(0, 2)]);
    }

    #[test]
    fn co_prolongation_is_dual_space() {
        let d = StandardDecomposition::<Rational>::standard(1, 3, 1).unwrap();
        let co = LinearLieSubalgebra::co(&d.space);
        let pr = first_prolongation(&co);
        assert_eq!(pr.dim(), 4);
        for s in &pr.basis {
            assert!(as_t_xi(&d.space, s).is_some());
        }
        assert_eq!(first_prolongation(&LinearLieSubalgebra::so(&d.space)).dim(), 0);
        let audit = prolongation_isotropy_audit(&co);
        assert!(audit.passes && audit.is_full_co);
        assert!(audit.entries.iter().any(|e| !e.norm.as_ref().unwrap().is_zero()));
    }
}
