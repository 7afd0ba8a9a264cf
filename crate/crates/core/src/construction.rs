//! The construction `Λ ↦ C(Λ)`.
//!
//! For a pencil spanned by binary forms `f, g` of degree `c + 1`, the Bezout
//! form `B(t₁, t₂) = (f(t₁)g(t₂) − f(t₂)g(t₁)) / (u₁v₂ − u₂v₁)` vanishes at a
//! pair of distinct parameters exactly when one member of the pencil vanishes
//! at both. `B` is symmetric, hence a polynomial `R(q, p, r)` in
//! `q = u₁u₂, p = u₁v₂ + u₂v₁, r = v₁v₂`, and the tangents at `t₁, t₂` meet at
//! `T · (2q, p, 2r)`. Substituting `q = x̃/2, p = ỹ, r = z̃/2` with
//! `(x̃, ỹ, z̃) = T^{-1}(x, y, z)` turns `R` into the degree-`c` curve.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forms::{reduce_symmetric, BinaryForm, PlaneCurve, SymBiForm, TernaryForm};
use crate::geom::ConicFrame;
use crate::linalg::Mat3;
use crate::scalar::{Rational, Scalar};

/// Two linearly independent binary forms of degree `c + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pencil<S> {
    f: BinaryForm<S>,
    g: BinaryForm<S>,
}

impl<S: Scalar> Pencil<S> {
    pub fn new(f: BinaryForm<S>, g: BinaryForm<S>) -> Result<Self> {
        if f.degree() != g.degree() {
            return Err(Error::DegreeMismatch { expected: f.degree(), found: g.degree() });
        }
        if f.degree() < 2 {
            return Err(Error::Shape("pencil forms must have degree c + 1 ≥ 2".into()));
        }
        let p = Self { f, g };
        if !p.is_independent() {
            return Err(Error::DegeneratePencil);
        }
        Ok(p)
    }

    pub fn from_i64s(f: &[i64], g: &[i64]) -> Result<Self> {
        Self::new(BinaryForm::from_i64s(f), BinaryForm::from_i64s(g))
    }

    /// Curve degree `c`.
    pub fn c(&self) -> usize {
        self.f.degree() - 1
    }

    pub fn f(&self) -> &BinaryForm<S> {
        &self.f
    }

    pub fn g(&self) -> &BinaryForm<S> {
        &self.g
    }

    fn is_independent(&self) -> bool {
        let minors = raw_minors(&self.f, &self.g);
        let nf = self.f.coeffs().iter().map(Scalar::magnitude).fold(0.0, f64::max);
        let ng = self.g.coeffs().iter().map(Scalar::magnitude).fold(0.0, f64::max);
        !minors.iter().all(|m| m.is_negligible(nf * ng, 1e-12))
    }

    /// Basis change `(f, g) ↦ (a f + b g, c f + d g)`.
    pub fn rebased(&self, a: &S, b: &S, c: &S, d: &S) -> Result<Self> {
        Self::new(
            self.f.scale(a).add(&self.g.scale(b)),
            self.f.scale(c).add(&self.g.scale(d)),
        )
    }

    /// The member `λ f + μ g`.
    pub fn member(&self, lambda: &S, mu: &S) -> BinaryForm<S> {
        self.f.scale(lambda).add(&self.g.scale(mu))
    }

    pub fn map<T: Scalar>(&self, conv: impl Fn(&S) -> T) -> Result<Pencil<T>> {
        Pencil::new(self.f.map(&conv), self.g.map(&conv))
    }
}

fn raw_minors<S: Scalar>(f: &BinaryForm<S>, g: &BinaryForm<S>) -> Vec<S> {
    let n = f.degree() + 1;
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(f.coeff(i).clone() * g.coeff(j).clone() - f.coeff(j).clone() * g.coeff(i).clone());
        }
    }
    out
}

/// Index pairs `(i, j)`, `i < j`, in the order used by [`plucker_coords`].
pub fn plucker_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect()
}

/// All 2×2 minors `fᵢgⱼ − fⱼgᵢ`, `i < j`, in lexicographic order of `(i, j)`.
pub fn plucker_coords<S: Scalar>(pencil: &Pencil<S>) -> Vec<S> {
    raw_minors(&pencil.f, &pencil.g)
}

/// The Bezout form of the pencil.
pub fn bezout_form<S: Scalar>(pencil: &Pencil<S>) -> SymBiForm<S> {
    let (f, g) = (&pencil.f, &pencil.g);
    let c = pencil.c();
    let n = c + 2;
    let minor = |i: usize, j: usize| f.coeff(i).clone() * g.coeff(j).clone() - f.coeff(j).clone() * g.coeff(i).clone();
    // N[a][b] = B[a−1][b] − B[a][b−1], solved from the last row upwards.
    let mut b = vec![vec![S::zero(); c + 1]; c + 1];
    for a in (1..n).rev() {
        for col in 0..=c {
            let mut val = minor(a, col);
            if a <= c && col >= 1 {
                val = val + b[a][col - 1].clone();
            }
            b[a - 1][col] = val;
        }
    }
    SymBiForm::new(b).expect("Bezout form of a pencil is symmetric")
}

/// Unnormalized curve form: linear in the Plücker coordinates of the pencil.
pub fn curve_form<S: Scalar>(frame: &ConicFrame<S>, pencil: &Pencil<S>) -> TernaryForm<S> {
    let reduced = reduce_symmetric(&bezout_form(pencil));
    let reference = reduced.to_plane_form();
    if *frame.transform() == Mat3::identity() {
        reference
    } else {
        reference.compose_linear(frame.inverse_transform())
    }
}

/// The Poncelet curve `C(Λ)` of the pencil with respect to the framed conic.
pub fn poncelet_curve<S: Scalar>(frame: &ConicFrame<S>, pencil: &Pencil<S>) -> Result<PlaneCurve<S>> {
    PlaneCurve::new(curve_form(frame, pencil), frame.chart())
}

/// Result of [`split_base_points`].
#[derive(Debug, Clone, PartialEq)]
pub struct BaseSplit<S> {
    /// Greatest common divisor of the pencil; its roots are the base points.
    pub base: BinaryForm<S>,
    /// Pencil with the base points removed.
    pub reduced: Pencil<S>,
    /// Set when the gcd was found numerically.
    pub approximate: bool,
}

/// Greatest common divisor of binary forms, exact or numerical.
pub trait FormGcd: Scalar {
    /// Returns the gcd and whether it is approximate.
    fn form_gcd(f: &BinaryForm<Self>, g: &BinaryForm<Self>) -> (BinaryForm<Self>, bool);
}

impl FormGcd for Rational {
    fn form_gcd(f: &BinaryForm<Self>, g: &BinaryForm<Self>) -> (BinaryForm<Self>, bool) {
        (f.gcd(g), false)
    }
}

/// Singular-value ratio below which the Sylvester matrix is taken to be rank
/// deficient in the numerical gcd.
pub const FLOAT_GCD_THRESHOLD: f64 = 1e-8;

impl FormGcd for f64 {
    fn form_gcd(f: &BinaryForm<Self>, g: &BinaryForm<Self>) -> (BinaryForm<Self>, bool) {
        (approximate_gcd(f, g, FLOAT_GCD_THRESHOLD), true)
    }
}

fn convolution_matrix(a: &[f64], cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(a.len() + cols - 1, cols, |i, j| {
        if i >= j && i - j < a.len() { a[i - j] } else { 0.0 }
    })
}

/// `m` must have at least as many rows as columns.
fn smallest_right_singular_vector(m: DMatrix<f64>) -> Vec<f64> {
    let svd = m.svd(false, true);
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    let v_t = svd.v_t.expect("V requested");
    v_t.row(idx).iter().copied().collect()
}

/// Numerical gcd of two binary forms via the rank deficiency of their
/// Sylvester matrix.
pub fn approximate_gcd(f: &BinaryForm<f64>, g: &BinaryForm<f64>, threshold: f64) -> BinaryForm<f64> {
    let (m, n) = (f.degree(), g.degree());
    let syl = {
        let mut s = DMatrix::<f64>::zeros(m + n, m + n);
        for i in 0..n {
            for (k, c) in f.coeffs().iter().enumerate() {
                s[(i + k, i)] = *c;
            }
        }
        for i in 0..m {
            for (k, c) in g.coeffs().iter().enumerate() {
                s[(i + k, n + i)] = *c;
            }
        }
        s
    };
    let sv = crate::linalg::singular_values(syl);
    let top = sv[0];
    let k = sv.iter().filter(|&&s| s <= threshold * top).count();
    if k == 0 {
        return BinaryForm::constant(1.0);
    }
    // cofactors: f·b − g·a = 0 with deg a = m − k, deg b = n − k
    let (da, db) = (m - k, n - k);
    let fb = convolution_matrix(f.coeffs(), db + 1);
    let ga = convolution_matrix(g.coeffs(), da + 1);
    let mut sys = DMatrix::<f64>::zeros(fb.nrows(), db + 1 + da + 1);
    sys.view_mut((0, 0), (fb.nrows(), db + 1)).copy_from(&fb);
    sys.view_mut((0, db + 1), (ga.nrows(), da + 1)).copy_from(&(-ga));
    let null = smallest_right_singular_vector(sys);
    let a: Vec<f64> = null[db + 1..].to_vec();
    // h from f = a·h in least squares
    let conv = convolution_matrix(&a, k + 1);
    let rhs = DMatrix::from_column_slice(f.degree() + 1, 1, f.coeffs());
    let svd = conv.svd(true, true);
    let h = svd.solve(&rhs, 1e-14).expect("SVD solve with computed U and V");
    BinaryForm::new(h.iter().copied().collect()).normalized()
}

/// Splits off the base points: `C(Λ) = Π(tangent lines at roots of h) · C(Λ/h)`.
pub fn split_base_points<S: FormGcd>(pencil: &Pencil<S>) -> Result<BaseSplit<S>> {
    let (h, approximate) = S::form_gcd(&pencil.f, &pencil.g);
    if h.degree() == 0 {
        return Ok(BaseSplit { base: h, reduced: pencil.clone(), approximate });
    }
    let divide = |x: &BinaryForm<S>| -> Result<BinaryForm<S>> {
        x.div_exact(&h)
            .or_else(|| least_squares_quotient(x, &h))
            .ok_or_else(|| Error::Numeric("base-point form does not divide the pencil".into()))
    };
    let f = divide(&pencil.f)?;
    let g = divide(&pencil.g)?;
    if f.degree() < 2 {
        // all of the pencil is base points; nothing remains to draw
        return Err(Error::DegeneratePencil);
    }
    Ok(BaseSplit { base: h, reduced: Pencil::new(f, g)?, approximate })
}

fn least_squares_quotient<S: Scalar>(x: &BinaryForm<S>, h: &BinaryForm<S>) -> Option<BinaryForm<S>> {
    if S::MODE == crate::scalar::Mode::Exact {
        return None;
    }
    let hc: Vec<f64> = h.coeffs().iter().map(|c| c.to_complex().re).collect();
    let conv = convolution_matrix(&hc, x.degree() - h.degree() + 1);
    let rhs = DMatrix::from_iterator(x.degree() + 1, 1, x.coeffs().iter().map(|c| c.to_complex().re));
    let sol = conv.svd(true, true).solve(&rhs, 1e-14).ok()?;
    Some(BinaryForm::new(sol.iter().map(|v| S::approximate(*v)).collect()))
}

/// Product, with multiplicity, of the tangent lines at the roots of `h`.
/// No factorization is needed, so this is exact for any rational `h`.
pub fn tangent_product<S: Scalar>(frame: &ConicFrame<S>, h: &BinaryForm<S>) -> TernaryForm<S> {
    let reference = tangential_form(h);
    if *frame.transform() == Mat3::identity() {
        reference
    } else {
        reference.compose_linear(frame.inverse_transform())
    }
}

/// Reference-frame tangent product: the curve of the pencil `(h·u, h·v)`,
/// whose Bezout form is `h(t₁)h(t₂)`.
fn tangential_form<S: Scalar>(h: &BinaryForm<S>) -> TernaryForm<S> {
    let u = BinaryForm::<S>::monomial(1, 1);
    let v = BinaryForm::<S>::monomial(1, 0);
    let pencil = Pencil { f: h.mul(&u), g: h.mul(&v) };
    curve_form(&ConicFrame::identity(), &pencil)
}

/// The linear map `L_c` from Plücker coordinates to curve coefficients in the
/// identity frame. Column `(i, j)` is the curve of the monomial pencil
/// `(u^i v^(c+1−i), u^j v^(c+1−j))`.
pub fn plucker_map<S: Scalar>(c: usize) -> Vec<Vec<S>> {
    let n = c + 2;
    let pairs = plucker_pairs(n);
    let frame = ConicFrame::<S>::identity();
    let columns: Vec<Vec<S>> = pairs
        .iter()
        .map(|&(i, j)| {
            let p = Pencil { f: BinaryForm::monomial(c + 1, i), g: BinaryForm::monomial(c + 1, j) };
            curve_form(&frame, &p).coeffs().to_vec()
        })
        .collect();
    let rows = columns[0].len();
    (0..rows)
        .map(|r| columns.iter().map(|col| col[r].clone()).collect())
        .collect()
}

type PluckerCache = Mutex<HashMap<usize, Arc<Vec<Vec<Rational>>>>>;

/// Exact `L_c`, built once per degree and shared afterwards.
pub fn cached_plucker_map(c: usize) -> Arc<Vec<Vec<Rational>>> {
    static CACHE: OnceLock<PluckerCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(m) = cache.lock().expect("cache lock").get(&c) {
        return Arc::clone(m);
    }
    let built = Arc::new(plucker_map::<Rational>(c));
    let mut guard = cache.lock().expect("cache lock");
    Arc::clone(guard.entry(c).or_insert(built))
}

/// `(h₁(f, g), h₂(f, g))`: the pencil pulled back along the pencil map.
pub fn compose_pencil<S: Scalar>(inner: &Pencil<S>, outer: (&BinaryForm<S>, &BinaryForm<S>)) -> Result<Pencil<S>> {
    let (h1, h2) = outer;
    if h1.degree() != h2.degree() || h1.degree() == 0 {
        return Err(Error::Shape("outer forms must share a positive degree".into()));
    }
    let minors = raw_minors(h1, h2);
    if minors.iter().all(Zero::is_zero) {
        return Err(Error::DegeneratePencil);
    }
    Pencil::new(h1.substitute(&inner.f, &inner.g), h2.substitute(&inner.f, &inner.g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Chart;
    use crate::geom::ParamPoint;

    type Q = Rational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn curve(degree: usize, terms: &[([usize; 3], i64)]) -> PlaneCurve<Q> {
        PlaneCurve::from_terms(degree, terms, Chart::Primal).unwrap()
    }

    fn mono_pencil(c: usize, i: usize, j: usize) -> Pencil<Q> {
        Pencil::new(BinaryForm::monomial(c + 1, i), BinaryForm::monomial(c + 1, j)).unwrap()
    }

    #[test]
    fn bezout_examples() {
        // (u², v²) → u₁v₂ + u₂v₁
        let b = bezout_form(&mono_pencil(1, 2, 0));
        assert_eq!(b.rows(), &[vec![q(0), q(1)], vec![q(1), q(0)]]);
        // (u³, v³) → (u₁v₂)² + u₁v₂u₂v₁ + (u₂v₁)²
        let b = bezout_form(&mono_pencil(2, 3, 0));
        let mut expected = vec![vec![q(0); 3]; 3];
        expected[2][0] = q(1);
        expected[0][2] = q(1);
        expected[1][1] = q(1);
        assert_eq!(b.rows(), expected.as_slice());
    }

    #[test]
    fn bezout_basis_change() {
        let p = Pencil::<Q>::from_i64s(&[1, -2, 0, 3], &[0, 5, 1, -1]).unwrap();
        let b = bezout_form(&p);
        assert_eq!(bezout_form(&p.rebased(&q(1), &q(1), &q(0), &q(1)).unwrap()), b);
        assert_eq!(bezout_form(&p.rebased(&q(2), &q(0), &q(0), &q(1)).unwrap()), b.scale(&q(2)));
    }

    #[test]
    fn bezout_times_bracket_is_the_minor_form() {
        let p = Pencil::<Q>::from_i64s(&[1, -2, 0, 3, 4], &[0, 5, 1, -1, 2]).unwrap();
        let b = bezout_form(&p);
        for (t1, t2) in [((2, 1), (-1, 3)), ((1, 0), (5, 2)), ((7, -3), (0, 1))] {
            let (u1, v1, u2, v2) = (q(t1.0), q(t1.1), q(t2.0), q(t2.1));
            let lhs = (u1.clone() * v2.clone() - u2.clone() * v1.clone()) * b.eval((&u1, &v1), (&u2, &v2));
            let rhs = p.f().eval(&u1, &v1) * p.g().eval(&u2, &v2) - p.f().eval(&u2, &v2) * p.g().eval(&u1, &v1);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn reduce_of_cubic_pencil() {
        let r = reduce_symmetric(&bezout_form(&mono_pencil(2, 3, 0)));
        assert_eq!(r.coeff(0, 2, 0), &q(1));
        assert_eq!(r.coeff(1, 0, 1), &q(-1));
    }

    #[test]
    fn identity_frame_curve_examples() {
        let id = ConicFrame::<Q>::identity();
        assert_eq!(poncelet_curve(&id, &mono_pencil(1, 2, 0)).unwrap(), curve(1, &[([0, 1, 0], 1)]));
        assert_eq!(
            poncelet_curve(&id, &mono_pencil(2, 3, 0)).unwrap(),
            curve(2, &[([0, 2, 0], 4), ([1, 0, 1], -1)])
        );
        assert_eq!(
            poncelet_curve(&id, &mono_pencil(3, 4, 0)).unwrap(),
            curve(3, &[([0, 3, 0], 2), ([1, 1, 1], -1)])
        );
    }

    #[test]
    fn split_examples() {
        let id = ConicFrame::<Q>::identity();
        // (u³, u v²): base u, reduced (u², v²), curve x·y
        let p = mono_pencil(2, 3, 1);
        let s = split_base_points(&p).unwrap();
        assert_eq!(s.base, BinaryForm::monomial(1, 1));
        assert_eq!(s.reduced, mono_pencil(1, 2, 0));
        assert_eq!(poncelet_curve(&id, &p).unwrap(), curve(2, &[([1, 1, 0], 1)]));
        // (u⁴, u²v²): base u², curve x²y
        let p = mono_pencil(3, 4, 2);
        let s = split_base_points(&p).unwrap();
        assert_eq!(s.base, BinaryForm::monomial(2, 2));
        assert_eq!(poncelet_curve(&id, &p).unwrap(), curve(3, &[([2, 1, 0], 1)]));
        // base-point free
        let p = mono_pencil(2, 3, 0);
        let s = split_base_points(&p).unwrap();
        assert_eq!(s.base.degree(), 0);
        assert_eq!(s.reduced, p);
    }

    #[test]
    fn tangent_product_of_linear_form_is_tangent_line() {
        let id = ConicFrame::<Q>::identity();
        // h vanishes at (0 : 1): tangent x = 0
        let h = BinaryForm::<Q>::monomial(1, 1);
        let t = PlaneCurve::new(tangent_product(&id, &h), Chart::Primal).unwrap();
        assert_eq!(t, curve(1, &[([1, 0, 0], 1)]));
        let tl = id.tangent_line(&ParamPoint::from_i64(3, 2));
        let h = BinaryForm::linear_vanishing_at(q(3), q(2));
        let t = PlaneCurve::new(tangent_product(&id, &h), Chart::Primal).unwrap();
        let expected = PlaneCurve::new(TernaryForm::linear(tl.coords()), Chart::Primal).unwrap();
        assert_eq!(t, expected);
    }

    #[test]
    fn float_split_is_flagged() {
        let p = Pencil::<f64>::from_i64s(&[0, 0, 0, 1], &[0, 1, 0, 0]).unwrap();
        let s = split_base_points(&p).unwrap();
        assert!(s.approximate);
        assert_eq!(s.base.degree(), 1);
        assert!(s.base.coeff(0).abs() < 1e-10);
    }

    #[test]
    fn plucker_c1() {
        let p = mono_pencil(1, 2, 0);
        let coords = plucker_coords(&p);
        // pairs (0,1), (0,2), (1,2); f = u² (index 2), g = v² (index 0)
        assert_eq!(coords, vec![q(0), q(-1), q(0)]);
        let l = plucker_map::<Q>(1);
        let image: Vec<Q> = l.iter().map(|row| crate::linalg::dot(row, &coords)).collect();
        let c = PlaneCurve::new(TernaryForm::new(1, image), Chart::Primal).unwrap();
        assert_eq!(c, curve(1, &[([0, 1, 0], 1)]));
    }

    #[test]
    fn plucker_map_c3_is_invertible() {
        let l = cached_plucker_map(3);
        assert_eq!(l.len(), 10);
        assert_eq!(crate::linalg::rank(&l), 10);
    }

    #[test]
    fn compose_examples() {
        let id = ConicFrame::<Q>::identity();
        let inner = mono_pencil(1, 2, 0);
        let s2 = BinaryForm::monomial(2, 2);
        let t2 = BinaryForm::monomial(2, 0);
        let comp = compose_pencil(&inner, (&s2, &t2)).unwrap();
        assert_eq!(comp, mono_pencil(3, 4, 0));
        let y = curve_form(&id, &inner);
        assert!(curve_form(&id, &comp).div_exact(&y).is_some());
        let s = BinaryForm::monomial(1, 1);
        let t = BinaryForm::monomial(1, 0);
        assert_eq!(compose_pencil(&inner, (&s, &t)).unwrap(), inner);
        let st = BinaryForm::monomial(2, 1);
        let comp = compose_pencil(&inner, (&s2, &st)).unwrap();
        assert_eq!(comp, mono_pencil(3, 4, 2));
        let split = split_base_points(&comp).unwrap();
        assert!(curve_form(&id, &split.reduced).div_exact(&y).is_some());
        assert_eq!(compose_pencil(&inner, (&s2, &s2)), Err(Error::DegeneratePencil));
    }

    #[test]
    fn dependent_pencil_rejected() {
        assert_eq!(Pencil::<Q>::from_i64s(&[1, 2, 3], &[2, 4, 6]), Err(Error::DegeneratePencil));
    }
}
