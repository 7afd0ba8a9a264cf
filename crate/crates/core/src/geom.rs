//! Projective-plane primitives around a smooth conic.
//!
//! A conic is always carried as a frame: an invertible transform `T` applied
//! to the reference conic `xz − y² = 0`, whose rational parametrization is
//! `(u : v) ↦ (u² : uv : v²)`. Transporting the parametrization through `T`
//! keeps every incidence identity exact in exact mode.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forms::{BinaryForm, Chart};
use crate::linalg::{cross, dot, Mat3};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Point,
    Line,
}

/// Homogeneous coordinates of a point or line, stored canonically.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjVec<S> {
    coords: [S; 3],
    kind: Kind,
    chart: Chart,
}

impl<S: Scalar> ProjVec<S> {
    /// Fails on the zero vector.
    pub fn new(coords: [S; 3], kind: Kind, chart: Chart) -> Result<Self> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::Shape("projective vector must be nonzero".into()));
        }
        let mut c = coords;
        S::normalize_projective(&mut c);
        Ok(Self { coords: c, kind, chart })
    }

    pub fn point(coords: [S; 3]) -> Result<Self> {
        Self::new(coords, Kind::Point, Chart::Primal)
    }

    pub fn line(coords: [S; 3]) -> Result<Self> {
        Self::new(coords, Kind::Line, Chart::Primal)
    }

    pub fn from_i64s(c: [i64; 3], kind: Kind) -> Self {
        Self::new(c.map(S::from_i64), kind, Chart::Primal).expect("nonzero literal")
    }

    pub fn coords(&self) -> &[S; 3] {
        &self.coords
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    /// Pairing `⟨line, point⟩`.
    pub fn pairing(&self, other: &Self) -> S {
        dot(&self.coords, &other.coords)
    }

    /// Line through two points, or intersection point of two lines.
    pub fn join(&self, other: &Self) -> Result<Self> {
        let kind = match self.kind {
            Kind::Point => Kind::Line,
            Kind::Line => Kind::Point,
        };
        Self::new(cross(&self.coords, &other.coords), kind, self.chart)
    }
}

/// A point `(u : v)` of the parameter line, canonical with `v = 1` unless `v = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPoint<S> {
    pub u: S,
    pub v: S,
}

impl<S: Scalar> ParamPoint<S> {
    pub fn new(u: S, v: S) -> Result<Self> {
        if u.is_zero() && v.is_zero() {
            return Err(Error::Shape("parameter (0 : 0) is not a point of P¹".into()));
        }
        if v.is_zero() {
            return Ok(Self { u: S::one(), v: S::zero() });
        }
        Ok(Self { u: u / v, v: S::one() })
    }

    /// Affine parameter `(t : 1)`.
    pub fn affine(t: S) -> Self {
        Self { u: t, v: S::one() }
    }

    pub fn infinity() -> Self {
        Self { u: S::one(), v: S::zero() }
    }

    pub fn from_i64(u: i64, v: i64) -> Self {
        Self::new(S::from_i64(u), S::from_i64(v)).expect("nonzero literal")
    }

    /// Veronese image `(u², uv, v²)`.
    pub fn veronese(&self) -> [S; 3] {
        [
            self.u.clone() * self.u.clone(),
            self.u.clone() * self.v.clone(),
            self.v.clone() * self.v.clone(),
        ]
    }

    /// `u₁v₂ − u₂v₁`.
    pub fn bracket(&self, other: &Self) -> S {
        self.u.clone() * other.v.clone() - other.u.clone() * self.v.clone()
    }

    /// Chordal distance on P¹: `|u₁v₂ − u₂v₁| / (‖t₁‖ ‖t₂‖)`.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        let n1 = (self.u.magnitude().powi(2) + self.v.magnitude().powi(2)).sqrt();
        let n2 = (other.u.magnitude().powi(2) + other.v.magnitude().powi(2)).sqrt();
        self.bracket(other).magnitude() / (n1 * n2)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ParamPoint<T> {
        ParamPoint { u: f(&self.u), v: f(&self.v) }
    }
}

/// Result of [`ConicFrame::tangency_params`].
#[derive(Debug, Clone, PartialEq)]
pub struct Tangency<S> {
    /// Binary quadratic whose roots are the parameters of the two tangency points.
    pub quadratic: BinaryForm<S>,
    /// The point lies on the conic: the quadratic has a double root.
    pub on_conic: bool,
}

impl Tangency<f64> {
    /// The two (possibly complex) tangency parameters.
    pub fn roots(&self) -> [ParamPoint<Complex64>; 2] {
        let c: Vec<Complex64> = self.quadratic.coeffs().iter().map(|x| Complex64::new(*x, 0.0)).collect();
        quadratic_roots(&c)
    }
}

/// Roots of `c₂u² + c₁uv + c₀v²` in P¹ over ℂ.
pub fn quadratic_roots(c: &[Complex64]) -> [ParamPoint<Complex64>; 2] {
    let (c0, c1, c2) = (c[0], c[1], c[2]);
    if c2.norm() == 0.0 {
        // one root at infinity, the other at u/v = −c0/c1
        let other = if c1.norm() == 0.0 {
            ParamPoint::infinity()
        } else {
            ParamPoint::affine(-c0 / c1)
        };
        return [ParamPoint::infinity(), other];
    }
    let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
    // numerically stable pairing
    let q = if (c1.conj() * disc).re >= 0.0 { -0.5 * (c1 + disc) } else { -0.5 * (c1 - disc) };
    let r1 = q / c2;
    let r2 = if q.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { c0 / q };
    [ParamPoint::affine(r1), ParamPoint::affine(r2)]
}

/// A smooth conic as the image of `xz = y²` under an invertible transform.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicFrame<S> {
    t: Mat3<S>,
    t_inv: Mat3<S>,
    chart: Chart,
}

/// Matrix of the reference quadratic form `xz − y²`.
pub fn reference_conic_matrix<S: Scalar>() -> Mat3<S> {
    let h = S::one() / S::from_i64(2);
    let z = S::zero();
    Mat3([
        [z.clone(), z.clone(), h.clone()],
        [z.clone(), -S::one(), z.clone()],
        [h, z.clone(), z],
    ])
}

/// `J`: sends `(u², uv, v²)` to `(v², −2uv, u²)`.
pub fn tangent_map<S: Scalar>() -> Mat3<S> {
    let z = S::zero();
    Mat3([
        [z.clone(), z.clone(), S::one()],
        [z.clone(), S::from_i64(-2), z.clone()],
        [S::one(), z.clone(), z],
    ])
}

impl<S: Scalar> ConicFrame<S> {
    /// Rejects singular transforms.
    pub fn new(t: Mat3<S>, chart: Chart) -> Result<Self> {
        let t_inv = t.inverse().ok_or(Error::SingularFrame)?;
        Ok(Self { t, t_inv, chart })
    }

    pub fn identity() -> Self {
        Self::new(Mat3::identity(), Chart::Primal).expect("identity is invertible")
    }

    pub fn transform(&self) -> &Mat3<S> {
        &self.t
    }

    pub fn inverse_transform(&self) -> &Mat3<S> {
        &self.t_inv
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    /// Frame `M · T`: the image of this conic under `M`.
    pub fn transformed(&self, m: &Mat3<S>) -> Result<Self> {
        Self::new(m.mul(&self.t), self.chart)
    }

    /// Symmetric matrix `T^{-⊤} M₀ T^{-1}` of the conic's quadratic form.
    pub fn conic_matrix(&self) -> Mat3<S> {
        self.t_inv
            .transpose()
            .mul(&reference_conic_matrix())
            .mul(&self.t_inv)
    }

    /// Quadratic form of the conic evaluated at `p`.
    pub fn conic_value(&self, p: &[S; 3]) -> S {
        let m = self.conic_matrix();
        dot(p, &m.mul_vec(p))
    }

    /// Coefficients `(a, b, c, d, e, f)` of `ax² + bxy + cy² + dxz + eyz + fz²`.
    pub fn conic_coefficients(&self) -> [S; 6] {
        let m = self.conic_matrix();
        let two = S::from_i64(2);
        [
            m.0[0][0].clone(),
            m.0[0][1].clone() * two.clone(),
            m.0[1][1].clone(),
            m.0[0][2].clone() * two.clone(),
            m.0[1][2].clone() * two,
            m.0[2][2].clone(),
        ]
    }

    /// `T · (u², uv, v²)`.
    pub fn conic_point(&self, t: &ParamPoint<S>) -> ProjVec<S> {
        ProjVec::new(self.t.mul_vec(&t.veronese()), Kind::Point, self.chart)
            .expect("Veronese image of a nonzero parameter is nonzero")
    }

    /// `T^{-⊤} · (v², −2uv, u²)`.
    pub fn tangent_line(&self, t: &ParamPoint<S>) -> ProjVec<S> {
        ProjVec::new(self.tangent_line_coords(t), Kind::Line, self.chart)
            .expect("tangent line of a nonzero parameter is nonzero")
    }

    pub(crate) fn tangent_line_coords(&self, t: &ParamPoint<S>) -> [S; 3] {
        self.t_inv
            .transpose()
            .mul_vec(&tangent_map().mul_vec(&t.veronese()))
    }

    /// Vertex coordinates `T · (2u₁u₂, u₁v₂ + u₂v₁, 2v₁v₂)` without the
    /// coincidence check (the diagonal gives `2·conic_point`).
    pub fn vertex_coords(&self, t1: &ParamPoint<S>, t2: &ParamPoint<S>) -> [S; 3] {
        let two = S::from_i64(2);
        let raw = [
            two.clone() * t1.u.clone() * t2.u.clone(),
            t1.u.clone() * t2.v.clone() + t2.u.clone() * t1.v.clone(),
            two * t1.v.clone() * t2.v.clone(),
        ];
        self.t.mul_vec(&raw)
    }

    /// Intersection of the tangents at `t1` and `t2`.
    pub fn tangent_meet(&self, t1: &ParamPoint<S>, t2: &ParamPoint<S>) -> Result<ProjVec<S>> {
        let scale = (t1.u.magnitude() + t1.v.magnitude()) * (t2.u.magnitude() + t2.v.magnitude());
        if t1.bracket(t2).is_negligible(scale, 1e-14) {
            return Err(Error::CoincidentParameters);
        }
        ProjVec::new(self.vertex_coords(t1, t2), Kind::Point, self.chart)
    }

    /// Parameters of the two tangents through `p`, as the binary quadratic
    /// `z'u² − 2y'uv + x'v²` with `(x', y', z') = T^{-1} p`.
    pub fn tangency_params(&self, p: &ProjVec<S>) -> Tangency<S> {
        let [x, y, z] = self.t_inv.mul_vec(p.coords());
        let quadratic = BinaryForm::new(vec![x, y * S::from_i64(-2), z]);
        let c = quadratic.coeffs();
        let disc = c[1].clone() * c[1].clone() - S::from_i64(4) * c[0].clone() * c[2].clone();
        let scale = c.iter().map(Scalar::magnitude).fold(0.0, f64::max).powi(2);
        Tangency {
            on_conic: disc.is_negligible(scale, 1e-12),
            quadratic,
        }
    }

    /// Restriction of a line to the conic: the quadratic `ℓᵀ T (u², uv, v²)`.
    pub fn restrict_line(&self, line: &ProjVec<S>) -> BinaryForm<S> {
        let w = self.t.transpose().mul_vec(line.coords());
        let [alpha, beta, gamma] = w;
        BinaryForm::new(vec![gamma, beta, alpha])
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<ConicFrame<T>> {
        ConicFrame::new(self.t.map(f), self.chart)
    }

    /// Builds a frame for the conic with symmetric matrix `a` from two distinct
    /// points `p0`, `p_inf` on it. `p_inf` becomes the point of parameter
    /// `(1 : 0)` and a rescaling of `p0` the point of parameter `(0 : 1)`.
    pub fn from_matrix_and_points(a: &Mat3<S>, p0: &[S; 3], p_inf: &[S; 3], chart: Chart) -> Result<Self> {
        let chord = cross(p0, p_inf);
        let pole = a.adjugate().mul_vec(&chord);
        let mam = dot(&pole, &a.mul_vec(&pole));
        let cross_term = dot(p_inf, &a.mul_vec(p0));
        let scale = a.max_magnitude() * norm_inf(p0) * norm_inf(p_inf);
        if cross_term.is_negligible(scale, 1e-13) {
            return Err(Error::SingularFrame);
        }
        let beta = -mam / (S::from_i64(2) * cross_term);
        let p0s = p0.clone().map(|x| x * beta.clone());
        Self::new(Mat3::from_columns([p_inf.clone(), pole, p0s]), chart)
    }
}

fn norm_inf<S: Scalar>(p: &[S; 3]) -> f64 {
    p.iter().map(Scalar::magnitude).fold(0.0, f64::max)
}

impl ConicFrame<Rational> {
    /// Exact frame for a rational conic through a known rational point.
    ///
    /// A second rational point is found as the residual intersection with a
    /// line through `p0`.
    pub fn from_matrix_with_point(a: &Mat3<Rational>, p0: &[Rational; 3], chart: Chart) -> Result<Self> {
        if !dot(p0, &a.mul_vec(p0)).is_zero() {
            return Err(Error::Shape("point is not on the conic".into()));
        }
        if a.det().is_zero() {
            return Err(Error::SingularFrame);
        }
        let ap0 = a.mul_vec(p0);
        // Try a few directions; the residual point of p0 + s·d is at
        // s = −2 dᵀA p0 / dᵀA d.
        for d in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [0, 1, 1], [1, 0, 1], [1, 2, 3]] {
            let d = d.map(Rational::from_i64);
            let dad = dot(&d, &a.mul_vec(&d));
            let dap = dot(&d, &ap0);
            if dad.is_zero() || dap.is_zero() {
                continue;
            }
            let s = -(Rational::from_i64(2) * dap) / dad;
            let p1 = std::array::from_fn(|i| p0[i].clone() + s.clone() * d[i].clone());
            return Self::from_matrix_and_points(a, p0, &p1, chart);
        }
        Err(Error::SingularFrame)
    }
}

impl ConicFrame<Complex64> {
    /// Frame from the orthonormal eigenbasis of the conic matrix, scaled so
    /// the conic becomes `x² + y² − z²` (or the sphere, with `z` imaginary).
    /// Two such frames differ by a unitary reparametrization, so unitarily
    /// invariant quantities computed in it depend on the conic alone.
    pub fn principal(coef: &[f64; 6]) -> Result<Self> {
        let a = symmetric_from_coefficients(coef);
        let m = nalgebra::Matrix3::from_fn(|i, j| *a.get(i, j));
        let eig = m.symmetric_eigen();
        let d = eig.eigenvalues;
        let scale = d.amax();
        if scale == 0.0 || d.iter().any(|x| x.abs() <= 1e-14 * scale) {
            return Err(Error::SingularFrame);
        }
        let positive = d.iter().filter(|x| **x > 0.0).count();
        // odd axis: the eigenvalue whose sign is in the minority
        let odd = match positive {
            1 => d.iter().position(|x| *x > 0.0),
            2 => d.iter().position(|x| *x < 0.0),
            _ => Some(d.imax()),
        }
        .expect("sign pattern has a minority");
        let definite = positive == 0 || positive == 3;
        let mut rest = (0..3).filter(|&k| k != odd);
        let (ia, ib) = (rest.next().unwrap(), rest.next().unwrap());
        // sign-fixed eigenvectors keep the frame continuous in `coef`
        let col = |k: usize, s: Complex64| -> [Complex64; 3] {
            let v = eig.eigenvectors.column(k);
            let big = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            let sign = if big < 0.0 { -1.0 } else { 1.0 };
            std::array::from_fn(|i| s * (sign * v[i] / d[k].abs().sqrt()))
        };
        let one = Complex64::new(1.0, 0.0);
        let ea = col(ia, one);
        let eb = col(ib, one);
        let eo = col(odd, if definite { Complex64::new(0.0, 1.0) } else { one });
        // (u², uv, v²) ↦ (u² − v²) ea + 2uv eb + (u² + v²) eo
        let t = Mat3::from_fn(|i, j| match j {
            0 => ea[i] + eo[i],
            1 => eb[i] * 2.0,
            _ => eo[i] - ea[i],
        });
        ConicFrame::new(t, Chart::Primal)
    }
}

/// Symmetric matrix of the quadratic form with coefficients `(a, b, c, d, e, f)`.
pub fn symmetric_from_coefficients(c: &[f64; 6]) -> Mat3<f64> {
    Mat3([
        [c[0], c[1] / 2.0, c[3] / 2.0],
        [c[1] / 2.0, c[2], c[4] / 2.0],
        [c[3] / 2.0, c[4] / 2.0, c[5]],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn pp(u: i64, v: i64) -> ParamPoint<Q> {
        ParamPoint::from_i64(u, v)
    }

    fn pt(c: [i64; 3]) -> ProjVec<Q> {
        ProjVec::from_i64s(c, Kind::Point)
    }

    fn ln(c: [i64; 3]) -> ProjVec<Q> {
        ProjVec::from_i64s(c, Kind::Line)
    }

    #[test]
    fn identity_conic_matrix() {
        let m = ConicFrame::<Q>::identity().conic_matrix();
        let h = Q::from_ratio(1, 2);
        assert_eq!(m, Mat3([[q(0), q(0), h.clone()], [q(0), q(-1), q(0)], [h, q(0), q(0)]]));
    }

    #[test]
    fn diagonal_frame_points_lie_on_conic() {
        let f = ConicFrame::new(Mat3::diag([q(2), q(1), q(1)]), Chart::Primal).unwrap();
        for t in [pp(0, 1), pp(1, 0), pp(1, 1), pp(3, -2), pp(5, 7)] {
            assert!(f.conic_value(f.conic_point(&t).coords()).is_zero());
        }
    }

    #[test]
    fn identity_conic_points() {
        let f = ConicFrame::<Q>::identity();
        assert_eq!(f.conic_point(&pp(0, 1)), pt([0, 0, 1]));
        assert_eq!(f.conic_point(&pp(1, 1)), pt([1, 1, 1]));
        assert_eq!(f.conic_point(&pp(1, 0)), pt([1, 0, 0]));
    }

    #[test]
    fn identity_tangent_lines() {
        let f = ConicFrame::<Q>::identity();
        assert_eq!(f.tangent_line(&pp(0, 1)), ln([1, 0, 0]));
        assert_eq!(f.tangent_line(&pp(1, 0)), ln([0, 0, 1]));
    }

    #[test]
    fn tangent_meet_examples() {
        let f = ConicFrame::<Q>::identity();
        let m = f.tangent_meet(&pp(0, 1), &pp(1, 0)).unwrap();
        assert_eq!(m, pt([0, 1, 0]));
        assert!(ln([1, 0, 0]).pairing(&m).is_zero());
        assert!(ln([0, 0, 1]).pairing(&m).is_zero());
        assert_eq!(f.tangent_meet(&pp(2, 1), &pp(2, 1)), Err(Error::CoincidentParameters));
        assert_eq!(
            f.tangent_meet(&pp(3, 1), &pp(-1, 2)).unwrap(),
            f.tangent_meet(&pp(-1, 2), &pp(3, 1)).unwrap()
        );
    }

    #[test]
    fn tangent_meet_cube_roots_float() {
        let f = ConicFrame::<Complex64>::identity();
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let t1 = ParamPoint::affine(Complex64::new(2.0, 0.0));
        let t2 = ParamPoint::affine(2.0 * w);
        let p = f.tangent_meet(&t1, &t2).unwrap();
        let expected = [8.0 * w, 2.0 + 2.0 * w, Complex64::new(2.0, 0.0)];
        let mut e = expected;
        Complex64::normalize_projective(&mut e);
        for i in 0..3 {
            assert!((p.coords()[i] - e[i]).norm() < 1e-12);
        }
        let [x, y, z] = *p.coords();
        assert!((4.0 * y * y - x * z).norm() < 1e-12);
    }

    #[test]
    fn tangency_params_examples() {
        let f = ConicFrame::<Q>::identity();
        let t = f.tangency_params(&pt([0, 1, 0]));
        assert_eq!(t.quadratic, BinaryForm::from_i64s(&[0, -2, 0]));
        assert!(!t.on_conic);
        let t = f.tangency_params(&pt([1, 0, 0]));
        assert_eq!(t.quadratic, BinaryForm::from_i64s(&[1, 0, 0]));
        assert!(t.on_conic);
        let ff = ConicFrame::<f64>::identity();
        let r = ff.tangency_params(&ProjVec::from_i64s([0, 1, 0], Kind::Point)).roots();
        let has = |target: &ParamPoint<Complex64>| r.iter().any(|x| x.chordal_distance(target) < 1e-14);
        assert!(has(&ParamPoint::affine(Complex64::new(0.0, 0.0))));
        assert!(has(&ParamPoint::infinity()));
    }

    #[test]
    fn restrict_line_examples() {
        let f = ConicFrame::<Q>::identity();
        // (α, β, γ) = (a, b, c), stored as coefficients of v², uv, u²
        assert_eq!(f.restrict_line(&ln([3, -5, 7])).normalized(), BinaryForm::from_i64s(&[7, -5, 3]));
        assert_eq!(f.restrict_line(&ln([0, 1, 0])), BinaryForm::from_i64s(&[0, 1, 0]));
        for t in [pp(1, 3), pp(-2, 5), pp(1, 0)] {
            let r = f.restrict_line(&f.tangent_line(&t));
            let c = r.coeffs();
            assert!((c[1].clone() * c[1].clone() - q(4) * c[0].clone() * c[2].clone()).is_zero());
            assert!(r.eval(&t.u, &t.v).is_zero());
        }
    }

    #[test]
    fn frame_from_matrix_with_point() {
        // circle x² + y² − z² through (1, 0, 1)
        let a = Mat3::diag([q(1), q(1), q(-1)]);
        let f = ConicFrame::from_matrix_with_point(&a, &[q(1), q(0), q(1)], Chart::Primal).unwrap();
        let m = f.conic_matrix();
        // proportional to a
        let ratio = m.0[0][0].clone() / a.0[0][0].clone();
        assert_eq!(m, a.scale(&ratio));
    }

    fn proportional(a: &[Complex64; 6], b: &[f64; 6]) -> bool {
        let k = (0..6).max_by(|&i, &j| b[i].abs().total_cmp(&b[j].abs())).unwrap();
        let r = a[k] / b[k];
        a.iter().zip(b).all(|(x, y)| (x - r * y).norm() < 1e-12 * r.norm())
    }

    #[test]
    fn principal_frame_traces_the_conic() {
        for coef in [[1.0, 0.3, -2.0, 0.5, 0.0, 0.7], [1.0, 0.0, 1.0, 0.0, 0.0, 1.0], [0.0, 0.0, -1.0, 1.0, 0.0, 0.0]] {
            let f = ConicFrame::principal(&coef).unwrap();
            assert!(proportional(&f.conic_coefficients(), &coef), "{coef:?}");
        }
        assert!(ConicFrame::principal(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn principal_frame_is_real_iff_the_conic_has_real_points() {
        let real = ConicFrame::principal(&[1.0, 0.0, 1.0, 0.0, 0.0, -1.0]).unwrap();
        assert!(real.transform().0.iter().flatten().all(|z| z.im == 0.0));
        let sphere = ConicFrame::principal(&[1.0, 0.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(sphere.transform().0.iter().flatten().any(|z| z.im != 0.0));
    }
}
