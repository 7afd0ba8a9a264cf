//! Tangent polygons: the pencil-side prediction and the traversal that uses
//! only the conic and the curve.

use num_complex::Complex64;

use crate::construction::Pencil;
use crate::error::{Error, Result};
use crate::forms::{BinaryForm, PlaneCurve, SymBiForm};
use crate::geom::{ConicFrame, ParamPoint, ProjVec};
use crate::membership::pullback_biform;
use crate::roots::binary_roots;
use crate::scalar::Scalar;

/// Chordal distance under which two parameters are identified.
pub const PARAM_TOL: f64 = 1e-7;

/// Imaginary part (relative to modulus) below which a parameter counts as real.
const REAL_TOL: f64 = 1e-9;
const FIXED_TOL: f64 = 1e-9;

/// Result of [`member_through`].
#[derive(Debug, Clone, PartialEq)]
pub struct MemberThrough<S> {
    pub member: BinaryForm<S>,
    /// `t₀` was a base point; `member` belongs to the pencil with the base
    /// point at `t₀` divided out.
    pub base_point: bool,
}

/// `g(t₀)·f − f(t₀)·g`, the member through `t₀`.
pub fn member_through<S: Scalar>(pencil: &Pencil<S>, t0: &ParamPoint<S>) -> Result<MemberThrough<S>> {
    let (mut f, mut g) = (pencil.f().clone(), pencil.g().clone());
    let factor = BinaryForm::linear_vanishing_at(t0.u.clone(), t0.v.clone());
    let mut base_point = false;
    loop {
        let (ft, gt) = (f.eval(&t0.u, &t0.v), g.eval(&t0.u, &t0.v));
        let scale = form_scale(&f).max(form_scale(&g));
        if !(ft.is_negligible(scale, 1e-12) && gt.is_negligible(scale, 1e-12)) {
            let member = f.scale(&gt).sub(&g.scale(&ft)).normalized();
            return Ok(MemberThrough { member, base_point });
        }
        base_point = true;
        match (f.div_exact(&factor), g.div_exact(&factor)) {
            (Some(a), Some(b)) if a.degree() >= 1 => (f, g) = (a, b),
            _ => return Err(Error::DegeneratePencil),
        }
    }
}

fn form_scale<S: Scalar>(f: &BinaryForm<S>) -> f64 {
    f.coeffs().iter().map(Scalar::magnitude).fold(0.0, f64::max)
}

/// All `n(n−1)/2` pairwise tangent intersections, ordered by `(i, j)`, `i < j`.
pub fn polygon_vertices<S: Scalar>(frame: &ConicFrame<S>, roots: &[ParamPoint<S>]) -> Result<Vec<ProjVec<S>>> {
    let mut out = Vec::with_capacity(roots.len() * roots.len().saturating_sub(1) / 2);
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            out.push(frame.tangent_meet(&roots[i], &roots[j]).map_err(|e| match e {
                Error::CoincidentParameters => Error::RepeatedRoot,
                other => other,
            })?);
        }
    }
    Ok(out)
}

/// Outcome of one traversal.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureReport {
    pub start: ParamPoint<Complex64>,
    pub params_found: Vec<ParamPoint<Complex64>>,
    pub closed: bool,
    pub polygon_size: usize,
    pub max_vertex_residual: f64,
    /// Rounds over the frontier of newly found parameters.
    pub iterations: usize,
    /// Parameters that are real up to rounding.
    pub real_count: usize,
    pub diagnostic: Option<String>,
}

fn is_real(t: &ParamPoint<Complex64>) -> bool {
    let scale = t.u.norm().max(t.v.norm());
    t.u.im.abs() <= REAL_TOL * scale && t.v.im.abs() <= REAL_TOL * scale
}

fn find(params: &[ParamPoint<Complex64>], t: &ParamPoint<Complex64>) -> Option<usize> {
    params.iter().position(|p| p.chordal_distance(t) < PARAM_TOL)
}

/// Parameters `b` with `G(t, b) = 0` for every `t`. Their tangent lines are
/// components of `C` (base points of the pencil) and belong to no polygon.
fn fixed_roots(g: &SymBiForm<Complex64>) -> Vec<ParamPoint<Complex64>> {
    let probe = |re, im| g.partial_eval(&Complex64::new(re, im), &Complex64::new(1.0, 0.0));
    let (first, second) = (probe(0.3127, 0.7411), probe(-1.0913, 0.4357));
    let scale = second.coeffs().iter().map(|x| x.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut out: Vec<ParamPoint<Complex64>> = Vec::new();
    for r in binary_roots(&first) {
        let n = r.u.norm().max(r.v.norm());
        let value = second.eval(&(r.u / n), &(r.v / n)).norm();
        if value <= FIXED_TOL * scale && find(&out, &r).is_none() {
            out.push(r);
        }
    }
    out
}

/// Traverses tangent polygons from `start` using only the conic and `C`.
///
/// The tangent at `t` meets `C` in `c` points; the second tangents through
/// them have parameters the roots `s` of `G(t, s)`, where `G` is the pullback
/// of `C`. Those roots join the parameter set until it is stable or exceeds
/// `c + 1` elements. Base-point parameters are set aside first.
pub fn closure_traverse<S: Scalar>(
    frame: &ConicFrame<S>,
    curve: &PlaneCurve<S>,
    start: &ParamPoint<S>,
    tol: f64,
) -> Result<ClosureReport> {
    let frame = frame.map(Scalar::to_complex)?;
    let curve = curve.map(Scalar::to_complex)?;
    let start = start.map(Scalar::to_complex);
    let c = curve.degree();
    let g = pullback_biform(&frame, &curve)?;
    let fixed = fixed_roots(&g);
    let mut params = vec![start.clone()];
    let mut frontier = vec![0usize];
    let mut iterations = 0;
    let mut diagnostic = None;
    let mut overflow = false;
    if find(&fixed, &start).is_some() {
        diagnostic = Some("start is a base point of the pencil".into());
        frontier.clear();
    }
    while !frontier.is_empty() && !overflow {
        iterations += 1;
        let mut next = Vec::new();
        for &i in &frontier {
            let t = params[i].clone();
            let restricted = g.partial_eval(&t.u, &t.v);
            if restricted.coeffs().iter().all(|x| x.norm() == 0.0) {
                diagnostic = Some("tangent line is a component of the curve".into());
                continue;
            }
            for s in binary_roots(&restricted) {
                if find(&params, &s).is_none() && find(&fixed, &s).is_none() {
                    params.push(s);
                    next.push(params.len() - 1);
                    if params.len() > c + 1 {
                        overflow = true;
                        break;
                    }
                }
            }
            if overflow {
                break;
            }
        }
        frontier = next;
    }

    let mut max_res: f64 = 0.0;
    let mut all_distinct = true;
    for i in 0..params.len() {
        for j in (i + 1)..params.len() {
            let v = frame.vertex_coords(&params[i], &params[j]);
            if v.iter().all(|x| x.norm() == 0.0) {
                all_distinct = false;
                continue;
            }
            let r = curve.normalized_residual(&v);
            max_res = max_res.max(if r.is_finite() { r } else { f64::INFINITY });
        }
    }
    if !all_distinct && diagnostic.is_none() {
        diagnostic = Some("coincident parameters in the traversal".into());
    }
    if overflow && diagnostic.is_none() {
        diagnostic = Some(format!("more than {} tangents; the polygon does not close", c + 1));
    }
    let closed = !overflow && params.len() <= c + 1 && max_res <= tol && diagnostic.is_none();
    let real_count = params.iter().filter(|t| is_real(t)).count();
    Ok(ClosureReport {
        start,
        polygon_size: params.len(),
        params_found: params,
        closed,
        max_vertex_residual: max_res,
        iterations,
        real_count,
        diagnostic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Chart;
    use crate::scalar::Rational;

    type Q = Rational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn cubes() -> Pencil<Q> {
        Pencil::from_i64s(&[0, 0, 0, 1], &[1, 0, 0, 0]).unwrap()
    }

    #[test]
    fn member_through_examples() {
        let m = member_through(&cubes(), &ParamPoint::from_i64(2, 1)).unwrap();
        assert!(!m.base_point);
        // τ³ − 8 up to sign
        assert_eq!(m.member, BinaryForm::from_i64s(&[8, 0, 0, -1]));
        let m = member_through(&cubes(), &ParamPoint::from_i64(0, 1)).unwrap();
        assert_eq!(m.member, BinaryForm::monomial(3, 3));
        let scaled = ParamPoint { u: q(4), v: q(2) };
        assert_eq!(member_through(&cubes(), &scaled).unwrap().member, BinaryForm::from_i64s(&[8, 0, 0, -1]));
    }

    #[test]
    fn member_through_base_point_is_flagged() {
        // (u³, u v²) has the base point (0 : 1)
        let p = Pencil::<Q>::from_i64s(&[0, 0, 0, 1], &[0, 1, 0, 0]).unwrap();
        let m = member_through(&p, &ParamPoint::from_i64(0, 1)).unwrap();
        assert!(m.base_point);
        assert_eq!(m.member.degree(), 2);
        assert_eq!(m.member.eval(&q(0), &q(1)), q(0));
    }

    #[test]
    fn vertices() {
        let id = ConicFrame::<Q>::identity();
        let v = polygon_vertices(&id, &[ParamPoint::from_i64(0, 1), ParamPoint::infinity()]).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].coords(), &[q(0), q(1), q(0)]);
        let roots: Vec<_> = (1..=5).map(|k| ParamPoint::from_i64(k, 1)).collect();
        assert_eq!(polygon_vertices(&id, &roots).unwrap().len(), 10);
        assert_eq!(
            polygon_vertices(&id, &[ParamPoint::from_i64(1, 1), ParamPoint::from_i64(2, 2)]),
            Err(Error::RepeatedRoot)
        );
    }

    #[test]
    fn cube_root_vertices_lie_on_the_conic_curve() {
        let id = ConicFrame::<Complex64>::identity();
        let c = PlaneCurve::<Complex64>::from_terms(2, &[([0, 2, 0], 4), ([1, 0, 1], -1)], Chart::Primal).unwrap();
        let roots: Vec<_> = (0..3)
            .map(|k| ParamPoint::affine(Complex64::from_polar(2.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0)))
            .collect();
        for v in polygon_vertices(&id, &roots).unwrap() {
            assert!(c.normalized_residual(v.coords()) < 1e-12);
        }
    }

    #[test]
    fn traversal_closes_on_the_triangle_curve() {
        let id = ConicFrame::<f64>::identity();
        let c = PlaneCurve::<f64>::from_terms(2, &[([0, 2, 0], 4), ([1, 0, 1], -1)], Chart::Primal).unwrap();
        let r = closure_traverse(&id, &c, &ParamPoint::affine(1.0), 1e-9).unwrap();
        assert!(r.closed, "{r:?}");
        assert_eq!(r.polygon_size, 3);
        assert_eq!(r.real_count, 1);
        assert!(r.max_vertex_residual < 1e-9);
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!(find(&r.params_found, &ParamPoint::affine(w)).is_some());
        assert!(find(&r.params_found, &ParamPoint::affine(w.conj())).is_some());
    }

    #[test]
    fn traversal_escapes_on_a_generic_conic() {
        let id = ConicFrame::<f64>::identity();
        let c = PlaneCurve::<f64>::from_terms(
            2,
            &[([2, 0, 0], 1), ([0, 2, 0], 3), ([0, 0, 2], 2), ([1, 1, 0], 1), ([0, 1, 1], -1)],
            Chart::Primal,
        )
        .unwrap();
        let r = closure_traverse(&id, &c, &ParamPoint::affine(0.7), 1e-9).unwrap();
        assert!(!r.closed);
        assert!(r.iterations <= 4);
    }
}
