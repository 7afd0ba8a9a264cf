//! The dual conic and the curve of jumping lines.
//!
//! For odd `c` the pencil defines a rank-2 bundle `F` on the plane with
//! `c₁(F) = −2`, `c₂(F) = c + 1`, as the kernel of `O² → O_S((c+1)/2)`.
//! Its jumping lines are the lines joining the two points of a divisor of the
//! pencil. Only that locus is computed here: a line meeting the conic at
//! `t₁, t₂` is a jumping line iff the Bezout form vanishes at `(t₁, t₂)`.

use crate::construction::{bezout_form, Pencil};
use crate::error::Result;
use crate::forms::{reduce_symmetric, Chart, PlaneCurve};
use crate::geom::{tangent_map, ConicFrame};
use crate::linalg::Mat3;
use crate::membership::{is_poncelet, MembershipVerdict, DEFAULT_TOL};
use crate::scalar::Scalar;

fn opposite(chart: Chart) -> Chart {
    match chart {
        Chart::Primal => Chart::Dual,
        Chart::Dual => Chart::Primal,
    }
}

/// `T* = T^{-⊤} J`: the frame whose conic points are the tangent lines of
/// the input conic, `conic_point(T*, t) = tangent_line(T, t)`.
pub fn dual_conic<S: Scalar>(frame: &ConicFrame<S>) -> ConicFrame<S> {
    let t = frame.inverse_transform().transpose().mul(&tangent_map());
    ConicFrame::new(t, opposite(frame.chart())).expect("product of invertible matrices")
}

/// The jumping-line curve, in line coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpingCurve<S> {
    pub curve: PlaneCurve<S>,
    /// Even `c`: the locus is well defined but carries no bundle.
    pub even_degree: bool,
}

/// Lines `ℓ` with `Tᵀℓ = (α, β, γ)` meet the conic where
/// `γu² + βuv + αv² = 0`, so `(q, p, r) = (γ, −β, α)` up to scale.
pub fn jumping_curve<S: Scalar>(frame: &ConicFrame<S>, pencil: &Pencil<S>) -> Result<JumpingCurve<S>> {
    let reduced = reduce_symmetric(&bezout_form(pencil));
    let tt = frame.transform().transpose();
    let sub = Mat3::from_fn(|i, j| match i {
        0 => tt.get(2, j).clone(),
        1 => -tt.get(1, j).clone(),
        _ => tt.get(0, j).clone(),
    });
    let form = reduced.poly().compose_linear(&sub);
    Ok(JumpingCurve {
        curve: PlaneCurve::new(form, opposite(frame.chart()))?,
        even_degree: pencil.c() % 2 == 0,
    })
}

/// Membership of the jumping curve for the dual conic.
pub fn duality_check<S: Scalar>(frame: &ConicFrame<S>, pencil: &Pencil<S>) -> Result<MembershipVerdict<S>> {
    let j = jumping_curve(frame, pencil)?;
    is_poncelet(&dual_conic(frame), &j.curve, DEFAULT_TOL)
}
