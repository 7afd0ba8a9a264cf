//! Deciding whether a curve is Poncelet related to a conic, and recovering
//! the pencil.
//!
//! `C` is Poncelet related to the framed conic iff its pullback
//! `G(t₁, t₂) = C(tangent_meet(t₁, t₂))` is a Bezout form, iff the
//! coefficient matrix `M` of `(u₁v₂ − u₂v₁)·G` has the shape `f gᵀ − g fᵀ`.
//! `M` is antisymmetric, so this is the statement `rank M = 2`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::construction::Pencil;
use crate::error::{Error, Result};
use crate::forms::{BinaryForm, PlaneCurve, SymBiForm, SymReduced};
use crate::geom::ConicFrame;
use crate::linalg;
use crate::scalar::{Mode, Scalar};

/// Default σ₃/σ₁ threshold for float verdicts.
pub const DEFAULT_TOL: f64 = 1e-8;

/// `G(t₁, t₂) = C(T · (2u₁u₂, u₁v₂ + u₂v₁, 2v₁v₂))`, expanded exactly.
pub fn pullback_biform<S: Scalar>(frame: &ConicFrame<S>, curve: &PlaneCurve<S>) -> Result<SymBiForm<S>> {
    if frame.chart() != curve.chart() {
        return Err(Error::ChartMismatch(format!(
            "frame is {:?}, curve is {:?}",
            frame.chart(),
            curve.chart()
        )));
    }
    let reference = curve.form().compose_linear(frame.transform());
    Ok(SymReduced::from_plane_form(&reference).expand())
}

/// Antisymmetric `(c+2) × (c+2)` coefficient matrix of `(u₁v₂ − u₂v₁)·G`;
/// entry `(a, b)` multiplies `u₁^a v₁^(c+1−a) u₂^b v₂^(c+1−b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymMatrix<S> {
    m: Vec<Vec<S>>,
}

impl<S: Scalar> AntisymMatrix<S> {
    pub fn size(&self) -> usize {
        self.m.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.m[i][j]
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.m
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        linalg::singular_values(linalg::to_complex_matrix(&self.m))
    }

    /// `σ₃/σ₁`; zero exactly when the rank is at most 2.
    pub fn residual(&self) -> f64 {
        let sv = self.singular_values();
        if sv[0] == 0.0 { 0.0 } else { sv[2] / sv[0] }
    }

    /// For a rank-2 matrix, a pencil `(a, b)` with `a bᵀ − b aᵀ = M`.
    fn decompose(&self) -> Result<Pencil<S>> {
        let n = self.size();
        let (i, j) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .max_by(|&(a, b), &(c, d)| self.m[a][b].magnitude().total_cmp(&self.m[c][d].magnitude()))
            .expect("nonempty");
        if self.m[i][j].is_zero() {
            return Err(Error::DegeneratePencil);
        }
        let scale = S::one() / self.m[j][i].clone();
        let a = BinaryForm::new((0..n).map(|k| self.m[k][j].clone() * scale.clone()).collect());
        let b = BinaryForm::new((0..n).map(|k| self.m[k][i].clone()).collect());
        Pencil::new(a, b)
    }
}

/// `M[a][b] = G[a−1][b] − G[a][b−1]`, with out-of-range entries zero.
pub fn antisym_matrix<S: Scalar>(g: &SymBiForm<S>) -> AntisymMatrix<S> {
    let c = g.c();
    let n = c + 2;
    let at = |i: Option<usize>, j: Option<usize>| match (i, j) {
        (Some(i), Some(j)) if i <= c && j <= c => g.entry(i, j).clone(),
        _ => S::zero(),
    };
    let m = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| at(a.checked_sub(1), Some(b)) - at(Some(a), b.checked_sub(1)))
                .collect()
        })
        .collect();
    AntisymMatrix { m }
}

/// Outcome of [`is_poncelet`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipVerdict<S> {
    pub is_poncelet: bool,
    /// Rank of `M`: exact, or the count of singular values above `tol · σ₁`.
    pub rank: usize,
    /// `σ₃/σ₁` of `M`.
    pub residual: f64,
    #[serde(skip)]
    pub pencil: Option<Pencil<S>>,
    /// Set when the curve contains the conic, so every chord endpoint pair is
    /// a zero of the pullback.
    pub degenerate: bool,
    pub reason: Option<String>,
}

/// The pullback restricted to the diagonal `t₁ = t₂`: the curve evaluated
/// along the conic, as a form of degree `2c`.
fn diagonal<S: Scalar>(g: &SymBiForm<S>) -> Vec<S> {
    let c = g.c();
    let mut out = vec![S::zero(); 2 * c + 1];
    for i in 0..=c {
        for j in 0..=c {
            out[i + j] = out[i + j].clone() + g.entry(i, j).clone();
        }
    }
    out
}

/// Decides membership. Exact scalars give an exact rank decision and an
/// exactly round-tripping pencil; float scalars compare `σ₃/σ₁` with `tol`.
pub fn is_poncelet<S: Scalar>(frame: &ConicFrame<S>, curve: &PlaneCurve<S>, tol: f64) -> Result<MembershipVerdict<S>> {
    if curve.degree() == 0 {
        return Err(Error::Shape("curve degree must be at least 1".into()));
    }
    let g = pullback_biform(frame, curve)?;
    let m = antisym_matrix(&g);
    let gscale = g.rows().iter().flatten().map(Scalar::magnitude).fold(0.0, f64::max);
    let sv = m.singular_values();
    let residual = if sv[0] == 0.0 { 0.0 } else { sv[2] / sv[0] };
    if diagonal(&g).iter().all(|x| x.is_negligible(gscale, tol.max(1e-14))) {
        return Ok(MembershipVerdict {
            is_poncelet: false,
            rank: numeric_or_exact_rank(&m, &sv, tol),
            residual,
            pencil: None,
            degenerate: true,
            reason: Some("curve contains the conic".into()),
        });
    }
    let rank = numeric_or_exact_rank(&m, &sv, tol);
    if rank > 2 {
        return Ok(MembershipVerdict { is_poncelet: false, rank, residual, pencil: None, degenerate: false, reason: None });
    }
    let pencil = match S::MODE {
        Mode::Exact => m.decompose()?,
        Mode::Float => rank_two_part(&m).decompose()?,
    };
    Ok(MembershipVerdict { is_poncelet: true, rank, residual, pencil: Some(pencil), degenerate: false, reason: None })
}

fn numeric_or_exact_rank<S: Scalar>(m: &AntisymMatrix<S>, sv: &[f64], tol: f64) -> usize {
    match S::MODE {
        Mode::Exact => linalg::rank(m.rows()),
        Mode::Float => {
            if sv[0] == 0.0 {
                return 0;
            }
            // rank 1 is impossible for an antisymmetric matrix
            let r = sv.iter().filter(|&&s| s > tol * sv[0]).count();
            if r <= 2 { 2 } else { r }
        }
    }
}

/// Best rank-2 antisymmetric approximation from the top two singular triples.
fn rank_two_part<S: Scalar>(m: &AntisymMatrix<S>) -> AntisymMatrix<S> {
    let a: DMatrix<Complex64> = linalg::to_complex_matrix(m.rows());
    let n = m.size();
    let svd = a.svd(true, true);
    let (u, vt) = (svd.u.expect("U requested"), svd.v_t.expect("V requested"));
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let mut low = DMatrix::<Complex64>::zeros(n, n);
    for &k in &order[..2] {
        let s = Complex64::new(svd.singular_values[k], 0.0);
        low += u.column(k) * vt.row(k) * s;
    }
    let entries = (0..n)
        .map(|i| (0..n).map(|j| S::approximate_complex((low[(i, j)] - low[(j, i)]) * 0.5)).collect())
        .collect();
    AntisymMatrix { m: entries }
}
