//! Numerical experiments on the projection from (conic, curve) pairs to
//! curves: recovering the conic from a Poncelet curve, tangent-space ranks,
//! and the intersection of two Poncelet varieties.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::construction::{curve_form, plucker_coords, plucker_pairs, Pencil};
use crate::error::{Error, Result};
use crate::forms::{monomials, BinaryForm, PlaneCurve, TernaryForm};
use crate::geom::{symmetric_from_coefficients, ConicFrame, ParamPoint};
use crate::linalg::{self, Mat3};
use crate::membership::{antisym_matrix, is_poncelet, pullback_biform, DEFAULT_TOL};
use crate::random;
use crate::roots::binary_roots;
use crate::scalar::{Mode, Rational, Scalar};

/// Candidates whose normalized determinant falls below this are rejected.
pub const DET_FLOOR: f64 = 1e-10;

/// Default projective distance within which candidates are merged.
pub const CLUSTER_RADIUS: f64 = 1e-4;

/// Unit 6-vector, first entry above `1e-9` made positive.
pub fn normalize_conic(coef: &[f64; 6]) -> Option<[f64; 6]> {
    let n = coef.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    let mut v = coef.map(|x| x / n);
    if let Some(p) = v.iter().find(|x| x.abs() > 1e-9) {
        if *p < 0.0 {
            v = v.map(|x| -x);
        }
    }
    Some(v)
}

/// `sin` of the angle between two conics as lines through the origin of ℝ⁶.
pub fn projective_distance(a: &[f64; 6], b: &[f64; 6]) -> f64 {
    let (Some(a), Some(b)) = (normalize_conic(a), normalize_conic(b)) else { return f64::INFINITY };
    let d: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    (1.0 - d * d).max(0.0).sqrt()
}

/// Coefficient vector `(a, b, c, d, e, f)` of `ax² + bxy + cy² + dxz + eyz + fz²`.
pub fn conic_vector<S: Scalar>(frame: &ConicFrame<S>) -> [f64; 6] {
    frame.conic_coefficients().map(|x| x.to_complex().re)
}

/// Curve with a precomputed complex copy, evaluated against candidate conics.
pub struct Objective {
    curve: PlaneCurve<Complex64>,
}

impl Objective {
    pub fn new<S: Scalar>(curve: &PlaneCurve<S>) -> Result<Self> {
        if curve.degree() < 1 {
            return Err(Error::Shape("curve degree must be at least 1".into()));
        }
        Ok(Self { curve: curve.map(Scalar::to_complex)? })
    }

    /// `W M W` with `W = diag(C(c+1, a)^{-1/2})`: in these coordinates the
    /// reparametrizations of the principal frame act unitarily on `M`.
    fn weighted_matrix(&self, coef: &[f64; 6]) -> Option<DMatrix<Complex64>> {
        let v = Self::admissible(coef)?;
        let frame = ConicFrame::principal(&v).ok()?;
        let g = pullback_biform(&frame, &self.curve).ok()?;
        let mut m = linalg::to_complex_matrix(antisym_matrix(&g).rows());
        let n = m.nrows();
        let w: Vec<f64> = (0..n).map(|a| binomial(n - 1, a).sqrt().recip()).collect();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] *= w[i] * w[j];
            }
        }
        Some(m)
    }

    fn admissible(coef: &[f64; 6]) -> Option<[f64; 6]> {
        let v = normalize_conic(coef)?;
        (symmetric_from_coefficients(&v).det().abs() >= DET_FLOOR).then_some(v)
    }

    /// `σ₃/σ₁` of the weighted matrix, or `+∞` for inadmissible input.
    pub fn residual(&self, coef: &[f64; 6]) -> f64 {
        self.weighted_matrix(coef).map_or(f64::INFINITY, sigma_ratio)
    }

    /// 4×4 Pfaffians of the weighted matrix scaled to unit Frobenius norm,
    /// split into real and imaginary parts. They vanish exactly when
    /// rank `M ≤ 2`, and their norm is unitarily invariant.
    fn pfaffians(&self, coef: &[f64; 6]) -> Option<Vec<f64>> {
        let m = self.weighted_matrix(coef)?;
        let norm = m.norm();
        if norm == 0.0 {
            return None;
        }
        let m = m / Complex64::new(norm, 0.0);
        let n = m.nrows();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for l in (k + 1)..n {
                        let p = m[(i, j)] * m[(k, l)] - m[(i, k)] * m[(j, l)] + m[(i, l)] * m[(j, k)];
                        out.push(p.re);
                        out.push(p.im);
                    }
                }
            }
        }
        Some(out)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn sigma_ratio(m: DMatrix<Complex64>) -> f64 {
    let sv = linalg::singular_values(m);
    if sv[0] == 0.0 || sv.len() < 3 { f64::INFINITY } else { sv[2] / sv[0] }
}

/// `σ₃/σ₁` of the antisymmetric matrix of the curve pulled back along the
/// candidate conic; `+∞` for near-singular candidates.
pub fn membership_residual<S: Scalar>(coef: &[f64; 6], curve: &PlaneCurve<S>) -> f64 {
    Objective::new(curve).map_or(f64::INFINITY, |o| o.residual(coef))
}

/// Residual for an explicit frame of the candidate conic.
pub fn frame_residual<S: Scalar>(frame: &ConicFrame<S>, curve: &PlaneCurve<S>) -> f64 {
    pullback_biform(frame, curve).map_or(f64::INFINITY, |g| antisym_matrix(&g).residual())
}

/// Orthonormal basis of the complement of the unit vector `x` in ℝ⁶.
fn tangent_basis(x: &[f64; 6]) -> [[f64; 6]; 5] {
    let mut basis: Vec<[f64; 6]> = Vec::with_capacity(5);
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs()));
    for &e in &order {
        let mut v = [0.0; 6];
        v[e] = 1.0;
        for w in std::iter::once(x).chain(basis.iter()) {
            let d: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
            for (vi, wi) in v.iter_mut().zip(w) {
                *vi -= d * wi;
            }
        }
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-6 {
            basis.push(v.map(|a| a / n));
        }
        if basis.len() == 5 {
            break;
        }
    }
    std::array::from_fn(|i| basis[i])
}

fn chart_point(x: &[f64; 6], basis: &[[f64; 6]; 5], y: &[f64]) -> [f64; 6] {
    let mut p = *x;
    for (b, yi) in basis.iter().zip(y) {
        for (pi, bi) in p.iter_mut().zip(b) {
            *pi += yi * bi;
        }
    }
    normalize_conic(&p).unwrap_or(*x)
}

/// Settings for [`recover_conics`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecoveryOptions {
    pub starts: usize,
    pub seed: u64,
    /// Residual below which a polished start counts as a solution.
    pub tol: f64,
    pub cluster_radius: f64,
    /// Function evaluations allowed for the simplex stage.
    pub simplex_evals: usize,
    /// Iterations allowed for the Gauss–Newton stage.
    pub polish_iters: usize,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        Self { starts: 100, seed: 0, tol: DEFAULT_TOL, cluster_radius: CLUSTER_RADIUS, simplex_evals: 300, polish_iters: 100 }
    }
}

/// One cluster of converged starts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub conic: [f64; 6],
    pub residual: f64,
    pub basin_count: usize,
}

/// Outcome of [`recover_conics`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryResult {
    /// Sorted by residual.
    pub candidates: Vec<Candidate>,
    pub target_matched: Option<bool>,
    pub starts: usize,
    pub seed: u64,
}

impl RecoveryResult {
    /// Records whether exactly one cluster exists and it lies within `radius`
    /// of `target`.
    pub fn match_target(&mut self, target: &[f64; 6], radius: f64) -> bool {
        let ok = self.candidates.len() == 1 && projective_distance(&self.candidates[0].conic, target) < radius;
        self.target_matched = Some(ok);
        ok
    }
}

/// Final point and verified residual of one start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalResult {
    pub conic: [f64; 6],
    pub residual: f64,
}

/// `Q diag(λ) Qᵀ` with `Q` a Haar rotation and `|λᵢ| ∈ [1/4, 1]`; indefinite
/// unless `definite`. Balanced curves have their conics in this range.
fn random_conic(rng: &mut impl Rng, definite: bool) -> [f64; 6] {
    let q = loop {
        let m = nalgebra::Matrix3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        if m.determinant().abs() > 1e-3 {
            break m.qr().q();
        }
    };
    let mut d = nalgebra::Vector3::from_fn(|_, _| rng.gen_range(0.25..1.0));
    if !definite {
        d[2] = -d[2];
    }
    let a = q * nalgebra::Matrix3::from_diagonal(&d) * q.transpose();
    coefficients_of(&a)
}

fn coefficients_of(a: &nalgebra::Matrix3<f64>) -> [f64; 6] {
    let v = [a[(0, 0)], 2.0 * a[(0, 1)], a[(1, 1)], 2.0 * a[(0, 2)], 2.0 * a[(1, 2)], a[(2, 2)]];
    normalize_conic(&v).unwrap_or(v)
}

fn conic_matrix(coef: &[f64; 6]) -> nalgebra::Matrix3<f64> {
    let a = symmetric_from_coefficients(coef);
    nalgebra::Matrix3::from_fn(|i, j| *a.get(i, j))
}

fn bombieri_norm_sqr(form: &TernaryForm<Complex64>) -> f64 {
    let d = form.degree();
    let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
    monomials(d)
        .iter()
        .zip(form.coeffs())
        .map(|(e, a)| a.norm_sqr() * fact(e[0]) * fact(e[1]) * fact(e[2]) / fact(d))
        .sum()
}

/// `G ∈ SL₃(ℝ)`, positive definite, approximately minimizing the Bombieri
/// norm of `C∘G`. The minimizer is unique up to rotations, and the conic of a
/// Poncelet pair is well conditioned in the balanced coordinates.
pub fn balancing_transform(curve: &PlaneCurve<Complex64>) -> nalgebra::Matrix3<f64> {
    let form = curve.form();
    let value = |g: &nalgebra::Matrix3<f64>| {
        let m = Mat3::from_fn(|i, j| Complex64::new(g[(i, j)], 0.0));
        bombieri_norm_sqr(&form.compose_linear(&m)).ln()
    };
    let mut basis = Vec::with_capacity(5);
    for (i, j) in [(0, 1), (1, 2)] {
        let mut m = nalgebra::Matrix3::zeros();
        m[(i, i)] = 1.0;
        m[(j, j)] = -1.0;
        basis.push(m);
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let mut m = nalgebra::Matrix3::zeros();
        m[(i, j)] = 1.0;
        m[(j, i)] = 1.0;
        basis.push(m);
    }
    let mut g = nalgebra::Matrix3::identity();
    for _ in 0..200 {
        let f0 = value(&g);
        let h = 1e-6;
        let grad: Vec<f64> = basis.iter().map(|b| (value(&(g * (b * h).exp())) - f0) / h).collect();
        let norm2: f64 = grad.iter().map(|x| x * x).sum();
        if norm2 < 1e-18 {
            break;
        }
        let dir = basis.iter().zip(&grad).fold(nalgebra::Matrix3::zeros(), |acc, (b, gi)| acc - b * *gi);
        let mut step = 0.5;
        loop {
            let cand = g * (dir * step).exp();
            if value(&cand) < f0 - 1e-4 * step * norm2 {
                g = cand;
                break;
            }
            step *= 0.5;
            if step < 1e-12 {
                return g;
            }
        }
    }
    g
}

fn log_residual(obj: &Objective, x: &[f64; 6]) -> f64 {
    let r = obj.residual(x);
    if r.is_finite() { (r + 1e-300).log10() } else { f64::INFINITY }
}

/// Nelder–Mead on `log₁₀ σ₃/σ₁` in a tangent chart at `x0`.
fn simplex_descent(obj: &Objective, x0: &[f64; 6], max_evals: usize) -> [f64; 6] {
    const N: usize = 5;
    let basis = tangent_basis(x0);
    let f = |y: &[f64; N]| log_residual(obj, &chart_point(x0, &basis, y));
    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    let origin = [0.0; N];
    simplex.push((origin, f(&origin)));
    for i in 0..N {
        let mut y = [0.0; N];
        y[i] = 0.25;
        simplex.push((y, f(&y)));
    }
    let mut evals = N + 1;
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[N].1);
        let spread: f64 = simplex.iter().skip(1).map(|(y, _)| dist(y, &simplex[0].0)).fold(0.0, f64::max);
        if best < -14.0 || spread < 1e-11 || (worst - best).abs() < 1e-12 && best.is_finite() {
            break;
        }
        let mut centroid = [0.0; N];
        for (y, _) in &simplex[..N] {
            for k in 0..N {
                centroid[k] += y[k] / N as f64;
            }
        }
        let along = |t: f64| -> [f64; N] { std::array::from_fn(|k| centroid[k] + t * (simplex[N].0[k] - centroid[k])) };
        let yr = along(-1.0);
        let fr = f(&yr);
        evals += 1;
        if fr < simplex[0].1 {
            let ye = along(-2.0);
            let fe = f(&ye);
            evals += 1;
            simplex[N] = if fe < fr { (ye, fe) } else { (yr, fr) };
        } else if fr < simplex[N - 1].1 {
            simplex[N] = (yr, fr);
        } else {
            let (yc, fc) = if fr < simplex[N].1 {
                let y = along(-0.5);
                (y, f(&y))
            } else {
                let y = along(0.5);
                (y, f(&y))
            };
            evals += 1;
            if fc < simplex[N].1.min(fr) {
                simplex[N] = (yc, fc);
            } else {
                let y0 = simplex[0].0;
                for s in simplex.iter_mut().skip(1) {
                    s.0 = std::array::from_fn(|k| y0[k] + 0.5 * (s.0[k] - y0[k]));
                    s.1 = f(&s.0);
                }
                evals += N;
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    chart_point(x0, &basis, &simplex[0].0)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Levenberg–Marquardt on the Pfaffian residual vector, finite-difference
/// Jacobian in a tangent chart re-centered after every accepted step.
fn gauss_newton_polish(obj: &Objective, x0: &[f64; 6], iters: usize) -> [f64; 6] {
    let mut x = *x0;
    let mut mu = 1e-3;
    for _ in 0..iters {
        let Some(r0) = obj.pfaffians(&x) else { break };
        let norm0 = r0.iter().map(|v| v * v).sum::<f64>();
        if norm0 < 1e-30 {
            break;
        }
        let basis = tangent_basis(&x);
        let h = 1e-7;
        let mut jac = DMatrix::<f64>::zeros(r0.len(), 5);
        let mut ok = true;
        for k in 0..5 {
            let mut y = [0.0; 5];
            y[k] = h;
            match obj.pfaffians(&chart_point(&x, &basis, &y)) {
                Some(r) => {
                    for (i, (a, b)) in r.iter().zip(&r0).enumerate() {
                        jac[(i, k)] = (a - b) / h;
                    }
                }
                None => ok = false,
            }
        }
        if !ok {
            break;
        }
        let r = DVector::from_column_slice(&r0);
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &r;
        let mut accepted = false;
        for _ in 0..8 {
            let mut a = jtj.clone();
            for k in 0..5 {
                a[(k, k)] += mu * (1.0 + jtj[(k, k)]);
            }
            let Some(step) = a.lu().solve(&(-&jtr)) else {
                mu *= 10.0;
                continue;
            };
            let cand = chart_point(&x, &basis, step.as_slice());
            if let Some(rc) = obj.pfaffians(&cand) {
                let nc = rc.iter().map(|v| v * v).sum::<f64>();
                if nc < norm0 {
                    x = cand;
                    mu = (mu / 5.0).max(1e-12);
                    accepted = true;
                    break;
                }
            }
            mu *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    x
}

/// Simplex descent then Gauss–Newton polish from a single start.
pub fn local_solve(obj: &Objective, start: &[f64; 6], opts: &RecoveryOptions) -> LocalResult {
    let coarse = simplex_descent(obj, start, opts.simplex_evals);
    let fine = gauss_newton_polish(obj, &coarse, opts.polish_iters);
    let (conic, residual) = {
        let (rc, rf) = (obj.residual(&coarse), obj.residual(&fine));
        if rf <= rc { (fine, rf) } else { (coarse, rc) }
    };
    LocalResult { conic, residual }
}

/// Start vector `index` of the run with the given seed.
/// One start in eight has no real points.
pub fn start_conic(seed: u64, index: usize) -> [f64; 6] {
    let mut rng = random::rng(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    random_conic(&mut rng, index % 8 == 7)
}

/// Multi-start search for conics to which `curve` is Poncelet related.
/// Starts run in parallel; results are aggregated in start order.
pub fn recover_conics<S: Scalar>(curve: &PlaneCurve<S>, opts: &RecoveryOptions) -> Result<RecoveryResult> {
    if curve.degree() < 2 {
        return Err(Error::Shape("recovery needs curve degree at least 2".into()));
    }
    let complex = curve.map(Scalar::to_complex)?;
    // search in balanced coordinates x = G x′, report in the original ones
    let g = balancing_transform(&complex);
    let g_inv = g.try_inverse().ok_or(Error::SingularFrame)?;
    let gc = Mat3::from_fn(|i, j| Complex64::new(g[(i, j)], 0.0));
    let balanced = PlaneCurve::new(complex.form().compose_linear(&gc), complex.chart())?;
    let search = Objective::new(&balanced)?;
    let verify = Objective::new(&complex)?;
    let locals: Vec<LocalResult> = (0..opts.starts)
        .into_par_iter()
        .map(|i| {
            let local = local_solve(&search, &start_conic(opts.seed, i), opts);
            let conic = coefficients_of(&(g_inv.transpose() * conic_matrix(&local.conic) * g_inv));
            LocalResult { conic, residual: verify.residual(&conic) }
        })
        .collect();
    Ok(RecoveryResult {
        candidates: cluster(&locals, opts.tol, opts.cluster_radius),
        target_matched: None,
        starts: opts.starts,
        seed: opts.seed,
    })
}

/// Groups solutions below `tol` by projective distance; each cluster is
/// represented by its lowest-residual member.
pub fn cluster(locals: &[LocalResult], tol: f64, radius: f64) -> Vec<Candidate> {
    let mut sols: Vec<&LocalResult> = locals.iter().filter(|l| l.residual < tol).collect();
    sols.sort_by(|a, b| a.residual.total_cmp(&b.residual));
    let mut out: Vec<Candidate> = Vec::new();
    for s in sols {
        match out.iter_mut().find(|c| projective_distance(&c.conic, &s.conic) < radius) {
            Some(c) => c.basin_count += 1,
            None => out.push(Candidate { conic: s.conic, residual: s.residual, basin_count: 1 }),
        }
    }
    out
}

/// Derivatives of all Plücker minors with respect to the `2(c+2)`
/// coefficients of `(f, g)`.
fn plucker_jacobian<S: Scalar>(pencil: &Pencil<S>) -> Vec<Vec<S>> {
    let n = pencil.c() + 2;
    let (f, g) = (pencil.f(), pencil.g());
    plucker_pairs(n)
        .into_iter()
        .map(|(i, j)| {
            let mut row = vec![S::zero(); 2 * n];
            row[i] = g.coeff(j).clone();
            row[j] = -g.coeff(i).clone();
            row[n + j] = f.coeff(i).clone();
            row[n + i] = -f.coeff(j).clone();
            row
        })
        .collect()
}

/// Linear map from Plücker coordinates to unnormalized curve coefficients
/// in the given frame; columns are the curves of monomial pencils.
pub fn frame_plucker_map<S: Scalar>(frame: &ConicFrame<S>, c: usize) -> Vec<Vec<S>> {
    let columns: Vec<Vec<S>> = plucker_pairs(c + 2)
        .into_iter()
        .map(|(i, j)| {
            let p = Pencil::new(BinaryForm::monomial(c + 1, i), BinaryForm::monomial(c + 1, j))
                .expect("distinct monomials are independent");
            curve_form(frame, &p).coeffs().to_vec()
        })
        .collect();
    let rows = columns[0].len();
    (0..rows).map(|r| columns.iter().map(|col| col[r].clone()).collect()).collect()
}

fn mat_mul<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Vec<Vec<S>> {
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| row.iter().zip(b).fold(S::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone()))
                .collect()
        })
        .collect()
}

/// Columns spanning the tangent space of the Poncelet variety at the curve
/// of `pencil`, in the affine cone over curve coefficients.
fn tangent_columns<S: Scalar>(frame: &ConicFrame<S>, pencil: &Pencil<S>) -> Vec<Vec<S>> {
    let c = pencil.c();
    let l = frame_plucker_map(frame, c);
    let mut d = mat_mul(&l, &plucker_jacobian(pencil));
    let curve = linalg_apply(&l, &plucker_coords(pencil));
    for (row, x) in d.iter_mut().zip(curve) {
        row.push(x);
    }
    d
}

fn linalg_apply<S: Scalar>(m: &[Vec<S>], v: &[S]) -> Vec<S> {
    m.iter().map(|row| linalg::dot(row, v)).collect()
}

fn rank_of<S: Scalar>(rows: &[Vec<S>]) -> usize {
    match S::MODE {
        Mode::Exact => linalg::rank(rows),
        Mode::Float => linalg::numeric_rank(linalg::to_complex_matrix(rows), 1e-9),
    }
}

/// Dimension of the tangent space to `Pon_{c,S}` at `C(Λ)`: rank of the
/// differential of `(f, g) ↦ coeffs C` together with the curve itself,
/// less one for the projective scale. The GL2 gauge acts by rescaling, so it
/// lies in that one direction.
pub fn tangent_space_rank<S: Scalar>(frame: &ConicFrame<S>, pencil: &Pencil<S>) -> usize {
    rank_of(&tangent_columns(frame, pencil)) - 1
}

/// Report of an intersection-dimension probe.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionReport {
    pub c: usize,
    pub sample_count: usize,
    /// Projective dimension of the intersection of the two tangent spaces at
    /// each sample.
    pub ranks: Vec<usize>,
    /// The bound `c` on the intersection dimension at generic points.
    pub expected: usize,
    pub common_tangents: usize,
    /// Common tangents were found exactly and ranks are exact.
    pub exact: bool,
    /// Every sample curve passed the membership test for both conics.
    pub memberships_verified: bool,
}

/// Tangency parameters, in each frame, of the lines tangent to both conics.
pub struct CommonTangents<S> {
    pub first: Vec<ParamPoint<S>>,
    pub second: Vec<ParamPoint<S>>,
}

/// Parameters `t` such that the tangent at `t` of the first conic touches the
/// second: zeros of the quartic `ℓ(t)ᵀ adj(A') ℓ(t)`.
fn tangent_quartic<S: Scalar>(first: &ConicFrame<S>, second: &ConicFrame<S>) -> BinaryForm<S> {
    // ℓ(t) = T^{-⊤} J (u², uv, v²): linear in the Veronese image
    let l = first.inverse_transform().transpose().mul(&crate::geom::tangent_map());
    let dual = second.conic_matrix().adjugate();
    let q = l.transpose().mul(&dual).mul(&l);
    // (u², uv, v²) Q (u², uv, v²)ᵀ
    let mut coeffs = vec![S::zero(); 5];
    let deg_u = [2usize, 1, 0];
    for i in 0..3 {
        for j in 0..3 {
            let k = deg_u[i] + deg_u[j];
            coeffs[k] = coeffs[k].clone() + q.get(i, j).clone();
        }
    }
    BinaryForm::new(coeffs)
}

/// Second-frame parameter of the point where `line` touches the second conic.
fn touch_param<S: Scalar>(second: &ConicFrame<S>, line: &[S; 3]) -> Option<ParamPoint<S>> {
    // ℓ = T^{-⊤} J v(t) ⇔ J⁻¹ Tᵀ ℓ ∝ (u², uv, v²)
    let w = crate::geom::tangent_map::<S>().inverse()?.mul_vec(&second.transform().transpose().mul_vec(line));
    let (u2, uv, v2) = (w[0].clone(), w[1].clone(), w[2].clone());
    if v2.magnitude() >= u2.magnitude() {
        ParamPoint::new(uv, v2).ok()
    } else {
        ParamPoint::new(u2, uv).ok()
    }
}

fn common_tangents_exact(
    first: &ConicFrame<Rational>,
    second: &ConicFrame<Rational>,
) -> Option<CommonTangents<Rational>> {
    let quartic = tangent_quartic(first, second);
    if quartic.is_zero() {
        return None;
    }
    let mut params: Vec<ParamPoint<Rational>> = Vec::new();
    for r in binary_roots(&quartic) {
        if r.u.im.abs() > 1e-8 * r.u.norm().max(1.0) || r.v.im.abs() > 1e-8 {
            return None;
        }
        let t = if r.v.norm() < 1e-12 {
            ParamPoint::infinity()
        } else {
            ParamPoint::affine(Rational::approximate(r.u.re / r.v.re))
        };
        if !quartic.eval(&t.u, &t.v).is_zero() || params.iter().any(|p| p.bracket(&t).is_zero()) {
            return None;
        }
        params.push(t);
    }
    let second_params = params
        .iter()
        .map(|t| touch_param(second, first.tangent_line(t).coords()))
        .collect::<Option<Vec<_>>>()?;
    for (t, s) in params.iter().zip(&second_params) {
        let a = first.tangent_line(t);
        let b = second.tangent_line(s);
        if a != b {
            return None;
        }
    }
    Some(CommonTangents { first: params, second: second_params })
}

fn common_tangents_float(first: &ConicFrame<Complex64>, second: &ConicFrame<Complex64>) -> Result<CommonTangents<Complex64>> {
    let quartic = tangent_quartic(first, second);
    let roots = binary_roots(&quartic);
    let mut params: Vec<ParamPoint<Complex64>> = Vec::new();
    for r in roots {
        if params.iter().any(|p| p.chordal_distance(&r) < 1e-6) {
            continue;
        }
        params.push(r);
    }
    if params.len() < 4 {
        return Err(Error::DegenerateConicPair(format!("{} distinct common tangents", params.len())));
    }
    let second_params = params
        .iter()
        .map(|t| touch_param(second, &first.tangent_line(t).coords().clone()))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::DegenerateConicPair("tangency point not found".into()))?;
    Ok(CommonTangents { first: params, second: second_params })
}

fn tangent_multiset_pencil<S: Scalar>(params: &[ParamPoint<S>], pick: &[usize]) -> Result<Pencil<S>> {
    let h = pick.iter().fold(BinaryForm::constant(S::one()), |acc, &i| {
        acc.mul(&BinaryForm::linear_vanishing_at(params[i].u.clone(), params[i].v.clone()))
    });
    Pencil::new(h.mul(&BinaryForm::monomial(1, 1)), h.mul(&BinaryForm::monomial(1, 0)))
}

fn intersection_dim<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> usize {
    let joined: Vec<Vec<S>> = a.iter().zip(b).map(|(x, y)| x.iter().chain(y).cloned().collect()).collect();
    let (ra, rb, rj) = (rank_of(a), rank_of(b), rank_of(&joined));
    (ra + rb).saturating_sub(rj).saturating_sub(1)
}

fn probe_samples<S: Scalar>(
    first: &ConicFrame<S>,
    second: &ConicFrame<S>,
    tangents: &CommonTangents<S>,
    c: usize,
    samples: usize,
    seed: u64,
) -> Result<(Vec<usize>, bool)> {
    let mut rng = random::rng(seed);
    let k = tangents.first.len();
    let mut ranks = Vec::with_capacity(samples);
    let mut verified = true;
    for _ in 0..samples {
        let pick: Vec<usize> = (0..c).map(|_| rng.gen_range(0..k)).collect();
        let p1 = tangent_multiset_pencil(&tangents.first, &pick)?;
        let p2 = tangent_multiset_pencil(&tangents.second, &pick)?;
        let curve = crate::construction::poncelet_curve(first, &p1)?;
        let on_second = PlaneCurve::new(curve.form().clone(), second.chart())?;
        let v1 = is_poncelet(first, &curve, DEFAULT_TOL)?;
        let v2 = is_poncelet(second, &on_second, DEFAULT_TOL)?;
        verified &= v1.is_poncelet && v2.is_poncelet;
        ranks.push(intersection_dim(&tangent_columns(first, &p1), &tangent_columns(second, &p2)));
    }
    Ok((ranks, verified))
}

/// Probes `dim(T Pon_{c,S} ∩ T Pon_{c,S'})` at curves that are products of
/// `c` common tangents, drawn with repetition. Reports, never asserts.
pub fn intersection_probe(
    first: &ConicFrame<Rational>,
    second: &ConicFrame<Rational>,
    c: usize,
    samples: usize,
    seed: u64,
) -> Result<DimensionReport> {
    if first.conic_matrix() == second.conic_matrix() || c < 1 {
        return Err(Error::DegenerateConicPair("conics must be distinct".into()));
    }
    if let Some(t) = common_tangents_exact(first, second) {
        if t.first.len() == 4 {
            let (ranks, verified) = probe_samples(first, second, &t, c, samples, seed)?;
            return Ok(DimensionReport { c, sample_count: samples, ranks, expected: c, common_tangents: 4, exact: true, memberships_verified: verified });
        }
    }
    let (f1, f2) = (first.map(Scalar::to_complex)?, second.map(Scalar::to_complex)?);
    let t = common_tangents_float(&f1, &f2)?;
    let (ranks, verified) = probe_samples(&f1, &f2, &t, c, samples, seed)?;
    Ok(DimensionReport { c, sample_count: samples, ranks, expected: c, common_tangents: t.first.len(), exact: false, memberships_verified: verified })
}

/// A pair of conics with four rational common tangents: the second conic's
/// dual lies in the pencil spanned by the first one's dual and the line pair
/// through the four tangents' dual points.
pub fn conic_pair_with_rational_tangents(rng: &mut impl Rng, bound: i64) -> (ConicFrame<Rational>, ConicFrame<Rational>) {
    loop {
        let first = random::frame(rng, bound);
        let params = random::distinct_params(rng, 4, bound);
        let lines: Vec<[Rational; 3]> = params.iter().map(|t| first.tangent_line(t).coords().clone()).collect();
        let a = linalg::cross(&lines[0], &lines[1]);
        let b = linalg::cross(&lines[2], &lines[3]);
        let half = Rational::from_ratio(1, 2);
        let pair = Mat3::from_fn(|i, j| (a[i].clone() * b[j].clone() + a[j].clone() * b[i].clone()) * half.clone());
        let lambda = Rational::from_i64(rng.gen_range(1..=bound));
        let dual = first.conic_matrix().adjugate().add(&pair.scale(&lambda));
        if dual.det().is_zero() {
            continue;
        }
        let primal = dual.adjugate();
        let touch = dual.mul_vec(&lines[0]);
        let Ok(second) = ConicFrame::from_matrix_with_point(&primal, &touch, first.chart()) else { continue };
        return (first, second);
    }
}

/// Curve coefficients of `C(Λ)` scaled to integers, as floats.
pub fn float_curve(curve: &PlaneCurve<Rational>) -> PlaneCurve<f64> {
    curve.map(crate::scalar::rational_to_f64).expect("nonzero curve stays nonzero")
}
