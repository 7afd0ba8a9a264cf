//! Seeded generators of frames, pencils and curves for tests and experiments.

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::construction::{compose_pencil, Pencil};
use crate::forms::{BinaryForm, Chart};
use crate::geom::{ConicFrame, ParamPoint};
use crate::linalg::Mat3;
use crate::scalar::{Rational, Scalar};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn int(rng: &mut impl Rng, bound: i64) -> Rational {
    Rational::from_i64(rng.gen_range(-bound..=bound))
}

/// Integer coefficients in `[-bound, bound]`, nonzero.
pub fn binary_form(rng: &mut impl Rng, degree: usize, bound: i64) -> BinaryForm<Rational> {
    loop {
        let f = BinaryForm::new((0..=degree).map(|_| int(rng, bound)).collect());
        if !f.is_zero() {
            return f;
        }
    }
}

/// Invertible integer matrix with entries in `[-bound, bound]`.
pub fn frame(rng: &mut impl Rng, bound: i64) -> ConicFrame<Rational> {
    loop {
        let t = Mat3::from_fn(|_, _| int(rng, bound));
        if let Ok(f) = ConicFrame::new(t, Chart::Primal) {
            return f;
        }
    }
}

pub fn pencil(rng: &mut impl Rng, c: usize, bound: i64) -> Pencil<Rational> {
    loop {
        if let Ok(p) = Pencil::new(binary_form(rng, c + 1, bound), binary_form(rng, c + 1, bound)) {
            return p;
        }
    }
}

/// A pencil without base points.
pub fn base_point_free_pencil(rng: &mut impl Rng, c: usize, bound: i64) -> Pencil<Rational> {
    loop {
        let p = pencil(rng, c, bound);
        if p.f().gcd(p.g()).degree() == 0 {
            return p;
        }
    }
}

/// Distinct rational parameters `a/b` with small numerators and denominators.
pub fn distinct_params(rng: &mut impl Rng, n: usize, bound: i64) -> Vec<ParamPoint<Rational>> {
    let mut out: Vec<ParamPoint<Rational>> = Vec::with_capacity(n);
    while out.len() < n {
        let (u, v) = (rng.gen_range(-bound..=bound), rng.gen_range(0..=bound));
        let Ok(t) = ParamPoint::new(Rational::from_i64(u), Rational::from_i64(v)) else { continue };
        if out.iter().all(|s| !s.bracket(&t).is_zero()) {
            out.push(t);
        }
    }
    out
}

/// `Π (aᵢ v − bᵢ u)` over the given roots `(aᵢ : bᵢ)`.
pub fn form_with_roots<S: Scalar>(roots: &[ParamPoint<S>]) -> BinaryForm<S> {
    roots.iter().fold(BinaryForm::constant(S::one()), |acc, t| {
        acc.mul(&BinaryForm::linear_vanishing_at(t.u.clone(), t.v.clone()))
    })
}

/// A pencil spanned by two members with distinct rational roots; returns the
/// pencil and the two root sets.
pub fn split_member_pencil(
    rng: &mut impl Rng,
    c: usize,
    bound: i64,
) -> (Pencil<Rational>, [Vec<ParamPoint<Rational>>; 2]) {
    loop {
        let r1 = distinct_params(rng, c + 1, bound);
        let r2 = distinct_params(rng, c + 1, bound);
        if let Ok(p) = Pencil::new(form_with_roots(&r1), form_with_roots(&r2)) {
            return (p, [r1, r2]);
        }
    }
}

/// `(h·a, h·b)` with `deg h = m` and `(a, b)` base-point free; returns the
/// pencil and `h`.
pub fn pencil_with_base(rng: &mut impl Rng, c: usize, m: usize, bound: i64) -> (Pencil<Rational>, BinaryForm<Rational>) {
    assert!(m <= c, "need c + 1 − m ≥ 1");
    loop {
        let h = binary_form(rng, m, bound);
        if h.degree() != m || h.is_zero() {
            continue;
        }
        let k = c + 1 - m;
        let (a, b) = (binary_form(rng, k, bound), binary_form(rng, k, bound));
        if a.gcd(&b).degree() != 0 {
            continue;
        }
        if let Ok(p) = Pencil::new(h.mul(&a), h.mul(&b)) {
            return (p, h);
        }
    }
}

/// Inner pencil of degree `a + 1` composed with an outer pair of degree `k`.
pub fn composed_pencil(rng: &mut impl Rng, a_plus_1: usize, k: usize, bound: i64) -> (Pencil<Rational>, Pencil<Rational>) {
    loop {
        let inner = base_point_free_pencil(rng, a_plus_1 - 1, bound);
        let (h1, h2) = (binary_form(rng, k, bound), binary_form(rng, k, bound));
        if h1.gcd(&h2).degree() != 0 {
            continue;
        }
        if let Ok(p) = compose_pencil(&inner, (&h1, &h2)) {
            return (inner, p);
        }
    }
}

/// A complex parameter with both parts uniform in `[-2, 2]`.
pub fn complex_param(rng: &mut impl Rng) -> ParamPoint<num_complex::Complex64> {
    ParamPoint::affine(num_complex::Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
}
