//! Roots of binary forms on the complex projective line.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use crate::forms::BinaryForm;
use crate::geom::ParamPoint;
use crate::scalar::Scalar;

/// All roots of a nonzero binary form, with multiplicity, as points of P¹.
///
/// Exactly vanishing end coefficients give exact roots at `(0 : 1)` and
/// `(1 : 0)`. The remainder is solved in the affine chart whose leading
/// coefficient is larger, by companion-matrix eigenvalues and one Newton step.
pub fn binary_roots<S: Scalar>(form: &BinaryForm<S>) -> Vec<ParamPoint<Complex64>> {
    let mut c: Vec<Complex64> = form.coeffs().iter().map(Scalar::to_complex).collect();
    let mut out = Vec::with_capacity(c.len().saturating_sub(1));
    if c.iter().all(Zero::is_zero) {
        return out;
    }
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
        out.push(ParamPoint::infinity());
    }
    let zeros = c.iter().take_while(|x| x.is_zero()).count();
    c.drain(..zeros);
    out.extend((0..zeros).map(|_| ParamPoint::affine(Complex64::zero())));
    if c.len() <= 1 {
        return out;
    }
    // p(t) = Σ c_i t^i with t = u/v, or the reversed polynomial in s = v/u.
    let flipped = c[0].norm() > c[c.len() - 1].norm();
    if flipped {
        c.reverse();
    }
    for t in polynomial_roots(&c) {
        out.push(if flipped {
            ParamPoint { u: Complex64::new(1.0, 0.0), v: t }
        } else {
            ParamPoint { u: t, v: Complex64::new(1.0, 0.0) }
        });
    }
    out.into_iter().map(canonical).collect()
}

fn canonical(p: ParamPoint<Complex64>) -> ParamPoint<Complex64> {
    ParamPoint::new(p.u, p.v).unwrap_or(p)
}

/// Roots of `Σ c_i t^i` with nonzero leading coefficient.
pub fn polynomial_roots(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let lead = c[d];
    if d == 1 {
        return vec![-c[0] / lead];
    }
    let companion = DMatrix::from_fn(d, d, |i, j| {
        if i == 0 {
            -c[d - 1 - j] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::zero()
        }
    });
    let schur = companion.schur();
    let (_, t) = schur.unpack();
    (0..d).map(|i| newton_polish(c, t[(i, i)])).collect()
}

fn horner(c: &[Complex64], t: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * t + p;
        p = p * t + a;
    }
    (p, dp)
}

fn newton_polish(c: &[Complex64], t: Complex64) -> Complex64 {
    let (p, dp) = horner(c, t);
    if dp.is_zero() {
        return t;
    }
    let next = t - p / dp;
    let (pn, _) = horner(c, next);
    if next.is_finite() && pn.norm() < p.norm() { next } else { t }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contains(roots: &[ParamPoint<Complex64>], target: ParamPoint<Complex64>) -> bool {
        roots.iter().any(|r| r.chordal_distance(&target) < 1e-10)
    }

    #[test]
    fn cube_roots_of_eight() {
        // τ³ − 8 = u³ − 8v³
        let f = BinaryForm::<f64>::from_i64s(&[-8, 0, 0, 1]);
        let r = binary_roots(&f);
        assert_eq!(r.len(), 3);
        for k in 0..3 {
            let w = Complex64::from_polar(2.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0);
            assert!(contains(&r, ParamPoint::affine(w)));
        }
    }

    #[test]
    fn roots_at_zero_and_infinity() {
        // u v² (u − 3v): coefficients for v⁴, uv³, u²v², u³v, u⁴
        let f = BinaryForm::<f64>::from_i64s(&[0, 0, -3, 1, 0]);
        let r = binary_roots(&f);
        assert_eq!(r.len(), 4);
        assert!(contains(&r, ParamPoint::infinity()));
        assert!(contains(&r, ParamPoint::affine(Complex64::zero())));
        assert!(contains(&r, ParamPoint::affine(Complex64::new(3.0, 0.0))));
    }

    #[test]
    fn near_infinity_root_uses_reversed_chart() {
        // (u − 1e9 v)(u − v)
        let f = BinaryForm::new(vec![1e9, -(1e9 + 1.0), 1.0]);
        let r = binary_roots(&f);
        assert!(contains(&r, ParamPoint::affine(Complex64::new(1e9, 0.0))));
        assert!(contains(&r, ParamPoint::affine(Complex64::new(1.0, 0.0))));
    }
}
