//! Homogeneous forms: binary forms on the parameter line, ternary forms
//! (plane curves), and symmetric biforms of bidegree (c, c).

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat3;
use crate::scalar::{Rational, Scalar};

/// Binomial coefficient as a scalar.
pub(crate) fn binomial<S: Scalar>(n: usize, k: usize) -> S {
    if k > n {
        return S::zero();
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    S::from_i64(acc)
}

/// A binary form of degree `d`: `coeffs[i]` multiplies `u^i v^(d-i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryForm<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> BinaryForm<S> {
    /// `coeffs` must be nonempty; its length fixes the degree.
    pub fn new(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        Self { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(vec![S::zero(); degree + 1])
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// `u^k v^(d-k)`.
    pub fn monomial(degree: usize, k: usize) -> Self {
        let mut f = Self::zero(degree);
        f.coeffs[k] = S::one();
        f
    }

    /// `v·a − u·b`, the linear form vanishing at `(a : b)`.
    pub fn linear_vanishing_at(a: S, b: S) -> Self {
        Self::new(vec![a, -b])
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| S::from_i64(x)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &S {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, u: &S, v: &S) -> S {
        // Horner in u with v-powers accumulated from the top.
        let d = self.degree();
        let mut acc = S::zero();
        let mut vpow = S::one();
        for i in (0..=d).rev() {
            acc = acc + self.coeffs[i].clone() * vpow.clone() * u.pow_u32(i as u32);
            vpow = vpow * v.clone();
        }
        acc
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Sum of two forms of the same degree.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in form sum");
        Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![S::zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::constant(S::one()), |acc, _| acc.mul(self))
    }

    /// ∂/∂u.
    pub fn d_du(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero(0);
        }
        Self::new(
            (1..=self.degree())
                .map(|i| self.coeffs[i].clone() * S::from_i64(i as i64))
                .collect(),
        )
    }

    /// ∂/∂v.
    pub fn d_dv(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        Self::new(
            (0..d)
                .map(|i| self.coeffs[i].clone() * S::from_i64((d - i) as i64))
                .collect(),
        )
    }

    /// Power of `v` dividing the form (number of roots at `(1 : 0)`).
    pub fn infinite_multiplicity(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count()
    }

    /// Exact homogeneous division; `None` when `divisor` does not divide `self`
    /// (remainder not negligible in float mode).
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() || divisor.degree() > self.degree() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.degree() - divisor.degree()));
        }
        let kd = divisor.infinite_multiplicity();
        let kf = self.infinite_multiplicity();
        if kf < kd {
            return None;
        }
        // Strip v^kd from both and long-divide in u.
        let num: Vec<S> = self.coeffs[..self.coeffs.len() - kd].to_vec();
        let den: Vec<S> = divisor.coeffs[..divisor.coeffs.len() - kd].to_vec();
        let m = den.len() - 1;
        let lead = den[m].clone();
        let mut rem = num;
        let qdeg = rem.len() - 1 - m;
        let mut quot = vec![S::zero(); qdeg + 1];
        for k in (0..=qdeg).rev() {
            let c = rem[k + m].clone() / lead.clone();
            for (j, dj) in den.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dj.clone();
            }
            quot[k] = c;
        }
        let scale = self.coeffs.iter().map(Scalar::magnitude).fold(0.0, f64::max);
        if rem.iter().all(|r| r.is_negligible(scale, 1e-9)) {
            Some(Self::new(quot))
        } else {
            None
        }
    }

    /// Substitutes the pair `(p, q)` of forms of equal degree for `(u, v)`.
    pub fn substitute(&self, p: &Self, q: &Self) -> Self {
        let k = self.degree();
        let ppow: Vec<Self> = (0..=k).map(|i| p.pow(i)).collect();
        let qpow: Vec<Self> = (0..=k).map(|i| q.pow(i)).collect();
        let mut acc = Self::zero(k * p.degree());
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&ppow[i].mul(&qpow[k - i]).scale(c));
        }
        acc
    }

    pub fn normalized(&self) -> Self {
        let mut c = self.coeffs.clone();
        S::normalize_form(&mut c);
        Self::new(c)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BinaryForm<T> {
        BinaryForm::new(self.coeffs.iter().map(f).collect())
    }
}

impl BinaryForm<Rational> {
    /// Exact greatest common divisor, normalized to primitive integer
    /// coefficients. Uses the primitive (content-normalized) remainder sequence
    /// on the dehomogenized polynomials and restores the common power of `v`.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let kv = self.infinite_multiplicity().min(other.infinite_multiplicity());
        let trim = |f: &Self| -> Vec<Rational> {
            let n = f.coeffs.len() - f.infinite_multiplicity();
            f.coeffs[..n].to_vec()
        };
        let mut a = primitive(trim(self));
        let mut b = primitive(trim(other));
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !(b.len() == 1 && b[0].is_zero()) {
            let r = pseudo_remainder(&a, &b);
            a = b;
            b = primitive(r);
        }
        let mut g = a;
        g.extend(std::iter::repeat_n(Rational::from_i64(0), kv));
        BinaryForm::new(g).normalized()
    }
}

/// Divides out the content and strips leading zeros (highest powers of u).
fn primitive(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    Rational::normalize_form(&mut p);
    p
}

/// Pseudo-remainder of `a` by `b` (both indexed by ascending power).
fn pseudo_remainder(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let m = b.len() - 1;
    let lead = b[m].clone();
    while r.len() > m && !(r.len() == 1 && r[0].is_zero()) {
        let top = r.len() - 1;
        let c = r[top].clone();
        for x in r.iter_mut() {
            *x = x.clone() * lead.clone();
        }
        for (j, bj) in b.iter().enumerate() {
            let idx = top - m + j;
            r[idx] = r[idx].clone() - c.clone() * bj.clone();
        }
        r.pop();
        while r.len() > 1 && r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        if r.is_empty() {
            r.push(Rational::from_i64(0));
        }
    }
    if r.is_empty() {
        r.push(Rational::from_i64(0));
    }
    r
}

/// Exponent triples `(i, j, k)` of degree-`d` ternary monomials `x^i y^j z^k`,
/// in storage order: decreasing power of `x`, then increasing power of `z`.
pub fn monomials(d: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(monomial_count(d));
    for s in 0..=d {
        for k in 0..=s {
            out.push([d - s, s - k, k]);
        }
    }
    out
}

pub fn monomial_count(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

pub fn monomial_index(e: [usize; 3]) -> usize {
    let s = e[1] + e[2];
    s * (s + 1) / 2 + e[2]
}

/// Dense ternary form of fixed degree in the monomial order of [`monomials`].
#[derive(Debug, Clone, PartialEq)]
pub struct TernaryForm<S> {
    degree: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> TernaryForm<S> {
    pub fn new(degree: usize, coeffs: Vec<S>) -> Self {
        assert_eq!(coeffs.len(), monomial_count(degree), "coefficient count must match degree");
        Self { degree, coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(degree, vec![S::zero(); monomial_count(degree)])
    }

    pub fn constant(c: S) -> Self {
        Self::new(0, vec![c])
    }

    pub fn linear(l: &[S; 3]) -> Self {
        Self::new(1, l.to_vec())
    }

    pub fn from_terms(degree: usize, terms: &[([usize; 3], S)]) -> Self {
        let mut f = Self::zero(degree);
        for (e, c) in terms {
            assert_eq!(e.iter().sum::<usize>(), degree, "monomial degree mismatch");
            let i = monomial_index(*e);
            f.coeffs[i] = f.coeffs[i].clone() + c.clone();
        }
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, e: [usize; 3]) -> &S {
        &self.coeffs[monomial_index(e)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, p: &[S; 3]) -> S {
        let pw: Vec<Vec<S>> = p
            .iter()
            .map(|x| (0..=self.degree).map(|e| x.pow_u32(e as u32)).collect())
            .collect();
        monomials(self.degree)
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .fold(S::zero(), |acc, (e, c)| {
                acc + c.clone() * pw[0][e[0]].clone() * pw[1][e[1]].clone() * pw[2][e[2]].clone()
            })
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(self.degree, self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        Self::new(
            self.degree,
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    /// Product with the linear form `l₀x + l₁y + l₂z`.
    pub fn mul_linear(&self, l: &[S; 3]) -> Self {
        let mut out = Self::zero(self.degree + 1);
        for (e, c) in monomials(self.degree).iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            for (v, lv) in l.iter().enumerate() {
                if lv.is_zero() {
                    continue;
                }
                let mut e2 = *e;
                e2[v] += 1;
                let i = monomial_index(e2);
                out.coeffs[i] = out.coeffs[i].clone() + c.clone() * lv.clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        let mo = monomials(other.degree);
        for (e, c) in monomials(self.degree).iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            for (e2, c2) in mo.iter().zip(&other.coeffs) {
                if c2.is_zero() {
                    continue;
                }
                let i = monomial_index([e[0] + e2[0], e[1] + e2[1], e[2] + e2[2]]);
                out.coeffs[i] = out.coeffs[i].clone() + c.clone() * c2.clone();
            }
        }
        out
    }

    /// The form `x ↦ F(M x)`.
    ///
    /// Grouped by the power of `z`: `F = Σ_k z^k S_k(x, y)` becomes
    /// `Σ_k l₂^k S_k(l₀, l₁)`, evaluated by Horner in `l₂` so that every product
    /// is with a linear form.
    pub fn compose_linear(&self, m: &Mat3<S>) -> Self {
        let d = self.degree;
        let rows: [[S; 3]; 3] = [m.0[0].clone(), m.0[1].clone(), m.0[2].clone()];
        // products[a][b] = l₀^a l₁^b
        let mut products: Vec<Vec<Self>> = Vec::with_capacity(d + 1);
        let mut l0pow = Self::constant(S::one());
        for a in 0..=d {
            let mut row = Vec::with_capacity(d + 1 - a);
            let mut cur = l0pow.clone();
            for b in 0..=(d - a) {
                if b > 0 {
                    cur = cur.mul_linear(&rows[1]);
                }
                row.push(cur.clone());
            }
            products.push(row);
            if a < d {
                l0pow = l0pow.mul_linear(&rows[0]);
            }
        }
        let mut acc: Option<Self> = None;
        for k in (0..=d).rev() {
            let deg = d - k;
            let mut sk = Self::zero(deg);
            for b in 0..=deg {
                let a = deg - b;
                let c = &self.coeffs[monomial_index([a, b, k])];
                if !c.is_zero() {
                    sk = sk.add(&products[a][b].scale(c));
                }
            }
            acc = Some(match acc {
                None => sk,
                Some(inner) => sk.add(&inner.mul_linear(&rows[2])),
            });
        }
        acc.expect("degree loop runs at least once")
    }

    /// Multiplies the coefficient of `x^i y^j z^k` by `w[0]^i w[1]^j w[2]^k`.
    pub fn scale_variables(&self, w: &[S; 3]) -> Self {
        let pw: Vec<Vec<S>> = w
            .iter()
            .map(|x| (0..=self.degree).map(|e| x.pow_u32(e as u32)).collect())
            .collect();
        Self::new(
            self.degree,
            monomials(self.degree)
                .iter()
                .zip(&self.coeffs)
                .map(|(e, c)| c.clone() * pw[0][e[0]].clone() * pw[1][e[1]].clone() * pw[2][e[2]].clone())
                .collect(),
        )
    }

    /// Restriction to the line through `p` and `q`: the binary form
    /// `(s, w) ↦ F(s·p + w·q)`, with `s` playing the role of `u`.
    pub fn restrict_to_line(&self, p: &[S; 3], q: &[S; 3]) -> BinaryForm<S> {
        let forms: Vec<BinaryForm<S>> = (0..3)
            .map(|i| BinaryForm::new(vec![q[i].clone(), p[i].clone()]))
            .collect();
        let pw: Vec<Vec<BinaryForm<S>>> = forms
            .iter()
            .map(|f| (0..=self.degree).map(|e| f.pow(e)).collect())
            .collect();
        let mut acc = BinaryForm::zero(self.degree);
        for (e, c) in monomials(self.degree).iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let t = pw[0][e[0]].mul(&pw[1][e[1]]).mul(&pw[2][e[2]]);
            acc = acc.add(&t.scale(c));
        }
        acc
    }

    pub fn partial(&self, var: usize) -> Self {
        if self.degree == 0 {
            return Self::zero(0);
        }
        let mut out = Self::zero(self.degree - 1);
        for (e, c) in monomials(self.degree).iter().zip(&self.coeffs) {
            if e[var] == 0 || c.is_zero() {
                continue;
            }
            let mut e2 = *e;
            e2[var] -= 1;
            let i = monomial_index(e2);
            out.coeffs[i] = out.coeffs[i].clone() + c.clone() * S::from_i64(e[var] as i64);
        }
        out
    }

    /// Exact quotient by `divisor`, or `None` if it does not divide.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.degree > self.degree || divisor.is_zero() {
            return None;
        }
        let qdeg = self.degree - divisor.degree;
        // Leading monomial in the storage order (x-first lex).
        let lead_idx = divisor.coeffs.iter().position(|c| !c.is_zero())?;
        let mons_d = monomials(divisor.degree);
        let lead_e = mons_d[lead_idx];
        let lead = divisor.coeffs[lead_idx].clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(qdeg);
        let mons_self = monomials(self.degree);
        let scale = self.coeffs.iter().map(Scalar::magnitude).fold(0.0, f64::max);
        for (idx, e) in mons_self.iter().enumerate() {
            let c = rem.coeffs[idx].clone();
            if c.is_negligible(scale, 1e-11) {
                continue;
            }
            if e[0] < lead_e[0] || e[1] < lead_e[1] || e[2] < lead_e[2] {
                return None;
            }
            let qe = [e[0] - lead_e[0], e[1] - lead_e[1], e[2] - lead_e[2]];
            let t = c / lead.clone();
            let qi = monomial_index(qe);
            quot.coeffs[qi] = quot.coeffs[qi].clone() + t.clone();
            for (de, dc) in mons_d.iter().zip(&divisor.coeffs) {
                if dc.is_zero() {
                    continue;
                }
                let ri = monomial_index([qe[0] + de[0], qe[1] + de[1], qe[2] + de[2]]);
                rem.coeffs[ri] = rem.coeffs[ri].clone() - t.clone() * dc.clone();
            }
        }
        Some(quot)
    }

    pub fn normalized(&self) -> Self {
        let mut c = self.coeffs.clone();
        S::normalize_form(&mut c);
        Self::new(self.degree, c)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TernaryForm<T> {
        TernaryForm::new(self.degree, self.coeffs.iter().map(f).collect())
    }
}

/// Whether coordinates live in the plane `P(W)` or its dual `P(W*)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    #[default]
    Primal,
    Dual,
}

/// A plane curve of degree `c`, stored at canonical scale.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneCurve<S> {
    form: TernaryForm<S>,
    chart: Chart,
}

impl<S: Scalar> PlaneCurve<S> {
    /// Canonicalizes the form; rejects the zero form.
    pub fn new(form: TernaryForm<S>, chart: Chart) -> Result<Self> {
        if form.is_zero() {
            return Err(Error::ZeroCurve);
        }
        Ok(Self { form: form.normalized(), chart })
    }

    pub fn from_terms(degree: usize, terms: &[([usize; 3], i64)], chart: Chart) -> Result<Self> {
        let t: Vec<([usize; 3], S)> = terms.iter().map(|(e, c)| (*e, S::from_i64(*c))).collect();
        Self::new(TernaryForm::from_terms(degree, &t), chart)
    }

    pub fn degree(&self) -> usize {
        self.form.degree()
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn form(&self) -> &TernaryForm<S> {
        &self.form
    }

    pub fn coeffs(&self) -> &[S] {
        self.form.coeffs()
    }

    pub fn eval(&self, p: &[S; 3]) -> S {
        self.form.eval(p)
    }

    /// Vertex residual `|F(P)| / (‖F‖₂ · ‖P‖∞^c)`.
    pub fn normalized_residual(&self, p: &[S; 3]) -> f64 {
        let norm = self.coeffs().iter().map(|c| c.magnitude().powi(2)).sum::<f64>().sqrt();
        let pinf = p.iter().map(Scalar::magnitude).fold(0.0, f64::max);
        self.eval(p).magnitude() / (norm * pinf.powi(self.degree() as i32))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<PlaneCurve<T>> {
        PlaneCurve::new(self.form.map(f), self.chart)
    }
}

/// Symmetric biform of bidegree `(c, c)`:
/// `b[i][j]` multiplies `u₁^i v₁^(c−i) u₂^j v₂^(c−j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBiForm<S> {
    b: Vec<Vec<S>>,
}

impl<S: Scalar> SymBiForm<S> {
    /// Rejects non-square or asymmetric coefficient matrices.
    pub fn new(b: Vec<Vec<S>>) -> Result<Self> {
        let n = b.len();
        if n == 0 || b.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("biform coefficient matrix must be square and nonempty".into()));
        }
        let scale = b.iter().flatten().map(Scalar::magnitude).fold(0.0, f64::max);
        for i in 0..n {
            for j in 0..i {
                if !(b[i][j].clone() - b[j][i].clone()).is_negligible(scale, 1e-12) {
                    return Err(Error::Asymmetric);
                }
            }
        }
        Ok(Self { b })
    }

    pub fn c(&self) -> usize {
        self.b.len() - 1
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.b[i][j]
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.b
    }

    pub fn eval(&self, t1: (&S, &S), t2: (&S, &S)) -> S {
        let c = self.c();
        let mut acc = S::zero();
        for i in 0..=c {
            let a = t1.0.pow_u32(i as u32) * t1.1.pow_u32((c - i) as u32);
            for j in 0..=c {
                let b = t2.0.pow_u32(j as u32) * t2.1.pow_u32((c - j) as u32);
                acc = acc + self.b[i][j].clone() * a.clone() * b;
            }
        }
        acc
    }

    /// The binary form `t ↦ G(t₁, t)` for a fixed first argument.
    pub fn partial_eval(&self, u: &S, v: &S) -> BinaryForm<S> {
        let c = self.c();
        let w: Vec<S> = (0..=c)
            .map(|i| u.pow_u32(i as u32) * v.pow_u32((c - i) as u32))
            .collect();
        BinaryForm::new(
            (0..=c)
                .map(|j| (0..=c).fold(S::zero(), |acc, i| acc + w[i].clone() * self.b[i][j].clone()))
                .collect(),
        )
    }

    pub fn scale(&self, s: &S) -> Self {
        Self {
            b: self
                .b
                .iter()
                .map(|r| r.iter().map(|x| x.clone() * s.clone()).collect())
                .collect(),
        }
    }
}

/// A symmetric biform written as a degree-`c` polynomial in the elementary
/// symmetric functions `q = u₁u₂`, `p = u₁v₂ + u₂v₁`, `r = v₁v₂`.
///
/// Stored as a ternary form in `(q, p, r)`: the coefficient of `q^a p^b r^d`
/// sits at monomial `[a, b, d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymReduced<S> {
    poly: TernaryForm<S>,
}

impl<S: Scalar> SymReduced<S> {
    pub fn new(poly: TernaryForm<S>) -> Self {
        Self { poly }
    }

    pub fn c(&self) -> usize {
        self.poly.degree()
    }

    pub fn poly(&self) -> &TernaryForm<S> {
        &self.poly
    }

    pub fn coeff(&self, a: usize, b: usize, d: usize) -> &S {
        self.poly.coeff([a, b, d])
    }

    /// Expands back into biform coefficients.
    pub fn expand(&self) -> SymBiForm<S> {
        let c = self.c();
        let mut b = vec![vec![S::zero(); c + 1]; c + 1];
        for (e, x) in monomials(c).iter().zip(self.poly.coeffs()) {
            if x.is_zero() {
                continue;
            }
            let [a, pb, _] = *e;
            for k in 0..=pb {
                let (i, j) = (a + k, a + pb - k);
                b[i][j] = b[i][j].clone() + binomial::<S>(pb, k) * x.clone();
            }
        }
        SymBiForm { b }
    }

    /// The plane form `(x, y, z) ↦ R(x/2, y, z/2)`.
    pub fn to_plane_form(&self) -> TernaryForm<S> {
        let half = S::one() / S::from_i64(2);
        self.poly.scale_variables(&[half.clone(), S::one(), half])
    }

    /// Inverse of [`Self::to_plane_form`]: `R(q, p, r) = F(2q, p, 2r)`.
    pub fn from_plane_form(f: &TernaryForm<S>) -> Self {
        let two = S::from_i64(2);
        Self::new(f.scale_variables(&[two.clone(), S::one(), two]))
    }
}

/// Rewrites a symmetric biform in the basis `q^a p^b r^d`.
///
/// The system is unitriangular: the coefficient at `(i, j)`, `i ≥ j`, is the
/// unknown of `q^j p^(i−j) r^(c−i)` plus contributions from unknowns with a
/// larger power of `p` and the same `i + j`, so it is solved by back
/// substitution with integer multipliers.
pub fn reduce_symmetric<S: Scalar>(b: &SymBiForm<S>) -> SymReduced<S> {
    let c = b.c();
    let mut x = TernaryForm::<S>::zero(c);
    for s in 0..=(2 * c) {
        // unknowns with 2a + pb = s, a + pb ≤ c, by decreasing pb
        let mut pb = s.min(c);
        loop {
            if (s - pb) % 2 == 0 {
                let a = (s - pb) / 2;
                if a + pb <= c {
                    let (i, j) = (a + pb, a);
                    let mut val = b.entry(i, j).clone();
                    let mut pb2 = pb + 2;
                    while pb2 <= s {
                        let a2 = (s - pb2) / 2;
                        if a2 + pb2 <= c && i >= a2 {
                            let k = i - a2;
                            if k <= pb2 {
                                let known = x.coeff([a2, pb2, c - a2 - pb2]).clone();
                                val = val - binomial::<S>(pb2, k) * known;
                            }
                        }
                        pb2 += 2;
                    }
                    let idx = monomial_index([a, pb, c - a - pb]);
                    x.coeffs[idx] = val;
                }
            }
            if pb == 0 {
                break;
            }
            pb -= 1;
        }
    }
    SymReduced::new(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Rational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    #[test]
    fn monomial_order_is_consistent() {
        for d in 0..7 {
            for (i, e) in monomials(d).iter().enumerate() {
                assert_eq!(monomial_index(*e), i);
                assert_eq!(e.iter().sum::<usize>(), d);
            }
        }
        assert_eq!(monomials(2), vec![[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]);
    }

    #[test]
    fn binary_division_and_gcd() {
        // (u - 2v)(u + v) = u² - uv - 2v²
        let f = BinaryForm::<Q>::from_i64s(&[-2, -1, 1]);
        let lin = BinaryForm::<Q>::from_i64s(&[1, 1]);
        assert_eq!(f.div_exact(&lin).unwrap(), BinaryForm::from_i64s(&[-2, 1]));
        assert!(f.div_exact(&BinaryForm::from_i64s(&[1, 2])).is_none());
        // u³ and u v²: gcd u
        let a = BinaryForm::<Q>::monomial(3, 3);
        let b = BinaryForm::<Q>::monomial(3, 1);
        assert_eq!(a.gcd(&b), BinaryForm::monomial(1, 1));
        // v² u and v³: gcd v²
        let a = BinaryForm::<Q>::monomial(3, 1);
        let b = BinaryForm::<Q>::monomial(3, 0);
        assert_eq!(a.gcd(&b), BinaryForm::monomial(2, 0));
        // coprime
        let a = BinaryForm::<Q>::monomial(3, 3);
        let b = BinaryForm::<Q>::monomial(3, 0);
        assert_eq!(a.gcd(&b), BinaryForm::constant(q(1)));
    }

    #[test]
    fn gcd_of_products_with_rational_roots() {
        let l = |a: i64, b: i64| BinaryForm::<Q>::linear_vanishing_at(q(a), q(b));
        let common = l(3, 2).mul(&l(-1, 5));
        let f = common.mul(&l(7, 1)).mul(&l(0, 1));
        let g = common.mul(&l(2, -3)).mul(&l(1, 0));
        assert_eq!(f.gcd(&g), common.normalized());
    }

    #[test]
    fn ternary_compose_matches_pointwise_evaluation() {
        let f = TernaryForm::<Q>::new(3, (1..=10).map(q).collect());
        let m = Mat3([[q(1), q(2), q(0)], [q(-1), q(0), q(3)], [q(2), q(1), q(1)]]);
        let g = f.compose_linear(&m);
        for p in [[q(1), q(2), q(3)], [q(-2), q(0), q(5)], [q(7), q(-1), q(1)]] {
            assert_eq!(g.eval(&p), f.eval(&m.mul_vec(&p)));
        }
    }

    #[test]
    fn ternary_division() {
        let a = TernaryForm::<Q>::new(2, (1..=6).map(q).collect());
        let b = TernaryForm::<Q>::new(3, (0..10).map(|i| q(i * i - 3)).collect());
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        let y = TernaryForm::<Q>::linear(&[q(0), q(1), q(0)]);
        assert!(a.div_exact(&y).is_none());
    }

    #[test]
    fn restriction_to_line_matches_evaluation() {
        let f = TernaryForm::<Q>::new(2, (1..=6).map(q).collect());
        let p = [q(1), q(0), q(2)];
        let r = [q(0), q(3), q(-1)];
        let h = f.restrict_to_line(&p, &r);
        let (s, w) = (q(2), q(5));
        let pt = [q(2) * q(1) + q(5) * q(0), q(2) * q(0) + q(5) * q(3), q(2) * q(2) + q(5) * q(-1)];
        assert_eq!(h.eval(&s, &w), f.eval(&pt));
    }

    #[test]
    fn reduction_examples() {
        // p = u1v2 + u2v1 → b[1][0] = b[0][1] = 1
        let b = SymBiForm::new(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
        let r = reduce_symmetric(&b);
        assert_eq!(r.coeff(0, 1, 0), &q(1));
        assert_eq!(r.expand(), b);
        // (u1v2)² + (u1v2)(u2v1) + (u2v1)² → p² − qr
        let mut m = vec![vec![q(0); 3]; 3];
        m[2][0] = q(1);
        m[0][2] = q(1);
        m[1][1] = q(1);
        let b = SymBiForm::new(m).unwrap();
        let r = reduce_symmetric(&b);
        assert_eq!(r.coeff(0, 2, 0), &q(1));
        assert_eq!(r.coeff(1, 0, 1), &q(-1));
        assert_eq!(r.expand(), b);
    }

    #[test]
    fn asymmetric_biform_rejected() {
        let b = SymBiForm::new(vec![vec![q(0), q(1)], vec![q(2), q(0)]]);
        assert!(matches!(b, Err(Error::Asymmetric)));
    }
}
