//! Seeded property suites over the whole pipeline, at two sizes. The report
//! hash covers only counts and verdicts, so it is stable across machines.

use std::fmt::Write as _;

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::closure::{closure_traverse, polygon_vertices};
use crate::construction::{
    cached_plucker_map, curve_form, plucker_coords, poncelet_curve, split_base_points, tangent_product,
};
use crate::dual::duality_check;
use crate::forms::{Chart, PlaneCurve};
use crate::lab::{
    conic_pair_with_rational_tangents, conic_vector, float_curve, intersection_probe, recover_conics,
    tangent_space_rank, RecoveryOptions,
};
use crate::linalg;
use crate::membership::{is_poncelet, DEFAULT_TOL};
use crate::random::{self, SeededRng};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn pick(self, quick: usize, full: usize) -> usize {
        match self {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// First failing case, if any.
    pub note: Option<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub level: Level,
    pub seed: u64,
    pub version: &'static str,
    pub suites: Vec<SuiteOutcome>,
    /// SHA-256 over level, seed and every suite's name, counts and note.
    pub hash: String,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteOutcome::passed)
    }
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    note: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { name, cases: 0, failures: 0, note: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.note.is_none() {
                self.note = Some(what());
            }
        }
    }

    fn done(self) -> SuiteOutcome {
        SuiteOutcome { name: self.name, cases: self.cases, failures: self.failures, note: self.note }
    }
}

fn canonical(mut v: Vec<Rational>) -> Vec<Rational> {
    Rational::normalize_form(&mut v);
    v
}

/// The exact construction inverts: membership holds with rank 2 and recovers
/// the pencil's Plücker vector.
pub fn round_trip(rng: &mut SeededRng, per_degree: usize) -> SuiteOutcome {
    let mut t = Tally::new("round_trip");
    for c in 1..=8 {
        for _ in 0..per_degree {
            let frame = random::frame(rng, 3);
            let pencil = random::pencil(rng, c, 5);
            let ok = poncelet_curve(&frame, &pencil)
                .and_then(|curve| is_poncelet(&frame, &curve, DEFAULT_TOL))
                .is_ok_and(|v| {
                    v.is_poncelet
                        && v.rank == 2
                        && v.pencil.as_ref().is_some_and(|p| {
                            canonical(plucker_coords(p)) == canonical(plucker_coords(&pencil))
                        })
                });
            t.check(ok, || format!("c = {c}"));
        }
    }
    t.done()
}

/// The curve vanishes exactly at every vertex of a member's tangent polygon.
pub fn vertex_vanishing(rng: &mut SeededRng, pencils: usize) -> SuiteOutcome {
    let mut t = Tally::new("vertex_vanishing");
    for k in 0..pencils {
        let c = 2 + k % 5;
        let frame = random::frame(rng, 3);
        let (pencil, roots) = random::split_member_pencil(rng, c, 6);
        let Ok(curve) = poncelet_curve(&frame, &pencil) else {
            t.check(false, || format!("construction failed at c = {c}"));
            continue;
        };
        for r in &roots {
            let ok = polygon_vertices(&frame, r)
                .is_ok_and(|vs| vs.iter().all(|v| curve.eval(v.coords()).is_zero()));
            t.check(ok, || format!("c = {c}"));
        }
    }
    t.done()
}

/// `L_c` is invertible, sends Plücker vectors to curves, and a change of
/// pencil basis scales both by its determinant.
pub fn plucker_identification(rng: &mut SeededRng, per_degree: usize) -> SuiteOutcome {
    let mut t = Tally::new("plucker_identification");
    let id = crate::geom::ConicFrame::<Rational>::identity();
    for c in 1..=6 {
        let l = cached_plucker_map(c);
        t.check(linalg::rank(&l) == l.len() && l.len() == l[0].len(), || format!("L_{c} singular"));
        for _ in 0..per_degree {
            let pencil = random::pencil(rng, c, 5);
            let p = plucker_coords(&pencil);
            let image: Vec<Rational> = l.iter().map(|row| linalg::dot(row, &p)).collect();
            let curve = curve_form(&id, &pencil);
            t.check(image == curve.coeffs(), || format!("L_{c} image differs"));
            let m: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-4..=4));
            let det = Rational::from_i64(m[0] * m[3] - m[1] * m[2]);
            if det.is_zero() {
                continue;
            }
            let [a, b, cc, d] = m.map(Rational::from_i64);
            let Ok(rebased) = pencil.rebased(&a, &b, &cc, &d) else { continue };
            let scaled_p: Vec<Rational> = p.iter().map(|x| x.clone() * det.clone()).collect();
            let ok = plucker_coords(&rebased) == scaled_p && curve_form(&id, &rebased) == curve.scale(&det);
            t.check(ok, || format!("basis change at c = {c}"));
        }
    }
    t.done()
}

/// Base points contribute their tangent lines with multiplicity.
pub fn base_points(rng: &mut SeededRng, cases: usize) -> SuiteOutcome {
    let mut t = Tally::new("base_points");
    for k in 0..cases {
        let m = 1 + k % 3;
        let frame = random::frame(rng, 3);
        let (pencil, h) = random::pencil_with_base(rng, 5, m, 4);
        let ok = split_base_points(&pencil).is_ok_and(|s| {
            s.base == h.normalized()
                && tangent_product(&frame, &s.base).mul(&curve_form(&frame, &s.reduced)).normalized()
                    == curve_form(&frame, &pencil).normalized()
        });
        t.check(ok, || format!("m = {m}"));
    }
    t.done()
}

/// The curve of an inner pencil divides the curve of any composition.
pub fn divisibility(rng: &mut SeededRng, cases: usize) -> SuiteOutcome {
    let mut t = Tally::new("divisibility");
    let shapes = [(2, 2), (2, 3), (3, 2)];
    for k in 0..cases {
        let (a1, kk) = shapes[k % shapes.len()];
        let frame = random::frame(rng, 3);
        let (inner, composed) = random::composed_pencil(rng, a1, kk, 3);
        let ok = match (poncelet_curve(&frame, &inner), poncelet_curve(&frame, &composed)) {
            (Ok(i), Ok(c)) => c.form().div_exact(i.form()).is_some(),
            _ => false,
        };
        t.check(ok, || format!("(a+1, k) = ({a1}, {kk})"));
    }
    t.done()
}

/// Relative coefficient noise, away from every Poncelet curve of the conic.
fn perturbed(curve: &PlaneCurve<f64>, rng: &mut SeededRng, level: f64) -> PlaneCurve<f64> {
    let form = curve.form();
    let noisy = crate::forms::TernaryForm::new(
        form.degree(),
        form.coeffs().iter().map(|x| x * (1.0 + level * rng.gen_range(-1.0..1.0)) + level * rng.gen_range(-1.0..1.0)).collect(),
    );
    PlaneCurve::new(noisy, curve.chart()).expect("perturbation keeps the curve nonzero")
}

/// Quintic traversals from complex starts close into hexagons; perturbed
/// curves never close.
pub fn darboux_closure(rng: &mut SeededRng, curves: usize, starts: usize) -> SuiteOutcome {
    let mut t = Tally::new("darboux_closure");
    for _ in 0..curves {
        let frame = random::frame(rng, 3);
        let pencil = random::base_point_free_pencil(rng, 5, 5);
        let Ok(curve) = poncelet_curve(&frame, &pencil) else {
            t.check(false, || "construction failed".into());
            continue;
        };
        let fc = float_curve(&curve).map(Scalar::to_complex).expect("nonzero");
        let ff = frame.map(Scalar::to_complex).expect("frame stays invertible");
        let control = perturbed(&float_curve(&curve), rng, 1e-3).map(Scalar::to_complex).expect("nonzero");
        for _ in 0..starts {
            let start = random::complex_param(rng);
            let ok = closure_traverse(&ff, &fc, &start, 1e-8)
                .is_ok_and(|r| r.closed && r.polygon_size == 6 && r.max_vertex_residual < 1e-8);
            t.check(ok, || format!("no closure from {}", start.u));
            let escaped = closure_traverse(&ff, &control, &start, 1e-8).is_ok_and(|r| !r.closed);
            t.check(escaped, || format!("perturbed curve closed from {}", start.u));
        }
    }
    t.done()
}

/// Jumping curves are Poncelet for the dual conic, exactly.
pub fn duality(rng: &mut SeededRng, per_degree: usize) -> SuiteOutcome {
    let mut t = Tally::new("duality");
    for c in [3, 5, 7] {
        for _ in 0..per_degree {
            let frame = random::frame(rng, 3);
            let pencil = random::pencil(rng, c, 5);
            let ok = duality_check(&frame, &pencil).is_ok_and(|v| v.is_poncelet && v.rank == 2);
            t.check(ok, || format!("c = {c}"));
        }
    }
    t.done()
}

/// At `c = 5` the conic is the only one, and it is found.
pub fn injectivity(rng: &mut SeededRng, pairs: usize, seed: u64) -> SuiteOutcome {
    let mut t = Tally::new("injectivity");
    let opts = RecoveryOptions { starts: 100, seed, ..Default::default() };
    for k in 0..pairs {
        let frame = random::frame(rng, 3);
        let pencil = random::pencil(rng, 5, 5);
        let ok = poncelet_curve(&frame, &pencil)
            .and_then(|curve| recover_conics(&float_curve(&curve), &opts))
            .is_ok_and(|mut r| r.match_target(&conic_vector(&frame), 1e-6) && r.candidates[0].residual < 1e-8);
        t.check(ok, || format!("pair {k}"));
    }
    t.done()
}

/// Small degree admits several conics.
pub fn non_injectivity(seed: u64) -> SuiteOutcome {
    let mut t = Tally::new("non_injectivity");
    let opts = RecoveryOptions { starts: 100, seed, tol: 1e-8, ..Default::default() };
    let cases: [(usize, &[([usize; 3], i64)], usize); 2] =
        [(2, &[([0, 2, 0], 4), ([1, 0, 1], -1)], 5), (3, &[([0, 3, 0], 2), ([1, 1, 1], -1)], 2)];
    for (c, terms, need) in cases {
        let curve = PlaneCurve::<f64>::from_terms(c, terms, Chart::Primal).expect("fixture curve");
        let found = recover_conics(&curve, &opts).map_or(0, |r| r.candidates.len());
        t.check(found >= need, || format!("c = {c}: {found} clusters"));
    }
    t.done()
}

/// The tangent space of the Poncelet variety has dimension `2c`.
pub fn dimension(rng: &mut SeededRng, per_degree: usize) -> SuiteOutcome {
    let mut t = Tally::new("dimension");
    for c in 2..=7 {
        for _ in 0..per_degree {
            let frame = random::frame(rng, 3);
            let pencil = random::base_point_free_pencil(rng, c, 5);
            let r = tangent_space_rank(&frame, &pencil);
            t.check(r == 2 * c, || format!("c = {c}: rank {r}"));
        }
    }
    t.done()
}

/// Common-tangent products lie on both Poncelet varieties.
pub fn intersection(rng: &mut SeededRng, pairs: usize, samples: usize) -> SuiteOutcome {
    let mut t = Tally::new("intersection_probe");
    for _ in 0..pairs {
        let (first, second) = conic_pair_with_rational_tangents(rng, 4);
        let seed = rng.gen();
        let ok = intersection_probe(&first, &second, 5, samples, seed)
            .is_ok_and(|r| r.common_tangents == 4 && r.memberships_verified && r.ranks.len() == samples);
        t.check(ok, || "probe failed".into());
    }
    t.done()
}

/// Runs every suite. Quick finishes in seconds; full uses acceptance sizes.
pub fn run(level: Level, seed: u64) -> SelftestReport {
    let mut rng = random::rng(seed);
    let suites = vec![
        round_trip(&mut rng, level.pick(4, 100)),
        vertex_vanishing(&mut rng, level.pick(4, 10)),
        plucker_identification(&mut rng, level.pick(5, 50)),
        base_points(&mut rng, level.pick(6, 50)),
        divisibility(&mut rng, level.pick(6, 50)),
        darboux_closure(&mut rng, level.pick(2, 10), level.pick(5, 10)),
        duality(&mut rng, level.pick(3, 20)),
        injectivity(&mut rng, level.pick(2, 25), seed),
        non_injectivity(seed),
        dimension(&mut rng, level.pick(3, 20)),
        intersection(&mut rng, level.pick(1, 5), level.pick(3, 10)),
    ];
    let hash = report_hash(level, seed, &suites);
    SelftestReport { level, seed, version: env!("CARGO_PKG_VERSION"), suites, hash }
}

fn report_hash(level: Level, seed: u64, suites: &[SuiteOutcome]) -> String {
    let mut text = format!("{level:?} {seed}\n");
    for s in suites {
        let _ = writeln!(text, "{} {} {} {:?}", s.name, s.cases, s.failures, s.note);
    }
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut acc, b| {
        let _ = write!(acc, "{b:02x}");
        acc
    })
}
