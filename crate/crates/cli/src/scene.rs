//! Scene documents: named conics, pencils and curves in one strict JSON file.
//!
//! Exact scenes store every scalar as a rational string `"p/q"`; float scenes
//! accept plain numbers. Curve coefficients are keyed by exponent triples
//! `"i,j,k"` for `x^i y^j z^k`. Pencil arrays list `coeffs[i]` of `u^i v^(d−i)`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use poncelet::construction::Pencil;
use poncelet::forms::{BinaryForm, Chart, PlaneCurve, TernaryForm};
use poncelet::geom::ConicFrame;
use poncelet::linalg::Mat3;
use poncelet::scalar::{format_rational, parse_rational, Mode, Rational, Scalar};

use crate::CliError;

pub const SCENE_VERSION: &str = "1";

/// A scalar as written in a scene: a string in exact mode, a number or a
/// string in float mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Text(String),
    Float(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConicEntry {
    /// Rows of the frame `T`; the conic is the image of `(u², uv, v²)`.
    pub frame: [[Num; 3]; 3],
    #[serde(default)]
    pub chart: Chart,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilEntry {
    pub f: Vec<Num>,
    pub g: Vec<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveEntry {
    pub coefficients: BTreeMap<String, Num>,
    #[serde(default)]
    pub chart: Chart,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDoc {
    pub version: String,
    pub mode: Mode,
    #[serde(default)]
    pub conics: BTreeMap<String, ConicEntry>,
    #[serde(default)]
    pub pencils: BTreeMap<String, PencilEntry>,
    #[serde(default)]
    pub curves: BTreeMap<String, CurveEntry>,
}

/// Scalars a scene can be read into and written from.
pub trait SceneScalar: Scalar {
    fn read(num: &Num, field: &str) -> Result<Self, CliError>;
    fn write(&self) -> Num;
}

impl SceneScalar for Rational {
    fn read(num: &Num, field: &str) -> Result<Self, CliError> {
        match num {
            Num::Text(s) => parse_rational(s).ok_or_else(|| CliError::input(format!("{field}: malformed rational {s:?}"))),
            Num::Float(x) => Err(CliError::input(format!("{field}: exact scenes need rational strings, found {x}"))),
        }
    }

    fn write(&self) -> Num {
        Num::Text(format_rational(self))
    }
}

impl SceneScalar for f64 {
    fn read(num: &Num, field: &str) -> Result<Self, CliError> {
        let x = match num {
            Num::Float(x) => *x,
            Num::Text(s) => match parse_rational(s) {
                Some(r) => poncelet::scalar::rational_to_f64(&r),
                None => s.trim().parse().map_err(|_| CliError::input(format!("{field}: malformed number {s:?}")))?,
            },
        };
        if x.is_finite() {
            Ok(x)
        } else {
            Err(CliError::input(format!("{field}: value is not finite")))
        }
    }

    fn write(&self) -> Num {
        Num::Float(*self)
    }
}

pub fn parse_key(key: &str, field: &str) -> Result<[usize; 3], CliError> {
    let parts: Vec<&str> = key.split(',').collect();
    let bad = || CliError::input(format!("{field}: monomial key {key:?} is not \"i,j,k\""));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut e = [0usize; 3];
    for (slot, p) in e.iter_mut().zip(&parts) {
        *slot = p.trim().parse().map_err(|_| bad())?;
    }
    Ok(e)
}

pub fn format_key(e: [usize; 3]) -> String {
    format!("{},{},{}", e[0], e[1], e[2])
}

impl SceneDoc {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: Self = serde_json::from_str(text).map_err(|e| CliError::input(format!("scene: {e}")))?;
        if doc.version != SCENE_VERSION {
            return Err(CliError::input(format!("version: unsupported scene version {:?}", doc.version)));
        }
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scene serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json()).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    }

    pub fn conic<S: SceneScalar>(&self, name: &str) -> Result<ConicFrame<S>, CliError> {
        let entry = self.conics.get(name).ok_or_else(|| CliError::input(format!("conics.{name}: not found")))?;
        let mut rows = Vec::with_capacity(3);
        for (i, row) in entry.frame.iter().enumerate() {
            let mut r = Vec::with_capacity(3);
            for (j, x) in row.iter().enumerate() {
                r.push(S::read(x, &format!("conics.{name}.frame[{i}][{j}]"))?);
            }
            rows.push(r);
        }
        let t = Mat3::from_fn(|i, j| rows[i][j].clone());
        ConicFrame::new(t, entry.chart).map_err(|e| CliError::input(format!("conics.{name}: {e}")))
    }

    pub fn pencil<S: SceneScalar>(&self, name: &str) -> Result<Pencil<S>, CliError> {
        let entry = self.pencils.get(name).ok_or_else(|| CliError::input(format!("pencils.{name}: not found")))?;
        let read = |v: &[Num], which: &str| -> Result<BinaryForm<S>, CliError> {
            let coeffs = v
                .iter()
                .enumerate()
                .map(|(i, x)| S::read(x, &format!("pencils.{name}.{which}[{i}]")))
                .collect::<Result<Vec<S>, _>>()?;
            if coeffs.len() < 2 {
                return Err(CliError::input(format!("pencils.{name}.{which}: need degree at least 1")));
            }
            Ok(BinaryForm::new(coeffs))
        };
        let (f, g) = (read(&entry.f, "f")?, read(&entry.g, "g")?);
        if f.degree() != g.degree() {
            return Err(CliError::input(format!("pencils.{name}: f and g have different degrees")));
        }
        Pencil::new(f, g).map_err(|e| CliError::input(format!("pencils.{name}: {e}")))
    }

    pub fn curve<S: SceneScalar>(&self, name: &str) -> Result<PlaneCurve<S>, CliError> {
        let entry = self.curves.get(name).ok_or_else(|| CliError::input(format!("curves.{name}: not found")))?;
        let mut terms = Vec::with_capacity(entry.coefficients.len());
        let mut degree = None;
        for (key, value) in &entry.coefficients {
            let field = format!("curves.{name}.coefficients[{key:?}]");
            let e = parse_key(key, &field)?;
            let d = e.iter().sum::<usize>();
            if *degree.get_or_insert(d) != d {
                return Err(CliError::input(format!("{field}: degree {d} differs from the other monomials")));
            }
            terms.push((e, S::read(value, &field)?));
        }
        let degree = degree.ok_or_else(|| CliError::input(format!("curves.{name}: no coefficients")))?;
        PlaneCurve::new(TernaryForm::from_terms(degree, &terms), entry.chart)
            .map_err(|e| CliError::input(format!("curves.{name}: {e}")))
    }

    /// Stores a curve, dropping zero coefficients.
    pub fn put_curve<S: SceneScalar>(&mut self, name: &str, curve: &PlaneCurve<S>) {
        let coefficients = curve_map(curve.form());
        self.curves.insert(name.to_string(), CurveEntry { coefficients, chart: curve.chart() });
    }
}

pub fn curve_map<S: SceneScalar>(form: &TernaryForm<S>) -> BTreeMap<String, Num> {
    poncelet::forms::monomials(form.degree())
        .into_iter()
        .zip(form.coeffs())
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (format_key(e), c.write()))
        .collect()
}

pub fn form_values<S: SceneScalar>(f: &BinaryForm<S>) -> Vec<Num> {
    f.coeffs().iter().map(SceneScalar::write).collect()
}

/// Float evaluation of a named curve or conic, for plotting.
pub fn float_form(doc: &SceneDoc, name: &str) -> Result<(TernaryForm<f64>, Chart), CliError> {
    if doc.curves.contains_key(name) {
        let c = match doc.mode {
            Mode::Exact => doc.curve::<Rational>(name)?.map(poncelet::scalar::rational_to_f64),
            Mode::Float => Ok(doc.curve::<f64>(name)?),
        }
        .map_err(|e| CliError::input(format!("curves.{name}: {e}")))?;
        return Ok((c.form().clone(), c.chart()));
    }
    if doc.conics.contains_key(name) {
        let coef = match doc.mode {
            Mode::Exact => doc.conic::<Rational>(name)?.conic_coefficients().map(|x| poncelet::scalar::rational_to_f64(&x)),
            Mode::Float => doc.conic::<f64>(name)?.conic_coefficients(),
        };
        let [a, b, c, d, e, f] = coef;
        let terms = [([2, 0, 0], a), ([1, 1, 0], b), ([0, 2, 0], c), ([1, 0, 1], d), ([0, 1, 1], e), ([0, 0, 2], f)];
        let chart = doc.conics[name].chart;
        return Ok((TernaryForm::from_terms(2, &terms), chart));
    }
    Err(CliError::input(format!("{name}: no curve or conic of that name")))
}
