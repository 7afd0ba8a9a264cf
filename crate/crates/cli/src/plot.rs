//! Real loci in the affine chart `z = 1`, contoured on a sign grid and
//! written as SVG 1.1. Presentation only; nothing here feeds back into math.

use std::fmt::Write as _;

use poncelet::forms::TernaryForm;

pub const DEFAULT_GRID: usize = 512;
const CANVAS: usize = 512;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Default for Window {
    fn default() -> Self {
        Self { x_min: -3.0, x_max: 3.0, y_min: -3.0, y_max: 3.0 }
    }
}

impl std::str::FromStr for Window {
    type Err = String;

    /// `"xmin,xmax,ymin,ymax"`.
    fn from_str(s: &str) -> Result<Self, String> {
        let v: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| format!("window: bad number {p:?}")))
            .collect::<Result<_, _>>()?;
        let [x_min, x_max, y_min, y_max] = v[..] else {
            return Err("window: expected xmin,xmax,ymin,ymax".into());
        };
        if !(x_min < x_max && y_min < y_max) || v.iter().any(|x| !x.is_finite()) {
            return Err("window: need xmin < xmax and ymin < ymax".into());
        }
        Ok(Self { x_min, x_max, y_min, y_max })
    }
}

type Segment = [(f64, f64); 2];

/// Segments of `{f = 0}` over a `grid × grid` cell lattice. Saddle cells are
/// split by the sign of the cell-centre average.
pub fn contour(form: &TernaryForm<f64>, w: &Window, grid: usize) -> Vec<Segment> {
    let n = grid.max(1);
    let xs: Vec<f64> = (0..=n).map(|i| w.x_min + (w.x_max - w.x_min) * i as f64 / n as f64).collect();
    let ys: Vec<f64> = (0..=n).map(|j| w.y_min + (w.y_max - w.y_min) * j as f64 / n as f64).collect();
    let vals: Vec<Vec<f64>> = ys.iter().map(|&y| xs.iter().map(|&x| form.eval(&[x, y, 1.0])).collect()).collect();
    let mut out = Vec::new();
    for j in 0..n {
        for i in 0..n {
            // corners counter-clockwise from bottom-left
            let c = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let v = c.map(|(a, b)| vals[b][a]);
            if v.iter().any(|x| !x.is_finite()) {
                continue;
            }
            let crossing = |k: usize| {
                let (a, b) = (k, (k + 1) % 4);
                if (v[a] >= 0.0) == (v[b] >= 0.0) {
                    return None;
                }
                let s = v[a] / (v[a] - v[b]);
                let (pa, pb) = (c[a], c[b]);
                let x = xs[pa.0] + s * (xs[pb.0] - xs[pa.0]);
                let y = ys[pa.1] + s * (ys[pb.1] - ys[pa.1]);
                Some((x, y))
            };
            let hits: Vec<(usize, (f64, f64))> = (0..4).filter_map(|k| crossing(k).map(|p| (k, p))).collect();
            match hits.len() {
                2 => out.push([hits[0].1, hits[1].1]),
                4 => {
                    let centre_positive = v.iter().sum::<f64>() >= 0.0;
                    // the centre joins corners 0 and 2 or corners 1 and 3
                    let corner0_positive = v[0] >= 0.0;
                    if centre_positive == corner0_positive {
                        out.push([hits[0].1, hits[1].1]);
                        out.push([hits[2].1, hits[3].1]);
                    } else {
                        out.push([hits[3].1, hits[0].1]);
                        out.push([hits[1].1, hits[2].1]);
                    }
                }
                _ => {}
            }
        }
    }
    out
}

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0".into()
    } else {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// One `<g>` per named locus; an empty real locus gets an empty group with
/// a title saying so. Also returns each layer's segment count.
pub fn render(layers: &[(String, TernaryForm<f64>)], w: &Window, grid: usize) -> (String, Vec<usize>) {
    let (width, height) = (w.x_max - w.x_min, w.y_max - w.y_min);
    let stroke = width.max(height) / CANVAS as f64;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"{} {} {} {}\">",
        num(w.x_min),
        num(-w.y_max),
        num(width),
        num(height)
    );
    let _ = writeln!(s, "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"{}\">", num(stroke));
    let mut counts = Vec::with_capacity(layers.len());
    for (k, (name, form)) in layers.iter().enumerate() {
        let segments = contour(form, w, grid);
        counts.push(segments.len());
        if segments.is_empty() {
            let _ = writeln!(s, "<g id=\"{}\"><title>{}: no real points in window</title></g>", escape(name), escape(name));
            continue;
        }
        let _ = writeln!(s, "<g id=\"{}\" stroke=\"{}\"><title>{}</title>", escape(name), PALETTE[k % PALETTE.len()], escape(name));
        s.push_str("<path d=\"");
        for (i, [a, b]) in segments.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "M{} {}L{} {}", num(a.0), num(a.1), num(b.0), num(b.1));
        }
        s.push_str("\"/>\n</g>\n");
    }
    s.push_str("</g>\n</svg>\n");
    (s, counts)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
