//! SVG drawings of stratifications of exit tori of dimension at most two.
//!
//! The fundamental domain `[0,1]^c` is drawn with one path per ray (all
//! translates of its hyperplane inside the domain), short hairs pointing to
//! the side where `⟨a_ρ, w⟩` increases, and one label per stratum at its
//! canonical sample. Element order is deterministic.

use std::fmt::Write;

use num_traits::{ToPrimitive, Zero};
use toric_core::{Int, Rat};
use toric_strat::Stratification;

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("cannot draw a stratification of a {0}-dimensional torus; at most 2 is supported")]
    DimTooHigh(usize),
}

impl RenderError {
    pub fn code(&self) -> &'static str {
        match self {
            RenderError::DimTooHigh(_) => "DIM_TOO_HIGH",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RenderOptions {
    pub labels: bool,
    pub hairs: bool,
    /// Side length of the fundamental domain in pixels.
    pub size: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { labels: true, hairs: true, size: 400.0 }
    }
}

const MARGIN: f64 = 40.0;
const HAIR: f64 = 0.025;

fn f(q: &Rat) -> f64 {
    q.to_f64().unwrap_or(0.0)
}

/// Drawing coordinates of a point of `[0,1]^2`, with `w_2` pointing up.
fn xy(opts: &RenderOptions, w: &[f64]) -> (f64, f64) {
    (MARGIN + w[0] * opts.size, MARGIN + (1.0 - w.get(1).copied().unwrap_or(0.5)) * opts.size)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Endpoints inside the unit square of the line `a·w = k`, if the
/// intersection is a segment of positive length.
fn clip(a: &[Int], k: &Int) -> Option<[Vec<Rat>; 2]> {
    let a0 = Rat::from_integer(a[0].clone());
    let a1 = Rat::from_integer(a[1].clone());
    let k = Rat::from_integer(k.clone());
    let zero = Rat::zero();
    let one = Rat::from_integer(Int::from(1));
    let mut pts: Vec<Vec<Rat>> = Vec::new();
    let mut push = |p: Vec<Rat>| {
        if p.iter().all(|x| *x >= zero && *x <= one) && !pts.contains(&p) {
            pts.push(p);
        }
    };
    for edge in [zero.clone(), one.clone()] {
        if !a1.is_zero() {
            push(vec![edge.clone(), (&k - &a0 * &edge) / &a1]);
        }
        if !a0.is_zero() {
            push(vec![(&k - &a1 * &edge) / &a0, edge.clone()]);
        }
    }
    pts.sort();
    if pts.len() >= 2 {
        let last = pts.pop().unwrap();
        Some([pts.swap_remove(0), last])
    } else {
        None
    }
}

pub fn render_svg(s: &Stratification, opts: &RenderOptions) -> Result<String, RenderError> {
    let c = s.torus.codim;
    if c > 2 {
        return Err(RenderError::DimTooHigh(c));
    }
    let width = opts.size + 2.0 * MARGIN;
    let height = if c == 2 { width } else { 2.0 * MARGIN + 40.0 };
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" data-codim="{c}">"#
    )
    .unwrap();
    writeln!(out, r#"<style>.hyperplane{{stroke:#b22;stroke-width:2;fill:none}}.hair{{stroke:#b22;stroke-width:1}}.domain{{stroke:#888;fill:none;stroke-dasharray:4 3}}.cell{{font:11px sans-serif;fill:#124}}.identify{{stroke:#444;stroke-width:1.5}}</style>"#).unwrap();

    match c {
        2 => draw_plane(s, opts, &mut out),
        1 => draw_interval(s, opts, &mut out),
        _ => {}
    }

    if opts.labels {
        for st in s.strata() {
            let w: Vec<f64> = st.sample.iter().map(f).collect();
            let (x, y) = if c == 0 { (MARGIN, MARGIN) } else { xy(opts, &w) };
            let (x, y) = if c == 1 { (x, MARGIN + 20.0) } else { (x, y) };
            if st.dim == 0 {
                writeln!(out, r#"<circle class="vertex" cx="{x:.3}" cy="{y:.3}" r="3"/>"#).unwrap();
            }
            writeln!(
                out,
                r#"<text class="cell" data-stratum="{}" data-dim="{}" x="{:.3}" y="{:.3}">{}</text>"#,
                st.id,
                st.dim,
                x + 4.0,
                y - 4.0,
                escape(&st.bundle.to_string())
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn draw_plane(s: &Stratification, opts: &RenderOptions, out: &mut String) {
    let (x0, y0) = xy(opts, &[0.0, 1.0]);
    writeln!(out, r#"<rect class="domain" x="{x0:.3}" y="{y0:.3}" width="{0:.3}" height="{0:.3}"/>"#, opts.size).unwrap();
    for r in s.torus.active_rays() {
        let a = &s.torus.ray_functionals[r];
        // a·w ranges over [Σ min(a_i, 0), Σ max(a_i, 0)] on the square
        let lo: Int = a.iter().filter(|x| **x < Int::zero()).sum();
        let hi: Int = a.iter().filter(|x| **x > Int::zero()).sum();
        let mut d = String::new();
        let mut hairs = String::new();
        let norm = a.iter().map(|x| f(&Rat::from_integer(x.clone())).powi(2)).sum::<f64>().sqrt();
        let mut k = lo;
        while k <= hi {
            if let Some([p, q]) = clip(a, &k) {
                // skip translates that run along the boundary twice
                let p: Vec<f64> = p.iter().map(f).collect();
                let q: Vec<f64> = q.iter().map(f).collect();
                let on_far_edge = (p[0] == 1.0 && q[0] == 1.0) || (p[1] == 1.0 && q[1] == 1.0);
                if !on_far_edge {
                    let (px, py) = xy(opts, &p);
                    let (qx, qy) = xy(opts, &q);
                    write!(d, "M{px:.3} {py:.3}L{qx:.3} {qy:.3}").unwrap();
                    if opts.hairs {
                        for t in [0.25, 0.5, 0.75] {
                            let m = [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
                            let e = [m[0] + HAIR * f(&Rat::from_integer(a[0].clone())) / norm, m[1] + HAIR * f(&Rat::from_integer(a[1].clone())) / norm];
                            let (mx, my) = xy(opts, &m);
                            let (ex, ey) = xy(opts, &e);
                            write!(hairs, "M{mx:.3} {my:.3}L{ex:.3} {ey:.3}").unwrap();
                        }
                    }
                }
            }
            k += 1;
        }
        if !d.is_empty() {
            writeln!(out, r#"<path class="hyperplane" data-ray="{r}" d="{d}"/>"#).unwrap();
            if !hairs.is_empty() {
                writeln!(out, r#"<path class="hair" data-ray="{r}" d="{hairs}"/>"#).unwrap();
            }
        }
    }
}

fn draw_interval(s: &Stratification, opts: &RenderOptions, out: &mut String) {
    let y = MARGIN + 20.0;
    let (x0, _) = xy(opts, &[0.0]);
    let (x1, _) = xy(opts, &[1.0]);
    writeln!(out, r#"<line class="domain" x1="{x0:.3}" y1="{y:.3}" x2="{x1:.3}" y2="{y:.3}"/>"#).unwrap();
    // the endpoints are the same point of the circle
    for x in [x0, x1] {
        writeln!(out, r#"<path class="identify" d="M{:.3} {:.3}L{:.3} {:.3}M{:.3} {:.3}L{:.3} {:.3}"/>"#, x - 2.0, y - 6.0, x - 2.0, y + 6.0, x + 2.0, y - 6.0, x + 2.0, y + 6.0).unwrap();
    }
    for r in s.torus.active_rays() {
        let a = &s.torus.ray_functionals[r][0];
        let n = num_traits::Signed::abs(a).to_i64().unwrap_or(0);
        let mut d = String::new();
        let mut hairs = String::new();
        for k in 0..n {
            let w = k as f64 / n as f64;
            let (x, _) = xy(opts, &[w]);
            write!(d, "M{x:.3} {:.3}L{x:.3} {:.3}", y - 10.0, y + 10.0).unwrap();
            if opts.hairs {
                let dir = if *a > Int::zero() { 1.0 } else { -1.0 };
                write!(hairs, "M{x:.3} {:.3}L{:.3} {:.3}", y - 10.0, x + dir * HAIR * opts.size, y - 10.0).unwrap();
            }
        }
        if !d.is_empty() {
            writeln!(out, r#"<path class="hyperplane" data-ray="{r}" d="{d}"/>"#).unwrap();
            if !hairs.is_empty() {
                writeln!(out, r#"<path class="hair" data-ray="{r}" d="{hairs}"/>"#).unwrap();
            }
        }
    }
}
