//! Deterministic figures: the filled Julia set, external rays, lamination
//! chords (straight or hyperbolic), dynamical partition rings, and the
//! action of a group element on the level-0 arcs.
//!
//! SVG output is the golden format: identical specs produce identical bytes.
//! PNG is a convenience raster of the same layers.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::circle::Angle;
use crate::geometry::{angle_to_f64, in_filled_set, trace_ray, GeometryError};
use crate::group::{word_to_map, GroupWord};
use crate::lamination::{build_lamination_with_cap, d_points_with_cap, partition_with_cap, ArcCase};

#[derive(Clone, Debug, PartialEq)]
pub enum Layer {
    Filled,
    /// External rays at all points of `D_level`.
    Rays(u32),
    /// The circle tiling by `D_level`, drawn as a colored ring.
    Partition(u32),
    /// Lamination chords up to the given depth.
    Lamination(u32),
    /// Level-0 arcs and their images under the word's map, colored by source.
    Action(GroupWord),
}

#[derive(Clone, Debug)]
pub struct RenderSpec {
    /// View rectangle `(x0, y0, x1, y1)` in plane coordinates.
    pub view: (f64, f64, f64, f64),
    pub width: u32,
    pub height: u32,
    pub max_iter: u32,
    pub escape_radius: f64,
    pub layers: Vec<Layer>,
    /// Draw lamination chords as hyperbolic geodesics instead of segments.
    pub hyperbolic: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            view: (-2.0, -1.25, 2.0, 1.25),
            width: 800,
            height: 500,
            max_iter: 200,
            escape_radius: 4.0,
            layers: vec![Layer::Filled],
            hyperbolic: false,
        }
    }
}

impl RenderSpec {
    /// A square view of the unit disk, suited to lamination figures.
    pub fn disk(size: u32) -> Self {
        RenderSpec {
            view: (-1.15, -1.15, 1.15, 1.15),
            width: size,
            height: size,
            layers: vec![],
            ..RenderSpec::default()
        }
    }
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

fn palette_rgb(i: usize) -> [u8; 3] {
    let hex = PALETTE[i % PALETTE.len()].as_bytes();
    let h = |k: usize| u8::from_str_radix(std::str::from_utf8(&hex[k..k + 2]).unwrap(), 16).unwrap();
    [h(1), h(3), h(5)]
}

struct Frame {
    view: (f64, f64, f64, f64),
    width: f64,
    height: f64,
}

impl Frame {
    fn of(spec: &RenderSpec) -> Self {
        Frame {
            view: spec.view,
            width: spec.width as f64,
            height: spec.height as f64,
        }
    }

    fn to_px(&self, z: Complex64) -> (f64, f64) {
        let (x0, y0, x1, y1) = self.view;
        (
            (z.re - x0) / (x1 - x0) * self.width,
            (y1 - z.im) / (y1 - y0) * self.height,
        )
    }

    fn cell_center(&self, i: u32, j: u32) -> Complex64 {
        let (x0, y0, x1, y1) = self.view;
        Complex64::new(
            x0 + (i as f64 + 0.5) / self.width * (x1 - x0),
            y1 - (j as f64 + 0.5) / self.height * (y1 - y0),
        )
    }
}

fn circle_point(a: &Angle) -> Complex64 {
    let t = 2.0 * PI * angle_to_f64(a);
    Complex64::new(t.cos(), t.sin())
}

/// Sample points along the chord between two circle angles: a straight
/// segment, or the geodesic arc of the circle orthogonal to the unit circle.
fn chord_points(a: &Angle, b: &Angle, hyperbolic: bool) -> Vec<Complex64> {
    let p = circle_point(a);
    let q = circle_point(b);
    if !hyperbolic {
        return vec![p, q];
    }
    let det = p.re * q.im - p.im * q.re;
    if det.abs() < 1e-9 {
        // Antipodal endpoints: the geodesic is the diameter.
        return vec![p, q];
    }
    // Orthocircle through p and q: <p, c> = <q, c> = 1.
    let c = Complex64::new((q.im - p.im) / det, (p.re - q.re) / det);
    let r = (c.norm_sqr() - 1.0).sqrt();
    let phi_p = (p - c).arg();
    let phi_q = (q - c).arg();
    let mut delta = phi_q - phi_p;
    while delta > PI {
        delta -= 2.0 * PI;
    }
    while delta < -PI {
        delta += 2.0 * PI;
    }
    let segments = 24;
    (0..=segments)
        .map(|k| {
            let phi = phi_p + delta * (k as f64 / segments as f64);
            c + Complex64::new(r * phi.cos(), r * phi.sin())
        })
        .collect()
}

fn fmt_pt(frame: &Frame, z: Complex64) -> String {
    let (x, y) = frame.to_px(z);
    format!("{x:.3},{y:.3}")
}

/// Horizontal run-length rectangles covering the filled set on the cell grid.
fn filled_runs(spec: &RenderSpec, frame: &Frame) -> Vec<(u32, u32, u32)> {
    let mut runs = Vec::new();
    for j in 0..spec.height {
        let mut start: Option<u32> = None;
        for i in 0..spec.width {
            let inside = in_filled_set(frame.cell_center(i, j), spec.max_iter, spec.escape_radius);
            match (inside, start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    runs.push((j, s, i));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push((j, s, spec.width));
        }
    }
    runs
}

/// Ring arcs along the unit circle at the given radius, one per partition
/// arc, as polyline samples.
fn ring_arc(a: &Angle, b: &Angle, radius: f64) -> Vec<Complex64> {
    let t0 = 2.0 * PI * angle_to_f64(a);
    let mut t1 = 2.0 * PI * angle_to_f64(b);
    if t1 <= t0 {
        t1 += 2.0 * PI;
    }
    let segments = 32;
    (0..=segments)
        .map(|k| {
            let t = t0 + (t1 - t0) * (k as f64 / segments as f64);
            Complex64::new(radius * t.cos(), radius * t.sin())
        })
        .collect()
}

fn push_polyline(svg: &mut String, frame: &Frame, pts: &[Complex64], color: &str, width: f64) {
    let mut d = String::new();
    for (k, z) in pts.iter().enumerate() {
        let _ = write!(d, "{}{}", if k == 0 { "M" } else { " L" }, fmt_pt(frame, *z));
    }
    let _ = writeln!(
        svg,
        r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="{width:.2}"/>"#
    );
}

/// Render the spec to SVG text. Deterministic: identical specs give
/// byte-identical output.
pub fn render_svg(spec: &RenderSpec) -> Result<String, GeometryError> {
    let frame = Frame::of(spec);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = spec.width,
        h = spec.height
    );
    let _ = writeln!(
        svg,
        r##"<rect width="{w}" height="{h}" fill="#ffffff"/>"##,
        w = spec.width,
        h = spec.height
    );
    for layer in &spec.layers {
        match layer {
            Layer::Filled => {
                let _ = writeln!(svg, r##"<g fill="#203a75">"##);
                for (j, s, e) in filled_runs(spec, &frame) {
                    let _ = writeln!(
                        svg,
                        r#"<rect x="{x}" y="{y}" width="{w}" height="1"/>"#,
                        x = s,
                        y = j,
                        w = e - s
                    );
                }
                let _ = writeln!(svg, "</g>");
            }
            Layer::Rays(level) => {
                let pts = d_points_with_cap(*level, u32::MAX)
                    .map_err(|e| GeometryError::Io(e.to_string()))?;
                let _ = writeln!(svg, r#"<g opacity="0.9">"#);
                for (idx, theta) in pts.iter().enumerate() {
                    let trace = trace_ray(theta, 48, 1e30)?;
                    push_polyline(&mut svg, &frame, &trace.points, PALETTE[idx % 8], 0.8);
                }
                let _ = writeln!(svg, "</g>");
            }
            Layer::Partition(level) => {
                let arcs = partition_with_cap(*level, u32::MAX)
                    .map_err(|e| GeometryError::Io(e.to_string()))?;
                let _ = writeln!(svg, "<g>");
                for (idx, parc) in arcs.iter().enumerate() {
                    let radius = match parc.case {
                        ArcCase::LimbArc => 1.03,
                        ArcCase::SpanArc => 1.07,
                    };
                    let pts = ring_arc(parc.arc.start(), parc.arc.end(), radius);
                    push_polyline(&mut svg, &frame, &pts, PALETTE[idx % 8], 2.5);
                }
                let _ = writeln!(svg, "</g>");
            }
            Layer::Lamination(depth) => {
                let lam = build_lamination_with_cap(*depth, u32::MAX)
                    .map_err(|e| GeometryError::Io(e.to_string()))?;
                let _ = writeln!(svg, r##"<g stroke="#303030">"##);
                let circle = ring_arc(&Angle::zero(), &Angle::zero(), 1.0);
                push_polyline(&mut svg, &frame, &circle, "#000000", 1.2);
                for leaf in lam.all_leaves() {
                    let pts = chord_points(leaf.small(), leaf.big(), spec.hyperbolic);
                    push_polyline(&mut svg, &frame, &pts, "#303030", 0.9);
                }
                let _ = writeln!(svg, "</g>");
            }
            Layer::Action(word) => {
                let map = word_to_map(word);
                let arcs = partition_with_cap(0, u32::MAX)
                    .map_err(|e| GeometryError::Io(e.to_string()))?;
                let _ = writeln!(svg, "<g>");
                for (idx, parc) in arcs.iter().enumerate() {
                    let src = ring_arc(parc.arc.start(), parc.arc.end(), 1.12);
                    push_polyline(&mut svg, &frame, &src, PALETTE[idx % 8], 3.0);
                    let img_start = map.evaluate(parc.arc.start());
                    let img_end = map.evaluate(parc.arc.end());
                    let img = ring_arc(&img_start, &img_end, 1.2);
                    push_polyline(&mut svg, &frame, &img, PALETTE[idx % 8], 3.0);
                }
                let _ = writeln!(svg, "</g>");
            }
        }
    }
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

/// Render the spec to PNG bytes (RGB8).
pub fn render_png(spec: &RenderSpec) -> Result<Vec<u8>, GeometryError> {
    let frame = Frame::of(spec);
    let (w, h) = (spec.width as usize, spec.height as usize);
    let mut pixels = vec![255u8; w * h * 3];
    let mut put = |x: i64, y: i64, rgb: [u8; 3]| {
        if x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h {
            let at = (y as usize * w + x as usize) * 3;
            pixels[at..at + 3].copy_from_slice(&rgb);
        }
    };
    for layer in &spec.layers {
        match layer {
            Layer::Filled => {
                for (j, s, e) in filled_runs(spec, &frame) {
                    for i in s..e {
                        put(i as i64, j as i64, [0x20, 0x3a, 0x75]);
                    }
                }
            }
            Layer::Rays(level) => {
                let pts = d_points_with_cap(*level, u32::MAX)
                    .map_err(|e| GeometryError::Io(e.to_string()))?;
                for (idx, theta) in pts.iter().enumerate() {
                    let trace = trace_ray(theta, 48, 1e30)?;
                    draw_polyline(&mut put, &frame, &trace.points, palette_rgb(idx));
                }
            }
            Layer::Partition(level) => {
                let arcs = partition_with_cap(*level, u32::MAX)
                    .map_err(|e| GeometryError::Io(e.to_string()))?;
                for (idx, parc) in arcs.iter().enumerate() {
                    let pts = ring_arc(parc.arc.start(), parc.arc.end(), 1.05);
                    draw_polyline(&mut put, &frame, &pts, palette_rgb(idx));
                }
            }
            Layer::Lamination(depth) => {
                let lam = build_lamination_with_cap(*depth, u32::MAX)
                    .map_err(|e| GeometryError::Io(e.to_string()))?;
                let circle = ring_arc(&Angle::zero(), &Angle::zero(), 1.0);
                draw_polyline(&mut put, &frame, &circle, [0, 0, 0]);
                for leaf in lam.all_leaves() {
                    let pts = chord_points(leaf.small(), leaf.big(), spec.hyperbolic);
                    draw_polyline(&mut put, &frame, &pts, [0x30, 0x30, 0x30]);
                }
            }
            Layer::Action(word) => {
                let map = word_to_map(word);
                let arcs = partition_with_cap(0, u32::MAX)
                    .map_err(|e| GeometryError::Io(e.to_string()))?;
                for (idx, parc) in arcs.iter().enumerate() {
                    let src = ring_arc(parc.arc.start(), parc.arc.end(), 1.08);
                    draw_polyline(&mut put, &frame, &src, palette_rgb(idx));
                    let img = ring_arc(
                        &map.evaluate(parc.arc.start()),
                        &map.evaluate(parc.arc.end()),
                        1.13,
                    );
                    draw_polyline(&mut put, &frame, &img, palette_rgb(idx));
                }
            }
        }
    }
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, spec.width, spec.height);
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder
            .write_header()
            .map_err(|e| GeometryError::Io(e.to_string()))?;
        writer
            .write_image_data(&pixels)
            .map_err(|e| GeometryError::Io(e.to_string()))?;
    }
    Ok(out)
}

fn draw_polyline(
    put: &mut impl FnMut(i64, i64, [u8; 3]),
    frame: &Frame,
    pts: &[Complex64],
    rgb: [u8; 3],
) {
    for w in pts.windows(2) {
        let (x0, y0) = frame.to_px(w[0]);
        let (x1, y1) = frame.to_px(w[1]);
        let steps = ((x1 - x0).abs().max((y1 - y0).abs()).ceil() as i64).max(1);
        for k in 0..=steps {
            let t = k as f64 / steps as f64;
            put(
                (x0 + (x1 - x0) * t).round() as i64,
                (y0 + (y1 - y0) * t).round() as i64,
                rgb,
            );
        }
    }
}
