//! `curves.csv`, `residues.csv` and `figure.svg`. Every number is written
//! with a fixed number of decimals so identical runs give identical bytes.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use stsdelay_core::curve::{DelayCurve, ModelTag, PointValue};

use crate::dataset::DataFile;
use crate::residues::ResidueReport;
use crate::scenario::ScenarioResult;
use crate::{HarnessError, Result};

pub const CURVES_HEADER: [&str; 4] = ["nu_ghz", "sts_ns", "pt_ns", "bl_ns"];
pub const RESIDUES_HEADER: [&str; 4] = ["model", "delta_raw", "delta_normalized", "run"];

pub const CURVES_FILE: &str = "curves.csv";
pub const RESIDUES_FILE: &str = "residues.csv";
pub const FIGURE_FILE: &str = "figure.svg";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPaths {
    pub curves: PathBuf,
    /// Present only when residues were computed.
    pub residues: Option<PathBuf>,
    pub figure: PathBuf,
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

fn format_point(value: &PointValue) -> String {
    match value {
        PointValue::Finite(v) => format!("{:.6}", v * 1e9),
        PointValue::Divergent => "inf".into(),
        PointValue::Failed(_) => "nan".into(),
    }
}

/// One row per sweep frequency; columns of models that were not run stay
/// empty. Delays in ns, divergences as `inf`, failures as `nan`.
pub fn write_curves_csv<W: Write>(w: W, curves: &[DelayCurve]) -> std::result::Result<(), csv::Error> {
    let mut out = csv_writer(w);
    out.write_record(CURVES_HEADER)?;
    let rows = curves.first().map_or(0, |c| c.points.len());
    for i in 0..rows {
        let nu = curves[0].points[i].nu;
        let mut record = vec![format!("{:.6}", nu / 1e9)];
        for model in ModelTag::ALL {
            record.push(
                curves
                    .iter()
                    .find(|c| c.model == model)
                    .map_or(String::new(), |c| format_point(&c.points[i].value)),
            );
        }
        out.write_record(&record)?;
    }
    out.flush()?;
    Ok(())
}

/// `Δ` in ns; `δ` empty when the report is degenerate.
pub fn write_residues_csv<W: Write>(w: W, reports: &[ResidueReport]) -> std::result::Result<(), csv::Error> {
    let mut out = csv_writer(w);
    out.write_record(RESIDUES_HEADER)?;
    for report in reports {
        for e in &report.entries {
            out.write_record([
                e.model.label().to_string(),
                format!("{:.9}", e.delta_raw * 1e9),
                e.delta_normalized.map_or(String::new(), |d| format!("{d:.9}")),
                report.run.clone(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes all artifacts into `out_dir`, creating it if needed. Without
/// residues any `residues.csv` left from an earlier run is removed.
pub fn emit_outputs(result: &ScenarioResult, data: Option<&DataFile>, out_dir: &Path) -> Result<OutputPaths> {
    std::fs::create_dir_all(out_dir).map_err(|e| HarnessError::io(out_dir, e))?;
    let create = |path: &Path| std::fs::File::create(path).map_err(|e| HarnessError::io(path, e));

    let curves = out_dir.join(CURVES_FILE);
    write_curves_csv(std::io::BufWriter::new(create(&curves)?), &result.curves)
        .map_err(|e| HarnessError::csv(&curves, e))?;

    let residues_path = out_dir.join(RESIDUES_FILE);
    let residues = if result.residues.is_empty() {
        match std::fs::remove_file(&residues_path) {
            Ok(()) => {}
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(HarnessError::io(&residues_path, e)),
        }
        None
    } else {
        write_residues_csv(std::io::BufWriter::new(create(&residues_path)?), &result.residues)
            .map_err(|e| HarnessError::csv(&residues_path, e))?;
        Some(residues_path)
    };

    let figure = out_dir.join(FIGURE_FILE);
    std::fs::write(&figure, render_svg(result, data)).map_err(|e| HarnessError::io(&figure, e))?;

    Ok(OutputPaths {
        curves,
        residues,
        figure,
    })
}

/// `(ν in GHz, delay in ns)`, `None` where the model has no finite value.
type Series = Vec<(f64, Option<f64>)>;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 28.0;
const BOTTOM: f64 = 64.0;

fn style(model: ModelTag) -> (&'static str, &'static str) {
    match model {
        ModelTag::Sts => ("#1f77b4", ""),
        ModelTag::PhaseTime => ("#d62728", " stroke-dasharray=\"8 4\""),
        ModelTag::ButtikerLandauer => ("#2ca02c", " stroke-dasharray=\"2 3\""),
    }
}

/// Tick spacing of 1, 2 or 5 times a power of ten giving about six ticks.
fn tick_step(range: f64) -> f64 {
    let raw = range / 6.0;
    let p = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0].into_iter().map(|m| m * p).find(|s| *s >= raw).unwrap_or(10.0 * p)
}

fn decimals(step: f64) -> usize {
    (-step.log10().floor()).max(0.0) as usize
}

struct Axes {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Axes {
    fn x(&self, v: f64) -> f64 {
        LEFT + (v - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }
    fn y(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - (v - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)
    }
}

/// Delay (ns) against source frequency (GHz), one series per model, measured
/// runs as markers and a dashed line at the inner cutoff. BL values that
/// diverge or exceed the plotted range are clipped and annotated.
pub fn render_svg(result: &ScenarioResult, data: Option<&DataFile>) -> String {
    let nu_in = result.cutoffs.nu_in / 1e9;
    let series: Vec<(ModelTag, Series)> = result
        .curves
        .iter()
        .map(|c| {
            let pts = c.points.iter().map(|p| (p.nu / 1e9, p.value.finite().map(|v| v * 1e9))).collect();
            (c.model, pts)
        })
        .collect();
    let markers: Vec<(&str, Vec<(f64, f64)>)> = data
        .map(|d| {
            d.sets
                .iter()
                .filter(|s| !s.points.is_empty())
                .map(|s| (s.run.as_str(), s.points.iter().map(|&(x, y)| (x / 1e9, y * 1e9)).collect()))
                .collect()
        })
        .unwrap_or_default();

    let mut xs: Vec<f64> = series.iter().flat_map(|(_, p)| p.iter().map(|q| q.0)).collect();
    xs.extend(markers.iter().flat_map(|(_, p)| p.iter().map(|q| q.0)));
    xs.push(nu_in);
    let (mut x0, mut x1) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if !(x1 > x0) {
        x0 -= 0.5;
        x1 += 0.5;
    }

    // The vertical range follows STS, PT and the data; BL only sets it when
    // nothing else is plotted, and then ignores the 50 MHz around the cutoff.
    let mut ys: Vec<f64> = series
        .iter()
        .filter(|(m, _)| *m != ModelTag::ButtikerLandauer)
        .flat_map(|(_, p)| p.iter().filter_map(|q| q.1))
        .collect();
    ys.extend(markers.iter().flat_map(|(_, p)| p.iter().map(|q| q.1)));
    if ys.is_empty() {
        ys = series
            .iter()
            .flat_map(|(_, p)| p.iter().filter(|q| (q.0 - nu_in).abs() > 0.05).filter_map(|q| q.1))
            .collect();
    }
    let (lo, hi) = ys.iter().fold((0.0f64, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let hi = if hi > lo { hi } else { lo + 1.0 };
    let ystep = tick_step(hi - lo);
    let axes = Axes {
        x0,
        x1,
        y0: (lo / ystep).floor() * ystep,
        y1: (hi * 1.05 / ystep).ceil() * ystep,
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" viewBox=\"0 0 {WIDTH:.0} {HEIGHT:.0}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let (px0, px1, py0, py1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        s,
        "<rect x=\"{px0:.2}\" y=\"{py1:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\"/>",
        px1 - px0,
        py0 - py1
    );
    let _ = writeln!(
        s,
        "<clipPath id=\"plot\"><rect x=\"{px0:.2}\" y=\"{py1:.2}\" width=\"{:.2}\" height=\"{:.2}\"/></clipPath>",
        px1 - px0,
        py0 - py1
    );

    let xstep = tick_step(x1 - x0);
    let xd = decimals(xstep);
    let mut t = (x0 / xstep).ceil() * xstep;
    while t <= x1 + 1e-9 * xstep {
        let x = axes.x(t);
        let _ = writeln!(s, "<line x1=\"{x:.2}\" y1=\"{py0:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>", py0 + 5.0);
        let _ = writeln!(s, "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{t:.xd$}</text>", py0 + 19.0);
        t += xstep;
    }
    let yd = decimals(ystep);
    let mut t = axes.y0;
    while t <= axes.y1 + 1e-9 * ystep {
        let y = axes.y(t);
        let _ = writeln!(s, "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{px0:.2}\" y2=\"{y:.2}\" stroke=\"black\"/>", px0 - 5.0);
        let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{:.yd$}</text>", px0 - 8.0, y + 4.0, t + 0.0);
        t += ystep;
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">source frequency (GHz)</text>",
        0.5 * (px0 + px1),
        HEIGHT - 18.0
    );
    let _ = writeln!(
        s,
        "<text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">delay (ns)</text>",
        0.5 * (py0 + py1),
        0.5 * (py0 + py1)
    );

    let xc = axes.x(nu_in);
    let _ = writeln!(
        s,
        "<line x1=\"{xc:.2}\" y1=\"{py0:.2}\" x2=\"{xc:.2}\" y2=\"{py1:.2}\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>"
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"gray\">cutoff {nu_in:.3} GHz</text>",
        xc + 4.0,
        py1 + 14.0
    );

    let mut clipped = false;
    for (model, pts) in &series {
        let (color, dash) = style(*model);
        let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for &(x, y) in pts {
            match y {
                Some(v) if v >= axes.y0 && v <= axes.y1 => runs.last_mut().expect("non-empty").push((x, v)),
                _ => {
                    if *model == ModelTag::ButtikerLandauer {
                        clipped = true;
                    }
                    runs.push(Vec::new());
                }
            }
        }
        for run in runs.iter().filter(|r| !r.is_empty()) {
            let points: Vec<String> = run.iter().map(|&(x, y)| format!("{:.2},{:.2}", axes.x(x), axes.y(y))).collect();
            let _ = writeln!(
                s,
                "<polyline clip-path=\"url(#plot)\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash} points=\"{}\"/>",
                points.join(" ")
            );
        }
    }

    for (i, (_, pts)) in markers.iter().enumerate() {
        for &(x, y) in pts {
            let (cx, cy) = (axes.x(x), axes.y(y));
            let _ = match i % 3 {
                0 => writeln!(s, "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"3.5\" fill=\"black\"/>"),
                1 => writeln!(
                    s,
                    "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"7\" height=\"7\" fill=\"none\" stroke=\"black\"/>",
                    cx - 3.5,
                    cy - 3.5
                ),
                _ => writeln!(
                    s,
                    "<polygon points=\"{cx:.2},{:.2} {:.2},{:.2} {:.2},{:.2}\" fill=\"none\" stroke=\"black\"/>",
                    cy - 4.0,
                    cx - 4.0,
                    cy + 3.0,
                    cx + 4.0,
                    cy + 3.0
                ),
            };
        }
    }

    let mut ly = py1 + 16.0;
    let lx = px0 + 12.0;
    for (model, _) in &series {
        let (color, dash) = style(*model);
        let _ = writeln!(
            s,
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"1.5\"{dash}/>",
            lx + 30.0
        );
        let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>", lx + 36.0, ly + 4.0, model.label());
        ly += 16.0;
    }
    for (i, (run, _)) in markers.iter().enumerate() {
        let glyph = ["&#9679;", "&#9633;", "&#9651;"][i % 3];
        let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\">{glyph} {}</text>", lx + 10.0, ly + 4.0, escape(run));
        ly += 16.0;
    }
    let has_bl = series.iter().any(|(m, _)| *m == ModelTag::ButtikerLandauer);
    if has_bl && nu_in >= x0 && nu_in <= x1 {
        let note = if clipped {
            format!("BL diverges at the cutoff; clipped above {:.2} ns", axes.y1)
        } else {
            "BL diverges at the cutoff".to_string()
        };
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"#2ca02c\">{note}</text>",
            xc + 4.0,
            py1 + 30.0
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
