//! CSV and SVG writers for run results.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use jsr_core::engine::IterationRecord;
use jsr_core::{PolarNorm, RunResult, TransformTables, Vec2};

use crate::error::CliError;

pub const HISTORY_HEADER: &str = "iteration,rho_minus,rho_plus,gamma";
pub const BALL_HEADER: &str = "phi,R,x,y";

// 16 significant digits, dot decimal separator regardless of locale
fn num(v: f64) -> String {
    format!("{v:.15e}")
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        })
}

fn finish(path: &Path, result: io::Result<()>) -> Result<(), CliError> {
    result.map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_history_csv<W: Write>(history: &[IterationRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{HISTORY_HEADER}")?;
    for rec in history {
        writeln!(
            out,
            "{},{},{},{}",
            rec.iteration,
            num(rec.rho_minus),
            num(rec.rho_plus),
            num(rec.gamma)
        )?;
    }
    out.flush()
}

pub fn emit_history_csv(result: &RunResult, path: &Path) -> Result<(), CliError> {
    let out = create(path)?;
    finish(path, write_history_csv(&result.history, out))
}

/// Reads back a file written by [`emit_history_csv`].
pub fn read_history_csv(path: &Path) -> Result<Vec<IterationRecord>, CliError> {
    let file = File::open(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })?;
    let bad = |line: usize, message: &str| CliError::Syntax {
        path: path.display().to_string(),
        line,
        column: 1,
        message: message.to_owned(),
    };
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| CliError::Read {
            path: path.display().to_string(),
            source,
        })?;
        if i == 0 {
            if line != HISTORY_HEADER {
                return Err(bad(1, "unexpected header"));
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(bad(i + 1, "expected 4 fields"));
        }
        let float = |s: &str| s.parse::<f64>().map_err(|_| bad(i + 1, "invalid number"));
        records.push(IterationRecord {
            iteration: fields[0]
                .parse()
                .map_err(|_| bad(i + 1, "invalid iteration index"))?,
            rho_minus: float(fields[1])?,
            rho_plus: float(fields[2])?,
            gamma: float(fields[3])?,
        });
    }
    Ok(records)
}

pub fn write_ball_csv<W: Write>(norm: &PolarNorm, mut out: W) -> io::Result<()> {
    writeln!(out, "{BALL_HEADER}")?;
    for (k, (p, r)) in norm.unit_ball().iter().zip(norm.values()).enumerate() {
        writeln!(
            out,
            "{},{},{},{}",
            num(norm.angle(k)),
            num(*r),
            num(p[0]),
            num(p[1])
        )?;
    }
    out.flush()
}

pub fn emit_ball_csv(norm: &PolarNorm, path: &Path) -> Result<(), CliError> {
    let out = create(path)?;
    finish(path, write_ball_csv(norm, out))
}

/// Locus `‖A_i x‖ = rho` for each matrix, sampled along the grid directions.
pub fn image_curves(norm: &PolarNorm, tables: &TransformTables, rho: f64) -> Vec<Vec<Vec2>> {
    (0..tables.matrix_count())
        .map(|i| {
            (0..tables.node_count())
                .filter_map(|k| {
                    let g = tables.image_norm(i, k, norm);
                    (g > 0.0).then(|| {
                        let (s, c) = norm.angle(k).sin_cos();
                        [c * rho / g, s * rho / g]
                    })
                })
                .collect()
        })
        .collect()
}

const PALETTE: [&str; 6] = [
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

/// Standalone SVG of the unit ball, optionally with the image loci.
pub fn render_ball_svg(
    norm: &PolarNorm,
    tables: &TransformTables,
    rho: f64,
    show_images: bool,
) -> String {
    let ball = norm.unit_ball();
    let images = if show_images {
        image_curves(norm, tables, rho)
    } else {
        Vec::new()
    };
    let extent = ball
        .iter()
        .chain(images.iter().flatten())
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(0.0, f64::max);
    let half = 1.1 * if extent > 0.0 { extent } else { 1.0 };
    let stroke = half / 250.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="600" height="600">"#,
        -half,
        -half,
        2.0 * half,
        2.0 * half
    );
    let _ = writeln!(
        svg,
        r#"  <rect x="{}" y="{}" width="{}" height="{}" fill="white"/>"#,
        -half,
        -half,
        2.0 * half,
        2.0 * half
    );
    let _ = writeln!(
        svg,
        r##"  <g stroke="#888888" stroke-width="{}"><line x1="{}" y1="0" x2="{}" y2="0"/><line x1="0" y1="{}" x2="0" y2="{}"/></g>"##,
        stroke / 2.0,
        -half,
        half,
        -half,
        half
    );
    let mut polyline = |points: &[Vec2], color: &str, width: f64, label: &str| {
        let mut coords = String::new();
        // y axis points up; close the curve by repeating the first vertex
        for p in points.iter().chain(points.first()) {
            let _ = write!(coords, "{:.6},{:.6} ", p[0], -p[1]);
        }
        let _ = writeln!(
            svg,
            r#"  <polyline class="{label}" fill="none" stroke="{color}" stroke-width="{width}" points="{}"/>"#,
            coords.trim_end()
        );
    };
    polyline(&ball, "#000000", 2.0 * stroke, "unit-ball");
    for (i, curve) in images.iter().enumerate() {
        polyline(
            curve,
            PALETTE[i % PALETTE.len()],
            stroke,
            &format!("image-{}", i + 1),
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn emit_ball_svg(
    norm: &PolarNorm,
    tables: &TransformTables,
    rho: f64,
    path: &Path,
    show_images: bool,
) -> Result<(), CliError> {
    std::fs::write(path, render_ball_svg(norm, tables, rho, show_images)).map_err(|source| {
        CliError::Write {
            path: path.display().to_string(),
            source,
        }
    })
}
