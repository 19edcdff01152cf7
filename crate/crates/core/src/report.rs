//! CSV and SVG output for sweep records.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sweep::{Mode, SweepRecord};

pub const CSV_HEADER: &str =
    "gamma,mode,fidelity,inner_iterations_total,outer_rounds,restarts_used,converged,wall_time_ms";

/// One line per record, header first. Floats use the shortest
/// representation that parses back to the same value.
pub fn render_csv(records: &[SweepRecord]) -> String {
    let mut sorted: Vec<&SweepRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        a.mode
            .as_str()
            .cmp(b.mode.as_str())
            .then(a.gamma.total_cmp(&b.gamma))
    });
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in sorted {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.gamma,
            r.mode,
            r.fidelity,
            r.inner_iterations_total,
            r.outer_rounds,
            r.restarts_used,
            r.converged,
            r.wall_time_ms
        )
        .expect("writing to a String");
    }
    out
}

pub fn write_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    fs::write(path, render_csv(records)).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn parse_csv(text: &str, path: &Path) -> Result<Vec<SweepRecord>> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_owned(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => return Err(err(1, "missing or unexpected header".into())),
    }
    let mut records = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(err(
                lineno,
                format!("expected 8 fields, got {}", fields.len()),
            ));
        }
        let num = |idx: usize| -> Result<usize> {
            fields[idx]
                .parse()
                .map_err(|e| err(lineno, format!("field {idx}: {e}")))
        };
        let float = |idx: usize| -> Result<f64> {
            fields[idx]
                .parse()
                .map_err(|e| err(lineno, format!("field {idx}: {e}")))
        };
        records.push(SweepRecord {
            gamma: float(0)?,
            mode: fields[1]
                .parse::<Mode>()
                .map_err(|e| err(lineno, e.to_string()))?,
            fidelity: float(2)?,
            inner_iterations_total: num(3)?,
            outer_rounds: num(4)?,
            restarts_used: num(5)?,
            converged: fields[6]
                .parse()
                .map_err(|e| err(lineno, format!("field 6: {e}")))?,
            wall_time_ms: fields[7]
                .parse()
                .map_err(|e| err(lineno, format!("field 7: {e}")))?,
        });
    }
    Ok(records)
}

pub fn read_csv(path: &Path) -> Result<Vec<SweepRecord>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_csv(&text, path)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 55.0;

fn style(mode: Mode) -> (&'static str, Option<&'static str>, &'static str) {
    match mode {
        Mode::NoCoding => ("no coding", Some("2,4"), "#555555"),
        Mode::LeungOptRec => ("Leung code, optimized recovery", Some("8,5"), "#1f5fa8"),
        Mode::Seesaw => ("optimized encoding and recovery", None, "#b02020"),
    }
}

/// Fidelity-versus-gamma plot: no coding dotted, Leung dashed, seesaw solid.
pub fn render_svg(records: &[SweepRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::param("records", 0, "cannot plot an empty sweep"));
    }
    let (mut gx0, mut gx1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut fy0, mut fy1) = (f64::INFINITY, f64::NEG_INFINITY);
    for r in records {
        gx0 = gx0.min(r.gamma);
        gx1 = gx1.max(r.gamma);
        fy0 = fy0.min(r.fidelity);
        fy1 = fy1.max(r.fidelity);
    }
    if gx1 - gx0 < 1e-12 {
        gx0 -= 0.05;
        gx1 += 0.05;
    }
    let pad = ((fy1 - fy0) * 0.05).max(1e-3);
    fy0 -= pad;
    fy1 += pad;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |g: f64| MARGIN_LEFT + (g - gx0) / (gx1 - gx0) * plot_w;
    let py = |f: f64| MARGIN_TOP + (fy1 - f) / (fy1 - fy0) * plot_h;

    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        w,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (MARGIN_TOP, HEIGHT - MARGIN_BOTTOM);
    let _ = writeln!(
        w,
        r#"<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="black"/>"#
    );
    let _ = writeln!(
        w,
        r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#
    );
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let g = gx0 + t * (gx1 - gx0);
        let x = px(g);
        let _ = writeln!(
            w,
            r#"<line x1="{x:.2}" y1="{y1}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            y1 + 5.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{x:.2}" y="{:.2}" font-size="12" text-anchor="middle">{g:.2}</text>"#,
            y1 + 20.0
        );
        let f = fy0 + t * (fy1 - fy0);
        let y = py(f);
        let _ = writeln!(
            w,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{f:.3}</text>"#,
            x0 - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">damping parameter</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        w,
        r#"<text x="16" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 16 {:.2})">channel fidelity</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    let mut modes: Vec<Mode> = records.iter().map(|r| r.mode).collect();
    modes.sort();
    modes.dedup();
    for (slot, &mode) in modes.iter().enumerate() {
        let mut pts: Vec<&SweepRecord> = records.iter().filter(|r| r.mode == mode).collect();
        pts.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
        let coords: Vec<String> = pts
            .iter()
            .map(|r| format!("{:.2},{:.2}", px(r.gamma), py(r.fidelity)))
            .collect();
        let (label, dash, color) = style(mode);
        let dash_attr = dash
            .map(|d| format!(r#" stroke-dasharray="{d}""#))
            .unwrap_or_default();
        let _ = writeln!(
            w,
            r#"<polyline class="{mode}" fill="none" stroke="{color}" stroke-width="2"{dash_attr} points="{}"/>"#,
            coords.join(" ")
        );
        let ly = y0 + 15.0 + 18.0 * slot as f64;
        let lx = x1 - 250.0;
        let _ = writeln!(
            w,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"{dash_attr}/>"#,
            lx + 30.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" font-size="12">{label}</text>"#,
            lx + 36.0,
            ly + 4.0
        );
    }
    let _ = writeln!(w, "</svg>");
    Ok(s)
}

pub fn write_svg_plot(records: &[SweepRecord], path: &Path) -> Result<()> {
    let svg = render_svg(records)?;
    fs::write(path, svg).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}
