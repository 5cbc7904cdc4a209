//! CSV tables, SVG line plots and the JSON summary.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: &'static str,
    /// NaN marks a missing value (empty CSV field, gap in the plot).
    pub values: Vec<f64>,
}

impl Column {
    pub fn new(name: impl Into<String>, unit: &'static str, values: Vec<f64>) -> Self {
        Column {
            name: name.into(),
            unit,
            values,
        }
    }

    pub fn header(&self) -> String {
        format!("{} [{}]", self.name, self.unit)
    }
}

/// One data file and one plot panel. The first column is the abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct DataTable {
    pub stem: String,
    pub title: String,
    pub columns: Vec<Column>,
    /// Leading columns drawn in the plot.
    pub plotted: usize,
}

impl DataTable {
    pub fn new(stem: impl Into<String>, title: impl Into<String>, columns: Vec<Column>) -> Self {
        let plotted = columns.len();
        DataTable {
            stem: stem.into(),
            title: title.into(),
            columns,
            plotted,
        }
    }

    pub fn plot_first(mut self, n: usize) -> Self {
        self.plotted = n.clamp(2, self.columns.len());
        self
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }
}

/// Fixed 17-significant-digit scientific notation; round-trips exactly.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.16e}")
    }
}

pub fn to_csv(table: &DataTable) -> String {
    let mut out = String::new();
    let header: Vec<String> = table.columns.iter().map(Column::header).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for i in 0..table.rows() {
        let row: Vec<String> = table.columns.iter().map(|c| format_value(c.values[i])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parse a CSV produced by [`to_csv`] back into headers and columns.
pub fn parse_csv(text: &str) -> Option<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.split('\n');
    let headers: Vec<String> = lines.next()?.split(',').map(str::to_string).collect();
    let mut cols = vec![Vec::new(); headers.len()];
    for line in lines.filter(|l| !l.is_empty()) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != headers.len() {
            return None;
        }
        for (c, f) in cols.iter_mut().zip(fields) {
            c.push(if f.is_empty() { f64::NAN } else { f.parse().ok()? });
        }
    }
    Some((headers, cols))
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Line plot of every column against the first.
pub fn to_svg(table: &DataTable) -> String {
    let (width, height) = (720.0, 440.0);
    let (left, right, top, bottom) = (80.0, 170.0, 40.0, 50.0);
    let (pw, ph) = (width - left - right, height - top - bottom);
    let x = &table.columns[0].values;
    let series = &table.columns[1..table.plotted.max(2).min(table.columns.len())];

    let finite = |v: &&f64| v.is_finite();
    let span = |vals: &mut dyn Iterator<Item = f64>| {
        vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let (mut x0, mut x1) = span(&mut x.iter().filter(finite).copied());
    let (mut y0, mut y1) = span(&mut series.iter().flat_map(|c| c.values.iter().filter(finite).copied()));
    for (lo, hi) in [(&mut x0, &mut x1), (&mut y0, &mut y1)] {
        if !lo.is_finite() || !hi.is_finite() {
            (*lo, *hi) = (0.0, 1.0);
        } else if *hi - *lo <= f64::EPSILON * hi.abs().max(1.0) {
            let pad = 0.5 * hi.abs().max(1.0);
            (*lo, *hi) = (*lo - pad, *hi + pad);
        }
    }
    let px = |v: f64| left + (v - x0) / (x1 - x0) * pw;
    let py = |v: f64| top + (y1 - v) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        left + pw / 2.0,
        escape(&table.title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let (vx, vy) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (gx, gy) = (px(vx), py(vy));
        let _ = writeln!(
            s,
            r##"<line x1="{gx:.2}" y1="{top}" x2="{gx:.2}" y2="{}" stroke="#ddd"/><text x="{gx:.2}" y="{}" text-anchor="middle">{}</text>"##,
            top + ph,
            top + ph + 16.0,
            fmt_tick(vx)
        );
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{gy:.2}" x2="{}" y2="{gy:.2}" stroke="#ddd"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"##,
            left + pw,
            left - 6.0,
            gy + 4.0,
            fmt_tick(vy)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        left + pw / 2.0,
        height - 12.0,
        escape(&table.columns[0].header())
    );
    for (n, col) in series.iter().enumerate() {
        let color = PALETTE[n % PALETTE.len()];
        // NaN splits the curve into separate polylines
        let mut runs: Vec<Vec<String>> = vec![Vec::new()];
        for (&xv, &yv) in x.iter().zip(&col.values) {
            if xv.is_finite() && yv.is_finite() {
                runs.last_mut().unwrap().push(format!("{:.2},{:.2}", px(xv), py(yv)));
            } else if !runs.last().unwrap().is_empty() {
                runs.push(Vec::new());
            }
        }
        for run in runs.iter().filter(|r| r.len() > 1) {
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                run.join(" ")
            );
        }
        let ly = top + 14.0 + 18.0 * n as f64;
        let lx = left + pw + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&col.header())
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Write `contents` below `dir`, creating the directory if needed.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}
