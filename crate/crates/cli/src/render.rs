use std::fmt::Write as _;

use bestchoice::count::{WinCell, WinRow, TABLE_WIDTH};
use bestchoice::WinTable;
use clap::ValueEnum;
use num_bigint::BigUint;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

/// Which quantity a table shows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum View {
    Counts,
    Percent,
}

pub fn render_table(t: &WinTable, view: View, fmt: Format) -> String {
    match fmt {
        Format::Csv => csv(t, view),
        Format::Json => json(t, view),
        Format::Pretty => pretty(t, view),
    }
}

// Column slots for k - N = -11 ..= -1; None where k is outside the window.
fn slots(row: &WinRow) -> impl Iterator<Item = Option<&WinCell>> {
    (1..=TABLE_WIDTH)
        .rev()
        .map(move |off| row.n.checked_sub(off).and_then(|k| row.cell(k)))
}

fn header(sep: &str, label: &str, prefix: &str) -> String {
    let mut h = label.to_string();
    for off in (1..=TABLE_WIDTH).rev() {
        let _ = write!(h, "{sep}{prefix}-{off}");
    }
    h
}

fn csv(t: &WinTable, view: View) -> String {
    let mut out = header(",", "N", "k_offset_");
    out.push('\n');
    for row in &t.rows {
        let _ = write!(out, "{}", row.n);
        for cell in slots(row) {
            out.push(',');
            if let Some(c) = cell {
                match view {
                    View::Counts => {
                        if let Some(v) = &c.count {
                            let _ = write!(out, "{v}");
                        }
                    }
                    View::Percent => {
                        let _ = write!(out, "{}", c.percent());
                    }
                }
            }
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct TableDoc {
    pattern: String,
    view: View,
    rows: Vec<RowDoc>,
}

#[derive(Serialize)]
struct RowDoc {
    #[serde(rename = "N")]
    n: usize,
    total: Option<String>,
    argmax: Vec<usize>,
    cells: Vec<CellDoc>,
}

#[derive(Serialize)]
struct CellDoc {
    k: usize,
    k_offset: i64,
    count: Option<String>,
    /// `count/total`, unreduced, when exact.
    exact: Option<String>,
    percent: f64,
}

fn json(t: &WinTable, view: View) -> String {
    let doc = TableDoc {
        pattern: t.pattern.to_string(),
        view,
        rows: t
            .rows
            .iter()
            .map(|row| RowDoc {
                n: row.n,
                total: row.total.as_ref().map(ToString::to_string),
                argmax: row.argmax(),
                cells: row
                    .cells
                    .iter()
                    .map(|c| CellDoc {
                        k: c.k,
                        k_offset: c.k as i64 - row.n as i64,
                        count: c.count.as_ref().map(ToString::to_string),
                        exact: c
                            .count
                            .as_ref()
                            .zip(row.total.as_ref())
                            .map(|(a, b)| format!("{a}/{b}")),
                        percent: c.percent(),
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

fn pretty(t: &WinTable, view: View) -> String {
    let rendered: Vec<(usize, Vec<String>)> = t
        .rows
        .iter()
        .map(|row| {
            let best = row.argmax();
            let cells = slots(row)
                .map(|cell| match cell {
                    None => String::new(),
                    Some(c) => {
                        let mut s = match view {
                            View::Counts => c.count.as_ref().map_or_else(|| "?".into(), ToString::to_string),
                            View::Percent => truncated_percent(c, row.total.as_ref()),
                        };
                        if best.contains(&c.k) {
                            s.push('*');
                        }
                        s
                    }
                })
                .collect();
            (row.n, cells)
        })
        .collect();
    let width = rendered
        .iter()
        .flat_map(|(_, cells)| cells.iter().map(String::len))
        .max()
        .unwrap_or(0)
        .max(3)
        + 2;
    let n_width = rendered
        .iter()
        .map(|(n, _)| n.to_string().len())
        .max()
        .unwrap_or(1)
        .max(4);
    let mut out = format!("{:<n_width$}", "N\\k");
    for off in (1..=TABLE_WIDTH).rev() {
        let _ = write!(out, "{:>width$}", format!("-{off}"));
    }
    out.push('\n');
    for (n, cells) in rendered {
        let mut line = format!("{n:<n_width$}");
        for c in cells {
            let _ = write!(line, "{c:>width$}");
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Percentage truncated (not rounded) to three significant figures, or to
/// two decimals below 1%. Uses integer arithmetic when the exact count is
/// known.
pub fn truncated_percent(c: &WinCell, total: Option<&BigUint>) -> String {
    match (&c.count, total) {
        (Some(num), Some(den)) => {
            let whole = num * 100u32 / den;
            let decimals = decimals_for(whole.to_string().len(), whole == BigUint::ZERO);
            let scaled = num * 100u32 * BigUint::from(10u32).pow(decimals) / den;
            with_point(&scaled.to_string(), decimals as usize)
        }
        _ => truncate_float(c.percent()),
    }
}

fn decimals_for(int_digits: usize, below_one: bool) -> u32 {
    if below_one {
        2
    } else {
        3u32.saturating_sub(int_digits as u32)
    }
}

pub fn truncate_float(pct: f64) -> String {
    let whole = pct.trunc();
    let decimals = decimals_for(format!("{whole:.0}").len(), whole == 0.0);
    let scaled = (pct * 10f64.powi(decimals as i32)).floor() as u64;
    with_point(&scaled.to_string(), decimals as usize)
}

fn with_point(digits: &str, decimals: usize) -> String {
    if decimals == 0 {
        return digits.to_string();
    }
    let padded = format!("{digits:0>width$}", width = decimals + 1);
    let (a, b) = padded.split_at(padded.len() - decimals);
    format!("{a}.{b}")
}
