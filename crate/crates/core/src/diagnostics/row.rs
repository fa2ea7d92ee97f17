use super::norms::{besov_norm, l2_norm, lp_norm, sobolev_norm, weighted_h1_norm, weighted_norm};
use crate::error::{Error, Result};
use crate::model::{ProfilePair, State};
use crate::spectral::{Complex64, Field};

/// Column names of the diagnostics table, in order.
pub const CSV_COLUMNS: [&str; 13] = [
    "t",
    "mass",
    "linf_u",
    "linf_n",
    "l6_u",
    "hs_u",
    "hs_g",
    "besov_n",
    "xf_l2",
    "x2f_l2",
    "xG_h1",
    "lam_x2G_l2",
    "cauchy_f",
];

/// One line of the diagnostics table.
///
/// `hs_u` is `‖u‖_{H^{s+1}} = ‖f‖_{H^{s+1}}`, `hs_g` is `‖g₊‖_{H^s}`,
/// `besov_n` is `‖n‖_{Ḃ⁰_{∞,1}}`, the `G` columns refer to
/// `G₊ = i(g₊(t) − g₊(0))`, and `cauchy_f` is `‖f(tᵢ) − f(tᵢ₋₁)‖_{L²}`
/// (absent on the first row).
#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub mass: f64,
    pub linf_u: f64,
    pub linf_n: f64,
    pub l6_u: f64,
    pub hs_u: f64,
    pub hs_g: f64,
    pub besov_n: f64,
    pub xf_l2: f64,
    pub x2f_l2: f64,
    pub x_g_h1: f64,
    pub lam_x2_g_l2: f64,
    pub cauchy_f: Option<f64>,
}

impl DiagnosticsRow {
    pub fn values(&self) -> [Option<f64>; 13] {
        [
            Some(self.t),
            Some(self.mass),
            Some(self.linf_u),
            Some(self.linf_n),
            Some(self.l6_u),
            Some(self.hs_u),
            Some(self.hs_g),
            Some(self.besov_n),
            Some(self.xf_l2),
            Some(self.x2f_l2),
            Some(self.x_g_h1),
            Some(self.lam_x2_g_l2),
            self.cauchy_f,
        ]
    }

    /// Value of the named column.
    pub fn column(&self, name: &str) -> Option<f64> {
        let i = CSV_COLUMNS.iter().position(|c| *c == name)?;
        self.values()[i]
    }

    pub fn to_csv_line(&self) -> String {
        self.values()
            .iter()
            .map(|v| v.map(format_value).unwrap_or_default())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn from_csv_line(line: &str) -> Result<Self> {
        let cells: Vec<&str> = line.trim_end().split(',').collect();
        if cells.len() != CSV_COLUMNS.len() {
            return Err(Error::Config(format!(
                "diagnostics row has {} cells, expected {}",
                cells.len(),
                CSV_COLUMNS.len()
            )));
        }
        let mut v = [None; 13];
        for (slot, (cell, name)) in v.iter_mut().zip(cells.iter().zip(CSV_COLUMNS)) {
            if !cell.is_empty() {
                *slot = Some(cell.parse::<f64>().map_err(|e| {
                    Error::Config(format!("column {name}: cannot parse `{cell}`: {e}"))
                })?);
            }
        }
        let req = |i: usize| v[i].ok_or_else(|| Error::Config(format!("column {} is empty", CSV_COLUMNS[i])));
        Ok(DiagnosticsRow {
            t: req(0)?,
            mass: req(1)?,
            linf_u: req(2)?,
            linf_n: req(3)?,
            l6_u: req(4)?,
            hs_u: req(5)?,
            hs_g: req(6)?,
            besov_n: req(7)?,
            xf_l2: req(8)?,
            x2f_l2: req(9)?,
            x_g_h1: req(10)?,
            lam_x2_g_l2: req(11)?,
            cauchy_f: v[12],
        })
    }
}

/// Seventeen significant digits in scientific notation.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv_header() -> String {
    CSV_COLUMNS.join(",")
}

pub fn rows_to_csv(rows: &[DiagnosticsRow]) -> String {
    let mut out = csv_header();
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}

pub fn parse_rows_csv(text: &str) -> Result<Vec<DiagnosticsRow>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == csv_header() => {}
        other => {
            return Err(Error::Config(format!(
                "unexpected diagnostics header `{}`",
                other.unwrap_or("")
            )))
        }
    }
    lines.map(DiagnosticsRow::from_csv_line).collect()
}

/// Diagnostics of one snapshot.
///
/// `g0_plus` is `g₊(0)` of the run and `prev_f` the profile `f` of the
/// previous snapshot, if any.
pub fn compute_row(
    state: &State,
    profiles: &ProfilePair,
    g0_plus: &Field,
    prev_f: Option<&Field>,
    sobolev: f64,
) -> Result<DiagnosticsRow> {
    let density = state.density();
    let f = profiles.f.to_physical();
    let big_g = (&profiles.g_plus - g0_plus).scale(Complex64::new(0.0, 1.0)).to_physical();
    let cauchy_f = match prev_f {
        Some(p) => Some(l2_norm(&(&f - &p.to_physical()))),
        None => None,
    };
    Ok(DiagnosticsRow {
        t: state.t,
        mass: l2_norm(&state.u).powi(2),
        linf_u: state.u.max_abs(),
        linf_n: density.max_abs(),
        l6_u: lp_norm(&state.u, 6.0)?,
        hs_u: sobolev_norm(&state.u, sobolev + 1.0),
        hs_g: sobolev_norm(&profiles.g_plus, sobolev),
        besov_n: besov_norm(&state.n, 0.0, f64::INFINITY, 1.0)?,
        xf_l2: weighted_norm(&f, 1, false)?,
        x2f_l2: weighted_norm(&f, 2, false)?,
        x_g_h1: weighted_h1_norm(&big_g),
        lam_x2_g_l2: weighted_norm(&big_g, 2, true)?,
        cauchy_f,
    })
}
