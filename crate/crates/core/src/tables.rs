//! Hadamard-row tables for the two worked examples and comparison against
//! reference listings.
//!
//! Reference rows are written `(u1,u2,u3,u4) j r` with `u` in coordinate
//! order and `r` counted the way the reference layout counts `H_9` rows.
//! Rows are listed by the label `Σ u_i 3^{i-1}`.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::arith;
use crate::classify::{row_decomps, RowDecomp, Unit};
use crate::construct::{build_maiorana, worked_example_q21, worked_example_q27, MaioranaSpec};
use crate::error::{GbentError, Result};
use crate::gbfunc::point_index;

pub const TABLE_Q27: &str = include_str!("../data/table1.txt");
pub const TABLE_Q21: &str = include_str!("../data/table2.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    /// Coordinates `(u_1, …, u_n)`.
    pub u: Vec<u64>,
    pub alpha: Unit,
    pub j: u64,
    pub v: Vec<u64>,
}

impl TableRow {
    /// Row index with `v_1` least significant.
    pub fn r(&self, p: u64) -> usize {
        arith::from_digits_le(&self.v, p)
    }
}

/// How computed row indices map onto reference row indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relabel {
    Identity,
    /// `r = Σ v_i p^{k-1-i}`: the first coordinate of `v` most significant.
    DigitReversal,
}

impl Relabel {
    pub const ALL: [Relabel; 2] = [Relabel::Identity, Relabel::DigitReversal];

    pub fn apply(self, row: &TableRow, p: u64) -> usize {
        match self {
            Relabel::Identity => row.r(p),
            Relabel::DigitReversal => row
                .v
                .iter()
                .fold(0usize, |acc, &d| acc * p as usize + d as usize),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Relabel::Identity => "identity",
            Relabel::DigitReversal => "digit reversal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub p: u64,
    pub n: u32,
    /// Sorted by label `Σ u_i p^{i-1}`.
    pub rows: Vec<TableRow>,
}

pub fn label(u: &[u64], p: u64) -> usize {
    arith::from_digits_le(u, p)
}

pub fn compute_table(spec: &MaioranaSpec) -> Result<Table> {
    let t = build_maiorana(spec)?;
    let (p, n) = (t.p(), t.n());
    let decomps = row_decomps::<BigInt>(&t)?;
    let mut rows = Vec::with_capacity(decomps.len());
    for (idx, d) in decomps.into_iter().enumerate() {
        let u = crate::gbfunc::index_point(p, n, idx);
        let RowDecomp { alpha, j, v, .. } = d.ok_or_else(|| {
            GbentError::Inconsistent(format!("no Hadamard-row decomposition at u = {u:?}"))
        })?;
        rows.push(TableRow { u, alpha, j, v });
    }
    rows.sort_by_key(|r| label(&r.u, p));
    Ok(Table { p, n, rows })
}

pub fn table_q27() -> Result<Table> {
    compute_table(&worked_example_q27())
}

pub fn table_q21() -> Result<Table> {
    compute_table(&worked_example_q21())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenRow {
    pub u: Vec<u64>,
    pub j: u64,
    pub r: usize,
}

pub fn parse_golden(text: &str) -> Result<Vec<GoldenRow>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || GbentError::Parse(format!("reference table line {}: `{line}`", lineno + 1));
        let close = line.find(')').ok_or_else(bad)?;
        let u = line.strip_prefix('(').ok_or_else(bad)?[..close - 1]
            .split(',')
            .map(|s| s.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let rest: Vec<&str> = line[close + 1..].split_whitespace().collect();
        let [j, r] = rest[..] else { return Err(bad()) };
        out.push(GoldenRow {
            u,
            j: j.parse().map_err(|_| bad())?,
            r: r.parse().map_err(|_| bad())?,
        });
    }
    Ok(out)
}

/// Disagreement between a computed row and a reference row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub u: Vec<u64>,
    pub expected: (Unit, u64, usize),
    pub actual: Option<(Unit, u64, usize)>,
}

/// Compare every reference row with the computed table under `relabel`.
/// Reference rows carry no prefactor, so `α = +1` is expected throughout.
pub fn compare(table: &Table, golden: &[GoldenRow], relabel: Relabel) -> Result<Vec<Mismatch>> {
    let p = table.p;
    let mut out = Vec::new();
    for g in golden {
        if g.u.len() != table.n as usize {
            return Err(GbentError::LengthMismatch {
                expected: table.n as usize,
                actual: g.u.len(),
                what: "reference point".into(),
            });
        }
        point_index(p, &g.u)?;
        let actual = table
            .rows
            .iter()
            .find(|r| r.u == g.u)
            .map(|r| (r.alpha, r.j, relabel.apply(r, p)));
        let expected = (Unit::One, g.j, g.r);
        if actual != Some(expected) {
            out.push(Mismatch {
                u: g.u.clone(),
                expected,
                actual,
            });
        }
    }
    Ok(out)
}

/// First relabeling under which every reference row agrees.
pub fn find_relabel(table: &Table, golden: &[GoldenRow]) -> Result<Option<Relabel>> {
    for relabel in Relabel::ALL {
        if compare(table, golden, relabel)?.is_empty() {
            return Ok(Some(relabel));
        }
    }
    Ok(None)
}

/// Rows of `table` that disagree with the closed-form prediction of `spec`.
pub fn closed_form_mismatches(table: &Table, spec: &MaioranaSpec) -> Vec<Vec<u64>> {
    table
        .rows
        .iter()
        .filter(|row| {
            let (j, v) = spec.predicted_row(&row.u);
            row.alpha != Unit::One || row.j != j || row.v != v
        })
        .map(|row| row.u.clone())
        .collect()
}

fn zeta_power(j: u64, p: u64) -> String {
    match j {
        0 => String::new(),
        1 => format!("zeta_{p} "),
        _ => format!("zeta_{p}^{j} "),
    }
}

fn prefactor(alpha: Unit) -> &'static str {
    match alpha {
        Unit::One => "",
        Unit::MinusOne => "-",
        Unit::I => "i ",
        Unit::MinusI => "-i ",
    }
}

/// One line per `u`: label, point, the vector of powers of `ζ_p`, and `α ζ_p^j H^{(r)}`.
pub fn render_table(table: &Table, relabel: Relabel, format: crate::io::Format) -> String {
    let p = table.p;
    let size = table
        .rows
        .first()
        .map_or(1, |r| arith::pow(p, r.v.len() as u32));
    let mut out = String::new();
    if format == crate::io::Format::Delimited {
        out.push_str("label\tu\talpha\tj\tr\n");
    }
    for row in &table.rows {
        let r = relabel.apply(row, p);
        let coords: Vec<String> = row.u.iter().map(u64::to_string).collect();
        let l = label(&row.u, p);
        match format {
            crate::io::Format::Text => {
                let hrow = crate::classify::hadamard_row(p, row.v.len() as u32, r);
                let entries: Vec<String> = hrow
                    .iter()
                    .map(|&e| match (row.j + e) % p {
                        0 => "1".to_string(),
                        1 => format!("z{p}"),
                        x => format!("z{p}^{x}"),
                    })
                    .collect();
                let vector = match row.alpha {
                    Unit::One => format!("({})", entries.join(", ")),
                    a => format!("{a} ({})", entries.join(", ")),
                };
                writeln!(
                    out,
                    "u_{l} = ({})  {vector}  {}{}H_{size}^({r})",
                    coords.join(", "),
                    prefactor(row.alpha),
                    zeta_power(row.j, p)
                )
                .unwrap();
            }
            crate::io::Format::Delimited => {
                writeln!(
                    out,
                    "{l}\t{}\t{}\t{}\t{r}",
                    coords.join(","),
                    row.alpha,
                    row.j
                )
                .unwrap();
            }
        }
    }
    out
}
