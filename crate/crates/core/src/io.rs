//! Text formats: function files, construction specs, spectrum dumps and
//! classification reports.
//!
//! Structured documents are JSON. The emitters write a fixed layout so a
//! parse/emit cycle reproduces the input byte for byte.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::classify::{
    component_bent_criterion, is_gbent_spectrum, regularity_of, spectral_form_of,
    weak_regularity_criterion, Regularity, RowDecomp, SpectralForm,
};
use crate::construct::MaioranaSpec;
use crate::error::{GbentError, Result};
use crate::gbfunc::{index_point, ComponentTuple, GBFunction, PAryFunction};
use crate::scalar::Coeff;
use crate::transform::{wht_naive, Spectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Delimited,
}

/// Contents of a function file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionFile {
    Table(GBFunction),
    Components(ComponentTuple),
}

impl FunctionFile {
    pub fn function(&self) -> GBFunction {
        match self {
            FunctionFile::Table(f) => f.clone(),
            FunctionFile::Components(t) => t.compose(),
        }
    }

    /// The digit tuple, when one is given or `q` is a power of `p`.
    pub fn tuple(&self) -> Option<ComponentTuple> {
        match self {
            FunctionFile::Table(f) => f.digits().ok(),
            FunctionFile::Components(t) => Some(t.clone()),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunction {
    p: u64,
    n: u32,
    q: u64,
    table: Option<Vec<u64>>,
    components: Option<Vec<Vec<u64>>>,
}

fn json_error(what: &str, e: serde_json::Error) -> GbentError {
    GbentError::Parse(format!(
        "{what}: line {}, column {}: {e}",
        e.line(),
        e.column()
    ))
}

fn field_error(field: &str, e: GbentError) -> GbentError {
    GbentError::Parse(format!("field `{field}`: {e}"))
}

pub fn parse_function(text: &str) -> Result<FunctionFile> {
    let raw: RawFunction =
        serde_json::from_str(text).map_err(|e| json_error("function file", e))?;
    match (raw.table, raw.components) {
        (Some(table), None) => GBFunction::new(raw.p, raw.n, raw.q, table)
            .map(FunctionFile::Table)
            .map_err(|e| field_error("table", e)),
        (None, Some(comps)) => {
            let comps = comps
                .into_iter()
                .enumerate()
                .map(|(i, c)| {
                    PAryFunction::new(raw.p, raw.n, c)
                        .map_err(|e| field_error(&format!("components[{i}]"), e))
                })
                .collect::<Result<Vec<_>>>()?;
            ComponentTuple::new(raw.q, comps)
                .map(FunctionFile::Components)
                .map_err(|e| field_error("components", e))
        }
        _ => Err(GbentError::Parse(
            "function file needs exactly one of `table` or `components`".into(),
        )),
    }
}

fn int_array(xs: &[u64]) -> String {
    let items: Vec<String> = xs.iter().map(u64::to_string).collect();
    format!("[{}]", items.join(", "))
}

pub fn emit_function(file: &FunctionFile) -> String {
    let mut out = String::from("{\n");
    let (p, n, q) = match file {
        FunctionFile::Table(f) => (f.p(), f.n(), f.q()),
        FunctionFile::Components(t) => (t.p(), t.n(), t.q()),
    };
    writeln!(out, "  \"p\": {p},\n  \"n\": {n},\n  \"q\": {q},").unwrap();
    match file {
        FunctionFile::Table(f) => writeln!(out, "  \"table\": {}", int_array(f.table())).unwrap(),
        FunctionFile::Components(t) => {
            out.push_str("  \"components\": [\n");
            let rows: Vec<String> = t
                .components()
                .iter()
                .map(|c| format!("    {}", int_array(c.table())))
                .collect();
            out.push_str(&rows.join(",\n"));
            out.push_str("\n  ]\n");
        }
    }
    out.push_str("}\n");
    out
}

pub fn parse_spec(text: &str) -> Result<MaioranaSpec> {
    let spec: MaioranaSpec =
        serde_json::from_str(text).map_err(|e| json_error("construction spec", e))?;
    spec.validate()?;
    Ok(spec)
}

pub fn emit_spec(spec: &MaioranaSpec) -> String {
    let affines: Vec<String> = spec
        .affines
        .iter()
        .map(|a| format!("    {{\"c\": {}, \"w\": {}}}", a.c, int_array(&a.w)))
        .collect();
    let affines = if affines.is_empty() {
        "[]".to_string()
    } else {
        format!("[\n{}\n  ]", affines.join(",\n"))
    };
    format!(
        "{{\n  \"p\": {},\n  \"m\": {},\n  \"q\": {},\n  \"beta\": {},\n  \"affines\": {}\n}}\n",
        spec.p,
        spec.m,
        spec.q,
        int_array(&spec.beta),
        affines
    )
}

fn point_text(p: u64, n: u32, u: usize, sep: &str) -> String {
    let items: Vec<String> = index_point(p, n, u).iter().map(u64::to_string).collect();
    items.join(sep)
}

fn tuple_text(p: u64, n: u32, u: usize) -> String {
    format!("({})", point_text(p, n, u, ","))
}

/// `|S(u)|^2` as an integer when it is one, otherwise as a ring element.
fn norm_text<T: Coeff>(s: &crate::CycInt<T>) -> String {
    let nsq = s.norm_sq();
    match nsq.as_integer() {
        Some(v) => v.to_string(),
        None => nsq.to_string(),
    }
}

pub fn render_spectrum<T: Coeff>(s: &Spectrum<T>, format: Format) -> String {
    let (p, n) = (s.p(), s.n());
    let mut out = String::new();
    match format {
        Format::Text => {
            writeln!(
                out,
                "# p = {p}, n = {n}, q = {}, values in Z[zeta_{}]",
                s.q(),
                s.modulus()
            )
            .unwrap();
            for (u, v) in s.values().iter().enumerate() {
                writeln!(
                    out,
                    "u = {}  S = {}  |S|^2 = {}",
                    tuple_text(p, n, u),
                    v,
                    norm_text(v)
                )
                .unwrap();
            }
        }
        Format::Delimited => {
            out.push_str("u\tS\tnorm_sq\n");
            for (u, v) in s.values().iter().enumerate() {
                writeln!(out, "{}\t{}\t{}", point_text(p, n, u, ","), v, norm_text(v)).unwrap();
            }
        }
    }
    out
}

/// Everything `analyze` reports about one function.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    pub gbent: bool,
    pub regularity: Regularity,
    /// Points where `|S(u)|^2 != p^n`.
    pub failing: Vec<usize>,
    pub forms: Vec<Option<SpectralForm>>,
    /// Row decompositions of the component spectra, when a digit tuple with `k ≥ 2` exists.
    pub rows: Option<Vec<Option<RowDecomp>>>,
    /// Outcome of the global-prefactor criterion for `q` not a power of `p`.
    pub weakly_regular_by_components: Option<bool>,
}

pub fn analyze<T: Coeff>(file: &FunctionFile) -> Result<Analysis> {
    let f = file.function();
    let spectrum = wht_naive::<T>(&f);
    let report = is_gbent_spectrum(&spectrum);
    let regularity = regularity_of(&spectrum)?;
    let forms = spectral_form_of(&spectrum)?;
    let mut rows = None;
    let mut by_components = None;
    if let Some(t) = file.tuple().filter(|t| t.k() >= 2) {
        if t.is_prime_power() {
            rows = Some(component_bent_criterion::<T>(&t)?.rows);
        } else {
            let witness = weak_regularity_criterion::<T>(&t)?;
            by_components = Some(witness.is_some());
            rows = Some(crate::classify::row_decomps::<T>(&t)?);
        }
    }
    Ok(Analysis {
        p: f.p(),
        n: f.n(),
        q: f.q(),
        gbent: report.is_gbent(),
        regularity,
        failing: report.failing,
        forms,
        rows,
        weakly_regular_by_components: by_components,
    })
}

impl Analysis {
    pub fn verdict(&self) -> String {
        match &self.regularity {
            Regularity::Regular => "gbent, regular (weakly regular with alpha = +1)".into(),
            Regularity::WeaklyRegular(a) => format!("gbent, weakly regular (alpha = {a})"),
            Regularity::NotWeaklyRegular => "gbent, not weakly regular".into(),
            Regularity::Undetermined { .. } => "gbent, regularity undetermined".into(),
            Regularity::NotGbent { .. } => "not gbent".into(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        let (p, n) = (self.p, self.n);
        let mut out = String::new();
        let cell = |u: usize| {
            let form = self.forms[u].map_or(("-".to_string(), "-".to_string()), |f| {
                (f.alpha.to_string(), f.dual.to_string())
            });
            let row = match self.rows.as_ref().map(|r| &r[u]) {
                Some(Some(d)) => (d.alpha.to_string(), d.j.to_string(), d.r.to_string()),
                Some(None) => ("none".into(), "-".into(), "-".into()),
                None => ("-".into(), "-".into(), "-".into()),
            };
            (form, row)
        };
        match format {
            Format::Text => {
                writeln!(out, "p = {p}, n = {n}, q = {}", self.q).unwrap();
                writeln!(out, "verdict: {}", self.verdict()).unwrap();
                if let Some(ok) = self.weakly_regular_by_components {
                    let msg = if ok { "holds" } else { "does not hold" };
                    writeln!(out, "global-prefactor component criterion: {msg}").unwrap();
                }
                if !self.failing.is_empty() {
                    let pts: Vec<String> =
                        self.failing.iter().map(|&u| tuple_text(p, n, u)).collect();
                    writeln!(out, "points with |S(u)|^2 != {p}^{n}: {}", pts.join(" ")).unwrap();
                }
                if let Regularity::Undetermined { unmatched } = &self.regularity {
                    let pts: Vec<String> = unmatched.iter().map(|&u| tuple_text(p, n, u)).collect();
                    writeln!(
                        out,
                        "points without a unit-times-root form: {}",
                        pts.join(" ")
                    )
                    .unwrap();
                }
                if let Some(rows) = &self.rows {
                    let missing: Vec<String> = rows
                        .iter()
                        .enumerate()
                        .filter(|(_, r)| r.is_none())
                        .map(|(u, _)| tuple_text(p, n, u))
                        .collect();
                    if !missing.is_empty() {
                        writeln!(
                            out,
                            "points without a Hadamard-row decomposition: {}",
                            missing.join(" ")
                        )
                        .unwrap();
                    }
                }
                if self.gbent {
                    writeln!(out, "u  alpha  dual  row_alpha  j  r").unwrap();
                    for u in 0..self.forms.len() {
                        let ((a, d), (ra, j, r)) = cell(u);
                        writeln!(out, "{}  {a}  {d}  {ra}  {j}  {r}", tuple_text(p, n, u)).unwrap();
                    }
                }
            }
            Format::Delimited => {
                out.push_str("u\tgbent_ok\talpha\tdual\trow_alpha\tj\tr\n");
                for u in 0..self.forms.len() {
                    let ((a, d), (ra, j, r)) = cell(u);
                    let ok = !self.failing.contains(&u);
                    writeln!(
                        out,
                        "{}\t{ok}\t{a}\t{d}\t{ra}\t{j}\t{r}",
                        point_text(p, n, u, ",")
                    )
                    .unwrap();
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_maiorana, worked_example_q21};
    use num_bigint::BigInt;

    #[test]
    fn function_file_round_trip() {
        let t = build_maiorana(&worked_example_q21()).unwrap();
        for file in [
            FunctionFile::Components(t.clone()),
            FunctionFile::Table(t.compose()),
        ] {
            let text = emit_function(&file);
            let back = parse_function(&text).unwrap();
            assert_eq!(back, file);
            assert_eq!(emit_function(&back), text);
        }
    }

    #[test]
    fn spec_round_trip() {
        let spec = worked_example_q21();
        let text = emit_spec(&spec);
        assert_eq!(parse_spec(&text).unwrap(), spec);
        assert_eq!(emit_spec(&parse_spec(&text).unwrap()), text);
    }

    #[test]
    fn parse_errors_name_the_problem() {
        let e = parse_function("{\"p\": 3, \"n\": 1, \"q\": 9, \"table\": [0, 9, 0]}").unwrap_err();
        assert!(e.to_string().contains("table"), "{e}");
        let e = parse_function("{\"p\": 3,\n \"n\": 1, \"q\": 9, \"table\": [0, 1,]}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(parse_function("{\"p\": 3, \"n\": 1, \"q\": 9}").is_err());
    }

    #[test]
    fn spectrum_of_zero_function() {
        let f = GBFunction::new(3, 1, 9, vec![0; 3]).unwrap();
        let s = wht_naive::<BigInt>(&f);
        let text = render_spectrum(&s, Format::Delimited);
        assert_eq!(
            text,
            "u\tS\tnorm_sq\n0\t(mod 36) 3\t9\n1\t(mod 36) 0\t0\n2\t(mod 36) 0\t0\n"
        );
    }
}
