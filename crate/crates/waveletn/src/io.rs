//! File formats: JSON schemas for filters, banks, coefficients, cocycles,
//! partitions and reports, CSV for signals, grids and spectra, plus a
//! canonical JSON renderer (sorted keys, fixed `%.12e` floats) so equal
//! inputs always produce byte-equal outputs.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::cascade::{ScalingGrid, SpectralSamples};
use crate::cuntz::{WoldKind, WoldReport};
use crate::diagonal::{Arc, ArcPartition, CylinderCocycle};
use crate::error::{Error, Result};
use crate::filterbank::FilterBank;
use crate::laurent::LaurentPoly;
use crate::multiscale::ScaleDecomposition;
use crate::pyramid::WaveletCoeffs;
use crate::transfer::{MeasureD, Orthonormality, RootOfUnity};

type C64 = Complex<f64>;
type Poly = LaurentPoly<f64>;

/// `[k, re, im]` triples of one Laurent polynomial.
pub type CoeffList = Vec<(i64, f64, f64)>;

pub fn poly_to_coeffs(p: &Poly) -> CoeffList {
    p.terms().map(|(k, c)| (k, c.re, c.im)).collect()
}

/// Rejects duplicate indices: files are coefficient maps, not sums.
pub fn coeffs_to_poly(coeffs: &[(i64, f64, f64)]) -> Result<Poly> {
    let mut seen = std::collections::BTreeSet::new();
    for &(k, _, _) in coeffs {
        if !seen.insert(k) {
            return Err(Error::InvalidScale(format!(
                "duplicate coefficient index {k}"
            )));
        }
    }
    Ok(Poly::from_terms(
        coeffs.iter().map(|&(k, re, im)| (k, C64::new(re, im))),
    ))
}

/// One filter: `{"coeffs": [[k, re, im], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FilterEntry {
    pub coeffs: CoeffList,
}

/// Bank file: `{"N": n, "filters": [{"coeffs": ...}, ...]}`, low-pass
/// first.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BankFile {
    #[serde(rename = "N")]
    pub n: u32,
    pub filters: Vec<FilterEntry>,
}

impl BankFile {
    pub fn from_bank(bank: &FilterBank<f64>) -> Self {
        Self {
            n: bank.scale(),
            filters: bank
                .filters()
                .iter()
                .map(|m| FilterEntry {
                    coeffs: poly_to_coeffs(m),
                })
                .collect(),
        }
    }

    pub fn to_bank(&self) -> Result<FilterBank<f64>> {
        let filters = self
            .filters
            .iter()
            .map(|f| coeffs_to_poly(&f.coeffs))
            .collect::<Result<Vec<_>>>()?;
        FilterBank::new(self.n, filters)
    }
}

/// Single-filter file: `{"N": n, "coeffs": [[k, re, im], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FilterFile {
    #[serde(rename = "N")]
    pub n: u32,
    pub coeffs: CoeffList,
}

impl FilterFile {
    pub fn new(n: u32, m: &Poly) -> Self {
        Self {
            n,
            coeffs: poly_to_coeffs(m),
        }
    }

    pub fn to_poly(&self) -> Result<Poly> {
        coeffs_to_poly(&self.coeffs)
    }
}

/// Either kind of filter input, sniffed from the JSON shape.
pub enum FilterOrBank {
    Filter(FilterFile),
    Bank(BankFile),
}

pub fn parse_filter_or_bank(text: &str) -> Result<FilterOrBank> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::InvalidScale(format!("bad JSON: {e}")))?;
    if value.get("filters").is_some() {
        let bank: BankFile = serde_json::from_value(value)
            .map_err(|e| Error::InvalidScale(format!("bad bank file: {e}")))?;
        Ok(FilterOrBank::Bank(bank))
    } else if value.get("coeffs").is_some() {
        let f: FilterFile = serde_json::from_value(value)
            .map_err(|e| Error::InvalidScale(format!("bad filter file: {e}")))?;
        Ok(FilterOrBank::Filter(f))
    } else {
        Err(Error::InvalidScale(
            "expected a \"filters\" or a \"coeffs\" key".into(),
        ))
    }
}

/// Pyramid coefficient dump.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoeffsFile {
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "J")]
    pub depth: usize,
    pub levels: Vec<LevelEntry>,
    pub residual: CoeffList,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: CoeffList,
}

impl CoeffsFile {
    pub fn from_coeffs(c: &WaveletCoeffs<f64>) -> Self {
        let mut levels = Vec::new();
        for j in 1..=c.depth() {
            for i in 1..c.scale() as usize {
                levels.push(LevelEntry {
                    i,
                    j,
                    coeffs: poly_to_coeffs(c.detail(i, j)),
                });
            }
        }
        Self {
            n: c.scale(),
            depth: c.depth(),
            levels,
            residual: poly_to_coeffs(c.residual()),
        }
    }

    pub fn to_coeffs(&self) -> Result<WaveletCoeffs<f64>> {
        let branches = self.n as usize - 1;
        let mut detail = vec![vec![Poly::zero(); branches]; self.depth];
        for e in &self.levels {
            if e.j == 0 || e.j > self.depth || e.i == 0 || e.i > branches {
                return Err(Error::IndexOutOfRange {
                    index: e.i.max(e.j),
                    n: self.n as usize,
                });
            }
            detail[e.j - 1][e.i - 1] = coeffs_to_poly(&e.coeffs)?;
        }
        WaveletCoeffs::new(self.n, detail, coeffs_to_poly(&self.residual)?)
    }
}

/// Cocycle file: `{"N": n, "p": order, "table": {"<digits>": [re, im]}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleFile {
    #[serde(rename = "N")]
    pub n: u32,
    pub p: usize,
    pub table: BTreeMap<String, (f64, f64)>,
}

impl CocycleFile {
    pub fn from_cocycle(u: &CylinderCocycle<f64>) -> Self {
        let n = u.scale() as usize;
        let mut table = BTreeMap::new();
        let len = u.table().len();
        for (idx, v) in u.table().iter().enumerate() {
            let mut word = String::new();
            let mut rem = idx;
            let mut digits = vec![0usize; u.order() + 1];
            for d in digits.iter_mut().rev() {
                *d = rem % n;
                rem /= n;
            }
            for d in digits {
                word.push(char::from_digit(d as u32, 10).expect("N <= 10 for digit words"));
            }
            table.insert(word, (v.re, v.im));
            debug_assert!(idx < len);
        }
        Self {
            n: u.scale(),
            p: u.order(),
            table,
        }
    }

    pub fn to_cocycle(&self) -> Result<CylinderCocycle<f64>> {
        if self.n > 10 {
            return Err(Error::InvalidCocycle(
                "digit-string tables support N <= 10".into(),
            ));
        }
        let len = (self.n as usize).pow(self.p as u32 + 1);
        let mut table = vec![C64::new(0.0, 0.0); len];
        let mut filled = vec![false; len];
        for (word, &(re, im)) in &self.table {
            if word.len() != self.p + 1 {
                return Err(Error::InvalidCocycle(format!(
                    "word {word:?} must have p+1 = {} digits",
                    self.p + 1
                )));
            }
            let mut idx = 0usize;
            for ch in word.chars() {
                let d = ch
                    .to_digit(10)
                    .filter(|&d| d < self.n)
                    .ok_or_else(|| Error::InvalidCocycle(format!("bad digit in {word:?}")))?;
                idx = idx * self.n as usize + d as usize;
            }
            if filled[idx] {
                return Err(Error::InvalidCocycle(format!("duplicate word {word:?}")));
            }
            filled[idx] = true;
            table[idx] = C64::new(re, im);
        }
        if filled.iter().any(|f| !f) {
            return Err(Error::InvalidCocycle(format!(
                "table incomplete: need all {len} words"
            )));
        }
        CylinderCocycle::new(self.n, self.p, table)
    }
}

/// Partition file with `2π`-fraction endpoints as `[num, den]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionFile {
    #[serde(rename = "N")]
    pub n: u32,
    pub arcs: Vec<ArcEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArcEntry {
    pub start: (i64, i64),
    pub end: (i64, i64),
    pub label: usize,
}

impl PartitionFile {
    pub fn to_partition(&self) -> Result<ArcPartition> {
        let arcs = self
            .arcs
            .iter()
            .map(|a| {
                if a.start.1 == 0 || a.end.1 == 0 {
                    return Err(Error::MalformedArc {
                        start: format!("{}/{}", a.start.0, a.start.1),
                        end: format!("{}/{}", a.end.0, a.end.1),
                    });
                }
                Ok(Arc {
                    start: Ratio::new(a.start.0, a.start.1),
                    end: Ratio::new(a.end.0, a.end.1),
                    label: a.label,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ArcPartition::new(self.n, arcs)
    }
}

/// Unitarity validation report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub max_residual: f64,
    pub pass: bool,
    pub residuals: Vec<Vec<f64>>,
    pub tol: f64,
}

/// Transfer spectrum report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub atoms: Vec<((u64, u64), f64)>,
    pub cycles: Vec<Vec<(u64, u64)>>,
    pub eigenvalues: Vec<(f64, f64)>,
    pub fit_residual: f64,
    pub fixed_basis: Vec<CoeffList>,
    pub fixed_dim: usize,
    pub moments: Vec<(i64, f64, f64)>,
    pub row_residual: f64,
    pub verdict: String,
    pub window: i64,
}

pub fn orthonormality_str(v: Orthonormality) -> &'static str {
    match v {
        Orthonormality::Orthonormal => "Orthonormal",
        Orthonormality::NotOrthonormal => "NotOrthonormal",
    }
}

pub fn cycles_to_pairs(cycles: &[Vec<RootOfUnity>]) -> Vec<Vec<(u64, u64)>> {
    cycles
        .iter()
        .map(|c| c.iter().map(|p| (p.num, p.den)).collect())
        .collect()
}

pub fn measure_to_parts(d: &MeasureD<f64>) -> (Vec<(i64, f64, f64)>, Vec<((u64, u64), f64)>, f64) {
    let moments = d.moments.iter().map(|(&k, m)| (k, m.re, m.im)).collect();
    let atoms = d
        .atoms
        .iter()
        .map(|&(p, w)| ((p.num, p.den), w))
        .collect();
    (moments, atoms, d.fit_residual)
}

/// Wold classification report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WoldFile {
    pub dim: usize,
    pub eigenpairs: Vec<WoldPairEntry>,
    pub kind: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WoldPairEntry {
    pub eigenvalue: (f64, f64),
    pub residual: f64,
    pub vector: CoeffList,
}

impl WoldFile {
    pub fn from_report(r: &WoldReport<f64>) -> Self {
        Self {
            dim: r.dim(),
            kind: match r.kind {
                WoldKind::Shift => "Shift".into(),
                WoldKind::UnitaryPart => "UnitaryPart".into(),
            },
            eigenpairs: r
                .eigenpairs
                .iter()
                .map(|p| WoldPairEntry {
                    eigenvalue: (p.eigenvalue.re, p.eigenvalue.im),
                    residual: p.residual,
                    vector: poly_to_coeffs(&p.vector),
                })
                .collect(),
        }
    }
}

/// Two-scale comparison report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompareScalesReport {
    pub commute_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionEntry {
    pub a: CoeffList,
    pub b: CoeffList,
    pub c: Vec<CoeffList>,
    pub consistency_residual: f64,
    pub parseval_defect: f64,
}

impl DecompositionEntry {
    pub fn from_decomposition(d: &ScaleDecomposition<f64>) -> Self {
        Self {
            a: poly_to_coeffs(&d.a),
            b: poly_to_coeffs(&d.b),
            c: d.c.iter().map(poly_to_coeffs).collect(),
            consistency_residual: d.consistency_residual,
            parseval_defect: d.parseval_defect,
        }
    }
}

/// Signal CSV: header `k,re,im`, one Laurent coefficient per row.
pub fn signal_to_csv(p: &Poly) -> String {
    let mut out = String::from("k,re,im\n");
    for (k, c) in p.terms() {
        out.push_str(&format!("{k},{},{}\n", fmt_float(c.re), fmt_float(c.im)));
    }
    out
}

pub fn signal_from_csv(text: &str) -> Result<Poly> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidScale("empty signal file".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols != ["k", "re", "im"] {
        return Err(Error::InvalidScale(format!(
            "signal CSV needs header \"k,re,im\", got {header:?}"
        )));
    }
    let mut terms = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (lineno, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::InvalidScale(format!(
                "line {}: expected 3 fields",
                lineno + 2
            )));
        }
        let k: i64 = fields[0]
            .parse()
            .map_err(|_| Error::InvalidScale(format!("line {}: bad index", lineno + 2)))?;
        let re: f64 = fields[1]
            .parse()
            .map_err(|_| Error::InvalidScale(format!("line {}: bad value", lineno + 2)))?;
        let im: f64 = fields[2]
            .parse()
            .map_err(|_| Error::InvalidScale(format!("line {}: bad value", lineno + 2)))?;
        if !seen.insert(k) {
            return Err(Error::InvalidScale(format!("duplicate index {k}")));
        }
        terms.push((k, C64::new(re, im)));
    }
    Ok(Poly::from_terms(terms))
}

/// Grid CSV: header `x,value_re,value_im`.
pub fn grid_to_csv(grid: &ScalingGrid<f64>) -> String {
    let mut out = String::from("x,value_re,value_im\n");
    for (i, s) in grid.samples().iter().enumerate() {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_float(grid.x(i)),
            fmt_float(s.re),
            fmt_float(s.im)
        ));
    }
    out
}

/// Spectra CSV: header `t,re,im`.
pub fn spectrum_to_csv(ss: &SpectralSamples<f64>) -> String {
    let mut out = String::from("t,re,im\n");
    for (t, v) in ss.t.iter().zip(&ss.values) {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_float(*t),
            fmt_float(v.re),
            fmt_float(v.im)
        ));
    }
    out
}

/// Fixed `%.12e` float formatting used across all outputs.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        // normalize the sign of zero so equal data prints equally
        return format!("{:.12e}", 0.0f64);
    }
    format!("{x:.12e}")
}

/// Render JSON with sorted keys and `%.12e` floats; byte-deterministic
/// for equal values.
pub fn canonical_json(value: &serde_json::Value) -> String {
    let mut out = String::new();
    write_canonical(value, &mut out);
    out
}

fn write_canonical(value: &serde_json::Value, out: &mut String) {
    use serde_json::Value::*;
    match value {
        Null => out.push_str("null"),
        Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&fmt_float(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        Object(map) => {
            let mut keys: Vec<&std::string::String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("key serializes"));
                out.push(':');
                write_canonical(&map[*k], out);
            }
            out.push('}');
        }
    }
}
