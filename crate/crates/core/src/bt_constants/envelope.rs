use serde::Serialize;

use super::curves::{list_curves, Assumptions, CurveId, CurveInstance, CurveParams};
use crate::error::{out_of_range, Result};
use crate::exponent_pairs::{enumerate_pairs, ExponentPair, ProcessWord};
use crate::numfmt;
use crate::rational::{self, int, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeEntry {
    pub curve: String,
    #[serde(with = "rational")]
    pub value: Rational,
    /// Witness word for curves bound by exponent-pair search.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelope {
    #[serde(with = "rational")]
    pub varpi: Rational,
    pub admissible: Vec<EnvelopeEntry>,
    /// Every curve attaining the minimum.
    pub best: Vec<EnvelopeEntry>,
}

impl Envelope {
    pub fn best_value(&self) -> Option<&Rational> {
        self.best.first().map(|e| &e.value)
    }
}

/// Pairs searched for the exponent-pair family. Enumerate once and reuse
/// across a grid.
#[derive(Debug, Clone)]
pub struct PairPool {
    depth: usize,
    pairs: Vec<(ProcessWord, ExponentPair)>,
}

impl PairPool {
    pub fn new(depth: usize) -> Self {
        let pairs = enumerate_pairs(depth)
            .into_iter()
            .filter(|(_, p)| p.in_kappa_lambda_band() && p.varpi_window().is_some())
            .collect();
        Self { depth, pairs }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Smallest `4/g_ϖ` over pairs whose window holds `ϖ`; ties go to the
    /// shortlex-first word.
    pub fn best_at(&self, varpi: &Rational) -> Option<(ProcessWord, ExponentPair, Rational)> {
        let mut best: Option<(ProcessWord, ExponentPair, Rational)> = None;
        for (word, pair) in &self.pairs {
            let Some(value) =
                super::curves::eval_curve(CurveId::SmoothExponentPair, varpi, &CurveParams::pair(pair.clone()))
                    .ok()
                    .flatten()
            else {
                continue;
            };
            if best.as_ref().is_none_or(|(_, _, b)| value < *b) {
                best = Some((word.clone(), pair.clone(), value));
            }
        }
        best
    }
}

fn check_varpi(varpi: &Rational) -> Result<()> {
    if !rational::is_positive(varpi) || *varpi >= int(1) {
        return Err(out_of_range("varpi", rational::to_string(varpi), "(0, 1)"));
    }
    Ok(())
}

/// Every admissible curve value at `ϖ` and the minimizers.
pub fn envelope(varpi: &Rational, assumptions: &Assumptions, pair_depth: usize) -> Result<Envelope> {
    envelope_with(varpi, assumptions, &PairPool::new(pair_depth))
}

pub fn envelope_with(varpi: &Rational, assumptions: &Assumptions, pool: &PairPool) -> Result<Envelope> {
    check_varpi(varpi)?;
    let mut admissible = Vec::new();
    for inst in list_curves(assumptions) {
        if inst.id.is_symbolic() {
            continue;
        }
        if inst.id == CurveId::SmoothExponentPair {
            if let Some((word, pair, value)) = pool.best_at(varpi) {
                let bound = CurveInstance::new(inst.id, CurveParams::pair(pair));
                admissible.push(EnvelopeEntry {
                    curve: bound.label(),
                    value,
                    word: Some(word.compact()),
                });
            }
            continue;
        }
        if let Some(value) = inst.eval(varpi)? {
            admissible.push(EnvelopeEntry {
                curve: inst.label(),
                value,
                word: None,
            });
        }
    }
    let best = match admissible.iter().map(|e| &e.value).min() {
        Some(min) => admissible.iter().filter(|e| e.value == *min).cloned().collect(),
        None => Vec::new(),
    };
    Ok(Envelope {
        varpi: varpi.clone(),
        admissible,
        best,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    #[serde(with = "rational")]
    pub varpi: Rational,
    #[serde(with = "rational")]
    pub ours: Rational,
    #[serde(with = "rational")]
    pub iwaniec: Rational,
    /// `100·(iwaniec − ours)/iwaniec`, exact.
    #[serde(with = "rational")]
    pub improvement: Rational,
    pub ours_4dp: String,
    pub iwaniec_4dp: String,
    /// Truncated to one decimal place.
    pub improvement_1dp: String,
}

pub const TABLE1_VARPI: [(i64, i64); 6] = [(16, 31), (12, 23), (32, 61), (8, 15), (7, 13), (6, 11)];

/// Prime-modulus curve against Iwaniec's `8/(6−7ϖ)` at the left end of
/// each prime-modulus piece.
pub fn table1() -> Vec<Table1Row> {
    TABLE1_VARPI
        .iter()
        .map(|&(n, d)| {
            let varpi = ratio(n, d);
            let none = CurveParams::none();
            let ours = super::eval_curve(CurveId::PrimeModulusLarge, &varpi, &none)
                .ok()
                .flatten()
                .expect("table point lies in a prime-modulus piece");
            let iwaniec = super::eval_curve(CurveId::IwaniecKloosterman, &varpi, &none)
                .ok()
                .flatten()
                .expect("table point lies in Iwaniec's range");
            let improvement = (&iwaniec - &ours) / &iwaniec * int(100);
            Table1Row {
                ours_4dp: rational::to_fixed(&rational::round_decimal(&ours, 4), 4),
                iwaniec_4dp: rational::to_fixed(&rational::round_decimal(&iwaniec, 4), 4),
                improvement_1dp: rational::to_fixed(&rational::truncate_decimal(&improvement, 1), 1),
                varpi,
                ours,
                iwaniec,
                improvement,
            }
        })
        .collect()
}

pub fn table1_csv(rows: &[Table1Row]) -> String {
    let mut out = String::from("varpi,ours,iwaniec,improvement_pct\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            rational::to_string(&r.varpi),
            r.ours_4dp,
            r.iwaniec_4dp,
            r.improvement_1dp
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureRow {
    #[serde(with = "rational")]
    pub varpi: Rational,
    pub curve: String,
    #[serde(with = "rational")]
    pub value: Rational,
}

pub const ENVELOPE_LABEL: &str = "ENVELOPE";

/// Curve values on the grid `min, min+step, …` strictly below `max`, with
/// one envelope row per grid point that has any admissible curve.
pub fn figure_data(
    varpi_min: &Rational,
    varpi_max: &Rational,
    step: &Rational,
    assumptions: &Assumptions,
    pair_depth: usize,
) -> Result<Vec<FigureRow>> {
    check_varpi(varpi_min)?;
    check_varpi(varpi_max)?;
    if varpi_min >= varpi_max {
        return Err(out_of_range(
            "varpi_max",
            rational::to_string(varpi_max),
            format!("> {}", rational::to_string(varpi_min)),
        ));
    }
    if !rational::is_positive(step) {
        return Err(out_of_range("step", rational::to_string(step), "> 0"));
    }
    if (varpi_max - varpi_min) / step > int(1_000_000) {
        return Err(out_of_range("step", rational::to_string(step), "at most 10^6 grid points"));
    }
    let pool = PairPool::new(pair_depth);
    let mut rows = Vec::new();
    let mut varpi = varpi_min.clone();
    while varpi < *varpi_max {
        let env = envelope_with(&varpi, assumptions, &pool)?;
        for e in &env.admissible {
            rows.push(FigureRow {
                varpi: varpi.clone(),
                curve: e.curve.clone(),
                value: e.value.clone(),
            });
        }
        if let Some(v) = env.best_value() {
            rows.push(FigureRow {
                varpi: varpi.clone(),
                curve: ENVELOPE_LABEL.to_string(),
                value: v.clone(),
            });
        }
        varpi += step;
    }
    Ok(rows)
}

/// `varpi,curve_id,value` with 10 significant digits.
pub fn figure_csv(rows: &[FigureRow]) -> String {
    let mut out = String::from("varpi,curve_id,value\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            numfmt::sig(rational::to_f64(&r.varpi), 10),
            r.curve,
            numfmt::sig(rational::to_f64(&r.value), 10)
        ));
    }
    out
}
