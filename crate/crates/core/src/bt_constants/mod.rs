//! Brun–Titchmarsh constants: the curve catalog, exact evaluation, envelopes
//! under hypothesis flags, and the comparison table and figure data.

mod curves;
mod envelope;

pub use curves::{
    eval_curve, kim_sarnak_theta, list_curves, Assumptions, CurveId, CurveInstance, CurveParams,
    Endpoint, Expr, Hypothesis, Piece,
};
pub use envelope::{
    envelope, envelope_with, figure_csv, figure_data, table1, table1_csv, Envelope, EnvelopeEntry,
    FigureRow, PairPool, Table1Row, ENVELOPE_LABEL, TABLE1_VARPI,
};

use serde::Serialize;

use crate::exponent_pairs::eval_word;
use crate::rational::{int, ratio};

#[derive(Debug, Clone, Serialize)]
pub struct PieceRecord {
    pub lower: Endpoint,
    pub upper: Endpoint,
    pub expression: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceRecord {
    pub label: String,
    pub hypotheses: Vec<Hypothesis>,
    pub pieces: Vec<PieceRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveRecord {
    pub id: &'static str,
    pub source: &'static str,
    pub formula: &'static str,
    pub parameters: &'static [&'static str],
    pub hypotheses: &'static [Hypothesis],
    pub symbolic: bool,
    /// Representative parameter bindings with exact pieces.
    pub instances: Vec<InstanceRecord>,
}

/// Parameter bindings shown in the catalog for each curve.
pub fn sample_params(id: CurveId) -> Vec<CurveParams> {
    match id {
        CurveId::BurgessLike => vec![
            CurveParams::theta(kim_sarnak_theta()),
            CurveParams::theta(int(0)),
        ],
        CurveId::SmoothExponentPair => vec![
            CurveParams::pair(eval_word(&"AABAAB".parse().expect("valid word"))),
            CurveParams::pair(eval_word(&"AB".parse().expect("valid word"))),
        ],
        CurveId::SmoothMoment | CurveId::GeneralMoment => vec![
            CurveParams::delta(int(0)),
            CurveParams::delta(ratio(1, 4)),
        ],
        _ => vec![CurveParams::none()],
    }
}

/// The full catalog with exact `p/q` endpoints.
pub fn catalog() -> Vec<CurveRecord> {
    CurveId::ALL
        .into_iter()
        .map(|id| CurveRecord {
            id: id.key(),
            source: id.source(),
            formula: id.formula(),
            parameters: id.parameters(),
            hypotheses: id.hypotheses(),
            symbolic: id.is_symbolic(),
            instances: sample_params(id)
                .into_iter()
                .map(|params| {
                    let inst = CurveInstance::new(id, params);
                    let pieces = inst
                        .pieces()
                        .expect("sample parameters are valid")
                        .into_iter()
                        .map(|p| PieceRecord {
                            lower: p.lower,
                            upper: p.upper,
                            expression: p.expr.render(),
                        })
                        .collect();
                    InstanceRecord {
                        label: inst.label(),
                        hypotheses: inst.hypotheses(),
                        pieces,
                    }
                })
                .collect(),
        })
        .collect()
}

pub fn catalog_json() -> String {
    serde_json::to_string_pretty(&catalog()).expect("catalog serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent_pairs::ExponentPair;
    use crate::rational::{self, Rational};

    fn eval(id: CurveId, v: Rational, p: &CurveParams) -> Option<Rational> {
        eval_curve(id, &v, p).unwrap()
    }

    #[test]
    fn first_table_row() {
        let v = eval(CurveId::PrimeModulusLarge, ratio(16, 31), &CurveParams::none()).unwrap();
        assert_eq!(v, ratio(248, 75));
    }

    #[test]
    fn theta_zero_collapses() {
        let v = rational::parse("0.46").unwrap();
        let a = eval(CurveId::BurgessLike, v.clone(), &CurveParams::theta(int(0))).unwrap();
        assert_eq!(a, int(16) / (int(8) - int(3) * v));
    }

    #[test]
    fn special_pair_matches_family() {
        let pair = ExponentPair::new(ratio(1, 20), ratio(33, 40), ratio(1, 2));
        let fam = CurveId::SmoothExponentPair.pieces(&CurveParams::pair(pair)).unwrap();
        let special = CurveId::SmoothSpecialPair.pieces(&CurveParams::none()).unwrap();
        assert_eq!(fam[0].lower, special[0].lower);
        assert_eq!(fam[0].upper, special[0].upper);
        for v in [ratio(9, 51), ratio(1, 2), ratio(9, 11)] {
            assert_eq!(fam[0].expr.eval(&v), special[0].expr.eval(&v));
        }
    }

    #[test]
    fn missing_and_bad_params() {
        assert!(eval_curve(CurveId::BurgessLike, &ratio(23, 50), &CurveParams::none()).is_err());
        let bad = CurveParams::delta(ratio(16, 45));
        assert!(eval_curve(CurveId::GeneralMoment, &ratio(1, 2), &bad).is_err());
    }

    #[test]
    fn outside_range_is_undefined() {
        assert_eq!(eval(CurveId::BurgessLike, ratio(9, 20), &CurveParams::theta(int(0))), None);
        assert_eq!(eval(CurveId::Maynard, ratio(1, 8), &CurveParams::none()), None);
    }

    #[test]
    fn listing_follows_assumptions() {
        let base: Vec<String> = list_curves(&Assumptions::unconditional())
            .iter()
            .map(|c| c.label())
            .collect();
        assert!(base.contains(&"burgess-like[theta=7/64]".to_string()));
        assert!(!base.iter().any(|l| l.starts_with("prime-modulus-large")));
        let prime = Assumptions::parse_list("prime").unwrap();
        let labels: Vec<String> = list_curves(&prime).iter().map(|c| c.label()).collect();
        assert!(labels.contains(&"burgess-like[theta=0]".to_string()));
        assert!(labels.contains(&"prime-modulus-large".to_string()));
        let rstar = Assumptions::parse_list("rstar").unwrap();
        assert!(list_curves(&rstar).iter().any(|c| c.id == CurveId::IwaniecRStar));
    }

    #[test]
    fn maynard_wins_small_varpi() {
        let env = envelope(&ratio(1, 10), &Assumptions::unconditional(), 4).unwrap();
        assert_eq!(env.best_value(), Some(&int(2)));
        assert!(env.best.iter().any(|e| e.curve == "maynard"));
    }

    #[test]
    fn table_rows() {
        let rows = table1();
        assert_eq!(rows[1].ours_4dp, "3.3455");
        assert_eq!(rows[1].iwaniec_4dp, "3.4074");
        assert_eq!(rows[1].improvement_1dp, "1.8");
        assert_eq!(rows[0].improvement_1dp, "1.3");
        assert_eq!(rows[5].ours_4dp, "3.5918");
        assert_eq!(rows[5].improvement_1dp, "2.0");
    }

    #[test]
    fn catalog_exports() {
        let json = catalog_json();
        assert!(json.contains("\"3/17\""));
        assert!(json.contains("160/(89-91ϖ)"));
    }

    #[test]
    fn figure_rows_include_envelope() {
        let a = Assumptions::unconditional();
        let rows = figure_data(&ratio(9, 20), &ratio(1, 2), &ratio(1, 100), &a, 2).unwrap();
        assert!(rows.iter().any(|r| r.curve == ENVELOPE_LABEL));
        let csv = figure_csv(&rows);
        assert!(csv.starts_with("varpi,curve_id,value\n"));
    }
}
