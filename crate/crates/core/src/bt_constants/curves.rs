//! The catalog of admissible constants `C(ϖ)` in
//! `max π(x; q, a) ≤ (C(ϖ) + ε) x/(φ(q) log x)` for `q ~ x^ϖ`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{out_of_range, Error, Result};
use crate::exponent_pairs::ExponentPair;
use crate::rational::{self, int, ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    Unconditional,
    PrimeModulus,
    SmoothSquarefreeModulus,
    RamanujanPetersson,
    MomentConjecture,
    HypothesisRStar,
    Lindelof,
}

impl Hypothesis {
    pub fn name(self) -> &'static str {
        match self {
            Hypothesis::Unconditional => "unconditional",
            Hypothesis::PrimeModulus => "prime-modulus",
            Hypothesis::SmoothSquarefreeModulus => "smooth-squarefree-modulus",
            Hypothesis::RamanujanPetersson => "ramanujan-petersson",
            Hypothesis::MomentConjecture => "moment-conjecture",
            Hypothesis::HypothesisRStar => "hypothesis-R*",
            Hypothesis::Lindelof => "lindelof",
        }
    }
}

/// What the caller is willing to assume. Unconditional curves are always
/// admitted.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Assumptions {
    pub prime_modulus: bool,
    pub smooth_squarefree: bool,
    /// Assumed exponent `θ` towards Ramanujan–Petersson for `GL_2`.
    pub ramanujan_petersson: Option<Rational>,
    /// Assumed `δ` in the twisted fourth-moment conjecture.
    pub moment_conjecture: Option<Rational>,
    pub hypothesis_r_star: bool,
    pub lindelof: bool,
}

impl Assumptions {
    pub fn unconditional() -> Self {
        Self::default()
    }

    /// Parses a comma-separated list such as
    /// `prime,smooth,rp=0,moment=1/10,rstar,lindelof`.
    pub fn parse_list(text: &str) -> Result<Self> {
        let mut out = Self::default();
        for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            out.add(token)?;
        }
        Ok(out)
    }

    pub fn add(&mut self, token: &str) -> Result<()> {
        let (key, value) = match token.split_once('=') {
            Some((k, v)) => (k.trim(), Some(v.trim())),
            None => (token.trim(), None),
        };
        let need = |v: Option<&str>| -> Result<Rational> {
            rational::parse(v.ok_or_else(|| {
                Error::InvalidArgument(format!("assumption {key:?} needs a value"))
            })?)
        };
        match key {
            "unconditional" => {}
            "prime" | "prime-modulus" => self.prime_modulus = true,
            "smooth" | "smooth-squarefree" | "smooth-squarefree-modulus" => {
                self.smooth_squarefree = true
            }
            "rp" | "ramanujan-petersson" => {
                let theta = need(value)?;
                check_theta(&theta)?;
                self.ramanujan_petersson = Some(theta);
            }
            "moment" | "moment-conjecture" => {
                let delta = need(value)?;
                check_delta(&delta)?;
                self.moment_conjecture = Some(delta);
            }
            "rstar" | "hypothesis-R*" | "r-star" => self.hypothesis_r_star = true,
            "lindelof" => self.lindelof = true,
            _ => return Err(Error::InvalidArgument(format!("unknown assumption {token:?}"))),
        }
        Ok(())
    }

    pub fn admits(&self, h: Hypothesis) -> bool {
        match h {
            Hypothesis::Unconditional => true,
            Hypothesis::PrimeModulus => self.prime_modulus,
            Hypothesis::SmoothSquarefreeModulus => self.smooth_squarefree,
            Hypothesis::RamanujanPetersson => self.ramanujan_petersson.is_some(),
            Hypothesis::MomentConjecture => self.moment_conjecture.is_some(),
            Hypothesis::HypothesisRStar => self.hypothesis_r_star,
            Hypothesis::Lindelof => self.lindelof,
        }
    }
}

pub(crate) fn check_theta(theta: &Rational) -> Result<()> {
    if *theta < Rational::zero() || *theta >= ratio(1, 2) {
        return Err(out_of_range("theta", rational::to_string(theta), "[0, 1/2)"));
    }
    Ok(())
}

pub(crate) fn check_delta(delta: &Rational) -> Result<()> {
    if *delta < Rational::zero() || *delta >= ratio(16, 45) {
        return Err(out_of_range("delta", rational::to_string(delta), "[0, 16/45)"));
    }
    Ok(())
}

/// Kim–Sarnak exponent towards Ramanujan–Petersson.
pub fn kim_sarnak_theta() -> Rational {
    ratio(7, 64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveId {
    /// `2/(1−ϖ)` on `]0,1[`.
    VanLintRichert,
    /// `16/(8−3ϖ)`, `4/(2−ϖ)`, `2/(2−3ϖ)` on `]0,1/3[`, `[1/3,2/5]`, `]2/5,1/2]`.
    Motohashi,
    /// `2` on `[0,1/3]`, `2/(2−3ϖ)` on `[1/3,1/2]` under Lindelöf.
    MotohashiLindelof,
    /// `16/(8−3ϖ)` on `]0,24/71[`.
    Goldfeld,
    /// `16/(8−3ϖ)` on `]0,9/20[`.
    IwaniecBurgess,
    /// `6/(3−ϖ)` on `]0,9/20[` (Burgess with `r = 3`).
    IwaniecCubicBurgess,
    /// `8/(6−7ϖ)` on `[9/20,2/3]`.
    IwaniecKloosterman,
    /// `(2−((1−ϖ)/4)^6)/(1−ϖ)` on `[6/11,1[`.
    FriedlanderIwaniec,
    /// `(2−c₀(1−ϖ)²)/(1−ϖ)` on `[1−δ,1[` with unspecified `c₀, δ`.
    BourgainGaraev,
    /// `2` on `]0,1/8[`.
    Maynard,
    /// `16/(8−(3+2θ)ϖ)` on `]9/20,1/2[`.
    BurgessLike,
    /// Six pieces on `[1/2, 4/7[` for prime moduli.
    PrimeModulusLarge,
    /// `160/(89−91ϖ)` on `[9/51, 9/11]` for smooth squarefree moduli.
    SmoothSpecialPair,
    /// `4/g_ϖ(κ,λ)` on the window of an exponent pair.
    SmoothExponentPair,
    /// `2` on `[1/8,5/12[`, `5/(5−6ϖ)` on `[5/12,9/20[`.
    SmoothFlat,
    /// `2`, then `20/(20−(24−5δ)ϖ)` from `10/(24−5δ)` to `9/20`.
    SmoothMoment,
    /// `4/(2−(1−δ)ϖ)` on `[9/20,1/2]`.
    GeneralMoment,
    /// `6/(5−6ϖ)` on `]4/9,7/12[`, `5/(3−3ϖ)` on `]7/12,1[`.
    IwaniecRStar,
}

impl CurveId {
    pub const ALL: [CurveId; 18] = [
        CurveId::VanLintRichert,
        CurveId::Motohashi,
        CurveId::MotohashiLindelof,
        CurveId::Goldfeld,
        CurveId::IwaniecBurgess,
        CurveId::IwaniecCubicBurgess,
        CurveId::IwaniecKloosterman,
        CurveId::FriedlanderIwaniec,
        CurveId::BourgainGaraev,
        CurveId::Maynard,
        CurveId::BurgessLike,
        CurveId::PrimeModulusLarge,
        CurveId::SmoothSpecialPair,
        CurveId::SmoothExponentPair,
        CurveId::SmoothFlat,
        CurveId::SmoothMoment,
        CurveId::GeneralMoment,
        CurveId::IwaniecRStar,
    ];

    pub fn key(self) -> &'static str {
        match self {
            CurveId::VanLintRichert => "van-lint-richert",
            CurveId::Motohashi => "motohashi",
            CurveId::MotohashiLindelof => "motohashi-lindelof",
            CurveId::Goldfeld => "goldfeld",
            CurveId::IwaniecBurgess => "iwaniec-burgess",
            CurveId::IwaniecCubicBurgess => "iwaniec-cubic-burgess",
            CurveId::IwaniecKloosterman => "iwaniec-kloosterman",
            CurveId::FriedlanderIwaniec => "friedlander-iwaniec",
            CurveId::BourgainGaraev => "bourgain-garaev",
            CurveId::Maynard => "maynard",
            CurveId::BurgessLike => "burgess-like",
            CurveId::PrimeModulusLarge => "prime-modulus-large",
            CurveId::SmoothSpecialPair => "smooth-special-pair",
            CurveId::SmoothExponentPair => "smooth-exponent-pair",
            CurveId::SmoothFlat => "smooth-flat",
            CurveId::SmoothMoment => "smooth-moment",
            CurveId::GeneralMoment => "general-moment",
            CurveId::IwaniecRStar => "iwaniec-r-star",
        }
    }

    pub fn source(self) -> &'static str {
        match self {
            CurveId::VanLintRichert => {
                "van Lint & Richert (1965); Montgomery & Vaughan (1973); Selberg (1991)"
            }
            CurveId::Motohashi => "Motohashi (1973, 1974)",
            CurveId::MotohashiLindelof => "Motohashi (1974), under the Lindelof Hypothesis",
            CurveId::Goldfeld => "Goldfeld (1975)",
            CurveId::IwaniecBurgess => "Iwaniec (1982), Burgess r = 2",
            CurveId::IwaniecCubicBurgess => "Iwaniec (1982), Burgess r = 3",
            CurveId::IwaniecKloosterman => "Iwaniec (1982), Weil bound for Kloosterman sums",
            CurveId::FriedlanderIwaniec => "Friedlander & Iwaniec (1997)",
            CurveId::BourgainGaraev => "Bourgain & Garaev (2014)",
            CurveId::Maynard => "Maynard (2013)",
            CurveId::BurgessLike => {
                "Burgess-like constant: well-factorable linear sieve with Kloostermania"
            }
            CurveId::PrimeModulusLarge => {
                "prime moduli beyond 1/2: Kloosterman tensor trace functions"
            }
            CurveId::SmoothSpecialPair => "smooth squarefree moduli, exponent pair (1/20, 33/40)",
            CurveId::SmoothExponentPair => "smooth squarefree moduli, arithmetic exponent pairs",
            CurveId::SmoothFlat => "smooth squarefree moduli, incomplete character sums",
            CurveId::SmoothMoment => "smooth squarefree moduli under the moment conjecture",
            CurveId::GeneralMoment => "general moduli under the moment conjecture",
            CurveId::IwaniecRStar => "Iwaniec (1982), under Hooley's Hypothesis R*",
        }
    }

    /// The printed closed form with parameters left symbolic.
    pub fn formula(self) -> &'static str {
        match self {
            CurveId::VanLintRichert => "2/(1-ϖ)",
            CurveId::Motohashi => "16/(8-3ϖ) | 4/(2-ϖ) | 2/(2-3ϖ)",
            CurveId::MotohashiLindelof => "2 | 2/(2-3ϖ)",
            CurveId::Goldfeld | CurveId::IwaniecBurgess => "16/(8-3ϖ)",
            CurveId::IwaniecCubicBurgess => "6/(3-ϖ)",
            CurveId::IwaniecKloosterman => "8/(6-7ϖ)",
            CurveId::FriedlanderIwaniec => "(2-((1-ϖ)/4)^6)/(1-ϖ)",
            CurveId::BourgainGaraev => "(2-c0(1-ϖ)^2)/(1-ϖ)",
            CurveId::Maynard => "2",
            CurveId::BurgessLike => "16/(8-(3+2θ)ϖ)",
            CurveId::PrimeModulusLarge => {
                "8/(5-5ϖ) | 32/(32-43ϖ) | 24/(16-17ϖ) | 48/(40-49ϖ) | 16/(11-12ϖ) | 32/(28-35ϖ)"
            }
            CurveId::SmoothSpecialPair => "160/(89-91ϖ)",
            CurveId::SmoothExponentPair => "4/((3+κ-λ)-(3+2κ-λ)ϖ)",
            CurveId::SmoothFlat => "2 | 5/(5-6ϖ)",
            CurveId::SmoothMoment => "2 | 20/(20-(24-5δ)ϖ)",
            CurveId::GeneralMoment => "4/(2-(1-δ)ϖ)",
            CurveId::IwaniecRStar => "6/(5-6ϖ) | 5/(3-3ϖ)",
        }
    }

    /// Every hypothesis the curve needs beyond the others in its instance.
    pub fn hypotheses(self) -> &'static [Hypothesis] {
        use Hypothesis::*;
        match self {
            CurveId::MotohashiLindelof => &[Lindelof],
            CurveId::BurgessLike => &[RamanujanPetersson],
            CurveId::PrimeModulusLarge => &[PrimeModulus],
            CurveId::SmoothSpecialPair | CurveId::SmoothExponentPair | CurveId::SmoothFlat => {
                &[SmoothSquarefreeModulus]
            }
            CurveId::SmoothMoment => &[SmoothSquarefreeModulus, MomentConjecture],
            CurveId::GeneralMoment => &[MomentConjecture],
            CurveId::IwaniecRStar => &[HypothesisRStar],
            _ => &[Unconditional],
        }
    }

    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            CurveId::BurgessLike => &["theta"],
            CurveId::SmoothExponentPair => &["pair"],
            CurveId::SmoothMoment | CurveId::GeneralMoment => &["delta"],
            CurveId::BourgainGaraev => &["c0", "delta"],
            _ => &[],
        }
    }

    /// Curves with unspecified constants never enter numeric envelopes.
    pub fn is_symbolic(self) -> bool {
        self == CurveId::BourgainGaraev
    }

    pub fn is_literature(self) -> bool {
        matches!(
            self,
            CurveId::VanLintRichert
                | CurveId::Motohashi
                | CurveId::MotohashiLindelof
                | CurveId::Goldfeld
                | CurveId::IwaniecBurgess
                | CurveId::IwaniecCubicBurgess
                | CurveId::IwaniecKloosterman
                | CurveId::FriedlanderIwaniec
                | CurveId::BourgainGaraev
                | CurveId::Maynard
                | CurveId::IwaniecRStar
        )
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for CurveId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CurveId::ALL
            .into_iter()
            .find(|c| c.key() == s)
            .ok_or_else(|| Error::UnknownCurve(s.to_string()))
    }
}

/// One endpoint of a validity piece.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Endpoint {
    #[serde(with = "rational")]
    pub value: Rational,
    pub closed: bool,
}

/// Closed forms that occur among the curves.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Constant(Rational),
    /// `numerator / (offset − slope·ϖ)`.
    Reciprocal {
        numerator: Rational,
        offset: Rational,
        slope: Rational,
    },
    /// `(2 − ((1−ϖ)/4)^6)/(1−ϖ)`.
    FriedlanderIwaniec,
    /// Involves unspecified constants.
    Symbolic(&'static str),
}

impl Expr {
    fn reciprocal(numerator: Rational, offset: Rational, slope: Rational) -> Self {
        Expr::Reciprocal {
            numerator,
            offset,
            slope,
        }
    }

    pub fn eval(&self, varpi: &Rational) -> Option<Rational> {
        match self {
            Expr::Constant(c) => Some(c.clone()),
            Expr::Reciprocal {
                numerator,
                offset,
                slope,
            } => {
                let den = offset - slope * varpi;
                (!den.is_zero()).then(|| numerator / den)
            }
            Expr::FriedlanderIwaniec => {
                let gap = int(1) - varpi;
                if gap.is_zero() {
                    return None;
                }
                let quarter = &gap / int(4);
                let sixth = num_traits::pow(quarter, 6);
                Some((int(2) - sixth) / gap)
            }
            Expr::Symbolic(_) => None,
        }
    }

    pub fn render(&self) -> String {
        let r = rational::to_string;
        match self {
            Expr::Constant(c) => r(c),
            Expr::Reciprocal {
                numerator,
                offset,
                slope,
            } => {
                let slope = if slope.is_one() {
                    "ϖ".to_string()
                } else if slope.is_integer() {
                    format!("{}ϖ", r(slope))
                } else {
                    format!("({})ϖ", r(slope))
                };
                format!("{}/({}-{})", r(numerator), r(offset), slope)
            }
            Expr::FriedlanderIwaniec => "(2-((1-ϖ)/4)^6)/(1-ϖ)".into(),
            Expr::Symbolic(s) => (*s).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub lower: Endpoint,
    pub upper: Endpoint,
    pub expr: Expr,
}

impl Piece {
    pub fn contains(&self, varpi: &Rational) -> bool {
        let above = if self.lower.closed {
            *varpi >= self.lower.value
        } else {
            *varpi > self.lower.value
        };
        let below = if self.upper.closed {
            *varpi <= self.upper.value
        } else {
            *varpi < self.upper.value
        };
        above && below
    }
}

fn closed(v: Rational) -> Endpoint {
    Endpoint { value: v, closed: true }
}

fn open(v: Rational) -> Endpoint {
    Endpoint { value: v, closed: false }
}

fn piece(lower: Endpoint, upper: Endpoint, expr: Expr) -> Piece {
    Piece { lower, upper, expr }
}

fn recip(n: i64, o: i64, s: i64) -> Expr {
    Expr::reciprocal(int(n), int(o), int(s))
}

/// Parameters for the parametric curves.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveParams {
    pub theta: Option<Rational>,
    pub delta: Option<Rational>,
    pub pair: Option<ExponentPair>,
}

impl CurveParams {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn theta(theta: Rational) -> Self {
        Self {
            theta: Some(theta),
            ..Self::default()
        }
    }

    pub fn delta(delta: Rational) -> Self {
        Self {
            delta: Some(delta),
            ..Self::default()
        }
    }

    pub fn pair(pair: ExponentPair) -> Self {
        Self {
            pair: Some(pair),
            ..Self::default()
        }
    }
}

impl CurveId {
    /// Validity pieces with parameters substituted.
    pub fn pieces(self, params: &CurveParams) -> Result<Vec<Piece>> {
        let r = ratio;
        Ok(match self {
            CurveId::VanLintRichert => vec![piece(open(int(0)), open(int(1)), recip(2, 1, 1))],
            CurveId::Motohashi => vec![
                piece(open(int(0)), open(r(1, 3)), recip(16, 8, 3)),
                piece(closed(r(1, 3)), closed(r(2, 5)), recip(4, 2, 1)),
                piece(open(r(2, 5)), closed(r(1, 2)), recip(2, 2, 3)),
            ],
            CurveId::MotohashiLindelof => vec![
                piece(closed(int(0)), closed(r(1, 3)), Expr::Constant(int(2))),
                piece(closed(r(1, 3)), closed(r(1, 2)), recip(2, 2, 3)),
            ],
            CurveId::Goldfeld => vec![piece(open(int(0)), open(r(24, 71)), recip(16, 8, 3))],
            CurveId::IwaniecBurgess => vec![piece(open(int(0)), open(r(9, 20)), recip(16, 8, 3))],
            CurveId::IwaniecCubicBurgess => {
                vec![piece(open(int(0)), open(r(9, 20)), recip(6, 3, 1))]
            }
            CurveId::IwaniecKloosterman => {
                vec![piece(closed(r(9, 20)), closed(r(2, 3)), recip(8, 6, 7))]
            }
            CurveId::FriedlanderIwaniec => {
                vec![piece(closed(r(6, 11)), open(int(1)), Expr::FriedlanderIwaniec)]
            }
            CurveId::BourgainGaraev => vec![piece(
                closed(int(1)),
                open(int(1)),
                Expr::Symbolic("(2-c0(1-ϖ)^2)/(1-ϖ) on [1-δ,1["),
            )],
            CurveId::Maynard => vec![piece(open(int(0)), open(r(1, 8)), Expr::Constant(int(2)))],
            CurveId::BurgessLike => {
                let theta = params.theta.clone().ok_or(Error::MissingParameter("theta"))?;
                check_theta(&theta)?;
                let slope = int(3) + theta * int(2);
                vec![piece(
                    open(r(9, 20)),
                    open(r(1, 2)),
                    Expr::reciprocal(int(16), int(8), slope),
                )]
            }
            CurveId::PrimeModulusLarge => vec![
                piece(closed(r(1, 2)), open(r(12, 23)), recip(8, 5, 5)),
                piece(closed(r(12, 23)), open(r(32, 61)), recip(32, 32, 43)),
                piece(closed(r(32, 61)), open(r(8, 15)), recip(24, 16, 17)),
                piece(closed(r(8, 15)), open(r(7, 13)), recip(48, 40, 49)),
                piece(closed(r(7, 13)), open(r(6, 11)), recip(16, 11, 12)),
                piece(closed(r(6, 11)), open(r(4, 7)), recip(32, 28, 35)),
            ],
            CurveId::SmoothSpecialPair => {
                vec![piece(closed(r(9, 51)), closed(r(9, 11)), recip(160, 89, 91))]
            }
            CurveId::SmoothExponentPair => {
                let pair = params.pair.as_ref().ok_or(Error::MissingParameter("pair"))?;
                if !pair.in_kappa_lambda_band() {
                    return Err(Error::InvalidArgument(format!(
                        "pair {pair} violates 0 <= kappa <= 1/2 <= lambda <= 1"
                    )));
                }
                let (lo, hi) = pair.varpi_window().ok_or_else(|| {
                    Error::InvalidArgument(format!("pair {pair} has an empty window"))
                })?;
                let k = &pair.kappa;
                let l = &pair.lambda;
                vec![piece(
                    closed(lo),
                    closed(hi),
                    Expr::reciprocal(int(4), int(3) + k - l, int(3) + k * int(2) - l),
                )]
            }
            CurveId::SmoothFlat => vec![
                piece(closed(r(1, 8)), open(r(5, 12)), Expr::Constant(int(2))),
                piece(closed(r(5, 12)), open(r(9, 20)), recip(5, 5, 6)),
            ],
            CurveId::SmoothMoment => {
                let delta = params.delta.clone().ok_or(Error::MissingParameter("delta"))?;
                check_delta(&delta)?;
                let slope = int(24) - delta * int(5);
                let knee = int(10) / &slope;
                vec![
                    piece(closed(r(1, 8)), open(knee.clone()), Expr::Constant(int(2))),
                    piece(
                        closed(knee),
                        open(r(9, 20)),
                        Expr::reciprocal(int(20), int(20), slope),
                    ),
                ]
            }
            CurveId::GeneralMoment => {
                let delta = params.delta.clone().ok_or(Error::MissingParameter("delta"))?;
                check_delta(&delta)?;
                vec![piece(
                    closed(r(9, 20)),
                    closed(r(1, 2)),
                    Expr::reciprocal(int(4), int(2), int(1) - delta),
                )]
            }
            CurveId::IwaniecRStar => vec![
                piece(open(r(4, 9)), open(r(7, 12)), recip(6, 5, 6)),
                piece(open(r(7, 12)), open(int(1)), recip(5, 3, 3)),
            ],
        })
    }
}

/// A curve with its parameters bound.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveInstance {
    pub id: CurveId,
    pub params: CurveParams,
}

impl CurveInstance {
    pub fn new(id: CurveId, params: CurveParams) -> Self {
        Self { id, params }
    }

    pub fn plain(id: CurveId) -> Self {
        Self::new(id, CurveParams::none())
    }

    /// Stable label such as `burgess-like[theta=7/64]`.
    pub fn label(&self) -> String {
        let mut tags = Vec::new();
        if let Some(t) = &self.params.theta {
            tags.push(format!("theta={}", rational::to_string(t)));
        }
        if let Some(d) = &self.params.delta {
            tags.push(format!("delta={}", rational::to_string(d)));
        }
        if let Some(p) = &self.params.pair {
            tags.push(format!(
                "kappa={},lambda={}",
                rational::to_string(&p.kappa),
                rational::to_string(&p.lambda)
            ));
        }
        if tags.is_empty() {
            self.id.key().to_string()
        } else {
            format!("{}[{}]", self.id.key(), tags.join(","))
        }
    }

    /// Hypotheses of this instance; the Burgess-like curve is unconditional
    /// at the Kim–Sarnak exponent.
    pub fn hypotheses(&self) -> Vec<Hypothesis> {
        if self.id == CurveId::BurgessLike && self.params.theta == Some(kim_sarnak_theta()) {
            return vec![Hypothesis::Unconditional];
        }
        self.id.hypotheses().to_vec()
    }

    pub fn pieces(&self) -> Result<Vec<Piece>> {
        self.id.pieces(&self.params)
    }

    pub fn eval(&self, varpi: &Rational) -> Result<Option<Rational>> {
        eval_curve(self.id, varpi, &self.params)
    }
}

/// Exact `C(ϖ)` if `ϖ` lies in a validity piece, `None` otherwise.
pub fn eval_curve(id: CurveId, varpi: &Rational, params: &CurveParams) -> Result<Option<Rational>> {
    let pieces = id.pieces(params)?;
    Ok(pieces
        .iter()
        .find(|p| p.contains(varpi))
        .and_then(|p| p.expr.eval(varpi)))
}

/// Curve instances admitted by `assumptions`, in catalog order. The
/// exponent-pair family is listed once without a pair; envelopes bind it by
/// search.
pub fn list_curves(assumptions: &Assumptions) -> Vec<CurveInstance> {
    let mut out = Vec::new();
    for id in CurveId::ALL {
        match id {
            CurveId::BurgessLike => {
                let mut thetas = vec![kim_sarnak_theta()];
                if assumptions.prime_modulus {
                    thetas.push(int(0));
                }
                if let Some(t) = &assumptions.ramanujan_petersson {
                    thetas.push(t.clone());
                }
                thetas.sort();
                thetas.dedup();
                out.extend(
                    thetas
                        .into_iter()
                        .map(|t| CurveInstance::new(id, CurveParams::theta(t))),
                );
            }
            CurveId::SmoothMoment | CurveId::GeneralMoment => {
                if let Some(d) = &assumptions.moment_conjecture {
                    if id.hypotheses().iter().all(|&h| assumptions.admits(h)) {
                        out.push(CurveInstance::new(id, CurveParams::delta(d.clone())));
                    }
                }
            }
            _ => {
                if id.hypotheses().iter().all(|&h| assumptions.admits(h)) {
                    out.push(CurveInstance::plain(id));
                }
            }
        }
    }
    out
}
