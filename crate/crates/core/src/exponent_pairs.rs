//! Exact calculus of arithmetic exponent pairs generated by the A- and
//! B-processes of the q-analogue of van der Corput's method.
//!
//! A pair is a triple `(κ, λ, ν)` of exact rationals. Words over `{A, B}` act
//! right to left on the trivial pair `(0, 1, 0)`: in `"AB"` the `B` is applied
//! first.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, int, ratio, Rational};

/// Depth cap used by searches when the caller does not supply one.
pub const DEFAULT_DEPTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExponentPair {
    #[serde(with = "rational")]
    pub kappa: Rational,
    #[serde(with = "rational")]
    pub lambda: Rational,
    #[serde(with = "rational")]
    pub nu: Rational,
}

impl ExponentPair {
    pub fn new(kappa: Rational, lambda: Rational, nu: Rational) -> Self {
        Self { kappa, lambda, nu }
    }

    /// The trivial pair `(0, 1, 0)`.
    pub fn trivial() -> Self {
        Self::new(int(0), int(1), int(0))
    }

    pub fn apply_a(&self) -> Self {
        let denom = (&self.kappa + int(1)) * int(2);
        let kappa = &self.kappa / &denom;
        let lambda = (&self.kappa + &self.lambda + int(1)) / &denom;
        Self::new(kappa.clone(), lambda, kappa)
    }

    pub fn apply_b(&self) -> Self {
        let half = ratio(1, 2);
        Self::new(
            &self.lambda - &half,
            &self.kappa + &half,
            &self.lambda + &self.nu - &self.kappa,
        )
    }

    pub fn apply(&self, step: Process) -> Self {
        match step {
            Process::A => self.apply_a(),
            Process::B => self.apply_b(),
        }
    }

    /// `κ + λ`, the quantity minimized in the Rankin problem.
    pub fn sum(&self) -> Rational {
        &self.kappa + &self.lambda
    }

    /// `0 ≤ κ ≤ 1/2 ≤ λ ≤ 1`.
    pub fn in_kappa_lambda_band(&self) -> bool {
        let half = ratio(1, 2);
        self.kappa >= Rational::zero()
            && self.kappa <= half
            && half <= self.lambda
            && self.lambda <= int(1)
    }

    /// `0 ≤ ν ≤ 1`.
    pub fn nu_in_unit_interval(&self) -> bool {
        self.nu >= Rational::zero() && self.nu <= int(1)
    }

    /// `f(κ, λ) = (1+κ−λ)/(1+2κ−λ)`; undefined when the denominator vanishes
    /// (only at the trivial pair within the band).
    pub fn f_value(&self) -> Option<Rational> {
        let num = int(1) + &self.kappa - &self.lambda;
        let den = int(1) + &self.kappa * int(2) - &self.lambda;
        (!den.is_zero()).then(|| num / den)
    }

    /// `g_ϖ(κ, λ) = (3+κ−λ) − (3+2κ−λ)ϖ`.
    pub fn g_value(&self, varpi: &Rational) -> Rational {
        (int(3) + &self.kappa - &self.lambda) - (int(3) + &self.kappa * int(2) - &self.lambda) * varpi
    }

    /// Closed window `[(1+κ−λ)/(2+2κ−λ), f(κ,λ)]` of `ϖ` on which the pair
    /// yields the constant `4/g_ϖ(κ,λ)` for smooth squarefree moduli.
    pub fn varpi_window(&self) -> Option<(Rational, Rational)> {
        let upper = self.f_value()?;
        let num = int(1) + &self.kappa - &self.lambda;
        let den = int(2) + &self.kappa * int(2) - &self.lambda;
        if den.is_zero() {
            return None;
        }
        let lower = num / den;
        (lower < upper).then_some((lower, upper))
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            rational::to_string(&self.kappa),
            rational::to_string(&self.lambda),
            rational::to_string(&self.nu)
        )
    }
}

pub fn apply_a(p: &ExponentPair) -> ExponentPair {
    p.apply_a()
}

pub fn apply_b(p: &ExponentPair) -> ExponentPair {
    p.apply_b()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Process {
    A,
    B,
}

/// A finite word over `{A, B}`, stored left to right as written.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ProcessWord(Vec<Process>);

impl ProcessWord {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn from_letters(letters: Vec<Process>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[Process] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `A^k B`.
    pub fn a_power_b(k: usize) -> Self {
        let mut letters = vec![Process::A; k];
        letters.push(Process::B);
        Self(letters)
    }

    /// The word with `step` written in front, i.e. applied last.
    pub fn prepended(&self, step: Process) -> Self {
        let mut letters = Vec::with_capacity(self.0.len() + 1);
        letters.push(step);
        letters.extend_from_slice(&self.0);
        Self(letters)
    }

    /// Shortest first, then lexicographic with `A < B`.
    pub fn shortlex_cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }

    /// Exponent notation, e.g. `ABA³B`.
    pub fn compact(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.0.len() {
            let letter = self.0[i];
            let run = self.0[i..].iter().take_while(|&&c| c == letter).count();
            out.push(if letter == Process::A { 'A' } else { 'B' });
            if run > 1 {
                out.push_str(&superscript(run));
            }
            i += run;
        }
        out
    }

    pub fn contains_bb(&self) -> bool {
        self.0.windows(2).any(|w| w == [Process::B, Process::B])
    }
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

fn superscript_value(c: char) -> Option<u32> {
    match c {
        '⁰' => Some(0),
        '¹' => Some(1),
        '²' => Some(2),
        '³' => Some(3),
        '⁴'..='⁹' => Some(c as u32 - '⁴' as u32 + 4),
        _ => None,
    }
}

impl fmt::Display for ProcessWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            f.write_str(if *c == Process::A { "A" } else { "B" })?;
        }
        Ok(())
    }
}

impl Serialize for ProcessWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Accepts plain letters (`AABAAB`), caret exponents (`A^2BA^2B`), bare
/// digit exponents (`A2BA2B`) and superscripts (`A²BA²B`). Whitespace and
/// `·` are ignored.
impl FromStr for ProcessWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::InvalidArgument(format!("not a process word: {s:?}"));
        let chars: Vec<char> = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '·' && *c != '*')
            .collect();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let letter = match chars[i] {
                'A' | 'a' => Process::A,
                'B' | 'b' => Process::B,
                _ => return Err(err()),
            };
            i += 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                if i >= chars.len() || !chars[i].is_ascii_digit() {
                    return Err(err());
                }
            }
            let mut exponent: Option<u32> = None;
            while i < chars.len() {
                let digit = chars[i].to_digit(10).or_else(|| superscript_value(chars[i]));
                match digit {
                    Some(d) => {
                        exponent = Some(exponent.unwrap_or(0) * 10 + d);
                        i += 1;
                    }
                    None => break,
                }
            }
            letters.extend(std::iter::repeat_n(letter, exponent.unwrap_or(1) as usize));
        }
        Ok(Self(letters))
    }
}

/// Applies the letters of `w` right to left to `(0, 1, 0)`.
pub fn eval_word(w: &ProcessWord) -> ExponentPair {
    w.letters()
        .iter()
        .rev()
        .fold(ExponentPair::trivial(), |p, &step| p.apply(step))
}

/// Printed closed form `(1/(2^{k+1}−2), 1 − k/(2^{k+1}−2), 1/(2^{k+1}−2))`.
///
/// Direct composition gives `eval_word(A^k B) == akb_formula(k + 1)`: the
/// closed form at index `k` is the word `A^{k-1} B`.
pub fn akb_formula(k: u32) -> Result<ExponentPair> {
    if k < 2 {
        return Err(crate::error::out_of_range("k", k, "k >= 2"));
    }
    if k > 62 {
        return Err(crate::error::out_of_range("k", k, "k <= 62"));
    }
    let d = (1i64 << (k + 1)) - 2;
    let base = ratio(1, d);
    Ok(ExponentPair::new(
        base.clone(),
        int(1) - ratio(k as i64, d),
        base,
    ))
}

/// Every distinct pair reachable by a word of length `<= max_length`, each
/// with its shortlex-minimal witness. Sorted by witness in shortlex order.
pub fn enumerate_pairs(max_length: usize) -> Vec<(ProcessWord, ExponentPair)> {
    let mut seen: HashMap<ExponentPair, ProcessWord> = HashMap::new();
    seen.insert(ExponentPair::trivial(), ProcessWord::empty());
    let mut frontier = vec![(ProcessWord::empty(), ExponentPair::trivial())];

    // Values first reached at length L+1 can only come from values first
    // reached at length L, so expanding the frontier alone is exhaustive.
    for _ in 0..max_length {
        let mut fresh: HashMap<ExponentPair, ProcessWord> = HashMap::new();
        for (word, pair) in &frontier {
            for step in [Process::A, Process::B] {
                let next = pair.apply(step);
                if seen.contains_key(&next) {
                    continue;
                }
                let candidate = word.prepended(step);
                match fresh.get_mut(&next) {
                    Some(existing) if candidate.shortlex_cmp(existing) != Ordering::Less => {}
                    Some(existing) => *existing = candidate,
                    None => {
                        fresh.insert(next, candidate);
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        let mut next_frontier: Vec<_> = fresh.into_iter().map(|(p, w)| (w, p)).collect();
        next_frontier.sort_by(|a, b| a.0.shortlex_cmp(&b.0));
        for (w, p) in &next_frontier {
            seen.insert(p.clone(), w.clone());
        }
        frontier = next_frontier;
    }

    let mut all: Vec<_> = seen.into_iter().map(|(p, w)| (w, p)).collect();
    all.sort_by(|a, b| a.0.shortlex_cmp(&b.0));
    all
}

#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    /// Minimize `κ + λ`.
    MinSum,
    /// Maximize `f(κ, λ)`.
    MaxF,
    /// Maximize `g_ϖ(κ, λ)` over pairs whose window contains `ϖ`.
    MaxG(Option<Rational>),
}

impl Objective {
    pub fn name(&self) -> &'static str {
        match self {
            Objective::MinSum => "min-sum",
            Objective::MaxF => "max-f",
            Objective::MaxG(_) => "max-g",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Optimum {
    pub word: ProcessWord,
    pub pair: ExponentPair,
    #[serde(with = "rational")]
    pub value: Rational,
}

/// Exhaustive search over [`enumerate_pairs`]. Ties go to the shorter word,
/// then the lexicographically smaller one.
///
/// For `MaxG` only pairs whose [`ExponentPair::varpi_window`] contains `ϖ`
/// compete, since `g_ϖ` only yields a constant inside that window.
pub fn optimize(objective: &Objective, max_length: usize) -> Result<Optimum> {
    let varpi = match objective {
        Objective::MaxG(None) => return Err(Error::MissingParameter("varpi")),
        Objective::MaxG(Some(v)) => Some(v.clone()),
        _ => None,
    };
    let score = |pair: &ExponentPair| -> Option<Rational> {
        match objective {
            Objective::MinSum => Some(-pair.sum()),
            Objective::MaxF => pair.f_value(),
            Objective::MaxG(_) => {
                let v = varpi.as_ref()?;
                let (lo, hi) = pair.varpi_window()?;
                (lo <= *v && *v <= hi).then(|| pair.g_value(v))
            }
        }
    };

    let mut best: Option<(ProcessWord, ExponentPair, Rational)> = None;
    // Candidates arrive in shortlex order, so only a strict improvement
    // replaces the incumbent.
    for (word, pair) in enumerate_pairs(max_length) {
        let Some(s) = score(&pair) else { continue };
        if best.as_ref().is_none_or(|(_, _, b)| s > *b) {
            best = Some((word, pair, s));
        }
    }
    let (word, pair, s) = best.ok_or_else(|| {
        Error::InvalidArgument(format!(
            "no pair of length <= {max_length} is admissible for objective {}",
            objective.name()
        ))
    })?;
    let value = if *objective == Objective::MinSum { -s } else { s };
    Ok(Optimum { word, pair, value })
}

/// Minimum of `κ + λ` over words of each length `0..=max_length`.
pub fn min_sum_profile(max_length: usize) -> Vec<Rational> {
    let all = enumerate_pairs(max_length);
    (0..=max_length)
        .map(|len| {
            all.iter()
                .filter(|(w, _)| w.len() <= len)
                .map(|(_, p)| p.sum())
                .min()
                .unwrap_or_else(Rational::one)
        })
        .collect()
}
