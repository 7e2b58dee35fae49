//! Coefficient conditions that certify `f(z) = z + sum A_n z^n` is in `K_q`.
//!
//! Each criterion turns the real sequence `A_n` into a criterion sequence
//! `B_n` and then tests either a summability condition (a partial sum at the
//! truncation order must stay within budget 1) or a monotone chain. The
//! result names the starlike reference `g` the condition certifies.
//!
//! Two rules build `B_n`:
//!
//! * plain: `B_n = A_n [n]_q` (so `B_0 = 0`, `B_1 = 1`);
//! * consecutive difference: `B_n = A_{n+1} [n+1]_q - A_n [n]_q` (so
//!   `B_0 = 1`).
//!
//! At `q = 1` the plain rule is the classical `b_n = n a_n`.
//!
//! Infinite sums are represented by their partial sums at order `N`;
//! `converged` reports whether the last 8 increments are all below
//! `1e-10 * budget`. It is informational and does not gate `satisfied`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::{CatalogId, Error, QParam, Result};

/// Slack for `statistic <= budget` and for chain inequalities.
pub const CHAIN_TOLERANCE: f64 = 1e-12;

const CONVERGENCE_WINDOW: usize = 8;
const CONVERGENCE_FRACTION: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceRule {
    Plain,
    ConsecutiveDiff,
}

/// The sequence `B_n` derived from `A_n` by one of the two rules.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionSequence {
    pub rule: SequenceRule,
    /// `B_0, B_1, ...`; the consecutive-difference rule yields one value
    /// fewer than there are `A_n`.
    pub values: Vec<f64>,
    pub q: QParam,
}

impl CriterionSequence {
    pub fn plain(a: &[f64], q: QParam) -> Self {
        let br = q.brackets(a.len());
        Self {
            rule: SequenceRule::Plain,
            values: a.iter().zip(&br).map(|(a, b)| a * b).collect(),
            q,
        }
    }

    pub fn consecutive_diff(a: &[f64], q: QParam) -> Self {
        let br = q.brackets(a.len());
        let scaled: Vec<f64> = a.iter().zip(&br).map(|(a, b)| a * b).collect();
        Self {
            rule: SequenceRule::ConsecutiveDiff,
            values: scaled.windows(2).map(|w| w[1] - w[0]).collect(),
            q,
        }
    }

    pub fn build(rule: SequenceRule, a: &[f64], q: QParam) -> Self {
        match rule {
            SequenceRule::Plain => Self::plain(a, q),
            SequenceRule::ConsecutiveDiff => Self::consecutive_diff(a, q),
        }
    }
}

/// Classical `b_n = n a_n`.
pub fn classical_b(a: &[f64]) -> Vec<f64> {
    a.iter().enumerate().map(|(n, a)| n as f64 * a).collect()
}

/// Which form of a criterion to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Summable,
    Chain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// `sum_{n>=1} |B_{n+1} - B_n| <= 1`; reference `z/(1-z)`.
    SumHalfplane,
    /// `1 >= B_2 >= B_3 >= ... >= 0` or `1 <= B_2 <= ... <= 2`; reference `z/(1-z)`.
    MonotoneHalfplane,
    /// consecutive-difference rule, `sum_{n>=1} |B_n - B_{n-1}| <= 1`; reference `z/(1-z)^2`.
    KoebeSum,
    /// consecutive-difference rule, `1 >= B_1 >= ... >= 0` or `1 <= B_1 <= ... <= 2`.
    KoebeMonotone,
    /// odd `f`, `sum_{n>=1} |B_{2n-1} - B_{2n+1}| <= 1`; reference `z/(1-z^2)`.
    OddLemniscateSum,
    /// odd `f`, `1 >= B_3 >= B_5 >= ... >= 0` or the increasing chain up to 2.
    OddLemniscateMonotone,
    /// `sum_{n>=2} |B_n - B_{n-2}| <= 1`; reference `z/(1-z^2)`.
    TwoStep,
    /// `1 >= B_1 + B_2 >= B_2 + B_3 >= ... >= 0` or increasing up to 2.
    TwoStepPairs,
    /// `sum_{n>=1} |B_{n-1} - B_n + B_{n+1}| <= 1`; reference `z/(1-z+z^2)`.
    HexicSum,
    /// `0 >= B_2 - B_1 >= B_3 >= B_2 + B_4 >= ... >= -1` or the mirrored chain up to 1.
    HexicChain,
}

impl Criterion {
    pub const ALL: [Criterion; 10] = [
        Criterion::SumHalfplane,
        Criterion::MonotoneHalfplane,
        Criterion::KoebeSum,
        Criterion::KoebeMonotone,
        Criterion::OddLemniscateSum,
        Criterion::OddLemniscateMonotone,
        Criterion::TwoStep,
        Criterion::TwoStepPairs,
        Criterion::HexicSum,
        Criterion::HexicChain,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Criterion::SumHalfplane => "sum-halfplane",
            Criterion::MonotoneHalfplane => "monotone-halfplane",
            Criterion::KoebeSum => "koebe-sum",
            Criterion::KoebeMonotone => "koebe-monotone",
            Criterion::OddLemniscateSum => "odd-lemniscate-sum",
            Criterion::OddLemniscateMonotone => "odd-lemniscate-monotone",
            Criterion::TwoStep => "two-step",
            Criterion::TwoStepPairs => "two-step-pairs",
            Criterion::HexicSum => "hexic-sum",
            Criterion::HexicChain => "hexic-chain",
        }
    }

    pub fn certifies(self) -> CatalogId {
        match self {
            Criterion::SumHalfplane | Criterion::MonotoneHalfplane => CatalogId::CayleyPlus,
            Criterion::KoebeSum | Criterion::KoebeMonotone => CatalogId::KoebePlus,
            Criterion::OddLemniscateSum
            | Criterion::OddLemniscateMonotone
            | Criterion::TwoStep
            | Criterion::TwoStepPairs => CatalogId::LemniscatePlus,
            Criterion::HexicSum | Criterion::HexicChain => CatalogId::HexicPlus,
        }
    }

    pub fn rule(self) -> SequenceRule {
        match self {
            Criterion::KoebeSum | Criterion::KoebeMonotone => SequenceRule::ConsecutiveDiff,
            _ => SequenceRule::Plain,
        }
    }

    pub fn variant(self) -> Variant {
        match self {
            Criterion::SumHalfplane
            | Criterion::KoebeSum
            | Criterion::OddLemniscateSum
            | Criterion::TwoStep
            | Criterion::HexicSum => Variant::Summable,
            _ => Variant::Chain,
        }
    }

    fn requires_odd(self) -> bool {
        matches!(
            self,
            Criterion::OddLemniscateSum | Criterion::OddLemniscateMonotone
        )
    }

    /// Validates `a` and evaluates the criterion at deformation `q`.
    pub fn evaluate(self, a: &[f64], q: QParam) -> Result<CriterionResult> {
        require_normalized(a)?;
        if self.requires_odd() {
            if let Some(i) = a.iter().enumerate().skip(2).step_by(2).find(|(_, v)| **v != 0.0) {
                return Err(Error::NotOdd(i.0));
            }
        }
        let seq = CriterionSequence::build(self.rule(), a, q);
        Ok(self.evaluate_sequence(&seq.values))
    }

    /// Evaluates the criterion on a precomputed `B_0, B_1, ...` built with
    /// [`Criterion::rule`].
    pub fn evaluate_sequence(self, b: &[f64]) -> CriterionResult {
        let certifies = self.certifies();
        let len = b.len();
        let idx = |n: usize| b[n];
        let outcome = match self {
            Criterion::SumHalfplane => summable((1..len.saturating_sub(1)).map(|n| (n, idx(n + 1) - idx(n)))),
            Criterion::KoebeSum => summable((1..len).map(|n| (n, idx(n) - idx(n - 1)))),
            Criterion::OddLemniscateSum => summable(
                (1..)
                    .take_while(|n| 2 * n + 1 < len)
                    .map(|n| (2 * n + 1, idx(2 * n - 1) - idx(2 * n + 1))),
            ),
            Criterion::TwoStep => summable((2..len).map(|n| (n, idx(n) - idx(n - 2)))),
            Criterion::HexicSum => summable(
                (1..len.saturating_sub(1)).map(|n| (n, idx(n - 1) - idx(n) + idx(n + 1))),
            ),
            Criterion::MonotoneHalfplane => monotone(1.0, 0.0, 2.0, (2..len).map(|n| (n, idx(n)))),
            Criterion::KoebeMonotone => monotone(1.0, 0.0, 2.0, (1..len).map(|n| (n, idx(n)))),
            Criterion::OddLemniscateMonotone => monotone(
                1.0,
                0.0,
                2.0,
                (1..).map(|m| 2 * m + 1).take_while(|&n| n < len).map(|n| (n, idx(n))),
            ),
            Criterion::TwoStepPairs => {
                monotone(1.0, 0.0, 2.0, (2..len).map(|n| (n, idx(n - 1) + idx(n))))
            }
            Criterion::HexicChain => monotone(-0.0, -1.0, 1.0, hexic_chain(b).into_iter()),
        };
        CriterionResult {
            criterion: self,
            certifies,
            ..outcome
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.tag() == s)
            .ok_or_else(|| format!("unknown criterion `{s}`"))
    }
}

/// Chain values `T_1 = B_2 - B_1` and
/// `T_n = B_2 + B_3 + ... + B_{n-1} + B_{n+1}` for `n >= 2`, tagged with `n`.
///
/// Consecutive differences of this chain are exactly the hexic summands
/// `B_{n-1} - B_n + B_{n+1}`.
fn hexic_chain(b: &[f64]) -> Vec<(usize, f64)> {
    let len = b.len();
    if len < 3 {
        return Vec::new();
    }
    let mut out = vec![(1, b[2] - b[1])];
    // running B_2 + ... + B_{n-1}
    let mut prefix = 0.0;
    for n in 2..len - 1 {
        if n >= 3 {
            prefix += b[n - 1];
        }
        out.push((n, prefix + b[n + 1]));
    }
    out
}

fn require_normalized(a: &[f64]) -> Result<()> {
    if a.len() < 3 {
        return Err(Error::OrderTooSmall(3));
    }
    if a[0] != 0.0 || a[1] != 1.0 {
        return Err(Error::NotNormalized);
    }
    Ok(())
}

/// Outcome of a coefficient criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub criterion: Criterion,
    pub satisfied: bool,
    /// Partial sum, or for chains the total variation along the chain
    /// (which telescopes to the distance between its endpoints).
    pub statistic: f64,
    pub budget: f64,
    /// Index `n` of the first term that breaks the condition.
    pub first_violation: Option<usize>,
    pub certifies: CatalogId,
    /// Size of the last summand.
    pub last_increment: f64,
    pub converged: bool,
}

fn summable(terms: impl Iterator<Item = (usize, f64)>) -> CriterionResult {
    let budget = 1.0;
    let mut statistic = 0.0;
    let mut first_violation = None;
    let mut recent = Vec::new();
    for (n, t) in terms {
        let t = t.abs();
        statistic += t;
        if first_violation.is_none() && statistic > budget + CHAIN_TOLERANCE {
            first_violation = Some(n);
        }
        recent.push(t);
    }
    let tail = &recent[recent.len().saturating_sub(CONVERGENCE_WINDOW)..];
    CriterionResult {
        criterion: Criterion::SumHalfplane,
        satisfied: first_violation.is_none(),
        statistic,
        budget,
        first_violation,
        certifies: CatalogId::CayleyPlus,
        last_increment: recent.last().copied().unwrap_or(0.0),
        converged: tail.len() == CONVERGENCE_WINDOW
            && tail.iter().all(|t| *t < CONVERGENCE_FRACTION * budget),
    }
}

/// Scans `anchor, x_1, x_2, ...` for a non-increasing chain bounded below by
/// `low` or a non-decreasing chain bounded above by `high`.
fn monotone(
    anchor: f64,
    low: f64,
    high: f64,
    chain: impl Iterator<Item = (usize, f64)>,
) -> CriterionResult {
    let chain: Vec<(usize, f64)> = chain.collect();
    let scan = |decreasing: bool| -> Option<usize> {
        let mut prev = anchor;
        for &(n, x) in &chain {
            let ordered = if decreasing {
                x <= prev + CHAIN_TOLERANCE && x >= low - CHAIN_TOLERANCE
            } else {
                x >= prev - CHAIN_TOLERANCE && x <= high + CHAIN_TOLERANCE
            };
            if !ordered {
                return Some(n);
            }
            prev = x;
        }
        None
    };
    let down = scan(true);
    let up = scan(false);
    let first_violation = match (down, up) {
        (None, _) | (_, None) => None,
        (Some(a), Some(b)) => Some(a.max(b)),
    };
    let mut statistic = 0.0;
    let mut prev = anchor;
    let mut last_increment = 0.0;
    for &(_, x) in &chain {
        last_increment = (x - prev).abs();
        statistic += last_increment;
        prev = x;
    }
    let budget = 1.0;
    let tail: Vec<f64> = chain
        .windows(2)
        .rev()
        .take(CONVERGENCE_WINDOW)
        .map(|w| (w[1].1 - w[0].1).abs())
        .collect();
    CriterionResult {
        criterion: Criterion::MonotoneHalfplane,
        satisfied: first_violation.is_none() && statistic <= budget + CHAIN_TOLERANCE,
        statistic,
        budget,
        first_violation,
        certifies: CatalogId::CayleyPlus,
        last_increment,
        converged: tail.len() == CONVERGENCE_WINDOW
            && tail.iter().all(|t| *t < CONVERGENCE_FRACTION * budget),
    }
}

/// `sum |B_{n+1} - B_n| <= 1` with the plain rule; certifies `z/(1-z)`.
pub fn crit_sum_halfplane(a: &[f64], q: QParam) -> Result<CriterionResult> {
    Criterion::SumHalfplane.evaluate(a, q)
}

/// Monotone plain-rule chain from `B_2`; certifies `z/(1-z)`.
pub fn crit_monotone_halfplane(a: &[f64], q: QParam) -> Result<CriterionResult> {
    Criterion::MonotoneHalfplane.evaluate(a, q)
}

/// Consecutive-difference rule; certifies the Koebe function.
pub fn crit_koebe(a: &[f64], q: QParam, variant: Variant) -> Result<CriterionResult> {
    match variant {
        Variant::Summable => Criterion::KoebeSum,
        Variant::Chain => Criterion::KoebeMonotone,
    }
    .evaluate(a, q)
}

/// Odd functions only; certifies `z/(1-z^2)`.
pub fn crit_odd_lemniscate(a: &[f64], q: QParam, variant: Variant) -> Result<CriterionResult> {
    match variant {
        Variant::Summable => Criterion::OddLemniscateSum,
        Variant::Chain => Criterion::OddLemniscateMonotone,
    }
    .evaluate(a, q)
}

/// Two-step differences or monotone pair sums; certifies `z/(1-z^2)`.
pub fn crit_two_step(a: &[f64], q: QParam, variant: Variant) -> Result<CriterionResult> {
    match variant {
        Variant::Summable => Criterion::TwoStep,
        Variant::Chain => Criterion::TwoStepPairs,
    }
    .evaluate(a, q)
}

/// Second differences `B_{n-1} - B_n + B_{n+1}`; certifies `z/(1-z+z^2)`.
pub fn crit_hexic(a: &[f64], q: QParam, variant: Variant) -> Result<CriterionResult> {
    match variant {
        Variant::Summable => Criterion::HexicSum,
        Variant::Chain => Criterion::HexicChain,
    }
    .evaluate(a, q)
}

/// Solves the plain rule backwards: `A_n = B_n / [n]_q`.
pub fn coefficients_from_plain(b: &[f64], q: QParam) -> Vec<f64> {
    let br = q.brackets(b.len());
    b.iter()
        .zip(&br)
        .enumerate()
        .map(|(n, (b, br))| if n == 0 { 0.0 } else { b / br })
        .collect()
}

/// Solves the consecutive-difference rule backwards from `B_0 = 1, B_1, ...`:
/// `A_{n+1} [n+1]_q = A_n [n]_q + B_n`. Returns `A_0 .. A_{b.len()}`.
pub fn coefficients_from_consecutive_diff(b: &[f64], q: QParam) -> Vec<f64> {
    let br = q.brackets(b.len() + 1);
    let mut a = vec![0.0; b.len() + 1];
    let mut scaled = 0.0;
    for n in 0..b.len() {
        scaled += b[n];
        a[n + 1] = if n == 0 { scaled } else { scaled / br[n + 1] };
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    fn scaled_dilog(qv: f64, order: usize) -> Vec<f64> {
        let br = q(qv).brackets(order + 1);
        (0..=order)
            .map(|n| if n == 0 { 0.0 } else { 1.0 / (n as f64 * br[n]) })
            .collect()
    }

    #[test]
    fn sum_halfplane_scaled_dilog() {
        let a = scaled_dilog(0.5, 64);
        let r = crit_sum_halfplane(&a, q(0.5)).unwrap();
        assert!(r.satisfied);
        assert_relative_eq!(r.statistic, 1.0 - 1.0 / 64.0, max_relative = 1e-12);
        assert_eq!(r.certifies, CatalogId::CayleyPlus);
        assert!(!r.converged);
    }

    #[test]
    fn sum_halfplane_psi_is_constant() {
        let br = q(0.3).brackets(65);
        let a: Vec<f64> = (0..=64).map(|n| if n == 0 { 0.0 } else { 1.0 / br[n] }).collect();
        let r = crit_sum_halfplane(&a, q(0.3)).unwrap();
        assert!(r.satisfied);
        assert!(r.statistic < 1e-13);
        assert!(r.converged);
    }

    #[test]
    fn sum_halfplane_koebe_coefficients_fail() {
        let a: Vec<f64> = (0..=64).map(|n| n as f64).collect();
        let r = crit_sum_halfplane(&a, q(0.5)).unwrap();
        // oracle: direct partial sum of |B_{n+1} - B_n| with B_n = n [n]_q
        let b: Vec<f64> = (0..=64)
            .map(|n| n as f64 * (1.0 - 0.5f64.powi(n)) / 0.5)
            .collect();
        let oracle: f64 = (1..64).map(|n| (b[n + 1] - b[n]).abs()).sum();
        assert!(!r.satisfied);
        assert_relative_eq!(r.statistic, oracle, max_relative = 1e-12);
        assert_eq!(r.first_violation, Some(1));
    }

    #[test]
    fn monotone_halfplane_examples() {
        let qq = q(0.5);
        let dec = coefficients_from_plain(&(0..=64).map(|n| if n == 0 { 0.0 } else { 1.0 / n as f64 }).collect::<Vec<_>>(), qq);
        assert!(crit_monotone_halfplane(&dec, qq).unwrap().satisfied);

        let mut b: Vec<f64> = (0..=64).map(|n| if n == 0 { 0.0 } else { 2.0 - 1.0 / n as f64 }).collect();
        b[1] = 1.0;
        let inc = coefficients_from_plain(&b, qq);
        let r = crit_monotone_halfplane(&inc, qq).unwrap();
        assert!(r.satisfied);
        assert_relative_eq!(r.statistic, 1.0 - 1.0 / 64.0, max_relative = 1e-12);

        let mut b: Vec<f64> = (0..=64)
            .map(|n| 1.0 + if n % 2 == 0 { 1.0 } else { -1.0 } / n.max(1) as f64)
            .collect();
        b[0] = 0.0;
        b[1] = 1.0;
        let r = crit_monotone_halfplane(&coefficients_from_plain(&b, qq), qq).unwrap();
        assert!(!r.satisfied);
        // B_2 = 1.5 starts upwards, B_3 = 2/3 breaks it
        assert_eq!(r.first_violation, Some(3));
    }

    #[test]
    fn decreasing_chain_telescopes() {
        let b: Vec<f64> = (0..=40).map(|n| if n == 0 { 0.0 } else { 1.0 / (n * n) as f64 }).collect();
        let a = coefficients_from_plain(&b, q(0.6));
        let s = CriterionSequence::plain(&a, q(0.6));
        let sum: f64 = (1..40).map(|n| (s.values[n + 1] - s.values[n]).abs()).sum();
        assert_relative_eq!(sum, s.values[1] - s.values[40], max_relative = 1e-14);
        let r = crit_sum_halfplane(&a, q(0.6)).unwrap();
        assert_relative_eq!(r.statistic, 1.0 - 1.0 / 1600.0, max_relative = 1e-13);
    }

    #[test]
    fn koebe_cayley_at_classical_limit() {
        let a: Vec<f64> = (0..=64).map(|n| if n == 0 { 0.0 } else { 1.0 }).collect();
        let r = crit_koebe(&a, q(1.0), Variant::Summable).unwrap();
        assert!(r.satisfied);
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.certifies, CatalogId::KoebePlus);
        let s = CriterionSequence::consecutive_diff(&a, q(1.0));
        assert!(s.values.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn koebe_backsolved_harmonic_chain() {
        for qv in [0.3, 0.7] {
            let b: Vec<f64> = (0..64).map(|n| 1.0 / (n + 1) as f64).collect();
            let a = coefficients_from_consecutive_diff(&b, q(qv));
            assert_eq!(a.len(), 65);
            assert_eq!(a[1], 1.0);
            let s = CriterionSequence::consecutive_diff(&a, q(qv));
            for (x, y) in s.values.iter().zip(&b) {
                assert!((x - y).abs() < 1e-13);
            }
            assert!(crit_koebe(&a, q(qv), Variant::Chain).unwrap().satisfied);
            assert!(crit_koebe(&a, q(qv), Variant::Summable).unwrap().satisfied);
        }
    }

    #[test]
    fn koebe_alternating_diverges() {
        let a: Vec<f64> = (0..=64)
            .map(|n| if n == 0 { 0.0 } else if n % 2 == 1 { 1.0 } else { -1.0 })
            .collect();
        let s = CriterionSequence::consecutive_diff(&a, q(1.0));
        for n in 0..64 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(s.values[n], sign * (2 * n + 1) as f64);
        }
        let r = crit_koebe(&a, q(1.0), Variant::Summable).unwrap();
        assert!(!r.satisfied);
        // |B_n - B_{n-1}| = 4n
        let oracle: f64 = (1..64).map(|n| 4.0 * n as f64).sum();
        assert_eq!(r.statistic, oracle);
    }

    #[test]
    fn odd_lemniscate_examples() {
        let a: Vec<f64> = (0..=64).map(|n| (n % 2) as f64).collect();
        let r = crit_odd_lemniscate(&a, q(1.0), Variant::Summable).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.statistic, 2.0 * 31.0);

        let qq = q(0.5);
        let b: Vec<f64> = (0..=64).map(|n| if n % 2 == 1 { 1.0 / n as f64 } else { 0.0 }).collect();
        let a = coefficients_from_plain(&b, qq);
        assert!(crit_odd_lemniscate(&a, qq, Variant::Chain).unwrap().satisfied);
        assert!(crit_odd_lemniscate(&a, qq, Variant::Summable).unwrap().satisfied);

        let z: Vec<f64> = (0..=64).map(|n| (n == 1) as u8 as f64).collect();
        let r = crit_odd_lemniscate(&z, qq, Variant::Summable).unwrap();
        assert!(r.satisfied);
        assert_eq!(r.statistic, 1.0);

        let even = vec![0.0, 1.0, 0.5, 0.0];
        assert_eq!(
            crit_odd_lemniscate(&even, qq, Variant::Summable).unwrap_err(),
            Error::NotOdd(2)
        );
    }

    #[test]
    fn two_step_examples() {
        let qq = q(0.5);
        let z: Vec<f64> = (0..=64).map(|n| (n == 1) as u8 as f64).collect();
        let r = crit_two_step(&z, qq, Variant::Summable).unwrap();
        assert!(r.satisfied);
        assert_eq!(r.statistic, 1.0);

        let b: Vec<f64> = (0..=64).map(|n| (n % 2) as f64).collect();
        let r = crit_two_step(&coefficients_from_plain(&b, qq), qq, Variant::Summable).unwrap();
        assert!(r.satisfied);
        assert!(r.statistic < 1e-14);

        let ones: Vec<f64> = (0..=64).map(|n| if n == 0 { 0.0 } else { 1.0 }).collect();
        let r = crit_two_step(&ones, q(1.0), Variant::Summable).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.statistic, 2.0 * 63.0);
    }

    #[test]
    fn two_step_pair_chain() {
        // pair sums P_n = B_{n-1} + B_n = 1/(n-1), decreasing from 1
        let mut b = vec![0.0, 1.0];
        for n in 2..=64 {
            b.push(1.0 / (n - 1) as f64 - b[n - 1]);
        }
        let qq = q(0.4);
        let r = crit_two_step(&coefficients_from_plain(&b, qq), qq, Variant::Chain).unwrap();
        assert!(r.satisfied, "{r:?}");
    }

    #[test]
    fn hexic_examples() {
        let qq = q(0.5);
        // f = z: terms |B_0 - B_1 + B_2| = 1 and |B_1 - B_2 + B_3| = 1
        let z: Vec<f64> = (0..=64).map(|n| (n == 1) as u8 as f64).collect();
        let r = crit_hexic(&z, qq, Variant::Summable).unwrap();
        assert_eq!(r.statistic, 2.0);
        assert!(!r.satisfied);
        assert_eq!(r.first_violation, Some(2));

        let b: Vec<f64> = (0..=64).map(|n| CatalogId::HexicPlus.coefficient(n)).collect();
        let r = crit_hexic(&coefficients_from_plain(&b, qq), qq, Variant::Summable).unwrap();
        assert!(r.satisfied);
        assert!(r.statistic < 1e-13);
        assert_eq!(r.certifies, CatalogId::HexicPlus);

        let ones: Vec<f64> = (0..=64).map(|n| if n == 0 { 0.0 } else { 1.0 }).collect();
        let r = crit_hexic(&ones, q(1.0), Variant::Summable).unwrap();
        assert!(!r.satisfied);
        // |(n-1) - n + (n+1)| = n
        assert_eq!(r.statistic, (1..64).map(|n| n as f64).sum::<f64>());
    }

    #[test]
    fn hexic_chain_differences_are_summands() {
        let b: Vec<f64> = (0..20).map(|n| ((n * 7) % 5) as f64 - 2.0).collect();
        let chain = hexic_chain(&b);
        assert_eq!(chain[0], (1, b[2] - b[1]));
        assert_eq!(chain[1], (2, b[3]));
        assert_eq!(chain[2].1, b[2] + b[4]);
        assert_eq!(chain[3].1, b[2] + b[3] + b[5]);
        for w in chain.windows(2) {
            let n = w[1].0;
            let summand = b[n - 1] - b[n] + b[n + 1];
            assert!((w[1].1 - w[0].1 - summand).abs() < 1e-12);
        }
    }

    #[test]
    fn hexic_chain_backsolved() {
        // T_n = -(1 - 2^-n): B_1 = 1, B_2 = 1 + T_1, B_{n+1} = T_n - (B_2 + ... + B_{n-1})
        let order = 64;
        let t = |n: usize| -(1.0 - 0.5f64.powi(n as i32));
        let mut b = vec![0.0, 1.0, 1.0 + t(1)];
        let mut prefix = 0.0;
        for n in 2..order {
            if n >= 3 {
                prefix += b[n - 1];
            }
            b.push(t(n) - prefix);
        }
        let qq = q(0.5);
        let a = coefficients_from_plain(&b, qq);
        let chain = crit_hexic(&a, qq, Variant::Chain).unwrap();
        assert!(chain.satisfied, "{chain:?}");
        let sum = crit_hexic(&a, qq, Variant::Summable).unwrap();
        assert!(sum.satisfied);
        assert!((chain.statistic - sum.statistic).abs() < 1e-12);
    }

    #[test]
    fn rejects_unnormalized() {
        let a = vec![0.0, 2.0, 1.0];
        assert_eq!(crit_sum_halfplane(&a, q(0.5)).unwrap_err(), Error::NotNormalized);
        assert!(crit_sum_halfplane(&[0.0, 1.0], q(0.5)).is_err());
    }

    #[test]
    fn classical_reduction_is_bit_identical() {
        let a: Vec<f64> = (0..=64)
            .map(|n| if n == 0 { 0.0 } else { 1.0 / (n as f64).powf(1.5) })
            .collect();
        let b = classical_b(&a);
        for c in Criterion::ALL {
            if c.requires_odd() {
                continue;
            }
            let via_q = c.evaluate(&a, q(1.0)).unwrap();
            let seq = match c.rule() {
                SequenceRule::Plain => b.clone(),
                SequenceRule::ConsecutiveDiff => b.windows(2).map(|w| w[1] - w[0]).collect(),
            };
            let direct = c.evaluate_sequence(&seq);
            assert_eq!(via_q.statistic.to_bits(), direct.statistic.to_bits(), "{c}");
            assert_eq!(via_q.satisfied, direct.satisfied);
        }
    }

    #[test]
    fn criterion_tags_parse() {
        for c in Criterion::ALL {
            assert_eq!(c.tag().parse::<Criterion>().unwrap(), c);
        }
        assert!("nope".parse::<Criterion>().is_err());
    }

    proptest! {
        #[test]
        fn rules_are_linear(
            xs in proptest::collection::vec(-3.0f64..3.0, 10),
            ys in proptest::collection::vec(-3.0f64..3.0, 10),
            t in 0.0f64..1.0,
            qv in 0.05f64..1.0,
        ) {
            let qq = q(qv);
            let mix: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| t * x + (1.0 - t) * y).collect();
            for rule in [SequenceRule::Plain, SequenceRule::ConsecutiveDiff] {
                let bx = CriterionSequence::build(rule, &xs, qq).values;
                let by = CriterionSequence::build(rule, &ys, qq).values;
                let bm = CriterionSequence::build(rule, &mix, qq).values;
                for i in 0..bm.len() {
                    let expect = t * bx[i] + (1.0 - t) * by[i];
                    prop_assert!((bm[i] - expect).abs() <= 1e-12 * (1.0 + expect.abs()) * 10.0);
                }
            }
        }

        #[test]
        fn plain_backsolve_round_trips(
            tail in proptest::collection::vec(-2.0f64..2.0, 12),
            qv in 0.05f64..1.0,
        ) {
            let mut b = vec![0.0, 1.0];
            b.extend(tail);
            let a = coefficients_from_plain(&b, q(qv));
            let again = CriterionSequence::plain(&a, q(qv)).values;
            for (x, y) in again.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-13);
            }
        }
    }
}
