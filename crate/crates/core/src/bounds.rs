//! Coefficient bounds for `K_q` and `S*_q`, their classical limits, and the
//! series identities tying the bound sequences to Heine functions.
//!
//! Every `(1 - q)/(1 - q^n)` factor is written as `1/[n]_q` so the formulas
//! stay finite at `q = 1`, where they reduce to the classical bounds.
//! Indices `n = 1` return exactly 1 (normalization); `n = 0` panics.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::special::{heine_phi, kq_coeffs_recurrence, psi_series, HypergeometricSpec};
use crate::{CatalogId, Complex64, Error, QParam, Result, TruncatedSeries};

/// Distance from 1 used for the classical-limit column.
pub const DEFAULT_CLASSICAL_EPSILON: f64 = 1e-6;

/// Largest index a [`BoundTable`] will produce.
pub const MAX_TABLE_N: usize = 4096;

/// Absolute slack (scaled by `max(1, |left|)`) before two identity
/// coefficients count as different.
pub const IDENTITY_MISMATCH_TOL: f64 = 1e-10;

fn check_index(n: usize) {
    assert!(n >= 1, "coefficient bounds are indexed from n = 1");
}

/// `|a_n| <= (n + n(n-1)(1+q)/2) / [n]_q` for `f` in `K_q`.
pub fn kq_bound(n: usize, q: QParam) -> f64 {
    check_index(n);
    let (nf, qv) = (n as f64, q.value());
    (nf + nf * (nf - 1.0) * (1.0 + qv) / 2.0) / q.bracket(n)
}

/// Bound on `|a_n|` when `f` is in `K_q` with respect to the reference `g`.
pub fn kq_bound_for_reference(n: usize, q: QParam, reference: CatalogId) -> Result<f64> {
    check_index(n);
    if n == 1 {
        return match reference {
            CatalogId::Identity
            | CatalogId::CayleyPlus
            | CatalogId::KoebePlus
            | CatalogId::LemniscatePlus
            | CatalogId::HexicPlus => Ok(1.0),
            other => Err(Error::UnsupportedReference(other.tag())),
        };
    }
    let (nf, qv, br) = (n as f64, q.value(), q.bracket(n));
    let numerator = match reference {
        CatalogId::Identity => 1.0 + qv,
        CatalogId::CayleyPlus => nf + qv * (nf - 1.0),
        CatalogId::KoebePlus => return Ok(kq_bound(n, q)),
        CatalogId::LemniscatePlus => match LemniscateCase::of(n) {
            LemniscateCase::Odd => nf * (1.0 + qv) / 2.0 + (1.0 - qv) / 2.0,
            LemniscateCase::Even => (1.0 + qv) * nf / 2.0,
        },
        CatalogId::HexicPlus => match HexicCase::of(n) {
            HexicCase::BeforeMultiple => (2.0 - qv) / 3.0 + 2.0 * nf * (1.0 + qv) / 3.0,
            HexicCase::Multiple => (1.0 + qv) * 2.0 * nf / 3.0,
            HexicCase::AfterMultiple => 2.0 * nf * (1.0 + qv) / 3.0 + (1.0 - 2.0 * qv) / 3.0,
        },
        other => return Err(Error::UnsupportedReference(other.tag())),
    };
    Ok(numerator / br)
}

/// Parity split of the lemniscate bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemniscateCase {
    Odd,
    Even,
}

impl LemniscateCase {
    pub fn of(n: usize) -> Self {
        if n % 2 == 1 {
            LemniscateCase::Odd
        } else {
            LemniscateCase::Even
        }
    }
}

/// Residue split of the hexic bound: `n = 3m - 1`, `3m`, `3m + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HexicCase {
    BeforeMultiple,
    Multiple,
    AfterMultiple,
}

impl HexicCase {
    pub fn of(n: usize) -> Self {
        match n % 3 {
            2 => HexicCase::BeforeMultiple,
            0 => HexicCase::Multiple,
            _ => HexicCase::AfterMultiple,
        }
    }
}

/// `|a_n| <= (1+q)/(q [n-1]) * prod_{k=2}^{n-1} (1 + (1+q)/(q [k-1]))` for
/// `f` in `S*_q`.
pub fn sq_product_bound(n: usize, q: QParam) -> f64 {
    check_index(n);
    if n == 1 {
        return 1.0;
    }
    let qv = q.value();
    let br = q.brackets(n);
    let mut value = (1.0 + qv) / (qv * br[n - 1]);
    for b in &br[1..n - 1] {
        value *= 1.0 + (1.0 + qv) / (qv * b);
    }
    value
}

/// The sharp `S*_q` bound `c_n`, the coefficients of `k_q`.
pub fn sq_cn_bound(n: usize, q: QParam) -> Result<f64> {
    check_index(n);
    Ok(kq_coeffs_recurrence(q, n)?[n])
}

/// Which bound a [`BoundTable`] tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundClass {
    KqGeneral,
    KqIdentity,
    KqCayley,
    KqKoebe,
    KqLemniscate,
    KqHexic,
    SqProduct,
    SqCn,
}

impl BoundClass {
    pub const ALL: [BoundClass; 8] = [
        BoundClass::KqGeneral,
        BoundClass::KqIdentity,
        BoundClass::KqCayley,
        BoundClass::KqKoebe,
        BoundClass::KqLemniscate,
        BoundClass::KqHexic,
        BoundClass::SqProduct,
        BoundClass::SqCn,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            BoundClass::KqGeneral => "kq_general",
            BoundClass::KqIdentity => "kq_identity",
            BoundClass::KqCayley => "kq_cayley",
            BoundClass::KqKoebe => "kq_koebe",
            BoundClass::KqLemniscate => "kq_lemniscate",
            BoundClass::KqHexic => "kq_hexic",
            BoundClass::SqProduct => "sq_product",
            BoundClass::SqCn => "sq_cn",
        }
    }

    /// Reference function for the `K_q` corollary classes.
    pub fn reference(self) -> Option<CatalogId> {
        match self {
            BoundClass::KqIdentity => Some(CatalogId::Identity),
            BoundClass::KqCayley => Some(CatalogId::CayleyPlus),
            BoundClass::KqKoebe => Some(CatalogId::KoebePlus),
            BoundClass::KqLemniscate => Some(CatalogId::LemniscatePlus),
            BoundClass::KqHexic => Some(CatalogId::HexicPlus),
            _ => None,
        }
    }

    /// Values for `n = 1..=hi` at `q`.
    fn values(self, q: QParam, hi: usize) -> Result<Vec<f64>> {
        if self == BoundClass::SqCn {
            return Ok(kq_coeffs_recurrence(q, hi)?.split_off(1));
        }
        (1..=hi)
            .map(|n| match self {
                BoundClass::KqGeneral => Ok(kq_bound(n, q)),
                BoundClass::SqProduct => Ok(sq_product_bound(n, q)),
                other => kq_bound_for_reference(n, q, other.reference().expect("corollary class")),
            })
            .collect()
    }
}

impl fmt::Display for BoundClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for BoundClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        BoundClass::ALL
            .into_iter()
            .find(|c| c.tag() == s)
            .ok_or_else(|| format!("unknown bound class `{s}`"))
    }
}

/// The classical (`q = 1`) bound each class tends to.
pub fn classical_bound(class: BoundClass, n: usize) -> f64 {
    check_index(n);
    let nf = n as f64;
    if n == 1 {
        return 1.0;
    }
    match class {
        BoundClass::KqGeneral | BoundClass::KqKoebe | BoundClass::SqProduct | BoundClass::SqCn => nf,
        BoundClass::KqIdentity => 2.0 / nf,
        BoundClass::KqCayley => (2.0 * nf - 1.0) / nf,
        BoundClass::KqLemniscate => 1.0,
        BoundClass::KqHexic => match HexicCase::of(n) {
            HexicCase::BeforeMultiple => (4.0 * nf + 1.0) / (3.0 * nf),
            HexicCase::Multiple => 4.0 / 3.0,
            HexicCase::AfterMultiple => (4.0 * nf - 1.0) / (3.0 * nf),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub n: usize,
    pub value: f64,
    pub classical_limit: f64,
}

/// A bound sequence over an index range, with the same formula evaluated at
/// `q = 1 - epsilon` alongside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundTable {
    pub class: BoundClass,
    pub q: QParam,
    pub epsilon: f64,
    pub rows: Vec<BoundRow>,
}

impl BoundTable {
    pub fn new(class: BoundClass, q: QParam, lo: usize, hi: usize) -> Result<Self> {
        Self::with_epsilon(class, q, lo, hi, DEFAULT_CLASSICAL_EPSILON)
    }

    pub fn with_epsilon(
        class: BoundClass,
        q: QParam,
        lo: usize,
        hi: usize,
        epsilon: f64,
    ) -> Result<Self> {
        if lo == 0 || lo > hi || hi > MAX_TABLE_N {
            return Err(Error::IndexOutOfRange {
                index: if lo == 0 { 0 } else { hi },
                min: 1,
                max: MAX_TABLE_N,
            });
        }
        let near_one = QParam::new(1.0 - epsilon)?;
        let values = class.values(q, hi)?;
        let limits = class.values(near_one, hi)?;
        let rows = (lo..=hi)
            .map(|n| BoundRow {
                n,
                value: if n == 1 { 1.0 } else { values[n - 1] },
                classical_limit: if n == 1 { 1.0 } else { limits[n - 1] },
            })
            .collect();
        Ok(Self {
            class,
            q,
            epsilon,
            rows,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value,classical_limit\n");
        for r in &self.rows {
            writeln!(out, "{},{:.6},{:.6}", r.n, r.value, r.classical_limit).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bound table serializes")
    }
}

/// Coefficientwise comparison of two series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub order: usize,
    pub max_deviation: f64,
    /// First index whose coefficients differ beyond [`IDENTITY_MISMATCH_TOL`].
    pub first_mismatch: Option<usize>,
    pub left_at_mismatch: Option<f64>,
    pub right_at_mismatch: Option<f64>,
}

impl IdentityReport {
    fn compare(name: &str, left: &[f64], right: &[f64]) -> Self {
        let order = left.len().min(right.len()) - 1;
        let mut max_deviation: f64 = 0.0;
        let mut first_mismatch = None;
        for n in 0..=order {
            let d = (left[n] - right[n]).abs();
            max_deviation = max_deviation.max(d);
            if first_mismatch.is_none() && d > IDENTITY_MISMATCH_TOL * left[n].abs().max(1.0) {
                first_mismatch = Some(n);
            }
        }
        Self {
            name: name.to_string(),
            order,
            max_deviation,
            first_mismatch,
            left_at_mismatch: first_mismatch.map(|n| left[n]),
            right_at_mismatch: first_mismatch.map(|n| right[n]),
        }
    }

    pub fn holds(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn re(series: &TruncatedSeries) -> Vec<f64> {
    series.coeffs().iter().map(|c| c.re).collect()
}

/// `sum kq_bound(n) z^n` against `(1+q)/2 z^2 Psi'' + z Psi'` through order `order`.
pub fn verify_series1_identity(q: QParam, order: usize) -> Result<IdentityReport> {
    q.require_deformed()?;
    let left: Vec<f64> = (0..=order)
        .map(|n| if n == 0 { 0.0 } else { kq_bound(n, q) })
        .collect();
    let psi = psi_series(q, order)?;
    let d1 = psi.derivative();
    let d2 = d1.derivative();
    let half = real((1.0 + q.value()) / 2.0);
    let right = d2.shift(2).scale(half).add(&d1.shift(1));
    Ok(IdentityReport::compare("series1", &left, &re(&right)))
}

/// The three Heine-function forms of the identity and Cayley bound series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryIdentities {
    /// `z + sum (1+q)/[n] z^n` vs `(1+q) z Phi[q, q; q^2; q, z] - q z`.
    pub identity_phi: IdentityReport,
    /// the same left side vs `z + z^2 Phi[q^2, q^2; q^3; q^2, z]`.
    pub identity_phi_squared_base: IdentityReport,
    /// `z + sum (n + q(n-1))/[n] z^n` vs `(1+q) z Psi' - q Psi`.
    pub cayley_psi: IdentityReport,
}

pub fn verify_identity_corollaries(q: QParam, order: usize) -> Result<CorollaryIdentities> {
    let qv = q.require_deformed()?;
    if order < 2 {
        return Err(Error::OrderTooSmall(2));
    }
    let identity_left: Vec<f64> = (0..=order)
        .map(|n| if n == 0 { 0.0 } else { kq_bound_for_reference(n, q, CatalogId::Identity).unwrap() })
        .collect();

    let phi = heine_phi(&HypergeometricSpec::real(qv, qv, qv * qv, q, order - 1)?);
    let z = TruncatedSeries::identity(order);
    let form_i = phi
        .shift(1)
        .scale(real(1.0 + qv))
        .sub(&z.scale(real(qv)));

    let q2 = QParam::new(qv * qv)?;
    let phi2 = heine_phi(&HypergeometricSpec::real(qv * qv, qv * qv, qv * qv * qv, q2, order - 2)?);
    let form_ii = phi2.shift(2).add(&z);

    let cayley_left: Vec<f64> = (0..=order)
        .map(|n| if n == 0 { 0.0 } else { kq_bound_for_reference(n, q, CatalogId::CayleyPlus).unwrap() })
        .collect();
    let psi = psi_series(q, order)?;
    let form_iii = psi
        .derivative()
        .shift(1)
        .scale(real(1.0 + qv))
        .sub(&psi.scale(real(qv)));

    Ok(CorollaryIdentities {
        identity_phi: IdentityReport::compare("identity-phi", &identity_left, &re(&form_i)),
        identity_phi_squared_base: IdentityReport::compare(
            "identity-phi-squared-base",
            &identity_left,
            &re(&form_ii),
        ),
        cayley_psi: IdentityReport::compare("cayley-psi", &cayley_left, &re(&form_iii)),
    })
}

/// Ratio-test radius of convergence: the mean of `A_n / A_{n+1}` over the
/// last 20 ratios available in `a`.
pub fn radius_estimate(a: &[f64]) -> Result<f64> {
    const WINDOW: usize = 20;
    if a.len() < WINDOW + 1 {
        return Err(Error::OrderTooSmall(WINDOW + 1));
    }
    let start = a.len() - WINDOW - 1;
    if let Some(n) = (start..a.len()).find(|&n| a[n].is_nan() || a[n] <= 0.0) {
        return Err(Error::RadiusWindow(n));
    }
    let sum: f64 = (start..a.len() - 1).map(|n| a[n] / a[n + 1]).sum();
    Ok(sum / WINDOW as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    /// Bounds written with the original `(1 - q)/(1 - q^n)` factor.
    fn raw_factor(n: usize, qv: f64) -> f64 {
        (1.0 - qv) / (1.0 - qv.powi(n as i32))
    }

    #[test]
    fn kq_bound_examples() {
        assert_relative_eq!(kq_bound(2, q(0.5)), 7.0 / 3.0, max_relative = 1e-15);
        for n in 1..=30 {
            assert_eq!(kq_bound(n, QParam::classical()), n as f64);
            assert_relative_eq!(kq_bound(n, q(1.0 - 1e-8)), n as f64, max_relative = 1e-6);
        }
        assert_relative_eq!(kq_bound(2, q(1e-6)), 3.0, max_relative = 1e-5);
        for n in 2..20 {
            let nf = n as f64;
            let raw = raw_factor(n, 0.3) * (nf + nf * (nf - 1.0) * 1.3 / 2.0);
            assert_relative_eq!(kq_bound(n, q(0.3)), raw, max_relative = 1e-13);
        }
    }

    #[test]
    fn reference_bound_examples() {
        for qv in [0.2, 0.5, 0.9] {
            assert_relative_eq!(
                kq_bound_for_reference(2, q(qv), CatalogId::Identity).unwrap(),
                1.0,
                max_relative = 1e-15
            );
        }
        assert_relative_eq!(
            kq_bound_for_reference(2, q(0.5), CatalogId::HexicPlus).unwrap(),
            5.0 / 3.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            kq_bound_for_reference(3, q(0.5), CatalogId::LemniscatePlus).unwrap(),
            10.0 / 7.0,
            max_relative = 1e-15
        );
        assert_eq!(
            kq_bound_for_reference(3, q(0.5), CatalogId::KoebePlus).unwrap(),
            kq_bound(3, q(0.5))
        );
        assert_eq!(
            kq_bound_for_reference(3, q(0.5), CatalogId::CayleyMinus).unwrap_err(),
            Error::UnsupportedReference("cayley_minus")
        );
    }

    #[test]
    fn reference_bounds_match_raw_forms() {
        let qv: f64 = 0.6;
        for n in 2..30 {
            let nf = n as f64;
            let f = raw_factor(n, qv);
            let even_lemniscate = (1.0 - qv * qv) / (1.0 - qv.powi(n as i32)) * nf / 2.0;
            let cases = [
                (CatalogId::Identity, (1.0 - qv * qv) / (1.0 - qv.powi(n as i32))),
                (CatalogId::CayleyPlus, f * (nf + qv * (nf - 1.0))),
                (
                    CatalogId::LemniscatePlus,
                    if n % 2 == 1 {
                        f * (nf / 2.0 * (1.0 + qv) + (1.0 - qv) / 2.0)
                    } else {
                        even_lemniscate
                    },
                ),
                (
                    CatalogId::HexicPlus,
                    match n % 3 {
                        2 => f * ((2.0 - qv) / 3.0 + 2.0 * nf / 3.0 * (1.0 + qv)),
                        0 => (1.0 - qv * qv) / (1.0 - qv.powi(n as i32)) * 2.0 * nf / 3.0,
                        _ => f * (2.0 * nf / 3.0 * (1.0 + qv) + (1.0 - 2.0 * qv) / 3.0),
                    },
                ),
            ];
            for (id, raw) in cases {
                let got = kq_bound_for_reference(n, q(qv), id).unwrap();
                assert_relative_eq!(got, raw, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn case_splits_partition() {
        for n in 1..=300 {
            let lem = [LemniscateCase::Odd, LemniscateCase::Even]
                .iter()
                .filter(|c| **c == LemniscateCase::of(n))
                .count();
            assert_eq!(lem, 1);
            let forms = [
                (HexicCase::BeforeMultiple, (n + 1) % 3 == 0),
                (HexicCase::Multiple, n % 3 == 0),
                (HexicCase::AfterMultiple, n >= 1 && (n - 1) % 3 == 0),
            ];
            let fired: Vec<HexicCase> = forms.iter().filter(|f| f.1).map(|f| f.0).collect();
            assert_eq!(fired, vec![HexicCase::of(n)], "n = {n}");
        }
    }

    #[test]
    fn sq_product_examples() {
        assert_relative_eq!(sq_product_bound(2, q(0.5)), 3.0, max_relative = 1e-15);
        assert_relative_eq!(sq_product_bound(3, q(0.5)), 8.0, max_relative = 1e-15);
        let qv: f64 = 0.5;
        for n in 2..15 {
            let mut raw = (1.0 - qv * qv) / (qv - qv.powi(n as i32));
            for k in 2..n {
                raw *= 1.0 + (1.0 - qv * qv) / (qv - qv.powi(k as i32));
            }
            assert_relative_eq!(sq_product_bound(n, q(qv)), raw, max_relative = 1e-13);
        }
    }

    #[test]
    fn sq_cn_examples() {
        assert_eq!(sq_cn_bound(1, q(0.5)).unwrap(), 1.0);
        assert_relative_eq!(sq_cn_bound(2, q(0.5)).unwrap(), 4.0 * 2f64.ln(), max_relative = 1e-14);
        assert!((sq_cn_bound(3, q(0.5)).unwrap() - 5.69200).abs() < 5e-5);
        assert!(sq_cn_bound(3, QParam::classical()).is_err());
    }

    #[test]
    fn table_shape_and_csv() {
        let t = BoundTable::new(BoundClass::KqGeneral, q(0.5), 1, 10).unwrap();
        assert_eq!(t.rows.len(), 10);
        assert_eq!(t.rows[0].value, 1.0);
        assert_eq!(t.rows[0].classical_limit, 1.0);
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n,value,classical_limit"));
        assert!(lines.next().unwrap().starts_with("1,1.000000,"));
        assert!(lines.next().unwrap().starts_with("2,2.333333,"));
        for class in BoundClass::ALL {
            let t = BoundTable::new(class, q(0.7), 2, 40).unwrap();
            assert!(t.rows.iter().all(|r| r.value > 0.0 && r.value.is_finite()), "{class}");
            assert_eq!(class.tag().parse::<BoundClass>().unwrap(), class);
        }
        assert!(BoundTable::new(BoundClass::KqGeneral, q(0.5), 0, 5).is_err());
        assert!(BoundTable::new(BoundClass::KqGeneral, q(0.5), 6, 5).is_err());
    }

    #[test]
    fn classical_column_tracks_classical_bound() {
        for class in BoundClass::ALL {
            let t = BoundTable::new(class, q(0.5), 1, 20).unwrap();
            for r in &t.rows {
                let c = classical_bound(class, r.n);
                assert!((r.classical_limit - c).abs() <= 1e-3 * c, "{class} n={}", r.n);
            }
        }
    }

    #[test]
    fn series1_identity() {
        let r = verify_series1_identity(q(0.5), 64).unwrap();
        assert!(r.max_deviation <= 1e-12, "{r:?}");
        assert!(r.holds());
        let r = verify_series1_identity(q(0.9), 64).unwrap();
        assert!(r.max_deviation <= 1e-11, "{r:?}");
    }

    #[test]
    fn corollary_identities() {
        let c = verify_identity_corollaries(q(0.5), 64).unwrap();
        assert!(c.identity_phi.max_deviation <= 1e-12);
        assert!(c.cayley_psi.max_deviation <= 1e-12);
        let ii = &c.identity_phi_squared_base;
        assert_eq!(ii.first_mismatch, Some(4));
        assert_relative_eq!(ii.left_at_mismatch.unwrap(), 0.8, max_relative = 1e-14);
        // (1 - q^2)(1 - q^4) / ((1 - q^3)(1 - q^5)) at q = 1/2
        let oracle = 0.75 * 0.9375 / (0.875 * 0.96875);
        assert_relative_eq!(ii.right_at_mismatch.unwrap(), oracle, max_relative = 1e-14);
    }

    #[test]
    fn radius_examples() {
        let a: Vec<f64> = (0..=200).map(|n| if n == 0 { 0.0 } else { sq_product_bound(n, q(0.5)) }).collect();
        let r = radius_estimate(&a).unwrap();
        assert!((r - 0.4).abs() <= 0.004, "{r}");
        assert_eq!(radius_estimate(&[1.0; 64]).unwrap(), 1.0);
        let k: Vec<f64> = (1..=200).map(|n| kq_bound(n, q(0.5))).collect();
        assert!((radius_estimate(&k).unwrap() - 1.0).abs() < 0.02);
        let mut z = vec![1.0; 30];
        z[25] = 0.0;
        assert_eq!(radius_estimate(&z).unwrap_err(), Error::RadiusWindow(25));
    }
}
