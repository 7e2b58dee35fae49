//! Named functions as truncated series: q-Pochhammer symbols, Heine's basic
//! hypergeometric series, `Psi(q; z)`, the ordinary and quantum dilogarithm,
//! the extremal function `k_q`, and Friedman's nine integer-coefficient
//! univalent functions.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, QParam, Result, TruncatedSeries};

/// `(a; q)_n = (1 - a)(1 - aq)...(1 - aq^(n-1))`, with `(a; q)_0 = 1`.
pub fn q_pochhammer(a: Complex64, q: QParam, n: usize) -> Complex64 {
    let mut power = 1.0;
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        acc *= Complex64::new(1.0, 0.0) - a * power;
        power *= q.value();
    }
    acc
}

/// Parameters of `Phi[a, b; c; base, z]` truncated at `order`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeometricSpec {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    base: QParam,
    order: usize,
}

impl HypergeometricSpec {
    /// Rejects `base = 1` and any `c * base^n = 1` with `n < order`, which
    /// would zero a denominator `(c; base)_m` for some `m <= order`.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, base: QParam, order: usize) -> Result<Self> {
        base.require_deformed()?;
        let mut power = 1.0;
        for n in 0..order {
            if (Complex64::new(1.0, 0.0) - c * power).norm() == 0.0 {
                return Err(Error::DegenerateDenominator(n + 1));
            }
            power *= base.value();
        }
        Ok(Self { a, b, c, base, order })
    }

    /// Real-parameter convenience constructor.
    pub fn real(a: f64, b: f64, c: f64, base: QParam, order: usize) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), base, order)
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

/// Heine's series `sum (a;q)_n (b;q)_n / ((c;q)_n (q;q)_n) z^n` with
/// `q = spec.base`. Pochhammer products are accumulated one factor per order.
pub fn heine_phi(spec: &HypergeometricSpec) -> TruncatedSeries {
    let one = Complex64::new(1.0, 0.0);
    let q = spec.base.value();
    let mut coeffs = Vec::with_capacity(spec.order + 1);
    let mut term = one;
    let mut power = 1.0;
    coeffs.push(term);
    for _ in 0..spec.order {
        let num = (one - spec.a * power) * (one - spec.b * power);
        let den = (one - spec.c * power) * (1.0 - q * power);
        term = term * num / den;
        coeffs.push(term);
        power *= q;
    }
    TruncatedSeries::new(coeffs).expect("order + 1 coefficients")
}

/// `Psi(q; z) = z Phi[q, q; q^2; q, z]`, whose coefficients are
/// `(1 - q)/(1 - q^n) = 1/[n]_q` for `n >= 1`.
pub fn psi_series(q: QParam, order: usize) -> Result<TruncatedSeries> {
    q.require_deformed()?;
    let br = q.brackets(order + 1);
    Ok(TruncatedSeries::from_real_fn(order, |n| {
        if n == 0 {
            0.0
        } else {
            1.0 / br[n]
        }
    }))
}

/// Quantum dilogarithm `Li_2(z; q) = sum z^n / (n (1 - q^n))`.
pub fn quantum_dilog(q: QParam, order: usize) -> Result<TruncatedSeries> {
    let qv = q.require_deformed()?;
    let br = q.brackets(order + 1);
    Ok(TruncatedSeries::from_real_fn(order, |n| {
        if n == 0 {
            0.0
        } else {
            1.0 / (n as f64 * (1.0 - qv) * br[n])
        }
    }))
}

/// `(1 - q) Li_2(z; q)`, built from `1/(n [n]_q)` so that it is exactly
/// normalized.
pub fn quantum_dilog_scaled(q: QParam, order: usize) -> Result<TruncatedSeries> {
    q.require_deformed()?;
    let br = q.brackets(order + 1);
    Ok(TruncatedSeries::from_real_fn(order, |n| {
        if n == 0 {
            0.0
        } else {
            1.0 / (n as f64 * br[n])
        }
    }))
}

/// `Li_2(z) = sum z^n / n^2`.
pub fn dilog(order: usize) -> TruncatedSeries {
    TruncatedSeries::from_real_fn(order, |n| {
        if n == 0 {
            0.0
        } else {
            1.0 / (n as f64 * n as f64)
        }
    })
}

/// `-2 ln q / (1 - q^n)` for `n >= 1`, index 0 unused.
fn kq_log_weights(q: QParam, len: usize) -> Vec<f64> {
    let two_neg_ln = 2.0 * q.neg_ln();
    let one_minus_q = 1.0 - q.value();
    q.brackets(len)
        .into_iter()
        .enumerate()
        .map(|(n, b)| if n == 0 { 0.0 } else { two_neg_ln / (one_minus_q * b) })
        .collect()
}

/// The extremal function `k_q(z) = z exp[sum (-2 ln q)/(1 - q^n) z^n]`.
pub fn kq_series(q: QParam, order: usize) -> Result<TruncatedSeries> {
    q.require_deformed()?;
    if order == 0 {
        return Ok(TruncatedSeries::zero(0));
    }
    let w = kq_log_weights(q, order);
    let exponent = TruncatedSeries::from_real_fn(order - 1, |n| w[n]);
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(Complex64::new(0.0, 0.0));
    coeffs.extend_from_slice(exponent.exp()?.coeffs());
    TruncatedSeries::new(coeffs)
}

/// Coefficients `c_0 = 0, c_1 = 1, c_2, ..., c_order` of `k_q` from the
/// recurrence obtained by differentiating `k_q` once:
///
/// `(n-1) c_n = L_{n-1} (n-1) + sum_{k=2}^{n-1} L_{k-1} c_{n+1-k} (k-1)`,
/// where `L_m = -2 ln q / (1 - q^m)`.
pub fn kq_coeffs_recurrence(q: QParam, order: usize) -> Result<Vec<f64>> {
    q.require_deformed()?;
    let l = kq_log_weights(q, order.max(1) + 1);
    let mut c = vec![0.0; order + 1];
    if order >= 1 {
        c[1] = 1.0;
    }
    for n in 2..=order {
        let mut acc = l[n - 1] * (n - 1) as f64;
        for k in 2..n {
            acc += l[k - 1] * c[n + 1 - k] * (k - 1) as f64;
        }
        c[n] = acc / (n - 1) as f64;
    }
    Ok(c)
}

/// Friedman's nine univalent functions with rational integer coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogId {
    /// `z`
    Identity,
    /// `z/(1 - z)`
    CayleyPlus,
    /// `z/(1 + z)`
    CayleyMinus,
    /// `z/(1 - z)^2`
    KoebePlus,
    /// `z/(1 + z)^2`
    KoebeMinus,
    /// `z/(1 - z^2)`
    LemniscatePlus,
    /// `z/(1 + z^2)`
    LemniscateMinus,
    /// `z/(1 - z + z^2)`
    HexicPlus,
    /// `z/(1 + z + z^2)`
    HexicMinus,
}

impl CatalogId {
    pub const ALL: [CatalogId; 9] = [
        CatalogId::Identity,
        CatalogId::CayleyPlus,
        CatalogId::CayleyMinus,
        CatalogId::KoebePlus,
        CatalogId::KoebeMinus,
        CatalogId::LemniscatePlus,
        CatalogId::LemniscateMinus,
        CatalogId::HexicPlus,
        CatalogId::HexicMinus,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            CatalogId::Identity => "identity",
            CatalogId::CayleyPlus => "cayley_plus",
            CatalogId::CayleyMinus => "cayley_minus",
            CatalogId::KoebePlus => "koebe_plus",
            CatalogId::KoebeMinus => "koebe_minus",
            CatalogId::LemniscatePlus => "lemniscate_plus",
            CatalogId::LemniscateMinus => "lemniscate_minus",
            CatalogId::HexicPlus => "hexic_plus",
            CatalogId::HexicMinus => "hexic_minus",
        }
    }

    /// Coefficient `a_n` from the closed-form rule.
    pub fn coefficient(self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let alt = if n % 2 == 1 { 1.0 } else { -1.0 };
        match self {
            CatalogId::Identity => (n == 1) as u8 as f64,
            CatalogId::CayleyPlus => 1.0,
            CatalogId::CayleyMinus => alt,
            CatalogId::KoebePlus => n as f64,
            CatalogId::KoebeMinus => alt * n as f64,
            CatalogId::LemniscatePlus => (n % 2) as f64,
            CatalogId::LemniscateMinus => match n % 4 {
                1 => 1.0,
                3 => -1.0,
                _ => 0.0,
            },
            CatalogId::HexicPlus => [0.0, 1.0, 1.0, 0.0, -1.0, -1.0][n % 6],
            CatalogId::HexicMinus => [0.0, 1.0, -1.0][n % 3],
        }
    }

    /// Coefficients of the polynomial `p` with `g(z) = z / p(z)`.
    pub fn denominator(self) -> Vec<f64> {
        match self {
            CatalogId::Identity => vec![1.0],
            CatalogId::CayleyPlus => vec![1.0, -1.0],
            CatalogId::CayleyMinus => vec![1.0, 1.0],
            CatalogId::KoebePlus => vec![1.0, -2.0, 1.0],
            CatalogId::KoebeMinus => vec![1.0, 2.0, 1.0],
            CatalogId::LemniscatePlus => vec![1.0, 0.0, -1.0],
            CatalogId::LemniscateMinus => vec![1.0, 0.0, 1.0],
            CatalogId::HexicPlus => vec![1.0, -1.0, 1.0],
            CatalogId::HexicMinus => vec![1.0, 1.0, 1.0],
        }
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for CatalogId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CatalogId::ALL
            .into_iter()
            .find(|id| id.tag() == s)
            .ok_or_else(|| Error::UnknownCatalogId(s.to_string()))
    }
}

pub fn friedman_catalog(id: CatalogId, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_real_fn(order, |n| id.coefficient(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    #[test]
    fn pochhammer_examples() {
        let a = Complex64::new(0.3, 0.2);
        assert_eq!(q_pochhammer(a, q(0.5), 0), Complex64::new(1.0, 0.0));
        assert_relative_eq!(q_pochhammer(0.5.into(), q(0.5), 2).re, 0.375);
        for n in 0..10 {
            assert_eq!(q_pochhammer(0.0.into(), q(0.7), n), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn heine_telescoping_case() {
        for qv in [0.2, 0.5, 0.9] {
            let spec = HypergeometricSpec::real(qv, qv, qv * qv, q(qv), 64).unwrap();
            let phi = heine_phi(&spec);
            assert_eq!(phi.coeff(0), Complex64::new(1.0, 0.0));
            for n in 0..=64 {
                let oracle = (1.0 - qv) / (1.0 - qv.powi(n as i32 + 1));
                assert!((phi.coeff(n).re - oracle).abs() <= 1e-14);
            }
        }
        let spec = HypergeometricSpec::real(0.5, 0.5, 0.25, q(0.5), 4).unwrap();
        assert_relative_eq!(heine_phi(&spec).coeff(1).re, 2.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn heine_rejects_vanishing_denominator() {
        // c q^2 = 1 at q = 0.5 means c = 4
        let err = HypergeometricSpec::real(0.1, 0.2, 4.0, q(0.5), 5).unwrap_err();
        assert_eq!(err, Error::DegenerateDenominator(3));
        assert!(HypergeometricSpec::real(0.1, 0.2, 4.0, q(0.5), 2).is_ok());
        assert!(HypergeometricSpec::real(0.1, 0.2, 0.3, q(1.0), 2).is_err());
    }

    #[test]
    fn psi_examples() {
        let p = psi_series(q(0.5), 64).unwrap();
        assert_eq!(p.coeff(0).re, 0.0);
        assert_eq!(p.coeff(1).re, 1.0);
        assert_relative_eq!(p.coeff(2).re, 1.0 / 1.5, max_relative = 1e-15);

        let spec = HypergeometricSpec::real(0.5, 0.5, 0.25, q(0.5), 64).unwrap();
        let zphi = heine_phi(&spec).shift(1);
        for n in 0..=64 {
            assert!((p.coeff(n) - zphi.coeff(n)).norm() <= 1e-14);
        }

        let near = psi_series(q(1.0 - 1e-8), 64).unwrap();
        for n in 1..=64 {
            assert!((near.coeff(n).re - 1.0 / n as f64).abs() <= 1e-6);
        }
        assert!(psi_series(q(1.0), 4).is_err());
    }

    #[test]
    fn quantum_dilog_examples() {
        let li = quantum_dilog(q(0.5), 8).unwrap();
        assert_relative_eq!(li.coeff(1).re, 2.0, max_relative = 1e-15);
        assert_relative_eq!(li.coeff(2).re, 2.0 / 3.0, max_relative = 1e-15);

        let eps: f64 = 1e-6;
        let qe = q((-eps).exp());
        let scaled = quantum_dilog(qe, 64).unwrap().scale(eps.into());
        let plain = dilog(64);
        for n in 1..=64 {
            assert_relative_eq!(scaled.coeff(n).re, plain.coeff(n).re, max_relative = 1e-4);
        }
    }

    #[test]
    fn scaled_dilog_is_normalized_and_matches() {
        for qv in [0.3, 0.5, 0.7] {
            let s = quantum_dilog_scaled(q(qv), 64).unwrap();
            assert!(s.is_normalized());
            let reference = quantum_dilog(q(qv), 64).unwrap().scale((1.0 - qv).into());
            for n in 1..=64 {
                assert_relative_eq!(s.coeff(n).re, reference.coeff(n).re, max_relative = 1e-14);
                // B_n = A_n [n]_q = 1/n
                let b = s.coeff(n).re * q(qv).bracket(n);
                assert!((b - 1.0 / n as f64).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn dilog_examples() {
        let d = dilog(10);
        assert_eq!(d.coeff(1).re, 1.0);
        assert_relative_eq!(d.coeff(10).re, 0.01);
        let big = dilog(10_000);
        let basel = std::f64::consts::PI.powi(2) / 6.0;
        let partial: f64 = big.coeffs().iter().map(|c| c.re).sum();
        assert!((partial - basel).abs() < 1e-4);
    }

    #[test]
    fn kq_low_order_coefficients() {
        let kq = kq_series(q(0.5), 10).unwrap();
        assert_eq!(kq.order(), 10);
        assert_eq!(kq.coeff(0).re, 0.0);
        assert_eq!(kq.coeff(1).re, 1.0);
        let ln2 = 2f64.ln();
        assert_relative_eq!(kq.coeff(2).re, 4.0 * ln2, max_relative = 1e-14);
        // c_3 = L/(1 - q^2) + L^2 / (2 (1 - q)^2), L = 2 ln 2
        let l = 2.0 * ln2;
        let c3 = l / 0.75 + l * l / (2.0 * 0.25);
        assert_relative_eq!(kq.coeff(3).re, c3, max_relative = 1e-14);
        assert!((kq.coeff(3).re - 5.69200).abs() < 5e-5);
        for c in kq.coeffs().iter().skip(1) {
            assert!(c.re > 0.0 && c.im == 0.0);
        }
    }

    #[test]
    fn kq_recurrence_matches_series() {
        for qv in [0.1, 0.5, 0.9] {
            let rec = kq_coeffs_recurrence(q(qv), 50).unwrap();
            let ser = kq_series(q(qv), 50).unwrap();
            assert_eq!(rec[1], 1.0);
            assert_relative_eq!(rec[2], -2.0 * qv.ln() / (1.0 - qv), max_relative = 1e-13);
            for (n, c) in rec.iter().enumerate().skip(1) {
                assert_relative_eq!(*c, ser.coeff(n).re, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn catalog_rules() {
        assert_eq!(friedman_catalog(CatalogId::KoebePlus, 8).coeff(5).re, 5.0);
        let hex: Vec<f64> = (1..=6).map(|n| CatalogId::HexicPlus.coefficient(n)).collect();
        assert_eq!(hex, vec![1.0, 1.0, 0.0, -1.0, -1.0, 0.0]);
        let hexm: Vec<f64> = (1..=6).map(|n| CatalogId::HexicMinus.coefficient(n)).collect();
        assert_eq!(hexm, vec![1.0, -1.0, 0.0, 1.0, -1.0, 0.0]);
        assert_eq!(CatalogId::LemniscatePlus.coefficient(4), 0.0);
        assert_eq!(CatalogId::KoebeMinus.coefficient(4), -4.0);
    }

    #[test]
    fn catalog_times_denominator_is_z() {
        for id in CatalogId::ALL {
            let g = friedman_catalog(id, 40);
            let mut den = id.denominator();
            den.resize(41, 0.0);
            let prod = g.mul(&TruncatedSeries::from_real(&den).unwrap());
            assert_eq!(prod, TruncatedSeries::identity(40), "{id}");
            assert!(g.is_normalized());
        }
    }

    #[test]
    fn catalog_tags_round_trip() {
        for id in CatalogId::ALL {
            assert_eq!(id.tag().parse::<CatalogId>().unwrap(), id);
        }
        assert_eq!(
            "koebe".parse::<CatalogId>(),
            Err(Error::UnknownCatalogId("koebe".into()))
        );
    }
}
