//! Truncated complex power series `f(z) = a_0 + a_1 z + ... + a_N z^N`.
//!
//! Binary operations truncate to the smaller order. The q-bracket
//! `[n]_q = (1 - q^n)/(1 - q)` is always evaluated as the geometric sum
//! `1 + q + ... + q^(n-1)`, so `q = 1` is exact and there is no cancellation
//! near the classical limit.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 64;

/// Smallest admissible deformation parameter; `-2 ln q / (1 - q^n)` blows up
/// as `q -> 0`.
pub const MIN_Q: f64 = 1e-6;

/// Imaginary parts at or below this are treated as zero when a real
/// coefficient sequence is requested.
pub const REAL_TOLERANCE: f64 = 1e-14;

/// The deformation parameter `q`, validated to `1e-6 <= q <= 1`.
///
/// `q = 1` selects the classical limit; operations that are undefined there
/// call [`QParam::require_deformed`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct QParam(f64);

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && (MIN_Q..=1.0).contains(&q) {
            Ok(Self(q))
        } else {
            Err(Error::QOutOfRange(q))
        }
    }

    /// `q = 1`.
    pub const fn classical() -> Self {
        Self(1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }

    /// Returns `q` if it is strictly below one.
    pub fn require_deformed(self) -> Result<f64> {
        if self.is_classical() {
            Err(Error::ClassicalNotAllowed)
        } else {
            Ok(self.0)
        }
    }

    /// `[n]_q = 1 + q + ... + q^(n-1)`, with `[0]_q = 0`.
    pub fn bracket(self, n: usize) -> f64 {
        // Horner form of the geometric sum.
        (0..n).fold(0.0, |acc, _| 1.0 + self.0 * acc)
    }

    /// `[0]_q, [1]_q, ..., [len-1]_q` in one pass.
    pub fn brackets(self, len: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(len);
        let mut acc = 0.0;
        for _ in 0..len {
            out.push(acc);
            acc = 1.0 + self.0 * acc;
        }
        out
    }

    /// `-ln q`, accurate near `q = 1`.
    pub fn neg_ln(self) -> f64 {
        -(-(1.0 - self.0)).ln_1p()
    }
}

impl<'de> Deserialize<'de> for QParam {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let q = f64::deserialize(d)?;
        QParam::new(q).map_err(serde::de::Error::custom)
    }
}

/// Concentric sampling circles inside the unit disk.
///
/// Sample points are `r * exp(2 pi i k / M)` for every radius `r` and
/// `k = 0..M`. The origin is never sampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskGrid {
    radii: Vec<f64>,
    angles_per_circle: usize,
}

impl DiskGrid {
    pub fn new(radii: Vec<f64>, angles_per_circle: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidGrid("no radii".into()));
        }
        if let Some(r) = radii.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            return Err(Error::InvalidGrid(format!("radius {r} is not in (0, 1)")));
        }
        if angles_per_circle == 0 {
            return Err(Error::InvalidGrid("angles_per_circle must be positive".into()));
        }
        Ok(Self {
            radii,
            angles_per_circle,
        })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angles_per_circle(&self) -> usize {
        self.angles_per_circle
    }

    pub fn max_radius(&self) -> f64 {
        self.radii.iter().copied().fold(0.0, f64::max)
    }

    /// Angular spacing between neighbouring samples on a circle.
    pub fn angle_step(&self) -> f64 {
        TAU / self.angles_per_circle as f64
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles_per_circle
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sample `i` in row-major order (radius major, angle minor).
    pub fn point(&self, i: usize) -> Complex64 {
        let r = self.radii[i / self.angles_per_circle];
        let k = i % self.angles_per_circle;
        Complex64::from_polar(r, self.angle_step() * k as f64)
    }

    /// Index into [`DiskGrid::radii`] of sample `i`.
    pub fn radius_index(&self, i: usize) -> usize {
        i / self.angles_per_circle
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }
}

impl Default for DiskGrid {
    fn default() -> Self {
        Self {
            radii: vec![0.5, 0.8, 0.95],
            angles_per_circle: 720,
        }
    }
}

/// Coefficients `a_0 .. a_N` of a power series truncated at order `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::OrderTooSmall(1));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Builds `sum_{n <= order} rule(n) z^n`.
    pub fn from_fn(order: usize, rule: impl FnMut(usize) -> Complex64) -> Self {
        Self {
            coeffs: (0..=order).map(rule).collect(),
        }
    }

    pub fn from_real_fn(order: usize, mut rule: impl FnMut(usize) -> f64) -> Self {
        Self::from_fn(order, |n| Complex64::new(rule(n), 0.0))
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Complex64::new(1.0, 0.0);
        s
    }

    /// The identity function `z`.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^n`; zero above the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// `a_0 = 0` and `a_1 = 1` exactly.
    pub fn is_normalized(&self) -> bool {
        self.coeffs.len() >= 2
            && self.coeffs[0] == Complex64::new(0.0, 0.0)
            && self.coeffs[1] == Complex64::new(1.0, 0.0)
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized)
        }
    }

    /// Real parts of the coefficients, rejecting any imaginary part above
    /// [`REAL_TOLERANCE`].
    pub fn real_coeffs(&self) -> Result<Vec<f64>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(index, c)| {
                if c.im.abs() > REAL_TOLERANCE {
                    Err(Error::ComplexCoefficients { index, imag: c.im })
                } else {
                    Ok(c.re)
                }
            })
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = (order + 1).min(self.coeffs.len());
        Self {
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    /// Horner evaluation at `z`, `|z| <= 1`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        debug_assert!(z.norm() <= 1.0 + 1e-15, "evaluation point outside the closed disk");
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        Self {
            coeffs: (0..n).map(|i| self.coeffs[i] + other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        Self {
            coeffs: (0..n).map(|i| self.coeffs[i] - other.coeffs[i]).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let len = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..len)
            .map(|n| {
                (0..=n)
                    .map(|k| self.coeffs[k] * other.coeffs[n - k])
                    .sum::<Complex64>()
            })
            .collect();
        Self { coeffs }
    }

    /// Multiplies by `z^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        Self::from_fn(self.order(), |n| {
            if n >= k {
                self.coeffs[n - k]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// `exp(u)` via `n E_n = sum_{k=1}^n k u_k E_{n-k}`; requires `u_0 = 0`.
    pub fn exp(&self) -> Result<Self> {
        if self.coeffs[0] != Complex64::new(0.0, 0.0) {
            return Err(Error::NonzeroConstantTerm(self.coeffs[0]));
        }
        let len = self.coeffs.len();
        let weighted: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &u)| u * k as f64)
            .collect();
        let mut out = Vec::with_capacity(len);
        out.push(Complex64::new(1.0, 0.0));
        for n in 1..len {
            let s: Complex64 = (1..=n).map(|k| weighted[k] * out[n - k]).sum();
            out.push(s / n as f64);
        }
        Ok(Self { coeffs: out })
    }

    /// `f(qz)`: `a_n -> a_n q^n`.
    pub fn dilate(&self, q: QParam) -> Self {
        if q.is_classical() {
            return self.clone();
        }
        let mut p = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let c = a * p;
                p *= q.value();
                c
            })
            .collect();
        Self { coeffs }
    }

    /// The q-difference operator `(f(z) - f(qz)) / (z (1 - q))`.
    ///
    /// The coefficient of `z^(n-1)` is `a_n [n]_q`; at `q = 1` this is the
    /// ordinary derivative. The result has order `N - 1`.
    pub fn q_difference(&self, q: QParam) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(0);
        }
        let brackets = q.brackets(self.coeffs.len());
        Self {
            coeffs: (1..self.coeffs.len())
                .map(|n| self.coeffs[n] * brackets[n])
                .collect(),
        }
    }

    /// Ordinary derivative, i.e. the q-difference at `q = 1`.
    pub fn derivative(&self) -> Self {
        self.q_difference(QParam::classical())
    }

    /// Heuristic bound on the discarded tail at radius `r`:
    /// `max |a_n| * r^(N+1) / (1 - r)`.
    pub fn tail_bound(&self, r: f64) -> f64 {
        debug_assert!(r > 0.0 && r < 1.0);
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        max * r.powi(self.coeffs.len() as i32) / (1.0 - r)
    }
}

/// JSON interchange form: `{"name": .., "order": N, "coeffs": [[re, im], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesDocument {
    pub name: String,
    pub order: usize,
    pub coeffs: Vec<[f64; 2]>,
}

impl SeriesDocument {
    pub fn from_series(name: impl Into<String>, series: &TruncatedSeries) -> Self {
        Self {
            name: name.into(),
            order: series.order(),
            coeffs: series.coeffs().iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn to_series(&self) -> Result<TruncatedSeries> {
        if self.coeffs.len() != self.order + 1 {
            return Err(Error::Format(format!(
                "order {} needs {} coefficient pairs, found {}",
                self.order,
                self.order + 1,
                self.coeffs.len()
            )));
        }
        TruncatedSeries::new(
            self.coeffs
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        doc.to_series()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("series documents always serialize")
    }
}
