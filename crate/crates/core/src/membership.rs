//! Grid verifiers for the classes `S*`, `S*_q`, `K` and `K_q`.
//!
//! "For all z in the unit disk" is realised by sampling the concentric
//! circles of a [`DiskGrid`]. Every checked quantity is either the modulus
//! or the real part of a function analytic in the disk (the reference `g`
//! never vanishes there), so by the maximum principle the worst slack sits on
//! the outermost circle; several radii are sampled anyway. The origin is
//! never sampled: each expression extends continuously there, e.g.
//! `(z/g(z)) (D_q f)(z) -> 1`.
//!
//! A margin is the slack of the inequality at one sample. Verdicts keep the
//! smallest margin, the sample where it occurs, and `tail_note`, the
//! [`TruncatedSeries::tail_bound`] of the inputs at the largest radius. The
//! default tolerance is `10 * tail_note + 1e-9`.
//!
//! The ratio form `|f(qz)/f(z)|` and the Lemma form
//! `|g + f(qz) - f(z)| / |g|` have margins equal to `(1 - q)` times the
//! margins of the corresponding definition, so their tolerance is scaled by
//! the same factor and the verdicts of the two routes coincide.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::{DiskGrid, Error, QParam, Result, TruncatedSeries};

/// Below this modulus a function value counts as zero.
pub const VANISHING_THRESHOLD: f64 = 1e-12;

/// Relative slack used when picking the witness among near-equal minima.
const WITNESS_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CheckConfig {
    pub grid: DiskGrid,
    /// Explicit tolerance; `None` couples it to the truncation tail.
    pub tol: Option<f64>,
}

impl CheckConfig {
    pub fn new(grid: DiskGrid) -> Self {
        Self { grid, tol: None }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = Some(tol);
        self
    }

    pub fn tolerance(&self, tail_note: f64) -> f64 {
        self.tol.unwrap_or(10.0 * tail_note + 1e-9)
    }
}

fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn ser_opt_complex<S: Serializer>(z: &Option<Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    z.map(|z| [z.re, z.im]).serialize(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusMargin {
    pub radius: f64,
    pub worst_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictConfig {
    pub radii: Vec<f64>,
    pub angles: usize,
    pub tol: f64,
}

/// Outcome of a grid check.
///
/// `holds` is `worst_margin >= -tol` for the non-strict disk conditions and
/// `worst_margin > tol` for the strict half-plane conditions, and is forced
/// to `false` when the checked function vanishes at a sample
/// (`inconclusive`, with the point in `vanishing_at`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub worst_margin: f64,
    #[serde(serialize_with = "ser_complex")]
    pub witness: Complex64,
    pub tail_note: f64,
    pub inconclusive: bool,
    #[serde(serialize_with = "ser_opt_complex")]
    pub vanishing_at: Option<Complex64>,
    pub per_radius: Vec<RadiusMargin>,
    pub config: VerdictConfig,
}

impl Verdict {
    pub fn tol(&self) -> f64 {
        self.config.tol
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdicts serialize")
    }
}

/// One margin sample, in polar form for plotting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginSample {
    pub radius: f64,
    pub theta: f64,
    /// `None` where the checked function vanishes.
    pub margin: Option<f64>,
}

enum Sample {
    Margin(f64),
    Vanishing,
    ReferenceVanishes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    NonStrict,
    Strict,
}

/// A membership check bound to its inputs.
#[derive(Debug, Clone, Copy)]
pub enum Check<'a> {
    /// `|(z/f)(D_q f) - 1/(1-q)| <= 1/(1-q)`.
    SqStarDef { f: &'a TruncatedSeries, q: QParam },
    /// `|f(qz)/f(z)| <= 1`.
    SqStarRatio { f: &'a TruncatedSeries, q: QParam },
    /// `|(z/g)(D_q f) - 1/(1-q)| <= 1/(1-q)`.
    Kq {
        f: &'a TruncatedSeries,
        g: &'a TruncatedSeries,
        q: QParam,
    },
    /// `|g + f(qz) - f(z)| / |g| <= 1`.
    KqLemma {
        f: &'a TruncatedSeries,
        g: &'a TruncatedSeries,
        q: QParam,
    },
    /// `Re(z g'/g) > 0`.
    ClassicalStarlike { g: &'a TruncatedSeries },
    /// `Re(z f'/g) > 0`.
    ClassicalCtc {
        f: &'a TruncatedSeries,
        g: &'a TruncatedSeries,
    },
}

struct Prepared<'a> {
    check: Check<'a>,
    /// `D_q f`, or `f'` for the classical checks.
    df: TruncatedSeries,
    center: f64,
}

impl<'a> Check<'a> {
    fn validate(&self) -> Result<()> {
        match *self {
            Check::SqStarDef { f, q } | Check::SqStarRatio { f, q } => {
                q.require_deformed()?;
                f.require_normalized()
            }
            Check::Kq { f, g, q } | Check::KqLemma { f, g, q } => {
                q.require_deformed()?;
                f.require_normalized()?;
                g.require_normalized()
            }
            Check::ClassicalStarlike { g } => g.require_normalized(),
            Check::ClassicalCtc { f, g } => {
                f.require_normalized()?;
                g.require_normalized()
            }
        }
    }

    /// Deformation parameter, `None` for the classical checks.
    pub fn q(&self) -> Option<QParam> {
        match *self {
            Check::SqStarDef { q, .. }
            | Check::SqStarRatio { q, .. }
            | Check::Kq { q, .. }
            | Check::KqLemma { q, .. } => Some(q),
            _ => None,
        }
    }

    fn rule(&self) -> Rule {
        match self {
            Check::ClassicalStarlike { .. } | Check::ClassicalCtc { .. } => Rule::Strict,
            _ => Rule::NonStrict,
        }
    }

    /// Factor applied to the configured tolerance.
    fn tol_scale(&self) -> f64 {
        match *self {
            Check::SqStarRatio { q, .. } | Check::KqLemma { q, .. } => 1.0 - q.value(),
            _ => 1.0,
        }
    }

    fn series(&self) -> Vec<&'a TruncatedSeries> {
        match *self {
            Check::SqStarDef { f, .. } | Check::SqStarRatio { f, .. } => vec![f],
            Check::Kq { f, g, .. } | Check::KqLemma { f, g, .. } | Check::ClassicalCtc { f, g } => {
                vec![f, g]
            }
            Check::ClassicalStarlike { g } => vec![g],
        }
    }

    fn prepare(self) -> Result<Prepared<'a>> {
        self.validate()?;
        let (df, center) = match self {
            Check::SqStarDef { f, q } | Check::Kq { f, q, .. } => {
                (f.q_difference(q), 1.0 / (1.0 - q.value()))
            }
            Check::ClassicalStarlike { g } => (g.derivative(), 0.0),
            Check::ClassicalCtc { f, .. } => (f.derivative(), 0.0),
            Check::SqStarRatio { .. } | Check::KqLemma { .. } => (TruncatedSeries::zero(0), 0.0),
        };
        Ok(Prepared {
            check: self,
            df,
            center,
        })
    }

    pub fn tail_note(&self, grid: &DiskGrid) -> f64 {
        let r = grid.max_radius();
        self.series()
            .into_iter()
            .map(|s| s.tail_bound(r))
            .fold(0.0, f64::max)
    }

    /// Runs the check over `cfg.grid`.
    pub fn run(&self, cfg: &CheckConfig) -> Result<Verdict> {
        let prepared = self.prepare()?;
        let grid = &cfg.grid;
        let samples: Vec<Sample> = (0..grid.len())
            .into_par_iter()
            .map(|i| prepared.sample(grid.point(i)))
            .collect();

        if let Some(i) = samples
            .iter()
            .position(|s| matches!(s, Sample::ReferenceVanishes))
        {
            return Err(Error::ReferenceVanishes(grid.point(i)));
        }

        let tail_note = self.tail_note(grid);
        let tol = cfg.tolerance(tail_note) * self.tol_scale();

        let margins: Vec<Option<f64>> = samples
            .iter()
            .map(|s| match s {
                Sample::Margin(m) => Some(*m),
                _ => None,
            })
            .collect();
        let vanishing_at = margins.iter().position(Option::is_none).map(|i| grid.point(i));

        let worst_margin = margins.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        let slack = WITNESS_TIE * worst_margin.abs().max(1.0);
        let witness_index = margins
            .iter()
            .position(|m| m.is_some_and(|m| m <= worst_margin + slack))
            .unwrap_or(0);

        let per_radius = grid
            .radii()
            .iter()
            .enumerate()
            .map(|(ri, &radius)| RadiusMargin {
                radius,
                worst_margin: margins
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| grid.radius_index(*i) == ri)
                    .filter_map(|(_, m)| *m)
                    .fold(f64::INFINITY, f64::min),
            })
            .collect();

        let passes = match self.rule() {
            Rule::NonStrict => worst_margin >= -tol,
            Rule::Strict => worst_margin > tol,
        };

        Ok(Verdict {
            holds: passes && vanishing_at.is_none(),
            worst_margin,
            witness: grid.point(witness_index),
            tail_note,
            inconclusive: vanishing_at.is_some(),
            vanishing_at,
            per_radius,
            config: VerdictConfig {
                radii: grid.radii().to_vec(),
                angles: grid.angles_per_circle(),
                tol,
            },
        })
    }

    /// Every margin on `grid`, in grid order.
    pub fn profile(&self, grid: &DiskGrid) -> Result<Vec<MarginSample>> {
        let prepared = self.prepare()?;
        (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let z = grid.point(i);
                let margin = match prepared.sample(z) {
                    Sample::Margin(m) => Some(m),
                    Sample::Vanishing => None,
                    Sample::ReferenceVanishes => return Err(Error::ReferenceVanishes(z)),
                };
                Ok(MarginSample {
                    radius: grid.radii()[grid.radius_index(i)],
                    theta: grid.angle_step() * (i % grid.angles_per_circle()) as f64,
                    margin,
                })
            })
            .collect()
    }
}

impl Prepared<'_> {
    fn sample(&self, z: Complex64) -> Sample {
        match self.check {
            Check::SqStarDef { f, .. } => {
                let fz = f.eval(z);
                if fz.norm() < VANISHING_THRESHOLD {
                    return Sample::Vanishing;
                }
                let w = z / fz * self.df.eval(z);
                Sample::Margin(self.center - (w - self.center).norm())
            }
            Check::SqStarRatio { f, q } => {
                let fz = f.eval(z);
                if fz.norm() < VANISHING_THRESHOLD {
                    return Sample::Vanishing;
                }
                Sample::Margin(1.0 - (f.eval(z * q.value()) / fz).norm())
            }
            Check::Kq { g, .. } => {
                let gz = g.eval(z);
                if gz.norm() < VANISHING_THRESHOLD {
                    return Sample::ReferenceVanishes;
                }
                let w = z / gz * self.df.eval(z);
                Sample::Margin(self.center - (w - self.center).norm())
            }
            Check::KqLemma { f, g, q } => {
                let gz = g.eval(z);
                let gn = gz.norm();
                if gn < VANISHING_THRESHOLD {
                    return Sample::ReferenceVanishes;
                }
                let shifted = gz + f.eval(z * q.value()) - f.eval(z);
                Sample::Margin((gn - shifted.norm()) / gn)
            }
            Check::ClassicalStarlike { g } | Check::ClassicalCtc { g, .. } => {
                let gz = g.eval(z);
                if gz.norm() < VANISHING_THRESHOLD {
                    return Sample::ReferenceVanishes;
                }
                Sample::Margin((z * self.df.eval(z) / gz).re)
            }
        }
    }
}

/// `f` in `S*_q` by the defining disk condition.
pub fn check_sq_star_def(f: &TruncatedSeries, q: QParam, cfg: &CheckConfig) -> Result<Verdict> {
    Check::SqStarDef { f, q }.run(cfg)
}

/// `f` in `S*_q` by `|f(qz)/f(z)| <= 1`.
pub fn check_sq_star_ratio(f: &TruncatedSeries, q: QParam, cfg: &CheckConfig) -> Result<Verdict> {
    Check::SqStarRatio { f, q }.run(cfg)
}

/// `f` in `K_q` with reference `g`.
pub fn check_kq(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    q: QParam,
    cfg: &CheckConfig,
) -> Result<Verdict> {
    Check::Kq { f, g, q }.run(cfg)
}

/// `f` in `K_q` with reference `g`, via `|g + f(qz) - f(z)| <= |g|`.
pub fn check_kq_lemma(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    q: QParam,
    cfg: &CheckConfig,
) -> Result<Verdict> {
    Check::KqLemma { f, g, q }.run(cfg)
}

pub fn check_classical_starlike(g: &TruncatedSeries, cfg: &CheckConfig) -> Result<Verdict> {
    Check::ClassicalStarlike { g }.run(cfg)
}

pub fn check_classical_ctc(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    cfg: &CheckConfig,
) -> Result<Verdict> {
    Check::ClassicalCtc { f, g }.run(cfg)
}
