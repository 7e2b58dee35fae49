//! End-to-end verification suite.
//!
//! Each check compares a computed quantity with an independent oracle and
//! reports `pass`, `fail`, or `expected-mismatch` together with a JSON detail
//! record. Membership checks run at `max(order, MEMBERSHIP_MIN_ORDER)` so the
//! truncation tail cannot decide a verdict; coefficient checks use `order`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{
    classical_bound, kq_bound, radius_estimate, sq_product_bound, verify_identity_corollaries,
    verify_series1_identity, BoundClass, BoundTable, IdentityReport,
};
use crate::criteria::{coefficients_from_consecutive_diff, coefficients_from_plain, Criterion};
use crate::membership::{Check, CheckConfig, Verdict};
use crate::special::{friedman_catalog, kq_coeffs_recurrence, kq_series, psi_series, quantum_dilog_scaled};
use crate::{CatalogId, DiskGrid, Error, QParam, Result, TruncatedSeries};

/// Smallest truncation order used for grid checks.
pub const MEMBERSHIP_MIN_ORDER: usize = 1024;

/// Deformation used for the classical-limit checks.
pub const LIMIT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub q: QParam,
    pub order: usize,
    pub grid: DiskGrid,
    pub tol: Option<f64>,
}

impl SuiteConfig {
    pub fn new(q: QParam) -> Self {
        Self {
            q,
            order: crate::DEFAULT_ORDER,
            grid: DiskGrid::default(),
            tol: None,
        }
    }

    pub fn membership_order(&self) -> usize {
        self.order.max(MEMBERSHIP_MIN_ORDER)
    }

    fn check_config(&self) -> CheckConfig {
        CheckConfig {
            grid: self.grid.clone(),
            tol: self.tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A known disagreement that is reported but does not fail the run.
    ExpectedMismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub status: Status,
    pub detail: Value,
}

impl CheckReport {
    fn new(name: &'static str, ok: bool, detail: Value) -> Self {
        Self {
            name,
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub q: QParam,
    pub order: usize,
    pub membership_order: usize,
    pub checks: Vec<CheckReport>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Runs every check at `cfg.q`.
pub fn run_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.q.require_deformed()?;
    let checks = vec![
        kq_recurrence(cfg.q)?,
        quantum_dilog_membership(cfg)?,
        kq_bound_limit(),
        sq_product_limit(),
        corollary_limits()?,
        series1_identity(cfg.q, cfg.order.max(64))?,
    ]
    .into_iter()
    .chain(identity_corollaries(cfg.q, cfg.order.max(64))?)
    .chain([
        verifier_equivalence(cfg)?,
        radius(cfg.q)?,
        catalog_starlike(cfg)?,
        criteria_sufficiency(cfg)?,
        negative_controls(cfg)?,
        limit_consistency(cfg)?,
        class_chain(cfg)?,
    ])
    .collect();
    Ok(VerificationReport {
        q: cfg.q,
        order: cfg.order,
        membership_order: cfg.membership_order(),
        checks,
    })
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn verdict_summary(v: &Verdict) -> Value {
    json!({
        "holds": v.holds,
        "worst_margin": v.worst_margin,
        "witness": [v.witness.re, v.witness.im],
        "tail_note": v.tail_note,
        "tol": v.tol(),
        "inconclusive": v.inconclusive,
    })
}

/// `k_q` by series exponential against the differentiated recurrence, `n <= 50`.
pub fn kq_recurrence(q: QParam) -> Result<CheckReport> {
    const N: usize = 50;
    let series = kq_series(q, N)?;
    let rec = kq_coeffs_recurrence(q, N)?;
    let (worst_n, worst) = (1..=N)
        .map(|n| (n, relative_gap(series.coeff(n).re, rec[n])))
        .fold((1, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    Ok(CheckReport::new(
        "kq-recurrence",
        worst <= 1e-10,
        json!({ "max_relative_gap": worst, "at": worst_n, "limit": 1e-10 }),
    ))
}

/// `(1-q) Li_2(z; q)`: `B_n = 1/n` and membership in `K_q` with `g = z/(1-z)`.
pub fn quantum_dilog_membership(cfg: &SuiteConfig) -> Result<CheckReport> {
    let f = quantum_dilog_scaled(cfg.q, cfg.membership_order())?;
    let a = f.truncate(cfg.order).real_coeffs()?;
    let b = crate::criteria::CriterionSequence::plain(&a, cfg.q);
    let b_gap = (1..b.values.len())
        .map(|n| (b.values[n] - 1.0 / n as f64).abs())
        .fold(0.0, f64::max);
    let crit = Criterion::MonotoneHalfplane.evaluate(&a, cfg.q)?;
    let g = friedman_catalog(CatalogId::CayleyPlus, cfg.membership_order());
    let verdict = Check::Kq { f: &f, g: &g, q: cfg.q }.run(&cfg.check_config())?;
    Ok(CheckReport::new(
        "quantum-dilog-membership",
        b_gap <= 1e-14 && crit.satisfied && verdict.holds,
        json!({ "max_b_gap": b_gap, "criterion": crit, "check_kq": verdict_summary(&verdict) }),
    ))
}

fn limit_table(class: BoundClass, n_max: usize, expected: impl Fn(usize) -> f64) -> (f64, usize) {
    let near_one = QParam::new(1.0 - LIMIT_EPSILON).expect("admissible q");
    let table = BoundTable::new(class, near_one, 1, n_max).expect("valid range");
    table
        .rows
        .iter()
        .map(|r| (relative_gap(r.value, expected(r.n)), r.n))
        .fold((0.0, 1), |acc, x| if x.0 > acc.0 { x } else { acc })
}

/// `K_q` bound at `q = 1 - 1e-6` against `n`.
pub fn kq_bound_limit() -> CheckReport {
    let (gap, at) = limit_table(BoundClass::KqGeneral, 20, |n| n as f64);
    CheckReport::new(
        "kq-bound-limit",
        gap <= 1e-3,
        json!({ "max_relative_gap": gap, "at": at, "epsilon": LIMIT_EPSILON }),
    )
}

/// Product bound at `q = 1 - 1e-6` against the telescoped product
/// `2/(n-1) * n(n-1)/2`.
pub fn sq_product_limit() -> CheckReport {
    let telescoped = |n: usize| {
        if n == 1 {
            return 1.0;
        }
        let nf = n as f64;
        2.0 / (nf - 1.0) * (nf * (nf - 1.0) / 2.0)
    };
    let (gap, at) = limit_table(BoundClass::SqProduct, 20, telescoped);
    let near_one = QParam::new(1.0 - LIMIT_EPSILON).expect("admissible q");
    let vs_n = (2..=20)
        .map(|n| relative_gap(sq_product_bound(n, near_one), n as f64))
        .fold(0.0, f64::max);
    CheckReport::new(
        "sq-product-limit",
        gap <= 1e-3 && vs_n <= 1e-3,
        json!({ "max_relative_gap": gap, "at": at, "max_gap_vs_n": vs_n }),
    )
}

/// Corollary bounds at `q = 1 - 1e-6` against the classical bounds.
pub fn corollary_limits() -> Result<CheckReport> {
    let classes = [
        BoundClass::KqIdentity,
        BoundClass::KqCayley,
        BoundClass::KqLemniscate,
        BoundClass::KqHexic,
    ];
    let mut detail = serde_json::Map::new();
    let mut ok = true;
    for class in classes {
        let (gap, at) = limit_table(class, 20, |n| classical_bound(class, n));
        ok &= gap <= 1e-3;
        detail.insert(class.tag().into(), json!({ "max_relative_gap": gap, "at": at }));
    }
    Ok(CheckReport::new("corollary-limits", ok, Value::Object(detail)))
}

fn identity_detail(r: &IdentityReport) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

/// Bound series against `(1+q)/2 z^2 Psi'' + z Psi'`.
///
/// The deviation limit is `1e-12` relative to the largest coefficient.
pub fn series1_identity(q: QParam, order: usize) -> Result<CheckReport> {
    let r = verify_series1_identity(q, order)?;
    let scale = kq_bound(order, q).max(1.0);
    let limit = 1e-12 * scale;
    Ok(CheckReport::new(
        "series1-identity",
        r.max_deviation <= limit && r.holds(),
        json!({ "report": identity_detail(&r), "limit": limit }),
    ))
}

/// The three Heine forms. The squared-base form is expected to disagree from
/// `n = 4`; the first form is the one that holds.
pub fn identity_corollaries(q: QParam, order: usize) -> Result<Vec<CheckReport>> {
    let c = verify_identity_corollaries(q, order)?;
    let exact = |name, r: &IdentityReport| {
        CheckReport::new(name, r.max_deviation <= 1e-12, identity_detail(r))
    };
    let ii = &c.identity_phi_squared_base;
    let status = if ii.first_mismatch == Some(4) {
        Status::ExpectedMismatch
    } else {
        Status::Fail
    };
    Ok(vec![
        exact("identity-phi", &c.identity_phi),
        CheckReport {
            name: "identity-phi-squared-base",
            status,
            detail: json!({ "report": identity_detail(ii), "holding_form": "identity-phi" }),
        },
        exact("cayley-psi", &c.cayley_psi),
    ])
}

/// A named `(f, g)` pair for the grid checks.
pub struct MembershipCase {
    pub name: String,
    pub f: TruncatedSeries,
    pub g: TruncatedSeries,
}

/// Corpus for the `K_q` / lemma equivalence: every catalog function as its
/// own reference plus mixed pairs, members and non-members alike.
pub fn equivalence_corpus(q: QParam, order: usize) -> Result<Vec<MembershipCase>> {
    let cat = |id| friedman_catalog(id, order);
    let mut cases: Vec<MembershipCase> = CatalogId::ALL
        .into_iter()
        .map(|id| MembershipCase {
            name: format!("f = g = {id}"),
            f: cat(id),
            g: cat(id),
        })
        .collect();
    let z_plus_2z2 = TruncatedSeries::from_real_fn(order, |n| [0.0, 1.0, 2.0].get(n).copied().unwrap_or(0.0));
    let mut extra = vec![
        ("quantum_dilog_scaled, cayley_plus", quantum_dilog_scaled(q, order)?, cat(CatalogId::CayleyPlus)),
        ("z + 2z^2, cayley_plus", z_plus_2z2.clone(), cat(CatalogId::CayleyPlus)),
        ("z + 2z^2, koebe_plus", z_plus_2z2, cat(CatalogId::KoebePlus)),
        ("psi, koebe_plus", psi_series(q, order)?, cat(CatalogId::KoebePlus)),
        ("cayley_plus, koebe_plus", cat(CatalogId::CayleyPlus), cat(CatalogId::KoebePlus)),
        ("koebe_plus, cayley_plus", cat(CatalogId::KoebePlus), cat(CatalogId::CayleyPlus)),
        ("identity, hexic_minus", cat(CatalogId::Identity), cat(CatalogId::HexicMinus)),
        ("cayley_minus, lemniscate_plus", cat(CatalogId::CayleyMinus), cat(CatalogId::LemniscatePlus)),
        ("lemniscate_minus, koebe_minus", cat(CatalogId::LemniscateMinus), cat(CatalogId::KoebeMinus)),
    ];
    cases.extend(extra.drain(..).map(|(name, f, g)| MembershipCase {
        name: name.to_string(),
        f,
        g,
    }));
    Ok(cases)
}

/// True when `w` and `v` are the same or neighbouring samples on one circle.
fn within_one_step(grid: &DiskGrid, w: crate::Complex64, v: crate::Complex64) -> bool {
    let r = w.norm();
    (r - v.norm()).abs() <= 1e-12 && (w - v).norm() <= r * grid.angle_step() * (1.0 + 1e-9)
}

/// `check_kq` and `check_kq_lemma` agree on every corpus case.
///
/// Witnesses must coincide within one grid step unless the lemma witness is
/// tied for the minimum of the definition margin (within its tolerance).
pub fn verifier_equivalence(cfg: &SuiteConfig) -> Result<CheckReport> {
    let order = cfg.membership_order();
    let check_cfg = cfg.check_config();
    let mut ok = true;
    let mut cases = Vec::new();
    for case in equivalence_corpus(cfg.q, order)? {
        let def = Check::Kq { f: &case.f, g: &case.g, q: cfg.q };
        let lemma = Check::KqLemma { f: &case.f, g: &case.g, q: cfg.q };
        let a = def.run(&check_cfg)?;
        let b = lemma.run(&check_cfg)?;
        let near = within_one_step(&cfg.grid, a.witness, b.witness);
        let tied = near || {
            let profile = def.profile(&cfg.grid)?;
            let at_b = cfg
                .grid
                .points()
                .position(|z| z == b.witness)
                .and_then(|i| profile[i].margin);
            at_b.is_some_and(|m| m <= a.worst_margin + a.tol())
        };
        let agree = a.holds == b.holds && tied;
        ok &= agree;
        cases.push(json!({
            "case": case.name,
            "agree": agree,
            "witness_within_one_step": near,
            "check_kq": verdict_summary(&a),
            "check_kq_lemma": verdict_summary(&b),
        }));
    }
    Ok(CheckReport::new(
        "verifier-equivalence",
        ok && cases.len() >= 12,
        json!({ "cases": cases }),
    ))
}

/// Ratio-test radius of the product bound sequence against `q/(q + 1 - q^2)`.
pub fn radius(q: QParam) -> Result<CheckReport> {
    let a: Vec<f64> = (1..=200).map(|n| sq_product_bound(n, q)).collect();
    let estimate = radius_estimate(&a)?;
    let qv = q.value();
    let expected = qv / (qv + 1.0 - qv * qv);
    let gap = relative_gap(estimate, expected);
    Ok(CheckReport::new(
        "radius",
        gap <= 0.01,
        json!({ "estimate": estimate, "expected": expected, "relative_gap": gap }),
    ))
}

/// Every catalog function satisfies `Re(z g'/g) > 0` on the grid.
pub fn catalog_starlike(cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut ok = true;
    let mut detail = serde_json::Map::new();
    for id in CatalogId::ALL {
        let g = friedman_catalog(id, cfg.membership_order());
        let v = Check::ClassicalStarlike { g: &g }.run(&cfg.check_config())?;
        ok &= v.holds;
        detail.insert(id.tag().into(), verdict_summary(&v));
    }
    Ok(CheckReport::new("catalog-starlike", ok, Value::Object(detail)))
}

/// A named real coefficient sequence `A_0, A_1, ...` for the criteria.
pub struct CriteriaCase {
    pub name: &'static str,
    /// The criterion the sequence was built to satisfy.
    pub intended: Criterion,
    pub a: Vec<f64>,
}

/// Sequences back-solved at `q` so that each satisfies its intended
/// criterion, through index `order`.
pub fn criteria_corpus(q: QParam, order: usize) -> Result<Vec<CriteriaCase>> {
    let plain = |b: &dyn Fn(usize) -> f64| {
        let b: Vec<f64> = (0..=order).map(|n| if n == 0 { 0.0 } else { b(n) }).collect();
        coefficients_from_plain(&b, q)
    };
    let inv = |n: usize| 1.0 / n as f64;

    let mut pair_chain = vec![0.0, 1.0];
    for n in 2..=order {
        pair_chain.push(1.0 / (n - 1) as f64 - pair_chain[n - 1]);
    }

    // hexic chain values T_n = -(1 - 2^-n), unwound into B_n
    let t = |n: usize| -(1.0 - 0.5f64.powi(n as i32));
    let mut hexic = vec![0.0, 1.0, 1.0 + t(1)];
    let mut prefix = 0.0;
    for n in 2..order {
        if n >= 3 {
            prefix += hexic[n - 1];
        }
        hexic.push(t(n) - prefix);
    }

    let koebe_b: Vec<f64> = (0..order).map(|n| 1.0 / (n + 1) as f64).collect();

    Ok(vec![
        CriteriaCase {
            name: "B_n = 1/n",
            intended: Criterion::SumHalfplane,
            a: quantum_dilog_scaled(q, order)?.real_coeffs()?,
        },
        CriteriaCase {
            name: "B_n = 1",
            intended: Criterion::SumHalfplane,
            a: psi_series(q, order)?.real_coeffs()?,
        },
        CriteriaCase {
            name: "B_n = 2 - 1/n",
            intended: Criterion::MonotoneHalfplane,
            a: plain(&|n| if n == 1 { 1.0 } else { 2.0 - inv(n) }),
        },
        CriteriaCase {
            name: "B_n = 1/n^2",
            intended: Criterion::MonotoneHalfplane,
            a: plain(&|n| inv(n * n)),
        },
        CriteriaCase {
            name: "consecutive B_n = 1/(n+1)",
            intended: Criterion::KoebeMonotone,
            a: coefficients_from_consecutive_diff(&koebe_b, q),
        },
        CriteriaCase {
            name: "odd B_n = 1/n",
            intended: Criterion::OddLemniscateMonotone,
            a: plain(&|n| if n % 2 == 1 { inv(n) } else { 0.0 }),
        },
        CriteriaCase {
            name: "f = z",
            intended: Criterion::OddLemniscateSum,
            a: plain(&|n| (n == 1) as u8 as f64),
        },
        CriteriaCase {
            name: "B_n = 1, 0, 1, 0, ...",
            intended: Criterion::TwoStep,
            a: plain(&|n| (n % 2) as f64),
        },
        CriteriaCase {
            name: "pair sums 1/(n-1)",
            intended: Criterion::TwoStepPairs,
            a: coefficients_from_plain(&pair_chain, q),
        },
        CriteriaCase {
            name: "B_n period 6",
            intended: Criterion::HexicSum,
            a: plain(&|n| CatalogId::HexicPlus.coefficient(n)),
        },
        CriteriaCase {
            name: "hexic chain to -1",
            intended: Criterion::HexicChain,
            a: coefficients_from_plain(&hexic, q),
        },
    ])
}

/// Every corpus sequence certified by a criterion is in `K_q` with respect
/// to the certified reference.
pub fn criteria_sufficiency(cfg: &SuiteConfig) -> Result<CheckReport> {
    let order = cfg.membership_order();
    let mut ok = true;
    let mut cases = Vec::new();
    for case in criteria_corpus(cfg.q, order)? {
        let mut certified = Vec::new();
        let mut intended_met = false;
        for c in Criterion::ALL {
            let result = match c.evaluate(&case.a[..=cfg.order.max(8)], cfg.q) {
                Ok(r) => r,
                Err(Error::NotOdd(_)) => continue,
                Err(e) => return Err(e),
            };
            if !result.satisfied {
                continue;
            }
            intended_met |= c == case.intended;
            let f = TruncatedSeries::from_real(&case.a)?;
            let g = friedman_catalog(c.certifies(), order);
            let v = Check::Kq { f: &f, g: &g, q: cfg.q }.run(&cfg.check_config())?;
            ok &= v.holds;
            certified.push(json!({
                "criterion": c,
                "statistic": result.statistic,
                "reference": c.certifies(),
                "check_kq": verdict_summary(&v),
            }));
        }
        ok &= intended_met;
        cases.push(json!({
            "case": case.name,
            "intended": case.intended,
            "intended_satisfied": intended_met,
            "certified": certified,
        }));
    }
    Ok(CheckReport::new("criteria-sufficiency", ok, json!({ "cases": cases })))
}

/// `z + 2z^2` fails the ratio test and `K_q` with `g = z/(1-z)`, with
/// witnesses on the negative real axis.
pub fn negative_controls(cfg: &SuiteConfig) -> Result<CheckReport> {
    let order = cfg.membership_order();
    let f = TruncatedSeries::from_real_fn(order, |n| [0.0, 1.0, 2.0].get(n).copied().unwrap_or(0.0));
    let g = friedman_catalog(CatalogId::CayleyPlus, order);
    let ratio = Check::SqStarRatio { f: &f, q: cfg.q }.run(&cfg.check_config())?;
    let kq = Check::Kq { f: &f, g: &g, q: cfg.q }.run(&cfg.check_config())?;
    // to grid resolution: the ratio witness can sit beside a zero of `f`
    let step = cfg.grid.angle_step();
    let on_negative_axis =
        |v: &Verdict| v.witness.re < 0.0 && (v.witness.arg().abs() - std::f64::consts::PI).abs() <= step;
    Ok(CheckReport::new(
        "negative-controls",
        !ratio.holds && !kq.holds && on_negative_axis(&ratio) && on_negative_axis(&kq),
        json!({ "ratio": verdict_summary(&ratio), "check_kq": verdict_summary(&kq) }),
    ))
}

/// Near `q = 1` the `K_q` verdicts match the classical close-to-convex
/// verdicts on the equivalence corpus.
pub fn limit_consistency(cfg: &SuiteConfig) -> Result<CheckReport> {
    let near_one = QParam::new(1.0 - 1e-4)?;
    let order = cfg.membership_order();
    let mut ok = true;
    let mut cases = Vec::new();
    for case in equivalence_corpus(near_one, order)? {
        let kq = Check::Kq { f: &case.f, g: &case.g, q: near_one }.run(&cfg.check_config())?;
        let ctc = Check::ClassicalCtc { f: &case.f, g: &case.g }.run(&cfg.check_config())?;
        let agree = kq.holds == ctc.holds;
        ok &= agree;
        cases.push(json!({
            "case": case.name,
            "agree": agree,
            "check_kq": kq.holds,
            "classical_ctc": ctc.holds,
        }));
    }
    Ok(CheckReport::new("limit-consistency", ok, json!({ "q": near_one, "cases": cases })))
}

/// Functions passing the `S*_q` disk condition pass `K_q` with `g = f`.
pub fn class_chain(cfg: &SuiteConfig) -> Result<CheckReport> {
    let order = cfg.membership_order();
    let mut candidates: Vec<(String, TruncatedSeries)> = CatalogId::ALL
        .into_iter()
        .map(|id| (id.tag().to_string(), friedman_catalog(id, order)))
        .collect();
    candidates.push(("quantum_dilog_scaled".into(), quantum_dilog_scaled(cfg.q, order)?));
    candidates.push(("psi".into(), psi_series(cfg.q, order)?));
    let mut ok = true;
    let mut cases = Vec::new();
    for (name, f) in &candidates {
        let star = Check::SqStarDef { f, q: cfg.q }.run(&cfg.check_config())?;
        if !star.holds {
            cases.push(json!({ "case": name, "sq_star": false }));
            continue;
        }
        let kq = Check::Kq { f, g: f, q: cfg.q }.run(&cfg.check_config())?;
        ok &= kq.holds;
        cases.push(json!({ "case": name, "sq_star": true, "kq_with_self": kq.holds }));
    }
    Ok(CheckReport::new("class-chain", ok, json!({ "cases": cases })))
}
