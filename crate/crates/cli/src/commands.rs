use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use qconvex::bounds::{BoundClass, BoundTable};
use qconvex::criteria::{Criterion, CriterionResult};
use qconvex::membership::{Check, CheckConfig};
use qconvex::verify::{run_suite, SuiteConfig, MEMBERSHIP_MIN_ORDER};
use qconvex::{Complex64, DiskGrid, Error, QParam, SeriesDocument};

use crate::args::{CheckKind, Format, GlobalArgs};
use crate::exit::{CliError, PASS, VERIFICATION_FAILURE};
use crate::source::resolve;

/// Rendered output and the exit status it implies.
pub struct Report {
    pub text: String,
    pub status: u8,
}

impl Report {
    fn ok(text: String) -> Self {
        Self { text, status: PASS }
    }

    fn verdict(text: String, passed: bool) -> Self {
        Self {
            text,
            status: if passed { PASS } else { VERIFICATION_FAILURE },
        }
    }
}

/// Validated global settings.
pub struct Settings {
    pub q: QParam,
    pub order: usize,
    pub grid: DiskGrid,
    pub tol: Option<f64>,
    pub format: Option<Format>,
}

impl Settings {
    pub fn from_args(args: &GlobalArgs) -> Result<Self, CliError> {
        if let Some(tol) = args.tol {
            if !(tol >= 0.0 && tol.is_finite()) {
                return Err(CliError::input(format!("tolerance {tol} must be finite and non-negative")));
            }
        }
        Ok(Self {
            q: QParam::new(args.q)?,
            order: args.order as usize,
            grid: DiskGrid::new(args.radii.clone(), args.angles)?,
            tol: args.tol,
            format: args.format,
        })
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn check_config(&self) -> CheckConfig {
        CheckConfig {
            grid: self.grid.clone(),
            tol: self.tol,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn parse_point(text: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| CliError::input(format!("malformed point `{text}`")))
    };
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(CliError::input(format!("malformed point `{text}`; use `re` or `re,im`"))),
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(CliError::input(format!("malformed point `{text}`")));
    }
    if z.norm() >= 1.0 {
        return Err(CliError::domain(format!("point {z} is outside the open unit disk")));
    }
    Ok(z)
}

/// Parses `n` or `lo..hi` (inclusive).
pub fn parse_range(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::input(format!("malformed index range `{text}`; use `n` or `lo..hi`"));
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
        None => {
            let n = text.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub fn eval(s: &Settings, function: &str, points: &[String]) -> Result<Report, CliError> {
    let points = points.iter().map(|p| parse_point(p)).collect::<Result<Vec<_>, _>>()?;
    let f = resolve(function, s.q, s.order)?.series;
    let values: Vec<(Complex64, Complex64)> = points.iter().map(|&z| (z, f.eval(z))).collect();
    let text = match s.format_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("re,im,value_re,value_im\n");
            for (z, w) in &values {
                writeln!(out, "{},{},{},{}", z.re, z.im, w.re, w.im).unwrap();
            }
            out
        }
        Format::Json => to_json(
            &values
                .iter()
                .map(|(z, w)| json!({ "z": [z.re, z.im], "value": [w.re, w.im] }))
                .collect::<Vec<_>>(),
        ),
    };
    Ok(Report::ok(text))
}

pub fn coeffs(s: &Settings, function: &str, range: Option<&str>) -> Result<Report, CliError> {
    let source = resolve(function, s.q, s.order)?;
    let f = &source.series;
    let (lo, hi, default) = match range {
        Some(r) => {
            let (lo, hi) = parse_range(r)?;
            (lo, hi, Format::Csv)
        }
        None => (0, f.order(), Format::Json),
    };
    if hi > f.order() {
        return Err(Error::IndexOutOfRange {
            index: hi,
            min: 0,
            max: f.order(),
        }
        .into());
    }
    let text = match (s.format_or(default), range) {
        (Format::Json, None) => SeriesDocument::from_series(source.name, f).to_json() + "\n",
        (Format::Json, Some(_)) => to_json(
            &(lo..=hi)
                .map(|n| json!({ "n": n, "re": f.coeff(n).re, "im": f.coeff(n).im }))
                .collect::<Vec<_>>(),
        ),
        (Format::Csv, _) => {
            let mut out = String::from("n,re,im\n");
            for n in lo..=hi {
                let c = f.coeff(n);
                writeln!(out, "{n},{},{}", c.re, c.im).unwrap();
            }
            out
        }
    };
    Ok(Report::ok(text))
}

pub fn check_membership(
    s: &Settings,
    kind: CheckKind,
    f: &str,
    g: Option<&str>,
) -> Result<Report, CliError> {
    // generated series are taken deep enough that the tail cannot decide
    let order = s.order.max(MEMBERSHIP_MIN_ORDER);
    let f = resolve(f, s.q, order)?.series;
    let g = match g {
        Some(g) => Some(resolve(g, s.q, order)?.series),
        None => None,
    };
    let need_g = || {
        g.as_ref()
            .ok_or_else(|| CliError::input(format!("--g is required for the {kind:?} check")))
    };
    let check = match kind {
        CheckKind::Kq => Check::Kq { f: &f, g: need_g()?, q: s.q },
        CheckKind::KqLemma => Check::KqLemma { f: &f, g: need_g()?, q: s.q },
        CheckKind::SqStar => Check::SqStarDef { f: &f, q: s.q },
        CheckKind::SqStarRatio => Check::SqStarRatio { f: &f, q: s.q },
        CheckKind::Starlike => Check::ClassicalStarlike { g: &f },
        CheckKind::Ctc => Check::ClassicalCtc { f: &f, g: need_g()? },
    };
    let verdict = check.run(&s.check_config())?;
    let text = match s.format_or(Format::Json) {
        Format::Json => to_json(&verdict),
        Format::Csv => {
            let mut out = String::from("radius,theta,margin\n");
            for p in check.profile(&s.grid)? {
                match p.margin {
                    Some(m) => writeln!(out, "{},{},{}", p.radius, p.theta, m).unwrap(),
                    None => writeln!(out, "{},{},", p.radius, p.theta).unwrap(),
                }
            }
            out
        }
    };
    Ok(Report::verdict(text, verdict.holds))
}

#[derive(Serialize)]
struct CriterionEntry {
    criterion: Criterion,
    applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<CriterionResult>,
}

pub fn check_criteria(s: &Settings, f: &str, criterion: Option<&str>) -> Result<Report, CliError> {
    let a = resolve(f, s.q, s.order)?.series.real_coeffs()?;
    let selected: Vec<Criterion> = match criterion {
        Some(tag) => vec![tag.parse().map_err(CliError::input)?],
        None => Criterion::ALL.to_vec(),
    };
    let mut entries = Vec::new();
    for c in selected {
        let entry = match c.evaluate(&a, s.q) {
            Ok(r) => CriterionEntry {
                criterion: c,
                applicable: true,
                result: Some(r),
            },
            Err(Error::NotOdd(_)) if criterion.is_none() => CriterionEntry {
                criterion: c,
                applicable: false,
                result: None,
            },
            Err(e) => return Err(e.into()),
        };
        entries.push(entry);
    }
    let any = entries
        .iter()
        .any(|e| e.result.as_ref().is_some_and(|r| r.satisfied));
    let text = match s.format_or(Format::Json) {
        Format::Json => to_json(&entries),
        Format::Csv => {
            let mut out = String::from("criterion,satisfied,statistic,budget,first_violation,certifies\n");
            for e in &entries {
                match &e.result {
                    Some(r) => writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        e.criterion,
                        r.satisfied,
                        r.statistic,
                        r.budget,
                        r.first_violation.map(|n| n.to_string()).unwrap_or_default(),
                        r.certifies
                    )
                    .unwrap(),
                    None => writeln!(out, "{},not_applicable,,,,", e.criterion).unwrap(),
                }
            }
            out
        }
    };
    Ok(Report::verdict(text, any))
}

pub fn bounds(s: &Settings, class: &str, range: &str, epsilon: f64) -> Result<Report, CliError> {
    let class: BoundClass = class.parse().map_err(CliError::input)?;
    let (lo, hi) = parse_range(range)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(CliError::input(format!("epsilon {epsilon} must be in (0, 1)")));
    }
    let table = BoundTable::with_epsilon(class, s.q, lo, hi, epsilon)?;
    let text = match s.format_or(Format::Csv) {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json() + "\n",
    };
    Ok(Report::ok(text))
}

pub fn verify(s: &Settings) -> Result<Report, CliError> {
    let cfg = SuiteConfig {
        q: s.q,
        order: s.order,
        grid: s.grid.clone(),
        tol: s.tol,
    };
    let report = run_suite(&cfg)?;
    let text = match s.format_or(Format::Json) {
        Format::Json => report.to_json() + "\n",
        Format::Csv => {
            let mut out = String::from("check,status\n");
            for c in &report.checks {
                let status = serde_json::to_value(c.status).unwrap();
                writeln!(out, "{},{}", c.name, status.as_str().unwrap()).unwrap();
            }
            out
        }
    };
    Ok(Report::verdict(text, report.all_passed()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..10").unwrap(), (2, 10));
        assert_eq!(parse_range("4").unwrap(), (4, 4));
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("a..2").is_err());
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_point("-0.25,0.5").unwrap(), Complex64::new(-0.25, 0.5));
        assert_eq!(parse_point("1.0").unwrap_err().code, crate::exit::DOMAIN);
        assert_eq!(parse_point("0.6,0.8").unwrap_err().code, crate::exit::DOMAIN);
        assert_eq!(parse_point("x").unwrap_err().code, crate::exit::MALFORMED_INPUT);
    }
}
