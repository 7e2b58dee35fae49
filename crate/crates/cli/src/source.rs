//! Turning a function designator into a series.

use std::fs;
use std::path::Path;

use qconvex::special::{dilog, friedman_catalog, kq_series, psi_series, quantum_dilog, quantum_dilog_scaled};
use qconvex::{CatalogId, QParam, SeriesDocument, TruncatedSeries};

use crate::exit::CliError;

/// A resolved series and the name it was requested by.
pub struct Source {
    pub name: String,
    pub series: TruncatedSeries,
}

/// Resolves a catalog tag, one of the named special series, or a path to a
/// series document.
pub fn resolve(designator: &str, q: QParam, order: usize) -> Result<Source, CliError> {
    let generated = |series| {
        Ok(Source {
            name: designator.to_string(),
            series,
        })
    };
    if let Ok(id) = designator.parse::<CatalogId>() {
        return generated(friedman_catalog(id, order));
    }
    match designator {
        "kq" => return generated(kq_series(q, order)?),
        "psi" => return generated(psi_series(q, order)?),
        "quantum_dilog" => return generated(quantum_dilog(q, order)?),
        "quantum_dilog_scaled" => return generated(quantum_dilog_scaled(q, order)?),
        "dilog" => return generated(dilog(order)),
        _ => {}
    }
    let path = Path::new(designator);
    if !path.exists() {
        return Err(CliError::input(format!(
            "`{designator}` is neither a known function nor an existing file"
        )));
    }
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let doc = SeriesDocument::from_json(&text)?;
    Ok(Source {
        name: doc.name.clone(),
        series: doc.to_series()?,
    })
}
