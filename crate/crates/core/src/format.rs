//! JSON documents read and written by the `pls` command.
//!
//! A square is stored as
//!
//! ```json
//! {"version":"1","triples":[[1,1,1],[1,2,2],[2,1,2]]}
//! ```
//!
//! and a request for one as any combination of
//!
//! ```json
//! {"rows":[2,1],"cols":[2,1],"symbols":[1,2],"r":2,"c":2,"s":2,"v":3}
//! ```
//!
//! where `rows`, `cols` and `symbols` are parameter lists and the scalars
//! are counts.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracle::Query;
use crate::square::{validate, PartialLatinSquare, PlsError, Triple};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0:?}, expected \"1\"")]
    UnsupportedVersion(String),
    #[error("not a partial Latin square: {0}")]
    Invalid(#[from] PlsError),
    #[error("invalid spec document: {0}")]
    Spec(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlsDocument {
    pub version: String,
    pub triples: Vec<[u32; 3]>,
}

impl PlsDocument {
    pub fn from_square(square: &PartialLatinSquare) -> Self {
        Self {
            version: SCHEMA_VERSION.to_string(),
            triples: square.iter().map(|t| [t.row, t.col, t.sym]).collect(),
        }
    }

    /// Parses the JSON text; the result may still fail [`Self::to_square`].
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let doc: PlsDocument = serde_json::from_str(text)?;
        if doc.version != SCHEMA_VERSION {
            return Err(FormatError::UnsupportedVersion(doc.version));
        }
        Ok(doc)
    }

    pub fn to_square(&self) -> Result<PartialLatinSquare, PlsError> {
        validate(self.triples.iter().map(|&[r, c, s]| Triple::new(r, c, s)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Parses a square document and validates it.
pub fn read_square(text: &str) -> Result<PartialLatinSquare, FormatError> {
    Ok(PlsDocument::parse(text)?.to_square()?)
}

pub fn write_square(square: &PartialLatinSquare) -> String {
    PlsDocument::from_square(square).to_json()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbols: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<usize>,
}

/// The constructive question a spec document asks, if it asks one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    /// Row parameters, column parameters, symbol count.
    Theorem {
        rows: Vec<usize>,
        cols: Vec<usize>,
        s: usize,
    },
    /// Row parameters, column count, symbol count.
    RowParams {
        rows: Vec<usize>,
        c: usize,
        s: usize,
    },
    Sizes {
        r: usize,
        c: usize,
        s: usize,
        v: usize,
    },
}

impl SpecDocument {
    /// Parses and checks that something is constrained and that the implied
    /// volumes and counts agree.
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let doc: SpecDocument = serde_json::from_str(text)?;
        if let Some(v) = &doc.version {
            if v != SCHEMA_VERSION {
                return Err(FormatError::UnsupportedVersion(v.clone()));
            }
        }
        doc.check()?;
        Ok(doc)
    }

    fn check(&self) -> Result<(), FormatError> {
        let spec_err = |msg: String| Err(FormatError::Spec(msg));
        if self.rows.is_none()
            && self.cols.is_none()
            && self.symbols.is_none()
            && self.r.is_none()
            && self.c.is_none()
            && self.s.is_none()
            && self.v.is_none()
        {
            return spec_err("no field is set".into());
        }
        let mut volumes = Vec::new();
        for (name, list) in [
            ("rows", &self.rows),
            ("cols", &self.cols),
            ("symbols", &self.symbols),
        ] {
            if let Some(list) = list {
                volumes.push((name, list.iter().sum::<usize>()));
            }
        }
        volumes.extend(self.v.map(|v| ("v", v)));
        if let Some(w) = volumes.windows(2).find(|w| w[0].1 != w[1].1) {
            return spec_err(format!(
                "{} implies volume {} but {} implies {}",
                w[0].0, w[0].1, w[1].0, w[1].1
            ));
        }
        for (list, count, name) in [
            (&self.rows, self.r, "r"),
            (&self.cols, self.c, "c"),
            (&self.symbols, self.s, "s"),
        ] {
            if let (Some(list), Some(n)) = (list, count) {
                if list.len() != n {
                    return spec_err(format!(
                        "{name} = {n} but {} parameters are listed",
                        list.len()
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn query(&self) -> Query {
        Query {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            syms: self.symbols.clone(),
            r: self.r,
            c: self.c,
            s: self.s,
            v: self.v,
        }
    }

    /// Picks the construction matching the fields present. Requests that
    /// prescribe symbol parameters have no construction.
    pub fn construction(&self) -> Option<Construction> {
        if self.symbols.is_some() {
            return None;
        }
        match (&self.rows, &self.cols, self.s) {
            (Some(rows), Some(cols), Some(s)) if self.c.is_none_or(|c| c == cols.len()) => {
                return Some(Construction::Theorem {
                    rows: rows.clone(),
                    cols: cols.clone(),
                    s,
                })
            }
            (Some(rows), None, Some(s)) if self.c.is_some() => {
                return Some(Construction::RowParams {
                    rows: rows.clone(),
                    c: self.c?,
                    s,
                })
            }
            _ => {}
        }
        match (
            self.rows.is_none() && self.cols.is_none(),
            self.r,
            self.c,
            self.s,
            self.v,
        ) {
            (true, Some(r), Some(c), Some(s), Some(v)) => Some(Construction::Sizes { r, c, s, v }),
            _ => None,
        }
    }
}
