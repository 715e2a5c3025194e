//! JSON and CSV forms of a recurrence table. Values are decimal strings at
//! the table's full precision, so nothing is lost to binary doubles.

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{parse_decimal, to_decimal};
use crate::recurrence::{Method, RecurrenceTable};
use crate::weights::{WeightKind, WeightSpec};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableHeader {
    pub weight: String,
    pub k: Option<String>,
    #[serde(rename = "N")]
    pub n: usize,
    pub precision_bits: u32,
    pub method: String,
    pub mass: String,
    pub artifact_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub a: String,
    pub b: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDocument {
    pub header: TableHeader,
    pub rows: Vec<TableRow>,
}

pub fn header_of(table: &RecurrenceTable) -> TableHeader {
    let (weight, k) = match &table.weight.kind {
        WeightKind::Legendre => ("legendre".to_string(), None),
        WeightKind::Log { k } => ("log".to_string(), Some(to_decimal(k))),
    };
    TableHeader {
        weight,
        k,
        n: table.len(),
        precision_bits: table.precision_bits,
        method: table.method.name().to_string(),
        mass: to_decimal(&table.mass),
        artifact_version: ARTIFACT_VERSION.to_string(),
    }
}

pub fn to_document(table: &RecurrenceTable) -> TableDocument {
    TableDocument {
        header: header_of(table),
        rows: (0..table.len())
            .map(|n| TableRow {
                n,
                a: to_decimal(&table.a[n]),
                b: to_decimal(&table.b[n]),
            })
            .collect(),
    }
}

pub fn to_json(table: &RecurrenceTable) -> String {
    serde_json::to_string_pretty(&to_document(table)).expect("table serializes")
}

fn parse(s: &str, prec: u32) -> Result<Float> {
    parse_decimal(s, prec).ok_or_else(|| Error::Parse(format!("not a decimal: {s:?}")))
}

pub fn from_document(doc: &TableDocument) -> Result<RecurrenceTable> {
    let h = &doc.header;
    let prec = h.precision_bits;
    let weight = match (h.weight.as_str(), &h.k) {
        ("legendre", _) => WeightSpec::legendre(),
        ("log", Some(k)) => {
            let k = parse(k, prec)?;
            if k > 1 {
                WeightSpec::log(k)?
            } else {
                WeightSpec::log_exploratory(k)?
            }
        }
        (w, _) => return Err(Error::Parse(format!("unknown weight {w:?}"))),
    };
    let method = Method::parse(&h.method).ok_or_else(|| Error::Parse(format!("unknown method {:?}", h.method)))?;
    if doc.rows.len() != h.n {
        return Err(Error::LengthMismatch(doc.rows.len(), h.n));
    }
    let mut a = Vec::with_capacity(h.n);
    let mut b = Vec::with_capacity(h.n);
    for (i, row) in doc.rows.iter().enumerate() {
        if row.n != i {
            return Err(Error::Parse(format!("row {i} is labelled {}", row.n)));
        }
        a.push(parse(&row.a, prec)?);
        b.push(parse(&row.b, prec)?);
    }
    Ok(RecurrenceTable {
        a,
        b,
        mass: parse(&h.mass, prec)?,
        weight,
        precision_bits: prec,
        method,
    })
}

pub fn from_json(s: &str) -> Result<RecurrenceTable> {
    let doc: TableDocument = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    from_document(&doc)
}

/// `# key: value` header lines, then `n,a,b`.
pub fn to_csv(table: &RecurrenceTable) -> String {
    let h = header_of(table);
    let mut out = String::new();
    out.push_str(&format!("# weight: {}\n", h.weight));
    if let Some(k) = &h.k {
        out.push_str(&format!("# k: {k}\n"));
    }
    out.push_str(&format!("# N: {}\n", h.n));
    out.push_str(&format!("# precision_bits: {}\n", h.precision_bits));
    out.push_str(&format!("# method: {}\n", h.method));
    out.push_str(&format!("# mass: {}\n", h.mass));
    out.push_str(&format!("# artifact_version: {}\n", h.artifact_version));
    out.push_str("n,a,b\n");
    for n in 0..table.len() {
        out.push_str(&format!("{},{},{}\n", n, to_decimal(&table.a[n]), to_decimal(&table.b[n])));
    }
    out
}

pub fn from_csv(s: &str) -> Result<RecurrenceTable> {
    let mut fields = std::collections::BTreeMap::new();
    let mut rows = Vec::new();
    let mut seen_columns = false;
    for line in s.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let (key, value) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad header line {line:?}")))?;
            fields.insert(key.trim().to_string(), value.trim().to_string());
        } else if !seen_columns {
            if line != "n,a,b" {
                return Err(Error::Parse(format!("expected column line n,a,b, got {line:?}")));
            }
            seen_columns = true;
        } else {
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("bad row {line:?}")));
            }
            let n = parts[0]
                .parse()
                .map_err(|_| Error::Parse(format!("bad index {:?}", parts[0])))?;
            rows.push(TableRow {
                n,
                a: parts[1].to_string(),
                b: parts[2].to_string(),
            });
        }
    }
    let get = |key: &str| {
        fields
            .get(key)
            .cloned()
            .ok_or_else(|| Error::Parse(format!("missing header {key}")))
    };
    let header = TableHeader {
        weight: get("weight")?,
        k: fields.get("k").cloned(),
        n: get("N")?.parse().map_err(|_| Error::Parse("bad N".into()))?,
        precision_bits: get("precision_bits")?
            .parse()
            .map_err(|_| Error::Parse("bad precision_bits".into()))?,
        method: get("method")?,
        mass: get("mass")?,
        artifact_version: get("artifact_version")?,
    };
    from_document(&TableDocument { header, rows })
}
