//! Best-known costs with SteinLib class labels, read from `name,class,cost`.

use std::{collections::BTreeMap, fs, path::Path};

use steiner_core::Cost;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestKnown {
    pub cost: Cost,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BestKnownError {
    #[error("line {line}: duplicate instance {name:?}")]
    Duplicate { line: usize, name: String },
    #[error("line {line}: cost must be a positive integer, found {value:?}")]
    BadCost { line: usize, value: String },
    #[error("line {line}: expected name,class,cost")]
    Malformed { line: usize },
    #[error("{0}")]
    Io(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BestKnownTable {
    entries: BTreeMap<String, BestKnown>,
}

impl BestKnownTable {
    pub fn get(&self, name: &str) -> Option<&BestKnown> {
        self.entries.get(name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BestKnown)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// Parses the table. A first row reading `name,class,cost` is a header.
pub fn load_best_known(text: &str) -> Result<BestKnownTable, BestKnownError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut table = BestKnownTable::default();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 1;
        let rec = rec.map_err(|_| BestKnownError::Malformed { line })?;
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != 3 {
            return Err(BestKnownError::Malformed { line });
        }
        if i == 0 && rec[0].eq_ignore_ascii_case("name") && rec[2].eq_ignore_ascii_case("cost") {
            continue;
        }
        let cost = match rec[2].parse::<Cost>() {
            Ok(c) if c > 0 => c,
            _ => return Err(BestKnownError::BadCost { line, value: rec[2].to_string() }),
        };
        let name = rec[0].to_string();
        if table.entries.contains_key(&name) {
            return Err(BestKnownError::Duplicate { line, name });
        }
        table.entries.insert(name, BestKnown { cost, class: rec[1].to_string() });
    }
    Ok(table)
}

pub fn read_best_known(path: &Path) -> Result<BestKnownTable, BestKnownError> {
    let text = fs::read_to_string(path).map_err(|e| BestKnownError::Io(format!("{}: {e}", path.display())))?;
    load_best_known(&text)
}
