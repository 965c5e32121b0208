use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::table::{open_csv, write_csv, CsvRows};
use crate::error::{Error, Result};

const SECTORS_CSV: &str = include_str!("../../data/sectors.csv");
const COUNTRIES_CSV: &str = include_str!("../../data/countries.csv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeEntry {
    pub code: String,
    pub name: String,
}

/// Ordered list of entity codes; the position of a code is its 0-based index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeList {
    entries: Vec<CodeEntry>,
    lookup: HashMap<String, usize>,
}

impl CodeList {
    pub fn new(entries: Vec<CodeEntry>) -> Result<Self> {
        let mut lookup = HashMap::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if e.code.is_empty() {
                return Err(Error::validation(format!("code list entry {} has an empty code", i + 1)));
            }
            if lookup.insert(e.code.clone(), i).is_some() {
                return Err(Error::validation(format!("duplicate code {:?}", e.code)));
            }
        }
        Ok(Self { entries, lookup })
    }

    pub fn from_codes<S: Into<String>>(codes: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(
            codes
                .into_iter()
                .map(|c| {
                    let code = c.into();
                    CodeEntry { name: code.clone(), code }
                })
                .collect(),
        )
    }

    /// Reads a `code,name` file.
    pub fn read(path: &Path) -> Result<Self> {
        let mut rows = open_csv(path, &["code", "name"])?;
        Self::from_rows(&mut rows)
    }

    fn from_rows(rows: &mut CsvRows) -> Result<Self> {
        let mut entries = Vec::new();
        let mut seen = HashMap::new();
        while let Some(rec) = rows.next_record()? {
            let code = rec.field(0).to_string();
            let name = rec.field(1).to_string();
            if code.is_empty() {
                return Err(rows.error("empty code"));
            }
            if seen.insert(code.clone(), ()).is_some() {
                return Err(rows.error(format!("duplicate code {code:?}")));
            }
            entries.push(CodeEntry { code, name });
        }
        Self::new(entries)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_csv(path, &["code", "name"], self.entries.iter().map(|e| vec![e.code.clone(), e.name.clone()]))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CodeEntry] {
        &self.entries
    }

    pub fn codes(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.code.clone()).collect()
    }

    pub fn code(&self, index: usize) -> &str {
        &self.entries[index].code
    }

    pub fn index_of(&self, code: &str) -> Option<usize> {
        self.lookup.get(code).copied()
    }

    /// First `n` entries.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        Self::new(self.entries[..n.min(self.entries.len())].to_vec())
    }
}

fn bundled(name: &str, text: &'static str) -> CodeList {
    let mut rows = CsvRows::from_reader(name, text.as_bytes(), &["code", "name"]).expect("bundled header");
    CodeList::from_rows(&mut rows).expect("bundled code list is valid")
}

/// The 26 bundled sector codes.
pub fn bundled_sectors() -> CodeList {
    bundled("sectors.csv", SECTORS_CSV)
}

/// The 189 bundled country codes.
pub fn bundled_countries() -> CodeList {
    bundled("countries.csv", COUNTRIES_CSV)
}
