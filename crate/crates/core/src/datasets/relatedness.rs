use std::fs;
use std::path::Path;

use crate::{Error, Result};

/// A sentence pair with a human relatedness score on the 1–5 scale.
#[derive(Debug, Clone, PartialEq)]
pub struct RelatednessRecord {
    pub id: String,
    pub sentence_a: String,
    pub sentence_b: String,
    pub gold_score: f64,
}

/// Read `id<TAB>sentence_a<TAB>sentence_b<TAB>score`; extra columns (such as
/// an entailment label) are ignored, and a first line whose score column is
/// not numeric is taken as a header.
pub fn load_relatedness(path: impl AsRef<Path>) -> Result<Vec<RelatednessRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 4 {
            return Err(Error::parse(path, i + 1, "expected id, sentence_a, sentence_b, score"));
        }
        let score: f64 = match fields[3].trim().parse() {
            Ok(s) => s,
            Err(_) if i == 0 => continue,
            Err(_) => {
                return Err(Error::parse(path, i + 1, format!("bad score {:?}", fields[3])));
            }
        };
        if !(1.0..=5.0).contains(&score) {
            return Err(Error::Record {
                id: fields[0].to_string(),
                message: format!("relatedness score {score} outside [1, 5]"),
            });
        }
        records.push(RelatednessRecord {
            id: fields[0].to_string(),
            sentence_a: fields[1].to_string(),
            sentence_b: fields[2].to_string(),
            gold_score: score,
        });
    }
    Ok(records)
}
