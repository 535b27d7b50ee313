use std::fs;
use std::path::Path;

use crate::{Error, Result};

/// Longest detailed description kept.
pub const MAX_DETAILED: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParagraphRecord {
    pub detailed: Vec<String>,
    pub summary: String,
}

#[derive(Debug, Clone, Default)]
pub struct ParagraphCorpus {
    pub records: Vec<ParagraphRecord>,
    /// Blocks dropped for having more than [`MAX_DETAILED`] detail sentences.
    pub skipped: usize,
}

/// Read blank-line separated blocks: detail sentences, then the summary as
/// the block's last line. Two blank lines in a row mean an empty block.
pub fn load_paragraphs(path: impl AsRef<Path>) -> Result<ParagraphCorpus> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let lines: Vec<&str> = text.lines().map(str::trim_end).collect();
    let first = lines.iter().position(|l| !l.is_empty());
    let last = lines.iter().rposition(|l| !l.is_empty());
    let mut corpus = ParagraphCorpus::default();
    let (Some(first), Some(last)) = (first, last) else {
        return Ok(corpus);
    };

    let mut block: Vec<&str> = Vec::new();
    let mut block_start = first + 1;
    for (i, line) in lines.iter().enumerate().take(last + 1).skip(first) {
        if line.is_empty() {
            if block.is_empty() {
                return Err(Error::parse(path, i + 1, "empty block"));
            }
            push_block(path, block_start, &block, &mut corpus)?;
            block.clear();
            block_start = i + 2;
        } else {
            block.push(line);
        }
    }
    push_block(path, block_start, &block, &mut corpus)?;
    Ok(corpus)
}

fn push_block(path: &Path, line: usize, block: &[&str], corpus: &mut ParagraphCorpus) -> Result<()> {
    match block {
        [] => Err(Error::parse(path, line, "empty block")),
        [_] => Err(Error::parse(path, line, "block has a summary but no detail sentences")),
        [detailed @ .., summary] => {
            if detailed.len() > MAX_DETAILED {
                corpus.skipped += 1;
            } else {
                corpus.records.push(ParagraphRecord {
                    detailed: detailed.iter().map(|s| s.to_string()).collect(),
                    summary: summary.to_string(),
                });
            }
            Ok(())
        }
    }
}
