use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::{Vocabulary, PAD};
use crate::numerics::{init_uniform, uniform_bound, Scalar, Tensor2};
use crate::{Error, Result};

/// `|V| x d_w` word vectors; row `i` belongs to vocabulary id `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable<T> {
    pub matrix: Tensor2<T>,
}

impl<T: Scalar> EmbeddingTable<T> {
    /// UNIFORM_SCALED rows, PAD row zero.
    pub fn random(vocab_size: usize, width: usize, seed: u64) -> Self {
        let mut matrix = Tensor2::zeros(vocab_size, width);
        init_uniform(matrix.data_mut(), uniform_bound(width, vocab_size), seed);
        if vocab_size > PAD {
            matrix.row_mut(PAD).fill(T::zero());
        }
        Self { matrix }
    }

    pub fn width(&self) -> usize {
        self.matrix.cols()
    }

    pub fn vocab_size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn row(&self, id: usize) -> &[T] {
        self.matrix.row(id)
    }
}

/// Read GloVe text vectors (`word v1 v2 ... vd` per line) for the words of
/// `vocab`. Words not in the file keep a random UNIFORM_SCALED row; the PAD
/// row is zero. Returns the table and the number of vocabulary rows found
/// in the file.
pub fn load_embeddings<T: Scalar>(
    path: impl AsRef<Path>,
    vocab: &Vocabulary,
    width: usize,
    seed: u64,
) -> Result<(EmbeddingTable<T>, usize)> {
    let path = path.as_ref();
    let mut table = EmbeddingTable::random(vocab.len(), width, seed);
    let mut covered = vec![false; vocab.len()];
    let reader = BufReader::new(File::open(path)?);
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(' ').filter(|f| !f.is_empty());
        let word = fields.next().ok_or_else(|| Error::parse(path, lineno, "missing word"))?;
        let values: Vec<&str> = fields.collect();
        if values.len() != width {
            return Err(Error::parse(
                path,
                lineno,
                format!("expected {width} values, found {}", values.len()),
            ));
        }
        let Some(id) = vocab.id(word) else { continue };
        if id == PAD {
            continue;
        }
        let row = table.matrix.row_mut(id);
        for (slot, text) in row.iter_mut().zip(&values) {
            let v: T = text
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("bad number {text:?}")))?;
            if !v.is_finite() {
                return Err(Error::parse(path, lineno, format!("non-finite value {text:?}")));
            }
            *slot = v;
        }
        covered[id] = true;
    }
    let found = covered.iter().filter(|&&c| c).count();
    Ok((table, found))
}
