use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::{Error, Result};

pub const PAD: usize = 0;
pub const BOS: usize = 1;
pub const EOS: usize = 2;
pub const UNK: usize = 3;
pub const NUM_SPECIALS: usize = 4;
pub const SPECIAL_TOKENS: [&str; NUM_SPECIALS] = ["<pad>", "<bos>", "<eos>", "<unk>"];

const HEADER: &str = "# sent2vec vocabulary v1: ids 0-3 are <pad> <bos> <eos> <unk>; \
the n-th token line below (counting from 0) has id n + 4";

/// Token ↔ id mapping. Ids 0..4 are the special tokens; the remaining ids
/// are assigned in order of decreasing corpus frequency, so an id doubles
/// as a frequency rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    id_to_token: Vec<String>,
    token_to_id: HashMap<String, usize>,
}

/// Keep the `cap − 4` most frequent tokens, ties broken lexicographically.
pub fn build_vocab<I, S>(corpus: I, cap: usize) -> Result<Vocabulary>
where
    I: IntoIterator,
    I::Item: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    if cap < NUM_SPECIALS + 1 {
        return Err(Error::invalid(format!("vocabulary cap {cap} < 5")));
    }
    let mut counts: HashMap<String, u64> = HashMap::new();
    for sentence in corpus {
        for tok in sentence {
            let tok = tok.as_ref();
            if SPECIAL_TOKENS.contains(&tok) {
                continue;
            }
            *counts.entry(tok.to_string()).or_default() += 1;
        }
    }
    let mut ranked: Vec<(String, u64)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(cap - NUM_SPECIALS);
    Vocabulary::from_tokens(ranked.into_iter().map(|(t, _)| t))
}

impl Vocabulary {
    /// Build from non-special tokens in id order (first token gets id 4).
    pub fn from_tokens<I: IntoIterator<Item = String>>(tokens: I) -> Result<Self> {
        let mut id_to_token: Vec<String> = SPECIAL_TOKENS.iter().map(|s| s.to_string()).collect();
        id_to_token.extend(tokens);
        let mut token_to_id = HashMap::with_capacity(id_to_token.len());
        for (id, tok) in id_to_token.iter().enumerate() {
            if token_to_id.insert(tok.clone(), id).is_some() {
                return Err(Error::invalid(format!("duplicate token {tok:?} in vocabulary")));
            }
        }
        Ok(Self {
            id_to_token,
            token_to_id,
        })
    }

    pub fn len(&self) -> usize {
        self.id_to_token.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn id(&self, token: &str) -> Option<usize> {
        self.token_to_id.get(token).copied()
    }

    /// Id for `token`, or UNK.
    pub fn id_or_unk(&self, token: &str) -> usize {
        self.id(token).unwrap_or(UNK)
    }

    pub fn token(&self, id: usize) -> Option<&str> {
        self.id_to_token.get(id).map(String::as_str)
    }

    pub fn tokens(&self) -> &[String] {
        &self.id_to_token
    }

    pub fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<usize> {
        tokens.iter().map(|t| self.id_or_unk(t.as_ref())).collect()
    }

    pub fn decode(&self, ids: &[usize]) -> Vec<String> {
        ids.iter()
            .map(|&i| self.token(i).unwrap_or(SPECIAL_TOKENS[UNK]).to_string())
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from(HEADER);
        s.push('\n');
        for tok in &self.id_to_token[NUM_SPECIALS..] {
            s.push_str(tok);
            s.push('\n');
        }
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = fs::File::create(path)?;
        f.write_all(self.to_text().as_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.starts_with("# sent2vec vocabulary") => {}
            _ => return Err(Error::parse(path, 1, "missing vocabulary header")),
        }
        let mut tokens = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.is_empty() || line.contains(char::is_whitespace) {
                return Err(Error::parse(path, i + 2, format!("bad token line {line:?}")));
            }
            tokens.push(line.to_string());
        }
        Self::from_tokens(tokens).map_err(|e| Error::parse(path, 0, e.to_string()))
    }

    /// SHA-256 of the persisted text form, hex encoded.
    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
