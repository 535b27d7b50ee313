//! Binary model checkpoints and sentence-vector files.
//!
//! Checkpoint layout, all integers little-endian `u32`:
//!
//! ```text
//! b"SVFG"  version  kind(4 bytes: b"PARA" | b"HIER")
//! tensor_count
//! per tensor: name_len name  rank  dims[rank]  data (f32 LE, row-major)
//! config_len  config (UTF-8 key=value lines)
//! ```
//!
//! The config block holds the model configuration plus `vocab.path` and
//! `vocab.sha256` of the vocabulary the model was trained with, and any
//! run settings the caller adds.
//!
//! Vector files are `count width` followed by `count * width` packed f32 LE.

use std::io::{Read, Write};
use std::path::Path;

use crate::hier::{HierConfig, HierModel};
use crate::numerics::{Params, Tensor2};
use crate::seq2seq::{EncoderDecoderModel, Seq2SeqConfig};
use crate::text::Vocabulary;
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"SVFG";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Paraphrase,
    Summarizer,
}

impl ModelKind {
    pub fn tag(self) -> &'static [u8; 4] {
        match self {
            ModelKind::Paraphrase => b"PARA",
            ModelKind::Summarizer => b"HIER",
        }
    }

    fn from_tag(tag: &[u8; 4]) -> Result<Self> {
        match tag {
            b"PARA" => Ok(ModelKind::Paraphrase),
            b"HIER" => Ok(ModelKind::Summarizer),
            _ => Err(Error::Format(format!("unknown model kind {:?}", String::from_utf8_lossy(tag)))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub kind: ModelKind,
    pub config: Vec<(String, String)>,
    pub tensors: Vec<(String, Tensor2<f32>)>,
}

fn write_u32(w: &mut impl Write, v: usize) -> Result<()> {
    let v = u32::try_from(v).map_err(|_| Error::Format(format!("{v} does not fit in u32")))?;
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn read_u32(r: &mut impl Read) -> Result<usize> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b) as usize)
}

fn read_string(r: &mut impl Read, len: usize) -> Result<String> {
    let mut b = vec![0u8; len];
    r.read_exact(&mut b)?;
    String::from_utf8(b).map_err(|_| Error::Format("invalid UTF-8 in checkpoint".into()))
}

fn write_f32s(w: &mut impl Write, data: &[f32]) -> Result<()> {
    let mut buf = Vec::with_capacity(data.len() * 4);
    for v in data {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn read_f32s(r: &mut impl Read, n: usize) -> Result<Vec<f32>> {
    let mut buf = vec![0u8; n * 4];
    r.read_exact(&mut buf)?;
    Ok(buf.chunks_exact(4).map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect())
}

/// `key=value` lines; keys may not contain `=` and values may not contain newlines.
pub fn format_key_values(pairs: &[(String, String)]) -> Result<String> {
    let mut s = String::new();
    for (k, v) in pairs {
        if k.is_empty() || k.contains(['=', '\n']) || v.contains('\n') {
            return Err(Error::invalid(format!("unserializable config entry {k:?}")));
        }
        s.push_str(k);
        s.push('=');
        s.push_str(v);
        s.push('\n');
    }
    Ok(s)
}

pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::Format(format!("config line without '=': {l:?}")))
        })
        .collect()
}

impl Checkpoint {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.config.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        match self.config.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value,
            None => self.config.push((key.to_string(), value)),
        }
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        write_u32(w, VERSION as usize)?;
        w.write_all(self.kind.tag())?;
        write_u32(w, self.tensors.len())?;
        for (name, t) in &self.tensors {
            write_u32(w, name.len())?;
            w.write_all(name.as_bytes())?;
            write_u32(w, 2)?;
            write_u32(w, t.rows())?;
            write_u32(w, t.cols())?;
            write_f32s(w, t.data())?;
        }
        let cfg = format_key_values(&self.config)?;
        write_u32(w, cfg.len())?;
        w.write_all(cfg.as_bytes())?;
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("not a sent2vec checkpoint".into()));
        }
        let version = read_u32(r)?;
        if version != VERSION as usize {
            return Err(Error::Format(format!("unsupported checkpoint version {version}")));
        }
        let mut tag = [0u8; 4];
        r.read_exact(&mut tag)?;
        let kind = ModelKind::from_tag(&tag)?;
        let count = read_u32(r)?;
        let mut tensors = Vec::with_capacity(count);
        for _ in 0..count {
            let len = read_u32(r)?;
            let name = read_string(r, len)?;
            let rank = read_u32(r)?;
            if rank != 2 {
                return Err(Error::Format(format!("tensor {name} has rank {rank}, expected 2")));
            }
            let rows = read_u32(r)?;
            let cols = read_u32(r)?;
            let n = rows
                .checked_mul(cols)
                .ok_or_else(|| Error::Format(format!("tensor {name} too large")))?;
            tensors.push((name, Tensor2::new(rows, cols, read_f32s(r, n)?)?));
        }
        let len = read_u32(r)?;
        let config = parse_key_values(&read_string(r, len)?)?;
        let mut rest = [0u8; 1];
        if r.read(&mut rest)? != 0 {
            return Err(Error::Format("trailing bytes after last tensor".into()));
        }
        Ok(Self { kind, config, tensors })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
        Self::read_from(&mut r)
    }

    fn from_model<P: Params<f32>>(kind: ModelKind, model: &P, mut config: Vec<(String, String)>, vocab: &Vocabulary, vocab_path: Option<&Path>) -> Self {
        config.push(("vocab.path".into(), vocab_path.map(|p| p.display().to_string()).unwrap_or_default()));
        config.push(("vocab.sha256".into(), vocab.content_hash()));
        config.push(("vocab.size".into(), vocab.len().to_string()));
        let tensors = model.tensors().into_iter().map(|(n, t)| (n, t.clone())).collect();
        Self { kind, config, tensors }
    }

    pub fn from_paraphrase(model: &EncoderDecoderModel<f32>, vocab: &Vocabulary, vocab_path: Option<&Path>) -> Result<Self> {
        if vocab.len() != model.config.vocab_size {
            return Err(Error::Mismatch(format!("vocabulary has {} entries, model {}", vocab.len(), model.config.vocab_size)));
        }
        Ok(Self::from_model(ModelKind::Paraphrase, model, model.config.to_pairs(), vocab, vocab_path))
    }

    pub fn from_summarizer(model: &HierModel<f32>, vocab: &Vocabulary, vocab_path: Option<&Path>) -> Result<Self> {
        if vocab.len() != model.config.vocab_size {
            return Err(Error::Mismatch(format!("vocabulary has {} entries, model {}", vocab.len(), model.config.vocab_size)));
        }
        Ok(Self::from_model(ModelKind::Summarizer, model, model.config.to_pairs(), vocab, vocab_path))
    }

    fn expect_kind(&self, kind: ModelKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Mismatch(format!("checkpoint holds a {:?} model, expected {kind:?}", self.kind)));
        }
        Ok(())
    }

    fn fill<P: Params<f32>>(&self, model: &mut P) -> Result<()> {
        let slots = model.tensors_mut();
        if slots.len() != self.tensors.len() {
            return Err(Error::Mismatch(format!("checkpoint has {} tensors, model {}", self.tensors.len(), slots.len())));
        }
        for (name, dst) in slots {
            let src = self
                .tensors
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, t)| t)
                .ok_or_else(|| Error::Mismatch(format!("checkpoint lacks tensor {name}")))?;
            if src.shape() != dst.shape() {
                return Err(Error::Mismatch(format!("tensor {name}: checkpoint {:?}, config {:?}", src.shape(), dst.shape())));
            }
            dst.data_mut().copy_from_slice(src.data());
        }
        Ok(())
    }

    pub fn paraphrase_model(&self) -> Result<EncoderDecoderModel<f32>> {
        self.expect_kind(ModelKind::Paraphrase)?;
        let mut m = EncoderDecoderModel::new(Seq2SeqConfig::from_pairs(&self.config)?, 0)?;
        self.fill(&mut m)?;
        Ok(m)
    }

    pub fn summarizer_model(&self) -> Result<HierModel<f32>> {
        self.expect_kind(ModelKind::Summarizer)?;
        let mut m = HierModel::new(HierConfig::from_pairs(&self.config)?, 0)?;
        self.fill(&mut m)?;
        Ok(m)
    }

    /// Error unless `vocab` hashes to the recorded `vocab.sha256`.
    pub fn verify_vocab(&self, vocab: &Vocabulary) -> Result<()> {
        let want = self.get("vocab.sha256").ok_or_else(|| Error::Format("checkpoint records no vocabulary hash".into()))?;
        let got = vocab.content_hash();
        if want != got {
            return Err(Error::Mismatch(format!("vocabulary hash {got} differs from checkpoint {want}")));
        }
        Ok(())
    }

    /// Human-readable summary: kind, config, and one line per tensor.
    pub fn describe(&self) -> String {
        let mut s = format!("kind={:?}\nversion={VERSION}\n", self.kind);
        for (k, v) in &self.config {
            s.push_str(&format!("{k}={v}\n"));
        }
        let total: usize = self.tensors.iter().map(|(_, t)| t.len()).sum();
        s.push_str(&format!("tensors={}\nparameters={total}\n", self.tensors.len()));
        for (n, t) in &self.tensors {
            s.push_str(&format!("tensor\t{n}\t{}x{}\n", t.rows(), t.cols()));
        }
        s
    }
}

pub fn write_vectors(path: impl AsRef<Path>, vectors: &[Vec<f32>]) -> Result<()> {
    let width = vectors.first().map_or(0, Vec::len);
    if let Some(v) = vectors.iter().find(|v| v.len() != width) {
        return Err(Error::shape(width, v.len()));
    }
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_u32(&mut w, vectors.len())?;
    write_u32(&mut w, width)?;
    for v in vectors {
        write_f32s(&mut w, v)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_vectors(path: impl AsRef<Path>) -> Result<Vec<Vec<f32>>> {
    let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
    let count = read_u32(&mut r)?;
    let width = read_u32(&mut r)?;
    let out = (0..count).map(|_| read_f32s(&mut r, width)).collect::<Result<Vec<_>>>()?;
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes in vector file".into()));
    }
    Ok(out)
}
