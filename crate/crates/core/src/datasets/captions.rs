use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use super::split::{holdout_indices, SplitSize};
use crate::{Error, Result};

/// Captions that all describe one image or video.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaptionGroup {
    pub group_id: String,
    pub captions: Vec<String>,
}

/// One ordered paraphrase pair, borrowed from its dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pair<'a> {
    pub group_id: &'a str,
    pub source: &'a str,
    pub target: &'a str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct PairIndex {
    group: u32,
    source: u32,
    target: u32,
}

/// Ordered (source, target) caption pairs. Pairs are stored as indices into
/// the owning groups, so a 10k × 20 caption corpus costs 12 bytes per pair.
#[derive(Debug, Clone, Default)]
pub struct PairDataset {
    groups: Vec<CaptionGroup>,
    pairs: Vec<PairIndex>,
}

/// Σ k·(k−1) over the groups.
pub fn pair_count(group_sizes: impl IntoIterator<Item = usize>) -> u64 {
    group_sizes
        .into_iter()
        .map(|k| (k as u64) * (k as u64).saturating_sub(1))
        .sum()
}

/// Every ordered pair of distinct caption positions within each group.
pub fn build_pairs(groups: Vec<CaptionGroup>) -> PairDataset {
    let total = pair_count(groups.iter().map(|g| g.captions.len())) as usize;
    let mut pairs = Vec::with_capacity(total);
    for (gi, g) in groups.iter().enumerate() {
        let k = g.captions.len() as u32;
        for s in 0..k {
            for t in 0..k {
                if s != t {
                    pairs.push(PairIndex {
                        group: gi as u32,
                        source: s,
                        target: t,
                    });
                }
            }
        }
    }
    PairDataset { groups, pairs }
}

/// Split at the group level: every pair of a held-out group goes to the test set.
pub fn holdout_split(dataset: &PairDataset, fraction: f64, seed: u64) -> Result<(PairDataset, PairDataset)> {
    let (train_idx, test_idx) =
        holdout_indices(dataset.groups.len(), SplitSize::Fraction(fraction), seed)?;
    Ok((dataset.subset(&train_idx), dataset.subset(&test_idx)))
}

impl PairDataset {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn groups(&self) -> &[CaptionGroup] {
        &self.groups
    }

    pub fn get(&self, i: usize) -> Pair<'_> {
        let p = self.pairs[i];
        let g = &self.groups[p.group as usize];
        Pair {
            group_id: &g.group_id,
            source: &g.captions[p.source as usize],
            target: &g.captions[p.target as usize],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Pair<'_>> + '_ {
        (0..self.pairs.len()).map(move |i| self.get(i))
    }

    /// All captions, each once.
    pub fn sentences(&self) -> impl Iterator<Item = &str> + '_ {
        self.groups
            .iter()
            .flat_map(|g| g.captions.iter().map(String::as_str))
    }

    fn subset(&self, group_idx: &[usize]) -> PairDataset {
        let groups: Vec<CaptionGroup> = group_idx.iter().map(|&i| self.groups[i].clone()).collect();
        let remap: HashMap<u32, u32> = group_idx
            .iter()
            .enumerate()
            .map(|(new, &old)| (old as u32, new as u32))
            .collect();
        let pairs = self
            .pairs
            .iter()
            .filter_map(|p| {
                remap.get(&p.group).map(|&g| PairIndex { group: g, ..*p })
            })
            .collect();
        PairDataset { groups, pairs }
    }

    /// Rebuild a dataset from explicit pairs (as read from a pairs file).
    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let mut groups: Vec<CaptionGroup> = Vec::new();
        let mut group_index: HashMap<String, usize> = HashMap::new();
        let mut caption_index: Vec<HashMap<String, u32>> = Vec::new();
        let mut out = Vec::new();
        for (gid, src, tgt) in pairs {
            let gid = gid.into();
            let gi = *group_index.entry(gid.clone()).or_insert_with(|| {
                groups.push(CaptionGroup {
                    group_id: gid,
                    captions: Vec::new(),
                });
                caption_index.push(HashMap::new());
                groups.len() - 1
            });
            let mut intern = |s: String| -> u32 {
                let g = &mut groups[gi];
                *caption_index[gi].entry(s.clone()).or_insert_with(|| {
                    g.captions.push(s);
                    (g.captions.len() - 1) as u32
                })
            };
            let source = intern(src.into());
            let target = intern(tgt.into());
            out.push(PairIndex {
                group: gi as u32,
                source,
                target,
            });
        }
        PairDataset { groups, pairs: out }
    }

    pub fn write_tsv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        for p in self.iter() {
            writeln!(w, "{}\t{}\t{}", p.group_id, p.source, p.target)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_tsv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::parse(path, i + 1, "expected group_id<TAB>source<TAB>target"));
            }
            rows.push((fields[0], fields[1], fields[2]));
        }
        Ok(Self::from_pairs(rows))
    }
}

/// Read `group_id<TAB>caption` lines; groups keep first-seen order.
pub fn load_caption_groups(path: impl AsRef<Path>) -> Result<Vec<CaptionGroup>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut groups: Vec<CaptionGroup> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let Some((gid, caption)) = line.split_once('\t') else {
            return Err(Error::parse(path, i + 1, "expected group_id<TAB>caption"));
        };
        if gid.is_empty() || caption.contains('\t') {
            return Err(Error::parse(path, i + 1, "expected group_id<TAB>caption"));
        }
        let gi = *index.entry(gid.to_string()).or_insert_with(|| {
            groups.push(CaptionGroup {
                group_id: gid.to_string(),
                captions: Vec::new(),
            });
            groups.len() - 1
        });
        groups[gi].captions.push(caption.to_string());
    }
    Ok(groups)
}
