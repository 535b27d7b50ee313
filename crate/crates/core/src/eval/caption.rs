use std::collections::{HashMap, HashSet};

use crate::{Error, Result};

/// β for ROUGE-L, as in the usual caption evaluation toolkits.
pub const ROUGE_BETA: f64 = 1.2;

type Gram<'a> = &'a [String];

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<Gram<'_>, usize> {
    let mut out = HashMap::new();
    if n > 0 && tokens.len() >= n {
        for g in tokens.windows(n) {
            *out.entry(g).or_insert(0) += 1;
        }
    }
    out
}

fn check_corpus(candidates: usize, references: &[Vec<Vec<String>>]) -> Result<()> {
    if candidates == 0 {
        return Err(Error::Empty("candidate corpus"));
    }
    if candidates != references.len() {
        return Err(Error::shape(candidates, references.len()));
    }
    if references.iter().any(|r| r.is_empty()) {
        return Err(Error::Empty("reference list"));
    }
    Ok(())
}

/// Corpus-level BLEU-1 through BLEU-`max_n`.
///
/// Clipped n-gram counts are summed over the corpus; the reference length is
/// the sum of each item's closest reference length (shorter wins ties).
/// Unsmoothed: a zero precision at any order up to k makes BLEU-k zero.
pub fn bleu(candidates: &[Vec<String>], references: &[Vec<Vec<String>>], max_n: usize) -> Result<Vec<f64>> {
    check_corpus(candidates.len(), references)?;
    if max_n == 0 {
        return Err(Error::invalid("max_n must be positive"));
    }
    let mut matched = vec![0usize; max_n];
    let mut total = vec![0usize; max_n];
    let (mut c_len, mut r_len) = (0usize, 0usize);
    for (cand, refs) in candidates.iter().zip(references) {
        c_len += cand.len();
        r_len += refs
            .iter()
            .map(|r| r.len())
            .min_by_key(|&l| (l.abs_diff(cand.len()), l))
            .unwrap_or(0);
        for n in 1..=max_n {
            let counts = ngram_counts(cand, n);
            let mut max_ref: HashMap<Gram<'_>, usize> = HashMap::new();
            for r in refs {
                for (g, c) in ngram_counts(r, n) {
                    let e = max_ref.entry(g).or_insert(0);
                    *e = (*e).max(c);
                }
            }
            for (g, c) in counts {
                matched[n - 1] += c.min(max_ref.get(g).copied().unwrap_or(0));
                total[n - 1] += c;
            }
        }
    }
    if c_len == 0 {
        return Ok(vec![0.0; max_n]);
    }
    let bp = if c_len < r_len {
        (1.0 - r_len as f64 / c_len as f64).exp()
    } else {
        1.0
    };
    let mut out = Vec::with_capacity(max_n);
    let mut log_sum = 0.0;
    let mut zero = false;
    for n in 0..max_n {
        if matched[n] == 0 || total[n] == 0 {
            zero = true;
        } else {
            log_sum += (matched[n] as f64 / total[n] as f64).ln();
        }
        out.push(if zero { 0.0 } else { bp * (log_sum / (n + 1) as f64).exp() });
    }
    Ok(out)
}

fn lcs(a: &[String], b: &[String]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { cur[j].max(prev[j + 1]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Mean ROUGE-L F-measure (β = 1.2).
///
/// With several references, precision and recall are each maximized over
/// references before combining.
pub fn rouge_l(candidates: &[Vec<String>], references: &[Vec<Vec<String>>]) -> Result<f64> {
    check_corpus(candidates.len(), references)?;
    let b2 = ROUGE_BETA * ROUGE_BETA;
    let mut total = 0.0;
    for (cand, refs) in candidates.iter().zip(references) {
        let (mut p, mut r) = (0.0f64, 0.0f64);
        for rf in refs {
            let l = lcs(cand, rf) as f64;
            if !cand.is_empty() {
                p = p.max(l / cand.len() as f64);
            }
            if !rf.is_empty() {
                r = r.max(l / rf.len() as f64);
            }
        }
        if p > 0.0 && r > 0.0 {
            total += (1.0 + b2) * p * r / (r + b2 * p);
        }
    }
    Ok(total / candidates.len() as f64)
}

fn tfidf<'a>(tokens: &'a [String], n: usize, idf: &dyn Fn(Gram<'_>) -> f64) -> (HashMap<Gram<'a>, f64>, f64) {
    let v: HashMap<Gram<'a>, f64> = ngram_counts(tokens, n)
        .into_iter()
        .map(|(g, c)| (g, c as f64 * idf(g)))
        .collect();
    let norm = v.values().map(|x| x * x).sum::<f64>().sqrt();
    (v, norm)
}

/// Plain CIDEr (no length penalty or count clipping), times 10.
///
/// For n = 1..4 each sentence becomes a vector of `count · idf` over its
/// n-grams, with `idf = ln N − ln max(1, df)` and df counted over the
/// reference sets of the N corpus items. The score averages, over n, the mean
/// cosine between candidate and each reference.
pub fn cider(candidates: &[Vec<String>], references: &[Vec<Vec<String>>]) -> Result<f64> {
    check_corpus(candidates.len(), references)?;
    if candidates.len() < 2 {
        return Err(Error::invalid("CIDEr needs at least two corpus items for idf"));
    }
    const MAX_N: usize = 4;
    let log_n = (candidates.len() as f64).ln();
    let mut score = 0.0;
    for n in 1..=MAX_N {
        let mut df: HashMap<Gram<'_>, usize> = HashMap::new();
        for refs in references {
            let grams: HashSet<Gram<'_>> = refs.iter().flat_map(|r| ngram_counts(r, n).into_keys()).collect();
            for g in grams {
                *df.entry(g).or_insert(0) += 1;
            }
        }
        let idf = |g: Gram<'_>| log_n - (df.get(g).copied().unwrap_or(0).max(1) as f64).ln();
        for (cand, refs) in candidates.iter().zip(references) {
            let (cv, cn) = tfidf(cand, n, &idf);
            let mut item = 0.0;
            for r in refs {
                let (rv, rn) = tfidf(r, n, &idf);
                if cn > 0.0 && rn > 0.0 {
                    let d: f64 = cv.iter().filter_map(|(g, x)| rv.get(g).map(|y| x * y)).sum();
                    item += d / (cn * rn);
                }
            }
            score += item / refs.len() as f64;
        }
    }
    Ok(score / MAX_N as f64 / candidates.len() as f64 * 10.0)
}
