use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::config::RunConfig;
use super::*;
use crate::checkpoint::{read_vectors, write_vectors, Checkpoint};
use crate::datasets::{
    self as datasets, holdout_indices, holdout_split, load_caption_groups, load_paragraphs, load_relatedness, PairDataset,
    ParagraphRecord, SplitSize,
};
use crate::eval::{
    bleu, cider, distance_relatedness_check, encode_pairs, mse, pearson, rouge_l, spearman, MetricReport,
    RegressorOptions, RelatednessRegressor, RelatednessScores, SummaryScores,
};
use crate::hier::{sentence_vectors, HierModel, HierTrainOptions, HierTrainer, SummaryExample};
use crate::numerics::{OptimKind, Optimizer};
use crate::project::pca_project;
use crate::seq2seq::{EncoderDecoderModel, LogRecord, Seq2SeqTrainer, TrainExample, TrainOptions};
use crate::text::{build_vocab, detokenize, load_embeddings, tokenize, Vocabulary};
use crate::{Error, Result};

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

fn require_file(p: &Path) -> Result<()> {
    if !p.is_file() {
        return Err(Error::invalid(format!("{} does not exist", p.display())));
    }
    Ok(())
}

fn optim_kind(a: OptimizerArg) -> OptimKind {
    match a {
        OptimizerArg::Sgd => OptimKind::SgdDecay,
        OptimizerArg::Adam => OptimKind::Adam,
    }
}

/// Append `(step, epoch, loss, lr)` rows, writing the header into a new file.
fn append_log(path: &Path, records: &[LogRecord]) -> Result<()> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut f = std::io::BufWriter::new(OpenOptions::new().create(true).append(true).open(path)?);
    if fresh {
        writeln!(f, "step\tepoch\tloss\tlr")?;
    }
    for r in records {
        writeln!(f, "{}", r.tsv())?;
    }
    f.flush()?;
    Ok(())
}

/// The explicit vocabulary, or the one recorded in the checkpoint. A
/// recorded relative path that does not resolve from the working directory
/// is tried next to the checkpoint.
fn vocab_for(ckpt: &Checkpoint, ckpt_path: &Path, explicit: Option<&PathBuf>) -> Result<Vocabulary> {
    let path = match explicit {
        Some(p) => p.clone(),
        None => match ckpt.get("vocab.path") {
            Some(p) if !p.is_empty() => {
                let p = PathBuf::from(p);
                match (p.is_file(), p.file_name(), ckpt_path.parent()) {
                    (false, Some(name), Some(dir)) if p.is_relative() => dir.join(name),
                    _ => p,
                }
            }
            _ => return Err(Error::invalid("checkpoint records no vocabulary path; pass it explicitly")),
        },
    };
    require_file(&path)?;
    let vocab = Vocabulary::load(&path)?;
    ckpt.verify_vocab(&vocab)?;
    Ok(vocab)
}

fn load_encoder(path: &Path, vocab: Option<&PathBuf>) -> Result<(EncoderDecoderModel<f32>, Vocabulary)> {
    require_file(path)?;
    let ck = Checkpoint::load(path)?;
    let model = ck.paraphrase_model()?;
    let vocab = vocab_for(&ck, path, vocab)?;
    Ok((model, vocab))
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    require_file(path)?;
    Ok(std::fs::read_to_string(path)?.lines().map(str::to_string).collect())
}

pub(super) fn build_pairs_cmd(a: BuildPairsArgs, out: &mut dyn Write) -> Result<()> {
    require_file(&a.captions)?;
    let groups = load_caption_groups(&a.captions)?;
    let n_groups = groups.len();
    let all = datasets::build_pairs(groups);
    match &a.test_out {
        Some(test_path) => {
            let (train, test) = holdout_split(&all, a.holdout, a.seed)?;
            train.write_tsv(&a.out)?;
            test.write_tsv(test_path)?;
            writeln!(out, "groups={n_groups}\ntrain_pairs={}\ntest_pairs={}", train.len(), test.len())?;
        }
        None => {
            all.write_tsv(&a.out)?;
            writeln!(out, "groups={n_groups}\npairs={}", all.len())?;
        }
    }
    Ok(())
}

/// Vocabulary-encoded pairs; pairs whose source has no tokens are skipped.
fn paraphrase_examples(pairs: &PairDataset, vocab: &Vocabulary, max_len: usize) -> (Vec<TrainExample>, usize) {
    let mut skipped = 0;
    let mut data = Vec::with_capacity(pairs.len());
    for p in pairs.iter() {
        let src = vocab.encode(&tokenize(p.source));
        let tgt = vocab.encode(&tokenize(p.target));
        if src.is_empty() || tgt.is_empty() {
            skipped += 1;
            continue;
        }
        data.push(TrainExample::new(&src, &tgt, max_len));
    }
    (data, skipped)
}

pub(super) fn train_paraphrase(a: TrainParaphraseArgs, out: &mut dyn Write) -> Result<()> {
    let vocab_out = a.vocab_out.clone().unwrap_or_else(|| with_suffix(&a.out, ".vocab"));
    let log_path = a.log.clone().unwrap_or_else(|| with_suffix(&a.out, ".log.tsv"));
    let mut run = RunConfig {
        command: "train-paraphrase".into(),
        seed: a.seed,
        vocab_size: a.vocab_size,
        d_w: a.dw,
        d_h: a.dh,
        max_len: a.max_len,
        n_samples: a.n_samples,
        batch_size: a.batch_size,
        optimizer: optim_kind(a.optimizer),
        lr: a.lr,
        decay: a.decay,
        epochs: a.epochs,
        max_steps: a.max_steps,
        clip_norm: a.clip,
        reverse_encoder_input: !a.no_reverse,
        freeze_embeddings: a.freeze_embeddings,
        ..RunConfig::default()
    };
    run.paths.insert("pairs".into(), path_string(&a.pairs));
    run.paths.insert("vocab".into(), path_string(&vocab_out));
    run.paths.insert("log".into(), path_string(&log_path));
    if let Some(e) = &a.embeddings {
        require_file(e)?;
        run.paths.insert("embeddings".into(), path_string(e));
    }
    run.validate()?;
    require_file(&a.pairs)?;

    let pairs = PairDataset::read_tsv(&a.pairs)?;
    if pairs.is_empty() {
        return Err(Error::Empty("pair file"));
    }
    let vocab = build_vocab(pairs.sentences().map(tokenize), run.vocab_size)?;
    let (data, skipped) = paraphrase_examples(&pairs, &vocab, run.max_len);
    if data.is_empty() {
        return Err(Error::Empty("training pairs after tokenization"));
    }
    let cfg = run.seq2seq_config(vocab.len());
    let model = match &a.embeddings {
        Some(path) => {
            let (table, found) = load_embeddings::<f32>(path, &vocab, cfg.d_w, run.seed)?;
            writeln!(out, "embeddings_found={found}")?;
            EncoderDecoderModel::with_embeddings(cfg, table, run.seed)?
        }
        None => EncoderDecoderModel::new(cfg, run.seed)?,
    };
    let n_samples = match run.n_samples {
        0 => None,
        n if n >= vocab.len() => {
            eprintln!("note: n_samples {n} lowered to {} for a {}-word vocabulary", vocab.len() - 1, vocab.len());
            Some(vocab.len() - 1)
        }
        n => Some(n),
    };
    let optimizer = Optimizer::new(run.optimizer, run.lr, run.decay)?;
    let opts = TrainOptions { batch_size: run.batch_size, n_samples, clip_norm: run.clip_norm, seed: run.seed };
    let mut trainer = Seq2SeqTrainer::new(model, optimizer, opts)?;
    let limit = if run.max_steps == 0 { u64::MAX } else { run.max_steps };
    for _ in 0..run.epochs {
        trainer.train_epoch_until(&data, limit)?;
        if trainer.steps_taken() >= limit {
            break;
        }
    }
    vocab.save(&vocab_out)?;
    append_log(&log_path, &trainer.log)?;
    let mut ck = Checkpoint::from_paraphrase(&trainer.model, &vocab, Some(&vocab_out))?;
    for (k, v) in run.to_pairs() {
        ck.set(&k, v);
    }
    ck.set("train.n_samples_effective", n_samples.unwrap_or(0).to_string());
    ck.save(&a.out)?;
    let last = trainer.log.last().map_or(f64::NAN, |r| r.loss);
    writeln!(
        out,
        "pairs={}\nskipped={skipped}\nvocab={}\nsteps={}\nfinal_loss={last}",
        data.len(),
        vocab.len(),
        trainer.steps_taken()
    )?;
    Ok(())
}

pub(super) fn encode(a: EncodeArgs, out: &mut dyn Write) -> Result<()> {
    let (model, vocab) = load_encoder(&a.checkpoint, a.vocab.as_ref())?;
    let lines = read_lines(&a.input)?;
    let vecs = lines
        .iter()
        .map(|l| Ok(model.encode_text(&vocab, l)?.values))
        .collect::<Result<Vec<_>>>()?;
    write_vectors(&a.out, &vecs)?;
    writeln!(out, "count={}\nwidth={}", vecs.len(), model.hidden_width())?;
    Ok(())
}

fn paragraph_inputs(
    records: &[ParagraphRecord],
    encoder: &EncoderDecoderModel<f32>,
    vocab: &Vocabulary,
) -> Result<Vec<Vec<Vec<f32>>>> {
    records.iter().map(|r| sentence_vectors::<f32>(encoder, vocab, &r.detailed)).collect()
}

fn write_paragraphs(path: &Path, records: &[ParagraphRecord]) -> Result<()> {
    let mut s = String::new();
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        for d in &r.detailed {
            s.push_str(d);
            s.push('\n');
        }
        s.push_str(&r.summary);
        s.push('\n');
    }
    std::fs::write(path, s)?;
    Ok(())
}

pub(super) fn train_summarizer(a: TrainSummarizerArgs, out: &mut dyn Write) -> Result<()> {
    let vocab_out = a.vocab_out.clone().unwrap_or_else(|| with_suffix(&a.out, ".vocab"));
    let log_path = a.log.clone().unwrap_or_else(|| with_suffix(&a.out, ".log.tsv"));
    let mut run = RunConfig {
        command: "train-summarizer".into(),
        seed: a.seed,
        vocab_size: a.vocab_size,
        max_len: a.max_len,
        n_samples: 0,
        batch_size: a.batch_size,
        optimizer: optim_kind(a.optimizer),
        lr: a.lr,
        decay: a.decay,
        epochs: a.epochs,
        max_steps: a.max_steps,
        clip_norm: a.clip,
        chunk_size: a.chunk_size,
        stride: a.stride,
        d_chunk: a.d_chunk,
        d_para: a.d_para,
        d_attn: a.d_attn,
        d_dec: a.d_dec,
        d_emb: a.d_emb,
        ..RunConfig::default()
    };
    run.paths.insert("paragraphs".into(), path_string(&a.paragraphs));
    run.paths.insert("encoder".into(), path_string(&a.encoder));
    run.paths.insert("vocab".into(), path_string(&vocab_out));
    run.validate()?;
    if a.holdout_count > 0 && a.test_out.is_none() {
        return Err(Error::invalid("--holdout-count needs --test-out"));
    }
    require_file(&a.paragraphs)?;
    let (encoder, enc_vocab) = load_encoder(&a.encoder, a.encoder_vocab.as_ref())?;
    run.d_h = encoder.hidden_width();

    let corpus = load_paragraphs(&a.paragraphs)?;
    let mut records = corpus.records;
    if records.is_empty() {
        return Err(Error::Empty("paragraph file"));
    }
    if let Some(test_path) = &a.test_out {
        let (train_idx, test_idx) = holdout_indices(records.len(), SplitSize::Count(a.holdout_count), run.seed)?;
        let test: Vec<ParagraphRecord> = test_idx.iter().map(|&i| records[i].clone()).collect();
        write_paragraphs(test_path, &test)?;
        records = train_idx.iter().map(|&i| records[i].clone()).collect();
    }
    let vocab = build_vocab(records.iter().map(|r| tokenize(&r.summary)), run.vocab_size)?;
    let inputs = paragraph_inputs(&records, &encoder, &enc_vocab)?;
    let data = records
        .iter()
        .zip(inputs)
        .enumerate()
        .map(|(i, (r, v))| {
            SummaryExample::new(v, &vocab.encode(&tokenize(&r.summary)), run.max_len)
                .map_err(|_| Error::Record { id: format!("paragraph {}", i + 1), message: "empty summary".into() })
        })
        .collect::<Result<Vec<_>>>()?;
    let model = HierModel::<f32>::new(run.hier_config(encoder.hidden_width(), vocab.len()), run.seed)?;
    let optimizer = Optimizer::new(run.optimizer, run.lr, run.decay)?;
    let opts = HierTrainOptions { batch_size: run.batch_size, clip_norm: run.clip_norm, seed: run.seed };
    let mut trainer = HierTrainer::new(model, optimizer, opts)?;
    let limit = if run.max_steps == 0 { u64::MAX } else { run.max_steps };
    for _ in 0..run.epochs {
        trainer.train_epoch_until(&data, limit)?;
        if trainer.steps_taken() >= limit {
            break;
        }
    }
    vocab.save(&vocab_out)?;
    append_log(&log_path, &trainer.log)?;
    let mut ck = Checkpoint::from_summarizer(&trainer.model, &vocab, Some(&vocab_out))?;
    for (k, v) in run.to_pairs() {
        ck.set(&k, v);
    }
    ck.set("encoder.sha256_vocab", enc_vocab.content_hash());
    ck.save(&a.out)?;
    let last = trainer.log.last().map_or(f64::NAN, |r| r.loss);
    writeln!(
        out,
        "records={}\nskipped_long={}\nvocab={}\nsteps={}\nfinal_loss={last}\nmax_attention_deviation={:e}",
        data.len(),
        corpus.skipped,
        vocab.len(),
        trainer.steps_taken(),
        trainer.max_attention_deviation
    )?;
    Ok(())
}

pub(super) fn summarize(a: SummarizeArgs, out: &mut dyn Write) -> Result<()> {
    require_file(&a.checkpoint)?;
    let ck = Checkpoint::load(&a.checkpoint)?;
    let model = ck.summarizer_model()?;
    let vocab = vocab_for(&ck, &a.checkpoint, a.vocab.as_ref())?;
    let (encoder, enc_vocab) = load_encoder(&a.encoder, a.encoder_vocab.as_ref())?;
    if encoder.hidden_width() != model.config.d_in {
        return Err(Error::Mismatch(format!(
            "encoder width {} differs from summarizer input width {}",
            encoder.hidden_width(),
            model.config.d_in
        )));
    }
    require_file(&a.paragraphs)?;
    let records = load_paragraphs(&a.paragraphs)?.records;
    let max_len = a.max_len.unwrap_or(model.config.max_len);
    let mut text = String::new();
    for v in paragraph_inputs(&records, &encoder, &enc_vocab)? {
        let ids = model.summarize(&v, max_len)?;
        text.push_str(&detokenize(&vocab.decode(&ids)));
        text.push('\n');
    }
    std::fs::write(&a.out, text)?;
    writeln!(out, "summaries={}", records.len())?;
    Ok(())
}

pub(super) fn eval_relatedness(a: EvalRelatednessArgs, out: &mut dyn Write) -> Result<()> {
    let (encoder, vocab) = load_encoder(&a.encoder, a.vocab.as_ref())?;
    require_file(&a.records)?;
    let records = load_relatedness(&a.records)?;
    let (train, test) = match &a.train {
        Some(p) => {
            require_file(p)?;
            (load_relatedness(p)?, records)
        }
        None => {
            let (tr, te) = holdout_indices(records.len(), SplitSize::Fraction(a.holdout), a.seed)?;
            (
                tr.iter().map(|&i| records[i].clone()).collect(),
                te.iter().map(|&i| records[i].clone()).collect(),
            )
        }
    };
    let train = encode_pairs(&train, &encoder, &vocab)?;
    let test = encode_pairs(&test, &encoder, &vocab)?;
    let opts = RegressorOptions { hidden: a.hidden, epochs: a.epochs, learning_rate: a.lr, seed: a.seed, ..Default::default() };
    let reg = RelatednessRegressor::train(&train, &opts)?;
    let pred = test.iter().map(|p| reg.predict(p)).collect::<Result<Vec<_>>>()?;
    let gold: Vec<f64> = test.iter().map(|p| p.gold).collect();
    let report = MetricReport {
        relatedness: Some(RelatednessScores {
            pearson_r: pearson(&pred, &gold)?,
            spearman_rho: spearman(&pred, &gold)?,
            mse: mse(&pred, &gold)?,
        }),
        distance_rho: Some(distance_relatedness_check(&test)?),
        summary: None,
    };
    write!(out, "train_pairs={}\ntest_pairs={}\n{}", train.len(), test.len(), report.key_values())?;
    if let Some(p) = &a.out {
        std::fs::write(p, report.tsv())?;
    }
    Ok(())
}

pub(super) fn eval_summarization(a: EvalSummarizationArgs, out: &mut dyn Write) -> Result<()> {
    let cands: Vec<Vec<String>> = read_lines(&a.candidates)?.iter().map(|l| tokenize(l)).collect();
    let refs: Vec<Vec<Vec<String>>> = read_lines(&a.references)?
        .iter()
        .map(|l| l.split('\t').map(tokenize).collect())
        .collect();
    if cands.len() != refs.len() {
        return Err(Error::Mismatch(format!("{} candidates but {} reference lines", cands.len(), refs.len())));
    }
    let b = bleu(&cands, &refs, 4)?;
    let report = MetricReport {
        relatedness: None,
        distance_rho: None,
        summary: Some(SummaryScores {
            bleu: [b[0], b[1], b[2], b[3]],
            rouge_l: rouge_l(&cands, &refs)?,
            cider: cider(&cands, &refs)?,
        }),
    };
    write!(out, "items={}\n{}", cands.len(), report.key_values())?;
    if let Some(p) = &a.out {
        std::fs::write(p, report.tsv())?;
    }
    Ok(())
}

pub(super) fn project(a: ProjectArgs, out: &mut dyn Write) -> Result<()> {
    require_file(&a.vectors)?;
    let vecs: Vec<Vec<f64>> = read_vectors(&a.vectors)?
        .into_iter()
        .map(|v| v.into_iter().map(f64::from).collect())
        .collect();
    let labels: Vec<(String, String)> = match &a.labels {
        Some(p) => read_lines(p)?
            .into_iter()
            .map(|l| match l.split_once('\t') {
                Some((g, lab)) => (g.to_string(), lab.to_string()),
                None => (l.clone(), l),
            })
            .collect(),
        None => (0..vecs.len()).map(|i| (i.to_string(), i.to_string())).collect(),
    };
    if labels.len() != vecs.len() {
        return Err(Error::Mismatch(format!("{} vectors but {} label lines", vecs.len(), labels.len())));
    }
    let p = pca_project(&vecs, &labels)?;
    p.write(&a.out)?;
    let r = p.explained_ratio();
    writeln!(out, "points={}\nexplained_ratio_1={:.6}\nexplained_ratio_2={:.6}", vecs.len(), r[0], r[1])?;
    Ok(())
}

pub(super) fn inspect(a: InspectArgs, out: &mut dyn Write) -> Result<()> {
    require_file(&a.checkpoint)?;
    let ck = Checkpoint::load(&a.checkpoint)?;
    write!(out, "{}", ck.describe())?;
    Ok(())
}
