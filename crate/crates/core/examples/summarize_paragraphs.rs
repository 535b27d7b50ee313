//! Encode sentences with a paraphrase encoder, then train the hierarchical
//! summarizer on generated paragraphs and print its summaries.
//!
//! cargo run --release --example summarize_paragraphs

use sent2vec::datasets::{build_pairs, synthetic};
use sent2vec::eval::bleu;
use sent2vec::hier::{sentence_vectors, HierConfig, HierModel, HierTrainOptions, HierTrainer, SummaryExample};
use sent2vec::numerics::Optimizer;
use sent2vec::seq2seq::{EncoderDecoderModel, Seq2SeqConfig, Seq2SeqTrainer, TrainExample, TrainOptions};
use sent2vec::text::{build_vocab, tokenize};

fn main() -> sent2vec::Result<()> {
    let records = synthetic::summary_records(20, 8, 7)?;
    let sentences: Vec<String> = records.iter().flat_map(|r| r.detailed.clone()).collect();
    let word_vocab = build_vocab(sentences.iter().map(|s| tokenize(s)), 100)?;

    // sentence encoder: paraphrase model over the scenes the paragraphs use
    let pairs = build_pairs(synthetic::caption_groups(40, 4, 3)?);
    let data: Vec<TrainExample> = pairs
        .iter()
        .map(|p| TrainExample::new(&word_vocab.encode(&tokenize(p.source)), &word_vocab.encode(&tokenize(p.target)), 30))
        .collect();
    let mut cfg = Seq2SeqConfig::new(word_vocab.len());
    cfg.d_w = 32;
    cfg.d_h = 64;
    let opts = TrainOptions { batch_size: 32, n_samples: Some(20), clip_norm: 5.0, seed: 3 };
    let mut enc = Seq2SeqTrainer::new(EncoderDecoderModel::<f32>::new(cfg, 3)?, Optimizer::adam(0.005)?, opts)?;
    for _ in 0..10 {
        enc.train_epoch(&data)?;
    }

    let summary_vocab = build_vocab(records.iter().map(|r| tokenize(&r.summary)), 100)?;
    let inputs = records
        .iter()
        .map(|r| sentence_vectors::<f32>(&enc.model, &word_vocab, &r.detailed))
        .collect::<sent2vec::Result<Vec<_>>>()?;
    let train = records
        .iter()
        .zip(&inputs)
        .map(|(r, v)| SummaryExample::new(v.clone(), &summary_vocab.encode(&tokenize(&r.summary)), 30))
        .collect::<sent2vec::Result<Vec<_>>>()?;

    let cfg = HierConfig { d_chunk: 32, d_para: 32, d_attn: 16, d_dec: 32, d_emb: 16, ..HierConfig::new(64, summary_vocab.len()) };
    let opts = HierTrainOptions { batch_size: 20, clip_norm: 5.0, seed: 8 };
    let mut tr = HierTrainer::new(HierModel::<f32>::new(cfg, 8)?, Optimizer::adam(0.005)?, opts)?;
    for epoch in 1..=300 {
        let loss = tr.train_epoch(&train)?;
        if epoch % 50 == 0 {
            println!("epoch {epoch:3}  loss {loss:.4}");
        }
    }

    let refs: Vec<Vec<Vec<String>>> = records.iter().map(|r| vec![tokenize(&r.summary)]).collect();
    let cands = inputs
        .iter()
        .map(|v| Ok(summary_vocab.decode(&tr.model.summarize(v, 30)?)))
        .collect::<sent2vec::Result<Vec<_>>>()?;
    println!("train BLEU-1 {:.3}", bleu(&cands, &refs, 1)?[0]);
    println!("max |Σ attention − 1| {:.1e}", tr.max_attention_deviation);
    for (r, c) in records.iter().zip(&cands).take(3) {
        println!("\n{}\n  gold:  {}\n  model: {}", r.detailed.join(" / "), r.summary, c.join(" "));
    }
    let enc = tr.model.encode_paragraph(&inputs[0])?;
    println!("\nparagraph vector width {}, chunk attention at the last step {:?}", enc.paragraph_vec.values.len(), enc.chunk_weights.last());
    Ok(())
}
