//! Project sentence vectors of several paraphrase groups to 2-D and print the
//! points; captions of one scene should land together.
//!
//! cargo run --release --example pca_projection

use sent2vec::datasets::{build_pairs, synthetic};
use sent2vec::numerics::Optimizer;
use sent2vec::project::pca_project;
use sent2vec::seq2seq::{EncoderDecoderModel, Seq2SeqConfig, Seq2SeqTrainer, TrainExample, TrainOptions};
use sent2vec::text::{build_vocab, tokenize};

fn main() -> sent2vec::Result<()> {
    let groups = synthetic::caption_groups(5, 8, 11)?;
    let vocab = build_vocab(groups.iter().flat_map(|g| g.captions.iter().map(|c| tokenize(c))), 100)?;
    let pairs = build_pairs(groups.clone());
    let data: Vec<TrainExample> = pairs
        .iter()
        .map(|p| TrainExample::new(&vocab.encode(&tokenize(p.source)), &vocab.encode(&tokenize(p.target)), 30))
        .collect();
    let mut cfg = Seq2SeqConfig::new(vocab.len());
    cfg.d_w = 32;
    cfg.d_h = 64;
    let opts = TrainOptions { batch_size: 32, n_samples: Some(20), clip_norm: 5.0, seed: 4 };
    let mut tr = Seq2SeqTrainer::new(EncoderDecoderModel::<f32>::new(cfg, 4)?, Optimizer::adam(0.005)?, opts)?;
    for _ in 0..20 {
        tr.train_epoch(&data)?;
    }

    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    for g in &groups {
        for c in &g.captions {
            vectors.push(tr.model.encode_text(&vocab, c)?.values.iter().map(|&x| x as f64).collect());
            labels.push((g.group_id.clone(), c.clone()));
        }
    }
    let proj = pca_project(&vectors, &labels)?;
    print!("{}", proj.variance_text());
    print!("{}", proj.to_tsv());
    Ok(())
}
