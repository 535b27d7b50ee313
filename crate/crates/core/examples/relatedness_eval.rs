//! Relatedness on planted sentence pairs: distance check and the
//! [a⊙b ; |a−b|] regressor, reported as r / ρ / MSE.
//!
//! cargo run --release --example relatedness_eval

use sent2vec::datasets::{build_pairs, synthetic};
use sent2vec::eval::{
    distance_relatedness_check, encode_pairs, mse, pearson, spearman, MetricReport, RegressorOptions, RelatednessRegressor,
    RelatednessScores,
};
use sent2vec::numerics::Optimizer;
use sent2vec::seq2seq::{EncoderDecoderModel, Seq2SeqConfig, Seq2SeqTrainer, TrainExample, TrainOptions};
use sent2vec::text::{build_vocab, tokenize};

fn main() -> sent2vec::Result<()> {
    let groups = synthetic::caption_groups(3000, 2, 19)?;
    let all: Vec<Vec<String>> = synthetic::scenes(4096, 0)?.iter().map(|s| tokenize(&s.caption(0))).collect();
    let vocab = build_vocab(all.into_iter().chain(groups.iter().flat_map(|g| g.captions.iter().map(|c| tokenize(c)))), 100)?;
    let pairs = build_pairs(groups);
    let data: Vec<TrainExample> = pairs
        .iter()
        .map(|p| TrainExample::new(&vocab.encode(&tokenize(p.source)), &vocab.encode(&tokenize(p.target)), 30))
        .collect();
    let mut cfg = Seq2SeqConfig::new(vocab.len());
    cfg.d_w = 32;
    cfg.d_h = 128;
    let opts = TrainOptions { batch_size: 32, n_samples: Some(20), clip_norm: 5.0, seed: 4 };
    let mut tr = Seq2SeqTrainer::new(EncoderDecoderModel::<f32>::new(cfg, 4)?, Optimizer::adam(0.005)?, opts)?;
    for epoch in 1..=5 {
        println!("encoder epoch {epoch}: loss {:.4}", tr.train_epoch(&data)?);
    }

    let train = encode_pairs(&synthetic::relatedness_records(200, 0, 92), &tr.model, &vocab)?;
    let test = encode_pairs(&synthetic::relatedness_records(200, 0, 91), &tr.model, &vocab)?;
    let reg = RelatednessRegressor::train(&train, &RegressorOptions { epochs: 200, seed: 9, ..Default::default() })?;
    let pred = test.iter().map(|p| reg.predict(p)).collect::<sent2vec::Result<Vec<_>>>()?;
    let gold: Vec<f64> = test.iter().map(|p| p.gold).collect();
    let report = MetricReport {
        relatedness: Some(RelatednessScores { pearson_r: pearson(&pred, &gold)?, spearman_rho: spearman(&pred, &gold)?, mse: mse(&pred, &gold)? }),
        distance_rho: Some(distance_relatedness_check(&test)?),
        summary: None,
    };
    print!("{}{}", report.tsv(), report.key_values());
    Ok(())
}
