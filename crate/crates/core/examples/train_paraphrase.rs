//! Train the paraphrase encoder-decoder on generated caption groups until it
//! reproduces every target, then print a few greedy paraphrases.
//!
//! cargo run --release --example train_paraphrase

use std::time::Instant;

use sent2vec::datasets::{build_pairs, synthetic};
use sent2vec::numerics::Optimizer;
use sent2vec::seq2seq::{EncoderDecoderModel, LossMode, Seq2SeqConfig, Seq2SeqTrainer, TrainExample, TrainOptions};
use sent2vec::text::{build_vocab, detokenize, tokenize};

fn main() -> sent2vec::Result<()> {
    let pairs = build_pairs(synthetic::caption_groups(32, 2, 5)?);
    let vocab = build_vocab(pairs.sentences().map(tokenize), 100)?;
    let data: Vec<TrainExample> = pairs
        .iter()
        .map(|p| TrainExample::new(&vocab.encode(&tokenize(p.source)), &vocab.encode(&tokenize(p.target)), 30))
        .collect();
    println!("{} pairs, |V| = {}", data.len(), vocab.len());

    let mut cfg = Seq2SeqConfig::new(vocab.len());
    cfg.d_w = 32;
    cfg.d_h = 64;
    let model = EncoderDecoderModel::<f32>::new(cfg, 1)?;
    let opts = TrainOptions { batch_size: 16, n_samples: Some(20), clip_norm: 5.0, seed: 1 };
    let mut trainer = Seq2SeqTrainer::new(model, Optimizer::adam(0.01)?, opts)?;

    let start = Instant::now();
    while trainer.steps_taken() < 2000 {
        trainer.train_epoch(&data)?;
        if trainer.steps_taken() % 100 == 0 {
            let full = trainer.model.batch_loss(&data, &mut LossMode::Full, 0)?;
            let exact = data
                .iter()
                .filter(|ex| trainer.model.generate(&ex.source, 30).ok().as_deref() == Some(&ex.decoder[1..ex.decoder.len() - 1]))
                .count();
            println!("step {:5}  full-softmax loss {full:.4}  exact {exact}/{}", trainer.steps_taken(), data.len());
            if full < 0.1 && exact * 10 >= data.len() * 9 {
                break;
            }
        }
    }
    println!("trained in {:.1?}", start.elapsed());
    for p in pairs.iter().take(4) {
        let out = trainer.model.generate(&vocab.encode(&tokenize(p.source)), 30)?;
        println!("{}  ->  {}", p.source, detokenize(&vocab.decode(&out)));
    }
    Ok(())
}
