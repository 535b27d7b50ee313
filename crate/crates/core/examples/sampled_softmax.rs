//! Log-uniform candidate sampling: class probabilities, expected counts and
//! the corrected candidate loss next to the full softmax.
//!
//! cargo run --example sampled_softmax

use sent2vec::numerics::seeded_rng;
use sent2vec::seq2seq::{EncoderDecoderModel, LogUniformSampler, Seq2SeqConfig};

fn main() -> sent2vec::Result<()> {
    let mut sampler = LogUniformSampler::new(1000, 20)?;
    for id in [0, 1, 9, 99, 999] {
        println!("P({id:3}) = {:.5}   expected count among 20 = {:.4}", sampler.probability(id), sampler.expected_count(7, id));
    }
    let mut rng = seeded_rng(1);
    let c = sampler.sample(7, &mut rng);
    println!("target 7, sampled {:?}", c.sampled_ids);

    // with n = |V| − 1 every class lands in the candidate set
    let mut cfg = Seq2SeqConfig::new(50);
    cfg.d_w = 8;
    cfg.d_h = 16;
    let model = EncoderDecoderModel::<f64>::new(cfg, 3)?;
    let h: Vec<f64> = (0..16).map(|i| (i as f64 * 0.7).sin()).collect();
    let (full, _) = model.full_softmax_loss(&h, 12);
    println!("full softmax loss {full:.6}");
    for n in [5, 10, 25, 49] {
        let mean = (0..200).map(|s| model.sampled_softmax_loss(&h, 12, n, s).map(|r| r.0)).sum::<sent2vec::Result<f64>>()? / 200.0;
        println!("  n = {n:2}: mean sampled loss {mean:.6}");
    }
    Ok(())
}
