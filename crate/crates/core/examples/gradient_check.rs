//! Central-difference gradient checks on small paraphrase and hierarchical
//! models in f64.
//!
//! cargo run --release --example gradient_check

use sent2vec::hier::{HierConfig, HierModel, SummaryExample};
use sent2vec::numerics::{grad_check, GradCheckOptions};
use sent2vec::seq2seq::{EncoderDecoderModel, LossMode, Seq2SeqConfig, TrainExample};

fn main() -> sent2vec::Result<()> {
    let opts = GradCheckOptions { max_coords_per_tensor: usize::MAX, ..Default::default() };

    let mut cfg = Seq2SeqConfig::new(12);
    cfg.d_w = 5;
    cfg.d_h = 8;
    let mut m = EncoderDecoderModel::<f64>::new(cfg, 1)?;
    let batch = vec![TrainExample::new(&[4, 5, 6], &[7, 8], 30), TrainExample::new(&[9], &[10, 11, 4], 30)];
    for (name, mut mode) in [("full", LossMode::Full), ("sampled (n = 6)", LossMode::sampled(12, 6)?)] {
        let (loss, g) = m.loss_and_grads(&batch, &mut mode, 3)?;
        let r = grad_check(&mut m, &g, |m| m.batch_loss(&batch, &mut mode, 3), opts)?;
        println!("seq2seq {name}: loss {loss:.5}, {} coords, max rel err {:.2e}", r.coords_checked, r.max_rel_err);
        for (t, e) in &r.per_tensor {
            println!("    {t:14} {e:.2e}");
        }
    }

    let cfg = HierConfig { d_chunk: 6, d_para: 6, d_attn: 4, d_dec: 5, d_emb: 4, chunk_size: 3, stride: 2, ..HierConfig::new(4, 10) };
    let mut h = HierModel::<f64>::new(cfg, 2)?;
    let para = |n: usize| -> Vec<Vec<f64>> { (0..n).map(|i| (0..4).map(|j| ((i * 4 + j) as f64).cos() * 0.5).collect()).collect() };
    let batch = vec![SummaryExample::new(para(8), &[4, 5, 6], 30)?, SummaryExample::new(para(1), &[7], 30)?];
    let (loss, g) = h.loss_and_grads(&batch)?;
    let r = grad_check(&mut h, &g, |h| h.batch_loss(&batch), opts)?;
    println!("hier: loss {:.5}, {} coords, max rel err {:.2e}", loss.loss, r.coords_checked, r.max_rel_err);
    Ok(())
}
