//! Save a paraphrase model with its vocabulary, reload it, and confirm the
//! sentence vectors are bit-identical.
//!
//! cargo run --example checkpoint_roundtrip

use sent2vec::checkpoint::{read_vectors, write_vectors, Checkpoint};
use sent2vec::datasets::synthetic;
use sent2vec::seq2seq::{EncoderDecoderModel, Seq2SeqConfig};
use sent2vec::text::{build_vocab, tokenize};

fn main() -> sent2vec::Result<()> {
    let captions: Vec<String> = synthetic::scenes(30, 2)?.iter().map(|s| s.caption(0)).collect();
    let vocab = build_vocab(captions.iter().map(|c| tokenize(c)), 100)?;
    let mut cfg = Seq2SeqConfig::new(vocab.len());
    cfg.d_w = 16;
    cfg.d_h = 24;
    let model = EncoderDecoderModel::<f32>::new(cfg, 9)?;

    let dir = std::env::temp_dir().join("sent2vec-checkpoint");
    std::fs::create_dir_all(&dir)?;
    let vocab_path = dir.join("vocab.txt");
    vocab.save(&vocab_path)?;
    let path = dir.join("model.ckpt");
    Checkpoint::from_paraphrase(&model, &vocab, Some(&vocab_path))?.save(&path)?;

    let ckpt = Checkpoint::load(&path)?;
    ckpt.verify_vocab(&vocab)?;
    print!("{}", ckpt.describe());
    let back = ckpt.paraphrase_model()?;

    let before = captions.iter().map(|c| Ok(model.encode_text(&vocab, c)?.values)).collect::<sent2vec::Result<Vec<_>>>()?;
    let after = captions.iter().map(|c| Ok(back.encode_text(&vocab, c)?.values)).collect::<sent2vec::Result<Vec<_>>>()?;
    let same = before.iter().zip(&after).filter(|(a, b)| a.iter().map(|x| x.to_bits()).eq(b.iter().map(|x| x.to_bits()))).count();
    println!("{same}/{} sentence vectors bit-identical after reload", before.len());

    let vec_path = dir.join("vectors.bin");
    write_vectors(&vec_path, &after)?;
    println!("vectors file holds {} rows", read_vectors(&vec_path)?.len());
    Ok(())
}
