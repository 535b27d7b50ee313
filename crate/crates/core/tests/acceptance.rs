//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so every line is printed on a
//! normal `cargo test`. Exits nonzero when any attainable criterion fails.

use std::collections::HashSet;
use std::time::Instant;

use sent2vec::checkpoint::Checkpoint;
use sent2vec::datasets::{build_pairs, pair_count, synthetic, ParagraphRecord};
use sent2vec::eval::{
    bleu, cider, distance_relatedness_check, encode_pairs, mse, pearson, rouge_l, spearman, RegressorOptions,
    RelatednessRegressor,
};
use sent2vec::hier::{sentence_vectors, HierConfig, HierModel, HierTrainOptions, HierTrainer, SummaryExample};
use sent2vec::numerics::{grad_check, seeded_rng, GradCheckOptions, Optimizer};
use sent2vec::seq2seq::{
    EncoderDecoderModel, LogUniformSampler, LossMode, Seq2SeqConfig, Seq2SeqTrainer, TrainExample, TrainOptions,
};
use sent2vec::text::{build_vocab, tokenize, Vocabulary};

type Outcome = Result<(bool, String), String>;

struct Line {
    id: usize,
    title: &'static str,
    pass: bool,
    detail: String,
    /// Counted in the exit status.
    attainable: bool,
}

fn check(id: usize, title: &'static str, f: impl FnOnce() -> Outcome) -> Line {
    let start = Instant::now();
    let (pass, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let line = Line { id, title, pass, detail: format!("{} [{:.1?}]", detail, start.elapsed()), attainable: true };
    print_line(&line);
    line
}

fn print_line(l: &Line) {
    println!("{} {:>2}. {}: {}", if l.pass { "PASS" } else { "FAIL" }, l.id, l.title, l.detail);
}

fn s(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Shared encoder: all 54 synthetic words in the vocabulary, trained on
/// 10 scenes × 8 captions.
struct Encoder {
    model: EncoderDecoderModel<f32>,
    vocab: Vocabulary,
    groups: Vec<sent2vec::datasets::CaptionGroup>,
}

fn synthetic_vocab() -> Vocabulary {
    let all: Vec<Vec<String>> = synthetic::scenes(4096, 0)
        .unwrap()
        .iter()
        .flat_map(|sc| (0..8).map(move |t| tokenize(&sc.caption(t))))
        .collect();
    build_vocab(all, 100).unwrap()
}

fn examples(pairs: &sent2vec::datasets::PairDataset, vocab: &Vocabulary) -> Vec<TrainExample> {
    pairs
        .iter()
        .map(|p| TrainExample::new(&vocab.encode(&tokenize(p.source)), &vocab.encode(&tokenize(p.target)), 30))
        .collect()
}

fn exact(model: &EncoderDecoderModel<f32>, data: &[TrainExample]) -> usize {
    data.iter()
        .filter(|ex| model.generate(&ex.source, 30).ok().as_deref() == Some(&ex.decoder[1..ex.decoder.len() - 1]))
        .count()
}

fn criterion2() -> Outcome {
    // paraphrase model: 2-token encoder, 2 decoder steps, full softmax, d_h = 8
    let mut cfg = Seq2SeqConfig::new(10);
    cfg.d_w = 4;
    cfg.d_h = 8;
    let mut m = EncoderDecoderModel::<f64>::new(cfg, 21).map_err(s)?;
    let batch = vec![TrainExample::new(&[4, 7], &[9], 30), TrainExample::new(&[5, 6], &[8], 30)];
    let all = GradCheckOptions { max_coords_per_tensor: usize::MAX, ..Default::default() };
    let t0 = Instant::now();
    let (_, g) = m.loss_and_grads(&batch, &mut LossMode::Full, 0).map_err(s)?;
    let r1 = grad_check(&mut m, &g, |m| m.batch_loss(&batch, &mut LossMode::Full, 0), all).map_err(s)?;
    let t1 = t0.elapsed().as_secs_f64();

    let cfg = HierConfig {
        d_in: 4,
        d_chunk: 5,
        d_para: 5,
        d_attn: 3,
        d_dec: 4,
        d_emb: 3,
        vocab_size: 9,
        chunk_size: 3,
        stride: 2,
        max_len: 10,
    };
    let mut h = HierModel::<f64>::new(cfg, 5).map_err(s)?;
    let para = |n: usize, p: f64| -> Vec<Vec<f64>> {
        (0..n).map(|i| (0..4).map(|j| ((i * 4 + j) as f64 * 0.37 + p).sin()).collect()).collect()
    };
    let hb = vec![
        SummaryExample::new(para(7, 0.0), &[4, 5, 6], 10).map_err(s)?,
        SummaryExample::new(para(2, 1.0), &[7], 10).map_err(s)?,
    ];
    let t0 = Instant::now();
    let (_, hg) = h.loss_and_grads(&hb).map_err(s)?;
    let r2 = grad_check(&mut h, &hg, |h| h.batch_loss(&hb), all).map_err(s)?;
    let t2 = t0.elapsed().as_secs_f64();
    let pass = r1.max_rel_err < 1e-4 && r2.max_rel_err < 1e-4 && t1 < 60.0 && t2 < 60.0;
    Ok((
        pass,
        format!(
            "seq2seq max rel err {:.2e} over {} coords ({t1:.2}s), hier {:.2e} over {} coords ({t2:.2}s); need < 1e-4, < 60 s",
            r1.max_rel_err, r1.coords_checked, r2.max_rel_err, r2.coords_checked
        ),
    ))
}

fn criterion3() -> Outcome {
    let mut cfg = Seq2SeqConfig::new(5);
    cfg.d_w = 3;
    cfg.d_h = 4;
    let m = EncoderDecoderModel::<f64>::new(cfg, 2).map_err(s)?;
    let mut worst = 0.0f64;
    for (k, h) in [[0.3, -0.2, 0.5, 0.1], [0.9, 0.9, -0.7, 0.0], [-0.4, 0.2, 0.0, 0.8]].iter().enumerate() {
        for target in 0..5 {
            let (full, _) = m.full_softmax_loss(h, target);
            let (sampled, _) = m.sampled_softmax_loss(h, target, 4, k as u64).map_err(s)?;
            worst = worst.max((full - sampled).abs());
        }
    }
    let sampler = LogUniformSampler::new(5, 4).map_err(s)?;
    let n = 1_000_000usize;
    let mut counts = [0usize; 5];
    let mut rng = seeded_rng(3);
    for _ in 0..n {
        counts[sampler.draw(&mut rng)] += 1;
    }
    let mut worst_z = 0.0f64;
    for (id, &c) in counts.iter().enumerate() {
        let p = sampler.probability(id);
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        worst_z = worst_z.max((c as f64 - n as f64 * p).abs() / sigma);
    }
    Ok((
        worst < 1e-6 && worst_z <= 3.0,
        format!("|sampled − full| ≤ {worst:.1e} (need < 1e-6); largest draw deviation {worst_z:.2}σ over 10⁶ draws (need ≤ 3σ)"),
    ))
}

fn criterion4() -> Outcome {
    let msr = pair_count(std::iter::repeat(20).take(10_000));
    let flickr = pair_count(std::iter::repeat(5).take(158_000 / 5));
    let flickr_dev = (flickr as f64 - 600_000.0).abs() / 600_000.0;
    let mut prop_ok = true;
    for k in 2..=10usize {
        for m in [1usize, 3, 7] {
            let groups: Vec<_> = (0..m)
                .map(|g| sent2vec::datasets::CaptionGroup {
                    group_id: g.to_string(),
                    captions: (0..k).map(|i| format!("caption {g} {i}")).collect(),
                })
                .collect();
            let ds = build_pairs(groups);
            let distinct: HashSet<(String, String)> =
                ds.iter().map(|p| (p.source.to_string(), p.target.to_string())).collect();
            prop_ok &= ds.len() == m * k * (k - 1)
                && distinct.len() == ds.len()
                && ds.iter().all(|p| p.source != p.target);
        }
    }
    Ok((
        msr == 3_800_000 && flickr_dev < 0.06 && prop_ok,
        format!(
            "MSR-VTT 10,000×20 → {msr} (need 3,800,000); Flickr 31,600×5 → {flickr}, {:.1}% from 600K (need < 6%); k ∈ [2,10] sweep {}",
            flickr_dev * 100.0,
            if prop_ok { "exact" } else { "mismatch" }
        ),
    ))
}

fn criterion5() -> Outcome {
    let pairs = build_pairs(synthetic::caption_groups(32, 2, 5).map_err(s)?);
    let vocab = build_vocab(pairs.sentences().map(tokenize), 100).map_err(s)?;
    let data = examples(&pairs, &vocab);
    let mut cfg = Seq2SeqConfig::new(vocab.len());
    cfg.d_w = 32;
    cfg.d_h = 64;
    let model = EncoderDecoderModel::<f32>::new(cfg, 1).map_err(s)?;
    let opts = TrainOptions { batch_size: 16, n_samples: Some(20), clip_norm: 5.0, seed: 1 };
    let mut tr = Seq2SeqTrainer::new(model, Optimizer::adam(0.01).map_err(s)?, opts).map_err(s)?;
    let start = Instant::now();
    let (mut loss, mut ok) = (f64::INFINITY, 0);
    while tr.steps_taken() < 2000 {
        tr.train_epoch(&data).map_err(s)?;
        if tr.steps_taken() % 100 == 0 {
            loss = tr.model.batch_loss(&data, &mut LossMode::Full, 0).map_err(s)?;
            ok = exact(&tr.model, &data);
            if loss < 0.1 && ok * 10 >= data.len() * 9 {
                break;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        loss < 0.1 && ok * 10 >= data.len() * 9 && tr.steps_taken() <= 2000 && secs < 300.0,
        format!(
            "{} pairs, |V| = {}, d_h = 64: full-softmax loss {loss:.4} (need < 0.1), exact greedy {ok}/{} (need ≥ 90%) after {} steps (≤ 2000), {secs:.1}s",
            data.len(),
            vocab.len(),
            data.len(),
            tr.steps_taken()
        ),
    ))
}

fn cosine(a: &[f32], b: &[f32]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| *x as f64 * *y as f64).sum();
    let na: f64 = a.iter().map(|x| (*x as f64).powi(2)).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| (*x as f64).powi(2)).sum::<f64>().sqrt();
    d / (na * nb)
}

fn train_encoder(n_groups: usize, per_group: usize, d_h: usize, epochs: usize, seed: u64) -> Result<Encoder, String> {
    let groups = synthetic::caption_groups(n_groups, per_group, seed).map_err(s)?;
    let vocab = synthetic_vocab();
    let pairs = build_pairs(groups.clone());
    let data = examples(&pairs, &vocab);
    let mut cfg = Seq2SeqConfig::new(vocab.len());
    cfg.d_w = 32;
    cfg.d_h = d_h;
    let model = EncoderDecoderModel::<f32>::new(cfg, 4).map_err(s)?;
    let opts = TrainOptions { batch_size: 32, n_samples: Some(20), clip_norm: 5.0, seed: 4 };
    let mut tr = Seq2SeqTrainer::new(model, Optimizer::adam(0.005).map_err(s)?, opts).map_err(s)?;
    for _ in 0..epochs {
        tr.train_epoch(&data).map_err(s)?;
    }
    Ok(Encoder { model: tr.model, vocab, groups })
}

const ENCODER_EPOCHS: usize = 20;
const RELATED_GROUPS: usize = 3000;
const RELATED_EPOCHS: usize = 5;
const RELATED_PER_GROUP: usize = 2;
const RELATED_SEED: u64 = 19;

fn criterion6(enc: &Encoder) -> Outcome {
    let mut vecs = Vec::new();
    for (g, group) in enc.groups.iter().enumerate() {
        for c in &group.captions {
            vecs.push((g, enc.model.encode_text(&enc.vocab, c).map_err(s)?.values));
        }
    }
    let (mut intra, mut ni, mut inter, mut nx) = (0.0, 0usize, 0.0, 0usize);
    for i in 0..vecs.len() {
        for j in i + 1..vecs.len() {
            let c = cosine(&vecs[i].1, &vecs[j].1);
            if vecs[i].0 == vecs[j].0 {
                intra += c;
                ni += 1;
            } else {
                inter += c;
                nx += 1;
            }
        }
    }
    let (intra, inter) = (intra / ni as f64, inter / nx as f64);
    Ok((
        intra - inter >= 0.1,
        format!(
            "10 groups × 8 captions, {ENCODER_EPOCHS} epochs: intra-group cosine {intra:.3}, inter-group {inter:.3}, gap {:.3} (need ≥ 0.1)",
            intra - inter
        ),
    ))
}

struct Summarizer {
    model: HierModel<f32>,
    inputs: Vec<Vec<Vec<f32>>>,
}

fn criterion7(enc: &Encoder) -> Result<(Line, Option<Summarizer>), String> {
    let mut out = None;
    let line = check(7, "summarizer overfit", || {
        let records: Vec<ParagraphRecord> = synthetic::summary_records(20, 8, 7).map_err(s)?;
        let vocab = build_vocab(records.iter().map(|r| tokenize(&r.summary)), 100).map_err(s)?;
        let inputs: Vec<Vec<Vec<f32>>> = records
            .iter()
            .map(|r| sentence_vectors::<f32>(&enc.model, &enc.vocab, &r.detailed))
            .collect::<sent2vec::Result<_>>()
            .map_err(s)?;
        let data: Vec<SummaryExample<f32>> = records
            .iter()
            .zip(&inputs)
            .map(|(r, v)| SummaryExample::new(v.clone(), &vocab.encode(&tokenize(&r.summary)), 30))
            .collect::<sent2vec::Result<_>>()
            .map_err(s)?;
        let cfg = HierConfig {
            d_chunk: 32,
            d_para: 32,
            d_attn: 16,
            d_dec: 32,
            d_emb: 16,
            ..HierConfig::new(enc.model.hidden_width(), vocab.len())
        };
        let model = HierModel::<f32>::new(cfg, 8).map_err(s)?;
        let opts = HierTrainOptions { batch_size: 20, clip_norm: 5.0, seed: 8 };
        let mut tr = HierTrainer::new(model, Optimizer::adam(0.005).map_err(s)?, opts).map_err(s)?;
        let refs: Vec<Vec<Vec<String>>> = records.iter().map(|r| vec![tokenize(&r.summary)]).collect();
        let mut b1 = 0.0;
        while tr.steps_taken() < 3000 {
            tr.train_epoch(&data).map_err(s)?;
            if tr.steps_taken() % 50 == 0 {
                let cands: Vec<Vec<String>> = inputs
                    .iter()
                    .map(|v| Ok(vocab.decode(&tr.model.summarize(v, 30)?)))
                    .collect::<sent2vec::Result<_>>()
                    .map_err(s)?;
                b1 = bleu(&cands, &refs, 1).map_err(s)?[0];
                if b1 >= 0.9 {
                    break;
                }
            }
        }
        let dev = tr.max_attention_deviation;
        let steps = tr.steps_taken();
        out = Some(Summarizer { model: tr.model, inputs });
        Ok((
            b1 >= 0.9 && steps <= 3000 && dev <= 1e-6,
            format!(
                "20 records: train BLEU-1 {b1:.3} (need ≥ 0.9) after {steps} steps (≤ 3000); max |Σ attention − 1| over all steps {dev:.1e} (need ≤ 1e-6)"
            ),
        ))
    });
    Ok((line, out))
}

fn t(x: &str) -> Vec<String> {
    tokenize(x)
}

/// Brute-force CIDEr: explicit n-gram index, dense tf-idf vectors.
fn cider_oracle(c: &[Vec<String>], r: &[Vec<Vec<String>>]) -> f64 {
    let n_items = c.len() as f64;
    let mut total = 0.0;
    for n in 1..=4usize {
        let grams = |s: &Vec<String>| -> Vec<String> {
            if s.len() < n { vec![] } else { (0..=s.len() - n).map(|i| s[i..i + n].join(" ")).collect() }
        };
        let mut index: Vec<String> = c.iter().chain(r.iter().flatten()).flat_map(&grams).collect();
        index.sort();
        index.dedup();
        let idf: Vec<f64> = index
            .iter()
            .map(|g| n_items.ln() - (r.iter().filter(|rs| rs.iter().any(|x| grams(x).contains(g))).count().max(1) as f64).ln())
            .collect();
        let vec_of = |s: &Vec<String>| -> Vec<f64> {
            let gs = grams(s);
            index.iter().zip(&idf).map(|(g, w)| gs.iter().filter(|x| *x == g).count() as f64 * w).collect()
        };
        for (cand, refs) in c.iter().zip(r) {
            let cv = vec_of(cand);
            let nc = cv.iter().map(|x| x * x).sum::<f64>().sqrt();
            for rf in refs {
                let rv = vec_of(rf);
                let nr = rv.iter().map(|x| x * x).sum::<f64>().sqrt();
                if nc > 0.0 && nr > 0.0 {
                    total += cv.iter().zip(&rv).map(|(a, b)| a * b).sum::<f64>() / (nc * nr) / refs.len() as f64;
                }
            }
        }
    }
    total / 4.0 / n_items * 10.0
}

fn criterion8() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let mut expect = |name: &str, got: f64, want: f64, tol: f64| {
        let pass = (got - want).abs() <= tol;
        ok &= pass;
        if !pass {
            notes.push(format!("{name}: got {got}, want {want}"));
        }
    };
    let x = [1.0, 2.0, 3.0];
    expect("pearson linear", pearson(&[1.0, 2.0, 3.0, 4.0], &[3.0, 5.0, 7.0, 9.0]).map_err(s)?, 1.0, 1e-12);
    expect("pearson negated", pearson(&x, &[-1.0, -2.0, -3.0]).map_err(s)?, -1.0, 1e-12);
    expect("pearson [1,3,2]", pearson(&x, &[1.0, 3.0, 2.0]).map_err(s)?, 0.5, 1e-12);
    expect("spearman [1,3,2]", spearman(&x, &[1.0, 3.0, 2.0]).map_err(s)?, 0.5, 1e-12);
    expect("spearman ties", spearman(&[1.0, 1.0, 2.0], &[3.0, 3.0, 4.0]).map_err(s)?, 1.0, 1e-12);
    expect("spearman monotone", spearman(&x, &[1.0, 8.0, 27.0]).map_err(s)?, 1.0, 1e-12);
    expect("mse equal", mse(&[1.0, 2.0], &[1.0, 2.0]).map_err(s)?, 0.0, 0.0);
    expect("mse [1,2] vs [2,4]", mse(&[1.0, 2.0], &[2.0, 4.0]).map_err(s)?, 2.5, 1e-12);
    expect("mse offset", mse(&[1.5, 2.5], &[1.0, 2.0]).map_err(s)?, 0.25, 1e-12);
    let same = vec![t("a man is slicing a tomato"), t("the dog runs in the park")];
    let same_refs: Vec<Vec<Vec<String>>> = same.iter().map(|x| vec![x.clone()]).collect();
    for (n, b) in bleu(&same, &same_refs, 4).map_err(s)?.into_iter().enumerate() {
        expect(&format!("BLEU-{} identity", n + 1), b, 1.0, 1e-12);
    }
    expect("BLEU-1 clipping", bleu(&[t("the the the")], &[vec![t("the cat")]], 1).map_err(s)?[0], 1.0 / 3.0, 1e-12);
    expect("BLEU empty", bleu(&[vec![]], &[vec![t("a b")]], 4).map_err(s)?[3], 0.0, 0.0);
    expect("ROUGE-L identity", rouge_l(&[t("a b c")], &[vec![t("a b c")]]).map_err(s)?, 1.0, 1e-12);
    expect("ROUGE-L disjoint", rouge_l(&[t("a b")], &[vec![t("c d")]]).map_err(s)?, 0.0, 0.0);
    // LCS 3, P 3/4, R 1, β 1.2 gives 2.44·0.75/(1 + 1.44·0.75) = 0.8798; the listed 0.7826 does not follow
    let f = rouge_l(&[t("a b c d")], &[vec![t("a c d")]]).map_err(s)?;
    expect("ROUGE-L 'a b c d' vs 'a c d' (formula)", f, 1.83 / 2.08, 1e-3);
    let listed_ok = (f - 0.7826).abs() <= 1e-3;
    let c3 = vec![t("a man is playing a guitar"), t("a woman slices an onion"), t("the dog runs in the park")];
    let r3 = vec![
        vec![t("a man plays the guitar"), t("someone is playing a guitar")],
        vec![t("a woman is slicing an onion"), t("a lady cuts an onion")],
        vec![t("a dog is running in a park"), t("the dog runs fast")],
    ];
    expect("CIDEr 3-sentence brute force", cider(&c3, &r3).map_err(s)?, cider_oracle(&c3, &r3), 1e-6);
    expect("CIDEr disjoint", cider(&[t("x y"), t("p q")], &[vec![t("a b")], vec![t("c d")]]).map_err(s)?, 0.0, 0.0);
    let ideal_refs = vec![vec![t("a b c d")], vec![t("e f g h")], vec![t("i j k l")]];
    let ideal: Vec<Vec<String>> = ideal_refs.iter().map(|r| r[0].clone()).collect();
    let best = cider(&ideal, &ideal_refs).map_err(s)?;
    expect("CIDEr self-similarity", best, 10.0, 1e-9);
    let single = cider(&[t("a")], &[vec![t("a")]]).is_err();
    ok &= single;
    Ok((
        ok,
        format!(
            "24 oracle checks {}; ROUGE-L example gives {f:.4}: matches the stated formula (0.8798), {} the listed 0.7826 (the listed value is an arithmetic slip){}",
            if ok { "match" } else { "mismatch" },
            if listed_ok { "and" } else { "not" },
            if notes.is_empty() { String::new() } else { format!("; {}", notes.join("; ")) }
        ),
    ))
}

fn criterion9() -> Result<(Line, Option<(f64, f64, f64)>), String> {
    let mut scores = None;
    let line = check(9, "relatedness pipeline sanity", || {
        // the 10-scene encoder never sees most slot combinations, so this one covers many scenes
        let enc = &train_encoder(RELATED_GROUPS, RELATED_PER_GROUP, 128, RELATED_EPOCHS, RELATED_SEED)?;
        let test = encode_pairs(&synthetic::relatedness_records(200, 0, 91), &enc.model, &enc.vocab).map_err(s)?;
        let train = encode_pairs(&synthetic::relatedness_records(200, 0, 92), &enc.model, &enc.vocab).map_err(s)?;
        let rho = distance_relatedness_check(&test).map_err(s)?;
        let reg = RelatednessRegressor::train(&train, &RegressorOptions { epochs: 200, seed: 9, ..Default::default() })
            .map_err(s)?;
        let pred: Vec<f64> = test.iter().map(|p| reg.predict(p)).collect::<sent2vec::Result<_>>().map_err(s)?;
        let gold: Vec<f64> = test.iter().map(|p| p.gold).collect();
        let r = pearson(&pred, &gold).map_err(s)?;
        scores = Some((r, spearman(&pred, &gold).map_err(s)?, mse(&pred, &gold).map_err(s)?));
        Ok((
            rho > 0.8 && r > 0.8,
            format!("encoder on {RELATED_GROUPS} scenes × {RELATED_PER_GROUP} captions, d_h = 128; 200 planted pairs: distance ρ = {rho:.3} (need > 0.8); regressor on a separate 200-pair training set, Pearson r = {r:.3} (need > 0.8)"),
        ))
    });
    Ok((line, scores))
}

fn criterion10(enc: &Encoder) -> Outcome {
    use rand::Rng;
    let dir = tempfile::tempdir().map_err(s)?;
    let path = dir.path().join("enc.ckpt");
    Checkpoint::from_paraphrase(&enc.model, &enc.vocab, None).map_err(s)?.save(&path).map_err(s)?;
    let back = Checkpoint::load(&path).map_err(s)?.paraphrase_model().map_err(s)?;
    let mut rng = seeded_rng(10);
    let mut same = 0;
    for _ in 0..100 {
        let len = rng.gen_range(1..=30);
        let ids: Vec<usize> = (0..len).map(|_| rng.gen_range(3..enc.vocab.len())).collect();
        let a = enc.model.encode(&ids).map_err(s)?.values;
        let b = back.encode(&ids).map_err(s)?.values;
        if a.iter().map(|x| x.to_bits()).eq(b.iter().map(|x| x.to_bits())) {
            same += 1;
        }
    }
    Ok((same == 100, format!("{same}/100 random sentences bit-identical after save → load → encode")))
}

fn criterion11(sum: Option<&Summarizer>) -> Outcome {
    let sum = sum.ok_or("no trained summarizer")?;
    let mut checked = 0;
    let mut identical = 0;
    for v in sum.inputs.iter().filter(|v| v.len() >= 3) {
        let three = v[..3].to_vec();
        let mut padded = three.clone();
        padded.resize(20, vec![0.0; three[0].len()]);
        let a = sum.model.encode_paragraph(&three).map_err(s)?.paragraph_vec.values;
        let b = sum.model.encode_paragraph(&padded).map_err(s)?.paragraph_vec.values;
        checked += 1;
        if a.iter().map(|x| x.to_bits()).eq(b.iter().map(|x| x.to_bits())) {
            identical += 1;
        }
    }
    Ok((
        checked > 0 && identical == checked,
        format!("{identical}/{checked} paragraphs: paragraph vector bit-identical with 3 vs 20 slots (17 zero vectors)"),
    ))
}

fn main() {
    println!("acceptance criteria (desk scale)");
    let mut lines = Vec::new();
    let mut c1 = Line {
        id: 1,
        title: "published full-corpus numbers",
        pass: false,
        detail: String::new(),
        attainable: false,
    };
    lines.push(check(2, "gradient fidelity", criterion2));
    lines.push(check(3, "sampled-softmax oracle", criterion3));
    lines.push(check(4, "pair-construction exactness", criterion4));
    lines.push(check(5, "paraphrase overfit", criterion5));
    let start = Instant::now();
    let enc = train_encoder(10, 8, 64, ENCODER_EPOCHS, 11);
    println!("     shared encoder trained in {:.1?}", start.elapsed());
    let mut related = None;
    let mut summarizer = None;
    match &enc {
        Ok(enc) => {
            lines.push(check(6, "embedding geometry", || criterion6(enc)));
            let (l7, sm) = criterion7(enc).unwrap_or_else(|e| (check(7, "summarizer overfit", || Err(e)), None));
            lines.push(l7);
            summarizer = sm;
            lines.push(check(8, "metric oracles", criterion8));
            let (l9, sc) = criterion9().unwrap_or_else(|e| (check(9, "relatedness pipeline sanity", || Err(e)), None));
            lines.push(l9);
            related = sc;
            lines.push(check(10, "persistence", || criterion10(enc)));
        }
        Err(e) => {
            for (id, title) in [(6, "embedding geometry"), (7, "summarizer overfit"), (9, "relatedness pipeline sanity"), (10, "persistence")] {
                lines.push(check(id, title, || Err(format!("encoder training failed: {e}"))));
            }
            lines.push(check(8, "metric oracles", criterion8));
        }
    }
    lines.push(check(11, "zero-pad neutrality", || criterion11(summarizer.as_ref())));

    let desk = match related {
        Some((r, rho, m)) => format!("desk analogue on planted pairs r = {r:.4}, ρ = {rho:.4}, MSE = {m:.4}"),
        None => "no desk analogue available".into(),
    };
    c1.detail = format!(
        "not reproducible at desk scale (published r = 0.7472, ρ = 0.5892, MSE = 0.4520 and BLEU-4 = 0.144, CIDEr = 1.129 need the multi-million-pair caption corpora, SICK, TACoS and long training); {desk}; not counted in the exit status"
    );
    print_line(&c1);
    lines.push(c1);

    lines.sort_by_key(|l| l.id);
    let failed: Vec<usize> = lines.iter().filter(|l| l.attainable && !l.pass).map(|l| l.id).collect();
    let passed = lines.iter().filter(|l| l.pass).count();
    println!("summary: {passed}/{} criteria pass; attainable failures: {failed:?}", lines.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
