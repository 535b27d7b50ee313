//! BLEU-1..4, ROUGE-L and CIDEr on a few candidate/reference sets.
//!
//! cargo run --example summarization_metrics

use sent2vec::eval::{bleu, cider, rouge_l, MetricReport, SummaryScores};
use sent2vec::text::tokenize;

fn main() -> sent2vec::Result<()> {
    let cands: Vec<Vec<String>> = ["a man is slicing a tomato", "the woman cooks an egg", "someone plays the piano"]
        .iter()
        .map(|s| tokenize(s))
        .collect();
    let refs: Vec<Vec<Vec<String>>> = [
        vec!["a man slices a tomato", "a man is cutting a tomato"],
        vec!["a woman is cooking an egg", "the lady fries an egg"],
        vec!["a person is playing a piano"],
    ]
    .iter()
    .map(|rs| rs.iter().map(|s| tokenize(s)).collect())
    .collect();

    let b = bleu(&cands, &refs, 4)?;
    let summary = SummaryScores { bleu: [b[0], b[1], b[2], b[3]], rouge_l: rouge_l(&cands, &refs)?, cider: cider(&cands, &refs)? };
    let report = MetricReport { summary: Some(summary), ..Default::default() };
    print!("{}", report.tsv());
    print!("{}", report.key_values());

    // one reference, candidate with an extra word
    let f = rouge_l(&[tokenize("a b c d")], &[vec![tokenize("a c d")]])?;
    println!("ROUGE-L('a b c d', 'a c d') = {f:.4}");
    Ok(())
}
