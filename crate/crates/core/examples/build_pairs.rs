//! Turn caption groups into ordered paraphrase pairs and write them as TSV.
//!
//! cargo run --example build_pairs

use sent2vec::datasets::{build_pairs, holdout_split, pair_count, synthetic, PairDataset};

fn main() -> sent2vec::Result<()> {
    // corpus-scale counts: m groups of k captions give m·k·(k−1) pairs
    for (name, groups, k) in [("MSR-VTT", 10_000, 20), ("Flickr30k", 31_600, 5), ("MSCOCO", 82_783, 5)] {
        println!("{name:10} {groups} groups × {k} captions → {} pairs", pair_count(std::iter::repeat(k).take(groups)));
    }

    let groups = synthetic::caption_groups(4, 3, 7)?;
    for g in &groups {
        println!("{}: {:?}", g.group_id, g.captions);
    }
    let pairs = build_pairs(groups);
    println!("{} pairs", pairs.len());
    for p in pairs.iter().take(6) {
        println!("  {}  →  {}", p.source, p.target);
    }

    let (train, held) = holdout_split(&pairs, 0.25, 1)?;
    println!("train {} / held out {}", train.len(), held.len());

    let dir = std::env::temp_dir().join("sent2vec-build-pairs");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("pairs.tsv");
    pairs.write_tsv(&path)?;
    let back = PairDataset::read_tsv(&path)?;
    println!("wrote {} and read back {} pairs", path.display(), back.len());
    Ok(())
}
