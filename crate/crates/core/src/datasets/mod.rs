//! Corpora: caption groups and the paraphrase pairs built from them,
//! relatedness-scored sentence pairs, and paragraph/summary records.
//!
//! File layouts (UTF-8, `\n` line ends, `<TAB>` is a single tab byte):
//!
//! * caption groups: `group_id<TAB>caption`, one caption per line; lines
//!   sharing a `group_id` describe the same image or video.
//! * pairs: `group_id<TAB>source<TAB>target`, one ordered pair per line.
//! * relatedness: `id<TAB>sentence_a<TAB>sentence_b<TAB>score[<TAB>...]`,
//!   an optional header line, score on the 1–5 scale.
//! * paragraphs: blocks separated by one blank line; each block is one or
//!   more detail sentences, one per line, followed by the summary line.

mod captions;
mod paragraphs;
mod relatedness;
mod split;
pub mod synthetic;

pub use captions::{
    build_pairs, holdout_split, load_caption_groups, pair_count, CaptionGroup, Pair, PairDataset,
};
pub use paragraphs::{load_paragraphs, ParagraphCorpus, ParagraphRecord, MAX_DETAILED};
pub use relatedness::{load_relatedness, RelatednessRecord};
pub use split::{holdout_indices, SplitSize};
