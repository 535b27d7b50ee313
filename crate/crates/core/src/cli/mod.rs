//! The `sent2vec` command line. Each subcommand maps onto library calls;
//! see `sent2vec <subcommand> --help` for flags and defaults.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "sent2vec", version, about = "Sentence and paragraph vectors from paraphrase training")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Turn caption groups into ordered paraphrase pairs.
    BuildPairs(BuildPairsArgs),
    /// Train the paraphrase encoder-decoder.
    TrainParaphrase(TrainParaphraseArgs),
    /// Encode one sentence per line into a vector file.
    Encode(EncodeArgs),
    /// Train the hierarchical summarizer on paragraph records.
    TrainSummarizer(TrainSummarizerArgs),
    /// Write a summary for every paragraph record.
    Summarize(SummarizeArgs),
    /// Relatedness correlation with the regressor and the distance check.
    EvalRelatedness(EvalRelatednessArgs),
    /// BLEU-1..4, ROUGE-L and CIDEr for candidate summaries.
    EvalSummarization(EvalSummarizationArgs),
    /// PCA projection of a vector file to 2-D.
    Project(ProjectArgs),
    /// Print a checkpoint's kind, configuration and tensor shapes.
    InspectCheckpoint(InspectArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OptimizerArg {
    Sgd,
    Adam,
}

#[derive(Debug, Args)]
pub struct BuildPairsArgs {
    /// `group_id<TAB>caption` file.
    #[arg(long)]
    pub captions: PathBuf,
    /// Pair file (`group_id<TAB>source<TAB>target`).
    #[arg(long)]
    pub out: PathBuf,
    /// Also hold out whole groups and write their pairs here.
    #[arg(long)]
    pub test_out: Option<PathBuf>,
    /// Fraction of groups held out when --test-out is given.
    #[arg(long, default_value_t = 0.05)]
    pub holdout: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TrainParaphraseArgs {
    #[arg(long)]
    pub pairs: PathBuf,
    /// Checkpoint to write.
    #[arg(long, default_value = "paraphrase.ckpt")]
    pub out: PathBuf,
    /// Vocabulary file to write [default: <out>.vocab].
    #[arg(long)]
    pub vocab_out: Option<PathBuf>,
    /// Training log (step, epoch, loss, lr), appended [default: <out>.log.tsv].
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Vocabulary cap, specials included.
    #[arg(long, default_value_t = 20_000)]
    pub vocab_size: usize,
    /// Word embedding width.
    #[arg(long, default_value_t = 300)]
    pub dw: usize,
    /// Encoder/decoder hidden units.
    #[arg(long, default_value_t = 300)]
    pub dh: usize,
    #[arg(long, default_value_t = 30)]
    pub max_len: usize,
    /// Sampled-softmax candidates per position; 0 for full softmax. Lowered to |V|-1 on small vocabularies.
    #[arg(long, default_value_t = 512)]
    pub n_samples: usize,
    #[arg(long, default_value_t = 64)]
    pub batch_size: usize,
    #[arg(long, value_enum, default_value_t = OptimizerArg::Sgd)]
    pub optimizer: OptimizerArg,
    #[arg(long, default_value_t = 0.0005)]
    pub lr: f64,
    /// Learning-rate factor applied after each epoch (SGD).
    #[arg(long, default_value_t = 0.99)]
    pub decay: f64,
    #[arg(long, default_value_t = 1)]
    pub epochs: usize,
    /// Stop after this many updates; 0 for no limit.
    #[arg(long, default_value_t = 0)]
    pub max_steps: u64,
    /// Global gradient-norm clip.
    #[arg(long, default_value_t = 5.0)]
    pub clip: f64,
    /// GloVe-format word vectors for initialization.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    #[arg(long)]
    pub freeze_embeddings: bool,
    /// Feed source sentences in their original order.
    #[arg(long)]
    pub no_reverse: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// Vocabulary [default: the path recorded in the checkpoint].
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    /// One sentence per line.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Vector file: u32 count, u32 width, packed little-endian f32.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainSummarizerArgs {
    /// Paragraph blocks: detail sentences then the summary line.
    #[arg(long)]
    pub paragraphs: PathBuf,
    /// Trained paraphrase checkpoint providing sentence vectors.
    #[arg(long)]
    pub encoder: PathBuf,
    /// Encoder vocabulary [default: the path recorded in the encoder checkpoint].
    #[arg(long)]
    pub encoder_vocab: Option<PathBuf>,
    #[arg(long, default_value = "summarizer.ckpt")]
    pub out: PathBuf,
    /// Summary vocabulary to write [default: <out>.vocab].
    #[arg(long)]
    pub vocab_out: Option<PathBuf>,
    /// Training log, appended [default: <out>.log.tsv].
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Hold out this many records and write them here in paragraph format.
    #[arg(long)]
    pub test_out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub holdout_count: usize,
    #[arg(long, default_value_t = 20_000)]
    pub vocab_size: usize,
    #[arg(long, default_value_t = 1024)]
    pub d_chunk: usize,
    #[arg(long, default_value_t = 1024)]
    pub d_para: usize,
    #[arg(long, default_value_t = 256)]
    pub d_attn: usize,
    #[arg(long, default_value_t = 256)]
    pub d_dec: usize,
    #[arg(long, default_value_t = 256)]
    pub d_emb: usize,
    #[arg(long, default_value_t = 5)]
    pub chunk_size: usize,
    #[arg(long, default_value_t = 5)]
    pub stride: usize,
    #[arg(long, default_value_t = 30)]
    pub max_len: usize,
    #[arg(long, default_value_t = 32)]
    pub batch_size: usize,
    #[arg(long, value_enum, default_value_t = OptimizerArg::Adam)]
    pub optimizer: OptimizerArg,
    #[arg(long, default_value_t = 0.0001)]
    pub lr: f64,
    #[arg(long, default_value_t = 1.0)]
    pub decay: f64,
    #[arg(long, default_value_t = 1)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0)]
    pub max_steps: u64,
    #[arg(long, default_value_t = 5.0)]
    pub clip: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SummarizeArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// Summary vocabulary [default: recorded in the checkpoint].
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    #[arg(long)]
    pub encoder: PathBuf,
    #[arg(long)]
    pub encoder_vocab: Option<PathBuf>,
    #[arg(long)]
    pub paragraphs: PathBuf,
    /// One summary per line, in record order.
    #[arg(long)]
    pub out: PathBuf,
    /// Most tokens per summary [default: the model's max_len].
    #[arg(long)]
    pub max_len: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvalRelatednessArgs {
    /// Scored pairs to evaluate on.
    #[arg(long)]
    pub records: PathBuf,
    /// Regressor training pairs; without it a fraction of --records is held out for testing.
    #[arg(long)]
    pub train: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    pub holdout: f64,
    #[arg(long)]
    pub encoder: PathBuf,
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    pub hidden: usize,
    #[arg(long, default_value_t = 100)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    /// Also write the tab-separated report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct EvalSummarizationArgs {
    /// One candidate per line.
    #[arg(long)]
    pub candidates: PathBuf,
    /// One line per candidate; several references separated by tabs.
    #[arg(long)]
    pub references: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    /// Vector file from `encode`.
    #[arg(long)]
    pub vectors: PathBuf,
    /// `group_id<TAB>label` per vector [default: both set to the line index].
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// `x<TAB>y<TAB>group_id<TAB>label`; variances go to `<out>.variance`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
}

/// Run a parsed command, writing its report to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> crate::Result<()> {
    match cli.command {
        Command::BuildPairs(a) => commands::build_pairs_cmd(a, out),
        Command::TrainParaphrase(a) => commands::train_paraphrase(a, out),
        Command::Encode(a) => commands::encode(a, out),
        Command::TrainSummarizer(a) => commands::train_summarizer(a, out),
        Command::Summarize(a) => commands::summarize(a, out),
        Command::EvalRelatedness(a) => commands::eval_relatedness(a, out),
        Command::EvalSummarization(a) => commands::eval_summarization(a, out),
        Command::Project(a) => commands::project(a, out),
        Command::InspectCheckpoint(a) => commands::inspect(a, out),
    }
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}
