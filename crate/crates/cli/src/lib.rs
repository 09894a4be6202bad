//! Argument handling and the four subcommands behind the `tritag` binary.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;
use tritag::corpus::{
    parse_raw_text, parse_tagged_corpus, parse_tokenized_text, split_corpus, validate_corpus,
    write_tagged_corpus, CorpusError, Sentence, TaggedCorpus, Tagset,
};
use tritag::decoder::{brute_force_decode, viterbi_decode, DecodeError};
use tritag::eval::{evaluate, EvalError};
use tritag::model::{
    collect_counts, deserialize_model, serialize_model, Lambdas, LoadError, ModelError, OovMode,
    Order, Smoothing, SmoothingConfig, TagModel,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;
pub const EXIT_MODEL_LOAD: i32 = 4;
pub const EXIT_ALIGNMENT: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "tritag", version, about = "Trigram HMM part-of-speech tagger")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate a model from a tagged corpus.
    Train(TrainArgs),
    /// Tag raw or pre-tokenized text with a trained model.
    Tag(TagArgs),
    /// Compare predicted tags against gold tags.
    Eval(EvalArgs),
    /// Shuffle a tagged corpus and cut it into train and test files.
    Split(SplitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SmoothingArg {
    None,
    Addk,
    Interp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OovArg {
    Uniform,
    Singleton,
}

#[derive(Debug, Args)]
pub struct TagsetArg {
    /// File listing tag labels (whitespace separated). Defaults to the IL tagset.
    #[arg(long, value_name = "FILE")]
    pub tagset: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, value_name = "FILE")]
    pub corpus: PathBuf,
    /// Where to write the model.
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub order: u8,
    #[arg(long, value_enum, default_value_t = SmoothingArg::Interp)]
    pub smoothing: SmoothingArg,
    /// Additive constant; required with `--smoothing addk`.
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Fixed interpolation weights `unigram,bigram,trigram`; estimated when omitted.
    #[arg(long, value_name = "A,B,C")]
    pub lambdas: Option<String>,
    #[arg(long, value_enum, default_value_t = OovArg::Uniform)]
    pub oov: OovArg,
    #[command(flatten)]
    pub tagset: TagsetArg,
}

#[derive(Debug, Args)]
pub struct TagArgs {
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
    /// Input file; standard input when omitted.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Treat input as running text: whitespace separates tokens and
    /// newlines or sentence punctuation end sentences.
    #[arg(long)]
    pub raw: bool,
    /// Decode by exhaustive search over sentences of at most this length.
    #[arg(long, value_name = "N")]
    pub cap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_name = "FILE")]
    pub gold: PathBuf,
    /// Predicted tagged file.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Also write a machine-readable report here.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub tagset: TagsetArg,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long, value_name = "FILE")]
    pub corpus: PathBuf,
    /// Fraction of sentences that go to the training side.
    #[arg(long, default_value_t = 0.8)]
    pub ratio: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "FILE")]
    pub train_out: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub test_out: PathBuf,
    #[command(flatten)]
    pub tagset: TagsetArg,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Corpus { path: PathBuf, source: CorpusError },
    #[error("{}: file is not valid UTF-8", path.display())]
    Encoding { path: PathBuf },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{}: {source}", path.display())]
    Load { path: PathBuf, source: LoadError },
    #[error("gold and predicted files do not align: {0}")]
    Alignment(#[from] EvalError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::Corpus { .. } | CliError::Encoding { .. } => EXIT_FORMAT,
            CliError::Model(ModelError::InvalidSmoothing(_) | ModelError::InvalidOrder(_)) => {
                EXIT_USAGE
            }
            CliError::Model(_) => EXIT_FORMAT,
            CliError::Load { .. } => EXIT_MODEL_LOAD,
            CliError::Alignment(_) => EXIT_ALIGNMENT,
            CliError::Decode(DecodeError::CapExceeded { .. }) => EXIT_USAGE,
            CliError::Decode(_) => EXIT_FORMAT,
        }
    }
}

/// Runs a parsed command, writing human-readable output to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Train(args) => run_train(&args, stdout),
        Command::Tag(args) => run_tag(&args),
        Command::Eval(args) => run_eval(&args, stdout),
        Command::Split(args) => run_split(&args, stdout),
    }
}

fn smoothing_config(args: &TrainArgs) -> Result<SmoothingConfig, CliError> {
    if args.k.is_some() && args.smoothing != SmoothingArg::Addk {
        return Err(CliError::Usage(
            "--k is only valid with --smoothing addk".into(),
        ));
    }
    if args.lambdas.is_some() && args.smoothing != SmoothingArg::Interp {
        return Err(CliError::Usage(
            "--lambdas is only valid with --smoothing interp".into(),
        ));
    }
    let mode = match args.smoothing {
        SmoothingArg::None => Smoothing::None,
        SmoothingArg::Addk => Smoothing::AddK(
            args.k
                .ok_or_else(|| CliError::Usage("--smoothing addk requires --k".into()))?,
        ),
        SmoothingArg::Interp => Smoothing::Interpolation(
            args.lambdas
                .as_deref()
                .map(str::parse::<Lambdas>)
                .transpose()?,
        ),
    };
    let oov = match args.oov {
        OovArg::Uniform => OovMode::UniformOpenClass,
        OovArg::Singleton => OovMode::SingletonTagDistribution,
    };
    let config = SmoothingConfig::new(mode, oov);
    config.validate()?;
    Ok(config)
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    String::from_utf8(bytes).map_err(|_| CliError::Encoding {
        path: path.to_path_buf(),
    })
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_tagset(arg: &TagsetArg) -> Result<Arc<Tagset>, CliError> {
    match &arg.tagset {
        None => Ok(Arc::new(Tagset::default())),
        Some(path) => {
            let text = read_text(path)?;
            Tagset::new(text.split_whitespace())
                .map(Arc::new)
                .map_err(|source| CliError::Corpus {
                    path: path.clone(),
                    source,
                })
        }
    }
}

fn read_corpus(path: &Path, tagset: Arc<Tagset>) -> Result<TaggedCorpus, CliError> {
    let text = read_text(path)?;
    parse_tagged_corpus(&text, tagset).map_err(|source| CliError::Corpus {
        path: path.to_path_buf(),
        source,
    })
}

fn out_err(source: io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

pub fn run_train(args: &TrainArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let smoothing = smoothing_config(args)?;
    let order = Order::try_from(args.order)?;
    let tagset = load_tagset(&args.tagset)?;
    let corpus = read_corpus(&args.corpus, tagset)?;
    let report = validate_corpus(&corpus);
    let model = TagModel::finalize(collect_counts(&corpus)?, smoothing, order)?;
    write_file(&args.model, &serialize_model(&model))?;

    (|| {
        writeln!(stdout, "sentences   {}", report.sentences)?;
        writeln!(stdout, "tokens      {}", report.tokens)?;
        writeln!(stdout, "vocabulary  {}", report.vocabulary_size())?;
        if let Some(l) = model.lambdas() {
            writeln!(
                stdout,
                "lambdas     unigram={} bigram={} trigram={}",
                l.unigram, l.bigram, l.trigram
            )?;
        }
        Ok(())
    })()
    .map_err(out_err)
}

pub fn run_tag(args: &TagArgs) -> Result<(), CliError> {
    if args.cap == Some(0) {
        return Err(CliError::Usage("--cap must be at least 1".into()));
    }
    let bytes = fs::read(&args.model).map_err(|source| CliError::Io {
        path: args.model.clone(),
        source,
    })?;
    let model = deserialize_model(&bytes).map_err(|source| CliError::Load {
        path: args.model.clone(),
        source,
    })?;

    let (text, input_name) = match &args.input {
        Some(path) => (read_text(path)?, path.clone()),
        None => {
            let mut buf = Vec::new();
            io::stdin()
                .read_to_end(&mut buf)
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdin>"),
                    source,
                })?;
            let name = PathBuf::from("<stdin>");
            let text =
                String::from_utf8(buf).map_err(|_| CliError::Encoding { path: name.clone() })?;
            (text, name)
        }
    };
    let sentences: Vec<Sentence> = if args.raw {
        parse_raw_text(&text)
    } else {
        parse_tokenized_text(&text).map_err(|source| CliError::Corpus {
            path: input_name,
            source,
        })?
    };

    let tagged = sentences
        .par_iter()
        .map(|s| match args.cap {
            Some(cap) => brute_force_decode(&model, s, cap),
            None => viterbi_decode(&model, s),
        })
        .map(|r| r.map(|d| d.tagged))
        .collect::<Result<Vec<_>, _>>()?;

    let output = if tagged.is_empty() {
        String::new()
    } else {
        let corpus = TaggedCorpus::new(Arc::new(model.tagset().clone()), tagged)
            .expect("decoded tags come from the model tagset");
        write_tagged_corpus(&corpus)
    };
    match &args.out {
        Some(path) => write_file(path, output.as_bytes()),
        None => io::stdout().write_all(output.as_bytes()).map_err(out_err),
    }
}

pub fn run_eval(args: &EvalArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let tagset = load_tagset(&args.tagset)?;
    let gold = read_corpus(&args.gold, tagset.clone())?;
    let predicted = read_corpus(&args.input, tagset)?;
    let report = evaluate(&gold, &predicted)?;
    if let Some(path) = &args.out {
        write_file(path, report.to_key_values().as_bytes())?;
    }
    stdout
        .write_all(report.to_table().as_bytes())
        .map_err(out_err)
}

pub fn run_split(args: &SplitArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&args.ratio) {
        return Err(CliError::Usage("--ratio must be between 0 and 1".into()));
    }
    let tagset = load_tagset(&args.tagset)?;
    let corpus = read_corpus(&args.corpus, tagset)?;
    let (train, test) = split_corpus(&corpus, args.ratio, args.seed);
    let render = |c: &TaggedCorpus| {
        if c.is_empty() {
            String::new()
        } else {
            write_tagged_corpus(c)
        }
    };
    write_file(&args.train_out, render(&train).as_bytes())?;
    write_file(&args.test_out, render(&test).as_bytes())?;
    writeln!(
        stdout,
        "train  {} sentences\ntest   {} sentences",
        train.len(),
        test.len()
    )
    .map_err(out_err)
}
