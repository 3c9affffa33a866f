//! The `depsense` command line.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::attention::{self, AttentionParams, InputEmbedder, TokenSequence};
use crate::compose::{describe_top_dimensions, Composer, SlotQuery};
use crate::config::RunConfig;
use crate::conllu::{parse_conllu, ParsedCorpus};
use crate::counts::TripleCountTable;
use crate::eval::{
    self, dataset, AttentionScorer, CompositionalScorer, EvalError, EvalReport, ModelKind, SentenceScorer,
    StaticScorer, SvoTriple,
};
use crate::pos::Pos;
use crate::space::{self, build_ppmi_spaces, SpaceSet};
use crate::synthetic::{self, SyntheticParams};
use crate::triples::{lexical_edges, DependencyTriple, Slot};
use crate::Fallback;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn data<E: std::fmt::Display>(context: impl std::fmt::Display) -> impl FnOnce(E) -> CliError {
    move |e| CliError::Data(format!("{context}: {e}"))
}

#[derive(Parser, Debug)]
#[command(name = "depsense", version, about = "Contextualized word senses from dependency-based distributional spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by the pipeline commands; each overrides the config file.
#[derive(Args, Debug, Default, Clone)]
struct ConfigArgs {
    /// `key = value` configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Triple count file
    #[arg(long)]
    counts: Option<String>,
    /// Directory holding the per-category space files
    #[arg(long)]
    spaces: Option<String>,
    /// Composition operator: mult or add
    #[arg(long)]
    mode: Option<String>,
    /// Paradigmatic class size
    #[arg(long)]
    k: Option<String>,
    /// Class ranking: freq or ppmi
    #[arg(long)]
    relevance: Option<String>,
    /// Unattested classes: strict or backoff
    #[arg(long)]
    fallback: Option<String>,
    /// Comma-separated dependency relations
    #[arg(long)]
    relations: Option<String>,
    #[arg(long = "min-count")]
    min_count: Option<String>,
    #[arg(long = "max-dims")]
    max_dims: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Weight class members by relevance in the preference sum
    #[arg(long)]
    weighted: bool,
    /// Width of the attention model space
    #[arg(long = "dim-model")]
    dim_model: Option<String>,
    /// Write the report table to this file
    #[arg(long)]
    report: Option<String>,
}

impl ConfigArgs {
    fn resolve(&self) -> CliResult<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path).map_err(|e| CliError::Usage(e.to_string()))?;
        }
        let overrides = [
            ("counts", &self.counts),
            ("spaces", &self.spaces),
            ("mode", &self.mode),
            ("k", &self.k),
            ("relevance", &self.relevance),
            ("fallback", &self.fallback),
            ("relations", &self.relations),
            ("min_count", &self.min_count),
            ("max_dims", &self.max_dims),
            ("seed", &self.seed),
            ("dim_model", &self.dim_model),
            ("report", &self.report),
        ];
        for (key, value) in overrides {
            if let Some(value) = value {
                cfg.set(key, value)
                    .map_err(|e| CliError::Usage(format!("--{}: {e}", key.replace('_', "-"))))?;
            }
        }
        if self.weighted {
            cfg.weighted = true;
        }
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count dependency triples in CoNLL-U files
    Extract {
        /// CoNLL-U inputs (default: `corpus` from the config)
        corpus: Vec<PathBuf>,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Build PPMI spaces from a count file
    Build {
        /// Import word2vec-format text vectors for one category instead
        #[arg(long)]
        embeddings: Option<PathBuf>,
        /// Category of the imported vectors
        #[arg(long = "embeddings-pos", default_value = "NOUN")]
        embeddings_pos: String,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// List the paradigmatic class of a slot
    Classes {
        /// Anchor word as lemma/POS, e.g. ball/NOUN
        anchor: String,
        relation: String,
        /// The open slot: head or dep
        slot: String,
        /// Category of the fillers (inferred from the relation if omitted)
        #[arg(long = "filler-pos")]
        filler_pos: Option<String>,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Contextualize every lexical token of CoNLL-U sentences
    Contextualize {
        /// CoNLL-U input; `-` or nothing reads standard input
        input: Option<PathBuf>,
        /// Dimensions shown per token
        #[arg(long, default_value_t = 5)]
        top: usize,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Cosine between two subject-verb-object sentences
    Similarity {
        first: String,
        second: String,
        #[arg(long, default_value = "compositional")]
        model: String,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Correlate model similarities with human judgments
    Evaluate {
        /// Similarity dataset TSV
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// static, compositional or attention; repeat to compare
        #[arg(long = "model")]
        models: Vec<String>,
        /// Write one JSON record per pair to this file
        #[arg(long)]
        records: Option<PathBuf>,
        /// Use the concatenated subject+verb+object static baseline
        #[arg(long = "static-summed")]
        static_summed: bool,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// One self-attention layer over a word sequence
    AttentionDemo {
        /// Words, or a single quoted sentence
        #[arg(required = true)]
        words: Vec<String>,
        #[arg(long = "no-positional")]
        no_positional: bool,
        #[arg(long)]
        unscaled: bool,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Write the synthetic evaluation corpus and dataset
    Synth {
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long = "synth-seed", default_value_t = synthetic::DEFAULT_SEED)]
        synth_seed: u64,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            match &err {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Data(msg) => eprintln!("error: {msg}"),
            }
            err.exit_code()
        }
    }
}

fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Extract { corpus, cfg } => cmd_extract(&cfg.resolve()?, corpus),
        Command::Build {
            embeddings,
            embeddings_pos,
            cfg,
        } => cmd_build(&cfg.resolve()?, embeddings, &embeddings_pos),
        Command::Classes {
            anchor,
            relation,
            slot,
            filler_pos,
            cfg,
        } => cmd_classes(&cfg.resolve()?, &anchor, &relation, &slot, filler_pos.as_deref()),
        Command::Contextualize { input, top, cfg } => cmd_contextualize(&cfg.resolve()?, input, top),
        Command::Similarity {
            first,
            second,
            model,
            cfg,
        } => cmd_similarity(&cfg.resolve()?, &first, &second, &model),
        Command::Evaluate {
            dataset,
            models,
            records,
            static_summed,
            cfg,
        } => {
            let mut config = cfg.resolve()?;
            if let Some(d) = dataset {
                config.dataset = Some(d);
            }
            cmd_evaluate(&config, &models, records.as_deref(), static_summed)
        }
        Command::AttentionDemo {
            words,
            no_positional,
            unscaled,
            cfg,
        } => cmd_attention_demo(&cfg.resolve()?, &words, !no_positional, !unscaled),
        Command::Synth { out, synth_seed, pairs } => cmd_synth(&out, synth_seed, pairs),
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(data(parent.display()))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(data(path.display()))
}

fn stdout_err(e: io::Error) -> CliError {
    CliError::Data(format!("writing output: {e}"))
}

fn load_counts(cfg: &RunConfig) -> CliResult<TripleCountTable> {
    if !cfg.counts.exists() {
        return Err(CliError::Data(format!(
            "missing count file {} (run `depsense extract` first)",
            cfg.counts.display()
        )));
    }
    TripleCountTable::load(&cfg.counts).map_err(data(cfg.counts.display()))
}

fn load_spaces(cfg: &RunConfig) -> CliResult<SpaceSet> {
    if !cfg.spaces.is_dir() {
        return Err(CliError::Data(format!(
            "missing space directory {} (run `depsense build` first)",
            cfg.spaces.display()
        )));
    }
    let set = SpaceSet::load(&cfg.spaces).map_err(data(cfg.spaces.display()))?;
    if set.is_empty() {
        return Err(CliError::Data(format!(
            "no space files in {}",
            cfg.spaces.display()
        )));
    }
    Ok(set)
}

fn read_corpus(path: &Path) -> CliResult<ParsedCorpus> {
    let file = File::open(path).map_err(data(path.display()))?;
    parse_conllu(BufReader::new(file)).map_err(data(path.display()))
}

fn warn_malformed(source: &str, corpus: &ParsedCorpus) {
    for err in &corpus.errors {
        eprintln!("warning: {source}: skipped sentence at line {}: {}", err.line, err.kind);
    }
}

fn cmd_extract(cfg: &RunConfig, inputs: Vec<PathBuf>) -> CliResult {
    let inputs = if inputs.is_empty() { cfg.corpus.clone() } else { inputs };
    if inputs.is_empty() {
        return Err(CliError::Usage("no corpus given".into()));
    }
    let mut table = TripleCountTable::new();
    let (mut sentences, mut skipped, mut kept, mut dropped) = (0, 0, 0, 0);
    for path in &inputs {
        let corpus = read_corpus(path)?;
        warn_malformed(&path.display().to_string(), &corpus);
        sentences += corpus.trees.len();
        skipped += corpus.errors.len();
        for tree in &corpus.trees {
            let all = tree.edges().count();
            let edges = lexical_edges(tree, &cfg.relations);
            kept += edges.len();
            dropped += all - edges.len();
            for edge in &edges {
                let (h, d) = (tree.token(edge.head), tree.token(edge.dependent));
                table.add(
                    DependencyTriple::new(h.lemma.clone(), h.pos, edge.relation.clone(), d.lemma.clone(), d.pos),
                    1,
                );
            }
        }
    }
    if table.is_empty() {
        return Err(CliError::Data("no triples extracted".into()));
    }
    let mut w = create(&cfg.counts)?;
    table.write_to(&mut w).map_err(data(cfg.counts.display()))?;
    w.flush().map_err(data(cfg.counts.display()))?;
    eprintln!(
        "sentences {sentences}, malformed {skipped}, edges kept {kept}, dropped {dropped}, \
         triples {} ({} distinct) -> {}",
        table.total(),
        table.len(),
        cfg.counts.display()
    );
    Ok(())
}

fn cmd_build(cfg: &RunConfig, embeddings: Option<PathBuf>, embeddings_pos: &str) -> CliResult {
    let table = load_counts(cfg)?;
    let mut spaces = build_ppmi_spaces(&table, cfg.ppmi_params()).map_err(data(cfg.counts.display()))?;
    if let Some(path) = embeddings.or_else(|| cfg.embeddings.clone()) {
        let pos: Pos = embeddings_pos
            .parse()
            .map_err(|e| CliError::Usage(format!("--embeddings-pos: {e}")))?;
        let loaded = space::load_embeddings(&path, pos).map_err(data(path.display()))?;
        if loaded.duplicates > 0 {
            eprintln!(
                "warning: {}: {} duplicate rows, last one kept",
                path.display(),
                loaded.duplicates
            );
        }
        spaces.insert(loaded.space);
    }
    spaces.save(&cfg.spaces).map_err(data(cfg.spaces.display()))?;
    for s in spaces.spaces() {
        eprintln!("{}: {} words x {} dims", s.pos(), s.len(), s.dim());
    }
    eprintln!("spaces -> {}", cfg.spaces.display());
    Ok(())
}

fn parse_lemma_pos(text: &str, default: Pos) -> CliResult<(String, Pos)> {
    match text.rsplit_once('/') {
        Some((lemma, pos)) if !lemma.is_empty() => {
            let pos = pos.parse().map_err(|e| CliError::Usage(format!("`{text}`: {e}")))?;
            Ok((lemma.to_lowercase(), pos))
        }
        _ => Ok((text.to_lowercase(), default)),
    }
}

/// Usual category of the word filling `slot` of `relation`.
pub fn default_filler_pos(relation: &str, slot: Slot) -> Pos {
    let base = relation.split(':').next().unwrap_or(relation);
    match (slot, base) {
        (Slot::Head, "amod" | "nmod") => Pos::Noun,
        (Slot::Head, _) => Pos::Verb,
        (Slot::Dependent, "amod") => Pos::Adj,
        (Slot::Dependent, "advmod") => Pos::Adv,
        (Slot::Dependent, _) => Pos::Noun,
    }
}

fn cmd_classes(cfg: &RunConfig, anchor: &str, relation: &str, slot: &str, filler_pos: Option<&str>) -> CliResult {
    let slot: Slot = slot.parse().map_err(CliError::Usage)?;
    let default_anchor = default_filler_pos(relation, slot.opposite());
    let (lemma, anchor_pos) = parse_lemma_pos(anchor, default_anchor)?;
    let filler_pos = match filler_pos {
        Some(p) => p.parse().map_err(|e| CliError::Usage(format!("--filler-pos: {e}")))?,
        None => default_filler_pos(relation, slot),
    };
    let table = load_counts(cfg)?;
    let query = SlotQuery::new(lemma, anchor_pos, relation, slot, filler_pos);
    let class = crate::compose::paradigmatic_class(&table, &query, cfg.k, cfg.relevance);

    let mut out = io::stdout().lock();
    (|| -> io::Result<()> {
        writeln!(out, "# class\t{query}\tk={}\trelevance={}", cfg.k, cfg.relevance)?;
        writeln!(out, "# rank\tlemma\tpos\trelevance")?;
        for (i, m) in class.members.iter().enumerate() {
            writeln!(out, "{}\t{}\t{}\t{}", i + 1, m.lemma, m.pos, m.relevance)?;
        }
        out.flush()
    })()
    .map_err(stdout_err)?;
    if class.is_empty() {
        eprintln!("warning: {query} is unattested");
    }
    Ok(())
}

fn cmd_contextualize(cfg: &RunConfig, input: Option<PathBuf>, top: usize) -> CliResult {
    let corpus = match input.as_deref() {
        Some(p) if p != Path::new("-") => read_corpus(p)?,
        _ => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text).map_err(data("stdin"))?;
            crate::conllu::parse_conllu_str(&text)
        }
    };
    warn_malformed("input", &corpus);
    let table = load_counts(cfg)?;
    let spaces = load_spaces(cfg)?;
    let composer = Composer::new(&table, &spaces, cfg.compose_options());

    let mut out = io::stdout().lock();
    let mut warnings = 0;
    for (i, tree) in corpus.trees.iter().enumerate() {
        let senses = match composer.contextualize_tree(tree) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("warning: sentence {}: {e}", i + 1);
                warnings += 1;
                continue;
            }
        };
        (|| -> io::Result<()> {
            writeln!(out, "# sentence\t{}\troot={}", i + 1, senses.root_index)?;
            writeln!(out, "# token_index\tlemma\tpos\tapplied_edges\ttop_dims")?;
            for (index, sense) in &senses.senses {
                let space = spaces.get(sense.pos).expect("sense came from this space");
                let applied: Vec<String> = sense
                    .applied
                    .iter()
                    .map(|a| {
                        let mark = if a.fell_back { "!" } else { "" };
                        format!("{}{mark}", a.query)
                    })
                    .collect();
                let dims = describe_top_dimensions(space, &sense.vector, top);
                writeln!(
                    out,
                    "{index}\t{}\t{}\t{}\t{}",
                    sense.lemma,
                    sense.pos,
                    if applied.is_empty() { "-".into() } else { applied.join(" ") },
                    if dims.is_empty() { "-".into() } else { dims.join(" ") }
                )?;
            }
            for index in &senses.missing {
                let t = tree.token(*index);
                writeln!(out, "{index}\t{}\t{}\toov\t-", t.lemma, t.pos)?;
            }
            Ok(())
        })()
        .map_err(stdout_err)?;
    }
    out.flush().map_err(stdout_err)?;
    if warnings > 0 {
        eprintln!("warning: {warnings} sentence(s) not contextualized");
    }
    Ok(())
}

struct Resources {
    table: Option<TripleCountTable>,
    spaces: SpaceSet,
}

impl Resources {
    fn load(cfg: &RunConfig, models: &[ModelKind]) -> CliResult<Self> {
        let table = if models.contains(&ModelKind::Compositional) {
            Some(load_counts(cfg)?)
        } else {
            None
        };
        Ok(Resources {
            table,
            spaces: load_spaces(cfg)?,
        })
    }

    fn scorer<'a>(&'a self, cfg: &RunConfig, model: ModelKind, static_summed: bool) -> Box<dyn SentenceScorer + 'a> {
        match model {
            ModelKind::Static if static_summed => Box::new(StaticScorer::summed(&self.spaces)),
            ModelKind::Static => Box::new(StaticScorer::new(&self.spaces)),
            ModelKind::Compositional => Box::new(CompositionalScorer::new(Composer::new(
                self.table.as_ref().expect("loaded for this model"),
                &self.spaces,
                cfg.compose_options(),
            ))),
            ModelKind::Attention => Box::new(AttentionScorer::new(
                InputEmbedder::new(&self.spaces, cfg.dim_model, cfg.seed),
                AttentionParams::random(cfg.dim_model, cfg.dim_model, cfg.dim_model, cfg.seed),
                true,
            )),
        }
    }
}

fn parse_models(names: &[String]) -> CliResult<Vec<ModelKind>> {
    if names.is_empty() {
        return Ok(vec![ModelKind::Compositional]);
    }
    names
        .iter()
        .map(|m| m.parse().map_err(|e: String| CliError::Usage(format!("--model: {e}"))))
        .collect()
}

fn cmd_similarity(cfg: &RunConfig, first: &str, second: &str, model: &str) -> CliResult {
    let model: ModelKind = model.parse().map_err(CliError::Usage)?;
    let a = SvoTriple::parse(first).map_err(CliError::Usage)?;
    let b = SvoTriple::parse(second).map_err(CliError::Usage)?;
    let res = Resources::load(cfg, &[model])?;
    let scorer = res.scorer(cfg, model, false);
    let (cosine, flag) = match scorer.score(&a, &b) {
        Ok(s) => (s.cosine, if s.zero_fallback { "zero_fallback" } else { "-" }),
        Err(EvalError::MissingVocab { lemma, pos }) if cfg.fallback == Fallback::Strict => {
            eprintln!("warning: {lemma}/{pos} is out of vocabulary; scored 0");
            (0.0, "oov")
        }
        Err(e) => return Err(CliError::Data(e.to_string())),
    };
    let mut out = io::stdout().lock();
    writeln!(out, "# model\texpr1\texpr2\tcosine\tflags").map_err(stdout_err)?;
    writeln!(out, "{model}\t{a}\t{b}\t{cosine:.6}\t{flag}").map_err(stdout_err)?;
    Ok(())
}

fn write_comparison<W: Write>(mut w: W, a: &EvalReport, b: &EvalReport) -> io::Result<()> {
    let index: HashMap<(&str, &str), f64> = b
        .records
        .iter()
        .map(|r| ((r.expr1.as_str(), r.expr2.as_str()), r.model_score))
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = a
        .records
        .iter()
        .filter_map(|r| index.get(&(r.expr1.as_str(), r.expr2.as_str())).map(|&y| (r.model_score, y)))
        .unzip();
    match eval::paired_significance(&xs, &ys) {
        Ok(t) => writeln!(
            w,
            "# paired_t\t{}\t{}\tn={}\tmean_diff={:.6}\tt={:.6}\tp={:.6}",
            a.model, b.model, t.n, t.mean_difference, t.t, t.p_value
        ),
        Err(e) => writeln!(w, "# paired_t\t{}\t{}\tundefined: {e}", a.model, b.model),
    }
}

fn cmd_evaluate(cfg: &RunConfig, model_names: &[String], records: Option<&Path>, static_summed: bool) -> CliResult {
    let models = parse_models(model_names)?;
    let path = cfg
        .dataset
        .as_ref()
        .ok_or_else(|| CliError::Usage("no dataset given (--dataset)".into()))?;
    if !path.exists() {
        return Err(CliError::Data(format!("missing dataset {}", path.display())));
    }
    let pairs = dataset::load_dataset(path).map_err(data(path.display()))?;
    let res = Resources::load(cfg, &models)?;

    let mut reports = Vec::new();
    for &model in &models {
        let scorer = res.scorer(cfg, model, static_summed);
        let report = eval::evaluate(&pairs, scorer.as_ref(), cfg.fallback)
            .map_err(|e| CliError::Data(format!("{model}: {e}")))?;
        for r in report.records.iter().filter(|r| r.oov) {
            eprintln!("warning: {model}: out of vocabulary: {} | {}", r.expr1, r.expr2);
        }
        if report.excluded > 0 {
            eprintln!("warning: {model}: {} pair(s) excluded", report.excluded);
        }
        reports.push(report);
    }

    let render = |w: &mut dyn Write| -> io::Result<()> {
        for report in &reports {
            report.write_table(&mut *w)?;
        }
        for pair in reports.windows(2) {
            write_comparison(&mut *w, &pair[0], &pair[1])?;
        }
        w.flush()
    };
    render(&mut io::stdout().lock()).map_err(stdout_err)?;
    if let Some(report_path) = &cfg.report {
        let mut w = create(report_path)?;
        render(&mut w).map_err(data(report_path.display()))?;
    }
    if let Some(records_path) = records {
        let mut w = create(records_path)?;
        for report in &reports {
            report.write_jsonl(&mut w).map_err(data(records_path.display()))?;
        }
    }
    for report in &reports {
        eprintln!(
            "{}: rho {:.4} over {} pairs (zero fallback {}, oov {})",
            report.model, report.spearman_rho, report.n_pairs, report.zero_fallback_count, report.oov_count
        );
    }
    Ok(())
}

fn cmd_attention_demo(cfg: &RunConfig, words: &[String], positional: bool, scaled: bool) -> CliResult {
    let words: Vec<String> = words
        .iter()
        .flat_map(|w| w.split_whitespace())
        .map(str::to_lowercase)
        .collect();
    if words.is_empty() {
        return Err(CliError::Usage("no words given".into()));
    }
    let spaces = if cfg.spaces.is_dir() {
        load_spaces(cfg)?
    } else {
        eprintln!("note: no space directory, using hashed embeddings");
        SpaceSet::new()
    };
    let embedder = InputEmbedder::new(&spaces, cfg.dim_model, cfg.seed);
    let items = words.iter().map(|w| (w.clone(), embedder.embed_any(w)));
    let seq = TokenSequence::new(items, positional).map_err(|e| CliError::Data(e.to_string()))?;
    let mut params = AttentionParams::random(cfg.dim_model, cfg.dim_model, cfg.dim_model, cfg.seed);
    params.scaled = scaled;
    let out = attention::self_attention(&seq, &params).map_err(|e| CliError::Data(e.to_string()))?;

    let mut w = io::stdout().lock();
    (|| -> io::Result<()> {
        writeln!(w, "# weights\t{}", words.join("\t"))?;
        for (word, row) in words.iter().zip(&out.weights) {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:.6}")).collect();
            writeln!(w, "{word}\t{}", cells.join("\t"))?;
        }
        writeln!(w, "# outputs\tdim={}", params.dim_v())?;
        for (word, row) in words.iter().zip(&out.outputs) {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:.6}")).collect();
            writeln!(w, "{word}\t{}", cells.join("\t"))?;
        }
        w.flush()
    })()
    .map_err(stdout_err)
}

fn cmd_synth(out: &Path, seed: u64, pairs: usize) -> CliResult {
    let params = SyntheticParams {
        seed,
        n_pairs: pairs,
        unattested_pairs: SyntheticParams::default().unattested_pairs.min(pairs),
        ..SyntheticParams::default()
    };
    let generated = synthetic::generate(&params);
    let corpus_path = out.join("synthetic.conllu");
    let pairs_path = out.join("synthetic_pairs.tsv");
    let mut w = create(&corpus_path)?;
    w.write_all(generated.corpus.as_bytes())
        .and_then(|_| w.flush())
        .map_err(data(corpus_path.display()))?;
    let mut w = create(&pairs_path)?;
    dataset::write_dataset(&generated.pairs, &mut w).map_err(data(pairs_path.display()))?;
    eprintln!(
        "{} sentences -> {}, {} pairs -> {}",
        generated.sentences,
        corpus_path.display(),
        generated.pairs.len(),
        pairs_path.display()
    );
    Ok(())
}
