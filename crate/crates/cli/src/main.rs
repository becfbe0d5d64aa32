use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use orchard::arrangement::{melchior_feasible, profile_of, Profile};
use orchard::io::records::{emit_records, parse_records, RecordFile};
use orchard::io::{format_triples, parse_triple_lists};
use orchard::pipeline::{self, realize_class, PipelineOptions};
use orchard::realize::{realize, RealizeOptions, Verdict};
use orchard::sweep::{parse_pairs, triples_of, SweepWord, WordSet};
use orchard::{boroczky, canonical_key, catalog, svg, HomLine64};

#[derive(Parser)]
#[command(name = "orchard", version, about = "Pseudoline arrangements with many triple points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct RealizeFlags {
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Global-fit restarts.
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    /// Parameter samples when probing a construction.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
}

impl RealizeFlags {
    fn options(self) -> RealizeOptions {
        RealizeOptions {
            samples: self.samples,
            restarts: self.restarts,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate sweeps with a given number of triple points and classify them.
    Enumerate {
        #[arg(long, default_value_t = 12)]
        n: u8,
        /// Pairs meeting line 1 in triple points, e.g. "2-3,4-5".
        #[arg(long)]
        pairs: Option<String>,
        /// Try every layout of this many pairs along line 1.
        #[arg(long, conflicts_with = "pairs")]
        all_starts: Option<usize>,
        #[arg(long)]
        target_t3: u32,
        /// Worker threads (0: one per core).
        #[arg(long, env = "ORCHARD_JOBS", default_value_t = 0)]
        jobs: usize,
        /// Report every move order instead of one word per wiring diagram.
        #[arg(long)]
        all_words: bool,
        /// Also decide straight-line realizability of every class.
        #[arg(long)]
        realize: bool,
        #[command(flatten)]
        flags: RealizeFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Canonical form, census and identity checks for triple lists.
    Classify { file: PathBuf },
    /// Pair-count and Melchior feasibility of an intersection census.
    CheckProfile {
        #[arg(long)]
        n: u32,
        /// Counts as "r:t_r,...", e.g. "2:9,3:19"; t2 is implied when omitted.
        #[arg(long)]
        t: String,
    },
    /// The Boroczky arrangement on n lines.
    Boroczky {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = boroczky::DEFAULT_EPS)]
        eps: f64,
    },
    /// Straight-line realizability of triple lists or of a record file.
    Realize {
        file: PathBuf,
        #[command(flatten)]
        flags: RealizeFlags,
        /// Where to write updated records (record input only).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a sweep word, a record, or a realizable triple list as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        /// 1-based class index in a record file.
        #[arg(long, default_value_t = 1)]
        class: usize,
        /// Draw the wiring diagram of a record instead of its lines.
        #[arg(long)]
        wiring: bool,
        #[command(flatten)]
        flags: RealizeFlags,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_census(n: u32, spec: &str) -> Result<Profile> {
    let mut counts = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (r, c) = part
            .split_once(':')
            .ok_or_else(|| anyhow!("expected r:count, got '{part}'"))?;
        let r: u32 = r.trim().parse().with_context(|| format!("bad multiplicity in '{part}'"))?;
        let c: u64 = c.trim().parse().with_context(|| format!("bad count in '{part}'"))?;
        counts.push((r, c));
    }
    Ok(Profile::with_implied_doubles(n, counts)?)
}

fn catalog_match(ts: &orchard::TripleSystem) -> Option<&'static str> {
    let key = canonical_key(ts);
    catalog::all_lists()
        .into_iter()
        .find(|(_, c)| canonical_key(c) == key)
        .map(|(name, _)| name)
}

fn enumerate(opts: PipelineOptions, out: Option<&Path>) -> Result<bool> {
    let result = pipeline::run(&opts)?;
    let records = &result.records;
    eprintln!(
        "{} words, {} labelled systems, {} classes",
        result.words,
        result.systems,
        records.classes.len()
    );
    for (i, c) in records.classes.iter().enumerate() {
        let known = c
            .system()
            .ok()
            .and_then(|ts| catalog_match(&ts))
            .map_or(String::new(), |m| format!(" [{m}]"));
        let verdict = c.verdict.as_ref().map_or(String::new(), |v| format!(" {}", v.status));
        eprintln!("class {}: {} words{known}{verdict}", i + 1, c.multiplicity);
    }
    write_or_print(out, &emit_records(records))?;
    Ok(true)
}

fn classify(path: &Path) -> Result<bool> {
    let lists = parse_triple_lists(&read(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let mut ok = true;
    let mut keys = Vec::new();
    for (i, list) in lists.iter().enumerate() {
        let name = list.name.clone().unwrap_or_else(|| format!("#{}", i + 1));
        let ts = &list.system;
        let profile = profile_of(ts)?;
        let pairs = profile.pair_count_identity();
        let feas = melchior_feasible(&profile)?;
        let key = canonical_key(ts);
        println!("{name}: {profile}");
        println!("  pair count: {}", if pairs { "ok" } else { "FAILS" });
        println!("  Melchior: {feas}");
        println!("  canonical: {key}");
        if let Some(m) = catalog_match(ts) {
            println!("  matches {m}");
        }
        if let Some(j) = keys.iter().position(|k| *k == key) {
            println!("  isomorphic to list {}", j + 1);
        }
        keys.push(key);
        ok &= pairs && feas.is_feasible();
    }
    Ok(ok)
}

fn check_profile(n: u32, t: &str) -> Result<bool> {
    let profile = parse_census(n, t)?;
    println!("{profile}");
    let pairs = profile.pair_count_identity();
    if !pairs {
        println!("infeasible (pair count fails)");
        return Ok(true);
    }
    println!("{}", melchior_feasible(&profile)?);
    Ok(true)
}

fn run_boroczky(n: u32, eps: f64) -> Result<bool> {
    let lines: Vec<HomLine64> = boroczky::generate(n)?;
    let (profile, _) = boroczky::intersection_profile(&lines, eps)?;
    for (i, l) in lines.iter().enumerate() {
        let [a, b, c] = l.normalized().coords();
        println!("line {:>2}: {a:>19.15} {b:>19.15} {c:>19.15}", i + 1);
    }
    let census: Vec<String> = profile.counts().map(|(r, c)| format!("t{r}={c}")).collect();
    println!("{}", census.join(" "));
    match boroczky::triple_system_of(&lines, eps) {
        Ok(ts) => {
            print!("{}", format_triples(&ts));
            if let Some(m) = catalog_match(&ts) {
                println!("isomorphic to {m}");
            }
        }
        Err(e) => println!("no triple system: {e}"),
    }
    let expected = boroczky::expected_profile(n);
    if profile != expected {
        eprintln!("expected {expected}");
        return Ok(false);
    }
    Ok(true)
}

fn realize_file(path: &Path, flags: RealizeFlags, out: Option<&Path>) -> Result<bool> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        let mut file: RecordFile = parse_records(&text)?;
        for (i, c) in file.classes.iter_mut().enumerate() {
            // realize in the labels of the sweep word when there is one
            let ts = match &c.word {
                Some(w) => triples_of(&w.parse::<SweepWord>()?)?,
                None => c.system()?,
            };
            let v = realize_class(&ts, &flags.options());
            eprintln!("class {}: {}", i + 1, v.detail);
            c.verdict = Some(v);
        }
        write_or_print(out, &emit_records(&file))?;
        return Ok(true);
    }
    if out.is_some() {
        bail!("--out applies to record files only");
    }
    let lists = parse_triple_lists(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    for (i, list) in lists.iter().enumerate() {
        let name = list.name.clone().unwrap_or_else(|| format!("#{}", i + 1));
        let v = realize(&list.system, &flags.options());
        println!("{name}: {}", v.summary());
        if let Verdict::Realizable { lines, .. } = &v {
            for (k, l) in lines.iter().enumerate() {
                let [a, b, c] = l.coords();
                println!("  line {:>2}: {a:>19.15} {b:>19.15} {c:>19.15}", k + 1);
            }
        }
    }
    Ok(true)
}

fn render(path: &Path, svg_out: &Path, class: usize, wiring: bool, flags: RealizeFlags) -> Result<bool> {
    let text = read(path)?;
    let trimmed = text.trim();
    let drawing = if trimmed.starts_with('{') {
        let file = parse_records(&text)?;
        let rec = class
            .checked_sub(1)
            .and_then(|i| file.classes.get(i))
            .ok_or_else(|| anyhow!("class {class} not in file ({} classes)", file.classes.len()))?;
        let lines: Vec<HomLine64> = rec
            .verdict
            .as_ref()
            .map(|v| v.lines.iter().map(|&l| orchard::HomLine(l)).collect())
            .unwrap_or_default();
        if wiring || lines.is_empty() {
            let word = rec
                .word
                .as_deref()
                .ok_or_else(|| anyhow!("class {class} has neither coordinates nor a sweep word"))?;
            svg::render_wiring_svg(&word.parse::<SweepWord>()?)?
        } else {
            svg::render_lines_svg(&lines, &rec.system()?)
        }
    } else if trimmed.starts_with("n=") && trimmed.contains('/') {
        let word: SweepWord = trimmed.parse()?;
        svg::render_wiring_svg(&word)?
    } else {
        let lists = parse_triple_lists(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        let ts = &lists[0].system;
        match realize(ts, &flags.options()) {
            Verdict::Realizable { lines, .. } => svg::render_lines_svg(&lines, ts),
            v => bail!("no straight-line drawing: {}", v.summary()),
        }
    };
    fs::write(svg_out, drawing).with_context(|| format!("cannot write {}", svg_out.display()))?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enumerate {
            n,
            pairs,
            all_starts,
            target_t3,
            jobs,
            all_words,
            realize,
            flags,
            out,
        } => (|| {
            let mut opts = PipelineOptions::new(n, target_t3);
            opts.pairs = pairs.as_deref().map(parse_pairs).transpose()?;
            opts.all_starts = all_starts;
            opts.jobs = jobs;
            opts.words = if all_words { WordSet::All } else { WordSet::Diagrams };
            opts.realize = realize.then(|| flags.options());
            enumerate(opts, out.as_deref())
        })(),
        Command::Classify { file } => classify(&file),
        Command::CheckProfile { n, t } => check_profile(n, &t),
        Command::Boroczky { n, eps } => run_boroczky(n, eps),
        Command::Realize { file, flags, out } => realize_file(&file, flags, out.as_deref()),
        Command::Render {
            file,
            svg,
            class,
            wiring,
            flags,
        } => render(&file, &svg, class, wiring, flags),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
