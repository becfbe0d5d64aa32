//! Enumerate, classify and optionally realize, producing a record file.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::arrangement::{Label, TripleSystem};
use crate::canon::{canonical_form, canonical_key, CanonicalKey};
use crate::error::{Error, Result};
use crate::io::records::{ClassRecord, RecordFile, VerdictRecord};
use crate::realize::{realize, RealizeOptions, Verdict};
use crate::sweep::{enumerate_into, EnumerateOptions, FlipTally, StartPairing, SweepWord, WordSet};

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub n: Label,
    /// Start pairs on line 1; `None` means the standard layout.
    pub pairs: Option<Vec<(Label, Label)>>,
    /// Run every start layout with this many pairs instead of one layout.
    pub all_starts: Option<usize>,
    pub target_t3: u32,
    pub words: WordSet,
    pub jobs: usize,
    /// Realize every class with these options (the seed is mixed per class).
    pub realize: Option<RealizeOptions>,
}

impl PipelineOptions {
    pub fn new(n: Label, target_t3: u32) -> Self {
        PipelineOptions {
            n,
            pairs: None,
            all_starts: None,
            target_t3,
            words: WordSet::Diagrams,
            jobs: 1,
            realize: None,
        }
    }

    pub fn pairings(&self) -> Result<Vec<StartPairing>> {
        match (&self.pairs, self.all_starts) {
            (Some(_), Some(_)) => Err(Error::InvalidPairing("give explicit pairs or all starts, not both".into())),
            (_, Some(k)) => StartPairing::all_with_pairs(self.n, k),
            (Some(p), None) => Ok(vec![StartPairing::new(self.n, p)?]),
            (None, None) => Ok(vec![StartPairing::standard(self.n)?]),
        }
    }
}

pub struct PipelineOutput {
    pub records: RecordFile,
    /// Complete sweep words examined.
    pub words: u64,
    /// Distinct labelled triple systems before classification.
    pub systems: usize,
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed for realizing one class: stable across runs and worker counts.
pub fn class_seed(seed: u64, key: &CanonicalKey) -> u64 {
    // FNV-1a of the key listing
    let h = key
        .to_string()
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    splitmix(seed ^ h)
}

/// Realizes `ts` in its own labelling, so a construction can start from the
/// triples on line 1, and reports the lines in canonical labels. Obstruction
/// descriptions keep the labels of `ts`.
pub fn realize_class(ts: &TripleSystem, opts: &RealizeOptions) -> VerdictRecord {
    let (key, perm) = canonical_form(ts);
    let o = RealizeOptions {
        seed: class_seed(opts.seed, &key),
        ..*opts
    };
    let mut v = realize(ts, &o);
    if let Verdict::Realizable { lines, .. } = &mut v {
        let mut moved = lines.clone();
        for (l, line) in lines.iter().enumerate() {
            moved[perm.apply(l as Label + 1) as usize - 1] = *line;
        }
        *lines = moved;
    }
    VerdictRecord::from_verdict(&v)
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidPairing(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

struct Found {
    system: TripleSystem,
    words: u64,
    first: SweepWord,
}

pub fn run(opts: &PipelineOptions) -> Result<PipelineOutput> {
    let enum_opts = EnumerateOptions {
        prune: true,
        words: opts.words,
        jobs: opts.jobs,
    };
    let mut found = Vec::new();
    for p in opts.pairings()? {
        let tally: FlipTally = enumerate_into(&p, opts.target_t3, &enum_opts)?;
        for (flips, t) in tally.0 {
            found.push(Found {
                system: TripleSystem::new(opts.n, p.initial_triples().into_iter().chain(flips))?,
                words: t.words,
                first: SweepWord {
                    pairing: p.clone(),
                    moves: t.first,
                },
            });
        }
    }
    let systems = found.len();
    let words = found.iter().map(|f| f.words).sum();

    let keys: Vec<CanonicalKey> = in_pool(opts.jobs, || found.par_iter().map(|f| canonical_key(&f.system)).collect())?;
    let mut classes: BTreeMap<CanonicalKey, (u64, Found)> = BTreeMap::new();
    for (key, f) in keys.into_iter().zip(found) {
        match classes.get_mut(&key) {
            Some(c) => c.0 += f.words,
            None => {
                classes.insert(key, (f.words, f));
            }
        }
    }

    let mut records = Vec::with_capacity(classes.len());
    for (key, (words, first)) in &classes {
        let mut rec = ClassRecord::new(key.system(), *words)?;
        rec.word = Some(first.first.to_string());
        records.push(rec);
    }
    if let Some(ropts) = opts.realize {
        let reps: Vec<&TripleSystem> = classes.values().map(|(_, f)| &f.system).collect();
        let verdicts: Vec<VerdictRecord> =
            in_pool(opts.jobs, || reps.par_iter().map(|ts| realize_class(ts, &ropts)).collect())?;
        for (rec, v) in records.iter_mut().zip(verdicts) {
            rec.verdict = Some(v);
        }
    }
    Ok(PipelineOutput {
        records: RecordFile {
            classes: records,
            ..Default::default()
        },
        words,
        systems,
    })
}
