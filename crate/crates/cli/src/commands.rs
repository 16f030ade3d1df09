use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use omwa_core::baseline::read_training;
use omwa_core::eval::{
    interleave, prepare_corpus, read_corpus, report_csv, report_json, OfflineEngine, Skipped,
};
use omwa_core::pinyin::train_pinyin_lm;
use omwa_core::{run_simulation, train_offline, CorpusRecord, Engine, EngineConfig, OfflineModel, PinyinLm, PinyinTable};

use crate::args::{ExportArgs, ImportArgs, PrepareArgs, SimulateArgs, TrainArgs};

pub fn builtin_table() -> Arc<PinyinTable> {
    Arc::new(PinyinTable::builtin())
}

fn load_corpus(path: &Path) -> Result<Vec<CorpusRecord>> {
    let file = File::open(path).with_context(|| format!("opening corpus {}", path.display()))?;
    read_corpus(BufReader::new(file)).with_context(|| format!("reading corpus {}", path.display()))
}

/// Drops records whose pinyin does not resolve, reporting each on stderr.
fn resolvable(path: &Path, records: Vec<CorpusRecord>, table: &PinyinTable) -> (Vec<CorpusRecord>, usize) {
    let mut dropped = 0;
    let kept = records
        .into_iter()
        .filter(|r| match r.resolve(table) {
            Ok(_) => true,
            Err(e) => {
                eprintln!("{}:{}: skipped: {e}", path.display(), r.line);
                dropped += 1;
                false
            }
        })
        .collect();
    (kept, dropped)
}

/// Trains a syllable trigram on the pinyin of a corpus file.
pub fn syllable_lm(path: &Path, table: &PinyinTable) -> Result<PinyinLm> {
    let records = load_corpus(path)?;
    let sequences: Vec<_> = records.iter().filter_map(|r| r.resolve(table).ok()).collect();
    Ok(train_pinyin_lm(&sequences, table.inventory())?)
}

fn offline_model(args: &SimulateArgs, order: usize, table: &PinyinTable) -> Result<OfflineModel> {
    if let Some(path) = &args.model {
        let file = File::open(path).with_context(|| format!("opening model {}", path.display()))?;
        let model = OfflineModel::load(BufReader::new(file))?;
        if model.order() != order {
            bail!("model has order {} but engine needs {order}", model.order());
        }
        return Ok(model);
    }
    let Some(path) = &args.train else {
        bail!("offline engines need --train or --model");
    };
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let records = read_training(BufReader::new(file), table.inventory())?;
    Ok(train_offline(&records, order)?)
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    if args.k.is_empty() || args.k.contains(&0) {
        bail!("--k needs positive depths");
    }
    let table = builtin_table();
    let mut config = args.engine_args.config();
    config.k = config.k.max(*args.k.iter().max().expect("non-empty"));
    config.validate()?;

    let (records, joints, dropped) = match (&args.corpus, &args.interleave) {
        (Some(path), _) => (load_corpus(path)?, Vec::new(), 0),
        (None, Some(paths)) => {
            let (a, da) = resolvable(&paths[0], load_corpus(&paths[0])?, &table);
            let (b, db) = resolvable(&paths[1], load_corpus(&paths[1])?, &table);
            let mixed = interleave(&a, &b, args.segments);
            let joints = mixed.joints();
            (mixed.items, joints, da + db)
        }
        (None, None) => bail!("give --corpus or --interleave"),
    };

    let mut vocab_size = None;
    let mut report = match args.engine.order() {
        None => {
            let mut engine = Engine::new(config, table)?;
            let report = run_simulation(&records, &mut engine, &args.k, args.group);
            if let Some(dir) = &args.snapshot {
                engine.save(dir)?;
            }
            vocab_size = Some(engine.vocab().len());
            report
        }
        Some(order) => {
            if args.snapshot.is_some() {
                bail!("--snapshot applies to the omwa engine only");
            }
            let mut engine = OfflineEngine {
                model: Arc::new(offline_model(args, order, &table)?),
                table: table.clone(),
                k: config.k,
            };
            run_simulation(&records, &mut engine, &args.k, args.group)
        }
    };
    report.joints = joints;
    for Skipped { line, reason } in &report.skipped {
        eprintln!("line {line}: skipped: {reason}");
    }
    write_file(&args.csv, report_csv(&report).as_bytes())?;
    write_file(&args.json, report_json(&report, args.engine.name()).as_bytes())?;
    let totals: Vec<String> = report
        .ks
        .iter()
        .zip(&report.totals)
        .map(|(k, t)| format!("top{k}={t:.6}"))
        .collect();
    eprintln!(
        "{}: {} MIUs scored, {} skipped, {}",
        args.engine.name(),
        report.scored,
        report.skipped.len() + dropped,
        totals.join(" ")
    );
    if let Some(n) = vocab_size {
        eprintln!("vocabulary: {n} words");
    }
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

pub fn train(args: &TrainArgs) -> Result<()> {
    let table = builtin_table();
    let file = File::open(&args.train).with_context(|| format!("opening {}", args.train.display()))?;
    let records = read_training(BufReader::new(file), table.inventory())?;
    let model = train_offline(&records, args.order as usize)?;
    let out = File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut out = BufWriter::new(out);
    model.save(&mut out)?;
    out.flush()?;
    eprintln!(
        "order {} model: {} sentences, {} words, {} n-grams",
        model.order(),
        records.len(),
        model.vocab_len(),
        model.store().len()
    );
    Ok(())
}

/// Loads the snapshot at `dir`, or builds a fresh engine when there is none.
pub fn open_engine(dir: Option<&Path>, config: EngineConfig, table: Arc<PinyinTable>) -> Result<Engine> {
    match dir {
        Some(dir) if dir.join("engine.json").exists() => {
            Engine::load(dir, table).with_context(|| format!("loading snapshot {}", dir.display()))
        }
        _ => Ok(Engine::new(config, table)?),
    }
}

pub fn export_vocab(args: &ExportArgs) -> Result<()> {
    let engine = Engine::load(&args.snapshot, builtin_table())
        .with_context(|| format!("loading snapshot {}", args.snapshot.display()))?;
    match &args.out {
        Some(path) => engine.export_vocab(BufWriter::new(File::create(path)?))?,
        None => engine.export_vocab(io::stdout().lock())?,
    }
    Ok(())
}

pub fn import_vocab(args: &ImportArgs) -> Result<()> {
    let mut engine = open_engine(Some(&args.snapshot), args.engine_args.config(), builtin_table())?;
    let file = File::open(&args.vocab).with_context(|| format!("opening {}", args.vocab.display()))?;
    let n = engine.import_vocab(BufReader::new(file))?;
    engine.save(&args.snapshot)?;
    eprintln!("imported {n} words into {}", args.snapshot.display());
    Ok(())
}

pub fn prepare(args: &PrepareArgs) -> Result<()> {
    let table = builtin_table();
    let input = File::open(&args.input).with_context(|| format!("opening {}", args.input.display()))?;
    let out = File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let stats = prepare_corpus(BufReader::new(input), &table, BufWriter::new(out))?;
    eprintln!(
        "{} lines, {} MIUs written, {} dropped",
        stats.lines, stats.mius, stats.dropped
    );
    Ok(())
}
