use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use ndarray::Array2;
use spi_crack::coa::{recover_permutation_coa, row_histograms, simulate_exemplar_intensities};
use spi_crack::io::{
    encode_ciphertexts, encode_histogram, encode_matrix, encode_pgm, grid_mosaic, read_ciphertext_csv,
    read_matrix_csv, read_pgm_dir, KeyFile, PermutationFile,
};
use spi_crack::kpa::{match_patterns_type2, recover_key_type1};
use spi_crack::metrics::{cracking_correct_rate, permutation_correct_rate, psnr, AttackReport, RunMetadata};
use spi_crack::solver::{tv_reconstruct, SolverConfig};
use spi_crack::{encrypt_many, generate_key, permute_key, Ciphertext, ObjectImage, PermutationKey, PlainCipherCorpus, Regime};

use crate::config::ExperimentConfig;
use crate::output::Staging;
use crate::CliError;

pub struct Context {
    pub cfg: ExperimentConfig,
    pub timing: bool,
}

impl Context {
    fn seeds(&self) -> Result<BTreeMap<String, String>, CliError> {
        self.cfg.seed_table()
    }

    fn metadata(&self, extra: serde_json::Value, started: Instant) -> Result<RunMetadata, CliError> {
        let mut config = serde_json::to_value(&self.cfg).expect("config serializes");
        config["arguments"] = extra;
        Ok(RunMetadata {
            seeds: self.seeds()?,
            config,
            elapsed_seconds: if self.timing { started.elapsed().as_secs_f64() } else { 0.0 },
        })
    }

    fn stage(&self) -> Result<Staging, CliError> {
        Staging::new(&self.cfg.out)
    }

    fn commit(&self, staging: Staging, command: &str) -> Result<(), CliError> {
        let files = staging.commit(command, &self.cfg, &self.seeds()?)?;
        for f in files {
            println!("{}", self.cfg.out.join(f).display());
        }
        Ok(())
    }
}

fn require(path: &Path, what: &str) -> Result<(), CliError> {
    if path.exists() {
        Ok(())
    } else {
        Err(CliError::Validation(format!("{what} {} does not exist", path.display())))
    }
}

fn read_key(path: &Path) -> Result<KeyFile, CliError> {
    require(path, "key file")?;
    Ok(KeyFile::read(path)?)
}

fn read_perm(path: &Path) -> Result<PermutationFile, CliError> {
    require(path, "permutation file")?;
    Ok(PermutationFile::read(path)?)
}

fn read_ciphers(path: &Path) -> Result<Vec<Ciphertext>, CliError> {
    require(path, "ciphertext file")?;
    Ok(read_ciphertext_csv(path)?)
}

/// Plaintext matrix file (one image per row) to images of the given shape.
fn read_plaintexts(path: &Path, width: usize, height: usize) -> Result<Vec<ObjectImage>, CliError> {
    require(path, "plaintext file")?;
    let m = read_matrix_csv(path)?;
    if m.nrows() > 0 && m.ncols() != width * height {
        return Err(CliError::Validation(format!(
            "{} rows have {} pixels, key expects {width}x{height}",
            path.display(),
            m.ncols()
        )));
    }
    m.rows()
        .into_iter()
        .map(|r| Ok(ObjectImage::new(width, height, r.to_vec())?))
        .collect()
}

fn json_line(report: &AttackReport) -> String {
    report.to_json() + "\n"
}

fn csv_report(report: &AttackReport) -> String {
    format!("{}\n{}\n", AttackReport::csv_header(), report.csv_row())
}

pub fn keygen(ctx: &Context) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let key_seed = cfg.seed_for("key")?;
    let key = generate_key(cfg.patterns, cfg.pixels(), cfg.width, key_seed)?;
    let mut out = ctx.stage()?;
    match cfg.regime {
        Regime::TypeI => {
            out.write("key.spikey", KeyFile { regime: Regime::TypeI, seed: key_seed, key }.encode())?;
        }
        Regime::TypeII => {
            let perm_seed = cfg.seed_for("permutation")?;
            let perm = PermutationKey::random(cfg.patterns, perm_seed)?;
            let secret = permute_key(&key, &perm)?;
            out.write("originals.spikey", KeyFile { regime: Regime::TypeII, seed: key_seed, key }.encode())?;
            out.write("permutation.spiperm", PermutationFile { seed: perm_seed, permutation: perm }.encode())?;
            out.write("key.spikey", KeyFile { regime: Regime::TypeII, seed: key_seed, key: secret }.encode())?;
        }
    }
    ctx.commit(out, "keygen")
}

#[derive(Args, Debug)]
pub struct EncryptArgs {
    /// Key file to encrypt with.
    #[arg(long)]
    key: PathBuf,
    /// Also write each plaintext as a PGM image.
    #[arg(long)]
    pgm: bool,
}

pub fn encrypt(ctx: &Context, args: &EncryptArgs) -> Result<(), CliError> {
    let key = read_key(&args.key)?.key;
    let cfg = &ctx.cfg;
    if (key.width(), key.height()) != (cfg.width, cfg.height) {
        return Err(CliError::Validation(format!(
            "key is {}x{}, config is {}x{}",
            key.width(),
            key.height(),
            cfg.width,
            cfg.height
        )));
    }
    let images = cfg.load_images(&cfg.plaintexts, "plaintexts")?;
    let ciphers = encrypt_many(&images, &key)?;
    let mut out = ctx.stage()?;
    let plain = Array2::from_shape_fn((images.len(), cfg.pixels()), |(q, n)| images[q].pixels()[n]);
    out.write("plaintexts.csv", encode_matrix(&plain))?;
    out.write("ciphertexts.csv", encode_ciphertexts(&ciphers))?;
    if args.pgm {
        for (q, img) in images.iter().enumerate() {
            out.write(&format!("plaintexts/{q:05}.pgm"), encode_pgm(img))?;
        }
    }
    ctx.commit(out, "encrypt")
}

#[derive(Args, Debug)]
pub struct DecryptArgs {
    #[arg(long)]
    key: PathBuf,
    #[arg(long)]
    ciphertexts: PathBuf,
    /// Plaintext matrix for PSNR scoring and the comparison grid.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Decrypt only the first N ciphertexts.
    #[arg(long)]
    limit: Option<usize>,
}

/// Tiles per grid row in the comparison image.
const GRID_COLUMNS: usize = 10;

pub fn decrypt(ctx: &Context, args: &DecryptArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let key = read_key(&args.key)?.key;
    let mut ciphers = read_ciphers(&args.ciphertexts)?;
    if let Some(n) = args.limit {
        ciphers.truncate(n);
    }
    let reference = match &args.reference {
        Some(p) => {
            let mut r = read_plaintexts(p, key.width(), key.height())?;
            r.truncate(ciphers.len());
            if r.len() != ciphers.len() {
                return Err(CliError::Validation(format!(
                    "{} reference images for {} ciphertexts",
                    r.len(),
                    ciphers.len()
                )));
            }
            Some(r)
        }
        None => None,
    };
    let solver = ctx.cfg.solver;
    let images = ciphers
        .iter()
        .map(|c| tv_reconstruct(&key, c, &solver))
        .collect::<Result<Vec<_>, _>>()?;

    let mut out = ctx.stage()?;
    for (q, img) in images.iter().enumerate() {
        out.write(&format!("decrypted/{q:05}.pgm"), encode_pgm(img))?;
    }
    let mut rows: Vec<Vec<ObjectImage>> = Vec::new();
    for (q, chunk) in images.chunks(GRID_COLUMNS).enumerate() {
        if let Some(r) = &reference {
            rows.push(r[q * GRID_COLUMNS..q * GRID_COLUMNS + chunk.len()].to_vec());
        }
        rows.push(chunk.to_vec());
    }
    if !rows.is_empty() {
        out.write("grid.pgm", encode_pgm(&grid_mosaic(&rows)?))?;
    }
    if let Some(r) = &reference {
        let psnr_by_image = r
            .iter()
            .zip(&images)
            .map(|(a, b)| psnr(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        let report = AttackReport {
            attack: "decrypt".into(),
            regime: "-".into(),
            n: key.pixels(),
            m: key.patterns(),
            q: images.len(),
            cracking_correct_rate: None,
            permutation_correct_rate: None,
            psnr_by_image,
            run_metadata: ctx.metadata(serde_json::json!({ "key": args.key, "ciphertexts": args.ciphertexts }), started)?,
        };
        out.write("report.json", json_line(&report))?;
        out.write("report.csv", csv_report(&report))?;
    }
    ctx.commit(out, "decrypt")
}

#[derive(Args, Debug)]
pub struct KpaArgs {
    #[arg(long)]
    plaintexts: PathBuf,
    #[arg(long)]
    ciphertexts: PathBuf,
    /// Use only the first Q plaintext-ciphertext pairs.
    #[arg(long)]
    q: Option<usize>,
    /// Published patterns; switches to the Type II attack.
    #[arg(long)]
    originals: Option<PathBuf>,
    /// True key, for scoring.
    #[arg(long)]
    true_key: Option<PathBuf>,
    /// True order, for scoring a Type II attack.
    #[arg(long)]
    true_permutation: Option<PathBuf>,
}

pub fn kpa(ctx: &Context, args: &KpaArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let cfg = &ctx.cfg;
    let regime = if args.originals.is_some() { Regime::TypeII } else { cfg.regime };
    let originals = match (&args.originals, regime) {
        (Some(p), _) => Some(read_key(p)?),
        (None, Regime::TypeII) => {
            return Err(CliError::Validation("Type II attack needs --originals".into()));
        }
        (None, Regime::TypeI) => None,
    };
    let (w, h) = originals.as_ref().map_or((cfg.width, cfg.height), |k| (k.key.width(), k.key.height()));
    let mut images = read_plaintexts(&args.plaintexts, w, h)?;
    let mut ciphers = read_ciphers(&args.ciphertexts)?;
    if let Some(q) = args.q {
        if q == 0 || q > images.len().min(ciphers.len()) {
            return Err(CliError::Validation(format!(
                "--q {q} outside 1..={}",
                images.len().min(ciphers.len())
            )));
        }
        images.truncate(q);
        ciphers.truncate(q);
    }
    let true_key = args.true_key.as_deref().map(read_key).transpose()?;
    let true_perm = args.true_permutation.as_deref().map(read_perm).transpose()?;
    let corpus = PlainCipherCorpus::new(images, ciphers)?;
    let solver = SolverConfig { tv_weight: 0.0, ..cfg.solver };
    let result = recover_key_type1(&corpus, &solver)?;

    let mut out = ctx.stage()?;
    let mut residuals = String::from("pattern,iterations,relative_residual\n");
    for (m, (it, r)) in result.iterations.iter().zip(&result.per_pattern_residuals).enumerate() {
        let _ = writeln!(residuals, "{},{it},{r:.6e}", m + 1);
    }
    out.write("residuals.csv", residuals)?;
    let seed = cfg.seed_for("key")?;
    let (final_key, perm) = match &originals {
        Some(o) => {
            let perm = match_patterns_type2(&result.recovered_key, &o.key)?;
            out.write(
                "recovered.spiperm",
                PermutationFile { seed: cfg.seed_for("permutation")?, permutation: perm.clone() }.encode(),
            )?;
            (permute_key(&o.key, &perm)?, Some(perm))
        }
        None => (result.recovered_key.clone(), None),
    };
    out.write("recovered.spikey", KeyFile { regime, seed, key: final_key.clone() }.encode())?;

    let report = AttackReport {
        attack: "kpa".into(),
        regime: regime.to_string(),
        n: corpus.pixels(),
        m: corpus.patterns(),
        q: corpus.len(),
        cracking_correct_rate: true_key.map(|k| cracking_correct_rate(&k.key, &final_key)).transpose()?,
        permutation_correct_rate: match (&true_perm, &perm) {
            (Some(t), Some(p)) => Some(permutation_correct_rate(&t.permutation, p)?),
            _ => None,
        },
        psnr_by_image: Vec::new(),
        run_metadata: ctx.metadata(
            serde_json::json!({ "plaintexts": args.plaintexts, "ciphertexts": args.ciphertexts, "q": args.q,
                                "originals": args.originals, "kpa_solver": solver }),
            started,
        )?,
    };
    out.write("report.json", json_line(&report))?;
    out.write("report.csv", csv_report(&report))?;
    ctx.commit(out, "kpa")
}

#[derive(Args, Debug)]
pub struct CoaArgs {
    #[arg(long)]
    ciphertexts: PathBuf,
    /// Published patterns in their original order.
    #[arg(long)]
    originals: PathBuf,
    /// True order, for scoring.
    #[arg(long)]
    true_permutation: Option<PathBuf>,
}

pub fn coa(ctx: &Context, args: &CoaArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let cfg = &ctx.cfg;
    let originals = read_key(&args.originals)?.key;
    let ciphers = read_ciphers(&args.ciphertexts)?;
    let true_perm = args.true_permutation.as_deref().map(read_perm).transpose()?;
    if let Some(bad) = ciphers.iter().find(|c| c.len() != originals.patterns()) {
        return Err(CliError::Validation(format!(
            "ciphertexts have {} values, originals have M={}",
            bad.len(),
            originals.patterns()
        )));
    }
    if (originals.width(), originals.height()) != (cfg.width, cfg.height) {
        return Err(CliError::Validation(format!(
            "originals are {}x{}, config is {}x{}",
            originals.width(),
            originals.height(),
            cfg.width,
            cfg.height
        )));
    }
    let exemplars = cfg.load_images(&cfg.exemplars, "exemplars")?;
    let simulated = simulate_exemplar_intensities(&exemplars, &originals)?;
    let actual = Array2::from_shape_fn((originals.patterns(), ciphers.len()), |(m, q)| ciphers[q].values()[m]);
    let result = recover_permutation_coa(actual.view(), simulated.view(), &cfg.histogram)?;

    let mut out = ctx.stage()?;
    out.write(
        "recovered.spiperm",
        PermutationFile { seed: cfg.seed_for("permutation")?, permutation: result.permutation.clone() }.encode(),
    )?;
    out.write("distances.csv", encode_matrix(&result.distance_matrix))?;
    for (prefix, rows) in [("actual", &actual), ("exemplar", &simulated)] {
        for (m, h) in row_histograms(rows.view(), &cfg.histogram)?.iter().enumerate() {
            out.write(&format!("histograms/{prefix}_{:04}.csv", m + 1), encode_histogram(h))?;
        }
    }
    let report = AttackReport {
        attack: "coa".into(),
        regime: Regime::TypeII.to_string(),
        n: originals.pixels(),
        m: originals.patterns(),
        q: ciphers.len(),
        cracking_correct_rate: None,
        permutation_correct_rate: true_perm
            .map(|t| permutation_correct_rate(&t.permutation, &result.permutation))
            .transpose()?,
        psnr_by_image: Vec::new(),
        run_metadata: ctx.metadata(
            serde_json::json!({ "ciphertexts": args.ciphertexts, "originals": args.originals,
                                "exemplar_count": exemplars.len(), "frequency_normalized": result.normalized }),
            started,
        )?,
    };
    out.write("report.json", json_line(&report))?;
    out.write("report.csv", csv_report(&report))?;
    ctx.commit(out, "coa")
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    true_key: Option<PathBuf>,
    #[arg(long)]
    recovered_key: Option<PathBuf>,
    #[arg(long)]
    true_permutation: Option<PathBuf>,
    #[arg(long)]
    recovered_permutation: Option<PathBuf>,
    /// Plaintext matrix to score decrypted images against.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Directory of decrypted PGM images, in file-name order.
    #[arg(long)]
    decrypted: Option<PathBuf>,
}

pub fn eval(ctx: &Context, args: &EvalArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let pair = |a: &Option<PathBuf>, b: &Option<PathBuf>, what: &str| -> Result<bool, CliError> {
        match (a, b) {
            (Some(_), Some(_)) => Ok(true),
            (None, None) => Ok(false),
            _ => Err(CliError::Validation(format!("{what} needs both sides"))),
        }
    };
    let keys = pair(&args.true_key, &args.recovered_key, "key comparison")?;
    let perms = pair(&args.true_permutation, &args.recovered_permutation, "permutation comparison")?;
    let images = pair(&args.reference, &args.decrypted, "image comparison")?;
    if !(keys || perms || images) {
        return Err(CliError::Validation("nothing to evaluate".into()));
    }
    let mut report = AttackReport {
        attack: "eval".into(),
        regime: "-".into(),
        n: 0,
        m: 0,
        q: 0,
        cracking_correct_rate: None,
        permutation_correct_rate: None,
        psnr_by_image: Vec::new(),
        run_metadata: RunMetadata::default(),
    };
    if keys {
        let t = read_key(args.true_key.as_ref().expect("checked"))?;
        let r = read_key(args.recovered_key.as_ref().expect("checked"))?;
        report.regime = t.regime.to_string();
        report.n = t.key.pixels();
        report.m = t.key.patterns();
        report.cracking_correct_rate = Some(cracking_correct_rate(&t.key, &r.key)?);
    }
    if perms {
        let t = read_perm(args.true_permutation.as_ref().expect("checked"))?;
        let r = read_perm(args.recovered_permutation.as_ref().expect("checked"))?;
        report.regime = Regime::TypeII.to_string();
        report.m = t.permutation.len();
        report.permutation_correct_rate = Some(permutation_correct_rate(&t.permutation, &r.permutation)?);
    }
    if images {
        let dir = args.decrypted.as_ref().expect("checked");
        require(dir, "decrypted image directory")?;
        let decrypted = read_pgm_dir(dir)?;
        let (w, h) = decrypted.first().map_or((1, 1), |d| (d.width(), d.height()));
        let reference = read_plaintexts(args.reference.as_ref().expect("checked"), w, h)?;
        if reference.len() < decrypted.len() {
            return Err(CliError::Validation(format!(
                "{} decrypted images but only {} references",
                decrypted.len(),
                reference.len()
            )));
        }
        report.n = w * h;
        report.q = decrypted.len();
        report.psnr_by_image = reference
            .iter()
            .zip(&decrypted)
            .map(|(a, b)| psnr(a, b))
            .collect::<Result<Vec<_>, _>>()?;
    }
    report.run_metadata = ctx.metadata(serde_json::json!({ "inputs": [
        &args.true_key, &args.recovered_key, &args.true_permutation,
        &args.recovered_permutation, &args.reference, &args.decrypted] }), started)?;
    let mut out = ctx.stage()?;
    out.write("eval.json", json_line(&report))?;
    out.write("eval.csv", csv_report(&report))?;
    ctx.commit(out, "eval")
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Report files, or directories searched recursively for `report.json`.
    #[arg(long, num_args = 1.., required = true)]
    runs: Vec<PathBuf>,
}

fn collect_reports(path: &Path, found: &mut Vec<PathBuf>) -> Result<(), CliError> {
    require(path, "run path")?;
    if path.is_file() {
        found.push(path.to_path_buf());
        return Ok(());
    }
    let mut entries: Vec<PathBuf> = std::fs::read_dir(path)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    entries.sort();
    for p in entries {
        if p.is_dir() {
            collect_reports(&p, found)?;
        } else if p.file_name().is_some_and(|n| n == "report.json") {
            found.push(p);
        }
    }
    Ok(())
}

/// Mean of a rate over the runs that recorded it.
fn mean_of(reports: &[&AttackReport], f: impl Fn(&AttackReport) -> Option<f64>) -> String {
    let values: Vec<f64> = reports.iter().filter_map(|r| f(r)).collect();
    if values.is_empty() {
        String::new()
    } else {
        format!("{:.4}", values.iter().sum::<f64>() / values.len() as f64)
    }
}

pub fn report(ctx: &Context, args: &ReportArgs) -> Result<(), CliError> {
    let mut paths = Vec::new();
    for p in &args.runs {
        collect_reports(p, &mut paths)?;
    }
    let mut reports = Vec::with_capacity(paths.len());
    for p in &paths {
        let text = std::fs::read_to_string(p).map_err(|e| CliError::Runtime(format!("{}: {e}", p.display())))?;
        let r: AttackReport =
            serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?;
        reports.push(r);
    }
    if reports.is_empty() {
        return Err(CliError::Validation("no report.json files found".into()));
    }

    let mut runs = format!("{}\n", AttackReport::csv_header());
    for r in &reports {
        runs.push_str(&r.csv_row());
        runs.push('\n');
    }
    let mut groups: BTreeMap<(String, String, usize, usize, usize), Vec<&AttackReport>> = BTreeMap::new();
    for r in &reports {
        groups.entry((r.attack.clone(), r.regime.clone(), r.n, r.m, r.q)).or_default().push(r);
    }
    let mut table1 = String::from("n,m,m_over_n,q,q_over_n,runs,cracking_correct_rate\n");
    let mut table2 = String::from("n,m,q,q_over_n,runs,permutation_correct_rate,cracking_correct_rate\n");
    let mut table3 = String::from("n,m,q,runs,permutation_correct_rate\n");
    let mut decrypt = String::from("n,m,m_over_n,images,runs,mean_psnr_db\n");
    for ((attack, regime, n, m, q), rs) in &groups {
        let (nf, mf, qf) = (*n as f64, *m as f64, *q as f64);
        let k = rs.len();
        let crack = mean_of(rs, |r| r.cracking_correct_rate);
        let perm = mean_of(rs, |r| r.permutation_correct_rate);
        match (attack.as_str(), regime.as_str()) {
            ("kpa", "TYPE1") => {
                let _ = writeln!(table1, "{n},{m},{:.2},{q},{:.2},{k},{crack}", mf / nf, qf / nf);
            }
            ("kpa", _) => {
                let _ = writeln!(table2, "{n},{m},{q},{:.2},{k},{perm},{crack}", qf / nf);
            }
            ("coa", _) => {
                let _ = writeln!(table3, "{n},{m},{q},{k},{perm}");
            }
            ("decrypt", _) => {
                let _ = writeln!(decrypt, "{n},{m},{:.2},{q},{k},{}", mf / nf, mean_of(rs, |r| r.mean_psnr()));
            }
            _ => {}
        }
    }
    let mut out = ctx.stage()?;
    out.write("runs.csv", runs)?;
    out.write("table_kpa_type1.csv", table1)?;
    out.write("table_kpa_type2.csv", table2)?;
    out.write("table_coa.csv", table3)?;
    out.write("table_decrypt.csv", decrypt)?;
    ctx.commit(out, "report")
}
