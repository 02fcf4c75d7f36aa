use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dnagolay::analysis::{
    cost_curve, inject_in_place, monte_carlo_decode, solve_capacity, solve_capacity_as_printed, synthesis_cost,
    CapacityParams, ChannelMode, ChannelSpec, SimulationOptions,
};
use dnagolay::chunk::{layout_for, DEFAULT_CHUNK_BASES};
use dnagolay::codebook::{
    greedy_construct_with, load_codebook, verify_code, verify_subcode, CodeFamilySpec, LoadReport, ScanOrder,
};
use dnagolay::fasta::{parse_fasta_records, split_records, write_record};
use dnagolay::{decode_file, emit_fasta, encode_file_with, ByteCodebook, DecodeOptions, FileDescriptor, TritString};

const EXIT_PARTIAL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "dnagolay", version, about = "Homopolymer-free DNA storage codec")]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a file into FASTA chunk records.
    Encode(EncodeArgs),
    /// Reconstruct a file from FASTA chunk records.
    Decode(DecodeArgs),
    /// Inject substitutions into a FASTA file.
    Corrupt(CorruptArgs),
    /// Check a codebook or codeword list against an (n,M,d) claim.
    VerifyCode(VerifyArgs),
    /// Build a code greedily for an (n,M,d) family.
    Construct(ConstructArgs),
    /// Solve for bytes storable per gram of DNA.
    Capacity(CapacityArgs),
    /// Monte Carlo decoding over a grid of channels.
    Simulate(SimulateArgs),
    /// Synthesis cost for a range of file sizes.
    Cost(CostArgs),
}

#[derive(Args)]
struct CodebookArg {
    /// Codebook table (`byte codeword weight` rows) replacing the built-in one.
    #[arg(long)]
    codebook: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=8))]
    file_id: u8,
    #[arg(long, default_value_t = DEFAULT_CHUNK_BASES)]
    chunk_bases: usize,
    /// Extension stored in the metadata trailer (default: the input's).
    #[arg(long)]
    extension: Option<String>,
    #[command(flatten)]
    codebook: CodebookArg,
    /// Structured JSON report.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Output file; an incomplete result goes to `<out>.partial` instead.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CHUNK_BASES)]
    chunk_bases: usize,
    /// Decode this file id instead of the most common one.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=8))]
    file_id: Option<u8>,
    #[command(flatten)]
    codebook: CodebookArg,
}

#[derive(Args)]
#[group(id = "channel", required = true, multiple = false, args = ["count", "rate"])]
struct ChannelArgs {
    /// Substitutions per 11-base window.
    #[arg(long)]
    count: Option<usize>,
    /// Independent per-base substitution probability.
    #[arg(long)]
    rate: Option<f64>,
}

impl ChannelArgs {
    fn mode(&self) -> ChannelMode {
        match (self.count, self.rate) {
            (Some(count), _) => ChannelMode::FixedCount { count },
            (_, Some(rate)) => ChannelMode::IidRate { rate },
            _ => unreachable!("clap requires one of --count/--rate"),
        }
    }
}

#[derive(Args)]
struct CorruptArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_CHUNK_BASES)]
    chunk_bases: usize,
    /// Corrupt chunk headers too (they carry no error correction).
    #[arg(long)]
    include_headers: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Codebook table or codeword list (one codeword per line); built-in table by default.
    #[arg(long)]
    codebook: Option<PathBuf>,
    #[arg(long, default_value = "11,256,5")]
    family: CodeFamilySpec,
    /// Also look for a subset with at least this pairwise distance.
    #[arg(long)]
    subcode_distance: Option<usize>,
    /// Required size of that subset.
    #[arg(long, default_value_t = 243, requires = "subcode_distance")]
    subcode_size: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Lex,
    Random,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    family: CodeFamilySpec,
    #[arg(long, value_enum, default_value_t = Order::Lex)]
    order: Order,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop after this many candidates.
    #[arg(long)]
    max_candidates: Option<u64>,
    /// Codeword list, one per line.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct CapacityArgs {
    /// Payload bases per chunk.
    #[arg(long = "l", default_value_t = 99)]
    l: usize,
    /// Bases per byte.
    #[arg(long = "N", default_value_t = 11)]
    n: usize,
    #[arg(long, default_value_t = dnagolay::analysis::capacity::BASES_PER_GRAM)]
    bases_per_gram: f64,
    #[arg(long, default_value_t = dnagolay::analysis::capacity::DEFAULT_OVERHEAD_BYTES)]
    overhead: f64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated channels, e.g. `count=0,count=1,count=2,rate=0.01`.
    #[arg(long)]
    grid: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_CHUNK_BASES)]
    chunk_bases: usize,
    #[arg(long)]
    include_headers: bool,
    #[command(flatten)]
    codebook: CodebookArg,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct CostArgs {
    /// Comma-separated file sizes in bytes.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "1000,10000,100000,1000000,10000000,100000000"
    )]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    extension_len: usize,
    #[arg(long, default_value_t = DEFAULT_CHUNK_BASES)]
    chunk_bases: usize,
    #[arg(long, default_value_t = dnagolay::analysis::cost::COST_PER_BASE_USD)]
    per_base: f64,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Bad flag values that clap cannot check on its own.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    use dnagolay::Error as E;
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return EXIT_USAGE;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::FileIdRange(_)
                | E::ChunkSize(_)
                | E::ExtensionChar(_)
                | E::Channel(_)
                | E::CapacityParams(_)
                | E::InvalidFamily(_) => EXIT_USAGE,
                E::ConflictingChunks { .. } => EXIT_PARTIAL,
                _ => EXIT_IO,
            };
        }
    }
    EXIT_IO
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, data: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, data).with_context(|| format!("writing {}", path.display()))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).context("serializing report")?;
    write(path, text + "\n")
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn load_codebook_arg(arg: &CodebookArg) -> Result<(ByteCodebook, LoadReport)> {
    match &arg.codebook {
        None => Ok(dnagolay::codebook::standard_with_report().clone()),
        Some(path) => {
            let (cb, report) =
                load_codebook(&read_text(path)?).with_context(|| format!("loading codebook {}", path.display()))?;
            warn_load_report(&report);
            Ok((cb, report))
        }
    }
}

fn warn_load_report(report: &LoadReport) {
    for r in &report.remaps {
        eprintln!(
            "warning: line {}: codeword {} listed for byte {} reassigned to missing byte {}",
            r.line, r.codeword, r.declared_byte, r.assigned_byte
        );
    }
    for w in &report.weight_mismatches {
        eprintln!(
            "warning: line {}: codeword {} for byte {} has weight {}, listed as {}",
            w.line, w.codeword, w.byte, w.computed, w.declared
        );
    }
}

fn check_chunk_bases(chunk_bases: usize) -> Result<()> {
    if chunk_bases == 0 || !chunk_bases.is_multiple_of(dnagolay::CODEWORD_LEN) {
        return Err(usage(format!(
            "--chunk-bases must be a positive multiple of {}, got {chunk_bases}",
            dnagolay::CODEWORD_LEN
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct EncodeReport<'a> {
    input: String,
    file_id: u8,
    extension: &'a str,
    size_bytes: usize,
    chunk_bases: usize,
    chunks: usize,
    mu: usize,
    payload_bases: usize,
    total_bases: usize,
    cost_usd: f64,
}

fn cmd_encode(a: EncodeArgs) -> Result<u8> {
    check_chunk_bases(a.chunk_bases)?;
    let (cb, _) = load_codebook_arg(&a.codebook)?;
    let content = read(&a.input)?;
    let extension = a.extension.clone().unwrap_or_else(|| {
        a.input
            .extension()
            .map(|e| e.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    let fd = FileDescriptor::new(content, extension.clone(), a.file_id)?;
    let records = encode_file_with(&fd, &cb, a.chunk_bases)?;
    write(&a.out, emit_fasta(&records))?;

    let layout = layout_for(fd.size_bytes(), extension.len(), a.chunk_bases)?;
    let total_bases: usize = records.iter().map(|r| r.len()).sum();
    let report = EncodeReport {
        input: a.input.display().to_string(),
        file_id: a.file_id,
        extension: &extension,
        size_bytes: fd.size_bytes(),
        chunk_bases: a.chunk_bases,
        chunks: records.len(),
        mu: layout.mu,
        payload_bases: layout.payload_bases,
        total_bases,
        cost_usd: synthesis_cost(total_bases, dnagolay::analysis::cost::COST_PER_BASE_USD),
    };
    println!("bases: {}", report.total_bases);
    println!("chunks: {}", report.chunks);
    println!("mu: {}", report.mu);
    println!("cost_usd: {:.2}", report.cost_usd);
    if let Some(path) = &a.report {
        write_json(path, &report)?;
    }
    Ok(0)
}

fn partial_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".partial");
    PathBuf::from(s)
}

fn cmd_decode(a: DecodeArgs) -> Result<u8> {
    check_chunk_bases(a.chunk_bases)?;
    let (cb, _) = load_codebook_arg(&a.codebook)?;
    let text = read_text(&a.input)?;
    let parsed = split_records(
        parse_fasta_records(&text).with_context(|| format!("parsing {}", a.input.display()))?,
        a.chunk_bases,
    )
    .with_context(|| format!("parsing {}", a.input.display()))?;
    let result = decode_file(&parsed, &cb, &DecodeOptions { file_id: a.file_id })?;

    let corrected: usize = result
        .per_chunk
        .iter()
        .flat_map(|c| &c.codeword_distances)
        .filter(|&&d| d > 0)
        .count();
    let ambiguous: usize = result.per_chunk.iter().map(|c| c.ambiguities).sum();
    let parity_failures = result.per_chunk.iter().filter(|c| !c.parity_ok).count();
    let target = if result.complete {
        a.out.clone()
    } else {
        partial_path(&a.out)
    };
    write(&target, &result.content)?;
    println!("bytes: {}", result.content.len());
    println!("extension: {}", result.extension);
    println!("chunks: {}", result.per_chunk.len());
    println!("corrected_codewords: {corrected}");
    println!("ambiguous_codewords: {ambiguous}");
    println!("parity_failures: {parity_failures}");
    if !result.unrecoverable_chunks.is_empty() {
        println!("missing_chunks: {:?}", result.unrecoverable_chunks);
    }
    println!("complete: {}", result.complete);
    println!("written: {}", target.display());
    if let Some(path) = &a.report {
        write_json(path, &result)?;
    }
    Ok(if result.complete { 0 } else { EXIT_PARTIAL })
}

fn cmd_corrupt(a: CorruptArgs) -> Result<u8> {
    check_chunk_bases(a.chunk_bases)?;
    let spec = ChannelSpec::new(a.channel.mode(), a.seed)?;
    let text = read_text(&a.input)?;
    let records = parse_fasta_records(&text).with_context(|| format!("parsing {}", a.input.display()))?;
    let parsed = split_records(records, a.chunk_bases).with_context(|| format!("parsing {}", a.input.display()))?;
    let mut rng = spec.rng();
    let mut out = String::new();
    let mut hits = 0;
    for cand in parsed.candidates {
        let mut payload = cand.payload;
        let mut header = cand.header;
        hits += inject_in_place(payload.as_mut_slice(), spec.mode, &mut rng)?;
        if a.include_headers {
            hits += inject_in_place(header.as_mut_slice(), spec.mode, &mut rng)?;
        }
        payload.extend_from_slice(header.as_slice());
        write_record(&mut out, &cand.title, &payload);
    }
    write(&a.out, out)?;
    println!("substitutions: {hits}");
    println!("channel: {} seed={}", spec.mode, spec.seed);
    Ok(0)
}

/// Codebook tables have `byte codeword weight` rows; anything with a single
/// token per line is read as a plain codeword list.
fn read_codewords(text: &str) -> Result<(Vec<TritString>, Option<LoadReport>)> {
    let rows: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if rows.iter().all(|r| r.split_whitespace().count() == 1) {
        let words = rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.parse::<TritString>().with_context(|| format!("codeword {}", i + 1)))
            .collect::<Result<Vec<_>>>()?;
        return Ok((words, None));
    }
    let (cb, report) = load_codebook(text)?;
    Ok((cb.codewords().to_vec(), Some(report)))
}

#[derive(Serialize)]
struct VerifyOutput {
    load_report: Option<LoadReport>,
    code: dnagolay::codebook::CodeReport,
    subcode: Option<dnagolay::codebook::SubcodeReport>,
}

fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    let (words, load_report) = match &a.codebook {
        Some(path) => read_codewords(&read_text(path)?).with_context(|| format!("loading {}", path.display()))?,
        None => {
            let (cb, report) = dnagolay::codebook::standard_with_report();
            (cb.codewords().to_vec(), Some(report.clone()))
        }
    };
    if let Some(r) = &load_report {
        warn_load_report(r);
    }
    let code = verify_code(&words, a.family)?;
    println!("claim: {}", a.family);
    println!("length: {}", code.n);
    println!("size: {}", code.m);
    match code.d_min {
        Some(d) => println!("min_distance: {d}"),
        None => println!("min_distance: none"),
    }
    let hist: Vec<String> = code
        .distance_histogram
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(d, c)| format!("{d}:{c}"))
        .collect();
    println!("distance_histogram: {}", hist.join(" "));
    println!("violations: {}", code.violation_count);
    println!("holds: {}", code.holds);

    let subcode = match a.subcode_distance {
        Some(d) => {
            if words.len() != 256 {
                return Err(usage("--subcode-distance needs a 256-word codebook table"));
            }
            let cb = ByteCodebook::from_codewords(words.clone())?;
            let s = verify_subcode(&cb, d, a.subcode_size);
            println!(
                "subcode: {} words at distance >= {d} (target {}), meets target: {}",
                s.subset.len(),
                a.subcode_size,
                s.meets_target
            );
            println!("subcode_excluded: {:?}", s.excluded);
            Some(s)
        }
        None => None,
    };
    let ok = code.holds && subcode.as_ref().is_none_or(|s| s.meets_target);
    if let Some(path) = &a.report {
        write_json(
            path,
            &VerifyOutput {
                load_report,
                code,
                subcode,
            },
        )?;
    }
    Ok(if ok { 0 } else { EXIT_PARTIAL })
}

#[derive(Serialize)]
struct ConstructOutput {
    spec: CodeFamilySpec,
    order: ScanOrder,
    size: usize,
    candidates_scanned: u64,
    exhausted: bool,
    verified: dnagolay::codebook::CodeReport,
}

fn cmd_construct(a: ConstructArgs) -> Result<u8> {
    if a.family.n > 40 {
        return Err(usage(format!("construction supports n <= 40, got {}", a.family.n)));
    }
    let order = match a.order {
        Order::Lex => ScanOrder::Lexicographic,
        Order::Random => ScanOrder::SeededRandom(a.seed),
    };
    let c = greedy_construct_with(&a.family, order, a.max_candidates);
    let verified = verify_code(&c.codewords, a.family)?;
    println!("family: {}", a.family);
    println!("codewords: {}", c.codewords.len());
    println!("candidates_scanned: {}", c.candidates_scanned);
    match verified.d_min {
        Some(d) => println!("min_distance: {d}"),
        None => println!("min_distance: none"),
    }
    println!("holds: {}", verified.holds);
    if let Some(path) = &a.out {
        let mut text = String::with_capacity(c.codewords.len() * (a.family.n + 1));
        for w in &c.codewords {
            text.push_str(&w.to_string());
            text.push('\n');
        }
        write(path, text)?;
    }
    let holds = verified.holds;
    if let Some(path) = &a.report {
        write_json(
            path,
            &ConstructOutput {
                spec: c.spec,
                order: c.order,
                size: c.codewords.len(),
                candidates_scanned: c.candidates_scanned,
                exhausted: c.exhausted,
                verified,
            },
        )?;
    }
    Ok(if holds { 0 } else { EXIT_PARTIAL })
}

#[derive(Serialize)]
struct CapacityOutput {
    params: CapacityParams,
    bytes_per_gram: f64,
    exabytes_per_gram: f64,
    mu: f64,
    residual: f64,
    iterations: usize,
    /// Fixed point with `N` multiplying only the log term.
    literal_bytes_per_gram: Option<f64>,
}

fn cmd_capacity(a: CapacityArgs) -> Result<u8> {
    let params = CapacityParams {
        l: a.l,
        n: a.n,
        bases_per_gram: a.bases_per_gram,
        overhead_bytes: a.overhead,
    };
    let r = solve_capacity(&params)?;
    let literal = solve_capacity_as_printed(&params).ok().map(|r| r.bytes_per_gram);
    println!("bytes_per_gram: {:.6e}", r.bytes_per_gram);
    println!("exabytes_per_gram: {:.3}", r.bytes_per_gram / 1e18);
    println!("mu: {:.4}", r.mu);
    println!("residual: {:.3e}", r.residual);
    println!("iterations: {}", r.iterations);
    if let Some(x) = literal {
        println!("literal_grouping_bytes_per_gram: {x:.6e}");
    }
    if let Some(path) = &a.report {
        write_json(
            path,
            &CapacityOutput {
                params,
                bytes_per_gram: r.bytes_per_gram,
                exabytes_per_gram: r.bytes_per_gram / 1e18,
                mu: r.mu,
                residual: r.residual,
                iterations: r.iterations,
                literal_bytes_per_gram: literal,
            },
        )?;
    }
    Ok(0)
}

fn parse_grid(grid: &str, seed: u64) -> Result<Vec<ChannelSpec>> {
    let specs = grid
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Ok(ChannelSpec::new(s.parse::<ChannelMode>()?, seed)?))
        .collect::<Result<Vec<_>>>()?;
    if specs.is_empty() {
        return Err(usage("--grid is empty"));
    }
    Ok(specs)
}

fn cmd_simulate(a: SimulateArgs) -> Result<u8> {
    check_chunk_bases(a.chunk_bases)?;
    if a.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let grid = parse_grid(&a.grid, a.seed)?;
    let (cb, _) = load_codebook_arg(&a.codebook)?;
    let extension = a
        .input
        .extension()
        .map(|e| e.to_string_lossy().into_owned())
        .unwrap_or_default();
    let fd = FileDescriptor::new(read(&a.input)?, extension, 0)?;
    let opts = SimulationOptions {
        chunk_bases: a.chunk_bases,
        corrupt_headers: a.include_headers,
    };
    let rows = monte_carlo_decode(&fd, &grid, a.trials, &cb, opts)?;
    println!("channel\tseed\ttrials\tbyte_accuracy\tchunk_parity_failure_rate\tfile_exact_rate");
    for r in &rows {
        println!(
            "{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}",
            r.mode, r.seed, r.trials, r.byte_accuracy, r.chunk_parity_failure_rate, r.file_exact_rate
        );
    }
    if let Some(path) = &a.csv {
        write_csv(path, &rows)?;
    }
    if let Some(path) = &a.report {
        write_json(path, &rows)?;
    }
    Ok(0)
}

fn cmd_cost(a: CostArgs) -> Result<u8> {
    check_chunk_bases(a.chunk_bases)?;
    if !(a.per_base.is_finite() && a.per_base >= 0.0) {
        return Err(usage("--per-base must be a non-negative number"));
    }
    let rows = cost_curve(&a.sizes, a.extension_len, a.chunk_bases, a.per_base)?;
    println!("size_bytes\tchunks\tmu\tbases\tcost_usd\tcost_per_mb");
    for r in &rows {
        let per_mb = r.cost_per_mb.map(|c| format!("{c:.2}")).unwrap_or_else(|| "-".into());
        println!(
            "{}\t{}\t{}\t{}\t{:.2}\t{per_mb}",
            r.size_bytes, r.chunks, r.mu, r.bases, r.cost_usd
        );
    }
    if let Some(path) = &a.csv {
        write_csv(path, &rows)?;
    }
    if let Some(path) = &a.report {
        write_json(path, &rows)?;
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Corrupt(a) => cmd_corrupt(a),
        Command::VerifyCode(a) => cmd_verify(a),
        Command::Construct(a) => cmd_construct(a),
        Command::Capacity(a) => cmd_capacity(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Cost(a) => cmd_cost(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code_for(&e);
            eprintln!("error: {e:#}");
            code
        }
    };
    let _ = io::stdout().flush();
    ExitCode::from(code)
}
