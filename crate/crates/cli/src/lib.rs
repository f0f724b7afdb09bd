//! The `logsig` command line: signature generation, analysis, factorization,
//! existence searches, MST3 and reproduction of the worked examples.
//!
//! Every verb returns an [`Outcome`]; the binary prints its text and exits
//! with status 0 exactly when [`Outcome::ok`] is set.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use logsig::algebra::GVec;
use logsig::construct::{
    dr_construct, exact_transversal_randomized, general_construct, FastFactorizer,
    GeneralConstructionSpec, SeedInputs, Side, SubgroupChain, EX6_INPUTS, EX7_INPUTS,
};
use logsig::format::{
    parse_drstore, parse_logsig, parse_private_key, parse_public_key, write_drstore, write_logsig,
    write_private_key, write_public_key,
};
use logsig::mst3::{encrypt, keygen, Ciphertext, Decryptor, SuzukiParams};
use logsig::periodicity::{
    assemble_block, at_risk, check_periodicity_criterion, exhaustive_aperiodic_search,
    is_aperiodic, period_set, CriterionMode, DEFAULT_SEARCH_BUDGET,
};
use logsig::signature::{tau_inv, Block, LogSig, DEFAULT_BUDGET};

#[derive(Parser, Debug)]
#[command(name = "logsig", version, about = "Logarithmic signatures of elementary abelian 2-groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a signature of 2^n.
    Gen(GenArgs),
    /// Validate a signature file and report its period sets.
    Analyze(AnalyzeArgs),
    /// Factor an element with respect to a stored construction.
    Factor(FactorArgs),
    /// Search exhaustively for an aperiodic signature of a given type.
    Search(SearchArgs),
    /// MST3 over Suzuki 2-groups.
    Mst3 {
        #[command(subcommand)]
        op: Mst3Command,
    },
    /// Rebuild the worked examples and compare them with their known values.
    ReproducePaper(ReproduceArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    /// Block sizes of a randomized exact transversal signature (powers of two).
    #[arg(long = "type", value_delimiter = ',', conflicts_with = "v")]
    pub type_vec: Option<Vec<usize>>,
    /// Factor dimensions `U_1..U_s,D_1..D_s` of the aperiodic construction.
    #[arg(long, value_delimiter = ',')]
    pub v: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Draw a random ordered basis instead of the standard one.
    #[arg(long)]
    pub random_basis: bool,
    /// Where to write the signature; stdout when absent.
    #[arg(long)]
    pub sig: Option<PathBuf>,
    /// Where to write the stored form (construction only).
    #[arg(long)]
    pub store: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
}

#[derive(Args, Debug)]
pub struct FactorArgs {
    pub store: PathBuf,
    pub hex: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "type", value_delimiter = ',', required = true)]
    pub type_vec: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Mst3Command {
    /// Generate a key pair.
    Keygen(KeygenArgs),
    /// Encrypt a message `0 <= x < 2^n`.
    Encrypt(EncryptArgs),
    /// Decrypt a ciphertext given as `c,d c,d`.
    Decrypt(DecryptArgs),
}

#[derive(Args, Debug)]
pub struct KeygenArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also require `a_{i,j} a_{i,l}^{-1}` to be non-central.
    #[arg(long)]
    pub distinct_cosets: bool,
    #[arg(long = "pub")]
    pub public: PathBuf,
    #[arg(long = "priv")]
    pub private: PathBuf,
}

#[derive(Args, Debug)]
pub struct EncryptArgs {
    #[arg(long = "pub")]
    pub public: PathBuf,
    pub message: u128,
}

#[derive(Args, Debug)]
pub struct DecryptArgs {
    #[arg(long = "priv")]
    pub private: PathBuf,
    #[arg(num_args = 1..=2, required = true)]
    pub ciphertext: Vec<String>,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    #[arg(long)]
    pub json: bool,
}

/// Text to print and whether every check of the verb passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

impl Outcome {
    fn pass(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn type_string(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|r| r.to_string()).collect();
    format!("({})", parts.join(","))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Gen(a) => gen(&a),
        Command::Analyze(a) => analyze(&a),
        Command::Factor(a) => factor(&a),
        Command::Search(a) => search(&a),
        Command::Mst3 { op } => match op {
            Mst3Command::Keygen(a) => mst3_keygen(&a),
            Mst3Command::Encrypt(a) => mst3_encrypt(&a),
            Mst3Command::Decrypt(a) => mst3_decrypt(&a),
        },
        Command::ReproducePaper(a) => {
            let report = reproduce_paper();
            let ok = report.ok();
            let text = if a.json { to_json(&report)? } else { report.to_text() };
            Ok(Outcome { text, ok })
        }
    }
}

fn et_signature(n: usize, type_vec: &[usize], rng: &mut ChaCha8Rng) -> Result<LogSig> {
    let drops = type_vec
        .iter()
        .map(|&r| {
            if r < 2 || !r.is_power_of_two() {
                bail!("block size {r} is not a power of two above 1");
            }
            Ok(r.trailing_zeros() as usize)
        })
        .collect::<Result<Vec<_>>>()?;
    let chain = SubgroupChain::standard(n, &drops)?;
    Ok(exact_transversal_randomized(&chain, Side::Left, rng)?)
}

fn gen(a: &GenArgs) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let (sig, stored) = match &a.type_vec {
        Some(t) => {
            if a.store.is_some() {
                bail!("--store needs the aperiodic construction, not --type");
            }
            (et_signature(a.n, t, &mut rng)?, None)
        }
        None => {
            let spec = GeneralConstructionSpec::random(a.n, a.v.clone(), a.random_basis, &mut rng)?;
            let out = general_construct(&spec, a.budget)?;
            (out.sig, Some(out.stored))
        }
    };
    let text = write_logsig(&sig);
    if let (Some(path), Some(st)) = (&a.store, &stored) {
        write(path, &write_drstore(st))?;
    }
    match &a.sig {
        Some(path) => {
            write(path, &text)?;
            Ok(Outcome::pass(format!(
                "wrote {} of type {}\n",
                path.display(),
                type_string(&sig.type_vec())
            )))
        }
        None => Ok(Outcome::pass(text)),
    }
}

#[derive(Serialize)]
struct BlockReport {
    index: usize,
    size: usize,
    periods: Vec<GVec>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    n: usize,
    target: &'static str,
    type_vec: Vec<usize>,
    length: usize,
    products: u128,
    distinct: u64,
    is_cover: bool,
    is_logsig: bool,
    collision_histogram: Vec<(u64, u64)>,
    blocks: Vec<BlockReport>,
    aperiodic: bool,
    at_risk: bool,
    warnings: Vec<String>,
    verdict: String,
}

fn analyze(a: &AnalyzeArgs) -> Result<Outcome> {
    let text = read(&a.file)?;
    let sig = parse_logsig(&text).with_context(|| a.file.display().to_string())?;
    let v = sig.validate(a.budget)?;
    let blocks: Vec<BlockReport> = sig
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, b)| BlockReport {
            index: i + 1,
            size: b.len(),
            periods: period_set(b.elems()).periods().to_vec(),
        })
        .collect();
    let periodic: Vec<String> = blocks
        .iter()
        .filter(|b| !b.periods.is_empty())
        .map(|b| format!("B_{}", b.index))
        .collect();
    let shape = if v.is_logsig {
        "valid"
    } else if v.is_cover {
        "cover, not a logarithmic signature"
    } else {
        "not a cover"
    };
    let periodicity = if periodic.is_empty() {
        "aperiodic".to_string()
    } else {
        format!("periodic block: {}", periodic.join(", "))
    };
    let mut warnings = v.warnings.clone();
    warnings.extend(sig.length_warning());
    let report = AnalyzeReport {
        n: sig.dim(),
        target: sig.target().kind(),
        type_vec: sig.type_vec(),
        length: sig.length(),
        products: v.products,
        distinct: v.distinct,
        is_cover: v.is_cover,
        is_logsig: v.is_logsig,
        collision_histogram: v.collision_histogram.iter().map(|(k, c)| (*k, *c)).collect(),
        blocks,
        aperiodic: is_aperiodic(&sig),
        at_risk: at_risk(&sig),
        warnings,
        verdict: format!("{shape}, {periodicity}, type {}", type_string(&sig.type_vec())),
    };
    let out = if a.json {
        to_json(&report)?
    } else {
        let mut s = format!("{}\n", report.verdict);
        s += &format!("n={} target={} length={}\n", report.n, report.target, report.length);
        s += &format!(
            "products={} distinct={} cover={} logsig={}\n",
            report.products, report.distinct, report.is_cover, report.is_logsig
        );
        for (k, c) in &report.collision_histogram {
            s += &format!("factorizations={k} elements={c}\n");
        }
        for b in &report.blocks {
            let p: Vec<String> = b.periods.iter().map(|g| g.to_hex()).collect();
            s += &format!("B_{} size={} periods={}\n", b.index, b.size, p.join(","));
        }
        s += &format!("at_risk={}\n", report.at_risk);
        for w in &report.warnings {
            s += &format!("warning: {w}\n");
        }
        s
    };
    Ok(Outcome {
        text: out,
        ok: report.is_logsig,
    })
}

#[derive(Serialize)]
struct FactorReport {
    element: GVec,
    index: u128,
    tuple: Vec<usize>,
    steps: u64,
}

fn factor(a: &FactorArgs) -> Result<Outcome> {
    let st = parse_drstore(&read(&a.store)?).with_context(|| a.store.display().to_string())?;
    let g = GVec::from_hex(&a.hex, st.n)?;
    let f = FastFactorizer::new(&st)?;
    let r = f.factor(g)?;
    let tuple = tau_inv(&st.type_vec(), r.index)?.0;
    let report = FactorReport {
        element: g,
        index: r.index,
        tuple,
        steps: r.steps,
    };
    let text = if a.json {
        to_json(&report)?
    } else {
        let t: Vec<String> = report.tuple.iter().map(|j| j.to_string()).collect();
        format!(
            "x={} tuple=({}) steps={}\n",
            report.index,
            t.join(","),
            report.steps
        )
    };
    Ok(Outcome::pass(text))
}

#[derive(Serialize)]
struct SearchReport {
    n: usize,
    type_vec: Vec<usize>,
    first_blocks: u64,
    nodes: u64,
    witness: Option<Vec<Vec<GVec>>>,
}

fn search(a: &SearchArgs) -> Result<Outcome> {
    let out = exhaustive_aperiodic_search(a.n, &a.type_vec, a.budget)?;
    let text = if a.json {
        to_json(&SearchReport {
            n: out.n,
            type_vec: out.type_vec.clone(),
            first_blocks: out.first_blocks,
            nodes: out.nodes,
            witness: out
                .witness
                .as_ref()
                .map(|s| s.blocks().iter().map(|b| b.elems().to_vec()).collect()),
        })?
    } else {
        out.to_text()
    };
    Ok(Outcome::pass(text))
}

fn mst3_keygen(a: &KeygenArgs) -> Result<Outcome> {
    let p = SuzukiParams::new(a.n, a.k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let (beta, stored) = if a.n >= 6 {
        let spec = GeneralConstructionSpec::random(a.n, None, true, &mut rng)?;
        let out = general_construct(&spec, DEFAULT_BUDGET)?;
        (out.sig, Some(out.stored))
    } else {
        (et_signature(a.n, &vec![2; a.n], &mut rng)?, None)
    };
    let kp = keygen(p, beta, stored, a.distinct_cosets, &mut rng)?;
    write(&a.public, &write_public_key(&kp.public))?;
    write(&a.private, &write_private_key(&kp.private))?;
    Ok(Outcome::pass(format!(
        "q={} type={} public={} private={}\n",
        p.q(),
        type_string(&kp.public.alpha.type_vec()),
        a.public.display(),
        a.private.display()
    )))
}

fn mst3_encrypt(a: &EncryptArgs) -> Result<Outcome> {
    let pk = parse_public_key(&read(&a.public)?).with_context(|| a.public.display().to_string())?;
    let ct = encrypt(&pk, a.message)?;
    Ok(Outcome::pass(ct.to_hex() + "\n"))
}

fn mst3_decrypt(a: &DecryptArgs) -> Result<Outcome> {
    let sk = parse_private_key(&read(&a.private)?).with_context(|| a.private.display().to_string())?;
    let ct = Ciphertext::from_hex(&a.ciphertext.join(" "), sk.params.n())?;
    let x = Decryptor::new(&sk)?.decrypt(ct)?;
    Ok(Outcome::pass(format!("{x}\n")))
}

/// One compared example.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Reproduction {
    pub rows: Vec<Row>,
}

impl Reproduction {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_text(&self) -> String {
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
        let mut s = String::new();
        for r in &self.rows {
            let mark = if r.pass { "PASS" } else { "FAIL" };
            s += &format!("{mark}  {:width$}  {}\n", r.name, r.detail);
        }
        let passed = self.rows.iter().filter(|r| r.pass).count();
        s += &format!("{passed} of {} rows pass\n", self.rows.len());
        s
    }
}

/// Seed inputs of the two built-in examples.
pub struct PaperSeeds<'a> {
    pub ex6: &'a SeedInputs,
    pub ex7: &'a SeedInputs,
}

pub fn reproduce_paper() -> Reproduction {
    reproduce_with(&PaperSeeds {
        ex6: &EX6_INPUTS,
        ex7: &EX7_INPUTS,
    })
}

const NAMES6: &str = "uvwxyz";

fn sorted_bits(words: &[&str], names: &str) -> Result<Vec<u64>> {
    let mut v = words
        .iter()
        .map(|w| GVec::from_word(w, names).map(|g| g.bits()))
        .collect::<logsig::Result<Vec<_>>>()?;
    v.sort_unstable();
    Ok(v)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if !cond {
        bail!(msg());
    }
    Ok(())
}

fn example_six(inputs: &SeedInputs) -> Result<String> {
    let sig = dr_construct(&inputs.blueprint()?, DEFAULT_BUDGET)?.sig;
    let golden = [
        sorted_bits(&["1", "u", "v", "uv", "z", "wz", "xz", "wxz"], NAMES6)?,
        sorted_bits(&["1", "uw", "vx", "uvwx", "y", "uxy", "uvwy", "vwxy"], NAMES6)?,
    ];
    ensure(sig.blocks().len() == 2, || format!("{} blocks", sig.blocks().len()))?;
    for (i, (b, want)) in sig.blocks().iter().zip(&golden).enumerate() {
        ensure(&b.sorted_set() == want, || {
            format!("B_{} = {{{}}}", i + 1, b.words(NAMES6).join(","))
        })?;
    }
    let v = sig.validate(DEFAULT_BUDGET)?;
    ensure(v.is_logsig && v.distinct == 64, || format!("{} distinct products", v.distinct))?;
    ensure(is_aperiodic(&sig), || "a block is periodic".into())?;
    Ok("B_1, B_2 as listed; 64 distinct products; both blocks aperiodic".into())
}

fn example_periodic() -> Result<String> {
    let a1 = Block::from_words(&["1", "u", "v", "uvw"], NAMES6)?;
    let a2 = Block::from_words(&["u", "1", "uv", "vw"], NAMES6)?;
    let ds = vec![GVec::from_word("1", NAMES6)?, GVec::from_word("y", NAMES6)?];
    let b1 = assemble_block(&ds, &[a1.clone(), a2.clone()]);
    let uy = GVec::from_word("uy", NAMES6)?;
    ensure(period_set(&b1).contains(uy), || "uy is not a period of B_1".into())?;
    ensure(
        period_set(a1.elems()).is_empty() && period_set(a2.elems()).is_empty(),
        || "an A_1^(j) is periodic".into(),
    )?;
    let r = check_periodicity_criterion(&ds, &[a1, a2], CriterionMode::NoProperMultiple)?;
    ensure(!r.hypothesis_holds, || "hypothesis unexpectedly holds".into())?;
    Ok(format!(
        "uy in P(B_1), P(A_1^(1)) = P(A_1^(2)) = empty; {}",
        r.hypothesis_failure.unwrap_or_default()
    ))
}

fn example_seven(inputs: &SeedInputs) -> Result<String> {
    let sig = dr_construct(&inputs.blueprint()?, DEFAULT_BUDGET)?.sig;
    ensure(sig.type_vec() == [8, 4, 4], || format!("type {}", type_string(&sig.type_vec())))?;
    let v = sig.validate(DEFAULT_BUDGET)?;
    ensure(v.is_logsig && v.distinct == 128, || format!("{} distinct products", v.distinct))?;
    ensure(is_aperiodic(&sig), || "a block is periodic".into())?;
    Ok("type (8,4,4); 128 distinct products; all blocks aperiodic".into())
}

fn nonexistence(n: usize, t: &[usize]) -> Result<String> {
    let out = exhaustive_aperiodic_search(n, t, DEFAULT_SEARCH_BUDGET)?;
    ensure(out.witness.is_none(), || "found an aperiodic signature".into())?;
    Ok(format!("none found ({} nodes)", out.nodes))
}

fn row(name: String, r: Result<String>) -> Row {
    match r {
        Ok(detail) => Row {
            name,
            pass: true,
            detail,
        },
        Err(e) => Row {
            name,
            pass: false,
            detail: format!("{e:#}"),
        },
    }
}

/// Runs every comparison with the given seed inputs.
pub fn reproduce_with(seeds: &PaperSeeds) -> Reproduction {
    let mut rows = vec![
        row("example 2^6 (8,8)".into(), example_six(seeds.ex6)),
        row("example 2^6 periodic block".into(), example_periodic()),
        row("example 2^7 (8,4,4)".into(), example_seven(seeds.ex7)),
    ];
    for (n, t) in [(2, vec![4]), (3, vec![4, 2]), (4, vec![8, 2]), (4, vec![4, 4])] {
        rows.push(row(
            format!("no aperiodic 2^{n} {}", type_string(&t)),
            nonexistence(n, &t),
        ));
    }
    Reproduction { rows }
}
