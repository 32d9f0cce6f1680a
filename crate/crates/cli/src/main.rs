use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use gbke_core::protocol::cipher::{nonce_from_seed, random_nonce};
use gbke_core::protocol::{
    self, attack_bounds, AttackStats, BenchConfig, Envelope, InitOptions, PrivateParams, PublicParams, Session,
};
use gbke_core::toric::{self, BuildScript, LabeledGraph, OracleConfig, WalkBinomial};
use gbke_core::ugb::{enumerate_keys, sample_order, verify_gb_under_order, EnumerationConfig, EnumerationMode};
use gbke_core::{Error, ErrorClass, Field, GroebnerConfig, MonomialOrder, UniversalBasis};

/// `println!` that reports a closed stdout as an error instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(std::io::stdout(), $($arg)*)?
    };
}

#[derive(Parser)]
#[command(name = "gbke", version, about = "Gröbner-basis key establishment toolkit")]
struct Cli {
    /// Replay the two-squares example end to end and print its keys.
    #[arg(long)]
    paper_demo: bool,

    /// Worker threads for enumeration and decryption (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a build script (or a random one) and write the universal basis.
    GraphBuild(GraphBuildArgs),
    /// Check that a basis is a Gröbner basis under many orders.
    UgbVerify(UgbVerifyArgs),
    /// List every key of a universal basis.
    KeysEnumerate(KeysArgs),
    /// Party A setup: write pub.json and priv.json.
    ProtoInit(InitArgs),
    /// Party B: pick a secret order and derive the key.
    Keygen(KeygenArgs),
    /// Party B: encrypt a message under the session key.
    Encrypt(EncryptArgs),
    /// Party A: recover the message.
    Decrypt(DecryptArgs),
    /// Report the key-count and brute-force bounds.
    AttackBounds(AttackArgs),
    /// Time brute-force decryption against key generation.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Args)]
struct GraphBuildArgs {
    /// Build script JSON; without it a random script is drawn.
    #[arg(long)]
    script: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Steps of the random script.
    #[arg(long, default_value_t = 6)]
    steps: usize,
    #[arg(long, default_value_t = 12)]
    max_edges: usize,
    #[arg(long, default_value = "q")]
    field: String,
    /// Write the universal basis here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    graph_out: Option<PathBuf>,
    #[arg(long)]
    script_out: Option<PathBuf>,
}

#[derive(Args)]
struct UgbVerifyArgs {
    #[arg(long)]
    ugb: PathBuf,
    /// Random orders tried besides lex and grevlex.
    #[arg(long, default_value_t = 50)]
    orders: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also compare against the brute-force primitive binomials of this graph.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct KeysArgs {
    #[arg(long)]
    ugb: PathBuf,
    #[arg(long, default_value = "exact")]
    mode: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    k_bound: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InitArgs {
    #[arg(long, conflicts_with = "ugb", required_unless_present = "ugb")]
    script: Option<PathBuf>,
    #[arg(long)]
    ugb: Option<PathBuf>,
    #[arg(long, default_value = "fp:32003")]
    field: String,
    #[arg(long)]
    k_bound: Option<u32>,
    #[arg(long, value_enum, default_value = "off")]
    tau: OnOff,
    #[arg(long, default_value = "exact")]
    mode: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory receiving pub.json and priv.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct KeygenArgs {
    #[arg(long = "pub")]
    public: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Session file (secret to Party B).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EncryptArgs {
    #[arg(long = "pub")]
    public: PathBuf,
    #[arg(long)]
    session: PathBuf,
    /// Plaintext file, `-` for stdin.
    #[arg(long = "in", default_value = "-")]
    input: PathBuf,
    /// Seeds the nonce; a random nonce is used when absent.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DecryptArgs {
    #[arg(long = "priv")]
    private: PathBuf,
    #[arg(long)]
    ct: PathBuf,
    /// Write the plaintext here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(long = "pub")]
    public: PathBuf,
    #[arg(long = "priv")]
    private: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long = "pub")]
    public: PathBuf,
    #[arg(long = "priv")]
    private: PathBuf,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 256)]
    plaintext_size: usize,
    #[arg(long, default_value_t = 0.5)]
    slack: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn read(path: &Path) -> Result<String, Error> {
    Ok(fs::read_to_string(path)?)
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String, Error> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn parse_mode(text: &str, seed: u64) -> Result<EnumerationMode, Error> {
    Ok(match text.parse()? {
        EnumerationMode::Sample { count, .. } => EnumerationMode::Sample { count, seed },
        m => m,
    })
}

fn graph_build(a: GraphBuildArgs) -> Result<(), Error> {
    let field: Field = a.field.parse()?;
    let script = match &a.script {
        Some(p) => serde_json::from_str(&read(p)?)?,
        None => toric::random_script(a.seed, a.steps, a.max_edges)?,
    };
    let (graph, basis, report) = toric::build_basis(&script, field)?;
    for r in &report {
        eprintln!(
            "{:>15}: {} edges, {} binomials{}",
            r.op,
            r.edges,
            r.basis_size,
            if r.possibly_nonreduced { " (contains non-primitive elements)" } else { "" }
        );
    }
    if let Some(p) = &a.graph_out {
        fs::write(p, graph.to_json()?)?;
    }
    if let Some(p) = &a.script_out {
        fs::write(p, json(&script)?)?;
    }
    write_or_print(a.out.as_deref(), &basis.to_json()?)
}

#[derive(Serialize)]
struct VerifyReport {
    elements: usize,
    orders_checked: usize,
    failures: Vec<MonomialOrder>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matches_primitive_oracle: Option<bool>,
}

fn ugb_verify(a: UgbVerifyArgs) -> Result<bool, Error> {
    let basis = UniversalBasis::from_json(&read(&a.ugb)?)?;
    let n = basis.ring().num_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut orders = vec![MonomialOrder::lex(n), MonomialOrder::grevlex(n)];
    orders.extend((0..a.orders).map(|i| sample_order(n, i, &mut rng)));
    let cfg = GroebnerConfig::default();
    let mut failures = Vec::new();
    for o in &orders {
        if !verify_gb_under_order(&basis, o, &cfg)? {
            failures.push(o.clone());
        }
    }
    let oracle = match &a.graph {
        Some(p) => {
            let graph = LabeledGraph::from_json(&read(p)?)?;
            let mine = toric::primitive_filter(toric::ops::basis_to_walks(&graph, &basis)?);
            let truth: Vec<WalkBinomial> = toric::primitive_oracle(&graph, &OracleConfig::default())?;
            Some(mine == truth && mine.len() == basis.len())
        }
        None => None,
    };
    let ok = failures.is_empty() && oracle != Some(false);
    out!(
        "{}",
        json(&VerifyReport {
            elements: basis.len(),
            orders_checked: orders.len(),
            failures,
            matches_primitive_oracle: oracle,
        })?
    );
    Ok(ok)
}

fn keys_enumerate(a: KeysArgs) -> Result<(), Error> {
    let basis = UniversalBasis::from_json(&read(&a.ugb)?)?;
    let cfg = EnumerationConfig {
        k_bound: a.k_bound,
        ..Default::default()
    };
    let keys = enumerate_keys(&basis, parse_mode(&a.mode, a.seed)?, &cfg)?;
    eprintln!("{} keys", keys.len());
    write_or_print(a.out.as_deref(), &json(&keys)?)
}

fn proto_init(a: InitArgs) -> Result<(), Error> {
    let opts = InitOptions {
        field: a.field.parse()?,
        k_bound: a.k_bound,
        tau: matches!(a.tau, OnOff::On),
        mode: parse_mode(&a.mode, a.seed)?,
        ..Default::default()
    };
    let (public, private) = match (&a.script, &a.ugb) {
        (Some(s), _) => {
            let script: BuildScript = serde_json::from_str(&read(s)?)?;
            protocol::init(&script, &opts)?
        }
        (None, Some(u)) => {
            let basis = UniversalBasis::from_json(&read(u)?)?;
            let basis = if basis.ring().field() == opts.field {
                basis
            } else {
                return Err(Error::Domain(format!(
                    "basis is over {} but --field is {}",
                    basis.ring().field(),
                    opts.field
                )));
            };
            protocol::init_from_basis(basis, None, &opts)?
        }
        (None, None) => unreachable!("clap enforces one source"),
    };
    fs::create_dir_all(&a.out)?;
    fs::write(a.out.join("pub.json"), public.to_json()?)?;
    fs::write(a.out.join("priv.json"), private.to_json()?)?;
    eprintln!(
        "{} basis elements, {} public generators, {} keys ({:?})",
        private.universal_basis().len(),
        public.generators().len(),
        private.key_list().len(),
        private.coverage()
    );
    Ok(())
}

fn keygen(a: KeygenArgs) -> Result<(), Error> {
    let public = PublicParams::from_json(&read(&a.public)?)?;
    let session = protocol::keygen(&public, a.seed, &GroebnerConfig::default())?;
    fs::write(&a.out, session.to_json(public.k_bound())?)?;
    eprintln!("key {}", session.key.eta_raw());
    Ok(())
}

fn encrypt(a: EncryptArgs) -> Result<(), Error> {
    let public = PublicParams::from_json(&read(&a.public)?)?;
    let session = Session::from_json(&read(&a.session)?)?;
    let mut plaintext = Vec::new();
    if a.input.as_os_str() == "-" {
        std::io::stdin().read_to_end(&mut plaintext)?;
    } else {
        plaintext = fs::read(&a.input)?;
    }
    let nonce = a.seed.map_or_else(random_nonce, nonce_from_seed);
    let env = protocol::encrypt(&session, &plaintext, &public, nonce)?;
    fs::write(&a.out, env.to_bytes())?;
    Ok(())
}

fn decrypt(a: DecryptArgs) -> Result<(), Error> {
    let private = PrivateParams::from_json(&read(&a.private)?)?;
    let env = Envelope::parse(&fs::read(&a.ct)?)?;
    let d = protocol::decrypt(&private, &env)?;
    eprintln!("attempts: {}", d.attempts);
    match &a.out {
        Some(p) => fs::write(p, &d.plaintext)?,
        None => std::io::stdout().write_all(&d.plaintext)?,
    }
    Ok(())
}

fn attack(a: AttackArgs) -> Result<(), Error> {
    let public = PublicParams::from_json(&read(&a.public)?)?;
    let private = a.private.as_deref().map(read).transpose()?;
    let private = private.as_deref().map(PrivateParams::from_json).transpose()?;
    let stats = AttackStats::from_params(&public, private.as_ref());
    let report = attack_bounds(stats, private.as_ref().map(|p| p.key_list().len()));
    out!("{}", json(&report)?);
    Ok(())
}

fn bench(a: BenchArgs) -> Result<bool, Error> {
    let public = PublicParams::from_json(&read(&a.public)?)?;
    let private = PrivateParams::from_json(&read(&a.private)?)?;
    let cfg = BenchConfig {
        trials: a.trials,
        plaintext_size: a.plaintext_size,
        slack: a.slack,
        seed: a.seed,
        ..Default::default()
    };
    let report = protocol::bench(&public, &private, &cfg)?;
    out!("{}", json(&report)?);
    Ok(report.within_bound)
}

fn paper_demo() -> Result<(), Error> {
    let script = toric::two_squares_script();
    let (public, private) = protocol::init(&script, &InitOptions::default())?;
    out!("universal basis:");
    for p in private.universal_basis().elements() {
        out!("  {p}");
    }
    out!("public generators (grevlex):");
    for p in public.generators() {
        out!("  {p}");
    }
    out!("{} keys:", private.key_list().len());
    let vars = public.ring().vars();
    for k in private.key_list().keys() {
        let gens: Vec<String> = k
            .gens()
            .monomials()
            .iter()
            .map(|m| {
                m.as_slice()
                    .iter()
                    .zip(vars)
                    .filter(|(&e, _)| e > 0)
                    .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                    .collect::<Vec<_>>()
                    .join("")
            })
            .collect();
        out!("  {:<24} <{}>", k.eta_raw(), gens.join(", "));
    }
    let order = MonomialOrder::lex_by_names(vars, &["c", "d", "e", "f", "g", "b", "a"])?;
    let session = protocol::keygen_with_order(&public, order, &GroebnerConfig::default())?;
    out!("party B under lex c>d>e>f>g>b>a: {}", session.key.eta_raw());
    let env = protocol::encrypt(&session, b"attack at dawn", &public, nonce_from_seed(0))?;
    let d = protocol::decrypt(&private, &env)?;
    out!(
        "party A recovered {:?} after {} attempts",
        String::from_utf8_lossy(&d.plaintext),
        d.attempts
    );
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Domain => 1,
        ErrorClass::Resource => 2,
        ErrorClass::Decryption => 3,
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Domain(e.to_string()))?;
    }
    if cli.paper_demo {
        paper_demo()?;
        return Ok(true);
    }
    let Some(command) = cli.command else {
        return Err(Error::Domain("no command given (see --help)".into()));
    };
    match command {
        Command::GraphBuild(a) => graph_build(a).map(|_| true),
        Command::UgbVerify(a) => ugb_verify(a),
        Command::KeysEnumerate(a) => keys_enumerate(a).map(|_| true),
        Command::ProtoInit(a) => proto_init(a).map(|_| true),
        Command::Keygen(a) => keygen(a).map(|_| true),
        Command::Encrypt(a) => encrypt(a).map(|_| true),
        Command::Decrypt(a) => decrypt(a).map(|_| true),
        Command::AttackBounds(a) => attack(a).map(|_| true),
        Command::Bench(a) => bench(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
