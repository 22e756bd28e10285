//! `archctl`: operator tool for the archive.
//!
//! Every command except `serve` works on the data directory in-process, so
//! it runs with the server stopped. Running mutating commands while a
//! server owns the same directory is unsupported.

use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use arsip_api::{ServeError, ServerConfig};
use arsip_bench::{random_pairs, Algo};
use arsip_core::auth::{AuthError, UserDirectory};
use arsip_core::fuzzy::{tokenize, Token};
use arsip_core::{Archive, BudgetPolicy, Category, DocumentMeta, Role, StoreError, Upload};

pub const PASSWORD_ENV: &str = "ARCHCTL_PASSWORD";

#[derive(Debug, Parser)]
#[command(name = "archctl", version, about = "Operate the document archive")]
pub struct Cli {
    /// Data directory holding documents.log, users.log and blobs/.
    #[arg(long, global = true, env = "ARCHCTL_DATA_DIR", default_value = "data")]
    pub data_dir: PathBuf,

    #[command(flatten)]
    pub policy: PolicyArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Overrides for the per-token edit budget (1 up to short, 2 up to medium, 3 beyond).
#[derive(Debug, Clone, Args)]
pub struct PolicyArgs {
    #[arg(long, global = true, default_value_t = 4)]
    pub budget_short_max: usize,
    #[arg(long, global = true, default_value_t = 8)]
    pub budget_medium_max: usize,
}

impl PolicyArgs {
    pub fn policy(&self) -> BudgetPolicy {
        BudgetPolicy { short_max: self.budget_short_max, medium_max: self.budget_medium_max }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "ARCHCTL_ADDR", default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Session lifetime, e.g. "8h" or "30m".
        #[arg(long, default_value = "8h", value_parser = humantime::parse_duration)]
        session_ttl: std::time::Duration,
        /// Allow reads without logging in.
        #[arg(long, env = "ARCHCTL_PUBLIC_READ")]
        public_read: bool,
        /// Directory with the built web client, served at `/`.
        #[arg(long, env = "ARCHCTL_STATIC_DIR")]
        static_dir: Option<PathBuf>,
    },
    /// Manage accounts.
    #[command(subcommand)]
    User(UserCommand),
    /// Store a file with its metadata, as an upload through the API would.
    Ingest {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        perihal: String,
        #[arg(long)]
        no_surat: String,
        #[arg(long, default_value = "")]
        deskripsi: String,
        #[arg(long, value_parser = parse_category)]
        kategori: Category,
        /// Admin account recorded as the uploader.
        #[arg(long = "as")]
        as_user: String,
        /// MIME type; guessed from the file extension when omitted.
        #[arg(long)]
        content_type: Option<String>,
    },
    /// Ranked typo-tolerant search.
    Search {
        query: String,
        #[arg(long, value_parser = parse_category)]
        category: Option<Category>,
    },
    /// "Did you mean" candidates for one token.
    Suggest {
        token: String,
        #[arg(long, default_value_t = 5)]
        limit: usize,
    },
    /// Time the distance kernels on seeded random pairs.
    Bench {
        #[arg(long, value_parser = parse_pairs)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        min_len: usize,
        #[arg(long, default_value_t = 64)]
        max_len: usize,
        /// Time a single kernel; all three by default.
        #[arg(long)]
        algo: Option<Algo>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Bound used by the banded kernel.
        #[arg(long, default_value_t = 8)]
        band: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum UserCommand {
    /// Add an account. The password is read from ARCHCTL_PASSWORD or prompted.
    Add {
        #[arg(long)]
        username: String,
        #[arg(long, value_parser = parse_role)]
        role: Role,
    },
}

fn parse_category(s: &str) -> Result<Category, String> {
    s.parse().map_err(|_| format!("expected one of: {}", Category::labels()))
}

fn parse_pairs(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_role(s: &str) -> Result<Role, String> {
    s.parse().map_err(|e: arsip_core::model::InvalidRole| e.to_string())
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("store: {0}")]
    Store(#[from] StoreError),
    #[error("auth: {0}")]
    Auth(#[from] AuthError),
    #[error("serve: {0}")]
    Serve(#[from] ServeError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("bench: {0} pairs disagree with the full DP")]
    Disagreement(usize),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// First line of a clap error without its own `error: ` prefix.
pub fn usage_message(e: &clap::Error) -> String {
    let rendered = e.render().to_string();
    let first = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
    first.trim_start_matches("error: ").trim().to_string()
}

fn guess_content_type(path: &Path) -> Option<&'static str> {
    let ext = path.extension()?.to_str()?.to_ascii_lowercase();
    match ext.as_str() {
        "pdf" => Some("application/pdf"),
        "png" => Some("image/png"),
        "jpg" | "jpeg" => Some("image/jpeg"),
        _ => None,
    }
}

fn read_password() -> Result<String, CliError> {
    match std::env::var(PASSWORD_ENV) {
        Ok(p) => Ok(p),
        Err(_) => Ok(rpassword::prompt_password("Password: ")?),
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let policy = cli.policy.policy();
    if policy.short_max > policy.medium_max {
        return Err(CliError::Usage("--budget-short-max must not exceed --budget-medium-max".into()));
    }
    match cli.command {
        Command::Serve { addr, session_ttl, public_read, static_dir } => {
            let mut config = ServerConfig::new(addr, &cli.data_dir);
            config.session_ttl = chrono::Duration::from_std(session_ttl)
                .map_err(|_| CliError::Usage("session TTL out of range".into()))?;
            config.public_read = public_read;
            config.policy = policy;
            config.static_dir = static_dir;
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(arsip_api::serve(config))?;
            Ok(())
        }
        Command::User(UserCommand::Add { username, role }) => {
            std::fs::create_dir_all(&cli.data_dir)?;
            let users = UserDirectory::open(&cli.data_dir)?;
            if users.get(username.trim()).is_some() {
                return Err(AuthError::DuplicateUsername(username).into());
            }
            let password = read_password()?;
            let account = users.add(&username, &password, role)?;
            writeln!(out, "added {} ({}) id={}", account.username, account.role, account.id)?;
            Ok(())
        }
        Command::Ingest { file, perihal, no_surat, deskripsi, kategori, as_user, content_type } => {
            let users = UserDirectory::open(&cli.data_dir)?;
            let actor = users
                .get(&as_user)
                .ok_or_else(|| CliError::Other(format!("unknown user {as_user:?}")))?
                .principal();
            let content_type = content_type
                .or_else(|| guess_content_type(&file).map(str::to_string))
                .ok_or_else(|| CliError::Usage("cannot guess content type; pass --content-type".into()))?;
            let bytes = std::fs::read(&file)?;
            let file_name = file
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| "upload".into());
            let archive = Archive::open(&cli.data_dir, policy)?;
            let record = archive.create_document(
                &DocumentMeta { perihal, no_surat, deskripsi, kategori },
                Upload { file_name, content_type, bytes },
                &actor,
            )?;
            writeln!(out, "{}", record.id)?;
            Ok(())
        }
        Command::Search { query, category } => {
            let archive = Archive::open(&cli.data_dir, policy)?;
            write_search(&archive, &query, category, out)
        }
        Command::Suggest { token, limit } => {
            let token = Token::parse(&token)
                .ok_or_else(|| CliError::Usage(format!("{token:?} is not a single token")))?;
            let archive = Archive::open(&cli.data_dir, policy)?;
            let suggestions = archive.suggest(&token, limit);
            if suggestions.is_empty() {
                writeln!(out, "no matches")?;
            }
            for s in suggestions {
                writeln!(out, "{}\t{}\t{}", s.candidate, s.distance, s.frequency)?;
            }
            Ok(())
        }
        Command::Bench { pairs, min_len, max_len, algo, seed, band } => {
            if min_len > max_len {
                return Err(CliError::Usage("--min-len must not exceed --max-len".into()));
            }
            bench(pairs, min_len, max_len, algo, seed, band, out)
        }
    }
}

/// One `id<TAB>score<TAB>perihal` row per hit, then any "did you mean" lines.
pub fn write_search(
    archive: &Archive,
    query: &str,
    category: Option<Category>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let snap = archive.snapshot();
    let hits = snap.index().search(query, category);
    if hits.is_empty() {
        writeln!(out, "no matches")?;
    }
    for hit in &hits {
        let perihal = snap.get(hit.document_id).map_or("", |r| r.perihal.as_str());
        writeln!(out, "{}\t{:.4}\t{}", hit.document_id, hit.score, perihal)?;
    }
    let mut seen = std::collections::BTreeSet::new();
    for t in tokenize(query) {
        if !seen.insert(t.clone()) || snap.index().vocabulary().contains(t.as_str()) {
            continue;
        }
        if let Some(s) = snap.index().suggest(&t, 1).first() {
            writeln!(out, "did you mean: {} -> {}", t, s.candidate)?;
        }
    }
    Ok(())
}

pub fn bench(
    pairs: usize,
    min_len: usize,
    max_len: usize,
    algo: Option<Algo>,
    seed: u64,
    band: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let workload = random_pairs(seed, pairs, min_len, max_len);
    let algos = algo.map_or_else(|| Algo::ALL.to_vec(), |a| vec![a]);
    let report = arsip_bench::run(&workload, &algos, band);

    writeln!(out, "pairs: {pairs}  lengths: {min_len}..={max_len}  seed: {seed}")?;
    for t in &report.timings {
        let name = match t.algo {
            Algo::Banded => format!("banded(k={band})"),
            other => other.to_string(),
        };
        writeln!(out, "{name:<14} {:>12.1} ns/op {:>14.0} pairs/s", t.ns_per_op(), t.ops_per_sec())?;
    }
    if let Some(x) = report.bitparallel_speedup() {
        writeln!(out, "speedup bitparallel vs dp: {x:.1}x")?;
    }
    if report.agrees() {
        writeln!(out, "agreement: OK")?;
        Ok(())
    } else {
        writeln!(out, "agreement: FAILED ({} mismatches)", report.mismatches)?;
        Err(CliError::Disagreement(report.mismatches))
    }
}
