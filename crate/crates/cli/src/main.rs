//! `cpn`: batch command-line access to the circular planar network library.
//!
//! Every command prints its payload on stdout and a machine-parsable
//! `status: <kind>` line on stderr. Exit codes: 0 ok, 2 precondition error
//! (including parse errors and bad arguments), 3 not in cell, 4 capacity.

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cpn_core::exactalg::format_rat;
use cpn_core::gen::{randomize_conductances, seeded};
use cpn_core::groves::GROVE_EDGE_CAP;
use cpn_core::medial::is_minimal;
use cpn_core::minors::{contiguous_disjoint, contiguous_indices, noninterlaced_order};
use cpn_core::{
    b_assignment, contiguous_minor, evaluate_tad, is_well_connected, jaw_rewrite, locate_region,
    matching_to_tiling, noninterlaced_minor, partition_ratio, reconstruct_standard,
    search_matching, standard_network, strand_matching, tiling_to_matching, CpnError, DyckTiling,
    GroveTable, Network, NodePartition, RatMatrix, ResponseMatrix, StrandMatching, TadRegion,
};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
}

#[derive(Parser, Debug)]
#[command(
    name = "cpn",
    version,
    about = "Exact computations on circular planar electrical networks"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Seed for commands that draw random values.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Response matrix of a network file.
    Forward { network: String },
    /// Standard network and tripod report from a response matrix and a
    /// strand matching.
    Reconstruct { matrix: String, matching: String },
    /// Well-connectedness verdict with the small central minor table.
    Check { matrix: String },
    /// Minimality verdict for a network file.
    Minimal { network: String },
    /// Strand matching of a network, or inferred from a response matrix.
    Matching {
        file: String,
        /// Treat the file as a response matrix and search for its matching.
        #[arg(long)]
        response: bool,
    },
    /// Dyck tiling of a strand matching, or the matching of a tiling.
    Tiling {
        file: String,
        /// Read a tiling and print its matching.
        #[arg(long)]
        inverse: bool,
    },
    /// Standard network of a strand matching (unit conductances, or random
    /// ones when --seed is given).
    Standard { matching: String },
    /// B variables of a minimal network.
    Bvars { network: String },
    /// Contiguous minors with their domino regions, or one noninterlaced
    /// minor with its jaw-move rewrite.
    Minors {
        matrix: String,
        /// Row nodes of a noninterlaced minor, comma separated.
        #[arg(long, requires = "cols")]
        rows: Option<String>,
        /// Column nodes of a noninterlaced minor, comma separated.
        #[arg(long, requires = "rows")]
        cols: Option<String>,
    },
    /// Laurent polynomial of a truncated Aztec diamond.
    Tilings {
        #[arg(allow_hyphen_values = true)]
        x: i64,
        y: i64,
        l: i64,
        n: usize,
    },
    /// Grove partition sums of a network, or one normalized partition ratio
    /// from a response matrix.
    Groves {
        file: String,
        /// Partition such as `{1,2},{3}`; the file is then a response matrix.
        #[arg(long)]
        partition: Option<String>,
        /// Edge limit for enumeration.
        #[arg(long, default_value_t = GROVE_EDGE_CAP)]
        cap: usize,
    },
}

/// A failed command: status word, exit code and message.
struct Failure {
    status: &'static str,
    code: u8,
    message: String,
}

impl From<CpnError> for Failure {
    fn from(e: CpnError) -> Self {
        let (status, code) = match e {
            CpnError::NotInCell(_) => ("not-in-cell", 3),
            CpnError::Capacity(_) => ("capacity-error", 4),
            _ => ("precondition-error", 2),
        };
        Failure {
            status,
            code,
            message: e.to_string(),
        }
    }
}

fn precondition(message: impl Into<String>) -> Failure {
    Failure {
        status: "precondition-error",
        code: 2,
        message: message.into(),
    }
}

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| precondition(format!("cannot read {path}: {e}")))
}

fn read_network(path: &str) -> Result<Network, Failure> {
    Ok(Network::parse(&read(path)?)?)
}

fn read_response(path: &str) -> Result<ResponseMatrix, Failure> {
    Ok(ResponseMatrix::new(RatMatrix::parse(&read(path)?)?)?)
}

fn read_matching(path: &str) -> Result<StrandMatching, Failure> {
    Ok(StrandMatching::parse(&read(path)?)?)
}

fn parse_nodes(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| precondition(format!("bad node `{t}`")))
        })
        .collect()
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let Format::Text = cli.format;
    match &cli.command {
        Command::Forward { network } => {
            Ok(read_network(network)?.response_matrix()?.matrix().to_text())
        }
        Command::Reconstruct { matrix, matching } => {
            let l = read_response(matrix)?;
            let m = read_matching(matching)?;
            if m.n() != l.n() {
                return Err(precondition(format!(
                    "matrix has {} nodes, matching has {}",
                    l.n(),
                    m.n()
                )));
            }
            let r = reconstruct_standard(&l, &m)?;
            Ok(format!(
                "{}\n{}",
                r.network.to_text(),
                r.tripods.report(&r.diagram)
            ))
        }
        Command::Check { matrix } => {
            let l = read_response(matrix)?;
            let v = is_well_connected(&l)?;
            let mut out = format!("well-connected: {}\n", v.well_connected);
            if let Some(w) = &v.witness {
                out.push_str(&format!("witness: x={} y={}\n", w.x, w.y));
            }
            for m in &v.minors {
                out.push_str(&format!(
                    "minor x={} y={} rows {:?} cols {:?}: {}\n",
                    m.x,
                    m.y,
                    m.rows,
                    m.cols,
                    format_rat(&m.value)
                ));
            }
            Ok(out)
        }
        Command::Minimal { network } => {
            let cert = is_minimal(&read_network(network)?);
            Ok(if cert.is_minimal() {
                "minimal: true\n".into()
            } else {
                format!("minimal: false ({})\n", cert.describe())
            })
        }
        Command::Matching { file, response } => {
            let m = if *response {
                search_matching(&read_response(file)?)?
            } else {
                strand_matching(&read_network(file)?)
            };
            Ok(m.to_text())
        }
        Command::Tiling { file, inverse } => {
            if *inverse {
                Ok(tiling_to_matching(&DyckTiling::parse(&read(file)?)?).to_text())
            } else {
                Ok(matching_to_tiling(&read_matching(file)?).to_text())
            }
        }
        Command::Standard { matching } => {
            let (g, _) = standard_network(&read_matching(matching)?)?;
            let g = match cli.seed {
                Some(s) => randomize_conductances(&mut seeded(s), &g),
                None => g,
            };
            Ok(g.to_text())
        }
        Command::Bvars { network } => Ok(b_assignment(&read_network(network)?)?.to_text()),
        Command::Minors { matrix, rows, cols } => {
            let m = RatMatrix::parse(&read(matrix)?)?;
            if !m.is_square() {
                return Err(precondition("minors need a square matrix"));
            }
            let n = m.rows();
            if let (Some(r), Some(c)) = (rows, cols) {
                let (r, c) = noninterlaced_order(n, &parse_nodes(r)?, &parse_nodes(c)?)
                    .ok_or_else(|| precondition("row and column nodes interlace"))?;
                let value = noninterlaced_minor(&m, &r, &c)?;
                let e = jaw_rewrite(n, &r, &c)?;
                return Ok(format!(
                    "noninterlaced rows {r:?} cols {c:?}: {}\njaw rewrite: {} contiguous minors, value {}\n",
                    format_rat(&value),
                    e.leaves(),
                    format_rat(&e.eval(&m)?)
                ));
            }
            let mut out = String::new();
            for y in 1..=n / 2 {
                for a in 1..=n {
                    for b in 1..=n {
                        if !contiguous_disjoint(n, a, b, y) {
                            continue;
                        }
                        let (ri, ci) = contiguous_indices(n, a as i64, b as i64, y);
                        let value = contiguous_minor(&m, a as i64, b as i64, y)?;
                        let region = locate_region(n, a, b, y)
                            .ok_or_else(|| precondition("no region found"))?;
                        let tad = match evaluate_tad(&m, &region) {
                            Ok(v) => format_rat(&v),
                            Err(CpnError::ZeroVariable { x, y }) => {
                                format!("undefined (v[{x},{y}] = 0)")
                            }
                            Err(e) => return Err(e.into()),
                        };
                        out.push_str(&format!(
                            "minor rows {ri:?} cols {ci:?}: {} region x0={} y0={} l={}: {} laurent {}\n",
                            format_rat(&value),
                            region.x0,
                            region.y0,
                            region.l,
                            tad,
                            region.laurent()
                        ));
                    }
                }
            }
            Ok(out)
        }
        Command::Tilings { x, y, l, n } => {
            if *y > *n as i64 {
                return Err(precondition("y must not exceed n"));
            }
            let r = TadRegion::new(*x, *y, *l, *n)?;
            let (a, b, size) = r.target();
            Ok(format!("region x0={x} y0={y} l={l} n={n}\ntilings: {}\ntarget: a={a} b={b} y={size}\nlaurent: {}\n", r.tilings().len(), r.laurent()))
        }
        Command::Groves {
            file,
            partition,
            cap,
        } => {
            if let Some(p) = partition {
                let l = read_response(file)?;
                let tau = NodePartition::parse(&format!("partition {}: {p}", l.n()))?;
                let (v, how) = partition_ratio(&l, &tau)?;
                return Ok(format!("{tau} ratio {} via {how}\n", format_rat(&v)));
            }
            let g = read_network(file)?;
            let t = GroveTable::with_cap(&g, *cap)?;
            let mut out = format!("uncrossing: {}\n", format_rat(&t.uncrossing_sum()));
            for tau in t.partitions() {
                out.push_str(&format!(
                    "{tau} sum {} count {}\n",
                    format_rat(&t.sum(tau)),
                    t.count(tau)
                ));
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            eprintln!("status: precondition-error");
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            eprintln!("status: ok");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            eprintln!("status: {}", f.status);
            ExitCode::from(f.code)
        }
    }
}
