mod output;
mod reproduce;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gg1::oracles::{gated_markov, lindley_simulate, takacs_md1_tail};
use gg1::transforms::file::parse_model;
use gg1::{Coefficients, GatedModel, MeanMethod, Model, Solver};
use output::{Cell, Format, Table};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "gg1", version, about = "Waiting times of the G/G/1 queue by spectral factorization")]
struct Cli {
    /// Newton tolerance for root refinement.
    #[arg(long, global = true, default_value_t = 1e-12)]
    eps: f64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ModelArg {
    /// Model file (`interarrival = ...`, `service = ...`).
    #[arg(long)]
    model: PathBuf,
}

#[derive(Args, Debug)]
struct Series {
    /// Number of poles in the expansion (origin zeros plus ladder pairs).
    #[arg(long, default_value_t = 1000)]
    terms: usize,
    /// Telescope coefficients through the helper with this many ladder ratios
    /// instead of using long products.
    #[arg(long)]
    telescope: Option<usize>,
    /// Length of the naive products past each pole (default: twice `terms`).
    #[arg(long)]
    products: Option<usize>,
}

impl Series {
    fn coefficients(&self) -> Coefficients {
        match self.telescope {
            Some(k) => Coefficients::Telescoped { k },
            None => Coefficients::Naive {
                k: self.products.unwrap_or(2 * self.terms),
            },
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the left-half-plane zeros of F (and of the helper).
    Roots {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Tail probabilities P(W > t).
    Tail {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[command(flatten)]
        series: Series,
    },
    /// Waiting-time moments from the expansion and from the cumulants.
    Moments {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        series: Series,
        /// Poles summed exactly before the helper takes over in the cumulants.
        #[arg(long, default_value_t = 1000)]
        split: usize,
    },
    /// Probability of zero wait.
    Idle {
        #[command(flatten)]
        model: ModelArg,
        /// Ladder pairs in the product.
        #[arg(long, default_value_t = 1000)]
        terms: usize,
    },
    /// The time-gated M/M/1 queue.
    Gated {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = vec![0.0, 1.0, 2.0])]
        t: Vec<f64>,
        #[arg(long, default_value_t = gg1::gated_mm1::DEFAULT_TERMS)]
        terms: usize,
        #[arg(long, default_value_t = gg1::gated_mm1::DEFAULT_FACTORS)]
        factors: usize,
        #[arg(long, value_enum, default_value_t = Method::R)]
        mean_method: Method,
        #[arg(long, default_value_t = 1000)]
        mean_terms: usize,
    },
    /// Reference computations.
    Oracle {
        #[command(subcommand)]
        which: Oracle,
    },
    /// Recompute a reference table and compare (`all` runs every table).
    Reproduce { table: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    /// Sum over r_n with the coth closed form.
    R,
    /// Sum over s_n with the π²/6 extrapolation.
    S,
}

#[derive(Subcommand, Debug)]
enum Oracle {
    /// Exact M/D/1 tail, unit service.
    Takacs {
        #[arg(long)]
        lambda: f64,
        #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
    /// Finite Markov chain for the gated M/M/1 queue.
    Markov {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value_t = 200)]
        qmax: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = vec![0.0, 1.0, 2.0])]
        t: Vec<f64>,
    },
    /// Lindley-recursion simulation.
    Simulate {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value_t = 10_000_000)]
        customers: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
}

struct Failure(String);

impl From<gg1::Error> for Failure {
    fn from(e: gg1::Error) -> Self {
        Failure(e.to_string())
    }
}

fn load(m: &ModelArg) -> Result<Model, Failure> {
    let text = std::fs::read_to_string(&m.model)
        .map_err(|e| Failure(format!("{}: {e}", m.model.display())))?;
    Ok(parse_model(&text)?)
}

fn run(cli: &Cli) -> Result<Vec<Table>, Failure> {
    let eps = cli.eps;
    let one = |t: Table| Ok(vec![t]);
    match &cli.command {
        Command::Roots { model, count } => {
            let mut s = Solver::new(&load(model)?, eps)?;
            let mut t = Table::new(&["function", "index", "re", "im"]);
            for (name, zs) in [("F", s.left_zeros(*count)?), ("H", s.helper_zeros(*count)?)] {
                for (i, z) in zs.iter().enumerate() {
                    t.push(vec![
                        Cell::Text(name.into()),
                        Cell::Int(i as i64),
                        Cell::Num(z.re, 12),
                        Cell::Num(z.im, 12),
                    ]);
                }
            }
            one(t)
        }
        Command::Tail { model, t, series } => {
            let mut s = Solver::new(&load(model)?, eps)?;
            let x = s.expansion(series.terms, series.coefficients())?;
            let mut tab = Table::new(&["t", "p"]);
            for tt in t {
                let p = if *tt <= 0.0 {
                    1.0 - s.idle(series.terms)?
                } else {
                    x.tail(*tt, series.terms)?
                };
                tab.push(vec![Cell::Num(*tt, 6), Cell::Num(p, 9)]);
            }
            one(tab)
        }
        Command::Moments { model, series, split } => {
            let mut s = Solver::new(&load(model)?, eps)?;
            let x = s.expansion(series.terms, series.coefficients())?;
            let k = s.cumulants(*split, true)?;
            let (m1, m2, m3) = gg1::spectral::moments_from_cumulants(k[0], k[1], k[2]);
            let mut tab = Table::new(&["nu", "value", "from_cumulants", "cumulant"]);
            for (nu, (mc, kc)) in [(m1, k[0]), (m2, k[1]), (m3, k[2])].into_iter().enumerate() {
                let nu = nu as u32 + 1;
                tab.push(vec![
                    Cell::Int(nu as i64),
                    Cell::Num(x.moment(nu, series.terms)?, 12),
                    Cell::Num(mc, 12),
                    Cell::Num(kc, 12),
                ]);
            }
            one(tab)
        }
        Command::Idle { model, terms } => {
            let mut s = Solver::new(&load(model)?, eps)?;
            let p0 = s.idle(*terms)?;
            let mut tab = Table::new(&["p_idle", "p_wait"]);
            tab.push(vec![Cell::Num(p0, 9), Cell::Num(1.0 - p0, 9)]);
            one(tab)
        }
        Command::Gated {
            lambda,
            mu,
            t,
            terms,
            factors,
            mean_method,
            mean_terms,
        } => {
            let g = GatedModel::new(*lambda, *mu)?;
            let mut tab = Table::new(&["t", "p"]);
            for tt in t {
                tab.push(vec![Cell::Num(*tt, 6), Cell::Num(g.tail(*tt, *terms, *factors)?, 9)]);
            }
            let method = match mean_method {
                Method::R => MeanMethod::ViaR,
                Method::S => MeanMethod::ViaS,
            };
            let mut m = Table::new(&["mean", "p_idle"]);
            m.push(vec![
                Cell::Num(g.mean(*mean_terms, method), 12),
                Cell::Num(g.idle(*factors)?, 9),
            ]);
            Ok(vec![tab, m])
        }
        Command::Oracle { which } => match which {
            Oracle::Takacs { lambda, t } => {
                if !(*lambda > 0.0 && *lambda < 1.0) {
                    return Err(Failure("takacs needs 0 < lambda < 1".into()));
                }
                let mut tab = Table::new(&["t", "p"]);
                for tt in t {
                    tab.push(vec![Cell::Num(*tt, 6), Cell::Num(takacs_md1_tail(*lambda, *tt), 9)]);
                }
                one(tab)
            }
            Oracle::Markov {
                lambda,
                mu,
                qmax,
                tol,
                max_iter,
                t,
            } => {
                let r = gated_markov(&GatedModel::new(*lambda, *mu)?, *qmax, *tol, *max_iter)?;
                let mut tab = Table::new(&["t", "p"]);
                for tt in t {
                    tab.push(vec![Cell::Num(*tt, 6), Cell::Num(r.tail(*tt), 9)]);
                }
                tab.notes.push(format!("mean {:.12}, {} iterations", r.mean(), r.iterations));
                one(tab)
            }
            Oracle::Simulate {
                model,
                customers,
                seed,
                t,
            } => {
                let r = lindley_simulate(&load(model)?, *customers, *seed, t)?;
                let mut tab = Table::new(&["t", "p", "se"]);
                for (tt, p, se) in &r.tail {
                    tab.push(vec![Cell::Num(*tt, 6), Cell::Num(*p, 7), Cell::Num(*se, 7)]);
                }
                tab.notes.push(format!("seed {}, {} customers", r.seed, r.customers));
                let mut m = Table::new(&["nu", "moment", "se"]);
                for (i, (v, se)) in r.moments.iter().enumerate() {
                    m.push(vec![Cell::Int(i as i64 + 1), Cell::Num(*v, 7), Cell::Num(*se, 7)]);
                }
                Ok(vec![tab, m])
            }
        },
        Command::Reproduce { table } => {
            let ids: Vec<&str> = if table == "all" {
                reproduce::TABLES.to_vec()
            } else {
                vec![table.as_str()]
            };
            let mut out = Vec::new();
            for id in ids {
                let mut t = reproduce::run(id, eps)?;
                t.notes.insert(0, format!("table {id}"));
                out.push(t);
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tables = match run(&cli) {
        Ok(t) => t,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut sink: Box<dyn std::io::Write> = match &cli.out {
        Some(p) => match std::fs::File::create(p) {
            Ok(f) => Box::new(std::io::BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(std::io::stdout().lock()),
    };
    for (i, t) in tables.iter().enumerate() {
        if i > 0 && cli.format == Format::Csv {
            let _ = writeln!(sink);
        }
        if let Err(e) = t.write(&mut sink, cli.format) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let _ = sink.flush();
    if matches!(cli.command, Command::Reproduce { .. }) && !tables.iter().all(reproduce::all_pass) {
        eprintln!("some values are outside their tolerance");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
