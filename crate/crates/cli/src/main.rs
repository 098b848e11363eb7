use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use rayon::prelude::*;

use quadsplit::abelian::is_p_suitable;
use quadsplit::batch::{batch_class_numbers_with_budget, ClassNumberTable, DEFAULT_BATCH_BUDGET};
use quadsplit::cache::ClassGroupCache;
use quadsplit::cohen_lenstra::{empirical_cl_comparison_from, prime_lower_bound, weighted_sum_coprime};
use quadsplit::density::{
    self, estimate, geometric_grid, landau_ratio_check, pgroup_density_from, IntegerSet,
};
use quadsplit::eigenform::{find_witness_in, Witness};
use quadsplit::forms::{class_group, Discriminant};
use quadsplit::gf::dihedral_trace_set;

/// Class groups of imaginary quadratic fields, p-suitability witnesses and
/// density scans.
#[derive(Debug, Parser)]
#[command(name = "quadsplit", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Class-group cache file (CSV `disc,h,invariant_factors`).
    #[arg(long, env = "QUADSPLIT_CACHE", global = true)]
    cache: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Largest |D| a class-number tabulation may cover.
    #[arg(long, global = true, default_value_t = DEFAULT_BATCH_BUDGET)]
    budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Class number and invariant factors of one discriminant.
    Classgroup {
        /// Negative discriminant D.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "field")]
        disc: Option<i64>,
        /// Positive squarefree d; uses the discriminant of Q(sqrt(-d)).
        #[arg(long)]
        field: Option<u64>,
    },
    /// Class numbers of every fundamental discriminant with |D| <= X.
    Batch {
        #[arg(long)]
        max_abs_disc: u64,
    },
    /// Number of fundamental discriminants with |D| < X per class number.
    Census {
        #[arg(long)]
        max_abs_disc: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u64>,
    },
    /// Fundamental discriminants with |D| <= X whose class group has exponent 3.
    Exp3scan {
        #[arg(long)]
        max_abs_disc: u64,
    },
    /// Density of integers with a squarefree divisor d ≡ 3 mod 4 whose
    /// class group is p-suitable.
    Suitable {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        max: u64,
    },
    /// Smallest prime whose eigenform coefficient leaves F_p.
    Witness {
        /// A single discriminant.
        #[arg(long, allow_hyphen_values = true, required_unless_present = "max_abs_disc")]
        disc: Option<i64>,
        /// Scan every fundamental discriminant with |D| <= X instead.
        #[arg(long, conflicts_with = "disc")]
        max_abs_disc: Option<u64>,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
        /// In scan mode, list only discriminants whose class group is p-suitable.
        #[arg(long)]
        suitable_only: bool,
    },
    /// Density of one integer set inside another, or of p-group class numbers.
    Density {
        /// Member set: comma-separated intersection of `all`, `squarefree`,
        /// `res:R:M` (n ≡ R mod M) and `mult:K`.
        #[arg(long, default_value = "all")]
        member: String,
        /// Ambient set, same syntax.
        #[arg(long, default_value = "all")]
        ambient: String,
        /// Measure fundamental discriminants whose class number is a power of P instead.
        #[arg(long)]
        pgroup: Option<u64>,
        #[arg(long)]
        max: u64,
    },
    /// Counting function of integers whose prime factors lie in given
    /// residue classes, normalised by Landau's asymptotic.
    Landau {
        #[arg(long)]
        max: u64,
        #[arg(long)]
        modulus: u64,
        #[arg(long, value_delimiter = ',')]
        residues: Vec<u64>,
    },
    /// Cohen-Lenstra weight sums over groups coprime to a prime set.
    Clweights {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<u64>,
        /// Print exact rationals instead of decimals.
        #[arg(long)]
        exact: bool,
    },
    /// Fraction of class numbers divisible by p against the heuristic value.
    Clcompare {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(long)]
        max_abs_disc: u64,
    },
    /// Degree of the field generated by the traces of the dihedral group of order 2h.
    Traces {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(long)]
        max_h: u64,
    },
}

/// Rows under a fixed header, emitted as CSV or as a JSON array of objects.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => {
                writeln!(out, "{}", self.header.join(","))?;
                for row in &self.rows {
                    writeln!(out, "{}", row.join(","))?;
                }
            }
            Format::Json => {
                let arr: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj = self
                            .header
                            .iter()
                            .zip(row)
                            .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
                            .collect();
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *out, &arr)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.global.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let table = execute(&cli.command, &cli.global)?;
    match &cli.global.output {
        Some(path) => {
            let file = File::create(path)
                .with_context(|| format!("cannot write {}", path.display()))?;
            let mut w = BufWriter::new(file);
            table.write(cli.global.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(cli.global.format, &mut w)?;
        }
    }
    Ok(())
}

fn tabulate(x: u64, budget: u64) -> Result<ClassNumberTable> {
    Ok(batch_class_numbers_with_budget(x.max(3), budget)?)
}

fn open_cache(global: &Global) -> Result<Option<ClassGroupCache>> {
    global
        .cache
        .as_ref()
        .map(|p| ClassGroupCache::open(p).with_context(|| format!("reading cache {}", p.display())))
        .transpose()
}

fn ratio_row(e: &density::DensityEstimate) -> Vec<String> {
    vec![
        e.bound.to_string(),
        e.count_member.to_string(),
        e.count_ambient.to_string(),
        format!("{:.6}", e.decimal()),
    ]
}

const DENSITY_HEADER: [&str; 4] = ["x", "count_member", "count_ambient", "ratio"];

fn execute(command: &Command, global: &Global) -> Result<Table> {
    Ok(match command {
        Command::Classgroup { disc, field } => {
            let d = match (disc, field) {
                (Some(d), _) => Discriminant::new(*d)?,
                (None, Some(f)) => Discriminant::of_field(*f)?,
                (None, None) => bail!("pass --disc or --field"),
            };
            let structure = match open_cache(global)? {
                Some(mut cache) => {
                    let g = cache.structure(d)?;
                    cache.save()?;
                    g
                }
                None => class_group(d)?.structure().clone(),
            };
            let mut t = Table::new(&["disc", "h", "invariant_factors"]);
            t.push(vec![
                d.value().to_string(),
                structure.order().to_string(),
                structure.chain_string(),
            ]);
            t
        }
        Command::Batch { max_abs_disc } => {
            let tab = tabulate(*max_abs_disc, global.budget)?;
            let mut t = Table::new(&["disc", "h"]);
            for (d, h) in tab.fundamental_entries() {
                t.push(vec![d.to_string(), h.to_string()]);
            }
            t
        }
        Command::Census { max_abs_disc, orders } => {
            let tab = tabulate(max_abs_disc.saturating_sub(1), global.budget)?;
            let mut t = Table::new(&["order", "count"]);
            for (h, c) in density::class_order_census_from(&tab, *max_abs_disc, orders)? {
                t.push(vec![h.to_string(), c.to_string()]);
            }
            t
        }
        Command::Exp3scan { max_abs_disc } => {
            let tab = tabulate(*max_abs_disc, global.budget)?;
            let rows = density::exponent3_scan_from(&tab, *max_abs_disc)?;
            if let Some(mut cache) = open_cache(global)? {
                for r in &rows {
                    cache.insert(Discriminant::new(r.disc)?, r.structure.clone());
                }
                cache.save()?;
            }
            let mut t = Table::new(&["disc", "h", "invariant_factors"]);
            for r in rows {
                t.push(vec![r.disc.to_string(), r.h.to_string(), r.structure.chain_string()]);
            }
            t
        }
        Command::Suitable { p, max } => {
            let tab = tabulate(*max, global.budget)?;
            let sd = density::suitable_divisors_from(&tab, *p, *max)?;
            let marks = sd.sieve();
            let mut t = Table::new(&DENSITY_HEADER);
            let mut count = 0u64;
            let grid = geometric_grid(10, *max);
            let mut next = grid.iter().peekable();
            for n in 1..=*max {
                count += marks[n as usize] as u64;
                if next.peek() == Some(&&n) {
                    next.next();
                    t.push(ratio_row(&density::DensityEstimate::new(n, count, n)));
                }
            }
            t
        }
        Command::Witness {
            disc,
            max_abs_disc,
            p,
            bound,
            suitable_only,
        } => {
            let discs: Vec<i64> = match (disc, max_abs_disc) {
                (Some(d), _) => vec![*d],
                (None, Some(x)) => tabulate(*x, global.budget)?
                    .fundamental_entries()
                    .map(|(d, _)| d)
                    .collect(),
                (None, None) => bail!("pass --disc or --max-abs-disc"),
            };
            let single = disc.is_some();
            let rows: Result<Vec<Option<Vec<String>>>> = discs
                .par_iter()
                .map(|&d| {
                    let cg = class_group(Discriminant::new(d)?)?;
                    if !single
                        && *suitable_only
                        && !is_p_suitable(cg.structure(), *p).suitable
                    {
                        return Ok(None);
                    }
                    let (ell, degree) = match find_witness_in(&cg, *p, *bound)? {
                        Witness::Found { ell, field_degree, .. } => {
                            (ell.to_string(), field_degree.to_string())
                        }
                        // every coefficient examined lies in F_p
                        Witness::NotFoundUpToBound => (String::new(), "1".to_string()),
                    };
                    Ok(Some(vec![
                        d.to_string(),
                        cg.class_number().to_string(),
                        p.to_string(),
                        ell,
                        degree,
                    ]))
                })
                .collect();
            let mut t = Table::new(&["disc", "h", "p", "witness_prime", "coefficient_field_degree"]);
            for row in rows?.into_iter().flatten() {
                t.push(row);
            }
            t
        }
        Command::Density {
            member,
            ambient,
            pgroup,
            max,
        } => {
            let mut t = Table::new(&DENSITY_HEADER);
            if let Some(p) = pgroup {
                let tab = tabulate(*max, global.budget)?;
                for x in geometric_grid(10, *max) {
                    t.push(ratio_row(&pgroup_density_from(&tab, *p, x)?));
                }
            } else {
                let m = parse_set(member, *max)?;
                let a = parse_set(ambient, *max)?;
                for x in geometric_grid(10, *max) {
                    t.push(ratio_row(&estimate(&m, &a, x)?));
                }
            }
            t
        }
        Command::Landau {
            max,
            modulus,
            residues,
        } => {
            let mut t = Table::new(&["x", "count", "normalized_ratio"]);
            for s in landau_ratio_check(*max, *modulus, residues)? {
                t.push(vec![s.x.to_string(), s.count.to_string(), format!("{:.6}", s.ratio)]);
            }
            t
        }
        Command::Clweights { primes, x, exact } => {
            let mut t = Table::new(&["x", "weighted_sum", "lower_bound"]);
            let mut xs = x.clone();
            xs.sort_unstable();
            for &x in &xs {
                let w = weighted_sum_coprime(primes, x)?;
                let lb = prime_lower_bound(primes, x);
                let show = |q: &num_rational::BigRational| {
                    if *exact {
                        q.to_string()
                    } else {
                        format!("{:.12}", q.to_f64().unwrap_or(f64::NAN))
                    }
                };
                t.push(vec![x.to_string(), show(&w), show(&lb)]);
            }
            t
        }
        Command::Clcompare { p, max_abs_disc } => {
            let tab = tabulate(*max_abs_disc, global.budget)?;
            let mut t = Table::new(&["p", "X", "empirical", "predicted", "abs_diff"]);
            for &q in p {
                let c = empirical_cl_comparison_from(&tab, q, *max_abs_disc)?;
                t.push(vec![
                    q.to_string(),
                    max_abs_disc.to_string(),
                    format!("{:.6}", c.empirical),
                    format!("{:.6}", c.predicted),
                    format!("{:.6}", c.abs_diff()),
                ]);
            }
            t
        }
        Command::Traces { p, max_h } => {
            let mut cases = Vec::new();
            for &q in p {
                for h in (1..=*max_h).filter(|h| h % q != 0) {
                    cases.push((h, q));
                }
            }
            let rows: Result<Vec<Vec<String>>> = cases
                .par_iter()
                .map(|&(h, q)| {
                    let ts = dihedral_trace_set(h, q)?;
                    Ok(vec![
                        h.to_string(),
                        q.to_string(),
                        ts.context().degree().to_string(),
                        ts.trace_field_degree().to_string(),
                    ])
                })
                .collect();
            let mut t = Table::new(&["h", "p", "m", "trace_field_degree"]);
            for row in rows? {
                t.push(row);
            }
            t
        }
    })
}

/// Parses a comma-separated intersection of set atoms.
fn parse_set(spec: &str, limit: u64) -> Result<IntegerSet> {
    let mut set = IntegerSet::all();
    for atom in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = atom.split(':').collect();
        let next = match parts.as_slice() {
            ["all"] => IntegerSet::all(),
            ["squarefree"] => IntegerSet::squarefree(limit),
            ["res", r, m] => {
                let m: u64 = m.parse().context("modulus")?;
                if m == 0 {
                    bail!("modulus must be positive");
                }
                IntegerSet::residue_class(r.parse().context("residue")?, m)
            }
            ["mult", k] => {
                let k: u64 = k.parse().context("multiplier")?;
                if k == 0 {
                    bail!("multiplier must be positive");
                }
                IntegerSet::multiples_of(k)
            }
            _ => bail!("unknown set atom {atom:?}"),
        };
        set = set.intersection(&next);
    }
    Ok(set)
}
