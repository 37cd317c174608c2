use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use reciprocity_core::arith::{jacobi, legendre, parse_rational, Place, Rational};
use reciprocity_core::cyclotomic::Mu8;
use reciprocity_core::engine::{odd_primes_below, LawRegistry, SweepConfig};
use reciprocity_core::error::Error;
use reciprocity_core::finite::gauss_sum;
use reciprocity_core::hilbert::{hilbert, hilbert_method, support};
use reciprocity_core::maslov::{kappa, kashiwara_form, triple_phase, LagrangianTriple, Slope};
use reciprocity_core::weil::{defect, weil_methods, WeilEvaluator};

mod output;

use output::Format;

#[derive(Parser)]
#[command(name = "reciprocity", version)]
#[command(about = "Exact local invariants of quadratic reciprocity and verification sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PlaceSelection {
    /// Place: `inf` or a prime
    #[arg(long)]
    place: Option<Place>,

    /// Every place where the value can be nontrivial
    #[arg(long)]
    all_places: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Legendre symbol (a/p)
    #[command(allow_negative_numbers = true)]
    Legendre { a: i64, p: u64 },

    /// Jacobi symbol (a/c) for odd c
    #[command(allow_negative_numbers = true)]
    Jacobi { a: i64, c: u64 },

    /// Hilbert symbol <a,b>_v
    #[command(allow_negative_numbers = true)]
    Hilbert {
        #[arg(value_parser = rational, allow_hyphen_values = true)]
        a: Rational,
        #[arg(value_parser = rational, allow_hyphen_values = true)]
        b: Rational,
        #[command(flatten)]
        places: PlaceSelection,
        #[arg(long, value_enum, default_value_t = HilbertMethod::Formula)]
        method: HilbertMethod,
    },

    /// Weil index gamma_v(a)
    #[command(allow_negative_numbers = true)]
    Weil {
        #[arg(value_parser = rational, allow_hyphen_values = true)]
        a: Rational,
        #[command(flatten)]
        places: PlaceSelection,
        #[arg(long, value_enum, default_value_t = WeilMethod::Table)]
        method: WeilMethod,
        /// Oracle level (defaults to the stabilization floor)
        #[arg(long)]
        level: Option<u32>,
    },

    /// Kashiwara coefficient of a triple of slopes (`inf` or rationals)
    #[command(allow_negative_numbers = true)]
    Kashiwara {
        #[arg(allow_hyphen_values = true)]
        s1: Slope,
        #[arg(allow_hyphen_values = true)]
        s2: Slope,
        #[arg(allow_hyphen_values = true)]
        s3: Slope,
        /// Also print the triple phase at this place
        #[arg(long)]
        place: Option<Place>,
    },

    /// Cyclic-order sign of three finite slopes
    #[command(allow_negative_numbers = true)]
    Kappa {
        #[arg(allow_hyphen_values = true)]
        s1: Slope,
        #[arg(allow_hyphen_values = true)]
        s2: Slope,
        #[arg(allow_hyphen_values = true)]
        s3: Slope,
    },

    /// Quadratic Gauss sum G(a,c) in Z[zeta_c]
    #[command(allow_negative_numbers = true)]
    Gauss {
        a: i64,
        c: u64,
        /// Also print a floating-point approximation
        #[arg(long)]
        approx: bool,
    },

    /// Local defect mu_v(a,b)
    #[command(allow_negative_numbers = true)]
    Defect {
        #[arg(value_parser = rational, allow_hyphen_values = true)]
        a: Rational,
        #[arg(value_parser = rational, allow_hyphen_values = true)]
        b: Rational,
        #[command(flatten)]
        places: PlaceSelection,
    },

    /// Run a verification sweep (`all` runs every law)
    Verify {
        law: String,
        #[arg(long)]
        max: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Worker threads (default: all cores)
        #[arg(long, env = "RECIPROCITY_JOBS")]
        jobs: Option<usize>,
    },

    /// Print tables
    Report {
        #[command(subcommand)]
        table: ReportTable,
    },
}

#[derive(Subcommand)]
enum ReportTable {
    /// Legendre symbols, reciprocity sign and 2-adic Hilbert symbol for p < q
    QrTable {
        #[arg(long, value_parser = clap::value_parser!(i64).range(5..))]
        max: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum HilbertMethod {
    Formula,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeilMethod {
    Table,
    Oracle,
}

fn rational(s: &str) -> Result<Rational, Error> {
    parse_rational(s)
}

/// Outcome of a command that did not fail outright.
enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e @ Error::UnknownLaw(_)) => {
            let known = LawRegistry::default().names().join(", ");
            eprintln!("error: {e} (known: {known}, all)");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn places_for(sel: &PlaceSelection, a: &Rational, b: &Rational) -> Result<Vec<Place>, Error> {
    match sel.place {
        Some(v) => Ok(vec![v]),
        None => support(a, b),
    }
}

fn print_per_place<T: std::fmt::Display>(values: Vec<(Place, T)>, single: bool) {
    for (v, x) in values {
        if single {
            println!("{x}");
        } else {
            println!("{v}: {x}");
        }
    }
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Legendre { a, p } => println!("{}", legendre(a, p)?),
        Command::Jacobi { a, c } => println!("{}", jacobi(a, c)?),
        Command::Hilbert { a, b, places, method } => {
            let name = match method {
                HilbertMethod::Formula => "formula",
                HilbertMethod::Oracle => "oracle",
            };
            let method = hilbert_method(name).expect("registered hilbert method");
            let values = places_for(&places, &a, &b)?
                .into_iter()
                .map(|v| Ok((v, method.symbol(&a, &b, v)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            print_per_place(values, places.place.is_some());
        }
        Command::Weil { a, places, method, level } => {
            let evaluator: Box<dyn WeilEvaluator> = weil_methods(level)
                .into_iter()
                .find(|m| {
                    m.name()
                        == match method {
                            WeilMethod::Table => "table",
                            WeilMethod::Oracle => "oracle",
                        }
                })
                .expect("registered weil method");
            let one = Rational::from_integer(1.into());
            let values = places_for(&places, &a, &one)?
                .into_iter()
                .map(|v| Ok((v, evaluator.weil(&a, v)?)))
                .collect::<Result<Vec<(Place, Mu8)>, Error>>()?;
            print_per_place(values, places.place.is_some());
        }
        Command::Kashiwara { s1, s2, s3, place } => {
            let t = LagrangianTriple::new(s1, s2, s3)?;
            println!("{}", kashiwara_form(&t));
            if let Some(v) = place {
                println!("phase at {v}: {}", triple_phase(&t, v)?);
            }
        }
        Command::Kappa { s1, s2, s3 } => {
            let k = kappa(&LagrangianTriple::new(s1, s2, s3)?)?;
            println!("{k}");
        }
        Command::Gauss { a, c, approx } => {
            let g = gauss_sum(a, c)?;
            println!("{g}");
            if approx {
                let z = g.approx_complex();
                println!("approx {:.9} {} {:.9}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs());
            }
        }
        Command::Defect { a, b, places } => {
            let values = places_for(&places, &a, &b)?
                .into_iter()
                .map(|v| Ok((v, defect(&a, &b, v)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            print_per_place(values, places.place.is_some());
        }
        Command::Verify { law, max, format, jobs } => {
            let reports = LawRegistry::default().run(&law, SweepConfig { max, jobs })?;
            output::write_reports(&reports, format)?;
            if reports.iter().any(|r| !r.passed()) {
                return Ok(Outcome::Failed);
            }
        }
        Command::Report { table: ReportTable::QrTable { max } } => qr_table(max)?,
    }
    Ok(Outcome::Ok)
}

fn qr_table(max: i64) -> Result<(), Error> {
    let primes = odd_primes_below(max + 1);
    println!("{:>5} {:>5} {:>6} {:>6} {:>5} {:>8}", "p", "q", "(p/q)", "(q/p)", "sign", "<p,q>_2");
    let two = Place::finite(2)?;
    for (i, &p) in primes.iter().enumerate() {
        for &q in &primes[i + 1..] {
            let pq = legendre(p as i64, q)?;
            let qp = legendre(q as i64, p)?;
            let sign = if (p - 1) * (q - 1) / 4 % 2 == 0 { 1 } else { -1 };
            let (a, b) = (Rational::from_integer(p.into()), Rational::from_integer(q.into()));
            let h2 = hilbert(&a, &b, two)?;
            println!("{p:>5} {q:>5} {pq:>6} {qp:>6} {sign:>5} {h2:>8}");
        }
    }
    Ok(())
}
