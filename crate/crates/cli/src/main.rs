//! `nct`: spectra, verification suites, curved operators, and reproducible
//! dumps for the noncommutative torus. All reports are deterministic for a
//! fixed configuration and seed.

use clap::{Parser, Subcommand, ValueEnum};
use nct_core::curved;
use nct_core::sample;
use nct_core::spin::{self, SpinLabel};
use nct_core::triple::{self, TruncatedBasis};
use nct_core::{Theta, TorusElement};
use serde::Serialize;
use std::process::ExitCode;

const SCHEMA: &str = "nct-spectral/1";
const DEFAULT_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "nct", version, about = "Spectral computations on the noncommutative torus")]
struct Cli {
    /// Pass/fail tolerance; the NCT_TOL environment variable overrides the
    /// default, this flag overrides both.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Worker threads for the verification suites (0 = automatic).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleKind {
    Noncentral,
    Central,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Dirac spectrum of a spin structure on a truncated mode box.
    Spectrum {
        /// Deformation parameter, as `p/q`, an integer, or a float.
        #[arg(long, default_value = "1/3")]
        theta: String,
        /// Spin structure label, two bits.
        #[arg(long, num_args = 2, value_names = ["J", "K"], default_values_t = [0u8, 0])]
        spin: Vec<u8>,
        #[arg(long, default_value_t = 6)]
        cutoff: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Axiom and isomorphism verification across all spin structures.
    Verify {
        #[arg(long, default_value = "1/3")]
        theta: String,
        #[arg(long, default_value_t = 4)]
        cutoff: i64,
        /// Interior margin; must cover the mode degree of sample pairs.
        #[arg(long, default_value_t = 3)]
        margin: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random sample elements beyond the fixed ones.
        #[arg(long, default_value_t = 2)]
        samples: usize,
    },
    /// Curved Dirac operator reports for the worked coefficient examples.
    Curved {
        #[arg(long, default_value = "1/3")]
        theta: String,
        #[arg(long, value_enum, default_value_t = ExampleKind::Both)]
        example: ExampleKind,
        /// Coefficient offset; positivity requires t > 2.
        #[arg(long, default_value_t = 3.0)]
        t: f64,
        #[arg(long, default_value_t = 3)]
        cutoff: i64,
    },
    /// Seeded random element dump in the JSON wire format.
    Dump {
        #[arg(long, default_value = "1/3")]
        theta: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        terms: usize,
        #[arg(long, default_value_t = 3)]
        max_degree: i64,
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = resolve_tol(cli.tol);
    if cli.jobs > 0 {
        // ignore failure if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    match run(cli.command, tol) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn resolve_tol(flag: Option<f64>) -> f64 {
    if let Some(t) = flag {
        return t;
    }
    if let Ok(s) = std::env::var("NCT_TOL") {
        if let Ok(t) = s.parse::<f64>() {
            return t;
        }
    }
    DEFAULT_TOL
}

fn run(cmd: Command, tol: f64) -> Result<bool, String> {
    match cmd {
        Command::Spectrum {
            theta,
            spin,
            cutoff,
            format,
            output,
        } => cmd_spectrum(&theta, &spin, cutoff, format, output.as_deref(), tol),
        Command::Verify {
            theta,
            cutoff,
            margin,
            seed,
            samples,
        } => cmd_verify(&theta, cutoff, margin, seed, samples, tol),
        Command::Curved {
            theta,
            example,
            t,
            cutoff,
        } => cmd_curved(&theta, example, t, cutoff, tol),
        Command::Dump {
            theta,
            seed,
            terms,
            max_degree,
            output,
        } => cmd_dump(&theta, seed, terms, max_degree, output.as_deref()),
    }
}

fn parse_theta(s: &str) -> Result<Theta, String> {
    Theta::parse(s).map_err(|e| e.to_string())
}

fn parse_label(spin: &[u8]) -> Result<SpinLabel, String> {
    if spin.len() != 2 {
        return Err("--spin takes exactly two bits".into());
    }
    SpinLabel::new(spin[0], spin[1]).map_err(|e| e.to_string())
}

fn emit(text: &str, output: Option<&std::path::Path>) -> Result<(), String> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| e.to_string()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string_pretty(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct SpectrumReport {
    schema: &'static str,
    report: &'static str,
    theta: String,
    spin: [u8; 2],
    cutoff: i64,
    closed_form_deviation: f64,
    pass: bool,
    eigenvalues: Vec<f64>,
}

fn cmd_spectrum(
    theta: &str,
    spin: &[u8],
    cutoff: i64,
    format: Format,
    output: Option<&std::path::Path>,
    tol: f64,
) -> Result<bool, String> {
    let theta = parse_theta(theta)?;
    let label = parse_label(spin)?;
    let basis = spin::spin_basis(theta, label, cutoff, 0).map_err(|e| e.to_string())?;
    let d = spin::assemble_spin_dirac(&basis, label).map_err(|e| e.to_string())?;
    let eig = triple::spectrum(&d, 1e-12).map_err(|e| e.to_string())?;
    let formula = spin::spectrum_formula(&basis, label);
    let dev = nct_core::linalg::max_pairwise_deviation(&eig, &formula);
    let pass = dev <= tol;
    let text = match format {
        Format::Json => to_json(&SpectrumReport {
            schema: SCHEMA,
            report: "spectrum",
            theta: theta.describe(),
            spin: [label.j, label.k],
            cutoff,
            closed_form_deviation: dev,
            pass,
            eigenvalues: eig,
        })?,
        Format::Csv => {
            let mut s = String::from("index,eigenvalue\n");
            for (i, e) in eig.iter().enumerate() {
                s.push_str(&format!("{i},{e:.16e}\n"));
            }
            s
        }
    };
    emit(&text, output)?;
    Ok(pass)
}

#[derive(Serialize)]
struct SpinVerifyEntry {
    label: [u8; 2],
    axioms: triple::AxiomReport,
    realization_isomorphism: Option<triple::IsoReport>,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    schema: &'static str,
    report: &'static str,
    theta: String,
    cutoff: i64,
    margin: i64,
    seed: u64,
    tolerance: f64,
    standard_axioms: triple::AxiomReport,
    standard_realization_isomorphism: Option<triple::IsoReport>,
    spin: Vec<SpinVerifyEntry>,
    pass: bool,
}

fn cmd_verify(
    theta: &str,
    cutoff: i64,
    margin: i64,
    seed: u64,
    extra: usize,
    tol: f64,
) -> Result<bool, String> {
    let theta = parse_theta(theta)?;
    let samples = sample::verification_samples(theta, 1, extra, seed);

    let basis = TruncatedBasis::standard(theta, cutoff, margin).map_err(|e| e.to_string())?;
    let d = triple::assemble_dirac(&basis);
    let g = triple::assemble_grading(&basis);
    let j = triple::real_structure(&basis);
    let mut rep = |a: &TorusElement| triple::assemble_rep(a, &basis);
    let standard_axioms =
        triple::verify_axioms(&basis, &d, &g, &j, &mut rep, &samples).map_err(|e| e.to_string())?;

    let standard_iso = if theta.is_rational() {
        let j2 = triple::matrix_real_structure(&basis).map_err(|e| e.to_string())?;
        let t = nct_core::linalg::CMatrix::identity(basis.dim(), basis.dim());
        let mut r1 = |a: &TorusElement| triple::assemble_rep(a, &basis);
        let mut r2 = |a: &TorusElement| triple::matrix_rep(a, &basis);
        Some(
            triple::verify_isomorphism(&t, &d, &d, &g, &g, &j, &j2, &mut r1, &mut r2, &samples)
                .map_err(|e| e.to_string())?,
        )
    } else {
        None
    };

    use rayon::prelude::*;
    let spin_entries: Vec<SpinVerifyEntry> = SpinLabel::all()
        .into_par_iter()
        .map(|label| -> Result<SpinVerifyEntry, String> {
            let basis = spin::spin_basis(theta, label, cutoff, margin).map_err(|e| e.to_string())?;
            let d = spin::assemble_spin_dirac(&basis, label).map_err(|e| e.to_string())?;
            let g = triple::assemble_grading(&basis);
            let j = spin::spin_real_structure(&basis, label).map_err(|e| e.to_string())?;
            let mut rep = |a: &TorusElement| spin::assemble_spin_rep(a, &basis, label);
            let axioms = triple::verify_axioms(&basis, &d, &g, &j, &mut rep, &samples)
                .map_err(|e| e.to_string())?;
            let iso = if theta.is_rational() && !label.is_trivial() {
                let t = nct_core::linalg::CMatrix::identity(basis.dim(), basis.dim());
                let mut r1 = |a: &TorusElement| spin::assemble_spin_rep(a, &basis, label);
                let mut r2 = |a: &TorusElement| spin::spin_matrix_rep(a, &basis, label);
                Some(
                    triple::verify_isomorphism(
                        &t, &d, &d, &g, &g, &j, &j, &mut r1, &mut r2, &samples,
                    )
                    .map_err(|e| e.to_string())?,
                )
            } else {
                None
            };
            let pass = axioms.passes(tol)
                && iso.as_ref().map(|r| r.passes(tol)).unwrap_or(true);
            Ok(SpinVerifyEntry {
                label: [label.j, label.k],
                axioms,
                realization_isomorphism: iso,
                pass,
            })
        })
        .collect::<Result<_, _>>()?;

    let pass = standard_axioms.passes(tol)
        && standard_iso.as_ref().map(|r| r.passes(tol)).unwrap_or(true)
        && spin_entries.iter().all(|e| e.pass);

    let report = VerifyReport {
        schema: SCHEMA,
        report: "verify",
        theta: theta.describe(),
        cutoff,
        margin,
        seed,
        tolerance: tol,
        standard_axioms,
        standard_realization_isomorphism: standard_iso,
        spin: spin_entries,
        pass,
    };
    println!("{}", to_json(&report)?);
    Ok(pass)
}

#[derive(Serialize)]
struct NoncentralSection {
    entries: curved::NoncentralExampleReport,
    factorization: curved::FactorizationReport,
    pass: bool,
}

#[derive(Serialize)]
struct CentralSection {
    factorization: curved::FactorizationReport,
    transport: curved::TransportReport,
    pass: bool,
}

#[derive(Serialize)]
struct CurvedReport {
    schema: &'static str,
    report: &'static str,
    theta: String,
    t: f64,
    cutoff: i64,
    tolerance: f64,
    noncentral: Option<NoncentralSection>,
    central: Option<CentralSection>,
    pass: bool,
}

fn cmd_curved(
    theta: &str,
    example: ExampleKind,
    t: f64,
    cutoff: i64,
    tol: f64,
) -> Result<bool, String> {
    let theta = parse_theta(theta)?;
    let q = theta.as_rational().map(|r| r.q()).unwrap_or(0);

    let noncentral = match example {
        ExampleKind::Central => None,
        _ => {
            let entries = curved::noncentral_example_report(theta, cutoff, t)
                .map_err(|e| e.to_string())?;
            let k = curved::noncentral_example(theta, t).map_err(|e| e.to_string())?;
            let factorization =
                curved::check_twined_factorization(&k, cutoff).map_err(|e| e.to_string())?;
            let pass = entries.diagonal_deviation <= tol
                && entries.hopping_modulus_deviation <= tol
                && entries.mode_dependent_phase_deviation <= tol
                && entries.coefficient_spectral_floor >= t - 2.0 - 1e-9
                && (q < 2 || !factorization.factors);
            Some(NoncentralSection {
                entries,
                factorization,
                pass,
            })
        }
    };

    let central = match example {
        ExampleKind::Noncentral => None,
        _ => {
            let k = curved::central_example(theta, t).map_err(|e| e.to_string())?;
            let factorization =
                curved::check_twined_factorization(&k, cutoff).map_err(|e| e.to_string())?;
            let transport =
                curved::check_spectral_transport(&k, cutoff).map_err(|e| e.to_string())?;
            let pass = factorization.factors
                && transport.invariant_vs_base <= tol
                && transport.full_vs_base_multiplicity <= tol.max(1e-9);
            Some(CentralSection {
                factorization,
                transport,
                pass,
            })
        }
    };

    let pass = noncentral.as_ref().map(|s| s.pass).unwrap_or(true)
        && central.as_ref().map(|s| s.pass).unwrap_or(true);
    let report = CurvedReport {
        schema: SCHEMA,
        report: "curved",
        theta: theta.describe(),
        t,
        cutoff,
        tolerance: tol,
        noncentral,
        central,
        pass,
    };
    println!("{}", to_json(&report)?);
    Ok(pass)
}

#[derive(Serialize)]
struct DumpReport {
    schema: &'static str,
    report: &'static str,
    theta: String,
    seed: u64,
    element: nct_core::torus::TorusElementJson,
    section: Option<nct_core::realization::SectionJson>,
}

fn cmd_dump(
    theta: &str,
    seed: u64,
    terms: usize,
    max_degree: i64,
    output: Option<&std::path::Path>,
) -> Result<bool, String> {
    let theta = parse_theta(theta)?;
    let mut rng = sample::rng_from_seed(seed);
    let a = sample::random_element(theta, max_degree, terms, &mut rng);
    let section = if theta.is_rational() {
        Some(
            nct_core::realization::map_t(&a)
                .map_err(|e| e.to_string())?
                .to_json(),
        )
    } else {
        None
    };
    let report = DumpReport {
        schema: SCHEMA,
        report: "dump",
        theta: theta.describe(),
        seed,
        element: a.to_json(),
        section,
    };
    emit(&to_json(&report)?, output)?;
    Ok(true)
}
