//! `gcw`: cells, covers, chain complexes and homology of real Grassmannians.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use grassmann_cw::complex::golden::{bundled, compare, parse_table};
use grassmann_cw::complex::{
    build_complex, cell_json, export_json, format_tables, homology, projective_rep, verify_d_squared, ChainComplex,
    Coefficients, Variant,
};
use grassmann_cw::covering::covering_pairs;
use grassmann_cw::incidence::IncidenceRecord;
use grassmann_cw::involutions::{enumerate_cells, CellId, Sign};
use grassmann_cw::numerics::{
    cell_of, normal_form, project_pi, random_conjugate, reconstruct, transport_orientation, Tolerances,
    TransportOptions,
};

#[derive(Parser)]
#[command(name = "gcw", version, about = "Bruhat cells of real Grassmannians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Plain,
    Oriented,
    Projective,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Plain => Variant::Plain,
            VariantArg::Oriented => Variant::Oriented,
            VariantArg::Projective => Variant::Projective,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoeffArg {
    Integers,
    Mod2,
}

#[derive(Args)]
struct Space {
    /// Ambient dimension.
    #[arg(long)]
    n: usize,
    /// Subspace dimension.
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "plain")]
    variant: VariantArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// List the cells, grouped by dimension.
    Cells(Space),
    /// List the covering pairs with their signs.
    Covers(Space),
    /// Print the differential.
    Complex(Space),
    /// Compute homology.
    Homology {
        #[command(flatten)]
        space: Space,
        #[arg(long, value_enum, default_value = "integers")]
        coeff: CoeffArg,
    },
    /// Check d∘d = 0, the bundled tables and the numeric transport.
    Verify {
        #[command(flatten)]
        space: Space,
        /// Transport steps per cover.
        #[arg(long, default_value_t = 1000)]
        steps: usize,
    },
    /// Check π and the normal form on seeded random points.
    Oracle {
        #[command(flatten)]
        space: Space,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

enum Failure {
    Usage(String),
    Check,
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn check_space(s: &Space) -> Outcome {
    if s.k > s.n {
        return Err(usage(format!("k = {} exceeds n = {}", s.k, s.n)));
    }
    if matches!(s.variant, VariantArg::Projective) && s.n != 2 * s.k {
        return Err(usage(format!("projective variant needs n = 2k (got n = {}, k = {})", s.n, s.k)));
    }
    Ok(())
}

fn complex_for(s: &Space) -> Result<ChainComplex, Failure> {
    check_space(s)?;
    build_complex(s.n, s.k, s.variant.into()).map_err(|e| usage(e.to_string()))
}

fn cell_list(s: &Space) -> Vec<CellId> {
    let invols = enumerate_cells(s.n, s.k);
    let mut cells: Vec<CellId> = match s.variant {
        VariantArg::Plain => invols.into_iter().map(CellId::plain).collect(),
        VariantArg::Oriented => invols
            .into_iter()
            .flat_map(|w| [Sign::Plus, Sign::Minus].map(|o| CellId::oriented(w.clone(), o)))
            .collect(),
        VariantArg::Projective => invols
            .into_iter()
            .filter(|w| projective_rep(w) == *w)
            .map(CellId::plain)
            .collect(),
    };
    cells.sort();
    cells
}

fn emit_json<T: Serialize>(out: &mut impl Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

fn cmd_cells(s: &Space, out: &mut impl Write) -> io::Result<Outcome> {
    if let Err(e) = check_space(s) {
        return Ok(Err(e));
    }
    let cells = cell_list(s);
    match s.format {
        Format::Text => {
            for c in &cells {
                writeln!(out, "{} {}", c.dim(), c)?;
            }
        }
        Format::Json => {
            let list: Vec<_> = cells.iter().map(cell_json).collect();
            emit_json(out, &list)?;
        }
    }
    Ok(Ok(()))
}

fn cmd_covers(s: &Space, out: &mut impl Write) -> io::Result<Outcome> {
    if let Err(e) = check_space(s) {
        return Ok(Err(e));
    }
    let mut records = Vec::new();
    for c in covering_pairs(s.n, s.k) {
        match IncidenceRecord::new(&c) {
            Ok(r) => records.push(r),
            Err(e) => return Ok(Err(usage(e.to_string()))),
        }
    }
    match s.format {
        Format::Text => {
            let sign = |x: Option<Sign>| x.map_or("·".to_string(), |s| s.symbol().to_string());
            for r in &records {
                let c = &r.cover;
                writeln!(
                    out,
                    "{} < {}  {} ({},{})  a={} b={} c={}  incidence={:+} orid={:+}",
                    c.lower,
                    c.upper,
                    c.rise_type,
                    c.i + 1,
                    c.j + 1,
                    c.alpha().symbol(),
                    sign(c.beta()),
                    sign(c.gamma()),
                    r.incidence,
                    r.orid
                )?;
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                #[serde(flatten)]
                cover: &'a grassmann_cw::SignedCover,
                incidence: i32,
                orid: i32,
            }
            let rows: Vec<_> = records
                .iter()
                .map(|r| Row { cover: &r.cover, incidence: r.incidence, orid: r.orid })
                .collect();
            emit_json(out, &rows)?;
        }
    }
    Ok(Ok(()))
}

fn cmd_complex(s: &Space, out: &mut impl Write) -> io::Result<Outcome> {
    let c = match complex_for(s) {
        Ok(c) => c,
        Err(e) => return Ok(Err(e)),
    };
    match s.format {
        Format::Text => write!(out, "{}", format_tables(&c))?,
        Format::Json => {
            out.write_all(&export_json(&c))?;
            writeln!(out)?;
        }
    }
    Ok(Ok(()))
}

fn cmd_homology(s: &Space, coeff: CoeffArg, out: &mut impl Write) -> io::Result<Outcome> {
    let c = match complex_for(s) {
        Ok(c) => c,
        Err(e) => return Ok(Err(e)),
    };
    let coeff = match coeff {
        CoeffArg::Integers => Coefficients::Integers,
        CoeffArg::Mod2 => Coefficients::Mod2,
    };
    let h = match homology(&c, coeff) {
        Ok(h) => h,
        Err(e) => {
            writeln!(out, "error: {}", e)?;
            return Ok(Err(Failure::Check));
        }
    };
    match s.format {
        Format::Text => {
            write!(out, "{}", h)?;
            let betti: Vec<String> = h.betti().iter().map(ToString::to_string).collect();
            writeln!(out, "betti ({})", betti.join(","))?;
        }
        Format::Json => emit_json(out, &h)?,
    }
    Ok(Ok(()))
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_verify(s: &Space, steps: usize, out: &mut impl Write) -> io::Result<Outcome> {
    if let Err(e) = check_space(s) {
        return Ok(Err(e));
    }
    let mut all_ok = true;
    let variants: Vec<Variant> = if s.n == 2 * s.k {
        Variant::ALL.to_vec()
    } else {
        vec![Variant::Plain, Variant::Oriented]
    };
    let mut oriented = None;
    for v in variants {
        let c = match build_complex(s.n, s.k, v) {
            Ok(c) => c,
            Err(e) => return Ok(Err(usage(e.to_string()))),
        };
        let bad = verify_d_squared(&c);
        writeln!(out, "{} d∘d = 0 ({}): {} nonzero entries", status(bad.is_empty()), v, bad.len())?;
        all_ok &= bad.is_empty();
        if v == Variant::Oriented {
            oriented = Some(c);
        }
    }
    if let (Some(text), Some(c)) = (bundled(s.n, s.k), oriented.as_ref()) {
        let table = parse_table(text, s.n).expect("bundled table parses");
        let r = compare(c, &table);
        let how = if r.exact { "exact".to_string() } else { format!("{} cells flipped", r.flipped.len()) };
        writeln!(
            out,
            "{} golden table: {} rows, {} support mismatches, {} conflicts, {}",
            status(r.passed()),
            r.rows,
            r.support_mismatches.len(),
            r.conflicts,
            how
        )?;
        if !r.exact && !r.flipped.is_empty() {
            writeln!(out, "  flipped: {}", r.flipped.join(" "))?;
        }
        all_ok &= r.passed();
    }
    let tol = Tolerances::default();
    let opts = TransportOptions { steps, ..Default::default() };
    let covers = covering_pairs(s.n, s.k);
    let mut mismatches = 0;
    let mut min_margin = f64::INFINITY;
    for cover in &covers {
        let rec = IncidenceRecord::new(cover).expect("incidence of a cover");
        match transport_orientation::<f64>(cover, &tol, &opts) {
            Ok(t) => {
                min_margin = min_margin.min(t.margin);
                if (t.incidence, t.orid) != (rec.incidence, rec.orid) {
                    mismatches += 1;
                    writeln!(out, "  mismatch: {} -> {}", cover.upper, cover.lower)?;
                }
            }
            Err(e) => {
                mismatches += 1;
                writeln!(out, "  {} -> {}: {}", cover.upper, cover.lower, e)?;
            }
        }
    }
    writeln!(
        out,
        "{} numeric transport: {} covers, {} mismatches, margin {:.3e}",
        status(mismatches == 0),
        covers.len(),
        mismatches,
        min_margin
    )?;
    all_ok &= mismatches == 0;
    Ok(if all_ok { Ok(()) } else { Err(Failure::Check) })
}

fn cmd_oracle(s: &Space, seed: u64, samples: usize, out: &mut impl Write) -> io::Result<Outcome> {
    if let Err(e) = check_space(s) {
        return Ok(Err(e));
    }
    let tol = Tolerances::default();
    let cells = enumerate_cells(s.n, s.k);
    if cells.is_empty() {
        writeln!(out, "no cells")?;
        return Ok(Ok(()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut failures, mut ambiguous, mut worst_idem, mut worst_round) = (0usize, 0usize, 0.0f64, 0.0f64);
    for idx in 0..samples {
        let w = &cells[idx % cells.len()];
        let z = random_conjugate::<f64, _>(w, &mut rng);
        let g = match project_pi(&z, &tol) {
            Ok(g) => g,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        match cell_of(&g, &tol) {
            Ok(found) if &found == w => {}
            Ok(_) => failures += 1,
            Err(_) => ambiguous += 1,
        }
        if let Ok(gg) = project_pi(g.matrix(), &tol) {
            worst_idem = worst_idem.max((gg.matrix() - g.matrix()).amax());
        } else {
            failures += 1;
        }
        if let Ok(a) = normal_form(&g, w, &tol) {
            if let Ok(back) = reconstruct(&a, w, &tol) {
                worst_round = worst_round.max((back.matrix() - g.matrix()).amax());
            } else {
                failures += 1;
            }
        }
    }
    let ok = failures == 0 && worst_idem < 1e-6 && worst_round < 1e-6;
    writeln!(
        out,
        "{} oracle n={} k={} seed={}: {} samples, {} failures, {} ambiguous, idempotence {:.2e}, round trip {:.2e}",
        status(ok),
        s.n,
        s.k,
        seed,
        samples,
        failures,
        ambiguous,
        worst_idem,
        worst_round
    )?;
    Ok(if ok { Ok(()) } else { Err(Failure::Check) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let res = match &cli.command {
        Command::Cells(s) => cmd_cells(s, &mut out),
        Command::Covers(s) => cmd_covers(s, &mut out),
        Command::Complex(s) => cmd_complex(s, &mut out),
        Command::Homology { space, coeff } => cmd_homology(space, *coeff, &mut out),
        Command::Verify { space, steps } => cmd_verify(space, *steps, &mut out),
        Command::Oracle { space, seed, samples } => cmd_oracle(space, *seed, *samples, &mut out),
    };
    let flushed = out.flush();
    match (res, flushed) {
        (Ok(Ok(())), Ok(())) => ExitCode::SUCCESS,
        (Ok(Err(Failure::Check)), _) => ExitCode::from(1),
        (Ok(Err(Failure::Usage(msg))), _) => {
            eprintln!("error: {}", msg);
            eprintln!("hint: run `gcw --help` for the accepted arguments");
            ExitCode::from(2)
        }
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}
