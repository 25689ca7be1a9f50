use std::path::{Path, PathBuf};
use std::process::ExitCode;

use charvar::arrangement::{arrangement_presentation, parse_line_file, wiring_diagram};
use charvar::covers::{
    quotient_by_relators, schreier_cover, tietze_simplify, FiniteAbelianQuotient, CEVA_ALPHA,
};
use charvar::dsl::{parse_group_file, parse_word, render_group_dsl};
use charvar::engine::{torsion_scan, DepthEngine, Method, ScanOptions};
use charvar::orbifold::{independence_check, load_pencil_fixture, verify_pencil_fixture, PencilFixture};
use charvar::{Character, Error, GroupPresentation, Result, Word};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_integer::Integer;
use serde::Deserialize;

mod checks;

#[derive(Parser)]
#[command(name = "charvar", version, about = "Depths of characters and torsion points of characteristic varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Depth of one character.
    Depth {
        #[command(flatten)]
        group: GroupArg,
        /// Character, e.g. "e5=z(2,1),e3_0=1"; unlisted generators map to 1.
        #[arg(long, short)]
        character: String,
        /// fox, invariant or both; default picks both when possible.
        #[arg(long)]
        method: Option<Method>,
        #[arg(long)]
        json: bool,
    },
    /// Depths of all characters of order dividing N.
    Scan {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, short = 'n')]
        order: u64,
        /// Generators allowed to carry a nontrivial value (comma separated).
        #[arg(long, value_delimiter = ',')]
        mask: Option<Vec<String>>,
        #[arg(long)]
        method: Option<Method>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = 2_000_000)]
        budget: u128,
        /// Also report depth-0 characters.
        #[arg(long)]
        include_zero: bool,
    },
    /// Presentation of the kernel of a finite abelian quotient, optionally with extra relators.
    Cover {
        #[command(flatten)]
        group: GroupArg,
        /// Quotient spec (JSON), or builtin:ceva-alpha.
        #[arg(long)]
        quotient: String,
        /// Invariant factors of the quotient, overriding the spec.
        #[arg(long, value_delimiter = ',')]
        factors: Option<Vec<u64>>,
        #[arg(long)]
        no_simplify: bool,
        #[arg(long, default_value = "K")]
        name: String,
    },
    /// Group of a real line arrangement, printed in the group language.
    Arrangement {
        file: PathBuf,
        /// Treat the lines as affine (no relation at infinity).
        #[arg(long)]
        affine: bool,
        #[arg(long, default_value = "A")]
        name: String,
        /// Print the wiring diagram summary to stderr.
        #[arg(long)]
        verbose: bool,
    },
    /// Marked orbifold pencils.
    Pencil {
        #[command(subcommand)]
        command: PencilCommand,
    },
    /// Bundled fixtures.
    Fixtures {
        #[command(subcommand)]
        command: FixtureCommand,
    },
}

#[derive(Subcommand)]
enum PencilCommand {
    /// Pullbacks, marking and depth bound of a pencil fixture.
    Verify { fixture: String },
    /// Independence of the equivariant data of a pencil fixture.
    Independence { fixture: String },
}

#[derive(Subcommand)]
enum FixtureCommand {
    /// Runs every acceptance check on the bundled data and prints a table.
    Run {
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Lists bundled groups and pencil fixtures.
    List,
}

#[derive(Args)]
struct GroupArg {
    /// Group file, line file (*.lines) or builtin:NAME.
    group: String,
    /// Read a line file as an affine arrangement.
    #[arg(long)]
    affine: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

const BUILTIN_GROUPS: &[&str] =
    &["ceva", "fermat2", "fermat3", "c6", "c7", "c8", "c9", "ceva-lines", "c22"];
const BUILTIN_PENCILS: &[&str] = &["fermat2", "fermat3", "c7", "c8", "c9"];

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn builtin_group(name: &str) -> Result<GroupPresentation> {
    use charvar::arrangement::{fixtures as l, projective_group_from_text};
    match name {
        "ceva" => Ok(charvar::covers::ceva_group()),
        "fermat2" => charvar::covers::fermat_group(2),
        "fermat3" => charvar::covers::fermat_group(3),
        "c6" => projective_group_from_text(l::C6),
        "c7" => projective_group_from_text(l::C7),
        "c8" => projective_group_from_text(l::C8),
        "c9" => projective_group_from_text(l::C9),
        "ceva-lines" => projective_group_from_text(l::CEVA),
        "c22" => Ok(charvar::orbifold::orbifold_group(&charvar::orbifold::Orbicurve::c_mm(2))),
        other => Err(Error::InvalidArgument(format!(
            "unknown builtin group {other}; known: {}",
            BUILTIN_GROUPS.join(", ")
        ))),
    }
}

fn load_group(arg: &GroupArg) -> Result<GroupPresentation> {
    if let Some(name) = arg.group.strip_prefix("builtin:") {
        return builtin_group(name);
    }
    let path = Path::new(&arg.group);
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "lines") {
        let w = wiring_diagram(&parse_line_file(&text)?)?;
        if !arg.affine && w.parallel_pairs > 0 {
            return Err(Error::Arrangement("parallel lines in a projective line file".into()));
        }
        return Ok(arrangement_presentation(&w, !arg.affine));
    }
    Ok(parse_group_file(&text)?.presentation)
}

fn load_pencils(arg: &str) -> Result<PencilFixture> {
    use charvar::orbifold::fixtures as f;
    let text = match arg.strip_prefix("builtin:") {
        Some("fermat2") => f::FERMAT_PENCILS_2.to_string(),
        Some("fermat3") => f::FERMAT_PENCILS_3.to_string(),
        Some("c7") => f::C7_PENCILS.to_string(),
        Some("c8") => f::C8_PENCILS.to_string(),
        Some("c9") => f::C9_PENCILS.to_string(),
        Some(other) => {
            return Err(Error::InvalidArgument(format!(
                "unknown builtin pencil fixture {other}; known: {}",
                BUILTIN_PENCILS.join(", ")
            )))
        }
        None => read(Path::new(arg))?,
    };
    load_pencil_fixture(&text)
}

/// Comma-separated items outside parentheses, each with its starting column.
fn split_top_level(text: &str) -> Vec<(usize, String)> {
    let mut out = vec![(1, String::new())];
    let mut depth = 0i32;
    for (i, c) in text.chars().enumerate() {
        match c {
            ',' if depth == 0 => {
                out.push((i + 2, String::new()));
                continue;
            }
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        out.last_mut().unwrap().1.push(c);
    }
    out
}

/// Parses `e5=z(2,1),e3_0=1,x2=-1`. Values are `1`, `-1` or `z(N,k)` for `ζ_N^k`.
fn parse_character(text: &str, p: &GroupPresentation) -> Result<Character> {
    let mut values: Vec<(usize, u64, i64)> = Vec::new();
    for (here, item) in split_top_level(text) {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (name, value) =
            item.split_once('=').ok_or_else(|| Error::parse(1, here, format!("expected name=value in '{item}'")))?;
        let g = p
            .index_of(name.trim())
            .ok_or_else(|| Error::parse(1, here, format!("unknown generator {}", name.trim())))?;
        let value = value.trim();
        let (n, k) = match value {
            "1" => (1, 0),
            "-1" => (2, 1),
            v => {
                let inner = v
                    .strip_prefix("z(")
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| Error::parse(1, here, format!("value '{v}' is not 1, -1 or z(N,k)")))?;
                let (a, b) = inner.split_once(',').ok_or_else(|| Error::parse(1, here, "z(N,k) needs two arguments"))?;
                let n: u64 = a.trim().parse().map_err(|_| Error::parse(1, here, format!("bad order '{a}'")))?;
                let k: i64 = b.trim().parse().map_err(|_| Error::parse(1, here, format!("bad exponent '{b}'")))?;
                if n == 0 {
                    return Err(Error::parse(1, here, "order must be positive"));
                }
                (n, k)
            }
        };
        if values.iter().any(|v| v.0 == g) {
            return Err(Error::parse(1, here, format!("{} given twice", name.trim())));
        }
        values.push((g, n, k));
    }
    let order = values.iter().fold(1u64, |acc, v| acc.lcm(&v.1));
    let mut exps = vec![0i64; p.generator_count()];
    for (g, n, k) in values {
        exps[g] = k * (order / n) as i64;
    }
    Character::new(order, exps)
}

#[derive(Deserialize)]
struct QuotientSpec {
    #[serde(default)]
    factors: Option<Vec<u64>>,
    images: Vec<Vec<i64>>,
    #[serde(default)]
    transversal: Vec<String>,
    /// Generator names (killing `g^{ord α(g)}`) or words, imposed at every coset.
    #[serde(default)]
    kill: Vec<String>,
}

fn cover(p: &GroupPresentation, spec: &str, factors: Option<Vec<u64>>, simplify: bool) -> Result<GroupPresentation> {
    let text = match spec {
        "builtin:ceva-alpha" => CEVA_ALPHA.to_string(),
        s => read(Path::new(s))?,
    };
    let spec: QuotientSpec = serde_json::from_str(&text).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
    let factors = factors
        .or(spec.factors)
        .ok_or_else(|| Error::InvalidArgument("quotient needs invariant factors (--factors)".into()))?;
    let alpha = FiniteAbelianQuotient::new(factors.clone(), spec.images)?;
    let idx = |s: &str| p.index_of(s).ok_or_else(|| Error::InvalidArgument(format!("unknown generator {s}")));
    let order: Vec<usize> = spec.transversal.iter().map(|s| idx(s)).collect::<Result<_>>()?;
    let c = schreier_cover(p, &alpha, &order)?;
    let mut extra = Vec::new();
    for k in &spec.kill {
        let w = match p.index_of(k) {
            Some(g) => {
                let img = &alpha.images[g];
                let ord = factors.iter().zip(img).fold(1u64, |acc, (&f, &x)| acc.lcm(&(f / f.gcd(&(x.unsigned_abs() % f)))));
                Word::power_of(g, ord as i64)
            }
            None => parse_word(k, p.names())?,
        };
        for coset in 0..c.cosets.len() {
            extra.push(c.rewrite_conjugate(&w, coset)?);
        }
    }
    let k = quotient_by_relators(&c.presentation, &extra)?;
    Ok(if simplify { tietze_simplify(&k, usize::MAX) } else { k })
}

fn jobs(j: Option<usize>) -> usize {
    j.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)).max(1)
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Depth { group, character, method, json } => {
            let p = load_group(&group)?;
            let chi = parse_character(&character, &p)?;
            let engine = DepthEngine::new(&p);
            let report = match method {
                Some(m) => engine.depth(&chi, m)?,
                None => engine.depth_auto(&chi)?,
            };
            if json {
                println!("{}", to_json(&report));
            } else {
                println!("depth {} ({}) for {}", report.depth, report.stratum, chi.render_values());
            }
        }
        Command::Scan { group, order, mask, method, format, jobs: j, budget, include_zero } => {
            let p = load_group(&group)?;
            let mask = match mask {
                Some(names) => {
                    let mut m = vec![false; p.generator_count()];
                    for n in names {
                        let g = p.index_of(&n).ok_or_else(|| Error::InvalidArgument(format!("unknown generator {n}")))?;
                        m[g] = true;
                    }
                    Some(m)
                }
                None => None,
            };
            let opts = ScanOptions { budget, jobs: jobs(j), method, include_zero };
            let scan = torsion_scan(&p, order, mask.as_deref(), &opts)?;
            for n in &scan.notes {
                eprintln!("note: {n}");
            }
            match format {
                Format::Json => println!("{}", to_json(&scan)),
                Format::Csv => print!("{}", scan.to_csv()),
            }
        }
        Command::Cover { group, quotient, factors, no_simplify, name } => {
            let p = load_group(&group)?;
            let k = cover(&p, &quotient, factors, !no_simplify)?;
            print!("{}", render_group_dsl(&k, &name));
        }
        Command::Arrangement { file, affine, name, verbose } => {
            let lines = parse_line_file(&read(&file)?)?;
            let w = wiring_diagram(&lines)?;
            if !affine && w.parallel_pairs > 0 {
                return Err(Error::Arrangement("parallel lines in a projective line file; use --affine".into()));
            }
            if verbose {
                eprintln!("shear {}, {} crossings, {} parallel pairs", w.shear, w.events.len(), w.parallel_pairs);
                for e in &w.events {
                    let ls: Vec<String> = e.lines.iter().map(|l| (l + 1).to_string()).collect();
                    eprintln!("  x = {}: lines {}", e.x, ls.join(" "));
                }
            }
            print!("{}", render_group_dsl(&arrangement_presentation(&w, !affine), &name));
        }
        Command::Pencil { command: PencilCommand::Verify { fixture } } => {
            let fx = load_pencils(&fixture)?;
            let v = verify_pencil_fixture(&fx)?;
            println!("{}", to_json(&v));
            return Ok(v.pencils.iter().all(|p| p.1) && v.bound_holds);
        }
        Command::Pencil { command: PencilCommand::Independence { fixture } } => {
            let fx = load_pencils(&fixture)?;
            let rep = independence_check(&fx.pencils, fx.file.rho.order)?;
            println!("{}", to_json(&rep));
        }
        Command::Fixtures { command: FixtureCommand::List } => {
            println!("groups: {}", BUILTIN_GROUPS.iter().map(|g| format!("builtin:{g}")).collect::<Vec<_>>().join(" "));
            println!("pencils: {}", BUILTIN_PENCILS.iter().map(|g| format!("builtin:{g}")).collect::<Vec<_>>().join(" "));
            println!("quotients: builtin:ceva-alpha");
        }
        Command::Fixtures { command: FixtureCommand::Run { jobs: j } } => {
            return Ok(checks::run_all(jobs(j)));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_parse() { 2 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group() -> GroupPresentation {
        builtin_group("fermat2").unwrap()
    }

    #[test]
    fn character_syntax() {
        let p = group();
        let chi = parse_character("e5=z(2,1)", &p).unwrap();
        assert_eq!((chi.order, chi.exponents.clone()), (2, vec![1, 0, 0, 0, 0]));
        let chi = parse_character("e5=z(3,1), e3_0=-1", &p).unwrap();
        assert_eq!((chi.order, chi.exponents), (6, vec![2, 3, 0, 0, 0]));
        assert!(parse_character("", &p).unwrap().is_trivial());
    }

    #[test]
    fn character_errors() {
        let p = group();
        for bad in ["e9=1", "e5", "e5=z(2)", "e5=2", "e5=z(0,1)", "e5=1,e5=-1"] {
            let e = parse_character(bad, &p).unwrap_err();
            assert!(e.is_parse(), "{bad}: {e}");
        }
    }
}
