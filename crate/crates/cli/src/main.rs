//! Command-line front door: instance I/O, invariant computation, spectrum
//! queries, verification suites, and construction of derived structures.
//! Exit codes: 0 success / no violations, 1 suite violations, 2 usage or
//! validation errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cellspec_core::constructions::{finite_support_product, product, PointedPreorder};
use cellspec_core::fposet::{f_poset, AntichainFamily};
use cellspec_core::json::{
    self, pairing, FPosetJson, FspJson, PreorderJson, ProductJson, SpaceJson,
};
use cellspec_core::spectrum::{
    invariant_chain_report, spectrum_set, FamilyCaps, SpectrumMode, SpectrumQuery,
};
use cellspec_core::suites::{run_suite, SuiteOptions};
use cellspec_core::topology::{alexandrov_space, open_poset};
use cellspec_core::Preorder;

#[derive(Parser)]
#[command(name = "cellspec", version)]
#[command(about = "Exact cellular invariants, constructions and spectrum searches for finite preorders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Char,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructKind {
    /// Subset poset of an antichain family over the input preorder
    Fa,
    /// Coordinate-wise product of --input and --with
    Product,
    /// Finite-support product of pointed --factor files
    Fsp,
    /// Down-set space of the input preorder
    Alexandrov,
    /// Poset of nonempty opens of the input space
    Openposet,
}

#[derive(Subcommand)]
enum Command {
    /// Compute c, d, ind_2..ind_nmax, fin-pc and the inequality checks
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named verification suite over its exhaustive grid
    Verify {
        /// One of: tech1, t-family, witness-family, tech2, proj-pullback,
        /// denspec-finite, alexandrov, product-spectrum,
        /// agreement-experiment
        suite: String,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Family-search caps, e.g. families=1000000,members=64
        #[arg(long)]
        caps: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spectrum-membership set of a preorder up to kmax
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        kmax: usize,
        /// Test-poset size bound for oracle mode
        #[arg(long, default_value_t = 4)]
        test_bound: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Char)]
        mode: ModeArg,
        #[arg(long)]
        caps: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a derived structure and write it in its JSON form
    Construct {
        kind: ConstructKind,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Right factor for `product`
        #[arg(long)]
        with: Option<PathBuf>,
        /// Antichain family for `fa`: inline JSON like [[0,1],[1,2]] or
        /// @file
        #[arg(long)]
        family: Option<String>,
        /// Pointed factor files for `fsp` (repeatable)
        #[arg(long)]
        factor: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Analyze { input, nmax, out } => {
            let p = load_preorder(&input)?;
            let report = invariant_chain_report(&p, nmax).map_err(|e| e.to_string())?;
            let ind: Value = report
                .linked_free
                .iter()
                .map(|&(n, i)| (n.to_string(), json!(i)))
                .collect::<serde_json::Map<String, Value>>()
                .into();
            let body = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "seed": 0,
                "caps": FamilyCaps::default(),
                "input": input.display().to_string(),
                "c": report.cellularity,
                "c_witness": report.cellularity_witness,
                "c_oracle": report.cellularity_oracle,
                "d": report.density,
                "d_witness": report.density_witness,
                "ind": ind,
                "pc": report.fin_pc,
                "pc_lower": report.fin_pc_lower,
                "checks": report.checks,
                "denspec": report.denspec,
            });
            write_out(out.as_deref(), &json::emit(&body))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            jobs,
            seed,
            caps,
            out,
        } => {
            let opts = SuiteOptions {
                caps: parse_caps(caps.as_deref())?,
                seed,
                jobs,
            };
            let result = run_suite(&suite, &opts).map_err(|e| e.to_string())?;
            write_out(out.as_deref(), &json::emit(&result))?;
            if result.passed() {
                eprintln!("suite {suite}: 0 violations over {} instances", result.instances);
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!(
                    "suite {suite}: {} violations over {} instances",
                    result.violations.len(),
                    result.instances
                );
                Ok(ExitCode::from(1))
            }
        }
        Command::Spectrum {
            input,
            kmax,
            test_bound,
            mode,
            caps,
            out,
        } => {
            let p = load_preorder(&input)?;
            let mut query = SpectrumQuery::new(1, test_bound).map_err(|e| e.to_string())?;
            query.caps = parse_caps(caps.as_deref())?;
            let mode = match mode {
                ModeArg::Char => SpectrumMode::Char,
                ModeArg::Oracle => SpectrumMode::Oracle,
            };
            let report = spectrum_set(&p, kmax, mode, &query).map_err(|e| e.to_string())?;
            let body = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "seed": 0,
                "caps": query.caps,
                "input": input.display().to_string(),
                "mode": report.mode,
                "kmax": report.kmax,
                "test_bound": report.test_bound,
                "set": report.set,
                "pc": report.fin_pc,
                "indeterminate": report.indeterminate,
                "reports": report.reports,
            });
            write_out(out.as_deref(), &json::emit(&body))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Construct {
            kind,
            input,
            with,
            family,
            factor,
            out,
        } => {
            let text = construct(kind, input, with, family, factor)?;
            write_out(out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn construct(
    kind: ConstructKind,
    input: Option<PathBuf>,
    with: Option<PathBuf>,
    family: Option<String>,
    factor: Vec<PathBuf>,
) -> Result<String, String> {
    match kind {
        ConstructKind::Fa => {
            let base = load_preorder(&required(input, "--input")?)?;
            let spec = family.ok_or("construct fa needs --family")?;
            let members = parse_family_spec(&spec)?;
            let fam = AntichainFamily::new(base, &members).map_err(|e| e.to_string())?;
            let fp = f_poset(&fam).map_err(|e| e.to_string())?;
            Ok(json::emit(&FPosetJson::from(&fp)))
        }
        ConstructKind::Product => {
            let left = load_preorder(&required(input, "--input")?)?;
            let right = load_preorder(&required(with, "--with")?)?;
            let prod = product(&left, &right).map_err(|e| e.to_string())?;
            Ok(json::emit(&ProductJson {
                size: prod.size(),
                leq: prod.pairs(),
                closed: true,
                pairing: pairing(left.size(), right.size()),
            }))
        }
        ConstructKind::Fsp => {
            if factor.is_empty() {
                return Err("construct fsp needs at least one --factor".to_string());
            }
            let factors: Vec<PointedPreorder> = factor
                .iter()
                .map(|f| {
                    let p = load_preorder(f)?;
                    PointedPreorder::detect(p).map_err(|e| format!("{}: {e}", f.display()))
                })
                .collect::<Result<_, String>>()?;
            let fsp = finite_support_product(&factors).map_err(|e| e.to_string())?;
            Ok(json::emit(&FspJson {
                size: fsp.order.size(),
                leq: fsp.order.pairs(),
                closed: true,
                factors: factors.iter().map(|f| f.order().size()).collect(),
                tops: factors.iter().map(|f| f.top()).collect(),
                supports: fsp.supports.clone(),
                pairing: "index = sum over i of coord_i * product of |P_j| for j > i"
                    .to_string(),
            }))
        }
        ConstructKind::Alexandrov => {
            let p = load_preorder(&required(input, "--input")?)?;
            let space = alexandrov_space(&p).map_err(|e| e.to_string())?;
            Ok(json::emit(&SpaceJson::from(&space)))
        }
        ConstructKind::Openposet => {
            let path = required(input, "--input")?;
            let text = fs::read_to_string(&path)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            let space = json::parse::<SpaceJson>(&text)
                .and_then(|s| s.to_space())
                .map_err(|e| format!("{}: {e}", path.display()))?;
            let p = open_poset(&space).map_err(|e| e.to_string())?;
            Ok(json::emit(&PreorderJson::from(&p)))
        }
    }
}

fn required(path: Option<PathBuf>, flag: &str) -> Result<PathBuf, String> {
    path.ok_or_else(|| format!("this construct kind needs {flag}"))
}

fn load_preorder(path: &Path) -> Result<Preorder, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    json::parse_preorder(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Inline JSON or @file indirection.
fn parse_family_spec(spec: &str) -> Result<Vec<Vec<usize>>, String> {
    let text = if let Some(path) = spec.strip_prefix('@') {
        fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?
    } else {
        spec.to_string()
    };
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

/// families=F,members=M
fn parse_caps(spec: Option<&str>) -> Result<FamilyCaps, String> {
    let mut caps = FamilyCaps::default();
    let Some(spec) = spec else {
        return Ok(caps);
    };
    for part in spec.split(',') {
        match part.split_once('=') {
            Some(("families", v)) => {
                caps.families = v.parse().map_err(|_| format!("bad families cap: {v}"))?
            }
            Some(("members", v)) => {
                caps.members = v.parse().map_err(|_| format!("bad members cap: {v}"))?
            }
            _ => return Err(format!("bad caps entry '{part}', expected families=F,members=M")),
        }
    }
    Ok(caps)
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cellspec_core::suites::SUITE_NAMES;

    #[test]
    fn caps_parsing() {
        let caps = parse_caps(Some("families=10,members=2")).unwrap();
        assert_eq!((caps.families, caps.members), (10, 2));
        assert!(parse_caps(Some("nope=1")).is_err());
        assert_eq!(parse_caps(None).unwrap(), FamilyCaps::default());
    }

    #[test]
    fn suite_names_are_exposed() {
        assert!(SUITE_NAMES.contains(&"tech1"));
        assert_eq!(SUITE_NAMES.len(), 9);
    }
}
