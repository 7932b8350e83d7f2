use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cqg_core::element::{AnyElement, BasisKey};
use cqg_core::fusion_data::{fuse_characters, fuse_characters_lossy, CharacterRingElement, FusionEntry};
use cqg_core::instances::{load_instance, load_instance_unchecked, Builtin};
use cqg_core::{l1_algebra, l2_space, verify, Instance, IrrepLabel, QuantumGroupData};

#[derive(Parser, Debug)]
#[command(
    name = "cqg",
    version,
    about = "Harmonic analysis on truncated compact quantum groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the invariant suite; exits 1 if any check fails.
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9, value_parser = positive_tolerance, allow_negative_numbers = true)]
        tolerance: f64,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convolve two element files of the same space (L1 or L2).
    Conv {
        #[command(flatten)]
        instance: InstanceArgs,
        lhs: PathBuf,
        rhs: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a projection to an element file.
    Project {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum)]
        kind: ProjectionKind,
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the irrep table.
    Info {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Print the fusion table, or the product of two characters.
    Fusion {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Irrep labels `a b` to fuse.
        #[arg(num_args = 2, value_names = ["A", "B"])]
        product: Vec<String>,
        /// Accept products that leave the truncation window.
        #[arg(long)]
        lossy: bool,
    },
    /// Write the instance data as JSON.
    Export {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct InstanceArgs {
    /// Built-in name (`s3`, `dual:<group>`, `suq2`, `onplus`) or instance file.
    #[arg(long)]
    instance: String,
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long, default_value_t = 4)]
    level: usize,
    #[arg(long, default_value_t = 3)]
    n: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProjectionKind {
    Beta2,
    Pq,
    Beta1,
    R,
}

fn positive_tolerance(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(format!("tolerance must be positive, got {s}"))
    }
}

impl InstanceArgs {
    /// Files are validated unless `unchecked`, in which case only structural
    /// errors are rejected.
    fn resolve(&self, unchecked: bool) -> anyhow::Result<Instance> {
        if let Some(builtin) = Builtin::parse(&self.instance, self.q, self.level, self.n) {
            return Ok(builtin.build()?);
        }
        let path = Path::new(&self.instance);
        let data = if unchecked {
            load_instance_unchecked(path)
        } else {
            load_instance(path)
        }
        .with_context(|| format!("loading instance `{}`", self.instance))?;
        Ok(Instance::bare(data))
    }
}

fn read_element(g: &QuantumGroupData, path: &Path) -> anyhow::Result<AnyElement> {
    let e = AnyElement::read(path).with_context(|| format!("reading {}", path.display()))?;
    e.check(g)
        .with_context(|| format!("{} does not fit {}", path.display(), g.name()))?;
    Ok(e)
}

fn emit(element: &AnyElement, out: Option<&Path>) -> anyhow::Result<()> {
    println!("space {}", element.space());
    println!("{:<8} {:>4} {:>4} {:>22} {:>22}", "irrep", "row", "col", "re", "im");
    for (BasisKey { irrep, row, col }, c) in element.terms() {
        println!(
            "{:<8} {:>4} {:>4} {:>22.15e} {:>22.15e}",
            irrep.as_str(),
            row,
            col,
            c.re,
            c.im
        );
    }
    if let Some(path) = out {
        element
            .write(path)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn cmd_verify(inst: &Instance, seed: u64, tolerance: f64, out: Option<&Path>) -> anyhow::Result<ExitCode> {
    let report = verify::run_suite(inst, seed, tolerance)?;
    println!("{report}");
    if let Some(path) = out {
        std::fs::write(path, report.to_json_string()?).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_conv(g: &QuantumGroupData, lhs: &Path, rhs: &Path, out: Option<&Path>) -> anyhow::Result<()> {
    let result = match (read_element(g, lhs)?, read_element(g, rhs)?) {
        (AnyElement::L1(f), AnyElement::L1(h)) => AnyElement::L1(l1_algebra::convolve(g, &f, &h)?),
        (AnyElement::L2(x), AnyElement::L2(y)) => AnyElement::L2(l2_space::convolve_l2(g, &x, &y)?),
        (a, b) if a.space() != b.space() => {
            bail!("space mismatch: cannot convolve {} with {}", a.space(), b.space())
        }
        (a, _) => bail!("convolution is defined on L1 and L2 elements, not {}", a.space()),
    };
    emit(&result, out)
}

fn cmd_project(g: &QuantumGroupData, kind: ProjectionKind, input: &Path, out: Option<&Path>) -> anyhow::Result<()> {
    let result = match (kind, read_element(g, input)?) {
        (ProjectionKind::Beta2, AnyElement::L2(x)) => AnyElement::L2(l2_space::beta2_haar(g, &x)?),
        (ProjectionKind::Pq, AnyElement::L2(x)) => AnyElement::L2(l2_space::pq_projection(g, &x)?),
        (ProjectionKind::Beta1, AnyElement::L1(f)) => AnyElement::L1(l1_algebra::beta1(g, &f)?),
        (ProjectionKind::R, AnyElement::Linf(x)) => AnyElement::Linf(l2_space::restrict_r(g, &x)?.to_coefficients(g)?),
        (kind, e) => {
            let wanted = match kind {
                ProjectionKind::Beta2 | ProjectionKind::Pq => "L2",
                ProjectionKind::Beta1 => "L1",
                ProjectionKind::R => "Linf",
            };
            bail!("projection {kind:?} needs an {wanted} element, got {}", e.space())
        }
    };
    emit(&result, out)
}

fn cmd_info(g: &QuantumGroupData) {
    println!("{}  ({} irreps, Kac type: {})", g.name(), g.num_irreps(), g.is_kac());
    println!("{:<8} {:>5} {:>14} {:<9} eigenvalues", "irrep", "dim", "d", "conjugate");
    for (label, info) in g.irreps() {
        let eigen: Vec<String> = info.f_eigenvalues.iter().map(|l| format!("{l}")).collect();
        println!(
            "{:<8} {:>5} {:>14.10} {:<9} {}",
            label.as_str(),
            info.dim,
            info.quantum_dimension(),
            info.conjugate.as_str(),
            eigen.join(" ")
        );
    }
}

fn format_decomposition<'a>(g: &QuantumGroupData, terms: impl Iterator<Item = (&'a IrrepLabel, f64)>) -> String {
    let mut terms: Vec<_> = terms.filter(|(_, m)| *m != 0.0).collect();
    terms.sort_by_key(|(l, _)| g.index_of(l).unwrap_or(usize::MAX));
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(l, m)| if *m == 1.0 { l.to_string() } else { format!("{m}·{l}") })
        .collect::<Vec<_>>()
        .join("+")
}

fn format_entry(g: &QuantumGroupData, entry: &FusionEntry) -> String {
    format_decomposition(g, entry.decomp.iter().map(|(l, m)| (l, f64::from(*m))))
}

fn cmd_fusion(g: &QuantumGroupData, product: &[String], lossy: bool) -> anyhow::Result<()> {
    if let [a, b] = product {
        let (a, b) = (IrrepLabel::from(a.as_str()), IrrepLabel::from(b.as_str()));
        for l in [&a, &b] {
            g.index_of(l)?;
        }
        let (x, y) = (
            CharacterRingElement::character(a.clone()),
            CharacterRingElement::character(b.clone()),
        );
        let (z, truncated) = if lossy {
            fuse_characters_lossy(g, &x, &y)?
        } else {
            (fuse_characters(g, &x, &y)?, false)
        };
        let rhs = format_decomposition(g, z.terms().map(|(l, c)| (l, c.re)));
        println!("{a}·{b} = {rhs}{}", if truncated { "  (truncated)" } else { "" });
        return Ok(());
    }
    for a in g.labels() {
        for b in g.labels() {
            match g.fusion().get(a, b) {
                Some(entry) => println!(
                    "{a}·{b} = {}{}",
                    format_entry(g, entry),
                    if entry.complete { "" } else { "  (incomplete)" }
                ),
                None => println!("{a}·{b} = ?  (missing)"),
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Verify {
            instance,
            seed,
            tolerance,
            out,
        } => cmd_verify(&instance.resolve(true)?, seed, tolerance, out.as_deref()),
        Command::Conv {
            instance,
            lhs,
            rhs,
            out,
        } => {
            cmd_conv(&instance.resolve(false)?.data, &lhs, &rhs, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Project {
            instance,
            kind,
            input,
            out,
        } => {
            cmd_project(&instance.resolve(false)?.data, kind, &input, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Info { instance } => {
            cmd_info(&instance.resolve(false)?.data);
            Ok(ExitCode::SUCCESS)
        }
        Command::Fusion {
            instance,
            product,
            lossy,
        } => {
            cmd_fusion(&instance.resolve(false)?.data, &product, lossy)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { instance, out } => {
            let g = instance.resolve(false)?.data;
            g.save(&out).with_context(|| format!("writing {}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
