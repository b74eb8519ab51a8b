//! Command-line front end.
//!
//! Exit codes: 0 for success or a nonzero result, 1 for a zero or absent
//! result, 2 for errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hstring::certify::{
    build_certificate, example_family, stable_image, Certificate, Factor, Target,
};
use hstring::gradedalg::{DPClass, GeneratorSet};
use hstring::operations::{
    a_count_mode, alpha, composite_op, nontrivial_witness, phi_input, ACountMode,
    CoefficientClass, GroupDescriptor, OpInput, WitnessOutcome,
};
use hstring::oracle::{standard_checks, t3_verify};
use hstring::symhomology::SymClass;

#[derive(Parser)]
#[command(name = "hstring", version, about = "Mod-2 string topology operations of classifying spaces")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Highest degree searched for witnesses.
    #[arg(long, global = true)]
    degree_bound: Option<u32>,
    /// Coefficient group: z2^L | d<4n+2> | t^L | su2 | (G1)x(G2).
    #[arg(long, global = true)]
    group: Option<String>,
    /// JSON file supplying inputs not given as arguments.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// α^G_k(a ⊗ b).
    Alpha {
        #[arg(short)]
        k: Option<usize>,
        /// Class over x1..xk, e.g. "x1*x2^[2]".
        #[arg(short)]
        a: Option<String>,
        /// Class in H_*(BG); defaults to 1.
        #[arg(short)]
        b: Option<String>,
    },
    /// Φ(S_n)(a ⊗ b).
    Phi {
        #[arg(short)]
        n: Option<u64>,
        /// "E(1,2) + E(3)*[1]" or a ∘-word "o(2,5)".
        #[arg(short)]
        a: Option<String>,
        #[arg(short)]
        b: Option<String>,
    },
    /// Φ(a_1) ∘ ⋯ ∘ Φ(a_r)(b); the last factor acts first.
    Compose {
        /// Factor "n:a", repeatable.
        #[arg(short, long = "factor")]
        factors: Vec<String>,
        #[arg(short)]
        b: Option<String>,
    },
    /// Count of bit-disjoint positive matrices with given row and column sums.
    Acount {
        #[arg(long, value_delimiter = ',')]
        rows: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        cols: Vec<u32>,
        /// Exact count instead of parity.
        #[arg(long)]
        exact: bool,
    },
    /// Search for b with α^G_k(a ⊗ b) ≠ 0.
    Witness {
        #[arg(short)]
        k: Option<usize>,
        #[arg(short)]
        a: Option<String>,
    },
    /// Certificate for one target.
    Certify {
        #[arg(long)]
        target: Option<String>,
        #[arg(short, long = "factor")]
        factors: Vec<String>,
    },
    /// Certificate bundle for a bit-disjoint family.
    Family {
        #[arg(long, value_delimiter = ',')]
        u: Vec<u32>,
        /// 1-based image of each index of u.
        #[arg(long, value_delimiter = ',')]
        f: Vec<usize>,
    },
    /// Juxtaposition image μ_*(a_1 × ⋯ × a_r) and stabilization offset.
    StableImage {
        #[arg(short, long = "factor")]
        factors: Vec<String>,
        /// Homology degree k; defaults to the total degree.
        #[arg(short)]
        k: Option<u64>,
    },
    /// Oracle comparisons with a pass/fail line each.
    OracleCheck,
    /// T³ double-complex identity at (n1, n2).
    T3Verify {
        #[arg(long, default_value_t = 0)]
        n1: u32,
        #[arg(long, default_value_t = 0)]
        n2: u32,
    },
}

type Res<T> = Result<T, String>;

// Like println!, but a closed pipe (e.g. `| head`) is not an error.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

struct Ctx {
    json: bool,
    degree_bound: Option<u32>,
    group: Option<String>,
    input: Value,
}

impl Ctx {
    fn field(&self, name: &str) -> Option<&Value> {
        self.input.get(name)
    }

    fn group(&self) -> Res<GroupDescriptor> {
        let spec = match (&self.group, self.field("group")) {
            (Some(g), _) => g.clone(),
            (None, Some(Value::String(g))) => g.clone(),
            _ => return Err("missing --group".into()),
        };
        spec.parse().map_err(|e| format!("{e}"))
    }

    fn number<T: serde::de::DeserializeOwned>(&self, arg: Option<T>, name: &str) -> Res<T> {
        match arg {
            Some(v) => Ok(v),
            None => {
                let v = self.field(name).ok_or_else(|| format!("missing {name}"))?;
                serde_json::from_value::<T>(v.clone()).map_err(|e| format!("{name}: {e}"))
            }
        }
    }

    fn vk_class(&self, arg: &Option<String>, k: usize) -> Res<DPClass> {
        let gens = GeneratorSet::vk(k);
        match (arg, self.field("a")) {
            (Some(t), _) => DPClass::parse(&gens, t).map_err(|e| e.to_string()),
            (None, Some(v)) => {
                let c: DPClass = serde_json::from_value(v.clone()).map_err(|e| format!("a: {e}"))?;
                c.relabel(&gens).map_err(|e| e.to_string())
            }
            _ => Err("missing a".into()),
        }
    }

    fn coefficient(&self, arg: &Option<String>, g: &GroupDescriptor) -> Res<CoefficientClass> {
        match (arg, self.field("b")) {
            (Some(t), _) => CoefficientClass::parse(g, t).map_err(|e| e.to_string()),
            (None, Some(v)) => serde_json::from_value(v.clone()).map_err(|e| format!("b: {e}")),
            _ => Ok(CoefficientClass::unit(g)),
        }
    }

    fn op_input(&self, arg: &Option<String>) -> Res<OpInput> {
        match (arg, self.field("a")) {
            (Some(t), _) => OpInput::parse(t).map_err(|e| e.to_string()),
            (None, Some(v)) => serde_json::from_value(v.clone()).map_err(|e| format!("a: {e}")),
            _ => Err("missing a".into()),
        }
    }

    fn factors(&self, args: &[String]) -> Res<Vec<Factor>> {
        if args.is_empty() {
            return match self.field("factors") {
                Some(v) => serde_json::from_value(v.clone()).map_err(|e| format!("factors: {e}")),
                None => Err("missing --factor".into()),
            };
        }
        args.iter()
            .map(|s| {
                let (n, a) = s.split_once(':').ok_or_else(|| format!("factor {s:?} is not n:a"))?;
                Ok(Factor {
                    n: n.trim().parse().map_err(|_| format!("bad arity in {s:?}"))?,
                    a: OpInput::parse(a).map_err(|e| e.to_string())?,
                })
            })
            .collect()
    }

    fn emit_class(&self, c: &CoefficientClass) -> Res<ExitCode> {
        if self.json {
            out!("{}", serde_json::to_string(c).map_err(|e| e.to_string())?);
        } else {
            out!("{c}");
        }
        Ok(if c.is_zero() { ExitCode::from(1) } else { ExitCode::SUCCESS })
    }

    fn emit_certificates(&self, certs: &[Certificate]) -> Res<ExitCode> {
        if self.json {
            let v = if certs.len() == 1 { json!(certs[0]) } else { json!(certs) };
            out!("{}", serde_json::to_string_pretty(&v).map_err(|e| e.to_string())?);
        } else {
            for c in certs {
                out!("{}: {} is nonzero", c.target, c.class);
                out!(
                    "  witness: G = {}, b = {}, output = {}",
                    c.witness.group, c.witness.b, c.witness.output
                );
                let s = &c.stability;
                out!(
                    "  stable = {}, unstable = {}, not in stabilization image = {}",
                    s.stable, s.unstable, s.not_in_stabilization_image
                );
                if let Some(img) = &s.stable_image {
                    out!("  stable image {} (weight {}, L = {})", img.class, img.weight, img.offset);
                }
                if let Some(v) = &s.vanishing_bound {
                    out!("  vanishes in degree {} once the rank exceeds {}", v.degree, v.rank_above);
                }
            }
        }
        Ok(ExitCode::SUCCESS)
    }
}

fn run(cli: Cli) -> Res<ExitCode> {
    let input = match &cli.global.input {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", p.display()))?
        }
        None => Value::Null,
    };
    let ctx = Ctx {
        json: cli.global.json,
        degree_bound: cli.global.degree_bound,
        group: cli.global.group,
        input,
    };
    match cli.command {
        Command::Alpha { k, a, b } => {
            let g = ctx.group()?;
            let k = ctx.number(k, "k")?;
            let a = ctx.vk_class(&a, k)?;
            let b = ctx.coefficient(&b, &g)?;
            ctx.emit_class(&alpha(&g, k, &a, &b).map_err(|e| e.to_string())?)
        }
        Command::Phi { n, a, b } => {
            let g = ctx.group()?;
            let n = ctx.number(n, "n")?;
            let a = ctx.op_input(&a)?;
            let b = ctx.coefficient(&b, &g)?;
            ctx.emit_class(&phi_input(&g, n, &a, &b).map_err(|e| e.to_string())?)
        }
        Command::Compose { factors, b } => {
            let g = ctx.group()?;
            let factors = ctx.factors(&factors)?;
            let b = ctx.coefficient(&b, &g)?;
            let ops: Vec<(u64, OpInput)> = factors.into_iter().map(|f| (f.n, f.a)).collect();
            ctx.emit_class(&composite_op(&g, &ops, &b).map_err(|e| e.to_string())?)
        }
        Command::Acount { rows, cols, exact } => {
            let mode = if exact { ACountMode::Exact } else { ACountMode::Parity };
            let n = a_count_mode(&rows, &cols, mode);
            if ctx.json {
                out!("{}", json!({"rows": rows, "cols": cols, "exact": exact, "value": n.to_string()}));
            } else {
                out!("{n}");
            }
            Ok(if n == 0 { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Command::Witness { k, a } => {
            let g = ctx.group()?;
            let k = ctx.number(k, "k")?;
            let a = ctx.vk_class(&a, k)?;
            let outcome = nontrivial_witness(&g, k, &a, ctx.degree_bound).map_err(|e| e.to_string())?;
            let (v, text, code) = match outcome {
                WitnessOutcome::Found { b, output } => (
                    json!({"status": "found", "b": b, "output": output}),
                    format!("b = {b}\nα(a ⊗ b) = {output}"),
                    ExitCode::SUCCESS,
                ),
                WitnessOutcome::CertifiedTrivial { reason } => (
                    json!({"status": "trivial", "reason": reason}),
                    format!("trivial: {reason}"),
                    ExitCode::from(1),
                ),
                WitnessOutcome::NotFound { degree_bound } => (
                    json!({"status": "not_found", "degree_bound": degree_bound}),
                    format!("no witness up to degree {degree_bound} (inconclusive)"),
                    ExitCode::from(1),
                ),
            };
            out!("{}", if ctx.json { v.to_string() } else { text });
            Ok(code)
        }
        Command::Certify { target, factors } => {
            let g = ctx.group()?;
            let target: Target = match (target, ctx.field("target")) {
                (Some(t), _) => t.parse()?,
                (None, Some(v)) => serde_json::from_value(v.clone()).map_err(|e| format!("target: {e}"))?,
                _ => return Err("missing --target".into()),
            };
            let factors = ctx.factors(&factors)?;
            match build_certificate(target, &g, &factors, ctx.degree_bound) {
                Ok(c) => ctx.emit_certificates(&[c]),
                Err(hstring::certify::CertifyError::NoWitness { degree_bound }) => {
                    if ctx.json {
                        out!("{}", json!({"status": "inconclusive", "degree_bound": degree_bound}));
                    } else {
                        out!("no witness up to degree {degree_bound} (inconclusive)");
                    }
                    Ok(ExitCode::from(1))
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Family { u, f } => {
            let u = if u.is_empty() { ctx.number(None, "u")? } else { u };
            let f = if f.is_empty() { ctx.number(None, "f")? } else { f };
            let certs = example_family(&u, &f).map_err(|e| e.to_string())?;
            ctx.emit_certificates(&certs)
        }
        Command::StableImage { factors, k } => {
            let factors = ctx.factors(&factors)?;
            let syms: Vec<(u64, SymClass)> = factors
                .iter()
                .map(|f| {
                    f.a.as_sym()
                        .map(|c| (f.n, c))
                        .ok_or_else(|| format!("{} is not in the generator basis", f.a))
                })
                .collect::<Res<_>>()?;
            let k = match k {
                Some(k) => k,
                None => factors
                    .iter()
                    .map(|f| f.a.degree().ok_or("inhomogeneous factor"))
                    .sum::<Result<u64, _>>()?,
            };
            let img = stable_image(&syms, k).map_err(|e| e.to_string())?;
            if ctx.json {
                out!("{}", json!(img));
            } else {
                out!("{} in H_{k}(BΣ_{}), L = {}", img.class, img.weight, img.offset);
            }
            Ok(if img.class.is_zero() { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Command::OracleCheck => {
            let reports = standard_checks();
            for r in &reports {
                if ctx.json {
                    out!("{}", json!(r));
                } else {
                    out!("{} {} {}", if r.pass { "PASS" } else { "FAIL" }, r.check, r.params);
                }
            }
            Ok(if reports.iter().all(|r| r.pass) { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::T3Verify { n1, n2 } => {
            let r = t3_verify(n1, n2);
            if ctx.json {
                out!("{}", json!(r));
            } else {
                out!("d² = 0: {}", r.d_squared_zero);
                out!("t1 t2 e_cube is a cycle: {}", r.fundamental_cycle);
                out!("boundary identity at ({n1}, {n2}): {}", r.boundary_identity);
                out!("Betti numbers of T³: {:?}", r.betti);
            }
            Ok(if r.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
