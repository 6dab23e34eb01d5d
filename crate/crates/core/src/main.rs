//! Command-line interface over the fusion, quantum-dimension, braiding, and coset modules.

use clap::{Args, Parser, Subcommand, ValueEnum};
use mmfusion::braiding::{
    braiding_entry, verify_nonzero_lemmas, BraidContext, RQuery, ReductionPolicy,
};
use mmfusion::exactnum::CycNumber;
use mmfusion::fusion::{
    affine_sl2_fusion, display_sum, minimal_fusion, three_a_ring, FormalSum, FusionRing,
};
use mmfusion::gko::{branch_to_json, gko_branch};
use mmfusion::kac::{self, KacLabel};
use mmfusion::qdim::{global_dim, pf_qdim, qdim_report};
use mmfusion::sixa::{sign_solutions, sigma_orbit, u1_ring, SixA, StructureConstants};
use serde_json::{json, Value};
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::OnceLock;

#[derive(Parser)]
#[command(name = "mmfusion", version, about = "Exact fusion rings, braiding, and coset branching for unitary minimal models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output to a file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal-model weight tables and fusion products.
    Mm {
        #[command(subcommand)]
        cmd: MmCmd,
    },
    /// Level-m affine sl2 fusion products.
    Affine {
        #[command(subcommand)]
        cmd: AffineCmd,
    },
    /// Quantum dimensions of a fusion ring.
    Qdim(QdimArgs),
    /// Global dimension of a fusion ring.
    Glob(GlobArgs),
    /// Exact braiding r-matrices and matrix entries.
    Braid {
        #[command(subcommand)]
        cmd: BraidCmd,
    },
    /// Coset branching of affine modules.
    Gko {
        #[command(subcommand)]
        cmd: GkoCmd,
    },
    /// The 6A extension algebra and its module theory.
    Sixa {
        #[command(subcommand)]
        cmd: SixaCmd,
    },
}

#[derive(Subcommand)]
enum MmCmd {
    /// List all highest weights of the series-p minimal model.
    Weights {
        /// Series parameter p >= 2.
        #[arg(long)]
        p: u64,
        /// Emit JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Fuse two Kac labels, written as i',i.
    Fuse {
        /// Series parameter p >= 2.
        #[arg(long)]
        p: u64,
        /// First Kac label.
        a: String,
        /// Second Kac label.
        b: String,
        /// Emit JSON instead of a line.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum AffineCmd {
    /// Fuse two level-m labels.
    Fuse {
        /// Level m >= 1.
        #[arg(long)]
        m: u64,
        /// First label, 0..m.
        j: u64,
        /// Second label, 0..m.
        k: u64,
        /// Emit JSON instead of a line.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct QdimArgs {
    /// Ring selector: mm:<p>, affine:<m>, threeA, u1, or sixa.
    #[arg(long)]
    ring: String,
    /// Restrict to one label, matched against its rendered name.
    #[arg(long)]
    label: Option<String>,
    /// Emit JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GlobArgs {
    /// Ring selector: mm:<p>, affine:<m>, threeA, u1, or sixa.
    #[arg(long)]
    ring: String,
    /// Emit JSON instead of a line.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    /// Reduce the first tensor slot, smallest admissible index.
    MfirstMin,
    /// Reduce the first tensor slot, largest admissible index.
    MfirstMax,
    /// Reduce the second tensor slot, smallest admissible index.
    NfirstMin,
    /// Reduce the second tensor slot, largest admissible index.
    NfirstMax,
}

impl PolicyArg {
    fn to_policy(self) -> ReductionPolicy {
        match self {
            PolicyArg::MfirstMin => ReductionPolicy::MFirstMin,
            PolicyArg::MfirstMax => ReductionPolicy::MFirstMax,
            PolicyArg::NfirstMin => ReductionPolicy::NFirstMin,
            PolicyArg::NfirstMax => ReductionPolicy::NFirstMax,
        }
    }

    fn name(self) -> &'static str {
        match self {
            PolicyArg::MfirstMin => "mfirst-min",
            PolicyArg::MfirstMax => "mfirst-max",
            PolicyArg::NfirstMin => "nfirst-min",
            PolicyArg::NfirstMax => "nfirst-max",
        }
    }
}

#[derive(Subcommand)]
enum BraidCmd {
    /// Evaluate one r-matrix element r(a,m,n,c)_{b,d}.
    R {
        /// Modulus parameter p >= 2.
        #[arg(long)]
        p: u64,
        /// Outer indices a, m, n, c.
        #[arg(num_args = 4, value_names = ["A", "M", "N", "C"])]
        outer: Vec<u64>,
        /// Row index b.
        #[arg(long)]
        b: u64,
        /// Column index d.
        #[arg(long)]
        d: u64,
        /// Reduction policy.
        #[arg(long, value_enum, default_value = "mfirst-min")]
        policy: PolicyArg,
        /// Emit JSON instead of lines.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate one braiding-matrix entry from six Kac labels.
    Entry {
        /// Series parameter p >= 2.
        #[arg(long)]
        p: u64,
        /// Kac labels alpha, beta, gamma, delta, written as i',i.
        #[arg(num_args = 4, value_names = ["ALPHA", "BETA", "GAMMA", "DELTA"])]
        labels: Vec<String>,
        /// Row Kac label epsilon.
        #[arg(long)]
        eps: String,
        /// Column Kac label zeta.
        #[arg(long)]
        zeta: String,
        /// Emit JSON instead of lines.
        #[arg(long)]
        json: bool,
    },
    /// Verify the four non-vanishing braiding entries at p = 7.
    Lemmas {
        /// Emit JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum GkoCmd {
    /// Decompose L(1,eps) x L(m,n) over the coset pair.
    Branch {
        /// Level m >= 1.
        #[arg(long)]
        m: u64,
        /// Parity of the level-1 factor, 0 or 1.
        #[arg(long)]
        eps: u64,
        /// Level-m label, 0..m.
        #[arg(long)]
        n: u64,
        /// Emit JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Run the four realization chains against the 14-module list.
    Realize {
        /// Emit JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum SixaCmd {
    /// List the 14 modules, their quantum dimensions, and the completeness check.
    Classify {
        /// Emit JSON instead of tables.
        #[arg(long)]
        json: bool,
    },
    /// Print the full 14 x 14 fusion table with its closure certificate.
    FusionTable {
        /// Emit JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Enumerate structure-constant sign solutions and their twist orbit.
    Uniqueness {
        /// Emit JSON instead of lines.
        #[arg(long)]
        json: bool,
    },
}

fn parse_kac(s: &str) -> Result<KacLabel, String> {
    let parts = s
        .split_once("',")
        .ok_or_else(|| format!("expected a Kac label written as i',i, got {s:?}"))?;
    let i_prime: u64 = parts
        .0
        .trim()
        .parse()
        .map_err(|_| format!("bad first Kac index in {s:?}"))?;
    let i: u64 = parts
        .1
        .trim()
        .parse()
        .map_err(|_| format!("bad second Kac index in {s:?}"))?;
    Ok(KacLabel::new(i_prime, i))
}

fn parse_kac_in_range(s: &str, p: u64) -> Result<KacLabel, String> {
    let label = parse_kac(s)?;
    if !kac::label_in_range(p, label) {
        return Err(format!("label {label} is outside the p = {p} table"));
    }
    Ok(label)
}

fn build_ring(selector: &str) -> Result<FusionRing, String> {
    if let Some(p) = selector.strip_prefix("mm:") {
        let p: u64 = p.parse().map_err(|_| format!("bad series parameter {p:?}"))?;
        return minimal_fusion(p).map_err(|e| e.to_string());
    }
    if let Some(m) = selector.strip_prefix("affine:") {
        let m: u64 = m.parse().map_err(|_| format!("bad level {m:?}"))?;
        return affine_sl2_fusion(m).map_err(|e| e.to_string());
    }
    match selector {
        "threeA" => Ok(three_a_ring()),
        "u1" => Ok(u1_ring()),
        "sixa" => {
            let algebra = SixA::new().map_err(|e| e.to_string())?;
            Ok(algebra.fusion_table_14().map_err(|e| e.to_string())?.ring)
        }
        _ => Err(format!(
            "unknown ring selector {selector:?}; expected mm:<p>, affine:<m>, threeA, u1, or sixa"
        )),
    }
}

fn sum_json(ring: &FusionRing, sum: &FormalSum) -> Value {
    Value::Array(
        sum.iter()
            .map(|(&k, &mult)| {
                json!({"label": ring.labels[k].to_string(), "multiplicity": mult})
            })
            .collect(),
    )
}

static OUT_PATH: OnceLock<PathBuf> = OnceLock::new();

fn print_value(json_mode: bool, value: &Value, human: &str) {
    let rendered = if json_mode {
        serde_json::to_string_pretty(value).expect("serializable")
    } else {
        human.to_string()
    };
    if let Some(path) = OUT_PATH.get() {
        if let Err(e) = std::fs::write(path, format!("{rendered}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            std::process::exit(1);
        }
        return;
    }
    let mut out = io::stdout().lock();
    if writeln!(out, "{rendered}").is_err() {
        std::process::exit(0);
    }
}

fn cyc_json(value: &CycNumber) -> Value {
    let numeric = value.embed_numeric();
    json!({
        "exact": value.to_string(),
        "re": numeric.re_f64(),
        "im": numeric.im_f64(),
        "error_bound": numeric.error_bound,
        "is_zero": value.is_zero(),
    })
}

fn cyc_human(value: &CycNumber) -> String {
    let numeric = value.embed_numeric();
    format!(
        "exact   {}\nnumeric {:+.15} {:+.15}i (err <= {:.1e})",
        value,
        numeric.re_f64(),
        numeric.im_f64(),
        numeric.error_bound
    )
}

fn run_mm(cmd: MmCmd) -> Result<(), String> {
    match cmd {
        MmCmd::Weights { p, json } => {
            let table = kac::kac_table(p).map_err(|e| e.to_string())?;
            let c = kac::central_charge(p).map_err(|e| e.to_string())?;
            let rows: Vec<Value> = table
                .iter()
                .map(|(l, h)| json!({"label": l.to_string(), "weight": h.to_string()}))
                .collect();
            let value = json!({"p": p, "central_charge": c.to_string(), "weights": rows});
            let mut human = format!("p = {p}, c = {c}");
            for (l, h) in &table {
                human.push_str(&format!("\nh({l}) = {h}"));
            }
            print_value(json, &value, &human);
        }
        MmCmd::Fuse { p, a, b, json } => {
            let ring = minimal_fusion(p).map_err(|e| e.to_string())?;
            let la = kac::canonical(p, parse_kac_in_range(&a, p)?);
            let lb = kac::canonical(p, parse_kac_in_range(&b, p)?);
            let find = |l: KacLabel| {
                ring.find_by_name(&l.to_string())
                    .ok_or_else(|| format!("label {l} is not in the p = {p} table"))
            };
            let (ia, ib) = (find(la)?, find(lb)?);
            let product = ring.fuse_labels(ia, ib);
            let value = json!({
                "p": p,
                "a": la.to_string(),
                "b": lb.to_string(),
                "result": sum_json(&ring, &product),
            });
            let human = format!("{la} x {lb} = {}", display_sum(&ring, &product));
            print_value(json, &value, &human);
        }
    }
    Ok(())
}

fn run_affine(cmd: AffineCmd) -> Result<(), String> {
    let AffineCmd::Fuse { m, j, k, json } = cmd;
    let ring = affine_sl2_fusion(m).map_err(|e| e.to_string())?;
    if j > m || k > m {
        return Err(format!("labels must lie in 0..{m}"));
    }
    let product = ring.fuse_labels(j as usize, k as usize);
    let value = json!({
        "m": m,
        "j": j,
        "k": k,
        "result": sum_json(&ring, &product),
    });
    let human = format!("{j} x {k} = {}", display_sum(&ring, &product));
    print_value(json, &value, &human);
    Ok(())
}

fn run_qdim(args: QdimArgs) -> Result<(), String> {
    let ring = build_ring(&args.ring)?;
    match args.label {
        Some(label) => {
            let idx = ring
                .find_by_name(&label)
                .ok_or_else(|| format!("no label named {label:?} in ring {}", args.ring))?;
            let q = pf_qdim(&ring, idx).map_err(|e| e.to_string())?;
            let value = json!({
                "ring": args.ring,
                "label": label,
                "value": q.value,
                "bound": q.bound,
            });
            let human = format!("qdim({label}) = {q}");
            print_value(args.json, &value, &human);
        }
        None => {
            let report = qdim_report(&ring).map_err(|e| e.to_string())?;
            let value = serde_json::to_value(&report).expect("serializable");
            let mut human = String::new();
            for (label, q) in report.labels.iter().zip(&report.qdims) {
                human.push_str(&format!("qdim({label}) = {q}\n"));
            }
            human.push_str(&format!("glob = {}\n", report.global));
            for cert in &report.algebraic_certificates {
                human.push_str(&format!(
                    "[{}] {} (residual {:.1e}, tolerance {:.1e})\n",
                    if cert.passed { "pass" } else { "FAIL" },
                    cert.name,
                    cert.residual,
                    cert.tolerance
                ));
            }
            print_value(args.json, &value, human.trim_end());
        }
    }
    Ok(())
}

fn run_glob(args: GlobArgs) -> Result<(), String> {
    let ring = build_ring(&args.ring)?;
    let g = global_dim(&ring).map_err(|e| e.to_string())?;
    let value = json!({"ring": args.ring, "value": g.value, "bound": g.bound});
    let human = format!("glob = {g}");
    print_value(args.json, &value, &human);
    Ok(())
}

fn run_braid(cmd: BraidCmd) -> Result<(), String> {
    match cmd {
        BraidCmd::R {
            p,
            outer,
            b,
            d,
            policy,
            json,
        } => {
            let [a, m, n, c]: [u64; 4] = outer
                .try_into()
                .map_err(|_| "expected four outer indices a m n c".to_string())?;
            let ctx = BraidContext::new(p).map_err(|e| e.to_string())?;
            let query = RQuery::new(a, m, n, c, b, d);
            let value = ctx
                .r_matrix_with(query, policy.to_policy())
                .map_err(|e| e.to_string())?;
            let payload = json!({
                "p": p,
                "query": query.to_string(),
                "policy": policy.name(),
                "value": cyc_json(&value),
            });
            let human = format!("{query} at p = {p} ({})\n{}", policy.name(), cyc_human(&value));
            print_value(json, &payload, &human);
        }
        BraidCmd::Entry {
            p,
            labels,
            eps,
            zeta,
            json,
        } => {
            let labels: Vec<KacLabel> = labels
                .iter()
                .map(|s| parse_kac_in_range(s, p))
                .collect::<Result<_, _>>()?;
            let [alpha, beta, gamma, delta]: [KacLabel; 4] = labels
                .try_into()
                .map_err(|_| "expected four Kac labels alpha beta gamma delta".to_string())?;
            let eps = parse_kac_in_range(&eps, p)?;
            let zeta = parse_kac_in_range(&zeta, p)?;
            let ctx = BraidContext::new(p).map_err(|e| e.to_string())?;
            let value = braiding_entry(&ctx, alpha, beta, gamma, delta, eps, zeta)
                .map_err(|e| e.to_string())?;
            let name = format!("(B~_{{{alpha},{beta}}}^{{{gamma},{delta}}})_{{{eps},{zeta}}}");
            let payload = json!({
                "p": p,
                "entry": name,
                "value": cyc_json(&value),
            });
            let human = format!("{name} at p = {p}\n{}", cyc_human(&value));
            print_value(json, &payload, &human);
        }
        BraidCmd::Lemmas { json } => {
            let ctx = BraidContext::new(7).map_err(|e| e.to_string())?;
            let report = verify_nonzero_lemmas(&ctx).map_err(|e| e.to_string())?;
            let value = serde_json::to_value(&report).expect("serializable");
            let mut human = String::new();
            for e in &report.entries {
                human.push_str(&format!(
                    "{} -> {}\n  numeric {:+.15} {:+.15}i, nonzero: {}, closed form agrees: {} (distance {:.1e})\n",
                    e.name,
                    e.reduced,
                    e.numeric[0],
                    e.numeric[1],
                    e.nonzero,
                    e.closed_form_agrees,
                    e.closed_form_distance
                ));
            }
            human.push_str(&format!("all nonzero: {}", report.all_nonzero()));
            print_value(json, &value, &human);
        }
    }
    Ok(())
}

fn run_gko(cmd: GkoCmd) -> Result<(), String> {
    match cmd {
        GkoCmd::Branch { m, eps, n, json } => {
            let sum = gko_branch(m, eps, n).map_err(|e| e.to_string())?;
            let value = json!({
                "m": m,
                "eps": eps,
                "n": n,
                "terms": branch_to_json(&sum),
            });
            let mut human = format!("L(1,{eps}) x L({m},{n}) =");
            for t in &sum {
                human.push_str(&format!(
                    "\n  (p = {}, {}, h = {}) x L({},{})",
                    t.p, t.coset, t.weight, t.level, t.affine
                ));
                if t.multiplicity != 1 {
                    human.push_str(&format!(" x{}", t.multiplicity));
                }
            }
            print_value(json, &value, &human);
        }
        GkoCmd::Realize { json } => {
            let algebra = SixA::new().map_err(|e| e.to_string())?;
            let results = algebra.realize_all().map_err(|e| e.to_string())?;
            let value = Value::Array(
                results
                    .iter()
                    .map(|(name, r)| {
                        json!({"case": name, "report": r.to_json()})
                    })
                    .collect(),
            );
            let mut human = String::new();
            for (name, r) in &results {
                human.push_str(&format!(
                    "{name}: matched = {}, total multiplicity = {}\n",
                    r.matched, r.total_multiplicity
                ));
                for line in &r.missing {
                    human.push_str(&format!("  missing {line}\n"));
                }
                for line in &r.extra {
                    human.push_str(&format!("  extra {line}\n"));
                }
            }
            print_value(json, &value, human.trim_end());
        }
    }
    Ok(())
}

fn run_sixa(cmd: SixaCmd) -> Result<(), String> {
    match cmd {
        SixaCmd::Classify { json } => {
            let algebra = SixA::new().map_err(|e| e.to_string())?;
            let relations = algebra.verify_summand_relations().map_err(|e| e.to_string())?;
            let table = algebra.qdim_table();
            let report = algebra.classification_check().map_err(|e| e.to_string())?;
            let value = json!({
                "modules": algebra.modules_to_json(),
                "summand_relations": serde_json::to_value(&relations).expect("serializable"),
                "qdim_table": serde_json::to_value(&table).expect("serializable"),
                "classification": serde_json::to_value(&report).expect("serializable"),
            });
            let mut human = String::new();
            for m in &algebra.modules {
                let parts: Vec<String> = m
                    .summands
                    .iter()
                    .map(|(a, b)| format!("[{a}, {b}]"))
                    .collect();
                human.push_str(&format!("{} = {}\n", m.name, parts.join(" + ")));
            }
            human.push('\n');
            for row in &table {
                human.push_str(&format!(
                    "qdim({}) = {:.12} = {}{}\n",
                    row.module,
                    row.value.value,
                    row.symbolic,
                    if row.typo {
                        format!(" (printed as {}, flagged as a typo)", row.printed)
                    } else {
                        String::new()
                    }
                ));
            }
            human.push_str(&format!(
                "\nsum of squared qdims = {:.12}\nglob(U) via ambient quotient = {:.12}\nglob(U) via product form = {:.12}\ncomplete: {}",
                report.sum_of_squares, report.glob_u, report.glob_u_product_form, report.passed
            ));
            print_value(json, &value, &human);
        }
        SixaCmd::FusionTable { json } => {
            let algebra = SixA::new().map_err(|e| e.to_string())?;
            let table = algebra.fusion_table_14().map_err(|e| e.to_string())?;
            let closure = algebra.closure_check().map_err(|e| e.to_string())?;
            table.ring.check_ring_axioms().map_err(|e| e.to_string())?;
            let value = json!({
                "table": table.to_json(),
                "closure": serde_json::to_value(&closure).expect("serializable"),
            });
            let mut human = String::new();
            for line in &closure.cases {
                human.push_str(line);
                human.push('\n');
            }
            human.push_str(&format!(
                "\npairs checked: {}\nall closed: {}\nself dual: {}\ncharacter residual: {:.1e}\npassed: {}",
                closure.pairs_checked,
                closure.all_closed,
                closure.self_dual,
                closure.qdim_character_residual,
                closure.passed
            ));
            print_value(json, &value, &human);
        }
        SixaCmd::Uniqueness { json } => {
            let solutions = sign_solutions();
            let reference = StructureConstants {
                lambda: 1,
                mu: 1,
                gamma: 1,
            };
            let mut orbit: Vec<StructureConstants> = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
                .into_iter()
                .map(|(s2, s3)| sigma_orbit(reference, s2, s3))
                .collect();
            orbit.sort();
            let mut sorted = solutions.clone();
            sorted.sort();
            let matches = orbit == sorted;
            let value = json!({
                "solutions": serde_json::to_value(&solutions).expect("serializable"),
                "orbit_of_reference": serde_json::to_value(&orbit).expect("serializable"),
                "orbit_matches": matches,
            });
            let mut human = String::new();
            for s in &solutions {
                human.push_str(&format!(
                    "(lambda, mu, gamma) = ({}, {}, {})\n",
                    s.lambda, s.mu, s.gamma
                ));
            }
            human.push_str(&format!(
                "solutions: {}\ntwist orbit of (1, 1, 1) matches: {}",
                solutions.len(),
                matches
            ));
            print_value(json, &value, &human);
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Mm { cmd } => run_mm(cmd),
        Command::Affine { cmd } => run_affine(cmd),
        Command::Qdim(args) => run_qdim(args),
        Command::Glob(args) => run_glob(args),
        Command::Braid { cmd } => run_braid(cmd),
        Command::Gko { cmd } => run_gko(cmd),
        Command::Sixa { cmd } => run_sixa(cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(path) = cli.out.clone() {
        let _ = OUT_PATH.set(path);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
