//! Argument definitions and command dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multiform::boxvc::{self, LabelArray};
use multiform::exterior::{self, WedgeVector};
use multiform::ffla::Fp;
use multiform::mform::{self, AlternatingForm, DEFAULT_BUDGET};
use multiform::structure;
use multiform::typecount::{self, TypeCountReport};
use multiform::{conncomp, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::experiments;
use crate::input::{self, TypesSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "multiform",
    version,
    about = "Alternating forms over prime fields, VC_k combinatorics and type counting"
)]
struct Cli {
    /// Worker threads (0 = one per core); results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// CSV instead of JSON where a command supports it.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    group: Group,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Alternating forms and their extensions.
    #[command(subcommand)]
    Form(FormCmd),
    /// Substructures, invariants and partial isomorphisms.
    #[command(subcommand)]
    Struct(StructCmd),
    /// Shattering and VC_k dimension.
    #[command(subcommand)]
    Vc(VcCmd),
    /// Type counting.
    #[command(subcommand)]
    Types(TypesCmd),
    /// Subspaces cut out by a form.
    #[command(subcommand)]
    Conn(ConnCmd),
    /// Seeded batch experiments.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Zero,
    Volume,
    Symplectic,
    Random,
}

#[derive(Args, Debug, Clone)]
struct FormArgs {
    /// Form JSON file.
    #[arg(long, conflicts_with = "kind")]
    form: Option<PathBuf>,
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Replace the form by the top of its certified tower after this many steps.
    #[arg(long)]
    tower_steps: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct TargetArgs {
    #[arg(long, conflicts_with = "target_kind")]
    target_form: Option<PathBuf>,
    #[arg(long, value_enum)]
    target_kind: Option<Kind>,
    #[arg(long)]
    target_p: Option<u32>,
    #[arg(long)]
    target_n: Option<usize>,
    #[arg(long)]
    target_d: Option<usize>,
    #[arg(long)]
    target_seed: Option<u64>,
    #[arg(long)]
    target_tower_steps: Option<usize>,
}

impl TargetArgs {
    fn as_form_args(&self) -> FormArgs {
        FormArgs {
            form: self.target_form.clone(),
            kind: self.target_kind,
            p: self.target_p,
            n: self.target_n,
            d: self.target_d,
            seed: self.target_seed,
            tower_steps: self.target_tower_steps,
        }
    }
}

#[derive(Subcommand, Debug)]
enum FormCmd {
    /// Evaluate on n vectors.
    Eval {
        #[command(flatten)]
        f: FormArgs,
        #[arg(long = "vec")]
        vecs: Vec<String>,
    },
    /// Basis of the kernel of the pairing map on (n-1)-wedges.
    Radical {
        #[command(flatten)]
        f: FormArgs,
    },
    Nondeg {
        #[command(flatten)]
        f: FormArgs,
    },
    Generic {
        #[command(flatten)]
        f: FormArgs,
    },
    /// Dual tuples for the wedges of a basis.
    Dual {
        #[command(flatten)]
        f: FormArgs,
        #[arg(long = "vec")]
        vecs: Vec<String>,
    },
    /// A vector with prescribed pairings, outside a span.
    Findw {
        #[command(flatten)]
        f: FormArgs,
        /// Wedge of ';'-separated vectors; repeat per wedge.
        #[arg(long = "wedge")]
        wedges: Vec<String>,
        /// Wedge vectors as a JSON list.
        #[arg(long)]
        wedges_file: Option<PathBuf>,
        /// Comma-separated pairing targets.
        #[arg(long, default_value = "")]
        targets: String,
        #[arg(long = "u")]
        u: Vec<String>,
    },
    /// One extension step.
    Extend {
        #[command(flatten)]
        f: FormArgs,
    },
    /// Certified tower of extension steps.
    Tower {
        #[command(flatten)]
        f: FormArgs,
        #[arg(long)]
        steps: usize,
    },
}

#[derive(Subcommand, Debug)]
enum StructCmd {
    Generate {
        #[command(flatten)]
        f: FormArgs,
        #[arg(long = "vec")]
        vecs: Vec<String>,
    },
    Invariant {
        #[command(flatten)]
        f: FormArgs,
        #[arg(long = "vec")]
        vecs: Vec<String>,
    },
    Equiv {
        #[command(flatten)]
        f: FormArgs,
        #[command(flatten)]
        t: TargetArgs,
        #[arg(long = "vec")]
        vecs: Vec<String>,
        #[arg(long = "target-vec")]
        target_vecs: Vec<String>,
    },
    /// Embed the substructure generated by the vectors into the target.
    Embed {
        #[command(flatten)]
        f: FormArgs,
        #[command(flatten)]
        t: TargetArgs,
        #[arg(long = "vec")]
        vecs: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
enum VcCmd {
    Shatter {
        #[arg(long)]
        family: PathBuf,
        /// Parts separated by ';', e.g. "0,1;2,3".
        #[arg(long = "box")]
        bx: String,
    },
    Dim {
        #[arg(long)]
        family: PathBuf,
    },
    /// Lexicographically first shattered d-box.
    Sauer {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        d: usize,
    },
    Badgraph {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        /// Report the size and type-count claims instead of the graph.
        #[arg(long)]
        check: bool,
    },
    Randgraph {
        /// Comma-separated part sizes.
        #[arg(long)]
        part_sizes: String,
        #[arg(long)]
        seed: u64,
        /// Also score extension demands of this size.
        #[arg(long)]
        demand: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Monochromatic sub-box search.
    Ramsey {
        /// Label array JSON.
        #[arg(long, conflicts_with = "sizes")]
        labels: Option<PathBuf>,
        /// Random labels on an array of these sizes.
        #[arg(long)]
        sizes: Option<String>,
        #[arg(long, default_value_t = 2)]
        colors: u32,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        target: String,
    },
}

#[derive(Subcommand, Debug)]
enum TypesCmd {
    Count {
        #[arg(long)]
        spec: PathBuf,
    },
    Dagger {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Truth table of a composed relation.
    Compose {
        #[arg(long)]
        spec: PathBuf,
    },
    Arrayfam {
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum ConnCmd {
    Perp {
        #[command(flatten)]
        f: FormArgs,
        #[arg(long = "vec")]
        vecs: Vec<String>,
    },
    Ginfty {
        #[command(flatten)]
        f: FormArgs,
        #[arg(long = "vec")]
        vecs: Vec<String>,
    },
    Identity {
        #[command(flatten)]
        f: FormArgs,
        /// One part as ';'-separated vectors; repeat n times.
        #[arg(long = "part")]
        parts: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
enum ExperimentCmd {
    /// Part sizes and window type counts of bad hypergraphs.
    Badgraph {
        /// Triples "k,d,n" separated by ';'.
        #[arg(long, default_value = "2,1,2;2,2,2;2,1,3;3,1,2")]
        params: String,
    },
    Sauer {
        #[arg(long, default_value_t = 10)]
        universe: usize,
        /// Extremal family of subsets of at most this size.
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    Obstruction {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long, default_value_t = 1000)]
        random: usize,
        #[arg(long)]
        seed: u64,
    },
    Chain {
        /// Triples "p,n,d0" separated by ';'.
        #[arg(long, default_value = "2,2,2;2,3,2;3,2,1")]
        params: String,
        #[arg(long, default_value_t = 3)]
        steps: usize,
        #[arg(long, default_value_t = 100)]
        wedges: usize,
        #[arg(long)]
        seed: u64,
    },
    Qe {
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long)]
        seed: u64,
    },
    Identity {
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long)]
        seed: u64,
    },
    DaggerSanity {
        #[arg(long, default_value_t = 0.2)]
        epsilon: f64,
    },
    Composition {
        #[arg(long, default_value = "3,4")]
        ns: String,
        #[arg(long, default_value = "2,3")]
        ks: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        d_exp: u32,
        #[arg(long, default_value_t = 0.2)]
        epsilon: f64,
        #[arg(long)]
        seed: u64,
    },
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
enum Failure {
    Domain(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = std::result::Result<Output, Failure>;

enum Output {
    Json(Value),
    Text(String),
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> std::result::Result<T, Failure> {
    v.ok_or_else(|| usage(format!("missing --{flag}")))
}

fn budget() -> std::result::Result<u128, Failure> {
    match std::env::var("MULTIFORM_BUDGET") {
        Ok(s) => s.trim().parse().map_err(|_| {
            usage(format!(
                "MULTIFORM_BUDGET must be a non-negative integer, got {s:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn load_form(a: &FormArgs) -> std::result::Result<AlternatingForm, Failure> {
    let form = if let Some(path) = &a.form {
        input::read_json(path)?
    } else {
        let kind = a.kind.ok_or_else(|| usage("give --form FILE or --kind"))?;
        let field = Fp::new(need(a.p, "p")?)?;
        match kind {
            Kind::Zero => AlternatingForm::zero(field, need(a.n, "n")?, need(a.d, "d")?)?,
            Kind::Volume => AlternatingForm::volume(field, need(a.n, "n")?)?,
            Kind::Symplectic => AlternatingForm::symplectic(field, need(a.d, "d")?)?,
            Kind::Random => mform::random_form(
                field,
                need(a.n, "n")?,
                need(a.d, "d")?,
                need(a.seed, "seed")?,
            )?,
        }
    };
    Ok(match a.tower_steps {
        Some(steps) => mform::certify_tower(&form, steps)?.top().clone(),
        None => form,
    })
}

fn subspace_json(s: &conncomp::Subspace) -> Value {
    let mut v = to_json(s);
    v["dim"] = json!(s.dim());
    v["codim"] = json!(s.codim());
    v
}

fn form_cmd(cmd: FormCmd) -> Outcome {
    Ok(Output::Json(match cmd {
        FormCmd::Eval { f, vecs } => {
            let form = load_form(&f)?;
            let vs = input::vectors(&form, &vecs)?;
            json!({ "value": form.eval(&vs)?.value() })
        }
        FormCmd::Radical { f } => {
            let form = load_form(&f)?;
            let rad = mform::radical(&form);
            json!({ "size": rad.len(), "radical": rad })
        }
        FormCmd::Nondeg { f } => {
            json!({ "nondegenerate": mform::is_nondegenerate(&load_form(&f)?) })
        }
        FormCmd::Generic { f } => {
            let form = load_form(&f)?;
            json!({ "generic": mform::is_generic(&form), "headroom": mform::headroom(&form) })
        }
        FormCmd::Dual { f, vecs } => {
            let form = load_form(&f)?;
            let basis = input::vectors(&form, &vecs)?;
            let (ts, us) = mform::dual_tuples(&form, &basis)?;
            json!({ "wedges": ts, "duals": us })
        }
        FormCmd::Findw {
            f,
            wedges,
            wedges_file,
            targets,
            u,
        } => {
            let form = load_form(&f)?;
            let mut ts: Vec<WedgeVector> = match &wedges_file {
                Some(path) => input::read_json(path)?,
                None => Vec::new(),
            };
            for w in &wedges {
                ts.push(exterior::wedge_of_vectors(&input::vector_group(&form, w)?)?);
            }
            let ks: Vec<u32> = input::usize_list(&targets)?
                .into_iter()
                .map(|k| k as u32)
                .collect();
            if let Some(&k) = ks.iter().find(|&&k| k >= form.field().p()) {
                return Err(Error::InvalidInput(format!("target {k} is not reduced")).into());
            }
            let us = input::vectors(&form, &u)?;
            json!({ "w": mform::find_w(&form, &ts, &ks, &us)? })
        }
        FormCmd::Extend { f } => to_json(&mform::extend_step(&load_form(&f)?)),
        FormCmd::Tower { f, steps } => {
            let tower = mform::certify_tower(&load_form(&f)?, steps)?;
            let mut v = to_json(&tower);
            v["verified"] = json!(tower.verify());
            v
        }
    }))
}

fn struct_cmd(cmd: StructCmd) -> Outcome {
    Ok(Output::Json(match cmd {
        StructCmd::Generate { f, vecs } => {
            let form = load_form(&f)?;
            let sub = structure::generate(&form, &input::vectors(&form, &vecs)?)?;
            json!({ "basis": sub.basis, "gram": sub.gram })
        }
        StructCmd::Invariant { f, vecs } => {
            let form = load_form(&f)?;
            to_json(&structure::atomic_invariant(
                &form,
                &input::vectors(&form, &vecs)?,
            )?)
        }
        StructCmd::Equiv {
            f,
            t,
            vecs,
            target_vecs,
        } => {
            let a = load_form(&f)?;
            let b = load_form(&t.as_form_args())?;
            let ta = input::vectors(&a, &vecs)?;
            let tb = input::vectors(&b, &target_vecs)?;
            json!({ "equivalent": structure::equivalent(&a, &ta, &b, &tb)? })
        }
        StructCmd::Embed { f, t, vecs } => {
            let a = load_form(&f)?;
            let b = load_form(&t.as_form_args())?;
            let sub = structure::generate(&a, &input::vectors(&a, &vecs)?)?;
            let iso = structure::embed(&sub, &b)?;
            json!({ "domain": iso.domain, "image": iso.image, "valid": iso.is_valid() })
        }
    }))
}

fn vc_cmd(cmd: VcCmd) -> Outcome {
    Ok(Output::Json(match cmd {
        VcCmd::Shatter { family, bx } => {
            let fam = input::family(&family)?;
            let bx = input::box_parts(&bx)?;
            json!({
                "shatters": boxvc::shatters(&fam, &bx)?,
                "traces": boxvc::trace_count(&fam, &bx)?,
                "cells": bx.cell_count(),
            })
        }
        VcCmd::Dim { family } => json!({ "vcK": boxvc::vc_k(&input::family(&family)?) }),
        VcCmd::Sauer { family, d } => {
            json!({ "box": boxvc::sauer_shelah_search(&input::family(&family)?, d) })
        }
        VcCmd::Badgraph { k, d, n, check } => {
            if check {
                to_json(&experiments::bad_graph_claims(k, d, n)?)
            } else {
                to_json(&boxvc::build_bad_hypergraph(k, d, n)?)
            }
        }
        VcCmd::Randgraph {
            part_sizes,
            seed,
            demand,
            samples,
        } => {
            let g = boxvc::random_partite_extension_graph(input::usize_list(&part_sizes)?, seed)?;
            let mut v = to_json(&g);
            v["edgeCount"] = json!(g.edge_count());
            if let Some(dem) = demand {
                v["extensionScore"] = json!(boxvc::extension_score(&g, dem, samples, seed));
            }
            v
        }
        VcCmd::Ramsey {
            labels,
            sizes,
            colors,
            seed,
            target,
        } => {
            let arr: LabelArray = match (&labels, &sizes) {
                (Some(path), _) => input::read_json(path)?,
                (None, Some(s)) => {
                    let sizes = input::usize_list(s)?;
                    let mut rng = ChaCha8Rng::seed_from_u64(need(seed, "seed")?);
                    let len: usize = sizes.iter().product();
                    if colors == 0 {
                        return Err(usage("--colors must be positive"));
                    }
                    LabelArray::new(sizes, (0..len).map(|_| rng.gen_range(0..colors)).collect())?
                }
                (None, None) => return Err(usage("give --labels FILE or --sizes")),
            };
            let target = input::usize_list(&target)?;
            json!({ "box": boxvc::indiscernible_subbox(&arr, &target, budget()?)? })
        }
    }))
}

fn types_cmd(cmd: TypesCmd, csv: bool) -> Outcome {
    let (path, name) = match &cmd {
        TypesCmd::Count { spec } => (spec, "count"),
        TypesCmd::Dagger { spec } => (spec, "dagger"),
        TypesCmd::Compose { spec } => (spec, "compose"),
        TypesCmd::Arrayfam { spec } => (spec, "arrayfam"),
    };
    let spec: TypesSpec = input::read_json(path)?;
    let oracle = spec.oracle.build()?;
    Ok(match cmd {
        TypesCmd::Count { .. } => {
            let window = spec
                .window
                .as_ref()
                .ok_or_else(|| input::missing("window", name))?;
            Output::Json(
                json!({ "count": typecount::phi_types_realized(&oracle, spec.b, &spec.seqs, window)? }),
            )
        }
        TypesCmd::Dagger { .. } => {
            let long = spec
                .long_seq
                .as_ref()
                .ok_or_else(|| input::missing("longSeq", name))?;
            let r = typecount::dagger_check(
                &oracle,
                spec.b,
                &spec.seqs,
                long,
                spec.d_exp.unwrap_or(2),
                spec.epsilon.unwrap_or(0.2),
            )?;
            if csv {
                Output::Text(format!(
                    "{}\n{}\n",
                    TypeCountReport::csv_header(),
                    r.csv_row()
                ))
            } else {
                Output::Json(to_json(&r))
            }
        }
        TypesCmd::Compose { .. } => {
            let universes = oracle.universes().to_vec();
            let cells: usize = universes.iter().product();
            if cells > 1 << 20 {
                return Err(Error::SizeGuard(format!("truth table of {cells} cells")).into());
            }
            let table: String = (0..cells)
                .map(|i| {
                    if oracle.evaluate(&boxvc::unflatten(&universes, i)) {
                        '1'
                    } else {
                        '0'
                    }
                })
                .collect();
            Output::Json(json!({
                "universes": universes,
                "trueCount": table.bytes().filter(|&c| c == b'1').count(),
                "table": table,
            }))
        }
        TypesCmd::Arrayfam { .. } => {
            let delta = spec
                .delta
                .as_ref()
                .ok_or_else(|| input::missing("delta", name))?;
            let seed = spec.seed.ok_or_else(|| input::missing("seed", name))?;
            let b = match spec.budget {
                Some(b) => b,
                None => budget()?,
            };
            Output::Json(to_json(&typecount::array_family_cardinality(
                &oracle, delta, b, seed,
            )?))
        }
    })
}

fn conn_cmd(cmd: ConnCmd) -> Outcome {
    Ok(Output::Json(match cmd {
        ConnCmd::Perp { f, vecs } => {
            let form = load_form(&f)?;
            subspace_json(&conncomp::v_perp(&form, &input::vectors(&form, &vecs)?)?)
        }
        ConnCmd::Ginfty { f, vecs } => {
            let form = load_form(&f)?;
            subspace_json(&conncomp::g_infty(&form, &input::vectors(&form, &vecs)?)?)
        }
        ConnCmd::Identity { f, parts } => {
            let form = load_form(&f)?;
            let parts = parts
                .iter()
                .map(|p| input::vector_group(&form, p))
                .collect::<multiform::Result<Vec<_>>>()?;
            let all: Vec<_> = parts.iter().flatten().cloned().collect();
            json!({
                "holds": conncomp::intersection_identity_check(&form, &parts)?,
                "union": subspace_json(&conncomp::g_infty(&form, &all)?),
            })
        }
    }))
}

fn triples(s: &str) -> std::result::Result<Vec<[usize; 3]>, Failure> {
    s.split(';')
        .map(|t| {
            let v = input::usize_list(t)?;
            <[usize; 3]>::try_from(v).map_err(|_| usage(format!("expected a triple, got {t:?}")))
        })
        .collect()
}

fn experiment_cmd(cmd: ExperimentCmd, csv: bool) -> Outcome {
    Ok(Output::Json(match cmd {
        ExperimentCmd::Badgraph { params } => {
            let rows = triples(&params)?
                .into_iter()
                .map(|[k, d, n]| experiments::bad_graph_claims(k, d, n))
                .collect::<multiform::Result<Vec<_>>>()?;
            json!({ "allHold": rows.iter().all(|r| r.claims_hold), "rows": rows })
        }
        ExperimentCmd::Sauer {
            universe,
            d,
            trials,
            seed,
        } => to_json(&experiments::sauer_shelah(universe, d, trials, seed)?),
        ExperimentCmd::Obstruction {
            p,
            n,
            d,
            random,
            seed,
        } => json!({
            "obstruction": experiments::finite_obstruction(p, n, d, random, seed)?,
            "volume": experiments::volume_checks(&[2, 3, 5], &[2, 3, 4])?,
        }),
        ExperimentCmd::Chain {
            params,
            steps,
            wedges,
            seed,
        } => {
            let rows = triples(&params)?
                .into_iter()
                .map(|[p, n, d0]| {
                    experiments::extension_chain(p as u32, n, d0, steps, wedges, seed)
                })
                .collect::<multiform::Result<Vec<_>>>()?;
            json!({ "rows": rows })
        }
        ExperimentCmd::Qe { pairs, seed } => {
            let ps = experiments::qe_pairs(pairs, seed)?;
            let count = |kind: &str| ps.iter().filter(|p| p.kind == kind).count();
            json!({
                "pairs": ps.len(),
                "equivalent": ps.iter().filter(|p| p.equivalent).count(),
                "transported": count("transported"),
                "random": count("random"),
                "perturbed": count("perturbed"),
                "decisions": ps.iter().map(|p| p.equivalent).collect::<Vec<_>>(),
            })
        }
        ExperimentCmd::Identity { instances, seed } => {
            to_json(&experiments::identity_check(instances, seed)?)
        }
        ExperimentCmd::DaggerSanity { epsilon } => {
            let rows = experiments::dagger_sanity(epsilon)?;
            json!({ "rows": rows })
        }
        ExperimentCmd::Composition {
            ns,
            ks,
            trials,
            d_exp,
            epsilon,
            seed,
        } => {
            let rows = experiments::composition_sweep(
                &input::usize_list(&ns)?,
                &input::usize_list(&ks)?,
                trials,
                d_exp,
                epsilon,
                seed,
            )?;
            if csv {
                let mut s = String::from(
                    "n,k,trials,passes,passes_unrounded,pass_rate,max_count_seen,bound\n",
                );
                for r in &rows {
                    s.push_str(&format!(
                        "{},{},{},{},{},{},{},{}\n",
                        r.n,
                        r.k,
                        r.trials,
                        r.passes,
                        r.passes_unrounded,
                        r.pass_rate,
                        r.max_count_seen,
                        r.bound
                    ));
                }
                return Ok(Output::Text(s));
            }
            json!({ "rows": rows })
        }
    }))
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.group {
        Group::Form(c) => form_cmd(c),
        Group::Struct(c) => struct_cmd(c),
        Group::Vc(c) => vc_cmd(c),
        Group::Types(c) => types_cmd(c, cli.csv),
        Group::Conn(c) => conn_cmd(c),
        Group::Experiment(c) => experiment_cmd(c, cli.csv),
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let out_path = cli.out.clone();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(
                err,
                "error: cannot start {} worker threads: {e}",
                cli.threads
            );
            return EXIT_USAGE;
        }
    };
    let result = pool.install(|| dispatch(cli));
    let text = match result {
        Ok(Output::Json(v)) => {
            let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
            s.push('\n');
            s
        }
        Ok(Output::Text(s)) => s,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            return if e.is_budget() {
                EXIT_BUDGET
            } else {
                EXIT_DOMAIN
            };
        }
    };
    let written = match &out_path {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => out.write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: cannot write output: {e}");
            EXIT_DOMAIN
        }
    }
}
