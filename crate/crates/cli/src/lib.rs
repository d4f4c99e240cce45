//! Command-line front end. [`run`] is a pure function of its arguments.

pub mod checks;
pub mod parse;

use std::fmt::Write as _;

use cdo_core::charring::{cdo_char, fock_char, finite_char, ghost_char, og_char, weyl_module_char, GradedCharacter};
use cdo_core::convolution::{normalize_by, parse_expr, Strategy};
use cdo_core::dsred::{boson_fermion_check, brst_data, c_twist, euler_char_reduction, reduce_cdo_sf, reduce_sf_weyl};
use cdo_core::error::{Error, Result};
use cdo_core::fle::{dual_torus, fle_table, satake_integrality, shifted_w_simples, torus_y};
use cdo_core::levels::{casimir_offset, central_charge_cdo, Level};
use cdo_core::rootdata::{fmt_vec, RootDatum};
use cdo_core::spectralflow::{cdo_sf_embed, kl_stable, sf_group, twist_mode_rule, Generator, ModuleLabel, SFContext};
use cdo_core::{Scalar, Q};
use cdo_halflattice::relations::check_a_alpha;
use cdo_halflattice::state::{Basis, Mono};
use cdo_halflattice::{classify_module, descent_weight_vector, State, TorusModuleSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "cdo", version, about = "Exact computations for chiral differential operators")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct GroupArgs {
    /// Preset name: SL2, PSL2, SL(n), PGL(n), GL(n), T<n>, Spin(D4), SC(E6), Adj(F4), ...
    #[arg(long, default_value = "SL2")]
    pub group: String,
    /// TOML datum file (rank, simple_roots, simple_coroots); overrides --group.
    #[arg(long)]
    pub datum: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct LevelArgs {
    /// Level on every simple factor (and on the center unless --kappa is given).
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Level on the center, rows separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Describe a root datum.
    Datum(GroupArgs),
    /// Describe the Langlands dual datum.
    Dual(GroupArgs),
    /// Level arithmetic.
    Levels {
        #[command(subcommand)]
        op: LevelsOp,
    },
    /// Graded characters.
    Char {
        #[command(subcommand)]
        op: CharOp,
    },
    /// Spectral flow.
    Sf {
        #[command(subcommand)]
        op: SfOp,
    },
    /// Quantum Hamiltonian reduction.
    Ds {
        #[command(subcommand)]
        op: DsOp,
    },
    /// Normalize a convolution expression.
    Conv(ConvArgs),
    /// Fundamental local equivalence tables.
    Fle {
        #[command(subcommand)]
        op: FleOp,
    },
    /// Torus half-lattice realization.
    Torus {
        #[command(subcommand)]
        op: TorusOp,
    },
    /// Run the acceptance checks.
    Check(CheckArgs),
}

#[derive(Subcommand, Debug)]
pub enum LevelsOp {
    /// Dual level κ*.
    Dual(GL),
    /// Shifted level κ[n].
    Shift {
        #[command(flatten)]
        gl: GL,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Critical level.
    Critical(GroupArgs),
    /// Conformal weight of the Weyl module V^κ_λ.
    Offset {
        #[command(flatten)]
        gl: GL,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Central charge of the CDO.
    Charge(GroupArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GL {
    #[command(flatten)]
    pub g: GroupArgs,
    #[command(flatten)]
    pub l: LevelArgs,
}

#[derive(Subcommand, Debug)]
pub enum CharOp {
    /// Character of D^κ.
    Cdo {
        #[command(flatten)]
        gl: GL,
        #[arg(long, default_value_t = 2)]
        trunc: i64,
        #[arg(long, default_value_t = 2)]
        cutoff: i64,
    },
    /// Peter-Weyl character of O(G).
    Og {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 2)]
        cutoff: i64,
    },
    /// Weyl module V^κ_λ.
    Weyl {
        #[command(flatten)]
        gl: GL,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 4)]
        trunc: i64,
    },
    /// Fock module on the center.
    Fock {
        #[command(flatten)]
        gl: GL,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 4)]
        trunc: i64,
    },
    /// Finite-dimensional irreducible.
    Finite {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// bc ghosts on the positive roots.
    Ghost {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 4)]
        trunc: i64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Context {
    Heisenberg,
    Affine,
    Cdo,
    Eqw,
    Fermions,
}

#[derive(Subcommand, Debug)]
pub enum SfOp {
    /// Generators of the spectral-flow group.
    Group {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, value_enum, default_value = "cdo")]
        context: Context,
    },
    /// Image of (γ, x) in the automorphisms of the two affine halves.
    Embed {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
    },
    /// Twist a module label (S-expression) by the coweight x.
    Twist {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(allow_hyphen_values = true)]
        label: String,
    },
    /// Mode bookkeeping of a twisted generator.
    Mode {
        #[command(flatten)]
        gl: GL,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// Root in simple-root coefficients.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "cartan")]
        root: Option<String>,
        /// Cartan generator as a coweight.
        #[arg(long, allow_hyphen_values = true)]
        cartan: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Whether twisting by x preserves the Kazhdan-Lusztig category.
    Stable {
        #[command(flatten)]
        gl: GL,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum DsOp {
    /// BRST structure data.
    Brst(GroupArgs),
    /// Ghost twist attached to a coweight.
    Twist {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
    },
    /// Reduction of μ̌ · V^κ_λ.
    Reduce {
        #[command(flatten)]
        gl: GL,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
    },
    /// Reduction of (γ, x) · D^κ.
    Cdo {
        #[command(flatten)]
        gl: GL,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
    },
    /// Euler character of the reduction of V^κ_λ.
    Euler {
        #[command(flatten)]
        gl: GL,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 8)]
        trunc: i64,
    },
    /// Boson-fermion identity through q^trunc.
    Bf {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 12)]
        trunc: i64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StrategyArg {
    Leftmost,
    Rightmost,
    Tree,
}

#[derive(Args, Debug)]
pub struct ConvArgs {
    #[command(flatten)]
    pub g: GroupArgs,
    #[arg(long, value_enum, default_value = "leftmost")]
    pub strategy: StrategyArg,
    /// Expression such as "D[k] . V[k*, w(1)]".
    pub expr: String,
}

#[derive(Subcommand, Debug)]
pub enum FleOp {
    /// One row per dominant dual weight.
    Table {
        #[command(flatten)]
        gl: GL,
        #[arg(long, default_value_t = 2)]
        cutoff: i64,
    },
    /// Y = X_*(T) ∩ κ⁻¹(X^*(T)).
    Y(GL),
    /// Dual torus with cocharacters Y.
    DualTorus(GL),
    /// Pairs (λ, μ) with integral summed conformal weights.
    Satake {
        #[command(flatten)]
        gl: GL,
        #[arg(long, default_value_t = 2)]
        cutoff: i64,
    },
    /// Simples of the shifted equivariant W-algebra.
    Shifted {
        #[command(flatten)]
        gl: GL,
        #[arg(long, default_value_t = 2)]
        cutoff: i64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct TorusArgs {
    /// Level form, rows separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<String>,
    /// Twists γ_i, separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub gammas: Option<String>,
    /// Sector window |α_i| <= window.
    #[arg(long, default_value_t = 1)]
    pub window: i64,
    /// Truncation degree D.
    #[arg(long, default_value_t = 4)]
    pub trunc: u32,
    /// TOML module spec; overrides --kappa/--gammas.
    #[arg(long)]
    pub spec: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum TorusOp {
    /// Print the module spec as TOML.
    Spec(TorusArgs),
    /// Twist labels of the simple summands.
    Classify(TorusArgs),
    /// Descent from a seeded random vector.
    Descent {
        #[command(flatten)]
        t: TorusArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the A(α) relations on the module basis.
    Relations {
        #[command(flatten)]
        t: TorusArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Criterion number; all when absent.
    pub criterion: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Exit code and captured streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let json = cli.json;
    match dispatch(cli) {
        Ok(Reply::Done(text, value)) => {
            let mut out = if json { serde_json::to_string(&value).expect("json") } else { text };
            if !out.ends_with('\n') {
                out.push('\n');
            }
            Output { code: 0, stdout: out, stderr: String::new() }
        }
        Ok(Reply::Failed(text, value)) => {
            let mut out = if json { serde_json::to_string(&value).expect("json") } else { text };
            out.push('\n');
            Output { code: 1, stdout: out, stderr: String::new() }
        }
        Err(e) => {
            let code = if matches!(e, Error::Parse { .. }) { 2 } else { 1 };
            let stderr = if json {
                let v = match &e {
                    Error::Parse { input, pos, msg } => json!({"error": "parse", "input": input, "pos": pos, "message": msg}),
                    Error::Precondition { invariant, detail } => {
                        json!({"error": "precondition", "invariant": invariant, "detail": detail})
                    }
                };
                v.to_string()
            } else {
                e.diagnostic()
            };
            Output { code, stdout: String::new(), stderr: stderr + "\n" }
        }
    }
}

enum Reply {
    Done(String, Value),
    /// Well-formed request whose checked property failed.
    Failed(String, Value),
}

fn done(text: String, value: Value) -> Result<Reply> {
    Ok(Reply::Done(text, value))
}

fn datum(g: &GroupArgs) -> Result<RootDatum> {
    match &g.datum {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::pre("readable file", format!("{path}: {e}")))?;
            RootDatum::from_toml(&text)
        }
        None => RootDatum::preset(&g.group),
    }
}

fn level_of(d: &RootDatum, l: &LevelArgs) -> Result<Level> {
    parse::level(d, l.k.as_deref(), l.kappa.as_deref())
}

fn vec_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn ints_json(m: &[Vec<i64>]) -> Value {
    json!(m)
}

fn level_json(l: &Level) -> Value {
    serde_json::to_value(l).expect("json")
}

fn datum_report(d: &RootDatum) -> Result<(String, Value)> {
    let types: Vec<String> = d.component_types().iter().map(|t| t.to_string()).collect();
    let hv: Vec<i64> = (0..d.components().len()).map(|i| d.dual_coxeter(i)).collect::<Result<_>>()?;
    let mut t = String::new();
    writeln!(t, "name: {}", d.name()).ok();
    writeln!(t, "rank: {}", d.rank()).ok();
    writeln!(t, "semisimple rank: {}", d.semisimple_rank()).ok();
    writeln!(t, "types: {}", if types.is_empty() { "-".into() } else { types.join(" x ") }).ok();
    writeln!(t, "simple roots: {:?}", d.simple_roots()).ok();
    writeln!(t, "simple coroots: {:?}", d.simple_coroots()).ok();
    writeln!(t, "cartan: {:?}", d.cartan()).ok();
    writeln!(t, "center rank: {}", d.center_rank()).ok();
    writeln!(t, "positive roots: {}", d.positive_roots().len()).ok();
    writeln!(t, "weyl group order: {}", d.weyl_group_order()).ok();
    writeln!(t, "rho: {}", fmt_vec(&d.rho())).ok();
    writeln!(t, "dual coxeter: {hv:?}").ok();
    write!(t, "dimension: {}", d.dimension()).ok();
    let v = json!({
        "name": d.name(),
        "rank": d.rank(),
        "semisimple_rank": d.semisimple_rank(),
        "types": types,
        "simple_roots": ints_json(d.simple_roots()),
        "simple_coroots": ints_json(d.simple_coroots()),
        "cartan": ints_json(d.cartan()),
        "center_rank": d.center_rank(),
        "positive_roots": d.positive_roots().len(),
        "weyl_group_order": d.weyl_group_order(),
        "rho": vec_json(&d.rho()),
        "dual_coxeter": hv,
        "dimension": d.dimension(),
    });
    Ok((t, v))
}

fn char_reply(c: &GradedCharacter) -> Result<Reply> {
    let mut t = format!("offset: {}\n", c.offset);
    let mut qs: Vec<i64> = c.terms().map(|(k, _)| k.q).collect();
    qs.dedup();
    for q in qs {
        writeln!(t, "q^{q}: {} terms, dimension {}", c.extract_coefficient(q).num_terms(), c.graded_dimension(q)).ok();
    }
    done(t, c.to_json_value())
}

fn dispatch(cli: Cli) -> Result<Reply> {
    match cli.cmd {
        Cmd::Datum(g) => {
            let (t, v) = datum_report(&datum(&g)?)?;
            done(t, v)
        }
        Cmd::Dual(g) => {
            let (t, v) = datum_report(&datum(&g)?.dual())?;
            done(t, v)
        }
        Cmd::Levels { op } => levels(op),
        Cmd::Char { op } => character(op),
        Cmd::Sf { op } => spectral_flow(op),
        Cmd::Ds { op } => reduction(op),
        Cmd::Conv(a) => {
            let d = datum(&a.g)?;
            let e = parse_expr(&d, &a.expr)?;
            let s = match a.strategy {
                StrategyArg::Leftmost => Strategy::Leftmost,
                StrategyArg::Rightmost => Strategy::Rightmost,
                StrategyArg::Tree => Strategy::Tree,
            };
            let nf = normalize_by(&d, &e, s)?;
            let text = nf.render(&d);
            let v = json!({
                "normal": text,
                "label": nf.label().map(ModuleLabel::to_sexpr),
                "irreducible": nf.is_irreducible(),
                "left": nf.left.as_ref().map(level_json),
                "right": nf.right.as_ref().map(level_json),
                "degree": nf.degree,
            });
            done(text, v)
        }
        Cmd::Fle { op } => fle(op),
        Cmd::Torus { op } => torus(op),
        Cmd::Check(a) => {
            let ids: Vec<u32> = match a.criterion {
                Some(i) if (1..=checks::COUNT).contains(&i) => vec![i],
                Some(i) => return Err(Error::pre("criterion", format!("no criterion {i}; expected 1..={}", checks::COUNT))),
                None => (1..=checks::COUNT).collect(),
            };
            let outs: Vec<checks::Outcome> = ids.iter().map(|&i| checks::run(i, a.seed)).collect();
            let text = outs.iter().map(checks::Outcome::line).collect::<Vec<_>>().join("\n");
            let v = json!(outs
                .iter()
                .map(|o| json!({"id": o.id, "name": o.name, "pass": o.pass(), "detail": o.detail}))
                .collect::<Vec<_>>());
            if outs.iter().all(checks::Outcome::pass) {
                done(text, v)
            } else {
                Ok(Reply::Failed(text, v))
            }
        }
    }
}

fn levels(op: LevelsOp) -> Result<Reply> {
    match op {
        LevelsOp::Dual(gl) => {
            let d = datum(&gl.g)?;
            let l = level_of(&d, &gl.l)?.dual(&d);
            done(l.short(), level_json(&l))
        }
        LevelsOp::Shift { gl, n } => {
            let d = datum(&gl.g)?;
            let l = level_of(&d, &gl.l)?.shifted(&d, n)?;
            done(l.short(), level_json(&l))
        }
        LevelsOp::Critical(g) => {
            let d = datum(&g)?;
            let l = Level::critical(&d);
            done(l.short(), level_json(&l))
        }
        LevelsOp::Offset { gl, lambda } => {
            let d = datum(&gl.g)?;
            let l = level_of(&d, &gl.l)?;
            let lam = parse::weight(&d, lambda.as_deref())?;
            let h = casimir_offset(&d, &lam, &l)?;
            done(h.to_string(), json!(h.to_string()))
        }
        LevelsOp::Charge(g) => {
            let c = central_charge_cdo(&datum(&g)?);
            done(c.to_string(), json!(c))
        }
    }
}

fn character(op: CharOp) -> Result<Reply> {
    let c = match op {
        CharOp::Cdo { gl, trunc, cutoff } => {
            let d = datum(&gl.g)?;
            cdo_char(&d, &level_of(&d, &gl.l)?, trunc, cutoff)?
        }
        CharOp::Og { g, cutoff } => og_char(&datum(&g)?, cutoff)?,
        CharOp::Weyl { gl, lambda, trunc } => {
            let d = datum(&gl.g)?;
            weyl_module_char(&d, &parse::weight(&d, lambda.as_deref())?, &level_of(&d, &gl.l)?, trunc)?
        }
        CharOp::Fock { gl, lambda, trunc } => {
            let d = datum(&gl.g)?;
            fock_char(&d, &parse::weight(&d, lambda.as_deref())?, &level_of(&d, &gl.l)?, trunc)?
        }
        CharOp::Finite { g, lambda } => {
            let d = datum(&g)?;
            finite_char(&d, &parse::weight(&d, lambda.as_deref())?)?
        }
        CharOp::Ghost { g, trunc } => ghost_char(&datum(&g)?, trunc),
    };
    char_reply(&c)
}

fn spectral_flow(op: SfOp) -> Result<Reply> {
    match op {
        SfOp::Group { g, context } => {
            let d = datum(&g)?;
            let ctx = match context {
                Context::Heisenberg => SFContext::Heisenberg,
                Context::Affine => SFContext::Affine,
                Context::Cdo => SFContext::Cdo,
                Context::Eqw => SFContext::EqW,
                Context::Fermions => SFContext::Fermions,
            };
            let grp = sf_group(&d, ctx);
            let rows = |m: &[Vec<Q>]| m.iter().map(|v| fmt_vec(v)).collect::<Vec<_>>().join(" ");
            let t = format!(
                "ambient: {}\nlattice: {}\ncontinuous: {}",
                grp.ambient,
                rows(&grp.lattice),
                rows(&grp.continuous)
            );
            let v = json!({
                "ambient": grp.ambient,
                "lattice": grp.lattice.iter().map(|x| vec_json(x)).collect::<Vec<_>>(),
                "continuous": grp.continuous.iter().map(|x| vec_json(x)).collect::<Vec<_>>(),
            });
            done(t, v)
        }
        SfOp::Embed { g, gamma, x } => {
            let d = datum(&g)?;
            let (a, b) = cdo_sf_embed(&d, &parse::weight(&d, gamma.as_deref())?, &parse::weight(&d, x.as_deref())?)?;
            done(format!("left: {}\nright: {}", fmt_vec(&a), fmt_vec(&b)), json!({"left": vec_json(&a), "right": vec_json(&b)}))
        }
        SfOp::Twist { g, x, label } => {
            let d = datum(&g)?;
            let x = parse::weight(&d, x.as_deref())?;
            if !d.in_coweight_lattice(&x) {
                return Err(Error::pre("coweight lattice", format!("{} is not a coweight", fmt_vec(&x))));
            }
            let l = ModuleLabel::twist(x, ModuleLabel::parse(&d, &label)?);
            done(l.to_sexpr(), json!(l.to_sexpr()))
        }
        SfOp::Mode { gl, x, root, cartan, n } => {
            let d = datum(&gl.g)?;
            let l = level_of(&d, &gl.l)?;
            let x = parse::weight(&d, x.as_deref())?;
            let g = match (root, cartan) {
                (Some(r), _) => Generator::Root(parse::integers(&r)?),
                (None, Some(c)) => Generator::Cartan(parse::weight(&d, Some(&c))?),
                (None, None) => return Err(Error::pre("generator", "give --root or --cartan")),
            };
            let r = twist_mode_rule(&d, &l, &x, &g, n)?;
            done(
                format!("old index: {}\ncorrection: {}", r.old_index, r.correction),
                json!({"old_index": r.old_index, "correction": r.correction.to_string()}),
            )
        }
        SfOp::Stable { gl, x } => {
            let d = datum(&gl.g)?;
            let b = kl_stable(&d, &level_of(&d, &gl.l)?, &parse::weight(&d, x.as_deref())?);
            done(b.to_string(), json!(b))
        }
    }
}

fn reduction(op: DsOp) -> Result<Reply> {
    match op {
        DsOp::Brst(g) => {
            let d = datum(&g)?;
            let b = brst_data(&d)?;
            let mut t = format!("positive roots: {:?}\n", b.positive_roots);
            writeln!(t, "chi: {:?}", b.chi).ok();
            write!(t, "structure constants: {}", b.cubic.len()).ok();
            let v = json!({
                "positive_roots": b.positive_roots,
                "chi": b.chi,
                "cubic": b.cubic.iter().map(|(a, bb, g, c)| json!([a, bb, g, c])).collect::<Vec<_>>(),
            });
            done(t, v)
        }
        DsOp::Twist { g, mu } => {
            let d = datum(&g)?;
            let t = c_twist(&d, &parse::weight(&d, mu.as_deref())?)?;
            done(
                format!("fermions: {:?}\ncharge shift: {}", t.fermions, t.charge_shift()),
                json!({"coweight": vec_json(&t.coweight), "fermions": t.fermions, "charge_shift": t.charge_shift()}),
            )
        }
        DsOp::Reduce { gl, lambda, gamma } => {
            let d = datum(&gl.g)?;
            let r = reduce_sf_weyl(
                &d,
                &parse::weight(&d, lambda.as_deref())?,
                &parse::weight(&d, gamma.as_deref())?,
                &level_of(&d, &gl.l)?,
            )?;
            done(reduction_text(&r), r.to_json_value())
        }
        DsOp::Cdo { gl, gamma, x } => {
            let d = datum(&gl.g)?;
            let r = reduce_cdo_sf(
                &d,
                &parse::weight(&d, gamma.as_deref())?,
                &parse::weight(&d, x.as_deref())?,
                &level_of(&d, &gl.l)?,
            )?;
            done(reduction_text(&r), r.to_json_value())
        }
        DsOp::Euler { gl, lambda, trunc } => {
            let d = datum(&gl.g)?;
            let c = euler_char_reduction(&d, &parse::weight(&d, lambda.as_deref())?, &level_of(&d, &gl.l)?, trunc)?;
            char_reply(&c)
        }
        DsOp::Bf { g, trunc } => {
            let r = boson_fermion_check(&datum(&g)?, trunc);
            let v = json!({"ok": r.ok, "mismatch": r.mismatch.map(|m| json!([m.0, m.1, m.2, m.3, m.4]))});
            match r.mismatch {
                None => done(format!("identity holds through q^{trunc}"), v),
                Some((root, ch, q, f, b)) => Ok(Reply::Failed(
                    format!("mismatch at root {root}, y^{ch} q^{q}: fermions {f}, bosons {b}"),
                    v,
                )),
            }
        }
    }
}

fn reduction_text(r: &cdo_core::dsred::ReductionResult) -> String {
    let mut t = format!("payload: {}", r.payload);
    if let Some(deg) = r.degree {
        write!(t, "\ndegree: {deg}").ok();
    }
    if let Some(s) = r.simple {
        write!(t, "\nsimple: {s}").ok();
    }
    t
}

fn fle(op: FleOp) -> Result<Reply> {
    match op {
        FleOp::Table { gl, cutoff } => {
            let d = datum(&gl.g)?;
            let t = fle_table(&d, &level_of(&d, &gl.l)?, cutoff)?;
            done(t.render(), t.to_json_value())
        }
        FleOp::Y(gl) => {
            let d = datum(&gl.g)?;
            let y = torus_y(&d, &level_of(&d, &gl.l)?)?;
            let t = if y.is_empty() { "0".into() } else { format!("{y:?}") };
            done(t, json!(y))
        }
        FleOp::DualTorus(gl) => {
            let d = datum(&gl.g)?;
            let (t, y) = dual_torus(&d, &level_of(&d, &gl.l)?)?;
            done(format!("{} with cocharacters {y:?}", t.name()), json!({"rank": t.rank(), "basis": y}))
        }
        FleOp::Satake { gl, cutoff } => {
            let d = datum(&gl.g)?;
            let pairs = satake_integrality(&d, &level_of(&d, &gl.l)?, cutoff)?;
            let t = pairs.iter().map(|(a, b)| format!("{} {}", fmt_vec(a), fmt_vec(b))).collect::<Vec<_>>().join("\n");
            let v = json!(pairs.iter().map(|(a, b)| json!([vec_json(a), vec_json(b)])).collect::<Vec<_>>());
            done(t, v)
        }
        FleOp::Shifted { gl, cutoff } => {
            let d = datum(&gl.g)?;
            let k = match &gl.l.k {
                Some(k) => Scalar::parse(k)?,
                None => Scalar::var("k"),
            };
            let st = shifted_w_simples(&d, &k, cutoff)?;
            let mut t = format!("level: {}", st.level);
            for r in &st.rows {
                write!(t, "\n{} -> {} {}", fmt_vec(&r.mu), fmt_vec(&r.lambda), r.label).ok();
            }
            done(t, st.to_json_value(&d))
        }
    }
}

fn torus_spec(t: &TorusArgs) -> Result<TorusModuleSpec> {
    if let Some(path) = &t.spec {
        let text = std::fs::read_to_string(path).map_err(|e| Error::pre("readable file", format!("{path}: {e}")))?;
        return TorusModuleSpec::from_toml(&text);
    }
    let kappa = parse::rational_matrix(t.kappa.as_deref().ok_or_else(|| Error::pre("level", "give --kappa or --spec"))?)?;
    let gammas = match &t.gammas {
        Some(g) => parse::integer_lists(g)?,
        None => vec![vec![0; kappa.len()]],
    };
    if gammas.iter().any(|g| g.len() != kappa.len()) {
        return Err(Error::pre("cocharacter lattice", format!("each γ needs {} coordinates", kappa.len())));
    }
    TorusModuleSpec::cdo_sum(kappa, &gammas, t.window, t.trunc)
}

fn torus(op: TorusOp) -> Result<Reply> {
    match op {
        TorusOp::Spec(t) => {
            let s = torus_spec(&t)?;
            let text = s.to_toml();
            done(text.clone(), json!(text))
        }
        TorusOp::Classify(t) => {
            let s = torus_spec(&t)?;
            let c = classify_module(&s)?;
            let text = c.iter().map(|g| format!("{g:?}")).collect::<Vec<_>>().join("\n");
            done(text, json!(c))
        }
        TorusOp::Descent { t, seed } => {
            let s = torus_spec(&t)?;
            let e = s.engine();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v = State::zero();
            while v.is_zero() {
                for sec in s.sectors.choose_multiple(&mut rng, 3) {
                    let mut left = Mono::one();
                    for _ in 0..rng.gen_range(0..=2) {
                        left = left.with(rng.gen_range(0..s.rank), rng.gen_range(1..=2));
                    }
                    if left.degree() <= e.trunc() {
                        let c = Q::from_integer(rng.gen_range(1..=5).into());
                        v.add_term(Basis { sector: sec.sector.clone(), left, right: Mono::one() }, c);
                    }
                }
            }
            let r = descent_weight_vector(&e, &v)?;
            let ds: Vec<(usize, usize)> = r.steps.iter().map(|s| (s.d_before, s.d_after)).collect();
            let text = format!(
                "input: {v}\nresult: {}\nlambda: {:?}\ngamma': {:?}\ntwist: {:?}\nsteps: {}",
                r.vector,
                r.lambda,
                r.gamma_prime,
                r.twist,
                r.steps.len()
            );
            let val = json!({
                "input": v.to_string(),
                "result": r.vector.to_string(),
                "lambda": r.lambda,
                "gamma_prime": r.gamma_prime,
                "twist": r.twist,
                "d": ds,
            });
            done(text, val)
        }
        TorusOp::Relations { t, alpha, degree } => {
            let s = torus_spec(&t)?;
            let e = s.engine();
            let alpha = parse::integers(&alpha)?;
            if alpha.len() != s.rank {
                return Err(Error::pre("character lattice", format!("α needs {} coordinates", s.rank)));
            }
            let sectors: Vec<_> = s.sectors.iter().map(|x| x.sector.clone()).collect();
            let xs: Vec<Vec<Q>> = (0..s.rank)
                .map(|i| (0..s.rank).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
                .collect();
            let rep = check_a_alpha(&e, &sectors, &alpha, &xs, (-3, 2), degree)?;
            let v = json!({"checked": rep.checked, "failures": rep.failures});
            if rep.ok() {
                done(format!("{} identities hold", rep.checked), v)
            } else {
                Ok(Reply::Failed(rep.failures.join("\n"), v))
            }
        }
    }
}
