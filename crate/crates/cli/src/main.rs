mod input;

use clap::{Args, Parser, Subcommand, ValueEnum};
use input::{load_module, parse_element, parse_group, Loaded};
use serde_json::{json, Map, Value};
use std::process::ExitCode;
use tamecalc::exactalg::FgAbGroup;
use tamecalc::homalg::{
    coinvariants, group_homology, tor_bar, tor_pres, StemsTable, TorResult, DEFAULT_COLUMN_LIMIT,
};
use tamecalc::pmod::{extend_resolution, kappa, p_functor, resolve};
use tamecalc::specseq::{assemble_e2, free_homotopy, sphere_homotopy, Engine};
use tamecalc::tamemod::{d_stage, induce, io, shift, tensor_sigma, truncate_above, SigmaModule, TruncIFunctor};
use tamecalc::Error;

const DEFAULT_TRUNC: usize = 4;

#[derive(Parser)]
#[command(name = "tamecalc", version, about = "Exact computations with tame modules over the injection monoid")]
struct Cli {
    #[command(flatten)]
    cfg: Config,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Config {
    /// truncation level N (builtins are built here; files are cut down to it)
    #[arg(long = "trunc", global = true)]
    trunc: Option<usize>,
    /// generator search level L for resolutions (default N)
    #[arg(long = "search", global = true)]
    search: Option<usize>,
    /// top homological degree
    #[arg(long = "pmax", global = true, default_value_t = 2)]
    pmax: usize,
    #[arg(long, global = true, value_enum, default_value_t = Method::Both)]
    method: Method,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// stems table (JSON); defaults to the bundled q = 0..7 table
    #[arg(long, global = true)]
    stems: Option<String>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Method {
    Bar,
    Pres,
    Both,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Free,
    Semifree,
    Const,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the functor relations
    Validate { module: String },
    /// Levels, transition maps and filtration subgroups of the colimit
    Colim { module: String },
    /// Exact filtration of an element
    Filtration {
        module: String,
        #[arg(long)]
        element: String,
    },
    /// Bounded semistability verdict, cross-checked against d-surjectivity
    Semistable { module: String },
    /// F(m) ↦ F(m+1), acting on the last m points
    Shift { module: String },
    /// Levelwise induction Z[Σ_{1+m}] ⊗_{Σ_m} F(m)
    Induce { module: String },
    /// P_n ⊗_{Σ_n} B
    TensorSigma {
        n: usize,
        coeff: String,
        /// transpositions act on B by -1
        #[arg(long)]
        sign_action: bool,
        /// twist the identification by the sign
        #[arg(long)]
        twist: bool,
    },
    /// Zero out levels above i
    Truncate {
        module: String,
        #[arg(long)]
        at: usize,
    },
    /// k-th stage of the d-tower
    Dstage {
        module: String,
        #[arg(long)]
        k: usize,
    },
    /// Certify induce(P_n) ≅ P_{n+1}
    Kappa { n: usize },
    /// Tor^{Z[M]}_*(Z, F) by the bar complex, a resolution, or both
    Tor { module: String },
    /// Homology of Σ_n with coefficients
    Ghom {
        n: usize,
        coeff: String,
        #[arg(long)]
        sign_action: bool,
    },
    /// Coinvariants Z ⊗_{Σ_m} F(m) and their transition maps
    Coinv { module: String },
    /// E² page for free, semifree (sphere) or constant input
    E2 {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(default_value_t = 2)]
        n: usize,
        /// top homotopy degree of the window
        #[arg(long, default_value_t = 3)]
        qmax: i64,
        /// off: forget the sign action and the twist (direct path)
        #[arg(long, default_value = "on")]
        twist: String,
    },
    /// Resolution by sums of representables
    Resolve { module: String },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Validate { .. } => "validate",
            Cmd::Colim { .. } => "colim",
            Cmd::Filtration { .. } => "filtration",
            Cmd::Semistable { .. } => "semistable",
            Cmd::Shift { .. } => "shift",
            Cmd::Induce { .. } => "induce",
            Cmd::TensorSigma { .. } => "tensor-sigma",
            Cmd::Truncate { .. } => "truncate",
            Cmd::Dstage { .. } => "dstage",
            Cmd::Kappa { .. } => "kappa",
            Cmd::Tor { .. } => "tor",
            Cmd::Ghom { .. } => "ghom",
            Cmd::Coinv { .. } => "coinv",
            Cmd::E2 { .. } => "e2",
            Cmd::Resolve { .. } => "resolve",
        }
    }

    fn module(&self) -> Option<&str> {
        match self {
            Cmd::Validate { module }
            | Cmd::Colim { module }
            | Cmd::Filtration { module, .. }
            | Cmd::Semistable { module }
            | Cmd::Shift { module }
            | Cmd::Induce { module }
            | Cmd::Truncate { module, .. }
            | Cmd::Dstage { module, .. }
            | Cmd::Tor { module }
            | Cmd::Coinv { module }
            | Cmd::Resolve { module } => Some(module),
            _ => None,
        }
    }

    fn input(&self) -> String {
        if let Some(m) = self.module() {
            return m.to_string();
        }
        match self {
            Cmd::TensorSigma { n, coeff, .. } | Cmd::Ghom { n, coeff, .. } => format!("{n} {coeff}"),
            Cmd::Kappa { n } => n.to_string(),
            Cmd::E2 { kind, n, .. } => format!("{} {n}", kind.to_possible_value().expect("named").get_name()),
            _ => unreachable!("module commands return early"),
        }
    }
}

/// Collected output: text lines and JSON fields, plus the exit code.
struct Report {
    lines: Vec<String>,
    fields: Map<String, Value>,
    code: u8,
}

impl Report {
    fn new() -> Self {
        Report { lines: vec![], fields: Map::new(), code: 0 }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn field(&mut self, k: &str, v: Value) {
        self.fields.insert(k.into(), v);
    }

    fn verdict(&mut self, ok: bool) {
        if !ok {
            self.code = 1;
        }
    }
}

fn group_value(g: &FgAbGroup) -> Value {
    let (free, torsion) = g.decompose();
    json!({ "group": g.to_string(), "free_rank": free, "torsion": torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>() })
}

fn levels_line(f: &TruncIFunctor) -> String {
    (0..=f.trunc()).map(|m| format!("F({m}) = {}", f.level(m))).collect::<Vec<_>>().join(", ")
}

fn module_fields(r: &mut Report, f: &TruncIFunctor) {
    r.line(levels_line(f));
    let valid = f.validate();
    r.line(match &valid {
        Ok(()) => "relations: valid".to_string(),
        Err(v) => format!("relations: {v}"),
    });
    r.field("levels", Value::Array(f.levels().iter().map(group_value).collect()));
    r.field("valid", valid.is_ok().into());
    r.field("module", serde_json::from_str(&io::to_json(f)).expect("module JSON"));
}

fn tor_fields(r: &mut Report, results: &[TorResult], key: &str) {
    r.field(
        key,
        Value::Array(
            results
                .iter()
                .map(|t| {
                    let mut v = group_value(&t.value);
                    let o = v.as_object_mut().expect("object");
                    o.insert("p".into(), t.degree.into());
                    o.insert("stabilized".into(), t.stabilized.into());
                    o.insert("complete".into(), t.complete.into());
                    v
                })
                .collect(),
        ),
    );
}

fn sigma_module(n: usize, coeff: &str, sign: bool) -> Result<SigmaModule, Error> {
    let g = parse_group(coeff)?;
    Ok(if sign { SigmaModule::signed(n, g) } else { SigmaModule::trivial(n, g) })
}

struct Ctx {
    cfg: Config,
    trunc: usize,
    search: usize,
}

impl Ctx {
    fn load(&self, spec: &str) -> Result<Loaded, Error> {
        load_module(spec, self.cfg.trunc, DEFAULT_TRUNC)
    }
}

fn run(cmd: &Cmd, ctx: &Ctx) -> Result<Report, Error> {
    let mut r = Report::new();
    let (pmax, search) = (ctx.cfg.pmax, ctx.search);
    match cmd {
        Cmd::Validate { module } => {
            let m = ctx.load(module)?;
            let v = m.functor.validate();
            match &v {
                Ok(()) => r.line("valid"),
                Err(e) => r.line(format!("invalid: {e}")),
            }
            r.field("valid", v.is_ok().into());
            if let Err(e) = &v {
                r.field(
                    "violation",
                    json!({ "relation": e.relation.name(), "level": e.level, "indices": e.indices, "generator": e.generator }),
                );
            }
            r.verdict(v.is_ok());
        }
        Cmd::Colim { module } => {
            let m = ctx.load(module)?;
            let f = &m.functor;
            f.ensure_valid()?;
            r.line(levels_line(f));
            let mut stabs = vec![];
            for k in 0..f.trunc() {
                let h = f.stab_hom(k);
                let (inj, iso) = (h.is_injective(), h.is_isomorphism());
                r.line(format!("F({k}) -> F({}): {}", k + 1, if iso { "iso" } else if inj { "injective" } else { "not injective" }));
                stabs.push(json!({ "from": k, "injective": inj, "iso": iso }));
            }
            let mut filt = vec![];
            for k in 0..f.trunc() {
                let (g, _) = f.filtration_subgroup(k);
                let img = f.colimit_image(k);
                let agree = f.image_matches_filtration(k);
                r.line(format!(
                    "filtration <= {k}: {g}; image of F({k}): {img}{}",
                    if agree { "" } else { " (differs)" }
                ));
                filt.push(json!({ "k": k, "subgroup": group_value(&g), "image": group_value(&img), "agree": agree }));
            }
            r.line(format!("colimit approximation F({}) = {}", f.trunc(), f.level(f.trunc())));
            r.field("levels", Value::Array(f.levels().iter().map(group_value).collect()));
            r.field("stabilization", stabs.into());
            r.field("filtration", filt.into());
        }
        Cmd::Filtration { module, element } => {
            let m = ctx.load(module)?;
            m.functor.ensure_valid()?;
            let x = parse_element(&m, element)?;
            let k = x.filtration();
            r.line(format!("element at level {}: filtration {k}", x.level));
            r.field("level", x.level.into());
            r.field("filtration", k.into());
            if k > 0 {
                let v = x.filtration_le(k - 1);
                if let Some((j, lvl)) = v.witness {
                    r.line(format!("not fixed by s_{j} at level {lvl}, so the filtration exceeds {}", k - 1));
                    r.field("witness", json!({ "transposition": j, "level": lvl }));
                }
            }
            if x.level + 1 > m.functor.trunc() {
                r.line("note: the element sits at the top level; raise --trunc to see its exact filtration");
                r.field("top_level", true.into());
            }
        }
        Cmd::Semistable { module } => {
            let m = ctx.load(module)?;
            let s = m.functor.is_semistable_up_to()?;
            let d = m.functor.check_d_surjective_up_to()?;
            if s.semistable {
                r.line(format!("semistable up to level {}", s.bound));
            } else {
                let w = s.witness.as_ref().expect("witness");
                r.line(format!(
                    "not semistable: generator {} at level {} moved by ({} {}) checked at level {}",
                    w.generator,
                    w.level,
                    w.transposition,
                    w.transposition + 1,
                    w.checked_at
                ));
                r.field(
                    "witness",
                    json!({ "level": w.level, "generator": w.generator, "transposition": w.transposition, "checked_at": w.checked_at }),
                );
            }
            let agree = s.semistable == d.surjective;
            r.line(format!(
                "d surjective up to level {}: {}{}",
                d.bound,
                d.surjective,
                if agree { " (agrees)" } else { " (DISAGREES)" }
            ));
            r.field("semistable", s.semistable.into());
            r.field("d_surjective", d.surjective.into());
            r.field("agree", agree.into());
            r.verdict(s.semistable);
        }
        Cmd::Shift { module } => module_fields(&mut r, &shift(&ctx.load(module)?.functor)?),
        Cmd::Induce { module } => module_fields(&mut r, &induce(&ctx.load(module)?.functor)?),
        Cmd::TensorSigma { n, coeff, sign_action, twist } => {
            let b = sigma_module(*n, coeff, *sign_action)?;
            module_fields(&mut r, &tensor_sigma(&b, *twist, ctx.trunc));
        }
        Cmd::Truncate { module, at } => module_fields(&mut r, &truncate_above(&ctx.load(module)?.functor, *at)?),
        Cmd::Dstage { module, k } => {
            let (f, _) = d_stage(&ctx.load(module)?.functor, *k)?;
            module_fields(&mut r, &f);
        }
        Cmd::Kappa { n } => {
            let k = kappa(*n, ctx.trunc)?;
            let ind = &k.forward.target;
            let p = p_functor(n + 1, ctx.trunc);
            for m in 0..=ctx.trunc {
                r.line(format!("level {m}: induce(P{n}) = {}, P{} = {}", ind.level(m), n + 1, p.level(m)));
            }
            r.line(format!("certified: {}", k.certified));
            r.field("certified", k.certified.into());
            r.verdict(k.certified);
        }
        Cmd::Tor { module } => {
            let m = ctx.load(module)?;
            let bar = match ctx.cfg.method {
                Method::Bar | Method::Both => Some(tor_bar(&m.functor, pmax, DEFAULT_COLUMN_LIMIT)?),
                Method::Pres => None,
            };
            let pres = match ctx.cfg.method {
                Method::Pres | Method::Both => Some(tor_pres(&m.functor, pmax, search)?),
                Method::Bar => None,
            };
            let mut all_agree = true;
            for p in 0..=pmax {
                let mut cols = vec![format!("p={p}")];
                for (name, v) in [("bar", &bar), ("pres", &pres)] {
                    if let Some(v) = v {
                        cols.push(format!("{name}: {}", v[p].to_string().replacen(&format!("Tor_{p} = "), "", 1)));
                    }
                }
                if let (Some(b), Some(q)) = (&bar, &pres) {
                    let a = b[p].agrees(&q[p]);
                    all_agree &= a;
                    cols.push(if a { "AGREE".into() } else { "DISAGREE".into() });
                }
                r.line(cols.join(" | "));
            }
            if let Some(b) = &bar {
                tor_fields(&mut r, b, "bar");
            }
            if let Some(q) = &pres {
                tor_fields(&mut r, q, "pres");
            }
            if ctx.cfg.method == Method::Both {
                r.line(if all_agree { "engines: AGREE" } else { "engines: DISAGREE" });
                r.field("agree", all_agree.into());
                r.verdict(all_agree);
            }
        }
        Cmd::Ghom { n, coeff, sign_action } => {
            let b = sigma_module(*n, coeff, *sign_action)?;
            let h = group_homology(&b, pmax)?;
            for (p, g) in h.iter().enumerate() {
                r.line(format!("H_{p}(Σ_{n}; {coeff}) = {g}"));
            }
            r.field("homology", Value::Array(h.iter().map(group_value).collect()));
        }
        Cmd::Coinv { module } => {
            let c = coinvariants(&ctx.load(module)?.functor);
            for (m, g) in c.sequence.iter().enumerate() {
                r.line(format!("Z ⊗_Σ{m} F({m}) = {g}"));
            }
            r.line(format!("coinvariants: {}{}", c.value, if c.stabilized { "" } else { " (not stabilized)" }));
            r.field("sequence", Value::Array(c.sequence.iter().map(group_value).collect()));
            r.field("value", group_value(&c.value));
            r.field("stabilized", c.stabilized.into());
        }
        Cmd::E2 { kind, n, qmax, twist } => {
            let stems = match &ctx.cfg.stems {
                Some(p) => StemsTable::from_json(
                    &std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{p}: {e}")))?,
                )?,
                None => StemsTable::default_sphere(),
            };
            let twist = match twist.as_str() {
                "on" => true,
                "off" => false,
                t => return Err(Error::Parse(format!("--twist takes on|off, not {t}"))),
            };
            let ks = 0..=*qmax;
            let g = match kind {
                Kind::Free => free_homotopy(*n, &stems.suspend(*n as i64), ks, ctx.trunc)?,
                Kind::Semifree => sphere_homotopy(*n, &stems, ks, twist, ctx.trunc)?,
                Kind::Const => free_homotopy(0, &stems, ks, ctx.trunc)?,
            };
            let engine = match ctx.cfg.method {
                Method::Bar => Engine::Bar,
                Method::Pres => Engine::Pres,
                Method::Both => Engine::Both,
            };
            let page = assemble_e2(&g, pmax, engine, search)?;
            for l in page.render_text().lines() {
                r.line(l);
            }
            if let Value::Object(o) = page.to_json() {
                for (k, v) in o {
                    r.field(&k, v);
                }
            }
            if engine == Engine::Both {
                r.verdict(page.cells.values().all(|c| c.agree != Some(false)));
            }
        }
        Cmd::Resolve { module } => {
            let m = ctx.load(module)?;
            let res = extend_resolution(resolve(&m.functor, search)?, pmax + 1)?;
            for (i, t) in res.terms.iter().enumerate() {
                r.line(format!("P_{i} = {t}{}", if res.complete[i] { "" } else { " (incomplete search)" }));
            }
            let exact = res.verify_exact();
            r.line(format!("terminated: {}; composites vanish: {exact}", res.terminated()));
            r.field("terms", res.terms.iter().map(|t| t.0.clone()).collect::<Vec<_>>().into());
            r.field("complete", res.complete.clone().into());
            r.field("terminated", res.terminated().into());
            r.field("composites_vanish", exact.into());
        }
    }
    Ok(r)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceGuard(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file_n = cli.cmd.module().and_then(input::file_trunc);
    let trunc = cli.cfg.trunc.or(file_n).unwrap_or(DEFAULT_TRUNC);
    let search = cli.cfg.search.unwrap_or(trunc);
    let ctx = Ctx { cfg: cli.cfg.clone(), trunc, search };
    let method = match cli.cfg.method {
        Method::Bar => "bar",
        Method::Pres => "pres",
        Method::Both => "both",
    };
    let header = format!(
        "# tamecalc {} {} N={trunc} L={search} p_max={} method={method}",
        cli.cmd.name(),
        cli.cmd.input(),
        cli.cfg.pmax
    );
    let config = json!({
        "command": cli.cmd.name(), "input": cli.cmd.input(), "N": trunc, "L": search,
        "p_max": cli.cfg.pmax, "method": method,
    });
    let (report, code) = match run(&cli.cmd, &ctx) {
        Ok(r) => {
            let c = r.code;
            (r, c)
        }
        Err(e) => {
            let mut r = Report::new();
            r.line(format!("error: {e}"));
            r.field("error", e.to_string().into());
            let c = exit_code(&e);
            (r, c)
        }
    };
    match cli.cfg.format {
        Format::Text => {
            println!("{header}");
            for l in &report.lines {
                println!("{l}");
            }
        }
        Format::Json => {
            let mut o = report.fields;
            o.insert("config".into(), config);
            println!("{}", serde_json::to_string_pretty(&Value::Object(o)).expect("serializable"));
        }
    }
    ExitCode::from(code)
}
