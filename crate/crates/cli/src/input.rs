//! Module specs, coefficient groups and elements on the command line.

use num_bigint::BigInt;
use std::path::Path;
use tamecalc::exactalg::FgAbGroup;
use tamecalc::injcat::InjWord;
use tamecalc::pmod::{augmentation_kernel, p_functor, parse_combination};
use tamecalc::tamemod::{
    constant, direct_sum, io, tensor_group, tensor_sigma, truncate_above, zero, ColimElement, SigmaModule,
    TruncIFunctor,
};
use tamecalc::Error;

pub const BUILTINS: &str = "Z, Z^r, Z/k, zero, P(n), P(n)*G, truncP(n,i), augker(n), symP(n), sgnP(n), sums with +";

fn bad(s: &str, what: &str) -> Error {
    Error::Parse(format!("cannot read {what} `{s}`"))
}

/// `0`, `Z`, `Z^3`, `Z/4`, or a `+`-separated sum of those.
pub fn parse_group(s: &str) -> Result<FgAbGroup, Error> {
    let mut free = 0usize;
    let mut torsion = Vec::new();
    for part in s.split('+').map(str::trim) {
        match part {
            "0" => {}
            "Z" => free += 1,
            _ => {
                if let Some(r) = part.strip_prefix("Z^") {
                    free += r.parse::<usize>().map_err(|_| bad(s, "group"))?;
                } else if let Some(k) = part.strip_prefix("Z/") {
                    let k: BigInt = k.parse().map_err(|_| bad(s, "group"))?;
                    if k < BigInt::from(1) {
                        return Err(bad(s, "group"));
                    }
                    if k > BigInt::from(1) {
                        torsion.push(k);
                    }
                } else {
                    return Err(bad(s, "group"));
                }
            }
        }
    }
    Ok(FgAbGroup::from_invariants(free, &torsion))
}

fn args<const K: usize>(s: &str, name: &str) -> Option<[usize; K]> {
    let inner = s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?;
    let v: Vec<usize> = inner.split(',').map(|t| t.trim().parse().ok()).collect::<Option<_>>()?;
    v.try_into().ok()
}

fn term(s: &str, trunc: usize) -> Result<TruncIFunctor, Error> {
    if s == "zero" {
        return Ok(zero(trunc));
    }
    if let Some((p, g)) = s.split_once('*') {
        let [n] = args::<1>(p.trim(), "P").ok_or_else(|| bad(s, "module"))?;
        return Ok(tensor_group(&p_functor(n, trunc), &parse_group(g.trim())?));
    }
    if let Some([n]) = args::<1>(s, "P") {
        return Ok(p_functor(n, trunc));
    }
    if let Some([n, i]) = args::<2>(s, "truncP") {
        return truncate_above(&p_functor(n, trunc), i);
    }
    if let Some([n]) = args::<1>(s, "augker") {
        return Ok(augmentation_kernel(n, trunc));
    }
    if let Some([n]) = args::<1>(s, "symP") {
        return Ok(tensor_sigma(&SigmaModule::trivial(n, FgAbGroup::free(1)), false, trunc));
    }
    if let Some([n]) = args::<1>(s, "sgnP") {
        return Ok(tensor_sigma(&SigmaModule::signed(n, FgAbGroup::free(1)), false, trunc));
    }
    if s.starts_with('Z') || s == "0" {
        return Ok(constant(&parse_group(s)?, trunc));
    }
    Err(Error::Parse(format!("unknown module `{s}`; builtins are {BUILTINS}, or a path to a JSON file")))
}

fn is_file_spec(spec: &str) -> bool {
    spec.ends_with(".json") || Path::new(spec).is_file()
}

/// Truncation recorded in a module file, when `spec` names a readable one.
pub fn file_trunc(spec: &str) -> Option<usize> {
    let spec = spec.trim();
    if !is_file_spec(spec) {
        return None;
    }
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(spec).ok()?).ok()?;
    v.get("N")?.as_u64().map(|n| n as usize)
}

pub struct Loaded {
    pub functor: TruncIFunctor,
    /// `Some(n)` when the spec is exactly `P(n)`, so words can name elements
    pub representable: Option<usize>,
}

/// A JSON module file, or a builtin spec built at `trunc`. A file is cut
/// down to `trunc` when one is given.
pub fn load_module(spec: &str, trunc: Option<usize>, default_trunc: usize) -> Result<Loaded, Error> {
    let spec = spec.trim();
    if is_file_spec(spec) {
        let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
        let f = io::from_json(&text)?;
        let f = match trunc {
            Some(n) if n < f.trunc() => f.restrict(n)?,
            Some(n) if n > f.trunc() => {
                return Err(Error::TruncationExceeded { needed: n, trunc: f.trunc() });
            }
            _ => f,
        };
        return Ok(Loaded { functor: f, representable: None });
    }
    let n = trunc.unwrap_or(default_trunc);
    let mut parts = spec.split('+').map(str::trim);
    let mut f = term(parts.next().unwrap_or(""), n)?;
    let mut count = 1;
    for p in parts {
        f = direct_sum(&f, &term(p, n)?)?;
        count += 1;
    }
    let representable = if count == 1 { args::<1>(spec, "P") } else { None }.map(|[k]| k);
    Ok(Loaded { functor: f, representable })
}

/// `@m:1,0,-2` (coordinates at level m), or for `P(n)` a combination of
/// words such as `(2 5)@5` or `2*(1 3)@3 - (2 1)@3`.
pub fn parse_element<'a>(m: &'a Loaded, s: &str) -> Result<ColimElement<'a>, Error> {
    let f = &m.functor;
    if let Some(rest) = s.trim().strip_prefix('@') {
        let (lvl, coords) = rest.split_once(':').ok_or_else(|| bad(s, "element"))?;
        let level: usize = lvl.trim().parse().map_err(|_| bad(s, "element"))?;
        let value: Vec<BigInt> = if coords.trim().is_empty() {
            vec![]
        } else {
            coords.split(',').map(|c| c.trim().parse().map_err(|_| bad(s, "element"))).collect::<Result<_, _>>()?
        };
        f.check_level(level)?;
        if value.len() != f.level(level).ngens() {
            return Err(Error::Dimension(format!(
                "level {level} has {} generators, element has {} coordinates",
                f.level(level).ngens(),
                value.len()
            )));
        }
        return ColimElement::new(f, level, value);
    }
    let Some(n) = m.representable else {
        return Err(Error::Parse("words name elements of P(n) only; use @level:coords".into()));
    };
    let combo = parse_combination(s)?;
    let level = combo.iter().map(|(_, w)| w.codomain()).max().ok_or_else(|| bad(s, "element"))?;
    f.check_level(level)?;
    let mut value = vec![BigInt::from(0); f.level(level).ngens()];
    for (c, w) in &combo {
        if w.source() != n {
            return Err(Error::Parse(format!("`{w}` is not an injection from {n} elements")));
        }
        let w: InjWord = w.widen(level);
        value[w.lex_index()] += c;
    }
    ColimElement::new(f, level, value)
}
