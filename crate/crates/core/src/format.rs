//! Line-oriented text formats for signatures, stored forms, MST3 keys and
//! ciphertexts.
//!
//! Blank lines and lines starting with `#` are ignored. Group elements are
//! written as lowercase hex of fixed width (see [`GVec::to_hex`]), Suzuki
//! elements as `c,d` hex pairs.
//!
//! ```text
//! logsig n=<n> type=<r_1,...,r_s> target=<group|subgroup|set>
//! basis=<hex> ...          subgroup targets
//! elements=<hex> ...       set targets
//! <hex> <hex> ...          one line per block
//!
//! drstore n=<n> s=<s> v=<v_1,...,v_2s> seed=<ex6|ex7|inline>
//! basis <hex> ...
//! K i=<i> <hex> ...        i = 2, ..., s
//! logsig ...               inline seed only
//!
//! mst3pub n=<n> k=<k> type=<r_1,...,r_s>
//! alpha
//! <c,d> ...                one line per block
//! gamma
//! <c,d> ...
//!
//! mst3priv n=<n> k=<k> type=<r_1,...,r_s>
//! t <c,d> ...              t_0, ..., t_s
//! logsig ...               beta
//! drstore ...              optional
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::algebra::{GVec, Subgroup};
use crate::construct::{seed_for, Seed, SeedKind, StoredForm};
use crate::error::{Error, Result};
use crate::mst3::{Cover, PrivateKey, PublicKey, SuzukiElem, SuzukiParams};
use crate::signature::{Block, LogSig, Target};

type Line<'a> = (usize, &'a str);

fn content_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn at_line(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { line: 0, msg } => Error::Parse { line, msg },
        Error::Parse { .. } => e,
        other => Error::parse(line, other.to_string()),
    }
}

fn hex(tok: &str, dim: usize, line: usize) -> Result<GVec> {
    GVec::from_hex(tok, dim).map_err(|e| at_line(e, line))
}

fn pair(tok: &str, n: usize, line: usize) -> Result<SuzukiElem> {
    SuzukiElem::from_hex(tok, n).map_err(|e| at_line(e, line))
}

fn header<'a>(line: Line<'a>, magic: &str, keys: &[&str]) -> Result<HashMap<&'a str, &'a str>> {
    let (no, text) = line;
    let mut toks = text.split_whitespace();
    if toks.next() != Some(magic) {
        return Err(Error::parse(no, format!("expected '{magic}' header")));
    }
    let mut out = HashMap::new();
    for tok in toks {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(no, format!("expected key=value, got '{tok}'")))?;
        if !keys.contains(&k) {
            return Err(Error::parse(no, format!("unknown key '{k}'")));
        }
        if out.insert(k, v).is_some() {
            return Err(Error::parse(no, format!("duplicate key '{k}'")));
        }
    }
    for k in keys {
        if !out.contains_key(k) {
            return Err(Error::parse(no, format!("missing key '{k}'")));
        }
    }
    Ok(out)
}

fn number(v: &str, line: usize) -> Result<usize> {
    v.parse()
        .map_err(|_| Error::parse(line, format!("expected a number, got '{v}'")))
}

fn list(v: &str, line: usize) -> Result<Vec<usize>> {
    v.split(',').map(|x| number(x, line)).collect()
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn hex_line(xs: &[GVec]) -> String {
    xs.iter().map(|g| g.to_hex()).collect::<Vec<_>>().join(" ")
}

/// Serializes a signature.
pub fn write_logsig(sig: &LogSig) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "logsig n={} type={} target={}",
        sig.dim(),
        join(&sig.type_vec()),
        sig.target().kind()
    );
    match sig.target() {
        Target::Group => {}
        Target::Subgroup(u) => {
            for b in u.basis() {
                let _ = writeln!(out, "basis={}", b.to_hex());
            }
        }
        Target::Set(elems) => {
            let _ = writeln!(out, "elements={}", hex_line(elems));
        }
    }
    for b in sig.blocks() {
        let _ = writeln!(out, "{}", hex_line(b.elems()));
    }
    out
}

fn parse_logsig_lines(lines: &[Line<'_>]) -> Result<LogSig> {
    let first = *lines
        .first()
        .ok_or_else(|| Error::parse(1, "empty signature file"))?;
    let h = header(first, "logsig", &["n", "type", "target"])?;
    let n = number(h["n"], first.0)?;
    if n == 0 || n > 64 {
        return Err(Error::parse(first.0, format!("n={n} out of range 1..=64")));
    }
    let types = list(h["type"], first.0)?;
    let mut basis = Vec::new();
    let mut elements = Vec::new();
    let mut blocks = Vec::new();
    for &(no, text) in &lines[1..] {
        if let Some(rest) = text.strip_prefix("basis=") {
            for t in rest.split_whitespace() {
                basis.push(hex(t, n, no)?);
            }
        } else if let Some(rest) = text.strip_prefix("elements=") {
            for t in rest.split_whitespace() {
                elements.push(hex(t, n, no)?);
            }
        } else {
            let elems = text
                .split_whitespace()
                .map(|t| hex(t, n, no))
                .collect::<Result<Vec<_>>>()?;
            let i = blocks.len();
            if i >= types.len() {
                return Err(Error::parse(no, format!("more than {} blocks", types.len())));
            }
            if elems.len() != types[i] {
                return Err(Error::parse(
                    no,
                    format!("block {} has {} elements, type says {}", i + 1, elems.len(), types[i]),
                ));
            }
            blocks.push(Block::new(elems).map_err(|e| at_line(e, no))?);
        }
    }
    let last = lines.last().map_or(first.0, |l| l.0);
    if blocks.len() != types.len() {
        return Err(Error::parse(
            last,
            format!("{} blocks, type says {}", blocks.len(), types.len()),
        ));
    }
    let target = match h["target"] {
        "group" => Target::Group,
        "subgroup" => Target::Subgroup(Subgroup::span(n, &basis).map_err(|e| at_line(e, first.0))?),
        "set" => Target::Set(elements),
        other => return Err(Error::parse(first.0, format!("unknown target '{other}'"))),
    };
    LogSig::new(blocks, target).map_err(|e| at_line(e, first.0))
}

/// Parses the output of [`write_logsig`].
pub fn parse_logsig(text: &str) -> Result<LogSig> {
    parse_logsig_lines(&content_lines(text))
}

/// Serializes a stored form.
pub fn write_drstore(st: &StoredForm) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "drstore n={} s={} v={} seed={}",
        st.n,
        st.s(),
        join(&st.v),
        st.seed.kind().name()
    );
    let _ = writeln!(out, "basis {}", hex_line(&st.basis));
    for (i, ks) in st.k_sets.iter().enumerate() {
        let _ = writeln!(out, "K i={} {}", i + 2, hex_line(ks));
    }
    if st.seed.kind() == SeedKind::Inline {
        out.push_str(&write_logsig(st.seed.sig()));
    }
    out
}

fn parse_drstore_lines(lines: &[Line<'_>]) -> Result<StoredForm> {
    let first = *lines
        .first()
        .ok_or_else(|| Error::parse(1, "empty stored form"))?;
    let h = header(first, "drstore", &["n", "s", "v", "seed"])?;
    let n = number(h["n"], first.0)?;
    let s = number(h["s"], first.0)?;
    let v = list(h["v"], first.0)?;
    if n == 0 || n > 64 {
        return Err(Error::parse(first.0, format!("n={n} out of range 1..=64")));
    }
    if s == 0 || v.len() != 2 * s {
        return Err(Error::parse(first.0, format!("v has {} entries, s={s}", v.len())));
    }
    let mut basis = Vec::new();
    let mut k_sets: Vec<Option<Vec<GVec>>> = vec![None; s.saturating_sub(1)];
    let mut rest = &lines[lines.len()..];
    for (pos, &(no, text)) in lines.iter().enumerate().skip(1) {
        let mut toks = text.split_whitespace();
        match toks.next() {
            Some("basis") => {
                for t in toks {
                    basis.push(hex(t, n, no)?);
                }
            }
            Some("K") => {
                let it = toks
                    .next()
                    .and_then(|t| t.strip_prefix("i="))
                    .ok_or_else(|| Error::parse(no, "expected 'K i=<i>'"))?;
                let i = number(it, no)?;
                if i < 2 || i > s {
                    return Err(Error::parse(no, format!("K index {i} outside 2..={s}")));
                }
                let ks = toks.map(|t| hex(t, n, no)).collect::<Result<Vec<_>>>()?;
                if k_sets[i - 2].replace(ks).is_some() {
                    return Err(Error::parse(no, format!("K i={i} given twice")));
                }
            }
            Some("logsig") => {
                rest = &lines[pos..];
                break;
            }
            Some(other) => return Err(Error::parse(no, format!("unexpected token '{other}'"))),
            None => {}
        }
    }
    let k_sets = k_sets
        .into_iter()
        .enumerate()
        .map(|(i, k)| k.ok_or_else(|| Error::parse(first.0, format!("missing K i={}", i + 2))))
        .collect::<Result<Vec<_>>>()?;
    let seed = match h["seed"] {
        "ex6" | "ex7" => {
            let seed = seed_for(v[0], v[s]).map_err(|e| at_line(e, first.0))?;
            if seed.kind().name() != h["seed"] {
                return Err(Error::parse(
                    first.0,
                    format!("seed={} does not match v", h["seed"]),
                ));
            }
            if !rest.is_empty() {
                return Err(Error::parse(rest[0].0, "inline signature for a built-in seed"));
            }
            seed
        }
        "inline" => {
            if rest.is_empty() {
                return Err(Error::parse(first.0, "seed=inline without a logsig section"));
            }
            Seed::inline(parse_logsig_lines(rest)?, v[0]).map_err(|e| at_line(e, rest[0].0))?
        }
        other => return Err(Error::parse(first.0, format!("unknown seed '{other}'"))),
    };
    let st = StoredForm {
        n,
        v,
        basis,
        k_sets,
        seed,
    };
    crate::construct::FastFactorizer::new(&st).map_err(|e| at_line(e, first.0))?;
    Ok(st)
}

/// Parses and validates the output of [`write_drstore`].
pub fn parse_drstore(text: &str) -> Result<StoredForm> {
    parse_drstore_lines(&content_lines(text))
}

fn pair_line(xs: &[SuzukiElem]) -> String {
    xs.iter().map(|e| e.to_hex()).collect::<Vec<_>>().join(" ")
}

pub fn write_public_key(pk: &PublicKey) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "mst3pub n={} k={} type={}",
        pk.params.n(),
        pk.params.k(),
        join(&pk.alpha.type_vec())
    );
    for (name, cover) in [("alpha", &pk.alpha), ("gamma", &pk.gamma)] {
        let _ = writeln!(out, "{name}");
        for b in cover.blocks() {
            let _ = writeln!(out, "{}", pair_line(b));
        }
    }
    out
}

fn params_from(h: &HashMap<&str, &str>, line: usize) -> Result<(SuzukiParams, Vec<usize>)> {
    let p = SuzukiParams::new(number(h["n"], line)?, number(h["k"], line)?)
        .map_err(|e| at_line(e, line))?;
    Ok((p, list(h["type"], line)?))
}

pub fn parse_public_key(text: &str) -> Result<PublicKey> {
    let lines = content_lines(text);
    let first = *lines
        .first()
        .ok_or_else(|| Error::parse(1, "empty key file"))?;
    let h = header(first, "mst3pub", &["n", "k", "type"])?;
    let (p, types) = params_from(&h, first.0)?;
    let s = types.len();
    let expect = 2 * s + 3;
    if lines.len() != expect {
        return Err(Error::parse(
            lines.last().map_or(1, |l| l.0),
            format!("expected {expect} lines for {s} blocks, got {}", lines.len()),
        ));
    }
    let mut covers = Vec::new();
    for (c, name) in ["alpha", "gamma"].iter().enumerate() {
        let start = 1 + c * (s + 1);
        let (no, text) = lines[start];
        if text != *name {
            return Err(Error::parse(no, format!("expected '{name}'")));
        }
        let mut blocks = Vec::new();
        for (i, &(no, text)) in lines[start + 1..start + 1 + s].iter().enumerate() {
            let b = text
                .split_whitespace()
                .map(|t| pair(t, p.n(), no))
                .collect::<Result<Vec<_>>>()?;
            if b.len() != types[i] {
                return Err(Error::parse(
                    no,
                    format!("block {} has {} elements, type says {}", i + 1, b.len(), types[i]),
                ));
            }
            blocks.push(b);
        }
        covers.push(Cover::new(blocks).map_err(|e| at_line(e, no))?);
    }
    let gamma = covers.pop().expect("two covers");
    let alpha = covers.pop().expect("two covers");
    Ok(PublicKey {
        params: p,
        alpha,
        gamma,
    })
}

pub fn write_private_key(sk: &PrivateKey) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "mst3priv n={} k={} type={}",
        sk.params.n(),
        sk.params.k(),
        join(&sk.beta.type_vec())
    );
    let _ = writeln!(out, "t {}", pair_line(&sk.t));
    out.push_str(&write_logsig(&sk.beta));
    if let Some(st) = &sk.stored {
        out.push_str(&write_drstore(st));
    }
    out
}

pub fn parse_private_key(text: &str) -> Result<PrivateKey> {
    let lines = content_lines(text);
    let first = *lines
        .first()
        .ok_or_else(|| Error::parse(1, "empty key file"))?;
    let h = header(first, "mst3priv", &["n", "k", "type"])?;
    let (p, types) = params_from(&h, first.0)?;
    let (no, text) = *lines
        .get(1)
        .ok_or_else(|| Error::parse(first.0, "missing 't' line"))?;
    let mut toks = text.split_whitespace();
    if toks.next() != Some("t") {
        return Err(Error::parse(no, "expected 't' line"));
    }
    let t = toks.map(|x| pair(x, p.n(), no)).collect::<Result<Vec<_>>>()?;
    if t.len() != types.len() + 1 {
        return Err(Error::parse(
            no,
            format!("{} t values for {} blocks", t.len(), types.len()),
        ));
    }
    let body = &lines[2..];
    let split = body
        .iter()
        .position(|(_, l)| l.starts_with("drstore"))
        .unwrap_or(body.len());
    let beta = parse_logsig_lines(&body[..split])?;
    if beta.type_vec() != types || beta.dim() != p.n() {
        return Err(Error::parse(
            body.first().map_or(no, |l| l.0),
            "beta does not match the header",
        ));
    }
    let stored = if split < body.len() {
        Some(parse_drstore_lines(&body[split..])?)
    } else {
        None
    };
    Ok(PrivateKey {
        params: p,
        beta,
        t,
        stored,
    })
}
