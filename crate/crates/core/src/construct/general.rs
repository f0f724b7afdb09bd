//! Aperiodic signatures for every `2^n` with `n >= 6`, their compact stored
//! form, and factorization in time linear in `n`.
//!
//! The group is split along an ordered basis `B = B_1 u ... u B_{2s}` as
//!
//! ```text
//! G = U_1 x ... x U_s x D_1 x ... x D_s,   v = (dim U_1, ..., dim U_s, dim D_1, ..., dim D_s)
//! ```
//!
//! `U_1 x D_1` carries a known aperiodic seed signature. For `i >= 2` a set
//! `K_i` of `|D_i|` distinct nonzero elements of `U_1 x ... x U_{i-1}` gives
//!
//! ```text
//! A_i^(j) = {0} u { k_i^(j) + u : u in U_i, u != 0 }
//! B_i     = (d_i(0) + A_i^(0)) u ... u (d_i(r_i - 1) + A_i^(r_i - 1))
//! ```
//!
//! and the result is `[seed blocks..., B_2, ..., B_s]`. No `A_i^(j)` is a
//! translate of another, so each `B_i` is aperiodic exactly when the period
//! sets of its `A_i^(j)` have empty intersection, which they do.
//!
//! # Positions
//!
//! Inside a factor `U_i` or `D_i` with generators `b_1, ..., b_v` (in basis
//! order), the element with coordinates `(y_1, ..., y_v)` has position
//! `c = sum_l y_l 2^(v - l)`: coordinate strings in lexicographic order.
//! `A_i^(j)` lists `0` at position 0 and `k_i^(j) + u(c)` at position `c`;
//! `B_i` holds `d_i(j) + A_i^(j)[c]` at position `j * |U_i| + c`.

use rand::seq::index::sample;
use rand::Rng;

use super::dr::{dr_construct, DrBlueprint, TupleCheck};
use crate::algebra::{GVec, Subgroup, Transversal};
use crate::error::{Error, Result};
use crate::periodicity::{check_periodicity_criterion, is_aperiodic, multiple_of, CriterionMode};
use crate::signature::{tau, Block, LogSig, Target, DEFAULT_BUDGET};

/// Which seed signature a construction starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedKind {
    /// Type `(8,8)` over `2^6`.
    Ex6,
    /// Type `(8,4,4)` over `2^7`.
    Ex7,
    /// Supplied by the caller.
    Inline,
}

impl SeedKind {
    pub fn name(self) -> &'static str {
        match self {
            SeedKind::Ex6 => "ex6",
            SeedKind::Ex7 => "ex7",
            SeedKind::Inline => "inline",
        }
    }
}

/// An aperiodic signature of a small group `U_1 x D_1`, with the local
/// generators that span each factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    kind: SeedKind,
    sig: LogSig,
    u_bits: Vec<usize>,
    d_bits: Vec<usize>,
}

pub(crate) const EX6_NAMES: &str = "uvwxyz";
pub(crate) const EX7_NAMES: &str = "tuvwxyz";

/// Generator names, subgroup generators, transversal, `delta` and family of
/// a seed built with [`dr_construct`].
pub struct SeedInputs {
    pub names: &'static str,
    pub u: &'static [&'static str],
    pub r: &'static [&'static str],
    pub delta: &'static [&'static [&'static str]],
    pub family: &'static [&'static [&'static [&'static str]]],
    /// Local generators of `U_1` and `D_1` in the stored layout.
    pub u_gens: &'static [&'static str],
    pub d_gens: &'static [&'static str],
}

pub const EX6_INPUTS: SeedInputs = SeedInputs {
    names: EX6_NAMES,
    u: &["u", "v", "w", "x"],
    r: &["1", "y", "z", "yz"],
    delta: &[&["1", "z"], &["1", "y"]],
    family: &[
        &[&["1", "u", "v", "uv"], &["1", "w", "x", "wx"]],
        &[&["1", "uw", "vx", "uvwx"], &["1", "ux", "uvw", "vwx"]],
    ],
    u_gens: &["u", "v", "w", "x"],
    d_gens: &["y", "z"],
};

/// The `2^7` seed. `A_2^(1)` is `{1, x, y, vxy}`.
///
/// With the often quoted `A_2^(1) = {1, x, y, xyz}` instead, the tuple
/// `(A_1^(1), A_2^(1), A_3^(1))` has only 56 distinct products
/// (`wx + xyz + zuw = uy`) and the assembled signature covers 120 of the 128
/// elements; see [`EX7_PRINTED_INPUTS`]. Replacing `z` by `v` in that one
/// element is the only single-letter change that yields a logarithmic
/// signature with all three blocks aperiodic.
pub const EX7_INPUTS: SeedInputs = SeedInputs {
    names: EX7_NAMES,
    u: &["u", "v", "w", "x", "y", "z"],
    r: &["1", "t"],
    delta: &[&["1", "t"], &["1"], &["1"]],
    family: &[
        &[&["1", "v", "wx", "vwx"], &["1", "w", "vz", "vwz"]],
        &[&["1", "x", "y", "vxy"]],
        &[&["1", "z", "u", "zuw"]],
    ],
    u_gens: &["u", "v", "w", "x", "y", "z"],
    d_gens: &["t"],
};

/// The `2^7` inputs with `A_2^(1) = {1, x, y, xyz}`. Not a valid blueprint.
pub const EX7_PRINTED_INPUTS: SeedInputs = SeedInputs {
    names: EX7_NAMES,
    u: &["u", "v", "w", "x", "y", "z"],
    r: &["1", "t"],
    delta: &[&["1", "t"], &["1"], &["1"]],
    family: &[
        &[&["1", "v", "wx", "vwx"], &["1", "w", "vz", "vwz"]],
        &[&["1", "x", "y", "xyz"]],
        &[&["1", "z", "u", "zuw"]],
    ],
    u_gens: &["u", "v", "w", "x", "y", "z"],
    d_gens: &["t"],
};

fn words(ws: &[&str], names: &str) -> Result<Vec<GVec>> {
    ws.iter().map(|w| GVec::from_word(w, names)).collect()
}

impl SeedInputs {
    pub fn blueprint(&self) -> Result<DrBlueprint> {
        let n = self.names.chars().count();
        let u = Subgroup::span(n, &words(self.u, self.names)?)?;
        let r = Transversal::new(u, Subgroup::whole(n)?, words(self.r, self.names)?)?;
        let delta = self
            .delta
            .iter()
            .map(|d| Block::from_words(d, self.names))
            .collect::<Result<_>>()?;
        let family = self
            .family
            .iter()
            .map(|f| f.iter().map(|a| Block::from_words(a, self.names)).collect())
            .collect::<Result<_>>()?;
        DrBlueprint::new(r, delta, family)
    }

    fn bits(&self, gens: &[&str]) -> Result<Vec<usize>> {
        gens.iter()
            .map(|g| {
                let v = GVec::from_word(g, self.names)?;
                Ok(v.bits().trailing_zeros() as usize)
            })
            .collect()
    }
}

impl Seed {
    fn from_inputs(kind: SeedKind, inputs: &SeedInputs) -> Result<Self> {
        let sig = dr_construct(&inputs.blueprint()?, DEFAULT_BUDGET)?.sig;
        Seed::new(kind, sig, inputs.bits(inputs.u_gens)?, inputs.bits(inputs.d_gens)?)
    }

    fn new(kind: SeedKind, sig: LogSig, u_bits: Vec<usize>, d_bits: Vec<usize>) -> Result<Self> {
        let dim = sig.dim();
        let mut all: Vec<usize> = u_bits.iter().chain(&d_bits).copied().collect();
        all.sort_unstable();
        if all != (0..dim).collect::<Vec<_>>() {
            return Err(Error::InvalidParams(
                "seed factors must split the local generators".into(),
            ));
        }
        Ok(Seed {
            kind,
            sig,
            u_bits,
            d_bits,
        })
    }

    /// The `(8,8)` seed over `2^6 = <u,v,w,x> x <y,z>`.
    pub fn ex6() -> Self {
        Seed::from_inputs(SeedKind::Ex6, &EX6_INPUTS).expect("built-in seed is valid")
    }

    /// The `(8,4,4)` seed over `2^7 = <u,...,z> x <t>`, with `t` as bit 0.
    pub fn ex7() -> Self {
        Seed::from_inputs(SeedKind::Ex7, &EX7_INPUTS).expect("built-in seed is valid")
    }

    /// A caller-supplied seed whose low `u_dim` local bits span `U_1` and the
    /// rest `D_1`. The signature must be an aperiodic logarithmic signature
    /// of the whole local group.
    pub fn inline(sig: LogSig, u_dim: usize) -> Result<Self> {
        let dim = sig.dim();
        if u_dim == 0 || u_dim >= dim {
            return Err(Error::InvalidParams(format!(
                "U_1 dimension {u_dim} must lie strictly between 0 and {dim}"
            )));
        }
        Seed::new(SeedKind::Inline, sig, (0..u_dim).collect(), (u_dim..dim).collect())
    }

    pub fn kind(&self) -> SeedKind {
        self.kind
    }

    pub fn sig(&self) -> &LogSig {
        &self.sig
    }

    pub fn u_dim(&self) -> usize {
        self.u_bits.len()
    }

    pub fn d_dim(&self) -> usize {
        self.d_bits.len()
    }

    fn check(&self) -> Result<()> {
        if !self.sig.validate(DEFAULT_BUDGET)?.is_logsig || self.sig.target() != &Target::Group {
            return Err(Error::InvalidParams(
                "seed is not a logarithmic signature of its group".into(),
            ));
        }
        if !is_aperiodic(&self.sig) {
            return Err(Error::InvalidParams("seed has a periodic block".into()));
        }
        Ok(())
    }
}

/// All inputs of the general construction.
#[derive(Clone, Debug)]
pub struct GeneralConstructionSpec {
    pub n: usize,
    /// `2s` factor dimensions, `U_1..U_s` then `D_1..D_s`.
    pub v: Vec<usize>,
    pub seed: Seed,
    /// Ordered basis of `2^n`, grouped by factor as `v` dictates.
    pub basis: Vec<GVec>,
    /// `K_2, ..., K_s`.
    pub k_sets: Vec<Vec<GVec>>,
}

/// Factor dimensions used when none are given: the `2^6` seed for even `n`,
/// the `2^7` seed for odd `n`, then steps with `|U_i| = |D_i| = 2`.
pub fn default_dims(n: usize) -> Result<(Seed, Vec<usize>)> {
    if !(6..=64).contains(&n) {
        return Err(Error::InvalidParams(format!(
            "the construction needs 6 <= n <= 64, got {n}"
        )));
    }
    let (seed, u1, d1) = if n.is_multiple_of(2) {
        (Seed::ex6(), 4, 2)
    } else {
        (Seed::ex7(), 6, 1)
    };
    let steps = (n - u1 - d1) / 2;
    let mut v = vec![u1];
    v.extend(std::iter::repeat_n(1, steps));
    v.push(d1);
    v.extend(std::iter::repeat_n(1, steps));
    Ok((seed, v))
}

/// Picks the built-in seed matching `dim U_1` and `dim D_1`.
pub fn seed_for(u_dim: usize, d_dim: usize) -> Result<Seed> {
    match (u_dim, d_dim) {
        (4, 2) => Ok(Seed::ex6()),
        (6, 1) => Ok(Seed::ex7()),
        _ => Err(Error::InvalidParams(format!(
            "no built-in seed with dim U_1 = {u_dim}, dim D_1 = {d_dim}"
        ))),
    }
}

fn offsets(v: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    let mut out = Vec::with_capacity(v.len() + 1);
    out.push(0);
    for &x in v {
        acc += x;
        out.push(acc);
    }
    out
}

impl GeneralConstructionSpec {
    /// Draws the `K_i` uniformly among distinct nonzero elements and, when
    /// `random_basis` is set, a uniformly random ordered basis.
    pub fn random<R: Rng + ?Sized>(
        n: usize,
        v: Option<Vec<usize>>,
        random_basis: bool,
        rng: &mut R,
    ) -> Result<Self> {
        let (seed, v) = match v {
            None => default_dims(n)?,
            Some(v) => {
                if v.len() < 2 || !v.len().is_multiple_of(2) {
                    return Err(Error::InvalidParams("v needs 2s entries".into()));
                }
                let s = v.len() / 2;
                (seed_for(v[0], v[s])?, v)
            }
        };
        if n == 0 || n > 64 {
            return Err(Error::DimensionOutOfRange(n));
        }
        let basis = if random_basis {
            random_basis_of(n, rng)
        } else {
            (0..n).map(|i| GVec::from_raw(1 << i, n)).collect()
        };
        let s = v.len() / 2;
        let offs = offsets(&v);
        if offs[2 * s] != n {
            return Err(Error::InvalidParams(format!(
                "dimensions {v:?} do not add up to {n}"
            )));
        }
        let mut k_sets = Vec::new();
        for i in 1..s {
            let low = offs[i];
            let r = 1usize << v[s + i];
            if low >= 63 || (r as u64) >= (1u64 << low) {
                return Err(Error::InvalidParams(format!(
                    "|D_{}| = {r} must be below |U_1 ... U_{}| = 2^{low}",
                    i + 1,
                    i
                )));
            }
            let picks = sample(rng, (1usize << low) - 1, r);
            let ks = picks
                .iter()
                .map(|c| {
                    let c = c as u64 + 1;
                    (0..low)
                        .filter(|t| (c >> t) & 1 == 1)
                        .fold(GVec::from_raw(0, n), |acc, t| acc + basis[t])
                })
                .collect();
            k_sets.push(ks);
        }
        Ok(GeneralConstructionSpec {
            n,
            v,
            seed,
            basis,
            k_sets,
        })
    }

    pub fn s(&self) -> usize {
        self.v.len() / 2
    }

    fn offsets(&self) -> Vec<usize> {
        offsets(&self.v)
    }

    fn span_of_parts(&self, parts: impl Iterator<Item = usize>) -> Result<Subgroup> {
        let offs = self.offsets();
        let gens: Vec<GVec> = parts
            .flat_map(|l| self.basis[offs[l]..offs[l + 1]].to_vec())
            .collect();
        Subgroup::span(self.n, &gens)
    }

    /// Checks every structural requirement of the construction.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 || n > 64 {
            return Err(Error::DimensionOutOfRange(n));
        }
        if self.v.len() < 2 || !self.v.len().is_multiple_of(2) {
            return Err(Error::InvalidParams("v needs 2s entries".into()));
        }
        let s = self.s();
        if self.v.iter().sum::<usize>() != n {
            return Err(Error::InvalidParams(format!(
                "dimensions {:?} do not add up to {n}",
                self.v
            )));
        }
        if let Some(i) = self.v.iter().position(|&x| x == 0) {
            return Err(Error::InvalidParams(format!("factor {} is trivial", i + 1)));
        }
        if self.v[0] != self.seed.u_dim() || self.v[s] != self.seed.d_dim() {
            return Err(Error::InvalidParams(format!(
                "seed splits as {} + {}, v starts with {} and {}",
                self.seed.u_dim(),
                self.seed.d_dim(),
                self.v[0],
                self.v[s]
            )));
        }
        self.seed.check()?;
        if self.basis.len() != n || self.basis.iter().any(|b| b.dim() != n) {
            return Err(Error::InvalidParams(format!("basis must hold {n} elements of 2^{n}")));
        }
        if Subgroup::span(n, &self.basis)?.rank() != n {
            return Err(Error::InvalidParams("basis elements are dependent".into()));
        }
        if self.k_sets.len() != s - 1 {
            return Err(Error::InvalidParams(format!(
                "{} K sets for s = {s}",
                self.k_sets.len()
            )));
        }
        let offs = self.offsets();
        for (i, &below) in offs.iter().enumerate().take(s).skip(1) {
            let r = 1u128 << self.v[s + i];
            if r >= 1u128 << below {
                return Err(Error::InvalidParams(format!(
                    "|D_{}| = {r} must be below |U_1 ... U_{}| = 2^{below}",
                    i + 1,
                    i
                )));
            }
            let ks = &self.k_sets[i - 1];
            if ks.len() as u128 != r {
                return Err(Error::InvalidParams(format!(
                    "K_{} has {} elements, expected {r}",
                    i + 1,
                    ks.len()
                )));
            }
            for (j, k) in ks.iter().enumerate() {
                if let Some(l) = ks[..j].iter().position(|x| x == k) {
                    return Err(Error::InvalidParams(format!(
                        "k_{}^({}) = k_{}^({}) = {k}",
                        i + 1,
                        l + 1,
                        i + 1,
                        j + 1
                    )));
                }
            }
            let lower = self.span_of_parts(0..i)?;
            for (j, &k) in ks.iter().enumerate() {
                if k.dim() != n || k.is_zero() || !lower.contains(k) {
                    return Err(Error::InvalidParams(format!(
                        "k_{}^({}) = {k} is not a nonzero element of U_1 ... U_{}",
                        i + 1,
                        j + 1,
                        i
                    )));
                }
            }
        }
        Ok(())
    }
}

fn random_basis_of<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<GVec> {
    loop {
        let cand: Vec<GVec> = (0..n)
            .map(|_| GVec::from_raw(rng.gen::<u64>(), n))
            .collect();
        if Subgroup::span(n, &cand).map(|s| s.rank()) == Ok(n) {
            return cand;
        }
    }
}

/// What has to be kept to factor with respect to a constructed signature.
#[derive(Clone, Debug)]
pub struct StoredForm {
    pub n: usize,
    pub v: Vec<usize>,
    pub basis: Vec<GVec>,
    pub k_sets: Vec<Vec<GVec>>,
    pub seed: Seed,
}

impl StoredForm {
    pub fn s(&self) -> usize {
        self.v.len() / 2
    }

    fn spec(&self) -> GeneralConstructionSpec {
        GeneralConstructionSpec {
            n: self.n,
            v: self.v.clone(),
            seed: self.seed.clone(),
            basis: self.basis.clone(),
            k_sets: self.k_sets.clone(),
        }
    }

    /// The block sizes of the signature this form describes.
    pub fn type_vec(&self) -> Vec<usize> {
        let s = self.s();
        let mut t = self.seed.sig.type_vec();
        t.extend((1..s).map(|i| 1usize << (self.v[i] + self.v[s + i])));
        t
    }

    /// Element of factor `part` at position `c`.
    fn part_element(&self, offs: &[usize], part: usize, c: u64) -> GVec {
        let v = self.v[part];
        (0..v)
            .filter(|t| (c >> (v - 1 - t)) & 1 == 1)
            .fold(GVec::from_raw(0, self.n), |acc, t| acc + self.basis[offs[part] + t])
    }

    fn embed_seed(&self, offs: &[usize], local: GVec) -> GVec {
        let s = self.s();
        let mut g = GVec::from_raw(0, self.n);
        for (t, &b) in self.seed.u_bits.iter().enumerate() {
            if local.bit(b) {
                g = g + self.basis[offs[0] + t];
            }
        }
        for (t, &b) in self.seed.d_bits.iter().enumerate() {
            if local.bit(b) {
                g = g + self.basis[offs[s] + t];
            }
        }
        g
    }

    fn a_set(&self, offs: &[usize], i: usize, j: usize) -> Block {
        let k = self.k_sets[i - 1][j];
        let size = 1u64 << self.v[i];
        let elems = std::iter::once(GVec::from_raw(0, self.n))
            .chain((1..size).map(|c| k + self.part_element(offs, i, c)))
            .collect();
        Block::new(elems).expect("nonempty")
    }

    /// `breve(beta)(x)` computed from the stored data alone.
    pub fn element(&self, x: u128) -> Result<GVec> {
        let types = self.type_vec();
        let idx = crate::signature::tau_inv(&types, x)?;
        let offs = offsets(&self.v);
        let s = self.s();
        let seed_blocks = self.seed.sig.blocks().len();
        let local = self.seed.sig.product(&idx[..seed_blocks]);
        let mut g = self.embed_seed(&offs, local);
        for i in 1..s {
            let h = idx[seed_blocks + i - 1] as u64;
            let (j, c) = (h >> self.v[i], h & ((1u64 << self.v[i]) - 1));
            g = g + self.part_element(&offs, s + i, j);
            if c != 0 {
                g = g + self.k_sets[i - 1][j as usize] + self.part_element(&offs, i, c);
            }
        }
        Ok(g)
    }
}

/// Output of [`general_construct`].
#[derive(Clone, Debug)]
pub struct Constructed {
    pub sig: LogSig,
    pub stored: StoredForm,
    pub tuple_check: TupleCheck,
}

/// Runs the general construction.
///
/// The seed is validated as an aperiodic logarithmic signature, the pieces
/// are assembled through [`dr_construct`] with `U = U_1 x D_1 x U_2 x ... x
/// U_s` and `delta = [{0}, ..., {0}, D_2, ..., D_s]`, and every block `B_i`
/// is checked against the no-multiple criterion. `budget` bounds the
/// all-tuples validation inside the assembly.
pub fn general_construct(spec: &GeneralConstructionSpec, budget: u128) -> Result<Constructed> {
    spec.validate()?;
    let n = spec.n;
    let s = spec.s();
    let stored = StoredForm {
        n,
        v: spec.v.clone(),
        basis: spec.basis.clone(),
        k_sets: spec.k_sets.clone(),
        seed: spec.seed.clone(),
    };
    let offs = offsets(&spec.v);

    let u_parts = (0..s).chain(std::iter::once(s));
    let big_u = spec.span_of_parts(u_parts)?;
    let r_group = spec.span_of_parts(s + 1..2 * s)?;
    let ambient = Subgroup::whole(n)?;
    let transversal = Transversal::new(big_u, ambient, r_group.elements())?;

    let zero = GVec::from_raw(0, n);
    let mut delta = Vec::new();
    let mut family = Vec::new();
    for b in spec.seed.sig.blocks() {
        delta.push(Block::new(vec![zero])?);
        let embedded = b.iter().map(|&g| stored.embed_seed(&offs, g)).collect();
        family.push(vec![Block::new(embedded)?]);
    }
    for i in 1..s {
        let r = 1u64 << spec.v[s + i];
        delta.push(Block::new(
            (0..r).map(|j| stored.part_element(&offs, s + i, j)).collect(),
        )?);
        family.push((0..r as usize).map(|j| stored.a_set(&offs, i, j)).collect());
    }

    let bp = DrBlueprint::new(transversal, delta, family)?;
    let out = dr_construct(&bp, budget)?;

    let seed_blocks = spec.seed.sig.blocks().len();
    for i in 1..s {
        let as_ = &bp.family()[seed_blocks + i - 1];
        for (j, a) in as_.iter().enumerate() {
            for (l, b) in as_.iter().enumerate() {
                if j != l {
                    if let Some(m) = multiple_of(a.elems(), b.elems()) {
                        return Err(Error::InvalidBlueprint(format!(
                            "A_{}^({}) is a multiple of A_{}^({}) (witness {})",
                            i + 1,
                            j + 1,
                            i + 1,
                            l + 1,
                            m.witness
                        )));
                    }
                }
            }
        }
        let ds = bp.delta()[seed_blocks + i - 1].elems();
        let report = check_periodicity_criterion(ds, as_, CriterionMode::NoMultiple)?;
        if report.predicted_periodic != Some(false) {
            return Err(Error::InvalidBlueprint(format!(
                "block B_{} is periodic",
                i + 1
            )));
        }
    }
    debug_assert!(is_aperiodic(&out.sig));
    Ok(Constructed {
        sig: out.sig,
        stored,
        tuple_check: out.tuple_check,
    })
}

/// A factorization and the number of elementary steps it took.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub index: u128,
    pub steps: u64,
}

/// Precomputed tables for [`fast_factor`].
#[derive(Clone, Debug)]
pub struct FastFactorizer {
    stored: StoredForm,
    offs: Vec<usize>,
    /// Coordinates (bit `p` for `basis[p]`) of each standard generator.
    std_coords: Vec<u64>,
    /// Coordinates of each `k_i^(j)`.
    k_coords: Vec<Vec<u64>>,
    /// `breve(seed)` as raw local bits, indexed by position.
    seed_table: Vec<u64>,
    radices: Vec<usize>,
}

fn coordinates_table(basis: &[GVec], n: usize) -> Result<Vec<u64>> {
    // Gauss-Jordan on [basis | identity]; row p starts as basis[p] tagged
    // with coordinate bit p.
    let mut rows: Vec<(u64, u64)> = basis.iter().enumerate().map(|(p, b)| (b.bits(), 1u64 << p)).collect();
    let mut out = vec![0u64; n];
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| (rows[r].0 >> col) & 1 == 1)
            .ok_or_else(|| Error::InvalidParams("basis elements are dependent".into()))?;
        rows.swap(col, pivot);
        let (pv, pc) = rows[col];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != col && (row.0 >> col) & 1 == 1 {
                row.0 ^= pv;
                row.1 ^= pc;
            }
        }
    }
    for (col, row) in rows.iter().enumerate() {
        out[col] = row.1;
    }
    Ok(out)
}

impl FastFactorizer {
    pub fn new(stored: &StoredForm) -> Result<Self> {
        stored.spec().validate()?;
        let n = stored.n;
        let std_coords = coordinates_table(&stored.basis, n)?;
        let coords = |g: GVec| -> u64 {
            (0..n)
                .filter(|&t| g.bit(t))
                .fold(0u64, |acc, t| acc ^ std_coords[t])
        };
        let k_coords = stored
            .k_sets
            .iter()
            .map(|ks| ks.iter().map(|&k| coords(k)).collect())
            .collect();
        let seed_table = stored
            .seed
            .sig
            .products(DEFAULT_BUDGET)?
            .iter()
            .map(|g| g.bits())
            .collect();
        let s = stored.s();
        let radices = (1..s).map(|i| 1usize << (stored.v[i] + stored.v[s + i])).collect();
        Ok(FastFactorizer {
            stored: stored.clone(),
            offs: offsets(&stored.v),
            std_coords,
            k_coords,
            seed_table,
            radices,
        })
    }

    pub fn stored(&self) -> &StoredForm {
        &self.stored
    }

    /// Reads factor `part` of the coordinate vector as a position, first
    /// generator most significant.
    fn read_part(&self, y: u64, part: usize, steps: &mut u64) -> u64 {
        let mut c = 0u64;
        for p in self.offs[part]..self.offs[part + 1] {
            *steps += 1;
            c = (c << 1) | ((y >> p) & 1);
        }
        c
    }

    fn part_mask(&self, part: usize) -> u64 {
        let (lo, hi) = (self.offs[part], self.offs[part + 1]);
        let width = hi - lo;
        if width >= 64 {
            u64::MAX
        } else {
            ((1u64 << width) - 1) << lo
        }
    }

    /// Index `x` with `breve(beta)(x) = g`, plus a step count.
    ///
    /// Coordinates of `g` are read off the inverse basis table; then for
    /// `i = s, ..., 2` the `D_i` coordinates give `j`, the `U_i` coordinates
    /// give the position `c`, and `d_i(j) + k_i^(j) + u(c)` is peeled off
    /// (only `d_i(j)` when `c = 0`). What is left lies in `U_1 x D_1` and is
    /// looked up in the seed table.
    pub fn factor(&self, g: GVec) -> Result<Factorization> {
        let st = &self.stored;
        if g.dim() != st.n {
            return Err(Error::DimensionMismatch {
                left: st.n,
                right: g.dim(),
            });
        }
        let s = st.s();
        let mut steps = 0u64;
        let mut y = 0u64;
        for t in 0..st.n {
            steps += 1;
            if g.bit(t) {
                y ^= self.std_coords[t];
            }
        }
        let mut h = vec![0usize; s.saturating_sub(1)];
        for i in (1..s).rev() {
            let j = self.read_part(y, s + i, &mut steps);
            let c = self.read_part(y, i, &mut steps);
            y &= !(self.part_mask(s + i) | self.part_mask(i));
            if c != 0 {
                y ^= self.k_coords[i - 1][j as usize] & !self.part_mask(i);
            }
            h[i - 1] = ((j << st.v[i]) | c) as usize;
            steps += 3;
        }
        let mut local = 0u64;
        for (t, &b) in st.seed.u_bits.iter().enumerate() {
            steps += 1;
            local |= ((y >> (self.offs[0] + t)) & 1) << b;
        }
        for (t, &b) in st.seed.d_bits.iter().enumerate() {
            steps += 1;
            local |= ((y >> (self.offs[s] + t)) & 1) << b;
        }
        let mut seed_index = None;
        for (x, &p) in self.seed_table.iter().enumerate() {
            steps += 1;
            if p == local {
                seed_index = Some(x);
                break;
            }
        }
        let seed_index = seed_index.ok_or_else(|| {
            Error::Factorization("projection onto U_1 x D_1 not produced by the seed".into())
        })?;
        let rest = if h.is_empty() { 0 } else { tau(&self.radices, &h)? };
        let index = seed_index as u128 + self.seed_table.len() as u128 * rest;
        if st.element(index)? != g {
            return Err(Error::Factorization(format!(
                "stored form is inconsistent: index {index} does not map back to {g}"
            )));
        }
        Ok(Factorization { index, steps })
    }
}

/// `x` with `breve(beta)(x) = g` for the signature described by `stored`.
pub fn fast_factor(stored: &StoredForm, g: GVec) -> Result<u128> {
    Ok(FastFactorizer::new(stored)?.factor(g)?.index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn printed_seven_inputs_fail() {
        let bp = EX7_PRINTED_INPUTS.blueprint().unwrap();
        assert!(matches!(dr_construct(&bp, DEFAULT_BUDGET), Err(Error::InvalidBlueprint(_))));
    }

    #[test]
    fn seeds_are_aperiodic() {
        for seed in [Seed::ex6(), Seed::ex7()] {
            seed.check().unwrap();
        }
        assert_eq!(Seed::ex7().sig().type_vec(), vec![8, 4, 4]);
    }

    #[test]
    fn default_dims_shapes() {
        let (seed, v) = default_dims(6).unwrap();
        assert_eq!(seed.kind(), SeedKind::Ex6);
        assert_eq!(v, vec![4, 2]);
        let (seed, v) = default_dims(11).unwrap();
        assert_eq!(seed.kind(), SeedKind::Ex7);
        assert_eq!(v, vec![6, 1, 1, 1, 1, 1]);
        assert!(default_dims(5).is_err());
    }

    #[test]
    fn degenerate_single_factor_returns_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let spec = GeneralConstructionSpec::random(6, None, false, &mut rng).unwrap();
        let out = general_construct(&spec, DEFAULT_BUDGET).unwrap();
        assert_eq!(out.sig.blocks(), Seed::ex6().sig().blocks());
    }

    #[test]
    fn equal_k_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut spec = GeneralConstructionSpec::random(8, None, false, &mut rng).unwrap();
        spec.k_sets[0][1] = spec.k_sets[0][0];
        let err = general_construct(&spec, DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, Error::InvalidParams(_)), "{err}");
    }

    #[test]
    fn spec_validation_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let good = GeneralConstructionSpec::random(10, None, false, &mut rng).unwrap();
        let mut bad = good.clone();
        bad.k_sets[1][0] = GVec::from_raw(0, 10);
        assert!(bad.validate().is_err());
        let mut bad = good.clone();
        bad.basis[3] = bad.basis[2];
        assert!(bad.validate().is_err());
        let mut bad = good.clone();
        bad.v = vec![4, 1, 1, 1, 1, 2];
        assert!(bad.validate().is_err());
        // k outside U_1 x ... x U_{i-1}
        let mut bad = good.clone();
        bad.k_sets[0][0] = bad.basis[5];
        assert!(bad.validate().is_err());
        let mut bad = good;
        bad.k_sets[0].pop();
        assert!(bad.validate().is_err());
        assert!(GeneralConstructionSpec::random(10, Some(vec![4, 2, 1, 1, 1, 1]), false, &mut rng).is_err());
        assert!(GeneralConstructionSpec::random(10, Some(vec![5, 1, 2, 2]), false, &mut rng).is_err());
    }

    #[test]
    fn coordinates_invert_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let basis = random_basis_of(12, &mut rng);
        let table = coordinates_table(&basis, 12).unwrap();
        for (t, &c) in table.iter().enumerate() {
            let back = (0..12)
                .filter(|p| (c >> p) & 1 == 1)
                .fold(GVec::from_raw(0, 12), |acc, p| acc + basis[p]);
            assert_eq!(back.bits(), 1 << t);
        }
    }

    #[test]
    fn stored_element_matches_signature() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spec = GeneralConstructionSpec::random(10, None, true, &mut rng).unwrap();
        let out = general_construct(&spec, DEFAULT_BUDGET).unwrap();
        for x in 0..out.sig.order() {
            assert_eq!(out.stored.element(x).unwrap(), out.sig.breve(x).unwrap());
        }
    }

    #[test]
    fn identity_and_first_entries() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let spec = GeneralConstructionSpec::random(9, None, false, &mut rng).unwrap();
        let out = general_construct(&spec, DEFAULT_BUDGET).unwrap();
        let f = FastFactorizer::new(&out.stored).unwrap();
        let zero = GVec::from_raw(0, 9);
        let x = f.factor(zero).unwrap().index;
        assert!(out.sig.breve(x).unwrap().is_zero());
        let first = out.sig.product(&vec![0; out.sig.blocks().len()]);
        assert_eq!(f.factor(first).unwrap().index, 0);
    }
}
