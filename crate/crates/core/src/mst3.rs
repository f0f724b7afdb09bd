//! Suzuki 2-groups and the MST3 public-key scheme over them.
//!
//! `S(c,d)` is the lower unitriangular matrix
//!
//! ```text
//! | 1    0     0 |
//! | c    1     0 |
//! | d   c^th   1 |
//! ```
//!
//! over `F_q`, `q = 2^n`, with `th = (.)^(2^k)` of odd order greater than
//! one. Multiplying out gives `S(c,d) S(c',d') = S(c+c', d+d'+c^th c')`. The
//! center is `{S(0,d)}`, an elementary abelian group identified with `2^n`
//! through the coefficient vector of `d`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::Rng;

use crate::algebra::{frobenius_order, FieldElem, GVec, MAX_DEGREE, MIN_DEGREE};
use crate::construct::{FastFactorizer, StoredForm};
use crate::error::{Error, Result};
use crate::signature::{tau_inv, type_order, LogSig, Target, DEFAULT_BUDGET};

/// Field degree and Frobenius exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SuzukiParams {
    n: usize,
    k: usize,
}

impl SuzukiParams {
    /// Requires `n / gcd(n, k)`, the order of `th`, to be odd and above one.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
            return Err(Error::UnsupportedDegree(n));
        }
        if k == 0 || k >= n {
            return Err(Error::FrobeniusExponent { k, n });
        }
        let ord = frobenius_order(n, k);
        if ord.is_multiple_of(2) || ord == 1 {
            return Err(Error::InvalidParams(format!(
                "theta = x^(2^{k}) on F_(2^{n}) has order {ord}; need odd order > 1"
            )));
        }
        Ok(SuzukiParams { n, k })
    }

    /// `q = 8`, `th = x^2`.
    pub fn toy8() -> Self {
        SuzukiParams { n: 3, k: 1 }
    }

    /// `q = 64`, `th = x^4`.
    pub fn toy64() -> Self {
        SuzukiParams { n: 6, k: 2 }
    }

    /// `q = 512`, `th = x^8`.
    pub fn toy512() -> Self {
        SuzukiParams { n: 9, k: 3 }
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn k(self) -> usize {
        self.k
    }

    pub fn q(self) -> u64 {
        1u64 << self.n
    }

    pub fn theta_order(self) -> usize {
        frobenius_order(self.n, self.k)
    }

    pub fn theta(self, c: FieldElem) -> FieldElem {
        c.frobenius(self.k).expect("exponent validated")
    }

    pub fn identity(self) -> SuzukiElem {
        let z = FieldElem::from_raw(0, self.n);
        SuzukiElem { c: z, d: z }
    }

    pub fn elem(self, c: u64, d: u64) -> Result<SuzukiElem> {
        Ok(SuzukiElem {
            c: FieldElem::new(c, self.n)?,
            d: FieldElem::new(d, self.n)?,
        })
    }

    pub fn mul(self, a: SuzukiElem, b: SuzukiElem) -> SuzukiElem {
        SuzukiElem {
            c: a.c + b.c,
            d: a.d + b.d + self.theta(a.c) * b.c,
        }
    }

    /// Checked multiplication for elements of unknown origin.
    pub fn checked_mul(self, a: SuzukiElem, b: SuzukiElem) -> Result<SuzukiElem> {
        for e in [a, b] {
            if e.c.degree() != self.n || e.d.degree() != self.n {
                return Err(Error::DimensionMismatch {
                    left: self.n,
                    right: e.c.degree(),
                });
            }
        }
        Ok(self.mul(a, b))
    }

    pub fn inverse(self, a: SuzukiElem) -> SuzukiElem {
        SuzukiElem {
            c: a.c,
            d: a.d + self.theta(a.c) * a.c,
        }
    }

    /// Every group element, `c` varying slowest.
    pub fn elements(self) -> Vec<SuzukiElem> {
        let q = self.q();
        (0..q)
            .flat_map(|c| (0..q).map(move |d| (c, d)))
            .map(|(c, d)| SuzukiElem {
                c: FieldElem::from_raw(c, self.n),
                d: FieldElem::from_raw(d, self.n),
            })
            .collect()
    }

    pub fn is_central(self, a: SuzukiElem) -> bool {
        a.c.is_zero()
    }

    /// The central element for `g` in the identification `Z = 2^n`.
    pub fn central(self, g: GVec) -> SuzukiElem {
        SuzukiElem {
            c: FieldElem::from_raw(0, self.n),
            d: FieldElem::from_raw(g.bits(), self.n),
        }
    }

    fn random_noncentral<R: Rng + ?Sized>(self, rng: &mut R) -> SuzukiElem {
        let q = self.q();
        SuzukiElem {
            c: FieldElem::from_raw(rng.gen_range(1..q), self.n),
            d: FieldElem::from_raw(rng.gen_range(0..q), self.n),
        }
    }
}

/// `S(c, d)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SuzukiElem {
    pub c: FieldElem,
    pub d: FieldElem,
}

impl SuzukiElem {
    /// `c,d` in hex.
    pub fn to_hex(self) -> String {
        format!("{},{}", self.c.to_hex(), self.d.to_hex())
    }

    pub fn from_hex(s: &str, n: usize) -> Result<Self> {
        let (c, d) = s
            .split_once(',')
            .ok_or_else(|| Error::parse(0, format!("expected c,d pair, got '{s}'")))?;
        Ok(SuzukiElem {
            c: FieldElem::from_hex(c, n)?,
            d: FieldElem::from_hex(d, n)?,
        })
    }
}

impl fmt::Debug for SuzukiElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({})", self.to_hex())
    }
}

impl fmt::Display for SuzukiElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// `{S(0,d)}`.
pub fn center_of(p: SuzukiParams) -> Vec<SuzukiElem> {
    (0..p.q())
        .map(|d| SuzukiElem {
            c: FieldElem::from_raw(0, p.n),
            d: FieldElem::from_raw(d, p.n),
        })
        .collect()
}

/// Elements commuting with the whole group, by exhaustive comparison.
/// Limited to `q <= 64`.
pub fn center_brute_force(p: SuzukiParams) -> Result<Vec<SuzukiElem>> {
    if p.n > 6 {
        return Err(Error::BudgetExceeded {
            needed: 1 << (4 * p.n),
            budget: 1 << 24,
        });
    }
    let all = p.elements();
    Ok(all
        .iter()
        .copied()
        .filter(|&a| all.iter().all(|&b| p.mul(a, b) == p.mul(b, a)))
        .collect())
}

fn closure(p: SuzukiParams, gens: &[SuzukiElem], cap: usize) -> Option<HashSet<SuzukiElem>> {
    let mut seen: HashSet<SuzukiElem> = HashSet::from([p.identity()]);
    let mut frontier = vec![p.identity()];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = p.mul(x, g);
            if seen.insert(y) {
                if seen.len() > cap {
                    return None;
                }
                frontier.push(y);
            }
        }
    }
    Some(seen)
}

/// Number of subgroups `U` with `U Z = G` and `U n Z = 1`.
///
/// Such a `U` has exactly one element over every `c`, so it is generated by
/// elements `S(e_i, f_i)` over a basis `e_i` of `F_q`; all `q^n` choices of
/// the `f_i` are tried. Limited to `n <= 4`.
pub fn center_complements(p: SuzukiParams) -> Result<usize> {
    if p.n > 4 {
        return Err(Error::BudgetExceeded {
            needed: 1u128 << (p.n * p.n),
            budget: 1 << 16,
        });
    }
    let q = p.q() as usize;
    let mut found = 0;
    for code in 0..q.pow(p.n as u32) {
        let gens: Vec<SuzukiElem> = (0..p.n)
            .map(|i| SuzukiElem {
                c: FieldElem::from_raw(1 << i, p.n),
                d: FieldElem::from_raw(((code / q.pow(i as u32)) % q) as u64, p.n),
            })
            .collect();
        if let Some(u) = closure(p, &gens, q) {
            if u.len() == q && u.iter().filter(|e| p.is_central(**e)).count() == 1 {
                found += 1;
            }
        }
    }
    Ok(found)
}

/// A cover of (a subset of) the Suzuki group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    blocks: Vec<Vec<SuzukiElem>>,
}

impl Cover {
    pub fn new(blocks: Vec<Vec<SuzukiElem>>) -> Result<Self> {
        if blocks.is_empty() || blocks.iter().any(Vec::is_empty) {
            return Err(Error::InvalidSignature("empty cover or block".into()));
        }
        Ok(Cover { blocks })
    }

    pub fn blocks(&self) -> &[Vec<SuzukiElem>] {
        &self.blocks
    }

    pub fn type_vec(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// The ordered product `a_{1,j_1} ... a_{s,j_s}` for `x`, evaluated left
    /// to right.
    pub fn breve(&self, p: SuzukiParams, x: u128) -> Result<SuzukiElem> {
        let idx = tau_inv(&self.type_vec(), x)?;
        Ok(self
            .blocks
            .iter()
            .zip(idx.iter())
            .fold(p.identity(), |acc, (b, &j)| p.mul(acc, b[j])))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    pub params: SuzukiParams,
    pub alpha: Cover,
    pub gamma: Cover,
}

#[derive(Clone, Debug)]
pub struct PrivateKey {
    pub params: SuzukiParams,
    /// Logarithmic signature of the center, over `2^n`.
    pub beta: LogSig,
    /// `t_0, ..., t_s`.
    pub t: Vec<SuzukiElem>,
    /// Stored form of `beta` when it came out of the general construction.
    pub stored: Option<StoredForm>,
}

#[derive(Clone, Debug)]
pub struct KeyPair {
    pub public: PublicKey,
    pub private: PrivateKey,
}

/// Ciphertext `(y_1, y_2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub y1: SuzukiElem,
    pub y2: SuzukiElem,
}

impl Ciphertext {
    pub fn to_hex(self) -> String {
        format!("{} {}", self.y1.to_hex(), self.y2.to_hex())
    }

    pub fn from_hex(s: &str, n: usize) -> Result<Self> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::parse(1, format!("expected two c,d pairs, got {}", toks.len())));
        }
        Ok(Ciphertext {
            y1: SuzukiElem::from_hex(toks[0], n)?,
            y2: SuzukiElem::from_hex(toks[1], n)?,
        })
    }
}

fn check_beta(p: SuzukiParams, beta: &LogSig, stored: Option<&StoredForm>) -> Result<()> {
    if beta.dim() != p.n {
        return Err(Error::DimensionMismatch {
            left: p.n,
            right: beta.dim(),
        });
    }
    if beta.target() != &Target::Group {
        return Err(Error::InvalidSignature(
            "beta must be a signature of the whole center".into(),
        ));
    }
    if let Some(st) = stored {
        if st.n != p.n || st.type_vec() != beta.type_vec() {
            return Err(Error::InvalidParams(
                "stored form does not describe beta".into(),
            ));
        }
    }
    if beta.order() <= DEFAULT_BUDGET {
        if !beta.validate(DEFAULT_BUDGET)?.is_logsig {
            return Err(Error::InvalidSignature(
                "beta is not a logarithmic signature of the center".into(),
            ));
        }
    } else if stored.is_none() {
        return Err(Error::InvalidParams(
            "beta too large to validate and no stored form given".into(),
        ));
    }
    Ok(())
}

/// Draws `alpha` and `t_0, ..., t_s` and assembles `gamma` with
/// `h_{i,j} = b_{i,j} t_{i-1}^{-1} a_{i,j} t_i`.
///
/// With `distinct_cosets` the `a_{i,j}` of one block also satisfy
/// `a_{i,j} a_{i,l}^{-1} not in Z`, i.e. their `c` values differ.
pub fn keygen<R: Rng + ?Sized>(
    p: SuzukiParams,
    beta: LogSig,
    stored: Option<StoredForm>,
    distinct_cosets: bool,
    rng: &mut R,
) -> Result<KeyPair> {
    check_beta(p, &beta, stored.as_ref())?;
    let s = beta.blocks().len();
    let mut alpha = Vec::with_capacity(s);
    for b in beta.blocks() {
        let block = if distinct_cosets {
            if b.len() as u64 > p.q() - 1 {
                return Err(Error::InvalidParams(format!(
                    "a block of {} elements cannot have distinct nonzero c values in F_{}",
                    b.len(),
                    p.q()
                )));
            }
            let cs = rand::seq::index::sample(rng, (p.q() - 1) as usize, b.len());
            cs.iter()
                .map(|c| SuzukiElem {
                    c: FieldElem::from_raw(c as u64 + 1, p.n),
                    d: FieldElem::from_raw(rng.gen_range(0..p.q()), p.n),
                })
                .collect()
        } else {
            (0..b.len()).map(|_| p.random_noncentral(rng)).collect()
        };
        alpha.push(block);
    }
    let t: Vec<SuzukiElem> = (0..=s).map(|_| p.random_noncentral(rng)).collect();
    let gamma = beta
        .blocks()
        .iter()
        .zip(&alpha)
        .enumerate()
        .map(|(i, (b, a))| {
            let left = p.inverse(t[i]);
            b.iter()
                .zip(a)
                .map(|(&bij, &aij)| p.mul(p.central(bij), p.mul(p.mul(left, aij), t[i + 1])))
                .collect()
        })
        .collect();
    Ok(KeyPair {
        public: PublicKey {
            params: p,
            alpha: Cover::new(alpha)?,
            gamma: Cover::new(gamma)?,
        },
        private: PrivateKey {
            params: p,
            beta,
            t,
            stored,
        },
    })
}

/// `(alpha^breve(x), gamma^breve(x))` for `0 <= x < q`.
pub fn encrypt(public: &PublicKey, x: u128) -> Result<Ciphertext> {
    let q = public.params.q() as u128;
    if x >= q {
        return Err(Error::IndexOutOfBounds(format!("message {x} not below {q}")));
    }
    Ok(Ciphertext {
        y1: public.alpha.breve(public.params, x)?,
        y2: public.gamma.breve(public.params, x)?,
    })
}

enum Inverter {
    Fast(Box<FastFactorizer>),
    Table(HashMap<u64, u128>),
}

/// Private key with the tables needed to invert `beta` precomputed.
pub struct Decryptor {
    params: SuzukiParams,
    t0: SuzukiElem,
    ts_inv: SuzukiElem,
    inverter: Inverter,
}

impl Decryptor {
    pub fn new(private: &PrivateKey) -> Result<Self> {
        let p = private.params;
        check_beta(p, &private.beta, private.stored.as_ref())?;
        if private.t.len() != private.beta.blocks().len() + 1 {
            return Err(Error::InvalidParams(format!(
                "{} blocks need {} t values, got {}",
                private.beta.blocks().len(),
                private.beta.blocks().len() + 1,
                private.t.len()
            )));
        }
        let inverter = match &private.stored {
            Some(st) => Inverter::Fast(Box::new(FastFactorizer::new(st)?)),
            None => {
                let products = private.beta.products(DEFAULT_BUDGET)?;
                Inverter::Table(
                    products
                        .iter()
                        .enumerate()
                        .map(|(x, g)| (g.bits(), x as u128))
                        .collect(),
                )
            }
        };
        Ok(Decryptor {
            params: p,
            t0: private.t[0],
            ts_inv: p.inverse(*private.t.last().expect("nonempty")),
            inverter,
        })
    }

    /// `y_2 t_s^{-1} y_1^{-1} t_0`, which equals `beta^breve(x)`.
    pub fn central_part(&self, ct: Ciphertext) -> SuzukiElem {
        let p = self.params;
        p.mul(p.mul(p.mul(ct.y2, self.ts_inv), p.inverse(ct.y1)), self.t0)
    }

    pub fn decrypt(&self, ct: Ciphertext) -> Result<u128> {
        let p = self.params;
        let z = self.central_part(ct);
        if !p.is_central(z) {
            return Err(Error::Decryption(format!(
                "y2 t_s^-1 y1^-1 t_0 = {z} is not central"
            )));
        }
        let g = GVec::from_raw(z.d.bits(), p.n);
        match &self.inverter {
            Inverter::Fast(f) => f
                .factor(g)
                .map(|r| r.index)
                .map_err(|e| Error::Decryption(e.to_string())),
            Inverter::Table(t) => t
                .get(&g.bits())
                .copied()
                .ok_or_else(|| Error::Decryption(format!("{g} has no factorization"))),
        }
    }
}

pub fn decrypt(private: &PrivateKey, ct: Ciphertext) -> Result<u128> {
    Decryptor::new(private)?.decrypt(ct)
}

/// Number of messages, `|Z| = q`, checked against `beta`.
pub fn message_space(private: &PrivateKey) -> Option<u128> {
    type_order(&private.beta.type_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{exact_transversal, Side, SubgroupChain};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Mat = [[u64; 3]; 3];

    fn matrix(p: SuzukiParams, a: SuzukiElem) -> Mat {
        [
            [1, 0, 0],
            [a.c.bits(), 1, 0],
            [a.d.bits(), p.theta(a.c).bits(), 1],
        ]
    }

    fn mat_mul(n: usize, a: &Mat, b: &Mat) -> Mat {
        let f = |x: u64| FieldElem::new(x, n).unwrap();
        let mut out = [[0u64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = f(0);
                for l in 0..3 {
                    acc = acc + f(a[i][l]) * f(b[l][j]);
                }
                out[i][j] = acc.bits();
            }
        }
        out
    }

    #[test]
    fn params_validation() {
        assert!(SuzukiParams::new(3, 1).is_ok());
        assert!(SuzukiParams::new(9, 3).is_ok());
        assert!(SuzukiParams::new(6, 2).is_ok());
        assert!(SuzukiParams::new(4, 2).is_err());
        assert!(SuzukiParams::new(6, 3).is_err());
        assert!(SuzukiParams::new(3, 0).is_err());
        assert!(SuzukiParams::new(3, 3).is_err());
    }

    #[test]
    fn matrix_oracle_q8() {
        let p = SuzukiParams::toy8();
        let all = p.elements();
        for &a in &all {
            for &b in &all {
                assert_eq!(matrix(p, p.mul(a, b)), mat_mul(3, &matrix(p, a), &matrix(p, b)));
            }
            assert_eq!(p.mul(a, p.inverse(a)), p.identity());
        }
    }

    #[test]
    fn center_matches_lemma() {
        let p = SuzukiParams::toy8();
        assert_eq!(center_brute_force(p).unwrap(), center_of(p));
        assert_eq!(center_of(p).len(), 8);
    }

    #[test]
    fn no_complement_q8() {
        assert_eq!(center_complements(SuzukiParams::toy8()).unwrap(), 0);
    }

    #[test]
    fn roundtrip_with_table() {
        let p = SuzukiParams::toy8();
        let chain = SubgroupChain::standard(3, &[1, 2]).unwrap();
        let beta = exact_transversal(&chain, Side::Left).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let kp = keygen(p, beta, None, true, &mut rng).unwrap();
        for b in kp.public.alpha.blocks() {
            assert!(b.iter().all(|a| !p.is_central(*a)));
        }
        let dec = Decryptor::new(&kp.private).unwrap();
        for x in 0..8 {
            let ct = encrypt(&kp.public, x).unwrap();
            assert_eq!(dec.decrypt(ct).unwrap(), x);
        }
        assert!(encrypt(&kp.public, 8).is_err());
    }

    #[test]
    fn ciphertext_hex_roundtrip() {
        let p = SuzukiParams::toy64();
        let ct = Ciphertext {
            y1: p.elem(0x3f, 0x01).unwrap(),
            y2: p.elem(0x00, 0x2a).unwrap(),
        };
        assert_eq!(ct.to_hex(), "3f,01 00,2a");
        assert_eq!(Ciphertext::from_hex(&ct.to_hex(), 6).unwrap(), ct);
        assert!(Ciphertext::from_hex("3f,01", 6).is_err());
    }
}
