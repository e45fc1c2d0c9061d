//! Exact sparse polynomials in the deformation symbol `q` and commuting Gram
//! indeterminates `g_{i,j}` (`i < j`), with rational coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sign::Label;

pub type GramIndex = (Label, Label);

/// Assignment of rational values to Gram indeterminates.
pub type GramValues = BTreeMap<GramIndex, BigRational>;

/// `q^a · g_{i1,j1} · g_{i2,j2} …`; the Gram factor list is a sorted
/// multiset. Ordering is by q-degree, then by the factor list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    q: u32,
    gram: Vec<GramIndex>,
}

impl Monomial {
    pub fn new(q: u32, mut gram: Vec<GramIndex>) -> Result<Self> {
        if let Some(&(i, j)) = gram.iter().find(|(i, j)| i >= j) {
            return Err(Error::InvalidPair { left: i, right: j });
        }
        gram.sort_unstable();
        Ok(Monomial { q, gram })
    }

    pub fn q_degree(&self) -> u32 {
        self.q
    }

    pub fn gram_factors(&self) -> &[GramIndex] {
        &self.gram
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut gram = Vec::with_capacity(self.gram.len() + other.gram.len());
        gram.extend_from_slice(&self.gram);
        gram.extend_from_slice(&other.gram);
        gram.sort_unstable();
        Monomial {
            q: self.q + other.q,
            gram,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::with_capacity(self.gram.len() + 1);
        if self.q > 0 {
            parts.push(format!("q^{}", self.q));
        }
        parts.extend(self.gram.iter().map(|(i, j)| format!("g_{{{i},{j}}}")));
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(c, Monomial::default())
    }

    pub fn term(coeff: BigRational, monomial: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(monomial, coeff);
        }
        MultiPoly { terms }
    }

    /// The symbol `q`.
    pub fn q() -> Self {
        Self::term(BigRational::one(), Monomial { q: 1, gram: vec![] })
    }

    /// The indeterminate `⟨f_i, f_j⟩`, normalised to `g_{min,max}`.
    pub fn gram(i: Label, j: Label) -> Result<Self> {
        let m = Monomial::new(0, vec![(i.min(j), i.max(j))])?;
        Ok(Self::term(BigRational::one(), m))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Multiset of Gram factors of every term, with the q-power and
    /// coefficient forgotten.
    pub fn gram_support(&self) -> BTreeSet<Vec<GramIndex>> {
        self.terms.keys().map(|m| m.gram.clone()).collect()
    }

    /// Every indeterminate occurring in the polynomial.
    pub fn indeterminates(&self) -> BTreeSet<GramIndex> {
        self.terms
            .keys()
            .flat_map(|m| m.gram.iter().copied())
            .collect()
    }

    /// Substitutes numbers for `q` and/or the Gram indeterminates, leaving
    /// the rest symbolic. A supplied Gram assignment must cover every
    /// indeterminate.
    pub fn substitute(&self, q: Option<&BigRational>, gram: Option<&GramValues>) -> Result<Self> {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut q_exp = m.q;
            if let Some(qv) = q {
                coeff *= pow(qv, m.q);
                q_exp = 0;
            }
            let factors = match gram {
                Some(values) => {
                    for idx in &m.gram {
                        let v = values
                            .get(idx)
                            .ok_or(Error::MissingIndeterminate(idx.0, idx.1))?;
                        coeff *= v;
                    }
                    Vec::new()
                }
                None => m.gram.clone(),
            };
            out.add_term(
                Monomial {
                    q: q_exp,
                    gram: factors,
                },
                coeff,
            );
        }
        Ok(out)
    }

    /// Full numeric evaluation.
    pub fn eval(&self, q: &BigRational, gram: &GramValues) -> Result<BigRational> {
        let p = self.substitute(Some(q), Some(gram))?;
        Ok(p.coefficient(&Monomial::default()))
    }
}

fn pow(base: &BigRational, exp: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl fmt::Display for MultiPoly {
    /// `g_{1,4} g_{2,3} + q^1 g_{1,3} g_{2,4}`: unit coefficients are
    /// omitted, the zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono = m.to_string();
                match (mono.is_empty(), c.is_one()) {
                    (true, _) => c.to_string(),
                    (false, true) => mono,
                    (false, false) => format!("{c} {mono}"),
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parses `p/q` or an integer.
pub fn rational_from_str(s: &str) -> Result<BigRational> {
    parse_rational(s.trim())
}

fn parse_gram_token(tok: &str) -> Result<GramIndex> {
    let inner = tok
        .strip_prefix("g_{")
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("bad Gram factor {tok:?}")))?;
    let (i, j) = inner
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("bad Gram factor {tok:?}")))?;
    let parse = |x: &str| {
        x.parse::<Label>()
            .map_err(|_| Error::Parse(format!("bad Gram index in {tok:?}")))
    };
    Ok((parse(i)?, parse(j)?))
}

impl FromStr for MultiPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(MultiPoly::zero());
        }
        let mut out = MultiPoly::zero();
        for term in s.split(" + ") {
            let mut coeff = BigRational::one();
            let mut q = 0;
            let mut gram = Vec::new();
            for (pos, tok) in term.split_whitespace().enumerate() {
                if let Some(exp) = tok.strip_prefix("q^") {
                    q = exp
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad q power {tok:?}")))?;
                } else if tok.starts_with("g_{") {
                    gram.push(parse_gram_token(tok)?);
                } else if pos == 0 {
                    coeff = parse_rational(tok)?;
                } else {
                    return Err(Error::Parse(format!("unexpected token {tok:?}")));
                }
            }
            out.add_term(Monomial::new(q, gram)?, coeff);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    q: u32,
    gram: Vec<GramIndex>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyRecord {
    terms: Vec<TermRecord>,
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRecord {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRecord {
                    q: m.q,
                    gram: m.gram.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let record = PolyRecord::deserialize(deserializer)?;
        let mut out = MultiPoly::zero();
        for t in record.terms {
            let m = Monomial::new(t.q, t.gram).map_err(serde::de::Error::custom)?;
            let c = parse_rational(&t.coeff).map_err(serde::de::Error::custom)?;
            out.add_term(m, c);
        }
        Ok(out)
    }
}
