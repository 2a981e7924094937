use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Sparse multivariate polynomial over `Z` in a fixed number of variables.
///
/// Monomials are exponent vectors kept in a `BTreeMap`, so the term order
/// (and hence equality) is canonical.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(nvars);
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        IntPoly {
            nvars,
            terms: BTreeMap::from([(exps, BigInt::one())]),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    fn accumulate(terms: &mut BTreeMap<Vec<u32>, BigInt>, exps: Vec<u32>, c: BigInt) {
        use std::collections::btree_map::Entry;
        match terms.entry(exps) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::accumulate(&mut terms, e.clone(), c.clone());
        }
        IntPoly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                Self::accumulate(&mut terms, e, ca * cb);
            }
        }
        IntPoly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::constant(self.nvars, 1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division of every coefficient by `d`.
    pub fn div_exact(&self, d: &BigInt) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return Err(Error::InternalInexactDivision(format!("{c} by {d}")));
            }
            terms.insert(e.clone(), q);
        }
        Ok(IntPoly {
            nvars: self.nvars,
            terms,
        })
    }

    /// Coefficients reduced into `[0, p)`, zero terms dropped.
    pub fn reduce_mod(&self, p: u64) -> ModPoly {
        let pb = BigInt::from(p);
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let r = c.mod_floor(&pb).to_u64().unwrap();
                (r != 0).then(|| (e.clone(), r))
            })
            .collect();
        ModPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// Formats with variable names supplied by `name(i)`.
    pub fn display_with(&self, name: impl Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // highest total degree first reads more naturally
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| std::cmp::Reverse((e.iter().sum::<u32>(), (*e).clone())));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| {
                    if k == 1 {
                        name(v)
                    } else {
                        format!("{}^{k}", name(v))
                    }
                })
                .collect();
            let abs = c.abs();
            let sign = if c.is_negative() {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            let body = match (mono.is_empty(), abs.is_one()) {
                (true, _) => abs.to_string(),
                (false, true) => mono.join("*"),
                (false, false) => format!("{abs}*{}", mono.join("*")),
            };
            if i > 0 {
                out.push(' ');
            }
            out.push_str(sign);
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(|i| format!("v{i}")))
    }
}

/// A polynomial with coefficients already reduced mod `p`, ready for
/// evaluation in a characteristic-`p` ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPoly {
    nvars: usize,
    terms: Vec<(Vec<u32>, u64)>,
}

impl ModPoly {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<u32>, u64)] {
        &self.terms
    }
}
