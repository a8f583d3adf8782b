//! Decidable subsets of the positive integers.
//!
//! A [`SetSpec`] is an immutable expression tree. Membership is exact; a
//! bounded [`SetSpec::Bitmap`] refuses queries beyond its bound instead of
//! answering `false`. Equality between specs is extensional and only ever
//! checked by sampling.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetSpec {
    /// `{ v : v = residue (mod modulus) }`.
    Congruence {
        modulus: BigUint,
        residue: BigUint,
    },
    /// `[lo, hi]`, or `[lo, oo)` when `hi` is `None`.
    Interval {
        lo: BigUint,
        hi: Option<BigUint>,
    },
    /// An explicit finite set, only defined on `1..=bound`.
    Bitmap {
        members: BTreeSet<BigUint>,
        bound: BigUint,
    },
    Complement(Box<SetSpec>),
    Union(Vec<SetSpec>),
    Intersection(Vec<SetSpec>),
    /// `{ v : factor * v in inner }`.
    Dilation {
        factor: BigUint,
        inner: Box<SetSpec>,
    },
    /// `{ v : offset + v in inner }`.
    Shift {
        offset: BigUint,
        inner: Box<SetSpec>,
    },
    Empty,
    Full,
}

impl SetSpec {
    pub fn congruence(modulus: impl Into<BigUint>, residue: impl Into<BigUint>) -> Result<Self> {
        let (modulus, residue) = (modulus.into(), residue.into());
        if modulus.is_zero() {
            return Err(Error::Validation("modulus must be at least 1".into()));
        }
        if residue >= modulus {
            return Err(Error::Validation(format!(
                "residue {residue} is not reduced modulo {modulus}"
            )));
        }
        Ok(SetSpec::Congruence { modulus, residue })
    }

    /// `m N`, the multiples of `m`.
    pub fn multiples(m: u64) -> Result<Self> {
        Self::congruence(m, 0u32)
    }

    pub fn interval(lo: impl Into<BigUint>, hi: Option<BigUint>) -> Result<Self> {
        let lo = lo.into();
        if lo.is_zero() {
            return Err(Error::Validation(
                "interval lower end must be at least 1".into(),
            ));
        }
        if let Some(hi) = &hi {
            if *hi < lo {
                return Err(Error::Validation(format!("empty interval [{lo}, {hi}]")));
            }
        }
        Ok(SetSpec::Interval { lo, hi })
    }

    pub fn at_least(lo: u64) -> Result<Self> {
        Self::interval(lo, None)
    }

    pub fn bitmap(
        members: impl IntoIterator<Item = BigUint>,
        bound: impl Into<BigUint>,
    ) -> Result<Self> {
        let bound = bound.into();
        let members: BTreeSet<BigUint> = members.into_iter().collect();
        if let Some(first) = members.first() {
            if first.is_zero() {
                return Err(Error::Validation("bitmap members must be positive".into()));
            }
        }
        if let Some(last) = members.last() {
            if *last > bound {
                return Err(Error::Validation(format!(
                    "bitmap member {last} exceeds its bound {bound}"
                )));
            }
        }
        Ok(SetSpec::Bitmap { members, bound })
    }

    pub fn complement(self) -> Self {
        SetSpec::Complement(Box::new(self))
    }

    pub fn and(children: Vec<SetSpec>) -> Self {
        SetSpec::Intersection(children)
    }

    pub fn or(children: Vec<SetSpec>) -> Self {
        SetSpec::Union(children)
    }

    /// Wrapper node for `{ v : factor * v in inner }`, without simplification.
    pub fn dilation(factor: impl Into<BigUint>, inner: SetSpec) -> Result<Self> {
        let factor = factor.into();
        if factor.is_zero() {
            return Err(Error::Validation(
                "dilation factor must be at least 1".into(),
            ));
        }
        Ok(SetSpec::Dilation {
            factor,
            inner: Box::new(inner),
        })
    }

    /// Wrapper node for `{ v : offset + v in inner }`, without simplification.
    pub fn shift(offset: impl Into<BigUint>, inner: SetSpec) -> Result<Self> {
        let offset = offset.into();
        if offset.is_zero() {
            return Err(Error::Validation("shift offset must be at least 1".into()));
        }
        Ok(SetSpec::Shift {
            offset,
            inner: Box::new(inner),
        })
    }

    /// Membership of `v`. Intersections and unions short-circuit left to
    /// right, so a bitmap domain error is only raised when the bitmap is
    /// actually consulted.
    pub fn contains(&self, v: &BigUint) -> Result<bool> {
        if v.is_zero() {
            return Err(Error::input("membership is defined for v >= 1"));
        }
        self.eval(v)
    }

    pub fn contains_u64(&self, v: u64) -> Result<bool> {
        self.contains(&BigUint::from(v))
    }

    fn eval(&self, v: &BigUint) -> Result<bool> {
        Ok(match self {
            SetSpec::Congruence { modulus, residue } => &(v % modulus) == residue,
            SetSpec::Interval { lo, hi } => v >= lo && hi.as_ref().is_none_or(|hi| v <= hi),
            SetSpec::Bitmap { members, bound } => {
                if v > bound {
                    return Err(Error::Domain {
                        value: v.clone(),
                        bound: bound.clone(),
                    });
                }
                members.contains(v)
            }
            SetSpec::Complement(inner) => !inner.eval(v)?,
            SetSpec::Union(children) => {
                for c in children {
                    if c.eval(v)? {
                        return Ok(true);
                    }
                }
                false
            }
            SetSpec::Intersection(children) => {
                for c in children {
                    if !c.eval(v)? {
                        return Ok(false);
                    }
                }
                true
            }
            SetSpec::Dilation { factor, inner } => inner.eval(&(factor * v))?,
            SetSpec::Shift { offset, inner } => inner.eval(&(offset + v))?,
            SetSpec::Empty => false,
            SetSpec::Full => true,
        })
    }

    /// `n^{-1} A = { v : n v in A }`, simplified where the child is a
    /// congruence, interval, boolean node or another dilation.
    pub fn dilation_preimage(&self, n: &BigUint) -> Result<SetSpec> {
        if n.is_zero() {
            return Err(Error::Validation(
                "dilation factor must be at least 1".into(),
            ));
        }
        if n.is_one() {
            return Ok(self.clone());
        }
        Ok(match self {
            SetSpec::Congruence { modulus, residue } => dilate_congruence(modulus, residue, n),
            SetSpec::Interval { lo, hi } => {
                let lo2 = lo.div_ceil(n);
                match hi {
                    None => SetSpec::Interval { lo: lo2, hi: None },
                    Some(hi) => {
                        let hi2 = hi / n;
                        if hi2 < lo2 {
                            SetSpec::Empty
                        } else {
                            SetSpec::Interval {
                                lo: lo2,
                                hi: Some(hi2),
                            }
                        }
                    }
                }
            }
            SetSpec::Complement(inner) => inner.dilation_preimage(n)?.complement(),
            SetSpec::Union(children) => SetSpec::Union(
                children
                    .iter()
                    .map(|c| c.dilation_preimage(n))
                    .collect::<Result<_>>()?,
            ),
            SetSpec::Intersection(children) => SetSpec::Intersection(
                children
                    .iter()
                    .map(|c| c.dilation_preimage(n))
                    .collect::<Result<_>>()?,
            ),
            SetSpec::Dilation { factor, inner } => SetSpec::Dilation {
                factor: factor * n,
                inner: inner.clone(),
            },
            SetSpec::Empty => SetSpec::Empty,
            SetSpec::Full => SetSpec::Full,
            SetSpec::Bitmap { .. } | SetSpec::Shift { .. } => SetSpec::Dilation {
                factor: n.clone(),
                inner: Box::new(self.clone()),
            },
        })
    }

    /// `{ v : t + v in A }`, simplified where the child is a congruence,
    /// interval, boolean node or another shift.
    pub fn shift_preimage(&self, t: &BigUint) -> Result<SetSpec> {
        if t.is_zero() {
            return Err(Error::Validation("shift offset must be at least 1".into()));
        }
        Ok(match self {
            SetSpec::Congruence { modulus, residue } => {
                let m = BigInt::from(modulus.clone());
                let r = (BigInt::from(residue.clone()) - BigInt::from(t.clone())).mod_floor(&m);
                SetSpec::Congruence {
                    modulus: modulus.clone(),
                    residue: r.to_biguint().expect("mod_floor is non-negative"),
                }
            }
            SetSpec::Interval { lo, hi } => {
                let lo2 = if lo > t { lo - t } else { BigUint::one() };
                match hi {
                    None => SetSpec::Interval { lo: lo2, hi: None },
                    Some(hi) if hi > t => SetSpec::Interval {
                        lo: lo2,
                        hi: Some(hi - t),
                    },
                    Some(_) => SetSpec::Empty,
                }
            }
            SetSpec::Complement(inner) => inner.shift_preimage(t)?.complement(),
            SetSpec::Union(children) => SetSpec::Union(
                children
                    .iter()
                    .map(|c| c.shift_preimage(t))
                    .collect::<Result<_>>()?,
            ),
            SetSpec::Intersection(children) => SetSpec::Intersection(
                children
                    .iter()
                    .map(|c| c.shift_preimage(t))
                    .collect::<Result<_>>()?,
            ),
            SetSpec::Shift { offset, inner } => SetSpec::Shift {
                offset: offset + t,
                inner: inner.clone(),
            },
            SetSpec::Empty => SetSpec::Empty,
            SetSpec::Full => SetSpec::Full,
            SetSpec::Bitmap { .. } | SetSpec::Dilation { .. } => SetSpec::Shift {
                offset: t.clone(),
                inner: Box::new(self.clone()),
            },
        })
    }

    /// Members in `1..=hi`, for display and sampling.
    pub fn members_up_to(&self, hi: u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for v in 1..=hi {
            if self.contains_u64(v)? {
                out.push(v);
            }
        }
        Ok(out)
    }
}

/// `n v = r (mod m)` has solutions iff `g = gcd(n, m)` divides `r`, in which
/// case they form one residue class modulo `m / g`.
fn dilate_congruence(modulus: &BigUint, residue: &BigUint, n: &BigUint) -> SetSpec {
    let g = n.gcd(modulus);
    if !(residue % &g).is_zero() {
        return SetSpec::Empty;
    }
    let m2 = modulus / &g;
    if m2.is_one() {
        return SetSpec::Full;
    }
    let n2 = BigInt::from((n / &g) % &m2);
    let m2i = BigInt::from(m2.clone());
    let ext = n2.extended_gcd(&m2i);
    debug_assert!(ext.gcd.is_one());
    let r2 = (BigInt::from(residue / &g) * ext.x).mod_floor(&m2i);
    SetSpec::Congruence {
        modulus: m2,
        residue: r2.to_biguint().expect("mod_floor is non-negative"),
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, name: &str, children: &[SetSpec]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, c) in children.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str(")")
}

/// Renders the DSL accepted by [`crate::dsl::parse_spec`]. Boolean nodes with
/// fewer than two children are rendered by their meaning (`all`, `none`, or
/// the lone child) since the grammar requires at least two.
impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Congruence { modulus, residue } => write!(f, "mod({modulus},{residue})"),
            SetSpec::Interval { lo, hi: None } => write!(f, "geq({lo})"),
            SetSpec::Interval { lo, hi: Some(hi) } => write!(f, "range({lo},{hi})"),
            SetSpec::Bitmap { members, bound } => {
                f.write_str("bits(")?;
                for (i, m) in members.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, "; {bound})")
            }
            SetSpec::Complement(inner) => write!(f, "not({inner})"),
            SetSpec::Union(c) => match c.len() {
                0 => f.write_str("none"),
                1 => write!(f, "{}", c[0]),
                _ => write_list(f, "or", c),
            },
            SetSpec::Intersection(c) => match c.len() {
                0 => f.write_str("all"),
                1 => write!(f, "{}", c[0]),
                _ => write_list(f, "and", c),
            },
            SetSpec::Dilation { factor, inner } => write!(f, "dil({factor}, {inner})"),
            SetSpec::Shift { offset, inner } => write!(f, "shift({offset}, {inner})"),
            SetSpec::Empty => f.write_str("none"),
            SetSpec::Full => f.write_str("all"),
        }
    }
}
