//! Arithmetic and structure of the generalized quaternion group
//! `Q_4n = <a, b | a^2n = 1, b^2 = a^n, b^-1 a b = a^-1>`.
//!
//! Elements are stored as `b^eps · a^k` with `k` reduced mod `2n`. The derived
//! ordering on `(eps, k)` is the canonical element order used everywhere
//! (`1 < a < … < a^(2n-1) < b < b·a < …`), and the canonical index of an
//! element is `eps·2n + k`.

mod automorphism;
mod fusion;
mod homogeneity;
mod subgroup;

use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use automorphism::{extend_homomorphism, Automorphism, AutomorphismTable};
pub use fusion::{are_fused, FusionKind, FusionVerdict};
pub use homogeneity::{is_homogeneous, HomogeneityReport, NonExtendingIsomorphism};
pub use subgroup::{all_subgroups, Subgroup, SubgroupKind};

/// Default guard for exhaustive subgroup-isomorphism enumeration.
pub const HOMOGENEITY_GUARD: u32 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GqParams {
    n: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    eps: u8,
    k: u32,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { eps: 0, k: 0 };

    /// 1 for the coset `b·<a>`, 0 for powers of `a`.
    pub fn eps(self) -> u8 {
        self.eps
    }

    /// The exponent of `a`, already reduced mod `2n`.
    pub fn k(self) -> u32 {
        self.k
    }

    pub fn is_identity(self) -> bool {
        self == Self::IDENTITY
    }

    pub fn in_cyclic_part(self) -> bool {
        self.eps == 0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.eps, self.k) {
            (0, 0) => f.write_str("1"),
            (0, 1) => f.write_str("a"),
            (0, k) => write!(f, "a^{k}"),
            (_, 0) => f.write_str("b"),
            (_, 1) => f.write_str("b*a"),
            (_, k) => write!(f, "b*a^{k}"),
        }
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl GqParams {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "n must be at least 2 (got {n})"
            )));
        }
        Ok(GqParams { n })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    /// `|Q_4n| = 4n`.
    pub fn order(self) -> usize {
        4 * self.n as usize
    }

    /// Order of the cyclic part `<a>`, i.e. the exponent modulus `2n`.
    pub fn modulus(self) -> u32 {
        2 * self.n
    }

    /// `b^eps · a^k` with `k` reduced mod `2n` (negative exponents allowed).
    pub fn element(self, eps: u8, k: i64) -> GroupElement {
        GroupElement {
            eps: eps & 1,
            k: k.rem_euclid(self.modulus() as i64) as u32,
        }
    }

    pub fn identity(self) -> GroupElement {
        GroupElement::IDENTITY
    }

    pub fn a(self) -> GroupElement {
        self.element(0, 1)
    }

    pub fn b(self) -> GroupElement {
        self.element(1, 0)
    }

    pub fn a_pow(self, k: i64) -> GroupElement {
        self.element(0, k)
    }

    pub fn b_a_pow(self, k: i64) -> GroupElement {
        self.element(1, k)
    }

    pub fn contains(self, x: GroupElement) -> bool {
        x.eps <= 1 && x.k < self.modulus()
    }

    /// Canonical index `eps·2n + k`.
    pub fn index(self, x: GroupElement) -> usize {
        x.eps as usize * self.modulus() as usize + x.k as usize
    }

    pub fn from_index(self, i: usize) -> GroupElement {
        let m = self.modulus() as usize;
        GroupElement {
            eps: (i / m) as u8,
            k: (i % m) as u32,
        }
    }

    /// All elements in canonical order.
    pub fn elements(self) -> impl Iterator<Item = GroupElement> + Clone {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    /// `(b^e1 a^k1)(b^e2 a^k2) = b^(e1+e2) a^((-1)^e2·k1 + k2 + [e1=e2=1]·n)`.
    pub fn multiply(self, x: GroupElement, y: GroupElement) -> GroupElement {
        let m = self.modulus();
        let k1 = if y.eps == 1 { (m - x.k) % m } else { x.k };
        let carry = if x.eps == 1 && y.eps == 1 { self.n } else { 0 };
        GroupElement {
            eps: x.eps ^ y.eps,
            k: (k1 + y.k + carry) % m,
        }
    }

    pub fn inverse(self, x: GroupElement) -> GroupElement {
        let m = self.modulus();
        if x.eps == 0 {
            GroupElement {
                eps: 0,
                k: (m - x.k) % m,
            }
        } else {
            // (b a^k)^-1 = a^-k b^-1 = a^-k b a^n = b a^(k+n)
            GroupElement {
                eps: 1,
                k: (x.k + self.n) % m,
            }
        }
    }

    pub fn pow(self, x: GroupElement, e: i64) -> GroupElement {
        let base = if e < 0 { self.inverse(x) } else { x };
        let mut acc = GroupElement::IDENTITY;
        for _ in 0..e.unsigned_abs() {
            acc = self.multiply(acc, base);
        }
        acc
    }

    /// `2n / gcd(k, 2n)` on the cyclic part, 4 on the coset.
    pub fn element_order(self, x: GroupElement) -> u32 {
        if x.eps == 1 {
            4
        } else {
            self.modulus() / x.k.gcd(&self.modulus())
        }
    }

    /// Parses one element token: `1`, `a`, `a^k`, `b`, `b*a`, `b*a^k`
    /// (also `ba^k`); whitespace is ignored and `k` may be negative.
    pub fn parse_element(self, token: &str) -> Result<GroupElement> {
        let s: String = token.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |reason: &str| Error::Parse {
            input: token.to_string(),
            reason: reason.to_string(),
        };
        if s == "1" {
            return Ok(self.identity());
        }
        let (eps, rest) = match s.strip_prefix('b') {
            Some(r) => (1u8, r.strip_prefix('*').unwrap_or(r)),
            None => (0u8, s.as_str()),
        };
        if rest.is_empty() {
            return if eps == 1 {
                Ok(self.b())
            } else {
                Err(err("empty element"))
            };
        }
        let exp = rest
            .strip_prefix('a')
            .ok_or_else(|| err("expected `1`, `a^k`, `b` or `b*a^k`"))?;
        let k: i64 = if exp.is_empty() {
            1
        } else {
            exp.strip_prefix('^')
                .ok_or_else(|| err("expected `^` after `a`"))?
                .parse()
                .map_err(|_| err("exponent is not an integer"))?
        };
        Ok(self.element(eps, k))
    }

    /// Parses a comma-separated element list (duplicates are kept; callers
    /// that need a set reject them).
    pub fn parse_elements(self, expr: &str) -> Result<Vec<GroupElement>> {
        if expr.trim().is_empty() {
            return Err(Error::Parse {
                input: expr.to_string(),
                reason: "empty set expression".into(),
            });
        }
        expr.split(',').map(|t| self.parse_element(t)).collect()
    }
}

impl GqParams {
    /// `|Aut(Q_4n)|`: `2n·φ(2n)` for `n ≥ 3`, and 24 for `Q_8`.
    pub fn automorphism_count(self) -> usize {
        if self.n == 2 {
            24
        } else {
            (self.modulus() * phi(self.modulus())) as usize
        }
    }
}

pub(crate) fn phi(m: u32) -> u32 {
    (1..=m).filter(|r| r.gcd(&m) == 1).count() as u32
}

pub(crate) fn units_mod(m: u32) -> impl Iterator<Item = u32> {
    (1..m).filter(move |r| r.gcd(&m) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u32) -> GqParams {
        GqParams::new(n).unwrap()
    }

    #[test]
    fn rejects_small_n() {
        assert!(matches!(GqParams::new(1), Err(Error::InvalidParameter(_))));
        assert!(GqParams::new(0).is_err());
    }

    #[test]
    fn multiplication_examples() {
        let p = q(3);
        assert_eq!(p.multiply(p.a(), p.a()), p.a_pow(2));
        assert_eq!(p.multiply(p.b(), p.b()), p.a_pow(3));
        let conj = p.multiply(p.multiply(p.inverse(p.b()), p.a()), p.b());
        assert_eq!(conj, p.a_pow(5));
    }

    #[test]
    fn inverse_examples() {
        let p = q(3);
        assert_eq!(p.inverse(p.identity()), p.identity());
        assert_eq!(p.inverse(p.a()), p.a_pow(5));
        assert_eq!(p.inverse(p.b()), p.b_a_pow(3));
        // exhaustive product-identity check
        for x in p.elements() {
            assert!(p.multiply(x, p.inverse(x)).is_identity());
            assert!(p.multiply(p.inverse(x), x).is_identity());
        }
    }

    #[test]
    fn associativity_is_exhaustive_for_small_n() {
        for n in 2..=4 {
            let p = q(n);
            for x in p.elements() {
                for y in p.elements() {
                    let xy = p.multiply(x, y);
                    for z in p.elements() {
                        assert_eq!(p.multiply(xy, z), p.multiply(x, p.multiply(y, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn presentation_relations_hold() {
        for n in 2..=12 {
            let p = q(n);
            assert!(p.pow(p.a(), 2 * n as i64).is_identity());
            assert_eq!(p.pow(p.b(), 2), p.a_pow(n as i64));
            let conj = p.multiply(p.multiply(p.inverse(p.b()), p.a()), p.b());
            assert_eq!(conj, p.inverse(p.a()));
            assert!(p.elements().all(|x| p.multiply(x, p.identity()) == x));
        }
    }

    #[test]
    fn element_orders_match_repeated_multiplication() {
        for n in 2..=8 {
            let p = q(n);
            for x in p.elements() {
                let mut t = 1;
                let mut y = x;
                while !y.is_identity() {
                    y = p.multiply(y, x);
                    t += 1;
                }
                assert_eq!(p.element_order(x), t, "n={n} x={x}");
                assert_eq!(p.order() as u32 % t, 0);
            }
            // solutions of x^4 = 1: the coset (2n) plus elements of <a> with order | 4
            let fourth = p.elements().filter(|&x| p.pow(x, 4).is_identity()).count();
            let cyclic = (0..2 * n).filter(|k| (4 * k) % (2 * n) == 0).count();
            assert_eq!(fourth, 2 * n as usize + cyclic);
        }
        let p = q(4);
        assert_eq!(p.element_order(p.a_pow(2)), 4);
        assert_eq!(p.element_order(p.identity()), 1);
        assert_eq!(q(3).element_order(q(3).b_a_pow(2)), 4);
    }

    #[test]
    fn grammar_round_trips() {
        let p = q(5);
        for x in p.elements() {
            assert_eq!(p.parse_element(&x.to_string()).unwrap(), x);
        }
        assert_eq!(p.parse_element(" b * a ^ 12 ").unwrap(), p.b_a_pow(2));
        assert_eq!(p.parse_element("a^-1").unwrap(), p.a_pow(9));
        assert_eq!(p.parse_element("ba^3").unwrap(), p.b_a_pow(3));
        assert!(p.parse_element("c").is_err());
        assert!(p.parse_element("a^x").is_err());
        assert!(p.parse_elements("").is_err());
        assert_eq!(p.parse_elements("1, a, b").unwrap().len(), 3);
    }

    #[test]
    fn index_is_canonical_order() {
        let p = q(3);
        let v: Vec<_> = p.elements().collect();
        let mut sorted = v.clone();
        sorted.sort();
        assert_eq!(v, sorted);
        assert!(v.iter().enumerate().all(|(i, &x)| p.index(x) == i));
    }

    #[test]
    fn totient() {
        assert_eq!(phi(6), 2);
        assert_eq!(phi(4), 2);
        assert_eq!(phi(14), 6);
        assert_eq!(units_mod(10).collect::<Vec<_>>(), vec![1, 3, 7, 9]);
    }
}
