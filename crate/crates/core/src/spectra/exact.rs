//! Exact integer characteristic polynomials.
//!
//! `det(tI - M)` is evaluated at `deg + 1` consecutive integers by
//! fraction-free (Bareiss) elimination and the polynomial is recovered by
//! Newton interpolation over the rationals. Elimination is written against a
//! [`Ring`] so the same code runs over `ℤ` directly ([`Integers`]) or over
//! word-size prime fields ([`PrimeField`]) whose results are lifted back to
//! `ℤ` by Chinese remaindering under a Hadamard bound.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::Polynomial;

pub type IntPoly = Polynomial<BigInt>;

/// A commutative ring in which the divisions performed by Bareiss
/// elimination are exact.
pub trait Ring {
    type Elem: Clone + PartialEq;
    /// A prepared divisor (an inverse, for fields).
    type Divisor;

    fn zero(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `a·b - c·d`, the Bareiss update numerator.
    fn mul_sub(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem, d: &Self::Elem) -> Self::Elem;
    fn divisor(&self, d: &Self::Elem) -> Self::Divisor;
    fn div_exact(&self, a: &Self::Elem, d: &Self::Divisor) -> Self::Elem;
}

/// `ℤ` with arbitrary precision.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;
    type Divisor = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul_sub(&self, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> BigInt {
        a * b - c * d
    }
    fn divisor(&self, d: &BigInt) -> BigInt {
        d.clone()
    }
    fn div_exact(&self, a: &BigInt, d: &BigInt) -> BigInt {
        debug_assert!((a % d).is_zero(), "Bareiss division must be exact");
        a / d
    }
}

/// `ℤ/pℤ` for an odd prime `p < 2^62`, elements held in Montgomery form.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    p: u64,
    /// `-p⁻¹ mod 2^64`
    p_neg_inv: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < 1 << 62, "modulus must be odd and below 2^62");
        let mut inv: u64 = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        PrimeField {
            p,
            p_neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.p_neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    /// Standard representative in `[0, p)`.
    pub fn to_standard(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

impl Ring for PrimeField {
    type Elem = u64;
    type Divisor = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.to_mont(v.rem_euclid(self.p as i64) as u64)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn neg(&self, a: &u64) -> u64 {
        self.sub(0, *a)
    }
    #[inline]
    fn mul_sub(&self, a: &u64, b: &u64, c: &u64, d: &u64) -> u64 {
        self.sub(self.mul(*a, *b), self.mul(*c, *d))
    }
    fn divisor(&self, d: &u64) -> u64 {
        self.pow(*d, self.p - 2)
    }
    fn div_exact(&self, a: &u64, d_inv: &u64) -> u64 {
        self.mul(*a, *d_inv)
    }
}

/// Fraction-free Gaussian elimination (Bareiss) with row pivoting.
pub fn bareiss_det<R: Ring>(ring: &R, mut m: Vec<Vec<R::Elem>>) -> R::Elem {
    let n = m.len();
    if n == 0 {
        return ring.from_i64(1);
    }
    let mut negate = false;
    let mut prev: Option<R::Divisor> = None;
    for k in 0..n - 1 {
        if ring.is_zero(&m[k][k]) {
            match (k + 1..n).find(|&i| !ring.is_zero(&m[i][k])) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return ring.zero(),
            }
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let num = ring.mul_sub(&row[j], pivot, &lead, &pivot_row[j]);
                row[j] = match &prev {
                    Some(d) => ring.div_exact(&num, d),
                    None => num,
                };
            }
        }
        prev = Some(ring.divisor(pivot));
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        ring.neg(&det)
    } else {
        det
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // deterministic for all 64-bit n
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The largest primes below `2^62`, descending.
pub fn crt_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(96);
        let mut c = (1u64 << 62) - 1;
        while out.len() < 96 {
            if is_prime_u64(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    })
}

/// `log2` of the Hadamard bound `∏ ‖row‖₂` (an upper bound on `|det|`).
fn hadamard_bits(m: &[Vec<i64>]) -> f64 {
    m.iter()
        .map(|row| {
            let sq: f64 = row.iter().map(|&v| (v as f64) * (v as f64)).sum();
            if sq == 0.0 {
                0.0
            } else {
                0.5 * sq.log2()
            }
        })
        .sum()
}

/// Exact determinant of an integer matrix by Bareiss elimination over enough
/// 62-bit prime fields to pin the value down, lifted by Chinese remaindering.
pub fn det_multimodular(m: &[Vec<i64>]) -> BigInt {
    let bits = hadamard_bits(m).ceil() as usize + 2;
    let primes = crt_primes();
    let count = bits.div_ceil(61).max(1);
    assert!(count <= primes.len(), "determinant bound exceeds the prime table");
    let mut value = BigInt::zero();
    let mut modulus = BigInt::one();
    for &p in &primes[..count] {
        let field = PrimeField::new(p);
        let mat: Vec<Vec<u64>> = m
            .iter()
            .map(|row| row.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        let r = field.to_standard(bareiss_det(&field, mat));
        // incremental CRT: value ≡ r (mod p)
        let cur = (&value % p).to_u64().unwrap_or(0);
        let cur = if value.is_negative() { (cur + p) % p } else { cur };
        let diff = (r as i128 - cur as i128).rem_euclid(p as i128) as u64;
        let m_mod = (&modulus % p).to_u64().unwrap();
        let m_inv = field.to_standard(field.divisor(&field.from_i64(m_mod as i64 % p as i64)));
        let t = ((diff as u128 * m_inv as u128) % p as u128) as u64;
        value += &modulus * t;
        modulus *= p;
    }
    let half = &modulus >> 1;
    if value > half {
        value -= &modulus;
    }
    value
}

/// Exact determinant over `ℤ` with arbitrary-precision Bareiss.
pub fn det_bigint(m: &[Vec<i64>]) -> BigInt {
    let mat = m
        .iter()
        .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    bareiss_det(&Integers, mat)
}

/// Recovers the polynomial of degree `≤ values.len() - 1` through
/// `(x0 + i, values[i])` by Newton forward differences over `ℚ`.
pub fn interpolate_consecutive(x0: i64, values: &[BigInt]) -> Result<IntPoly> {
    let n = values.len();
    let mut diffs: Vec<BigInt> = values.to_vec();
    let mut leading = Vec::with_capacity(n);
    for k in 0..n {
        leading.push(diffs[0].clone());
        for i in 0..n - k - 1 {
            diffs[i] = &diffs[i + 1] - &diffs[i];
        }
    }
    // f(x) = Σ_k Δ^k f(x0) / k! · ∏_{i<k} (x - x0 - i)
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); n];
    let mut basis: Vec<BigRational> = vec![BigRational::one()];
    let mut factorial = BigInt::one();
    for (k, d) in leading.iter().enumerate() {
        if k > 0 {
            factorial *= k;
            // basis *= (x - (x0 + k - 1))
            let root = BigRational::from_integer(BigInt::from(x0 + k as i64 - 1));
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (i, c) in basis.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * &root;
            }
            basis = next;
        }
        if d.is_zero() {
            continue;
        }
        let coef = BigRational::new(d.clone(), factorial.clone());
        for (i, c) in basis.iter().enumerate() {
            acc[i] += &coef * c;
        }
    }
    let mut out = Vec::with_capacity(n);
    for c in acc {
        if !c.is_integer() {
            return Err(Error::Consistency(format!(
                "interpolated coefficient {c} is not an integer"
            )));
        }
        out.push(c.to_integer());
    }
    Ok(Polynomial::new(out))
}

/// `det(tI - M)` for a square integer matrix, by evaluation at
/// `dim + 1` consecutive integers centred on zero and interpolation.
pub fn charpoly_by_interpolation(m: &[Vec<i64>]) -> Result<IntPoly> {
    let dim = m.len();
    let x0 = -((dim / 2) as i64);
    let values: Vec<BigInt> = (0..=dim as i64)
        .into_par_iter()
        .map(|i| {
            let t = x0 + i;
            let shifted: Vec<Vec<i64>> = m
                .iter()
                .enumerate()
                .map(|(r, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(c, &v)| if r == c { t - v } else { -v })
                        .collect()
                })
                .collect();
            det_multimodular(&shifted)
        })
        .collect();
    let poly = interpolate_consecutive(x0, &values)?;
    if poly.degree() != Some(dim) || !poly.leading().is_some_and(|c| c.is_one()) {
        return Err(Error::Consistency(
            "characteristic polynomial is not monic of full degree".into(),
        ));
    }
    Ok(poly)
}

/// Multiplicity of the integer `r` as a root, by repeated synthetic division.
pub fn root_multiplicity(poly: &IntPoly, r: &BigInt) -> usize {
    let mut coeffs = poly.coeffs().to_vec();
    let mut mult = 0;
    while coeffs.len() > 1 {
        // divide by (x - r), highest degree first
        let deg = coeffs.len() - 1;
        let mut quotient = vec![BigInt::zero(); deg];
        let mut carry = BigInt::zero();
        for i in (0..=deg).rev() {
            let v = &coeffs[i] + &carry * r;
            if i == 0 {
                carry = v;
            } else {
                quotient[i - 1] = v.clone();
                carry = v;
            }
        }
        if !carry.is_zero() {
            break;
        }
        mult += 1;
        coeffs = quotient;
    }
    mult
}

/// Power sums `p_1..p_kmax` of the roots of a monic polynomial (Newton's
/// identities); `p_k = trace(M^k)` when `poly` is the charpoly of `M`.
pub fn power_sums(poly: &IntPoly, kmax: usize) -> Vec<BigInt> {
    let deg = poly.degree().unwrap_or(0);
    // e_i = (-1)^i c_{deg-i}
    let e = |i: usize| -> BigInt {
        if i > deg {
            return BigInt::zero();
        }
        let c = poly.coeff(deg - i);
        if i % 2 == 0 {
            c
        } else {
            -c
        }
    };
    let mut p: Vec<BigInt> = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let mut acc = BigInt::zero();
        for i in 1..k {
            let term = e(i) * &p[k - i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let last = e(k) * BigInt::from(k);
        if k % 2 == 1 {
            acc += last;
        } else {
            acc -= last;
        }
        p.push(acc);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Leibniz expansion, the brute-force oracle for small determinants.
    fn det_leibniz(m: &[Vec<i64>]) -> i128 {
        let n = m.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0i128;
        permute(&mut perm, 0, m, &mut total);
        total
    }

    fn permute(perm: &mut Vec<usize>, k: usize, m: &[Vec<i64>], total: &mut i128) {
        let n = perm.len();
        if k == n {
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if perm[i] > perm[j] {
                        inv += 1;
                    }
                }
            }
            let prod: i128 = (0..n).map(|i| m[i][perm[i]] as i128).product();
            *total += if inv % 2 == 0 { prod } else { -prod };
            return;
        }
        for i in k..n {
            perm.swap(k, i);
            permute(perm, k + 1, m, total);
            perm.swap(k, i);
        }
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=6).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::vec(-40i64..=40, n), n)
        })
    }

    proptest! {
        #[test]
        fn determinant_routes_agree(m in arb_matrix()) {
            let oracle = BigInt::from(det_leibniz(&m));
            prop_assert_eq!(det_bigint(&m), oracle.clone());
            prop_assert_eq!(det_multimodular(&m), oracle);
        }

        #[test]
        fn interpolation_recovers_polynomials(coeffs in proptest::collection::vec(-1000i64..=1000, 1..12), x0 in -10i64..=10) {
            let p = Polynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect());
            let values: Vec<BigInt> = (0..coeffs.len() as i64).map(|i| p.eval(&BigInt::from(x0 + i))).collect();
            prop_assert_eq!(interpolate_consecutive(x0, &values).unwrap(), p);
        }
    }

    #[test]
    fn singular_and_pivoting_cases() {
        assert_eq!(det_bigint(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(det_multimodular(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(det_multimodular(&[vec![1, 2], vec![2, 4]]), BigInt::zero());
        assert_eq!(det_multimodular(&[vec![0, 0], vec![0, 0]]), BigInt::zero());
    }

    #[test]
    fn large_determinant_needs_several_primes() {
        // diag(10^15, …): six of them exceed one 62-bit prime by far
        let n = 6;
        let m: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1_000_000_000_000_000 } else { (i * j) as i64 }).collect())
            .collect();
        assert_eq!(det_multimodular(&m), det_bigint(&m));
    }

    #[test]
    fn prime_table() {
        let ps = crt_primes();
        assert!(ps.iter().all(|&p| p < 1 << 62 && p > 1 << 61));
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(is_prime_u64(4_611_686_018_427_387_847));
        assert!(!is_prime_u64(4_611_686_018_427_387_849));
    }

    #[test]
    fn field_arithmetic() {
        let f = PrimeField::new(crt_primes()[0]);
        let a = f.from_i64(-5);
        let b = f.from_i64(7);
        assert_eq!(f.to_standard(f.mul(a, b)), f.modulus() - 35);
        let inv = f.divisor(&b);
        assert_eq!(f.to_standard(f.div_exact(&f.from_i64(21), &inv)), 3);
    }

    #[test]
    fn charpoly_of_small_matrices() {
        // path on two vertices: t^2 - 1
        let p = charpoly_by_interpolation(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(p.coeffs(), &[BigInt::from(-1), BigInt::zero(), BigInt::one()]);
        // triangle: (t - 2)(t + 1)^2 = t^3 - 3t - 2
        let tri = vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
        let p = charpoly_by_interpolation(&tri).unwrap();
        assert_eq!(p, Polynomial::new([-2, -3, 0, 1].map(BigInt::from).to_vec()));
        assert_eq!(root_multiplicity(&p, &BigInt::from(-1)), 2);
        assert_eq!(root_multiplicity(&p, &BigInt::from(2)), 1);
        assert_eq!(root_multiplicity(&p, &BigInt::from(1)), 0);
        // trace(A) = 0, trace(A^2) = 6, trace(A^3) = 6·(number of triangles) = 6
        assert_eq!(power_sums(&p, 3), [0, 6, 6].map(BigInt::from).to_vec());
    }
}
