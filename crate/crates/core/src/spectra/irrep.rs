//! The inequivalent irreducible complex representations of `Q_4n`.
//!
//! Four linear characters, the two-dimensional family indexed by odd `j`,
//! and the two-dimensional family indexed by `h`, whose range depends on
//! the parity of `n`.

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bicayley::ConnectionSet;
use crate::error::{Error, Result};
use crate::group::{GqParams, GroupElement};
use crate::poly::Polynomial;
use crate::scalar::{root_of_unity, RealScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IrrepKind {
    Psi1,
    Psi2,
    Psi3,
    Psi4,
    /// Odd `j` with `1 ≤ j ≤ n-1`.
    Phi(u32),
    /// `1 ≤ h ≤ (n-1)/2` for odd `n`, `1 ≤ h ≤ (n-2)/2` for even `n`.
    Eta(u32),
}

/// An irreducible representation bound to a particular `n`, which fixes the
/// parity-dependent table it is read from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IrrepDescriptor {
    kind: IrrepKind,
    n: u32,
}

fn eta_bound(n: u32) -> u32 {
    if n % 2 == 1 {
        (n - 1) / 2
    } else {
        (n - 2) / 2
    }
}

impl IrrepDescriptor {
    pub fn new(kind: IrrepKind, p: &GqParams) -> Result<Self> {
        let n = p.n();
        let ok = match kind {
            IrrepKind::Phi(j) => j % 2 == 1 && j <= n - 1,
            IrrepKind::Eta(h) => h >= 1 && h <= eta_bound(n),
            _ => true,
        };
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "{kind:?} is not an irreducible representation of Q_{}",
                4 * n
            )));
        }
        Ok(IrrepDescriptor { kind, n })
    }

    /// Every irreducible representation, characters first, then the `j`
    /// family, then the `h` family.
    pub fn all(p: &GqParams) -> Vec<IrrepDescriptor> {
        let n = p.n();
        let mut out: Vec<IrrepDescriptor> = [
            IrrepKind::Psi1,
            IrrepKind::Psi2,
            IrrepKind::Psi3,
            IrrepKind::Psi4,
        ]
        .into_iter()
        .map(|kind| IrrepDescriptor { kind, n })
        .collect();
        out.extend((1..n).step_by(2).map(|j| IrrepDescriptor {
            kind: IrrepKind::Phi(j),
            n,
        }));
        out.extend((1..=eta_bound(n)).map(|h| IrrepDescriptor {
            kind: IrrepKind::Eta(h),
            n,
        }));
        out
    }

    pub fn kind(&self) -> IrrepKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        match self.kind {
            IrrepKind::Phi(_) | IrrepKind::Eta(_) => 2,
            _ => 1,
        }
    }

    fn check(&self, p: &GqParams) -> Result<()> {
        if p.n() % 2 != self.n % 2 {
            return Err(Error::InvalidParameter(format!(
                "{self} belongs to the {} table but n = {} has the other parity",
                if self.n % 2 == 1 { "odd" } else { "even" },
                p.n()
            )));
        }
        if p.n() != self.n {
            return Err(Error::InvalidParameter(format!(
                "{self} was built for n = {}, not n = {}",
                self.n,
                p.n()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for IrrepDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            IrrepKind::Psi1 => write!(f, "psi1"),
            IrrepKind::Psi2 => write!(f, "psi2"),
            IrrepKind::Psi3 => write!(f, "psi3"),
            IrrepKind::Psi4 => write!(f, "psi4"),
            IrrepKind::Phi(j) => write!(f, "phi_{j}"),
            IrrepKind::Eta(h) => write!(f, "eta_{h}"),
        }
    }
}

/// A 1×1 or 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RepMatrix<T> {
    dim: usize,
    e: [Complex<T>; 4],
}

impl<T: RealScalar> RepMatrix<T> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim == 1 || dim == 2);
        RepMatrix {
            dim,
            e: [Complex::zero(); 4],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        m.e[0] = Complex::one();
        if dim == 2 {
            m.e[3] = Complex::one();
        }
        m
    }

    pub fn scalar(z: Complex<T>) -> Self {
        let mut m = Self::zero(1);
        m.e[0] = z;
        m
    }

    pub fn from_rows(rows: [[Complex<T>; 2]; 2]) -> Self {
        RepMatrix {
            dim: 2,
            e: [rows[0][0], rows[0][1], rows[1][0], rows[1][1]],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        assert!(i < self.dim && j < self.dim);
        self.e[i * 2 + j]
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = *self;
        for (o, x) in out.e.iter_mut().zip(other.e.iter()) {
            *o = *o + *x;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        if self.dim == 1 {
            return Self::scalar(self.e[0] * other.e[0]);
        }
        let (a, b) = (&self.e, &other.e);
        RepMatrix {
            dim: 2,
            e: [
                a[0] * b[0] + a[1] * b[2],
                a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3],
            ],
        }
    }

    pub fn trace(&self) -> Complex<T> {
        if self.dim == 1 {
            self.e[0]
        } else {
            self.e[0] + self.e[3]
        }
    }

    pub fn det(&self) -> Complex<T> {
        if self.dim == 1 {
            self.e[0]
        } else {
            self.e[0] * self.e[3] - self.e[1] * self.e[2]
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn distance(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim);
        self.e
            .iter()
            .zip(other.e.iter())
            .map(|(x, y)| (*x - *y).norm())
            .fold(T::zero(), |a, b| a.max(b))
    }
}

fn sign<T: RealScalar>(k: u32) -> Complex<T> {
    if k % 2 == 0 {
        Complex::one()
    } else {
        -Complex::<T>::one()
    }
}

/// The table entry of representation `d` at `x`.
pub fn irrep_value<T: RealScalar>(
    d: &IrrepDescriptor,
    x: GroupElement,
    p: &GqParams,
) -> Result<RepMatrix<T>> {
    d.check(p)?;
    if !p.contains(x) {
        return Err(Error::InvalidParameter(format!("{x} is not an element of Q_{}", p.order())));
    }
    let n = p.n();
    let modulus = 2 * n;
    let k = x.k();
    let twisted = x.eps() == 1;
    let odd = n % 2 == 1;
    let i = Complex::new(T::zero(), T::one());
    let value = match d.kind {
        IrrepKind::Psi1 => RepMatrix::scalar(Complex::one()),
        IrrepKind::Psi2 => RepMatrix::scalar(if twisted { -Complex::one() } else { Complex::one() }),
        IrrepKind::Psi3 => {
            let s = sign::<T>(k);
            RepMatrix::scalar(if twisted && odd { s * i } else { s })
        }
        IrrepKind::Psi4 => {
            if !twisted {
                RepMatrix::scalar(sign(k))
            } else {
                let s = sign::<T>(k + 1);
                RepMatrix::scalar(if odd { s * i } else { s })
            }
        }
        IrrepKind::Phi(j) | IrrepKind::Eta(j) => {
            // ω = exp(iπ/n) is a primitive 2n-th root; η uses ω^2.
            let step = if matches!(d.kind, IrrepKind::Phi(_)) { j } else { 2 * j };
            let e = (k as i64) * (step as i64);
            let up = root_of_unity::<T>(e, modulus);
            let down = root_of_unity::<T>(-e, modulus);
            let z = Complex::zero();
            if !twisted {
                RepMatrix::from_rows([[up, z], [z, down]])
            } else if matches!(d.kind, IrrepKind::Phi(_)) {
                RepMatrix::from_rows([[z, down], [-up, z]])
            } else {
                RepMatrix::from_rows([[z, down], [up, z]])
            }
        }
    };
    Ok(value)
}

/// `ρ(S) = Σ_{s∈S} ρ(s)`.
pub fn rep_sum<T: RealScalar>(d: &IrrepDescriptor, set: &ConnectionSet) -> Result<RepMatrix<T>> {
    let p = &set.params();
    let mut acc = RepMatrix::zero(d.degree());
    for &s in set.elements() {
        acc = acc.add(&irrep_value(d, s, p)?);
    }
    Ok(acc)
}

/// `det(λ²I - ρ(S)ρ(S⁻¹))`, a polynomial of degree `2·deg ρ` in `λ`.
pub fn factor_charpoly<T: RealScalar>(
    d: &IrrepDescriptor,
    set: &ConnectionSet,
) -> Result<Polynomial<Complex<T>>> {
    let m = gram_block(d, set)?;
    let z = Complex::zero();
    let one = Complex::one();
    let coeffs = if m.dim() == 1 {
        vec![-m.get(0, 0), z, one]
    } else {
        vec![m.det(), z, -m.trace(), z, one]
    };
    Ok(Polynomial::new(coeffs))
}

/// `ρ(S)ρ(S⁻¹)`.
pub(crate) fn gram_block<T: RealScalar>(
    d: &IrrepDescriptor,
    set: &ConnectionSet,
) -> Result<RepMatrix<T>> {
    let s = rep_sum::<T>(d, set)?;
    let s_inv = rep_sum::<T>(d, &set.inverse_set())?;
    Ok(s.mul(&s_inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GqParams;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn degrees_sum_to_group_order() {
        for n in 2..=50 {
            let p = GqParams::new(n).unwrap();
            let total: usize = IrrepDescriptor::all(&p).iter().map(|d| d.degree().pow(2)).sum();
            assert_eq!(total, 4 * n as usize, "n={n}");
        }
    }

    #[test]
    fn table_entries() {
        let p3 = GqParams::new(3).unwrap();
        let p4 = GqParams::new(4).unwrap();
        let psi1 = IrrepDescriptor::new(IrrepKind::Psi1, &p3).unwrap();
        for x in p3.elements() {
            assert_eq!(irrep_value::<f64>(&psi1, x, &p3).unwrap().get(0, 0), c(1.0, 0.0));
        }
        let psi3 = IrrepDescriptor::new(IrrepKind::Psi3, &p3).unwrap();
        for k in 0..6 {
            let v = irrep_value::<f64>(&psi3, p3.b_a_pow(k), &p3).unwrap().get(0, 0);
            let expect = if k % 2 == 0 { c(0.0, 1.0) } else { c(0.0, -1.0) };
            assert_eq!(v, expect);
        }
        let psi3 = IrrepDescriptor::new(IrrepKind::Psi3, &p4).unwrap();
        for k in 0..8 {
            let v = irrep_value::<f64>(&psi3, p4.b_a_pow(k), &p4).unwrap().get(0, 0);
            assert_eq!(v, c(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0));
        }
    }

    #[test]
    fn invalid_descriptors() {
        let p3 = GqParams::new(3).unwrap();
        let p4 = GqParams::new(4).unwrap();
        assert!(IrrepDescriptor::new(IrrepKind::Phi(2), &p4).is_err());
        assert!(IrrepDescriptor::new(IrrepKind::Phi(5), &p4).is_err());
        assert!(IrrepDescriptor::new(IrrepKind::Eta(2), &p4).is_err());
        assert!(IrrepDescriptor::new(IrrepKind::Eta(1), &p4).is_ok());
        assert!(IrrepDescriptor::new(IrrepKind::Eta(1), &p3).is_ok());
        assert!(IrrepDescriptor::new(IrrepKind::Eta(0), &p3).is_err());
        // n = 2 has no η at all
        let p2 = GqParams::new(2).unwrap();
        assert!(IrrepDescriptor::new(IrrepKind::Eta(1), &p2).is_err());
        let psi3 = IrrepDescriptor::new(IrrepKind::Psi3, &p3).unwrap();
        assert!(irrep_value::<f64>(&psi3, p4.b(), &p4).is_err());
        let p5 = GqParams::new(5).unwrap();
        assert!(irrep_value::<f64>(&psi3, p5.b(), &p5).is_err());
    }

    #[test]
    fn representations_are_homomorphisms() {
        for n in 2..=6 {
            let p = GqParams::new(n).unwrap();
            for d in IrrepDescriptor::all(&p) {
                for x in p.elements() {
                    let rx = irrep_value::<f64>(&d, x, &p).unwrap();
                    for y in p.elements() {
                        let ry = irrep_value::<f64>(&d, y, &p).unwrap();
                        let rxy = irrep_value::<f64>(&d, p.multiply(x, y), &p).unwrap();
                        assert!(rx.mul(&ry).distance(&rxy) < 1e-12, "n={n} {d} {x} {y}");
                    }
                    assert!(rx.det().norm() > 0.5);
                }
            }
        }
    }

    #[test]
    fn rep_sums() {
        let p = GqParams::new(3).unwrap();
        let s = ConnectionSet::parse(p, "1, a, b").unwrap();
        let phi1 = IrrepDescriptor::new(IrrepKind::Phi(1), &p).unwrap();
        let m = rep_sum::<f64>(&phi1, &s).unwrap();
        let w = Complex::from_polar(1.0, std::f64::consts::PI / 3.0);
        let expect = RepMatrix::from_rows([[c(1.0, 0.0) + w, c(1.0, 0.0)], [c(-1.0, 0.0), c(1.0, 0.0) + w.inv()]]);
        assert!(m.distance(&expect) < 1e-14);
        let psi1 = IrrepDescriptor::new(IrrepKind::Psi1, &p).unwrap();
        assert_eq!(rep_sum::<f64>(&psi1, &s).unwrap().get(0, 0), c(3.0, 0.0));
        let one = ConnectionSet::parse(p, "1").unwrap();
        for d in IrrepDescriptor::all(&p) {
            let m = rep_sum::<f64>(&d, &one).unwrap();
            assert!(m.distance(&RepMatrix::identity(d.degree())) < 1e-15);
        }
    }

    #[test]
    fn factor_closed_forms() {
        let pi = std::f64::consts::PI;
        for n in [3u32, 5, 7] {
            let p = GqParams::new(n).unwrap();
            let s = ConnectionSet::parse(p, "1, a, b").unwrap();
            let t = ConnectionSet::parse(p, "1, a^2, b").unwrap();
            let psi1 = IrrepDescriptor::new(IrrepKind::Psi1, &p).unwrap();
            let f = factor_charpoly::<f64>(&psi1, &s).unwrap();
            assert!((f.coeff(0) - c(-9.0, 0.0)).norm() < 1e-12);
            let psi3 = IrrepDescriptor::new(IrrepKind::Psi3, &p).unwrap();
            let f = factor_charpoly::<f64>(&psi3, &t).unwrap();
            assert!((f.coeff(0) - c(-5.0, 0.0)).norm() < 1e-12);
            for j in (1..n).step_by(2) {
                let d = IrrepDescriptor::new(IrrepKind::Phi(j), &p).unwrap();
                let f = factor_charpoly::<f64>(&d, &s).unwrap();
                // (λ² - q)² = λ⁴ - 2qλ² + q²
                let q = 3.0 + 2.0 * (j as f64 * pi / n as f64).cos();
                assert!((f.coeff(2) - c(-2.0 * q, 0.0)).norm() < 1e-9);
                assert!((f.coeff(0) - c(q * q, 0.0)).norm() < 1e-9);
            }
            for h in 1..=(n - 1) / 2 {
                let d = IrrepDescriptor::new(IrrepKind::Eta(h), &p).unwrap();
                let f = factor_charpoly::<f64>(&d, &s).unwrap();
                let q = 3.0 + 2.0 * (2.0 * h as f64 * pi / n as f64).cos();
                let r = 4.0 * (h as f64 * pi / n as f64).cos();
                // (λ² - q)² - r²
                for x in [0.0, 0.7, 1.0, 2.3] {
                    let lhs = f.eval(&c(x, 0.0));
                    let rhs = (x * x - q).powi(2) - r * r;
                    assert!((lhs - c(rhs, 0.0)).norm() < 1e-9, "n={n} h={h} x={x}");
                }
            }
        }
    }
}
