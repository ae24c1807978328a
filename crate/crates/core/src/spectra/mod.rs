//! Spectra of bi-Cayley graphs.
//!
//! Two independent routes produce the integer characteristic polynomial of
//! the adjacency matrix: [`spectrum_via_reps`] multiplies per-irrep factors
//! computed in floating point, and [`charpoly_exact`] interpolates exact
//! determinants. The integer polynomial is authoritative; eigenvalue
//! clusters are for display.

pub mod exact;
pub mod irrep;

use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bicayley::{BiCayleyGraph, ConnectionSet};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{round_to_integer, RealScalar};

pub use exact::{charpoly_by_interpolation, power_sums, root_multiplicity, IntPoly};
pub use irrep::{factor_charpoly, irrep_value, rep_sum, IrrepDescriptor, IrrepKind, RepMatrix};

/// Absolute tolerance on the imaginary part and the distance to the nearest
/// integer of every floating coefficient before it is rounded.
pub const COEFFICIENT_TOLERANCE: f64 = 1e-6;

/// Default bound on the vertex count accepted by [`charpoly_exact`].
pub const EXACT_VERTEX_GUARD: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumSource {
    Reps,
    ExactOracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EigenCluster {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumSummary {
    #[serde(serialize_with = "serialize_coefficients")]
    pub charpoly: IntPoly,
    pub eigenvalues: Vec<EigenCluster>,
    pub source: SpectrumSource,
    /// Largest imaginary or rounding residue seen before coefficients were
    /// snapped to integers (zero for the exact route).
    pub max_residue: f64,
}

fn serialize_coefficients<S: Serializer>(p: &IntPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.coeffs().iter().map(|c| c.to_string()))
}

impl SpectrumSummary {
    /// Total multiplicity of the cluster within `tol` of `value`.
    pub fn multiplicity_near(&self, value: f64, tol: f64) -> usize {
        self.eigenvalues
            .iter()
            .filter(|c| (c.value - value).abs() <= tol)
            .map(|c| c.multiplicity)
            .sum()
    }

    /// Exact multiplicity of an integer eigenvalue, read off the polynomial.
    pub fn integer_multiplicity(&self, value: i64) -> usize {
        root_multiplicity(&self.charpoly, &BigInt::from(value))
    }

    /// Coefficients as decimal strings, constant term first.
    pub fn charpoly_json(&self) -> String {
        serde_json::to_string(&charpoly_strings(&self.charpoly)).expect("strings serialize")
    }

    /// `eigenvalue,multiplicity` rows in ascending order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eigenvalue,multiplicity\n");
        for c in &self.eigenvalues {
            let v = if c.value == 0.0 { 0.0 } else { c.value };
            let mut cell = format!("{v:.12}");
            if cell.starts_with('-') && cell.trim_start_matches(['-', '0', '.']).is_empty() {
                cell.remove(0);
            }
            writeln!(out, "{cell},{}", c.multiplicity).unwrap();
        }
        out
    }
}

pub fn charpoly_strings(p: &IntPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

/// Clustering tolerance for a connection set of the given size.
pub fn cluster_tolerance(set_len: usize) -> f64 {
    1e-9 * (1.0 + set_len as f64)
}

/// Groups sorted values whose consecutive gaps are within `tol`; each
/// cluster is reported at its mean.
pub fn cluster_eigenvalues(values: &[(f64, usize)], tol: f64) -> Vec<EigenCluster> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<EigenCluster> = Vec::new();
    let mut sum = 0.0;
    let mut last = f64::NEG_INFINITY;
    for (v, m) in sorted {
        match out.last_mut() {
            Some(c) if v - last <= tol => {
                sum += v * m as f64;
                c.multiplicity += m;
                c.value = sum / c.multiplicity as f64;
            }
            _ => {
                sum = v * m as f64;
                out.push(EigenCluster { value: v, multiplicity: m });
            }
        }
        last = v;
    }
    out
}

/// Spectrum of `BCay(Q_4n, S)` from the irreducible representations, in
/// scalar type `T`.
///
/// Only the full group is supported; for a connection set viewed inside a
/// proper subgroup use [`charpoly_exact`].
pub fn spectrum_via_reps<T: RealScalar>(set: &ConnectionSet) -> Result<SpectrumSummary> {
    if !set.ambient().is_full_group() {
        return Err(Error::UnsupportedRoute(
            "representation tables cover Q_4n only; use the exact oracle for subgroup ambients".into(),
        ));
    }
    let p = set.params();
    let irreps = IrrepDescriptor::all(&p);
    let blocks: Vec<(usize, irrep::RepMatrix<T>)> = irreps
        .par_iter()
        .map(|d| irrep::gram_block::<T>(d, set).map(|m| (d.degree(), m)))
        .collect::<Result<_>>()?;

    let zero = Complex::<T>::zero();
    let one = Complex::<T>::one();
    let mut product = Polynomial::constant(one);
    let mut roots: Vec<(f64, usize)> = Vec::with_capacity(2 * p.order() as usize);
    for (deg, m) in &blocks {
        let factor = if *deg == 1 {
            Polynomial::new(vec![-m.get(0, 0), zero, one])
        } else {
            Polynomial::new(vec![m.det(), zero, -m.trace(), zero, one])
        };
        product = &product * &factor.pow(*deg as u32);
        for mu in block_eigenvalues(m) {
            let r = mu.max(T::zero()).sqrt().to_f64().unwrap_or(f64::NAN);
            roots.push((r, *deg));
            roots.push((-r, *deg));
        }
    }

    let mut residue = 0.0f64;
    let mut coeffs = Vec::with_capacity(product.coeffs().len());
    for c in product.coeffs() {
        let (int, rest) = round_to_integer(c.re);
        let r = rest.abs().to_f64().unwrap_or(f64::INFINITY);
        let im = c.im.abs().to_f64().unwrap_or(f64::INFINITY);
        residue = residue.max(r).max(im);
        coeffs.push(int);
    }
    if !(residue < COEFFICIENT_TOLERANCE) {
        return Err(Error::Consistency(format!(
            "representation-route coefficient residue {residue:e} exceeds {COEFFICIENT_TOLERANCE:e}"
        )));
    }
    let charpoly = Polynomial::new(coeffs);
    check_shape(&charpoly, 2 * p.order() as usize)?;
    Ok(SpectrumSummary {
        charpoly,
        eigenvalues: cluster_eigenvalues(&roots, cluster_tolerance(set.len())),
        source: SpectrumSource::Reps,
        max_residue: residue,
    })
}

/// Eigenvalues of the Hermitian positive semidefinite block `ρ(S)ρ(S⁻¹)`.
fn block_eigenvalues<T: RealScalar>(m: &irrep::RepMatrix<T>) -> Vec<T> {
    if m.dim() == 1 {
        return vec![m.get(0, 0).re];
    }
    let tr = m.trace().re;
    let det = m.det().re;
    let two = T::one() + T::one();
    let four = two + two;
    let disc = (tr * tr - four * det).max(T::zero()).sqrt();
    vec![(tr - disc) / two, (tr + disc) / two]
}

fn check_shape(p: &IntPoly, degree: usize) -> Result<()> {
    if p.degree() != Some(degree) || !p.leading().is_some_and(|c| c.is_one()) {
        return Err(Error::Consistency(format!(
            "characteristic polynomial is not monic of degree {degree}"
        )));
    }
    Ok(())
}

/// Exact characteristic polynomial of the full adjacency matrix, with the
/// default vertex guard.
pub fn charpoly_exact(graph: &BiCayleyGraph) -> Result<SpectrumSummary> {
    charpoly_exact_with_guard(graph, EXACT_VERTEX_GUARD)
}

pub fn charpoly_exact_with_guard(graph: &BiCayleyGraph, guard: usize) -> Result<SpectrumSummary> {
    let n = graph.vertex_count();
    if n > guard {
        return Err(Error::TooLarge {
            what: "vertices for the exact characteristic polynomial",
            limit: guard,
            actual: n,
        });
    }
    let adjacency = graph.adjacency_matrix();
    let charpoly = charpoly_by_interpolation(&adjacency)?;
    check_shape(&charpoly, n)?;
    let eigenvalues = symmetric_eigenvalues(&adjacency, graph.connection_set().len());
    cross_check(&charpoly, &eigenvalues)?;
    Ok(SpectrumSummary {
        charpoly,
        eigenvalues,
        source: SpectrumSource::ExactOracle,
        max_residue: 0.0,
    })
}

fn symmetric_eigenvalues(adjacency: &[Vec<i64>], set_len: usize) -> Vec<EigenCluster> {
    let n = adjacency.len();
    let m = DMatrix::from_fn(n, n, |i, j| adjacency[i][j] as f64);
    let eig = SymmetricEigen::new(m);
    let values: Vec<(f64, usize)> = eig.eigenvalues.iter().map(|&v| (v, 1)).collect();
    // the eigensolver is far less accurate than the clustering tolerance
    // asks for, so its output is grouped more loosely and the groups are
    // verified against the polynomial
    cluster_eigenvalues(&values, cluster_tolerance(set_len).max(1e-7))
}

/// Floating eigenvalues must reproduce the polynomial's low power sums and
/// the exact multiplicity of every integer root they land on.
fn cross_check(charpoly: &IntPoly, clusters: &[EigenCluster]) -> Result<()> {
    let exact = power_sums(charpoly, 4);
    for (k, pk) in exact.iter().enumerate() {
        let pk = pk.to_f64().unwrap_or(f64::INFINITY);
        let float: f64 = clusters
            .iter()
            .map(|c| c.value.powi(k as i32 + 1) * c.multiplicity as f64)
            .sum();
        if (float - pk).abs() > 1e-6 * pk.abs().max(1.0) {
            return Err(Error::Consistency(format!(
                "power sum p{} is {pk} exactly but {float} from the eigensolver",
                k + 1
            )));
        }
    }
    for c in clusters {
        let r = c.value.round();
        if (c.value - r).abs() < 1e-6 {
            let m = root_multiplicity(charpoly, &BigInt::from(r as i64));
            if m != c.multiplicity {
                return Err(Error::Consistency(format!(
                    "eigenvalue {r} has multiplicity {m} exactly but {} from the eigensolver",
                    c.multiplicity
                )));
            }
        }
    }
    Ok(())
}

/// `det(λI - A)` computed as `det(λ²I - BBᵀ)` from the biadjacency block:
/// exact, and roughly eight times cheaper than [`charpoly_exact`].
pub fn bipartite_charpoly(graph: &BiCayleyGraph) -> Result<IntPoly> {
    let b = graph.biadjacency_matrix();
    let h = b.len();
    let gram: Vec<Vec<i64>> = (0..h)
        .map(|i| {
            (0..h)
                .map(|j| (0..h).map(|k| b[i][k] * b[j][k]).sum())
                .collect()
        })
        .collect();
    Ok(charpoly_by_interpolation(&gram)?.substitute_square())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GqParams;
    use twofloat::TwoFloat;

    fn set(n: u32, expr: &str) -> ConnectionSet {
        ConnectionSet::parse(GqParams::new(n).unwrap(), expr).unwrap()
    }

    #[test]
    fn perfect_matching() {
        let s = set(2, "1");
        let g = BiCayleyGraph::build(&s).unwrap();
        let expect = Polynomial::new(vec![BigInt::from(-1), BigInt::zero(), BigInt::one()]).pow(8);
        assert_eq!(charpoly_exact(&g).unwrap().charpoly, expect);
        assert_eq!(spectrum_via_reps::<TwoFloat>(&s).unwrap().charpoly, expect);
        assert_eq!(bipartite_charpoly(&g).unwrap(), expect);
    }

    #[test]
    fn small_multiplicities() {
        let s = set(3, "1, a, b");
        let t = set(3, "1, a^2, b");
        let exact_s = charpoly_exact(&BiCayleyGraph::build(&s).unwrap()).unwrap();
        let reps_s = spectrum_via_reps::<TwoFloat>(&s).unwrap();
        assert_eq!(exact_s.charpoly, reps_s.charpoly);
        assert_eq!(exact_s.integer_multiplicity(1), 3);
        assert_eq!(reps_s.multiplicity_near(1.0, 1e-6), 3);
        assert_eq!(exact_s.multiplicity_near(1.0, 1e-6), 3);
        let reps_t = spectrum_via_reps::<TwoFloat>(&t).unwrap();
        assert_eq!(reps_t.integer_multiplicity(1), 1);
        assert_eq!(reps_t.multiplicity_near(1.0, 1e-6), 1);

        let s4 = spectrum_via_reps::<TwoFloat>(&set(4, "1, a, b")).unwrap();
        let t4 = spectrum_via_reps::<TwoFloat>(&set(4, "1, a^2, b")).unwrap();
        assert_eq!(s4.integer_multiplicity(3), 1);
        assert!(t4.integer_multiplicity(3) >= 2);
    }

    #[test]
    fn single_precision_route_is_coarse_but_consistent_when_small() {
        let s = set(2, "1, a, b");
        let f32_route = spectrum_via_reps::<f32>(&s).unwrap();
        let exact = charpoly_exact(&BiCayleyGraph::build(&s).unwrap()).unwrap();
        assert_eq!(f32_route.charpoly, exact.charpoly);
    }

    #[test]
    fn subgroup_ambient_is_rejected() {
        let s = set(4, "1, a^2").reduced();
        assert!(!s.ambient().is_full_group());
        assert!(matches!(spectrum_via_reps::<f64>(&s), Err(Error::UnsupportedRoute(_))));
        let exact = charpoly_exact(&BiCayleyGraph::build(&s).unwrap()).unwrap();
        assert_eq!(exact.charpoly.degree(), Some(2 * s.ambient().order()));
    }

    #[test]
    fn guard() {
        let g = BiCayleyGraph::build(&set(6, "1, a, b")).unwrap();
        assert!(matches!(
            charpoly_exact_with_guard(&g, 40),
            Err(Error::TooLarge { limit: 40, actual: 48, .. })
        ));
    }

    #[test]
    fn summary_invariants() {
        for (n, expr) in [(3, "1, a, b"), (4, "1, a^2, b"), (5, "1, b, b*a^3"), (6, "1, a, a^3")] {
            let s = set(n, expr);
            let g = BiCayleyGraph::build(&s).unwrap();
            let order = 4 * n as usize;
            for summary in [spectrum_via_reps::<TwoFloat>(&s).unwrap(), charpoly_exact(&g).unwrap()] {
                assert_eq!(summary.charpoly.degree(), Some(2 * order));
                let total: usize = summary.eigenvalues.iter().map(|c| c.multiplicity).sum();
                assert_eq!(total, 2 * order);
                let second: f64 = summary.eigenvalues.iter().map(|c| c.value * c.value * c.multiplicity as f64).sum();
                assert!((second - (2 * order * s.len()) as f64).abs() < 1e-6);
                for (i, c) in summary.charpoly.coeffs().iter().enumerate() {
                    if i % 2 == 1 {
                        assert!(c.is_zero());
                    }
                }
                let k = summary.eigenvalues.len();
                for i in 0..k {
                    let (a, b) = (summary.eigenvalues[i], summary.eigenvalues[k - 1 - i]);
                    assert!((a.value + b.value).abs() < 1e-6 && a.multiplicity == b.multiplicity);
                }
            }
            assert_eq!(bipartite_charpoly(&g).unwrap(), charpoly_exact(&g).unwrap().charpoly);
        }
    }

    #[test]
    fn exports() {
        let s = spectrum_via_reps::<TwoFloat>(&set(2, "1")).unwrap();
        assert_eq!(s.to_csv(), "eigenvalue,multiplicity\n-1.000000000000,8\n1.000000000000,8\n");
        let json: Vec<String> = serde_json::from_str(&s.charpoly_json()).unwrap();
        assert_eq!(json[0], "1");
        assert_eq!(json.len(), 17);
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["source"], "reps");
        assert_eq!(v["charpoly"][16], "1");
    }

    #[test]
    fn csv_normalizes_negative_zero() {
        let summary = SpectrumSummary {
            charpoly: Polynomial::new(vec![BigInt::zero(), BigInt::one()]),
            eigenvalues: vec![EigenCluster { value: -1e-15, multiplicity: 1 }],
            source: SpectrumSource::ExactOracle,
            max_residue: 0.0,
        };
        assert_eq!(summary.to_csv(), "eigenvalue,multiplicity\n0.000000000000,1\n");
    }
}
