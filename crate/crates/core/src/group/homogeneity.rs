use serde::Serialize;

use super::{all_subgroups, extend_homomorphism, Automorphism, GqParams, GroupElement};
use crate::error::{Error, Result};

/// An isomorphism between two subgroups, given by generator images, that no
/// automorphism of the whole group extends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonExtendingIsomorphism {
    pub domain: Vec<GroupElement>,
    pub codomain: Vec<GroupElement>,
    pub generators: Vec<GroupElement>,
    pub images: Vec<GroupElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneityReport {
    pub n: u32,
    pub homogeneous: bool,
    pub subgroups: usize,
    pub isomorphisms_checked: usize,
    pub counterexample: Option<NonExtendingIsomorphism>,
}

/// Exhaustively checks that every isomorphism between two subgroups extends
/// to an automorphism of `Q_4n`. Stops at the first counterexample.
pub fn is_homogeneous(p: GqParams, guard: u32) -> Result<HomogeneityReport> {
    if p.n() > guard {
        return Err(Error::TooLarge {
            what: "homogeneity check n",
            limit: guard as usize,
            actual: p.n() as usize,
        });
    }
    let subgroups = all_subgroups(p);
    let tables: Vec<_> = Automorphism::enumerate(p)
        .iter()
        .map(|a| a.to_table(p))
        .collect::<Result<_>>()?;
    let mut checked = 0usize;

    for h in &subgroups {
        let gens = h.generators();
        let gen_orders: Vec<u32> = gens.iter().map(|&g| p.element_order(g)).collect();
        for k in subgroups
            .iter()
            .filter(|k| k.order() == h.order() && k.kind() == h.kind())
        {
            // candidate image tuples in K^|gens| with matching element orders
            let pools: Vec<Vec<GroupElement>> = gen_orders
                .iter()
                .map(|&o| {
                    k.carrier()
                        .iter()
                        .copied()
                        .filter(|&y| p.element_order(y) == o)
                        .collect()
                })
                .collect();
            let mut idx = vec![0usize; gens.len()];
            if pools.iter().any(|pool| pool.is_empty()) {
                continue;
            }
            loop {
                let images: Vec<GroupElement> =
                    idx.iter().zip(&pools).map(|(&i, pool)| pool[i]).collect();
                if let Some(map) = extend_homomorphism(p, &gens, &images) {
                    let mut image_set: Vec<GroupElement> = map.iter().flatten().copied().collect();
                    image_set.sort();
                    image_set.dedup();
                    if image_set.len() == h.order() && image_set == k.carrier() {
                        checked += 1;
                        let extends = tables.iter().any(|t| {
                            gens.iter()
                                .zip(&images)
                                .all(|(&g, &y)| t.apply_index(p.index(g)) == p.index(y))
                        });
                        if !extends {
                            return Ok(HomogeneityReport {
                                n: p.n(),
                                homogeneous: false,
                                subgroups: subgroups.len(),
                                isomorphisms_checked: checked,
                                counterexample: Some(NonExtendingIsomorphism {
                                    domain: h.carrier().to_vec(),
                                    codomain: k.carrier().to_vec(),
                                    generators: gens.clone(),
                                    images,
                                }),
                            });
                        }
                    }
                }
                // odometer step
                let mut pos = 0;
                loop {
                    if pos == idx.len() {
                        break;
                    }
                    idx[pos] += 1;
                    if idx[pos] < pools[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == idx.len() {
                    break;
                }
            }
        }
    }
    Ok(HomogeneityReport {
        n: p.n(),
        homogeneous: true,
        subgroups: subgroups.len(),
        isomorphisms_checked: checked,
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::HOMOGENEITY_GUARD;

    #[test]
    fn odd_n_is_homogeneous() {
        let r = is_homogeneous(GqParams::new(3).unwrap(), HOMOGENEITY_GUARD).unwrap();
        assert!(r.homogeneous);
        assert!(r.counterexample.is_none());
        assert!(r.isomorphisms_checked > 0);
    }

    #[test]
    fn n4_counterexample_is_genuine() {
        let p = GqParams::new(4).unwrap();
        let r = is_homogeneous(p, HOMOGENEITY_GUARD).unwrap();
        // <a^2> and <b> are both cyclic of order 4 but <a> is characteristic
        assert!(!r.homogeneous);
        let ce = r.counterexample.unwrap();
        let map = extend_homomorphism(p, &ce.generators, &ce.images).unwrap();
        for a in Automorphism::enumerate(p) {
            assert!(ce
                .domain
                .iter()
                .any(|&x| a.apply(x, p).unwrap() != map[p.index(x)].unwrap()));
        }
    }

    #[test]
    fn guard_is_explicit() {
        let p = GqParams::new(9).unwrap();
        assert!(matches!(
            is_homogeneous(p, HOMOGENEITY_GUARD),
            Err(Error::TooLarge { .. })
        ));
    }
}
