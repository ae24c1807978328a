use std::collections::BTreeSet;

use serde::Serialize;

use super::{GqParams, GroupElement};
use crate::error::{Error, Result};

/// Every subgroup of `Q_4n` is cyclic or itself generalized quaternion, and
/// the two cases are told apart by commutativity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupKind {
    Cyclic,
    GeneralizedQuaternion,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    params: GqParams,
    carrier: Vec<GroupElement>,
    kind: SubgroupKind,
}

impl Subgroup {
    /// Closure of `gens` under multiplication.
    pub fn generated(p: GqParams, gens: &[GroupElement]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::InvalidParameter(
                "a subgroup needs at least one generator".into(),
            ));
        }
        if let Some(&x) = gens.iter().find(|&&x| !p.contains(x)) {
            return Err(Error::OutsideAmbient {
                element: x.to_string(),
            });
        }
        let mut seen = vec![false; p.order()];
        seen[0] = true;
        let mut stack = vec![p.identity()];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = p.multiply(x, g);
                if !std::mem::replace(&mut seen[p.index(y)], true) {
                    stack.push(y);
                }
            }
        }
        let carrier: Vec<_> = p.elements().filter(|&x| seen[p.index(x)]).collect();
        let abelian = gens
            .iter()
            .all(|&x| gens.iter().all(|&y| p.multiply(x, y) == p.multiply(y, x)));
        let kind = if abelian {
            SubgroupKind::Cyclic
        } else {
            SubgroupKind::GeneralizedQuaternion
        };
        Ok(Subgroup {
            params: p,
            carrier,
            kind,
        })
    }

    pub fn whole(p: GqParams) -> Self {
        Self::generated(p, &[p.a(), p.b()]).expect("generators are valid")
    }

    pub fn params(&self) -> GqParams {
        self.params
    }

    /// Sorted in canonical element order.
    pub fn carrier(&self) -> &[GroupElement] {
        &self.carrier
    }

    pub fn order(&self) -> usize {
        self.carrier.len()
    }

    pub fn kind(&self) -> SubgroupKind {
        self.kind
    }

    pub fn contains(&self, x: GroupElement) -> bool {
        self.carrier.binary_search(&x).is_ok()
    }

    /// Position of `x` in the carrier.
    pub fn position(&self, x: GroupElement) -> Option<usize> {
        self.carrier.binary_search(&x).ok()
    }

    pub fn is_whole(&self) -> bool {
        self.carrier.len() == self.params.order()
    }

    /// A small generating set chosen greedily in canonical order: repeatedly
    /// add the least element not yet generated.
    pub fn generators(&self) -> Vec<GroupElement> {
        let p = self.params;
        let mut gens = Vec::new();
        let mut span = Subgroup::generated(p, &[p.identity()]).unwrap();
        // prefer an element of maximal order first so cyclic groups get one generator
        if let Some(&g) = self
            .carrier
            .iter()
            .max_by_key(|&&x| (p.element_order(x), std::cmp::Reverse(x)))
        {
            gens.push(g);
            span = Subgroup::generated(p, &gens).unwrap();
        }
        while span.order() < self.order() {
            let x = *self.carrier.iter().find(|&&x| !span.contains(x)).unwrap();
            gens.push(x);
            span = Subgroup::generated(p, &gens).unwrap();
        }
        gens
    }
}

/// All subgroups of `Q_4n`, sorted by order and then carrier.
///
/// Every subgroup is generated by at most two elements, so closing all pairs
/// finds them all.
pub fn all_subgroups(p: GqParams) -> Vec<Subgroup> {
    let mut found: BTreeSet<(usize, Vec<GroupElement>)> = BTreeSet::new();
    let mut out = Vec::new();
    for x in p.elements() {
        for y in p.elements().filter(|&y| y >= x) {
            let h = Subgroup::generated(p, &[x, y]).unwrap();
            if found.insert((h.order(), h.carrier.clone())) {
                out.push(h);
            }
        }
    }
    out.sort_by(|a, b| (a.order(), &a.carrier).cmp(&(b.order(), &b.carrier)));
    out
}
