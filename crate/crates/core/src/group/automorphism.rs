use serde::Serialize;

use super::{units_mod, GqParams, GroupElement};
use crate::error::{Error, Result};

/// An automorphism of `Q_4n`.
///
/// For `n >= 3` every automorphism is some `σ_{r,s}: a^i ↦ a^(ri), b·a^i ↦ b·a^(ri+s)`
/// with `r` a unit mod `2n`. `Aut(Q_8)` is larger than that family, so for
/// `n = 2` automorphisms are carried as explicit image tables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum Automorphism {
    SigmaRs { r: u32, s: u32 },
    /// Image of every element, in canonical element order.
    Table { table: Vec<GroupElement> },
}

/// Index-level form of an automorphism for hot loops: `images[i]` is the
/// canonical index of the image of element `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AutomorphismTable {
    images: Vec<usize>,
}

impl AutomorphismTable {
    #[inline]
    pub fn apply_index(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &AutomorphismTable) -> AutomorphismTable {
        AutomorphismTable {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> AutomorphismTable {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        AutomorphismTable { images }
    }
}

impl Automorphism {
    pub fn identity() -> Self {
        Automorphism::SigmaRs { r: 1, s: 0 }
    }

    pub fn sigma(r: i64, s: i64, p: GqParams) -> Result<Self> {
        let m = p.modulus() as i64;
        let (r, s) = (r.rem_euclid(m) as u32, s.rem_euclid(m) as u32);
        let aut = Automorphism::SigmaRs { r, s };
        aut.validate(p)?;
        Ok(aut)
    }

    /// Validates a table: it must be a bijective homomorphism of `Q_4n`.
    pub fn from_table(table: Vec<GroupElement>, p: GqParams) -> Result<Self> {
        let aut = Automorphism::Table { table };
        aut.validate(p)?;
        if !aut.is_homomorphism(p) {
            return Err(Error::InvalidParameter(
                "table is not a homomorphism".into(),
            ));
        }
        Ok(aut)
    }

    fn validate(&self, p: GqParams) -> Result<()> {
        match self {
            Automorphism::SigmaRs { r, .. } => {
                if num_integer::Integer::gcd(r, &p.modulus()) != 1 {
                    return Err(Error::InvalidParameter(format!(
                        "sigma_(r,s) needs gcd(r, 2n) = 1, got r = {r} with 2n = {}",
                        p.modulus()
                    )));
                }
            }
            Automorphism::Table { table } => {
                if table.len() != p.order() || !table.iter().all(|&x| p.contains(x)) {
                    return Err(Error::InvalidParameter(
                        "automorphism table has the wrong shape for this n".into(),
                    ));
                }
                let mut seen = vec![false; p.order()];
                for &x in table {
                    if std::mem::replace(&mut seen[p.index(x)], true) {
                        return Err(Error::InvalidParameter(
                            "automorphism table is not a bijection".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, x: GroupElement, p: GqParams) -> Result<GroupElement> {
        self.validate(p)?;
        if !p.contains(x) {
            return Err(Error::OutsideAmbient {
                element: x.to_string(),
            });
        }
        Ok(self.apply_unchecked(x, p))
    }

    pub(crate) fn apply_unchecked(&self, x: GroupElement, p: GqParams) -> GroupElement {
        match *self {
            Automorphism::SigmaRs { r, s } => {
                let k = x.k() as i64 * r as i64;
                if x.eps() == 0 {
                    p.element(0, k)
                } else {
                    p.element(1, k + s as i64)
                }
            }
            Automorphism::Table { ref table } => table[p.index(x)],
        }
    }

    pub fn to_table(&self, p: GqParams) -> Result<AutomorphismTable> {
        self.validate(p)?;
        Ok(AutomorphismTable {
            images: p
                .elements()
                .map(|x| p.index(self.apply_unchecked(x, p)))
                .collect(),
        })
    }

    /// Exhaustive check of `f(xy) = f(x) f(y)` over all pairs.
    pub fn is_homomorphism(&self, p: GqParams) -> bool {
        if self.validate(p).is_err() {
            return false;
        }
        p.elements().all(|x| {
            let fx = self.apply_unchecked(x, p);
            p.elements().all(|y| {
                self.apply_unchecked(p.multiply(x, y), p) == p.multiply(fx, self.apply_unchecked(y, p))
            })
        })
    }

    /// `2n·φ(2n)` maps `σ_{r,s}` for `n >= 3` (`r` ascending over units, then
    /// `s` ascending); the generator-image search for `n = 2`.
    pub fn enumerate(p: GqParams) -> Vec<Automorphism> {
        if p.n() == 2 {
            return Self::search_by_generator_images(p);
        }
        let m = p.modulus();
        units_mod(m)
            .flat_map(|r| (0..m).map(move |s| Automorphism::SigmaRs { r, s }))
            .collect()
    }

    /// Every automorphism as an explicit table, found by trying all images
    /// `(a ↦ x, b ↦ y)` and keeping the ones that extend to bijective
    /// homomorphisms. Works for every `n`.
    pub fn search_by_generator_images(p: GqParams) -> Vec<Automorphism> {
        let gens = [p.a(), p.b()];
        let mut out = Vec::new();
        for x in p.elements() {
            for y in p.elements() {
                let Some(map) = extend_homomorphism(p, &gens, &[x, y]) else {
                    continue;
                };
                let table: Vec<GroupElement> = map.into_iter().map(|m| m.unwrap()).collect();
                let mut seen = vec![false; p.order()];
                if table.iter().all(|&z| !std::mem::replace(&mut seen[p.index(z)], true)) {
                    out.push(Automorphism::Table { table });
                }
            }
        }
        out
    }
}

/// Tries to extend `gens[i] ↦ images[i]` to a homomorphism on `<gens>`.
///
/// Returns the map indexed by canonical element index (`None` outside
/// `<gens>`), or `None` if the assignment is inconsistent. Consistency on
/// every edge `x → x·g` of the Cayley graph of `<gens>` is exactly the
/// homomorphism condition.
pub fn extend_homomorphism(
    p: GqParams,
    gens: &[GroupElement],
    images: &[GroupElement],
) -> Option<Vec<Option<GroupElement>>> {
    debug_assert_eq!(gens.len(), images.len());
    let mut map: Vec<Option<GroupElement>> = vec![None; p.order()];
    map[0] = Some(p.identity());
    let mut queue = vec![p.identity()];
    while let Some(x) = queue.pop() {
        let fx = map[p.index(x)].unwrap();
        for (&g, &h) in gens.iter().zip(images) {
            let y = p.multiply(x, g);
            let fy = p.multiply(fx, h);
            match map[p.index(y)] {
                Some(existing) if existing != fy => return None,
                Some(_) => {}
                None => {
                    map[p.index(y)] = Some(fy);
                    queue.push(y);
                }
            }
        }
    }
    Some(map)
}
