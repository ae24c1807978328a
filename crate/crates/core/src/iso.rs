//! Isomorphism of bi-Cayley graphs and BCI-equivalence `T = g·S^α`.
//!
//! [`graphs_isomorphic`] is exact: a mismatch of the integer characteristic
//! polynomials certifies non-isomorphism, otherwise a backtracking search
//! with colour refinement either produces a verified bijection or exhausts
//! the search space.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::bicayley::{is_isomorphism, BiCayleyGraph, ConnectionSet};
use crate::error::{Error, Result};
use crate::group::{Automorphism, AutomorphismTable, GqParams, GroupElement};
use crate::spectra::{bipartite_charpoly, charpoly_strings, IntPoly};

/// Default bound on backtracking nodes per decision.
pub const DEFAULT_NODE_LIMIT: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NonIsoCertificate {
    SpectralMismatch {
        #[serde(serialize_with = "coefficients")]
        left: IntPoly,
        #[serde(serialize_with = "coefficients")]
        right: IntPoly,
    },
    ExhaustedSearch {
        nodes: u64,
    },
}

fn coefficients<S: Serializer>(p: &IntPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(charpoly_strings(p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum IsoResult {
    /// `mapping[v]` is the image in the second graph of vertex `v`.
    Isomorphic { mapping: Vec<usize> },
    NonIsomorphic { certificate: NonIsoCertificate },
}

impl IsoResult {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoResult::Isomorphic { .. })
    }

    pub fn mapping(&self) -> Option<&[usize]> {
        match self {
            IsoResult::Isomorphic { mapping } => Some(mapping),
            IsoResult::NonIsomorphic { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&NonIsoCertificate> {
        match self {
            IsoResult::Isomorphic { .. } => None,
            IsoResult::NonIsomorphic { certificate } => Some(certificate),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct IsoOptions {
    /// Skip the spectral prefilter and decide by search alone.
    pub audit: bool,
    pub node_limit: u64,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions {
            audit: false,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

pub fn graphs_isomorphic(g1: &BiCayleyGraph, g2: &BiCayleyGraph) -> Result<IsoResult> {
    graphs_isomorphic_with(g1, g2, IsoOptions::default())
}

pub fn graphs_isomorphic_with(
    g1: &BiCayleyGraph,
    g2: &BiCayleyGraph,
    opts: IsoOptions,
) -> Result<IsoResult> {
    if !opts.audit {
        let (c1, c2) = (bipartite_charpoly(g1)?, bipartite_charpoly(g2)?);
        if c1 != c2 {
            return Ok(IsoResult::NonIsomorphic {
                certificate: NonIsoCertificate::SpectralMismatch { left: c1, right: c2 },
            });
        }
    }
    let comps1 = g1.components();
    let comps2 = g2.components();
    if g1.vertex_count() != g2.vertex_count()
        || g1.valency() != g2.valency()
        || comps1.len() != comps2.len()
    {
        // only reachable in audit mode: these invariants are all spectral
        return Ok(IsoResult::NonIsomorphic {
            certificate: NonIsoCertificate::ExhaustedSearch { nodes: 0 },
        });
    }
    let h1 = g1.group_order();
    let mut search = Search::new(opts.node_limit);
    let local1 = Local::new(g1, &comps1[0]);
    // R(G) is transitive on each part of the second graph, so the seed (1,0)
    // may be sent to (1,0) or (1,1) without loss.
    let h2 = g2.group_order();
    for seed2 in [0, h2] {
        let comp2 = comps2.iter().find(|c| c.binary_search(&seed2).is_ok()).unwrap();
        if comp2.len() != local1.len() {
            continue;
        }
        let local2 = Local::new(g2, comp2);
        let s1 = local1.local_of(0).unwrap();
        let s2 = local2.local_of(seed2).unwrap();
        if let Some(local_map) = search.seeded(&local1, &local2, s1, s2)? {
            let comp_map: Vec<(usize, usize)> = local_map
                .iter()
                .enumerate()
                .map(|(i, &j)| (local1.verts[i], local2.verts[j]))
                .collect();
            let mapping = extend_over_components(g1, g2, &comps1, &comps2, &comp_map, h1)?;
            if !is_isomorphism(g1, g2, &mapping) {
                return Err(Error::Consistency(
                    "isomorphism search produced a map that does not preserve edges".into(),
                ));
            }
            return Ok(IsoResult::Isomorphic { mapping });
        }
    }
    Ok(IsoResult::NonIsomorphic {
        certificate: NonIsoCertificate::ExhaustedSearch { nodes: search.nodes },
    })
}

/// Lifts an isomorphism between the components of `(1,0)` and of its image
/// to the whole graphs. Every component of a bi-Cayley graph is a right
/// translate of the component of `(1,0)`, so components are paired in
/// order and the map is conjugated by translations.
fn extend_over_components(
    g1: &BiCayleyGraph,
    g2: &BiCayleyGraph,
    comps1: &[Vec<usize>],
    comps2: &[Vec<usize>],
    base: &[(usize, usize)],
    h: usize,
) -> Result<Vec<usize>> {
    let p = g1.ambient().params();
    let base_map: BTreeMap<usize, usize> = base.iter().copied().collect();
    let image_comp = comps2
        .iter()
        .find(|c| c.binary_search(&base[0].1).is_ok())
        .unwrap();
    let anchor2 = g2.element_at(image_comp[0] % h);
    let mut mapping = vec![usize::MAX; g1.vertex_count()];
    for (d, e) in comps1.iter().zip(comps2.iter()) {
        // d = R(x)·(component of (1,0)), with (x,0) the least vertex of d
        let x = g1.element_at(d[0] % h);
        let back = g1.right_translation(p.inverse(x))?;
        // e = R(y)·image_comp
        let y = p.multiply(p.inverse(anchor2), g2.element_at(e[0] % h));
        let forth = g2.right_translation(y)?;
        for &v in d {
            let u = back[v];
            let w = *base_map.get(&u).ok_or_else(|| {
                Error::Consistency("component translate left the base component".into())
            })?;
            mapping[v] = forth[w];
        }
    }
    Ok(mapping)
}

/// A connected component with local indices.
struct Local {
    verts: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

impl Local {
    fn new(g: &BiCayleyGraph, comp: &[usize]) -> Self {
        let adj = comp
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .iter()
                    .map(|w| comp.binary_search(w).expect("component is closed"))
                    .collect()
            })
            .collect();
        Local {
            verts: comp.to_vec(),
            adj,
        }
    }

    fn len(&self) -> usize {
        self.verts.len()
    }

    fn local_of(&self, v: usize) -> Option<usize> {
        self.verts.binary_search(&v).ok()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }
}

struct Search {
    limit: u64,
    nodes: u64,
}

impl Search {
    fn new(limit: u64) -> Self {
        Search { limit, nodes: 0 }
    }

    fn seeded(&mut self, a: &Local, b: &Local, sa: usize, sb: usize) -> Result<Option<Vec<usize>>> {
        let mut ca = vec![0u32; a.len()];
        let mut cb = vec![0u32; b.len()];
        ca[sa] = 1;
        cb[sb] = 1;
        self.descend(a, b, ca, cb)
    }

    fn descend(
        &mut self,
        a: &Local,
        b: &Local,
        mut ca: Vec<u32>,
        mut cb: Vec<u32>,
    ) -> Result<Option<Vec<usize>>> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::SearchLimit { limit: self.limit });
        }
        if !refine(a, b, &mut ca, &mut cb) {
            return Ok(None);
        }
        let classes = *ca.iter().max().unwrap() as usize + 1;
        let mut sizes = vec![0usize; classes];
        for &c in &ca {
            sizes[c as usize] += 1;
        }
        let target = (0..classes)
            .filter(|&c| sizes[c] > 1)
            .min_by_key(|&c| (sizes[c], c));
        let Some(cell) = target else {
            // discrete: the colouring is the bijection
            let mut pos = vec![0usize; classes];
            for (v, &c) in cb.iter().enumerate() {
                pos[c as usize] = v;
            }
            let map: Vec<usize> = ca.iter().map(|&c| pos[c as usize]).collect();
            let ok = (0..a.len()).all(|u| a.adj[u].iter().all(|&v| b.has_edge(map[u], map[v])));
            return Ok(ok.then_some(map));
        };
        let cell = cell as u32;
        let v = ca.iter().position(|&c| c == cell).unwrap();
        let fresh = classes as u32;
        for w in (0..b.len()).filter(|&w| cb[w] == cell) {
            let mut na = ca.clone();
            let mut nb = cb.clone();
            na[v] = fresh;
            nb[w] = fresh;
            if let Some(map) = self.descend(a, b, na, nb)? {
                return Ok(Some(map));
            }
        }
        Ok(None)
    }
}

/// Joint iterated colour refinement of two graphs: a vertex's new colour is
/// its old colour together with the multiset of its neighbours' colours,
/// numbered identically on both sides. Returns false as soon as the colour
/// class sizes differ.
fn refine(a: &Local, b: &Local, ca: &mut Vec<u32>, cb: &mut Vec<u32>) -> bool {
    let mut classes = 0usize;
    loop {
        let sig = |g: &Local, c: &[u32], v: usize| {
            let mut nb: Vec<u32> = g.adj[v].iter().map(|&w| c[w]).collect();
            nb.sort_unstable();
            (c[v], nb)
        };
        let sa: Vec<(u32, Vec<u32>)> = (0..a.len()).map(|v| sig(a, ca, v)).collect();
        let sb: Vec<(u32, Vec<u32>)> = (0..b.len()).map(|v| sig(b, cb, v)).collect();
        let mut count: BTreeMap<&(u32, Vec<u32>), (usize, usize)> = BTreeMap::new();
        for s in &sa {
            count.entry(s).or_default().0 += 1;
        }
        for s in &sb {
            count.entry(s).or_default().1 += 1;
        }
        if count.values().any(|(x, y)| x != y) {
            return false;
        }
        let ids: BTreeMap<&(u32, Vec<u32>), u32> =
            count.keys().enumerate().map(|(i, k)| (*k, i as u32)).collect();
        let next = ids.len();
        *ca = sa.iter().map(|s| ids[s]).collect();
        *cb = sb.iter().map(|s| ids[s]).collect();
        if next == classes {
            return true;
        }
        classes = next;
    }
}

/// `T = g·S^α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceWitness {
    pub g: GroupElement,
    pub alpha: Automorphism,
}

/// All automorphisms of `Q_4n` with their index tables, in enumeration order.
#[derive(Clone, Debug)]
pub struct AutomorphismCatalogue {
    params: GqParams,
    automorphisms: Vec<Automorphism>,
    tables: Vec<AutomorphismTable>,
}

impl AutomorphismCatalogue {
    pub fn new(p: GqParams) -> Self {
        let automorphisms = Automorphism::enumerate(p);
        let tables = automorphisms
            .iter()
            .map(|a| a.to_table(p).expect("enumerated automorphisms are valid"))
            .collect();
        AutomorphismCatalogue {
            params: p,
            automorphisms,
            tables,
        }
    }

    pub fn params(&self) -> GqParams {
        self.params
    }

    pub fn automorphisms(&self) -> &[Automorphism] {
        &self.automorphisms
    }

    pub fn tables(&self) -> &[AutomorphismTable] {
        &self.tables
    }

    pub fn len(&self) -> usize {
        self.automorphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.automorphisms.is_empty()
    }

    /// First `(g, α)` in (canonical `g`, enumeration `α`) order with
    /// `g·S^α = T`.
    pub fn find(&self, s: &ConnectionSet, t: &ConnectionSet) -> Option<EquivalenceWitness> {
        let p = self.params;
        if s.params() != p || t.params() != p || s.len() != t.len() {
            return None;
        }
        let s_idx: Vec<usize> = s.elements().iter().map(|&x| p.index(x)).collect();
        let mut target: Vec<usize> = t.elements().iter().map(|&x| p.index(x)).collect();
        target.sort_unstable();
        let mut image = Vec::with_capacity(s_idx.len());
        for g in p.elements() {
            for (alpha, table) in self.automorphisms.iter().zip(&self.tables) {
                image.clear();
                image.extend(
                    s_idx
                        .iter()
                        .map(|&i| p.index(p.multiply(g, p.from_index(table.apply_index(i))))),
                );
                image.sort_unstable();
                if image == target {
                    return Some(EquivalenceWitness {
                        g,
                        alpha: alpha.clone(),
                    });
                }
            }
        }
        None
    }
}

/// Exhaustive search for `(g, α)` with `T = g·S^α`; the first hit in
/// canonical `g` order, then automorphism enumeration order.
pub fn bcay_equivalent(s: &ConnectionSet, t: &ConnectionSet) -> Option<EquivalenceWitness> {
    AutomorphismCatalogue::new(s.params()).find(s, t)
}

/// Decides `BCay(G,S) ≅ BCay(G,T)` on the graphs over `<SS⁻¹>` and `<TT⁻¹>`.
pub fn reduced_iso_check(s: &ConnectionSet, t: &ConnectionSet) -> Result<bool> {
    let (rs, rt) = (s.reduced(), t.reduced());
    if rs.ambient().order() != rt.ambient().order() {
        return Ok(false);
    }
    let g1 = BiCayleyGraph::build(&rs)?;
    let g2 = BiCayleyGraph::build(&rt)?;
    Ok(graphs_isomorphic(&g1, &g2)?.is_isomorphic())
}
