//! Bi-Cayley graphs `BCay(G, S)`: vertex set `G × {0, 1}`, edges
//! `{(x,0), (s·x,1)}` for `x ∈ G`, `s ∈ S`, with `G = Q_4n` or a subgroup.
//!
//! Vertices are numbered `part·|G| + i` where `i` is the position of `x` in
//! canonical element order, so part 0 comes first and both parts ascend.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{Automorphism, GqParams, GroupElement, Subgroup};

/// The group a connection set lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ambient {
    Full(GqParams),
    Sub(Subgroup),
}

impl Ambient {
    pub fn params(&self) -> GqParams {
        match self {
            Ambient::Full(p) => *p,
            Ambient::Sub(h) => h.params(),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            Ambient::Full(p) => p.order(),
            Ambient::Sub(h) => h.order(),
        }
    }

    pub fn is_full_group(&self) -> bool {
        match self {
            Ambient::Full(_) => true,
            Ambient::Sub(h) => h.is_whole(),
        }
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        match self {
            Ambient::Full(p) => p.elements().collect(),
            Ambient::Sub(h) => h.carrier().to_vec(),
        }
    }

    pub fn position(&self, x: GroupElement) -> Option<usize> {
        match self {
            Ambient::Full(p) => p.contains(x).then(|| p.index(x)),
            Ambient::Sub(h) => h.position(x),
        }
    }

    pub fn contains(&self, x: GroupElement) -> bool {
        self.position(x).is_some()
    }
}

/// A subset `S` of the ambient group, kept sorted in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConnectionSet {
    elements: Vec<GroupElement>,
    ambient: Ambient,
}

impl ConnectionSet {
    pub fn new(ambient: Ambient, elements: impl IntoIterator<Item = GroupElement>) -> Result<Self> {
        let mut elements: Vec<GroupElement> = elements.into_iter().collect();
        if elements.is_empty() {
            return Err(Error::EmptyConnectionSet);
        }
        if let Some(&x) = elements.iter().find(|&&x| !ambient.contains(x)) {
            return Err(Error::OutsideAmbient {
                element: x.to_string(),
            });
        }
        let len = elements.len();
        elements.sort();
        elements.dedup();
        if elements.len() != len {
            return Err(Error::InvalidParameter(
                "connection sets may not repeat elements".into(),
            ));
        }
        Ok(ConnectionSet { elements, ambient })
    }

    /// A subset of the whole of `Q_4n`.
    pub fn in_group(p: GqParams, elements: impl IntoIterator<Item = GroupElement>) -> Result<Self> {
        Self::new(Ambient::Full(p), elements)
    }

    /// Parses the comma-separated element grammar, e.g. `"1, a, b*a^2"`.
    pub fn parse(p: GqParams, expr: &str) -> Result<Self> {
        Self::in_group(p, p.parse_elements(expr)?)
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn params(&self) -> GqParams {
        self.ambient.params()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains_identity(&self) -> bool {
        self.elements.first().is_some_and(|x| x.is_identity())
    }

    /// `g·S`; the result must stay inside the ambient group.
    pub fn left_translate(&self, g: GroupElement) -> Result<Self> {
        let p = self.params();
        Self::new(
            self.ambient.clone(),
            self.elements.iter().map(|&s| p.multiply(g, s)),
        )
    }

    /// Left-translates by the inverse of the least element, so the result
    /// contains the identity.
    pub fn normalized(&self) -> Self {
        let p = self.params();
        self.left_translate(p.inverse(self.elements[0]))
            .expect("translation by an ambient element stays in the ambient")
    }

    /// `{ s⁻¹ : s ∈ S }`.
    pub fn inverse_set(&self) -> Self {
        let p = self.params();
        Self::new(self.ambient.clone(), self.elements.iter().map(|&s| p.inverse(s)))
            .expect("inverses stay in the ambient")
    }

    /// `<S·S⁻¹>`.
    pub fn difference_subgroup(&self) -> Subgroup {
        let p = self.params();
        let mut gens: Vec<GroupElement> = self
            .elements
            .iter()
            .flat_map(|&s| self.elements.iter().map(move |&t| p.multiply(s, p.inverse(t))))
            .collect();
        gens.sort();
        gens.dedup();
        Subgroup::generated(p, &gens).expect("nonempty generator list")
    }

    /// The same set, viewed inside `<S·S⁻¹>`. The set is normalized first;
    /// for a set containing 1 this is `S` itself inside `<S>`.
    pub fn reduced(&self) -> Self {
        let s = self.normalized();
        let h = s.difference_subgroup();
        Self::new(Ambient::Sub(h), s.elements.iter().copied())
            .expect("a normalized set lies in its difference subgroup")
    }

    /// Re-homes the set in the whole of `Q_4n`.
    pub fn in_full_group(&self) -> Self {
        let p = self.params();
        Self::new(Ambient::Full(p), self.elements.iter().copied()).unwrap()
    }
}

impl fmt::Display for ConnectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char('{')?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_char('}')
    }
}

impl Serialize for ConnectionSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements.serialize(s)
    }
}

/// `g·S^α = { g·α(s) : s ∈ S }` inside `Q_4n`.
pub fn translate_and_map(
    set: &ConnectionSet,
    g: GroupElement,
    alpha: &Automorphism,
) -> Result<ConnectionSet> {
    let p = set.params();
    if !p.contains(g) {
        return Err(Error::OutsideAmbient {
            element: g.to_string(),
        });
    }
    let mut out = Vec::with_capacity(set.len());
    for &s in set.elements() {
        out.push(p.multiply(g, alpha.apply(s, p)?));
    }
    ConnectionSet::in_group(p, out)
}

#[derive(Clone, Debug)]
pub struct BiCayleyGraph {
    set: ConnectionSet,
    elements: Vec<GroupElement>,
    /// Row-major `|G|×|G|` biadjacency: `biadj[x][z] = 1` iff `z·x⁻¹ ∈ S`.
    biadj: Vec<u8>,
    adjacency: Vec<Vec<usize>>,
}

impl BiCayleyGraph {
    pub fn build(set: &ConnectionSet) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptyConnectionSet);
        }
        let ambient = set.ambient();
        let p = set.params();
        let elements = ambient.elements();
        let h = elements.len();
        let mut biadj = vec![0u8; h * h];
        let mut adjacency = vec![Vec::with_capacity(set.len()); 2 * h];
        for (i, &x) in elements.iter().enumerate() {
            for &s in set.elements() {
                let z = p.multiply(s, x);
                let j = ambient.position(z).ok_or_else(|| Error::OutsideAmbient {
                    element: z.to_string(),
                })?;
                biadj[i * h + j] = 1;
                adjacency[i].push(h + j);
                adjacency[h + j].push(i);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(BiCayleyGraph {
            set: set.clone(),
            elements,
            biadj,
            adjacency,
        })
    }

    pub fn connection_set(&self) -> &ConnectionSet {
        &self.set
    }

    pub fn ambient(&self) -> &Ambient {
        self.set.ambient()
    }

    /// `|G|`, the size of each part.
    pub fn group_order(&self) -> usize {
        self.elements.len()
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.elements.len()
    }

    pub fn valency(&self) -> usize {
        self.set.len()
    }

    pub fn edge_count(&self) -> usize {
        self.biadj.iter().filter(|&&b| b == 1).count()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn biadjacent(&self, x: usize, z: usize) -> bool {
        self.biadj[x * self.group_order() + z] == 1
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let h = self.group_order();
        match (u < h, v < h) {
            (true, false) => self.biadjacent(u, v - h),
            (false, true) => self.biadjacent(v, u - h),
            _ => false,
        }
    }

    pub fn element_at(&self, i: usize) -> GroupElement {
        self.elements[i]
    }

    pub fn vertex_label(&self, v: usize) -> (GroupElement, u8) {
        let h = self.group_order();
        (self.elements[v % h], (v / h) as u8)
    }

    pub fn vertex_index(&self, x: GroupElement, part: u8) -> Option<usize> {
        self.ambient()
            .position(x)
            .map(|i| part as usize * self.group_order() + i)
    }

    /// Dense full adjacency matrix `[[0, Bᵀ], [B, 0]]` in vertex order
    /// (rows of part 0 first).
    pub fn adjacency_matrix(&self) -> Vec<Vec<i64>> {
        let nv = self.vertex_count();
        let mut m = vec![vec![0i64; nv]; nv];
        for (u, row) in m.iter_mut().enumerate() {
            for &v in &self.adjacency[u] {
                row[v] = 1;
            }
        }
        m
    }

    /// Dense `|G|×|G|` biadjacency matrix.
    pub fn biadjacency_matrix(&self) -> Vec<Vec<i64>> {
        let h = self.group_order();
        (0..h)
            .map(|x| (0..h).map(|z| self.biadj[x * h + z] as i64).collect())
            .collect()
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let nv = self.vertex_count();
        let mut comp = vec![usize::MAX; nv];
        let mut out = Vec::new();
        for start in 0..nv {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adjacency[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        members.push(v);
                        queue.push_back(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// The vertex permutation of `R(g): (x, i) ↦ (x·g, i)`.
    pub fn right_translation(&self, g: GroupElement) -> Result<Vec<usize>> {
        let ambient = self.ambient();
        if !ambient.contains(g) {
            return Err(Error::OutsideAmbient {
                element: g.to_string(),
            });
        }
        let p = ambient.params();
        let h = self.group_order();
        let shift: Vec<usize> = self
            .elements
            .iter()
            .map(|&x| ambient.position(p.multiply(x, g)).unwrap())
            .collect();
        Ok((0..2 * h).map(|v| (v / h) * h + shift[v % h]).collect())
    }

    /// True iff `perm` maps edges to edges and non-edges to non-edges.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        is_isomorphism(self, self, perm)
    }

    /// Sorted edge list, one `(x,0)–(z,1)` per line.
    pub fn edge_list(&self) -> String {
        let h = self.group_order();
        let mut out = String::new();
        for x in 0..h {
            for z in 0..h {
                if self.biadjacent(x, z) {
                    writeln!(out, "({},0)–({},1)", self.elements[x], self.elements[z]).unwrap();
                }
            }
        }
        out
    }

    /// The biadjacency matrix as rows of `0`/`1` characters.
    pub fn bitmap(&self) -> String {
        let h = self.group_order();
        let mut out = String::with_capacity(h * (h + 1));
        for x in 0..h {
            for z in 0..h {
                out.push(if self.biadjacent(x, z) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

/// Checks a vertex bijection `map` between two graphs on all vertex pairs.
pub fn is_isomorphism(g1: &BiCayleyGraph, g2: &BiCayleyGraph, map: &[usize]) -> bool {
    let nv = g1.vertex_count();
    if nv != g2.vertex_count() || map.len() != nv {
        return false;
    }
    let mut hit = vec![false; nv];
    if map.iter().any(|&v| v >= nv || std::mem::replace(&mut hit[v], true)) {
        return false;
    }
    (0..nv).all(|u| (0..nv).all(|v| g1.has_edge(u, v) == g2.has_edge(map[u], map[v])))
}

/// Connectivity by breadth-first search, cross-checked against the
/// criterion `G = <S·S⁻¹>`.
pub fn is_connected(set: &ConnectionSet) -> Result<bool> {
    let graph = BiCayleyGraph::build(set)?;
    let by_search = graph.components().len() == 1;
    let by_group = set.difference_subgroup().order() == set.ambient().order();
    if by_search != by_group {
        return Err(Error::Consistency(format!(
            "connectivity of BCay(G, {set}) disagrees: search says {by_search}, <SS^-1> says {by_group}"
        )));
    }
    Ok(by_search)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u32) -> GqParams {
        GqParams::new(n).unwrap()
    }

    fn set(n: u32, expr: &str) -> ConnectionSet {
        ConnectionSet::parse(q(n), expr).unwrap()
    }

    #[test]
    fn build_examples() {
        let g = BiCayleyGraph::build(&set(2, "1")).unwrap();
        assert_eq!(g.edge_count(), 8);
        assert!((0..8).all(|x| g.neighbors(x) == [8 + x]));

        let g = BiCayleyGraph::build(&set(3, "1,a,b")).unwrap();
        assert_eq!(g.vertex_count(), 24);
        assert_eq!(g.edge_count(), 36);
        assert!((0..24).all(|v| g.neighbors(v).len() == 3));

        let all = ConnectionSet::in_group(q(2), q(2).elements()).unwrap();
        let g = BiCayleyGraph::build(&all).unwrap();
        assert_eq!(g.edge_count(), 64);
    }

    #[test]
    fn full_adjacency_is_symmetric_bipartite() {
        let g = BiCayleyGraph::build(&set(3, "1,a^2,b*a")).unwrap();
        let m = g.adjacency_matrix();
        let h = g.group_order();
        for u in 0..2 * h {
            for v in 0..2 * h {
                assert_eq!(m[u][v], m[v][u]);
                if (u < h) == (v < h) {
                    assert_eq!(m[u][v], 0);
                }
            }
        }
    }

    #[test]
    fn set_validation() {
        let p = q(3);
        assert!(matches!(
            ConnectionSet::in_group(p, []),
            Err(Error::EmptyConnectionSet)
        ));
        assert!(ConnectionSet::parse(p, "a, a^7").is_err());
        let h = Subgroup::generated(p, &[p.a_pow(2)]).unwrap();
        assert!(matches!(
            ConnectionSet::new(Ambient::Sub(h), [p.a()]),
            Err(Error::OutsideAmbient { .. })
        ));
    }

    #[test]
    fn connectivity_examples() {
        assert!(is_connected(&set(3, "1,a,b")).unwrap());
        assert!(!is_connected(&set(3, "1")).unwrap());
        assert!(!is_connected(&set(3, "1,a^2")).unwrap());
        // <S> = G but <SS^-1> = <a^2 ...>: b, b*a^2 give differences a^2, a^4 only
        assert!(!is_connected(&set(3, "b, b*a^2")).unwrap());
    }

    #[test]
    fn connectivity_routes_agree_exhaustively_on_small_sets() {
        let p = q(3);
        let els: Vec<_> = p.elements().collect();
        for i in 0..els.len() {
            for j in i + 1..els.len() {
                is_connected(&ConnectionSet::in_group(p, [els[i], els[j]]).unwrap()).unwrap();
                for k in j + 1..els.len() {
                    is_connected(&ConnectionSet::in_group(p, [els[i], els[j], els[k]]).unwrap())
                        .unwrap();
                }
            }
        }
    }

    #[test]
    fn right_translations_are_automorphisms_and_a_regular_action() {
        for n in 2..=4 {
            let p = q(n);
            let s = ConnectionSet::in_group(p, [p.identity(), p.a(), p.b_a_pow(1)]).unwrap();
            let g = BiCayleyGraph::build(&s).unwrap();
            let id = g.right_translation(p.identity()).unwrap();
            assert_eq!(id, (0..g.vertex_count()).collect::<Vec<_>>());
            for x in p.elements() {
                let rx = g.right_translation(x).unwrap();
                assert!(g.is_automorphism(&rx));
                for y in p.elements() {
                    let ry = g.right_translation(y).unwrap();
                    let rxy = g.right_translation(p.multiply(x, y)).unwrap();
                    // R(xy) = R(y) after R(x) on the right action
                    let composed: Vec<_> = rx.iter().map(|&v| ry[v]).collect();
                    assert_eq!(composed, rxy);
                }
            }
        }
        let p = q(2);
        let g = BiCayleyGraph::build(&set(2, "1,a")).unwrap();
        let mut orbit: Vec<_> = p
            .elements()
            .map(|x| g.right_translation(x).unwrap()[0])
            .collect();
        orbit.sort();
        assert_eq!(orbit, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn translate_and_map_examples() {
        let p = q(3);
        let s = set(3, "1,a,b");
        assert_eq!(
            translate_and_map(&s, p.identity(), &Automorphism::identity()).unwrap(),
            s
        );
        let s2 = set(3, "1, b*a^2");
        let g = p.inverse(p.b_a_pow(2));
        let t = translate_and_map(&s2, g, &Automorphism::identity()).unwrap();
        assert!(t.contains_identity());
        assert_eq!(t, ConnectionSet::in_group(p, [g, p.identity()]).unwrap());
        let sig = Automorphism::sigma(1, 3, p).unwrap();
        let t = translate_and_map(&s, p.identity(), &sig).unwrap();
        assert_eq!(t, set(3, "1, a, b*a^3"));
    }

    #[test]
    fn normalization_and_reduction() {
        let s = set(3, "b, b*a^2");
        let ns = s.normalized();
        assert!(ns.contains_identity());
        assert_eq!(ns.len(), 2);
        let r = set(3, "1, a^2, b").reduced();
        assert_eq!(r.ambient().order(), 12);
        let r = set(3, "1, a^2").reduced();
        assert_eq!(r.ambient().order(), 3);
        let g = BiCayleyGraph::build(&r).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.components().len(), 1);
    }

    #[test]
    fn exports_are_stable() {
        let g = BiCayleyGraph::build(&set(2, "1, b")).unwrap();
        let edges = g.edge_list();
        assert_eq!(edges.lines().count(), 16);
        assert_eq!(edges.lines().next().unwrap(), "(1,0)–(1,1)");
        assert!(edges.contains("(a,0)–(b*a,1)"));
        assert_eq!(g.bitmap().lines().count(), 8);
        assert_eq!(edges, BiCayleyGraph::build(&set(2, "b,1")).unwrap().edge_list());
    }
}
