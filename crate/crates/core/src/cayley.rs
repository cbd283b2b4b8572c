//! Generalized Paley graphs GP(q, d) and Peisert graphs P*_q as Cayley
//! graphs on the additive group of F_q. Vertex `v` is the element with
//! canonical index `v`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::graph::Graph;

/// `x` is a nonzero d-th power, decided by both Euler's criterion and the
/// discrete log.
pub fn is_dth_power(field: &FiniteField, x: FieldElement, d: u32) -> Result<bool> {
    let n = field.order() - 1;
    if d == 0 || n % d != 0 {
        return Err(Error::OrderNotDividing { d, q_minus_1: n });
    }
    let by_log = field.discrete_log(x)? % d == 0;
    let by_power = field.pow(x, (n / d) as u64) == FieldElement::ONE;
    if by_log != by_power {
        return Err(Error::Invalid(format!("power-residue tests disagree at {x}")));
    }
    Ok(by_log)
}

/// Sorted nonzero d-th powers.
pub fn dth_powers(field: &FiniteField, d: u32) -> Vec<FieldElement> {
    let n = field.order() - 1;
    let mut out: Vec<FieldElement> = (0..n / d).map(|k| field.exp((k * d) as u64)).collect();
    out.sort_unstable();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Paley,
    Peisert,
}

/// The four cosets `B_j = g^j <g^4>` and which two are selected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeisertSets {
    pub cosets: [Vec<FieldElement>; 4],
    pub selected: [u8; 2],
}

impl PeisertSets {
    pub fn selected_set(&self) -> Vec<FieldElement> {
        let mut out: Vec<FieldElement> =
            self.selected.iter().flat_map(|&j| self.cosets[j as usize].iter().copied()).collect();
        out.sort_unstable();
        out
    }
}

/// What a graph is, in enough detail to rebuild it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphManifest {
    pub field: String,
    pub kind: GraphKind,
    pub d: Option<u32>,
    pub generator: u32,
    pub b_selection: Option<[u8; 2]>,
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Clone, Debug)]
pub struct CayleyGraph {
    field: Arc<FiniteField>,
    kind: GraphKind,
    d: Option<u32>,
    generator: FieldElement,
    connection: Vec<FieldElement>,
    peisert: Option<PeisertSets>,
    graph: Graph,
}

fn cayley(field: &FiniteField, connection: &[FieldElement]) -> Graph {
    let q = field.order() as usize;
    let mut g = Graph::new(q);
    for u in field.elements() {
        for &c in connection {
            let v = field.add(u, c);
            g.add_edge(u.index() as usize, v.index() as usize).expect("c is nonzero");
        }
    }
    g
}

impl CayleyGraph {
    /// GP(q, d): `u ~ v` iff `u - v` is a nonzero d-th power.
    pub fn paley(field: &Arc<FiniteField>, d: u32) -> Result<Self> {
        let q = field.order();
        if d < 2 || (q - 1) % (2 * d) != 0 {
            return Err(Error::CongruenceViolation { q, modulus: 2 * d });
        }
        let connection = dth_powers(field, d);
        let graph = cayley(field, &connection);
        Ok(CayleyGraph {
            field: Arc::clone(field),
            kind: GraphKind::Paley,
            d: Some(d),
            generator: field.generator(),
            connection,
            peisert: None,
            graph,
        })
    }

    /// P*_q with the field's canonical generator.
    pub fn peisert(field: &Arc<FiniteField>) -> Result<Self> {
        Self::peisert_with_generator(field, field.generator())
    }

    /// P*_q with connection set `{g^j : j = 0, 1 (mod 4)}` for the given
    /// primitive element `g`.
    pub fn peisert_with_generator(field: &Arc<FiniteField>, g: FieldElement) -> Result<Self> {
        let (p, s, q) = (field.characteristic(), field.degree(), field.order());
        if p % 4 != 3 || s % 2 != 0 {
            return Err(Error::NotPeisertField { q });
        }
        if g.is_zero() || field.element_order(g)? != q as u64 - 1 {
            return Err(Error::Invalid(format!("{g} is not a primitive element of F_{q}")));
        }
        let mut cosets: [Vec<FieldElement>; 4] = Default::default();
        let mut x = FieldElement::ONE;
        for k in 0..q - 1 {
            cosets[(k % 4) as usize].push(x);
            x = field.mul(x, g);
        }
        for c in &mut cosets {
            c.sort_unstable();
        }
        let selected = if p % 8 == 7 && (s / 2) % 2 == 1 { [1, 2] } else { [0, 3] };
        let mut connection: Vec<FieldElement> = cosets[0].iter().chain(&cosets[1]).copied().collect();
        connection.sort_unstable();
        let graph = cayley(field, &connection);
        Ok(CayleyGraph {
            field: Arc::clone(field),
            kind: GraphKind::Peisert,
            d: None,
            generator: g,
            connection,
            peisert: Some(PeisertSets { cosets, selected }),
            graph,
        })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn d(&self) -> Option<u32> {
        self.d
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Sorted connection set.
    pub fn connection_set(&self) -> &[FieldElement] {
        &self.connection
    }

    pub fn peisert_sets(&self) -> Option<&PeisertSets> {
        self.peisert.as_ref()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn manifest(&self) -> GraphManifest {
        GraphManifest {
            field: self.field.descriptor(),
            kind: self.kind,
            d: self.d,
            generator: self.generator.index(),
            b_selection: self.peisert.as_ref().map(|p| p.selected),
            vertices: self.graph.order(),
            edges: self.graph.edge_count(),
        }
    }

    /// Vertices that some maximum clique is guaranteed to contain.
    ///
    /// Translations make every Cayley graph vertex transitive, so 0 can be
    /// fixed. In GP(q, d) multiplication by d-th powers is also an
    /// automorphism and acts transitively on the neighbours of 0, so the edge
    /// {0, 1} can be fixed too.
    pub fn symmetry_anchors(&self) -> Vec<usize> {
        match self.kind {
            GraphKind::Paley => vec![0, 1],
            GraphKind::Peisert => vec![0],
        }
    }

    /// JSON edge list with manifest.
    pub fn to_json(&self) -> Result<String> {
        let doc = GraphJson { manifest: self.manifest(), edges: self.graph.edges().map(|(u, v)| [u, v]).collect() };
        Ok(serde_json::to_string_pretty(&doc)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub manifest: GraphManifest,
    pub edges: Vec<[usize; 2]>,
}

impl GraphJson {
    pub fn to_graph(&self) -> Result<Graph> {
        Graph::from_edges(self.manifest.vertices, self.edges.iter().map(|e| (e[0], e[1])))
    }
}

/// Whether the subfield F_{sqrt q} is a clique of GP(q, d), i.e. whether
/// `d | sqrt(q) + 1`. The arithmetic answer is cross-checked against the
/// differences of subfield elements.
pub fn subfield_clique_test(field: &FiniteField, d: u32) -> Result<bool> {
    let q = field.order();
    let root = arith::exact_sqrt(q as u64).ok_or(Error::NotSquare(q))? as u32;
    if d < 2 || (q - 1) % (2 * d) != 0 {
        return Err(Error::CongruenceViolation { q, modulus: 2 * d });
    }
    let formula = (root + 1) % d == 0;
    let sub = field.subfield_elements(field.degree() / 2)?;
    let mut direct = true;
    'outer: for (i, &a) in sub.iter().enumerate() {
        for &b in &sub[i + 1..] {
            if !is_dth_power(field, field.sub(a, b), d)? {
                direct = false;
                break 'outer;
            }
        }
    }
    if formula != direct {
        return Err(Error::Invalid(format!("subfield clique test disagrees with direct check at q={q}, d={d}")));
    }
    Ok(formula)
}

/// An isomorphism `a -> b` as a vertex map, found by backtracking with degree
/// and adjacency consistency. Meant for small graphs only.
pub fn find_isomorphism(a: &Graph, b: &Graph) -> Option<Vec<usize>> {
    let n = a.order();
    if n != b.order() || a.edge_count() != b.edge_count() {
        return None;
    }
    let mut da: Vec<usize> = (0..n).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..n).map(|v| b.degree(v)).collect();
    let (deg_a, deg_b) = (da.clone(), db.clone());
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        v: usize,
        a: &Graph,
        b: &Graph,
        deg_a: &[usize],
        deg_b: &[usize],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let n = a.order();
        if v == n {
            return true;
        }
        for w in 0..n {
            if used[w] || deg_a[v] != deg_b[w] {
                continue;
            }
            if (0..v).any(|u| a.has_edge(u, v) != b.has_edge(map[u], w)) {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if extend(v + 1, a, b, deg_a, deg_b, map, used) {
                return true;
            }
            used[w] = false;
        }
        false
    }
    extend(0, a, b, &deg_a, &deg_b, &mut map, &mut used).then_some(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u32, s: u32) -> Arc<FiniteField> {
        Arc::new(FiniteField::new(p, s).unwrap())
    }

    #[test]
    fn power_residue_examples() {
        let f = field(3, 2);
        assert!(is_dth_power(&f, f.element(2).unwrap(), 4).unwrap());
        assert!(!is_dth_power(&f, f.generator(), 2).unwrap());
        for d in [2, 4, 8] {
            assert!(is_dth_power(&f, FieldElement::ONE, d).unwrap());
        }
        assert!(matches!(is_dth_power(&f, FieldElement::ZERO, 2), Err(Error::ZeroElement)));
    }

    #[test]
    fn paley_degrees_and_headers() {
        let f9 = field(3, 2);
        let g4 = CayleyGraph::paley(&f9, 4).unwrap();
        assert!((0..9).all(|v| g4.graph().degree(v) == 2));
        assert!(g4.graph().to_dimacs().starts_with("p edge 9 9\n"));
        let g2 = CayleyGraph::paley(&f9, 2).unwrap();
        assert!((0..9).all(|v| g2.graph().degree(v) == 4));
        assert!(g2.graph().to_dimacs().starts_with("p edge 9 18\n"));
        let f25 = field(5, 2);
        assert!(matches!(CayleyGraph::paley(&f25, 7), Err(Error::CongruenceViolation { q: 25, modulus: 14 })));
    }

    #[test]
    fn peisert_construction() {
        let f9 = field(3, 2);
        let p9 = CayleyGraph::peisert(&f9).unwrap();
        assert!((0..9).all(|v| p9.graph().degree(v) == 4));
        assert_eq!(p9.peisert_sets().unwrap().selected, [0, 3]);
        assert!(p9.peisert_sets().unwrap().cosets.iter().all(|c| c.len() == 2));
        let p49 = CayleyGraph::peisert(&field(7, 2)).unwrap();
        assert_eq!(p49.peisert_sets().unwrap().selected, [1, 2]);
        assert!(matches!(CayleyGraph::peisert(&field(5, 2)), Err(Error::NotPeisertField { q: 25 })));
        assert!(matches!(CayleyGraph::peisert(&field(3, 3)), Err(Error::NotPeisertField { .. })));
    }

    #[test]
    fn subfield_tests() {
        assert!(subfield_clique_test(&field(3, 2), 4).unwrap());
        assert!(!subfield_clique_test(&field(3, 4), 4).unwrap());
        assert!(subfield_clique_test(&field(5, 2), 3).unwrap());
        assert!(matches!(subfield_clique_test(&field(3, 3), 2), Err(Error::NotSquare(27))));
    }

    #[test]
    fn peisert_independent_of_generator_at_9() {
        let f9 = field(3, 2);
        let base = CayleyGraph::peisert(&f9).unwrap();
        let prims: Vec<_> = f9.nonzero_elements().filter(|&x| f9.element_order(x).unwrap() == 8).collect();
        assert_eq!(prims.len(), 4);
        for g in prims {
            let other = CayleyGraph::peisert_with_generator(&f9, g).unwrap();
            assert!(find_isomorphism(base.graph(), other.graph()).is_some());
        }
    }

    #[test]
    fn json_round_trip() {
        let g = CayleyGraph::paley(&field(3, 2), 4).unwrap();
        let doc: GraphJson = serde_json::from_str(&g.to_json().unwrap()).unwrap();
        assert_eq!(doc.manifest.field, "3^2/1,0,1/4");
        assert_eq!(&doc.to_graph().unwrap(), g.graph());
    }
}
