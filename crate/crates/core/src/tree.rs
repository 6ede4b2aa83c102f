//! The Bass–Serre tree of `HNN(G, H, θ)`: vertices are cosets `gG`, edges are
//! cosets `gH` (forward, from `gG` to `gtG`) together with their inverses.
//! Everything is computed from normal forms; no graph search is involved.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{HnnError, Result};
use crate::normal_form::{normal_form, normal_form_of_product};
use crate::presentation::HnnPresentation;
use crate::word::{Letter, Sign, Word};

/// A vertex `gG`, stored as the normal-form prefix of any of its elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex<E> {
    pub prefix: Vec<(E, Sign)>,
}

impl<E: Clone> Vertex<E> {
    /// The base vertex `G`.
    pub fn base() -> Self {
        Vertex { prefix: Vec::new() }
    }

    pub fn to_word(&self) -> Word<E> {
        prefix_word(&self.prefix)
    }

    pub fn depth(&self) -> usize {
        self.prefix.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Forward,
    Backward,
}

/// The edge `gH` (forward) or its inverse `\overline{gH}` (backward), with
/// `g = prefix · end_rep` and `end_rep ∈ S_{-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge<E> {
    pub prefix: Vec<(E, Sign)>,
    pub end_rep: E,
    pub orientation: Orientation,
}

impl<E: Clone> Edge<E> {
    pub fn inverse(&self) -> Self {
        Edge {
            orientation: match self.orientation {
                Orientation::Forward => Orientation::Backward,
                Orientation::Backward => Orientation::Forward,
            },
            ..self.clone()
        }
    }

    pub fn forward(&self) -> Self {
        Edge { orientation: Orientation::Forward, ..self.clone() }
    }

    /// An element `g` with `gH` equal to this edge's coset.
    pub fn to_word(&self) -> Word<E> {
        let mut w = prefix_word(&self.prefix);
        w.push(Letter::Base(self.end_rep.clone()));
        w
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowQuery<E> {
    pub edge: Edge<E>,
    pub vertex: Vertex<E>,
}

fn prefix_word<E: Clone>(prefix: &[(E, Sign)]) -> Word<E> {
    prefix
        .iter()
        .flat_map(|(s, e)| [Letter::Base(s.clone()), Letter::Stable(*e)])
        .collect()
}

/// The vertex `wG`.
pub fn vertex_of<P>(pres: &P, w: &Word<P::Elt>) -> Result<Vertex<P::Elt>>
where
    P: HnnPresentation + ?Sized,
{
    Ok(Vertex { prefix: normal_form(pres, w)?.prefix })
}

/// The edge `wH` with the given orientation, in canonical form.
pub fn edge_of<P>(pres: &P, w: &Word<P::Elt>, orientation: Orientation) -> Result<Edge<P::Elt>>
where
    P: HnnPresentation + ?Sized,
{
    let nf = normal_form(pres, w)?;
    Ok(Edge {
        prefix: nf.prefix,
        end_rep: pres.coset_rep_h(&nf.end_letter),
        orientation,
    })
}

/// `(s(e), r(e))`: `s(gH) = gG`, `r(gH) = gtG`, swapped for backward edges.
pub fn edge_endpoints<P>(pres: &P, e: &Edge<P::Elt>) -> Result<(Vertex<P::Elt>, Vertex<P::Elt>)>
where
    P: HnnPresentation + ?Sized,
{
    let tail = Vertex { prefix: e.prefix.clone() };
    let mut w = e.to_word();
    w.push(Letter::Stable(Sign::Pos));
    let head = vertex_of(pres, &w)?;
    Ok(match e.orientation {
        Orientation::Forward => (tail, head),
        Orientation::Backward => (head, tail),
    })
}

/// The geodesic from the base vertex to `v`. With `t_k = s₁t^{ε₁}⋯s_kt^{ε_k}`
/// the `k`-th edge is `t_{k-1}s_kH` when `ε_k = 1` and the inverse of
/// `t_kH` when `ε_k = -1`.
pub fn path_to_vertex<P>(pres: &P, v: &Vertex<P::Elt>) -> Vec<Edge<P::Elt>>
where
    P: HnnPresentation + ?Sized,
{
    (0..v.prefix.len())
        .map(|k| {
            let (s, e) = &v.prefix[k];
            match e {
                Sign::Pos => Edge {
                    prefix: v.prefix[..k].to_vec(),
                    end_rep: s.clone(),
                    orientation: Orientation::Forward,
                },
                Sign::Neg => Edge {
                    prefix: v.prefix[..=k].to_vec(),
                    end_rep: pres.identity(),
                    orientation: Orientation::Backward,
                },
            }
        })
        .collect()
}

/// Combinatorial distance: the length of the normal form of `u⁻¹v`.
pub fn distance<P>(pres: &P, u: &Vertex<P::Elt>, v: &Vertex<P::Elt>) -> Result<usize>
where
    P: HnnPresentation + ?Sized,
{
    let ui = u.to_word().inverse(pres);
    Ok(normal_form_of_product(pres, &[&ui, &v.to_word()])?.length())
}

/// All edges with source `v` and their ranges: first the `[G:H]` forward
/// edges `v·sH` (`s ∈ S_{-1}`), then the `[G:θ(H)]` backward edges
/// `\overline{v·s·t⁻¹H}` (`s ∈ S_1`).
pub fn neighbors<P>(pres: &P, v: &Vertex<P::Elt>) -> Result<Vec<(Edge<P::Elt>, Vertex<P::Elt>)>>
where
    P: HnnPresentation + ?Sized,
{
    let missing = || HnnError::Unsupported("neighbors need finite coset representative lists".into());
    let reps_h = pres.reps_h().ok_or_else(missing)?;
    let reps_th = pres.reps_theta_h().ok_or_else(missing)?;
    let base = v.to_word();
    let mut out = Vec::with_capacity(reps_h.len() + reps_th.len());
    for s in reps_h {
        let mut w = base.clone();
        w.push(Letter::Base(s.clone()));
        w.push(Letter::Stable(Sign::Pos));
        let far = vertex_of(pres, &w)?;
        out.push((Edge { prefix: v.prefix.clone(), end_rep: s, orientation: Orientation::Forward }, far));
    }
    for s in reps_th {
        let mut w = base.clone();
        w.push(Letter::Base(s));
        w.push(Letter::Stable(Sign::Neg));
        let edge = edge_of(pres, &w, Orientation::Backward)?;
        let far = vertex_of(pres, &w)?;
        out.push((edge, far));
    }
    Ok(out)
}

/// Whether `v` lies in the shadow `Z₀(e)`, i.e. is strictly closer to `r(e)`
/// than to `s(e)`.
pub fn in_shadow<P>(pres: &P, q: &ShadowQuery<P::Elt>) -> Result<bool>
where
    P: HnnPresentation + ?Sized,
{
    let (s, r) = edge_endpoints(pres, &q.edge)?;
    Ok(distance(pres, &q.vertex, &s)? > distance(pres, &q.vertex, &r)?)
}

/// A geometric edge of a ball, stored in forward orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallEdge<E> {
    pub edge: Edge<E>,
    pub source: usize,
    pub range: usize,
}

/// The ball of a given radius around a vertex. `vertices[0]` is the
/// center; `depth[i]` is the distance of `vertices[i]` from it.
#[derive(Debug, Clone)]
pub struct Ball<E> {
    pub radius: usize,
    pub vertices: Vec<Vertex<E>>,
    pub depth: Vec<usize>,
    pub edges: Vec<BallEdge<E>>,
}

/// Breadth-first generation of the ball of `radius` around `center`, giving
/// up once more than `max_vertices` vertices would be produced.
pub fn ball<P>(
    pres: &P,
    center: &Vertex<P::Elt>,
    radius: usize,
    max_vertices: usize,
) -> Result<Ball<P::Elt>>
where
    P: HnnPresentation + ?Sized,
{
    let mut index: HashMap<Vertex<P::Elt>, usize> = HashMap::new();
    let mut vertices = vec![center.clone()];
    let mut depth = vec![0];
    let mut edges = Vec::new();
    index.insert(center.clone(), 0);
    let mut frontier = vec![0usize];
    for d in 1..=radius {
        let mut next = Vec::new();
        for &i in &frontier {
            for (edge, far) in neighbors(pres, &vertices[i])? {
                if index.contains_key(&far) {
                    continue;
                }
                if vertices.len() >= max_vertices {
                    return Err(HnnError::ResourceLimit {
                        what: format!("generating a ball of radius {radius}"),
                        partial: vertices.len(),
                        limit: max_vertices,
                    });
                }
                let j = vertices.len();
                index.insert(far.clone(), j);
                vertices.push(far);
                depth.push(d);
                next.push(j);
                let (source, range) = match edge.orientation {
                    Orientation::Forward => (i, j),
                    Orientation::Backward => (j, i),
                };
                edges.push(BallEdge { edge: edge.forward(), source, range });
            }
        }
        frontier = next;
    }
    Ok(Ball { radius, vertices, depth, edges })
}

/// Canonical coset string: prefix letters left to right, then the end
/// representative if nontrivial, then `.G` or `.H`.
pub fn coset_string<P>(pres: &P, prefix: &[(P::Elt, Sign)], end: Option<&P::Elt>, kind: char) -> String
where
    P: HnnPresentation + ?Sized,
{
    let mut parts = Vec::new();
    for (s, e) in prefix {
        if !pres.is_identity(s) {
            parts.push(pres.format_elt(s));
        }
        parts.push(e.token().to_string());
    }
    if let Some(g) = end.filter(|g| !pres.is_identity(g)) {
        parts.push(pres.format_elt(g));
    }
    if parts.is_empty() {
        kind.to_string()
    } else {
        format!("{}.{kind}", parts.join(" "))
    }
}

pub fn vertex_label<P>(pres: &P, v: &Vertex<P::Elt>) -> String
where
    P: HnnPresentation + ?Sized,
{
    coset_string(pres, &v.prefix, None, 'G')
}

pub fn edge_label<P>(pres: &P, e: &Edge<P::Elt>) -> String
where
    P: HnnPresentation + ?Sized,
{
    coset_string(pres, &e.prefix, Some(&e.end_rep), 'H')
}

/// DOT rendering of a ball: one node per vertex, one arc per geometric edge
/// from its forward source to its forward range, labelled by the edge coset.
/// Nodes and arcs are sorted by their canonical strings.
pub fn export_dot<P>(pres: &P, ball: &Ball<P::Elt>) -> String
where
    P: HnnPresentation + ?Sized,
{
    let labels: Vec<String> = ball.vertices.iter().map(|v| vertex_label(pres, v)).collect();
    let mut nodes: Vec<&String> = labels.iter().collect();
    nodes.sort();
    let mut arcs: Vec<(&String, &String, String)> = ball
        .edges
        .iter()
        .map(|e| (&labels[e.source], &labels[e.range], edge_label(pres, &e.edge)))
        .collect();
    arcs.sort();
    let mut out = String::from("digraph bass_serre {\n");
    for n in nodes {
        let _ = writeln!(out, "  {};", quote(n));
    }
    for (s, r, l) in arcs {
        let _ = writeln!(out, "  {} -> {} [label={}];", quote(s), quote(r), quote(&l));
    }
    out.push_str("}\n");
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;
    use crate::instances::{BsInstance, Example5};
    use crate::word::parse_word;

    fn bs23() -> BsInstance {
        BsInstance::new(2, 3).unwrap()
    }

    fn v<P: HnnPresentation>(p: &P, text: &str) -> Vertex<P::Elt> {
        vertex_of(p, &parse_word(p, text).unwrap()).unwrap()
    }

    #[test]
    fn vertices_ignore_base_suffix() {
        let p = bs23();
        assert_eq!(v(&p, ""), Vertex::base());
        assert_eq!(v(&p, "t g^5"), v(&p, "t"));
        let e = Example5::new();
        let w = v(&e, "g0 T h(0,1)");
        assert_eq!(w.prefix.len(), 1);
        assert_eq!(e.format_elt(&w.prefix[0].0), "g0");
        assert_eq!(w.prefix[0].1, Sign::Neg);
    }

    #[test]
    fn endpoints_of_base_edge() {
        let p = bs23();
        let h = Edge { prefix: vec![], end_rep: BigInt::from(0), orientation: Orientation::Forward };
        assert_eq!(edge_endpoints(&p, &h).unwrap(), (v(&p, ""), v(&p, "t")));
        assert_eq!(edge_endpoints(&p, &h.inverse()).unwrap(), (v(&p, "t"), v(&p, "")));
        assert_eq!(h.inverse().inverse(), h);
        let gh = Edge { end_rep: BigInt::from(1), ..h.clone() };
        assert_eq!(edge_endpoints(&p, &gh).unwrap(), (v(&p, ""), v(&p, "g t")));
    }

    #[test]
    fn paths() {
        let p = bs23();
        assert!(path_to_vertex(&p, &v(&p, "")).is_empty());
        let path = path_to_vertex(&p, &v(&p, "t"));
        assert_eq!(path, vec![Edge { prefix: vec![], end_rep: BigInt::from(0), orientation: Orientation::Forward }]);
        let path = path_to_vertex(&p, &v(&p, "T"));
        assert_eq!(path.len(), 1);
        assert_eq!(path[0].orientation, Orientation::Backward);
        assert_eq!(path[0].prefix, vec![(BigInt::from(0), Sign::Neg)]);
        assert_eq!(edge_endpoints(&p, &path[0]).unwrap(), (v(&p, ""), v(&p, "T")));
        let target = v(&p, "g t g^2 T T g t");
        let path = path_to_vertex(&p, &target);
        assert_eq!(path.len(), target.depth());
        let mut at = Vertex::base();
        for e in &path {
            let (s, r) = edge_endpoints(&p, e).unwrap();
            assert_eq!(s, at);
            at = r;
        }
        assert_eq!(at, target);
    }

    #[test]
    fn distances() {
        let p = bs23();
        assert_eq!(distance(&p, &v(&p, ""), &v(&p, "t")).unwrap(), 1);
        assert_eq!(distance(&p, &v(&p, "T"), &v(&p, "t")).unwrap(), 2);
        assert_eq!(distance(&p, &v(&p, "g t"), &v(&p, "g t")).unwrap(), 0);
    }

    #[test]
    fn degrees() {
        let p = bs23();
        let n = neighbors(&p, &Vertex::base()).unwrap();
        let labels: Vec<String> = n.iter().map(|(_, w)| vertex_label(&p, w)).collect();
        assert_eq!(labels, vec!["t.G", "g^1 t.G", "T.G", "g^1 T.G", "g^2 T.G"]);
        assert_eq!(neighbors(&BsInstance::new(2, 2).unwrap(), &Vertex::base()).unwrap().len(), 4);
        let e = Example5::new();
        assert_eq!(neighbors(&e, &v(&e, "g0 T t g1 t")).unwrap().len(), 4);
    }

    #[test]
    fn balls() {
        let p = bs23();
        let b0 = ball(&p, &Vertex::base(), 0, 100).unwrap();
        assert_eq!((b0.vertices.len(), b0.edges.len()), (1, 0));
        let b1 = ball(&p, &Vertex::base(), 1, 100).unwrap();
        assert_eq!((b1.vertices.len(), b1.edges.len()), (6, 5));
        let e = Example5::new();
        assert_eq!(ball(&e, &Vertex::base(), 2, 100).unwrap().vertices.len(), 17);
        let err = ball(&p, &Vertex::base(), 3, 20).unwrap_err();
        assert!(matches!(err, HnnError::ResourceLimit { partial: 20, limit: 20, .. }));
    }

    #[test]
    fn shadows() {
        let p = bs23();
        let h = Edge { prefix: vec![], end_rep: BigInt::from(0), orientation: Orientation::Forward };
        let q = |text: &str| ShadowQuery { edge: h.clone(), vertex: v(&p, text) };
        assert!(in_shadow(&p, &q("t")).unwrap());
        assert!(!in_shadow(&p, &q("")).unwrap());
        assert!(in_shadow(&p, &q("t t")).unwrap());
        assert!(!in_shadow(&p, &q("T")).unwrap());
    }

    #[test]
    fn dot_output() {
        let p = bs23();
        let b0 = ball(&p, &Vertex::base(), 0, 10).unwrap();
        assert_eq!(export_dot(&p, &b0), "digraph bass_serre {\n  \"G\";\n}\n");
        let b1 = ball(&p, &Vertex::base(), 1, 10).unwrap();
        let dot = export_dot(&p, &b1);
        assert_eq!(dot.matches("->").count(), 5);
        for label in ["\"H\"", "\"g^1.H\"", "\"T.H\"", "\"g^1 T.H\"", "\"g^2 T.H\""] {
            assert!(dot.contains(label), "{label} missing from\n{dot}");
        }
        assert_eq!(dot, export_dot(&p, &ball(&p, &Vertex::base(), 1, 10).unwrap()));
    }
}
