//! Graph families, Laplacians, and recorded edge perturbations.
//!
//! Vertex indexing is 0-based with fixed family layouts so every scenario
//! vertex is addressable by index:
//!
//! * complete graph: nothing distinguished;
//! * complete bipartite `K_{N1,N2}`: the first side is `{0..N1-1}`, the
//!   second `{N1..N-1}`;
//! * star: the central vertex is index 0.
//!
//! A perturbation is an extra complex weight `λe^{iθ}` recorded on an ordered
//! vertex pair `(r,s)`: at Hamiltonian assembly it adds `λe^{iθ}` to element
//! `(r,s)` and the conjugate to `(s,r)`. The Laplacian itself never includes
//! perturbations; they enter only in the assembled walk Hamiltonian.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

use crate::linalg::{OperatorMatrix, C64};
use crate::{Error, Result};

pub type Vertex = usize;

/// Trap placement for the star family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarTrap {
    Central,
    Outer,
}

/// One of the three graph families treated by the closed-form catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Complete { n: usize },
    CompleteBipartite { n1: usize, n2: usize },
    Star { n: usize, trap: StarTrap },
}

impl FamilySpec {
    pub fn vertex_count(&self) -> usize {
        match *self {
            FamilySpec::Complete { n } => n,
            FamilySpec::CompleteBipartite { n1, n2 } => n1 + n2,
            FamilySpec::Star { n, .. } => n,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            FamilySpec::Complete { n } if n < 2 => {
                Err(Error::Size(format!("complete graph needs N ≥ 2, got {n}")))
            }
            FamilySpec::CompleteBipartite { n1, n2 } if n1 < 1 || n2 < 1 => {
                Err(Error::Size(format!("bipartite sides must be ≥ 1, got ({n1}, {n2})")))
            }
            FamilySpec::CompleteBipartite { n1, n2 } if n1 + n2 < 2 => {
                Err(Error::Size(format!("graph needs N ≥ 2, got {}", n1 + n2)))
            }
            FamilySpec::Star { n, .. } if n < 2 => {
                Err(Error::Size(format!("star graph needs N ≥ 2, got {n}")))
            }
            _ => Ok(()),
        }
    }

    /// Default trap vertex under the documented layout.
    pub fn default_trap(&self) -> Vertex {
        match *self {
            FamilySpec::Star { trap: StarTrap::Outer, .. } => 1,
            _ => 0,
        }
    }
}

/// Extra weight `λe^{iθ}` on an edge; `row` is the ordered-pair row index,
/// i.e. the Hamiltonian element `(row, other)` receives `λe^{iθ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgePerturbation {
    pub row: Vertex,
    pub lambda: f64,
    pub theta: f64,
}

/// Undirected simple graph with optional per-edge perturbations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(Vertex, Vertex)>,
    perturbations: BTreeMap<(Vertex, Vertex), EdgePerturbation>,
}

fn key(r: Vertex, s: Vertex) -> (Vertex, Vertex) {
    if r < s {
        (r, s)
    } else {
        (s, r)
    }
}

pub fn normalize_phase(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t == TAU {
        0.0
    } else {
        t
    }
}

impl Graph {
    pub fn new(n: usize, edge_list: &[(Vertex, Vertex)]) -> Result<Graph> {
        if n < 2 {
            return Err(Error::Size(format!("graph needs N ≥ 2, got {n}")));
        }
        let mut edges = BTreeSet::new();
        for &(r, s) in edge_list {
            if r >= n {
                return Err(Error::Index { index: r, n });
            }
            if s >= n {
                return Err(Error::Index { index: s, n });
            }
            if r == s {
                return Err(Error::Value(format!("self-loop at vertex {r}")));
            }
            edges.insert(key(r, s));
        }
        Ok(Graph { n, edges, perturbations: BTreeMap::new() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, r: Vertex, s: Vertex) -> bool {
        r != s && self.edges.contains(&key(r, s))
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().copied()
    }

    pub fn perturbations(&self) -> impl Iterator<Item = (&(Vertex, Vertex), &EdgePerturbation)> {
        self.perturbations.iter()
    }

    pub fn perturbation_of(&self, r: Vertex, s: Vertex) -> Option<&EdgePerturbation> {
        self.perturbations.get(&key(r, s))
    }

    /// Record `λe^{iθ}` on the ordered pair `(r,s)`. Perturbing the same edge
    /// again replaces the record; `λ = 0` removes it (no perturbation).
    pub fn perturb_edge(&self, r: Vertex, s: Vertex, lambda: f64, theta: f64) -> Result<Graph> {
        if r >= self.n {
            return Err(Error::Index { index: r, n: self.n });
        }
        if s >= self.n {
            return Err(Error::Index { index: s, n: self.n });
        }
        if !self.has_edge(r, s) {
            return Err(Error::Topology(r, s));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::Value(format!("perturbation magnitude must be ≥ 0, got {lambda}")));
        }
        let mut g = self.clone();
        if lambda == 0.0 {
            g.perturbations.remove(&key(r, s));
        } else {
            g.perturbations
                .insert(key(r, s), EdgePerturbation { row: r, lambda, theta: normalize_phase(theta) });
        }
        Ok(g)
    }

    /// Laplacian `D - A`: degrees on the diagonal, -1 on edges. Real
    /// symmetric; perturbations are not included here.
    pub fn laplacian(&self) -> OperatorMatrix {
        let mut m = OperatorMatrix::zeros(self.n);
        for v in 0..self.n {
            m.set(v, v, C64::new(self.degree(v) as f64, 0.0));
        }
        for &(r, s) in &self.edges {
            m.set(r, s, C64::new(-1.0, 0.0));
            m.set(s, r, C64::new(-1.0, 0.0));
        }
        m.set_hermitian_flag(true);
        m
    }
}

/// Build one of the three families with the documented vertex layout.
pub fn build_family(spec: FamilySpec) -> Result<Graph> {
    spec.validate()?;
    match spec {
        FamilySpec::Complete { n } => {
            let mut edges = Vec::with_capacity(n * (n - 1) / 2);
            for r in 0..n {
                for s in (r + 1)..n {
                    edges.push((r, s));
                }
            }
            Graph::new(n, &edges)
        }
        FamilySpec::CompleteBipartite { n1, n2 } => {
            let mut edges = Vec::with_capacity(n1 * n2);
            for j in 0..n1 {
                for h in n1..(n1 + n2) {
                    edges.push((j, h));
                }
            }
            Graph::new(n1 + n2, &edges)
        }
        FamilySpec::Star { n, .. } => {
            let edges: Vec<_> = (1..n).map(|j| (0, j)).collect();
            Graph::new(n, &edges)
        }
    }
}

/// Recognize one of the catalog families from the raw edge structure.
///
/// Star graphs are reported as `Star` (central trap placeholder), not as the
/// equivalent bipartite graph with a singleton side; `K_2` is `Complete`.
pub fn detect_family(g: &Graph) -> Option<FamilySpec> {
    let n = g.n();
    if g.edge_count() == n * (n - 1) / 2 {
        return Some(FamilySpec::Complete { n });
    }
    // star: one hub adjacent to all, no other edges
    if g.edge_count() == n - 1 {
        if let Some(hub) = (0..n).find(|&v| g.degree(v) == n - 1) {
            if (0..n).all(|v| v == hub || g.degree(v) == 1) {
                let _ = hub;
                return Some(FamilySpec::Star { n, trap: StarTrap::Central });
            }
        }
    }
    // complete bipartite: 2-color by adjacency from vertex 0
    let side2: Vec<Vertex> = (0..n).filter(|&v| g.has_edge(0, v)).collect();
    let side1: Vec<Vertex> = (0..n).filter(|&v| v == 0 || !g.has_edge(0, v)).collect();
    let (a, b) = (side1.len(), side2.len());
    if a.min(b) >= 2 && g.edge_count() == a * b {
        let complete_across = side1.iter().all(|&j| side2.iter().all(|&h| g.has_edge(j, h)));
        let empty_within = side1.iter().all(|&j| side1.iter().all(|&j2| j == j2 || !g.has_edge(j, j2)));
        if complete_across && empty_within {
            return Some(FamilySpec::CompleteBipartite { n1: a, n2: b });
        }
    }
    None
}

/// Membership sides of a bipartite layout: vertices `0..n1` vs `n1..n`.
pub fn bipartite_side(spec: &FamilySpec, v: Vertex) -> Option<usize> {
    match *spec {
        FamilySpec::CompleteBipartite { n1, n2 } => {
            if v < n1 {
                Some(0)
            } else if v < n1 + n2 {
                Some(1)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Parse the graph mini-language: `complete:N`, `cbg:N1,N2`, `star:N`
/// (central trap), `star:N:outer`.
pub fn parse_family_spec(s: &str) -> Result<FamilySpec> {
    let s = s.trim();
    let mut parts = s.split(':');
    let head = parts.next().unwrap_or("");
    let spec = match head {
        "complete" => {
            let n = parse_usize(parts.next(), "complete:N")?;
            if parts.next().is_some() {
                return Err(Error::Parse(format!("trailing fields in {s:?}")));
            }
            FamilySpec::Complete { n }
        }
        "cbg" => {
            let body = parts.next().ok_or_else(|| Error::Parse("cbg needs sizes: cbg:N1,N2".into()))?;
            if parts.next().is_some() {
                return Err(Error::Parse(format!("trailing fields in {s:?}")));
            }
            let mut sizes = body.split(',');
            let n1 = parse_usize(sizes.next(), "cbg:N1,N2")?;
            let n2 = parse_usize(sizes.next(), "cbg:N1,N2")?;
            if sizes.next().is_some() {
                return Err(Error::Parse(format!("cbg takes two sizes, got {body:?}")));
            }
            FamilySpec::CompleteBipartite { n1, n2 }
        }
        "star" => {
            let n = parse_usize(parts.next(), "star:N")?;
            let trap = match parts.next() {
                None => StarTrap::Central,
                Some("outer") => StarTrap::Outer,
                Some("central") => StarTrap::Central,
                Some(other) => {
                    return Err(Error::Parse(format!("unknown star trap position {other:?}")))
                }
            };
            if parts.next().is_some() {
                return Err(Error::Parse(format!("trailing fields in {s:?}")));
            }
            FamilySpec::Star { n, trap }
        }
        other => return Err(Error::Parse(format!("unknown graph family {other:?}"))),
    };
    spec.validate()?;
    Ok(spec)
}

fn parse_usize(field: Option<&str>, what: &str) -> Result<usize> {
    field
        .ok_or_else(|| Error::Parse(format!("missing size in {what}")))?
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// Parse an edge-list file body: one edge per line, `r s` optionally followed
/// by `λ θ`; lines starting with `#` are ignored. The vertex count is one
/// past the largest index mentioned.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut perturbed = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let at = |msg: &str| Error::Parse(format!("edge list line {}: {msg}", lineno + 1));
        if fields.len() != 2 && fields.len() != 4 {
            return Err(at("expected 'r s' or 'r s lambda theta'"));
        }
        let r: Vertex = fields[0].parse().map_err(|_| at("bad vertex index"))?;
        let s: Vertex = fields[1].parse().map_err(|_| at("bad vertex index"))?;
        edges.push((r, s));
        if fields.len() == 4 {
            let lambda: f64 = fields[2].parse().map_err(|_| at("bad lambda"))?;
            let theta: f64 = fields[3].parse().map_err(|_| at("bad theta"))?;
            perturbed.push((r, s, lambda, theta));
        }
    }
    let n = edges.iter().flat_map(|&(r, s)| [r, s]).max().map(|m| m + 1).unwrap_or(0);
    let mut g = Graph::new(n, &edges)?;
    for (r, s, lambda, theta) in perturbed {
        g = g.perturb_edge(r, s, lambda, theta)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn complete_family_edges_and_degrees() {
        let g = build_family(FamilySpec::Complete { n: 4 }).unwrap();
        assert_eq!(g.edge_count(), 6);
        for v in 0..4 {
            assert_eq!(g.degree(v), 3);
        }
    }

    #[test]
    fn cbg_family_edges_and_degrees() {
        let g = build_family(FamilySpec::CompleteBipartite { n1: 4, n2: 3 }).unwrap();
        assert_eq!(g.edge_count(), 12);
        for v in 0..4 {
            assert_eq!(g.degree(v), 3, "side-1 vertex degree");
        }
        for v in 4..7 {
            assert_eq!(g.degree(v), 4, "side-2 vertex degree");
        }
    }

    #[test]
    fn star_family_layout() {
        let g = build_family(FamilySpec::Star { n: 7, trap: StarTrap::Central }).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.degree(0), 6);
        for v in 1..7 {
            assert_eq!(g.degree(v), 1);
        }
    }

    #[test]
    fn invalid_sizes_rejected() {
        assert!(build_family(FamilySpec::Complete { n: 1 }).is_err());
        assert!(build_family(FamilySpec::CompleteBipartite { n1: 0, n2: 3 }).is_err());
        assert!(build_family(FamilySpec::Star { n: 1, trap: StarTrap::Central }).is_err());
    }

    #[test]
    fn laplacian_complete_3() {
        let g = build_family(FamilySpec::Complete { n: 3 }).unwrap();
        let l = g.laplacian();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 2.0 } else { -1.0 };
                assert_eq!(l.get(i, j), C64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn laplacian_star_3_center_row() {
        let g = build_family(FamilySpec::Star { n: 3, trap: StarTrap::Central }).unwrap();
        let l = g.laplacian();
        assert_eq!(l.get(0, 0), C64::new(2.0, 0.0));
        assert_eq!(l.get(0, 1), C64::new(-1.0, 0.0));
        assert_eq!(l.get(0, 2), C64::new(-1.0, 0.0));
    }

    #[test]
    fn laplacian_complete_is_n_identity_minus_ones() {
        let n = 6;
        let g = build_family(FamilySpec::Complete { n }).unwrap();
        let l = g.laplacian();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { n as f64 - 1.0 } else { -1.0 };
                assert_eq!(l.get(i, j), C64::new(want, 0.0), "N·I - J elementwise at ({i},{j})");
            }
        }
    }

    #[test]
    fn perturbation_storage_roundtrip() {
        let g = build_family(FamilySpec::Complete { n: 7 }).unwrap();
        let g = g.perturb_edge(1, 0, 0.5, std::f64::consts::PI).unwrap();
        let p = g.perturbation_of(0, 1).unwrap();
        assert_eq!(p.row, 1);
        assert!((p.lambda - 0.5).abs() < 1e-15);
        assert!((p.theta - std::f64::consts::PI).abs() < 1e-15);
        // replacing the same edge
        let g = g.perturb_edge(0, 1, 2.0, -1.0).unwrap();
        let p = g.perturbation_of(1, 0).unwrap();
        assert_eq!(p.row, 0);
        assert!((p.theta - (TAU - 1.0)).abs() < 1e-12, "phase canonicalized into [0,2π)");
        // λ = 0 removes the record
        let g = g.perturb_edge(0, 1, 0.0, 0.0).unwrap();
        assert!(g.perturbation_of(0, 1).is_none());
    }

    #[test]
    fn perturbing_non_edge_is_topology_error() {
        let g = build_family(FamilySpec::Star { n: 5, trap: StarTrap::Central }).unwrap();
        // two outer vertices are not adjacent in a star
        match g.perturb_edge(1, 2, 1.0, 0.0) {
            Err(Error::Topology(1, 2)) => {}
            other => panic!("expected topology error, got {other:?}"),
        }
    }

    #[test]
    fn family_detection() {
        let k7 = build_family(FamilySpec::Complete { n: 7 }).unwrap();
        assert_eq!(detect_family(&k7), Some(FamilySpec::Complete { n: 7 }));
        let cbg = build_family(FamilySpec::CompleteBipartite { n1: 4, n2: 3 }).unwrap();
        assert_eq!(detect_family(&cbg), Some(FamilySpec::CompleteBipartite { n1: 4, n2: 3 }));
        let star = build_family(FamilySpec::Star { n: 6, trap: StarTrap::Outer }).unwrap();
        assert!(matches!(detect_family(&star), Some(FamilySpec::Star { n: 6, .. })));
        // a path on 4 vertices is none of the three
        let path = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(detect_family(&path), None);
    }

    #[test]
    fn mini_language() {
        assert_eq!(parse_family_spec("complete:7").unwrap(), FamilySpec::Complete { n: 7 });
        assert_eq!(
            parse_family_spec("cbg:4,3").unwrap(),
            FamilySpec::CompleteBipartite { n1: 4, n2: 3 }
        );
        assert_eq!(
            parse_family_spec("star:7").unwrap(),
            FamilySpec::Star { n: 7, trap: StarTrap::Central }
        );
        assert_eq!(
            parse_family_spec("star:7:outer").unwrap(),
            FamilySpec::Star { n: 7, trap: StarTrap::Outer }
        );
        assert!(parse_family_spec("complete:1").is_err());
        assert!(parse_family_spec("ring:5").is_err());
        assert!(parse_family_spec("cbg:4").is_err());
    }

    #[test]
    fn edge_list_parsing() {
        let text = "# a 4-cycle with one perturbed edge\n0 1\n1 2\n2 3\n3 0 0.7 1.1\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 4);
        let p = g.perturbation_of(3, 0).unwrap();
        assert_eq!(p.row, 3);
        assert!((p.lambda - 0.7).abs() < 1e-15);
        assert!(parse_edge_list("0 0\n").is_err());
        assert!(parse_edge_list("0 1 0.5\n").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        /// Laplacian rows sum to zero and the matrix is PSD (x†Lx ≥ 0 via
        /// the edge-difference form) on random graphs.
        #[test]
        fn laplacian_rows_sum_zero(n in 2usize..9, seed in 0u64..500) {
            let mut s = seed.wrapping_mul(0x2545f4914f6cdd1d).wrapping_add(0xb5);
            let mut edges = Vec::new();
            for r in 0..n {
                for t in (r + 1)..n {
                    s ^= s << 13; s ^= s >> 7; s ^= s << 17;
                    if s % 3 != 0 {
                        edges.push((r, t));
                    }
                }
            }
            // keep at least one edge so the graph is nontrivial
            if edges.is_empty() {
                edges.push((0, 1));
            }
            let g = Graph::new(n, &edges).unwrap();
            let l = g.laplacian();
            let ones = crate::linalg::CVector(vec![C64::new(1.0, 0.0); n]);
            let lv = l.matvec(&ones);
            prop_assert!(lv.norm() < 1e-12, "all-ones vector has eigenvalue 0");
            prop_assert!(l.hermitian_defect() < 1e-15);
        }

        /// Family construction is deterministic.
        #[test]
        fn family_deterministic(n1 in 1usize..6, n2 in 1usize..6) {
            prop_assume!(n1 + n2 >= 2);
            let a = build_family(FamilySpec::CompleteBipartite { n1, n2 }).unwrap();
            let b = build_family(FamilySpec::CompleteBipartite { n1, n2 }).unwrap();
            let ea: Vec<_> = a.edges().collect();
            let eb: Vec<_> = b.edges().collect();
            prop_assert_eq!(ea, eb);
        }
    }
}
