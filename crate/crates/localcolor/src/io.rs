//! Text and JSON file formats.
//!
//! Graphs travel as an edge list (`p <n> <m>` header, one `<u> <v>` line per
//! edge, `#` comments) or as the equivalent JSON object `{"n", "edges"}`.
//! Colorings are one `<id> <color>` line per colored vertex. Everything else
//! (decompositions, certificates, layer sidecars, reports) is JSON.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use localcolor_core::clique;
use localcolor_core::coloring::{Color, PartialColoring};
use localcolor_core::decomposition::DenseDecomposition;
use localcolor_core::lowerbound::{HardInstance, LayeredGraph, RemovedVertex, Role};
use localcolor_core::reducers::Certificate;
use localcolor_core::{Graph, Vertex, VertexSet};

/// JSON mirror of the edge-list format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> GraphJson {
        GraphJson { n: g.n(), edges: g.edges().collect() }
    }

    pub fn into_graph(self) -> Result<Graph> {
        Graph::from_edges(self.n, self.edges).map_err(|e| anyhow!("invalid graph: {e}"))
    }
}

/// Parses either format, telling them apart by a leading `{`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        let parsed: GraphJson = serde_json::from_str(text).context("parsing JSON graph")?;
        parsed.into_graph()
    } else {
        parse_edge_list(text)
    }
}

/// Reads the edge-list format.
///
/// Vertex ids are kept as written when they all lie in `1..=n`. Any other
/// labelling (0-based files, sparse labels) is compressed to `1..=k` in
/// ascending label order, `k` being the number of distinct labels plus
/// any isolated vertices the header promises.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(u64, u64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "p" {
            if header.is_some() {
                bail!("line {lineno}: second header");
            }
            // `p <n> <m>`, also tolerating a DIMACS-style format word.
            let nums: Vec<&str> = fields[1..].iter().copied().filter(|f| f.parse::<u64>().is_ok()).collect();
            if nums.len() != 2 || fields.len() > 4 {
                bail!("line {lineno}: header must be `p <n> <m>`");
            }
            header = Some((nums[0].parse()?, nums[1].parse()?));
            continue;
        }
        if header.is_none() {
            bail!("line {lineno}: edge before the `p <n> <m>` header");
        }
        let fields = if fields[0] == "e" { &fields[1..] } else { &fields[..] };
        let [u, v] = fields else {
            bail!("line {lineno}: expected `<u> <v>`");
        };
        let u: u64 = u.parse().with_context(|| format!("line {lineno}: bad vertex id {u:?}"))?;
        let v: u64 = v.parse().with_context(|| format!("line {lineno}: bad vertex id {v:?}"))?;
        edges.push((u, v));
    }
    let (n, m) = header.ok_or_else(|| anyhow!("missing `p <n> <m>` header"))?;
    if edges.len() != m {
        bail!("header announces {m} edges, found {}", edges.len());
    }
    let in_range = edges.iter().all(|&(u, v)| (1..=n as u64).contains(&u) && (1..=n as u64).contains(&v));
    let (n, edges): (usize, Vec<(Vertex, Vertex)>) = if in_range {
        (n, edges.into_iter().map(|(u, v)| (u as Vertex, v as Vertex)).collect())
    } else {
        let labels: BTreeSet<u64> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        let labels: Vec<u64> = labels.into_iter().collect();
        let id = |x: u64| labels.binary_search(&x).unwrap() as Vertex + 1;
        let mapped = edges.iter().map(|&(u, v)| (id(u), id(v))).collect();
        (n.max(labels.len()), mapped)
    };
    Graph::from_edges(n, edges).map_err(|e| anyhow!("invalid graph: {e}"))
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn write_graph_json(g: &Graph) -> String {
    to_json(&GraphJson::from_graph(g))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// One `<id> <color>` line per colored vertex, ascending id.
pub fn write_coloring(c: &PartialColoring) -> String {
    let mut out = String::new();
    for (v, col) in c.colored() {
        writeln!(out, "{v} {col}").unwrap();
    }
    out
}

/// Reads a coloring of an `n`-vertex graph. Missing vertices stay
/// uncolored; the palette is the largest color seen.
pub fn parse_coloring(text: &str, n: usize) -> Result<PartialColoring> {
    let mut colors: Vec<Option<Color>> = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [v, c] = fields[..] else {
            bail!("line {lineno}: expected `<id> <color>`");
        };
        let v: usize = v.parse().with_context(|| format!("line {lineno}: bad vertex id"))?;
        let c: Color = c.parse().with_context(|| format!("line {lineno}: bad color"))?;
        if v == 0 || v > n {
            bail!("line {lineno}: vertex {v} is not in 1..={n}");
        }
        if c == 0 {
            bail!("line {lineno}: colors start at 1");
        }
        if colors[v - 1].replace(c).is_some() {
            bail!("line {lineno}: vertex {v} colored twice");
        }
    }
    let palette = colors.iter().flatten().copied().max().unwrap_or(1);
    Ok(PartialColoring::from_colors(colors, palette))
}

pub fn parse_decomposition(text: &str) -> Result<DenseDecomposition> {
    serde_json::from_str(text).context("parsing decomposition JSON")
}

/// The two kinds of certificate a command can emit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CertificateJson {
    /// A clique on more than `Δ − k` vertices inside `N[vertex]`.
    Clique { vertex: Vertex, clique: VertexSet, threshold: usize },
    /// `N[vertex]` cannot be colored with `c` colors.
    Neighborhood { vertex: Vertex, vertices: Vec<Vertex>, edges: Vec<(Vertex, Vertex)>, c: usize, solver_nodes: u64 },
}

impl CertificateJson {
    pub fn from_certificate(cert: &Certificate) -> CertificateJson {
        let sub = &cert.subgraph;
        CertificateJson::Neighborhood {
            vertex: cert.vertex,
            vertices: sub.ids.clone(),
            edges: sub.graph.edges().map(|(u, v)| (sub.original(u), sub.original(v))).collect(),
            c: cert.palette,
            solver_nodes: cert.solver_nodes,
        }
    }

    /// Checks the certificate against `g`: the claimed structure must be
    /// present and (for neighborhoods) must match `g` exactly. Whether a
    /// neighborhood is really non-colorable is the caller's question.
    pub fn check_against(&self, g: &Graph) -> Result<()> {
        match self {
            CertificateJson::Clique { vertex, clique, threshold } => {
                g.check(*vertex).map_err(|e| anyhow!("{e}"))?;
                if clique.len() <= *threshold {
                    bail!("clique has {} vertices, not more than {threshold}", clique.len());
                }
                if !clique.contains(*vertex) {
                    bail!("clique does not contain its vertex {vertex}");
                }
                for v in clique.iter() {
                    g.check(v).map_err(|e| anyhow!("{e}"))?;
                }
                if !clique::is_clique(g, clique) {
                    bail!("the listed vertices are not a clique");
                }
            }
            CertificateJson::Neighborhood { vertex, vertices, edges, .. } => {
                g.check(*vertex).map_err(|e| anyhow!("{e}"))?;
                let closed = g.closed_neighborhood(*vertex);
                if closed.as_slice() != vertices.as_slice() {
                    bail!("listed vertices are not the closed neighborhood of {vertex}");
                }
                let sub = g.induced(&closed);
                let actual: Vec<(Vertex, Vertex)> =
                    sub.graph.edges().map(|(u, v)| (sub.original(u), sub.original(v))).collect();
                let mut listed = edges.clone();
                listed.sort_unstable();
                if listed != actual {
                    bail!("listed edges differ from the neighborhood of {vertex} in the graph");
                }
            }
        }
        Ok(())
    }

    /// The neighborhood as a standalone graph.
    pub fn subgraph(&self, g: &Graph) -> Option<Graph> {
        match self {
            CertificateJson::Neighborhood { vertex, .. } => Some(g.induced(&g.closed_neighborhood(*vertex)).graph),
            CertificateJson::Clique { .. } => None,
        }
    }
}

/// Layer annotation written next to a generated chain or hard instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerSidecar {
    pub delta: usize,
    pub c: usize,
    pub layers: u32,
    pub layer_of: Vec<u32>,
    pub role_of: Vec<Role>,
    pub removed: Vec<RemovedVertex>,
    /// The edge deleted from the chain, for hard instances.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deleted_edge: Option<(Vertex, Vertex)>,
}

impl LayerSidecar {
    pub fn chain(lg: &LayeredGraph) -> LayerSidecar {
        LayerSidecar {
            delta: lg.delta,
            c: lg.c,
            layers: lg.layers(),
            layer_of: lg.layer_of.clone(),
            role_of: lg.role_of.clone(),
            removed: lg.removed.clone(),
            deleted_edge: None,
        }
    }

    pub fn hard(h: &HardInstance) -> LayerSidecar {
        LayerSidecar { deleted_edge: Some(h.deleted), ..LayerSidecar::chain(&h.chain) }
    }
}
