//! Finite vertex-colored bounded-degree graphs with optional marks and
//! per-vertex intended tree types.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::tree::TreeType;

/// A finite simple graph with colors in `1..=c`, maximum degree `d`,
/// optional named boolean marks, and an optional intended tree type per
/// vertex (the class label of the synthesizer's construction).
///
/// Intended types are interned in a catalog; equality compares the
/// resolved per-vertex encodings. Colors retained by a recoloring pass
/// (`prev_colors`) are an in-memory attribute and are not persisted by
/// the file format, so equality ignores them as well.
#[derive(Debug, Clone)]
pub struct ColoredGraph {
    d: usize,
    c: usize,
    colors: Vec<u16>,
    adj: Vec<Vec<u32>>,
    intended: Vec<Option<u32>>,
    type_catalog: Vec<TreeType>,
    marks: BTreeMap<String, Vec<bool>>,
    prev_colors: Option<Vec<u16>>,
}

impl ColoredGraph {
    pub fn new(d: usize, c: usize, colors: Vec<u16>) -> Result<Self> {
        if d < 1 || c < 1 {
            return Err(Error::validation("graph needs d ≥ 1 and c ≥ 1"));
        }
        for (v, &col) in colors.iter().enumerate() {
            if col < 1 || col as usize > c {
                return Err(Error::validation(format!(
                    "vertex {v} has color {col} outside 1..={c}"
                )));
            }
        }
        let n = colors.len();
        Ok(ColoredGraph {
            d,
            c,
            colors,
            adj: vec![Vec::new(); n],
            intended: vec![None; n],
            type_catalog: Vec::new(),
            marks: BTreeMap::new(),
            prev_colors: None,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn max_degree_bound(&self) -> usize {
        self.d
    }

    pub fn color_count(&self) -> usize {
        self.c
    }

    pub fn color(&self, v: usize) -> u16 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u16] {
        &self.colors
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.vertex_count();
        if u >= n || v >= n {
            return Err(Error::validation(format!("edge ({u},{v}) references a missing vertex")));
        }
        if u == v {
            return Err(Error::validation(format!("self-loop at vertex {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::validation(format!("duplicate edge ({u},{v})")));
        }
        if self.degree(u) >= self.d || self.degree(v) >= self.d {
            return Err(Error::validation(format!(
                "edge ({u},{v}) would exceed the degree bound d={}",
                self.d
            )));
        }
        let pos = self.adj[u].binary_search(&(v as u32)).unwrap_err();
        self.adj[u].insert(pos, v as u32);
        let pos = self.adj[v].binary_search(&(u as u32)).unwrap_err();
        self.adj[v].insert(pos, u as u32);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let pu = self.adj[u]
            .binary_search(&(v as u32))
            .map_err(|_| Error::validation(format!("edge ({u},{v}) not present")))?;
        self.adj[u].remove(pu);
        let pv = self.adj[v].binary_search(&(u as u32)).expect("symmetric adjacency");
        self.adj[v].remove(pv);
        Ok(())
    }

    /// Edges as (u, v) with u < v, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.vertex_count() {
            for &w in &self.adj[u] {
                let w = w as usize;
                if u < w {
                    out.push((u, w));
                }
            }
        }
        out
    }

    pub fn set_intended(&mut self, v: usize, ty: TreeType) {
        let idx = self.intern_type(ty);
        self.set_intended_index(v, idx);
    }

    pub fn intended(&self, v: usize) -> Option<&TreeType> {
        self.intended[v].map(|i| &self.type_catalog[i as usize])
    }

    /// Intern a type into the catalog, returning its stable index. Bulk
    /// callers should intern once and use [`set_intended_index`].
    pub fn intern_type(&mut self, ty: TreeType) -> u32 {
        if let Some(i) = self.type_catalog.iter().position(|t| *t == ty) {
            return i as u32;
        }
        self.type_catalog.push(ty);
        (self.type_catalog.len() - 1) as u32
    }

    pub fn set_intended_index(&mut self, v: usize, idx: u32) {
        debug_assert!((idx as usize) < self.type_catalog.len());
        self.intended[v] = Some(idx);
    }

    /// Interned index of a vertex's intended type, if set. Indices are
    /// stable across calls and shared between vertices with equal types.
    pub fn intended_index(&self, v: usize) -> Option<u32> {
        self.intended[v]
    }

    pub fn type_catalog(&self) -> &[TreeType] {
        &self.type_catalog
    }

    pub fn set_mark(&mut self, name: &str, v: usize, value: bool) {
        let n = self.vertex_count();
        let row = self
            .marks
            .entry(name.to_string())
            .or_insert_with(|| vec![false; n]);
        row[v] = value;
    }

    pub fn mark(&self, name: &str, v: usize) -> bool {
        self.marks.get(name).map(|row| row[v]).unwrap_or(false)
    }

    pub fn mark_names(&self) -> impl Iterator<Item = &str> {
        self.marks.keys().map(String::as_str)
    }

    pub fn marks_of(&self, v: usize) -> Vec<&str> {
        self.marks
            .iter()
            .filter(|(_, row)| row[v])
            .map(|(name, _)| name.as_str())
            .collect()
    }

    /// Replace the coloring, retaining the previous colors as an
    /// auxiliary attribute. Intended types refer to the old colors and
    /// are dropped.
    pub fn recolored(&self, new_colors: Vec<u16>, new_c: usize) -> Result<ColoredGraph> {
        if new_colors.len() != self.vertex_count() {
            return Err(Error::validation("recoloring must cover every vertex"));
        }
        let mut g = ColoredGraph::new(self.d, new_c, new_colors)?;
        g.adj = self.adj.clone();
        g.marks = self.marks.clone();
        g.prev_colors = Some(self.colors.clone());
        Ok(g)
    }

    pub fn prev_colors(&self) -> Option<&[u16]> {
        self.prev_colors.as_deref()
    }

    /// Re-declare the ambient bounds upward (never below realized values).
    pub fn with_declared(&self, d: usize, c: usize) -> Result<ColoredGraph> {
        let realized_d = (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0);
        if d < realized_d {
            return Err(Error::validation(format!(
                "declared d={d} below realized maximum degree {realized_d}"
            )));
        }
        let realized_c = self.colors.iter().copied().max().unwrap_or(1) as usize;
        if c < realized_c {
            return Err(Error::validation(format!(
                "declared c={c} below realized maximum color {realized_c}"
            )));
        }
        let mut g = self.clone();
        g.d = d;
        g.c = c;
        Ok(g)
    }

    /// Distance from `u` to `v` if at most `limit`, else None.
    pub fn distance_within(&self, u: usize, v: usize, limit: usize) -> Option<usize> {
        if u == v {
            return Some(0);
        }
        let mut dist = vec![u8::MAX; self.vertex_count()];
        let cap = limit.min(u8::MAX as usize - 1);
        dist[u] = 0;
        let mut frontier = vec![u as u32];
        for depth in 1..=cap {
            let mut next = Vec::new();
            for &x in &frontier {
                for &w in &self.adj[x as usize] {
                    if dist[w as usize] == u8::MAX {
                        if w as usize == v {
                            return Some(depth);
                        }
                        dist[w as usize] = depth as u8;
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                return None;
            }
            frontier = next;
        }
        None
    }

    /// Vertices at distance 1..=k from v, ascending.
    pub fn vertices_within(&self, v: usize, k: usize) -> Vec<usize> {
        let mut seen = vec![false; self.vertex_count()];
        seen[v] = true;
        let mut out = Vec::new();
        let mut frontier = vec![v];
        for _ in 0..k {
            let mut next = Vec::new();
            for &x in &frontier {
                for &w in &self.adj[x] {
                    let w = w as usize;
                    if !seen[w] {
                        seen[w] = true;
                        out.push(w);
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        out.sort_unstable();
        out
    }
}

impl PartialEq for ColoredGraph {
    fn eq(&self, other: &Self) -> bool {
        if self.d != other.d
            || self.c != other.c
            || self.colors != other.colors
            || self.adj != other.adj
        {
            return false;
        }
        let n = self.vertex_count();
        for v in 0..n {
            if self.intended(v) != other.intended(v) {
                return false;
            }
        }
        // marks compare with absent == all-false
        let names: std::collections::BTreeSet<&String> =
            self.marks.keys().chain(other.marks.keys()).collect();
        for name in names {
            for v in 0..n {
                if self.mark(name, v) != other.mark(name, v) {
                    return false;
                }
            }
        }
        true
    }
}

impl Eq for ColoredGraph {}
