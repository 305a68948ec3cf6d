//! Canonical types of rooted colored balls extracted from finite graphs.
//!
//! Tree-shaped balls reduce to [`TreeType`] encodings. Balls containing
//! cycles get a root-preserving canonical labeling via color refinement
//! plus backtracking over the remaining cell orderings, taking the
//! minimal (colors, edge list) form over all explored labelings.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::ColoredGraph;
use crate::tree::{tree_ball_encoding_pub, TreeType};

/// Backtracking leaves explored per canonicalization before giving up.
const SEARCH_LEAF_CAP: usize = 4_000_000;

/// Canonical adjacency form of a rooted colored graph; vertex 0 is the
/// root, edges sorted with u < v.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonGraph {
    pub colors: Vec<u16>,
    pub edges: Vec<(u32, u32)>,
}

impl CanonGraph {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.colors.len()];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v as usize);
            adj[v as usize].push(u as usize);
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        adj
    }
}

/// Isomorphism type of a rooted colored ball. Tree-shaped balls carry the
/// tree encoding; cyclic balls the canonical adjacency form. Which variant
/// applies is itself isomorphism-invariant, so derived equality is type
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BallType {
    Tree(TreeType),
    Cyclic(CanonGraph),
}

impl fmt::Display for BallType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BallType::Tree(t) => write!(f, "{t}"),
            BallType::Cyclic(g) => {
                write!(f, "ball:")?;
                for (i, c) in g.colors.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ";")?;
                for (i, (u, v)) in g.edges.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{u}-{v}")?;
                }
                Ok(())
            }
        }
    }
}

impl BallType {
    pub fn is_tree(&self) -> bool {
        matches!(self, BallType::Tree(_))
    }

    pub fn as_tree(&self) -> Option<&TreeType> {
        match self {
            BallType::Tree(t) => Some(t),
            BallType::Cyclic(_) => None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            BallType::Tree(t) => t.node_count(),
            BallType::Cyclic(g) => g.colors.len(),
        }
    }

    pub fn root_color(&self) -> u16 {
        match self {
            BallType::Tree(t) => t.root_color(),
            BallType::Cyclic(g) => g.colors[0],
        }
    }

    /// A concrete rooted representative: colors and adjacency lists with
    /// the root at index 0. Deterministic per type.
    pub fn representative(&self) -> (Vec<u16>, Vec<Vec<usize>>) {
        match self {
            BallType::Tree(t) => t.to_adjacency(),
            BallType::Cyclic(g) => (g.colors.clone(), g.adjacency()),
        }
    }

    /// Maximum distance from the root in the representative.
    pub fn radius(&self) -> usize {
        let (colors, adj) = self.representative();
        let dist = bfs_distances(&adj, 0);
        let _ = colors;
        dist.into_iter().flatten().max().unwrap_or(0)
    }
}

fn bfs_distances(adj: &[Vec<usize>], root: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &w in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// The induced subgraph on vertices at distance ≤ r from `v`, with local
/// indices in BFS discovery order (root first) and a map back to the
/// original vertex ids.
pub struct ExtractedBall {
    pub colors: Vec<u16>,
    pub adj: Vec<Vec<usize>>,
    pub to_global: Vec<usize>,
    pub edge_count: usize,
}

pub fn extract_ball_subgraph(g: &ColoredGraph, v: usize, r: usize) -> ExtractedBall {
    let n = g.vertex_count();
    debug_assert!(v < n);
    let mut local = vec![usize::MAX; n];
    let mut to_global = vec![v];
    local[v] = 0;
    let mut dist = vec![0usize; 1];
    let mut head = 0;
    while head < to_global.len() {
        let u = to_global[head];
        let du = dist[head];
        head += 1;
        if du == r {
            continue;
        }
        for &w in g.neighbors(u) {
            let w = w as usize;
            if local[w] == usize::MAX {
                local[w] = to_global.len();
                to_global.push(w);
                dist.push(du + 1);
            }
        }
    }
    let m = to_global.len();
    let mut adj = vec![Vec::new(); m];
    let mut edge_count = 0;
    for (i, &u) in to_global.iter().enumerate() {
        for &w in g.neighbors(u) {
            let lw = local[w as usize];
            if lw != usize::MAX {
                adj[i].push(lw);
                if lw > i {
                    edge_count += 1;
                }
            }
        }
        adj[i].sort_unstable();
    }
    let colors = to_global.iter().map(|&u| g.color(u)).collect();
    ExtractedBall { colors, adj, to_global, edge_count }
}

/// Canonical type of the radius-r ball of `G` around `v`.
pub fn extract_ball(g: &ColoredGraph, v: usize, r: usize) -> Result<BallType> {
    let ball = extract_ball_subgraph(g, v, r);
    canonical_rooted(&ball.colors, &ball.adj)
}

/// Canonical tree type of the radius-r ball around `v`; errors if the ball
/// contains a cycle.
pub fn extract_tree_ball(g: &ColoredGraph, v: usize, r: usize) -> Result<TreeType> {
    let ball = extract_ball_subgraph(g, v, r);
    if ball.edge_count != ball.colors.len() - 1 {
        return Err(Error::validation(format!(
            "the {r}-ball around vertex {v} contains a cycle"
        )));
    }
    Ok(tree_ball_encoding_pub(&ball.colors, &ball.adj, 0, r))
}

/// Root-preserving canonical form of a connected rooted colored graph
/// given by local adjacency lists (root = index 0).
pub fn canonical_rooted(colors: &[u16], adj: &[Vec<usize>]) -> Result<BallType> {
    let n = colors.len();
    let m: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    if m == n - 1 {
        return Ok(BallType::Tree(tree_ball_encoding_pub(colors, adj, 0, n)));
    }

    let dist = bfs_distances(adj, 0);
    // Initial partition by the root-preserving invariant.
    let mut order: Vec<usize> = (0..n).collect();
    let key = |v: usize| (dist[v].unwrap_or(usize::MAX), colors[v], adj[v].len());
    order.sort_by_key(|&v| key(v));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for v in order {
        match cells.last_mut() {
            Some(cell) if key(cell[0]) == key(v) => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }

    let mut best: Option<(Vec<u16>, Vec<(u32, u32)>)> = None;
    let mut leaves = 0usize;
    search_canonical(colors, adj, cells, &mut best, &mut leaves)?;
    let (c, e) = best.expect("canonical search yields at least one labeling");
    Ok(BallType::Cyclic(CanonGraph { colors: c, edges: e }))
}

fn refine(adj: &[Vec<usize>], mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let n = adj.len();
    loop {
        let mut cell_of = vec![0usize; n];
        for (i, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = i;
            }
        }
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
        let mut changed = false;
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            // split by the multiset of neighbor cells
            let mut sigs: Vec<(Vec<usize>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut s: Vec<usize> = adj[v].iter().map(|&w| cell_of[w]).collect();
                    s.sort_unstable();
                    (s, v)
                })
                .collect();
            sigs.sort();
            let mut start = 0;
            for i in 1..=sigs.len() {
                if i == sigs.len() || sigs[i].0 != sigs[start].0 {
                    let mut group: Vec<usize> = sigs[start..i].iter().map(|&(_, v)| v).collect();
                    group.sort_unstable();
                    if group.len() != cell.len() {
                        changed = true;
                    }
                    next.push(group);
                    start = i;
                }
            }
        }
        cells = next;
        if !changed {
            return cells;
        }
    }
}

fn search_canonical(
    colors: &[u16],
    adj: &[Vec<usize>],
    cells: Vec<Vec<usize>>,
    best: &mut Option<(Vec<u16>, Vec<(u32, u32)>)>,
    leaves: &mut usize,
) -> Result<()> {
    let cells = refine(adj, cells);
    if let Some(idx) = cells.iter().position(|c| c.len() > 1) {
        for pick in 0..cells[idx].len() {
            let mut next = Vec::with_capacity(cells.len() + 1);
            for (i, cell) in cells.iter().enumerate() {
                if i == idx {
                    let v = cells[idx][pick];
                    next.push(vec![v]);
                    let rest: Vec<usize> = cell.iter().copied().filter(|&w| w != v).collect();
                    next.push(rest);
                } else {
                    next.push(cell.clone());
                }
            }
            search_canonical(colors, adj, next, best, leaves)?;
        }
        return Ok(());
    }

    *leaves += 1;
    if *leaves > SEARCH_LEAF_CAP {
        return Err(Error::resource(format!(
            "canonical labeling search exceeded {SEARCH_LEAF_CAP} leaves"
        )));
    }
    let n = colors.len();
    let mut label = vec![0usize; n];
    for (new, cell) in cells.iter().enumerate() {
        label[cell[0]] = new;
    }
    let mut out_colors = vec![0u16; n];
    for v in 0..n {
        out_colors[label[v]] = colors[v];
    }
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for v in 0..n {
        for &w in &adj[v] {
            if v < w {
                let (a, b) = (label[v] as u32, label[w] as u32);
                edges.push(if a < b { (a, b) } else { (b, a) });
            }
        }
    }
    edges.sort_unstable();
    let cand = (out_colors, edges);
    match best {
        Some(b) if *b <= cand => {}
        _ => *best = Some(cand),
    }
    Ok(())
}

/// All images of vertex `z` of the pattern under root-preserving
/// isomorphisms pattern → target. Both graphs are rooted at local index 0.
/// Returns the empty set when no isomorphism exists.
pub fn root_iso_images(
    pat_colors: &[u16],
    pat_adj: &[Vec<usize>],
    tgt_colors: &[u16],
    tgt_adj: &[Vec<usize>],
    z: usize,
) -> Result<Vec<usize>> {
    let n = pat_colors.len();
    if n != tgt_colors.len() {
        return Ok(Vec::new());
    }
    // Match pattern vertices in BFS order so each new vertex (except the
    // root) has an already-matched neighbor to anchor its candidates.
    let dist = bfs_distances(pat_adj, 0);
    if dist.iter().any(Option::is_none) {
        return Err(Error::validation("pattern ball is not connected".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (dist[v], v));

    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut images: Vec<usize> = Vec::new();
    let mut nodes = 0usize;
    backtrack_iso(
        &order,
        0,
        pat_colors,
        pat_adj,
        tgt_colors,
        tgt_adj,
        &mut mapping,
        &mut used,
        z,
        &mut images,
        &mut nodes,
    )?;
    images.sort_unstable();
    images.dedup();
    Ok(images)
}

#[allow(clippy::too_many_arguments)]
fn backtrack_iso(
    order: &[usize],
    pos: usize,
    pc: &[u16],
    pa: &[Vec<usize>],
    tc: &[u16],
    ta: &[Vec<usize>],
    mapping: &mut Vec<usize>,
    used: &mut Vec<bool>,
    z: usize,
    images: &mut Vec<usize>,
    nodes: &mut usize,
) -> Result<()> {
    *nodes += 1;
    if *nodes > SEARCH_LEAF_CAP {
        return Err(Error::resource(
            "isomorphism enumeration exceeded the search cap".into(),
        ));
    }
    if pos == order.len() {
        images.push(mapping[z]);
        return Ok(());
    }
    let u = order[pos];
    let candidates: Vec<usize> = if u == 0 {
        vec![0]
    } else {
        // anchor on a matched neighbor
        let anchor = pa[u]
            .iter()
            .copied()
            .find(|&w| mapping[w] != usize::MAX)
            .expect("BFS order guarantees a matched neighbor");
        ta[mapping[anchor]].iter().copied().filter(|&w| !used[w]).collect()
    };
    for cand in candidates {
        if used[cand] || tc[cand] != pc[u] || ta[cand].len() != pa[u].len() {
            continue;
        }
        // adjacency consistency with everything matched so far
        let ok = pa[u].iter().all(|&w| {
            mapping[w] == usize::MAX || ta[cand].contains(&mapping[w])
        }) && ta[cand].iter().all(|&w2| {
            // matched target neighbors must be matched by pattern neighbors
            !used[w2]
                || pa[u]
                    .iter()
                    .any(|&w| mapping[w] == w2)
        });
        if !ok {
            continue;
        }
        mapping[u] = cand;
        used[cand] = true;
        backtrack_iso(order, pos + 1, pc, pa, tc, ta, mapping, used, z, images, nodes)?;
        mapping[u] = usize::MAX;
        used[cand] = false;
    }
    Ok(())
}
