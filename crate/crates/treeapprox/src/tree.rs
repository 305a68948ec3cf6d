//! Canonical forms, enumeration, truncation and `adm` counts for rooted
//! colored tree types.
//!
//! A tree type is identified by its canonical encoding under the grammar
//!
//! ```text
//! type := color "[" type ("," type)* "]" | color "[]"
//! ```
//!
//! where `color` is a decimal integer in `1..=c` and every child list is
//! sorted ascending as byte strings. Isomorphic rooted colored trees have
//! equal encodings, so the encoding doubles as a map key and as the wire
//! form in distribution and graph files.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Parameters of a type space: maximum degree `d`, number of colors `c`,
/// radius bound `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    pub d: usize,
    pub c: usize,
    pub r: usize,
}

impl Params {
    pub fn new(d: usize, c: usize, r: usize) -> Result<Self> {
        if d < 1 {
            return Err(Error::validation("maximum degree d must be at least 1"));
        }
        if c < 1 {
            return Err(Error::validation("color count c must be at least 1"));
        }
        Ok(Params { d, c, r })
    }
}

/// A rooted colored tree given explicitly; the input representative for
/// [`canonical_tree`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub color: u16,
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    pub fn leaf(color: u16) -> Self {
        TreeNode { color, children: Vec::new() }
    }

    pub fn new(color: u16, children: Vec<TreeNode>) -> Self {
        TreeNode { color, children }
    }

    pub fn depth(&self) -> usize {
        self.children.iter().map(|ch| ch.depth() + 1).max().unwrap_or(0)
    }

    fn node_count(&self) -> usize {
        1 + self.children.iter().map(TreeNode::node_count).sum::<usize>()
    }

    fn encode_into(&self, out: &mut String) {
        let mut encs: Vec<String> = self
            .children
            .iter()
            .map(|ch| {
                let mut s = String::new();
                ch.encode_into(&mut s);
                s
            })
            .collect();
        encs.sort_unstable();
        out.push_str(&self.color.to_string());
        out.push('[');
        for (i, e) in encs.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(e);
        }
        out.push(']');
    }
}

/// Canonical isomorphism type of a rooted colored tree.
///
/// Equality, ordering and hashing go through the canonical encoding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeType {
    enc: Arc<str>,
}

impl fmt::Display for TreeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.enc)
    }
}

impl TreeType {
    /// Parse a canonical encoding. Rejects syntactically valid but
    /// non-canonical strings (unsorted child lists), so that string
    /// equality and type equality coincide for everything that parses.
    pub fn parse(s: &str) -> Result<Self> {
        let node = parse_node(s)?;
        let canon = node.to_string_canonical();
        if canon != s {
            return Err(Error::validation(format!(
                "non-canonical encoding `{s}` (canonical form is `{canon}`)"
            )));
        }
        Ok(TreeType { enc: Arc::from(s) })
    }

    pub(crate) fn from_canonical_string(s: String) -> Self {
        TreeType { enc: Arc::from(s.as_str()) }
    }

    pub fn encoding(&self) -> &str {
        &self.enc
    }

    pub fn to_node(&self) -> TreeNode {
        // Canonical encodings always reparse.
        parse_node(&self.enc).expect("canonical encoding reparses")
    }

    pub fn root_color(&self) -> u16 {
        let bytes = self.enc.as_bytes();
        let mut i = 0;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        self.enc[..i].parse().expect("canonical encoding starts with a color")
    }

    pub fn root_degree(&self) -> usize {
        self.to_node().children.len()
    }

    pub fn depth(&self) -> usize {
        self.to_node().depth()
    }

    pub fn node_count(&self) -> usize {
        self.to_node().node_count()
    }

    /// Check membership in the type space `params`: depth at most `r`,
    /// root degree at most `d`, total degree of inner nodes at most `d`,
    /// colors in `1..=c`.
    pub fn check_fits(&self, params: Params) -> Result<()> {
        let node = self.to_node();
        if node.depth() > params.r {
            return Err(Error::validation(format!(
                "type `{}` has depth {} exceeding radius bound {}",
                self.enc,
                node.depth(),
                params.r
            )));
        }
        if node.children.len() > params.d {
            return Err(Error::validation(format!(
                "type `{}` has root degree {} exceeding d={}",
                self.enc,
                node.children.len(),
                params.d
            )));
        }
        check_inner(&node, params, true).map_err(|msg| Error::Validation(msg))
    }

    /// The ℓ-ball of the root: drop everything below depth `level` and
    /// re-canonicalize.
    pub fn truncate(&self, level: usize) -> TreeType {
        fn cut(node: &TreeNode, level: usize) -> TreeNode {
            if level == 0 {
                TreeNode::leaf(node.color)
            } else {
                TreeNode {
                    color: node.color,
                    children: node.children.iter().map(|ch| cut(ch, level - 1)).collect(),
                }
            }
        }
        let node = cut(&self.to_node(), level);
        TreeType::from_canonical_string(node.to_string_canonical())
    }

    /// Multiset of k-ball types of the root's neighbors, computed inside
    /// this tree (the neighbor's ball includes paths back through the
    /// root). `adm(t, τ)` is the count stored under τ.
    pub fn neighbor_ball_types(&self, k: usize) -> Vec<(TreeType, usize)> {
        let (colors, adj) = self.to_adjacency();
        let mut counts: Vec<(TreeType, usize)> = Vec::new();
        for &y in &adj[0] {
            let enc = tree_ball_encoding(&colors, &adj, y, k);
            let ty = TreeType::from_canonical_string(enc);
            match counts.iter_mut().find(|(t, _)| *t == ty) {
                Some((_, n)) => *n += 1,
                None => counts.push((ty, 1)),
            }
        }
        counts.sort_by(|a, b| a.0.cmp(&b.0));
        counts
    }

    /// Adjacency-list view of the canonical representative; vertex 0 is
    /// the root, children in canonical order, DFS preorder indices.
    pub fn to_adjacency(&self) -> (Vec<u16>, Vec<Vec<usize>>) {
        fn walk(node: &TreeNode, parent: Option<usize>, colors: &mut Vec<u16>, adj: &mut Vec<Vec<usize>>) -> usize {
            let id = colors.len();
            colors.push(node.color);
            adj.push(Vec::new());
            if let Some(p) = parent {
                adj[p].push(id);
                adj[id].push(p);
            }
            for ch in &node.children {
                walk(ch, Some(id), colors, adj);
            }
            id
        }
        let node = self.to_node();
        let mut colors = Vec::new();
        let mut adj = Vec::new();
        walk(&node, None, &mut colors, &mut adj);
        (colors, adj)
    }
}

impl TreeNode {
    fn to_string_canonical(&self) -> String {
        let mut s = String::new();
        self.encode_into(&mut s);
        s
    }
}

fn check_inner(node: &TreeNode, params: Params, is_root: bool) -> std::result::Result<(), String> {
    if node.color < 1 || node.color as usize > params.c {
        return Err(format!("color {} out of range 1..={}", node.color, params.c));
    }
    let max_children = if is_root { params.d } else { params.d.saturating_sub(1) };
    if node.children.len() > max_children {
        return Err(format!(
            "node of color {} has {} children, exceeding the degree bound d={}",
            node.color,
            node.children.len(),
            params.d
        ));
    }
    for ch in &node.children {
        check_inner(ch, params, false)?;
    }
    Ok(())
}

/// Canonicalize an explicitly given rooted colored tree, validating it
/// against `params` (degree, depth and color bounds).
pub fn canonical_tree(tree: &TreeNode, params: Params) -> Result<TreeType> {
    if tree.depth() > params.r {
        return Err(Error::validation(format!(
            "tree depth {} exceeds radius bound {}",
            tree.depth(),
            params.r
        )));
    }
    check_inner(tree, params, true).map_err(Error::Validation)?;
    Ok(TreeType::from_canonical_string(tree.to_string_canonical()))
}

/// adm(t, τ): the number of neighbors of the root of `t` whose k-ball
/// inside `t` has type `τ`. Requires depth(t) ≤ k+1 and depth(τ) ≤ k.
pub fn adm(t: &TreeType, tau: &TreeType, k: usize) -> Result<usize> {
    if t.depth() > k + 1 {
        return Err(Error::validation(format!(
            "adm radius mismatch: depth({t}) = {} exceeds k+1 = {}",
            t.depth(),
            k + 1
        )));
    }
    if tau.depth() > k {
        return Err(Error::validation(format!(
            "adm radius mismatch: depth({tau}) = {} exceeds k = {k}",
            tau.depth()
        )));
    }
    Ok(t.neighbor_ball_types(k)
        .into_iter()
        .find(|(ty, _)| ty == tau)
        .map(|(_, n)| n)
        .unwrap_or(0))
}

/// Same as [`tree_ball_encoding`] but wrapped as a [`TreeType`].
pub(crate) fn tree_ball_encoding_pub(
    colors: &[u16],
    adj: &[Vec<usize>],
    root: usize,
    radius: usize,
) -> TreeType {
    TreeType::from_canonical_string(tree_ball_encoding(colors, adj, root, radius))
}

/// Canonical encoding of the radius-`radius` ball around `root` in a tree
/// given by adjacency lists. The ball of a tree vertex is again a tree,
/// rooted at that vertex.
pub(crate) fn tree_ball_encoding(colors: &[u16], adj: &[Vec<usize>], root: usize, radius: usize) -> String {
    fn rec(colors: &[u16], adj: &[Vec<usize>], v: usize, parent: Option<usize>, left: usize) -> String {
        let mut encs: Vec<String> = if left == 0 {
            Vec::new()
        } else {
            adj[v]
                .iter()
                .filter(|&&w| Some(w) != parent)
                .map(|&w| rec(colors, adj, w, Some(v), left - 1))
                .collect()
        };
        encs.sort_unstable();
        let mut s = colors[v].to_string();
        s.push('[');
        s.push_str(&encs.join(","));
        s.push(']');
        s
    }
    rec(colors, adj, root, None, radius)
}

fn parse_node(s: &str) -> Result<TreeNode> {
    let bytes = s.as_bytes();
    let (node, end) = parse_at(bytes, 0, s)?;
    if end != bytes.len() {
        return Err(Error::validation(format!(
            "trailing input after position {end} in encoding `{s}`"
        )));
    }
    Ok(node)
}

fn parse_at(bytes: &[u8], mut pos: usize, full: &str) -> Result<(TreeNode, usize)> {
    let start = pos;
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        pos += 1;
    }
    if pos == start {
        return Err(Error::validation(format!(
            "expected color at position {start} in encoding `{full}`"
        )));
    }
    let color: u32 = full[start..pos]
        .parse()
        .map_err(|_| Error::validation(format!("color overflow in encoding `{full}`")))?;
    if color == 0 || color > u16::MAX as u32 {
        return Err(Error::validation(format!("color {color} out of range in `{full}`")));
    }
    if pos >= bytes.len() || bytes[pos] != b'[' {
        return Err(Error::validation(format!(
            "expected '[' at position {pos} in encoding `{full}`"
        )));
    }
    pos += 1;
    let mut children = Vec::new();
    if pos < bytes.len() && bytes[pos] == b']' {
        return Ok((TreeNode { color: color as u16, children }, pos + 1));
    }
    loop {
        let (child, next) = parse_at(bytes, pos, full)?;
        children.push(child);
        pos = next;
        match bytes.get(pos) {
            Some(b',') => pos += 1,
            Some(b']') => return Ok((TreeNode { color: color as u16, children }, pos + 1)),
            _ => {
                return Err(Error::validation(format!(
                    "expected ',' or ']' at position {pos} in encoding `{full}`"
                )))
            }
        }
    }
}

/// Enumerate 𝒯ᵣ — every canonical tree type with depth ≤ r, degree ≤ d and
/// colors in 1..=c — in ascending encoding order. Errors out once more
/// than `cap` types (at any level of the recursion) would be produced.
pub fn enumerate_tree_types(params: Params, cap: usize) -> Result<Vec<TreeType>> {
    let leaf_encs: Vec<String> = (1..=params.c).map(|col| format!("{col}[]")).collect();
    if leaf_encs.len() > cap {
        return Err(Error::resource(format!(
            "|T_0| = {} exceeds enumeration cap {cap}",
            leaf_encs.len()
        )));
    }
    if params.r == 0 {
        let mut out: Vec<TreeType> = leaf_encs.into_iter().map(TreeType::from_canonical_string).collect();
        out.sort();
        return Ok(out);
    }

    // subtrees[ℓ] = encodings of depth-≤ℓ subtrees hanging below the root
    // (at most d−1 children each).
    let mut level: Vec<String> = leaf_encs;
    level.sort_unstable();
    for _ in 1..params.r {
        level = expand_level(&level, params.c, params.d.saturating_sub(1), cap)?;
    }
    let roots = expand_level(&level, params.c, params.d, cap)?;
    Ok(roots.into_iter().map(TreeType::from_canonical_string).collect())
}

/// All encodings `color[m]` where `m` ranges over multisets of at most
/// `max_children` elements of `children` (given sorted). Output sorted.
fn expand_level(children: &[String], c: usize, max_children: usize, cap: usize) -> Result<Vec<String>> {
    let mut combos: Vec<String> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    // Non-decreasing index sequences of length 0..=max_children.
    fn rec(children: &[String], stack: &mut Vec<usize>, max: usize, out: &mut Vec<String>, cap: usize) -> Result<()> {
        let joined = stack.iter().map(|&i| children[i].as_str()).collect::<Vec<_>>().join(",");
        out.push(joined);
        if out.len() > cap {
            return Err(Error::resource(format!("enumeration exceeds cap {cap}")));
        }
        if stack.len() == max {
            return Ok(());
        }
        let lo = stack.last().copied().unwrap_or(0);
        for i in lo..children.len() {
            stack.push(i);
            rec(children, stack, max, out, cap)?;
            stack.pop();
        }
        Ok(())
    }
    rec(children, &mut stack, max_children, &mut combos, cap.max(1))?;
    let mut out = Vec::with_capacity(combos.len() * c);
    for col in 1..=c {
        for m in &combos {
            out.push(format!("{col}[{m}]"));
            if out.len() > cap {
                return Err(Error::resource(format!("enumeration exceeds cap {cap}")));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// |𝒯ᵣ^{d,c}| computed by the multiset recurrence, without materializing
/// the types. Agrees with `enumerate_tree_types(..).len()` wherever the
/// latter fits in memory; stays exact far beyond it.
pub fn tree_type_count(params: Params) -> BigUint {
    let c = BigUint::from(params.c);
    if params.r == 0 {
        return c;
    }
    let mut level = c.clone(); // |S_0|
    for _ in 1..params.r {
        level = &c * multiset_count(&level, params.d.saturating_sub(1));
    }
    &c * multiset_count(&level, params.d)
}

/// Σ_{j=0}^{max} C(m+j−1, j): multisets of size at most `max` from `m`
/// elements.
fn multiset_count(m: &BigUint, max: usize) -> BigUint {
    let mut total = BigUint::zero();
    for j in 0..=max {
        total += binomial_multichoose(m, j);
    }
    total
}

fn binomial_multichoose(m: &BigUint, j: usize) -> BigUint {
    // C(m+j-1, j)
    if j == 0 {
        return BigUint::one();
    }
    if m.is_zero() {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    for i in 0..j {
        num *= m + BigUint::from(i);
    }
    let mut den = BigUint::one();
    for i in 1..=j {
        den *= BigUint::from(i);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn t(s: &str) -> TreeType {
        TreeType::parse(s).unwrap()
    }

    #[test]
    fn single_vertex_encoding() {
        let ty = canonical_tree(&TreeNode::leaf(1), Params::new(2, 1, 0).unwrap()).unwrap();
        assert_eq!(ty.encoding(), "1[]");
    }

    #[test]
    fn children_sorted_regardless_of_input_order() {
        let tree = TreeNode::new(1, vec![TreeNode::leaf(3), TreeNode::leaf(2)]);
        let ty = canonical_tree(&tree, Params::new(3, 3, 1).unwrap()).unwrap();
        assert_eq!(ty.encoding(), "1[2[],3[]]");
    }

    #[test]
    fn parse_rejects_non_canonical() {
        assert!(TreeType::parse("1[3[],2[]]").is_err());
        assert!(TreeType::parse("1[2[],3[]]").is_ok());
        assert!(TreeType::parse("0[]").is_err());
        assert!(TreeType::parse("1[").is_err());
        assert!(TreeType::parse("1[]x").is_err());
    }

    fn random_tree(rng: &mut ChaCha8Rng, depth: usize, max_children: usize, c: u16) -> TreeNode {
        let color = rng.gen_range(1..=c);
        let n = if depth == 0 { 0 } else { rng.gen_range(0..=max_children) };
        TreeNode {
            color,
            children: (0..n).map(|_| random_tree(rng, depth - 1, max_children, c)).collect(),
        }
    }

    fn shuffled_copy(rng: &mut ChaCha8Rng, node: &TreeNode) -> TreeNode {
        let mut children: Vec<TreeNode> = node.children.iter().map(|ch| shuffled_copy(rng, ch)).collect();
        children.shuffle(rng);
        TreeNode { color: node.color, children }
    }

    #[test]
    fn isomorphic_representatives_share_encoding() {
        let params = Params::new(4, 3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let tree = random_tree(&mut rng, 4, 3, 3);
            let other = shuffled_copy(&mut rng, &tree);
            let a = canonical_tree(&tree, params).unwrap();
            let b = canonical_tree(&other, params).unwrap();
            assert_eq!(a, b);
        }
    }

    /// Brute-force root- and color-preserving isomorphism, independent of
    /// the encoding: recursive matching over child permutations.
    fn iso_oracle(a: &TreeNode, b: &TreeNode) -> bool {
        if a.color != b.color || a.children.len() != b.children.len() {
            return false;
        }
        fn matching(xs: &[TreeNode], ys: &[TreeNode], used: &mut Vec<bool>, i: usize) -> bool {
            if i == xs.len() {
                return true;
            }
            for j in 0..ys.len() {
                if !used[j] && iso_oracle(&xs[i], &ys[j]) {
                    used[j] = true;
                    if matching(xs, ys, used, i + 1) {
                        return true;
                    }
                    used[j] = false;
                }
            }
            false
        }
        matching(&a.children, &b.children, &mut vec![false; b.children.len()], 0)
    }

    #[test]
    fn encoding_equality_matches_iso_oracle() {
        let params = Params::new(4, 2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut agree_eq = 0;
        for _ in 0..400 {
            let a = random_tree(&mut rng, 3, 3, 2);
            let b = random_tree(&mut rng, 3, 3, 2);
            let ea = canonical_tree(&a, params).unwrap();
            let eb = canonical_tree(&b, params).unwrap();
            assert_eq!(ea == eb, iso_oracle(&a, &b));
            if ea == eb {
                agree_eq += 1;
            }
        }
        // Random collisions do happen for shallow trees; make sure the
        // positive branch of the equivalence was exercised.
        let a = random_tree(&mut rng, 3, 3, 2);
        let b = shuffled_copy(&mut rng, &a);
        assert!(iso_oracle(&a, &b));
        assert_eq!(
            canonical_tree(&a, params).unwrap(),
            canonical_tree(&b, params).unwrap()
        );
        let _ = agree_eq;
    }

    #[test]
    fn enumerate_d2_c1_r1() {
        let types = enumerate_tree_types(Params::new(2, 1, 1).unwrap(), 1000).unwrap();
        let encs: Vec<&str> = types.iter().map(|t| t.encoding()).collect();
        assert_eq!(encs, vec!["1[1[],1[]]", "1[1[]]", "1[]"]);
    }

    /// Independent enumeration oracle: all parent arrays over ≤ max_n
    /// vertices, all colorings, filtered by the bounds, deduplicated by
    /// the brute-force isomorphism test.
    fn enumerate_oracle(params: Params, max_n: usize) -> Vec<TreeNode> {
        fn build(parents: &[usize], colors: &[u16]) -> TreeNode {
            fn make(v: usize, parents: &[usize], colors: &[u16]) -> TreeNode {
                let children = (1..parents.len())
                    .filter(|&w| parents[w] == v)
                    .map(|w| make(w, parents, colors))
                    .collect();
                TreeNode { color: colors[v], children }
            }
            make(0, parents, colors)
        }
        let mut reps: Vec<TreeNode> = Vec::new();
        for n in 1..=max_n {
            let mut parents = vec![0usize; n];
            loop {
                let mut colors = vec![1u16; n];
                loop {
                    let tree = build(&parents, &colors);
                    let ok = tree.depth() <= params.r
                        && check_inner(&tree, params, true).is_ok();
                    if ok && !reps.iter().any(|r| iso_oracle(r, &tree)) {
                        reps.push(tree);
                    }
                    // next coloring
                    let mut i = 0;
                    while i < n {
                        if (colors[i] as usize) < params.c {
                            colors[i] += 1;
                            break;
                        }
                        colors[i] = 1;
                        i += 1;
                    }
                    if i == n {
                        break;
                    }
                }
                // next parent array: parents[i] ranges over 0..i
                let mut i = n.saturating_sub(1);
                loop {
                    if i == 0 {
                        break;
                    }
                    if parents[i] + 1 < i {
                        parents[i] += 1;
                        for j in i + 1..n {
                            parents[j] = 0;
                        }
                        break;
                    }
                    parents[i] = 0;
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
            }
        }
        reps
    }

    #[test]
    fn enumerate_matches_oracle_counts() {
        // (d=2,c=1,r=2): oracle over ≤5 vertices (the largest such type).
        let p = Params::new(2, 1, 2).unwrap();
        let oracle = enumerate_oracle(p, 5);
        assert_eq!(oracle.len(), 6);
        assert_eq!(enumerate_tree_types(p, 1000).unwrap().len(), 6);

        let p = Params::new(2, 2, 1).unwrap();
        let oracle = enumerate_oracle(p, 3);
        assert_eq!(enumerate_tree_types(p, 1000).unwrap().len(), oracle.len());

        let p = Params::new(3, 1, 2).unwrap();
        let oracle = enumerate_oracle(p, 10);
        assert_eq!(enumerate_tree_types(p, 1000).unwrap().len(), oracle.len());
    }

    #[test]
    fn enumerate_degree_one() {
        let types = enumerate_tree_types(Params::new(1, 1, 5).unwrap(), 1000).unwrap();
        let encs: Vec<&str> = types.iter().map(|t| t.encoding()).collect();
        assert_eq!(encs, vec!["1[1[]]", "1[]"]);
    }

    #[test]
    fn enumerate_cap_errors() {
        let err = enumerate_tree_types(Params::new(3, 3, 3).unwrap(), 100).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }

    #[test]
    fn counts_match_enumeration() {
        for (d, c, r) in [(2, 1, 1), (2, 1, 2), (2, 2, 1), (3, 2, 2), (3, 1, 3), (1, 4, 2), (4, 2, 2)] {
            let p = Params::new(d, c, r).unwrap();
            let enumerated = enumerate_tree_types(p, 2_000_000).unwrap();
            assert_eq!(
                tree_type_count(p),
                BigUint::from(enumerated.len()),
                "count mismatch for d={d} c={c} r={r}"
            );
            // enumeration yields no duplicates
            let mut uniq = enumerated.clone();
            uniq.dedup();
            assert_eq!(uniq.len(), enumerated.len());
        }
    }

    #[test]
    fn threshold_example_counts() {
        assert_eq!(tree_type_count(Params::new(2, 2, 0).unwrap()), BigUint::from(2u32));
        assert_eq!(tree_type_count(Params::new(2, 2, 1).unwrap()), BigUint::from(12u32));
    }

    #[test]
    fn truncate_examples() {
        assert_eq!(t("1[1[1[]]]").truncate(1), t("1[1[]]"));
        let deep = t("1[1[1[]]]");
        assert_eq!(deep.truncate(5), deep);
        assert_eq!(t("1[2[3[]],2[]]").truncate(1), t("1[2[],2[]]"));
    }

    #[test]
    fn truncation_coherence_exhaustive() {
        // truncate(truncate(t,ℓ),ℓ') = truncate(t,ℓ') for ℓ' ≤ ℓ, checked
        // over all of 𝒯₃^{2,2} and 𝒯₂^{3,2}, plus random deep d=3,c=2 trees.
        let spaces = [Params::new(2, 2, 3).unwrap(), Params::new(3, 2, 2).unwrap()];
        for p in spaces {
            for ty in enumerate_tree_types(p, 10_000).unwrap() {
                for l in 0..=3usize {
                    for l2 in 0..=l {
                        assert_eq!(ty.truncate(l).truncate(l2), ty.truncate(l2));
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let params = Params::new(3, 2, 3).unwrap();
        for _ in 0..500 {
            let ty = canonical_tree(&random_tree(&mut rng, 3, 2, 2), params).unwrap();
            for l in 0..=3usize {
                for l2 in 0..=l {
                    assert_eq!(ty.truncate(l).truncate(l2), ty.truncate(l2));
                }
            }
        }
    }

    #[test]
    fn adm_examples() {
        assert_eq!(adm(&t("1[2[]]"), &t("2[]"), 0).unwrap(), 1);
        // the neighbor's 1-ball reaches back through the root
        assert_eq!(adm(&t("1[2[3[]]]"), &t("2[1[],3[]]"), 1).unwrap(), 1);
        assert_eq!(adm(&t("1[2[3[]]]"), &t("2[3[]]"), 1).unwrap(), 0);
        assert_eq!(adm(&t("1[1[],1[]]"), &t("1[]"), 0).unwrap(), 2);
    }

    #[test]
    fn adm_radius_mismatch() {
        assert!(adm(&t("1[1[1[]]]"), &t("1[]"), 0).is_err());
        assert!(adm(&t("1[1[]]"), &t("1[1[]]"), 0).is_err());
    }

    #[test]
    fn adm_row_sums_equal_root_degree() {
        // Σ_τ adm(t,τ) = deg(root) over all of 𝒯₂^{3,2} (k=1).
        let p = Params::new(3, 2, 2).unwrap();
        for ty in enumerate_tree_types(p, 10_000).unwrap() {
            let total: usize = ty.neighbor_ball_types(1).iter().map(|(_, n)| n).sum();
            assert_eq!(total, ty.root_degree(), "row sum mismatch for {ty}");
        }
    }

    #[test]
    fn canonical_idempotence() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let params = Params::new(4, 3, 4).unwrap();
        for _ in 0..100 {
            let ty = canonical_tree(&random_tree(&mut rng, 4, 3, 3), params).unwrap();
            let re = canonical_tree(&ty.to_node(), params).unwrap();
            assert_eq!(ty, re);
            assert_eq!(TreeType::parse(ty.encoding()).unwrap(), ty);
        }
    }

    #[test]
    fn degree_and_depth_violations_error() {
        let star = TreeNode::new(1, vec![TreeNode::leaf(1), TreeNode::leaf(1), TreeNode::leaf(1)]);
        assert!(canonical_tree(&star, Params::new(2, 1, 1).unwrap()).is_err());
        let chain = TreeNode::new(1, vec![TreeNode::new(1, vec![TreeNode::leaf(1)])]);
        assert!(canonical_tree(&chain, Params::new(2, 1, 1).unwrap()).is_err());
        // inner node with d-1 children is fine, with d is not
        let inner = TreeNode::new(1, vec![TreeNode::new(1, vec![TreeNode::leaf(1), TreeNode::leaf(1)])]);
        assert!(canonical_tree(&inner, Params::new(2, 1, 2).unwrap()).is_err());
        assert!(canonical_tree(&inner, Params::new(3, 1, 2).unwrap()).is_ok());
    }
}
