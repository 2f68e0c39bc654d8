//! Generalized suffix tree over a pair of sequences, built online with
//! Ukkonen's algorithm.
//!
//! The indexed text is `S1 $1 S2 $2`. Both separators, and every `N` in
//! either sequence, are encoded as symbols that occur exactly once, so no
//! path through the tree can match across a separator or through an `N`.
//! Edge labels are stored as coordinates into the joined text.

use std::fmt;
use std::ops::Range;

use crate::seqio::residues_match;

/// Which stage produced a match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatchKind {
    Mmss,
    Adaptive,
    /// Exact seed found by the perfect-seed pass with this k-mer size.
    Perfect(u8),
}

impl fmt::Display for MatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchKind::Mmss => f.write_str("MMSS"),
            MatchKind::Adaptive => f.write_str("ADAPTIVE"),
            MatchKind::Perfect(k) => write!(f, "PERFECT{k}"),
        }
    }
}

/// A gap-free pairing of `S1[pos1..pos1+length]` with `S2[pos2..pos2+length]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Match {
    pub pos1: usize,
    pub pos2: usize,
    pub length: usize,
    /// Hamming distance between the two slices (`N` never matches).
    pub mismatches: usize,
    pub kind: MatchKind,
}

impl Match {
    pub fn exact(pos1: usize, pos2: usize, length: usize, kind: MatchKind) -> Self {
        Self {
            pos1,
            pos2,
            length,
            mismatches: 0,
            kind,
        }
    }

    pub fn end1(&self) -> usize {
        self.pos1 + self.length
    }

    pub fn end2(&self) -> usize {
        self.pos2 + self.length
    }

    pub fn diagonal(&self) -> i64 {
        self.pos2 as i64 - self.pos1 as i64
    }

    /// True when `self` lies entirely before `other` in both sequences.
    pub fn precedes(&self, other: &Match) -> bool {
        self.end1() <= other.pos1 && self.end2() <= other.pos2
    }

    pub fn triple(&self) -> (usize, usize, usize) {
        (self.pos1, self.pos2, self.length)
    }
}

/// Hamming distance between two equal-length slices, counting `N` as a
/// mismatch against everything.
pub fn hamming(a: &[u8], b: &[u8]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| !residues_match(**x, **y)).count()
}

/// Which input a text position belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    First,
    Second,
}

/// An occurrence reported by [`GeneralizedSuffixTree::descend_with_mismatches`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hit {
    pub origin: Origin,
    pub pos: usize,
    pub mismatches: usize,
}

pub type NodeId = u32;

const NIL: u32 = u32::MAX;
const OPEN_END: u32 = u32::MAX;
const ROOT: NodeId = 0;

/// Symbol codes in the joined text.
pub const SEP1: u32 = 4;
pub const SEP2: u32 = 5;
const FIRST_UNIQUE: u32 = 6;
/// Query-side code for `N`; never equal to any text symbol.
const QUERY_WILDCARD: u32 = u32::MAX - 1;

fn base_code(b: u8) -> Option<u32> {
    match b {
        b'A' => Some(0),
        b'C' => Some(1),
        b'G' => Some(2),
        b'T' => Some(3),
        _ => None,
    }
}

/// Options for [`GeneralizedSuffixTree::enumerate_mmss`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MmssQuery {
    pub min_len: usize,
    /// Keep only matches whose string occurs exactly once in each sequence.
    pub unique_only: bool,
}

impl Default for MmssQuery {
    fn default() -> Self {
        Self {
            min_len: 1,
            unique_only: false,
        }
    }
}

pub struct GeneralizedSuffixTree {
    text: Vec<u32>,
    len1: usize,
    len2: usize,
    start: Vec<u32>,
    end: Vec<u32>,
    link: Vec<u32>,
    depth: Vec<u32>,
    /// Children keyed by A, C, G, T.
    base_child: Vec<[u32; 4]>,
    /// Head of the list of children whose edge starts with a unique symbol.
    unique_head: Vec<u32>,
    next_sibling: Vec<u32>,
    /// Suffix start for leaves, `NIL` for internal nodes.
    suffix: Vec<u32>,
}

impl fmt::Debug for GeneralizedSuffixTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneralizedSuffixTree")
            .field("len1", &self.len1)
            .field("len2", &self.len2)
            .field("nodes", &self.node_count())
            .finish()
    }
}

struct Builder {
    tree: GeneralizedSuffixTree,
    active_node: NodeId,
    active_edge: usize,
    active_len: usize,
    remainder: usize,
    need_link: u32,
}

impl Builder {
    fn add_link(&mut self, node: NodeId) {
        if self.need_link != NIL {
            self.tree.link[self.need_link as usize] = node;
        }
        self.need_link = node;
    }

    fn extend(&mut self, pos: usize) {
        let c = self.tree.text[pos];
        self.need_link = NIL;
        self.remainder += 1;
        while self.remainder > 0 {
            if self.active_len == 0 {
                self.active_edge = pos;
            }
            let key = self.tree.text[self.active_edge];
            match self.tree.child(self.active_node, key) {
                None => {
                    let leaf = self.tree.new_node(pos as u32, OPEN_END, (pos + 1 - self.remainder) as u32);
                    self.tree.attach(self.active_node, key, leaf);
                    self.add_link(self.active_node);
                }
                Some(next) => {
                    let edge_len = self.tree.edge_len_at(next, pos);
                    if self.active_len >= edge_len {
                        self.active_edge += edge_len;
                        self.active_len -= edge_len;
                        self.active_node = next;
                        continue;
                    }
                    let next_start = self.tree.start[next as usize] as usize;
                    if self.tree.text[next_start + self.active_len] == c {
                        self.active_len += 1;
                        self.add_link(self.active_node);
                        break;
                    }
                    let split_at = next_start + self.active_len;
                    let split = self.tree.new_node(next_start as u32, split_at as u32, NIL);
                    self.tree.replace_child(self.active_node, key, next, split);
                    let leaf = self.tree.new_node(pos as u32, OPEN_END, (pos + 1 - self.remainder) as u32);
                    self.tree.attach(split, c, leaf);
                    self.tree.start[next as usize] = split_at as u32;
                    let next_key = self.tree.text[split_at];
                    self.tree.attach(split, next_key, next);
                    self.add_link(split);
                }
            }
            self.remainder -= 1;
            if self.active_node == ROOT && self.active_len > 0 {
                self.active_len -= 1;
                self.active_edge = pos + 1 - self.remainder;
            } else if self.active_node != ROOT {
                let l = self.tree.link[self.active_node as usize];
                self.active_node = if l == NIL { ROOT } else { l };
            }
        }
    }
}

impl GeneralizedSuffixTree {
    /// Builds the tree over `s1 $1 s2 $2` in time linear in the total length.
    /// Residues are expected to be normalized (`A`, `C`, `G`, `T`, `N`).
    pub fn build(s1: &[u8], s2: &[u8]) -> Self {
        let n = s1.len() + s2.len() + 2;
        assert!(n < (u32::MAX / 2) as usize, "input too large for 32-bit node indices");
        let mut text = Vec::with_capacity(n);
        let mut next_unique = FIRST_UNIQUE;
        let mut encode = |b: u8| {
            base_code(b).unwrap_or_else(|| {
                next_unique += 1;
                next_unique - 1
            })
        };
        text.extend(s1.iter().map(|&b| encode(b)));
        text.push(SEP1);
        text.extend(s2.iter().map(|&b| encode(b)));
        text.push(SEP2);

        let cap = 2 * n + 1;
        let tree = GeneralizedSuffixTree {
            text,
            len1: s1.len(),
            len2: s2.len(),
            start: Vec::with_capacity(cap),
            end: Vec::with_capacity(cap),
            link: Vec::with_capacity(cap),
            depth: Vec::new(),
            base_child: Vec::with_capacity(cap),
            unique_head: Vec::with_capacity(cap),
            next_sibling: Vec::with_capacity(cap),
            suffix: Vec::with_capacity(cap),
        };
        let mut b = Builder {
            tree,
            active_node: ROOT,
            active_edge: 0,
            active_len: 0,
            remainder: 0,
            need_link: NIL,
        };
        b.tree.new_node(0, 0, NIL);
        for pos in 0..n {
            b.extend(pos);
        }
        debug_assert_eq!(b.remainder, 0);
        let mut tree = b.tree;
        for e in tree.end.iter_mut() {
            if *e == OPEN_END {
                *e = n as u32;
            }
        }
        tree.compute_depths();
        tree
    }

    fn new_node(&mut self, start: u32, end: u32, suffix: u32) -> NodeId {
        let id = self.start.len() as NodeId;
        self.start.push(start);
        self.end.push(end);
        self.link.push(NIL);
        self.base_child.push([NIL; 4]);
        self.unique_head.push(NIL);
        self.next_sibling.push(NIL);
        self.suffix.push(suffix);
        id
    }

    fn edge_len_at(&self, node: NodeId, pos: usize) -> usize {
        let s = self.start[node as usize] as usize;
        let e = self.end[node as usize];
        let e = if e == OPEN_END { pos + 1 } else { (e as usize).min(pos + 1) };
        e - s
    }

    fn child(&self, node: NodeId, key: u32) -> Option<NodeId> {
        if key < 4 {
            let c = self.base_child[node as usize][key as usize];
            (c != NIL).then_some(c)
        } else {
            let mut c = self.unique_head[node as usize];
            while c != NIL {
                if self.text[self.start[c as usize] as usize] == key {
                    return Some(c);
                }
                c = self.next_sibling[c as usize];
            }
            None
        }
    }

    fn attach(&mut self, parent: NodeId, key: u32, child: NodeId) {
        if key < 4 {
            self.base_child[parent as usize][key as usize] = child;
        } else {
            self.next_sibling[child as usize] = self.unique_head[parent as usize];
            self.unique_head[parent as usize] = child;
        }
    }

    fn replace_child(&mut self, parent: NodeId, key: u32, old: NodeId, new: NodeId) {
        if key < 4 {
            self.base_child[parent as usize][key as usize] = new;
            return;
        }
        // Edges starting with a unique symbol lead straight to leaves and are
        // never split, but keep the list consistent regardless.
        self.next_sibling[new as usize] = self.next_sibling[old as usize];
        self.next_sibling[old as usize] = NIL;
        if self.unique_head[parent as usize] == old {
            self.unique_head[parent as usize] = new;
            return;
        }
        let mut c = self.unique_head[parent as usize];
        while self.next_sibling[c as usize] != old {
            c = self.next_sibling[c as usize];
        }
        self.next_sibling[c as usize] = new;
    }

    fn compute_depths(&mut self) {
        self.depth = vec![0; self.start.len()];
        let mut stack = vec![ROOT];
        let mut kids = Vec::new();
        while let Some(v) = stack.pop() {
            kids.clear();
            kids.extend(self.children(v));
            for &c in &kids {
                self.depth[c as usize] =
                    self.depth[v as usize] + (self.end[c as usize] - self.start[c as usize]);
                stack.push(c);
            }
        }
    }

    pub fn root(&self) -> NodeId {
        ROOT
    }

    pub fn len1(&self) -> usize {
        self.len1
    }

    pub fn len2(&self) -> usize {
        self.len2
    }

    /// The joined text as symbol codes (bases 0..4, separators, unique codes).
    pub fn text(&self) -> &[u32] {
        &self.text
    }

    pub fn node_count(&self) -> usize {
        self.start.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.suffix.iter().filter(|&&s| s != NIL).count()
    }

    pub fn is_leaf(&self, node: NodeId) -> bool {
        self.suffix[node as usize] != NIL
    }

    /// Coordinates of the edge label leading into `node`.
    pub fn edge(&self, node: NodeId) -> Range<usize> {
        self.start[node as usize] as usize..self.end[node as usize] as usize
    }

    /// Length of the path label from the root to the bottom of `node`.
    pub fn string_depth(&self, node: NodeId) -> usize {
        self.depth[node as usize] as usize
    }

    pub fn suffix_link(&self, node: NodeId) -> Option<NodeId> {
        let l = self.link[node as usize];
        if self.is_leaf(node) {
            return None;
        }
        if l == NIL {
            // Unset links point at the root.
            (node != ROOT).then_some(ROOT)
        } else {
            Some(l)
        }
    }

    /// Start of the suffix a leaf spells, in joined-text coordinates.
    pub fn leaf_suffix(&self, node: NodeId) -> Option<usize> {
        let s = self.suffix[node as usize];
        (s != NIL).then_some(s as usize)
    }

    /// Maps a joined-text position to its sequence and offset; `None` for
    /// the separators.
    pub fn locate(&self, pos: usize) -> Option<(Origin, usize)> {
        if pos < self.len1 {
            Some((Origin::First, pos))
        } else if pos > self.len1 && pos <= self.len1 + self.len2 {
            Some((Origin::Second, pos - self.len1 - 1))
        } else {
            None
        }
    }

    /// Children in symbol order: bases first, then unique-symbol edges.
    pub fn children(&self, node: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let bases = self.base_child[node as usize].into_iter().filter(|&c| c != NIL);
        let mut c = self.unique_head[node as usize];
        let uniques = std::iter::from_fn(move || {
            if c == NIL {
                return None;
            }
            let out = c;
            c = self.next_sibling[c as usize];
            Some(out)
        });
        bases.chain(uniques)
    }

    fn left_class(&self, origin: Origin, pos: usize) -> usize {
        // 4 stands for "differs from everything": sequence start or N.
        if pos == 0 {
            return 4;
        }
        let joined = match origin {
            Origin::First => pos - 1,
            Origin::Second => self.len1 + pos,
        };
        let sym = self.text[joined];
        if sym < 4 {
            sym as usize
        } else {
            4
        }
    }

    /// Length of the longest common substring (which is always a maximal
    /// exact match), or 0 when the sequences share no residue.
    pub fn longest_common_length(&self) -> usize {
        let n = self.node_count();
        let mut mask = vec![0u8; n];
        let mut best = 0usize;
        for v in self.postorder() {
            let m = match self.leaf_suffix(v) {
                Some(s) => match self.locate(s) {
                    Some((Origin::First, _)) => 1,
                    Some((Origin::Second, _)) => 2,
                    None => 0,
                },
                None => self.children(v).fold(0, |acc, c| acc | mask[c as usize]),
            };
            mask[v as usize] = m;
            if m == 3 {
                best = best.max(self.string_depth(v));
            }
        }
        best
    }

    fn postorder(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.node_count());
        let mut stack = vec![ROOT];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.children(v));
        }
        order.reverse();
        order
    }

    /// Enumerates maximal exact matches between the two sequences: equal
    /// slices that cannot be extended to the left or right. Results are
    /// sorted by `(pos1, pos2)`.
    pub fn enumerate_mmss(&self, query: MmssQuery) -> Vec<Match> {
        let min_len = query.min_len.max(1);
        let mut out = Vec::new();
        // Find the topmost nodes whose string depth reaches min_len; every
        // reported pair lives entirely inside one of those subtrees.
        let mut stack = vec![ROOT];
        while let Some(v) = stack.pop() {
            if v != ROOT && self.string_depth(v) >= min_len {
                if !self.is_leaf(v) {
                    self.collect_subtree(v, query.unique_only, &mut out);
                }
            } else {
                stack.extend(self.children(v));
            }
        }
        out.sort_unstable_by_key(|m| (m.pos1, m.pos2));
        out
    }

    fn leaf_buckets(&self, leaf: NodeId) -> Buckets {
        let mut b = Buckets::default();
        let s = self.suffix[leaf as usize] as usize;
        if let Some((origin, pos)) = self.locate(s) {
            let side = match origin {
                Origin::First => 0,
                Origin::Second => 1,
            };
            b.lists[side][self.left_class(origin, pos)].push(pos as u32);
            b.count[side] = 1;
        }
        b
    }

    fn collect_subtree(&self, top: NodeId, unique_only: bool, out: &mut Vec<Match>) {
        struct Frame {
            node: NodeId,
            kids: Vec<NodeId>,
            next: usize,
            acc: Option<Buckets>,
        }
        let mut stack = vec![Frame {
            node: top,
            kids: self.children(top).collect(),
            next: 0,
            acc: None,
        }];
        while let Some(frame) = stack.last_mut() {
            if frame.next < frame.kids.len() {
                let c = frame.kids[frame.next];
                frame.next += 1;
                if self.is_leaf(c) {
                    let b = self.leaf_buckets(c);
                    let depth = self.string_depth(frame.node);
                    merge_into(&mut frame.acc, b, depth, !unique_only, out);
                } else {
                    stack.push(Frame {
                        node: c,
                        kids: self.children(c).collect(),
                        next: 0,
                        acc: None,
                    });
                }
                continue;
            }
            let done = stack.pop().expect("frame present");
            let acc = done.acc.unwrap_or_default();
            if unique_only && acc.count == [1, 1] {
                let depth = self.string_depth(done.node);
                acc.emit_pairs_with_self(depth, out);
            }
            match stack.last_mut() {
                Some(parent) => {
                    let depth = self.string_depth(parent.node);
                    merge_into(&mut parent.acc, acc, depth, !unique_only, out);
                }
                None => break,
            }
        }
    }

    /// All occurrences of `query` within the two sequences at Hamming
    /// distance at most `budget`, found by a depth-first descent that spends
    /// one unit of budget per mismatching edge symbol. Windows crossing a
    /// separator are never reported; `N` mismatches everything.
    pub fn descend_with_mismatches(&self, query: &[u8], budget: usize) -> Vec<Hit> {
        let mut hits = Vec::new();
        if query.is_empty() {
            return hits;
        }
        let q: Vec<u32> = query.iter().map(|&b| base_code(b).unwrap_or(QUERY_WILDCARD)).collect();
        let mut stack: Vec<(NodeId, usize, usize)> = vec![(ROOT, 0, 0)];
        while let Some((v, qd, mm)) = stack.pop() {
            for c in self.children(v) {
                let edge = self.edge(c);
                let mut qd = qd;
                let mut mm = mm;
                let mut alive = true;
                for &sym in &self.text[edge] {
                    if qd == q.len() {
                        break;
                    }
                    if sym == SEP1 || sym == SEP2 {
                        alive = false;
                        break;
                    }
                    if sym != q[qd] {
                        mm += 1;
                        if mm > budget {
                            alive = false;
                            break;
                        }
                    }
                    qd += 1;
                }
                if !alive {
                    continue;
                }
                if qd == q.len() {
                    self.report_leaves(c, mm, &mut hits);
                } else {
                    stack.push((c, qd, mm));
                }
            }
        }
        hits.sort_unstable();
        hits
    }

    fn report_leaves(&self, top: NodeId, mismatches: usize, hits: &mut Vec<Hit>) {
        let mut stack = vec![top];
        while let Some(v) = stack.pop() {
            if let Some(s) = self.leaf_suffix(v) {
                if let Some((origin, pos)) = self.locate(s) {
                    hits.push(Hit {
                        origin,
                        pos,
                        mismatches,
                    });
                }
            } else {
                stack.extend(self.children(v));
            }
        }
    }
}

/// Leaf positions below a node, split by sequence and by left-context class.
#[derive(Default)]
struct Buckets {
    lists: [[Vec<u32>; 5]; 2],
    count: [usize; 2],
}

impl Buckets {
    fn total(&self) -> usize {
        self.count[0] + self.count[1]
    }

    fn emit_pairs_with_self(&self, depth: usize, out: &mut Vec<Match>) {
        emit_cross(&self.lists[0], &self.lists[1], depth, out);
    }
}

fn left_classes_differ(a: usize, b: usize) -> bool {
    a == 4 || b == 4 || a != b
}

fn emit_cross(first: &[Vec<u32>; 5], second: &[Vec<u32>; 5], depth: usize, out: &mut Vec<Match>) {
    for (ca, xs) in first.iter().enumerate() {
        if xs.is_empty() {
            continue;
        }
        for (cb, ys) in second.iter().enumerate() {
            if !left_classes_differ(ca, cb) {
                continue;
            }
            for &x in xs {
                for &y in ys {
                    out.push(Match::exact(x as usize, y as usize, depth, MatchKind::Mmss));
                }
            }
        }
    }
}

/// Folds a finished child's buckets into its parent's accumulator. Leaves
/// from different children of a node diverge right after the node's label,
/// so each cross pair is right-maximal at that depth.
fn merge_into(acc: &mut Option<Buckets>, child: Buckets, depth: usize, emit: bool, out: &mut Vec<Match>) {
    let Some(a) = acc.as_mut() else {
        *acc = Some(child);
        return;
    };
    let mut child = child;
    if emit {
        emit_cross(&a.lists[0], &child.lists[1], depth, out);
        emit_cross(&child.lists[0], &a.lists[1], depth, out);
    }
    if child.total() > a.total() {
        std::mem::swap(a, &mut child);
    }
    for side in 0..2 {
        for class in 0..5 {
            let moved = std::mem::take(&mut child.lists[side][class]);
            a.lists[side][class].extend(moved);
        }
        a.count[side] += child.count[side];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_label(t: &GeneralizedSuffixTree, node: NodeId) -> Vec<u32> {
        // Spell the label via any leaf below the node.
        let mut v = node;
        while !t.is_leaf(v) {
            v = t.children(v).next().unwrap();
        }
        let s = t.leaf_suffix(v).unwrap();
        t.text()[s..s + t.string_depth(node)].to_vec()
    }

    #[test]
    fn single_residue_pair() {
        let t = GeneralizedSuffixTree::build(b"A", b"A");
        assert_eq!(t.leaf_count(), 4);
        let a = t.children(t.root()).find(|&c| t.text()[t.edge(c).start] == 0).unwrap();
        assert!(!t.is_leaf(a));
        assert_eq!(t.string_depth(a), 1);
        assert_eq!(t.longest_common_length(), 1);
    }

    #[test]
    fn repeated_prefix_gets_internal_node() {
        let t = GeneralizedSuffixTree::build(b"ACGACT", b"");
        let internal: Vec<Vec<u32>> = (0..t.node_count() as NodeId)
            .filter(|&v| v != t.root() && !t.is_leaf(v))
            .map(|v| path_label(&t, v))
            .collect();
        assert!(internal.contains(&vec![0, 1]));
        let ac = (0..t.node_count() as NodeId)
            .find(|&v| !t.is_leaf(v) && v != t.root() && path_label(&t, v) == vec![0, 1])
            .unwrap();
        assert_eq!(t.children(ac).count(), 2);
    }

    #[test]
    fn suffix_links_drop_first_symbol() {
        let t = GeneralizedSuffixTree::build(b"ACGACTACGTTACG", b"TACGACGA");
        for v in 1..t.node_count() as NodeId {
            if t.is_leaf(v) {
                continue;
            }
            let link = t.suffix_link(v).unwrap();
            let label = path_label(&t, v);
            let target = if link == t.root() { vec![] } else { path_label(&t, link) };
            assert_eq!(&label[1..], &target[..], "node {v}");
        }
    }

    #[test]
    fn n_never_matches() {
        let t = GeneralizedSuffixTree::build(b"ANA", b"ANA");
        let mems = t.enumerate_mmss(MmssQuery::default());
        let triples: Vec<_> = mems.iter().map(Match::triple).collect();
        assert_eq!(triples, vec![(0, 0, 1), (0, 2, 1), (2, 0, 1), (2, 2, 1)]);
        assert!(t.descend_with_mismatches(b"ANA", 0).is_empty());
        let hits = t.descend_with_mismatches(b"ANA", 1);
        assert_eq!(hits.len(), 2);
        assert!(hits.iter().all(|h| h.mismatches == 1));
    }

    #[test]
    fn identical_strings_single_mem() {
        let t = GeneralizedSuffixTree::build(b"ACGT", b"ACGT");
        let mems: Vec<_> = t.enumerate_mmss(MmssQuery::default()).iter().map(Match::triple).collect();
        assert_eq!(mems, vec![(0, 0, 4)]);
    }

    #[test]
    fn disjoint_alphabets() {
        let t = GeneralizedSuffixTree::build(b"AAAA", b"CCCC");
        assert!(t.enumerate_mmss(MmssQuery::default()).is_empty());
        assert_eq!(t.longest_common_length(), 0);
    }

    #[test]
    fn unique_filter() {
        // "ACG" occurs twice in s1, so it is a MEM but not a MUM.
        let t = GeneralizedSuffixTree::build(b"ACGTACG", b"ACG");
        let all: Vec<_> = t.enumerate_mmss(MmssQuery::default()).iter().map(Match::triple).collect();
        assert!(all.contains(&(0, 0, 3)) && all.contains(&(4, 0, 3)));
        let mums = t.enumerate_mmss(MmssQuery {
            min_len: 1,
            unique_only: true,
        });
        assert!(mums.is_empty());
        let t = GeneralizedSuffixTree::build(b"TTACGTT", b"GACGC");
        let mums: Vec<_> = t
            .enumerate_mmss(MmssQuery {
                min_len: 3,
                unique_only: true,
            })
            .iter()
            .map(Match::triple)
            .collect();
        assert_eq!(mums, vec![(2, 1, 3)]);
    }

    #[test]
    fn descend_single_substitution() {
        let t = GeneralizedSuffixTree::build(b"TTACGATT", b"");
        let hits = t.descend_with_mismatches(b"ACGT", 1);
        assert_eq!(
            hits,
            vec![Hit {
                origin: Origin::First,
                pos: 2,
                mismatches: 1
            }]
        );
        assert!(t.descend_with_mismatches(b"ACGT", 0).is_empty());
    }

    #[test]
    fn descend_never_crosses_separator() {
        // "AC" + "GT" would only match across the separator.
        let t = GeneralizedSuffixTree::build(b"AC", b"GT");
        assert!(t.descend_with_mismatches(b"ACGT", 4).is_empty());
        assert_eq!(t.descend_with_mismatches(b"GT", 0).len(), 1);
    }
}
