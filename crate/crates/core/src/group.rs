//! Finite groups presented by their Cayley multigraphs.
//!
//! Elements are vertices. The BFS tree from the identity gives each vertex a
//! normal-form word, and multiplication `u · v` walks `v`'s word from `u`.
//! Construction certifies that this really is a group law: every left
//! translation must be a label-preserving graph automorphism.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Edge, LabeledMultigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter::new(self.generator, !self.inverse)
    }
}

/// Word in the free group. Displayed and parsed with `a, b, c, ...` for
/// generators and upper case for their inverses; `1` is the empty word.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::new(g, false)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Free reduction.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Replace generator `j` by `images[j]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut letters = Vec::new();
        for l in &self.0 {
            let img = &images[l.generator];
            if l.inverse {
                letters.extend(img.inverse().0);
            } else {
                letters.extend_from_slice(&img.0);
            }
        }
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            let base = if l.inverse { b'A' } else { b'a' };
            if l.generator < 26 {
                write!(f, "{}", (base + l.generator as u8) as char)?;
            } else {
                write!(f, "[{}{}]", l.generator, if l.inverse { "'" } else { "" })?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for c in s.chars() {
            match c {
                'a'..='z' => letters.push(Letter::new(c as usize - 'a' as usize, false)),
                'A'..='Z' => letters.push(Letter::new(c as usize - 'A' as usize, true)),
                '1' | ' ' | '\t' | '*' | '.' => {}
                _ => return Err(Error::Parse(format!("bad letter {c:?} in word {s:?}"))),
            }
        }
        Ok(Word(letters))
    }
}

/// Permutation of `0..n`, `self[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Checks bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut distinct = 0;
        for &i in &images {
            if i < n && !seen[i] {
                seen[i] = true;
                distinct += 1;
            }
        }
        if distinct != n {
            return Err(Error::NotBijective {
                image: distinct,
                order: n,
            });
        }
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn pow(&self, k: usize) -> Permutation {
        let mut out = Permutation::identity(self.len());
        for _ in 0..k {
            out = self.compose(&out);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Order by iterated composition, giving up past `cap`.
    pub fn order(&self, cap: usize) -> Result<usize> {
        let mut p = self.clone();
        for k in 1..=cap {
            if p.is_identity() {
                return Ok(k);
            }
            p = self.compose(&p);
        }
        Err(Error::OrderCapExceeded { cap })
    }
}

pub const MAX_TABLE_ORDER: usize = 4096;
pub const AUTOMORPHISM_ORDER_CAP: usize = 1 << 16;
/// Orders up to this size get exhaustive pairwise homomorphism checks.
pub const EXHAUSTIVE_ORDER: usize = 256;

/// A certified finite group on the vertices of a Cayley multigraph.
#[derive(Debug, Clone)]
pub struct QuotientGroup {
    graph: LabeledMultigraph,
    arity: usize,
    right: Vec<usize>,
    left: Vec<usize>,
    parent: Vec<Option<(usize, Letter)>>,
    depth: Vec<usize>,
    order_bfs: Vec<usize>,
    table: Vec<u32>,
    inverse: Vec<usize>,
}

impl QuotientGroup {
    pub fn from_graph(graph: LabeledMultigraph) -> Result<Self> {
        let arity = graph.label_count();
        Self::with_arity(graph, arity)
    }

    pub fn with_arity(graph: LabeledMultigraph, arity: usize) -> Result<Self> {
        let n = graph.vertex_count();
        if n == 0 {
            return Err(Error::NotCayley("empty graph".into()));
        }
        if n > MAX_TABLE_ORDER {
            return Err(Error::GroupTooLarge {
                order: n,
                cap: MAX_TABLE_ORDER,
            });
        }
        let k = arity;
        let mut right = vec![usize::MAX; n * k];
        let mut left = vec![usize::MAX; n * k];
        for e in graph.edges() {
            if e.label >= k {
                return Err(Error::BadGenerator {
                    index: e.label,
                    arity: k,
                });
            }
            let slot = &mut right[e.src * k + e.label];
            if *slot != usize::MAX {
                return Err(Error::NotCayley(format!(
                    "vertex {} has two out-edges labeled {}",
                    e.src, e.label
                )));
            }
            *slot = e.dst;
            let slot = &mut left[e.dst * k + e.label];
            if *slot != usize::MAX {
                return Err(Error::NotCayley(format!(
                    "vertex {} has two in-edges labeled {}",
                    e.dst, e.label
                )));
            }
            *slot = e.src;
        }
        if let Some(i) = right.iter().position(|&x| x == usize::MAX) {
            return Err(Error::NotCayley(format!(
                "vertex {} lacks an out-edge labeled {}",
                i / k,
                i % k
            )));
        }

        // BFS tree of normal-form words
        let identity = graph.basepoint();
        let inc = graph.incidence();
        let mut parent = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut order_bfs = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        depth[identity] = 0;
        queue.push_back(identity);
        while let Some(u) = queue.pop_front() {
            order_bfs.push(u);
            for &(e, w) in &inc[u] {
                if depth[w] != usize::MAX {
                    continue;
                }
                let edge = graph.edge(e);
                let letter = Letter::new(edge.label, edge.src != u);
                depth[w] = depth[u] + 1;
                parent[w] = Some((u, letter));
                queue.push_back(w);
            }
        }
        if order_bfs.len() != n {
            return Err(Error::DisconnectedGraph);
        }

        let mut q = QuotientGroup {
            graph,
            arity,
            right,
            left,
            parent,
            depth,
            order_bfs,
            table: Vec::new(),
            inverse: Vec::new(),
        };

        // Left translations L_u(v) = u · v, built along the tree.
        let mut table = vec![0u32; n * n];
        let mut row = vec![0usize; n];
        for u in 0..n {
            row[identity] = u;
            for &v in &q.order_bfs[1..] {
                let (p, letter) = q.parent[v].expect("non-root has parent");
                row[v] = q.step(row[p], letter);
            }
            for v in 0..n {
                for l in 0..k {
                    let lhs = row[q.right[v * k + l]];
                    let rhs = q.right[row[v] * k + l];
                    if lhs != rhs {
                        return Err(Error::NotCayley(format!(
                            "left translation by {u} does not commute with generator {l} at {v}"
                        )));
                    }
                }
            }
            for v in 0..n {
                table[u * n + v] = row[v] as u32;
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for u in 0..n {
            for v in 0..n {
                if table[u * n + v] as usize == identity {
                    inverse[v] = u;
                }
            }
        }
        q.table = table;
        q.inverse = inverse;
        Ok(q)
    }

    pub fn graph(&self) -> &LabeledMultigraph {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn identity(&self) -> usize {
        self.graph.basepoint()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Image of generator `g`.
    pub fn generator(&self, g: usize) -> usize {
        self.right[self.identity() * self.arity + g]
    }

    #[inline]
    pub fn step(&self, v: usize, letter: Letter) -> usize {
        let i = v * self.arity + letter.generator;
        if letter.inverse {
            self.left[i]
        } else {
            self.right[i]
        }
    }

    pub fn evaluate_from(&self, start: usize, w: &Word) -> Result<usize> {
        let mut v = start;
        for &l in w.letters() {
            if l.generator >= self.arity {
                return Err(Error::BadGenerator {
                    index: l.generator,
                    arity: self.arity,
                });
            }
            v = self.step(v, l);
        }
        Ok(v)
    }

    /// Endpoint of the path spelled by `w` from the identity.
    pub fn evaluate_word(&self, w: &Word) -> Result<usize> {
        self.evaluate_from(self.identity(), w)
    }

    #[inline]
    pub fn multiply(&self, u: usize, v: usize) -> usize {
        self.table[u * self.order() + v] as usize
    }

    #[inline]
    pub fn inverse(&self, v: usize) -> usize {
        self.inverse[v]
    }

    /// Normal-form word of `v` (labels along the BFS tree path).
    pub fn element_word(&self, v: usize) -> Word {
        let mut letters = Vec::with_capacity(self.depth[v]);
        let mut x = v;
        while let Some((p, l)) = self.parent[x] {
            letters.push(l);
            x = p;
        }
        letters.reverse();
        Word::new(letters)
    }

    /// Distance from the identity in the Cayley graph.
    pub fn word_length(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn element_order(&self, v: usize) -> usize {
        let mut x = v;
        let mut k = 1;
        while x != self.identity() {
            x = self.multiply(x, v);
            k += 1;
        }
        k
    }

    /// Vertices in BFS order from the identity.
    pub fn bfs_order(&self) -> &[usize] {
        &self.order_bfs
    }

    /// Sorted members of the subgroup generated by the images of `gens`.
    pub fn subgroup_image(&self, gens: &[Word]) -> Result<Vec<usize>> {
        let mut steps = Vec::with_capacity(2 * gens.len());
        for w in gens {
            let g = self.evaluate_word(w)?;
            steps.push(g);
            steps.push(self.inverse(g));
        }
        let n = self.order();
        let mut member = vec![false; n];
        let mut queue = VecDeque::from([self.identity()]);
        member[self.identity()] = true;
        while let Some(x) = queue.pop_front() {
            for &g in &steps {
                let y = self.multiply(x, g);
                if !member[y] {
                    member[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Ok((0..n).filter(|&v| member[v]).collect())
    }

    /// Automorphism induced by sending generator `j` to `images[j]`.
    pub fn induced_automorphism(&self, images: &[Word]) -> Result<Permutation> {
        if images.len() != self.arity {
            return Err(Error::BadGenerator {
                index: images.len(),
                arity: self.arity,
            });
        }
        let img: Vec<usize> = images
            .iter()
            .map(|w| self.evaluate_word(w))
            .collect::<Result<_>>()?;
        let n = self.order();
        let mut perm = vec![0usize; n];
        perm[self.identity()] = self.identity();
        for &v in &self.order_bfs[1..] {
            let (p, l) = self.parent[v].expect("non-root has parent");
            let g = if l.inverse {
                self.inverse(img[l.generator])
            } else {
                img[l.generator]
            };
            perm[v] = self.multiply(perm[p], g);
        }
        let perm = Permutation::from_images(perm)?;
        self.check_automorphism(&perm)?;
        Ok(perm)
    }

    /// Verifies that `perm` preserves multiplication: on every
    /// (element, generator) pair, and on all pairs for small orders.
    pub fn check_automorphism(&self, perm: &Permutation) -> Result<()> {
        let n = self.order();
        if perm.len() != n {
            return Err(Error::NotBijective {
                image: perm.len(),
                order: n,
            });
        }
        if perm.apply(self.identity()) != self.identity() {
            return Err(Error::NotHomomorphic {
                left: self.identity(),
                right: self.identity(),
            });
        }
        for v in 0..n {
            for l in 0..self.arity {
                let x = self.generator(l);
                if perm.apply(self.multiply(v, x)) != self.multiply(perm.apply(v), perm.apply(x)) {
                    return Err(Error::NotHomomorphic { left: v, right: x });
                }
            }
        }
        if n <= EXHAUSTIVE_ORDER {
            for u in 0..n {
                for v in 0..n {
                    if perm.apply(self.multiply(u, v))
                        != self.multiply(perm.apply(u), perm.apply(v))
                    {
                        return Err(Error::NotHomomorphic { left: u, right: v });
                    }
                }
            }
        }
        Ok(())
    }

    /// Exhaustive associativity, identity and inverse check.
    pub fn verify_axioms(&self) -> Result<()> {
        let n = self.order();
        let e = self.identity();
        for u in 0..n {
            if self.multiply(u, e) != u || self.multiply(e, u) != u {
                return Err(Error::NotCayley(format!("identity fails at {u}")));
            }
            let inv = self.inverse(u);
            if inv >= n || self.multiply(u, inv) != e || self.multiply(inv, u) != e {
                return Err(Error::NotCayley(format!("no two-sided inverse for {u}")));
            }
        }
        for u in 0..n {
            for v in 0..n {
                let uv = self.multiply(u, v);
                for w in 0..n {
                    if self.multiply(uv, w) != self.multiply(u, self.multiply(v, w)) {
                        return Err(Error::NotCayley(format!(
                            "associativity fails at ({u}, {v}, {w})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Cayley multigraph for the generating set `gens` (given as elements):
    /// edge `v -> v·gens[j]` labeled `j`.
    pub fn cayley_graph(&self, gens: &[usize]) -> LabeledMultigraph {
        let mut edges = Vec::with_capacity(self.order() * gens.len());
        for v in 0..self.order() {
            for (j, &g) in gens.iter().enumerate() {
                edges.push(Edge::new(v, self.multiply(v, g), j));
            }
        }
        LabeledMultigraph::new(self.order(), edges, self.identity()).expect("valid vertices")
    }

    pub fn multiplication_table(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..n)
            .map(|u| (0..n).map(|v| self.multiply(u, v)).collect())
            .collect()
    }
}
