//! Tree Jacobi diagrams, the map `η` onto `h⁺`, pair-partition contractions
//! and the invariants `I₂`, `I₆`, `I₁₀^{(1,2,3)}`.
//!
//! Orientation: an internal vertex with parent edge `e` and children `L`, `R`
//! (in planar order) has cyclic order `(e, L, R)`. Reading the tree from an
//! edge entering a vertex with cyclic order `(e, e₁, e₂)` gives
//! `[word(e₁), word(e₂)]`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::free_lie::bracket_unchecked;
use crate::scalar::Scalar;
use crate::symplectic::embed_h;
use crate::tensor::Tensor;

/// A planar rooted binary tree with colored leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf(u8),
    Branch(Box<Node>, Box<Node>),
}

impl Node {
    pub fn branch(left: Node, right: Node) -> Node {
        Node::Branch(Box::new(left), Box::new(right))
    }

    fn leaves(&self) -> usize {
        match self {
            Node::Leaf(_) => 1,
            Node::Branch(l, r) => l.leaves() + r.leaves(),
        }
    }

    fn max_color(&self) -> u8 {
        match self {
            Node::Leaf(c) => *c,
            Node::Branch(l, r) => l.max_color().max(r.max_color()),
        }
    }

    fn swapped(&self) -> Node {
        match self {
            Node::Leaf(c) => Node::Leaf(*c),
            Node::Branch(l, r) => Node::branch((**r).clone(), (**l).clone()),
        }
    }
}

/// A tree Jacobi diagram: a root leaf color and a body with at least one internal vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    alphabet: Arc<Alphabet>,
    root: u8,
    body: Node,
}

impl Tree {
    pub fn new(alphabet: &Arc<Alphabet>, root: u8, body: Node) -> Result<Self> {
        if matches!(body, Node::Leaf(_)) {
            return Err(Error::InvalidTree("a tree needs at least one internal vertex".into()));
        }
        if root.max(body.max_color()) as usize >= alphabet.len() {
            return Err(Error::InvalidTree("leaf color outside the alphabet".into()));
        }
        Ok(Tree { alphabet: alphabet.clone(), root, body })
    }

    /// Linear tree: root `colors[0]`, pendant leaves `colors[1..m-1]` along the spine, last leaf `colors[m-1]`.
    pub fn caterpillar<T: AsRef<str>>(alphabet: &Arc<Alphabet>, colors: &[T]) -> Result<Self> {
        if colors.len() < 3 {
            return Err(Error::InvalidTree("a caterpillar needs at least 3 leaves".into()));
        }
        let letters = alphabet.parse_word(colors)?;
        let l = letters.letters();
        let m = l.len();
        let mut body = Node::Leaf(l[m - 1]);
        for &c in l[1..m - 1].iter().rev() {
            body = Node::branch(Node::Leaf(c), body);
        }
        Tree::new(alphabet, l[0], body)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn root(&self) -> u8 {
        self.root
    }

    pub fn body(&self) -> &Node {
        &self.body
    }

    /// Number of leaves (including the root) minus 2.
    pub fn degree(&self) -> usize {
        self.body.leaves() - 1
    }

    /// The tree with the two subtrees at the topmost internal vertex exchanged.
    pub fn swap_top(&self) -> Tree {
        Tree { alphabet: self.alphabet.clone(), root: self.root, body: self.body.swapped() }
    }

    /// Leaf colors and the Lie word read from each leaf, over all leaves.
    fn rooted_words<S: Scalar>(&self, trunc: usize) -> Vec<(u8, Tensor<S>)> {
        let graph = Graph::from_tree(self);
        graph
            .leaves
            .iter()
            .map(|&(v, color)| {
                let u = graph.adjacent[v][0];
                (color, graph.read::<S>(&self.alphabet, trunc, u, v))
            })
            .collect()
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn show(n: &Node, a: &Alphabet, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match n {
                Node::Leaf(c) => write!(f, "{}", a.name(*c)),
                Node::Branch(l, r) => {
                    write!(f, "(")?;
                    show(l, a, f)?;
                    write!(f, " ")?;
                    show(r, a, f)?;
                    write!(f, ")")
                }
            }
        }
        write!(f, "{}-", self.alphabet.name(self.root))?;
        show(&self.body, &self.alphabet, f)
    }
}

/// Unrooted view of a tree: leaves carry a color and one neighbour; internal
/// vertices list their three neighbours in cyclic order.
struct Graph {
    adjacent: Vec<Vec<usize>>,
    color: Vec<Option<u8>>,
    leaves: Vec<(usize, u8)>,
}

impl Graph {
    fn from_tree(t: &Tree) -> Graph {
        let mut g = Graph { adjacent: vec![Vec::new()], color: vec![Some(t.root)], leaves: vec![(0, t.root)] };
        let top = g.add(&t.body, 0);
        g.adjacent[0].push(top);
        g
    }

    fn add(&mut self, n: &Node, parent: usize) -> usize {
        let id = self.adjacent.len();
        match n {
            Node::Leaf(c) => {
                self.adjacent.push(vec![parent]);
                self.color.push(Some(*c));
                self.leaves.push((id, *c));
            }
            Node::Branch(l, r) => {
                self.adjacent.push(vec![parent]);
                self.color.push(None);
                let left = self.add(l, id);
                let right = self.add(r, id);
                self.adjacent[id].extend([left, right]);
            }
        }
        id
    }

    /// Lie word of the subtree at `v` seen from the neighbour `from`.
    fn read<S: Scalar>(&self, alphabet: &Arc<Alphabet>, trunc: usize, v: usize, from: usize) -> Tensor<S> {
        if let Some(c) = self.color[v] {
            return Tensor::generator(alphabet, trunc, c);
        }
        let nbrs = &self.adjacent[v];
        let pos = nbrs.iter().position(|&x| x == from).expect("adjacent vertex");
        let (e1, e2) = (nbrs[(pos + 1) % 3], nbrs[(pos + 2) % 3]);
        bracket_unchecked(&self.read(alphabet, trunc, e1, v), &self.read(alphabet, trunc, e2, v))
    }
}

/// `η(T)`: the derivation `x ↦ Σ_v ω(col(v), x) T_v` of `Σ_v col(v) ⊗ T_v`; requires `trunc > degree`.
pub fn eta<S: Scalar>(tree: &Tree, trunc: usize) -> Result<Derivation<S>> {
    eta_combination(&[(tree.clone(), S::one())], trunc)
}

/// `η` extended linearly to a combination of trees of one degree over one alphabet.
pub fn eta_combination<S: Scalar>(trees: &[(Tree, S)], trunc: usize) -> Result<Derivation<S>> {
    let Some((first, _)) = trees.first() else {
        return Err(Error::InvalidTree("empty combination".into()));
    };
    let alphabet = first.alphabet.clone();
    let degree = first.degree();
    if trunc <= degree {
        return Err(Error::DegreeMismatch { expected: degree + 1, found: trunc });
    }
    let n = alphabet.len();
    let mut images = vec![Tensor::zero(&alphabet, trunc); n];
    for (tree, coeff) in trees {
        if *tree.alphabet != *alphabet || tree.degree() != degree {
            return Err(Error::InvalidTree("trees in a combination must share alphabet and degree".into()));
        }
        for (color, word) in tree.rooted_words::<S>(trunc) {
            for (x, image) in images.iter_mut().enumerate() {
                let w = alphabet.omega(color, x as u8)?;
                if w != 0 {
                    image.add_scaled(&word, &coeff.mul_ref(&S::from_i64(w)))?;
                }
            }
        }
    }
    Ok(Derivation::from_images_unchecked(&alphabet, trunc, images))
}

/// An ordered pair partition of `{1, .., size}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairPartition {
    size: usize,
    pairs: Vec<(usize, usize)>,
}

impl PairPartition {
    /// Validates that the 1-based pairs cover `1..=size` exactly once.
    pub fn new(size: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = vec![false; size + 1];
        for &(s, t) in &pairs {
            for i in [s, t] {
                if i == 0 || i > size || seen[i] {
                    return Err(Error::InvalidPartition(format!("index {i} missing, repeated or out of range")));
                }
                seen[i] = true;
            }
        }
        if seen[1..].iter().any(|s| !s) || size % 2 == 1 {
            return Err(Error::InvalidPartition(format!("pairs do not cover 1..={size}")));
        }
        Ok(PairPartition { size, pairs })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

/// `C_p(x) = Σ_w x_w Π_{(s,t) ∈ p} ω(w_s, w_t)` for `x` homogeneous of degree `|p|`.
pub fn contract<S: Scalar>(p: &PairPartition, x: &Tensor<S>) -> Result<S> {
    if !x.is_homogeneous(p.size) {
        return Err(Error::DegreeMismatch { expected: p.size, found: x.max_degree().unwrap_or(0) });
    }
    let alphabet = x.alphabet();
    let mut total = S::zero();
    'words: for (w, c) in x.terms() {
        let l = w.letters();
        let mut sign = 1;
        for &(s, t) in &p.pairs {
            sign *= alphabet.omega(l[s - 1], l[t - 1])?;
            if sign == 0 {
                continue 'words;
            }
        }
        total.add_assign_ref(&c.mul_ref(&S::from_i64(sign)));
    }
    Ok(total)
}

/// The named contraction invariants of `h_k`, genus 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invariant {
    I2,
    I6,
    I10_1,
    I10_2,
    I10_3,
}

impl Invariant {
    pub const ALL: [Invariant; 5] =
        [Invariant::I2, Invariant::I6, Invariant::I10_1, Invariant::I10_2, Invariant::I10_3];

    /// The degree `k` of `h_k` the invariant is defined on.
    pub fn degree(self) -> usize {
        match self {
            Invariant::I2 => 2,
            Invariant::I6 => 6,
            _ => 10,
        }
    }

    pub fn partition(self) -> PairPartition {
        let pairs: &[(usize, usize)] = match self {
            Invariant::I2 => &[(1, 2), (3, 4)],
            Invariant::I6 => &[(1, 2), (3, 4), (5, 6), (7, 8)],
            Invariant::I10_1 => &[(1, 2), (3, 4), (5, 6), (7, 8), (9, 10), (11, 12)],
            Invariant::I10_2 => &[(1, 2), (3, 5), (4, 6), (7, 8), (9, 10), (11, 12)],
            Invariant::I10_3 => &[(1, 2), (3, 6), (4, 7), (5, 9), (8, 10), (11, 12)],
        };
        PairPartition::new(self.degree() + 2, pairs.to_vec()).expect("valid partition")
    }

    /// `C_p(embed_h(δ))` for `δ ∈ h_k`.
    pub fn evaluate<S: Scalar>(self, delta: &Derivation<S>) -> Result<S> {
        if delta.alphabet().genus() != Some(1) {
            return Err(Error::Unsupported("the named invariants are defined for genus 1".into()));
        }
        let k = self.degree();
        if !delta.is_homogeneous(k) {
            return Err(Error::NotHomogeneous(k));
        }
        let delta = if delta.trunc() < k + 2 { delta.with_trunc(k + 2) } else { delta.clone() };
        contract(&self.partition(), &embed_h(&delta, k)?)
    }
}

impl FromStr for Invariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I2" => Ok(Invariant::I2),
            "I6" => Ok(Invariant::I6),
            "I10_1" => Ok(Invariant::I10_1),
            "I10_2" => Ok(Invariant::I10_2),
            "I10_3" => Ok(Invariant::I10_3),
            _ => Err(Error::Parse(format!("unknown invariant `{s}` (expected I2, I6, I10_1, I10_2 or I10_3)"))),
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Invariant::I2 => "I2",
            Invariant::I6 => "I6",
            Invariant::I10_1 => "I10_1",
            Invariant::I10_2 => "I10_2",
            Invariant::I10_3 => "I10_3",
        };
        f.write_str(s)
    }
}

/// Genus-1 caterpillar from a string of `a`/`b` leaf colors.
fn ab_caterpillar(colors: &str) -> Tree {
    let alphabet = Alphabet::symplectic(1);
    let names: Vec<&str> = colors.chars().map(|c| if c == 'a' { "a1" } else { "b1" }).collect();
    Tree::caterpillar(&alphabet, &names).expect("valid caterpillar")
}

/// The eight-leaf alternating caterpillar of degree 6.
pub fn caterpillar_six() -> Tree {
    ab_caterpillar("abababab")
}

/// The three twelve-leaf caterpillars `ξ₁, ξ₂, ξ₃` of degree 10.
pub fn xi_trees() -> [Tree; 3] {
    [ab_caterpillar("abababababab"), ab_caterpillar("abaababbabab"), ab_caterpillar("abaaaabbbbab")]
}
