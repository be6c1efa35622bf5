//! Finite semidirect products `H/N ⋊ G/A` and the extension triples they
//! give, for cyclic acting groups.

use crate::cover::{build_tower, CoverData, DEFAULT_SIZE_CAP};
use crate::error::{Error, Result};
use crate::graph::{diameter, Edge, LabeledMultigraph};
use crate::group::{Permutation, QuotientGroup, Word, AUTOMORPHISM_ORDER_CAP, EXHAUSTIVE_ORDER};
use crate::builtins;

/// The acting group: `ℤ` or `ℤ/m`, generated by a single `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActingGroup {
    Integers,
    Cyclic(usize),
}

/// `t` acting on a finite quotient of `H` by a certified automorphism.
#[derive(Debug, Clone)]
pub struct ActionSpec {
    pub h_quotient: QuotientGroup,
    pub acting_group: ActingGroup,
    pub generator_action: Permutation,
}

impl ActionSpec {
    /// Action of `t` induced by sending generator `j` of `H` to `images[j]`.
    pub fn from_images(
        h_quotient: QuotientGroup,
        acting_group: ActingGroup,
        images: &[Word],
    ) -> Result<Self> {
        let generator_action = h_quotient.induced_automorphism(images)?;
        Ok(ActionSpec {
            h_quotient,
            acting_group,
            generator_action,
        })
    }

    pub fn from_permutation(
        h_quotient: QuotientGroup,
        acting_group: ActingGroup,
        generator_action: Permutation,
    ) -> Result<Self> {
        h_quotient.check_automorphism(&generator_action)?;
        Ok(ActionSpec {
            h_quotient,
            acting_group,
            generator_action,
        })
    }
}

/// The kernel `A = ⟨t^d⟩` of the action and the order `d` of `G/A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActionKernel {
    pub automorphism_order: usize,
}

impl ActionKernel {
    pub fn quotient_order(&self) -> usize {
        self.automorphism_order
    }
}

pub fn action_kernel(spec: &ActionSpec) -> Result<ActionKernel> {
    let d = spec.generator_action.order(AUTOMORPHISM_ORDER_CAP)?;
    if let ActingGroup::Cyclic(m) = spec.acting_group {
        if m == 0 || m % d != 0 {
            return Err(Error::NotDividing {
                order: d,
                modulus: m,
            });
        }
    }
    Ok(ActionKernel {
        automorphism_order: d,
    })
}

/// `H/N ⋊ G/A` with element `(h, s)` stored at vertex `s·|H| + h`.
///
/// Labels `0..k` are the generators `(x_j, 0)` of `H`, label `k` is `(e, 1)`.
#[derive(Debug, Clone)]
pub struct FiniteSemidirect {
    pub group: QuotientGroup,
    pub h_part: Vec<usize>,
    pub quotient_order: usize,
    h_order: usize,
    powers: Vec<Permutation>,
}

impl FiniteSemidirect {
    pub fn h_order(&self) -> usize {
        self.h_order
    }

    pub fn element(&self, h: usize, s: usize) -> usize {
        s * self.h_order + h
    }

    pub fn coordinates(&self, v: usize) -> (usize, usize) {
        (v % self.h_order, v / self.h_order)
    }

    /// `α^s`, the action of `t^s` on `H`.
    pub fn action_power(&self, s: usize) -> &Permutation {
        &self.powers[s % self.quotient_order]
    }
}

pub fn build_semidirect(spec: &ActionSpec) -> Result<FiniteSemidirect> {
    let kernel = action_kernel(spec)?;
    let d = kernel.quotient_order();
    let h = &spec.h_quotient;
    let n = h.order();
    let k = h.arity();
    let mut powers = vec![Permutation::identity(n)];
    for s in 1..d {
        powers.push(spec.generator_action.compose(&powers[s - 1]));
    }
    let gens: Vec<usize> = (0..k).map(|j| h.generator(j)).collect();

    let mut edges = Vec::with_capacity(n * d * (k + 1));
    for s in 0..d {
        for x in 0..n {
            let v = s * n + x;
            for (j, &g) in gens.iter().enumerate() {
                let y = h.multiply(x, powers[s].apply(g));
                edges.push(Edge::new(v, s * n + y, j));
            }
            edges.push(Edge::new(v, ((s + 1) % d) * n + x, k));
        }
    }
    let graph = LabeledMultigraph::new(n * d, edges, h.identity())?;
    let group = QuotientGroup::with_arity(graph, k + 1)?;
    if group.order() <= EXHAUSTIVE_ORDER {
        group.verify_axioms()?;
    }
    let h_part: Vec<usize> = (0..n).collect();
    let sd = FiniteSemidirect {
        group,
        h_part,
        quotient_order: d,
        h_order: n,
        powers,
    };
    check_normal(&sd.group, &sd.h_part)?;
    Ok(sd)
}

fn check_normal(g: &QuotientGroup, part: &[usize]) -> Result<()> {
    let mut member = vec![false; g.order()];
    for &v in part {
        member[v] = true;
    }
    // conjugation by generators suffices
    for l in 0..g.arity() {
        let x = g.generator(l);
        let xi = g.inverse(x);
        for &v in part {
            let c = g.multiply(g.multiply(xi, v), x);
            if !member[c] {
                return Err(Error::NotCayley(format!(
                    "subgroup not normal: conjugate of {v} by generator {l} is {c}"
                )));
            }
        }
    }
    Ok(())
}

/// A finite extension `1 → H → Γ → G → 1` as tables.
#[derive(Debug, Clone)]
pub struct ExtensionTriple {
    pub gamma: QuotientGroup,
    /// Sorted vertices of `Γ` forming `H`.
    pub h_elements: Vec<usize>,
    /// `h_source[i]` is the vertex of the `H` quotient graph matching
    /// `h_elements[i]`.
    pub h_source: Vec<usize>,
    pub g_quotient: QuotientGroup,
    pub pi_table: Vec<usize>,
    pub sigma_table: Vec<usize>,
}

impl ExtensionTriple {
    /// Builds the length-preserving section (minimal Γ-length preimage,
    /// lowest index on ties) and certifies the triple.
    pub fn new(
        gamma: QuotientGroup,
        h_elements: Vec<usize>,
        h_source: Vec<usize>,
        g_quotient: QuotientGroup,
        pi_table: Vec<usize>,
    ) -> Result<Self> {
        let mut sigma = vec![usize::MAX; g_quotient.order()];
        for v in 0..gamma.order() {
            let g = pi_table[v];
            if g >= sigma.len() {
                return Err(Error::NotCayley(format!("pi({v}) = {g} out of range")));
            }
            if sigma[g] == usize::MAX || gamma.word_length(v) < gamma.word_length(sigma[g]) {
                sigma[g] = v;
            }
        }
        if let Some(g) = sigma.iter().position(|&s| s == usize::MAX) {
            return Err(Error::NotCayley(format!("pi is not surjective (misses {g})")));
        }
        let t = ExtensionTriple {
            gamma,
            h_elements,
            h_source,
            g_quotient,
            pi_table,
            sigma_table: sigma,
        };
        t.verify()?;
        Ok(t)
    }

    pub fn pi(&self, v: usize) -> usize {
        self.pi_table[v]
    }

    pub fn sigma(&self, g: usize) -> usize {
        self.sigma_table[g]
    }

    /// Position of `v` in `h_elements`.
    pub fn h_index(&self, v: usize) -> Option<usize> {
        self.h_elements.binary_search(&v).ok()
    }

    /// Checks that π is a homomorphism with kernel `H`, and that σ is a
    /// length-preserving right inverse of π.
    pub fn verify(&self) -> Result<()> {
        let gm = &self.gamma;
        let gq = &self.g_quotient;
        if self.h_source.len() != self.h_elements.len()
            || self.h_elements.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::NotCayley("malformed H element list".into()));
        }
        let n = gm.order();
        let pairs: Box<dyn Iterator<Item = (usize, usize)>> = if n <= EXHAUSTIVE_ORDER {
            Box::new((0..n).flat_map(move |u| (0..n).map(move |v| (u, v))))
        } else {
            // 10⁴ pairs along a fixed stride
            let stride = (n * n / 10_000).max(1) | 1;
            Box::new((0..10_000).map(move |i| {
                let p = (i * stride) % (n * n);
                (p / n, p % n)
            }))
        };
        for (u, v) in pairs {
            if self.pi(gm.multiply(u, v)) != gq.multiply(self.pi(u), self.pi(v)) {
                return Err(Error::NotHomomorphic { left: u, right: v });
            }
        }
        for l in 0..gm.arity() {
            let x = gm.generator(l);
            for u in 0..n {
                if self.pi(gm.multiply(u, x)) != gq.multiply(self.pi(u), self.pi(x)) {
                    return Err(Error::NotHomomorphic { left: u, right: x });
                }
            }
        }
        let kernel: Vec<usize> = (0..n).filter(|&v| self.pi(v) == gq.identity()).collect();
        if kernel != self.h_elements {
            return Err(Error::NotCayley("kernel of pi differs from H".into()));
        }
        for g in 0..gq.order() {
            let s = self.sigma(g);
            if self.pi(s) != g {
                return Err(Error::NotCayley(format!("sigma({g}) is not a preimage")));
            }
            if gm.word_length(s) != gq.word_length(g) {
                return Err(Error::NotCayley(format!(
                    "sigma({g}) has length {} but g has length {}",
                    gm.word_length(s),
                    gq.word_length(g)
                )));
            }
        }
        if self.sigma(gq.identity()) != gm.identity() {
            return Err(Error::NotCayley("sigma does not fix the identity".into()));
        }
        Ok(())
    }
}

/// Cayley multigraph of `ℤ/d` on `k` trivial generators and one generator 1.
pub fn cyclic_quotient_graph(d: usize, k: usize) -> LabeledMultigraph {
    let mut edges = Vec::with_capacity(d * (k + 1));
    for s in 0..d {
        for j in 0..k {
            edges.push(Edge::new(s, s, j));
        }
        edges.push(Edge::new(s, (s + 1) % d, k));
    }
    LabeledMultigraph::new(d, edges, 0).expect("valid cyclic graph")
}

/// The triple `H → H ⋊ ℤ/d → ℤ/d` with π the second coordinate.
pub fn triple_from_semidirect(sd: &FiniteSemidirect) -> Result<ExtensionTriple> {
    let d = sd.quotient_order;
    let k = sd.group.arity() - 1;
    let g_quotient = QuotientGroup::with_arity(cyclic_quotient_graph(d, k), k + 1)?;
    let pi_table = (0..sd.group.order()).map(|v| sd.coordinates(v).1).collect();
    ExtensionTriple::new(
        sd.group.clone(),
        sd.h_part.clone(),
        sd.h_part.clone(),
        g_quotient,
        pi_table,
    )
}

/// A sequence of extension triples, optionally with the cover data each
/// `H` level came from.
#[derive(Debug, Clone)]
pub struct ExtensionTower {
    pub triples: Vec<ExtensionTriple>,
    pub h_covers: Vec<Option<CoverData>>,
}

impl ExtensionTower {
    pub fn diameters(&self) -> Result<Vec<usize>> {
        self.triples.iter().map(|t| diameter(t.gamma.graph())).collect()
    }
}

/// `Γ_i = H_i ⋊ G/A` at every level, with diameters checked to increase.
pub fn extension_tower(
    h_levels: &[QuotientGroup],
    images: &[Word],
    acting_group: ActingGroup,
) -> Result<Vec<ExtensionTriple>> {
    let mut triples = Vec::with_capacity(h_levels.len());
    let mut previous: Option<usize> = None;
    for (i, h) in h_levels.iter().enumerate() {
        let spec = ActionSpec::from_images(h.clone(), acting_group, images)?;
        let sd = build_semidirect(&spec)?;
        let triple = triple_from_semidirect(&sd)?;
        let diam = diameter(triple.gamma.graph())?;
        if let Some(p) = previous {
            if diam <= p {
                return Err(Error::DiametersNotIncreasing {
                    index: i,
                    previous: p as f64,
                    current: diam as f64,
                });
            }
        }
        previous = Some(diam);
        triples.push(triple);
    }
    Ok(triples)
}

pub const EXTENSION_NAMES: [&str; 2] = ["semidirect-swap", "dihedral"];

/// Built-in towers: `semidirect-swap` is the rose tower (orders 4, 128)
/// with `a ↔ b`, `dihedral` is the 8- and 16-cycle with `a ↦ a⁻¹`.
pub fn builtin_extension(name: &str) -> Result<ExtensionTower> {
    let (seed, images): (LabeledMultigraph, Vec<Word>) = match name {
        "semidirect-swap" => (builtins::rose(2), vec!["b".parse()?, "a".parse()?]),
        "dihedral" => (builtins::cycle(4), vec!["A".parse()?]),
        _ => {
            return Err(Error::Parse(format!(
                "unknown builtin extension {name:?} (known: {})",
                EXTENSION_NAMES.join(", ")
            )))
        }
    };
    let tower = build_tower(&seed, 3, DEFAULT_SIZE_CAP)?;
    let h_levels: Vec<QuotientGroup> = tower
        .levels
        .iter()
        .map(|c| QuotientGroup::from_graph(c.cover.clone()))
        .collect::<Result<_>>()?;
    let triples = extension_tower(&h_levels, &images, ActingGroup::Integers)?;
    Ok(ExtensionTower {
        triples,
        h_covers: tower.levels.into_iter().map(Some).collect(),
    })
}
