//! Greechie block presentations (`.gre`) and their pasting.
//!
//! ```text
//! gre 1
//! block a b c
//! block c d e
//! ```

use std::collections::{HashMap, VecDeque};

use crate::lattice::{Element, OrthoLattice, Structure, MAX_ELEMENTS};

use super::{tokens, FormatError};

/// Largest block accepted; a block of `k` atoms contributes `2^k` subsets.
pub const MAX_BLOCK_ATOMS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreechieDiagram {
    pub name: Option<String>,
    pub atom_names: Vec<String>,
    /// Atom indices of each block, in the order written.
    pub blocks: Vec<Vec<usize>>,
}

impl GreechieDiagram {
    pub fn new<S: AsRef<str>>(blocks: &[Vec<S>]) -> Result<Self, FormatError> {
        let mut atom_names: Vec<String> = Vec::new();
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut out = Vec::with_capacity(blocks.len());
        for (bi, block) in blocks.iter().enumerate() {
            if block.len() < 2 {
                return Err(FormatError::Diagram(format!("block {bi} has fewer than 2 atoms")));
            }
            if block.len() > MAX_BLOCK_ATOMS {
                return Err(FormatError::Diagram(format!(
                    "block {bi} has {} atoms, cap is {MAX_BLOCK_ATOMS}",
                    block.len()
                )));
            }
            let mut atoms = Vec::with_capacity(block.len());
            for name in block {
                let name = name.as_ref();
                let id = *ids.entry(name.to_string()).or_insert_with(|| {
                    atom_names.push(name.to_string());
                    atom_names.len() - 1
                });
                if atoms.contains(&id) {
                    return Err(FormatError::Diagram(format!("atom `{name}` repeated in block {bi}")));
                }
                atoms.push(id);
            }
            out.push(atoms);
        }
        if out.is_empty() {
            return Err(FormatError::Diagram("no blocks".into()));
        }
        for i in 0..out.len() {
            for j in i + 1..out.len() {
                let shared = out[i].iter().filter(|a| out[j].contains(a)).count();
                if shared >= 2 {
                    return Err(FormatError::Diagram(format!(
                        "blocks {i} and {j} share {shared} atoms"
                    )));
                }
            }
        }
        Ok(Self {
            name: None,
            atom_names,
            blocks: out,
        })
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, tokens(l)))
            .filter(|(_, t)| !t.is_empty());
        match lines.next() {
            Some((_, h)) if h.len() == 2 && h[0].1 == "gre" && h[1].1 == "1" => {}
            Some((line, _)) => return Err(FormatError::syntax(line, 1, "expected header `gre 1`")),
            None => return Err(FormatError::syntax(1, 1, "empty document")),
        }
        let mut blocks = Vec::new();
        let mut name = None;
        for (line, toks) in lines {
            match toks[0].1 {
                "block" => blocks.push(toks[1..].iter().map(|t| t.1).collect::<Vec<_>>()),
                "name" if toks.len() >= 2 => {
                    name = Some(toks[1..].iter().map(|t| t.1).collect::<Vec<_>>().join(" "))
                }
                other => {
                    return Err(FormatError::syntax(
                        line,
                        toks[0].0,
                        format!("unknown directive `{other}`"),
                    ))
                }
            }
        }
        let mut diagram = Self::new(&blocks)?;
        diagram.name = name;
        Ok(diagram)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("gre 1\n");
        if let Some(name) = &self.name {
            out.push_str(&format!("name {name}\n"));
        }
        for b in &self.blocks {
            let names: Vec<&str> = b.iter().map(|&a| self.atom_names[a].as_str()).collect();
            out.push_str(&format!("block {}\n", names.join(" ")));
        }
        out
    }

    /// Paste the blocks into one structure and validate it.
    ///
    /// Elements are classes of (block, atom subset) pairs: two pairs are the
    /// same element when their atom sets coincide or their complements
    /// within their blocks coincide. This identifies the bounds, shared
    /// atoms and the complements of shared atoms. The resulting order is
    /// the transitive closure of inclusion within blocks. The result is
    /// returned only if it is an orthomodular lattice.
    pub fn paste(&self) -> Result<OrthoLattice, FormatError> {
        let nodes: Vec<(usize, usize)> = self
            .blocks
            .iter()
            .enumerate()
            .flat_map(|(b, atoms)| (0..1usize << atoms.len()).map(move |m| (b, m)))
            .collect();
        let offset: Vec<usize> = self
            .blocks
            .iter()
            .scan(0, |acc, b| {
                let start = *acc;
                *acc += 1 << b.len();
                Some(start)
            })
            .collect();
        let atom_set = |b: usize, mask: usize| -> Vec<usize> {
            let mut v: Vec<usize> = (0..self.blocks[b].len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| self.blocks[b][i])
                .collect();
            v.sort_unstable();
            v
        };

        let mut uf = UnionFind::new(nodes.len());
        let mut by_set: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut by_complement: HashMap<Vec<usize>, usize> = HashMap::new();
        for (k, &(b, mask)) in nodes.iter().enumerate() {
            let full = (1 << self.blocks[b].len()) - 1;
            if let Some(&other) = by_set.get(&atom_set(b, mask)) {
                uf.union(k, other);
            } else {
                by_set.insert(atom_set(b, mask), k);
            }
            let comp = atom_set(b, full & !mask);
            if let Some(&other) = by_complement.get(&comp) {
                uf.union(k, other);
            } else {
                by_complement.insert(comp, k);
            }
        }

        let mut id_of_root: HashMap<usize, Element> = HashMap::new();
        let mut element = vec![0; nodes.len()];
        let mut labels: Vec<Option<String>> = Vec::new();
        for (k, &(b, mask)) in nodes.iter().enumerate() {
            let root = uf.find(k);
            let next = id_of_root.len();
            let id = *id_of_root.entry(root).or_insert_with(|| {
                labels.push(Some(self.label_of(b, mask)));
                next
            });
            element[k] = id;
        }
        let n = id_of_root.len();
        if n > MAX_ELEMENTS {
            return Err(FormatError::PastingInvalid(crate::lattice::LatticeError::TooLarge {
                size: n,
                cap: MAX_ELEMENTS,
            }));
        }

        let mut ortho = vec![usize::MAX; n];
        let mut succ: Vec<Vec<Element>> = vec![Vec::new(); n];
        for (k, &(b, mask)) in nodes.iter().enumerate() {
            let width = self.blocks[b].len();
            let full = (1 << width) - 1;
            let x = element[k];
            let y = element[offset[b] + (full & !mask)];
            if ortho[x] != usize::MAX && ortho[x] != y {
                return Err(FormatError::PastingInvalid(
                    crate::lattice::LatticeError::LawViolation {
                        law: crate::lattice::Law::Involution,
                        witness: vec![x],
                    },
                ));
            }
            ortho[x] = y;
            for i in 0..width {
                if mask >> i & 1 == 0 {
                    let up = element[offset[b] + (mask | 1 << i)];
                    if up != x {
                        succ[x].push(up);
                    }
                }
            }
        }
        let mut leq = vec![false; n * n];
        let mut queue = VecDeque::new();
        for start in 0..n {
            leq[start * n + start] = true;
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                for &y in &succ[x] {
                    if !leq[start * n + y] {
                        leq[start * n + y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        let first = &self.blocks[0];
        let structure = Structure {
            size: n,
            leq,
            ortho,
            bottom: element[0],
            top: element[(1 << first.len()) - 1],
            labels,
            name: self.name.clone(),
        };
        let lattice = OrthoLattice::from_structure(structure).map_err(FormatError::PastingInvalid)?;
        let om = lattice.is_orthomodular();
        if !om.holds {
            return Err(FormatError::PastingInvalid(
                crate::lattice::LatticeError::LawViolation {
                    law: om.law,
                    witness: om.witness.unwrap_or_default(),
                },
            ));
        }
        Ok(lattice)
    }

    fn label_of(&self, b: usize, mask: usize) -> String {
        let atoms = &self.blocks[b];
        let full = (1usize << atoms.len()) - 1;
        let names = |m: usize| -> Vec<&str> {
            (0..atoms.len())
                .filter(|i| m >> i & 1 == 1)
                .map(|i| self.atom_names[atoms[i]].as_str())
                .collect()
        };
        match (mask.count_ones(), (full & !mask).count_ones()) {
            (0, _) => "0".into(),
            (_, 0) => "1".into(),
            (1, _) => names(mask)[0].to_string(),
            (_, 1) => format!("~{}", names(full & !mask)[0]),
            _ => names(mask).join("+"),
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Parse a `.gre` document and build its pasting.
pub fn parse_greechie(text: &str) -> Result<OrthoLattice, FormatError> {
    GreechieDiagram::parse(text)?.paste()
}
