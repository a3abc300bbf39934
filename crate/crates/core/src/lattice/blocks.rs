use serde::{Deserialize, Serialize};

use super::{Element, LatticeError, OrthoLattice};

/// A maximal Boolean subalgebra, given by its atoms and all its elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub atoms: Vec<Element>,
    pub elements: Vec<Element>,
}

impl OrthoLattice {
    /// Maximal Boolean subalgebras of an orthomodular lattice.
    ///
    /// In a finite orthomodular lattice the blocks are exactly the Boolean
    /// algebras generated by maximal sets of pairwise orthogonal atoms, so
    /// this enumerates maximal cliques of the atom orthogonality graph.
    /// Blocks come out ordered by their sorted atom lists.
    pub fn blocks(&self) -> Result<Vec<Block>, LatticeError> {
        let om = self.is_orthomodular();
        if !om.holds {
            return Err(LatticeError::LawViolation {
                law: om.law,
                witness: om.witness.unwrap_or_default(),
            });
        }
        let atoms = self.atoms();
        let k = atoms.len();
        let adj: Vec<Vec<bool>> = atoms
            .iter()
            .map(|&a| {
                atoms
                    .iter()
                    .map(|&b| a != b && self.orthogonal_unchecked(a, b))
                    .collect()
            })
            .collect();
        let mut cliques = Vec::new();
        bron_kerbosch(&adj, vec![], (0..k).collect(), vec![], &mut cliques);
        let mut blocks: Vec<Block> = cliques
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                let block_atoms: Vec<Element> = c.iter().map(|&i| atoms[i]).collect();
                let mut elements = vec![self.bottom(); 1 << block_atoms.len()];
                for mask in 1usize..elements.len() {
                    let low = mask.trailing_zeros() as usize;
                    elements[mask] =
                        self.join_unchecked(elements[mask & (mask - 1)], block_atoms[low]);
                }
                elements.sort_unstable();
                elements.dedup();
                Block {
                    atoms: block_atoms,
                    elements,
                }
            })
            .collect();
        blocks.sort_by(|a, b| a.atoms.cmp(&b.atoms));
        Ok(blocks)
    }
}

pub(crate) fn bron_kerbosch(
    adj: &[Vec<bool>],
    r: Vec<usize>,
    mut p: Vec<usize>,
    mut x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r);
        }
        return;
    }
    let pivot = *p
        .iter()
        .chain(&x)
        .max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count())
        .expect("p is nonempty");
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
    for v in candidates {
        let mut r2 = r.clone();
        r2.push(v);
        let p2 = p.iter().copied().filter(|&u| adj[v][u]).collect();
        let x2 = x.iter().copied().filter(|&u| adj[v][u]).collect();
        bron_kerbosch(adj, r2, p2, x2, out);
        p.retain(|&u| u != v);
        x.push(v);
    }
}

#[cfg(test)]
mod tests {
    use crate::formats::{gen_boolean, gen_mo, parse_greechie};
    use crate::lattice::tests::o6;
    use crate::lattice::{Law, LatticeError, OrthoLattice};

    /// The sublattice on `elements` is closed and distributive.
    fn block_is_boolean(l: &OrthoLattice, elements: &[usize]) -> bool {
        let closed = elements.iter().all(|&a| {
            elements.contains(&l.ortho_unchecked(a))
                && elements.iter().all(|&b| {
                    elements.contains(&l.meet_unchecked(a, b))
                        && elements.contains(&l.join_unchecked(a, b))
                })
        });
        closed
            && elements.iter().all(|&a| {
                elements.iter().all(|&b| {
                    elements
                        .iter()
                        .all(|&c| l.law_holds_at(Law::Distributive, &[a, b, c]) == Some(true))
                })
            })
    }

    fn check_cover(l: &OrthoLattice) -> usize {
        let blocks = l.blocks().unwrap();
        for x in l.elements() {
            assert!(blocks.iter().any(|b| b.elements.contains(&x)), "element {x} uncovered");
        }
        for b in &blocks {
            assert!(block_is_boolean(l, &b.elements));
            assert_eq!(b.elements.len(), 1 << b.atoms.len());
        }
        blocks.len()
    }

    #[test]
    fn boolean_has_one_block() {
        for n in 1..=4 {
            let l = gen_boolean(n).unwrap();
            assert_eq!(check_cover(&l), 1);
        }
    }

    #[test]
    fn mo_blocks() {
        let l = gen_mo(2).unwrap();
        let blocks = l.blocks().unwrap();
        assert_eq!(blocks.len(), 2);
        assert!(blocks.iter().all(|b| b.elements.len() == 4));
        for n in 2..=5 {
            assert_eq!(check_cover(&gen_mo(n).unwrap()), n);
        }
    }

    #[test]
    fn chained_pasting_has_three_blocks() {
        let l = parse_greechie("gre 1\nblock a b c\nblock c d e\nblock e f g\n").unwrap();
        assert_eq!(check_cover(&l), 3);
    }

    #[test]
    fn non_orthomodular_rejected() {
        let err = o6().blocks().unwrap_err();
        assert!(matches!(
            err,
            LatticeError::LawViolation {
                law: Law::Orthomodular,
                ..
            }
        ));
    }
}
