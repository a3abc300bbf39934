use crate::lattice::{Element, LatticeError, OrthoLattice, Structure, MAX_ELEMENTS};

/// Powerset lattice of an `n`-element outcome set, `1 <= n <= 20`.
pub fn gen_boolean(n: u32) -> Result<OrthoLattice, LatticeError> {
    OrthoLattice::powerset(n)
}

/// MO(n): bottom, top and `n` complementary atom pairs.
///
/// Element layout: `0` is bottom, `2i + 1` and `2i + 2` are the atoms
/// `a{i}` and `a{i}'`, and `2n + 1` is top.
pub fn gen_mo(n: usize) -> Result<OrthoLattice, LatticeError> {
    let max = (MAX_ELEMENTS - 2) / 2;
    if n == 0 || n > max {
        return Err(LatticeError::SizeOutOfRange {
            requested: n,
            min: 1,
            max,
        });
    }
    let size = 2 * n + 2;
    let top = size - 1;
    let mut leq = vec![false; size * size];
    for x in 0..size {
        leq[x * size + x] = true;
        leq[x] = true;
        leq[x * size + top] = true;
    }
    let mut ortho = vec![0; size];
    ortho[0] = top;
    ortho[top] = 0;
    let mut labels = vec![None; size];
    labels[0] = Some("0".to_string());
    labels[top] = Some("1".to_string());
    for i in 0..n {
        let (a, ap) = (2 * i + 1, 2 * i + 2);
        ortho[a] = ap;
        ortho[ap] = a;
        labels[a] = Some(format!("a{i}"));
        labels[ap] = Some(format!("a{i}'"));
    }
    OrthoLattice::from_structure(Structure {
        size,
        leq,
        ortho,
        bottom: 0,
        top,
        labels,
        name: Some(format!("mo-{n}")),
    })
}

/// Glue lattices along their bottoms and tops.
///
/// The result lists the shared bottom first, then the non-bound elements
/// of each summand in order, then the shared top.
pub fn horizontal_sum(parts: &[OrthoLattice]) -> Result<OrthoLattice, LatticeError> {
    let inner: usize = parts.iter().map(|p| p.size().saturating_sub(2)).sum();
    let size = inner + 2;
    if size > MAX_ELEMENTS {
        return Err(LatticeError::TooLarge {
            size,
            cap: MAX_ELEMENTS,
        });
    }
    let top = size - 1;
    // new index of each (part, element)
    let mut index: Vec<Vec<Element>> = Vec::with_capacity(parts.len());
    let mut next = 1;
    for p in parts {
        let mut map = vec![0; p.size()];
        for x in p.elements() {
            map[x] = if x == p.bottom() {
                0
            } else if x == p.top() {
                top
            } else {
                next += 1;
                next - 1
            };
        }
        index.push(map);
    }
    let mut leq = vec![false; size * size];
    let mut ortho = vec![0; size];
    let mut labels = vec![None; size];
    for x in 0..size {
        leq[x * size + x] = true;
        leq[x] = true;
        leq[x * size + top] = true;
    }
    ortho[0] = top;
    ortho[top] = 0;
    for (p, map) in parts.iter().zip(&index) {
        for x in p.elements() {
            ortho[map[x]] = map[p.ortho_unchecked(x)];
            if map[x] != 0 && map[x] != top {
                labels[map[x]] = p.label(x).map(|l| l.into_owned());
            }
            for y in p.elements() {
                if p.leq_unchecked(x, y) {
                    leq[map[x] * size + map[y]] = true;
                }
            }
        }
    }
    OrthoLattice::from_structure(Structure {
        size,
        leq,
        ortho,
        bottom: 0,
        top,
        labels,
        name: None,
    })
}
