use super::{Element, OrthoLattice};

/// Search for an order- and ortho-preserving bijection `from -> to`.
///
/// Plain backtracking with degree pruning; meant for the small lattices
/// used in fixtures and tests.
pub fn find_isomorphism(from: &OrthoLattice, to: &OrthoLattice) -> Option<Vec<Element>> {
    let n = from.size();
    if n != to.size() {
        return None;
    }
    let signature = |l: &OrthoLattice, x: Element| {
        let below = l.elements().filter(|&y| l.leq_unchecked(y, x)).count();
        let above = l.elements().filter(|&y| l.leq_unchecked(x, y)).count();
        (below, above)
    };
    let sig_from: Vec<_> = from.elements().map(|x| signature(from, x)).collect();
    let sig_to: Vec<_> = to.elements().map(|x| signature(to, x)).collect();
    let mut order: Vec<Element> = from.elements().collect();
    order.sort_by_key(|&x| (sig_from[x].0, x));

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if search(from, to, &order, 0, &sig_from, &sig_to, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    from: &OrthoLattice,
    to: &OrthoLattice,
    order: &[Element],
    depth: usize,
    sig_from: &[(usize, usize)],
    sig_to: &[(usize, usize)],
    map: &mut [Element],
    used: &mut [bool],
) -> bool {
    let Some(&x) = order.get(depth) else {
        return true;
    };
    if map[x] != usize::MAX {
        return search(from, to, order, depth + 1, sig_from, sig_to, map, used);
    }
    let ox = from.ortho_unchecked(x);
    for y in to.elements() {
        if used[y] || sig_to[y] != sig_from[x] {
            continue;
        }
        let oy = to.ortho_unchecked(y);
        let ortho_ok = if ox == x {
            oy == y
        } else {
            (map[ox] == usize::MAX && !used[oy] && oy != y && sig_to[oy] == sig_from[ox])
                || map[ox] == oy
        };
        if !ortho_ok {
            continue;
        }
        let consistent = from.elements().filter(|&z| map[z] != usize::MAX).all(|z| {
            from.leq_unchecked(x, z) == to.leq_unchecked(y, map[z])
                && from.leq_unchecked(z, x) == to.leq_unchecked(map[z], y)
        });
        if !consistent {
            continue;
        }
        map[x] = y;
        used[y] = true;
        let paired = map[ox] == usize::MAX;
        if paired {
            map[ox] = oy;
            used[oy] = true;
        }
        let pair_ok = !paired
            || from.elements().filter(|&z| map[z] != usize::MAX).all(|z| {
                from.leq_unchecked(ox, z) == to.leq_unchecked(oy, map[z])
                    && from.leq_unchecked(z, ox) == to.leq_unchecked(map[z], oy)
            });
        if pair_ok && search(from, to, order, depth + 1, sig_from, sig_to, map, used) {
            return true;
        }
        if paired {
            map[ox] = usize::MAX;
            used[oy] = false;
        }
        map[x] = usize::MAX;
        used[y] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::{gen_boolean, gen_mo};

    #[test]
    fn mo1_is_boolean_square() {
        let map = find_isomorphism(&gen_mo(1).unwrap(), &gen_boolean(2).unwrap()).unwrap();
        assert_eq!(map[0], 0);
        assert_eq!(map[3], 3);
    }

    #[test]
    fn distinct_shapes_are_not_isomorphic() {
        assert!(find_isomorphism(&gen_mo(3).unwrap(), &gen_boolean(3).unwrap()).is_none());
        assert!(find_isomorphism(&gen_mo(2).unwrap(), &gen_mo(3).unwrap()).is_none());
    }

    #[test]
    fn isomorphism_preserves_structure() {
        let a = gen_mo(3).unwrap();
        let map = find_isomorphism(&a, &a).unwrap();
        for x in a.elements() {
            assert_eq!(map[a.ortho_unchecked(x)], a.ortho_unchecked(map[x]));
        }
    }
}
