use crate::structure::Elem;

/// True iff `pairs` is the graph of a permutation of `0..n` with a single
/// orbit. For `n = 1` that is the fixed point `(0, 0)`; for `n = 0` the empty
/// set.
pub fn is_circular_successor(pairs: &[(Elem, Elem)], n: usize) -> bool {
    if pairs.len() != n {
        return false;
    }
    let mut succ = vec![None; n];
    let mut has_pred = vec![false; n];
    for &(a, b) in pairs {
        let (a, b) = (a as usize, b as usize);
        if a >= n || b >= n || succ[a].is_some() || has_pred[b] {
            return false;
        }
        succ[a] = Some(b);
        has_pred[b] = true;
    }
    if n == 0 {
        return true;
    }
    let mut cur = 0;
    for step in 1..=n {
        cur = succ[cur].expect("every element has a successor");
        if cur == 0 {
            return step == n;
        }
    }
    false
}
