//! Exact order invariants: cellularity, density, n-linkedness and the
//! linked-free numbers, each with an independent brute-force oracle.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::preorder::{ElementSet, Preorder};

/// Cap for the subset-enumeration oracles.
pub const ORACLE_MAX_SIZE: usize = 20;

/// An extremal value together with one witness set attaining it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witnessed {
    pub size: usize,
    pub witness: Vec<usize>,
}

/// Deterministic max-clique search: branch and bound with a greedy
/// coloring upper bound over a degeneracy vertex order, ties broken by
/// lowest index.
pub(crate) struct CliqueSolver {
    n: usize,
    adj: Vec<Bits>,
}

impl CliqueSolver {
    pub fn new(n: usize, adj: Vec<Bits>) -> Self {
        CliqueSolver { n, adj }
    }

    /// Adjacency = incompatibility between distinct elements.
    pub fn incompatibility(p: &Preorder) -> Self {
        let n = p.size();
        let mut adj = vec![Bits::new(n); n];
        for a in 0..n {
            for b in a + 1..n {
                if !p.compatible(a, b) {
                    adj[a].set(b);
                    adj[b].set(a);
                }
            }
        }
        CliqueSolver { n, adj }
    }

    fn degeneracy_order(&self) -> Vec<usize> {
        let mut deg: Vec<usize> = (0..self.n).map(|v| self.adj[v].count()).collect();
        let mut alive = vec![true; self.n];
        let mut order = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let v = (0..self.n)
                .filter(|&v| alive[v])
                .min_by_key(|&v| (deg[v], v))
                .unwrap();
            alive[v] = false;
            order.push(v);
            for u in self.adj[v].ones() {
                if alive[u] {
                    deg[u] -= 1;
                }
            }
        }
        order.reverse();
        order
    }

    /// Largest clique; stops early once `stop_at` is reached.
    pub fn solve(&self, stop_at: usize) -> Witnessed {
        if self.n == 0 {
            return Witnessed {
                size: 0,
                witness: vec![],
            };
        }
        let cand = self.degeneracy_order();
        let mut best = 0;
        let mut best_set = Vec::new();
        let mut r = Vec::new();
        self.expand(&mut r, cand, &mut best, &mut best_set, stop_at);
        best_set.sort_unstable();
        Witnessed {
            size: best,
            witness: best_set,
        }
    }

    fn expand(
        &self,
        r: &mut Vec<usize>,
        cand: Vec<usize>,
        best: &mut usize,
        best_set: &mut Vec<usize>,
        stop_at: usize,
    ) -> bool {
        if cand.is_empty() {
            if r.len() > *best {
                *best = r.len();
                *best_set = r.clone();
                if *best >= stop_at {
                    return true;
                }
            }
            return false;
        }
        // Greedy coloring in candidate order; the color is an upper bound
        // on any clique inside the class prefix.
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in &cand {
            match classes
                .iter_mut()
                .find(|class| class.iter().all(|&u| !self.adj[v].get(u)))
            {
                Some(class) => class.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut ordered = Vec::with_capacity(cand.len());
        for (ci, class) in classes.iter().enumerate() {
            for &v in class {
                ordered.push((v, ci + 1));
            }
        }
        let verts: Vec<usize> = ordered.iter().map(|&(v, _)| v).collect();
        for idx in (0..ordered.len()).rev() {
            let (v, color) = ordered[idx];
            if r.len() + color <= *best {
                return false;
            }
            let newcand: Vec<usize> = verts[..idx]
                .iter()
                .copied()
                .filter(|&u| self.adj[v].get(u))
                .collect();
            r.push(v);
            let stop = self.expand(r, newcand, best, best_set, stop_at);
            r.pop();
            if stop {
                return true;
            }
        }
        false
    }
}

impl Preorder {
    /// Maximum antichain size with a witness, via branch-and-bound max
    /// clique on the incompatibility graph.
    pub fn cellularity(&self) -> Result<Witnessed> {
        if self.is_empty() {
            return Err(Error::EmptyPoset);
        }
        Ok(CliqueSolver::incompatibility(self).solve(usize::MAX))
    }

    /// Some antichain of size >= t, if one exists (early-exit search).
    pub fn antichain_at_least(&self, t: usize) -> Option<Vec<usize>> {
        if t == 0 {
            return Some(vec![]);
        }
        if self.is_empty() {
            return None;
        }
        let w = CliqueSolver::incompatibility(self).solve(t);
        if w.size >= t {
            Some(w.witness)
        } else {
            None
        }
    }

    /// Independent subset-enumeration oracle for `cellularity`.
    pub fn cellularity_bruteforce(&self) -> Result<Witnessed> {
        if self.is_empty() {
            return Err(Error::EmptyPoset);
        }
        let n = self.size();
        if n > ORACLE_MAX_SIZE {
            return Err(Error::CapExceeded {
                requested: n,
                cap: ORACLE_MAX_SIZE,
            });
        }
        let mut inc = vec![0u64; n];
        for a in 0..n {
            for b in 0..n {
                if a != b && !self.compatible(a, b) {
                    inc[a] |= 1 << b;
                }
            }
        }
        let mut best = 0u32;
        let mut best_mask = 0u64;
        for mask in 0..1u64 << n {
            if mask.count_ones() <= best {
                continue;
            }
            let ok = (0..n)
                .filter(|&v| mask >> v & 1 == 1)
                .all(|v| mask & !(1 << v) & !inc[v] == 0);
            if ok {
                best = mask.count_ones();
                best_mask = mask;
            }
        }
        Ok(Witnessed {
            size: best as usize,
            witness: (0..n).filter(|&v| best_mask >> v & 1 == 1).collect(),
        })
    }

    /// Minimum dense-set size with a witness. Fast path: the number of
    /// minimal equivalence classes forces the answer in a finite preorder
    /// (one representative per minimal class is dense, and any dense set
    /// must meet every minimal class).
    pub fn density(&self) -> Result<Witnessed> {
        if self.is_empty() {
            return Err(Error::EmptyPoset);
        }
        let n = self.size();
        let minimal = |v: usize| (0..n).all(|q| !self.leq(q, v) || self.leq(v, q));
        let mut reps = Vec::new();
        for v in 0..n {
            if !minimal(v) {
                continue;
            }
            if (0..v).any(|u| self.leq(u, v) && self.leq(v, u)) {
                continue; // earlier representative of the same class
            }
            reps.push(v);
        }
        Ok(Witnessed {
            size: reps.len(),
            witness: reps,
        })
    }

    /// Independent minimum-subset oracle for `density`.
    pub fn density_bruteforce(&self) -> Result<Witnessed> {
        if self.is_empty() {
            return Err(Error::EmptyPoset);
        }
        let n = self.size();
        if n > ORACLE_MAX_SIZE {
            return Err(Error::CapExceeded {
                requested: n,
                cap: ORACLE_MAX_SIZE,
            });
        }
        for m in 1..=n {
            let mut found = None;
            for_each_combination(n, m, &mut |comb| {
                let dense = (0..n).all(|p| comb.iter().any(|&d| self.leq(d, p)));
                if dense {
                    found = Some(comb.to_vec());
                    true
                } else {
                    false
                }
            });
            if let Some(witness) = found {
                return Ok(Witnessed { size: m, witness });
            }
        }
        unreachable!("the full carrier is dense by reflexivity")
    }

    /// True iff every n-element subset of `a` has a common lower bound;
    /// vacuously true when |a| < n.
    pub fn is_n_linked(&self, a: &ElementSet, n: usize) -> Result<bool> {
        if n < 2 {
            return Err(Error::BadArity { n });
        }
        let members = a.members();
        if members.len() < n {
            return Ok(true);
        }
        let below: Vec<Bits> = members.iter().map(|&p| self.below(p)).collect();
        let mut linked = true;
        for_each_combination(members.len(), n, &mut |comb| {
            let mut meet = below[comb[0]].clone();
            for &i in &comb[1..] {
                meet.intersect_assign(&below[i]);
            }
            if meet.is_empty() {
                linked = false;
                true
            } else {
                false
            }
        });
        Ok(linked)
    }

    /// True iff `a` is n-linked for every n in 2..=|a|.
    pub fn is_centered(&self, a: &ElementSet) -> Result<bool> {
        if a.is_empty() {
            return Err(Error::EmptySet);
        }
        for n in 2..=a.len() {
            if !self.is_n_linked(a, n)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The finite equivalent route for `is_centered`: a single common
    /// lower bound below all of `a`.
    pub fn has_common_lower_bound(&self, a: &ElementSet) -> Result<bool> {
        if a.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut meet = self.below(a.members()[0]);
        for &p in &a.members()[1..] {
            meet.intersect_assign(&self.below(p));
        }
        Ok(!meet.is_empty())
    }

    /// Maximum size of a subset containing no n distinct elements with a
    /// common lower bound, via exact hypergraph-independent-set search.
    /// For n = 2 this coincides with cellularity.
    pub fn linked_free_number(&self, n: usize) -> Result<Witnessed> {
        if n < 2 {
            return Err(Error::BadArity { n });
        }
        if self.is_empty() {
            return Err(Error::EmptyPoset);
        }
        let below = self.below_all();
        let mut best: Vec<usize> = Vec::new();
        let mut chosen: Vec<usize> = Vec::new();
        linked_free_rec(self.size(), n, &below, 0, &mut chosen, &mut best);
        Ok(Witnessed {
            size: best.len(),
            witness: best,
        })
    }
}

fn linked_free_rec(
    size: usize,
    n: usize,
    below: &[Bits],
    idx: usize,
    chosen: &mut Vec<usize>,
    best: &mut Vec<usize>,
) {
    if chosen.len() + (size - idx) <= best.len() {
        return;
    }
    if idx == size {
        if chosen.len() > best.len() {
            *best = chosen.clone();
        }
        return;
    }
    // Adding idx is allowed unless some (n-1)-subset of the current set
    // shares a lower bound with it.
    let mut blocked = false;
    if chosen.len() >= n - 1 {
        for_each_combination(chosen.len(), n - 1, &mut |comb| {
            let mut meet = below[idx].clone();
            for &c in comb {
                meet.intersect_assign(&below[chosen[c]]);
            }
            if !meet.is_empty() {
                blocked = true;
                true
            } else {
                false
            }
        });
    }
    if !blocked {
        chosen.push(idx);
        linked_free_rec(size, n, below, idx + 1, chosen, best);
        chosen.pop();
    }
    linked_free_rec(size, n, below, idx + 1, chosen, best);
}

/// All nonempty antichains of p, ascending by (size, members).
pub(crate) fn antichain_pool(p: &Preorder) -> Vec<Vec<usize>> {
    let n = p.size();
    assert!(n <= 64, "antichain pool enumeration needs word-sized masks");
    let mut incompat = vec![0u64; n];
    for a in 0..n {
        for b in 0..n {
            if a != b && !p.compatible(a, b) {
                incompat[a] |= 1 << b;
            }
        }
    }
    fn extend(
        v: usize,
        n: usize,
        allowed: u64,
        incompat: &[u64],
        chosen: &mut Vec<usize>,
        pool: &mut Vec<Vec<usize>>,
    ) {
        chosen.push(v);
        pool.push(chosen.clone());
        let next = allowed & incompat[v];
        for u in v + 1..n {
            if next >> u & 1 == 1 {
                extend(u, n, next, incompat, chosen, pool);
            }
        }
        chosen.pop();
    }
    let mut pool = Vec::new();
    let mut chosen = Vec::new();
    for v in 0..n {
        extend(v, n, u64::MAX, &incompat, &mut chosen, &mut pool);
    }
    pool.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    pool
}

/// Antichains no element can extend.
pub(crate) fn maximal_antichains(p: &Preorder) -> Vec<Vec<usize>> {
    antichain_pool(p)
        .into_iter()
        .filter(|a| {
            (0..p.size()).all(|v| {
                a.binary_search(&v).is_ok() || a.iter().any(|&x| p.compatible(x, v))
            })
        })
        .collect()
}

/// Calls `f` on each m-combination of 0..n in lexicographic order until
/// `f` returns true.
pub(crate) fn for_each_combination(n: usize, m: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    if m > n {
        return;
    }
    let mut comb: Vec<usize> = (0..m).collect();
    loop {
        if f(&comb) {
            return;
        }
        // advance to the next combination
        let mut i = m;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if comb[i] != i + n - m {
                break;
            }
            if i == 0 {
                return;
            }
        }
        comb[i] += 1;
        for j in i + 1..m {
            comb[j] = comb[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preorder::v_poset;

    #[test]
    fn combinations_visit_all() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, &mut |c| {
            seen.push(c.to_vec());
            false
        });
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut whole = Vec::new();
        for_each_combination(3, 3, &mut |c| {
            whole.push(c.to_vec());
            false
        });
        assert_eq!(whole, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn cellularity_examples() {
        for n in 1..=6 {
            assert_eq!(Preorder::chain(n).cellularity().unwrap().size, 1);
            assert_eq!(Preorder::flat(n).cellularity().unwrap().size, n);
        }
        assert_eq!(v_poset().cellularity().unwrap().size, 1);
        assert_eq!(
            Preorder::flat(0).cellularity().unwrap_err(),
            Error::EmptyPoset
        );
    }

    #[test]
    fn cellularity_witness_is_antichain() {
        let p = v_poset();
        let w = p.cellularity().unwrap();
        assert!(p.is_antichain(&p.element_set(&w.witness).unwrap()));
        assert_eq!(w.witness.len(), w.size);
    }

    #[test]
    fn bruteforce_agrees_on_smalls() {
        for p in [
            Preorder::chain(5),
            Preorder::flat(5),
            v_poset(),
            Preorder::from_pairs(4, &[(0, 1), (2, 3)], true).unwrap(),
            Preorder::from_pairs(5, &[(0, 1), (1, 2), (3, 4), (0, 4)], true).unwrap(),
        ] {
            assert_eq!(
                p.cellularity().unwrap().size,
                p.cellularity_bruteforce().unwrap().size
            );
        }
    }

    #[test]
    fn density_examples() {
        for n in 1..=5 {
            assert_eq!(Preorder::chain(n).density().unwrap().size, 1);
            assert_eq!(Preorder::flat(n).density().unwrap().size, n);
        }
        let w = v_poset().density().unwrap();
        assert_eq!((w.size, w.witness), (1, vec![2]));
    }

    #[test]
    fn density_fast_path_agrees_with_bruteforce() {
        // includes a two-element equivalence class with a tail
        let cyc = Preorder::from_pairs(3, &[(0, 1), (1, 0), (1, 2)], true).unwrap();
        for p in [Preorder::chain(4), Preorder::flat(4), v_poset(), cyc] {
            let fast = p.density().unwrap();
            let brute = p.density_bruteforce().unwrap();
            assert_eq!(fast.size, brute.size);
            assert!(p.is_dense(&p.element_set(&fast.witness).unwrap()));
        }
    }

    #[test]
    fn n_linked_examples() {
        let flat = Preorder::flat(2);
        let a = flat.element_set(&[0, 1]).unwrap();
        assert!(!flat.is_n_linked(&a, 2).unwrap());

        let v = v_poset();
        let tops = v.element_set(&[0, 1]).unwrap();
        assert!(v.is_n_linked(&tops, 2).unwrap());

        let single = v.element_set(&[0]).unwrap();
        assert!(v.is_n_linked(&single, 2).unwrap()); // vacuous

        assert_eq!(
            flat.is_n_linked(&a, 1).unwrap_err(),
            Error::BadArity { n: 1 }
        );
    }

    #[test]
    fn centered_examples() {
        let v = v_poset();
        assert!(v.is_centered(&v.element_set(&[0, 1]).unwrap()).unwrap());

        let flat = Preorder::flat(2);
        assert!(!flat.is_centered(&flat.element_set(&[0, 1]).unwrap()).unwrap());

        let chain = Preorder::chain(4);
        assert!(chain
            .is_centered(&chain.element_set(&[1, 2, 3]).unwrap())
            .unwrap());

        assert_eq!(
            v.is_centered(&v.element_set(&[]).unwrap()).unwrap_err(),
            Error::EmptySet
        );
    }

    #[test]
    fn centered_iff_bounded_below_on_smalls() {
        let posets = [
            Preorder::chain(4),
            Preorder::flat(4),
            v_poset(),
            Preorder::from_pairs(5, &[(0, 2), (1, 2), (3, 4)], true).unwrap(),
        ];
        for p in posets {
            let n = p.size();
            for mask in 1u32..1 << n {
                let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                let a = p.element_set(&members).unwrap();
                assert_eq!(
                    p.is_centered(&a).unwrap(),
                    p.has_common_lower_bound(&a).unwrap()
                );
            }
        }
    }

    #[test]
    fn linked_free_examples() {
        let flat3 = Preorder::flat(3);
        assert_eq!(flat3.linked_free_number(3).unwrap().size, 3);
        assert_eq!(
            Preorder::chain(3).linked_free_number(2).unwrap().size,
            1
        );
        for p in [Preorder::chain(4), Preorder::flat(4), v_poset()] {
            assert_eq!(
                p.linked_free_number(2).unwrap().size,
                p.cellularity().unwrap().size
            );
        }
        assert_eq!(
            flat3.linked_free_number(1).unwrap_err(),
            Error::BadArity { n: 1 }
        );
    }

    #[test]
    fn linked_free_monotone_in_n() {
        for p in [
            v_poset(),
            Preorder::from_pairs(5, &[(0, 1), (0, 2), (3, 2), (3, 4)], true).unwrap(),
        ] {
            let i2 = p.linked_free_number(2).unwrap().size;
            let i3 = p.linked_free_number(3).unwrap().size;
            let i4 = p.linked_free_number(4).unwrap().size;
            assert!(i2 <= i3 && i3 <= i4);
        }
    }
}
