//! Finite preorders: a carrier `0..size` with a reflexive transitive relation.

use crate::bits::Bits;
use crate::error::{Error, Result};

/// A finite preorder. `leq` is stored row-major in closed
/// (reflexive-transitive) form; `leq[i*size + j]` means `i <= j`.
///
/// Equivalence classes (`p <= q <= p` with `p != q`) are permitted.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Preorder {
    size: usize,
    leq: Vec<bool>,
}

impl Preorder {
    /// Builds a preorder from a list of related pairs. With `auto_close`
    /// the reflexive-transitive closure of the pairs is taken; without it
    /// the relation is used as given and both invariants are verified.
    pub fn from_pairs(size: usize, pairs: &[(usize, usize)], auto_close: bool) -> Result<Self> {
        let mut leq = vec![false; size * size];
        for &(i, j) in pairs {
            if i >= size {
                return Err(Error::IndexOutOfRange { index: i, size });
            }
            if j >= size {
                return Err(Error::IndexOutOfRange { index: j, size });
            }
            leq[i * size + j] = true;
        }
        if auto_close {
            for i in 0..size {
                leq[i * size + i] = true;
            }
            transitive_close(&mut leq, size);
            Ok(Preorder { size, leq })
        } else {
            let p = Preorder { size, leq };
            p.verify()?;
            Ok(p)
        }
    }

    /// Wraps an already-closed matrix; verifies both invariants.
    pub fn from_matrix(size: usize, leq: Vec<bool>) -> Result<Self> {
        if leq.len() != size * size {
            return Err(Error::Parse(format!(
                "relation matrix has {} entries, expected {}",
                leq.len(),
                size * size
            )));
        }
        let p = Preorder { size, leq };
        p.verify()?;
        Ok(p)
    }

    pub(crate) fn from_matrix_unchecked(size: usize, leq: Vec<bool>) -> Self {
        debug_assert_eq!(leq.len(), size * size);
        Preorder { size, leq }
    }

    fn verify(&self) -> Result<()> {
        for i in 0..self.size {
            if !self.leq[i * self.size + i] {
                return Err(Error::RelationNotReflexive { index: i });
            }
        }
        for i in 0..self.size {
            for j in 0..self.size {
                if !self.leq[i * self.size + j] {
                    continue;
                }
                for k in 0..self.size {
                    if self.leq[j * self.size + k] && !self.leq[i * self.size + k] {
                        return Err(Error::RelationNotTransitive { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// The n-element chain 0 <= 1 <= ... <= n-1.
    pub fn chain(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in i..n {
                leq[i * n + j] = true;
            }
        }
        Preorder { size: n, leq }
    }

    /// The flat n-antichain: only the diagonal.
    pub fn flat(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        Preorder { size: n, leq }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// i <= j. Indices must be in range.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        assert!(i < self.size && j < self.size, "index out of range");
        self.leq[i * self.size + j]
    }

    /// Related pairs (i, j) with i <= j, in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.size {
            for j in 0..self.size {
                if self.leq[i * self.size + j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// True iff some r satisfies r <= p and r <= q. Reflexivity makes
    /// compatible(p, p) always true.
    pub fn compatible(&self, p: usize, q: usize) -> bool {
        assert!(p < self.size && q < self.size, "index out of range");
        (0..self.size).any(|r| self.leq[r * self.size + p] && self.leq[r * self.size + q])
    }

    /// True iff every pair of distinct members is incompatible. The empty
    /// set and singletons are antichains.
    pub fn is_antichain(&self, set: &ElementSet) -> bool {
        assert_eq!(set.base_size, self.size, "set built over a different carrier");
        self.is_antichain_slice(set.members())
    }

    pub(crate) fn is_antichain_slice(&self, members: &[usize]) -> bool {
        for (a, &p) in members.iter().enumerate() {
            for &q in &members[a + 1..] {
                if p != q && self.compatible(p, q) {
                    return false;
                }
            }
        }
        true
    }

    /// Finds a compatible pair inside `members`, if any.
    pub(crate) fn compatible_pair(&self, members: &[usize]) -> Option<(usize, usize)> {
        for (a, &p) in members.iter().enumerate() {
            for &q in &members[a + 1..] {
                if p != q && self.compatible(p, q) {
                    return Some((p, q));
                }
            }
        }
        None
    }

    /// True iff every element has a member of `d` below it.
    pub fn is_dense(&self, d: &ElementSet) -> bool {
        assert_eq!(d.base_size, self.size, "set built over a different carrier");
        (0..self.size).all(|p| d.members().iter().any(|&q| self.leq(q, p)))
    }

    /// Bitmask of elements below `p` (inclusive).
    pub(crate) fn below(&self, p: usize) -> Bits {
        let mut b = Bits::new(self.size);
        for r in 0..self.size {
            if self.leq[r * self.size + p] {
                b.set(r);
            }
        }
        b
    }

    pub(crate) fn below_all(&self) -> Vec<Bits> {
        (0..self.size).map(|p| self.below(p)).collect()
    }

    /// Validated element set over this preorder.
    pub fn element_set(&self, members: &[usize]) -> Result<ElementSet> {
        ElementSet::new(self, members)
    }
}

fn transitive_close(leq: &mut [bool], n: usize) {
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
}

/// A subset of a preorder's carrier, kept sorted and deduplicated, tagged
/// with the carrier size it was validated against.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ElementSet {
    base_size: usize,
    members: Vec<usize>,
}

impl ElementSet {
    pub fn new(base: &Preorder, members: &[usize]) -> Result<Self> {
        let mut m = members.to_vec();
        m.sort_unstable();
        m.dedup();
        if let Some(&bad) = m.iter().find(|&&i| i >= base.size()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                size: base.size(),
            });
        }
        Ok(ElementSet {
            base_size: base.size(),
            members: m,
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.members.binary_search(&p).is_ok()
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }
}

/// A structurally valid map between two preorders; monotonicity and
/// surjectivity are queried, not enforced at construction.
#[derive(Clone, Debug)]
pub struct MonotoneMap {
    source: Preorder,
    target: Preorder,
    image: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: Preorder, target: Preorder, image: Vec<usize>) -> Result<Self> {
        if image.len() != source.size() {
            return Err(Error::Parse(format!(
                "map has {} entries for a source of size {}",
                image.len(),
                source.size()
            )));
        }
        if let Some(&bad) = image.iter().find(|&&i| i >= target.size()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                size: target.size(),
            });
        }
        Ok(MonotoneMap {
            source,
            target,
            image,
        })
    }

    pub fn source(&self) -> &Preorder {
        &self.source
    }

    pub fn target(&self) -> &Preorder {
        &self.target
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, p: usize) -> usize {
        self.image[p]
    }

    /// True iff the map is order-preserving and onto the target.
    pub fn is_monotone_surjection(&self) -> bool {
        let n = self.source.size();
        for p in 0..n {
            for q in 0..n {
                if self.source.leq(p, q) && !self.target.leq(self.image[p], self.image[q]) {
                    return false;
                }
            }
        }
        let mut hit = vec![false; self.target.size()];
        for &t in &self.image {
            hit[t] = true;
        }
        hit.iter().all(|&h| h)
    }

    /// Least-index preimage of a target element, if any.
    pub fn least_preimage(&self, q: usize) -> Option<usize> {
        self.image.iter().position(|&t| t == q)
    }
}

#[cfg(test)]
pub(crate) fn v_poset() -> Preorder {
    // 2 <= 0 and 2 <= 1; 0, 1 incomparable tops.
    Preorder::from_pairs(3, &[(2, 0), (2, 1)], true).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_single_edge() {
        let p = Preorder::from_pairs(2, &[(0, 1)], true).unwrap();
        assert_eq!(p.pairs(), vec![(0, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn missing_diagonal_rejected() {
        let err = Preorder::from_pairs(3, &[], false).unwrap_err();
        assert_eq!(err, Error::RelationNotReflexive { index: 0 });
    }

    #[test]
    fn missing_transitive_edge_rejected() {
        let pairs = [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)];
        let err = Preorder::from_pairs(3, &pairs, false).unwrap_err();
        assert_eq!(err, Error::RelationNotTransitive { i: 0, j: 1, k: 2 });
    }

    #[test]
    fn out_of_range_pair_rejected() {
        let err = Preorder::from_pairs(2, &[(0, 5)], true).unwrap_err();
        assert_eq!(err, Error::IndexOutOfRange { index: 5, size: 2 });
    }

    #[test]
    fn compatible_examples() {
        let chain = Preorder::chain(2);
        assert!(chain.compatible(0, 1)); // r = 0

        let flat = Preorder::flat(2);
        assert!(!flat.compatible(0, 1));
        assert!(flat.compatible(0, 0));

        let v = v_poset();
        assert!(v.compatible(0, 1)); // r = 2
    }

    #[test]
    fn compatible_is_symmetric_and_above_leq() {
        for p in [Preorder::chain(4), Preorder::flat(4), v_poset()] {
            for a in 0..p.size() {
                for b in 0..p.size() {
                    assert_eq!(p.compatible(a, b), p.compatible(b, a));
                    if p.leq(a, b) {
                        assert!(p.compatible(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn antichain_examples() {
        let flat = Preorder::flat(3);
        assert!(flat.is_antichain(&flat.element_set(&[0, 1, 2]).unwrap()));

        let chain = Preorder::chain(2);
        assert!(!chain.is_antichain(&chain.element_set(&[0, 1]).unwrap()));
        assert!(chain.is_antichain(&chain.element_set(&[1]).unwrap()));
        assert!(chain.is_antichain(&chain.element_set(&[]).unwrap()));
    }

    #[test]
    fn dense_examples() {
        let chain = Preorder::chain(3);
        assert!(chain.is_dense(&chain.element_set(&[0]).unwrap()));

        let flat = Preorder::flat(2);
        assert!(!flat.is_dense(&flat.element_set(&[0]).unwrap()));
        assert!(flat.is_dense(&flat.element_set(&[0, 1]).unwrap()));
    }

    #[test]
    fn element_set_validates_and_normalizes() {
        let p = Preorder::flat(3);
        let s = p.element_set(&[2, 0, 2]).unwrap();
        assert_eq!(s.members(), &[0, 2]);
        assert!(p.element_set(&[3]).is_err());
    }

    #[test]
    fn monotone_surjection_examples() {
        let p = Preorder::chain(3);
        let id = MonotoneMap::new(p.clone(), p.clone(), vec![0, 1, 2]).unwrap();
        assert!(id.is_monotone_surjection());

        let one = Preorder::chain(1);
        let konst = MonotoneMap::new(p.clone(), one, vec![0, 0, 0]).unwrap();
        assert!(konst.is_monotone_surjection());

        // flat source onto a chain: monotone vacuously.
        let flat = Preorder::flat(2);
        let chain = Preorder::chain(2);
        let m = MonotoneMap::new(flat, chain.clone(), vec![0, 1]).unwrap();
        assert!(m.is_monotone_surjection());

        // a chain collapsed the wrong way is not monotone.
        let down = MonotoneMap::new(chain.clone(), chain.clone(), vec![1, 0]).unwrap();
        assert!(!down.is_monotone_surjection());

        // not onto.
        let miss = MonotoneMap::new(chain.clone(), chain, vec![0, 0]).unwrap();
        assert!(!miss.is_monotone_surjection());
    }
}
