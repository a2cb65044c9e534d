//! Normalized antichain families over a base preorder and the poset of
//! their finite subsets under reverse inclusion.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::preorder::Preorder;
use crate::ELEMENT_CAP;

/// A family of antichains of a base preorder, normalized so no member is
/// a subset of another member, with the union cached.
#[derive(Clone, PartialEq, Debug)]
pub struct AntichainFamily {
    base: Preorder,
    members: Vec<Vec<usize>>,
    union: Vec<usize>,
}

impl AntichainFamily {
    /// Validates every member as an antichain, then normalizes: members
    /// are sorted, deduplicated, and subset-dominated members dropped
    /// (they contribute no new finite subsets).
    pub fn new(base: Preorder, members: &[Vec<usize>]) -> Result<Self> {
        let mut sets: Vec<Vec<usize>> = Vec::with_capacity(members.len());
        for m in members {
            let set = base.element_set(m)?;
            if let Some((a, b)) = base.compatible_pair(set.members()) {
                return Err(Error::NotAnAntichain { a, b });
            }
            sets.push(set.members().to_vec());
        }
        sets.sort();
        sets.dedup();
        let normalized: Vec<Vec<usize>> = sets
            .iter()
            .filter(|m| {
                !sets
                    .iter()
                    .any(|other| *m != other && is_subset(m, other))
            })
            .cloned()
            .collect();
        let mut union: Vec<usize> = normalized.iter().flatten().copied().collect();
        union.sort_unstable();
        union.dedup();
        Ok(AntichainFamily {
            base,
            members: normalized,
            union,
        })
    }

    pub fn base(&self) -> &Preorder {
        &self.base
    }

    /// Normalized members, sorted lexicographically.
    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn union(&self) -> &[usize] {
        &self.union
    }

    pub fn union_size(&self) -> usize {
        self.union.len()
    }

    /// k-largeness: |union| >= k + 1.
    pub fn is_k_large(&self, k: usize) -> bool {
        self.union.len() >= k + 1
    }
}

pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// The poset of all finite subsets of the family's members, ordered by
/// reverse inclusion (F <= G iff F contains G). The empty set is always
/// listed and is the unique top element.
#[derive(Clone, Debug)]
pub struct FPoset {
    family: AntichainFamily,
    sets: Vec<Vec<usize>>,
    order: Preorder,
}

/// Enumerates all qualifying finite subsets, deduplicates, and
/// materializes the reverse-inclusion preorder.
pub fn f_poset(family: &AntichainFamily) -> Result<FPoset> {
    let mut listed: BTreeSet<Vec<usize>> = BTreeSet::new();
    for member in family.members() {
        if member.len() >= usize::BITS as usize
            || ELEMENT_CAP < (1usize << member.len())
        {
            return Err(Error::SizeOverflow {
                required: 1usize.checked_shl(member.len() as u32).unwrap_or(usize::MAX),
                cap: ELEMENT_CAP,
            });
        }
        for mask in 0u64..1 << member.len() {
            let subset: Vec<usize> = member
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            listed.insert(subset);
            if listed.len() > ELEMENT_CAP {
                return Err(Error::SizeOverflow {
                    required: listed.len(),
                    cap: ELEMENT_CAP,
                });
            }
        }
    }
    let sets: Vec<Vec<usize>> = listed.into_iter().collect();
    let n = sets.len();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            leq[i * n + j] = is_subset(&sets[j], &sets[i]);
        }
    }
    Ok(FPoset {
        family: family.clone(),
        sets,
        order: Preorder::from_matrix_unchecked(n, leq),
    })
}

impl FPoset {
    pub fn family(&self) -> &AntichainFamily {
        &self.family
    }

    /// Listed sets in lexicographic order; positions index the carrier.
    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn order(&self) -> &Preorder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn index_of(&self, set: &[usize]) -> Option<usize> {
        let mut key = set.to_vec();
        key.sort_unstable();
        key.dedup();
        self.sets.binary_search(&key).ok()
    }

    pub fn contains(&self, set: &[usize]) -> bool {
        self.index_of(set).is_some()
    }

    /// The definitional membership predicate: subset of some member.
    pub fn qualifies(&self, set: &[usize]) -> bool {
        let mut key = set.to_vec();
        key.sort_unstable();
        key.dedup();
        self.family
            .members()
            .iter()
            .any(|m| is_subset(&key, m))
    }

    pub fn singleton_index(&self, p: usize) -> Option<usize> {
        self.index_of(&[p])
    }
}

/// Probes whether incompatibility computed order-theoretically in the
/// materialized preorder agrees with the union-membership test for the
/// pair (f, g). Always true when the construction is correct.
pub fn lemma_tech1_check(fp: &FPoset, f: &[usize], g: &[usize]) -> Result<bool> {
    let fi = fp
        .index_of(f)
        .ok_or_else(|| Error::SetNotInFPoset(f.to_vec()))?;
    let gi = fp
        .index_of(g)
        .ok_or_else(|| Error::SetNotInFPoset(g.to_vec()))?;
    let order_compatible = fp.order().compatible(fi, gi);
    let mut union: Vec<usize> = f.iter().chain(g.iter()).copied().collect();
    union.sort_unstable();
    union.dedup();
    Ok(order_compatible == fp.contains(&union))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_family() -> AntichainFamily {
        AntichainFamily::new(Preorder::flat(3), &[vec![0, 1], vec![1, 2]]).unwrap()
    }

    #[test]
    fn family_rejects_non_antichain_member() {
        let chain = Preorder::chain(2);
        let err = AntichainFamily::new(chain, &[vec![0, 1]]).unwrap_err();
        assert_eq!(err, Error::NotAnAntichain { a: 0, b: 1 });
    }

    #[test]
    fn family_normalizes_subset_members() {
        let base = Preorder::flat(3);
        let fam =
            AntichainFamily::new(base.clone(), &[vec![0], vec![0, 1], vec![], vec![1, 0]]).unwrap();
        assert_eq!(fam.members(), &[vec![0, 1]]);
        assert_eq!(fam.union(), &[0, 1]);

        let empty_only = AntichainFamily::new(base.clone(), &[vec![]]).unwrap();
        assert_eq!(empty_only.members(), &[Vec::<usize>::new()]);

        let none = AntichainFamily::new(base, &[]).unwrap();
        assert!(none.members().is_empty());
        assert_eq!(none.union_size(), 0);
    }

    #[test]
    fn k_largeness_threshold() {
        let fam = example_family();
        assert_eq!(fam.union_size(), 3);
        assert!(fam.is_k_large(2));
        assert!(!fam.is_k_large(3));
    }

    #[test]
    fn f_poset_singleton_member() {
        let base = Preorder::flat(1);
        let fam = AntichainFamily::new(base, &[vec![0]]).unwrap();
        let fp = f_poset(&fam).unwrap();
        assert_eq!(fp.sets(), &[vec![], vec![0]]);
        // {0} <= {} (reverse inclusion); {} is the top
        assert!(fp.order().leq(1, 0));
        assert!(!fp.order().leq(0, 1));
    }

    #[test]
    fn f_poset_of_empty_set_family() {
        let fam = AntichainFamily::new(Preorder::flat(2), &[vec![]]).unwrap();
        let fp = f_poset(&fam).unwrap();
        assert_eq!(fp.sets(), &[Vec::<usize>::new()]);
        assert_eq!(fp.order().size(), 1);
    }

    #[test]
    fn f_poset_example_six_sets() {
        let fp = f_poset(&example_family()).unwrap();
        assert_eq!(
            fp.sets(),
            &[vec![], vec![0], vec![0, 1], vec![1], vec![1, 2], vec![2]]
        );
        // empty set is the unique top
        let top = fp.index_of(&[]).unwrap();
        for i in 0..fp.len() {
            assert!(fp.order().leq(i, top));
        }
        assert_eq!(fp.order().cellularity().unwrap().size, 2);
        assert_eq!(fp.order().cellularity_bruteforce().unwrap().size, 2);
    }

    #[test]
    fn f_poset_incompatibility_graph_shape() {
        let fp = f_poset(&example_family()).unwrap();
        let idx = |s: &[usize]| fp.index_of(s).unwrap();
        let incompat = |a: &[usize], b: &[usize]| !fp.order().compatible(idx(a), idx(b));
        // the 4-cycle {0}-{2}-{0,1}-{1,2} of incompatible pairs
        assert!(incompat(&[0], &[2]));
        assert!(incompat(&[2], &[0, 1]));
        assert!(incompat(&[0, 1], &[1, 2]));
        assert!(incompat(&[1, 2], &[0]));
        // and the compatible pairs through {1}
        assert!(!incompat(&[0], &[1]));
        assert!(!incompat(&[1], &[2]));
        assert!(!incompat(&[0], &[0, 1]));
    }

    #[test]
    fn membership_matches_definitional_predicate() {
        let fp = f_poset(&example_family()).unwrap();
        for mask in 0u32..8 {
            let candidate: Vec<usize> = (0..3).filter(|&p| mask >> p & 1 == 1).collect();
            assert_eq!(fp.contains(&candidate), fp.qualifies(&candidate));
        }
    }

    #[test]
    fn tech1_examples() {
        let fp = f_poset(&example_family()).unwrap();
        assert!(lemma_tech1_check(&fp, &[0], &[2]).unwrap());
        assert!(lemma_tech1_check(&fp, &[0], &[1]).unwrap());
        assert!(lemma_tech1_check(&fp, &[0, 1], &[0, 1]).unwrap());
        assert_eq!(
            lemma_tech1_check(&fp, &[0, 2], &[1]).unwrap_err(),
            Error::SetNotInFPoset(vec![0, 2])
        );
    }
}
