//! Finite topological spaces as explicit open-set lattices, the poset of
//! nonempty opens, and the down-set space of a preorder.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::preorder::Preorder;
use crate::ELEMENT_CAP;

/// Point masks fit in a machine word.
const MAX_POINTS: usize = 64;

/// A finite topological space: an explicit list of open point-sets,
/// stored as bitmasks sorted ascending.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteSpace {
    points: usize,
    opens: Vec<u64>,
}

impl FiniteSpace {
    /// Validates the open lattice: contains the empty and full sets and
    /// is closed under pairwise union and intersection (finite spaces:
    /// closure under arbitrary unions follows).
    pub fn new(points: usize, opens: &[Vec<usize>]) -> Result<Self> {
        if points > MAX_POINTS {
            return Err(Error::SizeOverflow {
                required: points,
                cap: MAX_POINTS,
            });
        }
        let mut masks = BTreeSet::new();
        for open in opens {
            let mut m = 0u64;
            for &p in open {
                if p >= points {
                    return Err(Error::IndexOutOfRange {
                        index: p,
                        size: points,
                    });
                }
                m |= 1 << p;
            }
            masks.insert(m);
        }
        let full = full_mask(points);
        if !masks.contains(&0) {
            return Err(Error::InvalidSpace("empty set is not open".to_string()));
        }
        if !masks.contains(&full) {
            return Err(Error::InvalidSpace("full set is not open".to_string()));
        }
        for &a in &masks {
            for &b in &masks {
                if !masks.contains(&(a | b)) {
                    return Err(Error::InvalidSpace(format!(
                        "not closed under union: {:?} | {:?}",
                        mask_to_set(a),
                        mask_to_set(b)
                    )));
                }
                if !masks.contains(&(a & b)) {
                    return Err(Error::InvalidSpace(format!(
                        "not closed under intersection: {:?} & {:?}",
                        mask_to_set(a),
                        mask_to_set(b)
                    )));
                }
            }
        }
        Ok(FiniteSpace {
            points,
            opens: masks.into_iter().collect(),
        })
    }

    /// Generates the space from a basis by closing under unions, then
    /// validates the result as a topology.
    pub fn from_basis(points: usize, basis: &[Vec<usize>]) -> Result<Self> {
        if points > MAX_POINTS {
            return Err(Error::SizeOverflow {
                required: points,
                cap: MAX_POINTS,
            });
        }
        let mut masks = BTreeSet::new();
        masks.insert(0u64);
        for open in basis {
            let mut m = 0u64;
            for &p in open {
                if p >= points {
                    return Err(Error::IndexOutOfRange {
                        index: p,
                        size: points,
                    });
                }
                m |= 1 << p;
            }
            masks.insert(m);
        }
        union_close(&mut masks)?;
        let opens: Vec<Vec<usize>> = masks.iter().map(|&m| mask_to_set(m)).collect();
        FiniteSpace::new(points, &opens)
    }

    pub(crate) fn from_masks(points: usize, masks: BTreeSet<u64>) -> Self {
        FiniteSpace {
            points,
            opens: masks.into_iter().collect(),
        }
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Opens as sorted bit-pattern masks.
    pub fn open_masks(&self) -> &[u64] {
        &self.opens
    }

    pub fn opens_as_sets(&self) -> Vec<Vec<usize>> {
        self.opens.iter().map(|&m| mask_to_set(m)).collect()
    }
}

fn full_mask(points: usize) -> u64 {
    if points == 64 {
        u64::MAX
    } else {
        (1 << points) - 1
    }
}

fn mask_to_set(m: u64) -> Vec<usize> {
    (0..64).filter(|&p| m >> p & 1 == 1).collect()
}

fn union_close(masks: &mut BTreeSet<u64>) -> Result<()> {
    loop {
        let snapshot: Vec<u64> = masks.iter().copied().collect();
        let mut grew = false;
        for (i, &a) in snapshot.iter().enumerate() {
            for &b in &snapshot[i + 1..] {
                if masks.insert(a | b) {
                    grew = true;
                }
            }
        }
        if masks.len() > ELEMENT_CAP {
            return Err(Error::SizeOverflow {
                required: masks.len(),
                cap: ELEMENT_CAP,
            });
        }
        if !grew {
            return Ok(());
        }
    }
}

/// The poset of nonempty opens under set inclusion, elements ordered as
/// ascending bit patterns.
pub fn open_poset(x: &FiniteSpace) -> Result<Preorder> {
    let nonempty: Vec<u64> = x.open_masks().iter().copied().filter(|&m| m != 0).collect();
    if nonempty.is_empty() {
        return Err(Error::NoNonemptyOpen);
    }
    let n = nonempty.len();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            leq[i * n + j] = nonempty[i] & !nonempty[j] == 0;
        }
    }
    Ok(Preorder::from_matrix_unchecked(n, leq))
}

/// Independent predicate: is the point set down-closed in q?
pub fn is_down_closed(q: &Preorder, set: &[usize]) -> bool {
    set.iter()
        .all(|&s| (0..q.size()).all(|t| !q.leq(t, s) || set.contains(&t)))
}

/// The space on q's carrier whose opens are all down-closed sets
/// (equivalently, all unions of down-cones).
pub fn alexandrov_space(q: &Preorder) -> Result<FiniteSpace> {
    let n = q.size();
    if n > MAX_POINTS.min(ELEMENT_CAP.ilog2() as usize) {
        return Err(Error::SizeOverflow {
            required: n,
            cap: MAX_POINTS.min(ELEMENT_CAP.ilog2() as usize),
        });
    }
    let below: Vec<u64> = (0..n)
        .map(|p| {
            (0..n)
                .filter(|&r| q.leq(r, p))
                .fold(0u64, |m, r| m | 1 << r)
        })
        .collect();
    let mut masks = BTreeSet::new();
    for m in 0..1u64 << n {
        if (0..n).all(|p| m >> p & 1 == 0 || below[p] & !m == 0) {
            masks.insert(m);
        }
    }
    Ok(FiniteSpace::from_masks(n, masks))
}

/// Product space: points pair row-major (left major), opens generated by
/// boxes U x V under unions.
pub fn space_product(x: &FiniteSpace, y: &FiniteSpace) -> Result<FiniteSpace> {
    let points = x
        .points()
        .checked_mul(y.points())
        .filter(|&n| n <= MAX_POINTS)
        .ok_or(Error::SizeOverflow {
            required: x.points().saturating_mul(y.points()),
            cap: MAX_POINTS,
        })?;
    let ny = y.points();
    let mut masks = BTreeSet::new();
    for &u in x.open_masks() {
        for &v in y.open_masks() {
            let mut m = 0u64;
            for px in 0..x.points() {
                if u >> px & 1 == 1 {
                    for py in 0..ny {
                        if v >> py & 1 == 1 {
                            m |= 1 << (px * ny + py);
                        }
                    }
                }
            }
            masks.insert(m);
        }
    }
    union_close(&mut masks)?;
    Ok(FiniteSpace::from_masks(points, masks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preorder::v_poset;

    fn discrete(n: usize) -> FiniteSpace {
        let opens: Vec<Vec<usize>> = (0..1u64 << n).map(mask_to_set).collect();
        FiniteSpace::new(n, &opens).unwrap()
    }

    fn sierpinski() -> FiniteSpace {
        FiniteSpace::new(2, &[vec![], vec![0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn space_validation() {
        assert!(FiniteSpace::new(2, &[vec![], vec![0, 1]]).is_ok());
        assert!(matches!(
            FiniteSpace::new(2, &[vec![0, 1]]).unwrap_err(),
            Error::InvalidSpace(_)
        ));
        // missing the union {0,1}
        assert!(matches!(
            FiniteSpace::new(2, &[vec![], vec![0], vec![1]]).unwrap_err(),
            Error::InvalidSpace(_)
        ));
    }

    #[test]
    fn from_basis_closes_unions() {
        let x = FiniteSpace::from_basis(3, &[vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(x.open_masks().len(), 8);
        // a basis whose union-closure misses an intersection is rejected
        assert!(matches!(
            FiniteSpace::from_basis(3, &[vec![0, 1], vec![1, 2]]).unwrap_err(),
            Error::InvalidSpace(_)
        ));
    }

    #[test]
    fn open_poset_examples() {
        let d2 = open_poset(&discrete(2)).unwrap();
        assert_eq!(d2.size(), 3);
        assert_eq!(d2.cellularity().unwrap().size, 2);

        let indiscrete = FiniteSpace::new(2, &[vec![], vec![0, 1]]).unwrap();
        let p = open_poset(&indiscrete).unwrap();
        assert_eq!(p.size(), 1);
        assert_eq!(p.cellularity().unwrap().size, 1);

        let s = open_poset(&sierpinski()).unwrap();
        assert_eq!(s, Preorder::chain(2));
        assert_eq!(s.cellularity().unwrap().size, 1);

        let zero = FiniteSpace::new(0, &[vec![]]).unwrap();
        assert_eq!(open_poset(&zero).unwrap_err(), Error::NoNonemptyOpen);
    }

    #[test]
    fn open_poset_compatibility_is_intersection() {
        for x in [discrete(3), sierpinski(), alexandrov_space(&v_poset()).unwrap()] {
            let p = open_poset(&x).unwrap();
            let nonempty: Vec<u64> = x
                .open_masks()
                .iter()
                .copied()
                .filter(|&m| m != 0)
                .collect();
            for i in 0..p.size() {
                for j in 0..p.size() {
                    assert_eq!(p.compatible(i, j), nonempty[i] & nonempty[j] != 0);
                }
            }
        }
    }

    #[test]
    fn alexandrov_examples() {
        let chain = alexandrov_space(&Preorder::chain(2)).unwrap();
        assert_eq!(chain, sierpinski());

        let flat = alexandrov_space(&Preorder::flat(2)).unwrap();
        assert_eq!(flat, discrete(2));
        assert_eq!(open_poset(&flat).unwrap().cellularity().unwrap().size, 2);

        let v = alexandrov_space(&v_poset()).unwrap();
        let expected: Vec<Vec<usize>> =
            vec![vec![], vec![2], vec![0, 2], vec![1, 2], vec![0, 1, 2]];
        assert_eq!(v.opens_as_sets(), expected);
        assert_eq!(open_poset(&v).unwrap().cellularity().unwrap().size, 1);
    }

    #[test]
    fn alexandrov_opens_are_exactly_down_closed_sets() {
        for q in [Preorder::chain(3), Preorder::flat(3), v_poset()] {
            let x = alexandrov_space(&q).unwrap();
            for m in 0..1u64 << q.size() {
                let set = mask_to_set(m);
                assert_eq!(
                    x.open_masks().binary_search(&m).is_ok(),
                    is_down_closed(&q, &set)
                );
            }
        }
    }

    #[test]
    fn alexandrov_preserves_cellularity_small() {
        for q in [
            Preorder::chain(4),
            Preorder::flat(4),
            v_poset(),
            Preorder::from_pairs(4, &[(0, 1), (1, 0), (2, 3)], true).unwrap(),
        ] {
            let x = alexandrov_space(&q).unwrap();
            assert_eq!(
                open_poset(&x).unwrap().cellularity().unwrap().size,
                q.cellularity().unwrap().size
            );
        }
    }

    #[test]
    fn space_product_with_point_is_homeomorphic_copy() {
        let point = FiniteSpace::new(1, &[vec![], vec![0]]).unwrap();
        for x in [discrete(2), sierpinski()] {
            let prod = space_product(&x, &point).unwrap();
            // pairing (p, 0) -> p leaves masks unchanged
            assert_eq!(prod.open_masks(), x.open_masks());
        }
    }

    #[test]
    fn space_product_examples() {
        let d2 = discrete(2);
        let prod = space_product(&d2, &d2).unwrap();
        assert_eq!(prod, discrete(4));
        assert_eq!(open_poset(&prod).unwrap().cellularity().unwrap().size, 4);

        let s = space_product(&sierpinski(), &d2).unwrap();
        assert_eq!(open_poset(&s).unwrap().cellularity().unwrap().size, 2);
    }

    #[test]
    fn space_product_matches_poset_product_cellularity() {
        use crate::constructions::product;
        for (x, y) in [
            (discrete(2), sierpinski()),
            (sierpinski(), sierpinski()),
            (discrete(2), discrete(2)),
        ] {
            let via_space = open_poset(&space_product(&x, &y).unwrap())
                .unwrap()
                .cellularity()
                .unwrap()
                .size;
            let via_posets = product(&open_poset(&x).unwrap(), &open_poset(&y).unwrap())
                .unwrap()
                .cellularity()
                .unwrap()
                .size;
            assert_eq!(via_space, via_posets);
        }
    }
}
