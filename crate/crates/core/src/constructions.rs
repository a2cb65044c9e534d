//! Derived structures: coordinate-wise products, finite-support products
//! of pointed preorders, the diagonal pair family over a subset poset,
//! antichain-derived families, and antichain pullbacks along monotone
//! surjections.

use crate::error::{Error, Result};
use crate::fposet::{f_poset, AntichainFamily, FPoset};
use crate::preorder::{ElementSet, MonotoneMap, Preorder};
use crate::ELEMENT_CAP;

/// Coordinate-wise product. The carrier pairs row-major with the left
/// factor major: (p, q) sits at index p * |Q| + q. The pairing is part
/// of the external contract.
pub fn product(p: &Preorder, q: &Preorder) -> Result<Preorder> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptyPoset);
    }
    let n = p
        .size()
        .checked_mul(q.size())
        .filter(|&n| n <= ELEMENT_CAP)
        .ok_or(Error::SizeOverflow {
            required: p.size().saturating_mul(q.size()),
            cap: ELEMENT_CAP,
        })?;
    let qs = q.size();
    let mut leq = vec![false; n * n];
    for a in 0..n {
        let (pa, qa) = (a / qs, a % qs);
        for b in 0..n {
            let (pb, qb) = (b / qs, b % qs);
            leq[a * n + b] = p.leq(pa, pb) && q.leq(qa, qb);
        }
    }
    Ok(Preorder::from_matrix_unchecked(n, leq))
}

pub fn pair_index(q_size: usize, p: usize, q: usize) -> usize {
    p * q_size + q
}

pub fn unpair_index(q_size: usize, idx: usize) -> (usize, usize) {
    (idx / q_size, idx % q_size)
}

/// A preorder with a designated largest element.
#[derive(Clone, Debug)]
pub struct PointedPreorder {
    order: Preorder,
    top: usize,
}

impl PointedPreorder {
    pub fn new(order: Preorder, top: usize) -> Result<Self> {
        if top >= order.size() {
            return Err(Error::IndexOutOfRange {
                index: top,
                size: order.size(),
            });
        }
        if (0..order.size()).any(|p| !order.leq(p, top)) {
            return Err(Error::NoTopElement { factor: 0 });
        }
        Ok(PointedPreorder { order, top })
    }

    /// Picks the least index that lies above everything.
    pub fn detect(order: Preorder) -> Result<Self> {
        let top = (0..order.size())
            .find(|&t| (0..order.size()).all(|p| order.leq(p, t)))
            .ok_or(Error::NoTopElement { factor: 0 })?;
        Ok(PointedPreorder { order, top })
    }

    pub fn order(&self) -> &Preorder {
        &self.order
    }

    pub fn top(&self) -> usize {
        self.top
    }
}

/// Full coordinate-wise product of pointed factors (a finite index set
/// makes every support finite), with the support of each tuple recorded.
/// Tuples index row-major, leftmost factor major.
#[derive(Clone, Debug)]
pub struct FiniteSupportProduct {
    pub order: Preorder,
    pub supports: Vec<Vec<usize>>,
}

pub fn finite_support_product(factors: &[PointedPreorder]) -> Result<FiniteSupportProduct> {
    if factors.is_empty() {
        return Err(Error::EmptyPoset);
    }
    for (i, f) in factors.iter().enumerate() {
        // re-validate the invariant and report the offending factor
        if (0..f.order.size()).any(|p| !f.order.leq(p, f.top)) {
            return Err(Error::NoTopElement { factor: i });
        }
    }
    let mut n: usize = 1;
    for f in factors {
        n = n
            .checked_mul(f.order.size())
            .filter(|&n| n <= ELEMENT_CAP)
            .ok_or(Error::SizeOverflow {
                required: usize::MAX,
                cap: ELEMENT_CAP,
            })?;
    }
    let decode = |idx: usize| -> Vec<usize> {
        let mut rest = idx;
        let mut coords = vec![0; factors.len()];
        for (i, f) in factors.iter().enumerate().rev() {
            coords[i] = rest % f.order.size();
            rest /= f.order.size();
        }
        coords
    };
    let mut leq = vec![false; n * n];
    let mut supports = Vec::with_capacity(n);
    for a in 0..n {
        let ca = decode(a);
        supports.push(
            ca.iter()
                .enumerate()
                .filter(|&(i, &c)| c != factors[i].top)
                .map(|(i, _)| i)
                .collect(),
        );
        for b in 0..n {
            let cb = decode(b);
            leq[a * n + b] = ca
                .iter()
                .zip(&cb)
                .enumerate()
                .all(|(i, (&x, &y))| factors[i].order.leq(x, y));
        }
    }
    Ok(FiniteSupportProduct {
        order: Preorder::from_matrix_unchecked(n, leq),
        supports,
    })
}

/// The diagonal pair family over base x F(A): one pair (p, {p}) per
/// element of the family's union, verified to be an antichain of the
/// product.
#[derive(Clone, Debug)]
pub struct TFamily {
    pub fposet: FPoset,
    pub product: Preorder,
    pub set: ElementSet,
    pub antichain_verified: bool,
}

pub fn t_family(family: &AntichainFamily) -> Result<TFamily> {
    let fp = f_poset(family)?;
    let prod = product(family.base(), fp.order())?;
    let members: Vec<usize> = family
        .union()
        .iter()
        .map(|&p| {
            let si = fp.singleton_index(p).expect("union elements have singletons");
            pair_index(fp.len(), p, si)
        })
        .collect();
    let set = prod.element_set(&members)?;
    let verified = prod.is_antichain(&set);
    Ok(TFamily {
        fposet: fp,
        product: prod,
        set,
        antichain_verified: verified,
    })
}

/// Derives a family of antichains of P from an antichain W of P x Q: for
/// each r in Q, the set of first coordinates of W-pairs whose second
/// coordinate lies above r. Every derived set is verified to be an
/// antichain; empty sets are dropped and the rest normalized.
pub fn witness_family(p: &Preorder, q: &Preorder, w: &ElementSet) -> Result<AntichainFamily> {
    let prod = product(p, q)?;
    assert_eq!(w.base_size(), prod.size(), "set built over a different carrier");
    if let Some((a, b)) = prod.compatible_pair(w.members()) {
        return Err(Error::NotAnAntichain { a, b });
    }
    let pairs: Vec<(usize, usize)> = w
        .members()
        .iter()
        .map(|&idx| unpair_index(q.size(), idx))
        .collect();
    let mut members = Vec::new();
    for r in 0..q.size() {
        let mut a_r: Vec<usize> = pairs
            .iter()
            .filter(|&&(_, qq)| q.leq(r, qq))
            .map(|&(pp, _)| pp)
            .collect();
        a_r.sort_unstable();
        a_r.dedup();
        if a_r.is_empty() {
            continue;
        }
        if let Some((a, b)) = p.compatible_pair(&a_r) {
            // cannot happen while W is an antichain; kept as a hard check
            return Err(Error::NotAnAntichain { a, b });
        }
        members.push(a_r);
    }
    AntichainFamily::new(p.clone(), &members)
}

/// Pulls an antichain of target x R back along a monotone surjection by
/// picking the least-index preimage in each first coordinate. The result
/// is an antichain of source x R of the same size.
pub fn pullback_antichain(m: &MonotoneMap, r: &Preorder, w: &ElementSet) -> Result<ElementSet> {
    if !m.is_monotone_surjection() {
        let missing = (0..m.target().size())
            .find(|&t| m.least_preimage(t).is_none())
            .unwrap_or(0);
        return Err(Error::NotSurjective { missing });
    }
    let target_prod = product(m.target(), r)?;
    assert_eq!(w.base_size(), target_prod.size(), "set built over a different carrier");
    if let Some((a, b)) = target_prod.compatible_pair(w.members()) {
        return Err(Error::NotAnAntichain { a, b });
    }
    let source_prod = product(m.source(), r)?;
    let selected: Vec<usize> = w
        .members()
        .iter()
        .map(|&idx| {
            let (q, rr) = unpair_index(r.size(), idx);
            let p = m.least_preimage(q).expect("surjection checked above");
            pair_index(r.size(), p, rr)
        })
        .collect();
    let set = source_prod.element_set(&selected)?;
    if set.len() != w.len() {
        // distinct W pairs always select distinct preimage pairs
        return Err(Error::PreconditionUnmet(
            "pullback selection collapsed two pairs".to_string(),
        ));
    }
    if let Some((a, b)) = source_prod.compatible_pair(set.members()) {
        return Err(Error::NotAnAntichain { a, b });
    }
    Ok(set)
}
