//! Instance supply: canonical labeling, exhaustive enumeration of
//! preorders up to isomorphism, an independent labeled brute-force
//! oracle, and seeded random generation.

use std::collections::BTreeSet;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::preorder::Preorder;

/// Exhaustive enumeration feasibility cap.
pub const ENUMERATION_MAX_SIZE: usize = 7;
/// Canonical-form feasibility cap.
pub const CANONICAL_MAX_SIZE: usize = 10;
/// Labeled brute-force oracle cap (2^(n^2-n) relations scanned).
pub const LABELED_ORACLE_MAX_SIZE: usize = 5;

/// Canonical form of a preorder: the permutation applied (old index ->
/// canonical position) and the canonical relation bytes. Isomorphic
/// preorders yield identical bytes.
///
/// Byte layout: the carrier size, then the relation bits packed in
/// "staircase" order — for each position p, first the column bits
/// (0,p)..(p-1,p), then the row bits (p,0)..(p,p-1), then (p,p) — so a
/// depth-p prefix of the labeling search determines the first (p+1)^2
/// bits.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalForm {
    permutation: Vec<usize>,
    bytes: Vec<u8>,
}

impl CanonicalForm {
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Materializes the canonical representative.
    pub fn to_preorder(&self) -> Preorder {
        let (n, bits) = unpack(&self.bytes);
        let mut leq = vec![false; n * n];
        let mut idx = 0;
        for p in 0..n {
            for i in 0..p {
                leq[i * n + p] = bits[idx];
                idx += 1;
            }
            for j in 0..p {
                leq[p * n + j] = bits[idx];
                idx += 1;
            }
            leq[p * n + p] = bits[idx];
            idx += 1;
        }
        Preorder::from_matrix_unchecked(n, leq)
    }
}

fn pack(n: usize, bits: &[bool]) -> Vec<u8> {
    let mut bytes = vec![n as u8];
    let mut acc = 0u8;
    for (i, &b) in bits.iter().enumerate() {
        acc = acc << 1 | b as u8;
        if i % 8 == 7 {
            bytes.push(acc);
            acc = 0;
        }
    }
    if bits.len() % 8 != 0 {
        acc <<= 8 - bits.len() % 8;
        bytes.push(acc);
    }
    bytes
}

fn unpack(bytes: &[u8]) -> (usize, Vec<bool>) {
    let n = bytes[0] as usize;
    let mut bits = Vec::with_capacity(n * n);
    for i in 0..n * n {
        let byte = bytes[1 + i / 8];
        bits.push(byte >> (7 - i % 8) & 1 == 1);
    }
    (n, bits)
}

/// Minimal staircase encoding over all vertex permutations, accelerated
/// by iterated degree-profile refinement and by fixing the relative order
/// of interchangeable (twin) vertices.
pub fn canonical_form(p: &Preorder) -> Result<CanonicalForm> {
    let n = p.size();
    if n > CANONICAL_MAX_SIZE {
        return Err(Error::CapExceeded {
            requested: n,
            cap: CANONICAL_MAX_SIZE,
        });
    }
    if n == 0 {
        return Ok(CanonicalForm {
            permutation: vec![],
            bytes: vec![0],
        });
    }

    let colors = refine(p);
    // Positions are grouped by color class, classes in ascending color.
    let mut by_color: Vec<(usize, usize)> = colors.iter().copied().enumerate().map(|(v, c)| (c, v)).collect();
    by_color.sort_unstable();
    let pos_color: Vec<usize> = by_color.iter().map(|&(c, _)| c).collect();

    // Twin orbits: vertices whose transposition is an automorphism.
    let mut orbit: Vec<usize> = (0..n).collect();
    for v in 0..n {
        for w in v + 1..n {
            if colors[v] == colors[w] && twins(p, v, w) {
                let (a, b) = (find(&mut orbit, v), find(&mut orbit, w));
                if a != b {
                    let lo = a.min(b);
                    orbit[a.max(b)] = lo;
                }
            }
        }
    }
    let orbit_root: Vec<usize> = (0..n).map(|v| find(&mut orbit, v)).collect();

    let mut search = CanonSearch {
        p,
        n,
        colors: &colors,
        pos_color: &pos_color,
        orbit_root: &orbit_root,
        pos2old: Vec::with_capacity(n),
        used: vec![false; n],
        bits: Vec::with_capacity(n * n),
        best: None,
    };
    search.assign(std::cmp::Ordering::Equal);
    let (best_bits, pos2old) = search.best.expect("at least one labeling exists");

    let mut permutation = vec![0; n];
    for (pos, &old) in pos2old.iter().enumerate() {
        permutation[old] = pos;
    }
    Ok(CanonicalForm {
        permutation,
        bytes: pack(n, &best_bits),
    })
}

fn refine(p: &Preorder) -> Vec<usize> {
    let n = p.size();
    let mut colors = vec![0usize; n];
    loop {
        let mut sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut out: Vec<usize> = (0..n).filter(|&u| p.leq(v, u)).map(|u| colors[u]).collect();
            let mut inn: Vec<usize> = (0..n).filter(|&u| p.leq(u, v)).map(|u| colors[u]).collect();
            out.sort_unstable();
            inn.sort_unstable();
            sigs.push((colors[v], out, inn));
        }
        let mut sorted: Vec<&(usize, Vec<usize>, Vec<usize>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        let next: Vec<usize> = sigs
            .iter()
            .map(|s| sorted.binary_search(&s).unwrap())
            .collect();
        if next == colors {
            return colors;
        }
        colors = next;
    }
}

fn twins(p: &Preorder, v: usize, w: usize) -> bool {
    if p.leq(v, w) != p.leq(w, v) {
        return false;
    }
    for x in 0..p.size() {
        if x == v || x == w {
            continue;
        }
        if p.leq(v, x) != p.leq(w, x) || p.leq(x, v) != p.leq(x, w) {
            return false;
        }
    }
    true
}

fn find(orbit: &mut [usize], v: usize) -> usize {
    let mut r = v;
    while orbit[r] != r {
        r = orbit[r];
    }
    let mut c = v;
    while orbit[c] != r {
        let next = orbit[c];
        orbit[c] = r;
        c = next;
    }
    r
}

struct CanonSearch<'a> {
    p: &'a Preorder,
    n: usize,
    colors: &'a [usize],
    pos_color: &'a [usize],
    orbit_root: &'a [usize],
    pos2old: Vec<usize>,
    used: Vec<bool>,
    bits: Vec<bool>,
    best: Option<(Vec<bool>, Vec<usize>)>,
}

impl CanonSearch<'_> {
    fn assign(&mut self, cmp: std::cmp::Ordering) {
        use std::cmp::Ordering::*;
        let d = self.pos2old.len();
        if d == self.n {
            if self.best.is_none() || cmp == Less {
                self.best = Some((self.bits.clone(), self.pos2old.clone()));
            }
            return;
        }
        for v in 0..self.n {
            if self.used[v] || self.colors[v] != self.pos_color[d] {
                continue;
            }
            // orbit mates enter in ascending index order
            if (0..v).any(|u| self.orbit_root[u] == self.orbit_root[v] && !self.used[u]) {
                continue;
            }
            let mark = self.bits.len();
            let mut local = cmp;
            let mut pruned = false;
            let chunk: Vec<bool> = (0..d)
                .map(|i| self.p.leq(self.pos2old[i], v))
                .chain((0..d).map(|j| self.p.leq(v, self.pos2old[j])))
                .chain(std::iter::once(true))
                .collect();
            for b in chunk {
                if local == Equal {
                    if let Some((best_bits, _)) = &self.best {
                        let bb = best_bits[self.bits.len()];
                        local = match (b, bb) {
                            (false, true) => Less,
                            (true, false) => Greater,
                            _ => Equal,
                        };
                        if local == Greater {
                            pruned = true;
                        }
                    }
                }
                self.bits.push(b);
                if pruned {
                    break;
                }
            }
            if !pruned {
                self.used[v] = true;
                self.pos2old.push(v);
                self.assign(local);
                self.pos2old.pop();
                self.used[v] = false;
            }
            self.bits.truncate(mark);
        }
    }
}

/// Applies a relabeling (`perm[old] = new`) to a preorder.
pub fn permuted(p: &Preorder, perm: &[usize]) -> Preorder {
    let n = p.size();
    assert_eq!(perm.len(), n);
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            if p.leq(i, j) {
                leq[perm[i] * n + perm[j]] = true;
            }
        }
    }
    Preorder::from_matrix_unchecked(n, leq)
}

/// Exhaustive scan of all labeled relations on n points, filtered for
/// reflexive-transitive validity. Independent of the canonical stream.
pub struct LabeledScan {
    pub count: usize,
    pub classes: BTreeSet<Vec<u8>>,
}

pub fn labeled_preorders(n: usize) -> Result<LabeledScan> {
    if n == 0 || n > LABELED_ORACLE_MAX_SIZE {
        return Err(Error::CapExceeded {
            requested: n,
            cap: LABELED_ORACLE_MAX_SIZE,
        });
    }
    let offdiag: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .collect();
    let mut count = 0;
    let mut classes = BTreeSet::new();
    for mask in 0u64..1 << offdiag.len() {
        let mut rows = vec![0u8; n];
        for (i, row) in rows.iter_mut().enumerate() {
            *row = 1 << i;
        }
        for (b, &(i, j)) in offdiag.iter().enumerate() {
            if mask >> b & 1 == 1 {
                rows[i] |= 1 << j;
            }
        }
        let transitive = (0..n).all(|i| {
            (0..n).all(|j| rows[i] >> j & 1 == 0 || rows[j] & !rows[i] == 0)
        });
        if !transitive {
            continue;
        }
        count += 1;
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = rows[i] >> j & 1 == 1;
            }
        }
        let p = Preorder::from_matrix_unchecked(n, leq);
        classes.insert(canonical_form(&p)?.bytes().to_vec());
    }
    Ok(LabeledScan { count, classes })
}

/// Canonical representatives of every isomorphism class of each size,
/// generated by one-element extensions of the previous size's
/// representatives (restriction of a preorder to a subset is again a
/// preorder, so extensions reach every class), deduplicated by canonical
/// bytes and ordered lexicographically.
fn canonical_reps_by_size(max_size: usize) -> Result<Vec<Vec<Preorder>>> {
    if max_size == 0 || max_size > ENUMERATION_MAX_SIZE {
        return Err(Error::CapExceeded {
            requested: max_size,
            cap: ENUMERATION_MAX_SIZE,
        });
    }
    static CACHE: OnceLock<Mutex<Vec<Vec<Preorder>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![vec![Preorder::flat(1)]]));
    let mut by_size = cache.lock().unwrap();
    while by_size.len() < max_size {
        let s = by_size.len();
        let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
        for p in &by_size[s - 1] {
            extend_reps(p, s, &mut seen)?;
        }
        by_size.push(
            seen.iter()
                .map(|bytes| {
                    CanonicalForm {
                        permutation: vec![],
                        bytes: bytes.clone(),
                    }
                    .to_preorder()
                })
                .collect(),
        );
    }
    Ok(by_size[..max_size].to_vec())
}

/// All one-element extensions of `p` that stay transitive: the new
/// element's down-set must be down-closed, its up-set up-closed, and
/// every (below, above) pair already related in `p`.
fn extend_reps(p: &Preorder, s: usize, seen: &mut BTreeSet<Vec<u8>>) -> Result<()> {
    let below: Vec<u64> = (0..s)
        .map(|y| (0..s).filter(|&x| p.leq(x, y)).fold(0u64, |m, x| m | 1 << x))
        .collect();
    let above: Vec<u64> = (0..s)
        .map(|y| (0..s).filter(|&x| p.leq(y, x)).fold(0u64, |m, x| m | 1 << x))
        .collect();
    let down_closed: Vec<u64> = (0..1u64 << s)
        .filter(|&m| (0..s).all(|y| m >> y & 1 == 0 || below[y] & !m == 0))
        .collect();
    let up_closed: Vec<u64> = (0..1u64 << s)
        .filter(|&m| (0..s).all(|y| m >> y & 1 == 0 || above[y] & !m == 0))
        .collect();
    let n = s + 1;
    for &up in &up_closed {
        // x <= v and v <= y force x <= y: candidates below v must lie
        // under every element above v.
        let mut meet = (1u64 << s) - 1;
        for y in 0..s {
            if up >> y & 1 == 1 {
                meet &= below[y];
            }
        }
        for &down in &down_closed {
            if down & !meet != 0 {
                continue;
            }
            let mut leq = vec![false; n * n];
            for i in 0..s {
                for j in 0..s {
                    leq[i * n + j] = p.leq(i, j);
                }
            }
            for x in 0..s {
                if down >> x & 1 == 1 {
                    leq[x * n + s] = true;
                }
                if up >> x & 1 == 1 {
                    leq[s * n + x] = true;
                }
            }
            leq[s * n + s] = true;
            let q = Preorder::from_matrix_unchecked(n, leq);
            seen.insert(canonical_form(&q)?.bytes().to_vec());
        }
    }
    Ok(())
}

/// Samples each off-diagonal pair independently with probability
/// `edge_bias` (pre-closure), then takes the reflexive-transitive
/// closure. Fully determined by (size, edge_bias, seed).
pub fn random_preorder(size: usize, edge_bias: f64, seed: u64) -> Preorder {
    assert!(size >= 1, "size must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..size {
        for j in 0..size {
            if i != j && rng.gen::<f64>() < edge_bias {
                pairs.push((i, j));
            }
        }
    }
    Preorder::from_pairs(size, &pairs, true).expect("closure is always valid")
}

#[derive(Clone, Debug)]
pub enum StreamKind {
    Exhaustive { max_size: usize },
    Random { count: usize, size: usize, edge_bias: f64, seed: u64 },
}

/// Instance supply for oracles and suites. Exhaustive mode yields one
/// representative per isomorphism class in canonical order (ascending
/// size, then lexicographic canonical bytes); random mode is a pure
/// function of its seed, instance i drawing from seed XOR i.
#[derive(Debug)]
pub struct InstanceStream {
    kind: StreamKind,
    exhaustive: Vec<Preorder>,
    per_size: Vec<(usize, usize)>,
    cursor: usize,
}

impl InstanceStream {
    pub fn kind(&self) -> &StreamKind {
        &self.kind
    }

    /// (size, class count) pairs for exhaustive streams.
    pub fn per_size_counts(&self) -> &[(usize, usize)] {
        &self.per_size
    }
}

impl Iterator for InstanceStream {
    type Item = Preorder;

    fn next(&mut self) -> Option<Preorder> {
        let i = self.cursor;
        self.cursor += 1;
        match self.kind {
            StreamKind::Exhaustive { .. } => self.exhaustive.get(i).cloned(),
            StreamKind::Random {
                count,
                size,
                edge_bias,
                seed,
            } => {
                if i < count {
                    Some(random_preorder(size, edge_bias, seed ^ i as u64))
                } else {
                    None
                }
            }
        }
    }
}

/// Canonical representatives of all preorders of sizes 1..=max_size.
pub fn enumerate_preorders(max_size: usize) -> Result<InstanceStream> {
    let by_size = canonical_reps_by_size(max_size)?;
    let per_size: Vec<(usize, usize)> = by_size
        .iter()
        .enumerate()
        .map(|(i, v)| (i + 1, v.len()))
        .collect();
    Ok(InstanceStream {
        kind: StreamKind::Exhaustive { max_size },
        exhaustive: by_size.into_iter().flatten().collect(),
        per_size,
        cursor: 0,
    })
}

/// Seeded random stream of `count` instances of the given size.
pub fn random_stream(count: usize, size: usize, edge_bias: f64, seed: u64) -> InstanceStream {
    InstanceStream {
        kind: StreamKind::Random {
            count,
            size,
            edge_bias,
            seed,
        },
        exhaustive: vec![],
        per_size: vec![],
        cursor: 0,
    }
}
