//! Spectrum-membership machinery: the family-characterization search,
//! the bounded relative-spectrum oracle, spectrum sets, and the
//! invariant-chain report.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::bits::Bits;
use crate::constructions::product;
use crate::error::{Error, Result};
use crate::fposet::{f_poset, AntichainFamily};
use crate::generators::InstanceStream;
use crate::invariants::{antichain_pool, CliqueSolver};
use crate::json::PreorderJson;
use crate::preorder::{ElementSet, Preorder};

/// Search budget for the family enumeration: maximum number of families
/// examined and maximum member antichains per family. The defaults cover
/// every family on the exhaustive grids.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct FamilyCaps {
    pub families: usize,
    pub members: usize,
}

impl Default for FamilyCaps {
    fn default() -> Self {
        FamilyCaps {
            families: 1_000_000,
            members: 64,
        }
    }
}

/// Parameters of a spectrum-membership query: the level k, the test-poset
/// size bound for the oracle, and the family-search caps.
#[derive(Clone, Copy, Debug)]
pub struct SpectrumQuery {
    pub k: usize,
    pub test_bound: usize,
    pub caps: FamilyCaps,
}

impl SpectrumQuery {
    pub fn new(k: usize, test_bound: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::BadQuery("k must be at least 1".to_string()));
        }
        if test_bound < 1 {
            return Err(Error::BadQuery("test bound must be at least 1".to_string()));
        }
        Ok(SpectrumQuery {
            k,
            test_bound,
            caps: FamilyCaps::default(),
        })
    }
}

/// Query outcome: definite, or the caps bit before exhaustion.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    True,
    False,
    ExhaustedCaps,
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Verdict::True => s.serialize_bool(true),
            Verdict::False => s.serialize_bool(false),
            Verdict::ExhaustedCaps => s.serialize_str("exhausted-caps"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub millis: u128,
}

/// A negative verdict always carries one of these; both re-verify under
/// independent checking.
#[derive(Clone, Debug)]
pub enum SpectrumWitness {
    /// A k-large family whose subset poset has cellularity <= k.
    Family(AntichainFamily),
    /// A test poset with small cellularity whose product with P carries a
    /// big antichain.
    TestPoset {
        q: Preorder,
        q_cellularity: usize,
        antichain: Vec<usize>,
    },
}

impl Serialize for SpectrumWitness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SpectrumWitness::Family(fam) => {
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("kind", "family")?;
                m.serialize_entry("base", &PreorderJson::from(fam.base()))?;
                m.serialize_entry("members", fam.members())?;
                m.end()
            }
            SpectrumWitness::TestPoset {
                q,
                q_cellularity,
                antichain,
            } => {
                let mut m = s.serialize_map(Some(4))?;
                m.serialize_entry("kind", "test-poset")?;
                m.serialize_entry("q", &PreorderJson::from(q))?;
                m.serialize_entry("q_cellularity", q_cellularity)?;
                m.serialize_entry("antichain", antichain)?;
                m.end()
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub verdict: Verdict,
    pub witness: Option<SpectrumWitness>,
    pub stats: SearchStats,
}

impl Serialize for SpectrumReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SpectrumReport", 3)?;
        st.serialize_field("verdict", &self.verdict)?;
        st.serialize_field("witness", &self.witness)?;
        st.serialize_field("stats", &self.stats)?;
        st.end()
    }
}

/// Depth-first enumeration of families of pairwise subset-incomparable
/// nonempty antichains. A family whose union reaches `union_threshold`
/// is a violation when its subset poset has no antichain of size
/// `antichain_target`.
struct FamilySearch<'a> {
    p: &'a Preorder,
    pool: Vec<Vec<usize>>,
    pool_masks: Vec<u64>,
    suffix_union: Vec<u64>,
    union_threshold: usize,
    antichain_target: usize,
    caps: FamilyCaps,
    nodes: u64,
    truncated: bool,
    violation: Option<Vec<Vec<usize>>>,
}

/// Elements of the carrier a family search can handle (pool and union
/// masks are machine words).
const FAMILY_SEARCH_MAX_SIZE: usize = 20;

impl<'a> FamilySearch<'a> {
    fn new(
        p: &'a Preorder,
        union_threshold: usize,
        antichain_target: usize,
        caps: FamilyCaps,
    ) -> Result<Self> {
        if p.size() > FAMILY_SEARCH_MAX_SIZE {
            return Err(Error::CapExceeded {
                requested: p.size(),
                cap: FAMILY_SEARCH_MAX_SIZE,
            });
        }
        let mut pool = antichain_pool(p);
        let before = pool.len();
        pool.retain(|a| a.len() <= caps.members);
        let truncated = pool.len() != before;
        let pool_masks: Vec<u64> = pool
            .iter()
            .map(|a| a.iter().fold(0u64, |m, &v| m | 1 << v))
            .collect();
        let mut suffix_union = vec![0u64; pool.len() + 1];
        for i in (0..pool.len()).rev() {
            suffix_union[i] = suffix_union[i + 1] | pool_masks[i];
        }
        Ok(FamilySearch {
            p,
            pool,
            pool_masks,
            suffix_union,
            union_threshold,
            antichain_target,
            caps,
            nodes: 0,
            truncated,
            violation: None,
        })
    }

    fn run(&mut self) -> Result<()> {
        if self.p.size() >= self.union_threshold {
            let mut members: Vec<usize> = Vec::new();
            self.dfs(0, &mut members, 0)?;
        }
        Ok(())
    }

    /// Returns true when the search should stop (violation found or
    /// budget exhausted).
    fn dfs(&mut self, start: usize, members: &mut Vec<usize>, union: u64) -> Result<bool> {
        for i in start..self.pool.len() {
            if (union | self.suffix_union[i]).count_ones() < self.union_threshold as u32 {
                // not even the whole remaining pool reaches the threshold
                return Ok(false);
            }
            let mask = self.pool_masks[i];
            let incomparable = members.iter().all(|&m| {
                let other = self.pool_masks[m];
                mask & !other != 0 && other & !mask != 0
            });
            if !incomparable {
                continue;
            }
            if members.len() == self.caps.members {
                self.truncated = true;
                continue;
            }
            if self.nodes == self.caps.families as u64 {
                self.truncated = true;
                return Ok(true);
            }
            self.nodes += 1;
            members.push(i);
            let new_union = union | mask;
            // A set of antichain_target pairwise-compatible elements in
            // the union forces that many incompatible singletons in the
            // subset poset, for this family and every extension.
            let safe = self.compat_clique_reaches_target(new_union);
            if !safe && new_union.count_ones() >= self.union_threshold as u32 {
                let family = self.family_of(members)?;
                let fp = f_poset(&family)?;
                if fp.order().antichain_at_least(self.antichain_target).is_none() {
                    self.violation = Some(members.iter().map(|&m| self.pool[m].clone()).collect());
                    members.pop();
                    return Ok(true);
                }
            }
            if !safe {
                let stop = self.dfs(i + 1, members, new_union)?;
                if stop {
                    members.pop();
                    return Ok(true);
                }
            }
            members.pop();
        }
        Ok(false)
    }

    fn compat_clique_reaches_target(&self, union: u64) -> bool {
        let elems: Vec<usize> = (0..self.p.size()).filter(|&v| union >> v & 1 == 1).collect();
        if elems.len() < self.antichain_target {
            return false;
        }
        let n = elems.len();
        let mut adj = vec![Bits::new(n); n];
        for a in 0..n {
            for b in a + 1..n {
                if self.p.compatible(elems[a], elems[b]) {
                    adj[a].set(b);
                    adj[b].set(a);
                }
            }
        }
        CliqueSolver::new(n, adj).solve(self.antichain_target).size >= self.antichain_target
    }

    fn family_of(&self, members: &[usize]) -> Result<AntichainFamily> {
        let sets: Vec<Vec<usize>> = members.iter().map(|&m| self.pool[m].clone()).collect();
        AntichainFamily::new(self.p.clone(), &sets)
    }
}

/// Decides whether every normalized family of antichains of P with
/// |union| >= k+1 has a subset poset of cellularity >= k+1. Negative
/// verdicts carry the first violating family in search order.
pub fn char_k(p: &Preorder, q: &SpectrumQuery) -> Result<SpectrumReport> {
    if p.is_empty() {
        return Err(Error::EmptyPoset);
    }
    if q.k < 1 {
        return Err(Error::BadQuery("k must be at least 1".to_string()));
    }
    let start = Instant::now();
    let mut search = FamilySearch::new(p, q.k + 1, q.k + 1, q.caps)?;
    search.run()?;
    let stats = SearchStats {
        nodes: search.nodes,
        millis: start.elapsed().as_millis(),
    };
    let report = match search.violation {
        Some(members) => SpectrumReport {
            verdict: Verdict::False,
            witness: Some(SpectrumWitness::Family(AntichainFamily::new(
                p.clone(),
                &members,
            )?)),
            stats,
        },
        None if search.truncated => SpectrumReport {
            verdict: Verdict::ExhaustedCaps,
            witness: None,
            stats,
        },
        None => SpectrumReport {
            verdict: Verdict::True,
            witness: None,
            stats,
        },
    };
    Ok(report)
}

/// Finite denspec probe: every family with |union| >= k*d(P)+1 must have
/// a subset poset with an antichain of size k+1.
pub fn denspec_scaled_check(p: &Preorder, k: usize, caps: FamilyCaps) -> Result<SpectrumReport> {
    if p.is_empty() {
        return Err(Error::EmptyPoset);
    }
    if k < 1 {
        return Err(Error::BadQuery("k must be at least 1".to_string()));
    }
    let d = p.density()?.size;
    let start = Instant::now();
    let mut search = FamilySearch::new(p, k * d + 1, k + 1, caps)?;
    search.run()?;
    let stats = SearchStats {
        nodes: search.nodes,
        millis: start.elapsed().as_millis(),
    };
    Ok(match search.violation {
        Some(members) => SpectrumReport {
            verdict: Verdict::False,
            witness: Some(SpectrumWitness::Family(AntichainFamily::new(
                p.clone(),
                &members,
            )?)),
            stats,
        },
        None if search.truncated => SpectrumReport {
            verdict: Verdict::ExhaustedCaps,
            witness: None,
            stats,
        },
        None => SpectrumReport {
            verdict: Verdict::True,
            witness: None,
            stats,
        },
    })
}

/// Brute-force relative spectrum membership: true iff every test poset Q
/// from the stream with |Q| <= test_bound and c(Q) <= k keeps
/// c(P x Q) <= k. Negative verdicts carry the witness Q and a product
/// antichain of size k+1.
pub fn rel_spectrum_member(
    p: &Preorder,
    q: &SpectrumQuery,
    instances: InstanceStream,
) -> Result<SpectrumReport> {
    if p.is_empty() {
        return Err(Error::EmptyPoset);
    }
    let start = Instant::now();
    let mut nodes = 0u64;
    for test_q in instances {
        if test_q.size() > q.test_bound {
            continue;
        }
        nodes += 1;
        let cq = test_q.cellularity()?.size;
        if cq > q.k {
            continue;
        }
        let prod = product(p, &test_q)?;
        if let Some(antichain) = prod.antichain_at_least(q.k + 1) {
            return Ok(SpectrumReport {
                verdict: Verdict::False,
                witness: Some(SpectrumWitness::TestPoset {
                    q: test_q,
                    q_cellularity: cq,
                    antichain,
                }),
                stats: SearchStats {
                    nodes,
                    millis: start.elapsed().as_millis(),
                },
            });
        }
    }
    Ok(SpectrumReport {
        verdict: Verdict::True,
        witness: None,
        stats: SearchStats {
            nodes,
            millis: start.elapsed().as_millis(),
        },
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMode {
    Char,
    Oracle,
}

/// The raw spectrum set up to kmax (never assumed upward-closed), its
/// minimum, and any cap-indeterminate levels.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumSetReport {
    pub mode: SpectrumMode,
    pub kmax: usize,
    pub test_bound: usize,
    pub set: BTreeSet<usize>,
    pub fin_pc: Option<usize>,
    pub indeterminate: Vec<usize>,
    pub reports: Vec<(usize, SpectrumReport)>,
}

pub fn spectrum_set(
    p: &Preorder,
    kmax: usize,
    mode: SpectrumMode,
    q: &SpectrumQuery,
) -> Result<SpectrumSetReport> {
    if kmax < 1 {
        return Err(Error::BadQuery("kmax must be at least 1".to_string()));
    }
    let mut set = BTreeSet::new();
    let mut indeterminate = Vec::new();
    let mut reports = Vec::new();
    for k in 1..=kmax {
        let query = SpectrumQuery { k, ..*q };
        let report = match mode {
            SpectrumMode::Char => char_k(p, &query)?,
            SpectrumMode::Oracle => {
                let stream = crate::generators::enumerate_preorders(q.test_bound)?;
                rel_spectrum_member(p, &query, stream)?
            }
        };
        match report.verdict {
            Verdict::True => {
                set.insert(k);
            }
            Verdict::ExhaustedCaps => indeterminate.push(k),
            Verdict::False => {}
        }
        reports.push((k, report));
    }
    let fin_pc = set
        .iter()
        .next()
        .copied()
        .filter(|&min| indeterminate.iter().all(|&i| i > min));
    Ok(SpectrumSetReport {
        mode,
        kmax,
        test_bound: q.test_bound,
        set,
        fin_pc,
        indeterminate,
        reports,
    })
}

/// Outcome of the tech2 probe: `holds` is the verification result,
/// `vacuous` flags a skipped check (linkage precondition not met
/// non-vacuously).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Tech2Check {
    pub vacuous: bool,
    pub holds: bool,
}

/// If `a` (inside the family's union) is non-vacuously n-linked, verifies
/// that its singletons form an antichain of the subset poset.
pub fn lemma_tech2_check(family: &AntichainFamily, a: &ElementSet, n: usize) -> Result<Tech2Check> {
    let fp = f_poset(family)?;
    lemma_tech2_check_in(&fp, a, n)
}

/// Same probe against a prebuilt subset poset.
pub fn lemma_tech2_check_in(fp: &crate::fposet::FPoset, a: &ElementSet, n: usize) -> Result<Tech2Check> {
    if n < 2 {
        return Err(Error::BadArity { n });
    }
    let family = fp.family();
    let union = family.union();
    if !a.members().iter().all(|m| union.binary_search(m).is_ok()) {
        return Err(Error::PreconditionUnmet(
            "set is not contained in the family union".to_string(),
        ));
    }
    if a.len() < n || !family.base().is_n_linked(a, n)? {
        return Ok(Tech2Check {
            vacuous: true,
            holds: true,
        });
    }
    let singletons: Vec<usize> = a
        .members()
        .iter()
        .map(|&p| fp.singleton_index(p).expect("union elements have singletons"))
        .collect();
    Ok(Tech2Check {
        vacuous: false,
        holds: fp.order().is_antichain_slice(&singletons),
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct ChainCheck {
    pub name: &'static str,
    pub holds: bool,
}

/// Invariant bundle for one preorder: cellularity (both routes), density,
/// the linked-free numbers, fin-pc in char mode, the inequality-chain
/// verdicts, and the scaled denspec probes.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantChainReport {
    pub cellularity: usize,
    pub cellularity_witness: Vec<usize>,
    pub cellularity_oracle: Option<usize>,
    pub density: usize,
    pub density_witness: Vec<usize>,
    pub linked_free: Vec<(usize, usize)>,
    pub fin_pc_lower: usize,
    pub fin_pc: Option<usize>,
    pub checks: Vec<ChainCheck>,
    pub denspec: Vec<(usize, Verdict)>,
}

impl InvariantChainReport {
    pub fn all_checks_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Largest k probed by the scaled denspec assertion inside the report.
const DENSPEC_KMAX: usize = 3;

pub fn invariant_chain_report(p: &Preorder, nmax: usize) -> Result<InvariantChainReport> {
    if nmax < 2 {
        return Err(Error::BadArity { n: nmax });
    }
    if p.is_empty() {
        return Err(Error::EmptyPoset);
    }
    let caps = FamilyCaps::default();
    let cell = p.cellularity()?;
    let cellularity_oracle = if p.size() <= crate::ORACLE_MAX_SIZE {
        Some(p.cellularity_bruteforce()?.size)
    } else {
        None
    };
    let dens = p.density()?;
    let linked_free: Vec<(usize, usize)> = (2..=nmax)
        .map(|n| Ok((n, p.linked_free_number(n)?.size)))
        .collect::<Result<_>>()?;

    // fin-pc, char mode: probe k upward; k = |P| is vacuously true.
    let mut fin_pc = None;
    let mut fin_pc_lower = 1;
    for k in 1..=p.size() {
        let report = char_k(p, &SpectrumQuery { k, test_bound: 1, caps })?;
        fin_pc_lower = k;
        match report.verdict {
            Verdict::False => continue,
            Verdict::True => {
                fin_pc = Some(k);
                break;
            }
            Verdict::ExhaustedCaps => break,
        }
    }

    let mut checks = vec![
        ChainCheck {
            name: "cellularity-oracle-agreement",
            holds: cellularity_oracle.map_or(true, |o| o == cell.size),
        },
        ChainCheck {
            name: "c-equals-ind2",
            holds: linked_free.first().map_or(true, |&(_, i2)| i2 == cell.size),
        },
        ChainCheck {
            name: "ind-monotone",
            holds: linked_free.windows(2).all(|w| w[0].1 <= w[1].1),
        },
        ChainCheck {
            name: "ind-le-scaled-density",
            holds: linked_free.iter().all(|&(n, i)| i <= (n - 1) * dens.size),
        },
        ChainCheck {
            name: "c-le-density",
            holds: cell.size <= dens.size,
        },
        ChainCheck {
            name: "c-le-fin-pc",
            holds: cell.size <= fin_pc.unwrap_or(fin_pc_lower),
        },
    ];

    let mut denspec = Vec::new();
    for k in 1..=DENSPEC_KMAX {
        if k * dens.size + 1 > p.size() {
            break; // vacuous from here on
        }
        let report = denspec_scaled_check(p, k, caps)?;
        denspec.push((k, report.verdict));
    }
    checks.push(ChainCheck {
        name: "denspec-scaled",
        holds: denspec.iter().all(|&(_, v)| v != Verdict::False),
    });

    Ok(InvariantChainReport {
        cellularity: cell.size,
        cellularity_witness: cell.witness,
        cellularity_oracle,
        density: dens.size,
        density_witness: dens.witness,
        linked_free,
        fin_pc_lower,
        fin_pc,
        checks,
        denspec,
    })
}

/// Oracle-mode spectrum sets for P, Q and P x Q at matched (kmax, N),
/// asserting the projection-pullback inclusion and reporting (never
/// asserting) the reverse one.
#[derive(Clone, Debug, Serialize)]
pub struct ProductSpectrumReport {
    pub p_set: BTreeSet<usize>,
    pub q_set: BTreeSet<usize>,
    pub product_set: BTreeSet<usize>,
    pub inclusion_holds: bool,
    pub reverse_discrepancies: Vec<usize>,
}

pub fn product_spectrum_check(
    p: &Preorder,
    q: &Preorder,
    kmax: usize,
    test_bound: usize,
) -> Result<ProductSpectrumReport> {
    let query = SpectrumQuery::new(1, test_bound)?;
    let prod = product(p, q)?;
    let p_set = spectrum_set(p, kmax, SpectrumMode::Oracle, &query)?.set;
    let q_set = spectrum_set(q, kmax, SpectrumMode::Oracle, &query)?.set;
    let product_set = spectrum_set(&prod, kmax, SpectrumMode::Oracle, &query)?.set;
    let both: BTreeSet<usize> = p_set.intersection(&q_set).copied().collect();
    let inclusion_holds = product_set.is_subset(&both);
    let reverse_discrepancies: Vec<usize> = both.difference(&product_set).copied().collect();
    Ok(ProductSpectrumReport {
        p_set,
        q_set,
        product_set,
        inclusion_holds,
        reverse_discrepancies,
    })
}
