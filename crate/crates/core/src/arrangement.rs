//! Cohomology of rConf(k, ℝⁿ) from the intersection lattice Π_{k,r}.
//!
//! The reduced cohomology in degree i is the direct sum, over lattice
//! elements x above 0̂, of H̃_{codim(x)−2−i}(0̂, x). Interval homology only
//! depends on the sizes of the non-singleton blocks of x, so it is computed
//! once per profile (via the join decomposition) and cached.

use std::collections::{BTreeSet, HashMap};
use std::sync::{OnceLock, RwLock};

use serde::Serialize;

use crate::complex::order_complex_with;
use crate::error::{Error, Result};
use crate::homology::{self, GradedGroup, HomologyOptions};
use crate::limits::Limits;
use crate::par::{self, Execution};
use crate::partition::{enumerate_r_equal_partitions_with, Partition, RLattice};

/// How interval homology is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Verification {
    /// Join formula over cached block homologies.
    #[default]
    Fast,
    /// Join formula, cross-checked against the directly built interval
    /// complex and a modular rank recomputation.
    Checked,
}

/// One lattice element's share of the cohomology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    #[serde(serialize_with = "as_text")]
    pub x: Partition,
    pub codim: u64,
    pub interval_homology: GradedGroup,
    /// Cohomology degrees i = codim − 2 − d for each nonzero H̃_d(0̂, x).
    pub contributions: GradedGroup,
}

fn as_text<S: serde::Serializer>(p: &Partition, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_text())
}

/// Per-element breakdown of the cohomology of rConf(k, ℝⁿ).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContributionLedger {
    pub k: usize,
    pub r: usize,
    pub n: u64,
    pub entries: Vec<LedgerEntry>,
}

impl ContributionLedger {
    /// Degreewise sum of all contributions.
    pub fn total(&self) -> GradedGroup {
        sum_contributions(self.entries.iter())
    }

    /// Sum over the entries without singleton blocks.
    pub fn singleton_free_total(&self) -> GradedGroup {
        sum_contributions(self.entries.iter().filter(|e| !e.x.has_singleton()))
    }
}

fn sum_contributions<'a>(entries: impl Iterator<Item = &'a LedgerEntry>) -> GradedGroup {
    entries.fold(GradedGroup::new(), |acc, e| acc.direct_sum(&e.contributions))
}

/// Computes and caches interval homologies.
///
/// Caches are shared behind locks so one engine can serve concurrent
/// callers; a value computed twice by racing workers is identical, so the
/// second insert is harmless.
#[derive(Debug, Default)]
pub struct Engine {
    limits: Limits,
    execution: Execution,
    verification: Verification,
    base: RwLock<HashMap<(usize, usize), GradedGroup>>,
    intervals: RwLock<HashMap<(usize, Vec<usize>), GradedGroup>>,
}

impl Engine {
    pub fn new(limits: Limits, execution: Execution, verification: Verification) -> Self {
        Engine {
            limits,
            execution,
            verification,
            ..Default::default()
        }
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn execution(&self) -> Execution {
        self.execution
    }

    pub fn verification(&self) -> Verification {
        self.verification
    }

    fn homology_options(&self) -> HomologyOptions {
        HomologyOptions {
            execution: self.execution,
            verify_mod_p: self.verification == Verification::Checked,
        }
    }

    /// H̃ of the proper part Π^0_{m,r} = (0̂, 1̂) of Π_{m,r}, for m ≥ r.
    pub fn base_homology(&self, m: usize, r: usize) -> Result<GradedGroup> {
        if m < r {
            return Err(Error::usage(format!("Π_{{{m},{r}}} has no top element above 0̂")));
        }
        if let Some(g) = self.base.read().expect("cache lock").get(&(m, r)) {
            return Ok(g.clone());
        }
        let top = Partition::single_block(m);
        let g = self.direct_interval(&top, r)?;
        self.base.write().expect("cache lock").insert((m, r), g.clone());
        Ok(g)
    }

    /// H̃_*(0̂, x) in Π_{k,r} through the join decomposition.
    pub fn interval_homology(&self, x: &Partition, r: usize) -> Result<GradedGroup> {
        if !x.is_r_equal(r) {
            return Err(Error::usage(format!("{x} is not an {r}-equal partition")));
        }
        let profile = x.nonsingleton_profile();
        let key = (r, profile.clone());
        if let Some(g) = self.intervals.read().expect("cache lock").get(&key) {
            return Ok(g.clone());
        }
        let g = homology::homology_of_interval_via_join(&profile, |m| self.base_homology(m, r))?;
        if self.verification == Verification::Checked && !profile.is_empty() {
            let direct = self.direct_interval(&profile_representative(&profile), r)?;
            if direct != g {
                return Err(Error::integrity(format!(
                    "interval homology for block sizes {profile:?}, r = {r}: join gives {g}, direct gives {direct}"
                )));
            }
        }
        self.intervals.write().expect("cache lock").insert(key, g.clone());
        Ok(g)
    }

    /// H̃_*(0̂, x) from the order complex of the interval itself.
    pub fn interval_homology_direct(&self, x: &Partition, r: usize) -> Result<GradedGroup> {
        if !x.is_r_equal(r) {
            return Err(Error::usage(format!("{x} is not an {r}-equal partition")));
        }
        self.direct_interval(x, r)
    }

    fn direct_interval(&self, x: &Partition, r: usize) -> Result<GradedGroup> {
        let k = x.ground_size();
        let below: Vec<Partition> = enumerate_r_equal_partitions_with(k, r, &self.limits)?
            .into_iter()
            .filter(|z| !z.is_discrete() && z != x && z.refines_unchecked(x))
            .collect();
        let complex = order_complex_with(&below, &self.limits)?;
        Ok(homology::reduced_homology_with(&complex, &self.homology_options()).homology)
    }

    /// Warms the caches for every profile occurring in `elements`. Base
    /// groups go first and one at a time: they are the expensive part and
    /// each already parallelizes internally.
    fn prepare(&self, elements: &[Partition], r: usize) -> Result<()> {
        let profiles: BTreeSet<Vec<usize>> = elements.iter().map(Partition::nonsingleton_profile).collect();
        let sizes: BTreeSet<usize> = profiles.iter().flatten().copied().collect();
        for m in sizes {
            self.base_homology(m, r)?;
        }
        let reps: Vec<Partition> = profiles
            .iter()
            .filter(|p| !p.is_empty())
            .map(|p| profile_representative(p))
            .collect();
        par::try_map(self.execution, &reps, |x| self.interval_homology(x, r))?;
        Ok(())
    }

    pub fn contribution_ledger(&self, k: usize, r: usize, n: u64) -> Result<ContributionLedger> {
        check_n(n)?;
        if k == 0 {
            check_r(r)?;
            return Ok(ContributionLedger {
                k,
                r,
                n,
                entries: Vec::new(),
            });
        }
        let elements: Vec<Partition> = enumerate_r_equal_partitions_with(k, r, &self.limits)?
            .into_iter()
            .filter(|x| !x.is_discrete())
            .collect();
        self.ledger_for(k, r, n, elements)
    }

    fn ledger_for(&self, k: usize, r: usize, n: u64, elements: Vec<Partition>) -> Result<ContributionLedger> {
        self.prepare(&elements, r)?;
        let entries = par::try_map(self.execution, &elements, |x| {
            let h = self.interval_homology(x, r)?;
            let codim = x.codimension(n);
            let contributions = h.iter().map(|(d, g)| (codim as i64 - 2 - d, g.clone())).collect();
            Ok::<_, Error>(LedgerEntry {
                x: x.clone(),
                codim,
                interval_homology: h,
                contributions,
            })
        })?;
        Ok(ContributionLedger { k, r, n, entries })
    }

    /// Reduced cohomology of rConf(k, ℝⁿ).
    pub fn gm_cohomology(&self, k: usize, r: usize, n: u64) -> Result<GradedGroup> {
        Ok(self.contribution_ledger(k, r, n)?.total())
    }

    /// Cohomology of the total fiber of the configuration cube: the sum over
    /// partitions without singletons.
    pub fn tfiber_cohomology(&self, k: usize, r: usize, n: u64) -> Result<GradedGroup> {
        check_n(n)?;
        if k == 0 {
            check_r(r)?;
            return Ok(GradedGroup::new());
        }
        let elements = crate::partition::singleton_free_elements_with(k, r, &self.limits)?;
        Ok(self.ledger_for(k, r, n, elements)?.total())
    }
}

/// `(1..m_1)(m_1+1..m_1+m_2)…` for a block-size profile.
fn profile_representative(profile: &[usize]) -> Partition {
    let k: usize = profile.iter().sum();
    let mut blocks = Vec::new();
    let mut next = 1;
    for &m in profile {
        blocks.push((next..next + m).collect::<Vec<_>>());
        next += m;
    }
    Partition::from_blocks(k, &blocks).expect("profile blocks partition 1..k")
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::usage("n must be at least 1"));
    }
    Ok(())
}

fn check_r(r: usize) -> Result<()> {
    if r < 2 {
        return Err(Error::usage("r must be at least 2"));
    }
    Ok(())
}

/// The engine behind the free functions of this module.
pub fn default_engine() -> &'static Engine {
    static ENGINE: OnceLock<Engine> = OnceLock::new();
    ENGINE.get_or_init(Engine::default)
}

pub fn gm_cohomology(k: usize, r: usize, n: u64) -> Result<GradedGroup> {
    default_engine().gm_cohomology(k, r, n)
}

pub fn contribution_ledger(k: usize, r: usize, n: u64) -> Result<ContributionLedger> {
    default_engine().contribution_ledger(k, r, n)
}

pub fn tfiber_cohomology(k: usize, r: usize, n: u64) -> Result<GradedGroup> {
    default_engine().tfiber_cohomology(k, r, n)
}

/// Elements of Π_{k,r} in the image of Π_{T,r} under adding singletons:
/// those whose non-singleton blocks all lie in `t` (1-based).
pub fn restriction_image_summands(k: usize, r: usize, t: &[usize]) -> Result<Vec<Partition>> {
    restriction_image_summands_in(&RLattice::new(k, r)?, t)
}

pub fn restriction_image_summands_in(lat: &RLattice, t: &[usize]) -> Result<Vec<Partition>> {
    if let Some(&bad) = t.iter().find(|&&e| e == 0 || e > lat.k()) {
        return Err(Error::usage(format!("{bad} is not in 1..{}", lat.k())));
    }
    Ok(lat
        .elements()
        .iter()
        .filter(|x| x.nonsingleton_blocks_within(t))
        .cloned()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::FgGroup;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn graded(entries: &[(i64, u64)]) -> GradedGroup {
        entries.iter().map(|&(d, r)| (d, FgGroup::free(r))).collect()
    }

    #[test]
    fn three_conf_four() {
        for n in 2..=5u64 {
            let d = n as i64;
            assert_eq!(gm_cohomology(4, 3, n).unwrap(), graded(&[(2 * d - 1, 4), (3 * d - 2, 3)]));
        }
        assert_eq!(gm_cohomology(4, 3, 1).unwrap(), graded(&[(1, 7)]));
    }

    #[test]
    fn ledger_of_three_conf_four() {
        let l = contribution_ledger(4, 3, 2).unwrap();
        assert_eq!(l.entries.len(), 5);
        for e in &l.entries {
            if e.x == Partition::single_block(4) {
                assert_eq!(e.contributions, graded(&[(4, 3)]));
                assert_eq!(e.codim, 6);
            } else {
                assert_eq!(e.interval_homology, graded(&[(-1, 1)]));
                assert_eq!(e.contributions, graded(&[(3, 1)]));
            }
        }
        assert_eq!(l.total(), gm_cohomology(4, 3, 2).unwrap());
        let single = contribution_ledger(3, 3, 5).unwrap();
        assert_eq!(single.entries.len(), 1);
        assert_eq!(single.entries[0].codim, 10);
        assert_eq!(single.entries[0].contributions, graded(&[(9, 1)]));
    }

    #[test]
    fn five_points_three_equal() {
        let l = contribution_ledger(5, 3, 2).unwrap();
        let mut by_size: HashMap<Vec<usize>, (usize, GradedGroup)> = HashMap::new();
        for e in &l.entries {
            let slot = by_size.entry(e.x.nonsingleton_profile()).or_insert((0, GradedGroup::new()));
            slot.0 += 1;
            slot.1 = e.contributions.clone();
        }
        assert_eq!(by_size[&vec![3]], (10, graded(&[(3, 1)])));
        assert_eq!(by_size[&vec![4]], (5, graded(&[(4, 3)])));
        assert_eq!(by_size[&vec![5]], (1, graded(&[(5, 6)])));
        assert_eq!(l.total(), graded(&[(3, 10), (4, 15), (5, 6)]));
    }

    #[test]
    fn degenerate_cases() {
        for n in 1..=4 {
            assert!(gm_cohomology(2, 3, n).unwrap().is_zero());
            assert!(tfiber_cohomology(2, 3, n).unwrap().is_zero());
            assert!(gm_cohomology(0, 3, n).unwrap().is_zero());
        }
        for r in 2..=5usize {
            for n in 1..=4u64 {
                let deg = (r as i64 - 1) * n as i64 - 1;
                assert_eq!(gm_cohomology(r, r, n).unwrap(), graded(&[(deg, 1)]));
                assert_eq!(tfiber_cohomology(r, r, n).unwrap(), graded(&[(deg, 1)]));
            }
        }
        assert!(matches!(gm_cohomology(4, 3, 0), Err(Error::Usage(_))));
    }

    #[test]
    fn tfiber_of_three_conf_four() {
        assert_eq!(tfiber_cohomology(4, 3, 2).unwrap(), graded(&[(4, 3)]));
        let l = contribution_ledger(6, 3, 2).unwrap();
        assert_eq!(l.singleton_free_total(), tfiber_cohomology(6, 3, 2).unwrap());
    }

    #[test]
    fn restriction_images() {
        assert_eq!(
            restriction_image_summands(4, 3, &[1, 2, 3]).unwrap(),
            vec![p("(1)(2)(3)(4)"), p("(1,2,3)(4)")]
        );
        assert_eq!(restriction_image_summands(4, 3, &[1, 2, 3, 4]).unwrap().len(), 6);
        assert_eq!(restriction_image_summands(5, 3, &[2, 4]).unwrap(), vec![Partition::discrete(5)]);
        assert!(restriction_image_summands(4, 3, &[5]).is_err());
    }

    #[test]
    fn images_cover_exactly_the_partitions_with_singletons() {
        for r in 2..=4 {
            for k in 1..=7usize {
                let lat = RLattice::new(k, r).unwrap();
                let mut covered = BTreeSet::new();
                for i in 1..=k {
                    let t: Vec<usize> = (1..=k).filter(|&e| e != i).collect();
                    covered.extend(restriction_image_summands_in(&lat, &t).unwrap());
                }
                let with_singleton: BTreeSet<Partition> =
                    lat.elements().iter().filter(|x| x.has_singleton()).cloned().collect();
                assert_eq!(covered, with_singleton, "k = {k}, r = {r}");
                let free: BTreeSet<Partition> = crate::partition::singleton_free_elements(k, r)
                    .unwrap()
                    .into_iter()
                    .collect();
                let rest: BTreeSet<Partition> = lat.elements().iter().filter(|x| !covered.contains(*x)).cloned().collect();
                assert_eq!(rest, free);
            }
        }
    }

    #[test]
    fn checked_mode_agrees() {
        let e = Engine::new(Limits::default(), Execution::Sequential, Verification::Checked);
        assert_eq!(e.gm_cohomology(6, 3, 2).unwrap(), gm_cohomology(6, 3, 2).unwrap());
        assert_eq!(e.gm_cohomology(5, 2, 3).unwrap(), gm_cohomology(5, 2, 3).unwrap());
    }

    #[test]
    fn ledger_json_shape() {
        let v = serde_json::to_value(contribution_ledger(3, 3, 2).unwrap()).unwrap();
        assert_eq!(v["entries"][0]["x"], "(1,2,3)");
        assert_eq!(v["entries"][0]["contributions"][0]["degree"], 3);
    }
}
