//! Cartesian-ness of the configuration cube, connectivity of the layers of
//! the Taylor tower for r-immersions, intrinsic convergence, and the
//! comparison between the homological and homotopical towers.
//!
//! Every number is computed in exact integer or rational arithmetic. Where
//! two independent routes exist (closed form and minimization over
//! partitions, rational layer formula and cartesian-ness minus mk) both are
//! exposed so callers can compare them.

use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::arrangement::Engine;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::partition::singleton_free_elements_with;

type Q = Ratio<i128>;

/// A connectivity or cartesian-ness number; `Infinite` for cubes of
/// contractible spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connectivity {
    Finite(i64),
    Infinite,
}

impl Connectivity {
    pub fn finite(self) -> Option<i64> {
        match self {
            Connectivity::Finite(v) => Some(v),
            Connectivity::Infinite => None,
        }
    }
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Connectivity::Finite(v) => write!(f, "{v}"),
            Connectivity::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Connectivity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Connectivity::Finite(v) => s.serialize_i64(*v),
            Connectivity::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// Position of r relative to n + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Below,
    Borderline,
    Above,
}

impl Regime {
    pub fn of(r: usize, n: u64) -> Regime {
        match (r as u64).cmp(&(n + 1)) {
            std::cmp::Ordering::Less => Regime::Below,
            std::cmp::Ordering::Equal => Regime::Borderline,
            std::cmp::Ordering::Greater => Regime::Above,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::Below => "r<n+1",
            Regime::Borderline => "r=n+1",
            Regime::Above => "r>n+1",
        }
    }
}

impl Serialize for Regime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

fn check_krn(k: usize, r: usize, n: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::usage("k must be at least 1"));
    }
    if r < 2 {
        return Err(Error::usage("r must be at least 2"));
    }
    if n == 0 {
        return Err(Error::usage("n must be at least 1"));
    }
    Ok(())
}

/// k(n−1) + ⌊k/r⌋(r−n−1), the value for r ≤ n + 1.
pub fn cartesianness_low_r(k: usize, r: usize, n: u64) -> i64 {
    let (k, r, n) = (k as i64, r as i64, n as i64);
    k * (n - 1) + (k / r) * (r - n - 1)
}

/// k(n−1) + r − n − 1, the value for r ≥ n + 1.
pub fn cartesianness_high_r(k: usize, r: usize, n: u64) -> i64 {
    let (k, r, n) = (k as i64, r as i64, n as i64);
    k * (n - 1) + r - n - 1
}

/// The regime-appropriate formula, evaluated even when k < r.
pub fn cartesianness_formula(k: usize, r: usize, n: u64) -> i64 {
    match Regime::of(r, n) {
        Regime::Above => cartesianness_high_r(k, r, n),
        _ => cartesianness_low_r(k, r, n),
    }
}

/// How cartesian the cube S ↦ rConf(k∖S, ℝⁿ) is.
pub fn cartesianness_closed_form(k: usize, r: usize, n: u64) -> Result<Connectivity> {
    check_krn(k, r, n)?;
    if k < r {
        return Ok(Connectivity::Infinite);
    }
    let low = cartesianness_low_r(k, r, n);
    let high = cartesianness_high_r(k, r, n);
    if Regime::of(r, n) == Regime::Borderline && low != high {
        return Err(Error::integrity(format!("the two forms disagree at r = n+1: {low} vs {high}")));
    }
    Ok(Connectivity::Finite(cartesianness_formula(k, r, n)))
}

/// min over partitions x of {1..k} without singletons of k(n−1) + c(x)(r−n−1).
pub fn cartesianness_bruteforce(k: usize, r: usize, n: u64) -> Result<Connectivity> {
    cartesianness_bruteforce_with(k, r, n, &Limits::default())
}

pub fn cartesianness_bruteforce_with(k: usize, r: usize, n: u64, limits: &Limits) -> Result<Connectivity> {
    check_krn(k, r, n)?;
    let (ki, ri, ni) = (k as i64, r as i64, n as i64);
    Ok(singleton_free_elements_with(k, r, limits)?
        .iter()
        .map(|x| ki * (ni - 1) + x.block_count() as i64 * (ri - ni - 1))
        .min()
        .map_or(Connectivity::Infinite, Connectivity::Finite))
}

/// Lowest degree in which the total fiber of the cube has nonzero
/// cohomology.
pub fn homological_minimal_degree(engine: &Engine, k: usize, r: usize, n: u64) -> Result<Connectivity> {
    check_krn(k, r, n)?;
    Ok(engine
        .tfiber_cohomology(k, r, n)?
        .min_degree()
        .map_or(Connectivity::Infinite, Connectivity::Finite))
}

/// k mod r as k − r⌊k/r⌋.
pub fn k_mod_r(k: usize, r: usize) -> usize {
    k - r * (k / r)
}

/// Connectivity of the k-th layer from the rational expression:
/// for r ≤ n+1, k(n(r−1)/r − m − 1/r) − ((k mod r)/r)(r−n−1);
/// for r ≥ n+1, k(n−m−1) + r − n − 1.
pub fn layer_connectivity_rational(k: usize, r: usize, n: u64, m: u64) -> Result<Q> {
    check_krn(k, r, n)?;
    let (kq, rq, nq, mq) = (
        Q::from_integer(k as i128),
        Q::from_integer(r as i128),
        Q::from_integer(n as i128),
        Q::from_integer(m as i128),
    );
    let one = Q::from_integer(1);
    let low = kq * (nq * (rq - one) / rq - mq - one / rq)
        - (Q::from_integer(k_mod_r(k, r) as i128) / rq) * (rq - nq - one);
    let high = kq * (nq - mq - one) + rq - nq - one;
    Ok(match Regime::of(r, n) {
        Regime::Below => low,
        Regime::Above => high,
        Regime::Borderline => {
            if low != high {
                return Err(Error::integrity(format!(
                    "layer formulas disagree at r = n+1: {low} vs {high}"
                )));
            }
            low
        }
    })
}

/// The layer connectivity as an integer; a fractional value would mean the
/// formula was mis-evaluated.
pub fn layer_connectivity(k: usize, r: usize, n: u64, m: u64) -> Result<i64> {
    let q = layer_connectivity_rational(k, r, n, m)?;
    if !q.is_integer() {
        return Err(Error::integrity(format!("layer connectivity {q} is not an integer")));
    }
    Ok(q.to_integer() as i64)
}

/// Cartesian-ness minus mk.
pub fn layer_connectivity_via_cartesianness(k: usize, r: usize, n: u64, m: u64) -> i64 {
    cartesianness_formula(k, r, n) - (m as i64) * (k as i64)
}

/// Whether the tower converges intrinsically, with the test that decided.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvergenceVerdict {
    pub converges: bool,
    pub regime: Regime,
    pub criterion: String,
}

/// n(r−1) > rm + 1 (r ≤ n+1) or n > m + 1 (r ≥ n+1). At r = n+1 both tests
/// are evaluated and must agree.
pub fn intrinsic_convergence(r: usize, n: u64, m: u64) -> Result<ConvergenceVerdict> {
    if r < 2 {
        return Err(Error::usage("r must be at least 2"));
    }
    if n < 2 {
        return Err(Error::usage("intrinsic convergence needs n ≥ 2"));
    }
    let low = Q::from_integer(n as i128) > Q::new(r as i128 * m as i128 + 1, r as i128 - 1);
    let high = n > m + 1;
    let regime = Regime::of(r, n);
    let low_text = format!("n > (rm+1)/(r-1): {n} > {}", Q::new(r as i128 * m as i128 + 1, r as i128 - 1));
    let high_text = format!("n > m+1: {n} > {}", m + 1);
    let (converges, criterion) = match regime {
        Regime::Below => (low, low_text),
        Regime::Above => (high, high_text),
        Regime::Borderline => {
            if low != high {
                return Err(Error::integrity(format!(
                    "convergence tests disagree at r = n+1 (r={r}, n={n}, m={m})"
                )));
            }
            (low, format!("{low_text}; {high_text}"))
        }
    };
    Ok(ConvergenceVerdict {
        converges,
        regime,
        criterion,
    })
}

/// Outcome of comparing the homological and homotopical towers at stage k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// 1 < k < r: both towers are constant up to stage k.
    TowersConstant,
    /// Isomorphism on the first non-trivial homotopy group.
    Isomorphism,
    Epimorphism,
    NoConclusion,
    /// k = 1 or k > 2r − 1.
    NotCovered,
}

impl Classification {
    pub fn label(self) -> &'static str {
        match self {
            Classification::TowersConstant => "towers constant",
            Classification::Isomorphism => "isomorphism",
            Classification::Epimorphism => "epimorphism",
            Classification::NoConclusion => "no conclusion",
            Classification::NotCovered => "not covered",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Classification {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub r: usize,
    pub n: u64,
    pub k: usize,
    pub classification: Classification,
    /// Cartesian-ness of the stage-k cube (absent when k < r).
    pub cartesianness: Option<i64>,
    /// 2(r−1)n − 3, the connectivity of the comparison map of cubes.
    pub comparison_bound: i64,
    /// (r−1)n − 2, the connectivity of the spaces in the cube.
    pub space_connectivity: i64,
}

/// Classifies stage k. Requires r > 2 and n ≥ 2; when `m` is given it must
/// satisfy 0 < m < n.
pub fn comparison_report(r: usize, n: u64, k: usize, m: Option<u64>) -> Result<ComparisonReport> {
    if r == 2 {
        return Err(Error::ClassicalCase);
    }
    if r < 2 {
        return Err(Error::usage("r must be at least 2"));
    }
    if n < 2 {
        return Err(Error::usage("the comparison needs n ≥ 2"));
    }
    if k == 0 {
        return Err(Error::usage("k must be at least 1"));
    }
    if let Some(m) = m {
        if !(0 < m && m < n) {
            return Err(Error::usage(format!("the comparison needs 0 < m < n, got m = {m}, n = {n}")));
        }
    }
    let bound = 2 * (r as i64 - 1) * n as i64 - 3;
    let space = (r as i64 - 1) * n as i64 - 2;
    let (classification, cart) = if k == 1 || k > 2 * r - 1 {
        (
            Classification::NotCovered,
            (k >= r).then(|| cartesianness_formula(k, r, n)),
        )
    } else if k < r {
        (Classification::TowersConstant, None)
    } else {
        let c = cartesianness_formula(k, r, n);
        let class = match c.cmp(&bound) {
            std::cmp::Ordering::Less => Classification::Isomorphism,
            std::cmp::Ordering::Equal => Classification::Epimorphism,
            std::cmp::Ordering::Greater => Classification::NoConclusion,
        };
        (class, Some(c))
    };
    Ok(ComparisonReport {
        r,
        n,
        k,
        classification,
        cartesianness: cart,
        comparison_bound: bound,
        space_connectivity: space,
    })
}

/// Everything this module knows about one (k, r, n, m).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectivityReport {
    pub k: usize,
    pub r: usize,
    pub n: u64,
    pub m: u64,
    pub regime: Regime,
    pub cartesian_closed_form: Connectivity,
    pub cartesian_bruteforce: Connectivity,
    /// Present only when requested: it needs the total-fiber cohomology.
    pub homological_minimal_degree: Option<Connectivity>,
    pub layer_connectivity: i64,
    pub layer_connectivity_via_cartesian: i64,
    pub intrinsic_convergence: Option<ConvergenceVerdict>,
    pub comparison: Option<ComparisonReport>,
    /// Why no comparison applies, when it does not.
    pub comparison_notice: Option<String>,
}

impl ConnectivityReport {
    /// All cross-checks that apply to this query hold.
    pub fn consistent(&self) -> bool {
        let cart = self.cartesian_closed_form == self.cartesian_bruteforce;
        let homological = self
            .homological_minimal_degree
            .is_none_or(|h| h == self.cartesian_closed_form);
        cart && homological && self.layer_connectivity == self.layer_connectivity_via_cartesian
    }
}

/// Builds the full report. `engine` is used only when the homological
/// witness is requested.
pub fn connectivity_report(
    k: usize,
    r: usize,
    n: u64,
    m: u64,
    homological: Option<&Engine>,
) -> Result<ConnectivityReport> {
    check_krn(k, r, n)?;
    let limits = homological.map_or_else(Limits::default, |e| *e.limits());
    let homological_minimal_degree = homological
        .map(|e| homological_minimal_degree(e, k, r, n))
        .transpose()?;
    let (comparison, comparison_notice) = match comparison_report(r, n, k, (m > 0).then_some(m)) {
        Ok(c) => (Some(c), None),
        Err(e @ (Error::ClassicalCase | Error::Usage(_))) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(ConnectivityReport {
        k,
        r,
        n,
        m,
        regime: Regime::of(r, n),
        cartesian_closed_form: cartesianness_closed_form(k, r, n)?,
        cartesian_bruteforce: cartesianness_bruteforce_with(k, r, n, &limits)?,
        homological_minimal_degree,
        layer_connectivity: layer_connectivity(k, r, n, m)?,
        layer_connectivity_via_cartesian: layer_connectivity_via_cartesianness(k, r, n, m),
        intrinsic_convergence: if n >= 2 { Some(intrinsic_convergence(r, n, m)?) } else { None },
        comparison,
        comparison_notice,
    })
}
