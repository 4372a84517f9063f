//! Bidirectional link-selection policies.
//!
//! A selection picks one A->B link `(i_t, j_r)` and one B->A link `(j_t, i_r)`
//! from the obtainable-SINR matrix, with distinct antennas at each node
//! (`i_t != i_r`, `j_t != j_r`). Matrix entry `[i][j]` is the SINR between
//! antenna `i` at A and antenna `j` at B, the same in both directions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::SinrMatrix;
use crate::config::ModulationParams;
use crate::error::{Error, Result};
use crate::metrics::{rate_of, ser_of};

/// Chosen link pair. Indices are zero-based antenna numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinkSelection {
    /// `(tx antenna at A, rx antenna at B)`.
    pub ab_link: (usize, usize),
    /// `(tx antenna at B, rx antenna at A)`.
    pub ba_link: (usize, usize),
}

impl LinkSelection {
    pub fn new(ab_link: (usize, usize), ba_link: (usize, usize)) -> Result<Self> {
        let s = LinkSelection { ab_link, ba_link };
        if !s.is_disjoint() {
            return Err(Error::Domain(format!(
                "selection {ab_link:?}/{ba_link:?} reuses an antenna"
            )));
        }
        Ok(s)
    }

    /// Builds a selection from matrix positions `[i][j]` of the two links.
    pub fn from_entries(ab: (usize, usize), ba: (usize, usize)) -> Self {
        LinkSelection {
            ab_link: ab,
            ba_link: (ba.1, ba.0),
        }
    }

    pub fn is_disjoint(&self) -> bool {
        self.ab_link.0 != self.ba_link.1 && self.ab_link.1 != self.ba_link.0
    }

    /// Matrix position `[i][j]` of the A->B link.
    pub fn ab_entry(&self) -> (usize, usize) {
        self.ab_link
    }

    /// Matrix position `[i][j]` of the B->A link.
    pub fn ba_entry(&self) -> (usize, usize) {
        (self.ba_link.1, self.ba_link.0)
    }

    /// Tie-break key `(i_t, j_r, i_r, j_t)`.
    fn key(&self) -> (usize, usize, usize, usize) {
        (self.ab_link.0, self.ab_link.1, self.ba_link.1, self.ba_link.0)
    }
}

/// Result of running a policy on one matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionOutcome {
    pub selection: LinkSelection,
    /// Larger of the two selected obtainable SINRs.
    pub gamma_first: f64,
    /// Smaller of the two selected obtainable SINRs.
    pub gamma_second: f64,
    pub comparisons_used: u64,
}

/// Fraction of time the best link serves A->B; the optimum of the
/// time-sharing relaxation is a corner except at `w = 0.5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeShare {
    pub time_share_fraction: f64,
}

impl TimeShare {
    /// `w = 0.5` leaves the fraction free; we fix it to 1 (best link on A->B).
    pub fn for_weight(w: f64) -> Self {
        TimeShare {
            time_share_fraction: if w >= 0.5 { 1.0 } else { 0.0 },
        }
    }

    pub fn best_link_on_ab(&self) -> bool {
        self.time_share_fraction >= 0.5
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    MaxWsr,
    MinWser,
    SerialMax,
}

impl Policy {
    pub const ALL: [Policy; 3] = [Policy::MaxWsr, Policy::MinWser, Policy::SerialMax];

    pub fn as_str(&self) -> &'static str {
        match self {
            Policy::MaxWsr => "max_wsr",
            Policy::MinWser => "min_wser",
            Policy::SerialMax => "serial_max",
        }
    }

    /// Search strategy behind the policy, for complexity accounting.
    pub fn comparison_method(&self) -> ComparisonMethod {
        match self {
            Policy::MaxWsr | Policy::MinWser => ComparisonMethod::Exhaustive,
            Policy::SerialMax => ComparisonMethod::SerialMax,
        }
    }

    pub fn select(
        &self,
        sinr: &SinrMatrix,
        w: f64,
        modulation: ModulationParams,
    ) -> Result<SelectionOutcome> {
        match self {
            Policy::MaxWsr => exhaustive_max_wsr(sinr, w),
            Policy::MinWser => exhaustive_min_wser(sinr, w, modulation),
            Policy::SerialMax => serial_max(sinr, w),
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Policy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max_wsr" => Ok(Policy::MaxWsr),
            "min_wser" => Ok(Policy::MinWser),
            "serial_max" => Ok(Policy::SerialMax),
            other => Err(Error::InvalidSweep(format!("unknown policy '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonMethod {
    Exhaustive,
    SerialMax,
}

fn check_size(sinr: &SinrMatrix) -> Result<()> {
    if sinr.n_a() < 2 || sinr.n_b() < 2 {
        return Err(Error::MatrixTooSmall {
            rows: sinr.n_a(),
            cols: sinr.n_b(),
        });
    }
    Ok(())
}

fn outcome(sinr: &SinrMatrix, selection: LinkSelection, comparisons_used: u64) -> SelectionOutcome {
    let (ai, aj) = selection.ab_entry();
    let (bi, bj) = selection.ba_entry();
    let g_ab = sinr.get(ai, aj);
    let g_ba = sinr.get(bi, bj);
    SelectionOutcome {
        selection,
        gamma_first: g_ab.max(g_ba),
        gamma_second: g_ab.min(g_ba),
        comparisons_used,
    }
}

/// Exhaustive search over all unordered disjoint entry pairs; each pair is
/// scored in both orientations. `better(new, best)` decides strict
/// improvement; equal scores fall back to the smallest `(i_t, j_r, i_r, j_t)`.
fn exhaustive<F>(sinr: &SinrMatrix, per_entry: &[f64], w: f64, better: F) -> SelectionOutcome
where
    F: Fn(f64, f64) -> bool,
{
    let (na, nb) = (sinr.n_a(), sinr.n_b());
    let score = |ab: (usize, usize), ba: (usize, usize)| {
        w * per_entry[ab.0 * nb + ab.1] + (1.0 - w) * per_entry[ba.0 * nb + ba.1]
    };

    let mut best: Option<(f64, LinkSelection)> = None;
    let mut pairs = 0u64;
    for i1 in 0..na {
        for j1 in 0..nb {
            for i2 in (i1 + 1)..na {
                for j2 in 0..nb {
                    if j2 == j1 {
                        continue;
                    }
                    pairs += 1;
                    for (ab, ba) in [((i1, j1), (i2, j2)), ((i2, j2), (i1, j1))] {
                        let s = score(ab, ba);
                        let cand = LinkSelection::from_entries(ab, ba);
                        let take = match &best {
                            None => true,
                            Some((bs, bsel)) => {
                                better(s, *bs) || (s == *bs && cand.key() < bsel.key())
                            }
                        };
                        if take {
                            best = Some((s, cand));
                        }
                    }
                }
            }
        }
    }
    let (_, selection) = best.expect("matrix has at least one feasible pair");
    outcome(sinr, selection, pairs)
}

/// Feasible pair maximizing `w R(gamma_ab) + (1 - w) R(gamma_ba)`.
pub fn exhaustive_max_wsr(sinr: &SinrMatrix, w: f64) -> Result<SelectionOutcome> {
    check_size(sinr)?;
    let rates: Vec<f64> = sinr.as_slice().iter().map(|&g| rate_of(g)).collect();
    Ok(exhaustive(sinr, &rates, w, |a, b| a > b))
}

/// Feasible pair minimizing `w SER(gamma_ab) + (1 - w) SER(gamma_ba)`.
pub fn exhaustive_min_wser(
    sinr: &SinrMatrix,
    w: f64,
    modulation: ModulationParams,
) -> Result<SelectionOutcome> {
    check_size(sinr)?;
    let sers: Vec<f64> = sinr
        .as_slice()
        .iter()
        .map(|&g| ser_of(g, modulation))
        .collect();
    Ok(exhaustive(sinr, &sers, w, |a, b| a < b))
}

/// Row-major argmax over the entries not in an excluded row/column. Returns
/// the position and the number of entries examined.
fn argmax_excluding(sinr: &SinrMatrix, skip: Option<(usize, usize)>) -> ((usize, usize), u64) {
    let mut best: Option<((usize, usize), f64)> = None;
    let mut examined = 0u64;
    for i in 0..sinr.n_a() {
        if skip.is_some_and(|(r, _)| r == i) {
            continue;
        }
        for j in 0..sinr.n_b() {
            if skip.is_some_and(|(_, c)| c == j) {
                continue;
            }
            examined += 1;
            let v = sinr.get(i, j);
            if best.is_none_or(|(_, b)| v > b) {
                best = Some(((i, j), v));
            }
        }
    }
    (best.expect("non-empty submatrix").0, examined)
}

/// Greedy two-step selection: global maximum, then the maximum of the
/// matrix with that row and column removed. The best link serves the
/// direction with the larger weight (A->B when `w >= 0.5`).
pub fn serial_max(sinr: &SinrMatrix, w: f64) -> Result<SelectionOutcome> {
    check_size(sinr)?;
    let (first, n1) = argmax_excluding(sinr, None);
    let (second, n2) = argmax_excluding(sinr, Some(first));
    let selection = if TimeShare::for_weight(w).best_link_on_ab() {
        LinkSelection::from_entries(first, second)
    } else {
        LinkSelection::from_entries(second, first)
    };
    Ok(SelectionOutcome {
        selection,
        gamma_first: sinr.get(first.0, first.1),
        gamma_second: sinr.get(second.0, second.1),
        comparisons_used: n1 + n2,
    })
}

/// `max(w, 1-w) R(gamma_first) + min(w, 1-w) R(gamma_second)`.
pub fn weighted_combine_rate(gamma_first: f64, gamma_second: f64, w: f64) -> f64 {
    w.max(1.0 - w) * rate_of(gamma_first) + w.min(1.0 - w) * rate_of(gamma_second)
}

/// `max(w, 1-w) SER(gamma_first) + min(w, 1-w) SER(gamma_second)`.
pub fn weighted_combine_ser(
    gamma_first: f64,
    gamma_second: f64,
    w: f64,
    modulation: ModulationParams,
) -> f64 {
    w.max(1.0 - w) * ser_of(gamma_first, modulation)
        + w.min(1.0 - w) * ser_of(gamma_second, modulation)
}

/// Weighted sum rate of a selection evaluated on `sinr` (w on A->B).
pub fn selection_rate(sinr: &SinrMatrix, selection: &LinkSelection, w: f64) -> f64 {
    let (ai, aj) = selection.ab_entry();
    let (bi, bj) = selection.ba_entry();
    w * rate_of(sinr.get(ai, aj)) + (1.0 - w) * rate_of(sinr.get(bi, bj))
}

/// Weighted sum SER of a selection evaluated on `sinr` (w on A->B).
pub fn selection_ser(
    sinr: &SinrMatrix,
    selection: &LinkSelection,
    w: f64,
    modulation: ModulationParams,
) -> f64 {
    let (ai, aj) = selection.ab_entry();
    let (bi, bj) = selection.ba_entry();
    w * ser_of(sinr.get(ai, aj), modulation) + (1.0 - w) * ser_of(sinr.get(bi, bj), modulation)
}

/// Rank (1 = largest) of `gamma_second` among all entries of `sinr`.
pub fn second_link_rank(sinr: &SinrMatrix, outcome: &SelectionOutcome) -> usize {
    1 + sinr
        .as_slice()
        .iter()
        .filter(|&&v| v > outcome.gamma_second)
        .count()
}

/// Upper bound on the probability that Serial-Max misses the exhaustive
/// optimum: `(n_a+n_b-2)(n_a+n_b-3) / ((n_a n_b - 1)(n_a n_b - 2))`.
pub fn p_not_upper_bound(n_a: usize, n_b: usize) -> Result<f64> {
    let nn = n_a * n_b;
    if nn <= 2 {
        return Err(Error::DegenerateSize {
            product: nn,
            reason: "bound needs n_a*n_b >= 3",
        });
    }
    let s = (n_a + n_b) as f64;
    let nn = nn as f64;
    Ok((s - 2.0) * (s - 3.0) / ((nn - 1.0) * (nn - 2.0)))
}

/// Number of candidate comparisons of each method.
pub fn comparison_count(method: ComparisonMethod, n_a: usize, n_b: usize) -> u64 {
    let (a, b) = (n_a as u64, n_b as u64);
    match method {
        ComparisonMethod::Exhaustive => a * b * (a - 1) * (b - 1) / 2,
        ComparisonMethod::SerialMax => 2 * a * b - a - b + 1,
    }
}
