//! Deciding and constructing connected f-factors for `f(v) >= ceil(n / 2.5)`.
//!
//! 1. Run Tutte's f-factor algorithm; no factor means no connected factor.
//! 2. A connected factor is returned as is.
//! 3. Otherwise the factor has exactly two components `X` and `V \ X`. If a
//!    connected factor exists, one exists in which some `u ∈ X` and
//!    `v ∉ X` are at distance exactly 3, so every 3-edge path `u-a-b-v` of the
//!    host is tried as a forced shortest path. Any factor found that way is
//!    connected, because both components would otherwise need more than
//!    `n / 2.5` vertices outside the closed neighbourhoods of `u` and `v`.

use rayon::prelude::*;
use serde::Serialize;

use crate::distance::{path_constrained_factor, PathConstraint};
use crate::error::{Error, Result};
use crate::graph::{Distance, Edge, EdgeSet, Graph, VertexSet};
use crate::oracle::{density_threshold, find_f_factor, EnumerationBudget};
use crate::tutte::{degrees_of, f_factor, DegreeSpec, Factor};

/// Smallest order for which the component-size arguments hold.
pub const MIN_ORDER: usize = 12;

const PARALLEL_BATCH: usize = 256;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Below the preconditions, decide by brute force instead of refusing.
    pub fallback_oracle: bool,
    /// Evaluate path candidates concurrently. The reported witness is still
    /// the lexicographically least successful candidate.
    pub parallel: bool,
    pub oracle_budget: EnumerationBudget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    ConnectedFactor(Factor),
    NoFactor,
    NoConnectedFactor,
}

impl Outcome {
    pub fn status(&self) -> &'static str {
        match self {
            Outcome::ConnectedFactor(_) => "connected",
            Outcome::NoFactor => "no-factor",
            Outcome::NoConnectedFactor => "no-connected-factor",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// Components of the first factor when it was disconnected.
    pub split: Option<(VertexSet, VertexSet)>,
    /// The forced path whose factor was returned.
    pub witness: Option<PathConstraint>,
    /// Path candidates handed to the distance-constrained search.
    pub candidates_tried: u64,
    /// Candidates dropped because a reduced target went negative.
    pub candidates_skipped: u64,
    pub matchings_solved: u64,
    pub via_oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectedFactorResult {
    pub outcome: Outcome,
    pub diagnostics: Diagnostics,
}

impl ConnectedFactorResult {
    pub fn factor(&self) -> Option<&Factor> {
        match &self.outcome {
            Outcome::ConnectedFactor(f) => Some(f),
            _ => None,
        }
    }

    /// Canonical text form: a `STATUS` line, then for a connected result the
    /// factor as an edge-list document, then `WITNESS u a b v` if a forced
    /// path produced it.
    pub fn to_text(&self) -> String {
        let mut s = format!("STATUS {}\n", self.outcome.status());
        if let Outcome::ConnectedFactor(f) = &self.outcome {
            s.push_str(&f.to_graph().to_edge_list());
        }
        if let Some(p) = &self.diagnostics.witness {
            s.push_str(&format!("WITNESS {} {} {} {}\n", p.u, p.a, p.b, p.v));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Doc<'a> {
            status: &'a str,
            n: Option<usize>,
            m: Option<usize>,
            edges: Option<Vec<[usize; 2]>>,
            witness: Option<[usize; 4]>,
        }
        let factor = self.factor();
        let doc = Doc {
            status: self.outcome.status(),
            n: factor.map(Factor::n),
            m: factor.map(|f| f.edges().len()),
            edges: factor.map(|f| f.edges().iter().map(|e| [e.u, e.v]).collect()),
            witness: self.diagnostics.witness.map(|p| p.vertices()),
        };
        serde_json::to_value(doc).expect("plain data serialises")
    }
}

/// Checks the standing assumptions: `n >= 12` and `f(v) >= ceil(n / 2.5)`.
pub fn check_preconditions(g: &Graph, f: &DegreeSpec) -> Result<()> {
    if f.len() != g.n() {
        return Err(Error::PreconditionViolated(format!(
            "{} targets for {} vertices",
            f.len(),
            g.n()
        )));
    }
    if g.n() < MIN_ORDER {
        return Err(Error::PreconditionViolated(format!(
            "n = {} is below {MIN_ORDER}",
            g.n()
        )));
    }
    let need = density_threshold(g.n());
    if let Some(v) = (0..g.n()).find(|&v| f.get(v) < need) {
        return Err(Error::PreconditionViolated(format!(
            "f({v}) = {} is below ceil(n/2.5) = {need}",
            f.get(v)
        )));
    }
    Ok(())
}

/// Decides whether `g` has a connected f-factor and builds one if so.
pub fn solve(g: &Graph, f: &DegreeSpec, opts: &SolveOptions) -> Result<ConnectedFactorResult> {
    if let Err(e) = check_preconditions(g, f) {
        return if opts.fallback_oracle && f.len() == g.n() {
            oracle_decide(g, f, opts.oracle_budget)
        } else {
            Err(e)
        };
    }
    let diagnostics = Diagnostics {
        matchings_solved: 1,
        ..Diagnostics::default()
    };
    match f_factor(g, f) {
        None => Ok(ConnectedFactorResult {
            outcome: Outcome::NoFactor,
            diagnostics,
        }),
        Some(first) => continue_from(g, f, first, opts, diagnostics),
    }
}

/// Runs the connectivity steps starting from a given f-factor instead of the
/// one Tutte's algorithm returns. Same preconditions as [`solve`].
pub fn solve_from_factor(
    g: &Graph,
    f: &DegreeSpec,
    first: Factor,
    opts: &SolveOptions,
) -> Result<ConnectedFactorResult> {
    check_preconditions(g, f)?;
    if first.spec() != f || first.n() != g.n() {
        return Err(Error::PreconditionViolated(
            "factor does not match the instance".into(),
        ));
    }
    continue_from(g, f, first, opts, Diagnostics::default())
}

fn continue_from(
    g: &Graph,
    f: &DegreeSpec,
    first: Factor,
    opts: &SolveOptions,
    mut diagnostics: Diagnostics,
) -> Result<ConnectedFactorResult> {
    let mut comps = first.components();
    if comps.len() == 1 {
        return Ok(ConnectedFactorResult {
            outcome: Outcome::ConnectedFactor(first),
            diagnostics,
        });
    }
    if comps.len() != 2 {
        return Err(Error::InternalInconsistency(format!(
            "f-factor above the density threshold has {} components",
            comps.len()
        )));
    }
    let rest = comps.pop().expect("two components");
    let x = comps.pop().expect("two components");

    let found = if opts.parallel {
        search_parallel(g, f, &x, &mut diagnostics)?
    } else {
        search_sequential(g, f, &x, &mut diagnostics)?
    };
    diagnostics.split = Some((x, rest));
    let outcome = match found {
        Some((p, factor)) => {
            if !factor.is_connected() {
                return Err(Error::InternalInconsistency(format!(
                    "forced path {:?} produced a disconnected factor",
                    p.vertices()
                )));
            }
            diagnostics.witness = Some(p);
            Outcome::ConnectedFactor(factor)
        }
        None => Outcome::NoConnectedFactor,
    };
    Ok(ConnectedFactorResult {
        outcome,
        diagnostics,
    })
}

/// Runs one candidate. `Ok(None)` from the outer option means "skipped".
fn try_candidate(g: &Graph, f: &DegreeSpec, p: &PathConstraint) -> Result<Option<Option<Factor>>> {
    match path_constrained_factor(g, f, p) {
        Ok(r) => Ok(Some(r)),
        Err(Error::PreconditionViolated(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn record(d: &mut Diagnostics, r: &Option<Option<Factor>>) {
    match r {
        None => d.candidates_skipped += 1,
        Some(_) => {
            d.candidates_tried += 1;
            d.matchings_solved += 1;
        }
    }
}

fn search_sequential(
    g: &Graph,
    f: &DegreeSpec,
    x: &VertexSet,
    d: &mut Diagnostics,
) -> Result<Option<(PathConstraint, Factor)>> {
    for p in candidate_paths(g, x) {
        let r = try_candidate(g, f, &p)?;
        record(d, &r);
        if let Some(Some(factor)) = r {
            return Ok(Some((p, factor)));
        }
    }
    Ok(None)
}

fn search_parallel(
    g: &Graph,
    f: &DegreeSpec,
    x: &VertexSet,
    d: &mut Diagnostics,
) -> Result<Option<(PathConstraint, Factor)>> {
    let mut stream = candidate_paths(g, x).peekable();
    while stream.peek().is_some() {
        let batch: Vec<PathConstraint> = stream.by_ref().take(PARALLEL_BATCH).collect();
        let results: Vec<Result<Option<Option<Factor>>>> =
            batch.par_iter().map(|p| try_candidate(g, f, p)).collect();
        // Scan in order so counters and the witness match the sequential run.
        for (p, r) in batch.into_iter().zip(results) {
            let r = r?;
            record(d, &r);
            if let Some(Some(factor)) = r {
                return Ok(Some((p, factor)));
            }
        }
    }
    Ok(None)
}

/// Every `(u, a, b, v)` with `u ∈ x`, `v ∉ x`, host edges `ua`, `ab`, `bv` and
/// four distinct vertices, in lexicographic `(u, v, a, b)` order.
pub fn candidate_paths<'g>(
    g: &'g Graph,
    x: &VertexSet,
) -> impl Iterator<Item = PathConstraint> + 'g {
    let inside = x.mask(g.n());
    let us: Vec<usize> = x.iter().collect();
    let vs: Vec<usize> = (0..g.n()).filter(|&v| !inside[v]).collect();
    us.into_iter().flat_map(move |u| {
        let vs = vs.clone();
        vs.into_iter().flat_map(move |v| {
            g.neighbors(u)
                .iter()
                .copied()
                .filter(move |&a| a != v)
                .flat_map(move |a| {
                    sorted_intersection(g.neighbors(a), g.neighbors(v))
                        .filter(move |&b| b != u)
                        .map(move |b| PathConstraint { u, a, b, v })
                })
        })
    })
}

fn sorted_intersection<'a>(a: &'a [usize], b: &'a [usize]) -> impl Iterator<Item = usize> + 'a {
    let (mut i, mut j) = (0, 0);
    std::iter::from_fn(move || {
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let x = a[i];
                    i += 1;
                    j += 1;
                    return Some(x);
                }
            }
        }
        None
    })
}

/// Brute-force decision for instances outside the preconditions.
fn oracle_decide(
    g: &Graph,
    f: &DegreeSpec,
    budget: EnumerationBudget,
) -> Result<ConnectedFactorResult> {
    let diagnostics = Diagnostics {
        via_oracle: true,
        ..Diagnostics::default()
    };
    let outcome = match find_f_factor(g, f, budget, Factor::is_connected)? {
        Some(factor) => Outcome::ConnectedFactor(factor),
        None => match find_f_factor(g, f, budget, |_| true)? {
            Some(_) => Outcome::NoConnectedFactor,
            None => Outcome::NoFactor,
        },
    };
    Ok(ConnectedFactorResult {
        outcome,
        diagnostics,
    })
}

/// Verdict of [`verify_connected_factor`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorStatus {
    Valid,
    Disconnected,
    NotAFactor,
}

impl FactorStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FactorStatus::Valid => "valid",
            FactorStatus::Disconnected => "disconnected",
            FactorStatus::NotAFactor => "not-a-factor",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeViolation {
    pub vertex: usize,
    pub expected: usize,
    pub actual: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorReport {
    pub foreign_edges: Vec<Edge>,
    pub degree_violations: Vec<DegreeViolation>,
    pub components: usize,
    pub diameter: Distance,
}

impl FactorReport {
    pub fn status(&self) -> FactorStatus {
        if !self.foreign_edges.is_empty() || !self.degree_violations.is_empty() {
            FactorStatus::NotAFactor
        } else if self.components > 1 {
            FactorStatus::Disconnected
        } else {
            FactorStatus::Valid
        }
    }

    pub fn is_valid(&self) -> bool {
        self.status() == FactorStatus::Valid
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("RESULT {}\n", self.status().as_str());
        s.push_str(&format!("COMPONENTS {}\n", self.components));
        s.push_str(&format!("DIAMETER {}\n", self.diameter));
        for e in &self.foreign_edges {
            s.push_str(&format!("FOREIGN-EDGE {e}\n"));
        }
        for d in &self.degree_violations {
            s.push_str(&format!(
                "DEGREE {} expected {} actual {}\n",
                d.vertex, d.expected, d.actual
            ));
        }
        s
    }
}

/// Checks `edges ⊆ E(g)`, exact degrees and connectivity, and measures the
/// diameter of the candidate factor.
pub fn verify_connected_factor(g: &Graph, f: &DegreeSpec, edges: &EdgeSet) -> FactorReport {
    let n = g.n();
    let foreign_edges = edges
        .iter()
        .copied()
        .filter(|e| !g.has_edge(e.u, e.v))
        .collect();
    let deg = degrees_of(n, &edges.iter().copied().filter(|e| e.v < n).collect());
    let degree_violations = (0..n)
        .filter(|&v| f.targets().get(v) != Some(&deg[v]))
        .map(|v| DegreeViolation {
            vertex: v,
            expected: f.targets().get(v).copied().unwrap_or(0),
            actual: deg[v],
        })
        .collect();
    let h = Graph::from_edge_set(n, &edges.iter().copied().filter(|e| e.v < n).collect());
    FactorReport {
        foreign_edges,
        degree_violations,
        components: h.connected_components().len(),
        diameter: h.diameter(),
    }
}
