//! Criteria for cliques of size sqrt(q) in Peisert graphs: vanishing of
//! exponential sums on the selected cosets, and the trace-kernel test for
//! the candidates `F_{p^r} + h F_{p^r}` when q = p^{4r}.

use std::sync::Arc;

use serde::Serialize;

use crate::arith;
use crate::cayley::CayleyGraph;
use crate::clique::{enumerate_max_cliques_through, is_clique, is_maximal};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::sums::exp_sum_vanishes;

fn indices(set: &[FieldElement]) -> Vec<usize> {
    set.iter().map(|x| x.index() as usize).collect()
}

fn sqrt_q(field: &FiniteField) -> u32 {
    arith::exact_sqrt(field.order() as u64).expect("Peisert fields have square order") as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PecVerdict {
    /// `S(q, A; c) = 0` for every `c` in the selected set B.
    pub vanishing: bool,
    /// `A` is a clique in the graph.
    pub clique: bool,
}

impl PecVerdict {
    pub fn agree(&self) -> bool {
        self.vanishing == self.clique
    }
}

/// Evaluates both sides of the vanishing criterion for a set of size sqrt(q).
pub fn pec_vanishing_check(graph: &CayleyGraph, set: &[FieldElement]) -> Result<PecVerdict> {
    let sets = graph.peisert_sets().ok_or(Error::NotPeisertField { q: graph.field().order() })?;
    let field = graph.field();
    let mut a = set.to_vec();
    a.sort_unstable();
    a.dedup();
    let expected = sqrt_q(field) as usize;
    if a.len() != expected || a.len() != set.len() {
        return Err(Error::WrongSize { got: set.len(), expected });
    }
    let vanishing = sets
        .selected
        .iter()
        .flat_map(|&j| sets.cosets[j as usize].iter())
        .all(|&c| exp_sum_vanishes(field, &a, c));
    let clique = is_clique(graph.graph(), &indices(&a));
    Ok(PecVerdict { vanishing, clique })
}

/// `|A| <= sqrt(q)` for a clique `A` of a Peisert graph.
pub fn peisert_trivial_bound_check(graph: &CayleyGraph, set: &[FieldElement]) -> Result<bool> {
    if graph.peisert_sets().is_none() {
        return Err(Error::NotPeisertField { q: graph.field().order() });
    }
    if !is_clique(graph.graph(), &indices(set)) {
        return Err(Error::NotAClique);
    }
    Ok(set.len() as u32 <= sqrt_q(graph.field()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub h: u32,
    /// `I ∩ h^{-1} I ∩ B` is empty.
    pub criterion: bool,
    /// `F_{p^r} + h F_{p^r}` is a clique, checked edge by edge.
    pub direct: bool,
}

impl ScanRecord {
    pub fn agree(&self) -> bool {
        self.criterion == self.direct
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScanConclusion {
    SubfieldMaximal,
    CliqueNumberIsSqrtQ { witness_h: u32 },
}

#[derive(Clone, Debug, Serialize)]
pub struct PeisertScanReport {
    pub field: String,
    pub q: u32,
    pub r: u32,
    pub kernel_size: usize,
    pub b_selection: [u8; 2],
    pub records: Vec<ScanRecord>,
    pub disagreements: usize,
    pub conclusion: ScanConclusion,
    /// Direct check that F_{p^r} admits no extension, for comparison with
    /// the conclusion.
    pub subfield_is_maximal: bool,
}

/// Runs the kernel-intersection test and the direct clique test for every
/// `h` outside F_{p^r}, in canonical order.
pub fn h_scan(field: &Arc<FiniteField>, r: u32) -> Result<PeisertScanReport> {
    let (p, s, q) = (field.characteristic(), field.degree(), field.order());
    if p % 4 != 3 || s % 2 != 0 {
        return Err(Error::NotPeisertField { q });
    }
    if r == 0 || s != 4 * r {
        return Err(Error::DegreeMismatch { s, r });
    }
    let graph = CayleyGraph::peisert(field)?;
    let sets = graph.peisert_sets().expect("Peisert graph");
    let mut in_b = vec![false; q as usize];
    for x in sets.selected_set() {
        in_b[x.index() as usize] = true;
    }
    let kernel = field.trace_kernel_image(r)?;
    let sub = field.subfield_elements(r)?;

    let records: Vec<ScanRecord> = field
        .nonzero_elements()
        .filter(|h| sub.binary_search(h).is_err())
        .map(|h| {
            let h_inv = field.inv(h).expect("h is nonzero");
            let mut scaled: Vec<FieldElement> = kernel.iter().map(|&x| field.mul(h_inv, x)).collect();
            scaled.sort_unstable();
            let criterion = !sorted_intersection(&kernel, &scaled).any(|x| in_b[x.index() as usize]);
            let span: Vec<usize> = sub
                .iter()
                .flat_map(|&x| sub.iter().map(move |&y| (x, y)))
                .map(|(x, y)| field.add(x, field.mul(h, y)).index() as usize)
                .collect();
            ScanRecord { h: h.index(), criterion, direct: is_clique(graph.graph(), &span) }
        })
        .collect();

    let disagreements = records.iter().filter(|r| !r.agree()).count();
    let conclusion = match records.iter().find(|r| r.criterion) {
        Some(rec) => ScanConclusion::CliqueNumberIsSqrtQ { witness_h: rec.h },
        None => ScanConclusion::SubfieldMaximal,
    };
    Ok(PeisertScanReport {
        field: field.descriptor(),
        q,
        r,
        kernel_size: kernel.len(),
        b_selection: sets.selected,
        records,
        disagreements,
        conclusion,
        subfield_is_maximal: is_maximal(graph.graph(), &indices(&sub)),
    })
}

fn sorted_intersection<'a>(a: &'a [FieldElement], b: &'a [FieldElement]) -> impl Iterator<Item = FieldElement> + 'a {
    let (mut i, mut j) = (0, 0);
    std::iter::from_fn(move || {
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                    return Some(a[i - 1]);
                }
            }
        }
        None
    })
}

/// Maximum cliques of size sqrt(q) through 0 and 1, when enumeration fits
/// under `cap` candidates.
pub fn max_cliques_through_zero_one(graph: &CayleyGraph, cap: usize) -> Result<Vec<Vec<usize>>> {
    enumerate_max_cliques_through(graph.graph(), &[0, 1], sqrt_q(graph.field()) as usize, cap)
}
