//! Completely regular codes: a vertex set whose distance partition is
//! equitable.

use std::collections::HashSet;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::feasibility::{godsil_condition, lloyd_check_quotients, Verdict};
use crate::matrix::IntMatrix;
use crate::partition::{distance_partition, is_equitable};
use crate::scheme::AssociationScheme;
use crate::spectra::{SpectralData, Tolerances};

pub const DEFAULT_BUDGET: usize = 1_000_000;

const CHUNK: usize = 2048;

/// Cheap necessary conditions evaluated on the distance partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefilter {
    pub godsil: Verdict,
    /// Only available when the distance partition is equitable.
    pub lloyd: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeRecord {
    /// Sorted vertex indices.
    pub code: Vec<usize>,
    pub relation: usize,
    pub covering_radius: usize,
    pub cell_sizes: Vec<usize>,
    /// `N_0, …, N_d` of the distance partition, when it is equitable.
    pub quotients: Option<Vec<IntMatrix>>,
    pub completely_regular: bool,
    pub prefilter: Option<Prefilter>,
}

/// Tests whether `code` is completely regular in `(V, R_relation)`.
pub fn is_completely_regular(s: &AssociationScheme, relation: usize, code: &[usize]) -> Result<CodeRecord> {
    let dp = distance_partition(s, relation, code)?;
    let eq = is_equitable(s, &dp.partition)?;
    let mut code = code.to_vec();
    code.sort_unstable();
    code.dedup();
    Ok(CodeRecord {
        code,
        relation,
        covering_radius: dp.covering_radius,
        cell_sizes: dp.partition.cell_sizes(),
        completely_regular: eq.equitable,
        quotients: eq.quotients,
        prefilter: None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOptions {
    pub min_size: usize,
    pub max_size: usize,
    /// Maximum number of candidates evaluated.
    pub budget: usize,
    /// Skip candidates whose sorted multiset of pairwise relations was seen.
    pub dedup_signature: bool,
    pub prefilter: bool,
    pub parallel: bool,
    pub tolerances: Tolerances,
}

impl SearchOptions {
    pub fn sizes(min_size: usize, max_size: usize) -> Self {
        SearchOptions {
            min_size,
            max_size,
            ..Self::default()
        }
    }
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            min_size: 1,
            max_size: 1,
            budget: DEFAULT_BUDGET,
            dedup_signature: false,
            prefilter: false,
            parallel: true,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// One record per evaluated candidate, in lexicographic order.
    pub records: Vec<CodeRecord>,
    /// True when every candidate in the size range was considered.
    pub exhaustive: bool,
    pub candidates_examined: usize,
    pub skipped_duplicates: usize,
}

impl SearchOutcome {
    pub fn completely_regular(&self) -> impl Iterator<Item = &CodeRecord> {
        self.records.iter().filter(|r| r.completely_regular)
    }
}

fn signature(s: &AssociationScheme, code: &[usize]) -> Vec<usize> {
    let mut sig: Vec<usize> = code
        .iter()
        .tuple_combinations()
        .map(|(&x, &y)| s.relation_of(x, y))
        .collect();
    sig.sort_unstable();
    sig
}

fn evaluate(
    s: &AssociationScheme,
    relation: usize,
    code: &[usize],
    spec: Option<&SpectralData>,
) -> Result<CodeRecord> {
    let mut record = is_completely_regular(s, relation, code)?;
    if let Some(spec) = spec {
        let dp = distance_partition(s, relation, code)?;
        let godsil = godsil_condition(s, spec, &dp.partition)?.overall;
        let lloyd = record
            .quotients
            .as_deref()
            .map(|q| lloyd_check_quotients(s, q).map(|l| l.passes))
            .transpose()?;
        record.prefilter = Some(Prefilter { godsil, lloyd });
    }
    Ok(record)
}

/// Enumerates vertex subsets with sizes in `[min_size, max_size]`, smallest
/// first and lexicographically within a size, testing each one directly.
pub fn search_completely_regular(
    s: &AssociationScheme,
    relation: usize,
    options: &SearchOptions,
) -> Result<SearchOutcome> {
    let v = s.vertex_count();
    let (lo, hi) = (options.min_size, options.max_size);
    if lo == 0 || lo > hi || hi > v {
        return Err(Error::InvalidSizeRange { lo, hi, v });
    }
    s.check_relation(relation)?;
    let spec = if options.prefilter {
        Some(SpectralData::compute(s, options.tolerances)?)
    } else {
        None
    };

    let mut seen = HashSet::new();
    let mut skipped_duplicates = 0;
    let mut candidates = (lo..=hi)
        .flat_map(|k| (0..v).combinations(k))
        .filter(|c| {
            if !options.dedup_signature {
                return true;
            }
            let fresh = seen.insert(signature(s, c));
            if !fresh {
                skipped_duplicates += 1;
            }
            fresh
        })
        .peekable();

    let mut records = Vec::new();
    let mut examined = 0;
    while examined < options.budget {
        let take = CHUNK.min(options.budget - examined);
        let chunk: Vec<Vec<usize>> = candidates.by_ref().take(take).collect();
        if chunk.is_empty() {
            break;
        }
        examined += chunk.len();
        let eval = |c: &Vec<usize>| evaluate(s, relation, c, spec.as_ref());
        let evaluated: Vec<CodeRecord> = if options.parallel {
            chunk.par_iter().map(eval).collect::<Result<_>>()?
        } else {
            chunk.iter().map(eval).collect::<Result<_>>()?
        };
        records.extend(evaluated);
    }
    let exhaustive = candidates.peek().is_none();
    Ok(SearchOutcome {
        records,
        exhaustive,
        candidates_examined: examined,
        skipped_duplicates,
    })
}
