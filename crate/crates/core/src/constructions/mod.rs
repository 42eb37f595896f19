//! Explicit constructions of latin squares with disjoint subsquares.

mod circulant;
mod even_r;
mod general;
mod lemma_arrays;
mod small;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::latin::{LatinSquare, SubsquareSpec};

pub use circulant::{circulant_partial, Circulant};
pub use even_r::realization_even_r;
pub use general::{
    construct_case_a, construct_general, construct_general_with, construct_main, BuildOptions,
};
pub use lemma_arrays::{
    five_row_array, lemma_outline_arrays, unit_block_square, LemmaVariant, FIVE_ROW_SOURCES,
};
pub use small::{
    construct_ils_k2, construct_ils_k3, construct_ils_uniform, k3_condition, K3Branch,
};

/// Which case of which construction produced a square, with its parameters
/// and the constructions it called.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConstructionTrace {
    pub case: String,
    pub parts: Vec<usize>,
    pub order: usize,
    pub params: BTreeMap<String, i64>,
    pub children: Vec<ConstructionTrace>,
}

impl ConstructionTrace {
    pub(crate) fn new(case: &str, parts: &[usize], order: usize) -> Self {
        ConstructionTrace {
            case: case.to_string(),
            parts: parts.to_vec(),
            order,
            params: BTreeMap::new(),
            children: Vec::new(),
        }
    }

    pub(crate) fn param(mut self, name: &str, value: impl TryInto<i64>) -> Self {
        let v = value.try_into().unwrap_or(i64::MAX);
        self.params.insert(name.to_string(), v);
        self
    }

    pub(crate) fn child(mut self, c: ConstructionTrace) -> Self {
        self.children.push(c);
        self
    }

    /// Number of trace nodes, this one included.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ConstructionTrace::size).sum::<usize>()
    }
}

/// A verified square with its requested subsquares in normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub square: LatinSquare,
    pub parts: Vec<usize>,
    pub subsquares: Vec<SubsquareSpec>,
    pub trace: ConstructionTrace,
}

impl Construction {
    /// Verifies `square` against `parts` and packages it.
    pub(crate) fn verified(
        square: LatinSquare,
        parts: &[usize],
        trace: ConstructionTrace,
    ) -> crate::Result<Self> {
        square.verify_ils(parts)?;
        let subsquares = square.subsquare_specs(parts);
        Ok(Construction {
            square,
            parts: parts.to_vec(),
            subsquares,
            trace,
        })
    }
}
