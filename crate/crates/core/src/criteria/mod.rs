//! Decision procedures on abelian-group descriptors and finite groups.

mod decide;
mod descriptor;

pub use decide::{
    decide_finite_pair, decide_pair, decide_sets, descriptor_exponent, descriptor_of, primary_component, profile,
    schreier_rank, shmelkin_necessary, Decision, DecisionCase, FiniteGroupProfile, PrimeCheck, ShmelkinReport,
};
pub use descriptor::{
    parse_descriptor, parse_set, AbelianDescriptor, Exponent, InfiniteReason, Multiplicity, SetDescriptor, Summand,
};
