//! Group words, their evaluation, and deciding laws in concrete groups.

mod check;
mod eval;
mod word;

pub use check::{
    check_law, check_law_with, discriminate, recognize, second_derived_central, separate_by_law, separate_by_law_with,
    LawOptions, LawVerdict, Method, SeparationCertificate, Shortcut, RANDOM_PREPASS,
};
pub use eval::evaluate;
pub use word::{parse_word, Word};

/// `[[x1,x2],[x3,x4],x5]`.
pub fn centre_by_metabelian_law() -> Word {
    parse_word("[[x1,x2],[x3,x4],x5]").expect("well-formed")
}
