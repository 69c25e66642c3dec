//! Grammars, Parikh images, bounded languages and their counting functions.

mod bounded;
mod cross;
mod grammar;
mod morphism;
mod parikh;

pub use bounded::{
    decide_parikh_slender, diophantine_systems, index_set, inverse_morphism_intersect, parikh_counting_function,
    words_up_to, BlockSystem, BoundedLanguage, CountingFunction, Summand, DEFAULT_CHECK_LENGTH,
};
pub use cross::{cross_section, CrossSection};
pub use grammar::{Grammar, GrammarFile, Rule, Symbol};
pub use morphism::{block_letter, parikh_vector, Morphism};
pub use parikh::parikh_image;
