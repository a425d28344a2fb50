//! Combinatorial games on partially ordered sets.
//!
//! A position is a finite poset; a move names an element and removes it
//! together with everything above it; whoever cannot move loses. This crate
//! computes game values and winning moves, builds and decomposes positions
//! (disjoint and ordinal sums, lexicographic products), verifies
//! order-compressing labellings and searches for them, and stress-tests a
//! product-decomposition conjecture over enumerated or random instances.
//!
//! Positions hold at most 64 elements so that element sets are single
//! machine words.
//!
//! ```
//! use poset_games::{nim, Position, Solver};
//!
//! let piles = nim(&[3, 5]).unwrap();
//! let value = Solver::new().grundy(&Position::full(piles.arc()));
//! assert_eq!(value.0, 3 ^ 5);
//! ```

pub mod canon;
pub mod compression;
pub mod conjecture;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod grundy;
pub mod poset;
pub mod position;

pub use error::{Error, Result};
pub use grundy::{
    analyze, classify, grundy, grundy_naive, mex, mex_k, nim_value, option_value_set,
    ordinal_sum_grundy, winning_moves, AnalysisReport, Nimber, OptionValueSet, Outcome, Solver,
};
pub use poset::{
    antichain, chain, chomp, disjoint_sum, fence, find_fence, generate, grid, lex_index,
    lex_product, nim, ordinal_sum, Fence, FenceStep, Mask, Poset, MAX_ELEMENTS,
};
pub use position::Position;
