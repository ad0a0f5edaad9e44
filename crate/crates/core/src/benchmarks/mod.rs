//! Benchmark rule systems, synthetic classifier outputs and evaluation.

pub mod addition;
pub mod dataset;
pub mod evaluate;
pub mod sudoku;
pub mod synthetic;

pub use addition::{addition_targets, gen_addition_rules, operand_digits, AdditionSpec};
pub use dataset::{load_dataset, synthetic_dataset, write_dataset, Manifest, Problem, ProblemKind};
pub use evaluate::{evaluate, evaluate_possibilistic, AccuracyReport, ProbSample};
pub use sudoku::{gen_sudoku_rules, sudoku_valid, SudokuSpec};
pub use synthetic::{gen_synthetic_distributions, SyntheticNoiseModel};
