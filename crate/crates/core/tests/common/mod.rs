//! Shared fixtures for the integration tests.

#![allow(dead_code)]

/// Stacked syndrome former of the q=5 proper array code, circulant-of-blocks unwrapping.
pub const FIG_A: &str = "\
    1 1 1 1 1\n\
    1 0 0 0 0\n\
    1 0 0 0 0\n\
    0 0 0 0 0\n\
    0 0 0 0 1\n\
    0 0 1 0 0\n\
    0 0 0 0 0\n\
    0 0 0 1 0\n\
    0 0 0 0 1\n\
    0 0 0 0 0\n\
    0 0 1 0 0\n\
    0 1 0 0 0\n\
    0 0 0 0 0\n\
    0 1 0 0 0\n\
    0 0 0 1 0\n";

/// Same code, polynomial (Tanner-style) unwrapping.
pub const FIG_B: &str = "\
    0 0 1 0 0\n\
    0 0 0 0 1\n\
    0 0 0 0 0\n\
    0 0 0 0 1\n\
    0 0 0 1 0\n\
    0 0 0 0 0\n\
    0 1 0 0 0\n\
    0 0 1 0 0\n\
    0 0 0 0 0\n\
    0 0 0 1 0\n\
    0 1 0 0 0\n\
    0 0 0 0 0\n\
    1 0 0 0 0\n\
    1 0 0 0 0\n\
    1 1 1 1 1\n";

/// Stacked syndrome former of the q=7 shortened array code, circulant-of-blocks unwrapping.
pub const FIG_C: &str = "\
    1 1 1 1 1\n\
    1 0 0 0 0\n\
    1 0 0 0 0\n\
    0 0 0 0 0\n\
    0 0 0 0 0\n\
    0 0 0 1 0\n\
    0 0 0 0 0\n\
    0 0 0 0 0\n\
    0 0 0 0 0\n\
    0 0 0 0 0\n\
    0 0 0 0 1\n\
    0 0 1 0 0\n\
    0 0 0 0 0\n\
    0 0 0 1 0\n\
    0 0 0 0 0\n\
    0 0 0 0 0\n\
    0 0 1 0 0\n\
    0 1 0 0 0\n\
    0 0 0 0 0\n\
    0 1 0 0 0\n\
    0 0 0 0 1\n";

/// Same code, polynomial (Tanner-style) unwrapping.
pub const FIG_D: &str = "\
    0 0 0 1 0\n\
    0 0 0 0 0\n\
    0 0 0 0 0\n\
    0 0 0 0 0\n\
    0 0 0 0 0\n\
    0 0 0 0 0\n\
    0 0 1 0 0\n\
    0 0 0 0 1\n\
    0 0 0 0 0\n\
    0 0 0 0 0\n\
    0 0 0 1 0\n\
    0 0 0 0 0\n\
    0 1 0 0 0\n\
    0 0 1 0 0\n\
    0 0 0 0 0\n\
    0 0 0 0 1\n\
    0 1 0 0 0\n\
    0 0 0 0 0\n\
    1 0 0 0 0\n\
    1 0 0 0 0\n\
    1 1 1 1 1\n";
