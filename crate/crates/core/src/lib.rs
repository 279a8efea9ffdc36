//! Computations in the groups `G_n = <a_1, ..., a_n>` of automorphisms of the
//! rooted `n`-ary tree, where `a_i = (1, ..., 1, a_i, 1, ..., 1) sigma_i` and
//! `sigma_i` cycles every letter except `i`.
//!
//! Permutations act on the right: `p.then(q)` applies `p` first. Conjugation
//! is `g^h = h^-1 g h` and commutators are `[g, h] = g^-1 h^-1 g h`.

pub mod abelian;
pub mod error;
pub mod par;
pub mod parse;
pub mod perm;
pub mod permgroup;
pub mod quotients;
pub mod random;
pub mod sweep;
pub mod treeword;
pub mod verify;
pub mod word;
pub mod wordproblem;

pub use error::{Error, Result};
pub use par::Exec;
pub use parse::{parse_vertex, parse_word};
pub use perm::{compose, omega, sigma, Permutation};
pub use treeword::{act, decompose, leaf_action, portrait, state_at, Vertex, WreathDecomposition};
pub use word::GeneratorWord;
pub use wordproblem::{are_equal, element_order, is_identity};
