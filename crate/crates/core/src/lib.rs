//! Minimalist Grammars (MG) and Minimalist Categorial Grammars (MCG).
//!
//! * [`tree`]: minimalist trees, one-hole contexts and the dominance,
//!   precedence and projection relations (head, maximal projection,
//!   specifier, complement).
//! * [`feature`] and [`mg`]: feature sequences, merge/move and bounded
//!   derivation search over trees.
//! * [`label`] and [`mcg`]: string-triplet labels and labelled proofs in the
//!   elimination fragment of the mixed calculus.
//! * [`equivalence`]: translation of MG lexicons into MCG lexicons and an
//!   empirical comparison of the two generated languages.

pub mod equivalence;
pub mod feature;
pub mod label;
pub mod mcg;
pub mod mg;
pub mod tree;

pub use feature::{Feature, FeatureKind, FeatureSequence, Strength};
pub use label::{Label, LabelSubstitution, Token, Var};
pub use mcg::{Formula, MCGrammar, McgItem, ProofNode, Sequent};
pub use mg::{LexicalItem, MGrammar, MgOptions};
pub use tree::{MinimalistTree, TreeContext};
