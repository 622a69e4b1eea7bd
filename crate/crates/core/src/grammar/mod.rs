//! Context-free and left-regular grammars.

mod cfg;
mod cnf;
mod regular;

pub use cfg::{cfg_enumerate, enumerate, ContextFreeGrammar, GSym, Partition, Production};
pub use cnf::{cfg_member, to_cnf, Cyk};
pub(crate) use regular::right_only;
pub use regular::{partition_for_hash, validate_left_regular, LeftRegularGrammar, PartitionedRegularGrammar, RegularClass};

use rustc_hash::FxHashSet;

use crate::symbol::Symbol;

/// `base`, or `base` with the smallest numeric suffix not in `used`.
pub(crate) fn fresh_name(base: &str, used: &mut FxHashSet<Symbol>) -> Symbol {
    let mut name = Symbol::new(base);
    let mut i = 1;
    while used.contains(&name) {
        name = Symbol::new(&format!("{base}{i}"));
        i += 1;
    }
    used.insert(name);
    name
}
