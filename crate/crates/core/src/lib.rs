//! Constant-delay enumeration of the ideals and antichains of a finite
//! poset, in an order where consecutive sets differ in at most three
//! elements.
//!
//! The enumerators recurse on a longest chain of the current subposet.
//! Every unit of work is charged to a tick counter, which makes the cost of
//! each recursion node observable: [`audit`] checks the potential-function
//! inequalities against those counts and [`stepper`] turns the amortized
//! bound into a worst-case one with a bounded queue.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod antichains;
pub mod audit;
pub mod chain;
pub mod generate;
pub mod ideals;
pub mod measure;
pub mod oracle;
pub mod poset;
pub mod runtime;
pub mod stepper;

pub use generate::Family;
pub use poset::{Poset, PosetError, PosetStats};
pub use runtime::{Delta, Sink};

/// Which family of subsets to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Ideals,
    Antichains,
}

/// Recursion order. `Gray` keeps consecutive sets within distance three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Basic,
    Gray,
}
