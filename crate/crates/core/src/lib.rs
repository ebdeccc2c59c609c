//! Exact computations with the Burau representation of the 3-strand braid
//! group and q-deformed rationals.

pub mod braidmat;
pub mod cfrac;
pub mod error;
pub mod exactpoly;
pub mod faithful;
pub mod par;
pub mod qrat;
pub mod rootloc;
pub mod stabilize;

pub use braidmat::{BraidLetter, BraidWord, Convention, ModLetter, QMatrix2};
pub use cfrac::{EvenCF, Fraction};
pub use error::{Error, Result};
pub use exactpoly::{ComplexPoint, LaurentPoly};
pub use faithful::{Decomposition, SpecPoint, Verdict};
pub use par::Exec;
pub use qrat::QRational;
pub use stabilize::{PeriodicCF, PowerSeries, StabilizedSeries};
pub mod selftest;
