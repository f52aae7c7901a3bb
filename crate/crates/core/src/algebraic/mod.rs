//! Algebraic numbers: interval enclosures, certified root isolation, exact
//! real and complex algebraic arithmetic, and resultant-based constructions.

pub mod field;
pub mod interval;
pub mod modulus;
pub mod real;
pub mod resultant;
pub mod roots;

pub use field::{field_arith, field_inverse, ComplexAlgebraic, FieldElement, FieldError, FieldOp, Inverse};
pub use interval::{CBox, Interval};
pub use modulus::{modulus_classes, modulus_classes_of, ratio_root_of_unity, ModulusClass, UnityRatios};
pub use real::RealAlgebraic;
pub use roots::{RootLocation, RootSet};
