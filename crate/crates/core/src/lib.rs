//! Rational tangles, four-plat closures, and the tangle equations of Flp
//! site-specific recombination systems.

mod arith;
pub mod fourplat;
pub mod fraction;
pub mod tangle;

pub use fourplat::{
    closure_of_sum, denominator_closure, equivalent, lens_space_of, numerator_closure,
    wrap_number, ClosureError, EquivalenceMode, FourPlat, FourPlatError, LensSpace, WrapNumber,
};
pub use fraction::{fractions_up_to, Fraction, FractionError};
pub use tangle::{
    add_horizontal, add_vertical, classify, decompose_vertical_horizontal, fraction_of, mirror,
    twist_vector_of, SignConvention, Tangle, TangleClass, TangleError, TwistVector,
};

pub mod exec;
pub mod search;
pub mod system;

pub use exec::Execution;
pub use search::{Search, SearchBounds, SearchError};
pub use system::{
    check_system, gauge_normalize, gauge_transform, target_product, CheckReport, Equation,
    GaugeMove, RowCheck, SystemCase, SystemError, TangleSystem,
};

pub mod classifier;
pub mod table1;

pub use classifier::{
    check_secsol, check_thirdsol, classify_solution, count_profile, ClassifyError, Profile,
    SolutionClass,
};
pub use table1::{table1_verdict, Assignment, ClassTriple, Label, Outcome, Verdict};

pub mod oracle;
