//! Balanced-player cooperation probabilities for symmetric and asymmetric
//! two-player games, three- and n-player Prisoner's Dilemmas, and a few
//! multi-option games built from pairwise tables.
//!
//! ```
//! use balanced_coop::{balanced_p, PayoffTable2};
//!
//! let t = PayoffTable2::new(101.0, 100.0, 1.0, 0.0).unwrap();
//! assert!((balanced_p(&t).unwrap().p - 0.99).abs() < 1e-12);
//! ```

pub mod apps;
pub mod balance;
pub mod class;
pub mod error;
pub mod estimate;
pub mod estimator2;
pub mod nplayer;
pub mod oracle;
pub mod policy;
pub mod poly;
pub mod table;

pub use class::{classify2, classify3, classify_n, ClassTag, GameClass, Tie};
pub use error::{Error, Result};
pub use estimate::{Estimate, Method};
pub use estimator2::{
    balanced_p, balanced_p_with, best_response, best_response_threshold, equiprobability,
    expected_payoff2, maximin_alternative, maximin_p, payoff_max_p, pd_root_branches, phi_chi,
    BestResponse, EquiprobabilityReport, Leaning, MaximinOutcome, PhiChi,
};
pub use nplayer::{
    balanced_p3, balanced_p3_with, balanced_p_asym, balanced_p_asym_with, balanced_pn,
    balanced_pn_checked, balanced_pn_with, equiprobability3, expected_payoff3, psi_omega_polys,
    AsymQuadratic, CubicCoefficients,
};
pub use policy::NumericPolicy;
pub use table::{AsymmetricTable2, PayoffTable2, PayoffTable3, PayoffTableN};
