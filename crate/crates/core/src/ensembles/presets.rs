//! Mother ensembles and puncturing distributions of the two reference
//! scenarios (equal powers `p = (1, 1)` and unequal powers `p = (1.5, 0.5)`).
//!
//! Degrees are node degrees, i.e. the coefficient of `x^(i-1)` is stored
//! under key `i`.

use super::{Ensemble, PuncturingDistribution};

/// Mother ensemble for both users with equal transmit powers (rate 1/3).
pub fn equal_power_mother() -> Ensemble {
    Ensemble::from_pairs(
        &[
            (2, 0.1993),
            (3, 0.2796),
            (9, 0.0096),
            (11, 0.1814),
            (16, 0.0113),
            (100, 0.3188),
        ],
        &[(7, 1.0)],
    )
    .expect("valid preset")
}

/// Optimised puncturing for the equal-power mother ensemble (`R_p = 0.25`).
pub fn equal_power_puncturing() -> PuncturingDistribution {
    PuncturingDistribution::from_pairs(&[(2, 0.283), (3, 0.2723)]).expect("valid preset")
}

/// User-1 mother ensemble for unequal powers (declared rate 0.4451).
pub fn unequal_power_mother_user1() -> Ensemble {
    Ensemble::from_pairs(
        &[
            (2, 0.1559),
            (3, 0.2974),
            (8, 0.0394),
            (9, 0.1305),
            (100, 0.3768),
        ],
        &[(9, 1.0)],
    )
    .expect("valid preset")
}

/// User-2 mother ensemble for unequal powers (declared rate 0.2215).
pub fn unequal_power_mother_user2() -> Ensemble {
    Ensemble::from_pairs(
        &[
            (2, 0.1657),
            (3, 0.2298),
            (7, 0.0907),
            (8, 0.0521),
            (100, 0.4617),
        ],
        &[(7, 1.0)],
    )
    .expect("valid preset")
}

/// Optimised user-1 puncturing for unequal powers (`R_p = 0.308`).
pub fn unequal_power_puncturing_user1() -> PuncturingDistribution {
    PuncturingDistribution::from_pairs(&[(2, 0.3431), (3, 0.3029), (9, 0.2391), (100, 0.3865)])
        .expect("valid preset")
}

/// Optimised user-2 puncturing for unequal powers (`R_p = 0.1814`).
pub fn unequal_power_puncturing_user2() -> PuncturingDistribution {
    PuncturingDistribution::from_pairs(&[(2, 0.2828), (3, 0.1239), (100, 0.0774)])
        .expect("valid preset")
}

/// Decoding threshold used to design the equal-power puncturing.
pub const EQUAL_POWER_DESIGN_SIGMA: f64 = 0.9151;

/// Decoding threshold used to design the unequal-power puncturing.
pub const UNEQUAL_POWER_DESIGN_SIGMA: f64 = 0.8998;
