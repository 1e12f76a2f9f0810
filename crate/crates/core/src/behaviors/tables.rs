//! Rule tables for the three behaviors.
//!
//! Rows are stored in table order. `None` marks a don't-care antecedent.
//!
//! Normalized entries (transcribed token → stored token):
//! - obstacle avoidance row 4, u: `N` → `S` (`N` is not a speed term; the
//!   slowest speed is the reading consistent with a near-obstacle turn)
//! - obstacle avoidance row 5, ω: `LN0` → `LNo`
//! - obstacle avoidance rows 7 and 27, ω: `Lpo` → `LPo`
//! - obstacle avoidance row 16, ω: `Lno` → `LNo`
//! - local minimum row 7, ω: `LN _o` → `LNo`
//!
//! Obstacle avoidance rows 1/5 and 4/9 share antecedents with different
//! consequents. They are kept as transcribed; max–min aggregation handles them.

/// `(d_l, d_f, d_r, alpha) → (u, omega)`
pub(crate) const OBSTACLE_AVOIDANCE: [([&str; 3], Option<&str>, [&str; 2]); 28] = [
    (["N", "N", "F"], None, ["S", "Po"]),
    (["F", "N", "N"], None, ["M", "Po"]),
    (["M", "N", "N"], None, ["M", "Po"]),
    (["F", "N", "M"], None, ["S", "LPo"]),
    (["N", "N", "F"], None, ["M", "LNo"]),
    (["N", "N", "M"], None, ["M", "No"]),
    (["F", "N", "F"], None, ["M", "LPo"]),
    (["M", "N", "F"], None, ["M", "No"]),
    (["F", "N", "M"], None, ["M", "Po"]),
    (["N", "M", "N"], None, ["M", "Po"]),
    (["N", "N", "N"], None, ["S", "Po"]),
    (["M", "N", "M"], None, ["S", "Po"]),
    (["N", "M", "M"], None, ["M", "No"]),
    (["N", "M", "F"], None, ["M", "No"]),
    (["N", "F", "M"], None, ["M", "No"]),
    (["N", "F", "F"], Some("LN"), ["S", "LNo"]),
    (["N", "F", "F"], Some("N"), ["S", "No"]),
    (["N", "F", "F"], Some("Z"), ["L", "Zo"]),
    (["N", "N", "N"], Some("LP"), ["L", "Zo"]),
    (["N", "F", "F"], Some("P"), ["L", "Zo"]),
    (["M", "M", "N"], None, ["M", "Po"]),
    (["F", "M", "N"], None, ["M", "Po"]),
    (["M", "F", "N"], None, ["M", "Po"]),
    (["F", "F", "N"], Some("LN"), ["L", "Zo"]),
    (["F", "F", "N"], Some("N"), ["L", "Zo"]),
    (["F", "F", "N"], Some("Z"), ["L", "Zo"]),
    (["F", "F", "N"], Some("LP"), ["S", "LPo"]),
    (["F", "F", "N"], Some("P"), ["S", "LPo"]),
];

/// `(rho, alpha) → (u, omega)`
pub(crate) const GOAL_REACHING: [([&str; 2], [&str; 2]); 15] = [
    (["N", "Z"], ["S", "Zo"]),
    (["N", "N"], ["S", "No"]),
    (["N", "LN"], ["S", "LNo"]),
    (["N", "P"], ["S", "Po"]),
    (["N", "LP"], ["S", "LPo"]),
    (["M", "Z"], ["M", "Zo"]),
    (["M", "N"], ["M", "No"]),
    (["M", "LN"], ["M", "LNo"]),
    (["M", "P"], ["M", "Po"]),
    (["M", "LP"], ["M", "LPo"]),
    (["F", "Z"], ["L", "Zo"]),
    (["F", "N"], ["L", "No"]),
    (["F", "LN"], ["L", "LNo"]),
    (["F", "P"], ["L", "Po"]),
    (["F", "LP"], ["L", "LPo"]),
];

/// `(d_l, d_f, d_r, e_d, alpha) → (u, omega)`
pub(crate) const LOCAL_MINIMUM: [([&str; 3], Option<&str>, &str, [&str; 2]); 7] = [
    (["N", "N", "N"], None, "Z", ["S", "Po"]),
    (["F", "N", "N"], None, "P", ["M", "Po"]),
    (["F", "N", "N"], None, "LP", ["S", "LPo"]),
    (["F", "F", "N"], Some("PT"), "P", ["M", "Zo"]),
    (["F", "F", "N"], Some("PT"), "LP", ["M", "Zo"]),
    (["F", "F", "F"], Some("PT"), "P", ["M", "Zo"]),
    (["F", "F", "F"], Some("PT"), "LP", ["M", "LNo"]),
];
