//! The fourteen primitive holomorphic eta quotients of weight 1/2
//! (Zagier's list), hard-coded in the classical order.
//!
//! Levels run over 1, 2, 2, 4, 4, 4, 6, 6, 6, 6, 12, 12, 12, 12; every
//! member has sigma = 1. Indices are 1-based everywhere they surface.

use std::sync::OnceLock;

use super::ExponentVector;

/// Number of list members.
pub const ZAGIER_COUNT: usize = 14;

const MEMBER_EXPONENTS: [&[(u64, i64)]; ZAGIER_COUNT] = [
    &[(1, 1)],
    &[(1, 2), (2, -1)],
    &[(1, -1), (2, 2)],
    &[(1, -1), (2, 3), (4, -1)],
    &[(1, -2), (2, 5), (4, -2)],
    &[(1, 1), (2, -1), (4, 1)],
    &[(1, 1), (2, -1), (3, -1), (6, 2)],
    &[(1, 2), (2, -1), (3, -1), (6, 1)],
    &[(1, -1), (2, 2), (3, 1), (6, -1)],
    &[(1, -1), (2, 1), (3, 2), (6, -1)],
    &[(1, -1), (2, 2), (3, 1), (4, -1), (6, -1), (12, 1)],
    &[(1, -2), (2, 5), (3, 1), (4, -2), (6, -2), (12, 1)],
    &[(1, 1), (2, -1), (3, -1), (4, 1), (6, 2), (12, -1)],
    &[(1, 1), (2, -2), (3, -2), (4, 1), (6, 5), (12, -2)],
];

const MEMBER_NAMES: [&str; ZAGIER_COUNT] = [
    "e1",
    "e1^2/e2",
    "e2^2/e1",
    "e2^3/(e1 e4)",
    "e2^5/(e1^2 e4^2)",
    "e1 e4/e2",
    "e1 e6^2/(e2 e3)",
    "e1^2 e6/(e2 e3)",
    "e2^2 e3/(e1 e6)",
    "e2 e3^2/(e1 e6)",
    "e2^2 e3 e12/(e1 e4 e6)",
    "e2^5 e3 e12/(e1^2 e4^2 e6^2)",
    "e1 e4 e6^2/(e2 e3 e12)",
    "e1 e4 e6^5/(e2^2 e3^2 e12^2)",
];

/// The fourteen members, index 0 holding member 1.
pub fn zagier_members() -> &'static [ExponentVector; ZAGIER_COUNT] {
    static MEMBERS: OnceLock<[ExponentVector; ZAGIER_COUNT]> = OnceLock::new();
    MEMBERS.get_or_init(|| {
        MEMBER_EXPONENTS.map(|pairs| {
            ExponentVector::from_pairs(pairs.iter().copied()).expect("valid member table")
        })
    })
}

/// Human-readable name of member `index` (1-based).
pub fn zagier_member_name(index: usize) -> &'static str {
    MEMBER_NAMES[index - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn members_are_primitive_weight_half() {
        for (i, m) in zagier_members().iter().enumerate() {
            assert_eq!(m.weight2(), 1, "member {} must have sigma = 1", i + 1);
            assert!(m.is_primitive().unwrap(), "member {} must be primitive", i + 1);
        }
    }

    #[test]
    fn member_levels() {
        let expected = [1u64, 2, 2, 4, 4, 4, 6, 6, 6, 6, 12, 12, 12, 12];
        for (m, &lvl) in zagier_members().iter().zip(&expected) {
            assert_eq!(m.level(), lvl);
        }
    }

    #[test]
    fn members_are_pairwise_distinct() {
        let members = zagier_members();
        for i in 0..ZAGIER_COUNT {
            for j in i + 1..ZAGIER_COUNT {
                assert_ne!(members[i], members[j]);
            }
        }
    }
}
