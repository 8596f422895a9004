//! The thirteen class-number-one imaginary quadratic discriminants, their
//! singular moduli, and the valuation slopes n_p used in the CM congruence
//! bounds, including the exceptional slopes at small ramified primes.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SingularRecord {
    pub disc: i64,
    /// The singular modulus j(O_D), an integer because h(D) = 1.
    pub j: i64,
    pub class_number: u32,
}

const REGISTRY: [SingularRecord; 13] = [
    SingularRecord {
        disc: -3,
        j: 0,
        class_number: 1,
    },
    SingularRecord {
        disc: -4,
        j: 1728,
        class_number: 1,
    },
    SingularRecord {
        disc: -7,
        j: -3375,
        class_number: 1,
    },
    SingularRecord {
        disc: -8,
        j: 8000,
        class_number: 1,
    },
    SingularRecord {
        disc: -11,
        j: -32768,
        class_number: 1,
    },
    SingularRecord {
        disc: -12,
        j: 54000,
        class_number: 1,
    },
    SingularRecord {
        disc: -16,
        j: 287496,
        class_number: 1,
    },
    SingularRecord {
        disc: -19,
        j: -884736,
        class_number: 1,
    },
    SingularRecord {
        disc: -27,
        j: -12288000,
        class_number: 1,
    },
    SingularRecord {
        disc: -28,
        j: 16581375,
        class_number: 1,
    },
    SingularRecord {
        disc: -43,
        j: -884736000,
        class_number: 1,
    },
    SingularRecord {
        disc: -67,
        j: -147197952000,
        class_number: 1,
    },
    SingularRecord {
        disc: -163,
        j: -262537412640768000,
        class_number: 1,
    },
];

pub fn singular_registry() -> &'static [SingularRecord] {
    &REGISTRY
}

pub fn lookup_discriminant(d: i64) -> Result<&'static SingularRecord> {
    REGISTRY
        .iter()
        .find(|r| r.disc == d)
        .ok_or(Error::UnknownDiscriminant(d))
}

impl SingularRecord {
    /// The valuation slope n_p as an exact fraction (num, den), possibly
    /// depending on the congruence class of the level. Exceptional slopes at
    /// ramified primes override the generic j-divisibility defaults.
    pub fn slope(&self, p: u64, level: u64) -> (i64, i64) {
        match (self.disc, p) {
            (-3, 3) | (-12, 3) => {
                if level % 3 == 1 {
                    (9, 2)
                } else {
                    (3, 1)
                }
            }
            (-27, 3) => {
                // level is coprime to 3 here; classes +-1 and +-2 mod 6
                if level % 6 == 1 || level % 6 == 5 {
                    (4, 3)
                } else {
                    (1, 2)
                }
            }
            (-4, 2) => {
                if level % 4 == 1 {
                    (10, 1)
                } else {
                    (9, 1)
                }
            }
            (-16, 2) => {
                if level % 4 == 1 {
                    (5, 1)
                } else {
                    (9, 2)
                }
            }
            (-12, 2) | (-8, 2) => (19, 2),
            (-7, 7) | (-28, 7) => (1, 1),
            (-11, 11) | (-19, 19) | (-43, 43) | (-67, 67) | (-163, 163) => (1, 1),
            _ => self.generic_slope(p),
        }
    }

    fn generic_slope(&self, p: u64) -> (i64, i64) {
        let p_div_j = self.j.rem_euclid(p as i64) == 0;
        if p_div_j {
            match p {
                2 => (15, 1),
                3 => (6, 1),
                _ => (3, 1),
            }
        } else if p >= 5 && (self.j - 1728).rem_euclid(p as i64) == 0 {
            (2, 1)
        } else {
            (1, 1)
        }
    }
}
