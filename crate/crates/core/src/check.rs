//! A single verified instance of an identity or inequality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// One evaluated identity or inequality.
///
/// Orientation is normalized so that `slack >= -tol` is the pass condition:
/// for `lhs <= rhs` the slack is `rhs - lhs`, for `lhs >= rhs` it is
/// `lhs - rhs`, and for an identity it is `-|lhs - rhs|`. Exact checks carry
/// `tol = 0` and decide `pass` in rational arithmetic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IneqCheck {
    pub name: String,
    #[serde(rename = "paper_eq")]
    pub identity: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
    pub tol: f64,
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    Le,
    Ge,
    Eq,
}

impl IneqCheck {
    fn float(name: &str, identity: &str, lhs: f64, rhs: f64, rel: f64, rel_kind: Relation) -> Self {
        let tol = crate::tol::scaled(rel, lhs, rhs);
        let slack = match rel_kind {
            Relation::Le => rhs - lhs,
            Relation::Ge => lhs - rhs,
            Relation::Eq => -(lhs - rhs).abs(),
        };
        IneqCheck {
            name: name.to_string(),
            identity: identity.to_string(),
            lhs,
            rhs,
            slack,
            pass: slack.is_finite() && slack >= -tol,
            tol,
            exact: false,
        }
    }

    fn rational(name: &str, identity: &str, lhs: BigRational, rhs: BigRational, rel_kind: Relation) -> Self {
        let diff = match rel_kind {
            Relation::Le => &rhs - &lhs,
            Relation::Ge => &lhs - &rhs,
            Relation::Eq => -(&lhs - &rhs).abs(),
        };
        IneqCheck {
            name: name.to_string(),
            identity: identity.to_string(),
            lhs: ratio_f64(&lhs),
            rhs: ratio_f64(&rhs),
            slack: ratio_f64(&diff),
            pass: !diff.is_negative(),
            tol: 0.0,
            exact: true,
        }
    }

    /// `lhs <= rhs` within a relative tolerance.
    pub fn le(name: &str, identity: &str, lhs: f64, rhs: f64, rel: f64) -> Self {
        Self::float(name, identity, lhs, rhs, rel, Relation::Le)
    }

    /// `lhs >= rhs` within a relative tolerance.
    pub fn ge(name: &str, identity: &str, lhs: f64, rhs: f64, rel: f64) -> Self {
        Self::float(name, identity, lhs, rhs, rel, Relation::Ge)
    }

    /// `lhs == rhs` within a relative tolerance.
    pub fn eq(name: &str, identity: &str, lhs: f64, rhs: f64, rel: f64) -> Self {
        Self::float(name, identity, lhs, rhs, rel, Relation::Eq)
    }

    pub fn le_exact(name: &str, identity: &str, lhs: BigRational, rhs: BigRational) -> Self {
        Self::rational(name, identity, lhs, rhs, Relation::Le)
    }

    pub fn ge_exact(name: &str, identity: &str, lhs: BigRational, rhs: BigRational) -> Self {
        Self::rational(name, identity, lhs, rhs, Relation::Ge)
    }

    pub fn eq_exact(name: &str, identity: &str, lhs: BigRational, rhs: BigRational) -> Self {
        Self::rational(name, identity, lhs, rhs, Relation::Eq)
    }

    pub fn le_int(name: &str, identity: &str, lhs: i128, rhs: i128) -> Self {
        Self::le_exact(name, identity, int(lhs), int(rhs))
    }

    pub fn ge_int(name: &str, identity: &str, lhs: i128, rhs: i128) -> Self {
        Self::ge_exact(name, identity, int(lhs), int(rhs))
    }

    pub fn eq_int(name: &str, identity: &str, lhs: i128, rhs: i128) -> Self {
        Self::eq_exact(name, identity, int(lhs), int(rhs))
    }

    /// Conjunction of several checks: fails if any fails, reports the worst.
    pub fn worst_of(name: &str, checks: Vec<IneqCheck>) -> Option<IneqCheck> {
        let mut worst: Option<IneqCheck> = None;
        for c in checks {
            let replace = match &worst {
                None => true,
                Some(w) => (w.pass && !c.pass) || (w.pass == c.pass && c.margin() < w.margin()),
            };
            if replace {
                worst = Some(c);
            }
        }
        worst.map(|mut w| {
            w.name = name.to_string();
            w
        })
    }

    /// Slack measured in units of the tolerance floor; used only to rank.
    pub fn margin(&self) -> f64 {
        if self.exact {
            self.slack
        } else {
            self.slack + self.tol
        }
    }
}

pub fn int(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i128, den: i128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn ratio_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_equality_has_zero_slack() {
        let c = IneqCheck::le_exact("x", "x", ratio(7, 3), ratio(7, 3));
        assert!(c.pass);
        assert_eq!(c.slack, 0.0);
        let c = IneqCheck::le_exact("x", "x", ratio(7, 3), ratio(10, 4));
        assert!(c.pass);
        assert!((c.slack - (2.5 - 7.0 / 3.0)).abs() < 1e-15);
        assert!(!IneqCheck::ge_int("x", "x", 3, 4).pass);
    }

    #[test]
    fn float_orientation() {
        assert!(IneqCheck::le("a", "a", 1.0, 1.0 + 1e-12, 1e-9).pass);
        assert!(IneqCheck::le("a", "a", 1.0 + 1e-12, 1.0, 1e-9).pass);
        assert!(!IneqCheck::le("a", "a", 2.0, 1.0, 1e-9).pass);
        let e = IneqCheck::eq("a", "a", 5.0, 5.5, 1e-9);
        assert!(!e.pass);
        assert_eq!(e.slack, -0.5);
        assert!(!IneqCheck::le("a", "a", f64::NAN, 1.0, 1e-9).pass);
    }

    #[test]
    fn worst_prefers_failures() {
        let a = IneqCheck::le_int("a", "a", 1, 5);
        let b = IneqCheck::le_int("b", "b", 1, 2);
        let c = IneqCheck::le_int("c", "c", 3, 2);
        let w = IneqCheck::worst_of("w", vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(w.slack, 1.0);
        let w = IneqCheck::worst_of("w", vec![a, c, b]).unwrap();
        assert!(!w.pass);
        assert_eq!(w.name, "w");
    }
}
