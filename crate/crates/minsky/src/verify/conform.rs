//! The good / i-bad / conform taxonomy of evalF configurations.
//!
//! Over the layout counters `x, x', x_1…x_{d+1}, y, b, b', c_0, c_0',
//! c_1…c_d`, a configuration is:
//!
//! - good: `x' = y = b' = c_0' = 0`, `x > 0`, `b = 2^{c_0}`,
//!   `x_1 = 2^{c_0}·x`, and `x_i = 2^{c_{i-1}}·x_{i-1}` for `i = 2…d+1`;
//! - i-bad for `i = 2…d+1`: `x + x' > 0`,
//!   `x_i + y > 2^{c_{i-1}}·(x_{i-1} + y)`, and
//!   `x_j + y = 2^{c_{j-1}}·(x_{j-1} + y)` for `j = i+1…d+1` (an empty range
//!   for `i = d+1` counts as satisfied);
//! - 1-bad: `x' = y = 0`, `x > 0`, `b + b' < 2^{c_0 + c_0'}`,
//!   `x_1 = 2^{c_0+c_0'}·x`, and `x_j = 2^{c_{j-1}}·x_{j-1}` for `j = 2…d+1`.
//!
//! Good and bad configurations are conform; the classes are mutually
//! exclusive, so classification checks good, then `i` from `d+1` downward.
//! A good configuration encodes the pair `(v, n) = ((c_1, …, c_d), c_0)`.

use super::VerifyError;
use crate::fastmath::Nat;
use crate::gadgets::GoodConfigLayout;
use crate::ir::Configuration;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConformClass {
    Good,
    Bad(usize),
    NonConform,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformReport {
    pub class: ConformClass,
    /// The encoded `(v, n)`; present exactly for good configurations.
    pub encoded_pair: Option<(Vec<Nat>, Nat)>,
}

impl ConformReport {
    pub fn is_conform(&self) -> bool {
        !matches!(self.class, ConformClass::NonConform)
    }

    /// Index of badness: 0 for good, i for i-bad, none otherwise.
    pub fn index(&self) -> Option<usize> {
        match self.class {
            ConformClass::Good => Some(0),
            ConformClass::Bad(i) => Some(i),
            ConformClass::NonConform => None,
        }
    }
}

/// Powers of two are computed exactly; exponents beyond this many bits would
/// not come from a desk-scale search.
const MAX_POW_BITS: u64 = 1 << 20;

fn pow2(e: &Nat) -> Result<Nat, VerifyError> {
    let e = u64::try_from(e).map_err(|_| {
        VerifyError::LayoutViolation("exponent does not fit a machine word".into())
    })?;
    if e > MAX_POW_BITS {
        return Err(VerifyError::LayoutViolation(format!(
            "exponent {e} too large to classify"
        )));
    }
    Ok(Nat::one() << e)
}

/// Classifies a configuration over the layout counters.
///
/// Counters outside the layout must be zero; a non-zero stranger is a
/// [`VerifyError::LayoutViolation`].
pub fn classify_conform(
    cfg: &Configuration,
    layout: &GoodConfigLayout,
) -> Result<ConformReport, VerifyError> {
    let allowed = layout.all_counters();
    if !cfg.supported_by(allowed.iter()) {
        return Err(VerifyError::LayoutViolation(format!(
            "configuration {cfg} assigns counters outside the layout"
        )));
    }
    let d = layout.d;
    let v = |c: &crate::ir::CounterId| cfg.get(c);
    let x = v(&layout.x);
    let xp = v(&layout.xp);
    let y = v(&layout.y);
    let b = v(&layout.b);
    let bp = v(&layout.bp);
    let c0 = v(&layout.c0);
    let c0p = v(&layout.c0p);
    let xi = |i: usize| v(layout.x_i(i));
    let ci = |i: usize| v(layout.c_i(i));

    // Trailing equalities x_j + y = 2^{c_{j-1}}(x_{j-1} + y) hold from j =
    // tail_from upward; compute the largest prefix of the chain from the top.
    let chain_eq = |j: usize| -> Result<bool, VerifyError> {
        Ok(&xi(j) + &y == pow2(&ci(j - 1))? * (&xi(j - 1) + &y))
    };

    let good = {
        let mut ok = xp.is_zero() && y.is_zero() && bp.is_zero() && c0p.is_zero() && !x.is_zero();
        ok = ok && b == pow2(&c0)?;
        ok = ok && xi(1) == pow2(&c0)? * &x;
        for i in 2..=d + 1 {
            ok = ok && xi(i) == pow2(&ci(i - 1))? * xi(i - 1);
        }
        ok
    };
    if good {
        let pair = ((1..=d).map(ci).collect::<Vec<_>>(), c0.clone());
        return Ok(ConformReport {
            class: ConformClass::Good,
            encoded_pair: Some(pair),
        });
    }

    if !(&x + &xp).is_zero() {
        let mut tail_ok = true;
        for i in (2..=d + 1).rev() {
            if !tail_ok {
                break;
            }
            let strict = &xi(i) + &y > pow2(&ci(i - 1))? * (&xi(i - 1) + &y);
            if strict {
                return Ok(ConformReport {
                    class: ConformClass::Bad(i),
                    encoded_pair: None,
                });
            }
            tail_ok = chain_eq(i)?;
        }
    }

    let one_bad = {
        let mut ok = xp.is_zero() && y.is_zero() && !x.is_zero();
        let e = pow2(&(&c0 + &c0p))?;
        ok = ok && &b + &bp < e;
        ok = ok && xi(1) == pow2(&(&c0 + &c0p))? * &x;
        for j in 2..=d + 1 {
            ok = ok && xi(j) == pow2(&ci(j - 1))? * xi(j - 1);
        }
        ok
    };
    if one_bad {
        return Ok(ConformReport {
            class: ConformClass::Bad(1),
            encoded_pair: None,
        });
    }

    Ok(ConformReport {
        class: ConformClass::NonConform,
        encoded_pair: None,
    })
}

/// Builds the good configuration encoding `(v, n)` with the scaling counter
/// at `x >= 1`: `b = 2^n`, `x_1 = 2^n·x`, `x_i = 2^{v[i-1]}·x_{i-1}`.
pub fn make_good_config(
    layout: &GoodConfigLayout,
    v: &[u64],
    n: u64,
    x: u64,
) -> Configuration {
    assert_eq!(v.len(), layout.d, "vector length must match the layout");
    assert!(x >= 1, "good configurations need x > 0");
    let mut cfg = Configuration::zero();
    cfg.set(layout.x.clone(), Nat::from(x));
    cfg.set(layout.c0.clone(), Nat::from(n));
    cfg.set(layout.b.clone(), Nat::one() << n);
    let mut tower = Nat::from(x) << n;
    cfg.set(layout.x_i(1).clone(), tower.clone());
    for i in 2..=layout.d + 1 {
        cfg.set(layout.c_i(i - 1).clone(), Nat::from(v[i - 2]));
        tower <<= v[i - 2];
        cfg.set(layout.x_i(i).clone(), tower.clone());
    }
    cfg
}
