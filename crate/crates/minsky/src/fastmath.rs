//! Exact arithmetic for the fast-growing hierarchy.
//!
//! `F_0(n) = n + 1` and `F_d(n) = F_{d-1}^{n+1}(n)` for `d >= 1`. The vector
//! variant over `v` in `N^d` composes `F_v(n) = F_d^{v[d]} ∘ … ∘ F_1^{v[1]}(n)`.
//! The rewrite step [`eval_f_step`] transforms a pair `(v, n)` while keeping
//! `F_v(n)` invariant and strictly decreasing `v` lexicographically, so its
//! maximal iteration [`eval_f_max`] ends at `(0_d, F_v(n))`.
//!
//! Everything is computed with arbitrary-precision naturals. These functions
//! grow too fast to always materialize, so every operation carries a
//! [`Budget`] that turns runaway growth into a clean [`FastmathError::BudgetExceeded`]
//! instead of exhausting memory.

use num_bigint::BigUint;
use num_traits::Zero;
use std::cmp::Ordering;
use thiserror::Error;

/// Arbitrary-precision natural number, the value domain of the hierarchy.
pub type Nat = BigUint;

/// log2(10), used to convert a decimal-digit budget into a bit bound.
const LOG2_10: f64 = std::f64::consts::LOG2_10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FastmathError {
    /// The result (or an intermediate value) would exceed the digit budget.
    #[error("value would exceed the budget of {digits} decimal digits")]
    BudgetExceeded { digits: usize },

    /// `eval_f_step` is undefined on the zero vector.
    #[error("evalF step is undefined on the zero vector")]
    ZeroVector,
}

/// Growth cap for hierarchy computations, measured in decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub digits: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { digits: 100_000 }
    }
}

impl Budget {
    pub fn new(digits: usize) -> Self {
        Budget { digits }
    }

    fn max_bits(&self) -> u64 {
        (self.digits as f64 * LOG2_10).ceil() as u64
    }

    fn check(&self, n: &Nat) -> Result<(), FastmathError> {
        if n.bits() > self.max_bits() {
            Err(FastmathError::BudgetExceeded { digits: self.digits })
        } else {
            Ok(())
        }
    }
}

/// `F_d(n)`, computed by the recursive definition: `F_d(n) = F_{d-1}^{n+1}(n)`.
///
/// The `d = 1` case collapses its `n + 1` successor applications into a
/// single addition. For `d >= 2` the `n + 1` applications of `F_{d-1}` are
/// stepped through; an iteration count beyond the budget's bit bound already
/// implies the result busts the budget (`F_d(n) >= 2^{n+1}` for `d >= 2`),
/// so those fail fast.
pub fn fg_f(d: u64, n: &Nat, budget: &Budget) -> Result<Nat, FastmathError> {
    budget.check(n)?;
    match d {
        0 => Ok(n + 1u32),
        1 => Ok(n + n + 1u32),
        _ => {
            let iters = n + 1u32;
            if iters.bits() > 64 || u64::try_from(&iters).unwrap() > budget.max_bits() {
                return Err(FastmathError::BudgetExceeded { digits: budget.digits });
            }
            let iters = u64::try_from(&iters).unwrap();
            let mut acc = n.clone();
            for _ in 0..iters {
                acc = fg_f(d - 1, &acc, budget)?;
                budget.check(&acc)?;
            }
            Ok(acc)
        }
    }
}

/// `F_v(n) = F_d^{v[d]} ∘ … ∘ F_1^{v[1]}(n)`.
///
/// `v` follows the 1-based convention in documentation; `v[0]` of the slice is
/// the 1-based `v[1]`.
pub fn fg_f_vec(v: &[Nat], n: &Nat, budget: &Budget) -> Result<Nat, FastmathError> {
    let mut acc = n.clone();
    for (i, count) in v.iter().enumerate() {
        let d = i as u64 + 1;
        // k applications of F_d at least double k times, so a count beyond
        // the bit bound already exceeds the budget.
        if count.bits() > 64 || u64::try_from(count).unwrap() > budget.max_bits() {
            return Err(FastmathError::BudgetExceeded { digits: budget.digits });
        }
        for _ in 0..u64::try_from(count).unwrap() {
            acc = fg_f(d, &acc, budget)?;
        }
    }
    Ok(acc)
}

/// The Ackermann-like diagonal `F_ω(n) = F_{n+1}(n)`.
///
/// Documented for completeness; for `n >= 2` the budget is exceeded before
/// anything is materialized, so in practice it is only evaluated on `n <= 1`.
pub fn fg_f_omega(n: &Nat, budget: &Budget) -> Result<Nat, FastmathError> {
    if n.bits() > 64 {
        return Err(FastmathError::BudgetExceeded { digits: budget.digits });
    }
    fg_f(u64::try_from(n).unwrap() + 1, n, budget)
}

/// A pair `(v, n)` of the rewrite system, with `v` in `N^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalFState {
    /// The vector `v`; slice index `i` holds the 1-based entry `v[i+1]`.
    pub v: Vec<Nat>,
    pub n: Nat,
}

impl EvalFState {
    pub fn new(v: Vec<Nat>, n: Nat) -> Self {
        EvalFState { v, n }
    }

    /// Convenience constructor from machine integers.
    pub fn from_u64(v: &[u64], n: u64) -> Self {
        EvalFState {
            v: v.iter().map(|&e| Nat::from(e)).collect(),
            n: Nat::from(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn is_zero_vector(&self) -> bool {
        self.v.iter().all(|e| e.is_zero())
    }

    /// `F_v(n)` of this state.
    pub fn value(&self, budget: &Budget) -> Result<Nat, FastmathError> {
        fg_f_vec(&self.v, &self.n, budget)
    }
}

/// Lexicographic order on vectors: the maximal index where they differ decides.
pub fn lex_cmp(a: &[Nat], b: &[Nat]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// One rewrite step of `evalF_d`.
///
/// With `p` the minimal index such that `v[p] > 0`:
/// `(v, n) -> (v - 1_{d,p}, 2n + 1)` if `p = 1`, and
/// `(v, n) -> (v - 1_{d,p} + (n+1)·1_{d,p-1}, n)` if `p > 1`.
/// `F_v(n)` is an invariant of the step and `v` strictly decreases
/// lexicographically.
pub fn eval_f_step(s: &EvalFState) -> Result<EvalFState, FastmathError> {
    let p = s
        .v
        .iter()
        .position(|e| !e.is_zero())
        .ok_or(FastmathError::ZeroVector)?;
    let mut v = s.v.clone();
    v[p] -= 1u32;
    if p == 0 {
        Ok(EvalFState::new(v, &s.n + &s.n + 1u32))
    } else {
        v[p - 1] += &s.n + 1u32;
        Ok(EvalFState::new(v, s.n.clone()))
    }
}

/// Iterates [`eval_f_step`] as long as possible, ending at `(0_d, F_v(n))`.
pub fn eval_f_max(s: &EvalFState, budget: &Budget) -> Result<EvalFState, FastmathError> {
    let mut cur = s.clone();
    while !cur.is_zero_vector() {
        cur = eval_f_step(&cur)?;
        budget.check(&cur.n)?;
    }
    Ok(cur)
}
