//! The generic parameterized-approximation contract and the sweep driver
//! that turns any conforming algorithm into an optimum approximation.
//!
//! An algorithm here takes (instance, k) and must either return a solution
//! whose cost it can certify against k, or the distinguished reject value.
//! [`lift_to_optimum_approx`] then probes k = 1, 2, 3, … and stops at the
//! first acceptance; soundness of the inner algorithm makes that k a lower
//! bound on the true optimum.

use crate::error::LiftError;
use crate::instance::Solution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    Min,
    Max,
}

/// A parameterized approximation algorithm with ratio function `rho`.
///
/// Implementations may assume nothing about k beyond k >= 1. They should
/// reject rather than error: the driver treats any non-reject output as an
/// acceptance claim.
pub trait FptApprox {
    type Inst;

    fn name(&self) -> &'static str;
    fn goal(&self) -> Goal;
    fn rho(&self, k: u64) -> f64;
    fn run(&self, inst: &Self::Inst, k: u64) -> Solution;
}

/// Certified bound at parameter k: cost <= k·rho(k) for minimization,
/// cost >= k/rho(k) for maximization.
fn within_bound(goal: Goal, cost: u64, k: u64, rho: f64) -> bool {
    match goal {
        Goal::Min => cost as f64 <= k as f64 * rho,
        Goal::Max => cost as f64 >= k as f64 / rho,
    }
}

/// Wrapper enforcing the normalization contract: an accepted answer whose
/// cost violates the certified bound is downgraded to reject instead of
/// being passed along.
pub struct Normalized<A>(pub A);

impl<A: FptApprox> FptApprox for Normalized<A> {
    type Inst = A::Inst;

    fn name(&self) -> &'static str {
        self.0.name()
    }

    fn goal(&self) -> Goal {
        self.0.goal()
    }

    fn rho(&self, k: u64) -> f64 {
        self.0.rho(k)
    }

    fn run(&self, inst: &Self::Inst, k: u64) -> Solution {
        let sol = self.0.run(inst, k);
        match sol.cost() {
            Some(cost) if !within_bound(self.goal(), cost, k, self.rho(k)) => Solution::reject(
                self.name(),
                format!("cost {cost} exceeds the certified bound at k = {k}; downgraded"),
            ),
            _ => sol,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftOutcome {
    pub solution: Solution,
    pub first_accepting_k: u64,
    /// Number of inner invocations; equals `first_accepting_k` by design.
    pub inner_calls: u64,
}

/// Shape requirements on a ratio function, checked over a finite range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoShapeReport {
    pub pass: bool,
    pub notes: Vec<String>,
}

pub fn check_rho_shape(
    rho: &dyn Fn(u64) -> f64,
    goal: Goal,
    range: std::ops::RangeInclusive<u64>,
) -> RhoShapeReport {
    let mut notes = Vec::new();
    let ks: Vec<u64> = range.collect();
    for &k in &ks {
        let r = rho(k);
        if !(r >= 1.0) {
            notes.push(format!("rho({k}) = {r} violates rho >= 1"));
        }
    }
    match goal {
        Goal::Min => {
            for w in ks.windows(2) {
                let (a, b) = (w[0] as f64 * rho(w[0]), w[1] as f64 * rho(w[1]));
                if b < a {
                    notes.push(format!("k·rho(k) decreases between k = {} and {}", w[0], w[1]));
                }
            }
        }
        Goal::Max => {
            let mut strictly_rose = false;
            for w in ks.windows(2) {
                let (a, b) = (w[0] as f64 / rho(w[0]), w[1] as f64 / rho(w[1]));
                if b < a {
                    notes.push(format!("k/rho(k) decreases between k = {} and {}", w[0], w[1]));
                }
                if b > a {
                    strictly_rose = true;
                }
            }
            // A finite sample cannot witness unboundedness; strict growth
            // somewhere in range is the stand-in.
            if !strictly_rose && ks.len() > 1 {
                notes.push("k/rho(k) never strictly increases in the sampled range".into());
            }
        }
    }
    RhoShapeReport { pass: notes.is_empty(), notes }
}

/// Probe k = 1..=k_cap and return the inner algorithm's first acceptance.
///
/// The inner algorithm runs behind [`Normalized`], so a buggy acceptance
/// with an out-of-bound cost is converted to reject and the sweep simply
/// continues.
pub fn lift_to_optimum_approx<A: FptApprox>(
    algo: &A,
    inst: &A::Inst,
    k_cap: u64,
) -> Result<LiftOutcome, LiftError> {
    if algo.goal() == Goal::Max {
        return Err(LiftError::MaximizationUnsupported);
    }
    let shape = check_rho_shape(&|k| algo.rho(k), algo.goal(), 1..=64);
    if !shape.pass {
        return Err(LiftError::InvalidRho(shape.notes.join("; ")));
    }
    let wrapped = Normalized(BorrowedAlgo(algo));
    let mut calls = 0u64;
    for k in 1..=k_cap {
        calls += 1;
        let sol = wrapped.run(inst, k);
        if !sol.is_reject() {
            return Ok(LiftOutcome { solution: sol, first_accepting_k: k, inner_calls: calls });
        }
    }
    Err(LiftError::Exhausted { k_cap })
}

/// Adapter so the driver can wrap a borrowed algorithm without cloning it.
struct BorrowedAlgo<'a, A>(&'a A);

impl<'a, A: FptApprox> FptApprox for BorrowedAlgo<'a, A> {
    type Inst = A::Inst;

    fn name(&self) -> &'static str {
        self.0.name()
    }

    fn goal(&self) -> Goal {
        self.0.goal()
    }

    fn rho(&self, k: u64) -> f64 {
        self.0.rho(k)
    }

    fn run(&self, inst: &Self::Inst, k: u64) -> Solution {
        self.0.run(inst, k)
    }
}
