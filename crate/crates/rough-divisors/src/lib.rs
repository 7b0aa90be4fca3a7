//! Exact, desk-scale computation around integers with a divisor in a
//! given interval.
//!
//! The crate counts and measures, exactly where exactness is feasible:
//!
//! * **w-rough integers** (no prime factor `<= w`) with a divisor in an
//!   interval `(y, z]` - the counting function `H(x, y, z)` restricted to
//!   rough integers ([`counting::count_h`]);
//! * the **divisor-clustering measure** `L(a)`, the Lebesgue measure of the
//!   union of the intervals `[log d - log 2, log d)` over divisors `d | a`
//!   ([`divisors::l_measure`]), together with close-pair and
//!   isolated-divisor statistics;
//! * restricted **multiplication tables** and **Farey product sets**
//!   ([`counting::mult_table_count`], [`counting::farey_product_count`]);
//! * exact sums over squarefree integers built from bounded prime sets
//!   ([`counting::sum_over_p`], [`counting::sum_over_block_vector`]);
//! * the **order-of-magnitude formulas** those counts are compared
//!   against, including Poisson partial sums ([`formulas`]);
//! * seeded **Monte Carlo volume estimates** for the constrained
//!   ordered-simplex regions behind the lower-bound machinery ([`mc`]).
//!
//! Everything is deterministic: counting is exact integer work, and the
//! Monte Carlo estimators are reproducible from an explicit seed.
//!
//! The companion book under `book/` walks through the mathematics with
//! runnable snippets; those snippets are compiled as doc-tests so the
//! narrative cannot drift from the code.

pub mod counting;
pub mod divisors;
pub mod error;
pub mod formulas;
pub mod mc;
pub mod sieve;

mod bits;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    //! Every code block in the book runs under `cargo test --doc`.
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(primes_and_ladders, "../../../book/src/primes-and-ladders.md");
    chapter!(divisor_clustering, "../../../book/src/divisor-clustering.md");
    chapter!(exact_counts, "../../../book/src/exact-counts.md");
    chapter!(prime_product_sums, "../../../book/src/prime-product-sums.md");
    chapter!(order_formulas, "../../../book/src/order-formulas.md");
    chapter!(monte_carlo, "../../../book/src/monte-carlo-volumes.md");
    chapter!(cli, "../../../book/src/cli.md");
}
