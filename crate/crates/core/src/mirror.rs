//! Float mirrors of exact values, with an injectable perturbation.
//!
//! Every conversion from an exact scalar to `f64` passes through [`perturb`].
//! Tests set a small offset with [`with_perturbation`] and check that no exact
//! verdict moves. The offset is thread-local so parallel tests don't interfere.

use std::cell::Cell;

thread_local! {
    static OFFSET: Cell<f64> = const { Cell::new(0.0) };
}

pub(crate) fn perturb(x: f64) -> f64 {
    x + OFFSET.with(Cell::get)
}

/// Runs `f` with every float mirror shifted by `eps`, restoring the previous
/// offset afterwards.
pub fn with_perturbation<T>(eps: f64, f: impl FnOnce() -> T) -> T {
    let prev = OFFSET.with(|c| c.replace(eps));
    struct Restore(f64);
    impl Drop for Restore {
        fn drop(&mut self) {
            OFFSET.with(|c| c.set(self.0));
        }
    }
    let _guard = Restore(prev);
    f()
}

/// The offset currently applied to float mirrors.
pub fn current_perturbation() -> f64 {
    OFFSET.with(Cell::get)
}
