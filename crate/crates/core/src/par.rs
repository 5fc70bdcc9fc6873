//! Order-preserving parallel helpers; sequential without the `parallel`
//! feature. Results never depend on the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map_range<R: Send>(count: usize, f: impl Fn(usize) -> R + Sync + Send) -> Vec<R> {
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<R>(count: usize, f: impl Fn(usize) -> R) -> Vec<R> {
    (0..count).map(f).collect()
}

/// Value of `f` at the lowest index in `0..count` where it is `Some`.
#[cfg(feature = "parallel")]
pub(crate) fn first_some<T: Send>(count: usize, f: impl Fn(usize) -> Option<T> + Sync + Send) -> Option<T> {
    (0..count).into_par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn first_some<T>(count: usize, f: impl Fn(usize) -> Option<T>) -> Option<T> {
    (0..count).find_map(f)
}
