//! Thin shim over rayon so every data-parallel loop in the crate has a
//! sequential twin. The `parallel` feature picks the rayon path by default;
//! benches call both explicitly.

/// Maps `f` over `items` and reduces the results with `fold`, either on the
/// rayon pool or sequentially. `fold` must be associative and order-insensitive
/// for the two paths to agree.
pub fn map_reduce<T, R, F, G>(parallel: bool, items: Vec<T>, f: F, fold: G) -> Option<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
    G: Fn(R, R) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return items.into_par_iter().map(&f).reduce_with(&fold);
    }
    let _ = parallel;
    items.into_iter().map(f).reduce(fold)
}

/// Maps `f` over `items` preserving order.
pub fn map_collect<T, R, F>(parallel: bool, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return items.into_par_iter().map(&f).collect();
    }
    let _ = parallel;
    items.into_iter().map(f).collect()
}

/// Whether the parallel path is compiled in at all.
pub fn available() -> bool {
    cfg!(feature = "parallel")
}
