//! Execution strategy for the data-parallel sweeps.
//!
//! With the `parallel` feature the default strategy fans work out over rayon;
//! without it every helper runs sequentially. [`with_strategy`] overrides the
//! choice for the current thread, which the benches use to compare both.

use std::cell::Cell;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    Parallel,
}

thread_local! {
    static CURRENT: Cell<Option<Strategy>> = const { Cell::new(None) };
}

/// Below this many items the helpers stay sequential.
const MIN_PARALLEL: usize = 512;

pub fn default_strategy() -> Strategy {
    if cfg!(feature = "parallel") {
        Strategy::Parallel
    } else {
        Strategy::Sequential
    }
}

pub fn current() -> Strategy {
    CURRENT.with(|c| c.get()).unwrap_or_else(default_strategy)
}

/// Runs `f` with `s` as the strategy of the calling thread.
pub fn with_strategy<R>(s: Strategy, f: impl FnOnce() -> R) -> R {
    let prev = CURRENT.with(|c| c.replace(Some(s)));
    let out = f();
    CURRENT.with(|c| c.set(prev));
    out
}

fn go_parallel(n: usize) -> bool {
    cfg!(feature = "parallel") && n >= MIN_PARALLEL && current() == Strategy::Parallel
}

/// Concatenation of `f(item)` over all items, in item order.
pub fn flat_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if go_parallel(items.len()) {
        use rayon::prelude::*;
        return items.par_iter().flat_map_iter(f).collect();
    }
    items.iter().flat_map(f).collect()
}

/// Items for which `f` returns `Some`, in item order.
pub fn filter_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Option<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if go_parallel(items.len()) {
        use rayon::prelude::*;
        return items.par_iter().filter_map(f).collect();
    }
    items.iter().filter_map(f).collect()
}

/// First item (in item order) for which `f` returns `Some`.
pub fn find_map<T, U, F>(items: &[T], f: F) -> Option<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Option<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if go_parallel(items.len()) {
        use rayon::prelude::*;
        return items.par_iter().find_map_first(f);
    }
    items.iter().find_map(f)
}

/// Sorts and removes duplicates.
pub fn sort_dedup<T: Ord + Send>(v: &mut Vec<T>) {
    #[cfg(feature = "parallel")]
    if go_parallel(v.len()) {
        use rayon::prelude::*;
        v.par_sort_unstable();
        v.dedup();
        return;
    }
    v.sort_unstable();
    v.dedup();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let items: Vec<u32> = (0..5000).collect();
        let f = |x: &u32| if x % 7 == 0 { vec![*x, x + 1] } else { vec![] };
        let par = with_strategy(Strategy::Parallel, || flat_map(&items, f));
        let seq = with_strategy(Strategy::Sequential, || flat_map(&items, f));
        assert_eq!(par, seq);
        assert_eq!(with_strategy(Strategy::Sequential, current), Strategy::Sequential);
    }
}
