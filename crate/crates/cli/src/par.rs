use std::thread;

/// `items.map(f)` on up to `jobs` threads. Each thread takes one contiguous
/// chunk, so the output order is the input order.
pub fn map_ordered<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    thread::scope(|scope| {
        let handles: Vec<_> =
            items.chunks(chunk).map(|part| scope.spawn(|| part.iter().map(&f).collect::<Vec<_>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker thread panicked")).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_does_not_depend_on_job_count() {
        let items: Vec<u64> = (0..103).collect();
        let serial = map_ordered(&items, 1, |x| x * x);
        for jobs in [2, 4, 7, 500] {
            assert_eq!(map_ordered(&items, jobs, |x| x * x), serial);
        }
        assert!(map_ordered(&[] as &[u64], 4, |x| *x).is_empty());
    }
}
