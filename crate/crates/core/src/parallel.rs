use rayon::ThreadPoolBuildError;

/// Runs `work` on a dedicated pool of `threads` workers, or on the global
/// pool when `threads` is `None`.
pub(crate) fn with_threads<T: Send>(
    threads: Option<usize>,
    work: impl FnOnce() -> T + Send,
) -> Result<T, ThreadPoolBuildError> {
    match threads {
        Some(t) => Ok(rayon::ThreadPoolBuilder::new().num_threads(t).build()?.install(work)),
        None => Ok(work()),
    }
}
