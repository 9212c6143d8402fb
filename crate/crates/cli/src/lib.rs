//! File formats, subcommands and benchmarks behind the `corrseg` binary.

pub mod bench;
pub mod commands;
pub mod error;
pub mod io;
pub mod manifest;
pub mod svg;

pub use error::{CliError, CliResult};

/// Environment variable capping the worker count; `0` or unset means automatic.
pub const THREADS_ENV: &str = "CORRSEG_THREADS";

/// Parses a worker-count setting. `None` means "let the runtime decide".
pub fn parse_threads(value: Option<&str>) -> CliResult<Option<usize>> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(v) => match v.parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(CliError::Input(format!(
                "{THREADS_ENV} must be a non-negative integer, got {v:?}"
            ))),
        },
    }
}

/// Installs a global worker pool of the requested size.
pub fn configure_threads(threads: Option<usize>) -> CliResult<()> {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_setting() {
        assert_eq!(parse_threads(None).unwrap(), None);
        assert_eq!(parse_threads(Some("0")).unwrap(), None);
        assert_eq!(parse_threads(Some(" 8 ")).unwrap(), Some(8));
        assert!(parse_threads(Some("many")).is_err());
    }
}
