//! Flat `key = value` config files.
//!
//! Keys are the long flag names of the chosen command. The file's entries are
//! spliced in front of the command-line flags, so flags given explicitly win.

use std::ffi::OsString;
use std::path::Path;

use clap::CommandFactory;
use qfs_core::{Error, Result};

use crate::args::Cli;

/// Parses `key = value` lines; `#` starts a comment line.
pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut entries: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("config line {}: expected key = value", i + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(Error::Config(format!("config line {}: empty key or value", i + 1)));
        }
        if entries.iter().any(|(k, _)| *k == key) {
            return Err(Error::Config(format!("config line {}: duplicate key '{key}'", i + 1)));
        }
        entries.push((key, value));
    }
    Ok(entries)
}

fn allowed_keys(subcommand: &str) -> Option<Vec<String>> {
    let cmd = Cli::command();
    let sub = cmd.find_subcommand(subcommand)?;
    Some(
        sub.get_arguments()
            .filter_map(|a| a.get_long())
            .filter(|l| !matches!(*l, "config" | "help"))
            .map(String::from)
            .collect(),
    )
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            return iter.next().cloned();
        }
        if let Some(rest) = arg.to_str().and_then(|s| s.strip_prefix("--config=")) {
            return Some(rest.into());
        }
    }
    None
}

/// Expands `--config <path>` into explicit flags placed right after the
/// subcommand name. Arguments without a config file pass through unchanged.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(sub_name) = args.get(1).and_then(|a| a.to_str()).map(str::to_owned) else {
        return Ok(args);
    };
    let Some(allowed) = allowed_keys(&sub_name) else {
        return Ok(args);
    };
    let Some(path) = config_path(&args[2..]) else {
        return Ok(args);
    };
    let entries = parse(&std::fs::read_to_string(Path::new(&path))?)?;
    let mut spliced: Vec<OsString> = args[..2].to_vec();
    for (key, value) in entries {
        if !allowed.contains(&key) {
            return Err(Error::Config(format!(
                "unknown key '{key}' for {sub_name}; expected one of: {}",
                allowed.join(", ")
            )));
        }
        spliced.push(format!("--{key}").into());
        spliced.push(value.into());
    }
    spliced.extend_from_slice(&args[2..]);
    Ok(spliced)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_comments_and_underscores() {
        let e = parse("# run\nlayers = 4\n\ntrain_n=10\n").unwrap();
        assert_eq!(e, vec![("layers".into(), "4".into()), ("train-n".into(), "10".into())]);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(parse("layers 4"), Err(Error::Config(_))));
        assert!(matches!(parse("layers ="), Err(Error::Config(_))));
        assert!(matches!(parse("seed = 1\nseed = 2"), Err(Error::Config(_))));
    }

    #[test]
    fn splices_before_explicit_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "layers = 4\nseed = 9\n").unwrap();
        let args = os(&[
            "qfs",
            "interpolate",
            "--config",
            path.to_str().unwrap(),
            "--layers",
            "2",
        ]);
        let out = expand(args).unwrap();
        let strings: Vec<_> = out.iter().map(|s| s.to_str().unwrap()).collect();
        assert_eq!(&strings[..6], &["qfs", "interpolate", "--layers", "4", "--seed", "9"]);
        assert_eq!(&strings[8..], &["--layers", "2"]);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "dataset = circle\n").unwrap();
        let args = os(&["qfs", "interpolate", "--config", path.to_str().unwrap()]);
        assert!(matches!(expand(args), Err(Error::Config(_))));
    }

    #[test]
    fn passthrough_without_config() {
        let args = os(&["qfs", "trotter", "--t", "2"]);
        assert_eq!(expand(args.clone()).unwrap(), args);
    }
}
