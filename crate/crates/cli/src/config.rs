//! `key=value` run files. Each key becomes `--key=value` right after the
//! subcommand, so flags given on the command line (which come later) win.

use std::ffi::OsString;
use std::fs;

/// Removes `--config FILE` from `args` and splices the file's settings in.
pub fn expand(mut args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some((at, path)) = find_config(&args)? else {
        return Ok(args);
    };
    let span = if args[at].to_string_lossy().starts_with("--config=") {
        1
    } else {
        2
    };
    args.drain(at..at + span);

    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let (command, flags) = parse(&text)?;

    let has_subcommand = args.get(1).is_some_and(|a| !a.to_string_lossy().starts_with('-'));
    if !has_subcommand {
        match command {
            Some(c) => args.insert(1, c.into()),
            None => return Err(format!("config {path} has no `command` and none was given")),
        }
    }
    let insert_at = 2.min(args.len());
    args.splice(insert_at..insert_at, flags.into_iter().map(OsString::from));
    Ok(args)
}

fn find_config(args: &[OsString]) -> Result<Option<(usize, String)>, String> {
    for (i, a) in args.iter().enumerate().skip(1) {
        let a = a.to_string_lossy();
        if let Some(path) = a.strip_prefix("--config=") {
            return Ok(Some((i, path.to_owned())));
        }
        if a == "--config" {
            let path = args.get(i + 1).ok_or_else(|| "--config needs a file path".to_owned())?;
            return Ok(Some((i, path.to_string_lossy().into_owned())));
        }
    }
    Ok(None)
}

/// Returns the optional `command` entry and the remaining entries as flags.
pub fn parse(text: &str) -> Result<(Option<String>, Vec<String>), String> {
    let mut command = None;
    let mut flags = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value, got `{line}`", lineno + 1))?;
        let key = key.trim().trim_start_matches('-').replace('_', "-");
        let value = value.trim();
        if key.is_empty() {
            return Err(format!("config line {}: empty key", lineno + 1));
        }
        match (key.as_str(), value) {
            ("command", v) => command = Some(v.to_owned()),
            (_, "true") => flags.push(format!("--{key}")),
            (_, "false") => {}
            (_, v) => flags.push(format!("--{key}={v}")),
        }
    }
    Ok((command, flags))
}
