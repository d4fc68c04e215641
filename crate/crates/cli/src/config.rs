//! `--config` files: a flat JSON object whose entries become flags.

use std::ffi::OsString;
use std::fs;

use serde_json::Value;

/// Flags that name the same option.
const ALIASES: [(&str, &str); 1] = [("--stark-u", "--u")];

fn canonical(flag: &str) -> &str {
    ALIASES
        .iter()
        .find(|(alias, _)| *alias == flag)
        .map_or(flag, |(_, c)| c)
}

/// Path given to `--config`, if any.
fn config_path(args: &[OsString]) -> Result<Option<String>, String> {
    let mut iter = args.iter().skip(1);
    while let Some(a) = iter.next() {
        let a = a.to_string_lossy();
        if a == "--config" {
            return iter
                .next()
                .map(|p| Some(p.to_string_lossy().into_owned()))
                .ok_or_else(|| "--config needs a path".to_string());
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Ok(Some(p.to_string()));
        }
    }
    Ok(None)
}

fn flags_present(args: &[OsString]) -> Vec<String> {
    args.iter()
        .filter_map(|a| {
            let a = a.to_string_lossy();
            let flag = a.split('=').next()?;
            flag.starts_with("--").then(|| canonical(flag).to_string())
        })
        .collect()
}

/// Appends the entries of the `--config` file as flags, skipping any flag
/// already on the command line.
pub fn expand_args(mut args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&args)? else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
    let Value::Object(map) = value else {
        return Err(format!("{path}: expected a JSON object"));
    };
    let present = flags_present(&args);
    for (key, v) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        if flag == "--config" {
            return Err(format!("{path}: nested config files are not supported"));
        }
        if present.iter().any(|p| p == canonical(&flag)) {
            continue;
        }
        match v {
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => args.push(flag.into()),
            Value::Number(n) => {
                args.push(flag.into());
                args.push(n.to_string().into());
            }
            Value::String(s) => {
                args.push(flag.into());
                args.push(s.into());
            }
            Value::Array(_) | Value::Object(_) => {
                return Err(format!("{path}: `{key}` must be a scalar"));
            }
        }
    }
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn no_config_is_identity() {
        let a = os(&["arsm", "poles", "--delta", "0.7"]);
        assert_eq!(expand_args(a.clone()).unwrap(), a);
    }

    #[test]
    fn command_line_wins_and_aliases_match() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        fs::write(
            &path,
            r#"{"delta": 0.7, "stark_u": 0.2, "g1_min": 0.1, "plot": true, "r": null}"#,
        )
        .unwrap();
        let a = os(&[
            "arsm",
            "spectrum",
            "--u",
            "0.3",
            "--config",
            path.to_str().unwrap(),
        ]);
        let got: Vec<String> = expand_args(a)
            .unwrap()
            .into_iter()
            .map(|s| s.into_string().unwrap())
            .collect();
        assert!(got.windows(2).any(|w| w == ["--delta", "0.7"]));
        assert!(got.windows(2).any(|w| w == ["--g1-min", "0.1"]));
        assert!(got.contains(&"--plot".to_string()));
        assert!(!got.contains(&"--stark-u".to_string()));
        assert!(!got.contains(&"--r".to_string()));
    }

    #[test]
    fn rejects_non_object() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        fs::write(&path, "[1, 2]").unwrap();
        let a = os(&["arsm", "poles", "--config", path.to_str().unwrap()]);
        assert!(expand_args(a).is_err());
    }
}
