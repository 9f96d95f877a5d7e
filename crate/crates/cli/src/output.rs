use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use siteconvex::numfmt::{round_significant, SIGNIFICANT_DIGITS};
use siteconvex::EnergyProfile;

use crate::CliError;

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().unwrap_or(0.0), SIGNIFICANT_DIGITS);
            let x = if x == 0.0 { 0.0 } else { x };
            if let Some(r) = serde_json::Number::from_f64(x) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 12 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut v = serde_json::to_value(value).map_err(|e| CliError::input(format!("serialization failed: {e}")))?;
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::input(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Energies and minimizers for `N = 1..=K` at 4 decimals.
pub fn text_table(profile: &EnergyProfile) -> String {
    let mut out = format!("{:>3}  {:>10}  {}\n", "N", "E[V,N]", "configuration");
    for n in 1..profile.energies.len() {
        let configs: Vec<String> = profile.minimizers[n].iter().map(|o| o.to_string()).collect();
        out.push_str(&format!(
            "{:>3}  {:>10.4}  {}\n",
            n,
            profile.energies[n],
            configs.join(" ")
        ));
    }
    let v: Vec<String> = profile.violations.iter().map(|n| n.to_string()).collect();
    if v.is_empty() {
        out.push_str("convex in N\n");
    } else {
        out.push_str(&format!("convexity violated at N = {}\n", v.join(", ")));
    }
    out
}

/// Writes every file or none: contents go to temporary files next to their
/// targets and are renamed into place only once all of them are written.
pub fn write_all(files: &[(PathBuf, String)]) -> Result<(), CliError> {
    let mut staged = Vec::with_capacity(files.len());
    for (path, contents) in files {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
        tmp.write_all(contents.as_bytes())
            .and_then(|_| tmp.flush())
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
        staged.push((tmp, path));
    }
    let mut done: Vec<&PathBuf> = Vec::new();
    for (tmp, path) in staged {
        if let Err(e) = tmp.persist(path) {
            for p in done {
                let _ = fs::remove_file(p);
            }
            return Err(CliError::input(format!("cannot write {}: {}", path.display(), e.error)));
        }
        done.push(path);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use siteconvex::{energy_profile, fixtures};

    #[test]
    fn floats_rounded() {
        let s = to_json(&vec![1.0 / 3.0, -0.0, 2.0]).unwrap();
        assert!(s.contains("0.333333333333\n") || s.contains("0.333333333333,"), "{s}");
        assert!(!s.contains("-0"));
    }

    #[test]
    fn table_layout() {
        let t = text_table(&energy_profile(&fixtures::diamond(), &fixtures::v_star()).unwrap());
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 8);
        assert_eq!(lines[1], "  1     -2.1665  {1} {2}");
        assert!(lines[4].starts_with("  4     -3.6450  {3,4,5,6}"));
        assert_eq!(lines[7], "convexity violated at N = 3");
    }

    #[test]
    fn nothing_written_when_a_target_is_bad() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("a.json");
        let bad = dir.path().join("missing").join("b.csv");
        assert!(write_all(&[(good.clone(), "x".into()), (bad, "y".into())]).is_err());
        assert!(!good.exists());
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    }
}
