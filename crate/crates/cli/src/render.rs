use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Writes `rows` in the chosen format. Text output is one `key: value`
/// block per row; nested records are flattened with dotted keys.
pub fn render<T: Serialize>(rows: &[T], format: Format, out: &mut dyn Write) -> anyhow::Result<()> {
    match format {
        Format::Json => {
            if let [one] = rows {
                serde_json::to_writer_pretty(&mut *out, one)?;
            } else {
                serde_json::to_writer_pretty(&mut *out, rows)?;
            }
            writeln!(out)?;
        }
        Format::Csv => {
            let flat: Vec<Vec<(String, String)>> = rows.iter().map(flatten).collect::<anyhow::Result<_>>()?;
            let mut w = csv::Writer::from_writer(out);
            if let Some(first) = flat.first() {
                w.write_record(first.iter().map(|(k, _)| k))?;
            }
            for row in &flat {
                w.write_record(row.iter().map(|(_, v)| v))?;
            }
            w.flush()?;
        }
        Format::Text => {
            for (i, row) in rows.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                for (k, v) in flatten(row)? {
                    match (k.as_str(), v.as_str()) {
                        ("schema", _) => {}
                        (_, "") => writeln!(out, "{k}: none")?,
                        _ => writeln!(out, "{k}: {v}")?,
                    }
                }
            }
        }
    }
    Ok(())
}

fn flatten<T: Serialize>(row: &T) -> anyhow::Result<Vec<(String, String)>> {
    fn walk(prefix: &str, v: &serde_json::Value, out: &mut Vec<(String, String)>) {
        let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            serde_json::Value::Object(m) => {
                for (k, v) in m {
                    walk(&key(k), v, out);
                }
            }
            serde_json::Value::Null => out.push((prefix.to_string(), String::new())),
            serde_json::Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk("", &serde_json::to_value(row)?, &mut out);
    Ok(out)
}
