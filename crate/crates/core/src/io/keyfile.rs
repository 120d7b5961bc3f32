//! ASCII key and permutation files.
//!
//! Key file:
//! ```text
//! SPIKEY 1 TYPE1 M=<m> N=<n> W=<w> SEED=<hex>
//! 0110...   (M lines of N characters from {0,1})
//! ```
//! Permutation file:
//! ```text
//! SPIPERM 1 M=<m> SEED=<hex>
//! 5         (M lines, one-based index of the original pattern at each position)
//! ```

use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Result, SpiError};
use crate::system::{PatternKey, PermutationKey, Regime};

const KEY_MAGIC: &str = "SPIKEY";
const PERM_MAGIC: &str = "SPIPERM";
const VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyFile {
    pub regime: Regime,
    pub seed: u64,
    pub key: PatternKey,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationFile {
    pub seed: u64,
    pub permutation: PermutationKey,
}

pub fn format_seed(seed: u64) -> String {
    format!("{seed:016x}")
}

pub fn parse_seed(s: &str) -> Option<u64> {
    let s = s.trim();
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    if digits.is_empty() {
        return None;
    }
    u64::from_str_radix(digits, 16).ok()
}

fn field<'a>(token: Option<&'a str>, name: &str, ctx: &str) -> Result<&'a str> {
    token
        .and_then(|t| t.strip_prefix(name))
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| SpiError::format(ctx, "line 1", format!("expected {name}=<value>")))
}

fn count(token: Option<&str>, name: &str, ctx: &str) -> Result<usize> {
    field(token, name, ctx)?
        .parse()
        .map_err(|_| SpiError::format(ctx, "line 1", format!("{name} must be a decimal count")))
}

fn seed_field(token: Option<&str>, ctx: &str) -> Result<u64> {
    parse_seed(field(token, "SEED", ctx)?)
        .ok_or_else(|| SpiError::format(ctx, "line 1", "SEED must be hexadecimal"))
}

impl KeyFile {
    pub fn encode(&self) -> String {
        let k = &self.key;
        let mut out = format!(
            "{KEY_MAGIC} {VERSION} {} M={} N={} W={} SEED={}\n",
            self.regime,
            k.patterns(),
            k.pixels(),
            k.width(),
            format_seed(self.seed)
        );
        out.reserve(k.patterns() * (k.pixels() + 1));
        for row in k.entries().rows() {
            out.extend(row.iter().map(|&b| if b == 1 { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }

    pub fn decode(text: &str, ctx: &str) -> Result<Self> {
        let mut lines = text.split_terminator('\n');
        let header = lines
            .next()
            .ok_or_else(|| SpiError::format(ctx, "line 1", "empty key file"))?;
        let mut tok = header.split_whitespace();
        if tok.next() != Some(KEY_MAGIC) {
            return Err(SpiError::format(ctx, "line 1", format!("expected magic {KEY_MAGIC}")));
        }
        if tok.next() != Some(VERSION) {
            return Err(SpiError::format(ctx, "line 1", format!("unsupported version, need {VERSION}")));
        }
        let regime: Regime = tok
            .next()
            .ok_or_else(|| SpiError::format(ctx, "line 1", "missing regime"))?
            .parse()
            .map_err(|_| SpiError::format(ctx, "line 1", "regime must be TYPE1 or TYPE2"))?;
        let m = count(tok.next(), "M", ctx)?;
        let n = count(tok.next(), "N", ctx)?;
        let w = count(tok.next(), "W", ctx)?;
        let seed = seed_field(tok.next(), ctx)?;
        if tok.next().is_some() {
            return Err(SpiError::format(ctx, "line 1", "unexpected trailing header fields"));
        }
        if m == 0 || n == 0 || w == 0 || n % w != 0 {
            return Err(SpiError::format(ctx, "line 1", format!("inconsistent dimensions M={m} N={n} W={w}")));
        }

        let mut bits = Vec::with_capacity(m * n);
        let mut rows = 0;
        for (i, line) in lines.enumerate() {
            let line_no = i + 2;
            if rows == m {
                return Err(SpiError::format(ctx, format!("line {line_no}"), format!("more than M={m} pattern rows")));
            }
            if line.len() != n {
                return Err(SpiError::format(
                    ctx,
                    format!("line {line_no}"),
                    format!("pattern row has {} characters, expected N={n}", line.len()),
                ));
            }
            for (col, c) in line.bytes().enumerate() {
                match c {
                    b'0' => bits.push(0),
                    b'1' => bits.push(1),
                    _ => {
                        return Err(SpiError::format(
                            ctx,
                            format!("line {line_no}, column {}", col + 1),
                            "pattern digits must be 0 or 1",
                        ))
                    }
                }
            }
            rows += 1;
        }
        if rows != m {
            return Err(SpiError::format(ctx, format!("line {}", rows + 2), format!("found {rows} of M={m} pattern rows")));
        }
        if !text.ends_with('\n') {
            return Err(SpiError::format(ctx, format!("line {}", m + 1), "missing final newline"));
        }
        let entries = Array2::from_shape_vec((m, n), bits).expect("row lengths checked");
        Ok(Self {
            regime,
            seed,
            key: PatternKey::new(w, n / w, entries)?,
        })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.encode()).map_err(|e| SpiError::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| SpiError::io(path, e))?;
        Self::decode(&text, &path.display().to_string())
    }
}

impl PermutationFile {
    pub fn encode(&self) -> String {
        let mut out = format!(
            "{PERM_MAGIC} {VERSION} M={} SEED={}\n",
            self.permutation.len(),
            format_seed(self.seed)
        );
        for &i in self.permutation.order() {
            out.push_str(&(i + 1).to_string());
            out.push('\n');
        }
        out
    }

    pub fn decode(text: &str, ctx: &str) -> Result<Self> {
        let mut lines = text.split_terminator('\n');
        let header = lines
            .next()
            .ok_or_else(|| SpiError::format(ctx, "line 1", "empty permutation file"))?;
        let mut tok = header.split_whitespace();
        if tok.next() != Some(PERM_MAGIC) || tok.next() != Some(VERSION) {
            return Err(SpiError::format(ctx, "line 1", format!("expected {PERM_MAGIC} {VERSION}")));
        }
        let m = count(tok.next(), "M", ctx)?;
        let seed = seed_field(tok.next(), ctx)?;
        let mut order = Vec::with_capacity(m);
        for (i, line) in lines.enumerate() {
            let idx: usize = line.trim().parse().map_err(|_| {
                SpiError::format(ctx, format!("line {}", i + 2), "expected a one-based pattern index")
            })?;
            if idx == 0 {
                return Err(SpiError::format(ctx, format!("line {}", i + 2), "indices are one-based"));
            }
            order.push(idx - 1);
        }
        if order.len() != m {
            return Err(SpiError::format(ctx, format!("line {}", order.len() + 2), format!("found {} of M={m} indices", order.len())));
        }
        let permutation = PermutationKey::new(order)
            .map_err(|e| SpiError::format(ctx, "body", e.to_string()))?;
        Ok(Self { seed, permutation })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.encode()).map_err(|e| SpiError::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| SpiError::io(path, e))?;
        Self::decode(&text, &path.display().to_string())
    }
}
