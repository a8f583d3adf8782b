//! Builtin sequence generators.

use std::fs;

use anyhow::{bail, Context, Result};
use ipstar::Sequence;
use num_bigint::BigUint;

/// `nat:N`, `pow:B:N`, `fib:N` or `file:PATH` (one positive integer per line).
pub fn parse(src: &str) -> Result<Sequence> {
    let (kind, rest) = src
        .split_once(':')
        .context("sequence source must look like kind:args")?;
    let count =
        |s: &str| -> Result<usize> { s.parse().with_context(|| format!("bad length '{s}'")) };
    let seq = match kind {
        "nat" => Sequence::naturals(count(rest)?)?,
        "fib" => Sequence::fibonacci(count(rest)?)?,
        "pow" => {
            let (b, n) = rest.split_once(':').context("pow needs pow:BASE:N")?;
            Sequence::powers(
                b.parse().with_context(|| format!("bad base '{b}'"))?,
                count(n)?,
            )?
        }
        "file" => {
            let text = fs::read_to_string(rest).with_context(|| format!("reading {rest}"))?;
            let terms = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(|l| {
                    BigUint::parse_bytes(l.as_bytes(), 10)
                        .with_context(|| format!("bad term '{l}'"))
                })
                .collect::<Result<Vec<_>>>()?;
            Sequence::new(terms)?
        }
        other => bail!("unknown sequence source '{other}' (nat, pow, fib, file)"),
    };
    Ok(seq)
}
