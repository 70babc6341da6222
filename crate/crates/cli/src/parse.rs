//! Parsers for list and grid arguments.

use dirichlet_cf::combinatorics::Permutation;
use dirichlet_cf::cycle_index::{cyclic_group, dihedral_group, symmetric_group, trivial_group};
use dirichlet_cf::ferguson::{BasePartition, Region, TestFunction};
use dirichlet_cf::verify::windowed_cosine;

use crate::CliError;

fn malformed(what: &str, input: &str, why: impl std::fmt::Display) -> CliError {
    CliError::List(format!("{what} '{input}': {why}"))
}

/// Comma-separated reals; the empty string is the empty list.
pub fn reals(what: &str, input: &str) -> Result<Vec<f64>, CliError> {
    if input.trim().is_empty() {
        return Ok(Vec::new());
    }
    input
        .split(',')
        .map(|t| {
            let v: f64 = t.trim().parse().map_err(|e| malformed(what, input, e))?;
            if !v.is_finite() {
                return Err(malformed(what, input, "entries must be finite"));
            }
            Ok(v)
        })
        .collect()
}

pub fn naturals(what: &str, input: &str) -> Result<Vec<usize>, CliError> {
    input
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| malformed(what, input, e))
        })
        .collect()
}

pub fn shades(what: &str, input: &str) -> Result<Vec<u32>, CliError> {
    input
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| malformed(what, input, e))
        })
        .collect()
}

/// `start:stop:step`, inclusive of `stop` up to rounding.
pub fn grid(what: &str, input: &str) -> Result<Vec<f64>, CliError> {
    let parts = reals_sep(what, input, ':')?;
    let [start, stop, step] = parts[..] else {
        return Err(malformed(what, input, "expected start:stop:step"));
    };
    if !(step > 0.0) || stop < start {
        return Err(malformed(what, input, "need step > 0 and stop >= start"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(malformed(what, input, "more than 10^6 grid points"));
    }
    // snap to 12 decimals so that 0.1-steps print as typed
    Ok((0..count)
        .map(|i| {
            let v = start + step * i as f64;
            let snapped = (v * 1e12).round() / 1e12;
            if (snapped - v).abs() <= 1e-9 * step {
                snapped
            } else {
                v
            }
        })
        .collect())
}

fn reals_sep(what: &str, input: &str, sep: char) -> Result<Vec<f64>, CliError> {
    input
        .split(sep)
        .map(|t| {
            let v: f64 = t.trim().parse().map_err(|e| malformed(what, input, e))?;
            if !v.is_finite() {
                return Err(malformed(what, input, "entries must be finite"));
            }
            Ok(v)
        })
        .collect()
}

/// `a:b[,c:d…]` as a union of intervals `[a, b)`.
pub fn region(what: &str, input: &str) -> Result<Region, CliError> {
    let intervals = input
        .split(',')
        .map(|piece| {
            let ends = reals_sep(what, piece, ':')?;
            match ends[..] {
                [a, b] => Ok((a, b)),
                _ => Err(malformed(what, input, "expected a:b intervals")),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Region::new(intervals).map_err(CliError::from)
}

/// `piecewise:CUTS:VALUES`, `constant:C`, `cos2pi`, or `windowed-cosine`.
pub fn test_function(input: &str) -> Result<TestFunction, CliError> {
    let mut parts = input.splitn(3, ':');
    let kind = parts.next().unwrap_or_default();
    match kind {
        "piecewise" => {
            let cuts = reals("test function cuts", parts.next().unwrap_or_default())?;
            let values = reals("test function values", parts.next().unwrap_or_default())?;
            Ok(TestFunction::piecewise(BasePartition::new(&cuts)?, values)?)
        }
        "constant" => {
            let c = reals("test function constant", parts.next().unwrap_or_default())?;
            match c[..] {
                [c] => Ok(TestFunction::constant(c)?),
                _ => Err(malformed("test function", input, "expected constant:C")),
            }
        }
        "cos2pi" => Ok(TestFunction::continuous_with_sup(
            "cos2pi",
            |y: f64| (2.0 * std::f64::consts::PI * y).cos(),
            1.0,
        )?),
        "windowed-cosine" => Ok(windowed_cosine()?),
        _ => Err(malformed(
            "test function",
            input,
            "expected piecewise:CUTS:VALUES, constant:C, cos2pi, or windowed-cosine",
        )),
    }
}

/// Largest degree accepted for generated groups; `S_n` has `n!` elements.
const MAX_GROUP_DEGREE: usize = 10;

/// `sym:N`, `cyc:N`, `dih:N`, `trivial:N`, or `file:PATH`.
pub fn group(input: &str) -> Result<Vec<Permutation>, CliError> {
    let (kind, arg) = input
        .split_once(':')
        .ok_or_else(|| malformed("group", input, "expected KIND:ARG"))?;
    if kind == "file" {
        return group_file(arg);
    }
    let n: usize = arg
        .trim()
        .parse()
        .map_err(|e| malformed("group", input, e))?;
    if n == 0 || n > MAX_GROUP_DEGREE {
        return Err(CliError::Invalid(format!(
            "group degree must lie in 1..={MAX_GROUP_DEGREE}, got {n}"
        )));
    }
    match kind {
        "sym" => Ok(symmetric_group(n)),
        "cyc" => Ok(cyclic_group(n)),
        "dih" => Ok(dihedral_group(n)),
        "trivial" => Ok(trivial_group(n)),
        _ => Err(malformed(
            "group",
            input,
            "kind must be sym, cyc, dih, trivial, or file",
        )),
    }
}

/// One permutation per line as 1-based images, separated by commas or
/// whitespace; `#` starts a comment.
pub fn group_file(path: &str) -> Result<Vec<Permutation>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    group_text(path, &text)
}

fn group_text(path: &str, text: &str) -> Result<Vec<Permutation>, CliError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or_default().trim();
        if body.is_empty() {
            continue;
        }
        let images = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::List(format!("{path} line {}: {e}", lineno + 1)))?;
        out.push(
            Permutation::new(&images)
                .map_err(|e| CliError::Invalid(format!("{path} line {}: {e}", lineno + 1)))?,
        );
    }
    if out.is_empty() {
        return Err(CliError::Invalid(format!("{path}: no group elements")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(reals("x", "1, 2.5,-3").unwrap(), vec![1.0, 2.5, -3.0]);
        assert!(reals("x", "").unwrap().is_empty());
        assert!(reals("x", "1,,2").is_err());
        assert!(reals("x", "nan").is_err());
        assert_eq!(naturals("g", "1,1,3").unwrap(), vec![1, 1, 3]);
    }

    #[test]
    fn grids() {
        let g = grid("t", "-5:5:0.1").unwrap();
        assert_eq!(g.len(), 101);
        assert!((g[100] - 5.0).abs() < 1e-12);
        assert_eq!(grid("t", "0:0:1").unwrap(), vec![0.0]);
        assert!(grid("t", "1:0:0.1").is_err());
        assert!(grid("t", "0:1").is_err());
    }

    #[test]
    fn functions_and_regions() {
        let f = test_function("piecewise:0.25,0.5,0.75:1.0,-0.5,0.3,0.0").unwrap();
        assert_eq!(f.eval(0.3), -0.5);
        assert!(test_function("piecewise:0.5:1,2,3").is_err());
        assert!(test_function("spline").is_err());
        let r = region("region", "0.0:0.5,0.75:1").unwrap();
        assert!(r.contains(0.8) && !r.contains(0.6));
    }

    #[test]
    fn groups() {
        assert_eq!(group("sym:4").unwrap().len(), 24);
        assert_eq!(group("cyc:5").unwrap().len(), 5);
        assert!(group("sym:0").is_err());
        assert!(group("alt:4").is_err());
        let g = group_text(
            "g",
            "# rotations of a square\n1 2 3 4\n2,3,4,1\n\n3 4 1 2\n4 1 2 3\n",
        )
        .unwrap();
        assert_eq!(g.len(), 4);
        assert!(group_text("g", "1 2 x").is_err());
        assert!(group_text("g", "# nothing\n").is_err());
        assert!(matches!(
            group("file:/nonexistent/group.txt"),
            Err(CliError::Io(_))
        ));
    }
}
