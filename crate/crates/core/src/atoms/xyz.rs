//! Extended-XYZ reading and writing.
//!
//! Per frame: a count line, a comment line carrying `Lattice="9 floats"`,
//! `pbc="T T T"` and free `key=value` properties, then one `symbol x y z`
//! line per atom. Unknown comment keys are preserved verbatim in the frame's
//! property map. Floats are written in Rust's shortest round-trip form, so
//! read(write(x)) reproduces coordinates bit-exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{atomic_number, element_symbol, Configuration};
use crate::error::{Error, Result};

/// Parses every frame in `text`.
pub fn read_xyz(text: &str) -> Result<Vec<Configuration>> {
    let lines: Vec<&str> = text.lines().collect();
    let mut frames = Vec::new();
    let mut cursor = 0usize;

    while cursor < lines.len() {
        if lines[cursor].trim().is_empty() {
            cursor += 1;
            continue;
        }
        let count_line = cursor;
        let n: usize = lines[count_line].trim().parse().map_err(|_| Error::Parse {
            line: count_line + 1,
            msg: format!("expected atom count, got `{}`", lines[count_line].trim()),
        })?;
        if n == 0 {
            return Err(Error::Parse {
                line: count_line + 1,
                msg: "frame must contain at least one atom".into(),
            });
        }
        let comment_line = count_line + 1;
        if comment_line >= lines.len() {
            return Err(Error::Parse {
                line: comment_line + 1,
                msg: "missing comment line".into(),
            });
        }
        let (cell, pbc, properties) = parse_comment(lines[comment_line], comment_line + 1)?;

        let mut species = Vec::with_capacity(n);
        let mut positions = Vec::with_capacity(n);
        for k in 0..n {
            let line_no = comment_line + 1 + k;
            let line = lines.get(line_no).ok_or(Error::Parse {
                line: line_no + 1,
                msg: format!("expected {n} atom lines, file ended early"),
            })?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() < 4 {
                return Err(Error::Parse {
                    line: line_no + 1,
                    msg: format!("expected `symbol x y z`, got `{line}`"),
                });
            }
            let z = atomic_number(fields[0]).ok_or_else(|| Error::Parse {
                line: line_no + 1,
                msg: format!("unknown element symbol `{}`", fields[0]),
            })?;
            let mut pos = [0.0; 3];
            for c in 0..3 {
                pos[c] = fields[1 + c].parse().map_err(|_| Error::Parse {
                    line: line_no + 1,
                    msg: format!("malformed coordinate `{}`", fields[1 + c]),
                })?;
            }
            species.push(z);
            positions.push(pos);
        }
        let config = Configuration::new(species, positions, cell, pbc)
            .map_err(|e| Error::Parse {
                line: count_line + 1,
                msg: e.to_string(),
            })?
            .with_properties(properties);
        frames.push(config);
        cursor = comment_line + 1 + n;
    }
    Ok(frames)
}

/// Serializes frames; the inverse of [`read_xyz`]. Empty input gives an
/// empty string.
pub fn write_xyz(configs: &[Configuration]) -> Result<String> {
    let mut out = String::new();
    for config in configs {
        writeln!(out, "{}", config.len()).unwrap();
        let mut tokens: Vec<String> = Vec::new();
        if let Some(cell) = config.cell() {
            let flat: Vec<String> = cell
                .iter()
                .flat_map(|row| row.iter().map(|v| format!("{v}")))
                .collect();
            tokens.push(format!("Lattice=\"{}\"", flat.join(" ")));
        }
        if config.cell().is_some() || config.pbc().iter().any(|&b| b) {
            let flags: Vec<&str> = config
                .pbc()
                .iter()
                .map(|&b| if b { "T" } else { "F" })
                .collect();
            tokens.push(format!("pbc=\"{}\"", flags.join(" ")));
        }
        for (k, v) in &config.properties {
            if v.contains(char::is_whitespace) || v.is_empty() {
                tokens.push(format!("{k}=\"{v}\""));
            } else {
                tokens.push(format!("{k}={v}"));
            }
        }
        writeln!(out, "{}", tokens.join(" ")).unwrap();
        for (z, p) in config.species().iter().zip(config.positions()) {
            writeln!(out, "{} {} {} {}", element_symbol(*z)?, p[0], p[1], p[2]).unwrap();
        }
    }
    Ok(out)
}

type CommentParts = (Option<[[f64; 3]; 3]>, [bool; 3], BTreeMap<String, String>);

fn parse_comment(line: &str, line_no: usize) -> Result<CommentParts> {
    let mut cell = None;
    let mut pbc = [false; 3];
    let mut properties = BTreeMap::new();

    for (key, value) in tokenize_key_values(line, line_no)? {
        match key.as_str() {
            "Lattice" => {
                let nums: Vec<f64> = value
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<f64>().map_err(|_| Error::Parse {
                            line: line_no,
                            msg: format!("malformed Lattice entry `{t}`"),
                        })
                    })
                    .collect::<Result<_>>()?;
                if nums.len() != 9 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("Lattice needs 9 floats, got {}", nums.len()),
                    });
                }
                cell = Some([
                    [nums[0], nums[1], nums[2]],
                    [nums[3], nums[4], nums[5]],
                    [nums[6], nums[7], nums[8]],
                ]);
            }
            "pbc" => {
                let flags: Vec<&str> = value.split_whitespace().collect();
                if flags.len() != 3 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("pbc needs 3 flags, got `{value}`"),
                    });
                }
                for (d, f) in flags.iter().enumerate() {
                    pbc[d] = match *f {
                        "T" | "t" | "true" | "True" => true,
                        "F" | "f" | "false" | "False" => false,
                        other => {
                            return Err(Error::Parse {
                                line: line_no,
                                msg: format!("malformed pbc flag `{other}`"),
                            })
                        }
                    };
                }
            }
            _ => {
                properties.insert(key, value);
            }
        }
    }
    Ok((cell, pbc, properties))
}

/// Splits a comment line into `key=value` pairs, honoring double quotes.
fn tokenize_key_values(line: &str, line_no: usize) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    let mut chars = line.chars().peekable();
    loop {
        while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
            chars.next();
        }
        let mut key = String::new();
        while let Some(&c) = chars.peek() {
            if c == '=' || c.is_whitespace() {
                break;
            }
            key.push(c);
            chars.next();
        }
        if key.is_empty() {
            break;
        }
        if chars.peek() == Some(&'=') {
            chars.next();
            let mut value = String::new();
            if chars.peek() == Some(&'"') {
                chars.next();
                let mut closed = false;
                for c in chars.by_ref() {
                    if c == '"' {
                        closed = true;
                        break;
                    }
                    value.push(c);
                }
                if !closed {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("unterminated quote in value of `{key}`"),
                    });
                }
            } else {
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() {
                        break;
                    }
                    value.push(c);
                    chars.next();
                }
            }
            pairs.push((key, value));
        } else {
            // bare token: keep as a flag with empty value
            pairs.push((key, String::new()));
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_ATOM: &str =
        "1\nLattice=\"10 0 0 0 10 0 0 0 10\" pbc=\"T T T\"\nSi 0 0 0\n";

    #[test]
    fn parses_single_frame() {
        let frames = read_xyz(ONE_ATOM).unwrap();
        assert_eq!(frames.len(), 1);
        let f = &frames[0];
        assert_eq!(f.len(), 1);
        assert_eq!(f.species(), &[14]);
        assert_eq!(f.pbc(), [true; 3]);
        assert_eq!(f.cell().unwrap()[0][0], 10.0);
    }

    #[test]
    fn parses_two_concatenated_frames() {
        let text = format!("{ONE_ATOM}{ONE_ATOM}");
        assert_eq!(read_xyz(&text).unwrap().len(), 2);
    }

    #[test]
    fn preserves_unknown_comment_keys() {
        let text = "1\nenergy=-4.25 note=\"hello world\"\nSi 1 2 3\n";
        let frames = read_xyz(text).unwrap();
        assert_eq!(frames[0].properties.get("energy").unwrap(), "-4.25");
        assert_eq!(frames[0].properties.get("note").unwrap(), "hello world");
    }

    #[test]
    fn count_mismatch_reports_line() {
        let text = "3\ncomment=1\nSi 0 0 0\nSi 1 0 0\n";
        match read_xyz(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_float_reports_line() {
        let text = "1\nc=1\nSi 0 zero 0\n";
        match read_xyz(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_element_reports_line() {
        let text = "1\nc=1\nQq 0 0 0\n";
        assert!(matches!(read_xyz(text), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn round_trip_is_exact() {
        let frames = read_xyz(ONE_ATOM).unwrap();
        let text = write_xyz(&frames).unwrap();
        let back = read_xyz(&text).unwrap();
        assert_eq!(frames, back);
    }

    #[test]
    fn empty_list_writes_empty_string() {
        assert_eq!(write_xyz(&[]).unwrap(), "");
    }

    #[test]
    fn round_trip_perturbed_lattice_frame() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let n = 108;
        let positions: Vec<[f64; 3]> = (0..n)
            .map(|_| {
                [
                    rng.gen_range(0.0..16.0) + rng.gen::<f64>() * 1e-7,
                    rng.gen_range(0.0..16.0),
                    rng.gen_range(0.0..16.0),
                ]
            })
            .collect();
        let cell = [[16.3, 0.0, 0.0], [0.1, 16.29, 0.0], [0.0, -0.2, 16.31]];
        let mut config =
            Configuration::new(vec![14; n], positions, Some(cell), [true; 3]).unwrap();
        config
            .properties
            .insert("energy".into(), "-467.1234567890123".into());
        let text = write_xyz(std::slice::from_ref(&config)).unwrap();
        let back = read_xyz(&text).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].cell(), config.cell());
        assert_eq!(back[0].pbc(), config.pbc());
        assert_eq!(back[0].properties, config.properties);
        let max_err = config
            .positions()
            .iter()
            .zip(back[0].positions())
            .flat_map(|(a, b)| (0..3).map(move |c| (a[c] - b[c]).abs()))
            .fold(0.0f64, f64::max);
        assert!(max_err <= 1e-12, "round-trip error {max_err}");
    }
}
