//! Argument lists: `1..12`, `2,5,9`, `2.5,3.5+1i`.

pub fn int_list(s: &str) -> Result<Vec<i64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: i64 = a.trim().parse().map_err(|_| format!("bad range start in `{part}`"))?;
            let b: i64 = b.trim().parse().map_err(|_| format!("bad range end in `{part}`"))?;
            if b < a {
                return Err(format!("empty range `{part}`"));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| format!("`{part}` is not an integer"))?);
        }
    }
    if out.is_empty() {
        return Err("no values given".into());
    }
    Ok(out)
}

/// `re`, `re+imi`, `re-imi` or `imi`.
pub fn complex(s: &str) -> Result<(f64, f64), String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("`{s}` is not a number of the form a, a+bi or a-bi");
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('I')) else {
        return t.parse().map(|re| (re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not an exponent sign or the leading one
    let bytes = body.as_bytes();
    let cut = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let im_of = |x: &str| -> Result<f64, String> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            x => x.parse().map_err(|_| bad()),
        }
    };
    match cut {
        Some(i) => Ok((body[..i].parse().map_err(|_| bad())?, im_of(&body[i..])?)),
        None => Ok((0.0, im_of(body)?)),
    }
}

/// Comma list of complex points; integer ranges are expanded.
pub fn complex_list(s: &str) -> Result<Vec<(f64, f64)>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part.contains("..") {
            out.extend(int_list(part)?.into_iter().map(|n| (n as f64, 0.0)));
        } else {
            out.push(complex(part)?);
        }
    }
    if out.is_empty() {
        return Err("no values given".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(int_list("1..4,9").unwrap(), vec![1, 2, 3, 4, 9]);
        assert!(int_list("4..1").is_err());
        assert!(int_list("a").is_err());
    }

    #[test]
    fn complex_forms() {
        assert_eq!(complex("2.5").unwrap(), (2.5, 0.0));
        assert_eq!(complex("3.5+1.0i").unwrap(), (3.5, 1.0));
        assert_eq!(complex("-1e-3-2i").unwrap(), (-1e-3, -2.0));
        assert_eq!(complex("-i").unwrap(), (0.0, -1.0));
        assert_eq!(complex("1e+2+i").unwrap(), (100.0, 1.0));
        assert!(complex("x").is_err());
        assert_eq!(complex_list("2..3,0.5-1i").unwrap(), vec![(2.0, 0.0), (3.0, 0.0), (0.5, -1.0)]);
    }
}
