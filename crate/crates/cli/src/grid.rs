//! Angle literals and grid specifications.

use std::f64::consts::PI;

/// Parses `pi`, `2pi/25`, `0.5pi`, `1.5708` or `3/4`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let numerator = match num.strip_suffix("pi") {
        Some(coef) => {
            let c = match coef.trim() {
                "" => 1.0,
                "-" => -1.0,
                c => c
                    .parse::<f64>()
                    .map_err(|_| format!("bad angle {text:?}"))?,
            };
            c * PI
        }
        None => num
            .parse::<f64>()
            .map_err(|_| format!("bad angle {text:?}"))?,
    };
    let value = match den {
        Some(d) => {
            let d: f64 = d
                .parse()
                .map_err(|_| format!("bad denominator in {text:?}"))?;
            if d == 0.0 {
                return Err(format!("zero denominator in {text:?}"));
            }
            numerator / d
        }
        None => numerator,
    };
    if !value.is_finite() {
        return Err(format!("angle {text:?} is not finite"));
    }
    Ok(value)
}

/// Expands a grid specification.
///
/// * `step:count` gives `k·step` for `k = 1..=count`.
/// * `start:stop:count`, with an integer `count`, gives `count` equally
///   spaced points including both ends.
/// * `start:stop:step`, with a decimal `step`, gives `start + k·step` up to `stop`.
///
/// Every component accepts the angle literals of [`parse_angle`].
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [step, count] => {
            let step = parse_angle(step)?;
            let count = parse_count(count)?;
            Ok((1..=count).map(|k| snap(k as f64 * step, &[PI])).collect())
        }
        [start, stop, last] => {
            let (a, b) = (parse_angle(start)?, parse_angle(stop)?);
            if b < a {
                return Err(format!("grid {text:?} runs backwards"));
            }
            if last.chars().all(|c| c.is_ascii_digit()) {
                let n = parse_count(last)?;
                if n == 1 {
                    return Ok(vec![a]);
                }
                let h = (b - a) / (n - 1) as f64;
                Ok((0..n)
                    .map(|k| if k == n - 1 { b } else { a + k as f64 * h })
                    .collect())
            } else {
                let h = parse_angle(last)?;
                if !(h > 0.0) {
                    return Err(format!("grid step in {text:?} must be positive"));
                }
                let n = ((b - a) / h + 1e-9).floor() as usize;
                if n > 10_000_000 {
                    return Err(format!("grid {text:?} has too many points"));
                }
                Ok((0..=n).map(|k| snap(a + k as f64 * h, &[b, PI])).collect())
            }
        }
        _ => Err(format!(
            "grid {text:?} must be step:count, start:stop:count or start:stop:step"
        )),
    }
}

/// Replace `x` by an anchor it matches up to accumulated rounding, so that
/// `pi/25:25` ends exactly at π.
fn snap(x: f64, anchors: &[f64]) -> f64 {
    anchors
        .iter()
        .copied()
        .find(|a| (x - a).abs() <= 1e-12 * a.abs().max(1.0))
        .unwrap_or(x)
}

fn parse_count(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("point count {text:?} must be a positive integer")),
    }
}

/// Parses `re` or `re,im`.
pub fn parse_complex(text: &str) -> Result<(f64, f64), String> {
    let bad = || format!("bad complex number {text:?}; use re or re,im");
    let mut it = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()));
    let re = it.next().ok_or_else(bad)??;
    let im = it.next().transpose()?.unwrap_or(0.0);
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::approx_constant)]
    fn angle_literals() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("2pi/25").unwrap(), 2.0 * PI / 25.0);
        assert_eq!(parse_angle("31pi/32").unwrap(), 31.0 * PI / 32.0);
        assert_eq!(parse_angle("0.5pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_angle("1.5708").unwrap(), 1.5708);
        assert_eq!(parse_angle("3/4").unwrap(), 0.75);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("tau").is_err());
    }

    #[test]
    fn grids() {
        let g = parse_grid("2pi/25:12").unwrap();
        assert_eq!(g.len(), 12);
        assert_eq!(g[11], 12.0 * (2.0 * PI / 25.0));
        let g = parse_grid("0:pi:200").unwrap();
        assert_eq!((g.len(), g[0], g[199]), (200, 0.0, PI));
        let g = parse_grid("8:50:0.1").unwrap();
        assert_eq!(g.len(), 421);
        assert_eq!(g[420], 50.0);
        assert_eq!(*parse_grid("pi/25:25").unwrap().last().unwrap(), PI);
        assert_eq!(*parse_grid("0:pi:pi/7").unwrap().last().unwrap(), PI);
        assert!(parse_grid("1:0:5").is_err());
        assert!(parse_grid("pi:0").is_err());
        assert!(parse_grid("1").is_err());
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.5").unwrap(), (0.5, 0.0));
        assert_eq!(parse_complex("0.5,-1").unwrap(), (0.5, -1.0));
        assert!(parse_complex("a").is_err());
        assert!(parse_complex("1,2,3").is_err());
    }
}
