use std::f64::consts::{FRAC_PI_4, PI};

/// Parses radians, `max` (pi/4) or multiples of pi such as `pi/4`,
/// `3pi/16` and `3*pi/16`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t: String = text.trim().to_ascii_lowercase().chars().filter(|c| !c.is_whitespace()).collect();
    let value = if t == "max" {
        FRAC_PI_4
    } else if let Some(at) = t.find("pi") {
        let coeff = match t[..at].trim_end_matches('*') {
            "" => 1.0,
            c => c.parse::<f64>().map_err(|_| format!("bad coefficient in angle {text:?}"))?,
        };
        let denom = match &t[at + 2..] {
            "" => 1.0,
            rest => rest
                .strip_prefix('/')
                .ok_or_else(|| format!("expected /denominator in angle {text:?}"))?
                .parse::<f64>()
                .map_err(|_| format!("bad denominator in angle {text:?}"))?,
        };
        if denom == 0.0 {
            return Err(format!("zero denominator in angle {text:?}"));
        }
        coeff * PI / denom
    } else {
        t.parse::<f64>().map_err(|_| format!("bad angle {text:?}"))?
    };
    if !value.is_finite() {
        return Err(format!("angle {text:?} is not finite"));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_angle("max").unwrap(), FRAC_PI_4);
        assert_eq!(parse_angle("pi/4").unwrap(), FRAC_PI_4);
        assert_eq!(parse_angle("3pi/16").unwrap(), 3.0 * PI / 16.0);
        assert_eq!(parse_angle("3*pi/16").unwrap(), 3.0 * PI / 16.0);
        assert_eq!(parse_angle(" PI ").unwrap(), PI);
        assert_eq!(parse_angle("1.25").unwrap(), 1.25);
        for bad in ["", "pi/0", "pi4", "x", "inf", "2pi/a"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }
}
