//! Numeric flag parsing with multiples of π spelled out literally
//! ("pi/2", "3pi/4", "-2pi"), so marginal-case delays land exactly on the
//! intended floating-point value instead of a user-typed truncation.

/// Parses `[coef]pi[/divisor]` or a plain decimal.
pub fn parse_float(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Some(idx) = t.find("pi") {
        let coef = match &t[..idx] {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c
                .parse::<f64>()
                .map_err(|_| format!("bad multiple of pi: {s:?}"))?,
        };
        let rest = &t[idx + 2..];
        let divisor = if rest.is_empty() {
            1.0
        } else if let Some(d) = rest.strip_prefix('/') {
            let d: f64 = d
                .parse()
                .map_err(|_| format!("bad divisor after pi: {s:?}"))?;
            if !d.is_finite() || d == 0.0 {
                return Err(format!("bad divisor after pi: {s:?}"));
            }
            d
        } else {
            return Err(format!("not a number: {s:?}"));
        };
        Ok(coef * std::f64::consts::PI / divisor)
    } else {
        t.parse::<f64>().map_err(|_| format!("not a number: {s:?}"))
    }
}
