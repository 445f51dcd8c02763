//! Parsing of `--state` amplitude lists such as `0.6, 0.8i, -0.5+0.5i`.

use qroute_core::ComplexScalar;

fn parse_real(s: &str, token: &str) -> Result<f64, String> {
    let value = match s {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => s
            .parse::<f64>()
            .map_err(|_| format!("invalid amplitude `{token}`"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("amplitude `{token}` is not finite"))
    }
}

/// Parses one complex number: `a`, `bi`, `a+bi`, `a-bi` (with `j`
/// accepted for `i`, and `i` alone meaning `1i`).
pub fn parse_complex(token: &str) -> Result<ComplexScalar, String> {
    let s: String = token.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty amplitude".into());
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(ComplexScalar::new(parse_real(&s, token)?, 0.0));
    };
    // Split at the last sign that is not part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k], token)?, parse_real(&body[k..], token)?),
        None => (0.0, parse_real(body, token)?),
    };
    Ok(ComplexScalar::new(re, im))
}

/// Parses a comma-separated amplitude list.
pub fn parse_state(text: &str) -> Result<Vec<ComplexScalar>, String> {
    text.split(',').map(parse_complex).collect()
}

/// Normalizes `psi`, returning it with the norm it had.
pub fn normalize(psi: Vec<ComplexScalar>) -> Result<(Vec<ComplexScalar>, f64), String> {
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm <= 1e-12 {
        return Err("state vector is zero".into());
    }
    Ok((psi.into_iter().map(|z| z / norm).collect(), norm))
}
