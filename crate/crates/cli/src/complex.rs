//! Complex scalars on the command line: `1.5`, `1.5+0.3i`, `i`, `-2i`, `2.5e-1-1e2j`.

use num_complex::Complex64;

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let cleaned: String = text
        .trim()
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .collect();
    if cleaned.is_empty() {
        return Err("empty complex number".into());
    }
    let bad = || format!("invalid complex number {text:?}");
    let Some(body) = cleaned.strip_suffix(['i', 'j']) else {
        return parse_real(&cleaned)
            .map(|re| Complex64::new(re, 0.0))
            .ok_or_else(bad);
    };
    // Split at the last sign that is not the leading one or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k]).ok_or_else(bad)?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other).ok_or_else(bad)?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_real(text: &str) -> Option<f64> {
    text.parse::<f64>().ok().filter(|x| x.is_finite())
}
