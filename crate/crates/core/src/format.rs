//! Output encodings for expansions. Floats are always written with 17
//! significant digits so output is byte-for-byte reproducible.

use std::io;

use num_complex::Complex64;
use serde::Serialize;

use crate::expansion::PauliExpansion;
use crate::pauli::Alphabet;

/// `serde_json` formatter that writes every float as `{:.16e}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FixedDigits;

impl serde_json::ser::Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{:.16e}", unsigned_zero(value))
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Maps `-0.0` to `0.0` so signed zeros never reach the output.
pub fn unsigned_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

/// Serializes `value` as compact JSON with fixed-digit floats.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

#[derive(Serialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct CoeffJson {
    pauli: String,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct ExpansionJson {
    n: usize,
    beta: ComplexJson,
    coeffs: Vec<CoeffJson>,
}

/// `{"n", "beta": {"re", "im"}, "coeffs": [{"pauli", "re", "im"}]}`, ascending code order.
pub fn expansion_json(e: &PauliExpansion, beta: Complex64, alphabet: Alphabet) -> String {
    let doc = ExpansionJson {
        n: e.num_qubits(),
        beta: ComplexJson {
            re: beta.re,
            im: beta.im,
        },
        coeffs: e
            .strings()
            .map(|(p, c)| CoeffJson {
                pauli: p.format(alphabet),
                re: c.re,
                im: c.im,
            })
            .collect(),
    };
    to_json_string(&doc).expect("plain data serializes")
}

/// Aligned columns: `pauli  re  im`.
pub fn expansion_text(e: &PauliExpansion, beta: Complex64, alphabet: Alphabet) -> String {
    let width = e.num_qubits().max(5);
    let mut out = format!(
        "# n = {}, beta = {:.16e} {:+.16e}i\n{:<width$}  {:>24}  {:>24}\n",
        e.num_qubits(),
        unsigned_zero(beta.re),
        unsigned_zero(beta.im),
        "pauli",
        "re",
        "im",
    );
    for (p, c) in e.strings() {
        out.push_str(&format!(
            "{:<width$}  {:>24.16e}  {:>24.16e}\n",
            p.format(alphabet),
            unsigned_zero(c.re),
            unsigned_zero(c.im)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_layout() {
        let mut e = PauliExpansion::identity(2).unwrap();
        e.add(&"13".parse().unwrap(), Complex64::new(-0.25, 1e-20))
            .unwrap();
        let text = expansion_json(&e, Complex64::new(0.0, 1.5), Alphabet::Letters);
        assert_eq!(
            text,
            r#"{"n":2,"beta":{"re":0.0000000000000000e0,"im":1.5000000000000000e0},"coeffs":[{"pauli":"II","re":1.0000000000000000e0,"im":0.0000000000000000e0},{"pauli":"XZ","re":-2.5000000000000000e-1,"im":9.9999999999999995e-21}]}"#
        );
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["coeffs"][1]["re"], -0.25);
    }

    #[test]
    fn negative_zero_is_written_unsigned() {
        let mut e = PauliExpansion::zero(1).unwrap();
        e.add(&"1".parse().unwrap(), Complex64::new(-0.0, -0.0))
            .unwrap();
        let text = expansion_json(&e, Complex64::new(-0.0, 1.0), Alphabet::Digits);
        assert!(!text.contains("-0.0"), "{text}");
        assert!(!expansion_text(&e, Complex64::new(1.0, 0.0), Alphabet::Digits).contains("-0.0"));
    }

    #[test]
    fn text_layout_is_aligned() {
        let e = PauliExpansion::identity(3).unwrap();
        let text = expansion_text(&e, Complex64::new(1.0, 0.0), Alphabet::Digits);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1].len(), lines[2].len());
        assert!(lines[2].starts_with("000  "));
    }
}
