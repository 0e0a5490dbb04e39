//! Deterministic number formatting shared by every emitted artifact.
//!
//! Reals are printed like C's `%.17g`: 17 significant digits, trailing
//! zeros trimmed, scientific notation outside `1e-5 ..= 1e17`. Seventeen
//! digits always round-trip an `f64`.

use serde::Serializer;

/// Formats `x` with 17 significant digits in `%g` style.
pub fn g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0');
    t.trim_end_matches('.').to_string()
}

/// Serializes a float as a JSON number carrying exactly the [`g17`] text.
///
/// Non-finite values become `null`.
pub fn serialize_g17<S: Serializer>(x: &f64, ser: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    json_number(*x).serialize(ser)
}

pub fn serialize_g17_slice<S: Serializer>(xs: &[f64], ser: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = ser.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&json_number(*x))?;
    }
    seq.end()
}

pub fn serialize_g17_opt<S: Serializer>(x: &Option<f64>, ser: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    match x {
        Some(v) => json_number(*v).serialize(ser),
        None => ser.serialize_none(),
    }
}

/// A `serde_json::Value` number with the [`g17`] text, or `null`.
pub fn json_number(x: f64) -> serde_json::Value {
    if !x.is_finite() {
        return serde_json::Value::Null;
    }
    let n: serde_json::Number = g17(x).parse().expect("g17 output is a JSON number");
    serde_json::Value::Number(n)
}

/// Renders `x` as a small rational multiple of pi (`pi/5`, `-2pi/3`, `0`)
/// when it lies within `1e-12` of one with denominator at most 24.
pub fn pi_multiple(x: f64) -> Option<String> {
    if !x.is_finite() {
        return None;
    }
    let ratio = x / std::f64::consts::PI;
    for den in 1..=24_i64 {
        let num = (ratio * den as f64).round();
        if (num * std::f64::consts::PI / den as f64 - x).abs() <= 1e-12 {
            let num = num as i64;
            let g = num_integer::gcd(num, den);
            let (num, den) = if g == 0 { (0, 1) } else { (num / g, den / g) };
            return Some(match (num, den) {
                (0, _) => "0".to_string(),
                (1, 1) => "pi".to_string(),
                (-1, 1) => "-pi".to_string(),
                (n, 1) => format!("{n}pi"),
                (1, d) => format!("pi/{d}"),
                (-1, d) => format!("-pi/{d}"),
                (n, d) => format!("{n}pi/{d}"),
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_matches_c_printf() {
        assert_eq!(g17(-12.0), "-12");
        assert_eq!(g17(0.25), "0.25");
        assert_eq!(g17(0.1), "0.10000000000000001");
        assert_eq!(g17(std::f64::consts::PI), "3.1415926535897931");
        assert_eq!(g17(1.5e20), "1.5e+20");
        assert_eq!(g17(2.5e-7), "2.4999999999999999e-07");
        assert_eq!(g17(0.0), "0");
        assert_eq!(g17(f64::INFINITY), "inf");
    }

    #[test]
    fn g17_round_trips() {
        for &x in &[1.0 / 3.0, -7.123456789e-3, 6.0 / 5.0, 1e300, 5e-324] {
            assert_eq!(g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn pi_multiples() {
        use std::f64::consts::PI;
        assert_eq!(pi_multiple(PI / 5.0).as_deref(), Some("pi/5"));
        assert_eq!(pi_multiple(-2.0 * PI / 3.0).as_deref(), Some("-2pi/3"));
        assert_eq!(pi_multiple(0.0).as_deref(), Some("0"));
        assert_eq!(pi_multiple(2.0 * PI).as_deref(), Some("2pi"));
        assert_eq!(pi_multiple(1.0), None);
    }
}
