//! Locale-independent number formatting: 12 significant digits, fixed
//! notation for `1e-4 <= |x| < 1e12`, scientific otherwise.

const DIGITS: usize = 12;

pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".to_owned() } else if x > 0.0 { "inf".to_owned() } else { "-inf".to_owned() };
    }
    // exponent after rounding to DIGITS significant digits
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}")).to_owned()
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Rounds to the printed precision, for JSON datasets.
pub fn rounded(x: f64) -> f64 {
    if x.is_finite() {
        num(x).parse().expect("formatted number parses")
    } else {
        x
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_range() {
        assert_eq!(num(0.25), "0.25");
        assert_eq!(num(1.0 / 3.0), "0.333333333333");
        assert_eq!(num(-2.0), "-2");
        assert_eq!(num(0.0001), "0.0001");
        assert_eq!(num(123456789012.0), "123456789012");
        assert_eq!(num(std::f64::consts::FRAC_PI_4), "0.785398163397");
    }

    #[test]
    fn scientific_range() {
        assert_eq!(num(2.5e-16), "2.5e-16");
        assert_eq!(num(1e15), "1e15");
        assert_eq!(num(-1.0 / 3.0 * 1e-7), "-3.33333333333e-8");
        assert_eq!(num(0.00009999), "9.999e-5");
    }

    #[test]
    fn rounding_carries_into_exponent() {
        assert_eq!(num(9.9999999999999), "10");
        assert_eq!(num(999999999999.9), "1e12");
    }

    #[test]
    fn specials() {
        assert_eq!(num(0.0), "0");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(f64::NAN), "nan");
        assert_eq!(opt(None), "");
    }
}
