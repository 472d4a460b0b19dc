//! Text forms of points and parameters.
//!
//! Accepted: integers and fractions `p/q`, surds `(a+b*sqrt(d))/c` (the `/c`
//! is optional), the names `g`, `G`, `gamma`, `Gamma`, `alphahat(a)`, and
//! decimals. A decimal point becomes an `f64`; a decimal parameter becomes the
//! exact decimal fraction it spells.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{consts, surd_normalize, ExactReal};
use crate::number::{Alpha, Number};

fn bad(s: &str) -> Error {
    Error::Parse(format!("cannot read {s:?}"))
}

fn int(s: &str) -> Result<BigInt> {
    let t = s.strip_prefix('+').unwrap_or(s);
    if t.is_empty() || !t.trim_start_matches('-').chars().all(|c| c.is_ascii_digit()) || t.trim_start_matches('-').is_empty() {
        return Err(bad(s));
    }
    t.parse::<BigInt>().map_err(|_| bad(s))
}

fn normalize(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).map(|c| if c == '\u{2212}' { '-' } else { c }).collect()
}

fn named(s: &str) -> Result<Option<ExactReal>> {
    Ok(match s {
        "g" => Some(consts::g()),
        "G" => Some(consts::big_g()),
        "gamma" => Some(consts::gamma()),
        "Gamma" => Some(consts::big_gamma()),
        _ => match s.strip_prefix("alphahat(").and_then(|r| r.strip_suffix(')')) {
            Some(a) => {
                let a: i64 = a.parse().map_err(|_| bad(s))?;
                if a < 1 {
                    return Err(Error::Parse(format!("alphahat needs a positive integer, got {a}")));
                }
                Some(consts::alpha_hat(a))
            }
            None => None,
        },
    })
}

fn fraction(s: &str) -> Result<ExactReal> {
    match s.split_once('/') {
        Some((p, q)) => {
            let q = int(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(ExactReal::Rational(BigRational::new(int(p)?, q)))
        }
        None => Ok(ExactReal::int(int(s)?)),
    }
}

/// `(a+b*sqrt(d))/c`, `(a-b*sqrt(d))`, `(b*sqrt(d))/c`.
fn surd(s: &str) -> Result<ExactReal> {
    let inner_end = s.rfind(')').ok_or_else(|| bad(s))?;
    let (body, rest) = (&s[..=inner_end], &s[inner_end + 1..]);
    let c = match rest {
        "" => BigInt::one(),
        r => int(r.strip_prefix('/').ok_or_else(|| bad(s))?)?,
    };
    let body = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).ok_or_else(|| bad(s))?;
    let root_at = body.find("sqrt(").ok_or_else(|| bad(s))?;
    let d_str = body[root_at + 5..].strip_suffix(')').ok_or_else(|| bad(s))?;
    let d: i64 = d_str.parse().map_err(|_| bad(s))?;
    let head = body[..root_at].strip_suffix('*').unwrap_or(&body[..root_at]);
    // split head into a and a signed b at the last sign that is not leading
    let split = head.char_indices().rev().find(|&(i, ch)| i > 0 && (ch == '+' || ch == '-')).map(|(i, _)| i);
    let (a, b) = match split {
        Some(i) => (int(&head[..i])?, &head[i..]),
        None => (BigInt::zero(), head),
    };
    let b = match b {
        "" | "+" => BigInt::one(),
        "-" => -BigInt::one(),
        other => int(other)?,
    };
    if c.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    surd_normalize(a, b, c, d).map_err(|e| Error::Parse(e.to_string()))
}

fn decimal_exact(s: &str) -> Result<ExactReal> {
    let (neg, t) = match s.strip_prefix('-') {
        Some(t) => (true, t),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (ip, fp) = t.split_once('.').ok_or_else(|| bad(s))?;
    if ip.is_empty() && fp.is_empty() || !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad(s));
    }
    let digits: BigInt = format!("{ip}{fp}").parse().map_err(|_| bad(s))?;
    let den = num_traits::pow(BigInt::from(10), fp.len());
    let r = BigRational::new(if neg { -digits } else { digits }, den);
    Ok(ExactReal::Rational(r))
}

fn exact(s: &str) -> Result<Option<ExactReal>> {
    if let Some(v) = named(s)? {
        return Ok(Some(v));
    }
    if s.starts_with('(') || s.contains("sqrt(") {
        return surd(s).map(Some);
    }
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Ok(None);
    }
    fraction(s).map(Some)
}

/// A point: exact when the literal is exact, double-double otherwise.
pub fn parse_number(s: &str) -> Result<Number> {
    let t = normalize(s);
    if t.is_empty() {
        return Err(bad(s));
    }
    match exact(&t)? {
        Some(e) => Ok(Number::Exact(e)),
        None => {
            let v: f64 = t.parse().map_err(|_| bad(s))?;
            if !v.is_finite() {
                return Err(bad(s));
            }
            Ok(Number::from(v))
        }
    }
}

/// The parameter `alpha`; decimals are read as exact decimal fractions.
pub fn parse_alpha(s: &str) -> Result<Alpha> {
    let t = normalize(s);
    let e = match exact(&t)? {
        Some(e) => e,
        None => decimal_exact(&t)?,
    };
    Alpha::new(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str) -> ExactReal {
        parse_number(s).unwrap().as_exact().unwrap().clone()
    }

    #[test]
    fn names() {
        assert_eq!(ex("g"), consts::g());
        assert_eq!(ex("Gamma"), consts::big_gamma());
        assert_eq!(ex("alphahat(2)"), consts::alpha_hat(2));
    }

    #[test]
    fn surds() {
        assert_eq!(ex("(-1+1*sqrt(5))/2"), consts::g());
        assert_eq!(ex("(\u{2212}1+1*sqrt(5))/2"), consts::g());
        assert_eq!(ex("( -1 + sqrt(2) )"), consts::gamma());
        assert_eq!(ex("(1+sqrt(5))/2"), consts::big_g());
        assert_eq!(ex("(3-2*sqrt(2))"), &consts::gamma() * &consts::gamma());
        assert_eq!(ex("(sqrt(8))/2"), surd_normalize(0, 1, 1, 2).unwrap());
        assert_eq!(ex("(1+1*sqrt(4))/3"), ExactReal::one());
    }

    #[test]
    fn fractions_and_decimals() {
        assert_eq!(ex("1/3"), ExactReal::ratio(1, 3).unwrap());
        assert_eq!(ex("-2/4"), ExactReal::ratio(-1, 2).unwrap());
        assert_eq!(ex("7"), ExactReal::int(7));
        match parse_number("0.414213562").unwrap() {
            Number::Approx(d) => assert_eq!(d.to_f64(), 0.414213562),
            Number::Exact(_) => panic!("decimal point should be a float"),
        }
        assert_eq!(parse_alpha("0.7").unwrap().exact(), &ExactReal::ratio(7, 10).unwrap());
        assert_eq!(parse_alpha("1/2").unwrap(), Alpha::half());
    }

    #[test]
    fn rejects() {
        for s in ["", "1/0", "abc", "(1+sqrt(x))/2", "alphahat(0)", "1/2/3", "0.7.1", "(1+sqrt(5))/0"] {
            assert!(parse_number(s).is_err(), "{s}");
        }
        assert!(matches!(parse_alpha("0.3"), Err(Error::AlphaOutOfRange(_))));
    }
}
