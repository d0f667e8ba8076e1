//! Exact rational scalars: construction helpers, directed `f64` conversion,
//! and the JSON encodings shared by every report type.
//!
//! Rationals serialize as `[numerator, denominator]` pairs of decimal strings
//! so arbitrary-precision values survive JSON round trips. Interval endpoints
//! in reports are dyadic by construction and render as exact decimal strings.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational value of a finite `f64`.
pub fn rat_from_f64(x: f64) -> Rat {
    Rat::from_float(x).expect("non-finite float has no rational value")
}

/// Dyadic rational `m / 2^k` (negative `k` scales up).
pub fn dyadic(m: impl Into<BigInt>, k: i64) -> Rat {
    let m = m.into();
    if k >= 0 {
        Rat::new(m, BigInt::one() << (k as usize))
    } else {
        Rat::from_integer(m << ((-k) as usize))
    }
}

/// Nearest `f64` within one ulp, safe against numerator/denominator overflow.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer();
    let den = r.denom();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // Shift so the integer quotient carries ~80 significant bits.
    let shift = 80 - (nb - db);
    let q = if shift >= 0 {
        (num << (shift as usize)).div_floor(den)
    } else {
        num.div_floor(&(den << ((-shift) as usize)))
    };
    let qf = q.to_f64().unwrap_or(if q.is_negative() { f64::MIN } else { f64::MAX });
    let scaled = qf * (-shift as f64).exp2();
    if scaled.is_finite() {
        scaled
    } else if r.is_negative() {
        f64::MIN
    } else {
        f64::MAX
    }
}

/// Largest `f64` that is `<=` the rational (a certified lower bound).
pub fn rat_to_f64_floor(r: &Rat) -> f64 {
    let mut f = rat_to_f64(r);
    while &rat_from_f64(f) > r {
        f = next_down(f);
    }
    f
}

/// Smallest `f64` that is `>=` the rational (a certified upper bound).
pub fn rat_to_f64_ceil(r: &Rat) -> f64 {
    let mut f = rat_to_f64(r);
    while &rat_from_f64(f) < r {
        f = next_up(f);
    }
    f
}

pub fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    f64::from_bits(if x > 0.0 { bits + 1 } else { bits - 1 })
}

pub fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

/// Exact decimal rendering for rationals whose denominator is `2^a * 5^b`
/// (every dyadic endpoint qualifies). Falls back to `num/den` otherwise.
pub fn decimal_string(r: &Rat) -> String {
    let mut den = r.denom().clone();
    let mut twos = 0u64;
    let mut fives = 0u64;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    // r = num / (2^a 5^b); scale to k = max(a, b) decimal places.
    let k = twos.max(fives);
    let scale = BigInt::from(2).pow((k - twos) as u32) * BigInt::from(5).pow((k - fives) as u32);
    let scaled = r.numer() * scale;
    let (sign, mag) = (scaled.sign(), scaled.magnitude().to_string());
    let sign = if sign == Sign::Minus { "-" } else { "" };
    if k == 0 {
        return format!("{sign}{mag}");
    }
    let k = k as usize;
    let int_part = if mag.len() > k { &mag[..mag.len() - k] } else { "0" };
    let mut frac = String::new();
    if mag.len() < k {
        frac.push_str(&"0".repeat(k - mag.len()));
    }
    frac.push_str(&mag[mag.len().saturating_sub(k)..]);
    format!("{sign}{int_part}.{frac}")
}

/// Parses the output of [`decimal_string`] back to an exact rational.
pub fn parse_decimal(s: &str) -> Option<Rat> {
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.parse().ok()?;
        let den: BigInt = d.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rat::new(num, den));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().ok()?;
    let den = BigInt::from(10).pow(frac_part.len() as u32);
    Some(Rat::new(BigInt::from(sign) * num, den))
}

/// Serde adapter: one rational as `["num", "den"]`.
pub mod rat_serde {
    use super::*;
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([r.numer().to_string(), r.denom().to_string()])
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let [num, den] = <[String; 2]>::deserialize(d)?;
        let num: BigInt = num.parse().map_err(DeError::custom)?;
        let den: BigInt = den.parse().map_err(DeError::custom)?;
        if den.is_zero() {
            return Err(DeError::custom("zero denominator"));
        }
        Ok(Rat::new(num, den))
    }
}

/// Serde adapter: `Vec<Rat>` as a list of `["num", "den"]` pairs.
pub mod rat_vec_serde {
    use super::*;
    use serde::de::Error as DeError;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&[r.numer().to_string(), r.denom().to_string()])?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let raw = Vec::<[String; 2]>::deserialize(d)?;
        raw.into_iter()
            .map(|[num, den]| {
                let num: BigInt = num.parse().map_err(DeError::custom)?;
                let den: BigInt = den.parse().map_err(DeError::custom)?;
                if den.is_zero() {
                    return Err(DeError::custom("zero denominator"));
                }
                Ok(Rat::new(num, den))
            })
            .collect()
    }
}

/// Serde adapter: nested rational pattern lists.
pub mod rat_vec_vec_serde {
    use super::*;
    use serde::de::Error as DeError;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for row in v {
            let pairs: Vec<[String; 2]> = row
                .iter()
                .map(|r| [r.numer().to_string(), r.denom().to_string()])
                .collect();
            seq.serialize_element(&pairs)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let raw = Vec::<Vec<[String; 2]>>::deserialize(d)?;
        raw.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|[num, den]| {
                        let num: BigInt = num.parse().map_err(DeError::custom)?;
                        let den: BigInt = den.parse().map_err(DeError::custom)?;
                        if den.is_zero() {
                            return Err(DeError::custom("zero denominator"));
                        }
                        Ok(Rat::new(num, den))
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_f64_conversions_bracket_the_value() {
        let cases = [rat(1, 3), rat(-22, 7), rat(1, 1), dyadic(BigInt::from(123), 40)];
        for r in &cases {
            let lo = rat_to_f64_floor(r);
            let hi = rat_to_f64_ceil(r);
            assert!(&rat_from_f64(lo) <= r, "floor exceeded value for {r}");
            assert!(&rat_from_f64(hi) >= r, "ceil undershot value for {r}");
            assert!(hi - lo <= 2.0 * f64::EPSILON * (1.0 + lo.abs()));
        }
    }

    #[test]
    fn rat_to_f64_handles_huge_components() {
        let big = BigInt::from(1) << 4000usize;
        let r = Rat::new(big.clone(), big + 1);
        let f = rat_to_f64(&r);
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decimal_rendering_is_exact_for_dyadics() {
        let r = dyadic(BigInt::from(-45), 5); // -45/32
        let s = decimal_string(&r);
        assert_eq!(s, "-1.40625");
        assert_eq!(parse_decimal(&s).unwrap(), r);
        assert_eq!(decimal_string(&rat_int(7)), "7");
        assert_eq!(decimal_string(&rat(3, 10)), "0.3");
        // Non-decimal denominators fall back to fraction form, still exact.
        let third = rat(1, 3);
        assert_eq!(parse_decimal(&decimal_string(&third)).unwrap(), third);
    }

    #[test]
    fn serde_pairs_round_trip() {
        #[derive(serde::Serialize, serde::Deserialize)]
        struct W {
            #[serde(with = "rat_serde")]
            x: Rat,
            #[serde(with = "rat_vec_serde")]
            xs: Vec<Rat>,
        }
        let w = W { x: rat(-7, 12), xs: vec![rat_int(0), rat(5, 2)] };
        let js = serde_json::to_string(&w).unwrap();
        assert!(js.contains("[\"-7\",\"12\"]"), "{js}");
        let back: W = serde_json::from_str(&js).unwrap();
        assert_eq!(back.x, rat(-7, 12));
        assert_eq!(back.xs, vec![rat_int(0), rat(5, 2)]);
    }
}
