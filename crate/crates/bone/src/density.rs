use num_rational::Ratio;

use crate::error::BoneError;

pub type Density = Ratio<u64>;

/// Token count for density `rho` at capacity `capacity`, rounding half away
/// from zero.
pub fn encode_density(rho: Density, capacity: u64) -> Result<u64, BoneError> {
    if capacity == 0 {
        return Err(BoneError::Capacity);
    }
    if rho > Density::from_integer(1) {
        return Err(BoneError::DensityRange(format_density(rho)));
    }
    let (n, d) = (*rho.numer() as u128, *rho.denom() as u128);
    let product = n * capacity as u128;
    let (q, r) = (product / d, product % d);
    Ok((q + u128::from(2 * r >= d)) as u64)
}

/// `n / capacity`.
pub fn decode_density(n: u64, capacity: u64) -> Result<Density, BoneError> {
    if capacity == 0 {
        return Err(BoneError::Capacity);
    }
    if n > capacity {
        return Err(BoneError::TokensRange { n, capacity });
    }
    Ok(Density::new(n, capacity))
}

/// Parses `0.4`, `.25`, `1`, or `3/8`; the value must lie in `[0, 1]`.
pub fn parse_density(text: &str) -> Result<Density, BoneError> {
    let bad = || BoneError::DensitySyntax(text.to_string());
    let t = text.trim();
    let value = if let Some((n, d)) = t.split_once('/') {
        let n = digits(n.trim(), text)?;
        let d = digits(d.trim(), text)?;
        if d == 0 {
            return Err(bad());
        }
        Density::new(n, d)
    } else {
        let (whole, frac) = t.split_once('.').unwrap_or((t, ""));
        if whole.is_empty() && frac.is_empty() || frac.len() > 18 {
            return Err(bad());
        }
        let whole = if whole.is_empty() {
            0
        } else {
            digits(whole, text)?
        };
        let frac_value = if frac.is_empty() {
            0
        } else {
            digits(frac, text)?
        };
        let scale = 10u64.pow(frac.len() as u32);
        let numer = whole
            .checked_mul(scale)
            .and_then(|w| w.checked_add(frac_value))
            .ok_or_else(|| BoneError::DensityRange(text.to_string()))?;
        Density::new(numer, scale)
    };
    if value > Density::from_integer(1) {
        return Err(BoneError::DensityRange(text.to_string()));
    }
    Ok(value)
}

fn digits(s: &str, text: &str) -> Result<u64, BoneError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(BoneError::DensitySyntax(text.to_string()));
    }
    s.parse()
        .map_err(|_| BoneError::DensityRange(text.to_string()))
}

/// Plain decimal text: exact when the fraction terminates, otherwise
/// rounded to six places.
pub fn format_density(rho: Density) -> String {
    let (n, d) = (*rho.numer() as u128, *rho.denom() as u128);
    let mut rest = d;
    for p in [2, 5] {
        while rest % p == 0 {
            rest /= p;
        }
    }
    let places = if rest == 1 {
        (0..=18).find(|&k| (10u128.pow(k) % d) == 0).unwrap_or(6)
    } else {
        6
    };
    let scale = 10u128.pow(places);
    let product = (n % d) * scale;
    let (q, r) = (product / d, product % d);
    let scaled = (n / d) * scale + q + u128::from(2 * r >= d);
    let (whole, frac) = (scaled / scale, scaled % scale);
    if places == 0 {
        return whole.to_string();
    }
    let frac = format!("{frac:0width$}", width = places as usize);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        whole.to_string()
    } else {
        format!("{whole}.{frac}")
    }
}
