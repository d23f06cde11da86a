use std::f64::consts::PI;

use crate::error::{Error, Result};

const PI2_6: f64 = PI * PI / 6.0;

fn check_unit(function: &'static str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            function,
            value: x.to_string(),
            domain: "[0, 1]",
        });
    }
    Ok(())
}

fn li2_series(x: f64) -> f64 {
    let mut power = x;
    let mut sum = 0.0f64;
    for k in 1..400 {
        let kf = k as f64;
        let term = power / (kf * kf);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        power *= x;
    }
    sum
}

/// Li₂(x) = −∫₀ˣ ln(1−t)/t dt on [0, 1].
pub fn dilog(x: f64) -> Result<f64> {
    check_unit("dilog", x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(PI2_6);
    }
    if x <= 0.5 {
        Ok(li2_series(x))
    } else {
        Ok(PI2_6 - x.ln() * (-x).ln_1p() - li2_series(1.0 - x))
    }
}

/// Rogers dilogarithm L(x) = Li₂(x) + ½ ln(x) ln(1−x), endpoints by their limits.
pub fn rogers_l(x: f64) -> Result<f64> {
    check_unit("rogers_l", x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(PI2_6);
    }
    Ok(dilog(x)? + 0.5 * x.ln() * (-x).ln_1p())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn dilog_values() {
        assert_eq!(dilog(0.0).unwrap(), 0.0);
        assert_eq!(dilog(1.0).unwrap(), PI2_6);
        let ln2 = std::f64::consts::LN_2;
        assert_relative_eq!(
            dilog(0.5).unwrap(),
            PI * PI / 12.0 - ln2 * ln2 / 2.0,
            max_relative = 1e-15
        );
        // Li₂(x) → π²/6 from below
        assert!((dilog(1.0 - 1e-12).unwrap() - PI2_6).abs() < 1e-10);
    }

    #[test]
    fn dilog_golden() {
        assert_relative_eq!(
            dilog(0.25).unwrap(),
            0.267_652_639_082_732_6,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            dilog(0.9).unwrap(),
            1.299_714_723_004_958_8,
            max_relative = 1e-14
        );
    }

    #[test]
    fn rogers_values() {
        assert_eq!(rogers_l(0.0).unwrap(), 0.0);
        assert_eq!(rogers_l(1.0).unwrap(), PI2_6);
        assert_relative_eq!(rogers_l(0.5).unwrap(), PI * PI / 12.0, max_relative = 1e-15);
        assert!(rogers_l(1e-300).unwrap() < 1e-200);
    }

    #[test]
    fn domain() {
        assert!(dilog(-0.1).is_err());
        assert!(dilog(1.1).is_err());
        assert!(rogers_l(f64::NAN).is_err());
    }
}
