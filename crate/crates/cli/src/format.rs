//! Number formatting for machine files and human summaries.

/// Round-trippable 17-significant-digit form; empty for non-finite values.
pub fn machine(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

pub fn machine_opt(x: Option<f64>) -> String {
    x.map(machine).unwrap_or_default()
}

/// Four significant digits.
pub fn human(x: f64) -> String {
    if !x.is_finite() {
        return "NA".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-3..5).contains(&mag) {
        let decimals = (3 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.3e}")
    }
}
