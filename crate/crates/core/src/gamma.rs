//! Gamma function via the Lanczos approximation (g = 7, nine coefficients),
//! with reflection below 1/2. Relative error stays under 1e-13 on (0, 40].

use core::f64::consts::PI;

const G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_599,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x). Returns NaN at the poles x = 0, −1, −2, …
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == libm::floor(x) {
        return f64::NAN;
    }
    if x == libm::floor(x) && x <= 171.0 {
        // exact through 22!
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return acc;
    }
    if x < 0.5 {
        return PI / (libm::sin(PI * x) * gamma(1.0 - x));
    }
    let z = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    // split the power to stay finite for large arguments
    let half = libm::pow(t, 0.5 * (z + 0.5));
    libm::sqrt(2.0 * PI) * half * (half * libm::exp(-t)) * sum
}

/// 1/Γ(x), continuous through the poles where it vanishes.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == libm::floor(x) {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

/// Γ(a)/Γ(b) for a, b > 0, computed without overflow for moderately large
/// arguments by shifting both down to below 10 with the recurrence.
pub fn gamma_ratio(mut a: f64, mut b: f64) -> f64 {
    let mut scale = 1.0;
    while a > 10.0 && b > 10.0 {
        a -= 1.0;
        b -= 1.0;
        scale *= a / b;
    }
    scale * gamma(a) / gamma(b)
}
