//! Output formats. Reals are written with 17 significant digits so that
//! they round-trip, using `.` as decimal separator and LF line endings.

use fide_core::linalg::Matrix;
use fide_core::orthopoly::OrthogonalSeries;
use fide_core::solver::{ConvergenceReport, SpectralSolution};

/// 17 significant digits in scientific notation, e.g. `7.0000000000000000e0`.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn solution_json(solution: &SpectralSolution, digest: &str) -> String {
    let coeffs: Vec<String> = solution.coeffs().coeffs().iter().map(|&c| real(c)).collect();
    format!(
        "{{\n  \"N\": {},\n  \"legendre_coeffs\": [{}],\n  \"condition_estimate\": {},\n  \"problem_digest\": {}\n}}\n",
        solution.n(),
        coeffs.join(", "),
        real(solution.condition_estimate()),
        serde_json::to_string(digest).expect("string serialises"),
    )
}

pub fn convergence_csv(report: &ConvergenceReport) -> String {
    let mut out = String::from("N,l2_error,max_error\n");
    for e in &report.entries {
        match &e.outcome {
            Ok((l2, max)) => out.push_str(&format!("{},{},{}\n", e.n, real(*l2), real(*max))),
            Err(_) => out.push_str(&format!("{},,\n", e.n)),
        }
    }
    out
}

pub fn matrix_csv(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&v| real(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use fide_core::orthopoly::LegendreSeries;

    #[test]
    fn real_format() {
        assert_eq!(real(7.0), "7.0000000000000000e0");
        assert_eq!(real(-0.1), "-1.0000000000000001e-1");
        assert_eq!(real(0.0), "0.0000000000000000e0");
        for x in [1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 6.02e23] {
            assert_eq!(real(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn solution_json_is_valid_json() {
        let s = SpectralSolution::new(LegendreSeries::new(vec![7.0, 7.0]).unwrap(), 2.5);
        let text = solution_json(&s, "abc");
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["N"], 1);
        assert_eq!(v["legendre_coeffs"][1].as_f64(), Some(7.0));
        assert_eq!(v["problem_digest"], "abc");
    }

    #[test]
    fn failed_entries_leave_empty_fields() {
        use fide_core::solver::{ConvergenceEntry, ConvergenceReport, DecayClass};
        let report = ConvergenceReport {
            entries: vec![
                ConvergenceEntry { n: 4, outcome: Ok((0.5, 1.0)) },
                ConvergenceEntry { n: 5, outcome: Err(fide_core::Error::Singular { n: 5, pivot: 0.0 }) },
            ],
            fitted_decay: DecayClass::Stagnated,
        };
        assert_eq!(
            convergence_csv(&report),
            "N,l2_error,max_error\n4,5.0000000000000000e-1,1.0000000000000000e0\n5,,\n"
        );
    }

    #[test]
    fn matrix_rows() {
        let m = Matrix::from_rows(&[&[0.0, 1.5], &[2.0, -3.0]]);
        assert_eq!(matrix_csv(&m), "0.0000000000000000e0,1.5000000000000000e0\n2.0000000000000000e0,-3.0000000000000000e0\n");
    }
}
