//! Serializable experiment reports and their CSV projections.
//!
//! Conventions shared by every writer: '.' decimal separator, LF line
//! endings, rationals printed as `num/den`, floats printed with Rust's
//! shortest round-trip formatting. Identical inputs therefore produce
//! byte-identical files; wall-clock fields are the only nondeterministic
//! columns and determinism checks exclude them.

use serde::{Deserialize, Serialize};

use crate::extractor::Form;
use crate::rational::Rational;

/// Run provenance embedded in every report: seed, a hash of the resolved
/// configuration, and the crate version.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunStamp {
    pub seed: u64,
    pub config_hash: String,
    pub version: String,
}

impl RunStamp {
    pub fn new(config_repr: &str, seed: u64) -> RunStamp {
        RunStamp {
            seed,
            config_hash: format!("{:016x}", fnv1a64(config_repr.as_bytes())),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// FNV-1a over bytes; used to fingerprint fixtures and configs.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

pub fn fingerprint(repr: &str) -> String {
    format!("{:016x}", fnv1a64(repr.as_bytes()))
}

/// Bias measurement of one extractor instance against a source pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BiasReport {
    pub p: u64,
    pub n: usize,
    /// Fingerprints of the two source fixtures.
    pub source_x: String,
    pub source_y: String,
    pub size_x: usize,
    pub size_y: usize,
    /// Whether the field satisfies the construction's residue hypothesis.
    pub admissible: bool,
    /// Statistical distance of the output bit from uniform.
    pub sd: f64,
    /// Exact numerator/denominator of the distance when both sources are flat.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sd_exact: Option<Rational>,
    /// max_{λ≠0} |Σ X(x)Y(y) e(λ f(x,y))| with the actual source masses.
    pub max_exp_sum: f64,
    pub argmax_lambda: u64,
    /// Σ_ξ |c(ξ)| for the quantizer's Fourier expansion over this field.
    pub coefficient_sum: f64,
    pub seed: u64,
    pub config_hash: String,
    pub version: String,
    pub wall_time_millis: u128,
}

impl BiasReport {
    pub const CSV_HEADER: &'static str = "p,n,size_x,size_y,metric,value,seed,millis";

    pub fn csv_rows(&self) -> Vec<String> {
        let mut rows = Vec::with_capacity(3);
        for (metric, value) in [
            ("sd", self.sd),
            ("max_exp_sum", self.max_exp_sum),
            ("coefficient_sum", self.coefficient_sum),
        ] {
            rows.push(format!(
                "{},{},{},{},{},{},{},{}",
                self.p,
                self.n,
                self.size_x,
                self.size_y,
                metric,
                value,
                self.seed,
                self.wall_time_millis
            ));
        }
        rows
    }
}

pub fn bias_csv(reports: &[BiasReport]) -> String {
    let mut out = String::from(BiasReport::CSV_HEADER);
    out.push('\n');
    for r in reports {
        for row in r.csv_rows() {
            out.push_str(&row);
            out.push('\n');
        }
    }
    out
}

/// Maximal twisted exponential sum and its energy bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpSumReport {
    pub p: u64,
    pub n: usize,
    pub form: Form,
    pub size_a: usize,
    pub size_b: usize,
    pub indicator_weights: bool,
    /// max_{λ∈F_*} |Σ a(x) b(y) e(λ f(x,y))|.
    pub lhs: f64,
    pub argmax_lambda: u64,
    /// |A|^{1/2} |B|^{1/2} p^{m/8} (Λ(A)Λ(B))^{1/8}; for the extractor form
    /// the energies and the dimension m = n+1 come from the paraboloid lifts
    /// of the supports, which linearize the form to a plain dot product.
    pub rhs_bound: f64,
    pub energy_a: u64,
    pub energy_b: u64,
    /// True when the energies were computed on lifted supports.
    pub lifted: bool,
}

impl ExpSumReport {
    /// Bound-to-sum ratio; at least 1 - 1e-6 whenever the weights sit in the
    /// unit disc.
    pub fn slack(&self) -> f64 {
        self.rhs_bound / self.lhs.max(f64::MIN_POSITIVE)
    }
}

/// Additive energy of one point set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnergyReport {
    pub descriptor: String,
    pub p: u64,
    pub n: usize,
    pub size: usize,
    pub energy: u64,
    /// log Λ / log |A|; absent for degenerate sizes |A| ≤ 1.
    pub exponent: Option<f64>,
    pub method: EnergyMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyMethod {
    Brute,
    Spectral,
}

impl EnergyReport {
    pub const CSV_HEADER: &'static str = "descriptor,p,n,size,energy,exponent,method";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.descriptor,
            self.p,
            self.n,
            self.size,
            self.energy,
            self.exponent.map_or("nan".to_string(), |e| e.to_string()),
            match self.method {
                EnergyMethod::Brute => "brute",
                EnergyMethod::Spectral => "spectral",
            }
        )
    }
}

/// One row of a paraboloid energy scan.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanRow {
    pub p: u64,
    pub d: usize,
    pub family: String,
    pub size: usize,
    pub trial: usize,
    pub energy: u64,
    pub fitted_exponent: Option<f64>,
    pub seed: u64,
}

/// A full scan: rows ordered by (size, trial), plus the least-squares slope
/// of log Λ against log |A| across all non-degenerate rows.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExponentScan {
    pub p: u64,
    pub d: usize,
    pub family: String,
    pub master_seed: u64,
    pub config_hash: String,
    pub version: String,
    pub rows: Vec<ScanRow>,
    pub least_squares_slope: Option<f64>,
}

impl ExponentScan {
    pub const CSV_HEADER: &'static str = "p,d,family,size,trial,energy,fitted_exponent,seed";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.p,
                r.d,
                r.family,
                r.size,
                r.trial,
                r.energy,
                r.fitted_exponent
                    .map_or("nan".to_string(), |e| e.to_string()),
                r.seed
            ));
        }
        out
    }

    pub fn max_fitted_exponent(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter_map(|r| r.fitted_exponent)
            .fold(None, |acc, e| Some(acc.map_or(e, |a: f64| a.max(e))))
    }
}

/// Rate computed from an energy exponent.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RateReport {
    pub n: u32,
    pub d: u32,
    pub alpha: Rational,
    /// The min-entropy rate n / (d(8 - 2α)).
    pub rate: Rational,
    /// The exponent n / (8 - 2α) of the set-size scale where the energy
    /// hypothesis must hold.
    pub critical_exponent: Rational,
    /// What this operation computes, spelled out for the report reader.
    pub formula: String,
}

/// Coefficient-sum diagnostic for the quantizer's Fourier expansion.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FourierReport {
    pub p: u64,
    pub coefficient_sum: f64,
    pub ratio_to_log: f64,
    /// Σ_ξ |c(ξ)|²; equals 1 up to roundoff.
    pub power: f64,
}

/// Outcome of a batch of exponential-sum inequality trials.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LemmaTrialSummary {
    pub p: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub trials: usize,
    pub unit_disc_weights: bool,
    pub seed: u64,
    pub config_hash: String,
    pub version: String,
    /// Largest lhs/rhs ratio observed (≤ 1 when the inequality holds).
    pub worst_ratio: f64,
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation_seed: Option<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_fingerprint_is_stable() {
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fingerprint("a"), format!("{:016x}", 0xaf63dc4c8601ec8cu64));
    }

    #[test]
    fn bias_csv_shape() {
        let r = BiasReport {
            p: 7,
            n: 2,
            source_x: "x".into(),
            source_y: "y".into(),
            size_x: 49,
            size_y: 49,
            admissible: true,
            sd: 0.5,
            sd_exact: Some(Rational::new(1, 2)),
            max_exp_sum: 1.0,
            argmax_lambda: 1,
            coefficient_sum: 2.0,
            seed: 9,
            config_hash: "deadbeef".into(),
            version: "0".into(),
            wall_time_millis: 3,
        };
        let csv = bias_csv(&[r]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], BiasReport::CSV_HEADER);
        assert_eq!(lines[1], "7,2,49,49,sd,0.5,9,3");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn scan_csv_shape() {
        let scan = ExponentScan {
            p: 5,
            d: 4,
            family: "random".into(),
            master_seed: 1,
            config_hash: "0".into(),
            version: "0".into(),
            rows: vec![ScanRow {
                p: 5,
                d: 4,
                family: "random".into(),
                size: 1,
                trial: 0,
                energy: 1,
                fitted_exponent: None,
                seed: 2,
            }],
            least_squares_slope: None,
        };
        let csv = scan.to_csv();
        assert!(csv.starts_with("p,d,family,size,trial,energy,fitted_exponent,seed\n"));
        assert!(csv.contains("5,4,random,1,0,1,nan,2\n"));
    }

    #[test]
    fn rate_report_serializes_rationals_as_strings() {
        let r = RateReport {
            n: 3,
            d: 2,
            alpha: Rational::new(17, 7),
            rate: Rational::new(21, 44),
            critical_exponent: Rational::new(21, 22),
            formula: "n / (d * (8 - 2*alpha))".into(),
        };
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"rate\":\"21/44\""));
        assert!(json.contains("\"alpha\":\"17/7\""));
    }
}
