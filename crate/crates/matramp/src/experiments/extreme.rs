//! Best-case benchmark: a product state against the all-pair Bell
//! state, where the weight product reaches 2^(n/2 - 1). The overlap is
//! dialed to target sizes with a single rotation on the top qubit, and
//! the four estimation routes run head to head so their query medians
//! expose the inverse-square (sampling) and inverse (amplitude
//! estimation) weight laws.

use super::io::{median_queries_by_method, median_u64};
use super::{AStateSpec, BStateSpec, BenchRow, BenchScenario, FactorSpec, Method};
use crate::encoders::BellLabel;
use crate::estimators::{sql::HOEFFDING_C, Part, MAX_AE_ROUNDS};
use crate::qcore::{basis_state, inner_product, CVec, C64};
use crate::{Error, Result};
use serde::Serialize;

/// Sampler configuration stamped on every report so the numbers can be
/// audited against the shot rules.
#[derive(Debug, Clone, Serialize)]
pub struct MethodMetadata {
    pub hoeffding_constant: f64,
    pub ae_shot_rule: String,
    pub ae_round_cap: u64,
}

/// Median per method, in the fixed method order.
#[derive(Debug, Clone, Serialize)]
pub struct MethodMedian {
    pub method: Method,
    pub median_queries: f64,
    pub median_shots: f64,
}

/// One engineered overlap size with its ratio verdicts.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremeTarget {
    pub name: String,
    pub target_mu: f64,
    pub achieved_mu: f64,
    pub angle: f64,
    pub medians: Vec<MethodMedian>,
    pub sql_ratio: f64,
    pub sql_band: [f64; 2],
    pub sql_ok: bool,
    pub hl_ratio: f64,
    pub hl_band: [f64; 2],
    pub hl_ok: bool,
    pub rows: Vec<BenchRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremeReport {
    pub n: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub gamma_lambda: f64,
    pub metadata: MethodMetadata,
    pub targets: Vec<ExtremeTarget>,
}

/// Upper factor |0..0> rotated toward |10..0> by `angle` on the top
/// qubit.
fn rotated_upper(n: usize, angle: f64) -> FactorSpec {
    let d = 1usize << n;
    let mut amps = vec![[0.0f64; 2]; d];
    amps[0] = [(angle / 2.0).cos(), 0.0];
    amps[d >> 1] = [(angle / 2.0).sin(), 0.0];
    FactorSpec::Amplitudes(amps)
}

/// Real overlap of the engineered pair at a given rotation angle,
/// evaluated on the built states.
fn overlap_at(n: usize, angle: f64) -> Result<f64> {
    let upper = rotated_upper(n, angle).to_state(n)?;
    let lower = crate::qcore::PureState::new(basis_state(n, 0))?;
    let a = upper.tensor(&lower)?;
    // All-PhiPlus pairs vectorise to the flat diagonal state.
    let d = 1usize << n;
    let mut b = CVec::zeros(d * d);
    let w = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        b[i * d + i] = w;
    }
    Ok(inner_product(&b, a.amplitudes()).re)
}

/// Solves overlap(angle) = target by bisection on [0, pi]; the overlap
/// falls monotonically from 2^(-n/2) to 0.
fn solve_angle(n: usize, target: f64) -> Result<f64> {
    let max = overlap_at(n, 0.0)?;
    if target > max + 1e-12 {
        return Err(Error::arg(format!(
            "target overlap {target} exceeds the family maximum {max}"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, std::f64::consts::PI);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if overlap_at(n, mid)? >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn ratio_of(rows: &[BenchRow], ind: Method, dir: Method, shots: bool) -> f64 {
    let pick = |m: Method| -> f64 {
        let vals: Vec<u64> = rows
            .iter()
            .filter(|r| r.method == m)
            .map(|r| if shots { r.shots } else { r.queries })
            .collect();
        median_u64(&vals)
    };
    pick(ind) / pick(dir)
}

/// Runs the four methods at overlaps near 2^(-n/2) and 2^(-n).
///
/// The returned targets carry the indirect/direct medians and whether
/// they fall within a factor two of the weight-power predictions:
/// (gamma lambda)^-2 for sampling, (gamma lambda)^-1 for amplitude
/// estimation.
pub fn run_extreme_case(
    n: usize,
    epsilon: f64,
    delta: f64,
    seeds: &[u64],
) -> Result<ExtremeReport> {
    if n == 0 || n > 4 {
        return Err(Error::arg(format!("extreme case covers n in 1..=4, got {n}")));
    }
    if seeds.is_empty() {
        return Err(Error::arg("extreme case needs at least one seed"));
    }
    let gl = 0.5 * ((1usize << n) as f64).sqrt();
    let mut targets = Vec::new();
    let half = (2.0f64).powf(-(n as f64) / 2.0);
    let full = (2.0f64).powf(-(n as f64));
    for (tag, target_mu) in [("extreme-root", half), ("extreme-full", full)] {
        let angle = solve_angle(n, target_mu)?;
        let achieved = overlap_at(n, angle)?;
        if (achieved - target_mu).abs() > 0.05 * target_mu {
            return Err(Error::Numerical(format!(
                "engineered overlap {achieved} misses target {target_mu}"
            )));
        }
        let scenario = BenchScenario {
            name: tag.into(),
            n,
            a: AStateSpec::Product {
                upper: rotated_upper(n, angle),
                lower: FactorSpec::Basis("0".repeat(n)),
            },
            b: BStateSpec::Bell {
                labels: vec![BellLabel::PhiPlus; n],
            },
            part: Part::Real,
            epsilon,
            delta,
            seeds: seeds.to_vec(),
            methods: Method::ALL.to_vec(),
        };
        let rows = scenario.run()?;
        let sql_ratio = ratio_of(&rows, Method::IndirectSql, Method::DirectSql, true);
        let hl_ratio = ratio_of(&rows, Method::IndirectHl, Method::DirectHl, false);
        let sql_band = [0.5 / (gl * gl), 2.0 / (gl * gl)];
        let hl_band = [0.5 / gl, 2.0 / gl];
        let medians = median_queries_by_method(&rows)
            .into_iter()
            .map(|(method, median_queries)| {
                let shots: Vec<u64> = rows
                    .iter()
                    .filter(|r| r.method == method)
                    .map(|r| r.shots)
                    .collect();
                MethodMedian {
                    method,
                    median_queries,
                    median_shots: median_u64(&shots),
                }
            })
            .collect();
        targets.push(ExtremeTarget {
            name: tag.into(),
            target_mu,
            achieved_mu: achieved,
            angle,
            medians,
            sql_ratio,
            sql_band,
            sql_ok: sql_ratio >= sql_band[0] && sql_ratio <= sql_band[1],
            hl_ratio,
            hl_band,
            hl_ok: hl_ratio >= hl_band[0] && hl_ratio <= hl_band[1],
            rows,
        });
    }
    Ok(ExtremeReport {
        n,
        epsilon,
        delta,
        gamma_lambda: gl,
        metadata: MethodMetadata {
            hoeffding_constant: HOEFFDING_C,
            ae_shot_rule: "ceil(50 ln(2t/delta)) shots in round t, power doubling".into(),
            ae_round_cap: MAX_AE_ROUNDS,
        },
        targets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles_hit_their_overlap_targets() {
        for n in 1..=3usize {
            let max = (2.0f64).powf(-(n as f64) / 2.0);
            for frac in [1.0, 0.5, 0.25] {
                let target = max * frac;
                let angle = solve_angle(n, target).unwrap();
                let got = overlap_at(n, angle).unwrap();
                assert!(
                    (got - target).abs() <= 0.05 * target,
                    "n={n} target {target} got {got}"
                );
            }
        }
        assert!(solve_angle(1, 0.9).is_err());
    }

    #[test]
    fn ratio_medians_track_the_weight_laws() {
        let seeds: Vec<u64> = (0..9).collect();
        let report = run_extreme_case(3, 0.25, 0.05, &seeds).unwrap();
        assert!((report.gamma_lambda - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(report.targets.len(), 2);
        for t in &report.targets {
            assert!(
                t.sql_ok,
                "{}: sampling ratio {} outside {:?}",
                t.name, t.sql_ratio, t.sql_band
            );
            assert!(
                t.hl_ok,
                "{}: estimation ratio {} outside {:?}",
                t.name, t.hl_ratio, t.hl_band
            );
            assert_eq!(t.rows.len(), 4 * seeds.len());
        }
    }

    #[test]
    fn aligned_pair_terminates_on_minimal_schedules() {
        // Target at the family maximum: the rotation solves to zero and
        // every route finishes cheaply.
        let report = run_extreme_case(2, 0.25, 0.05, &[0, 1, 2]).unwrap();
        let root = &report.targets[0];
        assert!(root.angle.abs() < 1e-6);
        assert!((root.achieved_mu - 0.5).abs() < 1e-9);
        for m in &root.medians {
            assert!(
                m.median_queries < 50_000.0,
                "{:?} used {} queries",
                m.method,
                m.median_queries
            );
        }
    }

    #[test]
    fn size_guard_rejects_large_registers() {
        assert!(run_extreme_case(5, 0.25, 0.05, &[0]).is_err());
        assert!(run_extreme_case(2, 0.25, 0.05, &[]).is_err());
    }
}
