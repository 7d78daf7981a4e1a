use serde::{Deserialize, Serialize};

use crate::AggregationError;

/// Instance- and implementation-specific baseline quality term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityEntry {
    pub instance: String,
    pub implementation: String,
    pub value: f64,
}

/// One evaluator of the random-utility model: utility is baseline quality
/// plus `alpha` times the structural compatibility score; negative score
/// regions are weighted by the loss-aversion multiplier `lambda`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluator {
    pub alpha: f64,
    #[serde(default = "one")]
    pub lambda: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub quality: Vec<QualityEntry>,
}

fn one() -> f64 {
    1.0
}

impl Evaluator {
    pub fn new(alpha: f64, lambda: f64) -> Evaluator {
        Evaluator {
            alpha,
            lambda,
            quality: Vec::new(),
        }
    }

    pub fn quality(&self, instance: &str, implementation: &str) -> f64 {
        self.quality
            .iter()
            .find(|q| q.instance == instance && q.implementation == implementation)
            .map(|q| q.value)
            .unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatorPopulation {
    pub evaluators: Vec<Evaluator>,
}

impl EvaluatorPopulation {
    /// Quality-controlled population from sensitivity/loss-aversion pairs.
    pub fn from_params(params: &[(f64, f64)]) -> EvaluatorPopulation {
        EvaluatorPopulation {
            evaluators: params.iter().map(|&(a, l)| Evaluator::new(a, l)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.evaluators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.evaluators.is_empty()
    }

    pub fn validate(&self) -> Result<(), AggregationError> {
        if self.is_empty() {
            return Err(AggregationError::EmptyPopulation);
        }
        for (i, e) in self.evaluators.iter().enumerate() {
            if !e.alpha.is_finite() || e.alpha < 0.0 {
                return Err(AggregationError::BadParameter(format!(
                    "evaluator {i}: alpha = {} must be finite and non-negative",
                    e.alpha
                )));
            }
            if !e.lambda.is_finite() || e.lambda < 1.0 {
                return Err(AggregationError::BadParameter(format!(
                    "evaluator {i}: lambda = {} must be finite and at least 1",
                    e.lambda
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(json: &str) -> Result<EvaluatorPopulation, AggregationError> {
        let pop: EvaluatorPopulation =
            serde_json::from_str(json).map_err(|e| AggregationError::Json(e.to_string()))?;
        pop.validate()?;
        Ok(pop)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("population serialization cannot fail")
    }
}

/// The sensitivity-weighted loss-aversion average: sum of lambda·alpha over
/// sum of alpha. Always between the smallest and largest lambda.
pub fn lambda_eff(population: &EvaluatorPopulation) -> Result<f64, AggregationError> {
    population.validate()?;
    let alpha_sum: f64 = population.evaluators.iter().map(|e| e.alpha).sum();
    if alpha_sum == 0.0 {
        return Err(AggregationError::ZeroAlphas);
    }
    let weighted: f64 = population
        .evaluators
        .iter()
        .map(|e| e.lambda * e.alpha)
        .sum();
    Ok(weighted / alpha_sum)
}

/// Population scores of three candidates sitting at compatibility +delta,
/// 0, and -delta under piecewise-linear regret weighting, with the
/// under/over provision gap ratio.
#[derive(Debug, Clone, Serialize)]
pub struct AsymmetryReport {
    pub delta: u64,
    pub r_plus: f64,
    pub r_zero: f64,
    pub r_minus: f64,
    pub overprovision_gap: f64,
    pub underprovision_gap: f64,
    /// Undefined when delta is zero.
    pub gap_ratio: Option<f64>,
    pub lambda_eff: f64,
}

/// Computes the three population scores and both gaps. Requires equal
/// baseline quality across the candidates (the quality terms drop out, so
/// they are taken as zero here).
pub fn population_scores_asymmetric(
    delta: u64,
    population: &EvaluatorPopulation,
) -> Result<AsymmetryReport, AggregationError> {
    let effective = lambda_eff(population)?;
    let k = population.len() as f64;
    let d = delta as f64;
    // w(+d) = alpha·d, w(0) = 0, w(-d) = -lambda·alpha·d.
    let r_plus: f64 = population.evaluators.iter().map(|e| e.alpha * d).sum::<f64>() / k;
    let r_zero = 0.0;
    let r_minus: f64 = population
        .evaluators
        .iter()
        .map(|e| -e.lambda * e.alpha * d)
        .sum::<f64>()
        / k;
    let overprovision_gap = r_plus - r_zero;
    let underprovision_gap = r_zero - r_minus;
    let gap_ratio = if delta == 0 {
        None
    } else {
        Some(underprovision_gap / overprovision_gap)
    };
    Ok(AsymmetryReport {
        delta,
        r_plus,
        r_zero,
        r_minus,
        overprovision_gap,
        underprovision_gap,
        gap_ratio,
        lambda_eff: effective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_eff_weighted_average() {
        let pop = EvaluatorPopulation::from_params(&[(1.0, 1.0), (1.0, 3.0)]);
        assert_eq!(lambda_eff(&pop).unwrap(), 2.0);
    }

    #[test]
    fn lambda_eff_single_evaluator_is_its_lambda() {
        let pop = EvaluatorPopulation::from_params(&[(0.7, 4.5)]);
        assert_eq!(lambda_eff(&pop).unwrap(), 4.5);
    }

    #[test]
    fn lambda_eff_ignores_zero_sensitivity_evaluators() {
        let pop = EvaluatorPopulation::from_params(&[(2.0, 1.5), (0.0, 99.0)]);
        assert_eq!(lambda_eff(&pop).unwrap(), 1.5);
    }

    #[test]
    fn lambda_eff_undefined_when_all_alphas_vanish() {
        let pop = EvaluatorPopulation::from_params(&[(0.0, 2.0), (0.0, 3.0)]);
        assert_eq!(lambda_eff(&pop), Err(AggregationError::ZeroAlphas));
    }

    #[test]
    fn asymmetry_ratio_equals_lambda_eff() {
        let pop = EvaluatorPopulation::from_params(&[(1.0, 1.0), (1.0, 3.0)]);
        let report = population_scores_asymmetric(1, &pop).unwrap();
        assert_eq!(report.gap_ratio, Some(2.0));
        // Mixed sensitivities: (3·1 + 1·3) / (3 + 1).
        let pop = EvaluatorPopulation::from_params(&[(3.0, 1.0), (1.0, 3.0)]);
        for delta in [1, 2, 5] {
            let report = population_scores_asymmetric(delta, &pop).unwrap();
            let ratio = report.gap_ratio.unwrap();
            assert!((ratio - 1.5).abs() < 1e-12, "delta={delta}: {ratio}");
        }
    }

    #[test]
    fn equal_lambdas_collapse_to_that_lambda() {
        let pop = EvaluatorPopulation::from_params(&[(0.4, 2.5), (1.7, 2.5), (3.0, 2.5)]);
        let report = population_scores_asymmetric(3, &pop).unwrap();
        assert!((report.gap_ratio.unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn zero_delta_reports_undefined_ratio() {
        let pop = EvaluatorPopulation::from_params(&[(1.0, 2.0)]);
        let report = population_scores_asymmetric(0, &pop).unwrap();
        assert_eq!(report.gap_ratio, None);
    }

    #[test]
    fn population_json_round_trip() {
        let mut pop = EvaluatorPopulation::from_params(&[(1.0, 1.0), (0.5, 3.0)]);
        pop.evaluators[0].quality.push(QualityEntry {
            instance: "a".into(),
            implementation: "YDyn".into(),
            value: 0.25,
        });
        let json = pop.to_json();
        let back = EvaluatorPopulation::from_json(&json).unwrap();
        assert_eq!(back, pop);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn validation_rejects_sub_unit_lambda() {
        let pop = EvaluatorPopulation::from_params(&[(1.0, 0.5)]);
        assert!(matches!(
            pop.validate(),
            Err(AggregationError::BadParameter(_))
        ));
    }
}
