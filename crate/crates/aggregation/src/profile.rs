use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::AggregationError;

/// A benchmark profile: evaluator rankings (best first) over a shared
/// candidate set, attached to the instance they were measured on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkProfile {
    pub instance: String,
    pub candidates: Vec<String>,
    pub rankings: Vec<Vec<String>>,
}

impl BenchmarkProfile {
    pub fn validate(&self) -> Result<(), AggregationError> {
        let reference: BTreeSet<&String> = self.candidates.iter().collect();
        if self.candidates.len() < 2 || reference.len() != self.candidates.len() {
            return Err(AggregationError::BadParameter(
                "candidate set needs at least two distinct entries".into(),
            ));
        }
        if self.rankings.is_empty() {
            return Err(AggregationError::BadRanking(0));
        }
        for (i, ranking) in self.rankings.iter().enumerate() {
            let seen: BTreeSet<&String> = ranking.iter().collect();
            if ranking.len() != self.candidates.len() || seen != reference {
                return Err(AggregationError::BadRanking(i));
            }
        }
        Ok(())
    }

    pub fn from_json(json: &str) -> Result<BenchmarkProfile, AggregationError> {
        let profile: BenchmarkProfile =
            serde_json::from_str(json).map_err(|e| AggregationError::Json(e.to_string()))?;
        profile.validate()?;
        Ok(profile)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serialization cannot fail")
    }
}

/// Pairwise strict-majority aggregate of a profile. An edge (y, y') means
/// strictly more than half the evaluators rank y above y'; with even splits
/// neither direction is present. Cycles are preserved as-is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tournament {
    pub candidates: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

impl Tournament {
    pub fn prefers(&self, winner: &str, loser: &str) -> bool {
        let w = self.candidates.iter().position(|c| c == winner);
        let l = self.candidates.iter().position(|c| c == loser);
        match (w, l) {
            (Some(w), Some(l)) => self.edges.contains(&(w, l)),
            _ => false,
        }
    }

    pub fn edges(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|&(w, l)| (self.candidates[w].clone(), self.candidates[l].clone()))
            .collect()
    }

    /// Cycle detection over the majority edges.
    pub fn has_cycle(&self) -> bool {
        let n = self.candidates.len();
        // 0 = unvisited, 1 = on stack, 2 = done.
        let mut state = vec![0u8; n];
        fn visit(v: usize, edges: &BTreeSet<(usize, usize)>, state: &mut [u8]) -> bool {
            state[v] = 1;
            for &(from, to) in edges.range((v, 0)..(v + 1, 0)) {
                debug_assert_eq!(from, v);
                if state[to] == 1 || (state[to] == 0 && visit(to, edges, state)) {
                    return true;
                }
            }
            state[v] = 2;
            false
        }
        (0..n).any(|v| state[v] == 0 && visit(v, &self.edges, &mut state))
    }
}

/// Aggregates a profile by pairwise strict majority.
pub fn majority_pairwise(profile: &BenchmarkProfile) -> Result<Tournament, AggregationError> {
    profile.validate()?;
    let n = profile.candidates.len();
    let k = profile.rankings.len();
    // positions[r][c] = rank of candidate c in ranking r.
    let mut positions = vec![vec![0usize; n]; k];
    for (r, ranking) in profile.rankings.iter().enumerate() {
        for (rank, name) in ranking.iter().enumerate() {
            let c = profile
                .candidates
                .iter()
                .position(|x| x == name)
                .expect("validated ranking");
            positions[r][c] = rank;
        }
    }
    let mut edges = BTreeSet::new();
    for w in 0..n {
        for l in 0..n {
            if w == l {
                continue;
            }
            let above = (0..k).filter(|&r| positions[r][w] < positions[r][l]).count();
            if 2 * above > k {
                edges.insert((w, l));
            }
        }
    }
    Ok(Tournament {
        candidates: profile.candidates.clone(),
        edges,
    })
}

/// Outcome of randomized decisive-coalition trials.
#[derive(Debug, Clone, Serialize)]
pub struct InheritanceReport {
    pub trials: u64,
    pub violations: u64,
    pub first_violation: Option<BenchmarkProfile>,
}

/// Samples random profiles in which every coalition member ranks `favored`
/// above `other` (their remaining positions shuffled) and counts trials
/// where the majority aggregate fails to prefer `favored`.
///
/// With a strict-majority coalition the count is always zero; that is the
/// decisiveness guarantee. `adversarial_rest` makes every non-member rank
/// `other` first and `favored` last, the worst case for the coalition.
#[allow(clippy::too_many_arguments)]
pub fn check_deterministic_inheritance(
    k: usize,
    coalition: &[usize],
    candidates: &[String],
    favored: &str,
    other: &str,
    trials: u64,
    seed: u64,
    adversarial_rest: bool,
) -> Result<InheritanceReport, AggregationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut first_violation = None;
    for _ in 0..trials {
        let mut rankings = Vec::with_capacity(k);
        for evaluator in 0..k {
            let mut ranking = candidates.to_vec();
            ranking.shuffle(&mut rng);
            if coalition.contains(&evaluator) {
                force_order(&mut ranking, favored, other);
            } else if adversarial_rest {
                force_first_and_last(&mut ranking, other, favored);
            }
            rankings.push(ranking);
        }
        let profile = BenchmarkProfile {
            instance: String::new(),
            candidates: candidates.to_vec(),
            rankings,
        };
        let tournament = majority_pairwise(&profile)?;
        if !tournament.prefers(favored, other) {
            violations += 1;
            first_violation.get_or_insert(profile);
        }
    }
    Ok(InheritanceReport {
        trials,
        violations,
        first_violation,
    })
}

/// The stored counterexample: a coalition of exactly floor(k/2) monotone
/// evaluators loses to adversarial non-members, showing strict majority is
/// needed for decisive power.
pub fn minority_counterexample(
    k: usize,
    candidates: &[String],
    favored: &str,
    other: &str,
) -> (BenchmarkProfile, Tournament) {
    let coalition_size = k / 2;
    let mut rankings = Vec::with_capacity(k);
    for evaluator in 0..k {
        let mut ranking = candidates.to_vec();
        ranking.sort();
        if evaluator < coalition_size {
            force_order(&mut ranking, favored, other);
        } else {
            force_first_and_last(&mut ranking, other, favored);
        }
        rankings.push(ranking);
    }
    let profile = BenchmarkProfile {
        instance: String::new(),
        candidates: candidates.to_vec(),
        rankings,
    };
    let tournament = majority_pairwise(&profile).expect("constructed profile is valid");
    (profile, tournament)
}

/// Swaps the pair into the required relative order, leaving all other
/// positions as they are.
fn force_order(ranking: &mut [String], before: &str, after: &str) {
    let b = ranking.iter().position(|c| c == before).unwrap();
    let a = ranking.iter().position(|c| c == after).unwrap();
    if b > a {
        ranking.swap(b, a);
    }
}

fn force_first_and_last(ranking: &mut Vec<String>, first: &str, last: &str) {
    ranking.retain(|c| c != first && c != last);
    ranking.insert(0, first.to_string());
    ranking.push(last.to_string());
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn two_of_three_evaluators_force_the_pair() {
        let profile = BenchmarkProfile {
            instance: "a".into(),
            candidates: names(&["y", "z", "w"]),
            rankings: vec![
                names(&["y", "z", "w"]),
                names(&["y", "w", "z"]),
                names(&["z", "w", "y"]),
            ],
        };
        let t = majority_pairwise(&profile).unwrap();
        assert!(t.prefers("y", "z"));
        assert!(!t.prefers("z", "y"));
    }

    #[test]
    fn condorcet_cycle_is_preserved() {
        let profile = BenchmarkProfile {
            instance: "a".into(),
            candidates: names(&["y", "z", "w"]),
            rankings: vec![
                names(&["y", "z", "w"]),
                names(&["z", "w", "y"]),
                names(&["w", "y", "z"]),
            ],
        };
        let t = majority_pairwise(&profile).unwrap();
        assert!(t.prefers("y", "z"));
        assert!(t.prefers("z", "w"));
        assert!(t.prefers("w", "y"));
        assert!(t.has_cycle());
    }

    #[test]
    fn unanimous_profile_reproduces_the_common_order() {
        let order = names(&["w", "y", "z"]);
        let profile = BenchmarkProfile {
            instance: "a".into(),
            candidates: names(&["y", "z", "w"]),
            rankings: vec![order.clone(), order.clone(), order],
        };
        let t = majority_pairwise(&profile).unwrap();
        assert!(t.prefers("w", "y"));
        assert!(t.prefers("w", "z"));
        assert!(t.prefers("y", "z"));
        assert!(!t.has_cycle());
    }

    #[test]
    fn malformed_ranking_is_rejected() {
        let profile = BenchmarkProfile {
            instance: "a".into(),
            candidates: names(&["y", "z"]),
            rankings: vec![names(&["y", "y"])],
        };
        assert_eq!(
            majority_pairwise(&profile).unwrap_err(),
            AggregationError::BadRanking(0)
        );
    }

    #[test]
    fn majority_coalition_never_loses_even_adversarially() {
        let candidates = names(&["y", "z", "w"]);
        let report = check_deterministic_inheritance(
            3,
            &[0, 1],
            &candidates,
            "y",
            "z",
            500,
            7,
            true,
        )
        .unwrap();
        assert_eq!(report.violations, 0);
    }

    #[test]
    fn minority_coalition_loses_to_adversaries() {
        let candidates = names(&["y", "z", "w"]);
        let (profile, tournament) = minority_counterexample(3, &candidates, "y", "z");
        assert!(!tournament.prefers("y", "z"));
        assert!(tournament.prefers("z", "y"));
        // The coalition member did rank y above z.
        let coalition_ranking = &profile.rankings[0];
        let y_pos = coalition_ranking.iter().position(|c| c == "y").unwrap();
        let z_pos = coalition_ranking.iter().position(|c| c == "z").unwrap();
        assert!(y_pos < z_pos);
    }

    #[test]
    fn profile_json_round_trip() {
        let profile = BenchmarkProfile {
            instance: "a#".into(),
            candidates: names(&["y", "z", "w"]),
            rankings: vec![names(&["y", "z", "w"]), names(&["z", "y", "w"]),
                names(&["w", "z", "y"])],
        };
        let json = profile.to_json();
        let back = BenchmarkProfile::from_json(&json).unwrap();
        assert_eq!(back, profile);
        assert_eq!(back.to_json(), json);
    }
}
