use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::{Alphabet, Instance, ScenarioError};

/// A structural feature label, e.g. "dyn", "sorted", "locality".
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Feature(String);

impl Feature {
    pub fn new(label: impl Into<String>) -> Result<Self, ScenarioError> {
        let label = label.into();
        if label.is_empty() {
            return Err(ScenarioError::EmptyFeature);
        }
        Ok(Feature(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl std::fmt::Display for Feature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// How a rule decides whether it applies to an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pattern {
    /// Applies iff the instance equals the literal exactly.
    Equals { literal: String },
    /// Applies iff the instance is the literal followed by zero or more pads.
    LiteralThenPads { literal: String },
    /// Applies to every instance.
    Default,
}

impl Pattern {
    pub fn matches(&self, x: &str, pad: char) -> bool {
        match self {
            Pattern::Equals { literal } => x == literal,
            Pattern::LiteralThenPads { literal } => x
                .strip_prefix(literal.as_str())
                .is_some_and(|rest| rest.chars().all(|c| c == pad)),
            Pattern::Default => true,
        }
    }
}

/// One extractor rule: the first rule whose pattern matches supplies the
/// feature set for the instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub pattern: Pattern,
    pub features: BTreeSet<Feature>,
}

/// An ordered rule list realizing a total map from instances to feature sets.
///
/// First match wins; an instance matching no rule maps to the empty set, so
/// the map is total without an explicit default entry.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RuleSet {
    rules: Vec<Rule>,
}

impl RuleSet {
    pub fn new(rules: Vec<Rule>) -> Self {
        RuleSet { rules }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn apply(&self, x: &str, pad: char) -> BTreeSet<Feature> {
        self.rules
            .iter()
            .find(|r| r.pattern.matches(x, pad))
            .map(|r| r.features.clone())
            .unwrap_or_default()
    }
}

/// One compatibility table entry; absent pairs default to 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatEntry {
    pub implementation: String,
    pub feature: Feature,
    pub value: i8,
}

/// The non-triviality witness kit: a base instance, a feature that its
/// signature carries beyond warrant, an implementation committing to that
/// feature, and the structure-free empty implementation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessKit {
    pub x0: String,
    pub s0: Feature,
    pub y_plus: String,
    pub epsilon: String,
}

/// A complete scenario: alphabet, extractors, compatibility table, witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioConfig {
    pub alphabet: Alphabet,
    pub signature_rules: RuleSet,
    pub warrant_rules: RuleSet,
    compat: BTreeMap<(String, Feature), i8>,
    compat_entries: Vec<CompatEntry>,
    pub witness_kit: WitnessKit,
}

impl ScenarioConfig {
    pub fn new(
        alphabet: Alphabet,
        signature_rules: RuleSet,
        warrant_rules: RuleSet,
        compat_entries: Vec<CompatEntry>,
        witness_kit: WitnessKit,
    ) -> Result<Self, ScenarioError> {
        let mut compat = BTreeMap::new();
        for e in &compat_entries {
            if !(-1..=1).contains(&e.value) {
                return Err(ScenarioError::CompatOutOfRange(e.value));
            }
            compat.insert((e.implementation.clone(), e.feature.clone()), e.value);
        }
        Ok(ScenarioConfig {
            alphabet,
            signature_rules,
            warrant_rules,
            compat,
            compat_entries,
            witness_kit,
        })
    }

    /// The implied workload signature S(x).
    pub fn signature(&self, x: &Instance) -> BTreeSet<Feature> {
        self.signature_rules.apply(x.as_str(), self.alphabet.pad())
    }

    /// The measured warrant W(x).
    pub fn warrant(&self, x: &Instance) -> BTreeSet<Feature> {
        self.warrant_rules.apply(x.as_str(), self.alphabet.pad())
    }

    /// The compatibility value V(y, s), defaulting to 0 for unlisted pairs.
    pub fn compat(&self, y: &str, s: &Feature) -> i64 {
        self.compat
            .get(&(y.to_string(), s.clone()))
            .copied()
            .unwrap_or(0) as i64
    }

    pub fn compat_entries(&self) -> &[CompatEntry] {
        &self.compat_entries
    }

    /// Every feature named anywhere in the scenario (rules or table).
    pub fn feature_universe(&self) -> BTreeSet<Feature> {
        let mut universe = BTreeSet::new();
        for rule in self
            .signature_rules
            .rules()
            .iter()
            .chain(self.warrant_rules.rules())
        {
            universe.extend(rule.features.iter().cloned());
        }
        for e in &self.compat_entries {
            universe.insert(e.feature.clone());
        }
        universe
    }

    pub fn witness_x0(&self) -> Result<Instance, ScenarioError> {
        Instance::new(self.witness_kit.x0.clone(), &self.alphabet)
    }

    /// Parses the JSON scenario file format.
    pub fn from_json(json: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = serde_json::from_str(json)?;
        file.into_config()
    }

    /// Serializes to the JSON scenario file format. Field order and map
    /// ordering are fixed, so parse → serialize → parse is bit-exact.
    pub fn to_json(&self) -> String {
        let file = ScenarioFile::from_config(self);
        serde_json::to_string_pretty(&file).expect("scenario serialization cannot fail")
    }

    /// The built-in default scenario: alphabet {a, b, #} with pad '#',
    /// base instance "a" implying {dyn, sorted} with only "sorted"
    /// warranted, and implementations YDyn (commits to dyn) and YStatic
    /// (commits against dyn, for sorted).
    pub fn default_scenario() -> ScenarioConfig {
        let alphabet = Alphabet::new(vec!['a', 'b', '#'], '#').unwrap();
        let dyn_f = Feature::new("dyn").unwrap();
        let sorted_f = Feature::new("sorted").unwrap();
        let signature_rules = RuleSet::new(vec![Rule {
            pattern: Pattern::LiteralThenPads {
                literal: "a".to_string(),
            },
            features: [dyn_f.clone(), sorted_f.clone()].into_iter().collect(),
        }]);
        let warrant_rules = RuleSet::new(vec![Rule {
            pattern: Pattern::LiteralThenPads {
                literal: "a".to_string(),
            },
            features: [sorted_f.clone()].into_iter().collect(),
        }]);
        let compat = vec![
            CompatEntry {
                implementation: "YDyn".to_string(),
                feature: dyn_f.clone(),
                value: 1,
            },
            CompatEntry {
                implementation: "YDyn".to_string(),
                feature: sorted_f.clone(),
                value: 0,
            },
            CompatEntry {
                implementation: "YStatic".to_string(),
                feature: dyn_f.clone(),
                value: -1,
            },
            CompatEntry {
                implementation: "YStatic".to_string(),
                feature: sorted_f,
                value: 1,
            },
        ];
        let witness_kit = WitnessKit {
            x0: "a".to_string(),
            s0: dyn_f,
            y_plus: "YDyn".to_string(),
            epsilon: String::new(),
        };
        ScenarioConfig::new(alphabet, signature_rules, warrant_rules, compat, witness_kit)
            .expect("default scenario is well-formed")
    }
}

/// Wire form of a scenario file. `alphabet` is the ordered symbol string.
#[derive(Debug, Serialize, Deserialize)]
struct ScenarioFile {
    alphabet: String,
    pad: char,
    signature_rules: RuleSet,
    warrant_rules: RuleSet,
    compat: Vec<CompatEntry>,
    witness_kit: WitnessKit,
}

impl ScenarioFile {
    fn into_config(self) -> Result<ScenarioConfig, ScenarioError> {
        let alphabet = Alphabet::new(self.alphabet.chars().collect(), self.pad)?;
        ScenarioConfig::new(
            alphabet,
            self.signature_rules,
            self.warrant_rules,
            self.compat,
            self.witness_kit,
        )
    }

    fn from_config(cfg: &ScenarioConfig) -> ScenarioFile {
        ScenarioFile {
            alphabet: cfg.alphabet.symbols().iter().collect(),
            pad: cfg.alphabet.pad(),
            signature_rules: cfg.signature_rules.clone(),
            warrant_rules: cfg.warrant_rules.clone(),
            compat: cfg.compat_entries.clone(),
            witness_kit: cfg.witness_kit.clone(),
        }
    }
}
