use std::fmt;
use std::str::FromStr;

use super::ModelError;

/// Tolerance on the sum of interpolation weights.
pub const LAMBDA_SUM_TOLERANCE: f64 = 1e-9;

/// Weights of the unigram, bigram and trigram estimates in an interpolated
/// transition probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambdas {
    pub unigram: f64,
    pub bigram: f64,
    pub trigram: f64,
}

impl Lambdas {
    pub fn new(unigram: f64, bigram: f64, trigram: f64) -> Result<Self, ModelError> {
        let l = Lambdas {
            unigram,
            bigram,
            trigram,
        };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let parts = [self.unigram, self.bigram, self.trigram];
        if parts.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(ModelError::InvalidSmoothing(format!(
                "interpolation weights must be finite and non-negative, got {self}"
            )));
        }
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > LAMBDA_SUM_TOLERANCE {
            return Err(ModelError::InvalidSmoothing(format!(
                "interpolation weights must sum to 1, got {sum}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Lambdas {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.unigram, self.bigram, self.trigram)
    }
}

/// Parses `a,b,c` as (unigram, bigram, trigram) weights.
impl FromStr for Lambdas {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| ModelError::InvalidSmoothing(format!("bad weight list {s:?}: {e}")))?;
        match parts[..] {
            [a, b, c] => Lambdas::new(a, b, c),
            _ => Err(ModelError::InvalidSmoothing(format!(
                "expected three comma-separated weights, got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoothing {
    /// Raw relative frequencies, with 0/0 taken as 0.
    None,
    /// Add `k` to every transition count.
    AddK(f64),
    /// Linear interpolation of trigram, bigram and unigram estimates. With
    /// `None` the weights are estimated from the counts when the model is
    /// finalized.
    Interpolation(Option<Lambdas>),
}

impl Smoothing {
    pub fn name(&self) -> &'static str {
        match self {
            Smoothing::None => "none",
            Smoothing::AddK(_) => "addk",
            Smoothing::Interpolation(_) => "interp",
        }
    }
}

/// Emission estimate for words never seen in training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OovMode {
    /// Uniform over the open-class tags, zero elsewhere.
    #[default]
    UniformOpenClass,
    /// Tag distribution of words seen exactly once in training.
    SingletonTagDistribution,
}

impl OovMode {
    pub fn name(&self) -> &'static str {
        match self {
            OovMode::UniformOpenClass => "uniform",
            OovMode::SingletonTagDistribution => "singleton",
        }
    }
}

impl FromStr for OovMode {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(OovMode::UniformOpenClass),
            "singleton" => Ok(OovMode::SingletonTagDistribution),
            other => Err(ModelError::InvalidSmoothing(format!(
                "unknown OOV mode {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingConfig {
    pub mode: Smoothing,
    pub oov: OovMode,
}

impl SmoothingConfig {
    pub fn new(mode: Smoothing, oov: OovMode) -> Self {
        SmoothingConfig { mode, oov }
    }

    pub fn none() -> Self {
        SmoothingConfig::new(Smoothing::None, OovMode::default())
    }

    pub fn add_k(k: f64) -> Self {
        SmoothingConfig::new(Smoothing::AddK(k), OovMode::default())
    }

    pub fn interpolation() -> Self {
        SmoothingConfig::new(Smoothing::Interpolation(None), OovMode::default())
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        match self.mode {
            Smoothing::AddK(k) if !(k.is_finite() && k > 0.0) => Err(ModelError::InvalidSmoothing(
                format!("add-k constant must be positive, got {k}"),
            )),
            Smoothing::Interpolation(Some(l)) => l.validate(),
            _ => Ok(()),
        }
    }
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        SmoothingConfig::interpolation()
    }
}
