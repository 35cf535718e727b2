//! Coupling profiles of open XX chains.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymTridiagonal;

/// Shape of a coupling profile, in units of the reference coupling `J`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PatternKind {
    Uniform,
    /// Weak (λ) and strong (1) bonds alternating, weak at both ends.
    Alternating { lambda: f64 },
    /// Alternating segments of `ntilde` sites at both ends around a uniform bulk.
    Hybrid { lambda: f64, ntilde: usize },
    /// Uniform bulk with weak end bonds λ.
    EndProbe { lambda: f64 },
    /// Weak end bonds λ, strong next-to-end bonds μ, uniform bulk.
    LambdaMu { lambda: f64, mu: f64 },
    /// Explicit bond ratios, one per bond.
    Custom { ratios: Vec<f64> },
}

/// A coupling profile together with its energy scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingPattern {
    pub kind: PatternKind,
    /// Scale of all bonds; everything downstream is reported in this unit.
    pub scale: f64,
}

/// Bond strengths `J_1 … J_{N−1}` of an `N`-site chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bonds(Vec<f64>);

impl Bonds {
    pub fn new(bonds: Vec<f64>) -> Result<Self> {
        if bonds.is_empty() {
            return Err(Error::InvalidParameter("a chain needs at least one bond".into()));
        }
        if let Some(b) = bonds.iter().find(|b| !b.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite bond {b}")));
        }
        Ok(Self(bonds))
    }

    pub fn sites(&self) -> usize {
        self.0.len() + 1
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.iter().map(|b| b * factor).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, b| m.max(b.abs()))
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Bonds {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidPattern(format!("lambda must lie in (0, 1], got {lambda}")));
    }
    Ok(())
}

impl CouplingPattern {
    pub fn new(kind: PatternKind) -> Self {
        Self { kind, scale: 1.0 }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn uniform() -> Self {
        Self::new(PatternKind::Uniform)
    }

    pub fn alternating(lambda: f64) -> Self {
        Self::new(PatternKind::Alternating { lambda })
    }

    pub fn hybrid(lambda: f64, ntilde: usize) -> Self {
        Self::new(PatternKind::Hybrid { lambda, ntilde })
    }

    pub fn end_probe(lambda: f64) -> Self {
        Self::new(PatternKind::EndProbe { lambda })
    }

    pub fn lambda_mu(lambda: f64, mu: f64) -> Self {
        Self::new(PatternKind::LambdaMu { lambda, mu })
    }

    pub fn custom(ratios: Vec<f64>) -> Self {
        Self::new(PatternKind::Custom { ratios })
    }

    /// Checks parameter domains that do not depend on the chain length.
    pub fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidPattern(format!(
                "coupling scale must be positive and finite, got {}",
                self.scale
            )));
        }
        match &self.kind {
            PatternKind::Uniform => Ok(()),
            PatternKind::Alternating { lambda }
            | PatternKind::Hybrid { lambda, .. }
            | PatternKind::EndProbe { lambda } => check_lambda(*lambda),
            PatternKind::LambdaMu { lambda, mu } => {
                check_lambda(*lambda)?;
                if !(mu.is_finite() && *mu >= 1.0) {
                    return Err(Error::InvalidPattern(format!("mu must be ≥ 1, got {mu}")));
                }
                Ok(())
            }
            PatternKind::Custom { ratios } => {
                if ratios.is_empty() {
                    return Err(Error::InvalidPattern("custom pattern has no ratios".into()));
                }
                if let Some(r) = ratios.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
                    return Err(Error::InvalidPattern(format!(
                        "custom ratios must be strictly positive, got {r}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Natural chain length for patterns that fix it (custom profiles).
    pub fn fixed_sites(&self) -> Option<usize> {
        match &self.kind {
            PatternKind::Custom { ratios } => Some(ratios.len() + 1),
            _ => None,
        }
    }
}

/// Bond strengths of `pattern` on an `n_sites` chain (bond `i` couples sites `i`, `i+1`).
pub fn build_couplings(pattern: &CouplingPattern, n_sites: usize) -> Result<Bonds> {
    pattern.validate()?;
    if n_sites < 2 {
        return Err(Error::InvalidPattern(format!("a chain needs at least 2 sites, got {n_sites}")));
    }
    let nb = n_sites - 1;
    let j = pattern.scale;
    // 1-based bond index parity: odd bonds are the weak ones.
    let alternating = |i: usize, lambda: f64| if i % 2 == 1 { lambda * j } else { j };
    let bonds: Vec<f64> = match &pattern.kind {
        PatternKind::Uniform => vec![j; nb],
        PatternKind::Alternating { lambda } => {
            if !n_sites.is_multiple_of(2) {
                return Err(Error::InvalidPattern(format!(
                    "alternating pattern needs an even number of sites so both end bonds are weak, got {n_sites}"
                )));
            }
            (1..=nb).map(|i| alternating(i, *lambda)).collect()
        }
        PatternKind::Hybrid { lambda, ntilde } => {
            if !n_sites.is_multiple_of(2) {
                return Err(Error::InvalidPattern(format!(
                    "hybrid pattern needs an even number of sites so both end bonds are weak, got {n_sites}"
                )));
            }
            if *ntilde < 2 || *ntilde > n_sites / 2 {
                return Err(Error::InvalidPattern(format!(
                    "hybrid pattern needs 2 ≤ ntilde ≤ {}, got {ntilde}",
                    n_sites / 2
                )));
            }
            (1..=nb)
                .map(|i| {
                    if i < *ntilde || i >= n_sites - ntilde {
                        alternating(i, *lambda)
                    } else {
                        j
                    }
                })
                .collect()
        }
        PatternKind::EndProbe { lambda } => {
            if n_sites < 3 {
                return Err(Error::InvalidPattern(format!(
                    "end-probe pattern needs at least 3 sites, got {n_sites}"
                )));
            }
            (1..=nb)
                .map(|i| if i == 1 || i == nb { lambda * j } else { j })
                .collect()
        }
        PatternKind::LambdaMu { lambda, mu } => {
            if n_sites < 6 {
                return Err(Error::InvalidPattern(format!(
                    "lambda-mu pattern needs at least 6 sites, got {n_sites}"
                )));
            }
            (1..=nb)
                .map(|i| {
                    if i == 1 || i == nb {
                        lambda * j
                    } else if i == 2 || i == nb - 1 {
                        mu * j
                    } else {
                        j
                    }
                })
                .collect()
        }
        PatternKind::Custom { ratios } => {
            if ratios.len() != nb {
                return Err(Error::InvalidPattern(format!(
                    "custom pattern has {} ratios but a {n_sites}-site chain has {nb} bonds",
                    ratios.len()
                )));
            }
            ratios.iter().map(|r| r * j).collect()
        }
    };
    Bonds::new(bonds)
}

/// Multiplicative bond disorder: every bond is scaled by `1 + χ_i`, with
/// `χ_i` uniform on `[−χ̄, χ̄]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    pub chi_bar: f64,
    pub seed: u64,
    pub samples: usize,
}

impl DisorderSpec {
    pub fn new(chi_bar: f64, seed: u64, samples: usize) -> Result<Self> {
        let spec = Self {
            chi_bar,
            seed,
            samples,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.chi_bar >= 0.0 && self.chi_bar < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "disorder half-width must lie in [0, 1), got {}",
                self.chi_bar
            )));
        }
        if self.samples == 0 {
            return Err(Error::InvalidParameter("at least one disorder sample is required".into()));
        }
        Ok(())
    }

    /// Random stream of one sample; independent of every other sample index.
    fn rng(&self, sample_index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(sample_index as u64);
        rng
    }
}

/// Perturbed copy of `bonds` for disorder realization `sample_index`.
pub fn apply_disorder(bonds: &Bonds, spec: &DisorderSpec, sample_index: usize) -> Result<Bonds> {
    spec.validate()?;
    if sample_index >= spec.samples {
        return Err(Error::InvalidParameter(format!(
            "sample index {sample_index} out of range for {} samples",
            spec.samples
        )));
    }
    if spec.chi_bar == 0.0 {
        return Ok(bonds.clone());
    }
    let mut rng = spec.rng(sample_index);
    let chi = spec.chi_bar;
    Bonds::new(
        bonds
            .iter()
            .map(|b| b * (1.0 + rng.random_range(-chi..=chi)))
            .collect(),
    )
}

/// One-body hopping matrix of the Jordan–Wigner fermions: zero diagonal,
/// off-diagonal `J_i / 2`.
pub fn build_adjacency(bonds: &Bonds) -> SymTridiagonal {
    SymTridiagonal::with_zero_diagonal(bonds.iter().map(|b| 0.5 * b).collect())
        .expect("bonds are finite and non-empty by construction")
}

impl fmt::Display for CouplingPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PatternKind::Uniform => write!(f, "uniform")?,
            PatternKind::Alternating { lambda } => write!(f, "alternating:lambda={lambda}")?,
            PatternKind::Hybrid { lambda, ntilde } => {
                write!(f, "hybrid:lambda={lambda},ntilde={ntilde}")?
            }
            PatternKind::EndProbe { lambda } => write!(f, "endprobe:lambda={lambda}")?,
            PatternKind::LambdaMu { lambda, mu } => write!(f, "lambdamu:lambda={lambda},mu={mu}")?,
            PatternKind::Custom { ratios } => {
                let list: Vec<String> = ratios.iter().map(|r| r.to_string()).collect();
                write!(f, "custom:{}", list.join(","))?
            }
        }
        if self.scale != 1.0 {
            let sep = if matches!(self.kind, PatternKind::Uniform) { ":" } else { "," };
            let sep = if matches!(self.kind, PatternKind::Custom { .. }) { ";" } else { sep };
            write!(f, "{sep}j={}", self.scale)?;
        }
        Ok(())
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidPattern(format!("cannot parse {key}={value:?} as a number")))
}

impl FromStr for CouplingPattern {
    type Err = Error;

    /// Grammar: `name[:key=value,...]`, e.g. `alternating:lambda=0.2`,
    /// `hybrid:lambda=0.2,ntilde=5`, `endprobe:lambda=0.04`,
    /// `lambdamu:lambda=0.1,mu=4`, `custom:0.1,5,1,1,5,0.1`, `uniform`.
    /// An optional `j=<scale>` key sets the energy scale (for custom
    /// profiles it follows a `;`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let name = name.trim().to_ascii_lowercase();

        if name == "custom" {
            let (list, extra) = rest.split_once(';').unwrap_or((rest, ""));
            let ratios = list
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| parse_f64("ratio", t))
                .collect::<Result<Vec<_>>>()?;
            let mut pattern = CouplingPattern::custom(ratios);
            for kv in extra.split(',').filter(|t| !t.trim().is_empty()) {
                match kv.split_once('=') {
                    Some((k, v)) if k.trim() == "j" => pattern.scale = parse_f64("j", v)?,
                    _ => return Err(Error::InvalidPattern(format!("unexpected {kv:?} in custom pattern"))),
                }
            }
            pattern.validate()?;
            return Ok(pattern);
        }

        let mut lambda = None;
        let mut mu = None;
        let mut ntilde = None;
        let mut scale = 1.0;
        for kv in rest.split(',').filter(|t| !t.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidPattern(format!("expected key=value, got {kv:?}")))?;
            match k.trim().to_ascii_lowercase().as_str() {
                "lambda" => lambda = Some(parse_f64("lambda", v)?),
                "mu" => mu = Some(parse_f64("mu", v)?),
                "ntilde" => {
                    ntilde = Some(v.trim().parse::<usize>().map_err(|_| {
                        Error::InvalidPattern(format!("ntilde must be a positive integer, got {v:?}"))
                    })?)
                }
                "j" => scale = parse_f64("j", v)?,
                other => return Err(Error::InvalidPattern(format!("unknown key {other:?}"))),
            }
        }
        let need = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| Error::InvalidPattern(format!("pattern {name:?} requires {key}=")))
        };
        let kind = match name.as_str() {
            "uniform" => PatternKind::Uniform,
            "alternating" => PatternKind::Alternating {
                lambda: need(lambda, "lambda")?,
            },
            "hybrid" => PatternKind::Hybrid {
                lambda: need(lambda, "lambda")?,
                ntilde: ntilde
                    .ok_or_else(|| Error::InvalidPattern("pattern \"hybrid\" requires ntilde=".into()))?,
            },
            "endprobe" => PatternKind::EndProbe {
                lambda: need(lambda, "lambda")?,
            },
            "lambdamu" => PatternKind::LambdaMu {
                lambda: need(lambda, "lambda")?,
                mu: need(mu, "mu")?,
            },
            other => return Err(Error::InvalidPattern(format!("unknown pattern {other:?}"))),
        };
        let pattern = CouplingPattern { kind, scale };
        pattern.validate()?;
        Ok(pattern)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bonds(p: &CouplingPattern, n: usize) -> Vec<f64> {
        build_couplings(p, n).unwrap().into_inner()
    }

    #[test]
    fn documented_profiles() {
        assert_eq!(bonds(&CouplingPattern::alternating(0.5), 4), vec![0.5, 1.0, 0.5]);
        assert_eq!(
            bonds(&CouplingPattern::end_probe(0.04), 6),
            vec![0.04, 1.0, 1.0, 1.0, 0.04]
        );
        assert_eq!(
            bonds(&CouplingPattern::lambda_mu(0.1, 5.0), 8),
            vec![0.1, 5.0, 1.0, 1.0, 1.0, 5.0, 0.1]
        );
        assert_eq!(
            bonds(&CouplingPattern::hybrid(0.2, 3), 10),
            vec![0.2, 1.0, 1.0, 1.0, 1.0, 1.0, 0.2, 1.0, 0.2]
        );
        assert_eq!(
            bonds(&CouplingPattern::hybrid(0.2, 4), 10),
            vec![0.2, 1.0, 0.2, 1.0, 1.0, 1.0, 0.2, 1.0, 0.2]
        );
        assert_eq!(bonds(&CouplingPattern::uniform().with_scale(2.0), 3), vec![2.0, 2.0]);
    }

    #[test]
    fn invalid_lengths_rejected() {
        assert!(build_couplings(&CouplingPattern::alternating(0.5), 5).is_err());
        assert!(build_couplings(&CouplingPattern::lambda_mu(0.1, 4.0), 5).is_err());
        assert!(build_couplings(&CouplingPattern::hybrid(0.2, 6), 10).is_err());
        assert!(build_couplings(&CouplingPattern::hybrid(0.2, 1), 10).is_err());
        assert!(build_couplings(&CouplingPattern::hybrid(0.2, 3), 9).is_err());
        assert!(build_couplings(&CouplingPattern::custom(vec![1.0, 2.0]), 4).is_err());
        assert!(build_couplings(&CouplingPattern::alternating(0.0), 4).is_err());
        assert!(build_couplings(&CouplingPattern::alternating(1.5), 4).is_err());
        assert!(build_couplings(&CouplingPattern::lambda_mu(0.1, 0.5), 8).is_err());
        assert!(build_couplings(&CouplingPattern::custom(vec![1.0, -2.0]), 3).is_err());
    }

    #[test]
    fn adjacency_is_half_bonds_with_zero_diagonal() {
        let m = build_adjacency(&Bonds::new(vec![0.2, 1.0, 0.2]).unwrap());
        assert_eq!(m.off(), &[0.1, 0.5, 0.1]);
        assert!(m.has_zero_diagonal());
        let d = m.to_dense();
        assert_eq!(d[(1, 0)], 0.1);
        assert_eq!(d[(0, 2)], 0.0);
    }

    #[test]
    fn grammar_round_trip() {
        for s in [
            "uniform",
            "alternating:lambda=0.2",
            "hybrid:lambda=0.2,ntilde=5",
            "endprobe:lambda=0.04",
            "lambdamu:lambda=0.1,mu=4",
            "custom:0.1,5,1,1,5,0.1",
            "alternating:lambda=0.3,j=2",
            "custom:1,2;j=0.5",
        ] {
            let p: CouplingPattern = s.parse().unwrap();
            let again: CouplingPattern = p.to_string().parse().unwrap();
            assert_eq!(p, again, "{s}");
        }
        assert!("zigzag:lambda=0.1".parse::<CouplingPattern>().is_err());
        assert!("alternating".parse::<CouplingPattern>().is_err());
        assert!("alternating:lambda=x".parse::<CouplingPattern>().is_err());
        assert!("lambdamu:lambda=0.1,mu=0.2".parse::<CouplingPattern>().is_err());
    }

    #[test]
    fn zero_width_disorder_is_identity() {
        let clean = build_couplings(&CouplingPattern::end_probe(0.2), 12).unwrap();
        let spec = DisorderSpec::new(0.0, 3, 5).unwrap();
        assert_eq!(apply_disorder(&clean, &spec, 4).unwrap(), clean);
        assert!(apply_disorder(&clean, &spec, 5).is_err());
        assert!(DisorderSpec::new(1.0, 0, 1).is_err());
        assert!(DisorderSpec::new(0.1, 0, 0).is_err());
    }

    #[test]
    fn disorder_streams_differ_between_samples() {
        let clean = build_couplings(&CouplingPattern::uniform(), 10).unwrap();
        let spec = DisorderSpec::new(0.2, 11, 3).unwrap();
        let a = apply_disorder(&clean, &spec, 0).unwrap();
        let b = apply_disorder(&clean, &spec, 1).unwrap();
        assert_ne!(a, b);
    }

    proptest! {
        #[test]
        fn alternating_end_bonds_weak(lambda in 0.01f64..=1.0, half in 1usize..40) {
            let n = 2 * half;
            let b = bonds(&CouplingPattern::alternating(lambda), n);
            prop_assert_eq!(b[0], lambda);
            prop_assert_eq!(b[n - 2], lambda);
        }

        #[test]
        fn hybrid_limit_is_alternating(lambda in 0.01f64..=1.0, half in 2usize..40) {
            let n = 2 * half;
            prop_assert_eq!(
                bonds(&CouplingPattern::hybrid(lambda, n / 2), n),
                bonds(&CouplingPattern::alternating(lambda), n)
            );
        }

        #[test]
        fn disorder_reproducible_and_bounded(
            chi in 0.0f64..0.99, seed in any::<u64>(), idx in 0usize..1000, n in 3usize..60
        ) {
            let clean = build_couplings(&CouplingPattern::end_probe(0.3), n).unwrap();
            let spec = DisorderSpec::new(chi, seed, 1000).unwrap();
            let a = apply_disorder(&clean, &spec, idx).unwrap();
            let b = apply_disorder(&clean, &spec, idx).unwrap();
            prop_assert_eq!(&a, &b);
            for (p, c) in a.iter().zip(clean.iter()) {
                prop_assert!(*p > 0.0);
                prop_assert!(*p >= (1.0 - chi) * c - 1e-15 && *p <= (1.0 + chi) * c + 1e-15);
            }
        }
    }
}
