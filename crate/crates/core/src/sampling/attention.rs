use rand::Rng;

use super::RandomStream;
use crate::error::{Error, Result};

/// Mean attention `q_t` paid to one kind of recommendation.
#[derive(Clone, Debug, PartialEq)]
pub enum AttentionSchedule {
    Constant(f64),
    /// `q_t = c / (t + 1)^gamma`
    PowerDecay {
        c: f64,
        gamma: f64,
    },
    /// `q_t = values[t]`; the last value is held after the list ends.
    Scripted(Vec<f64>),
}

impl AttentionSchedule {
    pub fn validate(&self, field: &str) -> Result<()> {
        let unit = |q: f64| (0.0..=1.0).contains(&q);
        match self {
            AttentionSchedule::Constant(q) if !unit(*q) => Err(Error::validation(
                format!("{field}.q"),
                "must lie in [0, 1]",
            )),
            AttentionSchedule::PowerDecay { c, .. } if !unit(*c) => Err(Error::validation(
                format!("{field}.c"),
                "must lie in [0, 1]",
            )),
            AttentionSchedule::PowerDecay { gamma, .. }
                if !(gamma.is_finite() && *gamma >= 0.0) =>
            {
                Err(Error::validation(
                    format!("{field}.gamma"),
                    "must be finite and ≥ 0",
                ))
            }
            AttentionSchedule::Scripted(v) if v.is_empty() => Err(Error::validation(
                format!("{field}.values"),
                "must not be empty",
            )),
            AttentionSchedule::Scripted(v) if !v.iter().all(|&q| unit(q)) => Err(
                Error::validation(format!("{field}.values"), "entries must lie in [0, 1]"),
            ),
            _ => Ok(()),
        }
    }

    pub fn mean_at(&self, t: u64) -> f64 {
        match self {
            AttentionSchedule::Constant(q) => *q,
            AttentionSchedule::PowerDecay { c, gamma } => c / ((t + 1) as f64).powf(*gamma),
            AttentionSchedule::Scripted(v) => v[(t as usize).min(v.len() - 1)],
        }
    }

    /// Whether the means are the same at every slot.
    pub fn constant_value(&self) -> Option<f64> {
        match self {
            AttentionSchedule::Constant(q) => Some(*q),
            AttentionSchedule::PowerDecay { c, .. } if *c == 0.0 => Some(0.0),
            AttentionSchedule::PowerDecay { c, gamma } if *gamma == 0.0 => Some(*c),
            _ => None,
        }
    }

    /// Whether the series of means converges; `None` for scripted schedules.
    pub fn summable(&self) -> Option<bool> {
        match self {
            AttentionSchedule::Constant(q) => Some(*q == 0.0),
            AttentionSchedule::PowerDecay { c, gamma } => Some(*c == 0.0 || *gamma > 1.0),
            AttentionSchedule::Scripted(_) => None,
        }
    }
}

/// One Bernoulli(`q_t`) coin, drawn from the given substream.
pub fn sample_attention(sched: &AttentionSchedule, t: u64, stream: RandomStream) -> bool {
    let q = sched.mean_at(t);
    if q <= 0.0 {
        return false;
    }
    if q >= 1.0 {
        return true;
    }
    stream.rng().random::<f64>() < q
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummabilityReport {
    pub summable: Option<bool>,
    pub partial_sum: f64,
    pub horizon: u64,
}

/// Classification plus `sum_{t < horizon} q_t`, accumulated in slot order.
pub fn summability_report(sched: &AttentionSchedule, horizon: u64) -> SummabilityReport {
    let partial_sum = (0..horizon)
        .map(|t| sched.mean_at(t))
        .fold(0.0, |acc, q| acc + q);
    SummabilityReport {
        summable: sched.summable(),
        partial_sum,
        horizon,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Purpose;

    fn stream(run: u64) -> RandomStream {
        RandomStream::new(5, run, 0, Purpose::PositiveAttention)
    }

    #[test]
    fn degenerate_coins() {
        for run in 0..200 {
            assert!(!sample_attention(
                &AttentionSchedule::Constant(0.0),
                3,
                stream(run)
            ));
            assert!(sample_attention(
                &AttentionSchedule::Constant(1.0),
                3,
                stream(run)
            ));
        }
    }

    #[test]
    fn power_decay_mean_at_zero_matches_c() {
        let sched = AttentionSchedule::PowerDecay { c: 0.5, gamma: 2.0 };
        let draws = 100_000;
        let hits = (0..draws)
            .filter(|&r| sample_attention(&sched, 0, stream(r)))
            .count();
        let mean = hits as f64 / draws as f64;
        let sigma = (0.5f64 * 0.5 / draws as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma, "mean {mean}");
        assert_eq!(sched.mean_at(3), 0.5 / 16.0);
    }

    #[test]
    fn classification() {
        assert_eq!(AttentionSchedule::Constant(0.3).summable(), Some(false));
        assert_eq!(AttentionSchedule::Constant(0.0).summable(), Some(true));
        assert_eq!(
            AttentionSchedule::PowerDecay { c: 1.0, gamma: 2.0 }.summable(),
            Some(true)
        );
        assert_eq!(
            AttentionSchedule::PowerDecay { c: 1.0, gamma: 1.0 }.summable(),
            Some(false)
        );
        assert_eq!(AttentionSchedule::Scripted(vec![0.1]).summable(), None);
    }

    #[test]
    fn basel_partial_sum() {
        let r = summability_report(
            &AttentionSchedule::PowerDecay { c: 1.0, gamma: 2.0 },
            1_000_000,
        );
        let basel = std::f64::consts::PI.powi(2) / 6.0;
        assert!((r.partial_sum - basel).abs() < 1e-5, "{}", r.partial_sum);
        assert_eq!(r.summable, Some(true));
    }

    #[test]
    fn scripted_holds_last_value() {
        let s = AttentionSchedule::Scripted(vec![0.2, 0.7]);
        assert_eq!(s.mean_at(0), 0.2);
        assert_eq!(s.mean_at(1), 0.7);
        assert_eq!(s.mean_at(50), 0.7);
        let r = summability_report(&s, 4);
        assert_eq!(r.summable, None);
        assert!((r.partial_sum - 2.3).abs() < 1e-12);
    }

    #[test]
    fn validation_rejects_out_of_range() {
        assert!(AttentionSchedule::Constant(1.5).validate("a").is_err());
        assert!(AttentionSchedule::PowerDecay {
            c: 0.5,
            gamma: -1.0
        }
        .validate("a")
        .is_err());
        assert!(AttentionSchedule::Scripted(vec![]).validate("a").is_err());
        assert!(AttentionSchedule::Constant(0.5).validate("a").is_ok());
    }
}
