use std::fmt;

use crate::dynamics::TrajectoryRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DivergenceMode {
    /// Watch `M = max |s_i|`.
    MaxAbs,
    /// Watch `gap = max s_i - min s_i`.
    MaxGap,
}

impl DivergenceMode {
    pub fn name(self) -> &'static str {
        match self {
            DivergenceMode::MaxAbs => "max_abs",
            DivergenceMode::MaxGap => "max_gap",
        }
    }
}

impl fmt::Display for DivergenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-node limits when every node's oscillation over the trailing `window`
/// slots is below `eps`. Limits are the trailing-window means.
///
/// Returns `None` if the record covers fewer than `window` slots or the
/// window holds fewer than two recorded states.
pub fn detect_convergence(traj: &TrajectoryRecord, window: u64, eps: f64) -> Option<Vec<f64>> {
    let last = traj.states.last()?.t;
    if last < window {
        return None;
    }
    let start = last - window;
    let from = traj.states.partition_point(|s| s.t < start);
    let tail = &traj.states[from..];
    if tail.len() < 2 {
        return None;
    }
    let n = traj.n();
    let mut limits = Vec::with_capacity(n);
    for i in 0..n {
        let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for s in tail {
            let x = s.s[i];
            lo = lo.min(x);
            hi = hi.max(x);
            sum += x;
        }
        if (hi - lo).is_nan() || hi - lo >= eps {
            return None;
        }
        limits.push(sum / tail.len() as f64);
    }
    Some(limits)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BipolarVerdict {
    Match {
        /// Mean of the `V1` limits.
        y_star: f64,
        /// `|y*| <= ||s(0)||_1 + eps`, when `s(0)` was supplied.
        within_l1_bound: Option<bool>,
    },
    Mismatch,
}

impl BipolarVerdict {
    pub fn is_match(&self) -> bool {
        matches!(self, BipolarVerdict::Match { .. })
    }
}

fn spread_and_mean(limits: &[f64], side: &[usize]) -> (f64, f64) {
    let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
    for &i in side {
        lo = lo.min(limits[i]);
        hi = hi.max(limits[i]);
        sum += limits[i];
    }
    (hi - lo, sum / side.len() as f64)
}

/// Whether the limits settle at `y*` on `V1` and `-y*` on `V2`.
pub fn detect_bipolar_clustering(
    limits: &[f64],
    partition: (&[usize], &[usize]),
    eps: f64,
    initial: Option<&[f64]>,
) -> BipolarVerdict {
    let (v1, v2) = partition;
    if v1.is_empty() || v2.is_empty() {
        return BipolarVerdict::Mismatch;
    }
    let (spread1, mean1) = spread_and_mean(limits, v1);
    let (spread2, mean2) = spread_and_mean(limits, v2);
    if spread1 <= eps && spread2 <= eps && (mean1 + mean2).abs() <= eps {
        let within_l1_bound =
            initial.map(|s0| mean1.abs() <= s0.iter().map(|x| x.abs()).sum::<f64>() + eps);
        BipolarVerdict::Match {
            y_star: mean1,
            within_l1_bound,
        }
    } else {
        BipolarVerdict::Mismatch
    }
}

/// First recorded slot whose metric reaches `threshold`.
pub fn detect_divergence(
    traj: &TrajectoryRecord,
    threshold: f64,
    mode: DivergenceMode,
) -> Option<u64> {
    traj.states.iter().zip(&traj.metrics).find_map(|(s, m)| {
        let v = match mode {
            DivergenceMode::MaxAbs => m.max_abs,
            DivergenceMode::MaxGap => m.gap,
        };
        (v >= threshold).then_some(s.t)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurvivorMode {
    /// Track `|s_i|` per node.
    Nodes,
    /// Track `|s_i - s_j|` per unordered pair.
    Pairs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Member {
    Node(usize),
    Pair(usize, usize),
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Member::Node(i) => write!(f, "{i}"),
            Member::Pair(i, j) => write!(f, "{i}-{j}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub member: Member,
    /// First recorded slot at or above the threshold.
    pub slot: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoSurvivorReport {
    pub crossings: Vec<Crossing>,
}

impl NoSurvivorReport {
    pub fn all_crossed(&self) -> bool {
        self.crossings.iter().all(|c| c.slot.is_some())
    }

    pub fn survivors(&self) -> Vec<Member> {
        self.crossings
            .iter()
            .filter(|c| c.slot.is_none())
            .map(|c| c.member)
            .collect()
    }
}

/// Whether every node (or every pair) individually reaches `threshold`.
pub fn detect_no_survivor(
    traj: &TrajectoryRecord,
    threshold: f64,
    mode: SurvivorMode,
) -> NoSurvivorReport {
    let n = traj.n();
    let members: Vec<Member> = match mode {
        SurvivorMode::Nodes => (0..n).map(Member::Node).collect(),
        SurvivorMode::Pairs => (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| Member::Pair(i, j)))
            .collect(),
    };
    let crossings = members
        .into_iter()
        .map(|member| {
            let value = |s: &[f64]| match member {
                Member::Node(i) => s[i].abs(),
                Member::Pair(i, j) => (s[i] - s[j]).abs(),
            };
            let slot = traj
                .states
                .iter()
                .find(|s| value(&s.s) >= threshold)
                .map(|s| s.t);
            Crossing { member, slot }
        })
        .collect();
    NoSurvivorReport { crossings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(f: impl Fn(u64) -> Vec<f64>, horizon: u64) -> TrajectoryRecord {
        TrajectoryRecord::from_states((0..=horizon).map(|t| (t, f(t))))
    }

    #[test]
    fn convergence_examples() {
        let constant = record(|_| vec![1.0, -2.0, 3.5], 200);
        assert_eq!(
            detect_convergence(&constant, 100, 1e-6),
            Some(vec![1.0, -2.0, 3.5])
        );

        let flip = record(|t| vec![if t % 2 == 0 { 1.0 } else { -1.0 }; 3], 200);
        assert_eq!(detect_convergence(&flip, 100, 1.99), None);

        let decay = record(|t| vec![0.5f64.powi(t as i32); 3], 100);
        let limits = detect_convergence(&decay, 50, 1e-6).unwrap();
        assert!(limits.iter().all(|x| x.abs() < 1e-6));
    }

    #[test]
    fn convergence_needs_history() {
        let short = record(|_| vec![0.0; 3], 10);
        assert_eq!(detect_convergence(&short, 50, 1e-6), None);
        let single = TrajectoryRecord::from_states([(0, vec![0.0; 3])]);
        assert_eq!(detect_convergence(&single, 0, 1e-6), None);
    }

    #[test]
    fn convergence_on_strided_records() {
        let strided = TrajectoryRecord::from_states((0..=20).map(|k| (k * 10, vec![1.0; 3])));
        assert_eq!(detect_convergence(&strided, 100, 1e-6), Some(vec![1.0; 3]));
    }

    #[test]
    fn bipolar_examples() {
        let p: (&[usize], &[usize]) = (&[0, 1], &[2, 3]);
        assert_eq!(
            detect_bipolar_clustering(&[2.0, 2.0, -2.0, -2.0], p, 1e-6, None),
            BipolarVerdict::Match {
                y_star: 2.0,
                within_l1_bound: None
            }
        );
        assert!(matches!(
            detect_bipolar_clustering(&[0.0; 4], p, 1e-6, None),
            BipolarVerdict::Match { y_star, .. } if y_star == 0.0
        ));
        assert_eq!(
            detect_bipolar_clustering(&[2.0, 2.0, -1.9, -2.0], p, 1e-3, None),
            BipolarVerdict::Mismatch
        );
        let bounded = detect_bipolar_clustering(
            &[2.0, 2.0, -2.0, -2.0],
            p,
            1e-6,
            Some(&[1.0, 0.5, 0.0, -0.25]),
        );
        assert!(matches!(
            bounded,
            BipolarVerdict::Match {
                within_l1_bound: Some(false),
                ..
            }
        ));
    }

    #[test]
    fn divergence_examples() {
        let bounded = record(|t| vec![(t as f64).sin(); 3], 100);
        assert_eq!(
            detect_divergence(&bounded, 1e6, DivergenceMode::MaxAbs),
            None
        );

        let doubling = record(|t| vec![2.0f64.powi(t as i32), 0.0, 0.0], 30);
        assert_eq!(
            detect_divergence(&doubling, 1e6, DivergenceMode::MaxAbs),
            Some(20)
        );

        let gap = record(|_| vec![0.0, 5.0, 2.0], 10);
        assert_eq!(
            detect_divergence(&gap, 4.0, DivergenceMode::MaxGap),
            Some(0)
        );
    }

    #[test]
    fn survivor_examples() {
        let all = record(
            |t| {
                vec![
                    10f64.powi(t as i32),
                    -(10f64.powi(t as i32)),
                    3.0 * 10f64.powi(t as i32),
                ]
            },
            8,
        );
        let r = detect_no_survivor(&all, 1e6, SurvivorMode::Nodes);
        assert!(r.all_crossed());
        assert_eq!(r.crossings[0].slot, Some(6));
        assert_eq!(r.crossings[2].slot, Some(6));

        let pinned = record(
            |t| vec![10f64.powi(t as i32), 0.0, -(10f64.powi(t as i32))],
            8,
        );
        let r = detect_no_survivor(&pinned, 1e6, SurvivorMode::Nodes);
        assert_eq!(r.survivors(), vec![Member::Node(1)]);

        let twins = record(|t| vec![10f64.powi(t as i32), 10f64.powi(t as i32), 0.0], 8);
        let r = detect_no_survivor(&twins, 1e6, SurvivorMode::Pairs);
        assert_eq!(r.survivors(), vec![Member::Pair(0, 1)]);
    }

    proptest! {
        #[test]
        fn bipolar_is_sign_flip_invariant(
            limits in proptest::collection::vec(-3.0f64..3.0, 6),
            mask in 1u8..63,
            snap: bool,
        ) {
            let v1: Vec<usize> = (0..6).filter(|i| mask & (1 << i) != 0).collect();
            let v2: Vec<usize> = (0..6).filter(|i| mask & (1 << i) == 0).collect();
            let mut limits = limits;
            if snap {
                // Force an exact pattern so that both outcomes are exercised.
                let y = limits[0];
                for &i in &v1 { limits[i] = y; }
                for &i in &v2 { limits[i] = -y; }
            }
            let flipped: Vec<f64> = limits.iter().map(|x| -x).collect();
            let a = detect_bipolar_clustering(&limits, (&v1, &v2), 1e-6, None);
            let b = detect_bipolar_clustering(&flipped, (&v2, &v1), 1e-6, None);
            prop_assert_eq!(a.is_match(), b.is_match());
            if let (BipolarVerdict::Match { y_star: ya, .. }, BipolarVerdict::Match { y_star: yb, .. }) = (a, b) {
                prop_assert!((ya - yb).abs() <= 1e-6);
            }
            if snap {
                prop_assert!(a.is_match());
            }
        }
    }
}
