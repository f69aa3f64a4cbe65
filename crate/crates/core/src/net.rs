use crate::point::Point;
use crate::space::SpaceDescriptor;
use crate::{Error, Result};

/// Greedy farthest-point net over `region_samples`: returns a subset `N` such
/// that every sample lies within strict distance `epsilon` of some member.
/// Starts from the first sample and repeatedly adds the farthest remaining
/// one, so the outcome is a deterministic function of the input order.
pub fn epsilon_net(
    space: &SpaceDescriptor,
    region_samples: &[Point],
    epsilon: f64,
) -> Result<Vec<Point>> {
    epsilon_net_by(|a, b| space.distance(a, b), region_samples, epsilon)
}

/// Same construction under an arbitrary distance.
pub fn epsilon_net_by(
    distance: impl Fn(&Point, &Point) -> f64,
    region_samples: &[Point],
    epsilon: f64,
) -> Result<Vec<Point>> {
    if !(epsilon > 0.0) {
        return Err(Error::Parameter("epsilon must be positive".into()));
    }
    if region_samples.is_empty() {
        return Err(Error::Parameter("empty sample set".into()));
    }

    let mut net = vec![region_samples[0].clone()];
    // min distance from each sample to the current net
    let mut cover: Vec<f64> = region_samples
        .iter()
        .map(|p| distance(p, &region_samples[0]))
        .collect();

    loop {
        let (far_idx, far_dist) =
            cover
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |(bi, bd), (i, &d)| {
                    if d > bd {
                        (i, d)
                    } else {
                        (bi, bd)
                    }
                });
        if far_dist < epsilon {
            break;
        }
        let center = region_samples[far_idx].clone();
        for (i, p) in region_samples.iter().enumerate() {
            let d = distance(p, &center);
            if d < cover[i] {
                cover[i] = d;
            }
        }
        net.push(center);
    }
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn unit_net_on_grid() {
        let hl = catalog::half_line();
        let grid: Vec<Point> = (0..=100).map(|i| Point::scalar(i as f64 * 0.1)).collect();
        let net = epsilon_net(&hl, &grid, 1.0).unwrap();
        assert!(net.len() <= 11, "net has {} points", net.len());
        for p in &grid {
            let best = net
                .iter()
                .map(|c| hl.distance(p, c))
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1.0);
        }
    }

    #[test]
    fn huge_epsilon_gives_single_center() {
        let hl = catalog::half_line();
        let grid: Vec<Point> = (0..10).map(|i| Point::scalar(i as f64)).collect();
        let net = epsilon_net(&hl, &grid, 100.0).unwrap();
        assert_eq!(net.len(), 1);
    }

    #[test]
    fn singleton_sample() {
        let hl = catalog::half_line();
        let s = vec![Point::scalar(2.0)];
        let net = epsilon_net(&hl, &s, 0.5).unwrap();
        assert_eq!(net.len(), 1);
        assert!(net[0].approx_eq(&s[0]));
    }

    #[test]
    fn bad_epsilon() {
        let hl = catalog::half_line();
        let s = vec![Point::scalar(2.0)];
        assert!(matches!(
            epsilon_net(&hl, &s, 0.0),
            Err(Error::Parameter(_))
        ));
    }
}
