use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// 100 km/h in m/s.
pub const TOP_SPEED: f64 = 100.0 / 3.6;

/// Piecewise-constant-acceleration speed reference.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedProfile {
    pub ts: f64,
    /// m/s
    pub speed: Vec<f64>,
    /// m/s²
    pub accel: Vec<f64>,
}

/// Reproducible profile covering 0–100 km/h.
///
/// Alternates ramps at a random constant acceleration (0.5–2 m/s²) towards
/// a random target speed with random holds (5–20 s). The segment that
/// starts closest to mid-run ramps to 100 km/h so the full range is always
/// visited.
pub fn speed_profile(seed: u64, duration: f64, ts: f64) -> SpeedProfile {
    let n = (duration / ts).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut speed = Vec::with_capacity(n);
    let mut accel = Vec::with_capacity(n);

    let hold_initial = (2.0 / ts).round() as usize;
    let mut v = 0.0_f64;
    let mut forced_top = false;
    while speed.len() < n {
        let mut segment: Vec<(f64, f64)> = Vec::new();
        if speed.is_empty() {
            segment.extend(std::iter::repeat_n((0.0, 0.0), hold_initial));
        } else {
            let target = if !forced_top && speed.len() >= n / 2 {
                forced_top = true;
                TOP_SPEED
            } else {
                rng.random_range(0.0..=TOP_SPEED)
            };
            let rate: f64 = rng.random_range(0.5..=2.0);
            let a = rate * (target - v).signum();
            while (target - v).abs() > 1e-12 {
                let next = v + a * ts;
                let next = if (a > 0.0 && next > target) || (a < 0.0 && next < target) {
                    target
                } else {
                    next
                };
                segment.push((next, (next - v) / ts));
                v = next;
            }
            let hold = (rng.random_range(5.0..=20.0) / ts).round() as usize;
            segment.extend(std::iter::repeat_n((v, 0.0), hold));
        }
        for (s, a) in segment {
            if speed.len() == n {
                break;
            }
            speed.push(s);
            accel.push(a);
        }
    }
    SpeedProfile { ts, speed, accel }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_in_range() {
        let a = speed_profile(42, 600.0, 0.05);
        let b = speed_profile(42, 600.0, 0.05);
        assert_eq!(a, b);
        assert_eq!(a.speed.len(), 12_000);
        assert!(a.speed.iter().all(|v| (0.0..=TOP_SPEED + 1e-9).contains(v)));
        let top = a.speed.iter().cloned().fold(0.0, f64::max);
        assert!((top - TOP_SPEED).abs() < 1e-9);
        assert!(a.accel.iter().all(|x| x.abs() <= 2.0 + 1e-9));
        assert_ne!(speed_profile(43, 600.0, 0.05), a);
    }

    #[test]
    fn accel_is_backward_difference_of_speed() {
        let p = speed_profile(1, 200.0, 0.05);
        let mut prev = 0.0;
        for k in 0..p.speed.len() {
            assert!(((p.speed[k] - prev) / 0.05 - p.accel[k]).abs() < 1e-9);
            prev = p.speed[k];
        }
    }
}
