use serde::{Deserialize, Serialize};

use super::kinematics::Pose;
use super::world::{raycast, World};
use crate::error::{Error, Result};

/// Ultrasonic ring: eight cones, indexed right to left.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SensorConfig {
    /// Mount angles relative to the heading, radians, ascending.
    pub mount_angles: Vec<f64>,
    pub cone_half_angle: f64,
    pub max_range: f64,
    pub min_range: f64,
    pub rays_per_cone: usize,
    /// Distance from the robot center to each transducer.
    pub mount_radius: f64,
}

impl Default for SensorConfig {
    fn default() -> Self {
        // -80° .. +80°, 160° total coverage
        let mount_angles = (0..8)
            .map(|i| (-80.0 + 160.0 * i as f64 / 7.0_f64).to_radians())
            .collect();
        SensorConfig {
            mount_angles,
            cone_half_angle: 7.5_f64.to_radians(),
            max_range: 4.0,
            min_range: 0.0,
            rays_per_cone: 5,
            mount_radius: 0.18,
        }
    }
}

impl SensorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mount_angles.len() != crate::behaviors::SENSOR_COUNT {
            return Err(Error::config(format!(
                "sensor ring needs {} mounts, got {}",
                crate::behaviors::SENSOR_COUNT,
                self.mount_angles.len()
            )));
        }
        if self.mount_angles.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("sensor mount angles must ascend right to left"));
        }
        if !(self.min_range >= 0.0 && self.min_range < self.max_range && self.max_range.is_finite()) {
            return Err(Error::config("sensor range must satisfy 0 <= min < max"));
        }
        if !(self.mount_radius >= 0.0 && self.mount_radius.is_finite()) {
            return Err(Error::config("sensor mount radius must be finite and >= 0"));
        }
        if !(self.cone_half_angle >= 0.0) || self.rays_per_cone == 0 {
            return Err(Error::config("sensor cone needs a non-negative half angle and at least one ray"));
        }
        Ok(())
    }

    /// Ray directions (relative to the heading) sampled for one sensor.
    pub fn ray_offsets(&self, mount: f64) -> impl Iterator<Item = f64> + '_ {
        let n = self.rays_per_cone;
        (0..n).map(move |k| {
            if n == 1 {
                mount
            } else {
                mount - self.cone_half_angle + 2.0 * self.cone_half_angle * k as f64 / (n - 1) as f64
            }
        })
    }
}

/// Reads all sensors from `pose`. Transducers sit `mount_radius` out from the
/// center along their mount direction; each reading is the shortest ray over
/// the cone, clamped to the sensor range.
pub fn sense(world: &World, pose: &Pose, cfg: &SensorConfig) -> Vec<f64> {
    cfg.mount_angles
        .iter()
        .map(|&mount| {
            let m = pose.theta + mount;
            let origin = [pose.x + cfg.mount_radius * m.cos(), pose.y + cfg.mount_radius * m.sin()];
            cfg.ray_offsets(mount)
                .map(|off| raycast(world, origin, pose.theta + off, cfg.max_range))
                .fold(cfg.max_range, f64::min)
                .clamp(cfg.min_range, cfg.max_range)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::world::Segment;

    #[test]
    fn default_ring_is_valid() {
        let cfg = SensorConfig::default();
        cfg.validate().unwrap();
        assert!((cfg.mount_angles[0] + 80f64.to_radians()).abs() < 1e-12);
        assert!((cfg.mount_angles[7] - 80f64.to_radians()).abs() < 1e-12);
    }

    #[test]
    fn empty_world_reads_max_range() {
        let r = sense(&World::empty(), &Pose::new(0.0, 0.0, 0.4), &SensorConfig::default());
        assert_eq!(r, vec![4.0; 8]);
    }

    #[test]
    fn point_obstacle_in_one_cone() {
        let cfg = SensorConfig::default();
        let pose = Pose::new(0.5, -0.25, 0.3);
        for (i, &mount) in cfg.mount_angles.iter().enumerate() {
            let dir = pose.theta + mount;
            let (c, s) = (dir.cos(), dir.sin());
            let center = [pose.x + 1.2 * c, pose.y + 1.2 * s];
            // 2 cm plate facing the sensor
            let half = [-0.01 * s, 0.01 * c];
            let plate = Segment::new(
                [center[0] - half[0], center[1] - half[1]],
                [center[0] + half[0], center[1] + half[1]],
            );
            let world = World::from_segments(vec![plate]).unwrap();
            let readings = sense(&world, &pose, &cfg);
            for (j, r) in readings.iter().enumerate() {
                if j == i {
                    assert!((r - (1.2 - cfg.mount_radius)).abs() < 1e-9, "sensor {j} read {r}");
                } else {
                    assert_eq!(*r, 4.0, "sensor {j} should not see the plate");
                }
            }
        }
    }

    #[test]
    fn invalid_configs() {
        let mut c = SensorConfig::default();
        c.mount_angles.pop();
        assert!(c.validate().is_err());
        let mut c = SensorConfig::default();
        c.mount_angles.reverse();
        assert!(c.validate().is_err());
        let mut c = SensorConfig::default();
        c.rays_per_cone = 0;
        assert!(c.validate().is_err());
    }
}
