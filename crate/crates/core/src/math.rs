//! Small 3-vector and rotation helpers.

use core::ops::{Add, Mul, Neg, Sub};

/// A Cartesian 3-vector in the measurement frame: x East, y North, z up.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        libm::sqrt(self.dot(self))
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self * (1.0 / n))
        } else {
            None
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Row-major 3×3 rotation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    rows: [Vec3; 3],
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation {
        rows: [Vec3::X, Vec3::Y, Vec3::Z],
    };

    /// The shortest-arc rotation taking unit vector `from` onto unit vector `to`.
    pub fn between(from: Vec3, to: Vec3) -> Rotation {
        let c = from.dot(to);
        let axis = from.cross(to);
        let s = axis.norm();
        if s < 1e-12 {
            if c > 0.0 {
                return Rotation::IDENTITY;
            }
            // Antiparallel: half-turn about any axis orthogonal to `from`.
            let helper = if libm::fabs(from.x) < 0.9 { Vec3::X } else { Vec3::Y };
            let k = from.cross(helper).normalized().unwrap_or(Vec3::Z);
            return Rotation::axis_angle(k, -1.0, 0.0);
        }
        Rotation::axis_angle(axis * (1.0 / s), c, s)
    }

    /// Rodrigues rotation about unit `k` given the cosine and sine of the angle.
    fn axis_angle(k: Vec3, cos: f64, sin: f64) -> Rotation {
        let t = 1.0 - cos;
        Rotation {
            rows: [
                Vec3::new(t * k.x * k.x + cos, t * k.x * k.y - sin * k.z, t * k.x * k.z + sin * k.y),
                Vec3::new(t * k.x * k.y + sin * k.z, t * k.y * k.y + cos, t * k.y * k.z - sin * k.x),
                Vec3::new(t * k.x * k.z - sin * k.y, t * k.y * k.z + sin * k.x, t * k.z * k.z + cos),
            ],
        }
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        Vec3::new(self.rows[0].dot(v), self.rows[1].dot(v), self.rows[2].dot(v))
    }
}

/// Quasi-uniform Fibonacci-lattice directions on the unit sphere.
pub fn fibonacci_sphere(n: usize) -> impl Iterator<Item = Vec3> {
    // π(3 − √5)
    const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;
    (0..n).map(move |i| {
        let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
        let r = libm::sqrt((1.0 - z * z).max(0.0));
        let phi = GOLDEN_ANGLE * i as f64;
        Vec3::new(r * libm::cos(phi), r * libm::sin(phi), z)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Vec3, b: Vec3) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn rotation_between_maps_from_onto_to() {
        let cases = [
            (Vec3::X, Vec3::Z),
            (Vec3::new(1.0, 2.0, -0.5).normalized().unwrap(), Vec3::Z),
            (Vec3::Z, Vec3::Z),
            (-Vec3::Z, Vec3::Z),
            (Vec3::new(0.3, -0.1, 0.9).normalized().unwrap(), Vec3::Y),
        ];
        for (from, to) in cases {
            let r = Rotation::between(from, to);
            assert!(close(r.apply(from), to), "{from:?} -> {to:?}");
            // orthonormal: preserves length of an unrelated vector
            let w = Vec3::new(0.2, 0.7, -0.4);
            assert!((r.apply(w).norm() - w.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn fibonacci_directions_are_unit_and_balanced() {
        let dirs: alloc::vec::Vec<Vec3> = fibonacci_sphere(2000).collect();
        let mut sum = Vec3::ZERO;
        for d in &dirs {
            assert!((d.norm() - 1.0).abs() < 1e-9);
            sum = sum + *d;
        }
        assert!(sum.norm() / 2000.0 < 1e-3);
    }
}
