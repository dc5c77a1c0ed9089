//! Rigid-body pose helpers shared by the mooring and assembly code.

use nalgebra::{Matrix3, Vector3};

/// Rotation for Euler angles (roll, pitch, yaw) applied as Rz·Ry·Rx.
pub fn rotation(pose: &[f64; 6]) -> Matrix3<f64> {
    let (sx, cx) = pose[3].sin_cos();
    let (sy, cy) = pose[4].sin_cos();
    let (sz, cz) = pose[5].sin_cos();
    let rx = Matrix3::new(1.0, 0.0, 0.0, 0.0, cx, -sx, 0.0, sx, cx);
    let ry = Matrix3::new(cy, 0.0, sy, 0.0, 1.0, 0.0, -sy, 0.0, cy);
    let rz = Matrix3::new(cz, -sz, 0.0, sz, cz, 0.0, 0.0, 0.0, 1.0);
    rz * ry * rx
}

/// Absolute position of a body-fixed point.
pub fn point_position(pose: &[f64; 6], local: &[f64; 3]) -> Vector3<f64> {
    Vector3::new(pose[0], pose[1], pose[2]) + rotation(pose) * Vector3::from_row_slice(local)
}

/// Velocity of a body-fixed point, treating angle rates as angular velocity.
pub fn point_velocity(pose: &[f64; 6], vel: &[f64; 6], local: &[f64; 3]) -> Vector3<f64> {
    let arm = rotation(pose) * Vector3::from_row_slice(local);
    Vector3::new(vel[0], vel[1], vel[2]) + Vector3::new(vel[3], vel[4], vel[5]).cross(&arm)
}

/// Net force and moment about the displaced body origin from point forces.
pub fn wrench_about(origin: &Vector3<f64>, points: &[Vector3<f64>], forces: &[Vector3<f64>]) -> [f64; 6] {
    let mut out = [0.0; 6];
    for (p, f) in points.iter().zip(forces) {
        let m = (p - origin).cross(f);
        for k in 0..3 {
            out[k] += f[k];
            out[k + 3] += m[k];
        }
    }
    out
}
