//! Closed-form coincidences of the lossy Mach–Zehnder interferometer, with the
//! pair injected into ports 1 and 2 and port 3 as the loss channel.
//! `θ ∈ [0, π/2]` is the ancilla coupling (`cos θ = η`), `γ ∈ [0, 1]` the
//! pair coherence.

/// Coincidences between the two interferometer outputs:
/// `(cos²θ + 1)²/8 − γ cos²θ/2 + γ sin⁴θ/8`.
pub fn p12_closed(theta: f64, gamma: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let (c2, s2) = (c * c, s * s);
    (c2 + 1.0).powi(2) / 8.0 - gamma * c2 / 2.0 + gamma * s2 * s2 / 8.0
}

/// Coincidences between output 1 and the loss channel:
/// `(cos²θ + 1) sin²θ / 4 − γ sin⁴θ / 4`.
pub fn p13_closed(theta: f64, gamma: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let s2 = s * s;
    (c * c + 1.0) * s2 / 4.0 - gamma * s2 * s2 / 4.0
}
