//! Single-triplet dynamics: the classical depletion solution, the quadrature
//! transfer blocks and the bosonic evolution matrices `U`, `V` with
//! `a(z) = U a(0) + V a†(0)`.

use nalgebra::{Matrix2, Matrix3};

use crate::error::{precondition, Error, Result};
use crate::ode::{integrate, Tolerance};

/// Symmetric-ordering signal amplitude of a vacuum-seeded triplet.
pub const VACUUM_AMPLITUDE: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Largest normalized symplectic residual accepted by [`assemble_uv`].
pub const SYMPLECTIC_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripletParams {
    /// `K`, 1/(m √photon).
    pub coupling: f64,
    /// Initial pump amplitude, symmetric ordering.
    pub a_p0: f64,
    /// Initial signal (= idler) amplitude.
    pub a_s0: f64,
    pub gamma: f64,
    /// Crystal length, m.
    pub length: f64,
}

impl TripletParams {
    pub fn new(coupling: f64, a_p0: f64, a_s0: f64, gamma: f64, length: f64) -> Result<Self> {
        let p = Self { coupling, a_p0, a_s0, gamma, length };
        p.validate()?;
        Ok(p)
    }

    /// Triplet starting from signal/idler vacuum with `n_pump` normally
    /// ordered pump photons (`A_p0 = √(n + 1/2)`).
    pub fn vacuum_seeded(coupling: f64, n_pump: f64, gamma: f64, length: f64) -> Result<Self> {
        if !(n_pump >= 0.0) {
            return Err(precondition(format!("pump photon number must be non-negative, got {n_pump}")));
        }
        Self::new(coupling, (n_pump + 0.5).sqrt(), VACUUM_AMPLITUDE, gamma, length)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.coupling, self.a_p0, self.a_s0, self.gamma, self.length].iter().all(|v| v.is_finite());
        if !finite {
            return Err(precondition("triplet parameters must be finite"));
        }
        if !(self.a_s0 > 0.0 && self.a_p0 >= self.a_s0) {
            return Err(precondition(format!("need A_p0 >= A_s0 > 0, got A_p0={} A_s0={}", self.a_p0, self.a_s0)));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(precondition(format!("gamma must lie in [0, 1], got {}", self.gamma)));
        }
        if self.coupling < 0.0 || self.length < 0.0 {
            return Err(precondition("coupling and length must be non-negative"));
        }
        Ok(())
    }
}

/// `atanh(b/a)` for `0 < b < a`, written with `a - b` computed from the
/// complement so that it stays accurate when `b → a`.
fn atanh_ratio(a: f64, b: f64, complement: f64) -> f64 {
    // a - b = c²/(a + b) with c² = a² - b²
    let diff = complement * complement / (a + b);
    0.5 * ((a + b) / diff).ln()
}

/// Classical depletion solution with its mirror-periodic continuation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalTrajectory {
    k: f64,
    a_p0: f64,
    a_s0: f64,
    a_ps: f64,
    h_ps: f64,
    h_s: f64,
    z0: f64,
}

impl ClassicalTrajectory {
    pub fn new(p: &TripletParams) -> Self {
        let a_ps = p.a_p0.hypot(p.a_s0);
        let h_ps = atanh_ratio(a_ps, p.a_p0, p.a_s0);
        let h_s = atanh_ratio(a_ps, p.a_s0, p.a_p0);
        let z0 = if p.coupling == 0.0 {
            f64::INFINITY
        } else if p.a_p0 == p.a_s0 {
            0.0
        } else {
            (h_ps - h_s) / (p.coupling * a_ps)
        };
        Self { k: p.coupling, a_p0: p.a_p0, a_s0: p.a_s0, a_ps, h_ps, h_s, z0 }
    }

    pub fn a_ps(&self) -> f64 {
        self.a_ps
    }

    pub fn h_ps(&self) -> f64 {
        self.h_ps
    }

    pub fn h_s(&self) -> f64 {
        self.h_s
    }

    /// Depletion half-period: the pump first reaches `A_s0` here.
    pub fn z0(&self) -> f64 {
        self.z0
    }

    /// Trajectory without dynamics (zero coupling or `A_p0 = A_s0`).
    pub fn is_static(&self) -> bool {
        self.k == 0.0 || self.z0 == 0.0
    }

    /// Half-period index and distance `K A_ps z'` on the un-mirrored branch.
    fn branch(&self, z: f64) -> (u64, f64) {
        let n = (z / self.z0).floor().max(0.0);
        let r = z - n * self.z0;
        let n = n as u64;
        let local = if n.is_multiple_of(2) { r } else { self.z0 - r };
        (n, self.k * self.a_ps * local.clamp(0.0, self.z0))
    }

    /// Magnitudes `(A_p, A_s)`; beyond `z0` the mirror `z → 2z0 - z` is
    /// applied periodically.
    pub fn amplitudes(&self, z: f64) -> (f64, f64) {
        let (a_p, a_s) = self.signed_amplitudes(z);
        (a_p.abs(), a_s)
    }

    /// Amplitudes with the pump sign that keeps the trajectory a solution of
    /// `A_s' = K A_p A_s`, `A_p' = -K A_s²`: `A_p < 0` on odd half-periods,
    /// where the signal flows back into the pump.
    pub fn signed_amplitudes(&self, z: f64) -> (f64, f64) {
        if self.is_static() {
            return (self.a_p0, self.a_s0);
        }
        let (n, u) = self.branch(z);
        let x = self.h_ps - u;
        let a_p = self.a_ps * x.tanh();
        let a_s = self.a_ps / x.cosh();
        if n % 2 == 0 {
            (a_p, a_s)
        } else {
            (-a_p, a_s)
        }
    }
}

/// Quantum parametric gain `φ(z) = -ln[cosh(u) - (A_p0/A_ps) sinh(u)]` with
/// `u = K A_ps z`, taken literally for every `z ≥ 0`.
pub fn phi(p: &TripletParams, z: f64) -> f64 {
    let t = ClassicalTrajectory::new(p);
    let u = p.coupling * t.a_ps * z;
    // cosh u - (A_p0/A_ps) sinh u = cosh(h_ps - u)/cosh(h_ps)
    -((t.h_ps - u).cosh() / t.h_ps.cosh()).ln()
}

/// Transfer blocks of the quadratures `q_± = (q_s ± q_i)/√2`, `p_±`:
/// `q_-(z) = f_q q_-(0)`, `(q_+, q_p)(z) = F_q (q_+, q_p)(0)` and likewise
/// for the `p` quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureTransfer {
    pub f_q: f64,
    pub f_p: f64,
    pub big_f_q: Matrix2<f64>,
    pub big_f_p: Matrix2<f64>,
}

impl QuadratureTransfer {
    pub fn identity() -> Self {
        Self { f_q: 1.0, f_p: 1.0, big_f_q: Matrix2::identity(), big_f_p: Matrix2::identity() }
    }

    pub fn max_difference(&self, other: &Self) -> f64 {
        let blocks = (self.big_f_q - other.big_f_q).amax().max((self.big_f_p - other.big_f_p).amax());
        blocks.max((self.f_q - other.f_q).abs()).max((self.f_p - other.f_p).abs())
    }
}

/// Un-composed `γ = 1` blocks in the variable `x = K A_ps z - h_ps`.
pub fn raw_blocks_gamma1(x: f64) -> (Matrix2<f64>, Matrix2<f64>) {
    let (s, c) = (x.sinh(), x.cosh());
    let r2 = std::f64::consts::SQRT_2;
    let fq = Matrix2::new(r2 * (c - x * s), 2.0 * s, -x - s * c, r2) / (r2 * c * c);
    let fp = Matrix2::new(r2, x + s * c, -2.0 * s, r2 * (c - x * s)) / (r2 * c);
    (fq, fp)
}

/// Un-composed `γ = 0` blocks.
pub fn raw_blocks_gamma0(x: f64) -> (Matrix2<f64>, Matrix2<f64>) {
    let c = x.cosh();
    (Matrix2::new(1.0 / c, 0.0, 0.0, 1.0), Matrix2::new(c, 0.0, 0.0, 1.0))
}

fn inverse2(m: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    m.try_inverse().ok_or_else(|| Error::Consistency("singular transfer block".into()))
}

/// Closed-form transfer for `γ ∈ {0, 1}` and `0 ≤ z ≤ z0`.
pub fn closed_form_transfer(p: &TripletParams, z: f64) -> Result<QuadratureTransfer> {
    p.validate()?;
    let t = ClassicalTrajectory::new(p);
    if z < 0.0 {
        return Err(precondition(format!("z must be non-negative, got {z}")));
    }
    if t.is_static() || z == 0.0 {
        return Ok(QuadratureTransfer::identity());
    }
    if z > t.z0 * (1.0 + 1e-12) {
        return Err(precondition(format!("closed forms hold only up to z0 = {:.6e}, got z = {z:.6e}", t.z0)));
    }
    let raw = if p.gamma == 1.0 {
        raw_blocks_gamma1
    } else if p.gamma == 0.0 {
        raw_blocks_gamma0
    } else {
        return Err(precondition(format!("no closed form for gamma = {}", p.gamma)));
    };
    let x0 = -t.h_ps;
    let x = p.coupling * t.a_ps * z + x0;
    let (fq, fp) = raw(x);
    let (fq0, fp0) = raw(x0);
    let f_q = x.cosh() / x0.cosh();
    Ok(QuadratureTransfer { f_q, f_p: 1.0 / f_q, big_f_q: fq * inverse2(&fq0)?, big_f_p: fp * inverse2(&fp0)? })
}

/// Transfer by integrating the quadrature equations with the (mirrored,
/// signed) classical amplitudes; pieces end at multiples of `z0`, where the
/// pump amplitude changes sign.
pub fn integrated_transfer(p: &TripletParams, z: f64, tol: Tolerance) -> Result<QuadratureTransfer> {
    p.validate()?;
    if z < 0.0 {
        return Err(precondition(format!("z must be non-negative, got {z}")));
    }
    let t = ClassicalTrajectory::new(p);
    if t.is_static() || z == 0.0 {
        return Ok(QuadratureTransfer::identity());
    }
    let k = p.coupling;
    let g = std::f64::consts::SQRT_2 * p.gamma * k;
    // y = [f_q, f_p, Fq(4, row-major), Fp(4, row-major)]
    let mut y = [1.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0];
    let mut start = 0.0;
    let mut piece = 0u64;
    while start < z {
        let end = (((piece + 1) as f64) * t.z0).min(z);
        // Evaluate the amplitudes strictly inside the piece so the pump sign is unambiguous.
        let mid_sign = if piece.is_multiple_of(2) { 1.0 } else { -1.0 };
        let rhs = |zz: f64, y: &[f64; 10]| {
            let (a_p, a_s) = t.amplitudes(zz);
            let a = k * a_p * mid_sign;
            let c = g * a_s;
            [
                -a * y[0],
                a * y[1],
                a * y[2] + c * y[4],
                a * y[3] + c * y[5],
                -c * y[2],
                -c * y[3],
                -a * y[6] + c * y[8],
                -a * y[7] + c * y[9],
                -c * y[6],
                -c * y[7],
            ]
        };
        y = integrate(rhs, start, end, y, tol)?;
        start = end;
        piece += 1;
    }
    Ok(QuadratureTransfer {
        f_q: y[0],
        f_p: y[1],
        big_f_q: Matrix2::new(y[2], y[3], y[4], y[5]),
        big_f_p: Matrix2::new(y[6], y[7], y[8], y[9]),
    })
}

/// Closed forms where they exist (`γ ∈ {0, 1}`, `z ≤ z0`), otherwise the
/// integrator.
pub fn transfer_matrices(p: &TripletParams, z: f64) -> Result<QuadratureTransfer> {
    p.validate()?;
    let t = ClassicalTrajectory::new(p);
    if p.coupling == 0.0 || t.is_static() || z == 0.0 {
        if z < 0.0 {
            return Err(precondition(format!("z must be non-negative, got {z}")));
        }
        return Ok(QuadratureTransfer::identity());
    }
    if (p.gamma == 0.0 || p.gamma == 1.0) && z <= t.z0 {
        closed_form_transfer(p, z)
    } else {
        integrated_transfer(p, z, Tolerance::default())
    }
}

/// Evolution matrices in the order (signal, idler, pump).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionMatrices {
    pub u: Matrix3<f64>,
    pub v: Matrix3<f64>,
}

impl EvolutionMatrices {
    pub fn identity() -> Self {
        Self { u: Matrix3::identity(), v: Matrix3::zeros() }
    }

    /// Max-norm residuals of `U Vᵀ - V Uᵀ = 0` and `U Uᵀ - V Vᵀ = 1`.
    pub fn symplectic_residuals(&self) -> (f64, f64) {
        let (u, v) = (&self.u, &self.v);
        let a = (u * v.transpose() - v * u.transpose()).amax();
        let b = (u * u.transpose() - v * v.transpose() - Matrix3::identity()).amax();
        (a, b)
    }

    /// Larger residual divided by `(1 + max|U|)²`, the scale of the products
    /// being cancelled.
    pub fn relative_symplectic_residual(&self) -> f64 {
        let (a, b) = self.symplectic_residuals();
        a.max(b) / (1.0 + self.u.amax()).powi(2)
    }
}

fn block_matrix(f: f64, big: &Matrix2<f64>) -> Matrix3<f64> {
    let r2 = std::f64::consts::SQRT_2;
    let (f11, f12, f21, f22) = (big[(0, 0)], big[(0, 1)], big[(1, 0)], big[(1, 1)]);
    0.5 * Matrix3::new(f + f11, -f + f11, r2 * f12, -f + f11, f + f11, r2 * f12, r2 * f21, r2 * f21, 2.0 * f22)
}

/// `U = (M_q + M_p)/2`, `V = (M_q - M_p)/2`.
pub fn assemble_uv(t: &QuadratureTransfer) -> Result<EvolutionMatrices> {
    let mq = block_matrix(t.f_q, &t.big_f_q);
    let mp = block_matrix(t.f_p, &t.big_f_p);
    let ev = EvolutionMatrices { u: 0.5 * (mq + mp), v: 0.5 * (mq - mp) };
    let r = ev.relative_symplectic_residual();
    if !(r <= SYMPLECTIC_GUARD) {
        return Err(Error::Consistency(format!("symplectic residual {r:.3e} exceeds {SYMPLECTIC_GUARD:e}")));
    }
    Ok(ev)
}

/// Evolution of one triplet from 0 to `z`.
pub fn evolve(p: &TripletParams, z: f64) -> Result<EvolutionMatrices> {
    assemble_uv(&transfer_matrices(p, z)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: f64, n: f64, gamma: f64) -> TripletParams {
        TripletParams::vacuum_seeded(k, n, gamma, 1.0).unwrap()
    }

    #[test]
    fn static_cases() {
        let p = params(0.0, 10.0, 1.0);
        let t = ClassicalTrajectory::new(&p);
        assert_eq!(t.amplitudes(3.0), (p.a_p0, p.a_s0));
        assert_eq!(evolve(&p, 0.7).unwrap(), EvolutionMatrices::identity());
        let q = TripletParams::new(1.0, 0.5, 0.5, 0.3, 1.0).unwrap();
        assert_eq!(ClassicalTrajectory::new(&q).z0(), 0.0);
    }

    #[test]
    fn pump_reaches_signal_level_at_z0() {
        for n in [1.0, 30.0, 1e6, 1e12] {
            let p = params(0.3, n, 1.0);
            let t = ClassicalTrajectory::new(&p);
            let (a_p, a_s) = t.amplitudes(t.z0());
            assert!((a_p - VACUUM_AMPLITUDE).abs() < 1e-9, "n={n}: {a_p}");
            assert!((a_s - p.a_p0).abs() < 1e-9 * p.a_p0);
            let lhs = 2.0 * p.coupling * t.a_ps() * t.z0();
            assert!((lhs - 2.0 * (t.h_ps() - t.h_s())).abs() < 1e-12 * lhs.max(1.0));
        }
    }

    #[test]
    fn mirror_symmetry() {
        let p = params(0.5, 20.0, 1.0);
        let t = ClassicalTrajectory::new(&p);
        let z0 = t.z0();
        for f in [0.1, 0.4, 0.9] {
            let a = t.amplitudes(f * z0);
            let b = t.amplitudes((2.0 - f) * z0);
            let c = t.amplitudes((2.0 + f) * z0);
            assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
            assert!((a.0 - c.0).abs() < 1e-12 && (a.1 - c.1).abs() < 1e-12);
        }
        assert!(t.signed_amplitudes(1.5 * z0).0 < 0.0);
    }

    #[test]
    fn phi_at_origin_and_undepleted_limit() {
        let p = params(1e-3, 1e4, 0.0);
        assert_eq!(phi(&p, 0.0), 0.0);
        let z = 0.01 / (p.coupling * p.a_p0.hypot(p.a_s0));
        let expected = p.coupling * p.a_p0 * z;
        assert!((phi(&p, z) / expected - 1.0).abs() < 0.01);
    }

    #[test]
    fn raw_blocks_at_origin_are_identity() {
        let (q, pp) = raw_blocks_gamma1(0.0);
        assert!((q - Matrix2::identity()).amax() < 1e-15);
        assert!((pp - Matrix2::identity()).amax() < 1e-15);
    }

    #[test]
    fn gamma0_closed_form_is_two_mode_squeezing() {
        let p = params(0.2, 50.0, 0.0);
        let t = ClassicalTrajectory::new(&p);
        let z = 0.7 * t.z0();
        let ev = evolve(&p, z).unwrap();
        let ph = phi(&p, z);
        let (c, s) = (ph.cosh(), ph.sinh());
        let u = Matrix3::new(c, 0.0, 0.0, 0.0, c, 0.0, 0.0, 0.0, 1.0);
        let v = Matrix3::new(0.0, s, 0.0, s, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert!((ev.u - u).amax() < 1e-10 * c);
        assert!((ev.v - v).amax() < 1e-10 * c);
    }

    #[test]
    fn integrator_matches_closed_forms() {
        for gamma in [0.0, 1.0] {
            for (k, n, f) in [(0.1, 5.0, 0.5), (0.8, 40.0, 1.0), (2.0, 3.0, 0.2)] {
                let p = params(k, n, gamma);
                let z = f * ClassicalTrajectory::new(&p).z0();
                let a = closed_form_transfer(&p, z).unwrap();
                let b = integrated_transfer(&p, z, Tolerance::default()).unwrap();
                assert!(a.max_difference(&b) < 1e-8, "gamma={gamma} k={k}: {}", a.max_difference(&b));
            }
        }
    }

    #[test]
    fn signal_decreases_past_threshold() {
        let p = params(0.3, 100.0, 0.0);
        let z0 = ClassicalTrajectory::new(&p).z0();
        let before = evolve(&p, 0.9 * z0).unwrap();
        let after = evolve(&p, 1.1 * z0).unwrap();
        assert!((before.v - after.v).amax() < 1e-7 * before.v.amax());
    }

    #[test]
    fn closed_form_rejects_general_gamma() {
        let p = params(0.3, 10.0, 0.5);
        assert!(closed_form_transfer(&p, 0.1).is_err());
    }

    #[test]
    fn invalid_params() {
        assert!(TripletParams::new(1.0, 0.1, 0.7, 0.5, 1.0).is_err());
        assert!(TripletParams::new(1.0, 1.0, 0.7, 1.5, 1.0).is_err());
        assert!(TripletParams::new(-1.0, 1.0, 0.7, 0.5, 1.0).is_err());
    }
}
