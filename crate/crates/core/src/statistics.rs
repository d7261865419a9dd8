//! Gaussian-state description of one triplet and its intensity statistics.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve, EvolutionMatrices, TripletParams};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Signal,
    Idler,
    Pump,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::Signal, Field::Idler, Field::Pump];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Field::Signal => "s",
            Field::Idler => "i",
            Field::Pump => "p",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pair {
    SignalIdler,
    SignalPump,
    IdlerPump,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::SignalIdler, Pair::SignalPump, Pair::IdlerPump];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn fields(self) -> (Field, Field) {
        match self {
            Pair::SignalIdler => (Field::Signal, Field::Idler),
            Pair::SignalPump => (Field::Signal, Field::Pump),
            Pair::IdlerPump => (Field::Idler, Field::Pump),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Pair::SignalIdler => "si",
            Pair::SignalPump => "sp",
            Pair::IdlerPump => "ip",
        }
    }
}

/// `num/den`, or `None` where the denominator vanishes.
pub fn ratio(num: f64, den: f64) -> Option<f64> {
    if den > 0.0 && den.is_finite() && num.is_finite() {
        Some(num / den)
    } else {
        None
    }
}

/// Coherent amplitudes `ξ` and the noise coefficients of the normal
/// characteristic function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianTripletState {
    pub xi: [Complex64; 3],
    pub b: [f64; 3],
    pub c: [Complex64; 3],
    /// Indexed by [`Pair`].
    pub d: [Complex64; 3],
    pub dbar: [Complex64; 3],
    /// Normally ordered variance of `i_s - i_i`, evaluated without the
    /// cancellation of the `Var_s + Var_i - 2 Cov_si` form.
    pub difference: f64,
}

impl GaussianTripletState {
    pub fn vacuum() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self { xi: [z; 3], b: [0.0; 3], c: [z; 3], d: [z; 3], dbar: [z; 3], difference: 0.0 }
    }

    pub fn intensity(&self, f: Field) -> f64 {
        self.chaotic(f) + self.coherent(f)
    }

    pub fn chaotic(&self, f: Field) -> f64 {
        self.b[f.index()]
    }

    pub fn coherent(&self, f: Field) -> f64 {
        self.xi[f.index()].norm_sqr()
    }

    /// `b_j = B_j + |ξ_j|²`.
    pub fn b_total(&self, f: Field) -> f64 {
        self.intensity(f)
    }

    /// `c_j = C_j + ξ_j²`.
    pub fn c_total(&self, f: Field) -> Complex64 {
        let x = self.xi[f.index()];
        self.c[f.index()] + x * x
    }

    /// `d_jk = D_jk + ξ_j ξ_k`, the mean pair amplitude `⟨a_j a_k⟩`.
    pub fn d_total(&self, p: Pair) -> Complex64 {
        let (j, k) = p.fields();
        self.d[p.index()] + self.xi[j.index()] * self.xi[k.index()]
    }

    /// `d̄_jk = -D̄_jk + ξ_j* ξ_k`, the mean `⟨a_j† a_k⟩`.
    pub fn dbar_total(&self, p: Pair) -> Complex64 {
        let (j, k) = p.fields();
        -self.dbar[p.index()] + self.xi[j.index()].conj() * self.xi[k.index()]
    }

    /// Normally ordered `⟨a†² a²⟩ - ⟨a† a⟩²`.
    pub fn variance(&self, f: Field) -> f64 {
        let b = self.b_total(f);
        b * b + self.c_total(f).norm_sqr() - 2.0 * self.coherent(f).powi(2)
    }

    /// `⟨a_j† a_k† a_j a_k⟩ - ⟨a_j† a_j⟩⟨a_k† a_k⟩`.
    pub fn covariance(&self, p: Pair) -> f64 {
        let (j, k) = p.fields();
        self.d_total(p).norm_sqr() + self.dbar_total(p).norm_sqr() - 2.0 * self.coherent(j) * self.coherent(k)
    }

    /// Normally ordered variance of the signal-idler intensity difference.
    pub fn difference_variance(&self) -> f64 {
        self.difference
    }

    /// The same quantity from the single-field moments; loses precision at
    /// high gain.
    pub fn difference_variance_direct(&self) -> f64 {
        self.variance(Field::Signal) + self.variance(Field::Idler) - 2.0 * self.covariance(Pair::SignalIdler)
    }

    /// Principal squeeze variance `1/2 + B_j - |C_j|`.
    pub fn squeeze_variance(&self, f: Field) -> f64 {
        0.5 + self.b[f.index()] - self.c[f.index()].norm()
    }

    pub fn observables(&self) -> TripletObservables {
        derived_measures(self)
    }
}

/// `ξ(z) = U ξ(0) + V ξ*(0)` and the quadratic sums of `U`, `V`.
/// Signal and idler start in vacuum.
pub fn propagate_state(ev: &EvolutionMatrices, xi0: [Complex64; 3]) -> GaussianTripletState {
    let (u, v) = (&ev.u, &ev.v);
    let mut xi = [Complex64::new(0.0, 0.0); 3];
    for (j, x) in xi.iter_mut().enumerate() {
        for k in 0..3 {
            *x += u[(j, k)] * xi0[k] + v[(j, k)] * xi0[k].conj();
        }
    }
    let mut b = [0.0; 3];
    let mut c = [Complex64::new(0.0, 0.0); 3];
    for j in 0..3 {
        for k in 0..3 {
            b[j] += v[(j, k)] * v[(j, k)];
            c[j] += u[(j, k)] * v[(j, k)];
        }
    }
    let mut d = [Complex64::new(0.0, 0.0); 3];
    let mut dbar = [Complex64::new(0.0, 0.0); 3];
    for p in Pair::ALL {
        let (j, k) = p.fields();
        let (j, k) = (j.index(), k.index());
        for l in 0..3 {
            d[p.index()] += u[(j, l)] * v[(k, l)];
            dbar[p.index()] -= v[(j, l)] * v[(k, l)];
        }
    }
    let difference = difference_variance(ev, &xi);
    GaussianTripletState { xi, b, c, d, dbar, difference }
}

/// `i_s - i_i = a_+† a_- + a_-† a_+` with `a_± = (a_s ± a_i)/√2`. The
/// evolution never mixes `a_-` with `(a_+, a_p)`, so the two factors are
/// independent and the normally ordered variance reduces to products of
/// quadrature variances, where the exponentially large parts of the
/// individual moments multiply to O(1) instead of cancelling.
fn difference_variance(ev: &EvolutionMatrices, xi: &[Complex64; 3]) -> f64 {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (u, v) = (&ev.u, &ev.v);
    // (Vq, Vp, ñ) of the fluctuations of a_± for vacuum input noise.
    let moments = |sign: f64| {
        let (mut vq, mut vp, mut n) = (0.0, 0.0, 0.0);
        for l in 0..3 {
            let ul = r * (u[(0, l)] + sign * u[(1, l)]);
            let vl = r * (v[(0, l)] + sign * v[(1, l)]);
            vq += 0.5 * (ul + vl).powi(2);
            vp += 0.5 * (ul - vl).powi(2);
            n += vl * vl;
        }
        (vq, vp, n)
    };
    let (q_plus, p_plus, n_plus) = moments(1.0);
    let (q_minus, p_minus, n_minus) = moments(-1.0);
    let alpha_plus = r * (xi[0] + xi[1]);
    let alpha_minus = r * (xi[0] - xi[1]);
    // 2|α|²(V_θ - 1/2) along the phase θ of α
    let mean_term = |alpha: Complex64, vq: f64, vp: f64| {
        let a2 = alpha.norm_sqr();
        if a2 == 0.0 {
            return 0.0;
        }
        let (re, im) = (alpha.re * alpha.re / a2, alpha.im * alpha.im / a2);
        2.0 * a2 * (re * vq + im * vp - 0.5)
    };
    q_plus * q_minus + p_plus * p_minus - 0.5 - (n_plus + n_minus)
        + mean_term(alpha_plus, q_minus, p_minus)
        + mean_term(alpha_minus, q_plus, p_plus)
}

/// State of a vacuum-seeded triplet at `z` whose pump starts in a coherent
/// state of amplitude `xi_p0` (normal ordering). The classical trajectory
/// uses the symmetric-ordering amplitude already stored in `p`.
pub fn evolve_state(p: &TripletParams, z: f64, xi_p0: f64) -> Result<GaussianTripletState> {
    let ev = evolve(p, z)?;
    let zero = Complex64::new(0.0, 0.0);
    Ok(propagate_state(&ev, [zero, zero, Complex64::new(xi_p0, 0.0)]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TripletObservables {
    pub intensity: [f64; 3],
    pub chaotic: [f64; 3],
    pub coherent: [f64; 3],
    pub variance: [f64; 3],
    /// Indexed by [`Pair`].
    pub covariance: [f64; 3],
    pub r: [Option<f64>; 3],
    pub r_pair: [Option<f64>; 3],
    pub r_si: Option<f64>,
    pub squeeze: [f64; 3],
}

pub fn derived_measures(st: &GaussianTripletState) -> TripletObservables {
    let intensity = Field::ALL.map(|f| st.intensity(f));
    let variance = Field::ALL.map(|f| st.variance(f));
    let covariance = Pair::ALL.map(|p| st.covariance(p));
    let r = Field::ALL.map(|f| {
        let i = intensity[f.index()];
        ratio(variance[f.index()], i * i).map(|x| 1.0 + x)
    });
    let r_pair = Pair::ALL.map(|p| {
        let (j, k) = p.fields();
        ratio(covariance[p.index()], intensity[j.index()] * intensity[k.index()])
    });
    let r_si = ratio(st.difference_variance(), intensity[0] + intensity[1]).map(|x| 1.0 + x);
    TripletObservables {
        intensity,
        chaotic: Field::ALL.map(|f| st.chaotic(f)),
        coherent: Field::ALL.map(|f| st.coherent(f)),
        variance,
        covariance,
        r,
        r_pair,
        r_si,
        squeeze: Field::ALL.map(|f| st.squeeze_variance(f)),
    }
}
