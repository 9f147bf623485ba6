//! Numerical integration of the Toda lattice of type `A_l` in its
//! `(n × n)` tridiagonal matrix form, `n = l + 1`.

use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::NodeSet;
use crate::signs::SignVector;

/// Default blow-up threshold on `max(|a_i|, |b_i|)`.
pub const DEFAULT_THRESHOLD: f64 = 1e8;

/// Time resolution of the blow-up bisection.
pub const BISECTION_TOLERANCE: f64 = 1e-6;

// smallest step the halving logic will try
const MIN_STEP: f64 = 1e-14;

/// Coordinates `(a, b)` at time `t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TodaState {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub t: f64,
}

impl TodaState {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::RankMismatch { expected: a.len(), actual: b.len() });
        }
        if a.is_empty() {
            return Err(Error::Integration("rank must be at least 1".into()));
        }
        Ok(TodaState { a, b, t: 0.0 })
    }

    /// `a = 0` and `b_i = ε_i`.
    pub fn from_signs(eps: SignVector) -> Self {
        TodaState { a: vec![0.0; eps.rank()], b: eps.values().into_iter().map(f64::from).collect(), t: 0.0 }
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    /// Matrix size `n = l + 1`.
    pub fn size(&self) -> usize {
        self.a.len() + 1
    }

    /// Signs of the `b_i`; `None` if some `b_i` vanishes.
    pub fn signs(&self) -> Option<SignVector> {
        if self.b.contains(&0.0) {
            return None;
        }
        let neg = (1..=self.rank()).filter(|&i| self.b[i - 1] < 0.0).collect();
        Some(SignVector::from_negative_set(self.rank(), neg))
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().chain(&self.b).all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().chain(&self.b).fold(0.0, |m, x| m.max(x.abs()))
    }

    fn max_abs_b(&self) -> f64 {
        self.b.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// `X = Σ a_i h_i + Σ (b_i f_i + e_i)` with `h_i = E_ii - E_{i+1,i+1}`.
pub fn assemble_matrix(state: &TodaState) -> DMatrix<f64> {
    let l = state.rank();
    let n = l + 1;
    let mut x = DMatrix::zeros(n, n);
    for i in 0..l {
        x[(i, i)] += state.a[i];
        x[(i + 1, i + 1)] -= state.a[i];
        x[(i, i + 1)] = 1.0;
        x[(i + 1, i)] = state.b[i];
    }
    x
}

/// `ȧ_i = b_i`, `ḃ_i = -b_i (C a)_i` with `C` the `A_l` Cartan matrix.
pub fn vector_field(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let l = a.len();
    let ca = |i: usize| {
        let mut v = 2.0 * a[i];
        if i > 0 {
            v -= a[i - 1];
        }
        if i + 1 < l {
            v -= a[i + 1];
        }
        v
    };
    let db = (0..l).map(|i| -b[i] * ca(i)).collect();
    (b.to_vec(), db)
}

/// One classical Runge-Kutta step. `dt` may be negative.
pub fn step(state: &TodaState, dt: f64) -> Result<TodaState> {
    if !dt.is_finite() || dt == 0.0 {
        return Err(Error::Integration(format!("step size {dt} must be finite and nonzero")));
    }
    let axpy = |x: &[f64], k: &[f64], h: f64| -> Vec<f64> { x.iter().zip(k).map(|(x, k)| x + h * k).collect() };
    let (a, b) = (&state.a, &state.b);
    let (ka1, kb1) = vector_field(a, b);
    let (ka2, kb2) = vector_field(&axpy(a, &ka1, dt / 2.0), &axpy(b, &kb1, dt / 2.0));
    let (ka3, kb3) = vector_field(&axpy(a, &ka2, dt / 2.0), &axpy(b, &kb2, dt / 2.0));
    let (ka4, kb4) = vector_field(&axpy(a, &ka3, dt), &axpy(b, &kb3, dt));
    let combine = |x: &[f64], k1: &[f64], k2: &[f64], k3: &[f64], k4: &[f64]| -> Vec<f64> {
        (0..x.len()).map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect()
    };
    Ok(TodaState {
        a: combine(a, &ka1, &ka2, &ka3, &ka4),
        b: combine(b, &kb1, &kb2, &kb3, &kb4),
        t: state.t + dt,
    })
}

/// `tr X^k` for `k = 2..=n`.
pub fn chevalley_invariants(state: &TodaState) -> Vec<f64> {
    let x = assemble_matrix(state);
    let mut p = x.clone();
    let mut out = Vec::with_capacity(state.rank());
    for _ in 2..=state.size() {
        p = &p * &x;
        out.push(p.trace());
    }
    out
}

/// Eigenvalues of `X` as `(re, im)` pairs, sorted.
///
/// When every `b_i > 0` the matrix is similar to a symmetric one and a
/// symmetric solver is used.
pub fn eigenvalues(state: &TodaState) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = if state.b.iter().all(|&b| b > 0.0) {
        let l = state.rank();
        let mut s = DMatrix::zeros(l + 1, l + 1);
        let x = assemble_matrix(state);
        for i in 0..=l {
            s[(i, i)] = x[(i, i)];
        }
        for i in 0..l {
            let r = state.b[i].sqrt();
            s[(i, i + 1)] = r;
            s[(i + 1, i)] = r;
        }
        SymmetricEigen::new(s).eigenvalues.iter().map(|&v| (v, 0.0)).collect()
    } else {
        assemble_matrix(state).complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect()
    };
    out.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    out
}

/// Zeroes `b_i` for `i ∈ A`.
pub fn subsystem(state: &TodaState, subset: NodeSet) -> TodaState {
    let mut out = state.clone();
    for i in subset.iter().filter(|&i| i <= state.rank()) {
        out.b[i - 1] = 0.0;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegrationOptions {
    pub t_max: f64,
    pub dt: f64,
    pub threshold: f64,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        IntegrationOptions { t_max: 5.0, dt: 1e-3, threshold: DEFAULT_THRESHOLD }
    }
}

impl IntegrationOptions {
    fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Integration(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.t_max.is_finite() && self.t_max >= 0.0) {
            return Err(Error::Integration(format!("t_max = {} must be non-negative", self.t_max)));
        }
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return Err(Error::Integration(format!("threshold = {} must be positive", self.threshold)));
        }
        Ok(())
    }
}

/// Accepted states, starting with the initial one.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub states: Vec<TodaState>,
    /// Whether integration stopped early because the threshold was exceeded.
    pub escaped: bool,
}

impl Trajectory {
    pub fn last(&self) -> &TodaState {
        self.states.last().expect("trajectory is never empty")
    }

    /// Largest absolute deviation of any invariant from its initial value.
    pub fn max_invariant_drift(&self) -> f64 {
        let i0 = chevalley_invariants(&self.states[0]);
        self.states
            .iter()
            .flat_map(|s| chevalley_invariants(s).into_iter().zip(&i0).map(|(x, y)| (x - y).abs()).collect::<Vec<_>>())
            .fold(0.0, f64::max)
    }

    /// Largest deviation of the sorted spectrum from the initial one.
    pub fn max_eigenvalue_drift(&self) -> f64 {
        let e0 = eigenvalues(&self.states[0]);
        self.states
            .iter()
            .map(|s| {
                eigenvalues(s).iter().zip(&e0).map(|(x, y)| (x.0 - y.0).hypot(x.1 - y.1)).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Whether every `b_i` kept its initial sign (zero stays zero).
    pub fn signs_preserved(&self) -> bool {
        let b0 = &self.states[0].b;
        self.states.iter().all(|s| s.b.iter().zip(b0).all(|(x, y)| x.signum() == y.signum() || *x == *y))
    }

    /// CSV with columns `t, a_1.., b_1.., I_1..`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let l = self.states[0].rank();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string()];
        header.extend((1..=l).map(|i| format!("a{i}")));
        header.extend((1..=l).map(|i| format!("b{i}")));
        header.extend((1..=l).map(|i| format!("I{i}")));
        w.write_record(&header)?;
        for s in &self.states {
            let mut row = vec![format!("{:.9}", s.t)];
            row.extend(s.a.iter().chain(&s.b).chain(&chevalley_invariants(s)).map(|x| format!("{x:.12e}")));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Integrates from `initial` up to `t_max` or until `max(|a|,|b|)` exceeds the
/// threshold. Steps are halved while `max |b|` would more than double or a
/// non-finite value appears.
pub fn integrate(initial: &TodaState, opts: IntegrationOptions) -> Result<Trajectory> {
    opts.validate()?;
    if !initial.is_finite() {
        return Err(Error::Integration("initial state is not finite".into()));
    }
    let mut states = vec![initial.clone()];
    let mut cur = initial.clone();
    let t_end = initial.t + opts.t_max;
    let mut n = 0u64;
    loop {
        // recompute from the step count to avoid accumulating rounding in t
        let nominal = initial.t + n as f64 * opts.dt;
        if cur.t >= t_end - 1e-12 * opts.dt {
            break;
        }
        let target = (nominal + opts.dt).min(t_end).max(cur.t);
        let mut h = target - cur.t;
        if h <= 0.0 {
            n += 1;
            continue;
        }
        let bound = 2.0 * cur.max_abs_b().max(1.0);
        let next = loop {
            let s = step(&cur, h)?;
            if s.is_finite() && s.max_abs_b() <= bound {
                break s;
            }
            if h / 2.0 < MIN_STEP {
                return Ok(Trajectory { states, escaped: true });
            }
            h /= 2.0;
        };
        let full = (next.t - target).abs() <= 1e-12 * opts.dt;
        cur = next;
        if full {
            cur.t = target;
            n += 1;
        }
        states.push(cur.clone());
        if cur.max_abs() > opts.threshold {
            return Ok(Trajectory { states, escaped: true });
        }
    }
    Ok(Trajectory { states, escaped: false })
}

/// First time `max(|a|,|b|)` exceeds `threshold`, refined by bisection on a
/// single Runge-Kutta step from the last state below the threshold.
pub fn detect_blowup(trajectory: &Trajectory, threshold: f64) -> Option<f64> {
    let k = trajectory.states.iter().position(|s| !s.is_finite() || s.max_abs() > threshold)?;
    if k == 0 {
        return Some(trajectory.states[0].t);
    }
    let prev = &trajectory.states[k - 1];
    let exceeds = |tau: f64| step(prev, tau).map_or(true, |s| !s.is_finite() || s.max_abs() > threshold);
    let (mut lo, mut hi) = (0.0, trajectory.states[k].t - prev.t);
    while hi - lo > BISECTION_TOLERANCE * 1e-3 {
        let mid = 0.5 * (lo + hi);
        if exceeds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(prev.t + hi)
}

/// JSON summary of a simulation run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationSummary {
    pub schema_version: u32,
    pub rank: usize,
    pub signs: String,
    pub t_max: f64,
    pub dt: f64,
    pub threshold: f64,
    pub steps: usize,
    pub final_time: f64,
    pub blowup_time: Option<f64>,
    pub max_invariant_drift: f64,
    pub max_eigenvalue_drift: f64,
    pub signs_preserved: bool,
    pub initial_invariants: Vec<f64>,
    pub final_invariants: Vec<f64>,
    pub final_eigenvalues: Vec<(f64, f64)>,
}

pub fn summarize(trajectory: &Trajectory, opts: IntegrationOptions) -> SimulationSummary {
    let first = &trajectory.states[0];
    let last = trajectory.last();
    SimulationSummary {
        schema_version: crate::SCHEMA_VERSION,
        rank: first.rank(),
        signs: first.signs().map_or_else(|| "0".repeat(first.rank()), |s| s.to_string()),
        t_max: opts.t_max,
        dt: opts.dt,
        threshold: opts.threshold,
        steps: trajectory.states.len() - 1,
        final_time: last.t,
        blowup_time: if trajectory.escaped { detect_blowup(trajectory, opts.threshold) } else { None },
        max_invariant_drift: trajectory.max_invariant_drift(),
        max_eigenvalue_drift: trajectory.max_eigenvalue_drift(),
        signs_preserved: trajectory.signs_preserved(),
        initial_invariants: chevalley_invariants(first),
        final_invariants: chevalley_invariants(last),
        final_eigenvalues: eigenvalues(last),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn state(a: &[f64], b: &[f64]) -> TodaState {
        TodaState::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn matrix_shape() {
        let x = assemble_matrix(&state(&[0.3], &[-0.7]));
        assert_eq!(x, DMatrix::from_row_slice(2, 2, &[0.3, 1.0, -0.7, -0.3]));
        let z = assemble_matrix(&state(&[0.0, 0.0], &[0.0, 0.0]));
        assert_eq!(z, DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]));
        assert!(TodaState::new(vec![1.0], vec![]).is_err());
    }

    #[test]
    fn vector_field_matches_commutator() {
        // dX/dt = [P, X] with P = -Σ b_i f_i
        let s = state(&[0.4, -0.2, 0.9], &[0.5, -1.2, 0.3]);
        let x = assemble_matrix(&s);
        let mut p = DMatrix::zeros(4, 4);
        for i in 0..3 {
            p[(i + 1, i)] = -s.b[i];
        }
        let dx = &p * &x - &x * &p;
        let (da, db) = vector_field(&s.a, &s.b);
        let ds = TodaState { a: da, b: db, t: 0.0 };
        // X is affine in (a, b) apart from the constant superdiagonal
        let mut lin = assemble_matrix(&ds);
        for i in 0..3 {
            lin[(i, i + 1)] = 0.0;
        }
        assert!((dx - lin).abs().max() < 1e-14);
    }

    #[test]
    fn invariants_examples() {
        assert!(chevalley_invariants(&state(&[0.0, 0.0, 0.0], &[0.0; 3])).iter().all(|&x| x == 0.0));
        let (a, b) = (0.7, -0.4);
        let i = chevalley_invariants(&state(&[a], &[b]));
        assert!((i[0] - 2.0 * (a * a + b)).abs() < 1e-14);
    }

    #[test]
    fn zero_b_is_fixed() {
        let s = state(&[0.3, -0.5], &[0.0, 0.0]);
        let next = step(&s, 0.01).unwrap();
        assert_eq!(next.a, s.a);
        assert_eq!(next.b, s.b);
        assert!(step(&s, 0.0).is_err());
        assert!(step(&s, f64::NAN).is_err());
    }

    #[test]
    fn definite_flow_conserves() {
        for n in [3usize, 4] {
            let l = n - 1;
            let a: Vec<f64> = (0..l).map(|i| 0.3 * i as f64 - 0.2).collect();
            let b: Vec<f64> = (0..l).map(|i| 0.5 + 0.25 * i as f64).collect();
            let tr = integrate(&state(&a, &b), IntegrationOptions::default()).unwrap();
            assert!(!tr.escaped);
            assert!((tr.last().t - 5.0).abs() < 1e-9);
            assert!(tr.max_invariant_drift() < 1e-8, "{}", tr.max_invariant_drift());
            assert!(tr.max_eigenvalue_drift() < 1e-8, "{}", tr.max_eigenvalue_drift());
            assert!(tr.signs_preserved());
        }
    }

    #[test]
    fn n2_tanh_solution() {
        // a(0) = 0, b(0) = 1 gives a = tanh t
        let tr = integrate(&state(&[0.0], &[1.0]), IntegrationOptions { t_max: 3.0, ..Default::default() }).unwrap();
        for s in tr.states.iter().step_by(250) {
            assert!((s.a[0] - s.t.tanh()).abs() < 1e-10);
        }
    }

    #[test]
    fn n2_blowup_at_half_pi() {
        // a(0) = 0, b(0) = -1 gives a = -tan t
        let opts = IntegrationOptions { t_max: 5.0, dt: 1e-3, threshold: 1e9 };
        let tr = integrate(&state(&[0.0], &[-1.0]), opts).unwrap();
        assert!(tr.escaped);
        let t9 = detect_blowup(&tr, 1e9).unwrap();
        let t6 = detect_blowup(&tr, 1e6).unwrap();
        assert!((t9 - t6).abs() / t9 < 0.01);
        assert!((t9 - std::f64::consts::FRAC_PI_2).abs() < 1e-4, "{t9}");
        assert!(tr.signs_preserved());
    }

    #[test]
    fn subsystem_block() {
        let s = state(&[0.2, -0.4], &[0.8, 0.6]);
        assert_eq!(subsystem(&s, NodeSet::EMPTY), s);
        let full = subsystem(&s, NodeSet::full(2));
        let tr = integrate(&full, IntegrationOptions { t_max: 1.0, ..Default::default() }).unwrap();
        assert_eq!(tr.last().a, s.a);
        // A = {1}: the second coordinate follows an n = 2 system with a_1 frozen
        let sub = subsystem(&s, NodeSet::single(1));
        let tr = integrate(&sub, IntegrationOptions { t_max: 1.0, ..Default::default() }).unwrap();
        assert_eq!(tr.last().b[0], 0.0);
        assert_eq!(tr.last().a[0], 0.2);
        // ḃ_2 = -b_2 (2 a_2 - a_1): shift a_2 by a_1 / 2 to get the n = 2 flow
        let shift = 0.2 / 2.0;
        let small = integrate(&state(&[-0.4 - shift], &[0.6]), IntegrationOptions { t_max: 1.0, ..Default::default() })
            .unwrap();
        assert!((tr.last().a[1] - (small.last().a[0] + shift)).abs() < 1e-12);
        assert!((tr.last().b[1] - small.last().b[0]).abs() < 1e-12);
    }

    #[test]
    fn eigen_paths_agree() {
        let s = state(&[0.1, 0.5, -0.3], &[0.4, 1.1, 0.2]);
        let sym = eigenvalues(&s);
        let mut gen: Vec<(f64, f64)> =
            assemble_matrix(&s).complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
        gen.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (x, y) in sym.iter().zip(&gen) {
            assert!((x.0 - y.0).abs() < 1e-10 && y.1.abs() < 1e-10);
        }
    }

    #[test]
    fn csv_columns() {
        let tr = integrate(&state(&[0.0], &[1.0]), IntegrationOptions { t_max: 0.002, ..Default::default() }).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "t,a1,b1,I1");
        assert_eq!(text.lines().count(), 4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn trace_is_zero(a in proptest::collection::vec(-5.0f64..5.0, 1..6), seed in -3.0f64..3.0) {
            let b: Vec<f64> = a.iter().map(|x| x * seed).collect();
            let s = state(&a, &b);
            prop_assert!(assemble_matrix(&s).trace().abs() < 1e-12);
        }

        #[test]
        fn time_reversal(a in proptest::collection::vec(-1.0f64..1.0, 1..4), b in proptest::collection::vec(0.1f64..1.0, 3)) {
            let b = b[..a.len()].to_vec();
            let s = state(&a, &b);
            let back = step(&step(&s, 1e-3).unwrap(), -1e-3).unwrap();
            for (x, y) in back.a.iter().chain(&back.b).zip(s.a.iter().chain(&s.b)) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }

        #[test]
        fn signs_survive_stepping(bits in 0u32..8, a in proptest::collection::vec(-1.0f64..1.0, 3)) {
            let eps = SignVector::from_negative_set(3, NodeSet::from_bits(bits));
            let mut s = TodaState::from_signs(eps);
            s.a = a;
            let tr = integrate(&s, IntegrationOptions { t_max: 0.5, dt: 1e-2, threshold: 1e8 }).unwrap();
            prop_assert!(tr.signs_preserved());
        }
    }
}
