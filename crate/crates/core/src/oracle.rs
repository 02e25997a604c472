//! Independent numerical eigensolvers: finite-difference tridiagonal
//! diagonalization with Sturm-sequence bisection, Numerov shooting for real
//! potentials, and fourth-order complex shooting for the complexified ones.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform grid with Dirichlet truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min < x_max) || n_points < 3 {
            return Err(Error::InvalidConfig(
                "grid needs x_min < x_max and at least 3 points".into(),
            ));
        }
        Ok(Grid { x_min, x_max, n_points })
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Grid with the same endpoints and doubled spacing (for Richardson).
    pub fn coarsened(&self) -> Grid {
        Grid {
            x_min: self.x_min,
            x_max: self.x_max,
            n_points: (self.n_points - 1) / 2 + 1,
        }
    }
}

/// -d2/dx2 + V on the interior points, three-point stencil, Dirichlet ends.
#[derive(Debug, Clone)]
pub struct TridiagonalHamiltonian {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
    pub grid: Grid,
}

pub fn discretize<V: Fn(f64) -> f64>(v: V, g: Grid) -> Result<TridiagonalHamiltonian> {
    let h = g.spacing();
    let kin = 1.0 / (h * h);
    let n = g.n_points - 2;
    let mut diagonal = Vec::with_capacity(n);
    for i in 1..=n {
        let x = g.point(i);
        let vi = v(x);
        if !vi.is_finite() {
            return Err(Error::NonFiniteValue { at: x });
        }
        diagonal.push(2.0 * kin + vi);
    }
    Ok(TridiagonalHamiltonian {
        diagonal,
        off_diagonal: vec![-kin; n.saturating_sub(1)],
        grid: g,
    })
}

impl TridiagonalHamiltonian {
    /// Number of eigenvalues strictly below lambda (Sturm sequence via the
    /// LDL^T pivot signs).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let guard = 1e-300;
        let mut count = 0;
        let mut d = self.diagonal[0] - lambda;
        if d < 0.0 {
            count += 1;
        }
        for i in 1..self.diagonal.len() {
            let safe = if d.abs() < guard {
                if d >= 0.0 { guard } else { -guard }
            } else {
                d
            };
            let e = self.off_diagonal[i - 1];
            d = (self.diagonal[i] - lambda) - e * e / safe;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin_min(&self) -> f64 {
        let n = self.diagonal.len();
        let mut lo = f64::MAX;
        for i in 0..n {
            let el = if i > 0 { self.off_diagonal[i - 1].abs() } else { 0.0 };
            let er = if i < n - 1 { self.off_diagonal[i].abs() } else { 0.0 };
            lo = lo.min(self.diagonal[i] - el - er);
        }
        lo - 1.0
    }

    /// All eigenvalues below e_max, ascending, each bisected to 1e-10
    /// absolute. The output length equals the Sturm count at e_max exactly.
    pub fn eigenvalues_below(&self, e_max: f64) -> Vec<f64> {
        let total = self.sturm_count(e_max);
        let lo0 = self.gershgorin_min();
        let mut out = Vec::with_capacity(total);
        for k in 0..total {
            let mut a = lo0;
            let mut b = e_max;
            for _ in 0..240 {
                if b - a < 1e-11 {
                    break;
                }
                let mid = 0.5 * (a + b);
                if self.sturm_count(mid) <= k {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            out.push(0.5 * (a + b));
        }
        out
    }

    /// Eigenvector for an eigenvalue estimate via shifted inverse iteration.
    /// The result is normalized to unit Euclidean norm with a deterministic
    /// sign (largest-magnitude component positive).
    pub fn eigenvector(&self, e: f64) -> Vec<f64> {
        let n = self.diagonal.len();
        let shift = e + 1e-9 * e.abs().max(1.0) * 1e-3;
        let mut v: Vec<f64> = (0..n)
            .map(|i| ((i + 1) as f64 * 0.7391).sin())
            .collect();
        normalize(&mut v);
        for _ in 0..5 {
            let mut w = self.solve_shifted(shift, &v);
            normalize(&mut w);
            v = w;
        }
        // Deterministic sign convention.
        let mut imax = 0;
        for i in 0..n {
            if v[i].abs() > v[imax].abs() {
                imax = i;
            }
        }
        if v[imax] < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
        v
    }

    // Thomas solve of (T - shift I) w = b with partial regularization.
    fn solve_shifted(&self, shift: f64, b: &[f64]) -> Vec<f64> {
        let n = self.diagonal.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let guard = 1e-280;
        let mut beta = self.diagonal[0] - shift;
        if beta.abs() < guard {
            beta = guard;
        }
        d[0] = b[0] / beta;
        for i in 1..n {
            let e = self.off_diagonal[i - 1];
            c[i - 1] = e / beta;
            beta = (self.diagonal[i] - shift) - e * c[i - 1];
            if beta.abs() < guard {
                beta = guard;
            }
            d[i] = (b[i] - e * d[i - 1]) / beta;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        d
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// Finite-difference levels below e_max.
pub fn fd_levels<V: Fn(f64) -> f64>(v: V, g: Grid, e_max: f64) -> Result<Vec<f64>> {
    Ok(discretize(v, g)?.eigenvalues_below(e_max))
}

/// Finite-difference levels improved by one grid-doubling Richardson step:
/// E = (4 E_h - E_2h) / 3, eliminating the leading O(h^2) stencil error.
pub fn fd_levels_richardson<V: Fn(f64) -> f64 + Copy>(
    v: V,
    g: Grid,
    e_max: f64,
) -> Result<Vec<f64>> {
    let fine = fd_levels(v, g, e_max)?;
    let coarse = fd_levels(v, g.coarsened(), e_max)?;
    let m = fine.len().min(coarse.len());
    Ok((0..m).map(|k| (4.0 * fine[k] - coarse[k]) / 3.0).collect())
}

// Numerov sweep over index range lo..=hi (direction given by order),
// Dirichlet start, with periodic renormalization. y'' = (V - E) y.
fn numerov_sweep<V: Fn(f64) -> f64>(v: &V, g: Grid, e: f64, lo: usize, hi: usize, leftward: bool) -> Vec<f64> {
    let h2 = g.spacing() * g.spacing();
    let f = |i: usize| v(g.point(i)) - e;
    let count = hi - lo + 1;
    let mut y = vec![0.0_f64; count];
    // Index 0 of `y` is the starting boundary end.
    let idx = |j: usize| if leftward { hi - j } else { lo + j };
    y[0] = 0.0;
    y[1] = 1e-12;
    let mut fm = f(idx(0));
    let mut fi = f(idx(1));
    for j in 1..count - 1 {
        let fp = f(idx(j + 1));
        let a = 1.0 - h2 * fp / 12.0;
        let b = 2.0 * (1.0 + 5.0 * h2 * fi / 12.0) * y[j];
        let c = (1.0 - h2 * fm / 12.0) * y[j - 1];
        y[j + 1] = (b - c) / a;
        fm = fi;
        fi = fp;
        if j % 64 == 0 {
            let scale = y[j].abs().max(y[j + 1].abs());
            if scale > 1e250 {
                for w in y[..=j + 1].iter_mut() {
                    *w /= scale;
                }
            }
        }
    }
    if leftward {
        y.reverse();
    }
    y
}

fn count_sign_changes(y: &[f64]) -> usize {
    let mut nodes = 0;
    let mut last = 0.0_f64;
    for &w in y {
        if w == 0.0 {
            continue;
        }
        if last != 0.0 && (w < 0.0) != (last < 0.0) {
            nodes += 1;
        }
        last = w;
    }
    nodes
}

// Full left-to-right sweep; node count equals the number of eigenvalues
// below e (Sturm oscillation with a Dirichlet start).
fn numerov_nodes<V: Fn(f64) -> f64>(v: &V, g: Grid, e: f64) -> usize {
    count_sign_changes(&numerov_sweep(v, g, e, 0, g.n_points - 1, false))
}

// Two-ended integration matched at the rightmost classical turning point:
// returns the normalized Wronskian mismatch and the node count of the
// assembled solution.
fn numerov_match<V: Fn(f64) -> f64>(v: &V, g: Grid, e: f64) -> (f64, usize) {
    let n = g.n_points;
    // Rightmost turning point, kept away from the boundaries so centered
    // derivatives exist on both sides.
    let mut m = n / 2;
    for i in (0..n).rev() {
        if v(g.point(i)) <= e {
            m = i;
            break;
        }
    }
    m = m.clamp(2, n - 3);
    let yl = numerov_sweep(v, g, e, 0, m + 1, false);
    let yr = numerov_sweep(v, g, e, m - 1, n - 1, true);
    // Local indices of the match point in each array.
    let (l0, l1, l2) = (yl[m - 1], yl[m], yl[m + 1]);
    let (r0, r1, r2) = (yr[0], yr[1], yr[2]);
    let h2 = 2.0 * g.spacing();
    let dl = (l2 - l0) / h2;
    let dr = (r2 - r0) / h2;
    let w = l1 * dr - dl * r1;
    let scale = (l1.abs() * r1.abs() + dl.abs() * dr.abs()).max(1e-300);
    let mismatch = w / scale;
    // Assemble: scale the right solution to the left one at the match point.
    let s = if r1.abs() > 1e-300 { l1 / r1 } else { 1.0 };
    let mut assembled = yl[..=m].to_vec();
    assembled.extend(yr[1..].iter().map(|y| y * s));
    (mismatch, count_sign_changes(&assembled))
}

/// Energy of the n-th bound level: Numerov integration from both ends
/// matched at the rightmost classical turning point, root of the Wronskian
/// mismatch. The root is bracketed by node-count bisection (the left-shot
/// node count jumps from n to n+1 exactly at the eigenvalue), then refined
/// on the mismatch sign; the assembled solution must carry n nodes.
pub fn numerov_shoot<V: Fn(f64) -> f64>(v: V, g: Grid, n: usize) -> Result<f64> {
    let mut v_min = f64::MAX;
    for i in 0..g.n_points {
        let vi = v(g.point(i));
        if !vi.is_finite() {
            return Err(Error::NonFiniteValue { at: g.point(i) });
        }
        v_min = v_min.min(vi);
    }
    let e_top = v(g.x_min).min(v(g.x_max)) - 1e-9;
    if e_top <= v_min {
        return Err(Error::LevelNotFound);
    }
    let mut a = v_min + 1e-12;
    let mut b = e_top;
    if numerov_nodes(&v, g, b) < n + 1 || numerov_nodes(&v, g, a) > n {
        return Err(Error::LevelNotFound);
    }
    // Node-count bisection down to a narrow bracket around the eigenvalue.
    for _ in 0..200 {
        if b - a <= 1e-10 * b.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (a + b);
        if numerov_nodes(&v, g, mid) <= n {
            a = mid;
        } else {
            b = mid;
        }
    }
    // Wronskian refinement inside the bracket when it changes sign there
    // (it does except in degenerate near-pole configurations, where the
    // node bracket midpoint is already converged).
    let (wa, _) = numerov_match(&v, g, a);
    let (wb, _) = numerov_match(&v, g, b);
    let mut e = 0.5 * (a + b);
    if wa != 0.0 && wb != 0.0 && wa.signum() != wb.signum() {
        let (mut a, mut b, mut wa) = (a, b, wa);
        for _ in 0..100 {
            let mid = 0.5 * (a + b);
            let (wm, _) = numerov_match(&v, g, mid);
            if wm == 0.0 || b - a <= 1e-14 * b.abs().max(1.0) {
                break;
            }
            if wm.signum() == wa.signum() {
                a = mid;
                wa = wm;
            } else {
                b = mid;
            }
        }
        e = 0.5 * (a + b);
    }
    let (_, nodes) = numerov_match(&v, g, e);
    if nodes != n {
        return Err(Error::LevelNotFound);
    }
    Ok(e)
}

/// Result of a complex shooting solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexShootResult {
    pub e: Complex64,
    pub residual: f64,
    pub iterations: usize,
}

// RK4 integration of psi'' = (V - E) psi from x0 to x1 (signed direction),
// returning (psi, psi') at the match point.
fn integrate_complex<V: Fn(f64) -> Complex64>(
    v: &V,
    e: Complex64,
    x0: f64,
    x1: f64,
    steps: usize,
) -> (Complex64, Complex64) {
    let h = (x1 - x0) / steps as f64;
    let mut psi = Complex64::new(0.0, 0.0);
    let mut dpsi = Complex64::new(1.0, 0.0);
    let rhs = |x: f64, psi: Complex64, dpsi: Complex64| -> (Complex64, Complex64) {
        (dpsi, (v(x) - e) * psi)
    };
    let mut x = x0;
    for _ in 0..steps {
        let (k1a, k1b) = rhs(x, psi, dpsi);
        let (k2a, k2b) = rhs(x + 0.5 * h, psi + 0.5 * h * k1a, dpsi + 0.5 * h * k1b);
        let (k3a, k3b) = rhs(x + 0.5 * h, psi + 0.5 * h * k2a, dpsi + 0.5 * h * k2b);
        let (k4a, k4b) = rhs(x + h, psi + h * k3a, dpsi + h * k3b);
        psi += (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        dpsi += (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        x += h;
        let m = psi.norm().max(dpsi.norm());
        if m > 1e120 {
            psi /= m;
            dpsi /= m;
        }
    }
    (psi, dpsi)
}

// Relative Wronskian mismatch of left and right shots at the match point.
fn complex_mismatch<V: Fn(f64) -> Complex64>(v: &V, g: Grid, e: Complex64) -> Complex64 {
    let x_match = if g.x_min < 0.0 && g.x_max > 0.0 {
        0.0
    } else {
        0.5 * (g.x_min + g.x_max)
    };
    let frac = (x_match - g.x_min) / (g.x_max - g.x_min);
    let steps_l = ((g.n_points as f64 * frac) as usize).max(8);
    let steps_r = ((g.n_points as f64 * (1.0 - frac)) as usize).max(8);
    let (pl, dl) = integrate_complex(v, e, g.x_min, x_match, steps_l);
    let (pr, dr) = integrate_complex(v, e, g.x_max, x_match, steps_r);
    let w = pl * dr - dl * pr;
    // Normalize by a combination that cannot vanish for a nontrivial
    // solution (psi and psi' cannot both be zero), so the ratio keeps its
    // simple zero at the eigenvalue even at a symmetry match point.
    let scale = pl.norm() * pr.norm() + dl.norm() * dr.norm();
    w / scale.max(1e-300)
}

/// Newton iteration on the complex matching determinant, seeded at e0.
/// Converged when the relative mismatch drops below 1e-9.
pub fn complex_shoot<V: Fn(f64) -> Complex64>(
    v: V,
    g: Grid,
    e0: Complex64,
) -> Result<ComplexShootResult> {
    let tol = 1e-9;
    let mut e = e0;
    let mut best = ComplexShootResult { e, residual: f64::MAX, iterations: 0 };
    for it in 0..50 {
        let m = complex_mismatch(&v, g, e);
        let r = m.norm();
        if r < best.residual {
            best = ComplexShootResult { e, residual: r, iterations: it };
        }
        if r < tol {
            return Ok(ComplexShootResult { e, residual: r, iterations: it });
        }
        let de = 1e-7 * (1.0 + e.norm());
        let mp = complex_mismatch(&v, g, e + de);
        let mm = complex_mismatch(&v, g, e - de);
        let deriv = (mp - mm) / (2.0 * de);
        if deriv.norm() < 1e-300 {
            break;
        }
        let mut step = m / deriv;
        // Damp wild steps so the iteration stays near the seeded level.
        let max_step = 0.5 * (1.0 + e.norm());
        if step.norm() > max_step {
            step *= max_step / step.norm();
        }
        e -= step;
    }
    Err(Error::NoConvergence { residual: best.residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_closed_form() {
        // V = 0, h = 1, interior size 2: diag (2,2), off (-1): eigenvalues 1, 3.
        let g = Grid::new(0.0, 3.0, 4).unwrap();
        let t = discretize(|_| 0.0, g).unwrap();
        assert_eq!(t.diagonal, vec![2.0, 2.0]);
        assert_eq!(t.off_diagonal, vec![-1.0]);
        let ev = t.eigenvalues_below(10.0);
        assert!((ev[0] - 1.0).abs() < 1e-10 && (ev[1] - 3.0).abs() < 1e-10);
        let below_two = t.eigenvalues_below(2.0);
        assert_eq!(below_two.len(), 1);
        assert!((below_two[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sturm_count_matches_output_length() {
        let g = Grid::new(-10.0, 10.0, 501).unwrap();
        let t = discretize(|x: f64| x * x, g).unwrap();
        let ev = t.eigenvalues_below(12.0);
        assert_eq!(ev.len(), t.sturm_count(12.0));
    }

    #[test]
    fn oscillator_spectrum() {
        // E_n = 2n+1 for V = x^2 (hbar = 2 mu = 1).
        let g = Grid::new(-20.0, 20.0, 8001).unwrap();
        let ev = fd_levels_richardson(|x: f64| x * x, g, 12.0).unwrap();
        assert!(ev.len() >= 6);
        for (n, e) in ev.iter().take(6).enumerate() {
            assert!(
                (e - (2 * n + 1) as f64).abs() < 1e-6,
                "n={n}: {e}"
            );
        }
    }

    #[test]
    fn reflectionless_single_level() {
        let g = Grid::new(-20.0, 20.0, 8001).unwrap();
        let v = |x: f64| -2.0 / x.cosh().powi(2);
        let ev = fd_levels_richardson(v, g, -1e-6).unwrap();
        assert_eq!(ev.len(), 1);
        assert!((ev[0] + 1.0).abs() < 1e-6, "{}", ev[0]);
    }

    #[test]
    fn empty_below_zero_for_free_particle() {
        let g = Grid::new(-10.0, 10.0, 801).unwrap();
        let ev = fd_levels(|_| 0.0, g, 0.0).unwrap();
        assert!(ev.is_empty());
    }

    #[test]
    fn grid_doubling_is_second_order() {
        // Eigenvalue error under h -> 2h should scale ~4x.
        let v = |x: f64| x * x;
        let exact = 1.0;
        let g1 = Grid::new(-15.0, 15.0, 4001).unwrap();
        let e1 = fd_levels(v, g1, 2.0).unwrap()[0];
        let e2 = fd_levels(v, g1.coarsened(), 2.0).unwrap()[0];
        let ratio = (e2 - exact) / (e1 - exact);
        assert!((3.6..=4.4).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn numerov_reflectionless() {
        let g = Grid::new(-20.0, 20.0, 4001).unwrap();
        let v = |x: f64| -2.0 / x.cosh().powi(2);
        let e = numerov_shoot(v, g, 0).unwrap();
        assert!((e + 1.0).abs() < 1e-7, "{e}");
        assert!(matches!(numerov_shoot(v, g, 1), Err(Error::LevelNotFound)));
    }

    #[test]
    fn numerov_oscillator_n3() {
        let g = Grid::new(-12.0, 12.0, 4001).unwrap();
        let e = numerov_shoot(|x: f64| x * x, g, 3).unwrap();
        assert!((e - 7.0).abs() < 1e-7, "{e}");
    }

    #[test]
    fn numerov_agrees_with_fd() {
        let g = Grid::new(-20.0, 20.0, 8001).unwrap();
        let v = |x: f64| -12.0 / x.cosh().powi(2);
        let fd = fd_levels_richardson(v, g, -1e-6).unwrap();
        assert_eq!(fd.len(), 3);
        for (n, e_fd) in fd.iter().enumerate() {
            let e_nv = numerov_shoot(v, g, n).unwrap();
            assert!((e_fd - e_nv).abs() < 1e-7, "n={n}: fd={e_fd} numerov={e_nv}");
        }
    }

    #[test]
    fn eigenvector_matches_known_shape() {
        // Ground state of -2 sech^2 is sech(x), up to normalization.
        let g = Grid::new(-20.0, 20.0, 2001).unwrap();
        let t = discretize(|x: f64| -2.0 / x.cosh().powi(2), g).unwrap();
        let e = t.eigenvalues_below(-1e-6)[0];
        let vec = t.eigenvector(e);
        let mut dot = 0.0;
        let mut nv = 0.0;
        let mut nr = 0.0;
        for (i, c) in vec.iter().enumerate() {
            let x = g.point(i + 1);
            let r = 1.0 / x.cosh();
            dot += c * r;
            nv += c * c;
            nr += r * r;
        }
        let overlap = dot / (nv.sqrt() * nr.sqrt());
        assert!(overlap > 0.99999, "overlap {overlap}");
    }

    #[test]
    fn complex_shoot_real_sanity() {
        let g = Grid::new(-20.0, 20.0, 4001).unwrap();
        let v = |x: f64| Complex64::new(-2.0 / x.cosh().powi(2), 0.0);
        let r = complex_shoot(v, g, Complex64::new(-0.9, 0.0)).unwrap();
        assert!((r.e - Complex64::new(-1.0, 0.0)).norm() < 1e-7, "{:?}", r);
    }

    #[test]
    fn complex_shoot_particle_in_box() {
        let g = Grid::new(0.0, 1.0, 2001).unwrap();
        let v = |_: f64| Complex64::new(0.0, 0.0);
        let exact = std::f64::consts::PI.powi(2);
        let r = complex_shoot(v, g, Complex64::new(0.9 * exact, 0.0)).unwrap();
        assert!((r.e.re - exact).abs() < 1e-6 && r.e.im.abs() < 1e-8, "{:?}", r);
    }

    #[test]
    fn nonfinite_potential_rejected() {
        let g = Grid::new(-1.0, 1.0, 11).unwrap();
        assert!(matches!(
            discretize(|x: f64| 1.0 / x, g),
            Err(Error::NonFiniteValue { .. })
        ));
    }
}
