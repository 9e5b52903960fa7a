use std::sync::OnceLock;

use super::{gamma, xi_kappa, Kappa, NumericConfig, EULER_GAMMA};
use crate::error::SpecFnError;
use crate::numeric::{gauss_legendre8, CompensatedSum};

/// Interpolation nodes per panel (Chebyshev-Lobatto, degree 6).
const NODES: usize = 7;
/// Internal panels per public mesh step.
const REFINE: usize = 4;
/// Geometric grading levels of the first panel after each integer, where
/// ρ_κ has an algebraic branch point when κ is not an integer.
const GRADING: usize = 14;
/// Safety factor on the asymptotic tail estimate beyond u_max.
const TAIL_SAFETY: f64 = 10.0;

struct NodeRule {
    /// positions in [0, 1], ascending
    pos: [f64; NODES],
    bary: [f64; NODES],
    /// quadrature weights of the interpolant on [0, 1]
    quad: [f64; NODES],
    /// cumul[j][i] = ∫_0^{pos[j]} L_i, the spectral integration matrix
    cumul: [[f64; NODES]; NODES],
    /// rcumul[j][i] = ∫_{pos[j]}^1 L_i
    rcumul: [[f64; NODES]; NODES],
}

/// Bottom-up segment tree over nonnegative panel integrals; range queries
/// only add, so small windows keep full relative precision.
struct PositiveSums {
    size: usize,
    tree: Vec<f64>,
}

impl PositiveSums {
    fn new(cap: usize) -> Self {
        let size = cap.next_power_of_two().max(1);
        PositiveSums {
            size,
            tree: vec![0.0; 2 * size],
        }
    }

    fn set(&mut self, i: usize, v: f64) {
        let mut p = i + self.size;
        self.tree[p] = v;
        while p > 1 {
            p /= 2;
            self.tree[p] = self.tree[2 * p] + self.tree[2 * p + 1];
        }
    }

    /// Sum over `[lo, hi)`.
    fn range(&self, lo: usize, hi: usize) -> f64 {
        let (mut l, mut r) = (lo + self.size, hi + self.size);
        let mut acc = 0.0;
        while l < r {
            if l & 1 == 1 {
                acc += self.tree[l];
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                acc += self.tree[r];
            }
            l /= 2;
            r /= 2;
        }
        acc
    }
}

fn node_rule() -> &'static NodeRule {
    static RULE: OnceLock<NodeRule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = NODES - 1;
        let mut pos = [0.0; NODES];
        let mut bary = [0.0; NODES];
        for j in 0..NODES {
            pos[j] = 0.5 * (1.0 - (std::f64::consts::PI * j as f64 / n as f64).cos());
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            bary[j] = if j == 0 || j == n { 0.5 * sign } else { sign };
        }
        pos[0] = 0.0;
        pos[n] = 1.0;
        let mut quad = [0.0; NODES];
        for (j, q) in quad.iter_mut().enumerate() {
            let mut basis = [0.0; NODES];
            basis[j] = 1.0;
            *q = gauss_legendre8(|x| barycentric(&pos, &bary, &basis, x), 0.0, 1.0);
        }
        let mut cumul = [[0.0; NODES]; NODES];
        let mut rcumul = [[0.0; NODES]; NODES];
        for j in 0..NODES {
            for i in 0..NODES {
                let mut basis = [0.0; NODES];
                basis[i] = 1.0;
                let li = |x| barycentric(&pos, &bary, &basis, x);
                cumul[j][i] = gauss_legendre8(li, 0.0, pos[j]);
                rcumul[j][i] = gauss_legendre8(li, pos[j], 1.0);
            }
        }
        NodeRule {
            pos,
            bary,
            quad,
            cumul,
            rcumul,
        }
    })
}

fn barycentric(pos: &[f64; NODES], bary: &[f64; NODES], vals: &[f64; NODES], x: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..NODES {
        let d = x - pos[j];
        if d == 0.0 {
            return vals[j];
        }
        let c = bary[j] / d;
        num += c * vals[j];
        den += c;
    }
    num / den
}

// Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn solve_small<const M: usize>(mut m: [[f64; M]; M], mut rhs: [f64; M]) -> [f64; M] {
    for col in 0..M {
        let piv = (col..M)
            .max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))
            .unwrap_or(col);
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..M {
            let f = m[row][col] / m[col][col];
            if f != 0.0 {
                for c in col..M {
                    m[row][c] -= f * m[col][c];
                }
                rhs[row] -= f * rhs[col];
            }
        }
    }
    let mut x = [0.0; M];
    for row in (0..M).rev() {
        let mut acc = rhs[row];
        for c in row + 1..M {
            acc -= m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    x
}

#[derive(Clone, Debug)]
struct Panel {
    a: f64,
    b: f64,
    vals: [f64; NODES],
}

impl Panel {
    fn eval(&self, u: f64) -> f64 {
        let r = node_rule();
        let x = (u - self.a) / (self.b - self.a);
        barycentric(&r.pos, &r.bary, &self.vals, x)
    }

    fn integral(&self) -> f64 {
        let r = node_rule();
        let s: f64 = r
            .quad
            .iter()
            .zip(self.vals.iter())
            .map(|(w, v)| w * v)
            .sum();
        s * (self.b - self.a)
    }
}

/// Tabulation of ρ_κ on `[0, u_max]`.
///
/// On `(0, 1]` the closed form `u^{κ-1}/Γ(κ)` is used. On `[1, 2]` the
/// integrated equation `u^{1-κ} ρ(u) = 1/Γ(κ) - κ ∫_1^u t^{-κ} ρ(t-1) dt`
/// reduces to an incomplete beta integral, summed as a power series. Beyond
/// 2 the solution is marched panel by panel by collocating
/// `u ρ(u) = κ ∫_{u-1}^u ρ`, each panel storing Chebyshev-Lobatto node values; queries interpolate
/// within the panel. `values` holds ρ_κ at the public mesh
/// `u_start + i * step`.
#[derive(Clone, Debug)]
pub struct RhoTable {
    kappa: Kappa,
    step: f64,
    u_max: f64,
    u_start: f64,
    values: Vec<f64>,
    gamma_kappa_norm: f64,
    inv_gamma: f64,
    panels: Vec<Panel>,
    panels_per_unit: usize,
    /// ∫_{panel.a}^{u_max} ρ for each panel
    tail_from: Vec<f64>,
    /// estimate of ∫_{u_max}^∞ ρ
    beyond: f64,
    tail_eps: f64,
}

impl RhoTable {
    pub const DEFAULT_STEP: f64 = 1.0 / 256.0;
    pub const DEFAULT_U_MAX: f64 = 64.0;

    /// Table with the default mesh (step 1/256, u_max 64).
    pub fn with_defaults(kappa: Kappa) -> Result<Self, SpecFnError> {
        Self::build(
            kappa,
            Self::DEFAULT_U_MAX,
            Self::DEFAULT_STEP,
            &NumericConfig::default(),
        )
    }

    pub fn build(
        kappa: Kappa,
        u_max: f64,
        step: f64,
        cfg: &NumericConfig,
    ) -> Result<Self, SpecFnError> {
        cfg.validate()?;
        if !(u_max >= 1.0) || !u_max.is_finite() {
            return Err(SpecFnError::Domain {
                name: "u_max",
                value: u_max,
                expected: ">= 1",
            });
        }
        if !(step > 0.0) || step > 1.0 / 64.0 {
            return Err(SpecFnError::BadMesh {
                step,
                reason: "step must lie in (0, 1/64]",
            });
        }
        let per_unit = (1.0 / step).round();
        if (per_unit * step - 1.0).abs() > 1e-9 {
            return Err(SpecFnError::BadMesh {
                step,
                reason: "1/step must be an integer",
            });
        }
        let per_unit = per_unit as usize;
        let step = 1.0 / per_unit as f64;
        let n_mesh = (u_max * per_unit as f64 - 1e-9).ceil() as usize;
        let u_max = n_mesh as f64 / per_unit as f64;

        let k = kappa.get();
        let inv_gamma = 1.0 / gamma(k);
        let mut table = RhoTable {
            kappa,
            step,
            u_max,
            u_start: 0.0,
            values: Vec::new(),
            gamma_kappa_norm: 0.0,
            inv_gamma,
            panels: Vec::new(),
            panels_per_unit: 0,
            tail_from: Vec::new(),
            beyond: 0.0,
            tail_eps: cfg.tail_cutoff_eps,
        };
        table.march(per_unit);
        table.finish(cfg)?;
        Ok(table)
    }

    /// Panel boundaries inside one unit interval `[k, k + 1]`, relative to k.
    fn unit_layout(per_unit: usize) -> Vec<f64> {
        let n = per_unit * REFINE;
        let h = 1.0 / n as f64;
        let mut cuts = vec![0.0];
        for lvl in (1..=GRADING).rev() {
            cuts.push(h * 0.5f64.powi(lvl as i32));
        }
        for i in 1..=n {
            cuts.push(i as f64 * h);
        }
        cuts
    }

    fn march(&mut self, per_unit: usize) {
        let layout = Self::unit_layout(per_unit);
        self.panels_per_unit = layout.len() - 1;
        let units = self.u_max.ceil() as usize;
        let rule = node_rule();
        let mut sums = PositiveSums::new(units * self.panels_per_unit);
        for unit in 1..units {
            let base = unit as f64;
            for w in layout.windows(2) {
                let a = base + w[0];
                let b = base + w[1];
                if a >= self.u_max - 1e-12 {
                    break;
                }
                let b = b.min(self.u_max);
                let mut vals = [0.0; NODES];
                if unit == 1 {
                    for (j, v) in vals.iter_mut().enumerate() {
                        *v = self.rho_first_unit(a + rule.pos[j] * (b - a));
                    }
                } else {
                    vals = self.collocate(&sums, a, b);
                }
                let panel = Panel { a, b, vals };
                sums.set(self.panels.len(), panel.integral());
                self.panels.push(panel);
            }
        }
    }

    // Solves u ρ(u) = κ ∫_{u-1}^u ρ on one panel. Every term is positive, so
    // relative accuracy survives the super-exponential decay of ρ.
    fn collocate(&self, sums: &PositiveSums, a: f64, b: f64) -> [f64; NODES] {
        let k = self.kappa.get();
        let rule = node_rule();
        let h = b - a;
        let idx = self.panels.len();
        let left = self.panels[idx - 1].vals[NODES - 1];
        let c = idx - self.panels_per_unit;
        let counterpart = &self.panels[c];
        let ch = counterpart.b - counterpart.a;
        let between = sums.range(c + 1, idx);

        const M: usize = NODES - 1;
        let mut m = [[0.0; M]; M];
        let mut rhs = [0.0; M];
        for j in 1..NODES {
            let uj = a + rule.pos[j] * h;
            let dot = |w: &[f64; NODES], v: &[f64; NODES]| -> f64 {
                w.iter().zip(v).map(|(x, y)| x * y).sum()
            };
            let lag = ch * dot(&rule.rcumul[j], &counterpart.vals);
            let r = j - 1;
            rhs[r] = k * (lag + between + h * rule.cumul[j][0] * left);
            for i in 1..NODES {
                m[r][i - 1] = -k * h * rule.cumul[j][i];
            }
            m[r][r] += uj;
        }
        let sol = solve_small(m, rhs);
        let mut vals = [0.0; NODES];
        vals[0] = left;
        vals[1..].copy_from_slice(&sol);
        vals
    }

    fn finish(&mut self, cfg: &NumericConfig) -> Result<(), SpecFnError> {
        let k = self.kappa.get();
        let mut tail = vec![0.0; self.panels.len()];
        let mut acc = CompensatedSum::new();
        for (i, p) in self.panels.iter().enumerate().rev() {
            acc.add(p.integral());
            tail[i] = acc.value();
        }
        self.tail_from = tail;
        let rho_end = self.rho(self.u_max)?;
        let xi_end = xi_kappa(self.u_max, self.kappa, cfg)?;
        self.beyond = rho_end / xi_end;
        let head = self.inv_gamma / k; // ∫_0^1 u^{κ-1}/Γ(κ)
        let body = self.tail_from.first().copied().unwrap_or(0.0);
        self.gamma_kappa_norm = head + body + self.beyond;

        self.u_start = if k < 1.0 { self.step } else { 0.0 };
        let n = ((self.u_max - self.u_start) / self.step).round() as usize;
        let mut values = Vec::with_capacity(n + 1);
        for i in 0..=n {
            values.push(self.rho(self.u_start + i as f64 * self.step)?);
        }
        self.values = values;
        Ok(())
    }

    // ρ_κ on [1, 2]: u^{κ-1}/Γ(κ) (1 - κ Σ_{n>=0} x^{κ+n}/(κ+n)), x = 1 - 1/u.
    fn rho_first_unit(&self, u: f64) -> f64 {
        let k = self.kappa.get();
        let x = 1.0 - 1.0 / u;
        let mut beta = 0.0;
        if x > 0.0 {
            let mut pw = 1.0;
            let mut n = 0.0;
            loop {
                let term = pw / (k + n);
                beta += term;
                if term < 1e-17 * beta {
                    break;
                }
                pw *= x;
                n += 1.0;
            }
            beta *= x.powf(k);
        }
        u.powf(k - 1.0) * self.inv_gamma * (1.0 - k * beta)
    }

    fn panel_index(&self, u: f64) -> usize {
        let i = self.panels.partition_point(|p| p.a <= u);
        i.saturating_sub(1)
    }

    /// ρ_κ(u) for 0 <= u <= u_max.
    pub fn rho(&self, u: f64) -> Result<f64, SpecFnError> {
        let k = self.kappa.get();
        if !(u >= 0.0) || u > self.u_max * (1.0 + 1e-15) {
            return Err(SpecFnError::OutOfRange {
                u,
                u_max: self.u_max,
            });
        }
        if u <= 1.0 {
            if u == 0.0 {
                return Ok(if k < 1.0 {
                    f64::INFINITY
                } else if k == 1.0 {
                    1.0
                } else {
                    0.0
                });
            }
            return Ok(u.powf(k - 1.0) * self.inv_gamma);
        }
        if u <= 2.0 {
            return Ok(self.rho_first_unit(u));
        }
        let p = &self.panels[self.panel_index(u)];
        Ok(p.eval(u.min(p.b)))
    }

    /// ∫_u^{∞} ρ_κ(v) dv, including the asymptotic tail estimate beyond u_max.
    pub fn tail_integral(&self, u: f64) -> Result<f64, SpecFnError> {
        if !(u >= 0.0) || u > self.u_max - 1.0 + 1e-12 {
            return Err(SpecFnError::OutOfRange {
                u,
                u_max: self.u_max,
            });
        }
        let k = self.kappa.get();
        let body_from_one = self.tail_from.first().copied().unwrap_or(0.0);
        let value = if u <= 1.0 {
            self.inv_gamma * (1.0 - u.powf(k)) / k + body_from_one + self.beyond
        } else {
            let i = self.panel_index(u);
            let p = &self.panels[i];
            let next = self.tail_from.get(i + 1).copied().unwrap_or(0.0);
            let partial = if u >= p.b {
                0.0
            } else {
                gauss_legendre8(|t| p.eval(t), u, p.b)
            };
            partial + next + self.beyond
        };
        if TAIL_SAFETY * self.beyond > self.tail_eps * value {
            return Err(SpecFnError::TailTooLarge {
                tail: TAIL_SAFETY * self.beyond,
                value,
            });
        }
        Ok(value)
    }

    /// λ_κ(u) = e^{-γκ} ∫_u^∞ ρ_κ.
    pub fn lambda(&self, u: f64) -> Result<f64, SpecFnError> {
        Ok((-EULER_GAMMA * self.kappa.get()).exp() * self.tail_integral(u)?)
    }

    /// j_κ(u) = 1 - λ_κ(u).
    pub fn j(&self, u: f64) -> Result<f64, SpecFnError> {
        Ok(1.0 - self.lambda(u)?)
    }

    pub fn kappa(&self) -> Kappa {
        self.kappa
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    /// First public mesh point: 0, or `step` when κ < 1 (ρ_κ is unbounded at 0).
    pub fn u_start(&self) -> f64 {
        self.u_start
    }

    /// ρ_κ at the public mesh points `u_start + i * step`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mesh_point(&self, i: usize) -> f64 {
        self.u_start + i as f64 * self.step
    }

    /// Computed ∫_0^∞ ρ_κ; equals e^{γκ} in exact arithmetic.
    pub fn gamma_kappa_norm(&self) -> f64 {
        self.gamma_kappa_norm
    }

    /// Upper bound used for the neglected tail beyond u_max.
    pub fn tail_bound(&self) -> f64 {
        TAIL_SAFETY * self.beyond
    }
}
