//! Pointwise Clifford algebra of differential forms on a 4D cotangent space.
//!
//! Basis blades are stored in lexicographic order
//! `1, γ0, γ1, γ2, γ3, γ01, γ02, γ03, γ12, γ13, γ23, γ012, γ013, γ023, γ123, γ0123`
//! with strictly increasing indices. The Clifford product uses the full
//! (possibly non-diagonal) inverse metric: `γ^μγ^ν + γ^νγ^μ = 2 g^{μν}`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::jet::Jet;
use crate::linalg::{inverse_adjugate, symmetric_eigenvalues, Mat4};
use crate::scalar::Scalar;

/// Bitmask (bit μ set when γ^μ is a factor) of each blade slot.
pub const BLADE_MASK: [u8; 16] = [0, 1, 2, 4, 8, 3, 5, 9, 6, 10, 12, 7, 11, 13, 14, 15];
pub const BLADE_GRADE: [usize; 16] = [0, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 4];

const MASK_SLOT: [usize; 16] = {
    let mut out = [0usize; 16];
    let mut i = 0;
    while i < 16 {
        out[BLADE_MASK[i] as usize] = i;
        i += 1;
    }
    out
};

pub const PSEUDOSCALAR: usize = 15;

pub fn slot_of_mask(mask: u8) -> usize {
    MASK_SLOT[mask as usize]
}

/// Slot of the blade γ^{i0}∧γ^{i1}∧... for strictly increasing indices.
pub fn slot_of(indices: &[usize]) -> usize {
    let mut mask = 0u8;
    for &i in indices {
        mask |= 1 << i;
    }
    slot_of_mask(mask)
}

/// Coordinate indices of a blade, increasing.
pub fn blade_indices(slot: usize) -> Vec<usize> {
    (0..4).filter(|i| BLADE_MASK[slot] & (1 << i) != 0).collect()
}

/// Sign of e_A ∧ e_B relative to the canonical blade of A|B, or 0 on overlap.
pub fn wedge_sign(a: u8, b: u8) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0;
    for i in 0..4 {
        if b & (1 << i) != 0 {
            swaps += (a >> (i + 1)).count_ones();
        }
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Multivector<S> {
    pub c: [S; 16],
}

pub type IndexedFormSet<S> = [Multivector<S>; 4];

impl<S: Scalar> Default for Multivector<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> Multivector<S> {
    pub fn zero() -> Self {
        Multivector { c: [S::zero(); 16] }
    }

    pub fn from_components(c: [S; 16]) -> Self {
        Multivector { c }
    }

    pub fn scalar(s: S) -> Self {
        let mut m = Self::zero();
        m.c[0] = s;
        m
    }

    pub fn blade(slot: usize) -> Self {
        let mut m = Self::zero();
        m.c[slot] = S::one();
        m
    }

    /// The basis 1-form γ^μ.
    pub fn gamma(mu: usize) -> Self {
        Self::blade(1 + mu)
    }

    /// v_μ γ^μ.
    pub fn vector(v: [S; 4]) -> Self {
        let mut m = Self::zero();
        m.c[1..5].copy_from_slice(&v);
        m
    }

    /// ½ F_{ab} γ^a∧γ^b for an antisymmetric array F.
    pub fn bivector(f: &Mat4<S>) -> Self {
        let mut m = Self::zero();
        for a in 0..4 {
            for b in (a + 1)..4 {
                m.c[slot_of(&[a, b])] = f[a][b];
            }
        }
        m
    }

    pub fn grade(&self, k: usize) -> Self {
        let mut m = Self::zero();
        for i in 0..16 {
            if BLADE_GRADE[i] == k {
                m.c[i] = self.c[i];
            }
        }
        m
    }

    /// Vector part as components v_μ.
    pub fn vector_part(&self) -> [S; 4] {
        [self.c[1], self.c[2], self.c[3], self.c[4]]
    }

    fn graded_sign(&self, sign: impl Fn(usize) -> bool) -> Self {
        let mut m = *self;
        for i in 0..16 {
            if sign(BLADE_GRADE[i]) {
                m.c[i] = -m.c[i];
            }
        }
        m
    }

    pub fn reverse(&self) -> Self {
        self.graded_sign(|k| (k * k.saturating_sub(1) / 2) % 2 == 1)
    }

    pub fn involute(&self) -> Self {
        self.graded_sign(|k| k % 2 == 1)
    }

    pub fn scale(&self, s: S) -> Self {
        Multivector {
            c: self.c.map(|x| x * s),
        }
    }

    pub fn scale_f64(&self, k: f64) -> Self {
        Multivector {
            c: self.c.map(|x| x.scale(k)),
        }
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..16 {
            for j in 0..16 {
                let s = wedge_sign(BLADE_MASK[i], BLADE_MASK[j]);
                if s == 0 {
                    continue;
                }
                let t = self.c[i] * other.c[j];
                let k = slot_of_mask(BLADE_MASK[i] | BLADE_MASK[j]);
                if s > 0 {
                    out.c[k] += t;
                } else {
                    out.c[k] -= t;
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(|x| x.re().abs()).fold(0.0, f64::max)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T) -> Multivector<T> {
        Multivector { c: self.c.map(f) }
    }
}

impl Multivector<f64> {
    pub fn norm(&self) -> f64 {
        self.c.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

impl<S: Scalar> Multivector<Jet<S>> {
    pub fn value(&self) -> Multivector<S> {
        Multivector {
            c: self.c.map(|x| x.value),
        }
    }

    pub fn partial(&self, d: usize) -> Multivector<S> {
        Multivector {
            c: self.c.map(|x| x.partials[d]),
        }
    }

    /// Exterior derivative in the coordinate basis: dω = γ^d ∧ ∂_d ω.
    pub fn exterior_derivative(&self) -> Multivector<S> {
        let mut out = Multivector::zero();
        for d in 0..4 {
            out += Multivector::<S>::gamma(d).wedge(&self.partial(d));
        }
        out
    }
}

impl<S: Scalar> Add for Multivector<S> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        self += o;
        self
    }
}

impl<S: Scalar> AddAssign for Multivector<S> {
    fn add_assign(&mut self, o: Self) {
        for i in 0..16 {
            self.c[i] += o.c[i];
        }
    }
}

impl<S: Scalar> Sub for Multivector<S> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        self -= o;
        self
    }
}

impl<S: Scalar> SubAssign for Multivector<S> {
    fn sub_assign(&mut self, o: Self) {
        for i in 0..16 {
            self.c[i] -= o.c[i];
        }
    }
}

impl<S: Scalar> Neg for Multivector<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Multivector {
            c: self.c.map(|x| -x),
        }
    }
}

impl<S: Scalar> Mul<S> for Multivector<S> {
    type Output = Self;
    fn mul(self, s: S) -> Self {
        self.scale(s)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("metric is singular (det = {0:e})")]
    Singular(f64),
    #[error("metric is not Lorentzian (+,-,-,-): eigenvalues {0:?}")]
    NotLorentzian([f64; 4]),
    #[error("metric has non-finite entries")]
    NonFinite,
}

/// Metric on the cotangent space together with its blade product table.
#[derive(Clone, Debug)]
pub struct CotangentMetric<S> {
    pub g_lower: Mat4<S>,
    pub g_upper: Mat4<S>,
    pub det_g: S,
    pub sqrt_minus_g: S,
    table: Vec<[S; 16]>,
}

impl<S: Scalar> CotangentMetric<S> {
    /// Builds from g_{μν}; the inverse is taken by adjugate.
    pub fn new(g_lower: Mat4<S>) -> Result<Self, MetricError> {
        let (g_upper, det) = inverse_adjugate(&g_lower);
        Self::from_parts(g_lower, g_upper, det)
    }

    pub fn from_parts(g_lower: Mat4<S>, g_upper: Mat4<S>, det_g: S) -> Result<Self, MetricError> {
        if !g_lower.iter().flatten().chain(g_upper.iter().flatten()).all(|x| x.all_finite()) {
            return Err(MetricError::NonFinite);
        }
        if det_g.re() >= 0.0 || !det_g.all_finite() {
            let ev = symmetric_eigenvalues(&crate::linalg::map_mat(&g_lower, |x| x.re()));
            if det_g.re() == 0.0 {
                return Err(MetricError::Singular(det_g.re()));
            }
            return Err(MetricError::NotLorentzian(ev));
        }
        let table = build_table(&g_upper);
        Ok(CotangentMetric {
            g_lower,
            g_upper,
            sqrt_minus_g: (-det_g).sqrt(),
            det_g,
            table,
        })
    }

    pub fn minkowski() -> Self {
        let mut g = [[S::zero(); 4]; 4];
        g[0][0] = S::one();
        for i in 1..4 {
            g[i][i] = -S::one();
        }
        Self::new(g).expect("Minkowski metric is valid")
    }

    /// Full signature check (one positive, three negative eigenvalues).
    pub fn check_lorentzian(&self) -> Result<(), MetricError> {
        let ev = symmetric_eigenvalues(&crate::linalg::map_mat(&self.g_lower, |x| x.re()));
        if ev[0] < 0.0 && ev[1] < 0.0 && ev[2] < 0.0 && ev[3] > 0.0 {
            Ok(())
        } else {
            Err(MetricError::NotLorentzian(ev))
        }
    }

    /// τ_g = √(−𝐠) γ^0∧γ^1∧γ^2∧γ^3.
    pub fn volume(&self) -> Multivector<S> {
        let mut m = Multivector::zero();
        m.c[PSEUDOSCALAR] = self.sqrt_minus_g;
        m
    }

    /// The basis blade product e_I e_J.
    pub fn blade_product(&self, i: usize, j: usize) -> &[S; 16] {
        &self.table[i * 16 + j]
    }

    fn product_filtered(&self, a: &Multivector<S>, b: &Multivector<S>, keep: impl Fn(usize, usize) -> Option<usize>) -> Multivector<S> {
        let mut out = Multivector::zero();
        for i in 0..16 {
            for j in 0..16 {
                let Some(grade) = keep(BLADE_GRADE[i], BLADE_GRADE[j]) else {
                    continue;
                };
                let t = a.c[i] * b.c[j];
                let row = self.blade_product(i, j);
                for k in 0..16 {
                    if grade == usize::MAX || BLADE_GRADE[k] == grade {
                        out.c[k] += t * row[k];
                    }
                }
            }
        }
        out
    }

    pub fn clifford_product(&self, a: &Multivector<S>, b: &Multivector<S>) -> Multivector<S> {
        self.product_filtered(a, b, |_, _| Some(usize::MAX))
    }

    /// A_r ⌟ B_s = ⟨A_r B_s⟩_{s−r} for r ≤ s, zero otherwise.
    pub fn contract_left(&self, a: &Multivector<S>, b: &Multivector<S>) -> Multivector<S> {
        self.product_filtered(a, b, |r, s| (r <= s).then(|| s - r))
    }

    /// A_r ⌞ B_s = ⟨A_r B_s⟩_{r−s} for r ≥ s, zero otherwise.
    pub fn contract_right(&self, a: &Multivector<S>, b: &Multivector<S>) -> Multivector<S> {
        self.product_filtered(a, b, |r, s| (r >= s).then(|| r - s))
    }

    /// ⟨Ã B⟩_0; zero across distinct grades.
    pub fn scalar_product(&self, a: &Multivector<S>, b: &Multivector<S>) -> S {
        let ar = a.reverse();
        let mut out = S::zero();
        for i in 0..16 {
            for j in 0..16 {
                if BLADE_GRADE[i] == BLADE_GRADE[j] {
                    out += ar.c[i] * b.c[j] * self.blade_product(i, j)[0];
                }
            }
        }
        out
    }

    /// ★A = Ã ⌟ τ_g.
    pub fn hodge(&self, a: &Multivector<S>) -> Multivector<S> {
        self.contract_left(&a.reverse(), &self.volume())
    }

    /// ★⁻¹ on a grade-r input is (−1)^{r(4−r)} sgn 𝐠 ★.
    pub fn hodge_inverse(&self, a: &Multivector<S>) -> Multivector<S> {
        let sgn = if self.det_g.re() < 0.0 { -1 } else { 1 };
        let mut out = Multivector::zero();
        for r in 0..=4 {
            let part = self.hodge(&a.grade(r));
            let sign = sgn * if (r * (4 - r)) % 2 == 0 { 1 } else { -1 };
            if sign > 0 {
                out += part;
            } else {
                out -= part;
            }
        }
        out
    }

    /// γ_μ = g_{μν} γ^ν.
    pub fn gamma_lower(&self, mu: usize) -> Multivector<S> {
        Multivector::vector(self.g_lower[mu])
    }

    /// Raise a 1-form: components v_μ → g^{μν} v_ν.
    pub fn raise(&self, v: [S; 4]) -> [S; 4] {
        std::array::from_fn(|m| {
            let mut s = S::zero();
            for n in 0..4 {
                s += self.g_upper[m][n] * v[n];
            }
            s
        })
    }
}

/// γ^i ⌟ e_J as coefficients over blades of grade |J|−1.
fn vector_contract_blade<S: Scalar>(g_upper: &Mat4<S>, i: usize, slot: usize, out: &mut [S; 16], coef: S) {
    let idx = blade_indices(slot);
    let mask = BLADE_MASK[slot];
    for (k, &j) in idx.iter().enumerate() {
        let t = coef * g_upper[i][j];
        let target = slot_of_mask(mask & !(1 << j));
        if k % 2 == 0 {
            out[target] += t;
        } else {
            out[target] -= t;
        }
    }
}

/// γ^i X = γ^i⌟X + γ^i∧X.
fn vector_left_mul<S: Scalar>(g_upper: &Mat4<S>, i: usize, x: &[S; 16]) -> [S; 16] {
    let mut out = [S::zero(); 16];
    let vm = 1u8 << i;
    for j in 0..16 {
        vector_contract_blade(g_upper, i, j, &mut out, x[j]);
        let s = wedge_sign(vm, BLADE_MASK[j]);
        if s != 0 {
            let k = slot_of_mask(vm | BLADE_MASK[j]);
            if s > 0 {
                out[k] += x[j];
            } else {
                out[k] -= x[j];
            }
        }
    }
    out
}

/// Blade product table built grade by grade from
/// e_I = γ^{i}∧e_{I'} = γ^{i} e_{I'} − γ^{i}⌟e_{I'} (i the lowest index of I).
fn build_table<S: Scalar>(g_upper: &Mat4<S>) -> Vec<[S; 16]> {
    let mut table = vec![[S::zero(); 16]; 256];
    let mut order: Vec<usize> = (0..16).collect();
    order.sort_by_key(|&s| BLADE_GRADE[s]);
    for &i in &order {
        let mask = BLADE_MASK[i];
        if mask == 0 {
            for j in 0..16 {
                table[j][j] = S::one();
            }
            continue;
        }
        let low = mask.trailing_zeros() as usize;
        let rest = slot_of_mask(mask & !(1 << low));
        let mut contraction = [S::zero(); 16];
        vector_contract_blade(g_upper, low, rest, &mut contraction, S::one());
        for j in 0..16 {
            let mut row = vector_left_mul(g_upper, low, &table[rest * 16 + j]);
            for (k, coef) in contraction.iter().enumerate() {
                if BLADE_GRADE[k] + 2 != BLADE_GRADE[i] {
                    continue;
                }
                let sub = table[k * 16 + j];
                for m in 0..16 {
                    row[m] -= *coef * sub[m];
                }
            }
            table[i * 16 + j] = row;
        }
    }
    table
}
