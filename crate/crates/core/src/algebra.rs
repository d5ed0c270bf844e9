//! Seeded property suite for the Clifford algebra identities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::Mat4;
use crate::multivector::{CotangentMetric, Multivector, BLADE_GRADE};

type Mv = Multivector<f64>;

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityResidual {
    pub name: &'static str,
    pub max_relative: f64,
    pub cases: usize,
}

/// g = Aᵀ η A with A a random perturbation of the identity.
pub fn random_lorentzian(rng: &mut impl Rng) -> Mat4<f64> {
    let a: Mat4<f64> = std::array::from_fn(|i| {
        std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 } + rng.gen_range(-0.35..0.35))
    });
    let eta = [1.0, -1.0, -1.0, -1.0];
    std::array::from_fn(|m| std::array::from_fn(|n| (0..4).map(|k| a[k][m] * eta[k] * a[k][n]).sum()))
}

pub fn random_multivector(rng: &mut impl Rng) -> Mv {
    Mv::from_components(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
}

pub fn random_homogeneous(rng: &mut impl Rng, grade: usize) -> Mv {
    random_multivector(rng).grade(grade)
}

struct Tally {
    entries: Vec<IdentityResidual>,
}

impl Tally {
    fn record(&mut self, name: &'static str, lhs: &Mv, rhs: &Mv, scale: f64) {
        let diff = (*lhs - *rhs).norm();
        let denom = scale.max(lhs.norm()).max(rhs.norm()).max(1e-300);
        let rel = if diff == 0.0 { 0.0 } else { diff / denom };
        match self.entries.iter_mut().find(|e| e.name == name) {
            Some(e) => {
                e.max_relative = e.max_relative.max(rel);
                e.cases += 1;
            }
            None => self.entries.push(IdentityResidual {
                name,
                max_relative: rel,
                cases: 1,
            }),
        }
    }

    fn record_scalar(&mut self, name: &'static str, lhs: f64, rhs: f64, scale: f64) {
        self.record(name, &Mv::scalar(lhs), &Mv::scalar(rhs), scale);
    }
}

fn sign(p: usize) -> f64 {
    if p.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Runs every identity on `cases` random inputs spread over `metrics` random metrics.
pub fn run_suite(seed: u64, cases: usize, metrics: usize) -> Vec<IdentityResidual> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally { entries: Vec::new() };
    let metric_list: Vec<CotangentMetric<f64>> = (0..metrics.max(1))
        .map(|_| CotangentMetric::new(random_lorentzian(&mut rng)).expect("random metric is Lorentzian"))
        .collect();
    for case in 0..cases {
        let m = &metric_list[case % metric_list.len()];
        let a = random_multivector(&mut rng);
        let b = random_multivector(&mut rng);
        let c = random_multivector(&mut rng);
        check_general(&mut tally, m, &a, &b, &c, &mut rng);
        let r = rng.gen_range(0..=4);
        let s = rng.gen_range(0..=4);
        let t = rng.gen_range(0..=4);
        let ar = random_homogeneous(&mut rng, r);
        let bs = random_homogeneous(&mut rng, s);
        let ct = random_homogeneous(&mut rng, t);
        let v = random_homogeneous(&mut rng, 1);
        check_graded(&mut tally, m, (&ar, r), (&bs, s), (&ct, t), &v);
    }
    for m in &metric_list {
        for slot in 0..16 {
            let e = Mv::blade(slot);
            tally.record("hodge_roundtrip_blades", &m.hodge_inverse(&m.hodge(&e)), &e, 1.0);
            tally.record("hodge_roundtrip_blades", &m.hodge(&m.hodge_inverse(&e)), &e, 1.0);
        }
        tally.record("hodge_unit", &m.hodge(&Mv::scalar(1.0)), &m.volume(), 1.0);
        tally.record("hodge_unit", &m.hodge(&m.volume()), &Mv::scalar(m.det_g.signum()), 1.0);
    }
    tally.entries
}

fn check_general(tally: &mut Tally, m: &CotangentMetric<f64>, a: &Mv, b: &Mv, c: &Mv, rng: &mut impl Rng) {
    let (na, nb, nc) = (a.norm(), b.norm(), c.norm());
    let ab_c = m.clifford_product(&m.clifford_product(a, b), c);
    let a_bc = m.clifford_product(a, &m.clifford_product(b, c));
    tally.record("associativity", &ab_c, &a_bc, na * nb * nc);

    let (x, y) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let lin = m.clifford_product(&(a.scale(x) + b.scale(y)), c);
    let split = m.clifford_product(a, c).scale(x) + m.clifford_product(b, c).scale(y);
    tally.record("bilinearity", &lin, &split, (na + nb) * nc * 2.0);
    let lin = m.clifford_product(c, &(a.scale(x) + b.scale(y)));
    let split = m.clifford_product(c, a).scale(x) + m.clifford_product(c, b).scale(y);
    tally.record("bilinearity", &lin, &split, (na + nb) * nc * 2.0);

    let unit = Mv::scalar(1.0);
    tally.record("identity_element", &m.clifford_product(&unit, a), a, na);
    tally.record("identity_element", &m.clifford_product(a, &unit), a, na);

    tally.record("hodge_roundtrip", &m.hodge_inverse(&m.hodge(a)), a, na);
}

fn check_graded(
    tally: &mut Tally,
    m: &CotangentMetric<f64>,
    (a, r): (&Mv, usize),
    (b, s): (&Mv, usize),
    (c, t): (&Mv, usize),
    v: &Mv,
) {
    let (na, nb, nc, nv) = (a.norm(), b.norm(), c.norm(), v.norm());
    let vb = m.clifford_product(v, b);
    let bv = m.clifford_product(b, v);
    tally.record("vector_product_split", &vb, &(m.contract_left(v, b) + v.wedge(b)), nv * nb);
    tally.record("vector_product_split", &bv, &(m.contract_right(b, v) + b.wedge(v)), nv * nb);
    tally.record(
        "vector_contraction_commutator",
        &m.contract_left(v, b),
        &(vb - bv.scale(sign(s))).scale(0.5),
        nv * nb,
    );
    tally.record("vector_wedge_anticommutator", &v.wedge(b), &(vb + bv.scale(sign(s))).scale(0.5), nv * nb);

    let lhs = m.contract_left(a, b);
    let rhs = m.contract_right(b, a);
    let expected = if r <= s { rhs.scale(sign(r * (s - r))) } else { Mv::zero() };
    tally.record("contraction_reversal_sign", &lhs, &expected, na * nb);

    let ab = m.clifford_product(a, b);
    let lo = r.abs_diff(s);
    let mut allowed = Mv::zero();
    let mut k = lo;
    while k <= (r + s).min(4) {
        allowed += ab.grade(k);
        k += 2;
    }
    tally.record("grade_expansion", &ab, &allowed, na * nb);

    let bb = random_like(a, b, r);
    let nbb = bb.norm();
    let dot = m.scalar_product(a, &bb);
    let forms = [
        m.scalar_product(&bb, a),
        m.contract_left(&a.reverse(), &bb).c[0],
        m.contract_right(a, &bb.reverse()).c[0],
        m.clifford_product(&a.reverse(), &bb).c[0],
        m.clifford_product(a, &bb.reverse()).c[0],
    ];
    for f in forms {
        tally.record_scalar("scalar_product_forms", dot, f, na * nbb);
    }
    if r != s {
        tally.record_scalar("scalar_product_grades", m.scalar_product(a, b), 0.0, na * nb);
    }

    let lhs = m.contract_left(v, &b.wedge(c));
    let rhs = m.contract_left(v, b).wedge(c) + b.involute().wedge(&m.contract_left(v, c));
    tally.record("contraction_derivation", &lhs, &rhs, nv * nb * nc);

    let lhs = m.contract_left(a, &m.contract_left(b, c));
    let rhs = m.contract_left(&a.wedge(b), c);
    tally.record("contraction_composition", &lhs, &rhs, na * nb * nc);
    if t == 2 {
        let lhs = m.contract_right(&m.contract_right(c, b), a);
        let rhs = m.contract_right(c, &b.wedge(a));
        tally.record("right_contraction_composition", &lhs, &rhs, na * nb * nc);
    }

    let tau = m.volume();
    let lhs = tau.scale(m.scalar_product(&bb, a));
    let rhs = bb.wedge(&m.hodge(a));
    tally.record("hodge_defining_relation", &lhs, &rhs, na * nbb * tau.norm());

    tally.record("hodge_wedge_symmetry", &a.wedge(&m.hodge(&bb)), &bb.wedge(&m.hodge(a)), na * nbb * tau.norm());
    let dual_partner = random_like(a, b, 4 - r);
    tally.record_scalar(
        "hodge_dot_symmetry",
        m.scalar_product(a, &m.hodge(&dual_partner)),
        sign(r * (4 - r)) * m.scalar_product(&dual_partner, &m.hodge(a)),
        na * dual_partner.norm() * tau.norm(),
    );
    if r <= s {
        let lhs = a.wedge(&m.hodge(b));
        let rhs = m.hodge(&m.contract_left(&a.reverse(), b)).scale(sign(r * (s + 1)));
        tally.record("hodge_wedge_contraction", &lhs, &rhs, na * nb * tau.norm());
    }
    if r + s <= 4 {
        let lhs = m.contract_left(a, &m.hodge(b));
        let rhs = m.hodge(&a.reverse().wedge(b)).scale(sign(r * s));
        tally.record("hodge_contraction_wedge", &lhs, &rhs, na * nb * tau.norm());
    }
}

/// A homogeneous element of the given grade built deterministically from the inputs.
fn random_like(a: &Mv, b: &Mv, grade: usize) -> Mv {
    let mut out = Mv::zero();
    for i in 0..16 {
        if BLADE_GRADE[i] == grade {
            out.c[i] = a.c[(i * 7 + 3) % 16] - b.c[(i * 5 + 1) % 16] + 0.25;
        }
    }
    out
}
