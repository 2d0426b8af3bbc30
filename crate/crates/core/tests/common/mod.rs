//! Shared helpers for the integration tests: an arbitrary-precision evaluator
//! for the field formulas and seeded random geometry.
#![allow(dead_code)]

use astro_float::{BigFloat, Consts, RoundingMode};
use nf_aliaser::{ArrayGeometry, Complex64, Role, Vec3, WaveParams};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const P: usize = 192;
const RM: RoundingMode = RoundingMode::ToEven;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Arbitrary-precision evaluation of distances, Green's factors and chirp sums.
pub struct Precise {
    cc: Consts,
}

pub type Big = BigFloat;

impl Precise {
    pub fn new() -> Self {
        Precise { cc: Consts::new().unwrap() }
    }

    pub fn big(&self, v: f64) -> Big {
        BigFloat::from_f64(v, P)
    }

    pub fn to_f64(&self, v: &Big) -> f64 {
        v.to_string().parse().unwrap()
    }

    fn wavenumber(&mut self, wave: &WaveParams) -> Big {
        let two_pi = self.cc.pi(P, RM).mul(&self.big(2.0), P, RM);
        two_pi.div(&self.big(wave.wavelength()), P, RM)
    }

    pub fn distance(&self, a: Vec3, b: Vec3) -> Big {
        let mut s = self.big(0.0);
        for i in 0..3 {
            let d = self.big(a[i]).sub(&self.big(b[i]), P, RM);
            s = s.add(&d.mul(&d, P, RM), P, RM);
        }
        s.sqrt(P, RM)
    }

    fn polar(&mut self, amp: &Big, phase: &Big) -> (Big, Big) {
        let c = phase.cos(P, RM, &mut self.cc);
        let s = phase.sin(P, RM, &mut self.cc);
        (amp.mul(&c, P, RM), amp.mul(&s, P, RM))
    }

    pub fn green(&mut self, source: Vec3, probe: Vec3, wave: &WaveParams) -> Complex64 {
        let r = self.distance(source, probe);
        let k = self.wavenumber(wave);
        let amp = self.big(1.0).div(&r, P, RM);
        let phase = k.mul(&r, P, RM).neg();
        let (re, im) = self.polar(&amp, &phase);
        Complex64::new(self.to_f64(&re), self.to_f64(&im))
    }

    /// `Σ_x conj(z(tentative, x)) z(scatterer, x)` accumulated in full precision.
    pub fn chirp_sum(&mut self, elements: &[Vec3], tentative: Vec3, scatterer: Vec3, wave: &WaveParams) -> Complex64 {
        let k = self.wavenumber(wave);
        let mut re = self.big(0.0);
        let mut im = self.big(0.0);
        for &x in elements {
            let dt = self.distance(x, tentative);
            let ds = self.distance(x, scatterer);
            let amp = self.big(1.0).div(&dt.mul(&ds, P, RM), P, RM);
            let phase = k.mul(&dt.sub(&ds, P, RM), P, RM);
            let (a, b) = self.polar(&amp, &phase);
            re = re.add(&a, P, RM);
            im = im.add(&b, P, RM);
        }
        Complex64::new(self.to_f64(&re), self.to_f64(&im))
    }

    /// `max_x |k · axis|` over `elements`, in full precision.
    pub fn max_projection(
        &mut self,
        elements: &[Vec3],
        tentative: Vec3,
        scatterer: Vec3,
        axis: Vec3,
        wave: &WaveParams,
    ) -> f64 {
        let k = self.wavenumber(wave);
        let mut best = self.big(0.0);
        for &x in elements {
            let dt = self.distance(x, tentative);
            let ds = self.distance(x, scatterer);
            let mut proj = self.big(0.0);
            for i in 0..3 {
                let a = self.big(x[i]).sub(&self.big(tentative[i]), P, RM).div(&dt, P, RM);
                let b = self.big(x[i]).sub(&self.big(scatterer[i]), P, RM).div(&ds, P, RM);
                proj = proj.add(&a.sub(&b, P, RM).mul(&self.big(axis[i]), P, RM), P, RM);
            }
            let v = k.mul(&proj, P, RM).abs();
            if v > best {
                best = v;
            }
        }
        self.to_f64(&best)
    }
}

pub fn unit_vector(r: &mut impl Rng) -> Vec3 {
    loop {
        let v = Vec3::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n < 1.0 {
            return v * (1.0 / n);
        }
    }
}

/// Random orthonormal frame of `dims` axes.
pub fn random_axes(r: &mut impl Rng, dims: usize) -> Vec<Vec3> {
    let mut axes: Vec<Vec3> = Vec::new();
    while axes.len() < dims {
        let mut v = unit_vector(r);
        for a in &axes {
            v = v - *a * v.dot(*a);
        }
        let n = v.norm();
        if n > 0.1 {
            axes.push(v * (1.0 / n));
        }
    }
    axes
}

/// 1D or 2D array with at most 16 elements, random orientation, origin in a
/// `±extent` box.
pub fn random_array(r: &mut impl Rng, role: Role, extent: f64) -> ArrayGeometry {
    let dims = r.gen_range(1..=2);
    let counts: Vec<usize> = if dims == 1 {
        vec![r.gen_range(1..=16)]
    } else {
        vec![r.gen_range(1..=4), r.gen_range(1..=4)]
    };
    let spacings = (0..dims).map(|_| r.gen_range(0.3..3.0)).collect();
    let origin = Vec3::new(
        r.gen_range(-extent..extent),
        r.gen_range(-extent..extent),
        r.gen_range(-extent..extent),
    );
    ArrayGeometry::uniform(origin, random_axes(r, dims), counts, spacings, role).unwrap()
}

/// Random point at least `clearance` away from every element of `arrays`.
pub fn clear_point(r: &mut impl Rng, arrays: &[&ArrayGeometry], extent: f64, clearance: f64) -> Vec3 {
    loop {
        let p = Vec3::new(
            r.gen_range(-extent..extent),
            r.gen_range(-extent..extent),
            r.gen_range(-extent..extent),
        );
        if arrays.iter().all(|a| a.min_distance_to(p) >= clearance) {
            return p;
        }
    }
}

pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}
