//! Truncated Hilbert space representations at numeric q in (0,1).
//!
//! Operators on l2(N) are compressed to the span of the first D basis
//! vectors. Every generator image is a weighted shift of bandwidth at most
//! one, so the image of a word is computed by chasing basis vectors, which
//! agrees exactly with the product of the truncated generator matrices.
//! Identity-type checks are asserted on interior corners only, because the
//! truncated shift satisfies S'S = 1 - e_{D-1}e_{D-1}'.

use crate::error::{AlgebraError, Result};
use crate::ncpoly::NCPoly;
use crate::presentation::{PresId, Word};
use std::fmt::Write as _;

/// A dense D x D real matrix, the compression of an operator on l2(N).
#[derive(Clone, Debug, PartialEq)]
pub struct TruncOp {
    dim: usize,
    data: Vec<f64>,
}

impl TruncOp {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1);
        TruncOp {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = TruncOp::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = TruncOp::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn add(&self, other: &TruncOp) -> TruncOp {
        assert_eq!(self.dim, other.dim);
        TruncOp {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &TruncOp) -> TruncOp {
        assert_eq!(self.dim, other.dim);
        TruncOp {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> TruncOp {
        TruncOp {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, other: &TruncOp) -> TruncOp {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = TruncOp::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self.data[i * d + k];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += aik * other.data[k * d + j];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> TruncOp {
        let d = self.dim;
        TruncOp::from_fn(d, |i, j| self.data[j * d + i])
    }

    /// Sum of the diagonal.
    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    /// Top-left k x k corner.
    pub fn leading_corner(&self, k: usize) -> TruncOp {
        assert!(k >= 1 && k <= self.dim);
        TruncOp::from_fn(k, |i, j| self.get(i, j))
    }

    /// Operator 2-norm by deterministic power iteration on A'A.
    pub fn op_norm(&self) -> f64 {
        let d = self.dim;
        let at = self.transpose();
        // fixed starting vector, no randomness
        let mut v: Vec<f64> = (0..d).map(|i| 1.0 / (i as f64 + 1.0)).collect();
        normalize_vec(&mut v);
        let mut lambda = 0.0f64;
        for _ in 0..10_000 {
            // w = A'A v
            let av = self.apply(&v);
            let w = at.apply(&av);
            let new_lambda = dot(&v, &w);
            let norm = normed(&w);
            if norm == 0.0 {
                return 0.0;
            }
            v = w.iter().map(|x| x / norm).collect();
            if (new_lambda - lambda).abs() <= 1e-15 * new_lambda.abs().max(1.0) {
                lambda = new_lambda;
                break;
            }
            lambda = new_lambda;
        }
        lambda.max(0.0).sqrt()
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d];
        for i in 0..d {
            let mut acc = 0.0;
            for j in 0..d {
                acc += self.data[i * d + j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Row-major plain text dump, 17 significant digits per entry.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if j > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{:.16e}", self.get(i, j));
            }
            out.push('\n');
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normed(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn normalize_vec(v: &mut [f64]) {
    let n = normed(v);
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
}

/// Which representation to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepKind {
    /// Quantum SU(2) on l2(N): `a e_n = (1-q^{2n})^{1/2} e_{n-1}`,
    /// `b e_n = -q^{n+1} e_n`, `c e_n = q^n e_n`,
    /// `d e_n = (1-q^{2(n+1)})^{1/2} e_{n+1}`.
    RhoSuq2,
    /// Podles sphere on l2(N): `A e_n = q^{2n} e_n`,
    /// `B e_n = q^n (1-q^{2n})^{1/2} e_{n-1}`.
    RhoPlusSphere,
    /// Quantum disc on l2(N): `z e_n = (1-q^{2(n+1)})^{1/2} e_{n+1}`.
    MuDisc,
    /// Extended quantum disc: the disc plus `s e_n = q^n e_n`.
    MuDiscExt,
    /// The unilateral shift: `S e_n = e_{n+1}`.
    Shift,
}

impl RepKind {
    pub fn algebra(self) -> PresId {
        match self {
            RepKind::RhoSuq2 => PresId::SuQ2,
            RepKind::RhoPlusSphere => PresId::Sphere,
            RepKind::MuDisc => PresId::Disc,
            RepKind::MuDiscExt => PresId::DiscExt,
            RepKind::Shift => PresId::Isometry,
        }
    }

    pub fn from_name(name: &str) -> Option<RepKind> {
        match name {
            "rho_suq2" => Some(RepKind::RhoSuq2),
            "rho_plus_sphere" => Some(RepKind::RhoPlusSphere),
            "mu_disc" => Some(RepKind::MuDisc),
            "mu_disc_ext" => Some(RepKind::MuDiscExt),
            "shift" => Some(RepKind::Shift),
            _ => None,
        }
    }

    /// The default representation for a presentation, when one exists.
    pub fn for_algebra(pres: PresId) -> Option<RepKind> {
        match pres {
            PresId::SuQ2 => Some(RepKind::RhoSuq2),
            PresId::Sphere => Some(RepKind::RhoPlusSphere),
            PresId::Disc => Some(RepKind::MuDisc),
            PresId::DiscExt => Some(RepKind::MuDiscExt),
            PresId::Isometry => Some(RepKind::Shift),
            PresId::Circle => None,
        }
    }
}

/// A representation choice: kind, numeric q, and truncation dimension.
#[derive(Clone, Copy, Debug)]
pub struct RepSpec {
    pub kind: RepKind,
    pub q: f64,
    pub dim: usize,
}

impl RepSpec {
    pub fn new(kind: RepKind, q: f64, dim: usize) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(AlgebraError::InvalidParameter(format!(
                "q must lie strictly in (0,1), got {}",
                q
            )));
        }
        if dim < 1 {
            return Err(AlgebraError::DimensionTooSmall { dim, need: 1 });
        }
        Ok(RepSpec { kind, q, dim })
    }

    /// Action of a single generator on `e_n`: `Some((target, factor))` or
    /// `None` when the vector is annihilated.
    fn letter_action(&self, letter: u8, n: usize) -> Option<(usize, f64)> {
        let q = self.q;
        let name = self.kind.algebra().get().letter_name(letter);
        match (self.kind, name) {
            (RepKind::RhoSuq2, "a") => {
                if n == 0 {
                    None
                } else {
                    Some((n - 1, (1.0 - q.powi(2 * n as i32)).sqrt()))
                }
            }
            (RepKind::RhoSuq2, "b") => Some((n, -q.powi(n as i32 + 1))),
            (RepKind::RhoSuq2, "c") => Some((n, q.powi(n as i32))),
            (RepKind::RhoSuq2, "d") => Some((n + 1, (1.0 - q.powi(2 * (n as i32 + 1))).sqrt())),
            (RepKind::RhoPlusSphere, "A") => Some((n, q.powi(2 * n as i32))),
            (RepKind::RhoPlusSphere, "B") => {
                if n == 0 {
                    None
                } else {
                    Some((
                        n - 1,
                        q.powi(n as i32) * (1.0 - q.powi(2 * n as i32)).sqrt(),
                    ))
                }
            }
            (RepKind::RhoPlusSphere, "B'") => Some((
                n + 1,
                q.powi(n as i32 + 1) * (1.0 - q.powi(2 * (n as i32 + 1))).sqrt(),
            )),
            (RepKind::MuDisc, "z") | (RepKind::MuDiscExt, "z") => {
                Some((n + 1, (1.0 - q.powi(2 * (n as i32 + 1))).sqrt()))
            }
            (RepKind::MuDisc, "z'") | (RepKind::MuDiscExt, "z'") => {
                if n == 0 {
                    None
                } else {
                    Some((n - 1, (1.0 - q.powi(2 * n as i32)).sqrt()))
                }
            }
            (RepKind::MuDiscExt, "s") => Some((n, q.powi(n as i32))),
            (RepKind::Shift, "S") => Some((n + 1, 1.0)),
            (RepKind::Shift, "S'") => {
                if n == 0 {
                    None
                } else {
                    Some((n - 1, 1.0))
                }
            }
            _ => unreachable!("letter/representation mismatch"),
        }
    }

    /// The truncated matrix of a single generator.
    pub fn letter_matrix(&self, letter: u8) -> TruncOp {
        let mut m = TruncOp::zeros(self.dim);
        for n in 0..self.dim {
            if let Some((t, f)) = self.letter_action(letter, n) {
                if t < self.dim {
                    m.set(t, n, f);
                }
            }
        }
        m
    }

    /// Image of a word: the column version of the truncated matrix product,
    /// identical to multiplying the truncated generator matrices.
    fn word_matrix(&self, w: &Word) -> TruncOp {
        let mut m = TruncOp::zeros(self.dim);
        for n in 0..self.dim {
            let mut idx = n;
            let mut f = 1.0f64;
            let mut alive = true;
            for &l in w.letters().iter().rev() {
                match self.letter_action(l, idx) {
                    Some((t, factor)) if t < self.dim => {
                        idx = t;
                        f *= factor;
                    }
                    _ => {
                        alive = false;
                        break;
                    }
                }
            }
            if alive {
                m.set(idx, n, m.get(idx, n) + f);
            }
        }
        m
    }
}

/// Image of a polynomial: normalize, then sum the word images with scalars
/// evaluated at the numeric q.
pub fn represent(x: &NCPoly, spec: &RepSpec) -> Result<TruncOp> {
    if x.presentation() != spec.kind.algebra() {
        return Err(AlgebraError::PresentationMismatch {
            expected: spec.kind.algebra(),
            got: x.presentation(),
        });
    }
    let xn = x.normalize();
    let mut out = TruncOp::zeros(spec.dim);
    for (w, c) in xn.terms() {
        let m = spec.word_matrix(w);
        out = out.add(&m.scale(c.eval_f64(spec.q)));
    }
    Ok(out)
}

/// Free product of the raw generator matrices, without normalizing first.
/// Used as the oracle side of the homomorphism-residual checks.
pub fn represent_free(x: &NCPoly, spec: &RepSpec) -> Result<TruncOp> {
    if x.presentation() != spec.kind.algebra() {
        return Err(AlgebraError::PresentationMismatch {
            expected: spec.kind.algebra(),
            got: x.presentation(),
        });
    }
    let mut out = TruncOp::zeros(spec.dim);
    for (w, c) in x.terms() {
        let mut m = TruncOp::identity(spec.dim);
        for &l in w.letters() {
            m = m.mul(&spec.letter_matrix(l));
        }
        out = out.add(&m.scale(c.eval_f64(spec.q)));
    }
    Ok(out)
}

/// The symbol map onto the circle: `z -> u`, `z' -> u'`, `s -> 0`,
/// `S -> u`, `S' -> u'`. Exact, defined on the disc, the extended disc,
/// and the isometry algebra.
pub fn symbol(x: &NCPoly) -> Result<NCPoly> {
    let pres = x.presentation();
    let u = NCPoly::generator(PresId::Circle, "u")?;
    let us = NCPoly::generator(PresId::Circle, "u'")?;
    let image = |name: &str| -> Option<&NCPoly> {
        match (pres, name) {
            (PresId::Disc, "z") | (PresId::DiscExt, "z") | (PresId::Isometry, "S") => Some(&u),
            (PresId::Disc, "z'") | (PresId::DiscExt, "z'") | (PresId::Isometry, "S'") => Some(&us),
            (PresId::DiscExt, "s") => None,
            _ => None,
        }
    };
    if !matches!(pres, PresId::Disc | PresId::DiscExt | PresId::Isometry) {
        return Err(AlgebraError::NoSymbolMap(pres));
    }
    let xn = x.normalize();
    let mut out = NCPoly::zero(PresId::Circle);
    'term: for (w, c) in xn.terms() {
        let mut acc = NCPoly::one(PresId::Circle);
        for &l in w.letters() {
            match image(pres.get().letter_name(l)) {
                Some(img) => acc = acc.mul(img),
                None => continue 'term,
            }
        }
        out = out.add(&acc.scale(c));
    }
    Ok(out.normalize())
}

/// Approximation to the matrix unit `e_{n+m,n}` built inside the quantum
/// disc: a partial isometry `z^m |z^m|^{-1}` (or its adjoint for m < 0)
/// applied to the spectral projection of `y = 1 - z z'` at `q^{2n}`.
pub fn elementary_matrix(n: i64, m: i64, q: f64, dim: usize) -> Result<TruncOp> {
    if n < 0 || n + m < 0 {
        return Err(AlgebraError::InvalidParameter(format!(
            "need n >= 0 and n + m >= 0, got n={}, m={}",
            n, m
        )));
    }
    let need = (n + m.abs()) as usize + 1;
    if dim < need + 1 {
        return Err(AlgebraError::DimensionTooSmall {
            dim,
            need: need + 1,
        });
    }
    let spec = RepSpec::new(RepKind::MuDisc, q, dim)?;
    let z = NCPoly::generator(PresId::Disc, "z")?;
    let zs = NCPoly::generator(PresId::Disc, "z'")?;
    // y = 1 - z z' is diagonal with entries q^{2k} (exact at every k < D)
    let y = represent(&NCPoly::one(PresId::Disc).sub(&z.mul(&zs)), &spec)?;
    // chi_n(y): nearest-eigenvalue selection at relative tolerance 1e-6
    let target = q.powi(2 * n as i32);
    let chi = TruncOp::from_fn(dim, |i, j| {
        if i == j && (y.get(i, i) - target).abs() <= 1e-6 * target {
            1.0
        } else {
            0.0
        }
    });
    // |z^|m||^{-1} = (prod_{k=1..|m|} (1 - q^{2k} y))^{-1/2}, diagonal
    let mm = m.unsigned_abs() as i32;
    let inv_abs = TruncOp::from_fn(dim, |i, j| {
        if i != j {
            return 0.0;
        }
        let yi = y.get(i, i);
        let mut prod = 1.0;
        for k in 1..=mm {
            prod *= 1.0 - q.powi(2 * k) * yi;
        }
        prod.powf(-0.5)
    });
    let zmat = represent(&z, &spec)?;
    if m >= 0 {
        let mut zp = TruncOp::identity(dim);
        for _ in 0..m {
            zp = zp.mul(&zmat);
        }
        Ok(zp.mul(&inv_abs).mul(&chi))
    } else {
        let zt = zmat.transpose();
        let mut zp = TruncOp::identity(dim);
        for _ in 0..(-m) {
            zp = zp.mul(&zt);
        }
        let chi_shifted = TruncOp::from_fn(dim, |i, j| {
            let t = q.powi(2 * (n + m) as i32);
            if i == j && (y.get(i, i) - t).abs() <= 1e-6 * t {
                1.0
            } else {
                0.0
            }
        });
        Ok(chi_shifted.mul(&inv_abs).mul(&zp))
    }
}

/// The literal 0/1 matrix unit `e_{i,j}`.
pub fn matrix_unit(i: usize, j: usize, dim: usize) -> TruncOp {
    let mut m = TruncOp::zeros(dim);
    m.set(i, j, 1.0);
    m
}
