//! The graded fibre-product comodule algebra and its line-bundle grades.
//!
//! An element of the ambient product is a pair: a Z-graded element of
//! (Toeplitz model) (x) circle on the first leg, and a Laurent polynomial on
//! the second. The fibre product keeps the pairs whose grade-N components
//! satisfy the matching condition `symbol(t_N) u^N = alpha_N`; those are the
//! [`FibreElement`]s. The grade-N subspace L_N is the quantum line bundle of
//! winding number N over the grade-zero subalgebra, which is the Podles
//! sphere in its compact-plus-scalar picture.
//!
//! Two Toeplitz models ship: the extended quantum disc (exact home of the
//! embedding of quantum SU(2)) and the isometry algebra (exact home of the
//! strong-connection and Bass computations, where `S'S = 1` holds on the
//! nose).

use crate::error::{AlgebraError, Result};
use crate::ncpoly::NCPoly;
use crate::oprep::symbol;
use crate::presentation::PresId;
use crate::scalar::QRat;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// An element of the ambient product algebra (no matching condition):
/// first leg graded over a Toeplitz-model presentation, second leg a
/// Laurent polynomial on the circle stored per grade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientElement {
    pres: PresId,
    t: BTreeMap<i64, NCPoly>,
    c: BTreeMap<i64, QRat>,
}

impl AmbientElement {
    pub fn zero(pres: PresId) -> Self {
        assert!(toeplitz_model(pres), "not a Toeplitz-model presentation");
        AmbientElement {
            pres,
            t: BTreeMap::new(),
            c: BTreeMap::new(),
        }
    }

    pub fn unit(pres: PresId) -> Self {
        let mut e = AmbientElement::zero(pres);
        e.add_t(0, NCPoly::one(pres));
        e.add_c(0, QRat::one());
        e
    }

    /// First-leg-only element `t (x) u^n`.
    pub fn toeplitz_part(pres: PresId, n: i64, t: NCPoly) -> Self {
        let mut e = AmbientElement::zero(pres);
        e.add_t(n, t.normalize());
        e
    }

    /// Second-leg-only element `alpha u^n`.
    pub fn circle_part(pres: PresId, n: i64, alpha: QRat) -> Self {
        let mut e = AmbientElement::zero(pres);
        e.add_c(n, alpha);
        e
    }

    pub fn model(&self) -> PresId {
        self.pres
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_empty() && self.c.is_empty()
    }

    pub fn t_legs(&self) -> impl Iterator<Item = (&i64, &NCPoly)> {
        self.t.iter()
    }

    pub fn c_legs(&self) -> impl Iterator<Item = (&i64, &QRat)> {
        self.c.iter()
    }

    pub fn t_leg(&self, n: i64) -> NCPoly {
        self.t
            .get(&n)
            .cloned()
            .unwrap_or_else(|| NCPoly::zero(self.pres))
    }

    pub fn c_leg(&self, n: i64) -> QRat {
        self.c.get(&n).cloned().unwrap_or_else(QRat::zero)
    }

    /// Union of the grades carried by either leg.
    pub fn support(&self) -> Vec<i64> {
        let mut s: Vec<i64> = self.t.keys().chain(self.c.keys()).copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn add_t(&mut self, n: i64, p: NCPoly) {
        if p.is_zero() {
            return;
        }
        let entry = self.t.entry(n).or_insert_with(|| NCPoly::zero(self.pres));
        *entry = entry.add(&p);
        if entry.is_zero() {
            self.t.remove(&n);
        }
    }

    pub fn add_c(&mut self, n: i64, alpha: QRat) {
        if alpha.is_zero() {
            return;
        }
        let entry = self.c.entry(n).or_insert_with(QRat::zero);
        *entry = &*entry + &alpha;
        if entry.is_zero() {
            self.c.remove(&n);
        }
    }

    fn assert_model(&self, other: &AmbientElement) {
        assert_eq!(self.pres, other.pres, "mixed Toeplitz models");
    }

    pub fn add(&self, other: &AmbientElement) -> AmbientElement {
        self.assert_model(other);
        let mut out = self.clone();
        for (n, p) in &other.t {
            out.add_t(*n, p.clone());
        }
        for (n, alpha) in &other.c {
            out.add_c(*n, alpha.clone());
        }
        out
    }

    pub fn neg(&self) -> AmbientElement {
        AmbientElement {
            pres: self.pres,
            t: self.t.iter().map(|(n, p)| (*n, p.neg())).collect(),
            c: self.c.iter().map(|(n, a)| (*n, -a)).collect(),
        }
    }

    pub fn sub(&self, other: &AmbientElement) -> AmbientElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &QRat) -> AmbientElement {
        if s.is_zero() {
            return AmbientElement::zero(self.pres);
        }
        AmbientElement {
            pres: self.pres,
            t: self.t.iter().map(|(n, p)| (*n, p.scale(s))).collect(),
            c: self.c.iter().map(|(n, a)| (*n, a * s)).collect(),
        }
    }

    /// Componentwise product of the pair algebra: graded convolution on the
    /// Toeplitz leg, graded scalar convolution on the circle leg.
    pub fn mul(&self, other: &AmbientElement) -> AmbientElement {
        self.assert_model(other);
        let mut out = AmbientElement::zero(self.pres);
        for (m, p) in &self.t {
            for (k, r) in &other.t {
                out.add_t(m + k, p.mul(r).normalize());
            }
        }
        for (m, alpha) in &self.c {
            for (k, beta) in &other.c {
                out.add_c(m + k, alpha * beta);
            }
        }
        out
    }

    /// Star: grade n flips to -n, Toeplitz legs conjugate through the
    /// presentation star, scalars are fixed (q real).
    pub fn star(&self) -> AmbientElement {
        let mut out = AmbientElement::zero(self.pres);
        for (n, p) in &self.t {
            out.add_t(-n, p.star());
        }
        for (n, alpha) in &self.c {
            out.add_c(-n, alpha.clone());
        }
        out
    }

    /// Restriction to a single grade.
    pub fn grade_component(&self, n: i64) -> AmbientElement {
        let mut out = AmbientElement::zero(self.pres);
        if let Some(p) = self.t.get(&n) {
            out.add_t(n, p.clone());
        }
        if let Some(alpha) = self.c.get(&n) {
            out.add_c(n, alpha.clone());
        }
        out
    }
}

fn toeplitz_model(pres: PresId) -> bool {
    matches!(pres, PresId::Disc | PresId::DiscExt | PresId::Isometry)
}

/// The matching defect of one graded component: `symbol(t) u^n - alpha`.
fn matching_defect(n: i64, t: &NCPoly, alpha: &QRat) -> NCPoly {
    let sym = symbol(t).expect("Toeplitz models carry a symbol map");
    let un = crate::ncpoly::gens::u_pow(n);
    sym.mul(&un)
        .sub(&NCPoly::scalar(PresId::Circle, alpha.clone()))
        .normalize()
}

/// A validated element of the fibre product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreElement(AmbientElement);

impl FibreElement {
    pub fn zero(pres: PresId) -> Self {
        FibreElement(AmbientElement::zero(pres))
    }

    pub fn unit(pres: PresId) -> Self {
        FibreElement(AmbientElement::unit(pres))
    }

    /// Validate an ambient element: every grade must satisfy the matching
    /// condition `symbol(t_n) u^n = alpha_n`.
    pub fn try_from_ambient(e: AmbientElement) -> Result<Self> {
        for n in e.support() {
            let t = e.t_leg(n);
            let alpha = e.c_leg(n);
            let defect = matching_defect(n, &t, &alpha);
            if !defect.is_zero() {
                return Err(AlgebraError::IncompatiblePair {
                    n,
                    symbol: symbol(&t).unwrap().to_canonical_string(),
                    alpha: alpha.to_string(),
                });
            }
        }
        Ok(FibreElement(e))
    }

    /// Build from explicit graded components `(n, t_n, alpha_n)`.
    pub fn make(pres: PresId, components: &[(i64, NCPoly, QRat)]) -> Result<Self> {
        let mut e = AmbientElement::zero(pres);
        for (n, t, alpha) in components {
            e.add_t(*n, t.normalize());
            e.add_c(*n, alpha.clone());
        }
        FibreElement::try_from_ambient(e)
    }

    /// A weight-zero element from its Toeplitz leg alone; the scalar leg is
    /// the constant value of the symbol, which must be constant.
    pub fn from_l0(t: &NCPoly) -> Result<Self> {
        let sym = symbol(t)?.normalize();
        let alpha = sym.as_scalar().ok_or_else(|| {
            AlgebraError::Grading(format!(
                "symbol {} is not constant, element does not lie in L_0",
                sym.to_canonical_string()
            ))
        })?;
        FibreElement::make(t.presentation(), &[(0, t.clone(), alpha)])
    }

    pub fn ambient(&self) -> &AmbientElement {
        &self.0
    }

    pub fn into_ambient(self) -> AmbientElement {
        self.0
    }

    pub fn model(&self) -> PresId {
        self.0.pres
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn support(&self) -> Vec<i64> {
        self.0.support()
    }

    pub fn t_leg(&self, n: i64) -> NCPoly {
        self.0.t_leg(n)
    }

    pub fn c_leg(&self, n: i64) -> QRat {
        self.0.c_leg(n)
    }

    pub fn add(&self, other: &FibreElement) -> FibreElement {
        FibreElement(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &FibreElement) -> FibreElement {
        FibreElement(self.0.sub(&other.0))
    }

    pub fn neg(&self) -> FibreElement {
        FibreElement(self.0.neg())
    }

    pub fn scale(&self, s: &QRat) -> FibreElement {
        FibreElement(self.0.scale(s))
    }

    /// Products of valid elements are valid (the matching condition is
    /// multiplicative), so no re-validation is needed.
    pub fn mul(&self, other: &FibreElement) -> FibreElement {
        FibreElement(self.0.mul(&other.0))
    }

    pub fn star(&self) -> FibreElement {
        FibreElement(self.0.star())
    }

    /// The grade-n piece (valid on its own).
    pub fn grade_component(&self, n: i64) -> FibreElement {
        FibreElement(self.0.grade_component(n))
    }

    /// Membership in the line bundle L_n: support contained in {n}.
    pub fn in_grade(&self, n: i64) -> bool {
        self.support().iter().all(|&m| m == n)
    }

    /// JSON form: `{"components": [{"N": n, "t": text, "alpha": text}]}`.
    pub fn to_json(&self) -> Value {
        let comps: Vec<Value> = self
            .support()
            .into_iter()
            .map(|n| {
                json!({
                    "N": n,
                    "t": self.t_leg(n).to_canonical_string(),
                    "alpha": self.c_leg(n).to_string(),
                })
            })
            .collect();
        json!({ "components": comps })
    }
}

/// The embedding of quantum SU(2) into the fibre product over the extended
/// disc: `a -> (z' (x) u, u)`, `b -> (-q s (x) u', 0)`, `c -> (s (x) u, 0)`,
/// `d -> (z (x) u', u')`. A *-algebra morphism; injective on the PBW basis.
pub fn embed_iota(x: &NCPoly) -> Result<FibreElement> {
    if x.presentation() != PresId::SuQ2 {
        return Err(AlgebraError::PresentationMismatch {
            expected: PresId::SuQ2,
            got: x.presentation(),
        });
    }
    let pres = PresId::DiscExt;
    let g = |name: &str| NCPoly::generator(pres, name).unwrap();
    let img = |name: &str| -> FibreElement {
        let (n, t, alpha) = match name {
            "a" => (1, g("z'"), QRat::one()),
            "b" => (-1, g("s").scale(&-&QRat::q_pow(1)), QRat::zero()),
            "c" => (1, g("s"), QRat::zero()),
            "d" => (-1, g("z"), QRat::one()),
            _ => unreachable!(),
        };
        FibreElement::make(pres, &[(n, t, alpha)]).expect("generator images are compatible")
    };
    let xn = x.normalize();
    let mut out = FibreElement::zero(pres);
    for (w, coeff) in xn.terms() {
        let mut acc = FibreElement::unit(pres);
        for &l in w.letters() {
            acc = acc.mul(&img(x.presentation().get().letter_name(l)));
        }
        out = out.add(&acc.scale(coeff));
    }
    Ok(out)
}

/// The forgetful isomorphism from L_0 onto compact-plus-scalar form: keeps
/// the Toeplitz leg, drops the scalar leg.
pub fn iso_psi(x: &FibreElement) -> Result<NCPoly> {
    if !x.in_grade(0) {
        return Err(AlgebraError::NotInGrade {
            expected: 0,
            support: x.support(),
        });
    }
    Ok(x.t_leg(0))
}

/// Inverse of [`iso_psi`]: `k + alpha  ->  (k + alpha, alpha)`, where `k`
/// must have vanishing symbol.
pub fn iso_phi(k: &NCPoly, alpha: &QRat) -> Result<FibreElement> {
    let sym = symbol(k)?.normalize();
    if !sym.is_zero() {
        return Err(AlgebraError::Grading(format!(
            "compact part has nonvanishing symbol {}",
            sym.to_canonical_string()
        )));
    }
    let t = k.add(&NCPoly::scalar(k.presentation(), alpha.clone()));
    FibreElement::make(k.presentation(), &[(0, t, alpha.clone())])
}

/// A rectangular matrix of fibre elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreMatrix {
    pres: PresId,
    rows: usize,
    cols: usize,
    entries: Vec<FibreElement>,
}

impl FibreMatrix {
    pub fn new(pres: PresId, rows: usize, cols: usize, entries: Vec<FibreElement>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        assert!(entries.iter().all(|e| e.model() == pres));
        FibreMatrix {
            pres,
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(pres: PresId, rows: usize, cols: usize) -> Self {
        FibreMatrix::new(
            pres,
            rows,
            cols,
            vec![FibreElement::zero(pres); rows * cols],
        )
    }

    pub fn identity(pres: PresId, n: usize) -> Self {
        let mut m = FibreMatrix::zeros(pres, n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = FibreElement::unit(pres);
        }
        m
    }

    pub fn model(&self) -> PresId {
        self.pres
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &FibreElement {
        &self.entries[i * self.cols + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut FibreElement {
        &mut self.entries[i * self.cols + j]
    }

    pub fn add(&self, other: &FibreMatrix) -> FibreMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FibreMatrix::new(
            self.pres,
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn sub(&self, other: &FibreMatrix) -> FibreMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FibreMatrix::new(
            self.pres,
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }

    pub fn mul(&self, other: &FibreMatrix) -> FibreMatrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = FibreMatrix::zeros(self.pres, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = FibreElement::zero(self.pres);
                for k in 0..self.cols {
                    acc = acc.add(&self.entry(i, k).mul(other.entry(k, j)));
                }
                *out.entry_mut(i, j) = acc;
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn star(&self) -> FibreMatrix {
        let mut out = FibreMatrix::zeros(self.pres, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.entry_mut(j, i) = self.entry(i, j).star();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Exact idempotency: `p^2 - p = 0` entrywise.
    pub fn is_idempotent(&self) -> bool {
        self.rows == self.cols && self.mul(self).sub(self).is_zero()
    }

    /// Exact self-adjointness.
    pub fn is_self_adjoint(&self) -> bool {
        self.rows == self.cols && self.star().sub(self).is_zero()
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &FibreMatrix) -> FibreMatrix {
        assert_eq!(self.pres, other.pres);
        let mut out = FibreMatrix::zeros(self.pres, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.entry_mut(i, j) = self.entry(i, j).clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                *out.entry_mut(self.rows + i, self.cols + j) = other.entry(i, j).clone();
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.rows)
            .map(|i| {
                let row: Vec<Value> = (0..self.cols).map(|j| self.entry(i, j).to_json()).collect();
                Value::Array(row)
            })
            .collect();
        json!({
            "model": self.pres.name(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::gens::*;
    use crate::ncpoly::Weight;

    #[test]
    fn make_accepts_the_generator_image_and_rejects_the_twist() {
        // (z' (x) u, u) is compatible: symbol(z') u = u' u = 1
        let ok = FibreElement::make(PresId::DiscExt, &[(1, z_star_ext(), QRat::one())]);
        assert!(ok.is_ok());
        // (z (x) u, u) is not: symbol(z) u = u^2 != 1
        let bad = FibreElement::make(PresId::DiscExt, &[(1, z_ext(), QRat::one())]);
        match bad {
            Err(AlgebraError::IncompatiblePair { n, .. }) => assert_eq!(n, 1),
            other => panic!("expected IncompatiblePair, got {:?}", other),
        }
        // the unit
        let unit = FibreElement::make(
            PresId::DiscExt,
            &[(0, NCPoly::one(PresId::DiscExt), QRat::one())],
        )
        .unwrap();
        assert_eq!(unit, FibreElement::unit(PresId::DiscExt));
    }

    #[test]
    fn embedding_sends_generators_to_the_stated_pairs() {
        let ia = embed_iota(&a()).unwrap();
        assert_eq!(ia.support(), vec![1]);
        assert_eq!(ia.t_leg(1), z_star_ext());
        assert_eq!(ia.c_leg(1), QRat::one());

        let ic = embed_iota(&c()).unwrap();
        assert_eq!(ic.t_leg(1), s());
        assert!(ic.c_leg(1).is_zero());
    }

    #[test]
    fn embedding_is_an_algebra_star_morphism() {
        let x = a().mul(&b()).sub(&c().scale(&QRat::q_pow(2)));
        let y = d().mul(&c()).add(&NCPoly::one(PresId::SuQ2));
        let lhs = embed_iota(&x.mul(&y)).unwrap();
        let rhs = embed_iota(&x).unwrap().mul(&embed_iota(&y).unwrap());
        assert_eq!(lhs, rhs);
        let lhs_star = embed_iota(&x.star()).unwrap();
        assert_eq!(lhs_star, embed_iota(&x).unwrap().star());
    }

    #[test]
    fn embedding_maps_the_relation_to_the_unit() {
        let rel = a().mul(&d()).sub(&b().mul(&c()).scale(&QRat::q_pow(1)));
        let img = embed_iota(&rel).unwrap();
        assert_eq!(img, FibreElement::unit(PresId::DiscExt));
    }

    #[test]
    fn power_pattern_of_the_embedding() {
        // iota(a* a) = (z z' (x) 1, 1): the n=1, k=0 case of the
        // iota(a*^n a^{n+k}) pattern
        let x = a().star().mul(&a());
        let img = embed_iota(&x).unwrap();
        assert_eq!(img.support(), vec![0]);
        assert_eq!(img.t_leg(0), z_ext().mul(&z_star_ext()).normalize());
        assert_eq!(img.c_leg(0), QRat::one());
    }

    #[test]
    fn grade_membership() {
        assert!(embed_iota(&c()).unwrap().in_grade(1));
        assert!(FibreElement::unit(PresId::DiscExt).in_grade(0));
        // the zero element lies in every grade
        assert!(FibreElement::zero(PresId::DiscExt).in_grade(5));
        let mixed = embed_iota(&a().add(&d())).unwrap();
        assert!(!mixed.in_grade(1));
    }

    #[test]
    fn products_respect_grades() {
        let x = embed_iota(&a()).unwrap(); // L_1
        let y = embed_iota(&d()).unwrap(); // L_-1
        assert!(x.mul(&x).in_grade(2));
        assert!(x.mul(&y).in_grade(0));
    }

    #[test]
    fn psi_phi_round_trip() {
        // psi drops the scalar leg
        let k = NCPoly::one(PresId::DiscExt).sub(&z_ext().mul(&z_star_ext()));
        let x = FibreElement::make(PresId::DiscExt, &[(0, k.clone(), QRat::zero())]).unwrap();
        assert_eq!(iso_psi(&x).unwrap(), k.normalize());

        // phi(0 + 1) is the unit
        let unit = iso_phi(&NCPoly::zero(PresId::DiscExt), &QRat::one()).unwrap();
        assert_eq!(unit, FibreElement::unit(PresId::DiscExt));

        // round trip on (z z', 1)
        let t = z_ext().mul(&z_star_ext()).normalize();
        let x = FibreElement::from_l0(&t).unwrap();
        assert_eq!(x.c_leg(0), QRat::one());
        let back = {
            let tt = iso_psi(&x).unwrap();
            let alpha = x.c_leg(0);
            let kk = tt.sub(&NCPoly::scalar(PresId::DiscExt, alpha.clone()));
            iso_phi(&kk, &alpha).unwrap()
        };
        assert_eq!(back, x);

        // psi rejects elements outside L_0
        assert!(iso_psi(&embed_iota(&c()).unwrap()).is_err());
        // phi rejects a compact part with nonzero symbol
        assert!(iso_phi(&z_ext(), &QRat::one()).is_err());
    }

    #[test]
    fn embedding_images_are_single_graded_atoms() {
        // iota of a PBW word lands on a single graded atom (one word in one
        // grade), so PBW images stay linearly independent
        for w in [
            b().pow(2).mul(&c()).mul(&a()),
            c().pow(3).mul(&d().pow(2)),
            a().pow(4),
        ] {
            let img = embed_iota(&w.normalize()).unwrap();
            assert_eq!(img.support().len(), 1);
            let n = img.support()[0];
            let t = img.t_leg(n);
            assert_eq!(t.num_terms(), 1);
            assert!(matches!(t.weight(), Weight::Homogeneous(_)));
        }
    }

    #[test]
    fn matrix_algebra_basics() {
        let pres = PresId::Isometry;
        let id2 = FibreMatrix::identity(pres, 2);
        assert!(id2.is_idempotent());
        assert!(id2.is_self_adjoint());
        let sum = id2.direct_sum(&FibreMatrix::identity(pres, 1));
        assert_eq!(sum.rows(), 3);
        assert!(sum.is_idempotent());
    }

    #[test]
    fn json_shape() {
        let x = embed_iota(&a()).unwrap();
        let v = x.to_json();
        assert_eq!(v["components"][0]["N"], 1);
        assert_eq!(v["components"][0]["t"], "z'");
        assert_eq!(v["components"][0]["alpha"], "1");
    }
}
