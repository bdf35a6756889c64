//! Finite-type algebras `B = A[Y]/I` and morphisms `B -> k'[[x]]` given by
//! truncated series.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::poly::{Field, MonomialOrder, PolyRing, Polynomial};
use crate::series::{self, TruncatedSeries, Valuation};

/// `k[x][Y]/I`, presented in the ring with the base variables first.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraPresentation {
    ring: Arc<PolyRing>,
    nbase: usize,
    ideal: Ideal,
}

impl AlgebraPresentation {
    pub fn new(ring: &Arc<PolyRing>, nbase: usize, gens: Vec<Polynomial>) -> Result<Self> {
        if nbase > ring.nvars() {
            return Err(Error::Shape("more base variables than ring variables".into()));
        }
        Ok(AlgebraPresentation {
            ring: ring.clone(),
            nbase,
            ideal: Ideal::new(ring, gens)?,
        })
    }

    /// Builds the ring `field[base, algebra]` (degree reverse lexicographic).
    pub fn ring_for(base: &[&str], algebra: &[&str], field: Field) -> Result<Arc<PolyRing>> {
        let vars: Vec<&str> = base.iter().chain(algebra).copied().collect();
        PolyRing::new(&vars, field, MonomialOrder::DegRevLex)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn gens(&self) -> &[Polynomial] {
        self.ideal.gens()
    }

    pub fn nbase(&self) -> usize {
        self.nbase
    }

    /// Number of algebra variables `n`.
    pub fn nalg(&self) -> usize {
        self.ring.nvars() - self.nbase
    }

    pub fn base_vars(&self) -> &[String] {
        &self.ring.vars()[..self.nbase]
    }

    pub fn algebra_vars(&self) -> &[String] {
        &self.ring.vars()[self.nbase..]
    }

    /// Ring index of the `j`-th algebra variable.
    pub fn alg_index(&self, j: usize) -> usize {
        self.nbase + j
    }

    pub fn with_gens(&self, gens: Vec<Polynomial>) -> Result<Self> {
        AlgebraPresentation::new(&self.ring, self.nbase, gens)
    }
}

/// A morphism `B -> k'[[x]]` known through truncations of the images of the
/// algebra variables.
#[derive(Clone, Debug, PartialEq)]
pub struct CompletionMorphism {
    ring: Arc<PolyRing>,
    images: Vec<TruncatedSeries>,
}

impl CompletionMorphism {
    pub fn new(ring: &Arc<PolyRing>, images: Vec<TruncatedSeries>) -> Result<Self> {
        if ring.nvars() != 1 {
            return Err(Error::Structural("morphism targets must be univariate series rings".into()));
        }
        for s in &images {
            if !s.ring().same(ring) {
                return Err(Error::Structural("morphism images live in different rings".into()));
            }
        }
        Ok(CompletionMorphism {
            ring: ring.clone(),
            images,
        })
    }

    /// Target series ring `k'[x]`.
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn target_field(&self) -> &Field {
        self.ring.field()
    }

    pub fn images(&self) -> &[TruncatedSeries] {
        &self.images
    }

    /// Common precision (the minimum over the images).
    pub fn precision(&self) -> u32 {
        self.images.iter().map(|s| s.precision()).min().unwrap_or(u32::MAX)
    }

    pub fn variable(&self) -> &str {
        &self.ring.vars()[0]
    }

    fn check_algebra(&self, b: &AlgebraPresentation) -> Result<()> {
        if b.nbase() != 1 || b.base_vars()[0] != self.variable() {
            return Err(Error::Structural(format!(
                "the algebra must have the single base variable `{}`",
                self.variable()
            )));
        }
        if b.nalg() != self.images.len() {
            return Err(Error::Shape(format!(
                "{} algebra variables but {} images",
                b.nalg(),
                self.images.len()
            )));
        }
        if !self.target_field().contains(b.field()) {
            return Err(Error::Structural(format!(
                "target field {} does not contain {}",
                self.target_field(),
                b.field()
            )));
        }
        Ok(())
    }

    /// Image `v(f)` of a polynomial of `B`'s ring.
    pub fn evaluate(&self, b: &AlgebraPresentation, f: &Polynomial) -> Result<TruncatedSeries> {
        self.check_algebra(b)?;
        let prec = self.precision();
        let mut imgs = vec![TruncatedSeries::new(Polynomial::var(&self.ring, 0), prec)];
        imgs.extend(self.images.iter().cloned());
        series::evaluate(f, &imgs)
    }

    /// Checks that every generator of `I` vanishes to the morphism precision.
    pub fn check_morphism(&self, b: &AlgebraPresentation) -> Result<()> {
        for g in b.gens() {
            let v = self.evaluate(b, g)?;
            if let Valuation::Finite(o) = v.order() {
                return Err(Error::Domain(format!(
                    "generator {g} does not vanish at the given series (order {o} < precision {})",
                    self.precision()
                )));
            }
        }
        Ok(())
    }
}
