//! Genus-2 surface groups and enumeration of group elements.

mod ball;
mod bolza;
mod fenchel_nielsen;

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use ball::{enumerate_ball, enumerate_ball_with, BallElement, BallOptions, GroupBall};
pub use bolza::bolza_surface;
pub use fenchel_nielsen::{surface_from_fn, FNCoords};

use crate::dirichlet::DirichletDomain;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hplane::{Isometry, IsometryKind, UhpPoint};
use crate::tol;

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: u8, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Letter {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    /// All `2n` letters over `n` generators, each generator followed by its inverse.
    pub fn all(n: u8) -> Vec<Letter> {
        (0..n).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "g{}^-1", self.generator + 1)
        } else {
            write!(f, "g{}", self.generator + 1)
        }
    }
}

/// A word in the generators, read left to right as a matrix product.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Concatenation followed by free reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn reduced(&self) -> Word {
        Word::identity().concat(self)
    }

    pub fn eval(&self, generators: &[Isometry]) -> Isometry {
        self.0.iter().fold(Isometry::IDENTITY, |acc, l| {
            let g = generators[l.generator as usize];
            acc * if l.inverse { g.inverse() } else { g }
        })
    }

    /// Cyclic rotation by `k` letters.
    pub fn rotate(&self, k: usize) -> Word {
        let n = self.0.len();
        if n == 0 {
            return self.clone();
        }
        let mut v = self.0.clone();
        v.rotate_left(k % n);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "id");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Where a surface came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    Bolza,
    FromFN(FNCoords),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Bolza => write!(f, "bolza"),
            Provenance::FromFN(c) => write!(f, "fn({c})"),
        }
    }
}

/// A closed genus-2 surface as the quotient of the plane by a Fuchsian group.
#[derive(Debug)]
pub struct SurfaceModel {
    genus: u64,
    generators: Vec<Isometry>,
    provenance: Provenance,
    relator_residual: f64,
    center: UhpPoint,
    gluing_curves: Vec<(Word, f64)>,
    domain: OnceLock<Result<DirichletDomain>>,
}

impl Clone for SurfaceModel {
    fn clone(&self) -> Self {
        let domain = OnceLock::new();
        if let Some(d) = self.domain.get() {
            let _ = domain.set(d.clone());
        }
        SurfaceModel {
            genus: self.genus,
            generators: self.generators.clone(),
            provenance: self.provenance.clone(),
            relator_residual: self.relator_residual,
            center: self.center,
            gluing_curves: self.gluing_curves.clone(),
            domain,
        }
    }
}

/// `[g1,g2][g3,g4]` for four generators.
pub fn genus2_relator(g: &[Isometry]) -> Isometry {
    let comm = |a: &Isometry, b: &Isometry| *a * *b * a.inverse() * b.inverse();
    comm(&g[0], &g[1]) * comm(&g[2], &g[3])
}

impl SurfaceModel {
    /// Validates a standard generating set and wraps it.
    ///
    /// `gluing_curves` lists words whose translation lengths are known in
    /// advance; they are recomputed from the generators.
    pub(crate) fn new(
        generators: Vec<Isometry>,
        provenance: Provenance,
        center: UhpPoint,
        gluing_words: Vec<Word>,
    ) -> Result<Self> {
        if generators.len() != 4 {
            return Err(Error::Construction(format!("expected 4 generators, got {}", generators.len())));
        }
        if generators.iter().any(|g| g.entries().iter().any(|e| !e.is_finite())) {
            return Err(Error::Construction("non-finite generator entries".into()));
        }
        let relator_residual = genus2_relator(&generators).deviation_from_identity();
        if !(relator_residual <= tol::RELATOR_TOL) {
            return Err(Error::Construction(format!(
                "relator residual {relator_residual:e} exceeds {:e}",
                tol::RELATOR_TOL
            )));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.classify().kind != IsometryKind::Hyperbolic {
                return Err(Error::Construction(format!("generator g{} is not hyperbolic", i + 1)));
            }
        }
        let gluing_curves = gluing_words
            .into_iter()
            .map(|w| {
                let l = w.eval(&generators).raw_translation_length();
                (w, l)
            })
            .collect();
        Ok(SurfaceModel {
            genus: 2,
            generators,
            provenance,
            relator_residual,
            center,
            gluing_curves,
            domain: OnceLock::new(),
        })
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.generators
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn relator_residual(&self) -> f64 {
        self.relator_residual
    }

    /// Default basepoint: the center of the polygon the surface was glued from.
    pub fn center(&self) -> UhpPoint {
        self.center
    }

    /// Distinguished curves (pants curves or none) with their translation lengths.
    pub fn gluing_curves(&self) -> &[(Word, f64)] {
        &self.gluing_curves
    }

    /// Dirichlet domain at [`SurfaceModel::center`], computed once.
    pub fn domain(&self) -> Result<&DirichletDomain> {
        self.domain
            .get_or_init(|| DirichletDomain::build(&self.generators, self.center, self.area(), Exec::default()))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Gauss–Bonnet area `4π(g − 1)`.
    pub fn area(&self) -> f64 {
        4.0 * std::f64::consts::PI * (self.genus as f64 - 1.0)
    }
}
