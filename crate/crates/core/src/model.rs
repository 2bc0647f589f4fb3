//! Surface models: Picard lattice with intersection form, curve catalog,
//! cone generators and flags. Models are immutable after load and every
//! operation on them is pure.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rat::Rat;

/// Coefficient vector over the Picard-lattice basis of a model.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(pub Vec<Rat>);

impl DivisorClass {
    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![Rat::zero(); rank])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        DivisorClass(coeffs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rat::is_integer)
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        DivisorClass(self.0.iter().map(|c| c * factor).collect())
    }

    /// Parses "1,1" / "1/2,-3" style coefficient lists.
    pub fn parse_csv(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(Rat::parse)
            .collect::<Result<Vec<_>>>()?;
        Ok(DivisorClass(coeffs))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.len(), rhs.len());
        DivisorClass(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.len(), rhs.len());
        DivisorClass(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

/// An irreducible catalog curve: name, integral class, and whether its
/// self-intersection is negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRecord {
    pub id: String,
    pub class: DivisorClass,
    pub negative: bool,
}

/// A flag (C, x): host curve C plus the local intersection multiplicities
/// (Gamma . C)_x of each other catalog curve at the point x. A very general
/// point carries no incidences at all.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flag {
    pub id: String,
    pub curve: String,
    #[serde(default)]
    pub local_mults: BTreeMap<String, u64>,
    #[serde(default)]
    pub very_general: bool,
}

impl Flag {
    pub fn local_mult(&self, curve_id: &str) -> u64 {
        self.local_mults.get(curve_id).copied().unwrap_or(0)
    }
}

#[derive(Deserialize)]
struct CurveDoc {
    id: String,
    class: Vec<Rat>,
    #[serde(default)]
    negative: Option<bool>,
}

#[derive(Deserialize)]
struct ModelDoc {
    rank: usize,
    gram: Vec<Vec<i64>>,
    #[serde(default)]
    curves: Vec<CurveDoc>,
    nef_gens: Vec<Vec<Rat>>,
    eff_gens: Vec<Vec<Rat>>,
    #[serde(default)]
    flags: Vec<Flag>,
}

/// A polyhedrally-modeled smooth projective surface: lattice rank,
/// intersection Gram matrix, curve catalog, nef/effective cone generators
/// and a suite of flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub curves: Vec<CurveRecord>,
    pub nef_gens: Vec<DivisorClass>,
    pub eff_gens: Vec<DivisorClass>,
    pub flags: Vec<Flag>,
}

/// Parses and validates a model document.
pub fn load_model(document: &str) -> Result<SurfaceModel> {
    let doc: ModelDoc =
        serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    SurfaceModel::from_doc(doc)
}

impl SurfaceModel {
    fn from_doc(doc: ModelDoc) -> Result<Self> {
        let mut curves = Vec::with_capacity(doc.curves.len());
        for c in doc.curves {
            let class = DivisorClass(c.class);
            // negative flag is derived from the Gram matrix; a stated value
            // must agree
            let declared = c.negative;
            curves.push((c.id, class, declared));
        }
        let mut model = SurfaceModel {
            rank: doc.rank,
            gram: doc.gram,
            curves: Vec::new(),
            nef_gens: doc.nef_gens.into_iter().map(DivisorClass).collect(),
            eff_gens: doc.eff_gens.into_iter().map(DivisorClass).collect(),
            flags: doc.flags,
        };
        for (id, class, declared) in curves {
            if class.len() != model.rank {
                return Err(Error::Validation(format!(
                    "curve `{id}` class has {} coefficients, rank is {}",
                    class.len(),
                    model.rank
                )));
            }
            let self_int = pairing(&model.gram, &class, &class);
            let negative = self_int.is_negative();
            if let Some(decl) = declared {
                if decl != negative {
                    return Err(Error::Validation(format!(
                        "curve `{id}` declared negative={decl} but self-intersection is {self_int}"
                    )));
                }
            }
            model.curves.push(CurveRecord {
                id,
                class,
                negative,
            });
        }
        model.validate()?;
        Ok(model)
    }

    /// Checks every model invariant; loading validates automatically, and
    /// re-validating a loaded model is a no-op that raises nothing.
    pub fn validate(&self) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::Validation("rank must be positive".into()));
        }
        if self.gram.len() != self.rank || self.gram.iter().any(|r| r.len() != self.rank) {
            return Err(Error::Validation(format!(
                "gram matrix is not {0}x{0}",
                self.rank
            )));
        }
        for i in 0..self.rank {
            for j in 0..self.rank {
                if self.gram[i][j] != self.gram[j][i] {
                    return Err(Error::Validation("gram not symmetric".into()));
                }
            }
        }
        let gram_rat: Vec<Vec<Rat>> = self
            .gram
            .iter()
            .map(|row| row.iter().map(|&x| Rat::from_int(x)).collect())
            .collect();
        linalg::check_hodge_signature(&gram_rat)?;

        let mut seen = std::collections::BTreeSet::new();
        for c in &self.curves {
            if !seen.insert(c.id.as_str()) {
                return Err(Error::Validation(format!("duplicate curve id `{}`", c.id)));
            }
            if c.class.len() != self.rank {
                return Err(Error::Validation(format!(
                    "curve `{}` class length mismatch",
                    c.id
                )));
            }
            if !c.class.is_integral() {
                return Err(Error::Validation(format!(
                    "curve `{}` class is not integral",
                    c.id
                )));
            }
            if c.class.is_zero() {
                return Err(Error::Validation(format!("curve `{}` class is zero", c.id)));
            }
            let self_int = self.intersect(&c.class, &c.class)?;
            if self_int.is_negative() != c.negative {
                return Err(Error::Validation(format!(
                    "curve `{}` negativity flag disagrees with self-intersection {self_int}",
                    c.id
                )));
            }
        }

        for (k, g) in self.nef_gens.iter().enumerate() {
            if g.len() != self.rank {
                return Err(Error::Validation(format!("nef generator {k} length mismatch")));
            }
            let sq = self.intersect(g, g)?;
            if sq.is_negative() {
                return Err(Error::Validation(format!(
                    "nef generator {g} has negative self-intersection {sq}"
                )));
            }
        }
        for (k, e) in self.eff_gens.iter().enumerate() {
            if e.len() != self.rank {
                return Err(Error::Validation(format!("eff generator {k} length mismatch")));
            }
        }
        // cross-duality of the cone data
        for n in &self.nef_gens {
            for e in &self.eff_gens {
                let p = self.intersect(n, e)?;
                if p.is_negative() {
                    return Err(Error::Validation(format!(
                        "nef generator {n} pairs negatively ({p}) with eff generator {e}"
                    )));
                }
            }
        }
        // a self-negative effective generator is an actual curve and must be
        // cataloged, otherwise decompositions cannot see it
        for e in &self.eff_gens {
            let sq = self.intersect(e, e)?;
            if sq.is_negative() && !self.curves.iter().any(|c| proportional(&c.class, e)) {
                return Err(Error::Validation(format!(
                    "eff generator {e} has negative self-intersection but no catalog curve matches it"
                )));
            }
        }

        let mut flag_ids = std::collections::BTreeSet::new();
        for flag in &self.flags {
            if !flag_ids.insert(flag.id.as_str()) {
                return Err(Error::Validation(format!("duplicate flag id `{}`", flag.id)));
            }
            let host = self.curve(&flag.curve)?;
            for (gamma_id, &mult) in &flag.local_mults {
                if gamma_id == &flag.curve {
                    return Err(Error::Validation(format!(
                        "flag `{}` lists its own host curve in local_mults",
                        flag.id
                    )));
                }
                let gamma = self.curve(gamma_id)?;
                let global = self.intersect(&gamma.class, &host.class)?;
                if Rat::from_int(mult as i64) > global {
                    return Err(Error::Validation(format!(
                        "flag `{}`: local_mults[{gamma_id}] = {mult} exceeds {gamma_id}.{} = {global}",
                        flag.id, flag.curve
                    )));
                }
            }
            if flag.very_general && flag.local_mults.values().any(|&m| m > 0) {
                return Err(Error::Validation(format!(
                    "flag `{}` is very general but has nonzero local multiplicities",
                    flag.id
                )));
            }
        }
        Ok(())
    }

    /// Exact intersection number a . b through the Gram matrix.
    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rat> {
        if a.len() != self.rank {
            return Err(Error::DimensionMismatch {
                found: a.len(),
                rank: self.rank,
            });
        }
        if b.len() != self.rank {
            return Err(Error::DimensionMismatch {
                found: b.len(),
                rank: self.rank,
            });
        }
        Ok(pairing(&self.gram, a, b))
    }

    pub fn curve(&self, id: &str) -> Result<&CurveRecord> {
        self.curves
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::UnknownCurve(id.to_string()))
    }

    pub fn flag(&self, id: &str) -> Result<&Flag> {
        self.flags
            .iter()
            .find(|f| f.id == id)
            .ok_or_else(|| Error::UnknownFlag(id.to_string()))
    }

    /// Decides whether the flag's point lies on the given catalog curve:
    /// true for the host itself and for any curve with positive local
    /// multiplicity.
    pub fn flag_incidence(&self, flag: &Flag, curve_id: &str) -> Result<bool> {
        self.curve(curve_id)?;
        Ok(curve_id == flag.curve || flag.local_mult(curve_id) > 0)
    }

    /// Catalog curves with negative self-intersection, the only candidates
    /// for Zariski supports.
    pub fn negative_curves(&self) -> impl Iterator<Item = &CurveRecord> {
        self.curves.iter().filter(|c| c.negative)
    }
}

fn pairing(gram: &[Vec<i64>], a: &DivisorClass, b: &DivisorClass) -> Rat {
    let mut total = Rat::zero();
    for (i, ai) in a.0.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.0.iter().enumerate() {
            if bj.is_zero() || gram[i][j] == 0 {
                continue;
            }
            total += &(&(ai * bj) * &Rat::from_int(gram[i][j]));
        }
    }
    total
}

/// True when `a = q b` for some positive rational q.
fn proportional(a: &DivisorClass, b: &DivisorClass) -> bool {
    let pivot = match b.0.iter().position(|c| !c.is_zero()) {
        Some(p) => p,
        None => return a.is_zero(),
    };
    if a.0[pivot].is_zero() {
        return false;
    }
    let q = &a.0[pivot] / &b.0[pivot];
    if !q.is_positive() {
        return false;
    }
    a.0.iter().zip(&b.0).all(|(ai, bi)| *ai == bi * &q)
}
