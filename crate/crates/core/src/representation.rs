//! Matrix representations of finite groups over ℚ(ζ_n).

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::action::FiniteGroup;
use crate::algebra::{parse_rational, Cyclo, ScalarMatrix};
use crate::error::{Error, Result};

/// A homomorphism `G → GL_d(ℚ(ζ_n))`, stored as one matrix per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    group: Arc<FiniteGroup>,
    order: u32,
    dim: usize,
    matrices: Vec<ScalarMatrix>,
}

/// A matrix entry in JSON: an integer, a rational string such as `"-1/2"`,
/// or a full cyclotomic element `{"order": n, "coeffs": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryDoc {
    Int(i64),
    Rational(String),
    Cyclo(Cyclo),
}

impl EntryDoc {
    pub fn to_cyclo(&self, order: u32) -> Result<Cyclo> {
        Ok(match self {
            EntryDoc::Int(i) => Cyclo::from_int(order, *i),
            EntryDoc::Rational(s) => Cyclo::from_rational(order, parse_rational(s)?),
            EntryDoc::Cyclo(c) => c.embed(order)?,
        })
    }

    pub fn from_cyclo(c: &Cyclo) -> Self {
        match c.as_rational() {
            Some(r) if r.is_integer() => match i64::try_from(r.to_integer()) {
                Ok(i) => EntryDoc::Int(i),
                Err(_) => EntryDoc::Rational(r.to_string()),
            },
            Some(r) => EntryDoc::Rational(r.to_string()),
            None => EntryDoc::Cyclo(c.clone()),
        }
    }
}

/// Representation JSON: `{"order": n, "dim": d, "generators": {"g": [[..]]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationDoc {
    pub order: u32,
    pub dim: usize,
    pub generators: BTreeMap<String, Vec<Vec<EntryDoc>>>,
}

impl Representation {
    fn from_matrices(group: Arc<FiniteGroup>, order: u32, dim: usize, matrices: Vec<ScalarMatrix>) -> Self {
        Representation {
            group,
            order,
            dim,
            matrices,
        }
    }

    /// Every element acts as `[1]`.
    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        let order = group.exponent() as u32;
        let matrices = vec![ScalarMatrix::identity(order, 1); group.order()];
        Self::from_matrices(group, order, 1, matrices)
    }

    /// For a cyclic group of order `m` with generator `c`: `c^j ↦ [ζ_m^{jk}]`.
    pub fn cyclic_character(group: Arc<FiniteGroup>, k: i64) -> Result<Self> {
        let c = group.cyclic_generator().ok_or(Error::NotCyclic)?;
        let m = group.order();
        let order = m as u32;
        let mut matrices = vec![ScalarMatrix::identity(order, 1); m];
        let mut x = group.identity();
        for j in 0..m {
            let mut one = ScalarMatrix::zeros(order, 1, 1);
            one.set(0, 0, Cyclo::zeta_pow(order, j as i64 * k));
            matrices[x] = one;
            x = group.mul(x, c);
        }
        Ok(Self::from_matrices(group, order, 1, matrices))
    }

    /// Right regular representation: `ρ(g)[i][j] = 1` iff `eᵢ·g = eⱼ`.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let order = group.exponent() as u32;
        let matrices = (0..n)
            .map(|g| {
                let mut m = ScalarMatrix::zeros(order, n, n);
                for i in 0..n {
                    m.set(i, group.mul(i, g), Cyclo::one(order));
                }
                m
            })
            .collect();
        Self::from_matrices(group, order, n, matrices)
    }

    /// Block-diagonal sum over the lcm of the two coefficient fields.
    pub fn direct_sum(&self, other: &Representation) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let order = num_integer::lcm(self.order, other.order);
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| a.embed(order)?.block_diag(&b.embed(order)?))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self::from_matrices(
            self.group.clone(),
            order,
            self.dim + other.dim,
            matrices,
        ))
    }

    /// Loads generator images and extends them multiplicatively, then checks
    /// the homomorphism property on the whole table.
    pub fn from_doc(group: Arc<FiniteGroup>, doc: &RepresentationDoc) -> Result<Self> {
        if doc.order == 0 || doc.dim == 0 {
            return Err(Error::InvalidRepresentation("order and dim must be positive".into()));
        }
        let mut gens = Vec::new();
        for (name, rows) in &doc.generators {
            let g = group
                .index_of(name)
                .ok_or_else(|| Error::UnknownId(name.clone()))?;
            if rows.len() != doc.dim || rows.iter().any(|r| r.len() != doc.dim) {
                return Err(Error::InvalidRepresentation(format!(
                    "matrix for {name} is not {0}x{0}",
                    doc.dim
                )));
            }
            let cells = rows
                .iter()
                .map(|r| r.iter().map(|e| e.to_cyclo(doc.order)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            gens.push((g, ScalarMatrix::from_rows(doc.order, cells)?));
        }
        Self::from_generator_images(group, doc.order, doc.dim, &gens)
    }

    pub fn from_json(group: Arc<FiniteGroup>, s: &str) -> Result<Self> {
        Self::from_doc(group, &serde_json::from_str(s)?)
    }

    pub fn from_generator_images(
        group: Arc<FiniteGroup>,
        order: u32,
        dim: usize,
        gens: &[(usize, ScalarMatrix)],
    ) -> Result<Self> {
        let n = group.order();
        let mut matrices: Vec<Option<ScalarMatrix>> = vec![None; n];
        matrices[group.identity()] = Some(ScalarMatrix::identity(order, dim));
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (s, m) in gens {
                let sx = group.mul(*s, x);
                if matrices[sx].is_none() {
                    matrices[sx] = Some(m.mul(matrices[x].as_ref().unwrap())?);
                    queue.push_back(sx);
                }
            }
        }
        let matrices = matrices
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| {
                Error::InvalidRepresentation("generators do not generate the group".into())
            })?;
        let rep = Self::from_matrices(group, order, dim, matrices);
        rep.check_homomorphism()?;
        Ok(rep)
    }

    fn check_homomorphism(&self) -> Result<()> {
        let g = &self.group;
        if !self.matrices[g.identity()].is_identity() {
            return Err(Error::InvalidRepresentation("identity is not sent to I".into()));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                if self.matrices[a].mul(&self.matrices[b])? != self.matrices[g.mul(a, b)] {
                    return Err(Error::InvalidRepresentation(format!(
                        "ρ({})ρ({}) ≠ ρ({})",
                        g.name(a),
                        g.name(b),
                        g.name(g.mul(a, b))
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_doc(&self) -> RepresentationDoc {
        let generators = self
            .group
            .generators()
            .iter()
            .map(|&g| {
                let rows = self.matrices[g]
                    .to_rows()
                    .iter()
                    .map(|r| r.iter().map(EntryDoc::from_cyclo).collect())
                    .collect();
                (self.group.name(g).to_string(), rows)
            })
            .collect();
        RepresentationDoc {
            order: self.order,
            dim: self.dim,
            generators,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &ScalarMatrix {
        &self.matrices[g]
    }

    pub fn character(&self, g: usize) -> Cyclo {
        self.matrices[g].trace().expect("representation matrices are square")
    }

    /// Re-expresses the matrices over a larger cyclotomic field.
    pub fn embed(&self, order: u32) -> Result<Self> {
        let matrices = self
            .matrices
            .iter()
            .map(|m| m.embed(order))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self::from_matrices(self.group.clone(), order, self.dim, matrices))
    }

    /// The representation `g ↦ P ρ(g) P⁻¹` for an invertible `P`.
    pub fn conjugate_by(&self, p: &ScalarMatrix) -> Result<Self> {
        let order = num_integer::lcm(self.order, p.order());
        let p = p.embed(order)?;
        let inv = p
            .inverse()?
            .ok_or_else(|| Error::InvalidRepresentation("conjugating matrix is singular".into()))?;
        let matrices = self
            .matrices
            .iter()
            .map(|m| p.mul(&m.embed(order)?)?.mul(&inv))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self::from_matrices(self.group.clone(), order, self.dim, matrices))
    }
}

/// Checks the necessary conditions for a complete set of inequivalent
/// irreducibles: `Σ d² = |G|` and pairwise distinct characters.
pub fn validate_irreps(reps: &[Representation]) -> Result<()> {
    let first = reps
        .first()
        .ok_or_else(|| Error::IncompleteIrreps("empty list".into()))?;
    if reps.iter().any(|r| r.group != first.group) {
        return Err(Error::GroupMismatch);
    }
    let total: usize = reps.iter().map(|r| r.dim * r.dim).sum();
    if total != first.group.order() {
        return Err(Error::IncompleteIrreps(format!(
            "sum of squared dimensions is {total}, group order is {}",
            first.group.order()
        )));
    }
    let order = reps.iter().fold(1, |acc, r| num_integer::lcm(acc, r.order));
    let chars: Vec<Vec<Cyclo>> = reps
        .iter()
        .map(|r| {
            (0..first.group.order())
                .map(|g| r.character(g).embed(order))
                .collect::<std::result::Result<Vec<_>, _>>()
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    for i in 0..chars.len() {
        for j in i + 1..chars.len() {
            if chars[i] == chars[j] {
                return Err(Error::IncompleteIrreps(format!(
                    "representations {i} and {j} have the same character"
                )));
            }
        }
    }
    Ok(())
}
