//! Indexed families of matroids on a common ground set.

use std::fmt;

use crate::error::{input, Result};
use crate::matroid::Matroid;
use crate::set::{Element, ElementSet};

/// Which extension step is responsible for a member during synthesis.
///
/// Every finite matroid is both finitary and cofinitary, so the tag only
/// selects a code path; it never changes whether a partitioning exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Finitary,
    Cofinitary,
}

impl Role {
    pub fn flipped(self) -> Role {
        match self {
            Role::Finitary => Role::Cofinitary,
            Role::Cofinitary => Role::Finitary,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Finitary => "finitary",
            Role::Cofinitary => "cofinitary",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct Member {
    pub matroid: Matroid,
    pub role: Role,
}

impl Member {
    pub fn new(matroid: Matroid, role: Role) -> Member {
        Member { matroid, role }
    }
}

/// `(M_i : i ∈ K)` on a common ground set `E`.
#[derive(Debug, Clone)]
pub struct MatroidFamily {
    ground: ElementSet,
    members: Vec<Member>,
}

impl MatroidFamily {
    pub fn new(ground: ElementSet, members: Vec<Member>) -> Result<MatroidFamily> {
        for (i, m) in members.iter().enumerate() {
            if m.matroid.ground() != ground {
                return input(format!(
                    "member {i} has ground {:?}, expected {:?}",
                    m.matroid.ground(),
                    ground
                ));
            }
        }
        Ok(MatroidFamily { ground, members })
    }

    /// Family with every member tagged finitary.
    pub fn of(ground: ElementSet, matroids: Vec<Matroid>) -> Result<MatroidFamily> {
        Self::new(
            ground,
            matroids
                .into_iter()
                .map(|m| Member::new(m, Role::Finitary))
                .collect(),
        )
    }

    pub fn ground(&self) -> ElementSet {
        self.ground
    }

    /// Number of members, `|K|`.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn matroid(&self, i: usize) -> &Matroid {
        &self.members[i].matroid
    }

    pub fn role(&self, i: usize) -> Role {
        self.members[i].role
    }

    pub fn matroids(&self) -> impl Iterator<Item = &Matroid> {
        self.members.iter().map(|m| &m.matroid)
    }

    pub fn check_subset(&self, x: ElementSet) -> Result<()> {
        match (x - self.ground).first() {
            None => Ok(()),
            Some(e) => input(format!("element {e} is not in the ground set")),
        }
    }

    /// Applies `f` to every member, keeping roles, on the new ground `ground`.
    pub fn map<F>(&self, ground: ElementSet, mut f: F) -> Result<MatroidFamily>
    where
        F: FnMut(usize, &Matroid) -> Result<Matroid>,
    {
        let members = self
            .members
            .iter()
            .enumerate()
            .map(|(i, m)| Ok(Member::new(f(i, &m.matroid)?, m.role)))
            .collect::<Result<Vec<_>>>()?;
        MatroidFamily::new(ground, members)
    }

    /// `M ↾ X`.
    pub fn restrict(&self, x: ElementSet) -> Result<MatroidFamily> {
        self.check_subset(x)?;
        self.map(x, |_, m| m.restrict(x))
    }

    /// `M / X`, on `E \ X`.
    pub fn contract(&self, x: ElementSet) -> Result<MatroidFamily> {
        self.check_subset(x)?;
        self.map(self.ground - x, |_, m| m.contract(x))
    }

    /// `M . W`, the contraction of `E \ W`, on `W`.
    pub fn contract_onto(&self, w: ElementSet) -> Result<MatroidFamily> {
        self.check_subset(w)?;
        self.map(w, |_, m| m.contract_onto(w))
    }

    /// Declares `e` a loop in every member except `keep`.
    pub fn loop_except(&self, e: Element, keep: usize) -> Result<MatroidFamily> {
        self.check_subset(ElementSet::singleton(e))?;
        self.map(self.ground, |i, m| {
            if i == keep {
                Ok(m.clone())
            } else {
                m.declare_loops(ElementSet::singleton(e))
            }
        })
    }

    /// `Σ_i rank_{M_i}(X)`.
    pub fn rank_sum(&self, x: ElementSet) -> usize {
        self.matroids().map(|m| m.rank(x)).sum()
    }

    /// Same members with every role replaced.
    pub fn with_roles(&self, roles: &[Role]) -> Result<MatroidFamily> {
        if roles.len() != self.len() {
            return input(format!(
                "{} roles given for {} members",
                roles.len(),
                self.len()
            ));
        }
        let members = self
            .members
            .iter()
            .zip(roles)
            .map(|(m, &r)| Member::new(m.matroid.clone(), r))
            .collect();
        MatroidFamily::new(self.ground, members)
    }

    /// Family of duals with flipped roles.
    pub fn dual(&self) -> MatroidFamily {
        let members = self
            .members
            .iter()
            .map(|m| Member::new(m.matroid.dual(), m.role.flipped()))
            .collect();
        MatroidFamily {
            ground: self.ground,
            members,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_mismatched_grounds() {
        let a = Matroid::free(set![0, 1]);
        let b = Matroid::free(set![0]);
        assert!(MatroidFamily::of(set![0, 1], vec![a, b]).is_err());
    }

    #[test]
    fn loop_except_keeps_one_member() {
        let f = MatroidFamily::of(set![0, 1], vec![Matroid::free(set![0, 1]); 3]).unwrap();
        let g = f.loop_except(1, 2).unwrap();
        assert!(g.matroid(0).is_loop(1));
        assert!(g.matroid(1).is_loop(1));
        assert!(!g.matroid(2).is_loop(1));
        assert!(!g.matroid(0).is_loop(0));
    }
}
