//! Coverings, packings and partitionings, with exact verification.

use std::fmt;

use crate::family::MatroidFamily;
use crate::set::{Element, ElementSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Parts independent, union is `E`.
    Covering,
    /// Parts pairwise disjoint and spanning.
    Packing,
    /// Parts are bases that partition `E`.
    Partitioning,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Covering => "covering",
            Mode::Packing => "packing",
            Mode::Partitioning => "partitioning",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "covering" => Some(Mode::Covering),
            "packing" => Some(Mode::Packing),
            "partitioning" => Some(Mode::Partitioning),
            _ => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A family `(A_i : i ∈ K)` of subsets of `E` in a given role.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub mode: Mode,
    pub parts: Vec<ElementSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WrongArity {
        expected: usize,
        found: usize,
    },
    OutsideGround {
        member: usize,
        elements: ElementSet,
    },
    NotIndependent {
        member: usize,
    },
    NotSpanning {
        member: usize,
    },
    Uncovered {
        element: Element,
    },
    Overlap {
        element: Element,
        members: (usize, usize),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongArity { expected, found } => {
                write!(f, "expected {expected} parts, found {found}")
            }
            Violation::OutsideGround { member, elements } => {
                write!(
                    f,
                    "part {member} contains elements outside the ground set: {elements:?}"
                )
            }
            Violation::NotIndependent { member } => write!(f, "part {member} is not independent"),
            Violation::NotSpanning { member } => write!(f, "part {member} is not spanning"),
            Violation::Uncovered { element } => write!(f, "element {element} is not covered"),
            Violation::Overlap { element, members } => {
                write!(
                    f,
                    "element {element} lies in parts {} and {}",
                    members.0, members.1
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Assignment {
    pub fn new(mode: Mode, parts: Vec<ElementSet>) -> Assignment {
        Assignment { mode, parts }
    }

    pub fn union(&self) -> ElementSet {
        self.parts.iter().fold(ElementSet::empty(), |a, &p| a | p)
    }

    pub fn with_mode(&self, mode: Mode) -> Assignment {
        Assignment {
            mode,
            parts: self.parts.clone(),
        }
    }

    /// Lists every violated condition of the assignment's mode.
    pub fn verify(&self, fam: &MatroidFamily) -> Report {
        let mut violations = Vec::new();
        if self.parts.len() != fam.len() {
            violations.push(Violation::WrongArity {
                expected: fam.len(),
                found: self.parts.len(),
            });
            return Report { violations };
        }
        let e = fam.ground();
        for (i, &p) in self.parts.iter().enumerate() {
            let outside = p - e;
            if !outside.is_empty() {
                violations.push(Violation::OutsideGround {
                    member: i,
                    elements: outside,
                });
            }
        }
        if !violations.is_empty() {
            return Report { violations };
        }
        let need_independent = matches!(self.mode, Mode::Covering | Mode::Partitioning);
        let need_spanning = matches!(self.mode, Mode::Packing | Mode::Partitioning);
        let need_disjoint = need_spanning;
        let need_cover = need_independent;
        for (i, &p) in self.parts.iter().enumerate() {
            let m = fam.matroid(i);
            if need_independent && !m.is_independent(p) {
                violations.push(Violation::NotIndependent { member: i });
            }
            if need_spanning && !m.is_spanning(p) {
                violations.push(Violation::NotSpanning { member: i });
            }
        }
        if need_cover {
            for x in e - self.union() {
                violations.push(Violation::Uncovered { element: x });
            }
        }
        if need_disjoint {
            for x in e {
                let owners: Vec<usize> = (0..self.parts.len())
                    .filter(|&i| self.parts[i].contains(x))
                    .collect();
                for w in owners.windows(2) {
                    violations.push(Violation::Overlap {
                        element: x,
                        members: (w[0], w[1]),
                    });
                }
            }
        }
        Report { violations }
    }

    pub fn is_valid(&self, fam: &MatroidFamily) -> bool {
        self.verify(fam).is_valid()
    }
}
