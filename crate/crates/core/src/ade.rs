//! ADE types and their Dynkin diagrams.
//!
//! Node labels follow Bourbaki. `A_n` is the chain `1-2-...-n`. `D_n` is the
//! chain `1-...-(n-1)` with `n` attached to `n-2`. For `E_6` and `E_7` the chain
//! is `1-3-4-5-6(-7)` with `2` attached to `4`.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    E,
    D,
    A,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Component {
    pub family: Family,
    pub rank: usize,
}

impl Component {
    /// Edges between 1-based node labels.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        match self.family {
            Family::A => (1..n).map(|i| (i, i + 1)).collect(),
            Family::D => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i, i + 1)).collect();
                e.push((n - 2, n));
                e
            }
            Family::E => {
                let mut e = vec![(1, 3), (2, 4)];
                e.extend((3..n).map(|i| (i, i + 1)));
                e
            }
        }
    }

    /// Node order in which every node after the first is adjacent to an
    /// earlier one.
    pub fn connected_order(&self) -> Vec<usize> {
        match self.family {
            Family::E => {
                let mut o = vec![1, 3, 4, 2];
                o.extend(5..=self.rank);
                o
            }
            _ => (1..=self.rank).collect(),
        }
    }

    fn letter(&self) -> char {
        match self.family {
            Family::A => 'A',
            Family::D => 'D',
            Family::E => 'E',
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter(), self.rank)
    }
}

/// A root-system type as a sorted list of irreducible components.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdeType {
    components: Vec<Component>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdeParseError {
    #[error("malformed ADE type {0:?}")]
    Malformed(String),
    #[error("component {0} does not exist")]
    BadRank(String),
}

impl AdeType {
    /// Sorted E before D before A, then by decreasing rank.
    pub fn new(mut components: Vec<Component>) -> Self {
        components.sort_by(|a, b| a.family.cmp(&b.family).then(b.rank.cmp(&a.rank)));
        AdeType { components }
    }

    pub fn smooth() -> Self {
        AdeType { components: vec![] }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }

    pub fn is_smooth(&self) -> bool {
        self.components.is_empty()
    }

    /// Accepts forms like `A1`, `3A1`, `A3+2A1`, `D4+3A1`, `smooth`.
    pub fn parse(s: &str) -> Result<Self, AdeParseError> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("smooth") || s == "-" {
            return Ok(AdeType::smooth());
        }
        let mut comps = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let digits: String = part.chars().take_while(|c| c.is_ascii_digit()).collect();
            let mult: usize = if digits.is_empty() {
                1
            } else {
                digits.parse().map_err(|_| AdeParseError::Malformed(s.into()))?
            };
            let rest = &part[digits.len()..];
            let mut chars = rest.chars();
            let family = match chars.next() {
                Some('A') | Some('a') => Family::A,
                Some('D') | Some('d') => Family::D,
                Some('E') | Some('e') => Family::E,
                _ => return Err(AdeParseError::Malformed(s.into())),
            };
            let rank_str = chars.as_str().trim_start_matches('_');
            let rank: usize = rank_str
                .parse()
                .map_err(|_| AdeParseError::Malformed(s.into()))?;
            let ok = match family {
                Family::A => rank >= 1,
                Family::D => rank >= 4,
                Family::E => (6..=8).contains(&rank),
            };
            if !ok || mult == 0 {
                return Err(AdeParseError::BadRank(part.into()));
            }
            comps.extend(std::iter::repeat_n(Component { family, rank }, mult));
        }
        Ok(AdeType::new(comps))
    }

    /// Global node list as `(component index, 1-based label)` in search order.
    pub fn nodes(&self) -> Vec<(usize, usize)> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| c.connected_order().into_iter().map(move |k| (ci, k)))
            .collect()
    }

    /// Whether two global nodes are joined in the Dynkin diagram.
    pub fn adjacent(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        a.0 == b.0
            && self.components[a.0]
                .edges()
                .iter()
                .any(|&(x, y)| (x, y) == (a.1, b.1) || (y, x) == (a.1, b.1))
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "smooth");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.components.len() {
            let c = self.components[i];
            let mut j = i;
            while j < self.components.len() && self.components[j] == c {
                j += 1;
            }
            let m = j - i;
            parts.push(if m == 1 { c.to_string() } else { format!("{m}{c}") });
            i = j;
        }
        write!(f, "{}", parts.join("+"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_are_canonical() {
        for s in ["A1", "3A1", "A2+A1", "A3+2A1", "D4+3A1", "2A3+A1", "A5+A2", "E7", "smooth"] {
            assert_eq!(AdeType::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(AdeType::parse("A1+A3+A1").unwrap().to_string(), "A3+2A1");
        assert_eq!(AdeType::parse("2A3+A1").unwrap().rank(), 7);
        assert!(AdeType::parse("D3").is_err());
        assert!(AdeType::parse("Q2").is_err());
    }

    #[test]
    fn diagram_edges() {
        let e7 = Component { family: Family::E, rank: 7 };
        assert_eq!(e7.edges().len(), 6);
        let d4 = Component { family: Family::D, rank: 4 };
        assert_eq!(d4.edges(), vec![(1, 2), (2, 3), (2, 4)]);
    }
}
