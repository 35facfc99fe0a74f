use std::fmt;

use crate::error::{Error, Result};

/// A set of right-hand-side terms: gravity (`lg`), Coriolis (`lc`) and
/// nonlinear (`n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct TermGroup {
    pub lg: bool,
    pub lc: bool,
    pub n: bool,
}

impl TermGroup {
    pub const NONE: TermGroup = TermGroup::new(false, false, false);
    pub const LG: TermGroup = TermGroup::new(true, false, false);
    pub const LC: TermGroup = TermGroup::new(false, true, false);
    pub const L: TermGroup = TermGroup::new(true, true, false);
    pub const N: TermGroup = TermGroup::new(false, false, true);
    pub const LC_N: TermGroup = TermGroup::new(false, true, true);
    pub const LN: TermGroup = TermGroup::new(true, true, true);

    pub const fn new(lg: bool, lc: bool, n: bool) -> Self {
        TermGroup { lg, lc, n }
    }

    pub fn union(self, other: TermGroup) -> TermGroup {
        TermGroup::new(self.lg || other.lg, self.lc || other.lc, self.n || other.n)
    }

    pub fn overlaps(self, other: TermGroup) -> bool {
        (self.lg && other.lg) || (self.lc && other.lc) || (self.n && other.n)
    }

    pub fn is_empty(self) -> bool {
        self == TermGroup::NONE
    }

    pub fn is_linear(self) -> bool {
        !self.n
    }

    /// Token of a single group identifier: `lg`, `lc`, `l`, `n`, `ln`.
    pub fn from_token(token: &str) -> Option<TermGroup> {
        Some(match token {
            "lg" => TermGroup::LG,
            "lc" => TermGroup::LC,
            "l" => TermGroup::L,
            "n" => TermGroup::N,
            "ln" => TermGroup::LN,
            _ => return None,
        })
    }

    /// Canonical identifier tokens, e.g. `["lc", "n"]`.
    pub fn tokens(self) -> Vec<&'static str> {
        match (self.lg, self.lc, self.n) {
            (true, true, true) => vec!["ln"],
            (true, true, false) => vec!["l"],
            (true, false, true) => vec!["lg", "n"],
            (true, false, false) => vec!["lg"],
            (false, true, true) => vec!["lc", "n"],
            (false, true, false) => vec!["lc"],
            (false, false, true) => vec!["n"],
            (false, false, false) => vec![],
        }
    }
}

impl fmt::Display for TermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tokens().join("_"))
    }
}

impl std::str::FromStr for TermGroup {
    type Err = Error;

    /// Parses `_`- or `+`-joined group tokens such as `lc_n` or `lc+n`.
    fn from_str(s: &str) -> Result<Self> {
        let mut g = TermGroup::NONE;
        for tok in s.split(['_', '+']) {
            let part = TermGroup::from_token(tok).ok_or_else(|| Error::Parse {
                id: s.to_string(),
                token: tok.to_string(),
                reason: "unknown term group".into(),
            })?;
            if g.overlaps(part) {
                return Err(Error::Parse {
                    id: s.to_string(),
                    token: tok.to_string(),
                    reason: "term listed twice".into(),
                });
            }
            g = g.union(part);
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!("lc_n".parse::<TermGroup>().unwrap(), TermGroup::LC_N);
        assert_eq!("lg+lc".parse::<TermGroup>().unwrap(), TermGroup::L);
        assert_eq!(TermGroup::LC_N.to_string(), "lc_n");
        assert_eq!(TermGroup::LN.to_string(), "ln");
        assert!("lx".parse::<TermGroup>().is_err());
        assert!("l_lg".parse::<TermGroup>().is_err());
    }
}
