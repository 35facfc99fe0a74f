use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::swe::TermGroup;

/// Time-stepping method identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Explicit Runge–Kutta (order in [`TimeStepperSpec::order`]).
    Erk,
    /// Crank–Nicolson.
    Irk,
    /// Rational approximation of the exponential.
    Rexi,
    /// Exponential time differencing RK; hosts the nonlinear terms.
    Etdrk,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Erk => "erk",
            Method::Irk => "irk",
            Method::Rexi => "rexi",
            Method::Etdrk => "etdrk",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitVersion {
    /// `L^{Δt/2} N^{Δt} L^{Δt/2}`
    Ver0,
    /// `N^{Δt/2} L^{Δt} N^{Δt/2}`
    Ver1,
}

impl SplitVersion {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitVersion::Ver0 => "ver0",
            SplitVersion::Ver1 => "ver1",
        }
    }
}

/// Parsed stepper identifier such as `lg_rexi_lc_n_erk_ver1`.
///
/// A single part (`ln_erk`) integrates everything with one method and
/// leaves `remainder_group` empty. Two parts put the linear group first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeStepperSpec {
    pub linear_group: TermGroup,
    pub linear_method: Method,
    pub remainder_group: TermGroup,
    pub remainder_method: Option<Method>,
    pub split_version: Option<SplitVersion>,
    /// Explicit RK order (1, 2 or 4); 2 for every other method.
    pub order: usize,
}

fn parse_err(id: &str, token: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        id: id.to_string(),
        token: token.to_string(),
        reason: reason.into(),
    }
}

/// Method token with optional order suffix; `rk2`/`rk4` are accepted as
/// spellings of `erk2`/`erk4`.
fn method_token(tok: &str) -> Option<(Method, Option<usize>)> {
    let (name, digits) = tok.split_at(tok.find(|c: char| c.is_ascii_digit()).unwrap_or(tok.len()));
    let order = if digits.is_empty() {
        None
    } else {
        Some(digits.parse::<usize>().ok()?)
    };
    let m = match name {
        "erk" | "rk" => Method::Erk,
        "irk" => Method::Irk,
        "rexi" => Method::Rexi,
        "etdrk" => Method::Etdrk,
        _ => return None,
    };
    if name == "rk" && order.is_none() {
        return None;
    }
    Some((m, order))
}

pub fn parse_stepper_id(id: &str) -> Result<TimeStepperSpec> {
    if id.is_empty() {
        return Err(parse_err(id, "", "empty identifier"));
    }
    let mut tokens: Vec<&str> = id.split('_').collect();
    let version = match tokens.last() {
        Some(&"ver0") => Some(SplitVersion::Ver0),
        Some(&"ver1") => Some(SplitVersion::Ver1),
        _ => None,
    };
    if version.is_some() {
        tokens.pop();
    }
    let mut parts: Vec<(TermGroup, Method, Option<usize>, &str)> = Vec::new();
    let mut group = TermGroup::NONE;
    let mut covered = TermGroup::NONE;
    for tok in tokens {
        if let Some(g) = TermGroup::from_token(tok) {
            if group.overlaps(g) || covered.overlaps(g) {
                return Err(parse_err(id, tok, "term group listed twice"));
            }
            group = group.union(g);
        } else if let Some((m, order)) = method_token(tok) {
            if group.is_empty() {
                return Err(parse_err(id, tok, "method without a preceding term group"));
            }
            covered = covered.union(group);
            parts.push((group, m, order, tok));
            group = TermGroup::NONE;
        } else if tok == "ver0" || tok == "ver1" {
            return Err(parse_err(id, tok, "split version must be the last token"));
        } else {
            return Err(parse_err(id, tok, "unknown token"));
        }
    }
    if !group.is_empty() {
        return Err(parse_err(id, &group.to_string(), "term group without a method"));
    }
    if covered != TermGroup::LN {
        let missing = TermGroup::new(!covered.lg, !covered.lc, !covered.n);
        return Err(parse_err(id, &missing.to_string(), "terms not covered by any method"));
    }

    let check_order = |m: Method, order: Option<usize>, tok: &str| -> Result<usize> {
        match (m, order) {
            (_, None) => Ok(2),
            (Method::Erk, Some(o @ (1 | 2 | 4))) => Ok(o),
            (Method::Etdrk, Some(2)) => Ok(2),
            _ => Err(parse_err(id, tok, "unsupported order")),
        }
    };

    match parts.as_slice() {
        [(g, m, order, tok)] => {
            if *m != Method::Erk {
                return Err(parse_err(
                    id,
                    tok,
                    "a single method over all terms must be explicit (erk)",
                ));
            }
            if let Some(v) = version {
                return Err(parse_err(id, v.as_str(), "splitting version needs two parts"));
            }
            Ok(TimeStepperSpec {
                linear_group: *g,
                linear_method: *m,
                remainder_group: TermGroup::NONE,
                remainder_method: None,
                split_version: None,
                order: check_order(*m, *order, tok)?,
            })
        }
        [(lg, lm, lorder, ltok), (rg, rm, rorder, rtok)] => {
            if !lg.is_linear() {
                return Err(parse_err(id, &lg.to_string(), "the first part must be a linear group"));
            }
            if *lm == Method::Etdrk {
                return Err(parse_err(id, ltok, "etdrk hosts the remainder terms, not the linear part"));
            }
            let lorder = check_order(*lm, *lorder, ltok)?;
            let rorder = check_order(*rm, *rorder, rtok)?;
            match rm {
                Method::Etdrk => {
                    if *lm != Method::Rexi {
                        return Err(parse_err(id, ltok, "etdrk needs an exponential (rexi) linear part"));
                    }
                    if let Some(v) = version {
                        return Err(parse_err(id, v.as_str(), "etdrk needs no splitting version"));
                    }
                }
                Method::Erk => {
                    if version.is_none() {
                        return Err(parse_err(id, rtok, "split stepper needs a version suffix (ver0 or ver1)"));
                    }
                }
                _ => {
                    return Err(parse_err(id, rtok, "remainder terms must use erk or etdrk"));
                }
            }
            if lorder != 2 || rorder != 2 {
                let tok = if lorder != 2 { ltok } else { rtok };
                return Err(parse_err(id, tok, "composed steppers use second-order substeps"));
            }
            Ok(TimeStepperSpec {
                linear_group: *lg,
                linear_method: *lm,
                remainder_group: *rg,
                remainder_method: Some(*rm),
                split_version: version,
                order: 2,
            })
        }
        _ => Err(parse_err(id, "", "at most two group/method parts are supported")),
    }
}

impl TimeStepperSpec {
    pub fn is_split(&self) -> bool {
        self.split_version.is_some()
    }

    pub fn is_etdrk(&self) -> bool {
        self.remainder_method == Some(Method::Etdrk)
    }

    pub fn uses_rexi(&self) -> bool {
        self.linear_method == Method::Rexi
    }

    /// Canonical identifier; `parse_stepper_id(s.to_string()) == s`.
    pub fn canonical(&self) -> String {
        let method = |m: Method| -> String {
            if m == Method::Erk && self.order != 2 {
                format!("erk{}", self.order)
            } else {
                m.as_str().to_string()
            }
        };
        let mut s = format!("{}_{}", self.linear_group, method(self.linear_method));
        if let Some(rm) = self.remainder_method {
            s.push_str(&format!("_{}_{}", self.remainder_group, method(rm)));
        }
        if let Some(v) = self.split_version {
            s.push('_');
            s.push_str(v.as_str());
        }
        s
    }
}

impl fmt::Display for TimeStepperSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl FromStr for TimeStepperSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_stepper_id(s)
    }
}
