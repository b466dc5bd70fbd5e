//! Dimensions: segment lengths, signed sums of lengths, and ratios of those.

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

pub type Symbol = Arc<str>;

/// An unordered pair of distinct points, stored with `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seg {
    a: Symbol,
    b: Symbol,
}

impl Seg {
    pub fn new(p: &str, q: &str) -> Seg {
        assert_ne!(p, q, "a segment needs two distinct endpoints");
        if p < q {
            Seg { a: p.into(), b: q.into() }
        } else {
            Seg { a: q.into(), b: p.into() }
        }
    }

    pub fn from_symbols(p: &Symbol, q: &Symbol) -> Seg {
        assert_ne!(p, q, "a segment needs two distinct endpoints");
        if p < q {
            Seg { a: p.clone(), b: q.clone() }
        } else {
            Seg { a: q.clone(), b: p.clone() }
        }
    }

    pub fn ends(&self) -> (&str, &str) {
        (&self.a, &self.b)
    }

    pub fn has(&self, p: &str) -> bool {
        &*self.a == p || &*self.b == p
    }

    /// The endpoint shared with `other`, if exactly one is.
    pub fn shared(&self, other: &Seg) -> Option<&str> {
        if self == other {
            return None;
        }
        if other.has(&self.a) {
            Some(&self.a)
        } else if other.has(&self.b) {
            Some(&self.b)
        } else {
            None
        }
    }

    pub fn other(&self, p: &str) -> &str {
        if &*self.a == p {
            &self.b
        } else {
            &self.a
        }
    }
}

impl fmt::Display for Seg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a.chars().count() == 1 && self.b.chars().count() == 1 {
            write!(f, "{}{}", self.a, self.b)
        } else {
            write!(f, "len({},{})", self.a, self.b)
        }
    }
}

/// `sum(coef * len)` with distinct segments, nonzero coefficients, positive
/// terms first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    terms: Vec<(i32, Seg)>,
}

impl LinearForm {
    pub fn new(terms: impl IntoIterator<Item = (i32, Seg)>) -> LinearForm {
        let mut merged: Vec<(i32, Seg)> = Vec::new();
        for (c, s) in terms {
            match merged.iter_mut().find(|(_, t)| *t == s) {
                Some(slot) => slot.0 += c,
                None => merged.push((c, s)),
            }
        }
        merged.retain(|(c, _)| *c != 0);
        merged.sort_by(|(c1, s1), (c2, s2)| (c1 < &0).cmp(&(c2 < &0)).then_with(|| s1.cmp(s2)));
        LinearForm { terms: merged }
    }

    pub fn single(seg: Seg) -> LinearForm {
        LinearForm { terms: vec![(1, seg)] }
    }

    pub fn terms(&self) -> &[(i32, Seg)] {
        &self.terms
    }

    pub fn coefficient(&self, seg: &Seg) -> i32 {
        self.terms.iter().find(|(_, s)| s == seg).map_or(0, |(c, _)| *c)
    }

    pub fn is_single(&self) -> Option<&Seg> {
        match self.terms.as_slice() {
            [(1, s)] => Some(s),
            _ => None,
        }
    }

    /// Length or composite, whichever is canonical.
    pub fn into_dim(self) -> Dim {
        match self.is_single() {
            Some(s) => Dim::Length(s.clone()),
            None => Dim::Composite(self),
        }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, s)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if i > 0 { "+" } else { "" };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}{s}")?;
            } else {
                write!(f, "{sign}{mag}*{s}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DimKind {
    Length,
    Ratio,
    Composite,
}

/// A dimension node of the derivation graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dim {
    Length(Seg),
    Composite(LinearForm),
    Ratio(Box<Dim>, Box<Dim>),
}

impl Dim {
    pub fn len(p: &str, q: &str) -> Dim {
        Dim::Length(Seg::new(p, q))
    }

    pub fn ratio(num: Dim, den: Dim) -> Dim {
        debug_assert!(!matches!(num, Dim::Ratio(..)) && !matches!(den, Dim::Ratio(..)));
        Dim::Ratio(Box::new(num), Box::new(den))
    }

    pub fn seg_ratio(num: &Seg, den: &Seg) -> Dim {
        Dim::ratio(Dim::Length(num.clone()), Dim::Length(den.clone()))
    }

    pub fn kind(&self) -> DimKind {
        match self {
            Dim::Length(_) => DimKind::Length,
            Dim::Composite(_) => DimKind::Composite,
            Dim::Ratio(..) => DimKind::Ratio,
        }
    }

    pub fn as_length(&self) -> Option<&Seg> {
        match self {
            Dim::Length(s) => Some(s),
            _ => None,
        }
    }

    /// The dimension as a linear form; `None` for ratios.
    pub fn linear(&self) -> Option<LinearForm> {
        match self {
            Dim::Length(s) => Some(LinearForm::single(s.clone())),
            Dim::Composite(f) => Some(f.clone()),
            Dim::Ratio(..) => None,
        }
    }

    /// For plain length ratios, `(numerator, denominator)`.
    pub fn seg_pair(&self) -> Option<(&Seg, &Seg)> {
        match self {
            Dim::Ratio(n, d) => match (&**n, &**d) {
                (Dim::Length(a), Dim::Length(b)) => Some((a, b)),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn segments(&self) -> Vec<&Seg> {
        match self {
            Dim::Length(s) => vec![s],
            Dim::Composite(f) => f.terms.iter().map(|(_, s)| s).collect(),
            Dim::Ratio(n, d) => {
                let mut v = n.segments();
                v.extend(d.segments());
                v
            }
        }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    /// Parses display names such as `OA`, `CG/AG`, `(OA-OF)/DF` or
    /// `len(P1,Q)`. Single-character point names may be written adjacently.
    pub fn parse(text: &str) -> Option<Dim> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).map(|c| if c == '−' { '-' } else { c }).collect();
        let (num, den) = split_ratio(&text);
        let n = parse_side(num)?;
        match den {
            None => Some(n),
            Some(d) => Some(Dim::ratio(n, parse_side(d)?)),
        }
    }
}

fn split_ratio(s: &str) -> (&str, Option<&str>) {
    let mut depth = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => return (&s[..i], Some(&s[i + 1..])),
            _ => {}
        }
    }
    (s, None)
}

fn parse_side(s: &str) -> Option<Dim> {
    let inner = if s.starts_with('(') && s.ends_with(')') && !s.starts_with("len(") {
        &s[1..s.len() - 1]
    } else {
        s
    };
    let mut terms = Vec::new();
    let mut rest = inner;
    let mut sign = 1;
    loop {
        if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r;
            continue;
        }
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
            continue;
        }
        let (coef, r) = match rest.find('*') {
            Some(i) if rest[..i].chars().all(|c| c.is_ascii_digit()) && i > 0 => {
                (rest[..i].parse::<i32>().ok()?, &rest[i + 1..])
            }
            _ => (1, rest),
        };
        let (seg, r) = parse_seg(r)?;
        terms.push((sign * coef, seg));
        sign = 1;
        rest = r;
        if rest.is_empty() {
            break;
        }
        if !rest.starts_with(['+', '-']) {
            return None;
        }
    }
    let form = LinearForm::new(terms);
    if form.terms.is_empty() {
        return None;
    }
    Some(form.into_dim())
}

fn parse_seg(s: &str) -> Option<(Seg, &str)> {
    if let Some(r) = s.strip_prefix("len(") {
        let close = r.find(')')?;
        let (a, b) = r[..close].split_once(',')?;
        if a == b || a.is_empty() || b.is_empty() {
            return None;
        }
        return Some((Seg::new(a, b), &r[close + 1..]));
    }
    let mut it = s.char_indices();
    let (_, a) = it.next()?;
    let (i, b) = it.next()?;
    if !a.is_alphanumeric() || !b.is_alphanumeric() || a == b {
        return None;
    }
    let end = i + b.len_utf8();
    Some((Seg::new(&a.to_string(), &b.to_string()), &s[end..]))
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Length(s) => write!(f, "{s}"),
            Dim::Composite(form) => write!(f, "({form})"),
            Dim::Ratio(n, d) => write!(f, "{n}/{d}"),
        }
    }
}

impl Serialize for Dim {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
