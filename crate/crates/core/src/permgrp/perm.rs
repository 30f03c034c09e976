use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Point label. Degrees stay well below `u16::MAX` for every group this crate handles.
pub type Point = u16;

/// A permutation of `0..degree`, stored as its image array.
///
/// Products compose as functions: `(a * b)(i) == a(b(i))`, so `b` acts first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[Point]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as Point).collect(),
        }
    }

    /// Validates that `images` is a bijection on `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n > Point::MAX as usize {
            return Err(Error::InvalidPermutation(format!("degree {n} too large")));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection on 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as Point).collect(),
        })
    }

    /// Caller guarantees bijectivity.
    pub(crate) fn from_points_unchecked(images: Vec<Point>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| i == x as usize)
        });
        Permutation {
            images: images.into_boxed_slice(),
        }
    }

    pub(crate) fn from_slice_unchecked(images: &[Point]) -> Self {
        Permutation {
            images: images.into(),
        }
    }

    /// Parses cycle notation such as `(0,1,2)(3,4)` or `(1 2)(3 4)`.
    ///
    /// With `one_based` the labels are shifted down by one.
    pub fn from_cycles(text: &str, degree: usize, one_based: bool) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut seen = vec![false; degree];
        let text = text.trim();
        let mut rest = text;
        while !rest.is_empty() {
            let rest_trim = rest.trim_start();
            if rest_trim.is_empty() {
                break;
            }
            if !rest_trim.starts_with('(') {
                return Err(Error::Parse(format!(
                    "expected '(' in cycle string {text:?}"
                )));
            }
            let close = rest_trim
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
            let body = &rest_trim[1..close];
            let mut cycle = Vec::new();
            for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad point {tok:?} in {text:?}")))?;
                let v = if one_based {
                    v.checked_sub(1).ok_or_else(|| {
                        Error::Parse(format!("point 0 in one-based cycle {text:?}"))
                    })?
                } else {
                    v
                };
                if v >= degree {
                    return Err(Error::Parse(format!(
                        "point {v} out of range for degree {degree}"
                    )));
                }
                if seen[v] {
                    return Err(Error::Parse(format!("point {v} repeated in {text:?}")));
                }
                seen[v] = true;
                cycle.push(v);
            }
            for i in 0..cycle.len() {
                images[cycle[i]] = cycle[(i + 1) % cycle.len()];
            }
            rest = &rest_trim[close + 1..];
        }
        Permutation::from_images(images)
    }

    /// Accepts either a JSON-style image array `[1,0,2]` or cycle notation;
    /// `one_based` applies to both.
    pub fn parse(text: &str, degree: usize, one_based: bool) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('[') {
            let mut images: Vec<usize> = serde_json::from_str(t)
                .map_err(|e| Error::Parse(format!("bad image array {t:?}: {e}")))?;
            if one_based {
                images = images
                    .into_iter()
                    .map(|x| {
                        x.checked_sub(1).ok_or_else(|| {
                            Error::Parse(format!("point 0 in one-based image array {t:?}"))
                        })
                    })
                    .collect::<Result<_>>()?;
            }
            if images.len() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: images.len(),
                });
            }
            Permutation::from_images(images)
        } else {
            Permutation::from_cycles(t, degree, one_based)
        }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, p: usize) -> usize {
        self.images[p] as usize
    }

    #[inline]
    pub fn images(&self) -> &[Point] {
        &self.images
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0 as Point; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as Point;
        }
        Permutation {
            images: inv.into_boxed_slice(),
        }
    }

    /// `self * g * self^-1`.
    pub fn conjugate(&self, g: &Permutation) -> Permutation {
        // (s g s^-1)(s(i)) = s(g(i))
        let mut out = vec![0 as Point; self.degree()];
        for i in 0..self.degree() {
            out[self.images[i] as usize] = self.images[g.images[i] as usize];
        }
        Permutation {
            images: out.into_boxed_slice(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// Cycle lengths (including fixed points), sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = self.images[j] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn order(&self) -> u64 {
        self.cycle_type()
            .into_iter()
            .fold(1u64, |acc, l| lcm(acc, l as u64))
    }

    /// Disjoint cycles, omitting fixed points, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] || self.images[i] as usize == i {
                seen[i] = true;
                continue;
            }
            let mut c = Vec::new();
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                c.push(j);
                j = self.images[j] as usize;
            }
            out.push(c);
        }
        out
    }

    pub fn to_cycle_string(&self, one_based: bool) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let off = usize::from(one_based);
        cycles
            .iter()
            .map(|c| {
                let body: Vec<String> = c.iter().map(|x| (x + off).to_string()).collect();
                format!("({})", body.join(","))
            })
            .collect()
    }

    /// Moves the permutation onto `degree >= self.degree()` points, fixing the new ones.
    pub fn extend_to(&self, degree: usize) -> Permutation {
        let mut v = self.images.to_vec();
        v.extend(self.degree() as Point..degree as Point);
        Permutation {
            images: v.into_boxed_slice(),
        }
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

impl Mul for &Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string(false))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Permutation::from_images(v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_applies_right_factor_first() {
        let a = Permutation::from_cycles("(0,1)", 3, false).unwrap();
        let b = Permutation::from_cycles("(1,2)", 3, false).unwrap();
        let ab = &a * &b;
        // b: 1->2, a fixes 2
        assert_eq!(ab.image(1), 2);
        assert_eq!(ab.image(2), 0);
        assert_eq!(ab.image(0), 1);
    }

    #[test]
    fn inverse_and_order() {
        let p = Permutation::from_cycles("(0,1,2)(3,4)", 6, false).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(p.order(), 6);
        assert_eq!(p.cycle_type(), vec![3, 2, 1]);
        assert_eq!(p.pow(6), Permutation::identity(6));
    }

    #[test]
    fn one_based_cycles() {
        let p = Permutation::from_cycles("(1, 5, 2, 6)(3, 7, 4, 8)", 8, true).unwrap();
        assert_eq!(p.to_vec(), vec![4, 5, 6, 7, 1, 0, 3, 2]);
        assert_eq!(p.to_cycle_string(true), "(1,5,2,6)(3,7,4,8)");
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_cycles("(0,1)(1,2)", 3, false).is_err());
        assert!(Permutation::parse("[1,0]", 3, false).is_err());
    }

    #[test]
    fn conjugate_matches_products() {
        let s = Permutation::from_cycles("(0,2,3)", 5, false).unwrap();
        let g = Permutation::from_cycles("(1,4)(0,2)", 5, false).unwrap();
        let direct = s.compose(&g).compose(&s.inverse());
        assert_eq!(s.conjugate(&g), direct);
    }

    #[test]
    fn display_roundtrips_through_parse() {
        let p = Permutation::from_cycles("(0,3)(1,2,4)", 5, false).unwrap();
        let q = Permutation::parse(&p.to_string(), 5, false).unwrap();
        assert_eq!(p, q);
        let r = Permutation::parse(&p.to_cycle_string(false), 5, false).unwrap();
        assert_eq!(p, r);
    }
}
