//! Permutations on `{1..n}` stored as image tables.
//!
//! Points are 0-based internally and 1-based in every textual form.

use std::fmt;

use thiserror::Error;

/// Largest supported degree; images are stored as bytes.
pub const MAX_DEGREE: usize = 255;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("malformed cycle notation at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("point {0} repeated")]
    RepeatedPoint(usize),
    #[error("point {point} exceeds degree {degree}")]
    OutOfRange { point: usize, degree: usize },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree {0} unsupported (1..={MAX_DEGREE})")]
    BadDegree(usize),
    #[error("image table is not a bijection")]
    NotBijection,
    #[error("group is not transitive")]
    NotTransitive,
    #[error("partition is not a block system: {0}")]
    NotBlockSystem(String),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u8]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        assert!((1..=MAX_DEGREE).contains(&degree), "degree {degree} unsupported");
        Permutation { images: (0..degree).map(|i| i as u8).collect() }
    }

    /// Builds from 0-based images, checking bijectivity.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        if n == 0 || n > MAX_DEGREE {
            return Err(PermError::BadDegree(n));
        }
        let mut seen = vec![false; n];
        for &x in images {
            if x >= n || seen[x] {
                return Err(PermError::NotBijection);
            }
            seen[x] = true;
        }
        Ok(Permutation { images: images.iter().map(|&x| x as u8).collect() })
    }

    /// Builds from 1-based images.
    pub fn from_images_one_based(images: &[usize]) -> Result<Self, PermError> {
        let zero: Vec<usize> = images.iter().map(|&x| x.wrapping_sub(1)).collect();
        Self::from_images(&zero)
    }

    /// Product of the given 0-based transpositions (must be disjoint for the
    /// result to be an involution; applied left to right otherwise).
    pub fn from_transpositions(degree: usize, pairs: &[(usize, usize)]) -> Self {
        let mut p = Self::identity(degree);
        for &(a, b) in pairs {
            p.images.swap(a, b);
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn image(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn images_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    /// `self` first, then `other`: `x -> other(self(x))`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    /// In-place `self = self.then(other)`.
    #[inline]
    pub(crate) fn then_assign(&mut self, other: &Permutation) {
        for x in self.images.iter_mut() {
            *x = other.images[*x as usize];
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv.into_boxed_slice() }
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// `g^-1 self g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.images.iter().enumerate().all(|(i, &x)| self.images[x as usize] as usize == i)
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.image(x) == x
    }

    pub fn moved_points(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&x| !self.fixes(x)).collect()
    }

    /// Non-trivial cycles, 0-based, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.fixes(start) {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.image(x);
            }
            out.push(cyc);
        }
        out
    }

    /// Cycle lengths including fixed points, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = lens.iter().sum();
        lens.extend(std::iter::repeat_n(1, self.degree() - moved));
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        (0..self.degree()).all(|x| other.images[self.images[x] as usize] == self.images[other.images[x] as usize])
    }

    /// Packs the image table into a `u128` when `degree * bits <= 128`.
    pub(crate) fn pack(&self) -> Option<u128> {
        let bits = pack_bits(self.degree())?;
        let mut key = 0u128;
        for &x in self.images.iter() {
            key = (key << bits) | x as u128;
        }
        Some(key)
    }
}

pub(crate) fn pack_bits(degree: usize) -> Option<u32> {
    let bits = usize::BITS - (degree.max(2) - 1).leading_zeros();
    if degree as u32 * bits <= 128 {
        Some(bits)
    } else {
        None
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("id");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses disjoint-cycle notation (`"(1,2)(3,4)"`, `"id"`, `"()"`).
pub fn parse_perm(text: &str, degree: usize) -> Result<Permutation, PermError> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(PermError::BadDegree(degree));
    }
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let syntax = |pos: usize, msg: &str| PermError::Syntax { pos, msg: msg.to_string() };

    skip_ws(&mut pos);
    let rest = text[pos..].trim_end();
    if rest == "id" || rest == "()" {
        return Ok(Permutation::identity(degree));
    }
    if pos >= bytes.len() {
        return Err(syntax(pos, "empty input"));
    }

    let mut images: Vec<usize> = (0..degree).collect();
    let mut used = vec![false; degree];
    while pos < bytes.len() {
        if bytes[pos] != b'(' {
            return Err(syntax(pos, "expected '('"));
        }
        pos += 1;
        let mut cycle = Vec::new();
        loop {
            skip_ws(&mut pos);
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(syntax(pos, "expected point"));
            }
            let point: usize = text[start..pos].parse().map_err(|_| syntax(start, "point too large"))?;
            if point == 0 {
                return Err(syntax(start, "points are 1-based"));
            }
            if point > degree {
                return Err(PermError::OutOfRange { point, degree });
            }
            if used[point - 1] {
                return Err(PermError::RepeatedPoint(point));
            }
            used[point - 1] = true;
            cycle.push(point - 1);
            skip_ws(&mut pos);
            match bytes.get(pos) {
                Some(b',') => pos += 1,
                Some(b')') => {
                    pos += 1;
                    break;
                }
                _ => return Err(syntax(pos, "expected ',' or ')'")),
            }
        }
        if cycle.len() < 2 {
            return Err(syntax(pos, "cycle needs at least two points"));
        }
        for k in 0..cycle.len() {
            images[cycle[k]] = cycle[(k + 1) % cycle.len()];
        }
        skip_ws(&mut pos);
    }
    Permutation::from_images(&images)
}
