use std::io::{BufRead, Write};

use super::point::DyadicPoint;
use crate::error::{invalid, Error, Result};

/// Largest exponent a [`PointSet`] stores; numerators up to `2^7` fit a byte.
pub const STORE_MAX_EXP: u32 = 7;

/// A materialized point collection in flat byte storage.
///
/// Millions of points of dimension up to 64 fit in a few hundred megabytes
/// this way; each point costs `dim + 1` bytes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointSet {
    dim: usize,
    exps: Vec<u8>,
    nums: Vec<u8>,
}

impl PointSet {
    pub fn new(dim: usize) -> Self {
        PointSet {
            dim,
            exps: Vec::new(),
            nums: Vec::new(),
        }
    }

    pub fn with_capacity(dim: usize, points: usize) -> Self {
        PointSet {
            dim,
            exps: Vec::with_capacity(points),
            nums: Vec::with_capacity(points * dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn push(&mut self, p: &DyadicPoint) -> Result<()> {
        if p.dim() != self.dim {
            return Err(invalid(format!(
                "point of dimension {} pushed into set of dimension {}",
                p.dim(),
                self.dim
            )));
        }
        if p.denom_exp() > STORE_MAX_EXP {
            return Err(invalid(format!(
                "denominator exponent {} exceeds storable maximum {STORE_MAX_EXP}",
                p.denom_exp()
            )));
        }
        self.exps.push(p.denom_exp() as u8);
        self.nums.extend(p.numerators().iter().map(|&x| x as u8));
        Ok(())
    }

    /// Collects a stream of points of dimension `dim`.
    pub fn collect_from<I: IntoIterator<Item = DyadicPoint>>(dim: usize, iter: I) -> Result<Self> {
        let iter = iter.into_iter();
        let mut set = PointSet::with_capacity(dim, iter.size_hint().0);
        for p in iter {
            set.push(&p)?;
        }
        Ok(set)
    }

    pub fn extend_from(&mut self, other: &PointSet) -> Result<()> {
        if other.dim != self.dim {
            return Err(invalid("dimension mismatch when joining point sets"));
        }
        self.exps.extend_from_slice(&other.exps);
        self.nums.extend_from_slice(&other.nums);
        Ok(())
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    #[inline]
    pub fn numerators(&self, i: usize) -> &[u8] {
        &self.nums[i * self.dim..(i + 1) * self.dim]
    }

    pub fn get(&self, i: usize) -> DyadicPoint {
        DyadicPoint::from_parts_unchecked(
            self.exp(i),
            self.numerators(i).iter().map(|&x| x as u32).collect(),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = DyadicPoint> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }

    pub fn max_exp(&self) -> u32 {
        self.exps.iter().copied().max().unwrap_or(0) as u32
    }

    /// Number of points whose canonical representation repeats an earlier
    /// one: `len - distinct`.
    pub fn duplicate_count(&self) -> usize {
        let mut idx: Vec<u32> = (0..self.len() as u32).collect();
        let key = |i: u32| (self.exps[i as usize], self.numerators(i as usize));
        idx.sort_unstable_by(|&a, &b| key(a).cmp(&key(b)));
        idx.windows(2).filter(|w| key(w[0]) == key(w[1])).count()
    }

    /// Writes the versioned text format: a header line
    /// `cubepack v1 dim=<n> count=<N>` then one `<e> <num_1> ... <num_n>`
    /// line per point.
    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "cubepack v1 dim={} count={}", self.dim, self.len())?;
        let mut line = String::with_capacity(4 * (self.dim + 1));
        for i in 0..self.len() {
            line.clear();
            push_num(&mut line, self.exps[i]);
            for &x in self.numerators(i) {
                line.push(' ');
                push_num(&mut line, x);
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    /// Parses the format written by [`PointSet::write_to`]. Points are
    /// normalized on the way in.
    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty file"))??;
        let (dim, count) = parse_header(&header)?;
        let mut set = PointSet::with_capacity(dim, count.min(1 << 22));
        let mut nums = Vec::with_capacity(dim);
        for (idx, line) in lines.enumerate() {
            let line_no = idx + 2;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_ascii_whitespace();
            let e: u32 = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| parse_err(line_no, "bad exponent"))?;
            nums.clear();
            for f in fields {
                nums.push(f.parse::<u32>().map_err(|_| parse_err(line_no, "bad numerator"))?);
            }
            if nums.len() != dim {
                return Err(parse_err(
                    line_no,
                    &format!("expected {dim} numerators, found {}", nums.len()),
                ));
            }
            let p = DyadicPoint::new(e, nums.clone())
                .map_err(|e| parse_err(line_no, &e.to_string()))?;
            set.push(&p).map_err(|e| parse_err(line_no, &e.to_string()))?;
        }
        if set.len() != count {
            return Err(parse_err(
                0,
                &format!("header announces {count} points, file holds {}", set.len()),
            ));
        }
        Ok(set)
    }
}

fn push_num(s: &mut String, x: u8) {
    use std::fmt::Write as _;
    let _ = write!(s, "{x}");
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}

fn parse_header(h: &str) -> Result<(usize, usize)> {
    let mut parts = h.split_ascii_whitespace();
    if parts.next() != Some("cubepack") || parts.next() != Some("v1") {
        return Err(parse_err(1, "missing `cubepack v1` header"));
    }
    let mut field = |name: &str| -> Result<usize> {
        parts
            .next()
            .and_then(|p| p.strip_prefix(name))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| parse_err(1, &format!("missing {name}")))
    };
    let dim = field("dim=")?;
    let count = field("count=")?;
    if dim == 0 {
        return Err(parse_err(1, "dim must be positive"));
    }
    Ok((dim, count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> PointSet {
        let mut s = PointSet::new(3);
        s.push(&DyadicPoint::new(0, vec![0, 1, 1]).unwrap()).unwrap();
        s.push(&DyadicPoint::new(2, vec![1, 3, 4]).unwrap()).unwrap();
        s.push(&DyadicPoint::new(1, vec![1, 1, 0]).unwrap()).unwrap();
        s
    }

    #[test]
    fn round_trip_text() {
        let s = sample();
        let mut buf = Vec::new();
        s.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("cubepack v1 dim=3 count=3\n0 0 1 1\n2 1 3 4\n"));
        let back = PointSet::read_from(&buf[..]).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn bad_files_rejected() {
        assert!(PointSet::read_from(&b""[..]).is_err());
        assert!(PointSet::read_from(&b"cubepack v2 dim=1 count=0\n"[..]).is_err());
        assert!(PointSet::read_from(&b"cubepack v1 dim=2 count=1\n0 1\n"[..]).is_err());
        assert!(PointSet::read_from(&b"cubepack v1 dim=2 count=2\n0 1 0\n"[..]).is_err());
        assert!(PointSet::read_from(&b"cubepack v1 dim=1 count=1\n1 3\n"[..]).is_err());
    }

    #[test]
    fn duplicates_counted() {
        let mut s = sample();
        let copy = s.clone();
        s.extend_from(&copy).unwrap();
        assert_eq!(s.duplicate_count(), 3);
        assert_eq!(copy.duplicate_count(), 0);
    }

    #[test]
    fn wrong_dimension_or_exponent_rejected() {
        let mut s = PointSet::new(2);
        assert!(s.push(&DyadicPoint::new(0, vec![1]).unwrap()).is_err());
        assert!(s.push(&DyadicPoint::new(9, vec![1, 0]).unwrap()).is_err());
    }
}
