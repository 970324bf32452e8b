//! Point sets built from codes, streamed as exact dyadic points.
//!
//! A *layer* pairs a binary code with a denominator exponent `m` and a list
//! of odd multipliers `l < 2^m`. Every codeword `v` of the layer yields the
//! points with value `l / 2^m` on the support of `v` and an arbitrary 0/1
//! assignment `ε` on the remaining coordinates.
//!
//! - The base packing is the extended Hamming layer with `m = 1`, `l = 1`,
//!   zero codeword included (it contributes the cube vertices).
//! - The general packing adds one Reed–Muller layer `RM(r, k)` for every
//!   `r ≡ k (mod 2)` with `k - 2⌊k/2⌋ ≤ r ≤ k - 4`, using `m = (k - r)/2`.
//! - In dimension 16 the base packing can instead be augmented by the points
//!   `v/4 + 3(1 - v)/4` for every extended Hamming codeword `v`.

mod point;
mod store;

pub use point::{canonical_key, DyadicPoint, MAX_DENOM_EXP};
pub use store::{PointSet, STORE_MAX_EXP};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;

use crate::codes::{self, BitWord, LinearCode};
use crate::error::{invalid, Error, Result};
use crate::weights;

/// Default cap on points held in memory by materializing consumers.
pub const DEFAULT_MAX_POINTS: usize = 4_000_000;

/// Largest `k` whose point streams can be generated (dimension 64).
pub const MAX_STREAM_K: u32 = 6;

/// Which point set to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Base,
    Augmented16,
    General,
}

impl FromStr for Construction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "base" => Ok(Construction::Base),
            "augmented16" => Ok(Construction::Augmented16),
            "general" => Ok(Construction::General),
            _ => Err(invalid(format!("unknown construction `{s}`"))),
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::Base => "base",
            Construction::Augmented16 => "augmented16",
            Construction::General => "general",
        })
    }
}

/// Parameters of one Reed–Muller layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerSpec {
    pub r: u32,
    pub k: u32,
    /// Denominator exponent `(k - r) / 2`.
    pub m: u32,
    /// Odd multipliers `1, 3, …, 2^m - 1`.
    pub l_values: Vec<u32>,
}

impl LayerSpec {
    pub fn new(r: u32, k: u32) -> Result<Self> {
        if r > k || (k - r) % 2 != 0 || k - r < 2 {
            return Err(invalid(format!(
                "layer needs k - r even and >= 2, got r={r}, k={k}"
            )));
        }
        let m = (k - r) / 2;
        if m > STORE_MAX_EXP {
            return Err(invalid(format!("layer exponent {m} too large")));
        }
        Ok(LayerSpec {
            r,
            k,
            m,
            l_values: (1..1u32 << m).step_by(2).collect(),
        })
    }

    pub fn name(&self) -> String {
        format!("r={}", self.r)
    }
}

/// Orders `r` of the Reed–Muller layers of the general construction for `k`:
/// `k - 2⌊k/2⌋, …, k - 4` in steps of two.
pub fn general_layer_orders(k: u32) -> Vec<u32> {
    let lo = k % 2;
    if k < 4 {
        return vec![];
    }
    (lo..=k - 4).step_by(2).collect()
}

/// A code together with the coordinate values its codewords map to.
#[derive(Clone, Debug)]
pub struct Layer {
    name: String,
    code: LinearCode,
    denom_exp: u32,
    multipliers: Vec<u32>,
    include_zero: bool,
}

impl Layer {
    /// Base layer: extended Hamming code of length `2^k`, value ½ on supports.
    pub fn base(k: u32) -> Result<Self> {
        Ok(Layer {
            name: "base".into(),
            code: codes::extended_hamming(k)?,
            denom_exp: 1,
            multipliers: vec![1],
            include_zero: true,
        })
    }

    pub fn reed_muller(spec: &LayerSpec) -> Result<Self> {
        Self::with_code(spec, codes::reed_muller(spec.r, spec.k)?)
    }

    /// Layer for `spec` backed by an explicit code (for probing the verifier
    /// with altered codes).
    pub fn with_code(spec: &LayerSpec, code: LinearCode) -> Result<Self> {
        if code.length() != 1usize << spec.k {
            return Err(invalid("layer code length must be 2^k"));
        }
        Ok(Layer {
            name: spec.name(),
            code,
            denom_exp: spec.m,
            multipliers: spec.l_values.clone(),
            include_zero: false,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn multipliers(&self) -> &[u32] {
        &self.multipliers
    }

    pub fn includes_zero_codeword(&self) -> bool {
        self.include_zero
    }

    pub fn dim(&self) -> usize {
        self.code.length()
    }

    /// Points contributed by one codeword of weight `w`.
    pub fn points_per_codeword(&self, weight: usize) -> BigUint {
        BigUint::from(self.multipliers.len()) << (self.dim() - weight)
    }

    /// Exact point count from a weight distribution of the layer's code.
    pub fn count_from_weights(&self, dist: &weights::WeightDistribution) -> BigUint {
        dist.nonzero_entries()
            .filter(|(w, _)| *w > 0 || self.include_zero)
            .map(|(w, c)| c * self.points_per_codeword(w))
            .sum()
    }

    /// The point for codeword `v`, multiplier `l` and off-support bits `eps`
    /// (bit `j` of `eps` goes to the `j`-th off-support position).
    pub fn point(&self, v: &BitWord, l: u32, eps: &BitWord) -> DyadicPoint {
        let off: Vec<usize> = v.complement().support();
        debug_assert_eq!(eps.len(), off.len());
        let mut nums = vec![0u32; self.dim()];
        for i in v.ones_iter() {
            nums[i] = l;
        }
        let one = 1u32 << self.denom_exp;
        for (j, &pos) in off.iter().enumerate() {
            if eps.get(j) {
                nums[pos] = one;
            }
        }
        DyadicPoint::from_parts_unchecked(self.denom_exp, nums).normalized()
    }

    /// Streams every point of the layer.
    pub fn stream(&self) -> Result<LayerPoints> {
        if self.code.dimension() >= 64 || self.dim() > 64 {
            return Err(Error::EnumerationRefused {
                dimension: self.code.dimension(),
                cap: 63,
            });
        }
        Ok(LayerPoints::new(self.clone()))
    }

    /// Draws `count` points uniformly at random among (codeword, multiplier,
    /// ε) triples. Codewords come from uniformly random messages.
    pub fn sample<R: Rng>(&self, count: usize, rng: &mut R) -> Result<PointSet> {
        if self.code.dimension() >= 64 {
            return Err(invalid("sampling needs code dimension below 64"));
        }
        let mask = if self.code.dimension() == 0 {
            0
        } else {
            u64::MAX >> (64 - self.code.dimension())
        };
        let mut out = PointSet::with_capacity(self.dim(), count);
        while out.len() < count {
            let v = self.code.encode(rng.gen::<u64>() & mask);
            if v.is_zero() && !self.include_zero {
                continue;
            }
            let l = self.multipliers[rng.gen_range(0..self.multipliers.len())];
            let off = self.dim() - v.weight();
            let mut eps = BitWord::zeros(off);
            for j in 0..off {
                if rng.gen::<bool>() {
                    eps.set(j, true);
                }
            }
            out.push(&self.point(&v, l, &eps))?;
        }
        Ok(out)
    }
}

/// Streaming iterator over the points of a [`Layer`].
///
/// Order: codewords in Gray-code message order, then multipliers ascending,
/// then ε in binary-counter order with the leftmost off-support position as
/// the most significant bit.
pub struct LayerPoints {
    layer: Layer,
    message: u64,
    messages: u64,
    current: BitWord,
    template: Vec<u32>,
    off: Vec<usize>,
    l_index: usize,
    eps: u128,
    eps_total: u128,
    done: bool,
}

impl LayerPoints {
    fn new(layer: Layer) -> Self {
        let messages = 1u64 << layer.code.dimension();
        let current = layer.code.encode(0);
        let mut it = LayerPoints {
            template: vec![],
            off: vec![],
            layer,
            message: 0,
            messages,
            current,
            l_index: 0,
            eps: 0,
            eps_total: 0,
            done: false,
        };
        if it.current.is_zero() && !it.layer.include_zero {
            it.advance_codeword();
        } else {
            it.load_codeword();
        }
        it
    }

    fn load_codeword(&mut self) {
        self.off = self.current.complement().support();
        self.eps_total = 1u128 << self.off.len();
        self.eps = 0;
        self.l_index = 0;
        self.fill_template();
    }

    fn fill_template(&mut self) {
        let l = self.layer.multipliers[self.l_index];
        self.template = vec![0u32; self.layer.dim()];
        for i in self.current.ones_iter() {
            self.template[i] = l;
        }
    }

    fn advance_codeword(&mut self) {
        loop {
            self.message += 1;
            if self.message >= self.messages {
                self.done = true;
                return;
            }
            let row = self.message.trailing_zeros() as usize;
            self.current.xor_assign(self.layer.code.generator().row(row));
            if !self.current.is_zero() || self.layer.include_zero {
                break;
            }
        }
        self.load_codeword();
    }
}

impl Iterator for LayerPoints {
    type Item = DyadicPoint;

    fn next(&mut self) -> Option<DyadicPoint> {
        if self.done {
            return None;
        }
        let mut nums = self.template.clone();
        let one = 1u32 << self.layer.denom_exp;
        let n_off = self.off.len();
        for (j, &pos) in self.off.iter().enumerate() {
            if (self.eps >> (n_off - 1 - j)) & 1 == 1 {
                nums[pos] = one;
            }
        }
        let p = DyadicPoint::from_parts_unchecked(self.layer.denom_exp, nums).normalized();

        self.eps += 1;
        if self.eps == self.eps_total {
            self.eps = 0;
            self.l_index += 1;
            if self.l_index == self.layer.multipliers.len() {
                self.advance_codeword();
            } else {
                self.fill_template();
            }
        }
        Some(p)
    }
}

/// A point stream with its exact announced size.
pub struct PointStream {
    dim: usize,
    expected: BigUint,
    inner: Box<dyn Iterator<Item = DyadicPoint> + Send>,
}

impl PointStream {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Exact number of points the stream yields.
    pub fn expected_count(&self) -> &BigUint {
        &self.expected
    }

    /// Collects the stream, refusing up front if it is larger than `max_points`.
    pub fn materialize(self, max_points: usize) -> Result<PointSet> {
        if self.expected > BigUint::from(max_points) {
            return Err(Error::MaterializationRefused {
                count: self.expected.to_string(),
                cap: max_points,
            });
        }
        let dim = self.dim;
        PointSet::collect_from(dim, self)
    }

    fn chain(self, other: PointStream) -> PointStream {
        PointStream {
            dim: self.dim,
            expected: self.expected + other.expected,
            inner: Box::new(self.inner.chain(other.inner)),
        }
    }
}

impl Iterator for PointStream {
    type Item = DyadicPoint;
    fn next(&mut self) -> Option<DyadicPoint> {
        self.inner.next()
    }
}

fn check_stream_k(k: u32) -> Result<()> {
    if !(2..=MAX_STREAM_K).contains(&k) {
        return Err(invalid(format!(
            "point streams need 2 <= k <= {MAX_STREAM_K}, got {k}"
        )));
    }
    Ok(())
}

/// The base packing: `base_count(k)` points.
pub fn build_base(k: u32) -> Result<PointStream> {
    check_stream_k(k)?;
    let layer = Layer::base(k)?;
    Ok(PointStream {
        dim: layer.dim(),
        expected: weights::base_count(k)?,
        inner: Box::new(layer.stream()?),
    })
}

/// The 2048 dimension-16 points `v/4 + 3(1 - v)/4`, `v` an extended Hamming
/// codeword, in Gray-code codeword order.
pub fn build_augmented16() -> Result<PointStream> {
    let code = codes::extended_hamming(4)?;
    let words: Vec<BitWord> = codes::enumerate_codewords(&code, 11)?.collect();
    let points = words.into_iter().map(|v| {
        let nums = (0..16).map(|i| if v.get(i) { 1 } else { 3 }).collect();
        DyadicPoint::from_parts_unchecked(2, nums)
    });
    Ok(PointStream {
        dim: 16,
        expected: BigUint::from(2048u32),
        inner: Box::new(points),
    })
}

/// Base packing plus the dimension-16 augmentation.
pub fn build_augmented16_full() -> Result<PointStream> {
    Ok(build_base(4)?.chain(build_augmented16()?))
}

/// Exact size of a Reed–Muller layer, by enumerating its code.
pub fn rm_layer_count(spec: &LayerSpec, cap: usize) -> Result<BigUint> {
    let layer = Layer::reed_muller(spec)?;
    let dist = weights::weights_bruteforce(layer.code(), cap)?;
    Ok(layer.count_from_weights(&dist))
}

/// Lower bound on a layer's size from its minimum-weight words only.
pub fn rm_layer_lower(spec: &LayerSpec) -> Result<BigUint> {
    let a = weights::rm_min_weight_count(spec.r, spec.k)?;
    let dim = 1usize << spec.k;
    let min_w = 1usize << (spec.k - spec.r);
    Ok(a * (BigUint::from(spec.l_values.len()) << (dim - min_w)))
}

/// Streams one Reed–Muller layer of the general construction.
pub fn build_rm_layer(spec: &LayerSpec, cap: usize) -> Result<PointStream> {
    check_stream_k(spec.k)?;
    if spec.r + 4 > spec.k {
        return Err(invalid(format!(
            "layer order r={} must be at most k-4; r=k-2 is the base layer",
            spec.r
        )));
    }
    let layer = Layer::reed_muller(spec)?;
    codes::check_enumerable(layer.code(), cap)?;
    Ok(PointStream {
        dim: layer.dim(),
        expected: rm_layer_count(spec, cap)?,
        inner: Box::new(layer.stream()?),
    })
}

/// The general layered packing: base points, then each Reed–Muller layer.
pub fn build_general(k: u32, cap: usize) -> Result<PointStream> {
    if k < 4 {
        return Err(invalid(format!("general construction needs k >= 4, got {k}")));
    }
    let mut stream = build_base(k)?;
    for r in general_layer_orders(k) {
        stream = stream.chain(build_rm_layer(&LayerSpec::new(r, k)?, cap)?);
    }
    Ok(stream)
}

/// Every layer of a construction, for the structural certificate.
pub fn construction_layers(construction: Construction, k: u32) -> Result<Vec<Layer>> {
    match construction {
        Construction::Base | Construction::Augmented16 => {
            if construction == Construction::Augmented16 && k != 4 {
                return Err(invalid("augmented16 requires k = 4"));
            }
            Ok(vec![Layer::base(k)?])
        }
        Construction::General => {
            if k < 4 {
                return Err(invalid("general construction needs k >= 4"));
            }
            let mut layers = vec![Layer::base(k)?];
            for r in general_layer_orders(k) {
                layers.push(Layer::reed_muller(&LayerSpec::new(r, k)?)?);
            }
            Ok(layers)
        }
    }
}

/// How [`count_general`] evaluates the Reed–Muller layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    /// Full weight distribution of each layer code.
    Exact,
    /// Minimum-weight words only.
    Lower,
}

impl FromStr for CountMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(CountMode::Exact),
            "lower" => Ok(CountMode::Lower),
            _ => Err(invalid(format!("unknown count mode `{s}`"))),
        }
    }
}

/// Total and per-layer point counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub k: u32,
    pub total: BigUint,
    pub per_layer: BTreeMap<String, BigUint>,
    /// False when some layer was only bounded from below.
    pub exact: bool,
}

/// Counts the general construction without generating points.
///
/// In exact mode a layer whose code is too large to enumerate falls back to
/// the minimum-weight lower bound and the report is flagged inexact.
pub fn count_general(k: u32, mode: CountMode, cap: usize) -> Result<CountReport> {
    if !(4..=codes::MAX_K).contains(&k) {
        return Err(invalid(format!("general construction needs 4 <= k <= {}", codes::MAX_K)));
    }
    let mut per_layer = BTreeMap::new();
    let mut exact = mode == CountMode::Exact;
    per_layer.insert("base".to_string(), weights::base_count(k)?);
    for r in general_layer_orders(k) {
        let spec = LayerSpec::new(r, k)?;
        let count = match mode {
            CountMode::Lower => rm_layer_lower(&spec)?,
            CountMode::Exact => match rm_layer_count(&spec, cap) {
                Ok(c) => c,
                Err(Error::EnumerationRefused { .. }) => {
                    exact = false;
                    rm_layer_lower(&spec)?
                }
                Err(e) => return Err(e),
            },
        };
        per_layer.insert(spec.name(), count);
    }
    let total = per_layer.values().sum();
    Ok(CountReport {
        k,
        total,
        per_layer,
        exact,
    })
}

/// Exact size of a construction (exact-mode general count for `General`).
pub fn construction_count(construction: Construction, k: u32, cap: usize) -> Result<BigUint> {
    match construction {
        Construction::Base => weights::base_count(k),
        Construction::Augmented16 => {
            if k != 4 {
                return Err(invalid("augmented16 requires k = 4"));
            }
            Ok(weights::base_count(4)? + weights::extended_codeword_count(4)?)
        }
        Construction::General => Ok(count_general(k, CountMode::Exact, cap)?.total),
    }
}

/// Streams a construction.
pub fn build(construction: Construction, k: u32, cap: usize) -> Result<PointStream> {
    match construction {
        Construction::Base => build_base(k),
        Construction::Augmented16 => {
            if k != 4 {
                return Err(invalid("augmented16 requires k = 4"));
            }
            build_augmented16_full()
        }
        Construction::General => build_general(k, cap),
    }
}

/// Points per weight class (number of fractional coordinates) in a set.
pub fn weight_class_breakdown(points: &PointSet) -> BTreeMap<usize, u64> {
    let mut out = BTreeMap::new();
    for i in 0..points.len() {
        let e = points.exp(i);
        let one = 1u16 << e;
        let w = points
            .numerators(i)
            .iter()
            .filter(|&&x| x != 0 && x as u16 != one)
            .count();
        *out.entry(w).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests;
