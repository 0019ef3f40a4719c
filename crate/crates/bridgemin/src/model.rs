//! Conditioning data for the process: ordered knots on `[0, 1]` and the
//! bridge segments between them.

use alloc::vec::Vec;
use core::fmt;

/// Times closer than this are rejected as duplicates: zero-length segments
/// make the minimum densities singular.
pub const DUPLICATE_TIME_TOL: f64 = 1e-12;

/// Validation failures when building [`Knots`].
#[derive(Debug, Clone, PartialEq)]
pub enum KnotsError {
    /// Fewer than two rows were supplied.
    TooFewRows,
    /// A time or value is NaN or infinite; carries the row index (in the
    /// caller's original order).
    NonFinite { index: usize },
    /// Two rows share a time within [`DUPLICATE_TIME_TOL`]; carries the index
    /// of the second offender after sorting.
    DuplicateTime { index: usize },
    /// The first time is not 0 or the last is not 1.
    BadEndpoints { t_first: f64, t_last: f64 },
}

impl fmt::Display for KnotsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotsError::TooFewRows => write!(f, "need at least two knots"),
            KnotsError::NonFinite { index } => {
                write!(f, "non-finite time or value at row {index}")
            }
            KnotsError::DuplicateTime { index } => {
                write!(f, "duplicate time at sorted row {index}")
            }
            KnotsError::BadEndpoints { t_first, t_last } => {
                write!(f, "times must span [0, 1], got [{t_first}, {t_last}]")
            }
        }
    }
}

impl core::error::Error for KnotsError {}

/// The ordered conditioning points `(t_i, x_i)`, `i = 0..n+1`, with
/// `t_0 = 0 < t_1 < ... < t_{n+1} = 1`.
///
/// Immutable after construction; shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Knots {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl Knots {
    /// Builds validated knots from `(time, value)` rows.
    ///
    /// Rows may arrive in any order (sampled points show up in evaluation
    /// order); they are sorted by time before validation.
    pub fn from_rows(rows: &[(f64, f64)]) -> Result<Self, KnotsError> {
        if rows.len() < 2 {
            return Err(KnotsError::TooFewRows);
        }
        for (index, &(t, x)) in rows.iter().enumerate() {
            if !t.is_finite() || !x.is_finite() {
                return Err(KnotsError::NonFinite { index });
            }
        }
        let mut sorted: Vec<(f64, f64)> = rows.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        for i in 1..sorted.len() {
            if sorted[i].0 - sorted[i - 1].0 < DUPLICATE_TIME_TOL {
                return Err(KnotsError::DuplicateTime { index: i });
            }
        }
        let t_first = sorted[0].0;
        let t_last = sorted[sorted.len() - 1].0;
        if t_first != 0.0 || t_last != 1.0 {
            return Err(KnotsError::BadEndpoints { t_first, t_last });
        }
        Ok(Knots {
            times: sorted.iter().map(|r| r.0).collect(),
            values: sorted.iter().map(|r| r.1).collect(),
        })
    }

    /// Number of interior knots `n` (there are `n + 1` segments).
    pub fn interior_count(&self) -> usize {
        self.times.len() - 2
    }

    /// Number of segments, `n + 1`.
    pub fn segment_count(&self) -> usize {
        self.times.len() - 1
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The sorted `(t, x)` rows; `Knots::from_rows(&k.rows())` rebuilds `k`.
    pub fn rows(&self) -> Vec<(f64, f64)> {
        self.times.iter().copied().zip(self.values.iter().copied()).collect()
    }

    /// Smallest conditioned value `min_i x_i`; the global minimum of the
    /// process lies strictly below it almost surely.
    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// The `i`-th bridge segment, `0 <= i <= n`.
    pub fn segment(&self, i: usize) -> Segment {
        Segment {
            t_lo: self.times[i],
            t_hi: self.times[i + 1],
            x_lo: self.values[i],
            x_hi: self.values[i + 1],
        }
    }

    /// All `n + 1` segments in time order.
    pub fn segments(&self) -> Vec<Segment> {
        (0..self.segment_count()).map(|i| self.segment(i)).collect()
    }
}

/// One bridge piece between consecutive knots: the process on
/// `[t_lo, t_hi]` pinned to `x_lo` and `x_hi` at the ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    t_lo: f64,
    t_hi: f64,
    x_lo: f64,
    x_hi: f64,
}

/// Invalid segment geometry.
#[derive(Debug, Clone, PartialEq)]
pub enum SegmentError {
    /// `t_lo >= t_hi` or a coordinate is not finite.
    Degenerate,
}

impl fmt::Display for SegmentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "segment needs finite coordinates and t_lo < t_hi")
    }
}

impl core::error::Error for SegmentError {}

impl Segment {
    pub fn new(t_lo: f64, t_hi: f64, x_lo: f64, x_hi: f64) -> Result<Self, SegmentError> {
        let finite =
            t_lo.is_finite() && t_hi.is_finite() && x_lo.is_finite() && x_hi.is_finite();
        if !finite || t_lo >= t_hi {
            return Err(SegmentError::Degenerate);
        }
        Ok(Segment { t_lo, t_hi, x_lo, x_hi })
    }

    pub fn t_lo(&self) -> f64 {
        self.t_lo
    }

    pub fn t_hi(&self) -> f64 {
        self.t_hi
    }

    pub fn x_lo(&self) -> f64 {
        self.x_lo
    }

    pub fn x_hi(&self) -> f64 {
        self.x_hi
    }

    /// Segment length `t_hi - t_lo` (always positive).
    pub fn length(&self) -> f64 {
        self.t_hi - self.t_lo
    }

    /// Endpoint gap `|x_hi - x_lo|`.
    pub fn gap(&self) -> f64 {
        (self.x_hi - self.x_lo).abs()
    }

    /// Lower endpoint value `min(x_lo, x_hi)`; the segment minimum is below
    /// it almost surely.
    pub fn floor(&self) -> f64 {
        self.x_lo.min(self.x_hi)
    }
}

/// Two segments compared for which one hosts the lower minimum, plus the
/// offset `xi = floor(seg2) - floor(seg1)` between their floors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairwiseConfig {
    pub seg1: Segment,
    pub seg2: Segment,
    pub xi: f64,
}

impl PairwiseConfig {
    pub fn new(seg1: Segment, seg2: Segment) -> Self {
        PairwiseConfig { seg1, seg2, xi: seg2.floor() - seg1.floor() }
    }

    /// Builds the comparison from the five scale parameters
    /// `(l1, d1, l2, d2, xi)`: segment lengths, endpoint gaps, and floor
    /// offset. The law of the pair of minima depends on nothing else.
    pub fn from_params(l1: f64, d1: f64, l2: f64, d2: f64, xi: f64) -> Result<Self, SegmentError> {
        if !(d1 >= 0.0) || !(d2 >= 0.0) || !xi.is_finite() {
            return Err(SegmentError::Degenerate);
        }
        let seg1 = Segment::new(0.0, l1, 0.0, d1)?;
        let seg2 = Segment::new(0.0, l2, xi, xi + d2)?;
        Ok(PairwiseConfig { seg1, seg2, xi })
    }
}
