//! Hourly public-opinion trend: bin cleaned posts into origin-aligned hour
//! buckets and locate the volume peak.

use serde::{Deserialize, Serialize};

use crate::corpus::{EventConfig, MicroblogPost};
use crate::error::{Error, Result};

/// Post counts per hour over the analysis window.
///
/// Bin `h` covers `[origin + h hours, origin + (h+1) hours)` — bins align to
/// the event origin, not to clock hours, so hour 0 reads as "the first hour
/// after the quake".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendSeries {
    event_id: String,
    bin_hours: u32,
    counts: Vec<u64>,
}

impl TrendSeries {
    pub fn new(event_id: impl Into<String>, counts: Vec<u64>) -> TrendSeries {
        TrendSeries {
            event_id: event_id.into(),
            bin_hours: 1,
            counts,
        }
    }

    pub fn event_id(&self) -> &str {
        &self.event_id
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total posts across all bins.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// The earliest hour bin attaining the maximum volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakInfo {
    pub hour_index: usize,
    pub volume: u64,
}

/// The hour bin a post falls into, or an error if it lies outside the window.
///
/// Cleaned corpora never trigger the error; it signals unclean input.
pub fn hour_of(post: &MicroblogPost, cfg: &EventConfig) -> Result<usize> {
    let minutes = post.published_at.minutes_since(cfg.origin_time);
    let window_minutes = i64::from(cfg.window_hours) * 60;
    if minutes < 0 || minutes >= window_minutes {
        return Err(Error::OutOfWindow {
            id: post.id.clone(),
            at: post.published_at.to_string(),
        });
    }
    Ok((minutes / 60) as usize)
}

/// Hour-bin assignment for every post, in input order. On unclean input the
/// error names the first offending post in input order.
pub fn assign_hours(posts: &[MicroblogPost], cfg: &EventConfig) -> Result<Vec<usize>> {
    let assigned = crate::batch::map(posts, |p| hour_of(p, cfg));
    assigned.into_iter().collect()
}

/// Bin cleaned posts into the window's hourly counts.
pub fn bin_hourly(posts: &[MicroblogPost], cfg: &EventConfig) -> Result<TrendSeries> {
    let mut counts = vec![0u64; cfg.window_hours as usize];
    for hour in assign_hours(posts, cfg)? {
        counts[hour] += 1;
    }
    Ok(TrendSeries::new(cfg.event_id.clone(), counts))
}

/// Locate the peak: the earliest bin holding the maximum count.
pub fn find_peak(series: &TrendSeries) -> Result<PeakInfo> {
    if series.total() == 0 {
        return Err(Error::EmptyCorpus);
    }
    let (hour_index, volume) = series
        .counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(h, v)| (h, *v))
        .expect("non-empty series");
    Ok(PeakInfo { hour_index, volume })
}
