//! Deterministic SVG charts.
//!
//! Charts are plain data renderings on a fixed 800x400 canvas: no embedded
//! fonts, no timestamps, all coordinates formatted to two decimals, so the
//! same data always produces byte-identical files.

use std::fmt::Write as _;

use crate::damage::LevelDistribution;
use crate::sentiment::SentimentTrend;
use crate::trend::TrendSeries;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 780.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 360.0;

struct Canvas {
    body: String,
}

impl Canvas {
    fn new(title: &str) -> Canvas {
        let mut body = String::new();
        let _ = writeln!(
            body,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
        );
        let _ = writeln!(body, "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>");
        let _ = writeln!(
            body,
            "  <text x=\"{:.2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>",
            WIDTH / 2.0,
            escape(title)
        );
        Canvas { body }
    }

    fn axes(&mut self) {
        let _ = writeln!(
            self.body,
            "  <line x1=\"{LEFT:.2}\" y1=\"{BOTTOM:.2}\" x2=\"{RIGHT:.2}\" y2=\"{BOTTOM:.2}\" stroke=\"#333333\" stroke-width=\"1\"/>"
        );
        let _ = writeln!(
            self.body,
            "  <line x1=\"{LEFT:.2}\" y1=\"{TOP:.2}\" x2=\"{LEFT:.2}\" y2=\"{BOTTOM:.2}\" stroke=\"#333333\" stroke-width=\"1\"/>"
        );
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, size: u32, content: &str) {
        let _ = writeln!(
            self.body,
            "  <text x=\"{x:.2}\" y=\"{y:.2}\" font-family=\"sans-serif\" font-size=\"{size}\" text-anchor=\"{anchor}\">{}</text>",
            escape(content)
        );
    }

    fn polyline(&mut self, points: &[(f64, f64)], color: &str) {
        let mut attr = String::new();
        for (i, (x, y)) in points.iter().enumerate() {
            if i > 0 {
                attr.push(' ');
            }
            let _ = write!(attr, "{x:.2},{y:.2}");
        }
        let _ = writeln!(
            self.body,
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{attr}\"/>"
        );
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, color: &str) {
        let _ = writeln!(
            self.body,
            "  <rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"{color}\"/>"
        );
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// X position for bin `i` of `n` along the plot area.
fn x_at(i: usize, n: usize) -> f64 {
    if n <= 1 {
        (LEFT + RIGHT) / 2.0
    } else {
        LEFT + (RIGHT - LEFT) * i as f64 / (n - 1) as f64
    }
}

/// Y position for `value` on a 0..=max scale.
fn y_at(value: f64, max: f64) -> f64 {
    let max = if max <= 0.0 { 1.0 } else { max };
    BOTTOM - (BOTTOM - TOP) * (value / max)
}

fn series_points(values: &[u64], max: u64) -> Vec<(f64, f64)> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| (x_at(i, values.len()), y_at(*v as f64, max as f64)))
        .collect()
}

fn hour_ticks(canvas: &mut Canvas, n: usize) {
    let step = if n > 12 { 6 } else { 1 };
    for i in (0..n).step_by(step) {
        canvas.text(x_at(i, n), BOTTOM + 18.0, "middle", 11, &i.to_string());
    }
    canvas.text((LEFT + RIGHT) / 2.0, BOTTOM + 34.0, "middle", 12, "hours after origin");
}

/// Line chart of hourly post volume.
pub fn trend_chart(series: &TrendSeries) -> String {
    let counts = series.counts();
    let max = counts.iter().copied().max().unwrap_or(0);
    let mut canvas = Canvas::new(&format!("Hourly post volume: {}", series.event_id()));
    canvas.axes();
    canvas.text(LEFT - 8.0, TOP + 4.0, "end", 11, &max.to_string());
    canvas.text(LEFT - 8.0, BOTTOM + 4.0, "end", 11, "0");
    hour_ticks(&mut canvas, counts.len());
    canvas.polyline(&series_points(counts, max), "#c0392b");
    canvas.finish()
}

/// Line chart of per-hour positive and negative post counts.
pub fn sentiment_chart(trend: &SentimentTrend) -> String {
    let pos: Vec<u64> = trend.hours().iter().map(|h| h.n_positive).collect();
    let neg: Vec<u64> = trend.hours().iter().map(|h| h.n_negative).collect();
    let max = pos.iter().chain(neg.iter()).copied().max().unwrap_or(0);
    let mut canvas = Canvas::new(&format!("Hourly sentiment: {}", trend.event_id()));
    canvas.axes();
    canvas.text(LEFT - 8.0, TOP + 4.0, "end", 11, &max.to_string());
    canvas.text(LEFT - 8.0, BOTTOM + 4.0, "end", 11, "0");
    hour_ticks(&mut canvas, pos.len());
    canvas.polyline(&series_points(&pos, max), "#27ae60");
    canvas.polyline(&series_points(&neg, max), "#c0392b");
    canvas.text(RIGHT - 120.0, TOP + 4.0, "start", 12, "positive");
    canvas.rect(RIGHT - 140.0, TOP - 4.0, 12.0, 4.0, "#27ae60");
    canvas.text(RIGHT - 120.0, TOP + 20.0, "start", 12, "negative");
    canvas.rect(RIGHT - 140.0, TOP + 12.0, 12.0, 4.0, "#c0392b");
    canvas.finish()
}

/// Bar chart of the disaster-level distribution, most severe level first.
pub fn distribution_chart(dist: &LevelDistribution) -> String {
    let entries = dist.in_emission_order();
    let max = entries.iter().map(|(_, e)| e.count).max().unwrap_or(0);
    let mut canvas = Canvas::new("Disaster-level distribution");
    canvas.axes();
    canvas.text(LEFT - 8.0, TOP + 4.0, "end", 11, &max.to_string());
    canvas.text(LEFT - 8.0, BOTTOM + 4.0, "end", 11, "0");
    let slot = (RIGHT - LEFT) / entries.len() as f64;
    for (i, (level, entry)) in entries.iter().enumerate() {
        let x = LEFT + slot * i as f64 + slot * 0.2;
        let width = slot * 0.6;
        let top = y_at(entry.count as f64, max as f64);
        canvas.rect(x, top, width, BOTTOM - top, "#2c6e91");
        let center = LEFT + slot * i as f64 + slot / 2.0;
        canvas.text(center, BOTTOM + 18.0, "middle", 12, level.name());
        let label = match entry.proportion {
            Some(p) => format!("{} ({:.2})", entry.count, p),
            None => entry.count.to_string(),
        };
        canvas.text(center, top - 6.0, "middle", 11, &label);
    }
    canvas.finish()
}
