//! Minimal self-contained SVG line plots.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

#[derive(Clone, Debug, Default)]
pub struct PlotStyle {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    /// Horizontal reference line `y = asymptote`.
    pub asymptote: Option<f64>,
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut lo, mut hi) = values
            .map(|v| if log { v.log10() } else { v })
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if hi - lo < 1e-12 * lo.abs().max(1.0) {
            let pad = if log { 0.5 } else { 0.5 * lo.abs().max(1.0) };
            lo -= pad;
            hi += pad;
        } else {
            let pad = 0.05 * (hi - lo);
            lo -= pad;
            hi += pad;
        }
        Self { lo, hi, log }
    }

    fn unit(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    /// Tick positions in data units.
    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (self.lo.ceil() as i32, self.hi.floor() as i32);
            if b > a {
                return (a..=b).map(|e| 10f64.powi(e)).collect();
            }
            return (0..5)
                .map(|i| 10f64.powf(self.lo + (self.hi - self.lo) * (i as f64 + 0.5) / 5.0))
                .collect();
        }
        let step = nice_step((self.hi - self.lo) / 5.0);
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        (first..=last).map(|k| k as f64 * step).collect()
    }
}

fn nice_step(raw: f64) -> f64 {
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let nice = if f <= 1.0 {
        1.0
    } else if f <= 2.0 {
        2.0
    } else if f <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-3..1e5).contains(&a) {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `points` as a polyline with markers. Returns `None` when no
/// point survives (non-finite values and, on log axes, non-positive ones are
/// dropped). A single point is drawn as a lone marker.
pub fn render(points: &[(f64, f64)], style: &PlotStyle) -> Option<String> {
    let ok = |v: f64, log: bool| v.is_finite() && (!log || v > 0.0);
    let pts: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(x, y)| ok(x, style.log_x) && ok(y, style.log_y))
        .collect();
    if pts.is_empty() {
        return None;
    }
    let asymptote = style.asymptote.filter(|a| ok(*a, style.log_y));
    let x = Axis::new(pts.iter().map(|p| p.0), style.log_x);
    let y = Axis::new(pts.iter().map(|p| p.1).chain(asymptote), style.log_y);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |v: f64| LEFT + x.unit(v) * pw;
    let sy = |v: f64| TOP + (1.0 - y.unit(v)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, "<!-- mgcl {} -->", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(&style.title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for t in x.ticks() {
        let px = sx(t);
        let _ = writeln!(
            s,
            r##"<line x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{:.2}" stroke="#ddd"/><text x="{px:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"##,
            TOP + ph,
            TOP + ph + 16.0,
            label(t)
        );
    }
    for t in y.ticks() {
        let py = sy(t);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            py + 4.0,
            label(t)
        );
    }
    let axis_note = |log: bool| if log { " (log)" } else { "" };
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13">{}{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 14.0,
        escape(&style.x_label),
        axis_note(style.log_x)
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 {:.2})">{}{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&style.y_label),
        axis_note(style.log_y)
    );
    if let Some(a) = asymptote {
        let py = sy(a);
        let _ = writeln!(
            s,
            r#"<line class="asymptote" x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="firebrick" stroke-dasharray="6 4"/><text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11" fill="firebrick">y = {}</text>"#,
            LEFT + pw,
            LEFT + pw - 4.0,
            py - 4.0,
            label(a)
        );
    }
    if pts.len() > 1 {
        let path: Vec<String> = pts.iter().map(|&(a, b)| format!("{:.2},{:.2}", sx(a), sy(b))).collect();
        let _ = writeln!(
            s,
            r#"<polyline class="data" points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
            path.join(" ")
        );
    }
    for &(a, b) in &pts {
        let _ = writeln!(
            s,
            r#"<circle class="marker" cx="{:.2}" cy="{:.2}" r="3.5" fill="steelblue"/>"#,
            sx(a),
            sy(b)
        );
    }
    s.push_str("</svg>\n");
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_data_renders_nothing() {
        assert!(render(&[], &PlotStyle::default()).is_none());
        let log = PlotStyle {
            log_y: true,
            ..Default::default()
        };
        assert!(render(&[(1.0, 0.0), (2.0, -1.0)], &log).is_none());
    }

    #[test]
    fn single_point_has_marker_and_no_line() {
        let s = render(&[(2.0, 3.0)], &PlotStyle::default()).unwrap();
        assert_eq!(s.matches("class=\"marker\"").count(), 1);
        assert!(!s.contains("polyline"));
    }

    #[test]
    fn asymptote_is_drawn() {
        let pts = [(2.0, 6.4), (4.0, 7.5), (8.0, 7.9)];
        let s = render(
            &pts,
            &PlotStyle {
                asymptote: Some(8.0),
                log_x: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(s.contains("class=\"asymptote\""));
        assert!(s.contains("y = 8"));
        assert_eq!(s.matches("class=\"marker\"").count(), 3);
        assert!(s.starts_with("<svg"));
        assert!(!s.contains("href"));
    }

    #[test]
    fn loglog_line_is_straight() {
        let pts: Vec<(f64, f64)> = (1..=6).map(|p| {
            let r = 2f64.powi(p);
            (r, r.powi(-2))
        }).collect();
        let s = render(
            &pts,
            &PlotStyle {
                log_x: true,
                log_y: true,
                ..Default::default()
            },
        )
        .unwrap();
        let line = s.lines().find(|l| l.contains("polyline")).unwrap();
        let coords: Vec<(f64, f64)> = line
            .split('"')
            .nth(3)
            .unwrap()
            .split(' ')
            .map(|p| {
                let (a, b) = p.split_once(',').unwrap();
                (a.parse().unwrap(), b.parse().unwrap())
            })
            .collect();
        let slope = |i: usize| (coords[i + 1].1 - coords[i].1) / (coords[i + 1].0 - coords[i].0);
        for i in 1..coords.len() - 1 {
            assert!((slope(i) - slope(0)).abs() < 0.02 * slope(0).abs());
        }
    }

    #[test]
    fn ticks_cover_the_range() {
        let a = Axis::new([0.0, 8.0].into_iter(), false);
        let t = a.ticks();
        assert!(t.len() >= 3 && t.iter().all(|v| *v >= a.lo && *v <= a.hi));
        let l = Axis::new([2.0, 128.0].into_iter(), true);
        assert_eq!(l.ticks(), vec![10.0, 100.0]);
    }
}
