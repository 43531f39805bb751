//! Minimal deterministic SVG line plots: axes, optional log scaling,
//! polylines, and a legend. No external plotting dependency, and the byte
//! output is a pure function of the input series.

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 30.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;
const PALETTE: &[&str] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    .as_slice();

fn fmt2(v: f64) -> String {
    format!("{v:.2}")
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (1e-3..1e5).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:.2e}")
    }
}

struct Axis {
    min: f64,
    max: f64,
    log: bool,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>, log: bool) -> Axis {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            if v.is_finite() && (!log || v > 0.0) {
                min = min.min(v);
                max = max.max(v);
            }
        }
        if !min.is_finite() || !max.is_finite() {
            min = 0.0;
            max = 1.0;
        }
        if min == max {
            let pad = if min == 0.0 { 1.0 } else { min.abs() * 0.1 };
            min -= pad;
            max += pad;
            if log && min <= 0.0 {
                min = max / 10.0;
            }
        }
        Axis { min, max, log }
    }

    fn coord(&self, v: f64) -> Option<f64> {
        if self.log {
            if v <= 0.0 {
                return None;
            }
            let (a, b, x) = (self.min.ln(), self.max.ln(), v.ln());
            Some((x - a) / (b - a))
        } else {
            Some((v - self.min) / (self.max - self.min))
        }
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let lo = self.min.log10().floor() as i32;
            let hi = self.max.log10().ceil() as i32;
            (lo..=hi)
                .map(|k| 10f64.powi(k))
                .filter(|&v| v >= self.min * 0.999 && v <= self.max * 1.001)
                .collect()
        } else {
            (0..=4)
                .map(|k| self.min + (self.max - self.min) * k as f64 / 4.0)
                .collect()
        }
    }
}

pub fn render_line_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    log_x: bool,
    log_y: bool,
    series: &[Series],
) -> String {
    let xs = series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
    let ys = series.iter().flat_map(|s| s.points.iter().map(|p| p.1));
    let x_axis = Axis::new(xs, log_x);
    let y_axis = Axis::new(ys, log_y);
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let px = |u: f64| MARGIN_L + u * plot_w;
    let py = |u: f64| HEIGHT - MARGIN_B - u * plot_h;

    let mut svg = String::with_capacity(8192);
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-family=\"monospace\" font-size=\"16\" \
         text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        xml_escape(title)
    ));

    // frame
    svg.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"black\" stroke-width=\"1\"/>\n",
        fmt2(MARGIN_L),
        fmt2(MARGIN_T),
        fmt2(plot_w),
        fmt2(plot_h)
    ));

    // ticks and grid
    for t in x_axis.ticks() {
        if let Some(u) = x_axis.coord(t) {
            let x = px(u);
            svg.push_str(&format!(
                "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#cccccc\" \
                 stroke-width=\"0.5\"/>\n",
                fmt2(x),
                fmt2(MARGIN_T),
                fmt2(HEIGHT - MARGIN_B)
            ));
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" \
                 text-anchor=\"middle\">{}</text>\n",
                fmt2(x),
                fmt2(HEIGHT - MARGIN_B + 16.0),
                tick_label(t)
            ));
        }
    }
    for t in y_axis.ticks() {
        if let Some(u) = y_axis.coord(t) {
            let y = py(u);
            svg.push_str(&format!(
                "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#cccccc\" \
                 stroke-width=\"0.5\"/>\n",
                fmt2(y),
                fmt2(MARGIN_L),
                fmt2(WIDTH - MARGIN_R)
            ));
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" \
                 text-anchor=\"end\">{}</text>\n",
                fmt2(MARGIN_L - 6.0),
                fmt2(y + 4.0),
                tick_label(t)
            ));
        }
    }

    // axis labels
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"13\" \
         text-anchor=\"middle\">{}</text>\n",
        fmt2(MARGIN_L + plot_w / 2.0),
        fmt2(HEIGHT - 12.0),
        xml_escape(x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{}\" font-family=\"monospace\" font-size=\"13\" \
         text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>\n",
        fmt2(MARGIN_T + plot_h / 2.0),
        fmt2(MARGIN_T + plot_h / 2.0),
        xml_escape(y_label)
    ));

    // polylines
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts = String::new();
        for &(x, y) in &s.points {
            if let (Some(ux), Some(uy)) = (x_axis.coord(x), y_axis.coord(y)) {
                pts.push_str(&format!("{},{} ", fmt2(px(ux)), fmt2(py(uy))));
            }
        }
        if !pts.is_empty() {
            svg.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" \
                 stroke-width=\"1.5\"/>\n",
                pts.trim_end()
            ));
        }
    }

    // legend
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = MARGIN_T + 14.0 + 16.0 * i as f64;
        let x = WIDTH - MARGIN_R - 150.0;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" \
             stroke-width=\"2\"/>\n",
            fmt2(x),
            fmt2(y - 4.0),
            fmt2(x + 18.0),
            fmt2(y - 4.0)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\">{}</text>\n",
            fmt2(x + 24.0),
            fmt2(y),
            xml_escape(&s.label)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_is_deterministic() {
        let series = vec![Series {
            label: "mean".to_string(),
            points: vec![(10.0, 1.0), (100.0, 2.5), (1000.0, 3.1)],
        }];
        let a = render_line_plot("t", "N", "mean", true, false, &series);
        let b = render_line_plot("t", "N", "mean", true, false, &series);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("polyline"));
    }

    #[test]
    fn log_axis_skips_nonpositive_points() {
        let series = vec![Series {
            label: "r".to_string(),
            points: vec![(0.0, 1.0), (10.0, 2.0), (100.0, 3.0)],
        }];
        let svg = render_line_plot("t", "N", "r", true, false, &series);
        assert!(svg.contains("polyline"));
    }
}
