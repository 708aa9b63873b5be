//! Minimal standalone SVG line charts from CSV time series: one polyline
//! per requested column over the iteration axis, plus a legend.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("input CSV is empty")]
    Empty,
    #[error("column `{0}` not found in CSV header")]
    MissingColumn(String),
    #[error("need >= 2 data points, got {0}")]
    TooFewPoints(usize),
    #[error("row {row}: bad numeric value `{value}`")]
    BadValue { row: usize, value: String },
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 40.0;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Render the named columns of a headered CSV (x axis = first column) to a
/// standalone SVG document.
pub fn render_csv_columns(csv_text: &str, columns: &[String]) -> Result<String, PlotError> {
    let mut lines = csv_text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or(PlotError::Empty)?;
    let names: Vec<&str> = header.split(',').collect();

    let col_idx: Vec<usize> = columns
        .iter()
        .map(|c| {
            names
                .iter()
                .position(|n| n == c)
                .ok_or_else(|| PlotError::MissingColumn(c.clone()))
        })
        .collect::<Result<_, _>>()?;

    let mut xs: Vec<f64> = Vec::new();
    let mut series: Vec<Vec<f64>> = vec![Vec::new(); columns.len()];
    for (row, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |i: usize| -> Result<f64, PlotError> {
            fields
                .get(i)
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| PlotError::BadValue {
                    row: row + 2,
                    value: fields.get(i).unwrap_or(&"").to_string(),
                })
        };
        xs.push(parse(0)?);
        for (s, &i) in series.iter_mut().zip(&col_idx) {
            s.push(parse(i)?);
        }
    }
    if xs.len() < 2 {
        return Err(PlotError::TooFewPoints(xs.len()));
    }

    let (x_min, x_max) = extent(&xs);
    let all_y: Vec<f64> = series.iter().flatten().copied().collect();
    let (mut y_min, mut y_max) = extent(&all_y);
    if y_min == y_max {
        y_min -= 1.0;
        y_max += 1.0;
    }

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" \
         width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    // axes
    svg.push_str(&format!(
        "  <line x1=\"{l}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n  \
         <line x1=\"{l}\" y1=\"{t}\" x2=\"{l}\" y2=\"{b}\" stroke=\"black\"/>\n",
        l = MARGIN_LEFT,
        r = WIDTH - MARGIN_RIGHT,
        t = MARGIN_TOP,
        b = HEIGHT - MARGIN_BOTTOM,
    ));
    // axis extent labels
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>\n",
        MARGIN_LEFT,
        HEIGHT - MARGIN_BOTTOM + 16.0,
        trim_num(x_min)
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
        WIDTH - MARGIN_RIGHT,
        HEIGHT - MARGIN_BOTTOM + 16.0,
        trim_num(x_max)
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
        MARGIN_LEFT - 6.0,
        HEIGHT - MARGIN_BOTTOM,
        trim_num(y_min)
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
        MARGIN_LEFT - 6.0,
        MARGIN_TOP + 10.0,
        trim_num(y_max)
    ));

    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(s)
            .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        svg.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.join(" ")
        ));
        // legend entry
        let ly = MARGIN_TOP + 14.0 + 18.0 * k as f64;
        svg.push_str(&format!(
            "  <line x1=\"{x1}\" y1=\"{ly}\" x2=\"{x2}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>\n  \
             <text x=\"{tx}\" y=\"{ty}\" font-size=\"12\">{name}</text>\n",
            x1 = WIDTH - MARGIN_RIGHT + 10.0,
            x2 = WIDTH - MARGIN_RIGHT + 34.0,
            tx = WIDTH - MARGIN_RIGHT + 40.0,
            ty = ly + 4.0,
            name = xml_escape(&columns[k]),
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn extent(values: &[f64]) -> (f64, f64) {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (min, max)
}

fn trim_num(v: f64) -> String {
    if v == v.trunc() {
        format!("{}", v as i64)
    } else {
        format!("{v:.3}")
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    const CSV: &str = "iteration,mean_fitness,diversity\n0,0.0,1\n1,3.5,12\n2,7.0,30\n3,12.0,8\n";

    fn cols(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn renders_one_polyline_per_column() {
        let svg = render_csv_columns(CSV, &cols(&["mean_fitness", "diversity"])).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">mean_fitness</text>"));
        assert!(svg.contains(">diversity</text>"));
    }

    #[test]
    fn missing_column_is_an_error() {
        let err = render_csv_columns(CSV, &cols(&["nope"])).unwrap_err();
        assert!(matches!(err, PlotError::MissingColumn(_)));
    }

    #[test]
    fn single_row_is_an_error() {
        let one = "iteration,mean_fitness\n0,1.0\n";
        assert!(matches!(
            render_csv_columns(one, &cols(&["mean_fitness"])),
            Err(PlotError::TooFewPoints(1))
        ));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(render_csv_columns("", &cols(&["x"])), Err(PlotError::Empty)));
    }

    #[test]
    fn output_is_balanced_xml() {
        // crude well-formedness check: every opened tag closes
        let svg = render_csv_columns(CSV, &cols(&["mean_fitness"])).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        let opens = svg.matches("<text").count();
        let closes = svg.matches("</text>").count();
        assert_eq!(opens, closes);
    }
}
