//! SVG rendering of a cluster model: one polyline per reference spectral
//! function on axes [0, 1] × [0, max value].

use spectromerge::incremental::ClusterModel;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 110.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 44.0;

pub fn render_model_svg(model: &ClusterModel, width: u32, height: u32) -> String {
    let w = width as f64;
    let h = height as f64;
    let plot_w = w - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = h - MARGIN_TOP - MARGIN_BOTTOM;
    let y_max = model
        .references()
        .iter()
        .flat_map(|f| f.values().iter().copied())
        .fold(0.0_f64, f64::max)
        .max(1e-9);

    let sx = |x: f64| MARGIN_LEFT + x * plot_w;
    let sy = |v: f64| MARGIN_TOP + (1.0 - v / y_max) * plot_h;

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    ));

    // Axes.
    svg.push_str(&format!(
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        sx(0.0), sy(0.0), sx(1.0), sy(0.0)
    ));
    svg.push_str(&format!(
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        sx(0.0), sy(0.0), sx(0.0), sy(y_max)
    ));
    for (t, label) in [(0.0, "0"), (0.5, "0.5"), (1.0, "1")] {
        svg.push_str(&format!(
            "  <line x1=\"{0:.2}\" y1=\"{1:.2}\" x2=\"{0:.2}\" y2=\"{2:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            sx(t), sy(0.0), sy(0.0) + 5.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{label}</text>\n",
            sx(t), sy(0.0) + 18.0
        ));
    }
    for (v, label) in [(0.0, "0".to_string()), (y_max, format!("{y_max:.4}"))] {
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{label}</text>\n",
            sx(0.0) - 6.0, sy(v) + 4.0
        ));
    }
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">x</text>\n",
        sx(0.5), h - 8.0
    ));

    // One polyline and legend entry per cluster.
    for (c, f) in model.references().iter().enumerate() {
        let color = PALETTE[c % PALETTE.len()];
        let points: Vec<String> = f
            .knots()
            .iter()
            .zip(f.values())
            .map(|(x, v)| format!("{:.3},{:.3}", sx(*x), sy(*v)))
            .collect();
        svg.push_str(&format!(
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            points.join(" ")
        ));
        let ly = MARGIN_TOP + 16.0 * c as f64 + 10.0;
        svg.push_str(&format!(
            "  <line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"3\"/>\n",
            w - MARGIN_RIGHT + 10.0, w - MARGIN_RIGHT + 34.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">cluster {c}</text>\n",
            w - MARGIN_RIGHT + 40.0, ly + 4.0
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use spectromerge::laplacian::{LaplacianKind, Spectrum};
    use spectromerge::spectra::{build_spectral_function, MatchMethod};

    fn toy_model() -> ClusterModel {
        let refs: Vec<_> = [[0.0, 1.0, 4.0], [0.0, 2.0, 6.0], [0.0, 0.5, 2.0]]
            .iter()
            .map(|evs| {
                let s = Spectrum::from_eigenvalues(LaplacianKind::Combinatorial, evs.to_vec())
                    .unwrap();
                build_spectral_function(&s, MatchMethod::Clssal).unwrap()
            })
            .collect();
        let json = serde_json::json!({
            "method": "clssal",
            "k": 3,
            "references": refs.iter().enumerate().map(|(i, f)| serde_json::json!({
                "cluster": i,
                "source_n": f.source_n(),
                "knots": f.knots(),
                "values": f.values(),
            })).collect::<Vec<_>>(),
        });
        ClusterModel::from_json_str(&json.to_string()).unwrap()
    }

    #[test]
    fn svg_has_one_polyline_per_cluster_with_distinct_colors() {
        let svg = render_model_svg(&toy_model(), 640, 480);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        let polylines = svg.matches("<polyline").count();
        assert_eq!(polylines, 3);
        for color in &PALETTE[..3] {
            assert!(svg.contains(color), "missing {color}");
        }
        // Tags are balanced for the elements used here.
        for tag in ["text", "line"] {
            let opens = svg.matches(&format!("<{tag} ")).count();
            let closes = svg.matches(&format!("</{tag}>")).count()
                + svg.matches("/>").count();
            assert!(closes >= opens, "unbalanced <{tag}>");
        }
    }

    #[test]
    fn svg_is_deterministic() {
        let model = toy_model();
        assert_eq!(render_model_svg(&model, 640, 480), render_model_svg(&model, 640, 480));
    }
}
