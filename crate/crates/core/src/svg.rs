//! Static SVG rendering of polygons in the valuation plane. Coordinates are
//! transformed exactly in rational arithmetic and only rounded to six
//! decimal places at emission; the exact vertices ride along in a metadata
//! block. nu1 runs right, nu2 runs up.

use serde_json::json;

use crate::polygon::Polygon;
use crate::rat::Rat;

pub struct SvgLayer<'a> {
    pub polygon: &'a Polygon,
    pub fill: &'a str,
    pub stroke: &'a str,
    pub label: &'a str,
}

const VIEW: i64 = 480;
const PAD: i64 = 40;

pub fn render_scene(layers: &[SvgLayer]) -> String {
    let mut min_x = Rat::zero();
    let mut min_y = Rat::zero();
    let mut max_x = Rat::one();
    let mut max_y = Rat::one();
    for layer in layers {
        if let Some((lo, hi)) = layer.polygon.bounds() {
            if lo.0 < min_x {
                min_x = lo.0;
            }
            if lo.1 < min_y {
                min_y = lo.1;
            }
            if hi.0 > max_x {
                max_x = hi.0;
            }
            if hi.1 > max_y {
                max_y = hi.1;
            }
        }
    }
    let span_x = &max_x - &min_x;
    let span_y = &max_y - &min_y;
    let inner = Rat::from_int(VIEW - 2 * PAD);
    let scale = {
        let sx = &inner / &span_x;
        let sy = &inner / &span_y;
        sx.min(sy)
    };
    let to_svg = |x: &Rat, y: &Rat| -> (String, String) {
        let sx = &Rat::from_int(PAD) + &(&(x - &min_x) * &scale);
        let sy = &Rat::from_int(VIEW - PAD) - &(&(y - &min_y) * &scale);
        (sx.decimal(6), sy.decimal(6))
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {VIEW} {VIEW}\" width=\"{VIEW}\" height=\"{VIEW}\">\n"
    ));

    let meta: Vec<serde_json::Value> = layers
        .iter()
        .map(|l| json!({"label": l.label, "polygon": l.polygon}))
        .collect();
    out.push_str(&format!(
        "<metadata>{}</metadata>\n",
        serde_json::to_string(&json!({ "exact": meta })).expect("metadata")
    ));

    // axes through the origin when visible
    let zero = Rat::zero();
    if min_x <= zero && zero <= max_x {
        let (x0, y0) = to_svg(&zero, &min_y);
        let (x1, y1) = to_svg(&zero, &max_y);
        out.push_str(&format!(
            "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y1}\" stroke=\"#999\" stroke-width=\"1\"/>\n"
        ));
    }
    if min_y <= zero && zero <= max_y {
        let (x0, y0) = to_svg(&min_x, &zero);
        let (x1, y1) = to_svg(&max_x, &zero);
        out.push_str(&format!(
            "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y1}\" stroke=\"#999\" stroke-width=\"1\"/>\n"
        ));
    }

    for layer in layers {
        let verts = layer.polygon.vertices();
        if verts.is_empty() {
            continue;
        }
        let pts: Vec<String> = verts
            .iter()
            .map(|(x, y)| {
                let (sx, sy) = to_svg(x, y);
                format!("{sx},{sy}")
            })
            .collect();
        if verts.len() >= 3 {
            out.push_str(&format!(
                "<polygon points=\"{}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"1.5\"><title>{}</title></polygon>\n",
                pts.join(" "),
                layer.fill,
                layer.stroke,
                layer.label
            ));
        } else {
            out.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"><title>{}</title></polyline>\n",
                pts.join(" "),
                layer.stroke,
                layer.label
            ));
        }
    }

    // corner annotations with the exact window
    out.push_str(&format!(
        "<text x=\"{PAD}\" y=\"{}\" font-size=\"11\" fill=\"#333\">nu1 in [{min_x}, {max_x}]  nu2 in [{min_y}, {max_y}]</text>\n",
        VIEW - 12
    ));
    out.push_str("</svg>\n");
    out
}
