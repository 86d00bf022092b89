//! Deterministic SVG drawing of an agent configuration.

use std::fmt::Write as _;

use crate::topology::AgentConfiguration;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;
const NODE_RADIUS: f64 = 9.0;

/// Nodes at their positions with id labels, links as lines whose stroke
/// opacity equals the link weight. `ghosts` are drawn as dashed outlines
/// (e.g. alternative positions of a mobile agent).
pub fn render_svg(config: &AgentConfiguration, ghosts: &[[f64; 2]]) -> String {
    let points: Vec<[f64; 2]> = config
        .agents
        .iter()
        .map(|a| a.position())
        .chain(ghosts.iter().copied())
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in &points {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(p[1]);
        y1 = y1.max(p[1]);
    }
    let span = (x1 - x0).max(y1 - y0);
    let scale = if span > 0.0 {
        (SIZE - 2.0 * MARGIN) / span
    } else {
        1.0
    };
    let map = |p: [f64; 2]| {
        (
            MARGIN + (p[0] - x0) * scale,
            SIZE - MARGIN - (p[1] - y0) * scale,
        )
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"  <g stroke="black" stroke-width="2">"#);
    let n = config.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let w = config.weight(i, j);
            if w <= 0.0 {
                continue;
            }
            let (ax, ay) = map(config.agents[i].position());
            let (bx, by) = map(config.agents[j].position());
            let _ = writeln!(
                svg,
                r#"    <line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke-opacity="{w:.4}"/>"#
            );
        }
    }
    let _ = writeln!(svg, "  </g>");
    for g in ghosts {
        let (cx, cy) = map(*g);
        let _ = writeln!(
            svg,
            r#"  <circle cx="{cx:.2}" cy="{cy:.2}" r="{NODE_RADIUS}" fill="none" stroke="gray" stroke-dasharray="3 2"/>"#
        );
    }
    for agent in &config.agents {
        let (cx, cy) = map(agent.position());
        let _ = writeln!(
            svg,
            r#"  <circle cx="{cx:.2}" cy="{cy:.2}" r="{NODE_RADIUS}" fill="steelblue" stroke="black"/>"#
        );
        let _ = writeln!(
            svg,
            r#"  <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{}</text>"#,
            cx + NODE_RADIUS + 2.0,
            cy - NODE_RADIUS - 2.0,
            escape(&agent.id)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}
