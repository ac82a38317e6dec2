//! Orbit pictures: iterates drawn inside the fundamental parallelogram.

use std::fmt::Write as _;
use std::path::Path;

use crate::lattice::Lattice;
use crate::segment::Chord;

/// Refuse to draw more polyline pieces than this.
pub const MAX_PIECES: usize = 10_000;

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 20.0;
const LEGEND_ROW: f64 = 16.0;

/// Splits a chord (lattice coordinates) at the integer grid lines and moves
/// each piece into `[0, 1]²`.
pub fn wrap_pieces(chord: &Chord) -> Vec<[(f64, f64); 2]> {
    let (a, b) = chord.endpoints_f64();
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let mut cuts = vec![0.0, 1.0];
    for (p, d) in [(a.0, dx), (a.1, dy)] {
        if d == 0.0 {
            continue;
        }
        let (lo, hi) = if d > 0.0 { (p, p + d) } else { (p + d, p) };
        let mut k = lo.floor() + 1.0;
        while k < hi {
            cuts.push((k - p) / d);
            k += 1.0;
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let at = |t: f64| (a.0 + t * dx, a.1 + t * dy);
    cuts.windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let mid = at((w[0] + w[1]) / 2.0);
            let cell = (mid.0.floor(), mid.1.floor());
            let (p, q) = (at(w[0]), at(w[1]));
            [(p.0 - cell.0, p.1 - cell.1), (q.0 - cell.0, q.1 - cell.1)]
        })
        .collect()
}

fn color(i: usize, n: usize) -> String {
    let hue = if n <= 1 { 0 } else { 300 * i / (n - 1) };
    format!("hsl({hue},70%,42%)")
}

/// An SVG of the fundamental parallelogram with one color per iterate, a
/// legend of iterate indices and an optional witness marker (lattice
/// coordinates).
pub fn emit_orbit_svg(
    lat: &Lattice,
    iterates: &[Chord],
    witness: Option<(f64, f64)>,
) -> Result<String, String> {
    let pieces: Vec<Vec<[(f64, f64); 2]>> = iterates.iter().map(wrap_pieces).collect();
    let total: usize = pieces.iter().map(Vec::len).sum();
    if total > MAX_PIECES {
        return Err(format!(
            "{total} polyline pieces exceed the cap of {MAX_PIECES}"
        ));
    }
    let corners = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)].map(|p| lat.embed_f64(p));
    let (xmin, xmax) = corners
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), z| {
            (l.min(z.re), h.max(z.re))
        });
    let (ymin, ymax) = corners
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), z| {
            (l.min(z.im), h.max(z.im))
        });
    let scale = (WIDTH - 2.0 * MARGIN) / (xmax - xmin).max(ymax - ymin);
    let plot_h = (ymax - ymin) * scale + 2.0 * MARGIN;
    let height = plot_h + LEGEND_ROW * (iterates.len() as f64 + 1.0);
    let px = |p: (f64, f64)| {
        let z = lat.embed_f64(p);
        (
            MARGIN + (z.re - xmin) * scale,
            plot_h - MARGIN - (z.im - ymin) * scale,
        )
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}">"#
    );
    let outline: Vec<String> = corners
        .iter()
        .map(|z| {
            let p = lat.coords_f64(*z);
            let (x, y) = px(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        s,
        r#"<polygon class="fundamental" points="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        outline.join(" ")
    );
    for (i, ps) in pieces.iter().enumerate() {
        let c = color(i, iterates.len());
        let _ = writeln!(
            s,
            r#"<g class="iterate" data-index="{i}" stroke="{c}" fill="none">"#
        );
        for [p, q] in ps {
            let (x1, y1) = px(*p);
            let (x2, y2) = px(*q);
            let _ = writeln!(s, r#"<polyline points="{x1:.3},{y1:.3} {x2:.3},{y2:.3}"/>"#);
        }
        let _ = writeln!(s, "</g>");
    }
    if let Some(w) = witness {
        let (x, y) = px(w);
        let _ = writeln!(
            s,
            r#"<circle class="witness" cx="{x:.3}" cy="{y:.3}" r="5" fill="none" stroke="red" stroke-width="2"/>"#
        );
    }
    let _ = writeln!(
        s,
        r#"<g class="legend" font-family="monospace" font-size="11">"#
    );
    for i in 0..iterates.len() {
        let y = plot_h + LEGEND_ROW * (i as f64 + 1.0);
        let _ = writeln!(
            s,
            r#"<text x="{MARGIN:.0}" y="{y:.0}" fill="{}">iterate {i}</text>"#,
            color(i, iterates.len())
        );
    }
    let _ = writeln!(s, "</g>\n</svg>");
    Ok(s)
}

pub fn write_svg(path: &Path, svg: &str) -> std::io::Result<()> {
    std::fs::write(path, svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Coord;

    #[test]
    fn empty_picture_is_the_parallelogram() {
        let svg = emit_orbit_svg(&Lattice::square(), &[], None).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert_eq!(svg.matches("<polyline").count(), 0);
    }

    #[test]
    fn wrapping_splits_at_grid_lines() {
        let c = Chord::new(Coord::ratio(9, 10, 1, 2), Coord::ratio(21, 10, 1, 2));
        let pieces = wrap_pieces(&c);
        assert_eq!(pieces.len(), 3);
        for [p, q] in pieces {
            for v in [p.0, p.1, q.0, q.1] {
                assert!((-1e-12..=1.0 + 1e-12).contains(&v));
            }
        }
    }

    #[test]
    fn deterministic() {
        let c = Chord::new(Coord::ratio(1, 10, 1, 5), Coord::ratio(3, 2, 7, 5));
        let a = emit_orbit_svg(
            &Lattice::hexagonal(),
            std::slice::from_ref(&c),
            Some((0.5, 0.5)),
        )
        .unwrap();
        let b = emit_orbit_svg(&Lattice::hexagonal(), &[c], Some((0.5, 0.5))).unwrap();
        assert_eq!(a, b);
        assert!(a.contains(r#"class="witness""#));
    }
}
