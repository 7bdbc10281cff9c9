//! SVG drawing of a mountain range: rotation across, Thurston–Bennequin up.

use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use crate::atlas::MountainRange;

const MARGIN: u32 = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderSpec {
    pub floor: BigInt,
    pub cell: u32,
    pub labels: bool,
}

impl RenderSpec {
    pub fn new(floor: impl Into<BigInt>) -> Self {
        RenderSpec {
            floor: floor.into(),
            cell: 24,
            labels: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("cell size must be positive")]
    ZeroCell,
    #[error("render floor {floor} is above the maximal tb {max_tb}")]
    FloorAboveMax { floor: BigInt, max_tb: BigInt },
}

pub fn render_svg(range: &MountainRange, spec: &RenderSpec) -> Result<String, RenderError> {
    if spec.cell == 0 {
        return Err(RenderError::ZeroCell);
    }
    let peaks = range.peaks();
    let top = range
        .max_tb()
        .cloned()
        .unwrap_or_else(|| spec.floor.clone());
    if spec.floor > top {
        return Err(RenderError::FloorAboveMax {
            floor: spec.floor.clone(),
            max_tb: top,
        });
    }
    // Peaks are drawn even when the floor cuts everything else away.
    let mut points: Vec<(BigInt, BigInt, bool)> = range
        .entries()
        .iter()
        .filter(|(tb, _)| tb >= &spec.floor)
        .map(|(tb, rot)| {
            (
                tb.clone(),
                rot.clone(),
                peaks.contains(&(tb.clone(), rot.clone())),
            )
        })
        .collect();
    for (tb, rot) in &peaks {
        if tb < &spec.floor {
            points.push((tb.clone(), rot.clone(), true));
        }
    }
    let bottom = points
        .iter()
        .map(|p| p.0.clone())
        .min()
        .unwrap_or_else(|| top.clone())
        .min(spec.floor.clone());
    let rot_min = points.iter().map(|p| p.1.clone()).min().unwrap_or_default();
    let rot_max = points.iter().map(|p| p.1.clone()).max().unwrap_or_default();

    let cell = BigInt::from(spec.cell);
    let margin = BigInt::from(MARGIN);
    let x = |rot: &BigInt| &margin + (rot - &rot_min) * &cell;
    let y = |tb: &BigInt| &margin + (&top - tb) * &cell;
    let width = &margin * 2 + (&rot_max - &rot_min) * &cell;
    let height = &margin * 2 + (&top - &bottom) * &cell;
    let r = spec.cell / 4 + 1;
    let peak_r = spec.cell / 3 + 2;

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let axis_y = &height - &margin / 2;
    let axis_x = &margin / 2;
    let _ = writeln!(
        s,
        "<line x1=\"{axis_x}\" y1=\"{axis_y}\" x2=\"{}\" y2=\"{axis_y}\" stroke=\"#888\"/>",
        &width - &margin / 2
    );
    let _ = writeln!(
        s,
        "<line x1=\"{axis_x}\" y1=\"{}\" x2=\"{axis_x}\" y2=\"{axis_y}\" stroke=\"#888\"/>",
        &margin / 2
    );
    if spec.labels {
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">rot</text>",
            &width - &margin / 2,
            &height - 4
        );
        let _ = writeln!(
            s,
            "<text x=\"4\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">tb</text>",
            &margin / 2 - 4
        );
    }
    for (tb, rot, is_peak) in &points {
        if *is_peak {
            let _ = writeln!(
                s,
                "<circle class=\"marker peak\" cx=\"{}\" cy=\"{}\" r=\"{peak_r}\" fill=\"#c0392b\" stroke=\"black\"/>",
                x(rot),
                y(tb)
            );
        } else {
            let _ = writeln!(
                s,
                "<circle class=\"marker\" cx=\"{}\" cy=\"{}\" r=\"{r}\" fill=\"#34495e\"/>",
                x(rot),
                y(tb)
            );
        }
    }
    if spec.labels {
        for (tb, rot) in &peaks {
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">({tb}, {rot})</text>",
                x(rot),
                y(tb) - peak_r - 3
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::mountain_range;
    use crate::builtin::unknot;

    fn markers(svg: &str) -> (usize, usize) {
        (
            svg.matches("class=\"marker").count(),
            svg.matches("class=\"marker peak\"").count(),
        )
    }

    #[test]
    fn unknot_to_minus_three() {
        let range = mountain_range(&unknot(), &BigInt::from(-3)).unwrap();
        let svg = render_svg(&range, &RenderSpec::new(-3)).unwrap();
        assert_eq!(markers(&svg), (6, 1));
        assert!(svg.starts_with("<?xml"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg, render_svg(&range, &RenderSpec::new(-3)).unwrap());
    }

    #[test]
    fn lone_peak_still_drawn() {
        let range = mountain_range(&unknot(), &BigInt::from(-1)).unwrap();
        let spec = RenderSpec {
            labels: false,
            ..RenderSpec::new(-1)
        };
        let svg = render_svg(&range, &spec).unwrap();
        assert_eq!(markers(&svg), (1, 1));
        assert!(!svg.contains("<text"));
    }

    #[test]
    fn bad_specs() {
        let range = mountain_range(&unknot(), &BigInt::from(-2)).unwrap();
        let spec = RenderSpec {
            cell: 0,
            ..RenderSpec::new(-2)
        };
        assert_eq!(render_svg(&range, &spec), Err(RenderError::ZeroCell));
        assert!(matches!(
            render_svg(&range, &RenderSpec::new(0)),
            Err(RenderError::FloorAboveMax { .. })
        ));
    }
}
