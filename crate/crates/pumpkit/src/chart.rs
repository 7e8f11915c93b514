//! Stack-height charts of a run, in ASCII and SVG.
//!
//! The horizontal axis is the path position `t = 0..=|π|`, the vertical axis
//! the stack height `s_t`. ASCII output max-pools long runs down to
//! [`MAX_COLUMNS`] columns; SVG output always draws every position.

use std::fmt::Write as _;

use pumpkit_core::extract::{Decomposition, Witness};
use pumpkit_core::level::LevelTriple;
use pumpkit_core::runner::RunPath;

pub const MAX_COLUMNS: usize = 400;
pub const MAX_ROWS: usize = 40;

#[derive(Clone, Debug, Default)]
pub struct Annotation {
    pub level: Option<LevelTriple>,
    pub decomposition: Option<Decomposition>,
}

/// What a chart needs from a run.
#[derive(Clone, Debug)]
pub struct Chart {
    pub profile: Vec<usize>,
    /// Letter read by step `t`, `None` for ε-steps.
    pub letters: Vec<Option<char>>,
    pub annotation: Option<Annotation>,
}

impl Chart {
    pub fn from_path(path: &RunPath, annotation: Option<Annotation>) -> Self {
        let read = path.letters_read();
        let letters = read.windows(2).map(|w| (w[1] > w[0]).then(|| path.word()[w[0]])).collect();
        Self { profile: path.profile().to_vec(), letters, annotation }
    }

    fn path_len(&self) -> usize {
        self.profile.len().saturating_sub(1)
    }

    fn witness(&self) -> Option<&Witness> {
        self.annotation.as_ref()?.decomposition.as_ref().map(|d| &d.witness)
    }

    fn level(&self) -> Option<LevelTriple> {
        match self.witness() {
            Some(Witness::Case2 { triple, .. }) => Some(*triple),
            _ => self.annotation.as_ref()?.level,
        }
    }

    /// Part letter (`u`…`z`) of each step.
    fn part_of_steps(&self) -> Option<Vec<char>> {
        let cuts = self.witness()?.path_cuts(self.path_len());
        Some(
            (0..self.path_len())
                .map(|t| match cuts.iter().position(|&c| t < c) {
                    Some(idx) => b"uvxy"[idx] as char,
                    None => 'z',
                })
                .collect(),
        )
    }

    fn legend(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(t) = self.level() {
            out.push(format!("level: i={} j={} k={} N={}", t.i, t.j, t.k, t.n));
        }
        match self.witness() {
            Some(Witness::Case2 { g, h, lp_g, lp_h, fp_h, fp_g, .. }) => out.push(format!(
                "pump: g={g} h={h} lp(g)={lp_g} lp(h)={lp_h} fp(h)={fp_h} fp(g)={fp_g}"
            )),
            Some(Witness::Case1 { i, j, depth, .. }) => {
                out.push(format!("pump: depth-{depth} configuration repeats at {i} and {j}"))
            }
            None => {}
        }
        if let Some(d) = self.annotation.as_ref().and_then(|a| a.decomposition.as_ref()) {
            let [u, v, x, y, z] = d.parts();
            out.push(format!("parts ({}): u={u:?} v={v:?} x={x:?} y={y:?} z={z:?}", d.case()));
        }
        out
    }

    pub fn to_ascii(&self) -> String {
        let positions = self.profile.len().max(1);
        let cols = positions.min(MAX_COLUMNS);
        let column = |pos: usize| pos * cols / positions;
        let mut pooled = vec![0usize; cols];
        for (pos, &s) in self.profile.iter().enumerate() {
            let c = &mut pooled[column(pos)];
            *c = (*c).max(s);
        }
        let top = pooled.iter().copied().max().unwrap_or(0).max(1);
        let rows = top.min(MAX_ROWS);
        // smallest height drawn in row r
        let threshold = |r: usize| (r * top).div_ceil(rows);
        let width = threshold(rows).to_string().len().max(5);

        let mut out = String::new();
        let _ = write!(out, "stack height, positions 0..={}", self.path_len());
        if cols < positions {
            let _ = write!(out, ", max-pooled into {cols} columns");
        }
        out.push('\n');
        for r in (1..=rows).rev() {
            let cells: String = pooled.iter().map(|&s| if s >= threshold(r) { '#' } else { ' ' }).collect();
            push_line(&mut out, &format!("{:>width$} |{cells}", threshold(r)));
        }
        push_line(&mut out, &format!("{:>width$} +{}", 0, "-".repeat(cols)));

        let mut ticks = vec![' '; cols];
        let mut c = 0;
        while c < cols {
            let first_pos = (c * positions).div_ceil(cols);
            let label = first_pos.to_string();
            for (off, ch) in label.chars().enumerate() {
                if c + off < cols {
                    ticks[c + off] = ch;
                }
            }
            c += 10.max(label.len() + 1);
        }
        push_row(&mut out, "", width, &ticks);

        if self.annotation.is_some() {
            if cols == positions {
                let word: Vec<char> = (0..cols).map(|t| self.letters.get(t).copied().flatten().unwrap_or(' ')).collect();
                push_row(&mut out, "word", width, &word);
            }
            if let Some(t) = self.level() {
                let mut row = vec![' '; cols];
                for (pos, mark) in [(t.i, 'i'), (t.j, 'j'), (t.k, 'k')] {
                    row[column(pos)] = mark;
                }
                push_row(&mut out, "level", width, &row);
            }
            if let Some(w) = self.witness() {
                let mut row = vec![' '; cols];
                let marks: Vec<(usize, char)> = match *w {
                    Witness::Case2 { lp_g, lp_h, fp_h, fp_g, .. } => {
                        vec![(lp_g, 'g'), (fp_g, 'g'), (lp_h, 'h'), (fp_h, 'h')]
                    }
                    Witness::Case1 { i, j, .. } => vec![(i, '^'), (j, '^')],
                };
                for (pos, mark) in marks {
                    row[column(pos)] = mark;
                }
                push_row(&mut out, "pump", width, &row);
            }
            if let Some(parts) = self.part_of_steps() {
                let mut row = vec![' '; cols];
                for (t, &p) in parts.iter().enumerate().rev() {
                    row[column(t)] = p;
                }
                push_row(&mut out, "parts", width, &row);
            }
            for line in self.legend() {
                push_line(&mut out, &line);
            }
        }
        out
    }

    pub fn to_svg(&self) -> String {
        const LEFT: f64 = 48.0;
        const TOP: f64 = 24.0;
        const PLOT_H: f64 = 240.0;
        let steps = self.path_len().max(1);
        let dx = if steps <= 100 { 12.0 } else { 1200.0 / steps as f64 };
        let top = self.profile.iter().copied().max().unwrap_or(0).max(1);
        let dy = PLOT_H / top as f64;
        let x = |t: usize| LEFT + dx * t as f64;
        let y = |s: usize| TOP + PLOT_H - dy * s as f64;
        let plot_w = dx * steps as f64;
        let annotated = self.annotation.is_some();
        let height = TOP + PLOT_H + if annotated { 110.0 } else { 40.0 };
        let width = LEFT + plot_w + 24.0;

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}" font-family="monospace" font-size="11">"#
        );
        let _ = writeln!(out, "<title>stack height, positions 0..={}</title>", self.path_len());
        let _ = writeln!(
            out,
            r#"<g stroke="black" stroke-width="1"><line x1="{LEFT:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{LEFT:.2}" y1="{TOP:.2}" x2="{LEFT:.2}" y2="{:.2}"/></g>"#,
            y(0),
            LEFT + plot_w,
            y(0),
            y(0)
        );
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{top}</text>"#, LEFT - 6.0, y(top) + 4.0);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">0</text>"#, LEFT - 6.0, y(0) + 4.0);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x(steps) - 8.0, y(0) + 16.0, self.path_len());

        let mut d = String::new();
        if let Some(&first) = self.profile.first() {
            let _ = write!(d, "M{:.2} {:.2}", x(0), y(first));
            for (t, pair) in self.profile.windows(2).enumerate() {
                let _ = write!(d, " H{:.2} V{:.2}", x(t + 1), y(pair[1]));
            }
        }
        let _ = writeln!(out, r#"<path class="profile" d="{d}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#);

        if let Some(t) = self.level() {
            for (pos, name) in [(t.i, "i"), (t.j, "j"), (t.k, "k")] {
                let _ = writeln!(
                    out,
                    r#"<line class="level" x1="{0:.2}" y1="{TOP:.2}" x2="{0:.2}" y2="{1:.2}" stroke="gray" stroke-dasharray="4 3"/><text x="{0:.2}" y="{2:.2}" text-anchor="middle">{name}={pos}</text>"#,
                    x(pos),
                    y(0),
                    TOP - 8.0
                );
            }
        }
        if let Some(Witness::Case2 { lp_g, lp_h, fp_h, fp_g, .. }) = self.witness() {
            for (pos, name) in [(*lp_g, "lp(g)"), (*lp_h, "lp(h)"), (*fp_h, "fp(h)"), (*fp_g, "fp(g)")] {
                let _ = writeln!(
                    out,
                    r#"<circle class="pump" cx="{:.2}" cy="{:.2}" r="3" fill="crimson"><title>{name}={pos}</title></circle>"#,
                    x(pos),
                    y(self.profile[pos])
                );
            }
        }
        if let Some(Witness::Case1 { i, j, .. }) = self.witness() {
            for pos in [*i, *j] {
                let _ = writeln!(
                    out,
                    r#"<circle class="pump" cx="{:.2}" cy="{:.2}" r="3" fill="crimson"><title>repeat at {pos}</title></circle>"#,
                    x(pos),
                    y(self.profile[pos])
                );
            }
        }
        if let Some(parts) = self.part_of_steps() {
            let band_y = y(0) + 28.0;
            let mut start = 0;
            while start < parts.len() {
                let name = parts[start];
                let end = parts[start..].iter().position(|&p| p != name).map_or(parts.len(), |off| start + off);
                let fill = match name {
                    'v' | 'y' => "gold",
                    'x' => "lightgreen",
                    _ => "lightgray",
                };
                let _ = writeln!(
                    out,
                    r#"<rect class="part" x="{:.2}" y="{band_y:.2}" width="{:.2}" height="16" fill="{fill}" stroke="white"/><text x="{:.2}" y="{:.2}" text-anchor="middle">{name}</text>"#,
                    x(start),
                    dx * (end - start) as f64,
                    (x(start) + x(end)) / 2.0,
                    band_y + 12.0
                );
                start = end;
            }
            for (row, line) in self.legend().iter().enumerate() {
                let _ = writeln!(out, r#"<text x="{LEFT:.2}" y="{:.2}">{}</text>"#, band_y + 34.0 + 14.0 * row as f64, escape(line));
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn push_line(out: &mut String, line: &str) {
    out.push_str(line.trim_end());
    out.push('\n');
}

fn push_row(out: &mut String, label: &str, width: usize, cells: &[char]) {
    let cells: String = cells.iter().collect();
    push_line(out, &format!("{label:>width$}  {cells}"));
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
            c => out.push(c),
        }
    }
    out
}
