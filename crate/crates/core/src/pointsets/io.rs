//! Line-based text format for point sets.
//!
//! ```text
//! model Rn:2:quad(2)
//! window [-4,4]x[-4,4]
//! complete true
//! 0 0
//! 1+1*sqrt(2) 1-1*sqrt(2)
//! ```
//!
//! or a single line `cutproject d=2 window=[-1,1]`. Blank lines and lines
//! starting with `#` are ignored.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::exactnum::ExactScalar;
use crate::groupmodels::{Coords, GroupModel};

use super::modelset::ModelSet;
use super::patch::FinitePatch;
use super::window::Window;
use super::PointSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointSetFile {
    Patch(FinitePatch),
    Model(ModelSet),
}

impl PointSetFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (n, first) = lines.next().ok_or_else(|| Error::Parse("empty point-set file".into()))?;
        if first.starts_with("cutproject") {
            if let Some((n, extra)) = lines.next() {
                return Err(Error::Parse(format!("line {n}: unexpected {extra:?} after cutproject")));
            }
            return Ok(PointSetFile::Model(first.parse()?));
        }
        let model: GroupModel = header(n, first, "model")?.parse()?;
        let (n, l) = lines.next().ok_or_else(|| Error::Parse("missing window line".into()))?;
        let window: Window = header(n, l, "window")?.parse()?;
        let (n, l) = lines.next().ok_or_else(|| Error::Parse("missing complete line".into()))?;
        let complete = match header(n, l, "complete")? {
            "true" => true,
            "false" => false,
            other => return Err(Error::Parse(format!("line {n}: complete must be true or false, got {other:?}"))),
        };
        let mut points = Vec::new();
        for (n, l) in lines {
            let p = l
                .split_whitespace()
                .map(|t| t.parse::<ExactScalar>())
                .collect::<Result<Coords>>()
                .map_err(|e| Error::Parse(format!("line {n}: {e}")))?;
            points.push(p);
        }
        Ok(PointSetFile::Patch(FinitePatch::new(model, points, window, complete)?))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn into_point_set(self) -> PointSet {
        match self {
            PointSetFile::Patch(p) => PointSet::Patch(p),
            PointSetFile::Model(m) => PointSet::Model(m),
        }
    }
}

fn header<'a>(n: usize, line: &'a str, key: &str) -> Result<&'a str> {
    line.strip_prefix(key)
        .filter(|rest| rest.starts_with(char::is_whitespace))
        .map(str::trim)
        .ok_or_else(|| Error::Parse(format!("line {n}: expected '{key} ...', got {line:?}")))
}

pub fn read_point_set(text: &str) -> Result<PointSet> {
    PointSetFile::parse(text).map(PointSetFile::into_point_set)
}

/// Points are written in norm order so output is stable.
pub fn write_patch(p: &FinitePatch) -> String {
    let mut out = format!("model {}\nwindow {}\ncomplete {}\n", p.model(), p.window(), p.is_complete());
    for pt in p.sorted_points() {
        let parts: Vec<String> = pt.iter().map(|c| c.to_string()).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

impl std::fmt::Display for PointSetFile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointSetFile::Patch(p) => f.write_str(&write_patch(p)),
            PointSetFile::Model(m) => writeln!(f, "{m}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::FpSeries;

    #[test]
    fn quad_patch_roundtrip() {
        let text = "# two points\nmodel Rn:2:quad(2)\nwindow [-4,4]x[-4,4]\ncomplete false\n0 0\n1+1*sqrt(2) 1-1*sqrt(2)\n";
        let f = PointSetFile::parse(text).unwrap();
        let PointSetFile::Patch(p) = &f else { panic!() };
        assert_eq!(p.len(), 2);
        assert!(!p.is_complete());
        let again = PointSetFile::parse(&f.to_string()).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn series_patch_roundtrip() {
        let m: GroupModel = "series:p=3:N=4:m=1".parse().unwrap();
        let s = ExactScalar::Series(FpSeries::new(3, 4, -1, &[1, 2]).unwrap());
        let p = FinitePatch::new(m, vec![vec![s]], Window::All, true).unwrap();
        let back = read_point_set(&write_patch(&p)).unwrap();
        assert_eq!(back, PointSet::Patch(p));
    }

    #[test]
    fn cutproject_line() {
        let f = PointSetFile::parse("cutproject d=2 window=[-1,1]\n").unwrap();
        assert_eq!(f.to_string(), "cutproject d=2 window=[-1,1]\n");
    }

    #[test]
    fn malformed_files() {
        assert!(PointSetFile::parse("").is_err());
        assert!(PointSetFile::parse("model axb\ncomplete true\n").is_err());
        assert!(PointSetFile::parse("model axb\nwindow all\ncomplete maybe\n").is_err());
        assert!(PointSetFile::parse("model axb\nwindow all\ncomplete true\n-1 0\n").is_err());
        assert!(PointSetFile::parse("model axb\nwindow all\ncomplete true\n1 x\n").is_err());
        assert!(PointSetFile::parse("model axb\nwindow all\ncomplete true\n1 0\n1 0\n").is_err());
        assert!(PointSetFile::parse("cutproject d=2 window=[-1,1]\n0\n").is_err());
        assert!(PointSetFile::parse("modelaxb\n").is_err());
    }
}
