//! Partial colorings with a palette `1..=c`.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, Vertex};

/// Colors are `1..=palette`.
pub type Color = u32;

/// Vertex → optional color.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PartialColoring {
    colors: Vec<Option<Color>>,
    palette: Color,
}

impl PartialColoring {
    /// Empty coloring of `n` vertices.
    pub fn new(n: usize, palette: Color) -> PartialColoring {
        PartialColoring { colors: vec![None; n], palette }
    }

    /// Panics if a color lies outside `1..=palette`.
    pub fn from_colors(colors: Vec<Option<Color>>, palette: Color) -> PartialColoring {
        assert!(
            colors.iter().flatten().all(|&c| (1..=palette).contains(&c)),
            "color outside 1..={palette}"
        );
        PartialColoring { colors, palette }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn palette(&self) -> Color {
        self.palette
    }

    pub fn with_palette(mut self, palette: Color) -> PartialColoring {
        assert!(self.max_color().unwrap_or(0) <= palette);
        self.palette = palette;
        self
    }

    pub fn get(&self, v: Vertex) -> Option<Color> {
        self.colors[v as usize - 1]
    }

    pub fn is_colored(&self, v: Vertex) -> bool {
        self.get(v).is_some()
    }

    /// Panics if `color` is outside the palette.
    pub fn set(&mut self, v: Vertex, color: Color) {
        assert!((1..=self.palette).contains(&color), "color {color} outside 1..={}", self.palette);
        self.colors[v as usize - 1] = Some(color);
    }

    pub fn clear(&mut self, v: Vertex) {
        self.colors[v as usize - 1] = None;
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    pub fn colored_count(&self) -> usize {
        self.colors.iter().flatten().count()
    }

    pub fn colored(&self) -> impl Iterator<Item = (Vertex, Color)> + '_ {
        self.colors.iter().enumerate().filter_map(|(i, c)| c.map(|c| (i as Vertex + 1, c)))
    }

    pub fn uncolored(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.colors.iter().enumerate().filter(|(_, c)| c.is_none()).map(|(i, _)| i as Vertex + 1)
    }

    pub fn max_color(&self) -> Option<Color> {
        self.colors.iter().flatten().copied().max()
    }

    /// Number of distinct colors in use.
    pub fn distinct_colors(&self) -> usize {
        let mut seen = vec![false; self.palette as usize + 1];
        self.colors.iter().flatten().filter(|&&c| !core::mem::replace(&mut seen[c as usize], true)).count()
    }

    pub fn as_slice(&self) -> &[Option<Color>] {
        &self.colors
    }
}

/// `true` iff no edge has both endpoints colored identically.
pub fn is_proper(g: &Graph, coloring: &PartialColoring) -> bool {
    first_conflict(g, coloring).is_none()
}

/// The lexicographically first monochromatic edge, if any.
pub fn first_conflict(g: &Graph, coloring: &PartialColoring) -> Option<(Vertex, Vertex)> {
    g.edges().find(|&(u, v)| {
        (u as usize) <= coloring.n()
            && (v as usize) <= coloring.n()
            && coloring.get(u).is_some()
            && coloring.get(u) == coloring.get(v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn properness_examples() {
        let p3 = Graph::path(3);
        let c = PartialColoring::from_colors(vec![Some(1), Some(2), Some(1)], 2);
        assert!(is_proper(&p3, &c));
        let k2 = Graph::complete(2);
        let bad = PartialColoring::from_colors(vec![Some(1), Some(1)], 1);
        assert!(!is_proper(&k2, &bad));
        assert_eq!(first_conflict(&k2, &bad), Some((1, 2)));
        assert!(is_proper(&Graph::complete(5), &PartialColoring::new(5, 3)));
    }

    #[test]
    fn counts() {
        let c = PartialColoring::from_colors(vec![Some(3), None, Some(3), Some(1)], 4);
        assert_eq!(c.distinct_colors(), 2);
        assert_eq!(c.colored_count(), 3);
        assert_eq!(c.uncolored().collect::<Vec<_>>(), [2]);
        assert_eq!(c.max_color(), Some(3));
    }
}
