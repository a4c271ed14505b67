use std::fmt;

use serde::Serialize;

/// Topological type of a configuration space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClassTag {
    Empty,
    SinglePoint,
    /// Two isolated points; only occurs for quadrilaterals (a folded
    /// configuration and its mirror image).
    TwoPoints,
    CircleAndTwoPoints,
    TwoCirclesAndFourPoints,
    GraphXAndTwoPoints,
}

impl ClassTag {
    /// Number of connected components.
    pub fn component_count(self) -> usize {
        match self {
            ClassTag::Empty => 0,
            ClassTag::SinglePoint => 1,
            ClassTag::TwoPoints => 2,
            ClassTag::CircleAndTwoPoints | ClassTag::GraphXAndTwoPoints => 3,
            ClassTag::TwoCirclesAndFourPoints => 6,
        }
    }

    /// Expected `(loops, graphs, isolated points)` among the components.
    pub fn expected_kinds(self) -> (usize, usize, usize) {
        match self {
            ClassTag::Empty => (0, 0, 0),
            ClassTag::SinglePoint => (0, 0, 1),
            ClassTag::TwoPoints => (0, 0, 2),
            ClassTag::CircleAndTwoPoints => (1, 0, 2),
            ClassTag::TwoCirclesAndFourPoints => (2, 0, 4),
            ClassTag::GraphXAndTwoPoints => (0, 1, 2),
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigSpaceClass {
    pub tag: ClassTag,
    pub detail: String,
}

impl ConfigSpaceClass {
    pub fn new(tag: ClassTag, detail: impl Into<String>) -> Self {
        Self {
            tag,
            detail: detail.into(),
        }
    }
}
