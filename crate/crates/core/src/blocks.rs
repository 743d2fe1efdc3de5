//! Partitions of `{1..n}` into equal-size blocks.

use std::fmt;

use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockSystem {
    degree: usize,
    /// Each block sorted; blocks sorted by least point.
    blocks: Vec<Vec<usize>>,
    block_index: Vec<usize>,
}

impl BlockSystem {
    /// Validates a 0-based partition into equal-size blocks.
    pub fn new(degree: usize, blocks: Vec<Vec<usize>>) -> Result<Self, PermError> {
        let mut seen = vec![false; degree];
        for b in &blocks {
            for &x in b {
                if x >= degree {
                    return Err(PermError::OutOfRange { point: x + 1, degree });
                }
                if seen[x] {
                    return Err(PermError::NotBlockSystem(format!("point {} in two blocks", x + 1)));
                }
                seen[x] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(PermError::NotBlockSystem("blocks do not cover every point".into()));
        }
        let k = blocks.first().map_or(0, Vec::len);
        if k == 0 || blocks.iter().any(|b| b.len() != k) {
            return Err(PermError::NotBlockSystem("blocks differ in size".into()));
        }
        Ok(Self::from_partition_unchecked(degree, blocks))
    }

    pub(crate) fn from_partition_unchecked(degree: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort();
        let mut block_index = vec![0; degree];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                block_index[x] = i;
            }
        }
        BlockSystem { degree, blocks, block_index }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    /// Index of the block containing the 0-based point `x`.
    pub fn block_index(&self, x: usize) -> usize {
        self.block_index[x]
    }

    pub fn block_of_point(&self, x: usize) -> &[usize] {
        &self.blocks[self.block_index[x]]
    }

    /// True when every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &BlockSystem) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&x| other.block_index[x] == other.block_index[b[0]]))
    }

    /// Block permutation induced by `g`, or `None` if `g` breaks a block.
    pub fn action_of(&self, g: &Permutation) -> Option<Permutation> {
        let mut images = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let target = self.block_index[g.image(b[0])];
            if b.iter().any(|&x| self.block_index[g.image(x)] != target) {
                return None;
            }
            images.push(target);
        }
        Permutation::from_images(&images).ok()
    }

    pub fn is_invariant_under(&self, gens: &[Permutation]) -> bool {
        gens.iter().all(|g| g.degree() == self.degree && self.action_of(g).is_some())
    }

    pub fn blocks_one_based(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.iter().map(|x| x + 1).collect()).collect()
    }
}

impl fmt::Display for BlockSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_perm;

    #[test]
    fn validation() {
        assert!(BlockSystem::new(4, vec![vec![0, 1], vec![2, 3]]).is_ok());
        assert!(BlockSystem::new(4, vec![vec![0, 1, 2], vec![3]]).is_err());
        assert!(BlockSystem::new(4, vec![vec![0, 1], vec![1, 3]]).is_err());
        assert!(BlockSystem::new(4, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn induced_action() {
        let b = BlockSystem::new(4, vec![vec![2, 3], vec![0, 1]]).unwrap();
        assert_eq!(b.to_string(), "{{1,2},{3,4}}");
        let g = parse_perm("(1,3)(2,4)", 4).unwrap();
        assert_eq!(b.action_of(&g).unwrap().to_string(), "(1,2)");
        assert!(b.action_of(&parse_perm("(2,3)", 4).unwrap()).is_none());
    }
}
