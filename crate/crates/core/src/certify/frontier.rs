//! Candidate points `y0`: vertices of the upper image that are minimal.

use alloc::vec::Vec;

use super::status::{efficiency_status, minimal_unchecked, EfficiencyStatus};
use crate::error::{Error, Result};
use crate::exactlp::{zeros, RationalVector};
use crate::model::{OrderCone, VectorProgram};
use crate::polyhedra::{AffineMap, Region};

pub const DEFAULT_FRONTIER_LIMIT: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontierPoint {
    pub y: RationalVector,
    pub status: EfficiencyStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frontier {
    pub points: Vec<FrontierPoint>,
    /// More than `limit` candidates were found and the rest were skipped.
    pub truncated: bool,
}

/// Minimal points of `region` among the vertices of `cl(region) + Y₊`
/// (the points themselves for a finite region).
pub fn frontier_of(region: &Region, yplus: &OrderCone, limit: usize) -> Result<Frontier> {
    let mut candidates: Vec<RationalVector> = match region {
        Region::Finite { points, .. } => points.clone(),
        _ => {
            let closure = region.closure()?;
            let upper = closure.image(&AffineMap::identity(region.dim()), yplus.cone().generators())?;
            upper.generators().vertices
        }
    };
    let truncated = candidates.len() > limit;
    candidates.truncate(limit);
    let mut points = Vec::new();
    for y in candidates {
        if !region.contains(&y)? || !minimal_unchecked(region, &y, yplus)? {
            continue;
        }
        let status = efficiency_status(region, &y, yplus)?;
        points.push(FrontierPoint { y, status });
    }
    Ok(Frontier { points, truncated })
}

/// [`frontier_of`] applied to `W(0)`.
pub fn minimal_frontier(p: &VectorProgram, limit: usize) -> Result<Frontier> {
    let w0 = p.image_set(&zeros(p.z_dim()))?;
    if w0.is_empty()? {
        return Err(Error::EmptyFeasible);
    }
    frontier_of(&w0, p.y_plus(), limit)
}
