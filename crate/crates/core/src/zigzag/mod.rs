//! Union zigzag of adjacent point clouds at a fixed scale and the interval
//! decomposition of its homology.

mod complex;
mod decompose;
mod homology;

pub use complex::{union_zigzag, Complex, Direction, ZigzagComplexSequence};
pub use decompose::{generalized_rank, interval_decomposition, ZigzagBarcode};
pub use homology::{homology_zigzag, ModuleSummary, ZigzagArrow, ZigzagModule};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::metric::PointCloud;
use crate::persistence::PersistenceDiagram;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZzParams {
    /// Fixed Vietoris–Rips scale used at every node.
    pub eps: f64,
    pub k: usize,
    pub max_dim: usize,
    pub alpha: f64,
    #[serde(rename = "N")]
    pub cap: usize,
}

/// Node-index coordinate of the diagram embedding: `t ↦ α·t / (2J)`.
pub fn node_coordinate(t: usize, clouds: usize, alpha: f64) -> f64 {
    alpha * t as f64 / (2 * clouds) as f64
}

/// Embed a zigzag barcode into `[0, α]²`: `[i, j] ↦ (i, j + 1)` rescaled by
/// [`node_coordinate`].
pub fn barcode_to_diagram(bc: &ZigzagBarcode, clouds: usize, alpha: f64, cap: usize) -> Result<PersistenceDiagram> {
    PersistenceDiagram::capped(
        bc.intervals()
            .iter()
            .map(|&(i, j)| (node_coordinate(i, clouds, alpha), node_coordinate(j + 1, clouds, alpha))),
        alpha,
        cap,
    )
}

/// Everything the zigzag pipeline produces for one ordered list of clouds.
#[derive(Debug, Clone)]
pub struct ZzOutput {
    pub module: ZigzagModule,
    pub barcode: ZigzagBarcode,
    pub diagram: PersistenceDiagram,
}

pub fn zz_pipeline_full(clouds: &[PointCloud], params: &ZzParams) -> Result<ZzOutput> {
    let seq = union_zigzag(clouds, params.eps, params.max_dim)?;
    let module = homology_zigzag(&seq, params.k);
    let barcode = interval_decomposition(&module);
    let diagram = barcode_to_diagram(&barcode, clouds.len(), params.alpha, params.cap)?;
    Ok(ZzOutput {
        module,
        barcode,
        diagram,
    })
}

/// Zigzag persistence diagram of an ordered list of point clouds.
pub fn zz_pipeline(clouds: &[PointCloud], params: &ZzParams) -> Result<PersistenceDiagram> {
    Ok(zz_pipeline_full(clouds, params)?.diagram)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: usize) -> ZzParams {
        ZzParams {
            eps: 1.0,
            k,
            max_dim: 1,
            alpha: 1.0,
            cap: 8,
        }
    }

    #[test]
    fn single_point() {
        let c = PointCloud::new(vec![vec![0.0]], None).unwrap();
        let out = zz_pipeline_full(&[c], &params(0)).unwrap();
        assert_eq!(out.barcode.intervals(), &[(1, 1)]);
        assert_eq!(out.diagram.pairs(), &[(0.5, 1.0)]);
    }

    #[test]
    fn two_cloud_merge() {
        let a = PointCloud::new(vec![vec![0.0]], None).unwrap();
        let b = PointCloud::new(vec![vec![0.5]], None).unwrap();
        let out = zz_pipeline_full(&[a, b], &params(0)).unwrap();
        assert_eq!(out.barcode.intervals(), &[(1, 3)]);
        assert_eq!(out.diagram.pairs(), &[(0.25, 1.0)]);
    }
}
