//! Vietoris–Rips filtrations and persistent homology over GF(2).

mod diagram;
mod reduce;
mod rips;

pub use diagram::PersistenceDiagram;
pub use reduce::{boundary_matrix, persistent_homology, reduce, Reduction};
pub use rips::{filtration_cmp, vietoris_rips, Filtration, Simplex};

pub(crate) use rips::rips_simplices;

use crate::error::Result;
use crate::metric::{DistanceMatrix, Minkowski, PointCloud};

/// Parameters of the point cloud → diagram pipeline.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PhParams {
    /// Homology degree.
    pub k: usize,
    pub max_scale: f64,
    pub max_dim: usize,
    pub alpha: f64,
    #[serde(rename = "N")]
    pub cap: usize,
}

/// Euclidean Vietoris–Rips persistent homology of a point cloud.
pub fn ph_pipeline(pc: &PointCloud, params: &PhParams) -> Result<PersistenceDiagram> {
    let dm = DistanceMatrix::from_point_cloud(pc, Minkowski::L2)?;
    let f = vietoris_rips(&dm, params.max_scale, params.max_dim)?;
    persistent_homology(&f, params.k, params.alpha, params.cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(points: &[[f64; 2]]) -> PointCloud {
        PointCloud::new(points.iter().map(|p| p.to_vec()).collect(), None).unwrap()
    }

    fn params(k: usize, max_dim: usize) -> PhParams {
        PhParams {
            k,
            max_scale: 2.0,
            max_dim,
            alpha: 2.0,
            cap: 16,
        }
    }

    #[test]
    fn unit_square_has_one_loop() {
        let sq = cloud(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let d = ph_pipeline(&sq, &params(1, 2)).unwrap();
        assert_eq!(d.pairs(), &[(1.0, 2f64.sqrt())]);
        assert!(d.warning().is_none());
    }

    #[test]
    fn triangle_has_no_loop() {
        let s = 1.5;
        let tri = cloud(&[[0.0, 0.0], [s, 0.0], [s / 2.0, s * 3f64.sqrt() / 2.0]]);
        let d = ph_pipeline(&tri, &params(1, 2)).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn single_point_essential_class() {
        let p = cloud(&[[0.3, 0.3]]);
        let d = ph_pipeline(&p, &PhParams { k: 0, max_scale: 1.0, max_dim: 1, alpha: 1.0, cap: 4 }).unwrap();
        assert_eq!(d.pairs(), &[(0.0, 1.0)]);
    }

    #[test]
    fn high_degree_is_empty_with_warning() {
        let sq = cloud(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let d = ph_pipeline(&sq, &params(5, 2)).unwrap();
        assert!(d.is_empty());
        assert!(d.warning().is_some());
    }

    #[test]
    fn h0_of_two_clusters() {
        let pc = cloud(&[[0.0, 0.0], [0.1, 0.0], [1.0, 0.0]]);
        let d = ph_pipeline(&pc, &params(0, 1)).unwrap();
        let got = d.pairs().to_vec();
        assert_eq!(got.len(), 3);
        assert_eq!(got[0], (0.0, 0.1));
        assert_eq!(got[1], (0.0, 0.9));
        assert_eq!(got[2], (0.0, 2.0));
    }

    #[test]
    fn alpha_below_max_scale_is_rejected() {
        let pc = cloud(&[[0.0, 0.0]]);
        assert!(ph_pipeline(&pc, &PhParams { k: 0, max_scale: 3.0, max_dim: 1, alpha: 1.0, cap: 2 }).is_err());
    }
}
