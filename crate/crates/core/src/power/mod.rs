//! Geometric route: reduced dihedral powers of a triangulated space through
//! an equivariant triangulation of its Cartesian power.

mod complex;
mod product;
mod quotient;
mod subdivide;

use serde::Serialize;

pub use complex::SimplicialComplex;
pub use product::{dihedral_slot_group, CwProduct};
pub use quotient::{quotient_and_contract, BurnsideCheck, OrbitComplex};
pub use subdivide::{estimate_simplices, EquivariantComplex};

use crate::chain::BettiVector;
use crate::error::{Error, Result};

pub const DEFAULT_CELL_CAP: u128 = 5_000_000;
pub const CELL_CAP_ENV: &str = "BILLIARD_BOUNDS_CELL_CAP";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerConfig {
    /// Barycentric subdivisions of the product cell structure.
    pub rounds: usize,
    /// Upper limit on the estimated number of orbit cells.
    pub cap: u128,
    /// Subdivide once more if the action is not regular.
    pub escalate: bool,
}

impl Default for PowerConfig {
    fn default() -> Self {
        Self {
            rounds: 1,
            cap: DEFAULT_CELL_CAP,
            escalate: true,
        }
    }
}

impl PowerConfig {
    /// Defaults with the cap taken from the environment when set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = Self::default();
        if let Ok(raw) = std::env::var(CELL_CAP_ENV) {
            cfg.cap = raw.trim().parse().map_err(|e| {
                Error::InvalidArgument(format!("{CELL_CAP_ENV}={raw:?} is not a cell count: {e}"))
            })?;
        }
        Ok(cfg)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerHomology {
    pub power: usize,
    pub rounds: usize,
    pub estimated_orbit_cells: u128,
    pub simplex_counts: Vec<usize>,
    pub orbit_dims: Vec<usize>,
    pub betti: BettiVector,
    pub burnside: BurnsideCheck,
}

/// Estimated orbit cells after `rounds` subdivisions of the `p`-th power.
pub fn estimate_orbit_cells(k: &SimplicialComplex, p: usize, rounds: usize) -> Result<u128> {
    let prod = CwProduct::new(k, p)?;
    let total: u128 = estimate_simplices(&prod, rounds).iter().sum();
    Ok(total / prod.group().len() as u128)
}

/// Subdivided, equivariantly triangulated `p`-th power of `k`.
pub fn regularize(prod: &CwProduct, rounds: usize) -> Result<EquivariantComplex> {
    if rounds == 0 {
        return Err(Error::InvalidArgument(
            "at least one subdivision round is required".into(),
        ));
    }
    let mut t = EquivariantComplex::from_product(prod);
    for _ in 1..rounds {
        t = t.subdivide();
    }
    t.check_regular()?;
    Ok(t)
}

/// Mod 2 homology of the `p`-th dihedral power of `k` relative to its
/// diagonal.
pub fn rd_power_homology(
    k: &SimplicialComplex,
    p: usize,
    cfg: &PowerConfig,
) -> Result<PowerHomology> {
    let prod = CwProduct::new(k, p)?;
    let mut rounds = cfg.rounds;
    let t = loop {
        let group = prod.group().len() as u128;
        let estimate = estimate_simplices(&prod, rounds).iter().sum::<u128>() / group;
        if estimate > cfg.cap {
            return Err(Error::CellCap {
                estimate,
                cap: cfg.cap,
            });
        }
        match regularize(&prod, rounds) {
            Ok(t) => break t,
            Err(Error::Irregular { .. }) if cfg.escalate && rounds == cfg.rounds => rounds += 1,
            Err(e) => return Err(e),
        }
    };
    let orbits = quotient_and_contract(&t)?;
    let burnside = orbits.burnside();
    if !burnside.free {
        return Err(Error::Irregular {
            rounds,
            detail: "an orbit off the diagonal has a nontrivial stabilizer".into(),
        });
    }
    let betti = orbits.betti()?;
    Ok(PowerHomology {
        power: p,
        rounds,
        estimated_orbit_cells: estimate_orbit_cells(k, p, rounds)?,
        simplex_counts: t.simplex_counts(),
        orbit_dims: orbits.dims().to_vec(),
        betti,
        burnside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::{rd2_sphere_complex, rd3_bouquet_assembly, BouquetSpec};
    use crate::dold::dold_rd_power;

    fn run(k: &SimplicialComplex, p: usize) -> PowerHomology {
        rd_power_homology(k, p, &PowerConfig::default()).unwrap()
    }

    #[test]
    fn circle_square_both_models() {
        let tri = run(&SimplicialComplex::polygon(3).unwrap(), 2);
        assert_eq!(tri.betti.values, vec![0, 1, 1]);
        let sq = run(&SimplicialComplex::polygon(4).unwrap(), 2);
        assert_eq!(sq.betti, tri.betti);
        assert!(tri.burnside.holds());
    }

    #[test]
    fn sparse_and_dense_ranks_agree() {
        let k = SimplicialComplex::polygon(3).unwrap();
        let t = regularize(&CwProduct::new(&k, 2).unwrap(), 2).unwrap();
        let o = quotient_and_contract(&t).unwrap();
        let dense = o.to_chain_complex().unwrap();
        assert_eq!(dense.boundary_ranks()[1..], o.boundary_ranks()[1..]);
        assert_eq!(o.betti().unwrap(), dense.betti().unwrap());
        assert_eq!(o.betti().unwrap().values, vec![0, 1, 1]);
    }

    #[test]
    fn two_rounds_agree_with_one() {
        let k = SimplicialComplex::polygon(3).unwrap();
        let two = rd_power_homology(
            &k,
            2,
            &PowerConfig {
                rounds: 2,
                ..PowerConfig::default()
            },
        )
        .unwrap();
        assert_eq!(two.rounds, 2);
        assert_eq!(two.betti.values, vec![0, 1, 1]);
    }

    #[test]
    fn two_sphere_square() {
        let tet = run(&SimplicialComplex::simplex_boundary(3).unwrap(), 2);
        assert_eq!(tet.betti.values, vec![0, 0, 1, 1, 1]);
        assert_eq!(tet.betti, rd2_sphere_complex(2).unwrap().betti().unwrap());
        assert!(tet.burnside.holds());
    }

    #[test]
    fn circle_cube() {
        let h = run(&SimplicialComplex::polygon(3).unwrap(), 3);
        assert_eq!(h.betti.values, vec![0, 0, 1, 1]);
        assert_eq!(
            h.betti.sum(),
            dold_rd_power(&BouquetSpec::sphere(1), 3).unwrap().total
        );
        assert!(h.burnside.holds());
    }

    #[test]
    fn figure_eight_cube_matches_other_routes() {
        let spec = BouquetSpec::new(1, vec![2], false).unwrap();
        let h = run(&SimplicialComplex::circle_wedge(&[3, 3]).unwrap(), 3);
        assert_eq!(
            h.betti.sum() as i64,
            rd3_bouquet_assembly(&spec).unwrap().total
        );
        assert_eq!(h.betti.sum(), dold_rd_power(&spec, 3).unwrap().total);
    }

    #[test]
    #[ignore = "about 90 s and several GB; run with --ignored"]
    fn two_sphere_cube() {
        let h = run(&SimplicialComplex::simplex_boundary(3).unwrap(), 3);
        assert_eq!(h.betti.values, vec![0, 0, 0, 1, 1, 1, 1]);
    }

    #[test]
    fn octahedron_matches_tetrahedron() {
        let a = run(&SimplicialComplex::simplex_boundary(3).unwrap(), 2);
        let b = run(&SimplicialComplex::octahedron_boundary(), 2);
        assert_eq!(a.betti, b.betti);
    }

    #[test]
    fn cap_is_enforced() {
        let k = SimplicialComplex::polygon(3).unwrap();
        let cfg = PowerConfig {
            cap: 10,
            ..PowerConfig::default()
        };
        match rd_power_homology(&k, 2, &cfg) {
            Err(Error::CellCap { estimate, cap }) => {
                assert_eq!(cap, 10);
                assert!(estimate > 10);
            }
            other => panic!("expected the cap to trip, got {other:?}"),
        }
        assert!(rd_power_homology(&k, 4, &PowerConfig::default()).is_err());
        assert!(regularize(&CwProduct::new(&k, 2).unwrap(), 0).is_err());
    }

    #[test]
    fn estimate_is_an_upper_bound() {
        let k = SimplicialComplex::polygon(3).unwrap();
        let h = run(&k, 3);
        assert!(h.estimated_orbit_cells >= h.orbit_dims.iter().sum::<usize>() as u128);
        assert_eq!(h.simplex_counts.iter().sum::<usize>(), 5616);
    }
}
