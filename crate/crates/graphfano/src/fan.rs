//! Integer fans: ray materialization from nested sets, product fans,
//! smoothness and point location, and the wall-relation solver used as
//! an independent route to a(τ).
//!
//! All arithmetic is exact (i128 determinants, rational elimination).

use std::collections::HashMap;

use num_rational::Ratio;
use thiserror::Error;

use crate::building::{Budget, BuildingError, BuildingSet};
use crate::graph::{nodes_of, Graph, NodeMask};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FanError {
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error("fan inconsistency: {0}")]
    Inconsistent(String),
    #[error("wall relation has a non-integral solution")]
    NonIntegral,
}

type Rat = Ratio<i128>;

/// A complete simplicial fan with integer rays. For fans built from a
/// graph, `ray_sets[i]` records the node set generating ray `i`
/// (in the graph's original labels).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub ray_sets: Option<Vec<NodeMask>>,
    /// Sorted ray-index sets, each of size `dim`.
    pub max_cones: Vec<Vec<usize>>,
}

/// A codimension-1 cone: its rays and the two maximal cones it bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanWall {
    pub rays: Vec<usize>,
    pub cones: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallRelation {
    pub coeffs: Vec<i64>,
    pub a_sum: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub containing: Vec<usize>,
    pub interior: Vec<usize>,
}

/// Coordinates of e_I for a connected graph on `node_count` nodes:
/// e_1..e_n are the standard basis of Z^n and e_{n+1} = -e_1-...-e_n.
/// The full node set maps to the zero vector.
pub fn ray_vector(node_count: usize, set: NodeMask) -> Vec<i64> {
    let n = node_count - 1;
    let mut coords = vec![0i64; n];
    for v in nodes_of(set) {
        if v <= n {
            coords[v - 1] += 1;
        } else {
            for c in coords.iter_mut() {
                *c -= 1;
            }
        }
    }
    coords
}

impl Fan {
    /// The 0-dimensional fan (a point).
    pub fn point() -> Fan {
        Fan { dim: 0, rays: Vec::new(), ray_sets: Some(Vec::new()), max_cones: vec![Vec::new()] }
    }

    /// The fan of a graph: per connected component the nested-set fan,
    /// combined as a product. Ray node sets keep the original labels.
    pub fn build(graph: &Graph, budget: Budget) -> Result<Fan, FanError> {
        let mut fan = Fan::point();
        for comp in graph.connected_components() {
            let sub = graph.induced_subgraph(comp).expect("component is nonempty");
            let comp_nodes = nodes_of(comp);
            let mut comp_fan = Fan::build_connected(&sub, budget)?;
            if let Some(sets) = &mut comp_fan.ray_sets {
                for s in sets.iter_mut() {
                    *s = nodes_of(*s)
                        .into_iter()
                        .fold(0u64, |m, v| m | crate::graph::node_bit(comp_nodes[v - 1]));
                }
            }
            fan = Fan::product(&fan, &comp_fan);
        }
        Ok(fan)
    }

    /// The fan of a connected graph: rays e_I for I ∈ B(G) \ {V(G)},
    /// maximal cones from maximal nested sets.
    pub fn build_connected(graph: &Graph, budget: Budget) -> Result<Fan, FanError> {
        let building = BuildingSet::new(graph, budget)?;
        Fan::from_building(&building, budget)
    }

    pub fn from_building(building: &BuildingSet, budget: Budget) -> Result<Fan, FanError> {
        let graph = building.graph();
        let n = graph.node_count() - 1;
        let members = building.members();
        // V(G) is the numerically largest mask, hence the last member;
        // ray index i corresponds to member i.
        let ray_sets: Vec<NodeMask> = members[..members.len() - 1].to_vec();
        let rays: Vec<Vec<i64>> =
            ray_sets.iter().map(|&s| ray_vector(graph.node_count(), s)).collect();
        let full = graph.full_mask();
        let max_cones: Vec<Vec<usize>> = building
            .maximal_nested_sets(budget)?
            .into_iter()
            .map(|nested| {
                nested
                    .into_iter()
                    .filter(|&s| s != full)
                    .map(|s| building.member_index(s).expect("nested member is in B"))
                    .collect()
            })
            .collect();
        Ok(Fan { dim: n, rays, ray_sets: Some(ray_sets), max_cones })
    }

    /// Product fan: rays of each factor zero-padded into the joint
    /// coordinates, maximal cones the unions of one cone per factor.
    pub fn product(a: &Fan, b: &Fan) -> Fan {
        let dim = a.dim + b.dim;
        let mut rays = Vec::with_capacity(a.rays.len() + b.rays.len());
        for r in &a.rays {
            let mut v = r.clone();
            v.extend(std::iter::repeat(0).take(b.dim));
            rays.push(v);
        }
        for r in &b.rays {
            let mut v = vec![0i64; a.dim];
            v.extend_from_slice(r);
            rays.push(v);
        }
        let ray_sets = match (&a.ray_sets, &b.ray_sets) {
            (Some(x), Some(y)) => {
                let mut s = x.clone();
                s.extend_from_slice(y);
                Some(s)
            }
            _ => None,
        };
        let offset = a.rays.len();
        let mut max_cones = Vec::with_capacity(a.max_cones.len() * b.max_cones.len());
        for ca in &a.max_cones {
            for cb in &b.max_cones {
                let mut cone = ca.clone();
                cone.extend(cb.iter().map(|&i| i + offset));
                max_cones.push(cone);
            }
        }
        Fan { dim, rays, ray_sets, max_cones }
    }

    /// True iff every maximal cone's ray matrix has determinant ±1.
    pub fn is_smooth(&self) -> bool {
        self.max_cones.iter().all(|c| self.cone_det(c).abs() == 1)
    }

    /// Determinant of the matrix whose columns are the cone's rays.
    pub fn cone_det(&self, cone: &[usize]) -> i128 {
        debug_assert_eq!(cone.len(), self.dim);
        let m: Vec<Vec<i128>> = (0..self.dim)
            .map(|row| cone.iter().map(|&ri| self.rays[ri][row] as i128).collect())
            .collect();
        det_bareiss(m)
    }

    /// Maximal cones containing `x`; a cone is "interior" when all the
    /// barycentric coefficients are strictly positive.
    pub fn locate(&self, x: &[i64]) -> Location {
        assert_eq!(x.len(), self.dim);
        let mut containing = Vec::new();
        let mut interior = Vec::new();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            let d = self.cone_det(cone);
            debug_assert_ne!(d, 0);
            let mut all_nonneg = true;
            let mut all_pos = true;
            for j in 0..self.dim {
                // Cramer: coefficient j has the sign of det_j * det.
                let m: Vec<Vec<i128>> = (0..self.dim)
                    .map(|row| {
                        (0..self.dim)
                            .map(|col| {
                                if col == j {
                                    x[row] as i128
                                } else {
                                    self.rays[cone[col]][row] as i128
                                }
                            })
                            .collect()
                    })
                    .collect();
                let dj = det_bareiss(m);
                let s = dj.signum() * d.signum();
                if s < 0 {
                    all_nonneg = false;
                    all_pos = false;
                    break;
                }
                if s == 0 {
                    all_pos = false;
                }
            }
            if all_nonneg {
                containing.push(ci);
            }
            if all_pos && self.dim > 0 {
                interior.push(ci);
            }
        }
        Location { containing, interior }
    }

    /// All walls, derived as shared facets of maximal-cone pairs.
    /// Errors if some facet is not shared by exactly two cones.
    pub fn walls_from_cones(&self) -> Result<Vec<FanWall>, FanError> {
        if self.dim == 0 {
            return Ok(Vec::new());
        }
        let mut facets: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            for skip in 0..cone.len() {
                let facet: Vec<usize> = cone
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &r)| r)
                    .collect();
                facets.entry(facet).or_default().push(ci);
            }
        }
        let mut walls = Vec::with_capacity(facets.len());
        for (facet, cones) in facets {
            if cones.len() != 2 {
                return Err(FanError::Inconsistent(format!(
                    "facet {:?} lies in {} maximal cones",
                    facet,
                    cones.len()
                )));
            }
            walls.push(FanWall { rays: facet, cones: (cones[0].min(cones[1]), cones[0].max(cones[1])) });
        }
        walls.sort_by(|a, b| a.rays.cmp(&b.rays).then(a.cones.cmp(&b.cones)));
        Ok(walls)
    }

    /// Solves v + v' + a_1 v_1 + ... + a_{n-1} v_{n-1} = 0 where v, v'
    /// are the rays of the two adjacent maximal cones outside the wall.
    pub fn wall_relation(
        &self,
        wall_rays: &[usize],
        cone_a: usize,
        cone_b: usize,
    ) -> Result<WallRelation, FanError> {
        let extra = |cone: &[usize]| -> Result<usize, FanError> {
            let out: Vec<usize> =
                cone.iter().copied().filter(|r| !wall_rays.contains(r)).collect();
            if out.len() != 1 {
                return Err(FanError::Inconsistent(
                    "wall is not a facet of the given cone".into(),
                ));
            }
            Ok(out[0])
        };
        let v = extra(&self.max_cones[cone_a])?;
        let v_prime = extra(&self.max_cones[cone_b])?;
        self.wall_relation_vectors(wall_rays, v, v_prime)
    }

    /// Same relation, with the two outer rays given directly.
    pub fn wall_relation_vectors(
        &self,
        wall_rays: &[usize],
        v: usize,
        v_prime: usize,
    ) -> Result<WallRelation, FanError> {
        let rhs: Vec<i64> = (0..self.dim)
            .map(|row| -(self.rays[v][row] + self.rays[v_prime][row]))
            .collect();
        let cols: Vec<&Vec<i64>> = wall_rays.iter().map(|&r| &self.rays[r]).collect();
        let coeffs = solve_exact(&cols, &rhs)?;
        let a_sum = coeffs.iter().sum();
        Ok(WallRelation { coeffs, a_sum })
    }
}

/// Exact determinant by fraction-free Bareiss elimination.
pub fn det_bareiss(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let swap = (k + 1..n).find(|&r| m[r][k] != 0);
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Solves the overdetermined integer system `cols * a = rhs` exactly,
/// requiring a unique integral solution.
fn solve_exact(cols: &[&Vec<i64>], rhs: &[i64]) -> Result<Vec<i64>, FanError> {
    let rows = rhs.len();
    let ncols = cols.len();
    if ncols == 0 {
        if rhs.iter().all(|&x| x == 0) {
            return Ok(Vec::new());
        }
        return Err(FanError::Inconsistent("inconsistent empty wall relation".into()));
    }
    // Augmented rational matrix [cols | rhs].
    let mut m: Vec<Vec<Rat>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rat> =
                cols.iter().map(|c| Rat::from_integer(c[r] as i128)).collect();
            row.push(Rat::from_integer(rhs[r] as i128));
            row
        })
        .collect();
    let mut pivot_rows: Vec<usize> = Vec::with_capacity(ncols);
    let mut row = 0usize;
    for col in 0..ncols {
        let pivot = (row..rows).find(|&r| m[r][col] != Rat::from_integer(0));
        let Some(p) = pivot else {
            return Err(FanError::Inconsistent("wall rays are linearly dependent".into()));
        };
        m.swap(row, p);
        let pv = m[row][col];
        for r in 0..rows {
            if r != row && m[r][col] != Rat::from_integer(0) {
                let factor = m[r][col] / pv;
                for c in col..=ncols {
                    let sub = factor * m[row][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    // Leftover rows must be consistent.
    for r in row..rows {
        if m[r][ncols] != Rat::from_integer(0) {
            return Err(FanError::Inconsistent("wall relation system is inconsistent".into()));
        }
    }
    let mut solution = Vec::with_capacity(ncols);
    for (col, &r) in pivot_rows.iter().enumerate() {
        let val = m[r][ncols] / m[r][col];
        if !val.is_integer() {
            return Err(FanError::NonIntegral);
        }
        let v = val.to_integer();
        if v > i64::MAX as i128 || v < i64::MIN as i128 {
            return Err(FanError::Inconsistent("coefficient overflow".into()));
        }
        solution.push(v as i64);
    }
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{mask_from_nodes, FamilyKind};

    fn fan_of(g: &Graph) -> Fan {
        Fan::build(g, Budget::default()).unwrap()
    }

    fn path(n: usize) -> Graph {
        Graph::family(FamilyKind::Path, n).unwrap()
    }

    #[test]
    fn fan_of_two_node_path_is_p1() {
        let f = fan_of(&path(2));
        assert_eq!(f.dim, 1);
        let mut rays = f.rays.clone();
        rays.sort();
        assert_eq!(rays, vec![vec![-1], vec![1]]);
        assert_eq!(f.max_cones.len(), 2);
        assert!(f.is_smooth());
    }

    #[test]
    fn fan_of_path3_is_dp7() {
        let f = fan_of(&path(3));
        assert_eq!(f.dim, 2);
        let mut rays = f.rays.clone();
        rays.sort();
        let mut expected = vec![
            vec![1, 0],
            vec![0, 1],
            vec![-1, -1],
            vec![1, 1],
            vec![-1, 0],
        ];
        expected.sort();
        assert_eq!(rays, expected);
        assert_eq!(f.max_cones.len(), 5);
        assert!(f.is_smooth());
    }

    #[test]
    fn fan_of_triangle_is_dp6() {
        let f = fan_of(&Graph::family(FamilyKind::Cycle, 3).unwrap());
        assert_eq!(f.dim, 2);
        assert_eq!(f.rays.len(), 6);
        assert!(f.rays.contains(&vec![0, -1])); // e_{1,3} = e_1 + e_{4-1}... e_{1}+e_{3}
        assert_eq!(f.max_cones.len(), 6);
        assert!(f.is_smooth());
    }

    #[test]
    fn product_fan_counts() {
        let p1 = fan_of(&path(2));
        let grid = Fan::product(&p1, &p1);
        assert_eq!(grid.dim, 2);
        assert_eq!(grid.rays.len(), 4);
        assert_eq!(grid.max_cones.len(), 4);
        assert!(grid.is_smooth());

        let f = fan_of(&path(3));
        let identity = Fan::product(&f, &Fan::point());
        assert_eq!(identity.dim, f.dim);
        assert_eq!(identity.rays, f.rays);
        assert_eq!(identity.max_cones, f.max_cones);

        let prod = Fan::product(&f, &p1);
        assert_eq!(prod.dim, 3);
        assert_eq!(prod.rays.len(), 7);
        assert_eq!(prod.max_cones.len(), 10);
    }

    #[test]
    fn disconnected_graph_fan_is_product() {
        let g = Graph::new(5, &[(1, 2), (2, 3), (4, 5)]).unwrap();
        let f = fan_of(&g);
        assert_eq!(f.dim, 3);
        assert_eq!(f.rays.len(), 7);
        assert_eq!(f.max_cones.len(), 10);
        // Ray node sets keep original labels.
        let sets = f.ray_sets.as_ref().unwrap();
        assert!(sets.contains(&mask_from_nodes([4])));
        assert!(sets.contains(&mask_from_nodes([1, 2])));
        assert!(!sets.contains(&mask_from_nodes([4, 5])));
    }

    #[test]
    fn smoothness_examples() {
        assert!(fan_of(&Graph::family(FamilyKind::Cycle, 4).unwrap()).is_smooth());
        let bad = Fan {
            dim: 2,
            rays: vec![vec![1, 0], vec![1, 2]],
            ray_sets: None,
            max_cones: vec![vec![0, 1]],
        };
        assert!(!bad.is_smooth());
    }

    #[test]
    fn locate_examples() {
        let f = fan_of(&path(3));
        // (2,1) is interior to the cone spanned by (1,0) and (1,1).
        let loc = f.locate(&[2, 1]);
        assert_eq!(loc.containing.len(), 1);
        assert_eq!(loc.interior.len(), 1);
        let cone = &f.max_cones[loc.interior[0]];
        let mut rays: Vec<Vec<i64>> = cone.iter().map(|&r| f.rays[r].clone()).collect();
        rays.sort();
        assert_eq!(rays, vec![vec![1, 0], vec![1, 1]]);
        // The origin lies in every maximal cone, none interior.
        let loc = f.locate(&[0, 0]);
        assert_eq!(loc.containing.len(), f.max_cones.len());
        assert!(loc.interior.is_empty());
        // (1,1) is a ray: exactly two cones, zero interior.
        let loc = f.locate(&[1, 1]);
        assert_eq!(loc.containing.len(), 2);
        assert!(loc.interior.is_empty());
    }

    #[test]
    fn wall_relation_examples() {
        let f = fan_of(&path(3));
        let ray_idx = |v: &[i64]| f.rays.iter().position(|r| r == v).unwrap();
        // (1,1) + (-1,0) - 1*(0,1) = 0
        let rel = f
            .wall_relation_vectors(&[ray_idx(&[0, 1])], ray_idx(&[1, 1]), ray_idx(&[-1, 0]))
            .unwrap();
        assert_eq!(rel.coeffs, vec![-1]);
        assert_eq!(rel.a_sum, -1);
        // (1,1) + (-1,-1) + 0*(1,0) = 0
        let rel = f
            .wall_relation_vectors(&[ray_idx(&[1, 0])], ray_idx(&[1, 1]), ray_idx(&[-1, -1]))
            .unwrap();
        assert_eq!(rel.coeffs, vec![0]);
        assert_eq!(rel.a_sum, 0);
        // P^1: zero wall, v + v' = 0, intersection number 2.
        let p1 = fan_of(&path(2));
        let up = p1.rays.iter().position(|r| r == &vec![1]).unwrap();
        let down = p1.rays.iter().position(|r| r == &vec![-1]).unwrap();
        let rel = p1.wall_relation_vectors(&[], up, down).unwrap();
        assert!(rel.coeffs.is_empty());
        assert_eq!(rel.a_sum, 0);
    }

    #[test]
    fn wall_relation_via_cones_matches() {
        let f = fan_of(&path(3));
        for wall in f.walls_from_cones().unwrap() {
            let rel = f.wall_relation(&wall.rays, wall.cones.0, wall.cones.1).unwrap();
            let rel2 = f.wall_relation(&wall.rays, wall.cones.1, wall.cones.0).unwrap();
            assert_eq!(rel.a_sum, rel2.a_sum);
        }
    }

    #[test]
    fn walls_from_cones_matches_nested_walls() {
        for g in [
            path(4),
            Graph::family(FamilyKind::Cycle, 4).unwrap(),
            Graph::family(FamilyKind::Diamond, 4).unwrap(),
        ] {
            let building = BuildingSet::new(&g, Budget::default()).unwrap();
            let f = Fan::from_building(&building, Budget::default()).unwrap();
            let fan_walls = f.walls_from_cones().unwrap();
            let nested_walls = building.walls(Budget::default()).unwrap();
            assert_eq!(fan_walls.len(), nested_walls.len());
            let full = g.full_mask();
            let mut from_nested: Vec<Vec<usize>> = nested_walls
                .iter()
                .map(|w| {
                    let mut rays: Vec<usize> = w
                        .iter()
                        .filter(|&&s| s != full)
                        .map(|&s| building.member_index(s).unwrap())
                        .collect();
                    rays.sort_unstable();
                    rays
                })
                .collect();
            from_nested.sort();
            let mut from_fan: Vec<Vec<usize>> = fan_walls
                .iter()
                .map(|w| {
                    let mut r = w.rays.clone();
                    r.sort_unstable();
                    r
                })
                .collect();
            from_fan.sort();
            assert_eq!(from_nested, from_fan);
        }
    }

    #[test]
    fn det_bareiss_basics() {
        assert_eq!(det_bareiss(vec![]), 1);
        assert_eq!(det_bareiss(vec![vec![5]]), 5);
        assert_eq!(det_bareiss(vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(
            det_bareiss(vec![vec![2, 0, 1], vec![1, 1, 0], vec![0, 3, 1]]),
            5
        );
        assert_eq!(det_bareiss(vec![vec![1, 2], vec![2, 4]]), 0);
    }
}
