//! Standard parabolic subgroups: Levi roots, unipotent roots, the W_L-orbit
//! decomposition of Δ_U and the grading of the unipotent radical.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_rational::Rational64;
use thiserror::Error;

use crate::roots::{CartanType, Root, RootSystem, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParabolicError {
    #[error("simple root index {index} out of range for rank {rank}")]
    Index { index: usize, rank: usize },
    #[error("parabolic is not maximal ({0} simple roots outside the Levi)")]
    NotMaximal(usize),
}

/// A connected Dynkin component of the Levi.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviComponent {
    /// Simple-root indices, listed along the diagram for type A.
    pub nodes: Vec<usize>,
    pub cartan_type: CartanType,
}

#[derive(Debug, Clone)]
pub struct ParabolicData {
    pub rs: RootSystem,
    pub levi_simples: BTreeSet<usize>,
    /// Indices into `rs.positive_roots()`.
    pub delta_l: Vec<usize>,
    pub delta_u: Vec<usize>,
    pub sigma_l_complement: Vec<usize>,
    pub rho_l: Weight,
    pub levi_components: Vec<LeviComponent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub roots: Vec<usize>,
    pub touches: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub orbits: Vec<Orbit>,
}

pub fn build_parabolic(rs: &RootSystem, levi_simples: &BTreeSet<usize>) -> Result<ParabolicData, ParabolicError> {
    ParabolicData::new(rs.clone(), levi_simples.clone())
}

impl ParabolicData {
    pub fn new(rs: RootSystem, levi_simples: BTreeSet<usize>) -> Result<Self, ParabolicError> {
        let n = rs.rank();
        if let Some(&bad) = levi_simples.iter().find(|&&i| i >= n) {
            return Err(ParabolicError::Index { index: bad, rank: n });
        }
        let mut delta_l = Vec::new();
        let mut delta_u = Vec::new();
        for (k, r) in rs.positive_roots().iter().enumerate() {
            if r.support().all(|i| levi_simples.contains(&i)) {
                delta_l.push(k);
            } else {
                delta_u.push(k);
            }
        }
        let sigma_l_complement = (0..n).filter(|i| !levi_simples.contains(i)).collect();
        let mut rho_l = Weight::zero(n);
        for &k in &delta_l {
            let w = rs.root_weight(&rs.positive_roots()[k]);
            for (a, b) in rho_l.coords.iter_mut().zip(w.coords) {
                *a += b / 2;
            }
        }
        let levi_components = rs
            .dynkin_components(&levi_simples)
            .into_iter()
            .map(|nodes| {
                let cartan_type = rs.classify_component(&nodes);
                let nodes = order_along_path(&rs, nodes);
                LeviComponent { nodes, cartan_type }
            })
            .collect();
        Ok(ParabolicData {
            rs,
            levi_simples,
            delta_l,
            delta_u,
            sigma_l_complement,
            rho_l,
            levi_components,
        })
    }

    pub fn is_borel(&self) -> bool {
        self.levi_simples.is_empty()
    }

    pub fn root(&self, k: usize) -> &Root {
        &self.rs.positive_roots()[k]
    }

    /// Orbits of W_L on Δ_U, found by closing each root under the simple
    /// reflections of the Levi.
    pub fn wl_orbits(&self) -> OrbitPartition {
        let in_u: BTreeSet<usize> = self.delta_u.iter().copied().collect();
        let mut assigned: BTreeSet<usize> = BTreeSet::new();
        let mut orbits = Vec::new();
        for &start in &self.delta_u {
            if assigned.contains(&start) {
                continue;
            }
            let mut orbit = BTreeSet::from([start]);
            let mut queue = VecDeque::from([start]);
            while let Some(k) = queue.pop_front() {
                let r = self.root(k);
                for &i in &self.levi_simples {
                    let img = self.rs.reflect(r, &self.rs.simple_root(i));
                    let j = self.rs.root_index(&img).expect("W_L preserves the positive roots of U");
                    debug_assert!(in_u.contains(&j));
                    if orbit.insert(j) {
                        queue.push_back(j);
                    }
                }
            }
            assigned.extend(orbit.iter().copied());
            let roots: Vec<usize> = orbit.into_iter().collect();
            let touches = self
                .levi_components
                .iter()
                .enumerate()
                .filter(|(_, c)| {
                    roots
                        .iter()
                        .any(|&k| c.nodes.iter().any(|&i| self.rs.root_pair_simple(self.root(k), i) != 0))
                })
                .map(|(ci, _)| ci)
                .collect();
            orbits.push(Orbit { roots, touches });
        }
        OrbitPartition { orbits }
    }

    /// Levels `j(α) = ⟨ϖ_P, α^∨⟩` of Δ_U for a maximal parabolic.
    pub fn unipotent_grading(&self) -> Result<BTreeMap<i64, Vec<usize>>, ParabolicError> {
        if self.sigma_l_complement.len() != 1 {
            return Err(ParabolicError::NotMaximal(self.sigma_l_complement.len()));
        }
        let p = self.sigma_l_complement[0];
        let mut levels: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for &k in &self.delta_u {
            let j = self.rs.coroot_coeffs(k)[p];
            levels.entry(j).or_default().push(k);
        }
        Ok(levels)
    }

    /// ρ − ρ_L in fundamental-weight coordinates.
    pub fn rho_minus_rho_l(&self) -> Vec<Rational64> {
        self.rs
            .rho()
            .coords
            .iter()
            .zip(&self.rho_l.coords)
            .map(|(a, b)| a - b)
            .collect()
    }
}

fn order_along_path(rs: &RootSystem, nodes: Vec<usize>) -> Vec<usize> {
    let c = rs.cartan_matrix();
    let adj = |u: usize, v: usize| u != v && c[u][v] != 0;
    let degree = |u: usize| nodes.iter().filter(|&&v| adj(u, v)).count();
    if nodes.len() <= 1 || nodes.iter().any(|&u| degree(u) > 2) {
        return nodes;
    }
    let start = *nodes
        .iter()
        .filter(|&&u| degree(u) == 1)
        .min()
        .expect("a path has an endpoint");
    let mut out = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = nodes.iter().find(|&&v| v != prev && adj(cur, v)) {
        out.push(next);
        prev = cur;
        cur = next;
    }
    out
}
