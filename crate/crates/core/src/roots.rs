//! Root systems of the classical and exceptional Cartan types.
//!
//! Roots are integer vectors in the simple-root basis, weights are rational
//! vectors in the fundamental-weight basis. The Cartan matrix follows the
//! convention `cartan[i][j] = ⟨α_i, α_j^∨⟩`, so row `i` is the simple root
//! `α_i` written in fundamental weights.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use astro_float::{BigFloat, Consts, RoundingMode};
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::symalg::LinearForm;

pub const DEFAULT_WEYL_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("unsupported Cartan type {family}{rank}")]
    Unsupported { family: char, rank: usize },
    #[error("cannot parse Cartan type `{0}`")]
    Parse(String),
    #[error("Weyl group has {0} elements, above the enumeration cap")]
    CapExceeded(u64),
    #[error("index {index} out of range for rank {rank}")]
    Index { index: usize, rank: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CartanType {
    family: Family,
    rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(RootError::Unsupported {
                family: family.letter(),
                rank,
            })
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Order of the Weyl group from the classical product formulas.
    pub fn weyl_order(&self) -> u64 {
        let n = self.rank as u64;
        let fact = |k: u64| (1..=k).product::<u64>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u64 << n) * fact(n),
            Family::D => (1u64 << (n - 1)) * fact(n),
            Family::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1152,
            Family::G => 12,
        }
    }

    /// Number of positive roots.
    pub fn positive_root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Family::F => 24,
            Family::G => 6,
        }
    }

    /// Squared root lengths of the simple roots, long roots having length 2.
    fn simple_lengths(&self) -> Vec<Rational64> {
        let n = self.rank;
        let two = Rational64::from_integer(2);
        let one = Rational64::one();
        match self.family {
            Family::A | Family::D | Family::E => vec![two; n],
            Family::B => {
                let mut v = vec![two; n];
                v[n - 1] = one;
                v
            }
            Family::C => {
                let mut v = vec![one; n];
                v[n - 1] = two;
                v
            }
            Family::F => vec![two, two, one, one],
            Family::G => vec![Rational64::new(2, 3), two],
        }
    }

    /// Dynkin diagram edges (Bourbaki numbering, 0-based).
    fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        match self.family {
            Family::A | Family::B | Family::C | Family::F | Family::G => {
                (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect()
            }
            Family::D => {
                let mut e: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
                e.push((n - 3, n - 1));
                e
            }
            Family::E => {
                let mut e = vec![(0, 2), (1, 3)];
                e.extend((2..n - 1).map(|i| (i, i + 1)));
                e
            }
        }
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let d = self.simple_lengths();
        let mut gram = vec![vec![Rational64::zero(); n]; n];
        for i in 0..n {
            gram[i][i] = d[i];
        }
        for (i, j) in self.edges() {
            let m = if d[i] > d[j] { d[i] } else { d[j] };
            gram[i][j] = -m / 2;
            gram[j][i] = -m / 2;
        }
        let mut c = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let v = gram[i][j] * 2 / d[j];
                debug_assert!(v.is_integer());
                c[i][j] = v.to_integer();
            }
        }
        c
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for CartanType {
    type Err = RootError;

    /// Accepts `A3`, `a3`, `A_3`, `E8`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let mut chars = t.chars();
        let fam = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| RootError::Parse(s.to_string()))?;
        let rest = chars.as_str();
        let rest = rest.strip_prefix('_').unwrap_or(rest);
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.len() > 4 {
            return Err(RootError::Parse(s.to_string()));
        }
        let rank: usize = rest.parse().map_err(|_| RootError::Parse(s.to_string()))?;
        CartanType::new(fam, rank)
    }
}

/// A root in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub coords: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0) && self.coords.iter().any(|&c| c > 0)
    }

    pub fn neg(&self) -> Root {
        Root {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coords.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}α{}", i + 1)?;
            } else {
                write!(f, "{sign}{mag}α{}", i + 1)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A weight in the fundamental-weight basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    pub coords: Vec<Rational64>,
}

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight {
            coords: vec![Rational64::zero(); rank],
        }
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Self::zero(rank);
        w.coords[i] = Rational64::one();
        w
    }
}

/// A Weyl group element given by a word in simple reflections.
///
/// The word `[i1, ..., ik]` stands for `s_{i1} ⋯ s_{ik}`, acting on the right
/// letter first. `images[r]` is the signed image of positive root `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub word: Vec<usize>,
    images: Vec<SignedRoot>,
}

/// Index into the positive roots together with a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedRoot {
    pub index: usize,
    pub negative: bool,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn sign(&self) -> i64 {
        if self.word.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Image of the positive root with index `r`.
    pub fn image(&self, r: usize) -> SignedRoot {
        self.images[r]
    }

    /// Positive roots sent to negative roots.
    pub fn inversions(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|(_, s)| s.negative)
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan_type: CartanType,
    cartan: Vec<Vec<i64>>,
    lengths: Vec<Rational64>,
    positive: Vec<Root>,
    coroots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    simple_action: Vec<Vec<SignedRoot>>,
    rho: Weight,
}

pub fn build_root_system(ct: CartanType) -> RootSystem {
    RootSystem::new(ct)
}

impl RootSystem {
    pub fn new(ct: CartanType) -> Self {
        let n = ct.rank();
        let cartan = ct.cartan_matrix();
        let lengths = ct.simple_lengths();
        let positive = generate_positive_roots(&cartan);
        let mut index = HashMap::new();
        for (k, r) in positive.iter().enumerate() {
            index.insert(r.coords.clone(), k);
        }
        let coroots = positive
            .iter()
            .map(|r| {
                let len = root_length(&cartan, &lengths, r);
                r.coords
                    .iter()
                    .zip(&lengths)
                    .map(|(&c, &d)| {
                        let v = Rational64::from_integer(c) * d / len;
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        let mut rs = RootSystem {
            cartan_type: ct,
            cartan,
            lengths,
            positive,
            coroots,
            index,
            simple_action: Vec::new(),
            rho: Weight {
                coords: vec![Rational64::one(); n],
            },
        };
        rs.simple_action = (0..n)
            .map(|i| {
                (0..rs.positive.len())
                    .map(|k| {
                        let img = rs.reflect_simple_root(i, &rs.positive[k]);
                        rs.signed_index(&img).expect("reflection preserves roots")
                    })
                    .collect()
            })
            .collect();
        rs
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    /// Coefficients `c_i(α^∨)` of the coroot of positive root `k`.
    pub fn coroot_coeffs(&self, k: usize) -> &[i64] {
        &self.coroots[k]
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    /// Squared lengths of the simple roots (long roots have length 2).
    pub fn simple_lengths(&self) -> &[Rational64] {
        &self.lengths
    }

    pub fn root_index(&self, r: &Root) -> Option<usize> {
        self.index.get(&r.coords).copied()
    }

    pub fn signed_index(&self, r: &Root) -> Option<SignedRoot> {
        if let Some(&k) = self.index.get(&r.coords) {
            return Some(SignedRoot {
                index: k,
                negative: false,
            });
        }
        let neg = r.neg();
        self.index.get(&neg.coords).map(|&k| SignedRoot {
            index: k,
            negative: true,
        })
    }

    pub fn signed_root(&self, s: SignedRoot) -> Root {
        let r = &self.positive[s.index];
        if s.negative {
            r.neg()
        } else {
            r.clone()
        }
    }

    pub fn simple_root(&self, i: usize) -> Root {
        let mut coords = vec![0; self.rank()];
        coords[i] = 1;
        Root { coords }
    }

    /// Coroot expansion of an arbitrary root (positive or negative).
    pub fn coroot_of(&self, r: &Root) -> Vec<i64> {
        let s = self.signed_index(r).expect("not a root");
        let c = &self.coroots[s.index];
        if s.negative {
            c.iter().map(|x| -x).collect()
        } else {
            c.clone()
        }
    }

    /// The root `r` expressed in fundamental weights.
    pub fn root_weight(&self, r: &Root) -> Weight {
        let n = self.rank();
        let mut coords = vec![Rational64::zero(); n];
        for (i, &c) in r.coords.iter().enumerate() {
            for j in 0..n {
                coords[j] += Rational64::from_integer(c * self.cartan[i][j]);
            }
        }
        Weight { coords }
    }

    /// `⟨β, α_i^∨⟩` for a root given in simple-root coordinates.
    pub fn root_pair_simple(&self, beta: &Root, i: usize) -> i64 {
        beta.coords
            .iter()
            .enumerate()
            .map(|(j, &b)| b * self.cartan[j][i])
            .sum()
    }

    /// `⟨α, β^∨⟩` for two roots.
    pub fn root_pairing(&self, alpha: &Root, beta: &Root) -> i64 {
        let cb = self.coroot_of(beta);
        cb.iter()
            .enumerate()
            .map(|(i, &c)| c * self.root_pair_simple(alpha, i))
            .sum()
    }

    /// `⟨λ, α^∨⟩` for a rational weight.
    pub fn weight_pairing(&self, lam: &Weight, alpha: &Root) -> Rational64 {
        self.coroot_of(alpha)
            .iter()
            .zip(&lam.coords)
            .map(|(&c, &l)| l * c)
            .sum()
    }

    fn reflect_simple_root(&self, i: usize, beta: &Root) -> Root {
        let p = self.root_pair_simple(beta, i);
        let mut coords = beta.coords.clone();
        coords[i] -= p;
        Root { coords }
    }

    /// `s_β(α) = α − ⟨α, β^∨⟩ β`.
    pub fn reflect(&self, alpha: &Root, beta: &Root) -> Root {
        let p = self.root_pairing(alpha, beta);
        Root {
            coords: alpha.coords.iter().zip(&beta.coords).map(|(a, b)| a - p * b).collect(),
        }
    }

    /// Simple reflection on any weight-like coordinate vector over a ring.
    pub fn reflect_weight_coords<T>(&self, i: usize, coords: &mut [T])
    where
        T: Clone + std::ops::SubAssign + std::ops::Mul<i64, Output = T>,
    {
        let ci = coords[i].clone();
        for j in 0..coords.len() {
            let c = self.cartan[i][j];
            if c != 0 {
                coords[j] -= ci.clone() * c;
            }
        }
    }

    pub fn apply_weight(&self, w: &WeylElement, lam: &Weight) -> Weight {
        let mut coords = lam.coords.clone();
        for &i in w.word.iter().rev() {
            let ci = coords[i];
            for j in 0..coords.len() {
                coords[j] -= ci * self.cartan[i][j];
            }
        }
        Weight { coords }
    }

    /// Applies `w` to a weight with coefficients in any ring (linear forms,
    /// complex numbers).
    pub fn apply_generic<T>(&self, w: &WeylElement, coords: &[T]) -> Vec<T>
    where
        T: Clone + std::ops::SubAssign + std::ops::Mul<i64, Output = T>,
    {
        let mut v = coords.to_vec();
        for &i in w.word.iter().rev() {
            self.reflect_weight_coords(i, &mut v);
        }
        v
    }

    pub fn apply_root(&self, w: &WeylElement, r: &Root) -> Root {
        let s = self.signed_index(r).expect("not a root");
        let img = w.images[s.index];
        let img = SignedRoot {
            index: img.index,
            negative: img.negative != s.negative,
        };
        self.signed_root(img)
    }

    /// Builds a Weyl element from a word.
    pub fn weyl_element(&self, word: &[usize]) -> Result<WeylElement, RootError> {
        let n = self.rank();
        if let Some(&bad) = word.iter().find(|&&i| i >= n) {
            return Err(RootError::Index { index: bad, rank: n });
        }
        let mut images: Vec<SignedRoot> = (0..self.positive.len())
            .map(|k| SignedRoot {
                index: k,
                negative: false,
            })
            .collect();
        for &i in word.iter().rev() {
            for img in images.iter_mut() {
                let t = self.simple_action[i][img.index];
                *img = SignedRoot {
                    index: t.index,
                    negative: t.negative != img.negative,
                };
            }
        }
        Ok(WeylElement {
            word: word.to_vec(),
            images,
        })
    }

    /// Breadth-first enumeration of W by reduced words.
    pub fn enumerate_weyl(&self, cap: u64) -> Result<Vec<WeylElement>, RootError> {
        let order = self.cartan_type.weyl_order();
        if order > cap {
            return Err(RootError::CapExceeded(order));
        }
        let n = self.rank();
        let rho: Vec<i64> = vec![1; n];
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        seen.insert(rho.clone(), 0);
        let identity = self.weyl_element(&[])?;
        let mut elems = vec![(identity, rho)];
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for i in 0..n {
                let mut img = elems[k].1.clone();
                let ci = img[i];
                for j in 0..n {
                    img[j] -= ci * self.cartan[i][j];
                }
                if seen.contains_key(&img) {
                    continue;
                }
                let (w, _) = &elems[k];
                let mut word = Vec::with_capacity(w.word.len() + 1);
                word.push(i);
                word.extend_from_slice(&w.word);
                let images = w
                    .images
                    .iter()
                    .map(|img| {
                        let t = self.simple_action[i][img.index];
                        SignedRoot {
                            index: t.index,
                            negative: t.negative != img.negative,
                        }
                    })
                    .collect();
                seen.insert(img.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push((WeylElement { word, images }, img));
            }
        }
        debug_assert_eq!(elems.len() as u64, order);
        Ok(elems.into_iter().map(|(w, _)| w).collect())
    }

    /// The element sending every positive root to a negative root.
    pub fn longest_element(&self, cap: u64) -> Result<WeylElement, RootError> {
        let all = self.enumerate_weyl(cap)?;
        Ok(all
            .into_iter()
            .find(|w| w.images.iter().all(|s| s.negative))
            .expect("w_long exists"))
    }

    /// `(λ, μ)` where μ is given in simple-root coordinates, using the
    /// normalization in which long roots have squared length 2.
    pub fn weight_root_inner(&self, lam: &Weight, mu_root_coords: &[Rational64]) -> Rational64 {
        lam.coords
            .iter()
            .zip(mu_root_coords)
            .zip(&self.lengths)
            .map(|((&l, &m), &d)| l * m * d / 2)
            .sum()
    }

    /// ρ in simple-root coordinates.
    pub fn rho_root_coords(&self) -> Vec<Rational64> {
        let mut v = vec![Rational64::zero(); self.rank()];
        for r in &self.positive {
            for (acc, &c) in v.iter_mut().zip(&r.coords) {
                *acc += Rational64::new(c, 2);
            }
        }
        v
    }

    /// Exact inverse of the Cartan matrix, as `inv[i][j]` with
    /// `Σ_j cartan[i][j] inv[j][k] = δ_ik`.
    pub fn cartan_inverse(&self) -> Vec<Vec<Rational64>> {
        let n = self.rank();
        let mut a: Vec<Vec<Rational64>> = self
            .cartan
            .iter()
            .map(|row| row.iter().map(|&x| Rational64::from_integer(x)).collect())
            .collect();
        let mut inv: Vec<Vec<Rational64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational64::one() } else { Rational64::zero() })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .expect("Cartan matrix is invertible");
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col];
            for j in 0..n {
                a[col][j] /= p;
                inv[col][j] /= p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col];
                    for j in 0..n {
                        let t = a[col][j];
                        a[r][j] -= f * t;
                        let t = inv[col][j];
                        inv[r][j] -= f * t;
                    }
                }
            }
        }
        inv
    }

    /// Converts coweight coordinates `m_j = ⟨α_j, μ^∨⟩` into simple-coroot
    /// coordinates `k` with `μ^∨ = Σ k_i α_i^∨`.
    pub fn coroot_coords_from_coweight(&self, m: &[Rational64]) -> Vec<Rational64> {
        // m_j = Σ_i cartan[j][i] k_i
        let inv = self.cartan_inverse();
        (0..self.rank())
            .map(|i| (0..self.rank()).map(|j| inv[i][j] * m[j]).sum())
            .collect()
    }

    /// Coweight coordinates of `Σ k_i α_i^∨`.
    pub fn coweight_from_coroot_coords(&self, k: &[Rational64]) -> Vec<Rational64> {
        (0..self.rank())
            .map(|j| (0..self.rank()).map(|i| k[i] * self.cartan[j][i]).sum())
            .collect()
    }

    /// Connected components of the Dynkin diagram restricted to `nodes`.
    pub fn dynkin_components(&self, nodes: &BTreeSet<usize>) -> Vec<Vec<usize>> {
        let mut left: BTreeSet<usize> = nodes.clone();
        let mut comps = Vec::new();
        while let Some(&start) = left.iter().next() {
            left.remove(&start);
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                let adj: Vec<usize> = left.iter().copied().filter(|&v| self.cartan[u][v] != 0).collect();
                for v in adj {
                    left.remove(&v);
                    comp.push(v);
                    stack.push(v);
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Cartan type of a connected sub-diagram.
    pub fn classify_component(&self, nodes: &[usize]) -> CartanType {
        let r = nodes.len();
        let adj = |u: usize, v: usize| self.cartan[u][v] != 0 && u != v;
        let degree = |u: usize| nodes.iter().filter(|&&v| adj(u, v)).count();
        if let Some(&branch) = nodes.iter().find(|&&u| degree(u) == 3) {
            let mut arms: Vec<usize> = nodes
                .iter()
                .copied()
                .filter(|&v| adj(branch, v))
                .map(|first| {
                    let mut len = 1;
                    let (mut prev, mut cur) = (branch, first);
                    loop {
                        let next = nodes.iter().copied().find(|&w| w != prev && adj(cur, w));
                        match next {
                            Some(w) => {
                                len += 1;
                                prev = cur;
                                cur = w;
                            }
                            None => break len,
                        }
                    }
                })
                .collect();
            arms.sort_unstable();
            let family = if arms[0] == 1 && arms[1] == 1 {
                Family::D
            } else {
                Family::E
            };
            return CartanType { family, rank: r };
        }
        let mut max_bond = 1;
        let mut bond_at_end = false;
        let mut short_end = false;
        for &u in nodes {
            for &v in nodes {
                if u < v && adj(u, v) {
                    let b = self.cartan[u][v] * self.cartan[v][u];
                    if b > max_bond {
                        max_bond = b;
                        let end_u = degree(u) == 1;
                        let end_v = degree(v) == 1;
                        bond_at_end = end_u || end_v || r == 2;
                        let (end, other) = if end_v { (v, u) } else { (u, v) };
                        short_end = self.lengths[end] < self.lengths[other];
                    }
                }
            }
        }
        let family = match max_bond {
            1 => Family::A,
            3 => Family::G,
            _ if r == 2 => Family::B,
            _ if !bond_at_end => Family::F,
            _ if short_end => Family::B,
            _ => Family::C,
        };
        CartanType { family, rank: r }
    }

    /// Both sides of the Weyl denominator identity at `ερ`, evaluated with
    /// `precision` bits.
    pub fn weyl_denominator_check(
        &self,
        epsilon: Rational64,
        precision: usize,
        cap: u64,
    ) -> Result<(BigFloat, BigFloat), RootError> {
        let rm = RoundingMode::ToEven;
        let p = precision;
        let mut cc = Consts::new().expect("astro-float constants");
        let eps = BigFloat::from_i64(*epsilon.numer(), p).div(&BigFloat::from_i64(*epsilon.denom(), p), p, rm);
        let rat = |q: Rational64| BigFloat::from_i64(*q.numer(), p).div(&BigFloat::from_i64(*q.denom(), p), p, rm);
        let rho_root = self.rho_root_coords();
        let mut lhs = BigFloat::from_i64(0, p);
        for w in self.enumerate_weyl(cap)? {
            let wr = self.apply_weight(&w, &self.rho);
            let ip = self.weight_root_inner(&wr, &rho_root);
            let term = eps.mul(&rat(ip), p, rm).exp(p, rm, &mut cc);
            lhs = if w.sign() > 0 {
                lhs.add(&term, p, rm)
            } else {
                lhs.sub(&term, p, rm)
            };
        }
        let mut rhs = BigFloat::from_i64(1, p);
        let half = BigFloat::from_i64(1, p).div(&BigFloat::from_i64(2, p), p, rm);
        for r in &self.positive {
            let rc: Vec<Rational64> = r.coords.iter().map(|&c| Rational64::from_integer(c)).collect();
            let ip = self.weight_root_inner(&self.rho, &rc);
            let x = eps.mul(&rat(ip), p, rm).mul(&half, p, rm);
            let a = x.exp(p, rm, &mut cc);
            let b = x.neg().exp(p, rm, &mut cc);
            rhs = rhs.mul(&a.sub(&b, p, rm), p, rm);
        }
        Ok((lhs, rhs))
    }
}

/// `⟨λ, α^∨⟩` where λ has linear-form coordinates in the fundamental-weight basis.
pub fn pair(lam: &[LinearForm], alpha: &Root, rs: &RootSystem) -> LinearForm {
    let c = rs.coroot_of(alpha);
    let mut acc = LinearForm::zero();
    for (coef, l) in c.iter().zip(lam) {
        if *coef != 0 {
            acc += l.scale(Rational64::from_integer(*coef));
        }
    }
    acc
}

pub fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    let s = format!("{x}");
    s.parse::<f64>().unwrap_or(f64::NAN)
}

fn root_length(cartan: &[Vec<i64>], lengths: &[Rational64], r: &Root) -> Rational64 {
    // (α_i, α_j) = ⟨α_i, α_j^∨⟩ (α_j, α_j) / 2
    let n = lengths.len();
    let mut acc = Rational64::zero();
    for i in 0..n {
        for j in 0..n {
            if r.coords[i] != 0 && r.coords[j] != 0 {
                acc += Rational64::from_integer(r.coords[i] * r.coords[j] * cartan[i][j]) * lengths[j] / 2;
            }
        }
    }
    acc
}

fn generate_positive_roots(cartan: &[Vec<i64>]) -> Vec<Root> {
    let n = cartan.len();
    let pair_simple = |beta: &[i64], i: usize| -> i64 { beta.iter().enumerate().map(|(j, &b)| b * cartan[j][i]).sum() };
    let mut all: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut layer: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    all.extend(layer.iter().cloned());
    while !layer.is_empty() {
        let mut next: BTreeSet<Vec<i64>> = BTreeSet::new();
        for beta in &layer {
            for i in 0..n {
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if all.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let q = p - pair_simple(beta, i);
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !all.contains(&up) {
                        next.insert(up);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next.into_iter().collect();
    }
    let mut roots: Vec<Root> = all.into_iter().map(|coords| Root { coords }).collect();
    roots.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.coords.cmp(&a.coords)));
    roots
}

pub fn rational_to_f64(q: Rational64) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}
