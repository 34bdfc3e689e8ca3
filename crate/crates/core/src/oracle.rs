//! Brute-force census of labelled maps: every perfect matching of the
//! half-edges of a fixed set of vertices, sorted by genus and face count.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest half-edge count [`census`] will enumerate.
pub const CENSUS_LIMIT: usize = 16;

/// Number of vertices of each valence.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexProfile {
    counts: BTreeMap<usize, usize>,
}

impl VertexProfile {
    /// Zero counts are dropped; valence 0 is rejected.
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (j, k) in pairs {
            if j == 0 {
                return Err(Error::Precondition("vertex valence must be positive".into()));
            }
            if k > 0 {
                *counts.entry(j).or_insert(0) += k;
            }
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn vertices(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn half_edges(&self) -> usize {
        self.counts.iter().map(|(j, k)| j * k).sum()
    }

    /// Valence of each vertex, in increasing valence order.
    pub fn valences(&self) -> Vec<usize> {
        self.counts.iter().flat_map(|(&j, &k)| core::iter::repeat_n(j, k)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CensusEntry {
    pub genus: usize,
    pub faces: usize,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapCensus {
    pub profile: VertexProfile,
    /// Connected gluings keyed by `(genus, faces)`.
    pub table: BTreeMap<(usize, usize), u64>,
    pub disconnected: u64,
}

impl MapCensus {
    pub fn empty(profile: VertexProfile) -> Self {
        Self { profile, table: BTreeMap::new(), disconnected: 0 }
    }

    pub fn connected(&self) -> u64 {
        self.table.values().sum()
    }

    pub fn total(&self) -> u64 {
        self.connected() + self.disconnected
    }

    pub fn count(&self, genus: usize, faces: usize) -> u64 {
        self.table.get(&(genus, faces)).copied().unwrap_or(0)
    }

    pub fn genus_count(&self, genus: usize) -> u64 {
        self.table.iter().filter(|((g, _), _)| *g == genus).map(|(_, c)| c).sum()
    }

    pub fn entries(&self) -> Vec<CensusEntry> {
        self.table.iter().map(|(&(genus, faces), &count)| CensusEntry { genus, faces, count }).collect()
    }

    /// Adds the counts of `other`, which must share the profile.
    pub fn merge(&mut self, other: &MapCensus) -> Result<()> {
        if other.profile != self.profile {
            return Err(Error::Precondition("cannot merge censuses of different profiles".into()));
        }
        for (key, c) in &other.table {
            *self.table.entry(*key).or_insert(0) += c;
        }
        self.disconnected += other.disconnected;
        Ok(())
    }
}

/// Vertex rotation `sigma`: half-edges of each vertex form a consecutive
/// block, and `sigma` advances cyclically within the block.
struct Rotation {
    sigma: Vec<usize>,
    vertex_of: Vec<usize>,
    vertices: usize,
}

impl Rotation {
    fn new(profile: &VertexProfile) -> Self {
        let mut sigma = Vec::new();
        let mut vertex_of = Vec::new();
        let valences = profile.valences();
        for (v, &j) in valences.iter().enumerate() {
            let start = sigma.len();
            for i in 0..j {
                sigma.push(start + (i + 1) % j);
                vertex_of.push(v);
            }
        }
        Self { sigma, vertex_of, vertices: valences.len() }
    }

    fn half_edges(&self) -> usize {
        self.sigma.len()
    }

    /// `(connected, faces)` for the gluing `alpha`.
    fn classify(&self, alpha: &[usize], seen: &mut [bool], parent: &mut [usize]) -> (bool, usize) {
        let h = self.half_edges();
        seen.iter_mut().for_each(|s| *s = false);
        let mut faces = 0;
        for start in 0..h {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut e = start;
            while !seen[e] {
                seen[e] = true;
                e = self.sigma[alpha[e]];
            }
        }
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i;
        }
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut components = self.vertices;
        for (e, &partner) in alpha.iter().enumerate().take(h) {
            let (a, b) = (find(parent, self.vertex_of[e]), find(parent, self.vertex_of[partner]));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        (components == 1, faces)
    }
}

struct Enumerator<'a> {
    rot: &'a Rotation,
    alpha: Vec<usize>,
    seen: Vec<bool>,
    parent: Vec<usize>,
    census: MapCensus,
}

const UNMATCHED: usize = usize::MAX;

impl Enumerator<'_> {
    fn record(&mut self) {
        let (connected, faces) = self.rot.classify(&self.alpha, &mut self.seen, &mut self.parent);
        if !connected {
            self.census.disconnected += 1;
            return;
        }
        let v = self.rot.vertices as i64;
        let e = (self.rot.half_edges() / 2) as i64;
        let two_g = 2 - v + e - faces as i64;
        debug_assert!(two_g >= 0 && two_g % 2 == 0);
        *self.census.table.entry(((two_g / 2) as usize, faces)).or_insert(0) += 1;
    }

    fn recurse(&mut self) {
        let Some(first) = self.alpha.iter().position(|&a| a == UNMATCHED) else {
            self.record();
            return;
        };
        for partner in first + 1..self.alpha.len() {
            if self.alpha[partner] != UNMATCHED {
                continue;
            }
            self.alpha[first] = partner;
            self.alpha[partner] = first;
            self.recurse();
            self.alpha[first] = UNMATCHED;
            self.alpha[partner] = UNMATCHED;
        }
    }
}

fn check_size(profile: &VertexProfile) -> Result<usize> {
    let h = profile.half_edges();
    if h > CENSUS_LIMIT {
        return Err(Error::CensusTooLarge { half_edges: h, limit: CENSUS_LIMIT });
    }
    Ok(h)
}

fn run(profile: &VertexProfile, first_partner: Option<usize>) -> MapCensus {
    let rot = Rotation::new(profile);
    let h = rot.half_edges();
    let mut en = Enumerator {
        rot: &rot,
        alpha: vec![UNMATCHED; h],
        seen: vec![false; h],
        parent: vec![0; rot.vertices],
        census: MapCensus::empty(profile.clone()),
    };
    if h % 2 == 1 {
        return en.census;
    }
    if h == 0 {
        // The empty gluing of no vertices is not a map.
        return en.census;
    }
    match first_partner {
        None => en.recurse(),
        Some(p) => {
            en.alpha[0] = p;
            en.alpha[p] = 0;
            en.recurse();
        }
    }
    en.census
}

/// Enumerates all `(H - 1)!!` matchings. Odd `H` gives an empty census.
pub fn census(profile: &VertexProfile) -> Result<MapCensus> {
    check_size(profile)?;
    Ok(run(profile, None))
}

/// The part of the census whose half-edge 0 is glued to `partner`
/// (`1 <= partner < H`). Summing over all partners gives [`census`].
pub fn census_branch(profile: &VertexProfile, partner: usize) -> Result<MapCensus> {
    let h = check_size(profile)?;
    if h % 2 == 1 {
        return Ok(MapCensus::empty(profile.clone()));
    }
    if partner == 0 || partner >= h {
        return Err(Error::Precondition("branch partner must lie in 1..H".into()));
    }
    Ok(run(profile, Some(partner)))
}

/// `prod_j (-1)^{k_j} / k_j! * sum_{genus 1} count * x^F`, the coefficient
/// of `prod_j t_j^{k_j}` in `e_1(x, t)`.
pub fn e1_coeff_from_census(census: &MapCensus, x: f64) -> f64 {
    let mut pref = 1.0;
    for &k in census.profile.counts().values() {
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        pref *= if k % 2 == 0 { 1.0 } else { -1.0 } / fact;
    }
    let sum: f64 = census
        .table
        .iter()
        .filter(|((g, _), _)| *g == 1)
        .map(|(&(_, f), &c)| c as f64 * libm::pow(x, f as f64))
        .sum();
    pref * sum
}
