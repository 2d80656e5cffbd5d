//! Exact linear algebra over 𝔽₂ and `ℤ/2^M`, and the subquotient cells
//! (`Z/B` per lattice point) that both the oracle and the `BP_ℝ` pages are
//! computed with.

use std::fmt;

/// A vector in `𝔽₂^dim`, packed into words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vec {
    dim: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zero(dim: usize) -> Self {
        F2Vec { dim, words: vec![0; dim.div_ceil(64)] }
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.set(i, true);
        v
    }

    pub fn from_bits(dim: usize, bits: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zero(dim);
        for i in bits {
            v.flip(i);
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, on: bool) {
        if self.get(i) != on {
            self.flip(i);
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.dim);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn add_assign(&mut self, other: &F2Vec) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Lowest set index.
    pub fn leading(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).filter(move |&i| self.get(i))
    }
}

impl fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.dim).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "[{s}]")
    }
}

/// A linear map `𝔽₂^src → 𝔽₂^tgt`, stored by the images of basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Map {
    tgt: usize,
    cols: Vec<F2Vec>,
}

impl F2Map {
    pub fn zero(src: usize, tgt: usize) -> Self {
        F2Map { tgt, cols: vec![F2Vec::zero(tgt); src] }
    }

    pub fn from_columns(tgt: usize, cols: Vec<F2Vec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.dim() == tgt));
        F2Map { tgt, cols }
    }

    pub fn src_dim(&self) -> usize {
        self.cols.len()
    }

    pub fn tgt_dim(&self) -> usize {
        self.tgt
    }

    pub fn apply(&self, v: &F2Vec) -> F2Vec {
        let mut out = F2Vec::zero(self.tgt);
        for i in v.ones() {
            out.add_assign(&self.cols[i]);
        }
        out
    }

    pub fn compose(&self, first: &F2Map) -> F2Map {
        F2Map { tgt: self.tgt, cols: first.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(F2Vec::is_zero)
    }
}

/// A subspace of `𝔽₂^dim` kept in reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Space {
    dim: usize,
    /// Basis vectors with pairwise distinct leading indices; no basis vector
    /// has a bit set at another's leading index.
    rows: Vec<F2Vec>,
}

impl F2Space {
    pub fn zero(dim: usize) -> Self {
        F2Space { dim, rows: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        F2Space { dim, rows: (0..dim).map(|i| F2Vec::unit(dim, i)).collect() }
    }

    pub fn spanned_by<'a>(dim: usize, vs: impl IntoIterator<Item = &'a F2Vec>) -> Self {
        let mut s = Self::zero(dim);
        for v in vs {
            s.insert(v.clone());
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[F2Vec] {
        &self.rows
    }

    /// `v` minus its component in this space (with respect to the echelon
    /// basis); zero iff `v` lies in the space.
    pub fn reduce(&self, v: &F2Vec) -> F2Vec {
        let mut v = v.clone();
        for r in &self.rows {
            let lead = r.leading().expect("basis vectors are nonzero");
            if v.get(lead) {
                v.add_assign(r);
            }
        }
        v
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: F2Vec) -> bool {
        let v = self.reduce(&v);
        let Some(lead) = v.leading() else {
            return false;
        };
        for r in &mut self.rows {
            if r.get(lead) {
                r.add_assign(&v);
            }
        }
        self.rows.push(v);
        self.rows.sort_by_key(|r| r.leading());
        true
    }

    pub fn is_subspace_of(&self, other: &F2Space) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }
}

/// Coefficient vectors `c` (over the index set of `vectors`) with
/// `Σ cᵢ·vectorsᵢ ∈ modulo`.
pub fn combinations_into(vectors: &[F2Vec], modulo: &F2Space) -> Vec<F2Vec> {
    let g = vectors.len();
    // Eliminate on reduced images, carrying the combination alongside.
    let mut pivots: Vec<(usize, F2Vec, F2Vec)> = Vec::new();
    let mut kernel = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut img = modulo.reduce(v);
        let mut combo = F2Vec::unit(g, i);
        for (lead, pimg, pcombo) in &pivots {
            if img.get(*lead) {
                img.add_assign(pimg);
                combo.add_assign(pcombo);
            }
        }
        let img = modulo.reduce(&img);
        match img.leading() {
            None => kernel.push(combo),
            Some(lead) => pivots.push((lead, img, combo)),
        }
    }
    kernel
}

/// Odd residues mod 2^64 are units; Newton iteration for the inverse.
fn inverse_odd(u: u64) -> u64 {
    debug_assert!(u & 1 == 1);
    let mut inv = u;
    for _ in 0..6 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(u.wrapping_mul(inv)));
    }
    inv
}

/// Arithmetic in `ℤ/2^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zmod2 {
    m: u32,
}

impl Zmod2 {
    pub fn new(m: u32) -> Self {
        assert!((1..=62).contains(&m), "precision {m} out of range");
        Zmod2 { m }
    }

    pub fn precision(&self) -> u32 {
        self.m
    }

    pub fn mask(&self) -> u64 {
        (1u64 << self.m) - 1
    }

    pub fn norm(&self, x: i64) -> u64 {
        (x as u64) & self.mask()
    }

    pub fn valuation(&self, x: u64) -> u32 {
        let x = x & self.mask();
        if x == 0 {
            self.m
        } else {
            x.trailing_zeros()
        }
    }

    /// `a / b` where `v(a) ≥ v(b)`; one of the (many) quotients.
    pub fn div_exact(&self, a: u64, b: u64) -> u64 {
        let (va, vb) = (self.valuation(a), self.valuation(b));
        debug_assert!(va >= vb && vb < self.m);
        let q = (a >> vb).wrapping_mul(inverse_odd(b >> vb));
        q & self.mask()
    }
}

/// A subgroup of `(ℤ/2^m)^dim` given by generators, kept in Howell form:
/// generator `i` has pivot row `pᵢ` with entry `2^{vᵢ}`, zero above `pᵢ`,
/// pivots strictly increasing, and every element is uniquely
/// `Σ cᵢ·genᵢ` with `cᵢ ∈ ℤ/2^{m−vᵢ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZLattice {
    ring: Zmod2,
    dim: usize,
    gens: Vec<Vec<u64>>,
}

impl ZLattice {
    pub fn full(dim: usize, m: u32) -> Self {
        let gens = (0..dim)
            .map(|i| {
                let mut g = vec![0; dim];
                g[i] = 1;
                g
            })
            .collect();
        ZLattice { ring: Zmod2::new(m), dim, gens }
    }

    pub fn generated_by(dim: usize, m: u32, gens: Vec<Vec<u64>>) -> Self {
        let mut l = ZLattice { ring: Zmod2::new(m), dim, gens };
        l.normalize();
        l
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }

    pub fn precision(&self) -> u32 {
        self.ring.m
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.gens
    }

    /// log₂ of the subgroup order.
    pub fn order_log2(&self) -> u64 {
        self.gens
            .iter()
            .map(|g| {
                let pivot = g.iter().find(|&&x| x != 0).copied().unwrap_or(0);
                u64::from(self.ring.m - self.ring.valuation(pivot))
            })
            .sum()
    }

    /// log₂ of the index in `(ℤ/2^m)^dim`.
    pub fn index_log2(&self) -> u64 {
        u64::from(self.ring.m) * self.dim as u64 - self.order_log2()
    }

    fn normalize(&mut self) {
        let ring = self.ring;
        let mask = ring.mask();
        let mut pending: Vec<Vec<u64>> = std::mem::take(&mut self.gens);
        for g in &mut pending {
            for x in g.iter_mut() {
                *x &= mask;
            }
        }
        let mut out = Vec::new();
        for row in 0..self.dim {
            pending.retain(|g| g.iter().any(|&x| x != 0));
            let best = pending
                .iter()
                .enumerate()
                .filter(|(_, g)| g[row] != 0)
                .min_by_key(|(_, g)| ring.valuation(g[row]))
                .map(|(i, _)| i);
            let Some(bi) = best else { continue };
            let mut piv = pending.swap_remove(bi);
            let v = ring.valuation(piv[row]);
            // Scale the pivot entry to exactly 2^v.
            let unit_inv = inverse_odd(piv[row] >> v);
            for x in piv.iter_mut() {
                *x = x.wrapping_mul(unit_inv) & mask;
            }
            for g in pending.iter_mut() {
                if g[row] != 0 {
                    let q = ring.div_exact(g[row], piv[row]);
                    for (x, p) in g.iter_mut().zip(&piv) {
                        *x = x.wrapping_sub(q.wrapping_mul(*p)) & mask;
                    }
                }
            }
            // 2^{m−v}·piv vanishes in this row but may not below it.
            if v > 0 {
                let ann: Vec<u64> = piv.iter().map(|&x| (x << (ring.m - v)) & mask).collect();
                pending.push(ann);
            }
            out.push(piv);
        }
        self.gens = out;
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        let ring = self.ring;
        let mask = ring.mask();
        let mut x: Vec<u64> = x.iter().map(|&v| v & mask).collect();
        for g in &self.gens {
            let row = g.iter().position(|&e| e != 0).expect("generators are nonzero");
            if x[..row].iter().any(|&e| e != 0) {
                return false;
            }
            if x[row] != 0 {
                if ring.valuation(x[row]) < ring.valuation(g[row]) {
                    return false;
                }
                let q = ring.div_exact(x[row], g[row]);
                for (a, b) in x.iter_mut().zip(g) {
                    *a = a.wrapping_sub(q.wrapping_mul(*b)) & mask;
                }
            }
        }
        x.iter().all(|&e| e == 0)
    }

    /// Generators reduced mod 2.
    pub fn mod2_generators(&self) -> Vec<F2Vec> {
        self.gens
            .iter()
            .map(|g| F2Vec::from_bits(self.dim, g.iter().enumerate().filter(|(_, &x)| x & 1 == 1).map(|(i, _)| i)))
            .collect()
    }
}

/// Diagonal valuations of the Smith normal form of a `rows × cols` matrix
/// over `ℤ/2^m` (entries of valuation `m`, i.e. zero, are omitted).
pub fn smith_valuations(m: u32, matrix: &[Vec<u64>]) -> Vec<u32> {
    let ring = Zmod2::new(m);
    let mask = ring.mask();
    let mut a: Vec<Vec<u64>> = matrix.iter().map(|r| r.iter().map(|&x| x & mask).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut live_rows: Vec<usize> = (0..rows).collect();
    let mut live_cols: Vec<usize> = (0..cols).collect();
    loop {
        let mut best: Option<(u32, usize, usize)> = None;
        for &r in &live_rows {
            for &c in &live_cols {
                let v = ring.valuation(a[r][c]);
                if v < m && best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, r, c));
                }
            }
        }
        let Some((v, pr, pc)) = best else { break };
        let p = a[pr][pc];
        for &r in &live_rows {
            if r != pr && a[r][pc] != 0 {
                let q = ring.div_exact(a[r][pc], p);
                for c in 0..cols {
                    a[r][c] = a[r][c].wrapping_sub(q.wrapping_mul(a[pr][c])) & mask;
                }
            }
        }
        for &c in &live_cols {
            if c != pc && a[pr][c] != 0 {
                let q = ring.div_exact(a[pr][c], p);
                for r in 0..rows {
                    a[r][c] = a[r][c].wrapping_sub(q.wrapping_mul(a[r][pc])) & mask;
                }
            }
        }
        diag.push(v);
        live_rows.retain(|&r| r != pr);
        live_cols.retain(|&c| c != pc);
    }
    diag.sort_unstable();
    diag
}

/// One lattice point's page: a subquotient of its E₂ group.
///
/// Torsion points are `Z/B` inside `𝔽₂^dim`. Filtration-zero points are a
/// subgroup `Z ⊆ (ℤ/2^m)^dim`; nothing ever hits filtration zero, so they
/// carry no boundaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Mod2 { z: F2Space, b: F2Space },
    Integral { z: ZLattice },
}

impl Cell {
    pub fn torsion(dim: usize) -> Self {
        Cell::Mod2 { z: F2Space::full(dim), b: F2Space::zero(dim) }
    }

    pub fn integral(dim: usize, m: u32) -> Self {
        Cell::Integral { z: ZLattice::full(dim, m) }
    }

    pub fn ambient(&self) -> usize {
        match self {
            Cell::Mod2 { z, .. } => z.ambient(),
            Cell::Integral { z } => z.ambient(),
        }
    }

    pub fn order_log2(&self) -> u64 {
        match self {
            Cell::Mod2 { z, b } => (z.rank() - b.rank()) as u64,
            Cell::Integral { z } => z.order_log2(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.order_log2() == 0
    }

    /// Mod-2 images of a generating set of the cycles.
    pub fn cycle_generators(&self) -> Vec<F2Vec> {
        match self {
            Cell::Mod2 { z, .. } => z.basis().to_vec(),
            Cell::Integral { z } => z.mod2_generators(),
        }
    }

    fn boundaries(&self) -> Option<&F2Space> {
        match self {
            Cell::Mod2 { b, .. } => Some(b),
            Cell::Integral { .. } => None,
        }
    }
}

/// The outcome of evaluating one differential on a pair of cells.
#[derive(Clone, Debug)]
pub struct ArrowEffect {
    /// New cycles of the source.
    pub source: Cell,
    /// Vectors to add to the target's boundaries.
    pub new_boundaries: Vec<F2Vec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellError {
    /// The map does not carry boundaries into boundaries.
    NotWellDefined,
    /// Filtration-zero cells cannot be targets.
    IntegralTarget,
    DimensionMismatch,
}

/// Evaluate `d: source → target` given as a map on mod-2 coordinates
/// (every target is 2-torsion, so `d` factors through reduction mod 2).
/// Both cells are read in their page-`r` state.
pub fn evaluate_arrow(source: &Cell, target: &Cell, d: &F2Map) -> Result<ArrowEffect, CellError> {
    if d.src_dim() != source.ambient() || d.tgt_dim() != target.ambient() {
        return Err(CellError::DimensionMismatch);
    }
    let tb = target.boundaries().ok_or(CellError::IntegralTarget)?;
    if let Some(sb) = source.boundaries() {
        if !sb.basis().iter().all(|v| tb.contains(&d.apply(v))) {
            return Err(CellError::NotWellDefined);
        }
    }
    let gens = source.cycle_generators();
    let images: Vec<F2Vec> = gens.iter().map(|g| d.apply(g)).collect();
    let kernel = combinations_into(&images, tb);
    let new_source = match source {
        Cell::Mod2 { b, .. } => {
            let mut z = b.clone();
            for c in &kernel {
                let mut v = F2Vec::zero(source.ambient());
                for i in c.ones() {
                    v.add_assign(&gens[i]);
                }
                z.insert(v);
            }
            Cell::Mod2 { z, b: b.clone() }
        }
        Cell::Integral { z } => {
            let ring = Zmod2::new(z.precision());
            let mask = ring.mask();
            let old = z.generators();
            let mut new_gens: Vec<Vec<u64>> =
                old.iter().map(|g| g.iter().map(|&x| (x << 1) & mask).collect()).collect();
            for c in &kernel {
                let mut v = vec![0u64; z.ambient()];
                for i in c.ones() {
                    for (a, b) in v.iter_mut().zip(&old[i]) {
                        *a = a.wrapping_add(*b) & mask;
                    }
                }
                new_gens.push(v);
            }
            Cell::Integral { z: ZLattice::generated_by(z.ambient(), z.precision(), new_gens) }
        }
    };
    Ok(ArrowEffect { source: new_source, new_boundaries: images })
}

impl Cell {
    /// Adds boundaries produced by an incoming arrow.
    pub fn absorb(&mut self, boundaries: &[F2Vec]) -> Result<(), CellError> {
        match self {
            Cell::Mod2 { z, b } => {
                for v in boundaries {
                    debug_assert!(z.contains(v));
                    b.insert(v.clone());
                }
                Ok(())
            }
            Cell::Integral { .. } => {
                if boundaries.iter().all(F2Vec::is_zero) {
                    Ok(())
                } else {
                    Err(CellError::IntegralTarget)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn echelon_and_reduce() {
        let mut s = F2Space::zero(4);
        assert!(s.insert(F2Vec::from_bits(4, [0, 1])));
        assert!(s.insert(F2Vec::from_bits(4, [1, 2])));
        assert!(!s.insert(F2Vec::from_bits(4, [0, 2])));
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&F2Vec::from_bits(4, [0, 2])));
        assert!(!s.contains(&F2Vec::unit(4, 3)));
    }

    #[test]
    fn kernel_combinations() {
        let vs = vec![F2Vec::from_bits(3, [0]), F2Vec::from_bits(3, [1]), F2Vec::from_bits(3, [0, 1])];
        let k = combinations_into(&vs, &F2Space::zero(3));
        assert_eq!(k, vec![F2Vec::from_bits(3, [0, 1, 2])]);
        let k = combinations_into(&vs, &F2Space::spanned_by(3, [&F2Vec::unit(3, 0)]));
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn rank_nullity_random() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let (src, tgt) = (rng.gen_range(1..12), rng.gen_range(1..12));
            let cols: Vec<F2Vec> = (0..src)
                .map(|_| F2Vec::from_bits(tgt, (0..tgt).filter(|_| rng.gen_bool(0.3))))
                .collect();
            let image = F2Space::spanned_by(tgt, &cols);
            let kernel = combinations_into(&cols, &F2Space::zero(tgt));
            assert_eq!(image.rank() + kernel.len(), src);
            let map = F2Map::from_columns(tgt, cols);
            assert!(kernel.iter().all(|k| map.apply(k).is_zero()));
        }
    }

    #[test]
    fn lattice_orders() {
        // ⟨(2, 1)⟩ in (ℤ/8)²: the Howell form needs the extra generator
        // 4·(2,1) = (0,4), and the order is 8.
        let l = ZLattice::generated_by(2, 3, vec![vec![2, 1]]);
        assert_eq!(l.order_log2(), 3);
        assert!(l.contains(&[4, 2]));
        assert!(!l.contains(&[0, 2]));
        assert!(l.contains(&[0, 0]));
        assert_eq!(ZLattice::full(3, 4).order_log2(), 12);
        assert_eq!(ZLattice::full(3, 4).index_log2(), 0);
    }

    #[test]
    fn smith_and_howell_agree() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..200 {
            let m = rng.gen_range(1..7);
            let dim = rng.gen_range(1..5);
            let ngen = rng.gen_range(0..5);
            let gens: Vec<Vec<u64>> =
                (0..ngen).map(|_| (0..dim).map(|_| rng.gen_range(0..(1u64 << m))).collect()).collect();
            let l = ZLattice::generated_by(dim, m, gens.clone());
            // rows of the Smith matrix are ambient coordinates
            let matrix: Vec<Vec<u64>> = (0..dim).map(|r| gens.iter().map(|g| g[r]).collect()).collect();
            let snf: u64 = smith_valuations(m, &matrix).iter().map(|&v| u64::from(m - v)).sum();
            assert_eq!(l.order_log2(), snf, "gens {gens:?} m={m}");
            for g in &gens {
                assert!(l.contains(g));
            }
        }
    }

    #[test]
    fn brute_force_lattice_order() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..40 {
            let m = rng.gen_range(1..4);
            let dim = rng.gen_range(1..3);
            let q = 1u64 << m;
            let gens: Vec<Vec<u64>> = (0..rng.gen_range(0..3))
                .map(|_| (0..dim).map(|_| rng.gen_range(0..q)).collect())
                .collect();
            let mut seen = std::collections::BTreeSet::new();
            seen.insert(vec![0u64; dim]);
            loop {
                let before = seen.len();
                let cur: Vec<Vec<u64>> = seen.iter().cloned().collect();
                for x in &cur {
                    for g in &gens {
                        seen.insert(x.iter().zip(g).map(|(a, b)| (a + b) % q).collect());
                    }
                }
                if seen.len() == before {
                    break;
                }
            }
            let l = ZLattice::generated_by(dim, m, gens);
            assert_eq!(1u64 << l.order_log2(), seen.len() as u64);
        }
    }

    #[test]
    fn integral_cell_kernel() {
        // ℤ/16 → 𝔽₂ by reduction: kernel 2ℤ/16 has order 8.
        let src = Cell::integral(1, 4);
        let tgt = Cell::torsion(1);
        let d = F2Map::from_columns(1, vec![F2Vec::unit(1, 0)]);
        let eff = evaluate_arrow(&src, &tgt, &d).unwrap();
        assert_eq!(eff.source.order_log2(), 3);
        let mut t = tgt.clone();
        t.absorb(&eff.new_boundaries).unwrap();
        assert_eq!(t.order_log2(), 0);
        assert_eq!(evaluate_arrow(&tgt, &src, &d).unwrap_err(), CellError::IntegralTarget);
    }

    #[test]
    fn boundaries_must_map_to_boundaries() {
        let mut src = Cell::torsion(1);
        src.absorb(&[F2Vec::unit(1, 0)]).unwrap();
        let tgt = Cell::torsion(1);
        let d = F2Map::from_columns(1, vec![F2Vec::unit(1, 0)]);
        assert_eq!(evaluate_arrow(&src, &tgt, &d).unwrap_err(), CellError::NotWellDefined);
    }
}
