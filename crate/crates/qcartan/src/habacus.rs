//! The 4-runner bead diagram for strict partitions (p = 2).
//!
//! A strict partition puts one bead at each part. Positions are laid out on
//! three runners: the even positions `2, 4, 6, ...` descend on the left,
//! and the odd positions split into the runner of 1 (`1, 5, 9, ...`) and
//! the runner of 3 (`3, 7, 11, ...`). Four moves shrink the diagram:
//!
//! 1. slide an even bead up by 2,
//! 2. remove the bead at position 2,
//! 3. slide a bead up by 4 along its odd runner,
//! 4. remove the beads at positions 1 and 3 together.
//!
//! Stalemates are exactly `{}`, `(1, 5, ..., 4m+1)` and `(3, 7, ..., 4m+3)`;
//! the stalemate reached from `lambda` is its H-core, independent of the
//! order in which moves fire. The H-quotient reads the two odd runners as a
//! two-sided 0-1 sequence and extracts a partition from the resulting Maya
//! diagram. Unfolding (the diagonal hook lengths) carries 2-cores onto the
//! stalemate set preserving size.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::determinants::delta_block;
use crate::fock;
use crate::partitions::{enumerate_partitions, BlockIndex, Partition};
use crate::qpoly::{product_of, ProductForm, QPoly};
use crate::weights::{glaisher, weight_e, weight_g};
use crate::{Error, Result};

/// Bead diagram of a strict partition: the set of occupied positions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HAbacus {
    beads: BTreeSet<u64>,
}

/// One applicable move, ordered by the numbered priority and then by
/// position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Move {
    /// (1) slide the even bead at the given position up by 2.
    UpEven(u64),
    /// (2) remove the bead at position 2.
    RemoveTwo,
    /// (3) slide the odd bead at the given position up by 4.
    UpOdd(u64),
    /// (4) remove the beads at positions 1 and 3.
    RemovePair,
}

impl HAbacus {
    pub fn new(lambda: &Partition) -> Result<Self> {
        if !lambda.is_strict() {
            return Err(Error::NotStrict(lambda.to_string()));
        }
        Ok(HAbacus { beads: lambda.parts().iter().map(|&x| x as u64).collect() })
    }

    pub fn beads(&self) -> &BTreeSet<u64> {
        &self.beads
    }

    /// The strict partition currently on the abacus.
    pub fn to_partition(&self) -> Partition {
        Partition::new(self.beads.iter().rev().map(|&x| x as u32).collect())
            .expect("beads are positive and distinct")
    }

    /// Every applicable move, in priority order.
    pub fn applicable_moves(&self) -> Vec<Move> {
        let mut moves = Vec::new();
        for &b in &self.beads {
            if b % 2 == 0 && b >= 4 && !self.beads.contains(&(b - 2)) {
                moves.push(Move::UpEven(b));
            }
        }
        if self.beads.contains(&2) {
            moves.push(Move::RemoveTwo);
        }
        for &b in &self.beads {
            if b % 2 == 1 && b >= 5 && !self.beads.contains(&(b - 4)) {
                moves.push(Move::UpOdd(b));
            }
        }
        if self.beads.contains(&1) && self.beads.contains(&3) {
            moves.push(Move::RemovePair);
        }
        moves.sort();
        moves
    }

    pub fn apply(&self, mv: Move) -> HAbacus {
        let mut beads = self.beads.clone();
        match mv {
            Move::UpEven(b) => {
                assert!(beads.remove(&b) && b >= 4 && beads.insert(b - 2));
            }
            Move::RemoveTwo => {
                assert!(beads.remove(&2));
            }
            Move::UpOdd(b) => {
                assert!(beads.remove(&b) && b >= 5 && beads.insert(b - 4));
            }
            Move::RemovePair => {
                assert!(beads.remove(&1) && beads.remove(&3));
            }
        }
        HAbacus { beads }
    }

    pub fn is_stalemate(&self) -> bool {
        self.applicable_moves().is_empty()
    }
}

/// The H-core: the stalemate reached by exhaustively applying the moves.
/// Deterministically the highest-priority move at the lowest position fires
/// first; the stalemate itself does not depend on the order.
pub fn h_core(lambda: &Partition) -> Result<Partition> {
    let mut abacus = HAbacus::new(lambda)?;
    while let Some(&mv) = abacus.applicable_moves().first() {
        abacus = abacus.apply(mv);
    }
    Ok(abacus.to_partition())
}

/// Membership in the stalemate set: empty, `(1, 5, ..., 4m+1)` or
/// `(3, 7, ..., 4m+3)` (parts listed here ascending).
pub fn is_h_core(lambda: &Partition) -> bool {
    if lambda.is_empty() {
        return true;
    }
    let mut parts: Vec<u32> = lambda.parts().to_vec();
    parts.reverse();
    let start = parts[0];
    (start == 1 || start == 3) && parts.iter().enumerate().all(|(i, &x)| x == start + 4 * i as u32)
}

/// The H-quotient: reads the runner of 3 bottom-up (bead = 0, gap = 1) and
/// the runner of 1 top-down (bead = 1, gap = 0), concatenates the two
/// readings into a Maya diagram, and returns the partition counting zeros
/// to the left of each 1.
pub fn h_quotient(lambda: &Partition) -> Result<Partition> {
    let abacus = HAbacus::new(lambda)?;
    let max = abacus.beads().iter().next_back().copied().unwrap_or(0) + 4;
    let mut bits = Vec::new();
    // runner of 3 read bottom-up: the largest position is the far left of
    // the Maya diagram
    let mut pos = max - (max + 1) % 4; // largest position = 3 mod 4
    while pos >= 3 {
        bits.push(!abacus.beads().contains(&pos));
        if pos < 4 {
            break;
        }
        pos -= 4;
    }
    let mut pos = 1;
    while pos <= max {
        bits.push(abacus.beads().contains(&pos));
        pos += 4;
    }
    let mut zeros = 0u32;
    let mut parts = Vec::new();
    for bit in bits {
        if bit {
            if zeros > 0 {
                parts.push(zeros);
            }
        } else {
            zeros += 1;
        }
    }
    Partition::new(parts)
}

/// Unfolding: the multiset of diagonal hook lengths, as a strict partition.
pub fn unfold(lambda: &Partition) -> Partition {
    let conj = lambda.conjugate();
    let mut parts = Vec::new();
    for i in 1..=lambda.len() {
        if lambda.parts()[i - 1] < i as u32 {
            break;
        }
        parts.push(lambda.parts()[i - 1] + conj.parts()[i - 1] - 2 * i as u32 + 1);
    }
    Partition::new(parts).expect("diagonal hook lengths are positive and distinct")
}

/// The staircase `(m, m-1, ..., 1)`, the generic 2-core.
pub fn staircase(m: u32) -> Partition {
    Partition::new((1..=m).rev().collect()).expect("staircase")
}

/// Verdict of the block-wise product identity at 2-weight `d`.
#[derive(Clone, Debug)]
pub struct HBlockReport {
    pub d: u32,
    /// Product of `w_G` over the odd partitions of `2d` whose Glaisher
    /// image has empty H-core.
    pub product_g: ProductForm,
    /// Product of `w_E` over the same set.
    pub product_e: ProductForm,
    /// The weight-`d` block determinant in product form.
    pub block_delta: ProductForm,
    /// Determinant of the weight-`d` block of `C_{2d}(q)`, when computed.
    pub cartan_block_det: Option<QPoly>,
}

impl HBlockReport {
    pub fn products_equal(&self) -> bool {
        self.product_g == self.product_e
    }

    pub fn matches_delta(&self) -> bool {
        self.product_g == self.block_delta && self.product_e == self.block_delta
    }

    pub fn cartan_det_matches(&self) -> Option<bool> {
        self.cartan_block_det
            .as_ref()
            .map(|det| *det == self.block_delta.expand())
    }

    pub fn all_hold(&self) -> bool {
        self.products_equal() && self.matches_delta() && self.cartan_det_matches() != Some(false)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "product_g": self.product_g.to_json(),
            "product_e": self.product_e.to_json(),
            "block_delta": self.block_delta.to_json(),
            "products_equal": self.products_equal(),
            "matches_delta": self.matches_delta(),
            "cartan_block_det_matches": self.cartan_det_matches(),
        })
    }
}

/// Checks the block-wise identity at 2-weight `d`: the products of `w_G`
/// and `w_E` over the odd partitions of `2d` whose Glaisher image has
/// empty H-core agree, and equal the weight-`d` block determinant. With
/// `with_cartan` set, the weight-`d` block of `C_{2d}(q)` is extracted and
/// its exact determinant compared too.
pub fn verify_block_identity(d: u32, with_cartan: bool) -> Result<HBlockReport> {
    let p = 2u32;
    let mut members = Vec::new();
    for lambda in enumerate_partitions(2 * d) {
        if !lambda.is_p_class_regular(p) {
            continue;
        }
        let image = glaisher(&lambda, p).image;
        if h_core(&image)?.is_empty() {
            members.push(lambda);
        }
    }
    let product_g = product_of(p, members.iter().map(|lam| weight_g(lam, p).expect("odd")))?;
    let product_e = product_of(p, members.iter().map(|lam| weight_e(lam, p)))?;
    let block_delta = delta_block(d, p)?.value;
    let cartan_block_det = if with_cartan {
        let cartan = fock::cartan(2 * d, p)?;
        let index = BlockIndex::new(p, Partition::empty(), d)?;
        let block = fock::cartan_block(&cartan, &index)?;
        Some(block.det()?)
    } else {
        None
    };
    Ok(HBlockReport { d, product_g, product_e, block_delta, cartan_block_det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn strict_partitions(n: u32) -> Vec<Partition> {
        enumerate_partitions(n).into_iter().filter(Partition::is_strict).collect()
    }

    #[test]
    fn worked_example() {
        let lam = pt(&[9, 7, 3, 2]);
        assert_eq!(h_core(&lam).unwrap(), pt(&[3]));
        assert_eq!(h_quotient(&lam).unwrap(), pt(&[4]));
    }

    #[test]
    fn small_cores() {
        assert_eq!(h_core(&pt(&[1])).unwrap(), pt(&[1]));
        assert_eq!(h_core(&Partition::empty()).unwrap(), Partition::empty());
        assert_eq!(h_core(&pt(&[4, 3, 1])).unwrap(), Partition::empty());
        assert!(h_core(&pt(&[2, 2])).is_err());
    }

    #[test]
    fn stalemates_are_the_h_cores() {
        assert!(is_h_core(&Partition::empty()));
        assert!(is_h_core(&pt(&[5, 1])));
        assert!(is_h_core(&pt(&[7, 3])));
        assert!(!is_h_core(&pt(&[5, 3])));
        for n in 0..=16u32 {
            for lam in strict_partitions(n) {
                let stalemate = HAbacus::new(&lam).unwrap().is_stalemate();
                assert_eq!(stalemate, is_h_core(&lam), "lambda={lam}");
                let core = h_core(&lam).unwrap();
                assert!(is_h_core(&core), "core {core} of {lam}");
                // stalemate sizes are triangular
                let size = core.size();
                assert!(
                    (0..).map(|m| m * (m + 1) / 2).take_while(|&t| t <= size).any(|t| t == size),
                    "core size {size} is not triangular"
                );
            }
        }
    }

    #[test]
    fn exhaustive_move_orders_reach_one_stalemate() {
        fn all_stalemates(abacus: &HAbacus, seen: &mut BTreeSet<HAbacus>, out: &mut BTreeSet<Partition>) {
            if !seen.insert(abacus.clone()) {
                return;
            }
            let moves = abacus.applicable_moves();
            if moves.is_empty() {
                out.insert(abacus.to_partition());
                return;
            }
            for mv in moves {
                all_stalemates(&abacus.apply(mv), seen, out);
            }
        }
        for n in 0..=14u32 {
            for lam in strict_partitions(n) {
                let mut seen = BTreeSet::new();
                let mut stalemates = BTreeSet::new();
                all_stalemates(&HAbacus::new(&lam).unwrap(), &mut seen, &mut stalemates);
                assert_eq!(stalemates.len(), 1, "lambda={lam}");
                assert!(stalemates.contains(&h_core(&lam).unwrap()));
            }
        }
    }

    #[test]
    fn random_move_orders_agree() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in (5..=30u32).step_by(5) {
            for lam in strict_partitions(n) {
                let expected = h_core(&lam).unwrap();
                for _ in 0..3 {
                    let mut abacus = HAbacus::new(&lam).unwrap();
                    loop {
                        let moves = abacus.applicable_moves();
                        if moves.is_empty() {
                            break;
                        }
                        abacus = abacus.apply(*moves.choose(&mut rng).unwrap());
                    }
                    assert_eq!(abacus.to_partition(), expected, "lambda={lam}");
                }
            }
        }
    }

    #[test]
    fn quotient_of_cores_is_empty() {
        for core in [Partition::empty(), pt(&[1]), pt(&[5, 1]), pt(&[7, 3])] {
            assert_eq!(h_quotient(&core).unwrap(), Partition::empty());
        }
    }

    #[test]
    fn unfold_examples() {
        assert_eq!(unfold(&pt(&[4, 3, 2, 1])), pt(&[7, 3]));
        assert_eq!(unfold(&Partition::empty()), Partition::empty());
        assert_eq!(unfold(&pt(&[1])), pt(&[1]));
    }

    #[test]
    fn unfold_maps_staircases_onto_stalemates() {
        let mut seen = BTreeSet::new();
        for m in 0..=12u32 {
            let delta = staircase(m);
            let unfolded = unfold(&delta);
            assert_eq!(unfolded.size(), delta.size(), "size preserved at m={m}");
            assert!(is_h_core(&unfolded), "unfold({delta}) = {unfolded}");
            assert!(seen.insert(unfolded), "distinct images");
        }
    }

    #[test]
    fn quotient_size_accounts_for_the_core() {
        // for odd strict partitions, |quotient| = (|lambda| - |core|) / 4
        for n in 0..=20u32 {
            for lam in strict_partitions(n) {
                if !lam.is_p_class_regular(2) {
                    continue;
                }
                let core = h_core(&lam).unwrap();
                let quotient = h_quotient(&lam).unwrap();
                assert_eq!(
                    4 * quotient.size(),
                    lam.size() - core.size(),
                    "lambda={lam} core={core} quotient={quotient}"
                );
            }
        }
    }

    #[test]
    fn quotient_bijection_with_fixed_core() {
        // odd strict partitions of 4d + |core| with the given H-core map
        // bijectively onto P(d)
        for core in [Partition::empty(), pt(&[1]), pt(&[3])] {
            for d in 0..=3u32 {
                let n = 4 * d + core.size();
                let mut images: Vec<Partition> = strict_partitions(n)
                    .into_iter()
                    .filter(|lam| {
                        lam.is_p_class_regular(2) && h_core(lam).unwrap() == core
                    })
                    .map(|lam| h_quotient(&lam).unwrap())
                    .collect();
                images.sort();
                let mut expected = enumerate_partitions(d);
                expected.sort();
                assert_eq!(images, expected, "core={core} d={d}");
            }
        }
    }

    #[test]
    fn block_identity_small() {
        let report = verify_block_identity(0, true).unwrap();
        assert!(report.product_g.is_identity());
        assert!(report.all_hold());

        let report = verify_block_identity(1, true).unwrap();
        assert_eq!(report.product_g, ProductForm::from_factors(2, [(1, 1)]));
        assert!(report.all_hold());

        for d in 2..=4u32 {
            let report = verify_block_identity(d, d <= 3).unwrap();
            assert!(report.products_equal(), "d={d}");
            assert!(report.matches_delta(), "d={d}");
            if d <= 3 {
                assert_eq!(report.cartan_det_matches(), Some(true), "d={d}");
            }
        }
    }
}
