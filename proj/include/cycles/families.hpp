#pragma once

// An explicit infinite family of degree-4 maps over Z[1/2], one per S-unit u,
// each carrying a 3-cycle whose consecutive-point ideal is u^2 - u + 1. The
// construction perturbs the identity by a Mobius image of a fixed degree-3
// map so the result fixes the 3-cycle of an order-3 automorphism, then
// composes with that automorphism.

#include "cycles/dynamics.hpp"
#include "cycles/mobius.hpp"
#include "cycles/projline.hpp"
#include "cycles/ratmap.hpp"
#include "cycles/sarith.hpp"

#include <array>
#include <vector>

namespace cycles {

struct FamilyInstance {
    Rat u;
    HomogMap rotation;     // z -> 1/(1-z), order 3, good reduction everywhere
    HomogMap base_map;     // degree 3, invariant under precomposing the rotation
    HomogMap fixing_map;   // degree 4: z + correction(base_map(z)); fixes the triple
    HomogMap cycle_map;    // rotation o fixing_map; cycles the triple
    Mobius correction;     // sends the common base_map value of the triple to 0
    std::array<ProjPoint, 3> triple;   // ([u:u-1], [u-1:-1], [1:u]) canonicalized
    SIdeal ideal1;         // ideal between consecutive triple points
    SIdeal ideal2;         // ideal between first and third
    std::vector<Int> bad;  // bad primes of cycle_map
    bool good_reduction;   // bad primes contained in S; holds iff u is an S-unit
};

/// The order-3 automorphism z -> 1/(1-z); cycles (0,1,inf) and (-1,1/2,2).
HomogMap family_rotation();

/// (z+1)(2z-1)(z-2) / (2z(z-1)): degree 3, good reduction outside {2},
/// invariant under precomposition with the rotation.
HomogMap family_base_map();

/// Mobius with matrix [[4u^2-4u, 4u^3-6u^2-6u+4], [2u, 4u^2+u-2]], of
/// determinant 8u^4; throws for u = 0.
Mobius family_correction(const Rat& u);

/// Builds the full instance at u (u != 0 and u^2 != u unless projective
/// coordinates absorb it; only u = 0 is degenerate). With strict = true,
/// a u that is not an S-unit is rejected instead of producing an instance
/// with bad reduction outside S.
FamilyInstance build_family(const Rat& u, const SPrimeSet& S, bool strict = false);

struct CensusRow {
    unsigned n;
    Int generator;               // 2^{2n} - 2^n + 1
    Factorization factors;       // certified factors of the generator
    bool complete;               // factorization finished within budget
    std::size_t distinct_primes; // cumulative distinct primes through row n
};

/// Per-n generator 2^{2n} - 2^n + 1 with factorization and the cumulative
/// census of distinct primes; each generator is cross-checked against the
/// built family instance at u = 2^n.
std::vector<CensusRow> ideal_census(unsigned n_max, const FactorBudget& budget = {});

}  // namespace cycles
