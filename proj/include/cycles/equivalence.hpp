#pragma once

// The PGL_2(Z_S) action on P^1(Q): membership, the unique transport matrix
// through three points, the equivalence decision for ordered n-tuples, the
// Bezout matrix sending a point to [1:0], and classification of tuple lists
// into equivalence classes.

#include "cycles/mobius.hpp"
#include "cycles/projline.hpp"
#include "cycles/sarith.hpp"

#include <optional>
#include <vector>

namespace cycles {

/// Membership of a canonical primitive integer matrix in PGL_2(Z_S).
///
/// Criterion: supp(det M) is contained in S. Proof: if the support lies in S
/// the integer entries are S-integral and the determinant is an S-unit.
/// Conversely let lambda*M have S-integral entries and S-unit determinant,
/// and fix p outside S. Some entry of the primitive M has v_p = 0, so
/// v_p(lambda) >= 0; and v_p(lambda^2 det M) = 0 with det M an integer forces
/// v_p(lambda) <= 0. Hence v_p(lambda) = 0 and v_p(det M) = 0.
bool in_pgl2_zs(const Mobius& M, const SPrimeSet& S);

/// The unique projective matrix mapping src[i] to dst[i] for two triples of
/// pairwise distinct points.
Mobius mobius_from_three_points(const std::array<ProjPoint, 3>& src,
                                const std::array<ProjPoint, 3>& dst);

/// Determinant-one integer matrix sending P = [x:y] to [1:0], built from a
/// Bezout relation x*r_x + y*r_y = 1.
Mobius point_to_infinity(const ProjPoint& P);

/// Decides whether some A in PGL_2(Z_S) maps tA[i] to tB[i] for all i, and
/// returns a verified witness when it exists.
std::optional<Mobius> tuples_equivalent(const std::vector<ProjPoint>& tA,
                                        const std::vector<ProjPoint>& tB,
                                        const SPrimeSet& S);

struct TupleClass {
    std::vector<std::size_t> members;        // input indices, ascending
    std::vector<ProjPoint> representative;   // lexicographically least member
};

/// Partition of tuples under tuples_equivalent. Tuples of different lengths
/// are never equivalent. Classes are sorted by representative.
std::vector<TupleClass> classify_tuples(const std::vector<std::vector<ProjPoint>>& tuples,
                                        const SPrimeSet& S);

}  // namespace cycles
