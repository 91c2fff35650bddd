#pragma once

// Orbits and cycle detection, rational periodic points, the distance
// invariants of cycles under maps of good reduction, the cycle ledger of
// exact invariants, the two-step cycle normalization, classification of
// cycles up to PGL_2(Z_S), and the period-length bound in the place count.

#include "cycles/equivalence.hpp"
#include "cycles/mobius.hpp"
#include "cycles/projline.hpp"
#include "cycles/ratmap.hpp"
#include "cycles/sarith.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cycles {

/// An ordered n-tuple of distinct points cyclically permuted by a map:
/// eval(map, points[i]) == points[(i+1) mod n]. Both conditions are checked
/// on construction. Good reduction is a separate property, see verify_cycle.
class Cycle {
public:
    Cycle(HomogMap map, std::vector<ProjPoint> points);

    const HomogMap& map() const { return map_; }
    const std::vector<ProjPoint>& points() const { return points_; }
    std::size_t length() const { return points_.size(); }

private:
    HomogMap map_;
    std::vector<ProjPoint> points_;
};

/// Certifies distinctness, the cyclic evaluation property, and that the map
/// has good reduction outside S; throws with the first witness otherwise.
Cycle verify_cycle(const HomogMap& map, const std::vector<ProjPoint>& points,
                   const SPrimeSet& S);

enum class OrbitOutcome { cycle_found, height_exceeded, step_limit };

struct OrbitResult {
    std::vector<ProjPoint> tail;   // iterates before the cycle (all of them if none)
    std::optional<Cycle> cycle;
    OrbitOutcome outcome = OrbitOutcome::step_limit;
};

inline const Int& default_height_cap() {
    static const Int cap("1000000000000");   // 10^12 on |x|, |y|
    return cap;
}

/// Iterates the map from start until a point repeats (cycle extracted with
/// its preperiodic tail), a coordinate exceeds height_cap, or max_steps.
OrbitResult orbit(const HomogMap& map, const ProjPoint& start, unsigned max_steps,
                  const Int& height_cap = default_height_cap());

struct PeriodicPoints {
    std::vector<ProjPoint> points;   // canonical order, each verified by iteration
    bool complete = false;           // true only when rational-root extraction was exhaustive
};

/// All Q-rational fixed points of the n-th iterate, by rational-root
/// extraction on the binary form y*F_n - x*G_n. Requires d^n + 1 <= 10^4.
/// complete is true only when the leading/trailing coefficient
/// factorizations finished within budget.
PeriodicPoints periodic_points(const HomogMap& map, unsigned period,
                               const FactorBudget& budget = {});

struct DistanceViolation {
    Int prime;
    std::string rule;          // "shift-invariance" or "coprime-gap"
    std::size_t i, j, k;       // offending indices (k unused for coprime-gap)
};

struct DistanceReport {
    bool ok = true;
    std::vector<DistanceViolation> violations;
};

/// For every prime dividing some pairwise cross-determinant at which the
/// cycle's map reduces well: the distance table is shift-invariant, and
/// equals delta_p(P_0,P_1) on every index gap coprime to n. A violation
/// means the input was not a cycle for a map of good reduction there.
DistanceReport check_distance_invariants(const Cycle& cycle);

/// Exact invariants of a certified cycle of length n >= 2, writing
/// d(i,j) = cross_det(P_i,P_j):
///   gap ratio       C_i     = d(0,i)/d(0,1), an S-integer, C_1 = 1
///   shift unit      u_{j,i} = d(j,j+i)/d(0,i), an S-unit
///   nested ratio    L_{i,j} = d(0,i*j mod n)/d(0,j), an S-integer
///   ideal           I_i     = ideal_between(P_0, P_i)
///   reduced ideal   I_i / I_1  (I_1 always divides I_i)
/// Construction throws naming the first violated property, which signals a
/// non-good-reduction input.
class CycleLedger {
public:
    CycleLedger(const Cycle& cycle, const SPrimeSet& S);

    std::size_t length() const { return n_; }
    const SPrimeSet& prime_set() const { return S_; }

    const Rat& gap_ratio(std::size_t i) const;              // 1 <= i <= n-1
    const Rat& shift_unit(std::size_t j, std::size_t i) const;   // 0<=j<=n-1, 1<=i<=n-1
    const Rat& nested_ratio(std::size_t i, std::size_t j) const; // 1 <= i,j <= n-1
    const SIdeal& ideal(std::size_t i) const;                // 1 <= i <= n-1
    const SIdeal& reduced_ideal(std::size_t i) const;        // 1 <= i <= n-1

private:
    std::size_t n_;
    SPrimeSet S_;
    std::vector<Rat> gap_ratios_;
    std::vector<std::vector<Rat>> shift_units_;
    std::vector<std::vector<Rat>> nested_ratios_;
    std::vector<SIdeal> ideals_;
    std::vector<SIdeal> reduced_;
};

CycleLedger cycle_ledger(const Cycle& cycle, const SPrimeSet& S);

struct NormalizedTuple {
    std::vector<ProjPoint> points;   // ([0:1], [1:0], [D_2:1], ...)
    Mobius pair_map;     // sends P_0, P_1 to [0:1], [1:0]
    Mobius unit_scale;   // diagonal S-unit matrix fixing [0:1], [1:0]
};

/// Sends (P_0,P_1) to ([0:1],[1:0]) by the exact matrix built from the first
/// two points, then (n >= 3) rescales by a diagonal unit matrix so the third
/// point becomes [D_2:1], where D_2 is the gap ratio C_2 stripped of its sign
/// and S-part. Verifies the transformed cross-determinant identities and the
/// distance shift delta_p(Q_0,Q_i) = delta_p(P_0,P_i) - delta_p(P_0,P_1)
/// outside S before returning.
NormalizedTuple normalized_tuple(const Cycle& cycle, const SPrimeSet& S);

/// Classification of certified cycles by tuple equivalence of their points.
std::vector<TupleClass> classify(const std::vector<Cycle>& cycles, const SPrimeSet& S);

/// Upper bound on the length of a cycle for a map of degree >= 2 with good
/// reduction outside a place set of size s over Q:
/// floor((12(s+2) ln(5(s+2)))^4), evaluated with outward-rounded interval
/// arithmetic so the result is never under-reported.
Int period_length_bound(unsigned place_count);

}  // namespace cycles
