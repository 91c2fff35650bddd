#pragma once

// Projective 2x2 matrices acting on P^1(Q), stored in canonical primitive
// integer form so that projective equality is entry comparison.

#include "cycles/projline.hpp"
#include "cycles/sarith.hpp"

#include <array>
#include <string>

namespace cycles {

/// Invariants: nonzero determinant, gcd of the four entries 1, first nonzero
/// entry in (a,b,c,d) order positive.
class Mobius {
public:
    Mobius(Int a, Int b, Int c, Int d);
    static Mobius identity() { return Mobius(1, 0, 0, 1); }
    /// Clears denominators and canonicalizes; entries must not all vanish.
    static Mobius from_rational(const Rat& a, const Rat& b, const Rat& c, const Rat& d);

    const Int& a() const { return e_[0]; }
    const Int& b() const { return e_[1]; }
    const Int& c() const { return e_[2]; }
    const Int& d() const { return e_[3]; }

    Int det() const { return e_[0] * e_[3] - e_[1] * e_[2]; }
    Mobius inverse() const;   // projective inverse (adjugate)

    ProjPoint apply(const ProjPoint& P) const;

    friend Mobius operator*(const Mobius& lhs, const Mobius& rhs);
    friend bool operator==(const Mobius&, const Mobius&) = default;

    std::string to_string() const;   // "[[a,b],[c,d]]"

private:
    std::array<Int, 4> e_;
};

}  // namespace cycles
