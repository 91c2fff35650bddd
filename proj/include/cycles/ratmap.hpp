#pragma once

// Rational self-maps of P^1(Q) as pairs of integer binary forms of equal
// degree with unit joint content and nonzero resultant: normalization,
// evaluation, exact Sylvester resultant, good reduction, composition,
// Mobius conjugation, and the degree-raising construction z + T(phi(z)).

#include "cycles/mobius.hpp"
#include "cycles/projline.hpp"
#include "cycles/sarith.hpp"

#include <string>
#include <vector>

namespace cycles {

/// A rational function of z with integer coefficients, numerator and
/// denominator coprime as polynomials. Coefficient lists are ascending:
/// num[i] multiplies z^i.
struct AffineRationalFunction {
    std::vector<Int> num;
    std::vector<Int> den;
};

/// Phi([x:y]) = [F(x,y):G(x,y)] with F,G of equal degree d >= 1. Coefficient
/// lists are descending in x: F()[i] multiplies x^{d-i} y^i. Canonical form:
/// joint content 1 and first nonzero coefficient of (F then G) positive, so
/// map equality is coefficient comparison.
class HomogMap {
public:
    HomogMap(std::vector<Int> F, std::vector<Int> G);

    unsigned degree() const { return static_cast<unsigned>(f_.size() - 1); }
    const std::vector<Int>& F() const { return f_; }
    const std::vector<Int>& G() const { return g_; }

    /// Sylvester resultant Res(F,G); nonzero by the type invariant.
    const Int& resultant() const;

    friend bool operator==(const HomogMap&, const HomogMap&);
    std::string to_string() const;

private:
    struct Trusted {};
    HomogMap(std::vector<Int> F, std::vector<Int> G, Trusted);
    void normalize();

    std::vector<Int> f_, g_;
    mutable Int res_ = 0;   // cache; 0 = not yet computed

    friend HomogMap compose(const HomogMap&, const HomogMap&);
};

ProjPoint eval(const HomogMap& map, const ProjPoint& P);

/// Valuations of Disc(map): with joint content 1 these are exactly the
/// factorization of |Res(F,G)|.
Factorization disc_valuations(const HomogMap& map);

/// Primes p with v_p(Res) > 0, i.e. where the reduced map drops degree.
std::vector<Int> bad_primes(const HomogMap& map);

bool good_reduction_map(const HomogMap& map, const SPrimeSet& S);

/// outer after inner: eval(compose(a,b),P) == eval(a, eval(b,P)).
HomogMap compose(const HomogMap& outer, const HomogMap& inner);

HomogMap iterate_map(const HomogMap& map, unsigned n);

HomogMap mobius_to_map(const Mobius& A);

/// A o map o A^{-1}, content-normalized; degree preserved.
HomogMap mobius_conjugate(const Mobius& A, const HomogMap& map);

/// z + T(phi(z)) for phi fixing infinity; raises the degree by exactly one.
/// Requires a nonzero lower-left entry of T.
HomogMap degree_bump(const Mobius& T, const HomogMap& phi);

HomogMap from_affine(const AffineRationalFunction& f);
AffineRationalFunction to_affine(const HomogMap& map);

/// Exact determinant of an integer matrix (fraction-free Bareiss).
Int integer_determinant(std::vector<std::vector<Int>> m);

}  // namespace cycles
