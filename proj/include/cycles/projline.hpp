#pragma once

// Points of P^1(Q) in canonical coprime coordinates, the p-adic logarithmic
// distance, pair/tuple ideals, tuple good reduction, cross-ratio, and the
// discriminant of the binary form attached to a point tuple.

#include "cycles/sarith.hpp"

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace cycles {

/// A point of the projective line over Q. Canonical representative:
/// gcd(|x|,|y|) = 1 and either y > 0, or y = 0 and x = 1. Point equality is
/// then plain coordinate comparison.
class ProjPoint {
public:
    ProjPoint(Int x, Int y);
    static ProjPoint affine(const Rat& q);
    static ProjPoint infinity() { return ProjPoint(); }

    const Int& x() const { return x_; }
    const Int& y() const { return y_; }
    bool is_infinity() const { return y_ == 0; }
    Rat affine_value() const;   // throws on the point at infinity

    friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
    std::strong_ordering operator<=>(const ProjPoint& o) const;

    std::string to_string() const;   // "[x:y]"

private:
    ProjPoint() = default;
    Int x_{1}, y_{0};
};

/// x_P y_Q - x_Q y_P on canonical representatives; zero iff P == Q.
Int cross_det(const ProjPoint& P, const ProjPoint& Q);

/// Value of the p-adic logarithmic distance: a nonnegative integer, or
/// infinity exactly for equal points.
class Delta {
public:
    static Delta infinity() { return Delta(true, 0); }
    static Delta finite(unsigned long v) { return Delta(false, v); }

    bool is_infinity() const { return infinite_; }
    unsigned long value() const;   // throws on infinity

    friend bool operator==(const Delta&, const Delta&) = default;
    std::strong_ordering operator<=>(const Delta& o) const;
    std::string to_string() const;

private:
    Delta(bool inf, unsigned long v) : infinite_(inf), value_(v) {}
    bool infinite_;
    unsigned long value_;
};

/// delta_p(P,Q) = v_p(x_P y_Q - x_Q y_P) on coprime coordinates; infinity for
/// P == Q. Independent of the representative by canonicalization.
Delta log_distance(const ProjPoint& P, const ProjPoint& Q, const Int& p);

/// An integral ideal of Z_S, identified with its unique positive generator
/// whose prime support is disjoint from S.
class SIdeal {
public:
    SIdeal(Int generator, const SPrimeSet& S);
    const Int& generator() const { return gen_; }
    bool divides(const SIdeal& other) const;
    friend bool operator==(const SIdeal&, const SIdeal&) = default;
    std::string to_string() const { return gen_.get_str(); }

private:
    Int gen_;
};

/// prod_{p not in S} p^{delta_p(P,Q)} for distinct points, read off as the
/// coprime-to-S part of |cross_det(P,Q)|. Throws for equal points.
SIdeal ideal_between(const ProjPoint& P, const ProjPoint& Q, const SPrimeSet& S);

struct TupleReductionWitness {
    Int prime;
    std::size_t i, j;   // one offending pair for that prime
};

struct TupleReduction {
    bool good = true;
    std::vector<TupleReductionWitness> witnesses;   // one entry per bad prime
};

/// A tuple of distinct points stays distinct modulo every prime outside S
/// iff every pairwise cross-determinant is an S-unit.
TupleReduction tuple_good_reduction(const std::vector<ProjPoint>& points, const SPrimeSet& S);

/// Cross-ratio of four pairwise distinct points:
///   (d13 * d24) / (d12 * d34),  d_ij = x_i y_j - x_j y_i.
/// Satisfies cr(P1,P2,P3,P4) + cr(P1,P2,P4,P3) = 1.
Rat cross_ratio(const ProjPoint& P1, const ProjPoint& P2, const ProjPoint& P3,
                const ProjPoint& P4);

/// Discriminant of the binary form prod_i (x_i X - y_i Y):
/// prod_{i<j} cross_det(P_i,P_j)^2, up to sign conventions a square.
Int tuple_form_discriminant(const std::vector<ProjPoint>& points);

}  // namespace cycles
