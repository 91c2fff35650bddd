#pragma once

// Exact arithmetic over Q with S-structure: p-adic valuations, integer
// factorization, S-integers and S-units for a finite set S of primes, and
// bounded brute-force solving of unit equations a_1 x_1 + ... + a_k x_k = 1.

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace cycles {

using Int = mpz_class;
using Rat = mpq_class;

/// The finite primes of a set S of places of Q. The archimedean place is
/// always implied, so place_count() == primes().size() + 1. Entries are
/// distinct certified primes in ascending order.
class SPrimeSet {
public:
    SPrimeSet() = default;
    explicit SPrimeSet(std::vector<Int> primes);

    const std::vector<Int>& primes() const { return primes_; }
    std::size_t place_count() const { return primes_.size() + 1; }
    bool contains(const Int& p) const;
    bool empty() const { return primes_.empty(); }
    std::string to_string() const;

    friend bool operator==(const SPrimeSet&, const SPrimeSet&) = default;

private:
    std::vector<Int> primes_;
};

enum class Primality { composite, prime, probable_prime };

/// Deterministic Miller-Rabin for n below ~3.3e24 (13 fixed bases certify
/// that range); larger survivors are only ever reported probable_prime.
Primality primality(const Int& n);

/// certified prime
bool is_prime(const Int& n);

struct Factorization {
    int sign = 1;                                    // +1 or -1
    std::vector<std::pair<Int, unsigned>> factors;   // (prime, exponent), primes ascending

    Int value() const;                               // sign * prod p^e
    std::vector<Int> support() const;
    bool has_prime(const Int& p) const;
};

struct FactorBudget {
    unsigned long trial_bound = 1'000'000;   // trial division up to this bound
    unsigned rho_rounds = 64;                // Brent rounds per stubborn cofactor
    unsigned long rho_iterations = 1'000'000;
};

struct PartialFactorization {
    Factorization factored;   // certified-prime part
    Int cofactor = 1;         // unfactored remainder (1 when fully split)
    bool complete = true;     // cofactor == 1 and every listed prime certified
};

/// Complete certified factorization of n != 0; throws if certification is
/// impossible within a very large internal budget.
Factorization factor(const Int& n);

PartialFactorization factor_within(const Int& n, const FactorBudget& budget);

/// Exact exponent of the prime p in n != 0.
long valuation(const Int& n, const Int& p);

/// Exact exponent of p in a nonzero rational; additive under multiplication.
/// Throws "valuation of zero undefined" on x == 0.
long valuation(const Rat& x, const Int& p);

/// x has nonnegative valuation at every prime outside S (0 counts as one).
bool is_s_integer(const Rat& x, const SPrimeSet& S);

/// x is nonzero with zero valuation at every prime outside S.
bool is_s_unit(const Rat& x, const SPrimeSet& S);

struct SSplit {
    int sign = 1;
    Int s_part = 1;         // product of S-primes dividing n, positive
    Int coprime_part = 1;   // positive, coprime to every prime of S
};

/// n = sign * s_part * coprime_part for n != 0.
SSplit split_s_part(const Int& n, const SPrimeSet& S);

/// All S-units +-prod p^{e_p} with |e_p| <= max_exp, sorted ascending.
/// Exactly 2*(2*max_exp+1)^|S| values.
std::vector<Rat> enumerate_s_units(const SPrimeSet& S, unsigned max_exp);

struct UnitEqSolution {
    std::vector<Rat> x;
    bool degenerate = false;   // k = 3 only: some proper subsum vanishes
};

/// All tuples of S-units inside the exponent box solving
/// coeffs[0]*x_0 + ... + coeffs[k-1]*x_{k-1} = 1, for k in {2,3}.
/// Completeness is relative to the box; tuples are sorted lexicographically.
std::vector<UnitEqSolution> solve_unit_eq(const std::vector<Rat>& coeffs,
                                          const SPrimeSet& S, unsigned max_exp);

}  // namespace cycles
