#include "cycles/sarith.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace cycles {

namespace {

// Largest bound for which Miller-Rabin with the prime bases up to 41 is a
// primality proof: 3,317,044,064,679,887,385,961,981.
const Int& mr_certified_limit() {
    static const Int limit("3317044064679887385961981");
    return limit;
}

constexpr unsigned long kMrBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

// true if base proves n composite (n odd, n > 3)
bool mr_witness(const Int& n, unsigned long base) {
    Int a(base);
    Int nm1 = n - 1;
    if (a % n == 0) return false;
    mp_bitcnt_t s = mpz_scan1(nm1.get_mpz_t(), 0);
    Int d = nm1 >> s;
    Int x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == nm1) return false;
    for (mp_bitcnt_t r = 1; r < s; ++r) {
        x = (x * x) % n;
        if (x == nm1) return false;
    }
    return true;
}

const std::vector<unsigned long>& small_primes() {
    static std::vector<unsigned long> primes = [] {
        const unsigned long limit = 1'000'000;
        std::vector<bool> composite(limit + 1, false);
        std::vector<unsigned long> out;
        for (unsigned long i = 2; i <= limit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (unsigned long j = i * i; j <= limit; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

// Brent's variant of Pollard rho; returns a nontrivial divisor or 1.
Int pollard_brent(const Int& n, unsigned long c, unsigned long max_iters) {
    if (n % 2 == 0) return 2;
    Int y(2), g(1), q(1), x, ys;
    unsigned long r = 1;
    const unsigned long batch = 128;
    while (g == 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
        unsigned long k = 0;
        while (k < r && g == 1) {
            ys = y;
            unsigned long lim = std::min(batch, r - k);
            for (unsigned long i = 0; i < lim; ++i) {
                y = (y * y + c) % n;
                q = (q * abs(x - y)) % n;
            }
            g = gcd(q, n);
            k += lim;
        }
        r *= 2;
        if (r > max_iters) return 1;
    }
    if (g == n) {
        // backtrack one step at a time
        do {
            ys = (ys * ys + c) % n;
            g = gcd(abs(x - ys), n);
        } while (g == 1);
    }
    return (g == n) ? Int(1) : g;
}

}  // namespace

SPrimeSet::SPrimeSet(std::vector<Int> primes) : primes_(std::move(primes)) {
    std::sort(primes_.begin(), primes_.end());
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        if (i > 0 && primes_[i] == primes_[i - 1])
            throw std::invalid_argument("duplicate prime in S: " + primes_[i].get_str());
        if (!is_prime(primes_[i]))
            throw std::invalid_argument("not a prime: " + primes_[i].get_str());
    }
}

bool SPrimeSet::contains(const Int& p) const {
    return std::binary_search(primes_.begin(), primes_.end(), p);
}

std::string SPrimeSet::to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        if (i) os << ',';
        os << primes_[i];
    }
    os << '}';
    return os.str();
}

Primality primality(const Int& n) {
    if (n < 2) return Primality::composite;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul, 41ul}) {
        if (n == p) return Primality::prime;
        if (n % p == 0) return Primality::composite;
    }
    for (unsigned long base : kMrBases)
        if (mr_witness(n, base)) return Primality::composite;
    if (n < mr_certified_limit()) return Primality::prime;
    // Out of certified range: add GMP's Baillie-PSW style test as a sanity
    // filter before reporting a probable prime.
    int r = mpz_probab_prime_p(n.get_mpz_t(), 32);
    return r == 0 ? Primality::composite : Primality::probable_prime;
}

bool is_prime(const Int& n) { return primality(n) == Primality::prime; }

Int Factorization::value() const {
    Int v = sign;
    for (const auto& [p, e] : factors)
        for (unsigned i = 0; i < e; ++i) v *= p;
    return v;
}

std::vector<Int> Factorization::support() const {
    std::vector<Int> out;
    out.reserve(factors.size());
    for (const auto& [p, e] : factors) out.push_back(p);
    return out;
}

bool Factorization::has_prime(const Int& p) const {
    for (const auto& [q, e] : factors)
        if (q == p) return true;
    return false;
}

PartialFactorization factor_within(const Int& n, const FactorBudget& budget) {
    if (n == 0) throw std::invalid_argument("factorization of zero undefined");
    PartialFactorization out;
    out.factored.sign = sgn(n);
    Int m = abs(n);

    std::vector<std::pair<Int, unsigned>> found;
    for (unsigned long p : small_primes()) {
        if (p > budget.trial_bound) break;
        if (Int(p) * p > m) break;
        if (m % p == 0) {
            unsigned e = 0;
            do {
                m /= p;
                ++e;
            } while (m % p == 0);
            found.emplace_back(Int(p), e);
        }
    }

    // split remaining cofactors
    std::vector<Int> pending;
    if (m > 1) pending.push_back(m);
    while (!pending.empty()) {
        Int c = pending.back();
        pending.pop_back();
        Primality pr = primality(c);
        if (pr == Primality::prime) {
            found.emplace_back(c, 1u);
            continue;
        }
        if (pr == Primality::probable_prime) {
            out.cofactor *= c;
            out.complete = false;
            continue;
        }
        // composite: check for perfect power first, then rho
        if (mpz_perfect_power_p(c.get_mpz_t())) {
            for (unsigned long k = 2; k <= mpz_sizeinbase(c.get_mpz_t(), 2); ++k) {
                Int root;
                if (mpz_root(root.get_mpz_t(), c.get_mpz_t(), k)) {
                    for (unsigned long i = 0; i < k; ++i) pending.push_back(root);
                    c = 1;
                    break;
                }
            }
            if (c == 1) continue;
        }
        Int d = 1;
        for (unsigned round = 0; round < budget.rho_rounds && d <= 1; ++round)
            d = pollard_brent(c, round + 1, budget.rho_iterations);
        if (d <= 1 || d == c) {
            out.cofactor *= c;
            out.complete = false;
            continue;
        }
        pending.push_back(d);
        pending.push_back(c / d);
    }

    // merge repeated primes
    std::sort(found.begin(), found.end());
    for (const auto& [p, e] : found) {
        if (!out.factored.factors.empty() && out.factored.factors.back().first == p)
            out.factored.factors.back().second += e;
        else
            out.factored.factors.emplace_back(p, e);
    }
    return out;
}

Factorization factor(const Int& n) {
    FactorBudget big;
    big.rho_rounds = 512;
    big.rho_iterations = 1ul << 28;
    PartialFactorization pf = factor_within(n, big);
    if (!pf.complete)
        throw std::runtime_error("factorization incomplete: stubborn cofactor " +
                                 pf.cofactor.get_str());
    return pf.factored;
}

long valuation(const Int& n, const Int& p) {
    if (n == 0) throw std::invalid_argument("valuation of zero undefined");
    if (p < 2) throw std::invalid_argument("valuation prime must be >= 2");
    Int rest;
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const Rat& x, const Int& p) {
    if (x == 0) throw std::invalid_argument("valuation of zero undefined");
    long vn = (x.get_num() == 0) ? 0 : valuation(Int(x.get_num()), p);
    long vd = valuation(Int(x.get_den()), p);
    return vn - vd;
}

bool is_s_integer(const Rat& x, const SPrimeSet& S) {
    if (x == 0) return true;
    return split_s_part(Int(x.get_den()), S).coprime_part == 1;
}

bool is_s_unit(const Rat& x, const SPrimeSet& S) {
    if (x == 0) return false;
    return split_s_part(Int(x.get_num()), S).coprime_part == 1 &&
           split_s_part(Int(x.get_den()), S).coprime_part == 1;
}

SSplit split_s_part(const Int& n, const SPrimeSet& S) {
    if (n == 0) throw std::invalid_argument("split of zero undefined");
    SSplit out;
    out.sign = sgn(n);
    Int m = abs(n);
    for (const Int& p : S.primes()) {
        Int rest;
        mp_bitcnt_t e = mpz_remove(rest.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        if (e > 0) {
            Int pe;
            mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
            out.s_part *= pe;
            m = rest;
        }
    }
    out.coprime_part = m;
    return out;
}

std::vector<Rat> enumerate_s_units(const SPrimeSet& S, unsigned max_exp) {
    const auto& ps = S.primes();
    std::vector<Rat> out;
    std::vector<long> exps(ps.size(), -static_cast<long>(max_exp));
    const long lo = -static_cast<long>(max_exp), hi = static_cast<long>(max_exp);
    while (true) {
        Rat u(1);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            Int pe;
            mpz_pow_ui(pe.get_mpz_t(), ps[i].get_mpz_t(),
                       static_cast<unsigned long>(std::abs(exps[i])));
            if (exps[i] >= 0)
                u *= Rat(pe);
            else
                u /= Rat(pe);
        }
        out.push_back(u);
        out.push_back(-u);
        // odometer
        std::size_t i = 0;
        for (; i < exps.size(); ++i) {
            if (exps[i] < hi) {
                ++exps[i];
                break;
            }
            exps[i] = lo;
        }
        if (i == exps.size()) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

bool unit_in_box(const Rat& x, const SPrimeSet& S, unsigned max_exp) {
    if (!is_s_unit(x, S)) return false;
    for (const Int& p : S.primes()) {
        long v = valuation(x, p);
        if (v > static_cast<long>(max_exp) || v < -static_cast<long>(max_exp)) return false;
    }
    return true;
}

}  // namespace

std::vector<UnitEqSolution> solve_unit_eq(const std::vector<Rat>& coeffs,
                                          const SPrimeSet& S, unsigned max_exp) {
    const std::size_t k = coeffs.size();
    if (k != 2 && k != 3) throw std::invalid_argument("unit equation needs 2 or 3 terms");
    for (const Rat& a : coeffs)
        if (a == 0) throw std::invalid_argument("unit equation coefficients must be nonzero");

    std::vector<Rat> units = enumerate_s_units(S, max_exp);
    std::vector<UnitEqSolution> out;

    if (k == 2) {
        for (const Rat& x1 : units) {
            Rat x2 = (1 - coeffs[0] * x1) / coeffs[1];
            if (x2 == 0 || !unit_in_box(x2, S, max_exp)) continue;
            out.push_back({{x1, x2}, false});
        }
    } else {
        for (const Rat& x1 : units) {
            for (const Rat& x2 : units) {
                Rat x3 = (1 - coeffs[0] * x1 - coeffs[1] * x2) / coeffs[2];
                if (x3 == 0 || !unit_in_box(x3, S, max_exp)) continue;
                bool degen = (coeffs[0] * x1 + coeffs[1] * x2 == 0) ||
                             (coeffs[0] * x1 + coeffs[2] * x3 == 0) ||
                             (coeffs[1] * x2 + coeffs[2] * x3 == 0);
                out.push_back({{x1, x2, x3}, degen});
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const UnitEqSolution& a, const UnitEqSolution& b) { return a.x < b.x; });
    return out;
}

}  // namespace cycles
