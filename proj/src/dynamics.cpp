#include "cycles/dynamics.hpp"

#include <mpfr.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cycles {

namespace {

Int point_height(const ProjPoint& P) { return std::max(abs(P.x()), abs(P.y())); }

// exact 2x2 rational matrix, used for the coordinate-level normalization
struct RMat2 {
    Rat a, b, c, d;
    std::pair<Rat, Rat> apply(const Rat& x, const Rat& y) const {
        return {a * x + b * y, c * x + d * y};
    }
};

ProjPoint point_from_rats(const Rat& x, const Rat& y) {
    return ProjPoint(Int(x.get_num()) * Int(y.get_den()),
                     Int(y.get_num()) * Int(x.get_den()));
}

std::set<Int> coprime_support(const Int& n, const SPrimeSet& S) {
    std::set<Int> out;
    Int c = split_s_part(n, S).coprime_part;
    if (c > 1)
        for (const Int& p : factor(c).support()) out.insert(p);
    return out;
}

[[noreturn]] void ledger_fail(const std::string& what) {
    throw std::domain_error("ledger invariant failed: " + what +
                            " (input is not a cycle of good reduction outside S)");
}

std::vector<Int> divisors_of(const Factorization& f, std::size_t cap, bool& truncated) {
    std::vector<Int> out{Int(1)};
    for (const auto& [p, e] : f.factors) {
        std::size_t base = out.size();
        Int pe = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pe *= p;
            for (std::size_t i = 0; i < base; ++i) {
                out.push_back(out[i] * pe);
                if (out.size() > cap) {
                    truncated = true;
                    return out;
                }
            }
        }
    }
    return out;
}

}  // namespace

Cycle::Cycle(HomogMap map, std::vector<ProjPoint> points)
    : map_(std::move(map)), points_(std::move(points)) {
    const std::size_t n = points_.size();
    if (n == 0) throw std::invalid_argument("cycle needs at least one point");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (points_[i] == points_[j])
                throw std::domain_error("cycle points not distinct: indices " +
                                        std::to_string(i) + " and " + std::to_string(j));
    for (std::size_t i = 0; i < n; ++i) {
        ProjPoint img = eval(map_, points_[i]);
        const ProjPoint& want = points_[(i + 1) % n];
        if (img != want)
            throw std::domain_error("cycle evaluation failed at index " + std::to_string(i) +
                                    ": map sends " + points_[i].to_string() + " to " +
                                    img.to_string() + ", expected " + want.to_string());
    }
}

Cycle verify_cycle(const HomogMap& map, const std::vector<ProjPoint>& points,
                   const SPrimeSet& S) {
    Cycle c(map, points);
    for (const Int& p : bad_primes(map))
        if (!S.contains(p))
            throw std::domain_error("map has bad reduction at prime " + p.get_str() +
                                    " outside S");
    return c;
}

OrbitResult orbit(const HomogMap& map, const ProjPoint& start, unsigned max_steps,
                  const Int& height_cap) {
    if (max_steps < 1) throw std::invalid_argument("orbit needs at least one step");
    if (point_height(start) > height_cap)
        throw std::invalid_argument("starting point exceeds the height cap");

    OrbitResult out;
    std::vector<ProjPoint> seq{start};
    std::map<ProjPoint, std::size_t> seen{{start, 0}};
    for (unsigned step = 0; step < max_steps; ++step) {
        ProjPoint next = eval(map, seq.back());
        if (point_height(next) > height_cap) {
            seq.push_back(next);
            out.tail = std::move(seq);
            out.outcome = OrbitOutcome::height_exceeded;
            return out;
        }
        auto it = seen.find(next);
        if (it != seen.end()) {
            std::size_t k = it->second;
            out.tail.assign(seq.begin(), seq.begin() + k);
            out.cycle = Cycle(map, std::vector<ProjPoint>(seq.begin() + k, seq.end()));
            out.outcome = OrbitOutcome::cycle_found;
            return out;
        }
        seen.emplace(next, seq.size());
        seq.push_back(next);
    }
    out.tail = std::move(seq);
    out.outcome = OrbitOutcome::step_limit;
    return out;
}

PeriodicPoints periodic_points(const HomogMap& map, unsigned period,
                               const FactorBudget& budget) {
    if (period < 1) throw std::invalid_argument("period must be positive");
    // degree guard: d^n + 1 <= 10^4
    Int dn = 1;
    for (unsigned i = 0; i < period; ++i) {
        dn *= map.degree();
        if (dn + 1 > 10000)
            throw std::domain_error("degree guard exceeded: d^n + 1 > 10000");
    }

    HomogMap it = iterate_map(map, period);
    const std::size_t D = it.degree() + 1;
    // H = y*F_n - x*G_n, H[i] multiplies x^{D-i} y^i
    std::vector<Int> H(D + 1, Int(0));
    for (std::size_t i = 0; i <= D; ++i) {
        if (i > 0) H[i] += it.F()[i - 1];
        if (i < D) H[i] -= it.G()[i];
    }

    PeriodicPoints out;
    out.complete = true;
    std::set<ProjPoint> roots;

    bool all_zero = std::all_of(H.begin(), H.end(), [](const Int& c) { return c == 0; });
    if (all_zero)
        throw std::domain_error("every point is periodic: iterate is the identity map");

    std::size_t lo = 0, hi = H.size();
    if (H[lo] == 0) roots.insert(ProjPoint::infinity());
    while (lo < hi && H[lo] == 0) ++lo;
    if (H[hi - 1] == 0) roots.insert(ProjPoint(0, 1));
    while (hi > lo && H[hi - 1] == 0) --hi;
    std::vector<Int> core(H.begin() + lo, H.begin() + hi);

    if (core.size() >= 2) {
        PartialFactorization lead = factor_within(core.front(), budget);
        PartialFactorization trail = factor_within(core.back(), budget);
        out.complete = lead.complete && trail.complete;
        bool truncated = false;
        const std::size_t divisor_cap = 100000;
        std::vector<Int> bs = divisors_of(lead.factored, divisor_cap, truncated);
        std::vector<Int> as = divisors_of(trail.factored, divisor_cap, truncated);
        if (truncated) out.complete = false;
        for (const Int& b : bs) {
            for (const Int& a : as) {
                if (gcd(a, b) != 1) continue;
                for (int sign : {1, -1}) {
                    Int ax = sign * a;
                    // evaluate core at (ax, b); core[i] multiplies x^{Dc-i} y^i
                    const std::size_t Dc = core.size() - 1;
                    std::vector<Int> xp(Dc + 1), yp(Dc + 1);
                    xp[0] = yp[0] = 1;
                    for (std::size_t i = 1; i <= Dc; ++i) {
                        xp[i] = xp[i - 1] * ax;
                        yp[i] = yp[i - 1] * b;
                    }
                    Int acc = 0;
                    for (std::size_t i = 0; i <= Dc; ++i)
                        if (core[i] != 0) acc += core[i] * xp[Dc - i] * yp[i];
                    if (acc == 0) roots.insert(ProjPoint(ax, b));
                }
            }
        }
    }

    // every returned point must verify eval-iteration exactly
    for (const ProjPoint& P : roots) {
        ProjPoint Q = P;
        for (unsigned i = 0; i < period; ++i) Q = eval(map, Q);
        if (Q == P) out.points.push_back(P);
    }
    std::sort(out.points.begin(), out.points.end());
    return out;
}

DistanceReport check_distance_invariants(const Cycle& cycle) {
    const auto& P = cycle.points();
    const std::size_t n = P.size();
    DistanceReport out;
    if (n < 2) return out;

    std::set<Int> primes;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Int d = abs(cross_det(P[i], P[j]));
            if (d > 1)
                for (const Int& p : factor(d).support()) primes.insert(p);
        }
    for (const Int& p : bad_primes(cycle.map())) primes.erase(p);

    for (const Int& p : primes) {
        for (std::size_t gap = 1; gap < n; ++gap) {
            Delta base = log_distance(P[0], P[gap], p);
            for (std::size_t j = 1; j < n; ++j) {
                Delta d = log_distance(P[j], P[(j + gap) % n], p);
                if (d != base) {
                    out.ok = false;
                    out.violations.push_back({p, "shift-invariance", 0, gap, j});
                }
            }
            if (std::gcd(gap, n) == 1) {
                Delta first = log_distance(P[0], P[1], p);
                if (base != first) {
                    out.ok = false;
                    out.violations.push_back({p, "coprime-gap", 0, gap, 0});
                }
            }
        }
    }
    return out;
}

CycleLedger::CycleLedger(const Cycle& cycle, const SPrimeSet& S) : S_(S) {
    const auto& P = cycle.points();
    n_ = P.size();
    if (n_ < 2) throw std::invalid_argument("ledger needs a cycle of length >= 2");

    auto d = [&](std::size_t i, std::size_t j) { return Rat(cross_det(P[i % n_], P[j % n_])); };
    const Rat d01 = d(0, 1);

    gap_ratios_.resize(n_ - 1);
    for (std::size_t i = 1; i < n_; ++i) {
        gap_ratios_[i - 1] = d(0, i) / d01;
        if (!is_s_integer(gap_ratios_[i - 1], S))
            ledger_fail("gap ratio C_" + std::to_string(i) + " is not an S-integer");
    }

    shift_units_.assign(n_, std::vector<Rat>(n_ - 1));
    for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t i = 1; i < n_; ++i) {
            Rat u = d(j, j + i) / d(0, i);
            if (!is_s_unit(u, S))
                ledger_fail("shift unit u_{" + std::to_string(j) + "," +
                            std::to_string((j + i) % n_) + "} is not an S-unit");
            shift_units_[j][i - 1] = u;
        }

    nested_ratios_.assign(n_ - 1, std::vector<Rat>(n_ - 1));
    for (std::size_t i = 1; i < n_; ++i)
        for (std::size_t j = 1; j < n_; ++j) {
            std::size_t ij = (i * j) % n_;
            Rat L = (ij == 0) ? Rat(0) : Rat(d(0, ij) / d(0, j));
            if (!is_s_integer(L, S))
                ledger_fail("nested ratio L_{" + std::to_string(i) + "," + std::to_string(j) +
                            "} is not an S-integer");
            nested_ratios_[i - 1][j - 1] = L;
        }

    for (std::size_t i = 1; i < n_; ++i)
        ideals_.push_back(ideal_between(P[0], P[i], S));
    const Int& i1 = ideals_[0].generator();
    for (std::size_t i = 1; i < n_; ++i) {
        if (ideals_[i - 1].generator() % i1 != 0)
            ledger_fail("ideal I_1 does not divide I_" + std::to_string(i));
        reduced_.emplace_back(ideals_[i - 1].generator() / i1, S);
    }

    // coprime index pairs share no prime outside S:
    // min(v_p(C_i), v_p(C_j)) = 0 for all p not in S
    for (std::size_t i = 1; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) {
            if (std::gcd(i, j) != 1) continue;
            Int ni = split_s_part(Int(gap_ratios_[i - 1].get_num()), S).coprime_part;
            Int nj = split_s_part(Int(gap_ratios_[j - 1].get_num()), S).coprime_part;
            if (gcd(ni, nj) != 1)
                ledger_fail("gap ratios C_" + std::to_string(i) + ", C_" + std::to_string(j) +
                            " of coprime indices share a prime outside S");
        }
}

const Rat& CycleLedger::gap_ratio(std::size_t i) const {
    if (i < 1 || i >= n_) throw std::out_of_range("gap ratio index");
    return gap_ratios_[i - 1];
}

const Rat& CycleLedger::shift_unit(std::size_t j, std::size_t i) const {
    if (j >= n_ || i < 1 || i >= n_) throw std::out_of_range("shift unit index");
    return shift_units_[j][i - 1];
}

const Rat& CycleLedger::nested_ratio(std::size_t i, std::size_t j) const {
    if (i < 1 || i >= n_ || j < 1 || j >= n_) throw std::out_of_range("nested ratio index");
    return nested_ratios_[i - 1][j - 1];
}

const SIdeal& CycleLedger::ideal(std::size_t i) const {
    if (i < 1 || i >= n_) throw std::out_of_range("ideal index");
    return ideals_[i - 1];
}

const SIdeal& CycleLedger::reduced_ideal(std::size_t i) const {
    if (i < 1 || i >= n_) throw std::out_of_range("ideal index");
    return reduced_[i - 1];
}

CycleLedger cycle_ledger(const Cycle& cycle, const SPrimeSet& S) {
    return CycleLedger(cycle, S);
}

NormalizedTuple normalized_tuple(const Cycle& cycle, const SPrimeSet& S) {
    const auto& P = cycle.points();
    const std::size_t n = P.size();
    if (n < 2) throw std::invalid_argument("normalization needs a cycle of length >= 2");

    CycleLedger led(cycle, S);
    const Rat D01 = Rat(cross_det(P[0], P[1]));
    RMat2 A{Rat(-P[0].y()) / D01, Rat(P[0].x()) / D01,
            Rat(P[1].y()) / D01, Rat(-P[1].x()) / D01};

    std::vector<std::pair<Rat, Rat>> bar(n);
    for (std::size_t k = 0; k < n; ++k) bar[k] = A.apply(Rat(P[k].x()), Rat(P[k].y()));
    if (bar[0] != std::pair<Rat, Rat>{Rat(0), Rat(1)} ||
        bar[1] != std::pair<Rat, Rat>{Rat(1), Rat(0)})
        throw std::logic_error("normalization matrix failed on the first two points");

    // transformed coordinates are (C_k, -C_{k-1} u_{1,k})
    for (std::size_t k = 2; k < n; ++k) {
        if (bar[k].first != led.gap_ratio(k) ||
            bar[k].second != -led.gap_ratio(k - 1) * led.shift_unit(1, k - 1))
            ledger_fail("transformed coordinates of point " + std::to_string(k) +
                        " do not match the ledger");
    }

    // cross-determinant identity on the transformed coordinates:
    // xb_j yb_{j+i} - xb_{j+i} yb_j = -C_i u_{j,j+i}
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t k = (j + i) % n;
            Rat lhs = bar[j].first * bar[k].second - bar[k].first * bar[j].second;
            Rat rhs = -led.gap_ratio(i) * led.shift_unit(j, i);
            if (lhs != rhs)
                ledger_fail("transformed cross-determinant identity at (j=" +
                            std::to_string(j) + ", i=" + std::to_string(i) + ")");
        }

    // distance shift outside S: delta_p(Q_0,Q_i) = delta_p(P_0,P_i) - delta_p(P_0,P_1)
    std::vector<ProjPoint> barred;
    barred.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        barred.push_back(point_from_rats(bar[k].first, bar[k].second));
    {
        std::set<Int> primes = coprime_support(Int(D01.get_num()), S);
        for (std::size_t i = 2; i < n; ++i) {
            auto sup = coprime_support(cross_det(P[0], P[i]), S);
            primes.insert(sup.begin(), sup.end());
        }
        for (const Int& p : primes)
            for (std::size_t i = 1; i < n; ++i) {
                long lhs = static_cast<long>(log_distance(barred[0], barred[i], p).value());
                long rhs = static_cast<long>(log_distance(P[0], P[i], p).value()) -
                           static_cast<long>(log_distance(P[0], P[1], p).value());
                if (lhs != rhs)
                    ledger_fail("distance shift at prime " + p.get_str() + ", index " +
                                std::to_string(i));
            }
    }

    NormalizedTuple out{std::vector<ProjPoint>{}, Mobius::from_rational(A.a, A.b, A.c, A.d),
                        Mobius::identity()};
    if (n >= 3) {
        // strip sign and S-part from C_2 to get the canonical representative
        const Rat& C2 = led.gap_ratio(2);
        Int D2 = split_s_part(Int(C2.get_num()), S).coprime_part;
        const Rat& u12 = led.shift_unit(1, 1);
        Rat scale = Rat(D2) * u12 * u12 / C2;
        if (!is_s_unit(scale, S)) throw std::logic_error("diagonal rescale is not an S-unit");
        out.unit_scale = Mobius::from_rational(scale, Rat(0), Rat(0), -u12);
        for (std::size_t k = 0; k < n; ++k)
            out.points.push_back(point_from_rats(scale * bar[k].first, -u12 * bar[k].second));
        if (out.points[2] != ProjPoint(D2, 1))
            throw std::logic_error("rescale failed to canonicalize the third point");
    } else {
        out.points = barred;
    }
    return out;
}

std::vector<TupleClass> classify(const std::vector<Cycle>& cycles, const SPrimeSet& S) {
    std::vector<std::vector<ProjPoint>> tuples;
    tuples.reserve(cycles.size());
    for (const Cycle& c : cycles) tuples.push_back(c.points());
    return classify_tuples(tuples, S);
}

Int period_length_bound(unsigned place_count) {
    if (place_count < 1) throw std::invalid_argument("place count must be at least 1");
    // (12(s+2) ln(5(s+2)))^4 rounded upward throughout, then floored
    mpfr_t t;
    mpfr_init2(t, 256);
    mpfr_set_ui(t, 5u * (place_count + 2), MPFR_RNDU);
    mpfr_log(t, t, MPFR_RNDU);
    mpfr_mul_ui(t, t, 12u * (place_count + 2), MPFR_RNDU);
    mpfr_pow_ui(t, t, 4, MPFR_RNDU);
    mpfr_floor(t, t);
    Int out;
    mpfr_get_z(out.get_mpz_t(), t, MPFR_RNDZ);
    mpfr_clear(t);
    return out;
}

}  // namespace cycles
