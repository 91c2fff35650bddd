#include "cycles/equivalence.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cycles {

namespace {

void require_distinct(const std::vector<ProjPoint>& t) {
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j)
            if (t[i] == t[j]) throw std::invalid_argument("tuple has repeated points");
}

// determinant-one integer matrix sending P = [x:y] to [0:1]
Mobius point_to_zero(const ProjPoint& P) {
    Int g, rx, ry;
    mpz_gcdext(g.get_mpz_t(), rx.get_mpz_t(), ry.get_mpz_t(), P.x().get_mpz_t(),
               P.y().get_mpz_t());
    // g == 1 on canonical coordinates; [[y,-x],[rx,ry]] maps (x,y) to (0,1)
    return Mobius(P.y(), -P.x(), rx, ry);
}

// matrix sending ([0:1],[1:1],[1:0]) to the given distinct triple
Mobius basis_to(const std::array<ProjPoint, 3>& t) {
    Rat D = Rat(cross_det(t[2], t[0]));
    Rat alpha = Rat(cross_det(t[1], t[0])) / D;
    Rat beta = Rat(cross_det(t[2], t[1])) / D;
    return Mobius::from_rational(alpha * Rat(t[2].x()), beta * Rat(t[0].x()),
                                 alpha * Rat(t[2].y()), beta * Rat(t[0].y()));
}

bool witness_ok(const Mobius& W, const std::vector<ProjPoint>& tA,
                const std::vector<ProjPoint>& tB, const SPrimeSet& S) {
    if (!in_pgl2_zs(W, S)) return false;
    for (std::size_t i = 0; i < tA.size(); ++i)
        if (W.apply(tA[i]) != tB[i]) return false;
    return true;
}

// Decision for pairs, after both first points are normalized to [0:1]:
// the stabilizer of [0:1] consists of lower-triangular matrices, and
// [[eps,0],[g,1]] with eps an S-unit and g an S-integer maps [a1:a2] to
// [b1:b2] iff eps = (u_B a2) (u_A b2)^{-1} holds modulo the coprime-to-S
// part of a1, where a1 = u_A*abar, b1 = u_B*abar.
std::optional<Mobius> pair_witness(const ProjPoint& a, const ProjPoint& b,
                                   const SPrimeSet& S) {
    SSplit sa = split_s_part(a.x(), S);
    SSplit sb = split_s_part(b.x(), S);
    if (sa.coprime_part != sb.coprime_part) return std::nullopt;
    const Int& abar = sa.coprime_part;

    Rat eps(1);
    if (abar > 1) {
        Int uA = sa.sign * sa.s_part, uB = sb.sign * sb.s_part;
        Int rhs = (uB % abar) * (a.y() % abar) % abar;
        Int lhs_inv, lhs = (uA % abar) * (b.y() % abar) % abar;
        lhs = ((lhs % abar) + abar) % abar;
        rhs = ((rhs % abar) + abar) % abar;
        if (mpz_invert(lhs_inv.get_mpz_t(), lhs.get_mpz_t(), abar.get_mpz_t()) == 0)
            throw std::logic_error("stabilizer target not invertible");
        Int target = (rhs * lhs_inv) % abar;

        // breadth-first closure of the subgroup of (Z/abar)* generated by -1
        // and the primes of S, remembering a generating S-unit per residue
        std::map<Int, Rat> reach{{Int(1) % abar, Rat(1)}};
        std::vector<Int> frontier{Int(1) % abar};
        std::vector<std::pair<Int, Rat>> gens{{((abar - 1) % abar), Rat(-1)}};
        for (const Int& p : S.primes()) gens.emplace_back(p % abar, Rat(p));
        while (!frontier.empty()) {
            std::vector<Int> next;
            for (const Int& r : frontier)
                for (const auto& [gr, gv] : gens) {
                    Int nr = (r * gr) % abar;
                    if (reach.emplace(nr, reach.at(r) * gv).second) next.push_back(nr);
                }
            frontier = std::move(next);
        }
        auto it = reach.find(target);
        if (it == reach.end()) return std::nullopt;
        eps = it->second;
    }

    Rat g = (eps * Rat(a.x()) * Rat(b.y()) - Rat(a.y()) * Rat(b.x())) /
            (Rat(a.x()) * Rat(b.x()));
    if (!is_s_integer(g, S)) throw std::logic_error("stabilizer entry not an S-integer");
    return Mobius::from_rational(eps, Rat(0), g, Rat(1));
}

}  // namespace

bool in_pgl2_zs(const Mobius& M, const SPrimeSet& S) {
    return split_s_part(M.det(), S).coprime_part == 1;
}

Mobius mobius_from_three_points(const std::array<ProjPoint, 3>& src,
                                const std::array<ProjPoint, 3>& dst) {
    for (const auto* t : {&src, &dst})
        if ((*t)[0] == (*t)[1] || (*t)[0] == (*t)[2] || (*t)[1] == (*t)[2])
            throw std::invalid_argument("transport needs pairwise distinct triples");
    return basis_to(dst) * basis_to(src).inverse();
}

Mobius point_to_infinity(const ProjPoint& P) {
    Int g, rx, ry;
    mpz_gcdext(g.get_mpz_t(), rx.get_mpz_t(), ry.get_mpz_t(), P.x().get_mpz_t(),
               P.y().get_mpz_t());
    return Mobius(rx, ry, -P.y(), P.x());
}

std::optional<Mobius> tuples_equivalent(const std::vector<ProjPoint>& tA,
                                        const std::vector<ProjPoint>& tB,
                                        const SPrimeSet& S) {
    if (tA.size() != tB.size()) throw std::invalid_argument("tuple lengths differ");
    if (tA.empty()) throw std::invalid_argument("tuples must be nonempty");
    require_distinct(tA);
    require_distinct(tB);
    const std::size_t n = tA.size();

    // equivalent tuples have identical pairwise ideal tables; cheap filter
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (ideal_between(tA[i], tA[j], S) != ideal_between(tB[i], tB[j], S))
                return std::nullopt;

    std::optional<Mobius> W;
    if (n == 1) {
        W = point_to_infinity(tB[0]).inverse() * point_to_infinity(tA[0]);
    } else if (n == 2) {
        Mobius ZA = point_to_zero(tA[0]), ZB = point_to_zero(tB[0]);
        auto L = pair_witness(ZA.apply(tA[1]), ZB.apply(tB[1]), S);
        if (!L) return std::nullopt;
        W = ZB.inverse() * *L * ZA;
    } else {
        Mobius M = mobius_from_three_points({tA[0], tA[1], tA[2]}, {tB[0], tB[1], tB[2]});
        if (!witness_ok(M, tA, tB, S)) return std::nullopt;
        W = M;
    }
    if (!witness_ok(*W, tA, tB, S))
        throw std::logic_error("equivalence witness failed verification");
    return W;
}

std::vector<TupleClass> classify_tuples(const std::vector<std::vector<ProjPoint>>& tuples,
                                        const SPrimeSet& S) {
    std::vector<TupleClass> out;
    std::vector<bool> assigned(tuples.size(), false);
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        if (assigned[i]) continue;
        TupleClass cls;
        cls.members.push_back(i);
        cls.representative = tuples[i];
        assigned[i] = true;
        for (std::size_t j = i + 1; j < tuples.size(); ++j) {
            if (assigned[j] || tuples[j].size() != tuples[i].size()) continue;
            if (tuples_equivalent(tuples[i], tuples[j], S)) {
                cls.members.push_back(j);
                cls.representative = std::min(cls.representative, tuples[j]);
                assigned[j] = true;
            }
        }
        out.push_back(std::move(cls));
    }
    std::sort(out.begin(), out.end(), [](const TupleClass& a, const TupleClass& b) {
        return a.representative < b.representative;
    });
    return out;
}

}  // namespace cycles
