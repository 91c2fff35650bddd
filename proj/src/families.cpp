#include "cycles/families.hpp"

#include <set>
#include <stdexcept>

namespace cycles {

namespace {

// homogenize a pair of ascending rational coefficient lists at the joint
// degree, clearing denominators
HomogMap from_affine_rats(const std::vector<Rat>& num, const std::vector<Rat>& den) {
    Int l = 1;
    for (const Rat& c : num) l = lcm(l, Int(c.get_den()));
    for (const Rat& c : den) l = lcm(l, Int(c.get_den()));
    AffineRationalFunction f;
    for (const Rat& c : num) f.num.push_back(Int(c.get_num()) * (l / Int(c.get_den())));
    for (const Rat& c : den) f.den.push_back(Int(c.get_num()) * (l / Int(c.get_den())));
    return from_affine(f);
}

}  // namespace

HomogMap family_rotation() {
    return from_affine({{Int(1)}, {Int(1), Int(-1)}});
}

HomogMap family_base_map() {
    return from_affine({{Int(2), Int(-3), Int(-3), Int(2)}, {Int(0), Int(-2), Int(2)}});
}

Mobius family_correction(const Rat& u) {
    if (u == 0) throw std::domain_error("degenerate u: correction matrix is singular");
    Rat a = 4 * u * u - 4 * u;
    Rat b = 4 * u * u * u - 6 * u * u - 6 * u + 4;
    Rat c = 2 * u;
    Rat d = 4 * u * u + u - 2;
    return Mobius::from_rational(a, b, c, d);   // det 8u^4 != 0
}

FamilyInstance build_family(const Rat& u, const SPrimeSet& S, bool strict) {
    if (u == 0) throw std::domain_error("degenerate u: correction matrix is singular");
    if (strict && !is_s_unit(u, S))
        throw std::domain_error("u must be an S-unit for good reduction");

    HomogMap rotation = family_rotation();
    HomogMap base = family_base_map();
    Mobius corr = family_correction(u);

    // the composed interior must match its expanded coefficient form
    HomogMap interior = compose(mobius_to_map(corr), base);
    std::vector<Rat> inum = {2 * u * u - 2 * u, -2 * u * u * u + 6 * u - 2,
                             2 * u * u * u - 6 * u * u + 2, 2 * u * u - 2 * u};
    std::vector<Rat> iden = {u, -2 * u * u - 2 * u + 1, 2 * u * u - u - 1, u};
    if (interior != from_affine_rats(inum, iden))
        throw std::logic_error("family interior map does not match its expanded form");

    HomogMap fixing = degree_bump(corr, base);
    if (fixing.degree() != base.degree() + 1)
        throw std::logic_error("family fixing map has wrong degree");
    HomogMap phi = compose(rotation, fixing);

    const Int p(u.get_num()), q(u.get_den());
    std::array<ProjPoint, 3> triple{ProjPoint(p, p - q), ProjPoint(p - q, -q),
                                    ProjPoint(q, p)};

    for (const ProjPoint& pt : triple)
        if (eval(interior, pt) != ProjPoint(0, 1))
            throw std::logic_error("family triple is not annihilated by the interior map");
    for (const ProjPoint& pt : triple)
        if (eval(fixing, pt) != pt)
            throw std::logic_error("family fixing map does not fix the triple");
    for (std::size_t i = 0; i < 3; ++i)
        if (eval(phi, triple[i]) != triple[(i + 1) % 3])
            throw std::logic_error("family map does not cycle the triple");

    std::vector<Int> bad = bad_primes(phi);
    bool good = true;
    for (const Int& pr : bad)
        if (!S.contains(pr)) good = false;

    return FamilyInstance{u,
                          std::move(rotation),
                          std::move(base),
                          std::move(fixing),
                          std::move(phi),
                          std::move(corr),
                          triple,
                          ideal_between(triple[0], triple[1], S),
                          ideal_between(triple[0], triple[2], S),
                          std::move(bad),
                          good};
}

std::vector<CensusRow> ideal_census(unsigned n_max, const FactorBudget& budget) {
    if (n_max < 1) throw std::invalid_argument("census needs n_max >= 1");
    SPrimeSet S({Int(2)});
    std::vector<CensusRow> rows;
    std::set<Int> cumulative;
    Int pw = 1;   // 2^n
    for (unsigned n = 1; n <= n_max; ++n) {
        pw *= 2;
        Int g = pw * pw - pw + 1;
        FamilyInstance inst = build_family(Rat(pw), S);
        if (inst.ideal1.generator() != g)
            throw std::logic_error("census generator disagrees with the built family");
        PartialFactorization pf = factor_within(g, budget);
        for (const auto& [pr, e] : pf.factored.factors) cumulative.insert(pr);
        rows.push_back({n, g, pf.factored, pf.complete, cumulative.size()});
    }
    return rows;
}

}  // namespace cycles
