#include "cycles/ratmap.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace cycles {

namespace {

// Binary forms as descending-x coefficient vectors, same convention as
// HomogMap: v[i] multiplies x^{D-i} y^i with D = v.size()-1.

std::vector<Int> form_mul(const std::vector<Int>& a, const std::vector<Int>& b) {
    std::vector<Int> out(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

std::vector<Int> form_add(const std::vector<Int>& a, const std::vector<Int>& b) {
    std::vector<Int> out(std::max(a.size(), b.size()), Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

std::vector<Int> form_scale(const Int& c, const std::vector<Int>& a) {
    std::vector<Int> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
    return out;
}

std::vector<Int> form_mul_x(std::vector<Int> a) {
    a.push_back(0);
    return a;
}

std::vector<Int> form_mul_y(std::vector<Int> a) {
    a.insert(a.begin(), Int(0));
    return a;
}

Int form_eval(const std::vector<Int>& a, const Int& x, const Int& y) {
    // sum a[i] * x^{D-i} * y^i, Horner-style in y with explicit x powers
    const std::size_t D = a.size() - 1;
    std::vector<Int> xp(D + 1);
    xp[0] = 1;
    for (std::size_t i = 1; i <= D; ++i) xp[i] = xp[i - 1] * x;
    Int acc = 0, yp = 1;
    for (std::size_t i = 0; i <= D; ++i) {
        if (a[i] != 0) acc += a[i] * xp[D - i] * yp;
        if (i < D) yp *= y;
    }
    return acc;
}

Int sylvester_resultant(const std::vector<Int>& f, const std::vector<Int>& g) {
    const std::size_t d = f.size() - 1;
    const std::size_t n = 2 * d;
    std::vector<std::vector<Int>> m(n, std::vector<Int>(n, Int(0)));
    for (std::size_t row = 0; row < d; ++row)
        for (std::size_t k = 0; k <= d; ++k) {
            m[row][row + k] = f[k];
            m[d + row][row + k] = g[k];
        }
    return integer_determinant(std::move(m));
}

}  // namespace

Int integer_determinant(std::vector<std::vector<Int>> m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && m[pivot][k] == 0) ++pivot;
        if (pivot == n) return 0;
        if (pivot != k) {
            std::swap(m[pivot], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Int t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

HomogMap::HomogMap(std::vector<Int> F, std::vector<Int> G)
    : f_(std::move(F)), g_(std::move(G)) {
    if (f_.size() != g_.size())
        throw std::invalid_argument("map forms must have equal degree");
    if (f_.size() < 2) throw std::invalid_argument("map degree must be at least 1");
    normalize();
    res_ = sylvester_resultant(f_, g_);
    if (res_ == 0) throw std::invalid_argument("map forms share a projective root");
}

HomogMap::HomogMap(std::vector<Int> F, std::vector<Int> G, Trusted)
    : f_(std::move(F)), g_(std::move(G)) {
    normalize();
}

void HomogMap::normalize() {
    Int g = 0;
    for (const Int& c : f_) g = gcd(g, c);
    for (const Int& c : g_) g = gcd(g, c);
    if (g == 0) throw std::invalid_argument("zero map");
    for (Int& c : f_) c /= g;
    for (Int& c : g_) c /= g;
    for (const std::vector<Int>* v : {&f_, &g_}) {
        for (const Int& c : *v) {
            if (c == 0) continue;
            if (c < 0) {
                for (Int& x : f_) x = -x;
                for (Int& x : g_) x = -x;
            }
            return;
        }
    }
}

const Int& HomogMap::resultant() const {
    if (res_ == 0) res_ = sylvester_resultant(f_, g_);
    return res_;
}

bool operator==(const HomogMap& a, const HomogMap& b) { return a.f_ == b.f_ && a.g_ == b.g_; }

std::string HomogMap::to_string() const {
    std::ostringstream os;
    os << "deg " << degree() << " [";
    for (std::size_t i = 0; i < f_.size(); ++i) os << (i ? "," : "") << f_[i];
    os << "]/[";
    for (std::size_t i = 0; i < g_.size(); ++i) os << (i ? "," : "") << g_[i];
    os << "]";
    return os.str();
}

ProjPoint eval(const HomogMap& map, const ProjPoint& P) {
    return ProjPoint(form_eval(map.F(), P.x(), P.y()), form_eval(map.G(), P.x(), P.y()));
}

Factorization disc_valuations(const HomogMap& map) { return factor(abs(map.resultant())); }

std::vector<Int> bad_primes(const HomogMap& map) { return disc_valuations(map).support(); }

bool good_reduction_map(const HomogMap& map, const SPrimeSet& S) {
    for (const Int& p : bad_primes(map))
        if (!S.contains(p)) return false;
    return true;
}

HomogMap compose(const HomogMap& outer, const HomogMap& inner) {
    const unsigned a = outer.degree();
    // powers of the inner forms up to a
    std::vector<std::vector<Int>> fp{{Int(1)}}, gp{{Int(1)}};
    for (unsigned k = 1; k <= a; ++k) {
        fp.push_back(form_mul(fp.back(), inner.F()));
        gp.push_back(form_mul(gp.back(), inner.G()));
    }
    std::vector<Int> Fc{Int(0)}, Gc{Int(0)};
    for (unsigned i = 0; i <= a; ++i) {
        if (outer.F()[i] == 0 && outer.G()[i] == 0) continue;
        std::vector<Int> mono = form_mul(fp[a - i], gp[i]);
        if (outer.F()[i] != 0) Fc = form_add(Fc, form_scale(outer.F()[i], mono));
        if (outer.G()[i] != 0) Gc = form_add(Gc, form_scale(outer.G()[i], mono));
    }
    const std::size_t want = static_cast<std::size_t>(a) * inner.degree() + 1;
    Fc.resize(want, Int(0));
    Gc.resize(want, Int(0));
    // Composition of morphisms is a morphism, so the resultant stays nonzero;
    // skip the Sylvester check, which is expensive for iterates.
    return HomogMap(std::move(Fc), std::move(Gc), HomogMap::Trusted{});
}

HomogMap iterate_map(const HomogMap& map, unsigned n) {
    if (n == 0) throw std::invalid_argument("iterate count must be positive");
    HomogMap acc = map;
    for (unsigned i = 1; i < n; ++i) acc = compose(map, acc);
    return acc;
}

HomogMap mobius_to_map(const Mobius& A) {
    return HomogMap({A.a(), A.b()}, {A.c(), A.d()});
}

HomogMap mobius_conjugate(const Mobius& A, const HomogMap& map) {
    return compose(mobius_to_map(A), compose(map, mobius_to_map(A.inverse())));
}

HomogMap degree_bump(const Mobius& T, const HomogMap& phi) {
    if (T.c() == 0)
        throw std::invalid_argument("degree bump requires nonzero lower-left entry");
    if (eval(phi, ProjPoint::infinity()) != ProjPoint::infinity())
        throw std::invalid_argument("degree bump requires a map fixing infinity");
    // z + T(phi(z)) with phi = N/D:
    //   numerator   x*(c_21 N + c_22 D) + y*(c_11 N + c_12 D)
    //   denominator y*(c_21 N + c_22 D)
    std::vector<Int> W = form_add(form_scale(T.c(), phi.F()), form_scale(T.d(), phi.G()));
    std::vector<Int> V = form_add(form_scale(T.a(), phi.F()), form_scale(T.b(), phi.G()));
    std::vector<Int> Fn = form_add(form_mul_x(W), form_mul_y(V));
    std::vector<Int> Gn = form_mul_y(W);
    HomogMap out(std::move(Fn), std::move(Gn));
    if (out.degree() != phi.degree() + 1)
        throw std::logic_error("degree bump did not raise the degree");
    return out;
}

HomogMap from_affine(const AffineRationalFunction& f) {
    std::vector<Int> num = f.num, den = f.den;
    while (!num.empty() && num.back() == 0) num.pop_back();
    while (!den.empty() && den.back() == 0) den.pop_back();
    if (den.empty()) throw std::invalid_argument("zero denominator");
    if (num.empty()) throw std::invalid_argument("zero map");
    const std::size_t d = std::max(num.size(), den.size()) - 1;
    if (d == 0) throw std::invalid_argument("constant is not a self-map of degree >= 1");
    std::vector<Int> F(d + 1, Int(0)), G(d + 1, Int(0));
    for (std::size_t i = 0; i < num.size(); ++i) F[d - i] = num[i];
    for (std::size_t i = 0; i < den.size(); ++i) G[d - i] = den[i];
    if (sylvester_resultant(F, G) == 0) throw std::invalid_argument("not in lowest terms");
    return HomogMap(std::move(F), std::move(G));
}

AffineRationalFunction to_affine(const HomogMap& map) {
    AffineRationalFunction out;
    out.num.assign(map.F().rbegin(), map.F().rend());
    out.den.assign(map.G().rbegin(), map.G().rend());
    while (!out.num.empty() && out.num.back() == 0) out.num.pop_back();
    while (!out.den.empty() && out.den.back() == 0) out.den.pop_back();
    return out;
}

}  // namespace cycles
