#include "cycles/projline.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace cycles {

ProjPoint::ProjPoint(Int x, Int y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_ == 0 && y_ == 0)
        throw std::invalid_argument("projective point needs a nonzero coordinate");
    Int g = gcd(x_, y_);
    x_ /= g;
    y_ /= g;
    if (y_ < 0 || (y_ == 0 && x_ < 0)) {
        x_ = -x_;
        y_ = -y_;
    }
}

ProjPoint ProjPoint::affine(const Rat& q) {
    return ProjPoint(Int(q.get_num()), Int(q.get_den()));
}

Rat ProjPoint::affine_value() const {
    if (is_infinity()) throw std::domain_error("point at infinity has no affine value");
    return Rat(x_) / Rat(y_);
}

std::strong_ordering ProjPoint::operator<=>(const ProjPoint& o) const {
    int c = cmp(x_, o.x_);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    c = cmp(y_, o.y_);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string ProjPoint::to_string() const {
    return "[" + x_.get_str() + ":" + y_.get_str() + "]";
}

Int cross_det(const ProjPoint& P, const ProjPoint& Q) {
    return P.x() * Q.y() - Q.x() * P.y();
}

unsigned long Delta::value() const {
    if (infinite_) throw std::domain_error("distance is infinite");
    return value_;
}

std::strong_ordering Delta::operator<=>(const Delta& o) const {
    if (infinite_ && o.infinite_) return std::strong_ordering::equal;
    if (infinite_) return std::strong_ordering::greater;
    if (o.infinite_) return std::strong_ordering::less;
    return value_ <=> o.value_;
}

std::string Delta::to_string() const {
    return infinite_ ? "inf" : std::to_string(value_);
}

Delta log_distance(const ProjPoint& P, const ProjPoint& Q, const Int& p) {
    Int d = cross_det(P, Q);
    if (d == 0) return Delta::infinity();
    return Delta::finite(static_cast<unsigned long>(valuation(d, p)));
}

SIdeal::SIdeal(Int generator, const SPrimeSet& S) : gen_(std::move(generator)) {
    if (gen_ < 1) throw std::invalid_argument("ideal generator must be positive");
    for (const Int& p : S.primes())
        if (gen_ % p == 0)
            throw std::invalid_argument("ideal generator must be coprime to S");
}

bool SIdeal::divides(const SIdeal& other) const { return other.gen_ % gen_ == 0; }

SIdeal ideal_between(const ProjPoint& P, const ProjPoint& Q, const SPrimeSet& S) {
    Int d = cross_det(P, Q);
    if (d == 0) throw std::domain_error("ideal undefined for equal points");
    return SIdeal(split_s_part(d, S).coprime_part, S);
}

TupleReduction tuple_good_reduction(const std::vector<ProjPoint>& points, const SPrimeSet& S) {
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j])
                throw std::invalid_argument("tuple has repeated points");

    TupleReduction out;
    std::map<Int, std::pair<std::size_t, std::size_t>> bad;   // prime -> first offending pair
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            Int c = split_s_part(cross_det(points[i], points[j]), S).coprime_part;
            if (c == 1) continue;
            out.good = false;
            for (const Int& p : factor(c).support())
                bad.emplace(p, std::make_pair(i, j));
        }
    }
    for (const auto& [p, pair] : bad)
        out.witnesses.push_back({p, pair.first, pair.second});
    return out;
}

Rat cross_ratio(const ProjPoint& P1, const ProjPoint& P2, const ProjPoint& P3,
                const ProjPoint& P4) {
    const ProjPoint* pts[4] = {&P1, &P2, &P3, &P4};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (*pts[i] == *pts[j])
                throw std::invalid_argument("cross-ratio needs pairwise distinct points");
    Rat num = Rat(cross_det(P1, P3)) * Rat(cross_det(P2, P4));
    Rat den = Rat(cross_det(P1, P2)) * Rat(cross_det(P3, P4));
    return num / den;
}

Int tuple_form_discriminant(const std::vector<ProjPoint>& points) {
    if (points.size() < 2)
        throw std::invalid_argument("form discriminant needs at least two points");
    Int out = 1;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            Int d = cross_det(points[i], points[j]);
            if (d == 0) throw std::invalid_argument("tuple has repeated points");
            out *= d * d;
        }
    }
    return out;
}

}  // namespace cycles
