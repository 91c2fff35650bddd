#include "cycles/mobius.hpp"

#include <stdexcept>

namespace cycles {

Mobius::Mobius(Int a, Int b, Int c, Int d)
    : e_{std::move(a), std::move(b), std::move(c), std::move(d)} {
    if (e_[0] * e_[3] - e_[1] * e_[2] == 0)
        throw std::invalid_argument("mobius matrix must be invertible");
    Int g = gcd(gcd(e_[0], e_[1]), gcd(e_[2], e_[3]));
    for (Int& x : e_) x /= g;
    for (const Int& x : e_) {
        if (x == 0) continue;
        if (x < 0)
            for (Int& y : e_) y = -y;
        break;
    }
}

Mobius Mobius::from_rational(const Rat& a, const Rat& b, const Rat& c, const Rat& d) {
    Int l = lcm(lcm(Int(a.get_den()), Int(b.get_den())),
                lcm(Int(c.get_den()), Int(d.get_den())));
    auto clear = [&](const Rat& x) -> Int { return Int(x.get_num()) * (l / Int(x.get_den())); };
    return Mobius(clear(a), clear(b), clear(c), clear(d));
}

Mobius Mobius::inverse() const { return Mobius(e_[3], -e_[1], -e_[2], e_[0]); }

ProjPoint Mobius::apply(const ProjPoint& P) const {
    return ProjPoint(e_[0] * P.x() + e_[1] * P.y(), e_[2] * P.x() + e_[3] * P.y());
}

Mobius operator*(const Mobius& lhs, const Mobius& rhs) {
    return Mobius(lhs.e_[0] * rhs.e_[0] + lhs.e_[1] * rhs.e_[2],
                  lhs.e_[0] * rhs.e_[1] + lhs.e_[1] * rhs.e_[3],
                  lhs.e_[2] * rhs.e_[0] + lhs.e_[3] * rhs.e_[2],
                  lhs.e_[2] * rhs.e_[1] + lhs.e_[3] * rhs.e_[3]);
}

std::string Mobius::to_string() const {
    return "[[" + e_[0].get_str() + "," + e_[1].get_str() + "],[" + e_[2].get_str() + "," +
           e_[3].get_str() + "]]";
}

}  // namespace cycles
