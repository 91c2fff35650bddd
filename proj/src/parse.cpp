#include "cycles/parse.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace cycles {

namespace {

[[noreturn]] void parse_fail(std::string_view what, std::string_view token) {
    throw std::invalid_argument("parse error: " + std::string(what) + " at '" +
                                std::string(token) + "'");
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

Int parse_integer(std::string_view text) {
    std::string t(trim(text));
    if (t.empty()) parse_fail("expected integer", text);
    Int out;
    if (mpz_set_str(out.get_mpz_t(), t.c_str(), 10) != 0) parse_fail("bad integer", t);
    return out;
}

// ---- rational-function expression parser --------------------------------

// polynomials over Q, ascending coefficients, no trailing zeros
using QPoly = std::vector<Rat>;

QPoly qp_trim(QPoly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

QPoly qp_add(const QPoly& a, const QPoly& b) {
    QPoly out(std::max(a.size(), b.size()), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return qp_trim(std::move(out));
}

QPoly qp_neg(QPoly a) {
    for (Rat& c : a) c = -c;
    return a;
}

QPoly qp_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly out(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return qp_trim(std::move(out));
}

// remainder of a by b (b nonzero)
QPoly qp_rem(QPoly a, const QPoly& b) {
    while (a.size() >= b.size() && !a.empty()) {
        Rat q = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
        a = qp_trim(std::move(a));
    }
    return a;
}

QPoly qp_divexact(QPoly a, const QPoly& b) {
    QPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rat(0));
    while (a.size() >= b.size() && !a.empty()) {
        Rat c = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        a = qp_trim(std::move(a));
    }
    if (!a.empty()) throw std::logic_error("polynomial division was not exact");
    return qp_trim(std::move(q));
}

QPoly qp_gcd(QPoly a, QPoly b) {
    a = qp_trim(std::move(a));
    b = qp_trim(std::move(b));
    while (!b.empty()) {
        QPoly r = qp_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rat lead = a.back();
        for (Rat& c : a) c /= lead;   // monic
    }
    return a;
}

struct RatFunc {
    QPoly num, den;   // den nonzero
};

RatFunc rf_const(const Rat& c) { return {c == 0 ? QPoly{} : QPoly{c}, {Rat(1)}}; }
RatFunc rf_z() { return {{Rat(0), Rat(1)}, {Rat(1)}}; }

RatFunc rf_add(const RatFunc& a, const RatFunc& b) {
    return {qp_add(qp_mul(a.num, b.den), qp_mul(b.num, a.den)), qp_mul(a.den, b.den)};
}
RatFunc rf_neg(RatFunc a) {
    a.num = qp_neg(std::move(a.num));
    return a;
}
RatFunc rf_mul(const RatFunc& a, const RatFunc& b) {
    return {qp_mul(a.num, b.num), qp_mul(a.den, b.den)};
}
RatFunc rf_div(const RatFunc& a, const RatFunc& b) {
    if (b.num.empty()) throw std::invalid_argument("division by the zero function");
    return {qp_mul(a.num, b.den), qp_mul(a.den, b.num)};
}

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : s_(text) {}

    RatFunc parse() {
        RatFunc f = expr();
        skip_ws();
        if (pos_ != s_.size()) parse_fail("trailing input", s_.substr(pos_));
        return f;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    RatFunc expr() {
        RatFunc f = eat('-') ? rf_neg(term()) : (eat('+'), term());
        while (true) {
            if (eat('+'))
                f = rf_add(f, term());
            else if (eat('-'))
                f = rf_add(f, rf_neg(term()));
            else
                return f;
        }
    }

    RatFunc term() {
        RatFunc f = factor();
        while (true) {
            if (eat('*'))
                f = rf_mul(f, factor());
            else if (eat('/'))
                f = rf_div(f, factor());
            else
                return f;
        }
    }

    RatFunc factor() {
        if (eat('-')) return rf_neg(factor());
        if (eat('+')) return factor();
        RatFunc base = atom();
        if (eat('^')) {
            unsigned long e = exponent();
            RatFunc out = rf_const(Rat(1));
            for (unsigned long i = 0; i < e; ++i) out = rf_mul(out, base);
            return out;
        }
        return base;
    }

    RatFunc atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            RatFunc f = expr();
            if (!eat(')')) parse_fail("expected ')'", s_.substr(pos_));
            return f;
        }
        if (c == 'z') {
            ++pos_;
            return rf_z();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            Rat v(std::string(s_.substr(start, pos_ - start)));
            return rf_const(v);
        }
        parse_fail("expected '(', 'z' or a number", s_.substr(pos_));
    }

    unsigned long exponent() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) parse_fail("expected exponent", s_.substr(start));
        unsigned long e = std::stoul(std::string(s_.substr(start, pos_ - start)));
        if (e > 10000) parse_fail("exponent too large", s_.substr(start, pos_ - start));
        return e;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

std::string poly_to_string(const std::vector<Int>& asc) {
    if (asc.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = asc.size(); k-- > 0;) {
        const Int& c = asc[k];
        if (c == 0) continue;
        if (first) {
            if (c < 0) os << '-';
            first = false;
        } else {
            os << (c < 0 ? '-' : '+');
        }
        Int m = abs(c);
        if (k == 0) {
            os << m;
        } else {
            if (m != 1) os << m << '*';
            os << 'z';
            if (k > 1) os << '^' << k;
        }
    }
    if (first) return "0";
    return os.str();
}

}  // namespace

Rat parse_rational(std::string_view text) {
    std::string t(trim(text));
    if (t.empty()) parse_fail("expected rational", text);
    Rat out;
    if (mpq_set_str(out.get_mpq_t(), t.c_str(), 10) != 0) parse_fail("bad rational", t);
    if (out.get_den() == 0) parse_fail("zero denominator", t);
    out.canonicalize();
    return out;
}

ProjPoint parse_point(std::string_view text) {
    std::string_view t = trim(text);
    if (t == "inf") return ProjPoint::infinity();
    if (!t.empty() && t.front() == '[') {
        if (t.back() != ']') parse_fail("expected ']'", t);
        std::string_view inner = t.substr(1, t.size() - 2);
        std::size_t colon = inner.find(':');
        if (colon == std::string_view::npos) parse_fail("expected ':'", t);
        Int x = parse_integer(inner.substr(0, colon));
        Int y = parse_integer(inner.substr(colon + 1));
        if (x == 0 && y == 0) parse_fail("degenerate point [0:0]", t);
        return ProjPoint(x, y);
    }
    return ProjPoint::affine(parse_rational(t));
}

std::string format_point(const ProjPoint& P) { return P.to_string(); }

std::vector<ProjPoint> parse_tuple(std::string_view text) {
    std::vector<ProjPoint> out;
    std::istringstream is{std::string(text)};
    std::string tok;
    while (is >> tok) out.push_back(parse_point(tok));
    return out;
}

HomogMap parse_map(std::string_view text) {
    RatFunc f = ExprParser(trim(text)).parse();
    if (f.num.empty()) throw std::invalid_argument("zero map");
    QPoly g = qp_gcd(f.num, f.den);
    QPoly num = qp_divexact(f.num, g), den = qp_divexact(f.den, g);
    Int l = 1;
    for (const Rat& c : num) l = lcm(l, Int(c.get_den()));
    for (const Rat& c : den) l = lcm(l, Int(c.get_den()));
    AffineRationalFunction a;
    for (const Rat& c : num) a.num.push_back(Int(c.get_num()) * (l / Int(c.get_den())));
    for (const Rat& c : den) a.den.push_back(Int(c.get_num()) * (l / Int(c.get_den())));
    return from_affine(a);
}

std::string format_map(const HomogMap& map) {
    AffineRationalFunction a = to_affine(map);
    if (a.den.size() == 1 && a.den[0] == 1) return poly_to_string(a.num);
    return "(" + poly_to_string(a.num) + ")/(" + poly_to_string(a.den) + ")";
}

std::string format_rational(const Rat& q) { return q.get_str(); }

}  // namespace cycles
