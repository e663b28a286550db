#include "onedyn/dyadic.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace onedyn::dyadic {

void Dyadic::canonicalize() {
    if (mant_ == 0) {
        exp_ = 0;
        return;
    }
    while ((mant_ & 1) == 0) {
        mant_ >>= 1;
        ++exp_;
    }
}

namespace {
// Align two dyadics to a common exponent (the smaller one).
void align(const Dyadic& a, const Dyadic& b, BigInt& ma, BigInt& mb, long& e) {
    long ea = a.exponent(), eb = b.exponent();
    e = std::min(a.is_zero() ? eb : ea, b.is_zero() ? ea : eb);
    ma = a.mantissa() << static_cast<unsigned>(ea - e);
    mb = b.mantissa() << static_cast<unsigned>(eb - e);
}
} // namespace

Dyadic Dyadic::operator+(const Dyadic& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    BigInt ma, mb;
    long e;
    align(*this, o, ma, mb, e);
    return Dyadic(ma + mb, e);
}

Dyadic Dyadic::operator-(const Dyadic& o) const { return *this + (-o); }

Dyadic Dyadic::operator*(const Dyadic& o) const {
    return Dyadic(mant_ * o.mant_, exp_ + o.exp_);
}

double Dyadic::to_double() const {
    if (mant_ == 0) return 0.0;
    return std::ldexp(mant_.convert_to<double>(), static_cast<int>(exp_));
}

std::string Dyadic::str() const {
    std::ostringstream ss;
    if (exp_ >= 0) {
        ss << (mant_ << static_cast<unsigned>(exp_));
    } else {
        ss << mant_ << "/2^" << -exp_;
    }
    return ss.str();
}

Dyadic Dyadic::parse(const std::string& text) {
    auto bad = [&]() -> Dyadic {
        throw std::invalid_argument("not a dyadic rational: " + text);
    };
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt p(text.substr(0, slash));
        std::string den = text.substr(slash + 1);
        long q = 0;
        if (den.rfind("2^", 0) == 0) {
            q = std::stol(den.substr(2));
        } else {
            BigInt d(den);
            if (d <= 0) return bad();
            while ((d & 1) == 0) {
                d >>= 1;
                ++q;
            }
            if (d != 1) return bad();
        }
        return Dyadic(p, -q);
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        // decimal: p.q -> integer and fractional digits; must reduce to /2^k
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        long frac = static_cast<long>(text.size() - dot - 1);
        BigInt n(digits);
        // n / 10^frac = n / (2^frac 5^frac): need 5^frac | n.
        BigInt five = 1;
        for (long i = 0; i < frac; ++i) five *= 5;
        if (n % five != 0) return bad();
        return Dyadic(n / five, -frac);
    }
    return Dyadic(BigInt(text), 0);
}

std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.str(); }

} // namespace onedyn::dyadic
