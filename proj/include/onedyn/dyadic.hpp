#pragma once

#include <iosfwd>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace onedyn::dyadic {

using BigInt = boost::multiprecision::cpp_int;

/// Exact dyadic rational: mantissa * 2^exponent, canonical form (odd mantissa
/// or zero).  Closed under +, -, *, and division by powers of two.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(long value) : mant_(value), exp_(0) { canonicalize(); } // NOLINT
    Dyadic(BigInt mantissa, long exponent)
        : mant_(std::move(mantissa)), exp_(exponent) {
        canonicalize();
    }
    /// p / 2^q.
    static Dyadic scaled(long p, long q) { return Dyadic(BigInt(p), -q); }

    const BigInt& mantissa() const { return mant_; }
    long exponent() const { return exp_; }
    bool is_zero() const { return mant_ == 0; }
    int sign() const { return mant_ == 0 ? 0 : (mant_ > 0 ? 1 : -1); }

    Dyadic operator+(const Dyadic& o) const;
    Dyadic operator-(const Dyadic& o) const;
    Dyadic operator*(const Dyadic& o) const;
    Dyadic operator-() const { return Dyadic(-mant_, exp_); }
    /// Multiply by 2^k (exact division by powers of two via negative k).
    Dyadic mul_pow2(long k) const { return Dyadic(mant_, exp_ + k); }

    bool operator==(const Dyadic& o) const {
        return mant_ == o.mant_ && (mant_ == 0 || exp_ == o.exp_);
    }
    bool operator!=(const Dyadic& o) const { return !(*this == o); }
    bool operator<(const Dyadic& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const Dyadic& o) const { return (*this - o).sign() <= 0; }
    bool operator>(const Dyadic& o) const { return o < *this; }
    bool operator>=(const Dyadic& o) const { return o <= *this; }

    double to_double() const;
    /// "mantissa/2^k" or plain integer text.
    std::string str() const;
    /// Parses "p/2^q", "p/q" with q a power of two, decimal like "0.375",
    /// or a plain integer.
    static Dyadic parse(const std::string& text);

private:
    void canonicalize();
    BigInt mant_ = 0;
    long exp_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Dyadic& d);

} // namespace onedyn::dyadic
