#include "onedyn/plmap.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace onedyn::plmap {

namespace {

// slope of the segment (x0,y0)-(x1,y1); must be a (positive) power of two.
long slope_exponent(const Dyadic& x0, const Dyadic& y0, const Dyadic& x1,
                    const Dyadic& y1) {
    Dyadic dx = x1 - x0, dy = y1 - y0;
    if (dx.sign() <= 0 || dy.sign() <= 0)
        throw std::invalid_argument("PLMap: not strictly increasing");
    // dy/dx = 2^k  <=>  mantissas equal and exponents differ by k.
    if (dy.mantissa() != dx.mantissa())
        throw std::invalid_argument("PLMap: slope is not a power of two");
    return dy.exponent() - dx.exponent();
}

} // namespace

PLMap::PLMap(std::vector<Dyadic> xs, std::vector<Dyadic> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.size() < 2)
        throw std::invalid_argument("PLMap: need matching tables of size >= 2");
    if (!(xs_.front() == Dyadic(0)) || !(ys_.front() == Dyadic(0)) ||
        !(xs_.back() == Dyadic(1)) || !(ys_.back() == Dyadic(1)))
        throw std::invalid_argument("PLMap: must fix 0 and 1");
    for (size_t i = 1; i < xs_.size(); ++i)
        slope_exponent(xs_[i - 1], ys_[i - 1], xs_[i], ys_[i]); // validates
    normalize();
}

PLMap PLMap::identity() { return PLMap({Dyadic(0), Dyadic(1)}, {Dyadic(0), Dyadic(1)}); }

void PLMap::normalize() {
    std::vector<Dyadic> xs{xs_.front()}, ys{ys_.front()};
    for (size_t i = 1; i + 1 < xs_.size(); ++i) {
        long sl = slope_exponent(xs_[i - 1], ys_[i - 1], xs_[i], ys_[i]);
        long sr = slope_exponent(xs_[i], ys_[i], xs_[i + 1], ys_[i + 1]);
        if (sl != sr) {
            xs.push_back(xs_[i]);
            ys.push_back(ys_[i]);
        }
    }
    xs.push_back(xs_.back());
    ys.push_back(ys_.back());
    xs_ = std::move(xs);
    ys_ = std::move(ys);
}

Dyadic PLMap::eval(const Dyadic& x) const {
    if (x.sign() < 0 || x > Dyadic(1)) throw std::domain_error("PLMap: x outside [0,1]");
    size_t i = 1;
    while (i + 1 < xs_.size() && xs_[i] <= x) ++i;
    // segment [x_{i-1}, x_i]
    long k = slope_exponent(xs_[i - 1], ys_[i - 1], xs_[i], ys_[i]);
    return ys_[i - 1] + (x - xs_[i - 1]).mul_pow2(k);
}

double PLMap::eval(double x) const {
    if (x < 0.0 || x > 1.0) throw std::domain_error("PLMap: x outside [0,1]");
    size_t i = 1;
    while (i + 1 < xs_.size() && xs_[i].to_double() <= x) ++i;
    double x0 = xs_[i - 1].to_double(), y0 = ys_[i - 1].to_double();
    long k = slope_exponent(xs_[i - 1], ys_[i - 1], xs_[i], ys_[i]);
    return y0 + std::ldexp(x - x0, static_cast<int>(k));
}

long PLMap::slope_exp_at(const Dyadic& x) const {
    size_t i = 1;
    while (i + 1 < xs_.size() && xs_[i] <= x) ++i;
    return slope_exponent(xs_[i - 1], ys_[i - 1], xs_[i], ys_[i]);
}

PLMap PLMap::inverse() const { return PLMap(ys_, xs_); }

PLMap PLMap::compose(const PLMap& f, const PLMap& g) {
    // Breakpoints of g o f: breakpoints of f plus f-preimages of g's.
    std::vector<Dyadic> xs = f.xs_;
    PLMap finv = f.inverse();
    for (const auto& b : g.xs_) xs.push_back(finv.eval(b));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<Dyadic> ys;
    ys.reserve(xs.size());
    for (const auto& x : xs) ys.push_back(g.eval(f.eval(x)));
    return PLMap(std::move(xs), std::move(ys));
}

bool PLMap::is_identity() const { return *this == identity(); }

bool PLMap::operator==(const PLMap& o) const {
    return xs_ == o.xs_ && ys_ == o.ys_; // both normalized
}

std::string PLMap::str() const {
    std::ostringstream ss;
    for (size_t i = 0; i < xs_.size(); ++i)
        ss << xs_[i].str() << "=" << ys_[i].str() << "\n";
    return ss.str();
}

PLMap pl_word(const std::vector<PLLetter>& letters) {
    PLMap acc = PLMap::identity();
    // rightmost acts first: acc = l_1^{e_1} o ... o l_n^{e_n}
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
        const PLMap base = it->exp >= 0 ? *it->map : it->map->inverse();
        long n = it->exp >= 0 ? it->exp : -it->exp;
        for (long i = 0; i < n; ++i) acc = PLMap::compose(acc, base);
    }
    return acc;
}

} // namespace onedyn::plmap
