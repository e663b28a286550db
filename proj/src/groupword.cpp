#include "onedyn/groupword.hpp"

#include <sstream>
#include <stdexcept>

namespace onedyn::groupword {

GroupWord::GroupWord(std::vector<Syllable> syllables) : sylls_(std::move(syllables)) {}

GroupWord GroupWord::parse(const std::string& text) {
    std::istringstream ss(text);
    std::string tok;
    std::vector<Syllable> out;
    while (ss >> tok) {
        auto caret = tok.find('^');
        Syllable s;
        if (caret == std::string::npos) {
            s.gen = tok;
            s.exp = 1;
        } else {
            s.gen = tok.substr(0, caret);
            s.exp = std::stol(tok.substr(caret + 1));
        }
        if (s.gen.empty()) throw std::invalid_argument("word: empty generator name");
        out.push_back(std::move(s));
    }
    return GroupWord(std::move(out)).reduced();
}

GroupWord GroupWord::inverse() const {
    std::vector<Syllable> out;
    out.reserve(sylls_.size());
    for (auto it = sylls_.rbegin(); it != sylls_.rend(); ++it)
        out.push_back({it->gen, -it->exp});
    return GroupWord(std::move(out));
}

GroupWord GroupWord::operator*(const GroupWord& o) const {
    // (w1 * w2)(x) = w1(w2(x)): concatenate, o to the right (acts first).
    std::vector<Syllable> out = sylls_;
    out.insert(out.end(), o.sylls_.begin(), o.sylls_.end());
    return GroupWord(std::move(out)).reduced();
}

GroupWord GroupWord::commutator(const GroupWord& g, const GroupWord& h) {
    return g.inverse() * h.inverse() * g * h;
}

GroupWord GroupWord::conjugate(const GroupWord& g, const GroupWord& h) {
    return h.inverse() * g * h;
}

GroupWord GroupWord::reduced() const {
    std::vector<Syllable> out;
    for (const auto& s : sylls_) {
        if (s.exp == 0) continue;
        if (!out.empty() && out.back().gen == s.gen) {
            out.back().exp += s.exp;
            if (out.back().exp == 0) out.pop_back();
        } else {
            out.push_back(s);
        }
    }
    return GroupWord(std::move(out));
}

std::string GroupWord::str() const {
    std::ostringstream ss;
    for (size_t i = 0; i < sylls_.size(); ++i) {
        if (i) ss << " ";
        ss << sylls_[i].gen;
        if (sylls_[i].exp != 1) ss << "^" << sylls_[i].exp;
    }
    return ss.str();
}

homeo::Map1D compose_word(const std::map<std::string, homeo::Map1D>& gens,
                          const GroupWord& w) {
    if (gens.empty()) throw std::invalid_argument("compose_word: no generators");
    homeo::Interval dom = gens.begin()->second.domain();
    GroupWord r = w.reduced();
    if (r.empty()) return homeo::Map1D::identity(dom);
    std::vector<homeo::Map1D> chain; // apply order: first element first
    for (auto it = r.syllables().rbegin(); it != r.syllables().rend(); ++it) {
        auto g = gens.find(it->gen);
        if (g == gens.end())
            throw std::invalid_argument("compose_word: unbound generator " + it->gen);
        homeo::Map1D base = it->exp > 0 ? g->second : g->second.inverse();
        for (long i = 0; i < std::abs(it->exp); ++i) chain.push_back(base);
    }
    return homeo::Map1D::compose_chain(std::move(chain));
}

double eval_word(const std::map<std::string, homeo::Map1D>& gens, const GroupWord& w,
                 double x, double tol) {
    GroupWord r = w.reduced();
    size_t steps = 0;
    for (const auto& s : r.syllables()) steps += std::abs(s.exp);
    double per = tol / std::max<size_t>(1, steps);
    for (auto it = r.syllables().rbegin(); it != r.syllables().rend(); ++it) {
        auto g = gens.find(it->gen);
        if (g == gens.end())
            throw std::invalid_argument("eval_word: unbound generator " + it->gen);
        x = homeo::iterate(g->second, it->exp, x, per * std::abs(it->exp));
    }
    return x;
}

} // namespace onedyn::groupword
