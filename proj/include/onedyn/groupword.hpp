#pragma once

#include <map>
#include <string>
#include <vector>

#include "onedyn/homeo.hpp"

namespace onedyn::groupword {

/// One syllable g^n of a word in abstract generators.
struct Syllable {
    std::string gen;
    long exp = 1;
};

/// A word in abstract generators; the RIGHTMOST syllable acts first,
/// matching function application order.
class GroupWord {
public:
    GroupWord() = default;
    explicit GroupWord(std::vector<Syllable> syllables);
    /// Parse "a^3 b^-2 c" (whitespace separated; ^1 may be omitted).
    static GroupWord parse(const std::string& text);

    GroupWord inverse() const;
    GroupWord operator*(const GroupWord& o) const; // concatenate (this then o... see note)
    static GroupWord commutator(const GroupWord& g, const GroupWord& h);
    static GroupWord conjugate(const GroupWord& g, const GroupWord& h); // h^{-1} g h

    /// Merge adjacent syllables with equal generators, drop zero exponents.
    GroupWord reduced() const;
    const std::vector<Syllable>& syllables() const { return sylls_; }
    bool empty() const { return sylls_.empty(); }
    size_t syllable_length() const { return sylls_.size(); }
    std::string str() const;

private:
    std::vector<Syllable> sylls_;
};

/// Bind generator names to maps and realize a word as a composition
/// (rightmost syllable applied first).  All generators must share a domain.
homeo::Map1D compose_word(const std::map<std::string, homeo::Map1D>& gens,
                          const GroupWord& w);

/// Pointwise evaluation of a word without building the tree.
double eval_word(const std::map<std::string, homeo::Map1D>& gens, const GroupWord& w,
                 double x, double tol = 1e-12);

} // namespace onedyn::groupword
