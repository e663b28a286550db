#pragma once

#include <functional>
#include <string>
#include <vector>

#include "onedyn/homeo.hpp"
#include "onedyn/plmap.hpp"
#include "onedyn/report.hpp"

namespace onedyn::thompson {

using dyadic::Dyadic;
using homeo::Map1D;
using plmap::PLMap;

/// The standard generators A, B of Thompson's group F (exact tables).
std::pair<PLMap, PLMap> standard_generators();

/// Both defining relators [AB^{-1}, A^{-1}BA] and [AB^{-1}, A^{-2}BA^2]
/// reduce to the exact identity.
bool relations_check(const PLMap& A, const PLMap& B);

/// The exact F-element carrying the increasing dyadic tuple xs onto ys
/// (positive n-transitivity), built from the power-of-two partition of the
/// gap lengths.
PLMap n_transitive_map(const std::vector<Dyadic>& xs, const std::vector<Dyadic>& ys);

/// An expansion map h for the smooth realization of F:
/// h(0) = 0, h(x+1) = h(x) + 2, |h(x)-h(y)| > |x-y|.
class ExpansionMap {
public:
    /// h(x) = 2x (the piecewise-linear case; eta is then the identity).
    static ExpansionMap doubling();
    /// The smooth default: h(x) = x + (Phi(x)+1)/2 on [0,1], extended by
    /// h(x+n) = h(x)+2n; h' >= 1 with equality only at integers, and h - Id
    /// is flat at integers (tangency of every order).
    static ExpansionMap smooth_default();

    double value(double x) const;
    double inverse(double y) const;
    bool is_doubling() const { return doubling_; }
    /// Grid check of conditions (A) h(0)=0, (B) h(x+1)=h(x)+2,
    /// (C) expansion, (D) flatness at 0 (finite differences).
    Report check_conditions(int grid = 512) const;

private:
    bool doubling_ = true;
};

/// The Ghys-Sergiescu realization: the conjugating homeomorphism eta_h with
/// eta(p/2^q) = h^{-q}(p), materialized on dyadics of level <= L with
/// monotone cubic interpolation, and the induced map phi_h(g) = eta g eta^{-1}.
class GhysSergiescu {
public:
    GhysSergiescu(ExpansionMap h, int level = 20);

    double eta(double x) const;      // on [0,1], extended by eta(x+1)=eta(x)+1
    double eta_inverse(double y) const;
    /// phi_h(g) as a Map1D on [0,1].
    Map1D realize(const PLMap& g) const;
    /// Interpolation error of the level-L table against an (L+2) refinement.
    double interpolation_residual() const { return interp_residual_; }
    int level() const { return level_; }

private:
    ExpansionMap h_;
    int level_;
    bool exact_identity_ = false; // h = doubling => eta = id
    std::vector<double> table_;   // eta at k/2^L, k = 0..2^L
    std::vector<double> slopes_;  // monotone cubic slopes
    double interp_residual_ = 0.0;
};

/// The compactified affine action of BS(1,2) = <a, e | a e a^{-1} = e^2>.
/// Words are over the letters 'a' (x -> 2x) and 'e' (x -> x+1), with
/// capital letters denoting inverses.
struct Bs12Result {
    Map1D chart_map;   // psi^{-1} f psi on [0,1]  (x/(s - t x) near 0)
    Map1D flattened;   // with the boundary-flattening conjugation applied
    double affine_s = 1.0, affine_t = 0.0;
};
Bs12Result bs12_compactified(const std::string& word);

/// phi^{-2} g phi^2 for g on [0,1] with g(0)=0, g(1)=1, g'(0) > 0.
Map1D muller_tsuboi_conjugate(const Map1D& g);

struct TangencyReport {
    // ratios |g2(x) - x| / x^i along x = 2^{-j}
    std::vector<double> xs;
    std::vector<double> ratios;
    int order = 0;
};
TangencyReport tangency_ratios(const Map1D& g2, int order, int j_lo = 4,
                               int j_hi = 20);

/// The Yoccoz transfer map [0,a] -> [0,b] (closed-form derivative).
Map1D yoccoz_map(double a, double b);

} // namespace onedyn::thompson
