#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace onedyn::modulus {

enum class Kind { Hoelder, Lipschitz, OmegaSTU, Tabulated };

/// A concave modulus of continuity: a concave increasing gauge on [0,inf)
/// with alpha(0) = 0.  Closed-form kinds are taken as defined only for
/// x <= validity_sup(); above that, eval_global() continues with the concave
/// linear extension (matched value and slope at validity_sup).
///
/// omega(s,t,u)(x) = x^s * exp(-t*sqrt(log(1/x))) / log(1/x)^u, near x = 0.
class ConcaveModulus {
public:
    static ConcaveModulus hoelder(double tau);
    static ConcaveModulus lipschitz();
    static ConcaveModulus omega_stu(double s, double t, double u);
    /// Grid of (x, alpha(x)) pairs, increasing in both coordinates; a leading
    /// (0,0) anchor is added if absent.  Values interpolate linearly.
    static ConcaveModulus tabulated(std::vector<std::pair<double, double>> grid);

    /// Strict evaluation; throws std::domain_error for x < 0 or x > validity_sup.
    double eval(double x) const;
    /// Evaluation with the concave linear extension above validity_sup.
    double eval_global(double x) const;
    double operator()(double x) const { return eval_global(x); }

    Kind kind() const { return kind_; }
    double validity_sup() const { return validity_sup_; }
    /// Largest x below which concavity is certified (<= validity_sup; for
    /// OmegaSTU this is the dominance threshold of the second-derivative
    /// factor, which can be smaller than the evaluation validity).
    double concave_sup() const { return concave_sup_; }
    /// True if an OmegaSTU parameter triple lies in one of the classified
    /// concavity regimes: (s=0, t>0), (0<s<1), (s=1, t<0).  Other kinds: true.
    bool in_classified_regime() const { return classified_; }

    double hoelder_tau() const { return s_; }
    double omega_s() const { return s_; }
    double omega_t() const { return t_; }
    double omega_u() const { return u_; }
    const std::vector<std::pair<double, double>>& grid() const { return grid_; }

    std::string descriptor() const;                    // JSON text
    nlohmann::json descriptor_json() const;
    static ConcaveModulus from_descriptor(const std::string& text);
    static ConcaveModulus from_descriptor_json(const nlohmann::json& j);
    /// Parse CLI-style specs: "hoelder:0.5", "lipschitz", "omega:0.5,1,0".
    static ConcaveModulus parse_spec(const std::string& spec);
    static ConcaveModulus tabulated_from_csv(std::istream& is);

private:
    ConcaveModulus() = default;

    Kind kind_ = Kind::Lipschitz;
    double s_ = 1.0, t_ = 0.0, u_ = 0.0; // Hoelder stores tau in s_.
    double validity_sup_ = 0.0;
    double concave_sup_ = 0.0;
    bool classified_ = true;
    std::vector<std::pair<double, double>> grid_;
};

/// Default evaluation grid: 2^-j for j = 1..52, clipped to validity.
std::vector<double> geometric_grid(const ConcaveModulus& alpha, int jmax = 52);

struct ConcavityResult {
    bool ok = true;
    // First violating pair (x, y) and the defect, when !ok.
    double x = 0.0, y = 0.0, defect = 0.0;
    bool monotone = true;
};

/// Midpoint concavity + strict monotonicity on a grid, within tol.
ConcavityResult check_concavity(const ConcaveModulus& alpha,
                                const std::vector<double>& grid, double tol = 1e-10);

enum class IntegrandKind { Denjoy, Optimal };

struct IntegrabilityResult {
    bool finite = false;
    double value = 0.0;       // quadrature value over (delta, 1]
    double tail_bound = 0.0;  // certified bound for the (0, delta] tail
    double delta = 0.0;       // singular cutoff actually used
    double partial_lower = 0.0; // certified lower bound accumulated (divergent path)
    int panels = 0;
};

/// Denjoy integrand: 1/alpha(x) on (0,1].
IntegrabilityResult integrability(const ConcaveModulus& alpha, double tol = 1e-10,
                                  double divergence_cap = 100.0);
/// Optimal-pair integrand: (1/x) * (beta(x)/alpha(x))^(1/k) on (0,1].
IntegrabilityResult integrability_pair(const ConcaveModulus& beta,
                                       const ConcaveModulus& alpha, int k,
                                       double tol = 1e-10,
                                       double divergence_cap = 100.0);

/// Certified upper bound for int_0^eps dx/alpha(x); throws if divergent.
double inverse_integral_upper(const ConcaveModulus& alpha, double eps,
                              double tol = 1e-10);

struct TamenessReport {
    // (t, sampled sup over x of beta(t x)/beta(x))
    std::vector<std::pair<double, double>> sub_tame_sup_estimates;
    // (t, sampled sup over x of t beta(x)/beta(t x))
    std::vector<std::pair<double, double>> sup_tame_sup_estimates;
    bool verdict_sub = false;
    bool verdict_sup = false;
    bool advisory = true; // grids are finite; verdicts are extrapolations
};

TamenessReport tameness(const ConcaveModulus& beta,
                        const std::vector<double>& t_grid = {},
                        const std::vector<double>& x_grid = {});

/// Tame pair: k >= 2 always; k = 1 needs sub-tame; k = 0 needs sup-tame.
bool is_tame_pair(int k, const ConcaveModulus& beta);

/// max over sample pairs of |f(x)-f(y)| / alpha(|x-y|); a lower bound for
/// the alpha-norm [f]_alpha.  Pairs closer than ~machine epsilon are skipped.
double alpha_norm_estimate(const std::vector<std::pair<double, double>>& samples,
                           const ConcaveModulus& alpha);

/// Grid smoothing in the spirit of mollification against an even bump:
/// returns a Tabulated modulus beta with (1/2) alpha <= beta <= 2 alpha on the
/// grid, together with the realized max ratio.
std::pair<ConcaveModulus, double> medvedev_smooth(const ConcaveModulus& alpha,
                                                  int grid_points = 256);

} // namespace onedyn::modulus
