#pragma once

#include <span>
#include <utility>
#include <vector>

namespace ocskit {

// Parameterization of the whole bound calculus. All derived constants are
// recomputed from the gammas; nothing downstream hard-codes them.
struct BoundParams {
    double gamma_a = 0;   // first-stage selector guarantee
    double gamma_b = 0;   // second-stage selector guarantee
    double delta1 = 0;    // power-form slack constants for the triple bound
    double delta2 = 0;
    double sigma_r2 = 1.3;
    double sigma_d = 2.2;

    // Derived: eta_closed coefficients and bases.
    double c1 = 0, c2 = 0, c3 = 0, c4 = 0;
    double t1 = 0, t2 = 0, t3 = 0, t4 = 0;

    // Reference parameterization: gamma_a = 1/16, gamma_b = (13*sqrt(13)-35)/108,
    // deltas at their published rounded values.
    static BoundParams reference();
    // Executable parameterization: both selectors are the 1/16 pair OCS and the
    // deltas are re-derived, so audited guarantees match the running code.
    static BoundParams consistent();
    // Gammas as given, deltas re-derived.
    static BoundParams from_gammas(double gamma_a, double gamma_b,
                                   double sigma_r2 = 1.3, double sigma_d = 2.2);

    void recompute_derived();
    void validate_sigmas() const;   // 0 < sigma_r2 <= 3/2, 0 < sigma_d <= 3*sigma_r2/(3-sigma_r2)
};

double reference_gamma_b();   // (13*sqrt(13) - 35) / 108, computed at startup

// Probability mass function on {0..x}, symmetric about x/2.
class SymmetricDistribution {
  public:
    explicit SymmetricDistribution(std::vector<double> mass, double tol = 1e-12);

    int x() const { return static_cast<int>(mass_.size()) - 1; }
    double operator()(int y) const { return mass_[static_cast<std::size_t>(y)]; }
    const std::vector<double>& mass() const { return mass_; }

  private:
    std::vector<double> mass_;
};

// (1/2)^k (1-gamma)^{max(k-1,0)}: never-chosen bound of a pair gamma-OCS over
// one consecutive subsequence of length k.
double zeta_product(int k, double gamma);

// f_0 = f_1 = 1, f_k = f_{k-1} - gamma_b * f_{k-2}; the stronger
// single-subsequence recursion for the reference second-stage selector.
std::vector<double> f_seq(int kmax, double gamma_b);
double zeta_unweighted(int k, double gamma_b);

// alpha_x = (1-gamma_a)^{max(x-1,0)}.
double alpha_coef(int x, double gamma_a);

// The flattest admissible output distribution of the first selector on x
// consecutive pairs; used as a safe surrogate for the true distribution.
SymmetricDistribution p_star(int x, double gamma_a);

// Mixture of shifted fair binomials: q_i is the probability of exactly i
// internal ex-post edges. q must be non-negative and sum to 1.
SymmetricDistribution d_of_q(int x, std::span<const double> q);

// theta: sum_y p(y) (1/2)^y (1-gamma_b)^{y-1}; theta_prime clamps the exponent at 0.
double theta(const SymmetricDistribution& p, double gamma_b);
double theta_prime(const SymmetricDistribution& p, double gamma_b);

// Two-exponential closed forms of theta / theta_prime at p_star.
double theta_closed(int x, const BoundParams& params);
double theta_prime_closed(int x, const BoundParams& params);

// True iff a crossing radius z exists with p1 >= p2 on [x/2-z, x/2+z] and
// p1 <= p2 outside, within tol. Exhaustive over candidate radii.
bool centrally_dominates(const SymmetricDistribution& p1, const SymmetricDistribution& p2,
                         double tol = 1e-12);

// Never-chosen bound for one consecutive run of k triples, as the explicit
// binomial-weighted double sum over the surrogate distribution.
double eta_sum(int k, double gamma_a, double gamma_b);

// Same bound via the closed form c1 t1^k + c2 t2^k - c3 t3^k - c4 t4^k (k >= 1).
double eta_closed(int k, const BoundParams& params);

// (2/3)^k (1-delta1)^{max(k-1,0)} (1-delta2)^{max(k-2,0)}.
double eta_pow_bound(int k, double delta1, double delta2);

// Solves (2/3)^2 (1-d1) = eta(2), (2/3)^3 (1-d1)^2 (1-d2) = eta(3) exactly.
std::pair<double, double> derive_deltas(double gamma_a, double gamma_b);

// C(k,x) r^x (1-r)^{k-x}; multiplicative for small k, log-gamma beyond.
double binom_pmf(int k, int x, double r);

} // namespace ocskit
