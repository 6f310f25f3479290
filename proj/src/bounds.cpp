#include "ocskit/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ocskit {

double reference_gamma_b() { return (13.0 * std::sqrt(13.0) - 35.0) / 108.0; }

void BoundParams::recompute_derived() {
    const double ga = gamma_a, gb = gamma_b;
    const double one_a = 1.0 - ga, one_b = 1.0 - gb, three_b = 3.0 - gb;
    c1 = 8.0 / (three_b * three_b);
    c2 = (1.0 + gb) * (1.0 + gb) / (one_a * one_b * three_b * three_b);
    c3 = ga * c2;
    c4 = gb / (one_a * one_b);
    t1 = (2.0 - gb) / 3.0;
    t2 = (4.0 - 3.0 * ga - 2.0 * gb + ga * gb) / 6.0;
    t3 = one_b / 6.0;
    t4 = one_a / 3.0;
}

void BoundParams::validate_sigmas() const {
    if (!(sigma_r2 > 0.0 && sigma_r2 <= 1.5))
        throw std::invalid_argument("sigma_r2 must lie in (0, 3/2]");
    if (!(sigma_d > 0.0 && sigma_d <= 3.0 * sigma_r2 / (3.0 - sigma_r2)))
        throw std::invalid_argument("sigma_d must lie in (0, 3*sigma_r2/(3-sigma_r2)]");
}

BoundParams BoundParams::reference() {
    BoundParams p;
    p.gamma_a = 1.0 / 16.0;
    p.gamma_b = reference_gamma_b();
    p.delta1 = 0.0309587;
    p.delta2 = 0.0165525;
    p.recompute_derived();
    return p;
}

BoundParams BoundParams::consistent() { return from_gammas(1.0 / 16.0, 1.0 / 16.0); }

BoundParams BoundParams::from_gammas(double gamma_a, double gamma_b, double sigma_r2, double sigma_d) {
    BoundParams p;
    p.gamma_a = gamma_a;
    p.gamma_b = gamma_b;
    p.sigma_r2 = sigma_r2;
    p.sigma_d = sigma_d;
    p.recompute_derived();
    const auto deltas = derive_deltas(gamma_a, gamma_b);
    p.delta1 = deltas.first;
    p.delta2 = deltas.second;
    return p;
}

SymmetricDistribution::SymmetricDistribution(std::vector<double> mass, double tol) : mass_(std::move(mass)) {
    if (mass_.empty()) throw std::invalid_argument("distribution needs at least one mass point");
    double sum = 0.0;
    const std::size_t n = mass_.size();
    for (std::size_t y = 0; y < n; ++y) {
        if (mass_[y] < -tol) throw std::invalid_argument("negative probability mass");
        if (std::fabs(mass_[y] - mass_[n - 1 - y]) > tol)
            throw std::invalid_argument("mass function is not symmetric about x/2");
        sum += mass_[y];
    }
    if (std::fabs(sum - 1.0) > tol) throw std::invalid_argument("mass does not sum to 1");
}

double zeta_product(int k, double gamma) {
    if (k < 0) throw std::invalid_argument("k must be non-negative");
    return std::pow(0.5, k) * std::pow(1.0 - gamma, std::max(k - 1, 0));
}

std::vector<double> f_seq(int kmax, double gamma_b) {
    if (kmax < 0) throw std::invalid_argument("kmax must be non-negative");
    std::vector<double> f(static_cast<std::size_t>(kmax) + 1);
    for (int k = 0; k <= kmax; ++k)
        f[k] = (k <= 1) ? 1.0 : f[k - 1] - gamma_b * f[k - 2];
    return f;
}

double zeta_unweighted(int k, double gamma_b) {
    return std::pow(0.5, k) * f_seq(k, gamma_b).back();
}

double alpha_coef(int x, double gamma_a) {
    if (x < 0) throw std::invalid_argument("x must be non-negative");
    return std::pow(1.0 - gamma_a, std::max(x - 1, 0));
}

namespace {

// C(a, b) with the convention that out-of-range indices give 0.
double choose_or_zero(int a, int b) {
    if (b < 0 || b > a || a < 0) return 0.0;
    b = std::min(b, a - b);
    double r = 1.0;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
}

} // namespace

SymmetricDistribution p_star(int x, double gamma_a) {
    if (x < 0) throw std::invalid_argument("x must be non-negative");
    const double ax = alpha_coef(x, gamma_a);
    std::vector<double> mass(static_cast<std::size_t>(x) + 1);
    const double half_x = std::pow(0.5, x);
    const double half_x2 = (x >= 2) ? std::pow(0.5, x - 2) : 0.0;
    for (int y = 0; y <= x; ++y) {
        if (y == 0 || y == x)
            mass[y] = ax * half_x;
        else
            mass[y] = ax * choose_or_zero(x, y) * half_x + (1.0 - ax) * choose_or_zero(x - 2, y - 1) * half_x2;
    }
    return SymmetricDistribution(std::move(mass));
}

SymmetricDistribution d_of_q(int x, std::span<const double> q) {
    if (x < 0) throw std::invalid_argument("x must be non-negative");
    const std::size_t expected = static_cast<std::size_t>(x / 2) + 1;
    if (q.size() != expected)
        throw std::invalid_argument("q must have floor(x/2)+1 entries, got " + std::to_string(q.size()));
    double qsum = 0.0;
    for (double qi : q) {
        if (qi < -1e-12) throw std::invalid_argument("q entries must be non-negative");
        qsum += qi;
    }
    if (std::fabs(qsum - 1.0) > 1e-9) throw std::invalid_argument("q must sum to 1");

    std::vector<double> mass(static_cast<std::size_t>(x) + 1, 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] == 0.0) continue;
        const int xi = x - 2 * static_cast<int>(i);
        const double scale = q[i] * std::pow(0.5, xi);
        for (int y = 0; y <= x; ++y) mass[y] += scale * choose_or_zero(xi, y - static_cast<int>(i));
    }
    return SymmetricDistribution(std::move(mass));
}

double theta(const SymmetricDistribution& p, double gamma_b) {
    double sum = 0.0;
    for (int y = 0; y <= p.x(); ++y)
        sum += p(y) * std::pow(0.5, y) * std::pow(1.0 - gamma_b, y - 1);
    return sum;
}

double theta_prime(const SymmetricDistribution& p, double gamma_b) {
    double sum = 0.0;
    for (int y = 0; y <= p.x(); ++y)
        sum += p(y) * std::pow(0.5, y) * std::pow(1.0 - gamma_b, std::max(y - 1, 0));
    return sum;
}

double theta_closed(int x, const BoundParams& params) {
    if (x < 0) throw std::invalid_argument("x must be non-negative");
    const double gb = params.gamma_b;
    if (x == 0) return 1.0 / (1.0 - gb);
    const double base1 = (3.0 - gb) / 4.0;
    const double base2 = base1 * (1.0 - params.gamma_a);
    return params.c1 * std::pow(base1, x) + params.c2 * std::pow(base2, x);
}

double theta_prime_closed(int x, const BoundParams& params) {
    if (x == 0) return 1.0;
    return theta_closed(x, params) - params.c4 * std::pow((1.0 - params.gamma_a) / 2.0, x);
}

bool centrally_dominates(const SymmetricDistribution& p1, const SymmetricDistribution& p2, double tol) {
    if (p1.x() != p2.x()) throw std::invalid_argument("distributions must share a support");
    const int x = p1.x();
    // Distances from the center, doubled to stay integral: |2y - x|.
    // Candidate radii are those distances plus the empty inner region.
    std::vector<int> candidates{-1};
    for (int y = 0; y <= x; ++y) candidates.push_back(std::abs(2 * y - x));
    for (int r : candidates) {
        bool ok = true;
        for (int y = 0; y <= x && ok; ++y) {
            const bool inside = std::abs(2 * y - x) <= r;
            if (inside)
                ok = p1(y) >= p2(y) - tol;
            else
                ok = p1(y) <= p2(y) + tol;
        }
        if (ok) return true;
    }
    return false;
}

double eta_sum(int k, double gamma_a, double gamma_b) {
    if (k < 0) throw std::invalid_argument("k must be non-negative");
    double total = 0.0;
    for (int x = 0; x <= k; ++x) {
        const SymmetricDistribution ps = p_star(x, gamma_a);
        double inner = 0.0;
        for (int y = 0; y <= x; ++y) {
            const int j = k - x + y;   // pairs seen by the second selector
            inner += ps(y) * std::pow(0.5, j) * std::pow(1.0 - gamma_b, std::max(j - 1, 0));
        }
        total += binom_pmf(k, x, 2.0 / 3.0) * inner;
    }
    return total;
}

double eta_closed(int k, const BoundParams& params) {
    if (k < 0) throw std::invalid_argument("k must be non-negative");
    if (k == 0) return 1.0;
    return params.c1 * std::pow(params.t1, k) + params.c2 * std::pow(params.t2, k) -
           params.c3 * std::pow(params.t3, k) - params.c4 * std::pow(params.t4, k);
}

double eta_pow_bound(int k, double delta1, double delta2) {
    if (k < 0) throw std::invalid_argument("k must be non-negative");
    return std::pow(2.0 / 3.0, k) * std::pow(1.0 - delta1, std::max(k - 1, 0)) *
           std::pow(1.0 - delta2, std::max(k - 2, 0));
}

std::pair<double, double> derive_deltas(double gamma_a, double gamma_b) {
    BoundParams p;
    p.gamma_a = gamma_a;
    p.gamma_b = gamma_b;
    p.recompute_derived();
    const double eta2 = eta_closed(2, p);
    const double eta3 = eta_closed(3, p);
    const double d1 = 1.0 - eta2 * 9.0 / 4.0;
    if (!(d1 >= 0.0 && d1 < 1.0)) throw std::domain_error("eta(2) out of range for the delta system");
    const double d2 = 1.0 - eta3 * 27.0 / 8.0 / ((1.0 - d1) * (1.0 - d1));
    if (!(d2 >= 0.0 && d2 < 1.0)) throw std::domain_error("eta(3) out of range for the delta system");
    return {d1, d2};
}

double binom_pmf(int k, int x, double r) {
    if (k < 0 || x < 0 || x > k) throw std::invalid_argument("binomial pmf needs 0 <= x <= k");
    if (k <= 48) return choose_or_zero(k, x) * std::pow(r, x) * std::pow(1.0 - r, k - x);
    const double logc = std::lgamma(k + 1.0) - std::lgamma(x + 1.0) - std::lgamma(k - x + 1.0);
    return std::exp(logc + x * std::log(r) + (k - x) * std::log1p(-r));
}

} // namespace ocskit
