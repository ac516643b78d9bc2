#include "lelab/nonlinearity.hpp"

#include <cmath>
#include <limits>

namespace lelab {

ProblemParams::ProblemParams(double q_, double lambda_plus_, double lambda_minus_,
                             double epsilon_, double mu_)
    : q(q_), lambda_plus(lambda_plus_), lambda_minus(lambda_minus_), mu(mu_), epsilon(epsilon_) {
    validate();
}

void ProblemParams::validate() const {
    if (!(q > 0.0 && q < 1.0)) {
        throw InvalidArgument("q must satisfy 0 < q < 1 (got " + std::to_string(q) + ")");
    }
    if (!(lambda_plus >= 0.0) || !(lambda_minus >= 0.0)) {
        throw InvalidArgument("lambda_plus and lambda_minus must be >= 0");
    }
    if (!(mu >= 0.0)) throw InvalidArgument("mu must be >= 0");
    if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");
}

ProblemParams ProblemParams::with_epsilon(double eps) const {
    ProblemParams out = *this;
    out.epsilon = eps;
    out.validate();
    return out;
}

double ProblemParams::gamma() const { return gamma_q(q); }
double ProblemParams::alpha_max() const { return lelab::alpha_max(q); }

double gamma_q(double q) {
    if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("gamma_q: q must satisfy 0 < q < 1");
    return 2.0 / (2.0 - q);
}

double alpha_max(double q) {
    if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("alpha_max: q must satisfy 0 < q < 1");
    return q / (2.0 - q);
}

double g_eps(double s, const ProblemParams& p) {
    if (s == 0.0) return 0.0;
    const double lambda = s > 0.0 ? p.lambda_plus : -p.lambda_minus;
    if (lambda == 0.0) return 0.0;
    if (p.epsilon == 0.0) {
        return lambda * std::pow(std::abs(s), p.q - 1.0);
    }
    const double denom = std::pow(p.epsilon * p.epsilon + s * s, 0.5 * (2.0 - p.q));
    return lambda * std::abs(s) / denom;
}

double g_eps_prime(double s, const ProblemParams& p) {
    const double lambda = s > 0.0 ? p.lambda_plus : (s < 0.0 ? p.lambda_minus : 0.5 * (p.lambda_plus + p.lambda_minus));
    if (lambda == 0.0) return 0.0;
    if (p.epsilon == 0.0) {
        if (s == 0.0) return std::numeric_limits<double>::infinity();
        return lambda * (p.q - 1.0) * std::pow(std::abs(s), p.q - 2.0);
    }
    // d/ds [s (e²+s²)^{-(2-q)/2}] = (e²+s²)^{-(2-q)/2 - 1} (e² + (q-1) s²)
    const double e2 = p.epsilon * p.epsilon;
    const double r = e2 + s * s;
    return lambda * std::pow(r, -0.5 * (2.0 - p.q) - 1.0) * (e2 + (p.q - 1.0) * s * s);
}

double G_eps(double s, const ProblemParams& p) {
    const double e2 = p.epsilon * p.epsilon;
    const double sp = s > 0.0 ? s : 0.0;
    const double sm = s < 0.0 ? -s : 0.0;
    double out = 0.0;
    if (p.lambda_plus != 0.0) out += p.lambda_plus * std::pow(e2 + sp * sp, 0.5 * p.q) / p.q;
    if (p.lambda_minus != 0.0) out += p.lambda_minus * std::pow(e2 + sm * sm, 0.5 * p.q) / p.q;
    return out;
}

double F(double s, const ProblemParams& p) {
    if (s > 0.0) return p.mu * p.lambda_plus * std::pow(s, p.q);
    if (s < 0.0) return p.mu * p.lambda_minus * std::pow(-s, p.q);
    return 0.0;
}

}  // namespace lelab
