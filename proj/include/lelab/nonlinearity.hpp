#pragma once

#include "lelab/errors.hpp"

namespace lelab {

/// Constants of  -Δu = λ₊(u⁺)^{q-1} − λ₋(u⁻)^{q-1}  and of its ε-regularization.
///
/// The exponent is checked on construction; everything else is a plain value.
struct ProblemParams {
    double q = 0.5;
    double lambda_plus = 1.0;
    double lambda_minus = 1.0;
    double mu = 1.0;
    double epsilon = 0.0;

    ProblemParams() = default;
    ProblemParams(double q_, double lambda_plus_, double lambda_minus_,
                  double epsilon_ = 0.0, double mu_ = 1.0);

    /// Throws InvalidArgument when a bound is violated.
    void validate() const;

    [[nodiscard]] ProblemParams with_epsilon(double eps) const;
    [[nodiscard]] bool harmonic() const { return lambda_plus == 0.0 && lambda_minus == 0.0; }
    [[nodiscard]] double gamma() const;
    [[nodiscard]] double alpha_max() const;
};

/// 2/(2−q), the critical vanishing order.
double gamma_q(double q);
/// q/(2−q), the Hölder exponent of the gradient at singular points.
double alpha_max(double q);

/// Regularized nonlinearity λ₊s⁺/(ε²+s²)^{(2−q)/2} − λ₋s⁻/(ε²+s²)^{(2−q)/2}.
/// For ε = 0 this is the singular term with value 0 at s = 0.
double g_eps(double s, const ProblemParams& p);

/// d/ds g_eps; for ε = 0 and s = 0 the (infinite) derivative is reported as +inf.
double g_eps_prime(double s, const ProblemParams& p);

/// Primitive λ₊(ε²+(s⁺)²)^{q/2}/q + λ₋(ε²+(s⁻)²)^{q/2}/q.
double G_eps(double s, const ProblemParams& p);

/// F(s) = μλ₊(s⁺)^q + μλ₋(s⁻)^q.
double F(double s, const ProblemParams& p);

}  // namespace lelab
