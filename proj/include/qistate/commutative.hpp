#pragma once

// The two commutative examples on L^inf(R) with the Cauchy state
// phi(f) = (1/pi) int f(s) / (1 + s^2) ds: translations, whose cocycle is
// unbounded, and the ax+b group.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qistate/check.hpp"
#include "qistate/matcore.hpp"

namespace qistate {

/// A real function. Closed forms carry a description and, when known, a
/// bound on sup |f| over all of R (used for the quadrature tail). Sampled
/// functions interpolate linearly on a symmetric grid and extend constantly.
class RealFunction {
 public:
  static RealFunction closed_form(std::string expression, std::function<double(double)> f,
                                  std::optional<double> sup_bound = std::nullopt);
  static RealFunction constant(double c);
  /// coefficients c_0 + c_1 s + ...; bounded only when constant.
  static RealFunction polynomial(std::vector<double> coefficients);
  /// p(s)/q(s); non-finite where q vanishes.
  static RealFunction rational(std::vector<double> numerator, std::vector<double> denominator);
  /// exp(-((s - center) / width)^2)
  static RealFunction gaussian_bump(double center, double width);
  /// Values at N equispaced points on [-R, R].
  static RealFunction sampled(double R, std::vector<double> values);

  double operator()(double s) const { return f_(s); }
  const std::string& expression() const { return expression_; }
  const std::optional<double>& sup_bound() const { return sup_bound_; }

  RealFunction operator*(const RealFunction& o) const;

 private:
  RealFunction(std::string expression, std::function<double(double)> f, std::optional<double> sup_bound)
      : expression_(std::move(expression)), f_(std::move(f)), sup_bound_(sup_bound) {}

  std::string expression_;
  std::function<double(double)> f_;
  std::optional<double> sup_bound_;
};

struct QuadConfig {
  double R = 100.0;
  double tol = 1e-11;    // adaptive Simpson tolerance on [-R, R]
  int initial_panels = 64;
  int max_depth = 40;
};

struct QuadResult {
  double value = 0.0;
  double quadrature_error = 0.0;  // sum of |S_fine - S_coarse| over accepted panels
  double tail_bound = 0.0;        // sup|f| (1 - (2/pi) arctan R)
  bool tail_rigorous = true;      // false when sup|f| was estimated from samples
  long evaluations = 0;

  double error_bound() const { return quadrature_error + tail_bound; }
};

/// Throws InputError ("divergent samples") on non-finite integrand values.
QuadResult cauchy_state(const RealFunction& f, const QuadConfig& quad = {});

/// Symmetric grid of n points on [-R, R].
std::vector<double> symmetric_grid(double R, int n);

/// x_t(s) = (1 + s^2) / (1 + (s + t)^2), the density of phi o tau_t where
/// (tau_t f)(s) = f(s - t).
RealFunction translation_cocycle(double t);
RealFunction translate(const RealFunction& f, double t);
/// sup_s x_t(s) = ((2 + t^2) + |t| sqrt(t^2 + 4)) / 2; also sup of 1/x_t.
double translation_cocycle_sup(double t);

/// Pointwise x_{t1+t2}(s) = x_{t1}(s) x_{t2}(s + t1) on the samples, and
/// phi(tau_t f) = phi(x_t f) by quadrature for t in {t1, t2, t1 + t2}.
CheckList verify_translation_identities(double t1, double t2, std::span<const double> samples, const RealFunction& f,
                                        const QuadConfig& quad = {});

struct WitnessReport {
  double t = 0.0;
  double witness = 0.0;      // x_t(-t)
  double expected = 0.0;     // 1 + t^2
  double grid_sup = 0.0;     // sup of x_t over samples plus the critical points
  double grid_sup_inv = 0.0; // sup of 1/x_t likewise
  double exact_sup = 0.0;
  CheckList checks;
};

WitnessReport unboundedness_witness(double t, std::span<const double> samples);

struct AxBElement {
  double a = 1.0;
  double b = 0.0;

  AxBElement() = default;
  AxBElement(double a_, double b_);  // throws InputError if a == 0
};

/// pi_{(a,b)} f (t) = f(a t + b)
RealFunction axb_apply(const AxBElement& e, const RealFunction& f);
/// pi_{e1} pi_{e2} = pi_{e1 o e2}, so (a,b) o (c,d) = (ca, cb + d).
AxBElement axb_compose(const AxBElement& e1, const AxBElement& e2);
AxBElement axb_inverse(const AxBElement& e);
/// a (1 + t^2) / (a^2 + (t - b)^2); requires a > 0 (PreconditionError
/// otherwise: for a < 0 the formula is negative and is not a density).
RealFunction axb_cocycle(const AxBElement& e);
/// a * lambda_max with a^2 l^2 - (1 + a^2 + b^2) l + 1 = 0.
double axb_cocycle_sup(const AxBElement& e);

/// Composition against substitution chains, the pointwise cocycle identity
/// x_{e1 o e2}(t) = x_{e2}(t) x_{e1}((t - b2) / a2), quasi-invariance
/// phi(pi_e f) = phi(x_e f) by quadrature, and (diagnostic) how far the
/// orbit moves a non-constant f.
CheckList verify_axb(const AxBElement& e1, const AxBElement& e2, std::span<const double> samples,
                     const RealFunction& f, const QuadConfig& quad = {});

struct MassEscapeRow {
  double T = 0.0;
  double sup = 0.0;   // sup of the translation average of 1_[-1,1] over [0, T]
  double mass = 0.0;  // its Lebesgue integral
};

/// Averages of translates of 1_[-1,1] flatten out while keeping mass 2: the
/// averages have no nonzero integrable limit. Illustration only.
std::vector<MassEscapeRow> mass_escape(std::span<const double> horizons, int grid_points = 20001);

}  // namespace qistate
