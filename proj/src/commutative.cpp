#include "qistate/commutative.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qistate {

namespace {

double horner(const std::vector<double>& c, double s) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + *it;
  return v;
}

std::string describe_poly(const std::vector<double>& c) {
  std::ostringstream os;
  os << "poly[";
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << "]";
  return os.str();
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

}  // namespace

RealFunction RealFunction::closed_form(std::string expression, std::function<double(double)> f,
                                       std::optional<double> sup_bound) {
  if (!f) throw InputError("RealFunction: empty closure");
  return RealFunction(std::move(expression), std::move(f), sup_bound);
}

RealFunction RealFunction::constant(double c) {
  if (!std::isfinite(c)) throw InputError("RealFunction: non-finite constant");
  return RealFunction("const(" + std::to_string(c) + ")", [c](double) { return c; }, std::abs(c));
}

RealFunction RealFunction::polynomial(std::vector<double> coefficients) {
  for (double c : coefficients)
    if (!std::isfinite(c)) throw InputError("RealFunction: non-finite polynomial coefficient");
  while (coefficients.size() > 1 && coefficients.back() == 0.0) coefficients.pop_back();
  std::optional<double> sup;
  if (coefficients.size() <= 1) sup = coefficients.empty() ? 0.0 : std::abs(coefficients[0]);
  std::string name = describe_poly(coefficients);
  return RealFunction(std::move(name), [c = std::move(coefficients)](double s) { return horner(c, s); }, sup);
}

RealFunction RealFunction::rational(std::vector<double> numerator, std::vector<double> denominator) {
  if (denominator.empty()) throw InputError("RealFunction: empty denominator");
  std::string name = describe_poly(numerator) + "/" + describe_poly(denominator);
  return RealFunction(std::move(name),
                      [p = std::move(numerator), q = std::move(denominator)](double s) { return horner(p, s) / horner(q, s); },
                      std::nullopt);
}

RealFunction RealFunction::gaussian_bump(double center, double width) {
  if (!(width > 0.0) || !std::isfinite(center)) throw InputError("gaussian_bump: need finite center and width > 0");
  std::ostringstream os;
  os << "exp(-((s-" << center << ")/" << width << ")^2)";
  return RealFunction(os.str(), [center, width](double s) {
    const double z = (s - center) / width;
    return std::exp(-z * z);
  }, 1.0);
}

RealFunction RealFunction::sampled(double R, std::vector<double> values) {
  if (!(R > 0.0) || values.size() < 2) throw InputError("sampled function: need R > 0 and at least 2 values");
  double sup = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("sampled function: non-finite sample");
    sup = std::max(sup, std::abs(v));
  }
  const double step = 2.0 * R / static_cast<double>(values.size() - 1);
  std::ostringstream os;
  os << "sampled(R=" << R << ",N=" << values.size() << ")";
  return RealFunction(os.str(), [R, step, v = std::move(values)](double s) {
    if (s <= -R) return v.front();
    if (s >= R) return v.back();
    const double pos = (s + R) / step;
    const auto i = std::min(static_cast<std::size_t>(pos), v.size() - 2);
    const double w = pos - static_cast<double>(i);
    return (1.0 - w) * v[i] + w * v[i + 1];
  }, sup);
}

RealFunction RealFunction::operator*(const RealFunction& o) const {
  std::optional<double> sup;
  if (sup_bound_ && o.sup_bound_) sup = *sup_bound_ * *o.sup_bound_;
  return RealFunction("(" + expression_ + ")*(" + o.expression_ + ")",
                      [f = f_, g = o.f_](double s) { return f(s) * g(s); }, sup);
}

std::vector<double> symmetric_grid(double R, int n) {
  if (n < 2) throw InputError("symmetric_grid: need at least 2 points");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = -R + 2.0 * R * i / (n - 1);
  out[n / 2] = (n % 2) ? 0.0 : out[n / 2];
  return out;
}

namespace {

struct Simpson {
  const RealFunction& f;
  int max_depth;
  QuadResult& result;

  double integrand(double s) {
    ++result.evaluations;
    const double v = f(s) / (std::numbers::pi * (1.0 + s * s));
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "cauchy_state: divergent samples (non-finite value at s=" << s << ")";
      throw InputError(os.str());
    }
    return v;
  }

  double run(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = integrand(lm), frm = integrand(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth >= max_depth || std::abs(delta) <= 15.0 * tol) {
      result.quadrature_error += std::abs(delta);
      return left + right + delta / 15.0;
    }
    return run(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) + run(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadResult cauchy_state(const RealFunction& f, const QuadConfig& quad) {
  if (!(quad.R > 0.0) || quad.initial_panels < 1 || !(quad.tol > 0.0))
    throw InputError("cauchy_state: need R > 0, tol > 0 and at least one panel");
  QuadResult out;
  Simpson simpson{f, quad.max_depth, out};
  const double width = 2.0 * quad.R / quad.initial_panels;
  const double panel_tol = quad.tol / quad.initial_panels;
  for (int p = 0; p < quad.initial_panels; ++p) {
    const double a = -quad.R + p * width, b = a + width, m = 0.5 * (a + b);
    const double fa = simpson.integrand(a), fm = simpson.integrand(m), fb = simpson.integrand(b);
    out.value += simpson.run(a, b, fa, fm, fb, width / 6.0 * (fa + 4.0 * fm + fb), panel_tol, 0);
  }

  double sup = 0.0;
  if (f.sup_bound()) {
    sup = *f.sup_bound();
  } else {
    out.tail_rigorous = false;
    for (double s : symmetric_grid(quad.R, 4001)) sup = std::max(sup, std::abs(f(s)));
  }
  out.tail_bound = sup * (1.0 - 2.0 / std::numbers::pi * std::atan(quad.R));
  return out;
}

RealFunction translation_cocycle(double t) {
  std::ostringstream os;
  os << "(1+s^2)/(1+(s+" << t << ")^2)";
  return RealFunction::closed_form(os.str(), [t](double s) { return (1.0 + s * s) / (1.0 + (s + t) * (s + t)); },
                                   translation_cocycle_sup(t));
}

RealFunction translate(const RealFunction& f, double t) {
  std::ostringstream os;
  os << "(" << f.expression() << ")(s-" << t << ")";
  return RealFunction::closed_form(os.str(), [f, t](double s) { return f(s - t); }, f.sup_bound());
}

double translation_cocycle_sup(double t) {
  const double t2 = t * t;
  return ((2.0 + t2) + std::abs(t) * std::sqrt(t2 + 4.0)) / 2.0;
}

namespace {

CheckResult quasi_invariance(const std::string& name, const std::string& anchor, const RealFunction& moved,
                             const RealFunction& weighted, const QuadConfig& quad) {
  const QuadResult lhs = cauchy_state(moved, quad);
  const QuadResult rhs = cauchy_state(weighted, quad);
  return make_check(name, anchor, std::abs(lhs.value - rhs.value), lhs.error_bound() + rhs.error_bound() + 1e-12);
}

}  // namespace

CheckList verify_translation_identities(double t1, double t2, std::span<const double> samples, const RealFunction& f,
                                        const QuadConfig& quad) {
  const RealFunction x1 = translation_cocycle(t1), x2 = translation_cocycle(t2), x12 = translation_cocycle(t1 + t2);
  double pointwise = 0.0;
  for (double s : samples) pointwise = std::max(pointwise, relative_gap(x12(s), x1(s) * x2(s + t1)));

  CheckList out{make_check("translation_cocycle_identity", "x_{t1+t2}(s) = x_{t1}(s) x_{t2}(s+t1)", pointwise, 1e-12)};
  for (double t : {t1, t2, t1 + t2}) {
    std::ostringstream name;
    name << "translation_quasi_invariance(t=" << t << ")";
    out.push_back(quasi_invariance(name.str(), "phi(tau_t f) = phi(x_t f)", translate(f, t),
                                   translation_cocycle(t) * f, quad));
  }
  return out;
}

WitnessReport unboundedness_witness(double t, std::span<const double> samples) {
  WitnessReport r;
  r.t = t;
  const RealFunction x = translation_cocycle(t);
  r.witness = x(-t);
  r.expected = 1.0 + t * t;
  r.exact_sup = translation_cocycle_sup(t);
  std::vector<double> points(samples.begin(), samples.end());
  points.push_back(-t);  // x_t(-t) = 1 + t^2
  points.push_back(0.0);  // 1/x_t(0) = 1 + t^2
  for (double s : points) {
    const double v = x(s);
    r.grid_sup = std::max(r.grid_sup, v);
    r.grid_sup_inv = std::max(r.grid_sup_inv, 1.0 / v);
  }
  r.checks = {
      make_check("witness_value", "x_t(-t) = 1 + t^2", relative_gap(r.witness, r.expected), 1e-12),
      make_check("witness_sup", "sup x_t >= 1 + t^2", std::max(0.0, r.expected - r.grid_sup), 1e-9),
      make_check("witness_sup_inverse", "sup 1/x_t >= 1 + t^2", std::max(0.0, r.expected - r.grid_sup_inv), 1e-9),
      make_diagnostic("witness_exact_sup", "sup_s x_t(s)", r.exact_sup),
  };
  return r;
}

AxBElement::AxBElement(double a_, double b_) : a(a_), b(b_) {
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b)) throw InputError("ax+b element: need finite a != 0 and b");
}

RealFunction axb_apply(const AxBElement& e, const RealFunction& f) {
  std::ostringstream os;
  os << "(" << f.expression() << ")(" << e.a << "t+" << e.b << ")";
  return RealFunction::closed_form(os.str(), [f, e](double t) { return f(e.a * t + e.b); }, f.sup_bound());
}

AxBElement axb_compose(const AxBElement& e1, const AxBElement& e2) {
  return AxBElement(e2.a * e1.a, e2.a * e1.b + e2.b);
}

AxBElement axb_inverse(const AxBElement& e) { return AxBElement(1.0 / e.a, -e.b / e.a); }

RealFunction axb_cocycle(const AxBElement& e) {
  if (!(e.a > 0.0))
    throw PreconditionError(
        "axb_cocycle: a <= 0 is unsupported; the closed form is negative there and is not a density of positive "
        "measures (see README, ax+b cocycle)");
  std::ostringstream os;
  os << e.a << "(1+t^2)/(" << e.a * e.a << "+(t-" << e.b << ")^2)";
  return RealFunction::closed_form(
      os.str(), [a = e.a, b = e.b](double t) { return a * (1.0 + t * t) / (a * a + (t - b) * (t - b)); },
      axb_cocycle_sup(e));
}

double axb_cocycle_sup(const AxBElement& e) {
  const double a2 = e.a * e.a;
  const double p = 1.0 + a2 + e.b * e.b;
  const double lambda = (p + std::sqrt(p * p - 4.0 * a2)) / (2.0 * a2);
  return std::abs(e.a) * lambda;
}

CheckList verify_axb(const AxBElement& e1, const AxBElement& e2, std::span<const double> samples,
                     const RealFunction& f, const QuadConfig& quad) {
  const AxBElement e12 = axb_compose(e1, e2);
  const RealFunction id = RealFunction::polynomial({0.0, 1.0});
  double composition = 0.0;
  for (const RealFunction* probe : {&f, &id}) {
    const RealFunction chain = axb_apply(e1, axb_apply(e2, *probe));
    const RealFunction direct = axb_apply(e12, *probe);
    for (double t : samples) composition = std::max(composition, relative_gap(chain(t), direct(t)));
  }

  const RealFunction x1 = axb_cocycle(e1), x2 = axb_cocycle(e2), x12 = axb_cocycle(e12);
  double pointwise = 0.0;
  for (double t : samples) pointwise = std::max(pointwise, relative_gap(x12(t), x2(t) * x1((t - e2.b) / e2.a)));

  CheckList out{
      make_check("axb_composition", "pi_{e1} pi_{e2} = pi_{e1 o e2}", composition, 1e-12),
      make_check("axb_cocycle_identity", "x_{e1 o e2}(t) = x_{e2}(t) x_{e1}((t-b2)/a2)", pointwise, 1e-12),
  };
  double displacement = 0.0;
  for (const AxBElement& e : {e1, e2, e12}) {
    std::ostringstream name;
    name << "axb_quasi_invariance(" << e.a << "," << e.b << ")";
    out.push_back(quasi_invariance(name.str(), "phi(pi_e f) = phi(x_e f)", axb_apply(e, f), axb_cocycle(e) * f, quad));
    for (double t : samples) displacement = std::max(displacement, std::abs(f(e.a * t + e.b) - f(t)));
  }
  out.push_back(make_diagnostic("axb_orbit_displacement", "max_e max_t |pi_e f(t) - f(t)|", displacement));
  return out;
}

std::vector<MassEscapeRow> mass_escape(std::span<const double> horizons, int grid_points) {
  std::vector<MassEscapeRow> rows;
  for (double T : horizons) {
    if (!(T > 0.0)) throw InputError("mass_escape: horizons must be positive");
    // average over t in [0, T] of 1_[-1,1](s - t) = |[s-1, s+1] n [0, T]| / T
    const double lo = -2.0, hi = T + 2.0;
    const double h = (hi - lo) / (grid_points - 1);
    MassEscapeRow row{T, 0.0, 0.0};
    double prev = 0.0;
    for (int i = 0; i < grid_points; ++i) {
      const double s = lo + i * h;
      const double v = std::max(0.0, std::min(s + 1.0, T) - std::max(s - 1.0, 0.0)) / T;
      row.sup = std::max(row.sup, v);
      if (i > 0) row.mass += 0.5 * h * (prev + v);
      prev = v;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qistate
