// Acceptance suite: one line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>

#include "../support/generators.hpp"
#include "qistate/cli.hpp"
#include "qistate/cocycle.hpp"
#include "qistate/commutative.hpp"
#include "qistate/expectation.hpp"
#include "qistate/invariant.hpp"
#include "qistate/standard_impl.hpp"
#include "qistate/trace.hpp"

#ifndef QISTATE_INSTANCE_DIR
#define QISTATE_INSTANCE_DIR "instances"
#endif

using namespace qistate;
using testing::RandomInstance;

namespace {

constexpr double kTol = 1e-9;
constexpr int kInstances = 200;
constexpr int kProbesPerInstance = 5;  // 1000 probes in total

struct Outcome {
  bool pass = true;
  double worst = 0.0;
  std::string detail;

  void record(double residual, double threshold = kTol) {
    worst = std::max(worst, residual);
    if (!(residual < threshold)) pass = false;
  }
  void absorb(const CheckList& checks) {
    for (const auto& c : checks)
      if (c.asserted) {
        worst = std::max(worst, c.residual);
        if (!c.pass) {
          pass = false;
          detail += " [" + c.name + "]";
        }
      }
  }
};

int failures = 0;

void run(int number, const char* title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string(" exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.pass) ++failures;
  std::printf("criterion %d %s %s: worst residual %.3e, %.2fs%s\n", number, out.pass ? "PASS" : "FAIL", title, out.worst,
              secs, out.detail.c_str());
  std::fflush(stdout);
}

struct Prepared {
  RandomInstance inst;
  CocycleTable table;
  StrongQiReport strong;
  std::vector<AlgebraElement> probes;
};

std::vector<Prepared> prepare(Rng& rng) {
  std::vector<Prepared> out;
  for (int i = 0; i < kInstances; ++i) {
    testing::InstanceSpec spec;
    spec.strong = (i % 2 == 0);
    RandomInstance inst = testing::random_instance(rng, spec);
    CocycleTable table = build_table(inst.phi, inst.group);
    StrongQiReport strong = is_strongly_qi(inst.phi, table);
    std::vector<AlgebraElement> probes;
    for (int k = 0; k < kProbesPerInstance; ++k) {
      AlgebraElement p = random_psd_element(inst.desc, rng, k % 2 == 1);
      p *= cplx(1.0 / p.block_trace_sum().real(), 0.0);
      probes.push_back(hermitian_part(p));
    }
    out.push_back({std::move(inst), std::move(table), std::move(strong), std::move(probes)});
  }
  return out;
}

double spectrum_band_violation(const AlgebraElement& h, double lambda) {
  const AlgebraElement s = hermitian_part(h);
  return std::max({0.0, 1.0 / lambda - s.min_eigenvalue(1.0), s.max_eigenvalue(1.0) - lambda});
}

}  // namespace

int main() {
  Rng rng(20240917);
  std::vector<Prepared> cases;

  run(1, "cocycle identity, inverse formula, adjoint relation on 200 random instances", [&] {
    const auto start = std::chrono::steady_clock::now();
    cases = prepare(rng);
    Outcome o;
    for (const auto& c : cases) {
      o.record(verify_cocycle_identity(c.table).residual);
      o.record(verify_inverse_formula(c.table).residual);
      o.record(verify_adjoint_relation(c.inst.phi, c.table).residual);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 60.0) {
      o.pass = false;
      o.detail = " runtime over 60s";
    }
    std::size_t strong = 0, biggest = 0;
    for (const auto& c : cases) {
      strong += c.strong.strong;
      biggest = std::max(biggest, c.table.group.size());
    }
    o.detail += " (" + std::to_string(strong) + " strong, max |G| " + std::to_string(biggest) + ")";
    return o;
  });

  run(2, "domination and sandwich bounds on 1000 random positive probes", [&] {
    Outcome o;
    std::size_t probes = 0;
    for (const auto& c : cases) {
      const double lambda = c.table.lambda_bound;
      for (std::size_t g = 0; g < c.table.group.size(); ++g) {
        const AlgebraElement& x = c.table.x(g);
        const AlgebraElement& xi = c.table.inverses[g];
        const AlgebraElement xi_adj = xi.adjoint();
        for (const auto& a : c.probes) {
          const double pa = evaluate(c.inst.phi, a).real();
          const cplx xa = evaluate(c.inst.phi, x * a);
          const cplx xia = evaluate(c.inst.phi, xi * a);
          const cplx axi = evaluate(c.inst.phi, a * xi_adj);
          // L_{x_g} phi = phi o g and L_{x_g^-1} phi are positive forms.
          o.record(std::max(0.0, xa.real() - x.norm() * pa));
          o.record(std::max(0.0, xia.real() - xi.norm() * pa));
          o.record(std::max({0.0, pa / lambda - xa.real(), xa.real() - lambda * pa, std::abs(xa.imag())}));
          o.record(std::max({0.0, pa / lambda - axi.real(), axi.real() - lambda * pa, std::abs(axi.imag())}));
        }
      }
      probes += c.probes.size();
    }
    o.detail = " (" + std::to_string(probes) + " probes)";
    return o;
  });

  run(3, "invariant state forward and converse on strongly quasi-invariant instances", [&] {
    Outcome o;
    std::size_t n = 0;
    for (const auto& c : cases) {
      if (!c.strong.strong) continue;
      ++n;
      const InvariantCertificate cert = invariant_state(c.inst.phi, c.table, c.probes);
      o.record(cert.residuals.at("gamma_fixedness"));
      o.record(cert.residuals.at("invariance"));
      const double psi_min = is_faithful(cert.psi).min_eigenvalue;
      const double rho_min = is_faithful(c.inst.phi).min_eigenvalue;
      o.record(std::max(0.0, rho_min / c.table.lambda_bound - kTol - psi_min), 1e-300);
      for (const auto& g : c.table.group.elements()) {
        const ConverseCocycle conv = cocycle_from_d(c.inst.phi, cert.d, g);
        o.record(relative_residual(conv.x, rn_cocycle(c.inst.phi, g)));
        o.record(std::max(0.0, conv.x.norm() - conv.bound));
      }
    }
    o.detail = " (" + std::to_string(n) + " instances)";
    if (n == 0) o.pass = false;
    return o;
  });

  run(4, "strong case: spectra of x_g and d in [1/lambda, lambda], [d, g(d)] = 0", [&] {
    Outcome o;
    for (const auto& c : cases) {
      if (!c.strong.strong) continue;
      const double lambda = c.table.lambda_bound;
      const AlgebraElement d = fixed_density_d(c.inst.phi, c.table);
      o.record(spectrum_band_violation(d, lambda));
      o.record(d.hermiticity_residual());
      for (std::size_t g = 0; g < c.table.group.size(); ++g) {
        o.record(spectrum_band_violation(c.table.x(g), lambda));
        o.record(commutator_norm(d, apply(c.table.group.element(g), d)));
      }
    }
    return o;
  });

  run(5, "unitary implementation, covariance, a_g and gamma factorization", [&] {
    Outcome o;
    for (const auto& c : cases) {
      const bool strong = c.strong.strong;
      for (std::size_t g = 0; g < c.table.group.size(); ++g) {
        o.absorb(unitarity_checks(u_g(c.inst.phi, c.table.group.element(g))));
        o.absorb(a_g_checks(c.inst.phi, c.table, g, strong));
      }
      o.absorb({verify_covariance(c.inst.phi, c.table.group)});
      if (strong) o.absorb({verify_representation(c.inst.phi, c.table.group, true)});
      const InvariantCertificate cert = invariant_state(c.inst.phi, c.table, c.probes);
      o.absorb(gamma_factorization(c.inst.phi, cert.psi, cert.d, c.table).checks);
    }
    return o;
  });

  run(6, "conditional expectation, E0 compression, decomposition and F0 = 1", [&] {
    Outcome o;
    auto suite = [&](const State& phi, const FiniteGroup& group, Rng& local) {
      const CocycleTable table = build_table(phi, group);
      const StrongQiReport strong = is_strongly_qi(phi, table);
      if (!strong.strong) throw std::runtime_error("expected a strongly quasi-invariant instance");
      const auto probes = psd_probes(phi.descriptor(), local, 8);
      std::vector<AlgebraElement> generic;
      for (int k = 0; k < 4; ++k) generic.push_back(random_element(phi.descriptor(), local));
      const InvariantCertificate cert = invariant_state(phi, table, probes);
      const FixedAlgebra fixed = fixed_algebra(group);
      o.absorb(fixed.checks);
      const ConditionalExpectation Phi = cond_expectation(cert.psi, group);
      o.absorb(verify_conditional_expectation(Phi, cert.psi, fixed, generic, probes));
      o.absorb(verify_ks(phi, table, cert));
      o.absorb(commutant_f0(fixed, e0_projection(phi, group), true).f0.checks);
    };
    std::size_t shipped = 0, random = 0;
    for (const char* name : {"qubit.json", "c2_swap.json", "m2m2_swap.json", "invariant_qubit.json"}) {
      const cli::Instance inst = cli::load_instance(std::filesystem::path(QISTATE_INSTANCE_DIR) / name);
      const FiniteGroup group = close_group(inst.generators);
      suite(inst.phi, group, rng);
      ++shipped;
    }
    for (const auto& c : cases)
      if (c.strong.strong && random < 40) {
        suite(c.inst.phi, c.inst.group, rng);
        ++random;
      }
    // larger blocks, up to l2 dimension 64
    for (const auto& [dims, blocks] : {std::pair{std::vector<int>{4, 5}, 2}, std::pair{std::vector<int>{4}, 4}}) {
      for (int k = 0; k < 3; ++k) {
        testing::InstanceSpec spec;
        spec.strong = true;
        spec.dim_choices = dims;
        spec.max_blocks = blocks;
        RandomInstance inst = testing::random_instance(rng, spec);
        if (inst.desc.l2_dim() > default_commutant_cap) {
          --k;
          continue;
        }
        suite(inst.phi, inst.group, rng);
        ++random;
      }
    }
    o.detail += " (" + std::to_string(shipped) + " shipped, " + std::to_string(random) + " random)";
    return o;
  });

  run(7, "invariant trace uniqueness and density relations on center-ergodic instances", [&] {
    Outcome o;
    std::size_t n = 0;
    for (const auto& c : cases) {
      if (!is_center_ergodic(c.table.group)) continue;
      ++n;
      const InvariantTrace it = invariant_trace(c.table.group);
      if (it.solution_dimension != 1) o.pass = false;
      const AlgebraElement cd = trace_density(c.inst.phi, it.tau);
      for (const auto& e : AlgebraElement::matrix_units(c.inst.desc))
        o.record(std::abs(evaluate(c.inst.phi, e) - it.tau(cd * e)));
      o.absorb(verify_density_relations(c.inst.phi, c.table, it.tau));
    }
    o.detail = " (" + std::to_string(n) + " ergodic instances)";
    return o;
  });

  run(8, "commutative examples: cocycle identities, quasi-invariance, unboundedness witness", [&] {
    Outcome o;
    const std::vector<double> grid = symmetric_grid(100.0, 1001);
    const RealFunction bump = RealFunction::gaussian_bump(0.5, 2.0);
    std::uniform_real_distribution<double> shift(-10.0, 10.0), scale(0.2, 5.0), offset(-5.0, 5.0);
    double pointwise = 0.0, budget_ratio = 0.0;
    auto take = [&](const CheckList& checks) {
      o.absorb(checks);
      for (const auto& c : checks) {
        if (!c.asserted) continue;
        if (c.name.find("quasi_invariance") != std::string::npos)
          budget_ratio = std::max(budget_ratio, c.residual / c.threshold);
        else
          pointwise = std::max(pointwise, c.residual);
      }
    };
    for (int k = 0; k < 20; ++k) {
      take(verify_translation_identities(shift(rng), shift(rng), grid, bump));
      take(verify_axb(AxBElement(scale(rng), offset(rng)), AxBElement(scale(rng), offset(rng)), grid, bump));
    }
    for (double t : {1.0, 3.0, 10.0}) {
      const WitnessReport w = unboundedness_witness(t, grid);
      o.record(std::abs(w.witness - (1.0 + t * t)));
      o.absorb(w.checks);
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, " (pointwise identities %.3e < 1e-12; quadrature residual at most %.3e of its budget)",
                  pointwise, budget_ratio);
    o.detail += buf;
    return o;
  });

  run(9, "fully commutative descriptors against a probability-vector oracle", [&] {
    Outcome o;
    for (int k = 0; k < 40; ++k) {
      const testing::CommutativeInstance ci = testing::random_commutative(rng);
      const FiniteGroup& G = ci.inst.group;
      const std::size_t n = ci.p.size(), order = G.size();
      auto at = [](const AlgebraElement& a, std::size_t i) { return a.block(i)(0, 0); };

      // oracle: g(a)_i = a_{pi^-1(i)}, so phi(g(a)) = sum_j p_{pi(j)} a_j
      std::vector<std::vector<double>> x(order, std::vector<double>(n));
      std::vector<double> d(n, 0.0);
      for (std::size_t g = 0; g < order; ++g)
        for (std::size_t j = 0; j < n; ++j) {
          x[g][j] = ci.p[ci.perms[g][j]] / ci.p[j];
          d[j] += x[g][j] / static_cast<double>(order);
        }

      const CocycleTable table = build_table(ci.inst.phi, G);
      const auto probes = psd_probes(ci.inst.desc, rng, 6);
      const InvariantCertificate cert = invariant_state(ci.inst.phi, table, probes);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t g = 0; g < order; ++g) o.record(std::abs(at(table.x(g), j) - x[g][j]), 1e-12);
        o.record(std::abs(at(cert.d, j) - d[j]), 1e-12);
        o.record(std::abs(at(cert.psi.density(), j) - ci.p[j] * d[j]), 1e-12);
      }

      const ConditionalExpectation Phi = cond_expectation(cert.psi, G);
      const AlgebraElement a = random_hermitian_element(ci.inst.desc, rng);
      const AlgebraElement pa = Phi(a);
      for (std::size_t i = 0; i < n; ++i) {
        double avg = 0.0;
        for (std::size_t g = 0; g < order; ++g) {
          std::size_t src = 0;
          while (static_cast<std::size_t>(ci.perms[g][src]) != i) ++src;  // pi^-1(i)
          avg += at(a, src).real() / static_cast<double>(order);
        }
        o.record(std::abs(at(pa, i) - avg), 1e-12);
      }

      if (is_center_ergodic(G)) {
        const InvariantTrace it = invariant_trace(G);
        const AlgebraElement c = trace_density(ci.inst.phi, it.tau);
        for (std::size_t j = 0; j < n; ++j) {
          o.record(std::abs(it.tau.weights[j] - 1.0), 1e-12);  // transitive: weights equal, w_0 = 1
          o.record(std::abs(at(c, j) - ci.p[j]), 1e-12);
        }
      }
    }
    return o;
  });

  std::printf("acceptance: %s (%d failing)\n", failures == 0 ? "PASS" : "FAIL", failures);
  return failures == 0 ? 0 : 1;
}
