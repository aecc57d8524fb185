#include "doctest.h"
#include "fixtures.hpp"
#include "qistate/invariant.hpp"
#include "support/generators.hpp"

using namespace qistate;
using namespace qistate::fixtures;

namespace {

CocycleTable qubit_table() {
  const std::vector<Automorphism> x{ad_x()};
  return build_table(qubit_state(), close_group(x));
}

}  // namespace

TEST_CASE("gamma map examples") {
  const State phi = qubit_state();
  const CocycleTable t = qubit_table();
  const AlgebraElement a = diag2(1.0, 0.0);
  // Gamma_X(a) = x_X X a X = diag(2, 1/2) diag(0, 1)
  CHECK(distance(gamma_map(phi, ad_x(), a), diag2(0.0, 0.5)) < 1e-14);
  CHECK(distance(gamma_map(t, 1, a), diag2(0.0, 0.5)) < 1e-14);
  CHECK(distance(gamma_map(t, 0, a), a) < 1e-14);
}

TEST_CASE("fixed density and invariant state examples") {
  const State phi = qubit_state();
  const CocycleTable t = qubit_table();
  CHECK(distance(fixed_density_d(phi, t), diag2(1.5, 0.75)) < 1e-14);

  Rng rng(31);
  const auto probes = psd_probes(phi.descriptor(), rng, 8);
  const InvariantCertificate cert = invariant_state(phi, t, probes);
  CHECK(distance(cert.psi.density(), diag2(0.5, 0.5)) < 1e-14);
  CHECK(all_pass(cert.checks));
  CHECK(cert.d_min_singular_value == doctest::Approx(0.75).epsilon(1e-13));

  const std::vector<Automorphism> s{c2_swap()};
  const CocycleTable tc = build_table(c2_state(), close_group(s));
  CHECK(distance(fixed_density_d(c2_state(), tc), c2_element(2.0, 2.0 / 3)) < 1e-14);
  const InvariantCertificate cc = invariant_state(c2_state(), tc, psd_probes(c2(), rng, 4));
  CHECK(distance(cc.psi.density(), c2_element(0.5, 0.5)) < 1e-14);
}

TEST_CASE("gamma properties on random instances") {
  Rng rng(32);
  for (int k = 0; k < 20; ++k) {
    testing::InstanceSpec spec;
    spec.strong = k % 2 == 0;
    const auto inst = testing::random_instance(rng, spec);
    const CocycleTable t = build_table(inst.phi, inst.group);
    std::vector<AlgebraElement> probes;
    for (int j = 0; j < 4; ++j) probes.push_back(random_element(inst.phi.descriptor(), rng));
    const CheckList checks = gamma_properties_check(inst.phi, t, probes);
    CHECK(checks.size() == 5);
    CHECK(all_pass(checks));

    // independent: Gamma_g(x_h) = x_{h g^-1} directly from the definition
    for (std::size_t g = 0; g < inst.group.size(); ++g)
      for (std::size_t h = 0; h < inst.group.size(); ++h) {
        const std::size_t hg = inst.group.product(h, inst.group.inverse_of(g));
        const AlgebraElement lhs =
            rn_cocycle(inst.phi, inst.group.element(inst.group.inverse_of(g))) * apply(inst.group.element(g), t.x(h));
        CHECK(relative_residual(lhs, t.x(hg)) < 1e-10);
      }
  }
}

TEST_CASE("invariant state is G-invariant (brute force)") {
  Rng rng(33);
  for (int k = 0; k < 20; ++k) {
    testing::InstanceSpec spec;
    spec.strong = k % 2 == 0;
    const auto inst = testing::random_instance(rng, spec);
    const CocycleTable t = build_table(inst.phi, inst.group);
    const InvariantCertificate cert = invariant_state(inst.phi, t, psd_probes(inst.phi.descriptor(), rng, 4));
    CHECK(all_pass(cert.checks));
    CHECK(cert.psi.density().block_trace_sum().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cert.psi.density().min_eigenvalue() > 0.0);
    for (const auto& g : inst.group.elements())
      for (int j = 0; j < 3; ++j) {
        const AlgebraElement a = random_element(inst.phi.descriptor(), rng);
        CHECK(std::abs(evaluate(cert.psi, apply(g, a)) - evaluate(cert.psi, a)) < 1e-10 * std::max(1.0, a.norm()));
      }
    // ||d|| <= lambda, ||d^-1|| <= lambda
    CHECK(cert.d.norm() <= t.lambda_bound * (1 + 1e-10));
    CHECK(1.0 / cert.d_min_singular_value <= t.lambda_bound * (1 + 1e-10));
  }
}

TEST_CASE("converse: cocycle from d") {
  const State phi = qubit_state();
  const AlgebraElement d = diag2(1.5, 0.75);
  const ConverseCocycle c = cocycle_from_d(phi, d, ad_x());
  CHECK(distance(c.x, diag2(2.0, 0.5)) < 1e-14);
  CHECK(c.bound == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(all_pass(c.checks));

  // phi(d .) not invariant
  CHECK_THROWS_AS(cocycle_from_d(phi, diag2(1.0, 1.0), ad_x()), PreconditionError);
  // d singular
  CHECK_THROWS_AS(cocycle_from_d(phi, diag2(1.0, 0.0), ad_x()), PreconditionError);

  Rng rng(34);
  for (int k = 0; k < 10; ++k) {
    const auto inst = testing::random_instance(rng, {});
    const CocycleTable t = build_table(inst.phi, inst.group);
    const AlgebraElement dd = fixed_density_d(inst.phi, t);
    for (const auto& g : inst.group.elements()) CHECK(all_pass(cocycle_from_d(inst.phi, dd, g).checks));
  }
}

TEST_CASE("strong case: d commutes with its translates") {
  Rng rng(35);
  for (int k = 0; k < 10; ++k) {
    testing::InstanceSpec spec;
    spec.strong = true;
    const auto inst = testing::random_instance(rng, spec);
    const CocycleTable t = build_table(inst.phi, inst.group);
    const AlgebraElement d = fixed_density_d(inst.phi, t);
    CHECK(all_pass(strong_case_check(t, d)));
    CHECK(d.hermiticity_residual() < 1e-12);
    for (const auto& g : inst.group.elements()) CHECK(commutator_norm(d, apply(g, d)) < 1e-10);
  }
}
