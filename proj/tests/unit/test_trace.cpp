#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "qistate/trace.hpp"
#include "support/generators.hpp"

using namespace qistate;
using namespace qistate::fixtures;

namespace {

FiniteGroup group_of(std::vector<Automorphism> gens) { return close_group(gens); }

std::size_t orbit_count(const FiniteGroup& G) {
  const std::size_t k = G.descriptor().block_count();
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i];
    return i;
  };
  for (const auto& g : G.elements())
    for (std::size_t i = 0; i < k; ++i) parent[find(i)] = find(static_cast<std::size_t>(g.perm()[i]));
  std::size_t n = 0;
  for (std::size_t i = 0; i < k; ++i) n += find(i) == i;
  return n;
}

}  // namespace

TEST_CASE("center ergodicity examples") {
  CHECK(is_center_ergodic(group_of({ad_x()})));
  const AlgebraDescriptor d22({2, 2});
  const Automorphism swap(d22, {1, 0}, {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)});
  CHECK(is_center_ergodic(group_of({swap})));
  CHECK_FALSE(is_center_ergodic(group_of({Automorphism::inner(d22, {pauli_x(), pauli_z()})})));
}

TEST_CASE("invariant trace examples") {
  const InvariantTrace single = invariant_trace(group_of({ad_x()}));
  CHECK(single.solution_dimension == 1);
  CHECK(single.tau.weights == std::vector<double>{1.0});
  Rng rng(61);
  const AlgebraElement a = random_element(AlgebraDescriptor({2}), rng);
  CHECK(std::abs(single.tau(a) - a.block(0).trace()) < 1e-15);

  const AlgebraDescriptor d22({2, 2});
  const Automorphism swap(d22, {1, 0}, {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)});
  const InvariantTrace t2 = invariant_trace(group_of({swap}));
  REQUIRE(t2.tau.weights.size() == 2);
  CHECK(t2.tau.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(t2.tau.weights[1] == doctest::Approx(1.0).epsilon(1e-14));

  try {
    invariant_trace(group_of({Automorphism::inner(d22, {pauli_x(), pauli_z()})}));
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("trace not unique") != std::string::npos);
    CHECK(msg.find("dimension 2") != std::string::npos);
  }
}

TEST_CASE("ergodicity and solution dimension agree with orbit counting") {
  Rng rng(62);
  int ergodic = 0, not_ergodic = 0;
  for (int k = 0; k < 40; ++k) {
    testing::InstanceSpec spec;
    spec.dim_choices = {2};
    const auto inst = testing::random_instance(rng, spec);
    const std::size_t orbits = orbit_count(inst.group);
    CHECK(is_center_ergodic(inst.group) == (orbits == 1));
    if (orbits == 1) {
      ++ergodic;
      const InvariantTrace it = invariant_trace(inst.group);
      CHECK(it.solution_dimension == 1);
      for (double w : it.tau.weights) CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
    } else {
      ++not_ergodic;
      CHECK_THROWS_AS(invariant_trace(inst.group), PreconditionError);
    }
  }
  CHECK(ergodic > 0);
  CHECK(not_ergodic > 0);
}

TEST_CASE("trace density") {
  const State phi = qubit_state();
  const InvariantTrace it = invariant_trace(group_of({ad_x()}));
  CHECK(distance(trace_density(phi, it.tau), diag2(1.0 / 3, 2.0 / 3)) < 1e-15);

  // non-unit weights: c_i = rho_i / w_i
  const AlgebraDescriptor d({1, 2});
  Rng rng(63);
  const State p = State::from_density(random_density(d, rng));
  const TraceFunctional tau{d, {2.0, 0.5}};
  const AlgebraElement c = trace_density(p, tau);
  CHECK(relative_residual(AlgebraElement(d, {c.block(0) * 2.0, c.block(1) * 0.5}), p.density()) < 1e-14);
  for (int k = 0; k < 5; ++k) {
    const AlgebraElement a = random_element(d, rng);
    CHECK(std::abs(evaluate(p, a) - tau(c * a)) < 1e-12);
  }
  CHECK_THROWS_AS(trace_density(p, TraceFunctional{d, {1.0, -1.0}}), InputError);
}

TEST_CASE("density relations") {
  const State phi = qubit_state();
  const FiniteGroup gx = group_of({ad_x()});
  const CocycleTable t = build_table(phi, gx);
  const InvariantTrace it = invariant_trace(gx);
  const AlgebraElement c = trace_density(phi, it.tau);
  CHECK(distance(predual(ad_x(), c), c * t.x(1)) < 1e-15);
  CHECK(distance(predual(ad_x(), c), diag2(2.0 / 3, 1.0 / 3)) < 1e-15);
  CHECK(all_pass(verify_density_relations(phi, t, it.tau)));

  Rng rng(64);
  int tested = 0;
  for (int k = 0; k < 40 && tested < 10; ++k) {
    testing::InstanceSpec spec;
    spec.strong = k % 2 == 0;
    const auto inst = testing::random_instance(rng, spec);
    if (!is_center_ergodic(inst.group)) continue;
    ++tested;
    const CocycleTable ti = build_table(inst.phi, inst.group);
    const InvariantTrace tr = invariant_trace(inst.group);
    CHECK(all_pass(verify_density_relations(inst.phi, ti, tr.tau)));
    std::vector<AlgebraElement> probes;
    for (int j = 0; j < 4; ++j) probes.push_back(random_element(inst.desc, rng));
    CHECK(all_pass(verify_trace_properties(tr.tau, inst.group, probes)));
    // direct trace property
    const AlgebraElement a = probes[0], b = probes[1];
    CHECK(std::abs(tr.tau(a * b) - tr.tau(b * a)) < 1e-10 * std::max(1.0, a.norm() * b.norm()));
  }
  CHECK(tested >= 5);
}
