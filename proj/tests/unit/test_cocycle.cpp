#include "doctest.h"
#include "fixtures.hpp"
#include "qistate/cocycle.hpp"
#include "support/generators.hpp"

using namespace qistate;
using namespace qistate::fixtures;

TEST_CASE("rn_cocycle examples") {
  const State phi = qubit_state();
  CHECK(distance(rn_cocycle(phi, Automorphism::identity(phi.descriptor())),
                 AlgebraElement::identity(phi.descriptor())) < 1e-14);
  CHECK(distance(rn_cocycle(phi, ad_x()), diag2(2.0, 0.5)) < 1e-14);
  CHECK(distance(rn_cocycle(c2_state(), c2_swap()), c2_element(3.0, 1.0 / 3)) < 1e-14);
}

TEST_CASE("rn_cocycle defining relation on random instances") {
  Rng rng(21);
  for (int k = 0; k < 10; ++k) {
    const auto inst = testing::random_instance(rng, {});
    for (const auto& g : inst.group.elements()) {
      const AlgebraElement x = rn_cocycle(inst.phi, g);
      for (const auto& e : AlgebraElement::matrix_units(inst.phi.descriptor()))
        CHECK(std::abs(evaluate(inst.phi, apply(g, e)) - evaluate(inst.phi, x * e)) < 1e-10);
    }
  }
}

TEST_CASE("rn_cocycle requires a faithful state") {
  const AlgebraDescriptor d({2});
  const State pure = State::from_density(diag2(1.0, 0.0));
  CHECK_THROWS_AS(rn_cocycle(pure, Automorphism::inner(d, {pauli_x()})), PreconditionError);
}

TEST_CASE("lambda examples") {
  const std::vector<Automorphism> x{ad_x()};
  const CocycleTable q = build_table(qubit_state(), close_group(x));
  CHECK(q.lambda_bound == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(lambda_dominates(q, 2.5));
  CHECK_FALSE(lambda_dominates(q, 1.5));

  const std::vector<Automorphism> s{c2_swap()};
  CHECK(build_table(c2_state(), close_group(s)).lambda_bound == doctest::Approx(3.0).epsilon(1e-13));

  const State tracial = State::from_density(diag2(0.5, 0.5));
  CHECK(build_table(tracial, close_group(x)).lambda_bound == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("cocycle identities on random instances") {
  Rng rng(22);
  for (int k = 0; k < 20; ++k) {
    testing::InstanceSpec spec;
    spec.strong = k % 2 == 0;
    const auto inst = testing::random_instance(rng, spec);
    const CocycleTable t = build_table(inst.phi, inst.group);
    CHECK(verify_cocycle_identity(t).pass);
    CHECK(verify_inverse_formula(t).pass);
    CHECK(verify_adjoint_relation(inst.phi, t).pass);

    // lambda against an independent singular value computation
    double lam = 1.0;
    for (const auto& g : inst.group.elements()) {
      for (std::size_t b = 0; b < inst.phi.descriptor().block_count(); ++b) {
        const CMatrix rho = inst.phi.density().block(b);
        const CMatrix xb = rho.inverse() * predual(g, inst.phi.density()).block(b);
        Eigen::JacobiSVD<CMatrix> svd(xb);
        lam = std::max({lam, svd.singularValues()(0), 1.0 / svd.singularValues()(svd.singularValues().size() - 1)});
      }
    }
    CHECK(t.lambda_bound == doctest::Approx(lam).epsilon(1e-9));
  }
}

TEST_CASE("base change: the table for phi o h") {
  Rng rng(23);
  for (int k = 0; k < 10; ++k) {
    const auto inst = testing::random_instance(rng, {});
    const CocycleTable t = build_table(inst.phi, inst.group);
    const std::size_t h = inst.group.size() - 1;
    const State moved = State::from_density(predual(inst.group.element(h), inst.phi.density()));
    for (std::size_t g = 0; g < inst.group.size(); ++g) {
      const AlgebraElement xg = rn_cocycle(moved, inst.group.element(g));
      const AlgebraElement expect = t.inverses[h] * t.x(inst.group.product(h, g));
      CHECK(relative_residual(xg, expect) < 1e-10);
    }
  }
}

TEST_CASE("strong quasi-invariance classification") {
  const AlgebraDescriptor d({2});
  const std::vector<Automorphism> x{ad_x()};
  const StrongQiReport r = is_strongly_qi(qubit_state(), build_table(qubit_state(), close_group(x)));
  CHECK(r.strong);
  CHECK(r.positive);
  CHECK(r.spectrum_within_lambda);
  CHECK(all_pass(r.checks));

  const std::vector<Automorphism> h{Automorphism::inner(d, {hadamard()})};
  const CocycleTable th = build_table(qubit_state(), close_group(h));
  const StrongQiReport rh = is_strongly_qi(qubit_state(), th);
  CHECK_FALSE(rh.strong);
  CHECK(rh.hermiticity_residual > 0.1);
  // the non-strong cocycle still satisfies the identity
  CHECK(verify_cocycle_identity(th).pass);

  Rng rng(24);
  for (int k = 0; k < 10; ++k) {
    testing::InstanceSpec spec;
    spec.strong = true;
    const auto inst = testing::random_instance(rng, spec);
    const StrongQiReport s = is_strongly_qi(inst.phi, build_table(inst.phi, inst.group));
    CHECK(s.strong);
    CHECK(all_pass(s.checks));
  }
}

TEST_CASE("sz_domination") {
  const State phi = qubit_state();
  Rng rng(25);
  const auto probes = psd_probes(phi.descriptor(), rng, 20);
  const AlgebraElement one = AlgebraElement::identity(phi.descriptor());
  const CheckResult id = sz_domination(phi, one, probes);
  CHECK(id.pass);
  CHECK(id.residual <= 1e-15);
  CHECK(sz_domination(phi, one * cplx(2.0, 0.0), probes).residual <= 1e-15);
  CHECK(sz_domination(phi, diag2(2.0, 0.5), probes).pass);

  // rho a not Hermitian
  const CMatrix skew = fixtures::mat2(0, 1, 0, 0);
  CHECK_THROWS_AS(sz_domination(phi, AlgebraElement(phi.descriptor(), {skew}), probes), PreconditionError);
  // rho a Hermitian but not PSD
  CHECK_THROWS_AS(sz_domination(phi, diag2(1.0, -1.0), probes), PreconditionError);
}

TEST_CASE("sz_domination on cocycles of random instances") {
  Rng rng(26);
  for (int k = 0; k < 10; ++k) {
    testing::InstanceSpec spec;
    spec.strong = k % 2 == 0;
    const auto inst = testing::random_instance(rng, spec);
    const CocycleTable t = build_table(inst.phi, inst.group);
    const auto probes = psd_probes(inst.phi.descriptor(), rng, 10);
    for (std::size_t g = 0; g < t.entries.size(); ++g) {
      CHECK(sz_domination(inst.phi, t.x(g), probes).pass);
      CHECK(sz_domination(inst.phi, t.inverses[g], probes).pass);
    }
  }
}

TEST_CASE("sandwich bounds") {
  const State phi = qubit_state();
  const std::vector<Automorphism> x{ad_x()};
  const CocycleTable t = build_table(phi, close_group(x));
  // phi(x_g a) for a = diag(1,0): 2/3, inside [1/6, 2/3]
  const cplx v = evaluate(phi, t.x(1) * diag2(1.0, 0.0));
  CHECK(v.real() == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(v.real() >= evaluate(phi, diag2(1.0, 0.0)).real() / 2.0);

  Rng rng(27);
  const auto probes = psd_probes(phi.descriptor(), rng, 30);
  CHECK(sandwich_check(phi, t, probes).pass);
  for (int k = 0; k < 10; ++k) {
    const auto inst = testing::random_instance(rng, {});
    const CocycleTable ti = build_table(inst.phi, inst.group);
    CHECK(sandwich_check(inst.phi, ti, psd_probes(inst.phi.descriptor(), rng, 10)).pass);
  }
}

TEST_CASE("commutative cocycles match the elementwise ratio") {
  Rng rng(28);
  for (int k = 0; k < 10; ++k) {
    const auto c = testing::random_commutative(rng);
    const CocycleTable t = build_table(c.inst.phi, c.inst.group);
    for (std::size_t g = 0; g < c.perms.size(); ++g) {
      const AlgebraElement& x = t.x(g);
      for (std::size_t i = 0; i < c.p.size(); ++i) {
        const double oracle = c.p[static_cast<std::size_t>(c.perms[g][i])] / c.p[i];
        CHECK(std::abs(x.block(i)(0, 0) - cplx(oracle, 0.0)) < 1e-12 * std::max(1.0, oracle));
      }
    }
  }
}
