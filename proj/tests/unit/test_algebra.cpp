#include <cmath>

#include "doctest.h"
#include "qistate/algebra.hpp"
#include "qistate/random.hpp"

using namespace qistate;

namespace {

const cplx I(0.0, 1.0);

AlgebraElement diag_element(std::vector<double> v) {
  const int n = static_cast<int>(v.size());
  CMatrix m = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = v[i];
  return AlgebraElement(AlgebraDescriptor({n}), {m});
}

State qubit() { return State::from_density(diag_element({1.0 / 3, 2.0 / 3})); }

}  // namespace

TEST_CASE("descriptor validation") {
  CHECK_THROWS_AS(AlgebraDescriptor(std::vector<int>{}), InputError);
  CHECK_THROWS_AS(AlgebraDescriptor({2, 0}), InputError);
  const AlgebraDescriptor d({1, 2, 3});
  CHECK(d.l2_dim() == 14);
  CHECK(d.l2_offset(2) == 5);
}

TEST_CASE("element shape validation") {
  const AlgebraDescriptor d({2});
  CHECK_THROWS_AS(AlgebraElement(d, {CMatrix::Zero(3, 3)}), InputError);
  CHECK_THROWS_AS(AlgebraElement(d, {}), InputError);
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(AlgebraElement(d, {bad}), InputError);
}

TEST_CASE("state validation names the density field") {
  for (const auto& rho : {diag_element({0.5, 0.6}), diag_element({1.5, -0.5})}) {
    try {
      State::from_density(rho);
      FAIL("expected InputError");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("state.density") != std::string::npos);
    }
  }
  CMatrix m(2, 2);
  m << 0.5, 0.3, 0.0, 0.5;
  CHECK_THROWS_AS(State::from_density(AlgebraElement(AlgebraDescriptor({2}), {m})), InputError);
}

TEST_CASE("evaluate") {
  const State phi = qubit();
  CHECK(std::abs(evaluate(phi, AlgebraElement::identity(phi.descriptor())) - 1.0) < 1e-15);
  CHECK(std::abs(evaluate(phi, diag_element({1.0, 0.0})) - 1.0 / 3) < 1e-15);

  Rng rng(7);
  const AlgebraDescriptor d({1, 2, 3});
  const State psi = State::from_density(random_density(d, rng));
  for (int k = 0; k < 10; ++k) {
    const AlgebraElement a = random_element(d, rng), b = random_element(d, rng);
    const cplx al(0.3, -1.2), be(2.0, 0.5);
    CHECK(std::abs(evaluate(psi, a * al + b * be) - (al * evaluate(psi, a) + be * evaluate(psi, b))) < 1e-12);
  }
  CHECK_THROWS_AS(evaluate(psi, AlgebraElement::identity(AlgebraDescriptor({2}))), InputError);
}

TEST_CASE("faithfulness") {
  CHECK(is_faithful(qubit()).faithful);
  const State pure = State::from_density(diag_element({1.0, 0.0}));
  CHECK_FALSE(is_faithful(pure).faithful);
  CHECK_THROWS_AS(require_faithful(pure, {}, "test"), PreconditionError);

  Rng rng(8);
  const AlgebraDescriptor d({2, 3});
  const State phi = State::from_density(random_density(d, rng));
  const FaithfulnessReport r = is_faithful(phi);
  CHECK(r.faithful);
  double oracle = 1e300;
  for (const auto& b : phi.density().blocks()) {
    Eigen::ComplexEigenSolver<CMatrix> es(b, false);
    for (Eigen::Index i = 0; i < b.rows(); ++i) oracle = std::min(oracle, es.eigenvalues()(i).real());
  }
  CHECK(std::abs(r.min_eigenvalue - oracle) < 1e-12);
}

TEST_CASE("support comparison") {
  const State a = qubit(), b = State::from_density(diag_element({0.5, 0.5}));
  CHECK(support_comparison(a, b) == SupportRelation::equivalent);
  CHECK(support_comparison(a, a) == SupportRelation::equivalent);
  const State pure = State::from_density(diag_element({1.0, 0.0}));
  CHECK(support_comparison(pure, b) == SupportRelation::first_dominated);
  CHECK(support_comparison(b, pure) == SupportRelation::second_dominated);
  const State other = State::from_density(diag_element({0.0, 1.0}));
  CHECK(support_comparison(pure, other) == SupportRelation::incomparable);
}

TEST_CASE("modular flow") {
  Rng rng(9);
  const AlgebraDescriptor d({2, 3});
  const State phi = State::from_density(random_density(d, rng));
  const AlgebraElement& rho = phi.density();
  const AlgebraElement a = random_element(d, rng), b = random_element(d, rng);
  CHECK(distance(modular_flow(phi, a, 0.0), a) < 1e-12);
  CHECK(distance(modular_flow(phi, rho * rho, cplx(0.4, 0.9)), rho * rho) < 1e-12);

  const cplx z(0.7, -0.35);
  CHECK(distance(modular_flow(phi, a * b, z), modular_flow(phi, a, z) * modular_flow(phi, b, z)) < 1e-10);
  CHECK(distance(modular_flow(phi, a, -I), rho * a * rho.inverse(1e-12)) < 1e-9 * std::max(1.0, a.norm()));
  const AlgebraElement rh = psd_sqrt(rho);
  CHECK(distance(modular_flow(phi, a, -0.5 * I), rh * a * rh.inverse(1e-12)) < 1e-9 * std::max(1.0, a.norm()));

  // phi o sigma_t = phi, and phi(ab) = phi(b sigma_{-i}(a))
  CHECK(std::abs(evaluate(phi, modular_flow(phi, a, 1.7)) - evaluate(phi, a)) < 1e-10);
  CHECK(std::abs(evaluate(phi, a * b) - evaluate(phi, b * modular_flow(phi, a, -I))) < 1e-9);

  CHECK_THROWS_AS(modular_flow(State::from_density(diag_element({1.0, 0.0})), diag_element({1, 2}), 1.0),
                  PreconditionError);
}

TEST_CASE("GNS embedding") {
  Rng rng(10);
  const AlgebraDescriptor d({1, 2, 2});
  const State phi = State::from_density(random_density(d, rng));
  const L2Vector omega = gns_embed(phi, AlgebraElement::identity(d));
  CHECK(distance(omega.as_element(), psd_sqrt(phi.density())) < 1e-14);
  CHECK(std::abs(l2_inner(omega, omega) - 1.0) < 1e-12);
  for (int k = 0; k < 10; ++k) {
    const AlgebraElement x = random_element(d, rng), y = random_element(d, rng);
    CHECK(std::abs(l2_inner(gns_embed(phi, x), gns_embed(phi, y)) - evaluate(phi, x.adjoint() * y)) < 1e-10);
    const double n = l2_norm(gns_embed(phi, x));
    CHECK(std::abs(n * n - evaluate(phi, x.adjoint() * x).real()) < 1e-10);
  }
  CHECK_THROWS_AS(gns_embed(State::from_density(diag_element({1.0, 0.0})), diag_element({1, 1})), PreconditionError);
}

TEST_CASE("center basis") {
  const auto single = center_basis(AlgebraDescriptor({3}));
  REQUIRE(single.size() == 1);
  CHECK(distance(single[0], AlgebraElement::identity(AlgebraDescriptor({3}))) == 0.0);

  const AlgebraDescriptor d({2, 2});
  const auto z = center_basis(d);
  REQUIRE(z.size() == 2);
  CHECK((z[0] * z[1]).norm() == 0.0);
  CHECK(distance(z[0] + z[1], AlgebraElement::identity(d)) == 0.0);
}

TEST_CASE("vectorize layout is block-major, column-major within blocks") {
  const AlgebraDescriptor d({1, 2});
  const AlgebraElement e = AlgebraElement::matrix_unit(d, 1, 1, 0);  // row 1, col 0 of block 1
  const CVector v = e.vectorize();
  REQUIRE(v.size() == 5);
  CHECK(v(1 + 0 * 2 + 1) == cplx(1.0, 0.0));
  CHECK(distance(AlgebraElement::unvectorize(d, v), e) == 0.0);
}
