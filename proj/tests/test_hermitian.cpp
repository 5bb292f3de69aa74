// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dxl/hermitian.hpp"
#include "dxl/rng.hpp"
#include "support.hpp"

using namespace dxl;
using test::diag2;
using test::frob_dist;

TEST_CASE("construction symmetrizes near-Hermitian input and rejects non-square") {
  MatrixXc raw(2, 2);
  raw << Complex(1.0, 0.0), Complex(0.5, 0.25), Complex(0.5, -0.25 + 1e-13), Complex(2.0, 0.0);
  const HermitianMatrix h(raw);
  CHECK((h.mat() - h.mat().adjoint()).norm() == 0.0);

  CHECK_THROWS_AS(HermitianMatrix(MatrixXc::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("herm_exp on analytic cases") {
  CHECK(frob_dist(herm_exp(HermitianMatrix::Zero(2)), HermitianMatrix::Identity(2)) < 1e-14);

  const HermitianMatrix d = herm_exp(diag2(1.0, -1.0));
  CHECK(d.mat()(0, 0).real() == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(d.mat()(1, 1).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  MatrixXc off = MatrixXc::Zero(2, 2);
  off(0, 1) = off(1, 0) = 0.5;
  const HermitianMatrix e = herm_exp(HermitianMatrix(off));
  CHECK(e.mat()(0, 0).real() == doctest::Approx(std::cosh(0.5)).epsilon(1e-12));
  CHECK(e.mat()(0, 1).real() == doctest::Approx(std::sinh(0.5)).epsilon(1e-12));
  CHECK(e.mat()(1, 0).real() == doctest::Approx(std::sinh(0.5)).epsilon(1e-12));
  CHECK(e.mat()(1, 1).real() == doctest::Approx(std::cosh(0.5)).epsilon(1e-12));
}

TEST_CASE("herm_log on analytic cases and the exp/log round trip") {
  CHECK(herm_log(HermitianMatrix::Identity(3)).frobenius_norm() < 1e-14);

  const HermitianMatrix l = herm_log(diag2(std::exp(1.0), 1.0));
  CHECK(l.mat()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(l.mat()(1, 1)) < 1e-14);

  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + trial % 5;
    const HermitianMatrix a = random_hermitian(dim, 2.0, mix_seed(101, trial));
    CHECK(frob_dist(herm_log(herm_exp(a)), a) < 1e-10);
    CHECK(frob_dist(herm_exp(herm_log(exp_project(a).matrix())), exp_project(a).matrix()) <
          1e-10);
  }

  const HermitianMatrix rank_deficient = diag2(1.0, 0.0);
  CHECK_THROWS_AS(herm_log(rank_deficient, /*clamp_eigenvalues=*/false), std::domain_error);
  CHECK_NOTHROW(herm_log(rank_deficient));  // clamped by default
}

TEST_CASE("exp_project analytic values and shift invariance") {
  const SpectraPoint half = exp_project(HermitianMatrix::Zero(2));
  CHECK(frob_dist(half.matrix(), HermitianMatrix::Identity(2) * 0.5) < 1e-14);

  const SpectraPoint p = exp_project(diag2(std::log(3.0), 0.0));
  CHECK(p.matrix().mat()(0, 0).real() == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(p.matrix().mat()(1, 1).real() == doctest::Approx(0.25).epsilon(1e-12));

  const SpectraPoint shifted =
      exp_project(diag2(std::log(3.0), 0.0) + HermitianMatrix::Identity(2) * 100.0);
  CHECK(frob_dist(shifted, p) < 1e-10);

  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 2 + trial % 4;
    const HermitianMatrix y = random_hermitian(dim, 3.0, mix_seed(7, trial));
    const double c = -50.0 + static_cast<double>(splitmix64(trial) % 1000) / 10.0;
    CHECK(frob_dist(exp_project(y + HermitianMatrix::Identity(dim) * c), exp_project(y)) <
          1e-10);
  }

  // Extreme spectra stay finite thanks to the internal shift.
  const SpectraPoint extreme = exp_project(diag2(1e4, -1e4));
  CHECK(extreme.matrix().trace() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("vn_entropy values, range and the 0 log 0 convention") {
  CHECK(vn_entropy(SpectraPoint::Uniform(2)) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));

  const SpectraPoint pure{diag2(1.0, 0.0)};
  CHECK(vn_entropy(pure) == doctest::Approx(0.0).epsilon(1e-12));

  const SpectraPoint mixed{diag2(0.75, 0.25)};
  CHECK(vn_entropy(mixed) ==
        doctest::Approx(0.75 * std::log(0.75) + 0.25 * std::log(0.25)).epsilon(1e-12));
  CHECK(vn_entropy(mixed) == doctest::Approx(-0.562335).epsilon(1e-5));

  for (int trial = 0; trial < 300; ++trial) {
    const int dim = 2 + trial % 5;
    const SpectraPoint x = test::random_point(dim, mix_seed(11, trial), 4.0);
    const double h = vn_entropy(x);
    CHECK(h <= 1e-12);
    CHECK(h >= -std::log(static_cast<double>(dim)) - 1e-12);
    CHECK(h >= vn_entropy(SpectraPoint::Uniform(dim)) - 1e-12);
  }
}

TEST_CASE("trace_inner values and symmetry") {
  CHECK(trace_inner(HermitianMatrix::Identity(2), HermitianMatrix::Identity(2)) ==
        doctest::Approx(2.0));
  CHECK(trace_inner(diag2(1.0, -1.0), HermitianMatrix::Identity(2) * 0.5) ==
        doctest::Approx(0.0));
  CHECK_THROWS_AS(trace_inner(HermitianMatrix::Identity(2), HermitianMatrix::Identity(3)),
                  std::invalid_argument);

  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 2 + trial % 4;
    const HermitianMatrix a = random_hermitian(dim, 2.0, mix_seed(21, trial));
    const HermitianMatrix b = random_hermitian(dim, 2.0, mix_seed(22, trial));
    CHECK(trace_inner(a, b) == doctest::Approx(trace_inner(b, a)).epsilon(1e-12));
    // Frobenius pairing of Hermitian matrices is real: compare to the full trace.
    const Complex full = (a.mat() * b.mat()).trace();
    CHECK(std::abs(full.imag()) < 1e-12);
    CHECK(trace_inner(a, b) == doctest::Approx(full.real()).epsilon(1e-10));
  }
}

TEST_CASE("random_hermitian determinism and spectral bound") {
  const HermitianMatrix a = random_hermitian(4, 1.5, 99);
  const HermitianMatrix b = random_hermitian(4, 1.5, 99);
  CHECK(frob_dist(a, b) == 0.0);
  CHECK(frob_dist(a, random_hermitian(4, 1.5, 100)) > 1e-3);

  const HermitianMatrix scalar = random_hermitian(1, 1.0, 5);
  CHECK(std::abs(scalar.mat()(0, 0).imag()) < 1e-15);
  CHECK(std::abs(scalar.mat()(0, 0).real()) <= 1.0);

  for (int trial = 0; trial < 10000; ++trial) {
    const int dim = 1 + trial % 6;
    const double bound = 0.5 + (trial % 7) * 0.25;
    const HermitianEig eig = herm_eig(random_hermitian(dim, bound, mix_seed(31, trial)));
    CHECK(eig.values.cwiseAbs().maxCoeff() <= bound + 1e-12);
  }
}

TEST_CASE("matrix Jensen inequality over random triples") {
  int checked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int dim = 2 + trial % 4;
    const SpectraPoint x = test::random_point(dim, mix_seed(41, trial), 3.0);
    const HermitianMatrix w = random_hermitian(dim, 2.0, mix_seed(42, trial));
    const double s = static_cast<double>(splitmix64(trial) % 10001) / 10000.0;
    const MatrixXc lhs =
        test::herm_pow(x.matrix(), 1.0 - s) * w.mat() * test::herm_pow(x.matrix(), s) * w.mat();
    const double gap = lhs.trace().real() - std::pow(trace_inner(x.matrix(), w), 2);
    CHECK(gap >= -1e-9);
    ++checked;
  }
  CHECK(checked == 10000);

  // Equality iff W proportional to the identity.
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 2 + trial % 3;
    const SpectraPoint x = test::random_point(dim, mix_seed(43, trial), 3.0);
    const double c = -2.0 + 0.04 * trial;
    const HermitianMatrix w = HermitianMatrix::Identity(dim) * c;
    const double s = 0.3;
    const MatrixXc lhs =
        test::herm_pow(x.matrix(), 1.0 - s) * w.mat() * test::herm_pow(x.matrix(), s) * w.mat();
    const double gap = lhs.trace().real() - std::pow(trace_inner(x.matrix(), w), 2);
    CHECK(std::abs(gap) < 1e-9);
  }
}

TEST_CASE("SpectraPoint validation") {
  CHECK_THROWS_AS(SpectraPoint{diag2(0.9, 0.2)}, std::domain_error);   // trace 1.1
  CHECK_THROWS_AS(SpectraPoint{diag2(1.5, -0.5)}, std::domain_error);  // indefinite
  CHECK_NOTHROW(SpectraPoint{diag2(1.0, 0.0)});                        // boundary point
  CHECK(SpectraPoint::Uniform(3).matrix().trace() == doctest::Approx(1.0));
}
