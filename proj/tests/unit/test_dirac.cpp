#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qdirac/dirac.hpp"

namespace qdirac {
namespace {

TruncationSpec trunc_of(int n_max, Index k_max) {
  TruncationSpec t;
  t.n_max = n_max;
  t.k_max = k_max;
  t.margin = 2;
  return t;
}

FourierElement random_element(int n_max, Index k_max, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FourierElement x(n_max, k_max);
  for (int n = 0; n <= n_max; ++n) {
    for (Index k = 0; k <= k_max; ++k) {
      x.plus(n)[k] = u(rng);
      if (n >= 1) x.minus(n)[k] = u(rng);
    }
  }
  return x;
}

TEST(ApplyDelta, ZeroAndSingleMinusCoefficient) {
  const auto family = q_weight_family(0.5);
  const GluedDirac op(family, trunc_of(4, 16));
  EXPECT_EQ(op.apply_delta(FourierElement(4, 16)).coefficient_norm(), 0.0);

  FourierElement x(4, 16);
  x.minus(1)[0] = 1.0;
  const auto out = op.apply_delta(x);
  EXPECT_DOUBLE_EQ(out.plus(0)[0], family.b(0, 0));
  EXPECT_DOUBLE_EQ(out.plus(0)[1], -family.b(0, 1) * family.c_minus(0, 0));
  EXPECT_NEAR(out.coefficient_norm(), std::hypot(out.plus(0)[0], out.plus(0)[1]), 1e-15);
}

TEST(ApplyDelta, ReproducesDifferenceFormulas) {
  const auto family = q_weight_family(0.5);
  const int n_max = 5;
  const Index k_max = 30;
  const GluedDirac op(family, trunc_of(n_max, k_max));
  const auto x = random_element(n_max, k_max, 17);
  const auto out = op.apply_delta_with_leakage(x);
  for (Index k = 0; k < k_max; ++k) {
    for (int m = 1; m <= n_max; ++m) {
      const double expected = -family.b(m, k) *
                              (x.plus(m - 1)[k] - family.c_plus(m - 1, k) * x.plus(m - 1)[k + 1]);
      EXPECT_NEAR(out.value.plus(m)[k], expected, 1e-13 * std::abs(family.b(m, k)));
    }
    for (int m = 0; m < n_max; ++m) {
      const double prev = k > 0 ? x.minus(m + 1)[k - 1] : 0.0;
      const double expected =
          family.b(m, k) * (x.minus(m + 1)[k] - (k > 0 ? family.c_minus(m, k - 1) : 0.0) * prev);
      const double got = m == 0 ? out.value.plus(0)[k] : out.value.minus(m)[k];
      EXPECT_NEAR(got, expected, 1e-13 * std::abs(family.b(m, k)));
    }
  }
  EXPECT_GT(out.leakage, 0.0);
}

TEST(ApplyD, ComponentwiseAndLinear) {
  const auto family = q_weight_family(0.5);
  const GluedDirac op(family, trunc_of(3, 24));
  const auto f = random_element(3, 24, 1);
  const auto g = random_element(3, 24, 2);
  const GluedElement x(f, FourierElement(3, 24));
  const auto dx = op.apply_D(x);
  EXPECT_EQ(dx.g.coefficient_norm(), 0.0);
  EXPECT_EQ((dx.f - op.apply_delta(f)).coefficient_norm(), 0.0);

  const GluedElement y(g, f);
  const double lambda = -0.37;
  const auto lhs = op.apply_D(x + lambda * y);
  const auto rhs = op.apply_D(x) + lambda * op.apply_D(y);
  EXPECT_LE((lhs - rhs).coefficient_norm(), 1e-13 * op.apply_D(x).coefficient_norm());

  EXPECT_THROW(op.apply_D(GluedElement(2, 24)), Error);
}

TEST(ApplyD, ComplexMatchesRealParts) {
  const auto family = q_weight_family(0.5);
  const GluedDirac op(family, trunc_of(3, 20));
  const auto re = random_element(3, 20, 5);
  const auto im = random_element(3, 20, 6);
  ComplexFourierElement z(3, 20);
  for (int n = 0; n <= 3; ++n) {
    z.plus(n) = re.plus(n).cast<std::complex<double>>() +
                std::complex<double>(0, 1) * im.plus(n).cast<std::complex<double>>();
    if (n >= 1) {
      z.minus(n) = re.minus(n).cast<std::complex<double>>() +
                   std::complex<double>(0, 1) * im.minus(n).cast<std::complex<double>>();
    }
  }
  const auto out = op.apply_delta(z);
  const auto dre = op.apply_delta(re);
  const auto dim = op.apply_delta(im);
  for (int n = 0; n <= 3; ++n) {
    EXPECT_TRUE(out.plus(n).real().isApprox(dre.plus(n)));
    EXPECT_TRUE(out.plus(n).imag().isApprox(dim.plus(n)));
  }
}

TEST(Kernel, BasisElementQuarter) {
  const auto family = q_weight_family(0.25);
  const GluedDirac op(family, trunc_of(6, 64));
  const auto basis = kernel_D(op);
  ASSERT_EQ(basis.size(), 1u);
  const auto& x = basis.front();
  EXPECT_NEAR(x.f.plus(0)[64], 1.0, 1e-12);
  EXPECT_EQ((x.f.plus(0) - x.g.plus(0)).norm(), 0.0);
  const auto d = op.apply_D(x);
  for (Index k = 0; k < 64; ++k) {
    EXPECT_LE(std::abs(d.f.plus(1)[k]) / family.b(1, k), 1e-12);
    EXPECT_LE(std::abs(d.g.plus(1)[k]) / family.b(1, k), 1e-12);
  }
  const auto domain = in_domain(op, x);
  EXPECT_TRUE(domain.in_domain) << domain.reason;
}

TEST(Kernel, UndeformedIsConstant) {
  const GluedDirac op(geometric_family(2.0, 2.0), trunc_of(3, 16));
  const auto basis = kernel_D(op);
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_TRUE(basis[0].f.plus(0).isApprox(Vector::Ones(17)));
  EXPECT_TRUE(basis[0].g.plus(0).isApprox(Vector::Ones(17)));
}

TEST(Kernel, DenseOracleAgrees) {
  const auto family = q_weight_family(0.5);
  const int n_max = 8;
  const Index k_max = 64;
  const GluedDirac op(family, trunc_of(n_max, k_max));
  const auto dense = oracle::dense_kernel(family, n_max, k_max);
  EXPECT_EQ(dense.nullity[0], 1);
  for (int n = 1; n < n_max; ++n) EXPECT_EQ(dense.nullity[n], 0) << "mode " << n;

  const auto x = kernel_D(op).front();
  EXPECT_LE((dense.mode0.head(k_max + 1) - x.f.plus(0)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((dense.mode0.tail(k_max + 1) - x.g.plus(0)).cwiseAbs().maxCoeff(), 1e-10);

  const auto cert = certify_kernel(op);
  EXPECT_EQ(cert.total_nullity(), 1);
  for (const auto& mode : cert.modes) {
    EXPECT_EQ(mode.nullity, mode.n == 0 ? 1 : 0) << "mode " << mode.n;
  }
  EXPECT_LE(cert.basis_residual, 1e-12);
}

TEST(Domain, GluingViolationIsRejected) {
  const auto family = q_weight_family(0.5);
  const GluedDirac op(family, trunc_of(3, 32));
  GluedElement x(3, 32);
  x.f.plus(0) = op.kernel_profile();
  const auto report = in_domain(op, x);
  EXPECT_FALSE(report.in_domain);
  EXPECT_FALSE(report.gluing.glued);
  EXPECT_NEAR(report.gluing.max_residual, 1.0, 1e-12);
}

TEST(Domain, OscillatingTraceIsReported) {
  const auto family = q_weight_family(0.5);
  const GluedDirac op(family, trunc_of(2, 36));
  GluedElement x(2, 36);
  for (Index k = 0; k <= 36; ++k) x.f.plus(1)[k] = k % 2 == 0 ? 1.0 : -1.0;
  const auto report = in_domain(op, x);
  EXPECT_FALSE(report.in_domain);
  EXPECT_FALSE(report.traces_converged);
}

}  // namespace
}  // namespace qdirac
