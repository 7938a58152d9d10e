// Copyright 2026 The ttqst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "support.hpp"
#include "ttqst/measure.hpp"
#include "ttqst/metrics.hpp"
#include "ttqst/states.hpp"
#include "ttqst/ttcross.hpp"

namespace ttqst {
namespace {

using testing::random_tt;

DenseOperator diag(std::initializer_list<double> d) {
  Eigen::VectorXcd v(d.size());
  Index i = 0;
  for (double x : d) v(i++) = x;
  return DenseOperator(v.asDiagonal().toDenseMatrix());
}

RealTensorTrain one_qubit(double a0, double a3) {
  return product_tt(std::vector<std::vector<double>>{{a0, 0, 0, a3}});
}

TEST(DistanceD, TrivialCases) {
  const auto a = lptn_state({5, 2, 10, 1});
  EXPECT_NEAR(distance_D(a, a), 0.0, 1e-12);
  EXPECT_NEAR(distance_D(one_qubit(0.5, 0.0), one_qubit(0.5, 0.5)), 1.0, 1e-15);
  EXPECT_THROW(distance_D(one_qubit(0.0, 0.0), one_qubit(0.5, 0.5)), NumericalError);
  EXPECT_THROW(distance_D(a, lptn_state({4, 2, 10, 1})), DimensionError);
}

TEST(DistanceD, MatchesDenseFrobeniusNorms) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto a = lptn_state({4, 2, 10, seed});
    const auto b = random_tt(4, 4, 3, seed + 10).scaled(0.01);
    const Eigen::MatrixXcd ra = testing::rho_of(a), rb = testing::rho_of(b);
    const double ref = (ra - rb).squaredNorm() / ra.squaredNorm();
    EXPECT_NEAR(distance_D(a, b), ref, 1e-10 * std::max(1.0, ref));
    // Symmetry after undoing the normalization.
    EXPECT_NEAR(distance_D(a, b) * ra.squaredNorm(), distance_D(b, a) * rb.squaredNorm(),
                1e-10 * (ra - rb).squaredNorm());
  }
}

TEST(DistanceDs, TrivialCases) {
  const auto state = lptn_state({5, 2, 10, 2});
  NoisyOracle o(state, NoiseModel{});
  ttcross_dmrg(o, {});
  EXPECT_NEAR(distance_Ds(o, state), 0.0, 1e-24);
  const auto zero = product_tt(std::vector<std::vector<double>>(5, std::vector<double>(4, 0.0)));
  EXPECT_NEAR(distance_Ds(o, zero), 1.0, 1e-15);
  ElementOracle empty({4, 4}, [](std::span<const std::uint8_t>) { return 0.0; });
  EXPECT_THROW(distance_Ds(empty, zero), Error);
  empty(MultiIndex{1, 1});
  EXPECT_THROW(distance_Ds(empty, product_tt(std::vector<std::vector<double>>(2, {0.5, 0, 0, 0}))),
               NumericalError);
}

TEST(DistanceDs, RecordedValuesAgreeWithOracleForm) {
  const auto state = lptn_state({5, 2, 10, 3});
  NoisyOracle o(state, NoiseModel{});
  CrossConfig cfg;
  cfg.max_rank = 2;
  const auto recon = ttcross_dmrg(o, cfg).tt;
  const auto rec = make_record(o);
  const double ds = distance_Ds(rec.strings, rec.expectations, recon);
  EXPECT_NEAR(ds, distance_Ds(o, recon), 1e-12 * std::max(ds, 1e-300));
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < rec.strings.size(); ++i) {
    const double r = 32.0 * testing::brute_element(recon, rec.strings[i].gammas());
    num += (rec.expectations[i] - r) * (rec.expectations[i] - r);
    den += rec.expectations[i] * rec.expectations[i];
  }
  EXPECT_NEAR(ds, num / den, 1e-10 * std::max(ds, 1e-300));
}

TEST(Fidelity, TrivialCases) {
  const auto pure = diag({1.0, 0.0});
  EXPECT_NEAR(fidelity(pure, pure), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(pure, diag({0.0, 1.0})), 0.0, 1e-12);
  EXPECT_NEAR(fidelity(diag({0.5, 0.5}), pure), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Fidelity, SelfFidelityOfMixedStates) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto rho = to_dense_operator(lptn_state({4, 2, 10, seed}));
    EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-9);
  }
}

TEST(Fidelity, SignedSquareRootForNonPositiveSecondArgument) {
  // sqrt(rho1) rho2 sqrt(rho1) = diag(0.6, -0.1).
  EXPECT_NEAR(fidelity(diag({0.5, 0.5}), diag({1.2, -0.2})), std::sqrt(0.6) - std::sqrt(0.1),
              1e-12);
  EXPECT_GT(fidelity(diag({1.0, 0.0}), diag({1.1, -0.1})), 1.0);
}

TEST(Fidelity, ReferenceIsReusable) {
  const auto rho1 = to_dense_operator(lptn_state({3, 2, 10, 5}));
  const FidelityReference ref(rho1);
  for (std::uint64_t seed = 6; seed < 9; ++seed) {
    const auto rho2 = to_dense_operator(lptn_state({3, 2, 10, seed}));
    EXPECT_NEAR(ref(rho2), fidelity(rho1, rho2), 1e-14);
  }
  EXPECT_THROW(ref(diag({1.0, 0.0})), DimensionError);
}

TEST(Fidelity, InputChecks) {
  Eigen::Matrix2cd skew;
  skew << 0.5, 0.1, -0.1, 0.5;
  EXPECT_THROW(fidelity(DenseOperator(skew), diag({0.5, 0.5})), NumericalError);
  EXPECT_THROW(fidelity(diag({0.5, 0.5}), DenseOperator(skew)), NumericalError);
  EXPECT_THROW(fidelity(diag({1.0, 0.0}), diag({1.0, 0.0, 0.0, 0.0})), DimensionError);
  const DenseOperator big(Eigen::MatrixXcd::Identity(2048, 2048));
  EXPECT_THROW(fidelity(big, big), SizeLimitError);
}

TEST(LossL, SumOfSquares) {
  const auto state = lptn_state({3, 2, 10, 1});
  const std::vector<PauliString> s{PauliString::parse("XYZ"), PauliString::parse("IZI")};
  std::vector<double> v;
  for (const auto& p : s) v.push_back(exact_expectation(state, p));
  EXPECT_NEAR(loss_L(s, v, state), 0.0, 1e-28);
  const std::vector<double> shifted{v[0] + 0.3, v[1]};
  EXPECT_NEAR(loss_L(s, shifted, state), 0.09, 1e-14);
  EXPECT_THROW(loss_L(s, std::vector<double>{1.0}, state), DimensionError);
}

}  // namespace
}  // namespace ttqst
