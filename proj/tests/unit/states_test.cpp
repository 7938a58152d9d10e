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

#include <Eigen/Dense>

#include "support.hpp"
#include "ttqst/pauli.hpp"
#include "ttqst/random.hpp"
#include "ttqst/states.hpp"

namespace ttqst {
namespace {

using testing::brute_dense;
using testing::dense_mpo;

// exp(m) by scaling and squaring of a Taylor series.
Eigen::MatrixXcd expm_taylor(const Eigen::MatrixXcd& m) {
  int squarings = 0;
  double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25) {
    norm /= 2;
    ++squarings;
  }
  const Eigen::MatrixXcd a = m / std::ldexp(1.0, squarings);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  Eigen::MatrixXcd sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

Eigen::MatrixXcd ising_hamiltonian(int n, double g) {
  const Index dim = Index{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    MultiIndex x(n, 0);
    x[i] = 1;
    h += g * testing::pauli_product(x);
    if (i + 1 < n) {
      MultiIndex zz(n, 0);
      zz[i] = zz[i + 1] = 3;
      h += testing::pauli_product(zz);
    }
  }
  return h;
}

Eigen::MatrixXcd gibbs_reference(int n, double g, double t) {
  const Eigen::MatrixXcd e = expm_taylor(-ising_hamiltonian(n, g) / t);
  return e / e.trace();
}

void expect_physical(const Eigen::MatrixXcd& rho, const char* what) {
  const double scale = rho.norm();
  EXPECT_LE((rho - rho.adjoint()).norm(), 1e-10 * scale) << what;
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-9) << what;
  EXPECT_NEAR(rho.trace().imag(), 0.0, 1e-9) << what;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()));
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9) << what;
}

TEST(StateSpecs, Validation) {
  EXPECT_THROW((LptnSpec{1, 2, 10, 0}.validate()), ConfigError);
  EXPECT_THROW((LptnSpec{4, 0, 10, 0}.validate()), ConfigError);
  EXPECT_THROW((LptnSpec{4, 2, 0, 0}.validate()), ConfigError);
  EXPECT_THROW((ThermalSpec{4, 1.0, 0.0}.validate()), ConfigError);
  EXPECT_THROW((ThermalSpec{13, 1.0, 1.0}.validate()), SizeLimitError);
  EXPECT_THROW(thermal_ising({13, 1.0, 1.0}), SizeLimitError);
}

TEST(Lptn, BondDimensionIsKappaSquared) {
  for (Index kappa : {1, 2, 3, 4}) {
    const auto mpo = random_lptn({6, kappa, 10, 1});
    for (std::size_t k = 1; k < mpo.size(); ++k) EXPECT_EQ(mpo.bond_dims()[k], kappa * kappa);
    const auto state = lptn_state({6, kappa, 10, 1});
    EXPECT_LE(state.max_bond(), kappa * kappa);
  }
}

TEST(Lptn, SingleKrausProductIsPure) {
  const auto mpo = random_lptn({4, 1, 1, 9});
  const Eigen::MatrixXcd rho = dense_mpo(mpo);
  EXPECT_NEAR((rho * rho).trace().real(), 1.0, 1e-10);
  EXPECT_NEAR(purity(lptn_state({4, 1, 1, 9})), 1.0, 1e-10);
}

TEST(Lptn, DenseStateIsPhysical) {
  const auto mpo = random_lptn({4, 2, 10, 3});
  const Eigen::MatrixXcd rho = dense_mpo(mpo);
  expect_physical(rho, "N=4 kappa=2");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
}

TEST(Lptn, ReproducibleFromSeed) {
  EXPECT_EQ(random_lptn({5, 2, 10, 17}), random_lptn({5, 2, 10, 17}));
  EXPECT_NE(random_lptn({5, 2, 10, 17}), random_lptn({5, 2, 10, 18}));
  EXPECT_EQ(lptn_state({5, 2, 10, 17}), lptn_state({5, 2, 10, 17}));
}

TEST(Lptn, MatchesDocumentedConstruction) {
  // Rebuild the MPO from the documented draw order and normalization.
  const LptnSpec spec{5, 2, 3, 31};
  std::mt19937_64 rng(spec.seed);
  std::vector<std::vector<std::vector<Eigen::MatrixXcd>>> a(spec.N);  // [site][s][k]
  for (int i = 0; i < spec.N; ++i) {
    const Index l = i == 0 ? 1 : spec.kappa;
    const Index r = i + 1 == spec.N ? 1 : spec.kappa;
    a[i].assign(2, std::vector<Eigen::MatrixXcd>(spec.K));
    for (int s = 0; s < 2; ++s)
      for (Index k = 0; k < spec.K; ++k) {
        Eigen::MatrixXcd m(l, r);
        for (Index row = 0; row < l; ++row)
          for (Index col = 0; col < r; ++col) {
            const double re = uniform_symmetric(rng);
            m(row, col) = Complex(re, uniform_symmetric(rng));
          }
        a[i][s][k] = m;
      }
  }
  std::vector<Core<Complex>> cores;
  for (int i = 0; i < spec.N; ++i) {
    const Index l = a[i][0][0].rows(), r = a[i][0][0].cols();
    Core<Complex> c(l * l, 4, r * r);
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(l * l, r * r);
        for (Index k = 0; k < spec.K; ++k) m += testing::kron(a[i][s][k], a[i][t][k].conjugate());
        c.slice(2 * s + t) = m;
      }
    cores.push_back(std::move(c));
  }
  const ComplexTensorTrain raw(cores);
  const Complex tr = dense_mpo(raw).trace();
  const Complex f = std::pow(tr, -1.0 / spec.N);
  const auto mpo = random_lptn(spec);
  for (int i = 0; i < spec.N; ++i) {
    const auto x = raw.core(i).data(), y = mpo.core(i).data();
    ASSERT_EQ(x.size(), y.size());
    for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(std::abs(x[k] * f - y[k]), 0.0, 1e-12);
  }
}

TEST(PauliConversion, SingleQubitExamples) {
  auto one_site = [](Complex m00, Complex m01, Complex m10, Complex m11) {
    return ComplexTensorTrain({Core<Complex>(1, 4, 1, {m00, m01, m10, m11})});
  };
  const auto mixed = lptn_to_pauli(one_site(0.5, 0.0, 0.0, 0.5));
  ASSERT_TRUE(mixed.real.has_value());
  EXPECT_EQ(std::vector<double>(mixed.real->core(0).data().begin(), mixed.real->core(0).data().end()),
            (std::vector<double>{0.5, 0.0, 0.0, 0.0}));
  const auto ket = lptn_to_pauli(one_site(1.0, 0.0, 0.0, 0.0));
  ASSERT_TRUE(ket.real.has_value());
  EXPECT_EQ(std::vector<double>(ket.real->core(0).data().begin(), ket.real->core(0).data().end()),
            (std::vector<double>{0.5, 0.0, 0.0, 0.5}));
}

TEST(PauliConversion, CoefficientsMatchDenseTraces) {
  const auto mpo = random_lptn({4, 2, 10, 21});
  const auto state = lptn_state({4, 2, 10, 21});
  const Eigen::MatrixXcd rho = dense_mpo(mpo);
  const std::vector<Index> dims(4, 4);
  for (std::size_t f = 0; f < 256; ++f) {
    const auto g = testing::unflatten(f, dims);
    const Complex ref = (rho * testing::pauli_product(g)).trace();
    EXPECT_NEAR(16.0 * element(state, g), ref.real(), 1e-9) << f;
    EXPECT_NEAR(ref.imag(), 0.0, 1e-9);
  }
}

TEST(PauliConversion, InverseMapRecoversCores) {
  const auto mpo = random_lptn({5, 2, 10, 2});
  const auto conv = lptn_to_pauli(mpo);
  const auto back = pauli_to_mpo(conv.cores);
  for (std::size_t i = 0; i < mpo.size(); ++i) {
    const auto a = mpo.core(i).data(), b = back.core(i).data();
    for (std::size_t k = 0; k < a.size(); ++k) ASSERT_NEAR(std::abs(a[k] - b[k]), 0.0, 1e-12);
  }
  EXPECT_EQ(conv.cores.bond_dims(), mpo.bond_dims());
}

TEST(PauliConversion, ComplexCoresFallBackToRealEmbedding) {
  // Random LPTN cores are genuinely complex in the Pauli basis; the
  // coefficient tensor is still real.
  const auto mpo = random_lptn({4, 2, 10, 6});
  const auto conv = lptn_to_pauli(mpo);
  EXPECT_FALSE(conv.real.has_value());
  EXPECT_GT(conv.imag_residue, 1e-10);
  const auto real = pauli_state(conv);
  const auto dc = brute_dense(conv.cores);
  const auto dr = brute_dense(real);
  for (std::size_t i = 0; i < dc.size(); ++i) {
    EXPECT_NEAR(dc[i].imag(), 0.0, 1e-12);
    EXPECT_NEAR(dr[i], dc[i].real(), 1e-12);
  }
}

TEST(Thermal, InfiniteTemperatureIsMaximallyMixed) {
  const int n = 5;
  const auto a = brute_dense(thermal_ising({n, 1.0, 1e6}));
  EXPECT_NEAR(a[0], std::ldexp(1.0, -n), 1e-12);
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_LE(std::abs(a[i]), 1e-6);
}

TEST(Thermal, TwoQubitsMatchMatrixExponential) {
  const Eigen::MatrixXcd ref = gibbs_reference(2, 1.0, 2.0);
  const auto coeffs = testing::coefficients_of(ref, 2);
  const auto a = thermal_ising_coefficients({2, 1.0, 2.0});
  const auto tt = brute_dense(thermal_ising({2, 1.0, 2.0}));
  for (std::size_t i = 0; i < 16; ++i) {
    EXPECT_NEAR(a[i], coeffs[i].real(), 1e-13) << i;
    EXPECT_NEAR(tt[i], coeffs[i].real(), 1e-13) << i;
  }
  EXPECT_LT((thermal_ising_dense({2, 1.0, 2.0}).matrix() - ref).norm(), 1e-13);
}

TEST(Thermal, LargerChainsMatchMatrixExponential) {
  for (auto [n, g, t] : {std::tuple{4, 1.0, 0.2}, std::tuple{5, 0.7, 1.0}, std::tuple{6, 1.3, 2.0}}) {
    const Eigen::MatrixXcd ref = gibbs_reference(n, g, t);
    EXPECT_LT((thermal_ising_dense({n, g, t}).matrix() - ref).norm(), 1e-11) << n;
    const auto coeffs = testing::coefficients_of(ref, n);
    const auto a = thermal_ising_coefficients({n, g, t});
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a[i], coeffs[i].real(), 1e-12) << n;
  }
}

TEST(Thermal, LowTemperatureNeedsLargerBonds) {
  const auto hot = thermal_ising({8, 1.0, 2.0}, 1e-8);
  const auto cold = thermal_ising({8, 1.0, 0.2}, 1e-8);
  EXPECT_GT(cold.max_bond(), hot.max_bond());
}

TEST(Thermal, BondProfileMatchesOperatorSchmidtRanks) {
  for (double t : {2.0, 0.2}) {
    const Eigen::MatrixXcd ref = gibbs_reference(8, 1.0, t);
    const auto bonds = thermal_ising({8, 1.0, t}, 1e-8).bond_dims();
    for (int cut = 1; cut < 8; ++cut) {
      const Eigen::VectorXd s = testing::operator_schmidt_values(ref, 8, cut);
      const Index expected = (s.array() > 1e-8 * s(0)).count();
      EXPECT_EQ(bonds[static_cast<std::size_t>(cut)], expected) << "T=" << t << " cut " << cut;
    }
  }
}

TEST(Physicality, GeneratedStatesUpToEightQubits) {
  for (int n = 2; n <= 8; n += 2) {
    for (Index kappa : {1, 2, 4}) {
      const auto state = lptn_state({n, kappa, 10, static_cast<std::uint64_t>(n * 10 + kappa)});
      expect_physical(to_dense_operator(state).matrix(), "lptn");
      const double p = purity(state);
      EXPECT_GE(p, std::ldexp(1.0, -n));
      EXPECT_LE(p, 1.0 + 1e-9);
    }
    for (double t : {0.2, 1.0, 2.0}) {
      const auto state = thermal_ising({n, 1.0, t});
      expect_physical(to_dense_operator(state).matrix(), "thermal");
      const double p = purity(state);
      EXPECT_GE(p, std::ldexp(1.0, -n));
      EXPECT_LE(p, 1.0 + 1e-9);
    }
  }
}

}  // namespace
}  // namespace ttqst
