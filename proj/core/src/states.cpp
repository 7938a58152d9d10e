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

#include "ttqst/states.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "ttqst/error.hpp"
#include "ttqst/pauli.hpp"
#include "ttqst/random.hpp"

namespace ttqst {

void LptnSpec::validate() const {
  if (N < 2) throw ConfigError(fmt::format("LPTN needs N >= 2 (got {})", N));
  if (kappa < 1) throw ConfigError(fmt::format("kappa must be >= 1 (got {})", kappa));
  if (K < 1) throw ConfigError(fmt::format("K must be >= 1 (got {})", K));
}

void ThermalSpec::validate() const {
  if (N < 1) throw ConfigError(fmt::format("thermal state needs N >= 1 (got {})", N));
  if (N > kMaxDenseQubits) {
    throw SizeLimitError(fmt::format("thermal states are built densely; N={} exceeds {}", N,
                                     kMaxDenseQubits));
  }
  if (!(T > 0) || !std::isfinite(T)) throw ConfigError("temperature must be positive");
  if (!std::isfinite(g)) throw ConfigError("transverse field must be finite");
}

ComplexTensorTrain random_lptn(const LptnSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const auto n = static_cast<std::size_t>(spec.N);
  std::vector<Core<Complex>> cores;
  cores.reserve(n);
  for (std::size_t site = 0; site < n; ++site) {
    const Index kl = site == 0 ? 1 : spec.kappa;
    const Index kr = site + 1 == n ? 1 : spec.kappa;
    // kraus[s][a] is kl x kr.
    std::vector<std::vector<Eigen::MatrixXcd>> kraus(2);
    for (int s = 0; s < 2; ++s) {
      for (Index a = 0; a < spec.K; ++a) {
        Eigen::MatrixXcd m(kl, kr);
        for (Index i = 0; i < kl; ++i) {
          for (Index j = 0; j < kr; ++j) {
            const double re = uniform_symmetric(rng);
            const double im = uniform_symmetric(rng);
            m(i, j) = Complex(re, im);
          }
        }
        kraus[static_cast<std::size_t>(s)].push_back(std::move(m));
      }
    }
    Core<Complex> core(kl * kl, 4, kr * kr);
    for (int s = 0; s < 2; ++s) {
      for (int sp = 0; sp < 2; ++sp) {
        const Index q = 2 * s + sp;
        for (Index a = 0; a < spec.K; ++a) {
          const auto& x = kraus[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
          const auto& y = kraus[static_cast<std::size_t>(sp)][static_cast<std::size_t>(a)];
          for (Index l1 = 0; l1 < kl; ++l1) {
            for (Index l2 = 0; l2 < kl; ++l2) {
              for (Index r1 = 0; r1 < kr; ++r1) {
                for (Index r2 = 0; r2 < kr; ++r2) {
                  core(l1 * kl + l2, q, r1 * kr + r2) += x(l1, r1) * std::conj(y(l2, r2));
                }
              }
            }
          }
        }
      }
    }
    cores.push_back(std::move(core));
  }

  // Tr rho = product over sites of (M^{00} + M^{11}).
  Eigen::RowVectorXcd env = Eigen::RowVectorXcd::Ones(1);
  for (const auto& c : cores) {
    Eigen::MatrixXcd diag = c.slice(0) + c.slice(3);
    env = (env * diag).eval();
  }
  const double trace = env(0).real();
  if (!(trace > 0)) throw NumericalError("LPTN trace is not positive");
  const double scale = std::pow(trace, -1.0 / static_cast<double>(n));
  for (auto& c : cores) {
    for (auto& v : c.data()) v *= scale;
  }
  return ComplexTensorTrain(std::move(cores));
}

PauliConversion lptn_to_pauli(const ComplexTensorTrain& mpo, double tol) {
  PauliConversion out{mpo_to_pauli(mpo), std::nullopt, 0.0};
  out.imag_residue = imaginary_residue(out.cores);
  if (out.imag_residue <= tol) out.real = cast_real(out.cores, tol);
  return out;
}

RealTensorTrain pauli_state(const PauliConversion& conversion) {
  if (conversion.real) return *conversion.real;
  return real_part(conversion.cores);
}

RealTensorTrain lptn_state(const LptnSpec& spec) {
  return pauli_state(lptn_to_pauli(random_lptn(spec)));
}

namespace {

// Gibbs state of the Hadamard-rotated chain sum X_i X_{i+1} + g sum Z_i,
// which conserves the parity of the computational basis state, so its two
// parity blocks are diagonalized separately. Returns the real symmetric
// density matrix.
Eigen::MatrixXd rotated_gibbs(const ThermalSpec& spec) {
  const int n = spec.N;
  const Index dim = Index{1} << n;
  std::vector<std::vector<Index>> sector(2);
  std::vector<Index> position(static_cast<std::size_t>(dim));
  for (Index x = 0; x < dim; ++x) {
    auto& s = sector[static_cast<std::size_t>(std::popcount(static_cast<std::uint64_t>(x)) & 1)];
    position[static_cast<std::size_t>(x)] = static_cast<Index>(s.size());
    s.push_back(x);
  }

  std::vector<Eigen::VectorXd> energies;
  std::vector<Eigen::MatrixXd> vectors;
  double e_min = std::numeric_limits<double>::infinity();
  for (const auto& states : sector) {
    const Index m = static_cast<Index>(states.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
    for (Index k = 0; k < m; ++k) {
      const Index x = states[static_cast<std::size_t>(k)];
      double diag = 0.0;
      for (int q = 0; q < n; ++q) {
        const int bit = static_cast<int>((x >> (n - 1 - q)) & 1);
        diag += spec.g * (1 - 2 * bit);
      }
      h(k, k) = diag;
      for (int q = 0; q + 1 < n; ++q) {
        const Index flip = Index{3} << (n - 2 - q);
        h(position[static_cast<std::size_t>(x ^ flip)], k) += 1.0;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("Ising eigensolver failed");
    e_min = std::min(e_min, es.eigenvalues().minCoeff());
    energies.push_back(es.eigenvalues());
    vectors.push_back(es.eigenvectors());
  }

  double z = 0.0;
  for (auto& e : energies) {
    e = (-(e.array() - e_min) / spec.T).exp().matrix();
    z += e.sum();
  }
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t b = 0; b < 2; ++b) {
    const auto& states = sector[b];
    Eigen::MatrixXd block = vectors[b] * (energies[b] / z).asDiagonal() * vectors[b].transpose();
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (std::size_t j = 0; j < states.size(); ++j) {
        rho(states[i], states[j]) = block(static_cast<Index>(i), static_cast<Index>(j));
      }
    }
  }
  return rho;
}

std::size_t spread_bits(std::size_t x) {
  std::size_t out = 0;
  for (int k = 0; x != 0; ++k, x >>= 1) out |= (x & 1U) << (2 * k);
  return out;
}

}  // namespace

std::vector<double> thermal_ising_coefficients(const ThermalSpec& spec) {
  spec.validate();
  const int n = spec.N;
  const Eigen::MatrixXd rho = rotated_gibbs(spec);
  const Index dim = rho.rows();

  // Real symmetric rho: keep (M01 - M10)/2 in place of the Y coefficient
  // and restore the factor i^{#Y} at the end.
  std::vector<std::size_t> spread(static_cast<std::size_t>(dim));
  for (std::size_t x = 0; x < spread.size(); ++x) spread[x] = spread_bits(x);
  std::vector<double> v(std::size_t{1} << (2 * n));
  for (Index r = 0; r < dim; ++r) {
    const std::size_t hi = 2 * spread[static_cast<std::size_t>(r)];
    for (Index c = 0; c < dim; ++c) v[hi + spread[static_cast<std::size_t>(c)]] = rho(r, c);
  }
  for (int site = 0; site < n; ++site) {
    const std::size_t stride = std::size_t{1} << (2 * (n - 1 - site));
    for (std::size_t base = 0; base < v.size(); base += 4 * stride) {
      for (std::size_t off = 0; off < stride; ++off) {
        const std::size_t k = base + off;
        const double m00 = v[k], m01 = v[k + stride], m10 = v[k + 2 * stride],
                     m11 = v[k + 3 * stride];
        v[k] = 0.5 * (m00 + m11);
        v[k + stride] = 0.5 * (m01 + m10);
        v[k + 2 * stride] = 0.5 * (m01 - m10);
        v[k + 3 * stride] = 0.5 * (m00 - m11);
      }
    }
  }

  // Undo the Hadamard rotation: X <-> Z, Y -> -Y.
  std::vector<double> out(v.size());
  for (std::size_t g = 0; g < out.size(); ++g) {
    std::size_t rotated = 0;
    int ys = 0;
    for (int site = 0; site < n; ++site) {
      const std::size_t shift = 2 * static_cast<std::size_t>(n - 1 - site);
      std::size_t gamma = (g >> shift) & 3U;
      if (gamma == 2) ++ys;
      if (gamma == 1 || gamma == 3) gamma ^= 2U;
      rotated |= gamma << shift;
    }
    // i^{#Y} from the Y map and (-1)^{#Y} from the rotation; odd #Y vanish.
    out[g] = (ys & 1) ? 0.0 : ((ys / 2) & 1 ? -v[rotated] : v[rotated]);
  }
  return out;
}

DenseOperator thermal_ising_dense(const ThermalSpec& spec) {
  const auto a = thermal_ising_coefficients(spec);
  std::vector<Complex> c(a.begin(), a.end());
  return from_pauli_coefficients(c, spec.N);
}

RealTensorTrain thermal_ising(const ThermalSpec& spec, double tt_tol) {
  const auto a = thermal_ising_coefficients(spec);
  const std::vector<Index> dims(static_cast<std::size_t>(spec.N), 4);
  return dense_to_tt(a, dims, tt_tol);
}

}  // namespace ttqst
