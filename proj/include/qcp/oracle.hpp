// Copyright 2026 The qcp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brute-force ground truth, deliberately naive: explicit symmetric
// projectors, the optimal measurement by dense eigendecomposition, Helstrom
// trace-norm errors, and Monte Carlo Haar averaging.  Everything the
// analytic formulas are tested against lives here.
//
// Tensor legs are ordered [System 1 | System 0 | System 2], so both
// hypothesis projector products act on contiguous leg ranges.  The first
// tensor factor is the most significant index.  This ordering is also the
// wire convention of the operator dump format below.

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcp/combinatorics.hpp"

namespace qcp::oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct PureStateVector {
  Vector amplitudes;
};

struct DensityOperator {
  Matrix matrix;
};

/// Two-outcome measurement {I - e2, e2}; for the optimal construction e2 is
/// a projector.
struct PovmPair {
  Matrix e2;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

class DimCapError : public std::runtime_error {
 public:
  explicit DimCapError(const std::string& what) : std::runtime_error(what) {}
};

/// Dense dimension cap; QCP_DIM_CAP overrides the default of 4096.
inline long long default_dim_cap() {
  if (const char* env = std::getenv("QCP_DIM_CAP")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 4096;
}

/// d^n with an overflow guard; throws DimCapError past the cap.
inline long long checked_dim(int d, int legs, long long cap) {
  long long dim = 1;
  for (int i = 0; i < legs; ++i) {
    if (dim > cap / d) throw DimCapError("dense dimension exceeds cap " + std::to_string(cap));
    dim *= d;
  }
  if (dim > cap) throw DimCapError("dense dimension exceeds cap " + std::to_string(cap));
  return dim;
}

/// Deterministic per-sample stream: the same (seed, index) pair yields the
/// same generator no matter how samples are scheduled.
inline std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z = z ^ (z >> 31);
  return std::mt19937_64(z);
}

/// Haar-random pure state: complex standard normals, normalized.
inline PureStateVector haar_random_pure(int d, std::mt19937_64& rng) {
  if (d < 2) throw std::invalid_argument("haar_random_pure: d must be >= 2");
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(d);
  for (int i = 0; i < d; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  v /= v.norm();
  return {v};
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline Vector tensor_power(const Vector& v, int copies) {
  Vector out = Vector::Ones(1);
  for (int i = 0; i < copies; ++i) out = kron(out, v);
  return out;
}

/// Projector onto the totally symmetric subspace of (C^d)^{⊗L}, built as
/// V V^dag where V's columns are the normalized symmetrized occupation
/// basis vectors.  Idempotent and of trace C(L+d-1, d-1) by construction.
inline Matrix symmetric_projector(int copies, int d, long long cap = default_dim_cap()) {
  if (copies < 0 || d < 2) throw std::invalid_argument("symmetric_projector: bad arguments");
  const long long dim = checked_dim(d, copies, cap);
  // Group computational basis states by occupation signature.
  std::map<std::vector<int>, std::vector<long long>> classes;
  for (long long idx = 0; idx < dim; ++idx) {
    std::vector<int> counts(d, 0);
    long long rest = idx;
    for (int leg = 0; leg < copies; ++leg) {
      counts[rest % d]++;
      rest /= d;
    }
    classes[counts].push_back(idx);
  }
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(classes.size()));
  Eigen::Index col = 0;
  for (const auto& [counts, members] : classes) {
    const double amp = 1.0 / std::sqrt(static_cast<double>(members.size()));
    for (long long idx : members) v(idx, col) = amp;
    ++col;
  }
  return (v * v.transpose()).cast<Complex>();
}

struct AveragedPair {
  DensityOperator first;   // (S_{n1} ⊗ S_{m+n2}) / a1
  DensityOperator second;  // (S_{m+n1} ⊗ S_{n2}) / a2
};

/// The two Haar-averaged hypothesis operators, unit trace.
inline AveragedPair averaged_states(const ProblemSize& s, long long cap = default_dim_cap()) {
  checked_dim(s.d, s.total(), cap);
  const Matrix first =
      kron(symmetric_projector(s.n1, s.d, cap), symmetric_projector(s.m + s.n2, s.d, cap)) /
      to_double(a1(s));
  const Matrix second =
      kron(symmetric_projector(s.m + s.n1, s.d, cap), symmetric_projector(s.n2, s.d, cap)) /
      to_double(a2(s));
  return {{first}, {second}};
}

/// first - second; the optimal measurement projects onto its strictly
/// negative eigenspaces.
inline Matrix difference_operator(const ProblemSize& s, long long cap = default_dim_cap()) {
  const AveragedPair pair = averaged_states(s, cap);
  return pair.first.matrix - pair.second.matrix;
}

// Eigenvalues with magnitude below this count as zero and stay out of the
// measurement (the construction wants strictly negative eigenspaces).
inline constexpr double kEigenvalueZeroTol = 1e-10;

/// Optimal measurement: projector onto the strictly negative eigenspaces of
/// the averaged difference operator.
inline PovmPair optimal_povm(const ProblemSize& s, long long cap = default_dim_cap()) {
  const Matrix diff = difference_operator(s, cap);
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("optimal_povm: eigendecomposition failed");
  const auto& vals = es.eigenvalues();
  Eigen::Index count = 0;
  while (count < vals.size() && vals(count) < -kEigenvalueZeroTol) ++count;
  const Matrix neg = es.eigenvectors().leftCols(count);
  Matrix e2 = Matrix::Zero(diff.rows(), diff.cols());
  if (count > 0) e2 = neg * neg.adjoint();
  return {e2};
}

/// Helstrom error 1/2 (1 - ||s1 - s2||_1 / 2) between equiprobable states.
inline double helstrom_error(const DensityOperator& s1, const DensityOperator& s2) {
  if (s1.matrix.rows() != s2.matrix.rows() || s1.matrix.cols() != s2.matrix.cols())
    throw std::invalid_argument("helstrom_error: shape mismatch");
  const Matrix diff = s1.matrix - s2.matrix;
  const double asym = (diff - diff.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-10)
    throw std::invalid_argument("helstrom_error: difference is not Hermitian (|.| = " +
                                std::to_string(asym) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("helstrom_error: eigendecomposition failed");
  const double trace_norm = es.eigenvalues().cwiseAbs().sum();
  return 0.5 * (1.0 - 0.5 * trace_norm);
}

/// Error probability of a two-outcome measurement on the pure-state pair:
///   1/2 Tr[(rho1^{n1} ⊗ rho2^{m+n2}) e2] + 1/2 Tr[(rho1^{m+n1} ⊗ rho2^{n2}) (I - e2)]
inline double error_of_povm(const PureStateVector& psi1, const PureStateVector& psi2,
                            const ProblemSize& s, const PovmPair& povm) {
  if (psi1.amplitudes.size() != s.d || psi2.amplitudes.size() != s.d)
    throw std::invalid_argument("error_of_povm: state dimension does not match size");
  long long dim = 1;
  for (int i = 0; i < s.total(); ++i) dim *= s.d;
  if (povm.e2.rows() != dim || povm.e2.cols() != dim)
    throw std::invalid_argument("error_of_povm: POVM shape does not match size");
  const Vector a = kron(tensor_power(psi1.amplitudes, s.n1),
                        tensor_power(psi2.amplitudes, s.m + s.n2));
  const Vector b = kron(tensor_power(psi1.amplitudes, s.m + s.n1),
                        tensor_power(psi2.amplitudes, s.n2));
  const double pa = std::real(a.dot(povm.e2 * a));
  const double pb = std::real(b.dot(povm.e2 * b));
  return 0.5 * pa + 0.5 * (1.0 - pb);
}

/// Monte Carlo estimate of the averaged error of the optimal measurement
/// over independent Haar pairs.  Deterministic for a given (seed, samples).
inline McEstimate mc_average_error(const ProblemSize& s, int samples, std::uint64_t seed,
                                   long long cap = default_dim_cap()) {
  if (samples < 1) throw std::invalid_argument("mc_average_error: samples must be >= 1");
  const PovmPair povm = optimal_povm(s, cap);
  double mean = 0.0;
  double m2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    auto rng = sample_stream(seed, static_cast<std::uint64_t>(i));
    const PureStateVector psi1 = haar_random_pure(s.d, rng);
    const PureStateVector psi2 = haar_random_pure(s.d, rng);
    const double p = error_of_povm(psi1, psi2, s, povm);
    const double delta = p - mean;
    mean += delta / (i + 1);
    m2 += delta * (p - mean);
  }
  const double variance = samples > 1 ? m2 / (samples - 1) : 0.0;
  return {mean, std::sqrt(variance / samples)};
}

// ---- Operator dump format -------------------------------------------------
//
// 16-byte header: magic "QCPO", uint32 d, uint32 legs, tag "102\0" (the leg
// ordering); then rows*rows complex entries, row-major, as little-endian
// (re, im) doubles.

static_assert(std::endian::native == std::endian::little,
              "operator dump format assumes a little-endian host");

inline void write_operator(const std::string& path, const Matrix& op, int d, int legs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_operator: cannot open " + path);
  const char magic[4] = {'Q', 'C', 'P', 'O'};
  const char tag[4] = {'1', '0', '2', '\0'};
  const std::uint32_t d32 = static_cast<std::uint32_t>(d);
  const std::uint32_t legs32 = static_cast<std::uint32_t>(legs);
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&d32), 4);
  out.write(reinterpret_cast<const char*>(&legs32), 4);
  out.write(tag, 4);
  for (Eigen::Index i = 0; i < op.rows(); ++i) {
    for (Eigen::Index j = 0; j < op.cols(); ++j) {
      const double re = op(i, j).real();
      const double im = op(i, j).imag();
      out.write(reinterpret_cast<const char*>(&re), 8);
      out.write(reinterpret_cast<const char*>(&im), 8);
    }
  }
  if (!out) throw std::runtime_error("write_operator: short write to " + path);
}

inline Matrix read_operator(const std::string& path, int* d_out = nullptr,
                            int* legs_out = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_operator: cannot open " + path);
  char magic[4], tag[4];
  std::uint32_t d32 = 0, legs32 = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&d32), 4);
  in.read(reinterpret_cast<char*>(&legs32), 4);
  in.read(tag, 4);
  if (!in || std::string(magic, 4) != "QCPO")
    throw std::runtime_error("read_operator: bad magic in " + path);
  if (std::string(tag, 4) != std::string("102\0", 4))
    throw std::runtime_error("read_operator: unknown leg-ordering tag in " + path);
  long long dim = 1;
  for (std::uint32_t i = 0; i < legs32; ++i) dim *= d32;
  Matrix op(dim, dim);
  for (long long i = 0; i < dim; ++i) {
    for (long long j = 0; j < dim; ++j) {
      double re = 0, im = 0;
      in.read(reinterpret_cast<char*>(&re), 8);
      in.read(reinterpret_cast<char*>(&im), 8);
      op(i, j) = Complex(re, im);
    }
  }
  if (!in) throw std::runtime_error("read_operator: truncated payload in " + path);
  if (d_out) *d_out = static_cast<int>(d32);
  if (legs_out) *legs_out = static_cast<int>(legs32);
  return op;
}

}  // namespace qcp::oracle
