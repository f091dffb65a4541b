#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "starkhhg/execution.hpp"

namespace starkhhg {

// Quasi-discrete zero-order Hankel transform on Bessel-zero nodes.
//
//   F(rho) = 2 pi int_0^inf f(r) J0(2 pi rho r) r dr   (self-inverse pair)
//
// Nodes r_n = j_n R / j_{N+1} and rho_m = j_m / (2 pi R). The scaled kernel
// is symmetric and orthogonal to ~1e-10 for N = 128, so the same matrix
// serves both directions.
class HankelTransform {
 public:
  HankelTransform(int nodes, double r_max);

  int size() const { return static_cast<int>(radii_.size()); }
  double r_max() const { return r_max_; }
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& frequencies() const { return frequencies_; }
  // Weights for int_0^R f(r) r dr on the radial nodes.
  const std::vector<double>& radial_weights() const { return radial_weights_; }
  // Weights for int_0^V F(rho) rho drho on the frequency nodes.
  const std::vector<double>& frequency_weights() const {
    return frequency_weights_;
  }

  std::vector<std::complex<double>> forward(
      std::span<const std::complex<double>> f) const;
  std::vector<std::complex<double>> inverse(
      std::span<const std::complex<double>> big_f) const;

  // Row-wise transform of a (omega x node) matrix.
  Eigen::MatrixXcd forward_rows(const Eigen::MatrixXcd& rows,
                                Execution exec = Execution::parallel) const;
  Eigen::MatrixXcd inverse_rows(const Eigen::MatrixXcd& rows,
                                Execution exec = Execution::parallel) const;

 private:
  Eigen::MatrixXcd apply_rows(const Eigen::MatrixXcd& rows,
                              const std::vector<double>& in_scale,
                              const std::vector<double>& out_scale,
                              Execution exec) const;

  double r_max_;
  double band_limit_;
  Eigen::MatrixXd kernel_;
  std::vector<double> radii_, frequencies_;
  std::vector<double> abs_j1_;
  std::vector<double> radial_weights_, frequency_weights_;
  std::vector<double> r_scale_, rho_scale_;
};

}  // namespace starkhhg
