#include "starkhhg/hankel.hpp"

#include <cmath>

#include <boost/math/special_functions/bessel.hpp>

#include "starkhhg/errors.hpp"
#include "starkhhg/units.hpp"

namespace starkhhg {

using units::pi;

HankelTransform::HankelTransform(int nodes, double r_max) : r_max_(r_max) {
  if (nodes < 2) throw DomainError("Hankel transform needs >= 2 nodes");
  if (!(r_max > 0.0)) throw DomainError("Hankel transform needs r_max > 0");
  std::vector<double> zeros(nodes + 1);
  for (int i = 0; i < nodes + 1; ++i) {
    zeros[i] = boost::math::cyl_bessel_j_zero(0.0, i + 1);
  }
  const double s = zeros[nodes];
  band_limit_ = s / (2.0 * pi * r_max);
  radii_.resize(nodes);
  frequencies_.resize(nodes);
  abs_j1_.resize(nodes);
  radial_weights_.resize(nodes);
  frequency_weights_.resize(nodes);
  r_scale_.resize(nodes);
  rho_scale_.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    radii_[i] = zeros[i] * r_max / s;
    frequencies_[i] = zeros[i] / (2.0 * pi * r_max);
    abs_j1_[i] = std::abs(boost::math::cyl_bessel_j(1, zeros[i]));
    const double j1sq = abs_j1_[i] * abs_j1_[i];
    radial_weights_[i] = 2.0 * r_max * r_max / (s * s * j1sq);
    frequency_weights_[i] = 2.0 * band_limit_ * band_limit_ / (s * s * j1sq);
    r_scale_[i] = r_max / abs_j1_[i];
    rho_scale_[i] = band_limit_ / abs_j1_[i];
  }
  kernel_.resize(nodes, nodes);
  for (int m = 0; m < nodes; ++m) {
    for (int n = 0; n < nodes; ++n) {
      kernel_(m, n) = 2.0 * boost::math::cyl_bessel_j(0, zeros[m] * zeros[n] / s) /
                      (abs_j1_[m] * abs_j1_[n] * s);
    }
  }
}

std::vector<std::complex<double>> HankelTransform::forward(
    std::span<const std::complex<double>> f) const {
  Eigen::MatrixXcd row(1, size());
  for (int i = 0; i < size(); ++i) row(0, i) = f[i];
  const Eigen::MatrixXcd out = forward_rows(row, Execution::serial);
  return {out.data(), out.data() + size()};
}

std::vector<std::complex<double>> HankelTransform::inverse(
    std::span<const std::complex<double>> big_f) const {
  Eigen::MatrixXcd row(1, size());
  for (int i = 0; i < size(); ++i) row(0, i) = big_f[i];
  const Eigen::MatrixXcd out = inverse_rows(row, Execution::serial);
  return {out.data(), out.data() + size()};
}

Eigen::MatrixXcd HankelTransform::forward_rows(const Eigen::MatrixXcd& rows,
                                               Execution exec) const {
  return apply_rows(rows, r_scale_, rho_scale_, exec);
}

Eigen::MatrixXcd HankelTransform::inverse_rows(const Eigen::MatrixXcd& rows,
                                               Execution exec) const {
  return apply_rows(rows, rho_scale_, r_scale_, exec);
}

Eigen::MatrixXcd HankelTransform::apply_rows(const Eigen::MatrixXcd& rows,
                                             const std::vector<double>& in_scale,
                                             const std::vector<double>& out_scale,
                                             Execution exec) const {
  if (rows.cols() != size()) {
    throw DomainError("Hankel transform: wrong number of radial samples");
  }
  const int n = size();
  const long n_rows = rows.rows();
  Eigen::MatrixXcd out(n_rows, n);
  auto one_row = [&](long r) {
    Eigen::VectorXcd scaled(n);
    for (int i = 0; i < n; ++i) scaled(i) = rows(r, i) * in_scale[i];
    Eigen::VectorXcd y = kernel_ * scaled;
    for (int i = 0; i < n; ++i) out(r, i) = y(i) / out_scale[i];
  };
  if (exec == Execution::serial) {
    for (long r = 0; r < n_rows; ++r) one_row(r);
  } else {
#pragma omp parallel for schedule(static)
    for (long r = 0; r < n_rows; ++r) one_row(r);
  }
  return out;
}

}  // namespace starkhhg
