#include "ighsom/color.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "ighsom/errors.hpp"

namespace ighsom {

PcaBasis fit_pca(const Matrix& features) {
  if (features.empty()) throw ContractError("fit_pca: no samples");
  const auto n = static_cast<Eigen::Index>(features.rows());
  const auto d = static_cast<Eigen::Index>(features.cols());
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(
      features.data().data(), n, d);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw ContractError("fit_pca: eigen decomposition failed");

  PcaBasis basis;
  basis.mean.assign(mean.data(), mean.data() + d);
  const double scale = std::max(1.0, std::abs(solver.eigenvalues()(d - 1)));
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < 3; ++k) {
    auto& comp = basis.components[static_cast<std::size_t>(k)];
    comp.assign(static_cast<std::size_t>(d), 0.0);
    if (k >= d) continue;  // fewer than 3 attributes: zero-padded axis
    const Eigen::Index col = d - 1 - k;  // eigenvalues ascend
    const double ev = std::max(0.0, solver.eigenvalues()(col));
    basis.eigenvalues[static_cast<std::size_t>(k)] = ev;
    if (ev > 1e-12 * scale) ++rank;
    Eigen::VectorXd v = solver.eigenvectors().col(col);
    // Sign convention: largest-magnitude coordinate positive.
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    for (Eigen::Index j = 0; j < d; ++j) comp[static_cast<std::size_t>(j)] = v(j);
  }
  basis.degenerate = rank < 3;
  return basis;
}

std::string to_hex(RgbColor c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

std::array<double, 3> project(std::span<const double> weight, const PcaBasis& basis) {
  if (weight.size() != basis.mean.size()) throw ContractError("project: dimension mismatch");
  std::array<double, 3> p{};
  for (std::size_t k = 0; k < 3; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < weight.size(); ++j) s += (weight[j] - basis.mean[j]) * basis.components[k][j];
    p[k] = s;
  }
  return p;
}

RgbColor unit_color(std::span<const double> weight, const PcaBasis& basis, const ChannelRanges& ranges) {
  const auto p = project(weight, basis);
  std::array<std::uint8_t, 3> ch{};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto [lo, hi] = ranges[k];
    if (!(hi > lo)) {
      ch[k] = 128;
      continue;
    }
    const double scaled = (p[k] - lo) / (hi - lo) * 255.0;
    ch[k] = static_cast<std::uint8_t>(std::clamp(std::floor(scaled + 0.5), 0.0, 255.0));
  }
  return {ch[0], ch[1], ch[2]};
}

ChannelRanges channel_ranges(const Matrix& weights, const PcaBasis& basis) {
  ChannelRanges r{};
  for (std::size_t u = 0; u < weights.rows(); ++u) {
    const auto p = project(weights.row(u), basis);
    for (std::size_t k = 0; k < 3; ++k) {
      if (u == 0) {
        r[k] = {p[k], p[k]};
      } else {
        r[k].min = std::min(r[k].min, p[k]);
        r[k].max = std::max(r[k].max, p[k]);
      }
    }
  }
  return r;
}

std::vector<RgbColor> render_colors(const Matrix& weights, const PcaBasis& basis) {
  const auto ranges = channel_ranges(weights, basis);
  std::vector<RgbColor> out;
  out.reserve(weights.rows());
  for (std::size_t u = 0; u < weights.rows(); ++u) out.push_back(unit_color(weights.row(u), basis, ranges));
  return out;
}

double hue(RgbColor c) {
  if (c.r == c.g && c.g == c.b) return 0.0;
  const double r = c.r, g = c.g, b = c.b;
  double deg = std::atan2(std::numbers::sqrt3 * (g - b), 2.0 * r - g - b) * 180.0 / std::numbers::pi;
  if (deg < 0.0) deg += 360.0;
  if (deg >= 360.0) deg -= 360.0;
  return deg;
}

}  // namespace ighsom
