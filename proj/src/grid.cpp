#include "blowup/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blowup/errors.hpp"

namespace blowup {

double sphere_area(int N) {
  if (N < 1) throw DomainError("dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

double ball_volume(int N, double R) { return sphere_area(N) * std::pow(R, N) / N; }

RadialGrid::RadialGrid(int N, double R, int cells, double ratio) : N_(N), ratio_(ratio) {
  if (N < 1) throw DomainError("grid dimension must be >= 1");
  if (!(R > 0.0)) throw DomainError("grid radius must be positive");
  if (cells < 2) throw DomainError("grid needs at least two cells");
  if (!(ratio >= 1.0)) throw DomainError("grid ratio must be >= 1");
  nodes_.resize(cells + 1);
  for (int j = 0; j <= cells; ++j) {
    if (ratio == 1.0) {
      nodes_[j] = R * j / cells;
    } else {
      nodes_[j] = R * std::expm1(j * std::log(ratio)) / std::expm1(cells * std::log(ratio));
    }
  }
  nodes_.front() = 0.0;
  nodes_.back() = R;
  build_geometry();
}

RadialGrid::RadialGrid(int N, std::vector<double> nodes, double ratio)
    : N_(N), ratio_(ratio), nodes_(std::move(nodes)) {
  build_geometry();
}

RadialGrid RadialGrid::from_nodes(int N, std::vector<double> nodes) {
  if (N < 1) throw DomainError("grid dimension must be >= 1");
  if (nodes.size() < 3 || nodes.front() != 0.0) throw DomainError("grid must start at r = 0");
  for (std::size_t j = 1; j < nodes.size(); ++j)
    if (!(nodes[j] > nodes[j - 1])) throw DomainError("grid nodes must increase strictly");
  return RadialGrid(N, std::move(nodes), 0.0);
}

void RadialGrid::build_geometry() {
  const std::size_t n = nodes_.size();
  const double area = sphere_area(N_);
  volumes_.assign(n, 0.0);
  faces_.assign(n - 1, 0.0);
  double inner = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double outer = j + 1 < n ? 0.5 * (nodes_[j] + nodes_[j + 1]) : nodes_.back();
    volumes_[j] = area / N_ * (std::pow(outer, N_) - std::pow(inner, N_));
    if (j + 1 < n) faces_[j] = area * std::pow(outer, N_ - 1) / (nodes_[j + 1] - nodes_[j]);
    inner = outer;
  }
}

RadialGrid RadialGrid::refined() const {
  if (ratio_ == 0.0) {
    std::vector<double> fine;
    for (std::size_t j = 0; j + 1 < nodes_.size(); ++j) {
      fine.push_back(nodes_[j]);
      fine.push_back(0.5 * (nodes_[j] + nodes_[j + 1]));
    }
    fine.push_back(nodes_.back());
    return from_nodes(N_, std::move(fine));
  }
  return RadialGrid(N_, radius(), 2 * cells(), std::sqrt(ratio_));
}

double RadialGrid::mass(std::span<const double> u) const {
  if (u.size() != nodes_.size()) throw DomainError("field size does not match grid");
  double m = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) m += volumes_[j] * u[j];
  return m;
}

int RadialGrid::nodes_within(double radius) const {
  return static_cast<int>(std::upper_bound(nodes_.begin(), nodes_.end(), radius) - nodes_.begin());
}

std::size_t RadialGrid::locate(double x) const {
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  std::size_t j = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return std::min(j, nodes_.size() - 2);
}

}  // namespace blowup
