#pragma once

#include <span>
#include <vector>

namespace blowup {

// |S^(N-1)|, the surface measure of the unit sphere in R^N (2 for N = 1).
double sphere_area(int N);
// |B_R| in R^N.
double ball_volume(int N, double R);

// Vertex-centred radial grid on [0, R]: node j owns the shell between the
// neighbouring midpoints (the first from 0, the last up to R). Spacing grows
// geometrically by `ratio` per cell, clustering nodes near the origin.
class RadialGrid {
 public:
  RadialGrid(int N, double R, int cells, double ratio = 1.0);
  static RadialGrid from_nodes(int N, std::vector<double> nodes);

  int dimension() const { return N_; }
  double radius() const { return nodes_.back(); }
  int cells() const { return static_cast<int>(nodes_.size()) - 1; }
  double ratio() const { return ratio_; }
  std::size_t size() const { return nodes_.size(); }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> volumes() const { return volumes_; }
  // area(r_{j+1/2}) / (r_{j+1} - r_j), j = 0..M-1.
  std::span<const double> face_coefficients() const { return faces_; }

  // Same radius, twice the cells, sqrt of the ratio: every old node is kept.
  RadialGrid refined() const;

  double mass(std::span<const double> u) const;
  int nodes_within(double radius) const;
  // Index j with r_j <= x < r_{j+1} (clamped to the last cell).
  std::size_t locate(double x) const;

 private:
  RadialGrid(int N, std::vector<double> nodes, double ratio);
  void build_geometry();

  int N_;
  double ratio_;
  std::vector<double> nodes_;
  std::vector<double> volumes_;
  std::vector<double> faces_;
};

}  // namespace blowup
