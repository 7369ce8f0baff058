#pragma once

#include <vector>

#include "flrwb/four_vector.hpp"

namespace flrwb {

/// Product quadrature on the unit sphere: Gauss-Legendre in the polar cosine
/// times a uniform midpoint rule in azimuth. Weights sum to 4 pi exactly (to
/// rounding); low-degree monomial exactness is validated at construction.
///
/// When the node set is symmetric under inversion (even azimuth count), a
/// folded view pairs omega with -omega: half the nodes with doubled weights.
/// Collision integrands are even in omega, so summing the folded view equals
/// summing the full set.
class SphereQuadrature {
  public:
    SphereQuadrature(int polar_order, int azimuth_order);

    int size() const { return static_cast<int>(weights_.size()); }
    const std::vector<Vec3>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    int folded_size() const { return static_cast<int>(folded_w_.size()); }
    bool is_folded() const { return folded_size() < size(); }
    /// SoA access for kernels (folded view; equals the full set if no fold).
    const std::vector<double>& fx() const { return folded_x_; }
    const std::vector<double>& fy() const { return folded_y_; }
    const std::vector<double>& fz() const { return folded_z_; }
    const std::vector<double>& fw() const { return folded_w_; }

    double weight_sum() const { return weight_sum_; }

    int polar_order() const { return polar_order_; }
    int azimuth_order() const { return azimuth_order_; }

  private:
    int polar_order_;
    int azimuth_order_;
    std::vector<Vec3> nodes_;
    std::vector<double> weights_;
    std::vector<double> folded_x_, folded_y_, folded_z_, folded_w_;
    double weight_sum_ = 0.0;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace flrwb
