#pragma once

// Log-normal permeability from a tensor cosine expansion evaluated at element
// centroids, with coarse fields obtained by measure-weighted log averaging.

#include "redamge/meshtopo.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace redamge {

struct SamplerParams {
  double sigma = 1.0;
  double corr_len = 0.1;
  double nu = 1.0;
  /// Modes per axis, capped at the mesh resolution along that axis.
  index_t n_modes = 64;
};

enum class StreamPurpose : std::uint64_t { field = 1, pilot = 2, main = 3, reference = 4 };

struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t level = 0;
  std::uint64_t index = 0;
  StreamPurpose purpose = StreamPurpose::field;
};

/// Independent engine per key; no state is shared between keys.
std::mt19937_64 make_engine(const StreamKey& key);

struct FieldSample {
  std::vector<double> xi;
  /// Log-field per level, fields[0] on the fine mesh.
  std::vector<std::vector<double>> u;

  std::vector<double> k(std::size_t level) const;
};

class FieldSampler {
public:
  FieldSampler(const Mesh& mesh, const SamplerParams& params);

  index_t num_modes() const { return static_cast<index_t>(basis_.cols()); }
  /// Mode weights lambda_j, normalized to sum to one.
  const std::vector<double>& weights() const { return lambda_; }

  std::vector<double> sample_xi(const StreamKey& key) const;
  /// u = sigma * sum_j sqrt(lambda_j) xi_j phi_j at the element centroids.
  std::vector<double> fine_field(const std::vector<double>& xi) const;
  FieldSample sample_fine_field(const StreamKey& key) const;

private:
  SamplerParams params_;
  std::vector<double> lambda_;
  /// elements x modes, already scaled by sqrt(lambda_j).
  Eigen::MatrixXd basis_;
};

/// Coarse log-field: measure-weighted average of the finer field over each AE.
std::vector<double> project_field(const std::vector<double>& u_fine, const std::vector<double>& fine_measure,
                                  const Relation& AE_element);

}  // namespace redamge
