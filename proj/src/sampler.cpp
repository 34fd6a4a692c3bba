#include "redamge/sampler.hpp"

#include "redamge/error.hpp"

#include <cmath>
#include <numbers>

namespace redamge {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 make_engine(const StreamKey& key) {
  std::uint64_t h = splitmix64(key.seed);
  h = splitmix64(h ^ key.level);
  h = splitmix64(h ^ key.index);
  h = splitmix64(h ^ static_cast<std::uint64_t>(key.purpose));
  return std::mt19937_64(h);
}

std::vector<double> FieldSample::k(std::size_t level) const {
  std::vector<double> out(u.at(level).size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(u[level][i]);
  return out;
}

FieldSampler::FieldSampler(const Mesh& mesh, const SamplerParams& p) : params_(p) {
  require(p.sigma >= 0.0 && p.corr_len >= 0.0 && p.nu > 0.0 && p.n_modes >= 1, ErrorCode::invalid_argument,
          "FieldSampler: invalid sampler parameters");
  const int d = mesh.dim;
  std::array<index_t, 3> m{1, 1, 1};
  for (int a = 0; a < d; ++a) m[a] = std::min(p.n_modes, mesh.cells[a]);
  const index_t nmodes = m[0] * m[1] * m[2];
  std::vector<std::array<index_t, 3>> modes;
  modes.reserve(nmodes);
  for (index_t i = 0; i < m[0]; ++i)
    for (index_t j = 0; j < m[1]; ++j)
      for (index_t k = 0; k < m[2]; ++k) modes.push_back({i, j, k});

  const double expo = p.nu + 0.5 * d;
  double total = 0.0;
  lambda_.resize(nmodes);
  for (index_t q = 0; q < nmodes; ++q) {
    const double j2 = double(modes[q][0]) * modes[q][0] + double(modes[q][1]) * modes[q][1] +
                      double(modes[q][2]) * modes[q][2];
    lambda_[q] = std::pow(1.0 + p.corr_len * p.corr_len * j2, -expo);
    total += lambda_[q];
  }
  for (auto& l : lambda_) l /= total;

  basis_.resize(mesh.num_elements, nmodes);
  for (index_t e = 0; e < mesh.num_elements; ++e)
    for (index_t q = 0; q < nmodes; ++q) {
      double phi = 1.0;
      for (int a = 0; a < d; ++a) {
        const index_t j = modes[q][a];
        phi *= j == 0 ? 1.0 : std::numbers::sqrt2 * std::cos(std::numbers::pi * j * mesh.centroid[e][a]);
      }
      basis_(e, q) = std::sqrt(lambda_[q]) * phi;
    }
}

std::vector<double> FieldSampler::sample_xi(const StreamKey& key) const {
  auto eng = make_engine(key);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> xi(basis_.cols());
  for (auto& x : xi) x = normal(eng);
  return xi;
}

std::vector<double> FieldSampler::fine_field(const std::vector<double>& xi) const {
  require(static_cast<Eigen::Index>(xi.size()) == basis_.cols(), ErrorCode::dimension_mismatch,
          "FieldSampler::fine_field: wrong number of coefficients");
  Eigen::Map<const Eigen::VectorXd> x(xi.data(), basis_.cols());
  Eigen::VectorXd u = params_.sigma * (basis_ * x);
  return {u.data(), u.data() + u.size()};
}

FieldSample FieldSampler::sample_fine_field(const StreamKey& key) const {
  FieldSample s;
  s.xi = sample_xi(key);
  s.u.push_back(fine_field(s.xi));
  return s;
}

std::vector<double> project_field(const std::vector<double>& u_fine, const std::vector<double>& fine_measure,
                                  const Relation& AE_element) {
  require(static_cast<index_t>(u_fine.size()) == AE_element.cols() &&
              static_cast<index_t>(fine_measure.size()) == AE_element.cols(),
          ErrorCode::dimension_mismatch, "project_field: size mismatch");
  std::vector<double> out(AE_element.rows(), 0.0);
  for (index_t a = 0; a < AE_element.rows(); ++a) {
    double w = 0.0, s = 0.0;
    for (index_t e : AE_element.row(a)) {
      s += fine_measure[e] * u_fine[e];
      w += fine_measure[e];
    }
    require(w > 0.0, ErrorCode::invalid_argument, "project_field: empty AE");
    out[a] = s / w;
  }
  return out;
}

}  // namespace redamge
