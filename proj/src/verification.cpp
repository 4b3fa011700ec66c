#include "wickmix/verification.hpp"

#include <cmath>

namespace wickmix {

Agreement compare_with_estimate(double exact, const MomentEstimate& estimate) {
  Agreement out;
  const double diff = exact - estimate.value;
  if (estimate.std_error > 0.0) {
    out.z = diff / estimate.std_error;
  } else {
    out.z = diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
  }
  out.relative_se = exact != 0.0 ? estimate.std_error / std::abs(exact) : 0.0;
  if (exact != 0.0 && out.relative_se > Agreement::kMaxRelativeError) {
    out.status = Agreement::Status::inconclusive;
  } else if (std::abs(out.z) <= Agreement::kBand) {
    out.status = Agreement::Status::pass;
  } else {
    out.status = Agreement::Status::fail;
  }
  return out;
}

const char* to_string(Agreement::Status status) {
  switch (status) {
    case Agreement::Status::pass:
      return "pass";
    case Agreement::Status::fail:
      return "fail";
    case Agreement::Status::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

std::vector<MultiIndex> all_multisets(int dimension, std::size_t max_size) {
  std::vector<MultiIndex> out;
  std::vector<int> current;
  // Non-decreasing sequences over 1..dimension.
  std::function<void(int)> extend = [&](int from) {
    if (!current.empty()) out.emplace_back(current, dimension);
    if (current.size() == max_size) return;
    for (int a = from; a <= dimension; ++a) {
      current.push_back(a);
      extend(a);
      current.pop_back();
    }
  };
  extend(1);
  std::stable_sort(out.begin(), out.end(),
                   [](const MultiIndex& a, const MultiIndex& b) { return a.size() < b.size(); });
  return out;
}

namespace {

Eigen::MatrixXd matrix(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(rows.size(), rows.begin()->size());
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Eigen::VectorXd vector(std::initializer_list<double> values) {
  Eigen::VectorXd v(values.size());
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

constexpr std::size_t kMaxOrder = 5;

VerificationCase gaussian_case(std::string name, const Eigen::MatrixXd& r) {
  CovarianceMatrix cov(r);
  return {"gaussian", std::move(name), gaussian_sampler(cov), all_multisets(cov.dimension(), kMaxOrder),
          [cov](const MultiIndex& a) { return wick_moment(a, cov); }};
}

VerificationCase mixture_case(std::string name, MixingDistribution mix, const Eigen::MatrixXd& r) {
  LocationMixtureModel model(std::move(mix), CovarianceMatrix(r));
  return {"location_mixture", std::move(name), location_mixture_sampler(model),
          all_multisets(model.dimension(), kMaxOrder),
          [model](const MultiIndex& a) { return location_mixture_moment(model, a); }};
}

VerificationCase hyperbolic_case(std::string name, const HyperbolicModel& model) {
  return {"hyperbolic", std::move(name), hyperbolic_sampler(model),
          all_multisets(model.dimension(), kMaxOrder),
          [model](const MultiIndex& a) { return hyperbolic_moment(model, a); }};
}

}  // namespace

std::vector<VerificationCase> standard_grid() {
  const Eigen::MatrixXd r1 = matrix({{1.7}});
  const Eigen::MatrixXd r2 = matrix({{1.0, 0.6}, {0.6, 2.0}});
  const Eigen::MatrixXd r3 = matrix({{1.0, 0.3, -0.2}, {0.3, 1.5, 0.4}, {-0.2, 0.4, 0.8}});

  std::vector<VerificationCase> grid;
  grid.push_back(gaussian_case("gaussian-d1", r1));
  grid.push_back(gaussian_case("gaussian-d2", r2));
  grid.push_back(gaussian_case("gaussian-d3", r3));

  grid.push_back(mixture_case("bernoulli-d1", mixing::Bernoulli{vector({1.2})}, matrix({{0.5}})));
  grid.push_back(mixture_case("bernoulli-d2", mixing::Bernoulli{vector({1.0, -0.5})}, r2));
  grid.push_back(
      mixture_case("deterministic-d2", mixing::Deterministic{vector({0.7, -1.1})}, r2));
  grid.push_back(mixture_case("atoms3-d3",
                              mixing::DiscreteAtoms{{{vector({0.5, -1.0, 0.2}), 0.2},
                                                     {vector({-0.3, 0.4, 1.0}), 0.5},
                                                     {vector({1.1, 0.0, -0.6}), 0.3}}},
                              r3));
  grid.push_back(mixture_case("atoms4-d2",
                              mixing::DiscreteAtoms{{{vector({1.0, 1.0}), 0.1},
                                                     {vector({-1.0, 0.5}), 0.2},
                                                     {vector({0.0, -1.5}), 0.3},
                                                     {vector({2.0, 0.0}), 0.4}}},
                              matrix({{0.6, -0.2}, {-0.2, 0.9}})));

  grid.push_back(hyperbolic_case(
      "hyperbolic-d1", HyperbolicModel(vector({0.3}), vector({0.5}), matrix({{1.0}}),
                                       GIGParams(2.0, 3.0, 1.0))));
  grid.push_back(hyperbolic_case(
      "hyperbolic-d2", HyperbolicModel(vector({0.2, -0.1}), vector({0.3, -0.2}),
                                       matrix({{1.25, 0.5}, {0.5, 1.0}}),
                                       GIGParams(3.0, 2.0, -0.5))));
  grid.push_back(hyperbolic_case(
      "symmetric-hyperbolic-d2",
      HyperbolicModel(vector({0.0, 0.0}), vector({0.0, 0.0}), matrix({{1.0, 0.0}, {0.0, 1.0}}),
                      GIGParams(1.0, 1.0, 0.5))));
  Eigen::MatrixXd delta3 = matrix({{2.0, 0.3, 0.0}, {0.3, 0.5, 0.1}, {0.0, 0.1, 1.0}});
  delta3 /= std::cbrt(delta3.determinant());
  grid.push_back(hyperbolic_case(
      "hyperbolic-d3", HyperbolicModel(vector({0.1, 0.0, -0.2}), vector({0.2, -0.1, 0.1}), delta3,
                                       GIGParams(4.0, 1.5, 1.5))));
  return grid;
}

Eigen::MatrixXd random_covariance(int dimension, Rng& rng) {
  Eigen::MatrixXd g(dimension, dimension + 1);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.normal();
  }
  Eigen::MatrixXd r = g * g.transpose() / static_cast<double>(dimension + 1);
  return 0.5 * (r + r.transpose());
}

MultiIndex random_index(int dimension, std::size_t size, Rng& rng) {
  std::vector<int> entries(size);
  for (auto& e : entries) {
    e = 1 + static_cast<int>(rng.uniform() * dimension);
    if (e > dimension) e = dimension;
  }
  return MultiIndex(std::move(entries), dimension);
}

std::vector<GIGParams> gig_parameter_grid() {
  std::vector<GIGParams> out;
  for (double psi : {0.5, 1.0, 2.0, 5.0}) {
    for (double chi : {0.5, 1.0, 2.0, 5.0}) {
      for (double lambda : {-2.0, -0.5, 0.0, 0.5, 3.0}) out.emplace_back(psi, chi, lambda);
    }
  }
  return out;
}

}  // namespace wickmix
