#include "wickmix/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "wickmix/errors.hpp"

namespace wickmix {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::array<std::uint64_t, 4> kJump = {0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL,
                                                0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
constexpr std::array<std::uint64_t, 4> kLongJump = {0x76e15d3efefdcbbfULL, 0xc5004e441c522fb3ULL,
                                                    0x77710069854ee241ULL, 0x39109bb02acbe635ULL};

}  // namespace

Rng::Rng(RandomStream stream) {
  std::uint64_t x = stream.seed;
  for (auto& word : state_) word = splitmix64(x);
  for (std::uint64_t i = 0; i < stream.stream_id; ++i) long_jump();
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = std::rotl(state_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

void Rng::apply_jump(const std::array<std::uint64_t, 4>& polynomial) {
  std::array<std::uint64_t, 4> acc{};
  for (std::uint64_t word : polynomial) {
    for (int b = 0; b < 64; ++b) {
      if (word & (std::uint64_t{1} << b)) {
        for (int i = 0; i < 4; ++i) acc[i] ^= state_[i];
      }
      next_u64();
    }
  }
  state_ = acc;
  has_spare_ = false;
}

void Rng::jump() { apply_jump(kJump); }
void Rng::long_jump() { apply_jump(kLongJump); }

// ---------------------------------------------------------------------------

Eigen::MatrixXd psd_factor(const CovarianceMatrix& cov) {
  const Eigen::MatrixXd& r = cov.matrix();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(r);
  if (ldlt.info() != Eigen::Success) {
    throw ContractViolation("covariance factorization failed");
  }
  Eigen::VectorXd d = ldlt.vectorD();
  const double norm = std::max(r.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) < -CovarianceMatrix::kPsdTolerance * norm) {
      throw ContractViolation("covariance factorization found a negative pivot " +
                              std::to_string(d(i)));
    }
    d(i) = std::sqrt(std::max(d(i), 0.0));
  }
  Eigen::MatrixXd l = ldlt.matrixL();
  Eigen::MatrixXd factor = ldlt.transpositionsP().transpose() * (l * d.asDiagonal());
  if ((factor * factor.transpose() - r).cwiseAbs().maxCoeff() > 1e-8 * norm) {
    throw ContractViolation("covariance factor does not reproduce the matrix");
  }
  return factor;
}

namespace {

void fill_normal(Rng& rng, Eigen::VectorXd& g) {
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = rng.normal();
}

}  // namespace

Sampler gaussian_sampler(const CovarianceMatrix& cov) {
  Eigen::MatrixXd factor = psd_factor(cov);
  return {cov.dimension(), [factor, g = Eigen::VectorXd(cov.dimension())](
                               Rng& rng, Eigen::VectorXd& out) mutable {
            fill_normal(rng, g);
            out.noalias() = factor * g;
          }};
}

Eigen::VectorXd sample_gaussian(const CovarianceMatrix& cov, Rng& rng) {
  Eigen::VectorXd out(cov.dimension());
  gaussian_sampler(cov).draw(rng, out);
  return out;
}

Sampler location_mixture_sampler(const LocationMixtureModel& model) {
  if (std::holds_alternative<mixing::MomentOracle>(model.mixing())) {
    throw UnsupportedSampling("moment-oracle mixing laws cannot be sampled");
  }
  const auto atoms = as_atoms(model.mixing()).atoms;
  std::vector<double> cumulative;
  double running = 0.0;
  for (const auto& atom : atoms) cumulative.push_back(running += atom.probability);
  Sampler noise = gaussian_sampler(model.noise_cov());
  return {model.dimension(),
          [atoms, cumulative, noise](Rng& rng, Eigen::VectorXd& out) {
            const double u = rng.uniform() * cumulative.back();
            auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
            const std::size_t pick =
                std::min<std::size_t>(it - cumulative.begin(), atoms.size() - 1);
            noise.draw(rng, out);
            out += atoms[pick].location;
          }};
}

Eigen::VectorXd sample_location_mixture(const LocationMixtureModel& model, Rng& rng) {
  Eigen::VectorXd out(model.dimension());
  location_mixture_sampler(model).draw(rng, out);
  return out;
}

// ---------------------------------------------------------------------------

GigSampler::GigSampler(const GIGParams& params)
    : params_(params),
      abs_lambda_(std::abs(params.lambda())),
      omega_(params.omega()),
      scale_(params.scale()),
      invert_(params.lambda() < 0.0) {
  // Standardized law: h(y) = y^(lambda-1) exp(-omega (y + 1/y) / 2).
  const double lm1 = abs_lambda_ - 1.0;
  const double disc = std::sqrt(lm1 * lm1 + omega_ * omega_);
  mode_ = lm1 >= 0.0 ? (lm1 + disc) / omega_ : omega_ / (disc - lm1);
  log_h_mode_ = log_h(mode_);

  // Extremes of (y - mode) sqrt(h(y) / h(mode)) solve
  // y^3 + a y^2 + b y + c = 0; its two positive roots bracket the mode.
  const double a = -(2.0 * (abs_lambda_ + 1.0) / omega_ + mode_);
  const double b = 2.0 * lm1 * mode_ / omega_ - 1.0;
  const double c = mode_;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double arg = std::clamp(-0.5 * q * std::sqrt(-27.0 / (p * p * p)), -1.0, 1.0);
  const double phi = std::acos(arg);
  const double radius = std::sqrt(-4.0 * p / 3.0);
  const double y_minus = radius * std::cos(phi / 3.0 + 4.0 * std::numbers::pi / 3.0) - a / 3.0;
  const double y_plus = radius * std::cos(phi / 3.0) - a / 3.0;
  v_minus_ = (y_minus - mode_) * std::exp(0.5 * (log_h(y_minus) - log_h_mode_));
  v_plus_ = (y_plus - mode_) * std::exp(0.5 * (log_h(y_plus) - log_h_mode_));

  // Region area is (1/2) int h / h(mode); rectangle is 1 x (v+ - v-).
  // int_0^inf h = 2 K_lambda(omega).
  acceptance_ = std::exp(log_bessel_k(abs_lambda_, omega_) - log_h_mode_) / (v_plus_ - v_minus_);
  if (!(acceptance_ >= kMinAcceptance) || !(y_minus > 0.0) || !(y_plus > mode_)) {
    throw SamplerError("GIG sampler acceptance " + std::to_string(acceptance_) +
                       " is below 1e-3 for psi=" + std::to_string(params.psi()) +
                       ", chi=" + std::to_string(params.chi()) +
                       ", lambda=" + std::to_string(params.lambda()) +
                       "; review the parameters");
  }
}

double GigSampler::log_h(double y) const {
  return (abs_lambda_ - 1.0) * std::log(y) - 0.5 * omega_ * (y + 1.0 / y);
}

double GigSampler::operator()(Rng& rng) const {
  const double width = v_plus_ - v_minus_;
  while (true) {
    const double u = 1.0 - rng.uniform();  // (0, 1]
    const double v = v_minus_ + width * rng.uniform();
    const double y = v / u + mode_;
    if (y <= 0.0) continue;
    if (2.0 * std::log(u) <= log_h(y) - log_h_mode_) {
      return invert_ ? scale_ / y : scale_ * y;
    }
  }
}

double sample_gig(const GIGParams& params, Rng& rng) { return GigSampler(params)(rng); }

Sampler hyperbolic_sampler(const HyperbolicModel& model) {
  GigSampler gig(model.gig());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.delta().matrix());
  Eigen::MatrixXd root = eig.operatorSqrt();
  Eigen::VectorXd mu = model.mu();
  Eigen::VectorXd gamma = model.gamma();
  return {model.dimension(),
          [gig, root, mu, gamma, z = Eigen::VectorXd(model.dimension())](
              Rng& rng, Eigen::VectorXd& out) mutable {
            const double s = gig(rng);
            fill_normal(rng, z);
            out.noalias() = root * z;
            out *= std::sqrt(s);
            out += mu + s * gamma;
          }};
}

Eigen::VectorXd sample_hyperbolic(const HyperbolicModel& model, Rng& rng) {
  Eigen::VectorXd out(model.dimension());
  hyperbolic_sampler(model).draw(rng, out);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kBlockSize = 1 << 14;

struct RunningStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& other) {
    if (other.n == 0) return;
    if (n == 0) {
      *this = other;
      return;
    }
    const double total = static_cast<double>(n + other.n);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.n) / total;
    m2 += other.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(other.n) / total;
    n += other.n;
  }
};

}  // namespace

std::vector<MomentEstimate> estimate_moments(const Sampler& sampler,
                                             std::span<const MultiIndex> indices, std::uint64_t n,
                                             RandomStream stream, unsigned threads) {
  if (n < 100) throw ContractViolation("estimate_moments needs at least 100 samples");
  for (const auto& index : indices) {
    if (!index.empty() && index.dimension() != sampler.dimension) {
      throw ContractViolation("multi-index dimension does not match the sampler");
    }
  }
  const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
  // Block b uses the stream generator jumped b + 1 times.
  std::vector<Rng> generators;
  generators.reserve(blocks);
  Rng base(stream);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    base.jump();
    generators.push_back(base);
  }

  std::vector<std::vector<RunningStats>> per_block(blocks,
                                                   std::vector<RunningStats>(indices.size()));
  auto run_block = [&](std::uint64_t b, const Sampler& draw_from) {
    Rng rng = generators[b];
    const std::uint64_t count = std::min(kBlockSize, n - b * kBlockSize);
    Eigen::VectorXd x(draw_from.dimension);
    auto& stats = per_block[b];
    for (std::uint64_t i = 0; i < count; ++i) {
      draw_from.draw(rng, x);
      for (std::size_t k = 0; k < indices.size(); ++k) {
        double value = 1.0;
        for (int a : indices[k].entries()) value *= x(a - 1);
        stats[k].add(value);
      }
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));
  if (threads == 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b, sampler);
  } else {
    // Draw closures carry scratch space, so every worker gets its own copy.
    std::vector<Sampler> copies(threads, sampler);
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::uint64_t b = t; b < blocks; b += threads) run_block(b, copies[t]);
      });
    }
    for (auto& w : workers) w.join();
  }

  std::vector<MomentEstimate> out(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    RunningStats total;
    for (std::uint64_t b = 0; b < blocks; ++b) total.merge(per_block[b][k]);
    const double variance = total.m2 / static_cast<double>(total.n - 1);
    out[k] = {total.mean, std::sqrt(std::max(variance, 0.0) / static_cast<double>(total.n)),
              total.n};
  }
  return out;
}

MomentEstimate estimate_moment(const Sampler& sampler, const MultiIndex& index, std::uint64_t n,
                               RandomStream stream, unsigned threads) {
  return estimate_moments(sampler, std::span<const MultiIndex>(&index, 1), n, stream, threads)
      .front();
}

double ks_statistic(std::span<const double> sorted_samples, std::span<const double> cdf_values) {
  if (sorted_samples.size() != cdf_values.size() || sorted_samples.empty()) {
    throw ContractViolation("ks_statistic needs matching, non-empty inputs");
  }
  const double n = static_cast<double>(sorted_samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < cdf_values.size(); ++i) {
    const double f = cdf_values[i];
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_p_value(double statistic, std::uint64_t n) {
  const double root = std::sqrt(static_cast<double>(n));
  const double lambda = (root + 0.12 + 0.11 / root) * statistic;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace wickmix
