#include "wickmix/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "wickmix/errors.hpp"
#include "wickmix/problem_spec.hpp"
#include "wickmix/verification.hpp"

namespace wickmix::cli {

namespace {

class Suite {
 public:
  explicit Suite(std::string name) { result_.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    ++result_.checks;
    if (ok) return;
    if (result_.failures++ == 0) result_.first_failure = what;
  }

  template <class F>
  void guarded(F&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      check(false, std::string("exception: ") + e.what());
    }
  }

  SuiteResult result() const { return result_; }

 private:
  SuiteResult result_;
};

bool close(double a, double b, double rel_tol) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= rel_tol * scale;
}

std::string format(const char* fmt, double a, double b) {
  char buffer[160];
  std::snprintf(buffer, sizeof buffer, fmt, a, b);
  return buffer;
}

// Random covariance for the suites, with the optional corruption applied.
struct CovarianceSource {
  Rng rng;
  bool corrupt;

  CovarianceMatrix next(int d) {
    Eigen::MatrixXd r = random_covariance(d, rng);
    if (corrupt && d > 1) {
      r(0, 1) += 1e-3;
      return CovarianceMatrix::unchecked(r);
    }
    return CovarianceMatrix(r);
  }
};

SuiteResult pairing_counts() {
  Suite s("pairing-counts");
  for (std::size_t n = 0; n <= 12; n += 2) {
    std::uint64_t count = 0;
    std::set<std::vector<std::pair<std::size_t, std::size_t>>> seen;
    PairingEnumerator e(all_positions(n));
    while (e.next()) {
      ++count;
      seen.insert(e.current().pairs);
    }
    s.check(count == pairing_count(n) && seen.size() == count,
            "pairing count mismatch at n=" + std::to_string(n));
  }
  PairingEnumerator odd(all_positions(5));
  s.check(!odd.next(), "odd position set must yield no pairing");
  return s.result();
}

SuiteResult subset_counts() {
  Suite s("subset-counts");
  for (std::size_t n = 0; n <= 12; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      std::uint64_t count = 0;
      SubsetEnumerator e(n, k);
      while (e.next()) ++count;
      s.check(count == binomial(n, k),
              "subset count mismatch at n=" + std::to_string(n) + " k=" + std::to_string(k));
    }
  }
  return s.result();
}

SuiteResult covariance_symmetry(CovarianceSource& source) {
  Suite s("covariance-symmetry");
  for (int trial = 0; trial < 20; ++trial) {
    s.guarded([&] {
      const CovarianceMatrix cov = source.next(2 + trial % 3);
      validate_covariance(cov.matrix());
      s.check(true, "");
    });
  }
  return s.result();
}

SuiteResult wick_fixtures(CovarianceSource& source) {
  Suite s("wick-fixtures");
  for (int trial = 0; trial < 20; ++trial) {
    s.guarded([&] {
      const CovarianceMatrix cov = source.next(4);
      auto r = [&](int i, int j) { return cov.between(i, j); };
      const double four = wick_moment(MultiIndex({1, 2, 3, 4}, 4), cov);
      const double four_expected = r(1, 2) * r(3, 4) + r(1, 3) * r(2, 4) + r(1, 4) * r(2, 3);
      s.check(close(four, four_expected, 1e-12), format("E[X1X2X3X4] %.17g vs %.17g", four, four_expected));
      const double repeated = wick_moment(MultiIndex({1, 1, 2, 4}, 4), cov);
      const double repeated_expected = r(1, 1) * r(2, 4) + 2.0 * r(1, 2) * r(1, 4);
      s.check(close(repeated, repeated_expected, 1e-12),
              format("E[X1X1X2X4] %.17g vs %.17g", repeated, repeated_expected));
    });
  }
  return s.result();
}

SuiteResult univariate_closed_form() {
  Suite s("univariate-closed-form");
  for (double variance : {0.5, 1.0, 2.5}) {
    const CovarianceMatrix cov(Eigen::MatrixXd::Constant(1, 1, variance));
    for (std::size_t n = 1; n <= 6; ++n) {
      const double got = wick_moment(MultiIndex(std::vector<int>(2 * n, 1), 1), cov);
      const double expected =
          static_cast<double>(pairing_count(2 * n)) * std::pow(variance, static_cast<double>(n));
      s.check(close(got, expected, 1e-12), format("E[X^2N] %.17g vs %.17g", got, expected));
    }
  }
  return s.result();
}

SuiteResult wick_properties(CovarianceSource& source, Rng& rng) {
  Suite s("wick-properties");
  for (int trial = 0; trial < 20; ++trial) {
    s.guarded([&] {
      const int d = 1 + trial % 4;
      const CovarianceMatrix cov = source.next(d);
      const std::size_t n = 1 + trial % 8;
      const MultiIndex a = random_index(d, n, rng);
      const double value = wick_moment(a, cov);
      if (n % 2 == 1) s.check(value == 0.0, "odd index must give exactly 0");
      std::vector<int> reversed(a.entries().rbegin(), a.entries().rend());
      s.check(wick_moment(MultiIndex(reversed, d), cov) == value, "permutation changed the value");
      WickCache cache(cov);
      s.check(wick_moment_memoized(a, cov, cache) == value, "memoized value differs");
      s.check(close(wick_moment(a, cov.scaled(2.0)),
                    std::pow(2.0, static_cast<double>(n / 2)) * value, 1e-12),
              "scaling law violated");
    });
  }
  return s.result();
}

SuiteResult mixture_reductions(CovarianceSource& source, Rng& rng) {
  Suite s("mixture-reductions");
  for (int trial = 0; trial < 20; ++trial) {
    s.guarded([&] {
      const int d = 1 + trial % 3;
      const CovarianceMatrix cov = source.next(d);
      const MultiIndex a = random_index(d, 1 + trial % 7, rng);
      const LocationMixtureModel zero(mixing::Deterministic{Eigen::VectorXd::Zero(d)}, cov);
      const double wick = wick_moment(a, cov);
      s.check(close(location_mixture_moment(zero, a), wick, 1e-12) ||
                  location_mixture_moment(zero, a) == wick,
              "deterministic(0) mixing differs from wick");
      Eigen::VectorXd mu(d);
      for (int i = 0; i < d; ++i) mu(i) = rng.normal();
      const LocationMixtureModel bern(mixing::Bernoulli{mu}, cov);
      const LocationMixtureModel atoms(mixing::DiscreteAtoms{{{mu, 0.5}, {-mu, 0.5}}}, cov);
      const double b = location_mixture_moment(bern, a);
      if (a.size() % 2 == 1) s.check(b == 0.0, "bernoulli odd moment must vanish");
      s.check(close(b, location_mixture_moment(atoms, a), 1e-12) ||
                  std::abs(b - location_mixture_moment(atoms, a)) < 1e-14,
              "bernoulli vs two-atom mismatch");
    });
  }
  return s.result();
}

SuiteResult independent_mixing_agreement(CovarianceSource& source, Rng& rng) {
  Suite s("independent-mixing-agreement");
  for (int trial = 0; trial < 20; ++trial) {
    s.guarded([&] {
      const int d = 2 + trial % 4;
      const CovarianceMatrix cov = source.next(d);
      // Independent components: product of two-point laws per component.
      Eigen::VectorXd lo(d), hi(d), p(d);
      for (int i = 0; i < d; ++i) {
        lo(i) = rng.normal();
        hi(i) = rng.normal();
        p(i) = 0.2 + 0.6 * rng.uniform();
      }
      mixing::DiscreteAtoms atoms;
      for (int mask = 0; mask < (1 << d); ++mask) {
        Eigen::VectorXd loc(d);
        double prob = 1.0;
        for (int i = 0; i < d; ++i) {
          const bool high = (mask >> i) & 1;
          loc(i) = high ? hi(i) : lo(i);
          prob *= high ? p(i) : 1.0 - p(i);
        }
        atoms.atoms.push_back({loc, prob});
      }
      double total = 0.0;
      for (const auto& atom : atoms.atoms) total += atom.probability;
      for (auto& atom : atoms.atoms) atom.probability /= total;
      const LocationMixtureModel model(atoms, cov);
      std::vector<int> entries;
      for (int i = 1; i <= d && entries.size() < 5; ++i) entries.push_back(i);
      const MultiIndex a(entries, d);
      const double general = location_mixture_moment(model, a);
      const double independent = location_mixture_moment_independent(model, a);
      s.check(close(general, independent, 1e-12) || std::abs(general - independent) < 1e-14,
              format("general %.17g vs independent %.17g", general, independent));
    });
  }
  return s.result();
}

SuiteResult bessel_identities() {
  Suite s("bessel-identities");
  for (double lx = -3.0; lx <= 2.0 + 1e-9; lx += 0.5) {
    const double x = std::pow(10.0, lx);
    s.guarded([&] {
      const double base = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
      s.check(close(bessel_k(0.5, x), base, 1e-10), format("K_1/2(%g) off by %g", x,
                                                            bessel_k(0.5, x) / base - 1.0));
      s.check(close(bessel_k(1.5, x), base * (1.0 + 1.0 / x), 1e-10),
              format("K_3/2(%g) off by %g", x, bessel_k(1.5, x) / (base * (1.0 + 1.0 / x)) - 1.0));
      for (double nu : {0.3, 2.0, 7.5, 29.0}) {
        const double residual =
            std::abs(bessel_k(nu + 1, x) - bessel_k(nu - 1, x) - 2.0 * nu / x * bessel_k(nu, x)) /
            bessel_k(nu + 1, x);
        s.check(residual < 1e-9, format("recurrence residual %g at x=%g", residual, x));
        s.check(bessel_k(-nu, x) == bessel_k(nu, x), "nu symmetry not bitwise");
      }
    });
  }
  return s.result();
}

SuiteResult gig_moments() {
  Suite s("gig-moments");
  const auto grid = gig_parameter_grid();
  for (std::size_t i = 0; i < grid.size(); i += 4) {
    const GIGParams& p = grid[i];
    s.guarded([&] {
      s.check(gig_moment(p, 0) == 1.0, "m_0 must be exactly 1");
      for (int l = 1; l <= 8; ++l) {
        s.check(close(gig_moment(p, l), gig_moment_quadrature(p, l), 1e-8),
                format("m_l %.17g vs quadrature %.17g", gig_moment(p, l),
                       gig_moment_quadrature(p, l)));
      }
      for (int l = 1; l < 8; ++l) {
        const double lhs = gig_moment(p, l + 1);
        const double rhs = p.chi() / p.psi() * gig_moment(p, l - 1) +
                           2.0 * (p.lambda() + l) / p.psi() * gig_moment(p, l);
        s.check(std::abs(lhs - rhs) < 1e-9 * lhs, format("recurrence %.17g vs %.17g", lhs, rhs));
      }
    });
  }
  return s.result();
}

SuiteResult hyperbolic_reduction(CovarianceSource& source, Rng& rng) {
  Suite s("hyperbolic-conditional-reduction");
  for (int trial = 0; trial < 20; ++trial) {
    s.guarded([&] {
      const int d = 1 + trial % 3;
      const CovarianceMatrix delta = source.next(d);
      Eigen::VectorXd mu(d), gamma(d);
      for (int i = 0; i < d; ++i) {
        mu(i) = rng.normal();
        gamma(i) = rng.normal();
      }
      const double frozen = 0.2 + 2.0 * rng.uniform();
      const MultiIndex a = random_index(d, trial % 7, rng);
      std::vector<double> powers(a.size() + 1);
      for (std::size_t l = 0; l < powers.size(); ++l) powers[l] = std::pow(frozen, static_cast<double>(l));
      const double quadruple =
          hyperbolic_moment_given_scale_moments(mu, gamma, delta, a, powers).value;
      const LocationMixtureModel conditional(mixing::Deterministic{mu + frozen * gamma},
                                             delta.scaled(frozen));
      const double direct = location_mixture_moment(conditional, a);
      s.check(std::abs(quadruple - direct) <= 1e-10 * std::max(1.0, std::abs(direct)),
              format("quadruple sum %.17g vs conditional Gaussian %.17g", quadruple, direct));
    });
  }
  return s.result();
}

SuiteResult mc_concordance(const SelftestOptions& options) {
  Suite s("mc-concordance");
  const auto grid = standard_grid();
  std::uint64_t stream_id = 0;
  std::vector<std::string> details;
  for (const auto& c : grid) {
    s.guarded([&] {
      std::vector<MultiIndex> indices;
      for (const auto& a : c.indices) {
        if (a.size() <= 3) indices.push_back(a);
      }
      const auto estimates = estimate_moments(c.sampler, indices, 100'000,
                                              RandomStream{options.seed, ++stream_id},
                                              options.threads);
      double worst = 0.0;
      for (std::size_t k = 0; k < indices.size(); ++k) {
        const Agreement a = compare_with_estimate(c.exact(indices[k]), estimates[k]);
        s.check(a.status != Agreement::Status::fail, c.name + " failed the 5 SE band");
        worst = std::max(worst, std::abs(a.z));
      }
      char buffer[120];
      std::snprintf(buffer, sizeof buffer, "    %-26s monomials=%-3zu max|z|=%.6f\n", c.name.c_str(),
                    indices.size(), worst);
      details.emplace_back(buffer);
    });
  }
  SuiteResult out = s.result();
  out.details = std::move(details);
  return out;
}

SuiteResult record_roundtrip() {
  Suite s("result-record-roundtrip");
  s.guarded([&] {
    ResultRecord r;
    r.model = ModelKind::hyperbolic;
    r.index_set = {1, 1, 2};
    r.exact = 0.1 + 0.2;
    r.term_count = 17;
    r.mc = MomentEstimate{0.30000000000000004, 1.5e-3, 1000};
    r.agreement = compare_with_estimate(r.exact, *r.mc);
    r.timing_ms = {{"exact", 0.25}};
    const auto text = to_json(r).dump();
    const ResultRecord back = result_from_json(nlohmann::json::parse(text));
    s.check(back.exact == r.exact && back.index_set == r.index_set &&
                back.term_count == r.term_count && back.mc->value == r.mc->value &&
                back.agreement->status == r.agreement->status,
            "result record did not survive serialization");
    const ProblemSpec spec = parse_spec(std::string(R"({"spec_version": 1, "model": "gaussian",
        "dimension": 2, "index_set": [1, 2], "params": {"covariance": [[1, 0], [0, 1]]}})"));
    s.check(parse_spec(to_json(spec)) == spec, "problem spec did not survive serialization");
    s.check(run_moment(spec).exact == 0.0, "identity covariance cross moment must be 0");
  });
  return s.result();
}

}  // namespace

std::vector<SuiteResult> run_selftest_suites(const SelftestOptions& options) {
  CovarianceSource source{Rng({options.seed, 1}), options.corrupt_covariance_symmetry};
  Rng rng({options.seed, 2});
  std::vector<SuiteResult> out;
  out.push_back(pairing_counts());
  out.push_back(subset_counts());
  out.push_back(covariance_symmetry(source));
  out.push_back(wick_fixtures(source));
  out.push_back(univariate_closed_form());
  out.push_back(wick_properties(source, rng));
  out.push_back(mixture_reductions(source, rng));
  out.push_back(independent_mixing_agreement(source, rng));
  out.push_back(bessel_identities());
  out.push_back(gig_moments());
  out.push_back(hyperbolic_reduction(source, rng));
  out.push_back(mc_concordance(options));
  out.push_back(record_roundtrip());
  return out;
}

bool run_selftest(std::ostream& out, const SelftestOptions& options) {
  const auto results = run_selftest_suites(options);
  out << "wickmix selftest (seed " << options.seed << ")\n";
  std::size_t passed = 0;
  for (const auto& r : results) {
    const bool ok = r.failures == 0;
    passed += ok;
    char buffer[160];
    std::snprintf(buffer, sizeof buffer, "  %-4s  %-34s checks=%-5zu failures=%zu\n",
                  ok ? "PASS" : "FAIL", r.name.c_str(), r.checks, r.failures);
    out << buffer;
    if (!ok) out << "        first failure: " << r.first_failure << "\n";
    for (const auto& line : r.details) out << line;
  }
  out << "summary: " << passed << "/" << results.size() << " suites passed\n";
  return passed == results.size();
}

}  // namespace wickmix::cli
