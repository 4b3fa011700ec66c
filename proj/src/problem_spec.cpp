#include "wickmix/problem_spec.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "wickmix/errors.hpp"

namespace wickmix::cli {

using nlohmann::json;

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::gaussian:
      return "gaussian";
    case ModelKind::location_mixture:
      return "location_mixture";
    case ModelKind::hyperbolic:
      return "hyperbolic";
  }
  return "unknown";
}

const char* to_string(SpecErrorKind kind) {
  switch (kind) {
    case SpecErrorKind::syntax:
      return "syntax error";
    case SpecErrorKind::unknown_field:
      return "unknown field";
    case SpecErrorKind::missing_field:
      return "missing field";
    case SpecErrorKind::type_mismatch:
      return "type mismatch";
    case SpecErrorKind::unknown_model:
      return "unknown model";
    case SpecErrorKind::unsupported_version:
      return "unsupported spec_version";
    case SpecErrorKind::dimension_mismatch:
      return "dimension mismatch";
    case SpecErrorKind::index_out_of_range:
      return "index out of range";
    case SpecErrorKind::invalid_value:
      return "invalid value";
    case SpecErrorKind::determinant:
      return "determinant check";
  }
  return "error";
}

SpecError::SpecError(SpecErrorKind kind, std::string field, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " at '" + field + "': " + message),
      kind_(kind),
      field_(std::move(field)) {}

SizeGuardError::SizeGuardError(std::size_t size, std::size_t limit)
    : std::runtime_error([&] {
        char buffer[64];
        const std::size_t even = size - size % 2;
        std::snprintf(buffer, sizeof buffer, "%.3g", pairing_count_estimate(even));
        return "refusing |A| = " + std::to_string(size) + " (limit " + std::to_string(limit) +
               "): the Wick sum alone has (" + std::to_string(even == 0 ? 0 : even - 1) +
               ")!! = " + buffer + " pairings; raise --max-index-size to proceed";
      }()),
      estimate_(pairing_count_estimate(size - size % 2)) {}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string element(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw SpecError(SpecErrorKind::type_mismatch, path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw SpecError(SpecErrorKind::unknown_field, child(path, key), "field is not recognized");
    }
  }
}

const json& required(const json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw SpecError(SpecErrorKind::missing_field, child(path, key), "required");
  return *it;
}

double read_double(const json& j, const std::string& path) {
  if (!j.is_number()) throw SpecError(SpecErrorKind::type_mismatch, path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SpecError(SpecErrorKind::invalid_value, path, "must be finite");
  return v;
}

std::int64_t read_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) {
    throw SpecError(SpecErrorKind::type_mismatch, path, "expected an integer");
  }
  return j.get<std::int64_t>();
}

std::uint64_t read_unsigned(const json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                  j.get<std::int64_t>() < 0)) {
    throw SpecError(SpecErrorKind::type_mismatch, path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

bool read_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw SpecError(SpecErrorKind::type_mismatch, path, "expected a boolean");
  return j.get<bool>();
}

Eigen::VectorXd read_vector(const json& j, const std::string& path, int dimension) {
  if (!j.is_array()) throw SpecError(SpecErrorKind::type_mismatch, path, "expected an array");
  if (static_cast<int>(j.size()) != dimension) {
    throw SpecError(SpecErrorKind::dimension_mismatch, path,
                    "expected " + std::to_string(dimension) + " entries, got " +
                        std::to_string(j.size()));
  }
  Eigen::VectorXd v(dimension);
  for (int i = 0; i < dimension; ++i) v(i) = read_double(j[i], element(path, i));
  return v;
}

Eigen::MatrixXd read_matrix(const json& j, const std::string& path, int dimension) {
  if (!j.is_array()) {
    throw SpecError(SpecErrorKind::type_mismatch, path, "expected an array of rows");
  }
  if (static_cast<int>(j.size()) != dimension) {
    throw SpecError(SpecErrorKind::dimension_mismatch, path,
                    "expected " + std::to_string(dimension) + " rows, got " +
                        std::to_string(j.size()));
  }
  Eigen::MatrixXd m(dimension, dimension);
  for (int i = 0; i < dimension; ++i) m.row(i) = read_vector(j[i], element(path, i), dimension);
  return m;
}

MixingDistribution read_mixing(const json& j, const std::string& path, int dimension) {
  expect_object(j, path);
  const json& kind_node = required(j, "kind", path);
  if (!kind_node.is_string()) {
    throw SpecError(SpecErrorKind::type_mismatch, child(path, "kind"), "expected a string");
  }
  const auto kind = kind_node.get<std::string>();
  if (kind == "deterministic") {
    reject_unknown(j, path, {"kind", "location"});
    return mixing::Deterministic{
        read_vector(required(j, "location", path), child(path, "location"), dimension)};
  }
  if (kind == "bernoulli") {
    reject_unknown(j, path, {"kind", "mu"});
    return mixing::Bernoulli{read_vector(required(j, "mu", path), child(path, "mu"), dimension)};
  }
  if (kind == "discrete") {
    reject_unknown(j, path, {"kind", "atoms"});
    const std::string atoms_path = child(path, "atoms");
    const json& atoms = required(j, "atoms", path);
    if (!atoms.is_array() || atoms.empty()) {
      throw SpecError(SpecErrorKind::type_mismatch, atoms_path, "expected a non-empty array");
    }
    mixing::DiscreteAtoms out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const std::string atom_path = element(atoms_path, i);
      expect_object(atoms[i], atom_path);
      reject_unknown(atoms[i], atom_path, {"location", "probability"});
      out.atoms.push_back(
          {read_vector(required(atoms[i], "location", atom_path), child(atom_path, "location"),
                       dimension),
           read_double(required(atoms[i], "probability", atom_path),
                       child(atom_path, "probability"))});
    }
    return out;
  }
  throw SpecError(SpecErrorKind::invalid_value, child(path, "kind"),
                  "unknown mixing kind '" + kind + "' (expected deterministic, bernoulli or discrete)");
}

void read_options(const json& j, const std::string& path, Options& options) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"max_index_size", "strict_det", "seed", "samples", "threads", "compensated",
                  "skip_psd_check"});
  if (j.contains("max_index_size")) {
    options.max_index_size = read_unsigned(j["max_index_size"], child(path, "max_index_size"));
  }
  if (j.contains("strict_det")) options.strict_det = read_bool(j["strict_det"], child(path, "strict_det"));
  if (j.contains("seed")) options.seed = read_unsigned(j["seed"], child(path, "seed"));
  if (j.contains("samples")) options.samples = read_unsigned(j["samples"], child(path, "samples"));
  if (j.contains("threads")) {
    options.threads = static_cast<unsigned>(read_unsigned(j["threads"], child(path, "threads")));
  }
  if (j.contains("compensated")) {
    options.compensated = read_bool(j["compensated"], child(path, "compensated"));
  }
  if (j.contains("skip_psd_check")) {
    options.skip_psd_check = read_bool(j["skip_psd_check"], child(path, "skip_psd_check"));
  }
}

void validate_models(const ProblemSpec& spec) {
  try {
    switch (spec.model) {
      case ModelKind::gaussian:
        build_covariance(spec);
        break;
      case ModelKind::location_mixture:
        try {
          build_covariance(spec);
        } catch (const ContractViolation& e) {
          throw SpecError(SpecErrorKind::invalid_value, "params.covariance", e.what());
        }
        try {
          build_location_mixture(spec);
        } catch (const ContractViolation& e) {
          throw SpecError(SpecErrorKind::invalid_value, "params.mixing", e.what());
        }
        break;
      case ModelKind::hyperbolic: {
        const auto& p = std::get<HyperbolicParams>(spec.params);
        try {
          GIGParams(p.psi, p.chi, p.lambda);
        } catch (const ContractViolation& e) {
          throw SpecError(SpecErrorKind::invalid_value, "params", e.what());
        }
        try {
          build_hyperbolic(spec);
        } catch (const ContractViolation& e) {
          const std::string what = e.what();
          const bool det = what.find("determinant") != std::string::npos;
          throw SpecError(det ? SpecErrorKind::determinant : SpecErrorKind::invalid_value,
                          "params.delta", what);
        }
        break;
      }
    }
  } catch (const ContractViolation& e) {
    throw SpecError(SpecErrorKind::invalid_value, "params.covariance", e.what());
  }
}

}  // namespace

ProblemSpec parse_spec(const json& doc, const OptionOverrides& overrides) {
  expect_object(doc, "");
  reject_unknown(doc, "", {"spec_version", "model", "dimension", "index_set", "params", "options"});

  const json& version = required(doc, "spec_version", "");
  if (read_integer(version, "spec_version") != 1) {
    throw SpecError(SpecErrorKind::unsupported_version, "spec_version", "only version 1 is supported");
  }

  ProblemSpec spec;
  const json& model = required(doc, "model", "");
  if (!model.is_string()) throw SpecError(SpecErrorKind::type_mismatch, "model", "expected a string");
  const auto model_name = model.get<std::string>();
  if (model_name == "gaussian") {
    spec.model = ModelKind::gaussian;
  } else if (model_name == "location_mixture") {
    spec.model = ModelKind::location_mixture;
  } else if (model_name == "hyperbolic") {
    spec.model = ModelKind::hyperbolic;
  } else {
    throw SpecError(SpecErrorKind::unknown_model, "model",
                    "'" + model_name + "' (expected gaussian, location_mixture or hyperbolic)");
  }

  const std::int64_t dimension = read_integer(required(doc, "dimension", ""), "dimension");
  if (dimension < 1) throw SpecError(SpecErrorKind::invalid_value, "dimension", "must be >= 1");
  spec.dimension = static_cast<int>(dimension);
  const int d = spec.dimension;

  const json& index = required(doc, "index_set", "");
  if (!index.is_array()) throw SpecError(SpecErrorKind::type_mismatch, "index_set", "expected an array");
  for (std::size_t i = 0; i < index.size(); ++i) {
    const std::int64_t a = read_integer(index[i], element("index_set", i));
    if (a < 1 || a > d) {
      throw SpecError(SpecErrorKind::index_out_of_range, element("index_set", i),
                      "index " + std::to_string(a) + " is outside [1, " + std::to_string(d) + "]");
    }
    spec.index_set.push_back(static_cast<int>(a));
  }

  const json& params = required(doc, "params", "");
  expect_object(params, "params");
  switch (spec.model) {
    case ModelKind::gaussian:
      reject_unknown(params, "params", {"covariance"});
      spec.params = GaussianParams{
          read_matrix(required(params, "covariance", "params"), "params.covariance", d)};
      break;
    case ModelKind::location_mixture:
      reject_unknown(params, "params", {"covariance", "mixing"});
      spec.params = LocationMixtureParams{
          read_matrix(required(params, "covariance", "params"), "params.covariance", d),
          read_mixing(required(params, "mixing", "params"), "params.mixing", d)};
      break;
    case ModelKind::hyperbolic: {
      reject_unknown(params, "params", {"mu", "beta", "delta", "psi", "chi", "lambda"});
      HyperbolicParams p;
      p.mu = read_vector(required(params, "mu", "params"), "params.mu", d);
      p.beta = read_vector(required(params, "beta", "params"), "params.beta", d);
      p.delta = read_matrix(required(params, "delta", "params"), "params.delta", d);
      p.psi = read_double(required(params, "psi", "params"), "params.psi");
      p.chi = read_double(required(params, "chi", "params"), "params.chi");
      p.lambda = read_double(required(params, "lambda", "params"), "params.lambda");
      spec.params = std::move(p);
      break;
    }
  }

  if (doc.contains("options")) read_options(doc["options"], "options", spec.options);
  if (overrides.max_index_size) spec.options.max_index_size = *overrides.max_index_size;
  if (overrides.strict_det) spec.options.strict_det = *overrides.strict_det;
  if (overrides.seed) spec.options.seed = *overrides.seed;
  if (overrides.samples) spec.options.samples = *overrides.samples;
  if (overrides.threads) spec.options.threads = *overrides.threads;
  if (spec.options.threads < 1) {
    throw SpecError(SpecErrorKind::invalid_value, "options.threads", "must be >= 1");
  }

  validate_models(spec);
  return spec;
}

ProblemSpec parse_spec(const std::string& text, const OptionOverrides& overrides) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(SpecErrorKind::syntax, "byte " + std::to_string(e.byte), e.what());
  }
  return parse_spec(doc, overrides);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i).transpose()));
  return out;
}

json mixing_json(const MixingDistribution& mix) {
  if (const auto* m = std::get_if<mixing::Deterministic>(&mix)) {
    return {{"kind", "deterministic"}, {"location", vector_json(m->location)}};
  }
  if (const auto* m = std::get_if<mixing::Bernoulli>(&mix)) {
    return {{"kind", "bernoulli"}, {"mu", vector_json(m->mu)}};
  }
  if (const auto* m = std::get_if<mixing::DiscreteAtoms>(&mix)) {
    json atoms = json::array();
    for (const auto& atom : m->atoms) {
      atoms.push_back({{"location", vector_json(atom.location)}, {"probability", atom.probability}});
    }
    return {{"kind", "discrete"}, {"atoms", atoms}};
  }
  throw ContractViolation("a moment-oracle mixing law cannot be written to a problem file");
}

bool same_mixing(const MixingDistribution& a, const MixingDistribution& b) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<mixing::Deterministic>(&a)) {
    return x->location == std::get<mixing::Deterministic>(b).location;
  }
  if (const auto* x = std::get_if<mixing::Bernoulli>(&a)) {
    return x->mu == std::get<mixing::Bernoulli>(b).mu;
  }
  if (const auto* x = std::get_if<mixing::DiscreteAtoms>(&a)) {
    const auto& y = std::get<mixing::DiscreteAtoms>(b);
    if (x->atoms.size() != y.atoms.size()) return false;
    for (std::size_t i = 0; i < x->atoms.size(); ++i) {
      if (x->atoms[i].location != y.atoms[i].location ||
          x->atoms[i].probability != y.atoms[i].probability) {
        return false;
      }
    }
    return true;
  }
  return false;  // oracles have no value identity
}

}  // namespace

bool operator==(const ProblemSpec& a, const ProblemSpec& b) {
  const auto& oa = a.options;
  const auto& ob = b.options;
  if (a.model != b.model || a.dimension != b.dimension || a.index_set != b.index_set ||
      oa.max_index_size != ob.max_index_size || oa.strict_det != ob.strict_det ||
      oa.seed != ob.seed || oa.samples != ob.samples || oa.threads != ob.threads ||
      oa.compensated != ob.compensated || oa.skip_psd_check != ob.skip_psd_check ||
      a.params.index() != b.params.index()) {
    return false;
  }
  switch (a.model) {
    case ModelKind::gaussian:
      return std::get<GaussianParams>(a.params).covariance ==
             std::get<GaussianParams>(b.params).covariance;
    case ModelKind::location_mixture: {
      const auto& x = std::get<LocationMixtureParams>(a.params);
      const auto& y = std::get<LocationMixtureParams>(b.params);
      return x.covariance == y.covariance && same_mixing(x.mixing, y.mixing);
    }
    case ModelKind::hyperbolic: {
      const auto& x = std::get<HyperbolicParams>(a.params);
      const auto& y = std::get<HyperbolicParams>(b.params);
      return x.mu == y.mu && x.beta == y.beta && x.delta == y.delta && x.psi == y.psi &&
             x.chi == y.chi && x.lambda == y.lambda;
    }
  }
  return false;
}

json to_json(const ProblemSpec& spec) {
  json params;
  switch (spec.model) {
    case ModelKind::gaussian:
      params = {{"covariance", matrix_json(std::get<GaussianParams>(spec.params).covariance)}};
      break;
    case ModelKind::location_mixture: {
      const auto& p = std::get<LocationMixtureParams>(spec.params);
      params = {{"covariance", matrix_json(p.covariance)}, {"mixing", mixing_json(p.mixing)}};
      break;
    }
    case ModelKind::hyperbolic: {
      const auto& p = std::get<HyperbolicParams>(spec.params);
      params = {{"mu", vector_json(p.mu)},    {"beta", vector_json(p.beta)},
                {"delta", matrix_json(p.delta)}, {"psi", p.psi},
                {"chi", p.chi},               {"lambda", p.lambda}};
      break;
    }
  }
  const auto& o = spec.options;
  return {{"spec_version", 1},
          {"model", to_string(spec.model)},
          {"dimension", spec.dimension},
          {"index_set", spec.index_set},
          {"params", params},
          {"options",
           {{"max_index_size", o.max_index_size},
            {"strict_det", o.strict_det},
            {"seed", o.seed},
            {"samples", o.samples},
            {"threads", o.threads},
            {"compensated", o.compensated},
            {"skip_psd_check", o.skip_psd_check}}}};
}

// ---------------------------------------------------------------------------
// Model construction

MultiIndex index_of(const ProblemSpec& spec) { return MultiIndex(spec.index_set, spec.dimension); }

CovarianceMatrix build_covariance(const ProblemSpec& spec) {
  const PsdCheck check = spec.options.skip_psd_check ? PsdCheck::skip : PsdCheck::validate;
  if (const auto* p = std::get_if<GaussianParams>(&spec.params)) {
    return CovarianceMatrix(p->covariance, check);
  }
  if (const auto* p = std::get_if<LocationMixtureParams>(&spec.params)) {
    return CovarianceMatrix(p->covariance, check);
  }
  throw ContractViolation("model has no covariance parameter");
}

LocationMixtureModel build_location_mixture(const ProblemSpec& spec) {
  const auto& p = std::get<LocationMixtureParams>(spec.params);
  return LocationMixtureModel(p.mixing, build_covariance(spec));
}

HyperbolicModel build_hyperbolic(const ProblemSpec& spec) {
  const auto& p = std::get<HyperbolicParams>(spec.params);
  return HyperbolicModel(p.mu, p.beta, p.delta, GIGParams(p.psi, p.chi, p.lambda),
                         spec.options.strict_det ? DeterminantPolicy::strict
                                                 : DeterminantPolicy::warn);
}

Sampler build_sampler(const ProblemSpec& spec) {
  switch (spec.model) {
    case ModelKind::gaussian:
      return gaussian_sampler(build_covariance(spec));
    case ModelKind::location_mixture:
      return location_mixture_sampler(build_location_mixture(spec));
    case ModelKind::hyperbolic:
      return hyperbolic_sampler(build_hyperbolic(spec));
  }
  throw ContractViolation("unknown model kind");
}

// ---------------------------------------------------------------------------
// Results

json to_json(const ResultRecord& record) {
  json timing = json::object();
  for (const auto& [phase, ms] : record.timing_ms) timing[phase] = ms;
  json out = {{"model", to_string(record.model)},
              {"index_set", record.index_set},
              {"exact", record.exact},
              {"term_count", record.term_count},
              {"timing_ms", timing}};
  if (record.mc) {
    out["mc"] = {{"value", record.mc->value},
                 {"std_error", record.mc->std_error},
                 {"n", record.mc->n}};
  }
  if (record.agreement) {
    out["agreement"] = {{"status", to_string(record.agreement->status)},
                        {"z", record.agreement->z},
                        {"relative_se", record.agreement->relative_se}};
  }
  if (!record.warnings.empty()) out["warnings"] = record.warnings;
  return out;
}

ResultRecord result_from_json(const json& doc) {
  try {
    ResultRecord r;
    const auto model = doc.at("model").get<std::string>();
    if (model == "gaussian") {
      r.model = ModelKind::gaussian;
    } else if (model == "location_mixture") {
      r.model = ModelKind::location_mixture;
    } else if (model == "hyperbolic") {
      r.model = ModelKind::hyperbolic;
    } else {
      throw SpecError(SpecErrorKind::unknown_model, "model", model);
    }
    r.index_set = doc.at("index_set").get<std::vector<int>>();
    r.exact = doc.at("exact").get<double>();
    r.term_count = doc.at("term_count").get<std::uint64_t>();
    for (const auto& [phase, ms] : doc.at("timing_ms").items()) {
      r.timing_ms.emplace_back(phase, ms.get<double>());
    }
    if (doc.contains("mc")) {
      const auto& mc = doc["mc"];
      r.mc = MomentEstimate{mc.at("value").get<double>(), mc.at("std_error").get<double>(),
                            mc.at("n").get<std::uint64_t>()};
    }
    if (doc.contains("agreement")) {
      const auto& a = doc["agreement"];
      Agreement agreement;
      const auto status = a.at("status").get<std::string>();
      if (status == "pass") {
        agreement.status = Agreement::Status::pass;
      } else if (status == "fail") {
        agreement.status = Agreement::Status::fail;
      } else if (status == "inconclusive") {
        agreement.status = Agreement::Status::inconclusive;
      } else {
        throw SpecError(SpecErrorKind::invalid_value, "agreement.status", status);
      }
      agreement.z = a.at("z").is_null() ? INFINITY : a.at("z").get<double>();
      agreement.relative_se = a.at("relative_se").get<double>();
      r.agreement = agreement;
    }
    if (doc.contains("warnings")) r.warnings = doc["warnings"].get<std::vector<std::string>>();
    if (r.mc.has_value() != r.agreement.has_value()) {
      throw SpecError(SpecErrorKind::invalid_value, "agreement", "present iff mc is present");
    }
    return r;
  } catch (const json::exception& e) {
    throw SpecError(SpecErrorKind::type_mismatch, "result", e.what());
  }
}

std::string csv_header() { return "model,A,exact,mc,se,z,terms,ms"; }

std::string csv_row(const ResultRecord& record) {
  auto number = [](double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    return std::string(buffer);
  };
  std::ostringstream out;
  out << to_string(record.model) << ',';
  for (std::size_t i = 0; i < record.index_set.size(); ++i) {
    out << (i ? " " : "") << record.index_set[i];
  }
  out << ',' << number(record.exact) << ',';
  if (record.mc) out << number(record.mc->value);
  out << ',';
  if (record.mc) out << number(record.mc->std_error);
  out << ',';
  if (record.agreement) out << number(record.agreement->z);
  double total = 0.0;
  for (const auto& [phase, ms] : record.timing_ms) total += ms;
  out << ',' << record.term_count << ',' << number(total);
  return out.str();
}

// ---------------------------------------------------------------------------
// Runs

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

}  // namespace

ResultRecord run_moment(const ProblemSpec& spec) {
  if (spec.index_set.size() > spec.options.max_index_size) {
    throw SizeGuardError(spec.index_set.size(), spec.options.max_index_size);
  }
  const auto start = std::chrono::steady_clock::now();
  const MultiIndex index = index_of(spec);
  const WickOptions wick{spec.options.compensated ? Summation::compensated : Summation::plain};

  ResultRecord record;
  record.model = spec.model;
  record.index_set = spec.index_set;
  MomentResult result;
  switch (spec.model) {
    case ModelKind::gaussian:
      result = wick_moment_counted(index, build_covariance(spec), wick);
      break;
    case ModelKind::location_mixture:
      result = location_mixture_moment_counted(build_location_mixture(spec), index, wick);
      break;
    case ModelKind::hyperbolic: {
      const HyperbolicModel model = build_hyperbolic(spec);
      record.warnings = model.warnings();
      result = hyperbolic_moment_counted(model, index, wick);
      break;
    }
  }
  record.exact = result.value;
  record.term_count = result.term_count;
  record.timing_ms.emplace_back("exact", elapsed_ms(start));
  return record;
}

ResultRecord run_verify(const ProblemSpec& spec) {
  ResultRecord record = run_moment(spec);
  const auto start = std::chrono::steady_clock::now();
  const Sampler sampler = build_sampler(spec);
  record.mc = estimate_moment(sampler, index_of(spec), spec.options.samples,
                              RandomStream{spec.options.seed, 0}, spec.options.threads);
  record.agreement = compare_with_estimate(record.exact, *record.mc);
  record.timing_ms.emplace_back("mc", elapsed_ms(start));
  return record;
}

}  // namespace wickmix::cli
