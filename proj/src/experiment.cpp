#include "qgdecoh/experiment.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "qgdecoh/errors.hpp"

namespace qgdecoh {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"", {"preset"}},
      {"constants", {"c", "hbar", "m_planck", "m_nucleon"}},
      {"model",
       {"species_mass_amu", "density_fraction", "prefactor", "kernel", "event_rate_hz",
        "sigma_per_m"}},
      {"trajectory", {"shape", "d_max_m", "half_time_s", "samples_csv"}},
      {"recoils", {"n", "wavelength_nm", "drift_time_s"}},
      {"measurement", {"contrast", "initial_coherence", "attribution_fraction"}},
      {"output", {"csv", "precision"}},
  };
  return s;
}

std::string qualified(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

void check_known(const std::string& section, const std::string& key) {
  const auto it = schema().find(section);
  if (it == schema().end()) throw ConfigError("unknown section [" + section + "]");
  if (!it->second.contains(key)) throw ConfigError("unknown key '" + qualified(section, key) + "'");
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

// Reads typed values out of the merged table; every error names its key.
class Reader {
 public:
  explicit Reader(const RawConfig& raw) : raw_(raw) {}

  const std::string* find(const std::string& section, const std::string& key) const {
    const auto s = raw_.find(section);
    if (s == raw_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  bool has_section(const std::string& section) const { return raw_.contains(section); }

  std::optional<double> real(const std::string& section, const std::string& key) const {
    const std::string* v = find(section, key);
    if (!v) return std::nullopt;
    try {
      return parse_double(*v);
    } catch (const InputError&) {
      throw ConfigError("'" + qualified(section, key) + "' is not a finite number: '" + *v + "'");
    }
  }

  double required(const std::string& section, const std::string& key) const {
    auto v = real(section, key);
    if (!v) throw ConfigError("missing required key '" + qualified(section, key) + "'");
    return *v;
  }

  double positive(const std::string& section, const std::string& key) const {
    const double v = required(section, key);
    if (!(v > 0.0)) fail(section, key, "must be positive");
    return v;
  }

  std::optional<double> optional_positive(const std::string& section,
                                          const std::string& key) const {
    auto v = real(section, key);
    if (v && !(*v > 0.0)) fail(section, key, "must be positive");
    return v;
  }

  int integer(const std::string& section, const std::string& key) const {
    const double v = required(section, key);
    if (v != std::floor(v) || std::abs(v) > 1e9) fail(section, key, "must be an integer");
    return static_cast<int>(v);
  }

  [[noreturn]] static void fail(const std::string& section, const std::string& key,
                                const std::string& why) {
    throw ConfigError("'" + qualified(section, key) + "' " + why);
  }

 private:
  const RawConfig& raw_;
};

}  // namespace

RawConfig preset_table(const std::string& name) {
  if (name == "kovachy2015") {
    // 87Rb, 1.04 s drift, 54 cm peak separation, 28% measured contrast.
    return {
        {"model", {{"species_mass_amu", "86.909"}}},
        {"trajectory", {{"shape", "paper"}, {"d_max_m", "0.54"}, {"half_time_s", "1.04"}}},
        {"measurement", {{"contrast", "0.28"}}},
    };
  }
  throw ConfigError("unknown preset '" + name + "'");
}

RawConfig parse_config_document(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.message(), e.line());
  } catch (const pt::ptree_error& e) {
    throw ConfigError(e.what());
  }

  RawConfig raw;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      check_known("", name);
      raw[""][name] = unquote(node.data());
      continue;
    }
    auto& section = raw[name];
    for (const auto& [key, value] : node) {
      check_known(name, key);
      section[key] = unquote(value.data());
    }
  }
  return raw;
}

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir) {
  return ExperimentConfig::resolve(parse_config_document(text), base_dir);
}

ExperimentConfig ExperimentConfig::resolve(const RawConfig& document,
                                           const std::string& base_dir) {
  for (const auto& [section, keys] : document)
    for (const auto& [key, value] : keys) check_known(section, key);

  RawConfig merged;
  std::string preset;
  if (auto s = document.find(""); s != document.end()) {
    if (auto p = s->second.find("preset"); p != s->second.end()) {
      preset = p->second;
      merged = preset_table(preset);
    }
  }
  for (const auto& [section, keys] : document)
    for (const auto& [key, value] : keys) merged[section][key] = value;

  if (merged.empty() || (merged.size() == 1 && merged.contains("")))
    throw ConfigError("empty configuration: no preset and no model/trajectory keys");

  const Reader r(merged);
  ExperimentConfig cfg;
  cfg.raw_ = document;
  cfg.base_dir_ = base_dir;
  cfg.preset = preset;

  try {
    auto constant = [&](const char* key, Quantity& q) {
      if (auto v = r.optional_positive("constants", key)) q = Quantity(*v, q.dimension());
    };
    constant("c", cfg.constants.c);
    constant("hbar", cfg.constants.hbar);
    constant("m_planck", cfg.constants.m_planck);
    constant("m_nucleon", cfg.constants.m_nucleon);
    cfg.constants.validate();
  } catch (const InputError& e) {
    throw ConfigError(std::string("[constants]: ") + e.what());
  }

  cfg.species_mass_amu = r.positive("model", "species_mass_amu");
  if (auto v = r.real("model", "density_fraction")) {
    if (!(*v >= 0.0)) Reader::fail("model", "density_fraction", "must be >= 0");
    cfg.density_fraction = *v;
  }
  if (const std::string* p = r.find("model", "prefactor")) {
    if (*p == "paper") cfg.prefactor = kPrefactorPaper;
    else if (*p == "eq1") cfg.prefactor = kPrefactorMasterEquation;
    else Reader::fail("model", "prefactor", "must be \"paper\" or \"eq1\"");
  }
  if (const std::string* k = r.find("model", "kernel")) {
    if (*k == "quadratic") cfg.kernel = KernelKind::Quadratic;
    else if (*k == "scattering") cfg.kernel = KernelKind::Scattering;
    else Reader::fail("model", "kernel", "must be \"quadratic\" or \"scattering\"");
  }
  if (auto v = r.real("model", "event_rate_hz")) {
    if (!(*v >= 0.0)) Reader::fail("model", "event_rate_hz", "must be >= 0");
    cfg.event_rate_hz = v;
  }
  cfg.sigma_per_m = r.optional_positive("model", "sigma_per_m");
  if (cfg.kernel == KernelKind::Scattering && !cfg.event_rate_hz)
    throw ConfigError("missing required key 'model.event_rate_hz' for kernel = scattering");

  if (const std::string* s = r.find("trajectory", "shape")) {
    if (*s == "paper") cfg.shape = Trajectory::Shape::PaperSmoothed;
    else if (*s == "triangular") cfg.shape = Trajectory::Shape::Triangular;
    else if (*s == "constant") cfg.shape = Trajectory::Shape::Constant;
    else if (*s == "sampled") cfg.shape = Trajectory::Shape::Sampled;
    else Reader::fail("trajectory", "shape", "must be paper, triangular, constant or sampled");
  }
  cfg.d_max_m = r.optional_positive("trajectory", "d_max_m");
  cfg.half_time_s = r.optional_positive("trajectory", "half_time_s");

  if (r.has_section("recoils")) {
    RecoilSettings rs{};
    rs.n = r.integer("recoils", "n");
    if (rs.n < 0) Reader::fail("recoils", "n", "must be >= 0");
    rs.wavelength_nm = r.positive("recoils", "wavelength_nm");
    rs.drift_time_s = r.optional_positive("recoils", "drift_time_s");
    cfg.recoils = rs;
  }

  if (auto v = r.real("measurement", "contrast")) {
    if (!(*v > 0.0 && *v <= 1.0)) Reader::fail("measurement", "contrast", "must lie in (0, 1]");
    cfg.contrast = v;
  }
  if (auto v = r.real("measurement", "initial_coherence")) {
    if (!(*v > 0.0 && *v <= 0.5))
      Reader::fail("measurement", "initial_coherence", "must lie in (0, 1/2]");
    cfg.initial_coherence = *v;
  }
  if (auto v = r.real("measurement", "attribution_fraction")) {
    if (!(*v > 0.0 && *v <= 1.0))
      Reader::fail("measurement", "attribution_fraction", "must lie in (0, 1]");
    cfg.attribution_fraction = *v;
  }

  if (const std::string* p = r.find("output", "csv")) cfg.csv_path = *p;
  if (r.find("output", "precision")) {
    cfg.precision = r.integer("output", "precision");
    if (cfg.precision < 1 || cfg.precision > 17)
      Reader::fail("output", "precision", "must lie in [1, 17]");
  }

  // Build the trajectory now so every geometry error surfaces at load time.
  try {
    if (cfg.shape == Trajectory::Shape::Sampled) {
      const std::string* path = r.find("trajectory", "samples_csv");
      if (!path) throw ConfigError("missing required key 'trajectory.samples_csv'");
      std::filesystem::path file(*path);
      if (file.is_relative() && !base_dir.empty()) file = std::filesystem::path(base_dir) / file;
      std::ifstream in(file);
      if (!in) throw ConfigError("'trajectory.samples_csv': cannot open '" + file.string() + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      cfg.samples_csv = file.string();
      try {
        cfg.trajectory_ = parse_samples_csv(buf.str());
      } catch (const ConfigError& e) {
        throw ConfigError(file.string() + ": " + e.what());
      }
    } else {
      if (!cfg.half_time_s) throw ConfigError("missing required key 'trajectory.half_time_s'");
      const double d = cfg.effective_d_max_m();
      const Quantity T = seconds(*cfg.half_time_s);
      switch (cfg.shape) {
        case Trajectory::Shape::PaperSmoothed:
          cfg.trajectory_ = Trajectory::paper_smoothed(metres(d), T);
          break;
        case Trajectory::Shape::Triangular:
          cfg.trajectory_ = Trajectory::triangular(metres(d), T);
          break;
        default:
          cfg.trajectory_ = Trajectory::constant(metres(d), seconds(2.0 * *cfg.half_time_s));
          break;
      }
    }
  } catch (const InputError& e) {
    throw ConfigError(std::string("[trajectory]: ") + e.what());
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::with_override(const std::string& section,
                                                 const std::string& key,
                                                 const std::string& value) const {
  check_known(section, key);
  RawConfig document = raw_;
  document[section][key] = value;
  return resolve(document, base_dir_);
}

Quantity ExperimentConfig::species_mass() const {
  return Quantity(species_mass_amu) * constants.amu;
}

EllisParameters ExperimentConfig::ellis() const {
  return EllisParameters(species_mass(), density_fraction, constants);
}

Quantity ExperimentConfig::gamma() const { return gamma_qg(ellis()); }

Quantity ExperimentConfig::sigma() const {
  return sigma_per_m ? per_metre(*sigma_per_m) : wormhole_sigma(constants);
}

LocalizationKernel ExperimentConfig::localization_kernel() const {
  if (kernel == KernelKind::Scattering)
    return LocalizationKernel::scattering(hertz(event_rate_hz.value_or(0.0)), sigma());
  return LocalizationKernel::quadratic(gamma(), prefactor);
}

double ExperimentConfig::effective_d_max_m() const {
  if (recoils) {
    const double T = recoils->drift_time_s ? *recoils->drift_time_s
                     : half_time_s           ? *half_time_s
                                             : throw ConfigError(
                                                   "missing 'recoils.drift_time_s' or "
                                                   "'trajectory.half_time_s'");
    const RecoilKinematics kin{recoils->n,
                               per_metre(2.0 * std::numbers::pi / (recoils->wavelength_nm * 1e-9)),
                               species_mass(), seconds(T)};
    const double d = max_separation_from_recoils(kin, constants).value();
    if (!(d > 0.0)) throw ConfigError("'recoils.n' yields zero separation");
    return d;
  }
  if (trajectory_) return trajectory_->peak_separation_m();
  if (!d_max_m) throw ConfigError("missing required key 'trajectory.d_max_m'");
  return *d_max_m;
}

}  // namespace qgdecoh
