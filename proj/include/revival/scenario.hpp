#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "revival/commensurate.hpp"
#include "revival/fractional.hpp"
#include "revival/models.hpp"
#include "revival/packet.hpp"
#include "revival/series_io.hpp"

namespace revival {

using nlohmann::json;

// Configuration fault, carrying the JSON path of the offending field.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& path, const std::string& message)
      : std::runtime_error("at " + path + ": " + message) {}
};

struct TimeGrid {
  double start = 0.0;
  double end = 1.0;
  int samples = 4096;
};

struct AnalysisOptions {
  int qmax = 12;
  long long max_den = 64;
  double tol = 1e-9;
  std::optional<double> tmax;  // defaults to the end of the time grid
  double peak_threshold = 0.1;
  std::vector<double> probe_times;
};

struct OutputPaths {
  std::string series = "series.csv";
  std::optional<std::string> series_json;
  std::string revivals = "revivals.json";
  std::string features = "features.json";
};

struct ScenarioConfig {
  EnergyModel model = Box2D(1.0, 1.0);
  Lattice lattice;
  double sigma1 = 2.5;
  double sigma2 = 2.5;
  EvolutionMode mode = EvolutionMode::exact;
  TimeGrid grid;
  AnalysisOptions analysis;
  OutputPaths output;
};

inline void validate(const ScenarioConfig& cfg) {
  validate(PacketSpec{cfg.lattice, cfg.sigma1, cfg.sigma2});
  if (cfg.grid.samples < 2) throw ConfigError("/time_grid/samples", "must be >= 2");
  if (!(cfg.grid.end > cfg.grid.start)) throw ConfigError("/time_grid", "end must exceed start");
  if (cfg.analysis.qmax < 1) throw ConfigError("/analysis/qmax", "must be >= 1");
  if (cfg.analysis.max_den < 1) throw ConfigError("/analysis/max_den", "must be >= 1");
  if (cfg.analysis.tol < 0) throw ConfigError("/analysis/tol", "must be >= 0");
  for (double t : cfg.analysis.probe_times)
    if (t < cfg.grid.start || t > cfg.grid.end)
      throw ConfigError("/analysis/probe_times", "probe time outside the sampled grid");
}

namespace detail {

template <class T>
T get_field(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) throw ConfigError(path + "/" + key, "missing required field");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "/" + key, "wrong type");
  }
}

template <class T>
T get_or(const json& j, const std::string& path, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "/" + key, "wrong type");
  }
}

inline Fraction fraction_field(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Fraction(j.get<long long>());
  if (j.is_string()) {
    auto f = Fraction::parse(j.get<std::string>());
    if (f) return *f;
  }
  throw ConfigError(path, "expected an integer or a \"p/q\" string");
}

inline EnergyModel parse_model(const json& j) {
  const std::string path = "/model";
  auto variant = get_field<std::string>(j, path, "variant");
  try {
    if (variant == "box2d") {
      if (j.contains("lengths_squared")) {
        const json& ls = j.at("lengths_squared");
        if (!ls.is_array() || ls.size() != 2)
          throw ConfigError(path + "/lengths_squared", "expected two entries");
        return Box2D::from_squared(fraction_field(ls[0], path + "/lengths_squared/0"),
                                   fraction_field(ls[1], path + "/lengths_squared/1"));
      }
      auto lengths = get_field<std::vector<double>>(j, path, "lengths");
      if (lengths.size() != 2) throw ConfigError(path + "/lengths", "expected two entries");
      return Box2D(lengths[0], lengths[1]);
    }
    if (variant == "stark") return StarkHydrogen(get_field<double>(j, path, "field"));
    if (variant == "polynomial") {
      Polynomial poly;
      auto terms = get_field<json>(j, path, "terms");
      if (!terms.is_array()) throw ConfigError(path + "/terms", "expected an array");
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tpath = path + "/terms/" + std::to_string(i);
        auto powers = get_field<std::vector<int>>(terms[i], tpath, "powers");
        if (powers.size() != 2 || powers[0] < 0 || powers[1] < 0)
          throw ConfigError(tpath + "/powers", "expected two non-negative integers");
        poly.coeffs[{powers[0], powers[1]}] = get_field<double>(terms[i], tpath, "coeff");
      }
      return poly;
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path + "/variant", "unknown variant '" + variant + "'");
}

}  // namespace detail

inline ScenarioConfig parse_config(const json& j) {
  ScenarioConfig cfg;
  int schema = detail::get_or<int>(j, "", "schema", 1);
  if (schema != 1) throw ConfigError("/schema", "unsupported schema version");

  if (!j.contains("model")) throw ConfigError("/model", "missing required field");
  cfg.model = detail::parse_model(j.at("model"));

  if (!j.contains("lattice")) throw ConfigError("/lattice", "missing required field");
  {
    const json& l = j.at("lattice");
    auto center = detail::get_field<std::vector<int>>(l, "/lattice", "center");
    if (center.size() != 2) throw ConfigError("/lattice/center", "expected two entries");
    cfg.lattice.nbar1 = center[0];
    cfg.lattice.nbar2 = center[1];
    auto step = detail::get_or<std::vector<int>>(l, "/lattice", "step", {1, 1});
    if (step.size() != 2) throw ConfigError("/lattice/step", "expected two entries");
    cfg.lattice.step1 = step[0];
    cfg.lattice.step2 = step[1];
    auto hw = detail::get_or<std::vector<int>>(l, "/lattice", "halfwidth", {12, 12});
    if (hw.size() != 2) throw ConfigError("/lattice/halfwidth", "expected two entries");
    cfg.lattice.halfwidth1 = hw[0];
    cfg.lattice.halfwidth2 = hw[1];
  }

  if (j.contains("packet")) {
    auto sigma = detail::get_field<std::vector<double>>(j.at("packet"), "/packet", "sigma");
    if (sigma.size() != 2) throw ConfigError("/packet/sigma", "expected two entries");
    cfg.sigma1 = sigma[0];
    cfg.sigma2 = sigma[1];
  }

  auto mode = detail::get_or<std::string>(j, "", "evolution", "exact");
  if (mode == "exact")
    cfg.mode = EvolutionMode::exact;
  else if (mode == "second_order" || mode == "second-order")
    cfg.mode = EvolutionMode::second_order;
  else
    throw ConfigError("/evolution", "expected 'exact' or 'second_order'");

  if (!j.contains("time_grid")) throw ConfigError("/time_grid", "missing required field");
  {
    const json& g = j.at("time_grid");
    cfg.grid.start = detail::get_or<double>(g, "/time_grid", "start", 0.0);
    cfg.grid.end = detail::get_field<double>(g, "/time_grid", "end");
    cfg.grid.samples = detail::get_field<int>(g, "/time_grid", "samples");
  }

  if (j.contains("analysis")) {
    const json& a = j.at("analysis");
    cfg.analysis.qmax = detail::get_or<int>(a, "/analysis", "qmax", 12);
    cfg.analysis.max_den = detail::get_or<long long>(a, "/analysis", "max_den", 64);
    cfg.analysis.tol = detail::get_or<double>(a, "/analysis", "tol", 1e-9);
    if (a.contains("tmax")) cfg.analysis.tmax = detail::get_field<double>(a, "/analysis", "tmax");
    cfg.analysis.peak_threshold = detail::get_or<double>(a, "/analysis", "peak_threshold", 0.1);
    cfg.analysis.probe_times =
        detail::get_or<std::vector<double>>(a, "/analysis", "probe_times", {});
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    cfg.output.series = detail::get_or<std::string>(o, "/output", "series", "series.csv");
    if (o.contains("series_json"))
      cfg.output.series_json = detail::get_field<std::string>(o, "/output", "series_json");
    cfg.output.revivals = detail::get_or<std::string>(o, "/output", "revivals", "revivals.json");
    cfg.output.features = detail::get_or<std::string>(o, "/output", "features", "features.json");
  }

  try {
    validate(cfg);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("", e.what());
  }
  return cfg;
}

inline ScenarioConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("/", "cannot open config file '" + file + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", std::string("JSON parse failure: ") + e.what());
  }
  return parse_config(j);
}

// Built-in reproductions of the two box scenarios.  The sample spacing is
// 1/(1024 pi) so that every revival feature time (all rational multiples
// of 1/pi here) falls exactly on a grid point.
inline ScenarioConfig preset(const std::string& name) {
  ScenarioConfig cfg;
  cfg.lattice = Lattice{18, 18, 1, 1, 12, 12};
  cfg.grid.start = 0.0;
  cfg.grid.end = 4095.0 / (1024.0 * pi);
  cfg.grid.samples = 4096;
  if (name == "figure1") {
    cfg.model = Box2D::from_squared(Fraction(3, 4), Fraction(1));
    double trev1 = 0.75 / pi;
    cfg.analysis.probe_times = {trev1, 2 * trev1, 3 * trev1, 4 * trev1};
    return cfg;
  }
  if (name == "figure2") {
    cfg.model = Box2D::from_squared(Fraction(1), Fraction(3));
    double trev1 = 1.0 / pi;
    cfg.analysis.probe_times = {0.5 * trev1, 0.75 * trev1, trev1,        1.5 * trev1,
                                2.0 * trev1, 2.25 * trev1, 2.5 * trev1, 3.0 * trev1};
    return cfg;
  }
  if (name == "stark") {
    cfg.model = StarkHydrogen(1e-6);
    cfg.lattice = Lattice{18, 2, 1, 2, 6, 4};
    cfg.sigma1 = 1.5;
    cfg.sigma2 = 1.0;
    cfg.grid.start = 0.0;
    cfg.grid.end = 250000.0;
    cfg.grid.samples = 4096;
    return cfg;
  }
  throw ConfigError("/preset", "unknown preset '" + name + "'");
}

inline std::vector<double> linspace(double start, double end, int samples) {
  std::vector<double> t(samples);
  double step = (end - start) / static_cast<double>(samples - 1);
  for (int i = 0; i < samples; ++i) t[i] = start + step * i;
  t.back() = end;
  return t;
}

// Interpolated |A(t)|^2 read off a sampled series.
inline double probe(const AutocorrelationSeries& s, double t) {
  if (s.times.empty() || t < s.times.front() || t > s.times.back())
    throw std::out_of_range("probe: time outside the sampled grid");
  auto it = std::lower_bound(s.times.begin(), s.times.end(), t);
  std::size_t i = static_cast<std::size_t>(it - s.times.begin());
  if (i < s.times.size() && s.times[i] == t) return s.abs2[i];
  double t0 = s.times[i - 1], t1 = s.times[i];
  double w = (t - t0) / (t1 - t0);
  return (1.0 - w) * s.abs2[i - 1] + w * s.abs2[i];
}

struct Feature {
  double t = 0.0;
  double abs2 = 0.0;
};

struct FeatureReport {
  std::vector<Feature> peaks;
  std::vector<Feature> plateaus;
};

inline std::vector<Feature> find_peaks(const AutocorrelationSeries& s, double threshold) {
  std::vector<Feature> peaks;
  for (std::size_t i = 1; i + 1 < s.abs2.size(); ++i)
    if (s.abs2[i] >= threshold && s.abs2[i] >= s.abs2[i - 1] && s.abs2[i] > s.abs2[i + 1])
      peaks.push_back(Feature{s.times[i], s.abs2[i]});
  return peaks;
}

inline json time_scales_to_json(const TimeScales& ts) {
  auto field = [](const std::optional<double>& v) {
    return v ? json(round15(*v)) : json(nullptr);
  };
  return {{"tcl1", field(ts.tcl1)},   {"tcl2", field(ts.tcl2)},
          {"trev1", field(ts.trev1)}, {"trev2", field(ts.trev2)},
          {"trev12", field(ts.trev12)}};
}

inline json revival_point_to_json(const RevivalPoint& point) {
  Classification cls = classify(point);
  json coeffs = json::array();
  for (const auto& row : point.coeffs) {
    json jrow = json::array();
    for (const Complex& c : row)
      jrow.push_back({round15(c.real()), round15(c.imag())});
    coeffs.push_back(jrow);
  }
  json fractions = {{"p1_q1", point.frac.p1q1.str()},
                    {"p2_q2", point.frac.p2q2.str()},
                    {"p12_q12", point.frac.p12q12 ? json(point.frac.p12q12->str()) : json(nullptr)}};
  json out = {{"t", round15(point.frac.t)}, {"fractions", fractions},
              {"l1", point.l1},             {"l2", point.l2},
              {"n_waves", cls.n_waves},     {"equal_norm", cls.equal_norm},
              {"separable", cls.separable}, {"residual", round15(verify_expansion(point))},
              {"coefficients", coeffs}};
  if (auto counts = component_wave_counts(point))
    out["component_waves"] = {counts->first, counts->second};
  return out;
}

struct ScenarioResult {
  DerivativeSet derivs;
  TimeScales scales;
  std::optional<CommensurateTriple> triple;
  std::vector<RevivalPoint> points;
  AutocorrelationSeries series;
  FeatureReport features;
};

// The exact-rational ratio path is used when the model provides one (box
// with rational squared lengths and no cross term); otherwise ratios are
// rationalized from the floating-point time scales.
inline std::optional<CommensurateTriple> commensurate_triple(const ScenarioConfig& cfg,
                                                             const TimeScales& ts) {
  if (!ts.trev1 || !ts.trev2) return std::nullopt;
  if (const auto* box = std::get_if<Box2D>(&cfg.model)) {
    if (auto ratio = exact_revival_ratio(*box, cfg.lattice))
      return exact_triple(*ratio);
  }
  return revival_triple(ts, cfg.analysis.max_den, cfg.analysis.tol);
}

inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  ScenarioResult res;
  res.derivs = derivatives(cfg.model, cfg.lattice);
  res.scales = timescales(res.derivs, cfg.lattice);

  CoefficientGrid grid = build_coefficients(PacketSpec{cfg.lattice, cfg.sigma1, cfg.sigma2});
  PhaseEvolution phases(cfg.model, cfg.lattice, cfg.mode);
  res.series = sample_series(grid, phases, linspace(cfg.grid.start, cfg.grid.end,
                                                    cfg.grid.samples));

  res.triple = commensurate_triple(cfg, res.scales);
  if (res.triple) {
    double tmax = cfg.analysis.tmax.value_or(cfg.grid.end);
    for (const FracTime& ft :
         enumerate_fractimes(*res.triple, res.scales, cfg.analysis.qmax, tmax))
      res.points.push_back(make_revival_point(ft));
  }

  res.features.peaks = find_peaks(res.series, cfg.analysis.peak_threshold);
  for (double t : cfg.analysis.probe_times)
    res.features.plateaus.push_back(Feature{t, probe(res.series, t)});
  return res;
}

inline json revivals_to_json(const ScenarioResult& res) {
  json out = {{"schema", 1},
              {"time_scales", time_scales_to_json(res.scales)},
              {"commensurate", res.triple.has_value()},
              {"points", json::array()}};
  if (res.triple) {
    out["triple"] = {{"base", "trev1"},
                     {"f1", res.triple->f1.str()},
                     {"f2", res.triple->f2.str()},
                     {"f12", res.triple->f12 ? json(res.triple->f12->str()) : json(nullptr)}};
  }
  for (const RevivalPoint& p : res.points) out["points"].push_back(revival_point_to_json(p));
  return out;
}

inline json features_to_json(const FeatureReport& report) {
  json peaks = json::array();
  for (const Feature& p : report.peaks)
    peaks.push_back({{"t", round15(p.t)}, {"abs2", round15(p.abs2)}});
  json plateaus = json::array();
  for (const Feature& p : report.plateaus)
    plateaus.push_back({{"t", round15(p.t)}, {"abs2", round15(p.abs2)}});
  return {{"peaks", peaks}, {"plateaus", plateaus}};
}

// Emits series.csv (optionally series.json), revivals.json and
// features.json under out_dir; identical inputs yield identical bytes.
inline void write_outputs(const ScenarioConfig& cfg, const ScenarioResult& res,
                          const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream os(out_dir / cfg.output.series);
    if (!os) throw std::runtime_error("cannot write " + cfg.output.series);
    write_series_csv(res.series, os);
  }
  if (cfg.output.series_json) {
    std::ofstream os(out_dir / *cfg.output.series_json);
    if (!os) throw std::runtime_error("cannot write " + *cfg.output.series_json);
    os << series_to_json(res.series).dump(2) << '\n';
  }
  {
    std::ofstream os(out_dir / cfg.output.revivals);
    if (!os) throw std::runtime_error("cannot write " + cfg.output.revivals);
    os << revivals_to_json(res).dump(2) << '\n';
  }
  {
    std::ofstream os(out_dir / cfg.output.features);
    if (!os) throw std::runtime_error("cannot write " + cfg.output.features);
    os << features_to_json(res.features).dump(2) << '\n';
  }
}

}  // namespace revival
