#include "ngl/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "ngl/eigen.hpp"
#include "ngl/growth.hpp"

namespace ngl {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& key, const std::string& rule) {
  if (!ok) throw ValidationError("config: " + key + " " + rule);
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("config: ") + key + " has the wrong type");
  }
}

const json& section(const json& j, const char* key) {
  static const json empty = json::object();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_object()) throw ValidationError(std::string("config: ") + key + " must be an object");
  return j.at(key);
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ValidationError("config: unknown key '" + where + k + "'");
}

}  // namespace

void validate(const ExperimentConfig& c) {
  require(c.metric.name == "flat" || c.metric.name == "wave", "metric.name", "must be flat or wave");
  require(c.metric.scale > 0.0, "metric.scale", "must be positive");
  require(std::abs(c.metric.amplitude) < 1.0, "metric.amplitude", "must lie in (-1, 1) so q stays positive");
  require(c.grid_n >= 16 && c.grid_n <= 4096, "grid_n", "must lie in [16, 4096]");
  require(c.eigen_count >= 2, "eigen.count", "must be at least 2");
  require(c.eigen_tol > 0.0 && c.eigen_tol < 1e-2, "eigen.tol", "must lie in (0, 1e-2)");
  require(c.k0 > 0.0, "k0", "must be positive");
  for (double k : c.k0_sweep) require(k > 0.0, "k0_sweep", "entries must be positive");
  require(c.sample_grid_m >= 2, "sample_grid_m", "must be at least 2");
  require(c.eps0 > 0.0 && c.eps0 < 1.0, "eps0", "must lie in (0, 1)");
  require(c.planar_n >= 65, "planar_n", "must be at least 65");
  require(c.localize_pair >= 1 && c.localize_pair < c.eigen_count, "localize.pair",
          "must index a nonconstant eigenpair (1 .. eigen.count - 1)");
  require(c.family >= 0 && c.family < c.eigen_count, "family", "must be 0 (all) or below eigen.count");
  require(c.M0 >= 0.0, "M0", "must be nonnegative");
  require(c.a > 0.0 && c.a < 0.25, "a", "must lie in (0, 1/4)");
  require(c.rapid_delta > 0.0 && c.rapid_delta < 1.0 / 60.0, "rapid.delta", "must lie in (0, 1/60)");
  require(c.delta0 >= 0.0 && c.delta0 < 1.0 / 60.0, "tiling.delta0", "must be 0 or lie in (0, 1/60)");
  require(c.tiling_k_max >= 0 && c.tiling_k_max <= 24, "tiling.k_max", "must lie in [0, 24]");
  require(c.crofton_kernel == "disk" || c.crofton_kernel == "circle", "crofton.kernel", "must be disk or circle");
  require(c.crofton_curve == "segment" || c.crofton_curve == "eigenfunctions", "crofton.curve",
          "must be segment or eigenfunctions");
  require(c.crofton_r > 0.0 && c.crofton_r < 0.25, "crofton.r", "must lie in (0, 1/4)");
  require(c.crofton_samples >= 1, "crofton.samples", "must be positive");
  require(c.harmonic_traces >= 1, "harmonic.traces", "must be positive");
  require(c.harmonic_max_degree >= 1 && c.harmonic_max_degree <= 60, "harmonic.max_degree", "must lie in [1, 60]");
  require(c.harmonic_r0 > 0.0 && c.harmonic_r0 < 0.5, "harmonic.r0", "must lie in (0, 1/2)");
  require(c.rho_plus > 0.0 && c.rho_plus < 0.5, "harmonic.rho_plus", "must lie in (0, 1/2)");
  require(c.rho_minus >= 0.0 && c.rho_minus < c.rho_plus, "harmonic.rho_minus", "must be 0 or lie in (0, rho_plus)");
  require(c.carleman_delta > 0.0 && c.carleman_delta < 1.0 / 60.0, "carleman.delta", "must lie in (0, 1/60)");
  require(c.carleman_a > 0.0 && c.carleman_a < 0.25, "carleman.a", "must lie in (0, 1/4)");
  require(c.carleman_t > 0.0, "carleman.t", "must be positive");
  require(c.carleman_family >= 2, "carleman.family", "must be at least 2");

  // Resolution guards against a Weyl-law estimate of the top eigenvalue,
  // 4 pi (count - 1) / Vol, discounted by 20% so only clearly unresolvable
  // configs are rejected here; the exact guards run again on the computed spectrum.
  const double q_plus = c.metric.scale * (c.metric.name == "wave" ? 1.0 + std::abs(c.metric.amplitude) : 1.0);
  const double lambda_est = 0.8 * 4.0 * pi * (c.eigen_count - 1) / c.metric.scale;
  const int need = eigen::required_grid_n(lambda_est, q_plus);
  require(need <= c.grid_n, "grid_n",
          "is too coarse for " + std::to_string(c.eigen_count) + " eigenpairs (need about " + std::to_string(need) + ")");
  const int growth_need = growth::growth_grid_n(lambda_est * q_plus, c.k0);
  require(growth_need <= c.grid_n, "grid_n",
          "gives fewer than 10 cells per wavelength radius at k0 = " + std::to_string(c.k0) + " (need about " +
              std::to_string(growth_need) + "); raise grid_n or k0");
}

nlohmann::json to_json(const ExperimentConfig& c) {
  return json{
      {"version", config_version},
      {"metric", {{"name", c.metric.name}, {"amplitude", c.metric.amplitude}, {"kx", c.metric.kx}, {"ky", c.metric.ky}, {"scale", c.metric.scale}}},
      {"grid_n", c.grid_n},
      {"eigen", {{"count", c.eigen_count}, {"tol", c.eigen_tol}}},
      {"k0", c.k0},
      {"k0_sweep", c.k0_sweep},
      {"sample_grid_m", c.sample_grid_m},
      {"eps0", c.eps0},
      {"planar_n", c.planar_n},
      {"localize", {{"pair", c.localize_pair}}},
      {"family", c.family},
      {"M0", c.M0},
      {"a", c.a},
      {"rapid", {{"delta", c.rapid_delta}}},
      {"tiling", {{"delta0", c.delta0}, {"k_max", c.tiling_k_max}}},
      {"crofton", {{"kernel", c.crofton_kernel}, {"curve", c.crofton_curve}, {"r", c.crofton_r}, {"samples", c.crofton_samples}}},
      {"harmonic",
       {{"traces", c.harmonic_traces}, {"max_degree", c.harmonic_max_degree}, {"r0", c.harmonic_r0}, {"rho_plus", c.rho_plus}, {"rho_minus", c.rho_minus}}},
      {"carleman", {{"delta", c.carleman_delta}, {"a", c.carleman_a}, {"t", c.carleman_t}, {"family", c.carleman_family}}},
      {"seed", c.seed},
  };
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config: top level must be a JSON object");
  if (!j.contains("version")) throw ValidationError("config: missing \"version\" (current schema is 1)");
  int version = 0;
  read(j, "version", version);
  if (version != config_version) throw ValidationError("config: unsupported version " + std::to_string(version));
  reject_unknown(j,
                 {"version", "metric", "grid_n", "eigen", "k0", "k0_sweep", "sample_grid_m", "eps0", "planar_n", "localize",
                  "family", "M0", "a", "rapid", "tiling", "crofton", "harmonic", "carleman", "seed"},
                 "");
  ExperimentConfig c;
  const json& m = section(j, "metric");
  reject_unknown(m, {"name", "amplitude", "kx", "ky", "scale"}, "metric.");
  read(m, "name", c.metric.name);
  read(m, "amplitude", c.metric.amplitude);
  read(m, "kx", c.metric.kx);
  read(m, "ky", c.metric.ky);
  read(m, "scale", c.metric.scale);
  read(j, "grid_n", c.grid_n);
  const json& e = section(j, "eigen");
  reject_unknown(e, {"count", "tol"}, "eigen.");
  read(e, "count", c.eigen_count);
  read(e, "tol", c.eigen_tol);
  read(j, "k0", c.k0);
  read(j, "k0_sweep", c.k0_sweep);
  read(j, "sample_grid_m", c.sample_grid_m);
  read(j, "eps0", c.eps0);
  read(j, "planar_n", c.planar_n);
  const json& l = section(j, "localize");
  reject_unknown(l, {"pair"}, "localize.");
  read(l, "pair", c.localize_pair);
  read(j, "family", c.family);
  read(j, "M0", c.M0);
  read(j, "a", c.a);
  const json& r = section(j, "rapid");
  reject_unknown(r, {"delta"}, "rapid.");
  read(r, "delta", c.rapid_delta);
  const json& t = section(j, "tiling");
  reject_unknown(t, {"delta0", "k_max"}, "tiling.");
  read(t, "delta0", c.delta0);
  read(t, "k_max", c.tiling_k_max);
  const json& cr = section(j, "crofton");
  reject_unknown(cr, {"kernel", "curve", "r", "samples"}, "crofton.");
  read(cr, "kernel", c.crofton_kernel);
  read(cr, "curve", c.crofton_curve);
  read(cr, "r", c.crofton_r);
  read(cr, "samples", c.crofton_samples);
  const json& h = section(j, "harmonic");
  reject_unknown(h, {"traces", "max_degree", "r0", "rho_plus", "rho_minus"}, "harmonic.");
  read(h, "traces", c.harmonic_traces);
  read(h, "max_degree", c.harmonic_max_degree);
  read(h, "r0", c.harmonic_r0);
  read(h, "rho_plus", c.rho_plus);
  read(h, "rho_minus", c.rho_minus);
  const json& ca = section(j, "carleman");
  reject_unknown(ca, {"delta", "a", "t", "family"}, "carleman.");
  read(ca, "delta", c.carleman_delta);
  read(ca, "a", c.carleman_a);
  read(ca, "t", c.carleman_t);
  read(ca, "family", c.carleman_family);
  read(j, "seed", c.seed);
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config: " + path.string() + " is not valid JSON (" + e.what() + ")");
  }
  return config_from_json(j);
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const ExperimentConfig& c) { return fnv1a_hex(to_json(c).dump()); }

}  // namespace ngl
