// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// The grid-520 spectrum is cached under ./acceptance_cache (the build directory
// under ctest) so reruns skip the solve.

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ngl/carleman.hpp"
#include "ngl/config.hpp"
#include "ngl/crofton.hpp"
#include "ngl/growth.hpp"
#include "ngl/harmonic.hpp"
#include "ngl/io.hpp"
#include "ngl/nodal.hpp"
#include "ngl/parallel.hpp"
#include "ngl/pipeline.hpp"

using namespace ngl;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double spectrum_tol = 0.01;
constexpr double spectrum_seconds = 60;
constexpr double sin_length_tol = 1e-3;
constexpr double circle_length_tol = 5e-3;
constexpr double nodal_seconds = 10;
constexpr double growth_tol = 1e-6;
constexpr double growth_seconds = 1;
constexpr double spread_max = 100;
constexpr double spread_change_max = 0.25;
constexpr double ratio_table_seconds = 15 * 60;
constexpr double quartile_ratio_max = 2;
constexpr double df_drift_max = 0.2;
constexpr double crofton_stderr_max = 0.01;
constexpr double kinematic_tol = 5e-4;
constexpr double crofton_seconds = 120;
constexpr double family_drift_max = 0.2;
constexpr double margin_floor = -1e-6;
constexpr double closed_form_tol = 1e-8;
constexpr double carleman_drift_max = 0.2;
constexpr double carleman_seconds = 300;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

double max_of(const std::vector<double>& v, std::size_t count) {
  double m = 0.0;
  for (std::size_t i = 0; i < count && i < v.size(); ++i) m = std::max(m, v[i]);
  return m;
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

boost::multiprecision::cpp_int robertson_oracle(int p) {
  using boost::multiprecision::cpp_int;
  cpp_int f2p = 1, fp = 1;
  for (int i = 2; i <= 2 * p; ++i) f2p *= i;
  for (int i = 2; i <= p; ++i) fp *= i;
  return (cpp_int(1) << (2 * p)) + f2p / (fp * fp);
}

// Relative path -> bytes for every regular file below root.
std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) {
      std::ifstream in(e.path(), std::ios::binary);
      std::ostringstream s;
      s << in.rdbuf();
      files[fs::relative(e.path(), root).string()] = s.str();
    }
  return files;
}

}  // namespace

int main() {
  set_thread_count(1);
  const fs::path work = fs::current_path() / "acceptance_cache";
  fs::create_directories(work);

  eigen::Spectrum small;  // grid 256, shared with the Crofton check

  criterion(1, "flat-torus spectrum at grid 256", [&] {
    const auto t0 = Clock::now();
    const auto metric = surface::make_metric({"flat"}, 256);
    small = eigen::solve_spectrum(eigen::assemble_operators(metric), 21, 1e-6);
    const double secs = seconds_since(t0);
    // Continuum values 4 pi^2 (m^2 + n^2), ascending.
    std::vector<double> exact;
    for (int m = -5; m <= 5; ++m)
      for (int n = -5; n <= 5; ++n) exact.push_back(4 * pi * pi * (m * m + n * n));
    std::sort(exact.begin(), exact.end());
    double worst = 0.0;
    for (int i = 1; i <= 20; ++i) worst = std::max(worst, std::abs(small.pairs[i].lambda / exact[i] - 1));
    int mult1 = 0, mult2 = 0;
    for (const auto& p : small.pairs) {
      if (std::abs(p.lambda / (4 * pi * pi) - 1) < spectrum_tol) ++mult1;
      if (std::abs(p.lambda / (8 * pi * pi) - 1) < spectrum_tol) ++mult2;
    }
    const bool ok = worst < spectrum_tol && mult1 == 4 && mult2 == 4 && secs < spectrum_seconds;
    return Outcome{ok, "max rel err " + fmt("%.3e", worst) + ", multiplicities " + std::to_string(mult1) + "/" +
                           std::to_string(mult2) + ", " + fmt("%.1f s", secs)};
  });

  criterion(2, "nodal length of sin(2 pi m x) and a circle", [] {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int m = 1; m <= 5; ++m) {
      const auto f = GridField::sample_torus(256, [m](double x, double) { return std::sin(two_pi * m * x); });
      worst = std::max(worst, std::abs(nodal::extract_nodal_set(f).euclidean_length / (2.0 * m) - 1));
    }
    const double r = 0.3;
    const auto c = GridField::sample_planar(512, {-0.5, -0.5}, 1.0, [r](double x, double y) { return x * x + y * y - r * r; });
    const double circle = std::abs(nodal::extract_nodal_set(c).euclidean_length / (two_pi * r) - 1);
    const double secs = seconds_since(t0);
    return Outcome{worst < sin_length_tol && circle < circle_length_tol && secs < nodal_seconds,
                   "sin max rel err " + fmt("%.2e", worst) + ", circle " + fmt("%.2e", circle) + ", " +
                       fmt("%.2f s", secs)};
  });

  criterion(3, "growth exponents of |z|^n", [] {
    const auto t0 = Clock::now();
    const Lattice lat{{0.0, 0.0}, 1.0 / 128};
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n) {
      auto f = [n](double x, double y) { return std::pow(std::hypot(x, y), n); };
      worst = std::max(worst, std::abs(growth::growth_exponent(f, {0, 0}, 1.0, 0.5, lat) - n * std::log(2.0)));
      worst = std::max(worst, std::abs(growth::growth_exponent(f, {0, 0}, 1.0, 0.2, lat) - n * std::log(5.0)));
    }
    const double secs = seconds_since(t0);
    return Outcome{worst < growth_tol && secs < growth_seconds,
                   "max abs err " + fmt("%.2e", worst) + ", " + fmt("%.3f s", secs)};
  });

  // Family runs at grid 520: 50 nonconstant pairs, base family the first 30.
  ExperimentConfig big;
  big.grid_n = 520;
  big.eigen_count = 51;
  big.k0 = 0.5;
  big.sample_grid_m = 32;
  validate(big);
  eigen::Spectrum spectrum;
  growth::Theorem1Report full, base;
  double ratio_table_secs = 0.0;
  bool cached = false;
  try {
    const auto t0 = Clock::now();
    spectrum = pipeline::load_or_solve_spectrum(big, work, &cached);
    const auto metric = surface::make_metric(big.metric, big.grid_n);
    full = growth::verify_theorem1(metric, spectrum, big.k0, big.sample_grid_m);
    base = growth::truncate_report(full, 30);
    ratio_table_secs = seconds_since(t0);
  } catch (const std::exception& e) {
    std::printf("grid-520 family failed: %s\n", e.what());
  }
  const bool have_family = full.rows.size() == 50;

  criterion(4, "length ratios over 30 and 50 eigenfunctions", [&] {
    if (!have_family) return Outcome{false, "no family"};
    bool finite = true;
    for (const auto& r : full.rows) finite = finite && finite_positive(r.lower_ratio) && finite_positive(r.upper_ratio);
    const double ch_lo = pipeline::drift(base.lower_spread(), full.lower_spread());
    const double ch_up = pipeline::drift(base.upper_spread(), full.upper_spread());
    const bool ok = finite && base.lower_spread() < spread_max && base.upper_spread() < spread_max &&
                    full.lower_spread() < spread_max && full.upper_spread() < spread_max && ch_lo < spread_change_max &&
                    ch_up < spread_change_max && ratio_table_secs < ratio_table_seconds;
    return Outcome{ok, "spreads " + fmt("%.4f", base.lower_spread()) + "/" + fmt("%.4f", base.upper_spread()) + " -> " +
                           fmt("%.4f", full.lower_spread()) + "/" + fmt("%.4f", full.upper_spread()) + ", change " +
                           fmt("%.3f", std::max(ch_lo, ch_up)) + ", " + fmt("%.0f s", ratio_table_secs) +
                           (cached ? " (cached spectrum)" : "")};
  });

  criterion(5, "average growth stays bounded", [&] {
    if (!have_family) return Outcome{false, "no family"};
    const std::size_t q = base.rows.size() / 4;
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      first += base.rows[i].A / q;
      last += base.rows[base.rows.size() - q + i].A / q;
    }
    const double ratio = last / first;
    return Outcome{finite_positive(ratio) && ratio < quartile_ratio_max,
                   "last/first quartile mean A " + fmt("%.4f", ratio)};
  });

  criterion(6, "max growth over sqrt(lambda)", [&] {
    if (!have_family) return Outcome{false, "no family"};
    const double d = pipeline::drift(base.df_constant, full.df_constant);
    return Outcome{finite_positive(base.df_constant) && d < df_drift_max,
                   "constant " + fmt("%.4f", base.df_constant) + " -> " + fmt("%.4f", full.df_constant) + ", drift " +
                       fmt("%.3f", d)};
  });

  criterion(7, "Crofton estimators", [&] {
    const auto t0 = Clock::now();
    const auto seg = crofton::disk_average_length(crofton::segment_curve({0, 0}, {1, 0}), 0.05, 100000, 7);
    const bool seg_ok = std::abs(seg.value - 1) <= 3 * seg.stderr_ && seg.stderr_ < crofton_stderr_max;
    const double kin = crofton::circle_constant_quadrature(0.1, 1.0, 3000) / 0.4 - 1;
    int agree = 0;
    for (int i = 1; i <= 5 && i < static_cast<int>(small.pairs.size()); ++i) {
      const auto c = crofton::crofton_consistency(nodal::extract_nodal_set(small.pairs[i].field), 0.05, 100000, 11 + i);
      if (c.disk_agrees && c.circle_agrees) ++agree;
    }
    const double secs = seconds_since(t0);
    return Outcome{seg_ok && std::abs(kin) < kinematic_tol && agree == 5 && secs < crofton_seconds,
                   "segment " + fmt("%.4f", seg.value) + " +- " + fmt("%.4f", seg.stderr_) + ", 4r rel err " +
                       fmt("%.1e", kin) + ", eigenfunctions agreeing " + std::to_string(agree) + "/5, " +
                       fmt("%.1f s", secs)};
  });

  // Localized family for the tiling and rapid-disk counts.
  std::vector<pipeline::Localized> localized;
  if (have_family) {
    try {
      const auto metric = surface::make_metric(big.metric, big.grid_n);
      for (int i = 1; i <= 50; ++i) localized.push_back(pipeline::localize_pair(spectrum, metric, i, big));
    } catch (const std::exception& e) {
      std::printf("localization failed: %s\n", e.what());
      localized.clear();
    }
  }

  criterion(8, "square tiling over the localized family", [&] {
    if (localized.size() != 50) return Outcome{false, "no localized family"};
    bool exact = true, bounds = true, recon = true, finite = true;
    std::vector<double> ratios;
    for (const auto& L : localized) {
      const auto t = pipeline::tile_row(L, big);
      exact = exact && t.partition_exact;
      bounds = bounds && t.level_bound_holds;
      recon = recon && t.reconstruction_ok;
      finite = finite && finite_positive(t.bound.ratio);
      ratios.push_back(t.bound.ratio);
    }
    const double b = max_of(ratios, 30), e = max_of(ratios, 50), d = pipeline::drift(b, e);
    return Outcome{exact && bounds && recon && finite && d < family_drift_max,
                   std::string("partition ") + (exact ? "exact" : "broken") + ", level bound " +
                       (bounds ? "holds" : "violated") + ", reconstruction " + (recon ? "within 1%" : "off") +
                       ", ratio " + fmt("%.5f", b) + " -> " + fmt("%.5f", e) + ", drift " + fmt("%.3f", d)};
  });

  criterion(9, "rapid-disk counts", [&] {
    if (localized.size() != 50) return Outcome{false, "no localized family"};
    std::vector<double> ratios;
    int rapid = 0;
    for (const auto& L : localized) {
      const auto r = pipeline::rapid_row(L, big);
      ratios.push_back(r.count.ratio);
      rapid += r.count.n_rapid;
    }
    const double b = max_of(ratios, 30), e = max_of(ratios, 50), d = pipeline::drift(b, e);
    schrodinger::LocalizeOptions opts;
    opts.planar_n = 129;
    const auto one = schrodinger::make_planar([](double, double) { return 1.0; }, {}, opts);
    const auto at_m0 = schrodinger::count_rapid_disks(one, big.rapid_delta, big.M0, big.a);
    const auto at_zero = schrodinger::count_rapid_disks(one, big.rapid_delta, 0.0, big.a);
    const bool constant_ok = at_m0.n_rapid == 0 && at_zero.n_rapid == static_cast<int>(at_zero.probes.size()) &&
                             !at_zero.probes.empty();
    return Outcome{std::isfinite(e) && d < family_drift_max && constant_ok,
                   "rapid disks over family " + std::to_string(rapid) + ", ratio " + fmt("%.4f", b) + " -> " +
                       fmt("%.4f", e) + ", drift " + fmt("%.3f", d) + ", constant field " +
                       std::to_string(at_m0.n_rapid) + " at M0, " + std::to_string(at_zero.n_rapid) + "/" +
                       std::to_string(at_zero.probes.size()) + " at M = 0"};
  });

  criterion(10, "growth against sign changes on the circle", [&] {
    int held = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
      if (harmonic::growth_vs_signs_check(harmonic::random_trace(1 + static_cast<int>(seed % 10), seed), big.harmonic_r0)
              .holds)
        ++held;
    int powers = 0;
    for (int n = 1; n <= 10; ++n)
      if (harmonic::growth_vs_signs_check(harmonic::sample_trace([n](double t) { return std::cos(n * t); }, 512),
                                          big.harmonic_r0)
              .holds)
        ++powers;
    int exact = 0;
    for (int p = 0; p <= 31; ++p)
      if (boost::multiprecision::cpp_int(harmonic::robertson_constant(p).value) == robertson_oracle(p)) ++exact;
    return Outcome{held == 100 && powers == 10 && exact == 32,
                   "random traces " + std::to_string(held) + "/100, Re z^n " + std::to_string(powers) +
                       "/10, c(p) exact " + std::to_string(exact) + "/32"};
  });

  criterion(11, "Carleman suite", [&] {
    const auto t0 = Clock::now();
    double ode = 0.0;
    for (double c : {1.0, 0.7, 3.0}) {
      const auto p = carleman::solve_radial(carleman::constant_h(c), 0.5, 2.0);
      for (double r : {0.5, 0.61, 0.8, 0.95, 1.0, 1.3, 2.0})
        ode = std::max(ode, std::abs(p.log_psi(r) - (c * r * r / 4 - c / 2 * std::log(r) - c / 4)));
    }
    const ExperimentConfig c;  // default family: 120 extended to 240
    const fs::path out = work / "carleman";
    fs::remove_all(out);
    std::ostringstream log;
    pipeline::run_command("carleman", c, out, log);
    const auto j = nlohmann::json::parse(io::read_text(out / "carleman.json"));
    const int pairs = j["family_size"];
    const double margin = j["min_margin"];
    const bool all = j["all_hold"];
    const double b = j["estimate"]["base_constant"], e = j["estimate"]["extended_constant"];
    const double d = j["estimate"]["drift"];
    const double secs = seconds_since(t0);
    const bool ok = pairs == 60 && all && margin >= margin_floor && ode < closed_form_tol && finite_positive(e) &&
                    d < carleman_drift_max && secs < carleman_seconds;
    return Outcome{ok, std::to_string(pairs) + " pairs, min relative margin " + fmt("%.3g", margin) +
                           ", ODE err " + fmt("%.1e", ode) + ", constant " + fmt("%.4g", b) + " -> " + fmt("%.4g", e) +
                           ", drift " + fmt("%.3f", d) + ", " + fmt("%.1f s", secs)};
  });

  criterion(12, "byte-identical reruns", [&] {
    ExperimentConfig c;
    c.grid_n = 192;
    c.eigen_count = 9;
    c.sample_grid_m = 16;
    c.harmonic_traces = 20;
    c.carleman_family = 10;
    validate(c);
    const fs::path a = work / "rerun_a", b = work / "rerun_b";
    fs::remove_all(a);
    fs::remove_all(b);
    std::ostringstream log;
    pipeline::run_command("all", c, a, log);
    pipeline::run_command("all", c, b, log);
    const auto sa = snapshot(a), sb = snapshot(b);
    int differing = 0;
    for (const auto& [name, bytes] : sa) {
      const auto it = sb.find(name);
      if (it == sb.end() || it->second != bytes) ++differing;
    }
    if (sa.size() != sb.size()) ++differing;
    return Outcome{differing == 0 && sa.size() > 20,
                   std::to_string(sa.size()) + " files from every command, " + std::to_string(differing) + " differing"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
