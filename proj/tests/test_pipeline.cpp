#include <doctest.h>

#include <sstream>

#include "ngl/config.hpp"
#include "ngl/io.hpp"
#include "ngl/pipeline.hpp"
#include "ngl/svg.hpp"

using namespace ngl;
namespace fs = std::filesystem;

namespace {

int count_of(const std::string& s, const std::string& what) {
  int n = 0;
  for (std::size_t at = s.find(what); at != std::string::npos; at = s.find(what, at + 1)) ++n;
  return n;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ngl_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config hash ignores key order") {
  const auto a = nlohmann::json::parse(R"({"version":1,"grid_n":520,"k0":0.5,"metric":{"name":"flat","scale":1}})");
  const auto b = nlohmann::json::parse(R"({"metric":{"scale":1,"name":"flat"},"k0":0.5,"grid_n":520,"version":1})");
  CHECK(config_hash(config_from_json(a)) == config_hash(config_from_json(b)));
  auto c = config_from_json(a);
  c.seed = 2;
  CHECK(config_hash(c) != config_hash(config_from_json(a)));
  CHECK(config_hash(c).size() == 16);
  // Round trip through JSON.
  CHECK(config_hash(config_from_json(to_json(c))) == config_hash(c));
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
}

TEST_CASE("config validation") {
  using nlohmann::json;
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"grid_n":520})")), ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"version":2})")), ValidationError);
  CHECK_THROWS_WITH_AS(config_from_json(json::parse(R"({"version":1,"gridn":520})")), doctest::Contains("gridn"),
                       ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"version":1,"grid_n":"big"})")), ValidationError);
  CHECK_THROWS_WITH_AS(config_from_json(json::parse(R"({"version":1,"grid_n":128})")), doctest::Contains("grid_n"),
                       ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"version":1,"a":0.3})")), ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"version":1,"rapid":{"delta":0.1}})")), ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"version":1,"crofton":{"kernel":"square"}})")), ValidationError);
  const auto d = config_from_json(json::parse(R"({"version":1})"));
  CHECK(d.grid_n == 520);
  CHECK(d.eigen_count == 31);
  CHECK(d.k0 == 0.5);
}

TEST_CASE("svg output") {
  const std::string empty = svg::nodal_plot({}, {0, 0, 1, 1});
  CHECK(empty.rfind("<svg", 0) == 0);
  CHECK(empty.find("</svg>") != std::string::npos);
  CHECK(count_of(empty, "<line") == 2);  // the two axes only
  nodal::NodalSet one;
  one.segments.push_back({{0.1, 0.1}, {0.9, 0.9}});
  CHECK(count_of(svg::nodal_plot(one, {0, 0, 1, 1}), "<line") == 3);

  const std::vector<double> xs{1, 2, 3, 4}, ys{0.5, 0.4, 0.6, 0.5};
  const auto sc = svg::scatter_plot(xs, ys, "lambda", "A");
  CHECK(count_of(sc, "<circle") == 4);
  CHECK(sc.find(">lambda<") != std::string::npos);
  CHECK(sc.find(">A<") != std::string::npos);
  CHECK(sc == svg::scatter_plot(xs, ys, "lambda", "A"));

  tiling::TilingState st;
  st.delta0 = tiling::p_side / 4;
  st.n0 = 4;
  st.k_max = 1;
  st.slow = {{{0, 0, 0}, {0, 1, 0}}, {}};
  st.rapid = {{{0, 2, 2}}, {{1, 4, 4}}};
  const auto ts = svg::tiling_plot(st);
  CHECK(count_of(ts, "fill=\"#9ecae1\"") == 2);
  CHECK(count_of(ts, "fill=\"#fc9272\"") == 1);
}

TEST_CASE("drift") {
  CHECK(pipeline::drift(0.0, 0.0) == 0.0);
  CHECK(pipeline::drift(2.0, 2.5) == doctest::Approx(0.25));
  CHECK(std::isinf(pipeline::drift(0.0, 1.0)));
}

TEST_CASE("commands rerun byte-identically") {
  auto c = config_from_json(nlohmann::json::parse(
      R"({"version":1,"grid_n":192,"eigen":{"count":9},"sample_grid_m":8,"harmonic":{"traces":10},"carleman":{"family":4}})"));
  const fs::path a = scratch("a"), b = scratch("b");
  std::ostringstream log;
  for (const char* cmd : {"harmonic", "carleman", "crofton", "spectrum", "tile"}) {
    pipeline::run_command(cmd, c, a, log);
    pipeline::run_command(cmd, c, b, log);
  }
  int files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++files;
    CHECK(io::read_text(e.path()) == io::read_text(b / e.path().filename()));
  }
  CHECK(files >= 15);
  // Second spectrum request is served from the cache with the same index.
  bool hit = false;
  pipeline::load_or_solve_spectrum(c, a, &hit);
  CHECK(hit);
  CHECK_THROWS_AS(pipeline::run_command("nope", c, a, log), ValidationError);
  fs::remove_all(a);
  fs::remove_all(b);
}
