#include "ngl/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace ngl::io {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_gfd(const fs::path& path, const GridField& f) {
  json header;
  header["grid_n"] = f.n();
  header["domain"] = f.periodic() ? "torus" : "planar";
  header["side"] = f.side();
  if (!f.periodic()) header["origin"] = {f.origin().x, f.origin().y};
  std::string text = header.dump() + "\n";
  const std::size_t bytes = static_cast<std::size_t>(f.values().size()) * sizeof(double);
  const std::size_t head = text.size();
  text.resize(head + bytes);
  std::memcpy(text.data() + head, f.values().data(), bytes);
  write_text(path, text);
}

GridField read_gfd(const fs::path& path) {
  const std::string text = read_text(path);
  const auto eol = text.find('\n');
  if (eol == std::string::npos) throw ValidationError("missing header line in " + path.string());
  json header;
  try {
    header = json::parse(text.substr(0, eol));
  } catch (const json::exception& e) {
    throw ValidationError("bad field header in " + path.string() + ": " + e.what());
  }
  const int n = header.at("grid_n").get<int>();
  const std::string domain = header.at("domain").get<std::string>();
  const double side = header.at("side").get<double>();
  GridField f;
  if (domain == "torus") {
    f = GridField::torus(n);
  } else if (domain == "planar") {
    Point origin{-side / 2, -side / 2};
    if (header.contains("origin")) origin = {header["origin"][0].get<double>(), header["origin"][1].get<double>()};
    f = GridField::planar(n, origin, side);
  } else {
    throw ValidationError("unknown field domain '" + domain + "'");
  }
  const std::size_t bytes = static_cast<std::size_t>(n) * n * sizeof(double);
  if (text.size() - eol - 1 != bytes) throw ValidationError("field payload size mismatch in " + path.string());
  std::memcpy(f.values().data(), text.data() + eol + 1, bytes);
  return f;
}

void write_spectrum(const fs::path& dir, const eigen::Spectrum& spectrum) {
  fs::create_directories(dir);
  json index = json::array();
  for (std::size_t i = 0; i < spectrum.pairs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "pair_%03zu.gfd", i);
    write_gfd(dir / name, spectrum.pairs[i].field);
    index.push_back({{"lambda", spectrum.pairs[i].lambda}, {"residual", spectrum.pairs[i].residual}, {"file", name}});
  }
  write_text(dir / "index.json", index.dump(2) + "\n");
}

eigen::Spectrum read_spectrum(const fs::path& dir) {
  const json index = json::parse(read_text(dir / "index.json"));
  eigen::Spectrum sp;
  for (const auto& e : index) {
    eigen::EigenPair p;
    p.lambda = e.at("lambda").get<double>();
    p.residual = e.at("residual").get<double>();
    p.field = read_gfd(dir / e.at("file").get<std::string>());
    sp.grid_n = p.field.n();
    sp.pairs.push_back(std::move(p));
  }
  return sp;
}

void Csv::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) text_ += (i ? "," : "") + format_number(values[i]);
  text_ += "\n";
}

void Csv::row(const std::vector<std::string>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) text_ += (i ? "," : "") + values[i];
  text_ += "\n";
}

void Csv::save(const fs::path& path) const { write_text(path, text_); }

}  // namespace ngl::io
