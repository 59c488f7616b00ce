#include "reludim/io.hpp"

#include "reludim/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace reludim {

namespace {

using nlohmann::json;

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  throw InputError("expected a rational value (string \"p/q\" or number)");
}

json rational_to_json(const Rational& r) { return rational_to_string(r); }

json parse_file(const std::string& path) {
  std::string text = read_text_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("file is not valid JSON: " + path);
  return j;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream ifs(path, std::ios::binary);
  if (!ifs) throw InputError("cannot open file: " + path);
  std::ostringstream os;
  os << ifs.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream ofs(path, std::ios::binary | std::ios::trunc);
  if (!ofs) throw InputError("cannot write file: " + path);
  ofs << content;
}

LoadedNetwork load_network(const std::string& path) {
  json j = parse_file(path);
  if (!j.contains("architecture") || !j["architecture"].is_array())
    throw InputError("network file is missing the architecture list");

  std::vector<int> widths;
  for (const auto& w : j["architecture"]) widths.push_back(w.get<int>());
  if (!widths.empty() && widths.back() != 1)
    throw InputError("network has output dimension " + std::to_string(widths.back()) +
                     "; only output dimension 1 is supported");
  Architecture arch(widths);

  if (!j.contains("weights") || !j.contains("biases"))
    throw InputError("network file needs weights and biases");
  const auto& jw = j["weights"];
  const auto& jb = j["biases"];
  if (jw.size() != static_cast<std::size_t>(arch.depth()) ||
      jb.size() != static_cast<std::size_t>(arch.depth()))
    throw InputError("weights/biases layer count does not match the architecture");

  std::vector<RationalMatrix> weights;
  std::vector<std::vector<Rational>> biases;
  for (int l = 1; l <= arch.depth(); ++l) {
    const auto& wm = jw[l - 1];
    if (wm.size() != static_cast<std::size_t>(arch.width(l)))
      throw InputError("weight matrix row count mismatch at layer " + std::to_string(l));
    RationalMatrix w(arch.width(l), arch.width(l - 1));
    for (int r = 0; r < arch.width(l); ++r) {
      if (wm[r].size() != static_cast<std::size_t>(arch.width(l - 1)))
        throw InputError("weight matrix column count mismatch at layer " + std::to_string(l));
      for (int c = 0; c < arch.width(l - 1); ++c) w.at(r, c) = rational_from_json(wm[r][c]);
    }
    std::vector<Rational> b;
    for (const auto& v : jb[l - 1]) b.push_back(rational_from_json(v));
    weights.push_back(std::move(w));
    biases.push_back(std::move(b));
  }

  LoadedNetwork net{Parameter(arch, std::move(weights), std::move(biases)), "rational"};
  if (j.contains("number_mode")) {
    net.number_mode = j["number_mode"].get<std::string>();
    if (net.number_mode != "rational" && net.number_mode != "float64")
      throw InputError("number_mode must be \"rational\" or \"float64\"");
  }
  return net;
}

void save_network(const Parameter& param, const std::string& number_mode,
                  const std::string& path) {
  const Architecture& arch = param.arch();
  json j;
  j["architecture"] = arch.widths();
  json weights = json::array();
  json biases = json::array();
  for (int l = 1; l <= arch.depth(); ++l) {
    json wm = json::array();
    for (int r = 0; r < arch.width(l); ++r) {
      json row = json::array();
      for (int c = 0; c < arch.width(l - 1); ++c)
        row.push_back(rational_to_json(param.weight(l).at(r, c)));
      wm.push_back(row);
    }
    json bv = json::array();
    for (const auto& b : param.bias(l)) bv.push_back(rational_to_json(b));
    weights.push_back(wm);
    biases.push_back(bv);
  }
  j["weights"] = weights;
  j["biases"] = biases;
  j["number_mode"] = number_mode;
  write_text_file(path, j.dump(2) + "\n");
}

std::vector<std::vector<Rational>> load_batch(const std::string& path) {
  json j = parse_file(path);
  if (!j.contains("points") || !j["points"].is_array())
    throw InputError("batch file is missing the points list");
  std::vector<std::vector<Rational>> batch;
  for (const auto& p : j["points"]) {
    std::vector<Rational> point;
    for (const auto& c : p) point.push_back(rational_from_json(c));
    batch.push_back(std::move(point));
  }
  return batch;
}

void save_batch(const std::vector<std::vector<Rational>>& batch, const std::string& path) {
  json points = json::array();
  for (const auto& p : batch) {
    json point = json::array();
    for (const auto& c : p) point.push_back(rational_to_json(c));
    points.push_back(point);
  }
  json j;
  j["points"] = points;
  write_text_file(path, j.dump(2) + "\n");
}

PolyFamily load_family(const std::string& path) {
  json j = parse_file(path);
  if (!j.contains("D") || !j.contains("slots"))
    throw InputError("family file needs D and slots");
  std::size_t D = j["D"].get<std::size_t>();
  std::vector<std::string> exprs;
  for (const auto& s : j["slots"]) exprs.push_back(s.get<std::string>());
  return PolyFamily::from_expressions(D, exprs);
}

std::string poly_matrix_to_json(const PolyMatrix& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["arity"] = m.arity();
  json entries = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c).to_string());
    entries.push_back(row);
  }
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

PolyMatrix poly_matrix_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("polynomial matrix is not valid JSON");
  std::size_t rows = j.at("rows").get<std::size_t>();
  std::size_t cols = j.at("cols").get<std::size_t>();
  std::size_t arity = j.at("arity").get<std::size_t>();
  PolyMatrix m(rows, cols, arity);
  const auto& entries = j.at("entries");
  if (entries.size() != rows) throw InputError("polynomial matrix row count mismatch");
  for (std::size_t r = 0; r < rows; ++r) {
    if (entries[r].size() != cols) throw InputError("polynomial matrix column count mismatch");
    for (std::size_t c = 0; c < cols; ++c)
      m.at(r, c) = parse_poly(entries[r][c].get<std::string>(), arity);
  }
  return m;
}

}  // namespace reludim
