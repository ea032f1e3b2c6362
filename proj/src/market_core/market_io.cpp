#include "factorprice/market_io.hpp"

#include <fstream>
#include <sstream>

#include "factorprice/errors.hpp"

namespace factorprice {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ModelError("field " + path + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

Vector as_vector(const json& v, const std::string& path, int expected) {
  if (!v.is_array()) fail(path, "expected an array");
  if (static_cast<int>(v.size()) != expected) {
    fail(path, "expected " + std::to_string(expected) + " entries, got " + std::to_string(v.size()));
  }
  Vector out(expected);
  for (int i = 0; i < expected; ++i) out(i) = as_number(v[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
  return out;
}

Matrix as_matrix(const json& v, const std::string& path, int n) {
  if (!v.is_array()) fail(path, "expected an array of rows");
  if (static_cast<int>(v.size()) != n) {
    fail(path, "expected " + std::to_string(n) + " rows, got " + std::to_string(v.size()));
  }
  Matrix out(n, n);
  for (int r = 0; r < n; ++r) {
    out.row(r) = as_vector(v[static_cast<std::size_t>(r)], path + "[" + std::to_string(r) + "]", n).transpose();
  }
  return out;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

std::string model_kind_of(const MarketInstance& market) {
  if (market.all_linear()) return "linear";
  if (market.all_mnl()) return "mnl";
  return "mixed";
}

MarketDocument parse_market_document(const json& doc) {
  const int n = as_int(require(doc, "n", "$"), "$.n");
  if (n < 1) fail("$.n", "must be at least 1");
  const json& kind_json = require(doc, "model", "$");
  if (!kind_json.is_string()) fail("$.model", "expected a string");
  const auto kind = kind_json.get<std::string>();
  if (kind != "linear" && kind != "mnl" && kind != "bundle") {
    fail("$.model", "expected \"linear\", \"mnl\" or \"bundle\", got \"" + kind + "\"");
  }

  const json& segs = require(doc, "segments", "$");
  if (!segs.is_array() || segs.empty()) fail("$.segments", "expected a nonempty array");
  std::vector<Segment> segments;
  for (std::size_t j = 0; j < segs.size(); ++j) {
    const std::string path = "$.segments[" + std::to_string(j) + "]";
    const json& s = segs[j];
    const double theta = as_number(require(s, "theta", path), path + ".theta");
    Vector a = as_vector(require(s, "a", path), path + ".a", n);
    const bool has_B = s.contains("B");
    const bool has_b = s.contains("b");
    if (has_B == has_b) fail(path, "exactly one of \"B\" (linear) or \"b\" (mnl) is required");
    if (kind == "linear" && !has_B) fail(path + ".B", "missing for a linear market");
    if (kind == "mnl" && !has_b) fail(path + ".b", "missing for an mnl market");
    try {
      if (has_B) {
        segments.push_back({theta, LinearModel(std::move(a), as_matrix(s["B"], path + ".B", n))});
      } else {
        segments.push_back({theta, MnlSegmentModel(std::move(a), as_vector(s["b"], path + ".b", n))});
      }
    } catch (const ModelError& e) {
      if (std::string(e.what()).rfind("field ", 0) == 0) throw;
      fail(path, e.what());
    }
  }

  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const json& l = doc["labels"];
    if (!l.is_array()) fail("$.labels", "expected an array of strings");
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (!l[i].is_string()) fail("$.labels[" + std::to_string(i) + "]", "expected a string");
      labels.push_back(l[i].get<std::string>());
    }
  }

  std::optional<MarketInstance> market;
  try {
    market.emplace(n, std::move(segments), std::move(labels));
  } catch (const ModelError& e) {
    fail("$.segments", e.what());
  }

  std::optional<BundleMarket> bundles;
  if (kind == "bundle") {
    try {
      if (doc.contains("bundles")) {
        const int base_n = as_int(require(doc, "base_n", "$"), "$.base_n");
        const json& b = doc["bundles"];
        if (!b.is_array()) fail("$.bundles", "expected an array of incidence vectors");
        std::vector<std::vector<int>> incidence;
        for (std::size_t k = 0; k < b.size(); ++k) {
          const std::string path = "$.bundles[" + std::to_string(k) + "]";
          if (!b[k].is_array()) fail(path, "expected an array");
          std::vector<int> x;
          for (std::size_t i = 0; i < b[k].size(); ++i) x.push_back(as_int(b[k][i], path + "[" + std::to_string(i) + "]"));
          incidence.push_back(std::move(x));
        }
        bundles.emplace(base_n, std::move(incidence), *market);
      } else {
        bundles = BundleMarket::size_indexed(n, *market);
      }
    } catch (const ModelError& e) {
      if (std::string(e.what()).rfind("field ", 0) == 0) throw;
      fail("$.bundles", e.what());
    }
  } else if (doc.contains("bundles")) {
    fail("$.bundles", "only allowed when model is \"bundle\"");
  }

  return MarketDocument{kind, std::move(*market), std::move(bundles)};
}

MarketDocument read_market_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open market file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ModelError(path.string() + ": " + e.what());
  }
  try {
    return parse_market_document(doc);
  } catch (const ModelError& e) {
    throw ModelError(path.string() + ": " + e.what());
  }
}

json to_json(const MarketDocument& doc) {
  json out;
  out["n"] = doc.market.n();
  out["model"] = doc.model_kind;
  json segs = json::array();
  for (const auto& s : doc.market.segments()) {
    json seg;
    seg["theta"] = s.theta;
    if (const auto* lin = std::get_if<LinearModel>(&s.model)) {
      seg["a"] = vector_json(lin->a());
      json rows = json::array();
      for (Eigen::Index r = 0; r < lin->B().rows(); ++r) rows.push_back(vector_json(lin->B().row(r).transpose()));
      seg["B"] = std::move(rows);
    } else {
      const auto& mnl = std::get<MnlSegmentModel>(s.model);
      seg["a"] = vector_json(mnl.a());
      seg["b"] = vector_json(mnl.b());
    }
    segs.push_back(std::move(seg));
  }
  out["segments"] = std::move(segs);
  if (!doc.market.labels().empty()) out["labels"] = doc.market.labels();
  if (doc.bundles) {
    out["base_n"] = doc.bundles->base_n();
    out["bundles"] = doc.bundles->bundles();
  }
  return out;
}

void write_market_file(const std::filesystem::path& path, const MarketDocument& doc) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write market file " + path.string());
  out << to_json(doc).dump(2) << '\n';
}

}  // namespace factorprice
