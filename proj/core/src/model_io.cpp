#include "dppsum/model_io.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

namespace dppsum {

using nlohmann::json;

namespace {

// Doubles travel as decimal strings with 17 significant digits so the file
// round-trips bit-exactly regardless of the JSON library's number printer.
json encode_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

double decode_double(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
      throw std::invalid_argument("model file: malformed number for " + what);
    }
    return v;
  }
  throw std::invalid_argument("model file: expected a number for " + what);
}

json encode_vector(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(encode_double(v(i)));
  return arr;
}

Vector decode_vector(const json& arr, const std::string& what) {
  if (!arr.is_array()) throw std::invalid_argument("model file: expected a list for " + what);
  Vector v(arr.size());
  Eigen::Index i = 0;
  for (const json& item : arr) v(i++) = decode_double(item, what);
  return v;
}

json encode_alphas(const std::vector<Exemplar>& exemplars, const Vector& alphas) {
  json obj = json::object();
  for (std::size_t r = 0; r < exemplars.size(); ++r) {
    obj[exemplars[r].id] = encode_double(alphas(static_cast<Eigen::Index>(r)));
  }
  return obj;
}

// Scales for the already-bound exemplar list; every exemplar id must appear
// and no extra ids may remain.
Vector decode_alphas(const json& obj, const std::vector<Exemplar>& exemplars,
                     const std::string& what) {
  if (!obj.is_object()) {
    throw std::invalid_argument("model file: expected id-keyed scales for " + what);
  }
  Vector alphas(exemplars.size());
  for (std::size_t r = 0; r < exemplars.size(); ++r) {
    const auto it = obj.find(exemplars[r].id);
    if (it == obj.end()) {
      throw std::invalid_argument("model file: no scale for exemplar '" + exemplars[r].id +
                                  "' in " + what);
    }
    alphas(static_cast<Eigen::Index>(r)) = decode_double(*it, what);
  }
  if (static_cast<std::size_t>(obj.size()) != exemplars.size()) {
    throw std::invalid_argument("model file: " + what +
                                " names exemplars missing from the corpus");
  }
  return alphas;
}

// The exemplar set a model file refers to: candidates filtered to the
// recorded ids, in candidate order.
std::vector<Exemplar> bind_exemplars(const json& doc,
                                     const std::vector<Exemplar>& candidates) {
  std::set<std::string> recorded;
  if (doc.contains("alphas")) {
    for (const auto& [id, value] : doc["alphas"].items()) {
      (void)value;
      recorded.insert(id);
    }
  }
  if (doc.contains("category_alphas")) {
    for (const auto& [category, obj] : doc["category_alphas"].items()) {
      (void)category;
      for (const auto& [id, value] : obj.items()) {
        (void)value;
        recorded.insert(id);
      }
    }
  }
  if (recorded.empty()) {
    throw std::invalid_argument("model file records no exemplar scales");
  }
  std::vector<Exemplar> bound;
  for (const Exemplar& ex : candidates) {
    if (recorded.count(ex.id)) bound.push_back(ex);
  }
  if (bound.size() != recorded.size()) {
    for (const Exemplar& ex : bound) recorded.erase(ex.id);
    throw std::invalid_argument("model file: exemplar '" + *recorded.begin() +
                                "' is missing from the corpus");
  }
  return bound;
}

}  // namespace

void save_model(const TransferModel& model, const std::string& path) {
  json doc;
  doc["format"] = "dppsum-model";
  doc["version"] = 1;
  doc["sim"]["kind"] = to_string(model.sim.kind);
  doc["sim"]["sigma"] = encode_double(model.sim.sigma);
  if (model.sim.metric_diag.size() > 0) {
    doc["sim"]["metric_diag"] = encode_vector(model.sim.metric_diag);
  }
  if (model.sim.metric_full.size() > 0) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < model.sim.metric_full.rows(); ++i) {
      rows.push_back(encode_vector(model.sim.metric_full.row(i)));
    }
    doc["sim"]["metric_full"] = rows;
  }
  doc["category_mode"] = to_string(model.category_mode);
  doc["granularity"] = to_string(model.granularity);
  doc["sequential_len"] = model.sequential_len;
  doc["oracle_budget"] = encode_double(model.oracle_budget);
  doc["corpus_hash"] = model.corpus_hash;
  doc["fit_converged"] = model.fit_converged;
  if (model.category_mode == CategoryMode::none) {
    doc["alphas"] = encode_alphas(model.exemplars, model.alphas);
  } else {
    json per_cat = json::object();
    for (const auto& [category, alphas] : model.category_alphas) {
      per_cat[category] = encode_alphas(model.exemplars, alphas);
    }
    doc["category_alphas"] = per_cat;
  }

  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open model file for writing: " + path);
  out << doc.dump(2) << "\n";
  if (!out) throw std::invalid_argument("write failed: " + path);
}

TransferModel load_model(const std::string& path, const std::vector<Exemplar>& corpus) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open model file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("model parse error in " + path + ": " + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "dppsum-model") {
    throw std::invalid_argument("not a dppsum model file: " + path);
  }

  TransferModel model;
  model.exemplars = bind_exemplars(doc, corpus);
  const json& sim = doc.at("sim");
  model.sim.kind = similarity_kind_from_string(sim.at("kind").get<std::string>());
  model.sim.sigma = decode_double(sim.at("sigma"), "sigma");
  if (sim.contains("metric_diag")) {
    model.sim.metric_diag = decode_vector(sim["metric_diag"], "metric_diag");
  }
  if (sim.contains("metric_full")) {
    const json& rows = sim["metric_full"];
    model.sim.metric_full.resize(rows.size(), rows.size());
    Eigen::Index i = 0;
    for (const json& row : rows) {
      model.sim.metric_full.row(i++) = decode_vector(row, "metric_full").transpose();
    }
  }
  model.category_mode = category_mode_from_string(doc.at("category_mode").get<std::string>());
  model.granularity = granularity_from_string(doc.at("granularity").get<std::string>());
  model.sequential_len = doc.value("sequential_len", 0);
  if (doc.contains("oracle_budget")) {
    model.oracle_budget = decode_double(doc["oracle_budget"], "oracle_budget");
  }
  model.corpus_hash = doc.value("corpus_hash", "");
  model.fit_converged = doc.value("fit_converged", true);
  if (model.category_mode == CategoryMode::none) {
    model.alphas = decode_alphas(doc.at("alphas"), model.exemplars, "alphas");
  } else {
    const json& per_cat = doc.at("category_alphas");
    if (!per_cat.is_object() || per_cat.empty()) {
      throw std::invalid_argument("model file: category_alphas missing or empty");
    }
    for (const auto& [category, obj] : per_cat.items()) {
      model.category_alphas[category] =
          decode_alphas(obj, model.exemplars, "category '" + category + "'");
    }
  }
  return model;
}

ModelHeader read_model_header(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open model file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("model parse error in " + path + ": " + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "dppsum-model") {
    throw std::invalid_argument("not a dppsum model file: " + path);
  }
  ModelHeader header;
  header.granularity = granularity_from_string(doc.at("granularity").get<std::string>());
  header.category_mode = category_mode_from_string(doc.at("category_mode").get<std::string>());
  if (doc.contains("oracle_budget")) {
    header.oracle_budget = decode_double(doc["oracle_budget"], "oracle_budget");
  }
  header.corpus_hash = doc.value("corpus_hash", "");
  std::set<std::string> recorded;
  if (doc.contains("alphas")) {
    for (const auto& [id, value] : doc["alphas"].items()) {
      (void)value;
      recorded.insert(id);
    }
  }
  if (doc.contains("category_alphas")) {
    for (const auto& [category, obj] : doc["category_alphas"].items()) {
      (void)category;
      for (const auto& [id, value] : obj.items()) {
        (void)value;
        recorded.insert(id);
      }
    }
  }
  header.exemplar_ids.assign(recorded.begin(), recorded.end());
  return header;
}

}  // namespace dppsum
