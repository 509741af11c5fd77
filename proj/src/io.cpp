// Copyright 2026 The QSSP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qssp/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace qssp {

namespace {

[[noreturn]] void input_error(const std::string& message, const std::string& pointer) {
  throw Error(ErrorCode::InputError, message, pointer);
}

const Json& member(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) input_error("expected an object", path.empty() ? "/" : path);
  auto it = obj.find(key);
  if (it == obj.end()) input_error(std::string("missing field '") + key + "'", path + "/" + key);
  return *it;
}

std::vector<std::string> name_list(const Json& arr, const std::string& path) {
  if (!arr.is_array() || arr.empty()) input_error("expected a nonempty array of names", path);
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    if (!arr[i].is_string()) input_error("expected a string", p);
    if (!seen.insert(arr[i].get<std::string>()).second) input_error("duplicate name", p);
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

double number(const Json& v, const std::string& path) {
  if (!v.is_number()) input_error("expected a number", path);
  return v.get<double>();
}

QubitPureState parse_qubit(const Json& spec, const std::string& path) {
  if (!spec.is_object() || spec.size() != 1) input_error("expected {\"bloch\": ...} or {\"ket\": ...}", path);
  if (auto it = spec.find("bloch"); it != spec.end()) {
    const std::string p = path + "/bloch";
    if (!it->is_array() || it->size() != 2) input_error("expected [theta, phi]", p);
    return qubit_from_bloch(number((*it)[0], p + "/0"), number((*it)[1], p + "/1"));
  }
  if (auto it = spec.find("ket"); it != spec.end()) {
    const std::string p = path + "/ket";
    if (!it->is_array() || it->size() != 2) input_error("expected [[re, im], [re, im]]", p);
    Complex amp[2];
    for (std::size_t k = 0; k < 2; ++k) {
      const std::string pk = p + "/" + std::to_string(k);
      const Json& c = (*it)[k];
      if (!c.is_array() || c.size() != 2) input_error("expected [re, im]", pk);
      amp[k] = Complex(number(c[0], pk + "/0"), number(c[1], pk + "/1"));
    }
    const double norm = std::norm(amp[0]) + std::norm(amp[1]);
    if (!(std::abs(norm - 1.0) <= 1e-6)) throw Error(ErrorCode::InvalidState, "ket is not normalized", p);
    return QubitPureState::normalized(amp[0], amp[1]);
  }
  input_error("expected {\"bloch\": ...} or {\"ket\": ...}", path);
}

}  // namespace

CCQS Model::source() const {
  if (!quantum) throw Error(ErrorCode::InvalidArgument, "model has no quantum alphabet");
  return {hmc, *quantum, name};
}

Model parse_model(const Json& doc) {
  if (!doc.is_object()) input_error("model must be a JSON object", "/");
  std::string name;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) input_error("expected a string", "/name");
    name = it->get<std::string>();
  }
  const auto states = name_list(member(doc, "states", ""), "/states");
  const auto alphabet = name_list(member(doc, "alphabet", ""), "/alphabet");
  std::map<std::string, std::size_t> s_index, x_index;
  for (std::size_t i = 0; i < states.size(); ++i) s_index[states[i]] = i;
  for (std::size_t i = 0; i < alphabet.size(); ++i) x_index[alphabet[i]] = i;

  const Json& trans = member(doc, "transitions", "");
  if (!trans.is_array()) input_error("expected an array", "/transitions");
  const std::size_t n = states.size();
  std::vector<Matrix> labeled(alphabet.size(), Matrix(n, n));
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < trans.size(); ++i) {
    const std::string p = "/transitions/" + std::to_string(i);
    const Json& t = trans[i];
    auto lookup = [&](const char* key, const std::map<std::string, std::size_t>& index) {
      const Json& v = member(t, key, p);
      if (!v.is_string()) input_error("expected a string", p + "/" + key);
      auto it = index.find(v.get<std::string>());
      if (it == index.end()) input_error("unknown name '" + v.get<std::string>() + "'", p + "/" + key);
      return it->second;
    };
    const std::size_t from = lookup("from", s_index);
    const std::size_t sym = lookup("symbol", x_index);
    const std::size_t to = lookup("to", s_index);
    const double prob = number(member(t, "p", p), p + "/p");
    if (!seen.emplace(from, sym, to).second) input_error("duplicate (from, symbol, to) transition", p);
    labeled[sym](from, to) = prob;
  }

  Model model{name, LabeledHMC(states, alphabet, std::move(labeled)), std::nullopt, Json()};
  if (auto it = doc.find("quantum_alphabet"); it != doc.end()) {
    if (!it->is_object()) input_error("expected an object keyed by symbol", "/quantum_alphabet");
    std::vector<QubitPureState> q;
    for (const auto& sym : alphabet) {
      const std::string p = "/quantum_alphabet/" + sym;
      auto s = it->find(sym);
      if (s == it->end()) input_error("symbol has no quantum state", p);
      q.push_back(parse_qubit(*s, p));
    }
    for (const auto& [key, value] : it->items())
      if (!x_index.count(key)) input_error("quantum state for unknown symbol", "/quantum_alphabet/" + key);
    model.quantum = std::move(q);
    model.quantum_spec = *it;
  }
  return model;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InputError, "cannot open file", path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::InputError, std::string("malformed JSON: ") + e.what(), path.string());
  }
}

Model load_model(const std::filesystem::path& path) { return parse_model(read_json(path)); }

Json hmc_to_json(const LabeledHMC& hmc) {
  Json trans = Json::array();
  for (std::size_t s = 0; s < hmc.num_states(); ++s)
    for (std::size_t x = 0; x < hmc.alphabet_size(); ++x)
      for (std::size_t u = 0; u < hmc.num_states(); ++u) {
        const double p = hmc.labeled(x)(s, u);
        if (p != 0.0)
          trans.push_back({{"from", hmc.states()[s]}, {"symbol", hmc.alphabet()[x]}, {"to", hmc.states()[u]}, {"p", p}});
      }
  return {{"states", hmc.states()}, {"alphabet", hmc.alphabet()}, {"transitions", std::move(trans)}};
}

Json model_to_json(const Model& model) {
  Json j = hmc_to_json(model.hmc);
  if (!model.name.empty()) j["name"] = model.name;
  if (model.is_quantum()) j["quantum_alphabet"] = model.quantum_spec;
  return j;
}

Json measured_to_json(const MeasuredHMC& measured) {
  Json j = hmc_to_json(measured.hmc);
  Json params = Json::object();
  for (const auto& [k, v] : measured.provenance.parameters) params[k] = v;
  j["provenance"] = {{"source", measured.provenance.source},
                     {"measurement", measured.provenance.measurement},
                     {"parameters", std::move(params)}};
  return j;
}

Json msp_to_json(const MixedStatePresentation& msp) {
  Json states = Json::array();
  for (std::size_t s = 0; s < msp.size(); ++s)
    states.push_back({{"id", s},
                      {"belief", msp.states[s]},
                      {"stationary", msp.stationary[s]},
                      {"recurrent", static_cast<bool>(msp.recurrent[s])},
                      {"depth", msp.depth[s]}});
  Json trans = Json::array();
  for (std::size_t s = 0; s < msp.size(); ++s)
    for (std::size_t x = 0; x < msp.alphabet_size(); ++x) {
      const std::size_t t = msp.successor(s, x);
      if (t != MixedStatePresentation::npos)
        trans.push_back({{"from", s}, {"symbol", msp.alphabet[x]}, {"to", t}, {"p", msp.probability(s, x)}});
    }
  return {{"kind", to_string(msp.kind)},
          {"cardinality", to_string(msp.cardinality)},
          {"closed", msp.closed},
          {"alphabet", msp.alphabet},
          {"source_states", msp.source_states},
          {"states", std::move(states)},
          {"transitions", std::move(trans)},
          {"truncation_mass", msp.truncation_mass},
          {"approximate_merges", msp.approximate_merges},
          {"max_merge_distance", msp.max_merge_distance},
          {"level_sizes", msp.level_sizes},
          {"frontier_mass", msp.frontier_mass}};
}

Json metrics_to_json(const MetricsReport& r) {
  Json j = {{"hmu", r.hmu},
            {"hmu_stderr", r.hmu_stderr},
            {"hmu_method", r.hmu_method},
            {"cmu", r.cmu ? Json(*r.cmu) : Json(nullptr)},
            {"cmu_divergent", !r.cmu.has_value()},
            {"dmu", r.dmu},
            {"cardinality_class", to_string(r.cardinality)},
            {"sample_size", r.sample_size},
            {"burn_in", r.burn_in},
            {"seed", r.seed}};
  if (r.msp_kind)
    j["msp"] = {{"kind", to_string(*r.msp_kind)}, {"states", r.msp_states}, {"leak", r.msp_leak}};
  if (!r.series.empty()) {
    Json series = Json::array();
    for (const auto& p : r.series) series.push_back({{"states", p.states}, {"hmu", p.hmu}, {"cmu", p.cmu}});
    j["series"] = std::move(series);
  }
  if (r.dmu_fit) {
    const DimensionFit& f = *r.dmu_fit;
    j["dmu_fit"] = {{"slope", f.slope},
                    {"intercept", f.intercept},
                    {"r2", f.r2},
                    {"eps", f.eps},
                    {"entropies", f.entropies},
                    {"window", {f.eps[f.first], f.eps[f.last]}},
                    {"sample", f.sample},
                    {"error", f.error ? Json(to_string(*f.error)) : Json(nullptr)}};
  }
  return j;
}

Json error_to_json(const Error& e) {
  return {{"error", to_string(e.code())}, {"message", e.what()}, {"location", e.location()}};
}

std::string pretty(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace qssp
