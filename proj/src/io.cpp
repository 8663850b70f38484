#include "symgame/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace symgame {

namespace {

using nlohmann::json;

constexpr double kFileRowSumTol = 1e-9;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  return j;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

// Keys are "state|a1|a2" with 1-based actions.
struct CellKey {
  std::string state;
  int a1 = 0, a2 = 0;
};

CellKey parse_key(const std::string& key, int num_actions) {
  CellKey k;
  const auto p1 = key.rfind('|');
  const auto p0 = (p1 == std::string::npos) ? std::string::npos : key.rfind('|', p1 - 1);
  if (p0 == std::string::npos || p1 == std::string::npos || p0 == 0)
    throw ValidationError("malformed cell key '" + key + "'");
  k.state = key.substr(0, p0);
  try {
    k.a1 = std::stoi(key.substr(p0 + 1, p1 - p0 - 1));
    k.a2 = std::stoi(key.substr(p1 + 1));
  } catch (...) {
    throw ValidationError("malformed cell key '" + key + "'");
  }
  if (k.a1 < 1 || k.a1 > num_actions || k.a2 < 1 || k.a2 > num_actions)
    throw ValidationError("action out of range in key '" + key + "'");
  return k;
}

std::string make_key(const std::string& state, int a1, int a2) {
  return state + "|" + std::to_string(a1 + 1) + "|" + std::to_string(a2 + 1);
}

}  // namespace

std::pair<LayeredGame, PayoffTensor> load_game_file(const std::string& path) {
  const json j = read_json(path);
  LayeredGame g;
  try {
    g.horizon = j.at("horizon").get<int>();
    g.num_actions = j.at("num_actions").get<int>();
    const auto& layers = j.at("layers");
    if (!layers.is_array() || static_cast<int>(layers.size()) != g.horizon)
      throw ValidationError("layers must be an array of length horizon");
    std::vector<int> sizes;
    for (const auto& layer : layers) sizes.push_back(static_cast<int>(layer.size()));
    if (g.horizon < 1 || g.num_actions < 1) throw ValidationError("bad horizon or num_actions");
    for (int sz : sizes)
      if (sz < 1) throw ValidationError("empty layer");
    g = make_game_shell(sizes, g.num_actions);
    std::map<std::string, int> index;
    int s = 0;
    for (const auto& layer : layers) {
      for (const auto& id : layer) {
        const std::string name = id.get<std::string>();
        if (index.count(name)) throw ValidationError("duplicate state id '" + name + "'");
        index[name] = s;
        g.state_names[s] = name;
        ++s;
      }
    }
    const int n = g.num_actions;
    if (j.contains("transitions")) {
      for (const auto& [key, rows] : j.at("transitions").items()) {
        const CellKey k = parse_key(key, n);
        auto it = index.find(k.state);
        if (it == index.end()) throw ValidationError("unknown state '" + k.state + "'");
        const int from = it->second;
        const int h = g.state_layer[from];
        if (h == g.horizon - 1)
          throw ValidationError("terminal state '" + k.state + "' cannot have transitions");
        std::vector<double> dist(g.layer_size(h + 1), 0.0);
        double sum = 0.0;
        for (const auto& pair : rows) {
          const std::string to_name = pair.at(0).get<std::string>();
          const double p = pair.at(1).get<double>();
          auto to_it = index.find(to_name);
          if (to_it == index.end()) throw ValidationError("unknown state '" + to_name + "'");
          const int to = to_it->second;
          if (g.state_layer[to] != h + 1)
            throw ValidationError("transition " + key + " -> '" + to_name +
                                  "' does not land in the next layer");
          if (p < 0.0) throw ValidationError("negative probability in " + key);
          dist[to - g.layer_begin(h + 1)] += p;
          sum += p;
        }
        if (std::abs(sum - 1.0) > kFileRowSumTol)
          throw ValidationError("transition row " + key + " sums to " + std::to_string(sum));
        for (double& p : dist) p /= sum;
        g.transitions[from][g.pair_index(k.a1 - 1, k.a2 - 1)] = std::move(dist);
      }
    }
    PayoffTensor u = SaaTensor::zeros(g);
    if (j.contains("payoff")) {
      for (const auto& [key, val] : j.at("payoff").items()) {
        const CellKey k = parse_key(key, n);
        auto it = index.find(k.state);
        if (it == index.end()) throw ValidationError("unknown state '" + k.state + "'");
        const double x = val.get<double>();
        if (!std::isfinite(x)) throw ValidationError("non-finite payoff in " + key);
        u.at(it->second, k.a1 - 1, k.a2 - 1) = x;
      }
    }
    if (auto err = validate_game(g)) throw ValidationError(*err);
    return {std::move(g), std::move(u)};
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void save_game_file(const LayeredGame& g, const PayoffTensor& u, const std::string& path) {
  json j;
  j["horizon"] = g.horizon;
  j["num_actions"] = g.num_actions;
  json layers = json::array();
  for (int h = 0; h < g.horizon; ++h) {
    json layer = json::array();
    for (int s = g.layer_begin(h); s < g.layer_start[h + 1]; ++s) layer.push_back(g.state_names[s]);
    layers.push_back(std::move(layer));
  }
  j["layers"] = std::move(layers);
  json transitions = json::object();
  const int n = g.num_actions;
  for (int s = 0; s < g.num_states(); ++s) {
    if (g.is_terminal(s)) continue;
    const int next_base = g.layer_begin(g.state_layer[s] + 1);
    for (int a1 = 0; a1 < n; ++a1) {
      for (int a2 = 0; a2 < n; ++a2) {
        json rows = json::array();
        const auto& dist = g.next_dist(s, a1, a2);
        for (int k = 0; k < static_cast<int>(dist.size()); ++k)
          if (dist[k] > 0.0) rows.push_back({g.state_names[next_base + k], dist[k]});
        transitions[make_key(g.state_names[s], a1, a2)] = std::move(rows);
      }
    }
  }
  j["transitions"] = std::move(transitions);
  json payoff = json::object();
  for (int s = 0; s < g.num_states(); ++s)
    for (int a1 = 0; a1 < n; ++a1)
      for (int a2 = 0; a2 < n; ++a2)
        if (u.at(s, a1, a2) != 0.0)
          payoff[make_key(g.state_names[s], a1, a2)] = u.at(s, a1, a2);
  j["payoff"] = std::move(payoff);
  write_json(j, path);
}

PayoffTensor load_payoff_file(const LayeredGame& g, const std::string& path) {
  const json j = read_json(path);
  PayoffTensor u = SaaTensor::zeros(g);
  std::map<std::string, int> index;
  for (int s = 0; s < g.num_states(); ++s) index[g.state_names[s]] = s;
  try {
    for (const auto& [key, val] : j.at("payoff").items()) {
      const CellKey k = parse_key(key, g.num_actions);
      auto it = index.find(k.state);
      if (it == index.end()) throw ValidationError("unknown state '" + k.state + "'");
      const double x = val.get<double>();
      if (!std::isfinite(x)) throw ValidationError("non-finite payoff in " + key);
      u.at(it->second, k.a1 - 1, k.a2 - 1) = x;
    }
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return u;
}

void save_payoff_file(const LayeredGame& g, const PayoffTensor& u, const std::string& path) {
  json payoff = json::object();
  for (int s = 0; s < g.num_states(); ++s)
    for (int a1 = 0; a1 < g.num_actions; ++a1)
      for (int a2 = 0; a2 < g.num_actions; ++a2)
        if (u.at(s, a1, a2) != 0.0)
          payoff[make_key(g.state_names[s], a1, a2)] = u.at(s, a1, a2);
  json j;
  j["payoff"] = std::move(payoff);
  write_json(j, path);
}

MarkovPolicy load_policy_file(const LayeredGame& g, const std::string& path) {
  const json j = read_json(path);
  MarkovPolicy p = MarkovPolicy::uniform(g);
  std::map<std::string, int> index;
  for (int s = 0; s < g.num_states(); ++s) index[g.state_names[s]] = s;
  try {
    for (const auto& [name, row] : j.at("policy").items()) {
      auto it = index.find(name);
      if (it == index.end()) throw ValidationError("unknown state '" + name + "'");
      if (static_cast<int>(row.size()) != g.num_actions)
        throw ValidationError("policy row for '" + name + "' has wrong length");
      for (int a = 0; a < g.num_actions; ++a) p.prob(it->second, a) = row.at(a).get<double>();
    }
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  if (auto err = validate_policy(g, p)) throw ValidationError(*err);
  return p;
}

}  // namespace symgame
