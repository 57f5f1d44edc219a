// Copyright 2026 The evimpl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evimpl/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "evimpl/error.hpp"
#include "json.hpp"

namespace evimpl {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, std::string what) {
  const std::string prefix = std::string(error_name(ErrorCode::kParse)) + ": ";
  if (what.rfind(prefix, 0) == 0) what.erase(0, prefix.size());
  throw Error(ErrorCode::kParse, where + ": " + what);
}

void check_keys(const Json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(where.empty() ? "/" : where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(where + "/" + key, "unknown key");
  }
}

std::vector<std::string> string_list(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_string()) fail(where + "/" + std::to_string(k), "expected a string");
    out.push_back(j[k].get<std::string>());
  }
  return out;
}

AgentIndex agent_key(const std::string& key, std::size_t agents,
                     const std::string& where) {
  std::size_t pos = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(key, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != key.size() || value < 1 || value > agents ||
      std::to_string(value) != key) {
    fail(where, "agent keys must be \"1\"..\"" + std::to_string(agents) + "\"");
  }
  return static_cast<AgentIndex>(value - 1);
}

StateIndex state_of(const std::vector<std::string>& states, const std::string& label,
                    const std::string& where) {
  for (StateIndex s = 0; s < states.size(); ++s) {
    if (states[s] == label) return s;
  }
  fail(where, "unknown state \"" + label + "\"");
}

std::string rational_text(const Json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  fail(where, "expected a rational string \"p/q\"");
}

// "{s2,s1}" and "{s1,s2}" name the same hard article.
std::string canonical_label(const Environment& env, const std::string& label) {
  if (label.size() < 2 || label.front() != '{' || label.back() != '}') return label;
  StateSet members;
  std::string_view body(label);
  body = body.substr(1, body.size() - 2);
  while (!body.empty()) {
    const std::size_t comma = body.find(',');
    const std::string part(body.substr(0, comma));
    const auto& states = env.state_labels();
    auto it = std::find(states.begin(), states.end(), part);
    if (it == states.end()) return label;
    members = members.with(static_cast<StateIndex>(it - states.begin()));
    body = comma == std::string_view::npos ? std::string_view() : body.substr(comma + 1);
  }
  return members.empty() ? label : env.set_label(members);
}

Environment parse_json(const Json& root) {
  check_keys(root, "",
             {"states", "agents", "outcomes", "evidence", "scf", "costs", "cost_bound"});
  for (const char* key : {"states", "agents", "outcomes", "evidence", "scf"}) {
    if (!root.contains(key)) fail("/", std::string("missing key \"") + key + "\"");
  }
  auto states = string_list(root["states"], "/states");
  auto outcomes = string_list(root["outcomes"], "/outcomes");
  if (!root["agents"].is_number_unsigned()) fail("/agents", "expected a positive integer");
  const auto agents = root["agents"].get<std::size_t>();

  EnvironmentBuilder builder(states, agents, outcomes);

  const Json& evidence = root["evidence"];
  if (!evidence.is_object()) fail("/evidence", "expected an object");
  for (const auto& [akey, per_state] : evidence.items()) {
    const std::string apath = "/evidence/" + akey;
    AgentIndex i = agent_key(akey, agents, apath);
    if (!per_state.is_object()) fail(apath, "expected an object keyed by state");
    for (const auto& [skey, list] : per_state.items()) {
      const std::string spath = apath + "/" + skey;
      StateIndex s = state_of(states, skey, spath);
      if (!list.is_array()) fail(spath, "expected an array of articles");
      for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string path = spath + "/" + std::to_string(k);
        const Json& item = list[k];
        if (item.is_string()) {
          builder.endow(i, s, builder.add_opaque_article(i, item.get<std::string>()));
          continue;
        }
        if (!item.is_array()) fail(path, "article must be a state array or a label");
        if (item.empty()) fail(path, "empty article");
        StateSet members;
        for (std::size_t q = 0; q < item.size(); ++q) {
          const std::string mpath = path + "/" + std::to_string(q);
          if (!item[q].is_string()) fail(mpath, "expected a state label");
          StateIndex m = state_of(states, item[q].get<std::string>(), mpath);
          if (members.contains(m)) fail(mpath, "repeated state");
          members = members.with(m);
        }
        try {
          builder.endow_hard(i, s, members);
        } catch (const Error& e) {
          fail(path, e.what());
        }
      }
    }
  }

  const Json& scf = root["scf"];
  if (!scf.is_object()) fail("/scf", "expected an object keyed by state");
  for (const auto& [skey, out] : scf.items()) {
    const std::string path = "/scf/" + skey;
    StateIndex s = state_of(states, skey, path);
    if (!out.is_string()) fail(path, "expected an outcome label");
    auto it = std::find(outcomes.begin(), outcomes.end(), out.get<std::string>());
    if (it == outcomes.end()) fail(path, "unknown outcome \"" + out.get<std::string>() + "\"");
    builder.set_scf(s, static_cast<OutcomeIndex>(it - outcomes.begin()));
  }
  for (const auto& s : states) {
    if (!scf.contains(s)) fail("/scf", "no outcome for state \"" + s + "\"");
  }

  if (root.contains("cost_bound")) {
    Rational c;
    try {
      c = parse_rational(rational_text(root["cost_bound"], "/cost_bound"));
    } catch (const Error& e) {
      fail("/cost_bound", e.what());
    }
    if (c <= 0) fail("/cost_bound", "must be positive");
    builder.set_cost_bound(c);
  }

  if (root.contains("costs")) {
    builder.enable_cost_table();
    // Articles referenced by costs must already be in the universe, so
    // resolve labels against a provisional build.
    Environment provisional = builder.build();
    const Json& costs = root["costs"];
    if (!costs.is_object()) fail("/costs", "expected an object");
    for (const auto& [akey, per_article] : costs.items()) {
      const std::string apath = "/costs/" + akey;
      AgentIndex i = agent_key(akey, agents, apath);
      if (!per_article.is_object()) fail(apath, "expected an object keyed by article");
      for (const auto& [label, per_state] : per_article.items()) {
        const std::string lpath = apath + "/" + label;
        auto found = provisional.find_article(i, canonical_label(provisional, label));
        if (!found) fail(lpath, "article not held by agent " + akey + " anywhere");
        const Article& art = provisional.article(i, *found);
        ArticleIndex a = art.is_hard() ? builder.add_hard_article(i, *art.members)
                                       : builder.add_opaque_article(i, art.label);
        if (!per_state.is_object()) fail(lpath, "expected an object keyed by state");
        for (const auto& [skey, value] : per_state.items()) {
          const std::string path = lpath + "/" + skey;
          StateIndex s = state_of(states, skey, path);
          try {
            builder.set_cost(i, a, s, parse_cost(rational_text(value, path)));
          } catch (const Error& e) {
            fail(path, e.what());
          }
        }
      }
    }
  }
  Environment env = builder.build();
  for (AgentIndex i = 0; i < agents; ++i) {
    for (StateIndex s = 0; s < states.size(); ++s) {
      if (env.endowment(i, s).empty()) {
        fail("/evidence/" + std::to_string(i + 1) + "/" + states[s], "empty endowment");
      }
    }
  }
  return env;
}

}  // namespace

Environment parse_environment(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  return parse_json(root);
}

std::string serialize_environment(const Environment& env) {
  Json root;
  root["states"] = env.state_labels();
  root["agents"] = env.num_agents();
  root["outcomes"] = env.outcome_labels();
  Json evidence = Json::object();
  for (AgentIndex i = 0; i < env.num_agents(); ++i) {
    Json per_state = Json::object();
    for (StateIndex s = 0; s < env.num_states(); ++s) {
      Json list = Json::array();
      for (ArticleIndex a : env.endowment(i, s)) {
        const Article& art = env.article(i, a);
        if (art.is_hard()) {
          Json members = Json::array();
          for (StateIndex m : art.members->members()) members.push_back(env.state_label(m));
          list.push_back(members);
        } else {
          list.push_back(art.label);
        }
      }
      per_state[env.state_label(s)] = list;
    }
    evidence[std::to_string(i + 1)] = per_state;
  }
  root["evidence"] = evidence;
  Json scf = Json::object();
  for (StateIndex s = 0; s < env.num_states(); ++s) {
    scf[env.state_label(s)] = env.outcome_label(env.scf(s));
  }
  root["scf"] = scf;
  if (env.has_cost_table()) {
    Json costs = Json::object();
    for (AgentIndex i = 0; i < env.num_agents(); ++i) {
      Json per_article = Json::object();
      for (ArticleIndex a = 0; a < env.articles(i).size(); ++a) {
        Json per_state = Json::object();
        for (StateIndex s = 0; s < env.num_states(); ++s) {
          per_state[env.state_label(s)] = to_string(env.cost(i, a, s));
        }
        per_article[env.article(i, a).label] = per_state;
      }
      costs[std::to_string(i + 1)] = per_article;
    }
    root["costs"] = costs;
  }
  if (env.cost_bound()) root["cost_bound"] = to_string(*env.cost_bound());
  return root.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

Environment load_environment(const std::filesystem::path& path) {
  std::string text = read_file(path);
  try {
    return parse_environment(text);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParse) throw;
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

}  // namespace evimpl
