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

#include "evimpl/corpus.hpp"

#include <cstdio>
#include <random>

#include "evimpl/core_model.hpp"
#include "evimpl/io.hpp"
#include "evimpl/verify.hpp"

namespace evimpl {

namespace {

StateSet set_of(std::initializer_list<StateIndex> states) {
  StateSet out;
  for (StateIndex s : states) out = out.with(s);
  return out;
}

// Endows `members` at every state it contains.
void endow_closed(EnvironmentBuilder& b, AgentIndex i, StateSet members) {
  for (StateIndex s : members.members()) b.endow_hard(i, s, members);
}

Environment two_state_hard(std::vector<std::string> states, std::vector<std::string> outcomes,
                           const std::vector<std::vector<StateSet>>& extra) {
  EnvironmentBuilder b(std::move(states), extra.size(), std::move(outcomes));
  const StateSet full = StateSet::full(2);
  for (AgentIndex i = 0; i < extra.size(); ++i) {
    endow_closed(b, i, full);
    for (StateSet e : extra[i]) endow_closed(b, i, e);
  }
  b.set_scf(0, 0);
  b.set_scf(1, 1);
  return b.build();
}

}  // namespace

Environment env_a() {
  return two_state_hard({"s1", "s2"}, {"a", "b"}, {{set_of({1})}, {}});
}

Environment env_b() { return two_state_hard({"s1", "s2"}, {"a", "b"}, {{}, {}}); }

Environment env_c() {
  EnvironmentBuilder b({"s1", "s2", "s3", "s4"}, 2, {"a", "b", "c", "d"});
  b.enable_cost_table();
  b.set_cost_bound(1);
  for (AgentIndex i = 0; i < 2; ++i) endow_closed(b, i, StateSet::full(4));
  endow_closed(b, 0, set_of({1, 3}));
  endow_closed(b, 0, set_of({2, 3}));
  ArticleIndex proof = b.add_hard_article(0, set_of({3}));
  b.endow(0, 3, proof);
  b.set_cost(0, proof, 3, Cost(Rational(1, 10)));
  for (StateIndex s = 0; s < 4; ++s) b.set_scf(s, s);
  return b.build();
}

Environment env_d() {
  // Agent 1 is the buyer, agent 2 the seller.
  return two_state_hard({"phi", "theta"}, {"low", "high"}, {{set_of({1})}, {}});
}

Environment env_d_modified() {
  return two_state_hard({"phi", "theta"}, {"low", "high"}, {{set_of({0}), set_of({1})}, {}});
}

Environment env_e() {
  EnvironmentBuilder b({"s1", "s2"}, 2, {"a", "b"});
  b.enable_cost_table();
  b.set_cost_bound(1);
  for (AgentIndex i = 0; i < 2; ++i) {
    ArticleIndex first = b.add_opaque_article(i, "a");
    ArticleIndex second = b.add_opaque_article(i, "b");
    for (StateIndex s = 0; s < 2; ++s) {
      b.endow(i, s, first);
      b.endow(i, s, second);
    }
    b.set_cost(i, first, 0, Cost(Rational(0)));
    b.set_cost(i, first, 1, Cost(Rational(1, 2)));
    b.set_cost(i, second, 0, Cost(Rational(1, 2)));
    b.set_cost(i, second, 1, Cost(Rational(0)));
  }
  b.set_scf(0, 0);
  b.set_scf(1, 1);
  return b.build();
}

Environment env_3agents() {
  return two_state_hard({"s1", "s2"}, {"a", "b"}, {{set_of({1})}, {set_of({0})}, {}});
}

Environment env_costly() {
  EnvironmentBuilder b({"s1", "s2"}, 2, {"a", "b"});
  b.enable_cost_table();
  b.set_cost_bound(1);
  for (AgentIndex i = 0; i < 2; ++i) endow_closed(b, i, StateSet::full(2));
  ArticleIndex proof = b.add_hard_article(0, set_of({1}));
  b.endow(0, 1, proof);
  b.set_cost(0, proof, 1, Cost(Rational(1, 5)));
  b.set_scf(0, 0);
  b.set_scf(1, 1);
  return b.build();
}

Environment env_rp_both() {
  return two_state_hard({"s1", "s2"}, {"a", "b"}, {{set_of({0})}, {set_of({0})}});
}

Environment random_environment(std::uint64_t seed, bool normalize) {
  std::mt19937_64 rng(seed);
  const std::size_t states = 2 + uniform_below(rng, 2);
  const std::size_t agents = 2 + uniform_below(rng, 2);
  const std::uint64_t full = (std::uint64_t{1} << states) - 1;

  // held[i][s] as sets of article masks, closed under availability.
  std::vector<std::vector<std::vector<std::uint64_t>>> held(
      agents, std::vector<std::vector<std::uint64_t>>(states));
  auto add = [&](AgentIndex i, std::uint64_t mask) {
    for (StateIndex s = 0; s < states; ++s) {
      if (!(mask >> s & 1)) continue;
      auto& h = held[i][s];
      if (std::find(h.begin(), h.end(), mask) == h.end()) h.push_back(mask);
    }
  };
  for (AgentIndex i = 0; i < agents; ++i) {
    add(i, full);
    const std::size_t extra = uniform_below(rng, 3);
    for (std::size_t k = 0; k < extra; ++k) add(i, 1 + uniform_below(rng, full));
  }
  for (bool changed = normalize; changed;) {
    changed = false;
    for (AgentIndex i = 0; i < agents; ++i) {
      for (StateIndex s = 0; s < states; ++s) {
        std::uint64_t meet = full;
        for (std::uint64_t m : held[i][s]) meet &= m;
        const auto& h = held[i][s];
        if (std::find(h.begin(), h.end(), meet) == h.end()) {
          add(i, meet);
          changed = true;
        }
      }
    }
  }

  std::vector<std::string> state_labels, outcome_labels;
  for (StateIndex s = 0; s < states; ++s) state_labels.push_back("s" + std::to_string(s + 1));
  for (std::size_t a = 0; a < states; ++a) outcome_labels.push_back(std::string(1, 'a' + a));
  EnvironmentBuilder b(state_labels, agents, outcome_labels);
  for (AgentIndex i = 0; i < agents; ++i) {
    for (StateIndex s = 0; s < states; ++s) {
      for (std::uint64_t m : held[i][s]) b.endow_hard(i, s, StateSet(m));
    }
  }
  for (StateIndex s = 0; s < states; ++s) b.set_scf(s, 0);
  Environment draft = b.build();
  // One outcome per equivalence class keeps the scf measurable.
  for (const StateSet& cls : equivalent_states(draft)) {
    OutcomeIndex a = uniform_below(rng, states);
    for (StateIndex s : cls.members()) b.set_scf(s, a);
  }
  return b.build();
}

bool random_fixture_is_normalized(std::size_t index) { return index % 3 != 2; }

Environment random_costly_environment(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t states = 2 + uniform_below(rng, 2);
  const std::size_t articles = 2 + uniform_below(rng, 2);
  std::vector<std::string> state_labels, outcome_labels;
  for (StateIndex s = 0; s < states; ++s) {
    state_labels.push_back("s" + std::to_string(s + 1));
    outcome_labels.push_back(std::string(1, 'a' + s));
  }
  EnvironmentBuilder b(state_labels, 2, outcome_labels);
  b.enable_cost_table();
  b.set_cost_bound(1);
  for (AgentIndex i = 0; i < 2; ++i) {
    for (StateIndex s = 0; s < states; ++s) {
      bool affordable = false;
      for (std::size_t k = 0; k < articles; ++k) {
        std::uint64_t draw = uniform_below(rng, 5);
        if (k + 1 == articles && !affordable) draw = uniform_below(rng, 4);
        if (draw == 4) continue;
        affordable = true;
        const ArticleIndex id = b.add_opaque_article(i, std::string(1, 'p' + k));
        b.endow(i, s, id);
        Rational c(static_cast<long>(draw), 4);
        c.canonicalize();
        b.set_cost(i, id, s, Cost(c));
      }
    }
  }
  for (StateIndex s = 0; s < states; ++s) b.set_scf(s, uniform_below(rng, states));
  return b.build();
}

std::vector<Fixture> named_fixtures() {
  return {{"env_a", env_a()},
          {"env_b", env_b()},
          {"env_c", env_c()},
          {"env_d", env_d()},
          {"env_d_modified", env_d_modified()},
          {"env_e", env_e()},
          {"env_3agents", env_3agents()},
          {"env_costly", env_costly()},
          {"env_rp_both", env_rp_both()}};
}

std::vector<Fixture> random_fixtures(std::size_t count, std::uint64_t seed) {
  std::vector<Fixture> out;
  for (std::size_t k = 0; k < count; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "random_%03zu", k);
    out.push_back({name, random_environment(seed + k, random_fixture_is_normalized(k))});
  }
  return out;
}

std::vector<Fixture> random_costly_fixtures(std::size_t count, std::uint64_t seed) {
  std::vector<Fixture> out;
  for (std::size_t k = 0; k < count; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "costly_%03zu", k);
    out.push_back({name, random_costly_environment(seed + 1000 + k)});
  }
  return out;
}

std::vector<Fixture> corpus() {
  auto out = named_fixtures();
  for (auto& f : random_fixtures()) out.push_back(std::move(f));
  for (auto& f : random_costly_fixtures()) out.push_back(std::move(f));
  return out;
}

std::vector<std::filesystem::path> write_corpus(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const Fixture& f : corpus()) {
    auto path = dir / (f.name + ".json");
    write_file(path, serialize_environment(f.env));
    written.push_back(path);
  }
  return written;
}

}  // namespace evimpl
