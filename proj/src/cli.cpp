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

#include "evimpl/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include "evimpl/core_model.hpp"
#include "evimpl/corpus.hpp"
#include "evimpl/cost_variation.hpp"
#include "evimpl/error.hpp"
#include "evimpl/io.hpp"
#include "evimpl/lies.hpp"
#include "evimpl/mech_costly.hpp"
#include "evimpl/mech_hard.hpp"
#include "evimpl/renegotiation.hpp"
#include "evimpl/verify.hpp"

namespace evimpl {

using Json = nlohmann::ordered_json;

namespace {

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

Json states_json(const Environment& env, StateSet set) {
  Json out = Json::array();
  for (StateIndex s : set.members()) out.push_back(env.state_label(s));
  return out;
}

Json message_json(const Environment& env, AgentIndex i, const Message& m) {
  Json j;
  j["agent"] = i + 1;
  j["claim"] = env.state_label(m.claim);
  j["article"] = env.article(i, m.article).label;
  if (!m.rounds.empty()) {
    Json rounds = Json::array();
    for (StateIndex r : m.rounds) rounds.push_back(env.state_label(r));
    j["rounds"] = rounds;
  }
  return j;
}

Json lottery_json(const Environment& env, const Lottery& l) {
  Json j = Json::object();
  for (const auto& [a, p] : l.entries()) j[env.outcome_label(a)] = to_string(p);
  return j;
}

Json rationals_json(const std::vector<Rational>& values) {
  Json j = Json::array();
  for (const Rational& x : values) j.push_back(to_string(x));
  return j;
}

Json info_json(const Mechanism& mech) {
  const MechanismInfo& info = mech.info();
  Json j;
  j["variant"] = info.variant;
  Json params = Json::object();
  for (const auto& [k, v] : info.parameters) params[k] = v;
  j["parameters"] = params;
  j["charges_costs"] = info.charges_costs;
  j["requires_cheapest_evidence"] = info.requires_cheapest_evidence;
  j["extra_rounds"] = info.extra_rounds;
  return j;
}

Json extensional_table(const Mechanism& mech, const Environment& env, std::size_t cap) {
  Json table = Json::array();
  for_each_profile(
      mech,
      [&](std::span<const Message> profile) {
        Json row;
        row["profile"] = Json::array();
        for (AgentIndex i = 0; i < profile.size(); ++i) {
          row["profile"].push_back(message_json(env, i, profile[i]));
        }
        Evaluation e = mech.evaluate(profile);
        row["outcome"] = lottery_json(env, e.outcome);
        row["transfers"] = rationals_json(e.transfers);
        table.push_back(std::move(row));
      },
      cap);
  return table;
}

Json witness_json(const Environment& env, const GameSkeleton& g, const EquilibriumWitness& w) {
  Json j;
  j["utility"] = w.utility;
  j["strategies"] = Json::array();
  for (AgentIndex i = 0; i < w.strategies.size(); ++i) {
    Json mix = Json::array();
    for (const auto& [k, p] : w.strategies[i]) {
      Json entry = message_json(env, i, g.messages[i][k]);
      entry["probability"] = to_string(p);
      mix.push_back(std::move(entry));
    }
    j["strategies"].push_back(std::move(mix));
  }
  Json bad = Json::array();
  auto msgs = g.profile_messages(w.bad_profile);
  for (AgentIndex i = 0; i < msgs.size(); ++i) bad.push_back(message_json(env, i, msgs[i]));
  j["unacceptable_profile"] = bad;
  j["outcome"] = lottery_json(env, g.outcome(w.bad_profile));
  j["transfers"] = rationals_json(g.transfers(w.bad_profile));
  return j;
}

Json report_json(const Mechanism& mech, const Environment& env, const VerificationReport& r,
                 const VerifyConfig& config) {
  Json j;
  j["variant"] = r.variant;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["max_support"] = config.max_support;
  j["verdict"] = verdict_name(r.verdict);
  j["states"] = Json::array();
  for (const StateReport& s : r.states) {
    Json st;
    st["state"] = env.state_label(s.state);
    st["verdict"] = verdict_name(s.verdict);
    st["utility_profiles"] = s.utility_profiles;
    st["pure_equilibria"] = s.pure_equilibria;
    st["pure_completeness"] = "EXHAUSTIVE";
    if (s.mixed_checked) {
      st["mixed_equilibria"] = s.mixed_equilibria;
      st["mixed_completeness"] =
          s.mixed_exhaustive ? std::string("EXHAUSTIVE")
                             : "BOUNDED_SUPPORT(" + std::to_string(config.max_support) + ")";
      st["degenerate"] = s.degenerate;
    } else {
      st["mixed_completeness"] = "NOT_CHECKED";
    }
    if (s.witness) {
      GameSkeleton g = build_skeleton(mech, env, s.state, config.profile_cap);
      st["witness"] = witness_json(env, g, *s.witness);
    }
    if (s.certificate) {
      Json c;
      c["scope"] = "pure";
      c["complete"] = s.certificate->complete();
      c["truthful_robust"] = s.certificate->truthful_robust;
      c["covered_profiles"] = s.certificate->entries.size();
      if (s.certificate->uncovered) {
        GameSkeleton g = build_skeleton(mech, env, s.state, config.profile_cap);
        Json bad = Json::array();
        auto msgs = g.profile_messages(*s.certificate->uncovered);
        for (AgentIndex i = 0; i < msgs.size(); ++i) {
          bad.push_back(message_json(env, i, msgs[i]));
        }
        c["uncovered_profile"] = bad;
      }
      st["certificate"] = c;
    }
    st["notes"] = s.notes;
    j["states"].push_back(std::move(st));
  }
  if (r.identical_games) {
    Json w;
    w["states"] = {env.state_label(r.identical_games->first),
                   env.state_label(r.identical_games->second)};
    w["reason"] = "equivalent states with different outcomes induce identical games";
    j["identical_games"] = w;
  }
  return j;
}

std::string pair_case(PairVerdict v) {
  switch (v) {
    case PairVerdict::kOneAgentBothWays: return "a";
    case PairVerdict::kBothOneWay: return "b";
    case PairVerdict::kCrossRefutation: return "c";
    case PairVerdict::kOneWaySingle: return "d";
    case PairVerdict::kUnseparated: return "unseparated";
  }
  return "?";
}

std::string search_name(SearchVerdict v) {
  switch (v) {
    case SearchVerdict::kHolds: return "holds";
    case SearchVerdict::kFails: return "fails";
    case SearchVerdict::kIncomplete: return "incomplete";
  }
  return "?";
}

Json monotonicity_json(const Environment& env, const MonotonicityReport& r) {
  Json j;
  j["verdict"] = search_name(r.verdict);
  j["combinations_checked"] = r.combinations_checked;
  if (r.witness) {
    Json w = Json::object();
    for (AgentIndex i = 0; i < r.witness->size(); ++i) {
      Json per_state = Json::object();
      for (StateIndex s = 0; s < env.num_states(); ++s) {
        per_state[env.state_label(s)] = env.article(i, (*r.witness)[i][s]).label;
      }
      w[std::to_string(i + 1)] = per_state;
    }
    j["witness"] = w;
  }
  if (r.violation) {
    j["violation"] = {{"claimed", env.state_label(r.violation->first)},
                      {"other", env.state_label(r.violation->second)}};
    Json attempts = Json::array();
    for (const SelectionAttempt& a : r.attempts) {
      Json arts = Json::array();
      for (AgentIndex i = 0; i < a.articles.size(); ++i) {
        arts.push_back(env.article(i, a.articles[i]).label);
      }
      attempts.push_back({{"articles", arts}, {"breaks_at", env.state_label(a.violated_at)}});
    }
    j["attempts"] = attempts;
  }
  return j;
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
  std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kIo:
    case ErrorCode::kEmptyEndowment: return kExitParse;
    case ErrorCode::kUsage: return kExitUsage;
    case ErrorCode::kSizeLimit: return 2;
    default: return 1;
  }
}

bool refusal(ErrorCode code) {
  switch (code) {
    case ErrorCode::kPreconditionViolated:
    case ErrorCode::kNotMeasurable:
    case ErrorCode::kNotNormal:
    case ErrorCode::kConditionsFail: return true;
    default: return false;
  }
}

}  // namespace

MechanismPtr build_variant(const std::string& tag, const Environment& env,
                           const VariantOptions& options) {
  if (tag == "theorem1") return synthesize_theorem1(env, options.gate);
  if (tag == "balanced") return synthesize_budget_balanced(env);
  if (starts_with(tag, "small:")) {
    SmallTransferOptions o;
    o.fixed_rounds = options.rounds;
    return synthesize_small_transfers(env, parse_rational(tag.substr(6)), o);
  }
  if (tag == "theorem3") return synthesize_theorem3(env, options.epsilon);
  if (tag == "theorem4") return synthesize_theorem4(env);
  if (tag == "theorem4multi") return synthesize_theorem4_multiagent(env);
  if (starts_with(tag, "emstar:")) return synthesize_em_star(env, parse_rational(tag.substr(7)));
  if (tag == "rp") return synthesize_rp_mechanism(env, options.gate);
  throw Error(ErrorCode::kUsage, "unknown variant '" + tag + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evidence-based implementation toolkit"};
  app.require_subcommand(1);

  std::string env_path, out_path, variant = "theorem1", state = "all", epsilon_text = "1/2",
                                  eta_text = "1/10";
  std::optional<std::size_t> rounds;
  bool extensional = false, hard_projection = false, pure_only = false;
  std::size_t samples = 20, max_support = 3, profile_cap = kDefaultProfileCap;
  std::uint64_t seed = 1;

  auto* validate = app.add_subcommand("validate", "check the evidence axioms");
  auto* classify_cmd = app.add_subcommand("classify", "partition state claims into lie classes");
  auto* synth = app.add_subcommand("synthesize", "build a mechanism");
  auto* verify = app.add_subcommand("verify", "check implementation by equilibrium enumeration");
  auto* check_em = app.add_subcommand("check-em", "evidence monotonicity checks");
  auto* check_rp = app.add_subcommand("check-rp", "renegotiation-proofness conditions");
  auto* corpus_cmd = app.add_subcommand("corpus", "write the fixture corpus");

  for (auto* cmd : {validate, classify_cmd, synth, verify, check_em, check_rp}) {
    cmd->add_option("env", env_path, "environment JSON")->required();
    cmd->add_option("-o,--output", out_path, "write JSON here instead of stdout");
  }
  for (auto* cmd : {classify_cmd, verify}) {
    cmd->add_option("--state", state, "state label or 'all'");
  }
  for (auto* cmd : {synth, verify}) {
    cmd->add_option("--variant", variant, "mechanism variant tag");
    cmd->add_option("--epsilon", epsilon_text, "robustness weight for theorem3");
    cmd->add_option("--rounds", rounds, "fix the number of rounds for small:<dbar>");
    cmd->add_flag("--hard-projection", hard_projection,
                  "drop the cost table and keep finite-cost articles");
  }
  synth->add_flag("--extensional", extensional, "include the evaluated table");
  verify->add_option("--samples", samples, "sampled utility profiles per state");
  verify->add_option("--seed", seed, "sampling seed");
  verify->add_option("--max-support", max_support, "support cap for mixed equilibria")
      ->check(CLI::PositiveNumber);
  verify->add_option("--profile-cap", profile_cap, "largest game enumerated")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--pure-only", pure_only, "skip mixed equilibria");
  check_rp->add_option("--eta", eta_text, "margin used for the adversarial profiles");
  corpus_cmd->add_option("-o,--output", out_path, "target directory")->required();

  std::vector<const char*> argv{"evimpl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (corpus_cmd->parsed()) {
      Json j = Json::array();
      for (const auto& p : write_corpus(out_path)) j.push_back(p.string());
      out << j.dump(2) << "\n";
      return 0;
    }
    Environment env = load_environment(env_path);
    if (hard_projection) env = env.without_costs();

    if (validate->parsed()) {
      ValidationReport r = validate_structure(env);
      Json violations = Json::array();
      for (const auto& v : r.truth) {
        violations.push_back({{"axiom", "e1"},
                              {"agent", v.agent + 1},
                              {"state", env.state_label(v.state)},
                              {"article", env.article(v.agent, v.article).label}});
      }
      for (const auto& v : r.availability) {
        violations.push_back({{"axiom", "e2"},
                              {"agent", v.agent + 1},
                              {"article", env.article(v.agent, v.article).label},
                              {"state", env.state_label(v.state)}});
      }
      Json j;
      j["violations"] = violations;
      if (r.axioms_hold() && env.all_hard()) {
        NormalityReport n = is_normal(env);
        j["normal"] = n.normal;
        if (n.witness) {
          j["normality_witness"] = {{"agent", n.witness->first + 1},
                                    {"state", env.state_label(n.witness->second)}};
        }
      }
      MeasurabilityReport m = is_measurable(env);
      j["measurable"] = m.measurable;
      if (m.violation) {
        j["measurability_violation"] = {env.state_label(m.violation->first),
                                        env.state_label(m.violation->second)};
      }
      Json classes = Json::array();
      for (StateSet c : equivalent_states(env)) classes.push_back(states_json(env, c));
      j["equivalence_classes"] = classes;
      emit(j, out_path, out);
      return r.axioms_hold() ? 0 : 1;
    }

    if (classify_cmd->parsed()) {
      std::vector<StateIndex> truths;
      if (state == "all") {
        for (StateIndex s = 0; s < env.num_states(); ++s) truths.push_back(s);
      } else {
        truths.push_back(env.state_index(state));
      }
      Json all = Json::array();
      for (StateIndex s : truths) {
        LiePartition p = classify(env, s);
        Json j;
        j["truth"] = env.state_label(s);
        j["NRL"] = states_json(env, p.nonrefutable);
        j["unseparated"] = states_json(env, p.unseparated);
        Json per_agent = Json::object();
        for (AgentIndex i = 0; i < env.num_agents(); ++i) {
          per_agent[std::to_string(i + 1)] = {{"ORL", states_json(env, p.other_refutable[i])},
                                              {"SRL", states_json(env, p.self_refutable[i])}};
        }
        j["per_agent"] = per_agent;
        all.push_back(std::move(j));
      }
      emit(state == "all" ? all : all[0], out_path, out);
      return 0;
    }

    VariantOptions options;
    options.epsilon = parse_rational(epsilon_text);
    options.rounds = rounds;

    if (synth->parsed()) {
      MechanismPtr mech = build_variant(variant, env, options);
      Json j = info_json(*mech);
      if (extensional) j["table"] = extensional_table(*mech, env, 100'000);
      emit(j, out_path, out);
      return 0;
    }

    if (verify->parsed()) {
      std::vector<std::string> notes;
      MechanismPtr mech;
      try {
        mech = build_variant(variant, env, options);
      } catch (const Error& e) {
        if (!refusal(e.code()) || (variant != "theorem1" && variant != "rp")) throw;
        options.gate = Gate::kSkip;
        mech = build_variant(variant, env, options);
        notes.push_back(std::string("synthesis preconditions fail: ") + e.what());
      }
      std::vector<StateIndex> states;
      if (state == "all") {
        for (StateIndex s = 0; s < env.num_states(); ++s) states.push_back(s);
      } else {
        states.push_back(env.state_index(state));
      }
      VerifyConfig config;
      config.samples = samples;
      config.seed = seed;
      config.max_support = max_support;
      config.profile_cap = profile_cap;
      config.mixed = !pure_only;
      VerificationReport r = verify_implementation(*mech, env, states, config);
      Json j = report_json(*mech, env, r, config);
      if (!notes.empty()) j["notes"] = notes;
      emit(j, out_path, out);
      return exit_code(r.verdict);
    }

    if (check_em->parsed()) {
      Json j;
      j["measurable"] = is_measurable(env).measurable;
      MonotonicityReport cp = is_evidence_monotonic_cp(env);
      MonotonicityReport star = is_evidence_monotonic_star(env);
      j["em_cp"] = monotonicity_json(env, cp);
      j["em_star"] = monotonicity_json(env, star);
      emit(j, out_path, out);
      if (cp.verdict == SearchVerdict::kIncomplete) return 2;
      return cp.verdict == SearchVerdict::kHolds ? 0 : 1;
    }

    if (check_rp->parsed()) {
      const Rational eta = parse_rational(eta_text);
      RenegotiationReport r = check_rp_conditions(env);
      Json j;
      j["passes"] = r.passes();
      j["pairs"] = Json::array();
      for (const PairReport& p : r.pairs) {
        Json pj;
        pj["states"] = {env.state_label(p.first), env.state_label(p.second)};
        pj["case"] = pair_case(p.verdict);
        pj["passes"] = pair_passes(p.verdict);
        pj["at"] = env.state_label(p.at);
        pj["claimed"] = env.state_label(p.claimed);
        if (!pair_passes(p.verdict)) {
          if (p.favors_claimed) pj["favors_claimed"] = *p.favors_claimed + 1;
          Json v = Json::array();
          for (const auto& row : build_adversarial_profile(env, p, eta)) {
            Json per_outcome = Json::object();
            for (OutcomeIndex a = 0; a < row.size(); ++a) {
              per_outcome[env.outcome_label(a)] = to_string(row[a]);
            }
            v.push_back(per_outcome);
          }
          pj["adversarial_utilities"] = v;
        }
        j["pairs"].push_back(std::move(pj));
      }
      emit(j, out_path, out);
      return r.passes() ? 0 : 1;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_for(e.code());
  }
  return kExitUsage;
}

}  // namespace evimpl
