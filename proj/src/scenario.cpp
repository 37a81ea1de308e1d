#include "qsnet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace qsnet {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ChannelSpec, kind, p, operators)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SourceSpec, kind, state, probability, channel)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LinkChannelSpec, node, channel)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(DishonestSpec, node, flip_probability, unitary, skip_encoding,
                                                as_verifier)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VerificationSpec, m, c, lambda, n_test, allow_invalid_constants)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AdversarySpec, source, channels, dishonest, seed)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FunctionSpecConfig, scale, weights)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SensingSpec, rounds, branch_window)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(QfiSpec, state, n, coherence, weights, point, step, tolerance)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AuditSpec, attempts)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(OutputSpec, directory, name, formats)

void to_json(nlohmann::json& j, const TopologySpec& t) {
  j = nlohmann::json{{"nodes", t.nodes}, {"honest", t.honest}};
  if (t.crs) {
    j["verifier"] = "crs";
  } else {
    j["verifier"] = t.verifier;
  }
}

void from_json(const nlohmann::json& j, TopologySpec& t) {
  t.nodes = j.value("nodes", 0);
  t.honest = j.value("honest", std::vector<int>{});
  const auto& v = j.at("verifier");
  t.crs = v.is_string();
  if (t.crs && v.get<std::string>() != "crs") throw ConfigError({"topology.verifier: expected a node index or crs"});
  t.verifier = t.crs ? 0 : v.get<int>();
}

void to_json(nlohmann::json& j, const ScenarioConfig& c) {
  j = nlohmann::json{{"seed", c.seed},
                     {"repetitions", c.repetitions},
                     {"topology", c.topology},
                     {"verification", c.verification},
                     {"adversary", c.adversary},
                     {"function", c.function},
                     {"phases", c.phases},
                     {"sensing", c.sensing},
                     {"qfi", c.qfi},
                     {"privacy_audit", c.privacy_audit},
                     {"output", c.output}};
}

void from_json(const nlohmann::json& j, ScenarioConfig& c) {
  j.at("seed").get_to(c.seed);
  j.at("repetitions").get_to(c.repetitions);
  j.at("topology").get_to(c.topology);
  j.at("verification").get_to(c.verification);
  j.at("adversary").get_to(c.adversary);
  j.at("function").get_to(c.function);
  j.at("phases").get_to(c.phases);
  j.at("sensing").get_to(c.sensing);
  j.at("qfi").get_to(c.qfi);
  j.at("privacy_audit").get_to(c.privacy_audit);
  j.at("output").get_to(c.output);
}

namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += (out.empty() ? "" : "\n") + l;
  return out;
}

std::string at(const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  if (m.is_null()) return "";
  return "line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ": ";
}

std::string child(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

template <class T>
const char* type_name() {
  if constexpr (std::is_same_v<T, bool>) return "true or false";
  else if constexpr (std::is_same_v<T, std::string>) return "a string";
  else if constexpr (std::is_integral_v<T>) return "an integer";
  else return "a number";
}

class Reader {
 public:
  std::vector<std::string> problems;

  void fail(const YAML::Node& n, const std::string& path, const std::string& msg) {
    problems.push_back(at(n) + path + ": " + msg);
  }

  bool mapping(const YAML::Node& n, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!n.IsMap()) {
      fail(n, path, "expected a mapping");
      return false;
    }
    for (const auto& kv : n) {
      const auto key = kv.first.Scalar();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail(kv.first, child(path, key), "unknown key");
    }
    return true;
  }

  template <class T>
  bool scalar(const YAML::Node& parent, const char* key, const std::string& path, T& out) {
    const YAML::Node n = parent[key];
    if (!n) return false;
    convert(n, child(path, key), out);
    return true;
  }

  template <class T>
  void convert(const YAML::Node& n, const std::string& path, T& out) {
    if (!n.IsScalar()) {
      fail(n, path, std::string("expected ") + type_name<T>());
      return;
    }
    try {
      out = n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, path, std::string("expected ") + type_name<T>() + ", got '" + n.Scalar() + "'");
    }
  }

  template <class T>
  bool sequence(const YAML::Node& parent, const char* key, const std::string& path, std::vector<T>& out) {
    const YAML::Node n = parent[key];
    if (!n) return false;
    const auto p = child(path, key);
    if (!n.IsSequence()) {
      fail(n, p, "expected a list");
      return true;
    }
    out.clear();
    for (std::size_t i = 0; i < n.size(); ++i) {
      T v{};
      convert(n[i], p + "." + std::to_string(i), v);
      out.push_back(v);
    }
    return true;
  }

  void channel(const YAML::Node& n, const std::string& path, ChannelSpec& out) {
    if (!mapping(n, path, {"kind", "p", "operators"})) return;
    scalar(n, "kind", path, out.kind);
    scalar(n, "p", path, out.p);
    const YAML::Node ops = n["operators"];
    if (!ops) return;
    const auto opath = child(path, "operators");
    if (!ops.IsSequence()) {
      fail(ops, opath, "expected a list of 2x2 matrices");
      return;
    }
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const YAML::Node m = ops[k];
      const auto mpath = opath + "." + std::to_string(k);
      if (!m.IsSequence() || m.size() != 2 || !m[0].IsSequence() || !m[1].IsSequence() || m[0].size() != 2 ||
          m[1].size() != 2) {
        fail(m, mpath, "expected [[a, b], [c, d]] with real entries or [re, im] pairs");
        continue;
      }
      std::vector<double> flat;
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
          const YAML::Node e = m[r][c];
          double re = 0.0, im = 0.0;
          const auto epath = mpath + "." + std::to_string(r) + "." + std::to_string(c);
          if (e.IsSequence() && e.size() == 2) {
            convert(e[0], epath, re);
            convert(e[1], epath, im);
          } else {
            convert(e, epath, re);
          }
          flat.push_back(re);
          flat.push_back(im);
        }
      }
      out.operators.push_back(std::move(flat));
    }
  }
};

bool one_of(const std::string& v, std::initializer_list<std::string_view> options) {
  return std::find(options.begin(), options.end(), v) != options.end();
}

void check_window(const std::vector<double>& w, std::vector<std::string>& out) {
  if (w.size() != 2) {
    out.push_back("sensing.branch_window: expected [lo, hi]");
    return;
  }
  try {
    BranchWindow{w[0], w[1]}.validate();
  } catch (const std::exception& e) {
    out.push_back(std::string("sensing.branch_window: ") + e.what());
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_lines(problems)), problems_(std::move(problems)) {}

int ScenarioConfig::n_qubits() const {
  int total = 0;
  for (int k : function.weights) total += std::abs(k);
  return total;
}

bool ScenarioConfig::wants(std::string_view format) const {
  return std::find(output.formats.begin(), output.formats.end(), format) != output.formats.end();
}

ScenarioConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError({"line " + std::to_string(e.mark.line + 1) + ", column " + std::to_string(e.mark.column + 1) +
                       ": syntax error: " + e.msg});
  }
  Reader rd;
  ScenarioConfig cfg;
  if (!root || root.IsNull()) throw ConfigError({"empty scenario"});
  if (!rd.mapping(root, "", {"seed", "repetitions", "topology", "verification", "adversary", "function", "phases",
                             "sensing", "qfi", "privacy_audit", "output"})) {
    throw ConfigError(rd.problems);
  }
  if (!rd.scalar(root, "seed", "", cfg.seed)) rd.problems.push_back("seed: missing (a master seed is mandatory)");
  rd.scalar(root, "repetitions", "", cfg.repetitions);

  bool honest_given = false;
  if (const auto t = root["topology"]; t) {
    if (rd.mapping(t, "topology", {"nodes", "honest", "verifier"})) {
      if (!rd.scalar(t, "nodes", "topology", cfg.topology.nodes)) rd.fail(t, "topology.nodes", "missing");
      honest_given = rd.sequence(t, "honest", "topology", cfg.topology.honest);
      if (const auto v = t["verifier"]; v) {
        if (v.IsScalar() && v.Scalar() == "crs") {
          cfg.topology.crs = true;
        } else {
          rd.convert(v, "topology.verifier", cfg.topology.verifier);
        }
      }
    }
  } else {
    rd.problems.push_back("topology: missing (topology.nodes is required)");
  }

  if (const auto v = root["verification"]; v) {
    if (rd.mapping(v, "verification", {"m", "c", "lambda", "n_test", "allow_invalid_constants"})) {
      rd.scalar(v, "m", "verification", cfg.verification.m);
      rd.scalar(v, "c", "verification", cfg.verification.c);
      rd.scalar(v, "lambda", "verification", cfg.verification.lambda);
      rd.scalar(v, "n_test", "verification", cfg.verification.n_test);
      rd.scalar(v, "allow_invalid_constants", "verification", cfg.verification.allow_invalid_constants);
    }
  }

  if (const auto a = root["adversary"]; a) {
    if (rd.mapping(a, "adversary", {"source", "channels", "dishonest", "seed"})) {
      rd.scalar(a, "seed", "adversary", cfg.adversary.seed);
      if (const auto s = a["source"]; s) {
        if (rd.mapping(s, "adversary.source", {"kind", "state", "probability", "channel"})) {
          rd.scalar(s, "kind", "adversary.source", cfg.adversary.source.kind);
          rd.scalar(s, "state", "adversary.source", cfg.adversary.source.state);
          rd.scalar(s, "probability", "adversary.source", cfg.adversary.source.probability);
          if (const auto ch = s["channel"]; ch) rd.channel(ch, "adversary.source.channel", cfg.adversary.source.channel);
        }
      }
      if (const auto cs = a["channels"]; cs) {
        if (!cs.IsSequence()) {
          rd.fail(cs, "adversary.channels", "expected a list");
        } else {
          for (std::size_t i = 0; i < cs.size(); ++i) {
            const auto path = "adversary.channels." + std::to_string(i);
            LinkChannelSpec lc;
            if (rd.mapping(cs[i], path, {"node", "channel"})) {
              if (!rd.scalar(cs[i], "node", path, lc.node)) rd.fail(cs[i], path + ".node", "missing");
              if (const auto ch = cs[i]["channel"]; ch) {
                rd.channel(ch, path + ".channel", lc.channel);
              } else {
                rd.fail(cs[i], path + ".channel", "missing");
              }
            }
            cfg.adversary.channels.push_back(std::move(lc));
          }
        }
      }
      if (const auto ds = a["dishonest"]; ds) {
        if (!ds.IsSequence()) {
          rd.fail(ds, "adversary.dishonest", "expected a list");
        } else {
          for (std::size_t i = 0; i < ds.size(); ++i) {
            const auto path = "adversary.dishonest." + std::to_string(i);
            DishonestSpec d;
            if (rd.mapping(ds[i], path, {"node", "flip_probability", "unitary", "skip_encoding", "as_verifier"})) {
              if (!rd.scalar(ds[i], "node", path, d.node)) rd.fail(ds[i], path + ".node", "missing");
              rd.scalar(ds[i], "flip_probability", path, d.flip_probability);
              rd.scalar(ds[i], "unitary", path, d.unitary);
              rd.scalar(ds[i], "skip_encoding", path, d.skip_encoding);
              rd.scalar(ds[i], "as_verifier", path, d.as_verifier);
            }
            cfg.adversary.dishonest.push_back(std::move(d));
          }
        }
      }
    }
  }

  bool scale_given = false, weights_given = false;
  if (const auto f = root["function"]; f) {
    if (rd.mapping(f, "function", {"scale", "weights"})) {
      scale_given = rd.scalar(f, "scale", "function", cfg.function.scale);
      weights_given = rd.sequence(f, "weights", "function", cfg.function.weights);
    }
  }
  const bool phases_given = rd.sequence(root, "phases", "", cfg.phases);

  if (const auto s = root["sensing"]; s) {
    if (rd.mapping(s, "sensing", {"rounds", "branch_window"})) {
      rd.scalar(s, "rounds", "sensing", cfg.sensing.rounds);
      rd.sequence(s, "branch_window", "sensing", cfg.sensing.branch_window);
    }
  }
  if (const auto q = root["qfi"]; q) {
    if (rd.mapping(q, "qfi", {"state", "n", "coherence", "weights", "point", "step", "tolerance"})) {
      rd.scalar(q, "state", "qfi", cfg.qfi.state);
      rd.scalar(q, "n", "qfi", cfg.qfi.n);
      rd.scalar(q, "coherence", "qfi", cfg.qfi.coherence);
      rd.sequence(q, "weights", "qfi", cfg.qfi.weights);
      rd.scalar(q, "point", "qfi", cfg.qfi.point);
      rd.scalar(q, "step", "qfi", cfg.qfi.step);
      rd.scalar(q, "tolerance", "qfi", cfg.qfi.tolerance);
    }
  }
  if (const auto p = root["privacy_audit"]; p) {
    if (rd.mapping(p, "privacy_audit", {"attempts"})) rd.scalar(p, "attempts", "privacy_audit", cfg.privacy_audit.attempts);
  }
  if (const auto o = root["output"]; o) {
    if (rd.mapping(o, "output", {"directory", "name", "formats"})) {
      rd.scalar(o, "directory", "output", cfg.output.directory);
      rd.scalar(o, "name", "output", cfg.output.name);
      rd.sequence(o, "formats", "output", cfg.output.formats);
    }
  }

  // Defaults that depend on other fields.
  const int nodes = std::max(cfg.topology.nodes, 0);
  if (!honest_given) {
    cfg.topology.honest.clear();
    for (int i = 0; i < nodes; ++i) cfg.topology.honest.push_back(i);
  }
  std::sort(cfg.topology.honest.begin(), cfg.topology.honest.end());
  if (!weights_given) cfg.function.weights.assign(static_cast<std::size_t>(nodes), 1);
  if (!scale_given) cfg.function.scale = weights_given ? 1.0 : (nodes > 0 ? 1.0 / nodes : 1.0);
  if (!phases_given) cfg.phases.assign(static_cast<std::size_t>(nodes), 0.0);
  if (cfg.qfi.n == 0) cfg.qfi.n = cfg.n_qubits();
  if (cfg.qfi.weights.empty()) cfg.qfi.weights.assign(static_cast<std::size_t>(std::max(cfg.qfi.n, 0)), 1.0);

  auto problems = rd.problems;
  if (problems.empty()) {
    const auto more = validate_config(cfg);
    problems.insert(problems.end(), more.begin(), more.end());
  }
  if (!problems.empty()) throw ConfigError(problems);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path + ": cannot open"});
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    std::vector<std::string> tagged;
    for (const auto& p : e.problems()) tagged.push_back(path + ": " + p);
    throw ConfigError(tagged);
  }
}

std::vector<std::string> validate_config(const ScenarioConfig& cfg) {
  std::vector<std::string> out;
  auto need = [&out](bool ok, const std::string& msg) {
    if (!ok) out.push_back(msg);
  };
  const auto& t = cfg.topology;
  const int nodes = t.nodes;
  need(cfg.repetitions >= 1, "repetitions: must be at least 1");
  need(nodes >= 1, "topology.nodes: must be at least 1");
  std::set<int> honest;
  for (int h : t.honest) {
    need(h >= 0 && h < nodes, "topology.honest: node " + std::to_string(h) + " out of range");
    need(honest.insert(h).second, "topology.honest: node " + std::to_string(h) + " listed twice");
  }
  if (!t.crs) {
    need(t.verifier >= 0 && t.verifier < nodes, "topology.verifier: node " + std::to_string(t.verifier) + " out of range");
    if (cfg.verification.lambda == 1 && t.verifier >= 0 && t.verifier < nodes) {
      need(honest.count(t.verifier) == 1,
           "topology.verifier: the single-Verifier protocol needs an honest Verifier (use verifier: crs)");
    }
  }

  const auto& f = cfg.function;
  need(static_cast<int>(f.weights.size()) == nodes,
       "function.weights: " + std::to_string(f.weights.size()) + " weights for " + std::to_string(nodes) + " nodes");
  need(std::any_of(f.weights.begin(), f.weights.end(), [](int k) { return k != 0; }),
       "function.weights: all weights are zero");
  need(std::isfinite(f.scale) && f.scale != 0.0, "function.scale: must be finite and nonzero");
  const int nq = cfg.n_qubits();
  need(nq >= 2, "function.weights: the resource needs at least 2 qubits");
  need(nq <= qubit_limit(), "function.weights: " + std::to_string(nq) + " qubits exceed the limit of " +
                                std::to_string(qubit_limit()));
  need(static_cast<int>(cfg.phases.size()) == nodes,
       "phases: " + std::to_string(cfg.phases.size()) + " phases for " + std::to_string(nodes) + " nodes");
  need(std::all_of(cfg.phases.begin(), cfg.phases.end(), [](double x) { return std::isfinite(x); }),
       "phases: non-finite value");

  const auto& v = cfg.verification;
  VerificationParams vp{v.m, v.c, std::max(nq, 2), v.lambda, std::nullopt, v.allow_invalid_constants};
  if (v.n_test != 0) vp.n_test_override = v.n_test;
  need(v.n_test >= 0, "verification.n_test: must be nonnegative (0 derives it)");
  for (const auto& msg : vp.constraint_violations()) {
    const bool constants = msg.rfind("constants violate", 0) == 0;
    if (!constants) {
      out.push_back("verification: " + msg);
    } else if (!v.allow_invalid_constants) {
      out.push_back("verification: " + msg + " (set allow_invalid_constants to run anyway)");
    }
  }

  const auto& a = cfg.adversary;
  need(one_of(a.source.kind, {"none", "replace", "mixture", "channel"}),
       "adversary.source.kind: unknown kind '" + a.source.kind + "'");
  need(one_of(a.source.state, {"zeros", "plus", "maximally_mixed"}),
       "adversary.source.state: unknown state '" + a.source.state + "'");
  need(a.source.probability >= 0.0 && a.source.probability <= 1.0, "adversary.source.probability: outside [0, 1]");
  auto check_channel = [&](const ChannelSpec& ch, const std::string& path) {
    try {
      build_channel(ch);
    } catch (const std::exception& e) {
      out.push_back(path + ": " + e.what());
    }
  };
  if (a.source.kind == "channel") check_channel(a.source.channel, "adversary.source.channel");
  for (std::size_t i = 0; i < a.channels.size(); ++i) {
    const auto path = "adversary.channels." + std::to_string(i);
    need(a.channels[i].node >= 0 && a.channels[i].node < nodes, path + ".node: out of range");
    check_channel(a.channels[i].channel, path + ".channel");
  }
  std::set<int> seen;
  for (std::size_t i = 0; i < a.dishonest.size(); ++i) {
    const auto& d = a.dishonest[i];
    const auto path = "adversary.dishonest." + std::to_string(i);
    need(d.node >= 0 && d.node < nodes, path + ".node: out of range");
    need(honest.count(d.node) == 0, path + ".node: node " + std::to_string(d.node) + " is in the honest set");
    need(seen.insert(d.node).second, path + ".node: node " + std::to_string(d.node) + " configured twice");
    need(d.flip_probability >= 0.0 && d.flip_probability <= 1.0, path + ".flip_probability: outside [0, 1]");
    need(one_of(d.unitary, {"none", "x", "y", "z", "h"}), path + ".unitary: unknown gate '" + d.unitary + "'");
    need(one_of(d.as_verifier, {"faithful", "all_pass", "all_fail"}),
         path + ".as_verifier: unknown conduct '" + d.as_verifier + "'");
  }

  need(cfg.sensing.rounds >= 1, "sensing.rounds: must be at least 1");
  check_window(cfg.sensing.branch_window, out);

  const auto& q = cfg.qfi;
  need(one_of(q.state, {"ghz", "plus", "dephased_ghz"}), "qfi.state: unknown state '" + q.state + "'");
  need(q.n >= 1 && q.n <= qubit_limit(), "qfi.n: outside [1, qubit limit]");
  need(static_cast<int>(q.weights.size()) == q.n, "qfi.weights: one weight per qubit required");
  need(q.coherence >= 0.0 && q.coherence <= 1.0, "qfi.coherence: outside [0, 1]");
  need(q.step > 0.0, "qfi.step: must be positive");
  need(q.tolerance > 0.0, "qfi.tolerance: must be positive");

  need(cfg.privacy_audit.attempts >= 1, "privacy_audit.attempts: must be at least 1");
  need(!cfg.output.name.empty(), "output.name: must not be empty");
  for (const auto& fmt : cfg.output.formats) {
    need(one_of(fmt, {"json", "csv", "jsonl"}), "output.formats: unknown format '" + fmt + "'");
  }
  return out;
}

NetworkTopology build_topology(const ScenarioConfig& cfg) {
  NetworkTopology t;
  t.n_nodes = cfg.topology.nodes;
  t.honest = make_node_set(cfg.topology.honest);
  if (!cfg.topology.crs) t.verifier = cfg.topology.verifier;
  t.validate();
  return t;
}

KrausChannel build_channel(const ChannelSpec& spec) {
  if (spec.kind == "dephasing") return KrausChannel::dephasing(spec.p);
  if (spec.kind == "depolarizing") return KrausChannel::depolarizing(spec.p);
  if (spec.kind == "custom") {
    std::vector<CMatrix> ops;
    for (const auto& flat : spec.operators) {
      if (flat.size() != 8) throw QuantumError("custom operator must have 4 complex entries");
      CMatrix k(2, 2);
      for (int e = 0; e < 4; ++e) k(e / 2, e % 2) = cplx(flat[2 * e], flat[2 * e + 1]);
      ops.push_back(std::move(k));
    }
    return KrausChannel(std::move(ops));
  }
  throw QuantumError("unknown channel kind '" + spec.kind + "'");
}

AdversaryModel build_adversary(const ScenarioConfig& cfg) {
  const auto& a = cfg.adversary;
  const int nq = cfg.n_qubits();
  auto attacker_state = [&]() {
    if (a.source.state == "plus") {
      return QuantumState::pure(CVector::Constant(static_cast<Eigen::Index>(std::size_t{1} << nq),
                                                  std::pow(2.0, -nq / 2.0)));
    }
    if (a.source.state == "maximally_mixed") return QuantumState::maximally_mixed(nq);
    return QuantumState::basis(nq, 0);
  };
  AdversaryModel m;
  if (a.source.kind == "replace") m.source = SourceAttack::replace(attacker_state());
  if (a.source.kind == "mixture") m.source = SourceAttack::mixture(attacker_state(), a.source.probability);
  if (a.source.kind == "channel") m.source = SourceAttack::on_every_qubit(build_channel(a.source.channel));
  for (const auto& lc : a.channels) m.channels.insert_or_assign(lc.node, build_channel(lc.channel));
  for (const auto& d : a.dishonest) {
    DishonestBehavior b;
    b.flip_probability = d.flip_probability;
    b.skip_encoding = d.skip_encoding;
    if (d.unitary == "x") b.local_unitary = gates::x();
    if (d.unitary == "y") b.local_unitary = gates::y();
    if (d.unitary == "z") b.local_unitary = gates::z();
    if (d.unitary == "h") b.local_unitary = gates::hadamard();
    if (d.as_verifier == "all_pass") b.as_verifier = VerifierConduct::all_pass;
    if (d.as_verifier == "all_fail") b.as_verifier = VerifierConduct::all_fail;
    m.dishonest.insert_or_assign(d.node, std::move(b));
  }
  m.coordination_seed = a.seed;
  return m;
}

VerificationParams build_verification(const ScenarioConfig& cfg) {
  const auto& v = cfg.verification;
  VerificationParams p{v.m, v.c, cfg.n_qubits(), v.lambda, std::nullopt, v.allow_invalid_constants};
  if (v.n_test != 0) p.n_test_override = v.n_test;
  return p;
}

LinearFunctionSpec build_function(const ScenarioConfig& cfg) { return {cfg.function.scale, cfg.function.weights}; }

SensingParams build_sensing(const ScenarioConfig& cfg) {
  SensingParams s;
  s.rounds = cfg.sensing.rounds;
  s.verification = build_verification(cfg);
  s.function = build_function(cfg);
  s.phases = PhaseVector(cfg.phases);
  s.window = {cfg.sensing.branch_window.at(0), cfg.sensing.branch_window.at(1)};
  return s;
}

ScenarioConfig with_numeric(const ScenarioConfig& cfg, std::string_view path, double value) {
  nlohmann::json j = cfg;
  std::string pointer;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto dot = path.find('.', start);
    const auto part = path.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    if (part.empty()) throw ConfigError({"sweep axis '" + std::string(path) + "': empty path component"});
    pointer += "/" + std::string(part);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  const nlohmann::json::json_pointer ptr(pointer);
  if (!j.contains(ptr)) throw ConfigError({"sweep axis '" + std::string(path) + "': no such field"});
  auto& field = j[ptr];
  if (!field.is_number()) throw ConfigError({"sweep axis '" + std::string(path) + "': field is not numeric"});
  if (field.is_number_integer()) {
    if (value != std::floor(value)) {
      throw ConfigError({"sweep axis '" + std::string(path) + "': integer field, got " + std::to_string(value)});
    }
    if (field.is_number_unsigned()) {
      if (value < 0) throw ConfigError({"sweep axis '" + std::string(path) + "': negative value for unsigned field"});
      field = static_cast<std::uint64_t>(value);
    } else {
      field = static_cast<long long>(value);
    }
  } else {
    field = value;
  }
  ScenarioConfig out = j.get<ScenarioConfig>();
  const auto problems = validate_config(out);
  if (!problems.empty()) throw ConfigError(problems);
  return out;
}

}  // namespace qsnet
