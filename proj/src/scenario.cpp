#include "circumnav/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "circumnav/error.hpp"

namespace circumnav {

namespace {

[[noreturn]] void parse_error(const YAML::Node& node, std::string_view field, std::string_view what) {
  const auto mark = node.Mark();
  if (mark.is_null()) throw Error(Errc::ParseError, fmt::format("field '{}': {}", field, what));
  throw Error(Errc::ParseError, fmt::format("line {}: field '{}': {}", mark.line + 1, field, what));
}

std::string join(std::string_view prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : fmt::format("{}.{}", prefix, key);
}

template <class T>
T convert(const YAML::Node& node, std::string_view field) {
  if (!node.IsScalar()) parse_error(node, field, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    parse_error(node, field, fmt::format("cannot convert '{}'", node.Scalar()));
  }
}

template <class T>
T required(const YAML::Node& parent, std::string_view key, std::string_view prefix) {
  const YAML::Node node = parent[std::string(key)];
  if (!node.IsDefined() || node.IsNull()) parse_error(parent, join(prefix, key), "missing required field");
  return convert<T>(node, join(prefix, key));
}

template <class T>
T optional_or(const YAML::Node& parent, std::string_view key, std::string_view prefix, T fallback) {
  if (!parent.IsDefined() || parent.IsNull()) return fallback;
  const YAML::Node node = parent[std::string(key)];
  if (!node.IsDefined() || node.IsNull()) return fallback;
  return convert<T>(node, join(prefix, key));
}

Vec2 read_vec2(const YAML::Node& node, std::string_view field) {
  if (!node.IsSequence() || node.size() != 2) parse_error(node, field, "expected [x, y]");
  const Vec2 v{convert<double>(node[0], field), convert<double>(node[1], field)};
  if (!v.is_finite()) parse_error(node, field, "coordinates must be finite");
  return v;
}

std::vector<double> read_rho_hats(const YAML::Node& node, std::string_view field, std::size_t n_targets) {
  if (node.IsScalar()) return std::vector<double>(n_targets, convert<double>(node, field));
  if (!node.IsSequence() || node.size() != n_targets) {
    parse_error(node, field, fmt::format("expected a number or a list of {} numbers", n_targets));
  }
  std::vector<double> out;
  for (const auto& v : node) out.push_back(convert<double>(v, field));
  return out;
}

template <class E>
E read_enum(const YAML::Node& parent, std::string_view key, std::string_view prefix, E fallback,
            std::initializer_list<std::pair<std::string_view, E>> choices) {
  if (!parent.IsDefined() || parent.IsNull()) return fallback;
  const YAML::Node node = parent[std::string(key)];
  if (!node.IsDefined() || node.IsNull()) return fallback;
  const auto text = convert<std::string>(node, join(prefix, key));
  for (const auto& [name, value] : choices) {
    if (text == name) return value;
  }
  parse_error(node, join(prefix, key), fmt::format("unknown value '{}'", text));
}

void apply_override(YAML::Node& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(Errc::ParseError, fmt::format("override '{}': expected key=value", assignment));
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  YAML::Node cur = root;
  std::stringstream ss(key);
  std::string seg;
  while (std::getline(ss, seg, '.')) {
    const YAML::Node& ccur = cur;
    YAML::Node next;
    if (ccur.IsSequence()) {
      std::size_t idx = 0;
      const auto [ptr, ec] = std::from_chars(seg.data(), seg.data() + seg.size(), idx);
      if (ec != std::errc{} || ptr != seg.data() + seg.size() || idx >= ccur.size()) {
        throw Error(Errc::ParseError, fmt::format("override '{}': no list entry '{}'", key, seg));
      }
      next.reset(ccur[idx]);
    } else if (ccur.IsMap() && ccur[seg].IsDefined()) {
      next.reset(ccur[seg]);
    } else {
      throw Error(Errc::ParseError, fmt::format("override '{}': unknown key '{}'", key, seg));
    }
    cur.reset(next);
  }
  if (!cur.IsScalar() && !cur.IsNull()) {
    throw Error(Errc::ParseError, fmt::format("override '{}': only scalar values can be overridden", key));
  }
  cur = value;
}

}  // namespace

std::string_view to_string(Integrator integrator) { return integrator == Integrator::RK4 ? "rk4" : "euler"; }

std::string_view to_string(BearingRateMode mode) {
  return mode == BearingRateMode::NumericBackward ? "numeric" : "analytic";
}

std::string_view to_string(RadiusScaling scaling) {
  return scaling == RadiusScaling::Normalized ? "normalized" : "raw";
}

Scenario load_scenario(std::string_view document, std::span<const std::string> overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(document));
  } catch (const YAML::ParserException& e) {
    throw Error(Errc::ParseError, fmt::format("line {}: {}", e.mark.line + 1, e.msg));
  }
  if (!root.IsMap()) throw Error(Errc::ParseError, "document root must be a mapping");
  for (const auto& ov : overrides) apply_override(root, ov);

  Scenario s;
  s.name = optional_or<std::string>(root, "name", "", s.name);

  const YAML::Node targets = root["targets"];
  if (!targets.IsDefined() || !targets.IsSequence() || targets.size() == 0) {
    parse_error(root, "targets", "expected a non-empty list of [x, y]");
  }
  for (std::size_t i = 0; i < targets.size(); ++i) s.targets.push_back(read_vec2(targets[i], fmt::format("targets.{}", i)));

  const YAML::Node params = root["params"];
  if (!params.IsDefined() || !params.IsMap()) parse_error(root, "params", "missing params section");
  s.control.k = required<double>(params, "k", "params");
  s.control.alpha = required<double>(params, "alpha", "params");
  s.control.r_s = required<double>(params, "r_s", "params");
  s.control.d = required<double>(params, "d", "params");
  s.estimator.h = required<double>(params, "h", "params");
  s.estimator.bearing_rate_mode =
      read_enum(params, "bearing_rate", "params", BearingRateMode::NumericBackward,
                {{"numeric", BearingRateMode::NumericBackward}, {"analytic", BearingRateMode::AnalyticOracle}});
  s.formation.M = optional_or<double>(params, "M", "params", s.formation.M);
  const auto gain = optional_or<std::string>(params, "gain", "params", "exponential");
  if (gain != "exponential") parse_error(params["gain"], "params.gain", fmt::format("unknown gain '{}'", gain));
  s.formation.radius_scaling = read_enum(params, "radius_scaling", "params", RadiusScaling::Normalized,
                                         {{"normalized", RadiusScaling::Normalized}, {"raw", RadiusScaling::Raw}});

  std::vector<double> default_rho_hats(s.targets.size(), 0.4);
  if (params["rho_hat0"].IsDefined()) default_rho_hats = read_rho_hats(params["rho_hat0"], "params.rho_hat0", s.targets.size());

  const YAML::Node agents = root["agents"];
  if (!agents.IsDefined() || !agents.IsSequence() || agents.size() == 0) {
    parse_error(root, "agents", "expected a non-empty list of agents");
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string prefix = fmt::format("agents.{}", i);
    const YAML::Node a = agents[i];
    if (!a.IsMap()) parse_error(a, prefix, "expected a mapping");
    AgentConfig cfg;
    if (!a["position"].IsDefined()) parse_error(a, join(prefix, "position"), "missing required field");
    cfg.initial_position = read_vec2(a["position"], join(prefix, "position"));
    cfg.d = optional_or<double>(a, "d", prefix, s.control.d);
    cfg.initial_rho_hats = a["rho_hat0"].IsDefined()
                               ? read_rho_hats(a["rho_hat0"], join(prefix, "rho_hat0"), s.targets.size())
                               : default_rho_hats;
    s.agents.push_back(std::move(cfg));
  }
  for (const auto& a : s.agents) s.formation.per_agent_d.push_back(a.d);

  const YAML::Node sim = root["sim"];
  s.dt = optional_or<double>(sim, "dt", "sim", s.dt);
  s.t_end = optional_or<double>(sim, "t_end", "sim", s.t_end);
  s.integrator = read_enum(sim, "integrator", "sim", Integrator::RK4,
                           {{"rk4", Integrator::RK4}, {"euler", Integrator::Euler}});
  s.log_stride = optional_or<std::size_t>(sim, "log_stride", "sim", s.log_stride);
  s.seed = optional_or<std::uint64_t>(sim, "seed", "sim", s.seed);

  try {
    validate(s);
  } catch (const Error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  s.warnings = check_assumptions(s);
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& path, std::span<const std::string> overrides) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, fmt::format("cannot open scenario file '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str(), overrides);
}

void validate(const Scenario& s) {
  const auto positive = [](double v, std::string_view field) {
    if (!(v > 0.0) || std::isnan(v)) throw Error(Errc::InvalidArgument, fmt::format("{} must be positive", field));
  };
  if (s.targets.empty()) throw Error(Errc::InvalidArgument, "at least one target is required");
  if (s.agents.empty()) throw Error(Errc::InvalidArgument, "at least one agent is required");
  positive(s.control.k, "params.k");
  positive(s.control.alpha, "params.alpha");
  positive(s.control.r_s, "params.r_s");
  positive(s.control.d, "params.d");
  positive(s.estimator.h, "params.h");
  positive(s.formation.M, "params.M");
  positive(s.dt, "sim.dt");
  positive(s.t_end, "sim.t_end");
  if (s.dt > s.t_end) throw Error(Errc::InvalidArgument, "sim.dt must not exceed sim.t_end");
  if (s.log_stride == 0) throw Error(Errc::InvalidArgument, "sim.log_stride must be >= 1");
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const auto& a = s.agents[i];
    positive(a.d, fmt::format("agents.{}.d", i));
    if (a.initial_rho_hats.size() != s.targets.size()) {
      throw Error(Errc::InvalidArgument, fmt::format("agents.{}.rho_hat0 needs one entry per target", i));
    }
    for (const auto& t : s.targets) {
      if (distance(t, a.initial_position) == 0.0) {
        throw Error(Errc::InvalidArgument, fmt::format("agents.{} starts on a target", i));
      }
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (distance(s.agents[j].initial_position, a.initial_position) <= kEps) {
        throw Error(Errc::InvalidArgument, fmt::format("agents.{} and agents.{} start at the same position", j, i));
      }
    }
  }
}

std::vector<std::string> check_assumptions(const Scenario& s) {
  std::vector<std::string> out;
  const auto hull = convex_hull(s.targets);
  const double h = s.estimator.h;
  const double r_s = s.control.r_s;
  for (std::size_t a = 0; a < s.agents.size(); ++a) {
    const auto& agent = s.agents[a];
    const double d0 = dist_to_hull(agent.initial_position, hull);
    if (d0 < r_s) {
      out.push_back(fmt::format("assumption 1 violated for agent {}: D(0) = {:.6g} < r_s = {:.6g}", a, d0, r_s));
    }
    if (!(h < r_s && r_s < agent.d)) {
      out.push_back(fmt::format("assumption 2 violated for agent {}: need h < r_s < d, got h = {:.6g}, r_s = {:.6g}, d = {:.6g}",
                                a, h, r_s, agent.d));
    }
    for (std::size_t i = 0; i < s.targets.size(); ++i) {
      const double rho0 = distance(s.targets[i], agent.initial_position);
      const double rh = agent.initial_rho_hats[i];
      if (!(h <= rh && rh <= rho0)) {
        out.push_back(fmt::format(
            "assumption 3 violated for agent {} target {}: need h <= rho_hat(0) <= rho(0), got {:.6g} (h = {:.6g}, rho(0) = {:.6g})",
            a, i, rh, h, rho0));
      }
    }
  }
  return out;
}

}  // namespace circumnav
