#include "routerq/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <sstream>
#include <vector>

namespace routerq {

namespace {

struct RawValue {
  std::string text;
  int line = 0;
  int column = 0;
};

using RawConfig = std::map<std::string, RawValue>;

std::string trim(const std::string& s, std::size_t* lead = nullptr) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (lead) *lead = (b == std::string::npos) ? 0 : b;
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(lineno, 1, "expected `key = value`");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(lineno, 1, "missing key");
    std::size_t value_lead = 0;
    const std::string value = trim(line.substr(eq + 1), &value_lead);
    const int value_col = static_cast<int>(eq + 2 + value_lead);
    if (value.empty())
      throw ConfigError(lineno, value_col, "missing value for `" + key + "`");
    if (raw.count(key))
      throw ConfigError(lineno, 1, "duplicate key `" + key + "`");
    raw[key] = RawValue{value, lineno, value_col};
  }
  return raw;
}

double parse_double(const RawValue& v) {
  const char* begin = v.text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ConfigError(v.line, v.column, "malformed number `" + v.text + "`");
  return value;
}

std::uint64_t parse_u64(const RawValue& v) {
  const double d = parse_double(v);
  if (d < 0.0 || d != static_cast<std::uint64_t>(d))
    throw ConfigError(v.line, v.column,
                      "expected a non-negative integer, got `" + v.text + "`");
  return static_cast<std::uint64_t>(d);
}

int parse_int(const RawValue& v) {
  const std::uint64_t u = parse_u64(v);
  if (u > 1000000)
    throw ConfigError(v.line, v.column, "value out of range: `" + v.text + "`");
  return static_cast<int>(u);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

// `start:stop:step` (inclusive endpoints) or a single rate.
std::vector<double> parse_sweep(const RawValue& v) {
  const auto parts = split(v.text, ':');
  auto number = [&](const std::string& text) {
    RawValue part{text, v.line, v.column};
    return parse_double(part);
  };
  if (parts.size() == 1) return {number(parts[0])};
  if (parts.size() != 3)
    throw ConfigError(v.line, v.column,
                      "sweep must be `start:stop:step` or a single rate");
  const double start = number(parts[0]);
  const double stop = number(parts[1]);
  const double step = number(parts[2]);
  if (!(step > 0.0) || stop < start)
    throw ConfigError(v.line, v.column, "sweep requires stop >= start, step > 0");
  std::vector<double> sweep;
  const int count = static_cast<int>((stop - start) / step + 0.5) + 1;
  for (int i = 0; i < count; ++i) {
    const double value = start + i * step;
    if (value > stop * (1.0 + 1e-12)) break;
    sweep.push_back(value);
  }
  return sweep;
}

Discipline parse_discipline(const std::string& text, const RawValue& v) {
  if (text == "FCFS") return Discipline::FCFS;
  if (text == "HOL" || text == "PQ") return Discipline::HOL;
  throw ConfigError(v.line, v.column,
                    "discipline must be FCFS or HOL, got `" + text + "`");
}

SecurityMode parse_security(const std::string& text, const RawValue& v) {
  if (text == "OFF") return SecurityMode::Off;
  if (text == "ON") return SecurityMode::On;
  throw ConfigError(v.line, v.column,
                    "security must be ON or OFF, got `" + text + "`");
}

const char* discipline_name(Discipline d) {
  return d == Discipline::FCFS ? "FCFS" : "HOL";
}

const char* security_name(SecurityMode s) {
  return s == SecurityMode::On ? "ON" : "OFF";
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ScenarioSpec parse_config(const std::string& text) {
  RawConfig raw = tokenize(text);

  const auto scenario_it = raw.find("scenario");
  if (scenario_it == raw.end())
    throw ConfigError(0, 0, "missing required key `scenario`");
  const RawValue scenario = scenario_it->second;
  raw.erase(scenario_it);

  auto take = [&raw](const char* key) -> std::unique_ptr<RawValue> {
    auto it = raw.find(key);
    if (it == raw.end()) return nullptr;
    auto v = std::make_unique<RawValue>(it->second);
    raw.erase(it);
    return v;
  };

  ScenarioSpec spec;
  const bool builtin = is_builtin_scenario(scenario.text);
  if (builtin) {
    spec = builtin_scenario(scenario.text);
  } else if (scenario.text == "custom") {
    spec.name = "custom";
    spec.lambda1_sweep = builtin_scenario("A").lambda1_sweep;
    spec.arms.clear();
  } else {
    throw ConfigError(scenario.line, scenario.column,
                      "scenario must be A, B, C, D, or custom");
  }

  // Run-length knobs are valid for both builtin and custom scenarios.
  if (auto v = take("replications")) spec.replications = parse_int(*v);
  if (auto v = take("arrivals")) spec.arrivals_per_replication = parse_u64(*v);
  if (auto v = take("warmup_fraction")) {
    spec.warmup_fraction = parse_double(*v);
    if (!(spec.warmup_fraction >= 0.0 && spec.warmup_fraction < 1.0))
      throw ConfigError(v->line, v->column, "warmup_fraction must be in [0,1)");
  }

  if (!builtin) {
    if (auto v = take("name")) spec.name = v->text;
    if (auto v = take("lambda1_sweep")) spec.lambda1_sweep = parse_sweep(*v);
    double scv_a1 = 4.0, scv_a2 = 4.0;
    auto positive = [](const RawValue& v, double value, const char* what) {
      if (!(value > 0.0))
        throw ConfigError(v.line, v.column, std::string(what) + " must be > 0");
      return value;
    };
    auto scv = [](const RawValue& v, double value) {
      if (!(value >= 1.0))
        throw ConfigError(v.line, v.column, "SCV must be >= 1 (GE distribution)");
      return value;
    };
    if (auto v = take("lambda2")) spec.lambda2 = positive(*v, parse_double(*v), "lambda2");
    if (auto v = take("mu")) spec.mu = positive(*v, parse_double(*v), "mu");
    if (auto v = take("scv_a1")) scv_a1 = scv(*v, parse_double(*v));
    if (auto v = take("scv_a2")) scv_a2 = scv(*v, parse_double(*v));
    if (auto v = take("scv_s")) spec.scv_s = scv(*v, parse_double(*v));
    if (auto v = take("acl_scv")) spec.acl_scv = scv(*v, parse_double(*v));
    if (auto v = take("capacity")) spec.capacity = parse_int(*v);
    if (auto v = take("accept_prob")) {
      spec.accept_prob = parse_double(*v);
      if (!(spec.accept_prob >= 0.0 && spec.accept_prob <= 1.0))
        throw ConfigError(v->line, v->column, "accept_prob must be in [0,1]");
    }
    if (auto v = take("acl_rate_factor"))
      spec.acl_rate_factor = positive(*v, parse_double(*v), "acl_rate_factor");

    std::vector<Discipline> disciplines = {Discipline::HOL};
    std::vector<SecurityMode> security = {SecurityMode::Off};
    std::vector<int> servers = {4};
    if (auto v = take("disciplines")) {
      disciplines.clear();
      for (const auto& part : split(v->text, ','))
        disciplines.push_back(parse_discipline(part, *v));
    }
    if (auto v = take("security")) {
      security.clear();
      for (const auto& part : split(v->text, ','))
        security.push_back(parse_security(part, *v));
    }
    if (auto v = take("servers")) {
      servers.clear();
      for (const auto& part : split(v->text, ','))
        servers.push_back(parse_int(RawValue{part, v->line, v->column}));
    }
    for (Discipline d : disciplines)
      for (SecurityMode sec : security)
        for (int c : servers) {
          ArmSpec arm;
          arm.label = std::string(discipline_name(d)) + "-SEC=" +
                      security_name(sec) + "-C=" + std::to_string(c);
          arm.discipline = d;
          arm.security = sec;
          arm.servers = c;
          arm.scv_a1 = scv_a1;
          arm.scv_a2 = scv_a2;
          spec.arms.push_back(arm);
        }
  }

  if (!raw.empty()) {
    const auto& [key, v] = *raw.begin();
    const std::string reason =
        builtin ? "key `" + key + "` is not allowed with a builtin scenario"
                : "unknown key `" + key + "`";
    throw ConfigError(v.line, 1, reason);
  }

  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, 0, e.what());
  }
  return spec;
}

std::string canonical_config(const ScenarioSpec& spec) {
  std::ostringstream out;
  out << "scenario = " << spec.name << "\n";
  out << "lambda1_sweep = ";
  for (std::size_t i = 0; i < spec.lambda1_sweep.size(); ++i) {
    if (i) out << ",";
    out << fmt17(spec.lambda1_sweep[i]);
  }
  out << "\n";
  out << "lambda2 = " << fmt17(spec.lambda2) << "\n";
  out << "mu = " << fmt17(spec.mu) << "\n";
  out << "scv_s = " << fmt17(spec.scv_s) << "\n";
  out << "capacity = " << spec.capacity << "\n";
  out << "replications = " << spec.replications << "\n";
  out << "arrivals = " << spec.arrivals_per_replication << "\n";
  out << "warmup_fraction = " << fmt17(spec.warmup_fraction) << "\n";
  out << "accept_prob = " << fmt17(spec.accept_prob) << "\n";
  out << "acl_rate_factor = " << fmt17(spec.acl_rate_factor) << "\n";
  out << "acl_scv = " << fmt17(spec.acl_scv) << "\n";
  for (const auto& arm : spec.arms) {
    out << "arm = label=" << arm.label
        << " discipline=" << discipline_name(arm.discipline)
        << " security=" << security_name(arm.security)
        << " servers=" << arm.servers << " scv_a1=" << fmt17(arm.scv_a1)
        << " scv_a2=" << fmt17(arm.scv_a2) << "\n";
  }
  return out.str();
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

}  // namespace routerq
