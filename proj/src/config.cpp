#include "plateau/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "plateau/error.hpp"

namespace plateau {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Solve: return "solve";
    case Mode::Analyze: return "analyze";
    case Mode::LscTest: return "lsc-test";
    case Mode::Sweep: return "sweep";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(const std::string& text) {
  if (text == "solve") return Mode::Solve;
  if (text == "analyze") return Mode::Analyze;
  if (text == "lsc-test") return Mode::LscTest;
  if (text == "sweep") return Mode::Sweep;
  return std::nullopt;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line;
};

using Section = std::map<std::string, Entry>;

[[noreturn]] void parse_fail(int line, const std::string& why) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line), why);
}

std::vector<double> numbers(const Entry& e, std::size_t expected = 0) {
  std::istringstream in(e.value);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) parse_fail(e.line, "not a number: '" + tok + "'");
    out.push_back(v);
  }
  if (expected && out.size() != expected) {
    parse_fail(e.line, "expected " + std::to_string(expected) + " numbers, got " + std::to_string(out.size()));
  }
  return out;
}

double number(const Entry& e) { return numbers(e, 1)[0]; }

long integer(const Entry& e) {
  const double v = number(e);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) parse_fail(e.line, "expected an integer");
  return static_cast<long>(v);
}

bool boolean(const Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  parse_fail(e.line, "expected true or false");
}

Vec3 vec(const std::vector<double>& v, std::size_t at) { return Vec3(v[at], v[at + 1], v[at + 2]); }

ConvexRegion region(const Entry& e) {
  std::istringstream in(e.value);
  std::string kind;
  in >> kind;
  std::string rest;
  std::getline(in, rest);
  const Entry tail{rest, e.line};
  if (kind == "box") {
    const auto v = numbers(tail, 6);
    return Box{vec(v, 0), vec(v, 3)};
  }
  if (kind == "ball") {
    const auto v = numbers(tail, 4);
    return Ball{vec(v, 0), v[3]};
  }
  parse_fail(e.line, "inner region must be 'box' or 'ball'");
}

CurveSpec curve(const Entry& e) {
  std::istringstream in(e.value);
  std::string kind;
  in >> kind;
  std::string rest;
  std::getline(in, rest);
  if (kind == "circle") {
    const auto v = numbers({rest, e.line}, 7);
    return CircleCurve{vec(v, 0), v[3], vec(v, 4)};
  }
  if (kind == "polyline") {
    PolylineCurve poly;
    std::istringstream pts(rest);
    std::string point;
    while (std::getline(pts, point, ';')) {
      if (trim(point).empty()) continue;
      poly.points.push_back(vec(numbers({point, e.line}, 3), 0));
    }
    return poly;
  }
  parse_fail(e.line, "curve must be 'circle' or 'polyline'");
}

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::ValidationError, field, why);
}

}  // namespace

RunConfig parse_config_text(const std::string& text, std::optional<Mode> mode_override) {
  std::map<std::string, Section> sections;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(lineno, "unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current != "domain" && current != "curves" && current != "solver" && current != "run") {
        parse_fail(lineno, "unknown section [" + current + "]");
      }
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(lineno, "expected key = value");
    if (current.empty()) parse_fail(lineno, "key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail(lineno, "empty key");
    if (!sections[current].emplace(key, Entry{value, lineno}).second) {
      parse_fail(lineno, "duplicate key '" + key + "'");
    }
  }

  RunConfig cfg;
  auto take = [&](const std::string& sec, const std::string& key) -> const Entry* {
    auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  };
  auto known = [&](const std::string& sec, std::initializer_list<const char*> keys) {
    auto s = sections.find(sec);
    if (s == sections.end()) return;
    for (const auto& [key, entry] : s->second) {
      bool ok = false;
      for (const char* k : keys) ok = ok || key == k;
      if (!ok) parse_fail(entry.line, "unknown key '" + key + "' in [" + sec + "]");
    }
  };

  known("domain", {"outer", "inner"});
  known("solver", {"epsilon", "h", "lambda", "c_eps", "delta_eps", "cg_tol", "max_outer", "sheet_sweeps"});
  known("run", {"mode", "M", "K", "seed", "monitor_ahlfors", "ahlfors_levels", "alpha", "pairs", "generator",
                "terms", "r_inner", "r_outer", "sheet_M", "sheet_K", "eps_list", "out"});

  if (const Entry* e = take("run", "mode")) {
    const auto m = parse_mode(e->value);
    if (!m) parse_fail(e->line, "unknown mode '" + e->value + "'");
    cfg.mode = *m;
  }
  if (mode_override) cfg.mode = *mode_override;

  const Entry* outer = take("domain", "outer");
  const Entry* inner = take("domain", "inner");
  if (outer && inner) {
    const auto o = numbers(*outer, 6);
    cfg.domain = DomainSpec{Box{vec(o, 0), vec(o, 3)}, region(*inner)};
  } else if (outer || inner) {
    invalid("domain", "both outer and inner are required");
  }

  if (auto s = sections.find("curves"); s != sections.end()) {
    // Exactly gamma0 and gamma1; anything else is a curve too many.
    for (const auto& [key, entry] : s->second) {
      if (key != "gamma0" && key != "gamma1") invalid("curves", "only gamma0 and gamma1 are supported");
    }
    for (const char* key : {"gamma0", "gamma1"}) {
      if (const Entry* e = take("curves", key)) cfg.curves.push_back(curve(*e));
    }
  }

  SolverParams& p = cfg.params;
  if (const Entry* e = take("solver", "epsilon")) p.epsilon = number(*e);
  if (const Entry* e = take("solver", "h")) p.h = number(*e);
  if (const Entry* e = take("solver", "lambda")) p.lambda_cap = number(*e);
  if (const Entry* e = take("solver", "c_eps")) {
    p.c_eps = number(*e);
    cfg.c_eps_set = true;
  }
  if (const Entry* e = take("solver", "delta_eps")) {
    p.delta_eps = number(*e);
    cfg.delta_eps_set = true;
  }
  if (p.epsilon > 0.0) {
    if (!cfg.c_eps_set) p.c_eps = std::sqrt(p.epsilon);
    if (!cfg.delta_eps_set) p.delta_eps = p.epsilon;
  }
  if (const Entry* e = take("solver", "cg_tol")) p.cg_tol = number(*e);
  if (const Entry* e = take("solver", "max_outer")) p.max_outer = static_cast<int>(integer(*e));
  if (const Entry* e = take("solver", "sheet_sweeps")) p.sheet_sweeps = static_cast<int>(integer(*e));

  if (const Entry* e = take("run", "M")) cfg.M = static_cast<int>(integer(*e));
  if (const Entry* e = take("run", "K")) cfg.K = static_cast<int>(integer(*e));
  if (const Entry* e = take("run", "seed")) {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(e->value, &used);
      if (used != e->value.size()) parse_fail(e->line, "seed must be an unsigned integer");
    } catch (const std::logic_error&) {
      parse_fail(e->line, "seed must be an unsigned integer");
    }
  }
  if (const Entry* e = take("run", "monitor_ahlfors")) cfg.monitor_ahlfors = boolean(*e);
  if (const Entry* e = take("run", "ahlfors_levels")) cfg.ahlfors_levels = static_cast<int>(integer(*e));
  if (const Entry* e = take("run", "alpha")) cfg.alpha = number(*e);
  if (const Entry* e = take("run", "pairs")) cfg.pairs = integer(*e);
  if (const Entry* e = take("run", "generator")) cfg.generator = e->value;
  if (const Entry* e = take("run", "terms")) cfg.terms = static_cast<int>(integer(*e));
  if (const Entry* e = take("run", "r_inner")) cfg.annulus.r_inner = number(*e);
  if (const Entry* e = take("run", "r_outer")) cfg.annulus.r_outer = number(*e);
  if (const Entry* e = take("run", "sheet_M")) cfg.annulus.M = static_cast<int>(integer(*e));
  if (const Entry* e = take("run", "sheet_K")) cfg.annulus.K = static_cast<int>(integer(*e));
  if (const Entry* e = take("run", "eps_list")) cfg.eps_list = numbers(*e);
  if (const Entry* e = take("run", "out")) cfg.out_dir = e->value;

  validate(cfg);
  return cfg;
}

RunConfig parse_config(const std::string& path, std::optional<Mode> mode_override) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, path, "cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), mode_override);
}

void validate(const RunConfig& c) {
  const SolverParams& p = c.params;
  if (c.mode == Mode::LscTest) {
    if (c.generator != "wrinkle" && c.generator != "bump") invalid("generator", "must be wrinkle or bump");
    if (c.terms < 2) invalid("terms", "need at least 2 terms");
    if (!(c.annulus.r_inner > 0.0 && c.annulus.r_outer > c.annulus.r_inner)) {
      invalid("r_inner", "need 0 < r_inner < r_outer");
    }
    if (c.annulus.M < 2) invalid("sheet_M", "must be at least 2");
    if (c.annulus.K < 8) invalid("sheet_K", "must be at least 8");
    return;
  }
  if (!c.domain) invalid("domain", "missing [domain] outer/inner");
  if (c.curves.size() != 2) invalid("curves", "exactly two curves (gamma0, gamma1) are required");
  if (c.mode == Mode::Sweep) {
    if (c.eps_list.empty()) invalid("eps_list", "sweep needs a nonempty eps_list");
    for (double e : c.eps_list) {
      if (!(e > 0.0)) invalid("eps_list", "entries must be positive");
    }
  } else if (!(p.epsilon > 0.0)) {
    invalid("epsilon", p.epsilon == 0.0 ? "missing" : "must be positive");
  }
  if (!(p.h > 0.0)) invalid("h", p.h == 0.0 ? "missing" : "must be positive");
  if (!(p.lambda_cap > 0.0)) invalid("lambda", p.lambda_cap == 0.0 ? "missing" : "must be positive");
  if (c.c_eps_set && !(p.c_eps > 0.0)) invalid("c_eps", "must be positive");
  if (c.delta_eps_set && !(p.delta_eps >= 0.0)) invalid("delta_eps", "must be nonnegative");
  if (!(p.cg_tol > 0.0)) invalid("cg_tol", "must be positive");
  if (p.max_outer < 1) invalid("max_outer", "must be at least 1");
  if (p.sheet_sweeps < 0) invalid("sheet_sweeps", "must be nonnegative");
  if (c.M < 2) invalid("M", "must be at least 2");
  if (c.K < 8) invalid("K", "must be at least 8");
  if (c.ahlfors_levels < 1) invalid("ahlfors_levels", "must be at least 1");
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) invalid("alpha", "must lie in (0, 1]");
  if (c.pairs < 1) invalid("pairs", "must be positive");
}

}  // namespace plateau
