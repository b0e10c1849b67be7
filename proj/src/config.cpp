#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "pwdg/harness.hpp"

namespace pwdg {

const char* to_string(Method m) { return m == Method::Dtn ? "dtn" : "impedance"; }

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::Circular: return "circular";
    case Scenario::PlaneWave: return "planewave";
    case Scenario::TwoLayer: return "two_layer";
    case Scenario::GratingStep: return "grating_step";
    case Scenario::GratingLayers: return "grating_layers";
    case Scenario::Custom: return "custom";
  }
  return "unknown";
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_factor(const std::string& tok) {
  const std::string t = trim(tok);
  if (t == "pi") return kPi;
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (...) {
    fail("not a number: '" + t + "'");
  }
  if (used != t.size()) fail("not a number: '" + t + "'");
  return v;
}

// Accepts numbers and products/quotients with pi, e.g. "-pi/4", "2*pi/3", "1.5".
double parse_real(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) fail("empty number");
  double sign = 1.0;
  if (s[0] == '-' && s.size() > 1 && !std::isdigit(static_cast<unsigned char>(s[1])) && s[1] != '.') {
    sign = -1.0;
    s = s.substr(1);
  }
  double value = 1.0;
  bool divide = false;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == '*' || s[i] == '/') {
      const double f = parse_factor(s.substr(start, i - start));
      value = divide ? value / f : value * f;
      if (i < s.size()) divide = s[i] == '/';
      start = i + 1;
    }
  }
  return sign * value;
}

// "a", "a+bi", "a-bi", "bi", "(a,b)", or "sq(a+bi)" for the square of a complex number.
cplx parse_complex(const std::string& text) {
  std::string s = trim(text);
  if (s.rfind("sq(", 0) == 0 && s.back() == ')') {
    const cplx z = parse_complex(s.substr(3, s.size() - 4));
    return z * z;
  }
  if (!s.empty() && s.front() == '(' && s.back() == ')') {
    const auto c = s.find(',');
    if (c == std::string::npos) fail("bad complex '" + s + "'");
    return {parse_real(s.substr(1, c - 1)), parse_real(s.substr(c + 1, s.size() - c - 2))};
  }
  if (!s.empty() && (s.back() == 'i' || s.back() == 'j')) {
    const std::string body = s.substr(0, s.size() - 1);
    for (size_t i = body.size(); i-- > 1;) {
      if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
        const std::string im = body.substr(i);
        return {parse_real(body.substr(0, i)), im == "+" ? 1.0 : im == "-" ? -1.0 : parse_real(im)};
      }
    }
    return {0.0, body.empty() ? 1.0 : parse_real(body)};
  }
  return {parse_real(s), 0.0};
}

int parse_int(const std::string& text) {
  const double v = parse_real(text);
  if (v != std::floor(v)) fail("not an integer: '" + text + "'");
  return static_cast<int>(v);
}

// Comma list; integer items may be ranges a:b or a:b:step.
std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_int(item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    const int a = parse_int(item.substr(0, c1));
    const int b = parse_int(item.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1));
    const int step = c2 == std::string::npos ? 1 : parse_int(item.substr(c2 + 1));
    if (step <= 0) fail("range step must be positive");
    for (int v = a; v <= b; v += step) out.push_back(v);
  }
  if (out.empty()) fail("empty list");
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(parse_real(item));
  if (out.empty()) fail("empty list");
  return out;
}

bool parse_bool(const std::string& text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  fail("not a boolean: '" + s + "'");
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in), v = trim(value_in);
  if (key == "method") {
    if (v == "dtn") cfg.method = Method::Dtn;
    else if (v == "impedance") cfg.method = Method::Impedance;
    else fail("unknown method '" + v + "'");
  } else if (key == "scenario") {
    bool found = false;
    for (Scenario s : {Scenario::Circular, Scenario::PlaneWave, Scenario::TwoLayer,
                       Scenario::GratingStep, Scenario::GratingLayers, Scenario::Custom})
      if (v == to_string(s)) { cfg.scenario = s; found = true; }
    if (!found) fail("unknown scenario '" + v + "'");
  } else if (key == "k") cfg.k = parse_real(v);
  else if (key == "theta") cfg.theta = parse_real(v);
  else if (key == "eps_plus") cfg.eps_plus = parse_real(v);
  else if (key == "H") cfg.H = parse_real(v);
  else if (key == "eps2") cfg.eps2 = parse_complex(v);
  else if (key == "xi") cfg.xi = parse_real(v);
  else if (key == "d_angle") cfg.d_angle = parse_real(v);
  else if (key == "h") cfg.h = parse_real(v);
  else if (key == "p") cfg.p = parse_int(v);
  else if (key == "M") cfg.M = parse_int(v);
  else if (key == "alpha") cfg.flux.alpha = parse_real(v);
  else if (key == "beta") cfg.flux.beta = parse_real(v);
  else if (key == "delta") cfg.flux.delta = parse_real(v);
  else if (key == "flux") {
    if (v != "uwvf") fail("unknown flux preset '" + v + "'");
    cfg.flux = FluxParams::uwvf();
  } else if (key == "quad_order") cfg.quad_order = parse_int(v);
  else if (key == "gl_points") cfg.gl_points = parse_int(v);
  else if (key == "mesh_file") cfg.mesh_file = v;
  else if (key.rfind("eps.", 0) == 0) cfg.region_eps[parse_int(key.substr(4))] = parse_complex(v);
  else if (key == "timing") cfg.timing = parse_bool(v);
  else if (key == "threads") cfg.threads = parse_int(v);
  else if (key == "p_values") cfg.p_values = parse_int_list(v);
  else if (key == "h_values") cfg.h_values = parse_real_list(v);
  else if (key == "M_values") cfg.M_values = parse_int_list(v);
  else fail("unknown key '" + key + "'");
}

RunConfig parse_config(std::istream& is, RunConfig cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) fail("cannot open config '" + path + "'");
  return parse_config(f, std::move(base));
}

void validate_config(const RunConfig& cfg) {
  if (!(cfg.k > 0.0)) fail("k must be positive");
  if (!(cfg.H > 0.0)) fail("H must be positive");
  if (!(cfg.h > 0.0)) fail("h must be positive");
  if (cfg.p < 1) fail("p must be >= 1");
  if (cfg.M < 0) fail("M must be >= 0");
  if (cfg.quad_order < 4) fail("quad_order must be >= 4");
  if (cfg.gl_points < 1) fail("gl_points must be >= 1");
  if (cfg.threads < 1) fail("threads must be >= 1");
  if (!(cfg.eps_plus > 0.0)) fail("eps_plus must be positive");
  try {
    cfg.flux.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  const bool impedance_only = cfg.scenario == Scenario::Circular || cfg.scenario == Scenario::PlaneWave;
  const bool dtn_only = cfg.scenario == Scenario::GratingStep ||
                        cfg.scenario == Scenario::GratingLayers || cfg.scenario == Scenario::Custom;
  if (impedance_only && cfg.method != Method::Impedance)
    fail(std::string("scenario ") + to_string(cfg.scenario) + " requires method = impedance");
  if (dtn_only && cfg.method != Method::Dtn)
    fail(std::string("scenario ") + to_string(cfg.scenario) + " requires method = dtn");
  if (cfg.method == Method::Dtn && !(cfg.theta > -kPi && cfg.theta < 0.0))
    fail("theta must lie in (-pi, 0)");
  if (cfg.scenario == Scenario::Custom && cfg.mesh_file.empty()) fail("custom scenario needs mesh_file");
  for (int v : cfg.p_values) if (v < 1) fail("p values must be >= 1");
  for (double v : cfg.h_values) if (!(v > 0)) fail("h values must be positive");
  for (int v : cfg.M_values) if (v < 0) fail("M values must be >= 0");
}

}  // namespace pwdg
