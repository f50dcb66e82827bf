#include "hcorbit/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace hcorbit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw DomainError("bad number for " + key + ": '" + v + "'");
  return x;
}

template <class I>
I parse_int(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  I x = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw DomainError("bad integer for " + key + ": '" + v + "'");
  return x;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  return out;
}

std::string format(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format(v[i]);
  return s;
}

} // namespace

const std::vector<std::string>& Tolerances::names() {
  static const std::vector<std::string> n{"structure",       "z0",           "chi",
                                          "lemma_slack",     "flat_identity", "moment_identity",
                                          "stage_pullback",  "composite_pullback", "zero_section",
                                          "equivariance",    "moment_spread", "properness_slack",
                                          "stokes",          "orthogonality", "gauge"};
  return n;
}

double& Tolerances::at(const std::string& name) {
  if (name == "structure") return structure;
  if (name == "z0") return z0;
  if (name == "chi") return chi;
  if (name == "lemma_slack") return lemma_slack;
  if (name == "flat_identity") return flat_identity;
  if (name == "moment_identity") return moment_identity;
  if (name == "stage_pullback") return stage_pullback;
  if (name == "composite_pullback") return composite_pullback;
  if (name == "zero_section") return zero_section;
  if (name == "equivariance") return equivariance;
  if (name == "moment_spread") return moment_spread;
  if (name == "properness_slack") return properness_slack;
  if (name == "stokes") return stokes;
  if (name == "orthogonality") return orthogonality;
  if (name == "gauge") return gauge;
  throw DomainError("unknown tolerance '" + name + "'");
}

double Tolerances::at(const std::string& name) const { return const_cast<Tolerances*>(this)->at(name); }

AlgebraSpec Scenario::algebra() const {
  if (family == "su") return AlgebraSpec::su(p, q);
  if (family == "sp") return AlgebraSpec::sp(n);
  throw DomainError("unknown family '" + family + "' (expected su or sp)");
}

ChamberWeight Scenario::weight(const MatrixLieAlgebra& g, const RootDatum& datum) const {
  if (!lambda.empty() && !lambda_diag.empty()) throw DomainError("set either lambda or lambda_diag, not both");
  if (!lambda_diag.empty()) return weight_from_diagonal(g, lambda_diag);
  if (lambda.empty()) return weight_lambda0(g, datum);
  if (static_cast<int>(lambda.size()) != g.torus_rank())
    throw DomainError("lambda needs " + std::to_string(g.torus_rank()) + " torus coordinates");
  return make_weight(g, Eigen::Map<const Vec>(lambda.data(), static_cast<Eigen::Index>(lambda.size())));
}

void Scenario::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "family") family = value;
  else if (key == "p") p = parse_int<int>(key, value);
  else if (key == "q") q = parse_int<int>(key, value);
  else if (key == "n") n = parse_int<int>(key, value);
  else if (key == "lambda") lambda = parse_list(key, value);
  else if (key == "lambda_diag") lambda_diag = parse_list(key, value);
  else if (key == "delta_mult") delta_mult = parse_double(key, value);
  else if (key == "delta") delta = parse_double(key, value);
  else if (key == "steps") steps = parse_int<int>(key, value);
  else if (key == "samples") samples = parse_int<int>(key, value);
  else if (key == "flow_samples") flow_samples = parse_int<int>(key, value);
  else if (key == "lemma_samples") lemma_samples = parse_int<int>(key, value);
  else if (key == "eps") eps = parse_double(key, value);
  else if (key == "stencil") stencil = parse_int<int>(key, value);
  else if (key == "seed") seed = parse_int<std::uint64_t>(key, value);
  else if (key == "out") out = value;
  else if (key.rfind("tolerances.", 0) == 0) tolerances.at(key.substr(11)) = parse_double(key, value);
  else throw DomainError("unknown scenario key '" + key + "'");
}

void Scenario::validate() const {
  algebra();
  if (!delta && !(delta_mult > 1.0)) throw DomainError("delta_mult must exceed 1");
  if (delta && !(*delta > 0.0)) throw DomainError("delta must be positive");
  if (steps < 10) throw DomainError("steps must be at least 10");
  if (samples < 1 || flow_samples < 1 || lemma_samples < 1) throw DomainError("sample counts must be positive");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (stencil != 2 && stencil != 4) throw DomainError("stencil must be 2 or 4");
  for (const auto& name : Tolerances::names())
    if (!(tolerances.at(name) > 0.0)) throw DomainError("tolerance " + name + " must be positive");
}

Scenario parse_scenario(const std::string& text) {
  Scenario s;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("line " + std::to_string(lineno) + ": expected key = value");
    s.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open scenario file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

std::string to_config_text(const Scenario& s) {
  std::ostringstream os;
  os << "family = " << s.family << "\n";
  if (s.family == "su") os << "p = " << s.p << "\nq = " << s.q << "\n";
  else os << "n = " << s.n << "\n";
  if (!s.lambda.empty()) os << "lambda = " << format_list(s.lambda) << "\n";
  if (!s.lambda_diag.empty()) os << "lambda_diag = " << format_list(s.lambda_diag) << "\n";
  os << "delta_mult = " << format(s.delta_mult) << "\n";
  if (s.delta) os << "delta = " << format(*s.delta) << "\n";
  os << "steps = " << s.steps << "\nsamples = " << s.samples << "\nflow_samples = " << s.flow_samples
     << "\nlemma_samples = " << s.lemma_samples << "\neps = " << format(s.eps) << "\nstencil = " << s.stencil
     << "\nseed = " << s.seed << "\n";
  if (!s.out.empty()) os << "out = " << s.out << "\n";
  for (const auto& name : Tolerances::names()) os << "tolerances." << name << " = " << format(s.tolerances.at(name)) << "\n";
  return os.str();
}

} // namespace hcorbit
