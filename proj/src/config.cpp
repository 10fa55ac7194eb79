#include "frontier_lab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "frontier_lab/errors.hpp"

namespace frontier_lab {

namespace {

using Numbers = std::vector<double>;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  std::string cleaned;
  for (char c : s) {
    if (c != '_') cleaned.push_back(c);
  }
  if (cleaned.empty()) return false;
  const char* first = cleaned.data();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, cleaned.data() + cleaned.size(), out);
  return res.ec == std::errc() && res.ptr == cleaned.data() + cleaned.size() && std::isfinite(out);
}

std::string type_name(const Config::Value& v) {
  switch (v.index()) {
    case 0:
      return "boolean";
    case 1:
      return "number";
    case 2:
      return "string";
    default:
      return "number array";
  }
}

}  // namespace

Config Config::defaults() {
  Config c;
  auto& v = c.values_;
  // Root seed of every random stream; FRONTIER_LAB_SEED is used when unset.
  v["run.seed"] = 20240601.0;
  v["run.jobs"] = 0.0;  // 0: all available cores
  v["run.out_dir"] = std::string("runs");

  v["analytic.alphas"] = Numbers{1.3, 1.5, 1.7, 1.9, 2.1};
  v["analytic.thresholds"] = Numbers{1, 4};
  v["analytic.d_min"] = 1e3;
  v["analytic.d_max"] = 1e7;
  v["analytic.d_points"] = 41.0;
  v["analytic.beta"] = 2.0;
  v["analytic.rate"] = 1.0;
  v["analytic.kernel"] = std::string("exponential");
  v["analytic.kernel_order"] = 2.0;
  v["analytic.tau_min"] = 1e6;
  v["analytic.tau_max"] = 1e9;
  v["analytic.tau_points"] = 31.0;
  v["analytic.frontier_delta"] = 0.5;

  v["nn.axis"] = std::string("data-D");
  v["nn.grid"] = Numbers{};  // empty: the axis default grid
  v["nn.seeds"] = Numbers{0, 1, 2};
  v["nn.vocab"] = 1000.0;
  v["nn.alpha"] = 1.5;
  v["nn.hidden"] = 2000.0;
  v["nn.steps"] = 10000.0;
  v["nn.lr"] = 0.1;
  v["nn.momentum"] = 0.9;
  v["nn.batch"] = 64.0;
  v["nn.init_std"] = 0.1;
  v["nn.frontier_delta"] = 0.5;
  v["nn.loss_reduction"] = std::string("mean");  // mean | sum

  v["dln.depths"] = Numbers{2, 3, 5};
  v["dln.zetas"] = Numbers{1.0, 0.5, 0.5};
  v["dln.vocab"] = 1000.0;
  v["dln.alpha"] = 1.5;
  v["dln.eta"] = 1.0;
  v["dln.ranks"] = Numbers{1, 4, 16, 64};
  v["dln.trajectory_points"] = 512.0;

  v["plan.alpha"] = 1.5;
  v["plan.beta"] = 2.0;
  v["plan.gamma"] = 0.5;
  v["plan.A"] = 1.0;
  v["plan.B"] = 1.0;
  v["plan.G"] = 1.0;
  // Non-zero exponents override the values implied by (alpha, beta, gamma).
  v["plan.alpha_N"] = 0.0;
  v["plan.alpha_D"] = 0.0;
  v["plan.alpha_tau"] = 0.0;
  v["plan.flops_per_unit"] = 6.0;
  v["plan.c_min"] = 1e18;
  v["plan.c_max"] = 1e24;
  v["plan.points"] = 7.0;

  v["verify.profile"] = std::string("full");  // full | quick
  v["verify.compute_seeds"] = Numbers{0};
  v["verify.determinism"] = true;
  return c;
}

void Config::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  merge_text(ss.str(), path.string());
}

void Config::merge_text(std::string_view text, std::string_view source) {
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw UsageError(where + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw UsageError(where + ": expected key = value");
    const auto key = std::string(trim(line.substr(0, eq)));
    assign(section.empty() ? key : section + "." + key, trim(line.substr(eq + 1)), where);
  }
}

void Config::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw UsageError("override '" + std::string(assignment) + "' is not key=value");
  assign(std::string(trim(assignment.substr(0, eq))), trim(assignment.substr(eq + 1)),
         "override '" + std::string(assignment) + "'");
}

void Config::assign(const std::string& key, std::string_view literal, std::string_view where) {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    std::string msg = std::string(where) + ": unknown key '" + key + "'. Valid keys:";
    for (const auto& k : keys()) msg += "\n  " + k;
    throw UsageError(msg);
  }
  Value parsed;
  const auto bad = [&] {
    return UsageError(std::string(where) + ": '" + key + "' expects a " + type_name(it->second) + ", got '" +
                      std::string(literal) + "'");
  };
  switch (it->second.index()) {
    case 0:
      if (literal == "true") {
        parsed = true;
      } else if (literal == "false") {
        parsed = false;
      } else {
        throw bad();
      }
      break;
    case 1: {
      double x = 0.0;
      if (!parse_number(literal, x)) throw bad();
      parsed = x;
      break;
    }
    case 2:
      if (literal.size() >= 2 && literal.front() == '"' && literal.back() == '"') {
        parsed = std::string(literal.substr(1, literal.size() - 2));
      } else if (!literal.empty() && literal.find_first_of("\"[],") == std::string_view::npos) {
        parsed = std::string(literal);  // bare words are accepted on the command line
      } else {
        throw bad();
      }
      break;
    default: {
      if (literal.size() < 2 || literal.front() != '[' || literal.back() != ']') throw bad();
      Numbers xs;
      auto body = trim(literal.substr(1, literal.size() - 2));
      while (!body.empty()) {
        const auto comma = body.find(',');
        double x = 0.0;
        if (!parse_number(body.substr(0, comma), x)) throw bad();
        xs.push_back(x);
        if (comma == std::string_view::npos) break;
        body = trim(body.substr(comma + 1));
      }
      parsed = std::move(xs);
    }
  }
  it->second = std::move(parsed);
  explicitly_set_[key] = true;
}

const Config::Value& Config::at(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw UsageError("unknown config key '" + key + "'");
  return it->second;
}

double Config::number(const std::string& key) const {
  const auto* x = std::get_if<double>(&at(key));
  if (!x) throw UsageError("config key '" + key + "' is not a number");
  return *x;
}

std::uint64_t Config::count(const std::string& key) const {
  const double x = number(key);
  if (!(x >= 0.0) || x != std::floor(x) || x > 9.007199254740992e15) {
    throw UsageError("config key '" + key + "' must be a non-negative integer");
  }
  return static_cast<std::uint64_t>(x);
}

std::string Config::text(const std::string& key) const {
  const auto* x = std::get_if<std::string>(&at(key));
  if (!x) throw UsageError("config key '" + key + "' is not a string");
  return *x;
}

bool Config::flag(const std::string& key) const {
  const auto* x = std::get_if<bool>(&at(key));
  if (!x) throw UsageError("config key '" + key + "' is not a boolean");
  return *x;
}

std::vector<double> Config::numbers(const std::string& key) const {
  const auto* x = std::get_if<Numbers>(&at(key));
  if (!x) throw UsageError("config key '" + key + "' is not a number array");
  return *x;
}

void Config::set(const std::string& key, Value value) {
  const auto& current = at(key);
  if (current.index() != value.index()) throw UsageError("config key '" + key + "' has a different type");
  values_[key] = std::move(value);
  explicitly_set_[key] = true;
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : values_) out.push_back(k);
  return out;
}

nlohmann::json Config::to_json() const {
  nlohmann::json tree = nlohmann::json::object();
  for (const auto& [key, value] : values_) {
    const auto dot = key.find('.');
    auto& slot = tree[key.substr(0, dot)][key.substr(dot + 1)];
    std::visit([&](const auto& x) { slot = x; }, value);
  }
  return tree;
}

}  // namespace frontier_lab
