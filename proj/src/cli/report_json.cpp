#include "report_json.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace mmh::cli {

using nlohmann::json;

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json to_json(const Witness& w) {
  return {{"at", number(w.at)}, {"log_at", number(w.log_at)}, {"lhs", number(w.lhs)}, {"rhs", number(w.rhs)}};
}

json to_json(const ConditionResult& c) {
  json constants = json::object();
  for (const auto& [k, v] : c.constants) constants[k] = number(v);
  json witnesses = json::array();
  for (const auto& w : c.witnesses) witnesses.push_back(to_json(w));
  return {{"id", c.id},
          {"verdict", to_string(c.verdict)},
          {"constants", constants},
          {"witnesses", witnesses},
          {"note", c.note}};
}

json to_json(const HyperConstant& c) {
  json profile = json::array();
  for (const auto& [n, v] : c.profile) profile.push_back({{"n", n}, {"ratio", number(v)}});
  return {{"C", number(c.C)}, {"argmax_n", c.argmax_n}, {"profile", profile}};
}

json to_json(const ComparisonVerdict& v) {
  json constants = json::object();
  for (const auto& [k, x] : v.constants) constants[k] = number(x);
  json witnesses = json::array();
  for (const auto& w : v.witnesses) witnesses.push_back(to_json(w));
  json checks = json::array();
  for (const auto& c : v.checks) checks.push_back(to_json(c));
  return {{"direction", to_string(v.direction)},
          {"verdict", to_string(v.verdict)},
          {"constants", constants},
          {"t_range", {number(v.t_lo), number(v.t_hi)}},
          {"witnesses", witnesses},
          {"B_domination", number(v.B_domination)},
          {"B_argmax_n", v.B_argmax_n},
          {"checks", checks},
          {"note", v.note}};
}

json to_json(const Proportion& p) {
  return {{"estimate", number(p.p)},
          {"count", p.count},
          {"n", p.n},
          {"std_error", number(p.std_error)},
          {"wilson_999", {number(p.lo), number(p.hi)}}};
}

json to_json(const BoundRow& r) {
  return {{"shift", r.shift},
          {"t", number(r.t)},
          {"estimate", number(r.estimate)},
          {"bound", number(r.bound)},
          {"std_error", number(r.std_error)},
          {"holds", r.holds}};
}

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

json assertion(const std::string& id, const std::string& statement, Verdict verdict, bool asserted) {
  return {{"id", id}, {"statement", statement}, {"verdict", to_string(verdict)}, {"asserted", asserted}};
}

int exit_code_for(const json& assertions) {
  bool inconclusive = false;
  for (const auto& a : assertions) {
    if (!a.value("asserted", true)) continue;
    const auto v = a.at("verdict").get<std::string>();
    if (v == "fails") return kFails;
    if (v == "inconclusive") inconclusive = true;
  }
  return inconclusive ? kInconclusive : kHolds;
}

json envelope(const RunConfig& c, const Outcome& outcome) {
  json cfg = {{"p", c.p}, {"q", c.q}, {"format", c.format}};
  auto put = [&](const char* key, const std::string& v) {
    if (!v.empty()) cfg[key] = v;
  };
  put("dist", c.dist);
  put("dist_x", c.dist_x);
  put("dist_y", c.dist_y);
  put("word", c.word);
  put("law", c.law);
  put("sets", c.sets);
  put("cov", c.cov);
  if (c.r) cfg["r"] = *c.r;
  cfg["alpha"] = c.alpha;

  json rep;
  rep["schema"] = 1;
  rep["tool"] = "minmax_hyper";
  rep["subcommand"] = c.subcommand;
  rep["seed"] = c.seed;
  rep["config"] = cfg;
  rep["exit_code"] = outcome.exit_code;
  for (const auto& [k, v] : outcome.report.items()) rep[k] = v;
  if (!c.no_timestamp) {
    // Run metadata that may legitimately differ between identical runs.
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ts;
    ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    rep["timestamp"] = ts.str();
    rep["threads"] = c.threads;
  }
  return rep;
}

std::string render_text(const json& report) {
  std::ostringstream os;
  os << report.value("subcommand", "?") << ": exit " << report.value("exit_code", -1) << "\n";
  if (report.contains("assertions")) {
    for (const auto& a : report.at("assertions")) {
      os << "  [" << a.value("verdict", "?") << (a.value("asserted", true) ? "" : ", reported") << "] "
         << a.value("id", "") << ": " << a.value("statement", "") << "\n";
    }
  }
  if (report.contains("summary")) {
    for (const auto& [k, v] : report.at("summary").items()) os << "  " << k << " = " << v.dump() << "\n";
  }
  if (report.contains("error")) {
    os << "  error " << report.at("error").value("kind", "") << ": " << report.at("error").value("message", "")
       << "\n";
  }
  return os.str();
}

}  // namespace mmh::cli
