#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "minmax/error.hpp"
#include "report_json.hpp"

namespace mmh::cli {

namespace {

struct SubcommandInfo {
  const char* name;
  const char* help;
};

constexpr SubcommandInfo kSubcommands[] = {
    {"moments", "||W(X)||_r for a min/max word W"},
    {"bounds", "E M_N^r sandwich and the tail sandwich of the maximum"},
    {"hyper-min", "min-hypercontractivity conditions"},
    {"hyper-max", "max-hypercontractivity conditions"},
    {"hyper-minmax", "clip condition and the word sweep"},
    {"constants", "closed-form constants"},
    {"compare", "small-ball, tail, two-sided and thinning comparisons of X and Y"},
    {"small-ball", "Monte Carlo nu(tB) for a vector law"},
    {"kanter", "shifted small-ball bound nu(kappa B + y)"},
    {"regularity", "nu(tB) <= R(b) t^{alpha/2} nu(B)"},
    {"correlation", "scaled correlation inequality for Gaussian measures"},
    {"slepian", "sqrt(2) comparison of expected maxima of norms"},
    {"hyp62", "min-moment domination profile of norm maxima"},
    {"integral72", "integral form of small-ball regularity"},
    {"explore-conjectures", "open constants, reported only"},
};

int report_error(const RunConfig& c, const Error& e, int code, std::ostream& out) {
  Outcome o;
  o.exit_code = code;
  o.report = {{"error", {{"kind", e.kind()}, {"message", e.what()}}}, {"assertions", nlohmann::json::array()}};
  const nlohmann::json rep = envelope(c, o);
  if (c.out.empty()) {
    out << (c.format == "text" ? render_text(rep) : rep.dump(2) + "\n");
  } else {
    std::ofstream f(c.out);
    f << (c.format == "text" ? render_text(rep) : rep.dump(2) + "\n");
  }
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Min/max hypercontractivity toolkit", "minmax_hyper"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  app.add_option("--dist", c.dist, "distribution, e.g. exp(1), pareto(3,1)");
  app.add_option("--dist-x", c.dist_x, "law of X for compare");
  app.add_option("--dist-y", c.dist_y, "law of Y for compare");
  app.add_option("--p", c.p, "lower moment order")->capture_default_str();
  app.add_option("--q", c.q, "upper moment order")->capture_default_str();
  app.add_option("--word", c.word, "word such as max4.min2 (rightmost acts first)");
  app.add_option("--r", c.r, "moment order for moments/bounds; r of the integral form for constants");
  app.add_option("--seed", seed, "random seed (else MINMAX_HYPER_SEED, else 0)");
  app.add_option("--samples", c.samples, "Monte Carlo samples (0: subcommand default)");
  app.add_option("--threads", c.threads, "worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));
  app.add_option("--out", c.out, "write the report here instead of stdout");
  app.add_option("--format", c.format, "json or text")->capture_default_str()->check(CLI::IsMember({"json", "text"}));
  app.add_option("--law", c.law, "gaussian, subgaussian or indep")
      ->capture_default_str()
      ->check(CLI::IsMember({"gaussian", "subgaussian", "indep"}));
  app.add_option("--sets", c.sets, "convex set(s): JSON text or a file");
  app.add_option("--alpha", c.alpha, "stability index in (0, 2]")->capture_default_str();
  app.add_option("--cov", c.cov, "covariance: JSON text or a file");
  app.add_flag("--no-timestamp", c.no_timestamp, "omit run metadata for byte-identical reports");

  app.add_option("--C", c.C, "hypercontractivity constant")->capture_default_str();
  app.add_option("--B", c.B, "domination constant B")->capture_default_str();
  app.add_option("--D", c.D, "domination constant D")->capture_default_str();
  app.add_option("--lambda", c.lambda, "lambda in (0, 1)")->capture_default_str();
  app.add_option("--beta", c.beta, "beta in (p/q, 1)");
  app.add_option("--b", c.b, "mass bound b in (0, 1)")->capture_default_str();
  app.add_option("--target", c.target, "rescale the set to this mass");
  app.add_option("--C-tail", c.C_tail, "thinning constant");
  app.add_option("--scale", c.scale, "correlation scale alpha >= 1")->capture_default_str();
  app.add_option("--direction", c.direction, "all, small-ball, tail, two-sided or thinning")->capture_default_str();
  app.add_option("--N", c.N, "values of N for bounds")->capture_default_str();
  app.add_option("--radii", c.radii, "t grid for the Monte Carlo subcommands");
  app.add_option("--n-max", c.n_max, "largest n for hyp62")->capture_default_str();
  app.add_option("--rho", c.rho, "small-ball range factor")->capture_default_str();
  app.add_option("--t-grid-size", c.t_grid_size, "t grid size")->capture_default_str();

  for (const auto& s : kSubcommands) app.add_subcommand(s.name, s.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kHolds;
  } catch (const CLI::ParseError& e) {
    err << "minmax_hyper: " << e.what() << "\n";
    return kUsage;
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  if (seed) {
    c.seed = *seed;
  } else if (const char* env = std::getenv("MINMAX_HYPER_SEED")) {
    try {
      c.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "minmax_hyper: MINMAX_HYPER_SEED is not an unsigned integer\n";
      return kUsage;
    }
  }

  Outcome outcome;
  try {
    outcome = run_subcommand(c);
  } catch (const ParseError& e) {
    err << "minmax_hyper: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "minmax_hyper: " << e.what() << "\n";
    return kUsage;
  } catch (const NotPositiveSemidefinite& e) {
    err << "minmax_hyper: " << e.what() << "\n";
    return kUsage;
  } catch (const InfiniteMoment& e) {
    return report_error(c, e, kFails, out);
  } catch (const NoFiniteD& e) {
    return report_error(c, e, kFails, out);
  } catch (const RescaleFailed& e) {
    return report_error(c, e, kFails, out);
  } catch (const NotSubregular& e) {
    return report_error(c, e, kFails, out);
  } catch (const Error& e) {
    // HypothesisFailed, NonConvergent, GridTooCoarse.
    return report_error(c, e, kInconclusive, out);
  }

  const nlohmann::json rep = envelope(c, outcome);
  const std::string body = c.format == "text" ? render_text(rep) : rep.dump(2) + "\n";
  if (c.out.empty()) {
    out << body;
  } else {
    std::ofstream f(c.out);
    if (!f) {
      err << "minmax_hyper: cannot write " << c.out << "\n";
      return kUsage;
    }
    f << body;
  }
  return outcome.exit_code;
}

}  // namespace mmh::cli
