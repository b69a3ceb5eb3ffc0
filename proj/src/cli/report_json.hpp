#pragma once

#include <string>

#include <json.hpp>

#include "minmax/cli.hpp"
#include "minmax/comparison.hpp"
#include "minmax/gauss_stable.hpp"
#include "minmax/hyper.hpp"

namespace mmh::cli {

nlohmann::json to_json(const Witness& w);
nlohmann::json to_json(const ConditionResult& c);
nlohmann::json to_json(const HyperConstant& c);
nlohmann::json to_json(const ComparisonVerdict& v);
nlohmann::json to_json(const Proportion& p);
nlohmann::json to_json(const BoundRow& r);
nlohmann::json to_json(const Eigen::VectorXd& v);

/// One assertion entry: {"id", "statement", "verdict", "asserted"}.
nlohmann::json assertion(const std::string& id, const std::string& statement, Verdict verdict, bool asserted = true);

/// 0 when every asserted entry holds, 1 on any failure, 2 on any inconclusive.
int exit_code_for(const nlohmann::json& assertions);

}  // namespace mmh::cli
