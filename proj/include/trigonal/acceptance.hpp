#pragma once

// The end-to-end acceptance suite: sigma expansion, exact and series identity checks at
// the bottom of the weight grading, and the numeric pipeline on one nonsingular curve.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "trigonal/curve.hpp"

namespace trigonal {

struct CriterionResult {
  int number = 0;
  std::string title;
  bool pass = false;
  double seconds = 0;
  double time_limit = 0;  // seconds; exceeding it fails the criterion
  nlohmann::json details = nlohmann::json::object();
};

struct AcceptanceOptions {
  TrigonalCurve numeric_curve = TrigonalCurve::trigonal(0, 0, 0, -1);
  int sigma_cutoff = 20;
  std::uint64_t seed = 1;
  int samples = 10;
  double numeric_tol = 1e-5;
  double calibration_tol = 1e-6;
  double period_tol = 1e-8;
  double c_formula_tol = 1e-4;
  std::vector<int> only;  // criterion numbers to run; empty runs all
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o = {});

nlohmann::json to_json(const CriterionResult& r);

}  // namespace trigonal
