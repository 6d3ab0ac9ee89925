#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pinball/billiard.hpp"

namespace pinball::verify {

struct CheckResult {
    std::string id;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// "PASS [id] name: detail" / "FAIL [id] ...".
std::string format_line(const CheckResult& r);

inline constexpr int kCriterionCount = 10;
inline constexpr std::uint64_t kAcceptanceSeed = 1;

// Tolerances, pinned.
inline constexpr double kGapMargin = 1e-9;
inline constexpr double kConjugacyTol = 1e-6;
inline constexpr double kPeriod3Residual = 1e-10;
inline constexpr double kDeterminantTol = 1e-10;
inline constexpr double kWordResidual = 1e-8;
inline constexpr double kWordAngleTol = 1e-12;
inline constexpr double kAlphaZeroTol = 1e-15;
inline constexpr double kEllTol = 1e-12;
inline constexpr double kFreqTol = 0.01;
inline constexpr double kBinRatio = 20.0;
inline constexpr double kFdStep = 1e-7;
inline constexpr double kFdRelTol = 1e-5;
inline constexpr double kFdSingularMargin = 1e-3;

/// Criterion `id` in 1..10. `scratch_dir` receives temporary CLI output for
/// the determinism check and is cleaned up afterwards.
CheckResult run_criterion(int id, const std::string& scratch_dir);

std::vector<CheckResult> run_acceptance(const std::string& scratch_dir);

/// Checks that make sense at one lambda: strip invariance, gap or forbidden
/// region avoidance, period-3 closure and hyperbolicity, the Jacobian, and
/// the homoclinic and component verdicts at the parameters where they are known.
std::vector<CheckResult> run_lambda_checks(double lambda, std::uint64_t seed);

/// Strip, gap (lambda < 1/3) and forbidden-region (1/3 < lambda < 2/3)
/// avoidance for an externally produced point set.
std::vector<CheckResult> check_points(const std::vector<PhasePoint>& points, double lambda);

/// Circular distance on the arc-length circle [0, 3).
double arc_distance(double a, double b);

} // namespace pinball::verify
